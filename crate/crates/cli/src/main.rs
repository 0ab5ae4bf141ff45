//! `borelh` — exact Borel cohomology and h-invariants for semi-free
//! circle-equivariant complexes presented in the BCX format.

mod expr;
mod report;
mod suites;

use borelh::bcx::{parse_bcx, parse_rational, serialize_bcx, BcxDocument, BcxMetadata};
use borelh::hinv::manifold_report;
use borelh::tcomplex::{attach_free_cell, smash, sphere, wedge, AttachmentCochain, Complex};
use borelh::EngineError;
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "borelh",
    about = "Borel cohomology, restriction maps, and h-invariants of semi-free circle-equivariant complexes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a construction expression to a BCX file
    Build {
        /// e.g. "xab(0,1,2,3)" or "smash(sphere(0,1), xab(0,1,2,5))"
        expr: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// name recorded in the BCX metadata (defaults to the expression)
        #[arg(long)]
        name: Option<String>,
    },
    /// Per-degree cohomology groups of a BCX complex
    Cohomology {
        file: PathBuf,
        /// z, q, or f:<p>
        #[arg(long, default_value = "z")]
        ring: String,
        /// extend the printed range past the guaranteed bound
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Weak/strong h-invariants, prime profile, exceptional primes
    Hinv {
        file: PathBuf,
        /// restrict to one ring (z, q, f:<p>)
        #[arg(long)]
        ring: Option<String>,
        /// manifold-level report with formal desuspension, e.g. n=3/4
        #[arg(long)]
        manifold: Option<String>,
    },
    /// Smash product of two BCX complexes
    Smash {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Wedge sum of two BCX complexes
    Wedge {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Smash with sphere(l, m)
    Suspend {
        file: PathBuf,
        l: u32,
        m: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Attach a free cell: --dim n --cell id=c,id=c,...
    Attach {
        file: PathBuf,
        #[arg(long)]
        dim: i64,
        #[arg(long, default_value = "")]
        cell: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Dualize and report homological h-invariants and duality checks
    Dual { file: PathBuf },
    /// Run property suites; exits nonzero on any FAIL
    Verify {
        /// comma-separated list (default: all suites)
        #[arg(long)]
        suite: Option<String>,
        /// additionally check these BCX files
        files: Vec<PathBuf>,
    },
}

fn load(path: &Path) -> Result<BcxDocument, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|e| EngineError::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_bcx(&text)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), EngineError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| EngineError::Parse {
            line: 0,
            msg: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_complex(
    c: &Complex,
    name: Option<String>,
    output: Option<&Path>,
) -> Result<(), EngineError> {
    let meta = BcxMetadata {
        name,
        desuspension: None,
        fragment: c.is_fragment(),
    };
    emit(&serialize_bcx(c, &meta), output)
}

fn parse_cells(spec: &str) -> Result<BTreeMap<String, BigInt>, EngineError> {
    let mut out = BTreeMap::new();
    for part in spec.split(',').filter(|s| !s.is_empty()) {
        let (id, v) = part.split_once('=').ok_or_else(|| EngineError::Parse {
            line: 0,
            msg: format!("bad cell coefficient `{part}` (use id=c)"),
        })?;
        let v: i64 = v.parse().map_err(|_| EngineError::Parse {
            line: 0,
            msg: format!("bad coefficient `{v}`"),
        })?;
        if v != 0 {
            out.insert(id.to_string(), BigInt::from(v));
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool, EngineError> {
    match cli.command {
        Command::Build { expr, output, name } => {
            let c = expr::parse_expr(&expr)?;
            emit_complex(&c, Some(name.unwrap_or(expr)), output.as_deref())?;
        }
        Command::Cohomology {
            file,
            ring,
            max_degree,
        } => {
            let doc = load(&file)?;
            let ring = report::parse_ring(&ring)?;
            let text = report::render_cohomology(&doc.complex, ring, max_degree)?;
            print!("{text}");
        }
        Command::Hinv {
            file,
            ring,
            manifold,
        } => {
            let doc = load(&file)?;
            match manifold {
                Some(spec) => {
                    let value = spec.strip_prefix("n=").unwrap_or(&spec);
                    let n = parse_rational(value).ok_or_else(|| EngineError::Parse {
                        line: 0,
                        msg: format!("bad rational `{value}` (use n=p/q)"),
                    })?;
                    let r = manifold_report(&doc.complex, &n)?;
                    print!("{}", report::render_manifold(&r));
                }
                None => {
                    let ring = ring.map(|r| report::parse_ring(&r)).transpose()?;
                    let text = report::render_hinv(&doc.complex, doc.meta.name.as_deref(), ring)?;
                    print!("{text}");
                }
            }
        }
        Command::Smash { a, b, output } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let c = smash(&da.complex, &db.complex)?;
            emit_complex(&c, combined_name("smash", &da, &db), output.as_deref())?;
        }
        Command::Wedge { a, b, output } => {
            let (da, db) = (load(&a)?, load(&b)?);
            let c = wedge(&da.complex, &db.complex)?;
            emit_complex(&c, combined_name("wedge", &da, &db), output.as_deref())?;
        }
        Command::Suspend { file, l, m, output } => {
            let doc = load(&file)?;
            let c = smash(&doc.complex, &sphere(l, m))?;
            let name = doc
                .meta
                .name
                .map(|n| format!("suspend({n},{l},{m})"));
            emit_complex(&c, name, output.as_deref())?;
        }
        Command::Attach {
            file,
            dim,
            cell,
            output,
        } => {
            let doc = load(&file)?;
            let att = AttachmentCochain {
                dim,
                coefficients: parse_cells(&cell)?,
            };
            let c = attach_free_cell(&doc.complex, &att)?;
            let name = doc.meta.name.map(|n| format!("attach({n},{dim},{cell})"));
            emit_complex(&c, name, output.as_deref())?;
        }
        Command::Dual { file } => {
            let doc = load(&file)?;
            print!("{}", report::render_dual(&doc.complex)?);
        }
        Command::Verify { suite, files } => {
            let names: Vec<String> = match suite {
                Some(list) => list.split(',').map(str::to_string).collect(),
                None => suites::ALL_SUITES.iter().map(|s| s.to_string()).collect(),
            };
            let mut result = suites::run_suites(&names)?;
            for file in files {
                let doc = load(&file)?;
                let extra = suites::run_on_complex(&doc.complex)?;
                result.lines.push_str(&extra.lines);
                result.failures += extra.failures;
            }
            print!("{}", result.lines);
            if result.failures > 0 {
                println!("FAIL\t{} check(s) failed", result.failures);
                return Ok(false);
            }
            println!("PASS\tall checks passed");
        }
    }
    Ok(true)
}

fn combined_name(op: &str, a: &BcxDocument, b: &BcxDocument) -> Option<String> {
    match (&a.meta.name, &b.meta.name) {
        (Some(x), Some(y)) => Some(format!("{op}({x},{y})")),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
