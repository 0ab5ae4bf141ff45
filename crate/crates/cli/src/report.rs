//! Deterministic tab-separated report rendering.

use borelh::bcx::format_rational;
use borelh::cohomology::{cohomology_at, stabilization_bound};
use borelh::dual::{duality_check, homological_h};
use borelh::exactalg::CoeffRing;
use borelh::hinv::{h_invariants, prime_profile, HReport, ManifoldReport};
use borelh::tcomplex::Complex;
use borelh::EngineError;
use std::fmt::Write as _;

fn flag(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn render_cohomology(
    c: &Complex,
    ring: CoeffRing,
    max_degree: Option<i64>,
) -> Result<String, EngineError> {
    let bound = stabilization_bound(c) + 2;
    let cap = match max_degree {
        Some(cap) if cap < bound => {
            return Err(EngineError::ScanCap {
                given: cap,
                bound,
            })
        }
        Some(cap) => cap,
        None => bound,
    };
    let mut out = String::new();
    writeln!(out, "ring\t{ring}").unwrap();
    writeln!(out, "degree\tgroup").unwrap();
    for n in c.min_degree()..=cap {
        let g = cohomology_at(c, n, ring)?;
        writeln!(out, "{n}\t{g}").unwrap();
    }
    Ok(out)
}

pub fn render_hreport(name: Option<&str>, r: &HReport) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        writeln!(out, "name\t{name}").unwrap();
    }
    writeln!(out, "ell\t{}", r.ell).unwrap();
    writeln!(out, "d_max\t{}", r.d_max).unwrap();
    writeln!(out, "ring\th_weak\th_strong").unwrap();
    writeln!(out, "z\t{}\t{}", r.z.0, r.z.1).unwrap();
    writeln!(out, "q\t{}\t{}", r.q.0, r.q.1).unwrap();
    for (p, h) in &r.profile {
        writeln!(out, "f:{p}\t{h}\t{h}").unwrap();
    }
    writeln!(out, "h0\t{}", r.h0).unwrap();
    let primes: Vec<String> = r.exceptional_primes.iter().map(u64::to_string).collect();
    writeln!(out, "exceptional_primes\t{{{}}}", primes.join(",")).unwrap();
    writeln!(out, "jump_order\t{}", r.jump_order).unwrap();
    writeln!(out, "flag\tweak_equals_h0\t{}", flag(r.flags.weak_equals_h0)).unwrap();
    writeln!(
        out,
        "flag\tstrong_equals_max_profile\t{}",
        flag(r.flags.strong_equals_max_profile)
    )
    .unwrap();
    writeln!(
        out,
        "flag\tjump_divisors_necessary\t{}",
        flag(r.flags.jump_divisors_necessary)
    )
    .unwrap();
    writeln!(
        out,
        "flag\tjump_divisors_biconditional\t{}",
        flag(r.flags.jump_divisors_biconditional)
    )
    .unwrap();
    out
}

pub fn render_hinv(
    c: &Complex,
    name: Option<&str>,
    ring: Option<CoeffRing>,
) -> Result<String, EngineError> {
    match ring {
        Some(ring) => {
            let (w, s) = h_invariants(c, ring)?;
            let mut out = String::new();
            writeln!(out, "ring\th_weak\th_strong").unwrap();
            writeln!(out, "{ring}\t{w}\t{s}").unwrap();
            Ok(out)
        }
        None => Ok(render_hreport(name, &prime_profile(c)?)),
    }
}

pub fn render_manifold(r: &ManifoldReport) -> String {
    let mut out = String::new();
    writeln!(out, "manifold_n\t{}", format_rational(&r.n)).unwrap();
    writeln!(out, "ring\th_weak\th_strong").unwrap();
    writeln!(
        out,
        "z\t{}\t{}",
        format_rational(&r.z.0),
        format_rational(&r.z.1)
    )
    .unwrap();
    writeln!(
        out,
        "q\t{}\t{}",
        format_rational(&r.q.0),
        format_rational(&r.q.1)
    )
    .unwrap();
    for (p, h) in &r.profile {
        writeln!(out, "f:{p}\t{}\t{}", format_rational(h), format_rational(h)).unwrap();
    }
    writeln!(out, "d\t{}", format_rational(&r.d_invariant)).unwrap();
    writeln!(out, "fr\t{}", format_rational(&r.froyshov_f2)).unwrap();
    writeln!(out, "h_km\t{}", format_rational(&r.h_km)).unwrap();
    out
}

pub fn render_dual(c: &Complex) -> Result<String, EngineError> {
    let r = duality_check(c)?;
    let mut out = String::new();
    writeln!(out, "ring\th_coh\th_hom\tmatch").unwrap();
    for row in &r.fields {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            row.ring,
            row.cohomological,
            row.homological,
            flag(row.pass)
        )
        .unwrap();
    }
    let (zw, zs) = r.z_cohomological;
    let (hw, hs) = r.z_homological;
    writeln!(
        out,
        "z_chain\t{hs} <= {hw} = {zw} <= {zs}\t{}",
        flag(r.chain_pass)
    )
    .unwrap();
    let (w, s) = homological_h(c, CoeffRing::Z)?;
    writeln!(out, "z_homological\t{w}\t{s}").unwrap();
    writeln!(
        out,
        "observed\tstrong_hom={}\tmin_profile={}\t{}",
        hs,
        r.min_profile,
        if r.strong_hom_equals_min_profile {
            "agree"
        } else {
            "differ"
        }
    )
    .unwrap();
    let _ = (w, s);
    Ok(out)
}

pub fn parse_ring(s: &str) -> Result<CoeffRing, EngineError> {
    match s {
        "z" => Ok(CoeffRing::Z),
        "q" => Ok(CoeffRing::Q),
        _ => {
            if let Some(p) = s.strip_prefix("f:") {
                let p: u64 = p
                    .parse()
                    .map_err(|_| EngineError::InvalidRing(format!("bad prime `{p}`")))?;
                let ring = CoeffRing::F(p);
                ring.check()?;
                Ok(ring)
            } else {
                Err(EngineError::InvalidRing(format!(
                    "unknown ring `{s}` (use z, q, or f:<p>)"
                )))
            }
        }
    }
}
