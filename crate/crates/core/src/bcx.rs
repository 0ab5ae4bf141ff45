//! The BCX textual format for complexes.
//!
//! ```text
//! bcx 1 koszul-left
//! meta name xab(0,1,2,3)
//! meta n 3/4
//! generator t tower 0
//! generator x1 free 1
//! diff t x1 1
//! # comment lines start with '#'
//! ```
//!
//! The header carries the format version and the sign convention tag
//! (`koszul-left`: smash differentials use `(-1)^{deg g}` on left factors).
//! Serialization is canonical: generators in declaration order, entries
//! sorted by (source, target) declaration position, metadata keys sorted, so
//! `parse(serialize(c)) == c`. Parity/positivity and the free-to-tower
//! prohibition are rejected at parse time with line numbers; the remaining
//! admissibility rules run afterwards unless the document is marked as a
//! wedge fragment.

use crate::tcomplex::{implied_u_power, Complex, DiffEntry, GenKind, Generator};
use crate::EngineError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

pub const FORMAT_VERSION: u32 = 1;
pub const SIGN_CONVENTION: &str = "koszul-left";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BcxMetadata {
    pub name: Option<String>,
    /// formal desuspension, exact rational
    pub desuspension: Option<BigRational>,
    pub fragment: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BcxDocument {
    pub complex: Complex,
    pub meta: BcxMetadata,
}

fn parse_err(line: usize, msg: impl Into<String>) -> EngineError {
    EngineError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num = BigInt::from_str(num).ok()?;
            let den = BigInt::from_str(den).ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(num, den))
            }
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_bcx(text: &str) -> Result<BcxDocument, EngineError> {
    let mut gens: Vec<Generator> = Vec::new();
    let mut by_id: BTreeMap<String, usize> = BTreeMap::new();
    let mut diff: Vec<DiffEntry> = Vec::new();
    let mut meta = BcxMetadata::default();
    let mut seen_header = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !seen_header {
            if tokens[0] != "bcx" {
                return Err(parse_err(lineno, "expected header line `bcx 1 <convention>`"));
            }
            if tokens.len() < 2 || tokens[1] != "1" {
                return Err(parse_err(lineno, "unsupported format version"));
            }
            seen_header = true;
            continue;
        }
        match tokens[0] {
            "generator" => {
                if tokens.len() != 4 {
                    return Err(parse_err(
                        lineno,
                        "expected `generator <id> <tower|free> <degree>`",
                    ));
                }
                let id = tokens[1].to_string();
                let kind = match tokens[2] {
                    "tower" => GenKind::Tower,
                    "free" => GenKind::Free,
                    other => return Err(parse_err(lineno, format!("unknown kind `{other}`"))),
                };
                let degree: i64 = tokens[3]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad degree `{}`", tokens[3])))?;
                if by_id.insert(id.clone(), gens.len()).is_some() {
                    return Err(parse_err(lineno, format!("duplicate id `{id}`")));
                }
                gens.push(Generator { id, kind, degree });
            }
            "diff" => {
                if tokens.len() != 4 {
                    return Err(parse_err(lineno, "expected `diff <src> <dst> <coeff>`"));
                }
                let src = *by_id.get(tokens[1]).ok_or_else(|| {
                    parse_err(lineno, format!("unknown generator `{}`", tokens[1]))
                })?;
                let dst = *by_id.get(tokens[2]).ok_or_else(|| {
                    parse_err(lineno, format!("unknown generator `{}`", tokens[2]))
                })?;
                let coeff = BigInt::from_str(tokens[3])
                    .map_err(|_| parse_err(lineno, format!("bad coefficient `{}`", tokens[3])))?;
                if coeff.is_zero() {
                    return Err(parse_err(lineno, "zero coefficient"));
                }
                let (s, t) = (&gens[src], &gens[dst]);
                let j = implied_u_power(s.degree, t.degree);
                if j.is_none() {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "parity/positivity violation: {} (degree {}) -> {} (degree {})",
                            s.id, s.degree, t.id, t.degree
                        ),
                    ));
                }
                if s.kind == GenKind::Free && t.kind == GenKind::Tower {
                    return Err(parse_err(
                        lineno,
                        format!("free-to-tower forbidden: {} -> {}", s.id, t.id),
                    ));
                }
                if s.kind == GenKind::Tower && t.kind == GenKind::Tower && j != Some(0) {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "tower-to-tower entry {} -> {} must have u-power 0",
                            s.id, t.id
                        ),
                    ));
                }
                diff.push(DiffEntry {
                    source: s.id.clone(),
                    target: t.id.clone(),
                    coeff,
                });
            }
            "meta" => {
                if tokens.len() < 3 {
                    return Err(parse_err(lineno, "expected `meta <key> <value>`"));
                }
                let value = tokens[2..].join(" ");
                match tokens[1] {
                    "name" => meta.name = Some(value),
                    "n" => {
                        meta.desuspension = Some(
                            parse_rational(&value)
                                .ok_or_else(|| parse_err(lineno, format!("bad rational `{value}`")))?,
                        )
                    }
                    "fragment" => meta.fragment = value == "1" || value == "true",
                    other => return Err(parse_err(lineno, format!("unknown meta key `{other}`"))),
                }
            }
            other => return Err(parse_err(lineno, format!("unknown directive `{other}`"))),
        }
    }
    if !seen_header {
        return Err(parse_err(0, "empty document: missing `bcx` header"));
    }
    let complex = Complex::from_parts(gens, diff, meta.fragment)?;
    complex.require_admissible()?;
    Ok(BcxDocument { complex, meta })
}

pub fn serialize_bcx(c: &Complex, meta: &BcxMetadata) -> String {
    let mut out = String::new();
    writeln!(out, "bcx {FORMAT_VERSION} {SIGN_CONVENTION}").unwrap();
    if meta.fragment || c.is_fragment() {
        writeln!(out, "meta fragment 1").unwrap();
    }
    if let Some(n) = &meta.desuspension {
        writeln!(out, "meta n {}", format_rational(n)).unwrap();
    }
    if let Some(name) = &meta.name {
        writeln!(out, "meta name {name}").unwrap();
    }
    for g in c.generators() {
        let kind = match g.kind {
            GenKind::Tower => "tower",
            GenKind::Free => "free",
        };
        writeln!(out, "generator {} {} {}", g.id, kind, g.degree).unwrap();
    }
    for e in c.diff_entries() {
        writeln!(out, "diff {} {} {}", e.source, e.target, e.coeff).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hinv::prime_profile;
    use crate::tcomplex::{sphere, xab};

    #[test]
    fn sphere_0_0_round_trips() {
        let text = "bcx 1 koszul-left\ngenerator t tower 0\n";
        let doc = parse_bcx(text).unwrap();
        assert_eq!(doc.complex, sphere(0, 0));
        let again = parse_bcx(&serialize_bcx(&doc.complex, &doc.meta)).unwrap();
        assert_eq!(again.complex, doc.complex);
    }

    #[test]
    fn free_to_tower_rejected_at_parse() {
        let text = "bcx 1 koszul-left\ngenerator t tower 2\ngenerator x free 1\ndiff x t 1\n";
        let err = parse_bcx(text).unwrap_err();
        match err {
            EngineError::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("free-to-tower forbidden"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parity_rejected_at_parse_with_pair() {
        let text = "bcx 1 koszul-left\ngenerator t tower 0\ngenerator x free 2\ndiff t x 1\n";
        let err = parse_bcx(text).unwrap_err();
        match err {
            EngineError::Parse { msg, .. } => assert!(msg.contains('t') && msg.contains('x')),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_rejected() {
        let text = "bcx 1 koszul-left\ngenerator t tower 0\ngenerator t tower 2\n";
        assert!(matches!(
            parse_bcx(text),
            Err(EngineError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn xab_round_trip_preserves_report() {
        let c = xab(0, 1, 2, 3).unwrap();
        let meta = BcxMetadata {
            name: Some("xab(0,1,2,3)".to_string()),
            desuspension: Some(BigRational::new(BigInt::from(3), BigInt::from(4))),
            fragment: false,
        };
        let text = serialize_bcx(&c, &meta);
        let doc = parse_bcx(&text).unwrap();
        assert_eq!(doc.complex, c);
        assert_eq!(doc.meta, meta);
        assert_eq!(
            prime_profile(&doc.complex).unwrap(),
            prime_profile(&c).unwrap()
        );
        // canonical: serialize . parse . serialize is stable
        assert_eq!(serialize_bcx(&doc.complex, &doc.meta), text);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(
            parse_rational("3/4"),
            Some(BigRational::new(BigInt::from(3), BigInt::from(4)))
        );
        assert_eq!(
            parse_rational("-2"),
            Some(BigRational::from_integer(BigInt::from(-2)))
        );
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
