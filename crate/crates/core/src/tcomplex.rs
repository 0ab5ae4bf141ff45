//! The data model for semi-free circle-equivariant complexes.
//!
//! A complex is a finite free graded `Z[u]`-module (`u` of degree 2) on
//! generators of two kinds. *Tower* generators span the fixed sphere; *Free*
//! generators model free orbit cells. A differential entry `source -> target`
//! carries an integer coefficient and an implied `u`-power
//! `j = (deg(source) + 1 - deg(target)) / 2`, which must be a non-negative
//! integer. Tower-to-tower entries must have `j = 0`, and free-to-tower
//! entries are forbidden, so the free generators span a subcomplex and the
//! tower generators a quotient complex.
//!
//! Admissibility (see [`Complex::validate`]) requires `delta^2 = 0`, a fixed
//! subcomplex with reduced integral cohomology `Z` in exactly one degree
//! `ell`, and a free subcomplex whose integral cohomology vanishes in degrees
//! `d_max + 1` and `d_max + 2`; by 2-periodicity above the top generator this
//! forces the free part to be `u`-torsion.

use crate::exactalg::{rank, smith_normal_form, CoeffRing, IntMatrix};
use crate::EngineError;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Tower,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub id: String,
    pub kind: GenKind,
    pub degree: i64,
}

/// Differential entry in id form, as stored in BCX files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffEntry {
    pub source: String,
    pub target: String,
    pub coeff: BigInt,
}

/// Internal index form of a differential entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Entry {
    pub source: usize,
    pub target: usize,
    pub coeff: BigInt,
}

/// Implied u-power of an entry between two generators, if legal as a degree
/// +1 map.
pub fn implied_u_power(source_degree: i64, target_degree: i64) -> Option<i64> {
    let twice = source_degree + 1 - target_degree;
    if twice >= 0 && twice % 2 == 0 {
        Some(twice / 2)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroCoefficient { source: String, target: String },
    ParityViolation { source: String, target: String },
    TowerTowerUPower { source: String, target: String },
    FreeToTower { source: String, target: String },
    DeltaSquared { source: String, target: String },
    FixedSphere { detail: String },
    FreeTail { degree: i64, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroCoefficient { source, target } => {
                write!(f, "zero coefficient on entry {source} -> {target}")
            }
            Violation::ParityViolation { source, target } => write!(
                f,
                "parity/positivity violation: implied u-power of {source} -> {target} is not a non-negative integer"
            ),
            Violation::TowerTowerUPower { source, target } => write!(
                f,
                "tower-to-tower entry {source} -> {target} must have u-power 0"
            ),
            Violation::FreeToTower { source, target } => {
                write!(f, "free-to-tower forbidden: {source} -> {target}")
            }
            Violation::DeltaSquared { source, target } => {
                write!(f, "delta^2 != 0: nonzero component {source} -> {target}")
            }
            Violation::FixedSphere { detail } => {
                write!(f, "fixed subcomplex is not a sphere: {detail}")
            }
            Violation::FreeTail { degree, detail } => write!(
                f,
                "free subcomplex cohomology does not vanish in degree {degree}: {detail}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub ell: Option<i64>,
    pub d_max: Option<i64>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "admissible")
        } else {
            for v in &self.violations {
                writeln!(f, "- {v}")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug)]
pub struct Complex {
    gens: Vec<Generator>,
    entries: Vec<Entry>,
    fragment: bool,
    cache: OnceLock<ValidationReport>,
}

impl Clone for Complex {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(r) = self.cache.get() {
            let _ = cache.set(r.clone());
        }
        Complex {
            gens: self.gens.clone(),
            entries: self.entries.clone(),
            fragment: self.fragment,
            cache,
        }
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.entries == other.entries && self.fragment == other.fragment
    }
}
impl Eq for Complex {}

impl Complex {
    /// Build a complex from id-form data. Fails on duplicate or unknown ids;
    /// all other rules are reported by [`Complex::validate`].
    pub fn from_parts(
        gens: Vec<Generator>,
        diff: Vec<DiffEntry>,
        fragment: bool,
    ) -> Result<Complex, EngineError> {
        let mut by_id: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if by_id.insert(&g.id, i).is_some() {
                return Err(EngineError::Validation(format!(
                    "duplicate generator id `{}`",
                    g.id
                )));
            }
        }
        let mut entries = Vec::with_capacity(diff.len());
        let mut seen = BTreeSet::new();
        for e in &diff {
            let source = *by_id.get(e.source.as_str()).ok_or_else(|| {
                EngineError::Validation(format!("unknown generator id `{}`", e.source))
            })?;
            let target = *by_id.get(e.target.as_str()).ok_or_else(|| {
                EngineError::Validation(format!("unknown generator id `{}`", e.target))
            })?;
            if !seen.insert((source, target)) {
                return Err(EngineError::Validation(format!(
                    "duplicate differential entry {} -> {}",
                    e.source, e.target
                )));
            }
            entries.push(Entry {
                source,
                target,
                coeff: e.coeff.clone(),
            });
        }
        Ok(Complex::from_indexed(gens, entries, fragment))
    }

    pub(crate) fn from_indexed(gens: Vec<Generator>, mut entries: Vec<Entry>, fragment: bool) -> Complex {
        entries.sort_by_key(|e| (e.source, e.target));
        Complex {
            gens,
            entries,
            fragment,
            cache: OnceLock::new(),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn diff_entries(&self) -> Vec<DiffEntry> {
        self.entries
            .iter()
            .map(|e| DiffEntry {
                source: self.gens[e.source].id.clone(),
                target: self.gens[e.target].id.clone(),
                coeff: e.coeff.clone(),
            })
            .collect()
    }

    pub(crate) fn raw_entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_fragment(&self) -> bool {
        self.fragment
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Maximum generator degree (0 for the empty complex).
    pub fn d_max(&self) -> i64 {
        self.gens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> i64 {
        self.gens.iter().map(|g| g.degree).min().unwrap_or(0)
    }

    /// Fixed-sphere degree, available once validation has run and succeeded
    /// on the fixed part.
    pub fn ell(&self) -> Option<i64> {
        self.validate().ell
    }

    /// Tower generators with their tower-to-tower entries; the quotient
    /// complex modelling the fixed sphere.
    pub fn fixed_part(&self) -> Complex {
        self.sub_part(GenKind::Tower, false)
    }

    /// Free generators with their entries; a subcomplex by the free-to-tower
    /// prohibition.
    pub fn free_part(&self) -> Complex {
        self.sub_part(GenKind::Free, true)
    }

    fn sub_part(&self, kind: GenKind, fragment: bool) -> Complex {
        let mut keep = vec![usize::MAX; self.gens.len()];
        let mut gens = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if g.kind == kind {
                keep[i] = gens.len();
                gens.push(g.clone());
            }
        }
        let entries = self
            .entries
            .iter()
            .filter(|e| keep[e.source] != usize::MAX && keep[e.target] != usize::MAX)
            .map(|e| Entry {
                source: keep[e.source],
                target: keep[e.target],
                coeff: e.coeff.clone(),
            })
            .collect();
        Complex::from_indexed(gens, entries, fragment)
    }

    pub fn validate(&self) -> &ValidationReport {
        self.cache.get_or_init(|| self.compute_validation())
    }

    pub fn require_admissible(&self) -> Result<(), EngineError> {
        let r = self.validate();
        if r.is_admissible() {
            Ok(())
        } else {
            Err(EngineError::Validation(r.to_string()))
        }
    }

    fn compute_validation(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let d_max = if self.gens.is_empty() {
            None
        } else {
            Some(self.d_max())
        };

        // entry-level rules
        let mut entries_clean = true;
        for e in &self.entries {
            let s = &self.gens[e.source];
            let t = &self.gens[e.target];
            if e.coeff.is_zero() {
                violations.push(Violation::ZeroCoefficient {
                    source: s.id.clone(),
                    target: t.id.clone(),
                });
                entries_clean = false;
            }
            match implied_u_power(s.degree, t.degree) {
                None => {
                    violations.push(Violation::ParityViolation {
                        source: s.id.clone(),
                        target: t.id.clone(),
                    });
                    entries_clean = false;
                }
                Some(j) => {
                    if s.kind == GenKind::Tower && t.kind == GenKind::Tower && j != 0 {
                        violations.push(Violation::TowerTowerUPower {
                            source: s.id.clone(),
                            target: t.id.clone(),
                        });
                        entries_clean = false;
                    }
                }
            }
            if s.kind == GenKind::Free && t.kind == GenKind::Tower {
                violations.push(Violation::FreeToTower {
                    source: s.id.clone(),
                    target: t.id.clone(),
                });
                entries_clean = false;
            }
        }

        if !entries_clean {
            return ValidationReport {
                violations,
                ell: None,
                d_max,
            };
        }

        // delta^2 = 0: per source generator, sum coefficient products into
        // each second-step target (u-powers are implied and homogeneous).
        let mut outgoing: Vec<Vec<&Entry>> = vec![Vec::new(); self.gens.len()];
        for e in &self.entries {
            outgoing[e.source].push(e);
        }
        for (gi, g) in self.gens.iter().enumerate() {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for e1 in &outgoing[gi] {
                for e2 in &outgoing[e1.target] {
                    *acc.entry(e2.target).or_insert_with(BigInt::zero) += &e1.coeff * &e2.coeff;
                }
            }
            for (ti, v) in acc {
                if !v.is_zero() {
                    violations.push(Violation::DeltaSquared {
                        source: g.id.clone(),
                        target: self.gens[ti].id.clone(),
                    });
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport {
                violations,
                ell: None,
                d_max,
            };
        }

        // fixed subcomplex: reduced integral cohomology Z in exactly one degree
        let ell = match self.fixed_sphere_degree() {
            Ok(ell) => ell,
            Err(detail) => {
                if !self.fragment {
                    violations.push(Violation::FixedSphere { detail });
                }
                None
            }
        };

        // free subcomplex: integral cohomology 0 in degrees d_max+1, d_max+2
        if let Some(d) = d_max {
            let free = self.free_part();
            for n in [d + 1, d + 2] {
                let (rank, torsion) = free.z_group_raw(n);
                if rank != 0 || !torsion.is_empty() {
                    violations.push(Violation::FreeTail {
                        degree: n,
                        detail: format!("free rank {rank}, torsion {torsion:?}"),
                    });
                }
            }
        }

        ValidationReport {
            violations,
            ell,
            d_max,
        }
    }

    /// Reduced integral cohomology of the fixed *integer* complex (tower
    /// generators, no u): must be Z concentrated in exactly one degree.
    fn fixed_sphere_degree(&self) -> Result<Option<i64>, String> {
        let towers: Vec<usize> = (0..self.gens.len())
            .filter(|&i| self.gens[i].kind == GenKind::Tower)
            .collect();
        if towers.is_empty() {
            return Err("no tower generators".to_string());
        }
        let degrees: BTreeSet<i64> = towers.iter().map(|&i| self.gens[i].degree).collect();
        let lo = *degrees.first().unwrap();
        let hi = *degrees.last().unwrap();
        let basis_at = |n: i64| -> Vec<usize> {
            towers
                .iter()
                .copied()
                .filter(|&i| self.gens[i].degree == n)
                .collect()
        };
        // matrix of the tower differential from degree n to n+1
        let mat_at = |n: i64| -> IntMatrix {
            let src = basis_at(n);
            let tgt = basis_at(n + 1);
            let mut m = IntMatrix::zeros(tgt.len(), src.len());
            for e in &self.entries {
                if self.gens[e.source].kind != GenKind::Tower
                    || self.gens[e.target].kind != GenKind::Tower
                {
                    continue;
                }
                if self.gens[e.source].degree == n {
                    let col = src.iter().position(|&i| i == e.source).unwrap();
                    let row = tgt.iter().position(|&i| i == e.target).unwrap();
                    *m.at_mut(row, col) += &e.coeff;
                }
            }
            m
        };
        let mut sphere_at = None;
        for n in lo..=hi {
            let dim = basis_at(n).len();
            let out = mat_at(n);
            let inc = mat_at(n - 1);
            let rank_out = rank(&out, CoeffRing::Q).expect("ring z is valid");
            let rank_in = rank(&inc, CoeffRing::Q).expect("ring z is valid");
            let free_rank = dim - rank_out - rank_in;
            let torsion: Vec<BigInt> = smith_normal_form(&inc)
                .invariant_factors
                .into_iter()
                .filter(|d| d > &BigInt::one())
                .collect();
            if !torsion.is_empty() {
                return Err(format!("torsion {torsion:?} in fixed cohomology at degree {n}"));
            }
            match free_rank {
                0 => {}
                1 => {
                    if let Some(first) = sphere_at {
                        return Err(format!(
                            "fixed cohomology is Z in more than one degree ({first} and {n})"
                        ));
                    }
                    sphere_at = Some(n);
                }
                r => return Err(format!("fixed cohomology has rank {r} in degree {n}")),
            }
        }
        match sphere_at {
            Some(n) => Ok(Some(n)),
            None => Err("fixed cohomology vanishes everywhere".to_string()),
        }
    }

    /// Monomial basis of the complex in total degree `n`: one `(generator,
    /// u-power)` pair per generator of matching parity and degree `<= n`, in
    /// declaration order.
    pub(crate) fn monomials_at(&self, n: i64) -> Vec<(usize, i64)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let twice = n - g.degree;
                if twice >= 0 && twice % 2 == 0 {
                    Some((i, twice / 2))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Matrix of the differential `B^n -> B^{n+1}` acting on column vectors
    /// (rows = monomials of degree n+1, columns = monomials of degree n).
    pub(crate) fn delta_matrix(&self, n: i64) -> IntMatrix {
        let src = self.monomials_at(n);
        let tgt = self.monomials_at(n + 1);
        let tgt_pos: BTreeMap<usize, usize> =
            tgt.iter().enumerate().map(|(p, &(g, _))| (g, p)).collect();
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        m.col_labels = src.iter().map(|&(g, j)| self.monomial_label(g, j)).collect();
        m.row_labels = tgt.iter().map(|&(g, j)| self.monomial_label(g, j)).collect();
        for (col, &(g, _)) in src.iter().enumerate() {
            for e in self.entries.iter().filter(|e| e.source == g) {
                let row = tgt_pos[&e.target];
                *m.at_mut(row, col) += &e.coeff;
            }
        }
        m
    }

    pub(crate) fn monomial_label(&self, g: usize, j: i64) -> String {
        if j == 0 {
            self.gens[g].id.clone()
        } else if j == 1 {
            format!("u*{}", self.gens[g].id)
        } else {
            format!("u^{}*{}", j, self.gens[g].id)
        }
    }

    /// Integral cohomology in degree `n` as (free rank, torsion invariant
    /// factors), with no admissibility gate. Torsion of `ker/im` equals the
    /// torsion of `coker` of the incoming matrix because kernels of integer
    /// matrices are saturated.
    pub(crate) fn z_group_raw(&self, n: i64) -> (usize, Vec<BigInt>) {
        let dim = self.monomials_at(n).len();
        let out = self.delta_matrix(n);
        let inc = self.delta_matrix(n - 1);
        let rank_out = smith_normal_form(&out).rank();
        let inc_snf = smith_normal_form(&inc);
        let free_rank = dim - rank_out - inc_snf.rank();
        let torsion = inc_snf
            .invariant_factors
            .into_iter()
            .filter(|d| d > &BigInt::one())
            .collect();
        (free_rank, torsion)
    }

    fn fresh_pair_ids(&self) -> (String, String) {
        let ids: BTreeSet<&str> = self.gens.iter().map(|g| g.id.as_str()).collect();
        let mut k = 1usize;
        loop {
            let p = format!("p{k}");
            let q = format!("q{k}");
            if !ids.contains(p.as_str()) && !ids.contains(q.as_str()) {
                return (p, q);
            }
            k += 1;
        }
    }
}

/// Reduced model of the based point: no cells at all. A wedge unit.
pub fn point() -> Complex {
    Complex::from_indexed(Vec::new(), Vec::new(), true)
}

/// Model of the representation sphere with fixed sphere `S^ell` and `h`
/// free-cell ladders: generators `t(ell)`, `x_i(ell+2i-1)`, `y_i(ell+2i)`;
/// `delta(t) = x_1`, `delta(y_i) = u x_i + x_{i+1}`, `delta(y_h) = u x_h`.
pub fn sphere(ell: u32, h: u32) -> Complex {
    let ell = ell as i64;
    let h = h as i64;
    let mut gens = vec![Generator {
        id: "t".to_string(),
        kind: GenKind::Tower,
        degree: ell,
    }];
    for i in 1..=h {
        gens.push(Generator {
            id: format!("x{i}"),
            kind: GenKind::Free,
            degree: ell + 2 * i - 1,
        });
        gens.push(Generator {
            id: format!("y{i}"),
            kind: GenKind::Free,
            degree: ell + 2 * i,
        });
    }
    let idx = |name: &str, gens: &[Generator]| gens.iter().position(|g| g.id == name).unwrap();
    let mut entries = Vec::new();
    if h >= 1 {
        entries.push(Entry {
            source: idx("t", &gens),
            target: idx("x1", &gens),
            coeff: BigInt::one(),
        });
        for i in 1..=h {
            entries.push(Entry {
                source: idx(&format!("y{i}"), &gens),
                target: idx(&format!("x{i}"), &gens),
                coeff: BigInt::one(),
            });
            if i < h {
                entries.push(Entry {
                    source: idx(&format!("y{i}"), &gens),
                    target: idx(&format!("x{}", i + 1), &gens),
                    coeff: BigInt::one(),
                });
            }
        }
    }
    Complex::from_indexed(gens, entries, false)
}

/// A single free cell pair `xf(n), yf(n+1)` with `delta(yf) = u xf`; a
/// wedge fragment with no tower part.
pub fn free_summand(n: u32) -> Complex {
    let n = n as i64;
    let gens = vec![
        Generator {
            id: "xf".to_string(),
            kind: GenKind::Free,
            degree: n,
        },
        Generator {
            id: "yf".to_string(),
            kind: GenKind::Free,
            degree: n + 1,
        },
    ];
    let entries = vec![Entry {
        source: 1,
        target: 0,
        coeff: BigInt::one(),
    }];
    Complex::from_indexed(gens, entries, true)
}

/// Disjoint union of generators and differentials. At most one summand may
/// carry the sphere class; colliding ids get `l.`/`r.` prefixes.
pub fn wedge(a: &Complex, b: &Complex) -> Result<Complex, EngineError> {
    a.require_admissible()?;
    b.require_admissible()?;
    let a_class = a.ell().is_some();
    let b_class = b.ell().is_some();
    if a_class && b_class {
        return Err(EngineError::WedgeFixedPart(
            "both summands carry a fixed sphere class".to_string(),
        ));
    }
    let collide = {
        let ids: BTreeSet<&str> = a.gens.iter().map(|g| g.id.as_str()).collect();
        b.gens.iter().any(|g| ids.contains(g.id.as_str()))
    };
    let rename = |prefix: &str, g: &Generator| Generator {
        id: if collide {
            format!("{prefix}{}", g.id)
        } else {
            g.id.clone()
        },
        kind: g.kind,
        degree: g.degree,
    };
    let mut gens: Vec<Generator> = a.gens.iter().map(|g| rename("l.", g)).collect();
    gens.extend(b.gens.iter().map(|g| rename("r.", g)));
    let off = a.gens.len();
    let mut entries = a.entries.clone();
    entries.extend(b.entries.iter().map(|e| Entry {
        source: e.source + off,
        target: e.target + off,
        coeff: e.coeff.clone(),
    }));
    let out = Complex::from_indexed(gens, entries, a.fragment && b.fragment);
    out.require_admissible()?;
    Ok(out)
}

/// Tensor product over `Z[u]` with the graded Leibniz sign
/// `delta(g (x) g') = delta(g) (x) g' + (-1)^{deg g} g (x) delta(g')`.
/// Generator `g (x) g'` is Tower iff both factors are.
pub fn smash(a: &Complex, b: &Complex) -> Result<Complex, EngineError> {
    a.require_admissible()?;
    b.require_admissible()?;
    let na = a.gens.len();
    let nb = b.gens.len();
    let pair = |i: usize, j: usize| i * nb + j;
    let mut gens = Vec::with_capacity(na * nb);
    for ga in &a.gens {
        for gb in &b.gens {
            gens.push(Generator {
                id: format!("{}*{}", ga.id, gb.id),
                kind: if ga.kind == GenKind::Tower && gb.kind == GenKind::Tower {
                    GenKind::Tower
                } else {
                    GenKind::Free
                },
                degree: ga.degree + gb.degree,
            });
        }
    }
    let mut entries = Vec::new();
    for e in &a.entries {
        for j in 0..nb {
            entries.push(Entry {
                source: pair(e.source, j),
                target: pair(e.target, j),
                coeff: e.coeff.clone(),
            });
        }
    }
    for e in &b.entries {
        for i in 0..na {
            let sign = if a.gens[i].degree % 2 == 0 { 1 } else { -1 };
            entries.push(Entry {
                source: pair(i, e.source),
                target: pair(i, e.target),
                coeff: &e.coeff * BigInt::from(sign),
            });
        }
    }
    let out = Complex::from_indexed(gens, entries, a.fragment || b.fragment);
    if let Err(EngineError::Validation(report)) = out.require_admissible() {
        return Err(EngineError::SmashModel(report));
    }
    Ok(out)
}

/// Attachment data for a new free cell of dimension `n >= 2`: integer
/// coefficients on existing generators, each legal as an entry into a new
/// generator of degree `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentCochain {
    pub dim: i64,
    pub coefficients: BTreeMap<String, BigInt>,
}

impl AttachmentCochain {
    pub fn new(dim: i64, coefficients: &[(&str, i64)]) -> Self {
        AttachmentCochain {
            dim,
            coefficients: coefficients
                .iter()
                .map(|(id, c)| (id.to_string(), BigInt::from(*c)))
                .collect(),
        }
    }
}

/// Attach a free cell: adds a pair `P(n+1), Q(n+2)` with `delta(Q) = u P`,
/// adds `c_g P` to `delta(g)` for each coefficient, and cancels every
/// resulting `delta^2` component by the unique `Q`-correction. A
/// non-u-divisible obstruction means the attaching data is not closed.
pub fn attach_free_cell(c: &Complex, att: &AttachmentCochain) -> Result<Complex, EngineError> {
    c.require_admissible()?;
    if att.dim < 2 {
        return Err(EngineError::Hypothesis(format!(
            "attachment dimension must be >= 2, got {}",
            att.dim
        )));
    }
    let n = att.dim;
    // coefficient per old generator index, zeros dropped
    let mut coeff = vec![BigInt::zero(); c.gens.len()];
    for (id, v) in &att.coefficients {
        let Some(i) = c.index_of(id) else {
            return Err(EngineError::Hypothesis(format!(
                "attachment targets unknown generator `{id}`"
            )));
        };
        if implied_u_power(c.gens[i].degree, n + 1).is_none() {
            return Err(EngineError::Hypothesis(format!(
                "attachment coefficient on `{id}` (degree {}) is illegal for a new cell of dimension {n}",
                c.gens[i].degree
            )));
        }
        coeff[i] = v.clone();
    }

    let (p_id, q_id) = c.fresh_pair_ids();
    let p_idx = c.gens.len();
    let q_idx = c.gens.len() + 1;
    let mut gens = c.gens.clone();
    gens.push(Generator {
        id: p_id,
        kind: GenKind::Free,
        degree: n + 1,
    });
    gens.push(Generator {
        id: q_id,
        kind: GenKind::Free,
        degree: n + 2,
    });

    let mut entries = c.entries.clone();
    for (i, v) in coeff.iter().enumerate() {
        if !v.is_zero() {
            entries.push(Entry {
                source: i,
                target: p_idx,
                coeff: v.clone(),
            });
        }
    }
    entries.push(Entry {
        source: q_idx,
        target: p_idx,
        coeff: BigInt::one(),
    });

    // obstruction per old generator: the P-component of delta^2 after the
    // new entries, a single monomial u^{j'} P with j' = (deg w + 1 - n)/2
    for (w, gw) in c.gens.iter().enumerate() {
        let mut obs = BigInt::zero();
        for e in c.entries.iter().filter(|e| e.source == w) {
            if !coeff[e.target].is_zero() {
                obs += &e.coeff * &coeff[e.target];
            }
        }
        if obs.is_zero() {
            continue;
        }
        let j_prime = (gw.degree + 1 - n) / 2;
        if j_prime == 0 {
            return Err(EngineError::AttachmentNotClosed {
                generator: gw.id.clone(),
                coefficient: obs.to_string(),
            });
        }
        entries.push(Entry {
            source: w,
            target: q_idx,
            coeff: -obs,
        });
    }

    let out = Complex::from_indexed(gens, entries, c.fragment);
    out.require_admissible().map_err(|e| {
        EngineError::InternalInvariant(format!("attachment produced an invalid complex: {e}"))
    })?;
    Ok(out)
}

/// The two-parameter attachment family: a free `(ell+2h+1)`-cell attached to
/// `sphere(ell,h) v free_summand(ell+2h)` with coefficients `a` on the top
/// sphere class carrier and `b` on the free summand.
pub fn xab(ell: i64, h: i64, a: i64, b: i64) -> Result<Complex, EngineError> {
    if ell < 0 || h < 0 {
        return Err(EngineError::Hypothesis(format!(
            "xab requires ell, h >= 0, got ({ell}, {h})"
        )));
    }
    if ell + 2 * h < 2 {
        return Err(EngineError::Hypothesis(format!(
            "xab requires ell + 2h >= 2, got {}",
            ell + 2 * h
        )));
    }
    let n = ell + 2 * h;
    let base = wedge(
        &sphere(ell as u32, h as u32),
        &free_summand(n as u32),
    )?;
    // For h >= 1 the degree-n piece of the sphere class sits on y_h; for
    // h = 0 it is the tower generator itself.
    let carrier = if h >= 1 { format!("y{h}") } else { "t".to_string() };
    let mut coefficients = BTreeMap::new();
    if a != 0 {
        coefficients.insert(carrier, BigInt::from(a));
    }
    if b != 0 {
        coefficients.insert("xf".to_string(), BigInt::from(b));
    }
    attach_free_cell(&base, &AttachmentCochain { dim: n, coefficients })
}

/// Degree-preserving map of complexes over `Z[u]`, with the same
/// parity/positivity rule on entries and no free-to-tower components. A map
/// `B(X') -> B(X)` models a space map `X -> X'`.
#[derive(Debug, Clone)]
pub struct CochainMap {
    pub source: Complex,
    pub target: Complex,
    pub entries: Vec<DiffEntry>,
    /// orientation convention note, carried verbatim in reports
    pub note: String,
}

impl CochainMap {
    pub fn identity(c: &Complex) -> CochainMap {
        CochainMap {
            source: c.clone(),
            target: c.clone(),
            entries: c
                .generators()
                .iter()
                .map(|g| DiffEntry {
                    source: g.id.clone(),
                    target: g.id.clone(),
                    coeff: BigInt::one(),
                })
                .collect(),
            note: "identity".to_string(),
        }
    }

    /// Entry legality plus commutation with the differentials.
    pub fn validate(&self) -> Result<(), EngineError> {
        self.source.require_admissible()?;
        self.target.require_admissible()?;
        let mut phi: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for e in &self.entries {
            let s = self.source.index_of(&e.source).ok_or_else(|| {
                EngineError::InvalidMap(format!("unknown source generator `{}`", e.source))
            })?;
            let t = self.target.index_of(&e.target).ok_or_else(|| {
                EngineError::InvalidMap(format!("unknown target generator `{}`", e.target))
            })?;
            let sg = &self.source.generators()[s];
            let tg = &self.target.generators()[t];
            let twice = sg.degree - tg.degree;
            if twice < 0 || twice % 2 != 0 {
                return Err(EngineError::InvalidMap(format!(
                    "entry {} -> {} is not degree-preserving with a non-negative u-power",
                    e.source, e.target
                )));
            }
            if sg.kind == GenKind::Free && tg.kind == GenKind::Tower {
                return Err(EngineError::InvalidMap(format!(
                    "free-to-tower forbidden in cochain map: {} -> {}",
                    e.source, e.target
                )));
            }
            if phi.insert((s, t), e.coeff.clone()).is_some() {
                return Err(EngineError::InvalidMap(format!(
                    "duplicate map entry {} -> {}",
                    e.source, e.target
                )));
            }
        }
        // commutation: for each source generator g and each target generator k,
        // sum over phi then delta must equal delta then phi.
        for (gi, g) in self.source.generators().iter().enumerate() {
            let mut lhs: BTreeMap<usize, BigInt> = BTreeMap::new(); // delta_tgt(phi(g))
            for ((s, t), c) in phi.iter().filter(|((s, _), _)| *s == gi) {
                debug_assert_eq!(*s, gi);
                for e in self.target.raw_entries().iter().filter(|e| e.source == *t) {
                    *lhs.entry(e.target).or_insert_with(BigInt::zero) += c * &e.coeff;
                }
            }
            let mut rhs: BTreeMap<usize, BigInt> = BTreeMap::new(); // phi(delta_src(g))
            for e in self.source.raw_entries().iter().filter(|e| e.source == gi) {
                for ((s, t), c) in phi.iter().filter(|((s, _), _)| *s == e.target) {
                    debug_assert_eq!(*s, e.target);
                    *rhs.entry(*t).or_insert_with(BigInt::zero) += &e.coeff * c;
                }
            }
            let keys: BTreeSet<usize> = lhs.keys().chain(rhs.keys()).copied().collect();
            for k in keys {
                let l = lhs.get(&k).cloned().unwrap_or_else(BigInt::zero);
                let r = rhs.get(&k).cloned().unwrap_or_else(BigInt::zero);
                if l != r {
                    return Err(EngineError::InvalidMap(format!(
                        "does not commute with differentials at {} -> {}",
                        g.id,
                        self.target.generators()[k].id
                    )));
                }
            }
        }
        Ok(())
    }

    /// `self` composed after `other` (`other: A -> B`, `self: B -> C`).
    pub fn compose(&self, other: &CochainMap) -> Result<CochainMap, EngineError> {
        if self.source != other.target {
            return Err(EngineError::InvalidMap(
                "composition mismatch: self.source != other.target".to_string(),
            ));
        }
        let mut acc: BTreeMap<(String, String), BigInt> = BTreeMap::new();
        for e1 in &other.entries {
            for e2 in self.entries.iter().filter(|e2| e2.source == e1.target) {
                *acc.entry((e1.source.clone(), e2.target.clone()))
                    .or_insert_with(BigInt::zero) += &e1.coeff * &e2.coeff;
            }
        }
        Ok(CochainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            entries: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((s, t), c)| DiffEntry {
                    source: s,
                    target: t,
                    coeff: c,
                })
                .collect(),
            note: format!("{} . {}", self.note, other.note),
        })
    }

    /// The integer degree of the induced map on the rank-one fixed
    /// cohomology. Sign depends on the declaration-order orientation and is
    /// not semantically meaningful.
    pub fn fixed_degree(&self) -> Result<BigInt, EngineError> {
        self.validate()?;
        let se = self.source.ell().ok_or_else(|| {
            EngineError::InvalidMap("source has no fixed sphere class".to_string())
        })?;
        let te = self.target.ell().ok_or_else(|| {
            EngineError::InvalidMap("target has no fixed sphere class".to_string())
        })?;
        if se != te {
            return Err(EngineError::FixedSphereMismatch { source_ell: se, target_ell: te });
        }
        crate::cohomology::fixed_map_degree(self, se)
    }
}

/// The projection `B(sphere(ell, h)) -> B(sphere(ell, h'))` for `h' <= h`
/// killing the upper ladders; models the sphere inclusion the other way.
pub fn sphere_projection(ell: u32, h: u32, h_small: u32) -> CochainMap {
    assert!(h_small <= h);
    let source = sphere(ell, h);
    let target = sphere(ell, h_small);
    let mut entries = vec![DiffEntry {
        source: "t".to_string(),
        target: "t".to_string(),
        coeff: BigInt::one(),
    }];
    for i in 1..=h_small {
        for name in [format!("x{i}"), format!("y{i}")] {
            entries.push(DiffEntry {
                source: name.clone(),
                target: name,
                coeff: BigInt::one(),
            });
        }
    }
    CochainMap {
        source,
        target,
        entries,
        note: format!("projection killing ladders {}..{}", h_small + 1, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn entry(c: &Complex, src: &str, tgt: &str) -> Option<BigInt> {
        c.diff_entries()
            .into_iter()
            .find(|e| e.source == src && e.target == tgt)
            .map(|e| e.coeff)
    }

    #[test]
    fn sphere_0_0_is_admissible() {
        let c = sphere(0, 0);
        assert!(c.validate().is_admissible());
        assert_eq!(c.ell(), Some(0));
        assert_eq!(c.len(), 1);
        assert!(c.raw_entries().is_empty());
    }

    #[test]
    fn sphere_1_2_degrees() {
        let c = sphere(1, 2);
        assert!(c.validate().is_admissible());
        let mut degs: Vec<i64> = c.generators().iter().map(|g| g.degree).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 2, 3, 4, 5]);
        assert_eq!(c.ell(), Some(1));
        assert_eq!(c.d_max(), 5);
    }

    #[test]
    fn free_to_tower_is_flagged() {
        let gens = vec![
            Generator { id: "t".into(), kind: GenKind::Tower, degree: 0 },
            Generator { id: "x".into(), kind: GenKind::Free, degree: 1 },
            Generator { id: "s".into(), kind: GenKind::Tower, degree: 2 },
        ];
        let diff = vec![DiffEntry {
            source: "x".into(),
            target: "s".into(),
            coeff: BigInt::one(),
        }];
        let c = Complex::from_parts(gens, diff, false).unwrap();
        let report = c.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FreeToTower { .. })));
        assert!(report.to_string().contains("free-to-tower forbidden"));
    }

    #[test]
    fn xab_0123_is_admissible_with_expected_bounds() {
        let c = xab(0, 1, 2, 3).unwrap();
        assert!(c.validate().is_admissible());
        assert_eq!(c.ell(), Some(0));
        assert_eq!(c.d_max(), 4);
        assert_eq!(c.len(), 7);
    }

    #[test]
    fn attach_example_differentials() {
        // A = sphere(0,1) v free_summand(2), attach {y1: a, xf: b}
        let a_coef = 5i64;
        let b_coef = 7i64;
        let base = wedge(&sphere(0, 1), &free_summand(2)).unwrap();
        let att = AttachmentCochain::new(2, &[("y1", a_coef), ("xf", b_coef)]);
        let c = attach_free_cell(&base, &att).unwrap();
        assert_eq!(entry(&c, "y1", "p1"), Some(BigInt::from(a_coef)));
        assert_eq!(entry(&c, "xf", "p1"), Some(BigInt::from(b_coef)));
        assert_eq!(entry(&c, "yf", "q1"), Some(BigInt::from(-b_coef)));
        assert_eq!(entry(&c, "q1", "p1"), Some(BigInt::one()));
        assert!(c.validate().is_admissible());
    }

    #[test]
    fn attach_zero_cochain_is_free_summand_wedge() {
        let base = wedge(&sphere(0, 1), &free_summand(2)).unwrap();
        let c = attach_free_cell(&base, &AttachmentCochain::new(3, &[])).unwrap();
        // P(4), Q(5) with delta(Q) = uP and nothing else changed
        assert_eq!(c.len(), base.len() + 2);
        assert_eq!(entry(&c, "q1", "p1"), Some(BigInt::one()));
        assert_eq!(c.raw_entries().len(), base.raw_entries().len() + 1);
    }

    #[test]
    fn attachment_obstruction_must_be_u_divisible() {
        // sphere(0,2) has the j = 0 entry y1 -> x2 with x2 in degree 3;
        // attaching {x2: 1} in dimension 3 gives delta^2(y1) a u^0 P
        // component, which cannot be cancelled by a Q-correction.
        let c = sphere(0, 2);
        let err = attach_free_cell(&c, &AttachmentCochain::new(3, &[("x2", 1)]));
        assert!(matches!(err, Err(EngineError::AttachmentNotClosed { .. })));
    }

    #[test]
    fn removing_q_correction_breaks_delta_squared() {
        let c = xab(0, 1, 2, 3).unwrap();
        let gens = c.generators().to_vec();
        let diff: Vec<DiffEntry> = c
            .diff_entries()
            .into_iter()
            .filter(|e| !(e.source == "yf" && e.target == "q1"))
            .collect();
        let broken = Complex::from_parts(gens, diff, false).unwrap();
        assert!(broken
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DeltaSquared { .. })));
    }

    #[test]
    fn wedge_rejects_two_sphere_classes() {
        let err = wedge(&sphere(0, 0), &sphere(0, 1));
        assert!(matches!(err, Err(EngineError::WedgeFixedPart(_))));
    }

    #[test]
    fn wedge_with_point_is_identity() {
        let x = xab(0, 1, 2, 3).unwrap();
        let w = wedge(&x, &point()).unwrap();
        assert_eq!(w, x);
    }

    #[test]
    fn smash_with_s00_is_unit() {
        let x = xab(0, 1, 2, 3).unwrap();
        let s = smash(&x, &sphere(0, 0)).unwrap();
        assert_eq!(s.len(), x.len());
        assert!(s.validate().is_admissible());
        assert_eq!(s.ell(), x.ell());
        // same differentials up to the id relabeling g -> g*t
        for e in x.diff_entries() {
            let got = entry(&s, &format!("{}*t", e.source), &format!("{}*t", e.target));
            assert_eq!(got, Some(e.coeff));
        }
    }

    #[test]
    fn smash_leibniz_sign() {
        let a = sphere(0, 1); // t(0), x1(1), y1(2)
        let b = free_summand(2); // xf(2), yf(3), delta(yf) = u xf
        let s = smash(&a, &b).unwrap();
        // x1 has odd degree: delta(x1*yf) = -(x1*xf) u-term
        assert_eq!(entry(&s, "x1*yf", "x1*xf"), Some(BigInt::from(-1)));
        // t has even degree: delta(t*yf) picks up +1 on t*xf
        assert_eq!(entry(&s, "t*yf", "t*xf"), Some(BigInt::one()));
        assert!(s.validate().is_admissible());
    }

    #[test]
    fn xab_rejects_small_dimension() {
        assert!(matches!(
            xab(0, 0, 1, 1),
            Err(EngineError::Hypothesis(_))
        ));
        assert!(matches!(xab(-1, 2, 1, 1), Err(EngineError::Hypothesis(_))));
    }

    #[test]
    fn xab_h0_targets_tower() {
        let c = xab(2, 0, 2, 4).unwrap();
        assert!(c.validate().is_admissible());
        assert_eq!(entry(&c, "t", "p1"), Some(BigInt::from(2)));
        assert_eq!(entry(&c, "xf", "p1"), Some(BigInt::from(4)));
    }

    #[test]
    fn identity_map_has_fixed_degree_one() {
        let c = xab(0, 1, 2, 3).unwrap();
        let id = CochainMap::identity(&c);
        let d = id.fixed_degree().unwrap();
        assert_eq!(d.abs(), BigInt::one());
    }

    #[test]
    fn sphere_projection_commutes_and_has_degree_one() {
        let f = sphere_projection(0, 2, 1);
        f.validate().unwrap();
        assert_eq!(f.fixed_degree().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn zero_on_towers_map_has_degree_zero() {
        // map sphere(0,1) -> sphere(0,1) sending everything to 0 commutes
        let c = sphere(0, 1);
        let f = CochainMap {
            source: c.clone(),
            target: c,
            entries: vec![],
            note: "zero".to_string(),
        };
        assert_eq!(f.fixed_degree().unwrap(), BigInt::zero());
    }

    #[test]
    fn fixed_degree_is_multiplicative() {
        let f = sphere_projection(0, 2, 1);
        let g = sphere_projection(0, 3, 2);
        // f: B(s(0,2)) -> B(s(0,1)), g: B(s(0,3)) -> B(s(0,2)); f . g : B(s(0,3)) -> B(s(0,1))
        let fg = f.compose(&g).unwrap();
        fg.validate().unwrap();
        let df = f.fixed_degree().unwrap();
        let dg = g.fixed_degree().unwrap();
        assert_eq!(fg.fixed_degree().unwrap(), df * dg);
    }

    #[test]
    fn fixed_degree_rejects_ell_mismatch() {
        let f = CochainMap {
            source: sphere(2, 0),
            target: sphere(0, 0),
            entries: vec![],
            note: String::new(),
        };
        assert!(matches!(
            f.fixed_degree(),
            Err(EngineError::FixedSphereMismatch { .. })
        ));
    }
}
