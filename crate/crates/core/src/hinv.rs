//! Weak and strong h-invariants over all coefficient rings, exceptional
//! prime profiles, property verification, and manifold-level conventions.
//!
//! The weak invariant is the first degree index at which the restriction to
//! the fixed tower becomes nonzero, the strong one the first at which it
//! becomes surjective. Over a field both coincide. A general PID enters only
//! through its characteristic; the strong invariant over a non-field PID
//! other than `Z` is out of scope.

use crate::cohomology::{restriction_image, scan_limit, RestrictionImage};
use crate::exactalg::{prime_divisors, smith_normal_form, CoeffRing};
use crate::tcomplex::{sphere, smash, CochainMap, Complex};
use crate::EngineError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// (h_weak, h_strong) over the given ring.
pub fn h_invariants(c: &Complex, ring: CoeffRing) -> Result<(i64, i64), EngineError> {
    c.require_admissible()?;
    ring.check()?;
    let ell = c.ell().ok_or_else(|| {
        EngineError::Validation("h-invariants require a fixed sphere class".to_string())
    })?;
    let limit = scan_limit(c, ell);
    let mut weak = None;
    for k in 0..=limit {
        let r = restriction_image(c, k, ring)?;
        if weak.is_none() && r.is_nonzero() {
            weak = Some(k);
        }
        if r.is_full() {
            let weak = weak.ok_or_else(|| {
                EngineError::InternalInvariant("restriction full before nonzero".to_string())
            })?;
            return Ok((weak, k));
        }
    }
    Err(EngineError::InternalInvariant(format!(
        "restriction never becomes surjective within the scan limit {limit}"
    )))
}

/// Consistency relations of a profile. `weak_equals_h0` and
/// `jump_divisors_necessary` hold for every admissible complex;
/// `strong_equals_max_profile` and the full `jump_divisors_biconditional`
/// can fail when the critical coboundary class is divisible inside torsion
/// beyond its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyFlags {
    pub weak_equals_h0: bool,
    pub strong_equals_max_profile: bool,
    pub jump_divisors_necessary: bool,
    pub jump_divisors_biconditional: bool,
}

impl ConsistencyFlags {
    pub fn all(&self) -> bool {
        self.weak_equals_h0
            && self.strong_equals_max_profile
            && self.jump_divisors_necessary
            && self.jump_divisors_biconditional
    }
}

/// Full report over `Z`, `Q`, and every candidate prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HReport {
    pub ell: i64,
    pub d_max: i64,
    pub z: (i64, i64),
    pub q: (i64, i64),
    /// h^p for every candidate prime; h^p = h0 holds for all other primes
    pub profile: BTreeMap<u64, i64>,
    pub h0: i64,
    pub exceptional_primes: BTreeSet<u64>,
    /// order of the cyclic coboundary image at the critical degree
    /// (restriction index at k = h_strong(Z) - 1; 0 when h_strong(Z) = 0)
    pub jump_order: BigInt,
    pub flags: ConsistencyFlags,
}

impl HReport {
    pub fn h_at(&self, ring: CoeffRing) -> Option<(i64, i64)> {
        match ring {
            CoeffRing::Z => Some(self.z),
            CoeffRing::Q => Some(self.q),
            CoeffRing::F(p) => self
                .profile
                .get(&p)
                .map(|&h| (h, h))
                .or(Some((self.h0, self.h0))),
        }
    }

    pub fn max_over_profile(&self) -> i64 {
        self.profile.values().copied().max().unwrap_or(self.h0).max(self.h0)
    }
}

/// Candidate primes: divisors of every SNF invariant factor of every cochain
/// matrix of the complex and of its fixed/free parts up to the stabilization
/// bound + 3, together with divisors of every restriction-image index.
pub fn candidate_primes(c: &Complex) -> Result<BTreeSet<u64>, EngineError> {
    c.require_admissible()?;
    let mut primes = BTreeSet::new();
    let parts = [c.clone(), c.fixed_part(), c.free_part()];
    for part in &parts {
        if part.is_empty() {
            continue;
        }
        for n in part.min_degree() - 1..=part.d_max() + 3 {
            let snf = smith_normal_form(&part.delta_matrix(n));
            for d in &snf.invariant_factors {
                primes.extend(prime_divisors(d)?);
            }
        }
    }
    if let Some(ell) = c.ell() {
        for k in 0..=scan_limit(c, ell) {
            if let RestrictionImage::Index { index, .. } =
                restriction_image(c, k, CoeffRing::Z)?
            {
                primes.extend(prime_divisors(&index)?);
            }
        }
    }
    Ok(primes)
}

pub fn prime_profile(c: &Complex) -> Result<HReport, EngineError> {
    c.require_admissible()?;
    let ell = c.ell().ok_or_else(|| {
        EngineError::Validation("prime profile requires a fixed sphere class".to_string())
    })?;
    let z = h_invariants(c, CoeffRing::Z)?;
    let q = h_invariants(c, CoeffRing::Q)?;
    let h0 = q.0;
    let mut profile = BTreeMap::new();
    for p in candidate_primes(c)? {
        let (hp, _) = h_invariants(c, CoeffRing::F(p))?;
        profile.insert(p, hp);
    }
    let exceptional_primes: BTreeSet<u64> = profile
        .iter()
        .filter(|(_, &hp)| hp != h0)
        .map(|(&p, _)| p)
        .collect();
    let jump_order = if z.1 >= 1 {
        match restriction_image(c, z.1 - 1, CoeffRing::Z)? {
            RestrictionImage::Index { index, .. } => index,
            _ => unreachable!("integral restriction returns an index"),
        }
    } else {
        BigInt::zero()
    };

    let weak_equals_h0 = z.0 == h0;
    let max_profile = profile.values().copied().max().unwrap_or(h0).max(h0);
    let strong_equals_max_profile = z.1 == max_profile;
    let jump_is_zero = jump_order.is_zero();
    let attains = |hp: i64| hp == z.1;
    let divides = |p: u64| jump_is_zero || (&jump_order % BigInt::from(p)).is_zero();
    // over Q the jump order is zero exactly when h^0 attains h_strong(Z)
    let mut jump_divisors_necessary = attains(h0) == jump_is_zero;
    let mut jump_divisors_biconditional = attains(h0) == jump_is_zero;
    for (&p, &hp) in &profile {
        if attains(hp) && !divides(p) {
            jump_divisors_necessary = false;
        }
        if attains(hp) != divides(p) {
            jump_divisors_biconditional = false;
        }
    }

    Ok(HReport {
        ell,
        d_max: c.d_max(),
        z,
        q,
        profile,
        h0,
        exceptional_primes,
        jump_order,
        flags: ConsistencyFlags {
            weak_equals_h0,
            strong_equals_max_profile,
            jump_divisors_necessary,
            jump_divisors_biconditional,
        },
    })
}

/// Properties checkable on one or two complexes and/or a cochain map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyCheck {
    /// smashing with sphere(l, m) shifts both flavors by m over every ring
    Stability { l: u32, m: u32 },
    /// h^F(a smash b) = h^F(a) + h^F(b) for every field in the profile
    FieldAdditivity,
    /// h_s(a smash b; Z) <= h_s(a; Z) + h_s(b; Z)
    ZSubadditivity,
    /// fixed_degree != 0 implies h_w(target) <= h_w(source), and
    /// fixed_degree = +-1 additionally bounds h_s
    Monotonicity,
    WeakEqualsH0,
    StrongEqualsMaxProfile,
    /// h_w <= h_s over Z
    InequalityChain,
}

impl std::fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PropertyCheck::Stability { l, m } => write!(f, "stability(l={l},m={m})"),
            PropertyCheck::FieldAdditivity => write!(f, "field-additivity"),
            PropertyCheck::ZSubadditivity => write!(f, "z-subadditivity"),
            PropertyCheck::Monotonicity => write!(f, "monotonicity"),
            PropertyCheck::WeakEqualsH0 => write!(f, "weak-equals-h0"),
            PropertyCheck::StrongEqualsMaxProfile => write!(f, "strong-equals-max"),
            PropertyCheck::InequalityChain => write!(f, "inequality-chain"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropertyOutcome {
    pub check: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Debug, Clone, Default)]
pub struct PropertyReport {
    pub outcomes: Vec<PropertyOutcome>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }

    fn push(&mut self, check: &PropertyCheck, pass: bool, witness: String) {
        self.outcomes.push(PropertyOutcome {
            check: check.to_string(),
            pass,
            witness,
        });
    }
}

pub struct PropertyInputs<'a> {
    pub a: &'a Complex,
    pub b: Option<&'a Complex>,
    pub map: Option<&'a CochainMap>,
}

/// Rings used by "every ring" checks: Z, Q, the small primes, and every
/// candidate prime of the inputs.
fn ring_set(complexes: &[&Complex]) -> Result<Vec<CoeffRing>, EngineError> {
    let mut primes: BTreeSet<u64> = BTreeSet::from([2, 3, 5]);
    for c in complexes {
        primes.extend(candidate_primes(c)?);
    }
    let mut rings = vec![CoeffRing::Z, CoeffRing::Q];
    rings.extend(primes.into_iter().map(CoeffRing::F));
    Ok(rings)
}

pub fn verify_properties(
    inputs: &PropertyInputs,
    checks: &[PropertyCheck],
) -> Result<PropertyReport, EngineError> {
    let mut report = PropertyReport::default();
    for check in checks {
        match check {
            PropertyCheck::Stability { l, m } => {
                let shifted = smash(inputs.a, &sphere(*l, *m))?;
                let mut pass = true;
                let mut witness = String::new();
                for ring in ring_set(&[inputs.a])? {
                    let base = h_invariants(inputs.a, ring)?;
                    let got = h_invariants(&shifted, ring)?;
                    let want = (base.0 + *m as i64, base.1 + *m as i64);
                    if got != want {
                        pass = false;
                        witness = format!("{ring}: got {got:?}, want {want:?}");
                        break;
                    }
                }
                report.push(check, pass, witness);
            }
            PropertyCheck::FieldAdditivity => {
                let b = inputs.b.ok_or_else(|| {
                    EngineError::Hypothesis("field additivity needs two complexes".to_string())
                })?;
                let prod = smash(inputs.a, b)?;
                let mut pass = true;
                let mut witness = String::new();
                for ring in ring_set(&[inputs.a, b])? {
                    if !ring.is_field() {
                        continue;
                    }
                    let ha = h_invariants(inputs.a, ring)?.0;
                    let hb = h_invariants(b, ring)?.0;
                    let hp = h_invariants(&prod, ring)?.0;
                    if hp != ha + hb {
                        pass = false;
                        witness = format!("{ring}: {hp} != {ha} + {hb}");
                        break;
                    }
                }
                report.push(check, pass, witness);
            }
            PropertyCheck::ZSubadditivity => {
                let b = inputs.b.ok_or_else(|| {
                    EngineError::Hypothesis("subadditivity needs two complexes".to_string())
                })?;
                let prod = smash(inputs.a, b)?;
                let ha = h_invariants(inputs.a, CoeffRing::Z)?.1;
                let hb = h_invariants(b, CoeffRing::Z)?.1;
                let hp = h_invariants(&prod, CoeffRing::Z)?.1;
                report.push(
                    check,
                    hp <= ha + hb,
                    format!("h_s(product) = {hp}, parts sum to {}", ha + hb),
                );
            }
            PropertyCheck::Monotonicity => {
                let map = inputs.map.ok_or_else(|| {
                    EngineError::Hypothesis("monotonicity needs a cochain map".to_string())
                })?;
                let d = map.fixed_degree()?;
                let mut pass = true;
                let mut witness = format!("fixed degree {d}");
                if !d.is_zero() {
                    for ring in ring_set(&[&map.source, &map.target])? {
                        let hs = h_invariants(&map.source, ring)?;
                        let ht = h_invariants(&map.target, ring)?;
                        if ht.0 > hs.0 {
                            pass = false;
                            witness = format!("{ring}: weak {} > {}", ht.0, hs.0);
                            break;
                        }
                        if d.abs() == BigInt::from(1) && ht.1 > hs.1 {
                            pass = false;
                            witness = format!("{ring}: strong {} > {}", ht.1, hs.1);
                            break;
                        }
                    }
                }
                report.push(check, pass, witness);
            }
            PropertyCheck::WeakEqualsH0 => {
                let r = prime_profile(inputs.a)?;
                report.push(
                    check,
                    r.flags.weak_equals_h0,
                    format!("h_w(Z) = {}, h^0 = {}", r.z.0, r.h0),
                );
            }
            PropertyCheck::StrongEqualsMaxProfile => {
                let r = prime_profile(inputs.a)?;
                report.push(
                    check,
                    r.flags.strong_equals_max_profile,
                    format!("h_s(Z) = {}, max over profile = {}", r.z.1, r.max_over_profile()),
                );
            }
            PropertyCheck::InequalityChain => {
                let (w, s) = h_invariants(inputs.a, CoeffRing::Z)?;
                report.push(check, w <= s, format!("h_w = {w}, h_s = {s}"));
            }
        }
    }
    Ok(report)
}

/// Manifold-level report: every space-level invariant shifted by the formal
/// desuspension `-n`, plus the precursor normalizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldReport {
    pub n: BigRational,
    pub z: (BigRational, BigRational),
    pub q: (BigRational, BigRational),
    pub profile: BTreeMap<u64, BigRational>,
    pub h0: BigRational,
    /// d = 2 h_w(Z) - 2n
    pub d_invariant: BigRational,
    /// Fr = 2 h^2 - 2n
    pub froyshov_f2: BigRational,
    /// h_KM = -(h^0 - n)
    pub h_km: BigRational,
}

pub fn manifold_report(c: &Complex, n: &BigRational) -> Result<ManifoldReport, EngineError> {
    let report = prime_profile(c)?;
    let shift = |h: i64| BigRational::from_integer(BigInt::from(h)) - n;
    let two = BigRational::from_integer(BigInt::from(2));
    let h2 = report.profile.get(&2).copied().unwrap_or(report.h0);
    Ok(ManifoldReport {
        n: n.clone(),
        z: (shift(report.z.0), shift(report.z.1)),
        q: (shift(report.q.0), shift(report.q.1)),
        profile: report
            .profile
            .iter()
            .map(|(&p, &h)| (p, shift(h)))
            .collect(),
        h0: shift(report.h0),
        d_invariant: &two * shift(report.z.0),
        froyshov_f2: &two * shift(h2),
        h_km: -shift(report.h0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FroyshovOutcome {
    Satisfied,
    Violated,
}

/// Exact check of `(c1^2 + b2) / 8 <= h`; slack is `h - (c1^2 + b2)/8`.
pub fn froyshov_check(
    h: &BigRational,
    c1_sq: &BigRational,
    b2: u64,
) -> (FroyshovOutcome, BigRational) {
    let eight = BigRational::from_integer(BigInt::from(8));
    let bound = (c1_sq + BigRational::from_integer(BigInt::from(b2))) / eight;
    let slack = h - &bound;
    let outcome = if slack >= BigRational::zero() {
        FroyshovOutcome::Satisfied
    } else {
        FroyshovOutcome::Violated
    };
    (outcome, slack)
}
