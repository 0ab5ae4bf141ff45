//! Cross-cutting invariants on the constructor family and the fuzz corpus.

use borelh::bcx::{parse_bcx, serialize_bcx, BcxMetadata};
use borelh::cohomology::{
    cohomology_at, restriction_image, stabilization_bound, u_periodicity_holds,
};
use borelh::corpus::{bundled_corpus, fuzz_corpus, spot_check_primes};
use borelh::exactalg::CoeffRing;
use borelh::hinv::{candidate_primes, h_invariants, prime_profile};
use borelh::tcomplex::{free_summand, smash, sphere, wedge, xab};
use proptest::prelude::*;

#[test]
fn wedge_cohomology_is_degreewise_direct_sum() {
    let pairs = [
        (sphere(0, 2), free_summand(1)),
        (sphere(1, 1), free_summand(3)),
        (xab(0, 1, 2, 3).unwrap(), free_summand(2)),
    ];
    for (a, b) in pairs {
        let w = wedge(&a, &b).unwrap();
        for n in w.min_degree()..=w.d_max() + 2 {
            for ring in [CoeffRing::Z, CoeffRing::Q, CoeffRing::F(2), CoeffRing::F(3)] {
                let ga = cohomology_at(&a, n, ring).unwrap();
                let gb = cohomology_at(&b, n, ring).unwrap();
                let gw = cohomology_at(&w, n, ring).unwrap();
                assert_eq!(gw.free_rank, ga.free_rank + gb.free_rank, "degree {n} {ring}");
                let mut torsion = ga.torsion.clone();
                torsion.extend(gb.torsion.clone());
                torsion.sort();
                let mut wt = gw.torsion.clone();
                wt.sort();
                assert_eq!(wt, torsion, "degree {n} {ring}");
            }
        }
    }
}

#[test]
fn smash_is_commutative_and_associative_at_invariant_level() {
    let a = xab(0, 1, 2, 3).unwrap();
    let b = sphere(1, 1);
    let c = sphere(0, 1);
    let rings = [CoeffRing::Z, CoeffRing::Q, CoeffRing::F(2), CoeffRing::F(3)];

    let ab = smash(&a, &b).unwrap();
    let ba = smash(&b, &a).unwrap();
    for ring in rings {
        assert_eq!(
            h_invariants(&ab, ring).unwrap(),
            h_invariants(&ba, ring).unwrap()
        );
    }
    for n in ab.min_degree()..=ab.d_max() + 2 {
        assert_eq!(
            cohomology_at(&ab, n, CoeffRing::Z).unwrap(),
            cohomology_at(&ba, n, CoeffRing::Z).unwrap()
        );
    }

    let ab_c = smash(&ab, &c).unwrap();
    let a_bc = smash(&a, &smash(&b, &c).unwrap()).unwrap();
    for ring in rings {
        assert_eq!(
            h_invariants(&ab_c, ring).unwrap(),
            h_invariants(&a_bc, ring).unwrap()
        );
    }
}

/// Representation spheres compose: smash(sphere(a,b), sphere(c,d)) has the
/// h-invariants of sphere(a+c, b+d).
#[test]
fn sphere_smash_composition() {
    let rings = [CoeffRing::Z, CoeffRing::Q, CoeffRing::F(2), CoeffRing::F(3)];
    for (a, b, c, d) in [(0u32, 1u32, 1u32, 1u32), (1, 0, 0, 2), (2, 1, 0, 1)] {
        let s = smash(&sphere(a, b), &sphere(c, d)).unwrap();
        for ring in rings {
            assert_eq!(
                h_invariants(&s, ring).unwrap(),
                h_invariants(&sphere(a + c, b + d), ring).unwrap(),
                "sphere({a},{b}) ^ sphere({c},{d}) over {ring}"
            );
        }
        assert_eq!(s.ell(), Some((a + c) as i64));
    }
}

#[test]
fn restriction_is_surjective_beyond_the_bound() {
    for c in fuzz_corpus(0x5AB1, 60, 12) {
        let ell = c.ell().unwrap();
        let bound = stabilization_bound(&c);
        let k0 = (bound + 2 - ell) / 2;
        for k in k0..=k0 + 2 {
            let r = restriction_image(&c, k, CoeffRing::Z).unwrap();
            assert!(r.is_full(), "index not 1 at k = {k}");
        }
    }
}

#[test]
fn u_periodicity_beyond_the_bound() {
    for c in fuzz_corpus(0xF00D, 40, 12) {
        let d = c.d_max();
        for n in d + 1..=d + 3 {
            assert!(u_periodicity_holds(&c, n));
        }
    }
}

/// For primes outside the candidate set, every cochain matrix has the same
/// rank over F_p as over Q, so h^p = h^0.
#[test]
fn prime_soundness_spot_checks() {
    for c in fuzz_corpus(0x9999, 25, 12) {
        let candidates = candidate_primes(&c).unwrap();
        let h0 = h_invariants(&c, CoeffRing::Q).unwrap().0;
        for p in spot_check_primes(0xAB, &candidates, 3) {
            let hp = h_invariants(&c, CoeffRing::F(p)).unwrap().0;
            assert_eq!(hp, h0, "non-candidate prime {p} disagrees with h^0");
        }
    }
}

#[test]
fn weak_is_at_most_strong_everywhere() {
    for (name, c) in bundled_corpus() {
        if c.ell().is_none() {
            continue;
        }
        let r = prime_profile(&c).unwrap();
        assert!(r.z.0 <= r.z.1, "{name}");
        assert!(r.flags.weak_equals_h0, "{name}");
        assert!(r.flags.jump_divisors_necessary, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// parse . serialize is the identity on fuzzed complexes
    #[test]
    fn bcx_round_trip(seed in any::<u64>()) {
        for c in fuzz_corpus(seed, 2, 12) {
            let meta = BcxMetadata::default();
            let doc = parse_bcx(&serialize_bcx(&c, &meta)).unwrap();
            prop_assert_eq!(doc.complex, c);
        }
    }

    /// smashing with the unit sphere changes nothing
    #[test]
    fn smash_unit(seed in any::<u64>()) {
        for c in fuzz_corpus(seed, 1, 10) {
            let s = smash(&c, &sphere(0, 0)).unwrap();
            for ring in [CoeffRing::Z, CoeffRing::F(2)] {
                prop_assert_eq!(
                    h_invariants(&s, ring).unwrap(),
                    h_invariants(&c, ring).unwrap()
                );
            }
        }
    }
}
