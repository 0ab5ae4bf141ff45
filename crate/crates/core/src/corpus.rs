//! The bundled example corpus and the random-complex fuzzer used by the
//! verification suites.

use crate::tcomplex::{
    attach_free_cell, free_summand, smash, sphere, wedge, AttachmentCochain, Complex,
};
use crate::EngineError;
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Constructor-family corpus exercised by the verification suites: spheres,
/// wedges with free summands, the attachment family (including degenerate
/// coefficient patterns), a smash, and an iterated attachment.
pub fn bundled_corpus() -> Vec<(String, Complex)> {
    let mut out: Vec<(String, Complex)> = Vec::new();
    for (ell, h) in [(0, 0), (0, 1), (1, 1), (0, 2), (2, 1), (3, 0)] {
        out.push((format!("sphere({ell},{h})"), sphere(ell, h)));
    }
    out.push((
        "wedge(sphere(0,1),free_summand(2))".to_string(),
        wedge(&sphere(0, 1), &free_summand(2)).expect("wedge with fragment"),
    ));
    out.push((
        "wedge(sphere(1,1),free_summand(4))".to_string(),
        wedge(&sphere(1, 1), &free_summand(4)).expect("wedge with fragment"),
    ));
    for (ell, h, a, b) in [
        (0, 1, 2, 3),
        (0, 1, 2, 5),
        (0, 1, 1, 0),
        (0, 1, 0, 1),
        (1, 1, 2, 3),
        (0, 2, 3, 5),
        (2, 0, 2, 4),
    ] {
        out.push((
            format!("xab({ell},{h},{a},{b})"),
            crate::tcomplex::xab(ell, h, a, b).expect("corpus parameters are legal"),
        ));
    }
    out.push((
        "smash(sphere(0,1),sphere(1,1))".to_string(),
        smash(&sphere(0, 1), &sphere(1, 1)).expect("sphere smash"),
    ));
    let double = {
        let base = crate::tcomplex::xab(0, 1, 2, 3).expect("legal");
        attach_free_cell(&base, &AttachmentCochain::new(3, &[("yf", 2)]))
            .expect("iterated attachment is closed")
    };
    out.push(("xab(0,1,2,3)+cell".to_string(), double));
    out
}

/// One random admissible complex: a sphere, optionally wedged with a free
/// summand, followed by random legal attachments (rejection-sampling the
/// closure condition). Coefficients are drawn from [-4, 4], so degenerate
/// divisibility patterns occur.
pub fn random_complex<R: Rng>(rng: &mut R, max_gens: usize) -> Complex {
    let ell = rng.gen_range(0..=2u32);
    let h = rng.gen_range(0..=2u32);
    let mut c = sphere(ell, h);
    if rng.gen_bool(0.5) && c.len() + 2 <= max_gens {
        let deg = rng.gen_range(0..=(c.d_max().max(1)) as u32 + 1);
        c = wedge(&c, &free_summand(deg)).expect("wedge with fragment");
    }
    let rounds = rng.gen_range(1..=2);
    for _ in 0..rounds {
        if c.len() + 2 > max_gens {
            break;
        }
        c = random_attachment(rng, &c);
    }
    c
}

fn random_attachment<R: Rng>(rng: &mut R, c: &Complex) -> Complex {
    for _ in 0..12 {
        let n = rng.gen_range(2..=c.d_max().max(2));
        let mut coefficients = BTreeMap::new();
        for g in c.generators() {
            if g.degree >= n && (g.degree - n) % 2 == 0 && rng.gen_bool(0.6) {
                let v = rng.gen_range(-4i64..=4);
                if v != 0 {
                    coefficients.insert(g.id.clone(), BigInt::from(v));
                }
            }
        }
        let att = AttachmentCochain {
            dim: n,
            coefficients,
        };
        match attach_free_cell(c, &att) {
            Ok(next) => return next,
            Err(EngineError::AttachmentNotClosed { .. }) => continue,
            Err(e) => panic!("fuzzer drew an illegal attachment: {e}"),
        }
    }
    // closure kept failing; a trivial attachment is always legal
    attach_free_cell(
        c,
        &AttachmentCochain {
            dim: 2.max(c.d_max()),
            coefficients: BTreeMap::new(),
        },
    )
    .expect("trivial attachment is closed")
}

/// Deterministic fuzz corpus.
pub fn fuzz_corpus(seed: u64, count: usize, max_gens: usize) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_complex(&mut rng, max_gens)).collect()
}

/// Non-candidate primes for spot checks, drawn deterministically.
pub fn spot_check_primes(seed: u64, exclude: &std::collections::BTreeSet<u64>, count: usize) -> Vec<u64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = rng.gen_range(7u64..2000);
        if crate::exactalg::is_prime(p) && !exclude.contains(&p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}
