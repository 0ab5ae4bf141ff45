//! Independent brute-force oracle for restriction images and field
//! dimensions: direct enumeration of cocycles over a bounded integer box (or
//! all of `F_p^d`), with the differential applied entry by entry in checked
//! i64 arithmetic. No code is shared with the engine's Smith normal form or
//! elimination paths.
//!
//! The oracle only supports complexes whose fixed part is a single tower
//! generator with no tower-to-tower differentials (true of the whole
//! constructor corpus), so the restriction class of a cocycle is literally
//! its coefficient on the unique tower monomial.

use borelh::tcomplex::{Complex, GenKind};

/// (target dimension, per-source-coordinate contributions, tower position)
type Columns = (usize, Vec<Vec<(usize, i64)>>, Option<usize>);


pub struct OracleComplex {
    degrees: Vec<i64>,
    /// outgoing entries per generator: (target, coefficient)
    entries: Vec<Vec<(usize, i64)>>,
    tower: usize,
}

impl OracleComplex {
    pub fn new(c: &Complex) -> OracleComplex {
        let gens = c.generators();
        let towers: Vec<usize> = (0..gens.len())
            .filter(|&i| gens[i].kind == GenKind::Tower)
            .collect();
        assert_eq!(towers.len(), 1, "oracle needs a single tower generator");
        let mut entries = vec![Vec::new(); gens.len()];
        let mut max_coeff: i64 = 1;
        for e in c.diff_entries() {
            let s = c.index_of(&e.source).unwrap();
            let t = c.index_of(&e.target).unwrap();
            let coeff = i64::try_from(&e.coeff).expect("oracle coefficients fit in i64");
            max_coeff = max_coeff.max(coeff.abs());
            entries[s].push((t, coeff));
        }
        OracleComplex {
            degrees: gens.iter().map(|g| g.degree).collect(),
            entries,
            tower: towers[0],
        }
    }

    pub fn max_coeff(&self) -> i64 {
        self.entries
            .iter()
            .flatten()
            .map(|&(_, c)| c.abs())
            .max()
            .unwrap_or(1)
    }

    /// monomial basis in one degree: (generator, u-power), declaration order
    fn basis(&self, n: i64) -> Vec<(usize, i64)> {
        (0..self.degrees.len())
            .filter_map(|g| {
                let twice = n - self.degrees[g];
                if twice >= 0 && twice % 2 == 0 {
                    Some((g, twice / 2))
                } else {
                    None
                }
            })
            .collect()
    }

    /// target-coordinate contributions of each source coordinate
    fn columns(&self, n: i64) -> Columns {
        let src = self.basis(n);
        let tgt = self.basis(n + 1);
        let tgt_pos: std::collections::BTreeMap<usize, usize> =
            tgt.iter().enumerate().map(|(p, &(g, _))| (g, p)).collect();
        let cols = src
            .iter()
            .map(|&(g, _)| {
                self.entries[g]
                    .iter()
                    .map(|&(t, c)| (tgt_pos[&t], c))
                    .collect()
            })
            .collect();
        let tower_pos = src.iter().position(|&(g, _)| g == self.tower);
        (tgt.len(), cols, tower_pos)
    }

    /// gcd of tower coefficients over all integer cocycles in the box
    /// `[-half_width, half_width]^d`. Equals the engine's restriction index
    /// whenever the box contains a generating set of the cocycle lattice;
    /// the acceptance tests assert exact equality, so a box that is too
    /// small fails loudly rather than silently.
    pub fn restriction_index_box(&self, ell: i64, k: i64, half_width: i64) -> i64 {
        let n = ell + 2 * k;
        let (tdim, cols, tower_pos) = self.columns(n);
        let d = cols.len();
        let Some(tower_pos) = tower_pos else {
            return 0;
        };
        if d == 0 {
            return 0;
        }
        let mut v = vec![-half_width; d];
        let mut w = vec![0i64; tdim];
        let mut nonzero = 0usize;
        // initialize w = delta(v)
        for (i, col) in cols.iter().enumerate() {
            add_scaled(&mut w, &mut nonzero, col, v[i]);
        }
        let mut g: i64 = 0;
        loop {
            if nonzero == 0 {
                g = gcd(g, v[tower_pos].abs());
                if g == 1 {
                    return 1;
                }
            }
            // odometer step
            let mut i = 0;
            loop {
                if i == d {
                    return g;
                }
                if v[i] < half_width {
                    add_scaled(&mut w, &mut nonzero, &cols[i], 1);
                    v[i] += 1;
                    break;
                }
                add_scaled(&mut w, &mut nonzero, &cols[i], -2 * half_width);
                v[i] = -half_width;
                i += 1;
            }
        }
    }

    /// whether some mod-p cocycle has a nonzero tower coefficient
    pub fn restriction_nonzero_mod_p(&self, ell: i64, k: i64, p: u64) -> bool {
        let n = ell + 2 * k;
        let (tdim, cols, tower_pos) = self.columns(n);
        let Some(tower_pos) = tower_pos else {
            return false;
        };
        let p = p as i64;
        let mut found = false;
        enumerate_mod_p(cols.len(), p, |v| {
            if v[tower_pos] == 0 {
                return true;
            }
            let mut w = vec![0i64; tdim];
            for (i, col) in cols.iter().enumerate() {
                for &(t, c) in col {
                    w[t] = (w[t] + c.rem_euclid(p) * v[i]).rem_euclid(p);
                }
            }
            if w.iter().all(|&x| x == 0) {
                found = true;
                return false;
            }
            true
        });
        found
    }

    /// dim_{F_p} H^n by counting cocycles and image points
    pub fn dim_mod_p(&self, n: i64, p: u64) -> usize {
        let p = p as i64;
        let count_log = |m: i64| -> usize {
            // m is a power of p
            let mut log = 0;
            let mut acc = 1i64;
            while acc < m {
                acc *= p;
                log += 1;
            }
            assert_eq!(acc, m, "count is not a p-power");
            log
        };
        let (tdim, cols, _) = self.columns(n);
        let mut kernel_count = 0i64;
        enumerate_mod_p(cols.len(), p, |v| {
            let mut w = vec![0i64; tdim];
            for (i, col) in cols.iter().enumerate() {
                for &(t, c) in col {
                    w[t] = (w[t] + c.rem_euclid(p) * v[i]).rem_euclid(p);
                }
            }
            if w.iter().all(|&x| x == 0) {
                kernel_count += 1;
            }
            true
        });
        let dim_ker = count_log(kernel_count);
        // rank of the incoming differential by counting distinct images
        let (tdim_prev, cols_prev, _) = self.columns(n - 1);
        debug_assert_eq!(tdim_prev, cols.len());
        let mut images = std::collections::BTreeSet::new();
        enumerate_mod_p(cols_prev.len(), p, |v| {
            let mut w = vec![0i64; tdim_prev];
            for (i, col) in cols_prev.iter().enumerate() {
                for &(t, c) in col {
                    w[t] = (w[t] + c.rem_euclid(p) * v[i]).rem_euclid(p);
                }
            }
            images.insert(w);
            true
        });
        let rank_prev = count_log(images.len() as i64);
        dim_ker - rank_prev
    }
}

fn add_scaled(w: &mut [i64], nonzero: &mut usize, col: &[(usize, i64)], scale: i64) {
    if scale == 0 {
        return;
    }
    for &(t, c) in col {
        let before = w[t];
        let after = before
            .checked_add(c.checked_mul(scale).expect("oracle overflow"))
            .expect("oracle overflow");
        w[t] = after;
        match (before == 0, after == 0) {
            (true, false) => *nonzero += 1,
            (false, true) => *nonzero -= 1,
            _ => {}
        }
    }
}

fn enumerate_mod_p(d: usize, p: i64, mut visit: impl FnMut(&[i64]) -> bool) {
    let mut v = vec![0i64; d];
    loop {
        if !visit(&v) {
            return;
        }
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            if v[i] + 1 < p {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
