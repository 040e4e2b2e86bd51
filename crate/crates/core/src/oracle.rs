//! Brute-force cross-checks behind `cmtk oracle`.
//!
//! Invariant factors and ranks come from determinantal divisors (gcds of all
//! `k×k` minors), which share no code with the elimination routines they
//! check. Lattice equality uses the fact that a rank-`r` generating set and
//! any of its sublattices of the same rank agree exactly when their gcds of
//! `r×r` minors agree.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cm::enumerate_cm_types;
use crate::group::GaloisFrame;
use crate::linalg::{self, IntMatrix};
use crate::verdict::decide_cm_pair;
use crate::witness::{find_witness, verify_witness, SearchBounds, WitnessSearch};

/// Exact determinant by fraction-free elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `d_k` = gcd of all `k×k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let top = m.len().min(ncols);
    (1..=top)
        .map(|k| {
            let mut g = BigInt::zero();
            for rows in subsets(m.len(), k) {
                for cols in subsets(ncols, k) {
                    let minor: IntMatrix = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    g = g.gcd(&determinant(&minor));
                }
            }
            g
        })
        .collect()
}

/// Nonzero invariant factors `d_k / d_{k-1}`.
pub fn invariant_factors(m: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let d = determinantal_divisors(m, ncols);
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for dk in d {
        if dk.is_zero() {
            break;
        }
        out.push(&dk / &prev);
        prev = dk;
    }
    out
}

pub fn rank(m: &[Vec<BigInt>], ncols: usize) -> usize {
    determinantal_divisors(m, ncols).iter().take_while(|d| !d.is_zero()).count()
}

/// Whether the row spans of `a` and `b` are the same lattice.
pub fn same_row_lattice(a: &[Vec<BigInt>], b: &[Vec<BigInt>], ncols: usize) -> bool {
    let both: IntMatrix = a.iter().chain(b).cloned().collect();
    let r = rank(&both, ncols);
    if rank(a, ncols) != r || rank(b, ncols) != r {
        return false;
    }
    if r == 0 {
        return true;
    }
    let top = |m: &[Vec<BigInt>]| determinantal_divisors(m, ncols)[r - 1].clone();
    let g = top(&both);
    top(a) == g && top(b) == g
}

/// Echelon shape with positive pivots and entries above each pivot in `[0, pivot)`.
pub fn is_hermite_shaped(h: &[Vec<BigInt>]) -> bool {
    let mut last: Option<usize> = None;
    for (i, row) in h.iter().enumerate() {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else { return false };
        if last.is_some_and(|q| p <= q) || !row[p].is_positive() {
            return false;
        }
        if h[..i].iter().any(|above| above[p].is_negative() || above[p] >= row[p]) {
            return false;
        }
        last = Some(p);
    }
    true
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    (0..rows)
        .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixCheck {
    pub cases: usize,
    pub hermite_failures: usize,
    pub smith_failures: usize,
    pub rank_failures: usize,
}

impl MatrixCheck {
    pub fn passed(&self) -> bool {
        self.hermite_failures == 0 && self.smith_failures == 0 && self.rank_failures == 0
    }
}

/// Compares Hermite and Smith forms with the minor-based oracle on random
/// `size×size` matrices with entries in `[-bound, bound]`.
pub fn check_random_matrices(seed: u64, cases: usize, size: usize, bound: i64) -> MatrixCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MatrixCheck { cases, ..MatrixCheck::default() };
    for _ in 0..cases {
        let m = random_matrix(&mut rng, size, size, bound);
        let h = linalg::hermite_form(&m, size);
        if !is_hermite_shaped(&h) || !same_row_lattice(&m, &h, size) {
            report.hermite_failures += 1;
        }
        if linalg::smith_diagonal(&m, size) != invariant_factors(&m, size) {
            report.smith_failures += 1;
        }
        if h.len() != rank(&m, size) {
            report.rank_failures += 1;
        }
    }
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSweep {
    pub frames: Vec<usize>,
    pub pairs: usize,
    pub torsion_infinite: usize,
    pub mismatches: usize,
}

/// On every cyclic frame of even order up to `max_order`, checks that a
/// certificate is found exactly for the torsion-infinite directions and
/// that each one verifies.
pub fn sweep_cyclic_pairs(max_order: usize) -> PairSweep {
    let mut sweep = PairSweep::default();
    for n in (2..=max_order).step_by(2) {
        let frame = Arc::new(GaloisFrame::cyclic(n).expect("even order"));
        let types = enumerate_cm_types(&frame);
        let bounds = SearchBounds::for_frame(&frame);
        for a in &types {
            for b in &types {
                sweep.pairs += 1;
                let infinite = decide_cm_pair(a, b).expect("same frame").direction_12.kind.is_infinite();
                sweep.torsion_infinite += infinite as usize;
                let ok = match find_witness(a, b, bounds).expect("same frame") {
                    WitnessSearch::Found(w) => infinite && verify_witness(&w, a, b).is_valid(),
                    WitnessSearch::ProvenAbsent => !infinite,
                    WitnessSearch::BoundsExhausted(_) => false,
                };
                sweep.mismatches += !ok as usize;
            }
        }
        sweep.frames.push(n);
    }
    sweep
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub seed: u64,
    pub matrices: MatrixCheck,
    pub pairs: PairSweep,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.matrices.passed() && self.pairs.mismatches == 0
    }
}

pub fn run_oracle(seed: u64, cases: usize, max_order: usize) -> OracleReport {
    OracleReport {
        seed,
        matrices: check_random_matrices(seed, cases, 3, 3),
        pairs: sweep_cyclic_pairs(max_order),
    }
}
