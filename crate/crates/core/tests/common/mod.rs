#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use cmtk::{CmType, FiniteGroup, FrameRef, GaloisFrame, GroupRingVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn cyclic(n: usize) -> FrameRef {
    Arc::new(GaloisFrame::cyclic(n).unwrap())
}

pub fn cm(frame: &FrameRef, phi: &[usize]) -> CmType {
    CmType::new(frame, phi).unwrap()
}

/// Every group of even order ≤ 12 that has a central involution, paired
/// with each of its central involutions.
pub fn frames_up_to_12() -> Vec<(String, FrameRef)> {
    let c = |n| FiniteGroup::cyclic(n).unwrap();
    let groups: Vec<(&str, FiniteGroup)> = vec![
        ("Z2", c(2)),
        ("Z4", c(4)),
        ("Z6", c(6)),
        ("Z8", c(8)),
        ("Z10", c(10)),
        ("Z12", c(12)),
        ("Z2xZ2", c(2).direct_product(&c(2))),
        ("Z2xZ4", c(2).direct_product(&c(4))),
        ("Z2xZ2xZ2", c(2).direct_product(&c(2)).direct_product(&c(2))),
        ("Z2xZ6", c(2).direct_product(&c(6))),
        ("D4", FiniteGroup::dihedral(4).unwrap()),
        ("Q8", FiniteGroup::dicyclic(2).unwrap()),
        ("D6", FiniteGroup::dihedral(6).unwrap()),
        ("Dic3", FiniteGroup::dicyclic(3).unwrap()),
    ];
    let mut out = Vec::new();
    for (name, g) in groups {
        for x in 1..g.order() {
            if let Ok(f) = GaloisFrame::new(g.clone(), x) {
                out.push((format!("{name}/c={x}"), Arc::new(f)));
            }
        }
    }
    out
}

/// Weight vectors `σ·Φ⁻¹` straight from the multiplication table, with repeats.
pub fn raw_weights(t: &CmType) -> Vec<Vec<i64>> {
    let f = t.frame();
    (0..f.order())
        .map(|s| {
            let mut v = vec![0i64; f.order()];
            for &x in t.phi() {
                v[f.mul(s, f.inv(x))] += 1;
            }
            v
        })
        .collect()
}

/// Rank over Q by plain Gaussian elimination.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else { return 0 };
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let q = &m[i][col] / &m[r][col];
                for j in col..width {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

/// `span_Q(inner) ⊆ span_Q(outer)`.
pub fn qspan_inside(inner: &[Vec<i64>], outer: &[Vec<i64>]) -> bool {
    let both: Vec<Vec<i64>> = outer.iter().chain(inner).cloned().collect();
    rank(&both) == rank(outer)
}

/// Torsion-infinite verdict for `a` relative to `b`, by ranks alone.
pub fn oracle_pti(a: &CmType, b: &CmType) -> bool {
    qspan_inside(&raw_weights(a), &raw_weights(b))
}

pub fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut c in choose(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// gcd of all `k×k` minors.
pub fn minor_gcd(m: &[Vec<i64>], k: usize) -> i64 {
    let cols = m.first().map_or(0, Vec::len);
    let mut g = 0;
    for rs in choose(m.len(), k) {
        for cs in choose(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}

/// Nonzero invariant factors from determinantal divisors.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let top = m.len().min(m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=top {
        let d = minor_gcd(m, k);
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Same Z-span: equal rank and equal gcd of maximal minors for each side and their union.
pub fn same_lattice(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let both: Vec<Vec<i64>> = a.iter().chain(b).cloned().collect();
    let r = rank(&both);
    if rank(a) != r || rank(b) != r {
        return false;
    }
    r == 0 || (minor_gcd(a, r) == minor_gcd(&both, r) && minor_gcd(b, r) == minor_gcd(&both, r))
}

pub fn small(rows: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn vector(frame: &FrameRef, coeffs: &[i64]) -> GroupRingVector {
    GroupRingVector::from_i64(frame, coeffs).unwrap()
}

pub fn is_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

/// Integer basis of `{y : y·w = 0 for every row w}`, from a reduced echelon form over Q.
pub fn annihilator(rows: &[Vec<i64>], width: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let lead = m[r][col].clone();
        for x in m[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let q = m[i][col].clone();
                for j in 0..width {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut y = vec![BigRational::zero(); width];
            y[f] = BigRational::from_integer(BigInt::from(1));
            for (i, &p) in pivots.iter().enumerate() {
                y[p] = -m[i][f].clone();
            }
            let denom = y.iter().fold(BigInt::from(1), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
            y.iter().map(|q| (q * BigRational::from_integer(denom.clone())).to_integer()).collect()
        })
        .collect()
}

/// Whether every row of `inner` is killed by `ann`.
pub fn killed_by(inner: &[Vec<i64>], ann: &[Vec<BigInt>]) -> bool {
    ann.iter().all(|y| inner.iter().all(|w| y.iter().zip(w).map(|(a, &b)| a * b).sum::<BigInt>().is_zero()))
}
