//! Torsion-infinite Hodge class certificates.
//!
//! A certificate from `A1` to `A2` is a weight `α0` of `A1`, degrees `r, s`
//! and a twist `t = (s − r)/2` such that
//!
//! ```text
//! r·α0 + t·χ = Σ_β e_β·β        (β running over the weights of A2, e_β ≥ 0, Σ e_β = s)
//! ```
//!
//! which places a Hodge class in `H^r(A1^m)^∨ ⊗ H^s(A2^n)(t)` once `m` and
//! `n` are large enough for the exterior powers to contain those weights.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cm::{CmType, WeightSystem};
use crate::error::{Error, Result};
use crate::group::FrameRef;
use crate::lattice::{qspan_contains, same_frame, CharLattice, GroupRingVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeWitness {
    pub alpha0: GroupRingVector,
    pub r: u64,
    pub s: u64,
    pub m: u64,
    pub n: u64,
    pub twist: i64,
    /// Nonzero exponents over distinct weights of the second CM type.
    pub coeffs: Vec<(GroupRingVector, u64)>,
}

impl HodgeWitness {
    pub fn frame(&self) -> &FrameRef {
        self.alpha0.frame()
    }

    /// `H^r(A1^m)^v ⊗ H^s(A2^n)(t)`.
    pub fn degree_descriptor(&self) -> String {
        format!(
            "H^{}(A1^{})^v ⊗ H^{}(A2^{})({})",
            self.r, self.m, self.s, self.n, self.twist
        )
    }

    /// `(r, s, t)`.
    pub fn degrees(&self) -> (u64, u64, i64) {
        (self.r, self.s, self.twist)
    }
}

impl fmt::Display for HodgeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rhs: Vec<String> = self
            .coeffs
            .iter()
            .map(|(w, e)| if *e == 1 { format!("({w})") } else { format!("{e}({w})") })
            .collect();
        let lead = if self.r == 1 { String::new() } else { self.r.to_string() };
        write!(f, "{lead}({}) = {}", self.alpha0, rhs.join(" + "))?;
        match self.twist {
            0 => Ok(()),
            1 => write!(f, " - χ"),
            t => write!(f, " - {t}χ"),
        }
    }
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDefect {
    FrameMismatch,
    ZeroDegree,
    OddTotalDegree,
    TwistMismatch,
    AlphaNotAWeight,
    CoefficientNotAWeight,
    RepeatedWeight,
    DegreeSumMismatch,
    FirstPowerTooSmall,
    SecondPowerTooSmall,
    EquationFails,
}

impl fmt::Display for WitnessDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            WitnessDefect::FrameMismatch => "witness and CM types live on different frames",
            WitnessDefect::ZeroDegree => "r, s, m and n must be positive",
            WitnessDefect::OddTotalDegree => "r + s is odd",
            WitnessDefect::TwistMismatch => "twist differs from (s - r)/2",
            WitnessDefect::AlphaNotAWeight => "alpha0 is not a weight of the first CM type",
            WitnessDefect::CoefficientNotAWeight => "a coefficient vector is not a weight of the second CM type",
            WitnessDefect::RepeatedWeight => "a weight appears twice among the coefficients",
            WitnessDefect::DegreeSumMismatch => "exponents do not sum to s",
            WitnessDefect::FirstPowerTooSmall => "r exceeds m times the multiplicity of alpha0",
            WitnessDefect::SecondPowerTooSmall => "an exponent exceeds n times its weight multiplicity",
            WitnessDefect::EquationFails => "r*alpha0 + t*chi differs from the weighted sum",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum Verification {
    Valid,
    Invalid(WitnessDefect),
}

impl Verification {
    pub fn is_valid(self) -> bool {
        self == Verification::Valid
    }
}

/// Re-checks every condition on a certificate with exact arithmetic.
pub fn verify_witness(w: &HodgeWitness, cm1: &CmType, cm2: &CmType) -> Verification {
    use WitnessDefect::*;
    let fail = Verification::Invalid;
    if same_frame(w.frame(), cm1.frame()).is_err()
        || same_frame(w.frame(), cm2.frame()).is_err()
        || w.coeffs.iter().any(|(b, _)| same_frame(w.frame(), b.frame()).is_err())
    {
        return fail(FrameMismatch);
    }
    if w.r == 0 || w.s == 0 || w.m == 0 || w.n == 0 {
        return fail(ZeroDegree);
    }
    if (w.r + w.s) % 2 != 0 {
        return fail(OddTotalDegree);
    }
    if 2 * i128::from(w.twist) != i128::from(w.s) - i128::from(w.r) {
        return fail(TwistMismatch);
    }
    let (ws1, ws2) = (cm1.weight_system(), cm2.weight_system());
    let mult_alpha = ws1.multiplicity_of(&w.alpha0) as u64;
    if mult_alpha == 0 {
        return fail(AlphaNotAWeight);
    }
    let mut seen = BTreeSet::new();
    let mut total: u64 = 0;
    let mut rhs = GroupRingVector::zero(w.frame());
    for (beta, e) in &w.coeffs {
        let Some(idx) = ws2.index_of(beta) else { return fail(CoefficientNotAWeight) };
        if !seen.insert(idx) {
            return fail(RepeatedWeight);
        }
        if *e > w.n.saturating_mul(ws2.multiplicities()[idx] as u64) {
            return fail(SecondPowerTooSmall);
        }
        total = total.saturating_add(*e);
        rhs = rhs.add(&beta.scaled(&BigInt::from(*e))).expect("frames checked");
    }
    if total != w.s {
        return fail(DegreeSumMismatch);
    }
    if w.r > w.m.saturating_mul(mult_alpha) {
        return fail(FirstPowerTooSmall);
    }
    let chi = GroupRingVector::norm_character(w.frame());
    let lhs = w
        .alpha0
        .scaled(&BigInt::from(w.r))
        .add(&chi.scaled(&BigInt::from(w.twist)))
        .expect("frames checked");
    if lhs != rhs {
        return fail(EquationFails);
    }
    Verification::Valid
}

/// Support of the weights of `∧^r(V^{⊕m})`: all `Σ e_β β` with
/// `0 ≤ e_β ≤ m·mult(β)` and `Σ e_β = r`, sorted and deduplicated.
pub fn exterior_support(ws: &WeightSystem, r: usize, m: usize) -> Vec<GroupRingVector> {
    let weights: Vec<Vec<i64>> = ws.weights().iter().map(GroupRingVector::small_coeffs).collect();
    let caps: Vec<usize> = ws.multiplicities().iter().map(|&k| k * m).collect();
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut acc = vec![0i64; ws.frame().order()];
    fn walk(
        i: usize,
        left: usize,
        weights: &[Vec<i64>],
        caps: &[usize],
        acc: &mut Vec<i64>,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        if left == 0 {
            out.insert(acc.clone());
            return;
        }
        if i == weights.len() {
            return;
        }
        let spare: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(spare);
        for e in lo..=caps[i].min(left) {
            for (a, w) in acc.iter_mut().zip(&weights[i]) {
                *a += e as i64 * w;
            }
            walk(i + 1, left - e, weights, caps, acc, out);
            for (a, w) in acc.iter_mut().zip(&weights[i]) {
                *a -= e as i64 * w;
            }
        }
    }
    walk(0, r, &weights, &caps, &mut acc, &mut out);
    out.into_iter()
        .map(|v| GroupRingVector::from_i64(ws.frame(), &v).expect("frame length"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_r: u64,
    pub max_t: u64,
}

impl SearchBounds {
    /// `max_r = max_t = |G|`.
    pub fn for_frame(frame: &FrameRef) -> Self {
        let n = frame.order() as u64;
        SearchBounds { max_r: n, max_t: n }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(HodgeWitness),
    /// The rational spans are not nested, so no certificate exists at any degree.
    ProvenAbsent,
    /// Inclusion holds but nothing was found within the bounds.
    BoundsExhausted(SearchBounds),
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&HodgeWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Exact nonnegative decomposition `target = Σ e_i·w_i` over 0/1 weight
/// masks, returning the lexicographically least exponent vector.
struct Decomposer<'a> {
    masks: &'a [u64],
    /// `cover[i]` = union of `masks[i..]`.
    cover: Vec<u64>,
}

impl<'a> Decomposer<'a> {
    fn new(masks: &'a [u64]) -> Self {
        let mut cover = vec![0u64; masks.len() + 1];
        for i in (0..masks.len()).rev() {
            cover[i] = cover[i + 1] | masks[i];
        }
        Decomposer { masks, cover }
    }

    fn solve(&self, target: &[i64], count: u64) -> Option<Vec<u64>> {
        let mut residual = target.to_vec();
        let mut e = vec![0u64; self.masks.len()];
        self.step(0, &mut residual, count as i64, &mut e).then_some(e)
    }

    /// Each coordinate can still be filled by the remaining weights, each
    /// capped by the smallest residual it touches.
    fn has_capacity(&self, i: usize, residual: &[i64], left: i64) -> bool {
        let mut room = vec![0i64; residual.len()];
        for &mask in &self.masks[i..] {
            let mut cap = left;
            let mut bits = mask;
            while bits != 0 {
                cap = cap.min(residual[bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
            if cap == 0 {
                continue;
            }
            let mut bits = mask;
            while bits != 0 {
                room[bits.trailing_zeros() as usize] += cap;
                bits &= bits - 1;
            }
        }
        residual.iter().zip(&room).all(|(&x, &y)| x <= y)
    }

    fn support(residual: &[i64]) -> u64 {
        residual.iter().enumerate().filter(|(_, &x)| x > 0).fold(0, |acc, (j, _)| acc | 1 << j)
    }

    fn step(&self, i: usize, residual: &mut [i64], left: i64, e: &mut [u64]) -> bool {
        if left == 0 {
            return residual.iter().all(|&x| x == 0);
        }
        if i == self.masks.len() || residual.iter().any(|&x| x > left) {
            return false;
        }
        let needed = Self::support(residual);
        if needed & !self.cover[i] != 0 {
            return false;
        }
        if !self.has_capacity(i, residual, left) {
            return false;
        }
        let mask = self.masks[i];
        let len = residual.len();
        let bits = move || (0..len).filter(move |&j| mask >> j & 1 == 1);
        let mut hi = bits().map(|j| residual[j]).min().unwrap_or(0).min(left);
        let mut lo = 0;
        // coordinates no later weight can reach pin the exponent down
        let orphaned = needed & !self.cover[i + 1];
        if orphaned != 0 {
            if orphaned & !mask != 0 {
                return false;
            }
            let j = orphaned.trailing_zeros() as usize;
            let forced = residual[j];
            if (0..residual.len()).any(|k| orphaned >> k & 1 == 1 && residual[k] != forced) {
                return false;
            }
            if forced > hi {
                return false;
            }
            lo = forced;
            hi = forced;
        }
        for value in lo..=hi {
            if value > 0 {
                for j in bits() {
                    residual[j] -= value;
                }
            }
            e[i] = value as u64;
            if self.step(i + 1, residual, left - value, e) {
                return true;
            }
            if value > 0 {
                for j in bits() {
                    residual[j] += value;
                }
            }
        }
        e[i] = 0;
        false
    }
}

fn mask_of(w: &GroupRingVector) -> u64 {
    w.coeffs().iter().enumerate().filter(|(_, c)| c.is_one()).fold(0, |acc, (j, _)| acc | 1 << j)
}

fn assemble(
    ws1: &WeightSystem,
    ws2: &WeightSystem,
    alpha_index: usize,
    r: u64,
    twist: i64,
    exponents: &[u64],
) -> HodgeWitness {
    let alpha0 = ws1.weights()[alpha_index].clone();
    let m = r.div_ceil(ws1.multiplicities()[alpha_index] as u64);
    let n = exponents
        .iter()
        .zip(ws2.multiplicities())
        .map(|(&e, &k)| e.div_ceil(k as u64))
        .max()
        .unwrap_or(0)
        .max(1);
    let coeffs: Vec<(GroupRingVector, u64)> = exponents
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| (ws2.weights()[i].clone(), e))
        .collect();
    let s = exponents.iter().sum();
    HodgeWitness { alpha0, r, s, m, n, twist, coeffs }
}

/// Searches `r = 1..=max_r`, then `t = 0..=max_t`, for a certificate with
/// `α0 = Σ_{φ∈Φ1} φ⁻¹` (every other weight of `A1` is a left translate of it
/// and gives the same feasible degrees). The first hit is minimal in
/// `(r, t)` and has the lexicographically least exponent vector.
pub fn find_witness(cm1: &CmType, cm2: &CmType, bounds: SearchBounds) -> Result<WitnessSearch> {
    same_frame(cm1.frame(), cm2.frame())?;
    if !qspan_contains(&cm2.mt_lattice(), &cm1.mt_lattice())? {
        return Ok(WitnessSearch::ProvenAbsent);
    }
    let frame = cm1.frame();
    assert!(frame.order() <= 64, "witness search supports frames of order at most 64");
    let (ws1, ws2) = (cm1.weight_system(), cm2.weight_system());
    let masks: Vec<u64> = ws2.weights().iter().map(mask_of).collect();
    let decomposer = Decomposer::new(&masks);
    let alpha = ws1.weights()[0].small_coeffs();
    let step = integral_multiple(cm2.mt_lattice(), &ws1.weights()[0]);
    for r in (step..=bounds.max_r).step_by(step as usize) {
        for t in 0..=bounds.max_t {
            let target: Vec<i64> = alpha.iter().map(|&a| r as i64 * a + t as i64).collect();
            if let Some(e) = decomposer.solve(&target, r + 2 * t) {
                return Ok(WitnessSearch::Found(assemble(&ws1, &ws2, 0, r, t as i64, &e)));
            }
        }
    }
    Ok(WitnessSearch::BoundsExhausted(bounds))
}

/// Least `k > 0` with `k·v` in the lattice, for `v` in its Q-span.
fn integral_multiple(lattice: &CharLattice, v: &GroupRingVector) -> u64 {
    let coords = crate::linalg::solve_rational(lattice.hnf(), v.coeffs()).expect("vector lies in the Q-span");
    let k = coords.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    k.to_u64().expect("lattice index fits in 64 bits")
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Input(format!("certificate entry {x} exceeds the 64-bit range")))
}

/// Builds a certificate from one rational solution of `α0 = Σ c_β β`:
/// negative terms are flipped with `β ↦ χ − β` (each flip contributes `−χ`)
/// and the common denominator becomes `r`.
pub fn witness_from_rational_solution(
    cm1: &CmType,
    cm2: &CmType,
    alpha0: &GroupRingVector,
) -> Result<HodgeWitness> {
    same_frame(cm1.frame(), cm2.frame())?;
    same_frame(cm1.frame(), alpha0.frame())?;
    let ws1 = cm1.weight_system();
    let alpha_index = ws1.index_of(alpha0).ok_or_else(|| Error::NotAWeight(alpha0.to_string()))?;
    let ws2 = cm2.weight_system();
    let span = CharLattice::new(cm2.frame(), ws2.weights().to_vec())?;
    let c = crate::lattice::solve_rational(&span, alpha0)?.ok_or(Error::SpanInclusionFails)?;

    let mut plus = vec![BigRational::zero(); c.len()];
    let mut chi = BigRational::zero();
    for (i, ci) in c.iter().enumerate() {
        if ci.is_negative() {
            plus[ws2.conjugate_index(i)] += ci.abs();
            chi += ci.abs();
        } else {
            plus[i] += ci;
        }
    }
    let denom = plus
        .iter()
        .chain(std::iter::once(&chi))
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scale = BigRational::from_integer(denom.clone());
    let exponents = plus
        .iter()
        .map(|q| to_u64(&(q * &scale).to_integer()))
        .collect::<Result<Vec<_>>>()?;
    let twist = (chi * scale).to_integer();
    let twist = twist.to_i64().ok_or_else(|| Error::Input(format!("twist {twist} exceeds the 64-bit range")))?;
    Ok(assemble(&ws1, &ws2, alpha_index, to_u64(&denom)?, twist, &exponents))
}
