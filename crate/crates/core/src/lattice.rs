//! Character lattices inside the group ring `Z[G]` of a frame, and the
//! finitely generated abelian groups that arise as their quotients.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FrameRef;
use crate::linalg::{self, IntMatrix};

pub(crate) fn same_frame(a: &FrameRef, b: &FrameRef) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::FrameMismatch)
    }
}

/// An element of `Z[G]`: coordinate `i` is the coefficient of group element `i`.
#[derive(Clone)]
pub struct GroupRingVector {
    frame: FrameRef,
    coeffs: Vec<BigInt>,
}

impl PartialEq for GroupRingVector {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && same_frame(&self.frame, &other.frame).is_ok()
    }
}

impl Eq for GroupRingVector {}

impl fmt::Debug for GroupRingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints as a sum of powers of `σ`, e.g. `1 + σ^2 - 2σ^5`. For product
/// frames the exponent is just the element index.
impl fmt::Display for GroupRingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let unit = match i {
                0 => "1".to_string(),
                1 => "σ".to_string(),
                _ => format!("σ^{i}"),
            };
            if mag.is_one() {
                write!(f, "{unit}")?;
            } else if i == 0 {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}{unit}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl GroupRingVector {
    pub fn new(frame: &FrameRef, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != frame.order() {
            return Err(Error::LengthMismatch { expected: frame.order(), found: coeffs.len() });
        }
        Ok(GroupRingVector { frame: Arc::clone(frame), coeffs })
    }

    pub fn from_i64(frame: &FrameRef, coeffs: &[i64]) -> Result<Self> {
        Self::new(frame, coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(frame: &FrameRef) -> Self {
        GroupRingVector { frame: Arc::clone(frame), coeffs: vec![BigInt::zero(); frame.order()] }
    }

    /// Sum of the listed elements, each with coefficient one.
    pub fn indicator(frame: &FrameRef, elements: &[usize]) -> Result<Self> {
        frame.check_subset(elements)?;
        let mut v = Self::zero(frame);
        for &e in elements {
            v.coeffs[e] += 1;
        }
        Ok(v)
    }

    /// The norm character `χ`: the sum of all group elements.
    pub fn norm_character(frame: &FrameRef) -> Self {
        GroupRingVector { frame: Arc::clone(frame), coeffs: vec![BigInt::one(); frame.order()] }
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficients as `i64`; panics on overflow, only meant for 0/1 weights
    /// and other small vectors.
    pub fn small_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.to_i64().expect("coefficient exceeds i64")).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Sum of the coefficients (the degree under `Z[G] → Z`).
    pub fn augmentation(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        GroupRingVector { frame: Arc::clone(&self.frame), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_frame(&self.frame, &other.frame)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(GroupRingVector { frame: Arc::clone(&self.frame), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_frame(&self.frame, &other.frame)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(GroupRingVector { frame: Arc::clone(&self.frame), coeffs })
    }

    /// Left multiplication by a group element: `g · Σ a_x x = Σ a_x (g x)`.
    pub fn left_translate(&self, g: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len()];
        for (x, c) in self.coeffs.iter().enumerate() {
            coeffs[self.frame.mul(g, x)] = c.clone();
        }
        GroupRingVector { frame: Arc::clone(&self.frame), coeffs }
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/d_i`, with
/// `d_1 | d_2 | ...` and every `d_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_util::biguint_list")]
    pub torsion: Vec<BigUint>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    /// Builds the canonical form from any list of cyclic orders (zeros count
    /// as free summands, ones are dropped).
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|d| d.is_zero()).count();
        let mut finite: Vec<BigUint> = orders
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| d.abs().to_biguint().expect("absolute value is non-negative"))
            .collect();
        // pairwise (gcd, lcm) sweeps turn any list into a divisibility chain
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                let g = finite[i].gcd(&finite[j]);
                let l = finite[i].lcm(&finite[j]);
                finite[i] = g;
                finite[j] = l;
            }
        }
        finite.retain(|d| !d.is_one());
        FgAbelianGroup { free_rank, torsion: finite }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }

    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel `Z^ncols / rowspan(rows)`.
pub fn smith_invariants(rows: &[Vec<BigInt>], ncols: usize) -> FgAbelianGroup {
    let diag = linalg::smith_diagonal(rows, ncols);
    let mut orders = diag;
    orders.resize(ncols, BigInt::zero());
    FgAbelianGroup::from_cyclic_orders(&orders)
}

/// Hermite normal form of the Z-span of `rows`.
pub fn hermite_form(rows: &[GroupRingVector]) -> Result<IntMatrix> {
    let Some(first) = rows.first() else { return Ok(Vec::new()) };
    let frame = &first.frame;
    for r in rows {
        same_frame(frame, &r.frame)?;
    }
    let m: IntMatrix = rows.iter().map(|r| r.coeffs.clone()).collect();
    Ok(linalg::hermite_form(&m, frame.order()))
}

/// A sublattice of `Z[G]`, given by generators. The Hermite basis is
/// computed on first use and cached.
pub struct CharLattice {
    frame: FrameRef,
    generators: Vec<GroupRingVector>,
    hnf: OnceLock<IntMatrix>,
}

impl Clone for CharLattice {
    fn clone(&self) -> Self {
        let hnf = OnceLock::new();
        if let Some(h) = self.hnf.get() {
            let _ = hnf.set(h.clone());
        }
        CharLattice { frame: Arc::clone(&self.frame), generators: self.generators.clone(), hnf }
    }
}

impl fmt::Debug for CharLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharLattice")
            .field("order", &self.frame.order())
            .field("generators", &self.generators.len())
            .field("rank", &self.rank())
            .finish()
    }
}

/// Equality of lattices, not of generator lists.
impl PartialEq for CharLattice {
    fn eq(&self, other: &Self) -> bool {
        same_frame(&self.frame, &other.frame).is_ok() && self.hnf() == other.hnf()
    }
}

impl Eq for CharLattice {}

impl CharLattice {
    pub fn new(frame: &FrameRef, generators: Vec<GroupRingVector>) -> Result<Self> {
        for g in &generators {
            same_frame(frame, &g.frame)?;
        }
        Ok(CharLattice { frame: Arc::clone(frame), generators, hnf: OnceLock::new() })
    }

    pub fn from_rows(frame: &FrameRef, rows: IntMatrix) -> Result<Self> {
        let generators = rows
            .into_iter()
            .map(|r| GroupRingVector::new(frame, r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, generators)
    }

    pub fn zero(frame: &FrameRef) -> Self {
        CharLattice { frame: Arc::clone(frame), generators: Vec::new(), hnf: OnceLock::new() }
    }

    /// All of `Z[G]`.
    pub fn full(frame: &FrameRef) -> Self {
        let n = frame.order();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_rows(frame, rows).expect("rows have frame length")
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn generators(&self) -> &[GroupRingVector] {
        &self.generators
    }

    pub fn hnf(&self) -> &IntMatrix {
        self.hnf.get_or_init(|| {
            let m: IntMatrix = self.generators.iter().map(|g| g.coeffs.clone()).collect();
            linalg::hermite_form(&m, self.frame.order())
        })
    }

    pub fn rank(&self) -> usize {
        self.hnf().len()
    }

    pub fn basis(&self) -> Vec<GroupRingVector> {
        self.hnf()
            .iter()
            .map(|r| GroupRingVector { frame: Arc::clone(&self.frame), coeffs: r.clone() })
            .collect()
    }

    /// The same lattice with its Hermite basis as generators.
    pub fn canonical(&self) -> CharLattice {
        let lat = CharLattice {
            frame: Arc::clone(&self.frame),
            generators: self.basis(),
            hnf: OnceLock::new(),
        };
        let _ = lat.hnf.set(self.hnf().clone());
        lat
    }

    pub fn contains(&self, v: &GroupRingVector) -> Result<bool> {
        same_frame(&self.frame, &v.frame)?;
        Ok(linalg::hermite_coordinates(self.hnf(), &v.coeffs).is_some())
    }

    pub fn is_sublattice_of(&self, other: &CharLattice) -> Result<bool> {
        same_frame(&self.frame, &other.frame)?;
        Ok(self
            .hnf()
            .iter()
            .all(|r| linalg::hermite_coordinates(other.hnf(), r).is_some()))
    }

    pub fn scaled(&self, k: i64) -> CharLattice {
        let k = BigInt::from(k);
        let generators = self.generators.iter().map(|g| g.scaled(&k)).collect();
        CharLattice { frame: Arc::clone(&self.frame), generators, hnf: OnceLock::new() }
    }

    /// `(self ⊗ Q) ∩ Z[G]`.
    pub fn saturation(&self) -> CharLattice {
        let n = self.frame.order();
        let h = self.hnf();
        // integer vectors orthogonal to the lattice, then everything orthogonal to those
        let orth = linalg::left_kernel(&linalg::transpose(h, n), h.len());
        let sat = linalg::left_kernel(&linalg::transpose(&orth, n), orth.len());
        CharLattice::from_rows(&self.frame, sat).expect("kernel rows have frame length")
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation() == *self
    }
}

/// `true` iff every generator of `inner` lies in the Q-span of `outer`.
pub fn qspan_contains(outer: &CharLattice, inner: &CharLattice) -> Result<bool> {
    same_frame(&outer.frame, &inner.frame)?;
    let sum = lattice_sum(outer, inner)?;
    Ok(sum.rank() == outer.rank())
}

pub fn lattice_sum(a: &CharLattice, b: &CharLattice) -> Result<CharLattice> {
    same_frame(&a.frame, &b.frame)?;
    let generators = a.basis().into_iter().chain(b.basis()).collect();
    CharLattice::new(&a.frame, generators)
}

/// Exact intersection, from the integer left kernel of the stacked bases.
pub fn lattice_intersection(a: &CharLattice, b: &CharLattice) -> Result<CharLattice> {
    same_frame(&a.frame, &b.frame)?;
    let n = a.frame.order();
    let (ha, hb) = (a.hnf(), b.hnf());
    let stacked: IntMatrix = ha.iter().chain(hb.iter()).cloned().collect();
    let kernel = linalg::left_kernel(&stacked, n);
    // (x, y)·[A; B] = 0 gives x·A = -y·B in both lattices
    let rows: IntMatrix = kernel
        .iter()
        .map(|k| {
            let mut v = vec![BigInt::zero(); n];
            for (x, row) in k[..ha.len()].iter().zip(ha) {
                if x.is_zero() {
                    continue;
                }
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi += x * ri;
                }
            }
            v
        })
        .collect();
    let lat = CharLattice::from_rows(&a.frame, linalg::hermite_form(&rows, n))?;
    Ok(lat.canonical())
}

/// `num / (num ∩ den)`, computed as `(num + den) / den`. `den` need not lie inside `num`.
pub fn quotient_group(num: &CharLattice, den: &CharLattice) -> Result<FgAbelianGroup> {
    let sum = lattice_sum(num, den)?;
    let h = sum.hnf();
    let coords: IntMatrix = den
        .hnf()
        .iter()
        .map(|r| linalg::hermite_coordinates(h, r).expect("summand lies in the sum"))
        .collect();
    Ok(smith_invariants(&coords, h.len()))
}

/// One rational solution expressing `target` over `lattice`'s generator list
/// (in stored order), or `None` when `target` is outside the Q-span.
pub fn solve_rational(lattice: &CharLattice, target: &GroupRingVector) -> Result<Option<Vec<BigRational>>> {
    same_frame(&lattice.frame, &target.frame)?;
    let gens: IntMatrix = lattice.generators.iter().map(|g| g.coeffs.clone()).collect();
    Ok(linalg::solve_rational(&gens, &target.coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GaloisFrame;

    fn frame(n: usize) -> FrameRef {
        Arc::new(GaloisFrame::cyclic(n).unwrap())
    }

    fn lat(f: &FrameRef, rows: &[&[i64]]) -> CharLattice {
        let gens = rows.iter().map(|r| GroupRingVector::from_i64(f, r).unwrap()).collect();
        CharLattice::new(f, gens).unwrap()
    }

    #[test]
    fn hermite_examples_on_order_two_frame() {
        let f = frame(2);
        let l = lat(&f, &[&[2, 0], &[0, 3]]);
        assert_eq!(l.hnf(), &linalg::to_big(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(l.rank(), 2);
        let l = lat(&f, &[&[1, 1], &[1, -1]]);
        assert_eq!(l.hnf(), &linalg::to_big(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(lat(&f, &[&[0, 0]]).rank(), 0);
    }

    #[test]
    fn smith_invariant_examples() {
        let g = smith_invariants(&linalg::to_big(&[vec![2, 0], vec![0, 3]]), 2);
        assert_eq!(g, FgAbelianGroup { free_rank: 0, torsion: vec![6u32.into()] });
        let g = smith_invariants(&linalg::to_big(&[vec![0, 0]]), 2);
        assert_eq!(g, FgAbelianGroup { free_rank: 2, torsion: vec![] });
        let g = smith_invariants(&linalg::to_big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), 3);
        assert!(g.is_trivial());
    }

    #[test]
    fn canonical_cyclic_orders() {
        let g = FgAbelianGroup::from_cyclic_orders(&[4.into(), 6.into(), 1.into(), 0.into()]);
        assert_eq!(g.free_rank, 1);
        assert_eq!(g.torsion, vec![BigUint::from(2u32), BigUint::from(12u32)]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        let g = FgAbelianGroup::from_cyclic_orders(&[3.into(), 3.into()]);
        assert_eq!(g.to_string(), "(Z/3)^2");
    }

    #[test]
    fn sum_intersection_quotient() {
        let f = frame(2);
        let l = lat(&f, &[&[1, 1], &[0, 2]]);
        let zero = CharLattice::zero(&f);
        assert_eq!(lattice_sum(&l, &zero).unwrap(), l);
        assert_eq!(lattice_intersection(&l, &l).unwrap(), l);
        assert!(quotient_group(&l, &l).unwrap().is_trivial());
        assert_eq!(quotient_group(&l, &zero).unwrap().free_rank, 2);

        let a = lat(&f, &[&[2, 0], &[0, 1]]);
        let b = lat(&f, &[&[1, 0], &[0, 3]]);
        assert_eq!(lattice_intersection(&a, &b).unwrap(), lat(&f, &[&[2, 0], &[0, 3]]));
        assert_eq!(lattice_sum(&a, &b).unwrap(), CharLattice::full(&f));
        let q = quotient_group(&a, &b).unwrap();
        assert_eq!(q.torsion, vec![BigUint::from(3u32)]);
    }

    #[test]
    fn qspan_and_solve() {
        let f = frame(4);
        let outer = lat(&f, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let inner = lat(&f, &[&[2, 2, 3, 3]]);
        assert!(qspan_contains(&outer, &inner).unwrap());
        assert!(!qspan_contains(&inner, &outer).unwrap());
        assert!(qspan_contains(&outer, &outer).unwrap());

        let t = outer.generators()[0].clone();
        let sol = solve_rational(&outer, &t).unwrap().unwrap();
        assert_eq!(sol, vec![BigRational::one(), BigRational::zero()]);
        let off = GroupRingVector::from_i64(&f, &[1, 0, 0, 0]).unwrap();
        assert!(solve_rational(&outer, &off).unwrap().is_none());
    }

    #[test]
    fn saturation_of_scaled_lattice() {
        let f = frame(4);
        let l = lat(&f, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let tripled = l.scaled(3);
        assert!(!tripled.is_saturated());
        assert_eq!(tripled.saturation(), l);
        assert!(CharLattice::zero(&f).saturation().rank() == 0);
        assert_eq!(CharLattice::full(&f).saturation(), CharLattice::full(&f));
    }

    #[test]
    fn frame_mismatch_is_rejected() {
        let a = CharLattice::full(&frame(2));
        let b = CharLattice::full(&frame(4));
        assert_eq!(lattice_sum(&a, &b).unwrap_err(), Error::FrameMismatch);
        assert_eq!(qspan_contains(&a, &b).unwrap_err(), Error::FrameMismatch);
        assert_eq!(quotient_group(&a, &b).unwrap_err(), Error::FrameMismatch);
    }

    #[test]
    fn display_of_vectors() {
        let f = frame(6);
        let v = GroupRingVector::from_i64(&f, &[1, 0, 1, 0, -2, 0]).unwrap();
        assert_eq!(v.to_string(), "1 + σ^2 - 2σ^4");
        assert_eq!(GroupRingVector::zero(&f).to_string(), "0");
    }
}
