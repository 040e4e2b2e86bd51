//! Finite groups given by multiplication tables, and Galois frames: a finite
//! group together with a designated central involution playing the role of
//! complex conjugation.
//!
//! Elements are indices `0..order`, and index 0 is always the identity.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared handle to a frame. Every lattice, CM type and witness carries one.
pub type FrameRef = Arc<GaloisFrame>;

/// Which side a group element acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// A finite group stored as a full multiplication table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("abelian", &self.is_abelian())
            .finish()
    }
}

impl FiniteGroup {
    /// The cyclic group `Z/n`, element `k` standing for `σ^k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFrame("cyclic group of order 0".into()));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let inverse = (0..n).map(|a| (n - a) % n).collect();
        Ok(FiniteGroup { order: n, table, inverse })
    }

    /// Direct product `self × other`; the pair `(a, b)` gets index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n1, n2) = (self.order, other.order);
        let order = n1 * n2;
        let mut table = vec![0; order * order];
        for x in 0..order {
            for y in 0..order {
                let a = self.mul(x / n2, y / n2);
                let b = other.mul(x % n2, y % n2);
                table[x * order + y] = a * n2 + b;
            }
        }
        let inverse = (0..order)
            .map(|x| self.inv(x / n2) * n2 + other.inv(x % n2))
            .collect();
        FiniteGroup { order, table, inverse }
    }

    /// Dihedral group of order `2n`: `r^k s^e` has index `e * n + k`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFrame("dihedral group of order 0".into()));
        }
        let split = |x: usize| (x % n, x / n);
        let rows: Vec<Vec<usize>> = (0..2 * n)
            .map(|x| {
                let (a, e) = split(x);
                (0..2 * n)
                    .map(|y| {
                        let (b, f) = split(y);
                        let k = if e == 0 { a + b } else { a + n - b };
                        ((e + f) % 2) * n + k % n
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteGroup::from_table(&rows)?.0)
    }

    /// Dicyclic group of order `4m`, generated by `a` of order `2m` and `x`
    /// with `x² = a^m` and `x a x⁻¹ = a⁻¹`; `a^k x^e` has index `e * 2m + k`.
    pub fn dicyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidFrame("dicyclic group of order 0".into()));
        }
        let n = 2 * m;
        let split = |x: usize| (x % n, x / n);
        let rows: Vec<Vec<usize>> = (0..2 * n)
            .map(|x| {
                let (k, e) = split(x);
                (0..2 * n)
                    .map(|y| {
                        let (l, f) = split(y);
                        match (e, f) {
                            (0, _) => f * n + (k + l) % n,
                            (_, 0) => n + (k + n - l) % n,
                            _ => (k + n - l + m) % n,
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteGroup::from_table(&rows)?.0)
    }

    /// Validates an arbitrary multiplication table. If the identity is not at
    /// index 0 the elements are renumbered by swapping it into place; the
    /// returned permutation maps old indices to new ones.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<(Self, Vec<usize>)> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidFrame("empty multiplication table".into()));
        }
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidFrame("multiplication table is not square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::ElementOutOfRange { index: bad, order: n });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| Error::InvalidFrame("table has no identity".into()))?;

        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(0, identity);
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[perm[x] * n + perm[y]] = perm[rows[x][y]];
            }
        }

        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b];
                for c in 0..n {
                    if table[ab * n + c] != table[a * n + table[b * n + c]] {
                        return Err(Error::InvalidFrame(format!(
                            "table is not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a * n + b] == 0 && table[b * n + a] == 0) {
                Some(b) => inverse[a] = b,
                None => return Err(Error::InvalidFrame(format!("element {a} has no inverse"))),
            }
        }
        Ok((FiniteGroup { order: n, table, inverse }, perm))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, z: usize) -> bool {
        (0..self.order).all(|a| self.mul(a, z) == self.mul(z, a))
    }

    pub fn check_element(&self, x: usize) -> Result<()> {
        if x < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: x, order: self.order })
        }
    }
}

/// Declarative description of a frame, as it appears in config files.
///
/// `{"cyclic": n}` or `{"product": [n1, ..., nk], "conj": [e1, ..., ek]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameSpec {
    Cyclic { cyclic: usize },
    Product { product: Vec<usize>, conj: Vec<usize> },
    Dihedral { dihedral: usize },
    Dicyclic { dicyclic: usize },
}

impl FrameSpec {
    pub fn build(&self) -> Result<FrameRef> {
        let frame = match self {
            FrameSpec::Cyclic { cyclic } => GaloisFrame::cyclic(*cyclic)?,
            FrameSpec::Product { product, conj } => GaloisFrame::product_of_cyclics(product, conj)?,
            FrameSpec::Dihedral { dihedral } => GaloisFrame::dihedral(*dihedral)?,
            FrameSpec::Dicyclic { dicyclic } => GaloisFrame::dicyclic(*dicyclic)?,
        };
        Ok(Arc::new(frame))
    }

    /// Order of the frame this spec describes, without building the table.
    pub fn order(&self) -> usize {
        match self {
            FrameSpec::Cyclic { cyclic } => *cyclic,
            FrameSpec::Product { product, .. } => product.iter().product(),
            FrameSpec::Dihedral { dihedral } => 2 * dihedral,
            FrameSpec::Dicyclic { dicyclic } => 4 * dicyclic,
        }
    }
}

impl fmt::Display for FrameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameSpec::Cyclic { cyclic } => write!(f, "Z/{cyclic}"),
            FrameSpec::Product { product, conj } => {
                let factors: Vec<String> = product.iter().map(|n| format!("Z/{n}")).collect();
                write!(f, "{} with c = {:?}", factors.join(" x "), conj)
            }
            FrameSpec::Dihedral { dihedral } => write!(f, "D{dihedral}"),
            FrameSpec::Dicyclic { dicyclic } => write!(f, "Dic{dicyclic}"),
        }
    }
}

/// A finite group with a designated central involution `c`, standing in for
/// the Galois group of a Galois CM field with complex conjugation.
#[derive(Clone)]
pub struct GaloisFrame {
    group: FiniteGroup,
    conj: usize,
    spec: Option<FrameSpec>,
}

impl fmt::Debug for GaloisFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisFrame")
            .field("order", &self.order())
            .field("conj", &self.conj)
            .field("spec", &self.spec)
            .finish()
    }
}

impl PartialEq for GaloisFrame {
    fn eq(&self, other: &Self) -> bool {
        self.conj == other.conj && self.group == other.group
    }
}

impl Eq for GaloisFrame {}

impl GaloisFrame {
    /// Attaches a conjugation to a group after checking it is a central involution.
    pub fn new(group: FiniteGroup, conj: usize) -> Result<Self> {
        group.check_element(conj)?;
        if conj == 0 || group.mul(conj, conj) != 0 || !group.is_central(conj) {
            return Err(Error::NotCentralInvolution(conj));
        }
        if group.order() % 2 != 0 {
            return Err(Error::InvalidFrame("frame order must be even".into()));
        }
        Ok(GaloisFrame { group, conj, spec: None })
    }

    /// `Z/n` with `c = n/2`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidFrame(format!(
                "cyclic frame needs a positive even order, got {n}"
            )));
        }
        let mut frame = GaloisFrame::new(FiniteGroup::cyclic(n)?, n / 2)?;
        frame.spec = Some(FrameSpec::Cyclic { cyclic: n });
        Ok(frame)
    }

    /// Product `Z/n1 × ... × Z/nk` with conjugation given coordinate-wise.
    pub fn product_of_cyclics(factors: &[usize], conj: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidFrame("product of zero factors".into()));
        }
        if factors.len() != conj.len() {
            return Err(Error::InvalidFrame(format!(
                "{} factors but {} conjugation coordinates",
                factors.len(),
                conj.len()
            )));
        }
        let mut group = FiniteGroup::cyclic(factors[0])?;
        for &n in &factors[1..] {
            group = group.direct_product(&FiniteGroup::cyclic(n)?);
        }
        let mut index = 0;
        for (&n, &e) in factors.iter().zip(conj) {
            if e >= n {
                return Err(Error::ElementOutOfRange { index: e, order: n });
            }
            index = index * n + e;
        }
        let mut frame = GaloisFrame::new(group, index)?;
        frame.spec = Some(FrameSpec::Product { product: factors.to_vec(), conj: conj.to_vec() });
        Ok(frame)
    }

    /// Dihedral frame of order `2n` (`n` even) with `c = r^{n/2}`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidFrame(format!(
                "dihedral frame needs an even rotation order, got {n}"
            )));
        }
        let mut frame = GaloisFrame::new(FiniteGroup::dihedral(n)?, n / 2)?;
        frame.spec = Some(FrameSpec::Dihedral { dihedral: n });
        Ok(frame)
    }

    /// Dicyclic frame of order `4m` with `c = a^m = x²`.
    pub fn dicyclic(m: usize) -> Result<Self> {
        let mut frame = GaloisFrame::new(FiniteGroup::dicyclic(m)?, m)?;
        frame.spec = Some(FrameSpec::Dicyclic { dicyclic: m });
        Ok(frame)
    }

    /// `a × Z/n` with conjugation `(conj.0, conj.1)`.
    pub fn product_frame(a: &FiniteGroup, n: usize, conj: (usize, usize)) -> Result<Self> {
        a.check_element(conj.0)?;
        let b = FiniteGroup::cyclic(n)?;
        b.check_element(conj.1)?;
        GaloisFrame::new(a.direct_product(&b), conj.0 * n + conj.1)
    }

    /// Frame from an explicit table. `conj` is given in the table's own numbering.
    pub fn from_table(rows: &[Vec<usize>], conj: usize) -> Result<Self> {
        let (group, perm) = FiniteGroup::from_table(rows)?;
        group.check_element(conj)?;
        GaloisFrame::new(group, perm[conj])
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn conj(&self) -> usize {
        self.conj
    }

    pub fn spec(&self) -> Option<&FrameSpec> {
        self.spec.as_ref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.group.inv(a)
    }

    pub fn is_abelian(&self) -> bool {
        self.group.is_abelian()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn check_subset(&self, subset: &[usize]) -> Result<()> {
        subset.iter().try_for_each(|&x| self.group.check_element(x))
    }
}

/// A subgroup of a frame, stored as a sorted list of element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    frame: FrameRef,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    fn is_closed(&self) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&a| {
                self.contains(self.frame.inv(a))
                    && self.elements.iter().all(|&b| self.contains(self.frame.mul(a, b)))
            })
    }
}

/// `{g·x}` (left) or `{x·g}` (right) for `x` in `subset`, sorted and deduplicated.
pub fn translate(frame: &GaloisFrame, subset: &[usize], g: usize, side: Side) -> Vec<usize> {
    let image: BTreeSet<usize> = subset
        .iter()
        .map(|&x| match side {
            Side::Left => frame.mul(g, x),
            Side::Right => frame.mul(x, g),
        })
        .collect();
    image.into_iter().collect()
}

/// Elements whose translation on `side` fixes `subset` setwise.
pub fn stabilizer(frame: &FrameRef, subset: &[usize], side: Side) -> Subgroup {
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    let sorted: Vec<usize> = set.iter().copied().collect();
    let elements = frame
        .elements()
        .filter(|&g| translate(frame, &sorted, g, side) == sorted)
        .collect();
    let sub = Subgroup { frame: Arc::clone(frame), elements };
    debug_assert!(sub.is_closed(), "stabilizer is not closed");
    sub
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quaternion_table() -> Vec<Vec<usize>> {
        // 0=1 1=i 2=j 3=k 4=-1 5=-i 6=-j 7=-k
        let unit = |x: usize| (x % 4, x >= 4);
        let base = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (a, sa) = unit(x);
                        let (b, sb) = unit(y);
                        let (c, sc) = base(a, b);
                        c + if sa ^ sb ^ sc { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cyclic_frames() {
        let f = GaloisFrame::cyclic(2).unwrap();
        assert_eq!((f.order(), f.conj()), (2, 1));
        let f = GaloisFrame::cyclic(12).unwrap();
        assert_eq!((f.order(), f.conj()), (12, 6));
        let f = GaloisFrame::cyclic(10).unwrap();
        assert_eq!((f.order(), f.conj()), (10, 5));
        assert!(GaloisFrame::cyclic(7).is_err());
        assert!(GaloisFrame::cyclic(0).is_err());
    }

    #[test]
    fn dihedral_and_dicyclic_frames() {
        let d6 = GaloisFrame::dihedral(6).unwrap();
        assert_eq!((d6.order(), d6.conj()), (12, 3));
        assert!(!d6.group().is_abelian());
        assert!(GaloisFrame::dihedral(3).is_err());

        let dic3 = GaloisFrame::dicyclic(3).unwrap();
        assert_eq!((dic3.order(), dic3.conj()), (12, 3));
        assert!(!dic3.group().is_abelian());

        // Dic2 is the quaternion group: a single involution
        let q = FiniteGroup::dicyclic(2).unwrap();
        let involutions = (1..8).filter(|&x| q.mul(x, x) == 0).count();
        assert_eq!(involutions, 1);
        let (q8, _) = FiniteGroup::from_table(&quaternion_table()).unwrap();
        let orders = |g: &FiniteGroup| {
            let mut v: Vec<usize> = (0..8)
                .map(|x| (1..=8).find(|&k| (0..k).fold(0, |acc, _| g.mul(acc, x)) == 0).unwrap())
                .collect();
            v.sort();
            v
        };
        assert_eq!(orders(&q), orders(&q8));

        let spec: FrameSpec = serde_json::from_str(r#"{"dicyclic": 3}"#).unwrap();
        assert_eq!(spec.order(), 12);
        assert_eq!(*spec.build().unwrap(), dic3);
    }

    #[test]
    fn product_frames() {
        let klein = GaloisFrame::product_of_cyclics(&[2, 2], &[1, 0]).unwrap();
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.conj(), 2);

        let f = GaloisFrame::product_of_cyclics(&[2, 6], &[1, 3]).unwrap();
        assert_eq!(f.order(), 12);
        let c = f.conj();
        assert_eq!(f.mul(c, c), 0);
        assert!(f.elements().all(|g| f.mul(g, c) == f.mul(c, g)));

        let z2 = FiniteGroup::cyclic(2).unwrap();
        let g = GaloisFrame::product_frame(&z2, 6, (1, 3)).unwrap();
        assert_eq!(g, f);

        // element of order 4 is not an involution
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert_eq!(GaloisFrame::new(z4, 1), Err(Error::NotCentralInvolution(1)));
        assert!(GaloisFrame::product_of_cyclics(&[2, 2], &[0, 0]).is_err());
    }

    #[test]
    fn table_frames_renumber_identity() {
        // Z/4 written with the identity at index 2
        let rows = vec![
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
            vec![0, 1, 2, 3],
            vec![1, 2, 3, 0],
        ];
        let f = GaloisFrame::from_table(&rows, 0).unwrap();
        assert_eq!(f.mul(0, 3), 3);
        assert_eq!(f.conj(), 2);
        assert!(GaloisFrame::from_table(&rows, 3).is_err());
    }

    #[test]
    fn quaternion_frame_is_nonabelian() {
        let f = GaloisFrame::from_table(&quaternion_table(), 4).unwrap();
        assert!(!f.is_abelian());
        assert_eq!(f.conj(), 4);
        // i is not central
        assert!(GaloisFrame::from_table(&quaternion_table(), 1).is_err());
        let f = Arc::new(f);
        let stab = stabilizer(&f, &[0, 1, 4, 5], Side::Left);
        assert_eq!(stab.elements(), &[0, 1, 4, 5]);
    }

    #[test]
    fn bad_tables() {
        assert!(GaloisFrame::from_table(&[vec![0, 1], vec![1, 1]], 1).is_err());
        assert!(GaloisFrame::from_table(&[vec![0, 2], vec![1, 0]], 1).is_err());
        assert!(GaloisFrame::from_table(&[vec![0, 1]], 1).is_err());
    }

    #[test]
    fn translations() {
        let f = GaloisFrame::cyclic(6).unwrap();
        assert_eq!(translate(&f, &[0, 2, 4], 2, Side::Left), vec![0, 2, 4]);
        let f = GaloisFrame::cyclic(10).unwrap();
        assert_eq!(translate(&f, &[0, 2, 4, 6, 8], 1, Side::Left), vec![1, 3, 5, 7, 9]);
        let f = GaloisFrame::cyclic(12).unwrap();
        assert_eq!(
            translate(&f, &[0, 1, 2, 3, 4, 5], 6, Side::Left),
            vec![6, 7, 8, 9, 10, 11]
        );
    }

    #[test]
    fn stabilizers() {
        let f = Arc::new(GaloisFrame::cyclic(10).unwrap());
        let s = stabilizer(&f, &[0, 2, 4, 6, 8], Side::Right);
        assert_eq!(s.elements(), &[0, 2, 4, 6, 8]);
        assert!(stabilizer(&f, &[0, 1, 2, 3, 4], Side::Right).is_trivial());
        let all: Vec<usize> = f.elements().collect();
        assert_eq!(stabilizer(&f, &all, Side::Left).order(), 10);
    }

    #[test]
    fn left_action_composes() {
        let f = GaloisFrame::from_table(&quaternion_table(), 4).unwrap();
        let s = [0, 1, 2];
        for g in f.elements() {
            for h in f.elements() {
                let once = translate(&f, &translate(&f, &s, g, Side::Left), h, Side::Left);
                assert_eq!(once, translate(&f, &s, f.mul(h, g), Side::Left));
            }
        }
    }
}
