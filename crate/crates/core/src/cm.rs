//! CM types on a Galois frame and the character lattices of their
//! Mumford–Tate tori.
//!
//! A CM type `Φ` picks one element out of every pair `{x, c·x}`. Its weight
//! system is the Galois orbit `{σ·Φ⁻¹ : σ ∈ G}` of the indicator vector of
//! `Φ⁻¹ = {φ⁻¹ : φ ∈ Φ}`, and the Mumford–Tate lattice is the Z-span of that
//! orbit inside `Z[G]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{self, FrameRef, Side, Subgroup};
use crate::lattice::{CharLattice, GroupRingVector};

#[derive(Clone)]
pub struct CmType {
    frame: FrameRef,
    phi: Vec<usize>,
    weights: OnceLock<WeightSystem>,
    lattice: OnceLock<CharLattice>,
}

impl PartialEq for CmType {
    fn eq(&self, other: &Self) -> bool {
        self.phi == other.phi && self.frame == other.frame
    }
}

impl Eq for CmType {}

impl fmt::Debug for CmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CmType{:?}", self.phi)
    }
}

impl fmt::Display for CmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .phi
            .iter()
            .map(|&i| match i {
                0 => "1".to_string(),
                1 => "σ".to_string(),
                _ => format!("σ^{i}"),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl CmType {
    /// Validates `phi ⊔ c·phi = G`.
    pub fn new(frame: &FrameRef, phi: &[usize]) -> Result<Self> {
        frame.check_subset(phi)?;
        let n = frame.order();
        let mut sorted = phi.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != phi.len() {
            return Err(Error::InvalidCmType(format!("{phi:?} has repeated elements")));
        }
        if sorted.len() * 2 != n {
            return Err(Error::InvalidCmType(format!(
                "{phi:?} has {} elements, a frame of order {n} needs {}",
                sorted.len(),
                n / 2
            )));
        }
        let c = frame.conj();
        if let Some(&x) = sorted.iter().find(|&&x| sorted.binary_search(&frame.mul(c, x)).is_ok()) {
            return Err(Error::InvalidCmType(format!(
                "{phi:?} contains the conjugate pair {{{x}, {}}}",
                frame.mul(c, x)
            )));
        }
        Ok(CmType::from_sorted(frame, sorted))
    }

    fn from_sorted(frame: &FrameRef, phi: Vec<usize>) -> Self {
        CmType { frame: Arc::clone(frame), phi, weights: OnceLock::new(), lattice: OnceLock::new() }
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    /// `g = |Φ|`, the dimension of the abelian variety.
    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    /// The complementary type `c·Φ`.
    pub fn conjugate(&self) -> CmType {
        let phi = group::translate(&self.frame, &self.phi, self.frame.conj(), Side::Left);
        CmType::from_sorted(&self.frame, phi)
    }

    pub fn translate(&self, g: usize, side: Side) -> CmType {
        let phi = group::translate(&self.frame, &self.phi, g, side);
        CmType::from_sorted(&self.frame, phi)
    }

    /// `Φ⁻¹`, sorted.
    pub fn inverse_set(&self) -> Vec<usize> {
        let mut inv: Vec<usize> = self.phi.iter().map(|&x| self.frame.inv(x)).collect();
        inv.sort_unstable();
        inv
    }

    pub fn stabilizer(&self, side: Side) -> Subgroup {
        group::stabilizer(&self.frame, &self.phi, side)
    }

    /// Left setwise stabilizer of `Φ`; its fixed field is the reflex field.
    pub fn reflex_group(&self) -> Subgroup {
        self.stabilizer(Side::Left)
    }

    /// Trivial right stabilizer, i.e. `Φ` is not induced from a proper CM subfield.
    pub fn is_primitive(&self) -> bool {
        self.stabilizer(Side::Right).is_trivial()
    }

    pub fn weight_system(&self) -> &WeightSystem {
        self.weights.get_or_init(|| WeightSystem::of(self))
    }

    /// Character lattice `X*(T_Φ)`: the Z-span of the weight system.
    pub fn mt_lattice(&self) -> &CharLattice {
        self.lattice.get_or_init(|| self.weight_system().lattice())
    }

    /// `rank X*(T_Φ) = g + 1`.
    pub fn is_nondegenerate(&self) -> bool {
        self.mt_lattice().rank() == self.dim() + 1
    }
}

pub fn make_cm_type(frame: &FrameRef, phi: &[usize]) -> Result<CmType> {
    CmType::new(frame, phi)
}

/// The weights `σ·Φ⁻¹` of a CM type, deduplicated in order of first
/// appearance as `σ` runs over `0..|G|`, each with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    frame: FrameRef,
    weights: Vec<GroupRingVector>,
    multiplicities: Vec<usize>,
    /// `by_element[σ]` is the index of `σ·Φ⁻¹` in `weights`.
    by_element: Vec<usize>,
    dim: usize,
}

impl WeightSystem {
    fn of(cm: &CmType) -> Self {
        let frame = &cm.frame;
        let inv = cm.inverse_set();
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut weights = Vec::new();
        let mut multiplicities = Vec::new();
        let mut by_element = Vec::with_capacity(frame.order());
        for sigma in frame.elements() {
            let set = group::translate(frame, &inv, sigma, Side::Left);
            let next = weights.len();
            let k = *index.entry(set.clone()).or_insert(next);
            if k == next {
                weights.push(GroupRingVector::indicator(frame, &set).expect("translate stays in range"));
                multiplicities.push(0);
            }
            multiplicities[k] += 1;
            by_element.push(k);
        }
        WeightSystem { frame: Arc::clone(frame), weights, multiplicities, by_element, dim: cm.dim() }
    }

    pub fn frame(&self) -> &FrameRef {
        &self.frame
    }

    pub fn weights(&self) -> &[GroupRingVector] {
        &self.weights
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `g`, the coordinate sum of every weight.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight_at(&self, sigma: usize) -> &GroupRingVector {
        &self.weights[self.by_element[sigma]]
    }

    pub fn index_of(&self, v: &GroupRingVector) -> Option<usize> {
        self.weights.iter().position(|w| w == v)
    }

    pub fn multiplicity_of(&self, v: &GroupRingVector) -> usize {
        self.index_of(v).map_or(0, |i| self.multiplicities[i])
    }

    /// Index of the conjugate weight `χ − α`.
    pub fn conjugate_index(&self, i: usize) -> usize {
        let chi = GroupRingVector::norm_character(&self.frame);
        let conj = chi.sub(&self.weights[i]).expect("same frame");
        self.index_of(&conj).expect("weight systems are closed under conjugation")
    }

    pub fn lattice(&self) -> CharLattice {
        CharLattice::new(&self.frame, self.weights.clone()).expect("weights share the frame")
    }
}

/// Every CM type of the frame: one element from each conjugate pair, in the
/// order of the binary choice mask (bit `k` set picks the larger element of
/// the `k`-th pair).
pub fn enumerate_cm_types(frame: &FrameRef) -> Vec<CmType> {
    let c = frame.conj();
    let pairs: Vec<(usize, usize)> = frame
        .elements()
        .filter(|&x| x < frame.mul(c, x))
        .map(|x| (x, frame.mul(c, x)))
        .collect();
    assert!(pairs.len() < usize::BITS as usize, "frame too large to enumerate");
    (0usize..1 << pairs.len())
        .map(|mask| {
            let mut phi: Vec<usize> = pairs
                .iter()
                .enumerate()
                .map(|(k, &(lo, hi))| if mask >> k & 1 == 1 { hi } else { lo })
                .collect();
            phi.sort_unstable();
            CmType::from_sorted(frame, phi)
        })
        .collect()
}

/// One translation orbit of CM types.
#[derive(Debug, Clone)]
pub struct CmClass {
    pub representative: CmType,
    pub members: Vec<CmType>,
}

impl CmClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Orbits of `Φ ↦ σΦ` (left) or `Φ ↦ Φσ` (right), each represented by its
/// lexicographically least member, sorted by representative.
pub fn classify_cm_types(frame: &FrameRef, side: Side) -> Vec<CmClass> {
    let mut seen: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
    let mut classes = Vec::new();
    for cm in enumerate_cm_types(frame) {
        if seen.contains_key(&cm.phi) {
            continue;
        }
        let mut orbit: BTreeMap<Vec<usize>, CmType> = BTreeMap::new();
        for g in frame.elements() {
            let t = cm.translate(g, side);
            orbit.entry(t.phi.clone()).or_insert(t);
        }
        for key in orbit.keys() {
            seen.insert(key.clone(), ());
        }
        let members: Vec<CmType> = orbit.into_values().collect();
        classes.push(CmClass { representative: members[0].clone(), members });
    }
    classes.sort_by(|a, b| a.representative.phi.cmp(&b.representative.phi));
    classes
}

/// Summary line of a classification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub representative: Vec<usize>,
    pub orbit_size: usize,
    pub primitive: bool,
    pub nondegenerate: bool,
    pub lattice_rank: usize,
}

impl From<&CmClass> for ClassSummary {
    fn from(class: &CmClass) -> Self {
        let rep = &class.representative;
        let rank = rep.mt_lattice().rank();
        ClassSummary {
            representative: rep.phi.clone(),
            orbit_size: class.size(),
            primitive: rep.is_primitive(),
            nondegenerate: rank == rep.dim() + 1,
            lattice_rank: rank,
        }
    }
}
