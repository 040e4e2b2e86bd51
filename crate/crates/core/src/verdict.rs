//! Torsion verdicts for pairs of CM types on a common frame, the
//! low-dimensional decision table, and the dimension-gap criterion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cm::CmType;
use crate::error::{Error, Result};
use crate::lattice::{lattice_sum, qspan_contains, quotient_group, same_frame, CharLattice, FgAbelianGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionKind {
    PotentiallyTorsionInfinite,
    EssentiallyTorsionFinite,
}

impl TorsionKind {
    pub fn is_infinite(self) -> bool {
        self == TorsionKind::PotentiallyTorsionInfinite
    }

    pub fn abbrev(self) -> &'static str {
        match self {
            TorsionKind::PotentiallyTorsionInfinite => "PTI",
            TorsionKind::EssentiallyTorsionFinite => "ETF",
        }
    }
}

impl fmt::Display for TorsionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionKind::PotentiallyTorsionInfinite => write!(f, "potentially torsion infinite"),
            TorsionKind::EssentiallyTorsionFinite => write!(f, "essentially torsion finite"),
        }
    }
}

/// Which variety is being tested against which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `A1` relative to `A2`.
    #[serde(rename = "12")]
    FirstForSecond,
    /// `A2` relative to `A1`.
    #[serde(rename = "21")]
    SecondForFirst,
}

/// Verdict for one direction, with the character group of `H` as certificate:
/// finite exactly when the verdict is torsion infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionVerdict {
    pub direction: Direction,
    pub kind: TorsionKind,
    pub h12: FgAbelianGroup,
    pub qspan_included: bool,
}

fn verdict_for(direction: Direction, own: &CharLattice, other: &CharLattice) -> Result<TorsionVerdict> {
    let included = qspan_contains(other, own)?;
    let h = quotient_group(own, other)?;
    debug_assert_eq!(included, h.is_finite());
    let kind = if included {
        TorsionKind::PotentiallyTorsionInfinite
    } else {
        TorsionKind::EssentiallyTorsionFinite
    };
    Ok(TorsionVerdict { direction, kind, h12: h, qspan_included: included })
}

/// Both directions of a CM pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub direction_12: TorsionVerdict,
    pub direction_21: TorsionVerdict,
}

impl PairVerdict {
    /// Mutually potentially torsion infinite.
    pub fn mutual(&self) -> bool {
        self.direction_12.kind.is_infinite() && self.direction_21.kind.is_infinite()
    }
}

/// Decides both directions for CM types on a shared frame.
pub fn decide_cm_pair(cm1: &CmType, cm2: &CmType) -> Result<PairVerdict> {
    same_frame(cm1.frame(), cm2.frame())?;
    let (l1, l2) = (cm1.mt_lattice(), cm2.mt_lattice());
    Ok(PairVerdict {
        direction_12: verdict_for(Direction::FirstForSecond, &l1, &l2)?,
        direction_21: verdict_for(Direction::SecondForFirst, &l2, &l1)?,
    })
}

/// `X*(T_12)`: the sum of the two Mumford–Tate lattices.
pub fn product_mt_lattice(cm1: &CmType, cm2: &CmType) -> Result<CharLattice> {
    same_frame(cm1.frame(), cm2.frame())?;
    lattice_sum(&cm1.mt_lattice(), &cm2.mt_lattice())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutualReport {
    pub rank_1: usize,
    pub rank_2: usize,
    pub rank_12: usize,
    pub ranks_equal: bool,
    pub mutual: bool,
    /// Equal ranks agree with mutual torsion infiniteness.
    pub consistent: bool,
}

pub fn mutual_verdict_equivalences(cm1: &CmType, cm2: &CmType) -> Result<MutualReport> {
    let verdict = decide_cm_pair(cm1, cm2)?;
    let rank_1 = cm1.mt_lattice().rank();
    let rank_2 = cm2.mt_lattice().rank();
    let rank_12 = product_mt_lattice(cm1, cm2)?.rank();
    let ranks_equal = rank_1 == rank_12 && rank_2 == rank_12;
    let mutual = verdict.mutual();
    Ok(MutualReport { rank_1, rank_2, rank_12, ranks_equal, mutual, consistent: ranks_equal == mutual })
}

/// `log2(d_a) ≥ 3·d_b − 1`, checked exactly as `d_a ≥ 2^(3·d_b − 1)`. When
/// true, an absolutely simple `A` of dimension `d_a` is essentially torsion
/// finite for any `B` of dimension `d_b`.
pub fn dimension_gap_sufficient(d_a: u64, d_b: u64) -> bool {
    assert!(d_a >= 1 && d_b >= 1, "dimensions must be positive");
    match d_b.checked_mul(3).map(|x| x - 1) {
        Some(exp) if exp < 64 => d_a >= 1u64 << exp,
        _ => false,
    }
}

/// Albert type in the `(g, Type)` notation for absolutely simple abelian
/// varieties of dimension at most three; `IV(e, d)` carries its two indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlbertType {
    I,
    II,
    III,
    IV { e: u8, d: u8 },
}

impl fmt::Display for AlbertType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlbertType::I => write!(f, "I"),
            AlbertType::II => write!(f, "II"),
            AlbertType::III => write!(f, "III"),
            AlbertType::IV { e, d } => write!(f, "IV({e},{d})"),
        }
    }
}

impl FromStr for AlbertType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "I" => return Ok(AlbertType::I),
            "II" => return Ok(AlbertType::II),
            "III" => return Ok(AlbertType::III),
            _ => {}
        }
        let inner = compact
            .strip_prefix("IV(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::LowDim(format!("unknown Albert type {s:?}")))?;
        let (e, d) = inner
            .split_once(',')
            .ok_or_else(|| Error::LowDim(format!("unknown Albert type {s:?}")))?;
        let parse = |x: &str| {
            x.parse::<u8>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::LowDim(format!("bad index {x:?} in {s:?}")))
        };
        Ok(AlbertType::IV { e: parse(e)?, d: parse(d)? })
    }
}

impl Serialize for AlbertType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AlbertType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An absolutely simple abelian variety of dimension ≤ 3, described by its
/// Albert class. CM classes may carry a CM type; `endo_flag` answers the
/// endomorphism-algebra question of the elliptic-curve cases.
#[derive(Debug, Clone)]
pub struct LowDimDescriptor {
    pub dim: u8,
    pub albert_type: AlbertType,
    pub cm_type: Option<CmType>,
    pub endo_flag: Option<bool>,
}

impl LowDimDescriptor {
    pub fn new(dim: u8, albert_type: AlbertType) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::LowDim(format!("dimension {dim} is outside 1..=3")));
        }
        Ok(LowDimDescriptor { dim, albert_type, cm_type: None, endo_flag: None })
    }

    /// Attaches a CM type. Its dimension may be a multiple of `dim`, which
    /// describes a power of the variety on a larger Galois frame.
    pub fn with_cm_type(mut self, cm: CmType) -> Result<Self> {
        if !self.is_cm() {
            return Err(Error::LowDim(format!("({}, {}) is not a CM class", self.dim, self.albert_type)));
        }
        if cm.dim() % self.dim as usize != 0 {
            return Err(Error::LowDim(format!(
                "CM type of dimension {} does not describe a power of a {}-dimensional variety",
                cm.dim(),
                self.dim
            )));
        }
        self.cm_type = Some(cm);
        Ok(self)
    }

    pub fn with_endo_flag(mut self, flag: bool) -> Self {
        self.endo_flag = Some(flag);
        self
    }

    /// `IV(g, 1)`: the variety has complex multiplication.
    pub fn is_cm(&self) -> bool {
        matches!(self.albert_type, AlbertType::IV { e, d: 1 } if e == self.dim)
    }

    fn is_cm_elliptic(&self) -> bool {
        self.dim == 1 && self.is_cm()
    }

    fn is_cm_threefold(&self) -> bool {
        self.dim == 3 && self.is_cm()
    }

    fn is_unitary_threefold(&self) -> bool {
        self.dim == 3 && self.albert_type == AlbertType::IV { e: 1, d: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowDimCase {
    /// None of the exceptional cases: mutually essentially torsion finite.
    Generic,
    /// CM elliptic curve against a CM threefold.
    CmCurveCmThreefold,
    /// CM elliptic curve against a type `IV(1,1)` threefold.
    CmCurveUnitaryThreefold,
    /// Two CM threefolds, decided by their CM types.
    CmThreefolds,
}

/// Outcome of the low-dimensional table, reported in the caller's order
/// (`a_for_b` is the verdict for `a` relative to `b`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDimVerdict {
    pub case: LowDimCase,
    pub a_for_b: TorsionKind,
    pub b_for_a: TorsionKind,
    pub cm_verdict: Option<PairVerdict>,
}

fn kind_of(infinite: bool) -> TorsionKind {
    if infinite {
        TorsionKind::PotentiallyTorsionInfinite
    } else {
        TorsionKind::EssentiallyTorsionFinite
    }
}

/// Applies the decision table for absolutely simple, geometrically
/// non-isogenous `a` and `b` of dimension at most three.
pub fn low_dim_verdict(a: &LowDimDescriptor, b: &LowDimDescriptor) -> Result<LowDimVerdict> {
    let swapped = a.dim > b.dim;
    let (small, large) = if swapped { (b, a) } else { (a, b) };
    let flag = match (small.endo_flag, large.endo_flag) {
        (Some(x), Some(y)) if x != y => {
            return Err(Error::LowDim("conflicting endomorphism flags".into()));
        }
        (x, y) => x.or(y),
    };

    // (small for large, large for small, case, cm verdict)
    let (s_for_l, l_for_s, case, cm_verdict) = if small.is_cm_elliptic() && large.is_cm_threefold() {
        match (flag, &small.cm_type, &large.cm_type) {
            (Some(f), _, _) => (kind_of(f), TorsionKind::EssentiallyTorsionFinite, LowDimCase::CmCurveCmThreefold, None),
            (None, Some(c1), Some(c2)) => {
                let v = decide_cm_pair(c1, c2)?;
                (v.direction_12.kind, v.direction_21.kind, LowDimCase::CmCurveCmThreefold, Some(v))
            }
            _ => {
                return Err(Error::LowDim(
                    "CM curve against CM threefold needs the embedding flag or both CM types".into(),
                ))
            }
        }
    } else if small.is_cm_elliptic() && large.is_unitary_threefold() {
        let f = flag.ok_or_else(|| {
            Error::LowDim("CM curve against a IV(1,1) threefold needs the isomorphism flag".into())
        })?;
        (kind_of(f), TorsionKind::EssentiallyTorsionFinite, LowDimCase::CmCurveUnitaryThreefold, None)
    } else if small.is_cm_threefold() && large.is_cm_threefold() {
        let (Some(c1), Some(c2)) = (&small.cm_type, &large.cm_type) else {
            return Err(Error::LowDim("two CM threefolds need both CM types on a common frame".into()));
        };
        let v = decide_cm_pair(c1, c2)?;
        (v.direction_12.kind, v.direction_21.kind, LowDimCase::CmThreefolds, Some(v))
    } else {
        let etf = TorsionKind::EssentiallyTorsionFinite;
        (etf, etf, LowDimCase::Generic, None)
    };

    let cm_verdict = cm_verdict.map(|v| {
        if swapped {
            PairVerdict {
                direction_12: TorsionVerdict { direction: Direction::FirstForSecond, ..v.direction_21 },
                direction_21: TorsionVerdict { direction: Direction::SecondForFirst, ..v.direction_12 },
            }
        } else {
            v
        }
    });
    let (a_for_b, b_for_a) = if swapped { (l_for_s, s_for_l) } else { (s_for_l, l_for_s) };
    Ok(LowDimVerdict { case, a_for_b, b_for_a, cm_verdict })
}
