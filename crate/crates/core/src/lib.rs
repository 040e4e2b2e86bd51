//! Exact decision procedures for torsion infiniteness between CM abelian
//! varieties, working purely with CM types on a Galois frame.

pub mod cm;
pub mod error;
pub mod group;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod oracle;
mod serde_util;

pub use cm::{classify_cm_types, enumerate_cm_types, make_cm_type, CmClass, CmType, WeightSystem};
pub use error::{Error, Result};
pub use group::{FiniteGroup, FrameRef, FrameSpec, GaloisFrame, Side, Subgroup};
pub use lattice::{
    lattice_intersection, lattice_sum, qspan_contains, quotient_group, smith_invariants, solve_rational,
    CharLattice, FgAbelianGroup, GroupRingVector,
};
pub mod verdict;
pub mod witness;

pub use verdict::{
    decide_cm_pair, dimension_gap_sufficient, low_dim_verdict, mutual_verdict_equivalences, product_mt_lattice,
    AlbertType, Direction, LowDimCase, LowDimDescriptor, LowDimVerdict, MutualReport, PairVerdict, TorsionKind,
    TorsionVerdict,
};
pub use witness::{
    exterior_support, find_witness, verify_witness, witness_from_rational_solution, HodgeWitness, SearchBounds,
    Verification, WitnessDefect, WitnessSearch,
};
