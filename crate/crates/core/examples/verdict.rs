//! Torsion verdicts for pairs of CM types over Q(ζ13).

use std::sync::Arc;

use cmtk::{decide_cm_pair, mutual_verdict_equivalences, CmType, GaloisFrame};

fn main() -> cmtk::Result<()> {
    let frame = Arc::new(GaloisFrame::cyclic(12)?);
    let phi1 = CmType::new(&frame, &[0, 1, 2, 3, 4, 5])?;
    for phi2 in [[0, 7, 2, 3, 4, 5], [0, 4, 8, 1, 5, 9]] {
        let phi2 = CmType::new(&frame, &phi2)?;
        let v = decide_cm_pair(&phi1, &phi2)?;
        println!("{phi1} vs {phi2}");
        println!("  A1 for A2: {} with H12 = {}", v.direction_12.kind, v.direction_12.h12);
        println!("  A2 for A1: {} with H21 = {}", v.direction_21.kind, v.direction_21.h12);
        let m = mutual_verdict_equivalences(&phi1, &phi2)?;
        println!("  mutual {} (ranks {} {} {})", m.mutual, m.rank_1, m.rank_2, m.rank_12);
    }
    Ok(())
}
