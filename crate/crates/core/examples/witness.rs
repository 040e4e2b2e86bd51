//! Hodge class certificates: search, verification and the rational construction.

use std::sync::Arc;

use cmtk::{find_witness, verify_witness, witness_from_rational_solution, CmType, GaloisFrame, SearchBounds};

fn main() -> cmtk::Result<()> {
    let z7 = Arc::new(GaloisFrame::cyclic(6)?);
    let a = CmType::new(&z7, &[0, 2, 4])?;
    let b = CmType::new(&z7, &[0, 1, 2])?;
    let found = find_witness(&a, &b, SearchBounds::for_frame(&z7))?;
    let w = found.witness().expect("torsion-infinite direction");
    println!("{}\n  {w}", w.degree_descriptor());
    println!("  check: {:?}", verify_witness(w, &a, &b));

    let z11 = Arc::new(GaloisFrame::cyclic(10)?);
    let phi2 = CmType::new(&z11, &[0, 6, 2, 3, 4])?;
    let phi3 = CmType::new(&z11, &[0, 3, 6, 9, 2])?;
    for (x, y) in [(&phi2, &phi3), (&phi3, &phi2)] {
        let alpha0 = x.weight_system().weights()[0].clone();
        let w = witness_from_rational_solution(x, y, &alpha0)?;
        println!("{x} -> {y}: {} ({:?})", w.degree_descriptor(), verify_witness(&w, x, y));
    }
    Ok(())
}
