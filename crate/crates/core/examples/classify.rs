//! Isomorphism classes of CM types on a frame.
//!
//! `cargo run --example classify -- 12`

use std::sync::Arc;

use cmtk::{classify_cm_types, enumerate_cm_types, GaloisFrame, Side};

fn main() -> cmtk::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(Ok(12), |s| s.parse()).expect("an even order");
    let frame = Arc::new(GaloisFrame::cyclic(n)?);
    println!("Z/{n}: {} CM types", enumerate_cm_types(&frame).len());
    for class in classify_cm_types(&frame, Side::Left) {
        let rep = &class.representative;
        println!(
            "  {rep}  orbit {:>2}  rank {}  primitive {}  nondegenerate {}",
            class.size(),
            rep.mt_lattice().rank(),
            rep.is_primitive(),
            rep.is_nondegenerate()
        );
    }

    let q8 = Arc::new(GaloisFrame::dicyclic(2)?);
    println!("Q8: {} classes", classify_cm_types(&q8, Side::Left).len());
    Ok(())
}
