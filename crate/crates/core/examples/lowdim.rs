//! The decision table for simple abelian varieties of dimension at most three.

use std::sync::Arc;

use cmtk::{low_dim_verdict, AlbertType, CmType, GaloisFrame, LowDimDescriptor};

fn main() -> cmtk::Result<()> {
    let curve = LowDimDescriptor::new(1, AlbertType::IV { e: 1, d: 1 })?;
    let unitary = LowDimDescriptor::new(3, AlbertType::IV { e: 1, d: 1 })?;
    for flag in [false, true] {
        let v = low_dim_verdict(&curve, &unitary.clone().with_endo_flag(flag))?;
        println!("curve vs IV(1,1), flag {flag}: {:?} {} / {}", v.case, v.a_for_b, v.b_for_a);
    }

    let z7 = Arc::new(GaloisFrame::cyclic(6)?);
    let a = LowDimDescriptor::new(3, AlbertType::IV { e: 3, d: 1 })?.with_cm_type(CmType::new(&z7, &[0, 2, 4])?)?;
    let b = LowDimDescriptor::new(3, AlbertType::IV { e: 3, d: 1 })?.with_cm_type(CmType::new(&z7, &[0, 1, 2])?)?;
    let v = low_dim_verdict(&a, &b)?;
    println!("CM threefolds over Q(ζ7): {} / {}", v.a_for_b, v.b_for_a);

    let surface = LowDimDescriptor::new(2, AlbertType::I)?;
    let threefold = LowDimDescriptor::new(3, AlbertType::I)?;
    let v = low_dim_verdict(&surface, &threefold)?;
    println!("generic: {:?} {} / {}", v.case, v.a_for_b, v.b_for_a);
    Ok(())
}
