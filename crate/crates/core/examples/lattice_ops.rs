//! Character lattices: sums, intersections, quotients and rational spans.

use std::sync::Arc;

use cmtk::{lattice_intersection, lattice_sum, qspan_contains, quotient_group, CmType, GaloisFrame, GroupRingVector};

fn main() -> cmtk::Result<()> {
    let frame = Arc::new(GaloisFrame::cyclic(10)?);
    let l1 = CmType::new(&frame, &[0, 2, 4, 6, 8])?.mt_lattice().clone();
    let l2 = CmType::new(&frame, &[0, 6, 2, 3, 4])?.mt_lattice().clone();
    let sum = lattice_sum(&l1, &l2)?;
    let meet = lattice_intersection(&l1, &l2)?;
    println!("ranks: L1 {}  L2 {}  sum {}  meet {}", l1.rank(), l2.rank(), sum.rank(), meet.rank());
    println!("L1 / (L1 ∩ L2) = {}", quotient_group(&l1, &l2)?);
    println!("L2 / (L1 ∩ L2) = {}", quotient_group(&l2, &l1)?);
    println!("span L1 ⊆ span L2: {}", qspan_contains(&l2, &l1)?);

    let chi = GroupRingVector::norm_character(&frame);
    println!("χ = {chi} in L1: {}, in L2: {}", l1.contains(&chi)?, l2.contains(&chi)?);
    for row in meet.hnf() {
        println!("  {row:?}");
    }
    Ok(())
}
