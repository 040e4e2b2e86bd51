//! Brute-force cross-checks of the exact algebra.

use cmtk::oracle::{check_random_matrices, sweep_cyclic_pairs};

fn main() {
    let m = check_random_matrices(42, 500, 3, 4);
    println!("{m:?}");
    let s = sweep_cyclic_pairs(10);
    println!("{s:?}");
    assert!(m.passed() && s.mismatches == 0);
}
