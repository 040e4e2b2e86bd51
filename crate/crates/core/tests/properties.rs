mod common;

use std::collections::BTreeSet;

use cmtk::*;
use common::*;
use proptest::prelude::*;

/// A frame of order ≤ 12 picked from the catalog, plus two CM types on it.
fn frame_and_pair() -> impl Strategy<Value = (FrameRef, CmType, CmType)> {
    let frames = frames_up_to_12();
    (0..frames.len(), any::<u64>(), any::<u64>()).prop_map(move |(i, s1, s2)| {
        let f = frames[i].1.clone();
        let types = enumerate_cm_types(&f);
        let a = types[(s1 % types.len() as u64) as usize].clone();
        let b = types[(s2 % types.len() as u64) as usize].clone();
        (f, a, b)
    })
}

fn lattice(frame: &FrameRef, rows: &[Vec<i64>]) -> CharLattice {
    CharLattice::new(frame, rows.iter().map(|r| vector(frame, r)).collect()).unwrap()
}

fn small_rows(width: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, width), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ranks_are_modular((_, a, b) in frame_and_pair()) {
        let (l1, l2) = (a.mt_lattice(), b.mt_lattice());
        let sum = lattice_sum(l1, l2).unwrap();
        let meet = lattice_intersection(l1, l2).unwrap();
        prop_assert_eq!(sum.rank() + meet.rank(), l1.rank() + l2.rank());
        prop_assert!(meet.is_sublattice_of(l1).unwrap());
        prop_assert!(meet.is_sublattice_of(l2).unwrap());
    }

    #[test]
    fn quotient_matches_intersection((_, a, b) in frame_and_pair()) {
        let (l1, l2) = (a.mt_lattice(), b.mt_lattice());
        let meet = lattice_intersection(l1, l2).unwrap();
        let via_meet = smith_invariants(&coords_in(l1, &meet), l1.rank());
        prop_assert_eq!(quotient_group(l1, l2).unwrap(), via_meet);
    }

    #[test]
    fn verdict_matches_rank_oracle((_, a, b) in frame_and_pair()) {
        let v = decide_cm_pair(&a, &b).unwrap();
        prop_assert_eq!(v.direction_12.kind.is_infinite(), oracle_pti(&a, &b));
        prop_assert_eq!(v.direction_21.kind.is_infinite(), oracle_pti(&b, &a));
        prop_assert_eq!(v.direction_12.h12.is_finite(), v.direction_12.kind.is_infinite());
    }

    #[test]
    fn hermite_form_is_idempotent(rows in small_rows(4)) {
        let f = cyclic(4);
        let l = lattice(&f, &rows);
        let again = CharLattice::from_rows(&f, l.hnf().clone()).unwrap();
        prop_assert_eq!(again.hnf(), l.hnf());
        prop_assert!(same_lattice(&small(l.hnf()), &rows) || l.rank() == 0);
        prop_assert_eq!(l.rank(), rank(&rows));
    }

    #[test]
    fn smith_matches_minors(rows in small_rows(3)) {
        let got = smith_invariants(&big(&rows), 3).torsion_u64();
        let want: Vec<u64> = invariant_factors(&rows).into_iter().map(|d| d.unsigned_abs()).filter(|&d| d > 1).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rational_solutions_give_valid_certificates((_, a, b) in frame_and_pair(), pick in any::<usize>()) {
        prop_assume!(oracle_pti(&a, &b));
        let ws = a.weight_system();
        let alpha0 = ws.weights()[pick % ws.len()].clone();
        let w = witness_from_rational_solution(&a, &b, &alpha0).unwrap();
        prop_assert!(verify_witness(&w, &a, &b).is_valid());
        prop_assert_eq!((w.r + w.s) % 2, 0);
    }

    #[test]
    fn translation_preserves_verdicts((f, a, b) in frame_and_pair(), g in any::<usize>()) {
        let g = g % f.order();
        let base = decide_cm_pair(&a, &b).unwrap();
        let moved = decide_cm_pair(&a.translate(g, Side::Left), &b.translate(g, Side::Left)).unwrap();
        prop_assert_eq!(base.direction_12.kind, moved.direction_12.kind);
        prop_assert_eq!(base.direction_21.kind, moved.direction_21.kind);
        prop_assert_eq!(&base.direction_12.h12, &moved.direction_12.h12);
    }
}

/// Coordinates of `sub`'s Hermite rows in `outer`'s Hermite basis.
fn coords_in(outer: &CharLattice, sub: &CharLattice) -> Vec<Vec<num_bigint::BigInt>> {
    let basis = CharLattice::new(outer.frame(), outer.basis()).unwrap();
    sub.basis()
        .iter()
        .map(|v| {
            solve_rational(&basis, v)
                .unwrap()
                .expect("sublattice")
                .into_iter()
                .map(|q| {
                    assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect()
}

/// All `Σ e_β β` with `e_β ≤ m·mult(β)` and `Σ e_β = r`, by exhaustive recursion.
fn brute_support(ws: &WeightSystem, r: usize, m: usize) -> BTreeSet<Vec<i64>> {
    fn go(ws: &WeightSystem, i: usize, left: usize, m: usize, acc: Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if left == 0 {
            out.insert(acc);
            return;
        }
        if i == ws.len() {
            return;
        }
        let w = ws.weights()[i].small_coeffs();
        for k in 0..=(ws.multiplicities()[i] * m).min(left) {
            let next = acc.iter().zip(&w).map(|(a, x)| a + x * k as i64).collect();
            go(ws, i + 1, left - k, m, next, out);
        }
    }
    let mut out = BTreeSet::new();
    go(ws, 0, r, m, vec![0; ws.frame().order()], &mut out);
    out
}

#[test]
fn exterior_support_is_monotone_and_matches_brute_force() {
    for n in [2, 4, 6] {
        let f = cyclic(n);
        for t in enumerate_cm_types(&f) {
            let ws = t.weight_system();
            for r in 1..=3 {
                let mut prev = BTreeSet::new();
                for m in 1..=3 {
                    let got: BTreeSet<Vec<i64>> = exterior_support(ws, r, m).iter().map(|v| v.small_coeffs()).collect();
                    assert_eq!(got, brute_support(ws, r, m), "Z/{n} {:?} r={r} m={m}", t.phi());
                    assert!(prev.is_subset(&got));
                    prev = got;
                }
            }
        }
    }
}
