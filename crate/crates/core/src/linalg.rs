//! Dense exact integer matrix routines over `BigInt`.
//!
//! Matrices are row-major `Vec<Vec<BigInt>>`; the column count is passed
//! explicitly so that matrices with no rows are still well defined.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn sub_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Row-reduces `rows` in place to Hermite normal form, applying every row
/// operation to `aux` as well when given. Returns the rank; rows
/// `rank..` of `rows` are zero afterwards (but are not removed).
///
/// Normal form: pivots strictly increase in column, are positive, and every
/// entry above a pivot lies in `[0, pivot)`.
fn hermite_reduce(rows: &mut IntMatrix, ncols: usize, mut aux: Option<&mut IntMatrix>) -> usize {
    let nrows = rows.len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == nrows {
            break;
        }
        let mut found = false;
        loop {
            let best = (pivot_row..nrows)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(best) = best else { break };
            found = true;
            rows.swap(pivot_row, best);
            if let Some(aux) = aux.as_deref_mut() {
                aux.swap(pivot_row, best);
            }
            let mut done = true;
            for i in pivot_row + 1..nrows {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pivot_row][col]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[pivot_row], &q);
                if let Some(aux) = aux.as_deref_mut() {
                    let (head, tail) = aux.split_at_mut(i);
                    sub_multiple(&mut tail[0], &head[pivot_row], &q);
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !found {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            negate(&mut rows[pivot_row]);
            if let Some(aux) = aux.as_deref_mut() {
                negate(&mut aux[pivot_row]);
            }
        }
        for i in 0..pivot_row {
            let q = rows[i][col].div_floor(&rows[pivot_row][col]);
            let (head, tail) = rows.split_at_mut(pivot_row);
            sub_multiple(&mut head[i], &tail[0], &q);
            if let Some(aux) = aux.as_deref_mut() {
                let (head, tail) = aux.split_at_mut(pivot_row);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Canonical row Hermite normal form of the Z-span of `rows`, zero rows dropped.
pub fn hermite_form(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let mut m: IntMatrix = rows.to_vec();
    debug_assert!(m.iter().all(|r| r.len() == ncols));
    let rank = hermite_reduce(&mut m, ncols, None);
    m.truncate(rank);
    m
}

/// Basis (in Hermite form) of the integer left kernel `{x : x·M = 0}`.
pub fn left_kernel(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let n = rows.len();
    let mut m: IntMatrix = rows.to_vec();
    let mut u: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let rank = hermite_reduce(&mut m, ncols, Some(&mut u));
    let kernel: IntMatrix = u.split_off(rank);
    hermite_form(&kernel, n)
}

pub fn transpose(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    (0..ncols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Pivot column of each row of a matrix already in Hermite form.
pub fn pivot_columns(hnf: &[Vec<BigInt>]) -> Vec<usize> {
    hnf.iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in Hermite basis"))
        .collect()
}

/// Integer coordinates of `v` in the Hermite basis `hnf`, or `None` if `v`
/// is not in its Z-span.
pub fn hermite_coordinates(hnf: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(hnf.len());
    for (row, col) in hnf.iter().zip(pivot_columns(hnf)) {
        if rest[..col].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, row, &q);
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}

/// Diagonal entries of a Smith normal form of `rows` (nonzero ones only,
/// each dividing the next).
pub fn smith_diagonal(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut a: IntMatrix = rows.to_vec();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }

        let mut clean = true;
        for i in t + 1..nrows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&a[t][t]);
            let (head, tail) = a.split_at_mut(i);
            sub_multiple(&mut tail[0], &head[t], &q);
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..ncols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&a[t][t]);
            for row in a.iter_mut() {
                let p = row[t].clone();
                row[j] -= &q * p;
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the remaining block by the pivot
        let offender = (t + 1..nrows)
            .find(|&i| (t + 1..ncols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
        if let Some(i) = offender {
            let (head, tail) = a.split_at_mut(i);
            for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                *x += y;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// One rational solution `c` of `Σ c_i · generators[i] = target`, with every
/// free variable set to zero. `None` when `target` is outside the Q-span.
pub fn solve_rational(generators: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = generators.len();
    // augmented system: n equations, k unknowns
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|row| {
            generators
                .iter()
                .map(|g| BigRational::from_integer(g[row].clone()))
                .chain(std::iter::once(BigRational::from_integer(target[row].clone())))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let (pivot_row, other) = if i < r {
                    let (head, tail) = m.split_at_mut(r);
                    (&tail[0], &mut head[i])
                } else {
                    let (head, tail) = m.split_at_mut(i);
                    (&head[r], &mut tail[0])
                };
                for (x, y) in other.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == n {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut solution = vec![BigRational::zero(); k];
    for (row, &col) in pivots.iter().enumerate() {
        solution[col] = m[row][k].clone();
    }
    Some(solution)
}
