//! Exact dense linear algebra over Q: Gaussian elimination for solving,
//! inversion, and least-structure checks. Matrices are `Vec<Vec<QQ>>` in
//! row-major order; everything is small (dimension ≤ a few dozen).

use num_traits::Zero;

use super::{qi, QQ};

/// Reduce `[a | b]` to row echelon form in place; returns the pivot columns.
fn eliminate(a: &mut [Vec<QQ>], b: &mut [Vec<QQ>]) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = qi(1) / &a[r][c];
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for x in b[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                }
                for j in 0..b[i].len() {
                    b[i][j] = &b[i][j] - &(&f * &b[r][j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Outcome of an exact least-structure solve of `a·x = rhs`.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    /// Unique exact solution with zero residual.
    Solved(Vec<QQ>),
    /// The coefficient matrix has rank < number of unknowns.
    RankDeficient { rank: usize },
    /// A full-rank solution exists on the pivot rows but some remaining
    /// equation is violated; carries the index of the first such row.
    Inconsistent { row: usize },
}

/// Solve the (possibly overdetermined) system `a·x = rhs` exactly.
pub fn solve(a: &[Vec<QQ>], rhs: &[QQ]) -> SolveOutcome {
    assert_eq!(a.len(), rhs.len());
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut m: Vec<Vec<QQ>> = a.to_vec();
    let mut b: Vec<Vec<QQ>> = rhs.iter().map(|v| vec![v.clone()]).collect();
    let pivots = eliminate(&mut m, &mut b);
    if pivots.len() < cols {
        return SolveOutcome::RankDeficient { rank: pivots.len() };
    }
    // Pivot rows now read off the solution; rows past the rank must be 0 = 0.
    let mut x = vec![qi(0); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r][0].clone();
    }
    for r in pivots.len()..m.len() {
        if !b[r][0].is_zero() {
            return SolveOutcome::Inconsistent { row: r };
        }
    }
    // Residual check against the original system (defensive exactness).
    for (i, row) in a.iter().enumerate() {
        let mut acc = qi(0);
        for (j, v) in row.iter().enumerate() {
            acc = acc + v * &x[j];
        }
        if acc != rhs[i] {
            return SolveOutcome::Inconsistent { row: i };
        }
    }
    SolveOutcome::Solved(x)
}

/// Invert a square matrix; `None` when singular.
pub fn invert(a: &[Vec<QQ>]) -> Option<Vec<Vec<QQ>>> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut id: Vec<Vec<QQ>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { qi(1) } else { qi(0) }).collect()).collect();
    let pivots = eliminate(&mut m, &mut id);
    if pivots.len() < n {
        return None;
    }
    // Rows are already reduced; reorder by pivot column.
    let mut out = vec![vec![qi(0); n]; n];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = id[r].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::qq;
    use super::*;

    #[test]
    fn solve_and_invert() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)], vec![qi(3), qi(4)]];
        let rhs = vec![qi(5), qi(10), qi(15)];
        match solve(&a, &rhs) {
            SolveOutcome::Solved(x) => assert_eq!(x, vec![qi(1), qi(3)]),
            other => panic!("unexpected outcome {other:?}"),
        }
        let inv = invert(&[vec![qi(2), qi(1)], vec![qi(1), qi(3)]]).unwrap();
        assert_eq!(inv[0][0], qq(3, 5));
        assert_eq!(inv[0][1], qq(-1, 5));
        assert!(invert(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]]).is_none());
    }

    #[test]
    fn detects_bad_systems() {
        let a = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert_eq!(solve(&a, &[qi(1), qi(2)]), SolveOutcome::RankDeficient { rank: 1 });
        let b = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)], vec![qi(1), qi(1)]];
        assert!(matches!(solve(&b, &[qi(1), qi(1), qi(3)]), SolveOutcome::Inconsistent { .. }));
    }
}
