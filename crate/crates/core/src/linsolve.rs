//! Dense Gaussian elimination over [`Scalar`].

use crate::seqalg::Scalar;

/// Solves `a x = b` for square `a`. Exact scalars pivot on the first
/// nonzero entry, floats on the largest magnitude. Returns `None` when the
/// system is singular (float: pivot below `1e-12` times the matrix scale).
pub(crate) fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.magnitude())
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let pivot = if S::EXACT {
            (col..n).find(|&r| !a[r][col].vanishes())
        } else {
            (col..n)
                .max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()))
                .filter(|&r| a[r][col].magnitude() > 1e-12 * scale)
        }?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let p = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].vanishes() && S::EXACT {
                continue;
            }
            let f = a[r][col].clone() / p.clone();
            for c in col..n {
                let v = a[col][c].clone();
                a[r][c] = a[r][c].clone() - f.clone() * v;
            }
            let v = b[col].clone();
            b[r] = b[r].clone() - f * v;
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}
