//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Basis of `{v : A v = 0}` for the `rows × ncols` matrix `A`.
///
/// Each basis vector has a one in its free column and zeros in every other
/// free column, so the basis is the reduced-row-echelon one.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut a: Vec<Vec<Q>> = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / a[r][col].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..ncols {
                    let t = a[r][j].clone() * f.clone();
                    a[i][j] = a[i][j].clone() - t;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}
