//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::Q;

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Solves `sum_j coeffs[j] * columns[j] = rhs` for a linearly independent set of columns.
pub fn solve_combination(columns: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let k = columns.len();
    let mut m: Vec<Vec<Q>> = (0..rhs.len())
        .map(|i| {
            let mut row: Vec<Q> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![Q::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][k].clone();
    }
    Some(out)
}

/// Basis of `{ y : row . y = 0 for every row }`.
pub fn null_space(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    (0..dim)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); dim];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, vec_of};

    #[test]
    fn rank_and_null_space() {
        let rows = vec![vec_of(&[1, 0, 1]), vec_of(&[2, 0, 2])];
        assert_eq!(rank(&rows), 1);
        let ns = null_space(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &rows[0]).is_zero());
        }
    }

    #[test]
    fn combination() {
        let cols = vec![vec_of(&[1, -1])];
        assert_eq!(solve_combination(&cols, &vec_of(&[2, -2])), Some(vec_of(&[2])));
        assert_eq!(solve_combination(&cols, &vec_of(&[1, 1])), None);
    }
}
