//! Double description method for polyhedral cones `{x : A x >= 0}`.
//!
//! Rows are inserted one at a time. Lines are kept separately so cones with a
//! nontrivial lineality space are handled without assuming pointedness; rays
//! are combined only across adjacent pairs (combinatorial test), which keeps
//! the ray list equal to the extreme rays modulo lineality.

use num_traits::{Signed, Zero};

use crate::rational::{dot, primitive, primitive_signed, Q};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConeGenerators {
    /// Extreme rays modulo the lineality space, primitive integer vectors.
    pub rays: Vec<Vec<Q>>,
    /// Basis of the lineality space.
    pub lines: Vec<Vec<Q>>,
}

struct Ray {
    dir: Vec<Q>,
    // sorted indices of processed rows tight at this ray
    zeros: Vec<usize>,
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn is_subset_sorted(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Generators of `{x in Q^dim : row . x >= 0 for all rows}`.
pub fn cone_generators(rows: &[Vec<Q>], dim: usize) -> ConeGenerators {
    let mut lines: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, h) in rows.iter().enumerate() {
        if h.iter().all(Zero::is_zero) {
            for r in rays.iter_mut() {
                r.zeros.push(idx);
            }
            continue;
        }
        if let Some(pos) = lines.iter().position(|l| !dot(h, l).is_zero()) {
            let mut pivot = lines.swap_remove(pos);
            let mut hp = dot(h, &pivot);
            if hp.is_negative() {
                pivot = pivot.iter().map(|x| -x).collect();
                hp = -hp;
            }
            for l in lines.iter_mut() {
                let f = dot(h, l) / &hp;
                if !f.is_zero() {
                    for (x, p) in l.iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                }
            }
            for r in rays.iter_mut() {
                let f = dot(h, &r.dir) / &hp;
                if !f.is_zero() {
                    for (x, p) in r.dir.iter_mut().zip(&pivot) {
                        *x -= &f * p;
                    }
                    r.dir = primitive(&r.dir);
                }
                r.zeros.push(idx);
            }
            rays.push(Ray {
                dir: primitive(&pivot),
                zeros: (0..idx).collect(),
            });
            continue;
        }

        let values: Vec<Q> = rays.iter().map(|r| dot(h, &r.dir)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.push(idx);
                }
            }
            continue;
        }
        // rank bound: adjacent rays share at least (pointed dim - 2) tight rows
        let min_common = (dim - lines.len()).saturating_sub(2);
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = intersect_sorted(&rays[p].zeros, &rays[n].zeros);
                if common.len() < min_common {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .filter(|&o| o != p && o != n)
                    .all(|o| !is_subset_sorted(&common, &rays[o].zeros));
                if !adjacent {
                    continue;
                }
                let dir: Vec<Q> = rays[n]
                    .dir
                    .iter()
                    .zip(&rays[p].dir)
                    .map(|(xn, xp)| &values[p] * xn - &values[n] * xp)
                    .collect();
                let mut zeros = common;
                zeros.push(idx);
                fresh.push(Ray {
                    dir: primitive(&dir),
                    zeros,
                });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_negative() {
                continue;
            }
            if values[i].is_zero() {
                r.zeros.push(idx);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }

    let mut out_rays: Vec<Vec<Q>> = rays.into_iter().map(|r| primitive(&r.dir)).collect();
    out_rays.sort();
    out_rays.dedup();
    let mut out_lines: Vec<Vec<Q>> = lines.iter().map(|l| primitive_signed(l)).collect();
    out_lines.sort();
    ConeGenerators {
        rays: out_rays,
        lines: out_lines,
    }
}
