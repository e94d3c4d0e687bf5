//! Fourier–Motzkin elimination over exact rationals with strictness tracking.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::polyhedron::Halfspace;
use crate::rational::{primitive, Q};

/// Outcome of tidying a system: either a reduced list of rows or a proof of infeasibility.
pub(crate) enum Tidy {
    Rows(Vec<Halfspace>),
    Infeasible,
}

/// Normalizes rows, drops trivially true constant rows and keeps only the
/// tightest bound per direction.
pub(crate) fn tidy(rows: Vec<Halfspace>) -> Tidy {
    let mut best: BTreeMap<Vec<Q>, (Q, bool)> = BTreeMap::new();
    for h in rows {
        if h.normal.iter().all(Zero::is_zero) {
            let ok = if h.strict {
                h.offset.is_negative()
            } else {
                !h.offset.is_positive()
            };
            if !ok {
                return Tidy::Infeasible;
            }
            continue;
        }
        let dir = primitive(&h.normal);
        let factor = &dir.iter().find(|x| !x.is_zero()).cloned().unwrap()
            / h.normal.iter().find(|x| !x.is_zero()).unwrap();
        let offset = &h.offset * factor;
        match best.get_mut(&dir) {
            Some((b, s)) => {
                if offset > *b {
                    *b = offset;
                    *s = h.strict;
                } else if offset == *b {
                    *s |= h.strict;
                }
            }
            None => {
                best.insert(dir, (offset, h.strict));
            }
        }
    }
    Tidy::Rows(
        best.into_iter()
            .map(|(normal, (offset, strict))| Halfspace {
                normal,
                offset,
                strict,
            })
            .collect(),
    )
}

/// Eliminates coordinate `var`, returning rows over the remaining coordinates.
pub(crate) fn eliminate_one(rows: &[Halfspace], var: usize) -> Vec<Halfspace> {
    let drop_var = |h: &Halfspace| -> Vec<Q> {
        h.normal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != var)
            .map(|(_, x)| x.clone())
            .collect()
    };
    let mut out = Vec::new();
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for h in rows {
        let c = &h.normal[var];
        if c.is_zero() {
            out.push(Halfspace {
                normal: drop_var(h),
                offset: h.offset.clone(),
                strict: h.strict,
            });
        } else if c.is_positive() {
            lower.push(h);
        } else {
            upper.push(h);
        }
    }
    for l in &lower {
        let cl = &l.normal[var];
        for u in &upper {
            let cu = -&u.normal[var];
            // cu * l + cl * u cancels the variable
            let normal: Vec<Q> = l
                .normal
                .iter()
                .zip(&u.normal)
                .enumerate()
                .filter(|(i, _)| *i != var)
                .map(|(_, (a, b))| &cu * a + cl * b)
                .collect();
            out.push(Halfspace {
                normal,
                offset: &cu * &l.offset + cl * &u.offset,
                strict: l.strict || u.strict,
            });
        }
    }
    out
}

fn choose_variable(rows: &[Halfspace], dim: usize) -> usize {
    (0..dim)
        .min_by_key(|&v| {
            let p = rows.iter().filter(|h| h.normal[v].is_positive()).count();
            let n = rows.iter().filter(|h| h.normal[v].is_negative()).count();
            p * n
        })
        .unwrap_or(0)
}

/// Decides whether the (possibly strict) system has a rational solution.
pub(crate) fn feasible(rows: &[Halfspace], dim: usize) -> bool {
    let mut rows = match tidy(rows.to_vec()) {
        Tidy::Rows(r) => r,
        Tidy::Infeasible => return false,
    };
    let mut dim = dim;
    while dim > 0 {
        if rows.is_empty() {
            return true;
        }
        let v = choose_variable(&rows, dim);
        rows = match tidy(eliminate_one(&rows, v)) {
            Tidy::Rows(r) => r,
            Tidy::Infeasible => return false,
        };
        dim -= 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_of};

    fn hs(a: &[i64], b: i64, strict: bool) -> Halfspace {
        Halfspace {
            normal: vec_of(a),
            offset: int(b),
            strict,
        }
    }

    #[test]
    fn strict_propagation() {
        // x > 0 and x <= 0 infeasible; x >= 0 and x <= 0 feasible
        assert!(!feasible(&[hs(&[1], 0, true), hs(&[-1], 0, false)], 1));
        assert!(feasible(&[hs(&[1], 0, false), hs(&[-1], 0, false)], 1));
    }

    #[test]
    fn two_dimensional_triangle() {
        let tri = [hs(&[1, 0], 0, false), hs(&[0, 1], 0, false), hs(&[-1, -1], -1, false)];
        assert!(feasible(&tri, 2));
        let mut strict = tri.to_vec();
        strict.push(hs(&[1, 1], 1, true));
        assert!(!feasible(&strict, 2));
    }

    #[test]
    fn tidy_keeps_tightest() {
        let Tidy::Rows(r) = tidy(vec![hs(&[2], 2, false), hs(&[1], 0, true), hs(&[0], -1, false)]) else {
            panic!()
        };
        assert_eq!(r, vec![hs(&[1], 1, false)]);
    }
}
