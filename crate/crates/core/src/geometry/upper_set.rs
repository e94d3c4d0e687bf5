use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::polyhedron::{Halfspace, Polyhedron, VRep};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self, Q};

/// Second operand of [`UpperSet::combine`].
#[derive(Debug, Clone, Copy)]
pub enum Combine<'a> {
    Intersect(&'a UpperSet),
    MinkowskiAdd(&'a UpperSet),
    Scale(&'a Q),
    Union(&'a UpperSet),
}

/// Finite union of closed convex pieces in M-coordinates, each absorbing the
/// recession cone `K ∩ M`. The empty piece list is the empty set.
#[derive(Debug, Clone)]
pub struct UpperSet {
    dim: usize,
    pieces: Vec<Polyhedron>,
    recession: Arc<Polyhedron>,
}

impl UpperSet {
    /// Canonicalizing constructor.
    pub fn from_pieces(pieces: Vec<Polyhedron>, recession: Arc<Polyhedron>) -> Result<UpperSet> {
        let dim = recession.dim();
        if let Some(p) = pieces.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        UpperSet {
            dim,
            pieces,
            recession,
        }
        .canonicalize()
    }

    pub fn empty(recession: Arc<Polyhedron>) -> UpperSet {
        UpperSet {
            dim: recession.dim(),
            pieces: Vec::new(),
            recession,
        }
    }

    /// The whole of M.
    pub fn whole(recession: Arc<Polyhedron>) -> UpperSet {
        let dim = recession.dim();
        let mut universe = Polyhedron::universe(dim);
        universe = universe.convert_rep().expect("universe is closed");
        UpperSet {
            dim,
            pieces: vec![universe],
            recession,
        }
    }

    /// The recession cone itself, i.e. `0 · D`.
    pub fn cone(recession: Arc<Polyhedron>) -> UpperSet {
        UpperSet {
            dim: recession.dim(),
            pieces: vec![(*recession).clone()],
            recession,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn recession(&self) -> &Arc<Polyhedron> {
        &self.recession
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.pieces.iter().any(|p| p.halfspaces().is_empty())
    }

    fn recession_vrep(&self) -> VRep {
        self.recession
            .vrep()
            .cloned()
            .unwrap_or_else(|| self.recession.compute_vrep().expect("recession cone is closed"))
    }

    /// Drops empty pieces and pieces covered by the others, absorbs the
    /// recession cone into every piece and orders pieces deterministically.
    pub fn canonicalize(&self) -> Result<UpperSet> {
        let rec = self.recession_vrep();
        let canon = par::map(&self.pieces, |p| p.canonical_absorbing(&rec));
        let mut pieces = Vec::with_capacity(canon.len());
        for c in canon {
            if let Some(p) = c? {
                pieces.push(p);
            }
        }
        pieces.sort();
        pieces.dedup();
        let mut keep = vec![true; pieces.len()];
        for i in 0..pieces.len() {
            let cover: Vec<&Polyhedron> = (0..pieces.len())
                .filter(|&j| j != i && keep[j])
                .map(|j| &pieces[j])
                .collect();
            if piece_covered(&pieces[i], &cover) {
                keep[i] = false;
            }
        }
        let pieces = pieces
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        Ok(UpperSet {
            dim: self.dim,
            pieces,
            recession: self.recession.clone(),
        })
    }

    fn check_dim(&self, other: &UpperSet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn combine(&self, op: Combine<'_>) -> Result<UpperSet> {
        match op {
            Combine::Intersect(b) => self.intersect(b),
            Combine::MinkowskiAdd(b) => self.minkowski_add(b),
            Combine::Scale(t) => self.scale(t),
            Combine::Union(b) => self.union(b),
        }
    }

    pub fn intersect(&self, other: &UpperSet) -> Result<UpperSet> {
        self.check_dim(other)?;
        let pairs: Vec<(usize, usize)> = (0..self.pieces.len())
            .flat_map(|i| (0..other.pieces.len()).map(move |j| (i, j)))
            .collect();
        let pieces = par::map(&pairs, |&(i, j)| self.pieces[i].intersect(&other.pieces[j]));
        UpperSet::from_pieces(pieces, self.recession.clone())
    }

    pub fn union(&self, other: &UpperSet) -> Result<UpperSet> {
        self.check_dim(other)?;
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        UpperSet::from_pieces(pieces, self.recession.clone())
    }

    pub fn union_all<'a>(
        sets: impl IntoIterator<Item = &'a UpperSet>,
        recession: Arc<Polyhedron>,
    ) -> Result<UpperSet> {
        let mut pieces = Vec::new();
        for s in sets {
            if s.dim != recession.dim() {
                return Err(Error::DimensionMismatch {
                    left: recession.dim(),
                    right: s.dim,
                });
            }
            pieces.extend(s.pieces.iter().cloned());
        }
        UpperSet::from_pieces(pieces, recession)
    }

    pub fn minkowski_add(&self, other: &UpperSet) -> Result<UpperSet> {
        self.check_dim(other)?;
        let pairs: Vec<(usize, usize)> = (0..self.pieces.len())
            .flat_map(|i| (0..other.pieces.len()).map(move |j| (i, j)))
            .collect();
        let sums = par::map(&pairs, |&(i, j)| self.pieces[i].minkowski_sum(&other.pieces[j]));
        let pieces = sums.into_iter().collect::<Result<Vec<_>>>()?;
        UpperSet::from_pieces(pieces, self.recession.clone())
    }

    /// `t · D`; `t = 0` yields the recession cone.
    pub fn scale(&self, t: &Q) -> Result<UpperSet> {
        if t.is_negative() {
            return Err(Error::NegativeScale(rational::format(t)));
        }
        if t.is_zero() {
            return Ok(UpperSet::cone(self.recession.clone()));
        }
        let mut pieces: Vec<Polyhedron> = self.pieces.iter().map(|p| p.scale(t)).collect();
        pieces.sort();
        Ok(UpperSet {
            dim: self.dim,
            pieces,
            recession: self.recession.clone(),
        })
    }

    /// `D + v` for a vector `v` in M-coordinates.
    pub fn translate(&self, v: &[Q]) -> UpperSet {
        let mut pieces: Vec<Polyhedron> = self.pieces.iter().map(|p| p.translate(v)).collect();
        pieces.sort();
        UpperSet {
            dim: self.dim,
            pieces,
            recession: self.recession.clone(),
        }
    }

    pub fn contains_point(&self, u: &[Q]) -> bool {
        u.len() == self.dim && self.pieces.iter().any(|p| p.contains(u))
    }

    /// `self ⊆ other`, decided by polyhedral subtraction.
    pub fn is_subset_of(&self, other: &UpperSet) -> Result<bool> {
        self.check_dim(other)?;
        let cover: Vec<&Polyhedron> = other.pieces.iter().collect();
        let covered = par::map(&self.pieces, |p| piece_covered(p, &cover));
        Ok(covered.into_iter().all(|c| c))
    }

    pub fn set_eq(&self, other: &UpperSet) -> Result<bool> {
        self.check_dim(other)?;
        if self.pieces == other.pieces {
            return Ok(true);
        }
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    /// Some point of the set: a vertex of the first piece.
    pub fn some_point(&self) -> Option<Vec<Q>> {
        self.pieces
            .first()
            .and_then(|p| p.vrep().and_then(|v| v.vertices.first().cloned()))
    }
}

fn interior(dim: usize, rows: &[Halfspace]) -> bool {
    Polyhedron::new(dim, rows.to_vec()).has_interior()
}

/// True iff the closed full-dimensional `piece` lies in the union of `cover`.
/// A residual of `piece ∖ ⋃ cover` with nonempty interior is a counterexample;
/// residuals without interior can be ignored because every piece is the
/// closure of its interior.
pub(crate) fn piece_covered(piece: &Polyhedron, cover: &[&Polyhedron]) -> bool {
    if let Some(v) = piece.vrep() {
        if cover.iter().any(|q| q.contains_generated(v)) {
            return true;
        }
    }
    let dim = piece.dim();
    let mut residuals = vec![piece.halfspaces().to_vec()];
    for q in cover {
        let mut next = Vec::new();
        for r in residuals {
            let mut both = r.clone();
            both.extend(q.halfspaces().iter().cloned());
            if !interior(dim, &both) {
                next.push(r);
                continue;
            }
            let mut prefix = r;
            for h in q.halfspaces() {
                let mut part = prefix.clone();
                part.push(Halfspace::weak(
                    h.normal.iter().map(|x| -x).collect(),
                    -h.offset.clone(),
                ));
                if interior(dim, &part) {
                    next.push(part);
                }
                prefix.push(h.clone());
            }
        }
        residuals = next;
        if residuals.is_empty() {
            return true;
        }
    }
    residuals.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_of};

    fn orthant2() -> Arc<Polyhedron> {
        let p = Polyhedron::new(
            2,
            vec![
                Halfspace::weak(vec_of(&[1, 0]), int(0)),
                Halfspace::weak(vec_of(&[0, 1]), int(0)),
            ],
        );
        Arc::new(p.canonical_absorbing(&VRep::default()).unwrap().unwrap())
    }

    fn half_line() -> Arc<Polyhedron> {
        let p = Polyhedron::new(1, vec![Halfspace::weak(vec_of(&[1]), int(0))]);
        Arc::new(p.canonical_absorbing(&VRep::default()).unwrap().unwrap())
    }

    fn corner(rec: &Arc<Polyhedron>, a: i64, b: i64) -> Polyhedron {
        let _ = rec;
        Polyhedron::new(
            2,
            vec![
                Halfspace::weak(vec_of(&[1, 0]), int(a)),
                Halfspace::weak(vec_of(&[0, 1]), int(b)),
            ],
        )
    }

    fn ray_from(rec: &Arc<Polyhedron>, b: i64) -> UpperSet {
        UpperSet::from_pieces(
            vec![Polyhedron::new(1, vec![Halfspace::weak(vec_of(&[1]), int(b))])],
            rec.clone(),
        )
        .unwrap()
    }

    #[test]
    fn staircase_covers_inner_corner() {
        let rec = orthant2();
        let stairs =
            UpperSet::from_pieces(vec![corner(&rec, 2, 1), corner(&rec, 1, 4)], rec.clone()).unwrap();
        let inner = UpperSet::from_pieces(vec![corner(&rec, 2, 4)], rec.clone()).unwrap();
        assert!(inner.is_subset_of(&stairs).unwrap());
        let outer = UpperSet::from_pieces(vec![corner(&rec, 1, 1)], rec.clone()).unwrap();
        assert!(!outer.is_subset_of(&stairs).unwrap());
        assert!(stairs.is_subset_of(&outer).unwrap());
    }

    #[test]
    fn nested_union_collapses() {
        let rec = half_line();
        let u = ray_from(&rec, 1).union(&ray_from(&rec, 2)).unwrap();
        assert_eq!(u.pieces().len(), 1);
        assert!(u.set_eq(&ray_from(&rec, 1)).unwrap());
    }

    #[test]
    fn scale_zero_is_recession_cone() {
        let rec = half_line();
        let s = ray_from(&rec, 3).scale(&int(0)).unwrap();
        assert!(s.set_eq(&UpperSet::cone(rec.clone())).unwrap());
        assert!(ray_from(&rec, 3).scale(&int(-1)).is_err());
    }

    #[test]
    fn absorption_of_recession() {
        let rec = half_line();
        let s = ray_from(&rec, 1).minkowski_add(&UpperSet::cone(rec.clone())).unwrap();
        assert!(s.set_eq(&ray_from(&rec, 1)).unwrap());
    }

    #[test]
    fn covered_piece_is_removed_from_three_way_union() {
        let rec = orthant2();
        let u = UpperSet::from_pieces(
            vec![corner(&rec, 2, 1), corner(&rec, 1, 4), corner(&rec, 2, 4)],
            rec.clone(),
        )
        .unwrap();
        assert_eq!(u.pieces().len(), 2);
    }
}
