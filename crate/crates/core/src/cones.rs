//! Solvency-cone algebra: dual cones, restriction to the eligible subspace
//! and the bid-ask construction.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron, VRep};
use crate::linalg;
use crate::rational::{self, dot, Q};

/// Polyhedral cone with both representations in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    dim: usize,
    halfspaces: Vec<Vec<Q>>,
    rays: Vec<Vec<Q>>,
    lines: Vec<Vec<Q>>,
}

impl PolyCone {
    fn from_polyhedron(dim: usize, p: Polyhedron) -> Result<PolyCone> {
        let generated = p.convert_rep()?;
        let vrep = generated.vrep().cloned().unwrap_or_default();
        let canonical = Polyhedron::from_vrep(dim, vrep)?;
        let vrep = canonical.vrep().cloned().unwrap_or_default();
        Ok(PolyCone {
            dim,
            halfspaces: canonical
                .halfspaces()
                .iter()
                .map(|h| h.normal.clone())
                .collect(),
            rays: vrep.rays,
            lines: vrep.lines,
        })
    }

    /// `{x : a . x >= 0 for every row a}`.
    pub fn from_halfspaces(dim: usize, rows: &[Vec<Q>]) -> Result<PolyCone> {
        check_rows(dim, rows)?;
        let p = Polyhedron::new(
            dim,
            rows.iter()
                .map(|a| Halfspace::weak(a.clone(), Q::zero()))
                .collect(),
        );
        PolyCone::from_polyhedron(dim, p)
    }

    /// `cone(rays) + span(lines)`.
    pub fn from_generators(dim: usize, rays: &[Vec<Q>], lines: &[Vec<Q>]) -> Result<PolyCone> {
        check_rows(dim, rays)?;
        check_rows(dim, lines)?;
        let vrep = VRep {
            vertices: vec![vec![Q::zero(); dim]],
            rays: rays.iter().filter(|r| !rational::is_zero(r)).cloned().collect(),
            lines: lines.iter().filter(|r| !rational::is_zero(r)).cloned().collect(),
        };
        let p = Polyhedron::from_vrep(dim, vrep)?;
        PolyCone::from_polyhedron(dim, p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Irredundant inward normals.
    pub fn halfspaces(&self) -> &[Vec<Q>] {
        &self.halfspaces
    }

    /// Extreme rays modulo the lineality space.
    pub fn rays(&self) -> &[Vec<Q>] {
        &self.rays
    }

    pub fn lines(&self) -> &[Vec<Q>] {
        &self.lines
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        x.len() == self.dim && self.halfspaces.iter().all(|a| !dot(a, x).is_negative())
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &PolyCone) -> bool {
        self.rays.iter().all(|r| other.contains(r))
            && self.lines.iter().all(|l| {
                other.contains(l) && other.contains(&l.iter().map(|x| -x).collect::<Vec<_>>())
            })
    }

    pub fn set_eq(&self, other: &PolyCone) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// `{y : y . x >= 0 for all x in the cone}`; generated by the halfspace normals.
    pub fn dual(&self) -> PolyCone {
        PolyCone::from_generators(self.dim, &self.halfspaces, &[])
            .expect("cone generators are closed")
    }
}

fn check_rows(dim: usize, rows: &[Vec<Q>]) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::ShapeMismatch {
            expected: format!("vectors of length {dim}"),
            found: format!("length {}", r.len()),
        }),
        None => Ok(()),
    }
}

/// Closed convex cone `K ⊆ R^d` containing the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvencyCone {
    cone: PolyCone,
}

impl SolvencyCone {
    fn validated(cone: PolyCone) -> Result<SolvencyCone> {
        let d = cone.dim();
        let orthant_inside = (0..d).all(|j| {
            let mut e = vec![Q::zero(); d];
            e[j] = Q::one();
            cone.contains(&e)
        });
        if !orthant_inside {
            return Err(Error::OrthantNotContained);
        }
        Ok(SolvencyCone { cone })
    }

    pub fn from_halfspaces(d: usize, rows: &[Vec<Q>]) -> Result<SolvencyCone> {
        SolvencyCone::validated(PolyCone::from_halfspaces(d, rows)?)
    }

    pub fn from_generators(d: usize, rays: &[Vec<Q>], lines: &[Vec<Q>]) -> Result<SolvencyCone> {
        SolvencyCone::validated(PolyCone::from_generators(d, rays, lines)?)
    }

    /// Cone generated by `e_i` and `π_ij e_i − e_j`: one unit of asset `j` can
    /// be bought for `π_ij` units of asset `i`.
    pub fn bidask(spread: &[Vec<Q>]) -> Result<SolvencyCone> {
        let d = spread.len();
        if d == 0 || spread.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSpread("matrix must be square and nonempty".into()));
        }
        let mut gens = Vec::with_capacity(d * d);
        for i in 0..d {
            if !spread[i][i].is_one() {
                return Err(Error::InvalidSpread(format!("diagonal entry {i} is not 1")));
            }
            let mut e = vec![Q::zero(); d];
            e[i] = Q::one();
            gens.push(e);
            for j in 0..d {
                if i == j {
                    continue;
                }
                if spread[i][j] < Q::one() {
                    return Err(Error::InvalidSpread(format!("entry ({i},{j}) is below 1")));
                }
                let mut g = vec![Q::zero(); d];
                g[i] = spread[i][j].clone();
                g[j] = -Q::one();
                gens.push(g);
            }
        }
        SolvencyCone::from_generators(d, &gens, &[])
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn halfspaces(&self) -> &[Vec<Q>] {
        self.cone.halfspaces()
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        self.cone.rays()
    }

    pub fn lines(&self) -> &[Vec<Q>] {
        self.cone.lines()
    }

    /// Generators of `K⁺`: the halfspace normals of `K`.
    pub fn dual_generators(&self) -> &[Vec<Q>] {
        self.cone.halfspaces()
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.cone.contains(x)
    }

    /// `x ∈ −int K`, using that `K` is full-dimensional.
    pub fn in_neg_interior(&self, x: &[Q]) -> bool {
        self.halfspaces().iter().all(|a| dot(a, x).is_negative())
    }

    pub fn as_poly_cone(&self) -> &PolyCone {
        &self.cone
    }
}

/// `K⁺ = {y : y . x >= 0 for all x in K}`.
pub fn dual_cone(k: &SolvencyCone) -> PolyCone {
    k.cone.dual()
}

/// Linear subspace `M ⊆ R^d` with a fixed basis defining M-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EligibleSubspace {
    d: usize,
    basis: Vec<Vec<Q>>,
    complement: Vec<Vec<Q>>,
}

impl EligibleSubspace {
    pub fn from_basis(d: usize, basis: Vec<Vec<Q>>) -> Result<EligibleSubspace> {
        check_rows(d, &basis)?;
        if basis.is_empty() || basis.len() > d || linalg::rank(&basis) != basis.len() {
            return Err(Error::MalformedDocument(
                "subspace basis must be 1..=d linearly independent vectors".into(),
            ));
        }
        let complement = linalg::null_space(&basis, d);
        Ok(EligibleSubspace {
            d,
            basis,
            complement,
        })
    }

    /// Span of the listed coordinate axes.
    pub fn from_coords(d: usize, coords: &[usize]) -> Result<EligibleSubspace> {
        let mut sorted = coords.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != coords.len() || sorted.iter().any(|&c| c >= d) {
            return Err(Error::MalformedDocument(format!(
                "invalid coordinate list {coords:?} for d = {d}"
            )));
        }
        let basis = coords
            .iter()
            .map(|&c| {
                let mut e = vec![Q::zero(); d];
                e[c] = Q::one();
                e
            })
            .collect();
        EligibleSubspace::from_basis(d, basis)
    }

    pub fn full(d: usize) -> EligibleSubspace {
        EligibleSubspace::from_coords(d, &(0..d).collect::<Vec<_>>()).expect("valid axes")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.m() == self.d
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    /// Basis of `M^⊥`.
    pub fn complement(&self) -> &[Vec<Q>] {
        &self.complement
    }

    /// Row `a` of `R^d` pulled back to M-coordinates: `(a . b_1, …, a . b_m)`.
    pub fn pull_back(&self, a: &[Q]) -> Vec<Q> {
        self.basis.iter().map(|b| dot(a, b)).collect()
    }

    pub fn to_m(&self, u: &[Q]) -> Result<Vec<Q>> {
        if u.len() != self.d {
            return Err(Error::ShapeMismatch {
                expected: format!("portfolio of length {}", self.d),
                found: format!("length {}", u.len()),
            });
        }
        linalg::solve_combination(&self.basis, u).ok_or(Error::NotEligible)
    }

    pub fn from_m(&self, c: &[Q]) -> Vec<Q> {
        let mut u = vec![Q::zero(); self.d];
        for (coef, b) in c.iter().zip(&self.basis) {
            for (x, y) in u.iter_mut().zip(b) {
                *x += coef * y;
            }
        }
        u
    }

    pub fn contains(&self, u: &[Q]) -> bool {
        self.to_m(u).is_ok()
    }

    /// `y ∈ M^⊥`.
    pub fn is_orthogonal(&self, y: &[Q]) -> bool {
        self.basis.iter().all(|b| dot(b, y).is_zero())
    }
}

/// `K ∩ M` in M-coordinates.
#[derive(Debug, Clone)]
pub struct ConeInM {
    cone: Arc<Polyhedron>,
    neg_interior: Vec<Halfspace>,
}

impl ConeInM {
    /// Canonical closed cone with cached generators.
    pub fn polyhedron(&self) -> &Arc<Polyhedron> {
        &self.cone
    }

    pub fn m(&self) -> usize {
        self.cone.dim()
    }

    /// Strict system describing `−int(K ∩ M)`.
    pub fn neg_interior(&self) -> &[Halfspace] {
        &self.neg_interior
    }

    pub fn generators(&self) -> &VRep {
        self.cone.vrep().expect("cached at construction")
    }

    pub fn contains(&self, c: &[Q]) -> bool {
        self.cone.contains(c)
    }

    /// A point of `int(K ∩ M)`: the sum of all extreme rays.
    pub fn interior_point(&self) -> Vec<Q> {
        let mut p = vec![Q::zero(); self.m()];
        for r in &self.generators().rays {
            p = rational::add(&p, r);
        }
        p
    }

    /// Rows `(a_k B)` of `K ∩ M` before canonicalization.
    pub fn from_rows(m: usize, rows: Vec<Vec<Q>>) -> Result<ConeInM> {
        let p = Polyhedron::new(
            m,
            rows.into_iter()
                .filter(|r| !rational::is_zero(r))
                .map(|r| Halfspace::weak(r, Q::zero()))
                .collect(),
        );
        if !p.has_interior() {
            return Err(Error::EmptyInterior);
        }
        let cone = p
            .canonical_absorbing(&VRep::default())?
            .expect("a cone contains the origin");
        let neg_interior = cone
            .halfspaces()
            .iter()
            .map(|h| Halfspace::strict(h.normal.iter().map(|x| -x).collect(), Q::zero()))
            .collect();
        Ok(ConeInM {
            cone: Arc::new(cone),
            neg_interior,
        })
    }
}

/// `K ∩ M` expressed in the coordinates of `M`.
pub fn restrict_to_subspace(k: &SolvencyCone, m: &EligibleSubspace) -> Result<ConeInM> {
    if k.dim() != m.d() {
        return Err(Error::DimensionMismatch {
            left: k.dim(),
            right: m.d(),
        });
    }
    let rows = k.halfspaces().iter().map(|a| m.pull_back(a)).collect();
    ConeInM::from_rows(m.m(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, vec_of};

    fn mkt_a_cone() -> SolvencyCone {
        SolvencyCone::from_halfspaces(2, &[vec_of(&[1, 1]), vec_of(&[0, 1])]).unwrap()
    }

    #[test]
    fn orthant_is_self_dual() {
        let k = SolvencyCone::from_halfspaces(2, &[vec_of(&[1, 0]), vec_of(&[0, 1])]).unwrap();
        assert!(dual_cone(&k).set_eq(k.as_poly_cone()));
    }

    #[test]
    fn mkt_a_generators_and_dual() {
        let k = mkt_a_cone();
        assert_eq!(k.generators(), &[vec_of(&[-1, 1]), vec_of(&[1, 0])]);
        let dual = dual_cone(&k);
        assert_eq!(dual.rays(), &[vec_of(&[0, 1]), vec_of(&[1, 1])]);
        assert!(dual.dual().set_eq(k.as_poly_cone()));
    }

    #[test]
    fn orthant_requirement() {
        assert_eq!(
            SolvencyCone::from_halfspaces(2, &[vec_of(&[1, -1])]),
            Err(Error::OrthantNotContained)
        );
    }

    #[test]
    fn restriction_examples() {
        let m = EligibleSubspace::from_coords(2, &[0]).unwrap();
        let km = restrict_to_subspace(&mkt_a_cone(), &m).unwrap();
        assert_eq!(km.polyhedron().halfspaces(), &[Halfspace::weak(vec_of(&[1]), int(0))]);

        let orthant =
            SolvencyCone::from_halfspaces(2, &[vec_of(&[1, 0]), vec_of(&[0, 1])]).unwrap();
        let diag = EligibleSubspace::from_basis(2, vec![vec_of(&[1, -1])]).unwrap();
        assert_eq!(restrict_to_subspace(&orthant, &diag).unwrap_err(), Error::EmptyInterior);

        let full = restrict_to_subspace(&orthant, &EligibleSubspace::full(2)).unwrap();
        assert_eq!(full.generators().rays, vec![vec_of(&[0, 1]), vec_of(&[1, 0])]);
    }

    #[test]
    fn neg_interior_misses_the_cone() {
        let m = EligibleSubspace::from_coords(2, &[0]).unwrap();
        let km = restrict_to_subspace(&mkt_a_cone(), &m).unwrap();
        let mut rows = km.polyhedron().halfspaces().to_vec();
        rows.extend(km.neg_interior().iter().cloned());
        assert!(!crate::geometry::is_feasible(1, &rows));
        assert!(crate::geometry::is_feasible(1, km.neg_interior()));
    }

    #[test]
    fn bidask_examples() {
        let no_friction = SolvencyCone::bidask(&[vec_of(&[1, 1]), vec_of(&[1, 1])]).unwrap();
        assert_eq!(no_friction.halfspaces(), &[vec_of(&[1, 1])]);
        assert_eq!(no_friction.lines().len(), 1);

        let k = SolvencyCone::bidask(&[vec_of(&[1, 2]), vec_of(&[2, 1])]).unwrap();
        let expected = PolyCone::from_generators(
            2,
            &[vec_of(&[1, 0]), vec_of(&[0, 1]), vec_of(&[2, -1]), vec_of(&[-1, 2])],
            &[],
        )
        .unwrap();
        assert!(k.as_poly_cone().set_eq(&expected));
        assert_eq!(k.generators(), &[vec_of(&[-1, 2]), vec_of(&[2, -1])]);

        assert!(SolvencyCone::bidask(&[vec_of(&[1, 0]), vec_of(&[1, 1])]).is_err());
        assert!(SolvencyCone::bidask(&[vec_of(&[2, 1]), vec_of(&[1, 1])]).is_err());
    }

    #[test]
    fn subspace_coordinates() {
        let m = EligibleSubspace::from_basis(3, vec![vec_of(&[1, 1, 0]), vec_of(&[0, 0, 1])]).unwrap();
        assert_eq!(m.to_m(&vec_of(&[2, 2, -1])).unwrap(), vec_of(&[2, -1]));
        assert_eq!(m.to_m(&vec_of(&[1, 0, 0])), Err(Error::NotEligible));
        assert_eq!(m.complement().len(), 1);
        assert!(m.is_orthogonal(&vec_of(&[1, -1, 0])));
        assert_eq!(m.from_m(&vec_of(&[1, 3])), vec_of(&[1, 1, 3]));
    }
}
