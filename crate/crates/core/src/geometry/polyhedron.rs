use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::dd::cone_generators;
use super::fm::{self, Tidy};
use crate::error::{Error, Result};
use crate::rational::{self, dot, primitive, primitive_signed, Q};

/// `normal . u >= offset`, or `>` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halfspace {
    pub normal: Vec<Q>,
    pub offset: Q,
    pub strict: bool,
}

impl Halfspace {
    pub fn weak(normal: Vec<Q>, offset: Q) -> Self {
        Halfspace {
            normal,
            offset,
            strict: false,
        }
    }

    pub fn strict(normal: Vec<Q>, offset: Q) -> Self {
        Halfspace {
            normal,
            offset,
            strict: true,
        }
    }

    pub fn satisfied_by(&self, u: &[Q]) -> bool {
        let v = dot(&self.normal, u);
        if self.strict {
            v > self.offset
        } else {
            v >= self.offset
        }
    }

    /// The complementary open (or closed) halfspace.
    pub fn negated(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset.clone(),
            strict: !self.strict,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    /// Scales `(normal, offset)` jointly to a primitive integer vector.
    pub fn canonical(&self) -> Halfspace {
        let mut joint = self.normal.clone();
        joint.push(self.offset.clone());
        let mut p = primitive(&joint);
        let offset = p.pop().unwrap();
        Halfspace {
            normal: p,
            offset,
            strict: self.strict,
        }
    }
}

/// Generator representation: `conv(vertices) + cone(rays) + span(lines)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Q>>,
    pub rays: Vec<Vec<Q>>,
    pub lines: Vec<Vec<Q>>,
}

impl VRep {
    /// Rays with every line listed in both orientations.
    pub fn all_rays(&self) -> Vec<Vec<Q>> {
        let mut out = self.rays.clone();
        for l in &self.lines {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out
    }

    fn normalized(mut self) -> VRep {
        self.vertices.sort();
        self.vertices.dedup();
        self.rays = self.rays.iter().map(|r| primitive(r)).collect();
        self.rays.sort();
        self.rays.dedup();
        self.lines = self.lines.iter().map(|l| primitive_signed(l)).collect();
        self.lines.sort();
        self.lines.dedup();
        self
    }
}

/// Convex polyhedron in H-representation with an optional cached V-representation.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
    vrep: Option<VRep>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.halfspaces == other.halfspaces
    }
}

impl Eq for Polyhedron {}

impl PartialOrd for Polyhedron {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyhedron {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim, &self.halfspaces).cmp(&(other.dim, &other.halfspaces))
    }
}

impl Polyhedron {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Self {
        assert!(
            halfspaces.iter().all(|h| h.normal.len() == dim),
            "halfspace dimension differs from polyhedron dimension"
        );
        Polyhedron {
            dim,
            halfspaces,
            vrep: None,
        }
    }

    pub fn universe(dim: usize) -> Self {
        Polyhedron::new(dim, Vec::new())
    }

    /// Canonical empty set `0 >= 1`.
    pub fn empty(dim: usize) -> Self {
        Polyhedron::new(dim, vec![Halfspace::weak(vec![Q::zero(); dim], Q::one())])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn vrep(&self) -> Option<&VRep> {
        self.vrep.as_ref()
    }

    pub fn is_closed(&self) -> bool {
        self.halfspaces.iter().all(|h| !h.strict)
    }

    pub fn contains(&self, u: &[Q]) -> bool {
        self.halfspaces.iter().all(|h| h.satisfied_by(u))
    }

    pub fn is_empty(&self) -> bool {
        !fm::feasible(&self.halfspaces, self.dim)
    }

    /// True iff the set has nonempty interior in `Q^dim`.
    pub fn has_interior(&self) -> bool {
        let mut rows = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            if h.is_trivial() {
                if !h.satisfied_by(&vec![Q::zero(); self.dim]) {
                    return false;
                }
                continue;
            }
            rows.push(Halfspace::strict(h.normal.clone(), h.offset.clone()));
        }
        fm::feasible(&rows, self.dim)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.dim, other.dim);
        let mut rows = self.halfspaces.clone();
        rows.extend(other.halfspaces.iter().cloned());
        Polyhedron::new(self.dim, rows)
    }

    pub fn with_rows(&self, extra: impl IntoIterator<Item = Halfspace>) -> Polyhedron {
        let mut rows = self.halfspaces.clone();
        rows.extend(extra);
        Polyhedron::new(self.dim, rows)
    }

    /// Computes vertices, rays and lines by double description.
    pub fn compute_vrep(&self) -> Result<VRep> {
        if !self.is_closed() {
            return Err(Error::StrictUnsupported);
        }
        let dim = self.dim;
        // homogenize: (u, s) with a.u - b s >= 0 and s >= 0, the latter first
        let mut rows = Vec::with_capacity(self.halfspaces.len() + 1);
        let mut s_row = vec![Q::zero(); dim + 1];
        s_row[dim] = Q::one();
        rows.push(s_row);
        for h in &self.halfspaces {
            let mut r = h.normal.clone();
            r.push(-h.offset.clone());
            rows.push(r);
        }
        let gens = cone_generators(&rows, dim + 1);
        let mut vrep = VRep::default();
        for g in gens.rays {
            let s = &g[dim];
            if s.is_positive() {
                vrep.vertices.push(g[..dim].iter().map(|x| x / s).collect());
            } else {
                vrep.rays.push(g[..dim].to_vec());
            }
        }
        vrep.lines = gens.lines.into_iter().map(|l| l[..dim].to_vec()).collect();
        if vrep.vertices.is_empty() {
            return Ok(VRep::default());
        }
        Ok(vrep.normalized())
    }

    /// Returns a copy carrying its V-representation.
    pub fn convert_rep(&self) -> Result<Polyhedron> {
        let mut p = self.clone();
        if p.vrep.is_none() {
            p.vrep = Some(self.compute_vrep()?);
        }
        Ok(p)
    }

    /// Irredundant halfspaces of the polyhedron generated by `vrep`.
    fn halfspaces_of(dim: usize, vrep: &VRep) -> Vec<Halfspace> {
        if vrep.vertices.is_empty() {
            return Polyhedron::empty(dim).halfspaces;
        }
        let mut rows = Vec::new();
        for v in &vrep.vertices {
            let mut r = v.clone();
            r.push(Q::one());
            rows.push(r);
        }
        for r in vrep.all_rays() {
            let mut row = r;
            row.push(Q::zero());
            rows.push(row);
        }
        let dual = cone_generators(&rows, dim + 1);
        let mut out = Vec::new();
        let to_half = |g: &[Q]| Halfspace::weak(g[..dim].to_vec(), -g[dim].clone()).canonical();
        for g in &dual.rays {
            if !rational::is_zero(&g[..dim]) {
                out.push(to_half(g));
            }
        }
        for l in &dual.lines {
            if !rational::is_zero(&l[..dim]) {
                out.push(to_half(l));
                let neg: Vec<Q> = l.iter().map(|x| -x).collect();
                out.push(to_half(&neg));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Builds the polyhedron generated by `vrep`, in canonical form.
    pub fn from_vrep(dim: usize, vrep: VRep) -> Result<Polyhedron> {
        let rows = Polyhedron::halfspaces_of(dim, &vrep);
        let mut p = Polyhedron::new(dim, rows);
        p.vrep = Some(p.compute_vrep()?);
        Ok(p)
    }

    /// Projects away the coordinates in `drop`; strictness propagates.
    pub fn eliminate(&self, drop: &[usize]) -> Polyhedron {
        let mut drop: Vec<usize> = drop.to_vec();
        drop.sort_unstable();
        drop.dedup();
        assert!(drop.iter().all(|&i| i < self.dim), "coordinate out of range");
        let new_dim = self.dim - drop.len();
        let mut rows = match fm::tidy(self.halfspaces.clone()) {
            Tidy::Rows(r) => r,
            Tidy::Infeasible => return Polyhedron::empty(new_dim),
        };
        for &v in drop.iter().rev() {
            rows = match fm::tidy(fm::eliminate_one(&rows, v)) {
                Tidy::Rows(r) => r,
                Tidy::Infeasible => return Polyhedron::empty(new_dim),
            };
        }
        if !fm::feasible(&rows, new_dim) {
            return Polyhedron::empty(new_dim);
        }
        Polyhedron::new(new_dim, prune_redundant(rows, new_dim))
    }

    fn sorted(mut self) -> Polyhedron {
        self.halfspaces.sort();
        self
    }

    /// `t * P` for `t > 0`.
    pub fn scale(&self, t: &Q) -> Polyhedron {
        debug_assert!(t.is_positive());
        Polyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| {
                    Halfspace {
                        normal: h.normal.clone(),
                        offset: &h.offset * t,
                        strict: h.strict,
                    }
                    .canonical()
                })
                .collect(),
            vrep: self.vrep.as_ref().map(|v| VRep {
                vertices: v.vertices.iter().map(|x| rational::scale(t, x)).collect(),
                rays: v.rays.clone(),
                lines: v.lines.clone(),
            }),
        }
        .sorted()
    }

    /// `P + v`.
    pub fn translate(&self, v: &[Q]) -> Polyhedron {
        Polyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| {
                    Halfspace {
                        normal: h.normal.clone(),
                        offset: &h.offset + dot(&h.normal, v),
                        strict: h.strict,
                    }
                    .canonical()
                })
                .collect(),
            vrep: self.vrep.as_ref().map(|r| VRep {
                vertices: r.vertices.iter().map(|x| rational::add(x, v)).collect(),
                rays: r.rays.clone(),
                lines: r.lines.clone(),
            }),
        }
        .sorted()
    }

    fn vrep_or_compute(&self) -> Result<VRep> {
        match &self.vrep {
            Some(v) => Ok(v.clone()),
            None => self.compute_vrep(),
        }
    }

    /// Minkowski sum through generator representations.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        let a = self.vrep_or_compute()?;
        let b = other.vrep_or_compute()?;
        if a.vertices.is_empty() || b.vertices.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let mut sum = VRep::default();
        for x in &a.vertices {
            for y in &b.vertices {
                sum.vertices.push(rational::add(x, y));
            }
        }
        sum.rays = a.rays.iter().chain(&b.rays).cloned().collect();
        sum.lines = a.lines.iter().chain(&b.lines).cloned().collect();
        Polyhedron::from_vrep(self.dim, sum.normalized())
    }

    /// Closed canonical form of `P + cone(recession)`: irredundant primitive
    /// halfspaces in sorted order with a canonical V-representation cached.
    /// Returns `None` for the empty set.
    pub fn canonical_absorbing(&self, recession: &VRep) -> Result<Option<Polyhedron>> {
        let v = self.vrep_or_compute()?;
        if v.vertices.is_empty() {
            return Ok(None);
        }
        let mut merged = v;
        merged.rays.extend(recession.rays.iter().cloned());
        merged.lines.extend(recession.lines.iter().cloned());
        Ok(Some(Polyhedron::from_vrep(self.dim, merged.normalized())?))
    }

    /// True iff every generator in `vrep` lies in this polyhedron.
    pub fn contains_generated(&self, vrep: &VRep) -> bool {
        vrep.vertices.iter().all(|v| self.contains(v))
            && self.halfspaces.iter().all(|h| {
                vrep.rays.iter().all(|r| !dot(&h.normal, r).is_negative())
                    && vrep.lines.iter().all(|l| dot(&h.normal, l).is_zero())
            })
    }
}

/// Drops rows implied by the others (tested by infeasibility of the negation).
pub(crate) fn prune_redundant(rows: Vec<Halfspace>, dim: usize) -> Vec<Halfspace> {
    let mut kept: Vec<Halfspace> = rows;
    let mut i = 0;
    while i < kept.len() {
        let mut probe: Vec<Halfspace> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h.clone())
            .collect();
        probe.push(kept[i].negated());
        if fm::feasible(&probe, dim) {
            i += 1;
        } else {
            kept.remove(i);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, vec_of};

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::weak(vec_of(a), int(b))
    }

    #[test]
    fn orthant_vrep() {
        let p = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]);
        let v = p.compute_vrep().unwrap();
        assert_eq!(v.vertices, vec![vec_of(&[0, 0])]);
        assert_eq!(v.rays, vec![vec_of(&[0, 1]), vec_of(&[1, 0])]);
    }

    #[test]
    fn half_line_vrep() {
        let p = Polyhedron::new(1, vec![hs(&[1], 1)]);
        let v = p.compute_vrep().unwrap();
        assert_eq!(v.vertices, vec![vec_of(&[1])]);
        assert_eq!(v.rays, vec![vec_of(&[1])]);
    }

    #[test]
    fn strict_systems_have_no_vrep() {
        let p = Polyhedron::new(1, vec![Halfspace::strict(vec_of(&[1]), int(0))]);
        assert_eq!(p.compute_vrep(), Err(Error::StrictUnsupported));
    }

    #[test]
    fn empty_system_has_no_vertices() {
        let p = Polyhedron::new(1, vec![hs(&[1], 1), hs(&[-1], 0)]);
        assert!(p.compute_vrep().unwrap().vertices.is_empty());
        assert!(p.is_empty());
    }

    #[test]
    fn eliminate_examples() {
        // {(u, t) : 0 <= t <= 1, u + 2t >= 0} -> u >= -2
        let p = Polyhedron::new(2, vec![hs(&[0, 1], 0), hs(&[0, -1], -1), hs(&[1, 2], 0)]);
        assert_eq!(p.eliminate(&[1]).halfspaces(), &[hs(&[1], -2)]);
        let q = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0)]);
        assert_eq!(q.eliminate(&[1]).halfspaces(), &[hs(&[1], 0)]);
        let e = Polyhedron::new(2, vec![hs(&[0, 1], 1), hs(&[0, -1], 0)]);
        assert!(e.eliminate(&[1]).is_empty());
    }

    #[test]
    fn canonical_drops_redundant_rows() {
        let p = Polyhedron::new(1, vec![hs(&[1], 0), hs(&[1], -1)]);
        let c = p.canonical_absorbing(&VRep::default()).unwrap().unwrap();
        assert_eq!(c.halfspaces(), &[hs(&[1], 0)]);
        let half = Polyhedron::new(1, vec![Halfspace::weak(vec_of(&[2]), int(1))]);
        let c = half.canonical_absorbing(&VRep::default()).unwrap().unwrap();
        assert_eq!(c.vrep().unwrap().vertices, vec![vec![frac(1, 2)]]);
    }

    #[test]
    fn minkowski_of_half_lines() {
        let a = Polyhedron::new(1, vec![hs(&[1], 1)]);
        let b = Polyhedron::new(1, vec![hs(&[1], 0)]);
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(s.halfspaces(), &[hs(&[1], 1)]);
    }

    #[test]
    fn interior_detection() {
        let flat = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[-1, 0], 0)]);
        assert!(!flat.is_empty());
        assert!(!flat.has_interior());
        assert!(Polyhedron::universe(2).has_interior());
    }
}
