//! Evaluation of set-valued risk measures and acceptance-set-induced
//! measures as upper sets in M-coordinates.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{Halfspace, Polyhedron, UpperSet};
use crate::par;
use crate::rational::{self, dot, Q};
use crate::scenario::{Market, RandomVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Bad event `X + u ∈ −int K`.
    Weak,
    /// Bad event `X + u ∉ K`.
    Strong,
}

/// Expression tree for a set-valued risk measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureExpr {
    WorstCase,
    VaR { kind: VarKind, level: Q },
    OfAcceptance(Box<AccExpr>),
    /// `x ↦ inner(x + y)`.
    Translate { inner: Box<MeasureExpr>, y: RandomVector },
    /// `x ↦ inner(x) − u` for an eligible portfolio `u ∈ R^d`.
    Shift { inner: Box<MeasureExpr>, u: Vec<Q> },
    Union(Vec<MeasureExpr>),
    /// The empty intersection is all of M.
    Intersection(Vec<MeasureExpr>),
    /// `μ · left ⊕ (1 − μ) · right`.
    ConvexCombo {
        mu: Q,
        left: Box<MeasureExpr>,
        right: Box<MeasureExpr>,
    },
}

/// Expression tree for an acceptance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AccExpr {
    /// `{X : X ⪰ z}`.
    DominanceAt(RandomVector),
    /// `{X : X ⪰ t z for some t ∈ [0, 1]}`.
    Segment(RandomVector),
    /// `{X : X ⪰ t z for some t ≥ 0}`.
    Ray(RandomVector),
    /// `{X : X ⪰ t z + (1 − t) y for some t ∈ [0, 1]}`.
    SegmentHull { y: RandomVector, z: RandomVector },
    /// `{X : 0 ∈ R(X)}`.
    OfMeasure(Box<MeasureExpr>),
    Intersection(Vec<AccExpr>),
    Union(Vec<AccExpr>),
}

impl MeasureExpr {
    pub fn var_strong(level: Q) -> MeasureExpr {
        MeasureExpr::VaR {
            kind: VarKind::Strong,
            level,
        }
    }

    pub fn var_weak(level: Q) -> MeasureExpr {
        MeasureExpr::VaR {
            kind: VarKind::Weak,
            level,
        }
    }

    pub fn of_acceptance(a: AccExpr) -> MeasureExpr {
        MeasureExpr::OfAcceptance(Box::new(a))
    }

    pub fn translate(self, y: RandomVector) -> MeasureExpr {
        MeasureExpr::Translate {
            inner: Box::new(self),
            y,
        }
    }

    pub fn shift(self, u: Vec<Q>) -> MeasureExpr {
        MeasureExpr::Shift {
            inner: Box::new(self),
            u,
        }
    }
}

impl AccExpr {
    pub fn of_measure(r: MeasureExpr) -> AccExpr {
        AccExpr::OfMeasure(Box::new(r))
    }

    /// Constructors whose acceptance set is convex by definition.
    pub fn is_convex_kind(&self) -> bool {
        match self {
            AccExpr::DominanceAt(_)
            | AccExpr::Segment(_)
            | AccExpr::Ray(_)
            | AccExpr::SegmentHull { .. } => true,
            AccExpr::Intersection(items) => items.iter().all(AccExpr::is_convex_kind),
            AccExpr::OfMeasure(_) | AccExpr::Union(_) => false,
        }
    }
}

/// A rational extended by `±∞`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtendedScalar {
    NegInf,
    Finite(Q),
    PosInf,
}

impl fmt::Display for ExtendedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedScalar::NegInf => write!(f, "-inf"),
            ExtendedScalar::Finite(q) => write!(f, "{}", rational::format(q)),
            ExtendedScalar::PosInf => write!(f, "+inf"),
        }
    }
}

fn single_piece(market: &Market, rows: Vec<Halfspace>) -> Result<UpperSet> {
    let p = Polyhedron::new(market.m(), rows);
    UpperSet::from_pieces(vec![p], market.cone_m().polyhedron().clone())
}

/// Rows of `{c : x_ω + Bc ∈ K}` for one scenario row.
fn solvency_rows(market: &Market, row: &[Q]) -> Vec<Halfspace> {
    market
        .cone()
        .halfspaces()
        .iter()
        .zip(market.cone_rows_m())
        .map(|(a, am)| Halfspace::weak(am.clone(), -dot(a, row)))
        .collect()
}

/// `WC(x) = {u ∈ M : x + u ∈ K in every scenario}`.
pub fn worst_case(market: &Market, x: &RandomVector) -> Result<UpperSet> {
    market.check_position(x)?;
    let rows = x.rows().iter().flat_map(|r| solvency_rows(market, r)).collect();
    single_piece(market, rows)
}

fn check_level(level: &Q) -> Result<()> {
    if level.is_negative() || *level > Q::one() {
        return Err(Error::BadLevel(rational::format(level)));
    }
    Ok(())
}

/// Inclusion-minimal scenario sets `T` with `P(T) ≥ 1 − λ`, as bitmasks.
pub fn minimal_scenario_sets(probs: &[Q], level: &Q) -> Vec<u32> {
    let n = probs.len();
    assert!(n < 32, "too many scenarios for subset enumeration");
    let need = Q::one() - level;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mass: Q = members.iter().map(|&i| &probs[i]).sum();
        if mass < need {
            continue;
        }
        let minimal = members.iter().all(|&i| &mass - &probs[i] < need);
        if minimal {
            out.push(mask);
        }
    }
    out
}

/// Set-valued value at risk at level `λ`.
pub fn value_at_risk(market: &Market, kind: VarKind, level: &Q, x: &RandomVector) -> Result<UpperSet> {
    market.check_position(x)?;
    check_level(level)?;
    let rec = market.cone_m().polyhedron().clone();
    let sets = minimal_scenario_sets(market.space().probs(), level);
    let n = market.n();
    let values: Vec<Result<UpperSet>> = match kind {
        VarKind::Strong => par::map(&sets, |&mask| {
            let rows = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .flat_map(|i| solvency_rows(market, x.row(i)))
                .collect();
            single_piece(market, rows)
        }),
        VarKind::Weak => {
            // good set of a scenario: some halfspace of K holds, i.e. x_ω + u ∉ −int K
            let good: Vec<UpperSet> = x
                .rows()
                .iter()
                .map(|r| {
                    let pieces = solvency_rows(market, r)
                        .into_iter()
                        .map(|h| Polyhedron::new(market.m(), vec![h]))
                        .collect();
                    UpperSet::from_pieces(pieces, rec.clone())
                })
                .collect::<Result<_>>()?;
            par::map(&sets, |&mask| {
                let mut acc = UpperSet::whole(rec.clone());
                for (i, g) in good.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        acc = acc.intersect(g)?;
                    }
                }
                Ok(acc)
            })
        }
    };
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    UpperSet::union_all(&values, rec)
}

/// `{(c, t)}` system for `base + Bc − t · dir ⪰ 0` with `t ≥ 0` (and `t ≤ 1`
/// when `bounded`), projected onto `c`.
fn eliminate_t(market: &Market, base: &RandomVector, dir: &RandomVector, bounded: bool) -> Result<UpperSet> {
    let m = market.m();
    let mut rows = Vec::new();
    for (b, z) in base.rows().iter().zip(dir.rows()) {
        for (a, am) in market.cone().halfspaces().iter().zip(market.cone_rows_m()) {
            let mut normal = am.clone();
            normal.push(-dot(a, z));
            rows.push(Halfspace::weak(normal, -dot(a, b)));
        }
    }
    let mut t_row = vec![Q::zero(); m + 1];
    t_row[m] = Q::one();
    rows.push(Halfspace::weak(t_row.clone(), Q::zero()));
    if bounded {
        t_row[m] = -Q::one();
        rows.push(Halfspace::weak(t_row, -Q::one()));
    }
    let projected = Polyhedron::new(m + 1, rows).eliminate(&[m]);
    UpperSet::from_pieces(vec![projected], market.cone_m().polyhedron().clone())
}

/// `R_A(x) = {u ∈ M : x + u ∈ A}`.
pub fn eval_acceptance(market: &Market, a: &AccExpr, x: &RandomVector) -> Result<UpperSet> {
    market.check_position(x)?;
    let rec = market.cone_m().polyhedron().clone();
    match a {
        AccExpr::DominanceAt(z) => {
            market.check_position(z)?;
            worst_case(market, &x.sub(z)?)
        }
        AccExpr::Segment(z) => {
            market.check_position(z)?;
            eliminate_t(market, x, z, true)
        }
        AccExpr::Ray(z) => {
            market.check_position(z)?;
            eliminate_t(market, x, z, false)
        }
        AccExpr::SegmentHull { y, z } => {
            market.check_position(y)?;
            market.check_position(z)?;
            eliminate_t(market, &x.sub(y)?, &z.sub(y)?, true)
        }
        AccExpr::OfMeasure(r) => eval_measure(market, r, x),
        AccExpr::Union(items) => {
            let vals = par::map(items, |i| eval_acceptance(market, i, x));
            let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
            UpperSet::union_all(&vals, rec)
        }
        AccExpr::Intersection(items) => {
            let mut acc = UpperSet::whole(rec);
            for i in items {
                acc = acc.intersect(&eval_acceptance(market, i, x)?)?;
            }
            Ok(acc)
        }
    }
}

/// Evaluates a measure expression at `x`.
pub fn eval_measure(market: &Market, r: &MeasureExpr, x: &RandomVector) -> Result<UpperSet> {
    market.check_position(x)?;
    let rec = market.cone_m().polyhedron().clone();
    match r {
        MeasureExpr::WorstCase => worst_case(market, x),
        MeasureExpr::VaR { kind, level } => value_at_risk(market, *kind, level, x),
        MeasureExpr::OfAcceptance(a) => eval_acceptance(market, a, x),
        MeasureExpr::Translate { inner, y } => eval_measure(market, inner, &x.add(y)?),
        MeasureExpr::Shift { inner, u } => {
            let c = market.subspace().to_m(u)?;
            let neg: Vec<Q> = c.iter().map(|v| -v).collect();
            Ok(eval_measure(market, inner, x)?.translate(&neg))
        }
        MeasureExpr::Union(items) => {
            let vals = par::map(items, |i| eval_measure(market, i, x));
            let vals = vals.into_iter().collect::<Result<Vec<_>>>()?;
            UpperSet::union_all(&vals, rec)
        }
        MeasureExpr::Intersection(items) => {
            let mut acc = UpperSet::whole(rec);
            for i in items {
                acc = acc.intersect(&eval_measure(market, i, x)?)?;
            }
            Ok(acc)
        }
        MeasureExpr::ConvexCombo { mu, left, right } => {
            check_level(mu)?;
            let l = eval_measure(market, left, x)?.scale(mu)?;
            let r = eval_measure(market, right, x)?.scale(&(Q::one() - mu))?;
            l.minkowski_add(&r)
        }
    }
}

/// Interval test for `∃ t ∈ [0, 1]` (or `t ≥ 0`) with `base − t · dir ⪰ 0`.
fn exists_t(market: &Market, base: &RandomVector, dir: &RandomVector, bounded: bool) -> bool {
    let mut lo = Q::zero();
    let mut hi = bounded.then(Q::one);
    for (b, z) in base.rows().iter().zip(dir.rows()) {
        for a in market.cone().halfspaces() {
            let alpha = dot(a, b);
            let beta = dot(a, z);
            // alpha − t · beta ≥ 0
            if beta.is_zero() {
                if alpha.is_negative() {
                    return false;
                }
            } else if beta.is_positive() {
                let bound = alpha / beta;
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            } else {
                let bound = alpha / beta;
                if bound > lo {
                    lo = bound;
                }
            }
        }
    }
    hi.is_none_or(|h| lo <= h)
}

/// `x ∈ A`, decided directly from the constructor rather than through `R_A`.
pub fn accepts(market: &Market, a: &AccExpr, x: &RandomVector) -> Result<bool> {
    market.check_position(x)?;
    Ok(match a {
        AccExpr::DominanceAt(z) => {
            market.check_position(z)?;
            market.is_solvent(&x.sub(z)?)
        }
        AccExpr::Segment(z) => {
            market.check_position(z)?;
            exists_t(market, x, z, true)
        }
        AccExpr::Ray(z) => {
            market.check_position(z)?;
            exists_t(market, x, z, false)
        }
        AccExpr::SegmentHull { y, z } => {
            market.check_position(y)?;
            market.check_position(z)?;
            exists_t(market, &x.sub(y)?, &z.sub(y)?, true)
        }
        AccExpr::OfMeasure(r) => eval_measure(market, r, x)?.contains_point(&vec![Q::zero(); market.m()]),
        AccExpr::Intersection(items) => {
            for i in items {
                if !accepts(market, i, x)? {
                    return Ok(false);
                }
            }
            true
        }
        AccExpr::Union(items) => {
            for i in items {
                if accepts(market, i, x)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// `ρ(x) = inf R(x)` for `d = m = 1`.
pub fn scalarize_1d(market: &Market, r: &MeasureExpr, x: &RandomVector) -> Result<ExtendedScalar> {
    if market.d() != 1 || market.m() != 1 {
        return Err(Error::DimensionNotOne);
    }
    let value = eval_measure(market, r, x)?;
    let mut best: Option<Q> = None;
    for piece in value.pieces() {
        let v = piece.vrep().cloned().map_or_else(|| piece.compute_vrep(), Ok)?;
        let unbounded_below =
            !v.lines.is_empty() || v.rays.iter().any(|ray| ray[0].is_negative());
        if unbounded_below {
            return Ok(ExtendedScalar::NegInf);
        }
        for vert in &v.vertices {
            if best.as_ref().is_none_or(|b| vert[0] < *b) {
                best = Some(vert[0].clone());
            }
        }
    }
    Ok(best.map_or(ExtendedScalar::PosInf, ExtendedScalar::Finite))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int, vec_of};

    fn half_line(market: &Market, b: Q) -> UpperSet {
        single_piece(market, vec![Halfspace::weak(vec_of(&[1]), b)]).unwrap()
    }

    fn corner(market: &Market, a: i64, b: i64) -> Polyhedron {
        let _ = market;
        Polyhedron::new(
            2,
            vec![
                Halfspace::weak(vec_of(&[1, 0]), int(a)),
                Halfspace::weak(vec_of(&[0, 1]), int(b)),
            ],
        )
    }

    #[test]
    fn worst_case_examples() {
        let a = fixtures::mkt_a();
        let v = worst_case(&a, &fixtures::x1()).unwrap();
        assert!(v.set_eq(&half_line(&a, int(1))).unwrap());
        assert!(worst_case(&a, &fixtures::x2()).unwrap().is_empty());
        let zero = worst_case(&a, &RandomVector::zeros(2, 2)).unwrap();
        assert!(zero.set_eq(&UpperSet::cone(a.cone_m().polyhedron().clone())).unwrap());
    }

    #[test]
    fn var_fixture_has_two_corners() {
        let b = fixtures::mkt_b();
        let x = fixtures::var_x();
        let v = value_at_risk(&b, VarKind::Strong, &frac(1, 4), &x).unwrap();
        let expected = UpperSet::from_pieces(
            vec![corner(&b, 2, 1), corner(&b, 1, 4)],
            b.cone_m().polyhedron().clone(),
        )
        .unwrap();
        assert!(v.set_eq(&expected).unwrap());
        assert_eq!(v.pieces().len(), 2);

        let zero = value_at_risk(&b, VarKind::Strong, &Q::zero(), &x).unwrap();
        assert!(zero.set_eq(&worst_case(&b, &x).unwrap()).unwrap());
        assert!(value_at_risk(&b, VarKind::Weak, &Q::one(), &x).unwrap().is_whole());
        assert!(value_at_risk(&b, VarKind::Strong, &Q::one(), &x).unwrap().is_whole());
        assert_eq!(
            value_at_risk(&b, VarKind::Strong, &frac(3, 2), &x).unwrap_err(),
            Error::BadLevel("3/2".into())
        );
    }

    #[test]
    fn minimal_sets() {
        let probs = vec![frac(1, 2), frac(1, 4), frac(1, 4)];
        assert_eq!(minimal_scenario_sets(&probs, &frac(1, 4)), vec![0b011, 0b101]);
        assert_eq!(minimal_scenario_sets(&probs, &Q::zero()), vec![0b111]);
        assert_eq!(minimal_scenario_sets(&probs, &Q::one()), vec![0]);
    }

    #[test]
    fn segment_examples() {
        let a = fixtures::mkt_a();
        let zero = RandomVector::zeros(2, 2);
        let z = RandomVector::from_ints(&[&[-1, 1], &[-1, 1]]);
        let v = eval_acceptance(&a, &AccExpr::Segment(z), &zero).unwrap();
        assert!(v.set_eq(&half_line(&a, int(0))).unwrap());
        let z = RandomVector::from_ints(&[&[-2, 0], &[-2, 0]]);
        let v = eval_acceptance(&a, &AccExpr::Segment(z.clone()), &zero).unwrap();
        assert!(v.set_eq(&half_line(&a, int(-2))).unwrap());
        assert!(accepts(&a, &AccExpr::Segment(z.clone()), &z).unwrap());
        let same = eval_acceptance(&a, &AccExpr::DominanceAt(z.clone()), &z).unwrap();
        assert!(same.set_eq(&half_line(&a, int(0))).unwrap());
    }

    #[test]
    fn dominance_acceptance() {
        let a = fixtures::mkt_a();
        let z = RandomVector::from_ints(&[&[0, 0], &[1, 2]]);
        let x = fixtures::x1();
        let acc = AccExpr::DominanceAt(z);
        assert!(!accepts(&a, &acc, &x).unwrap());
        assert!(accepts(&a, &acc, &x.shift(&vec_of(&[1, 0])).unwrap()).unwrap());
    }

    #[test]
    fn convex_combo_of_half_lines() {
        let a = fixtures::mkt_a();
        let zero = RandomVector::zeros(2, 2);
        let left = MeasureExpr::WorstCase;
        let right = MeasureExpr::WorstCase.shift(vec_of(&[-2, 0]));
        let combo = MeasureExpr::ConvexCombo {
            mu: frac(1, 2),
            left: Box::new(left),
            right: Box::new(right),
        };
        let v = eval_measure(&a, &combo, &zero).unwrap();
        assert!(v.set_eq(&half_line(&a, int(1))).unwrap());
    }

    #[test]
    fn scalarization() {
        let m = fixtures::mkt_1d();
        let x = RandomVector::from_ints(&[&[3], &[-2]]);
        assert_eq!(
            scalarize_1d(&m, &MeasureExpr::WorstCase, &x).unwrap(),
            ExtendedScalar::Finite(int(2))
        );
        assert_eq!(
            scalarize_1d(&m, &MeasureExpr::var_strong(Q::one()), &x).unwrap(),
            ExtendedScalar::NegInf
        );
        assert_eq!(
            scalarize_1d(&fixtures::mkt_a(), &MeasureExpr::WorstCase, &fixtures::x1()),
            Err(Error::DimensionNotOne)
        );
    }
}
