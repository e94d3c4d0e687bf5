//! Decomposition families, reconstruction checks, dual certificates and the
//! translation link between monetary and star-shaped measures.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cones::dual_cone;
use crate::error::{Error, Result};
use crate::geometry::UpperSet;
use crate::io;
use crate::laws::{self, check_measure_law, LawReport, MeasureLaw, SampleBudget, Trial, Verdict, Witness};
use crate::measures::{accepts, eval_acceptance, eval_measure, worst_case, AccExpr, MeasureExpr};
use crate::par;
use crate::rational::{self, dot, Q};
use crate::scenario::{componentwise_sup, Market, RandomVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Monetary,
    StarNormalized,
    Coherent,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Monetary => "monetary",
            Theorem::StarNormalized => "star_normalized",
            Theorem::Coherent => "coherent",
        }
    }

    fn member(self, z: RandomVector) -> AccExpr {
        match self {
            Theorem::Monetary => AccExpr::DominanceAt(z),
            Theorem::StarNormalized => AccExpr::Segment(z),
            Theorem::Coherent => AccExpr::Ray(z),
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Theorem::Monetary, Theorem::StarNormalized, Theorem::Coherent]
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Theorem(Theorem),
    Hull(RandomVector),
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Theorem(t) => f.write_str(t.name()),
            FamilyKind::Hull(_) => f.write_str("hull"),
        }
    }
}

/// Acceptance sets indexed by anchors; member `i` is generated by `anchors[i]`.
#[derive(Debug, Clone)]
pub struct DecompositionFamily {
    pub kind: FamilyKind,
    pub members: Vec<AccExpr>,
    pub anchors: Vec<RandomVector>,
    /// The value at the queried position was empty.
    pub from_samples_only: bool,
}

impl DecompositionFamily {
    pub fn to_value(&self) -> Value {
        let mut doc = json!({
            "kind": self.kind.to_string(),
            "members": self.members.iter().map(io::acc_value).collect::<Vec<_>>(),
            "anchors": self.anchors.iter().map(io::position_value).collect::<Vec<_>>(),
            "from_samples_only": self.from_samples_only,
        });
        if let FamilyKind::Hull(y) = &self.kind {
            doc["y"] = io::position_value(y);
        }
        doc
    }
}

/// Anchors `x + Bv` for every vertex `v` of the pieces of `value`.
fn vertex_anchors(market: &Market, value: &UpperSet, x: &RandomVector) -> Result<Vec<RandomVector>> {
    let mut anchors = BTreeSet::new();
    for piece in value.pieces() {
        let v = match piece.vrep() {
            Some(v) => v.clone(),
            None => piece.compute_vrep()?,
        };
        for vertex in &v.vertices {
            anchors.insert(x.shift(&market.subspace().from_m(vertex))?);
        }
    }
    Ok(anchors.into_iter().collect())
}

fn require(report: LawReport) -> Result<()> {
    if report.passed() {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(format!("{} fails", report.law)))
    }
}

/// Builds the anchored family of the chosen theorem at `x`, with `extra`
/// additional anchors sampled from the acceptance set of `r`.
pub fn decompose(
    market: &Market,
    r: &MeasureExpr,
    theorem: Theorem,
    x: &RandomVector,
    extra: usize,
    budget: &SampleBudget,
) -> Result<DecompositionFamily> {
    market.check_position(x)?;
    match theorem {
        Theorem::Monetary => {}
        Theorem::StarNormalized => {
            require(check_measure_law(market, r, MeasureLaw::R3, budget)?)?;
            require(check_measure_law(market, r, MeasureLaw::R6, budget)?)?;
        }
        Theorem::Coherent => require(check_measure_law(market, r, MeasureLaw::R5, budget)?)?,
    }
    let value = eval_measure(market, r, x)?;
    if value.is_empty() && extra == 0 {
        return Err(Error::EmptyValue);
    }
    let mut anchors = vertex_anchors(market, &value, x)?;
    let acc = AccExpr::of_measure(r.clone());
    let sampled = par::map_range(extra, |i| laws::sample_accepted(market, &acc, budget, i));
    for z in sampled {
        if let Some(z) = z? {
            if !anchors.contains(&z) {
                anchors.push(z);
            }
        }
    }
    Ok(DecompositionFamily {
        kind: FamilyKind::Theorem(theorem),
        members: anchors.iter().cloned().map(|z| theorem.member(z)).collect(),
        anchors,
        from_samples_only: value.is_empty(),
    })
}

/// The family `{SegmentHull(y, Z_v)}` over the vertex anchors of `r` at `x`.
pub fn hull_family(market: &Market, r: &MeasureExpr, y: &RandomVector, x: &RandomVector) -> Result<DecompositionFamily> {
    market.check_position(x)?;
    market.check_position(y)?;
    let value = eval_measure(market, r, x)?;
    if value.is_empty() {
        return Err(Error::EmptyValue);
    }
    let anchors = vertex_anchors(market, &value, x)?;
    Ok(DecompositionFamily {
        kind: FamilyKind::Hull(y.clone()),
        members: anchors
            .iter()
            .map(|z| AccExpr::SegmentHull {
                y: y.clone(),
                z: z.clone(),
            })
            .collect(),
        anchors,
        from_samples_only: false,
    })
}

/// Union of the member values at `x`.
pub fn family_value(market: &Market, family: &DecompositionFamily, x: &RandomVector) -> Result<UpperSet> {
    let values = par::map(&family.members, |a| eval_acceptance(market, a, x));
    let values = values.into_iter().collect::<Result<Vec<_>>>()?;
    UpperSet::union_all(&values, market.cone_m().polyhedron().clone())
}

/// Checks that the family is dominated by `r` at `x`, and that it
/// reproduces `r(x)` when it holds every vertex anchor of `r(x)`.
pub fn reconstruct_check(
    market: &Market,
    r: &MeasureExpr,
    family: &DecompositionFamily,
    x: &RandomVector,
) -> Result<LawReport> {
    let target = eval_measure(market, r, x)?;
    let union = family_value(market, family, x)?;
    let complete = vertex_anchors(market, &target, x)?
        .iter()
        .all(|z| family.anchors.contains(z));
    let (ok, relation) = if !union.is_subset_of(&target)? {
        (false, "⋃ R_λ(x) ⊆ R(x)")
    } else if complete && !union.set_eq(&target)? {
        (false, "⋃ R_λ(x) = R(x)")
    } else {
        (true, "")
    };
    let witness = (!ok).then(|| Witness {
        check: "reconstruction".into(),
        index: 0,
        trial: Trial {
            x: Some(x.clone()),
            ..Trial::default()
        },
        relation: relation.into(),
        lhs: Some(union),
        rhs: Some(target),
    });
    Ok(LawReport {
        law: "reconstruction".into(),
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        samples: 1,
        seed: 0,
        budget: 1,
        witness,
        note: Some(if complete {
            "equality checked".into()
        } else {
            "containment checked; family lacks some vertex anchors".into()
        }),
    })
}

/// A vector probability measure and dual direction excluding a portfolio
/// from the worst-case value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    /// `q[j]` is the distribution of component `j` over scenarios.
    pub q: Vec<Vec<Q>>,
    pub y: Vec<Q>,
    pub excluded_point: Vec<Q>,
    pub scenario: usize,
}

impl DualCertificate {
    pub fn to_value(&self) -> Value {
        json!({
            "q": self.q.iter().map(|c| io::vec_value(c)).collect::<Vec<_>>(),
            "y": io::vec_value(&self.y),
            "excluded_point": io::vec_value(&self.excluded_point),
            "scenario": self.scenario,
        })
    }
}

/// Certificate that the eligible `u` lies outside the worst-case value of
/// `y_vec`, or `None` when it lies inside.
pub fn dual_certificate(market: &Market, y_vec: &RandomVector, u: &[Q]) -> Result<Option<DualCertificate>> {
    market.check_position(y_vec)?;
    let c = market.subspace().to_m(u)?;
    if worst_case(market, y_vec)?.contains_point(&c) {
        return Ok(None);
    }
    let mut separated = false;
    for (omega, row) in y_vec.rows().iter().enumerate() {
        let shifted = rational::add(row, u);
        for a in market.cone().dual_generators() {
            if !dot(a, &shifted).is_negative() {
                continue;
            }
            separated = true;
            if market.subspace().is_orthogonal(a) {
                continue;
            }
            let mut delta = vec![Q::zero(); market.n()];
            delta[omega] = Q::one();
            return Ok(Some(DualCertificate {
                q: vec![delta; market.d()],
                y: a.clone(),
                excluded_point: u.to_vec(),
                scenario: omega,
            }));
        }
    }
    if separated {
        Err(Error::OnlyOrthogonalSeparators)
    } else {
        // unreachable for a consistent worst-case evaluation
        Err(Error::PreconditionFailed("no separating generator".into()))
    }
}

/// Re-checks every condition of a certificate exactly.
pub fn validate_certificate(market: &Market, y_vec: &RandomVector, cert: &DualCertificate) -> bool {
    let (n, d) = (market.n(), market.d());
    if y_vec.n() != n || y_vec.d() != d || cert.q.len() != d || cert.y.len() != d || cert.excluded_point.len() != d {
        return false;
    }
    let columns_ok = cert.q.iter().all(|col| {
        col.len() == n && col.iter().all(|q| !q.is_negative()) && col.iter().sum::<Q>().is_one()
    });
    if !columns_ok || !market.subspace().contains(&cert.excluded_point) {
        return false;
    }
    let k_dual = dual_cone(market.cone());
    if !k_dual.contains(&cert.y) || market.subspace().is_orthogonal(&cert.y) {
        return false;
    }
    let density_ok = (0..n).all(|i| {
        let p = market.space().prob(i);
        let w: Vec<Q> = (0..d).map(|j| &cert.y[j] * &cert.q[j][i] / p).collect();
        k_dual.contains(&w)
    });
    if !density_ok {
        return false;
    }
    // E^Q[−y_vec], component by component
    let expectation: Vec<Q> = (0..d)
        .map(|j| -(0..n).map(|i| &cert.q[j][i] * &y_vec.row(i)[j]).sum::<Q>())
        .collect();
    dot(&cert.y, &rational::sub(&cert.excluded_point, &expectation)).is_negative()
}

/// `x ↦ R_A(x + y)` for `A` the union of `members`, with its R6 report.
pub fn star_link(
    market: &Market,
    members: &[AccExpr],
    y: &RandomVector,
    budget: &SampleBudget,
) -> Result<(MeasureExpr, LawReport)> {
    market.check_position(y)?;
    for (i, a) in members.iter().enumerate() {
        if !a.is_convex_kind() {
            return Err(Error::NonConvexMember(i));
        }
    }
    for (i, a) in members.iter().enumerate() {
        if !accepts(market, a, y)? {
            return Err(Error::NotInIntersection(i));
        }
    }
    let r = MeasureExpr::of_acceptance(AccExpr::Union(members.to_vec())).translate(y.clone());
    let report = check_measure_law(market, &r, MeasureLaw::R6, budget)?;
    Ok((r, report))
}

/// On `M = R^d`: every sampled `x` accepted by all members has its
/// componentwise supremum accepted by all members too.
pub fn esssup_bridge(market: &Market, members: &[AccExpr], budget: &SampleBudget) -> Result<LawReport> {
    if !market.subspace().is_full() {
        return Err(Error::SubspaceNotFull);
    }
    let all = AccExpr::Intersection(members.to_vec());
    let draws = par::map_range(budget.count, |i| -> Result<Option<(RandomVector, bool)>> {
        let Some(x) = laws::sample_accepted(market, &all, budget, i)? else {
            return Ok(None);
        };
        let sup = componentwise_sup(&x).as_constant(market.n());
        Ok(Some((x, accepts(market, &all, &sup)?)))
    });
    let mut samples = 0;
    for (i, draw) in draws.into_iter().enumerate() {
        let Some((x, ok)) = draw? else { continue };
        samples += 1;
        if !ok {
            return Ok(LawReport {
                law: "esssup_bridge".into(),
                verdict: Verdict::Fail,
                samples,
                seed: budget.seed,
                budget: budget.count,
                witness: Some(Witness {
                    check: "esssup_bridge".into(),
                    index: i,
                    trial: Trial {
                        x: Some(x),
                        ..Trial::default()
                    },
                    relation: "x ∈ B implies sup x ∈ B".into(),
                    lhs: None,
                    rhs: None,
                }),
                note: None,
            });
        }
    }
    Ok(LawReport {
        law: "esssup_bridge".into(),
        verdict: Verdict::Pass,
        samples,
        seed: budget.seed,
        budget: budget.count,
        witness: None,
        note: (samples < budget.count).then(|| format!("{} draws found no accepted position", budget.count - samples)),
    })
}

/// A member accepting the zero position, provided the union of the family
/// is star-shaped at the budget.
pub fn find_star_member(
    market: &Market,
    family: &DecompositionFamily,
    budget: &SampleBudget,
) -> Result<Option<AccExpr>> {
    let union = MeasureExpr::of_acceptance(AccExpr::Union(family.members.clone()));
    if !check_measure_law(market, &union, MeasureLaw::R6, budget)?.passed() {
        return Ok(None);
    }
    let zero = RandomVector::zeros(market.n(), market.d());
    for a in &family.members {
        if accepts(market, a, &zero)? {
            return Ok(Some(a.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, vec_of};

    fn budget() -> SampleBudget {
        SampleBudget::new(40, 11)
    }

    #[test]
    fn worst_case_monetary_family() {
        let a = fixtures::mkt_a();
        let x = fixtures::x1();
        let fam = decompose(&a, &MeasureExpr::WorstCase, Theorem::Monetary, &x, 0, &budget()).unwrap();
        let z = RandomVector::from_ints(&[&[0, 0], &[1, 2]]);
        assert_eq!(fam.anchors, vec![z.clone()]);
        assert_eq!(fam.members, vec![AccExpr::DominanceAt(z.clone())]);
        assert!(accepts(&a, &fam.members[0], &z).unwrap());
        let report = reconstruct_check(&a, &MeasureExpr::WorstCase, &fam, &x).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.note.as_deref(), Some("equality checked"));
    }

    #[test]
    fn empty_value_needs_samples() {
        let a = fixtures::mkt_a();
        let x = fixtures::x2();
        assert_eq!(
            decompose(&a, &MeasureExpr::WorstCase, Theorem::Monetary, &x, 0, &budget()).unwrap_err(),
            Error::EmptyValue
        );
        let fam = decompose(&a, &MeasureExpr::WorstCase, Theorem::Monetary, &x, 6, &budget()).unwrap();
        assert!(fam.from_samples_only);
        assert!(!fam.members.is_empty());
        assert!(reconstruct_check(&a, &MeasureExpr::WorstCase, &fam, &x).unwrap().passed());
    }

    #[test]
    fn var_coherent_family_reconstructs() {
        let b = fixtures::mkt_b();
        let r = MeasureExpr::var_strong(frac(1, 4));
        let x = fixtures::var_x();
        let fam = decompose(&b, &r, Theorem::Coherent, &x, 0, &budget()).unwrap();
        assert_eq!(fam.members.len(), 2);
        assert!(fam.members.iter().all(|m| matches!(m, AccExpr::Ray(_))));
        assert!(reconstruct_check(&b, &r, &fam, &x).unwrap().passed());
    }

    #[test]
    fn star_normalized_precondition() {
        let a = fixtures::mkt_a();
        let shifted = MeasureExpr::WorstCase.shift(vec_of(&[-1, 0]));
        assert!(matches!(
            decompose(&a, &shifted, Theorem::StarNormalized, &fixtures::x1(), 0, &budget()),
            Err(Error::PreconditionFailed(_))
        ));
        let fam = decompose(&a, &MeasureExpr::WorstCase, Theorem::StarNormalized, &fixtures::x1(), 0, &budget()).unwrap();
        for (m, z) in fam.members.iter().zip(&fam.anchors) {
            assert!(accepts(&a, m, z).unwrap());
        }
    }

    #[test]
    fn certificate_examples() {
        let a = fixtures::mkt_a();
        let y_vec = fixtures::x1();
        let cert = dual_certificate(&a, &y_vec, &vec_of(&[0, 0])).unwrap().unwrap();
        assert_eq!(cert.scenario, 0);
        assert_eq!(cert.y, vec_of(&[1, 1]));
        assert_eq!(cert.q, vec![vec_of(&[1, 0]), vec_of(&[1, 0])]);
        assert!(validate_certificate(&a, &y_vec, &cert));
        assert_eq!(dual_certificate(&a, &y_vec, &vec_of(&[1, 0])).unwrap(), None);
        assert_eq!(dual_certificate(&a, &y_vec, &vec_of(&[0, 1])).unwrap_err(), Error::NotEligible);

        let mut tampered = cert.clone();
        tampered.y = vec_of(&[0, 1]);
        assert!(!validate_certificate(&a, &y_vec, &tampered));
        let mut tampered = cert;
        tampered.q[1] = vec![frac(1, 2), Q::zero()];
        assert!(!validate_certificate(&a, &y_vec, &tampered));

        let b = fixtures::mkt_b();
        let zero = RandomVector::zeros(3, 2);
        let cert = dual_certificate(&b, &zero, &vec_of(&[-1, 0])).unwrap().unwrap();
        assert_eq!(cert.y, vec_of(&[1, 0]));
        assert!(validate_certificate(&b, &zero, &cert));
    }

    #[test]
    fn link_and_bridge() {
        let b = fixtures::mkt_b();
        let z1 = RandomVector::from_ints(&[&[1, -1], &[0, 2], &[-2, 0]]);
        let z2 = RandomVector::from_ints(&[&[-1, 1], &[2, 0], &[0, -1]]);
        let members = vec![AccExpr::DominanceAt(z1.clone()), AccExpr::DominanceAt(z2.clone())];
        let w1 = componentwise_sup(&z1).into_coords();
        let w2 = componentwise_sup(&z2).into_coords();
        let w: Vec<Q> = w1.iter().zip(&w2).map(|(p, q)| rational::max(p, q)).collect();
        let y = RandomVector::constant(3, &w);
        let (_, report) = star_link(&b, &members, &y, &budget()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(
            star_link(&b, &members, &RandomVector::zeros(3, 2), &budget()).unwrap_err(),
            Error::NotInIntersection(0)
        );
        let bad = vec![AccExpr::Union(members.clone())];
        assert_eq!(star_link(&b, &bad, &y, &budget()).unwrap_err(), Error::NonConvexMember(0));

        let bridge = esssup_bridge(&b, &members, &budget()).unwrap();
        assert!(bridge.passed());
        assert_eq!(bridge.samples, 40);
        let a = fixtures::mkt_a();
        assert_eq!(esssup_bridge(&a, &[], &budget()).unwrap_err(), Error::SubspaceNotFull);
    }

    #[test]
    fn star_members() {
        let a = fixtures::mkt_a();
        let zero = RandomVector::zeros(2, 2);
        let fam = decompose(&a, &MeasureExpr::WorstCase, Theorem::Monetary, &zero, 0, &budget()).unwrap();
        assert_eq!(find_star_member(&a, &fam, &budget()).unwrap(), Some(AccExpr::DominanceAt(zero)));

        let z = fixtures::x1();
        let rejected = DecompositionFamily {
            kind: FamilyKind::Theorem(Theorem::Monetary),
            members: vec![AccExpr::DominanceAt(z.clone())],
            anchors: vec![z.clone()],
            from_samples_only: false,
        };
        assert_eq!(find_star_member(&a, &rejected, &budget()).unwrap(), None);

        let single = DecompositionFamily {
            kind: FamilyKind::Theorem(Theorem::StarNormalized),
            members: vec![AccExpr::Segment(z.clone())],
            anchors: vec![z],
            from_samples_only: false,
        };
        assert_eq!(find_star_member(&a, &single, &budget()).unwrap(), Some(single.members[0].clone()));
    }

    #[test]
    fn hull_family_contains_y() {
        let a = fixtures::mkt_a();
        let y = RandomVector::from_ints(&[&[1, 1], &[1, 1]]);
        let fam = hull_family(&a, &MeasureExpr::WorstCase, &y, &fixtures::x1()).unwrap();
        assert!(fam.members.iter().all(|m| accepts(&a, m, &y).unwrap()));
    }
}
