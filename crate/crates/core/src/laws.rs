//! Seeded, witness-producing checks of the risk-measure and acceptance-set
//! axioms, the correspondences between them and star-shapedness at a set.
//!
//! A passing report means no counterexample was found at the given budget.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::UpperSet;
use crate::io;
use crate::measures::{accepts, eval_acceptance, eval_measure, AccExpr, MeasureExpr};
use crate::par;
use crate::rational::{self, Q};
use crate::scenario::{Market, RandomVector};

/// Number of seeded samples, seed, and the bound on sampled entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleBudget {
    pub count: usize,
    pub seed: u64,
    pub magnitude: i64,
}

impl SampleBudget {
    pub fn new(count: usize, seed: u64) -> SampleBudget {
        SampleBudget {
            count: count.max(1),
            seed,
            magnitude: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureLaw {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R6EquivShrink,
    R6EquivTGeq1,
    Subadditive,
    LemmaKmInR0,
    ConvexImpliesStar,
    SubStarImpliesPh,
}

impl MeasureLaw {
    pub const ALL: [MeasureLaw; 12] = [
        MeasureLaw::R1,
        MeasureLaw::R2,
        MeasureLaw::R3,
        MeasureLaw::R4,
        MeasureLaw::R5,
        MeasureLaw::R6,
        MeasureLaw::R6EquivShrink,
        MeasureLaw::R6EquivTGeq1,
        MeasureLaw::Subadditive,
        MeasureLaw::LemmaKmInR0,
        MeasureLaw::ConvexImpliesStar,
        MeasureLaw::SubStarImpliesPh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureLaw::R1 => "R1",
            MeasureLaw::R2 => "R2",
            MeasureLaw::R3 => "R3",
            MeasureLaw::R4 => "R4",
            MeasureLaw::R5 => "R5",
            MeasureLaw::R6 => "R6",
            MeasureLaw::R6EquivShrink => "R6equiv_shrink",
            MeasureLaw::R6EquivTGeq1 => "R6equiv_tgeq1",
            MeasureLaw::Subadditive => "subadditive",
            MeasureLaw::LemmaKmInR0 => "lemma_KM_in_R0",
            MeasureLaw::ConvexImpliesStar => "convex_implies_star",
            MeasureLaw::SubStarImpliesPh => "sub_star_implies_ph",
        }
    }
}

impl FromStr for MeasureLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccLaw {
    A1Translate,
    A2,
    A3,
    A4,
    A5,
    A6,
    A6Equiv,
}

impl AccLaw {
    pub const ALL: [AccLaw; 7] = [
        AccLaw::A1Translate,
        AccLaw::A2,
        AccLaw::A3,
        AccLaw::A4,
        AccLaw::A5,
        AccLaw::A6,
        AccLaw::A6Equiv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AccLaw::A1Translate => "A1_translate",
            AccLaw::A2 => "A2",
            AccLaw::A3 => "A3",
            AccLaw::A4 => "A4",
            AccLaw::A5 => "A5",
            AccLaw::A6 => "A6",
            AccLaw::A6Equiv => "A6equiv",
        }
    }
}

impl FromStr for AccLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AccLaw::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    REqRar,
    AEqAra,
    Transfer,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::REqRar => "R_eq_RAR",
            Direction::AEqAra => "A_eq_ARA",
            Direction::Transfer => "transfer",
        }
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Direction::REqRar, Direction::AEqAra, Direction::Transfer]
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::UnknownDirection(s.to_string()))
    }
}

/// The operand of a check, viewed both as a measure and as an acceptance set.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Measure(&'a MeasureExpr),
    Acceptance(&'a AccExpr),
}

impl Subject<'_> {
    fn measure(&self) -> MeasureExpr {
        match self {
            Subject::Measure(r) => (*r).clone(),
            Subject::Acceptance(a) => MeasureExpr::of_acceptance((*a).clone()),
        }
    }

    fn acceptance(&self) -> AccExpr {
        match self {
            Subject::Measure(r) => AccExpr::of_measure((*r).clone()),
            Subject::Acceptance(a) => (*a).clone(),
        }
    }
}

/// Inputs of a single sampled trial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trial {
    pub x: Option<RandomVector>,
    pub y: Option<RandomVector>,
    pub k: Option<RandomVector>,
    /// Portfolio in `R^d`.
    pub u: Option<Vec<Q>>,
    pub v: Option<Vec<Q>>,
    pub t: Option<Q>,
    pub s: Option<Q>,
}

#[derive(Debug, Clone)]
pub struct Witness {
    /// Identifier of the check that produced the trial.
    pub check: String,
    pub index: usize,
    pub trial: Trial,
    pub relation: String,
    pub lhs: Option<UpperSet>,
    pub rhs: Option<UpperSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub law: String,
    pub verdict: Verdict,
    /// Trials actually evaluated.
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_value(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "check": w.check,
                "index": w.index,
                "relation": w.relation,
                "inputs": trial_value(&w.trial),
                "lhs": w.lhs.as_ref().map(io::upper_set_value),
                "rhs": w.rhs.as_ref().map(io::upper_set_value),
            })
        });
        json!({
            "law": self.law,
            "verdict": self.verdict.to_string(),
            "samples": self.samples,
            "seed": self.seed,
            "budget": self.budget,
            "witness": witness,
            "note": self.note,
        })
    }
}

fn trial_value(t: &Trial) -> Value {
    let mut obj = serde_json::Map::new();
    let mut put = |key: &str, v: Option<Value>| {
        if let Some(v) = v {
            obj.insert(key.to_string(), v);
        }
    };
    put("x", t.x.as_ref().map(io::position_value));
    put("y", t.y.as_ref().map(io::position_value));
    put("k", t.k.as_ref().map(io::position_value));
    put("u", t.u.as_ref().map(|u| io::vec_value(u)));
    put("v", t.v.as_ref().map(|v| io::vec_value(v)));
    put("t", t.t.as_ref().map(io::q_value));
    put("s", t.s.as_ref().map(io::q_value));
    Value::Object(obj)
}

/// Per-sample random source; one independent stream per sample index.
struct Sampler<'a> {
    rng: ChaCha8Rng,
    market: &'a Market,
    magnitude: i64,
}

impl<'a> Sampler<'a> {
    fn new(market: &'a Market, budget: &SampleBudget, index: usize) -> Sampler<'a> {
        let mixed = budget
            .seed
            .wrapping_mul(0x2545_f491_4f6c_dd1d)
            .wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(mixed),
            market,
            magnitude: budget.magnitude.max(1),
        }
    }

    fn half_integer(&mut self, bound: i64) -> Q {
        rational::frac(self.rng.gen_range(-2 * bound..=2 * bound), 2)
    }

    fn position(&mut self) -> RandomVector {
        let (n, d, m) = (self.market.n(), self.market.d(), self.magnitude);
        RandomVector::new(
            (0..n)
                .map(|_| (0..d).map(|_| self.half_integer(m)).collect())
                .collect(),
        )
        .expect("nonempty shape")
    }

    /// Arbitrary point of `M`, in M-coordinates.
    fn m_point(&mut self) -> Vec<Q> {
        let m = self.magnitude;
        (0..self.market.m()).map(|_| self.half_integer(m)).collect()
    }

    fn cone_combination(&mut self, rays: &[Vec<Q>], lines: &[Vec<Q>], dim: usize) -> Vec<Q> {
        let mut p = vec![Q::zero(); dim];
        for r in rays {
            let c = rational::frac(self.rng.gen_range(0..=2), 2);
            p = rational::add(&p, &rational::scale(&c, r));
        }
        for l in lines {
            let c = rational::frac(self.rng.gen_range(-2..=2), 2);
            p = rational::add(&p, &rational::scale(&c, l));
        }
        p
    }

    /// Random element of `K ∩ M`, in M-coordinates.
    fn km_point(&mut self) -> Vec<Q> {
        let g = self.market.cone_m().generators().clone();
        self.cone_combination(&g.rays, &g.lines, self.market.m())
    }

    /// Position with every scenario row in `K`.
    fn cone_position(&mut self) -> RandomVector {
        let k = self.market.cone();
        let (rays, lines) = (k.generators().to_vec(), k.lines().to_vec());
        let d = self.market.d();
        RandomVector::new(
            (0..self.market.n())
                .map(|_| self.cone_combination(&rays, &lines, d))
                .collect(),
        )
        .expect("nonempty shape")
    }

    /// Dyadic rational in `(0, 1)`.
    fn unit_t(&mut self) -> Q {
        let j: u32 = self.rng.gen_range(1..=4);
        let k = 2 * self.rng.gen_range(0..(1i64 << (j - 1))) + 1;
        rational::dyadic(k, j)
    }

    /// Dyadic rational above 1.
    fn big_t(&mut self) -> Q {
        Q::one() / self.unit_t()
    }

    fn positive_t(&mut self) -> Q {
        match self.rng.gen_range(0..3) {
            0 => self.unit_t(),
            1 => self.big_t(),
            _ => rational::int(self.rng.gen_range(1..=3)),
        }
    }

    /// A point of `set`: a vertex of a random piece, moved into the piece
    /// along its recession directions half of the time.
    fn point_in(&mut self, set: &UpperSet) -> Option<Vec<Q>> {
        if set.is_empty() {
            return None;
        }
        let piece = &set.pieces()[self.rng.gen_range(0..set.pieces().len())];
        let v = match piece.vrep() {
            Some(v) => v.clone(),
            None => piece.compute_vrep().ok()?,
        };
        let vertex = v.vertices[self.rng.gen_range(0..v.vertices.len())].clone();
        if self.rng.gen_bool(0.5) {
            return Some(vertex);
        }
        let step = self.cone_combination(&v.rays, &v.lines, set.dim());
        Some(rational::add(&vertex, &step))
    }

    /// A position accepted by `a`, found as `x + u` with `u ∈ R_A(x)`.
    fn accepted(&mut self, a: &AccExpr) -> Result<Option<RandomVector>> {
        for _ in 0..4 {
            let x = self.position();
            let value = eval_acceptance(self.market, a, &x)?;
            if let Some(c) = self.point_in(&value) {
                let shifted = x.shift(&self.market.subspace().from_m(&c))?;
                if accepts(self.market, a, &shifted)? {
                    return Ok(Some(shifted));
                }
            }
        }
        Ok(None)
    }
}

/// A violated relation together with the sets compared.
struct Violation {
    relation: String,
    lhs: Option<UpperSet>,
    rhs: Option<UpperSet>,
}

impl Violation {
    fn sets(relation: impl Into<String>, lhs: UpperSet, rhs: UpperSet) -> Option<Violation> {
        Some(Violation {
            relation: relation.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
        })
    }

    fn plain(relation: impl Into<String>) -> Option<Violation> {
        Some(Violation {
            relation: relation.into(),
            lhs: None,
            rhs: None,
        })
    }
}

/// Every runnable trial kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Check {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    Shrink,
    TGeq1,
    Subadditive,
    KmInR0,
    PhDyadic,
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A6Equiv,
    REqRar,
    AEqAra,
    StarAt,
}

impl Check {
    const ALL: [Check; 21] = [
        Check::R1,
        Check::R2,
        Check::R3,
        Check::R4,
        Check::R5,
        Check::R6,
        Check::Shrink,
        Check::TGeq1,
        Check::Subadditive,
        Check::KmInR0,
        Check::PhDyadic,
        Check::A1,
        Check::A2,
        Check::A3,
        Check::A4,
        Check::A5,
        Check::A6,
        Check::A6Equiv,
        Check::REqRar,
        Check::AEqAra,
        Check::StarAt,
    ];

    fn id(self) -> &'static str {
        match self {
            Check::R1 => "R1",
            Check::R2 => "R2",
            Check::R3 => "R3",
            Check::R4 => "R4",
            Check::R5 => "R5",
            Check::R6 => "R6",
            Check::Shrink => "R6equiv_shrink",
            Check::TGeq1 => "R6equiv_tgeq1",
            Check::Subadditive => "subadditive",
            Check::KmInR0 => "KM_in_R0",
            Check::PhDyadic => "PH_dyadic",
            Check::A1 => "A1_translate",
            Check::A2 => "A2",
            Check::A3 => "A3",
            Check::A4 => "A4",
            Check::A5 => "A5",
            Check::A6 => "A6",
            Check::A6Equiv => "A6equiv",
            Check::REqRar => "R_eq_RAR",
            Check::AEqAra => "A_eq_ARA",
            Check::StarAt => "star_at",
        }
    }

    /// Checks that need a single deterministic trial.
    fn is_deterministic(self) -> bool {
        matches!(self, Check::R3 | Check::KmInR0)
    }
}

struct Context<'a> {
    market: &'a Market,
    measure: MeasureExpr,
    acc: AccExpr,
    base: Vec<RandomVector>,
}

impl Context<'_> {
    fn r(&self, x: &RandomVector) -> Result<UpperSet> {
        eval_measure(self.market, &self.measure, x)
    }

    fn accepts(&self, x: &RandomVector) -> Result<bool> {
        accepts(self.market, &self.acc, x)
    }

    fn eligible(&self, c: &[Q]) -> Vec<Q> {
        self.market.subspace().from_m(c)
    }

    fn zero(&self) -> RandomVector {
        RandomVector::zeros(self.market.n(), self.market.d())
    }

    fn draw(&self, check: Check, s: &mut Sampler<'_>, index: usize) -> Result<Option<Trial>> {
        let mut t = Trial::default();
        match check {
            Check::R3 | Check::KmInR0 => {}
            Check::R1 => {
                t.x = Some(s.position());
                t.u = Some(self.eligible(&s.m_point()));
            }
            Check::R2 => {
                t.x = Some(s.position());
                t.k = Some(s.cone_position());
            }
            Check::R4 => {
                t.x = Some(s.position());
                t.y = Some(s.position());
                t.t = Some(if index == 0 { rational::frac(1, 2) } else { s.unit_t() });
            }
            Check::R5 => {
                t.x = Some(s.position());
                t.t = Some(s.positive_t());
            }
            Check::R6 => {
                t.x = Some(s.position());
                t.t = Some(s.unit_t());
            }
            Check::Shrink => {
                t.x = Some(s.position());
                let (a, b) = (s.positive_t(), s.positive_t());
                if a == b {
                    t.t = Some(&a * rational::int(2));
                    t.s = Some(b);
                } else if a > b {
                    t.t = Some(a);
                    t.s = Some(b);
                } else {
                    t.t = Some(b);
                    t.s = Some(a);
                }
            }
            Check::TGeq1 => {
                t.x = Some(s.position());
                t.t = Some(s.big_t());
            }
            Check::Subadditive => {
                t.x = Some(s.position());
                t.y = Some(s.position());
            }
            Check::PhDyadic => {
                t.x = Some(s.position());
            }
            Check::A1 => {
                t.x = s.accepted(&self.acc)?;
                t.u = Some(self.eligible(&s.km_point()));
            }
            Check::A2 => {
                t.x = s.accepted(&self.acc)?;
                t.k = Some(s.cone_position());
            }
            Check::A3 => {
                let inside = s.km_point();
                let interior = rational::add(&self.market.cone_m().interior_point(), &s.km_point());
                let outside: Vec<Q> = interior.iter().map(|x| -x).collect();
                t.u = Some(self.eligible(&inside));
                t.v = Some(self.eligible(&outside));
            }
            Check::A4 => {
                t.x = s.accepted(&self.acc)?;
                t.y = s.accepted(&self.acc)?;
                t.t = Some(if index == 0 { rational::frac(1, 2) } else { s.unit_t() });
            }
            Check::A5 => {
                t.x = s.accepted(&self.acc)?;
                t.t = Some(if index.is_multiple_of(8) { Q::zero() } else { s.positive_t() });
            }
            Check::A6 => {
                t.x = s.accepted(&self.acc)?;
                t.t = Some(if index.is_multiple_of(8) { Q::zero() } else { s.unit_t() });
            }
            Check::A6Equiv => {
                t.x = s.accepted(&self.acc)?;
                t.t = Some(s.big_t());
            }
            Check::REqRar => {
                let x = s.position();
                let value = self.r(&x)?;
                let c = match s.point_in(&value) {
                    Some(p) if index.is_multiple_of(2) => {
                        // near the boundary: a point of the value, nudged
                        let nudge = s.m_point();
                        let scale = rational::frac(1, 8);
                        rational::add(&p, &rational::scale(&scale, &nudge))
                    }
                    _ => s.m_point(),
                };
                t.x = Some(x);
                t.u = Some(self.eligible(&c));
            }
            Check::AEqAra => {
                let x = s.position();
                let value = eval_acceptance(self.market, &self.acc, &x)?;
                t.x = Some(match s.point_in(&value) {
                    Some(p) if index.is_multiple_of(2) => x.shift(&self.eligible(&p))?,
                    _ => x,
                });
            }
            Check::StarAt => {
                t.x = s.accepted(&self.acc)?;
                t.y = Some(self.base[index % self.base.len()].clone());
                t.t = Some(if index.is_multiple_of(8) { Q::zero() } else { s.unit_t() });
            }
        }
        let needs_x = !matches!(check, Check::R3 | Check::KmInR0 | Check::A3);
        let needs_y = matches!(check, Check::A4);
        if (needs_x && t.x.is_none()) || (needs_y && t.y.is_none()) {
            return Ok(None);
        }
        Ok(Some(t))
    }

    fn run(&self, check: Check, trial: &Trial) -> Result<Option<Violation>> {
        let market = self.market;
        let x = || trial.x.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks x".into()));
        let y = || trial.y.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks y".into()));
        let t = || trial.t.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks t".into()));
        let to_m = |u: &Option<Vec<Q>>| -> Result<Vec<Q>> {
            let u = u.as_ref().ok_or_else(|| Error::PreconditionFailed("trial lacks u".into()))?;
            market.subspace().to_m(u)
        };
        Ok(match check {
            Check::R1 => {
                let (x, u) = (x()?, trial.u.clone().unwrap_or_default());
                let c = to_m(&trial.u)?;
                let lhs = self.r(&x.shift(&u)?)?;
                let rhs = self.r(&x)?.translate(&c.iter().map(|v| -v).collect::<Vec<_>>());
                if lhs.set_eq(&rhs)? {
                    None
                } else {
                    Violation::sets("R(x + u) = R(x) - u", lhs, rhs)
                }
            }
            Check::R2 => {
                let x = x()?;
                let k = trial.k.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks k".into()))?;
                let lhs = self.r(&x)?;
                let rhs = self.r(&x.add(&k)?)?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("R(x) ⊆ R(x + k)", lhs, rhs)
                }
            }
            Check::R3 | Check::KmInR0 => {
                let cone = UpperSet::cone(market.cone_m().polyhedron().clone());
                let r0 = self.r(&self.zero())?;
                if !cone.is_subset_of(&r0)? {
                    Violation::sets("K∩M ⊆ R(0)", cone, r0)
                } else if check == Check::R3
                    && r0.pieces().iter().any(|p| {
                        !p.with_rows(market.cone_m().neg_interior().iter().cloned()).is_empty()
                    })
                {
                    Violation::sets("R(0) ∩ -int(K∩M) = ∅", r0, cone)
                } else {
                    None
                }
            }
            Check::R4 => {
                let (x, y, t) = (x()?, y()?, t()?);
                let s = Q::one() - &t;
                let lhs = self.r(&x)?.scale(&t)?.minkowski_add(&self.r(&y)?.scale(&s)?)?;
                let rhs = self.r(&x.mix(&y, &t)?)?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("t R(x) + (1-t) R(y) ⊆ R(t x + (1-t) y)", lhs, rhs)
                }
            }
            Check::R5 => {
                let (x, t) = (x()?, t()?);
                let lhs = self.r(&x)?.scale(&t)?;
                let rhs = self.r(&x.scale(&t))?;
                if lhs.set_eq(&rhs)? {
                    None
                } else {
                    Violation::sets("t R(x) = R(t x)", lhs, rhs)
                }
            }
            Check::R6 => {
                let (x, t) = (x()?, t()?);
                let lhs = self.r(&x)?.scale(&t)?;
                let rhs = self.r(&x.scale(&t))?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("t R(x) ⊆ R(t x)", lhs, rhs)
                }
            }
            Check::Shrink => {
                let (x, b1) = (x()?, t()?);
                let b2 = trial.s.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks s".into()))?;
                let lhs = self.r(&x.scale(&b1))?.scale(&(Q::one() / &b1))?;
                let rhs = self.r(&x.scale(&b2))?.scale(&(Q::one() / &b2))?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("R(b1 x)/b1 ⊆ R(b2 x)/b2", lhs, rhs)
                }
            }
            Check::TGeq1 => {
                let (x, t) = (x()?, t()?);
                let lhs = self.r(&x.scale(&t))?;
                let rhs = self.r(&x)?.scale(&t)?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("R(t x) ⊆ t R(x)", lhs, rhs)
                }
            }
            Check::Subadditive => {
                let (x, y) = (x()?, y()?);
                let lhs = self.r(&x)?.minkowski_add(&self.r(&y)?)?;
                let rhs = self.r(&x.add(&y)?)?;
                if lhs.is_subset_of(&rhs)? {
                    None
                } else {
                    Violation::sets("R(x) + R(y) ⊆ R(x + y)", lhs, rhs)
                }
            }
            Check::PhDyadic => {
                let x = x()?;
                let base = self.r(&x)?;
                for k in -3i64..=3 {
                    let t = if k >= 0 {
                        rational::int(1 << k)
                    } else {
                        rational::frac(1, 1 << (-k))
                    };
                    let lhs = base.scale(&t)?;
                    let rhs = self.r(&x.scale(&t))?;
                    if !lhs.set_eq(&rhs)? {
                        return Ok(Violation::sets(
                            format!("t R(x) = R(t x) at t = 2^{k}"),
                            lhs,
                            rhs,
                        ));
                    }
                }
                None
            }
            Check::A1 | Check::A2 => {
                let x = x()?;
                let shifted = if check == Check::A1 {
                    x.shift(trial.u.as_deref().unwrap_or_default())?
                } else {
                    let k = trial.k.clone().ok_or_else(|| Error::PreconditionFailed("trial lacks k".into()))?;
                    x.add(&k)?
                };
                if !self.accepts(&x)? || self.accepts(&shifted)? {
                    None
                } else if check == Check::A1 {
                    Violation::plain("x ∈ A and u ∈ K∩M imply x + u ∈ A")
                } else {
                    Violation::plain("x ∈ A and k ∈ K imply x + k ∈ A")
                }
            }
            Check::A3 => {
                let n = market.n();
                let u = trial.u.clone().unwrap_or_default();
                let v = trial.v.clone().unwrap_or_default();
                if !self.accepts(&RandomVector::constant(n, &u))? {
                    Violation::plain("u ∈ K∩M implies u ∈ A")
                } else if self.accepts(&RandomVector::constant(n, &v))? {
                    Violation::plain("v ∈ -int(K∩M) implies v ∉ A")
                } else {
                    None
                }
            }
            Check::A4 => {
                let (x, y, t) = (x()?, y()?, t()?);
                if self.accepts(&x)? && self.accepts(&y)? && !self.accepts(&x.mix(&y, &t)?)? {
                    Violation::plain("x, y ∈ A imply t x + (1-t) y ∈ A")
                } else {
                    None
                }
            }
            Check::A5 | Check::A6 => {
                let (x, t) = (x()?, t()?);
                if self.accepts(&x)? && !self.accepts(&x.scale(&t))? {
                    Violation::plain("x ∈ A implies t x ∈ A")
                } else {
                    None
                }
            }
            Check::A6Equiv => {
                let (x, t) = (x()?, t()?);
                if self.accepts(&x)? && !self.accepts(&x.scale(&(Q::one() / &t)))? {
                    Violation::plain("A ⊆ t A for t ≥ 1")
                } else {
                    None
                }
            }
            Check::REqRar => {
                let x = x()?;
                let c = to_m(&trial.u)?;
                let member = self.r(&x)?.contains_point(&c);
                let shifted = x.shift(trial.u.as_deref().unwrap_or_default())?;
                let accepted = accepts(market, &AccExpr::of_measure(self.measure.clone()), &shifted)?;
                if member == accepted {
                    None
                } else {
                    Violation::plain(format!(
                        "u ∈ R(x) ⟺ x + u ∈ A_R (got {member} vs {accepted})"
                    ))
                }
            }
            Check::AEqAra => {
                let x = x()?;
                let direct = self.accepts(&x)?;
                let value = eval_acceptance(market, &self.acc, &x)?;
                let via = value.contains_point(&vec![Q::zero(); market.m()]);
                if direct == via {
                    None
                } else {
                    Violation::plain(format!("x ∈ A ⟺ 0 ∈ R_A(x) (got {direct} vs {via})"))
                }
            }
            Check::StarAt => {
                let b = y()?;
                match &trial.t {
                    None => {
                        if self.accepts(&b)? {
                            None
                        } else {
                            Violation::plain("b ∈ A")
                        }
                    }
                    Some(t) => {
                        let x = x()?;
                        if self.accepts(&x)? && !self.accepts(&x.mix(&b, t)?)? {
                            Violation::plain("x ∈ A implies t x + (1-t) b ∈ A")
                        } else {
                            None
                        }
                    }
                }
            }
        })
    }

    fn sampled(&self, check: Check, law: &str, budget: &SampleBudget) -> Result<LawReport> {
        let count = if check.is_deterministic() { 1 } else { budget.count };
        let vacuous = AtomicUsize::new(0);
        let hit = par::find_first(count, |i| {
            let mut sampler = Sampler::new(self.market, budget, i);
            let trial = match self.draw(check, &mut sampler, i) {
                Ok(Some(t)) => t,
                Ok(None) => {
                    vacuous.fetch_add(1, Ordering::Relaxed);
                    return None;
                }
                Err(e) => return Some(Err(e)),
            };
            match self.run(check, &trial) {
                Ok(None) => None,
                Ok(Some(v)) => Some(Ok(Witness {
                    check: check.id().to_string(),
                    index: i,
                    trial,
                    relation: v.relation,
                    lhs: v.lhs,
                    rhs: v.rhs,
                })),
                Err(e) => Some(Err(e)),
            }
        });
        let mut report = LawReport {
            law: law.to_string(),
            verdict: Verdict::Pass,
            samples: count - vacuous.load(Ordering::Relaxed),
            seed: budget.seed,
            budget: budget.count,
            witness: None,
            note: None,
        };
        if let Some((i, w)) = hit {
            report.verdict = Verdict::Fail;
            report.samples = i + 1;
            report.witness = Some(w?);
        } else if report.samples < count {
            report.note = Some(format!("{} draws found no admissible input", count - report.samples));
        }
        Ok(report)
    }
}

/// A seeded position accepted by `a`, or `None` when the draws miss it.
pub(crate) fn sample_accepted(
    market: &Market,
    a: &AccExpr,
    budget: &SampleBudget,
    index: usize,
) -> Result<Option<RandomVector>> {
    Sampler::new(market, budget, index).accepted(a)
}

fn context<'a>(market: &'a Market, subject: Subject<'_>) -> Context<'a> {
    Context {
        market,
        measure: subject.measure(),
        acc: subject.acceptance(),
        base: Vec::new(),
    }
}

fn implication(
    law: &str,
    budget: &SampleBudget,
    premises: Vec<LawReport>,
    conclusion: impl FnOnce() -> Result<LawReport>,
) -> Result<LawReport> {
    if let Some(failed) = premises.iter().find(|p| !p.passed()) {
        return Ok(LawReport {
            law: law.to_string(),
            verdict: Verdict::Pass,
            samples: premises.iter().map(|p| p.samples).sum(),
            seed: budget.seed,
            budget: budget.count,
            witness: None,
            note: Some(format!("premise {} failed; the implication holds vacuously", failed.law)),
        });
    }
    let mut report = conclusion()?;
    report.law = law.to_string();
    report.note = Some(format!(
        "premises {} passed",
        premises.iter().map(|p| p.law.as_str()).collect::<Vec<_>>().join(", ")
    ));
    Ok(report)
}

/// Checks one axiom or proposition for a risk measure.
pub fn check_measure_law(
    market: &Market,
    r: &MeasureExpr,
    law: MeasureLaw,
    budget: &SampleBudget,
) -> Result<LawReport> {
    let ctx = context(market, Subject::Measure(r));
    let name = law.name();
    match law {
        MeasureLaw::R1 => ctx.sampled(Check::R1, name, budget),
        MeasureLaw::R2 => ctx.sampled(Check::R2, name, budget),
        MeasureLaw::R3 => ctx.sampled(Check::R3, name, budget),
        MeasureLaw::R4 => ctx.sampled(Check::R4, name, budget),
        MeasureLaw::R5 => ctx.sampled(Check::R5, name, budget),
        MeasureLaw::R6 => ctx.sampled(Check::R6, name, budget),
        MeasureLaw::R6EquivShrink => ctx.sampled(Check::Shrink, name, budget),
        MeasureLaw::R6EquivTGeq1 => ctx.sampled(Check::TGeq1, name, budget),
        MeasureLaw::Subadditive => ctx.sampled(Check::Subadditive, name, budget),
        MeasureLaw::LemmaKmInR0 => {
            let r6 = ctx.sampled(Check::R6, "R6", budget)?;
            implication(name, budget, vec![r6], || ctx.sampled(Check::KmInR0, name, budget))
        }
        MeasureLaw::ConvexImpliesStar => {
            let r4 = ctx.sampled(Check::R4, "R4", budget)?;
            let zero = RandomVector::zeros(market.n(), market.d());
            let contains_zero = eval_measure(market, r, &zero)?.contains_point(&vec![Q::zero(); market.m()]);
            let zero_report = LawReport {
                law: "0 ∈ R(0)".into(),
                verdict: if contains_zero { Verdict::Pass } else { Verdict::Fail },
                samples: 1,
                seed: budget.seed,
                budget: budget.count,
                witness: None,
                note: None,
            };
            implication(name, budget, vec![r4, zero_report], || ctx.sampled(Check::R6, name, budget))
        }
        MeasureLaw::SubStarImpliesPh => {
            let premises = vec![
                ctx.sampled(Check::R3, "R3", budget)?,
                ctx.sampled(Check::Subadditive, "subadditive", budget)?,
                ctx.sampled(Check::R6, "R6", budget)?,
            ];
            implication(name, budget, premises, || ctx.sampled(Check::PhDyadic, name, budget))
        }
    }
}

/// Checks one axiom for an acceptance set by sampled membership implications.
pub fn check_acceptance_law(
    market: &Market,
    a: &AccExpr,
    law: AccLaw,
    budget: &SampleBudget,
) -> Result<LawReport> {
    let ctx = context(market, Subject::Acceptance(a));
    let check = match law {
        AccLaw::A1Translate => Check::A1,
        AccLaw::A2 => Check::A2,
        AccLaw::A3 => Check::A3,
        AccLaw::A4 => Check::A4,
        AccLaw::A5 => Check::A5,
        AccLaw::A6 => Check::A6,
        AccLaw::A6Equiv => Check::A6Equiv,
    };
    ctx.sampled(check, law.name(), budget)
}

/// Checks the measure/acceptance-set correspondences.
pub fn check_correspondence(
    market: &Market,
    subject: Subject<'_>,
    direction: Direction,
    budget: &SampleBudget,
) -> Result<LawReport> {
    let ctx = context(market, subject);
    match direction {
        Direction::REqRar => ctx.sampled(Check::REqRar, direction.name(), budget),
        Direction::AEqAra => ctx.sampled(Check::AEqAra, direction.name(), budget),
        Direction::Transfer => {
            let (convex, star, r_convex, r_star) = (Check::A4, Check::A6, Check::R4, Check::R6);
            // property of the set on one side transfers to the other side
            let (c_from, c_to, s_from, s_to) = match subject {
                Subject::Acceptance(_) => (convex, r_convex, star, r_star),
                Subject::Measure(_) => (r_convex, convex, r_star, star),
            };
            let mut notes = Vec::new();
            let mut samples = 0;
            for (from, to) in [(c_from, c_to), (s_from, s_to)] {
                let premise = ctx.sampled(from, from.id(), budget)?;
                samples += premise.samples;
                if !premise.passed() {
                    notes.push(format!("{} failed, {} not required", from.id(), to.id()));
                    continue;
                }
                let conclusion = ctx.sampled(to, to.id(), budget)?;
                samples += conclusion.samples;
                if !conclusion.passed() {
                    let mut report = conclusion;
                    report.law = direction.name().to_string();
                    report.note = Some(format!("{} passed but {} failed", from.id(), to.id()));
                    return Ok(report);
                }
                notes.push(format!("{} ⟹ {} holds", from.id(), to.id()));
            }
            Ok(LawReport {
                law: direction.name().to_string(),
                verdict: Verdict::Pass,
                samples,
                seed: budget.seed,
                budget: budget.count,
                witness: None,
                note: Some(notes.join("; ")),
            })
        }
    }
}

/// Star-shapedness of `A` at the set `base`.
pub fn check_star_at(
    market: &Market,
    a: &AccExpr,
    base: &[RandomVector],
    budget: &SampleBudget,
) -> Result<LawReport> {
    if base.is_empty() {
        return Err(Error::EmptyBaseSet);
    }
    for b in base {
        market.check_position(b)?;
    }
    let mut ctx = context(market, Subject::Acceptance(a));
    ctx.base = base.to_vec();
    for (i, b) in base.iter().enumerate() {
        let trial = Trial {
            y: Some(b.clone()),
            ..Trial::default()
        };
        if let Some(v) = ctx.run(Check::StarAt, &trial)? {
            return Ok(LawReport {
                law: "star_at".into(),
                verdict: Verdict::Fail,
                samples: i + 1,
                seed: budget.seed,
                budget: budget.count,
                witness: Some(Witness {
                    check: Check::StarAt.id().into(),
                    index: i,
                    trial,
                    relation: v.relation,
                    lhs: None,
                    rhs: None,
                }),
                note: Some("the base set must lie in A".into()),
            });
        }
    }
    ctx.sampled(Check::StarAt, "star_at", budget)
}

/// Re-evaluates both sides of a failure witness; true iff the violation is
/// reproduced exactly.
pub fn recheck(market: &Market, subject: Subject<'_>, witness: &Witness) -> Result<bool> {
    let check = Check::ALL
        .into_iter()
        .find(|c| c.id() == witness.check)
        .ok_or_else(|| Error::UnknownLaw(witness.check.clone()))?;
    let mut ctx = context(market, subject);
    if let Some(y) = &witness.trial.y {
        ctx.base = vec![y.clone()];
    }
    Ok(ctx.run(check, &witness.trial)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, vec_of};

    fn budget(count: usize) -> SampleBudget {
        SampleBudget::new(count, 7)
    }

    #[test]
    fn law_names_round_trip() {
        for l in MeasureLaw::ALL {
            assert_eq!(l.name().parse::<MeasureLaw>().unwrap(), l);
        }
        for l in AccLaw::ALL {
            assert_eq!(l.name().parse::<AccLaw>().unwrap(), l);
        }
        assert_eq!("R7".parse::<MeasureLaw>(), Err(Error::UnknownLaw("R7".into())));
        assert_eq!("sideways".parse::<Direction>(), Err(Error::UnknownDirection("sideways".into())));
    }

    #[test]
    fn worst_case_is_star_shaped() {
        let a = fixtures::mkt_a();
        let report = check_measure_law(&a, &MeasureExpr::WorstCase, MeasureLaw::R6, &budget(40)).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.samples, 40);
    }

    #[test]
    fn shifted_worst_case_is_not_star_shaped() {
        let a = fixtures::mkt_a();
        let r = MeasureExpr::WorstCase.shift(vec_of(&[-1, 0]));
        let report = check_measure_law(&a, &r, MeasureLaw::R6, &budget(40)).unwrap();
        assert!(!report.passed());
        let w = report.witness.unwrap();
        assert!(recheck(&a, Subject::Measure(&r), &w).unwrap());
        assert!(!recheck(&a, Subject::Measure(&MeasureExpr::WorstCase), &w).unwrap());
    }

    #[test]
    fn var_strong_is_not_convex() {
        let b = fixtures::mkt_b();
        let r = MeasureExpr::var_strong(frac(1, 4));
        let report = check_measure_law(&b, &r, MeasureLaw::R4, &budget(200)).unwrap();
        assert!(!report.passed());
        assert!(recheck(&b, Subject::Measure(&r), report.witness.as_ref().unwrap()).unwrap());
        let a = AccExpr::of_measure(r);
        let acc = check_acceptance_law(&b, &a, AccLaw::A4, &budget(200)).unwrap();
        assert!(!acc.passed());
    }

    #[test]
    fn dominance_is_monotone_and_star_shaped_at_its_apex() {
        let a = fixtures::mkt_a();
        let z = fixtures::x1();
        let acc = AccExpr::DominanceAt(z.clone());
        assert!(check_acceptance_law(&a, &acc, AccLaw::A2, &budget(30)).unwrap().passed());
        assert!(check_star_at(&a, &acc, &[z], &budget(30)).unwrap().passed());
        let rejected = fixtures::x2();
        let report = check_star_at(&a, &acc, &[rejected], &budget(30)).unwrap();
        assert!(!report.passed());
        assert_eq!(report.witness.unwrap().relation, "b ∈ A");
        assert_eq!(check_star_at(&a, &acc, &[], &budget(3)).unwrap_err(), Error::EmptyBaseSet);
    }

    #[test]
    fn reports_are_deterministic() {
        let b = fixtures::mkt_b();
        let r = MeasureExpr::var_strong(frac(1, 4));
        let one = check_measure_law(&b, &r, MeasureLaw::R4, &budget(100)).unwrap();
        let two = check_measure_law(&b, &r, MeasureLaw::R4, &budget(100)).unwrap();
        assert_eq!(one.to_value(), two.to_value());
    }
}
