//! Finite probability spaces, multivariate positions and the order induced
//! by the solvency cone.

use num_traits::{One, Signed, Zero};

use crate::cones::{restrict_to_subspace, ConeInM, EligibleSubspace, SolvencyCone};
use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioSpace {
    probs: Vec<Q>,
}

impl ScenarioSpace {
    pub fn new(probs: Vec<Q>) -> Result<ScenarioSpace> {
        let sum: Q = probs.iter().sum();
        if probs.is_empty() || probs.iter().any(|p| !p.is_positive()) || !sum.is_one() {
            return Err(Error::ProbabilitySum {
                sum: rational::format(&sum),
            });
        }
        Ok(ScenarioSpace { probs })
    }

    pub fn uniform(n: usize) -> ScenarioSpace {
        let p = Q::new(1.into(), (n as i64).into());
        ScenarioSpace::new(vec![p; n]).expect("uniform probabilities are valid")
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Q] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> &Q {
        &self.probs[i]
    }
}

/// An `n × d` payoff matrix: row `i` is the position in scenario `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RandomVector {
    rows: Vec<Vec<Q>>,
}

impl RandomVector {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<RandomVector> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || d == 0 {
            return Err(Error::ShapeMismatch {
                expected: "at least one scenario and one asset".into(),
                found: format!("{} rows", rows.len()),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::ShapeMismatch {
                expected: format!("rows of length {d}"),
                found: format!("length {}", r.len()),
            });
        }
        Ok(RandomVector { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> RandomVector {
        RandomVector::new(rows.iter().map(|r| rational::vec_of(r)).collect())
            .expect("rectangular integer matrix")
    }

    /// The deterministic position equal to `v` in every scenario.
    pub fn constant(n: usize, v: &[Q]) -> RandomVector {
        RandomVector {
            rows: vec![v.to_vec(); n],
        }
    }

    pub fn zeros(n: usize, d: usize) -> RandomVector {
        RandomVector::constant(n, &vec![Q::zero(); d])
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.rows[i]
    }

    fn check_same_shape(&self, other: &RandomVector) -> Result<()> {
        if self.n() != other.n() || self.d() != other.d() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.n(), self.d()),
                found: format!("{}x{}", other.n(), other.d()),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &RandomVector) -> Result<RandomVector> {
        self.check_same_shape(other)?;
        Ok(RandomVector {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| rational::add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &RandomVector) -> Result<RandomVector> {
        self.check_same_shape(other)?;
        Ok(RandomVector {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| rational::sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, t: &Q) -> RandomVector {
        RandomVector {
            rows: self.rows.iter().map(|r| rational::scale(t, r)).collect(),
        }
    }

    /// Adds the same portfolio `u` to every scenario.
    pub fn shift(&self, u: &[Q]) -> Result<RandomVector> {
        if u.len() != self.d() {
            return Err(Error::ShapeMismatch {
                expected: format!("portfolio of length {}", self.d()),
                found: format!("length {}", u.len()),
            });
        }
        Ok(RandomVector {
            rows: self.rows.iter().map(|r| rational::add(r, u)).collect(),
        })
    }

    /// `t · x + (1 − t) · y`.
    pub fn mix(&self, other: &RandomVector, t: &Q) -> Result<RandomVector> {
        let s = Q::one() - t;
        self.scale(t).add(&other.scale(&s))
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows.iter().all(|r| r == &self.rows[0])
    }
}

/// Deterministic portfolio in `R^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PortfolioVector {
    coords: Vec<Q>,
}

impl PortfolioVector {
    pub fn new(coords: Vec<Q>) -> PortfolioVector {
        PortfolioVector { coords }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.coords
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn as_constant(&self, n: usize) -> RandomVector {
        RandomVector::constant(n, &self.coords)
    }
}

/// Scenario space, solvency cone and eligible subspace, with `K ∩ M`
/// precomputed.
#[derive(Debug, Clone)]
pub struct Market {
    space: ScenarioSpace,
    cone: SolvencyCone,
    subspace: EligibleSubspace,
    cone_m: ConeInM,
    rows_m: Vec<Vec<Q>>,
}

impl Market {
    pub fn new(space: ScenarioSpace, cone: SolvencyCone, subspace: EligibleSubspace) -> Result<Market> {
        if space.n() == 0 {
            return Err(Error::MalformedDocument("no scenarios".into()));
        }
        let cone_m = restrict_to_subspace(&cone, &subspace)?;
        let rows_m = cone
            .halfspaces()
            .iter()
            .map(|a| subspace.pull_back(a))
            .collect();
        Ok(Market {
            space,
            cone,
            subspace,
            cone_m,
            rows_m,
        })
    }

    pub fn space(&self) -> &ScenarioSpace {
        &self.space
    }

    pub fn cone(&self) -> &SolvencyCone {
        &self.cone
    }

    pub fn subspace(&self) -> &EligibleSubspace {
        &self.subspace
    }

    pub fn cone_m(&self) -> &ConeInM {
        &self.cone_m
    }

    /// Halfspace normals `a_k` of `K` pulled back to M-coordinates, `a_k B`.
    pub fn cone_rows_m(&self) -> &[Vec<Q>] {
        &self.rows_m
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn d(&self) -> usize {
        self.cone.dim()
    }

    pub fn m(&self) -> usize {
        self.subspace.m()
    }

    pub fn check_position(&self, x: &RandomVector) -> Result<()> {
        if x.n() != self.n() || x.d() != self.d() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{} position", self.n(), self.d()),
                found: format!("{}x{}", x.n(), x.d()),
            });
        }
        Ok(())
    }

    /// Every scenario row of `x` lies in `K`.
    pub fn is_solvent(&self, x: &RandomVector) -> bool {
        x.rows().iter().all(|r| self.cone.contains(r))
    }
}

/// Parses a market document, or resolves a built-in fixture name.
pub fn load_market(source: &str) -> Result<Market> {
    crate::io::market_from_str(source)
}

/// `x ⪰ y`: every scenario row of `x − y` lies in `K`.
pub fn dominates(market: &Market, x: &RandomVector, y: &RandomVector) -> Result<bool> {
    market.check_position(x)?;
    market.check_position(y)?;
    Ok(market.is_solvent(&x.sub(y)?))
}

/// `t · x` with `u` added to every scenario.
pub fn translate_and_scale(x: &RandomVector, t: &Q, u: &PortfolioVector) -> Result<RandomVector> {
    x.scale(t).shift(u.coords())
}

/// Componentwise maximum over scenarios.
pub fn componentwise_sup(x: &RandomVector) -> PortfolioVector {
    let mut w = x.row(0).to_vec();
    for r in &x.rows()[1..] {
        for (a, b) in w.iter_mut().zip(r) {
            if b > a {
                *a = b.clone();
            }
        }
    }
    PortfolioVector::new(w)
}
