//! Built-in markets and positions used by the demos, the CLI and the tests.

use crate::cones::{EligibleSubspace, SolvencyCone};
use crate::rational::{frac, vec_of};
use crate::scenario::{Market, RandomVector, ScenarioSpace};

/// Two assets, two equally likely scenarios, `K = {x₁ + x₂ ≥ 0, x₂ ≥ 0}` and
/// `M` the first coordinate axis.
pub fn mkt_a() -> Market {
    Market::new(
        ScenarioSpace::new(vec![frac(1, 2), frac(1, 2)]).unwrap(),
        SolvencyCone::from_halfspaces(2, &[vec_of(&[1, 1]), vec_of(&[0, 1])]).unwrap(),
        EligibleSubspace::from_coords(2, &[0]).unwrap(),
    )
    .unwrap()
}

/// Frictionless two-asset market on three scenarios with probabilities
/// `(1/2, 1/4, 1/4)`; `K = R²₊` and `M = R²`.
pub fn mkt_b() -> Market {
    Market::new(
        ScenarioSpace::new(vec![frac(1, 2), frac(1, 4), frac(1, 4)]).unwrap(),
        SolvencyCone::from_halfspaces(2, &[vec_of(&[1, 0]), vec_of(&[0, 1])]).unwrap(),
        EligibleSubspace::full(2),
    )
    .unwrap()
}

/// One asset, two equally likely scenarios, `K = R₊`.
pub fn mkt_1d() -> Market {
    Market::new(
        ScenarioSpace::uniform(2),
        SolvencyCone::from_halfspaces(1, &[vec_of(&[1])]).unwrap(),
        EligibleSubspace::full(1),
    )
    .unwrap()
}

/// `[(−1, 0), (0, 2)]` on MKT-A.
pub fn x1() -> RandomVector {
    RandomVector::from_ints(&[&[-1, 0], &[0, 2]])
}

/// `[(−1, 0), (0, −2)]` on MKT-A; its worst-case value is empty.
pub fn x2() -> RandomVector {
    RandomVector::from_ints(&[&[-1, 0], &[0, -2]])
}

/// `[(−1, −1), (−2, 0), (0, −4)]` on MKT-B.
pub fn var_x() -> RandomVector {
    RandomVector::from_ints(&[&[-1, -1], &[-2, 0], &[0, -4]])
}

pub const MARKET_NAMES: [&str; 3] = ["mkt-a", "mkt-b", "mkt-1d"];
pub const POSITION_NAMES: [&str; 3] = ["x1", "x2", "var-x"];

pub fn market(name: &str) -> Option<Market> {
    match name {
        "mkt-a" => Some(mkt_a()),
        "mkt-b" => Some(mkt_b()),
        "mkt-1d" => Some(mkt_1d()),
        _ => None,
    }
}

pub fn position(name: &str) -> Option<RandomVector> {
    match name {
        "x1" => Some(x1()),
        "x2" => Some(x2()),
        "var-x" => Some(var_x()),
        _ => None,
    }
}
