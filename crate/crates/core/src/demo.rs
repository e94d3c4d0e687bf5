//! Named reproductions with their expected outcomes built in.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fixtures;
use crate::geometry::{Halfspace, Polyhedron, UpperSet};
use crate::io;
use crate::laws::{check_measure_law, LawReport, MeasureLaw, SampleBudget};
use crate::measures::{accepts, eval_acceptance, eval_measure, AccExpr, MeasureExpr};
use crate::rational::{self, frac, vec_of, Q};
use crate::represent::star_link;
use crate::scenario::RandomVector;

pub const NAMES: [&str; 3] = ["remark52", "example51", "var_fixture"];

#[derive(Debug, Clone, Serialize)]
pub struct DemoOutcome {
    pub name: String,
    /// Every expectation matched.
    pub passed: bool,
    pub lines: Vec<String>,
    pub reports: Vec<Value>,
}

struct Recorder {
    passed: bool,
    lines: Vec<String>,
    reports: Vec<Value>,
}

impl Recorder {
    fn new() -> Recorder {
        Recorder {
            passed: true,
            lines: Vec::new(),
            reports: Vec::new(),
        }
    }

    fn expect(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        let mark = if ok { "ok" } else { "MISMATCH" };
        self.lines.push(format!("[{mark}] {line}"));
    }

    fn report(&mut self, expect_pass: bool, label: &str, report: &LawReport) {
        let mut line = format!("{label}: {} after {} samples", report.verdict, report.samples);
        if let Some(w) = &report.witness {
            line.push_str(&format!(" (witness #{}: {})", w.index, w.relation));
        }
        self.expect(report.passed() == expect_pass, line);
        self.reports.push(report.to_value());
    }

    fn finish(self, name: &str) -> DemoOutcome {
        DemoOutcome {
            name: name.to_string(),
            passed: self.passed,
            lines: self.lines,
            reports: self.reports,
        }
    }
}

pub fn run(name: &str, budget: &SampleBudget) -> Result<DemoOutcome> {
    match name {
        "remark52" => remark52(budget),
        "example51" => example51(budget),
        "var_fixture" => var_fixture(budget),
        _ => Err(Error::MalformedDocument(format!(
            "unknown demo '{name}', expected one of {}",
            NAMES.join(", ")
        ))),
    }
}

/// On MKT-A, `B = (1,1) + K` is nonempty but misses `M`; translating by a
/// random vector in `B` still links the union to a star-shaped measure.
pub fn remark52(budget: &SampleBudget) -> Result<DemoOutcome> {
    let market = fixtures::mkt_a();
    let y = RandomVector::constant(2, &vec_of(&[1, 1]));
    let b = AccExpr::DominanceAt(y.clone());
    let zero = RandomVector::zeros(2, 2);
    let mut rec = Recorder::new();

    rec.expect(accepts(&market, &b, &y)?, "B ≠ ∅: (1,1) ∈ B".into());
    let r0 = eval_acceptance(&market, &b, &zero)?;
    rec.expect(r0.is_empty(), format!("B ∩ M = R_B(0) = {}", describe(&r0)));
    let shifted = MeasureExpr::of_acceptance(b.clone()).shift(vec_of(&[-1, 0]));
    let s0 = eval_measure(&market, &shifted, &zero)?;
    rec.expect(
        s0.is_empty(),
        "no eligible shift normalizes R_B: every shift of R_B(0) is empty".into(),
    );
    let (_, report) = star_link(&market, &[b], &y, budget)?;
    rec.report(true, "Translate(R_B, Y = (1,1)) star-shaped (R6)", &report);
    Ok(rec.finish("remark52"))
}

/// `WC + c` with `c` inside `K ∩ M` is not star-shaped; removing the shift
/// gives back a convex normalized measure.
pub fn example51(budget: &SampleBudget) -> Result<DemoOutcome> {
    let market = fixtures::mkt_a();
    let c = vec_of(&[1, 0]);
    let mut rec = Recorder::new();
    let neg_cm: Vec<Q> = market.subspace().to_m(&c)?.iter().map(|v| -v).collect();
    rec.expect(
        market.cone_m().neg_interior().iter().all(|h| h.satisfied_by(&neg_cm)),
        "c = (1,0) lies in int(K∩M)".into(),
    );
    let minus_c: Vec<Q> = c.iter().map(|v| -v).collect();
    let bad = MeasureExpr::WorstCase.shift(minus_c);
    rec.report(false, "Shift(WC, -c) star-shaped (R6)", &check_measure_law(&market, &bad, MeasureLaw::R6, budget)?);
    let back = bad.shift(c);
    rec.report(true, "Shift(Shift(WC, -c), c) convex (R4)", &check_measure_law(&market, &back, MeasureLaw::R4, budget)?);
    rec.report(true, "Shift(Shift(WC, -c), c) star-shaped (R6)", &check_measure_law(&market, &back, MeasureLaw::R6, budget)?);
    Ok(rec.finish("example51"))
}

/// Strong V@R at level 1/4 on MKT-B: a two-corner value and a convexity
/// violation.
pub fn var_fixture(budget: &SampleBudget) -> Result<DemoOutcome> {
    let market = fixtures::mkt_b();
    let r = MeasureExpr::var_strong(frac(1, 4));
    let x = fixtures::var_x();
    let value = eval_measure(&market, &r, &x)?;
    let corner = |a: i64, b: i64| {
        Polyhedron::new(
            2,
            vec![
                Halfspace::weak(vec_of(&[1, 0]), rational::int(a)),
                Halfspace::weak(vec_of(&[0, 1]), rational::int(b)),
            ],
        )
    };
    let expected = UpperSet::from_pieces(vec![corner(2, 1), corner(1, 4)], market.cone_m().polyhedron().clone())?;
    let mut rec = Recorder::new();
    rec.expect(
        value.set_eq(&expected)?,
        format!("V@R(x) = ((2,1) + R²₊) ∪ ((1,4) + R²₊): got {}", describe(&value)),
    );
    rec.report(false, "strong V@R(1/4) convex (R4)", &check_measure_law(&market, &r, MeasureLaw::R4, budget)?);
    rec.report(true, "strong V@R(1/4) star-shaped (R6)", &check_measure_law(&market, &r, MeasureLaw::R6, budget)?);
    Ok(rec.finish("var_fixture"))
}

fn describe(set: &UpperSet) -> String {
    if set.is_empty() {
        return "∅".into();
    }
    let doc = io::upper_set_value(set);
    let pieces = doc["pieces"].as_array().map(Vec::len).unwrap_or(0);
    let vertices: Vec<String> = set
        .pieces()
        .iter()
        .filter_map(|p| p.vrep())
        .flat_map(|v| v.vertices.iter())
        .map(|v| format!("({})", v.iter().map(rational::format).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{pieces} piece(s), vertices {}", vertices.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demos_reproduce() {
        let budget = SampleBudget::new(60, 7);
        for name in NAMES {
            let out = run(name, &budget).unwrap();
            assert!(out.passed, "{name}: {:#?}", out.lines);
        }
        assert!(run("nope", &budget).is_err());
    }
}
