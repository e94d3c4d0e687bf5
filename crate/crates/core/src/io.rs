//! JSON documents for markets, positions, upper sets, expressions, reports
//! and certificates. Rationals are written as `"p/q"` strings and read from
//! strings or integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::cones::{EligibleSubspace, SolvencyCone};
use crate::error::{Error, Result};
use crate::geometry::{Polyhedron, UpperSet, VRep};
use crate::measures::{AccExpr, MeasureExpr, VarKind};
use crate::rational::{self, Q};
use crate::scenario::{Market, RandomVector, ScenarioSpace};

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedDocument(msg.into())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| malformed(e.to_string()))
}

pub fn q_of(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(rational::int(i)),
            None => Err(malformed(format!("{n} is not an integer; write fractions as \"p/q\""))),
        },
        other => Err(malformed(format!("expected a rational, found {other}"))),
    }
}

pub fn q_value(q: &Q) -> Value {
    Value::String(rational::format(q))
}

pub fn vec_of_value(v: &Value) -> Result<Vec<Q>> {
    v.as_array()
        .ok_or_else(|| malformed("expected an array of rationals"))?
        .iter()
        .map(q_of)
        .collect()
}

pub fn vec_value(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q_value).collect())
}

fn matrix_of_value(v: &Value) -> Result<Vec<Vec<Q>>> {
    v.as_array()
        .ok_or_else(|| malformed("expected an array of vectors"))?
        .iter()
        .map(vec_of_value)
        .collect()
}

fn matrix_value(rows: &[Vec<Q>]) -> Value {
    Value::Array(rows.iter().map(|r| vec_value(r)).collect())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing field `{key}`")))
}

fn single_key(v: &Value) -> Result<(&str, &Value)> {
    match v.as_object() {
        Some(obj) if obj.len() == 1 => {
            let (k, inner) = obj.iter().next().unwrap();
            Ok((k.as_str(), inner))
        }
        _ => Err(malformed(format!("expected an object with exactly one key, found {v}"))),
    }
}

pub fn market_from_value(v: &Value) -> Result<Market> {
    let d = field(v, "d")?
        .as_u64()
        .ok_or_else(|| malformed("`d` must be a positive integer"))? as usize;
    if d == 0 {
        return Err(malformed("`d` must be positive"));
    }
    let probs = vec_of_value(field(v, "probs")?)?;
    let space = ScenarioSpace::new(probs)?;
    let cone_doc = field(v, "cone")?;
    let cone = if let Some(h) = cone_doc.get("halfspaces") {
        SolvencyCone::from_halfspaces(d, &matrix_of_value(h)?)?
    } else if let Some(b) = cone_doc.get("bidask") {
        let spread = matrix_of_value(b)?;
        if spread.len() != d {
            return Err(malformed("bid-ask matrix must be d x d"));
        }
        SolvencyCone::bidask(&spread)?
    } else {
        return Err(malformed("cone needs `halfspaces` or `bidask`"));
    };
    let sub_doc = field(v, "subspace")?;
    let subspace = if let Some(c) = sub_doc.get("coords") {
        let coords = c
            .as_array()
            .ok_or_else(|| malformed("`coords` must be an array"))?
            .iter()
            .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| malformed("bad coordinate index")))
            .collect::<Result<Vec<_>>>()?;
        EligibleSubspace::from_coords(d, &coords)?
    } else if let Some(b) = sub_doc.get("basis") {
        EligibleSubspace::from_basis(d, matrix_of_value(b)?)?
    } else {
        return Err(malformed("subspace needs `coords` or `basis`"));
    };
    Market::new(space, cone, subspace)
}

pub fn market_from_str(text: &str) -> Result<Market> {
    market_from_value(&parse_json(text)?)
}

pub fn market_value(market: &Market) -> Value {
    json!({
        "d": market.d(),
        "probs": vec_value(market.space().probs()),
        "cone": { "halfspaces": matrix_value(market.cone().halfspaces()) },
        "subspace": { "basis": matrix_value(market.subspace().basis()) },
    })
}

/// Accepts `{"rows": [...]}` or a bare matrix.
pub fn position_from_value(v: &Value) -> Result<RandomVector> {
    let rows = match v.get("rows") {
        Some(r) => r,
        None => v,
    };
    RandomVector::new(matrix_of_value(rows)?)
}

pub fn position_value(x: &RandomVector) -> Value {
    json!({ "rows": matrix_value(x.rows()) })
}

fn piece_value(p: &Polyhedron) -> Value {
    let halfspaces: Vec<Value> = p
        .halfspaces()
        .iter()
        .map(|h| {
            let mut row = h.normal.clone();
            row.push(h.offset.clone());
            vec_value(&row)
        })
        .collect();
    let vrep = p
        .vrep()
        .cloned()
        .unwrap_or_else(|| p.compute_vrep().unwrap_or_default());
    let mut obj = Map::new();
    obj.insert("halfspaces".into(), Value::Array(halfspaces));
    obj.insert("vertices".into(), matrix_value(&vrep.vertices));
    obj.insert("rays".into(), matrix_value(&vrep.rays));
    if !vrep.lines.is_empty() {
        obj.insert("lines".into(), matrix_value(&vrep.lines));
    }
    Value::Object(obj)
}

/// `{"pieces": [{"halfspaces": [[a…, b]], "vertices": […], "rays": […]}]}`
/// where each row means `a · u ≥ b`.
pub fn upper_set_value(set: &UpperSet) -> Value {
    json!({ "pieces": set.pieces().iter().map(piece_value).collect::<Vec<_>>() })
}

pub fn upper_set_from_value(v: &Value, recession: Arc<Polyhedron>) -> Result<UpperSet> {
    let dim = recession.dim();
    let pieces = field(v, "pieces")?
        .as_array()
        .ok_or_else(|| malformed("`pieces` must be an array"))?;
    let mut out = Vec::with_capacity(pieces.len());
    for p in pieces {
        let rows = matrix_of_value(field(p, "halfspaces")?)?;
        let mut hs = Vec::with_capacity(rows.len());
        for mut r in rows {
            if r.len() != dim + 1 {
                return Err(malformed(format!("halfspace rows must have {} entries", dim + 1)));
            }
            let b = r.pop().unwrap();
            hs.push(crate::geometry::Halfspace::weak(r, b));
        }
        out.push(Polyhedron::new(dim, hs));
    }
    UpperSet::from_pieces(out, recession)
}

/// Vertex and ray listing for sets in at most two M-coordinates.
pub fn csv_vertices(set: &UpperSet) -> Result<String> {
    if set.dim() > 2 {
        return Err(Error::ShapeMismatch {
            expected: "at most 2 M-coordinates for csv-vertices".into(),
            found: format!("{}", set.dim()),
        });
    }
    let mut out = String::from("piece,kind");
    for j in 0..set.dim() {
        out.push_str(&format!(",u{}", j + 1));
    }
    out.push('\n');
    for (i, p) in set.pieces().iter().enumerate() {
        let v = p.vrep().cloned().map_or_else(|| p.compute_vrep(), Ok)?;
        let groups = [("vertex", &v.vertices), ("ray", &v.rays), ("line", &v.lines)];
        for (kind, list) in groups {
            for g in list {
                out.push_str(&format!("{i},{kind}"));
                for x in g {
                    out.push(',');
                    out.push_str(&rational::format(x));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn upper_set_from_csv(text: &str, recession: Arc<Polyhedron>) -> Result<UpperSet> {
    let dim = recession.dim();
    let mut pieces: BTreeMap<usize, VRep> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != dim + 2 {
            return Err(malformed(format!("csv line {} has {} cells", lineno + 1, cells.len())));
        }
        let idx: usize = cells[0]
            .parse()
            .map_err(|_| malformed(format!("bad piece index on line {}", lineno + 1)))?;
        let coords = cells[2..]
            .iter()
            .map(|c| rational::parse(c))
            .collect::<Result<Vec<_>>>()?;
        let entry = pieces.entry(idx).or_default();
        match cells[1] {
            "vertex" => entry.vertices.push(coords),
            "ray" => entry.rays.push(coords),
            "line" => entry.lines.push(coords),
            other => return Err(malformed(format!("unknown generator kind `{other}`"))),
        }
    }
    let polys = pieces
        .into_values()
        .map(|v| Polyhedron::from_vrep(dim, v))
        .collect::<Result<Vec<_>>>()?;
    UpperSet::from_pieces(polys, recession)
}

pub fn measure_from_value(v: &Value) -> Result<MeasureExpr> {
    if let Value::String(s) = v {
        return match s.as_str() {
            "wc" | "worst_case" => Ok(MeasureExpr::WorstCase),
            other => Err(malformed(format!("unknown measure `{other}`"))),
        };
    }
    let (key, inner) = single_key(v)?;
    Ok(match key {
        "wc" | "worst_case" => MeasureExpr::WorstCase,
        "var" => {
            let kind = match field(inner, "kind")?.as_str() {
                Some("weak") => VarKind::Weak,
                Some("strong") => VarKind::Strong,
                _ => return Err(malformed("var kind must be `weak` or `strong`")),
            };
            MeasureExpr::VaR {
                kind,
                level: q_of(field(inner, "level")?)?,
            }
        }
        "of_acceptance" => MeasureExpr::of_acceptance(acc_from_value(inner)?),
        "translate" => MeasureExpr::Translate {
            inner: Box::new(measure_from_value(field(inner, "inner")?)?),
            y: position_from_value(field(inner, "y")?)?,
        },
        "shift" => MeasureExpr::Shift {
            inner: Box::new(measure_from_value(field(inner, "inner")?)?),
            u: vec_of_value(field(inner, "u")?)?,
        },
        "union" | "intersection" => {
            let items = inner
                .as_array()
                .ok_or_else(|| malformed(format!("`{key}` takes an array")))?
                .iter()
                .map(measure_from_value)
                .collect::<Result<Vec<_>>>()?;
            if key == "union" {
                MeasureExpr::Union(items)
            } else {
                MeasureExpr::Intersection(items)
            }
        }
        "convex_combo" => MeasureExpr::ConvexCombo {
            mu: q_of(field(inner, "mu")?)?,
            left: Box::new(measure_from_value(field(inner, "left")?)?),
            right: Box::new(measure_from_value(field(inner, "right")?)?),
        },
        other => return Err(malformed(format!("unknown measure node `{other}`"))),
    })
}

pub fn measure_value(r: &MeasureExpr) -> Value {
    match r {
        MeasureExpr::WorstCase => json!("wc"),
        MeasureExpr::VaR { kind, level } => json!({ "var": {
            "kind": match kind { VarKind::Weak => "weak", VarKind::Strong => "strong" },
            "level": q_value(level),
        }}),
        MeasureExpr::OfAcceptance(a) => json!({ "of_acceptance": acc_value(a) }),
        MeasureExpr::Translate { inner, y } => json!({ "translate": {
            "inner": measure_value(inner),
            "y": position_value(y),
        }}),
        MeasureExpr::Shift { inner, u } => json!({ "shift": {
            "inner": measure_value(inner),
            "u": vec_value(u),
        }}),
        MeasureExpr::Union(items) => json!({ "union": items.iter().map(measure_value).collect::<Vec<_>>() }),
        MeasureExpr::Intersection(items) => {
            json!({ "intersection": items.iter().map(measure_value).collect::<Vec<_>>() })
        }
        MeasureExpr::ConvexCombo { mu, left, right } => json!({ "convex_combo": {
            "mu": q_value(mu),
            "left": measure_value(left),
            "right": measure_value(right),
        }}),
    }
}

pub fn acc_from_value(v: &Value) -> Result<AccExpr> {
    let (key, inner) = single_key(v)?;
    Ok(match key {
        "dominance_at" => AccExpr::DominanceAt(position_from_value(inner)?),
        "segment" => AccExpr::Segment(position_from_value(inner)?),
        "ray" => AccExpr::Ray(position_from_value(inner)?),
        "segment_hull" => AccExpr::SegmentHull {
            y: position_from_value(field(inner, "y")?)?,
            z: position_from_value(field(inner, "z")?)?,
        },
        "of_measure" => AccExpr::of_measure(measure_from_value(inner)?),
        "union" | "intersection" => {
            let items = inner
                .as_array()
                .ok_or_else(|| malformed(format!("`{key}` takes an array")))?
                .iter()
                .map(acc_from_value)
                .collect::<Result<Vec<_>>>()?;
            if key == "union" {
                AccExpr::Union(items)
            } else {
                AccExpr::Intersection(items)
            }
        }
        other => return Err(malformed(format!("unknown acceptance node `{other}`"))),
    })
}

pub fn acc_value(a: &AccExpr) -> Value {
    match a {
        AccExpr::DominanceAt(z) => json!({ "dominance_at": position_value(z) }),
        AccExpr::Segment(z) => json!({ "segment": position_value(z) }),
        AccExpr::Ray(z) => json!({ "ray": position_value(z) }),
        AccExpr::SegmentHull { y, z } => json!({ "segment_hull": {
            "y": position_value(y),
            "z": position_value(z),
        }}),
        AccExpr::OfMeasure(r) => json!({ "of_measure": measure_value(r) }),
        AccExpr::Union(items) => json!({ "union": items.iter().map(acc_value).collect::<Vec<_>>() }),
        AccExpr::Intersection(items) => {
            json!({ "intersection": items.iter().map(acc_value).collect::<Vec<_>>() })
        }
    }
}

pub fn error_value(e: &Error) -> Value {
    json!({ "error": { "kind": e.kind(), "message": e.to_string() } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::measures::eval_measure;
    use crate::rational::frac;

    #[test]
    fn market_document_round_trip() {
        let doc = r#"{ "d": 2, "probs": ["1/2","1/2"], "cone": { "halfspaces": [[1,1],[0,1]] }, "subspace": { "coords": [0] } }"#;
        let m = market_from_str(doc).unwrap();
        assert_eq!(m.cone(), fixtures::mkt_a().cone());
        let again = market_from_value(&market_value(&m)).unwrap();
        assert_eq!(again.subspace(), m.subspace());
        assert_eq!(again.space(), m.space());
    }

    #[test]
    fn market_errors() {
        let bad_probs = r#"{ "d": 2, "probs": ["1/2","1/3"], "cone": { "halfspaces": [[1,0],[0,1]] }, "subspace": { "coords": [0] } }"#;
        assert!(matches!(market_from_str(bad_probs), Err(Error::ProbabilitySum { .. })));
        let no_interior = r#"{ "d": 2, "probs": [1], "cone": { "halfspaces": [[1,0],[0,1]] }, "subspace": { "basis": [[1,-1]] } }"#;
        assert_eq!(market_from_str(no_interior).unwrap_err(), Error::EmptyInterior);
        let orthant = r#"{ "d": 2, "probs": [1], "cone": { "halfspaces": [[1,-1]] }, "subspace": { "coords": [0] } }"#;
        assert_eq!(market_from_str(orthant).unwrap_err(), Error::OrthantNotContained);
        assert!(matches!(market_from_str("{"), Err(Error::MalformedDocument(_))));
        let bidask = r#"{ "d": 2, "probs": [1], "cone": { "bidask": [[1,2],[2,1]] }, "subspace": { "coords": [0,1] } }"#;
        assert_eq!(market_from_str(bidask).unwrap().cone().generators().len(), 2);
    }

    #[test]
    fn expression_round_trip() {
        let r = MeasureExpr::ConvexCombo {
            mu: frac(1, 3),
            left: Box::new(MeasureExpr::var_weak(frac(1, 4))),
            right: Box::new(
                MeasureExpr::of_acceptance(AccExpr::Union(vec![
                    AccExpr::Segment(fixtures::x1()),
                    AccExpr::SegmentHull {
                        y: fixtures::x2(),
                        z: fixtures::x1(),
                    },
                ]))
                .translate(fixtures::x2())
                .shift(rational::vec_of(&[1, 0])),
            ),
        };
        assert_eq!(measure_from_value(&measure_value(&r)).unwrap(), r);
    }

    #[test]
    fn upper_set_documents_round_trip() {
        let b = fixtures::mkt_b();
        let v = eval_measure(&b, &MeasureExpr::var_strong(frac(1, 4)), &fixtures::var_x()).unwrap();
        let rec = b.cone_m().polyhedron().clone();
        let back = upper_set_from_value(&upper_set_value(&v), rec.clone()).unwrap();
        assert!(back.set_eq(&v).unwrap());
        let csv = csv_vertices(&v).unwrap();
        assert!(csv.starts_with("piece,kind,u1,u2\n"));
        let again = upper_set_from_csv(&csv, rec).unwrap();
        assert_eq!(again.pieces(), v.pieces());
    }
}
