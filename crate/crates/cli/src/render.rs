//! Plain-text rendering of engine documents.

use setrisk::geometry::{Halfspace, UpperSet};
use setrisk::laws::LawReport;
use setrisk::rational;
use setrisk::Q;

fn is_one(q: &Q) -> bool {
    *q == Q::from_integer(1.into())
}

fn halfspace(h: &Halfspace) -> String {
    let zero = Q::from_integer(0.into());
    let mut terms = Vec::new();
    for (j, a) in h.normal.iter().enumerate() {
        if *a == zero {
            continue;
        }
        let var = format!("u{}", j + 1);
        let negative = *a < zero;
        let mag = if negative { -a.clone() } else { a.clone() };
        let body = if is_one(&mag) {
            var
        } else {
            format!("{} {var}", rational::format(&mag))
        };
        terms.push((negative, body));
    }
    let mut lhs = String::new();
    for (i, (negative, body)) in terms.iter().enumerate() {
        match (i, negative) {
            (0, true) => lhs.push_str(&format!("-{body}")),
            (0, false) => lhs.push_str(body),
            (_, true) => lhs.push_str(&format!(" - {body}")),
            (_, false) => lhs.push_str(&format!(" + {body}")),
        }
    }
    if lhs.is_empty() {
        lhs.push('0');
    }
    let op = if h.strict { ">" } else { ">=" };
    format!("{lhs} {op} {}", rational::format(&h.offset))
}

fn point(v: &[Q]) -> String {
    format!("({})", v.iter().map(rational::format).collect::<Vec<_>>().join(", "))
}

pub fn upper_set(set: &UpperSet) -> String {
    if set.is_empty() {
        return "empty set\n".into();
    }
    let mut out = String::new();
    for (i, p) in set.pieces().iter().enumerate() {
        let rows: Vec<String> = p.halfspaces().iter().map(halfspace).collect();
        let rows = if rows.is_empty() { "all of M".to_string() } else { rows.join(", ") };
        out.push_str(&format!("piece {i}: {rows}\n"));
        let v = p.vrep().cloned().or_else(|| p.compute_vrep().ok()).unwrap_or_default();
        let vertices: Vec<String> = v.vertices.iter().map(|x| point(x)).collect();
        out.push_str(&format!("  vertices: {}\n", vertices.join(" ")));
        if !v.rays.is_empty() {
            let rays: Vec<String> = v.rays.iter().map(|x| point(x)).collect();
            out.push_str(&format!("  rays: {}\n", rays.join(" ")));
        }
        if !v.lines.is_empty() {
            let lines: Vec<String> = v.lines.iter().map(|x| point(x)).collect();
            out.push_str(&format!("  lines: {}\n", lines.join(" ")));
        }
    }
    out
}

pub fn report(r: &LawReport) -> String {
    let mut out = format!(
        "{}: {} ({} samples, budget {}, seed {})\n",
        r.law, r.verdict, r.samples, r.budget, r.seed
    );
    if let Some(w) = &r.witness {
        out.push_str(&format!("  witness #{} [{}]: {}\n", w.index, w.check, w.relation));
        let t = &w.trial;
        if let Some(x) = &t.x {
            out.push_str(&format!("    x = {}\n", rows(x.rows())));
        }
        if let Some(y) = &t.y {
            out.push_str(&format!("    y = {}\n", rows(y.rows())));
        }
        if let Some(k) = &t.k {
            out.push_str(&format!("    k = {}\n", rows(k.rows())));
        }
        if let Some(u) = &t.u {
            out.push_str(&format!("    u = {}\n", point(u)));
        }
        if let Some(v) = &t.v {
            out.push_str(&format!("    v = {}\n", point(v)));
        }
        if let Some(q) = &t.t {
            out.push_str(&format!("    t = {}\n", rational::format(q)));
        }
        if let Some(q) = &t.s {
            out.push_str(&format!("    s = {}\n", rational::format(q)));
        }
    }
    if let Some(n) = &r.note {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}

pub fn rows(rows: &[Vec<Q>]) -> String {
    format!("[{}]", rows.iter().map(|r| point(r)).collect::<Vec<_>>().join(", "))
}
