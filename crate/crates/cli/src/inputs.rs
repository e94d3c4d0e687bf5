//! Resolution of command-line operands: fixture names, inline JSON or paths.

use std::fs;

use serde_json::Value;
use setrisk::fixtures;
use setrisk::io;
use setrisk::measures::{AccExpr, MeasureExpr};
use setrisk::rational;
use setrisk::scenario::{Market, RandomVector};
use setrisk::{Error, Q};

fn input_error(msg: String) -> Error {
    Error::MalformedDocument(msg)
}

/// Inline JSON when the operand looks like JSON, otherwise the file it names.
fn document(arg: &str) -> Result<Value, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        return io::parse_json(arg);
    }
    let text = fs::read_to_string(arg).map_err(|e| input_error(format!("cannot read `{arg}`: {e}")))?;
    io::parse_json(&text)
}

pub fn market(arg: &str) -> Result<Market, Error> {
    match fixtures::market(arg) {
        Some(m) => Ok(m),
        None => io::market_from_value(&document(arg)?),
    }
}

pub fn position(arg: &str, market: &Market) -> Result<RandomVector, Error> {
    let x = match fixtures::position(arg) {
        Some(x) => x,
        None => io::position_from_value(&document(arg)?)?,
    };
    market.check_position(&x)?;
    Ok(x)
}

/// `wc`, `var-strong:<level>`, `var-weak:<level>`, inline JSON or a path.
pub fn measure(arg: &str) -> Result<MeasureExpr, Error> {
    if arg == "wc" {
        return Ok(MeasureExpr::WorstCase);
    }
    if let Some(level) = arg.strip_prefix("var-strong:") {
        return Ok(MeasureExpr::var_strong(rational::parse(level)?));
    }
    if let Some(level) = arg.strip_prefix("var-weak:") {
        return Ok(MeasureExpr::var_weak(rational::parse(level)?));
    }
    io::measure_from_value(&document(arg)?)
}

pub fn acceptance(arg: &str) -> Result<AccExpr, Error> {
    io::acc_from_value(&document(arg)?)
}

/// Comma-separated rationals, or a JSON array.
pub fn vector(arg: &str) -> Result<Vec<Q>, Error> {
    if arg.trim_start().starts_with('[') {
        return io::vec_of_value(&io::parse_json(arg)?);
    }
    arg.split(',').map(|s| rational::parse(s.trim())).collect()
}
