//! Submission CSV parsing: `id,prediction,outcome` rows with exact-rational
//! predictions and 0/1 outcomes; every failure names its line.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num::rational::BigRational;

use ranksum::kernels::OutcomeVector;
use ranksum::rational::parse_rational;

pub struct Submission {
    pub predictions: Vec<BigRational>,
    pub outcomes: OutcomeVector,
}

pub fn read_submission(path: &Path) -> Result<Submission> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;

    let headers = reader.headers().context("missing CSV header")?.clone();
    let expected = ["id", "prediction", "outcome"];
    let found: Vec<&str> = headers.iter().collect();
    if found != expected {
        bail!(
            "line 1: expected header \"id,prediction,outcome\", found \"{}\"",
            found.join(",")
        );
    }

    let mut seen_ids = std::collections::HashSet::new();
    let mut predictions = Vec::new();
    let mut bits = Vec::new();
    for record in reader.records() {
        let record = record.context("malformed CSV record")?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            bail!("line {line}: expected 3 fields, found {}", record.len());
        }
        let id = record.get(0).unwrap_or_default();
        if id.is_empty() {
            bail!("line {line}: empty id");
        }
        if !seen_ids.insert(id.to_string()) {
            bail!("line {line}: duplicate id {id:?}");
        }
        let prediction = parse_rational(record.get(1).unwrap_or_default())
            .with_context(|| format!("line {line}: bad prediction"))?;
        let outcome = match record.get(2).unwrap_or_default() {
            "0" => false,
            "1" => true,
            other => bail!("line {line}: outcome {other:?} is not 0 or 1"),
        };
        predictions.push(prediction);
        bits.push(outcome);
    }
    if bits.is_empty() {
        bail!("submission has no data rows");
    }
    Ok(Submission {
        predictions,
        outcomes: OutcomeVector::new(bits).expect("non-empty rows"),
    })
}
