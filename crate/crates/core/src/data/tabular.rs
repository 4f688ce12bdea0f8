//! CSV ingestion for Adult-style tables.
//!
//! A schema file maps column names to roles, one per line:
//!
//! ```text
//! # comments and blank lines are ignored
//! age = feature
//! workclass = feature
//! income = label:>50K
//! sex = sensitive:Male
//! fnlwgt = ignore
//! ```
//!
//! `label` and `sensitive` take an optional positive token; without one the
//! column must hold `0`/`1`. Feature columns that parse as numbers everywhere
//! are z-scored with training-split statistics, anything else is one-hot.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::data::{Dataset, Splits};
use crate::mathcore::{Matrix, Rng};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnRole {
    Feature,
    Label { positive: Option<String> },
    Sensitive { positive: Option<String> },
    Ignore,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularSchema {
    pub columns: Vec<(String, ColumnRole)>,
}

impl TabularSchema {
    pub fn parse(text: &str) -> Result<Self> {
        let mut columns = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, role) = line
                .split_once('=')
                .ok_or_else(|| Error::Schema(format!("line {}: expected `column = role`", i + 1)))?;
            let (kind, positive) = match role.trim().split_once(':') {
                Some((k, p)) => (k.trim(), Some(p.trim().to_string())),
                None => (role.trim(), None),
            };
            let role = match (kind, positive) {
                ("feature", None) => ColumnRole::Feature,
                ("ignore", None) => ColumnRole::Ignore,
                ("label", positive) => ColumnRole::Label { positive },
                ("sensitive", positive) => ColumnRole::Sensitive { positive },
                (other, _) => return Err(Error::Schema(format!("line {}: unknown role `{other}`", i + 1))),
            };
            columns.push((name.trim().to_string(), role));
        }
        let count = |f: fn(&ColumnRole) -> bool| columns.iter().filter(|(_, r)| f(r)).count();
        if count(|r| matches!(r, ColumnRole::Label { .. })) != 1 {
            return Err(Error::Schema("schema needs exactly one label column".into()));
        }
        if count(|r| matches!(r, ColumnRole::Sensitive { .. })) > 1 {
            return Err(Error::Schema("schema allows at most one sensitive column".into()));
        }
        if count(|r| matches!(r, ColumnRole::Feature)) == 0 {
            return Err(Error::Schema("schema declares no feature columns".into()));
        }
        Ok(TabularSchema { columns })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

fn binary(value: &str, positive: &Option<String>, column: &str, line: u64) -> Result<f64> {
    match positive {
        Some(p) => Ok(if value == p { 1.0 } else { 0.0 }),
        None => match value {
            "0" => Ok(0.0),
            "1" => Ok(1.0),
            _ => Err(Error::Schema(format!("line {line}: column `{column}` value `{value}` is not 0/1"))),
        },
    }
}

enum Encoder {
    Numeric { column: usize },
    OneHot { column: usize, levels: Vec<String> },
}

/// Load, encode, and split (70/10/20 by a shuffle seeded with `seed`).
pub fn load_tabular_csv(path: &Path, schema: &TabularSchema, seed: u64) -> Result<Splits> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    let header = reader.headers().map_err(|e| Error::Schema(e.to_string()))?.clone();
    let locate = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("column `{name}` missing from {}", path.display())))
    };
    let mut features = Vec::new();
    let mut label = None;
    let mut sensitive = None;
    for (name, role) in &schema.columns {
        let idx = locate(name)?;
        match role {
            ColumnRole::Feature => features.push((name.as_str(), idx)),
            ColumnRole::Label { positive } => label = Some((name.as_str(), idx, positive)),
            ColumnRole::Sensitive { positive } => sensitive = Some((name.as_str(), idx, positive)),
            ColumnRole::Ignore => {}
        }
    }
    let (label_name, label_idx, label_pos) = label.expect("schema validated");

    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut groups = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::Schema(format!("line {line}: {e}"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        labels.push(binary(&record[label_idx], label_pos, label_name, line)?);
        if let Some((name, idx, pos)) = sensitive {
            groups.push(binary(&record[idx], pos, name, line)?);
        }
        rows.push(features.iter().map(|&(_, i)| record[i].to_string()).collect::<Vec<_>>());
    }
    if rows.is_empty() {
        return Err(Error::Schema(format!("{} has no data rows", path.display())));
    }

    let encoders: Vec<Encoder> = (0..features.len())
        .map(|c| {
            if rows.iter().all(|r| r[c].parse::<f64>().is_ok_and(f64::is_finite)) {
                Encoder::Numeric { column: c }
            } else {
                let levels: BTreeSet<&str> = rows.iter().map(|r| r[c].as_str()).collect();
                Encoder::OneHot { column: c, levels: levels.into_iter().map(str::to_string).collect() }
            }
        })
        .collect();
    let width: usize = encoders
        .iter()
        .map(|e| match e {
            Encoder::Numeric { .. } => 1,
            Encoder::OneHot { levels, .. } => levels.len(),
        })
        .sum();

    let mut x = Matrix::zeros(rows.len(), width);
    for (i, row) in rows.iter().enumerate() {
        let out = x.row_mut(i);
        let mut at = 0;
        for e in &encoders {
            match e {
                Encoder::Numeric { column } => {
                    out[at] = row[*column].parse().expect("checked numeric");
                    at += 1;
                }
                Encoder::OneHot { column, levels } => {
                    let k = levels.binary_search(&row[*column]).expect("level collected");
                    out[at + k] = 1.0;
                    at += levels.len();
                }
            }
        }
    }
    let data = Dataset::new(x, [labels.clone(), labels], (!groups.is_empty()).then_some(groups))?;
    let mut splits = Splits::partition(&data, Splits::DEFAULT_FRACTIONS, &mut Rng::new(seed).fork("tabular"))?;

    let mut at = 0;
    for e in &encoders {
        match e {
            Encoder::Numeric { .. } => {
                let col = splits.train.inputs.column(at);
                let mean = col.iter().sum::<f64>() / col.len() as f64;
                let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / col.len() as f64;
                let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
                for part in [&mut splits.train, &mut splits.val, &mut splits.test] {
                    for i in 0..part.len() {
                        let v = part.inputs.get(i, at);
                        part.inputs.set(i, at, (v - mean) / sd);
                    }
                }
                at += 1;
            }
            Encoder::OneHot { levels, .. } => at += levels.len(),
        }
    }
    Ok(splits)
}
