//! Calibration datasets. The header selects the mode: raw counts
//! `f0_enter,f2_exit,f2_s,f1_s,f1_b` or normalized `n0_enter,n2_exit,n2_s,x1s`.
//! An optional trailing `source` column tags each row.

use std::path::Path;

use weave_core::{FlowConfig, Observation, RawFlows};

use crate::error::CliError;

const RAW: [&str; 5] = ["f0_enter", "f2_exit", "f2_s", "f1_s", "f1_b"];
const NORMALIZED: [&str; 4] = ["n0_enter", "n2_exit", "n2_s", "x1s"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Raw,
    Normalized,
}

pub fn load(path: &Path) -> Result<(Mode, Vec<Observation>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<(Mode, Vec<Observation>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::input(format!("dataset header: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    let columns: Vec<&str> = header.iter().map(String::as_str).collect();
    let (mode, width) = match columns.as_slice() {
        [a, b, c, d, e, rest @ ..] if [*a, *b, *c, *d, *e] == RAW && is_source(rest) => (Mode::Raw, 5),
        [a, b, c, d, rest @ ..] if [*a, *b, *c, *d] == NORMALIZED && is_source(rest) => {
            (Mode::Normalized, 4)
        }
        _ => {
            return Err(CliError::input(format!(
                "dataset header must be `{}` or `{}`, got `{}`",
                RAW.join(","),
                NORMALIZED.join(","),
                columns.join(",")
            )))
        }
    };
    let has_source = columns.len() > width;

    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::input(format!("dataset line {line}: {e}")))?;
        let values = (0..width)
            .map(|j| {
                record[j]
                    .parse::<f64>()
                    .map_err(|e| CliError::input(format!("dataset line {line}, column {}: {e}", columns[j])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let at = |e: weave_core::Error| CliError::input(format!("dataset line {line}: {e}"));
        let obs = match mode {
            Mode::Raw => Observation::from_raw(&RawFlows {
                f0_enter: values[0],
                f2_exit: values[1],
                f2_s: values[2],
                f1_s: values[3],
                f1_b: values[4],
            }),
            Mode::Normalized => FlowConfig::new(values[0], values[1], values[2])
                .and_then(|flows| Observation::new(flows, values[3])),
        }
        .map_err(at)?;
        out.push(match has_source {
            true if !record[width].is_empty() => obs.with_source(&record[width]),
            _ => obs,
        });
    }
    if out.is_empty() {
        return Err(CliError::input("dataset has no observations"));
    }
    Ok((mode, out))
}

fn is_source(rest: &[&str]) -> bool {
    matches!(rest, [] | ["source"])
}
