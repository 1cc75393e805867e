//! Law-check report: one line per property and carrier.

use std::fmt::Write;

use assocarray::rewrite::{check_property_with, Carrier, PROPERTY_NAMES};
use assocarray::Semiring;

use crate::{usage, CliError};

pub const HEADER: &str = "property\tsemiring\ttrials\tfailures\tnote";

/// Which carriers to run.
pub fn parse_carriers(text: &str) -> Result<Vec<Carrier>, CliError> {
    match text {
        "int" => Ok(vec![Carrier::Int]),
        "real" => Ok(vec![Carrier::Real]),
        "both" => Ok(vec![Carrier::Int, Carrier::Real]),
        other => Err(usage(format!("unknown carrier `{other}` (expected int, real or both)"))),
    }
}

/// Names from a comma list, or every property when `list` is `None` or `all`.
pub fn parse_properties(list: Option<&str>) -> Result<Vec<String>, CliError> {
    match list {
        None | Some("all") => Ok(PROPERTY_NAMES.iter().map(|s| s.to_string()).collect()),
        Some(list) => list
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|p| {
                if PROPERTY_NAMES.contains(&p) {
                    Ok(p.to_owned())
                } else {
                    Err(usage(format!("unknown property `{p}`; known: {}", PROPERTY_NAMES.join(", "))))
                }
            })
            .collect(),
    }
}

/// Run the checks and render the report. The flag is true when every
/// trial passed.
pub fn run_check(
    s: &Semiring,
    properties: &[String],
    carriers: &[Carrier],
    trials: usize,
    seed: u64,
) -> Result<(String, bool), CliError> {
    let mut out = format!("{HEADER}\n");
    let mut ok = true;
    for name in properties {
        for &carrier in carriers {
            let report = check_property_with(name, s, trials, seed, carrier).map_err(usage)?;
            let tag = match carrier {
                Carrier::Int => "",
                Carrier::Real => "/real",
            };
            let note = report.note.as_deref().unwrap_or("");
            writeln!(out, "{}{tag}\t{}\t{}\t{}\t{note}", report.name, report.semiring, report.trials, report.failures.len())
                .unwrap();
            for f in &report.failures {
                let dev = f.max_deviation.map_or(String::new(), |d| format!(" deviation {d:e}"));
                writeln!(out, "#\tseed {}{dev}\n#\t  lhs {}\n#\t  rhs {}", f.seed, f.lhs, f.rhs).unwrap();
            }
            ok &= report.passed();
        }
    }
    Ok((out, ok))
}
