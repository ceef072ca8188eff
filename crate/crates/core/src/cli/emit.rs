//! Report serialization.

use super::config::Format;
use super::run::RunReport;

pub const CSV_HEADER: [&str; 5] = ["experiment", "metric", "value", "tolerance", "pass"];

/// Renders a report. JSON round-trips through [`parse_json_report`]; CSV
/// has one row per metric, with empty cells for informational values.
pub fn emit(report: &RunReport, format: Format) -> crate::Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| crate::Error::Unsupported(e.to_string())),
        Format::Csv => emit_csv(report),
    }
}

pub fn parse_json_report(text: &str) -> serde_json::Result<RunReport> {
    serde_json::from_str(text)
}

fn emit_csv(report: &RunReport) -> crate::Result<String> {
    let to_err = |e: csv::Error| crate::Error::Unsupported(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(to_err)?;
    for exp in &report.experiments {
        for m in &exp.metrics {
            w.write_record([
                exp.experiment.clone(),
                m.name.clone(),
                format!("{:.6}", m.value),
                m.tolerance.map(|t| format!("{t:e}")).unwrap_or_default(),
                m.pass.map(|p| p.to_string()).unwrap_or_default(),
            ])
            .map_err(to_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Unsupported(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Unsupported(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::run::{ExperimentReport, Metric};

    fn sample() -> RunReport {
        RunReport {
            seed: 7,
            overall_pass: true,
            experiments: vec![ExperimentReport {
                experiment: "charge".into(),
                pass: true,
                wall_time_ms: 1.25,
                error: None,
                metrics: vec![
                    Metric { name: "winding".into(), value: 1.0, tolerance: Some(1e-6), pass: Some(true) },
                    Metric { name: "n_dirac".into(), value: 2.0, tolerance: None, pass: None },
                ],
                details: serde_json::json!({"a": [0.1, 1e-300]}),
            }],
        }
    }

    #[test]
    fn csv_rows() {
        let text = emit(&sample(), Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "experiment,metric,value,tolerance,pass");
        assert_eq!(lines[1], "charge,winding,1.000000,1e-6,true");
        assert_eq!(lines[2], "charge,n_dirac,2.000000,,");
    }

    #[test]
    fn empty_report_is_header_only() {
        let empty = RunReport { seed: 0, overall_pass: true, experiments: vec![] };
        assert_eq!(emit(&empty, Format::Csv).unwrap(), "experiment,metric,value,tolerance,pass\n");
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let text = emit(&r, Format::Json).unwrap();
        assert_eq!(parse_json_report(&text).unwrap(), r);
        let seed = text.find("\"seed\"").unwrap();
        let pass = text.find("\"overall_pass\"").unwrap();
        let exps = text.find("\"experiments\"").unwrap();
        assert!(seed < pass && pass < exps);
    }
}
