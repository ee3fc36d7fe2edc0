use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Mode};
use super::run::{Summary, TrialRecord};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 13] = [
    "trial", "seed", "mode", "n", "m", "k", "weight", "predicted", "ratio", "depth", "diameter",
    "heavy_edges", "elapsed_s",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format `{s}`, expected csv or json"))),
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

pub fn to_csv(records: &[TrialRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |source| Error::Csv { path: "<memory>".into(), source };
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.mode.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.k.to_string(),
            real(r.weight),
            opt_real(r.predicted),
            opt_real(r.ratio()),
            r.depth.to_string(),
            r.diameter.to_string(),
            r.heavy_edges.to_string(),
            opt_real(r.elapsed_s),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

/// Parses CSV produced by [`to_csv`]. Extras are not part of the CSV.
pub fn from_csv(text: &str) -> Result<Vec<TrialRecord>> {
    let csv_err = |source| Error::Csv { path: "<memory>".into(), source };
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(csv_err)?;
        let get = |i: usize| row.get(i).unwrap_or("");
        fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse(format!("bad CSV cell `{s}`")))
        }
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.push(TrialRecord {
            trial: num(get(0))?,
            seed: num(get(1))?,
            mode: get(2).parse::<Mode>()?,
            n: num(get(3))?,
            m: num(get(4))?,
            k: num(get(5))?,
            weight: num(get(6))?,
            predicted: opt(get(7))?,
            depth: num(get(9))?,
            diameter: num(get(10))?,
            heavy_edges: num(get(11))?,
            elapsed_s: opt(get(12))?,
            extras: Default::default(),
        });
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
pub struct JsonReport {
    pub config: ExperimentConfig,
    pub summary: Summary,
    pub records: Vec<JsonRecord>,
}

/// A record with its ratio spelled out.
#[derive(Serialize, Deserialize)]
pub struct JsonRecord {
    #[serde(flatten)]
    pub record: TrialRecord,
    pub ratio: Option<f64>,
}

pub fn to_json(cfg: &ExperimentConfig, records: &[TrialRecord], summary: &Summary) -> Result<String> {
    let report = JsonReport {
        config: cfg.clone(),
        summary: summary.clone(),
        records: records
            .iter()
            .map(|r| JsonRecord { record: r.clone(), ratio: r.ratio() })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&report)?)
}

/// Writes records to `path` in the chosen format.
pub fn emit(
    cfg: &ExperimentConfig,
    records: &[TrialRecord],
    summary: &Summary,
    format: Format,
    path: &Path,
) -> Result<()> {
    let text = match format {
        Format::Csv => to_csv(records)?,
        Format::Json => to_json(cfg, records, summary)?,
    };
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_experiment, summarize};

    fn sample() -> (ExperimentConfig, Vec<TrialRecord>) {
        let mut cfg = ExperimentConfig::new(Mode::GreedyDepth, 300, 2);
        cfg.trials = 3;
        cfg.base_seed = 77;
        let recs = run_experiment(&cfg).unwrap();
        (cfg, recs)
    }

    #[test]
    fn csv_round_trip() {
        let (_, recs) = sample();
        let text = to_csv(&recs).unwrap();
        assert!(text.starts_with("trial,seed,mode,n,m,k,weight,predicted,ratio,depth,diameter,heavy_edges,elapsed_s\n"));
        let back = from_csv(&text).unwrap();
        for (a, b) in recs.iter().zip(&back) {
            let mut a = a.clone();
            a.extras.clear();
            assert_eq!(&a, b);
        }
    }

    #[test]
    fn blank_cells_for_missing_values() {
        let mut cfg = ExperimentConfig::new(Mode::ExactSmall, 5, 2);
        cfg.trials = 1;
        let recs = run_experiment(&cfg).unwrap();
        let text = to_csv(&recs).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row.split(',').count(), 13);
        assert!(row.contains(",,,"));
    }

    #[test]
    fn ratio_column_is_exact() {
        let (_, recs) = sample();
        let back = from_csv(&to_csv(&recs).unwrap()).unwrap();
        let text = to_csv(&recs).unwrap();
        for (line, r) in text.lines().skip(1).zip(&back) {
            let cell: f64 = line.split(',').nth(8).unwrap().parse().unwrap();
            assert_eq!(cell, r.weight / r.predicted.unwrap());
        }
    }

    #[test]
    fn json_echo_rebuilds_config() {
        let (cfg, recs) = sample();
        let s = summarize(&recs).unwrap();
        let text = to_json(&cfg, &recs, &s).unwrap();
        let report: JsonReport = serde_json::from_str(&text).unwrap();
        assert_eq!(report.config, cfg);
        assert_eq!(run_experiment(&report.config).unwrap(), recs);
    }

    #[test]
    fn emit_reports_path() {
        let (cfg, recs) = sample();
        let s = summarize(&recs).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("out.csv");
        emit(&cfg, &recs, &s, Format::Csv, &good).unwrap();
        let bad = dir.path().join("missing").join("out.csv");
        let err = emit(&cfg, &recs, &s, Format::Json, &bad).unwrap_err();
        assert!(err.to_string().contains("missing"));
    }
}
