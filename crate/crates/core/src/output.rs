//! Run artifacts: `summary.json`, the CSV tables and `manifest.json`.
//!
//! Everything except the manifest is a pure function of the experiment
//! config, so reruns with the same seed produce identical bytes. Timing and
//! worker count live only in the manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scenarios::{Experiment, ExperimentOutput, PollCurveSummary, RunOutput, TimingSearchResult};

pub const SUMMARY_FILE: &str = "summary.json";
pub const METRICS_FILE: &str = "metrics.csv";
pub const PATHS_FILE: &str = "paths_sample.csv";
pub const POLL_FILE: &str = "poll_curve.csv";
pub const TIMING_FILE: &str = "timing_objective.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Facts about the invocation that are recorded in the manifest only.
#[derive(Debug, Clone)]
pub struct RunMetadata {
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub workers: usize,
}

/// Current UTC time, for [`RunMetadata`].
pub fn now() -> DateTime<Utc> {
    Utc::now()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries always serialize");
    s.push('\n');
    s
}

/// `summary.json` contents.
pub fn summary_json(out: &ExperimentOutput) -> String {
    match out {
        ExperimentOutput::Scenarios { name, runs } => {
            #[derive(Serialize)]
            struct Doc<'a> {
                name: &'a str,
                runs: Vec<&'a crate::scenarios::RunSummary>,
            }
            to_json(&Doc {
                name,
                runs: runs.iter().map(|r| &r.summary).collect(),
            })
        }
        ExperimentOutput::PollCurve(p) => to_json(p),
        ExperimentOutput::TimingSearch(t) => to_json(t),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Time-gridded quantiles of `pi(truth)`, escape fraction, mean entropy and
/// median separation, one block per run.
pub fn metrics_csv(runs: &[RunOutput]) -> String {
    let mut s = String::from("id,t,q05,q25,q50,q75,q95,escape,entropy,delta_median\n");
    for run in runs {
        let c = &run.summary.curves;
        for (j, t) in c.t.iter().enumerate() {
            let q = c.truth_quantiles[j];
            let delta = c.separation_median.as_ref().map(|d| d[j]);
            writeln!(
                s,
                "{},{t},{},{},{},{},{},{},{},{}",
                run.summary.id,
                q.q05,
                q.q25,
                q.q50,
                q.q75,
                q.q95,
                c.escape_fraction[j],
                c.mean_entropy[j],
                opt(delta)
            )
            .unwrap();
        }
    }
    s
}

/// Leading sample paths: observation, conditional mean, the belief(s) and
/// the separation when a second decision maker is present.
pub fn paths_sample_csv(runs: &[RunOutput]) -> String {
    let width = runs
        .iter()
        .flat_map(|r| r.samples.iter())
        .flat_map(|p| p.points.iter())
        .map(|pt| pt.probs.len())
        .max()
        .unwrap_or(0);
    let mut s = String::from("id,path,t,xi,mean");
    for i in 1..=width {
        write!(s, ",p{i}").unwrap();
    }
    for i in 1..=width {
        write!(s, ",q{i}").unwrap();
    }
    s.push_str(",delta\n");
    for run in runs {
        for sample in &run.samples {
            for pt in &sample.points {
                write!(s, "{},{},{},{},{}", run.summary.id, sample.path, pt.t, pt.xi, pt.mean).unwrap();
                for i in 0..width {
                    s.push(',');
                    if let Some(p) = pt.probs.get(i) {
                        write!(s, "{p}").unwrap();
                    }
                }
                for i in 0..width {
                    s.push(',');
                    if let Some(q) = pt.second.as_ref().and_then(|(q, _)| q.get(i)) {
                        write!(s, "{q}").unwrap();
                    }
                }
                writeln!(s, ",{}", opt(pt.second.as_ref().map(|(_, d)| *d))).unwrap();
            }
        }
    }
    s
}

pub fn poll_curve_csv(p: &PollCurveSummary) -> String {
    let mut s = String::from("s,sigma,estimate,stderr\n");
    for r in &p.rows {
        writeln!(s, "{},{},{},{}", r.support, r.sigma, r.estimate, r.stderr).unwrap();
    }
    s
}

pub fn timing_csv(t: &TimingSearchResult) -> String {
    let mut s = String::from("onset,wrong_fraction,stderr\n");
    for c in &t.curve {
        writeln!(s, "{},{},{}", c.onset, c.wrong_fraction, c.stderr).unwrap();
    }
    s
}

/// Every deterministic artifact of `out` as `(file name, contents)`.
pub fn artifacts(out: &ExperimentOutput) -> Vec<(&'static str, String)> {
    let mut files = vec![(SUMMARY_FILE, summary_json(out))];
    match out {
        ExperimentOutput::Scenarios { runs, .. } => {
            files.push((METRICS_FILE, metrics_csv(runs)));
            files.push((PATHS_FILE, paths_sample_csv(runs)));
        }
        ExperimentOutput::PollCurve(p) => files.push((POLL_FILE, poll_curve_csv(p))),
        ExperimentOutput::TimingSearch(t) => files.push((TIMING_FILE, timing_csv(t))),
    }
    files
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, contents).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path)(e)
    })
}

/// Manifest document: config echo, version, seed, timing and digests.
pub fn manifest_json(exp: &Experiment, meta: &RunMetadata, files: &[(&str, String)]) -> String {
    let digests: serde_json::Map<String, serde_json::Value> = files
        .iter()
        .map(|(name, body)| (name.to_string(), json!(sha256_hex(body.as_bytes()))))
        .collect();
    let wall = (meta.finished - meta.started).num_microseconds().unwrap_or(0) as f64 / 1e6;
    to_json(&json!({
        "name": exp.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": exp.seed(),
        "workers": meta.workers,
        "started_at": meta.started.to_rfc3339_opts(SecondsFormat::Millis, true),
        "finished_at": meta.finished.to_rfc3339_opts(SecondsFormat::Millis, true),
        "wall_clock_seconds": wall,
        "sha256": digests,
        "config": exp,
    }))
}

/// Writes all artifacts and the manifest into `dir`, creating it if needed.
/// Each file is written to a temporary name and renamed into place; on any
/// failure the files already written by this call are removed again.
pub fn write_experiment(
    dir: &Path,
    exp: &Experiment,
    out: &ExperimentOutput,
    meta: &RunMetadata,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let files = artifacts(out);
    let manifest = manifest_json(exp, meta, &files);
    let mut written = Vec::new();
    let all = files
        .iter()
        .map(|(n, b)| (*n, b.as_str()))
        .chain([(MANIFEST_FILE, manifest.as_str())]);
    for (name, body) in all {
        let path = dir.join(name);
        if let Err(e) = write_atomic(&path, body.as_bytes()) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(e);
        }
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::figures;
    use crate::scenarios::{run_experiment, ScenarioSet};

    fn small() -> Experiment {
        let mut cfg = figures::separation(2.2);
        cfg.n_paths = 3;
        cfg.horizon = 0.1;
        Experiment::Scenarios(ScenarioSet {
            name: "small".into(),
            runs: vec![cfg],
        })
    }

    #[test]
    fn csv_shapes() {
        let out = run_experiment(&small(), 1).unwrap();
        let ExperimentOutput::Scenarios { runs, .. } = &out else {
            panic!()
        };
        let paths = paths_sample_csv(runs);
        let header = paths.lines().next().unwrap();
        assert_eq!(header, "id,path,t,xi,mean,p1,p2,p3,p4,p5,q1,q2,q3,q4,q5,delta");
        let cols = header.split(',').count();
        assert!(paths.lines().all(|l| l.split(',').count() == cols));
        assert_eq!(paths.lines().count(), 1 + 3 * 26);
        let metrics = metrics_csv(runs);
        assert!(metrics
            .lines()
            .skip(1)
            .all(|l| l.split(',').count() == 10 && !l.ends_with(',')));
    }

    #[test]
    fn writes_all_files_with_matching_digests() {
        let dir = tempfile::tempdir().unwrap();
        let exp = small();
        let out = run_experiment(&exp, 2).unwrap();
        let now = Utc::now();
        let meta = RunMetadata {
            started: now,
            finished: now,
            workers: 2,
        };
        let written = write_experiment(dir.path(), &exp, &out, &meta).unwrap();
        assert_eq!(written.len(), 4);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(MANIFEST_FILE)).unwrap()).unwrap();
        let summary = fs::read(dir.path().join(SUMMARY_FILE)).unwrap();
        assert_eq!(manifest["sha256"][SUMMARY_FILE], sha256_hex(&summary));
        assert_eq!(manifest["seed"], 1);
        let echoed: Experiment = serde_json::from_value(manifest["config"].clone()).unwrap();
        assert_eq!(echoed, exp);
        assert!(fs::read_dir(dir.path())
            .unwrap()
            .all(|e| !e.unwrap().path().to_string_lossy().ends_with(".partial")));
    }
}
