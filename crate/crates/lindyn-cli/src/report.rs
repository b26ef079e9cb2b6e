//! Report envelope and output writers.
//!
//! Reports are fully determined by (config, seed, artifact version): the
//! worker count, output directory, and format never enter the document, so
//! reruns and different `--jobs` values produce byte-identical files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::schema::SCHEMA_VERSION;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub artifact_version: &'static str,
    pub experiment: String,
    pub seed: u64,
    /// Echo of the effective experiment configuration.
    pub config: Value,
    pub pass: bool,
    pub results: Value,
}

impl Report {
    pub fn new(experiment: &str, seed: u64, config: Value, pass: bool, results: Value) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            artifact_version: env!("CARGO_PKG_VERSION"),
            experiment: experiment.to_string(),
            seed,
            config,
            pass,
            results,
        }
    }

    /// Write `<out_dir>/<experiment>.json` and return the path.
    pub fn write_json(&self, out_dir: &Path) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join(format!("{}.json", self.experiment));
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

/// Plot-ready CSV rows for the experiments that produce tables.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn write(&self, out_dir: &Path, experiment: &str) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let path = out_dir.join(format!("{experiment}.csv"));
        let mut text = self.header.join(",");
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

/// Deterministic parallel map: items are processed by `jobs` workers and the
/// results reassembled in input order, so the output is independent of the
/// worker count.
pub fn par_map<T, R, F>(jobs: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync,
{
    let jobs = jobs.max(1);
    if jobs == 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let n = items.len();
    let mut slots: Vec<Option<R>> = (0..n).map(|_| None).collect();
    let indexed: Vec<(usize, T)> = items.into_iter().enumerate().collect();
    let chunk = n.div_ceil(jobs);
    let mut pending: Vec<&mut [Option<R>]> = Vec::new();
    let mut rest: &mut [Option<R>] = &mut slots;
    let mut chunks_in: Vec<Vec<(usize, T)>> = Vec::new();
    {
        let mut iter = indexed.into_iter().peekable();
        while iter.peek().is_some() {
            chunks_in.push(iter.by_ref().take(chunk).collect());
        }
    }
    for c in &chunks_in {
        let (head, tail) = rest.split_at_mut(c.len());
        pending.push(head);
        rest = tail;
    }
    std::thread::scope(|scope| {
        for (input, out) in chunks_in.into_iter().zip(pending) {
            let f = &f;
            scope.spawn(move || {
                for ((_, item), slot) in input.into_iter().zip(out.iter_mut()) {
                    *slot = Some(f(item));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("all slots filled")).collect()
}
