use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};

use tww::exact::ExactError;
use tww::parse_instance;

use crate::{SolveOpts, Solver};

pub const HEADER: [&str; 7] = ["name", "n", "m", "width", "optimal", "elapsed_ms", "stage"];

fn instances(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "gr") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// One row per instance. Instances that hit the time or memory limit get an
/// empty width; anything else that goes wrong fails the run once all rows
/// are written.
pub fn run(dir: &Path, csv_path: &Path, solver: Solver, opts: &SolveOpts, stop: &Arc<AtomicBool>) -> Result<()> {
    let files = instances(dir)?;
    let mut out = csv::Writer::from_path(csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
    out.write_record(HEADER)?;
    let mut failures = 0;
    for path in &files {
        if stop.load(Ordering::Relaxed) {
            break;
        }
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let inst = match parse_instance(&text) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("{name}: {e}");
                failures += 1;
                continue;
            }
        };
        let (n, m) = (inst.n.to_string(), inst.m().to_string());
        let start = Instant::now();
        match opts.solve(solver, &inst, stop) {
            Ok(r) => {
                out.write_record([
                    name.as_str(),
                    &n,
                    &m,
                    &r.width.to_string(),
                    if r.optimal { "true" } else { "false" },
                    &r.elapsed.as_millis().to_string(),
                    r.stage.as_str(),
                ])?;
            }
            Err(e) => {
                let limit = match e.downcast_ref::<ExactError>() {
                    Some(ExactError::Timeout { .. }) => Some("timeout"),
                    Some(ExactError::MemoryExhausted { .. }) => Some("memory"),
                    _ => None,
                };
                let Some(stage) = limit else {
                    eprintln!("{name}: {e:#}");
                    failures += 1;
                    continue;
                };
                let ms = start.elapsed().as_millis().to_string();
                out.write_record([name.as_str(), &n, &m, "", "false", &ms, stage])?;
            }
        }
        out.flush()?;
    }
    out.flush()?;
    if failures > 0 {
        bail!("{failures} of {} instances failed", files.len());
    }
    Ok(())
}
