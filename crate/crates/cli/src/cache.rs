//! Tau tables on disk: one `tau_v1_<n_max>.txt` per size.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use expsum_core::eigenforms::{compute_tau_with_ceiling, load_table, save_table, TauTable};

use crate::CliError;

/// Hard ceiling for tables built from the command line.
pub const TAU_CEILING: u64 = 10_000_000;

pub fn table_path(dir: &Path, n_max: u64) -> PathBuf {
    dir.join(format!("tau_v1_{n_max}.txt"))
}

/// Cached sizes in `dir`, ascending.
pub fn cached_sizes(dir: &Path) -> Vec<u64> {
    let Ok(entries) = fs::read_dir(dir) else {
        return Vec::new();
    };
    let mut sizes: Vec<u64> = entries
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            name.strip_prefix("tau_v1_")?.strip_suffix(".txt")?.parse().ok()
        })
        .collect();
    sizes.sort_unstable();
    sizes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauStatus {
    Hit,
    Built,
    Rebuilt,
}

impl TauStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TauStatus::Hit => "cache-hit",
            TauStatus::Built => "built",
            TauStatus::Rebuilt => "rebuilt",
        }
    }
}

/// Loads `tau_v1_<n_max>.txt`, or builds and saves it. A cache that fails to
/// load is an error unless `force`.
pub fn ensure_table(dir: &Path, n_max: u64, force: bool) -> Result<(TauTable, TauStatus), CliError> {
    let path = table_path(dir, n_max);
    let mut status = TauStatus::Built;
    if path.exists() {
        match load_table(&path) {
            Ok(t) if t.n_max() == n_max => {
                eprintln!("cache hit: {}", path.display());
                return Ok((t, TauStatus::Hit));
            }
            Ok(t) if !force => {
                return Err(CliError::Core(expsum_core::Error::Format {
                    path,
                    line: 1,
                    msg: format!("holds n_max = {}, expected {n_max}; rerun with --force", t.n_max()),
                }))
            }
            Err(e) if !force => return Err(CliError::CorruptCache(e)),
            _ => {
                eprintln!("rebuilding {}", path.display());
                status = TauStatus::Rebuilt;
            }
        }
    }
    eprintln!("computing tau up to {n_max}");
    let t = compute_tau_with_ceiling(n_max, TAU_CEILING)?;
    save_table(&t, &path)?;
    Ok((t, status))
}

/// The smallest cached table covering `need`.
pub fn find_table(dir: &Path, need: u64) -> Result<Arc<TauTable>, CliError> {
    let Some(&size) = cached_sizes(dir).iter().find(|&&s| s >= need) else {
        return Err(CliError::MissingCache {
            need,
            dir: dir.to_path_buf(),
        });
    };
    let path = table_path(dir, size);
    let t = load_table(&path).map_err(CliError::CorruptCache)?;
    eprintln!("cache hit: {}", path.display());
    Ok(Arc::new(t))
}

/// [`find_table`], falling back to an in-memory build.
pub fn find_or_compute(dir: &Path, need: u64) -> Result<Arc<TauTable>, CliError> {
    match find_table(dir, need) {
        Err(CliError::MissingCache { .. }) => {
            eprintln!("no cached table covers {need}; computing in memory");
            Ok(Arc::new(compute_tau_with_ceiling(need.max(1), TAU_CEILING)?))
        }
        other => other,
    }
}
