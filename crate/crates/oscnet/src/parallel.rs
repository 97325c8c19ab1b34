//! Parallel evaluation of exhaustive scans.

use oscnet_core::enumerate::EntropyClassReport;
use oscnet_core::enumerate::{classify, enumerate_bipartitions, partition_entropy, prepare_scan, ScanConfig};
use oscnet_core::{Bipartition, SymmetricMatrix};
use rayon::prelude::*;

use crate::error::CliError;

/// Runs a scan on a rayon pool of `jobs` workers (rayon's default when
/// `None`). Results are gathered in enumeration order, so the report and the
/// error raised for a failing partition do not depend on `jobs`.
pub fn scan_parallel(
    a: &SymmetricMatrix,
    cfg: &ScanConfig,
    limit: usize,
    jobs: Option<usize>,
) -> Result<EntropyClassReport, CliError> {
    let m = prepare_scan(a, cfg, limit)?;
    let parts: Vec<Bipartition> = enumerate_bipartitions(a.dim(), cfg.size_a, cfg.dedup_complements)?.collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Validation("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;

    let results: Vec<_> = pool.install(|| {
        parts
            .par_iter()
            .map(|p| partition_entropy(&m, p, cfg.log_base))
            .collect()
    });
    let mut samples = Vec::with_capacity(parts.len());
    for (p, r) in parts.into_iter().zip(results) {
        samples.push((p, r?));
    }
    Ok(classify(a, samples, cfg.cluster_tol, cfg.keep_members)?)
}
