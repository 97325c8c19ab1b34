//! Exhaustive scans over fixed-size bipartitions, grouping partitions whose
//! entropies coincide.
//!
//! A scan is split into three steps so that the middle one can be run in
//! parallel by a caller: [`prepare_scan`] validates and builds the exponent,
//! [`partition_entropy`] evaluates one partition, and [`classify`] turns the
//! ordered results into an [`EntropyClassReport`].

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gaussian::{exponent_matrix, total_entropy, Bipartition, ExponentConvention, LogBase};
use crate::matrix::SymmetricMatrix;
use crate::netgraph::{binomial, potential_matrix};

/// Default largest graph an exhaustive scan accepts.
pub const DEFAULT_SCAN_LIMIT: usize = 24;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub size_a: usize,
    /// For `2·size_a = N`, emit only partitions containing vertex 0.
    pub dedup_complements: bool,
    pub g: f64,
    pub convention: ExponentConvention,
    pub log_base: LogBase,
    /// Relative tolerance for treating two entropies as equal.
    pub cluster_tol: f64,
    /// Record every member of every class.
    pub keep_members: bool,
}

impl ScanConfig {
    pub fn new(size_a: usize) -> Self {
        ScanConfig {
            size_a,
            dedup_complements: false,
            g: 1.0,
            convention: ExponentConvention::LiteralV,
            log_base: LogBase::Two,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            keep_members: false,
        }
    }

    pub fn validate(&self, vertices: usize, limit: usize) -> Result<()> {
        if vertices > limit {
            return Err(Error::ScanLimit { vertices, limit });
        }
        check_sizes(vertices, self.size_a)?;
        if !(self.cluster_tol > 0.0) || !self.cluster_tol.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!(
                "cluster tolerance {} must be positive",
                self.cluster_tol
            )));
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::InvalidCoupling(self.g));
        }
        Ok(())
    }
}

fn check_sizes(vertices: usize, size_a: usize) -> Result<()> {
    if size_a == 0 || size_a >= vertices {
        return Err(Error::InvalidBipartition(alloc::format!(
            "size of part A must lie in 1..{vertices}, got {size_a}"
        )));
    }
    Ok(())
}

/// Number of partitions [`enumerate_bipartitions`] emits.
pub fn partition_count(vertices: usize, size_a: usize, dedup_complements: bool) -> u128 {
    if dedup_complements && 2 * size_a == vertices && size_a > 0 {
        binomial(vertices - 1, size_a - 1)
    } else {
        binomial(vertices, size_a)
    }
}

/// All `size_a`-subsets of `0..vertices` in lexicographic order. With
/// `dedup_complements` and `2·size_a = vertices`, only those containing
/// vertex 0.
pub fn enumerate_bipartitions(
    vertices: usize,
    size_a: usize,
    dedup_complements: bool,
) -> Result<impl Iterator<Item = Bipartition>> {
    check_sizes(vertices, size_a)?;
    let halve = dedup_complements && 2 * size_a == vertices;
    Ok((0..vertices)
        .combinations(size_a)
        .take_while(move |c| !halve || c[0] == 0)
        .map(move |c| Bipartition::new(c, vertices).expect("combinations form valid bipartitions")))
}

/// Edges of `a` with one endpoint in each part.
pub fn cut_size(a: &SymmetricMatrix, p: &Bipartition) -> Result<usize> {
    if a.dim() != p.total() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: p.total(),
        });
    }
    let b = p.part_b();
    let mut cut = 0;
    for &u in p.part_a() {
        for &v in &b {
            if a.get(u, v) != 0.0 {
                cut += 1;
            }
        }
    }
    Ok(cut)
}

/// Validates `cfg` against `a` and returns the exponent matrix to scan.
pub fn prepare_scan(a: &SymmetricMatrix, cfg: &ScanConfig, limit: usize) -> Result<SymmetricMatrix> {
    cfg.validate(a.dim(), limit)?;
    exponent_matrix(&potential_matrix(a, cfg.g)?, cfg.convention)
}

/// Total entropy of one partition; errors carry the partition.
pub fn partition_entropy(m: &SymmetricMatrix, p: &Bipartition, base: LogBase) -> Result<f64> {
    total_entropy(m, p, base).map_err(|e| Error::AtPartition {
        part: p.to_one_based(),
        cause: Box::new(e),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyClass {
    /// Mean entropy of the members.
    pub entropy: f64,
    pub min_entropy: f64,
    pub max_entropy: f64,
    pub abundance: usize,
    /// Lexicographically smallest member.
    pub agent: Bipartition,
    pub min_cut: usize,
    pub max_cut: usize,
    /// Sorted, present when the scan kept members.
    pub members: Option<Vec<Bipartition>>,
}

impl EntropyClass {
    pub fn contains(&self, p: &Bipartition) -> Option<bool> {
        self.members.as_ref().map(|m| m.binary_search(p).is_ok())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyClassReport {
    /// Sorted by entropy, largest first.
    pub classes: Vec<EntropyClass>,
    pub total_partitions: usize,
    /// Smallest distance between the extreme members of adjacent classes.
    pub min_gap: Option<f64>,
    /// `min_gap` relative to the larger of the two entropies involved.
    pub min_relative_gap: Option<f64>,
}

impl EntropyClassReport {
    /// Index of the class with a member equal to `p`, if members were kept.
    pub fn class_of(&self, p: &Bipartition) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(p) == Some(true))
    }
}

/// Groups `(partition, entropy)` pairs by single linkage: sorted by entropy,
/// neighbours `a`, `b` share a class when `|a - b| <= tol·max(|a|, |b|)`.
/// The result does not depend on the order of `samples`.
pub fn classify(
    a: &SymmetricMatrix,
    samples: Vec<(Bipartition, f64)>,
    cluster_tol: f64,
    keep_members: bool,
) -> Result<EntropyClassReport> {
    let total_partitions = samples.len();
    let mut rows = Vec::with_capacity(samples.len());
    for (p, s) in samples {
        if !s.is_finite() {
            return Err(Error::Internal(String::from("non-finite entropy in scan")));
        }
        let cut = cut_size(a, &p)?;
        rows.push((p, s, cut));
    }
    rows.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));

    let mut groups: Vec<Vec<(Bipartition, f64, usize)>> = Vec::new();
    for row in rows {
        match groups.last_mut() {
            Some(g) if same_class(g[g.len() - 1].1, row.1, cluster_tol) => g.push(row),
            _ => groups.push(alloc::vec![row]),
        }
    }

    let mut classes = Vec::with_capacity(groups.len());
    for group in groups {
        let abundance = group.len();
        let entropy = group.iter().map(|r| r.1).sum::<f64>() / abundance as f64;
        let max_entropy = group[0].1;
        let min_entropy = group[abundance - 1].1;
        let min_cut = group.iter().map(|r| r.2).min().unwrap_or(0);
        let max_cut = group.iter().map(|r| r.2).max().unwrap_or(0);
        let mut members: Vec<Bipartition> = group.into_iter().map(|r| r.0).collect();
        members.sort();
        let agent = members[0].clone();
        classes.push(EntropyClass {
            entropy,
            min_entropy,
            max_entropy,
            abundance,
            agent,
            min_cut,
            max_cut,
            members: keep_members.then_some(members),
        });
    }

    let mut min_gap: Option<f64> = None;
    let mut min_relative_gap: Option<f64> = None;
    for pair in classes.windows(2) {
        let gap = pair[0].min_entropy - pair[1].max_entropy;
        let scale = pair[0].min_entropy.abs().max(pair[1].max_entropy.abs());
        let rel = if scale > 0.0 { gap / scale } else { f64::INFINITY };
        min_gap = Some(min_gap.map_or(gap, |m| m.min(gap)));
        min_relative_gap = Some(min_relative_gap.map_or(rel, |m| m.min(rel)));
    }
    Ok(EntropyClassReport {
        classes,
        total_partitions,
        min_gap,
        min_relative_gap,
    })
}

fn same_class(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Sequential scan with the default vertex limit.
pub fn scan(a: &SymmetricMatrix, cfg: &ScanConfig) -> Result<EntropyClassReport> {
    scan_with_limit(a, cfg, DEFAULT_SCAN_LIMIT)
}

pub fn scan_with_limit(a: &SymmetricMatrix, cfg: &ScanConfig, limit: usize) -> Result<EntropyClassReport> {
    let m = prepare_scan(a, cfg, limit)?;
    let mut samples = Vec::new();
    for p in enumerate_bipartitions(a.dim(), cfg.size_a, cfg.dedup_complements)? {
        let s = partition_entropy(&m, &p, cfg.log_base)?;
        samples.push((p, s));
    }
    classify(a, samples, cfg.cluster_tol, cfg.keep_members)
}
