//! Entanglement of the Gaussian ground state `ψ(x) ∝ exp(-½ xᵀ M x)`.
//!
//! For a bipartition `A | B` the exponent is rescaled blockwise to
//! `[[I, Γ], [Γᵀ, I]]` with `Γ = M_AA^{-1/2} M_AB M_BB^{-1/2}`. Local rotations
//! then diagonalize `Γ`, leaving independent two-mode factors
//! `exp(-½x² - ½y² - γxy)`, one per singular value `γ` of `Γ`. Each factor has
//! a geometric Schmidt spectrum with parameter `ν = 1/√(1-γ²)`, and the total
//! entropy is the sum over factors.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{spd_function, SymmetricMatrix};

/// Singular values closer than this are reported as one degenerate mode.
/// Since every `γ` lies in `[0, 1)`, an absolute tolerance is relative to the
/// unit bound.
pub const GAMMA_GROUP_TOL: f64 = 1e-9;

/// Largest admissible `γ` before the reduced state is treated as
/// non-normalizable.
pub const GAMMA_UNIT_MARGIN: f64 = 1e-12;

/// Which matrix plays the role of the ground-state exponent `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExponentConvention {
    /// `M = V`, taking the Gaussian exponent to be the potential matrix itself.
    #[default]
    LiteralV,
    /// `M = V^{1/2}`, the true ground state of `H = ½(pᵀp + xᵀVx)`.
    SqrtV,
}

impl ExponentConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExponentConvention::LiteralV => "literal-v",
            ExponentConvention::SqrtV => "sqrt-v",
        }
    }
}

impl fmt::Display for ExponentConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExponentConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal-v" => Ok(ExponentConvention::LiteralV),
            "sqrt-v" => Ok(ExponentConvention::SqrtV),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown convention {other:?} (expected literal-v or sqrt-v)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Two => libm::log2(x),
            LogBase::E => libm::log(x),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown log base {other:?} (expected 2 or e)"
            ))),
        }
    }
}

/// A proper, nonempty vertex subset `A` of `0..total`; `B` is its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    part_a: Vec<usize>,
    total: usize,
}

impl Bipartition {
    /// Sorts `part_a`; rejects duplicates, out-of-range indices, and empty or
    /// full subsets.
    pub fn new(mut part_a: Vec<usize>, total: usize) -> Result<Self> {
        part_a.sort_unstable();
        if let Some(w) = part_a.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidBipartition(alloc::format!("vertex {} repeated", w[0])));
        }
        if let Some(&last) = part_a.last() {
            if last >= total {
                return Err(Error::VertexOutOfRange {
                    index: last,
                    count: total,
                });
            }
        }
        if part_a.is_empty() || part_a.len() == total {
            return Err(Error::InvalidBipartition(alloc::format!(
                "part A has {} of {} vertices; both parts must be nonempty",
                part_a.len(),
                total
            )));
        }
        Ok(Bipartition { part_a, total })
    }

    /// From 1-based vertex labels.
    pub fn from_one_based(labels: &[usize], total: usize) -> Result<Self> {
        let mut part = Vec::with_capacity(labels.len());
        for &l in labels {
            if l == 0 {
                return Err(Error::InvalidBipartition(String::from(
                    "vertex labels are 1-based; got 0",
                )));
            }
            part.push(l - 1);
        }
        Self::new(part, total)
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> Vec<usize> {
        let mut in_a = vec![false; self.total];
        for &v in &self.part_a {
            in_a[v] = true;
        }
        (0..self.total).filter(|&v| !in_a[v]).collect()
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn contains(&self, v: usize) -> bool {
        self.part_a.binary_search(&v).is_ok()
    }

    pub fn complement(&self) -> Bipartition {
        Bipartition {
            part_a: self.part_b(),
            total: self.total,
        }
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.part_a.iter().map(|v| v + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaMode {
    pub gamma: f64,
    pub degeneracy: usize,
}

/// Per-mode correlation parameters with degeneracies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaSpectrum {
    modes: Vec<GammaMode>,
}

impl GammaSpectrum {
    pub fn new(modes: Vec<GammaMode>) -> Result<Self> {
        for m in &modes {
            if !(m.gamma.abs() < 1.0) {
                return Err(Error::Domain {
                    quantity: "gamma",
                    value: m.gamma,
                    requirement: "|gamma| < 1",
                });
            }
            if m.degeneracy == 0 {
                return Err(Error::InvalidArgument(String::from("zero degeneracy")));
            }
        }
        Ok(GammaSpectrum { modes })
    }

    /// Groups raw values (any order) into degenerate modes, largest first.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let groups = group_values(values);
        let modes = groups
            .iter()
            .map(|g| GammaMode {
                gamma: mean(g),
                degeneracy: g.len(),
            })
            .collect();
        Self::new(modes)
    }

    pub fn modes(&self) -> &[GammaMode] {
        &self.modes
    }

    /// Total number of modes counting degeneracy.
    pub fn mode_count(&self) -> usize {
        self.modes.iter().map(|m| m.degeneracy).sum()
    }

    /// `Σ degeneracy · S(γ)`.
    pub fn total_entropy(&self, base: LogBase) -> Result<f64> {
        let mut total = 0.0;
        for m in &self.modes {
            total += m.degeneracy as f64 * entropy_from_gamma(m.gamma, base)?;
        }
        Ok(total)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sorts descending and splits wherever neighbours differ by more than
/// [`GAMMA_GROUP_TOL`].
fn group_values(values: &[f64]) -> Vec<Vec<f64>> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in sorted {
        match groups.last_mut() {
            Some(g) if (g[g.len() - 1] - v).abs() <= GAMMA_GROUP_TOL => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    groups
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEntropy {
    pub gamma: f64,
    pub nu: f64,
    pub entropy: f64,
    pub degeneracy: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    pub log_base: LogBase,
    pub total_entropy: f64,
    pub modes: Vec<ModeEntropy>,
}

/// Unique SPD square root.
pub fn spd_sqrt(m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    Ok(SymmetricMatrix::symmetrized(spd_function(m.as_dmatrix(), libm::sqrt)?))
}

/// The ground-state exponent `M` for potential `V` under `convention`.
pub fn exponent_matrix(v: &SymmetricMatrix, convention: ExponentConvention) -> Result<SymmetricMatrix> {
    match convention {
        ExponentConvention::LiteralV => Ok(v.clone()),
        ExponentConvention::SqrtV => spd_sqrt(v),
    }
}

/// Singular values of `Γ = M_AA^{-1/2} M_AB M_BB^{-1/2}`, descending.
/// There are `min(|A|, |B|)` of them.
pub fn gamma_values(m: &SymmetricMatrix, p: &Bipartition) -> Result<Vec<f64>> {
    if p.total() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: p.total(),
        });
    }
    let a = p.part_a();
    let b = p.part_b();
    let inv_sqrt = |x: f64| 1.0 / libm::sqrt(x);
    let maa = spd_function(&m.block(a, a), inv_sqrt)?;
    let mbb = spd_function(&m.block(&b, &b), inv_sqrt)?;
    let gamma: DMatrix<f64> = maa * m.block(a, &b) * mbb;
    let mut sv: Vec<f64> = gamma.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    if let Some(&top) = sv.first() {
        if !(top < 1.0 - GAMMA_UNIT_MARGIN) {
            return Err(Error::NumericalDegeneracy { gamma: top });
        }
    }
    Ok(sv)
}

pub fn gamma_spectrum(m: &SymmetricMatrix, p: &Bipartition) -> Result<GammaSpectrum> {
    GammaSpectrum::from_values(&gamma_values(m, p)?)
}

/// `ν = 1/√(1-γ²)`.
pub fn nu_from_gamma(gamma: f64) -> Result<f64> {
    if !(gamma.abs() < 1.0) {
        return Err(Error::Domain {
            quantity: "gamma",
            value: gamma,
            requirement: "|gamma| < 1",
        });
    }
    Ok(1.0 / libm::sqrt(1.0 - gamma * gamma))
}

fn entropy_terms(half_plus: f64, half_minus: f64, base: LogBase) -> f64 {
    if half_minus == 0.0 {
        return 0.0;
    }
    half_plus * base.log(half_plus) - half_minus * base.log(half_minus)
}

/// `S(ν) = ((ν+1)/2) log((ν+1)/2) - ((ν-1)/2) log((ν-1)/2)`, with `S(1) = 0`.
pub fn mode_entropy(nu: f64, base: LogBase) -> Result<f64> {
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(Error::Domain {
            quantity: "nu",
            value: nu,
            requirement: "finite and >= 1",
        });
    }
    Ok(entropy_terms((nu + 1.0) / 2.0, (nu - 1.0) / 2.0, base))
}

/// `S(ν(γ))`, evaluating `ν - 1 = γ² / (s (1 + s))` with `s = √(1-γ²)` so that
/// small `γ` does not cancel.
pub fn entropy_from_gamma(gamma: f64, base: LogBase) -> Result<f64> {
    let nu = nu_from_gamma(gamma)?;
    let s = 1.0 / nu;
    let nu_minus_one = gamma * gamma / (s * (1.0 + s));
    Ok(entropy_terms((nu + 1.0) / 2.0, nu_minus_one / 2.0, base))
}

pub fn bipartite_entropy(m: &SymmetricMatrix, p: &Bipartition, base: LogBase) -> Result<EntropyResult> {
    let values = gamma_values(m, p)?;
    let mut total_entropy = 0.0;
    for &g in &values {
        total_entropy += entropy_from_gamma(g, base)?;
    }
    let mut modes = Vec::new();
    for group in group_values(&values) {
        let mut group_entropy = 0.0;
        for &g in &group {
            group_entropy += entropy_from_gamma(g, base)?;
        }
        let gamma = mean(&group);
        modes.push(ModeEntropy {
            gamma,
            nu: nu_from_gamma(gamma)?,
            entropy: group_entropy / group.len() as f64,
            degeneracy: group.len(),
        });
    }
    Ok(EntropyResult {
        log_base: base,
        total_entropy,
        modes,
    })
}

/// Total entropy only; skips the mode grouping.
pub fn total_entropy(m: &SymmetricMatrix, p: &Bipartition, base: LogBase) -> Result<f64> {
    let mut total = 0.0;
    for g in gamma_values(m, p)? {
        total += entropy_from_gamma(g, base)?;
    }
    Ok(total)
}

/// Leading Schmidt coefficients of a two-mode factor and the probability mass
/// beyond them.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// `λ_n = (2/(ν+1))^{1/2} ((ν-1)/(ν+1))^{n/2}` for `n < cutoff`.
    pub coefficients: Vec<f64>,
    /// `Σ_{n >= cutoff} λ_n² = ((ν-1)/(ν+1))^cutoff`.
    pub tail: f64,
}

pub fn schmidt_coefficients(nu: f64, cutoff: usize) -> Result<SchmidtSpectrum> {
    if !(nu >= 1.0) || !nu.is_finite() {
        return Err(Error::Domain {
            quantity: "nu",
            value: nu,
            requirement: "finite and >= 1",
        });
    }
    if cutoff == 0 {
        return Err(Error::InvalidArgument(String::from("cutoff must be >= 1")));
    }
    let ratio = (nu - 1.0) / (nu + 1.0);
    let lead = libm::sqrt(2.0 / (nu + 1.0));
    let coefficients = (0..cutoff).map(|n| lead * libm::pow(ratio, n as f64 / 2.0)).collect();
    Ok(SchmidtSpectrum {
        coefficients,
        tail: libm::pow(ratio, cutoff as f64),
    })
}

/// Normalized Hermite functions `ψ_0(x), ..., ψ_{count-1}(x)` by the
/// three-term recurrence.
pub fn hermite_functions(x: f64, count: usize) -> Vec<f64> {
    let mut psi = Vec::with_capacity(count);
    if count == 0 {
        return psi;
    }
    psi.push(libm::pow(PI, -0.25) * libm::exp(-x * x / 2.0));
    if count > 1 {
        psi.push(libm::sqrt(2.0) * x * psi[0]);
    }
    for n in 1..count.saturating_sub(1) {
        let nf = n as f64;
        let next = libm::sqrt(2.0 / (nf + 1.0)) * x * psi[n] - libm::sqrt(nf / (nf + 1.0)) * psi[n - 1];
        psi.push(next);
    }
    psi
}

/// Maximum deviation between the two-mode Gaussian and its truncated Schmidt
/// (Mehler) expansion on a `grid x grid` lattice over `[-4, 4]²`.
///
/// The left side is `π^{-1/2} exp(-(x̃² + ỹ²)/2 - γ x̃ỹ)` in the rescaled
/// coordinates `x̃ = √ν x`, the right side `Σ_{n<cutoff} λ_n s^n ψ_n(x) ψ_n(y)`
/// with `s = -sign(γ)`.
pub fn mehler_check(gamma: f64, cutoff: usize, grid: usize) -> Result<f64> {
    let nu = nu_from_gamma(gamma)?;
    if grid < 2 {
        return Err(Error::InvalidArgument(String::from("grid must be >= 2")));
    }
    let schmidt = schmidt_coefficients(nu, cutoff)?;
    let sign = if gamma > 0.0 { -1.0 } else { 1.0 };
    let signed: Vec<f64> = schmidt
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, &l)| if n % 2 == 1 { sign * l } else { l })
        .collect();
    let points: Vec<f64> = (0..grid).map(|i| -4.0 + 8.0 * i as f64 / (grid - 1) as f64).collect();
    let psi: Vec<Vec<f64>> = points.iter().map(|&x| hermite_functions(x, cutoff)).collect();
    let scale = libm::sqrt(nu);
    let norm = 1.0 / libm::sqrt(PI);
    let mut worst: f64 = 0.0;
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            let (xs, ys) = (scale * x, scale * y);
            let lhs = norm * libm::exp(-(xs * xs + ys * ys) / 2.0 - gamma * xs * ys);
            let rhs: f64 = (0..cutoff).map(|n| signed[n] * psi[i][n] * psi[j][n]).sum();
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}
