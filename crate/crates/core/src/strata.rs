//! Stratification of Hamming graphs relative to vertex `0…0`, the resulting
//! block-tridiagonal decomposition of the adjacency matrix, and closed-form
//! correlation spectra for three bipartition families.
//!
//! Each digit is rotated into the basis `|0̃⟩ = |0⟩`, `|1̃⟩ = Σ_{j≥1}|j⟩/√(n-1)`
//! plus `n-2` real Fourier vectors `|α⟩` on the letters `1..n`. There
//! `J - I` acts as `[[0, c], [c, n-2]]` on `{0̃, 1̃}` (with `c = √(n-1)`) and as
//! `-1` on every `|α⟩`. A product state with `m` digits of type `α` therefore
//! sees `c·Σσˣ + (n-2)·N̂ - m` on the remaining `L = d - m` binary digits,
//! and that operator splits into spin ladders of length `L - 2r + 1` whose
//! `t`-th rung lies in stratum `m + r + t`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gaussian::{entropy_from_gamma, gamma_values, Bipartition, GammaMode, GammaSpectrum, GAMMA_GROUP_TOL};
use crate::matrix::SymmetricMatrix;
use crate::netgraph::{binomial, build_hamming, potential_matrix, HammingSpec, DEFAULT_MAX_ENTRIES};
use crate::schur::{continued_fraction, gamma_scalar, reduce_chain, EffectiveTwoByTwo, TridiagonalChain};

/// Largest binary core (`d - m` digits) whose ladder decomposition is built
/// numerically. Covers every `H(d, n)` with `n^d <= 4096`.
pub const MAX_CORE_DIGITS: usize = 12;

/// Closed-form and direct entropies closer than this are reported as agreeing.
pub const AGREEMENT_TOL: f64 = 1e-8;

const LADDER_ACCEPT: f64 = 1e-6;
const LADDER_RESIDUAL: f64 = 1e-9;

/// One chain type in the decomposition, with how many copies occur.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumBlock {
    pub d_prime: usize,
    /// Number of `α`-type digits.
    pub m: usize,
    /// Stratum of the chain's first rung minus `m`; the ladder's depth `r`
    /// inside the binary core.
    pub level_offset: usize,
    pub multiplicity: u128,
    /// Adjacency action on the chain.
    pub chain: TridiagonalChain,
}

impl StratumBlock {
    /// Stratum (distance from `0…0`) of rung `t`.
    pub fn stratum(&self, t: usize) -> usize {
        self.m + self.level_offset + t
    }

    /// `V = I + 2g(deg·I - A)` restricted to this chain.
    pub fn potential_chain(&self, spec: HammingSpec, g: f64) -> TridiagonalChain {
        self.chain.affine(1.0 + 2.0 * g * spec.degree() as f64, 2.0 * g)
    }
}

/// Adjacency chain with the first rung at the bottom of its stratum range.
pub fn block_chain(d_prime: usize, n: usize, m: usize) -> Result<TridiagonalChain> {
    block_chain_at(d_prime, n, m, 0)
}

/// Chain with diagonal `(j + r)(n-2) - m` for `j = 0..=d'` and off-diagonal
/// `√(n-1)·√(j(d'-j+1))` for `j = 1..=d'`.
pub fn block_chain_at(d_prime: usize, n: usize, m: usize, level_offset: usize) -> Result<TridiagonalChain> {
    if n < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "alphabet size n = {n} must be >= 2"
        )));
    }
    let c = libm::sqrt((n - 1) as f64);
    let diag = (0..=d_prime)
        .map(|j| ((j + level_offset) * (n - 2)) as f64 - m as f64)
        .collect();
    let offdiag = (1..=d_prime)
        .map(|j| c * libm::sqrt((j * (d_prime - j + 1)) as f64))
        .collect();
    TridiagonalChain::new(diag, offdiag)
}

/// Binary strings of `L` bits grouped by weight.
struct WeightIndex {
    masks: Vec<Vec<u32>>,
    rank: Vec<usize>,
}

impl WeightIndex {
    fn new(bits: usize) -> Self {
        let mut masks = vec![Vec::new(); bits + 1];
        let mut rank = vec![0; 1 << bits];
        for mask in 0..(1u32 << bits) {
            let w = mask.count_ones() as usize;
            rank[mask as usize] = masks[w].len();
            masks[w].push(mask);
        }
        WeightIndex { masks, rank }
    }

    /// `Σ σ⁺` from weight `w` to `w + 1`.
    fn raise(&self, bits: usize, w: usize, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.masks[w + 1].len()];
        for (i, &mask) in self.masks[w].iter().enumerate() {
            for b in (0..bits).filter(|b| mask & (1 << b) == 0) {
                out[self.rank[(mask | 1 << b) as usize]] += v[i];
            }
        }
        out
    }

    /// `Σ σ⁻` from weight `w` to `w - 1`.
    fn lower(&self, bits: usize, w: usize, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.masks[w - 1].len()];
        for (i, &mask) in self.masks[w].iter().enumerate() {
            for b in (0..bits).filter(|b| mask & (1 << b) != 0) {
                out[self.rank[(mask & !(1 << b)) as usize]] += v[i];
            }
        }
        out
    }
}

/// Rungs `t = 0..=L-2r` of one spin ladder, each stored over the strings of
/// weight `r + t`.
struct CoreLadder {
    r: usize,
    rungs: Vec<Vec<f64>>,
}

struct CoreDecomposition {
    index: WeightIndex,
    ladders: Vec<CoreLadder>,
}

impl CoreDecomposition {
    fn ladder_count(&self, r: usize) -> usize {
        self.ladders.iter().filter(|l| l.r == r).count()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn max_abs_diff(a: &[f64], b: &[f64], scale: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - scale * y).abs()).fold(0.0, f64::max)
}

/// Splits `(C²)^⊗L` into ladders by finding, weight by weight, the states
/// orthogonal to everything raised from below, then raising them.
fn decompose_core(bits: usize) -> Result<CoreDecomposition> {
    if bits > MAX_CORE_DIGITS {
        return Err(Error::CapacityExceeded {
            requested: 1u128 << bits,
            limit: 1u128 << MAX_CORE_DIGITS,
        });
    }
    let index = WeightIndex::new(bits);
    let mut spanned: Vec<Vec<Vec<f64>>> = vec![Vec::new(); bits + 1];
    let mut ladders = Vec::new();
    for r in 0..=bits / 2 {
        let size = index.masks[r].len();
        let mut fresh: Vec<Vec<f64>> = Vec::new();
        for s in 0..size {
            if spanned[r].len() + fresh.len() == size {
                break;
            }
            let mut v = vec![0.0; size];
            v[s] = 1.0;
            for _ in 0..2 {
                for u in spanned[r].iter().chain(&fresh) {
                    let p = dot(u, &v);
                    axpy(-p, u, &mut v);
                }
            }
            let norm = libm::sqrt(dot(&v, &v));
            if norm > LADDER_ACCEPT {
                v.iter_mut().for_each(|x| *x /= norm);
                fresh.push(v);
            }
        }
        let d_prime = bits - 2 * r;
        for lowest in fresh {
            spanned[r].push(lowest.clone());
            let mut rungs = vec![lowest];
            for t in 1..=d_prime {
                let mut next = index.raise(bits, r + t - 1, &rungs[t - 1]);
                let norm = libm::sqrt(dot(&next, &next));
                let expected = libm::sqrt((t * (d_prime - t + 1)) as f64);
                if (norm - expected).abs() > LADDER_RESIDUAL * expected {
                    return Err(Error::Internal(alloc::format!(
                        "ladder r={r} rung {t} has norm {norm}, expected {expected}"
                    )));
                }
                next.iter_mut().for_each(|x| *x /= norm);
                spanned[r + t].push(next.clone());
                rungs.push(next);
            }
            ladders.push(CoreLadder { r, rungs });
        }
    }
    for (w, states) in spanned.iter().enumerate() {
        if states.len() != index.masks[w].len() {
            return Err(Error::Internal(alloc::format!(
                "ladders span {} of {} states at weight {w}",
                states.len(),
                index.masks[w].len()
            )));
        }
    }
    let core = CoreDecomposition { index, ladders };
    check_ladders(&core, bits)?;
    Ok(core)
}

/// Confirms `σ⁻` closes each ladder: it annihilates rung 0 and maps rung `t`
/// onto `√(t(d'-t+1))` times rung `t-1`.
fn check_ladders(core: &CoreDecomposition, bits: usize) -> Result<()> {
    for ladder in &core.ladders {
        let d_prime = bits - 2 * ladder.r;
        for (t, rung) in ladder.rungs.iter().enumerate() {
            let w = ladder.r + t;
            if w == 0 {
                continue;
            }
            let lowered = core.index.lower(bits, w, rung);
            let residual = if t == 0 {
                lowered.iter().fold(0.0f64, |a, x| a.max(x.abs()))
            } else {
                let coeff = libm::sqrt((t * (d_prime - t + 1)) as f64);
                max_abs_diff(&lowered, &ladder.rungs[t - 1], coeff)
            };
            if residual > LADDER_RESIDUAL {
                return Err(Error::Internal(alloc::format!(
                    "ladder r={} rung {t} not closed under lowering (residual {residual:e})",
                    ladder.r
                )));
            }
        }
    }
    Ok(())
}

fn alpha_weight(d: usize, n: usize, m: usize) -> u128 {
    binomial(d, m) * ((n - 2) as u128).pow(m as u32)
}

/// Chain types with multiplicities, ordered by `m` then `level_offset`.
///
/// Ladder counts come from the numerical decomposition of each binary core
/// and are checked against `C(L,r) - C(L,r-1)` and against the total
/// dimension `n^d`.
pub fn block_multiplicities(d: usize, n: usize) -> Result<Vec<StratumBlock>> {
    let spec = HammingSpec::new(d, n)?;
    let mut cores: Vec<Option<CoreDecomposition>> = (0..=d).map(|_| None).collect();
    let mut blocks = Vec::new();
    for m in 0..=d {
        let weight = alpha_weight(d, n, m);
        if weight == 0 {
            continue;
        }
        let bits = d - m;
        if cores[bits].is_none() {
            cores[bits] = Some(decompose_core(bits)?);
        }
        let core = cores[bits].as_ref().expect("core decomposed above");
        for r in 0..=bits / 2 {
            let count = core.ladder_count(r) as u128;
            let expected = binomial(bits, r) - if r > 0 { binomial(bits, r - 1) } else { 0 };
            if count != expected {
                return Err(Error::Internal(alloc::format!(
                    "{count} ladders at depth {r} of a {bits}-digit core, expected {expected}"
                )));
            }
            if count == 0 {
                continue;
            }
            let d_prime = bits - 2 * r;
            blocks.push(StratumBlock {
                d_prime,
                m,
                level_offset: r,
                multiplicity: weight * count,
                chain: block_chain_at(d_prime, n, m, r)?,
            });
        }
    }
    let total: u128 = blocks.iter().map(|b| b.multiplicity * (b.d_prime as u128 + 1)).sum();
    let expected = (n as u128).checked_pow(d as u32);
    if Some(total) != expected {
        return Err(Error::Internal(alloc::format!(
            "blocks cover {total} dimensions, expected n^d for {spec:?}"
        )));
    }
    Ok(blocks)
}

/// Terms `2^{d-m} (n-2)^m C(d,m)` of the expansion `n^d = (2 + (n-2))^d`, one
/// per number `m` of `α` digits.
pub fn stratum_term_counts(d: usize, n: usize) -> Result<Vec<(usize, u128)>> {
    HammingSpec::new(d, n)?;
    let mut out = Vec::with_capacity(d + 1);
    for m in 0..=d {
        let term = 2u128
            .checked_pow((d - m) as u32)
            .and_then(|p| p.checked_mul(alpha_weight(d, n, m)))
            .ok_or(Error::CapacityExceeded {
                requested: u128::MAX,
                limit: u128::MAX,
            })?;
        out.push((m, term));
    }
    Ok(out)
}

/// All chain eigenvalues repeated by multiplicity, ascending.
pub fn decomposition_spectrum(blocks: &[StratumBlock]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for b in blocks {
        let copies = usize::try_from(b.multiplicity).map_err(|_| Error::CapacityExceeded {
            requested: b.multiplicity,
            limit: usize::MAX as u128,
        })?;
        for ev in b.chain.to_matrix().eigenvalues() {
            out.extend(core::iter::repeat(ev).take(copies));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Digit-local orthogonal change of basis. Column 0 is `|0⟩`, column 1 the
/// uniform vector on letters `1..n`, and the rest a real Fourier basis of the
/// zero-sum vectors on those letters.
pub fn digit_basis(n: usize) -> Result<DMatrix<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "alphabet size n = {n} must be >= 2"
        )));
    }
    let len = n - 1;
    let lf = len as f64;
    let mut u = DMatrix::zeros(n, n);
    u[(0, 0)] = 1.0;
    for j in 0..len {
        u[(j + 1, 1)] = 1.0 / libm::sqrt(lf);
    }
    let mut col = 2;
    let mut k = 1;
    while col < n {
        if 2 * k == len {
            for j in 0..len {
                u[(j + 1, col)] = if j % 2 == 0 { 1.0 } else { -1.0 } / libm::sqrt(lf);
            }
            col += 1;
        } else {
            let scale = libm::sqrt(2.0 / lf);
            for j in 0..len {
                let phase = 2.0 * PI * (k * j) as f64 / lf;
                u[(j + 1, col)] = scale * libm::cos(phase);
                u[(j + 1, col + 1)] = scale * libm::sin(phase);
            }
            col += 2;
        }
        k += 1;
    }
    Ok(u)
}

/// Applies `u` to every digit of a vector indexed by `d`-digit base-`n`
/// strings (most significant digit first).
fn apply_digitwise(v: &mut [f64], d: usize, n: usize, u: &DMatrix<f64>) {
    let mut gathered = vec![0.0; n];
    for p in 0..d {
        let stride = n.pow((d - 1 - p) as u32);
        let blocks = n.pow(p as u32);
        for hi in 0..blocks {
            for lo in 0..stride {
                let base = hi * n * stride + lo;
                for (b, slot) in gathered.iter_mut().enumerate() {
                    *slot = v[base + b * stride];
                }
                for a in 0..n {
                    let mut acc = 0.0;
                    for (b, g) in gathered.iter().enumerate() {
                        acc += u[(a, b)] * g;
                    }
                    v[base + a * stride] = acc;
                }
            }
        }
    }
}

/// One copy of a chain inside the basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockInstance {
    /// Index into [`StrataBasis::blocks`].
    pub block: usize,
    pub first_column: usize,
    pub alpha_positions: Vec<usize>,
    /// Fourier label of each `α` digit, in `0..n-2`.
    pub alpha_labels: Vec<usize>,
}

/// Orthonormal basis whose columns realize the chain decomposition.
#[derive(Debug, Clone)]
pub struct StrataBasis {
    spec: HammingSpec,
    vectors: DMatrix<f64>,
    blocks: Vec<StratumBlock>,
    instances: Vec<BlockInstance>,
    labels: Vec<(usize, usize)>,
}

/// Builds the basis for `H(d, n)`; columns are grouped by chain copy in the
/// order `m`, `α` positions, `α` labels, ladder, rung.
pub fn stratification_basis(d: usize, n: usize) -> Result<StrataBasis> {
    stratification_basis_with_limit(d, n, DEFAULT_MAX_ENTRIES)
}

pub fn stratification_basis_with_limit(d: usize, n: usize, max_entries: u128) -> Result<StrataBasis> {
    let spec = HammingSpec::new(d, n)?;
    let size = spec.vertex_count().ok_or(Error::CapacityExceeded {
        requested: u128::MAX,
        limit: max_entries,
    })?;
    if (size as u128) * (size as u128) > max_entries {
        return Err(Error::CapacityExceeded {
            requested: (size as u128) * (size as u128),
            limit: max_entries,
        });
    }
    let blocks = block_multiplicities(d, n)?;
    let u = digit_basis(n)?;
    let place: Vec<usize> = (0..d).map(|p| n.pow((d - 1 - p) as u32)).collect();
    let mut vectors = DMatrix::zeros(size, size);
    let mut instances = Vec::new();
    let mut labels = Vec::with_capacity(size);
    let mut column = vec![0.0; size];
    let mut next_col = 0;
    for m in 0..=d {
        if alpha_weight(d, n, m) == 0 {
            continue;
        }
        let bits = d - m;
        let core = decompose_core(bits)?;
        let label_count = (n - 2).pow(m as u32);
        for positions in (0..d).combinations(m) {
            let binary: Vec<usize> = (0..d).filter(|p| !positions.contains(p)).collect();
            for code in 0..label_count {
                let mut alpha_labels = vec![0; m];
                let mut rest = code;
                for slot in alpha_labels.iter_mut().rev() {
                    *slot = rest % (n - 2);
                    rest /= n - 2;
                }
                let alpha_offset: usize = positions
                    .iter()
                    .zip(&alpha_labels)
                    .map(|(&p, &l)| (2 + l) * place[p])
                    .sum();
                for ladder in &core.ladders {
                    let block = blocks
                        .iter()
                        .position(|b| b.m == m && b.level_offset == ladder.r)
                        .ok_or_else(|| Error::Internal(String::from("ladder without block type")))?;
                    let instance = instances.len();
                    instances.push(BlockInstance {
                        block,
                        first_column: next_col,
                        alpha_positions: positions.clone(),
                        alpha_labels: alpha_labels.clone(),
                    });
                    for (t, rung) in ladder.rungs.iter().enumerate() {
                        column.iter_mut().for_each(|x| *x = 0.0);
                        for (i, &mask) in core.index.masks[ladder.r + t].iter().enumerate() {
                            let mut idx = alpha_offset;
                            for (k, &p) in binary.iter().enumerate() {
                                if mask & (1 << k) != 0 {
                                    idx += place[p];
                                }
                            }
                            column[idx] = rung[i];
                        }
                        apply_digitwise(&mut column, d, n, &u);
                        vectors.column_mut(next_col).copy_from_slice(&column);
                        labels.push((instance, t));
                        next_col += 1;
                    }
                }
            }
        }
    }
    if next_col != size {
        return Err(Error::Internal(alloc::format!(
            "built {next_col} of {size} basis vectors"
        )));
    }
    Ok(StrataBasis {
        spec,
        vectors,
        blocks,
        instances,
        labels,
    })
}

impl StrataBasis {
    pub fn spec(&self) -> HammingSpec {
        self.spec
    }

    /// Basis vectors as columns.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn blocks(&self) -> &[StratumBlock] {
        &self.blocks
    }

    pub fn instances(&self) -> &[BlockInstance] {
        &self.instances
    }

    /// `(instance, rung)` for each column.
    pub fn labels(&self) -> &[(usize, usize)] {
        &self.labels
    }

    /// Stratum containing the support of column `col`.
    pub fn column_stratum(&self, col: usize) -> usize {
        let (instance, t) = self.labels[col];
        self.blocks[self.instances[instance].block].stratum(t)
    }

    /// `Bᵀ M B`.
    pub fn conjugate(&self, m: &SymmetricMatrix) -> Result<DMatrix<f64>> {
        if m.dim() != self.vectors.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.vectors.nrows(),
                found: m.dim(),
            });
        }
        Ok(self.vectors.transpose() * m.as_dmatrix() * &self.vectors)
    }

    /// `max |BᵀB - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.vectors.transpose() * &self.vectors;
        identity_deviation(&gram)
    }

    /// `max |BBᵀ - I|`.
    pub fn completeness_error(&self) -> f64 {
        let sum = &self.vectors * self.vectors.transpose();
        identity_deviation(&sum)
    }

    /// Largest entry of `BᵀMB - ⊕ chain(block)` over all chain copies.
    pub fn block_residue(&self, m: &SymmetricMatrix, chain: impl Fn(&StratumBlock) -> TridiagonalChain) -> Result<f64> {
        let mut expected = DMatrix::zeros(m.dim(), m.dim());
        for inst in &self.instances {
            let c = chain(&self.blocks[inst.block]);
            let at = inst.first_column;
            for (j, &a) in c.diag().iter().enumerate() {
                expected[(at + j, at + j)] = a;
            }
            for (j, &b) in c.offdiag().iter().enumerate() {
                expected[(at + j, at + j + 1)] = b;
                expected[(at + j + 1, at + j)] = b;
            }
        }
        let conj = self.conjugate(m)?;
        Ok((conj - expected).abs().max())
    }

    pub fn adjacency_residue(&self, a: &SymmetricMatrix) -> Result<f64> {
        self.block_residue(a, |b| b.chain.clone())
    }

    pub fn potential_residue(&self, v: &SymmetricMatrix, g: f64) -> Result<f64> {
        let spec = self.spec;
        self.block_residue(v, |b| b.potential_chain(spec, g))
    }
}

fn identity_deviation(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).abs());
        }
    }
    worst
}

/// Parts of the adjacency matrix that lower, keep, or raise the stratum.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumOperators {
    /// Entry `(u, v)` is 1 when `u ~ v` and `u` lies one stratum above `v`.
    pub raising: DMatrix<f64>,
    pub flat: SymmetricMatrix,
    pub lowering: DMatrix<f64>,
}

pub fn stratum_operators(spec: HammingSpec) -> Result<StratumOperators> {
    let a = build_hamming(spec)?;
    let size = a.dim();
    let level: Vec<usize> = (0..size).map(|v| stratum_index(spec, v)).collect();
    let raising = DMatrix::from_fn(size, size, |u, v| {
        if a.get(u, v) != 0.0 && level[u] == level[v] + 1 {
            1.0
        } else {
            0.0
        }
    });
    let flat = SymmetricMatrix::from_fn(size, |u, v| if level[u] == level[v] { a.get(u, v) } else { 0.0 });
    let lowering = raising.transpose();
    Ok(StratumOperators {
        raising,
        flat,
        lowering,
    })
}

/// Distance of vertex `v` from `0…0`.
pub fn stratum_index(spec: HammingSpec, v: usize) -> usize {
    spec.distance(0, v)
}

fn vertex_count(spec: HammingSpec) -> Result<usize> {
    spec.vertex_count().ok_or(Error::CapacityExceeded {
        requested: u128::MAX,
        limit: usize::MAX as u128,
    })
}

/// Vertices whose stratum satisfies `in_a` form part `A`.
pub fn strata_bipartition(spec: HammingSpec, in_a: impl Fn(usize) -> bool) -> Result<Bipartition> {
    let size = vertex_count(spec)?;
    let part = (0..size).filter(|&v| in_a(stratum_index(spec, v))).collect();
    Bipartition::new(part, size)
}

/// Level at which the first-half split cuts: strata `0..k` form part `A`.
pub fn half_cut_level(d: usize) -> usize {
    d / 2 + 1
}

pub fn first_half_strata(spec: HammingSpec) -> Result<Bipartition> {
    let k = half_cut_level(spec.d());
    strata_bipartition(spec, |s| s < k)
}

pub fn even_odd_strata(spec: HammingSpec) -> Result<Bipartition> {
    strata_bipartition(spec, |s| s % 2 == 0)
}

/// Vertices whose leading digit is below `⌈n/2⌉`; the first half of the
/// index range when `n` is even.
pub fn leading_digit_halves(spec: HammingSpec) -> Result<Bipartition> {
    let size = vertex_count(spec)?;
    let bound = spec.n().div_ceil(2);
    let part = (0..size).filter(|&v| spec.digits(v)[0] < bound).collect();
    Bipartition::new(part, size)
}

fn check_coupling(g: f64) -> Result<()> {
    if g.is_finite() && g >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCoupling(g))
    }
}

fn to_degeneracy(mult: u128) -> Result<usize> {
    usize::try_from(mult).map_err(|_| Error::CapacityExceeded {
        requested: mult,
        limit: usize::MAX as u128,
    })
}

/// Sorts by `|γ|` descending and merges entries within [`GAMMA_GROUP_TOL`].
fn merge_modes(mut modes: Vec<GammaMode>) -> Vec<GammaMode> {
    modes.sort_by(|a, b| {
        b.gamma
            .abs()
            .total_cmp(&a.gamma.abs())
            .then(b.gamma.total_cmp(&a.gamma))
    });
    let mut out: Vec<GammaMode> = Vec::new();
    for m in modes {
        match out.last_mut() {
            Some(last) if (last.gamma - m.gamma).abs() <= GAMMA_GROUP_TOL => last.degeneracy += m.degeneracy,
            _ => out.push(m),
        }
    }
    out
}

/// First-half split with the closed-form continued fractions. Each cut chain
/// must have odd `d'` and be cut at its midpoint.
pub fn halfhalf_gammas(d: usize, n: usize, g: f64) -> Result<GammaSpectrum> {
    GammaSpectrum::new(halfhalf_modes(d, n, g, true)?)
}

/// First-half split for any parity, reducing each cut chain at its actual
/// cut position.
pub fn halfhalf_gammas_general(d: usize, n: usize, g: f64) -> Result<GammaSpectrum> {
    GammaSpectrum::new(halfhalf_modes(d, n, g, false)?)
}

fn halfhalf_modes(d: usize, n: usize, g: f64, strict: bool) -> Result<Vec<GammaMode>> {
    let spec = HammingSpec::new(d, n)?;
    check_coupling(g)?;
    let k = half_cut_level(d);
    let mut modes = Vec::new();
    for block in block_multiplicities(d, n)? {
        let first = block.stratum(0);
        if k <= first || k > first + block.d_prime {
            continue;
        }
        let split = k - first;
        let reduced = if strict {
            if block.d_prime % 2 == 0 || 2 * split != block.d_prime + 1 {
                return Err(Error::ParityUndefined {
                    family: "halfhalf",
                    detail: alloc::format!(
                        "chain d'={} (m={}, offset {}) is cut after rung {}; the closed form needs odd d' cut at (d'+1)/2 (use the general reduction)",
                        block.d_prime,
                        block.m,
                        block.level_offset,
                        split
                    ),
                });
            }
            closed_form_reduction(spec, &block, split, g)?
        } else {
            reduce_chain(&block.potential_chain(spec, g), split)?
        };
        modes.push(GammaMode {
            gamma: gamma_scalar(reduced)?,
            degeneracy: to_degeneracy(block.multiplicity)?,
        });
    }
    Ok(merge_modes(modes))
}

/// `a11` and `a22` as continued fractions in `x = 1 + 2g·d(n-1)` with
/// `α_i = 2g((i-1+r)(n-2) - m)` and `ω_i = 4g²c²·i(d'-i+1)`, counted from
/// each end of the chain; `a12 = -2gc√(s(d'-s+1))` at cut `s`.
fn closed_form_reduction(spec: HammingSpec, block: &StratumBlock, split: usize, g: f64) -> Result<EffectiveTwoByTwo> {
    let n = spec.n();
    let dp = block.d_prime;
    let r = block.level_offset as f64;
    let m = block.m as f64;
    let c2 = (n - 1) as f64;
    let x = 1.0 + 2.0 * g * spec.degree() as f64;
    let alpha = |level: f64| 2.0 * g * ((level + r) * (n - 2) as f64 - m);
    let omega = |i: usize| 4.0 * g * g * c2 * (i * (dp - i + 1)) as f64;

    let alphas: Vec<f64> = (1..=split).map(|i| alpha((i - 1) as f64)).collect();
    let omegas: Vec<f64> = (1..split).map(omega).collect();
    let a11 = continued_fraction(x, &alphas, &omegas)?;

    let far = dp + 1 - split;
    let alphas: Vec<f64> = (1..=far).map(|i| alpha((dp + 1 - i) as f64)).collect();
    let omegas: Vec<f64> = (1..far).map(omega).collect();
    let a22 = continued_fraction(x, &alphas, &omegas)?;

    let a12 = -2.0 * g * libm::sqrt(c2) * libm::sqrt((split * (dp - split + 1)) as f64);
    Ok(EffectiveTwoByTwo { a11, a12, a22 })
}

/// Correlation spectrum of a stratum-defined bipartition, computed chain by
/// chain: each chain copy is split by the strata of its rungs and handed to
/// the direct `Γ` computation.
pub fn strata_split_gammas(d: usize, n: usize, g: f64, in_a: impl Fn(usize) -> bool) -> Result<GammaSpectrum> {
    let spec = HammingSpec::new(d, n)?;
    check_coupling(g)?;
    let mut modes = Vec::new();
    for block in block_multiplicities(d, n)? {
        let rungs = block.d_prime + 1;
        let side: Vec<usize> = (0..rungs).filter(|&t| in_a(block.stratum(t))).collect();
        if side.is_empty() || side.len() == rungs {
            continue;
        }
        let v = block.potential_chain(spec, g).to_matrix();
        let p = Bipartition::new(side, rungs)?;
        let degeneracy = to_degeneracy(block.multiplicity)?;
        for gamma in gamma_values(&v, &p)? {
            modes.push(GammaMode { gamma, degeneracy });
        }
    }
    GammaSpectrum::new(merge_modes(modes))
}

/// Even-versus-odd strata, as the printed closed forms. `γ_i` for
/// `i = 1..=⌈d/2⌉` has denominator
/// `√(1+2g(n(d-1) - 2(i-1)(n-2)))·√(1+2g(n(d-1) - (2i-1)(n-2)))` and numerator
/// `(2+4(i-1))g√(n-1)` for odd `d`, `4ig√(n-1)` for even `d`. Values are
/// returned unvalidated, one mode each.
pub fn evenodd_gammas(d: usize, n: usize, g: f64) -> Result<Vec<GammaMode>> {
    HammingSpec::new(d, n)?;
    check_coupling(g)?;
    let nf = n as f64;
    let c = libm::sqrt(nf - 1.0);
    let base = nf * (d as f64 - 1.0);
    let count = d.div_ceil(2);
    Ok((1..=count)
        .map(|i| {
            let i_f = i as f64;
            let numerator = if d % 2 == 1 { 2.0 + 4.0 * (i_f - 1.0) } else { 4.0 * i_f };
            let left = 1.0 + 2.0 * g * (base - 2.0 * (i_f - 1.0) * (nf - 2.0));
            let right = 1.0 + 2.0 * g * (base - (2.0 * i_f - 1.0) * (nf - 2.0));
            GammaMode {
                gamma: numerator * g * c / (libm::sqrt(left) * libm::sqrt(right)),
                degeneracy: 1,
            }
        })
        .collect())
}

/// Leading-digit halves, as the printed closed forms: `γ_k = ng/(1+(2k-1)ng)`
/// for even `n`, `γ_k = √((n+1)(n-1))·g / (√(1+((2k-1)n+1)g)·√(1+((2k-1)n-1)g))`
/// for odd `n`, `k = 1..=d`. Degeneracies follow the printed list: `1` then
/// `n^{d-1} - 1` for `d = 2`, and `1, (d-1)(n-1), (d-2)(n-1)², …, (n-1)^{d-1}`
/// for `d >= 3`.
pub fn adjacency_halves_gammas(d: usize, n: usize, g: f64) -> Result<Vec<GammaMode>> {
    HammingSpec::new(d, n)?;
    check_coupling(g)?;
    let nf = n as f64;
    Ok((1..=d)
        .map(|k| {
            let odd = (2 * k - 1) as f64;
            let gamma = if n % 2 == 0 {
                nf * g / (1.0 + odd * nf * g)
            } else {
                libm::sqrt((nf + 1.0) * (nf - 1.0)) * g
                    / (libm::sqrt(1.0 + (odd * nf + 1.0) * g) * libm::sqrt(1.0 + (odd * nf - 1.0) * g))
            };
            GammaMode {
                gamma,
                degeneracy: printed_adjhalves_degeneracy(d, n, k),
            }
        })
        .collect())
}

fn printed_adjhalves_degeneracy(d: usize, n: usize, k: usize) -> usize {
    if k == 1 {
        1
    } else if d == 2 {
        n.pow((d - 1) as u32) - 1
    } else {
        (d - k + 1) * (n - 1).pow((k - 1) as u32)
    }
}

/// Multiplicity of `γ_k` in the leading-digit split as found by the direct
/// computation: `C(d-1, k-1)(n-1)^{k-1}`.
pub fn adjacency_halves_degeneracy(d: usize, n: usize, k: usize) -> u128 {
    if k == 0 || k > d {
        return 0;
    }
    binomial(d - 1, k - 1) * ((n - 1) as u128).pow((k - 1) as u32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Strata `0..⌊d/2⌋` against the rest.
    HalfHalf,
    /// Even strata against odd strata.
    EvenOdd,
    /// Leading digit below `⌈n/2⌉` against the rest.
    AdjHalves,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::HalfHalf => "halfhalf",
            Family::EvenOdd => "evenodd",
            Family::AdjHalves => "adjhalves",
        }
    }

    pub fn bipartition(&self, spec: HammingSpec) -> Result<Bipartition> {
        match self {
            Family::HalfHalf => first_half_strata(spec),
            Family::EvenOdd => even_odd_strata(spec),
            Family::AdjHalves => leading_digit_halves(spec),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "halfhalf" => Ok(Family::HalfHalf),
            "evenodd" => Ok(Family::EvenOdd),
            "adjhalves" => Ok(Family::AdjHalves),
            other => Err(Error::InvalidArgument(alloc::format!(
                "unknown family {other:?} (expected halfhalf, evenodd or adjhalves)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMode {
    pub gamma: f64,
    pub degeneracy: usize,
    /// `None` when `|γ| >= 1` or `γ` is not a number.
    pub entropy: Option<f64>,
    /// How many direct singular values lie within the agreement tolerance
    /// of `|γ|`.
    pub oracle_degeneracy: usize,
}

/// A closed-form spectrum set against the direct computation on the same
/// vertex bipartition (exponent `M = V`).
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub g: f64,
    /// True when the closed form was replaced by chain-wise reduction.
    pub general: bool,
    pub modes: Vec<FamilyMode>,
    /// `Σ degeneracy · S(γ)` over `modes`, if every mode is admissible.
    pub entropy: Option<f64>,
    /// Chain-by-chain entropy of the same split, where the split is by strata.
    pub derived_entropy: Option<f64>,
    pub oracle_entropy: f64,
    pub agreement: bool,
    pub abs_diff: Option<f64>,
    pub notes: Vec<String>,
}

/// Evaluates `family` on `H(d, n)` and compares it with the direct `Γ`
/// computation. `general` selects the parity-free chain reduction for
/// `HalfHalf` and is ignored otherwise.
pub fn verify_family(family: Family, d: usize, n: usize, g: f64, general: bool) -> Result<FamilyReport> {
    verify_family_with_tol(family, d, n, g, general, AGREEMENT_TOL)
}

/// [`verify_family`] with a caller-chosen agreement tolerance, also used to
/// match closed-form modes against direct singular values.
pub fn verify_family_with_tol(
    family: Family,
    d: usize,
    n: usize,
    g: f64,
    general: bool,
    tol: f64,
) -> Result<FamilyReport> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!(
            "tolerance {tol} must be positive"
        )));
    }
    let spec = HammingSpec::new(d, n)?;
    check_coupling(g)?;
    let (raw_modes, derived_entropy, mut notes) = match family {
        Family::HalfHalf => {
            let spectrum = if general {
                halfhalf_gammas_general(d, n, g)?
            } else {
                halfhalf_gammas(d, n, g)?
            };
            let total = spectrum.total_entropy(crate::gaussian::LogBase::Two)?;
            (spectrum.modes().to_vec(), Some(total), Vec::new())
        }
        Family::EvenOdd => {
            let derived = strata_split_gammas(d, n, g, |s| s % 2 == 0)?;
            let total = derived.total_entropy(crate::gaussian::LogBase::Two)?;
            (evenodd_gammas(d, n, g)?, Some(total), Vec::new())
        }
        Family::AdjHalves => (adjacency_halves_gammas(d, n, g)?, None, Vec::new()),
    };

    let v = potential_matrix(&build_hamming(spec)?, g)?;
    let p = family.bipartition(spec)?;
    let oracle = gamma_values(&v, &p)?;
    let mut oracle_entropy = 0.0;
    for &x in &oracle {
        oracle_entropy += entropy_from_gamma(x, crate::gaussian::LogBase::Two)?;
    }

    let mut modes = Vec::with_capacity(raw_modes.len());
    let mut entropy = Some(0.0);
    for m in raw_modes {
        let s = entropy_from_gamma(m.gamma, crate::gaussian::LogBase::Two).ok();
        entropy = match (entropy, s) {
            (Some(total), Some(s)) => Some(total + m.degeneracy as f64 * s),
            _ => None,
        };
        let oracle_degeneracy = oracle.iter().filter(|&&o| (o - m.gamma.abs()).abs() <= tol).count();
        modes.push(FamilyMode {
            gamma: m.gamma,
            degeneracy: m.degeneracy,
            entropy: s,
            oracle_degeneracy,
        });
    }

    let abs_diff = entropy.map(|e| (e - oracle_entropy).abs());
    let agreement = abs_diff.is_some_and(|x| x <= tol);
    match abs_diff {
        None => notes.push(String::from(
            "some closed-form gamma has |gamma| >= 1; entropy undefined",
        )),
        Some(diff) if !agreement => notes.push(alloc::format!(
            "closed-form entropy differs from the direct computation by {diff:e}"
        )),
        _ => {}
    }
    if let Some(derived) = derived_entropy {
        let diff = (derived - oracle_entropy).abs();
        if diff > tol {
            notes.push(alloc::format!(
                "chain-wise entropy differs from the direct computation by {diff:e}"
            ));
        }
    }
    if g > 0.0 {
        for (i, m) in modes.iter().enumerate() {
            if m.oracle_degeneracy != m.degeneracy {
                notes.push(alloc::format!(
                    "mode {}: gamma {} listed with degeneracy {}, direct computation has {}",
                    i + 1,
                    m.gamma,
                    m.degeneracy,
                    m.oracle_degeneracy
                ));
            }
        }
    }
    if family == Family::HalfHalf && general {
        notes.push(String::from("general chain reduction (no parity restriction)"));
    }
    Ok(FamilyReport {
        family,
        d,
        n,
        g,
        general: general && family == Family::HalfHalf,
        modes,
        entropy,
        derived_entropy,
        oracle_entropy,
        agreement,
        abs_diff,
        notes,
    })
}

/// `|φ̃_{m,k}|² = Σ_{|S|=m} |Σ_{i∈S} e^{2πi·k·i/d}|²` next to the value
/// `d(d-2)(d-3)…(d-m)/(m-1)!` it should equal for `k ≢ 0 (mod d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierNormCheck {
    pub m: usize,
    pub k: usize,
    pub norm_squared: f64,
    /// `None` where the product vanishes (`m = d`).
    pub stated: Option<f64>,
}

impl FourierNormCheck {
    /// `norm_squared / stated`, which should be 1.
    pub fn normalized(&self) -> Option<f64> {
        self.stated.map(|s| self.norm_squared / s)
    }
}

/// Checks every `1 <= m <= d`, `1 <= k < d`.
pub fn fourier_stratum_norms(d: usize) -> Result<Vec<FourierNormCheck>> {
    if !(2..=20).contains(&d) {
        return Err(Error::InvalidArgument(alloc::format!("d = {d} outside 2..=20")));
    }
    let mut out = Vec::new();
    for m in 1..=d {
        let mut product = d as f64;
        for j in 2..=m {
            product *= d as f64 - j as f64;
        }
        let factorial: f64 = (1..m).map(|j| j as f64).product();
        let stated = if d > m { Some(product / factorial) } else { None };
        for k in 1..d {
            let mut norm_squared = 0.0;
            for subset in (0..d).combinations(m) {
                let (mut re, mut im) = (0.0, 0.0);
                for &i in &subset {
                    let phase = 2.0 * PI * (k * (i + 1)) as f64 / d as f64;
                    re += libm::cos(phase);
                    im += libm::sin(phase);
                }
                norm_squared += re * re + im * im;
            }
            out.push(FourierNormCheck {
                m,
                k,
                norm_squared,
                stated,
            });
        }
    }
    Ok(out)
}

impl fmt::Display for StratumBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d'={} m={} offset={} x{}",
            self.d_prime, self.m, self.level_offset, self.multiplicity
        )
    }
}
