//! Graph construction: Hamming schemes, arbitrary edge lists, Laplacians and
//! potential matrices, plus brute-force association-scheme verification.
//!
//! Vertices of a Hamming graph `H(d, n)` are the length-`d` strings over the
//! alphabet `0..n`, indexed in mixed-radix order with digit 0 the most
//! significant: vertex `v` has digits `v / n^(d-1) % n, ..., v % n`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result, SchemeViolation};
use crate::matrix::SymmetricMatrix;

/// Default cap on dense matrix entries (`N^2`), enough for `n^d = 4096`.
pub const DEFAULT_MAX_ENTRIES: u128 = 1 << 24;

/// Parameters `(d, n)` of the Hamming scheme `H(d, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HammingSpec {
    d: usize,
    n: usize,
}

impl HammingSpec {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n < 2 {
            return Err(Error::InvalidHamming { d, n });
        }
        Ok(HammingSpec { d, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n^d`, or `None` on overflow.
    pub fn vertex_count(&self) -> Option<usize> {
        let d = u32::try_from(self.d).ok()?;
        self.n.checked_pow(d)
    }

    pub fn degree(&self) -> usize {
        self.d * (self.n - 1)
    }

    /// Base-`n` digits of `v`, most significant first.
    pub fn digits(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for slot in out.iter_mut().rev() {
            *slot = v % self.n;
            v /= self.n;
        }
        out
    }

    /// Number of digit positions in which `u` and `v` differ.
    pub fn distance(&self, mut u: usize, mut v: usize) -> usize {
        let mut dist = 0;
        for _ in 0..self.d {
            if u % self.n != v % self.n {
                dist += 1;
            }
            u /= self.n;
            v /= self.n;
        }
        dist
    }

    /// Valency `C(d,k) (n-1)^k` of the distance-`k` relation.
    pub fn valency(&self, k: usize) -> u128 {
        binomial(self.d, k) * (self.n as u128 - 1).pow(k as u32)
    }

    /// Closed-form adjacency spectrum: `d(n-1) - n k` with multiplicity
    /// `C(d,k) (n-1)^k`, for `k = 0..=d`.
    pub fn adjacency_spectrum(&self) -> Vec<(f64, u128)> {
        (0..=self.d)
            .map(|k| {
                let value = self.degree() as f64 - (self.n * k) as f64;
                (value, self.valency(k))
            })
            .collect()
    }

    fn checked_size(&self, limit: u128) -> Result<usize> {
        let too_big = Error::CapacityExceeded {
            requested: u128::MAX,
            limit,
        };
        let count = self.vertex_count().ok_or(too_big)?;
        let entries = (count as u128) * (count as u128);
        if entries > limit {
            return Err(Error::CapacityExceeded {
                requested: entries,
                limit,
            });
        }
        Ok(count)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Distance-1 adjacency `A_1` of `H(d, n)`.
pub fn build_hamming(spec: HammingSpec) -> Result<SymmetricMatrix> {
    build_distance_k(spec, 1)
}

pub fn build_hamming_with_limit(spec: HammingSpec, max_entries: u128) -> Result<SymmetricMatrix> {
    build_distance_k_with_limit(spec, 1, max_entries)
}

/// Adjacency of the relation "strings differ in exactly `k` digits".
pub fn build_distance_k(spec: HammingSpec, k: usize) -> Result<SymmetricMatrix> {
    build_distance_k_with_limit(spec, k, DEFAULT_MAX_ENTRIES)
}

pub fn build_distance_k_with_limit(spec: HammingSpec, k: usize, max_entries: u128) -> Result<SymmetricMatrix> {
    if k > spec.d {
        return Err(Error::DistanceOutOfRange { k, d: spec.d });
    }
    let count = spec.checked_size(max_entries)?;
    Ok(SymmetricMatrix::from_fn(count, |u, v| {
        if spec.distance(u, v) == k {
            1.0
        } else {
            0.0
        }
    }))
}

/// All distance relations `A_0, ..., A_d` of `H(d, n)`.
pub fn distance_relations(spec: HammingSpec) -> Result<Vec<SymmetricMatrix>> {
    (0..=spec.d).map(|k| build_distance_k(spec, k)).collect()
}

/// Distance relations of an arbitrary connected graph, by breadth-first
/// search from every vertex. `A_0 = I`, `A_k` joins vertices at distance `k`.
pub fn graph_distance_relations(a: &SymmetricMatrix) -> Result<Vec<SymmetricMatrix>> {
    check_adjacency(a)?;
    let n = a.dim();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| a.get(u, v) != 0.0).collect())
        .collect();
    let mut dist = vec![usize::MAX; n * n];
    let mut queue = alloc::collections::VecDeque::new();
    for s in 0..n {
        dist[s * n + s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbours[u] {
                if dist[s * n + v] == usize::MAX {
                    dist[s * n + v] = dist[s * n + u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if let Some(v) = (0..n).find(|&v| dist[s * n + v] == usize::MAX) {
            return Err(Error::NotAdjacency(alloc::format!(
                "graph is disconnected: no path from {s} to {v}"
            )));
        }
    }
    let diameter = dist.iter().copied().max().unwrap_or(0);
    Ok((0..=diameter)
        .map(|k| SymmetricMatrix::from_fn(n, |u, v| if dist[u * n + v] == k { 1.0 } else { 0.0 }))
        .collect())
}

/// Simple undirected graph from an edge list. Duplicate edges are ignored.
pub fn build_from_edges(num_vertices: usize, edges: &[(usize, usize)]) -> Result<SymmetricMatrix> {
    let mut a = nalgebra::DMatrix::<f64>::zeros(num_vertices, num_vertices);
    for &(u, v) in edges {
        for w in [u, v] {
            if w >= num_vertices {
                return Err(Error::VertexOutOfRange {
                    index: w,
                    count: num_vertices,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    SymmetricMatrix::try_from_dmatrix(a)
}

fn check_adjacency(a: &SymmetricMatrix) -> Result<()> {
    for i in 0..a.dim() {
        if a.get(i, i) != 0.0 {
            return Err(Error::NotAdjacency(alloc::format!("nonzero diagonal at {i}")));
        }
        for j in (i + 1)..a.dim() {
            let x = a.get(i, j);
            if x != 0.0 && x != 1.0 {
                return Err(Error::NotAdjacency(alloc::format!("entry ({i}, {j}) = {x} is not 0/1")));
            }
        }
    }
    Ok(())
}

/// `L = D - A` with `D` the degree diagonal.
pub fn laplacian(a: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    check_adjacency(a)?;
    let degrees = a.row_sums();
    Ok(SymmetricMatrix::from_fn(a.dim(), |i, j| {
        if i == j {
            degrees[i]
        } else {
            -a.get(i, j)
        }
    }))
}

/// Potential matrix `V = I + 2 g L`, i.e. `V_ij = (1 + 2 g k_i) δ_ij - 2 g A_ij`.
pub fn potential_matrix(a: &SymmetricMatrix, g: f64) -> Result<SymmetricMatrix> {
    if !(g >= 0.0) || !g.is_finite() {
        return Err(Error::InvalidCoupling(g));
    }
    let l = laplacian(a)?;
    Ok(SymmetricMatrix::from_fn(a.dim(), |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id + 2.0 * g * l.get(i, j)
    }))
}

/// Number of edges of `a` (sum of the upper triangle).
pub fn edge_count(a: &SymmetricMatrix) -> usize {
    let mut count = 0;
    for i in 0..a.dim() {
        for j in (i + 1)..a.dim() {
            if a.get(i, j) != 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Intersection numbers `p^k_{ij}` of an association scheme with
/// `class_count` relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeTensor {
    class_count: usize,
    p: Vec<u64>,
}

impl SchemeTensor {
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn p(&self, k: usize, i: usize, j: usize) -> u64 {
        let c = self.class_count;
        self.p[(k * c + i) * c + j]
    }

    /// `κ_i = p^0_{ii}`.
    pub fn valency(&self, i: usize) -> u64 {
        self.p(0, i, i)
    }

    pub fn is_commutative(&self) -> bool {
        let c = self.class_count;
        (0..c).all(|k| (0..c).all(|i| (0..c).all(|j| self.p(k, i, j) == self.p(k, j, i))))
    }
}

/// Checks the association-scheme axioms by brute force and returns the
/// intersection numbers.
///
/// For every ordered pair `(α, β)` in relation `k`, the counts
/// `#{γ : (α,γ) ∈ R_i, (γ,β) ∈ R_j}` must agree with those of every other pair
/// in `R_k`. Cost is `O(N^3)`.
pub fn verify_scheme(relations: &[SymmetricMatrix]) -> Result<SchemeTensor> {
    let c = relations.len();
    if c == 0 {
        return Err(SchemeViolation::Empty.into());
    }
    let n = relations[0].dim();
    if c > u8::MAX as usize {
        return Err(Error::InvalidArgument(alloc::format!(
            "{c} relations; at most 255 supported"
        )));
    }
    for (index, r) in relations.iter().enumerate() {
        if r.dim() != n {
            return Err(SchemeViolation::DimensionMismatch {
                index,
                expected: n,
                found: r.dim(),
            }
            .into());
        }
    }

    // Relation index per ordered pair, validating 0/1 entries and the
    // partition property on the way.
    let mut rel = vec![0u8; n * n];
    for row in 0..n {
        for col in 0..n {
            let mut count = 0;
            for (index, r) in relations.iter().enumerate() {
                let x = r.get(row, col);
                if x == 1.0 {
                    count += 1;
                    rel[row * n + col] = index as u8;
                } else if x != 0.0 {
                    return Err(SchemeViolation::NotBinary { index, row, col }.into());
                }
            }
            if count != 1 {
                return Err(SchemeViolation::NotPartition { row, col, count }.into());
            }
        }
    }
    for row in 0..n {
        for col in 0..n {
            if (rel[row * n + col] == 0) != (row == col) {
                return Err(SchemeViolation::FirstNotIdentity.into());
            }
        }
    }
    let mut seen = vec![false; c];
    for &r in &rel {
        seen[r as usize] = true;
    }
    if let Some(index) = seen.iter().position(|s| !s) {
        return Err(SchemeViolation::EmptyRelation { index }.into());
    }

    let mut p: Vec<Option<Vec<u64>>> = vec![None; c];
    let mut table = vec![0u64; c * c];
    for alpha in 0..n {
        let row_a = &rel[alpha * n..(alpha + 1) * n];
        for beta in 0..n {
            // rel is symmetric, so row beta doubles as column beta.
            let row_b = &rel[beta * n..(beta + 1) * n];
            table.iter_mut().for_each(|t| *t = 0);
            for (&i, &j) in row_a.iter().zip(row_b) {
                table[i as usize * c + j as usize] += 1;
            }
            let k = row_a[beta] as usize;
            match &p[k] {
                None => p[k] = Some(table.clone()),
                Some(first) => {
                    if let Some(pos) = (0..c * c).find(|&x| first[x] != table[x]) {
                        return Err(SchemeViolation::IntersectionNotConstant {
                            i: pos / c,
                            j: pos % c,
                            k,
                            first: first[pos],
                            other: table[pos],
                            row: alpha,
                            col: beta,
                        }
                        .into());
                    }
                }
            }
        }
    }
    let p = p.into_iter().flat_map(|t| t.unwrap_or_default()).collect();
    Ok(SchemeTensor { class_count: c, p })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(d: usize, n: usize) -> HammingSpec {
        HammingSpec::new(d, n).unwrap()
    }

    #[test]
    fn single_edge() {
        let a = build_hamming(h(1, 2)).unwrap();
        assert_eq!(a.to_row_major(), vec![0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn h23_rows_sum_to_degree() {
        let a = build_hamming(h(2, 3)).unwrap();
        assert_eq!(a.dim(), 9);
        assert!(a.row_sums().iter().all(|&s| s == 4.0));
        // 00 is adjacent to 01, 02, 10, 20.
        let nbrs: Vec<usize> = (0..9).filter(|&v| a.get(0, v) == 1.0).collect();
        assert_eq!(nbrs, vec![1, 2, 3, 6]);
    }

    #[test]
    fn distance_relations_partition_all_pairs() {
        let spec = h(2, 3);
        assert_eq!(build_distance_k(spec, 0).unwrap(), SymmetricMatrix::identity(9));
        let a2 = build_distance_k(spec, 2).unwrap();
        assert!(a2.row_sums().iter().all(|&s| s == 4.0));
        let rels = distance_relations(spec).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let total: f64 = rels.iter().map(|r| r.get(i, j)).sum();
                assert_eq!(total, 1.0);
            }
        }
        assert_eq!(
            build_distance_k(spec, 3).unwrap_err(),
            Error::DistanceOutOfRange { k: 3, d: 2 }
        );
    }

    #[test]
    fn capacity_limit_is_enforced() {
        let err = build_hamming_with_limit(h(4, 3), 100).unwrap_err();
        assert!(matches!(
            err,
            Error::CapacityExceeded {
                requested: 6561,
                limit: 100
            }
        ));
        assert!(build_hamming(h(64, 2)).is_err());
    }

    #[test]
    fn invalid_hamming_params() {
        assert!(HammingSpec::new(0, 3).is_err());
        assert!(HammingSpec::new(2, 1).is_err());
    }

    #[test]
    fn edge_lists() {
        let a = build_from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(a.to_row_major(), vec![0.0, 1.0, 1.0, 0.0]);
        assert_eq!(build_from_edges(3, &[]).unwrap(), SymmetricMatrix::zeros(3));
        let c4 = build_from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 0)]).unwrap();
        assert!(c4.row_sums().iter().all(|&s| s == 2.0));
        assert_eq!(
            build_from_edges(3, &[(1, 1)]).unwrap_err(),
            Error::SelfLoop { vertex: 1 }
        );
        assert_eq!(
            build_from_edges(3, &[(0, 3)]).unwrap_err(),
            Error::VertexOutOfRange { index: 3, count: 3 }
        );
    }

    #[test]
    fn potential_of_single_edge() {
        let a = build_hamming(h(1, 2)).unwrap();
        let v = potential_matrix(&a, 1.0).unwrap();
        assert_eq!(v.to_row_major(), vec![3.0, -2.0, -2.0, 3.0]);
        assert_eq!(potential_matrix(&a, 0.0).unwrap(), SymmetricMatrix::identity(2));
        assert_eq!(potential_matrix(&a, -0.5).unwrap_err(), Error::InvalidCoupling(-0.5));
    }

    #[test]
    fn potential_diagonal_of_h23() {
        let v = potential_matrix(&build_hamming(h(2, 3)).unwrap(), 1.0).unwrap();
        assert!((0..9).all(|i| v.get(i, i) == 9.0));
    }

    #[test]
    fn potential_rejects_weighted_graph() {
        let w = SymmetricMatrix::from_fn(2, |i, j| if i == j { 0.0 } else { 0.5 });
        assert!(matches!(potential_matrix(&w, 1.0), Err(Error::NotAdjacency(_))));
    }

    #[test]
    fn scheme_of_square() {
        let t = verify_scheme(&distance_relations(h(2, 2)).unwrap()).unwrap();
        assert_eq!(t.valency(1), 2);
        assert_eq!(t.p(0, 1, 1), 2);
        assert!(t.is_commutative());
    }

    #[test]
    fn scheme_violations_are_named() {
        assert_eq!(
            verify_scheme(&[]).unwrap_err(),
            Error::NotAssociationScheme(SchemeViolation::Empty)
        );
        // Identity alone on two vertices leaves off-diagonal pairs uncovered.
        let err = verify_scheme(&[SymmetricMatrix::identity(2)]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAssociationScheme(SchemeViolation::NotPartition {
                row: 0,
                col: 1,
                count: 0
            })
        ));
        // Path 0-1-2: the complement relation is not regular.
        let a1 = build_from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let a2 = build_from_edges(3, &[(0, 2)]).unwrap();
        let err = verify_scheme(&[SymmetricMatrix::identity(3), a1, a2]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotAssociationScheme(SchemeViolation::IntersectionNotConstant { .. })
        ));
    }

    #[test]
    fn bfs_relations_match_hamming_relations() {
        let a = build_hamming(h(2, 3)).unwrap();
        assert_eq!(
            graph_distance_relations(&a).unwrap(),
            distance_relations(h(2, 3)).unwrap()
        );
        let split = build_from_edges(3, &[(0, 1)]).unwrap();
        assert!(graph_distance_relations(&split).is_err());
    }
}
