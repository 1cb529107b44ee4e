//! Randomization overlap `L(rho_G^p) = <G| rho_G^p |G>`, its truncations,
//! the projector GME witness `1/2 - L` and bisection thresholds.
//!
//! A spanning subgraph `F` contributes `|<G|F>|^2 = |<G_empty|G xor F>|^2`,
//! and `G xor F` is just the set of removed edges. The overlap therefore only
//! needs, for each removal count `k`, the sum `S_k` of squared empty-graph
//! overlaps over all `k`-edge subsets of `E_G`:
//!
//! `L = sum_k p^(|E|-k) (1-p)^k S_k`.
//!
//! [`RemovalProfile`] holds those sums so sweeps and bisections reuse them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::graph::Graph;
use crate::state::empty_overlap;
use crate::{check_probability, Error, Result};

/// Largest edge count for the exact (untruncated) overlap.
pub const MAX_EXACT_EDGES: usize = 24;
/// Largest number of removed-edge subsets enumerated for a truncation.
pub const MAX_TRUNCATED_TERMS: u64 = 1 << 26;
/// Default bisection tolerance on `p`.
pub const DEFAULT_THRESHOLD_TOL: f64 = 1e-9;
/// Default bracket, the domain on which the truncated overlaps are monotone.
pub const DEFAULT_BRACKET: (f64, f64) = (0.5, 1.0);

const CHUNK_BITS: u32 = 14;

/// Exact overlap, or the truncation to subgraphs missing at most `l` edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Exact,
    Truncated(usize),
}

impl Level {
    /// Highest removal count included for a graph with `edges` edges.
    pub fn max_removed(&self, edges: usize) -> Result<usize> {
        match *self {
            Level::Exact => Ok(edges),
            Level::Truncated(l) if l <= edges => Ok(l),
            Level::Truncated(l) => Err(Error::InvalidLevel { level: l, edges }),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Exact => f.write_str("exact"),
            Level::Truncated(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(Level::Exact),
            other => other
                .parse()
                .map(Level::Truncated)
                .map_err(|_| Error::InvalidArgument(format!("level `{s}` is neither `exact` nor an integer"))),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Sums `S_k` of squared overlaps over removed-edge subsets of size `k`,
/// for `k = 0..=max_removed`.
#[derive(Clone, Debug, PartialEq)]
pub struct RemovalProfile {
    edges: usize,
    sums: Vec<f64>,
}

impl RemovalProfile {
    pub fn new(graph: &Graph, level: Level) -> Result<Self> {
        let edges = graph.edge_count();
        let max_removed = level.max_removed(edges)?;
        let sums = if max_removed == edges {
            if edges > MAX_EXACT_EDGES {
                return Err(Error::TooLarge {
                    what: "edge count for the exact overlap",
                    value: edges,
                    limit: MAX_EXACT_EDGES,
                });
            }
            full_profile(graph)?
        } else {
            truncated_profile(graph, max_removed)?
        };
        Ok(Self { edges, sums })
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn overlap(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        self.sums
            .iter()
            .enumerate()
            .map(|(k, s)| {
                if *s == 0.0 {
                    0.0
                } else {
                    s * p.powi((self.edges - k) as i32) * q.powi(k as i32)
                }
            })
            .sum()
    }
}

fn squared_removed_overlap(graph: &Graph, bits: u64) -> Result<f64> {
    let ov = empty_overlap(&graph.subgraph_bits(bits))?;
    Ok(ov * ov)
}

fn full_profile(graph: &Graph) -> Result<Vec<f64>> {
    let edges = graph.edge_count();
    let total = 1u64 << edges;
    let chunk = 1u64 << CHUNK_BITS.min(edges as u32);
    // fixed chunking keeps the floating-point summation order reproducible
    let partials = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut sums = vec![0.0; edges + 1];
            for bits in c * chunk..(c + 1) * chunk {
                sums[bits.count_ones() as usize] += squared_removed_overlap(graph, bits)?;
            }
            Ok(sums)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![0.0; edges + 1];
    for part in partials {
        for (acc, v) in sums.iter_mut().zip(part) {
            *acc += v;
        }
    }
    Ok(sums)
}

fn truncated_profile(graph: &Graph, max_removed: usize) -> Result<Vec<f64>> {
    let edges = graph.edge_count();
    let terms: u64 = (0..=max_removed).map(|k| binomial(edges, k)).sum();
    if terms > MAX_TRUNCATED_TERMS {
        return Err(Error::TooLarge {
            what: "number of removed-edge subsets",
            value: terms as usize,
            limit: MAX_TRUNCATED_TERMS as usize,
        });
    }
    (0..=max_removed)
        .map(|k| {
            let masks: Vec<u64> = KSubsets::new(edges, k).collect();
            let parts = masks
                .par_chunks(1 << CHUNK_BITS)
                .map(|chunk| {
                    chunk
                        .iter()
                        .map(|&bits| squared_removed_overlap(graph, bits))
                        .sum::<Result<f64>>()
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(parts.into_iter().sum())
        })
        .collect()
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All `width`-bit masks with exactly `k` bits set, in increasing order.
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl KSubsets {
    pub fn new(width: usize, k: usize) -> Self {
        let next = (k <= width).then(|| crate::graph::low_bits(k));
        let limit = if width >= 64 { u64::MAX } else { 1u64 << width };
        Self { next, limit }
    }
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let current = self.next?;
        if current == 0 {
            self.next = None;
            return Some(0);
        }
        if current >= self.limit && self.limit != u64::MAX {
            self.next = None;
            return None;
        }
        // Gosper's hack
        let c = current & current.wrapping_neg();
        let r = current.wrapping_add(c);
        self.next = if r == 0 {
            None
        } else {
            Some((((r ^ current) >> 2) / c) | r)
        };
        Some(current)
    }
}

/// `L(rho_G^p) = Tr[|G><G| rho_G^p]`, summed over all spanning subgraphs.
pub fn randomization_overlap(graph: &Graph, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(RemovalProfile::new(graph, Level::Exact)?.overlap(p))
}

/// The overlap restricted to subgraphs missing at most `l` edges of `G`.
pub fn approx_overlap(graph: &Graph, p: f64, l: usize) -> Result<f64> {
    check_probability(p)?;
    Ok(RemovalProfile::new(graph, Level::Truncated(l))?.overlap(p))
}

/// Two-level truncation in closed form from the degree sequence.
///
/// One removed edge contributes `1/4`, two removed edges sharing a vertex
/// `1/4`, two disjoint removed edges `1/16`. Terms needing more edges than
/// the graph has are dropped.
pub fn approx_overlap_2level(graph: &Graph, p: f64) -> Result<f64> {
    check_probability(p)?;
    let counts = graph.class_counts();
    let m = graph.edge_count() as i32;
    let q = 1.0 - p;
    let mut value = p.powi(m);
    if m >= 1 {
        value += 0.25 * q * p.powi(m - 1) * counts.single as f64;
    }
    if m >= 2 {
        let pairs = (m as f64) * (m as f64 - 1.0) / 2.0;
        value += q * q * p.powi(m - 2) * (pairs + 3.0 * counts.star_pairs as f64) / 16.0;
    }
    Ok(value)
}

/// Closed-form overlap of the randomized star on `n` vertices.
pub fn overlap_star_closed(n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            family: "star",
            detail: format!("closed form needs n >= 2, got {n}"),
        });
    }
    Ok(0.25 + 0.75 * p.powi(n as i32 - 1))
}

/// Closed-form overlap of the randomized linear cluster on `n` vertices.
///
/// Solves `L_{n+1} = p L_n + (1-p)/4 L_{n-1}` with roots
/// `(p +- sqrt(lambda))/2`, `lambda = 1 - p + p^2`.
pub fn overlap_linear_closed(n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            family: "path",
            detail: format!("closed form needs n >= 2, got {n}"),
        });
    }
    let s = (1.0 - p + p * p).sqrt();
    let plus = (p + s) / 2.0;
    let minus = (p - s) / 2.0;
    let a = (1.0 - p / 2.0 + s / 2.0) / s;
    let b = (1.0 - p / 2.0 - s / 2.0) / s;
    Ok(a * plus.powi(n as i32) - b * minus.powi(n as i32))
}

/// The same linear-cluster overlap from the even/odd recursion on the
/// parity of the path attached to the last vertex.
pub fn overlap_linear_recursion(n: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::SizeOutOfRange {
            family: "path",
            detail: format!("recursion starts at n = 2, got {n}"),
        });
    }
    let (mut even, mut odd) = (p, (1.0 - p) / 4.0);
    for _ in 2..n {
        (even, odd) = (odd + p * even, (1.0 - p) / 4.0 * even);
    }
    Ok(even + odd)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEvaluation {
    pub graph_spec: String,
    pub p: f64,
    pub level: Level,
    pub overlap_value: f64,
    pub witness_value: f64,
    pub constant_term: f64,
}

impl WitnessEvaluation {
    fn new(graph: &Graph, p: f64, level: Level, overlap: f64, constant: f64) -> Self {
        Self {
            graph_spec: graph.to_json(),
            p,
            level,
            overlap_value: overlap,
            witness_value: constant - overlap,
            constant_term: constant,
        }
    }

    pub fn with_spec(mut self, spec: impl Into<String>) -> Self {
        self.graph_spec = spec.into();
        self
    }
}

/// Expectation of `W_G = 1/2 - |G><G|` (exact) or its truncated version.
/// A negative value certifies genuine multipartite entanglement.
pub fn gme_witness_value(graph: &Graph, p: f64, level: Level) -> Result<WitnessEvaluation> {
    check_probability(p)?;
    let overlap = RemovalProfile::new(graph, level)?.overlap(p);
    Ok(WitnessEvaluation::new(graph, p, level, overlap, 0.5))
}

pub(crate) fn witness_with_constant(
    graph: &Graph,
    p: f64,
    level: Level,
    constant: f64,
) -> Result<WitnessEvaluation> {
    check_probability(p)?;
    let overlap = RemovalProfile::new(graph, level)?.overlap(p);
    Ok(WitnessEvaluation::new(graph, p, level, overlap, constant))
}

/// Bisection root of `f` on `[lo, hi]`.
///
/// Returns `None` when `f(lo)` and `f(hi)` have the same strict sign. The
/// reported root is the bracket midpoint once its width is below `tol`.
pub fn find_threshold<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<Option<f64>>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidBracket { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(Some(a));
    }
    if fb == 0.0 {
        return Ok(Some(b));
    }
    if (fa > 0.0) == (fb > 0.0) {
        return Ok(None);
    }
    let lo_positive = fa > 0.0;
    while b - a > tol {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(Some(mid));
        }
        if (fm > 0.0) == lo_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

/// Zero crossing of `constant - L_level(rho_G^p)` on `[lo, hi]`.
pub fn overlap_threshold(
    graph: &Graph,
    level: Level,
    constant: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<Option<f64>> {
    check_probability(bracket.0)?;
    check_probability(bracket.1)?;
    let profile = RemovalProfile::new(graph, level)?;
    find_threshold(|p| constant - profile.overlap(p), bracket.0, bracket.1, tol)
}

/// `p_w` for [`Level::Exact`], `p_F` for a truncation.
pub fn gme_threshold(graph: &Graph, level: Level, tol: f64) -> Result<Option<f64>> {
    overlap_threshold(graph, level, 0.5, DEFAULT_BRACKET, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(spec: &str) -> Graph {
        Graph::parse(spec).unwrap()
    }

    /// Direct sum over spanning subgraphs with explicit state vectors.
    fn brute_overlap(graph: &Graph, p: f64, max_removed: usize) -> f64 {
        use crate::state::GraphStateVector;
        let m = graph.edge_count();
        let full = GraphStateVector::new(graph).unwrap();
        (0u64..1 << m)
            .filter(|bits| m - bits.count_ones() as usize <= max_removed)
            .map(|bits| {
                let kept = bits.count_ones() as usize;
                let sub = GraphStateVector::new(&graph.subgraph_bits(bits)).unwrap();
                let amp = full.inner(&sub).unwrap();
                p.powi(kept as i32) * (1.0 - p).powi((m - kept) as i32) * amp * amp
            })
            .sum()
    }

    const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

    #[test]
    fn k_subsets() {
        let all: Vec<u64> = KSubsets::new(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.iter().all(|m| m.count_ones() == 2 && *m < 32));
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(KSubsets::new(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(KSubsets::new(4, 4).collect::<Vec<_>>(), vec![15]);
        assert_eq!(KSubsets::new(3, 4).count(), 0);
        assert_eq!(KSubsets::new(63, 2).count() as u64, binomial(63, 2));
        assert_eq!(KSubsets::new(64, 1).count(), 64);
    }

    #[test]
    fn overlap_at_extremes() {
        for spec in ["star:5", "path:6", "cycle:5", "complete:4", "grid:2x3"] {
            let graph = g(spec);
            assert_eq!(randomization_overlap(&graph, 1.0).unwrap(), 1.0);
            let empty = empty_overlap(&graph).unwrap();
            assert!((randomization_overlap(&graph, 0.0).unwrap() - empty * empty).abs() < 1e-15);
        }
    }

    #[test]
    fn overlap_matches_state_vector_sum() {
        for spec in ["star:4", "path:5", "cycle:5", "complete:4", "grid:2x3"] {
            let graph = g(spec);
            for p in GRID {
                let fast = randomization_overlap(&graph, p).unwrap();
                assert!((fast - brute_overlap(&graph, p, usize::MAX)).abs() < 1e-13, "{spec}");
                for l in 0..=graph.edge_count() {
                    let trunc = approx_overlap(&graph, p, l).unwrap();
                    assert!((trunc - brute_overlap(&graph, p, l)).abs() < 1e-13, "{spec} l={l}");
                }
            }
        }
    }

    #[test]
    fn star_closed_form() {
        assert_eq!(overlap_star_closed(3, 0.5).unwrap(), 0.4375);
        assert_eq!(overlap_star_closed(6, 1.0).unwrap(), 1.0);
        assert_eq!(overlap_star_closed(6, 0.0).unwrap(), 0.25);
        assert!(overlap_star_closed(1, 0.5).is_err());
        for n in 2..=10 {
            for p in GRID {
                let brute = randomization_overlap(&g(&format!("star:{n}")), p).unwrap();
                assert!((brute - overlap_star_closed(n, p).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_closed_form() {
        assert!((overlap_linear_closed(5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        for p in GRID {
            let two = overlap_linear_closed(2, p).unwrap();
            assert!((two - (p + (1.0 - p) / 4.0)).abs() < 1e-14);
        }
        let brute = randomization_overlap(&g("path:6"), 0.7).unwrap();
        assert!((overlap_linear_closed(6, 0.7).unwrap() - brute).abs() < 1e-12);
        for n in 2..=10 {
            for p in GRID {
                let rec = overlap_linear_recursion(n, p).unwrap();
                assert!((overlap_linear_closed(n, p).unwrap() - rec).abs() < 1e-12);
            }
        }
        assert!(overlap_linear_closed(1, 0.5).is_err());
    }

    #[test]
    fn two_level_closed_form() {
        let graph = g("complete:4");
        for p in GRID {
            let expected = p.powi(6)
                + 1.5 * (1.0 - p) * p.powi(5)
                + (1.0 - p).powi(2) * p.powi(4) * (12.0 / 4.0 + 3.0 / 16.0);
            let closed = approx_overlap_2level(&graph, p).unwrap();
            assert!((closed - expected).abs() < 1e-14);
            assert!((closed - approx_overlap(&graph, p, 2).unwrap()).abs() < 1e-12);
        }
        let star = g("star:4");
        assert!((approx_overlap_2level(&star, 0.6).unwrap() - approx_overlap(&star, 0.6, 2).unwrap()).abs() < 1e-12);
        assert_eq!(approx_overlap_2level(&graph, 1.0).unwrap(), 1.0);
        let single = g("path:2");
        assert!((approx_overlap_2level(&single, 0.3).unwrap() - randomization_overlap(&single, 0.3).unwrap()).abs() < 1e-15);
        assert_eq!(approx_overlap_2level(&g("empty:3"), 0.3).unwrap(), 1.0);
    }

    #[test]
    fn two_level_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let graph = Graph::random(6, 0.45, &mut rng).unwrap();
            if graph.edge_count() < 2 {
                continue;
            }
            for p in GRID {
                let closed = approx_overlap_2level(&graph, p).unwrap();
                assert!((closed - approx_overlap(&graph, p, 2).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_examples() {
        let c5 = g("cycle:5");
        let full = approx_overlap(&c5, 0.8, 5).unwrap();
        assert_eq!(full, randomization_overlap(&c5, 0.8).unwrap());
        assert!((approx_overlap(&c5, 0.8, 2).unwrap() - approx_overlap_2level(&c5, 0.8).unwrap()).abs() < 1e-12);
        for l in 0..=5 {
            assert_eq!(approx_overlap(&c5, 1.0, l).unwrap(), 1.0);
        }
        assert!(matches!(approx_overlap(&c5, 0.5, 6), Err(Error::InvalidLevel { level: 6, edges: 5 })));
        assert!(randomization_overlap(&c5, 1.2).is_err());
        assert!(randomization_overlap(&g("path:26"), 0.5).is_err());
        // large sparse graphs are fine when truncated
        let cube = g("grid3:3x3x3");
        assert!(approx_overlap(&cube, 0.9, 2).unwrap() > 0.0);
    }

    #[test]
    fn witness_values() {
        for n in 3..8 {
            let star = g(&format!("star:{n}"));
            for p in GRID {
                let eval = gme_witness_value(&star, p, Level::Exact).unwrap();
                let expected = 0.25 - 0.75 * p.powi(n as i32 - 1);
                assert!((eval.witness_value - expected).abs() < 1e-12);
                assert!((eval.witness_value - (eval.constant_term - eval.overlap_value)).abs() < 1e-12);
            }
        }
        let at_one = gme_witness_value(&g("cycle:6"), 1.0, Level::Exact).unwrap();
        assert_eq!(at_one.witness_value, -0.5);
        assert!(gme_witness_value(&g("path:4"), 0.9, Level::Exact).unwrap().witness_value < 0.0);
    }

    #[test]
    fn bisection() {
        let root = find_threshold(|x| x * x - 0.5, 0.0, 1.0, 1e-12).unwrap().unwrap();
        assert!((root - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(find_threshold(|x| x + 1.0, 0.5, 1.0, 1e-9).unwrap(), None);
        assert!(matches!(find_threshold(|x| x, 1.0, 0.5, 1e-9), Err(Error::InvalidBracket { .. })));
        assert!(matches!(find_threshold(|x| x, 0.5, 0.5, 1e-9), Err(Error::InvalidBracket { .. })));
        assert_eq!(find_threshold(|x| x - 0.5, 0.5, 1.0, 1e-9).unwrap(), Some(0.5));
    }

    #[test]
    fn star_thresholds() {
        for n in 3..=10 {
            let star = g(&format!("star:{n}"));
            let pw = gme_threshold(&star, Level::Exact, DEFAULT_THRESHOLD_TOL).unwrap().unwrap();
            let expected = 3f64.powf(-1.0 / (n as f64 - 1.0));
            assert!((pw - expected).abs() < 1e-9, "n={n}");
        }
    }

    #[test]
    fn triangle_truncation_is_exact() {
        let c3 = g("cycle:3");
        let pw = gme_threshold(&c3, Level::Exact, DEFAULT_THRESHOLD_TOL).unwrap().unwrap();
        let pf = gme_threshold(&c3, Level::Truncated(2), DEFAULT_THRESHOLD_TOL).unwrap().unwrap();
        assert!((pw - pf).abs() < 1e-9);
    }

    #[test]
    fn level_parsing() {
        assert_eq!("exact".parse::<Level>().unwrap(), Level::Exact);
        assert_eq!("2".parse::<Level>().unwrap(), Level::Truncated(2));
        assert!("two".parse::<Level>().is_err());
        assert_eq!(Level::Truncated(3).to_string(), "3");
    }
}
