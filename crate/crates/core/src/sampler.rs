//! Monte Carlo simulation of the probabilistic CZ preparation.
//!
//! All edge channels commute, so one preparation run is a single edge mask
//! whose bits are independent Bernoulli(p) trials. Shots are drawn in fixed
//! batches, batch `b` using stream `b` of a ChaCha8 generator seeded with the
//! user seed, so results do not depend on how batches are scheduled.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::density::DensityMatrix;
use crate::graph::{EdgeMask, Graph};
use crate::state::GraphStateVector;
use crate::{check_probability, Error, Result};

/// Shots drawn from one generator stream.
pub const BATCH_SHOTS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct PreparationSample {
    pub p: f64,
    pub shots: u64,
    pub seed: u64,
    pub edges: usize,
    pub counts: BTreeMap<EdgeMask, u64>,
}

impl PreparationSample {
    /// Fraction of shots in which edge `k` was created.
    pub fn edge_frequency(&self, k: usize) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .filter(|(mask, _)| mask.bits() >> k & 1 == 1)
            .map(|(_, c)| c)
            .sum();
        hits as f64 / self.shots as f64
    }

    pub fn frequency(&self, mask: EdgeMask) -> f64 {
        self.counts.get(&mask).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// `{graph_spec, p, shots, seed, counts: {mask_hex: count}}`.
    pub fn to_json(&self, graph_spec: &str) -> Value {
        let digits = self.edges.div_ceil(4).max(1);
        let counts: serde_json::Map<String, Value> = self
            .counts
            .iter()
            .map(|(mask, &c)| (format!("0x{:0digits$x}", mask.bits()), json!(c)))
            .collect();
        json!({
            "graph_spec": graph_spec,
            "p": self.p,
            "shots": self.shots,
            "seed": self.seed,
            "counts": counts,
        })
    }
}

pub fn sample_preparation(graph: &Graph, p: f64, shots: u64, seed: u64) -> Result<PreparationSample> {
    check_probability(p)?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let m = graph.edge_count();
    if m > 63 {
        return Err(Error::TooLarge {
            what: "edge count for sampling",
            value: m,
            limit: 63,
        });
    }
    let batches = shots.div_ceil(BATCH_SHOTS);
    let counts = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let size = BATCH_SHOTS.min(shots - b * BATCH_SHOTS);
            let mut local = BTreeMap::new();
            for _ in 0..size {
                let mut bits = 0u64;
                for k in 0..m {
                    if rng.random::<f64>() < p {
                        bits |= 1 << k;
                    }
                }
                *local.entry(bits).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (bits, c) in b {
                *a.entry(bits).or_insert(0) += c;
            }
            a
        });
    let counts = counts
        .into_iter()
        .map(|(bits, c)| Ok((EdgeMask::new(bits, m)?, c)))
        .collect::<Result<_>>()?;
    Ok(PreparationSample {
        p,
        shots,
        seed,
        edges: m,
        counts,
    })
}

/// Frequency-weighted mixture of the sampled subgraph states.
pub fn empirical_state(sample: &PreparationSample, graph: &Graph) -> Result<DensityMatrix> {
    let m = graph.edge_count();
    let mut states = Vec::with_capacity(sample.counts.len());
    for (&mask, &c) in &sample.counts {
        if mask.width() != m {
            return Err(Error::MaskWidth {
                expected: m,
                found: mask.width(),
            });
        }
        states.push((c as f64 / sample.shots as f64, GraphStateVector::new(&graph.subgraph(mask)?)?));
    }
    DensityMatrix::from_mixture(graph.vertex_count(), states.iter().map(|(w, s)| (*w, s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::randomize;

    fn g(spec: &str) -> Graph {
        Graph::parse(spec).unwrap()
    }

    #[test]
    fn deterministic_extremes() {
        let graph = g("cycle:5");
        let all = sample_preparation(&graph, 1.0, 1000, 3).unwrap();
        assert_eq!(all.counts.len(), 1);
        assert_eq!(all.counts[&graph.full_mask()], 1000);
        let none = sample_preparation(&graph, 0.0, 1000, 3).unwrap();
        assert_eq!(none.counts[&EdgeMask::empty(5).unwrap()], 1000);

        let pure = empirical_state(&all, &graph).unwrap();
        assert!(pure.frobenius_distance(&randomize(&graph, 1.0).unwrap()).unwrap() < 1e-12);
        let plus = empirical_state(&none, &graph).unwrap();
        assert!(plus.matrix().iter().all(|&v| (v - 1.0 / 32.0).abs() < 1e-15));
    }

    #[test]
    fn mask_frequencies_within_four_sigma() {
        let shots = 100_000;
        let sample = sample_preparation(&g("path:3"), 0.5, shots, 2024).unwrap();
        assert_eq!(sample.counts.values().sum::<u64>(), shots);
        let sigma = (0.25f64 * 0.75 / shots as f64).sqrt();
        for bits in 0..4 {
            let f = sample.frequency(EdgeMask::new(bits, 2).unwrap());
            assert!((f - 0.25).abs() < 4.0 * sigma, "mask {bits}: {f}");
        }
    }

    #[test]
    fn edge_marginals_within_five_sigma() {
        let graph = g("grid:3x3");
        let shots = 20_000;
        for p in [0.1, 0.37, 0.8] {
            let sample = sample_preparation(&graph, p, shots, 11).unwrap();
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            for k in 0..graph.edge_count() {
                assert!((sample.edge_frequency(k) - p).abs() < 5.0 * sigma);
            }
            assert!(sample.counts.keys().all(|m| m.width() == graph.edge_count()));
        }
    }

    #[test]
    fn seed_determinism() {
        let graph = g("star:6");
        let a = sample_preparation(&graph, 0.3, 50_000, 7).unwrap();
        let b = sample_preparation(&graph, 0.3, 50_000, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_preparation(&graph, 0.3, 50_000, 8).unwrap();
        assert_ne!(a.counts, c.counts);
        // batches are independent of the total, so a longer run extends a shorter one
        let short = sample_preparation(&graph, 0.3, BATCH_SHOTS, 7).unwrap();
        let long = sample_preparation(&graph, 0.3, 2 * BATCH_SHOTS, 7).unwrap();
        assert!(short.counts.iter().all(|(m, &c)| long.counts[m] >= c));
    }

    #[test]
    fn empirical_state_converges() {
        let graph = g("path:3");
        let exact = randomize(&graph, 0.5).unwrap();
        let coarse = empirical_state(&sample_preparation(&graph, 0.5, 10_000, 5).unwrap(), &graph).unwrap();
        let fine = empirical_state(&sample_preparation(&graph, 0.5, 1_000_000, 5).unwrap(), &graph).unwrap();
        assert!((fine.trace() - 1.0).abs() < 1e-12);
        let d_coarse = coarse.frobenius_distance(&exact).unwrap();
        let d_fine = fine.frobenius_distance(&exact).unwrap();
        assert!(d_fine < 0.01, "{d_fine}");
        assert!(d_fine < d_coarse, "{d_fine} vs {d_coarse}");
    }

    #[test]
    fn rejects_bad_input() {
        let graph = g("path:3");
        assert!(sample_preparation(&graph, 1.5, 10, 0).is_err());
        assert!(sample_preparation(&graph, 0.5, 0, 0).is_err());
        let sample = sample_preparation(&graph, 0.5, 10, 0).unwrap();
        assert!(matches!(
            empirical_state(&sample, &g("path:4")),
            Err(Error::MaskWidth { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn json_export() {
        let sample = sample_preparation(&g("path:3"), 1.0, 5, 9).unwrap();
        let v = sample.to_json("path:3");
        assert_eq!(v["counts"]["0x3"], 5);
        assert_eq!(v["shots"], 5);
        assert_eq!(v["seed"], 9);
        assert_eq!(v["graph_spec"], "path:3");
    }
}
