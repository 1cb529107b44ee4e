//! Pure graph states in sign representation.
//!
//! In the computational basis `|G> = 2^(-n/2) sum_x (-1)^q_G(x) |x>`, where
//! `q_G(x)` counts the edges with both endpoints set in `x`. Qubit `k` is bit
//! `k` of the basis index. Overlaps of two graph states are therefore exact
//! dyadic rationals, computed here with integer sign sums.

use rayon::prelude::*;

use crate::graph::{Family, Graph};
use crate::{Error, Result};

/// Largest qubit count for which a sign vector is materialised.
pub const MAX_STATE_QUBITS: usize = 20;
/// Largest connected component handled by the Gray-code overlap kernel.
pub const MAX_COMPONENT_QUBITS: usize = 30;

/// Components at or below this size are summed on one thread.
const SERIAL_BITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStateVector {
    n: usize,
    signs: Vec<i8>,
}

impl GraphStateVector {
    pub fn new(graph: &Graph) -> Result<Self> {
        let n = graph.vertex_count();
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooLarge {
                what: "qubit count for a state vector",
                value: n,
                limit: MAX_STATE_QUBITS,
            });
        }
        let adj = graph.adjacency();
        let mut signs = vec![1i8; 1 << n];
        for x in 1usize..1 << n {
            let v = x.trailing_zeros() as usize;
            let rest = x & (x - 1);
            let flip = (adj[v] & rest as u64).count_ones() & 1 == 1;
            signs[x] = if flip { -signs[rest] } else { signs[rest] };
        }
        Ok(Self { n, signs })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Normalised amplitude of basis state `x`.
    pub fn amplitude(&self, x: usize) -> f64 {
        f64::from(self.signs[x]) * self.norm()
    }

    pub fn norm(&self) -> f64 {
        (0.5f64).powi(self.n as i32).sqrt()
    }

    /// `<self|other>` by direct summation over basis strings.
    pub fn inner(&self, other: &GraphStateVector) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        let sum: i64 = self
            .signs
            .iter()
            .zip(&other.signs)
            .map(|(&a, &b)| i64::from(a * b))
            .sum();
        Ok(sum as f64 / (1u64 << self.n) as f64)
    }
}

/// `<G|F>`, reduced to `<G_empty|G xor F>`.
pub fn overlap(g: &Graph, f: &Graph) -> Result<f64> {
    empty_overlap(&g.symmetric_difference(f)?)
}

/// `<G_empty|G>` for the edgeless graph on the same vertices.
///
/// The amplitude factorises over connected components, so only components
/// with edges are summed, each by Gray-code enumeration of its basis strings.
pub fn empty_overlap(graph: &Graph) -> Result<f64> {
    let mut value = 1.0;
    for comp in graph.nontrivial_components() {
        let k = comp.vertex_count();
        let sum = sign_sum(&comp)?;
        if sum == 0 {
            return Ok(0.0);
        }
        value *= sum as f64 / (1u64 << k) as f64;
    }
    Ok(value)
}

/// `2^n <G_empty|G>` as an exact integer.
pub fn scaled_empty_overlap(graph: &Graph) -> Result<i128> {
    let mut value: i128 = 1;
    let mut covered = 0;
    for comp in graph.nontrivial_components() {
        covered += comp.vertex_count();
        value *= i128::from(sign_sum(&comp)?);
        if value == 0 {
            return Ok(0);
        }
    }
    Ok(value << (graph.vertex_count() - covered))
}

/// `sum_x (-1)^q_G(x)` over all `2^n` basis strings, without any
/// component factorisation.
pub fn sign_sum(graph: &Graph) -> Result<i64> {
    let n = graph.vertex_count();
    if n > MAX_COMPONENT_QUBITS {
        return Err(Error::TooLarge {
            what: "connected component size for overlap",
            value: n,
            limit: MAX_COMPONENT_QUBITS,
        });
    }
    let adj = graph.adjacency();
    if n <= SERIAL_BITS {
        return Ok(gray_block(adj, 0, n));
    }
    let high = n - SERIAL_BITS;
    Ok((0u64..1 << high)
        .into_par_iter()
        .map(|h| gray_block(adj, h << SERIAL_BITS, SERIAL_BITS))
        .sum())
}

/// Sum of signs over the `2^low` strings sharing the high bits of `base`.
fn gray_block(adj: &[u64], base: u64, low: usize) -> i64 {
    let mut x = base;
    let mut parity = excited_parity(adj, x);
    let mut sum: i64 = if parity { -1 } else { 1 };
    for i in 1u64..1 << low {
        let v = i.trailing_zeros() as usize;
        parity ^= (adj[v] & x).count_ones() & 1 == 1;
        x ^= 1 << v;
        sum += if parity { -1 } else { 1 };
    }
    sum
}

fn excited_parity(adj: &[u64], x: u64) -> bool {
    let mut total = 0;
    let mut rest = x;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += (adj[v] & rest).count_ones();
    }
    total & 1 == 1
}

/// `|<G_empty|G>|^2` from the known closed forms for paths, cycles and stars.
pub fn closed_form_overlap_sq(family: Family) -> Result<f64> {
    let value = match family {
        Family::Path(n) => 0.25f64.powi((n / 2) as i32),
        Family::Cycle(n) if n % 2 == 1 => 0.0,
        Family::Cycle(n) => 0.5f64.powi(n as i32 - 2),
        Family::Star(1) => 1.0,
        Family::Star(_) => 0.25,
        other => {
            return Err(Error::InvalidArgument(format!(
                "no closed-form overlap for {other}"
            )))
        }
    };
    Ok(value)
}
