//! Stabilizer group of a graph state, its Bell operator and the classical
//! (local hidden variable) bound `D(G)`.
//!
//! Pauli strings are binary symplectic: `x_bits` and `z_bits` mark the X and
//! Z support, and a site in both carries `Y`. Products are formed in the
//! ordered form `X^x Z^z` (X before Z on every site), where moving a `Z` past
//! an `X` costs a factor `-1`; converting to Hermitian `I/X/Y/Z` strings uses
//! `XZ = -iY`.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::density::walsh_hadamard;
use crate::graph::Graph;
use crate::witness::{self, Level, WitnessEvaluation, DEFAULT_BRACKET};
use crate::{Error, Result};

/// Largest qubit count for the dense Bell operator.
pub const MAX_BELL_QUBITS: usize = 10;
/// Largest qubit count for the exhaustive classical-bound search.
pub const MAX_LHV_QUBITS: usize = 8;

/// A Hermitian Pauli string `sign * P_0 (x) P_1 (x) ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerElement {
    pub x_bits: u64,
    pub z_bits: u64,
    pub sign: i8,
}

impl StabilizerElement {
    pub fn identity() -> Self {
        Self {
            x_bits: 0,
            z_bits: 0,
            sign: 1,
        }
    }

    /// Sites acting as `X`.
    pub fn x_only(&self) -> u64 {
        self.x_bits & !self.z_bits
    }

    /// Sites acting as `Y`.
    pub fn y_sites(&self) -> u64 {
        self.x_bits & self.z_bits
    }

    /// Sites acting as `Z`.
    pub fn z_only(&self) -> u64 {
        self.z_bits & !self.x_bits
    }

    pub fn local(&self, k: usize) -> char {
        match (self.x_bits >> k & 1, self.z_bits >> k & 1) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }

    /// Sign of this element written in the ordered form `X^x Z^z`.
    fn ordered_sign(&self) -> i8 {
        // X^x Z^z = i^#Y P, so sign * P = sign * (-1)^(#Y/2) X^x Z^z
        let half_y = self.y_sites().count_ones() / 2;
        if half_y % 2 == 0 {
            self.sign
        } else {
            -self.sign
        }
    }

    /// Dense real matrix on `n` qubits (qubit `k` is bit `k` of the index).
    pub fn matrix(&self, n: usize) -> DMatrix<f64> {
        let dim = 1usize << n;
        let sign = f64::from(self.ordered_sign());
        let mut m = DMatrix::zeros(dim, dim);
        for y in 0..dim {
            let phase = if (self.z_bits & y as u64).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(y ^ self.x_bits as usize, y)] = sign * phase;
        }
        m
    }

    pub fn to_string_n(&self, n: usize) -> String {
        let body: String = (0..n).map(|k| self.local(k)).collect();
        format!("{}{}", if self.sign > 0 { '+' } else { '-' }, body)
    }
}

impl fmt::Display for StabilizerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 64 - (self.x_bits | self.z_bits).leading_zeros() as usize;
        f.write_str(&self.to_string_n(n.max(1)))
    }
}

/// `s_J = prod_{i in J} g_i` with `g_i = X_i Z_{N(i)}`.
pub fn stabilizer_element(graph: &Graph, subset: u64) -> Result<StabilizerElement> {
    if subset & !graph.vertex_mask() != 0 {
        return Err(Error::InvalidArgument(format!(
            "vertex subset {subset:#b} is not within 0..{}",
            graph.vertex_count()
        )));
    }
    Ok(element_unchecked(graph.adjacency(), subset))
}

fn element_unchecked(adj: &[u64], subset: u64) -> StabilizerElement {
    let (mut x, mut z) = (0u64, 0u64);
    // phase as a power of i
    let mut phase = 0u32;
    let mut rest = subset;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let gx = 1u64 << i;
        let gz = adj[i];
        // (X^x Z^z)(X^gx Z^gz) = (-1)^|z & gx| X^(x^gx) Z^(z^gz)
        phase += 2 * ((z & gx).count_ones() & 1);
        x ^= gx;
        z ^= gz;
    }
    // X Z = -i Y on every Y site
    phase += 3 * (x & z).count_ones();
    let phase = phase % 4;
    assert!(phase % 2 == 0, "stabilizer element with imaginary phase");
    StabilizerElement {
        x_bits: x,
        z_bits: z,
        sign: if phase == 0 { 1 } else { -1 },
    }
}

/// All `2^n` elements of the stabilizer group, indexed by the subset `J`.
pub fn stabilizer_group(graph: &Graph) -> Result<Vec<StabilizerElement>> {
    let n = graph.vertex_count();
    if n > 30 {
        return Err(Error::TooLarge {
            what: "qubit count for the stabilizer group",
            value: n,
            limit: 30,
        });
    }
    let adj = graph.adjacency();
    Ok((0u64..1 << n).map(|j| element_unchecked(adj, j)).collect())
}

/// `B(G) = 2^-n sum_J s_J`, which equals the projector `|G><G|`.
pub fn bell_operator_matrix(graph: &Graph) -> Result<DMatrix<f64>> {
    let n = graph.vertex_count();
    if n > MAX_BELL_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count for the Bell operator",
            value: n,
            limit: MAX_BELL_QUBITS,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / dim as f64;
    let mut m = DMatrix::zeros(dim, dim);
    for s in stabilizer_group(graph)? {
        let sign = f64::from(s.ordered_sign()) * scale;
        for y in 0..dim {
            let phase = if (s.z_bits & y as u64).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(y ^ s.x_bits as usize, y)] += sign * phase;
        }
    }
    Ok(m)
}

/// Deterministic local values: bit `k` of `x`, `y` or `z` set means the
/// observable `X`, `Y` or `Z` on qubit `k` takes the value `-1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LhvAssignment {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl LhvAssignment {
    /// Value `+-1` assigned to a stabilizer element (identity sites give 1).
    pub fn value(&self, element: &StabilizerElement) -> i32 {
        let odd = (self.x & element.x_only()).count_ones()
            + (self.y & element.y_sites()).count_ones()
            + (self.z & element.z_only()).count_ones();
        let v = i32::from(element.sign);
        if odd % 2 == 0 {
            v
        } else {
            -v
        }
    }

    /// Classical expectation `2^-n sum_J value(s_J)` of the Bell operator.
    pub fn bell_expectation(&self, group: &[StabilizerElement]) -> f64 {
        let total: i64 = group.iter().map(|s| i64::from(self.value(s))).sum();
        total as f64 / group.len() as f64
    }
}

/// Per-element tables for the classical-bound search.
struct SearchTable {
    sign: i32,
    x_only: u64,
    y_sites: u64,
    z_only: u64,
}

/// `D(G) = max |<B(G)>|` over all deterministic local assignments of `+-1`
/// to every `X`, `Y` and `Z` observable.
///
/// For fixed `X` and `Y` assignments the expectation, as a function of the
/// `Z` assignment, is a Walsh-Hadamard transform of the stabilizer signs
/// bucketed by their `Z`-only support, so the `8^n` search costs
/// `4^n * n * 2^n` operations.
pub fn lhv_bound(graph: &Graph) -> Result<f64> {
    Ok(lhv_bound_with_assignment(graph)?.0)
}

/// [`lhv_bound`] together with an assignment attaining it (the first in
/// `(x, y, z)` order, so the result is independent of scheduling).
pub fn lhv_bound_with_assignment(graph: &Graph) -> Result<(f64, LhvAssignment)> {
    let n = graph.vertex_count();
    if n > MAX_LHV_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count for the classical bound search",
            value: n,
            limit: MAX_LHV_QUBITS,
        });
    }
    let tables: Vec<SearchTable> = stabilizer_group(graph)?
        .iter()
        .map(|s| SearchTable {
            sign: i32::from(s.sign),
            x_only: s.x_only(),
            y_sites: s.y_sites(),
            z_only: s.z_only(),
        })
        .collect();
    let dim = 1usize << n;
    let low = (1u64 << n) - 1;
    let (best, xy, z) = (0u64..1 << (2 * n))
        .into_par_iter()
        .map_init(
            || vec![0i32; dim],
            |buckets, xy| {
                let (flip_x, flip_y) = (xy & low, xy >> n);
                buckets.fill(0);
                for t in &tables {
                    let odd = ((flip_x & t.x_only).count_ones() + (flip_y & t.y_sites).count_ones()) & 1;
                    buckets[t.z_only as usize] += if odd == 1 { -t.sign } else { t.sign };
                }
                walsh_hadamard(buckets);
                let (z, v) = buckets
                    .iter()
                    .enumerate()
                    .map(|(z, v)| (z as u64, v.unsigned_abs()))
                    .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                (v, xy, z)
            },
        )
        .reduce(
            || (0, 0, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    let assignment = LhvAssignment {
        x: xy & low,
        y: xy >> n,
        z,
    };
    Ok((f64::from(best) / dim as f64, assignment))
}

fn check_bound(bound: f64) -> Result<()> {
    if bound > 0.0 && bound <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLhvBound(bound))
    }
}

/// `D(G) - L_level(rho_G^p)`; negative values exclude any local hidden
/// variable description.
pub fn lhv_witness_value(graph: &Graph, p: f64, level: Level, bound: f64) -> Result<WitnessEvaluation> {
    check_bound(bound)?;
    witness::witness_with_constant(graph, p, level, bound)
}

/// Zero crossing of [`lhv_witness_value`] on `[1/2, 1]`, if any.
pub fn lhv_threshold(graph: &Graph, level: Level, bound: f64, tol: f64) -> Result<Option<f64>> {
    check_bound(bound)?;
    if bound == 1.0 {
        // the overlap never exceeds one
        return Ok(None);
    }
    witness::overlap_threshold(graph, level, bound, DEFAULT_BRACKET, tol)
}
