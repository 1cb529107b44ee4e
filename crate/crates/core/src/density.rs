//! Dense randomized-graph density matrices and bipartite diagnostics.
//!
//! Every spanning-subgraph projector is real in the computational basis, so
//! all matrices here are real symmetric and a single symmetric
//! eigendecomposition serves rank, partial-transpose spectra and negativity.

use nalgebra::DMatrix;
use serde_json::json;

use crate::graph::Graph;
use crate::state::{scaled_empty_overlap, GraphStateVector};
use crate::{check_probability, round_significant, Error, Result};

/// Largest qubit count for an explicit density matrix.
pub const MAX_DENSITY_QUBITS: usize = 12;
/// Largest edge count for enumerating all spanning subgraphs.
pub const MAX_MASK_EDGES: usize = 24;
/// Largest edge count for the subgraph-state-space dimension.
pub const MAX_DIMENSION_EDGES: usize = 20;
/// Default relative eigenvalue cutoff for [`numerical_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: DMatrix<f64>,
}

impl DensityMatrix {
    /// Wraps a `2^n x 2^n` real matrix. No positivity check is made.
    pub fn from_matrix(n: usize, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != 1 << n || matrix.ncols() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "matrix is {}x{}, expected {d}x{d}",
                matrix.nrows(),
                matrix.ncols(),
                d = 1 << n
            )));
        }
        Ok(Self { n, matrix })
    }

    /// `sum_k w_k |F_k><F_k|` for graph-state vectors on `n` qubits.
    pub fn from_mixture<'a>(
        n: usize,
        terms: impl IntoIterator<Item = (f64, &'a GraphStateVector)>,
    ) -> Result<Self> {
        check_density_size(n)?;
        let dim = 1usize << n;
        let scale = 1.0 / dim as f64;
        let mut matrix = DMatrix::<f64>::zeros(dim, dim);
        for (weight, state) in terms {
            if state.qubits() != n {
                return Err(Error::VertexCountMismatch(n, state.qubits()));
            }
            if weight == 0.0 {
                continue;
            }
            let w = weight * scale;
            let signs = state.signs();
            for y in 0..dim {
                let wy = w * f64::from(signs[y]);
                let col = matrix.column_mut(y);
                for (entry, &sx) in col.into_iter().zip(signs) {
                    *entry += wy * f64::from(sx);
                }
            }
        }
        Ok(Self { n, matrix })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.matrix)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let m = &self.matrix;
        (0..m.nrows()).all(|i| (0..i).all(|j| (m[(i, j)] - m[(j, i)]).abs() <= tol))
    }

    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        Ok((&self.matrix - &other.matrix).norm())
    }

    /// Row-major CSV of the entries, rounded to 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.matrix.row_iter() {
            let line: Vec<String> = row
                .iter()
                .map(|&v| round_significant(v, 12).to_string())
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON header that accompanies [`DensityMatrix::to_csv`].
    pub fn export_header(&self, graph_spec: &str, p: f64) -> serde_json::Value {
        json!({ "n": self.n, "p": p, "graph_spec": graph_spec })
    }
}

fn check_density_size(n: usize) -> Result<()> {
    if n > MAX_DENSITY_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count for a density matrix",
            value: n,
            limit: MAX_DENSITY_QUBITS,
        });
    }
    Ok(())
}

/// Binomial weight `p^kept (1-p)^removed` of one spanning subgraph.
pub fn subgraph_weight(p: f64, kept: usize, removed: usize) -> f64 {
    p.powi(kept as i32) * (1.0 - p).powi(removed as i32)
}

/// The randomized graph state `rho_G^p`.
///
/// The edge channels act independently, so summing over spanning subgraphs
/// factorises entrywise: `rho[x][y] = 2^-n (1 - 2p)^d(x, y)`, where `d` counts
/// the edges excited (both endpoints set) in exactly one of `x` and `y`.
pub fn randomize(graph: &Graph, p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let n = graph.vertex_count();
    check_density_size(n)?;
    let dim = 1usize << n;
    let excited: Vec<u128> = (0..dim as u64)
        .map(|x| {
            graph
                .edges()
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| x >> i & x >> j & 1 == 1)
                .fold(0u128, |acc, (k, _)| acc | 1 << k)
        })
        .collect();
    let scale = 1.0 / dim as f64;
    let powers: Vec<f64> = (0..=graph.edge_count())
        .map(|k| scale * (1.0 - 2.0 * p).powi(k as i32))
        .collect();
    let matrix = DMatrix::from_fn(dim, dim, |x, y| {
        powers[(excited[x] ^ excited[y]).count_ones() as usize]
    });
    Ok(DensityMatrix { n, matrix })
}

/// `rho_G^p` by explicitly summing all `2^|E|` weighted subgraph projectors.
pub fn randomize_by_masks(graph: &Graph, p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let n = graph.vertex_count();
    check_density_size(n)?;
    let m = graph.edge_count();
    if m > MAX_MASK_EDGES {
        return Err(Error::TooLarge {
            what: "edge count for subgraph enumeration",
            value: m,
            limit: MAX_MASK_EDGES,
        });
    }
    let states = (0u64..1 << m)
        .map(|bits| {
            let kept = bits.count_ones() as usize;
            let state = GraphStateVector::new(&graph.subgraph_bits(bits))?;
            Ok((subgraph_weight(p, kept, m - kept), state))
        })
        .collect::<Result<Vec<_>>>()?;
    DensityMatrix::from_mixture(n, states.iter().map(|(w, s)| (*w, s)))
}

/// The randomized two-qubit graph state, written out entry by entry.
pub fn randomized_bell(p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let c = 1.0 - 2.0 * p;
    let matrix = DMatrix::from_fn(4, 4, |x, y| {
        if (x == 3) != (y == 3) {
            c / 4.0
        } else {
            0.25
        }
    });
    Ok(DensityMatrix { n: 2, matrix })
}

/// A bipartition `A|B` of the qubits, stored as the bitmask of side `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bipartition {
    n: usize,
    side_a: u64,
}

impl Bipartition {
    pub fn new(n: usize, side_a: u64) -> Result<Self> {
        let all = crate::graph::low_bits(n);
        if side_a & !all != 0 {
            return Err(Error::InvalidBipartition(format!(
                "side A {side_a:#b} has vertices outside 0..{n}"
            )));
        }
        if side_a == 0 || side_a == all {
            return Err(Error::InvalidBipartition(
                "both sides must be nonempty".into(),
            ));
        }
        Ok(Self { n, side_a })
    }

    /// Parses `0,1|2,3`. The two lists must partition `0..n`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidBipartition(format!("`{text}`: {why}"));
        let (a, b) = text.split_once('|').ok_or_else(|| bad("missing `|`"))?;
        let side = |list: &str| -> Result<u64> {
            let mut mask = 0u64;
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v: usize = item.parse().map_err(|_| bad("not a vertex list"))?;
                if v >= n {
                    return Err(bad("vertex out of range"));
                }
                if mask >> v & 1 == 1 {
                    return Err(bad("repeated vertex"));
                }
                mask |= 1 << v;
            }
            Ok(mask)
        };
        let (ma, mb) = (side(a)?, side(b)?);
        if ma & mb != 0 {
            return Err(bad("sides overlap"));
        }
        if ma | mb != crate::graph::low_bits(n) {
            return Err(bad("sides do not cover every vertex"));
        }
        Self::new(n, ma)
    }

    pub fn side_a(&self) -> u64 {
        self.side_a
    }

    pub fn side_b(&self) -> u64 {
        crate::graph::low_bits(self.n) & !self.side_a
    }

    /// Whether some edge of `graph` has one endpoint on each side.
    pub fn is_crossed_by(&self, graph: &Graph) -> bool {
        graph
            .edges()
            .iter()
            .any(|&(i, j)| (self.side_a >> i & 1) != (self.side_a >> j & 1))
    }

    /// Every bipartition of `n` qubits, each listed once (vertex 0 on side A).
    pub fn all(n: usize) -> Vec<Bipartition> {
        (1u64..1 << n)
            .filter(|a| a & 1 == 1 && *a != crate::graph::low_bits(n))
            .map(|side_a| Bipartition { n, side_a })
            .collect()
    }
}

/// Transposes the side-`A` tensor factors of `rho`.
pub fn partial_transpose(rho: &DensityMatrix, cut: &Bipartition) -> Result<DMatrix<f64>> {
    if cut.n != rho.n {
        return Err(Error::InvalidBipartition(format!(
            "cut is for {} qubits, state has {}",
            cut.n, rho.n
        )));
    }
    let a = cut.side_a as usize;
    let dim = 1usize << rho.n;
    Ok(DMatrix::from_fn(dim, dim, |x, y| {
        let xs = (x & !a) | (y & a);
        let ys = (y & !a) | (x & a);
        rho.matrix[(xs, ys)]
    }))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose; equals `(||rho^T_A||_1 - 1) / 2` for unit-trace states.
pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho, cut)?;
    Ok(-sorted_eigenvalues(&pt)
        .into_iter()
        .filter(|&v| v < 0.0)
        .sum::<f64>())
}

/// Number of eigenvalues above `tol * lambda_max`.
pub fn numerical_rank(rho: &DensityMatrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("rank tolerance {tol} must be positive")));
    }
    Ok(symmetric_rank(&rho.matrix, tol))
}

pub(crate) fn symmetric_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    let eig = sorted_eigenvalues(m);
    let top = eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    eig.iter().filter(|v| v.abs() > tol * top).count()
}

pub(crate) fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut eig: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

fn check_dimension_edges(graph: &Graph) -> Result<()> {
    if graph.edge_count() > MAX_DIMENSION_EDGES {
        return Err(Error::TooLarge {
            what: "edge count for the subgraph state space",
            value: graph.edge_count(),
            limit: MAX_DIMENSION_EDGES,
        });
    }
    Ok(())
}

/// Gram matrix `<F_a|F_b>` of all spanning-subgraph states, indexed by edge
/// mask.
pub fn gram_matrix(graph: &Graph) -> Result<DMatrix<f64>> {
    let table = removed_overlap_table(graph)?;
    let scale = 1.0 / 2f64.powi(graph.vertex_count() as i32);
    let size = table.len();
    Ok(DMatrix::from_fn(size, size, |a, b| table[a ^ b] as f64 * scale))
}

/// Exact eigenvalues of the Gram matrix, scaled by `2^n` so they are integers.
///
/// `<F_a|F_b>` depends only on `a xor b`, so the Gram matrix is diagonalised
/// by the characters of `Z_2^|E|` and its spectrum is the Walsh-Hadamard
/// transform of the overlap table.
pub fn gram_spectrum_scaled(graph: &Graph) -> Result<Vec<i128>> {
    let mut table = removed_overlap_table(graph)?;
    walsh_hadamard(&mut table);
    Ok(table)
}

/// Dimension of the span of all spanning-subgraph states of `graph`.
pub fn subgraph_space_dimension(graph: &Graph) -> Result<usize> {
    Ok(gram_spectrum_scaled(graph)?
        .iter()
        .filter(|&&v| v != 0)
        .count())
}

/// `2^n <G_empty|F_mask>` for every edge mask of `graph`.
fn removed_overlap_table(graph: &Graph) -> Result<Vec<i128>> {
    check_dimension_edges(graph)?;
    use rayon::prelude::*;
    (0u64..1 << graph.edge_count())
        .into_par_iter()
        .map(|bits| scaled_empty_overlap(&graph.subgraph_bits(bits)))
        .collect()
}

pub(crate) fn walsh_hadamard<T>(data: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let mut h = 1;
    while h < data.len() {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}
