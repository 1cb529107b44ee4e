//! Simple undirected graphs on at most 64 vertices.
//!
//! Vertices are `0..n`. Edges are kept in canonical lexicographic order of
//! `(i, j)` with `i < j`, so that bit `k` of an [`EdgeMask`] always refers to
//! the same edge of a given graph.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_VERTICES: usize = 64;
pub const MAX_COVER_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u64>,
}

/// Subset of the edges of a parent graph, bit `k` selecting its `k`-th edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMask {
    bits: u64,
    width: usize,
}

impl EdgeMask {
    pub fn new(bits: u64, width: usize) -> Result<Self> {
        if width > 63 {
            return Err(Error::TooLarge {
                what: "edge mask width",
                value: width,
                limit: 63,
            });
        }
        if bits >> width != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask {bits:#x} does not fit in {width} bits"
            )));
        }
        Ok(Self { bits, width })
    }

    pub fn full(width: usize) -> Result<Self> {
        Self::new(low_bits(width), width)
    }

    pub fn empty(width: usize) -> Result<Self> {
        Self::new(0, width)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of selected edges.
    pub fn count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// The edges not selected by this mask.
    pub fn complement(&self) -> Self {
        Self {
            bits: !self.bits & low_bits(self.width),
            width: self.width,
        }
    }
}

pub(crate) fn low_bits(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Cardinalities of the symmetric-difference classes with one and two edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    /// Single edges, `|E_G|`.
    pub single: u64,
    /// Pairs of edges sharing a vertex, `sum_v C(d_v, 2)`.
    pub star_pairs: u64,
    /// Pairs of disjoint edges.
    pub disjoint_pairs: u64,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoints may be given in either
    /// order; self-loops, duplicates and out-of-range vertices are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                value: n,
                limit: MAX_VERTICES,
            });
        }
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n, list))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![0u64; n];
        for &(i, j) in &edges {
            adjacency[i] |= 1 << j;
            adjacency[j] |= 1 << i;
        }
        Self {
            n,
            edges,
            adjacency,
        }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Neighbour bitmask of every vertex.
    pub fn adjacency(&self) -> &[u64] {
        &self.adjacency
    }

    pub fn neighbors(&self, v: usize) -> u64 {
        self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adjacency[i] >> j & 1 == 1
    }

    /// Bitmask of all vertices.
    pub fn vertex_mask(&self) -> u64 {
        low_bits(self.n)
    }

    pub fn full_mask(&self) -> EdgeMask {
        EdgeMask {
            bits: low_bits(self.edges.len()),
            width: self.edges.len(),
        }
    }

    /// The spanning subgraph that keeps exactly the edges selected by `mask`.
    pub fn subgraph(&self, mask: EdgeMask) -> Result<Self> {
        if mask.width != self.edges.len() {
            return Err(Error::MaskWidth {
                expected: self.edges.len(),
                found: mask.width,
            });
        }
        Ok(self.subgraph_bits(mask.bits))
    }

    /// Unchecked variant of [`Graph::subgraph`] for hot loops; bits beyond
    /// the edge count are ignored.
    pub(crate) fn subgraph_bits(&self, bits: u64) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Self::from_sorted(self.n, edges)
    }

    /// Graph whose edges lie in exactly one of `self` and `other`.
    pub fn symmetric_difference(&self, other: &Graph) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        let mut edges = Vec::with_capacity(self.edges.len() + other.edges.len());
        let (mut a, mut b) = (self.edges.iter().peekable(), other.edges.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&x), Some(&&y)) if x == y => {
                    a.next();
                    b.next();
                }
                (Some(&&x), Some(&&y)) => {
                    if x < y {
                        edges.push(x);
                        a.next();
                    } else {
                        edges.push(y);
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    edges.push(x);
                    a.next();
                }
                (None, Some(&&y)) => {
                    edges.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Ok(Self::from_sorted(self.n, edges))
    }

    pub fn class_counts(&self) -> ClassCounts {
        let m = self.edges.len() as u64;
        let star_pairs: u64 = (0..self.n)
            .map(|v| {
                let d = self.degree(v) as u64;
                d * d.saturating_sub(1) / 2
            })
            .sum();
        ClassCounts {
            single: m,
            star_pairs,
            disjoint_pairs: m * m.saturating_sub(1) / 2 - star_pairs,
        }
    }

    /// Connected components with at least one edge, each relabelled onto
    /// `0..k` preserving vertex order. Isolated vertices are dropped.
    pub fn nontrivial_components(&self) -> Vec<Graph> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen >> start & 1 == 1 || self.adjacency[start] == 0 {
                continue;
            }
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adjacency[v] & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            seen |= comp;
            out.push(self.induced(comp));
        }
        out
    }

    /// Subgraph induced on the vertex set `keep`, relabelled onto `0..k`.
    pub fn induced(&self, keep: u64) -> Graph {
        let mut label = vec![usize::MAX; self.n];
        let mut k = 0;
        for (v, slot) in label.iter_mut().enumerate() {
            if keep >> v & 1 == 1 {
                *slot = k;
                k += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j)| keep >> i & 1 == 1 && keep >> j & 1 == 1)
            .map(|&(i, j)| (label[i], label[j]))
            .collect();
        Self::from_sorted(k.max(1), edges)
    }

    pub fn is_connected(&self) -> bool {
        let mut comp = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adjacency[v] & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        comp == self.vertex_mask()
    }

    /// Size of a minimum vertex cover, by exact branch and bound.
    pub fn min_vertex_cover(&self) -> Result<usize> {
        if self.n > MAX_COVER_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count for exact vertex cover",
                value: self.n,
                limit: MAX_COVER_VERTICES,
            });
        }
        let adj: Vec<u32> = self.adjacency.iter().map(|&a| a as u32).collect();
        let alive = low_bits(self.n) as u32;
        let mut best = self.n;
        cover_branch(&adj, alive, 0, &mut best);
        Ok(best)
    }

    /// Random graph with every possible edge present independently with
    /// probability `q`.
    pub fn random<R: Rng + ?Sized>(n: usize, q: f64, rng: &mut R) -> Result<Self> {
        crate::check_probability(q)?;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random::<f64>() < q {
                    edges.push((i, j));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
        })
        .expect("graph serialization cannot fail")
    }

    /// Parses the JSON edge-list form `{"n": 3, "edges": [[0, 1], [1, 2]]}`.
    /// Each pair must satisfy `0 <= i < j < n`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text)?;
        if let Some(e) = doc.edges.iter().find(|e| e[0] >= e[1]) {
            return Err(Error::InvalidGraph(format!(
                "edge [{}, {}] is not ordered i < j",
                e[0], e[1]
            )));
        }
        Self::new(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Parses either a family spec (`cycle:5`, `grid:2x3`, `file:g.json`) or
    /// an inline JSON document.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with('{') {
            return Self::from_json(text);
        }
        if let Some(path) = text.strip_prefix("file:") {
            return Self::from_file(path);
        }
        text.parse::<Family>()?.generate()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let body = std::fs::read_to_string(path)?;
        let body = body.trim();
        if body.starts_with('{') {
            Self::from_json(body)
        } else {
            Self::parse(body)
        }
    }
}

fn cover_branch(adj: &[u32], alive: u32, taken: usize, best: &mut usize) {
    if taken >= *best {
        return;
    }
    // Max-degree vertex among the remaining edges, plus a greedy matching
    // for the lower bound.
    let mut top = None;
    let mut top_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & alive).count_ones();
        if d > top_deg {
            top_deg = d;
            top = Some(v);
        }
    }
    let Some(v) = top else {
        *best = taken;
        return;
    };
    let mut matching = 0;
    let mut free = alive;
    let mut scan = alive;
    while scan != 0 {
        let u = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        if free >> u & 1 == 0 {
            continue;
        }
        let partners = adj[u] & free;
        if partners != 0 {
            let w = partners.trailing_zeros();
            free &= !(1 << u) & !(1 << w);
            matching += 1;
        }
    }
    if taken + matching >= *best {
        return;
    }
    let nbrs = adj[v] & alive;
    if top_deg == 1 {
        // every remaining edge is isolated; one endpoint each is optimal
        cover_branch(adj, alive & !(1 << v) & !nbrs, taken + 1, best);
        return;
    }
    cover_branch(adj, alive & !(1 << v), taken + 1, best);
    cover_branch(adj, alive & !nbrs & !(1 << v), taken + nbrs.count_ones() as usize, best);
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Empty(usize),
    Complete(usize),
    /// Star with center vertex 0.
    Star(usize),
    Path(usize),
    Cycle(usize),
    /// `rows x cols` lattice, vertex `r * cols + c`.
    Grid(usize, usize),
    /// `i x j x k` lattice, vertex `(a * j + b) * k + c`.
    Grid3(usize, usize, usize),
}

impl Family {
    pub fn generate(&self) -> Result<Graph> {
        self.validate()?;
        let mut edges = Vec::new();
        let n = match *self {
            Family::Empty(n) => n,
            Family::Complete(n) => {
                for i in 0..n {
                    for j in i + 1..n {
                        edges.push((i, j));
                    }
                }
                n
            }
            Family::Star(n) => {
                edges.extend((1..n).map(|j| (0, j)));
                n
            }
            Family::Path(n) => {
                edges.extend((1..n).map(|j| (j - 1, j)));
                n
            }
            Family::Cycle(n) => {
                edges.extend((1..n).map(|j| (j - 1, j)));
                edges.push((0, n - 1));
                n
            }
            Family::Grid(rows, cols) => {
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        if c + 1 < cols {
                            edges.push((v, v + 1));
                        }
                        if r + 1 < rows {
                            edges.push((v, v + cols));
                        }
                    }
                }
                rows * cols
            }
            Family::Grid3(a, b, c) => {
                let idx = |x: usize, y: usize, z: usize| (x * b + y) * c + z;
                for x in 0..a {
                    for y in 0..b {
                        for z in 0..c {
                            let v = idx(x, y, z);
                            if z + 1 < c {
                                edges.push((v, idx(x, y, z + 1)));
                            }
                            if y + 1 < b {
                                edges.push((v, idx(x, y + 1, z)));
                            }
                            if x + 1 < a {
                                edges.push((v, idx(x + 1, y, z)));
                            }
                        }
                    }
                }
                a * b * c
            }
        };
        Graph::new(n, edges)
    }

    fn validate(&self) -> Result<()> {
        let bad = |family: &'static str, detail: String| Err(Error::SizeOutOfRange { family, detail });
        let dims: Vec<usize> = match *self {
            Family::Empty(n)
            | Family::Complete(n)
            | Family::Star(n)
            | Family::Path(n) => vec![n],
            Family::Cycle(n) => {
                if n < 3 {
                    return bad("cycle", format!("{n} < 3"));
                }
                vec![n]
            }
            Family::Grid(a, b) => vec![a, b],
            Family::Grid3(a, b, c) => vec![a, b, c],
        };
        if dims.contains(&0) {
            return bad(self.name(), "sizes must be at least 1".into());
        }
        let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match total {
            Some(t) if t <= MAX_VERTICES => Ok(()),
            _ => bad(self.name(), format!("more than {MAX_VERTICES} vertices")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Empty(_) => "empty",
            Family::Complete(_) => "complete",
            Family::Star(_) => "star",
            Family::Path(_) => "path",
            Family::Cycle(_) => "cycle",
            Family::Grid(..) => "grid",
            Family::Grid3(..) => "grid3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Empty(n)
            | Family::Complete(n)
            | Family::Star(n)
            | Family::Path(n)
            | Family::Cycle(n) => write!(f, "{}:{n}", self.name()),
            Family::Grid(a, b) => write!(f, "grid:{a}x{b}"),
            Family::Grid3(a, b, c) => write!(f, "grid3:{a}x{b}x{c}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let malformed = || Error::MalformedSpec(s.to_string());
        let (name, size) = s.trim().split_once(':').ok_or_else(malformed)?;
        let dims: Vec<usize> = size
            .split(['x', 'X', '×'])
            .map(|d| d.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| malformed())?;
        let family = match (name.trim(), dims.as_slice()) {
            ("empty", &[n]) => Family::Empty(n),
            ("complete", &[n]) => Family::Complete(n),
            ("star", &[n]) => Family::Star(n),
            ("path", &[n]) => Family::Path(n),
            ("cycle", &[n]) => Family::Cycle(n),
            ("grid", &[a, b]) => Family::Grid(a, b),
            ("grid3", &[a, b, c]) => Family::Grid3(a, b, c),
            ("empty" | "complete" | "star" | "path" | "cycle" | "grid" | "grid3", _) => {
                return Err(malformed())
            }
            (other, _) => return Err(Error::UnknownFamily(other.to_string())),
        };
        family.validate()?;
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(spec: &str) -> Graph {
        Graph::parse(spec).unwrap()
    }

    #[test]
    fn family_examples() {
        assert_eq!(g("complete:3").edges(), &[(0, 1), (0, 2), (1, 2)]);
        let star = g("star:4");
        assert_eq!(star.edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.degrees(), vec![3, 1, 1, 1]);
        let grid = g("grid:2x3");
        assert_eq!((grid.vertex_count(), grid.edge_count()), (6, 7));
        let cube = g("grid3:2x2x2");
        assert_eq!((cube.vertex_count(), cube.edge_count()), (8, 12));
        assert_eq!(g("cycle:5").edge_count(), 5);
        assert_eq!(g("empty:4").edge_count(), 0);
    }

    #[test]
    fn grid_edge_count_formula() {
        for m in 1..6 {
            for n in 1..6 {
                let grid = Family::Grid(m, n).generate().unwrap();
                assert_eq!(grid.edge_count(), m * (n - 1) + n * (m - 1));
            }
        }
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(Graph::parse("wheel:5"), Err(Error::UnknownFamily(_))));
        assert!(matches!(Graph::parse("cycle:2"), Err(Error::SizeOutOfRange { .. })));
        assert!(matches!(Graph::parse("path:0"), Err(Error::SizeOutOfRange { .. })));
        assert!(matches!(Graph::parse("path"), Err(Error::MalformedSpec(_))));
        assert!(matches!(Graph::parse("grid:3"), Err(Error::MalformedSpec(_))));
        assert!(matches!(Graph::parse("path:abc"), Err(Error::MalformedSpec(_))));
        assert!(Graph::parse("complete:65").is_err());
    }

    #[test]
    fn json_parsing() {
        let single = g(r#"{"n":2,"edges":[[0,1]]}"#);
        assert_eq!(single.edges(), &[(0, 1)]);
        assert_eq!(single.to_json(), r#"{"n":2,"edges":[[0,1]]}"#);
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[0,1],[0,1]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[1,0]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":3,"edges":[[0,1]"#).is_err());
    }

    #[test]
    fn file_spec() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        std::fs::write(&path, r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        let parsed = g(&format!("file:{}", path.display()));
        assert_eq!(parsed, g("path:2"));
        assert!(matches!(Graph::parse("file:/definitely/missing.json"), Err(Error::Io(_))));
    }

    #[test]
    fn symmetric_difference_examples() {
        let path = g("path:3");
        let star = g("star:3");
        assert_eq!(path.symmetric_difference(&star).unwrap().edges(), &[(0, 2), (1, 2)]);
        assert_eq!(path.symmetric_difference(&path).unwrap().edge_count(), 0);
        let empty = g("empty:3");
        assert_eq!(path.symmetric_difference(&empty).unwrap(), path);
        assert!(matches!(
            path.symmetric_difference(&g("path:4")),
            Err(Error::VertexCountMismatch(3, 4))
        ));
    }

    #[test]
    fn subgraph_from_mask() {
        let star = g("star:3");
        let one = star.subgraph(EdgeMask::new(0b01, 2).unwrap()).unwrap();
        assert_eq!(one.edges(), &[(0, 1)]);
        assert_eq!(star.subgraph(star.full_mask()).unwrap(), star);
        assert_eq!(star.subgraph(EdgeMask::empty(2).unwrap()).unwrap().edge_count(), 0);
        assert!(matches!(
            star.subgraph(EdgeMask::empty(3).unwrap()),
            Err(Error::MaskWidth { expected: 2, found: 3 })
        ));
        assert!(EdgeMask::new(0b100, 2).is_err());
    }

    #[test]
    fn class_count_examples() {
        let counts = |s: &str| {
            let c = g(s).class_counts();
            (c.single, c.star_pairs, c.disjoint_pairs)
        };
        assert_eq!(counts("empty:4"), (0, 0, 0));
        assert_eq!(counts("star:4"), (3, 3, 0));
        assert_eq!(counts("complete:4"), (6, 12, 3));
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(g("empty:5").min_vertex_cover().unwrap(), 0);
        assert_eq!(g("path:4").min_vertex_cover().unwrap(), 2);
        assert_eq!(g("cycle:5").min_vertex_cover().unwrap(), 3);
        assert_eq!(g("star:9").min_vertex_cover().unwrap(), 1);
        assert_eq!(g("complete:6").min_vertex_cover().unwrap(), 5);
        assert_eq!(g("grid:4x6").min_vertex_cover().unwrap(), 12);
        assert!(g("path:25").min_vertex_cover().is_err());
    }

    fn brute_cover(graph: &Graph) -> usize {
        (0u64..1 << graph.vertex_count())
            .filter(|s| graph.edges().iter().all(|&(i, j)| (s >> i | s >> j) & 1 == 1))
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn max_matching(graph: &Graph) -> usize {
        fn go(edges: &[(usize, usize)], used: u64) -> usize {
            match edges.split_first() {
                None => 0,
                Some((&(i, j), rest)) => {
                    let skip = go(rest, used);
                    if used >> i & 1 == 0 && used >> j & 1 == 0 {
                        skip.max(1 + go(rest, used | 1 << i | 1 << j))
                    } else {
                        skip
                    }
                }
            }
        }
        go(graph.edges(), 0)
    }

    #[test]
    fn vertex_cover_matches_brute_force_and_matching_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let n = 1 + trial % 8;
            let q = [0.2, 0.4, 0.6, 0.8][trial % 4];
            let graph = Graph::random(n, q, &mut rng).unwrap();
            let cover = graph.min_vertex_cover().unwrap();
            assert_eq!(cover, brute_cover(&graph), "{graph:?}");
            assert!(cover >= max_matching(&graph));
        }
    }

    #[test]
    fn class_counts_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let graph = Graph::random(1 + trial % 5, 0.6, &mut rng).unwrap();
            let edges = graph.edges();
            let (mut star, mut disjoint) = (0, 0);
            for a in 0..edges.len() {
                for b in a + 1..edges.len() {
                    let (e, f) = (edges[a], edges[b]);
                    if e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
                        star += 1;
                    } else {
                        disjoint += 1;
                    }
                }
            }
            let c = graph.class_counts();
            assert_eq!((c.single, c.star_pairs, c.disjoint_pairs), (edges.len() as u64, star, disjoint));
        }
    }

    #[test]
    fn components() {
        let graph = Graph::new(6, [(0, 2), (2, 4), (1, 5)]).unwrap();
        let comps = graph.nontrivial_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], g("path:3"));
        assert_eq!(comps[1], g("path:2"));
        assert!(!graph.is_connected());
        assert!(g("grid:2x3").is_connected());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn handshake_and_symmetry(graph in arb_graph(10)) {
            let total: usize = graph.degrees().iter().sum();
            prop_assert_eq!(total, 2 * graph.edge_count());
            for i in 0..graph.vertex_count() {
                for j in 0..graph.vertex_count() {
                    prop_assert_eq!(graph.has_edge(i, j), graph.has_edge(j, i));
                }
            }
        }

        #[test]
        fn json_round_trip(graph in arb_graph(12)) {
            prop_assert_eq!(Graph::parse(&graph.to_json()).unwrap(), graph);
        }

        #[test]
        fn symmetric_difference_laws(
            (a, b, c) in (1usize..7).prop_flat_map(|n| {
                let m = n * (n - 1) / 2;
                let mk = move |bits: Vec<bool>| {
                    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
                    Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
                };
                (
                    proptest::collection::vec(any::<bool>(), m).prop_map(mk),
                    proptest::collection::vec(any::<bool>(), m).prop_map(mk),
                    proptest::collection::vec(any::<bool>(), m).prop_map(mk),
                )
            })
        ) {
            let ab = a.symmetric_difference(&b).unwrap();
            prop_assert_eq!(&ab, &b.symmetric_difference(&a).unwrap());
            prop_assert_eq!(
                ab.symmetric_difference(&c).unwrap(),
                a.symmetric_difference(&b.symmetric_difference(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(ab.symmetric_difference(&b).unwrap(), a);
        }
    }
}
