//! Desk-scale datasets behind the threshold figures.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;

use crate::graph::{Family, Graph};
use crate::lhv;
use crate::witness::{self, Level, DEFAULT_THRESHOLD_TOL};
use crate::{round_significant, Error, Result};

use super::OUTPUT_DIGITS;

pub const FIG4_SIZES: std::ops::RangeInclusive<usize> = 3..=10;
pub const FIG5_SIZES: std::ops::RangeInclusive<usize> = 3..=14;
/// Lattice extents per axis; single-row lattices are paths and are left out.
pub const FIG6_SIDES: std::ops::RangeInclusive<usize> = 2..=5;
pub const FIG7_SIDES: std::ops::RangeInclusive<usize> = 2..=3;
pub const FIG9_DEFAULT_MAX_N: usize = 7;
/// Largest graph whose classical bound is computed rather than supplied.
pub const FIG9_COMPUTE_LIMIT: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FigTarget {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig9,
    All,
}

#[derive(Clone, Debug, Default)]
pub struct FigOptions {
    /// Classical bounds keyed by graph spec, used instead of searching.
    pub known_bounds: BTreeMap<String, f64>,
    pub fig9_max_n: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(usize),
    Num(Option<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Missing values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => t.clone(),
                    Cell::Int(i) => i.to_string(),
                    Cell::Num(Some(v)) => round_significant(*v, OUTPUT_DIGITS).to_string(),
                    Cell::Num(None) => String::new(),
                })
                .collect();
            let _ = writeln!(s, "{}", fields.join(","));
        }
        s
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

pub fn generate(target: FigTarget, options: &FigOptions) -> Result<Vec<Dataset>> {
    match target {
        FigTarget::Fig3 => Err(Error::InvalidArgument(
            "fig3 (PPT-mixer entanglement monotone) needs semidefinite programming and is not reproduced".into(),
        )),
        FigTarget::Fig4 => Ok(vec![fig4()?]),
        FigTarget::Fig5 => Ok(vec![fig5()?]),
        FigTarget::Fig6 => Ok(vec![fig6()?]),
        FigTarget::Fig7 => Ok(vec![fig7()?]),
        FigTarget::Fig9 => Ok(vec![fig9(options)?]),
        FigTarget::All => Ok(vec![fig4()?, fig5()?, fig6()?, fig7()?, fig9(options)?]),
    }
}

/// `p_F` with the two-edge truncation (all of `G` when it has fewer edges).
fn p_f(graph: &Graph) -> Result<Option<f64>> {
    let level = Level::Truncated(graph.edge_count().min(2));
    witness::gme_threshold(graph, level, DEFAULT_THRESHOLD_TOL)
}

fn p_w(graph: &Graph) -> Result<Option<f64>> {
    witness::gme_threshold(graph, Level::Exact, DEFAULT_THRESHOLD_TOL)
}

/// Exact `p_w` for stars and paths.
pub fn fig4() -> Result<Dataset> {
    let mut set = Dataset::new("fig4", &["n", "star_p_w", "star_closed_form", "path_p_w"]);
    for n in FIG4_SIZES {
        let star = p_w(&Family::Star(n).generate()?)?;
        let path = p_w(&Family::Path(n).generate()?)?;
        let closed = 3f64.powf(-1.0 / (n as f64 - 1.0));
        set.rows.push(vec![Cell::Int(n), Cell::Num(star), Cell::Num(Some(closed)), Cell::Num(path)]);
    }
    Ok(set)
}

/// Cycles: `p_w` against `p_F` and their relative difference.
pub fn fig5() -> Result<Dataset> {
    let mut set = Dataset::new("fig5", &["n", "p_w", "p_F", "relative_difference"]);
    for n in FIG5_SIZES {
        let graph = Family::Cycle(n).generate()?;
        let (w, f) = (p_w(&graph)?, p_f(&graph)?);
        let rel = match (w, f) {
            (Some(w), Some(f)) => Some((f - w) / w),
            _ => None,
        };
        set.rows.push(vec![Cell::Int(n), Cell::Num(w), Cell::Num(f), Cell::Num(rel)]);
    }
    Ok(set)
}

/// `p_F` over 2D lattices.
pub fn fig6() -> Result<Dataset> {
    let mut set = Dataset::new("fig6", &["m", "n", "p_F"]);
    for m in FIG6_SIDES {
        for n in FIG6_SIDES {
            let value = p_f(&Family::Grid(m, n).generate()?)?;
            set.rows.push(vec![Cell::Int(m), Cell::Int(n), Cell::Num(value)]);
        }
    }
    Ok(set)
}

/// `p_F` over 3D lattices.
pub fn fig7() -> Result<Dataset> {
    let mut set = Dataset::new("fig7", &["i", "j", "k", "p_F"]);
    for i in FIG7_SIDES {
        for j in FIG7_SIDES {
            for k in FIG7_SIDES {
                let value = p_f(&Family::Grid3(i, j, k).generate()?)?;
                set.rows.push(vec![Cell::Int(i), Cell::Int(j), Cell::Int(k), Cell::Num(value)]);
            }
        }
    }
    Ok(set)
}

/// `p_LHV` with the two-edge truncation for stars, paths and cycles.
pub fn fig9(options: &FigOptions) -> Result<Dataset> {
    let mut set = Dataset::new("fig9", &["family", "n", "lhv_bound", "bound_source", "p_lhv"]);
    for n in 3..=options.fig9_max_n {
        for family in [Family::Star(n), Family::Path(n), Family::Cycle(n)] {
            let spec = family.to_string();
            let graph = family.generate()?;
            let (bound, source) = match options.known_bounds.get(&spec) {
                Some(&d) => (d, "supplied"),
                None if n <= FIG9_COMPUTE_LIMIT => (lhv::lhv_bound(&graph)?, "computed"),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "classical bound for {spec} is over the search budget of {FIG9_COMPUTE_LIMIT} qubits; supply it with --lhv-bounds"
                    )))
                }
            };
            let p = lhv::lhv_threshold(&graph, Level::Truncated(2), bound, DEFAULT_THRESHOLD_TOL)?;
            set.rows.push(vec![
                Cell::Text(family.name().to_string()),
                Cell::Int(n),
                Cell::Num(Some(bound)),
                Cell::Text(source.to_string()),
                Cell::Num(p),
            ]);
        }
    }
    Ok(set)
}
