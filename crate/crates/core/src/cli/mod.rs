//! The `rgstate` command line.
//!
//! Single results are printed as one JSON object, sweeps as `p,value` CSV (or
//! a JSON array of records). Exit status is 0 on success, 1 when a
//! computation fails and 2 on usage errors.

pub mod figs;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::density::{self, Bipartition, DEFAULT_RANK_TOL};
use crate::lhv;
use crate::sampler;
use crate::state;
use crate::witness::{self, Level, RemovalProfile, DEFAULT_THRESHOLD_TOL};
use crate::{check_probability, round_significant, Error, Graph, Result};

pub use figs::FigTarget;

/// Significant digits of every printed number.
pub const OUTPUT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "rgstate", version, about = "Randomized graph states: overlaps, witnesses, thresholds")]
struct Cli {
    /// Worker threads for parallel reductions (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GraphArg {
    /// Graph spec: family (`cycle:5`, `grid:2x3`, `grid3:2x2x2`), `file:PATH` or inline JSON
    #[arg(long)]
    graph: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Randomization overlap L, or the pure overlap <G|F> with `--with`
    Overlap {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, required_unless_present = "with")]
        p: Option<f64>,
        #[arg(long, default_value = "exact", value_parser = parse_level)]
        level: Level,
        /// Second graph for the pure-state overlap
        #[arg(long)]
        with: Option<String>,
    },
    /// GME witness expectation 1/2 - L
    Witness {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value = "exact", value_parser = parse_level)]
        level: Level,
    },
    /// GME threshold: p_w (exact) or p_F (truncated)
    Threshold {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "exact", value_parser = parse_level)]
        level: Level,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_TOL)]
        tol: f64,
    },
    /// Classical bound D(G) by exhaustive search
    LhvBound {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Nonlocality threshold p_LHV
    LhvThreshold {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "2", value_parser = parse_level)]
        level: Level,
        /// Known classical bound; computed when absent
        #[arg(long)]
        lhv_bound: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_TOL)]
        tol: f64,
    },
    /// Negativity across a bipartition such as `0,1|2`
    Negativity {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        bipartition: String,
    },
    /// Numerical rank of the randomized state
    Rank {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        p: f64,
        /// Relative eigenvalue cutoff
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
    },
    /// Dimension of the span of all spanning-subgraph states
    Dim {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Size of a minimum vertex cover
    Cover {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Monte Carlo of the probabilistic preparation
    Sample {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A quantity evaluated on a grid of p values
    Sweep {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, value_enum)]
        quantity: Quantity,
        #[arg(long = "p-grid", default_value = "0.5:1.0:0.01")]
        p_grid: String,
        #[arg(long, default_value = "exact", value_parser = parse_level)]
        level: Level,
        #[arg(long)]
        bipartition: Option<String>,
        #[arg(long)]
        lhv_bound: Option<f64>,
        /// Relative eigenvalue cutoff for `rank`
        #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        out: OutFormat,
    },
    /// Regenerate figure datasets as CSV
    Figs {
        #[arg(long, value_enum)]
        target: FigTarget,
        /// Write `<target>.csv` files here instead of printing
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// JSON object of known classical bounds, `{"cycle:9": 0.3}`
        #[arg(long)]
        lhv_bounds: Option<PathBuf>,
        /// Largest vertex count for fig9
        #[arg(long, default_value_t = figs::FIG9_DEFAULT_MAX_N)]
        max_n: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    Overlap,
    GmeWitness,
    LhvWitness,
    Negativity,
    Rank,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

/// One point of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub p: f64,
    pub value: f64,
    pub quantity: Quantity,
    pub graph_spec: String,
    pub level: String,
}

fn parse_level(s: &str) -> std::result::Result<Level, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn execute(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let mut buffer = Vec::new();
            let result = pool.install(|| dispatch(cli.command, &mut buffer));
            out.write_all(&buffer)?;
            result
        }
        None => dispatch(cli.command, out),
    }
}

fn round(x: f64) -> f64 {
    round_significant(x, OUTPUT_DIGITS)
}

fn emit(out: &mut impl Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Overlap { graph, p, level, with } => {
            let g = Graph::parse(&graph.graph)?;
            if let Some(other) = with {
                let f = Graph::parse(&other)?;
                let value = state::overlap(&g, &f)?;
                return emit(out, &json!({ "graph_spec": graph.graph, "with": other, "overlap": round(value) }));
            }
            let p = p.expect("required by clap");
            check_probability(p)?;
            let value = RemovalProfile::new(&g, level)?.overlap(p);
            emit(
                out,
                &json!({ "graph_spec": graph.graph, "p": p, "level": level, "overlap": round(value) }),
            )
        }
        Command::Witness { graph, p, level } => {
            let g = Graph::parse(&graph.graph)?;
            let mut eval = witness::gme_witness_value(&g, p, level)?.with_spec(graph.graph);
            eval.overlap_value = round(eval.overlap_value);
            eval.witness_value = round(eval.witness_value);
            emit(out, &serde_json::to_value(eval)?)
        }
        Command::Threshold { graph, level, tol } => {
            let g = Graph::parse(&graph.graph)?;
            let root = witness::gme_threshold(&g, level, tol)?.map(round);
            let key = if level == Level::Exact { "p_w" } else { "p_F" };
            emit(out, &json!({ "graph_spec": graph.graph, "level": level, key: root }))
        }
        Command::LhvBound { graph } => {
            let g = Graph::parse(&graph.graph)?;
            let d = lhv::lhv_bound(&g)?;
            emit(out, &json!({ "graph_spec": graph.graph, "lhv_bound": round(d) }))
        }
        Command::LhvThreshold { graph, level, lhv_bound, tol } => {
            let g = Graph::parse(&graph.graph)?;
            let d = match lhv_bound {
                Some(d) => d,
                None => lhv::lhv_bound(&g)?,
            };
            let root = lhv::lhv_threshold(&g, level, d, tol)?.map(round);
            emit(
                out,
                &json!({ "graph_spec": graph.graph, "level": level, "lhv_bound": round(d), "p_lhv": root }),
            )
        }
        Command::Negativity { graph, p, bipartition } => {
            let g = Graph::parse(&graph.graph)?;
            let cut = Bipartition::parse(g.vertex_count(), &bipartition)?;
            let value = density::negativity(&density::randomize(&g, p)?, &cut)?;
            emit(
                out,
                &json!({ "graph_spec": graph.graph, "p": p, "bipartition": bipartition, "negativity": round(value) }),
            )
        }
        Command::Rank { graph, p, tol } => {
            let g = Graph::parse(&graph.graph)?;
            let rank = density::numerical_rank(&density::randomize(&g, p)?, tol)?;
            emit(out, &json!({ "graph_spec": graph.graph, "p": p, "rank": rank }))
        }
        Command::Dim { graph } => {
            let g = Graph::parse(&graph.graph)?;
            let dim = density::subgraph_space_dimension(&g)?;
            emit(out, &json!({ "graph_spec": graph.graph, "dimension": dim }))
        }
        Command::Cover { graph } => {
            let g = Graph::parse(&graph.graph)?;
            let size = g.min_vertex_cover()?;
            emit(out, &json!({ "graph_spec": graph.graph, "min_vertex_cover": size }))
        }
        Command::Sample { graph, p, shots, seed } => {
            let g = Graph::parse(&graph.graph)?;
            let sample = sampler::sample_preparation(&g, p, shots, seed)?;
            emit(out, &sample.to_json(&graph.graph))
        }
        Command::Sweep {
            graph,
            quantity,
            p_grid,
            level,
            bipartition,
            lhv_bound,
            tol,
            out: format,
        } => {
            let g = Graph::parse(&graph.graph)?;
            let grid = parse_p_grid(&p_grid)?;
            let options = SweepOptions {
                level,
                bipartition: bipartition.as_deref(),
                lhv_bound,
                rank_tol: tol,
            };
            let records = sweep(&g, &graph.graph, quantity, &grid, &options)?;
            match format {
                OutFormat::Csv => write_sweep_csv(out, &records),
                OutFormat::Json => emit(out, &serde_json::to_value(&records)?),
            }
        }
        Command::Figs {
            target,
            out_dir,
            lhv_bounds,
            max_n,
        } => {
            let known = match lhv_bounds {
                Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
                None => Default::default(),
            };
            let datasets = figs::generate(target, &figs::FigOptions { known_bounds: known, fig9_max_n: max_n })?;
            for set in datasets {
                match &out_dir {
                    Some(dir) => {
                        fs::create_dir_all(dir)?;
                        let path = dir.join(format!("{}.csv", set.name));
                        fs::write(&path, set.to_csv())?;
                        writeln!(out, "{}", path.display())?;
                    }
                    None => {
                        writeln!(out, "# {}", set.name)?;
                        write!(out, "{}", set.to_csv())?;
                    }
                }
            }
            Ok(())
        }
    }
}

/// Parses `start:stop:step`; both ends are included when the step divides
/// the range.
pub fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidArgument(format!("p-grid `{text}` is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    check_probability(start)?;
    check_probability(stop)?;
    if !(step > 0.0) || start > stop {
        return Err(Error::InvalidArgument(format!(
            "p-grid `{text}` needs start <= stop and a positive step"
        )));
    }
    let span = (stop - start) / step;
    let steps = if (span - span.round()).abs() < 1e-9 { span.round() } else { span.floor() } as usize;
    Ok((0..=steps)
        .map(|i| round(start + i as f64 * step).min(stop))
        .collect())
}

pub struct SweepOptions<'a> {
    pub level: Level,
    pub bipartition: Option<&'a str>,
    pub lhv_bound: Option<f64>,
    pub rank_tol: f64,
}

/// Evaluates `quantity` at every grid point, ascending in `p`.
pub fn sweep(
    graph: &Graph,
    spec: &str,
    quantity: Quantity,
    grid: &[f64],
    options: &SweepOptions,
) -> Result<Vec<SweepRecord>> {
    let mut ps = grid.to_vec();
    for &p in &ps {
        check_probability(p)?;
    }
    ps.sort_by(f64::total_cmp);
    let level_label = match quantity {
        Quantity::Negativity | Quantity::Rank => "exact".to_string(),
        _ => options.level.to_string(),
    };
    let values: Vec<f64> = match quantity {
        Quantity::Overlap | Quantity::GmeWitness | Quantity::LhvWitness => {
            let profile = RemovalProfile::new(graph, options.level)?;
            let constant = match quantity {
                Quantity::Overlap => None,
                Quantity::GmeWitness => Some(0.5),
                _ => Some(match options.lhv_bound {
                    Some(d) if d > 0.0 && d <= 1.0 => d,
                    Some(d) => return Err(Error::InvalidLhvBound(d)),
                    None => lhv::lhv_bound(graph)?,
                }),
            };
            ps.iter()
                .map(|&p| {
                    let l = profile.overlap(p);
                    constant.map_or(l, |c| c - l)
                })
                .collect()
        }
        Quantity::Negativity => {
            let text = options
                .bipartition
                .ok_or_else(|| Error::InvalidArgument("negativity sweeps need --bipartition".into()))?;
            let cut = Bipartition::parse(graph.vertex_count(), text)?;
            ps.iter()
                .map(|&p| density::negativity(&density::randomize(graph, p)?, &cut))
                .collect::<Result<_>>()?
        }
        Quantity::Rank => ps
            .iter()
            .map(|&p| Ok(density::numerical_rank(&density::randomize(graph, p)?, options.rank_tol)? as f64))
            .collect::<Result<_>>()?,
    };
    Ok(ps
        .into_iter()
        .zip(values)
        .map(|(p, value)| SweepRecord {
            p,
            value: round(value),
            quantity,
            graph_spec: spec.to_string(),
            level: level_label.clone(),
        })
        .collect())
}

fn write_sweep_csv(out: &mut impl Write, records: &[SweepRecord]) -> Result<()> {
    writeln!(out, "p,value")?;
    for r in records {
        writeln!(out, "{},{}", r.p, r.value)?;
    }
    Ok(())
}
