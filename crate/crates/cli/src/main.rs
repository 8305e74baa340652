use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hyperricci::embedding::{embed, verify_embedding};
use hyperricci::forman::{cell_curvatures, graph_curvatures, hyperedge_curvatures};
use hyperricci::io::{
    detect_kind, ComplexFile, CoordinatesFile, CurvatureRecord, CurvatureReport, DualFile, EntityKind, FileKind,
    HypergraphFile, FAMILY_FORMAN_CELL, FAMILY_FORMAN_GRAPH, FAMILY_FORMAN_HYPEREDGE, FAMILY_FORMAN_UNWEIGHTED,
    FAMILY_OLLIVIER,
};
use hyperricci::ollivier::{dualize, ollivier_curvatures};
use hyperricci::weights::{assign_weights, metrized};
use hyperricci::{CellComplex64, DualEdgeWeightRule, FillPolicy, Geometry, WeightScheme};

const THREADS_VAR: &str = "HYPERRICCI_THREADS";

#[derive(Parser)]
#[command(name = "hyperricci", version, about = "Ricci curvature of directed, weighted hypernetworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parametrize a hypergraph as a weighted cell complex.
    Build {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = PolicyArg::All)]
        fill_policy: PolicyArg,
        #[arg(long, value_enum, default_value_t = WeightsArg::Combinatorial)]
        weights: WeightsArg,
        #[arg(long, value_enum, default_value_t = GeometryArg::Euclidean)]
        geometry: GeometryArg,
        /// Replace edge weights by shortest-path distances before weighting faces.
        #[arg(long)]
        metrize: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Forman curvature of cells, edges or hyperedges.
    Forman {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = LevelArg::Cell)]
        level: LevelArg,
        /// Report path; `.csv` selects CSV, anything else JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ollivier curvature of the dual graph of the k-cells.
    Ollivier {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = DualWeightArg::Unit)]
        dual_weight: DualWeightArg,
        #[arg(long, default_value_t = 0.0)]
        idleness: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-family minimum and maximum of a curvature report.
    Bounds { report: PathBuf },
    /// Dual graph of the k-cells, as JSON and optionally Graphviz.
    Dual {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = DualWeightArg::Unit)]
        dual_weight: DualWeightArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Moment-curve embedding, optionally certified by the exact verifier.
    Embed {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        /// Reject polygonal cells instead of fan-triangulating them.
        #[arg(long)]
        no_triangulate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Cyclic,
    SourceSink,
    FlowBc,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Combinatorial,
    Area,
    CmVolume,
    EdgeSum,
    EdgeProduct,
    ScaledSum,
    ScaledProduct,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Euclidean,
    Spherical,
    Hyperbolic,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Cell,
    Graph,
    Hyperedge,
    Unweighted,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualWeightArg {
    Unit,
    SharedFace,
    Barycenter,
}

impl From<PolicyArg> for FillPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Cyclic => FillPolicy::CyclicOnly,
            PolicyArg::SourceSink => FillPolicy::AcyclicSourceSink,
            PolicyArg::FlowBc => FillPolicy::FlowBAndC,
            PolicyArg::All => FillPolicy::FillAll,
        }
    }
}

fn scheme(weights: WeightsArg, geometry: GeometryArg) -> WeightScheme {
    let g = match geometry {
        GeometryArg::Euclidean => Geometry::Euclidean,
        GeometryArg::Spherical => Geometry::Spherical,
        GeometryArg::Hyperbolic => Geometry::Hyperbolic,
    };
    match weights {
        WeightsArg::Combinatorial => WeightScheme::Combinatorial,
        WeightsArg::Area => WeightScheme::GeometricArea(g),
        WeightsArg::CmVolume => WeightScheme::CayleyMengerVolume(g),
        WeightsArg::EdgeSum => WeightScheme::EdgeSum,
        WeightsArg::EdgeProduct => WeightScheme::EdgeProduct,
        WeightsArg::ScaledSum => WeightScheme::ScaledEdgeSum,
        WeightsArg::ScaledProduct => WeightScheme::ScaledEdgeProduct,
    }
}

impl From<DualWeightArg> for DualEdgeWeightRule {
    fn from(d: DualWeightArg) -> Self {
        match d {
            DualWeightArg::Unit => DualEdgeWeightRule::Unit,
            DualWeightArg::SharedFace => DualEdgeWeightRule::SharedFace,
            DualWeightArg::Barycenter => DualEdgeWeightRule::BarycenterDistance,
        }
    }
}

/// Input problems exit with 1, broken invariants with 2.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match configure_threads().map_err(Failure::Input).and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("invariant violated: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw.trim().parse().with_context(|| format!("{THREADS_VAR} must be a count, got `{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// A complex from a complex file, or the fully filled, combinatorially
/// weighted complex of a hypergraph file.
fn load_complex(path: &Path) -> anyhow::Result<CellComplex64> {
    let text = read(path)?;
    let ctx = || format!("in {}", path.display());
    match detect_kind(&text).with_context(ctx)? {
        FileKind::Complex => Ok(ComplexFile::parse(&text).with_context(ctx)?.to_complex().with_context(ctx)?),
        FileKind::Hypergraph => {
            let hg = HypergraphFile::parse(&text).with_context(ctx)?.to_hypergraph().with_context(ctx)?;
            let k = CellComplex64::from_hypergraph(&hg, FillPolicy::FillAll)?;
            Ok(assign_weights(&k, WeightScheme::Combinatorial)?)
        }
        other => bail!("{}: expected a complex or hypergraph file, found {other:?}", path.display()),
    }
}

fn write_report(records: Vec<CurvatureRecord>, output: Option<&Path>) -> anyhow::Result<()> {
    let report = CurvatureReport::new(records)?;
    let csv = output.is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    let text = if csv { report.to_csv()? } else { report.to_canonical()? };
    emit(output, &text)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build { input, fill_policy, weights, geometry, metrize, output } => {
            let text = read(&input)?;
            let hg = HypergraphFile::parse(&text)
                .and_then(|f| f.to_hypergraph::<f64>())
                .with_context(|| format!("in {}", input.display()))?;
            let policy = FillPolicy::from(fill_policy);
            let mut k = CellComplex64::from_hypergraph(&hg, policy)?;
            if metrize {
                k = metrized(&k);
            }
            let scheme = scheme(weights, geometry);
            let k = assign_weights(&k, scheme)?;
            emit(output.as_deref(), &ComplexFile::from_complex(&k, Some(policy), Some(scheme)).to_canonical()?)?;
        }
        Command::Forman { input, level, output } => {
            let records = match level {
                LevelArg::Unweighted => unweighted_records(&input)?,
                LevelArg::Cell => {
                    let k = load_complex(&input)?;
                    cell_curvatures(&k)?
                        .into_iter()
                        .map(|(id, value)| {
                            let kind = if k.cells()[id.0].dim == 1 { EntityKind::Edge } else { EntityKind::Cell };
                            record(k.label(id), kind, FAMILY_FORMAN_CELL, value)
                        })
                        .collect()
                }
                LevelArg::Graph => {
                    let k = load_complex(&input)?;
                    graph_curvatures(&k)?
                        .into_iter()
                        .map(|(id, value)| record(k.label(id), EntityKind::Edge, FAMILY_FORMAN_GRAPH, value))
                        .collect()
                }
                LevelArg::Hyperedge => {
                    let k = load_complex(&input)?;
                    hyperedge_curvatures(&k)?
                        .into_iter()
                        .map(|(id, value)| record(id, EntityKind::Hyperedge, FAMILY_FORMAN_HYPEREDGE, value))
                        .collect()
                }
            };
            write_report(records, output.as_deref())?;
        }
        Command::Ollivier { input, k, dual_weight, idleness, output } => {
            let complex = load_complex(&input)?;
            let rule = DualEdgeWeightRule::from(dual_weight);
            let emb = match rule {
                DualEdgeWeightRule::BarycenterDistance => Some(embed(&complex, true)?),
                _ => None,
            };
            let g = dualize(&complex, k, rule, emb.as_ref())?;
            let values = ollivier_curvatures(&g, idleness)?;
            let records = g
                .edges()
                .iter()
                .zip(values)
                .map(|(e, v)| {
                    let id = format!("{}--{}", g.labels()[e.a], g.labels()[e.b]);
                    record(id, EntityKind::DualEdge, FAMILY_OLLIVIER, v)
                })
                .collect();
            write_report(records, output.as_deref())?;
        }
        Command::Bounds { report } => {
            let text = read(&report)?;
            let csv = report.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            let parsed = if csv { CurvatureReport::from_csv(&text) } else { CurvatureReport::parse(&text) }
                .with_context(|| format!("in {}", report.display()))?;
            let recomputed = CurvatureReport::new(parsed.records.clone())?;
            if recomputed.summary.is_empty() {
                return Err(Failure::Input(anyhow!("{}: report has no records", report.display())));
            }
            if !parsed.summary_consistent() {
                return Err(Failure::Internal(anyhow!(
                    "{}: stored summary disagrees with its records",
                    report.display()
                )));
            }
            for s in &recomputed.summary {
                println!("{}\tmin={}\tmax={}", s.family, s.min, s.max);
            }
        }
        Command::Dual { input, k, dual_weight, output, dot } => {
            let complex = load_complex(&input)?;
            let rule = DualEdgeWeightRule::from(dual_weight);
            let emb = match rule {
                DualEdgeWeightRule::BarycenterDistance => Some(embed(&complex, true)?),
                _ => None,
            };
            let g = dualize(&complex, k, rule, emb.as_ref())?;
            emit(output.as_deref(), &DualFile::from_dual(&g).to_canonical()?)?;
            if let Some(path) = dot {
                fs::write(&path, hyperricci::io::dual_to_dot(&g))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
        }
        Command::Embed { input, output, verify, no_triangulate } => {
            let complex = load_complex(&input)?;
            let emb = embed(&complex, !no_triangulate)?;
            let coords = CoordinatesFile::from_embedding(&emb).to_canonical()?;
            match (&output, verify) {
                (Some(p), _) => emit(Some(p), &coords)?,
                (None, false) => emit(None, &coords)?,
                (None, true) => {}
            }
            if verify {
                let violations = verify_embedding(&complex, &emb)?;
                let pairs: Vec<[String; 2]> =
                    violations.iter().map(|&(a, b)| [complex.label(a), complex.label(b)]).collect();
                let body = serde_json::json!({ "violations": pairs });
                println!("{}", serde_json::to_string(&body).map_err(anyhow::Error::from)?);
                if !pairs.is_empty() {
                    return Err(Failure::Internal(anyhow!("{} cell pairs meet outside a common face", pairs.len())));
                }
            }
        }
    }
    Ok(())
}

fn record(entity_id: String, kind: EntityKind, family: &str, value: f64) -> CurvatureRecord {
    CurvatureRecord { entity_id, kind, family: family.to_owned(), value }
}

/// `deg_in - deg_out` per hyperedge, read straight from a hypergraph or complex file.
fn unweighted_records(path: &Path) -> anyhow::Result<Vec<CurvatureRecord>> {
    let text = read(path)?;
    let ctx = || format!("in {}", path.display());
    let sides: Vec<(String, usize, usize)> = match detect_kind(&text).with_context(ctx)? {
        FileKind::Hypergraph => {
            let hg = HypergraphFile::parse(&text).with_context(ctx)?.to_hypergraph::<f64>().with_context(ctx)?;
            hg.hyperedges()
                .iter()
                .map(|h| hg.degrees(&h.id).map(|(i, o)| (h.id.clone(), i, o)))
                .collect::<Result<_, _>>()?
        }
        FileKind::Complex => ComplexFile::parse(&text)
            .with_context(ctx)?
            .hyperedges
            .into_iter()
            .map(|h| (h.id, h.tail.len(), h.head.len()))
            .collect(),
        other => bail!("{}: expected a complex or hypergraph file, found {other:?}", path.display()),
    };
    Ok(sides
        .into_iter()
        .map(|(id, i, o)| record(id, EntityKind::Hyperedge, FAMILY_FORMAN_UNWEIGHTED, i as f64 - o as f64))
        .collect())
}
