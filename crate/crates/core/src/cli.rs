//! Command-line front end: argument parsing into a replayable [`RunPlan`],
//! dispatch to the library, and deterministic JSON, CSV or text output.
//!
//! CSV and text output flatten each report into one table:
//!
//! | subcommand        | columns                                              |
//! |-------------------|------------------------------------------------------|
//! | `ktheory`         | group, rank, torsion, display                        |
//! | `spectra`         | t, partial, tail_bound (one row per t)               |
//! | `af`              | n, dim, partial, majorant                            |
//! | `crossed`         | slope, window_lo, window_hi, distinct, base_slope, phi0 |
//! | `cohomology`      | n, dim_v, coboundary_rank, dim                       |
//! | `building validate` | condition, passed, failures                        |
//! | `building links`  | vertex, black, white, edges, complete_bipartite      |
//! | other `building`  | field, value                                         |
//! | `tau`             | x, residual                                          |
//! | `catalog`         | name, vertices, edges, betti, k0, k1, lambda         |

use std::ffi::OsString;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::buildings::{
    bm_group_data, family_graphs, family_presentation, four_fold_cover, polyhedron_from_presentation,
    stable_pairs_check, validate_presentation, vertex_links, BipartiteGraph, PolygonalPresentation,
};
use crate::error::{Error, Result};
use crate::graphs::{cayley_schottky_matrix, directed_edge_matrix, genus2_catalog, kato_graph, FiniteGraph};
use crate::ktheory::{ck_k_theory, stable_iso_verdict};
use crate::matrix::BinaryMatrix;
use crate::shift::{budget_from_env, SFTData};
use crate::triples::{
    af_summability_report, crossed_product_spectrum, jlo_phi0, summability_exponent_fit, theta_trace,
    zeta_partial, AFTriple, CrossedProductTriple, GradingOperator, JloInput, Parity, SpectralTruncation,
    SpectralValue,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fully parsed invocation. Every plan can be rendered back to argv.
#[derive(Parser, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[command(name = "mumford", version, about = "Invariants of Schottky groups, Cuntz–Krieger algebras and square-complex buildings")]
pub struct RunPlan {
    /// Output format: json, csv or table.
    #[arg(long, global = true, default_value = "json", value_parser = Format::parse)]
    pub format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Where a transition matrix comes from.
#[derive(Args, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct SftSource {
    /// Full Schottky shift of this rank.
    #[arg(long)]
    pub genus: Option<usize>,
    /// 0/1 matrix as JSON or CSV.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Graph JSON; its directed edge matrix is used.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Command {
    /// K-groups of the Cuntz–Krieger algebra.
    Ktheory {
        #[command(flatten)]
        source: SftSource,
        /// Second matrix for a stable isomorphism verdict.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Theta and zeta sums of the grading, CK residuals and commutator norms.
    Spectra {
        #[command(flatten)]
        source: SftSource,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long = "t", allow_negative_numbers = true, value_delimiter = ',', default_values_t = vec![1.0])]
        t: Vec<f64>,
        #[arg(long = "s", allow_negative_numbers = true, value_delimiter = ',', default_values_t = vec![1.0])]
        s: Vec<f64>,
        /// Letter permutation preserving the matrix.
        #[arg(long, value_delimiter = ',')]
        twist: Option<Vec<usize>>,
        /// Skip the truncated operators.
        #[arg(long)]
        no_commutators: bool,
    },
    /// Summability of the AF core with eigenvalues (dim A_n)^q.
    Af {
        #[command(flatten)]
        source: SftSource,
        #[arg(long, default_value_t = 8)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 3.0)]
        q: f64,
        /// Block variant with the complex schedule.
        #[arg(long)]
        even: bool,
    },
    /// Counting-function exponent of the crossed-product operator.
    Crossed {
        #[arg(long, value_enum, default_value_t = BaseSchedule::Linear)]
        base: BaseSchedule,
        /// Number of base eigenvalues.
        #[arg(long, default_value_t = 200)]
        count: u64,
        /// Fourier cutoff M.
        #[arg(long, default_value_t = 200)]
        cutoff: u64,
        /// Heat scale of the supertrace.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// dim V_n / δV_{n−1} by exact rank.
    Cohomology {
        #[command(flatten)]
        source: SftSource,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Polygonal presentations.
    Building {
        #[command(subcommand)]
        verb: BuildingVerb,
    },
    /// Positive root of the exponent equation for a right-angled polygon.
    Tau {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
    },
    /// The genus-2 dual graphs and the Kato family.
    Catalog {
        /// Largest Kato parameter r.
        #[arg(long, default_value_t = 5)]
        kato: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseSchedule {
    /// λ_j = j.
    Linear,
    /// λ_j = j².
    Squares,
    /// A single zero eigenvalue.
    Zero,
}

impl BaseSchedule {
    fn as_str(self) -> &'static str {
        match self {
            BaseSchedule::Linear => "linear",
            BaseSchedule::Squares => "squares",
            BaseSchedule::Zero => "zero",
        }
    }
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuildingVerb {
    /// Check a presentation against its link graphs.
    Validate {
        #[arg(long)]
        presentation: PathBuf,
        /// JSON array of bipartite graphs.
        #[arg(long)]
        graphs: PathBuf,
    },
    /// The square family over 4q letters.
    Family {
        #[arg(long)]
        q: usize,
        /// Include the four-fold cover.
        #[arg(long)]
        cover: bool,
        /// Include BM group data of the cover.
        #[arg(long)]
        bm: bool,
    },
    /// Four-fold cover of a square presentation.
    Cover {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// BM group data of a presentation with stable pairs.
    Bm {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Vertex links of the assembled polyhedron.
    Links {
        #[arg(long)]
        presentation: PathBuf,
    },
}

fn usage(flag: &str, msg: &str) -> Error {
    Error::Parse(format!("{flag}: {msg}"))
}

fn check_readable(flag: &str, path: &Path) -> Result<()> {
    std::fs::File::open(path)
        .map(|_| ())
        .map_err(|e| Error::Io(format!("{flag} {}: {e}", path.display())))
}

fn check_source(s: &SftSource) -> Result<()> {
    if s.genus == Some(0) {
        return Err(usage("--genus", "must be at least 1"));
    }
    if let Some(p) = &s.matrix {
        check_readable("--matrix", p)?;
    }
    if let Some(p) = &s.graph {
        check_readable("--graph", p)?;
    }
    Ok(())
}

fn positive(flag: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(usage(flag, &format!("{x} must be positive")))
    }
}

impl RunPlan {
    /// Range and file checks beyond what the argument grammar enforces.
    pub fn validate(&self) -> Result<()> {
        match &self.command {
            Command::Ktheory { source, against } => {
                check_source(source)?;
                if let Some(p) = against {
                    check_readable("--against", p)?;
                }
            }
            Command::Spectra { source, levels, t, s, .. } => {
                check_source(source)?;
                if *levels < 2 {
                    return Err(usage("--levels", "must be at least 2"));
                }
                t.iter().try_for_each(|&x| positive("--t", x))?;
                if let Some(x) = s.iter().find(|x| !x.is_finite()) {
                    return Err(usage("--s", &format!("{x} is not finite")));
                }
            }
            Command::Af { source, levels, p, q, .. } => {
                check_source(source)?;
                if *levels == 0 {
                    return Err(usage("--levels", "must be at least 1"));
                }
                positive("--p", *p)?;
                positive("--q", *q)?;
            }
            Command::Crossed { count, scale, .. } => {
                if *count == 0 {
                    return Err(usage("--count", "must be at least 1"));
                }
                positive("--scale", *scale)?;
            }
            Command::Cohomology { source, levels } => {
                check_source(source)?;
                if *levels == 0 {
                    return Err(usage("--levels", "must be at least 1"));
                }
            }
            Command::Building { verb } => match verb {
                BuildingVerb::Validate { presentation, graphs } => {
                    check_readable("--presentation", presentation)?;
                    check_readable("--graphs", graphs)?;
                }
                BuildingVerb::Family { q, .. } => {
                    if *q == 0 {
                        return Err(usage("--q", "must be at least 1"));
                    }
                }
                BuildingVerb::Cover { presentation }
                | BuildingVerb::Bm { presentation }
                | BuildingVerb::Links { presentation } => check_readable("--presentation", presentation)?,
            },
            Command::Tau { weights } => {
                if weights.is_empty() {
                    return Err(usage("--weights", "at least one weight is required"));
                }
            }
            Command::Catalog { .. } => {}
        }
        Ok(())
    }

    /// The argv that parses back to this plan.
    pub fn render(&self) -> Vec<String> {
        let mut v: Vec<String> = vec!["mumford".into()];
        let push = |v: &mut Vec<String>, flag: &str, value: String| {
            v.push(flag.into());
            v.push(value);
        };
        let path = |p: &Path| p.to_string_lossy().into_owned();
        let join = |xs: &[f64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let source = |v: &mut Vec<String>, s: &SftSource| {
            if let Some(g) = s.genus {
                push(v, "--genus", g.to_string());
            }
            if let Some(p) = &s.matrix {
                push(v, "--matrix", path(p));
            }
            if let Some(p) = &s.graph {
                push(v, "--graph", path(p));
            }
        };
        match &self.command {
            Command::Ktheory { source: s, against } => {
                v.push("ktheory".into());
                source(&mut v, s);
                if let Some(p) = against {
                    push(&mut v, "--against", path(p));
                }
            }
            Command::Spectra { source: s, levels, t, s: zs, twist, no_commutators } => {
                v.push("spectra".into());
                source(&mut v, s);
                push(&mut v, "--levels", levels.to_string());
                push(&mut v, "--t", join(t));
                push(&mut v, "--s", join(zs));
                if let Some(tw) = twist {
                    push(&mut v, "--twist", tw.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
                }
                if *no_commutators {
                    v.push("--no-commutators".into());
                }
            }
            Command::Af { source: s, levels, p, q, even } => {
                v.push("af".into());
                source(&mut v, s);
                push(&mut v, "--levels", levels.to_string());
                push(&mut v, "--p", p.to_string());
                push(&mut v, "--q", q.to_string());
                if *even {
                    v.push("--even".into());
                }
            }
            Command::Crossed { base, count, cutoff, scale } => {
                v.push("crossed".into());
                push(&mut v, "--base", base.as_str().into());
                push(&mut v, "--count", count.to_string());
                push(&mut v, "--cutoff", cutoff.to_string());
                push(&mut v, "--scale", scale.to_string());
            }
            Command::Cohomology { source: s, levels } => {
                v.push("cohomology".into());
                source(&mut v, s);
                push(&mut v, "--levels", levels.to_string());
            }
            Command::Building { verb } => {
                v.push("building".into());
                match verb {
                    BuildingVerb::Validate { presentation, graphs } => {
                        v.push("validate".into());
                        push(&mut v, "--presentation", path(presentation));
                        push(&mut v, "--graphs", path(graphs));
                    }
                    BuildingVerb::Family { q, cover, bm } => {
                        v.push("family".into());
                        push(&mut v, "--q", q.to_string());
                        if *cover {
                            v.push("--cover".into());
                        }
                        if *bm {
                            v.push("--bm".into());
                        }
                    }
                    BuildingVerb::Cover { presentation } => {
                        v.push("cover".into());
                        push(&mut v, "--presentation", path(presentation));
                    }
                    BuildingVerb::Bm { presentation } => {
                        v.push("bm".into());
                        push(&mut v, "--presentation", path(presentation));
                    }
                    BuildingVerb::Links { presentation } => {
                        v.push("links".into());
                        push(&mut v, "--presentation", path(presentation));
                    }
                }
            }
            Command::Tau { weights } => {
                v.push("tau".into());
                push(&mut v, "--weights", weights.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
            }
            Command::Catalog { kato } => {
                v.push("catalog".into());
                push(&mut v, "--kato", kato.to_string());
            }
        }
        push(&mut v, "--format", self.format.as_str().into());
        if let Some(o) = &self.output {
            push(&mut v, "--output", path(o));
        }
        v
    }
}

/// Keeps library errors raised by value parsers (such as an unknown
/// format); everything else becomes a usage error.
fn clap_error(e: &clap::Error) -> Error {
    std::error::Error::source(e)
        .and_then(|s| s.downcast_ref::<Error>())
        .cloned()
        .unwrap_or_else(|| Error::Parse(e.to_string().trim_end().to_string()))
}

/// Parses and validates argv (including the program name).
pub fn parse_invocation<I, T>(argv: I) -> Result<RunPlan>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let plan = RunPlan::try_parse_from(argv).map_err(|e| clap_error(&e))?;
    plan.validate()?;
    Ok(plan)
}

/// A report: the JSON document and its flat table view.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<Value>>) -> Self {
        Self { json, header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    /// Two-column view of the top-level fields.
    fn fields(json: Value) -> Self {
        let rows = match &json {
            Value::Object(m) => m.iter().map(|(k, v)| vec![Value::String(k.clone()), v.clone()]).collect(),
            other => vec![vec![Value::String("value".into()), other.clone()]],
        };
        Self { json, header: vec!["field".into(), "value".into()], rows }
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Matrix files: a JSON array of rows, a JSON object with "matrix" and
/// optional "labels" and "involution" (pairs), or CSV integer rows.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Rows(Vec<Vec<i64>>),
    Full {
        matrix: Vec<Vec<i64>>,
        #[serde(default)]
        labels: Option<Vec<Value>>,
        #[serde(default)]
        involution: Option<Vec<(usize, usize)>>,
    },
}

fn load_matrix_file(path: &Path) -> Result<SFTData> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let (rows, labels, pairs) = if is_csv {
        let text = read_to_string(path)?;
        let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        let rows = reader
            .records()
            .map(|r| {
                let r = r.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                r.iter()
                    .map(|x| x.parse::<i64>().map_err(|e| Error::Parse(format!("{}: {x}: {e}", path.display()))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        (rows, None, None)
    } else {
        match read_json::<MatrixFile>(path)? {
            MatrixFile::Rows(r) => (r, None, None),
            MatrixFile::Full { matrix, labels, involution } => (matrix, labels, involution),
        }
    };
    let m = BinaryMatrix::from_rows(&rows)?;
    let n = m.size();
    let labels = match labels {
        Some(ls) => ls
            .into_iter()
            .map(|l| match l {
                Value::String(s) => s,
                other => other.to_string(),
            })
            .collect(),
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    let involution = pairs.map(|ps| {
        let mut inv = vec![usize::MAX; n];
        for (a, b) in ps {
            if a < n && b < n {
                inv[a] = b;
                inv[b] = a;
            }
        }
        inv
    });
    SFTData::new(m, labels, involution)
}

fn load_sft(s: &SftSource) -> Result<SFTData> {
    let sft = match (s.genus, &s.matrix, &s.graph) {
        (Some(g), _, _) => SFTData::schottky(g)?,
        (_, Some(p), _) => load_matrix_file(p)?,
        (_, _, Some(p)) => {
            let g: FiniteGraph = read_json(p)?;
            SFTData::from_edge_matrix(&directed_edge_matrix(&g)?)?
        }
        _ => return Err(usage("--genus|--matrix|--graph", "one source is required")),
    };
    Ok(sft.with_budget(budget_from_env()))
}

fn load_presentation(p: &Path) -> Result<PolygonalPresentation> {
    read_json(p)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn presentation_json(p: &PolygonalPresentation) -> Value {
    to_value(p)
}

/// Runs a plan.
pub fn execute(plan: &RunPlan) -> Result<Report> {
    match &plan.command {
        Command::Ktheory { source, against } => {
            let a = load_sft(source)?;
            let k = ck_k_theory(a.matrix());
            let mut json = to_value(&k);
            if let Some(p) = against {
                let b = load_matrix_file(p)?;
                json["verdict"] = to_value(&stable_iso_verdict(a.matrix(), b.matrix()));
            }
            let rows = vec![
                vec![json!("K0"), json!(k.k0.rank), json["k0"]["torsion"].clone(), json!(k.k0.to_string())],
                vec![json!("K1"), json!(k.k1.rank), json!([]), json!(k.k1_group().to_string())],
            ];
            Ok(Report::new(json, &["group", "rank", "torsion", "display"], rows))
        }
        Command::Spectra { source, levels, t, s, twist, no_commutators } => {
            let sft = load_sft(source)?;
            let perron = sft.perron_data()?;
            let grading = GradingOperator::from_sft(&sft, *levels)?;
            let thetas = t.iter().map(|&t| theta_trace(&grading, t)).collect::<Result<Vec<_>>>()?;
            let zetas: Vec<_> = s.iter().map(|&s| zeta_partial(&grading, s)).collect();
            let mut json = json!({
                "alphabet": sft.labels(),
                "lambda": perron.lambda,
                "delta_h": perron.delta_h,
                "levels": levels,
                "e_hat": grading.multiplicities(),
                "theta": thetas,
                "zeta": zetas,
            });
            if !no_commutators {
                let tr = SpectralTruncation::build(&sft, *levels, twist.clone())?;
                json["ck_residuals"] = to_value(&tr.ck_residuals());
                json["commutators"] = to_value(&tr.commutator_norms());
            }
            let rows = thetas
                .iter()
                .map(|th| vec![json!(th.t), json!(th.partial), json!(th.tail_bound)])
                .collect();
            Ok(Report::new(json, &["t", "partial", "tail_bound"], rows))
        }
        Command::Af { source, levels, p, q, even } => {
            let sft = load_sft(source)?;
            let parity = if *even { Parity::Even } else { Parity::Odd };
            let a = AFTriple::from_core(&sft, *levels, *p, *q, parity)?;
            let r = af_summability_report(&a, *levels)?;
            let mut json = to_value(&r);
            json["dims"] = to_value(&a.dims());
            let rows = (0..*levels)
                .map(|i| vec![json!(i + 1), json!(a.dims()[i]), json!(r.partials[i]), json!(r.majorants[i])])
                .collect();
            Ok(Report::new(json, &["n", "dim", "partial", "majorant"], rows))
        }
        Command::Crossed { base, count, cutoff, scale } => {
            let c = match base {
                BaseSchedule::Linear => CrossedProductTriple::from_schedule(*count, |j| j as f64, *cutoff)?,
                BaseSchedule::Squares => CrossedProductTriple::from_schedule(*count, |j| (j * j) as f64, *cutoff)?,
                BaseSchedule::Zero => CrossedProductTriple::new(vec![(0.0, 1)], *cutoff)?,
            };
            let fit = summability_exponent_fit(&crossed_product_spectrum(&c))?;
            let base_spectrum: Vec<SpectralValue> =
                c.base().iter().map(|&(value, multiplicity)| SpectralValue { value, multiplicity }).collect();
            let base_slope = summability_exponent_fit(&base_spectrum).ok().map(|f| f.slope);
            let phi0 = jlo_phi0(JloInput::Crossed(&c), *scale)?;
            let json = json!({
                "base": base.as_str(),
                "count": count,
                "cutoff": cutoff,
                "slope": fit.slope,
                "window": [fit.window.0, fit.window.1],
                "distinct": fit.distinct,
                "base_slope": base_slope,
                "phi0": phi0,
            });
            let rows = vec![vec![
                json!(fit.slope),
                json!(fit.window.0),
                json!(fit.window.1),
                json!(fit.distinct),
                json!(base_slope),
                json!(phi0),
            ]];
            Ok(Report::new(json, &["slope", "window_lo", "window_hi", "distinct", "base_slope", "phi0"], rows))
        }
        Command::Cohomology { source, levels } => {
            let sft = load_sft(source)?;
            let lv = sft.cohomology_filtration_dims(*levels)?;
            let rows = lv
                .iter()
                .map(|l| vec![json!(l.n), json!(l.dim_v), json!(l.coboundary_rank), json!(l.dim)])
                .collect();
            Ok(Report::new(json!({ "levels": lv }), &["n", "dim_v", "coboundary_rank", "dim"], rows))
        }
        Command::Building { verb } => execute_building(verb),
        Command::Tau { weights } => {
            let r = crate::buildings::solve_tau(weights)?;
            let json = json!({ "weights": weights, "x": r.x, "residual": r.residual });
            Ok(Report::new(json, &["x", "residual"], vec![vec![json!(r.x), json!(r.residual)]]))
        }
        Command::Catalog { kato } => {
            let names = ["two_loops", "theta", "dumbbell"];
            let mut graphs: Vec<(String, FiniteGraph)> =
                names.iter().map(|s| s.to_string()).zip(genus2_catalog()).collect();
            graphs.extend((1..=*kato).map(|r| (format!("kato_{r}"), kato_graph(r))));
            let reference = cayley_schottky_matrix(2)?;
            let mut entries = Vec::new();
            let mut rows = Vec::new();
            for (name, g) in &graphs {
                let e = directed_edge_matrix(g)?;
                let k = ck_k_theory(&e);
                let lambda = SFTData::from_edge_matrix(&e)?.perron_data()?.lambda;
                entries.push(json!({
                    "name": name,
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "betti": g.betti_number(),
                    "matrix": e.matrix,
                    "k": k,
                    "lambda": lambda,
                    "verdict_vs_a1": stable_iso_verdict(&reference, &e),
                }));
                rows.push(vec![
                    json!(name),
                    json!(g.vertex_count()),
                    json!(g.edge_count()),
                    json!(g.betti_number()),
                    json!(k.k0.to_string()),
                    json!(k.k1_group().to_string()),
                    json!(lambda),
                ]);
            }
            Ok(Report::new(
                json!({ "graphs": entries }),
                &["name", "vertices", "edges", "betti", "k0", "k1", "lambda"],
                rows,
            ))
        }
    }
}

fn execute_building(verb: &BuildingVerb) -> Result<Report> {
    match verb {
        BuildingVerb::Validate { presentation, graphs } => {
            let p = load_presentation(presentation)?;
            let gs: Vec<BipartiteGraph> = read_json(graphs)?;
            let r = validate_presentation(&p, &gs);
            let rows = r
                .checks
                .iter()
                .map(|c| vec![json!(c.condition), json!(c.passed), json!(c.failures)])
                .collect();
            let mut json = to_value(&r);
            json["passed"] = json!(r.passed());
            Ok(Report::new(json, &["condition", "passed", "failures"], rows))
        }
        BuildingVerb::Family { q, cover, bm } => {
            let p = family_presentation(*q)?;
            let validation = validate_presentation(&p, &family_graphs(*q)?);
            let x = polyhedron_from_presentation(&p)?;
            let links = vertex_links(&x);
            let mut json = json!({
                "q": q,
                "words": p.word_count(),
                "validation_passed": validation.passed(),
                "polyhedron": x.counts(),
                "links_complete_bipartite": links.iter().all(|l| l.is_complete_bipartite()),
            });
            if *cover || *bm {
                let c = four_fold_cover(&p)?;
                let cx = polyhedron_from_presentation(&c)?;
                let stable = stable_pairs_check(&c)?;
                json["cover"] = json!({
                    "words": c.word_count(),
                    "polyhedron": cx.counts(),
                    "stable_pairs": stable.holds,
                    "links_complete_bipartite": vertex_links(&cx).iter().all(|l| l.is_complete_bipartite()),
                });
                if *bm {
                    let d = bm_group_data(&c)?;
                    json["bm"] = json!({
                        "generators": [d.horizontal.len(), d.vertical.len()],
                        "relations": d.relations.len(),
                        "valences": d.valences,
                        "collapsed": d.collapsed,
                    });
                }
            }
            Ok(Report::fields(json))
        }
        BuildingVerb::Cover { presentation } => {
            let c = four_fold_cover(&load_presentation(presentation)?)?;
            Ok(Report::fields(presentation_json(&c)))
        }
        BuildingVerb::Bm { presentation } => {
            let p = load_presentation(presentation)?;
            let d = bm_group_data(&p)?;
            let mut json = presentation_json(&p);
            json["horizontal"] = to_value(&d.horizontal);
            json["vertical"] = to_value(&d.vertical);
            json["relations"] = to_value(&d.relations);
            json["valences"] = to_value(&d.valences);
            json["collapsed"] = to_value(&d.collapsed);
            Ok(Report::fields(json))
        }
        BuildingVerb::Links { presentation } => {
            let x = polyhedron_from_presentation(&load_presentation(presentation)?)?;
            let links = vertex_links(&x);
            let json = json!({
                "counts": x.counts(),
                "links": links
                    .iter()
                    .enumerate()
                    .map(|(v, l)| {
                        let mut j = to_value(l);
                        j["vertex"] = json!(v);
                        j["complete_bipartite"] = json!(l.is_complete_bipartite());
                        j
                    })
                    .collect::<Vec<_>>(),
            });
            let rows = links
                .iter()
                .enumerate()
                .map(|(v, l)| {
                    vec![
                        json!(v),
                        json!(l.black().len()),
                        json!(l.white().len()),
                        json!(l.edge_count()),
                        json!(l.is_complete_bipartite()),
                    ]
                })
                .collect();
            Ok(Report::new(json, &["vertex", "black", "white", "edges", "complete_bipartite"], rows))
        }
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            serde_json::Number::from_f64(round_sig(n.as_f64().unwrap_or(0.0))).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), round_floats(v))).collect()),
        other => other.clone(),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(0.0));
            if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
                x.to_string()
            } else {
                format!("{x:.11e}")
            }
        }
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

/// Serializes a report. JSON objects are emitted with sorted keys.
pub fn emit(report: &Report, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&round_floats(&report.json))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(&report.header).map_err(io)?;
            for r in &report.rows {
                w.write_record(r.iter().map(cell)).map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.to_string()))
        }
        Format::Table => {
            let cells: Vec<Vec<String>> = report.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
            let widths: Vec<usize> = (0..report.header.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].chars().count())
                        .chain([report.header[j].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |r: &[String]| -> String {
                let padded: Vec<String> =
                    r.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(&report.header);
            out += &(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  ") + "\n");
            for r in &cells {
                out += &line(r);
            }
            Ok(out.into_bytes())
        }
    }
}

/// Machine-readable error document.
pub fn error_json(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string(), "witness": e.witness() })
}

/// Entry point used by the binary; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let plan = match RunPlan::try_parse_from(argv) {
        Ok(p) => p,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            print_error(&clap_error(&e));
            return 2;
        }
    };
    if let Err(e) = plan.validate() {
        print_error(&e);
        return 2;
    }
    let bytes = match execute(&plan).and_then(|r| emit(&r, plan.format)) {
        Ok(b) => b,
        Err(e) => {
            print_error(&e);
            return 1;
        }
    };
    let written = match &plan.output {
        Some(p) => std::fs::write(p, &bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(&bytes).map_err(Error::from),
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            print_error(&e);
            1
        }
    }
}

fn print_error(e: &Error) {
    let doc = serde_json::to_string(&error_json(e)).expect("error document serializes");
    eprintln!("{doc}");
}
