//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a cross-validation found discrepancies, 2 bad
//! input, 3 budget exhaustion (partial output is still written and flagged)
//! or an I/O failure.

pub mod cache;
pub mod spec;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use cache::{CacheEntry, CACHE_ENV, CACHE_FORMAT_VERSION};
pub use spec::{ClassifyTarget, CommandSpec, CountSource, ModelSpec, NormSpec, RunSpec};
pub use table::{Cell, Format, Table};

use crate::error::{Error, Result};
use crate::exact_torus::{classify_matrix, GeneratingSet, IntMatrix2, NTType};
use crate::experiments::density::classify_entries;
use crate::experiments::isolation::default_references;
use crate::experiments::{
    box_mass_series, count_surface_multicurves, count_torus_multicurves, cross_validate_torus, density_experiment,
    fit_loglog, growth_exponent, maher_proximity_profile, split_isolated_dense, CountReport, MassBox, Marking,
    Model, Restriction,
};
use crate::lamination::classify::{classify_word, ClassifyBudget, Verdict};
use crate::lamination::library::GeneratorLibrary;
use crate::lamination::orbit::{enumerate_orbit_ball, OrbitLimits};
use crate::lamination::{edge_weight, MappingWord, SurfaceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "genericity", version, about = "Counting experiments on mapping class groups")]
struct Cli {
    /// Output format; `classify` prints a bare label when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write plot data (density runs).
    #[arg(long, global = true)]
    plot_dir: Option<PathBuf>,
    /// Result cache directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Nielsen-Thurston type of one element.
    Classify(ClassifyArgs),
    /// List the elements of one ball.
    Ball {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        radius: i64,
    },
    /// Ball counts and the non-pseudo-Anosov share along a grid.
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Log-log growth exponent of ball or multicurve counts.
    Exponent {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "ball")]
        counts: CountKind,
        #[arg(long)]
        grid: Option<String>,
        /// Share of the largest grid points used in the fit.
        #[arg(long, default_value_t = crate::experiments::growth::DEFAULT_TOP_FRACTION)]
        top_fraction: f64,
    },
    /// Normalised counts of marking images in boxes.
    Boxmass {
        #[command(flatten)]
        model: ModelArgs,
        /// Torus marking as `p,q:w;...`; defaults to the standard pair.
        #[arg(long)]
        marking: Option<String>,
        #[arg(long, value_enum, default_value = "all")]
        restriction: RestrictionArg,
        /// `lo,..:hi,..`, repeatable; defaults to the unit box.
        #[arg(long = "box")]
        boxes: Vec<String>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Integral multicurve counts along a grid.
    Multicurves {
        /// `g,r`; the torus lattice model when omitted.
        #[arg(long)]
        surface: Option<String>,
        #[arg(long)]
        grid: Option<String>,
    },
    /// Split the non-pseudo-Anosov elements of a ball into k-isolated and
    /// k-dense ones.
    Isolation {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        radius: i64,
        #[arg(long, default_value_t = 8)]
        window: u32,
        /// `a,b,c,d`, repeatable.
        #[arg(long = "reference")]
        references: Vec<String>,
    },
    /// Histogram of relative distances to centralizers.
    Maher {
        #[arg(long)]
        radius: i64,
        #[arg(long, default_value_t = 8)]
        window: u32,
        #[arg(long = "reference")]
        references: Vec<String>,
    },
    /// Compare the two engines on random torus words.
    Crossval {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        length_cap: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// `a,b,c,d` in SL(2, Z).
    #[arg(long, conflicts_with_all = ["word", "moves"])]
    matrix: Option<String>,
    /// Generator letters; uppercase is the inverse, the rightmost acts first.
    #[arg(long, requires = "surface", conflicts_with = "moves")]
    word: Option<String>,
    /// Flip and relabel moves such as `F0 F2 P1,0,2`.
    #[arg(long, requires = "surface")]
    moves: Option<String>,
    #[arg(long)]
    surface: Option<String>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    #[arg(long)]
    max_period: Option<u32>,
    #[arg(long)]
    orbit_steps: Option<usize>,
    #[arg(long)]
    reducing_weight: Option<i64>,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "torus")]
    model: ModelKind,
    #[arg(long, value_enum, default_value = "l1")]
    norm: NormKind,
    /// Torus multicurve `p,q:w;...`; defaults to the standard pair.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    /// `g,r` for the engine model.
    #[arg(long, default_value = "1,2")]
    surface: String,
    #[arg(long)]
    word_cap: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelKind {
    Torus,
    Engine,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormKind {
    L1,
    Rho,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CountKind {
    Ball,
    Multicurves,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RestrictionArg {
    All,
    Nonpa,
}

impl BudgetArgs {
    fn resolve(&self) -> ClassifyBudget {
        let d = ClassifyBudget::default();
        ClassifyBudget {
            max_period: self.max_period.unwrap_or(d.max_period),
            max_weight: self.reducing_weight.unwrap_or(d.max_weight),
            orbit_steps: self.orbit_steps.unwrap_or(d.orbit_steps),
        }
    }
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelSpec> {
        Ok(match self.model {
            ModelKind::Torus => ModelSpec::Torus {
                norm: match self.norm {
                    NormKind::L1 => {
                        if self.sigma.is_some() || self.eta.is_some() {
                            return Err(Error::invalid("--sigma and --eta need --norm rho"));
                        }
                        NormSpec::L1
                    }
                    NormKind::Rho => {
                        let pair = "1,0;0,1";
                        NormSpec::rho(self.sigma.as_deref().unwrap_or(pair), self.eta.as_deref().unwrap_or(pair))?
                    }
                },
            },
            ModelKind::Engine => {
                let d = OrbitLimits::default();
                ModelSpec::Engine {
                    surface: spec::parse_surface(&self.surface)?,
                    limits: OrbitLimits {
                        word_cap: self.word_cap.unwrap_or(d.word_cap),
                        max_nodes: self.max_nodes.unwrap_or(d.max_nodes),
                    },
                    budget: self.budget.resolve(),
                }
            }
        })
    }
}

fn grid_or(grid: &Option<String>, default: impl FnOnce() -> Result<Vec<i64>>) -> Result<Vec<i64>> {
    match grid {
        Some(g) => spec::parse_grid(g),
        None => default(),
    }
}

/// Total edge weight of the library marking of `s`.
pub fn marking_weight(s: SurfaceSpec) -> Result<i64> {
    let lib = GeneratorLibrary::standard();
    Ok(lib.get(s)?.gamma0.iter().map(|c| edge_weight(c)).sum())
}

/// Default grid for a model: six doublings from 50 on the torus, and the
/// marking weight times 1, 2, 4, 8 for the engine.
pub fn default_grid(model: &ModelSpec) -> Result<Vec<i64>> {
    Ok(match model {
        ModelSpec::Torus { .. } => vec![50, 100, 200, 400, 800, 1600],
        ModelSpec::Engine { surface, .. } => {
            let f0 = marking_weight(*surface)?;
            vec![f0, 2 * f0, 4 * f0, 8 * f0]
        }
    })
}

fn references(raw: &[String]) -> Result<Vec<[i64; 4]>> {
    if raw.is_empty() {
        return Ok(default_references().iter().map(|m| m.to_i64().expect("small references")).collect());
    }
    raw.iter().map(|r| spec::parse_small_matrix(r)).collect()
}

fn build_spec(cli: Cli) -> Result<RunSpec> {
    let command = match cli.command {
        Cmd::Classify(a) => {
            let budget = a.budget.resolve();
            let target = match (a.matrix, a.word, a.moves) {
                (Some(m), _, _) => {
                    let m = spec::parse_matrix(&m)?;
                    ClassifyTarget::Matrix { entries: m.entries().map(|e| e.to_string()) }
                }
                (None, Some(word), _) => {
                    let surface = spec::parse_surface(a.surface.as_deref().unwrap_or_default())?;
                    ClassifyTarget::Word { surface, word, budget }
                }
                (None, None, Some(moves)) => {
                    let surface = spec::parse_surface(a.surface.as_deref().unwrap_or_default())?;
                    let parsed: MappingWord = moves.parse()?;
                    ClassifyTarget::Moves { surface, moves: parsed.to_string(), budget }
                }
                (None, None, None) => return Err(Error::invalid("classify needs --matrix, --word or --moves")),
            };
            CommandSpec::Classify { target, label_only: cli.format.is_none() }
        }
        Cmd::Ball { model, radius } => {
            if radius <= 0 {
                return Err(Error::invalid("--radius must be positive"));
            }
            CommandSpec::Ball { model: model.resolve()?, radius }
        }
        Cmd::Density { model, grid } => {
            let model = model.resolve()?;
            let grid = grid_or(&grid, || default_grid(&model))?;
            CommandSpec::Density { model, grid }
        }
        Cmd::Exponent { model, counts, grid, top_fraction } => {
            if !(top_fraction > 0.0 && top_fraction <= 1.0) {
                return Err(Error::invalid("--top-fraction must lie in (0, 1]"));
            }
            let source = match counts {
                CountKind::Ball => CountSource::Ball { model: model.resolve()? },
                CountKind::Multicurves => CountSource::Multicurves {
                    surface: match model.model {
                        ModelKind::Torus => None,
                        ModelKind::Engine => Some(spec::parse_surface(&model.surface)?),
                    },
                },
            };
            let grid = grid_or(&grid, || match &source {
                CountSource::Ball { model } => default_grid(model),
                CountSource::Multicurves { surface: None } => Ok(vec![25, 50, 100, 200, 400, 800]),
                CountSource::Multicurves { surface: Some(_) } => Ok(vec![2, 4, 6, 8, 10, 12]),
            })?;
            CommandSpec::Exponent { source, grid, top_fraction }
        }
        Cmd::Boxmass { model, marking, restriction, boxes, grid } => {
            let model = model.resolve()?;
            let marking = match (&model, marking) {
                (ModelSpec::Torus { .. }, m) => Some(spec::canonical_multicurve(m.as_deref().unwrap_or("1,0;0,1"))?),
                (ModelSpec::Engine { .. }, None) => None,
                (ModelSpec::Engine { .. }, Some(_)) => {
                    return Err(Error::invalid("--marking applies to the torus model; the engine uses its library marking"))
                }
            };
            let dim = match &model {
                ModelSpec::Torus { .. } => 2,
                ModelSpec::Engine { surface, .. } => surface.num_edges(),
            };
            let boxes = if boxes.is_empty() {
                vec![MassBox::unit(dim)]
            } else {
                boxes.iter().map(|b| spec::parse_box(b)).collect::<Result<_>>()?
            };
            let grid = grid_or(&grid, || match &model {
                ModelSpec::Torus { .. } => Ok(vec![200, 400, 800, 1600]),
                m => default_grid(m),
            })?;
            let restriction = match restriction {
                RestrictionArg::All => Restriction::All,
                RestrictionArg::Nonpa => Restriction::NonPseudoAnosov,
            };
            CommandSpec::Boxmass { model, marking, restriction, boxes, grid }
        }
        Cmd::Multicurves { surface, grid } => {
            let surface = surface.as_deref().map(spec::parse_surface).transpose()?;
            let grid = grid_or(&grid, || Ok(if surface.is_none() { vec![10, 20, 40, 80, 160] } else { vec![2, 4, 6, 8] }))?;
            CommandSpec::Multicurves { surface, grid }
        }
        Cmd::Isolation { k, radius, window, references: r } => {
            CommandSpec::Isolation { k, radius, window, references: references(&r)? }
        }
        Cmd::Maher { radius, window, references: r } => CommandSpec::Maher { radius, window, references: references(&r)? },
        Cmd::Crossval { samples, length_cap, seed } => CommandSpec::Crossval { samples, length_cap, seed },
    };
    if cli.threads == Some(0) {
        return Err(Error::invalid("--threads must be positive"));
    }
    Ok(RunSpec {
        command,
        format: cli.format.unwrap_or(Format::Csv),
        out: cli.out,
        plot_dir: cli.plot_dir,
        cache: cli.cache,
        threads: cli.threads,
    })
}

/// What a run produced: rendered text and how it ended.
struct Output {
    text: String,
    outcome: Outcome,
    report: Option<CountReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Done,
    Incomplete,
    Failed,
}

impl Output {
    fn done(text: String) -> Self {
        Output { text, outcome: Outcome::Done, report: None }
    }
}

fn density_table(report: &CountReport, engine: bool) -> Table {
    let mut t = if engine {
        Table::new(&[
            "L",
            "total",
            "nonpa",
            "periodic",
            "reducible",
            "unresolved",
            "fraction",
            "certified_fraction",
            "complete",
        ])
    } else {
        Table::new(&["L", "total", "nonpa", "periodic", "reducible", "fraction"])
    };
    for r in &report.rows {
        let mut row: Vec<Cell> = vec![r.l.into(), r.total.into(), r.nonpa().into(), r.periodic.into(), r.reducible.into()];
        if engine {
            row.extend([r.unresolved.into(), r.fraction().into(), r.certified_fraction().into(), r.complete.into()]);
        } else {
            row.push(r.fraction().into());
        }
        t.push(row);
    }
    t
}

fn to_model(m: &ModelSpec) -> Result<Model> {
    Ok(match m {
        ModelSpec::Torus { norm } => Model::Torus(norm.to_norm()?),
        ModelSpec::Engine { .. } => Model::Engine(m.engine_config().expect("engine model")),
    })
}

fn verdict_row(label: &str, order: Option<u32>, dilatation: Option<f64>) -> Table {
    let mut t = Table::new(&["kind", "order", "dilatation"]);
    t.push(vec![label.into(), order.into(), dilatation.into()]);
    t
}

fn classify_target(target: &ClassifyTarget) -> Result<(String, Table)> {
    match target {
        ClassifyTarget::Matrix { entries } => {
            let m = spec::parse_matrix(&entries.join(","))?;
            let ty = classify_matrix(&m);
            let order = match ty {
                NTType::Periodic { order } => Some(order),
                _ => None,
            };
            let label = ty.kind().to_string();
            Ok((label.clone(), verdict_row(&label, order, ty.dilatation())))
        }
        ClassifyTarget::Word { surface, word, budget } => {
            let lib = GeneratorLibrary::standard();
            let sl = lib.get(*surface)?;
            let w = if word.is_empty() { sl.spell("1")? } else { sl.spell(word)? };
            Ok(verdict_output(&classify_word(&sl.triangulation, &w, *budget)?))
        }
        ClassifyTarget::Moves { surface, moves, budget } => {
            let t = crate::lamination::build_triangulation(*surface)?;
            let w: MappingWord = moves.parse()?;
            Ok(verdict_output(&classify_word(&t, &w, *budget)?))
        }
    }
}

fn verdict_output(v: &Verdict) -> (String, Table) {
    let order = match v {
        Verdict::Periodic(n) => Some(*n),
        _ => None,
    };
    (v.label().to_string(), verdict_row(v.label(), order, v.dilatation()))
}

fn execute(spec: &RunSpec) -> Result<Output> {
    let f = spec.format;
    match &spec.command {
        CommandSpec::Classify { .. } => unreachable!("classify is handled before caching"),
        CommandSpec::Ball { model, radius } => match model {
            ModelSpec::Torus { norm } => {
                let norm = norm.to_norm()?;
                let mut t = Table::new(&["a", "b", "c", "d", "size", "kind"]);
                for (m, size) in crate::experiments::density::torus_ball(&norm, *radius)? {
                    let kind = crate::experiments::density::torus_class(m);
                    t.push(vec![m[0].into(), m[1].into(), m[2].into(), m[3].into(), size.into(), kind.label().into()]);
                }
                Ok(Output::done(t.render(f)))
            }
            ModelSpec::Engine { surface, limits, budget } => {
                let lib = GeneratorLibrary::standard();
                let sl = lib.get(*surface)?;
                let ball = enumerate_orbit_ball(sl, &sl.gamma0, *radius, *limits)?;
                let classes = classify_entries(sl, ball.entries.iter().map(|e| e.word.as_str()), *budget)?;
                let mut t = Table::new(&["word", "weight", "kind"]);
                for (e, c) in ball.entries.iter().zip(classes) {
                    let word = if e.word.is_empty() { "1".to_string() } else { e.word.clone() };
                    t.push(vec![word.into(), e.weight.into(), c.label().into()]);
                }
                let outcome = if ball.complete { Outcome::Done } else { Outcome::Incomplete };
                Ok(Output { text: t.render(f), outcome, report: None })
            }
        },
        CommandSpec::Density { model, grid } => {
            let report = density_experiment(&to_model(model)?, grid)?;
            let engine = matches!(model, ModelSpec::Engine { .. });
            let outcome = if report.complete() { Outcome::Done } else { Outcome::Incomplete };
            Ok(Output { text: density_table(&report, engine).render(f), outcome, report: Some(report) })
        }
        CommandSpec::Exponent { source, grid, top_fraction } => {
            let (fit, report) = match source {
                CountSource::Ball { model } => {
                    let report = density_experiment(&to_model(model)?, grid)?;
                    (growth_exponent(&report, *top_fraction)?, Some(report))
                }
                CountSource::Multicurves { surface } => {
                    let counts = multicurve_counts(*surface, grid)?;
                    let points: Vec<(f64, f64)> = grid
                        .iter()
                        .zip(&counts)
                        .filter(|(_, &c)| c > 0)
                        .map(|(&l, &c)| (l as f64, c as f64))
                        .collect();
                    (fit_loglog(&points, *top_fraction)?, None)
                }
            };
            let mut t = Table::new(&["exponent", "half_width", "intercept", "points"]);
            t.push(vec![fit.exponent.into(), fit.half_width.into(), fit.intercept.into(), fit.points.into()]);
            Ok(Output { text: t.render(f), outcome: Outcome::Done, report })
        }
        CommandSpec::Boxmass { model, marking, restriction, boxes, grid } => {
            let marking = match model {
                ModelSpec::Torus { .. } => {
                    Marking::Torus(spec::parse_multicurve(marking.as_deref().expect("normalised torus marking"))?)
                }
                ModelSpec::Engine { surface, .. } => Marking::Engine {
                    config: model.engine_config().expect("engine model"),
                    gamma0: GeneratorLibrary::standard().get(*surface)?.gamma0_curves(),
                },
            };
            let measure = box_mass_series(&marking, *restriction, boxes, grid)?;
            let mut t = Table::new(&["L", "count", "box", "mass"]);
            for (i, l) in measure.grid.iter().enumerate() {
                for (j, b) in measure.boxes.iter().enumerate() {
                    t.push(vec![(*l).into(), measure.counts[i].into(), spec::format_box(b).into(), measure.mass[i][j].into()]);
                }
            }
            Ok(Output::done(t.render(f)))
        }
        CommandSpec::Multicurves { surface, grid } => {
            let counts = multicurve_counts(*surface, grid)?;
            let mut t = Table::new(&["L", "count"]);
            for (l, c) in grid.iter().zip(counts) {
                t.push(vec![(*l).into(), c.into()]);
            }
            Ok(Output::done(t.render(f)))
        }
        CommandSpec::Isolation { k, radius, window, references } => {
            let refs = small_matrices(references)?;
            let p = split_isolated_dense(*k, *radius, &GeneratingSet::s_t(), &refs, *window)?;
            let mut t = Table::new(&["a", "b", "c", "d", "status", "nearest", "centralizer_distance"]);
            let mut members: Vec<(&str, _)> =
                p.isolated.iter().map(|m| ("isolated", m)).chain(p.dense.iter().map(|m| ("dense", m))).collect();
            members.sort_by_key(|(_, m)| m.matrix);
            for (status, m) in members {
                let [a, b, c, d] = m.matrix;
                t.push(vec![a.into(), b.into(), c.into(), d.into(), status.into(), m.nearest.into(), m.centralizer_distance.into()]);
            }
            Ok(Output::done(t.render(f)))
        }
        CommandSpec::Maher { radius, window, references } => {
            let p = maher_proximity_profile(*radius, &small_matrices(references)?, *window)?;
            let mut t = Table::new(&["distance", "count"]);
            for (d, c) in p.histogram {
                t.push(vec![d.into(), c.into()]);
            }
            Ok(Output::done(t.render(f)))
        }
        CommandSpec::Crossval { samples, length_cap, seed } => {
            let cv = cross_validate_torus(*samples, *length_cap, *seed)?;
            let mut t = Table::new(&["word", "torus", "engine", "reason"]);
            for d in &cv.discrepancies {
                t.push(vec![d.word.clone().into(), d.torus.clone().into(), d.engine.clone().into(), d.reason.clone().into()]);
            }
            let outcome = if cv.passed() { Outcome::Done } else { Outcome::Failed };
            Ok(Output { text: t.render(f), outcome, report: None })
        }
    }
}

fn small_matrices(raw: &[[i64; 4]]) -> Result<Vec<IntMatrix2>> {
    raw.iter().map(|[a, b, c, d]| IntMatrix2::from_i64(*a, *b, *c, *d)).collect()
}

fn multicurve_counts(surface: Option<SurfaceSpec>, grid: &[i64]) -> Result<Vec<u64>> {
    grid.iter()
        .map(|&l| match surface {
            None => count_torus_multicurves(l),
            Some(s) => count_surface_multicurves(s, l),
        })
        .collect()
}

/// Writes `fraction_vs_L.csv` and `loglog_counts.csv` for `report` into
/// `dir`, refusing fractions outside `[0, 1]`.
pub fn emit_plot_data(report: &CountReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut fraction = Table::new(&["L", "fraction"]);
    let mut loglog = Table::new(&["log_L", "log_count"]);
    for r in &report.rows {
        let fr = r.fraction();
        if !(0.0..=1.0).contains(&fr) {
            return Err(Error::invalid(format!("fraction {fr} at L = {} lies outside [0, 1]", r.l)));
        }
        fraction.push(vec![r.l.into(), fr.into()]);
        if r.total > 0 {
            loglog.push(vec![(r.l as f64).ln().into(), (r.total as f64).ln().into()]);
        }
    }
    fs::create_dir_all(dir)?;
    let paths = vec![dir.join("fraction_vs_L.csv"), dir.join("loglog_counts.csv")];
    fs::write(&paths[0], fraction.render(Format::Csv))?;
    fs::write(&paths[1], loglog.render(Format::Csv))?;
    Ok(paths)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } => EXIT_INVALID,
        Error::Budget(_) | Error::Io(_) => EXIT_BUDGET,
    }
}

/// Runs one normalised spec, writing results where it says.
pub fn run_spec(spec: &RunSpec, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match spec.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run_inner(spec)),
            Err(e) => Err(Error::Budget(format!("could not start {n} threads: {e}"))),
        },
        None => run_inner(spec),
    };
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &spec.out {
        Some(path) => fs::write(path, &out.text).map_err(Error::from),
        None => stdout.write_all(out.text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_BUDGET;
    }
    match out.outcome {
        Outcome::Done => EXIT_OK,
        Outcome::Incomplete => {
            let _ = writeln!(stderr, "warning: a search budget was reached; rows marked incomplete are lower bounds");
            EXIT_BUDGET
        }
        Outcome::Failed => {
            let _ = writeln!(stderr, "cross-validation found discrepancies");
            EXIT_VALIDATION_FAILED
        }
    }
}

fn run_inner(spec: &RunSpec) -> Result<Output> {
    if let CommandSpec::Classify { target, label_only } = &spec.command {
        let (label, table) = classify_target(target)?;
        return Ok(Output::done(if *label_only { format!("{label}\n") } else { table.render(spec.format) }));
    }
    let hash = spec.content_hash();
    // Plot data needs the report itself, so those runs skip cache reads.
    if let (Some(dir), None) = (&spec.cache, &spec.plot_dir) {
        if let Some(hit) = CacheEntry::read(dir, &hash) {
            let mut text = hit.payload.join("\n");
            text.push('\n');
            return Ok(Output::done(text));
        }
    }
    let out = execute(spec)?;
    if let (Some(dir), Some(report)) = (&spec.plot_dir, &out.report) {
        emit_plot_data(report, dir)?;
    }
    if let (Some(dir), Outcome::Done) = (&spec.cache, out.outcome) {
        let payload: Vec<String> = out.text.strip_suffix('\n').unwrap_or(&out.text).split('\n').map(str::to_string).collect();
        CacheEntry::new(hash, payload).write(dir)?;
    }
    Ok(out)
}

/// Parses `argv` (program name first), runs it and returns the exit code.
pub fn run_with_io<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match build_spec(cli) {
        Ok(spec) => run_spec(&spec, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn parse_and_run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(argv, &mut stdout.lock(), &mut stderr.lock())
}

