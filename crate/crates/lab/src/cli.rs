//! The `entropy-lab` command line.
//!
//! Exit codes: `0` on success, `1` for bad input (flags, files, hypotheses),
//! `2` when a computed result fails its own certification.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use entropy_core::constructions::{
    CombinerInput, TelescopeSchedule, dual_combine, dual_inputs, primal_combine,
    primal_combine_weighted, telescope_schedule,
};
use entropy_core::covering::{CoverEstimate, SeparatedSet, covering_bounds};
use entropy_core::functionals::{PaperConstants, SequenceKind};
use entropy_core::lab::{
    DEFAULT_ALPHAS, DualityReport, FirstStepRecord, IterationRecord, Sampler, Verdict,
    beta_summary, check_first_step, check_iteration,
};
use entropy_core::{Body, OracleTolerance, Vector};
use serde::{Deserialize, Serialize};

use crate::bodies::{BodySpec, load_body};
use crate::config::{GridSpec, RunConfig, default_budget, default_grid};
use crate::error::{LabError, Result};
use crate::formats;
use crate::output::{ratio_csv, staircase_csv, write_csv, write_json};
use crate::runners::{
    DualityJob, duality_batch, pool, probe_parallel, sample_bodies, staircase_parallel,
};

/// Where command results are written.
pub type Out = dyn Write + Send;

/// Quantile reported next to the maximum when summarizing β over bodies.
pub const BETA_QUANTILE: f64 = 0.9;

#[derive(Debug, Parser)]
#[command(
    name = "entropy-lab",
    version,
    about = "Covering numbers and the duality of metric entropy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Master seed; required here or in the config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Candidate points per covering computation.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// TOML or JSON settings; flags given here win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for report files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bounds on N(K, tT) at one resolution.
    Cover {
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long)]
        t: f64,
        /// The covering body T; the unit ball when omitted.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Bounds on N(K, tT) over a grid, as CSV.
    Staircase {
        #[arg(long)]
        body: Option<PathBuf>,
        /// start:stop:points[:log]
        #[arg(long)]
        grid: Option<GridSpec>,
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Staircases of (K, D) and (D, K°) with their ratio table.
    Duality {
        /// One or more bodies; repeat the flag for a batch.
        #[arg(long)]
        body: Vec<PathBuf>,
        /// A sampler (file or inline JSON) instead of body files.
        #[arg(long, conflicts_with = "body")]
        family: Option<String>,
        #[arg(long, requires = "family")]
        count: Option<usize>,
        #[arg(long)]
        grid: Option<GridSpec>,
        /// Comma-separated dilation factors.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
    },
    /// The exponents γ and γ' with the first-step inequality checks.
    Gamma {
        #[arg(long)]
        body: Option<PathBuf>,
    },
    /// Product combiners on separated sets from a JSON file.
    Combine {
        #[arg(long)]
        input: PathBuf,
    },
    /// The iteration inequalities along the radius sequence.
    Iterate {
        #[arg(long)]
        body: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dual")]
        kind: KindArg,
    },
    /// Mean-width statistics over a random family.
    Probe {
        /// A sampler, as a file or inline JSON.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Primal,
    Dual,
}

impl From<KindArg> for SequenceKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Primal => SequenceKind::Primal,
            KindArg::Dual => SequenceKind::Dual,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut Out, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Flags merged over the config file.
struct Settings {
    seed: u64,
    budget: Option<usize>,
    out: PathBuf,
    grid: Option<GridSpec>,
    alpha: Option<Vec<f64>>,
    bodies: Vec<PathBuf>,
    constants: PaperConstants,
}

impl Settings {
    fn new(common: &Common, cfg: RunConfig) -> Result<Self> {
        let seed = common.seed.or(cfg.seed).ok_or_else(|| {
            LabError::Input("a seed is required (--seed or `seed` in the config)".into())
        })?;
        Ok(Self {
            seed,
            budget: common.budget.or(cfg.budget),
            out: common
                .out
                .clone()
                .or(cfg.out)
                .unwrap_or_else(|| PathBuf::from(".")),
            grid: cfg.grid,
            alpha: cfg.alpha,
            bodies: cfg.body,
            constants: cfg.constants,
        })
    }

    fn budget(&self, dim: usize) -> usize {
        self.budget.unwrap_or_else(|| default_budget(dim))
    }

    fn grid(&self, flag: Option<GridSpec>, k: &Body) -> Result<Vec<f64>> {
        flag.or(self.grid)
            .unwrap_or_else(|| default_grid(k.circumradius_bound()))
            .expand()
    }

    fn body(&self, flag: Option<PathBuf>) -> Result<(BodySpec, Body)> {
        let path = flag
            .or_else(|| self.bodies.first().cloned())
            .ok_or_else(|| {
                LabError::Input("a body is required (--body or `body` in the config)".into())
            })?;
        load_body(&path)
    }
}

fn execute(cli: Cli, out: &mut Out) -> Result<()> {
    let cfg = match &cli.common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let workers = cli.common.workers.or(cfg.workers);
    let s = Settings::new(&cli.common, cfg)?;
    s.constants.validate()?;
    pool(workers)?.install(|| dispatch(cli.command, &s, out))
}

fn say(out: &mut Out, text: impl std::fmt::Display) -> Result<()> {
    writeln!(out, "{text}").map_err(|e| LabError::io("<stdout>", e))
}

fn dispatch(cmd: Command, s: &Settings, out: &mut Out) -> Result<()> {
    match cmd {
        Command::Cover { body, t, target } => cover(s, body, t, target, out),
        Command::Staircase { body, grid, target } => staircase(s, body, grid, target, out),
        Command::Duality {
            body,
            family,
            count,
            grid,
            alpha,
        } => duality(s, body, family, count, grid, alpha, out),
        Command::Gamma { body } => gamma(s, body, out),
        Command::Combine { input } => combine(s, &input, out),
        Command::Iterate { body, kind } => iterate(s, body, kind.into(), out),
        Command::Probe { family, count } => probe(s, &family, count, out),
    }
}

fn target_body(path: Option<PathBuf>, k: &Body) -> Result<Body> {
    let t = match path {
        Some(p) => load_body(&p)?.1,
        None => Body::unit_ball(k.dim()),
    };
    if t.dim() != k.dim() {
        return Err(entropy_core::Error::DimensionMismatch {
            expected: k.dim(),
            found: t.dim(),
        }
        .into());
    }
    Ok(t)
}

#[derive(Serialize)]
struct CoverReport<'a> {
    body: BodySpec,
    target: BodySpec,
    budget: usize,
    seed: u64,
    estimate: &'a CoverEstimate,
}

fn cover(
    s: &Settings,
    body: Option<PathBuf>,
    t: f64,
    target: Option<PathBuf>,
    out: &mut Out,
) -> Result<()> {
    let (spec, k) = s.body(body)?;
    let tb = target_body(target, &k)?;
    let budget = s.budget(k.dim());
    let est = covering_bounds(&k, &tb, t, budget, s.seed)?;
    say(
        out,
        format_args!("lower/upper = {}/{}", est.lower, est.upper),
    )?;
    say(out, format_args!("certification: {:?}", est.certification))?;
    let report = CoverReport {
        body: spec,
        target: BodySpec::from_body(&tb),
        budget,
        seed: s.seed,
        estimate: &est,
    };
    let path = write_json(&s.out, "cover", s.seed, &s.constants, &report)?;
    say(out, format_args!("wrote {}", path.display()))
}

fn staircase(
    s: &Settings,
    body: Option<PathBuf>,
    grid: Option<GridSpec>,
    target: Option<PathBuf>,
    out: &mut Out,
) -> Result<()> {
    let (_, k) = s.body(body)?;
    let tb = target_body(target, &k)?;
    let grid = s.grid(grid, &k)?;
    let st = staircase_parallel(&k, &tb, &grid, s.budget(k.dim()), s.seed)?;
    let csv = staircase_csv(&st)?;
    write!(out, "{csv}").map_err(|e| LabError::io("<stdout>", e))?;
    let path = write_csv(&s.out, "staircase", s.seed, &s.constants, &csv)?;
    say(out, format_args!("wrote {}", path.display()))
}

#[derive(Serialize)]
struct BetaSummary {
    alpha: f64,
    max: f64,
    quantile: f64,
    q: f64,
}

#[derive(Serialize)]
struct DualityBatch {
    bodies: Vec<BodySpec>,
    reports: Vec<DualityReport>,
    beta_summary: Vec<BetaSummary>,
}

fn parse_sampler(arg: &str) -> Result<Sampler> {
    let sampler: Sampler = if arg.trim_start().starts_with('{') {
        formats::parse_json(Path::new("--family"), arg)?
    } else {
        formats::load(Path::new(arg))?
    };
    sampler.validate()?;
    Ok(sampler)
}

fn duality(
    s: &Settings,
    body: Vec<PathBuf>,
    family: Option<String>,
    count: Option<usize>,
    grid: Option<GridSpec>,
    alpha: Vec<f64>,
    out: &mut Out,
) -> Result<()> {
    let bodies: Vec<Body> = match family {
        Some(f) => sample_bodies(&parse_sampler(&f)?, count.unwrap_or(1), s.seed)?,
        None => {
            let paths = if body.is_empty() {
                s.bodies.clone()
            } else {
                body
            };
            if paths.is_empty() {
                return Err(LabError::Input(
                    "a body is required (--body, --family or `body` in the config)".into(),
                ));
            }
            paths
                .iter()
                .map(|p| load_body(p).map(|(_, b)| b))
                .collect::<Result<_>>()?
        }
    };
    let alphas = if !alpha.is_empty() {
        alpha
    } else {
        s.alpha.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec())
    };
    let jobs = bodies
        .iter()
        .map(|b| {
            Ok(DualityJob {
                body: b.clone(),
                grid: s.grid(grid, b)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dim = bodies.iter().map(Body::dim).max().unwrap_or(1);
    let reports = duality_batch(&jobs, &alphas, &s.constants, s.budget(dim), s.seed)?;

    for (i, r) in reports.iter().enumerate() {
        if reports.len() > 1 {
            say(out, format_args!("body {i}"))?;
        }
        say(out, "t\tprimal\tdual\toverlap")?;
        for (p, t) in r.primal.entries.iter().zip(&r.grid) {
            let d = r.dual.at(*t).expect("grid points are on the dual grid");
            say(
                out,
                format_args!(
                    "{t:.4}\t[{:.3}, {:.3}]\t[{:.3}, {:.3}]\t{}",
                    p.lower_bits,
                    p.upper_bits,
                    d.lower_bits,
                    d.upper_bits,
                    if p.overlaps(d) { "yes" } else { "no" }
                ),
            )?;
        }
        for b in &r.beta {
            say(
                out,
                format_args!("beta(alpha = {}) = {:.4}", b.alpha, b.beta),
            )?;
        }
    }
    let beta_summary: Vec<BetaSummary> = alphas
        .iter()
        .filter_map(|&a| {
            beta_summary(&reports, a, BETA_QUANTILE).map(|(max, quantile)| BetaSummary {
                alpha: a,
                max,
                quantile,
                q: BETA_QUANTILE,
            })
        })
        .collect();
    if reports.len() > 1 {
        for b in &beta_summary {
            say(
                out,
                format_args!(
                    "alpha = {}: max beta {:.4}, q{} {:.4}",
                    b.alpha, b.max, b.q, b.quantile
                ),
            )?;
        }
    }
    let csv = ratio_csv(
        reports
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.ratios.as_slice())),
    )?;
    let batch = DualityBatch {
        bodies: bodies.iter().map(BodySpec::from_body).collect(),
        reports,
        beta_summary,
    };
    let json = write_json(&s.out, "duality", s.seed, &s.constants, &batch)?;
    let csv = write_csv(&s.out, "duality", s.seed, &s.constants, &csv)?;
    say(
        out,
        format_args!("wrote {}\nwrote {}", json.display(), csv.display()),
    )
}

#[derive(Serialize)]
struct GammaReport {
    body: BodySpec,
    budget: usize,
    seed: u64,
    first_step: FirstStepRecord,
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Consistent => "consistent",
        Verdict::ViolatedAtBrackets => "violated-at-brackets",
        Verdict::Skipped => "skipped",
    }
}

fn gamma(s: &Settings, body: Option<PathBuf>, out: &mut Out) -> Result<()> {
    let (spec, k) = s.body(body)?;
    let budget = s.budget(k.dim());
    let rec = check_first_step(&k, &s.constants, budget, s.seed)?;
    for g in [&rec.gamma, &rec.gamma_prime] {
        let flag = if g.flagged { " (flagged: k < 1)" } else { "" };
        say(
            out,
            format_args!(
                "{:?} = {:.4}  M* = {:.4}  k = {:.3}{flag}",
                g.which, g.value, g.mstar, g.k_bits
            ),
        )?;
    }
    for c in &rec.checks {
        say(out, format_args!("{}: {}", c.name, verdict(c.verdict)))?;
    }
    let path = write_json(
        &s.out,
        "gamma",
        s.seed,
        &s.constants,
        &GammaReport {
            body: spec,
            budget,
            seed: s.seed,
            first_step: rec,
        },
    )?;
    say(out, format_args!("wrote {}", path.display()))
}

#[derive(Serialize)]
struct IterateReport {
    body: BodySpec,
    budget: usize,
    seed: u64,
    record: IterationRecord,
    schedule: TelescopeSchedule,
}

fn iterate(s: &Settings, body: Option<PathBuf>, kind: SequenceKind, out: &mut Out) -> Result<()> {
    let (spec, k) = s.body(body)?;
    let budget = s.budget(k.dim());
    let record = check_iteration(&k, kind, &s.constants, budget, s.seed)?;
    let schedule = telescope_schedule(&record.sequence);
    say(
        out,
        format_args!(
            "sequence: {:?} (s = {})",
            record.sequence.values, record.sequence.s
        ),
    )?;
    say(out, "j\tR_j\tdirect\tsubstituted\tmargin")?;
    for (f, m) in record.factors.iter().zip(&record.margins) {
        say(
            out,
            format_args!(
                "{}\t{:.4e}\t{:.3}\t{:.3}\t{:.3}",
                f.j, f.r_j, f.direct_bits, f.substituted_bits, m
            ),
        )?;
    }
    say(
        out,
        format_args!("direct: {}", verdict(record.direct.verdict)),
    )?;
    say(
        out,
        format_args!("substituted: {}", verdict(record.substituted.verdict)),
    )?;
    say(
        out,
        format_args!("terminal factor is one: {}", record.terminal_is_one()),
    )?;
    say(
        out,
        format_args!(
            "telescope: {} collapses, {} hypothesis failures, {} ratio failures",
            schedule.collapses.len(),
            schedule.hypothesis_failures,
            schedule.ratio_failures
        ),
    )?;
    let report = IterateReport {
        body: spec,
        budget,
        seed: s.seed,
        record,
        schedule,
    };
    let path = write_json(&s.out, "iterate", s.seed, &s.constants, &report)?;
    say(out, format_args!("wrote {}", path.display()))
}

fn probe(s: &Settings, family: &str, count: usize, out: &mut Out) -> Result<()> {
    let sampler = parse_sampler(family)?;
    let p = probe_parallel(
        &sampler,
        count,
        &s.constants,
        s.budget(sampler.dim()),
        s.seed,
    )?;
    let flagged = p.records.iter().filter(|r| r.flagged).count();
    say(
        out,
        format_args!("{} bodies, {flagged} flagged (k < 1)", p.count),
    )?;
    for (name, stats) in [
        ("conjecture ratio", &p.conjecture),
        ("log-normalized ratio", &p.log_normalized),
    ] {
        match stats {
            Some(st) => say(
                out,
                format_args!(
                    "{name}: max {:.4}, mean {:.4}, histogram {:?}",
                    st.max, st.mean, st.histogram
                ),
            )?,
            None => say(out, format_args!("{name}: no eligible bodies"))?,
        }
    }
    let path = write_json(&s.out, "probe", s.seed, &s.constants, &p)?;
    say(out, format_args!("wrote {}", path.display()))
}

/// A separated point set as it appears in combiner files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub points: Vec<Vec<f64>>,
    pub separation: f64,
    /// The body whose gauge measures the separation.
    pub gauge: BodySpec,
    pub container: BodySpec,
}

/// Radii shared by all combiner modes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Radii {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineMode {
    /// `z = εx + (1 − ε)y` on the given sets; `eps` defaults to 1/2.
    Primal,
    /// The polar combiner on the given sets; needs `body`.
    Dual,
    /// Builds both sets greedily inside the unit ball, then combines; needs
    /// `body` only.
    DualGreedy,
}

/// A combiner job. Which fields are required depends on `mode`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineFile {
    pub mode: CombineMode,
    pub radii: Radii,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<PointSetFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<PointSetFile>,
}

#[derive(Serialize)]
struct CombineReport {
    mode: CombineMode,
    radii: Radii,
    x_size: usize,
    y_size: usize,
    output: PointSetFile,
}

fn build_at(file: &Path, field: &str, spec: &BodySpec) -> Result<Body> {
    spec.build().map_err(|(p, source)| LabError::Body {
        file: file.into(),
        path: if p == "." {
            field.to_string()
        } else {
            format!("{field}.{p}")
        },
        source,
    })
}

fn point_set(file: &Path, field: &str, set: &PointSetFile) -> Result<SeparatedSet> {
    let gauge = build_at(file, &format!("{field}.gauge"), &set.gauge)?;
    let container = build_at(file, &format!("{field}.container"), &set.container)?;
    let points = set
        .points
        .iter()
        .map(|p| Vector::new(p.clone()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SeparatedSet::new(
        points,
        set.separation,
        gauge,
        container,
        &OracleTolerance::default(),
    )?)
}

fn to_file(set: &SeparatedSet) -> PointSetFile {
    PointSetFile {
        points: set.points().iter().map(|p| p.as_slice().to_vec()).collect(),
        separation: set.separation(),
        gauge: BodySpec::from_body(set.ambient()),
        container: BodySpec::from_body(set.container()),
    }
}

fn combine(s: &Settings, input: &Path, out: &mut Out) -> Result<()> {
    let file: CombineFile = formats::load(input)?;
    let need = |what: &str| {
        LabError::Input(format!(
            "{}: mode {:?} needs `{what}`",
            input.display(),
            file.mode
        ))
    };
    let unused = |what: &str| {
        LabError::Input(format!(
            "{}: `{what}` does not apply to mode {:?}",
            input.display(),
            file.mode
        ))
    };
    let r = file.radii;
    let given = || -> Result<CombinerInput> {
        let x = file.x.as_ref().ok_or_else(|| need("x"))?;
        let y = file.y.as_ref().ok_or_else(|| need("y"))?;
        Ok(CombinerInput::new(
            point_set(input, "x", x)?,
            point_set(input, "y", y)?,
            r.a,
            r.b,
            r.big_a,
            r.big_b,
        )?)
    };
    let body = || -> Result<Body> {
        build_at(
            input,
            "body",
            file.body.as_ref().ok_or_else(|| need("body"))?,
        )
    };
    let (ci, combined) = match file.mode {
        CombineMode::Primal => {
            if file.body.is_some() {
                return Err(unused("body"));
            }
            let ci = given()?;
            let z = match file.eps {
                Some(e) => primal_combine_weighted(&ci, e)?,
                None => primal_combine(&ci)?,
            };
            (ci, z)
        }
        CombineMode::Dual | CombineMode::DualGreedy => {
            if file.eps.is_some() {
                return Err(unused("eps"));
            }
            let k = body()?;
            let ci = if file.mode == CombineMode::Dual {
                given()?
            } else if file.x.is_some() || file.y.is_some() {
                return Err(unused("x/y"));
            } else {
                dual_inputs(&k, r.a, r.b, r.big_a, r.big_b, s.budget(k.dim()), s.seed)?
            };
            let z = dual_combine(&ci, &k)?;
            (ci, z)
        }
    };
    let (nx, ny) = (ci.xset.len(), ci.yset.len());
    say(
        out,
        format_args!(
            "{nx} x {ny} -> {} points, separation > {}",
            combined.len(),
            combined.separation()
        ),
    )?;
    let report = CombineReport {
        mode: file.mode,
        radii: r,
        x_size: nx,
        y_size: ny,
        output: to_file(&combined),
    };
    let path = write_json(&s.out, "combine", s.seed, &s.constants, &report)?;
    say(out, format_args!("wrote {}", path.display()))
}
