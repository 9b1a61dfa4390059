use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hypercert::certify::{certify, ConditionSet};
use hypercert::crosscheck::{run_all, vertex_form_agreement, CrosscheckConfig, DEFAULT_SEED};
use hypercert::domains::{JanowskiConvention, JanowskiPair};
use hypercert::exec::Execution;
use hypercert::hypergeom::{
    gauss_2f1, Complex, HypergeomParams, SeriesOptions, DEFAULT_MAX_TERMS, DEFAULT_R_MAX,
    DEFAULT_TOL, MIN_TOL,
};
use hypercert::report::{ToTree, Tree};
use hypercert::scan::{
    audit_plan, counterexample_dump, run_scan, summarize, to_csv, to_plot_data, PairSource, Range,
    ScanSpec,
};
use hypercert::verify::{
    eval_functional, reproduce_command, verify_on_disk_with, DiskGrid, FunctionalKind, Target,
};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_ALERTS: u8 = 3;
const EXIT_USAGE: u8 = 64;
const MAX_TOL: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(
    name = "hypercert",
    version,
    about = "Gauss hypergeometric condition certificates and disk audits"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Series truncation tolerance (at most 1e-6)
    #[arg(long, global = true, env = "HYPERCERT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, env = "HYPERCERT_MAX_TERMS", default_value_t = DEFAULT_MAX_TERMS)]
    max_terms: usize,
    /// Largest |z| evaluated, in (0, 0.99]
    #[arg(long, global = true, default_value_t = DEFAULT_R_MAX)]
    r_max: f64,
    /// Grid radii (geometric from 0.05 to r_max)
    #[arg(long, global = true, default_value_t = 32)]
    radii: usize,
    #[arg(long, global = true, default_value_t = 256)]
    angles: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main output here instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Disable data-parallel evaluation
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F(u,v;w;z) or one of the audited functionals
    #[command(allow_negative_numbers = true)]
    Eval {
        #[command(flatten)]
        p: ParamArgs,
        /// Real and imaginary part of z
        #[arg(long, num_args = 2, value_names = ["RE", "IM"])]
        z: Vec<f64>,
        #[arg(long, value_enum, default_value_t = KindArg::Function)]
        kind: KindArg,
    },
    /// Evaluate a condition set and print its certificate
    #[command(allow_negative_numbers = true)]
    Certify {
        #[arg(value_enum)]
        set: SetArg,
        #[command(flatten)]
        p: ParamArgs,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Audit a functional on a polar grid of the disk
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(value_enum)]
        kind: KindArg,
        #[command(flatten)]
        p: ParamArgs,
        /// Defaults to exp-disk, or janowski for the Janowski kinds
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Run the seeded property suites
    Crosscheck {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sample count for every suite (defaults per suite)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Certify every tuple of a parameter grid and write CSV
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(value_enum)]
        set: SetArg,
        /// NAME=LO:HI:STEPS or NAME=VALUE for NAME in u, v, w, C, D
        #[arg(long = "range", value_parser = parse_range, allow_hyphen_values = true)]
        ranges: Vec<(String, Range)>,
        /// Explicit Janowski pair C,D (repeatable)
        #[arg(long = "pair", value_parser = parse_pair, allow_hyphen_values = true)]
        pairs: Vec<(f64, f64)>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Plus)]
        convention: ConventionArg,
        /// Audit every certified tuple on the disk grid
        #[arg(long)]
        verify_certified: bool,
        /// Whitespace-separated copy of the rows for plotting tools
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Write counterexample blocks here as well
        #[arg(long)]
        counterexamples: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ParamArgs {
    #[arg(long)]
    u: f64,
    #[arg(long)]
    v: f64,
    #[arg(long)]
    w: f64,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long = "D")]
    d: Option<f64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Plus)]
    convention: ConventionArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SetArg {
    H1,
    H2,
    CorollaryStarlike,
    JanowskiConvex,
    JanowskiStarlike,
}

impl From<SetArg> for ConditionSet {
    fn from(s: SetArg) -> Self {
        match s {
            SetArg::H1 => ConditionSet::H1,
            SetArg::H2 => ConditionSet::H2,
            SetArg::CorollaryStarlike => ConditionSet::CorollaryStarlike,
            SetArg::JanowskiConvex => ConditionSet::JanowskiConvex,
            SetArg::JanowskiStarlike => ConditionSet::JanowskiStarlike,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum KindArg {
    Function,
    ExpConvex,
    ExpStarlike,
    JanowskiConvex,
    JanowskiStarlike,
}

impl From<KindArg> for FunctionalKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Function => FunctionalKind::Function,
            KindArg::ExpConvex => FunctionalKind::ExpConvex,
            KindArg::ExpStarlike => FunctionalKind::ExpStarlike,
            KindArg::JanowskiConvex => FunctionalKind::JanowskiConvex,
            KindArg::JanowskiStarlike => FunctionalKind::JanowskiStarlike,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TargetArg {
    ExpDisk,
    ExpImage,
    Janowski,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConventionArg {
    /// (1+Cz)/(1+Dz)
    Plus,
    /// (1+Cz)/(1-Dz)
    Minus,
}

impl From<ConventionArg> for JanowskiConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Plus => JanowskiConvention::Plus,
            ConventionArg::Minus => JanowskiConvention::Minus,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_range(s: &str) -> Result<(String, Range), String> {
    let (name, spec) = s.split_once('=').ok_or("expected NAME=LO:HI:STEPS")?;
    if !matches!(name, "u" | "v" | "w" | "C" | "D") {
        return Err(format!("unknown parameter `{name}` (use u, v, w, C or D)"));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let range = match parts.as_slice() {
        [x] => Range::fixed(parse_f64(x)?),
        [lo, hi, steps] => {
            let steps: usize = steps
                .trim()
                .parse()
                .map_err(|_| format!("`{steps}` is not a step count"))?;
            Range::new(parse_f64(lo)?, parse_f64(hi)?, steps)
        }
        _ => return Err("expected NAME=LO:HI:STEPS or NAME=VALUE".into()),
    }
    .map_err(|e| e.to_string())?;
    Ok((name.to_string(), range))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (c, d) = s.split_once(',').ok_or("expected C,D")?;
    Ok((parse_f64(c)?, parse_f64(d)?))
}

/// Outcome of a subcommand: exit code plus what to print.
struct Outcome {
    code: u8,
    main: String,
    side: String,
}

impl Outcome {
    fn new(code: u8, main: String) -> Self {
        Self {
            code,
            main,
            side: String::new(),
        }
    }
}

enum Failure {
    Usage(String),
    Eval(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Eval(e.to_string())
    }
}

struct Ctx {
    series: SeriesOptions,
    radii: usize,
    angles: usize,
    format: Format,
    exec: Execution,
}

impl Ctx {
    fn from_global(g: &Global) -> Result<Self, Failure> {
        if !(g.tol > 0.0 && g.tol <= MAX_TOL) {
            return Err(Failure::Usage(format!(
                "--tol {} must lie in (0, 1e-6]",
                g.tol
            )));
        }
        if g.tol < MIN_TOL {
            return Err(Failure::Usage(format!(
                "--tol {} is below the 1e-14 floor",
                g.tol
            )));
        }
        if !(g.r_max > 0.0 && g.r_max <= DEFAULT_R_MAX) {
            return Err(Failure::Usage(format!(
                "--r-max {} must lie in (0, 0.99]",
                g.r_max
            )));
        }
        if g.radii == 0 || g.angles == 0 || g.max_terms == 0 {
            return Err(Failure::Usage(
                "--radii, --angles and --max-terms must be positive".into(),
            ));
        }
        Ok(Self {
            series: SeriesOptions {
                tol: g.tol,
                max_terms: g.max_terms,
                r_max: g.r_max,
            },
            radii: g.radii,
            angles: g.angles,
            format: g.format,
            exec: if g.sequential {
                Execution::Sequential
            } else {
                Execution::default()
            },
        })
    }

    fn grid(&self) -> Result<DiskGrid, Failure> {
        DiskGrid::geometric(self.radii, self.angles, self.series.r_max)
            .map_err(|e| Failure::Usage(e.to_string()))
    }

    fn render(&self, tree: &Tree) -> String {
        match self.format {
            Format::Text => tree.to_text(),
            Format::Json => {
                let mut s = tree.to_json();
                s.push('\n');
                s
            }
            Format::Csv => tree.to_flat_csv(),
        }
    }
}

fn params(p: &ParamArgs) -> Result<HypergeomParams, Failure> {
    Ok(HypergeomParams::new(p.u, p.v, p.w)?)
}

fn janowski(pair: &PairArgs) -> Result<Option<(JanowskiPair, JanowskiConvention)>, Failure> {
    match (pair.c, pair.d) {
        (Some(c), Some(d)) => Ok(Some((JanowskiPair::new(c, d)?, pair.convention.into()))),
        (None, None) => Ok(None),
        _ => Err(Failure::Usage("--C and --D must be given together".into())),
    }
}

fn set_for_kind(kind: FunctionalKind) -> ConditionSet {
    match kind {
        FunctionalKind::Function => ConditionSet::H1,
        FunctionalKind::ExpConvex => ConditionSet::H2,
        FunctionalKind::ExpStarlike => ConditionSet::CorollaryStarlike,
        FunctionalKind::JanowskiConvex => ConditionSet::JanowskiConvex,
        FunctionalKind::JanowskiStarlike => ConditionSet::JanowskiStarlike,
    }
}

fn complex_tree(z: Complex) -> Tree {
    Tree::List(vec![Tree::Num(z.re), Tree::Num(z.im)])
}

fn cmd_eval(ctx: &Ctx, p: &ParamArgs, z: &[f64], kind: KindArg) -> Result<Outcome, Failure> {
    let p = params(p)?;
    let z = Complex::new(z[0], z[1]);
    let kind = FunctionalKind::from(kind);
    let mut tree = Tree::map()
        .str("kind", kind.to_string())
        .entry(
            "params",
            Tree::map()
                .num("u", p.u())
                .num("v", p.v())
                .num("w", p.w())
                .build(),
        )
        .entry("z", complex_tree(z));
    if kind == FunctionalKind::Function {
        let s = gauss_2f1(&p, z, &ctx.series)?;
        tree = tree
            .entry("value", complex_tree(s.value))
            .num("tail_bound", s.tail_bound)
            .int("terms_used", s.terms_used as i64);
    } else {
        let v = eval_functional(kind, &p, z, &ctx.series)?;
        tree = tree.entry("value", complex_tree(v));
    }
    Ok(Outcome::new(0, ctx.render(&tree.build())))
}

fn cmd_certify(ctx: &Ctx, set: SetArg, p: &ParamArgs, pair: &PairArgs) -> Result<Outcome, Failure> {
    let set = ConditionSet::from(set);
    let p = params(p)?;
    let j = janowski(pair)?;
    if set.is_janowski() && j.is_none() {
        return Err(Failure::Usage(format!("{set} needs --C and --D")));
    }
    let cert = certify(set, &p, j)?;
    let code = if cert.overall { 0 } else { EXIT_NEGATIVE };
    Ok(Outcome::new(code, ctx.render(&cert.to_tree())))
}

fn cmd_verify(
    ctx: &Ctx,
    kind: KindArg,
    p: &ParamArgs,
    target: Option<TargetArg>,
    pair: &PairArgs,
) -> Result<Outcome, Failure> {
    let kind = FunctionalKind::from(kind);
    let p = params(p)?;
    let j = janowski(pair)?;
    let janowski_kind = matches!(
        kind,
        FunctionalKind::JanowskiConvex | FunctionalKind::JanowskiStarlike
    );
    let target = match (target, j) {
        (Some(TargetArg::ExpDisk), _) => Target::ExpDisk,
        (Some(TargetArg::ExpImage), _) => Target::ExpImage,
        (Some(TargetArg::Janowski), Some((j, c))) => Target::Janowski(j, c),
        (Some(TargetArg::Janowski), None) => {
            return Err(Failure::Usage("--target janowski needs --C and --D".into()))
        }
        (None, Some((j, c))) if janowski_kind => Target::Janowski(j, c),
        (None, None) if janowski_kind => {
            return Err(Failure::Usage(format!("{kind} needs --C and --D")))
        }
        (None, _) => Target::ExpDisk,
    };
    let grid = ctx.grid()?;
    let report = verify_on_disk_with(kind, &p, target, &grid, &ctx.series, ctx.exec)?;
    let code = if report.passed {
        0
    } else if report.violations > 0 {
        EXIT_NEGATIVE
    } else {
        EXIT_ALERTS
    };
    let mut out = Outcome::new(code, ctx.render(&report.to_tree()));
    if !report.passed {
        let cert_pair = match target {
            Target::Janowski(j, c) => Some((j, c)),
            _ => None,
        };
        let set = set_for_kind(kind);
        let certified = certify(set, &p, cert_pair).is_ok_and(|c| c.overall);
        let predicted = audit_plan(set, cert_pair).is_some_and(|(k, _)| k == kind);
        if certified && predicted {
            out.main
                .push_str(&report.counterexample_dump(&reproduce_command(&report, &ctx.series)));
        }
    }
    Ok(out)
}

fn cmd_crosscheck(ctx: &Ctx, seed: u64, samples: Option<usize>) -> Result<Outcome, Failure> {
    let cfg = CrosscheckConfig {
        seed,
        samples,
        series: ctx.series,
        execution: ctx.exec,
    };
    let results = run_all(&cfg);
    let agreement = vertex_form_agreement(&cfg);
    let all = results.iter().all(|r| r.passed());
    let main = if ctx.format == Format::Text {
        let mut s = format!("seed {seed}\n");
        for r in &results {
            s.push_str(&r.line());
            s.push('\n');
        }
        s.push_str(&format!(
            "info: printed vertex form agrees with h3 - h2^2/(2 h1) on {}/{} samples\n",
            agreement.agree, agreement.compared
        ));
        s.push_str(if all {
            "all suites passed\n"
        } else {
            "some suites failed\n"
        });
        s
    } else {
        let tree = Tree::map()
            .int("seed", seed as i64)
            .entry(
                "suites",
                Tree::List(results.iter().map(ToTree::to_tree).collect()),
            )
            .entry(
                "vertex_form_agreement",
                Tree::map()
                    .int("agree", agreement.agree as i64)
                    .int("compared", agreement.compared as i64)
                    .build(),
            )
            .bool("passed", all)
            .build();
        ctx.render(&tree)
    };
    Ok(Outcome::new(if all { 0 } else { EXIT_NEGATIVE }, main))
}

struct ScanArgs<'a> {
    set: SetArg,
    ranges: &'a [(String, Range)],
    pairs: &'a [(f64, f64)],
    convention: ConventionArg,
    verify_certified: bool,
    plot_data: Option<&'a PathBuf>,
    counterexamples: Option<&'a PathBuf>,
}

fn cmd_scan(ctx: &Ctx, a: ScanArgs<'_>) -> Result<Outcome, Failure> {
    let set = ConditionSet::from(a.set);
    let find = |name: &str| {
        a.ranges
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, r)| *r)
    };
    let need = |name: &str| {
        find(name).ok_or_else(|| Failure::Usage(format!("missing --range {name}=...")))
    };
    let mut spec = ScanSpec::new(set, need("u")?, need("v")?, need("w")?);
    if set.is_janowski() {
        spec.pairs = Some(match (find("C"), find("D"), a.pairs.is_empty()) {
            (Some(c), Some(d), true) => PairSource::Grid { c, d },
            (None, None, false) => PairSource::List(a.pairs.to_vec()),
            _ => {
                return Err(Failure::Usage(
                    "Janowski scans need either both C and D ranges or --pair values".into(),
                ))
            }
        });
    }
    spec.convention = a.convention.into();
    spec.series = ctx.series;
    spec.execution = ctx.exec;
    if a.verify_certified {
        spec = spec.with_verification(ctx.grid()?);
    }
    let rows = run_scan(&spec)?;
    let csv = to_csv(set, &rows, a.verify_certified);
    if let Some(path) = a.plot_data {
        fs::write(path, to_plot_data(set, &rows, a.verify_certified))
            .map_err(|e| Failure::Eval(format!("writing {}: {e}", path.display())))?;
    }
    let summary = summarize(set, &rows)?;
    let mut side = ctx.render(&summary.to_tree());
    let dump = counterexample_dump(&rows, &ctx.series);
    if let Some(path) = a.counterexamples {
        fs::write(path, &dump)
            .map_err(|e| Failure::Eval(format!("writing {}: {e}", path.display())))?;
    }
    side.push_str(&dump);
    let code = if summary.feasible > 0 {
        0
    } else {
        EXIT_NEGATIVE
    };
    Ok(Outcome {
        code,
        main: csv,
        side,
    })
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let ctx = Ctx::from_global(&cli.global)?;
    match &cli.command {
        Command::Eval { p, z, kind } => cmd_eval(&ctx, p, z, *kind),
        Command::Certify { set, p, pair } => cmd_certify(&ctx, *set, p, pair),
        Command::Verify {
            kind,
            p,
            target,
            pair,
        } => cmd_verify(&ctx, *kind, p, *target, pair),
        Command::Crosscheck { seed, samples } => cmd_crosscheck(&ctx, *seed, *samples),
        Command::Scan {
            set,
            ranges,
            pairs,
            convention,
            verify_certified,
            plot_data,
            counterexamples,
        } => cmd_scan(
            &ctx,
            ScanArgs {
                set: *set,
                ranges,
                pairs,
                convention: *convention,
                verify_certified: *verify_certified,
                plot_data: plot_data.as_ref(),
                counterexamples: counterexamples.as_ref(),
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(out) => {
            match output {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &out.main) {
                        eprintln!("error: writing {}: {e}", path.display());
                        return ExitCode::from(EXIT_ERROR);
                    }
                    print!("{}", out.side);
                }
                None => {
                    print!("{}", out.main);
                    eprint!("{}", out.side);
                }
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Eval(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
