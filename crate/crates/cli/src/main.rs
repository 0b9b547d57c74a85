// SPDX-License-Identifier: Apache-2.0

//! `local-reed`: generate instances, run the coloring procedure and its
//! estimators, audit critical graphs, and evaluate bounds.
//!
//! Exit status is 0 when every enabled check passes, 1 when a check fails,
//! and 2 on usage or input errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use local_reed::bounds::{self, BoundReport};
use local_reed::correspondence::{identity_correspondence, make_total};
use local_reed::experiment::{
    lemma_bounds, run_experiment, write_estimate_rows, ExperimentConfig, GeneratorSpec, ListSpec, ParamsConfig,
};
use local_reed::extraction::extract_dense_subgraph;
use local_reed::fraction::{parse_fraction, Fraction};
use local_reed::knm::{color_knm, exhaustive_audit};
use local_reed::procedure::{pipeline_color, PipelineOutcome, ProcedureParams};
use local_reed::{io, Graph, ListAssignment};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "local-reed", version, about = "Local Reed-type list coloring toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph, and optionally a list assignment for it.
    Generate(GenerateArgs),
    /// Color a graph from its lists with the randomized pipeline.
    Color(ColorArgs),
    /// Monte Carlo estimates of the savings variables, one CSV row per vertex and variable.
    Estimate(EstimateArgs),
    /// Exhaustive density audit of a small graph, or coloring of a complete graph minus a matching.
    Audit(AuditArgs),
    /// Dense-subgraph extraction; prints the vertex partition as JSON.
    Extract(ExtractArgs),
    /// Evaluate one named bound.
    Bounds(BoundsArgs),
    /// Check the numeric constants the coloring argument relies on.
    CertifyConstants,
    /// Run a JSON-configured experiment and write results.csv and manifest.json.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    Cycle,
    Path,
    Star,
    CompleteBipartite,
    Petersen,
    C5Blowup,
    Gnp,
    NearRegular,
    RandomTree,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dimacs,
    Json,
}

#[derive(Args)]
struct GenerateArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Blowup factor.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Target degree for near-regular graphs.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to DIMACS, or JSON when `--out` ends in `.json`.
    #[arg(long)]
    format: Option<GraphFormat>,
    /// Graph destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `uniform:K`, `local-reed`, `epsilon:E` or `degree-plus:N`.
    #[arg(long, requires = "lists_out")]
    lists: Option<String>,
    #[arg(long)]
    lists_out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value = "1/330")]
    eps: String,
    #[arg(long, default_value = "0")]
    sigma: String,
    #[arg(long, default_value = "1/50")]
    alpha: String,
    #[arg(long, default_value = "1/50")]
    beta: String,
    /// `auto` or a probability.
    #[arg(long, default_value = "auto")]
    rho: String,
}

impl ParamArgs {
    fn resolve(&self) -> Result<ProcedureParams> {
        let cfg = ParamsConfig {
            eps: self.eps.clone(),
            sigma: self.sigma.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            rho: self.rho.clone(),
            ..ParamsConfig::default()
        };
        Ok(cfg.resolve()?)
    }
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lists: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 20)]
    rounds: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lists: PathBuf,
    /// Correspondence JSON; the identity correspondence when absent. Bounds are only checked for the identity.
    #[arg(long)]
    correspondence: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long, conflicts_with = "knm", requires = "lists")]
    graph: Option<PathBuf>,
    #[arg(long)]
    lists: Option<PathBuf>,
    /// A complete-graph-minus-matching instance to color.
    #[arg(long, required_unless_present = "graph")]
    knm: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    eps: String,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    which: BoundName,
    /// Comma-separated `name=value` pairs.
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundName {
    Aberrance,
    PairsTrips,
    StructureRhs,
    Sparsity,
    SavingsGap,
    Talagrand,
    TalagrandMedian,
    ExpectationMedianGap,
    Exceptional,
    DeviationRatio,
    Ky,
    MinorConstants,
    Rivin,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every check the command ran passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Color(args) => color(args),
        Command::Estimate(args) => estimate(args),
        Command::Audit(args) => audit(args),
        Command::Extract(args) => {
            let g = io::read_graph(&args.graph)?;
            let r = extract_dense_subgraph(&g, fraction(&args.alpha)?, fraction(&args.eps)?)?;
            print_json(&r)?;
            Ok(true)
        }
        Command::Bounds(args) => bound(args),
        Command::CertifyConstants => certify_constants(),
        Command::Experiment { config } => {
            let text = io::read_text(&config)?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
            let summary = run_experiment(&cfg)?;
            print_json(&summary)?;
            Ok(summary.passed)
        }
    }
}

fn fraction(s: &str) -> Result<Fraction> {
    Ok(parse_fraction(s)?)
}

/// Writes to stdout, treating a closed pipe (as with `| head`) as success.
fn emit(text: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => emit(text),
    }
}

fn read_lists(path: &Path, g: &Graph) -> Result<ListAssignment> {
    let lists = io::parse_lists_json(&io::read_text(path)?)?;
    lists.check_for(g)?;
    Ok(lists)
}

fn generate(args: GenerateArgs) -> Result<bool> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| anyhow!("this family needs --{flag}"));
    let seed = args.seed;
    let spec = match args.family {
        Family::Complete => GeneratorSpec::Complete { n: need(args.n, "n")? },
        Family::Cycle => GeneratorSpec::Cycle { n: need(args.n, "n")? },
        Family::Path => GeneratorSpec::Path { n: need(args.n, "n")? },
        Family::Star => GeneratorSpec::Star { leaves: need(args.leaves, "leaves")? },
        Family::CompleteBipartite => GeneratorSpec::CompleteBipartite { a: need(args.a, "a")?, b: need(args.b, "b")? },
        Family::Petersen => GeneratorSpec::Petersen,
        Family::C5Blowup => GeneratorSpec::C5Blowup { t: need(args.t, "t")? },
        Family::Gnp => {
            GeneratorSpec::Gnp { n: need(args.n, "n")?, p: args.p.ok_or_else(|| anyhow!("gnp needs --p"))?, seed }
        }
        Family::NearRegular => GeneratorSpec::NearRegular { n: need(args.n, "n")?, d: need(args.d, "d")?, seed },
        Family::RandomTree => GeneratorSpec::RandomTree { n: need(args.n, "n")?, seed },
    };
    let g = spec.build()?;
    let json = match args.format {
        Some(f) => matches!(f, GraphFormat::Json),
        None => args.out.as_deref().is_some_and(|p| p.extension().is_some_and(|e| e == "json")),
    };
    let text = if json { io::write_adjacency_json(&g) + "\n" } else { io::write_dimacs(&g) };
    write_or_print(args.out.as_deref(), &text)?;
    if let (Some(spec), Some(out)) = (args.lists, args.lists_out) {
        let lists = parse_list_spec(&spec)?.build(&g)?;
        write_or_print(Some(&out), &(io::write_lists_json(&lists) + "\n"))?;
    }
    Ok(true)
}

fn parse_list_spec(s: &str) -> Result<ListSpec> {
    let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
    let number = || arg.parse::<usize>().with_context(|| format!("bad count in list option {s:?}"));
    Ok(match kind {
        "uniform" => ListSpec::Uniform { k: number()? },
        "local-reed" => ListSpec::LocalReed,
        "epsilon" => {
            fraction(arg)?;
            ListSpec::Epsilon { eps: arg.to_string() }
        }
        "degree-plus" => ListSpec::DegreePlus { extra: number()? },
        _ => bail!("unknown list option {s:?}; expected uniform:K, local-reed, epsilon:E or degree-plus:N"),
    })
}

fn color(args: ColorArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let lists = read_lists(&args.lists, &g)?;
    let params = args.params.resolve()?;
    let (report, ok) = match pipeline_color(&g, &lists, &params, args.rounds, args.seed)? {
        PipelineOutcome::Colored { coloring, rounds } => {
            let colors: Vec<u32> = coloring.to_total().expect("pipeline colorings are total");
            (serde_json::json!({ "status": "colored", "rounds": rounds, "coloring": colors }), true)
        }
        PipelineOutcome::Exhausted { violations_per_round } => {
            (serde_json::json!({ "status": "exhausted", "violations_per_round": violations_per_round }), false)
        }
    };
    print_json(&report)?;
    Ok(ok)
}

fn estimate(args: EstimateArgs) -> Result<bool> {
    let g = io::read_graph(&args.graph)?;
    let lists = read_lists(&args.lists, &g)?;
    let params = args.params.resolve()?;
    let (ca, bounds) = match &args.correspondence {
        Some(path) => (io::parse_correspondence_json(&g, lists, &io::read_text(path)?)?, None),
        None => {
            let bounds = lemma_bounds(&g, &lists, &params)?;
            (make_total(&g, &identity_correspondence(&g, &lists)?)?, Some(bounds))
        }
    };
    let mut csv = csv::Writer::from_writer(Vec::new());
    let failures = write_estimate_rows(&mut csv, &g, &ca, bounds.as_deref(), &params, args.trials, args.seed)?;
    let bytes = csv.into_inner().map_err(|e| anyhow!("flushing CSV: {e}"))?;
    write_or_print(args.out.as_deref(), std::str::from_utf8(&bytes)?)?;
    if failures > 0 {
        eprintln!("{failures} bound check(s) failed");
    }
    Ok(failures == 0)
}

fn audit(args: AuditArgs) -> Result<bool> {
    if let Some(path) = args.knm {
        let inst = io::parse_knm_json(&io::read_text(&path)?)?;
        let coloring = color_knm(&inst)?;
        print_json(&serde_json::json!({ "coloring": coloring.to_total() }))?;
        return Ok(true);
    }
    let (Some(graph), Some(lists)) = (args.graph, args.lists) else {
        bail!("audit needs --graph and --lists, or --knm")
    };
    let g = io::read_graph(&graph)?;
    let lists = read_lists(&lists, &g)?;
    let summary = exhaustive_audit(&g, &lists)?;
    print_json(&summary)?;
    // The inequality is only claimed for critical graphs.
    Ok(!summary.critical || summary.violations.is_empty())
}

/// `name=value` pairs from `--params`.
struct NamedParams(BTreeMap<String, String>);

impl NamedParams {
    fn parse(s: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| anyhow!("expected name=value, got {item:?}"))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(NamedParams(map))
    }

    fn raw(&self, name: &str) -> Result<&str> {
        self.0.get(name).map(String::as_str).ok_or_else(|| anyhow!("missing parameter {name}"))
    }

    fn f(&self, name: &str) -> Result<f64> {
        let raw = self.raw(name)?;
        // Accept fractions as well as decimals.
        match raw.parse::<f64>() {
            Ok(x) => Ok(x),
            Err(_) => Ok(local_reed::fraction::to_f64(fraction(raw)?)),
        }
    }

    fn frac(&self, name: &str) -> Result<Fraction> {
        fraction(self.raw(name)?)
    }

    fn u(&self, name: &str) -> Result<u64> {
        self.raw(name)?.parse().with_context(|| format!("parameter {name} must be a nonnegative integer"))
    }
}

fn bound(args: BoundsArgs) -> Result<bool> {
    let p = NamedParams::parse(&args.params)?;
    let value = |name: &str, v: f64| serde_json::json!({ "name": name, "value": v });
    let (out, ok) = match args.which {
        BoundName::Aberrance => (
            value(
                "aberrance",
                bounds::aberrance_lower_bound(
                    p.f("k")?,
                    p.f("alpha")?,
                    p.f("beta")?,
                    p.f("gap")?,
                    p.f("d")?,
                    p.f("n_lord")?,
                    p.f("n_weak")?,
                ),
            ),
            true,
        ),
        BoundName::PairsTrips => (
            value(
                "pairs_trips",
                bounds::pairs_trips_lower_bound(p.f("k")?, p.f("alpha")?, p.f("list_size")?, p.f("e1")?, p.f("e2")?),
            ),
            true,
        ),
        BoundName::StructureRhs => (
            value(
                "structure_rhs",
                bounds::structure_rhs(
                    p.f("eps")?,
                    p.f("alpha")?,
                    p.f("beta")?,
                    p.f("gap")?,
                    p.f("d")?,
                    p.f("n_notegal")?,
                    p.f("n_weak")?,
                ),
            ),
            true,
        ),
        BoundName::Sparsity => {
            (value("sparsity_1", bounds::sparsity_1(p.f("alpha")?, p.f("beta")?, p.f("eps")?, p.f("k")?)), true)
        }
        BoundName::SavingsGap => {
            let r = bounds::savings_gap_certificate(p.frac("alpha")?, p.frac("beta")?, p.frac("eps")?, p.f("rho")?)?;
            let ok = r.holds;
            (serde_json::to_value(r)?, ok)
        }
        BoundName::Talagrand => {
            let t = bounds::talagrand_tail(
                p.f("t")?,
                p.f("r")?,
                p.f("chg")?,
                p.f("expect")?,
                p.f("p_exc")?,
                p.f("sup_x")?,
            )?;
            (serde_json::to_value(t)?, true)
        }
        BoundName::TalagrandMedian => (
            value(
                "talagrand_median",
                bounds::talagrand_median_tail(p.f("t")?, p.f("r")?, p.f("chg")?, p.f("med")?, p.f("p_exc")?)?,
            ),
            true,
        ),
        BoundName::ExpectationMedianGap => (
            value(
                "expectation_median_gap",
                bounds::expectation_median_gap(p.f("r")?, p.f("chg")?, p.f("expect")?, p.f("sup_x")?, p.f("p_exc")?),
            ),
            true,
        ),
        BoundName::Exceptional => {
            let (d, s, e) = (p.f("max_degree")?, p.f("sigma")?, p.f("eps")?);
            let ln = bounds::exceptional_prob_log_bound(d, s, e)?;
            (serde_json::json!({ "name": "exceptional", "value": ln.exp(), "ln_value": ln }), true)
        }
        BoundName::DeviationRatio => {
            let conc = p.u("conc_exp")?.try_into().context("conc_exp too large")?;
            match p.f("expect") {
                Ok(expect) => {
                    let r = bounds::deviation_ratio_check(expect, p.f("max_degree")?, p.f("gamma")?, conc)?;
                    let ok = r.holds;
                    (serde_json::to_value(r)?, ok)
                }
                Err(_) => (
                    value("deviation_ratio", bounds::deviation_ratio_bound(p.f("max_degree")?, p.f("gamma")?, conc)?),
                    true,
                ),
            }
        }
        BoundName::Ky => (serde_json::json!({ "name": "ky", "value": bounds::ky_bound(p.u("k")?, p.u("n")?)? }), true),
        BoundName::MinorConstants => {
            let r = bounds::minor_constants_check(p.frac("alpha")?, p.frac("factor")?)?;
            let ok = r.holds;
            (serde_json::to_value(r)?, ok)
        }
        BoundName::Rivin => (value("rivin", bounds::rivin_bound(p.u("edges")?)), true),
    };
    print_json(&out)?;
    Ok(ok)
}

fn certify_constants() -> Result<bool> {
    let d = ProcedureParams::default();
    let mut reports: Vec<BoundReport> = vec![
        bounds::savings_gap_certificate(d.alpha, d.beta, d.eps, d.rho)?,
        bounds::minor_constants_check(Fraction::new(499, 1000), Fraction::new(99_982, 100_000))?,
    ];
    // The Kostochka–Yancey edge bound is attained by K4 and K5.
    for k in [4u64, 5] {
        let got = bounds::ky_bound(k, k)?;
        let edges = k * (k - 1) / 2;
        reports.push(BoundReport {
            name: format!("ky_complete_{k}"),
            lhs: got as f64,
            rhs: edges as f64,
            holds: got == edges,
            context: BTreeMap::from([("k".to_string(), k as f64)]),
        });
    }
    print_json(&reports)?;
    Ok(reports.iter().all(|r| r.holds))
}
