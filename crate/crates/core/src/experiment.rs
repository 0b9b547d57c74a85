// SPDX-License-Identifier: Apache-2.0

//! Config-driven experiments: build an instance, run the procedure, and
//! write a results CSV plus a JSON manifest.

use crate::bounds::{aberrance_lower_bound, pairs_trips_lower_bound};
use crate::correspondence::{identity_correspondence, make_total, CorrespondenceAssignment, CorrespondenceError};
use crate::fraction::{format_fraction, parse_fraction, to_f64, Fraction, ParseFractionError};
use crate::generators;
use crate::graph::Graph;
use crate::io::{self, IoError};
use crate::lists::{epsilon_list_sizes, local_reed_list_sizes, profile, ListAssignment, ListError};
use crate::procedure::{
    default_rho, mc_estimate, pipeline_color, PipelineOutcome, Priority, ProcedureError, ProcedureParams, Sampler,
    SavingsContext, Variable,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Fraction(#[from] ParseFractionError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lists(#[from] ListError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Procedure(#[from] ProcedureError),
}

fn config_err(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Complete { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    Star { leaves: usize },
    CompleteBipartite { a: usize, b: usize },
    Petersen,
    C5Blowup { t: usize },
    Gnp { n: usize, p: f64, seed: u64 },
    NearRegular { n: usize, d: usize, seed: u64 },
    RandomTree { n: usize, seed: u64 },
    File { path: PathBuf },
}

impl GeneratorSpec {
    pub fn build(&self) -> Result<Graph, ExperimentError> {
        Ok(match *self {
            GeneratorSpec::Complete { n } => generators::complete(n),
            GeneratorSpec::Cycle { n } if n < 3 => return Err(config_err("a cycle needs at least 3 vertices")),
            GeneratorSpec::Cycle { n } => generators::cycle(n),
            GeneratorSpec::Path { n } => generators::path(n),
            GeneratorSpec::Star { leaves } => generators::star(leaves),
            GeneratorSpec::CompleteBipartite { a, b } if a == 0 || b == 0 => {
                return Err(config_err("complete bipartite sides must be nonempty"))
            }
            GeneratorSpec::CompleteBipartite { a, b } => generators::complete_bipartite(a, b),
            GeneratorSpec::Petersen => generators::petersen(),
            GeneratorSpec::C5Blowup { t } if t == 0 => return Err(config_err("blowup factor must be at least 1")),
            GeneratorSpec::C5Blowup { t } => generators::c5_blowup(t),
            GeneratorSpec::Gnp { p, .. } if !(0.0..=1.0).contains(&p) => {
                return Err(config_err(format!("edge probability {p} outside [0, 1]")))
            }
            GeneratorSpec::Gnp { n, p, seed } => generators::gnp(n, p, seed),
            GeneratorSpec::NearRegular { n, d, seed } => generators::near_regular(n, d, seed),
            GeneratorSpec::RandomTree { n, seed } => generators::random_tree(n, seed),
            GeneratorSpec::File { ref path } => io::read_graph(path)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ListSpec {
    /// `{0, …, k−1}` everywhere.
    Uniform {
        k: usize,
    },
    /// `⌈(d(v) + 1 + ω(v)) / 2⌉` colors.
    LocalReed,
    /// `⌈(1 − ε)(d(v) + 1) + ε·ω(v)⌉` colors.
    Epsilon {
        eps: String,
    },
    /// `d(v) + extra` colors.
    DegreePlus {
        extra: usize,
    },
    File {
        path: PathBuf,
    },
}

impl ListSpec {
    pub fn build(&self, g: &Graph) -> Result<ListAssignment, ExperimentError> {
        let lists = match self {
            ListSpec::Uniform { k } if *k == 0 => return Err(config_err("lists must be nonempty")),
            ListSpec::Uniform { k } => ListAssignment::uniform(g.n(), *k),
            ListSpec::LocalReed => ListAssignment::from_sizes(&local_reed_list_sizes(g)),
            ListSpec::Epsilon { eps } => ListAssignment::from_sizes(&epsilon_list_sizes(g, parse_fraction(eps)?)),
            ListSpec::DegreePlus { extra } => {
                let sizes: Vec<usize> = (0..g.n()).map(|v| g.neighbors(v).len() + extra).collect();
                if sizes.contains(&0) {
                    return Err(config_err("degree_plus with extra = 0 gives an isolated vertex no colors"));
                }
                ListAssignment::from_sizes(&sizes)
            }
            ListSpec::File { path } => io::parse_lists_json(&io::read_text(path)?)?,
        };
        lists.check_for(g)?;
        Ok(lists)
    }
}

/// Procedure parameters with fractions as `"num/den"` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamsConfig {
    pub eps: String,
    pub sigma: String,
    pub alpha: String,
    pub beta: String,
    /// `"auto"` for `1 − e^{−1}·α/(1 + α)`, or a decimal.
    pub rho: String,
    pub xi1: String,
    pub xi2: String,
    pub gap_exp: u32,
    pub conc_exp: u32,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        let p = ProcedureParams::default();
        ParamsConfig {
            eps: format_fraction(p.eps),
            sigma: format_fraction(p.sigma),
            alpha: format_fraction(p.alpha),
            beta: format_fraction(p.beta),
            rho: "auto".to_string(),
            xi1: format_fraction(p.xi1),
            xi2: format_fraction(p.xi2),
            gap_exp: p.gap_exp,
            conc_exp: p.conc_exp,
        }
    }
}

impl ParamsConfig {
    pub fn resolve(&self) -> Result<ProcedureParams, ExperimentError> {
        let alpha = parse_fraction(&self.alpha)?;
        let rho = if self.rho == "auto" {
            default_rho(alpha)
        } else {
            self.rho
                .trim()
                .parse::<f64>()
                .map_err(|_| config_err(format!("rho {:?} is neither auto nor a number", self.rho)))?
        };
        let params = ProcedureParams {
            eps: parse_fraction(&self.eps)?,
            sigma: parse_fraction(&self.sigma)?,
            alpha,
            beta: parse_fraction(&self.beta)?,
            rho,
            xi1: parse_fraction(&self.xi1)?,
            xi2: parse_fraction(&self.xi2)?,
            gap_exp: self.gap_exp,
            conc_exp: self.conc_exp,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Monte Carlo savings statistics against the per-vertex lower bounds.
    EstimateSavings,
    Pipeline {
        rounds: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub lists: ListSpec,
    #[serde(default)]
    pub params: ParamsConfig,
    pub experiment: ExperimentKind,
    pub trials: u64,
    pub seed: u64,
    /// Directory receiving `results.csv` and `manifest.json`.
    pub output: PathBuf,
}

/// Expected-value bounds for one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaBounds {
    /// Exact value of `E[Unact]` under list-size priority.
    pub unact: f64,
    pub aberrance: f64,
    /// Only stated for vertices without lordlier neighbors, where the
    /// egalitarian set used for `Pairs` is the `(1 + α)` window.
    pub pairs_minus_trips: Option<f64>,
}

pub fn lemma_bounds(
    g: &Graph,
    lists: &ListAssignment,
    params: &ProcedureParams,
) -> Result<Vec<LemmaBounds>, ExperimentError> {
    let k = params.keep_constant();
    let (a, b) = (to_f64(params.alpha), to_f64(params.beta));
    let zero = Fraction::from_integer(0);
    (0..g.n())
        .map(|v| {
            let p = profile(g, lists, v, params.alpha, params.beta, zero)?;
            let d = p.degree as f64;
            let aberrance =
                aberrance_lower_bound(k, a, b, p.gap as f64, d, p.lordlier.len() as f64, p.weak_egal.len() as f64);
            let pairs_minus_trips = p.lordlier.is_empty().then(|| {
                let e1 = g.complement_edge_count(&p.egal()) as f64;
                let e2 = d * (d - 1.0) / 2.0;
                pairs_trips_lower_bound(k, a, lists.size(v) as f64, e1, e2)
            });
            Ok(LemmaBounds { unact: (1.0 - params.rho) * p.subserv.len() as f64, aberrance, pairs_minus_trips })
        })
        .collect()
}

/// Slack for floating-point noise when a standard error is zero.
const FLOAT_SLACK: f64 = 1e-9;

/// `mean ≥ bound − z·se`.
pub fn within_lower(mean: f64, se: f64, bound: f64, z: f64) -> bool {
    mean >= bound - z * se - FLOAT_SLACK
}

/// `|mean − value| ≤ z·se`.
pub fn within_two_sided(mean: f64, se: f64, value: f64, z: f64) -> bool {
    (mean - value).abs() <= z * se + FLOAT_SLACK
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub passed: bool,
    pub csv: PathBuf,
    pub manifest: PathBuf,
    /// Checked rows that failed, for estimate experiments.
    pub failures: usize,
}

#[derive(Serialize)]
struct EstimateRow {
    vertex: usize,
    var: &'static str,
    mean: f64,
    se: f64,
    lemma_bound: Option<f64>,
    pass: Option<bool>,
}

/// SHA-256 over `blob <len>\0<content>`, as git hashes blobs.
pub fn git_blob_sha256(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    hex::encode(h.finalize())
}

fn write_file(path: &Path, content: &[u8]) -> Result<(), ExperimentError> {
    std::fs::write(path, content).map_err(|source| ExperimentError::Write { path: path.display().to_string(), source })
}

/// Writes one `vertex,var,mean,se,lemma_bound,pass` row per vertex and
/// variable, checking means against `bounds` at 3 standard errors when given.
/// Returns the number of failed checks.
pub fn write_estimate_rows<W: std::io::Write>(
    csv: &mut csv::Writer<W>,
    g: &Graph,
    ca: &CorrespondenceAssignment,
    bounds: Option<&[LemmaBounds]>,
    params: &ProcedureParams,
    trials: u64,
    seed: u64,
) -> Result<usize, ExperimentError> {
    let sampler = Sampler::equalized(g, ca, params)?;
    let ctx = SavingsContext::new(g, ca, params.sigma, &Priority::ListSize);
    let est = mc_estimate(&sampler, &ctx, trials, seed);
    let mut failures = 0;
    for v in 0..g.n() {
        for var in Variable::ALL {
            let s = est.get(v, var);
            let (bound, pass) = match (bounds.map(|b| b[v]), var) {
                (Some(lb), Variable::Unact) => (Some(lb.unact), Some(within_two_sided(s.mean, s.se, lb.unact, 3.0))),
                (Some(lb), Variable::Aberrance) => {
                    (Some(lb.aberrance), Some(within_lower(s.mean, s.se, lb.aberrance, 3.0)))
                }
                (Some(LemmaBounds { pairs_minus_trips: Some(b), .. }), Variable::PairsMinusTrips) => {
                    (Some(b), Some(within_lower(s.mean, s.se, b, 3.0)))
                }
                _ => (None, None),
            };
            failures += usize::from(pass == Some(false));
            csv.serialize(EstimateRow {
                vertex: v,
                var: var.name(),
                mean: s.mean,
                se: s.se,
                lemma_bound: bound,
                pass,
            })?;
        }
    }
    Ok(failures)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary, ExperimentError> {
    if cfg.trials == 0 {
        return Err(config_err("trials must be at least 1"));
    }
    let params = cfg.params.resolve()?;
    let g = cfg.generator.build()?;
    let lists = cfg.lists.build(&g)?;
    std::fs::create_dir_all(&cfg.output)
        .map_err(|source| ExperimentError::Write { path: cfg.output.display().to_string(), source })?;
    let csv_path = cfg.output.join("results.csv");
    let manifest_path = cfg.output.join("manifest.json");
    let mut csv = csv::Writer::from_writer(Vec::new());
    let (passed, failures, outcome) = match cfg.experiment {
        ExperimentKind::EstimateSavings => {
            let ca = make_total(&g, &identity_correspondence(&g, &lists)?)?;
            let failures = write_estimate_rows(
                &mut csv,
                &g,
                &ca,
                Some(&lemma_bounds(&g, &lists, &params)?),
                &params,
                cfg.trials,
                cfg.seed,
            )?;
            (failures == 0, failures, serde_json::json!({ "failed_rows": failures }))
        }
        ExperimentKind::Pipeline { rounds } => match pipeline_color(&g, &lists, &params, rounds, cfg.seed)? {
            PipelineOutcome::Colored { coloring, rounds } => {
                csv.write_record(["vertex", "color"])?;
                for (v, c) in coloring.as_slice().iter().enumerate() {
                    let c = c.expect("pipeline colorings are total");
                    csv.write_record([v.to_string(), c.to_string()])?;
                }
                (true, 0, serde_json::json!({ "status": "colored", "rounds": rounds }))
            }
            PipelineOutcome::Exhausted { violations_per_round } => {
                csv.write_record(["round", "violations"])?;
                for (r, x) in violations_per_round.iter().enumerate() {
                    csv.write_record([(r + 1).to_string(), x.to_string()])?;
                }
                (false, 0, serde_json::json!({ "status": "exhausted", "violations_per_round": violations_per_round }))
            }
        },
    };
    let csv_bytes = csv.into_inner().map_err(|e| config_err(format!("flushing CSV: {e}")))?;
    write_file(&csv_path, &csv_bytes)?;
    let manifest = serde_json::json!({
        "config": cfg,
        "seed": cfg.seed,
        "inputs": {
            "graph_dimacs_sha256": git_blob_sha256(io::write_dimacs(&g).as_bytes()),
            "lists_json_sha256": git_blob_sha256(io::write_lists_json(&lists).as_bytes()),
        },
        "resolved_rho": params.rho,
        "keep_constant": params.keep_constant(),
        "outcome": outcome,
        "passed": passed,
        "results_sha256": git_blob_sha256(&csv_bytes),
        "version": env!("CARGO_PKG_VERSION"),
    });
    write_file(&manifest_path, serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok(ExperimentSummary { passed, csv: csv_path, manifest: manifest_path, failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(out: &Path, experiment: ExperimentKind, lists: ListSpec) -> ExperimentConfig {
        ExperimentConfig {
            generator: GeneratorSpec::C5Blowup { t: 2 },
            lists,
            params: ParamsConfig { eps: "1/3".into(), rho: "0.5".into(), ..Default::default() },
            experiment,
            trials: 4_000,
            seed: 17,
            output: out.to_path_buf(),
        }
    }

    #[test]
    fn git_blob_hash_matches_known_value() {
        // Independently computed: sha256 of the bytes "blob 6\0hello\n".
        assert_eq!(git_blob_sha256(b"hello\n"), "2cf8d83d9ee29543b34a87727421fdecb7e3f3a183d337639025de576db9ebb4");
    }

    #[test]
    fn estimate_experiment_is_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path(), ExperimentKind::EstimateSavings, ListSpec::Uniform { k: 5 });
        let first = run_experiment(&cfg).unwrap();
        let csv_a = std::fs::read(&first.csv).unwrap();
        let text = String::from_utf8(csv_a.clone()).unwrap();
        assert!(text.starts_with("vertex,var,mean,se,lemma_bound,pass\n"));
        assert_eq!(text.lines().count(), 1 + 10 * Variable::ALL.len());
        let second = run_experiment(&cfg).unwrap();
        assert_eq!(csv_a, std::fs::read(&second.csv).unwrap());
        let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(&first.manifest).unwrap()).unwrap();
        assert_eq!(manifest["seed"], 17);
        assert_eq!(manifest["config"]["lists"]["kind"], "uniform");
    }

    #[test]
    fn pipeline_experiment_with_generous_lists_succeeds() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path(), ExperimentKind::Pipeline { rounds: 5 }, ListSpec::DegreePlus { extra: 1 });
        let summary = run_experiment(&cfg).unwrap();
        assert!(summary.passed);
        let text = std::fs::read_to_string(&summary.csv).unwrap();
        assert_eq!(text.lines().count(), 11);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg =
            config(Path::new("out"), ExperimentKind::Pipeline { rounds: 3 }, ListSpec::Epsilon { eps: "1/330".into() });
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""eps":"1/330""#));
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
        let minimal: ExperimentConfig = serde_json::from_str(
            r#"{"generator": {"name": "petersen"}, "lists": {"kind": "local_reed"},
                "experiment": {"kind": "estimate_savings"}, "trials": 10, "seed": 1, "output": "x"}"#,
        )
        .unwrap();
        assert_eq!(minimal.params.resolve().unwrap(), ProcedureParams::default());
    }

    #[test]
    fn bad_configs_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(dir.path(), ExperimentKind::EstimateSavings, ListSpec::Uniform { k: 0 });
        assert!(matches!(run_experiment(&cfg), Err(ExperimentError::Config(_))));
        cfg.lists = ListSpec::Uniform { k: 3 };
        cfg.params.alpha = "one half".into();
        assert!(matches!(run_experiment(&cfg), Err(ExperimentError::Fraction(_))));
        cfg.params.alpha = "1/50".into();
        cfg.generator = GeneratorSpec::Cycle { n: 2 };
        assert!(matches!(run_experiment(&cfg), Err(ExperimentError::Config(_))));
    }

    #[test]
    fn bounds_for_a_star() {
        // Center with 4 colors, leaves with 2: all leaves are subservient.
        let g = generators::star(3);
        let lists = ListAssignment::from_sizes(&[4, 2, 2, 2]);
        let params = ProcedureParams { rho: 0.5, ..Default::default() };
        let b = lemma_bounds(&g, &lists, &params).unwrap();
        assert_eq!(b[0].unact, 1.5);
        assert_eq!(b[0].aberrance, 0.0);
        // Leaves see a lordlier center.
        assert!(b[1].pairs_minus_trips.is_none() && b[1].aberrance > 0.0);
    }
}
