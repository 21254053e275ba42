use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use roundelim::baselines::Baseline;
use roundelim::graph::{diagnose, fixtures, generate_regular_graph, DiagnosticsConfig, PortedGraph};
use roundelim::local::{InputConfig, PortMode};
use roundelim::oracle::{
    search_b1, search_deviation, search_khintchine, search_min_sum, search_paley_zygmund,
    zero_round_badness, SearchReport, ZeroRoundGame, ZeroRoundStrategy,
};
use roundelim::selfred::{
    iterate_self_reduction, round_bound, trajectory_csv, wrong_half_edge_audit, ProfileSetup,
    Profiler, DEFAULT_BUDGET_CAP,
};

use crate::output::{emit, json};
use crate::Failure;

type Outcome = Result<(), Failure>;

fn half_delta_warning(b: usize, delta: usize) -> Option<String> {
    (2 * b > delta).then(|| format!("b = {b} exceeds delta/2 = {}; the zero-round bound assumes b <= delta/2", delta / 2))
}

// gen ----------------------------------------------------------------------

#[derive(Args, Serialize)]
pub struct GenArgs {
    #[arg(long, env = "ROUNDELIM_N")]
    pub n: usize,
    #[arg(long, env = "ROUNDELIM_DELTA")]
    pub delta: usize,
    #[arg(long, env = "ROUNDELIM_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "ROUNDELIM_MAX_ATTEMPTS", default_value_t = 1000)]
    pub max_attempts: usize,
    /// Constant of the reported independence ceiling rho n ln(delta)/delta.
    #[arg(long, env = "ROUNDELIM_RHO", default_value_t = 2.0)]
    pub rho: f64,
    /// Constant of the reported girth floor epsilon log_delta(n).
    #[arg(long, env = "ROUNDELIM_EPSILON", default_value_t = 0.25)]
    pub epsilon: f64,
    /// Largest n for which the exact independence number is computed.
    #[arg(long, env = "ROUNDELIM_EXACT_THRESHOLD", default_value_t = 40)]
    pub exact_threshold: usize,
    /// Graph file; stdout when omitted.
    #[arg(long, env = "ROUNDELIM_OUT")]
    pub out: Option<PathBuf>,
    /// Diagnostics JSON; stdout when omitted.
    #[arg(long, env = "ROUNDELIM_REPORT")]
    pub report: Option<PathBuf>,
}

pub fn gen(a: GenArgs) -> Outcome {
    let g = generate_regular_graph(a.n, a.delta, a.seed, a.max_attempts)?;
    let cfg = DiagnosticsConfig {
        rho: a.rho,
        epsilon: a.epsilon,
        exact_threshold: a.exact_threshold,
    };
    let report = json!({ "config": &a, "diagnostics": diagnose(&g, &cfg) });
    emit(a.out.as_deref(), &g.to_string())?;
    emit(a.report.as_deref(), &json(&report))?;
    Ok(())
}

// selfreduce ---------------------------------------------------------------

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Mc,
}

#[derive(Args, Serialize)]
pub struct SelfReduceArgs {
    /// Baseline rule: uniform, constant, parity or proposal.
    #[arg(long, env = "ROUNDELIM_BASELINE")]
    pub baseline: String,
    /// Graph file written by `gen`.
    #[arg(long, env = "ROUNDELIM_GRAPH", conflicts_with = "fixture")]
    pub graph: Option<PathBuf>,
    /// Built-in graph: cube, heawood, petersen, k4 or torus4x4.
    #[arg(long, env = "ROUNDELIM_FIXTURE")]
    pub fixture: Option<String>,
    /// Without --graph or --fixture a graph is generated from --n, --delta, --seed.
    #[arg(long, env = "ROUNDELIM_N")]
    pub n: Option<usize>,
    #[arg(long, env = "ROUNDELIM_DELTA")]
    pub delta: Option<usize>,
    #[arg(long, env = "ROUNDELIM_B", default_value_t = 1)]
    pub b: usize,
    /// Rounds of the starting algorithm.
    #[arg(long = "T", env = "ROUNDELIM_T", default_value_t = 1)]
    pub t: usize,
    /// Private random bits per node.
    #[arg(long = "R", env = "ROUNDELIM_R", default_value_t = 1)]
    pub r: u32,
    #[arg(long = "R-shared", env = "ROUNDELIM_R_SHARED", default_value_t = 0)]
    pub r_shared: u32,
    /// IDs are drawn from [1, n^c].
    #[arg(long, env = "ROUNDELIM_ID_EXPONENT", default_value_t = 1)]
    pub id_exponent: u32,
    #[arg(long, value_enum, env = "ROUNDELIM_MODE", default_value = "exact")]
    pub mode: Mode,
    /// Monte Carlo extensions per profile.
    #[arg(long, env = "ROUNDELIM_SAMPLES", default_value_t = 1000)]
    pub samples: usize,
    /// Input draws per badness estimate.
    #[arg(long, env = "ROUNDELIM_TRIALS", default_value_t = 100)]
    pub trials: usize,
    #[arg(long, env = "ROUNDELIM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Envelope constant c in p0 (c sqrt b)^stage.
    #[arg(long, env = "ROUNDELIM_C_CONST", default_value_t = 2.0)]
    pub c_const: f64,
    /// Bits allowed per exact enumeration.
    #[arg(long, env = "ROUNDELIM_CAP", default_value_t = DEFAULT_BUDGET_CAP)]
    pub cap: u32,
    #[arg(long, env = "ROUNDELIM_MAX_ATTEMPTS", default_value_t = 1000)]
    pub max_attempts: usize,
    /// Trajectory CSV; stdout when omitted.
    #[arg(long, env = "ROUNDELIM_CSV")]
    pub csv: Option<PathBuf>,
    /// Audit JSON; stdout when omitted.
    #[arg(long, env = "ROUNDELIM_AUDIT")]
    pub audit: Option<PathBuf>,
}

fn fixture(name: &str) -> Result<PortedGraph, Failure> {
    Ok(match name {
        "cube" => fixtures::cube(),
        "heawood" => fixtures::heawood(),
        "petersen" => fixtures::petersen(),
        "k4" => fixtures::complete(4),
        "torus4x4" => fixtures::torus(4, 4),
        other => return Err(Failure::Usage(format!("unknown fixture {other:?}"))),
    })
}

fn load_graph(a: &SelfReduceArgs) -> Result<PortedGraph, Failure> {
    if let Some(path) = &a.graph {
        return Ok(std::fs::read_to_string(path)?.parse()?);
    }
    if let Some(name) = &a.fixture {
        return fixture(name);
    }
    match (a.n, a.delta) {
        (Some(n), Some(delta)) => Ok(generate_regular_graph(n, delta, a.seed, a.max_attempts)?),
        _ => Err(Failure::Usage("give --graph, --fixture, or both --n and --delta".into())),
    }
}

pub fn selfreduce(a: SelfReduceArgs) -> Outcome {
    let baseline: Baseline = a.baseline.parse().map_err(Failure::Usage)?;
    if !baseline.available_at(a.t) {
        return Err(Failure::Input(format!("{baseline} needs at least one round")));
    }
    let g = Arc::new(load_graph(&a)?);
    if a.b == 0 || a.b > g.delta() {
        return Err(Failure::Input(format!("need 1 <= b <= delta = {}", g.delta())));
    }
    let inputs = InputConfig {
        id_exponent: a.id_exponent,
        private_bits: a.r,
        shared_bits: a.r_shared,
        port_mode: PortMode::Fixed,
    };
    let mut setup = match a.mode {
        Mode::Exact => ProfileSetup::exact(inputs),
        Mode::Mc => ProfileSetup::monte_carlo(inputs, a.samples, a.seed),
    };
    setup.cap = a.cap;
    let alg = baseline.build(a.b, a.t);

    let audit = match (a.mode, a.t) {
        (Mode::Exact, t) if t >= 1 => {
            let profiler = Arc::new(Profiler::new(g.clone(), alg.clone(), setup)?);
            Some(wrong_half_edge_audit(&profiler)?)
        }
        _ => None,
    };
    let rows = iterate_self_reduction(g.clone(), &alg, &setup, a.trials, a.seed, a.c_const)?;

    let note = match (a.mode, a.t) {
        (_, 0) => Some("T = 0: nothing to derive"),
        (Mode::Mc, _) => Some("exact identities are only audited in exact mode"),
        _ => None,
    };
    let report = json!({
        "config": &a,
        "graph": { "n": g.n(), "delta": g.delta() },
        "warnings": half_delta_warning(a.b, g.delta()).into_iter().collect::<Vec<_>>(),
        "audit": audit,
        "note": note,
    });
    emit(a.csv.as_deref(), &trajectory_csv(&rows))?;
    emit(a.audit.as_deref(), &json(&report))?;
    Ok(())
}

// oracle -------------------------------------------------------------------

#[derive(Clone, Copy, Serialize)]
#[serde(rename_all = "snake_case")]
enum Check {
    Deviation,
    MinSum,
    Khintchine,
    PaleyZygmund,
    B1,
    ZeroRound,
}

impl Check {
    fn parse(s: &str) -> Result<Self, Failure> {
        Ok(match s.replace('-', "_").as_str() {
            "deviation" => Check::Deviation,
            "min_sum" => Check::MinSum,
            "khintchine" => Check::Khintchine,
            "paley_zygmund" => Check::PaleyZygmund,
            "b1" => Check::B1,
            "zero_round" => Check::ZeroRound,
            _ => {
                return Err(Failure::Usage(format!(
                    "unknown check {s:?}; expected deviation, min_sum, khintchine, paley_zygmund, b1 or zero_round"
                )))
            }
        })
    }
}

#[derive(Args, Serialize)]
pub struct OracleArgs {
    /// deviation, min_sum, khintchine, paley_zygmund, b1 or zero_round.
    pub check: String,
    /// Largest vector length (deviation, min_sum, b1) or the degree (zero_round).
    #[arg(long, env = "ROUNDELIM_DELTA", default_value_t = 16)]
    pub delta: usize,
    #[arg(long, env = "ROUNDELIM_B", default_value_t = 1)]
    pub b: usize,
    /// Number of random cases.
    #[arg(long, env = "ROUNDELIM_SEARCHES", default_value_t = 1000)]
    pub searches: usize,
    /// Largest vector length for khintchine.
    #[arg(long, env = "ROUNDELIM_N", default_value_t = 16)]
    pub n: usize,
    /// zero_round: trials per strategy.
    #[arg(long, env = "ROUNDELIM_TRIALS", default_value_t = 10_000)]
    pub trials: usize,
    /// zero_round: size of the regular graph played on.
    #[arg(long, env = "ROUNDELIM_GRAPH_N", default_value_t = 22)]
    pub graph_n: usize,
    #[arg(long, env = "ROUNDELIM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Verdict JSONL; stdout when omitted.
    #[arg(long, env = "ROUNDELIM_OUT")]
    pub out: Option<PathBuf>,
    /// Summary JSON; stderr when omitted.
    #[arg(long, env = "ROUNDELIM_SUMMARY")]
    pub summary: Option<PathBuf>,
}

fn summarize(path: Option<&Path>, summary: &serde_json::Value) -> Outcome {
    match path {
        Some(p) => emit(Some(p), &json(summary))?,
        None => eprint!("{}", json(summary)),
    }
    Ok(())
}

pub fn oracle(a: OracleArgs) -> Outcome {
    let check = Check::parse(&a.check)?;
    let report: SearchReport = match check {
        Check::Deviation => search_deviation(a.delta, a.b, a.searches, a.seed)?,
        Check::MinSum => search_min_sum(a.delta, a.searches, a.seed)?,
        Check::Khintchine => search_khintchine(a.n, a.searches, a.seed)?,
        Check::PaleyZygmund => search_paley_zygmund(a.searches, a.seed)?,
        Check::B1 => search_b1(a.delta, a.searches, a.seed)?,
        Check::ZeroRound => return zero_round(&a),
    };
    emit(a.out.as_deref(), &report.jsonl())?;
    summarize(a.summary.as_deref(), &json!({ "config": &a, "report": report }))
}

/// One line per strategy of the zoo, shaped like a verdict: the claim is
/// badness >= 1/2, judged by the upper end of the 99% interval.
fn zero_round(a: &OracleArgs) -> Outcome {
    let game = ZeroRoundGame {
        delta: a.delta,
        b: a.b,
        n: a.graph_n,
        trials: a.trials,
        seed: a.seed,
    };
    let mut lines = String::new();
    let mut violations = 0;
    for s in ZeroRoundStrategy::zoo() {
        let est = zero_round_badness(&s, &game)?;
        let conclusion = est.ci_high >= 0.5;
        violations += usize::from(!conclusion);
        let line = json!({
            "check": "zero_round",
            "params_digest": format!("delta={},b={},strategy={}", a.delta, a.b, s.name()),
            "hypothesis": 2 * a.b <= a.delta,
            "conclusion": conclusion,
            "lhs": est.mean,
            "rhs": 0.5,
            "margin": est.mean - 0.5,
            "seed": a.seed,
            "estimate": est,
        });
        lines.push_str(&(line.to_string() + "\n"));
    }
    emit(a.out.as_deref(), &lines)?;
    summarize(
        a.summary.as_deref(),
        &json!({ "config": a, "report": { "check": "zero_round", "cases": ZeroRoundStrategy::zoo().len(), "violations": violations } }),
    )
}

// bound --------------------------------------------------------------------

#[derive(Args, Serialize)]
pub struct BoundArgs {
    /// Badness of the starting algorithm, in (0, 1/2).
    #[arg(long, env = "ROUNDELIM_P")]
    pub p: f64,
    #[arg(long, env = "ROUNDELIM_B", default_value_t = 1)]
    pub b: usize,
    #[arg(long, env = "ROUNDELIM_DELTA")]
    pub delta: usize,
    /// Number of nodes; may be astronomically large.
    #[arg(long, env = "ROUNDELIM_N")]
    pub n: f64,
    #[arg(long, env = "ROUNDELIM_EPSILON", default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, env = "ROUNDELIM_C_CONST", default_value_t = 2.0)]
    pub c_const: f64,
}

pub fn bound(a: BoundArgs) -> Outcome {
    let t = round_bound(a.p, a.b, a.delta, a.n, a.epsilon, a.c_const)?;
    let report = json!({
        "config": &a,
        "rounds": t,
        "warnings": half_delta_warning(a.b, a.delta).into_iter().collect::<Vec<_>>(),
    });
    emit(None, &json(&report))?;
    Ok(())
}
