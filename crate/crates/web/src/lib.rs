//! Browser bindings. Every entry point returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use roundelim::baselines::Baseline;
use roundelim::graph::{fixtures, PortedGraph};
use roundelim::local::{assign_inputs, InputConfig};
use roundelim::oracle::{
    check_deviation_lemma, poisson_binomial_pmf, s_quantities, zero_round_badness, ProbVector,
    ZeroRoundGame, ZeroRoundStrategy,
};
use roundelim::selfred::{estimate_direction_profile, ProfileSetup};

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse_vector(s: &str) -> Result<Vec<f64>, String> {
    s.split([',', ' '])
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

/// Badness of every zero-round strategy in the zoo.
#[wasm_bindgen]
pub fn zero_round(delta: usize, b: usize, trials: usize, seed: u64) -> String {
    respond((|| {
        let game = ZeroRoundGame { delta, b, n: 2 * delta + 2, trials, seed };
        let rows = ZeroRoundStrategy::zoo()
            .iter()
            .map(|s| {
                let est = zero_round_badness(s, &game).map_err(|e| e.to_string())?;
                Ok(json!({ "strategy": s.name(), "estimate": est }))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let uniform = (delta - b) as f64 / delta as f64;
        Ok(json!({ "rows": rows, "uniform_exact": uniform, "floor": 0.5 }))
    })())
}

/// Deviation-lemma verdict for a tagged `x` (summing to `b`) and any `y`,
/// plus the distribution of the number of `y`-events.
#[wasm_bindgen]
pub fn deviation(x: &str, y: &str, b: usize) -> String {
    respond((|| {
        let x = ProbVector::tagged(parse_vector(x)?, b).map_err(|e| e.to_string())?;
        let y = ProbVector::new(parse_vector(y)?).map_err(|e| e.to_string())?;
        if x.entries.len() != y.entries.len() {
            return Err("x and y need the same length".into());
        }
        let verdict = check_deviation_lemma(&x, &y, b);
        let q = s_quantities(&x.entries, b);
        Ok(json!({
            "verdict": verdict,
            "s_rest": q.s_rest,
            "pmf": poisson_binomial_pmf(&y.entries),
        }))
    })())
}

fn fixture(name: &str) -> Result<PortedGraph, String> {
    Ok(match name {
        "cube" => fixtures::cube(),
        "heawood" => fixtures::heawood(),
        "petersen" => fixtures::petersen(),
        "k4" => fixtures::complete(4),
        other => return Err(format!("unknown graph {other:?}")),
    })
}

/// Exact direction profile of `node` for a one-round baseline, conditioned
/// on its own inputs drawn from `seed` (one private bit, ids in [1, n]).
#[wasm_bindgen]
pub fn direction_profile(graph: &str, baseline: &str, b: usize, node: usize, seed: u64) -> String {
    respond((|| {
        let g = fixture(graph)?;
        let bl: Baseline = baseline.parse()?;
        if node >= g.n() || b == 0 || b > g.delta() {
            return Err(format!("need node < {} and 1 <= b <= {}", g.n(), g.delta()));
        }
        let cfg = InputConfig::exact().with_bits(1, 0);
        let inputs = assign_inputs(&g, seed, &cfg);
        let stats = estimate_direction_profile(&g, &inputs, node, &bl.build(b, 1), &ProfileSetup::exact(cfg))
            .map_err(|e| e.to_string())?;
        let own = &inputs.nodes[node];
        Ok(json!({
            "node": node,
            "id": own.id,
            "bits": own.private_bits.to_string(),
            "profile": stats,
        }))
    })())
}
