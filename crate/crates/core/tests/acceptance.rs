//! Acceptance suite: one PASS/FAIL line per criterion, each with its time
//! limit. Runs without the libtest harness so the lines always print.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use roundelim::baselines::{table_rule, Baseline};
use roundelim::graph::{
    extend_ball_to_tree, extract_ball, fixtures, generate_regular_graph, max_independent_set,
    PortedGraph,
};
use roundelim::local::{
    assign_inputs, extract_view, labels_from_ports, run_algorithm, AlgorithmDescriptor,
    AlgorithmKind, BitString, HalfEdgeLabeling, InputConfig, Inputs, Label, PortMode,
};
use roundelim::oracle::{
    brute_force_pmf, check_b1_lemma, check_khintchine, check_paley_zygmund, poisson_binomial_pmf,
    search_b1, search_deviation, search_khintchine, search_min_sum, search_paley_zygmund,
    zero_round_badness, ProbVector, ZeroRoundGame, ZeroRoundStrategy,
};
use roundelim::problems::{
    greedy_maximal_b_matching, score_grabbing, unsaturated_nodes, induced_max_degree,
    verify_b_grabbing, verify_edge_coloring, verify_maximal_b_matching,
};
use roundelim::reductions::{coloring_to_grabbing, matching_to_grabbing};
use roundelim::rng;
use roundelim::selfred::{
    exact_expected_badness, per_node_mu_check, round_bound, wrong_half_edge_audit, Audit,
    InputSpace, ProfileSetup, Profiler,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// R = 1 private bit, ids in [1, n], fixed ports.
fn exact_setup(shared_bits: u32) -> ProfileSetup {
    ProfileSetup::exact(InputConfig::exact().with_bits(1, shared_bits))
}

fn cube_profilers() -> Vec<(Baseline, Arc<Profiler>)> {
    let g = Arc::new(fixtures::cube());
    Baseline::ALL
        .into_iter()
        .map(|bl| {
            let p = Profiler::new(g.clone(), bl.build(1, 1), exact_setup(1)).unwrap();
            (bl, Arc::new(p))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let g = fixtures::cube();
    let setup = exact_setup(1);
    let space = InputSpace::new(g.n(), &setup.inputs);
    let mut worst = 0.0f64;
    let mut profiles = 0;
    for (bl, p) in cube_profilers() {
        for v in 0..g.n() {
            for state in 0..space.states() {
                for sh in 0..space.shared_states() {
                    let x = Inputs {
                        nodes: (0..g.n()).map(|_| space.decode(state)).collect(),
                        shared: space.shared(sh),
                    };
                    let st = p.profile(&extract_view(&g, &x, v, 0));
                    worst = worst.max((st.s - 1.0).abs());
                    profiles += 1;
                    ensure((st.s - 1.0).abs() <= 1e-12, || {
                        format!("{bl}: node {v} state {state}: S = {}", st.s)
                    })?;
                }
            }
        }
    }
    Ok(format!("{profiles} profiles over 4 baselines, max |S-b| = {worst:.1e}"))
}

fn cube_audits() -> Result<Vec<(Baseline, Audit)>, String> {
    cube_profilers()
        .into_iter()
        .map(|(bl, p)| wrong_half_edge_audit(&p).map(|a| (bl, a)).map_err(|e| e.to_string()))
        .collect()
}

fn criterion_2(audits: &[(Baseline, Audit)]) -> Outcome {
    let mut worst = 0.0f64;
    for (bl, a) in audits {
        let gap = (a.h_wrong - a.sum_s_rest).abs();
        worst = worst.max(gap);
        ensure(gap <= 1e-9, || {
            format!("{bl}: H_wrong {} vs sum S_rest {}", a.h_wrong, a.sum_s_rest)
        })?;
    }
    let summary: Vec<String> = audits
        .iter()
        .map(|(bl, a)| format!("{bl} {:.4}", a.h_wrong))
        .collect();
    Ok(format!("H_wrong = sum S_rest [{}], max gap {worst:.1e}", summary.join(", ")))
}

fn criterion_3(audits: &[(Baseline, Audit)]) -> Outcome {
    for (bl, a) in audits {
        ensure(a.e_mm1 >= a.e_mm0 - a.h_wrong - 1e-9, || {
            format!("{bl}: E_MM1 {} < E_MM0 {} - H_wrong {}", a.e_mm1, a.e_mm0, a.h_wrong)
        })?;
        let bnp = (a.b * a.n) as f64 * a.p0;
        ensure(a.e_mu0 <= bnp + 1e-9, || format!("{bl}: E_MU0 {} > b n p0 {bnp}", a.e_mu0))?;
    }
    let summary: Vec<String> = audits
        .iter()
        .map(|(bl, a)| format!("{bl} p0={:.4} p1={:.4}", a.p0, a.p1))
        .collect();
    Ok(format!("0 violations [{}]", summary.join(", ")))
}

fn criterion_4() -> Outcome {
    let g = Arc::new(fixtures::heawood());
    let girth = roundelim::graph::compute_girth(&g).finite();
    ensure(girth == Some(6), || format!("fixture girth {girth:?}"))?;
    let mut views = 0;
    let mut min_margin = f64::INFINITY;
    for bl in Baseline::ALL {
        let p = Arc::new(Profiler::new(g.clone(), bl.build(1, 1), exact_setup(0)).unwrap());
        for row in per_node_mu_check(&p).map_err(|e| e.to_string())? {
            ensure(row.violations == 0, || format!("{bl}: node {} violates", row.node))?;
            views += row.views;
            min_margin = min_margin.min(row.min_margin);
        }
    }
    Ok(format!("Heawood T=1, 4 baselines, {views} (node, view) pairs, min margin {min_margin:.4}"))
}

fn criterion_5() -> Outcome {
    let delta = 10;
    let mut lines = Vec::new();
    for b in 1..=5 {
        let game = ZeroRoundGame { delta, b, n: 22, trials: 100_000, seed: 50 + b as u64 };
        let mut row = Vec::new();
        for s in ZeroRoundStrategy::zoo() {
            let est = zero_round_badness(&s, &game).map_err(|e| e.to_string())?;
            ensure(est.mean >= 0.5 - 0.01, || format!("b={b} {}: {}", s.name(), est.mean))?;
            if s == ZeroRoundStrategy::Uniform {
                let want = (delta - b) as f64 / delta as f64;
                ensure((est.mean - want).abs() <= 0.01, || {
                    format!("b={b} uniform: {} vs {want}", est.mean)
                })?;
            }
            row.push(format!("{:.3}", est.mean));
        }
        lines.push(format!("b={b}: {}", row.join("/")));
    }
    Ok(format!("4 strategies x 1e5 trials; {}", lines.join("; ")))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    let mut worst_slack = f64::INFINITY;
    for i in 0..20u64 {
        let (n, delta) = [(20, 3), (24, 4), (30, 5), (36, 6), (40, 4)][i as usize % 5];
        let g = generate_regular_graph(n, delta, 600 + i, 1000).map_err(|e| e.to_string())?;
        let alpha = max_independent_set(&g).ok_or("alpha unavailable")?.len();
        for b in 1..=delta / 2 {
            let claims = greedy_maximal_b_matching(&g, b, i);
            let verdict = verify_maximal_b_matching(&g, &claims, b);
            ensure(verdict.ok, || format!("graph {i}: greedy matching invalid"))?;
            let unsat = unsaturated_nodes(&verdict, b);
            let deg = induced_max_degree(&g, &unsat);
            ensure(deg < b, || format!("graph {i} b={b}: unsaturated degree {deg}"))?;
            let table: Vec<Vec<Label>> =
                claims.into_iter().map(|c| labels_from_ports(delta, c)).collect();
            let alg = matching_to_grabbing(&table_rule("greedy", AlgorithmKind::Matching { b }, table));
            let cfg = InputConfig::default().with_port_mode(PortMode::Fixed);
            let lab = run_algorithm(&g, &assign_inputs(&g, i, &cfg), &alg).map_err(|e| e.to_string())?;
            ensure(verify_b_grabbing(&lab, b).is_ok(), || format!("graph {i}: grabbing invalid"))?;
            let p = score_grabbing(&g, &lab, b).p;
            let bound = (b * alpha) as f64 / n as f64;
            ensure(p <= bound + 1e-12, || format!("graph {i} b={b}: p {p} > {bound}"))?;
            worst_slack = worst_slack.min(bound - p);
            checked += 1;
        }
    }
    Ok(format!("20 graphs, {checked} (graph, b) cases, min slack {worst_slack:.4}"))
}

/// Proper colouring of the 4x4 torus with `4 + k` colours: horizontal edges
/// by column parity, vertical by row parity plus 2; for k >= 1 the even
/// horizontal class in rows 0 and 1 moves to colour 4, for k = 2 the first
/// vertical class in columns 0 and 1 moves to colour 5.
fn torus_coloring(g: &PortedGraph, k: usize) -> Vec<Vec<Label>> {
    let mut t = vec![vec![Label::U; 4]; g.n()];
    for e in g.edges() {
        let (ru, cu, rw, cw) = (e.u / 4, e.u % 4, e.w / 4, e.w % 4);
        let c = if ru == rw {
            let left = if (cu + 1) % 4 == cw { cu } else { cw };
            if left % 2 == 0 && ru < 2 && k >= 1 {
                4
            } else {
                (left % 2) as u32
            }
        } else {
            let top = if (ru + 1) % 4 == rw { ru } else { rw };
            if top % 2 == 0 && cu < 2 && k >= 2 {
                5
            } else {
                2 + (top % 2) as u32
            }
        };
        t[e.u][e.pu] = Label::Color(c);
        t[e.w][e.pw] = Label::Color(c);
    }
    t
}

fn criterion_7() -> Outcome {
    let g = fixtures::torus(4, 4);
    let setup = exact_setup(0);
    let mut report = Vec::new();
    for k in 0..=2usize {
        let palette = 4 + k;
        let table = torus_coloring(&g, k);
        verify_edge_coloring(&g, &HalfEdgeLabeling { labels: table.clone() }, palette)
            .map_err(|e| format!("k={k}: colouring not proper: {e:?}"))?;
        let used: std::collections::HashSet<_> = table.iter().flatten().collect();
        ensure(used.len() == palette, || format!("k={k}: {} colours used", used.len()))?;
        let grab = coloring_to_grabbing(&table_rule("torus", AlgorithmKind::EdgeColoring { palette }, table));
        // Expectation over the colour class chi (uniform over the palette)
        // and, exactly, over all ids and private bits.
        let mut total = 0.0;
        for chi in 0..palette as u64 {
            let inner = grab.clone();
            let fixed = AlgorithmDescriptor::new("fixed-chi", 0, AlgorithmKind::Grabbing { b: 1 }, move |view| {
                let mut v = view.clone();
                v.shared = BitString::new(chi, 8);
                inner.evaluate(&v)
            });
            total += exact_expected_badness(&g, &fixed, &setup).map_err(|e| e.to_string())?;
        }
        let p = total / palette as f64;
        let bound = k as f64 / palette as f64;
        ensure(p <= bound + 1e-12, || format!("k={k}: badness {p} > {bound}"))?;
        if k == 0 {
            ensure(p.abs() <= 1e-12, || format!("k=0: badness {p}, expected 0"))?;
        }
        report.push(format!("k={k}: {p:.4} <= {bound:.4}"));
    }
    Ok(report.join("; "))
}

fn criterion_8() -> Outcome {
    let mut r = rng::stream(8, 0);
    let mut worst = 0.0f64;
    for delta in 1..=12 {
        for _ in 0..5 {
            let y: Vec<f64> = (0..delta).map(|_| r.gen()).collect();
            let (dp, bf) = (poisson_binomial_pmf(&y), brute_force_pmf(&y));
            for k in 0..=delta {
                worst = worst.max((dp[k] - bf[k]).abs());
            }
        }
    }
    ensure(worst <= 1e-10, || format!("DP vs brute force gap {worst}"))?;
    let mut summary = Vec::new();
    for b in [1, 2, 4] {
        let rep = search_deviation(16, b, 10_000, 80 + b as u64).map_err(|e| e.to_string())?;
        ensure(rep.hypothesis_true == 10_000, || format!("b={b}: only {} hypothesis cases", rep.hypothesis_true))?;
        ensure(rep.violations == 0, || format!("b={b}: {} violations", rep.violations))?;
        summary.push(format!("b={b} min margin {:.2e}", rep.min_margin));
    }
    Ok(format!("DP gap {worst:.1e}; 3 x 1e4 hypothesis pairs, 0 violations ({})", summary.join(", ")))
}

fn criterion_9() -> Outcome {
    let rep = search_min_sum(32, 100_000, 9).map_err(|e| e.to_string())?;
    ensure(rep.violations == 0, || format!("{} violations", rep.violations))?;
    Ok(format!("1e5 vectors, 0 violations, min slack {:.2e}", rep.min_margin))
}

fn criterion_10() -> Outcome {
    // Hand-checked instances first.
    ensure(check_khintchine(&[1.0]).unwrap().conclusion, || "x=(1)".into())?;
    ensure(check_khintchine(&[1.0, 1.0]).unwrap().conclusion, || "x=(1,1)".into())?;
    let pz = check_paley_zygmund(&[(0.0, 0.5), (2.0, 0.5)], 0.5).unwrap();
    ensure((pz.lhs, pz.rhs) == (0.5, 0.125), || format!("two-point PZ {pz:?}"))?;
    let x = ProbVector::tagged(vec![0.5, 0.5], 1).unwrap();
    let [main, step] = check_b1_lemma(&x, &ProbVector::new(vec![0.5, 0.5]).unwrap());
    ensure(main.lhs == 0.5 && step.lhs == 0.25, || "b=1 two-point".into())?;

    let kh = search_khintchine(16, 1000, 10).map_err(|e| e.to_string())?;
    let pz = search_paley_zygmund(1000, 10).map_err(|e| e.to_string())?;
    let b1 = search_b1(16, 10_000, 10).map_err(|e| e.to_string())?;
    for rep in [&kh, &pz, &b1] {
        ensure(rep.violations == 0, || format!("{}: {} violations", rep.check, rep.violations))?;
    }
    ensure(b1.hypothesis_true == 20_000, || "b1 search short of cases".into())?;
    Ok(format!(
        "khintchine {} cases, paley-zygmund {} cases, b=1 lemma {} pairs (with step): 0 violations",
        kh.cases,
        pz.cases,
        b1.cases / 2
    ))
}

fn criterion_11() -> Outcome {
    // Golden edge conditions.
    let k4 = extract_ball(&fixtures::complete(4), 0, 1);
    ensure(k4.len() == 4 && k4.graph.edge_count() == 3, || "K4 r=1 is not a star".into())?;
    let c6 = extract_ball(&fixtures::cycle(6), 0, 2);
    ensure(c6.len() == 5 && c6.graph.edge_count() == 4, || "C6 r=2 is not a path".into())?;
    ensure(c6.graph.is_acyclic(), || "C6 r=2 has a cycle".into())?;

    // Ball -> tree -> ball.
    let mut round_trips = 0;
    for (g, r) in [(fixtures::heawood(), 2), (fixtures::petersen(), 1), (fixtures::cube(), 1)] {
        for v in 0..g.n() {
            let ball = extract_ball(&g, v, r);
            let tree = extend_ball_to_tree(&ball, ball.len() + 12, g.delta()).map_err(|e| e.to_string())?;
            ensure(tree.is_acyclic(), || "extension has a cycle".into())?;
            let back = extract_ball(&tree, 0, r);
            ensure(back.isomorphic(&ball), || format!("round trip failed at {v}"))?;
            round_trips += 1;
        }
    }

    // Locality: inputs outside the radius-T ball never move the output.
    let g = generate_regular_graph(30, 4, 11, 1000).map_err(|e| e.to_string())?;
    let cfg = InputConfig::default().with_port_mode(PortMode::Fixed);
    let mut perturbations = 0;
    let mut algs: Vec<AlgorithmDescriptor> = Baseline::ALL.iter().map(|b| b.build(2, 2)).collect();
    let small = Arc::new(fixtures::cube());
    let derived = Arc::new(Profiler::new(small.clone(), Baseline::Proposal.build(1, 2), exact_setup(0)).unwrap()).derived();
    for trial in 0..10u64 {
        for alg in &algs {
            let x = assign_inputs(&g, trial, &cfg);
            let base = run_algorithm(&g, &x, alg).map_err(|e| e.to_string())?;
            let v = trial as usize % g.n();
            let dist = g.distances(v);
            let mut y = assign_inputs(&g, trial + 1000, &cfg);
            for u in 0..g.n() {
                if dist[u] <= alg.radius {
                    y.nodes[u] = x.nodes[u].clone();
                }
            }
            y.shared = x.shared;
            let moved = run_algorithm(&g, &y, alg).map_err(|e| e.to_string())?;
            ensure(moved.labels[v] == base.labels[v], || format!("{} at {v} not local", alg.name))?;
            perturbations += 1;
        }
        // The derived rule on its own fixture.
        let cfg0 = exact_setup(0).inputs;
        let x = assign_inputs(&small, trial, &cfg0);
        let base = run_algorithm(&small, &x, &derived).map_err(|e| e.to_string())?;
        let v = trial as usize % small.n();
        let dist = small.distances(v);
        let mut y = assign_inputs(&small, trial + 1000, &cfg0);
        for u in 0..small.n() {
            if dist[u] <= derived.radius {
                y.nodes[u] = x.nodes[u].clone();
            }
        }
        let moved = run_algorithm(&small, &y, &derived).map_err(|e| e.to_string())?;
        ensure(moved.labels[v] == base.labels[v], || format!("derived rule at {v} not local"))?;
        perturbations += 1;
    }
    algs.clear();
    Ok(format!("golden balls ok, {round_trips} round trips, {perturbations} perturbations unchanged"))
}

fn criterion_12() -> Outcome {
    let values: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&d| {
            let df = d as f64;
            round_bound(df.ln() / df, 1, d, df.powi(64), 0.25, 2.0)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(values.windows(2).all(|w| w[1] > w[0]), || format!("not increasing: {values:?}"))?;
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.3}")).collect();
    Ok(format!("T over delta 8/16/32/64 = {}", shown.join(" < ")))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: usize, name: &str, limit: u64, elapsed: Duration, outcome: Outcome| {
        let over = elapsed > Duration::from_secs(limit);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded {limit} s")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} criterion {id:>2} [{name}] ({:.2} s / {limit} s): {detail}",
            elapsed.as_secs_f64()
        );
    };
    fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
        let t = Instant::now();
        let out = f();
        (out, t.elapsed())
    }

    let (o, t) = timed(criterion_1);
    report(1, "S(v) = b", 10, t, o);
    let (audits, t_audit) = timed(cube_audits);
    match audits {
        Ok(audits) => {
            let (o, t) = timed(|| criterion_2(&audits));
            report(2, "H_wrong = sum S_rest", 60, t_audit + t, o);
            let (o, t) = timed(|| criterion_3(&audits));
            report(3, "MM chain", 60, t_audit + t, o);
        }
        Err(e) => {
            report(2, "H_wrong = sum S_rest", 60, t_audit, Err(e.clone()));
            report(3, "MM chain", 60, t_audit, Err(e));
        }
    }
    let (o, t) = timed(criterion_4);
    report(4, "per-node E_MU", 120, t, o);
    let (o, t) = timed(criterion_5);
    report(5, "zero-round bound", 60, t, o);
    let (o, t) = timed(criterion_6);
    report(6, "matching reduction", 120, t, o);
    let (o, t) = timed(criterion_7);
    report(7, "colouring reduction", 10, t, o);
    let (o, t) = timed(criterion_8);
    report(8, "deviation lemma", 120, t, o);
    let (o, t) = timed(criterion_9);
    report(9, "min-sum bound", 30, t, o);
    let (o, t) = timed(criterion_10);
    report(10, "khintchine / paley-zygmund / b=1", 60, t, o);
    let (o, t) = timed(criterion_11);
    report(11, "view machinery", 10, t, o);
    let (o, t) = timed(criterion_12);
    report(12, "round_bound growth", 1, t, o);

    if failures == 0 {
        println!("acceptance: 12/12 PASS");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} FAIL");
        ExitCode::FAILURE
    }
}
