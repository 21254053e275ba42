use std::sync::Arc;

use super::*;
use crate::baselines::{constant_grab, parity_grab, proposal_grab, uniform_grab};
use crate::graph::{fixtures, Ball, PortedGraph};
use crate::local::{labels_from_ports, run_algorithm, BitString, InputConfig, Inputs};
use crate::problems::verify_b_grabbing;

fn tiny(bits: u32, shared: u32) -> InputConfig {
    InputConfig::exact().with_bits(bits, shared)
}

/// Grabs the port named by the first bit of the neighbour on port 0.
fn neighbour_coin() -> AlgorithmDescriptor {
    AlgorithmDescriptor::new("coin", 1, AlgorithmKind::Grabbing { b: 1 }, |view| {
        let g = &view.ball.graph;
        let far = g.port(Ball::CENTER, 0).unwrap().node;
        let p = view.inputs[far].private_bits.bit(0) as usize;
        labels_from_ports(view.ports(), [p])
    })
}

#[test]
fn preferred_direction_examples() {
    assert_eq!(preferred_directions(&[0.5, 0.5, 0.0], 1), vec![0]);
    assert_eq!(preferred_directions(&[0.0, 1.0, 0.0], 1), vec![1]);
    assert_eq!(preferred_directions(&[0.3, 0.3, 0.3, 0.1], 2), vec![0, 1]);
    assert_eq!(preferred_directions(&[0.1, 0.3, 0.3, 0.3], 2), vec![1, 2]);
}

#[test]
fn deterministic_rule_has_zero_one_profile() {
    let g = fixtures::cube();
    let setup = ProfileSetup::exact(tiny(1, 1));
    let base = crate::local::assign_inputs(&g, 0, &setup.inputs);
    let st = estimate_direction_profile(&g, &base, 3, &constant_grab(1, 1), &setup).unwrap();
    assert_eq!(st.x, vec![1.0, 0.0, 0.0]);
    assert_eq!((st.s, st.s_rest), (1.0, 0.0));
    assert_eq!(st.preferred, vec![0]);
}

/// Star with three leaves; the centre's profile under the parity rule is
/// checked against frequencies over the full probability space.
#[test]
fn parity_profile_matches_full_enumeration() {
    let g = fixtures::star(3);
    let setup = ProfileSetup::exact(tiny(1, 0));
    let space = InputSpace::new(g.n(), &setup.inputs);
    let alg = parity_grab(1, 1);
    let k = space.states();
    // counts[centre state][port]
    let mut counts = vec![vec![0u64; 3]; k as usize];
    let mut totals = vec![0u64; k as usize];
    for code in 0..k.pow(4) {
        let nodes = (0..4).map(|j| space.decode(code / k.pow(j) % k)).collect();
        let x = Inputs {
            nodes,
            shared: BitString::default(),
        };
        let lab = run_algorithm(&g, &x, &alg).unwrap();
        let c = (code % k) as usize;
        totals[c] += 1;
        for p in lab.port_sets()[0].iter() {
            counts[c][*p] += 1;
        }
    }
    for c in 0..k {
        let base = Inputs {
            nodes: (0..4).map(|_| space.decode(c)).collect(),
            shared: BitString::default(),
        };
        let st = estimate_direction_profile(&g, &base, 0, &alg, &setup).unwrap();
        for p in 0..3 {
            let want = counts[c as usize][p] as f64 / totals[c as usize] as f64;
            assert!((st.x[p] - want).abs() < 1e-12, "state {c} port {p}");
        }
        assert!((st.s - 1.0).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_agrees_with_exact() {
    let g = fixtures::cube();
    let cfg = tiny(1, 0);
    let base = crate::local::assign_inputs(&g, 5, &ProfileSetup::exact(cfg).inputs);
    let alg = proposal_grab(1, 1);
    let exact = estimate_direction_profile(&g, &base, 2, &alg, &ProfileSetup::exact(cfg)).unwrap();
    let mc = estimate_direction_profile(&g, &base, 2, &alg, &ProfileSetup::monte_carlo(cfg, 10_000, 9))
        .unwrap();
    let se = mc.stderr.as_ref().unwrap();
    for i in 0..3 {
        let tol = 4.0 * se[i] + 1e-12;
        assert!((mc.x[i] - exact.x[i]).abs() <= tol, "{:?} vs {:?}", mc.x, exact.x);
    }
}

#[test]
fn budget_is_enforced() {
    let g = fixtures::cube();
    let setup = ProfileSetup::exact(tiny(4, 0));
    // 3 frontier nodes x (4 + 3) bits = 21 fits; radius 2 has 3 x 7 too, but
    // the cap can be lowered.
    let mut low = setup;
    low.cap = 20;
    let err = derive_one_round_faster(Arc::new(g), &proposal_grab(1, 1), &low).unwrap_err();
    assert_eq!(err, Error::BudgetTooLarge { needed: 21, cap: 20 });
}

#[test]
fn deterministic_rule_derives_to_itself() {
    let g = Arc::new(fixtures::petersen());
    let setup = ProfileSetup::exact(tiny(1, 0));
    let a1 = derive_one_round_faster(g.clone(), &constant_grab(2, 1), &setup).unwrap();
    assert_eq!(a1.radius, 0);
    let x = crate::local::assign_inputs(&g, 1, &setup.inputs);
    let lab = run_algorithm(&g, &x, &a1).unwrap();
    assert!(lab.port_sets().iter().all(|s| s == &vec![0, 1]));
}

#[test]
fn view_independent_coin_derives_to_port_zero() {
    let g = Arc::new(fixtures::cycle(6));
    let setup = ProfileSetup::exact(tiny(1, 0));
    let profiler = Arc::new(Profiler::new(g.clone(), neighbour_coin(), setup).unwrap());
    let x = crate::local::assign_inputs(&g, 2, &setup.inputs);
    for v in 0..6 {
        let st = profiler.profile(&extract_view(&g, &x, v, 0));
        assert_eq!(st.x, vec![0.5, 0.5]);
        assert_eq!(st.preferred, vec![0]);
    }
}

#[test]
fn deriving_twice_reaches_radius_zero() {
    let g = Arc::new(fixtures::cycle(6));
    let setup = ProfileSetup::exact(tiny(1, 0));
    let a1 = derive_one_round_faster(g.clone(), &proposal_grab(1, 2), &setup).unwrap();
    let a2 = derive_one_round_faster(g.clone(), &a1, &setup).unwrap();
    assert_eq!((a1.radius, a2.radius), (1, 0));
    let x = crate::local::assign_inputs(&g, 0, &setup.inputs);
    assert_eq!(verify_b_grabbing(&run_algorithm(&g, &x, &a2).unwrap(), 1), Ok(()));
    assert!(derive_one_round_faster(g, &a2, &setup).is_err());
}

#[test]
fn isomorphic_views_get_identical_outputs() {
    let g = Arc::new(fixtures::oriented_cycle(8));
    let setup = ProfileSetup::exact(tiny(1, 0));
    let a1 = derive_one_round_faster(g.clone(), &proposal_grab(1, 2), &setup).unwrap();
    let mut x = crate::local::assign_inputs(&g, 4, &setup.inputs);
    for d in [7, 0, 1] {
        x.nodes[(d + 4) % 8] = x.nodes[d].clone();
    }
    let lab = run_algorithm(&g, &x, &a1).unwrap();
    assert_eq!(lab.labels[0], lab.labels[4]);
}

#[test]
fn audit_of_deterministic_rule_is_trivial() {
    let g = Arc::new(fixtures::cycle(6));
    let setup = ProfileSetup::exact(tiny(1, 1));
    let p = Arc::new(Profiler::new(g, constant_grab(1, 1), setup).unwrap());
    let a = wrong_half_edge_audit(&p).unwrap();
    assert_eq!((a.h_wrong, a.sum_s_rest), (0.0, 0.0));
    assert!(a.checks.s_check && a.checks.h_wrong_eq && a.checks.mm_chain);
}

#[test]
fn audit_identities_on_six_cycle() {
    let g = Arc::new(fixtures::cycle(6));
    let setup = ProfileSetup::exact(tiny(1, 1));
    for alg in [proposal_grab(1, 1), neighbour_coin(), parity_grab(1, 1)] {
        let p = Arc::new(Profiler::new(g.clone(), alg.clone(), setup).unwrap());
        let a = wrong_half_edge_audit(&p).unwrap();
        assert!(a.checks.s_check && a.checks.h_wrong_eq && a.checks.mm_chain, "{}: {a:?}", alg.name);
        assert!((a.e_mu0 - (6.0 - 2.0 * a.e_mm0)).abs() < 1e-9);
    }
    let p = Arc::new(Profiler::new(g.clone(), neighbour_coin(), setup).unwrap());
    assert!(wrong_half_edge_audit(&p).unwrap().h_wrong > 0.0);
}

#[test]
fn exact_expectations_match_brute_force() {
    // C4 with R = 1: 4 nodes x 8 states, small enough to run every input.
    let g = fixtures::cycle(4);
    let setup = ProfileSetup::exact(tiny(1, 0));
    let space = InputSpace::new(4, &setup.inputs);
    let alg = proposal_grab(1, 1);
    let k = space.states();
    let mut total_p = 0.0;
    for code in 0..k.pow(4) {
        let x = Inputs {
            nodes: (0..4).map(|j| space.decode(code / k.pow(j) % k)).collect(),
            shared: BitString::default(),
        };
        let lab = run_algorithm(&g, &x, &alg).unwrap();
        total_p += crate::problems::score_grabbing(&g, &lab, 1).p;
    }
    let want = total_p / k.pow(4) as f64;
    let got = exact_expected_badness(&g, &alg, &setup).unwrap();
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
}

#[test]
fn per_node_bound_on_six_cycle() {
    let g = Arc::new(fixtures::cycle(6));
    let setup = ProfileSetup::exact(tiny(1, 0));
    let p = Arc::new(Profiler::new(g, neighbour_coin(), setup).unwrap());
    let rows = per_node_mu_check(&p).unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        assert_eq!(r.violations, 0);
        assert_eq!(r.views, 12);
        assert!(r.max_s_rest > 0.0);
    }
}

#[test]
fn measure_badness_examples() {
    let g = fixtures::complete(4);
    let cfg = InputConfig::default();
    let det = measure_badness(&g, &cfg.with_port_mode(PortMode::Fixed), &constant_grab(1, 0), 5, 0)
        .unwrap();
    assert_eq!(det.ci_low, det.ci_high);
    let est = measure_badness(&g, &cfg, &uniform_grab(1, 0), 4000, 1).unwrap();
    assert!((est.mean - 2.0 / 3.0).abs() < 0.02, "{est:?}");

    let c6 = fixtures::cycle(6);
    let setup = ProfileSetup::exact(tiny(1, 0));
    let exact = exact_expected_badness(&c6, &proposal_grab(1, 1), &setup).unwrap();
    let mc = measure_badness(&c6, &setup.inputs, &proposal_grab(1, 1), 4000, 2).unwrap();
    assert!(mc.ci_low <= exact && exact <= mc.ci_high, "{exact} not in {mc:?}");
}

#[test]
fn trajectories() {
    let g = Arc::new(fixtures::cube());
    let setup = ProfileSetup::monte_carlo(tiny(1, 0), 64, 3);
    let zero = iterate_self_reduction(g.clone(), &uniform_grab(1, 0), &setup, 3, 0, 2.0).unwrap();
    assert_eq!(zero.len(), 1);
    let rows = iterate_self_reduction(g.clone(), &proposal_grab(1, 2), &setup, 3, 0, 2.0).unwrap();
    assert_eq!(rows.iter().map(|r| r.radius).collect::<Vec<_>>(), vec![2, 1, 0]);
    assert!(rows.iter().all(|r| r.badness_mean.is_finite()));
    let csv = trajectory_csv(&rows);
    assert!(csv.starts_with("stage,radius,badness_mean,badness_ci_low,badness_ci_high,envelope\n"));
    assert_eq!(csv.lines().count(), 4);

    let det = iterate_self_reduction(g, &constant_grab(1, 1), &ProfileSetup::exact(tiny(1, 0)), 3, 0, 2.0)
        .unwrap();
    assert_eq!(det[0].badness_mean, det[1].badness_mean);
}

#[test]
fn round_bound_examples() {
    assert!(matches!(round_bound(0.5, 1, 8, 1e6, 0.25, 2.0), Err(Error::Domain(_))));
    let (c, b) = (2.0f64, 4usize);
    let p = 1.0 / (2.0 * (c * (b as f64).sqrt()).powi(5));
    let t = round_bound(p, b, 8, 8f64.powi(100), 0.25, c).unwrap();
    assert!((t - 5.0).abs() < 1e-9);
    let series: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&d| {
            let d_f = d as f64;
            round_bound(d_f.ln() / d_f, 1, d, d_f.powi(64), 0.25, 2.0).unwrap()
        })
        .collect();
    assert!(series.windows(2).all(|w| w[1] > w[0]), "{series:?}");
}

#[test]
fn profile_needs_positive_radius_and_grabbing() {
    let g = Arc::new(PortedGraph::clone(&fixtures::cube()));
    let setup = ProfileSetup::exact(tiny(1, 0));
    assert!(Profiler::new(g.clone(), uniform_grab(1, 0), setup).is_err());
    let m = crate::baselines::proposal_matching(1, 1);
    assert!(Profiler::new(g, m, setup).is_err());
}
