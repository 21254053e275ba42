//! Exact checks of the probabilistic inequalities used by the self-reduction,
//! plus randomized counterexample searches that evaluate each candidate
//! exactly.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::generate_regular_graph;
use crate::par_map;
use crate::rng;
use crate::selfred::BadnessEstimate;

/// Tolerance for comparing exactly evaluated floating-point quantities.
pub const TOL: f64 = 1e-10;
/// Tolerance of the "sums to b" tag.
pub const TAG_TOL: f64 = 1e-12;
pub const KHINTCHINE_MAX: usize = 20;

/// Entries in `[0, 1]`, optionally tagged as summing to `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbVector {
    pub entries: Vec<f64>,
    pub sums_to: Option<usize>,
}

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::InvalidParameters(format!("probability {bad} outside [0, 1]")));
        }
        Ok(Self {
            entries,
            sums_to: None,
        })
    }

    pub fn tagged(entries: Vec<f64>, b: usize) -> Result<Self> {
        let mut v = Self::new(entries)?;
        let s: f64 = v.entries.iter().sum();
        if (s - b as f64).abs() > TAG_TOL {
            return Err(Error::InvalidParameters(format!("entries sum to {s}, not {b}")));
        }
        v.sums_to = Some(b);
        Ok(v)
    }
}

/// Distribution of the number of independent events that occur.
pub fn poisson_binomial_pmf(y: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; y.len() + 1];
    pmf[0] = 1.0;
    for (i, &p) in y.iter().enumerate() {
        for k in (0..=i + 1).rev() {
            let stay = pmf[k] * (1.0 - p);
            let step = if k > 0 { pmf[k - 1] * p } else { 0.0 };
            pmf[k] = stay + step;
        }
    }
    pmf
}

/// The same distribution by summing over all `2^len` outcomes.
pub fn brute_force_pmf(y: &[f64]) -> Vec<f64> {
    assert!(y.len() <= 24, "brute force over more than 2^24 outcomes");
    let mut pmf = vec![0.0; y.len() + 1];
    for mask in 0u32..(1 << y.len()) {
        let mut pr = 1.0;
        for (i, &p) in y.iter().enumerate() {
            pr *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        pmf[mask.count_ones() as usize] += pr;
    }
    pmf
}

/// `E|b - Y|` for `Y` Poisson-binomial with parameters `y`.
pub fn expected_abs_dev(y: &[f64], b: usize) -> f64 {
    poisson_binomial_pmf(y)
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - b as f64).abs() * p)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SQuantities {
    pub s: f64,
    /// Sum of the `b` largest entries.
    pub s_b: f64,
    pub s_rest: f64,
}

pub fn s_quantities(x: &[f64], b: usize) -> SQuantities {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, c| c.total_cmp(a));
    let s: f64 = x.iter().sum();
    let s_b: f64 = sorted.iter().take(b).sum();
    // Summing the tail directly avoids cancellation in `s - s_b`.
    let s_rest = sorted.iter().skip(b).sum();
    SQuantities { s, s_b, s_rest }
}

/// One exactly evaluated instance of an implication `hypothesis => lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub params_digest: String,
    pub hypothesis: bool,
    pub conclusion: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub seed: Option<u64>,
}

impl Verdict {
    fn new(check: &str, params: &[f64], hypothesis: bool, lhs: f64, rhs: f64) -> Self {
        let words: Vec<u64> = params.iter().map(|x| x.to_bits()).collect();
        Self {
            check: check.into(),
            params_digest: format!("{:016x}", rng::mix_all(&words)),
            hypothesis,
            conclusion: lhs >= rhs - TOL,
            lhs,
            rhs,
            margin: lhs - rhs,
            seed: None,
        }
    }

    /// The hypothesis holds and the conclusion fails.
    pub fn violated(&self) -> bool {
        self.hypothesis && !self.conclusion
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

fn l1(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, c)| (a - c).abs()).sum()
}

fn digest_params(x: &[f64], y: &[f64], b: usize) -> Vec<f64> {
    let mut p = vec![b as f64];
    p.extend_from_slice(x);
    p.extend_from_slice(y);
    p
}

/// `sum |x_i - y_i| < S_rest / (1000 sqrt b)` implies
/// `E|b - Y| >= S_rest / (1000 sqrt b)`.
pub fn check_deviation_lemma(x: &ProbVector, y: &ProbVector, b: usize) -> Verdict {
    assert_eq!(x.sums_to, Some(b), "x must be tagged as summing to b");
    let threshold = s_quantities(&x.entries, b).s_rest / (1000.0 * (b as f64).sqrt());
    let hypothesis = l1(&x.entries, &y.entries) < threshold;
    Verdict::new(
        "deviation",
        &digest_params(&x.entries, &y.entries, b),
        hypothesis,
        expected_abs_dev(&y.entries, b),
        threshold,
    )
}

/// `sum min(x_i, 1 - x_i) >= S_rest`.
pub fn check_min_sum_bound(x: &ProbVector, b: usize) -> Verdict {
    assert_eq!(x.sums_to, Some(b), "x must be tagged as summing to b");
    let lhs = x.entries.iter().map(|&p| p.min(1.0 - p)).sum();
    let rhs = s_quantities(&x.entries, b).s_rest;
    Verdict::new("min_sum", &digest_params(&x.entries, &[], b), true, lhs, rhs)
}

/// `E|sum x_i eps_i|` over all sign vectors.
pub fn rademacher_abs_mean(x: &[f64]) -> Result<f64> {
    if x.len() > KHINTCHINE_MAX {
        return Err(Error::SizeTooLarge {
            len: x.len(),
            limit: KHINTCHINE_MAX,
        });
    }
    let total: f64 = (0u32..1 << x.len())
        .map(|mask| {
            x.iter()
                .enumerate()
                .map(|(i, &a)| if mask >> i & 1 == 1 { a } else { -a })
                .sum::<f64>()
                .abs()
        })
        .sum();
    Ok(total / (1u64 << x.len()) as f64)
}

/// `||x|| / sqrt 2 <= E|sum x_i eps_i| <= ||x||`. `lhs`/`rhs` report the
/// tighter of the two sides as `slack >= 0`.
pub fn check_khintchine(x: &[f64]) -> Result<Verdict> {
    let e = rademacher_abs_mean(x)?;
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let lower = e - norm / 2f64.sqrt();
    let upper = norm - e;
    Ok(Verdict::new("khintchine", x, true, lower.min(upper), 0.0))
}

/// `Pr[Z >= lambda E Z] >= (1 - lambda)^2 E[Z]^2 / E[Z^2]` for a finite
/// pmf given as `(value, probability)` pairs with nonnegative values.
pub fn check_paley_zygmund(pmf: &[(f64, f64)], lambda: f64) -> Result<Verdict> {
    if pmf.iter().any(|&(z, p)| z < 0.0 || !(0.0..=1.0).contains(&p)) || !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameters(
            "need nonnegative values, probabilities and lambda in [0, 1]".into(),
        ));
    }
    let m1: f64 = pmf.iter().map(|&(z, p)| z * p).sum();
    let m2: f64 = pmf.iter().map(|&(z, p)| z * z * p).sum();
    let lhs = pmf
        .iter()
        .filter(|&&(z, _)| z >= lambda * m1)
        .map(|&(_, p)| p)
        .sum();
    let rhs = if m2 > 0.0 {
        (1.0 - lambda).powi(2) * m1 * m1 / m2
    } else {
        0.0
    };
    let mut params: Vec<f64> = pmf.iter().flat_map(|&(z, p)| [z, p]).collect();
    params.push(lambda);
    Ok(Verdict::new("paley_zygmund", &params, true, lhs, rhs))
}

/// The `b = 1` lemma with `M = 1 - max x`: `sum |x - y| < M/1000` implies
/// `E|Y - 1| >= M/1000`. The second verdict is the intermediate step
/// `Pr[Y >= 2] >= M/1000` under the same hypothesis.
pub fn check_b1_lemma(x: &ProbVector, y: &ProbVector) -> [Verdict; 2] {
    assert_eq!(x.sums_to, Some(1), "x must be tagged as summing to 1");
    let m = 1.0 - x.entries.iter().copied().fold(0.0, f64::max);
    let threshold = m / 1000.0;
    let hypothesis = l1(&x.entries, &y.entries) < threshold;
    let pmf = poisson_binomial_pmf(&y.entries);
    let dev = pmf
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - 1.0).abs() * p)
        .sum();
    let at_least_two = pmf.iter().skip(2).sum();
    let params = digest_params(&x.entries, &y.entries, 1);
    [
        Verdict::new("b1_lemma", &params, hypothesis, dev, threshold),
        Verdict::new("b1_lemma_step", &params, hypothesis, at_least_two, threshold),
    ]
}

// Generators -------------------------------------------------------------

/// Scales nonnegative weights into `[0, 1]` entries summing to `b`, capping
/// at 1 and redistributing (water filling). Needs `b <= ` number of
/// positive weights.
pub fn water_fill(w: &[f64], b: usize) -> Vec<f64> {
    let positive = w.iter().filter(|&&a| a > 0.0).count();
    assert!(b <= positive, "not enough positive weights to reach {b}");
    let target = b as f64;
    let fill = |t: f64| -> Vec<f64> { w.iter().map(|&a| (a * t).min(1.0)).collect() };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while fill(hi).iter().sum::<f64>() < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fill(mid).iter().sum::<f64>() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = fill(hi);
    // Push the rounding residue into entries that have room.
    for _ in 0..4 {
        let residue = target - x.iter().sum::<f64>();
        if residue == 0.0 {
            break;
        }
        if let Some(i) = (0..x.len()).find(|&i| {
            let next = x[i] + residue;
            x[i] > 0.0 && x[i] < 1.0 && (0.0..=1.0).contains(&next)
        }) {
            x[i] += residue;
        }
    }
    x
}

/// A random vector of `delta` entries in `[0, 1]` summing to `b`, drawn from
/// a mix of spread-out, sparse and nearly deterministic families.
pub fn random_tagged(r: &mut ChaCha8Rng, delta: usize, b: usize) -> ProbVector {
    assert!(b <= delta);
    let x = match r.gen_range(0..3) {
        0 => {
            let w: Vec<f64> = (0..delta).map(|_| r.gen::<f64>() + 1e-9).collect();
            water_fill(&w, b)
        }
        1 => {
            let support = r.gen_range(b..=delta).max(1);
            let mut w = vec![0.0; delta];
            for i in index::sample(r, delta, support) {
                w[i] = r.gen::<f64>().powi(3) + 1e-9;
            }
            if b == 0 {
                vec![0.0; delta]
            } else {
                water_fill(&w, b)
            }
        }
        _ => {
            // b ones, then a small amount of mass moved elsewhere.
            let mut x = vec![0.0; delta];
            let ones = index::sample(r, delta, b).into_vec();
            for &i in &ones {
                x[i] = 1.0;
            }
            let others: Vec<usize> = (0..delta).filter(|i| !ones.contains(i)).collect();
            if !others.is_empty() && b > 0 {
                let eps = 10f64.powf(-r.gen_range(0.0..4.0)) * 0.5;
                let from = *ones.choose(r).unwrap();
                let to = *others.choose(r).unwrap();
                x[from] -= eps;
                x[to] += eps;
            }
            x
        }
    };
    let s: f64 = x.iter().sum();
    debug_assert!((s - b as f64).abs() <= TAG_TOL, "sum {s}");
    ProbVector {
        entries: x,
        sums_to: Some(b),
    }
}

/// `x` moved by a random perturbation of L1 size about `size`, clamped to
/// `[0, 1]`.
pub fn perturb(r: &mut ChaCha8Rng, x: &[f64], size: f64) -> ProbVector {
    let dir: Vec<f64> = x.iter().map(|_| r.gen::<f64>() * 2.0 - 1.0).collect();
    let norm: f64 = dir.iter().map(|d| d.abs()).sum::<f64>().max(1e-300);
    let entries = x
        .iter()
        .zip(&dir)
        .map(|(&a, &d)| (a + d / norm * size).clamp(0.0, 1.0))
        .collect();
    ProbVector {
        entries,
        sums_to: None,
    }
}

// Searches ---------------------------------------------------------------

/// Outcome of a randomized search; `verdicts` holds every evaluated case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub check: String,
    pub seed: u64,
    pub cases: usize,
    pub hypothesis_true: usize,
    pub violations: usize,
    pub min_margin: f64,
    #[serde(skip)]
    pub verdicts: Vec<Verdict>,
}

impl SearchReport {
    fn collect(check: &str, seed: u64, verdicts: Vec<Verdict>) -> Self {
        let with_hyp: Vec<&Verdict> = verdicts.iter().filter(|v| v.hypothesis).collect();
        Self {
            check: check.into(),
            seed,
            cases: verdicts.len(),
            hypothesis_true: with_hyp.len(),
            violations: verdicts.iter().filter(|v| v.violated()).count(),
            min_margin: with_hyp.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min),
            verdicts,
        }
    }

    /// One JSON object per line.
    pub fn jsonl(&self) -> String {
        self.verdicts
            .iter()
            .map(|v| serde_json::to_string(v).unwrap() + "\n")
            .collect()
    }
}

const SEARCH_ATTEMPTS: usize = 10_000;

/// Draws `(x, y)` pairs until the hypothesis `sum |x - y| < threshold(x)`
/// holds, with the perturbation size log-uniform around the threshold.
fn hypothesis_pair(
    r: &mut ChaCha8Rng,
    delta_range: (usize, usize),
    b: usize,
    threshold: impl Fn(&ProbVector) -> f64,
) -> (ProbVector, ProbVector) {
    for _ in 0..SEARCH_ATTEMPTS {
        let delta = r.gen_range(delta_range.0..=delta_range.1);
        let x = random_tagged(r, delta, b);
        let t = threshold(&x);
        if t <= 0.0 {
            continue;
        }
        let size = t * 10f64.powf(r.gen_range(-3.0..0.3));
        let y = perturb(r, &x.entries, size);
        if l1(&x.entries, &y.entries) < t {
            return (x, y);
        }
    }
    panic!("rejection sampling found no hypothesis-satisfying pair");
}

/// `cases` hypothesis-satisfying pairs with `b < delta <= delta_max`.
pub fn search_deviation(delta_max: usize, b: usize, cases: usize, seed: u64) -> Result<SearchReport> {
    if b == 0 || delta_max <= b {
        return Err(Error::InvalidParameters(format!("need 1 <= b < delta_max, got b={b}, delta_max={delta_max}")));
    }
    let verdicts = par_map(cases, |i| {
        let mut r = rng::stream2(seed, 0xde01, i as u64);
        let (x, y) = hypothesis_pair(&mut r, (b + 1, delta_max), b, |x| {
            s_quantities(&x.entries, b).s_rest / (1000.0 * (b as f64).sqrt())
        });
        check_deviation_lemma(&x, &y, b).with_seed(seed)
    });
    Ok(SearchReport::collect("deviation", seed, verdicts))
}

/// `cases` tagged vectors with `delta <= delta_max` and `1 <= b <= delta/2`.
pub fn search_min_sum(delta_max: usize, cases: usize, seed: u64) -> Result<SearchReport> {
    if delta_max < 2 {
        return Err(Error::InvalidParameters("need delta_max >= 2".into()));
    }
    let verdicts = par_map(cases, |i| {
        let mut r = rng::stream2(seed, 0x3153, i as u64);
        let delta = r.gen_range(2..=delta_max);
        let b = r.gen_range(1..=delta / 2);
        check_min_sum_bound(&random_tagged(&mut r, delta, b), b).with_seed(seed)
    });
    Ok(SearchReport::collect("min_sum", seed, verdicts))
}

/// `cases` random real vectors of length `1..=n_max`.
pub fn search_khintchine(n_max: usize, cases: usize, seed: u64) -> Result<SearchReport> {
    if n_max == 0 || n_max > KHINTCHINE_MAX {
        return Err(Error::SizeTooLarge {
            len: n_max,
            limit: KHINTCHINE_MAX,
        });
    }
    let verdicts = par_map(cases, |i| {
        let mut r = rng::stream2(seed, 0x4b48, i as u64);
        let n = r.gen_range(1..=n_max);
        let scale = 10f64.powf(r.gen_range(-2.0..2.0));
        let x: Vec<f64> = (0..n).map(|_| (r.gen::<f64>() * 2.0 - 1.0) * scale).collect();
        check_khintchine(&x).unwrap().with_seed(seed)
    });
    Ok(SearchReport::collect("khintchine", seed, verdicts))
}

pub const PZ_LAMBDAS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// `cases` random finite pmfs, each checked on the lambda grid.
pub fn search_paley_zygmund(cases: usize, seed: u64) -> Result<SearchReport> {
    let verdicts = par_map(cases, |i| {
        let mut r = rng::stream2(seed, 0x505a, i as u64);
        let support = r.gen_range(1..=8);
        let mut w: Vec<f64> = (0..support).map(|_| r.gen::<f64>() + 1e-6).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|p| *p /= total);
        let pmf: Vec<(f64, f64)> = w
            .into_iter()
            .map(|p| {
                let z = if r.gen_bool(0.2) { 0.0 } else { r.gen::<f64>() * 10.0 };
                (z, p)
            })
            .collect();
        PZ_LAMBDAS
            .iter()
            .map(|&l| check_paley_zygmund(&pmf, l).unwrap().with_seed(seed))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(SearchReport::collect("paley_zygmund", seed, verdicts))
}

/// `cases` hypothesis-satisfying pairs for the `b = 1` lemma, each
/// contributing the lemma and its intermediate step.
pub fn search_b1(delta_max: usize, cases: usize, seed: u64) -> Result<SearchReport> {
    if delta_max < 2 {
        return Err(Error::InvalidParameters("need delta_max >= 2".into()));
    }
    let verdicts = par_map(cases, |i| {
        let mut r = rng::stream2(seed, 0xb1, i as u64);
        let (x, y) = hypothesis_pair(&mut r, (2, delta_max), 1, |x| {
            (1.0 - x.entries.iter().copied().fold(0.0, f64::max)) / 1000.0
        });
        check_b1_lemma(&x, &y).map(|v| v.with_seed(seed))
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(SearchReport::collect("b1_lemma", seed, verdicts))
}

// Zero-round game --------------------------------------------------------

/// Distribution over `b`-subsets of logical ports used by a 0-round node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ZeroRoundStrategy {
    Uniform,
    /// Always logical ports `0..b`.
    Constant,
    /// Ports `0..b` with probability `bias`, else ports `b..2b`.
    BitBiased { bias: f64 },
    /// Explicit subsets with weights.
    Custom { support: Vec<(Vec<usize>, f64)> },
}

impl ZeroRoundStrategy {
    /// The shipped zoo.
    pub fn zoo() -> Vec<Self> {
        vec![
            Self::Uniform,
            Self::Constant,
            Self::BitBiased { bias: 0.9 },
            Self::BitBiased { bias: 0.5 },
        ]
    }

    pub fn name(&self) -> String {
        match self {
            Self::Uniform => "uniform".into(),
            Self::Constant => "constant".into(),
            Self::BitBiased { bias } => format!("bit_biased({bias})"),
            Self::Custom { .. } => "custom".into(),
        }
    }

    fn draw(&self, r: &mut ChaCha8Rng, delta: usize, b: usize) -> Vec<usize> {
        match self {
            Self::Uniform => index::sample(r, delta, b).into_vec(),
            Self::Constant => (0..b).collect(),
            Self::BitBiased { bias } => {
                if r.gen_bool(*bias) {
                    (0..b).collect()
                } else {
                    (b..2 * b).collect()
                }
            }
            Self::Custom { support } => {
                let total: f64 = support.iter().map(|s| s.1).sum();
                let mut u = r.gen::<f64>() * total;
                for (set, w) in support {
                    if u < *w {
                        return set.clone();
                    }
                    u -= w;
                }
                support.last().unwrap().0.clone()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroRoundGame {
    pub delta: usize,
    pub b: usize,
    /// Size of the random regular graph played on.
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Plays the 0-round game: every node grabs a strategy draw through a fresh
/// uniform port permutation, on one random `delta`-regular graph; each
/// trial redraws all permutations and choices.
pub fn zero_round_badness(strategy: &ZeroRoundStrategy, game: &ZeroRoundGame) -> Result<BadnessEstimate> {
    let ZeroRoundGame { delta, b, n, trials, seed } = *game;
    if 2 * b > delta || b == 0 {
        return Err(Error::InvalidParameters(format!("need 1 <= b <= delta/2, got b={b}, delta={delta}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    if let ZeroRoundStrategy::Custom { support } = strategy {
        if support.is_empty() || support.iter().any(|(s, w)| s.len() != b || s.iter().any(|&p| p >= delta) || *w < 0.0) {
            return Err(Error::InvalidParameters("custom strategy needs b-subsets of 0..delta".into()));
        }
    }
    let g = generate_regular_graph(n, delta, seed, 1000)?;
    let edges = g.edges();
    let xs = par_map(trials, |t| {
        let mut r = rng::stream2(seed, 0x2e40, t as u64);
        let mut grabbed = vec![0u64; n];
        let mut perm: Vec<usize> = (0..delta).collect();
        for mask in grabbed.iter_mut() {
            perm.shuffle(&mut r);
            for k in strategy.draw(&mut r, delta, b) {
                *mask |= 1 << perm[k];
            }
        }
        let q = edges
            .iter()
            .filter(|e| grabbed[e.u] >> e.pu & 1 == 1 && grabbed[e.w] >> e.pw & 1 == 1)
            .count();
        crate::problems::badness(q as f64, b, n)
    });
    Ok(BadnessEstimate::from_samples(&xs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(x: &[f64]) -> ProbVector {
        ProbVector::new(x.to_vec()).unwrap()
    }

    fn tagged(x: &[f64], b: usize) -> ProbVector {
        ProbVector::tagged(x.to_vec(), b).unwrap()
    }

    #[test]
    fn pmf_examples() {
        assert_eq!(poisson_binomial_pmf(&[1.0, 1.0, 0.0]), vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(poisson_binomial_pmf(&[0.5, 0.5]), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn dp_matches_brute_force_at_twelve() {
        let mut r = rng::stream(7, 0);
        for _ in 0..20 {
            let y: Vec<f64> = (0..12).map(|_| r.gen()).collect();
            let (a, c) = (poisson_binomial_pmf(&y), brute_force_pmf(&y));
            assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for k in 0..=12 {
                assert!((a[k] - c[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn abs_dev_examples() {
        assert_eq!(expected_abs_dev(&[1.0, 1.0, 0.0], 2), 0.0);
        assert_eq!(expected_abs_dev(&[0.5, 0.5], 1), 0.5);
    }

    #[test]
    fn abs_dev_agrees_with_sampling() {
        let y = [0.3, 0.7, 0.2, 0.9, 0.5];
        let exact = expected_abs_dev(&y, 2);
        let mut r = rng::stream(3, 1);
        let draws = 1_000_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..draws {
            let k = y.iter().filter(|&&p| r.gen_bool(p)).count() as f64;
            let d = (k - 2.0).abs();
            sum += d;
            sq += d * d;
        }
        let mean = sum / draws as f64;
        let sigma = ((sq / draws as f64 - mean * mean) / draws as f64).sqrt();
        assert!((mean - exact).abs() <= 3.0 * sigma, "{mean} vs {exact}");
    }

    #[test]
    fn s_quantity_examples() {
        let q = s_quantities(&[1.0, 0.0, 0.0], 1);
        assert_eq!((q.s_b, q.s_rest), (1.0, 0.0));
        let q = s_quantities(&[0.4, 0.3, 0.3], 1);
        assert!((q.s_b - 0.4).abs() < 1e-15 && (q.s_rest - 0.6).abs() < 1e-15);
    }

    #[test]
    fn s_rest_is_min_over_subsets_of_complement_mass() {
        let mut r = rng::stream(11, 0);
        for _ in 0..200 {
            let delta = r.gen_range(1..=12);
            let b = r.gen_range(0..=delta);
            let x: Vec<f64> = (0..delta).map(|_| r.gen()).collect();
            let total: f64 = x.iter().sum();
            let best = (0u32..1 << delta)
                .filter(|m| m.count_ones() as usize == b)
                .map(|m| (0..delta).filter(|i| m >> i & 1 == 1).map(|i| x[i]).sum::<f64>())
                .fold(f64::MIN, f64::max);
            assert!((s_quantities(&x, b).s_rest - (total - best)).abs() < 1e-12);
        }
    }

    #[test]
    fn deviation_examples() {
        let x = tagged(&[1.0, 0.0, 1.0], 2);
        let v = check_deviation_lemma(&x, &pv(&x.entries), 2);
        assert!(!v.hypothesis && !v.violated());
        let x = tagged(&[0.5, 0.5], 1);
        let v = check_deviation_lemma(&x, &pv(&[0.5, 0.5]), 1);
        assert!(v.hypothesis && v.conclusion);
        assert_eq!(v.lhs, 0.5);
        assert!((v.rhs - 0.0005).abs() < 1e-15);
    }

    #[test]
    fn min_sum_examples() {
        let v = check_min_sum_bound(&tagged(&[1.0, 0.0, 1.0, 0.0], 2), 2);
        assert_eq!((v.lhs, v.rhs), (0.0, 0.0));
        for (delta, b) in [(4, 1), (6, 3), (10, 2), (5, 4)] {
            let x = vec![b as f64 / delta as f64; delta];
            let v = check_min_sum_bound(&ProbVector::tagged(x, b).unwrap(), b);
            let frac = b as f64 / delta as f64;
            assert!((v.lhs - delta as f64 * frac.min(1.0 - frac)).abs() < 1e-12);
            assert!((v.rhs - (b as f64 - (b * b) as f64 / delta as f64)).abs() < 1e-12);
            // Below one half the slack is exactly b^2 / delta, not zero.
            if 2 * b <= delta {
                assert!((v.margin - (b * b) as f64 / delta as f64).abs() < 1e-12);
            }
            assert!(v.conclusion);
        }
    }

    #[test]
    fn khintchine_examples() {
        let v = check_khintchine(&[1.0]).unwrap();
        assert!(v.conclusion && v.lhs.abs() < 1e-15);
        assert_eq!(rademacher_abs_mean(&[1.0, 1.0]).unwrap(), 1.0);
        assert!(check_khintchine(&[1.0, 1.0]).unwrap().conclusion);
        assert_eq!(
            check_khintchine(&[0.5; 21]),
            Err(Error::SizeTooLarge { len: 21, limit: 20 })
        );
    }

    #[test]
    fn paley_zygmund_examples() {
        let v = check_paley_zygmund(&[(1.0, 1.0)], 0.0).unwrap();
        assert_eq!((v.lhs, v.rhs), (1.0, 1.0));
        let v = check_paley_zygmund(&[(0.0, 0.5), (2.0, 0.5)], 0.5).unwrap();
        assert_eq!((v.lhs, v.rhs), (0.5, 0.125));
    }

    #[test]
    fn b1_examples() {
        let x = tagged(&[1.0, 0.0, 0.0], 1);
        let [main, _] = check_b1_lemma(&x, &pv(&x.entries));
        assert_eq!(main.rhs, 0.0);
        assert!(main.conclusion);
        let x = tagged(&[0.5, 0.5], 1);
        let [main, step] = check_b1_lemma(&x, &pv(&[0.5, 0.5]));
        assert!(main.hypothesis);
        assert_eq!((main.lhs, step.lhs), (0.5, 0.25));
        assert!(main.conclusion && step.conclusion);
    }

    #[test]
    fn water_fill_hits_target_with_caps() {
        let x = water_fill(&[10.0, 1.0, 1.0, 1.0], 2);
        assert_eq!(x[0], 1.0);
        assert!((x.iter().sum::<f64>() - 2.0).abs() <= TAG_TOL);
    }

    #[test]
    fn small_searches_find_nothing() {
        assert_eq!(search_deviation(8, 2, 200, 1).unwrap().violations, 0);
        assert_eq!(search_min_sum(16, 500, 1).unwrap().violations, 0);
        assert_eq!(search_khintchine(8, 100, 1).unwrap().violations, 0);
        assert_eq!(search_paley_zygmund(100, 1).unwrap().violations, 0);
        let b1 = search_b1(8, 200, 1).unwrap();
        assert_eq!(b1.violations, 0);
        assert_eq!(b1.hypothesis_true, 400);
    }

    #[test]
    fn jsonl_has_the_verdict_fields() {
        let rep = search_khintchine(2, 3, 5).unwrap();
        let text = rep.jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
        for key in ["check", "params_digest", "hypothesis", "conclusion", "lhs", "rhs", "margin", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn zero_round_delta_two_is_one_half() {
        for s in ZeroRoundStrategy::zoo().into_iter().take(2) {
            let game = ZeroRoundGame { delta: 2, b: 1, n: 20, trials: 4000, seed: 3 };
            let est = zero_round_badness(&s, &game).unwrap();
            assert!((est.mean - 0.5).abs() < 0.02, "{} {}", s.name(), est.mean);
        }
    }

    #[test]
    fn custom_strategy_is_validated() {
        let game = ZeroRoundGame { delta: 4, b: 1, n: 6, trials: 10, seed: 0 };
        let bad = ZeroRoundStrategy::Custom { support: vec![(vec![0, 1], 1.0)] };
        assert!(zero_round_badness(&bad, &game).is_err());
        let ok = ZeroRoundStrategy::Custom { support: vec![(vec![3], 1.0)] };
        assert!(zero_round_badness(&ok, &game).is_ok());
    }
}
