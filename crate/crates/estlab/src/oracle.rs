//! Ground-truth sampling engine.
//!
//! Two evaluation modes for any estimator under any supported design:
//!
//! - [`enumerate_design`]: the exact expectation over every possible
//!   sample (all `C(N,n)` subsets for SRSWOR, the k starts for systematic
//!   sampling, all nested subset pairs for two-phase). Deterministic and
//!   capped.
//! - [`monte_carlo`]: seeded replication. Replicate `i` draws from an
//!   independent ChaCha12 stream derived as `(seed, stream = i)`, so
//!   parallel and serial execution produce bit-identical results; the
//!   final reduction is a fixed-order pairwise summation.
//!
//! Bias and MSE are always computed against the known population target,
//! not the empirical mean.
//!
//! Enumeration results are invariant to unit reordering for SRSWOR;
//! systematic enumeration is intentionally covariant with the unit order,
//! which is part of that design.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::design::DesignCoefficients;
use crate::error::{EstError, Result};
use crate::moments::MomentTable;
use crate::population::FinitePopulation;
use crate::summary::Divisor;

/// Default cap on the number of samples an exact enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Sampling design, before seeding/replication details.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignKind {
    /// Simple random sampling without replacement, n units.
    Srswor { n: usize },
    /// Systematic sampling with N = n·k; a start in 0..k picks every k-th unit.
    Systematic { n: usize, k: usize },
    /// Two-phase SRSWOR: n′ first-phase units, then n of those.
    TwoPhase { n_prime: usize, n: usize },
}

/// Non-response follow-up: observe responders, subsample 1/L of the
/// non-respondents. Responder flags come from the population column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonResponsePlan {
    pub l: f64,
}

/// A fully specified sampling experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpec {
    pub kind: DesignKind,
    pub nonresponse: Option<NonResponsePlan>,
    pub seed: u64,
    pub replicates: usize,
    pub cap: u64,
}

impl DesignSpec {
    pub fn new(kind: DesignKind) -> Self {
        DesignSpec {
            kind,
            nonresponse: None,
            seed: 0,
            replicates: 0,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn with_nonresponse(mut self, l: f64) -> Self {
        self.nonresponse = Some(NonResponsePlan { l });
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replicates(mut self, replicates: usize) -> Self {
        self.replicates = replicates;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    fn validate(&self, pop: &FinitePopulation) -> Result<()> {
        let n_pop = pop.n_units();
        match self.kind {
            DesignKind::Srswor { n } => {
                if n == 0 || n > n_pop {
                    return Err(EstError::Design(format!(
                        "srswor needs 1 <= n <= N, got n={n}, N={n_pop}"
                    )));
                }
            }
            DesignKind::Systematic { n, k } => {
                if n * k != n_pop {
                    return Err(EstError::Design(format!(
                        "systematic sampling needs N = n*k, got N={n_pop}, n={n}, k={k}"
                    )));
                }
            }
            DesignKind::TwoPhase { n_prime, n } => {
                if !(n >= 1 && n < n_prime && n_prime < n_pop) {
                    return Err(EstError::Design(format!(
                        "two-phase needs 1 <= n < n' < N, got n={n}, n'={n_prime}, N={n_pop}"
                    )));
                }
            }
        }
        if let Some(nr) = &self.nonresponse {
            if nr.l <= 1.0 {
                return Err(EstError::Design(format!(
                    "non-response L must exceed 1, got {}",
                    nr.l
                )));
            }
            pop.require_responder()?;
        }
        Ok(())
    }
}

/// Outcome of one Hansen–Hurwitz non-response adjustment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhOutcome {
    pub n1: usize,
    pub n2: usize,
    pub h2: usize,
    pub y_bar_star: f64,
}

/// One drawn (or enumerated) sample handed to an estimator function.
#[derive(Debug)]
pub struct DrawnSample<'p> {
    pop: &'p FinitePopulation,
    /// Final-phase sample unit indices.
    pub units: Vec<usize>,
    /// First-phase unit indices for two-phase designs.
    pub first_phase: Option<Vec<usize>>,
    /// Non-response adjustment outcome, when the plan applies.
    pub hh: Option<HhOutcome>,
}

impl<'p> DrawnSample<'p> {
    fn col_mean(&self, col: &[f64], units: &[usize]) -> f64 {
        units.iter().map(|&i| col[i]).sum::<f64>() / units.len() as f64
    }

    fn col_var(&self, col: &[f64], units: &[usize]) -> f64 {
        let m = self.col_mean(col, units);
        units.iter().map(|&i| (col[i] - m).powi(2)).sum::<f64>() / (units.len() as f64 - 1.0)
    }

    pub fn mean_y(&self) -> f64 {
        self.col_mean(self.pop.y(), &self.units)
    }

    pub fn mean_x(&self) -> f64 {
        self.col_mean(
            self.pop.x().expect("population has no x column"),
            &self.units,
        )
    }

    pub fn mean_z(&self) -> f64 {
        self.col_mean(
            self.pop.z().expect("population has no z column"),
            &self.units,
        )
    }

    /// Hansen–Hurwitz adjusted mean when non-response applies, otherwise
    /// the plain sample mean.
    pub fn y_bar_star(&self) -> f64 {
        self.hh
            .map(|h| h.y_bar_star)
            .unwrap_or_else(|| self.mean_y())
    }

    /// Sample variance of y (divisor n − 1).
    pub fn var_y(&self) -> f64 {
        self.col_var(self.pop.y(), &self.units)
    }

    pub fn var_x(&self) -> f64 {
        self.col_var(
            self.pop.x().expect("population has no x column"),
            &self.units,
        )
    }

    pub fn var_z(&self) -> f64 {
        self.col_var(
            self.pop.z().expect("population has no z column"),
            &self.units,
        )
    }

    pub fn first_phase_mean_x(&self) -> f64 {
        let fp = self.first_phase.as_ref().expect("not a two-phase sample");
        self.col_mean(self.pop.x().expect("population has no x column"), fp)
    }

    pub fn first_phase_var_x(&self) -> f64 {
        let fp = self.first_phase.as_ref().expect("not a two-phase sample");
        self.col_var(self.pop.x().expect("population has no x column"), fp)
    }

    pub fn first_phase_var_z(&self) -> f64 {
        let fp = self.first_phase.as_ref().expect("not a two-phase sample");
        self.col_var(self.pop.z().expect("population has no z column"), fp)
    }
}

/// Result of an exact enumeration or Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    pub estimator_id: String,
    pub mean: f64,
    pub bias: f64,
    pub mse: f64,
    /// Standard error of the reported mean (0 for exact enumeration).
    pub mc_std_error: f64,
    /// Delta-method standard error of the reported MSE (0 when exact).
    pub mse_std_error: f64,
    pub count: usize,
    pub exact: bool,
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.saturating_mul((n - j) as u128) / (j + 1) as u128;
    }
    acc
}

/// Visit every k-subset of 0..n in lexicographic order.
fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return;
    }
    loop {
        f(&idx);
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Deterministic pairwise summation; the reduction order never depends on
/// thread count, so parallel and serial runs report identical digits.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

fn summarize_runs(
    estimator_id: &str,
    values: &[f64],
    target: f64,
    exact: bool,
) -> SimulationResult {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let sq_err: Vec<f64> = values
        .iter()
        .map(|&v| (v - target) * (v - target))
        .collect();
    let mse = pairwise_sum(&sq_err) / n;
    let (mc_se, mse_se) = if exact {
        (0.0, 0.0)
    } else {
        let dev: Vec<f64> = values.iter().map(|&v| (v - mean) * (v - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1.0);
        let dev2: Vec<f64> = sq_err.iter().map(|&s| (s - mse) * (s - mse)).collect();
        let var2 = pairwise_sum(&dev2) / (n - 1.0);
        ((var / n).sqrt(), (var2 / n).sqrt())
    };
    SimulationResult {
        estimator_id: estimator_id.to_string(),
        mean,
        bias: mean - target,
        mse,
        mc_std_error: mc_se,
        mse_std_error: mse_se,
        count: values.len(),
        exact,
    }
}

/// Exact expectation of `estimator` over every sample the design admits.
///
/// Designs with a non-response plan cannot be enumerated (the follow-up
/// subsample is random); use [`monte_carlo`] for those.
pub fn enumerate_design<F>(
    pop: &FinitePopulation,
    spec: &DesignSpec,
    target: f64,
    estimator_id: &str,
    estimator: F,
) -> Result<SimulationResult>
where
    F: Fn(&DrawnSample) -> f64,
{
    spec.validate(pop)?;
    if spec.nonresponse.is_some() {
        return Err(EstError::EnumerationUnsupported(
            "non-response subsampling is random; use Monte Carlo".into(),
        ));
    }
    let n_pop = pop.n_units();
    let mut values = Vec::new();
    match spec.kind {
        DesignKind::Srswor { n } => {
            let total = binomial(n_pop as u64, n as u64);
            if total > spec.cap as u128 {
                return Err(EstError::EnumerationTooLarge {
                    total,
                    cap: spec.cap,
                });
            }
            values.reserve(total as usize);
            for_each_combination(n_pop, n, |idx| {
                let s = DrawnSample {
                    pop,
                    units: idx.to_vec(),
                    first_phase: None,
                    hh: None,
                };
                values.push(estimator(&s));
            });
        }
        DesignKind::Systematic { n, k } => {
            for start in 0..k {
                let units: Vec<usize> = (0..n).map(|j| start + j * k).collect();
                let s = DrawnSample {
                    pop,
                    units,
                    first_phase: None,
                    hh: None,
                };
                values.push(estimator(&s));
            }
        }
        DesignKind::TwoPhase { n_prime, n } => {
            let total = binomial(n_pop as u64, n_prime as u64)
                .saturating_mul(binomial(n_prime as u64, n as u64));
            if total > spec.cap as u128 {
                return Err(EstError::EnumerationTooLarge {
                    total,
                    cap: spec.cap,
                });
            }
            values.reserve(total as usize);
            for_each_combination(n_pop, n_prime, |fp| {
                let fp_units = fp.to_vec();
                for_each_combination(n_prime, n, |inner| {
                    let units: Vec<usize> = inner.iter().map(|&j| fp_units[j]).collect();
                    let s = DrawnSample {
                        pop,
                        units,
                        first_phase: Some(fp_units.clone()),
                        hh: None,
                    };
                    values.push(estimator(&s));
                });
            });
        }
    }
    Ok(summarize_runs(estimator_id, &values, target, true))
}

/// SRSWOR of k indices out of `from` (selection sampling, order sorted).
fn draw_srswor(rng: &mut ChaCha12Rng, from: usize, k: usize) -> Vec<usize> {
    let mut picked = Vec::with_capacity(k);
    let mut remaining = from;
    let mut needed = k;
    for i in 0..from {
        if needed == 0 {
            break;
        }
        if (rng.gen_range(0..remaining)) < needed {
            picked.push(i);
            needed -= 1;
        }
        remaining -= 1;
    }
    picked
}

/// Hansen–Hurwitz adjusted mean for one sample.
///
/// Respondents are averaged directly; of the `n2` non-respondents a
/// follow-up subsample of `h2 = max(1, round(n2 / L))` (never more than
/// `n2`) is drawn by SRSWOR and assumed to respond. The adjusted mean is
/// `(n1 ȳ_{n1} + n2 ȳ_{h2}) / n`.
pub fn hansen_hurwitz_draw(
    pop: &FinitePopulation,
    sample_units: &[usize],
    l: f64,
    rng: &mut ChaCha12Rng,
) -> Result<HhOutcome> {
    if l <= 1.0 {
        return Err(EstError::Design(format!("L must exceed 1, got {l}")));
    }
    let flags = pop.require_responder()?;
    let y = pop.y();
    let (resp, nonresp): (Vec<usize>, Vec<usize>) = sample_units.iter().partition(|&&i| flags[i]);
    let n = sample_units.len() as f64;
    let n1 = resp.len();
    let n2 = nonresp.len();
    if n2 == 0 {
        let ybar = resp.iter().map(|&i| y[i]).sum::<f64>() / n;
        return Ok(HhOutcome {
            n1,
            n2: 0,
            h2: 0,
            y_bar_star: ybar,
        });
    }
    let h2 = ((n2 as f64 / l).round() as usize).clamp(1, n2);
    let sub = draw_srswor(rng, n2, h2);
    let y_n1 = if n1 > 0 {
        resp.iter().map(|&i| y[i]).sum::<f64>() / n1 as f64
    } else {
        0.0
    };
    let y_h2 = sub.iter().map(|&j| y[nonresp[j]]).sum::<f64>() / h2 as f64;
    Ok(HhOutcome {
        n1,
        n2,
        h2,
        y_bar_star: (n1 as f64 * y_n1 + n2 as f64 * y_h2) / n,
    })
}

fn draw_one<'p>(
    pop: &'p FinitePopulation,
    spec: &DesignSpec,
    replicate: usize,
) -> Result<DrawnSample<'p>> {
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    rng.set_stream(replicate as u64 + 1);
    let n_pop = pop.n_units();
    let (units, first_phase) = match spec.kind {
        DesignKind::Srswor { n } => (draw_srswor(&mut rng, n_pop, n), None),
        DesignKind::Systematic { n, k } => {
            // Replicates cycle the k starts, so a replicate count that is a
            // multiple of k enumerates the start distribution exactly.
            let start = replicate % k;
            ((0..n).map(|j| start + j * k).collect(), None)
        }
        DesignKind::TwoPhase { n_prime, n } => {
            let fp = draw_srswor(&mut rng, n_pop, n_prime);
            let inner = draw_srswor(&mut rng, n_prime, n);
            let units: Vec<usize> = inner.iter().map(|&j| fp[j]).collect();
            (units, Some(fp))
        }
    };
    let hh = match &spec.nonresponse {
        Some(plan) => Some(hansen_hurwitz_draw(pop, &units, plan.l, &mut rng)?),
        None => None,
    };
    Ok(DrawnSample {
        pop,
        units,
        first_phase,
        hh,
    })
}

/// Seeded Monte-Carlo evaluation of `estimator` under the design.
///
/// Bit-identical across runs with the same seed regardless of the worker
/// count: each replicate has its own RNG stream and the reduction order is
/// fixed.
pub fn monte_carlo<F>(
    pop: &FinitePopulation,
    spec: &DesignSpec,
    target: f64,
    estimator_id: &str,
    estimator: F,
) -> Result<SimulationResult>
where
    F: Fn(&DrawnSample) -> f64 + Sync,
{
    monte_carlo_with_mode(pop, spec, target, estimator_id, true, estimator)
}

/// [`monte_carlo`] with explicit parallel/serial execution choice.
pub fn monte_carlo_with_mode<F>(
    pop: &FinitePopulation,
    spec: &DesignSpec,
    target: f64,
    estimator_id: &str,
    parallel: bool,
    estimator: F,
) -> Result<SimulationResult>
where
    F: Fn(&DrawnSample) -> f64 + Sync,
{
    spec.validate(pop)?;
    if spec.replicates < 2 {
        return Err(EstError::Design(
            "Monte Carlo needs at least 2 replicates".into(),
        ));
    }
    let run = |r: usize| -> Result<f64> { Ok(estimator(&draw_one(pop, spec, r)?)) };
    let values: Vec<f64> = if parallel {
        (0..spec.replicates)
            .into_par_iter()
            .map(run)
            .collect::<Result<Vec<f64>>>()?
    } else {
        (0..spec.replicates)
            .map(run)
            .collect::<Result<Vec<f64>>>()?
    };
    Ok(summarize_runs(estimator_id, &values, target, false))
}

/// One row of the product-moment identity report.
#[derive(Debug, Clone)]
pub struct IdentityRow {
    pub name: &'static str,
    pub analytic: f64,
    pub enumerated: f64,
    pub rel_diff: f64,
}

/// Check the SRSWOR product-moment identities against full enumeration.
///
/// Verifies `E[e0] = E[e1] = 0` and, with divisor-N moment ratios,
///
/// ```text
/// E[e0²] = L1 C02        E[e1²]  = L1 C20        E[e0 e1] = L1 C11
/// E[e1²e0] = L2 C21      E[e1³]  = L2 C30
/// E[e1³e0] = L3 C31 + 3 L4 C20 C11
/// E[e1⁴]  = L3 C40 + 3 L4 C20²
/// E[e1²e0²] = L3 C22 + L4 (C20 C02 + 2 C11²)
/// ```
///
/// These are exact finite-population facts; any enumerated relative
/// difference beyond rounding means a formula transcription error.
pub fn verify_moment_identities(
    pop: &FinitePopulation,
    n: usize,
    cap: u64,
) -> Result<Vec<IdentityRow>> {
    let n_pop = pop.n_units();
    if n_pop < 4 {
        return Err(EstError::Design("identity check needs N >= 4".into()));
    }
    let coeffs = DesignCoefficients::new(n_pop, n, None)?;
    let moments = MomentTable::from_population(pop, Divisor::N)?;
    let x = pop.require_x()?;
    let y = pop.y();
    let my = y.iter().sum::<f64>() / n_pop as f64;
    let mx = x.iter().sum::<f64>() / n_pop as f64;

    let total = binomial(n_pop as u64, n as u64);
    if total > cap as u128 {
        return Err(EstError::EnumerationTooLarge { total, cap });
    }

    // Accumulate every e-moment in one pass over the subsets.
    let mut acc = [0.0f64; 10];
    let mut count = 0usize;
    for_each_combination(n_pop, n, |idx| {
        let ybar = idx.iter().map(|&i| y[i]).sum::<f64>() / n as f64;
        let xbar = idx.iter().map(|&i| x[i]).sum::<f64>() / n as f64;
        let e0 = (ybar - my) / my;
        let e1 = (xbar - mx) / mx;
        acc[0] += e0;
        acc[1] += e1;
        acc[2] += e0 * e0;
        acc[3] += e1 * e1;
        acc[4] += e0 * e1;
        acc[5] += e1 * e1 * e0;
        acc[6] += e1 * e1 * e1;
        acc[7] += e1 * e1 * e1 * e0;
        acc[8] += e1 * e1 * e1 * e1;
        acc[9] += e1 * e1 * e0 * e0;
        count += 1;
    });
    let m = count as f64;
    for a in acc.iter_mut() {
        *a /= m;
    }

    let c = |p: u32, q: u32| moments.c(p, q).expect("raw table is complete");
    let l3 = coeffs.require_l3()?;
    let l4 = coeffs.require_l4()?;
    let rows = vec![
        ("E[e0]", 0.0, acc[0]),
        ("E[e1]", 0.0, acc[1]),
        ("E[e0^2] = L1 C02", coeffs.l1 * c(0, 2), acc[2]),
        ("E[e1^2] = L1 C20", coeffs.l1 * c(2, 0), acc[3]),
        ("E[e0 e1] = L1 C11", coeffs.l1 * c(1, 1), acc[4]),
        ("E[e1^2 e0] = L2 C21", coeffs.l2 * c(2, 1), acc[5]),
        ("E[e1^3] = L2 C30", coeffs.l2 * c(3, 0), acc[6]),
        (
            "E[e1^3 e0] = L3 C31 + 3 L4 C20 C11",
            l3 * c(3, 1) + 3.0 * l4 * c(2, 0) * c(1, 1),
            acc[7],
        ),
        (
            "E[e1^4] = L3 C40 + 3 L4 C20^2",
            l3 * c(4, 0) + 3.0 * l4 * c(2, 0) * c(2, 0),
            acc[8],
        ),
        (
            "E[e1^2 e0^2] = L3 C22 + L4 (C20 C02 + 2 C11^2)",
            l3 * c(2, 2) + l4 * (c(2, 0) * c(0, 2) + 2.0 * c(1, 1) * c(1, 1)),
            acc[9],
        ),
    ];
    Ok(rows
        .into_iter()
        .map(|(name, analytic, enumerated)| {
            // Relative difference; absolute when the identity value is zero
            // (E[e0], E[e1] and the N = 2n odd-moment cases).
            let rel_diff = if analytic == 0.0 {
                enumerated.abs()
            } else {
                (analytic - enumerated).abs() / analytic.abs()
            };
            IdentityRow {
                name,
                analytic,
                enumerated,
                rel_diff,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pop_ref() -> FinitePopulation {
        FinitePopulation::from_xyz(
            vec![35.0, 35.0, 38.0, 40.0, 40.0, 42.0, 44.0, 46.0, 50.0, 50.0],
            vec![49.0, 40.0, 41.0, 46.0, 52.0, 59.0, 53.0, 61.0, 55.0, 64.0],
            vec![
                200.0, 212.0, 211.0, 212.0, 203.0, 194.0, 194.0, 188.0, 196.0, 190.0,
            ],
        )
        .unwrap()
    }

    /// Fixed synthetic identity-check population: x_i = i, y_i = i² mod 7 + 1.
    pub fn identity_pop() -> FinitePopulation {
        let x: Vec<f64> = (1..=12).map(|i| i as f64).collect();
        let y: Vec<f64> = (1..=12u32).map(|i| ((i * i) % 7 + 1) as f64).collect();
        FinitePopulation::from_xy(x, y).unwrap()
    }

    #[test]
    fn sample_mean_is_unbiased_over_all_subsets() {
        let pop = pop_ref();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 4 });
        let r = enumerate_design(&pop, &spec, 52.0, "mean", |s| s.mean_y()).unwrap();
        assert_eq!(r.count, 210);
        assert!(r.bias.abs() < 1e-13);
        assert!(r.exact && r.mc_std_error == 0.0);
    }

    #[test]
    fn systematic_mean_is_unbiased_over_starts() {
        let x: Vec<f64> = (0..12).map(|i| (i * i % 5) as f64 + 1.0).collect();
        let y: Vec<f64> = (0..12).map(|i| (i * 3 % 7) as f64 + 2.0).collect();
        let ybar = y.iter().sum::<f64>() / 12.0;
        let pop = FinitePopulation::from_xy(x, y).unwrap();
        let spec = DesignSpec::new(DesignKind::Systematic { n: 3, k: 4 });
        let r = enumerate_design(&pop, &spec, ybar, "mean", |s| s.mean_y()).unwrap();
        assert_eq!(r.count, 4);
        assert!(r.bias.abs() < 1e-14);
    }

    #[test]
    fn enumeration_is_order_invariant_for_srswor() {
        let pop = pop_ref();
        let order: Vec<usize> = vec![7, 2, 9, 0, 4, 1, 8, 3, 6, 5];
        let shuffled = pop.permuted(&order).unwrap();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 4 });
        let f = |s: &DrawnSample| s.mean_y() * 42.0 / s.mean_x();
        let a = enumerate_design(&pop, &spec, 52.0, "ratio", f).unwrap();
        let b = enumerate_design(&shuffled, &spec, 52.0, "ratio", f).unwrap();
        assert!((a.mse - b.mse).abs() <= 1e-12 * a.mse);
        assert!((a.mean - b.mean).abs() <= 1e-12 * a.mean);
    }

    #[test]
    fn cap_is_enforced() {
        let pop = pop_ref();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 4 }).with_cap(100);
        let err = enumerate_design(&pop, &spec, 52.0, "mean", |s| s.mean_y()).unwrap_err();
        assert!(matches!(
            err,
            EstError::EnumerationTooLarge { total: 210, .. }
        ));
    }

    #[test]
    fn two_phase_enumeration_is_unbiased() {
        let x: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 3.0 * v + 1.0).collect();
        let xbar = x.iter().sum::<f64>() / 8.0;
        let ybar = y.iter().sum::<f64>() / 8.0;
        let pop = FinitePopulation::from_xy(x, y).unwrap();
        let spec = DesignSpec::new(DesignKind::TwoPhase { n_prime: 4, n: 2 });
        let r = enumerate_design(&pop, &spec, ybar, "mean", |s| s.mean_y()).unwrap();
        assert_eq!(r.count, 70 * 6);
        assert!(r.bias.abs() < 1e-12);
        let rx =
            enumerate_design(&pop, &spec, xbar, "fp-mean-x", |s| s.first_phase_mean_x()).unwrap();
        assert!(rx.bias.abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_deterministic_and_parallel_consistent() {
        let pop = pop_ref();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 4 })
            .with_seed(7)
            .with_replicates(2000);
        let f = |s: &DrawnSample| s.mean_y();
        let a = monte_carlo(&pop, &spec, 52.0, "mean", f).unwrap();
        let b = monte_carlo(&pop, &spec, 52.0, "mean", f).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.mse.to_bits(), b.mse.to_bits());
        let serial = monte_carlo_with_mode(&pop, &spec, 52.0, "mean", false, f).unwrap();
        assert_eq!(a.mean.to_bits(), serial.mean.to_bits());
        assert_eq!(a.mse.to_bits(), serial.mse.to_bits());
        assert_eq!(a.mc_std_error.to_bits(), serial.mc_std_error.to_bits());
    }

    #[test]
    fn monte_carlo_mean_is_unbiased_within_three_se() {
        let pop = pop_ref();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 4 })
            .with_seed(11)
            .with_replicates(100_000);
        let r = monte_carlo(&pop, &spec, 52.0, "mean", |s| s.mean_y()).unwrap();
        assert!(
            r.bias.abs() < 3.0 * r.mc_std_error,
            "bias {} vs se {}",
            r.bias,
            r.mc_std_error
        );
    }

    #[test]
    fn monte_carlo_mse_matches_enumeration_for_ratio() {
        let pop = pop_ref();
        let f = |s: &DrawnSample| s.mean_y() * 42.0 / s.mean_x();
        let exact = enumerate_design(
            &pop,
            &DesignSpec::new(DesignKind::Srswor { n: 4 }),
            52.0,
            "ratio",
            f,
        )
        .unwrap();
        let mc = monte_carlo(
            &pop,
            &DesignSpec::new(DesignKind::Srswor { n: 4 })
                .with_seed(42)
                .with_replicates(100_000),
            52.0,
            "ratio",
            f,
        )
        .unwrap();
        assert!(
            (mc.mse - exact.mse).abs() < 3.0 * mc.mse_std_error,
            "mc {} exact {} band {}",
            mc.mse,
            exact.mse,
            3.0 * mc.mse_std_error
        );
    }

    #[test]
    fn hansen_hurwitz_degenerate_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        // All respond: adjusted mean is the plain mean.
        let pop = FinitePopulation::builder(vec![3.0, 5.0, 9.0, 7.0])
            .responder(vec![true, true, true, true])
            .build()
            .unwrap();
        let out = hansen_hurwitz_draw(&pop, &[0, 1, 2, 3], 2.0, &mut rng).unwrap();
        assert_eq!(out.n2, 0);
        assert!((out.y_bar_star - 6.0).abs() < 1e-15);

        // L close to 1 from above: h2 = n2, full follow-up, plain mean again.
        let pop = FinitePopulation::builder(vec![3.0, 5.0, 9.0, 7.0])
            .responder(vec![true, false, false, true])
            .build()
            .unwrap();
        let out = hansen_hurwitz_draw(&pop, &[0, 1, 2, 3], 1.0000001, &mut rng).unwrap();
        assert_eq!(out.h2, out.n2);
        assert!((out.y_bar_star - 6.0).abs() < 1e-15);
    }

    #[test]
    fn hansen_hurwitz_is_unbiased_under_replication() {
        let y: Vec<f64> = (0..20).map(|i| 10.0 + ((i * 13) % 7) as f64).collect();
        let ybar = y.iter().sum::<f64>() / 20.0;
        let flags: Vec<bool> = (0..20).map(|i| i % 3 != 0).collect();
        let pop = FinitePopulation::builder(y)
            .responder(flags)
            .build()
            .unwrap();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 8 })
            .with_nonresponse(2.0)
            .with_seed(5)
            .with_replicates(100_000);
        let r = monte_carlo(&pop, &spec, ybar, "hh-mean", |s| s.y_bar_star()).unwrap();
        assert!(r.bias.abs() < 3.0 * r.mc_std_error);
    }

    #[test]
    fn identity_suite_passes_at_1e10() {
        let rows = verify_moment_identities(&identity_pop(), 5, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(rows.len(), 10);
        for row in &rows {
            // Zero-identity rows report an absolute difference.
            let tol = if row.analytic == 0.0 { 1e-12 } else { 1e-10 };
            assert!(
                row.rel_diff < tol,
                "{}: analytic {} enumerated {} rel {}",
                row.name,
                row.analytic,
                row.enumerated,
                row.rel_diff
            );
        }
    }

    #[test]
    fn half_sample_kills_odd_moments() {
        let pop = identity_pop();
        let rows = verify_moment_identities(&pop, 6, DEFAULT_ENUMERATION_CAP).unwrap();
        let e13 = rows
            .iter()
            .find(|r| r.name.starts_with("E[e1^3] "))
            .unwrap();
        assert!(e13.analytic.abs() < 1e-15, "L2 vanishes at N = 2n");
        assert!(e13.enumerated.abs() < 1e-13);
    }

    #[test]
    fn nonresponse_enumeration_is_rejected() {
        let pop = FinitePopulation::builder(vec![1.0, 2.0, 3.0, 4.0])
            .responder(vec![true, false, true, true])
            .build()
            .unwrap();
        let spec = DesignSpec::new(DesignKind::Srswor { n: 2 }).with_nonresponse(2.0);
        assert!(matches!(
            enumerate_design(&pop, &spec, 2.5, "mean", |s| s.mean_y()),
            Err(EstError::EnumerationUnsupported(_))
        ));
    }
}
