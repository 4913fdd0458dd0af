//! Higher-order moment ratios.
//!
//! Three related families live here:
//!
//! - `C_pq`: bivariate central moment ratios of (x, y),
//!   `C_pq = μ_pq / (X̄^p Ȳ^q)` with `μ_pq = (1/N) Σ (x_i−X̄)^p (y_i−Ȳ)^q`.
//!   Index order is (auxiliary power, study power). Divisor N is the
//!   default: it is the convention under which the SRSWOR product-moment
//!   identities `E[e1²] = L1 C_20`, `E[e1³] = L2 C_30`, … are exact finite
//!   population facts (checked against full enumeration in the oracle).
//! - `∂_pqr`: standardized trivariate central moments of (y, x, z),
//!   `∂_pqr = μ_pqr / (μ_200^{p/2} μ_020^{q/2} μ_002^{r/2})`, with starred
//!   forms `∂* = ∂ − 1` for the six even indices the variance-estimator
//!   formulas consume.
//! - `V_rs`: stratified product-moment sums (first index: study power,
//!   second index: auxiliary power), weighted by `W_h^{r+s}` and the
//!   per-stratum design coefficients `γ_h`, `k1(h)`, `k2(h)`, `k3(h)`.

use std::collections::BTreeMap;

use crate::design::DesignCoefficients;
use crate::error::{EstError, Result};
use crate::population::FinitePopulation;
use crate::summary::Divisor;

/// Provenance of a moment table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    RawData,
    Supplied,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Central moment ratio `C_pq` of a population with divisor `divisor`.
///
/// `p` is the auxiliary (x) power, `q` the study (y) power.
pub fn cpq(pop: &FinitePopulation, p: u32, q: u32, divisor: Divisor) -> Result<f64> {
    if p + q > 4 {
        return Err(EstError::Domain(format!(
            "C_pq needs p+q <= 4, got ({p},{q})"
        )));
    }
    let x = pop.require_x()?;
    let y = pop.y();
    let n = pop.n_units();
    let (mx, my) = (mean(x), mean(y));
    if p > 0 && mx == 0.0 {
        return Err(EstError::DegenerateMoment(
            "meanX = 0 in C_pq denominator".into(),
        ));
    }
    if q > 0 && my == 0.0 {
        return Err(EstError::DegenerateMoment(
            "meanY = 0 in C_pq denominator".into(),
        ));
    }
    let s: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (xi - mx).powi(p as i32) * (yi - my).powi(q as i32))
        .sum();
    Ok(s / divisor.denom(n) / (mx.powi(p as i32) * my.powi(q as i32)))
}

/// Table of `C_pq` ratios for all p+q ≤ 4.
#[derive(Debug, Clone)]
pub struct MomentTable {
    entries: BTreeMap<(u32, u32), f64>,
    pub source: MomentSource,
}

impl MomentTable {
    /// Compute every `C_pq`, p+q ≤ 4, from raw x/y columns.
    pub fn from_population(pop: &FinitePopulation, divisor: Divisor) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for p in 0..=4u32 {
            for q in 0..=(4 - p) {
                entries.insert((p, q), cpq(pop, p, q, divisor)?);
            }
        }
        Ok(MomentTable {
            entries,
            source: MomentSource::RawData,
        })
    }

    /// Build from user-supplied values (e.g. published constants).
    pub fn from_entries<I: IntoIterator<Item = ((u32, u32), f64)>>(entries: I) -> Self {
        let mut map: BTreeMap<(u32, u32), f64> = entries.into_iter().collect();
        map.entry((0, 0)).or_insert(1.0);
        MomentTable {
            entries: map,
            source: MomentSource::Supplied,
        }
    }

    pub fn insert(&mut self, p: u32, q: u32, value: f64) {
        self.entries.insert((p, q), value);
    }

    pub fn get(&self, p: u32, q: u32) -> Option<f64> {
        self.entries.get(&(p, q)).copied()
    }

    pub fn c(&self, p: u32, q: u32) -> Result<f64> {
        self.get(p, q)
            .ok_or_else(|| EstError::IncompleteInput(format!("C_{p}{q}")))
    }
}

/// Standardized trivariate moment table `∂_pqr` over (y, x, z).
#[derive(Debug, Clone)]
pub struct PartialMomentTable {
    entries: BTreeMap<(u32, u32, u32), f64>,
    pub source: MomentSource,
}

/// Starred indices used by the variance-estimator formulas.
const STARRED: [(u32, u32, u32); 6] = [
    (4, 0, 0),
    (0, 4, 0),
    (0, 0, 4),
    (2, 2, 0),
    (2, 0, 2),
    (0, 2, 2),
];

impl PartialMomentTable {
    /// Compute `∂_pqr` for all even p+q+r ≤ 4 plus the second-order
    /// self-normalizations, from raw y/x/z columns (divisor N).
    pub fn from_population(pop: &FinitePopulation) -> Result<Self> {
        let x = pop.require_x()?;
        let z = pop.require_z()?;
        let y = pop.y();
        let n = pop.n_units() as f64;
        let (my, mx, mz) = (mean(y), mean(x), mean(z));
        let mu = |p: i32, q: i32, r: i32| -> f64 {
            y.iter()
                .zip(x)
                .zip(z)
                .map(|((&yi, &xi), &zi)| (yi - my).powi(p) * (xi - mx).powi(q) * (zi - mz).powi(r))
                .sum::<f64>()
                / n
        };
        let (m200, m020, m002) = (mu(2, 0, 0), mu(0, 2, 0), mu(0, 0, 2));
        for (name, m) in [("mu_200", m200), ("mu_020", m020), ("mu_002", m002)] {
            if m <= 0.0 {
                return Err(EstError::DegenerateMoment(format!("{name} = {m}")));
            }
        }
        let mut entries = BTreeMap::new();
        let mut put = |p: u32, q: u32, r: u32| {
            let d =
                m200.powf(p as f64 / 2.0) * m020.powf(q as f64 / 2.0) * m002.powf(r as f64 / 2.0);
            entries.insert((p, q, r), mu(p as i32, q as i32, r as i32) / d);
        };
        for &(p, q, r) in &[
            (2, 0, 0),
            (0, 2, 0),
            (0, 0, 2),
            (1, 1, 0),
            (1, 0, 1),
            (0, 1, 1),
            (4, 0, 0),
            (0, 4, 0),
            (0, 0, 4),
            (2, 2, 0),
            (2, 0, 2),
            (0, 2, 2),
            (3, 1, 0),
            (3, 0, 1),
            (1, 3, 0),
            (1, 0, 3),
            (0, 3, 1),
            (0, 1, 3),
            (2, 1, 1),
            (1, 2, 1),
            (1, 1, 2),
        ] {
            put(p, q, r);
        }
        Ok(PartialMomentTable {
            entries,
            source: MomentSource::RawData,
        })
    }

    /// Build from user-supplied `∂_pqr` values.
    pub fn from_entries<I: IntoIterator<Item = ((u32, u32, u32), f64)>>(entries: I) -> Self {
        PartialMomentTable {
            entries: entries.into_iter().collect(),
            source: MomentSource::Supplied,
        }
    }

    pub fn partial(&self, p: u32, q: u32, r: u32) -> Result<f64> {
        self.entries
            .get(&(p, q, r))
            .copied()
            .ok_or_else(|| EstError::IncompleteInput(format!("partial_{p}{q}{r}")))
    }

    /// `∂*_pqr = ∂_pqr − 1`, exposed only for the six indices the
    /// variance formulas use; other starred forms are `partial(..) - 1.0`
    /// on demand.
    pub fn starred(&self, p: u32, q: u32, r: u32) -> Result<f64> {
        if !STARRED.contains(&(p, q, r)) {
            return Err(EstError::Domain(format!(
                "starred form not defined for index ({p},{q},{r})"
            )));
        }
        Ok(self.partial(p, q, r)? - 1.0)
    }
}

/// Per-stratum data: raw columns or a supplied central-moment set.
#[derive(Debug, Clone)]
pub enum StratumData {
    Raw {
        y: Vec<f64>,
        x: Vec<f64>,
    },
    /// Central moments `mu[(yPow, xPow)]` with divisor N_h, plus means.
    Moments {
        mean_y: f64,
        mean_x: f64,
        mu: BTreeMap<(u32, u32), f64>,
    },
}

/// One stratum of a stratified population.
#[derive(Debug, Clone)]
pub struct Stratum {
    pub label: String,
    pub n_pop: usize,
    pub n_sample: usize,
    pub data: StratumData,
}

impl Stratum {
    pub fn from_raw(label: &str, n_sample: usize, y: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if y.len() != x.len() || y.len() < 2 {
            return Err(EstError::Schema(format!(
                "stratum {label}: bad column lengths"
            )));
        }
        if n_sample >= y.len() || n_sample < 2 {
            return Err(EstError::Design(format!(
                "stratum {label}: need 2 <= n_h < N_h, got n_h = {n_sample}, N_h = {}",
                y.len()
            )));
        }
        Ok(Stratum {
            label: label.into(),
            n_pop: y.len(),
            n_sample,
            data: StratumData::Raw { y, x },
        })
    }

    fn mean_y(&self) -> f64 {
        match &self.data {
            StratumData::Raw { y, .. } => mean(y),
            StratumData::Moments { mean_y, .. } => *mean_y,
        }
    }

    fn mean_x(&self) -> f64 {
        match &self.data {
            StratumData::Raw { x, .. } => mean(x),
            StratumData::Moments { mean_x, .. } => *mean_x,
        }
    }

    /// Central moment `mu[y^r x^s]` with divisor N_h.
    fn mu(&self, r: u32, s: u32) -> Result<f64> {
        match &self.data {
            StratumData::Raw { y, x } => {
                let (my, mx) = (mean(y), mean(x));
                Ok(y.iter()
                    .zip(x)
                    .map(|(&yi, &xi)| (yi - my).powi(r as i32) * (xi - mx).powi(s as i32))
                    .sum::<f64>()
                    / y.len() as f64)
            }
            StratumData::Moments { mu, .. } => mu.get(&(r, s)).copied().ok_or_else(|| {
                EstError::IncompleteInput(format!(
                    "stratum {}: central moment mu[y^{r} x^{s}]",
                    self.label
                ))
            }),
        }
    }

    fn gamma(&self) -> f64 {
        let (nh, n) = (self.n_pop as f64, self.n_sample as f64);
        (1.0 - n / nh) / n
    }

    fn k1(&self) -> f64 {
        let (nh, n) = (self.n_pop as f64, self.n_sample as f64);
        (nh - n) * (nh - 2.0 * n) / (n * n * (nh - 1.0) * (nh - 2.0))
    }

    fn k2(&self) -> Result<f64> {
        let (nh, n) = (self.n_pop as f64, self.n_sample as f64);
        if self.n_pop < 4 {
            return Err(EstError::Design(format!(
                "stratum {}: N_h >= 4 required",
                self.label
            )));
        }
        Ok((nh - n) * (nh * nh + nh - 6.0 * n * nh + 6.0 * n * n)
            / (n * n * n * (nh - 1.0) * (nh - 2.0) * (nh - 3.0)))
    }

    fn k3(&self) -> Result<f64> {
        let (nh, n) = (self.n_pop as f64, self.n_sample as f64);
        if self.n_pop < 4 {
            return Err(EstError::Design(format!(
                "stratum {}: N_h >= 4 required",
                self.label
            )));
        }
        Ok(nh * (nh - n) * (nh - n - 1.0) * (n - 1.0)
            / (n * n * n * (nh - 1.0) * (nh - 2.0) * (nh - 3.0)))
    }
}

/// A stratified population with per-stratum design sizes.
#[derive(Debug, Clone)]
pub struct StratifiedPopulation {
    pub strata: Vec<Stratum>,
}

impl StratifiedPopulation {
    pub fn new(strata: Vec<Stratum>) -> Result<Self> {
        if strata.is_empty() {
            return Err(EstError::Schema("at least one stratum required".into()));
        }
        Ok(StratifiedPopulation { strata })
    }

    pub fn n_pop(&self) -> usize {
        self.strata.iter().map(|s| s.n_pop).sum()
    }

    /// Stratum weight W_h = N_h / N. Weights sum to one by construction.
    pub fn weight(&self, h: usize) -> f64 {
        self.strata[h].n_pop as f64 / self.n_pop() as f64
    }

    /// Population mean of y, Σ W_h Ȳ_h.
    pub fn mean_y(&self) -> f64 {
        (0..self.strata.len())
            .map(|h| self.weight(h) * self.strata[h].mean_y())
            .sum()
    }

    pub fn mean_x(&self) -> f64 {
        (0..self.strata.len())
            .map(|h| self.weight(h) * self.strata[h].mean_x())
            .sum()
    }
}

/// Stratified product-moment quantity `V_rs`.
///
/// First index r: study (y) power; second index s: auxiliary (x) power.
/// Order r+s = 2 uses `γ_h`-weighted variances/covariances; order 3 uses
/// `k1(h)`; order 4 combines `k2(h)` and `k3(h)` exactly as the SRSWOR
/// fourth-moment identities do, stratum by stratum. All quantities are
/// normalized by the global means `Ȳ^r X̄^s`.
pub fn stratified_vrs(strat: &StratifiedPopulation, r: u32, s: u32) -> Result<f64> {
    let order = r + s;
    let my = strat.mean_y();
    let mx = strat.mean_x();
    if (r > 0 && my == 0.0) || (s > 0 && mx == 0.0) {
        return Err(EstError::DegenerateMoment(
            "zero global mean in V_rs denominator".into(),
        ));
    }
    let norm = my.powi(r as i32) * mx.powi(s as i32);
    let mut total = 0.0;
    for (h, st) in strat.strata.iter().enumerate() {
        let w = strat.weight(h).powi(order as i32);
        let term = match order {
            2 => {
                // Divisor N_h - 1 mean squares with gamma_h, the textbook
                // stratified variance form; identical to k-style weighting.
                let nh = st.n_pop as f64;
                st.gamma() * st.mu(r, s)? * nh / (nh - 1.0)
            }
            3 => st.k1() * st.mu(r, s)?,
            4 => {
                let k2 = st.k2()?;
                let k3 = st.k3()?;
                match (r, s) {
                    (0, 4) => k2 * st.mu(0, 4)? + 3.0 * k3 * st.mu(0, 2)?.powi(2),
                    (4, 0) => k2 * st.mu(4, 0)? + 3.0 * k3 * st.mu(2, 0)?.powi(2),
                    (1, 3) => k2 * st.mu(1, 3)? + 3.0 * k3 * st.mu(0, 2)? * st.mu(1, 1)?,
                    (3, 1) => k2 * st.mu(3, 1)? + 3.0 * k3 * st.mu(2, 0)? * st.mu(1, 1)?,
                    (2, 2) => {
                        k2 * st.mu(2, 2)?
                            + k3 * (st.mu(2, 0)? * st.mu(0, 2)? + 2.0 * st.mu(1, 1)?.powi(2))
                    }
                    _ => {
                        return Err(EstError::Domain(format!(
                            "V_rs not defined for fourth-order index ({r},{s})"
                        )))
                    }
                }
            }
            _ => {
                return Err(EstError::Domain(format!(
                    "V_rs defined for 2 <= r+s <= 4, got ({r},{s})"
                )))
            }
        };
        total += w * term;
    }
    Ok(total / norm)
}

/// The product-moment expectations a mean-estimator expansion consumes.
///
/// `ee_*` names follow the relative errors: `ee_x2y = E[e1² e0]`, etc.
/// In SRS these are `L_i C_pq` combinations; in stratified sampling the
/// corresponding `V_rs`. The fourth-order mixed moment `E[e1² e0²]` uses
/// `L3 C_22 + L4 (C_20 C_02 + 2 C_11²)`, the form that enumeration
/// confirms exact (see the oracle tests).
#[derive(Debug, Clone, Copy)]
pub struct ExpansionMoments {
    pub ee_y2: f64,
    pub ee_x2: f64,
    pub ee_xy: f64,
    pub ee_x2y: f64,
    pub ee_x3: f64,
    pub ee_xy2: f64,
    pub ee_x4: f64,
    pub ee_x3y: f64,
    pub ee_x2y2: f64,
}

impl ExpansionMoments {
    /// First-order slots from an SRS moment table; higher slots zero.
    pub fn srs_first_order(moments: &MomentTable, coeffs: &DesignCoefficients) -> Result<Self> {
        Ok(ExpansionMoments {
            ee_y2: coeffs.l1 * moments.c(0, 2)?,
            ee_x2: coeffs.l1 * moments.c(2, 0)?,
            ee_xy: coeffs.l1 * moments.c(1, 1)?,
            ee_x2y: 0.0,
            ee_x3: 0.0,
            ee_xy2: 0.0,
            ee_x4: 0.0,
            ee_x3y: 0.0,
            ee_x2y2: 0.0,
        })
    }

    /// All slots, through fourth order, from an SRS moment table.
    pub fn srs_second_order(moments: &MomentTable, coeffs: &DesignCoefficients) -> Result<Self> {
        let l3 = coeffs.require_l3()?;
        let l4 = coeffs.require_l4()?;
        let c20 = moments.c(2, 0)?;
        let c02 = moments.c(0, 2)?;
        let c11 = moments.c(1, 1)?;
        Ok(ExpansionMoments {
            ee_y2: coeffs.l1 * c02,
            ee_x2: coeffs.l1 * c20,
            ee_xy: coeffs.l1 * c11,
            ee_x2y: coeffs.l2 * moments.c(2, 1)?,
            ee_x3: coeffs.l2 * moments.c(3, 0)?,
            ee_xy2: coeffs.l2 * moments.c(1, 2)?,
            ee_x4: l3 * moments.c(4, 0)? + 3.0 * l4 * c20 * c20,
            ee_x3y: l3 * moments.c(3, 1)? + 3.0 * l4 * c20 * c11,
            ee_x2y2: l3 * moments.c(2, 2)? + l4 * (c20 * c02 + 2.0 * c11 * c11),
        })
    }

    /// First-order slots from a stratified population.
    pub fn stratified_first_order(strat: &StratifiedPopulation) -> Result<Self> {
        Ok(ExpansionMoments {
            ee_y2: stratified_vrs(strat, 2, 0)?,
            ee_x2: stratified_vrs(strat, 0, 2)?,
            ee_xy: stratified_vrs(strat, 1, 1)?,
            ee_x2y: 0.0,
            ee_x3: 0.0,
            ee_xy2: 0.0,
            ee_x4: 0.0,
            ee_x3y: 0.0,
            ee_x2y2: 0.0,
        })
    }

    /// All slots from a stratified population.
    pub fn stratified_second_order(strat: &StratifiedPopulation) -> Result<Self> {
        Ok(ExpansionMoments {
            ee_y2: stratified_vrs(strat, 2, 0)?,
            ee_x2: stratified_vrs(strat, 0, 2)?,
            ee_xy: stratified_vrs(strat, 1, 1)?,
            ee_x2y: stratified_vrs(strat, 1, 2)?,
            ee_x3: stratified_vrs(strat, 0, 3)?,
            ee_xy2: stratified_vrs(strat, 2, 1)?,
            ee_x4: stratified_vrs(strat, 0, 4)?,
            ee_x3y: stratified_vrs(strat, 1, 3)?,
            ee_x2y2: stratified_vrs(strat, 2, 2)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pop_x_y_squared() -> FinitePopulation {
        let x: Vec<f64> = (1..=6).map(|v| v as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| v * v).collect();
        FinitePopulation::from_xy(x, y).unwrap()
    }

    #[test]
    fn first_order_central_moment_is_zero() {
        let pop = pop_x_y_squared();
        assert!(cpq(&pop, 1, 0, Divisor::N).unwrap().abs() < 1e-14);
        assert!(cpq(&pop, 0, 1, Divisor::N).unwrap().abs() < 1e-14);
    }

    #[test]
    fn identical_columns_give_c11_equal_c20() {
        let y = vec![2.0, 4.0, 7.0, 9.0];
        let pop = FinitePopulation::from_xy(y.clone(), y).unwrap();
        let c11 = cpq(&pop, 1, 1, Divisor::N).unwrap();
        let c20 = cpq(&pop, 2, 0, Divisor::N).unwrap();
        assert!((c11 - c20).abs() < 1e-14);
    }

    #[test]
    fn c21_definition_matches_expanded_sums() {
        // Second route: mu21 = E[x^2 y] - my E[x^2] - 2 mx E[xy] + 2 mx^2 my,
        // built from raw power sums instead of centered products.
        let pop = pop_x_y_squared();
        let (x, y) = (pop.x().unwrap(), pop.y());
        let n = pop.n_units() as f64;
        let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
        let e_xxy: f64 = x.iter().zip(y).map(|(&a, &b)| a * a * b).sum::<f64>() / n;
        let e_xy: f64 = x.iter().zip(y).map(|(&a, &b)| a * b).sum::<f64>() / n;
        let e_xx: f64 = x.iter().map(|&a| a * a).sum::<f64>() / n;
        let mu21_expanded = e_xxy - my * e_xx - 2.0 * mx * e_xy + 2.0 * mx * mx * my;
        let c21 = cpq(&pop, 2, 1, Divisor::N).unwrap();
        let c21_expanded = mu21_expanded / (mx * mx * my);
        assert!(
            (c21 - c21_expanded).abs() <= 1e-12 * c21.abs().max(1.0),
            "{c21} vs {c21_expanded}"
        );
    }

    #[test]
    fn self_normalized_partials_are_one() {
        let x: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| 2.0 * v + 1.0).collect();
        let z: Vec<f64> = x.iter().map(|&v| 30.0 - v * v).collect();
        let pop = FinitePopulation::from_xyz(x, y, z).unwrap();
        let t = PartialMomentTable::from_population(&pop).unwrap();
        for idx in [(2, 0, 0), (0, 2, 0), (0, 0, 2)] {
            assert!((t.partial(idx.0, idx.1, idx.2).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_synthetic_data_has_kurtosis_near_three() {
        use rand::prelude::*;
        use rand_distr::StandardNormal;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(12);
        let n = 20_000;
        let y: Vec<f64> = (0..n)
            .map(|_| 5.0 + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let x: Vec<f64> = (0..n)
            .map(|_| 3.0 + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let z: Vec<f64> = (0..n)
            .map(|_| 7.0 + rng.sample::<f64, _>(StandardNormal))
            .collect();
        let t = PartialMomentTable::from_population(&FinitePopulation::from_xyz(x, y, z).unwrap())
            .unwrap();
        // Fourth standardized moment of a normal is 3; sampling noise at
        // this N is a few percent.
        assert!((t.partial(4, 0, 0).unwrap() - 3.0).abs() < 0.15);
    }

    #[test]
    fn starred_is_partial_minus_one() {
        let t = PartialMomentTable::from_entries([((4, 0, 0), 3.726)]);
        assert!((t.starred(4, 0, 0).unwrap() - 2.726).abs() < 1e-15);
        assert!(t.starred(1, 1, 0).is_err());
    }

    #[test]
    fn single_stratum_v20_matches_srs_relative_variance() {
        let y = vec![4.0, 7.0, 1.0, 9.0, 5.0, 6.0, 8.0, 2.0];
        let x = vec![2.0, 5.0, 1.0, 7.0, 3.0, 4.0, 6.0, 2.5];
        let strat =
            StratifiedPopulation::new(vec![
                Stratum::from_raw("only", 3, y.clone(), x.clone()).unwrap()
            ])
            .unwrap();
        let pop = FinitePopulation::from_xy(x, y).unwrap();
        let coeffs = DesignCoefficients::new(8, 3, None).unwrap();
        let table = MomentTable::from_population(&pop, Divisor::N).unwrap();
        let v20 = stratified_vrs(&strat, 2, 0).unwrap();
        let srs = coeffs.l1 * table.c(0, 2).unwrap();
        assert!((v20 - srs).abs() <= 1e-12 * srs.abs());
    }

    #[test]
    fn two_identical_strata_scale_v11() {
        let y = vec![4.0, 7.0, 1.0, 9.0, 5.0, 6.0];
        let x = vec![2.0, 5.0, 1.0, 7.0, 3.0, 4.0];
        let s1 = Stratum::from_raw("a", 2, y.clone(), x.clone()).unwrap();
        let s2 = Stratum::from_raw("b", 2, y.clone(), x.clone()).unwrap();
        let strat = StratifiedPopulation::new(vec![s1, s2]).unwrap();
        // Hand-expanded two-term sum: each stratum contributes
        // W^2 gamma S_xy / (Ybar Xbar) with W = 1/2 and the same moments.
        let n = y.len() as f64;
        let (my, mx) = (y.iter().sum::<f64>() / n, x.iter().sum::<f64>() / n);
        let sxy: f64 = y
            .iter()
            .zip(&x)
            .map(|(&a, &b)| (a - my) * (b - mx))
            .sum::<f64>()
            / (n - 1.0);
        let gamma = (1.0 - 2.0 / 6.0) / 2.0;
        let expect = 2.0 * 0.25 * gamma * sxy / (my * mx);
        let v11 = stratified_vrs(&strat, 1, 1).unwrap();
        assert!((v11 - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn constant_y_gives_zero_v20() {
        let y = vec![5.0; 6];
        let x = vec![2.0, 5.0, 1.0, 7.0, 3.0, 4.0];
        let strat =
            StratifiedPopulation::new(vec![Stratum::from_raw("c", 2, y, x).unwrap()]).unwrap();
        assert_eq!(stratified_vrs(&strat, 2, 0).unwrap(), 0.0);
    }

    #[test]
    fn missing_supplied_moment_names_stratum() {
        let mut mu = BTreeMap::new();
        mu.insert((2, 0), 1.0);
        let st = Stratum {
            label: "farms".into(),
            n_pop: 10,
            n_sample: 3,
            data: StratumData::Moments {
                mean_y: 5.0,
                mean_x: 3.0,
                mu,
            },
        };
        let strat = StratifiedPopulation::new(vec![st]).unwrap();
        let err = stratified_vrs(&strat, 0, 2).unwrap_err();
        assert!(err.to_string().contains("farms"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // Rescaling x by c > 0 leaves every C_pq unchanged (numerator and
        // denominator both scale by c^p).
        #[test]
        fn cpq_scale_invariant(seed in 0u64..500, scale in 0.1f64..10.0) {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let n = 9;
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..20.0)).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..20.0)).collect();
            let pop = FinitePopulation::from_xy(x.clone(), y.clone()).unwrap();
            let scaled = FinitePopulation::from_xy(
                x.iter().map(|&v| v * scale).collect(),
                y,
            ).unwrap();
            for (p, q) in [(2, 0), (1, 1), (2, 1), (3, 0), (2, 2), (4, 0)] {
                let a = cpq(&pop, p, q, Divisor::N).unwrap();
                let b = cpq(&scaled, p, q, Divisor::N).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "C_{}{}: {} vs {}", p, q, a, b);
            }
        }

        // Kurtosis bound: mu_400 >= mu_200^2, i.e. the standardized fourth
        // moment is at least one on any real data.
        #[test]
        fn kurtosis_bound_holds(seed in 0u64..500) {
            use rand::prelude::*;
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let n = 20;
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..10.0)).collect();
            let z: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..10.0)).collect();
            if let Ok(t) = PartialMomentTable::from_population(
                &FinitePopulation::from_xyz(x, y, z).unwrap(),
            ) {
                prop_assert!(t.partial(4, 0, 0).unwrap() >= 1.0 - 1e-12);
                prop_assert!(t.partial(0, 4, 0).unwrap() >= 1.0 - 1e-12);
                prop_assert!(t.partial(0, 0, 4).unwrap() >= 1.0 - 1e-12);
            }
        }
    }
}
