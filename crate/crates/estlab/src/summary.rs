//! Population moment summaries.
//!
//! [`summarize_numeric`] computes means, variances, covariances,
//! correlations and coefficients of variation for the numeric columns;
//! [`summarize_attributes`] does the analogous job for binary attributes
//! (proportions, point bi-serial and phi correlations, K-constants).
//!
//! The variance divisor is selectable. Published summary tables in this
//! domain nearly always use divisor `N − 1`, so that is the default.

use crate::error::{EstError, Result};
use crate::population::FinitePopulation;

/// Variance/covariance divisor convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divisor {
    /// Divide central product sums by N.
    N,
    /// Divide central product sums by N − 1 (default for summaries).
    NMinus1,
}

impl Divisor {
    pub fn denom(self, n: usize) -> f64 {
        match self {
            Divisor::N => n as f64,
            Divisor::NMinus1 => (n - 1) as f64,
        }
    }
}

/// Where a summary's numbers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummarySource {
    RawData(Divisor),
    Supplied,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn central_product(a: &[f64], ma: f64, b: &[f64], mb: f64, denom: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&ai, &bi)| (ai - ma) * (bi - mb))
        .sum::<f64>()
        / denom
}

/// Numeric summary of a population: per-column moments plus every pairwise
/// covariance/correlation that the available columns support.
#[derive(Debug, Clone)]
pub struct SummaryStats {
    pub source: SummarySource,
    pub n_units: usize,
    pub mean_y: f64,
    pub var_y: f64,
    pub cv_y: f64,
    pub mean_x: Option<f64>,
    pub var_x: Option<f64>,
    pub cv_x: Option<f64>,
    pub mean_z: Option<f64>,
    pub var_z: Option<f64>,
    pub cv_z: Option<f64>,
    pub cov_yx: Option<f64>,
    pub rho_yx: Option<f64>,
    /// R1 = meanY / meanX.
    pub ratio_r1: Option<f64>,
    pub cov_yz: Option<f64>,
    pub rho_yz: Option<f64>,
    /// R2 = meanY / meanZ.
    pub ratio_r2: Option<f64>,
    pub cov_zx: Option<f64>,
    pub rho_zx: Option<f64>,
}

impl SummaryStats {
    /// Assemble a summary from published constants (variances and
    /// correlations); covariances are derived as `rho * sqrt(var*var)`.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n_units: usize,
        mean_y: f64,
        mean_x: f64,
        mean_z: f64,
        var_y: f64,
        var_x: f64,
        var_z: f64,
        rho_yx: f64,
        rho_yz: f64,
        rho_zx: f64,
    ) -> Self {
        let sd = |v: f64| v.sqrt();
        SummaryStats {
            source: SummarySource::Supplied,
            n_units,
            mean_y,
            var_y,
            cv_y: sd(var_y) / mean_y.abs(),
            mean_x: Some(mean_x),
            var_x: Some(var_x),
            cv_x: Some(sd(var_x) / mean_x.abs()),
            mean_z: Some(mean_z),
            var_z: Some(var_z),
            cv_z: Some(sd(var_z) / mean_z.abs()),
            cov_yx: Some(rho_yx * sd(var_y) * sd(var_x)),
            rho_yx: Some(rho_yx),
            ratio_r1: Some(mean_y / mean_x),
            cov_yz: Some(rho_yz * sd(var_y) * sd(var_z)),
            rho_yz: Some(rho_yz),
            ratio_r2: Some(mean_y / mean_z),
            cov_zx: Some(rho_zx * sd(var_z) * sd(var_x)),
            rho_zx: Some(rho_zx),
        }
    }

    fn need(&self, field: Option<f64>, name: &str) -> Result<f64> {
        field.ok_or_else(|| EstError::IncompleteInput(name.into()))
    }

    pub fn require_x_block(&self) -> Result<(f64, f64, f64, f64)> {
        Ok((
            self.need(self.mean_x, "meanX")?,
            self.need(self.var_x, "varX")?,
            self.need(self.cov_yx, "covYX")?,
            self.need(self.ratio_r1, "ratioR1")?,
        ))
    }

    pub fn require_z_block(&self) -> Result<(f64, f64, f64, f64)> {
        Ok((
            self.need(self.mean_z, "meanZ")?,
            self.need(self.var_z, "varZ")?,
            self.need(self.cov_yz, "covYZ")?,
            self.need(self.ratio_r2, "ratioR2")?,
        ))
    }

    pub fn require_cov_zx(&self) -> Result<f64> {
        self.need(self.cov_zx, "covZX")
    }
}

/// Compute the numeric summary of a population.
///
/// Requires `y` and at least one of `x`, `z`. A correlation is only
/// populated when both variances are strictly positive; a zero variance
/// with a requested correlation is reported as a degenerate moment.
pub fn summarize_numeric(pop: &FinitePopulation, divisor: Divisor) -> Result<SummaryStats> {
    if pop.x().is_none() && pop.z().is_none() {
        return Err(EstError::Schema(
            "summarize_numeric needs at least one auxiliary column (x or z)".into(),
        ));
    }
    let n = pop.n_units();
    let denom = divisor.denom(n);
    let y = pop.y();
    let mean_y = mean(y);
    let var_y = central_product(y, mean_y, y, mean_y, denom);

    let corr = |cov: f64, va: f64, vb: f64, col: &str| -> Result<f64> {
        if va <= 0.0 || vb <= 0.0 {
            return Err(EstError::DegenerateMoment(format!(
                "zero variance in column {col} while computing a correlation"
            )));
        }
        Ok(cov / (va.sqrt() * vb.sqrt()))
    };

    let mut stats = SummaryStats {
        source: SummarySource::RawData(divisor),
        n_units: n,
        mean_y,
        var_y,
        cv_y: if mean_y != 0.0 {
            var_y.sqrt() / mean_y.abs()
        } else {
            f64::NAN
        },
        mean_x: None,
        var_x: None,
        cv_x: None,
        mean_z: None,
        var_z: None,
        cv_z: None,
        cov_yx: None,
        rho_yx: None,
        ratio_r1: None,
        cov_yz: None,
        rho_yz: None,
        ratio_r2: None,
        cov_zx: None,
        rho_zx: None,
    };

    if let Some(x) = pop.x() {
        let mean_x = mean(x);
        let var_x = central_product(x, mean_x, x, mean_x, denom);
        let cov_yx = central_product(y, mean_y, x, mean_x, denom);
        stats.mean_x = Some(mean_x);
        stats.var_x = Some(var_x);
        stats.cv_x = Some(if mean_x != 0.0 {
            var_x.sqrt() / mean_x.abs()
        } else {
            f64::NAN
        });
        stats.cov_yx = Some(cov_yx);
        stats.rho_yx = Some(corr(cov_yx, var_y, var_x, "x")?);
        stats.ratio_r1 = Some(mean_y / mean_x);
    }
    if let Some(z) = pop.z() {
        let mean_z = mean(z);
        let var_z = central_product(z, mean_z, z, mean_z, denom);
        let cov_yz = central_product(y, mean_y, z, mean_z, denom);
        stats.mean_z = Some(mean_z);
        stats.var_z = Some(var_z);
        stats.cv_z = Some(if mean_z != 0.0 {
            var_z.sqrt() / mean_z.abs()
        } else {
            f64::NAN
        });
        stats.cov_yz = Some(cov_yz);
        stats.rho_yz = Some(corr(cov_yz, var_y, var_z, "z")?);
        stats.ratio_r2 = Some(mean_y / mean_z);
    }
    if let (Some(x), Some(z)) = (pop.x(), pop.z()) {
        let (mx, mz) = (stats.mean_x.unwrap(), stats.mean_z.unwrap());
        let cov_zx = central_product(z, mz, x, mx, denom);
        stats.cov_zx = Some(cov_zx);
        stats.rho_zx = Some(corr(
            cov_zx,
            stats.var_z.unwrap(),
            stats.var_x.unwrap(),
            "zx",
        )?);
    }
    Ok(stats)
}

/// Attribute summary: proportions, attribute variances, point bi-serial
/// and phi correlations, and the K-constants used by the attribute
/// estimator formulas (`K_pb_j = rho_pb_j C_y / C_p_j`,
/// `K_phi = rho_phi C_p1 / C_p2`).
#[derive(Debug, Clone)]
pub struct AttributeSummary {
    pub source: SummarySource,
    pub n_units: usize,
    pub p1: f64,
    pub p2: f64,
    pub var_phi1: f64,
    pub var_phi2: f64,
    pub cov_y_phi1: f64,
    pub cov_y_phi2: f64,
    pub cov_phi1_phi2: f64,
    pub rho_pb1: f64,
    pub rho_pb2: f64,
    pub rho_phi: f64,
    pub cv_y: f64,
    pub cv_p1: f64,
    pub cv_p2: f64,
    pub k_pb1: f64,
    pub k_pb2: f64,
    pub k_phi: f64,
}

impl AttributeSummary {
    /// Assemble from published constants. `mean_y` is needed to form
    /// `C_y`; it is not stored (callers pass the mean explicitly wherever
    /// a formula needs it).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        n_units: usize,
        mean_y: f64,
        var_y: f64,
        p1: f64,
        p2: f64,
        var_phi1: f64,
        var_phi2: f64,
        rho_pb1: f64,
        rho_pb2: f64,
        rho_phi: f64,
    ) -> Result<Self> {
        for (name, p) in [("P1", p1), ("P2", p2)] {
            if p <= 0.0 || p >= 1.0 {
                return Err(EstError::DegenerateProportion(format!(
                    "{name} = {p} must lie strictly inside (0, 1)"
                )));
            }
        }
        let (s_y, s1, s2) = (var_y.sqrt(), var_phi1.sqrt(), var_phi2.sqrt());
        let (cv_y, cv_p1, cv_p2) = (s_y / mean_y.abs(), s1 / p1, s2 / p2);
        Ok(AttributeSummary {
            source: SummarySource::Supplied,
            n_units,
            p1,
            p2,
            var_phi1,
            var_phi2,
            cov_y_phi1: rho_pb1 * s_y * s1,
            cov_y_phi2: rho_pb2 * s_y * s2,
            cov_phi1_phi2: rho_phi * s1 * s2,
            rho_pb1,
            rho_pb2,
            rho_phi,
            cv_y,
            cv_p1,
            cv_p2,
            k_pb1: rho_pb1 * cv_y / cv_p1,
            k_pb2: rho_pb2 * cv_y / cv_p2,
            k_phi: rho_phi * cv_p1 / cv_p2,
        })
    }
}

/// Compute the attribute summary from raw 0/1 columns.
pub fn summarize_attributes(pop: &FinitePopulation, divisor: Divisor) -> Result<AttributeSummary> {
    let (phi1, phi2) = pop.require_phi()?;
    let n = pop.n_units();
    let denom = divisor.denom(n);
    let y = pop.y();
    let mean_y = mean(y);
    let var_y = central_product(y, mean_y, y, mean_y, denom);

    let f1: Vec<f64> = phi1.iter().map(|&b| b as f64).collect();
    let f2: Vec<f64> = phi2.iter().map(|&b| b as f64).collect();
    let p1 = mean(&f1);
    let p2 = mean(&f2);
    for (name, p) in [("P1", p1), ("P2", p2)] {
        if p == 0.0 || p == 1.0 {
            return Err(EstError::DegenerateProportion(format!(
                "{name} = {p}: attribute is constant, cvP undefined"
            )));
        }
    }
    let var_phi1 = central_product(&f1, p1, &f1, p1, denom);
    let var_phi2 = central_product(&f2, p2, &f2, p2, denom);
    let cov_y_phi1 = central_product(y, mean_y, &f1, p1, denom);
    let cov_y_phi2 = central_product(y, mean_y, &f2, p2, denom);
    let cov_phi1_phi2 = central_product(&f1, p1, &f2, p2, denom);
    if var_y <= 0.0 {
        return Err(EstError::DegenerateMoment(
            "zero variance in column y".into(),
        ));
    }
    let (s_y, s1, s2) = (var_y.sqrt(), var_phi1.sqrt(), var_phi2.sqrt());
    let (cv_y, cv_p1, cv_p2) = (s_y / mean_y.abs(), s1 / p1, s2 / p2);
    let rho_pb1 = cov_y_phi1 / (s_y * s1);
    let rho_pb2 = cov_y_phi2 / (s_y * s2);
    let rho_phi = cov_phi1_phi2 / (s1 * s2);
    Ok(AttributeSummary {
        source: SummarySource::RawData(divisor),
        n_units: n,
        p1,
        p2,
        var_phi1,
        var_phi2,
        cov_y_phi1,
        cov_y_phi2,
        cov_phi1_phi2,
        rho_pb1,
        rho_pb2,
        rho_phi,
        cv_y,
        cv_p1,
        cv_p2,
        k_pb1: rho_pb1 * cv_y / cv_p1,
        k_pb2: rho_pb2 * cv_y / cv_p2,
        k_phi: rho_phi * cv_p1 / cv_p2,
    })
}
