//! Systematic sampling under non-response.
//!
//! The population is listed in a fixed order with `N = n·k`; a random
//! start in `0..k` picks every k-th unit. Non-response on the study
//! variable is handled by the Hansen–Hurwitz follow-up (observe the n1
//! respondents, subsample 1/L of the n2 non-respondents), which adds
//! `((L−1)/n) W2 S²_{Y2}` to every estimator variance. The auxiliary
//! variable is assumed free of non-response.
//!
//! The one-parameter factor-type family
//!
//! ```text
//! T_α = ȳ* [ (A + C) X̄ + f B x̄ ] / [ (A + f B) X̄ + C x̄ ]
//! A = (α−1)(α−2)   B = (α−1)(α−4)   C = (α−2)(α−3)(α−4)
//! ```
//!
//! interpolates the ratio (α = 1), product (α = 2), dual-to-ratio (α = 3)
//! and plain-mean (α = 4) estimators. Its first-order MSE is minimized
//! where `φ(α) = ρ* K`, a cubic equation in α solved here through the
//! companion-matrix eigenvalues of the cleared-denominator polynomial.

use nalgebra::Matrix3;

use crate::error::{EstError, Result};
use crate::population::FinitePopulation;

/// Population-level inputs for systematic sampling formulas.
///
/// `rho_y`, `rho_x` are the intraclass correlations between pairs of
/// units inside one systematic sample, defined through
/// `V(ȳ_sys) = ((N−1)/(nN)) (1 + (n−1)ρ) S²`.
#[derive(Debug, Clone, Copy)]
pub struct SystematicSummary {
    pub n_pop: usize,
    pub n_sample: usize,
    pub k: usize,
    pub rho_y: f64,
    pub rho_x: f64,
    pub mean_y: f64,
    pub mean_x: f64,
    /// Population mean squares (divisor N − 1).
    pub s_y2: f64,
    pub s_x2: f64,
    /// Unit-level correlation between y and x.
    pub rho: f64,
}

impl SystematicSummary {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n_pop: usize,
        n_sample: usize,
        rho_y: f64,
        rho_x: f64,
        mean_y: f64,
        mean_x: f64,
        s_y2: f64,
        s_x2: f64,
        rho: f64,
    ) -> Result<Self> {
        if n_sample == 0 || !n_pop.is_multiple_of(n_sample) {
            return Err(EstError::Design(format!(
                "systematic sampling needs N = n*k, got N = {n_pop}, n = {n_sample}"
            )));
        }
        let n = n_sample as f64;
        if 1.0 + (n - 1.0) * rho_x <= 0.0 {
            return Err(EstError::Design(format!(
                "1 + (n-1) rho_x = {} must be positive",
                1.0 + (n - 1.0) * rho_x
            )));
        }
        Ok(SystematicSummary {
            n_pop,
            n_sample,
            k: n_pop / n_sample,
            rho_y,
            rho_x,
            mean_y,
            mean_x,
            s_y2,
            s_x2,
            rho,
        })
    }

    /// Derive the summary from unit-level data: the intraclass
    /// correlations come from inverting the exact systematic-sample
    /// variance over the k starts, so the base variance identity is exact
    /// for the listed order.
    pub fn from_population(pop: &FinitePopulation, n_sample: usize) -> Result<Self> {
        let x = pop.require_x()?;
        let y = pop.y();
        let n_pop = pop.n_units();
        if n_sample == 0 || !n_pop.is_multiple_of(n_sample) {
            return Err(EstError::Design(format!(
                "systematic sampling needs N = n*k, got N = {n_pop}, n = {n_sample}"
            )));
        }
        let k = n_pop / n_sample;
        let nf = n_pop as f64;
        let n = n_sample as f64;
        let mean = |col: &[f64]| col.iter().sum::<f64>() / nf;
        let (my, mx) = (mean(y), mean(x));
        let s2 =
            |col: &[f64], m: f64| col.iter().map(|&v| (v - m) * (v - m)).sum::<f64>() / (nf - 1.0);
        let (s_y2, s_x2) = (s2(y, my), s2(x, mx));
        let cov: f64 = y
            .iter()
            .zip(x)
            .map(|(&yi, &xi)| (yi - my) * (xi - mx))
            .sum::<f64>()
            / (nf - 1.0);
        let exact_var = |col: &[f64], m: f64| -> f64 {
            (0..k)
                .map(|start| {
                    let s: f64 = (0..n_sample).map(|j| col[start + j * k]).sum();
                    let sm = s / n;
                    (sm - m) * (sm - m)
                })
                .sum::<f64>()
                / k as f64
        };
        let invert = |v: f64, s2v: f64| ((v * n * nf) / ((nf - 1.0) * s2v) - 1.0) / (n - 1.0);
        let rho_y = invert(exact_var(y, my), s_y2);
        let rho_x = invert(exact_var(x, mx), s_x2);
        SystematicSummary::new(
            n_pop,
            n_sample,
            rho_y,
            rho_x,
            my,
            mx,
            s_y2,
            s_x2,
            cov / (s_y2.sqrt() * s_x2.sqrt()),
        )
    }

    fn n(&self) -> f64 {
        self.n_sample as f64
    }

    fn nf(&self) -> f64 {
        self.n_pop as f64
    }

    /// (N−1)/(nN), the systematic design factor.
    fn design_factor(&self) -> f64 {
        (self.nf() - 1.0) / (self.n() * self.nf())
    }

    fn y_factor(&self) -> f64 {
        1.0 + (self.n() - 1.0) * self.rho_y
    }

    fn x_factor(&self) -> f64 {
        1.0 + (self.n() - 1.0) * self.rho_x
    }

    /// `ρ* = sqrt{(1+(n−1)ρY) / (1+(n−1)ρX)}`.
    pub fn rho_star(&self) -> f64 {
        (self.y_factor() / self.x_factor()).sqrt()
    }

    pub fn cv_y(&self) -> f64 {
        self.s_y2.sqrt() / self.mean_y.abs()
    }

    pub fn cv_x(&self) -> f64 {
        self.s_x2.sqrt() / self.mean_x.abs()
    }

    /// `K = ρ C_Y / C_X`.
    pub fn k_const(&self) -> f64 {
        self.rho * self.cv_y() / self.cv_x()
    }

    pub fn f(&self) -> f64 {
        self.n() / self.nf()
    }
}

/// Non-response regime: rate, inverse subsampling fraction and the
/// non-response-stratum mean square.
#[derive(Debug, Clone, Copy)]
pub struct NonResponseSpec {
    pub w2: f64,
    pub l: f64,
    pub s_y2_nr: f64,
}

impl NonResponseSpec {
    pub fn new(w2: f64, l: f64, s_y2_nr: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w2) {
            return Err(EstError::Design(format!("W2 must lie in [0,1], got {w2}")));
        }
        if l <= 1.0 {
            return Err(EstError::Design(format!("L must exceed 1, got {l}")));
        }
        if s_y2_nr < 0.0 {
            return Err(EstError::Design(
                "non-response mean square must be >= 0".into(),
            ));
        }
        Ok(NonResponseSpec { w2, l, s_y2_nr })
    }

    /// No non-response at all (the `(L−1) W2` term vanishes).
    pub fn none() -> Self {
        NonResponseSpec {
            w2: 0.0,
            l: 2.0,
            s_y2_nr: 0.0,
        }
    }

    /// `((L−1)/n) W2 S²_{Y2}`, the additive variance penalty.
    fn penalty(&self, n: f64) -> f64 {
        (self.l - 1.0) / n * self.w2 * self.s_y2_nr
    }
}

/// Factor-type family coefficients at one α.
#[derive(Debug, Clone, Copy)]
pub struct FactorTypeParams {
    pub alpha: f64,
    pub f: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `φ1 = fB / (A + fB + C)`.
    pub phi1: f64,
    /// `φ2 = C / (A + fB + C)` (also the expansion constant D).
    pub phi2: f64,
    /// `φ = φ2 − φ1`; takes values 1, −1, f/(1−f), 0 at α = 1, 2, 3, 4.
    pub phi: f64,
}

/// Evaluate the A, B, C polynomials and the φ fractions at α.
pub fn factor_coefficients(alpha: f64, f: f64) -> Result<FactorTypeParams> {
    if alpha <= 0.0 {
        return Err(EstError::Domain(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    let a = (alpha - 1.0) * (alpha - 2.0);
    let b = (alpha - 1.0) * (alpha - 4.0);
    let c = (alpha - 2.0) * (alpha - 3.0) * (alpha - 4.0);
    let denom = a + f * b + c;
    if denom.abs() < 1e-12 {
        return Err(EstError::SingularFamily { alpha });
    }
    Ok(FactorTypeParams {
        alpha,
        f,
        a,
        b,
        c,
        phi1: f * b / denom,
        phi2: c / denom,
        phi: (c - f * b) / denom,
    })
}

/// Point estimate `T_α`.
pub fn factor_point(
    y_bar_star: f64,
    xbar: f64,
    pop_mean_x: f64,
    alpha: f64,
    f: f64,
) -> Result<f64> {
    let p = factor_coefficients(alpha, f)?;
    let denom = (p.a + f * p.b) * pop_mean_x + p.c * xbar;
    if denom == 0.0 {
        return Err(EstError::SingularInput(
            "factor-type denominator (A+fB) X̄ + C x̄ is zero".into(),
        ));
    }
    Ok(y_bar_star * ((p.a + p.c) * pop_mean_x + f * p.b * xbar) / denom)
}

/// Variances of the adjusted mean ȳ* and of x̄ under systematic sampling.
#[derive(Debug, Clone, Copy)]
pub struct BaseVariances {
    pub var_y_star: f64,
    pub var_x_bar: f64,
}

/// `V(ȳ*) = ((N−1)/(nN)) (1+(n−1)ρY) S_Y² + ((L−1)/n) W2 S²_{Y2}` and the
/// analogous x̄ variance without the non-response term.
pub fn sys_base_variances(sum: &SystematicSummary, nr: &NonResponseSpec) -> BaseVariances {
    let base = sum.design_factor();
    BaseVariances {
        var_y_star: base * sum.y_factor() * sum.s_y2 + nr.penalty(sum.n()),
        var_x_bar: base * sum.x_factor() * sum.s_x2,
    }
}

/// Comparator estimators under systematic sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SysEstimator {
    Ratio,
    Product,
    DualRatio,
    Regression,
}

impl SysEstimator {
    pub fn label(&self) -> &'static str {
        match self {
            SysEstimator::Ratio => "ratio",
            SysEstimator::Product => "product",
            SysEstimator::DualRatio => "dual-ratio",
            SysEstimator::Regression => "regression",
        }
    }
}

/// One comparator row (the regression estimator carries no bias term).
#[derive(Debug, Clone)]
pub struct SysReport {
    pub estimator: SysEstimator,
    pub bias1: Option<f64>,
    pub mse1: f64,
}

/// First-order bias/MSE of the ratio, product, dual-to-ratio and
/// regression estimators, each MSE carrying the non-response penalty.
pub fn sys_classical_report(sum: &SystematicSummary, nr: &NonResponseSpec) -> Vec<SysReport> {
    let base = sum.design_factor() * sum.x_factor();
    let cx2 = sum.cv_x() * sum.cv_x();
    let cy2 = sum.cv_y() * sum.cv_y();
    let rs = sum.rho_star();
    let kc = sum.k_const();
    let pen = nr.penalty(sum.n());
    let g = sum.f() / (1.0 - sum.f());
    let ybar2 = sum.mean_y * sum.mean_y;
    vec![
        SysReport {
            estimator: SysEstimator::Ratio,
            bias1: Some(base * sum.mean_y * (1.0 - kc * rs) * cx2),
            mse1: ybar2 * base * (rs * rs * cy2 + (1.0 - 2.0 * kc * rs) * cx2) + pen,
        },
        SysReport {
            estimator: SysEstimator::Product,
            bias1: Some(base * sum.mean_y * kc * rs * cx2),
            mse1: ybar2 * base * (rs * rs * cy2 + (1.0 + 2.0 * kc * rs) * cx2) + pen,
        },
        SysReport {
            estimator: SysEstimator::DualRatio,
            bias1: Some(base * sum.mean_y * (-rs * kc) * cx2),
            mse1: ybar2 * base * (rs * rs * cy2 + g * (g - 2.0 * rs * kc) * cx2) + pen,
        },
        SysReport {
            estimator: SysEstimator::Regression,
            bias1: None,
            mse1: ybar2 * base * (cy2 - kc * kc * cx2) * rs * rs + pen,
        },
    ]
}

/// First-order bias and MSE of the factor-type member at α.
pub fn factor_report(
    alpha: f64,
    sum: &SystematicSummary,
    nr: &NonResponseSpec,
) -> Result<SysReport> {
    let p = factor_coefficients(alpha, sum.f())?;
    let base = sum.design_factor() * sum.x_factor();
    let cx2 = sum.cv_x() * sum.cv_x();
    let cy2 = sum.cv_y() * sum.cv_y();
    let rs = sum.rho_star();
    let kc = sum.k_const();
    Ok(SysReport {
        estimator: SysEstimator::Ratio,
        bias1: Some(p.phi * base * sum.mean_y * (p.phi2 - rs * kc) * cx2),
        mse1: sum.mean_y
            * sum.mean_y
            * base
            * (rs * rs * cy2 + (p.phi * p.phi - 2.0 * p.phi * rs * kc) * cx2)
            + nr.penalty(sum.n()),
    })
}

/// Real roots of `c3 x³ + c2 x² + c1 x + c0`, via the companion matrix of
/// the monic polynomial (degree drops are handled directly).
fn real_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let scale = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if scale == 0.0 {
        return vec![];
    }
    if c3.abs() <= 1e-14 * scale {
        // Quadratic (or lower).
        if c2.abs() <= 1e-14 * scale {
            if c1.abs() <= 1e-14 * scale {
                return vec![];
            }
            return vec![-c0 / c1];
        }
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            return vec![];
        }
        let r = disc.sqrt();
        return vec![(-c1 + r) / (2.0 * c2), (-c1 - r) / (2.0 * c2)];
    }
    let (a2, a1, a0) = (c2 / c3, c1 / c3, c0 / c3);
    let companion = Matrix3::new(0.0, 0.0, -a0, 1.0, 0.0, -a1, 0.0, 1.0, -a2);
    companion
        .complex_eigenvalues()
        .iter()
        .filter(|e| e.im.abs() < 1e-9 * e.re.abs().max(1.0))
        .map(|e| e.re)
        .collect()
}

/// Result of the factor-family optimality equation `φ(α) = ρ* K`.
#[derive(Debug, Clone)]
pub struct AlphaOptimum {
    /// Every admissible real root (positive, non-singular family).
    pub roots: Vec<f64>,
    /// Deterministic choice: the smallest admissible root.
    pub chosen: f64,
    /// Minimum MSE; identical to the regression-estimator MSE.
    pub min_mse: f64,
}

/// Solve `φ(α) = ρ* K` for α ≥ 0 and report the minimized MSE.
///
/// Clearing the denominator turns the equation into
/// `(1−t) C(α) − (1+t) f B(α) − t A(α) = 0` with `t = ρ* K`, a cubic in α
/// whose roots come from the companion matrix. Roots are kept when real
/// (imaginary part below 1e-9), strictly positive and non-singular.
pub fn alpha_optimum(sum: &SystematicSummary, nr: &NonResponseSpec) -> Result<AlphaOptimum> {
    let t = sum.rho_star() * sum.k_const();
    if !t.is_finite() {
        return Err(EstError::Domain("rho* K is not finite".into()));
    }
    let f = sum.f();
    // Polynomial coefficients of (1-t) C - (1+t) f B - t A in powers of alpha:
    // A = a^2 - 3a + 2, B = a^2 - 5a + 4, C = a^3 - 9a^2 + 26a - 24.
    let c3 = 1.0 - t;
    let c2 = -9.0 * (1.0 - t) - f * (1.0 + t) - t;
    let c1 = 26.0 * (1.0 - t) + 5.0 * f * (1.0 + t) + 3.0 * t;
    let c0 = -24.0 * (1.0 - t) - 4.0 * f * (1.0 + t) - 2.0 * t;
    let mut roots: Vec<f64> = real_roots(c3, c2, c1, c0)
        .into_iter()
        .filter(|&r| r > 0.0 && factor_coefficients(r, f).is_ok())
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let chosen = match roots.first() {
        Some(&r) => r,
        None => {
            return Err(EstError::NoPositiveRoot {
                roots: real_roots(c3, c2, c1, c0),
            });
        }
    };
    let base = sum.design_factor() * sum.x_factor();
    let kc = sum.k_const();
    let rs = sum.rho_star();
    let min_mse = sum.mean_y
        * sum.mean_y
        * base
        * (sum.cv_y() * sum.cv_y() - kc * kc * sum.cv_x() * sum.cv_x())
        * rs
        * rs
        + nr.penalty(sum.n());
    Ok(AlphaOptimum {
        roots,
        chosen,
        min_mse,
    })
}
