//! Dual (transformed-auxiliary) estimators of the population mean with
//! two auxiliary variables.
//!
//! The dual transform replaces the auxiliary mean by
//! `x̄* = (1+g) X̄ − g x̄` with `g = n/(N−n)`, reversing the sign of its
//! correlation with ȳ while staying unbiased for X̄. On top of the usual
//! ratio/product/ratio-cum-product estimators and their duals, the
//! θ-family mixes the dual ratio-cum-product factor and its reciprocal:
//!
//! ```text
//! ȳ_PR(θ) = ȳ [ θ (x̄*/X̄)(Z̄/z̄*) + (1−θ) (X̄/x̄*)(z̄*/Z̄) ]
//! ```
//!
//! First-order MSEs are λ-scaled quadratics in `A = 1 − 2θ` built from
//! `C = R1²Sx² − 2R1R2Szx + R2²Sz²` (a variance of `R1x − R2z`, hence
//! nonnegative on real data) and `D = R1Syx − R2Syz`.

use crate::design::DesignCoefficients;
use crate::error::{EstError, Result};
use crate::summary::SummaryStats;

/// θ-family parameter; `A = 1 − 2θ` is always recomputed on read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPrParams {
    pub theta: f64,
}

impl DualPrParams {
    pub fn new(theta: f64) -> Self {
        DualPrParams { theta }
    }

    pub fn a(&self) -> f64 {
        1.0 - 2.0 * self.theta
    }
}

/// The quadratic structure of the θ-family MSE, plus its optimum.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticSummary {
    /// `C = R1²Sx² − 2R1R2Szx + R2²Sz²`.
    pub c: f64,
    /// `D = R1Syx − R2Syz`.
    pub d: f64,
    /// CV form `C* = Cx² + Cz² − 2ρzx Cz Cx` (= C/Ȳ²).
    pub c_star: f64,
    /// CV form `D* = ρyx Cx − ρyz Cz`.
    pub d_star: f64,
    /// `E = (D + Cg)/C`.
    pub e: f64,
    /// `F = g − E`; identically `−D/C`.
    pub f: f64,
    /// Minimizing mixing weight `θ0 = (D + Cg)/(2Cg)`.
    pub theta0: f64,
    /// `min MSE = λ [S_y² + F(2D + CF)]` (= `λ (S_y² − D²/C)`).
    pub min_mse: f64,
}

/// Everything the dual formulas need from a summary.
#[derive(Debug, Clone, Copy)]
struct DualInputs {
    mean_y: f64,
    s_y2: f64,
    s_x2: f64,
    s_z2: f64,
    s_yx: f64,
    s_yz: f64,
    s_zx: f64,
    r1: f64,
    r2: f64,
    rho_yx: f64,
}

impl DualInputs {
    fn from_stats(stats: &SummaryStats) -> Result<Self> {
        let (_, s_x2, s_yx, r1) = stats.require_x_block()?;
        let (_, s_z2, s_yz, r2) = stats.require_z_block()?;
        Ok(DualInputs {
            mean_y: stats.mean_y,
            s_y2: stats.var_y,
            s_x2,
            s_z2,
            s_yx,
            s_yz,
            s_zx: stats.require_cov_zx()?,
            r1,
            r2,
            rho_yx: stats
                .rho_yx
                .ok_or_else(|| EstError::IncompleteInput("rhoYX".into()))?,
        })
    }

    fn c(&self) -> f64 {
        self.r1 * self.r1 * self.s_x2 - 2.0 * self.r1 * self.r2 * self.s_zx
            + self.r2 * self.r2 * self.s_z2
    }

    fn d(&self) -> f64 {
        self.r1 * self.s_yx - self.r2 * self.s_yz
    }
}

/// The dual transform `x̄* = (1+g) X̄ − g x̄`.
pub fn dual_transform(xbar: f64, pop_mean_x: f64, g: f64) -> f64 {
    (1.0 + g) * pop_mean_x - g * xbar
}

/// Percent relative efficiency `100 · mse_baseline / mse`.
pub fn pre(mse_baseline: f64, mse: f64) -> Result<f64> {
    if mse <= 0.0 {
        return Err(EstError::Domain(format!(
            "PRE needs a positive MSE, got {mse}"
        )));
    }
    Ok(100.0 * mse_baseline / mse)
}

/// Identifier for one comparator estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualEstimator {
    /// Plain sample mean ȳ.
    Mean,
    /// Ratio ȳ X̄/x̄.
    Ratio,
    /// Product ȳ z̄/Z̄.
    Product,
    /// Ratio-cum-product ȳ (X̄/x̄)(z̄/Z̄).
    RatioCumProduct,
    /// Dual ratio ȳ x̄*/X̄.
    DualRatio,
    /// Dual product ȳ Z̄/z̄*.
    DualProduct,
    /// Dual ratio-cum-product ȳ (x̄*/X̄)(Z̄/z̄*).
    DualRatioCumProduct,
    /// Ratio-cum-dual-to-ratio mix at its optimal weight.
    RatioCumDual,
}

impl DualEstimator {
    pub fn label(&self) -> &'static str {
        match self {
            DualEstimator::Mean => "mean",
            DualEstimator::Ratio => "ratio",
            DualEstimator::Product => "product",
            DualEstimator::RatioCumProduct => "ratio-cum-product",
            DualEstimator::DualRatio => "dual-ratio",
            DualEstimator::DualProduct => "dual-product",
            DualEstimator::DualRatioCumProduct => "dual-ratio-cum-product",
            DualEstimator::RatioCumDual => "ratio-cum-dual",
        }
    }

    pub fn all() -> [DualEstimator; 8] {
        [
            DualEstimator::Mean,
            DualEstimator::Ratio,
            DualEstimator::Product,
            DualEstimator::RatioCumProduct,
            DualEstimator::DualRatio,
            DualEstimator::DualProduct,
            DualEstimator::DualRatioCumProduct,
            DualEstimator::RatioCumDual,
        ]
    }
}

/// Sample means for point estimates.
#[derive(Debug, Clone, Copy)]
pub struct SampleMeans {
    pub ybar: f64,
    pub xbar: f64,
    pub zbar: f64,
}

/// One comparator row: first-order MSE, PRE against V(ȳ), and the point
/// estimate when a sample was supplied. `pre` is `None` when the MSE is
/// not positive (which published summary constants can produce when they
/// are internally inconsistent).
#[derive(Debug, Clone)]
pub struct DualReport {
    pub estimator: DualEstimator,
    pub mse1: f64,
    pub pre: Option<f64>,
    pub point: Option<f64>,
}

/// λ-scaled first-order MSE of a dual-ratio form with transform slope `g`
/// (`g = 1` recovers the classical ratio MSE term-by-term).
fn mse_dual_ratio(inp: &DualInputs, lambda: f64, g: f64) -> f64 {
    lambda * (inp.s_y2 + g * g * inp.r1 * inp.r1 * inp.s_x2 - 2.0 * g * inp.r1 * inp.s_yx)
}

fn mse_dual_product(inp: &DualInputs, lambda: f64, g: f64) -> f64 {
    lambda * (inp.s_y2 + g * g * inp.r2 * inp.r2 * inp.s_z2 + 2.0 * g * inp.r2 * inp.s_yz)
}

fn mse_dual_rcp(inp: &DualInputs, lambda: f64, g: f64) -> f64 {
    lambda * (inp.s_y2 + g * g * inp.c() - 2.0 * g * inp.d())
}

/// First-order MSE table for the eight comparators.
///
/// With a sample supplied, point estimates are included; the
/// ratio-cum-dual mix is evaluated at its MSE-optimal weight.
pub fn classical_report(
    stats: &SummaryStats,
    coeffs: &DesignCoefficients,
    sample: Option<&SampleMeans>,
) -> Result<Vec<DualReport>> {
    let inp = DualInputs::from_stats(stats)?;
    let lambda = coeffs.lambda;
    let g = coeffs.g;
    let v_mean = lambda * inp.s_y2;
    let pop_x = stats.mean_x.unwrap();
    let pop_z = stats.mean_z.unwrap();

    let mse = |which: DualEstimator| -> f64 {
        match which {
            DualEstimator::Mean => v_mean,
            DualEstimator::Ratio => mse_dual_ratio(&inp, lambda, 1.0),
            DualEstimator::Product => mse_dual_product(&inp, lambda, 1.0),
            DualEstimator::RatioCumProduct => mse_dual_rcp(&inp, lambda, 1.0),
            DualEstimator::DualRatio => mse_dual_ratio(&inp, lambda, g),
            DualEstimator::DualProduct => mse_dual_product(&inp, lambda, g),
            DualEstimator::DualRatioCumProduct => mse_dual_rcp(&inp, lambda, g),
            DualEstimator::RatioCumDual => lambda * inp.s_y2 * (1.0 - inp.rho_yx * inp.rho_yx),
        }
    };

    let point = |which: DualEstimator, s: &SampleMeans| -> Result<f64> {
        let xd = dual_transform(s.xbar, pop_x, g);
        let zd = dual_transform(s.zbar, pop_z, g);
        for (v, name) in [(s.xbar, "x̄"), (s.zbar, "z̄"), (xd, "x̄*"), (zd, "z̄*")] {
            if v == 0.0 {
                return Err(EstError::SingularInput(format!("{name} is zero")));
            }
        }
        Ok(match which {
            DualEstimator::Mean => s.ybar,
            DualEstimator::Ratio => s.ybar * pop_x / s.xbar,
            DualEstimator::Product => s.ybar * s.zbar / pop_z,
            DualEstimator::RatioCumProduct => s.ybar * (pop_x / s.xbar) * (s.zbar / pop_z),
            DualEstimator::DualRatio => s.ybar * xd / pop_x,
            DualEstimator::DualProduct => s.ybar * pop_z / zd,
            DualEstimator::DualRatioCumProduct => s.ybar * (xd / pop_x) * (pop_z / zd),
            DualEstimator::RatioCumDual => {
                // Mixing weight minimizing the first-order MSE: the
                // combined slope w + (1-w) g must hit Syx / (R1 Sx²).
                let c_opt = inp.s_yx / (inp.r1 * inp.s_x2);
                let w = if (1.0 - g).abs() > 1e-14 {
                    (c_opt - g) / (1.0 - g)
                } else {
                    0.5
                };
                s.ybar * (w * pop_x / s.xbar + (1.0 - w) * xd / pop_x)
            }
        })
    };

    DualEstimator::all()
        .into_iter()
        .map(|which| {
            let m = mse(which);
            Ok(DualReport {
                estimator: which,
                mse1: m,
                pre: if m > 0.0 {
                    Some(100.0 * v_mean / m)
                } else {
                    None
                },
                point: sample.map(|s| point(which, s)).transpose()?,
            })
        })
        .collect()
}

/// θ-family report: point (optional), first-order bias and MSE, PRE.
#[derive(Debug, Clone)]
pub struct PrReport {
    pub point: Option<f64>,
    pub bias1: f64,
    pub mse1: f64,
    pub pre: f64,
}

/// First-order bias and MSE of the θ-family.
///
/// `bias = (λ/Ȳ)[g D A + g²(R1²Sx² − R1R2Szx − θ(R1²Sx² − R2²Sz²))]`,
/// equivalently `λ Ȳ [g A Cy D* + g²(Cx² − ρzx Cz Cx − θ(Cx² − Cz²))]` in
/// coefficient-of-variation form; `mse = λ[S_y² + 2AgD + A²g²C]`.
pub fn pr_report(
    stats: &SummaryStats,
    coeffs: &DesignCoefficients,
    params: &DualPrParams,
    sample: Option<&SampleMeans>,
) -> Result<PrReport> {
    let inp = DualInputs::from_stats(stats)?;
    let (lambda, g) = (coeffs.lambda, coeffs.g);
    let (c, d, a) = (inp.c(), inp.d(), params.a());
    let _ = c;
    let bias1 = lambda / inp.mean_y
        * (g * d * a
            + g * g
                * (inp.r1 * inp.r1 * inp.s_x2
                    - inp.r1 * inp.r2 * inp.s_zx
                    - params.theta * (inp.r1 * inp.r1 * inp.s_x2 - inp.r2 * inp.r2 * inp.s_z2)));
    let mse1 = lambda * (inp.s_y2 + 2.0 * a * g * d + a * a * g * g * inp.c());
    let point = sample
        .map(|s| -> Result<f64> {
            let pop_x = stats.mean_x.unwrap();
            let pop_z = stats.mean_z.unwrap();
            let xd = dual_transform(s.xbar, pop_x, g);
            let zd = dual_transform(s.zbar, pop_z, g);
            if xd == 0.0 || zd == 0.0 {
                return Err(EstError::SingularInput("transformed mean is zero".into()));
            }
            let fwd = (xd / pop_x) * (pop_z / zd);
            Ok(s.ybar * (params.theta * fwd + (1.0 - params.theta) / fwd))
        })
        .transpose()?;
    Ok(PrReport {
        point,
        bias1,
        mse1,
        pre: pre(lambda * inp.s_y2, mse1)?,
    })
}

/// Optimal θ and the quadratic summary around it.
pub fn pr_optimum(stats: &SummaryStats, coeffs: &DesignCoefficients) -> Result<QuadraticSummary> {
    let inp = DualInputs::from_stats(stats)?;
    let (lambda, g) = (coeffs.lambda, coeffs.g);
    let (c, d) = (inp.c(), inp.d());
    if c <= 0.0 {
        return Err(EstError::DegenerateOptimum(format!(
            "C = {c}: no auxiliary signal, the MSE is flat in theta"
        )));
    }
    let e = (d + c * g) / c;
    let f = g - e;
    let theta0 = (d + c * g) / (2.0 * c * g);
    let min_mse = lambda * (inp.s_y2 + f * (2.0 * d + c * f));
    let simplified = lambda * (inp.s_y2 - d * d / c);
    debug_assert!(
        (min_mse - simplified).abs() <= 1e-12 * min_mse.abs().max(1.0),
        "algebraic simplification drifted: {min_mse} vs {simplified}"
    );
    let cx2 = inp.s_x2 / (stats.mean_x.unwrap() * stats.mean_x.unwrap());
    let cz2 = inp.s_z2 / (stats.mean_z.unwrap() * stats.mean_z.unwrap());
    let rho_zx = inp.s_zx / (inp.s_z2.sqrt() * inp.s_x2.sqrt());
    let rho_yz = inp.s_yz / (inp.s_y2.sqrt() * inp.s_z2.sqrt());
    Ok(QuadraticSummary {
        c,
        d,
        c_star: cx2 + cz2 - 2.0 * rho_zx * cz2.sqrt() * cx2.sqrt(),
        d_star: inp.rho_yx * cx2.sqrt() - rho_yz * cz2.sqrt(),
        e,
        f,
        theta0,
        min_mse,
    })
}

/// One of the eight pairwise efficiency conditions.
///
/// `holds` settles the efficiency claim by direct MSE comparison
/// (`MSE(ȳ_PR) < MSE(comparator)`, strict; a boundary tie counts as
/// false). `lhs`, `rhs` and `printed_holds` report the published
/// threshold inequality for inspection; its (a) threshold covers only one
/// root of the underlying quadratic in θ, so the direct comparison is the
/// authoritative verdict.
#[derive(Debug, Clone)]
pub struct EfficiencyCondition {
    /// Condition tag, 'a' through 'h'.
    pub label: char,
    /// Which comparison it settles.
    pub against: DualEstimator,
    /// Direct comparison: MSE(ȳ_PR) − MSE(comparator) < 0.
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// The published inequality `lhs < rhs` (or `lhs > rhs` for (a)).
    pub printed_holds: bool,
    /// Side condition, when the inequality carries one.
    pub proviso: Option<bool>,
}

/// Evaluate the eight efficiency conditions of the θ-family against the
/// comparators.
pub fn efficiency_conditions(
    stats: &SummaryStats,
    coeffs: &DesignCoefficients,
    theta: f64,
) -> Result<Vec<EfficiencyCondition>> {
    let inp = DualInputs::from_stats(stats)?;
    let g = coeffs.g;
    let (c, d) = (inp.c(), inp.d());
    let a = 1.0 - 2.0 * theta;
    let core = a * g * (2.0 * d + a * g * c);
    let (r1, r2) = (inp.r1, inp.r2);
    let mse_pr = pr_report(stats, coeffs, &DualPrParams::new(theta), None)?.mse1;
    let table = classical_report(stats, coeffs, None)?;
    let mse_of = |which: DualEstimator| -> f64 {
        table
            .iter()
            .find(|row| row.estimator == which)
            .unwrap()
            .mse1
    };
    let row = |label: char,
               against: DualEstimator,
               lhs: f64,
               rhs: f64,
               printed_holds: bool,
               proviso: Option<bool>| EfficiencyCondition {
        label,
        against,
        holds: mse_pr < mse_of(against),
        lhs,
        rhs,
        printed_holds,
        proviso,
    };
    Ok(vec![
        {
            let rhs = (2.0 * d + g * c) / (2.0 * g * c);
            row('a', DualEstimator::Mean, theta, rhs, theta > rhs, None)
        },
        {
            let rhs = r1 * (r1 * inp.s_x2 - 2.0 * inp.s_yx);
            row(
                'b',
                DualEstimator::Ratio,
                core,
                rhs,
                core < rhs,
                Some(inp.s_yx < r1 * inp.s_x2 / 2.0),
            )
        },
        {
            let rhs = r2 * (r2 * inp.s_z2 + 2.0 * inp.s_yz);
            row(
                'c',
                DualEstimator::Product,
                core,
                rhs,
                core < rhs,
                Some(inp.s_yz < r2 * inp.s_z2 / 2.0),
            )
        },
        {
            let rhs = -2.0 * d / (a * g - 1.0);
            row(
                'd',
                DualEstimator::RatioCumProduct,
                c,
                rhs,
                c < rhs,
                Some(g < 1.0 / a),
            )
        },
        {
            let lhs = 4.0 * theta * (theta * g * c - g * c - d);
            let rhs = 2.0 * g * r1 * r2 * inp.s_zx + 2.0 * r2 * inp.s_yz
                - 4.0 * r1 * inp.s_yx
                - g * r2 * r2 * inp.s_z2;
            row('e', DualEstimator::DualRatio, lhs, rhs, lhs < rhs, None)
        },
        {
            let lhs = 4.0 * theta * (theta * g * c - g * c - d);
            let rhs = 2.0 * g * r1 * r2 * inp.s_zx + 4.0 * r2 * inp.s_yz
                - 2.0 * r1 * inp.s_yx
                - g * r1 * r1 * inp.s_x2;
            row('f', DualEstimator::DualProduct, lhs, rhs, lhs < rhs, None)
        },
        {
            let rhs = -2.0 * d / (c * (a - 1.0));
            row(
                'g',
                DualEstimator::DualRatioCumProduct,
                g,
                rhs,
                g < rhs,
                Some(a < 1.0),
            )
        },
        {
            let rhs = -inp.rho_yx * inp.rho_yx * inp.s_y2;
            row(
                'h',
                DualEstimator::RatioCumDual,
                core,
                rhs,
                core < rhs,
                None,
            )
        },
    ])
}
