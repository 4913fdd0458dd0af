//! Ratio-type mean estimators with first- and second-order expansions.
//!
//! Five one-auxiliary families for the population mean, named after their
//! proposers:
//!
//! - Chakrabarty: `(1−α) ȳ + α ȳ X̄/x̄`
//! - Khoshnevisan: `ȳ [X̄ / (β x̄ + (1−β) X̄)]^g`
//! - Sahai–Ray: `ȳ [2 − (x̄/X̄)^w]`
//! - Ismail: `ȳ [(x̄ + a(X̄−x̄)) / (x̄ + b(X̄−x̄))]^p`
//! - Solanki: `ȳ [2 − (x̄/X̄)^λ exp(δ(x̄−X̄)/(x̄+X̄))]`
//!
//! To first order every member linearizes to `ȳ(1 + e0 − h·e1)` with an
//! effective slope h (α, gβ, w, D = p(b−a), k = (δ+2λ)/2 respectively), so
//! all five share the first-order MSE `Ȳ² L1 (C02 + h² C20 − 2 h C11)`
//! and one common minimum at `h* = C11/C20`. Second-order corrections are
//! where the families separate.
//!
//! The same coefficient polynomials serve simple random sampling (the
//! `L_i C_pq` product moments) and stratified sampling (the `V_rs`
//! quantities), via [`ExpansionMoments`].

use crate::design::DesignCoefficients;
use crate::error::{EstError, Result};
use crate::moments::{ExpansionMoments, MomentTable, StratifiedPopulation};

/// A member of the five-family ratio-type class, with its constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanFamily {
    Chakrabarty {
        alpha: f64,
    },
    Khoshnevisan {
        beta: f64,
        g: f64,
    },
    SahaiRay {
        w: f64,
    },
    /// `d3` overrides the fourth-order constant D3; by default it follows
    /// the pattern of D1 and D2, `D3 = D2 (b−a)(p−3)/4`. That default is a
    /// conjecture (the constant is otherwise undefined), so callers can
    /// supply their own.
    Ismail {
        a: f64,
        b: f64,
        p: f64,
        d3: Option<f64>,
    },
    Solanki {
        lambda: f64,
        delta: f64,
    },
}

/// `base^exp` for real `exp`, rejecting fractional powers of non-positive
/// bases instead of silently producing NaN.
fn checked_pow(base: f64, exp: f64, what: &str) -> Result<f64> {
    if exp.fract() == 0.0 && exp.abs() < 1e9 {
        return Ok(base.powi(exp as i32));
    }
    if base <= 0.0 {
        return Err(EstError::Domain(format!(
            "{what}: fractional power {exp} of non-positive base {base}"
        )));
    }
    Ok(base.powf(exp))
}

impl MeanFamily {
    pub fn label(&self) -> &'static str {
        match self {
            MeanFamily::Chakrabarty { .. } => "chakrabarty",
            MeanFamily::Khoshnevisan { .. } => "khoshnevisan",
            MeanFamily::SahaiRay { .. } => "sahai-ray",
            MeanFamily::Ismail { .. } => "ismail",
            MeanFamily::Solanki { .. } => "solanki",
        }
    }

    /// Ismail constants D, D1, D2, D3.
    fn d_chain(a: f64, b: f64, p: f64, d3: Option<f64>) -> (f64, f64, f64, f64) {
        let d = p * (b - a);
        let d1 = d * (b - a) * (p - 1.0) / 2.0;
        let d2 = d1 * (b - a) * (p - 2.0) / 3.0;
        let d3 = d3.unwrap_or(d2 * (b - a) * (p - 3.0) / 4.0);
        (d, d1, d2, d3)
    }

    /// Solanki third/fourth-order constants (M, N).
    fn solanki_mn(lambda: f64, delta: f64) -> (f64, f64) {
        let l = lambda;
        let d = delta;
        let m = 0.5
            * ((d.powi(3) - 6.0 * d * d) / 24.0
                + l * (d * d - 2.0 * d) / 4.0
                + l * (l - 1.0) / 2.0 * d
                + l * (l - 1.0) * (l - 2.0) / 3.0);
        let n = (1.0 / 8.0)
            * ((d.powi(4) - 12.0 * d.powi(3) + 12.0 * d * d) / 48.0
                + l * (d.powi(3) - 6.0 * d) / 6.0
                + l * (l - 1.0) / 2.0 * (d * d - 2.0 * d)
                + l * (l - 1.0) * (l - 2.0) * (l - 3.0) / 3.0);
        (m, n)
    }

    /// First-order effective slope h: the estimator linearizes to
    /// `ȳ(1 − h e1)`.
    pub fn effective_slope(&self) -> f64 {
        match *self {
            MeanFamily::Chakrabarty { alpha } => alpha,
            MeanFamily::Khoshnevisan { beta, g } => g * beta,
            MeanFamily::SahaiRay { w } => w,
            MeanFamily::Ismail { a, b, p, .. } => p * (b - a),
            MeanFamily::Solanki { lambda, delta } => (delta + 2.0 * lambda) / 2.0,
        }
    }

    /// The same family member with its free scalar set so the effective
    /// slope equals `h` (the other constants are kept).
    pub fn with_effective_slope(&self, h: f64) -> Result<MeanFamily> {
        Ok(match *self {
            MeanFamily::Chakrabarty { .. } => MeanFamily::Chakrabarty { alpha: h },
            MeanFamily::Khoshnevisan { g, .. } => {
                if g == 0.0 {
                    return Err(EstError::DegenerateOptimum(
                        "khoshnevisan with g = 0 is constant in beta".into(),
                    ));
                }
                MeanFamily::Khoshnevisan { beta: h / g, g }
            }
            MeanFamily::SahaiRay { .. } => MeanFamily::SahaiRay { w: h },
            MeanFamily::Ismail { a, b, d3, .. } => {
                if a == b {
                    return Err(EstError::DegenerateOptimum(
                        "ismail with a = b is constant in p".into(),
                    ));
                }
                MeanFamily::Ismail {
                    a,
                    b,
                    p: h / (b - a),
                    d3,
                }
            }
            MeanFamily::Solanki { delta, .. } => MeanFamily::Solanki {
                lambda: (2.0 * h - delta) / 2.0,
                delta,
            },
        })
    }

    /// Point estimate from sample means and the known population mean X̄.
    pub fn point(&self, mean_y: f64, mean_x: f64, pop_mean_x: f64) -> Result<f64> {
        match *self {
            MeanFamily::Chakrabarty { alpha } => {
                if mean_x == 0.0 {
                    return Err(EstError::SingularInput("sample mean of x is zero".into()));
                }
                Ok((1.0 - alpha) * mean_y + alpha * mean_y * pop_mean_x / mean_x)
            }
            MeanFamily::Khoshnevisan { beta, g } => {
                let denom = beta * mean_x + (1.0 - beta) * pop_mean_x;
                if denom == 0.0 {
                    return Err(EstError::SingularInput(
                        "khoshnevisan denominator beta*x̄ + (1-beta)*X̄ is zero".into(),
                    ));
                }
                Ok(mean_y * checked_pow(pop_mean_x / denom, g, "khoshnevisan")?)
            }
            MeanFamily::SahaiRay { w } => {
                if pop_mean_x == 0.0 {
                    return Err(EstError::SingularInput(
                        "population mean of x is zero".into(),
                    ));
                }
                Ok(mean_y * (2.0 - checked_pow(mean_x / pop_mean_x, w, "sahai-ray")?))
            }
            MeanFamily::Ismail { a, b, p, .. } => {
                let denom = mean_x + b * (pop_mean_x - mean_x);
                if denom == 0.0 {
                    return Err(EstError::SingularInput(
                        "ismail denominator x̄ + b(X̄−x̄) is zero".into(),
                    ));
                }
                let base = (mean_x + a * (pop_mean_x - mean_x)) / denom;
                Ok(mean_y * checked_pow(base, p, "ismail")?)
            }
            MeanFamily::Solanki { lambda, delta } => {
                if pop_mean_x == 0.0 || mean_x + pop_mean_x == 0.0 {
                    return Err(EstError::SingularInput(
                        "solanki denominator is zero".into(),
                    ));
                }
                let factor = checked_pow(mean_x / pop_mean_x, lambda, "solanki")?
                    * (delta * (mean_x - pop_mean_x) / (mean_x + pop_mean_x)).exp();
                Ok(mean_y * (2.0 - factor))
            }
        }
    }

    /// First-order bias over the given product-moment expectations.
    fn bias1_from(&self, mm: &ExpansionMoments, mean_y: f64) -> f64 {
        match *self {
            // Re-derived from the defining expansion; the full e1^2
            // coefficient is alpha, not alpha/2.
            MeanFamily::Chakrabarty { alpha } => mean_y * alpha * (mm.ee_x2 - mm.ee_xy),
            MeanFamily::Khoshnevisan { beta, g } => {
                mean_y * (g * (g + 1.0) / 2.0 * beta * beta * mm.ee_x2 - g * beta * mm.ee_xy)
            }
            MeanFamily::SahaiRay { w } => mean_y * (-w * (w - 1.0) / 2.0 * mm.ee_x2 - w * mm.ee_xy),
            MeanFamily::Ismail { a, b, p, d3 } => {
                let (d, d1, _, _) = Self::d_chain(a, b, p, d3);
                mean_y * ((b * d + d1) * mm.ee_x2 - d * mm.ee_xy)
            }
            MeanFamily::Solanki { lambda, delta } => {
                let k = (delta + 2.0 * lambda) / 2.0;
                mean_y * (-k * (k - 1.0) / 2.0 * mm.ee_x2 - k * mm.ee_xy)
            }
        }
    }

    /// Second-order bias: the first-order part plus the third/fourth
    /// moment corrections.
    fn bias2_from(&self, mm: &ExpansionMoments, mean_y: f64) -> f64 {
        let first = self.bias1_from(mm, mean_y);
        let higher = match *self {
            MeanFamily::Chakrabarty { alpha } => {
                alpha * (mm.ee_x2y - mm.ee_x3 + mm.ee_x4 - mm.ee_x3y)
            }
            MeanFamily::Khoshnevisan { beta, g } => {
                let b2 = beta * beta;
                let b3 = b2 * beta;
                let b4 = b3 * beta;
                -g * (g + 1.0) / 2.0 * b2 * mm.ee_x2y
                    - g * (g + 1.0) * (g + 2.0) / 6.0 * b3 * mm.ee_x3
                    - g * (g + 1.0) * (g + 2.0) / 6.0 * b3 * mm.ee_x3y
                    + g * (g + 1.0) * (g + 2.0) * (g + 3.0) / 24.0 * b4 * mm.ee_x4
            }
            MeanFamily::SahaiRay { w } => {
                -w * (w - 1.0) / 2.0 * mm.ee_x2y
                    - w * (w - 1.0) * (w - 2.0) / 6.0 * mm.ee_x3
                    - w * (w - 1.0) * (w - 2.0) / 6.0 * mm.ee_x3y
                    - w * (w - 1.0) * (w - 2.0) * (w - 3.0) / 24.0 * mm.ee_x4
            }
            MeanFamily::Ismail { a, b, p, d3 } => {
                let (d, d1, d2, d3v) = Self::d_chain(a, b, p, d3);
                (b * d + d1) / 2.0 * mm.ee_x2y
                    - (b * b * d + 2.0 * b * d1 + d2) / 2.0 * mm.ee_x3
                    - (b * b * d + 2.0 * b * d1) * mm.ee_x3y
                    + (b.powi(3) * d + 3.0 * b * b * d1 + 3.0 * b * d2 + d3v) / 2.0 * mm.ee_x4
            }
            MeanFamily::Solanki { lambda, delta } => {
                let k = (delta + 2.0 * lambda) / 2.0;
                let (m, n) = Self::solanki_mn(lambda, delta);
                -k * (k - 1.0) / 2.0 * mm.ee_x2y - m * mm.ee_x3 - m * mm.ee_x3y - n * mm.ee_x4
            }
        };
        first + mean_y * higher
    }

    /// First-order MSE: `Ȳ² (E[e0²] + h² E[e1²] − 2h E[e0 e1])`.
    fn mse1_from(&self, mm: &ExpansionMoments, mean_y: f64) -> f64 {
        let h = self.effective_slope();
        mean_y * mean_y * (mm.ee_y2 + h * h * mm.ee_x2 - 2.0 * h * mm.ee_xy)
    }

    /// Second-order MSE: the first-order part plus the family-specific
    /// third/fourth moment terms.
    fn mse2_from(&self, mm: &ExpansionMoments, mean_y: f64) -> f64 {
        let first = self.mse1_from(mm, mean_y);
        let higher = match *self {
            MeanFamily::Chakrabarty { alpha } => {
                let a2 = alpha * alpha;
                -a2 * mm.ee_x3 + (2.0 * a2 + alpha) * mm.ee_x2y - 2.0 * a2 * mm.ee_x3y
                    + alpha * (alpha + 1.0) * mm.ee_x2y2
                    + 5.0 / 24.0 * a2 * mm.ee_x4
            }
            MeanFamily::Khoshnevisan { beta, g } => {
                let b2 = beta * beta;
                let b3 = b2 * beta;
                let b4 = b3 * beta;
                -b3 * g * g * (g + 1.0) * mm.ee_x3 + g * (3.0 * g + 1.0) * b2 * mm.ee_x2y
                    - 2.0 * beta * g * mm.ee_xy2
                    - (7.0 * g.powi(3) + 9.0 * g * g + 2.0 * g) / 3.0 * b3 * mm.ee_x3y
                    + g * (2.0 * g + 1.0) * b2 * mm.ee_x2y2
                    + (2.0 * g.powi(3) + 9.0 * g * g + 10.0 * g + 3.0) / 6.0 * b4 * mm.ee_x4
            }
            MeanFamily::SahaiRay { w } => {
                -w * w * (w - 1.0) * mm.ee_x3 + w * (w + 1.0) * mm.ee_x2y - 2.0 * w * mm.ee_xy2
                    + (5.0 * w.powi(3) - 3.0 * w * w - 2.0 * w) / 3.0 * mm.ee_x3y
                    + w * mm.ee_x2y2
                    + (7.0 * w.powi(4) - 18.0 * w.powi(3) + 11.0 * w * w) / 24.0 * mm.ee_x4
            }
            MeanFamily::Ismail { a, b, p, d3 } => {
                let (d, d1, d2, _) = Self::d_chain(a, b, p, d3);
                -4.0 * d * d1 * mm.ee_x3 + (2.0 * b * d + 2.0 * d1 + 2.0 * d * d) * mm.ee_x2y
                    - 2.0 * d * mm.ee_xy2
                    + (2.0 * d * d
                        + 2.0 * b * b * d
                        + 2.0 * d * d1
                        + 4.0 * b * d1
                        + 4.0 * b * d * d)
                        * mm.ee_x3y
                    + (d * d + 2.0 * d1 + 2.0 * b * d) * mm.ee_x2y2
                    + (3.0 * b * b * d * d + d1 * d1 + 2.0 * d * d2 + 12.0 * b * d * d1) * mm.ee_x4
            }
            MeanFamily::Solanki { lambda, delta } => {
                let k = (delta + 2.0 * lambda) / 2.0;
                k * mm.ee_x2y - 2.0 * k * mm.ee_xy2
                    + k * k * (k - 1.0) * mm.ee_x3
                    + 2.0 * k * k * (k - 1.0) * mm.ee_x3y
                    + k * mm.ee_x2y2
                    + (k * k - k).powi(2) / 4.0 * mm.ee_x4
            }
        };
        first + mean_y * mean_y * higher
    }
}

/// Bias and MSE of one family member at one expansion order.
#[derive(Debug, Clone, Copy)]
pub struct FamilyReport {
    pub bias: f64,
    pub mse: f64,
}

/// First-order report under SRSWOR.
pub fn first_order_report(
    moments: &MomentTable,
    coeffs: &DesignCoefficients,
    mean_y: f64,
    family: &MeanFamily,
) -> Result<FamilyReport> {
    let mm = ExpansionMoments::srs_first_order(moments, coeffs)?;
    Ok(FamilyReport {
        bias: family.bias1_from(&mm, mean_y),
        mse: family.mse1_from(&mm, mean_y),
    })
}

/// Second-order report under SRSWOR (needs every C_pq with p+q ≤ 4 and
/// the L3/L4 coefficients).
pub fn second_order_report(
    moments: &MomentTable,
    coeffs: &DesignCoefficients,
    mean_y: f64,
    family: &MeanFamily,
) -> Result<FamilyReport> {
    let mm = ExpansionMoments::srs_second_order(moments, coeffs)?;
    Ok(FamilyReport {
        bias: family.bias2_from(&mm, mean_y),
        mse: family.mse2_from(&mm, mean_y),
    })
}

/// Expansion order for stratified reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    First,
    Second,
}

/// Stratified report: identical coefficient polynomials with the `V_rs`
/// product moments in place of the `L_i C_pq` products.
pub fn stratified_report(
    strat: &StratifiedPopulation,
    mean_y: f64,
    family: &MeanFamily,
    order: Order,
) -> Result<FamilyReport> {
    Ok(match order {
        Order::First => {
            let mm = ExpansionMoments::stratified_first_order(strat)?;
            FamilyReport {
                bias: family.bias1_from(&mm, mean_y),
                mse: family.mse1_from(&mm, mean_y),
            }
        }
        Order::Second => {
            let mm = ExpansionMoments::stratified_second_order(strat)?;
            FamilyReport {
                bias: family.bias2_from(&mm, mean_y),
                mse: family.mse2_from(&mm, mean_y),
            }
        }
    })
}

/// A family member tuned to its first-order optimum.
#[derive(Debug, Clone, Copy)]
pub struct FamilyOptimum {
    /// Optimal value of the family's free scalar (α, β, w, p or λ).
    pub param: f64,
    /// The member with that scalar installed.
    pub family: MeanFamily,
    /// Common minimized first-order MSE, `Ȳ² L1 (C02 − C11²/C20)`.
    pub mse1: f64,
}

/// Closed-form first-order optimum: slope `h* = C11/C20` mapped back into
/// the family's own parameter.
pub fn family_optimum(
    moments: &MomentTable,
    coeffs: &DesignCoefficients,
    mean_y: f64,
    family: &MeanFamily,
) -> Result<FamilyOptimum> {
    let c20 = moments.c(2, 0)?;
    let c02 = moments.c(0, 2)?;
    let c11 = moments.c(1, 1)?;
    if c20 <= 0.0 {
        return Err(EstError::DegenerateOptimum(format!(
            "C20 = {c20}: first-order MSE is flat in the parameter"
        )));
    }
    let h = c11 / c20;
    let tuned = family.with_effective_slope(h)?;
    let param = match tuned {
        MeanFamily::Chakrabarty { alpha } => alpha,
        MeanFamily::Khoshnevisan { beta, .. } => beta,
        MeanFamily::SahaiRay { w } => w,
        MeanFamily::Ismail { p, .. } => p,
        MeanFamily::Solanki { lambda, .. } => lambda,
    };
    let mse1 = mean_y * mean_y * coeffs.l1 * (c02 - c11 * c11 / c20);
    Ok(FamilyOptimum {
        param,
        family: tuned,
        mse1,
    })
}

/// Back-solve C20 from a known optimized first-order MSE,
/// `M = Ȳ² L1 (C02 − C11²/C20)`. Used when a published moment set omits
/// C20 but reports the common optimum.
pub fn back_solve_c20(
    mean_y: f64,
    coeffs: &DesignCoefficients,
    c02: f64,
    c11: f64,
    mse_at_optimum: f64,
) -> Result<f64> {
    let gap = c02 - mse_at_optimum / (mean_y * mean_y * coeffs.l1);
    if gap <= 0.0 {
        return Err(EstError::Domain(format!(
            "target optimum MSE {mse_at_optimum} is not below the no-auxiliary variance"
        )));
    }
    Ok(c11 * c11 / gap)
}

/// All five family members at their classical-reduction constants.
pub fn default_families() -> Vec<MeanFamily> {
    vec![
        MeanFamily::Chakrabarty { alpha: 1.0 },
        MeanFamily::Khoshnevisan { beta: 1.0, g: 1.0 },
        MeanFamily::SahaiRay { w: 1.0 },
        MeanFamily::Ismail {
            a: 0.0,
            b: 1.0,
            p: 1.0,
            d3: None,
        },
        MeanFamily::Solanki {
            lambda: 1.0,
            delta: 1.0,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Stratum;
    use crate::population::FinitePopulation;
    use crate::summary::Divisor;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-30)
    }

    fn synthetic_table() -> (MomentTable, DesignCoefficients, f64) {
        let x: Vec<f64> = (1..=20).map(|i| 10.0 + (i as f64) * 0.8).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| 2.0 * v + ((i * i) % 5) as f64)
            .collect();
        let pop = FinitePopulation::from_xy(x, y).unwrap();
        let mean_y = pop.y().iter().sum::<f64>() / 20.0;
        let table = MomentTable::from_population(&pop, Divisor::N).unwrap();
        let coeffs = DesignCoefficients::new(20, 6, None).unwrap();
        (table, coeffs, mean_y)
    }

    #[test]
    fn chakrabarty_reductions() {
        let f0 = MeanFamily::Chakrabarty { alpha: 0.0 };
        assert!((f0.point(10.0, 5.0, 4.0).unwrap() - 10.0).abs() < 1e-15);
        let f1 = MeanFamily::Chakrabarty { alpha: 1.0 };
        assert!((f1.point(10.0, 5.0, 4.0).unwrap() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn khoshnevisan_reduces_to_ratio() {
        let f = MeanFamily::Khoshnevisan { beta: 1.0, g: 1.0 };
        assert!((f.point(10.0, 5.0, 4.0).unwrap() - 8.0).abs() < 1e-15);
    }

    #[test]
    fn ismail_point_direct_substitution() {
        let f = MeanFamily::Ismail {
            a: 0.0,
            b: 1.0,
            p: 1.0,
            d3: None,
        };
        // 10 * (5 + 0) / (5 + (4 - 5)) = 12.5
        assert!((f.point(10.0, 5.0, 4.0).unwrap() - 12.5).abs() < 1e-15);
    }

    #[test]
    fn point_reductions_on_random_inputs() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for _ in 0..200 {
            let ybar = rng.gen_range(1.0..20.0);
            let xbar = rng.gen_range(1.0..20.0);
            let xm = rng.gen_range(1.0..20.0);
            let ratio = ybar * xm / xbar;
            let t2 = MeanFamily::Khoshnevisan { beta: 1.0, g: 1.0 }
                .point(ybar, xbar, xm)
                .unwrap();
            let t1r = MeanFamily::Chakrabarty { alpha: 1.0 }
                .point(ybar, xbar, xm)
                .unwrap();
            let t1m = MeanFamily::Chakrabarty { alpha: 0.0 }
                .point(ybar, xbar, xm)
                .unwrap();
            assert!(rel(t2, ratio) < 1e-12);
            assert!(rel(t1r, ratio) < 1e-12);
            assert!(rel(t1m, ybar) < 1e-12);
        }
    }

    #[test]
    fn fractional_power_of_negative_base_is_domain_error() {
        let f = MeanFamily::SahaiRay { w: 0.5 };
        assert!(matches!(f.point(10.0, -5.0, 4.0), Err(EstError::Domain(_))));
    }

    #[test]
    fn optimum_condition_equalizes_all_first_order_mses() {
        let (table, coeffs, mean_y) = synthetic_table();
        let mut values = Vec::new();
        for fam in default_families() {
            let opt = family_optimum(&table, &coeffs, mean_y, &fam).unwrap();
            let direct = first_order_report(&table, &coeffs, mean_y, &opt.family).unwrap();
            assert!(rel(direct.mse, opt.mse1) < 1e-12);
            values.push(direct.mse);
        }
        for v in &values[1..] {
            assert!(rel(*v, values[0]) < 1e-12);
        }
    }

    #[test]
    fn grid_never_beats_closed_form_optimum() {
        let (table, coeffs, mean_y) = synthetic_table();
        for fam in default_families() {
            let opt = family_optimum(&table, &coeffs, mean_y, &fam).unwrap();
            let h_opt = opt.family.effective_slope();
            for i in 0..10_000 {
                let h = h_opt - 2.0 + 4.0 * (i as f64) / 9_999.0;
                let member = fam.with_effective_slope(h).unwrap();
                let mse = first_order_report(&table, &coeffs, mean_y, &member)
                    .unwrap()
                    .mse;
                assert!(mse >= opt.mse1 - 1e-9 * opt.mse1.abs());
            }
        }
    }

    #[test]
    fn zero_slope_gives_plain_mean_variance() {
        let (table, coeffs, mean_y) = synthetic_table();
        let r = first_order_report(
            &table,
            &coeffs,
            mean_y,
            &MeanFamily::Chakrabarty { alpha: 0.0 },
        )
        .unwrap();
        let expect = mean_y * mean_y * coeffs.l1 * table.c(0, 2).unwrap();
        assert!(rel(r.mse, expect) < 1e-13);
        assert_eq!(r.bias, 0.0);
    }

    #[test]
    fn sahai_ray_unit_weight_matches_classical_ratio_expansion() {
        let (table, coeffs, mean_y) = synthetic_table();
        let r =
            first_order_report(&table, &coeffs, mean_y, &MeanFamily::SahaiRay { w: 1.0 }).unwrap();
        let c02 = table.c(0, 2).unwrap();
        let c11 = table.c(1, 1).unwrap();
        let c20 = table.c(2, 0).unwrap();
        assert!(rel(r.bias, -mean_y * coeffs.l1 * c11) < 1e-12);
        let expect = mean_y * mean_y * coeffs.l1 * (c02 + c20 - 2.0 * c11);
        assert!(rel(r.mse, expect) < 1e-12);
    }

    #[test]
    fn zeroing_higher_coefficients_collapses_second_order() {
        let (table, coeffs, mean_y) = synthetic_table();
        let degenerate = coeffs.with_l_coefficients(coeffs.l1, 0.0, 0.0, 0.0);
        for fam in default_families() {
            let first = first_order_report(&table, &degenerate, mean_y, &fam).unwrap();
            let second = second_order_report(&table, &degenerate, mean_y, &fam).unwrap();
            assert!(rel(first.mse, second.mse) < 1e-13, "{}", fam.label());
            assert!(
                (first.bias - second.bias).abs() <= 1e-13 * first.bias.abs().max(1.0),
                "{}",
                fam.label()
            );
        }
    }

    #[test]
    fn single_stratum_first_order_matches_srs() {
        let x: Vec<f64> = (1..=12).map(|i| 20.0 + i as f64).collect();
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| 3.0 * v + ((i * 7) % 4) as f64)
            .collect();
        let mean_y = y.iter().sum::<f64>() / 12.0;
        let pop = FinitePopulation::from_xy(x.clone(), y.clone()).unwrap();
        let table = MomentTable::from_population(&pop, Divisor::N).unwrap();
        let coeffs = DesignCoefficients::new(12, 4, None).unwrap();
        let strat =
            StratifiedPopulation::new(vec![Stratum::from_raw("all", 4, y, x).unwrap()]).unwrap();
        for fam in default_families() {
            let srs = first_order_report(&table, &coeffs, mean_y, &fam).unwrap();
            let st = stratified_report(&strat, mean_y, &fam, Order::First).unwrap();
            assert!(rel(srs.mse, st.mse) < 1e-12, "{}", fam.label());
            assert!((srs.bias - st.bias).abs() <= 1e-12 * srs.bias.abs().max(1.0));
        }
    }

    #[test]
    fn zero_auxiliary_variance_kills_bias_terms() {
        let y1 = vec![4.0, 6.0, 5.0, 9.0, 7.0, 3.0];
        let x1 = vec![5.0; 6];
        let strat =
            StratifiedPopulation::new(vec![Stratum::from_raw("a", 2, y1, x1).unwrap()]).unwrap();
        let report = stratified_report(
            &strat,
            5.5,
            &MeanFamily::Chakrabarty { alpha: 1.0 },
            Order::First,
        )
        .unwrap();
        assert_eq!(report.bias, 0.0);
    }

    #[test]
    fn flat_objective_is_degenerate() {
        let table = MomentTable::from_entries([((2, 0), 0.0), ((0, 2), 0.5), ((1, 1), 0.1)]);
        let coeffs = DesignCoefficients::new(30, 5, None).unwrap();
        assert!(matches!(
            family_optimum(
                &table,
                &coeffs,
                10.0,
                &MeanFamily::Chakrabarty { alpha: 1.0 }
            ),
            Err(EstError::DegenerateOptimum(_))
        ));
    }

    #[test]
    fn missing_moment_is_incomplete_input() {
        let table = MomentTable::from_entries([((0, 2), 0.5), ((1, 1), 0.1)]);
        let coeffs = DesignCoefficients::new(30, 5, None).unwrap();
        let err = first_order_report(&table, &coeffs, 10.0, &MeanFamily::SahaiRay { w: 1.0 });
        assert!(matches!(err, Err(EstError::IncompleteInput(_))));
    }

    #[test]
    fn back_solve_recovers_c20() {
        let (table, coeffs, mean_y) = synthetic_table();
        let opt =
            family_optimum(&table, &coeffs, mean_y, &MeanFamily::SahaiRay { w: 1.0 }).unwrap();
        let c20 = back_solve_c20(
            mean_y,
            &coeffs,
            table.c(0, 2).unwrap(),
            table.c(1, 1).unwrap(),
            opt.mse1,
        )
        .unwrap();
        assert!(rel(c20, table.c(2, 0).unwrap()) < 1e-12);
    }
}
