//! Mean estimation from two auxiliary binary attributes.
//!
//! Seven estimators of the population mean built on known attribute
//! proportions P1, P2 and their sample counterparts p1, p2:
//!
//! ```text
//! t1 = ȳ P1/p1                      t2 = ȳ P2/p2
//! t3 = ȳ exp((P1−p1)/(P1+p1))       t4 = ȳ exp((p2−P2)/(p2+P2))
//! t5 = ȳ [w1 P1/p1 + w2 P2/p2],     w1 + w2 = 1
//! t6 = [K61 ȳ + K62 (P1−p1)] exp((P2−p2)/(P2+p2))
//! t7 = ȳ + K71 (P1−p1) + K72 (P2−p2)
//! ```
//!
//! First-order biases and MSEs follow the published forms. Two published
//! quirks are kept deliberately, because the published efficiency table is
//! only reproducible with them:
//!
//! - the t2 MSE uses `C_p1²` where the symmetric derivation would use
//!   `C_p2²`; [`MseVariant::Corrected`] switches to the derived form;
//! - the published optimal weight `w1*` for t5 is not the true minimizer
//!   of its MSE quadratic; [`OptimaMode::Minimizing`] solves the exact
//!   quadratic programs instead (for t6 and t7 the published optima and
//!   the true minimizers coincide).

use crate::error::{EstError, Result};
use crate::summary::AttributeSummary;

/// Which t2 MSE reading to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MseVariant {
    /// Table-faithful published formula (default).
    AsPrinted,
    /// Symmetric derivation (C_p2² in the t2 MSE).
    Corrected,
}

/// How to choose the tunable constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimaMode {
    /// Published closed-form constants, evaluated verbatim.
    AsPrinted,
    /// Exact quadratic minimization.
    Minimizing,
}

/// Constants for the weighted/regression-type members.
#[derive(Debug, Clone, Copy)]
pub struct AttributeParams {
    pub w1: f64,
    pub w2: f64,
    pub k61: f64,
    pub k62: f64,
    pub k71: f64,
    pub k72: f64,
}

impl AttributeParams {
    /// `w2` always derives from `w1` so the weights sum to one.
    pub fn new(w1: f64, k61: f64, k62: f64, k71: f64, k72: f64) -> Self {
        AttributeParams {
            w1,
            w2: 1.0 - w1,
            k61,
            k62,
            k71,
            k72,
        }
    }
}

/// Estimator identifiers t1..t7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttributeEstimator {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl AttributeEstimator {
    pub fn all() -> [AttributeEstimator; 7] {
        use AttributeEstimator::*;
        [T1, T2, T3, T4, T5, T6, T7]
    }

    pub fn label(&self) -> &'static str {
        match self {
            AttributeEstimator::T1 => "t1",
            AttributeEstimator::T2 => "t2",
            AttributeEstimator::T3 => "t3",
            AttributeEstimator::T4 => "t4",
            AttributeEstimator::T5 => "t5",
            AttributeEstimator::T6 => "t6",
            AttributeEstimator::T7 => "t7",
        }
    }
}

/// Point estimates for all seven estimators.
pub fn attr_points(
    mean_y: f64,
    p1: f64,
    p2: f64,
    pop_p1: f64,
    pop_p2: f64,
    params: &AttributeParams,
) -> Result<Vec<(AttributeEstimator, f64)>> {
    if p1 <= 0.0 || p2 <= 0.0 {
        return Err(EstError::SingularInput(
            "sample proportions must be positive for the ratio forms".into(),
        ));
    }
    Ok(vec![
        (AttributeEstimator::T1, mean_y * pop_p1 / p1),
        (AttributeEstimator::T2, mean_y * pop_p2 / p2),
        (
            AttributeEstimator::T3,
            mean_y * ((pop_p1 - p1) / (pop_p1 + p1)).exp(),
        ),
        (
            AttributeEstimator::T4,
            mean_y * ((p2 - pop_p2) / (p2 + pop_p2)).exp(),
        ),
        (
            AttributeEstimator::T5,
            mean_y * (params.w1 * pop_p1 / p1 + params.w2 * pop_p2 / p2),
        ),
        (
            AttributeEstimator::T6,
            (params.k61 * mean_y + params.k62 * (pop_p1 - p1))
                * ((pop_p2 - p2) / (pop_p2 + p2)).exp(),
        ),
        (
            AttributeEstimator::T7,
            mean_y + params.k71 * (pop_p1 - p1) + params.k72 * (pop_p2 - p2),
        ),
    ])
}

/// Bias, MSE and PRE of one estimator.
#[derive(Debug, Clone)]
pub struct AttrReport {
    pub estimator: AttributeEstimator,
    pub bias1: f64,
    pub mse1: f64,
    pub pre: f64,
}

/// t6 MSE building blocks.
fn t6_blocks(s: &AttributeSummary, f1: f64) -> (f64, f64, f64) {
    let cy2 = s.cv_y * s.cv_y;
    let cp1sq = s.cv_p1 * s.cv_p1;
    let cp2sq = s.cv_p2 * s.cv_p2;
    let a1 = 1.0 + f1 * (cy2 + cp2sq * (0.25 - s.k_pb2));
    let a2 = f1 * cp1sq;
    let a3 = f1 * (s.k_pb1 * cp1sq - 0.5 * s.k_phi * cp2sq);
    (a1, a2, a3)
}

fn mse_t5(s: &AttributeSummary, f1: f64, mean_y: f64, w1: f64) -> f64 {
    let w2 = 1.0 - w1;
    let cy2 = s.cv_y * s.cv_y;
    let cp1sq = s.cv_p1 * s.cv_p1;
    let cp2sq = s.cv_p2 * s.cv_p2;
    mean_y
        * mean_y
        * f1
        * (cy2 + w1 * w1 * cp1sq + w2 * w2 * cp2sq
            - 2.0 * w1 * s.k_pb1 * cp1sq
            - 2.0 * w2 * s.k_pb2 * cp2sq
            + 2.0 * w1 * w2 * s.k_phi * cp2sq)
}

fn mse_t6(s: &AttributeSummary, f1: f64, mean_y: f64, pop_p1: f64, k61: f64, k62: f64) -> f64 {
    let (a1, a2, a3) = t6_blocks(s, f1);
    k61 * k61 * mean_y * mean_y * a1 + k62 * k62 * pop_p1 * pop_p1 * a2
        - 2.0 * k61 * k62 * pop_p1 * mean_y * a3
        + (1.0 - 2.0 * k61) * mean_y * mean_y
}

#[allow(clippy::too_many_arguments)]
fn mse_t7(
    s: &AttributeSummary,
    f1: f64,
    mean_y: f64,
    pop_p1: f64,
    pop_p2: f64,
    k71: f64,
    k72: f64,
) -> f64 {
    let cy2 = s.cv_y * s.cv_y;
    let cp1sq = s.cv_p1 * s.cv_p1;
    let cp2sq = s.cv_p2 * s.cv_p2;
    mean_y * mean_y * f1 * cy2
        + k71 * k71 * pop_p1 * pop_p1 * f1 * cp1sq
        + k72 * k72 * pop_p2 * pop_p2 * f1 * cp2sq
        - 2.0 * k71 * pop_p1 * mean_y * f1 * s.k_pb1 * cp1sq
        - 2.0 * k72 * pop_p2 * mean_y * f1 * s.k_pb2 * cp2sq
        + 2.0 * k71 * k72 * pop_p1 * pop_p2 * f1 * s.k_phi * cp2sq
}

/// First-order bias/MSE/PRE table for t1..t7.
///
/// PRE is measured against `V(ȳ) = Ȳ² f1 C_y²`. The t6 bias is the
/// expansion expectation minus Ȳ.
pub fn attr_report(
    summary: &AttributeSummary,
    f1: f64,
    mean_y: f64,
    params: &AttributeParams,
    variant: MseVariant,
) -> Result<Vec<AttrReport>> {
    if f1 <= 0.0 {
        return Err(EstError::Design(format!("f1 must be positive, got {f1}")));
    }
    let s = summary;
    let cy2 = s.cv_y * s.cv_y;
    let cp1sq = s.cv_p1 * s.cv_p1;
    let cp2sq = s.cv_p2 * s.cv_p2;
    let v_mean = mean_y * mean_y * f1 * cy2;
    let t2_sq = match variant {
        MseVariant::AsPrinted => cp1sq,
        MseVariant::Corrected => cp2sq,
    };
    let rows = vec![
        AttrReport {
            estimator: AttributeEstimator::T1,
            bias1: mean_y * f1 * cp1sq * (1.0 - s.k_pb1),
            mse1: mean_y * mean_y * f1 * (cy2 + cp1sq * (1.0 - 2.0 * s.k_pb1)),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T2,
            bias1: mean_y * f1 * s.k_pb2 * cp2sq,
            mse1: mean_y * mean_y * f1 * (cy2 + t2_sq * (1.0 + 2.0 * s.k_pb2)),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T3,
            bias1: mean_y * f1 * cp1sq / 2.0 * (0.25 - s.k_pb1),
            mse1: mean_y * mean_y * f1 * (cy2 + cp1sq * (0.25 - s.k_pb1)),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T4,
            bias1: mean_y * f1 * cp2sq / 2.0 * (0.25 + s.k_pb2),
            mse1: mean_y * mean_y * f1 * (cy2 + cp2sq * (0.25 + s.k_pb2)),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T5,
            bias1: mean_y
                * f1
                * (params.w1 * cp1sq * (1.0 - s.k_pb1) + params.w2 * cp2sq * (1.0 - s.k_pb2)),
            mse1: mse_t5(s, f1, mean_y, params.w1),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T6,
            bias1: params.k61 * mean_y * (1.0 + f1 * cp2sq * (3.0 / 8.0 - 0.5 * s.k_pb2))
                + 0.5 * params.k62 * s.p1 * f1 * s.k_phi * cp2sq
                - mean_y,
            mse1: mse_t6(s, f1, mean_y, s.p1, params.k61, params.k62),
            pre: 0.0,
        },
        AttrReport {
            estimator: AttributeEstimator::T7,
            bias1: 0.0,
            mse1: mse_t7(s, f1, mean_y, s.p1, s.p2, params.k71, params.k72),
            pre: 0.0,
        },
    ];
    rows.into_iter()
        .map(|mut r| {
            r.pre = crate::dual::pre(v_mean, r.mse1)?;
            Ok(r)
        })
        .collect()
}

/// Optimal constants plus the MSE each tuned estimator achieves.
#[derive(Debug, Clone)]
pub struct AttrOptima {
    pub params: AttributeParams,
    pub mse_t5: f64,
    pub mse_t6: f64,
    pub mse_t7: f64,
}

/// Choose the tunable constants of t5, t6, t7.
///
/// In [`OptimaMode::AsPrinted`] every published closed form is evaluated
/// verbatim. In [`OptimaMode::Minimizing`] the exact quadratic programs
/// are solved: a 1-D vertex for t5 (with w2 = 1 − w1) and 2×2 linear
/// systems for t6 and t7. For t6/t7 both modes agree.
pub fn attr_optima(
    summary: &AttributeSummary,
    f1: f64,
    mean_y: f64,
    mode: OptimaMode,
) -> Result<AttrOptima> {
    let s = summary;
    let cp1sq = s.cv_p1 * s.cv_p1;
    let cp2sq = s.cv_p2 * s.cv_p2;
    let w1 = match mode {
        OptimaMode::AsPrinted => {
            let denom = cp1sq - s.k_phi * cp2sq;
            if denom == 0.0 {
                return Err(EstError::DegenerateOptimum(
                    "w1* denominator is zero".into(),
                ));
            }
            (s.k_pb1 * cp1sq - s.k_phi * cp2sq) / denom
        }
        OptimaMode::Minimizing => {
            // d/dw1 of the t5 quadratic: the curvature must be positive.
            let curv = cp1sq + cp2sq - 2.0 * s.k_phi * cp2sq;
            if curv <= 0.0 {
                return Err(EstError::DegenerateOptimum(
                    "t5 MSE quadratic is not positive definite".into(),
                ));
            }
            (cp2sq + s.k_pb1 * cp1sq - s.k_pb2 * cp2sq - s.k_phi * cp2sq) / curv
        }
    };

    let (a1, a2, a3) = t6_blocks(s, f1);
    let det6 = a1 * a2 - a3 * a3;
    if det6 == 0.0 {
        return Err(EstError::DegenerateOptimum(
            "t6 normal equations are singular".into(),
        ));
    }
    let k61 = a2 / det6;
    let k62 = mean_y * a3 / (s.p1 * det6);

    let det7 = cp1sq - s.k_phi * s.k_phi * cp2sq;
    if det7 == 0.0 {
        return Err(EstError::DegenerateOptimum(
            "t7 normal equations are singular".into(),
        ));
    }
    let k71 = mean_y / s.p1 * (s.k_pb1 * cp1sq - s.k_pb2 * s.k_phi * cp2sq) / det7;
    let k72 = mean_y / s.p2 * (s.k_pb2 * cp1sq - s.k_pb1 * s.k_phi * cp1sq) / det7;

    let params = AttributeParams::new(w1, k61, k62, k71, k72);
    Ok(AttrOptima {
        mse_t5: mse_t5(s, f1, mean_y, w1),
        mse_t6: mse_t6(s, f1, mean_y, s.p1, k61, k62),
        mse_t7: mse_t7(s, f1, mean_y, s.p1, s.p2, k71, k72),
        params,
    })
}
