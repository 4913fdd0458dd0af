//! SRSWOR design coefficients.
//!
//! For a sample of n from N without replacement the product moments of the
//! relative errors `e0 = (ȳ − Ȳ)/Ȳ`, `e1 = (x̄ − X̄)/X̄` are driven by four
//! coefficients:
//!
//! ```text
//! L1 = (N−n) / ((N−1) n)
//! L2 = (N−n)(N−2n) / ((N−1)(N−2) n²)
//! L3 = (N−n)(N² + N − 6nN + 6n²) / ((N−1)(N−2)(N−3) n³)
//! L4 = N(N−n)(N−n−1)(n−1) / ((N−1)(N−2)(N−3) n³)
//! ```
//!
//! L3 and L4 require N ≥ 4 and are `None` below that. The exactness of
//! these coefficients (with divisor-N moment ratios) is verified against
//! full enumeration in [`crate::oracle::verify_moment_identities`].

use crate::error::{EstError, Result};

/// Sample-design coefficients for SRSWOR (optionally two-phase).
#[derive(Debug, Clone, Copy)]
pub struct DesignCoefficients {
    /// Population size N.
    pub n_pop: usize,
    /// Sample size n.
    pub n_sample: usize,
    /// First-phase sample size n′ for two-phase designs.
    pub n_prime: Option<usize>,
    /// Sampling fraction f = n/N.
    pub f: f64,
    /// λ = (1−f)/n.
    pub lambda: f64,
    /// f1 = 1/n − 1/N. Algebraically equal to λ; both are kept so the
    /// identity can be asserted from independent arithmetic routes.
    pub f1: f64,
    /// g = n/(N−n), the dual-transform coefficient.
    pub g: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: Option<f64>,
    pub l4: Option<f64>,
}

impl DesignCoefficients {
    /// Build the coefficients for a design with 2 ≤ n < N (and, if given,
    /// n < n′ < N).
    pub fn new(n_pop: usize, n_sample: usize, n_prime: Option<usize>) -> Result<Self> {
        if n_sample < 2 || n_sample >= n_pop {
            return Err(EstError::Design(format!(
                "need 2 <= n < N, got n = {n_sample}, N = {n_pop}"
            )));
        }
        if let Some(np) = n_prime {
            if np <= n_sample || np >= n_pop {
                return Err(EstError::Design(format!(
                    "need n < n' < N, got n = {n_sample}, n' = {np}, N = {n_pop}"
                )));
            }
        }
        let nf = n_pop as f64;
        let n = n_sample as f64;
        let f = n / nf;
        let l1 = (nf - n) / ((nf - 1.0) * n);
        let l2 = (nf - n) * (nf - 2.0 * n) / ((nf - 1.0) * (nf - 2.0) * n * n);
        let (l3, l4) = if n_pop >= 4 {
            let d = (nf - 1.0) * (nf - 2.0) * (nf - 3.0) * n * n * n;
            let l3 = (nf - n) * (nf * nf + nf - 6.0 * n * nf + 6.0 * n * n) / d;
            let l4 = nf * (nf - n) * (nf - n - 1.0) * (n - 1.0) / d;
            (Some(l3), Some(l4))
        } else {
            (None, None)
        };
        Ok(DesignCoefficients {
            n_pop,
            n_sample,
            n_prime,
            f,
            lambda: (1.0 - f) / n,
            f1: 1.0 / n - 1.0 / nf,
            g: n / (nf - n),
            l1,
            l2,
            l3,
            l4,
        })
    }

    /// Replace the L coefficients (for studies of degenerate cases, e.g.
    /// zeroing L2..L4 to collapse second-order formulas to first order).
    pub fn with_l_coefficients(mut self, l1: f64, l2: f64, l3: f64, l4: f64) -> Self {
        self.l1 = l1;
        self.l2 = l2;
        self.l3 = Some(l3);
        self.l4 = Some(l4);
        self
    }

    pub fn require_l3(&self) -> Result<f64> {
        self.l3
            .ok_or_else(|| EstError::IncompleteInput("L3 (needs N >= 4)".into()))
    }

    pub fn require_l4(&self) -> Result<f64> {
        self.l4
            .ok_or_else(|| EstError::IncompleteInput("L4 (needs N >= 4)".into()))
    }

    /// 1/n − 1/n′, the extra design factor of two-phase formulas.
    pub fn theta_two_phase(&self) -> Result<f64> {
        let np = self
            .n_prime
            .ok_or_else(|| EstError::IncompleteInput("nPrime".into()))?;
        Ok(1.0 / self.n_sample as f64 - 1.0 / np as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_matches_direct_arithmetic() {
        let c = DesignCoefficients::new(340, 70, None).unwrap();
        assert!((c.l1 - 270.0 / (339.0 * 70.0)).abs() < 1e-15);
        assert!((c.l1 - 0.0113776).abs() < 1e-6);
    }

    #[test]
    fn g_and_lambda_from_definitions() {
        let c = DesignCoefficients::new(10, 4, None).unwrap();
        assert!((c.g - 4.0 / 6.0).abs() < 1e-15);
        assert!((c.lambda - 0.15).abs() < 1e-15);
    }

    #[test]
    fn l2_vanishes_at_half_sample() {
        let c = DesignCoefficients::new(4, 2, None).unwrap();
        assert_eq!(c.l2, 0.0);
    }

    #[test]
    fn f1_equals_lambda_to_machine_precision() {
        for (n_pop, n) in [(10, 4), (61, 20), (176, 16), (340, 70), (48, 6)] {
            let c = DesignCoefficients::new(n_pop, n, None).unwrap();
            assert!(
                (c.f1 - c.lambda).abs() <= 1e-15 * c.lambda.abs().max(1.0),
                "f1 != lambda for N={n_pop}, n={n}"
            );
        }
    }

    #[test]
    fn bounds_are_enforced() {
        assert!(DesignCoefficients::new(10, 10, None).is_err());
        assert!(DesignCoefficients::new(10, 1, None).is_err());
        assert!(DesignCoefficients::new(10, 4, Some(3)).is_err());
        assert!(DesignCoefficients::new(10, 4, Some(10)).is_err());
    }

    #[test]
    fn small_population_has_no_l3_l4() {
        let c = DesignCoefficients::new(3, 2, None).unwrap();
        assert!(c.l3.is_none());
        assert!(c.require_l3().is_err());
    }
}
