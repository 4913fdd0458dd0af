//! Unit-level finite populations.
//!
//! A [`FinitePopulation`] is an ordered list of unit records. Ordering is
//! significant: systematic sampling draws by position. Optional columns
//! (auxiliary variables `x`, `z`, binary attributes `phi1`, `phi2`, stratum
//! labels, responder flags) are present for all units or for none.

use crate::error::{EstError, Result};

/// An ordered finite population of `N ≥ 2` units.
#[derive(Debug, Clone)]
pub struct FinitePopulation {
    y: Vec<f64>,
    x: Option<Vec<f64>>,
    z: Option<Vec<f64>>,
    phi1: Option<Vec<u8>>,
    phi2: Option<Vec<u8>>,
    stratum: Option<Vec<String>>,
    responder: Option<Vec<bool>>,
}

impl FinitePopulation {
    /// Start building a population from its study-variable column.
    pub fn builder(y: Vec<f64>) -> PopulationBuilder {
        PopulationBuilder {
            pop: FinitePopulation {
                y,
                x: None,
                z: None,
                phi1: None,
                phi2: None,
                stratum: None,
                responder: None,
            },
        }
    }

    /// Convenience constructor for a y-and-x population.
    pub fn from_xy(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        FinitePopulation::builder(y).x(x).build()
    }

    /// Convenience constructor for a y, x, z population.
    pub fn from_xyz(x: Vec<f64>, y: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        FinitePopulation::builder(y).x(x).z(z).build()
    }

    /// Number of units N.
    pub fn n_units(&self) -> usize {
        self.y.len()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x(&self) -> Option<&[f64]> {
        self.x.as_deref()
    }

    pub fn z(&self) -> Option<&[f64]> {
        self.z.as_deref()
    }

    pub fn phi1(&self) -> Option<&[u8]> {
        self.phi1.as_deref()
    }

    pub fn phi2(&self) -> Option<&[u8]> {
        self.phi2.as_deref()
    }

    pub fn stratum(&self) -> Option<&[String]> {
        self.stratum.as_deref()
    }

    pub fn responder(&self) -> Option<&[bool]> {
        self.responder.as_deref()
    }

    pub fn require_x(&self) -> Result<&[f64]> {
        self.x()
            .ok_or_else(|| EstError::Schema("column x is required".into()))
    }

    pub fn require_z(&self) -> Result<&[f64]> {
        self.z()
            .ok_or_else(|| EstError::Schema("column z is required".into()))
    }

    pub fn require_phi(&self) -> Result<(&[u8], &[u8])> {
        match (self.phi1(), self.phi2()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(EstError::Schema(
                "columns phi1 and phi2 are required".into(),
            )),
        }
    }

    pub fn require_responder(&self) -> Result<&[bool]> {
        self.responder
            .as_deref()
            .ok_or_else(|| EstError::Schema("responder column is required".into()))
    }

    /// A copy with units permuted by `order` (mainly for invariance tests).
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n_units() {
            return Err(EstError::Schema("permutation length mismatch".into()));
        }
        fn pick<T: Clone>(v: &Option<Vec<T>>, order: &[usize]) -> Option<Vec<T>> {
            v.as_ref()
                .map(|col| order.iter().map(|&i| col[i].clone()).collect())
        }
        Ok(FinitePopulation {
            y: order.iter().map(|&i| self.y[i]).collect(),
            x: pick(&self.x, order),
            z: pick(&self.z, order),
            phi1: pick(&self.phi1, order),
            phi2: pick(&self.phi2, order),
            stratum: pick(&self.stratum, order),
            responder: pick(&self.responder, order),
        })
    }
}

/// Builder enforcing the population invariants at `build` time.
pub struct PopulationBuilder {
    pop: FinitePopulation,
}

impl PopulationBuilder {
    pub fn x(mut self, x: Vec<f64>) -> Self {
        self.pop.x = Some(x);
        self
    }

    pub fn z(mut self, z: Vec<f64>) -> Self {
        self.pop.z = Some(z);
        self
    }

    pub fn phi1(mut self, phi1: Vec<u8>) -> Self {
        self.pop.phi1 = Some(phi1);
        self
    }

    pub fn phi2(mut self, phi2: Vec<u8>) -> Self {
        self.pop.phi2 = Some(phi2);
        self
    }

    pub fn stratum(mut self, stratum: Vec<String>) -> Self {
        self.pop.stratum = Some(stratum);
        self
    }

    pub fn responder(mut self, responder: Vec<bool>) -> Self {
        self.pop.responder = Some(responder);
        self
    }

    pub fn build(self) -> Result<FinitePopulation> {
        let pop = self.pop;
        let n = pop.y.len();
        if n < 2 {
            return Err(EstError::Schema(format!(
                "population needs N >= 2, got {n}"
            )));
        }
        if !pop.y.iter().all(|v| v.is_finite()) {
            return Err(EstError::Schema(
                "column y contains non-finite values".into(),
            ));
        }
        for (name, col) in [("x", &pop.x), ("z", &pop.z)] {
            if let Some(col) = col {
                if col.len() != n {
                    return Err(EstError::Schema(format!(
                        "column {name} has {} rows, expected {n}",
                        col.len()
                    )));
                }
                if !col.iter().all(|v| v.is_finite()) {
                    return Err(EstError::Schema(format!(
                        "column {name} contains non-finite values"
                    )));
                }
            }
        }
        for (name, col) in [("phi1", &pop.phi1), ("phi2", &pop.phi2)] {
            if let Some(col) = col {
                if col.len() != n {
                    return Err(EstError::Schema(format!(
                        "column {name} has {} rows, expected {n}",
                        col.len()
                    )));
                }
                if let Some(bad) = col.iter().find(|&&v| v > 1) {
                    return Err(EstError::Schema(format!(
                        "attribute column {name} must contain only 0/1, found {bad}"
                    )));
                }
            }
        }
        if let Some(col) = &pop.stratum {
            if col.len() != n {
                return Err(EstError::Schema("stratum column length mismatch".into()));
            }
        }
        if let Some(col) = &pop.responder {
            if col.len() != n {
                return Err(EstError::Schema("responder column length mismatch".into()));
            }
        }
        Ok(pop)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_tiny_population() {
        assert!(FinitePopulation::builder(vec![1.0]).build().is_err());
    }

    #[test]
    fn rejects_length_mismatch() {
        let err = FinitePopulation::builder(vec![1.0, 2.0, 3.0])
            .x(vec![1.0, 2.0])
            .build();
        assert!(matches!(err, Err(EstError::Schema(_))));
    }

    #[test]
    fn rejects_non_binary_attribute() {
        let err = FinitePopulation::builder(vec![1.0, 2.0])
            .phi1(vec![0, 2])
            .build();
        assert!(matches!(err, Err(EstError::Schema(_))));
    }
}
