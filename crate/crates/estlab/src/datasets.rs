//! Bundled reference datasets.
//!
//! Six data sections from the survey-sampling literature, stored with
//! full provenance: every constant carries a citation, and values that
//! are calibrated (not published) or known to disagree with their own raw
//! data are flagged as such. Typed accessors hand each dataset to the
//! estimator module that consumes it.

use crate::design::DesignCoefficients;
use crate::error::{EstError, Result};
use crate::moments::{MomentTable, PartialMomentTable};
use crate::population::FinitePopulation;
use crate::summary::{AttributeSummary, Divisor, SummaryStats};
use crate::systematic::{NonResponseSpec, SystematicSummary};

/// Identifiers of the bundled datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DatasetId {
    /// Forest strips: timber volume with strip length, systematic design.
    Ch1Murthy,
    /// Pakistani rice districts: production with two farm-size attributes.
    Ch2PakRice,
    /// Villages near Aligarh: agricultural labour with village area
    /// (moment constants only).
    Ch3Aligarh,
    /// Employment figures for 61 areas (summary constants only).
    Ch4Pop1,
    /// Hive disease incidence, 10 raw rows with temperature and
    /// flowering date.
    Ch4Pop2,
    /// Farm survey standardized moments for variance estimation.
    Ch5Murthy67,
}

impl DatasetId {
    pub fn all() -> [DatasetId; 6] {
        [
            DatasetId::Ch1Murthy,
            DatasetId::Ch2PakRice,
            DatasetId::Ch3Aligarh,
            DatasetId::Ch4Pop1,
            DatasetId::Ch4Pop2,
            DatasetId::Ch5Murthy67,
        ]
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DatasetId::Ch1Murthy => "ch1-murthy",
            DatasetId::Ch2PakRice => "ch2-pakrice",
            DatasetId::Ch3Aligarh => "ch3-aligarh",
            DatasetId::Ch4Pop1 => "ch4-pop1",
            DatasetId::Ch4Pop2 => "ch4-pop2",
            DatasetId::Ch5Murthy67 => "ch5-murthy67",
        }
    }
}

impl std::str::FromStr for DatasetId {
    type Err = EstError;

    fn from_str(s: &str) -> Result<Self> {
        DatasetId::all()
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| EstError::UnknownId(format!("dataset '{s}'")))
    }
}

/// Provenance class of one stored constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstFlag {
    /// Taken verbatim from the cited source.
    AsPublished,
    /// Not published; calibrated against published derived values.
    Calibrated,
    /// Published, but inconsistent with the published raw data.
    KnownTypo,
}

/// One named constant with its citation.
#[derive(Debug, Clone)]
pub struct Constant {
    pub name: &'static str,
    pub value: f64,
    pub citation: &'static str,
    pub flag: ConstFlag,
    pub note: Option<&'static str>,
}

/// A dataset: constants with provenance, optional raw rows, free-form
/// notes about known quirks.
#[derive(Debug, Clone)]
pub struct DatasetDescriptor {
    pub id: DatasetId,
    pub title: &'static str,
    pub source: &'static str,
    pub constants: Vec<Constant>,
    pub raw: Option<FinitePopulation>,
    pub notes: Vec<&'static str>,
}

impl DatasetDescriptor {
    pub fn constant(&self, name: &str) -> Result<f64> {
        self.constants
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.value)
            .ok_or_else(|| EstError::IncompleteInput(format!("constant '{name}'")))
    }
}

fn c(name: &'static str, value: f64, citation: &'static str) -> Constant {
    Constant {
        name,
        value,
        citation,
        flag: ConstFlag::AsPublished,
        note: None,
    }
}

/// The ten raw rows of the hive-disease population: y = % hives affected,
/// x = mean January temperature, z = flowering date.
pub fn ch4_pop2_population() -> FinitePopulation {
    FinitePopulation::from_xyz(
        vec![35.0, 35.0, 38.0, 40.0, 40.0, 42.0, 44.0, 46.0, 50.0, 50.0],
        vec![49.0, 40.0, 41.0, 46.0, 52.0, 59.0, 53.0, 61.0, 55.0, 64.0],
        vec![
            200.0, 212.0, 211.0, 212.0, 203.0, 194.0, 194.0, 188.0, 196.0, 190.0,
        ],
    )
    .expect("static rows are well formed")
}

/// Fetch a bundled dataset by id.
pub fn builtin_dataset(id: DatasetId) -> DatasetDescriptor {
    match id {
        DatasetId::Ch1Murthy => {
            let cite = "Murthy (1967), Sampling Theory and Methods, pp. 131-132";
            DatasetDescriptor {
                id,
                title: "Black Mountain forest strips: timber volume (y) by strip length (x)",
                source: cite,
                constants: vec![
                    c("N", 176.0, cite),
                    c("n", 16.0, cite),
                    c("meanY", 282.6136, cite),
                    c("meanX", 6.9943, cite),
                    c("SY2", 24114.67, cite),
                    c("SX2", 8.76, cite),
                    c("rho", 0.8710, cite),
                    c(
                        "SY2nr",
                        18086.0025,
                        "stated as (3/4) SY2 for the worked example",
                    ),
                    Constant {
                        name: "rhoY",
                        value: -0.02095,
                        citation: cite,
                        flag: ConstFlag::Calibrated,
                        note: Some(
                            "intraclass correlations are not published; calibrated so the \
                             plain-mean variance matches the published 1140.69 at W2 = 0.1, L = 2",
                        ),
                    },
                    Constant {
                        name: "rhoX",
                        value: -0.02095,
                        citation: cite,
                        flag: ConstFlag::Calibrated,
                        note: Some(
                            "set equal to rhoY (the source reports them approximately equal)",
                        ),
                    },
                    c("L", 2.0, "worked example subsampling factor"),
                ],
                raw: None,
                notes: vec![
                    "With this single calibration the ratio (alpha = 1) and plain-mean \
                     (alpha = 4) rows of the published MSE table reproduce to 0.5%; the \
                     product, dual and optimum rows do not reproduce under any single \
                     (rhoX, rhoY) pair and are reported as documented discrepancies.",
                ],
            }
        }
        DatasetId::Ch2PakRice => {
            let cite = "Government of Pakistan (2004), Crops Area Production by Districts";
            DatasetDescriptor {
                id,
                title: "Rice production (y) in 73 districts with two farm-size attributes",
                source: cite,
                constants: vec![
                    c("N", 73.0, cite),
                    c("meanY", 61.3, cite),
                    c("P1", 0.4247, cite),
                    c("P2", 0.3425, cite),
                    c("Sy2", 12371.4, cite),
                    c("Sphi1_2", 0.225490, cite),
                    c("Sphi2_2", 0.228311, cite),
                    c("rhoPb1", 0.621, cite),
                    c("rhoPb2", 0.673, cite),
                    c("rhoPhi", 0.889, cite),
                ],
                raw: None,
                notes: vec![
                    "No sample size is published; efficiency values that depend on n \
                     (the difference-type pair) are reported for a best-fit n.",
                ],
            }
        }
        DatasetId::Ch3Aligarh => {
            let cite = "1981 Uttar Pradesh District Census Handbook, Aligarh \
                        (340 villages, Koil police station)";
            DatasetDescriptor {
                id,
                title: "Agricultural labour (y) by village area (x): moment ratios",
                source: cite,
                constants: vec![
                    c("N", 340.0, cite),
                    c("n", 70.0, cite),
                    Constant {
                        name: "nPrime",
                        value: 120.0,
                        citation: cite,
                        flag: ConstFlag::AsPublished,
                        note: Some("published but unused: no two-phase design appears"),
                    },
                    c("meanY", 73.76765, cite),
                    c("meanX", 2419.04, cite),
                    c("C02", 0.7614, cite),
                    c("C11", 0.2667, cite),
                    c("C03", 2.6942, cite),
                    Constant {
                        name: "C12_first",
                        value: 0.0747,
                        citation: cite,
                        flag: ConstFlag::AsPublished,
                        note: Some("printed twice under the same index; kept under distinct keys"),
                    },
                    Constant {
                        name: "C12_second",
                        value: 0.1589,
                        citation: cite,
                        flag: ConstFlag::AsPublished,
                        note: Some("second value printed as C12; plausibly C21"),
                    },
                    c("C30", 0.7877, cite),
                    c("C13", 0.1321, cite),
                    c("C31", 0.8851, cite),
                    c("C04", 17.4275, cite),
                    c("C22", 0.8424, cite),
                    c("C40", 1.3051, cite),
                    c(
                        "mse1AtOptimum",
                        39.217225,
                        "published common first-order optimum MSE",
                    ),
                ],
                raw: None,
                notes: vec![
                    "C20 is not published. The moment table is stored without it; \
                     diagnostics back-solve C20 ≈ 0.556 from the published optimum MSE \
                     rather than guessing silently.",
                ],
            }
        }
        DatasetId::Ch4Pop1 => {
            let cite = "Singh (1969), Sankhya B 31, p. 377";
            DatasetDescriptor {
                id,
                title: "Females employed (y) with females in service (x) and educated females (z)",
                source: cite,
                constants: vec![
                    c("N", 61.0, cite),
                    c("n", 20.0, cite),
                    c("meanY", 7.46, cite),
                    c("meanX", 5.31, cite),
                    c("meanZ", 179.0, cite),
                    c("Sy2", 28.0818, cite),
                    c("Sx2", 16.1761, cite),
                    c("Sz2", 2028.1953, cite),
                    c("rhoYX", 0.7737, cite),
                    c("rhoYZ", -0.2070, cite),
                    c("rhoZX", -0.0033, cite),
                ],
                raw: None,
                notes: vec![],
            }
        }
        DatasetId::Ch4Pop2 => {
            let cite = "Johnston (1972), Econometric Methods, 2nd ed., p. 171";
            DatasetDescriptor {
                id,
                title: "Hives affected by disease (y) with January temperature (x) and \
                        flowering date (z), 10 raw rows",
                source: cite,
                constants: vec![
                    c("N", 10.0, cite),
                    c("n", 4.0, cite),
                    c("meanY", 52.0, cite),
                    c("meanX", 42.0, cite),
                    c("meanZ", 200.0, cite),
                    c("Sy2", 65.9776, cite),
                    c("Sx2", 29.988, cite),
                    c("Sz2", 84.0, cite),
                    c("rhoYX", 0.8, cite),
                    c("rhoYZ", -0.94, cite),
                    Constant {
                        name: "rhoZX",
                        value: -0.073,
                        citation: cite,
                        flag: ConstFlag::KnownTypo,
                        note: Some(
                            "the published summary prints -0.073; the ten raw rows give \
                             -330/450 = -0.7333, so raw-data covariances are used wherever \
                             z-x terms enter",
                        ),
                    },
                ],
                raw: Some(ch4_pop2_population()),
                notes: vec![
                    "Raw rows are authoritative for covariance-dependent quantities; the \
                     published summary constants are kept for the estimators that do not \
                     involve the z-x covariance.",
                ],
            }
        }
        DatasetId::Ch5Murthy67 => {
            let cite = "Murthy (1967), Sampling Theory and Methods";
            DatasetDescriptor {
                id,
                title: "Farm survey standardized central moments for variance estimation",
                source: cite,
                constants: vec![
                    c("d400", 3.726, cite),
                    c("d040", 2.912, cite),
                    Constant {
                        name: "d004",
                        value: 2.808,
                        citation: cite,
                        flag: ConstFlag::AsPublished,
                        note: Some("printed under the impossible index 044; stored as 004"),
                    },
                    c("d022", 2.73, cite),
                    c("d202", 2.979, cite),
                    c("d220", 3.105, cite),
                    c("cx", 0.5938, cite),
                    c("cy", 0.7531, cite),
                    c("cz", 0.7205, cite),
                    c("rhoYZ", 0.904, cite),
                    c("rhoXY", 0.98, cite),
                    c("n", 7.0, cite),
                    c("nPrime", 15.0, cite),
                    c("meanX", 747.5882, cite),
                    c("meanY", 199.4412, cite),
                    c("meanZ", 208.8824, cite),
                ],
                raw: None,
                notes: vec![],
            }
        }
    }
}

/// Typed view of the forest-strip dataset for the systematic module.
pub fn ch1_inputs(w2: f64) -> Result<(SystematicSummary, NonResponseSpec)> {
    let d = builtin_dataset(DatasetId::Ch1Murthy);
    let sum = SystematicSummary::new(
        d.constant("N")? as usize,
        d.constant("n")? as usize,
        d.constant("rhoY")?,
        d.constant("rhoX")?,
        d.constant("meanY")?,
        d.constant("meanX")?,
        d.constant("SY2")?,
        d.constant("SX2")?,
        d.constant("rho")?,
    )?;
    let nr = NonResponseSpec::new(w2, d.constant("L")?, d.constant("SY2nr")?)?;
    Ok((sum, nr))
}

/// Typed view of the rice-district dataset: attribute summary, mean of y
/// and population size.
pub fn ch2_inputs() -> Result<(AttributeSummary, f64, usize)> {
    let d = builtin_dataset(DatasetId::Ch2PakRice);
    let mean_y = d.constant("meanY")?;
    let summary = AttributeSummary::from_parts(
        d.constant("N")? as usize,
        mean_y,
        d.constant("Sy2")?,
        d.constant("P1")?,
        d.constant("P2")?,
        d.constant("Sphi1_2")?,
        d.constant("Sphi2_2")?,
        d.constant("rhoPb1")?,
        d.constant("rhoPb2")?,
        d.constant("rhoPhi")?,
    )?;
    Ok((summary, mean_y, d.constant("N")? as usize))
}

/// Typed view of the village moment data: the published moment table
/// (C20 absent; `c12_reading` picks which printed value stands for C12,
/// the other is stored as C21), the design coefficients and mean of y.
pub fn ch3_inputs(c12_first_is_c12: bool) -> Result<(MomentTable, DesignCoefficients, f64)> {
    let d = builtin_dataset(DatasetId::Ch3Aligarh);
    let (c12, c21) = if c12_first_is_c12 {
        (d.constant("C12_first")?, d.constant("C12_second")?)
    } else {
        (d.constant("C12_second")?, d.constant("C12_first")?)
    };
    // C20 is deliberately absent (never published); everything else is.
    let table = MomentTable::from_entries([
        ((0, 2), d.constant("C02")?),
        ((1, 1), d.constant("C11")?),
        ((0, 3), d.constant("C03")?),
        ((1, 2), c12),
        ((2, 1), c21),
        ((3, 0), d.constant("C30")?),
        ((1, 3), d.constant("C13")?),
        ((3, 1), d.constant("C31")?),
        ((0, 4), d.constant("C04")?),
        ((2, 2), d.constant("C22")?),
        ((4, 0), d.constant("C40")?),
    ]);
    let coeffs =
        DesignCoefficients::new(d.constant("N")? as usize, d.constant("n")? as usize, None)?;
    Ok((table, coeffs, d.constant("meanY")?))
}

/// Typed view of the employment summary.
pub fn ch4_pop1_inputs() -> Result<(SummaryStats, DesignCoefficients)> {
    let d = builtin_dataset(DatasetId::Ch4Pop1);
    let stats = SummaryStats::from_parts(
        d.constant("N")? as usize,
        d.constant("meanY")?,
        d.constant("meanX")?,
        d.constant("meanZ")?,
        d.constant("Sy2")?,
        d.constant("Sx2")?,
        d.constant("Sz2")?,
        d.constant("rhoYX")?,
        d.constant("rhoYZ")?,
        d.constant("rhoZX")?,
    );
    let coeffs =
        DesignCoefficients::new(d.constant("N")? as usize, d.constant("n")? as usize, None)?;
    Ok((stats, coeffs))
}

/// Typed views of the hive-disease population: raw-data summary
/// (divisor N − 1), published-constant summary, and design coefficients.
pub fn ch4_pop2_inputs() -> Result<(SummaryStats, SummaryStats, DesignCoefficients)> {
    let d = builtin_dataset(DatasetId::Ch4Pop2);
    let raw_stats = crate::summary::summarize_numeric(&ch4_pop2_population(), Divisor::NMinus1)?;
    let printed = SummaryStats::from_parts(
        d.constant("N")? as usize,
        d.constant("meanY")?,
        d.constant("meanX")?,
        d.constant("meanZ")?,
        d.constant("Sy2")?,
        d.constant("Sx2")?,
        d.constant("Sz2")?,
        d.constant("rhoYX")?,
        d.constant("rhoYZ")?,
        d.constant("rhoZX")?,
    );
    let coeffs =
        DesignCoefficients::new(d.constant("N")? as usize, d.constant("n")? as usize, None)?;
    Ok((raw_stats, printed, coeffs))
}

/// Typed view of the farm-survey moments: the standardized moment table
/// with the sample sizes n and n′.
pub fn ch5_inputs() -> Result<(PartialMomentTable, usize, usize)> {
    let d = builtin_dataset(DatasetId::Ch5Murthy67);
    let table = PartialMomentTable::from_entries([
        ((4, 0, 0), d.constant("d400")?),
        ((0, 4, 0), d.constant("d040")?),
        ((0, 0, 4), d.constant("d004")?),
        ((0, 2, 2), d.constant("d022")?),
        ((2, 0, 2), d.constant("d202")?),
        ((2, 2, 0), d.constant("d220")?),
    ]);
    Ok((
        table,
        d.constant("n")? as usize,
        d.constant("nPrime")? as usize,
    ))
}
