//! CSV ingestion.
//!
//! Input files are header-row CSV, comma-separated, UTF-8, '.' decimal
//! point, no thousands separators. A [`ColumnSchema`] maps the roles
//! (y, x, z, phi1, phi2, stratum, responder) to column names; parse
//! failures are reported with their line number.

use std::path::Path;
use std::str::FromStr;

use crate::error::{EstError, Result};
use crate::population::FinitePopulation;

/// Role-to-column-name mapping, parsed from `y=COL,x=COL,...`.
#[derive(Debug, Clone, Default)]
pub struct ColumnSchema {
    pub y: String,
    pub x: Option<String>,
    pub z: Option<String>,
    pub phi1: Option<String>,
    pub phi2: Option<String>,
    pub stratum: Option<String>,
    pub responder: Option<String>,
}

impl FromStr for ColumnSchema {
    type Err = EstError;

    fn from_str(s: &str) -> Result<Self> {
        let mut schema = ColumnSchema::default();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (role, col) = part.split_once('=').ok_or_else(|| {
                EstError::Schema(format!("schema entry '{part}' is not role=column"))
            })?;
            let col = col.trim().to_string();
            match role.trim() {
                "y" => schema.y = col,
                "x" => schema.x = Some(col),
                "z" => schema.z = Some(col),
                "phi1" => schema.phi1 = Some(col),
                "phi2" => schema.phi2 = Some(col),
                "stratum" => schema.stratum = Some(col),
                "responder" => schema.responder = Some(col),
                other => {
                    return Err(EstError::Schema(format!("unknown schema role '{other}'")));
                }
            }
        }
        if schema.y.is_empty() {
            return Err(EstError::Schema("schema must map the y column".into()));
        }
        Ok(schema)
    }
}

/// Load a population from a CSV file according to the schema.
///
/// Attribute columns must contain only 0/1; responder columns accept
/// 0/1/true/false. Rows keep file order (systematic designs sample by
/// position).
pub fn load_population(path: &Path, schema: &ColumnSchema) -> Result<FinitePopulation> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| EstError::Io {
            path: path.display().to_string(),
            source: to_io(e),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| EstError::Io {
            path: path.display().to_string(),
            source: to_io(e),
        })?
        .clone();
    let col_index = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| EstError::Schema(format!("missing column '{name}' in header")))
    };
    let iy = col_index(&schema.y)?;
    let ix = schema.x.as_deref().map(col_index).transpose()?;
    let iz = schema.z.as_deref().map(col_index).transpose()?;
    let ip1 = schema.phi1.as_deref().map(col_index).transpose()?;
    let ip2 = schema.phi2.as_deref().map(col_index).transpose()?;
    let istr = schema.stratum.as_deref().map(col_index).transpose()?;
    let ires = schema.responder.as_deref().map(col_index).transpose()?;

    let mut y = Vec::new();
    let mut x = Vec::new();
    let mut z = Vec::new();
    let mut phi1 = Vec::new();
    let mut phi2 = Vec::new();
    let mut stratum = Vec::new();
    let mut responder = Vec::new();

    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 2; // header is line 1
        let record = record.map_err(|e| EstError::Parse {
            line,
            msg: e.to_string(),
        })?;
        let num = |i: usize| -> Result<f64> {
            let cell = record.get(i).ok_or_else(|| EstError::Parse {
                line,
                msg: format!("missing cell {i}"),
            })?;
            cell.parse::<f64>().map_err(|_| EstError::Parse {
                line,
                msg: format!("cell '{cell}' is not numeric"),
            })
        };
        let bit = |i: usize| -> Result<u8> {
            let v = num(i)?;
            if v == 0.0 || v == 1.0 {
                Ok(v as u8)
            } else {
                Err(EstError::Parse {
                    line,
                    msg: format!("attribute cell '{v}' is not 0/1"),
                })
            }
        };
        y.push(num(iy)?);
        if let Some(i) = ix {
            x.push(num(i)?);
        }
        if let Some(i) = iz {
            z.push(num(i)?);
        }
        if let Some(i) = ip1 {
            phi1.push(bit(i)?);
        }
        if let Some(i) = ip2 {
            phi2.push(bit(i)?);
        }
        if let Some(i) = istr {
            stratum.push(record.get(i).unwrap_or_default().to_string());
        }
        if let Some(i) = ires {
            let cell = record.get(i).unwrap_or_default();
            let flag = match cell {
                "1" | "true" | "TRUE" => true,
                "0" | "false" | "FALSE" => false,
                other => {
                    return Err(EstError::Parse {
                        line,
                        msg: format!("responder cell '{other}' is not 0/1/true/false"),
                    })
                }
            };
            responder.push(flag);
        }
    }

    let mut builder = FinitePopulation::builder(y);
    if ix.is_some() {
        builder = builder.x(x);
    }
    if iz.is_some() {
        builder = builder.z(z);
    }
    if ip1.is_some() {
        builder = builder.phi1(phi1);
    }
    if ip2.is_some() {
        builder = builder.phi2(phi2);
    }
    if istr.is_some() {
        builder = builder.stratum(stratum);
    }
    if ires.is_some() {
        builder = builder.responder(responder);
    }
    builder.build()
}

fn to_io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io,
        other => std::io::Error::other(format!("{other:?}")),
    }
}
