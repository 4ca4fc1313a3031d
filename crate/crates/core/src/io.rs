//! JSON interchange formats.
//!
//! Matrices are lists of rows; each entry is an `[re, im]` pair. Kets are
//! 0-based: row/column `i` is the basis ket usually written `|i+1⟩`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::certificates::{FamilyCertification, Verdict};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{FamilyTag, UnitarySet};

pub const FAMILY_FORMAT: &str = "melcert-unitaries-v1";
pub const REPORT_FORMAT: &str = "melcert-report-v1";
/// Unitarity is re-checked at this tolerance when a family file is loaded.
pub const LOAD_UNITARY_TOL: f64 = 1e-8;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Malformed("ragged matrix rows".into()));
    }
    let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    ComplexMatrix::from_row_major(r, c, data)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyFileV1 {
    pub format_version: String,
    pub d: usize,
    pub family: String,
    pub unitaries: Vec<MatrixJson>,
}

impl FamilyFileV1 {
    pub fn from_set(set: &UnitarySet) -> Self {
        Self {
            format_version: FAMILY_FORMAT.to_string(),
            d: set.d(),
            family: set.family().as_str().to_string(),
            unitaries: set.unitaries().iter().map(matrix_to_json).collect(),
        }
    }

    /// Validates the header, shapes and unitarity, and rebuilds the family.
    pub fn to_set(&self) -> Result<UnitarySet> {
        if self.format_version != FAMILY_FORMAT {
            return Err(Error::Malformed(format!(
                "format_version {:?}, expected {FAMILY_FORMAT:?}",
                self.format_version
            )));
        }
        let tag: FamilyTag = self.family.parse()?;
        if self.unitaries.is_empty() {
            return Err(Error::Malformed("family has no unitaries".into()));
        }
        let mats = self.unitaries.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        if let Some(m) = mats.iter().find(|m| m.dims() != (self.d, self.d)) {
            return Err(Error::Malformed(format!("matrix is {}x{} but d = {}", m.rows(), m.cols(), self.d)));
        }
        UnitarySet::with_tolerance(tag, mats, LOAD_UNITARY_TOL).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub margin: f64,
    pub bound: f64,
    pub kernel: f64,
}

/// Per-convention summary carried alongside the best outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub convention: String,
    pub intersection_dim: usize,
    pub certificate_form: String,
    pub bound: f64,
    pub min_margin: f64,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFileV1 {
    pub format_version: String,
    pub d: usize,
    pub family: String,
    pub convention: String,
    pub intersection_dim: usize,
    pub certificate_form: String,
    pub bound: f64,
    pub margins: Vec<f64>,
    pub verdict: String,
    pub tolerances: Tolerances,
    pub outcomes: Vec<OutcomeSummary>,
}

impl ReportFileV1 {
    pub fn from_certification(cert: &FamilyCertification, kernel_tol: f64) -> Self {
        let best = cert.best();
        let outcomes = cert
            .outcomes
            .iter()
            .map(|o| OutcomeSummary {
                convention: o.convention.as_str().to_string(),
                intersection_dim: o.intersection_dim,
                certificate_form: o.certificate.form.name().to_string(),
                bound: o.report.bound,
                min_margin: o.report.min_margin(),
                verdict: o.report.verdict.as_str().to_string(),
            })
            .collect();
        Self {
            format_version: REPORT_FORMAT.to_string(),
            d: cert.d,
            family: cert.family.as_str().to_string(),
            convention: best.convention.as_str().to_string(),
            intersection_dim: best.intersection_dim,
            certificate_form: best.certificate.form.name().to_string(),
            bound: best.report.bound,
            margins: best.report.margins.clone(),
            verdict: best.report.verdict.as_str().to_string(),
            tolerances: Tolerances {
                margin: best.report.margin_tolerance,
                bound: best.report.bound_tolerance,
                kernel: kernel_tol,
            },
            outcomes,
        }
    }

    pub fn recomputed_verdict(&self) -> Verdict {
        Verdict::from_margins(&self.margins, self.bound, self.tolerances.margin, self.tolerances.bound)
    }

    /// Checks the header and that the stored verdict follows from margins and bound.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != REPORT_FORMAT {
            return Err(Error::Malformed(format!("format_version {:?}", self.format_version)));
        }
        let expected = self.recomputed_verdict();
        if self.verdict != expected.as_str() {
            return Err(Error::Malformed(format!(
                "verdict {:?} does not follow from margins and bound ({expected})",
                self.verdict
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::case_d7;

    #[test]
    fn family_round_trip_is_bit_exact() {
        let set = case_d7().unwrap();
        let file = FamilyFileV1::from_set(&set);
        let back = FamilyFileV1::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(back, file);
        let rebuilt = back.to_set().unwrap();
        assert_eq!(rebuilt.unitaries(), set.unitaries());
        assert_eq!(rebuilt.family(), FamilyTag::D7);
    }

    #[test]
    fn rejects_malformed_family_files() {
        let mut file = FamilyFileV1::from_set(&case_d7().unwrap());
        file.format_version = "v0".into();
        assert!(file.to_set().is_err());

        let mut file = FamilyFileV1::from_set(&case_d7().unwrap());
        file.unitaries[0][0][0] = [2.0, 0.0];
        assert!(matches!(file.to_set(), Err(Error::Malformed(_))));

        let mut file = FamilyFileV1::from_set(&case_d7().unwrap());
        file.d = 6;
        assert!(file.to_set().is_err());

        let mut file = FamilyFileV1::from_set(&case_d7().unwrap());
        file.unitaries[1].pop();
        assert!(file.to_set().is_err());

        assert!(FamilyFileV1::from_json("{\"d\": 3}").is_err());
    }
}
