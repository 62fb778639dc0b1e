//! JSON interchange: state files and solver results.
//!
//! A state file is a UTF-8 JSON object
//!
//! ```json
//! { "dims": [2, 2],
//!   "matrix": [[[0.5, 0], [0, 0], [0, 0], [0.5, 0]], ...],
//!   "label": "optional text" }
//! ```
//!
//! with the density matrix given row-major and every entry as `[re, im]`.
//! Loading validates the matrix as a density matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::solver::MeasureResult;
use crate::states::DensityMatrix;

/// On-disk form of a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let m = rho.matrix();
        let matrix = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        StateFile {
            dims: rho.dims().to_vec(),
            matrix,
            label,
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(Error::InvalidState("matrix has no rows".into()));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        let data: Vec<C64> = self.matrix.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
        DensityMatrix::new(ComplexMatrix::from_vec(n, n, data)?, self.dims.clone())
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rsplit_once(" at line ") {
        Some((m, _)) => m.to_string(),
        None => text,
    };
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message,
    }
}

/// Parses the text of a state file. Syntax and schema problems give
/// [`Error::Parse`]; a well-formed file holding an invalid state gives the
/// corresponding validation error.
pub fn parse_state_file(text: &str) -> Result<(DensityMatrix, Option<String>)> {
    let file: StateFile = serde_json::from_str(text).map_err(parse_error)?;
    let rho = file.to_density()?;
    Ok((rho, file.label))
}

pub fn state_file_json(rho: &DensityMatrix, label: Option<String>) -> String {
    serde_json::to_string_pretty(&StateFile::from_density(rho, label)).expect("state files serialize")
}

/// Parses a serialized [`MeasureResult`] and checks its internal
/// consistency with [`MeasureResult::validate`].
pub fn parse_measure_result(text: &str) -> Result<MeasureResult> {
    let result: MeasureResult = serde_json::from_str(text).map_err(parse_error)?;
    result.validate()?;
    Ok(result)
}

pub fn measure_result_json(result: &MeasureResult) -> String {
    serde_json::to_string_pretty(result).expect("results serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{ree, SolverConfig};
    use crate::states::{bell_state, werner_state, BellState};

    #[test]
    fn state_round_trip() {
        let w = werner_state(0.625).unwrap();
        let text = state_file_json(&w, Some("werner".into()));
        let (back, label) = parse_state_file(&text).unwrap();
        assert_eq!(label.as_deref(), Some("werner"));
        assert!(back.matrix().approx_eq(w.matrix(), 1e-15));
        assert_eq!(back.dims(), w.dims());
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_state_file("{\n  \"dims\": [2,\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_state_file(r#"{"dims": [2], "matrix": [], "extra": 1}"#)
            .unwrap_err()
            .is_parse());
    }

    #[test]
    fn invalid_states_are_rejected() {
        let not_unit = r#"{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}"#;
        assert!(matches!(parse_state_file(not_unit), Err(Error::InvalidState(_))));
        let ragged = r#"{"dims": [2], "matrix": [[[1, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(parse_state_file(ragged), Err(Error::DimensionMismatch(_))));
        let wrong_dims = r#"{"dims": [3], "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(parse_state_file(wrong_dims), Err(Error::DimensionMismatch(_))));
        let negative = r#"{"dims": [2], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}"#;
        assert!(matches!(parse_state_file(negative), Err(Error::InvalidState(_))));
    }

    #[test]
    fn measure_result_round_trip() {
        let r = ree(&bell_state(BellState::PhiPlus).density(), &SolverConfig::default()).unwrap();
        let text = measure_result_json(&r);
        let back = parse_measure_result(&text).unwrap();
        assert_eq!(back.value, r.value);
        assert_eq!(back.minimizer.len(), r.minimizer.len());
    }

    #[test]
    fn tampered_result_fails_validation() {
        let r = ree(&bell_state(BellState::PhiPlus).density(), &SolverConfig::default()).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&measure_result_json(&r)).unwrap();
        v["minimizer"]["terms"][0]["weight"] = serde_json::json!(0.9);
        assert!(parse_measure_result(&v.to_string()).is_err());
    }
}
