//! JSON records read and written by the subcommands.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qcollide::{bloch, AffineQubitMap, ComplexMatrix, DensityOperator, RandomUnitarySpec};

use crate::CliError;

/// Complex matrices are nested row arrays of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson, what: &str) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> =
        rows.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    ComplexMatrix::from_rows(rows).map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

/// Output of `simulate --format json`. The `affine` field alone is enough to
/// rebuild the channel with [`read_channel`].
#[derive(Debug, Serialize, Deserialize)]
pub struct ChannelRecord {
    pub q: [f64; 3],
    pub n: usize,
    pub j: usize,
    pub eta: f64,
    pub backend: String,
    pub initial_bloch: [f64; 3],
    pub final_bloch: [f64; 3],
    pub final_state: MatrixJson,
    pub affine: [[f64; 4]; 4],
}

#[derive(Deserialize)]
struct AffineOnly {
    affine: [[f64; 4]; 4],
}

/// Rebuild the affine map stored in a channel record.
pub fn read_channel(path: &Path) -> Result<AffineQubitMap, CliError> {
    let text = read(path)?;
    let rec: AffineOnly = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    AffineQubitMap::new(bloch::Mat4(rec.affine)).map_err(CliError::from)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SpecTerm {
    pub q: f64,
    #[serde(rename = "V")]
    pub v: MatrixJson,
}

/// Random-unitary spec file: `{"d", "n", "terms": [{"q", "V"}]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SpecFile {
    pub d: usize,
    pub n: usize,
    pub terms: Vec<SpecTerm>,
}

/// Unitarity tolerance applied when loading a spec file.
pub const SPEC_UNITARITY_TOL: f64 = 1e-10;

impl SpecFile {
    pub fn load(path: &Path) -> Result<RandomUnitarySpec, CliError> {
        let text = read(path)?;
        let file: SpecFile = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        file.into_spec()
    }

    pub fn into_spec(self) -> Result<RandomUnitarySpec, CliError> {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| Ok((t.q, matrix_from_json(&t.v, &format!("term {i}"))?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        RandomUnitarySpec::with_unitarity_tol(self.d, self.n, terms, SPEC_UNITARITY_TOL).map_err(CliError::from)
    }
}

/// State file: either `{"rho": matrix}` or, for a qubit, `{"bloch": [x, y, z]}`.
#[derive(Debug, Default, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
}

impl StateFile {
    pub fn load(path: &Path) -> Result<DensityOperator, CliError> {
        let text = read(path)?;
        let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        match (file.rho, file.bloch) {
            (Some(rho), None) => Ok(DensityOperator::new(matrix_from_json(&rho, "rho")?)?),
            (None, Some(r)) => Ok(DensityOperator::from_bloch(r)?),
            _ => Err(CliError::Invalid(format!("{}: expected exactly one of \"rho\" or \"bloch\"", path.display()))),
        }
    }
}

/// Output of `randomunitary`.
#[derive(Debug, Serialize, Deserialize)]
pub struct EndpointRecord {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub rho: MatrixJson,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}
