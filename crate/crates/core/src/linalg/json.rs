use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hermitian::HermitianMatrix;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Wire form `{"n": int, "re": [[float]], "im": [[float]]}`; `im` is omitted for real matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        let n = m.dim();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let real = m.as_slice().iter().all(|z| z.im == 0.0);
        let im = (!real).then(|| (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect());
        MatrixJson { n, re, im }
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        MatrixJson::from(h.as_matrix())
    }
}

impl TryFrom<&MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Matrix> {
        let n = j.n;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&j.re) {
            return Err(Error::Parse(format!("\"re\" must be {n}x{n}")));
        }
        if let Some(im) = &j.im {
            if !shape_ok(im) {
                return Err(Error::Parse(format!("\"im\" must be {n}x{n}")));
            }
        }
        let m = Matrix::from_fn(n, |r, c| {
            Complex64::new(j.re[r][c], j.im.as_ref().map_or(0.0, |im| im[r][c]))
        });
        m.check_finite()?;
        Ok(m)
    }
}

impl TryFrom<&MatrixJson> for HermitianMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<HermitianMatrix> {
        HermitianMatrix::new(Matrix::try_from(j)?)
    }
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let j: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Matrix::try_from(&j)
}

pub fn parse_hermitian(text: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::new(parse_matrix(text)?)
}

pub fn to_json_string(m: &Matrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrix serialization cannot fail")
}
