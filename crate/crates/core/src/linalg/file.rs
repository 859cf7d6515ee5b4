use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::CMat;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// On-disk matrix format: `{"dim": n, "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_matrix<T: Real>(m: &CMat<T>) -> Self {
        let n = m.dim();
        MatrixFile {
            dim: n,
            re: (0..n).map(|i| (0..n).map(|j| m[(i, j)].re.as_f64()).collect()).collect(),
            im: (0..n).map(|i| (0..n).map(|j| m[(i, j)].im.as_f64()).collect()).collect(),
        }
    }

    pub fn to_matrix<T: Real>(&self) -> Result<CMat<T>> {
        let n = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Input(format!(
                "matrix file rows do not match declared dim {n}"
            )));
        }
        CMat::new(super::Mat::from_fn(n, n, |i, j| {
            Complex::new(T::lit(self.re[i][j]), T::lit(self.im[i][j]))
        }))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed matrix file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }
}

impl<T: Real> CMat<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        MatrixFile::parse(text)?.to_matrix()
    }

    pub fn to_json(&self) -> String {
        MatrixFile::from_matrix(self).to_json()
    }
}
