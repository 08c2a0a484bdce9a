//! JSON interchange format for complex matrices.
//!
//! ```json
//! {"rows": 2, "cols": 2, "data": [[1, 0], [0, 0], [0, 0], [0.5, -1]]}
//! ```
//! `data` holds `[re, im]` pairs in row-major order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, ComplexMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let data =
            (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| [m[(i, j)].re, m[(i, j)].im]);
        Self { rows: m.nrows(), cols: m.ncols(), data: data.collect() }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::InvalidArgument(format!(
                "matrix file has {} entries, expected {}x{} = {}",
                self.data.len(),
                self.rows,
                self.cols,
                self.rows * self.cols
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c64(re, im)
        }))
    }

    pub fn parse(text: &str) -> Result<ComplexMatrix> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed matrix file: {e}")))?;
        file.to_matrix()
    }

    pub fn to_json(m: &ComplexMatrix) -> String {
        serde_json::to_string(&Self::from_matrix(m)).expect("matrix files always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_row_major() {
        let m = MatrixFile::parse(r#"{"rows": 1, "cols": 2, "data": [[1, 2], [3, -4]]}"#).unwrap();
        assert_eq!(m[(0, 0)], c64(1.0, 2.0));
        assert_eq!(m[(0, 1)], c64(3.0, -4.0));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(MatrixFile::parse(r#"{"rows": 2, "cols": 2, "data": [[1, 0]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"rows": 1, "cols": 1, "data": [[1]]}"#).is_err());
        assert!(MatrixFile::parse("not json").is_err());
        assert!(MatrixFile::parse(r#"{"rows": 1, "cols": 1, "data": [[1, 0]], "extra": 1}"#).is_err());
        let inf = MatrixFile { rows: 1, cols: 1, data: vec![[f64::INFINITY, 0.0]] };
        assert_eq!(inf.to_matrix(), Err(Error::NonFinite));
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(seed in any::<u64>(), rows in 0usize..5, cols in 0usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = sample::gaussian_matrix(&mut rng, rows, cols) * c64(1e-7, 3.0);
            let back = MatrixFile::parse(&MatrixFile::to_json(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
