use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::Matrix;

/// JSON wire form: `{"n": …, "m": …, "data": [row-major entries]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    m: usize,
    data: Vec<f64>,
}

/// Formats `x` with 17 significant digits, enough for bit-exact f64 round trips.
pub fn format_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.16e}", x)
}

impl Matrix {
    /// CSV form: one matrix row per line, no header.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols())
                .map(|j| format_f64(self.inner()[(i, j)]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Matrix> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row: Vec<f64> = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(Error::Parse(format!(
                        "line {}: expected {} fields, got {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    )));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty matrix".into()));
        }
        let n = rows.len();
        let m = rows[0].len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        Ok(Matrix::new(DMatrix::from_row_slice(n, m, &flat)))
    }

    pub fn to_json(&self) -> String {
        let data: Vec<f64> = (0..self.nrows())
            .flat_map(|i| (0..self.ncols()).map(move |j| self.inner()[(i, j)]))
            .collect();
        serde_json::to_string(&MatrixJson {
            n: self.nrows(),
            m: self.ncols(),
            data,
        })
        .unwrap()
    }

    pub fn from_json(text: &str) -> Result<Matrix> {
        let mj: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if mj.data.len() != mj.n * mj.m || mj.n == 0 || mj.m == 0 {
            return Err(Error::Parse("dimension mismatch".into()));
        }
        Ok(Matrix::new(DMatrix::from_row_slice(mj.n, mj.m, &mj.data)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::random_matrix;

    #[test]
    fn csv_round_trip_is_exact() {
        let a = random_matrix(4, 7, 42);
        let b = Matrix::from_csv(&a.to_csv()).unwrap();
        assert_eq!(&a, &b);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let a = random_matrix(3, 5, 43);
        let b = Matrix::from_json(&a.to_json()).unwrap();
        assert_eq!(&a, &b);
    }
}
