//! CSV and JSON emitters for matrices and numeric tables.

use std::io::Write;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::Result;
use crate::linalg::CMatrix;

/// Long-format CSV `row,col,re,im`, row-major.
pub fn write_matrix_csv<W: Write>(out: W, m: &CMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"])?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            w.write_record(&[r.to_string(), c.to_string(), fmt(z.re), fmt(z.im)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A numeric table with named columns.
pub fn write_table_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| fmt(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest round-tripping decimal form.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// `[[[re, im], …], …]`, one inner array per row.
pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect()))
            .collect(),
    )
}

pub fn complex_vec_json(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|z| complex_json(*z)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn matrix_csv_layout() {
        let m = CMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.5, -2.0)]);
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, &m).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "row,col,re,im\n0,0,1.0,0.0\n0,1,0.5,-2.0\n"
        );
        assert_eq!(matrix_json(&m).to_string(), "[[[1.0,0.0],[0.5,-2.0]]]");
    }

    #[test]
    fn table_csv() {
        let mut buf = Vec::new();
        write_table_csv(&mut buf, &["n", "err"], &[vec![1.0, 0.1], vec![2.0, 1e-20]]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,err\n1.0,0.1\n2.0,1e-20\n"
        );
    }
}
