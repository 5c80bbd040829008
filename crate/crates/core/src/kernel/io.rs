use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// Write a full square matrix as row-major CSV with 17 significant digits.
/// Each header line is emitted first, prefixed by `# `.
pub fn write_matrix_csv<W: Write>(out: &mut W, m: &DMatrix<f64>, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(out, "# {line}")?;
    }
    let mut buf = String::new();
    for i in 0..m.nrows() {
        buf.clear();
        for j in 0..m.ncols() {
            if j > 0 {
                buf.push(',');
            }
            buf.push_str(&format!("{:.16e}", m[(i, j)]));
        }
        writeln!(out, "{buf}")?;
    }
    Ok(())
}

/// Read a square matrix written by [`write_matrix_csv`] (comment lines skipped).
pub fn read_matrix_csv<R: BufRead>(input: R) -> Result<DMatrix<f64>> {
    let data = DataMatrix::from_csv_reader(input)?;
    if data.nrows() != data.ncols() {
        return Err(Error::NotSquare {
            rows: data.nrows(),
            cols: data.ncols(),
        });
    }
    Ok(DMatrix::from_row_slice(
        data.nrows(),
        data.ncols(),
        data.as_slice(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1 + 0.2, 0.1 + 0.2, 1.0 / 3.0]);
        let mut out = Vec::new();
        write_matrix_csv(&mut out, &m, &["m=3".to_string()]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("# m=3\n"));
        assert!(text.contains("3.0000000000000004e-1"));
        assert_eq!(read_matrix_csv(text.as_bytes()).unwrap(), m);
    }
}
