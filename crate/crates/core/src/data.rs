//! Observation matrices and headerless CSV input.

use std::io::Read;

use crate::error::{Error, Result};

/// An `n x p` matrix of finite observations stored row-major.
///
/// Holds either the `x` sample (p columns) or the `y` sample (q columns).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DataMatrix {
    /// Build from row-major values. Requires `rows >= 2`, `cols >= 1` and
    /// finite entries.
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows < 2 {
            return Err(Error::TooFewRows { min: 2, got: rows });
        }
        if cols == 0 {
            return Err(Error::NoColumns);
        }
        if values.len() != rows * cols {
            return Err(Error::LengthMismatch {
                what: "values",
                got: values.len(),
                expected: rows * cols,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { values, rows, cols })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Ragged {
                    row: i,
                    got: row.len(),
                    expected: cols,
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, values)
    }

    /// A single-column matrix.
    pub fn column(values: Vec<f64>) -> Result<Self> {
        Self::new(values.len(), 1, values)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols)
    }

    /// Copy of column `j`.
    pub fn column_values(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Rows reordered so that output row `i` is input row `order[i]`.
    pub fn select_rows(&self, order: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(order.len() * self.cols);
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        Self::new(order.len(), self.cols, values)
    }

    /// Euclidean distance between rows `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Parse headerless, comma-separated numeric CSV. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut values = Vec::new();
        let mut cols = None;
        let mut rows = 0;
        for record in rdr.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                Error::Csv {
                    line,
                    col: 0,
                    reason: e.to_string(),
                }
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            let expected = *cols.get_or_insert(record.len());
            if record.len() != expected {
                return Err(Error::Csv {
                    line,
                    col: record.len().min(expected) + 1,
                    reason: format!("expected {expected} fields, found {}", record.len()),
                });
            }
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field.parse().map_err(|_| Error::Csv {
                    line,
                    col: j + 1,
                    reason: format!("`{field}` is not a number"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Csv {
                        line,
                        col: j + 1,
                        reason: format!("non-finite value `{field}`"),
                    });
                }
                values.push(v);
            }
            rows += 1;
        }
        Self::new(rows, cols.unwrap_or(0), values)
    }

    pub fn from_csv_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }
}
