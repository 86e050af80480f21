use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::LinAlgError;

/// Integer matrix with arbitrary-precision entries.
///
/// Storage is row-sparse: each row keeps its nonzero entries sorted by
/// column. Boundary matrices of the complexes handled here have a handful of
/// `±1` entries per column, so this is both the compact and the fast layout.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    /// Builds a matrix from dense rows of machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                let v: BigInt = v.into();
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions
    /// are summed.
    pub fn from_triplets<T: Into<BigInt>>(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in triplets {
            let cur = m.get(r, c);
            m.set(r, c, cur + v.into());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Number of stored nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Nonzero entries of row `r`, sorted by column.
    pub fn row(&self, r: usize) -> &[(usize, BigInt)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.check_bounds(r, c);
        match self.data[r].binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: impl Into<BigInt>) {
        self.check_bounds(r, c);
        let v = v.into();
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(j, _)| *j) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (c, v)),
        }
    }

    fn check_bounds(&self, r: usize, c: usize) {
        assert!(
            r < self.rows && c < self.cols,
            "index ({r}, {c}) out of bounds for {}x{} matrix",
            self.rows,
            self.cols
        );
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t.data[*j].push((i, v.clone()));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != rhs.rows {
            return Err(LinAlgError::DimensionMismatch {
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &rhs.data[*k] {
                    if acc[*j].is_zero() {
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &j in &touched {
                let v = std::mem::take(&mut acc[j]);
                if !v.is_zero() {
                    out.data[i].push((j, v));
                }
            }
            touched.clear();
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                d[i][*j] = v.clone();
            }
        }
        d
    }

    pub fn from_dense(d: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let mut m = Self::zeros(d.len(), cols);
        for (i, row) in d.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Largest absolute value of an entry, zero for the empty matrix.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .flatten()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(f, "  [{}]", cells.join(", "))?;
            }
        } else {
            writeln!(f, "  {} nonzeros", self.nnz())?;
        }
        write!(f, "]")
    }
}
