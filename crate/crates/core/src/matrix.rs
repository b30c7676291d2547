use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InternalInconsistency(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RationalMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        RationalMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InternalInconsistency("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// The submatrix with `row` and `col` removed.
    pub fn minor_matrix(&self, row: usize, col: usize) -> Self {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let si = if i < row { i } else { i + 1 };
            let sj = if j < col { j } else { j + 1 };
            self.get(si, sj).clone()
        })
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    ///
    /// Each row is first scaled by the lcm of its denominators so the
    /// elimination runs over the integers; the scales are divided back out.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                scale *= &l;
                row.iter().map(|r| r.numer() * (&l / r.denom())).collect()
            })
            .collect();

        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        negate = !negate;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    // exact by Sylvester's identity
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        let det = if negate { -det } else { det };
        Ok(Rational::new(det, scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    fn m(rows: &[&[Rational]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn identity_determinant() {
        assert_eq!(RationalMatrix::identity(3).determinant().unwrap(), int(1));
    }

    #[test]
    fn delta_one_for_legendre() {
        let a = m(&[&[int(1), int(0)], &[int(-1), rat(1, 3)]]);
        // ad - bc
        assert_eq!(a.determinant().unwrap(), rat(1, 3));
    }

    #[test]
    fn repeated_rows_are_singular() {
        let a = m(&[
            &[rat(1, 2), int(3), rat(-2, 7)],
            &[int(4), int(5), int(6)],
            &[rat(1, 2), int(3), rat(-2, 7)],
        ]);
        assert_eq!(a.determinant().unwrap(), int(0));
    }

    #[test]
    fn needs_pivot() {
        let a = m(&[&[int(0), int(1)], &[int(1), int(0)]]);
        assert_eq!(a.determinant().unwrap(), int(-1));
        let b = m(&[
            &[int(0), int(0), int(2)],
            &[int(0), int(3), int(0)],
            &[int(5), int(0), int(0)],
        ]);
        assert_eq!(b.determinant().unwrap(), int(-30));
    }

    #[test]
    fn not_square() {
        let a = RationalMatrix::from_fn(2, 3, |_, _| int(1));
        assert_eq!(a.determinant(), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn minors_and_products() {
        let a = m(&[&[int(1), int(2)], &[int(3), int(4)]]);
        assert_eq!(a.minor_matrix(0, 1), m(&[&[int(3)]]));
        assert_eq!(a.mul_vec(&[int(1), int(1)]), vec![int(3), int(7)]);
    }
}
