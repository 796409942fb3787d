//! Dense matrices over GF(2)[D, D^-1] and its fraction field.

use std::fmt;

use thiserror::Error;

use crate::laurent::{LaurentPoly, PolyError};
use crate::ratfunc::RationalFunc;

/// Scalar interface shared by `LaurentPoly` and `RationalFunc`.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Display + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conjugate(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn conjugate(&self) -> Self {
        LaurentPoly::conjugate(self)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl Coeff for RationalFunc {
    fn zero() -> Self {
        RationalFunc::zero()
    }
    fn one() -> Self {
        RationalFunc::one()
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunc::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunc::mul(self, other)
    }
    fn conjugate(&self) -> Self {
        RationalFunc::conjugate(self)
    }
    fn is_zero(&self) -> bool {
        RationalFunc::is_zero(self)
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not unimodular: determinant {0}")]
    NotUnimodular(String),
    #[error("rank deficiency at row {0}")]
    RankDeficient(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Row-major dense matrix. Dimensions are fixed at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T: Coeff> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix = Matrix<LaurentPoly>;
pub type RatMatrix = Matrix<RationalFunc>;

impl<T: Coeff> Matrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entrywise `D -> D^-1`.
    pub fn conjugate(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.conjugate()).collect(),
        }
    }

    /// `M^T(D^-1)`, the adjoint that pairs with gate semantics.
    pub fn conj_transpose(&self) -> Self {
        self.transpose().conjugate()
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut out = Self::zero(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += coef * row[src]`
    pub fn add_row_mul(&mut self, src: usize, dst: usize, coef: &T) {
        assert_ne!(src, dst);
        for j in 0..self.cols {
            let v = self.get(dst, j).add(&coef.mul(self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += coef * col[src]`
    pub fn add_col_mul(&mut self, src: usize, dst: usize, coef: &T) {
        assert_ne!(src, dst);
        for i in 0..self.rows {
            let v = self.get(i, dst).add(&coef.mul(self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, r: usize, coef: &T) {
        for j in 0..self.cols {
            let v = coef.mul(self.get(r, j));
            self.set(r, j, v);
        }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = Vec::with_capacity(self.rows + other.rows);
        for i in 0..self.rows {
            rows.push(self.row(i).to_vec());
        }
        for i in 0..other.rows {
            rows.push(other.row(i).to_vec());
        }
        Self::from_rows(rows)
    }
}

impl PolyMatrix {
    pub fn parse_rows(lines: &[&str]) -> Result<Self, MatrixError> {
        let mut rows = Vec::new();
        let mut width = None;
        for (i, line) in lines.iter().enumerate() {
            let entries: Result<Vec<_>, _> = line
                .split(',')
                .map(|s| LaurentPoly::parse(s.trim()))
                .collect();
            let entries = entries?;
            match width {
                None => width = Some(entries.len()),
                Some(w) if w != entries.len() => {
                    return Err(MatrixError::Shape(format!(
                        "row {i} has {} entries, expected {w}",
                        entries.len()
                    )))
                }
                _ => {}
            }
            rows.push(entries);
        }
        Ok(Self::from_rows(rows))
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|p| RationalFunc::from_poly(p.clone()))
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        self.to_rational().rank()
    }
}

impl RatMatrix {
    /// Rank via Gaussian elimination over the fraction field.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols() {
            if rank == m.rows() {
                break;
            }
            let Some(pivot) = (rank..m.rows()).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            let inv = m.get(rank, col).clone().inverse().unwrap();
            for r in 0..m.rows() {
                if r != rank && !m.get(r, col).is_zero() {
                    let coef = m.get(r, col).mul(&inv);
                    m.add_row_mul(rank, r, &coef);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Demotes to a polynomial matrix when every entry is polynomial.
    pub fn to_poly(&self) -> Option<PolyMatrix> {
        let mut rows = Vec::with_capacity(self.rows());
        for i in 0..self.rows() {
            let mut row = Vec::with_capacity(self.cols());
            for j in 0..self.cols() {
                row.push(self.get(i, j).as_poly()?.clone());
            }
            rows.push(row);
        }
        Some(PolyMatrix::from_rows(rows))
    }
}

impl<T: Coeff> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        Ok(())
    }
}

/// One recorded elementary operation. Replaying a decomposition's list on
/// its input must reproduce the decomposed form exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemOp {
    SwapRows(usize, usize),
    SwapCols(usize, usize),
    /// `row[dst] += coef * row[src]`
    AddRowMul {
        src: usize,
        dst: usize,
        coef: LaurentPoly,
    },
    /// `col[dst] += coef * col[src]`
    AddColMul {
        src: usize,
        dst: usize,
        coef: LaurentPoly,
    },
    /// `row[row] *= D^shift`
    ScaleRowUnit {
        row: usize,
        shift: i64,
    },
}

impl ElemOp {
    pub fn apply(&self, m: &mut PolyMatrix) {
        match self {
            ElemOp::SwapRows(a, b) => m.swap_rows(*a, *b),
            ElemOp::SwapCols(a, b) => m.swap_cols(*a, *b),
            ElemOp::AddRowMul { src, dst, coef } => m.add_row_mul(*src, *dst, coef),
            ElemOp::AddColMul { src, dst, coef } => m.add_col_mul(*src, *dst, coef),
            ElemOp::ScaleRowUnit { row, shift } => {
                m.scale_row(*row, &LaurentPoly::monomial(*shift))
            }
        }
    }

    pub fn is_row_op(&self) -> bool {
        matches!(
            self,
            ElemOp::SwapRows(..) | ElemOp::AddRowMul { .. } | ElemOp::ScaleRowUnit { .. }
        )
    }
}

pub fn replay(ops: &[ElemOp], input: &PolyMatrix) -> PolyMatrix {
    let mut m = input.clone();
    for op in ops {
        op.apply(&mut m);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&str]) -> PolyMatrix {
        PolyMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn mul_and_identity() {
        let a = pm(&["1, D", "0, 1"]);
        let i = PolyMatrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
        let sq = a.mul(&a);
        assert_eq!(sq, pm(&["1, 0", "0, 1"]));
    }

    #[test]
    fn rank_over_fraction_field() {
        assert_eq!(pm(&["1+D, 0", "0, 0"]).rank(), 1);
        assert_eq!(pm(&["0, 1, 0, 0", "1+D, 1+D, 1, D"]).rank(), 2);
        assert_eq!(pm(&["1, D", "D^-1, 1"]).rank(), 1);
    }

    #[test]
    fn conj_transpose_matches_paper_convention() {
        let m = pm(&["D, 1+D"]);
        let ct = m.conj_transpose();
        assert_eq!(ct.rows(), 2);
        assert_eq!(ct.get(0, 0).render(), "D^-1");
        assert_eq!(ct.get(1, 0).render(), "D^-1+1");
    }

    #[test]
    fn parse_rejects_ragged() {
        assert!(PolyMatrix::parse_rows(&["1, D", "1"]).is_err());
    }
}
