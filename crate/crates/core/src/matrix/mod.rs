//! Exact integer matrices.
//!
//! Entries are arbitrary-precision integers and every operation on
//! [`IntMatrix`] is exact. Floating point appears only in
//! [`IntMatrix::spectral_radius`], which runs a root solver on the exact
//! characteristic polynomial.

mod poly;
mod roots;
mod smith;

pub use poly::{CharPoly, IntPoly};
pub use roots::{polynomial_roots, RootReport, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
pub use smith::SmithForm;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix over the integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self> {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal<T: Clone + Into<BigInt>>(entries: &[T]) -> Self {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    /// Block-diagonal matrix `diag(a, b)`.
    pub fn block_diagonal(a: &IntMatrix, b: &IntMatrix) -> Self {
        let mut m = IntMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.rows) && self.is_square()
    }

    fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Exact `n`-th power by repeated squaring; `a⁰ = Id`.
    pub fn pow(&self, mut n: u64) -> Result<IntMatrix> {
        let dim = self.require_square()?;
        let mut result = IntMatrix::identity(dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("addition of differently shaped matrices".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self[(i, i)].clone()).sum())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Maximum absolute column sum, i.e. the operator norm induced by L1.
    pub fn max_column_l1(&self) -> BigInt {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<BigInt>())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    /// Monic characteristic polynomial `det(xI − A)` by Faddeev–LeVerrier.
    ///
    /// Every division in the recurrence is exact over the integers.
    pub fn char_poly(&self) -> Result<CharPoly> {
        Ok(self.faddeev_leverrier()?.0)
    }

    // Returns the char poly together with the last auxiliary matrix
    // M_n = A^{n-1} + c_{n-1} A^{n-2} + … + c_1 I, which gives the adjugate.
    fn faddeev_leverrier(&self) -> Result<(CharPoly, IntMatrix)> {
        let n = self.require_square()?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut aux = IntMatrix::zeros(n, n);
        let mut last_aux = IntMatrix::identity(n);
        for k in 1..=n {
            let mut next = self.mul(&aux)?;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let t = self.mul(&next)?.trace()?;
            let (q, r) = t.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
            coeffs[n - k] = -q;
            last_aux = next.clone();
            aux = next;
        }
        Ok((CharPoly::from_monic(IntPoly::new(coeffs)), last_aux))
    }

    /// Adjugate matrix, so that `A · adj(A) = det(A) · I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let (_, aux) = self.faddeev_leverrier()?;
        Ok(if n % 2 == 1 { aux } else { aux.scale(&BigInt::from(-1)) })
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let det = self.determinant()?;
        if det.abs() != BigInt::one() {
            return Err(Error::NonUnimodular(det.to_string()));
        }
        Ok(self.adjugate()?.scale(&det))
    }

    /// Largest modulus among the eigenvalues, to residual tolerance `tol`.
    ///
    /// The characteristic polynomial is computed exactly, reduced to its
    /// square-free part and stripped of zero roots; the remaining roots are
    /// found by Aberth–Ehrlich iteration. Nilpotent matrices give `0`.
    pub fn spectral_radius(&self, tol: f64) -> Result<f64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        let cp = self.char_poly()?;
        let report = polynomial_roots(cp.poly(), tol, DEFAULT_MAX_ITERATIONS)?;
        Ok(report.max_modulus())
    }

    pub fn smith_normal_form(&self) -> SmithForm {
        SmithForm::compute(self)
    }

    /// Entry as `i64` when it fits.
    pub fn get_i64(&self, i: usize, j: usize) -> Option<i64> {
        self[(i, j)].to_i64()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `ln |x|` for arbitrarily large integers; `-inf` for zero.
pub fn ln_abs(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits < 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
pub(crate) fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub(crate) fn l1_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(Signed::abs).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    // Schoolbook triple loop on i64, kept separate from the BigInt kernel.
    fn naive_mul(a: &[&[i64]], b: &[&[i64]]) -> Vec<Vec<i64>> {
        (0..a.len())
            .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn products() {
        let a = m(&[&[0, 2], &[1, 0]]);
        assert_eq!(a.mul(&a).unwrap(), m(&[&[2, 0], &[0, 2]]));
        assert_eq!(IntMatrix::identity(2).mul(&a).unwrap(), a);
        let f: &[&[i64]] = &[&[2, 1], &[1, 1]];
        let oracle = naive_mul(f, f);
        assert_eq!(oracle, vec![vec![5, 3], vec![3, 2]]);
        assert_eq!(m(f).mul(&m(f)).unwrap(), IntMatrix::from_rows(&oracle).unwrap());
        assert!(matches!(
            IntMatrix::zeros(2, 3).mul(&IntMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn powers() {
        let a = m(&[&[0, 2], &[1, 0]]);
        assert_eq!(a.pow(4).unwrap(), m(&[&[4, 0], &[0, 4]]));
        assert_eq!(a.pow(0).unwrap(), IntMatrix::identity(2));
        let f = m(&[&[2, 1], &[1, 1]]);
        let by_mul = f.mul(&f).unwrap().mul(&f).unwrap();
        assert_eq!(by_mul, m(&[&[13, 8], &[8, 5]]));
        assert_eq!(f.pow(3).unwrap(), by_mul);
        assert!(matches!(IntMatrix::zeros(1, 2).pow(2), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(m(&[&[0, 2], &[1, 0]]).char_poly().unwrap().coefficients(), &[big(-2), big(0), big(1)]);
        assert_eq!(IntMatrix::identity(2).char_poly().unwrap().coefficients(), &[big(1), big(-2), big(1)]);
        // det(xI - A) = (x-2)(x-1) - 1 = x² - 3x + 1
        assert_eq!(m(&[&[2, 1], &[1, 1]]).char_poly().unwrap().coefficients(), &[big(1), big(-3), big(1)]);
    }

    #[test]
    fn spectral_radii() {
        let r = m(&[&[0, 2], &[1, 0]]).spectral_radius(1e-12).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
        for n in 1..5 {
            let r = IntMatrix::identity(n).spectral_radius(1e-12).unwrap();
            assert!((r - 1.0).abs() < 1e-12);
        }
        let golden_sq = (3.0 + 5f64.sqrt()) / 2.0;
        let r = m(&[&[2, 1], &[1, 1]]).spectral_radius(1e-12).unwrap();
        assert!((r - golden_sq).abs() < 1e-12);
        assert_eq!(m(&[&[0, 1], &[0, 0]]).spectral_radius(1e-12).unwrap(), 0.0);
        assert!(IntMatrix::identity(2).spectral_radius(0.0).is_err());
    }

    #[test]
    fn determinant_adjugate_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant().unwrap(), big(1));
        let inv = a.inverse_unimodular().unwrap();
        assert_eq!(inv, m(&[&[1, -1], &[-1, 2]]));
        let b = m(&[&[1, 2, 3], &[0, 4, 5], &[1, 0, 6]]);
        assert_eq!(b.determinant().unwrap(), big(22));
        let prod = b.mul(&b.adjugate().unwrap()).unwrap();
        assert_eq!(prod, IntMatrix::identity(3).scale(&big(22)));
        assert!(matches!(b.inverse_unimodular(), Err(Error::NonUnimodular(_))));
    }

    #[test]
    fn ln_abs_large() {
        let x = BigInt::from(3).pow(2000);
        assert!((ln_abs(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_abs(&BigInt::zero()), f64::NEG_INFINITY);
    }
}
