//! Exact rational linear algebra.
//!
//! Everything structural in this crate (ranks, stoichiometric subspaces,
//! orthogonal complements, dependency coefficients) is computed here with
//! arbitrary-precision rationals, so comparisons are exact.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses integers (`-3`), fractions (`7/4`) and decimals (`0.36`, `1.5e-2`)
/// into an exact rational. Decimals are converted digit-for-digit, so
/// `0.36` becomes `9/25`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| err())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Shorthand for an integer-valued rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lossy conversion used only by the numeric layer.
pub fn to_f64(value: &Rational) -> f64 {
    use num::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational the way the text format writes it: integers plainly,
/// everything else as `p/q`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zeros(size, size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: row.len() });
            }
        }
        let n = rows.len();
        for row in rows {
            data.extend(row);
        }
        Ok(Matrix { rows: n, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged integer matrix");
                r.iter().map(|&v| int(v))
            })
            .collect();
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Columns `indices` of this matrix, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, indices.len());
        for (j, &c) in indices.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Rows `indices` of this matrix, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &r in indices {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: indices.len(), cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of exact Gauss-Jordan elimination.
///
/// `transform · original = reduced`, with `transform` invertible.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form. The pivot in each column is the first nonzero
/// entry at or below the current row.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut t = Matrix::identity(m.rows);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        swap_rows(&mut a, row, p);
        swap_rows(&mut t, row, p);
        let inv = a.get(row, col).recip();
        scale_row(&mut a, row, &inv);
        scale_row(&mut t, row, &inv);
        for r in 0..a.rows {
            if r != row && !a.get(r, col).is_zero() {
                let factor = a.get(r, col).clone();
                sub_row_multiple(&mut a, r, row, &factor);
                sub_row_multiple(&mut t, r, row, &factor);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { reduced: a, transform: t, pivots }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..m.cols {
        m.data.swap(a * m.cols + c, b * m.cols + c);
    }
}

fn scale_row(m: &mut Matrix, row: usize, factor: &Rational) {
    for c in 0..m.cols {
        let idx = row * m.cols + c;
        if !m.data[idx].is_zero() {
            m.data[idx] *= factor;
        }
    }
}

/// row[target] -= factor * row[source]
fn sub_row_multiple(m: &mut Matrix, target: usize, source: usize, factor: &Rational) {
    for c in 0..m.cols {
        let s = &m.data[source * m.cols + c];
        if !s.is_zero() {
            let delta = s * factor;
            m.data[target * m.cols + c] -= delta;
        }
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

/// Right null space basis of `m`: vectors `v` with `m · v = 0`.
pub fn null_space(m: &Matrix) -> Vec<Vec<Rational>> {
    let r = rref(m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !r.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (i, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.reduced.get(i, f).clone();
            }
            v
        })
        .collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// A linear subspace of `Q^ambient`, stored as the nonzero rows of the RREF
/// of any spanning set. Two subspaces are equal iff their bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::span(ambient, Matrix::identity(ambient).row_vectors()).expect("identity rows")
    }

    /// Span of the given vectors, each of length `ambient`.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = Matrix::from_rows(ambient, vectors)?;
        let r = rref(&m);
        let basis = (0..r.rank()).map(|i| r.reduced.row(i).to_vec()).collect();
        Ok(Subspace { ambient, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        let m = Matrix::from_rows(self.ambient, rows).expect("lengths checked");
        rank(&m) == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) [", self.dim(), self.ambient)?;
        for v in &self.basis {
            let row: Vec<String> = v.iter().map(format_rational).collect();
            write!(f, " ({})", row.join(", "))?;
        }
        write!(f, " ]")
    }
}

/// Image of `m` (span of its columns) as a subspace of `Q^rows`.
pub fn column_space(m: &Matrix) -> Subspace {
    Subspace::span(m.rows(), m.column_vectors()).expect("column lengths equal row count")
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<(), LinalgError> {
    if a.ambient != b.ambient {
        return Err(LinalgError::DimensionMismatch { expected: a.ambient, found: b.ambient });
    }
    Ok(())
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
    check_ambient(a, b)?;
    let mut vectors = a.basis.clone();
    vectors.extend(b.basis.iter().cloned());
    Subspace::span(a.ambient, vectors)
}

/// `dim(A ∩ B) = dim A + dim B − dim(A + B)`.
pub fn subspace_intersection_dim(a: &Subspace, b: &Subspace) -> Result<usize, LinalgError> {
    let sum = subspace_sum(a, b)?;
    Ok(a.dim() + b.dim() - sum.dim())
}

pub fn orthogonal_complement(a: &Subspace) -> Subspace {
    if a.dim() == 0 {
        return Subspace::full(a.ambient);
    }
    let m = Matrix::from_rows(a.ambient, a.basis.clone()).expect("basis lengths");
    Subspace::span(a.ambient, null_space(&m)).expect("null space lengths")
}

/// Coefficients expressing `v` in terms of the (linearly independent)
/// `basis` vectors, or `None` when `v` is outside their span.
pub fn coordinates(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let dim = v.len();
    if basis.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    // Solve B^T c = v via the augmented system [B^T | v].
    let p = basis.len();
    let mut aug = Matrix::zeros(dim, p + 1);
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            aug.set(i, j, x.clone());
        }
    }
    for (i, x) in v.iter().enumerate() {
        aug.set(i, p, x.clone());
    }
    let r = rref(&aug);
    if r.pivots.contains(&p) {
        return None;
    }
    let mut coeffs = vec![Rational::zero(); p];
    for (i, &col) in r.pivots.iter().enumerate() {
        coeffs[col] = r.reduced.get(i, p).clone();
    }
    Some(coeffs)
}

/// True when every entry is zero.
pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Largest absolute entry, as a float; used for tolerance scaling.
pub fn max_abs_f64(v: &[Rational]) -> f64 {
    v.iter().map(|x| to_f64(&x.abs())).fold(0.0, f64::max)
}
