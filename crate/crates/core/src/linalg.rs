//! Dense exact linear algebra over ℚ.
//!
//! Every quotient space, kernel and membership question in the engine reduces
//! to the routines here. Pivoting always takes the first nonzero entry in
//! column order, so all derived bases are deterministic.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

/// A coordinate vector.
pub type Vector = Vec<Scalar>;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `num / den`; panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with optional surrounding whitespace and sign.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let invalid = || Error::InvalidScalar(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = num.parse::<BigInt>().map_err(|_| invalid())?;
    let den = den.parse::<BigInt>().map_err(|_| invalid())?;
    if den.is_zero() {
        return Err(invalid());
    }
    Ok(Scalar::new(num, den))
}

/// Formats as `"p"` or `"p/q"`, the inverse of [`parse_scalar`].
pub fn format_scalar(value: &Scalar) -> String {
    value.to_string()
}

pub fn zeros(len: usize) -> Vector {
    vec![Scalar::zero(); len]
}

pub fn unit_vector(len: usize, at: usize) -> Vector {
    let mut v = zeros(len);
    v[at] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += factor * v`.
pub fn axpy(acc: &mut [Scalar], factor: &Scalar, v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    if factor.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += factor * b;
        }
    }
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(factor: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| factor * x).collect()
}

/// Row-major dense matrix of scalars.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: zeros(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Builds a `rows.len() × cols` matrix; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Builds a `rows × columns.len()` matrix from its columns.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: column.len() });
            }
            for (i, value) in column.iter().enumerate() {
                m[(i, j)] = value.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect())
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..a.cols {
                a.data.swap(p * a.cols + j, row * a.cols + j);
            }
        }
        let inv = a[(row, col)].recip();
        for j in col..a.cols {
            let v = &a[(row, j)] * &inv;
            a[(row, j)] = v;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone();
            for j in col..a.cols {
                if a[(row, j)].is_zero() {
                    continue;
                }
                let delta = &factor * &a[(row, j)];
                a[(r, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    Rref { matrix: a, pivots, rank }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank
}

/// A basis of the null space of `m`, one vector per non-pivot column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vector> {
    let Rref { matrix, pivots, .. } = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = unit_vector(m.cols, free);
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -matrix[(k, free)].clone();
            }
            v
        })
        .collect()
}

/// Some `x` with `m·x = b`, or `None` when `b` lies outside the column span.
pub fn solve_in_span(m: &Matrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch { expected: m.rows, found: b.len() });
    }
    let mut augmented = Matrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            augmented[(i, j)] = m[(i, j)].clone();
        }
        augmented[(i, m.cols)] = b[i].clone();
    }
    let reduced = rref(&augmented);
    if reduced.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = zeros(m.cols);
    for (k, &p) in reduced.pivots.iter().enumerate() {
        x[p] = reduced.matrix[(k, m.cols)].clone();
    }
    Ok(Some(x))
}

/// Reduced echelon basis of the span of `vectors` (all of length `dim`),
/// returned with its pivot columns.
pub fn span_basis(dim: usize, vectors: &[Vector]) -> Result<(Vec<Vector>, Vec<usize>)> {
    let reduced = rref(&Matrix::from_rows(dim, vectors)?);
    let rows = (0..reduced.rank).map(|k| reduced.matrix.row(k).to_vec()).collect();
    Ok((rows, reduced.pivots))
}

/// The quotient `V / W` of `V = ℚ^ambient_dim` by the span `W` of a finite set.
///
/// `W` is held in reduced echelon form. Quotient coordinates of a vector are
/// its entries at the non-pivot columns after reduction by `W`. Lifting a
/// quotient vector places it on those columns, so `project(lift(q)) = q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    ambient_dim: usize,
    subspace_basis: Vec<Vector>,
    pivots: Vec<usize>,
    complement: Vec<usize>,
}

pub fn build_quotient(ambient_dim: usize, spanning_set: &[Vector]) -> Result<QuotientSpace> {
    let (subspace_basis, pivots) = span_basis(ambient_dim, spanning_set)?;
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let complement = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    Ok(QuotientSpace { ambient_dim, subspace_basis, pivots, complement })
}

impl QuotientSpace {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn subspace_basis(&self) -> &[Vector] {
        &self.subspace_basis
    }

    /// Ambient columns that carry the quotient coordinates.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Reduces `v` modulo the subspace; the result vanishes on every pivot.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        let mut w = v.to_vec();
        for (row, &p) in self.subspace_basis.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = -w[p].clone();
                axpy(&mut w, &factor, row);
            }
        }
        Ok(w)
    }

    /// Coordinates of the coset `v + W`.
    pub fn project(&self, v: &[Scalar]) -> Result<Vector> {
        let w = self.reduce(v)?;
        Ok(self.complement.iter().map(|&c| w[c].clone()).collect())
    }

    /// A representative of the coset with quotient coordinates `q`.
    pub fn lift(&self, q: &[Scalar]) -> Result<Vector> {
        if q.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: q.len() });
        }
        let mut v = zeros(self.ambient_dim);
        for (&c, value) in self.complement.iter().zip(q) {
            v[c] = value.clone();
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    /// The coset-coordinate map as a `dim × ambient_dim` matrix.
    pub fn coset_coordinate_map(&self) -> Matrix {
        let columns: Vec<Vector> = (0..self.ambient_dim)
            .map(|j| self.project(&unit_vector(self.ambient_dim, j)).expect("unit vector has ambient length"))
            .collect();
        Matrix::from_columns(self.dim(), &columns).expect("projected columns have quotient length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Matrix::from_rows(cols, &rows).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);

        let r = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.matrix, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.rank, 1);

        let z = Matrix::zeros(2, 3);
        let r = rref(&z);
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&m(&[&[1, 2], &[2, 4]])), vec![v(&[-2, 1])]);
        let k = kernel_basis(&Matrix::zeros(1, 2));
        assert_eq!(k.len(), 2);
        assert_eq!(rank(&Matrix::from_rows(2, &k).unwrap()), 2);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_in_span(&Matrix::identity(2), &v(&[1, 2])).unwrap(), Some(v(&[1, 2])));
        let col = m(&[&[1], &[2]]);
        assert_eq!(solve_in_span(&col, &v(&[2, 4])).unwrap(), Some(v(&[2])));
        assert_eq!(solve_in_span(&col, &v(&[1, 0])).unwrap(), None);
        assert!(matches!(solve_in_span(&col, &v(&[1, 0, 0])), Err(Error::DimensionMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn quotient_examples() {
        let q = build_quotient(2, &[v(&[1, 0])]).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(!is_zero_vector(&q.project(&v(&[0, 1])).unwrap()));

        assert_eq!(build_quotient(3, &[]).unwrap().dim(), 3);
        assert_eq!(build_quotient(2, &[v(&[1, 1]), v(&[2, 2])]).unwrap().dim(), 1);
    }

    #[test]
    fn quotient_lift_project_roundtrip() {
        let q = build_quotient(4, &[v(&[1, 1, 0, 0]), v(&[0, 1, 1, 0])]).unwrap();
        assert_eq!(q.dim(), 2);
        let coords = vec![ratio(3, 2), int(-7)];
        assert_eq!(q.project(&q.lift(&coords).unwrap()).unwrap(), coords);
        assert!(q.contains(&v(&[1, 0, -1, 0])).unwrap());
        assert!(!q.contains(&v(&[0, 0, 0, 1])).unwrap());
    }

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_scalar(" -4 ").unwrap(), int(-4));
        assert_eq!(parse_scalar("2/-4").unwrap(), ratio(-1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("0.5").is_err());
        assert_eq!(format_scalar(&ratio(6, -4)), "-3/2");
        assert_eq!(format_scalar(&int(5)), "5");
    }
}
