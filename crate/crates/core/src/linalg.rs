//! Exact linear algebra over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| rat(x)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[Rational] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.get(k, j);
                    if !y.is_zero() {
                        out.data[i * other.cols + j] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Canonical reduced row-echelon form and its rank.
    pub fn rref(&self) -> (RationalMatrix, usize) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m.data, m.rows, m.cols);
        (m, pivots.len())
    }

    /// Basis of `{ x : self · x = 0 }`, in canonical form.
    pub fn nullspace(&self) -> RationalSubspace {
        let (r, rank) = self.rref();
        let pivots: Vec<usize> = (0..rank)
            .map(|i| {
                (0..r.cols)
                    .find(|&j| !r.get(i, j).is_zero())
                    .expect("pivot row is nonzero")
            })
            .collect();
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|j| !pivots.contains(j)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, free).clone();
            }
            vectors.push(v);
        }
        RationalSubspace::span(self.cols, vectors)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

/// Gauss-Jordan elimination on a row-major buffer; returns pivot columns.
fn rref_in_place(data: &mut [Rational], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = data[r * cols + c].recip();
        for j in c..cols {
            let v = &data[r * cols + j] * &inv;
            data[r * cols + j] = v;
        }
        for i in 0..rows {
            if i == r || data[i * cols + c].is_zero() {
                continue;
            }
            let factor = data[i * cols + c].clone();
            for j in c..cols {
                if data[r * cols + j].is_zero() {
                    continue;
                }
                let delta = &factor * &data[r * cols + j];
                data[i * cols + j] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A subspace of `Q^d` held as a canonical RREF basis.
///
/// Two spans are equal exactly when their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSubspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RationalSubspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            let mut v = vec![Rational::zero(); ambient];
            v[i] = Rational::one();
            s.basis.push(v);
            s.pivots.push(i);
        }
        s
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v).expect("vector length matches ambient dimension");
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Eliminates the pivot coordinates of `v`; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [Rational]) -> Result<()> {
        self.check(v)?;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, b) in v.iter_mut().zip(row).skip(p) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        let mut w = v.to_vec();
        self.reduce(&mut w)?;
        Ok(w.iter().all(Zero::is_zero))
    }

    /// Coordinates of a member with respect to the RREF basis (its pivot entries).
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if !self.contains(v)? {
            return Ok(None);
        }
        Ok(Some(self.pivots.iter().map(|&p| v[p].clone()).collect()))
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coords: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                if !b.is_zero() {
                    *o += c * b;
                }
            }
        }
        out
    }

    /// Adds `v` to the span, keeping the basis in canonical form. Returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> Result<bool> {
        self.reduce(&mut v)?;
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = v[p].recip();
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, b) in row.iter_mut().zip(&v).skip(p) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, v);
        Ok(true)
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }
}

/// Exact nullspace of a square Gram matrix.
pub fn solve_orthogonal(gram: &RationalMatrix) -> Result<RationalSubspace> {
    if gram.rows() != gram.cols() {
        return Err(Error::NotSquare {
            rows: gram.rows(),
            cols: gram.cols(),
        });
    }
    Ok(gram.nullspace())
}

/// Largest absolute numerator, handy for diagnostics.
pub fn max_abs(v: &[Rational]) -> f64 {
    v.iter().map(|x| to_f64(&x.abs())).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det3(m: &[Vec<i64>]) -> i64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Rank of a 3×3 integer matrix from its minors.
    fn minor_rank(m: &[Vec<i64>]) -> usize {
        if det3(m) != 0 {
            return 3;
        }
        for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
            for (c1, c2) in [(0, 1), (0, 2), (1, 2)] {
                if m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1] != 0 {
                    return 2;
                }
            }
        }
        if m.iter().flatten().any(|&x| x != 0) {
            1
        } else {
            0
        }
    }

    #[test]
    fn rref_basic_cases() {
        let id = RationalMatrix::identity(3);
        assert_eq!(id.rref(), (id.clone(), 3));
        let z = RationalMatrix::zeros(2, 3);
        assert_eq!(z.rref(), (z.clone(), 0));
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
        assert_eq!(minor_rank(&rows), 2);
        assert_eq!(RationalMatrix::from_i64(&rows).rref().1, 2);
    }

    #[test]
    fn membership_cases() {
        let s = RationalSubspace::span(2, vec![vec![rat(1), rat(1)]]);
        assert!(s.contains(&[rat(0), rat(0)]).unwrap());
        assert!(s.contains(&[rat(1), rat(1)]).unwrap());
        assert!(!s.contains(&[rat(1), rat(0)]).unwrap());
        assert!(matches!(
            s.contains(&[rat(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthogonal_solutions() {
        assert_eq!(
            solve_orthogonal(&RationalMatrix::identity(3)).unwrap().dim(),
            0
        );
        assert!(solve_orthogonal(&RationalMatrix::zeros(3, 3))
            .unwrap()
            .is_full());
        let g = RationalMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        let ns = solve_orthogonal(&g).unwrap();
        assert_eq!(ns.dim(), 1);
        assert!(ns.contains(&[rat(1), rat(-1)]).unwrap());
        assert!(matches!(
            solve_orthogonal(&RationalMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, c), r)
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(rows in small_matrix()) {
            let m = RationalMatrix::from_i64(&rows);
            let (r, k) = m.rref();
            prop_assert_eq!(r.rref(), (r.clone(), k));
        }

        #[test]
        fn span_is_canonical(rows in small_matrix(), seed in 0i64..5) {
            let c = rows[0].len();
            let vecs: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let a = RationalSubspace::span(c, vecs.clone());
            // same span from shuffled, rescaled, and mixed generators
            let mut mixed: Vec<Vec<Rational>> = vecs.iter().rev().map(|v| v.iter().map(|x| x * rat(seed + 2)).collect()).collect();
            if vecs.len() > 1 {
                let s: Vec<Rational> = vecs[0].iter().zip(&vecs[1]).map(|(x, y)| x + y).collect();
                mixed.push(s);
            }
            let b = RationalSubspace::span(c, mixed);
            prop_assert_eq!(a.clone(), b);
            let (_, rank) = RationalMatrix::from_i64(&rows).rref();
            prop_assert_eq!(a.dim(), rank);
        }

        #[test]
        fn membership_agrees_with_rank(rows in small_matrix(), v in prop::collection::vec(-3i64..=3, 4)) {
            let c = rows[0].len();
            let vecs: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
            let s = RationalSubspace::span(c, vecs.clone());
            let v: Vec<Rational> = v[..c].iter().map(|&x| rat(x)).collect();
            let mut with = vecs;
            with.push(v.clone());
            let grown = RationalSubspace::span(c, with);
            prop_assert_eq!(s.contains(&v).unwrap(), grown.dim() == s.dim());
        }

        #[test]
        fn nullspace_annihilates(rows in small_matrix()) {
            let m = RationalMatrix::from_i64(&rows);
            let ns = m.nullspace();
            prop_assert_eq!(ns.dim() + m.rref().1, m.cols());
            for v in ns.basis() {
                for i in 0..m.rows() {
                    let dot: Rational = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
