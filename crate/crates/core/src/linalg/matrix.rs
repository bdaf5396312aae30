//! Dense exact matrices: rational `QMatrix` and integer `IntMatrix`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::rational::{format_rational, from_bigint, Rational};
use super::LinalgError;

/// Square matrix over the rationals, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rational::one();
        }
        QMatrix { n, entries }
    }

    pub fn scalar(n: usize, s: Rational) -> Self {
        let mut m = QMatrix::identity(n);
        for i in 0..n {
            m.entries[i * n + i] = s.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::NotSquare);
        }
        Ok(QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for 2×2 matrices from `(numerator, denominator)` pairs.
    pub fn from_fractions_2x2(e: [[(i64, i64); 2]; 2]) -> Self {
        let entries = e
            .iter()
            .flat_map(|row| row.iter().map(|&(p, q)| super::rational::rat(p, q)))
            .collect();
        QMatrix { n: 2, entries }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QMatrix {
            n,
            entries: rows
                .iter()
                .flat_map(|r| r.iter().map(|&v| super::rational::int(v)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).clone());
            }
        }
        QMatrix { n, entries }
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    /// Determinant by fraction-free-free Gaussian elimination over ℚ.
    pub fn det(&self) -> Rational {
        let n = self.n;
        if n == 2 {
            return self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0);
        }
        let mut a = self.entries.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Rational::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = &a[r * n + col] / &p;
                for j in col..n {
                    let v = &f * &a[col * n + j];
                    a[r * n + j] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        if n == 2 {
            let d = self.det();
            if d.is_zero() {
                return None;
            }
            let (a, b, c, e) = (self.get(0, 0), self.get(0, 1), self.get(1, 0), self.get(1, 1));
            return Some(QMatrix {
                n,
                entries: vec![e / &d, -b / &d, -c / &d, a / &d],
            });
        }
        let mut a = self.entries.clone();
        let mut inv = QMatrix::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &p;
                inv[col * n + j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].clone();
                for j in 0..n {
                    let va = &f * &a[col * n + j];
                    a[r * n + j] -= va;
                    let vi = &f * &inv[col * n + j];
                    inv[r * n + j] -= vi;
                }
            }
        }
        Some(QMatrix { n, entries: inv })
    }

    /// `self^k` for any integer `k`; negative powers need an invertible matrix.
    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = QMatrix::identity(self.n);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Some(acc)
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.n)
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    self.get(i, i) == self.get(0, 0)
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    /// Member of GLₙ(ℤ): integral entries and determinant ±1.
    pub fn is_integral_unimodular(&self) -> bool {
        self.entries.iter().all(|q| q.is_integer()) && self.det().abs().is_one()
    }

    /// `max |mᵢⱼ − δᵢⱼ|`, exact.
    pub fn distance_from_identity(&self) -> Rational {
        let n = self.n;
        let mut best = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                let mut v = self.get(i, j).clone();
                if i == j {
                    v -= Rational::one();
                }
                let v = v.abs();
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    /// Row-sum (ℓ∞ operator) norm.
    pub fn operator_norm_inf(&self) -> Rational {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<Rational>())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * &rhs.entries[k * n + j];
                }
                entries.push(acc);
            }
        }
        QMatrix { n, entries }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n.max(1)).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", format_rational(e))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .entries
            .chunks(self.n.max(1))
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in &rows {
            seq.serialize_element(r)?;
        }
        seq.end()
    }
}

/// Integer matrix. Usually square (an inclusion ℤⁿ → ℤⁿ), but parsed input may be
/// rectangular until validation rejects it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Ragged);
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        IntMatrix::from_rows(converted).expect("rectangular literal")
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        if self.cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        assert!(self.is_square());
        QMatrix {
            n: self.rows,
            entries: self.entries.iter().map(from_bigint).collect(),
        }
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    /// Bareiss fraction-free determinant.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    /// Index of the image lattice `M·ℤⁿ` in `ℤⁿ`, i.e. `|det M|`.
    pub fn sublattice_index(&self) -> Result<BigInt, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let d = self.det();
        if d.is_zero() {
            Err(LinalgError::NotInjective)
        } else {
            Ok(d.abs())
        }
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.rows;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != skip_row) {
            for j in (0..n).filter(|&j| j != skip_col) {
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            rows: n - 1,
            cols: n - 1,
            entries,
        }
    }

    /// Classical adjugate: `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> IntMatrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut out = IntMatrix {
            rows: n,
            cols: n,
            entries: vec![BigInt::zero(); n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det();
                let c = if (i + j) % 2 == 0 { c } else { -c };
                out.set(j, i, c);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Solves `M·y = x` over the integers. `None` when `x ∉ M·ℤⁿ`.
    pub fn lattice_solve(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
        let det = self.det();
        if det.is_zero() {
            return Err(LinalgError::NotInjective);
        }
        let scaled = self.adjugate().mul_vec(x);
        let mut y = Vec::with_capacity(scaled.len());
        for s in scaled {
            if !(&s % &det).is_zero() {
                return Ok(None);
            }
            y.push(s / &det);
        }
        Ok(Some(y))
    }

    /// Column-style Hermite normal form: an upper-triangular basis of the same
    /// lattice `M·ℤⁿ` with positive diagonal and entries right of the diagonal
    /// reduced into `[0, diagonal)`.
    pub fn hermite_basis(&self) -> Result<IntMatrix, LinalgError> {
        if self.det().is_zero() {
            return Err(LinalgError::NotInjective);
        }
        let n = self.rows;
        let mut b = self.clone();
        for i in (0..n).rev() {
            // Fold columns 0..i into column i until only it is nonzero in row i.
            for j in 0..i {
                if b.get(i, j).is_zero() {
                    continue;
                }
                let (g, s, t) = extended_gcd(b.get(i, i), b.get(i, j));
                let u = b.get(i, i) / &g;
                let v = b.get(i, j) / &g;
                for r in 0..n {
                    let ci = b.get(r, i).clone();
                    let cj = b.get(r, j).clone();
                    b.set(r, i, &s * &ci + &t * &cj);
                    b.set(r, j, &u * &cj - &v * &ci);
                }
            }
            if b.get(i, i).is_negative() {
                for r in 0..n {
                    let v = -b.get(r, i).clone();
                    b.set(r, i, v);
                }
            }
        }
        for i in (0..n).rev() {
            let d = b.get(i, i).clone();
            for j in i + 1..n {
                let q = floor_div(b.get(i, j), &d);
                if q.is_zero() {
                    continue;
                }
                for r in 0..=i {
                    let v = b.get(r, j) - &q * b.get(r, i);
                    b.set(r, j, v);
                }
            }
        }
        Ok(b)
    }

    /// Canonical representative of `x + M·ℤⁿ`: the unique element of the coset
    /// lying in the box `0 ≤ rⱼ < hⱼⱼ` of the Hermite basis.
    pub fn coset_residue(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        let h = self.hermite_basis()?;
        Ok(residue_mod_hermite(&h, x))
    }
}

pub(crate) fn residue_mod_hermite(h: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    let n = h.rows;
    let mut r = x.to_vec();
    for j in (0..n).rev() {
        let q = floor_div(&r[j], h.get(j, j));
        if q.is_zero() {
            continue;
        }
        for i in 0..=j {
            r[i] -= &q * h.get(i, j);
        }
    }
    r
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

/// Returns `(g, s, t)` with `g = s·a + t·b = gcd(a, b) > 0`.
pub(crate) fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    use num_integer::Integer;
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn sublattice_index_examples() {
        assert_eq!(IntMatrix::identity(2).sublattice_index().unwrap(), BigInt::from(1));
        let y = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert_eq!(y.sublattice_index().unwrap(), BigInt::from(2));
        let m = IntMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        assert_eq!(m.sublattice_index().unwrap(), BigInt::from(6));
        let singular = IntMatrix::from_i64(&[&[1, 0], &[0, 0]]);
        let err = singular.sublattice_index().unwrap_err();
        assert_eq!(err.to_string(), "edge inclusion not injective");
    }

    #[test]
    fn lattice_solve_examples() {
        let y = IntMatrix::from_i64(&[&[1, 0], &[0, 2]]);
        assert_eq!(y.lattice_solve(&big(&[3, 4])).unwrap(), Some(big(&[3, 2])));
        assert_eq!(y.lattice_solve(&big(&[3, 3])).unwrap(), None);
        let m = IntMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        assert_eq!(m.lattice_solve(&big(&[5, 3])).unwrap(), Some(big(&[2, 1])));
    }

    #[test]
    fn hermite_basis_is_triangular_and_same_index() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 3]]);
        let h = m.hermite_basis().unwrap();
        assert!(h.get(1, 0).is_zero());
        assert_eq!(h.det().abs(), m.det().abs());
        // Every column of the Hermite basis lies in the original lattice and back.
        for j in 0..2 {
            assert!(m.lattice_solve(&h.column(j)).unwrap().is_some());
            assert!(h.lattice_solve(&m.column(j)).unwrap().is_some());
        }
    }

    #[test]
    fn residues_pick_one_point_per_coset() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[0, 3]]);
        let mut reps = std::collections::BTreeSet::new();
        for x in -6..6 {
            for y in -6..6 {
                let r = m.coset_residue(&big(&[x, y])).unwrap();
                let diff: Vec<BigInt> = big(&[x, y]).iter().zip(&r).map(|(a, b)| a - b).collect();
                assert!(m.lattice_solve(&diff).unwrap().is_some());
                reps.insert(r);
            }
        }
        assert_eq!(reps.len(), 6);
    }

    #[test]
    fn three_by_three_det_and_inverse() {
        let q = QMatrix::from_ints(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(q.det(), int(5));
        let inv = q.inverse().unwrap();
        assert!((&q * &inv).is_identity());
        let z = IntMatrix::from_i64(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        assert_eq!(z.det(), BigInt::from(5));
        let adj = z.adjugate();
        let prod: Vec<BigInt> = z.mul_vec(&adj.column(0));
        assert_eq!(prod, big(&[5, 0, 0]));
    }

    #[test]
    fn powers_and_identity_distance() {
        let p = QMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(p.pow(5).unwrap(), QMatrix::from_ints(&[&[1, 5], &[0, 1]]));
        assert_eq!(p.pow(-2).unwrap(), QMatrix::from_ints(&[&[1, -2], &[0, 1]]));
        let h = QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]]);
        assert_eq!(h.distance_from_identity(), int(1));
        assert_eq!(h.pow(-1).unwrap().get(1, 1), &int(2));
        assert_eq!(h.scale(&rat(1, 2)).get(0, 0), &int(1));
    }
}
