//! Numbers in a quadratic extension ℚ(√d) and points of the projective line over it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::rational::{format_rational, to_f64, Rational};

/// `a + b·√d` with `d` squarefree. Rational values are stored with `b = 0, d = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadraticNumber {
    pub fn rational(a: Rational) -> Self {
        QuadraticNumber {
            a,
            b: Rational::zero(),
            d: BigInt::one(),
        }
    }

    /// Builds `a + b√d`; `d` must already be squarefree.
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Self {
        if b.is_zero() || d.is_one() {
            let a = if d.is_one() { a + b } else { a };
            return QuadraticNumber::rational(a);
        }
        assert!(!d.is_zero(), "radicand must be nonzero");
        QuadraticNumber { a, b, d }
    }

    /// Exact square root of a rational as `k·√r` with `r` squarefree.
    pub fn sqrt_of(q: &Rational) -> Self {
        if q.is_zero() {
            return QuadraticNumber::zero();
        }
        // √(p/s) = √(p·s)/s
        let prod = q.numer() * q.denom();
        let (k, r) = squarefree_decompose(&prod);
        let coeff = Rational::new(k, q.denom().clone());
        QuadraticNumber::new(Rational::zero(), coeff, r)
    }

    pub fn zero() -> Self {
        QuadraticNumber::rational(Rational::zero())
    }

    pub fn one() -> Self {
        QuadraticNumber::rational(Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn radical_coefficient(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Real means the value lies in ℝ (radicand positive or no radical part).
    pub fn is_real(&self) -> bool {
        self.is_rational() || self.d.is_positive()
    }

    pub fn conjugate(&self) -> Self {
        QuadraticNumber::new(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// Field norm `a² − b²d`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.clone())
    }

    fn common_radicand(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "incompatible radicands");
                self.d.clone()
            }
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let nrm = self.norm();
        Some(QuadraticNumber::new(&self.a / &nrm, -(&self.b / &nrm), self.d.clone()))
    }

    /// Exact comparison of a real value with a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        assert!(self.is_real(), "comparison needs a real number");
        // a + b√d  vs  r   ⇔   b√d  vs  r − a
        let rhs = r - &self.a;
        if self.b.is_zero() {
            return Rational::zero().cmp(&rhs);
        }
        let lhs_sign = self.b.signum();
        let rhs_sign = rhs.signum();
        if lhs_sign != rhs_sign {
            return lhs_sign.cmp(&rhs_sign);
        }
        let lhs_sq = &self.b * &self.b * Rational::from_integer(self.d.clone());
        let rhs_sq = &rhs * &rhs;
        let mag = lhs_sq.cmp(&rhs_sq);
        if lhs_sign.is_negative() {
            mag.reverse()
        } else {
            mag
        }
    }

    /// Approximate value; only meaningful for real numbers.
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&Rational::from_integer(self.d.clone())).sqrt()
    }

    /// Approximate complex value `(re, im)`.
    pub fn to_complex(&self) -> (f64, f64) {
        if self.is_real() {
            (self.to_f64(), 0.0)
        } else {
            let s = to_f64(&Rational::from_integer(-self.d.clone())).sqrt();
            (to_f64(&self.a), to_f64(&self.b) * s)
        }
    }

    /// Ordering key used for canonical sorting; not a field ordering.
    fn sort_key(&self) -> (&Rational, &Rational, &BigInt) {
        (&self.a, &self.b, &self.d)
    }
}

/// Writes `n = k²·r` with `r` squarefree (sign carried by `r`).
///
/// Uses trial division up to 10⁶; a leftover cofactor above 10¹⁸ that is not a
/// perfect square is treated as squarefree.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut k = BigInt::one();
    let mut r = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= m && p <= limit {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= &p;
        }
        if e % 2 == 1 {
            r *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if m > BigInt::one() {
        let s = m.sqrt();
        if &s * &s == m {
            k *= s;
        } else {
            r *= m;
        }
    }
    (k, sign * r)
}

impl Add for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn add(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let d = self.common_radicand(rhs);
        QuadraticNumber::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn sub(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let d = self.common_radicand(rhs);
        QuadraticNumber::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        let d = self.common_radicand(rhs);
        let dq = Rational::from_integer(d.clone());
        QuadraticNumber::new(
            &self.a * &rhs.a + &self.b * &rhs.b * dq,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }
}

impl Mul<&Rational> for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn mul(self, rhs: &Rational) -> QuadraticNumber {
        QuadraticNumber::new(&self.a * rhs, &self.b * rhs, self.d.clone())
    }
}

impl Div for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn div(self, rhs: &QuadraticNumber) -> QuadraticNumber {
        self * &rhs.inverse().expect("division by zero")
    }
}

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::new(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let radical = if self.d == -BigInt::one() {
            "i".to_string()
        } else {
            format!("√{}", self.d)
        };
        let coeff = if self.b.is_one() {
            String::new()
        } else if self.b == -Rational::one() {
            "-".to_string()
        } else {
            format_rational(&self.b)
        };
        if self.a.is_zero() {
            write!(f, "{coeff}{radical}")
        } else if self.b.is_negative() {
            let pos = -self.b.clone();
            let coeff = if pos.is_one() {
                String::new()
            } else {
                format_rational(&pos)
            };
            write!(f, "{}-{coeff}{radical}", format_rational(&self.a))
        } else {
            write!(f, "{}+{coeff}{radical}", format_rational(&self.a))
        }
    }
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Point `(x : y)` of the projective line over ℚ(√d), normalized so the first
/// nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint {
    x: QuadraticNumber,
    y: QuadraticNumber,
}

impl ProjPoint {
    pub fn new(x: QuadraticNumber, y: QuadraticNumber) -> Option<Self> {
        if !x.is_zero() {
            let y = &y / &x;
            Some(ProjPoint {
                x: QuadraticNumber::one(),
                y,
            })
        } else if !y.is_zero() {
            Some(ProjPoint::infinity())
        } else {
            None
        }
    }

    /// The point `(1 : s)`, i.e. the line of slope `s`.
    pub fn from_slope(s: QuadraticNumber) -> Self {
        ProjPoint {
            x: QuadraticNumber::one(),
            y: s,
        }
    }

    /// `(0 : 1)`, the vertical line.
    pub fn infinity() -> Self {
        ProjPoint {
            x: QuadraticNumber::zero(),
            y: QuadraticNumber::one(),
        }
    }

    pub fn coords(&self) -> (&QuadraticNumber, &QuadraticNumber) {
        (&self.x, &self.y)
    }

    pub fn slope(&self) -> Option<&QuadraticNumber> {
        (!self.x.is_zero()).then_some(&self.y)
    }

    pub fn is_rational(&self) -> bool {
        self.x.is_rational() && self.y.is_rational()
    }

    pub fn radicand(&self) -> BigInt {
        if self.y.is_rational() {
            BigInt::one()
        } else {
            self.y.radicand().clone()
        }
    }

    pub fn galois_conjugate(&self) -> Self {
        ProjPoint {
            x: self.x.clone(),
            y: self.y.conjugate(),
        }
    }

    /// Image under a 2×2 rational matrix acting on column vectors.
    pub fn apply(&self, m: &super::QMatrix) -> ProjPoint {
        assert_eq!(m.dim(), 2);
        let (x, y) = self.apply_raw(m);
        ProjPoint::new(x, y).expect("invertible matrix maps points to points")
    }

    fn apply_raw(&self, m: &super::QMatrix) -> (QuadraticNumber, QuadraticNumber) {
        let nx = &(&self.x * m.get(0, 0)) + &(&self.y * m.get(0, 1));
        let ny = &(&self.x * m.get(1, 0)) + &(&self.y * m.get(1, 1));
        (nx, ny)
    }

    /// `m` fixes this point: `m·v ∧ v = 0`, checked without normalizing.
    pub fn is_fixed_by(&self, m: &super::QMatrix) -> bool {
        let (nx, ny) = self.apply_raw(m);
        let cross = &(&nx * &self.y) - &(&ny * &self.x);
        cross.is_zero() && !(nx.is_zero() && ny.is_zero())
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let inf_a = self.x.is_zero();
        let inf_b = other.x.is_zero();
        inf_a
            .cmp(&inf_b)
            .then_with(|| self.y.sort_key().cmp(&other.y.sort_key()))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x, self.y)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    #[test]
    fn squarefree_parts() {
        let (k, r) = squarefree_decompose(&BigInt::from(72));
        assert_eq!((k, r), (BigInt::from(6), BigInt::from(2)));
        let (k, r) = squarefree_decompose(&BigInt::from(-4));
        assert_eq!((k, r), (BigInt::from(2), BigInt::from(-1)));
        let (k, r) = squarefree_decompose(&BigInt::from(49));
        assert_eq!((k, r), (BigInt::from(7), BigInt::from(1)));
    }

    #[test]
    fn sqrt_of_rationals() {
        let s = QuadraticNumber::sqrt_of(&rat(5, 4));
        assert_eq!(s, QuadraticNumber::new(int(0), rat(1, 2), BigInt::from(5)));
        assert_eq!(&s * &s, QuadraticNumber::rational(rat(5, 4)));
        let i = QuadraticNumber::sqrt_of(&int(-1));
        assert_eq!(&i * &i, QuadraticNumber::rational(int(-1)));
        assert_eq!(
            QuadraticNumber::sqrt_of(&rat(9, 4)),
            QuadraticNumber::rational(rat(3, 2))
        );
    }

    #[test]
    fn field_operations() {
        let d = BigInt::from(2);
        let x = QuadraticNumber::new(int(1), int(1), d.clone());
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, QuadraticNumber::one());
        assert_eq!(inv, QuadraticNumber::new(int(-1), int(1), d));
    }

    #[test]
    fn comparison_with_rationals() {
        let phi = QuadraticNumber::new(rat(1, 2), rat(1, 2), BigInt::from(5));
        assert_eq!(phi.cmp_rational(&rat(161, 100)), Ordering::Greater);
        assert_eq!(phi.cmp_rational(&rat(162, 100)), Ordering::Less);
        let neg = QuadraticNumber::new(int(0), int(-1), BigInt::from(2));
        assert_eq!(neg.cmp_rational(&rat(-141, 100)), Ordering::Less);
        assert_eq!(neg.cmp_rational(&rat(-142, 100)), Ordering::Greater);
    }

    #[test]
    fn projective_normalization() {
        let p = ProjPoint::new(QuadraticNumber::rational(int(2)), QuadraticNumber::rational(int(4))).unwrap();
        assert_eq!(p, ProjPoint::from_slope(QuadraticNumber::rational(int(2))));
        let q = ProjPoint::new(QuadraticNumber::zero(), QuadraticNumber::rational(int(-3))).unwrap();
        assert_eq!(q, ProjPoint::infinity());
        assert!(ProjPoint::new(QuadraticNumber::zero(), QuadraticNumber::zero()).is_none());
        assert_eq!(q.to_string(), "(0:1)");
    }
}
