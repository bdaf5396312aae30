use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{ln_abs, Rational};
use super::{LinalgError, QMatrix};

/// Logarithms of the singular values `σ₁ ≥ σ₂` of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CartanProjection {
    pub log_sigma1: f64,
    pub log_sigma2: f64,
    /// Bound on the absolute error of each coordinate.
    pub error_bound: f64,
}

impl CartanProjection {
    /// `log σ₁ − log σ₂`; invariant under scaling the matrix.
    pub fn gap(&self) -> f64 {
        self.log_sigma1 - self.log_sigma2
    }
}

/// Dyadic interval `[s/2ᵏ, (s+1)/2ᵏ]` containing `√q` for `q ≥ 0`.
fn sqrt_interval(q: &Rational, precision_bits: u64) -> (Rational, Rational) {
    // √(p/r) = √(p·r)/r
    let prod = q.numer() * q.denom();
    let k = precision_bits + prod.bits() / 2 + 8;
    let scaled: BigInt = prod << (2 * k);
    let s = scaled.sqrt();
    let scale = BigInt::one() << k;
    let den = q.denom() * &scale;
    (Rational::new(s.clone(), den.clone()), Rational::new(s + 1, den))
}

/// `ln |q|` with a bound on its absolute floating-point error.
fn ln_with_error(q: &Rational) -> (f64, f64) {
    use num_traits::ToPrimitive;
    if let Some(v) = q.abs().to_f64() {
        if v.is_normal() {
            return (v.ln(), 4.0 * f64::EPSILON * (1.0 + v.ln().abs()));
        }
    }
    let l = ln_abs(q);
    let spread = super::rational::ln_bigint(q.numer()).abs() + super::rational::ln_bigint(q.denom()).abs();
    (l, 4.0 * f64::EPSILON * (1.0 + spread))
}

pub fn cartan_projection(m: &QMatrix) -> Result<CartanProjection, LinalgError> {
    if m.dim() != 2 {
        return Err(LinalgError::UnsupportedDimension(m.dim()));
    }
    let det = m.det();
    if det.is_zero() {
        return Err(LinalgError::Singular);
    }
    // σ₁², σ₂² are the roots of x² − T·x + det², T = tr(mᵀm) = Σ mᵢⱼ².
    let t: Rational = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j) * m.get(i, j))
        .sum();
    let det_sq = &det * &det;
    let disc = &t * &t - Rational::from_integer(4.into()) * &det_sq;
    let disc = if disc.is_negative() { Rational::zero() } else { disc };
    let (lo, hi) = sqrt_interval(&disc, 64);
    let two = Rational::from_integer(2.into());
    let big_lo = (&t + &lo) / &two;
    let big_hi = (&t + &hi) / &two;
    let mid = (&big_lo + &big_hi) / &two;
    // Relative half-width of the σ₁² enclosure bounds its log error.
    let rel = super::rational::to_f64(&((&big_hi - &big_lo) / &big_lo));
    let (ln_mid, err_mid) = ln_with_error(&mid);
    let (ln_det, err_det) = ln_with_error(&det);
    let log_sigma1 = 0.5 * ln_mid;
    let log_sigma2 = ln_det - log_sigma1;
    let error_bound = rel + err_mid + err_det;
    Ok(CartanProjection {
        log_sigma1,
        log_sigma2,
        error_bound,
    })
}
