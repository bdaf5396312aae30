use serde::Serialize;

use super::quadratic::{ProjPoint, QuadraticNumber};
use super::rational::Rational;
use super::{LinalgError, QMatrix};
use num_traits::Zero;

/// Fixed points of a 2×2 matrix on the projective line over ℚ(√disc).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EigenDirections {
    /// Every point is fixed.
    Scalar { eigenvalue: QuadraticNumber },
    Directions {
        /// Sorted canonical points; one for a parabolic matrix, two otherwise.
        points: Vec<ProjPoint>,
        /// Eigenvalue attached to each point, in the same order.
        eigenvalues: Vec<QuadraticNumber>,
        /// Discriminant of the characteristic polynomial, `tr² − 4·det`.
        #[serde(serialize_with = "super::rational::serialize")]
        discriminant: Rational,
    },
}

impl EigenDirections {
    pub fn points(&self) -> &[ProjPoint] {
        match self {
            EigenDirections::Scalar { .. } => &[],
            EigenDirections::Directions { points, .. } => points,
        }
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self, EigenDirections::Scalar { .. })
    }
}

pub fn eigen_directions(m: &QMatrix) -> Result<EigenDirections, LinalgError> {
    if m.dim() != 2 {
        return Err(LinalgError::UnsupportedDimension(m.dim()));
    }
    if m.det().is_zero() {
        return Err(LinalgError::Singular);
    }
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    if m.is_scalar() {
        return Ok(EigenDirections::Scalar {
            eigenvalue: QuadraticNumber::rational(a.clone()),
        });
    }
    let diff = a - d;
    let disc = &diff * &diff + Rational::from_integer(4.into()) * b * c;
    let half = Rational::new(1.into(), 2.into());
    let mean = QuadraticNumber::rational((a + d) * &half);
    let root = &QuadraticNumber::sqrt_of(&disc) * &half;
    let lambdas = if disc.is_zero() {
        vec![mean]
    } else {
        vec![&mean + &root, &mean - &root]
    };

    let a_q = QuadraticNumber::rational(a.clone());
    let d_q = QuadraticNumber::rational(d.clone());
    let mut pairs: Vec<(ProjPoint, QuadraticNumber)> = lambdas
        .into_iter()
        .map(|lambda| {
            let point = if !b.is_zero() {
                ProjPoint::new(QuadraticNumber::rational(b.clone()), &lambda - &a_q)
            } else if !c.is_zero() {
                ProjPoint::new(&lambda - &d_q, QuadraticNumber::rational(c.clone()))
            } else if lambda == a_q {
                // Diagonal and non-scalar: the axes.
                Some(ProjPoint::from_slope(QuadraticNumber::zero()))
            } else {
                Some(ProjPoint::infinity())
            };
            (point.expect("eigenvector is nonzero"), lambda)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.cmp(&y.0));
    let (points, eigenvalues) = pairs.into_iter().unzip();
    Ok(EigenDirections::Directions {
        points,
        eigenvalues,
        discriminant: disc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;
    use num_bigint::BigInt;

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }

    #[test]
    fn diagonal_fixes_axes() {
        let e = eigen_directions(&h()).unwrap();
        let expected = vec![ProjPoint::from_slope(QuadraticNumber::zero()), ProjPoint::infinity()];
        assert_eq!(e.points(), expected.as_slice());
    }

    #[test]
    fn unipotent_has_one_direction() {
        let p = QMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let e = eigen_directions(&p).unwrap();
        assert_eq!(e.points(), &[ProjPoint::from_slope(QuadraticNumber::zero())]);
    }

    #[test]
    fn rotation_has_complex_directions() {
        let e = eigen_directions(&QMatrix::from_ints(&[&[0, 1], &[-1, 0]])).unwrap();
        let i = QuadraticNumber::new(int(0), int(1), BigInt::from(-1));
        let minus_i = i.conjugate();
        let mut expected = vec![ProjPoint::from_slope(i), ProjPoint::from_slope(minus_i)];
        expected.sort();
        assert_eq!(e.points(), expected.as_slice());
        match e {
            EigenDirections::Directions { discriminant, .. } => assert_eq!(discriminant, int(-4)),
            _ => panic!("not scalar"),
        }
    }

    #[test]
    fn scalar_and_errors() {
        assert!(eigen_directions(&QMatrix::scalar(2, int(3))).unwrap().is_scalar());
        assert!(matches!(
            eigen_directions(&QMatrix::identity(3)),
            Err(LinalgError::UnsupportedDimension(3))
        ));
        assert!(matches!(
            eigen_directions(&QMatrix::from_ints(&[&[1, 1], &[1, 1]])),
            Err(LinalgError::Singular)
        ));
    }

    #[test]
    fn points_are_fixed() {
        let m = QMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let e = eigen_directions(&m).unwrap();
        assert_eq!(e.points().len(), 2);
        for p in e.points() {
            assert!(p.is_fixed_by(&m));
            assert_eq!(p.apply(&m), *p);
        }
    }
}
