//! The rational projective line in the slope coordinate `s = y/x`, and closed
//! arcs on it.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::linalg::rational::{format_rational, Rational};
use crate::linalg::QMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational),
    Infinity,
}

impl Slope {
    /// Image under the column action: `s ↦ (c + d·s)/(a + b·s)` for `[[a,b],[c,d]]`.
    pub fn apply(&self, m: &QMatrix) -> Slope {
        let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
        let (x, y) = match self {
            Slope::Finite(s) => (a + b * s, c + d * s),
            Slope::Infinity => (b.clone(), d.clone()),
        };
        if x.is_zero() {
            Slope::Infinity
        } else {
            Slope::Finite(y / x)
        }
    }

    pub fn is_fixed_by(&self, m: &QMatrix) -> bool {
        self.apply(m) == *self
    }

    /// Position along the circle starting at `base` in the positive direction.
    fn position(&self, base: &Slope) -> (u8, Option<&Rational>) {
        match (base, self) {
            (Slope::Infinity, Slope::Infinity) => (0, None),
            (Slope::Infinity, Slope::Finite(x)) => (1, Some(x)),
            (Slope::Finite(b), Slope::Finite(x)) if x >= b => (0, Some(x)),
            (Slope::Finite(_), Slope::Infinity) => (1, None),
            (Slope::Finite(_), Slope::Finite(x)) => (2, Some(x)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(q) => f.write_str(&format_rational(q)),
            Slope::Infinity => f.write_str("∞"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Closed arc traversed from `start` to `end` in the direction of increasing
/// slope, passing through ∞ if needed. `start ≠ end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub start: Slope,
    pub end: Slope,
}

fn cmp_positions(a: (u8, Option<&Rational>), b: (u8, Option<&Rational>)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

impl Arc {
    pub fn new(start: Slope, end: Slope) -> Self {
        Arc { start, end }
    }

    /// `[lo, hi]` with finite rational endpoints.
    pub fn interval(lo: Rational, hi: Rational) -> Self {
        Arc::new(Slope::Finite(lo), Slope::Finite(hi))
    }

    pub fn is_degenerate(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, x: &Slope) -> bool {
        cmp_positions(x.position(&self.start), self.end.position(&self.start)) != Ordering::Greater
    }

    pub fn contains_arc(&self, other: &Arc) -> bool {
        let p = other.start.position(&self.start);
        let q = other.end.position(&self.start);
        let e = self.end.position(&self.start);
        cmp_positions(p, q) != Ordering::Greater && cmp_positions(q, e) != Ordering::Greater
    }

    /// Closure of the complement.
    pub fn complement(&self) -> Arc {
        Arc::new(self.end.clone(), self.start.clone())
    }

    /// Image under `m`; orientation reverses when `det m < 0`.
    pub fn image(&self, m: &QMatrix) -> Arc {
        let (s, e) = (self.start.apply(m), self.end.apply(m));
        if m.det().is_negative() {
            Arc::new(e, s)
        } else {
            Arc::new(s, e)
        }
    }

    /// The intersection when it is finite (then a subset of the endpoints of
    /// `self`); `None` when the arcs overlap in an interval.
    pub fn finite_intersection(&self, other: &Arc) -> Option<Vec<Slope>> {
        if !self.complement().contains_arc(other) {
            return None;
        }
        let mut pts: Vec<Slope> = [&self.start, &self.end]
            .into_iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        pts.dedup();
        Some(pts)
    }

    pub fn is_disjoint(&self, other: &Arc) -> bool {
        self.finite_intersection(other).is_some_and(|pts| pts.is_empty())
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.start, &self.end) {
            (Slope::Finite(a), Slope::Finite(b)) if a > b => {
                write!(f, "[{}, ∞] ∪ [∞, {}]", format_rational(a), format_rational(b))
            }
            (s, e) => write!(f, "[{s}, {e}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    fn fin(p: i64, q: i64) -> Slope {
        Slope::Finite(rat(p, q))
    }

    #[test]
    fn mobius_action() {
        let p = QMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        assert_eq!(fin(1, 1).apply(&p), fin(1, 2));
        assert_eq!(Slope::Infinity.apply(&p), fin(1, 1));
        assert!(fin(0, 1).is_fixed_by(&p));
        let e = QMatrix::from_ints(&[&[0, 1], &[-1, 0]]);
        assert_eq!(fin(0, 1).apply(&e), Slope::Infinity);
    }

    #[test]
    fn arcs_through_infinity() {
        let big = Arc::new(fin(2, 1), fin(-2, 1));
        assert!(big.contains(&Slope::Infinity));
        assert!(big.contains(&fin(5, 1)));
        assert!(!big.contains(&fin(0, 1)));
        let small = Arc::interval(rat(-1, 2), rat(1, 2));
        assert!(small.is_disjoint(&big));
        assert!(big.is_disjoint(&small));
        assert!(big.contains_arc(&Arc::new(Slope::Infinity, fin(-3, 1))));
        assert!(!big.contains_arc(&Arc::new(fin(-3, 1), Slope::Infinity)));
        assert!(!small.contains_arc(&Arc::new(fin(1, 2), fin(-1, 2))));
    }

    #[test]
    fn touching_arcs() {
        let a = Arc::interval(int(0), rat(1, 2));
        let b = Arc::interval(rat(-1, 2), int(0));
        assert_eq!(a.finite_intersection(&b), Some(vec![fin(0, 1)]));
        assert_eq!(a.finite_intersection(&Arc::interval(rat(1, 4), int(1))), None);
    }

    #[test]
    fn images_respect_orientation() {
        let flip = QMatrix::from_ints(&[&[1, 0], &[0, -1]]);
        let a = Arc::interval(int(1), int(2));
        assert_eq!(a.image(&flip), Arc::interval(int(-2), int(-1)));
        let p4 = QMatrix::from_ints(&[&[1, 4], &[0, 1]]);
        let outside = Arc::interval(rat(-1, 2), int(0)).complement();
        assert!(Arc::interval(int(0), rat(1, 2)).contains_arc(&outside.image(&p4)));
    }
}
