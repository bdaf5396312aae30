//! Word length of powers of a vertex-group element.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::britton::Reducer;
use super::geodesic::{GeodesicLength, IdentityBall};
use super::WordsError;
use crate::gog::{Generator, GoGSpec};
use crate::holonomy::HolonomyData;
use crate::linalg::rational::{to_f64, Rational};
use crate::linalg::QMatrix;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionRow {
    pub m: u64,
    /// Length of an explicit spelling of `vᵐ`, checked by reduction.
    pub upper_bound: u64,
    pub upper_bound_word: Word,
    /// Exact length from breadth-first search, when `m` is in the exact window.
    pub exact_length: Option<u32>,
    /// Analytic lower bound (single-vertex graphs only), not search-verified.
    pub analytic_lower_bound: Option<u64>,
    /// `length / ln m` for `m ≥ 2`, using the exact length when known.
    pub ratio_to_log: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionProfile {
    pub element: Vec<i64>,
    pub rows: Vec<DistortionRow>,
    /// Largest `ratio_to_log` over the window.
    pub limsup_estimate: Option<f64>,
    /// Letters used to rescale, as `(word, factor)`: `t^{-s}·vᵠ·t^{s} = v^{kq}`.
    pub rescalers: Vec<(String, i64)>,
}

/// Controls the exact part of the profile.
#[derive(Clone, Copy, Debug)]
pub struct ExactWindow {
    /// Largest power whose length is computed exactly.
    pub max_m: u64,
    /// Radius of the shared identity ball.
    pub ball_radius: u32,
}

impl Default for ExactWindow {
    fn default() -> Self {
        ExactWindow {
            max_m: 64,
            ball_radius: 7,
        }
    }
}

/// `t^{-sign}·(q·v)·t^{sign} = (factor·q)·v` for all integers `q`.
#[derive(Clone, Debug)]
struct Rescaler {
    letter: String,
    sign: i64,
    factor: i64,
}

fn rescalers(r: &Reducer, v: &[i64]) -> Vec<Rescaler> {
    let g = r.graph();
    let base = g.base_vertex();
    let vq: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
    let vb: Vec<num_bigint::BigInt> = v.iter().map(|&x| x.into()).collect();
    let mut out = Vec::new();
    for e in g.stable_edges() {
        if g.source(e) != base || g.target(e) != base {
            continue;
        }
        let edge = g.edge(e);
        let (a, o) = (edge.alpha.to_qmatrix(), edge.omega.to_qmatrix());
        let forward = &o * &a.inverse().expect("injective");
        let backward = &a * &o.inverse().expect("injective");
        for (sign, inclusion, m) in [(1, &edge.alpha, forward), (-1, &edge.omega, backward)] {
            if inclusion.lattice_solve(&vb).ok().flatten().is_none() {
                continue;
            }
            if let Some(k) = eigen_factor(&m, &vq) {
                if k.abs() >= 2 {
                    out.push(Rescaler {
                        letter: edge.name.clone(),
                        sign,
                        factor: k,
                    });
                }
            }
        }
    }
    out
}

/// Integer `k` with `m·v = k·v`, if any.
fn eigen_factor(m: &QMatrix, v: &[Rational]) -> Option<i64> {
    let mv = m.mul_vec(v);
    let i = v.iter().position(|x| !num_traits::Zero::is_zero(x))?;
    let k = &mv[i] / &v[i];
    if !k.is_integer() || mv.iter().zip(v).any(|(a, b)| *a != &k * b) {
        return None;
    }
    k.to_integer().to_i64()
}

#[derive(Clone, Copy, Debug)]
enum Choice {
    Direct,
    Rescale { which: usize, q: i64, r: i64 },
}

struct Planner<'a> {
    rescalers: &'a [Rescaler],
    unit_cost: u64,
    memo: HashMap<u64, (u64, Choice)>,
}

impl Planner<'_> {
    fn cost(&mut self, m: u64) -> (u64, Choice) {
        if let Some(&c) = self.memo.get(&m) {
            return c;
        }
        let mut best = (m.saturating_mul(self.unit_cost), Choice::Direct);
        for (which, s) in self.rescalers.iter().enumerate() {
            let k = s.factor;
            let base = (m as i128).rem_euclid(k.unsigned_abs() as i128) as i64;
            for r in [base, base - k.abs()] {
                let num = m as i128 - r as i128;
                let q = (num / k as i128) as i64;
                if q == 0 || q.unsigned_abs() >= m {
                    continue;
                }
                let sub = self.cost(q.unsigned_abs()).0;
                let total = sub + 2 + r.unsigned_abs() * self.unit_cost;
                if total < best.0 {
                    best = (total, Choice::Rescale { which, q, r });
                }
            }
        }
        self.memo.insert(m, best);
        best
    }

    fn word(&mut self, m: u64, v_word: &Word) -> Word {
        match self.cost(m).1 {
            Choice::Direct => v_word.pow(m as i64),
            Choice::Rescale { which, q, r } => {
                let s = &self.rescalers[which];
                let inner = self.word(q.unsigned_abs(), v_word);
                let inner = if q < 0 { inner.inverse() } else { inner };
                Word::letter(&s.letter, -s.sign)
                    .concat(&inner)
                    .concat(&Word::letter(&s.letter, s.sign))
                    .concat(&v_word.pow(r))
            }
        }
    }
}

/// Growth constant of the affine action `xᵢ ↦ translation, t ↦ hol(t)⁻¹`:
/// every letter moves a point `x` to norm at most `C·‖x‖∞ + 1`.
fn affine_growth(hd: &HolonomyData) -> f64 {
    hd.stable
        .iter()
        .flat_map(|s| {
            [
                to_f64(&s.matrix.operator_norm_inf()),
                to_f64(&s.inverse.operator_norm_inf()),
            ]
        })
        .fold(1.0, f64::max)
}

pub fn distortion_profile(
    spec: &GoGSpec,
    v: &[i64],
    powers: &[u64],
    window: ExactWindow,
) -> Result<DistortionProfile, WordsError> {
    let r = Reducer::new(spec)?;
    let g = r.graph();
    if v.len() != g.rank() {
        return Err(WordsError::BadElement {
            got: v.len(),
            expected: g.rank(),
        });
    }
    if v.iter().all(|&x| x == 0) {
        return Err(WordsError::ZeroElement);
    }
    let base = g.base_vertex();
    let v_big: Vec<num_bigint::BigInt> = v.iter().map(|&x| x.into()).collect();
    let v_word = g.vertex_element_word(base, &v_big);
    let unit_cost = v_word.length();
    let scalers = rescalers(&r, v);
    let mut planner = Planner {
        rescalers: &scalers,
        unit_cost,
        memo: HashMap::new(),
    };

    let single_vertex = g.vertex_count() == 1;
    let growth = affine_growth(&HolonomyData::from_graph(g));
    let v_norm = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as f64;

    let mut rows = Vec::with_capacity(powers.len());
    for &m in powers {
        let word = planner.word(m, &v_word);
        let scaled: Vec<i64> = v
            .iter()
            .map(|&x| x.checked_mul(m as i64).ok_or(WordsError::Overflow))
            .collect::<Result<_, _>>()?;
        let target = r.base_element(&scaled)?;
        assert_eq!(
            r.reduce(&word)?,
            target,
            "rescaled spelling of v^{m} does not reduce to v^{m}"
        );
        let analytic_lower_bound = (single_vertex && m >= 1).then(|| {
            let bound = ((m as f64) * v_norm).ln() / (2.0 * growth).ln();
            (bound - 1e-9).ceil().max(1.0) as u64
        });
        rows.push(DistortionRow {
            m,
            upper_bound: word.length(),
            upper_bound_word: word,
            exact_length: None,
            analytic_lower_bound,
            ratio_to_log: None,
        });
    }

    let exact_targets: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].m <= window.max_m).collect();
    if !exact_targets.is_empty() {
        let ball = IdentityBall::build(&r, window.ball_radius)?;
        let lengths: Vec<GeodesicLength> = exact_targets
            .par_iter()
            .map(|&i| {
                let row = &rows[i];
                let scaled: Vec<i64> = v.iter().map(|&x| x * row.m as i64).collect();
                let target = r.base_element(&scaled)?;
                // The spelling bounds the distance, so the search always resolves.
                let extra = (row.upper_bound as u32).saturating_sub(ball.radius());
                ball.distance_to(&r, &target, extra)
            })
            .collect::<Result<_, _>>()?;
        for (&i, len) in exact_targets.iter().zip(lengths) {
            rows[i].exact_length = len.exact();
        }
    }
    for row in &mut rows {
        if row.m >= 2 {
            let len = row.exact_length.map_or(row.upper_bound, u64::from);
            row.ratio_to_log = Some(len as f64 / (row.m as f64).ln());
        }
    }
    let limsup_estimate = rows
        .iter()
        .filter_map(|r| r.ratio_to_log)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    Ok(DistortionProfile {
        element: v.to_vec(),
        rows,
        limsup_estimate,
        rescalers: scalers
            .iter()
            .map(|s| (Word::letter(&s.letter, s.sign).to_string(), s.factor))
            .collect(),
    })
}

/// Vertex vector of a vertex letter at the base vertex.
pub fn letter_vector(spec: &GoGSpec, name: &str) -> Result<Vec<i64>, WordsError> {
    let r = Reducer::new(spec)?;
    let g = r.graph();
    match g.generator(name)? {
        Generator::Vertex { vertex, coord } if vertex == g.base_vertex() => {
            let mut v = vec![0; g.rank()];
            v[coord] = 1;
            Ok(v)
        }
        _ => Err(crate::gog::GogError::UnknownLetter(format!("{name} (not a base vertex letter)")).into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::spec_a;

    #[test]
    fn rescaled_upper_bounds() {
        let p = distortion_profile(
            &spec_a(),
            &[1, 0],
            &[1, 2, 1024],
            ExactWindow {
                max_m: 2,
                ball_radius: 2,
            },
        )
        .unwrap();
        assert_eq!(p.rows[0].upper_bound, 1);
        assert_eq!(p.rows[0].exact_length, Some(1));
        // Cheaper than h^-10 a h^10: a⁴ costs 4 while two more conjugations cost 4 too.
        assert_eq!(p.rows[2].upper_bound, 20);
        assert_eq!(p.rows[2].upper_bound_word.to_string(), "h^-8 a^4 h^8");
        assert!(p.rows[2].exact_length.is_none());
        assert!(p.rows[2].analytic_lower_bound.unwrap() <= 21);
        assert_eq!(p.rescalers, vec![("h".to_string(), 2)]);
    }

    #[test]
    fn zero_element_is_rejected() {
        assert_eq!(
            distortion_profile(&spec_a(), &[0, 0], &[2], ExactWindow::default()),
            Err(WordsError::ZeroElement)
        );
    }

    #[test]
    fn upper_bounds_follow_binary_expansion() {
        let p = distortion_profile(
            &spec_a(),
            &[1, 0],
            &(1..=40).collect::<Vec<_>>(),
            ExactWindow {
                max_m: 0,
                ball_radius: 0,
            },
        )
        .unwrap();
        for row in &p.rows {
            assert!(row.upper_bound <= 2 * (64 - row.m.leading_zeros() as u64) + 2 * row.m.count_ones() as u64);
            assert!(row.analytic_lower_bound.unwrap() <= row.upper_bound);
        }
    }
}
