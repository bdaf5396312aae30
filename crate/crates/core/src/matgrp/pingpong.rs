//! Free-subgroup certificates by ping-pong on the projective line.
//!
//! For `g` the certificate holds closed arcs `A⁺`, `A⁻` with
//! `g(cl(P¹∖A⁻)) ⊆ A⁺`, `g⁻¹(cl(P¹∖A⁺)) ⊆ A⁻` and `A⁺ ∩ A⁻ ⊆ Fix(g)`; the same
//! for `h` with `B⁺`, `B⁻`. The `A` arcs are disjoint from the `B` arcs and a
//! witness point lies outside all four. A reduced word then moves the witness
//! into the arc of its first letter, so it acts nontrivially and `⟨g, h⟩` is free.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::projective::{Arc, Slope};
use super::GeneratorSet;
use crate::linalg::rational::{rat, to_f64, Rational};
use crate::linalg::{eigen_directions, ProjPoint, QMatrix, QuadraticNumber};
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreePair {
    pub g_word: Word,
    pub h_word: Word,
    pub g: QMatrix,
    pub h: QMatrix,
    pub g_attracting: Arc,
    pub g_repelling: Arc,
    pub h_attracting: Arc,
    pub h_repelling: Arc,
    /// A point outside all four arcs.
    pub witness: Slope,
}

fn table_tennis(m: &QMatrix, m_inv: &QMatrix, plus: &Arc, minus: &Arc) -> Result<(), String> {
    if plus.is_degenerate() || minus.is_degenerate() {
        return Err("degenerate arc".into());
    }
    if !plus.contains_arc(&minus.complement().image(m)) {
        return Err(format!("image of the complement of {minus} is not inside {plus}"));
    }
    if !minus.contains_arc(&plus.complement().image(m_inv)) {
        return Err(format!(
            "inverse image of the complement of {plus} is not inside {minus}"
        ));
    }
    let shared = plus
        .finite_intersection(minus)
        .ok_or_else(|| format!("{plus} and {minus} overlap"))?;
    if let Some(p) = shared.iter().find(|p| !p.is_fixed_by(m)) {
        return Err(format!("{plus} and {minus} share the non-fixed point {p}"));
    }
    Ok(())
}

impl FreePair {
    fn arcs(&self) -> [&Arc; 4] {
        [
            &self.g_attracting,
            &self.g_repelling,
            &self.h_attracting,
            &self.h_repelling,
        ]
    }

    /// Re-checks every ping-pong condition with exact arithmetic. With `gens`,
    /// also re-evaluates the two words.
    pub fn verify(&self, gens: Option<&GeneratorSet>) -> Result<(), String> {
        if let Some(gens) = gens {
            if gens.eval(&self.g_word).as_ref() != Some(&self.g) {
                return Err(format!("word {} does not evaluate to g", self.g_word));
            }
            if gens.eval(&self.h_word).as_ref() != Some(&self.h) {
                return Err(format!("word {} does not evaluate to h", self.h_word));
            }
        }
        if self.g.dim() != 2 || self.h.dim() != 2 {
            return Err("ping-pong needs 2×2 matrices".into());
        }
        let g_inv = self.g.inverse().ok_or("g is singular")?;
        let h_inv = self.h.inverse().ok_or("h is singular")?;
        table_tennis(&self.g, &g_inv, &self.g_attracting, &self.g_repelling)?;
        table_tennis(&self.h, &h_inv, &self.h_attracting, &self.h_repelling)?;
        for a in [&self.g_attracting, &self.g_repelling] {
            for b in [&self.h_attracting, &self.h_repelling] {
                if !a.is_disjoint(b) {
                    return Err(format!("{a} meets {b}"));
                }
            }
        }
        if self.arcs().iter().any(|a| a.contains(&self.witness)) {
            return Err(format!("witness {} lies in an arc", self.witness));
        }
        Ok(())
    }

    /// All reduced words of length ≤ 4 in `g^{±1}, h^{±1}`, and all 4⁴ words of
    /// length 4 that do not freely cancel, evaluate to non-identity matrices.
    pub fn honesty_check(&self) -> bool {
        let letters = [
            self.g.clone(),
            self.g.inverse().expect("invertible"),
            self.h.clone(),
            self.h.inverse().expect("invertible"),
        ];
        let id = QMatrix::identity(2);
        for code in 0..256usize {
            let ks = [code & 3, (code >> 2) & 3, (code >> 4) & 3, (code >> 6) & 3];
            let mut m = id.clone();
            for k in ks {
                m = &m * &letters[k];
            }
            // Free reduction: index k and k^1 are mutually inverse.
            let mut stack: Vec<usize> = Vec::new();
            for k in ks {
                if stack.last() == Some(&(k ^ 1)) {
                    stack.pop();
                } else {
                    stack.push(k);
                }
            }
            if !stack.is_empty() && m.is_identity() {
                return false;
            }
            if stack.len() == 4 || stack.is_empty() {
                continue;
            }
            // Shorter reduced words are covered by evaluating the reduced stack.
            let mut r = id.clone();
            for &k in &stack {
                r = &r * &letters[k];
            }
            if r.is_identity() {
                return false;
            }
        }
        true
    }
}

/// A real fixed point of a non-elliptic element.
#[derive(Clone, Debug, PartialEq, Eq)]
enum RealPoint {
    Rational(Slope),
    Irrational(QuadraticNumber),
}

impl RealPoint {
    fn from_proj(p: &ProjPoint) -> Option<Self> {
        match p.slope() {
            None => Some(RealPoint::Rational(Slope::Infinity)),
            Some(s) if s.is_rational() => Some(RealPoint::Rational(Slope::Finite(s.as_rational()?.clone()))),
            Some(s) if s.is_real() => Some(RealPoint::Irrational(s.clone())),
            Some(_) => None,
        }
    }

    /// Closed arc of radius `ε` around the point (in `1/s` near ∞).
    fn around(&self, eps: &Rational) -> Arc {
        match self {
            RealPoint::Rational(Slope::Finite(f)) => Arc::interval(f - eps, f + eps),
            RealPoint::Rational(Slope::Infinity) => {
                let r = eps.recip();
                Arc::new(Slope::Finite(r.clone()), Slope::Finite(-r))
            }
            RealPoint::Irrational(q) => {
                // Grid bracket, corrected exactly.
                let k = (q.to_f64() / to_f64(eps)).floor() as i64;
                let mut lo = eps * Rational::from_integer(k.into());
                let mut hi = &lo + eps;
                while q.cmp_rational(&lo).is_le() {
                    lo -= eps;
                }
                while q.cmp_rational(&hi).is_ge() {
                    hi += eps;
                }
                Arc::interval(lo, hi)
            }
        }
    }

    /// Half-arcs of radius `ε` on either side: `(after, before)` in the
    /// positive direction.
    fn sides(&self, eps: &Rational) -> Option<(Arc, Arc)> {
        match self {
            RealPoint::Rational(Slope::Finite(f)) => {
                Some((Arc::interval(f.clone(), f + eps), Arc::interval(f - eps, f.clone())))
            }
            RealPoint::Rational(Slope::Infinity) => {
                let r = eps.recip();
                Some((
                    Arc::new(Slope::Infinity, Slope::Finite(-r.clone())),
                    Arc::new(Slope::Finite(r), Slope::Infinity),
                ))
            }
            RealPoint::Irrational(_) => None,
        }
    }
}

/// A non-elliptic element with positive determinant and its fixed points.
#[derive(Clone, Debug)]
struct Candidate {
    word: Word,
    m: QMatrix,
    fixed: Vec<ProjPoint>,
}

fn candidate(word: Word, m: QMatrix) -> Option<Candidate> {
    let (word, m) = if m.det().is_negative() {
        (word.pow(2), &m * &m)
    } else {
        (word, m)
    };
    if m.is_scalar() {
        return None;
    }
    let fixed = eigen_directions(&m).ok()?.points().to_vec();
    if fixed.iter().any(|p| RealPoint::from_proj(p).is_none()) {
        return None;
    }
    let disc = &m.trace() * &m.trace() - Rational::from_integer(4.into()) * m.det();
    if disc.is_negative() {
        return None;
    }
    Some(Candidate { word, m, fixed })
}

/// `(attracting, repelling)` arc assignments to try for an element.
fn arc_options(fixed: &[ProjPoint], eps: &Rational) -> Vec<(Arc, Arc)> {
    let pts: Vec<RealPoint> = fixed.iter().filter_map(RealPoint::from_proj).collect();
    match pts.as_slice() {
        [p] => match p.sides(eps) {
            Some((after, before)) => vec![(after.clone(), before.clone()), (before, after)],
            None => Vec::new(),
        },
        [p, q] => {
            let (a, b) = (p.around(eps), q.around(eps));
            vec![(a.clone(), b.clone()), (b, a)]
        }
        _ => Vec::new(),
    }
}

fn witness_point(arcs: &[&Arc]) -> Option<Slope> {
    let mut ends: Vec<Rational> = arcs
        .iter()
        .flat_map(|a| [&a.start, &a.end])
        .filter_map(|s| match s {
            Slope::Finite(q) => Some(q.clone()),
            Slope::Infinity => None,
        })
        .collect();
    ends.sort();
    ends.dedup();
    let mut candidates = vec![Slope::Infinity, Slope::Finite(Rational::zero())];
    if let (Some(lo), Some(hi)) = (ends.first(), ends.last()) {
        candidates.push(Slope::Finite(lo - Rational::one()));
        candidates.push(Slope::Finite(hi + Rational::one()));
    }
    for w in ends.windows(2) {
        candidates.push(Slope::Finite((&w[0] + &w[1]) / Rational::from_integer(2.into())));
    }
    candidates.into_iter().find(|p| arcs.iter().all(|a| !a.contains(p)))
}

/// Search bounds for [`pingpong_certify`].
#[derive(Clone, Copy, Debug)]
pub struct PingPongSearch {
    pub max_word_length: usize,
    /// Powers `2⁰ … 2^max_power_log2` are tried.
    pub max_power_log2: u32,
    /// Arc radii `2⁻¹ … 2^-eps_levels` are tried.
    pub eps_levels: u32,
    pub max_candidates: usize,
}

impl Default for PingPongSearch {
    fn default() -> Self {
        PingPongSearch {
            max_word_length: 3,
            max_power_log2: 10,
            eps_levels: 10,
            max_candidates: 48,
        }
    }
}

pub fn pingpong_certify(gens: &GeneratorSet) -> Option<FreePair> {
    pingpong_search(gens, PingPongSearch::default())
}

pub fn pingpong_search(gens: &GeneratorSet, bounds: PingPongSearch) -> Option<FreePair> {
    if gens.dim() != 2 {
        return None;
    }
    let mut cands: Vec<Candidate> = Vec::new();
    for (w, m) in gens.short_words(bounds.max_word_length) {
        if cands.len() >= bounds.max_candidates {
            break;
        }
        if let Some(c) = candidate(w, m) {
            if !cands.iter().any(|d| d.m == c.m) {
                cands.push(c);
            }
        }
    }
    for j in 1..cands.len() {
        for i in 0..j {
            let (a, b) = (&cands[i], &cands[j]);
            if a.fixed.iter().any(|p| b.fixed.contains(p)) {
                continue;
            }
            if let Some(fp) = certify_pair(a, b, bounds) {
                return Some(fp);
            }
        }
    }
    None
}

/// Ping-pong for exactly two generators, without words or powers, so that a
/// success shows the generators themselves are a free basis.
pub fn pingpong_generators(gens: &GeneratorSet) -> Option<FreePair> {
    if gens.dim() != 2 || gens.len() != 2 {
        return None;
    }
    let mut cands = Vec::with_capacity(2);
    for (name, m) in gens.names().iter().zip(gens.matrices()) {
        if m.det().is_negative() {
            return None;
        }
        cands.push(candidate(Word::letter(name, 1), m.clone())?);
    }
    if cands[0].fixed.iter().any(|p| cands[1].fixed.contains(p)) {
        return None;
    }
    let bounds = PingPongSearch {
        max_power_log2: 0,
        ..PingPongSearch::default()
    };
    certify_pair(&cands[0], &cands[1], bounds)
}

fn certify_pair(a: &Candidate, b: &Candidate, bounds: PingPongSearch) -> Option<FreePair> {
    for level in 1..=bounds.eps_levels {
        let eps = rat(1, 1i64 << level);
        let a_opts = arc_options(&a.fixed, &eps);
        let b_opts = arc_options(&b.fixed, &eps);
        let mut ga = a.m.clone();
        let mut gb = b.m.clone();
        for k in 0..=bounds.max_power_log2 {
            let power = 1i64 << k;
            for (ap, am) in &a_opts {
                for (bp, bm) in &b_opts {
                    let Some(witness) = witness_point(&[ap, am, bp, bm]) else {
                        continue;
                    };
                    let fp = FreePair {
                        g_word: a.word.pow(power),
                        h_word: b.word.pow(power),
                        g: ga.clone(),
                        h: gb.clone(),
                        g_attracting: ap.clone(),
                        g_repelling: am.clone(),
                        h_attracting: bp.clone(),
                        h_repelling: bm.clone(),
                        witness,
                    };
                    if fp.verify(None).is_ok() {
                        return Some(fp);
                    }
                }
            }
            ga = &ga * &ga;
            gb = &gb * &gb;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;

    fn h() -> QMatrix {
        QMatrix::from_fractions_2x2([[(2, 1), (0, 1)], [(0, 1), (1, 2)]])
    }
    fn p() -> QMatrix {
        QMatrix::from_ints(&[&[1, 1], &[0, 1]])
    }
    fn e() -> QMatrix {
        QMatrix::from_ints(&[&[0, 1], &[-1, 0]])
    }

    fn hpe() -> GeneratorSet {
        GeneratorSet::named(vec![("h".into(), h()), ("p".into(), p()), ("e".into(), e())]).unwrap()
    }

    #[test]
    fn certificate_for_hpe() {
        let gens = hpe();
        let fp = pingpong_certify(&gens).expect("free pair");
        fp.verify(Some(&gens)).unwrap();
        assert!(fp.honesty_check());
    }

    #[test]
    fn hand_built_pair_verifies() {
        let p4 = p().pow(4).unwrap();
        let q4 = (&(&e() * &p()) * &e().inverse().unwrap()).pow(4).unwrap();
        let fp = FreePair {
            g_word: "p^4".parse().unwrap(),
            h_word: "e p^4 e^-1".parse().unwrap(),
            g: p4,
            h: q4,
            g_attracting: Arc::interval(int(0), rat(1, 2)),
            g_repelling: Arc::interval(rat(-1, 2), int(0)),
            h_attracting: Arc::new(Slope::Infinity, Slope::Finite(int(-2))),
            h_repelling: Arc::new(Slope::Finite(int(2)), Slope::Infinity),
            witness: Slope::Finite(int(1)),
        };
        fp.verify(Some(&hpe())).unwrap();
        assert!(fp.honesty_check());

        // Squares are not enough with closed arcs: P² maps -1/2 to ∞.
        let mut weak = fp.clone();
        weak.g = p().pow(2).unwrap();
        weak.g_word = "p^2".parse().unwrap();
        assert!(weak.verify(Some(&hpe())).is_err());

        let mut bad = fp.clone();
        bad.witness = Slope::Finite(int(0));
        assert!(bad.verify(None).is_err());
        let mut bad = fp;
        bad.h_repelling = Arc::new(Slope::Finite(rat(1, 4)), Slope::Infinity);
        assert!(bad.verify(None).is_err());
    }

    #[test]
    fn honesty_catches_relations() {
        let fp = FreePair {
            g_word: "e".parse().unwrap(),
            h_word: "e".parse().unwrap(),
            g: e(),
            h: e(),
            g_attracting: Arc::interval(int(0), int(1)),
            g_repelling: Arc::interval(int(2), int(3)),
            h_attracting: Arc::interval(int(4), int(5)),
            h_repelling: Arc::interval(int(6), int(7)),
            witness: Slope::Infinity,
        };
        assert!(fp.verify(None).is_err());
        assert!(!fp.honesty_check());
    }

    #[test]
    fn solvable_and_cyclic_groups_have_no_pair() {
        let hp = GeneratorSet::named(vec![("h".into(), h()), ("p".into(), p())]).unwrap();
        assert!(pingpong_certify(&hp).is_none());
        let only_h = GeneratorSet::named(vec![("h".into(), h())]).unwrap();
        assert!(pingpong_certify(&only_h).is_none());
    }

    #[test]
    fn generators_themselves() {
        let s = QMatrix::from_ints(&[&[1, 4], &[0, 1]]);
        let t = QMatrix::from_ints(&[&[1, 0], &[4, 1]]);
        let gens = GeneratorSet::from_matrices(vec![s, t]).unwrap();
        let fp = pingpong_generators(&gens).expect("free basis");
        assert_eq!(fp.g_word.to_string(), "g1");
        fp.verify(Some(&gens)).unwrap();
        // With closed arcs the Sanov pair itself needs a power.
        let sanov =
            GeneratorSet::from_matrices(vec![p().pow(2).unwrap(), QMatrix::from_ints(&[&[1, 0], &[2, 1]])]).unwrap();
        assert!(pingpong_generators(&sanov).is_none());
        assert!(pingpong_certify(&sanov).is_some());
    }

    #[test]
    fn hyperbolic_pair_with_irrational_fixed_points() {
        let a = QMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let b = QMatrix::from_ints(&[&[1, 1], &[1, 2]]);
        let gens = GeneratorSet::from_matrices(vec![a, b]).unwrap();
        let fp = pingpong_certify(&gens).expect("free pair");
        fp.verify(Some(&gens)).unwrap();
        assert!(fp.honesty_check());
    }
}
