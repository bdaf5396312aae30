//! Exact word length by breadth-first search over normal forms.

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use super::britton::{NormalForm, Reducer};
use super::WordsError;
use crate::gog::GoGSpec;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum GeodesicLength {
    Exact(u32),
    /// No spelling of length ≤ the radius exists.
    ExceedsRadius(u32),
}

impl GeodesicLength {
    pub fn exact(self) -> Option<u32> {
        match self {
            GeodesicLength::Exact(d) => Some(d),
            GeodesicLength::ExceedsRadius(_) => None,
        }
    }
}

fn neighbours(r: &Reducer, nf: &NormalForm) -> Result<Vec<NormalForm>, WordsError> {
    r.alphabet()
        .iter()
        .map(|(name, exp)| {
            let mut next = nf.clone();
            r.multiply(&mut next, name, *exp)?;
            Ok(next)
        })
        .collect()
}

/// Next BFS layer: unseen neighbours of `frontier`, in deterministic order.
fn expand(
    r: &Reducer,
    frontier: &[NormalForm],
    seen: &FxHashMap<NormalForm, u32>,
) -> Result<Vec<NormalForm>, WordsError> {
    let children: Vec<Vec<NormalForm>> = frontier
        .par_iter()
        .map(|nf| neighbours(r, nf))
        .collect::<Result<_, _>>()?;
    let mut fresh = FxHashSet::default();
    let mut next = Vec::new();
    for c in children.into_iter().flatten() {
        if !seen.contains_key(&c) && fresh.insert(c.clone()) {
            next.push(c);
        }
    }
    Ok(next)
}

/// Distance from the identity to `target` by bidirectional search, expanding
/// the smaller frontier; exact whenever it returns `Exact`.
pub fn distance(r: &Reducer, target: &NormalForm, max_radius: u32) -> Result<GeodesicLength, WordsError> {
    if target.is_identity() {
        return Ok(GeodesicLength::Exact(0));
    }
    let mut dist_a: FxHashMap<NormalForm, u32> = FxHashMap::default();
    let mut dist_b: FxHashMap<NormalForm, u32> = FxHashMap::default();
    dist_a.insert(r.identity(), 0);
    dist_b.insert(target.clone(), 0);
    let mut front_a = vec![r.identity()];
    let mut front_b = vec![target.clone()];
    let (mut ra, mut rb) = (0u32, 0u32);
    while ra + rb < max_radius {
        let expand_a = front_a.len() <= front_b.len();
        let (front, dist, other, radius) = if expand_a {
            (&mut front_a, &mut dist_a, &dist_b, &mut ra)
        } else {
            (&mut front_b, &mut dist_b, &dist_a, &mut rb)
        };
        let next = expand(r, front, dist)?;
        *radius += 1;
        // A meeting in this layer is optimal: no earlier layer met.
        let best = next.iter().filter_map(|x| other.get(x)).map(|d| d + *radius).min();
        if let Some(d) = best {
            return Ok(GeodesicLength::Exact(d));
        }
        if next.is_empty() {
            break;
        }
        for x in &next {
            dist.insert(x.clone(), *radius);
        }
        *front = next;
    }
    Ok(GeodesicLength::ExceedsRadius(max_radius))
}

pub fn geodesic_length(spec: &GoGSpec, w: &Word, max_radius: u32) -> Result<GeodesicLength, WordsError> {
    let r = Reducer::new(spec)?;
    let target = r.reduce(w)?;
    distance(&r, &target, max_radius)
}

/// The ball of a fixed radius around the identity, reused across many targets.
pub struct IdentityBall {
    radius: u32,
    dist: FxHashMap<NormalForm, u32>,
}

impl IdentityBall {
    pub fn build(r: &Reducer, radius: u32) -> Result<Self, WordsError> {
        let mut dist = FxHashMap::default();
        dist.insert(r.identity(), 0);
        let mut frontier = vec![r.identity()];
        for d in 1..=radius {
            let next = expand(r, &frontier, &dist)?;
            for x in &next {
                dist.insert(x.clone(), d);
            }
            frontier = next;
        }
        Ok(IdentityBall { radius, dist })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Exact distance to `target` if it is at most `radius + max_extra`.
    pub fn distance_to(&self, r: &Reducer, target: &NormalForm, max_extra: u32) -> Result<GeodesicLength, WordsError> {
        if let Some(&d) = self.dist.get(target) {
            return Ok(GeodesicLength::Exact(d));
        }
        let mut seen = FxHashMap::default();
        seen.insert(target.clone(), 0);
        let mut frontier = vec![target.clone()];
        for layer in 1..=max_extra {
            let next = expand(r, &frontier, &seen)?;
            if let Some(d) = next.iter().filter_map(|x| self.dist.get(x)).min() {
                return Ok(GeodesicLength::Exact(layer + d));
            }
            for x in &next {
                seen.insert(x.clone(), layer);
            }
            frontier = next;
        }
        Ok(GeodesicLength::ExceedsRadius(self.radius + max_extra))
    }
}
