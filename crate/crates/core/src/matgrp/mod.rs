//! Decision procedures for finitely generated subgroups of GL₂(ℚ).

pub mod closure;
pub mod density;
pub mod pingpong;
pub mod projective;
pub mod tits;

pub use closure::{closure_describe, ClosureDescription, UnipotentClosure, ValueGroup};
pub use density::{coarse_density, CoarseDensity, DensityVerdict};
pub use pingpong::{pingpong_certify, pingpong_generators, FreePair};
pub use projective::{Arc, Slope};
pub use tits::{virtually_solvable, TitsCertificate, TitsDecision};

use thiserror::Error;

use crate::linalg::QMatrix;
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatgrpError {
    #[error("only 1×1 and 2×2 matrix groups are supported (got {0}×{0})")]
    UnsupportedDimension(usize),
    #[error("generator `{0}` is not invertible")]
    Singular(String),
    #[error("generators have different dimensions")]
    MixedDimensions,
}

/// Named invertible generators with their inverses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    dim: usize,
    names: Vec<String>,
    mats: Vec<QMatrix>,
    inverses: Vec<QMatrix>,
}

impl GeneratorSet {
    pub fn named(gens: Vec<(String, QMatrix)>) -> Result<Self, MatgrpError> {
        let dim = gens.first().map_or(2, |(_, m)| m.dim());
        let mut names = Vec::new();
        let mut mats = Vec::new();
        let mut inverses = Vec::new();
        for (name, m) in gens {
            if m.dim() != dim {
                return Err(MatgrpError::MixedDimensions);
            }
            let inv = m.inverse().ok_or_else(|| MatgrpError::Singular(name.clone()))?;
            names.push(name);
            mats.push(m);
            inverses.push(inv);
        }
        Ok(GeneratorSet {
            dim,
            names,
            mats,
            inverses,
        })
    }

    /// Generators named `g1, g2, …`.
    pub fn from_matrices(gens: Vec<QMatrix>) -> Result<Self, MatgrpError> {
        Self::named(
            gens.into_iter()
                .enumerate()
                .map(|(i, m)| (format!("g{}", i + 1), m))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.mats
    }

    pub fn subset(&self, indices: &[usize]) -> GeneratorSet {
        GeneratorSet {
            dim: self.dim,
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            mats: indices.iter().map(|&i| self.mats[i].clone()).collect(),
            inverses: indices.iter().map(|&i| self.inverses[i].clone()).collect(),
        }
    }

    /// Matrix of `x^{±1}` for alphabet index `k` (`2i` is `xᵢ`, `2i+1` is `xᵢ⁻¹`).
    fn letter(&self, k: usize) -> &QMatrix {
        if k % 2 == 0 {
            &self.mats[k / 2]
        } else {
            &self.inverses[k / 2]
        }
    }

    fn letter_word(&self, ks: &[usize]) -> Word {
        Word::from_letters(
            ks.iter()
                .map(|&k| (self.names[k / 2].as_str(), if k % 2 == 0 { 1 } else { -1 })),
        )
    }

    /// Evaluates a word over the generator names; `None` on an unknown name.
    pub fn eval(&self, w: &Word) -> Option<QMatrix> {
        let mut acc = QMatrix::identity(self.dim);
        for l in w.letters() {
            let i = self.names.iter().position(|n| *n == l.name)?;
            let base = if l.exp < 0 { &self.inverses[i] } else { &self.mats[i] };
            acc = &acc * &base.pow(l.exp.abs()).expect("nonnegative power");
        }
        Some(acc)
    }

    /// Freely reduced words of length `1..=max_len` in shortlex order, with
    /// their matrices.
    pub fn short_words(&self, max_len: usize) -> Vec<(Word, QMatrix)> {
        let alphabet = 2 * self.len();
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<usize>, QMatrix)> = vec![(Vec::new(), QMatrix::identity(self.dim))];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, m) in &layer {
                for k in 0..alphabet {
                    if w.last().is_some_and(|&l| l ^ 1 == k) {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(k);
                    next.push((w2, m * self.letter(k)));
                }
            }
            out.extend(next.iter().map(|(w, m)| (self.letter_word(w), m.clone())));
            layer = next;
        }
        out
    }
}
