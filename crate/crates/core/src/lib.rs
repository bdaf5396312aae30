//! Generalized Baumslag–Solitar groups as finite graphs of ℤⁿ-groups.
//!
//! The crate computes presentations, holonomy and Bass–Serre degrees, solves the
//! word problem through Britton normal forms, decides virtual solvability of the
//! holonomy image in GL₂(ℚ) with re-checkable certificates, and combines these
//! into quasi-isometry subclass and Haagerup / weak amenability verdicts.

pub mod classify;
pub mod cli;
pub mod format;
pub mod gog;
pub mod holonomy;
pub mod linalg;
pub mod matgrp;
pub mod samples;
pub mod verdict;
pub mod word;
pub mod words;

pub use gog::{GoGSpec, GraphOfGroups};
pub use word::Word;
