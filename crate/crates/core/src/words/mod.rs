//! Word problem and word metric of the fundamental group.

pub mod britton;
pub mod distortion;
pub mod geodesic;

pub use britton::{britton_reduce, is_identity, NormalForm, Reducer};
pub use distortion::{distortion_profile, DistortionProfile, DistortionRow};
pub use geodesic::{geodesic_length, GeodesicLength, IdentityBall};

use thiserror::Error;

use crate::gog::GogError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error(transparent)]
    Graph(#[from] GogError),
    #[error("integer overflow while reducing the word (vertex coordinates exceed 64 bits)")]
    Overflow,
    #[error("edge inclusion entries exceed 64 bits")]
    LargeInclusion,
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("vertex element has {got} coordinates, expected {expected}")]
    BadElement { got: usize, expected: usize },
}
