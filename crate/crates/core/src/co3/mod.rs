//! The Conway group Co3 on 276 points: calibration, the local model of a
//! Sylow 2-subgroup, the distinguished radical classes, the 2-local
//! geometry checks, the fixed-point complex of a central involution and
//! the Euler characteristic count.

pub mod checks;
mod context;
pub mod geometry;
pub mod leech;
pub mod local;
mod model;
mod pipeline;
mod radicals;
mod sylow;

pub use context::{
    generator_digest, images_commute, Co3Config, Co3Context, CENTRALIZER_2A, CENTRALIZER_2B, CLASS_2A_SIZE,
    CLASS_2B_SIZE, DEGREE,
};
pub use leech::{co3_generators, CO3_ORDER};
pub use model::{u4_mul, PureCentral, SylowModel, PLANE_PAIRS};
pub use radicals::{
    instance, instantiate, local_normalizers, signature, FlagStabilizers, LocalNormalizers, NormalizerData, RadicalInstance,
    RadicalKind, ALL_KINDS,
};
pub use pipeline::{parse_suites, Co3Pipeline, Suite};
pub use sylow::{sylow2, SYLOW_ORDER};

use thiserror::Error;

use crate::complex::ComplexError;
use crate::morse::MorseError;
use crate::perm::PermError;
use crate::radical::RadicalError;

#[derive(Debug, Error)]
pub enum Co3Error {
    #[error("generators act on {0} points, expected 276")]
    WrongDegree(usize),
    #[error("group order {0} is not |Co3|")]
    WrongOrder(u128),
    #[error("sampled involutions have fixed-point counts {0:?}, expected two classes")]
    InvolutionClasses(Vec<usize>),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Radical(#[from] RadicalError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Morse(#[from] MorseError),
}
