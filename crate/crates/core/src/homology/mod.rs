//! Chain complexes over ℤ and ℚ, and the Hochschild, cyclic and periodic
//! homology of cyclic sets.

mod complex;
mod cyclic;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use complex::{homology, normalized_chains, unnormalized_chains, ChainComplex, DegreeHomology, HomologyResult};
pub use cyclic::{
    connes_maps, cyclic_homology, hochschild_homology, hochschild_operators, periodic_homology, ConnesMaps,
    ConnesRanks, CyclicBicomplex, HochschildOperators, PeriodicHomology,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Integers => "Z",
            Ring::Rationals => "Q",
        })
    }
}

impl FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(Ring::Integers),
            "Q" | "q" => Ok(Ring::Rationals),
            other => Err(format!("unknown ring `{other}` (expected Z or Q)")),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("cap {cap} exceeds the enumerated levels (max level {max_level})")]
    CapExceedsEnumeration { cap: usize, max_level: usize },
    #[error("cap {cap} is too small, need at least {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("boundary in degree {degree} has the wrong shape")]
    Shape { degree: usize },
    #[error("boundary composed with boundary is nonzero into degree {}", .degree - 2)]
    BoundarySquare { degree: usize },
    #[error("operator identity `{identity}` fails in degree {degree}")]
    OperatorIdentity { identity: &'static str, degree: usize },
    #[error("degree {degree} is beyond the validity bound ({})", fmt_validity(.validity))]
    OutOfRange { degree: usize, validity: Option<usize> },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

fn fmt_validity(v: &Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}
