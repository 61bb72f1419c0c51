//! Central tolerance profile.
//!
//! Every numerical threshold used by validation code is read from a
//! [`Tolerances`] value. The default profile is what the library uses
//! internally; callers may pass a stricter or looser profile.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Algebraic identities on small dense matrices (N <= 64).
    pub algebraic: f64,
    /// Results of iterative or accumulated computations.
    pub iterative: f64,
    /// Elementwise asymmetry accepted by `HermitianMatrix::new`.
    pub hermiticity: f64,
    /// Elementwise asymmetry accepted when parsing matrix files.
    pub parse_hermiticity: f64,
    /// Eigenvalues closer than this are treated as one degenerate cluster.
    pub cluster_gap: f64,
    /// Propagator unitarity.
    pub unitarity: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        algebraic: 1e-10,
        iterative: 1e-8,
        hermiticity: 1e-12,
        parse_hermiticity: 1e-9,
        cluster_gap: 1e-8,
        unitarity: 1e-9,
    };

    pub const STRICT: Tolerances = Tolerances {
        algebraic: 1e-11,
        iterative: 1e-11,
        ..Tolerances::DEFAULT
    };

    pub const LOOSE: Tolerances = Tolerances {
        algebraic: 1e-7,
        iterative: 1e-7,
        unitarity: 1e-7,
        ..Tolerances::DEFAULT
    };

    /// Looks up a profile by name (`strict`, `default`, `loose`).
    pub fn profile(name: &str) -> Option<Tolerances> {
        match name {
            "strict" => Some(Self::STRICT),
            "default" => Some(Self::DEFAULT),
            "loose" => Some(Self::LOOSE),
            _ => None,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
