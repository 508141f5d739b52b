//! Exact arithmetic for eutactic stars on integral positive definite lattices.
//!
//! A eutactic star on a lattice `L` is a family of nonzero dual vectors `s_j`
//! with `Σ_j (s_j, x)² = (x, x)` for all `x ∈ L`. This crate checks that
//! identity, certifies extremality by exactly minimizing `Σ_j B((s_j, x))`,
//! expands the associated theta blocks as truncated Fourier series, builds the
//! stars attached to root systems, recognizes root systems among vector
//! families, and exhaustively enumerates stars on small lattices.
//!
//! Everything is exact: scalars are arbitrary-precision rationals and no
//! floating point is used on any verdict path.

pub mod error;
pub mod extremal;
pub mod lattice;
pub mod linalg;
pub mod qseries;
pub mod rational;
pub mod rootsys;
pub mod search;
pub mod star;

pub use error::{Error, Result};
pub use extremal::{
    b_eval, certify_extremal, deficiency, min_deficiency, DeficiencyMinimum, ExtremalityCertificate,
};
pub use lattice::{Lattice, QVector};
pub use qseries::{
    check_antisymmetry, check_holomorphic, check_singular_support, eta_power, heat_apply, multiply,
    reflect_series, theta_block, theta_factor, FourierSeries, HeatImage, DEFAULT_ORDER,
};
pub use rational::Rational;
pub use rootsys::{
    build_p_lattice, build_star, cartan_matrix, catalog, recognize, CartanType, Recognition,
    RootSystemDescriptor,
};
pub use search::{enumerate_stars, verify_theorem, SearchOptions, TheoremReport};
pub use star::{EutacticStar, SupportSet};
