//! Exact computations on the spaces `T_{d,n}` of stable rooted trees of
//! pointed projective spaces, viewed as a Chow quotient of `(ℙᵈ)ⁿ` by the
//! group of projectivities fixing a hyperplane pointwise.
//!
//! Modules, bottom-up:
//!
//! * [`exact`]: rationals, points, linear solving, polynomials in `t`.
//! * [`group`]: the group `G ≅ 𝔾ₘ ⋉ 𝔾ₐᵈ`, its action and canonical orbit forms.
//! * [`trees`]: stable rooted trees, validation and stratum combinatorics.
//! * [`contraction`]: component configurations `π_v` and the configuration cycle.
//! * [`chow`]: Künneth classes of orbit closures and cycles.
//! * [`degeneration`]: limits of one-parameter polynomial families.
//! * [`curves`]: the `d = 1` case: forgetful maps, cross-ratios, `(1,1,1)` forms.

pub mod chow;
pub mod contraction;
pub mod curves;
pub mod degeneration;
pub mod error;
pub mod exact;
pub mod group;
pub mod trees;

pub use error::{Error, Result};
pub use exact::{AffinePoint, HyperplaneDirection, ProjectivePoint, Rational, RationalPoly, Valuation};
pub use group::{ConfigPoint, Configuration, GroupElement};
pub use trees::{StableTree, StratumShape};
