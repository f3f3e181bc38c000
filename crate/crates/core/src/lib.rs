//! Exact-arithmetic invariants of checkerboard-colorable knots in thickened
//! surfaces: Gordon-Litherland forms, mock Seifert matrices, mock Alexander
//! polynomials, signature functions, and the unoriented algebraic concordance
//! group.
//!
//! The pipeline runs from signed Gauss codes (or band presentations) through
//! the canonical carrier surface to matrices and derived invariants. All
//! arithmetic is exact: integers, rationals, and Gaussian rationals on the
//! unit circle. No floating point anywhere.

pub mod carrier;
pub mod concord;
pub mod gauss;
pub mod glform;
pub mod invariants;
pub mod matalg;
pub mod parity;
pub mod poly;
pub mod realize;
pub mod report;

pub use invariants::{CirclePoint, SignatureFunction};
pub use matalg::MockSeifertMatrix;
pub use poly::LaurentPoly;
