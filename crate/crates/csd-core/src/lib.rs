//! Exact computer algebra for rank-2 scattering diagrams.
//!
//! Everything is graded by the monoid N⁺ of nonzero lattice points with
//! non-negative coordinates and truncated at a total-degree cutoff, which
//! makes the Lie algebra nilpotent and every computation finite. On top of
//! the algebra sit the structure group (represented faithfully by its action
//! on a truncated monoid ring), dilogarithm elements and their pentagon
//! relation, a catalog of product identities between them, order-by-order
//! completion of scattering diagrams, and a verified rewriting engine for
//! dilogarithm factor lists. All coefficients are exact rationals; there is
//! no floating point anywhere.
//!
//! Typical entry points:
//! - [`Context`] fixes the cutoff and the skew form.
//! - [`GroupElement::dilog`] and [`ProductExpr`] build products of
//!   dilogarithm elements; [`GroupElement::compare`] decides equality with a
//!   located discrepancy on failure.
//! - [`catalog::verify`] checks a named identity instance.
//! - [`scattering::complete`] runs the consistency completion.
//! - [`rewrite::replay`] replays derivation scripts step by step.
//! - [`dsl::parse_product`] reads the text form of a product.

pub mod catalog;
pub mod dsl;
pub mod error;
pub mod group;
pub mod lattice;
pub mod lie;
pub mod product;
pub mod rat;
pub mod rewrite;
pub mod scattering;
mod series;

pub use catalog::{build, enumerate_random_instances, IdentityId, IdentityInstance, IdentityParams};
pub use dsl::{parse_product, parse_vector, print_product};
pub use error::Error;
pub use group::{bch_product, EqualityReport, GroupElement};
pub use lattice::{
    classify_product, cross, slope_cmp, slope_precedes, Context, LatticeVector, ProductClass,
    SkewForm, TruncationDegree,
};
pub use lie::{bracket, combine, dilog_series, LieSeries};
pub use product::{Direction, ExponentMap, Factor, Family, FamilyItem, ProductExpr, VectorMap};
pub use rat::Rat;
pub use rewrite::{
    apply_step, eval_factors, format_script, invert_script, parse_script, replay, scripted_lemma,
    untangle_script, RewriteStep, StepKind,
};
pub use scattering::{complete, ray_logs_of_product, ScatteringDiagram};
