//! Exact arithmetic for weighted projective spaces over the rationals.
//!
//! The crate computes weighted greatest common divisors, normalizations
//! over Q and over the algebraic closure, sign twists, exact weighted
//! heights, bounded-height point enumeration, and bounded twist
//! enumeration, together with a small line-delimited database workflow
//! for curve-moduli points.
//!
//! Modules:
//! - [`tuple`]: weights, weighted integer tuples, the star action, and
//!   valuation utilities.
//! - [`normal`]: weighted and absolute weighted GCDs, normalization,
//!   sign-twist structure, canonical forms, and equivalence tests.
//! - [`height`]: exact heights `base^{1/root}`, comparison, bounded
//!   enumeration, and twist enumeration.
//! - [`moduli`]: weight presets for genus 2 and genus 3 hyperelliptic
//!   moduli points.
//! - [`db`]: ingestion, dedup, height-sorted export, and twist grouping
//!   of labeled point collections.
//!
//! All values are immutable after construction and all operations are
//! pure; everything is safe to share across threads. With the default
//! `parallel` feature, enumeration and batch ingestion fan out over
//! rayon without changing output order.

pub mod db;
pub mod error;
mod factor;
pub mod height;
pub mod moduli;
pub mod normal;
pub mod tuple;

pub use error::{Error, Result};
pub use height::{
    abs_height, cmp_height, enumerate_bounded, enumerate_bounded_seq, height, twists_up_to,
    HeightBound, HeightValue,
};
pub use normal::{
    abs_wgcd, canonical, is_twist, normalize, normalize_abs, same_point, sign_twist, wgcd,
    FactoredRadical, Mode, NormalizedPoint, Removed, SignClass,
};
pub use tuple::{star, star_radical, valuation, RadicalScalar, Support, WeightedTuple, Weights};
