//! Approximate dictionary search.
//!
//! A lexicon is indexed as a pair of compact word graphs (one per reading
//! direction) sharing a state bijection. Queries are split into `b + 1`
//! pieces, at least one of which must occur exactly; exact hits are then
//! grown left and right under directional distance filters.

pub mod baselines;
pub mod bench;
pub mod distance;
pub mod scdawg;
pub mod search;
mod symbol;

pub use symbol::{render, symbols, Symbol};
