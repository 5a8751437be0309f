//! Weighted edit operations, the distance they induce, and incremental
//! filters that decide whether a partially read candidate can still match.

mod align;
mod dp;
mod filter;
mod ops;

pub use align::{align, distance, split_alignment, Alignment, Distance, Unreachable};
pub use filter::{filter_distance, filter_start, filter_step, FilterStack, FilterState};
pub use ops::{
    parse_operations, preset_operations, reverse_operations, OpClass, Operation, OperationSet, OpsError, MAX_SIDE,
    MAX_WEIGHT, PRESETS,
};
