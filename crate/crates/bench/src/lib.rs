//! Benchmark inputs shared by the criterion targets.

use sixvertex_core::RationalParameter;

/// Parameters used across benches: `0`, `1/3`, `3/5`.
pub fn parameters() -> Vec<RationalParameter> {
    ["0/1", "1/3", "3/5"].iter().map(|s| s.parse().expect("valid parameter")).collect()
}
