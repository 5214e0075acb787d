//! Fixtures shared by the criterion benches.

use genhilbert::{MeasureSpec, SpaceParams};

/// The (α, β, γ) = (1, 2, 2) configuration used throughout the dichotomy runs.
pub fn reference_params() -> SpaceParams {
    SpaceParams::new(1.0, 2.0, 2.0).expect("valid parameters")
}

/// (1−t)^{c−1} dt at the Carleson boundary c = s.
pub fn boundary_measure(params: &SpaceParams) -> MeasureSpec {
    MeasureSpec::power_density(params.s)
}
