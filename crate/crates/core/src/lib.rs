//! Numerical realization of the generalized Hilbert operator
//! H_{μ,γ} between Dirichlet spaces D_α → D_β.
//!
//! * [`specfun`]: log-Gamma, Beta and the weights Γ(n+γ)/(n!Γ(γ)).
//! * [`measure`]: measures on [0,1), moments, tail masses and Carleson diagnostics.
//! * [`dirichlet`]: D_α norms, the diagonal isometries V_α, V_α^{-1} and the test family f_t.
//! * [`operator`]: finite sections of H_{μ,γ} and S_{μ,γ}, norm estimates, the
//!   Schur-kernel bound and the boundedness/compactness experiments.

pub mod dirichlet;
pub mod error;
pub mod measure;
pub mod operator;
pub mod quadrature;
pub mod specfun;

pub use dirichlet::{AlphaRange, CoeffSeq, SpaceParams};
pub use error::{Error, Result};
pub use measure::{CarlesonReport, CarlesonVerdict, MeasureSpec, MomentSequence};
pub use operator::{
    BoundednessReport, BoundednessVerdict, CompactnessReport, CompactnessVerdict, NormEstimate,
    PowerOptions, TruncatedOperator,
};
