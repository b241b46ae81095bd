//! Verification pipelines built on the solver: the gradient condition
//! `|grad v| <= mu v` over a sweep in `mu`, convergence of `-ln(v)/mu` to the
//! distance function, disc-average probes of that distance function, and the
//! fitted constant of the exponential upper bound on `v`.

pub mod condition;
pub mod probe;
pub mod prop21;
pub mod sweep;
pub mod varadhan;

pub use condition::{
    condition_margin, condition_margin_sampled, condition_margin_with, log_laplacian_indicator, pointwise_margin,
    Collocation, ConditionResult,
};
pub use probe::{corner_probes, probe_corners, random_probes, superharmonicity_probe, ProbeResult};
pub use prop21::{prop21_fit, Prop21Fit};
pub use sweep::{
    convexity_sweep, convexity_sweep_with, geometric_mu_list, ConvexityReport, SweepEntry, SweepOptions, TargetH,
    Verdict,
};
pub use varadhan::{varadhan_error, varadhan_error_with, varadhan_estimate, VaradhanResult};
