//! Rendering/transmission duration planning for proactive tile-based VR
//! streaming.
//!
//! Each proactively streamed segment has to be rendered and then transmitted
//! within a fixed budget `T_cc` before its playback deadline. Letting either
//! task run longer than one segment duration pushes work into the next
//! segment and, repeated over the video, starves later segments. This crate
//! computes the best split of the budget when such overruns are forbidden,
//! classifies the resulting resource regimes, and replays the pipeline to
//! show what happens to plans that ignore the constraint.
//!
//! * [`model`]: video, rate, timing and plan values.
//! * [`optimizer`]: completion rate, closed-form optimum and a lattice oracle.
//! * [`region`]: regime classification and rate-grid sweeps.
//! * [`pipeline`]: segment-by-segment replay with stalls and latency.
//! * [`channel`]: zero-forcing Monte-Carlo transmission rate and computing rate.

pub mod channel;
pub mod error;
pub mod model;
pub mod optimizer;
pub mod pipeline;
pub mod region;

pub use error::{Error, Result};
pub use model::{DurationPlan, ResourceRates, Scheme, SqueezeOutcome, TimingParams, VideoParams};
pub use optimizer::{
    baseline_plan, completion_rate, grid_oracle, optimize_durations, t_c_max, unconstrained_optimum,
    Baseline, Bottleneck, CaseKind, Interval, OptimizationResult, SchemeSpec,
};
pub use pipeline::{simulate, DeliverySemantics, SegmentOutcome, SimConfig};
pub use region::{classify_region, efficient_condition, Region, RegionVerdict, SweepCell};
