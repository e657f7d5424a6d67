//! Closed-form rendering/transmission duration optimum.
//!
//! The completion rate of a segment is
//! `min(C̃_com·t_com, C_cpt·t_cpt) / (s_fov·r_f·T_seg)`, maximised subject to
//! `t_cpt + t_com <= T_cc`, `t_cpt <= T_seg` and `t_com <= T_seg`. The last
//! two caps forbid one segment's tasks from eating into the next segment's
//! windows.
//!
//! Without the caps the optimum balances the two tasks, so that
//! `C̃_com·t_com = C_cpt·t_cpt`. The larger of those balanced durations,
//! `T_c^max`, decides whether the caps bind:
//!
//! * `T_c^max <= T_seg`: the balanced split is feasible and optimal.
//! * `T_c^max > T_seg`: the slower resource runs for the whole segment and
//!   the faster one only needs enough time to keep up. Any duration between
//!   that minimum and `min(T_cc - T_seg, T_seg)` is equally good.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DurationPlan, ResourceRates, Scheme, TimingParams, VideoParams};

/// Which branch of the closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseKind {
    /// `T_c^max > T_seg`: the slower resource alone limits the completion rate.
    ResourceLimited,
    /// `T_c^max <= T_seg`: either resource can be traded for the other.
    Tradeoff,
}

impl CaseKind {
    pub fn label(&self) -> &'static str {
        match self {
            CaseKind::ResourceLimited => "case1",
            CaseKind::Tradeoff => "case2",
        }
    }
}

/// The slower of the two resources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Bottleneck {
    Communication,
    Computing,
    Balanced,
}

impl Bottleneck {
    pub fn of(rates: &ResourceRates) -> Self {
        let (com, cpt) = (rates.c_com_equiv(), rates.c_cpt());
        if com < cpt {
            Bottleneck::Communication
        } else if com > cpt {
            Bottleneck::Computing
        } else {
            Bottleneck::Balanced
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Bottleneck::Communication => "communication",
            Bottleneck::Computing => "computing",
            Bottleneck::Balanced => "balanced",
        }
    }
}

/// Closed interval of optimal durations; `low == high` when unique.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Self { low: x, high: x }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.low <= x && x <= self.high
    }

    pub fn is_point(&self) -> bool {
        self.low == self.high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizationResult {
    /// Representative optimal plan; uses the lower end of any optimal interval.
    pub plan: DurationPlan,
    pub t_cpt_interval: Interval,
    pub t_com_interval: Interval,
    /// Completion rate of `plan`.
    pub s_cc_star: f64,
    pub case: CaseKind,
    pub bottleneck: Bottleneck,
    pub t_c_max: f64,
}

/// Fraction of a segment's predicted field-of-view bits that are both
/// rendered and delivered. Values above 1 mean spare capability.
pub fn completion_rate(plan: &DurationPlan, rates: &ResourceRates, video: &VideoParams) -> f64 {
    completion_rate_raw(plan.t_cpt, plan.t_com, rates, video)
}

pub(crate) fn completion_rate_raw(t_cpt: f64, t_com: f64, rates: &ResourceRates, video: &VideoParams) -> f64 {
    let delivered = (rates.c_com_equiv() * t_com).min(rates.c_cpt() * t_cpt);
    delivered / video.render_bits_per_segment()
}

/// Balanced split of the whole budget, ignoring the per-segment caps.
pub fn unconstrained_optimum(rates: &ResourceRates, timing: &TimingParams) -> Result<DurationPlan> {
    if rates.is_degenerate() {
        return Err(Error::DegenerateRates);
    }
    let total = rates.total();
    let t_cc = timing.t_cc();
    Ok(DurationPlan {
        t_cpt: rates.c_com_equiv() * t_cc / total,
        t_com: rates.c_cpt() * t_cc / total,
        scheme: Scheme::OptimalNoSp,
    })
}

/// `max(C̃_com, C_cpt)·T_cc / (C̃_com + C_cpt)`, the longer balanced duration.
pub fn t_c_max(rates: &ResourceRates, timing: &TimingParams) -> Result<f64> {
    if rates.is_degenerate() {
        return Err(Error::DegenerateRates);
    }
    Ok(rates.c_com_equiv().max(rates.c_cpt()) * timing.t_cc() / rates.total())
}

/// `T_c^max` equal to `T_seg` counts as the tradeoff case.
pub fn classify_case(rates: &ResourceRates, timing: &TimingParams) -> Result<CaseKind> {
    let t_max = t_c_max(rates, timing)?;
    Ok(if t_max > timing.t_seg() {
        CaseKind::ResourceLimited
    } else {
        CaseKind::Tradeoff
    })
}

/// Lowers `adjustable` by whole ulps until `fixed + adjustable <= t_cc`.
/// Only ever moves a rounding error's worth.
fn fit_budget(fixed: f64, mut adjustable: f64, t_cc: f64) -> f64 {
    while fixed + adjustable > t_cc && adjustable > 0.0 {
        adjustable = f64::from_bits(adjustable.to_bits() - 1);
    }
    adjustable
}

pub fn optimize_durations(
    rates: &ResourceRates,
    timing: &TimingParams,
    video: &VideoParams,
) -> Result<OptimizationResult> {
    let t_max = t_c_max(rates, timing)?;
    let (t_cc, t_seg) = (timing.t_cc(), timing.t_seg());
    let (com, cpt) = (rates.c_com_equiv(), rates.c_cpt());
    let case = if t_max > t_seg {
        CaseKind::ResourceLimited
    } else {
        CaseKind::Tradeoff
    };
    let bottleneck = Bottleneck::of(rates);

    let (t_cpt_interval, t_com_interval) = if com == 0.0 || cpt == 0.0 {
        // Nothing can complete; park the useless task at zero and give the
        // other one the longest feasible slot.
        let busy = t_cc.min(t_seg);
        let idle = Interval {
            low: 0.0,
            high: (t_cc - busy).min(t_seg),
        };
        if com == 0.0 {
            (Interval::point(busy), idle)
        } else {
            (idle, Interval::point(busy))
        }
    } else {
        match case {
            CaseKind::Tradeoff => {
                let t_cpt = com * t_cc / rates.total();
                let t_com = fit_budget(t_cpt, cpt * t_cc / rates.total(), t_cc);
                (Interval::point(t_cpt), Interval::point(t_com))
            }
            CaseKind::ResourceLimited => {
                let t_min = (t_cc - t_seg).min(t_seg);
                if com >= cpt {
                    let high = t_min;
                    let low = fit_budget(t_seg, (cpt * t_seg / com).min(high), t_cc);
                    (Interval::point(t_seg), Interval { low, high })
                } else {
                    let high = t_min;
                    let low = fit_budget(t_seg, (com * t_seg / cpt).min(high), t_cc);
                    (Interval { low, high }, Interval::point(t_seg))
                }
            }
        }
    };

    let plan = DurationPlan {
        t_cpt: t_cpt_interval.low,
        t_com: t_com_interval.low,
        scheme: Scheme::OptimalWithSp,
    };
    Ok(OptimizationResult {
        plan,
        t_cpt_interval,
        t_com_interval,
        s_cc_star: completion_rate(&plan, rates, video),
        case,
        bottleneck,
        t_c_max: t_max,
    })
}

/// Closed-form optimal completion rate, evaluated straight from the rates.
/// Agrees with [`OptimizationResult::s_cc_star`] up to rounding.
pub fn optimal_completion_rate(
    rates: &ResourceRates,
    timing: &TimingParams,
    video: &VideoParams,
) -> Result<f64> {
    let per_second = video.fov_bits() * video.frame_rate();
    let (com, cpt) = (rates.c_com_equiv(), rates.c_cpt());
    Ok(match classify_case(rates, timing)? {
        CaseKind::ResourceLimited => com.min(cpt) / per_second,
        CaseKind::Tradeoff => com * cpt * timing.t_cc() / (per_second * timing.t_seg() * rates.total()),
    })
}

/// Baseline plans that ignore the per-segment caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    OptimalNoSp,
    EqualSplit,
}

pub fn baseline_plan(kind: Baseline, rates: &ResourceRates, timing: &TimingParams) -> Result<DurationPlan> {
    match kind {
        Baseline::OptimalNoSp => unconstrained_optimum(rates, timing),
        Baseline::EqualSplit => {
            let half = timing.t_cc() / 2.0;
            Ok(DurationPlan {
                t_cpt: half,
                t_com: half,
                scheme: Scheme::EqualSplit,
            })
        }
    }
}

/// A scheme as named on the command line or in a scenario file:
/// `optimal`, `opt-no-sp`, `equal-split` or `fixed:<t_cpt>:<t_com>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeSpec {
    Optimal,
    OptNoSp,
    EqualSplit,
    Fixed { t_cpt: f64, t_com: f64 },
}

pub const SCHEME_IDENTIFIERS: &[&str] = &["optimal", "opt-no-sp", "equal-split", "fixed:<t_cpt>:<t_com>"];

impl SchemeSpec {
    pub fn plan(
        &self,
        rates: &ResourceRates,
        timing: &TimingParams,
        video: &VideoParams,
    ) -> Result<DurationPlan> {
        match *self {
            SchemeSpec::Optimal => Ok(optimize_durations(rates, timing, video)?.plan),
            SchemeSpec::OptNoSp => baseline_plan(Baseline::OptimalNoSp, rates, timing),
            SchemeSpec::EqualSplit => baseline_plan(Baseline::EqualSplit, rates, timing),
            SchemeSpec::Fixed { t_cpt, t_com } => DurationPlan::fixed(t_cpt, t_com),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeSpec::Optimal => f.write_str("optimal"),
            SchemeSpec::OptNoSp => f.write_str("opt-no-sp"),
            SchemeSpec::EqualSplit => f.write_str("equal-split"),
            SchemeSpec::Fixed { t_cpt, t_com } => write!(f, "fixed:{t_cpt}:{t_com}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownScheme(pub String);

impl fmt::Display for UnknownScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown scheme `{}`; valid identifiers: {}",
            self.0,
            SCHEME_IDENTIFIERS.join(", ")
        )
    }
}

impl std::error::Error for UnknownScheme {}

impl FromStr for SchemeSpec {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "optimal" => Ok(SchemeSpec::Optimal),
            "opt-no-sp" => Ok(SchemeSpec::OptNoSp),
            "equal-split" => Ok(SchemeSpec::EqualSplit),
            other => {
                let mut parts = other.split(':');
                match (parts.next(), parts.next(), parts.next(), parts.next()) {
                    (Some("fixed"), Some(a), Some(b), None) => {
                        let t_cpt: f64 = a.parse().map_err(|_| UnknownScheme(s.into()))?;
                        let t_com: f64 = b.parse().map_err(|_| UnknownScheme(s.into()))?;
                        if t_cpt.is_finite() && t_com.is_finite() && t_cpt >= 0.0 && t_com >= 0.0 {
                            Ok(SchemeSpec::Fixed { t_cpt, t_com })
                        } else {
                            Err(UnknownScheme(s.into()))
                        }
                    }
                    _ => Err(UnknownScheme(s.into())),
                }
            }
        }
    }
}

/// Brute-force maximiser of the completion rate over a duration lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub plan: DurationPlan,
    pub s_cc: f64,
}

/// Largest `j` with `j·step <= bound` (computed in floating point).
fn last_lattice_index(bound: f64, step: f64) -> u64 {
    let mut j = (bound / step).floor().max(0.0) as u64;
    while ((j + 1) as f64) * step <= bound {
        j += 1;
    }
    while j > 0 && (j as f64) * step > bound {
        j -= 1;
    }
    j
}

/// Maximises the completion rate over `{(i·step, j·step)}` restricted to the
/// budget and both per-segment caps. Ties go to the smallest `t_cpt`, then the
/// smallest `t_com`.
///
/// The objective never decreases in `t_com`, so for each `t_cpt` only the
/// longest feasible `t_com` can hold the row maximum; the smallest tying
/// `t_com` is then found by bisection. The result is the same as evaluating
/// every lattice point.
pub fn grid_oracle(
    rates: &ResourceRates,
    timing: &TimingParams,
    video: &VideoParams,
    step: f64,
) -> Result<OracleResult> {
    let (t_cc, t_seg) = (timing.t_cc(), timing.t_seg());
    let limit = t_cc.min(t_seg);
    if !(step.is_finite() && step > 0.0 && step <= limit) {
        return Err(Error::InvalidStep { step, limit });
    }
    let eval = |i: u64, j: u64| completion_rate_raw(i as f64 * step, j as f64 * step, rates, video);
    let row_cap = |i: u64| {
        let t_cpt = i as f64 * step;
        let mut j = last_lattice_index(t_seg.min(t_cc - t_cpt), step);
        while j > 0 && t_cpt + j as f64 * step > t_cc {
            j -= 1;
        }
        j
    };

    let i_max = last_lattice_index(limit, step);
    let mut best = (0u64, f64::NEG_INFINITY);
    for i in 0..=i_max {
        let s = eval(i, row_cap(i));
        if s > best.1 {
            best = (i, s);
        }
    }

    let (i, s_best) = best;
    let (mut lo, mut hi) = (0u64, row_cap(i));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if eval(i, mid) >= s_best {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(OracleResult {
        plan: DurationPlan {
            t_cpt: i as f64 * step,
            t_com: lo as f64 * step,
            scheme: Scheme::Fixed,
        },
        s_cc: s_best,
    })
}

/// Maximum error of the lattice optimum: the objective moves by at most
/// `max(rate)·step / (s_fov·r_f·T_seg)` per lattice step.
pub fn oracle_tolerance(rates: &ResourceRates, video: &VideoParams, step: f64) -> f64 {
    rates.c_com_equiv().max(rates.c_cpt()) * step / video.render_bits_per_segment()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const MBPS: f64 = 1e6;

    fn video() -> VideoParams {
        VideoParams::reference_4k()
    }

    fn rates(com_mbps: f64, cpt_mbps: f64) -> ResourceRates {
        ResourceRates::new(com_mbps * MBPS, cpt_mbps * MBPS).unwrap()
    }

    fn timing(t_cc: f64) -> TimingParams {
        TimingParams::single(t_cc, 1.0).unwrap()
    }

    /// Evaluates every lattice point; only usable for coarse steps.
    fn exhaustive_oracle(r: &ResourceRates, t: &TimingParams, step: f64) -> (f64, f64, f64) {
        let n = ((t.t_cc().max(t.t_seg()) / step).ceil() as u64) + 1;
        let mut best = (0.0, 0.0, f64::NEG_INFINITY);
        for i in 0..=n {
            for j in 0..=n {
                let (a, b) = (i as f64 * step, j as f64 * step);
                if a + b <= t.t_cc() && a <= t.t_seg() && b <= t.t_seg() {
                    let s = completion_rate_raw(a, b, r, &video());
                    if s > best.2 {
                        best = (a, b, s);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn completion_rate_examples() {
        let r = rates(900.0, 400.0);
        let zero = DurationPlan::fixed(0.0, 0.0).unwrap();
        assert_eq!(completion_rate(&zero, &r, &video()), 0.0);
        let p = DurationPlan::fixed(0.623077, 0.276923).unwrap();
        assert_abs_diff_eq!(completion_rate(&p, &r, &video()), 0.41733, epsilon = 1e-5);
        let p = DurationPlan::fixed(1.038462, 0.461538).unwrap();
        assert_abs_diff_eq!(completion_rate(&p, &r, &video()), 0.69556, epsilon = 1e-5);
    }

    #[test]
    fn unconstrained_examples() {
        let p = unconstrained_optimum(&rates(900.0, 400.0), &timing(1.5)).unwrap();
        assert_abs_diff_eq!(p.t_cpt, 1.038462, epsilon = 1e-6);
        assert_abs_diff_eq!(p.t_com, 0.461538, epsilon = 1e-6);
        let p = unconstrained_optimum(&rates(500.0, 500.0), &timing(2.0)).unwrap();
        assert_eq!((p.t_cpt, p.t_com), (1.0, 1.0));
        let p = unconstrained_optimum(&rates(900.0, 400.0), &timing(0.9)).unwrap();
        assert_abs_diff_eq!(p.t_cpt, 0.623077, epsilon = 1e-6);
        assert_abs_diff_eq!(p.t_com, 0.276923, epsilon = 1e-6);
        assert_eq!(
            unconstrained_optimum(&rates(0.0, 0.0), &timing(1.0)),
            Err(Error::DegenerateRates)
        );
    }

    #[test]
    fn t_c_max_examples() {
        assert_abs_diff_eq!(
            t_c_max(&rates(900.0, 400.0), &timing(1.5)).unwrap(),
            1.038462,
            epsilon = 1e-6
        );
        assert_eq!(t_c_max(&rates(300.0, 300.0), &timing(1.7)).unwrap(), 0.85);
        assert_abs_diff_eq!(
            t_c_max(&rates(900.0, 400.0), &timing(2.1)).unwrap(),
            1.453846,
            epsilon = 1e-6
        );
        assert_eq!(
            t_c_max(&rates(0.0, 0.0), &timing(1.0)),
            Err(Error::DegenerateRates)
        );
    }

    #[test]
    fn optimum_case2_at_0_9() {
        let res = optimize_durations(&rates(900.0, 400.0), &timing(0.9), &video()).unwrap();
        assert_eq!(res.case, CaseKind::Tradeoff);
        assert_abs_diff_eq!(res.plan.t_cpt, 0.623077, epsilon = 1e-6);
        assert_abs_diff_eq!(res.plan.t_com, 0.276923, epsilon = 1e-6);
        assert_abs_diff_eq!(res.s_cc_star, 0.41733, epsilon = 1e-5);
        assert!(res.t_cpt_interval.is_point() && res.t_com_interval.is_point());
        assert_eq!(res.bottleneck, Bottleneck::Computing);
    }

    #[test]
    fn optimum_case1_at_1_5() {
        let res = optimize_durations(&rates(900.0, 400.0), &timing(1.5), &video()).unwrap();
        assert_eq!(res.case, CaseKind::ResourceLimited);
        assert_eq!(res.plan.t_cpt, 1.0);
        assert_abs_diff_eq!(res.t_com_interval.low, 0.444444, epsilon = 1e-6);
        assert_abs_diff_eq!(res.t_com_interval.high, 0.5, epsilon = 1e-12);
        assert_eq!(res.plan.t_com, res.t_com_interval.low);
        assert_abs_diff_eq!(res.s_cc_star, 0.66980, epsilon = 1e-5);
    }

    #[test]
    fn optimum_case1_at_2_1() {
        let res = optimize_durations(&rates(900.0, 400.0), &timing(2.1), &video()).unwrap();
        assert_eq!(res.case, CaseKind::ResourceLimited);
        assert_eq!(res.plan.t_cpt, 1.0);
        assert_abs_diff_eq!(res.t_com_interval.low, 0.444444, epsilon = 1e-6);
        assert_eq!(res.t_com_interval.high, 1.0);
        assert_abs_diff_eq!(res.s_cc_star, 0.66980, epsilon = 1e-5);
    }

    #[test]
    fn communication_bottleneck_mirrors() {
        let res = optimize_durations(&rates(400.0, 900.0), &timing(1.5), &video()).unwrap();
        assert_eq!(res.bottleneck, Bottleneck::Communication);
        assert_eq!(res.plan.t_com, 1.0);
        assert_abs_diff_eq!(res.t_cpt_interval.low, 4.0 / 9.0, epsilon = 1e-12);
        assert_abs_diff_eq!(res.t_cpt_interval.high, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(res.s_cc_star, 400e6 / (19_906_560.0 * 30.0), epsilon = 1e-12);
    }

    #[test]
    fn symmetric_rates_at_region_boundary() {
        let res = optimize_durations(&rates(500.0, 500.0), &timing(2.0), &video()).unwrap();
        assert_eq!(res.case, CaseKind::Tradeoff);
        assert_eq!((res.plan.t_cpt, res.plan.t_com), (1.0, 1.0));
        assert_eq!(res.bottleneck, Bottleneck::Balanced);
    }

    #[test]
    fn one_zero_rate_gives_zero() {
        let res = optimize_durations(&rates(0.0, 400.0), &timing(1.5), &video()).unwrap();
        assert_eq!(res.s_cc_star, 0.0);
        assert_eq!(res.plan.t_com, 0.0);
        assert_eq!(res.plan.t_cpt, 1.0);
        assert_eq!(res.bottleneck, Bottleneck::Communication);

        let res = optimize_durations(&rates(400.0, 0.0), &timing(0.7), &video()).unwrap();
        assert_eq!(res.plan.t_cpt, 0.0);
        assert_eq!(res.plan.t_com, 0.7);
        assert_eq!(res.t_cpt_interval, Interval { low: 0.0, high: 0.0 });
        assert_eq!(res.bottleneck, Bottleneck::Computing);
    }

    #[test]
    fn degenerate_rates_error() {
        assert_eq!(
            optimize_durations(&rates(0.0, 0.0), &timing(1.0), &video()),
            Err(Error::DegenerateRates)
        );
    }

    #[test]
    fn baselines() {
        let r = rates(900.0, 400.0);
        let p = baseline_plan(Baseline::EqualSplit, &r, &timing(0.9)).unwrap();
        assert_eq!((p.t_cpt, p.t_com), (0.45, 0.45));
        let p = baseline_plan(Baseline::EqualSplit, &r, &timing(2.1)).unwrap();
        assert_eq!((p.t_cpt, p.t_com), (1.05, 1.05));
        let p = baseline_plan(Baseline::OptimalNoSp, &r, &timing(2.1)).unwrap();
        assert_abs_diff_eq!(p.t_cpt, 1.453846, epsilon = 1e-6);
        assert_abs_diff_eq!(p.t_com, 0.646154, epsilon = 1e-6);
        assert_eq!(
            baseline_plan(Baseline::OptimalNoSp, &rates(0.0, 0.0), &timing(1.0)),
            Err(Error::DegenerateRates)
        );
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("optimal".parse::<SchemeSpec>().unwrap(), SchemeSpec::Optimal);
        assert_eq!("opt-no-sp".parse::<SchemeSpec>().unwrap(), SchemeSpec::OptNoSp);
        assert_eq!(
            "fixed:1.0:0.5".parse::<SchemeSpec>().unwrap(),
            SchemeSpec::Fixed {
                t_cpt: 1.0,
                t_com: 0.5
            }
        );
        let err = "greedy".parse::<SchemeSpec>().unwrap_err();
        assert!(err.to_string().contains("equal-split"));
        assert!("fixed:1".parse::<SchemeSpec>().is_err());
        assert!("fixed:-1:2".parse::<SchemeSpec>().is_err());
    }

    #[test]
    fn oracle_at_0_9() {
        let r = rates(900.0, 400.0);
        let o = grid_oracle(&r, &timing(0.9), &video(), 1e-4).unwrap();
        assert!(o.s_cc >= 0.41716 && o.s_cc <= 0.41733 + 1e-9, "{}", o.s_cc);
    }

    #[test]
    fn oracle_zero_rates() {
        let o = grid_oracle(&rates(0.0, 0.0), &timing(1.2), &video(), 0.01).unwrap();
        assert_eq!(o.s_cc, 0.0);
        assert_eq!((o.plan.t_cpt, o.plan.t_com), (0.0, 0.0));
    }

    #[test]
    fn oracle_step_validation() {
        let r = rates(900.0, 400.0);
        assert!(matches!(
            grid_oracle(&r, &timing(0.9), &video(), 0.95),
            Err(Error::InvalidStep { .. })
        ));
        assert!(matches!(
            grid_oracle(&r, &timing(0.9), &video(), 0.0),
            Err(Error::InvalidStep { .. })
        ));
        assert!(grid_oracle(&r, &timing(0.9), &video(), 0.9).is_ok());
    }

    #[test]
    fn reduced_oracle_matches_full_enumeration() {
        for (com, cpt, t_cc) in [
            (900.0, 400.0, 0.9),
            (900.0, 400.0, 1.5),
            (400.0, 900.0, 2.1),
            (500.0, 500.0, 1.3),
            (30.0, 9000.0, 0.4),
            (0.0, 100.0, 1.0),
        ] {
            let r = rates(com, cpt);
            let t = timing(t_cc);
            let step = 0.01;
            let fast = grid_oracle(&r, &t, &video(), step).unwrap();
            let (a, b, s) = exhaustive_oracle(&r, &t, step);
            assert_eq!(fast.s_cc, s, "({com}, {cpt}, {t_cc})");
            assert_abs_diff_eq!(fast.plan.t_cpt, a, epsilon = 1e-12);
            assert_abs_diff_eq!(fast.plan.t_com, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn closed_form_value_matches_plan_value() {
        for t_cc in [0.3, 0.9, 1.2, 1.5, 2.0, 2.1, 3.0] {
            let r = rates(900.0, 400.0);
            let t = timing(t_cc);
            let res = optimize_durations(&r, &t, &video()).unwrap();
            let formula = optimal_completion_rate(&r, &t, &video()).unwrap();
            assert_abs_diff_eq!(res.s_cc_star, formula, epsilon = 1e-12 * formula.max(1.0));
        }
    }

    mod props {
        use super::*;
        use crate::pipeline::squeeze_of_plan;
        use proptest::prelude::*;

        fn rate() -> impl Strategy<Value = f64> {
            (6.0f64..10.0).prop_map(|e| 10f64.powf(e))
        }

        fn feasible(res: &OptimizationResult, t: &TimingParams) -> bool {
            res.plan.t_cpt + res.plan.t_com <= t.t_cc()
                && res.plan.t_cpt <= t.t_seg()
                && res.plan.t_com <= t.t_seg()
        }

        proptest! {
            #[test]
            fn plan_feasible_and_consistent(com in rate(), cpt in rate(), t_seg in 0.2f64..3.0, k in 0.01f64..3.5) {
                let v = VideoParams::new(3840, 2160, 12, 0.2, 30.0, 2.41, t_seg).unwrap();
                let t = TimingParams::single(k * t_seg, t_seg).unwrap();
                let r = ResourceRates::new(com, cpt).unwrap();
                let res = optimize_durations(&r, &t, &v).unwrap();
                prop_assert!(feasible(&res, &t));
                prop_assert_eq!(res.s_cc_star, completion_rate(&res.plan, &r, &v));
                prop_assert!(res.t_cpt_interval.low <= res.t_cpt_interval.high);
                prop_assert!(res.t_com_interval.low <= res.t_com_interval.high);
                prop_assert!(res.t_cpt_interval.contains(res.plan.t_cpt));
                prop_assert!(res.t_com_interval.contains(res.plan.t_com));
                prop_assert!(squeeze_of_plan(&res.plan, t_seg).is_zero());
                let formula = optimal_completion_rate(&r, &t, &v).unwrap();
                prop_assert!((res.s_cc_star - formula).abs() <= 1e-12 * formula);
            }

            #[test]
            fn beats_grid_oracle(com in rate(), cpt in rate(), k in 0.05f64..3.0) {
                let v = video();
                let t = timing(k);
                let r = ResourceRates::new(com, cpt).unwrap();
                let step = 1e-3;
                let res = optimize_durations(&r, &t, &v).unwrap();
                let o = grid_oracle(&r, &t, &v, step).unwrap();
                prop_assert!(res.s_cc_star >= o.s_cc - oracle_tolerance(&r, &v, step));
                // The lattice never beats the continuum optimum by more than rounding.
                prop_assert!(o.s_cc <= res.s_cc_star * (1.0 + 1e-12));
            }

            #[test]
            fn t_c_max_sandwich(com in rate(), cpt in rate(), t_cc in 0.01f64..5.0) {
                let t = TimingParams::single(t_cc, 1.0).unwrap();
                let r = ResourceRates::new(com, cpt).unwrap();
                let m = t_c_max(&r, &t).unwrap();
                prop_assert!(m >= t_cc / 2.0);
                prop_assert!(m < t_cc || com.max(cpt) / r.total() == 1.0);
                let o = unconstrained_optimum(&r, &t).unwrap();
                prop_assert_eq!(m, o.t_cpt.max(o.t_com));
            }

            #[test]
            fn case2_strictly_increasing(com in rate(), cpt in rate(), bump in 1.0001f64..1.5, k in 0.05f64..1.0) {
                let v = video();
                let t = timing(k);
                let r = ResourceRates::new(com, cpt).unwrap();
                let base = optimize_durations(&r, &t, &v).unwrap();
                for up in [ResourceRates::new(com * bump, cpt).unwrap(), ResourceRates::new(com, cpt * bump).unwrap()] {
                    let res = optimize_durations(&up, &t, &v).unwrap();
                    if res.case == CaseKind::Tradeoff {
                        prop_assert!(res.s_cc_star > base.s_cc_star);
                    }
                }
            }

            #[test]
            fn case1_ignores_faster_resource(slow in rate(), ratio in 1.5f64..20.0, bump in 1.0f64..5.0, k in 1.6f64..3.0) {
                let v = video();
                let t = timing(k);
                let r = ResourceRates::new(slow * ratio, slow).unwrap();
                let res = optimize_durations(&r, &t, &v).unwrap();
                prop_assume!(res.case == CaseKind::ResourceLimited);
                let faster = ResourceRates::new(slow * ratio * bump, slow).unwrap();
                let res2 = optimize_durations(&faster, &t, &v).unwrap();
                prop_assert_eq!(res2.case, CaseKind::ResourceLimited);
                prop_assert!((res2.s_cc_star - res.s_cc_star).abs() <= 1e-12 * res.s_cc_star);
            }

            #[test]
            fn interval_points_are_all_optimal(com in rate(), cpt in rate(), k in 1.0f64..3.0, frac in 0.0f64..=1.0) {
                let v = video();
                let t = timing(k);
                let r = ResourceRates::new(com, cpt).unwrap();
                let res = optimize_durations(&r, &t, &v).unwrap();
                prop_assume!(res.case == CaseKind::ResourceLimited);
                let (iv, fixed_cpt) = if res.t_com_interval.is_point() {
                    (res.t_cpt_interval, false)
                } else {
                    (res.t_com_interval, true)
                };
                let x = iv.low + frac * (iv.high - iv.low);
                let s = if fixed_cpt {
                    completion_rate_raw(t.t_seg(), x, &r, &v)
                } else {
                    completion_rate_raw(x, t.t_seg(), &r, &v)
                };
                prop_assert!((s - res.s_cc_star).abs() <= 1e-12 * res.s_cc_star);
            }
        }

        #[test]
        fn branches_agree_at_boundary() {
            // com = 2·cpt and T_cc = 1.5 give T_c^max = T_seg exactly.
            let v = video();
            let t = timing(1.5);
            let r = ResourceRates::new(800e6, 400e6).unwrap();
            assert_eq!(t_c_max(&r, &t).unwrap(), 1.0);
            let res = optimize_durations(&r, &t, &v).unwrap();
            assert_eq!(res.case, CaseKind::Tradeoff);
            let case1 = r.c_com_equiv().min(r.c_cpt()) / (v.fov_bits() * v.frame_rate());
            assert!((res.s_cc_star - case1).abs() <= 1e-12 * case1);
        }
    }
}
