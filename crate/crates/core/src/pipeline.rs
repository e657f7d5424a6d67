//! Replay of proactive streaming as a render queue feeding a transmit queue.
//!
//! The timeline is anchored at the start of the first proactive segment. The
//! prediction for segment offset `n` becomes available at `n·T_seg`, and the
//! segment must be delivered by `T_cc + n·T_seg`. Each segment is rendered for
//! `t_cpt` and then transmitted for `t_com`; each queue serves one segment at
//! a time in order. Deadlines never move, even after a stall.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DurationPlan, ResourceRates, SqueezeOutcome, TimingParams, VideoParams};
use crate::optimizer::completion_rate;

/// Slack allowed when comparing a finish time with its deadline. Finish
/// times accumulate one addition per segment, so a plan that exactly fills
/// its budget can otherwise miss by a few ulps.
pub const DEADLINE_TOLERANCE: f64 = 1e-9;

/// How a segment that misses its deadline is credited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeliverySemantics {
    /// A late segment delivers nothing and stalls playback.
    #[default]
    AllOrNothing,
    /// Work finished before the deadline still counts.
    Truncate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub plan: DurationPlan,
    pub rates: ResourceRates,
    pub video: VideoParams,
    pub timing: TimingParams,
    pub delivery_semantics: DeliverySemantics,
    /// Number of proactive segments to replay.
    pub horizon: u32,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.timing.check_matches(&self.video)?;
        if self.horizon == 0 {
            return Err(Error::InvalidParameter {
                name: "horizon",
                reason: "must be >= 1".into(),
            });
        }
        let available = self.timing.proactive_segments();
        if self.horizon > available {
            return Err(Error::InvalidParameter {
                name: "horizon",
                reason: format!("exceeds the {available} proactively streamed segments"),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentOutcome {
    pub segment_offset: u32,
    pub render_start: f64,
    pub render_finish: f64,
    pub tx_start: f64,
    pub tx_finish: f64,
    pub deadline: f64,
    /// `tx_finish - deadline`; negative when early.
    pub lateness: f64,
    pub s_cc: f64,
    pub stalled: bool,
    pub mtp_latency: f64,
}

/// Overrun of one segment's rendering (`Δp`) and transmission (`Δm`) into the
/// next segment's windows.
pub fn squeeze_of_plan(plan: &DurationPlan, t_seg: f64) -> SqueezeOutcome {
    let delta_p = plan.t_cpt - t_seg;
    let delta_m = plan.t_com - plan.t_cpt - (-delta_p).max(0.0);
    SqueezeOutcome::new(delta_p, delta_m)
}

/// Budget left for the tasks of segment offset `n` after `n` segments of
/// squeeze. Negative when nothing can fit.
pub fn remaining_budget(timing: &TimingParams, squeeze: &SqueezeOutcome, n: u32) -> f64 {
    timing.t_cc() - f64::from(n) * squeeze.per_segment_squeeze
}

/// `[t_com + t_cpt - (n - 1)·squeeze]⁺` for the `n`-th proactive segment,
/// counting from 1.
pub fn mtp_latency(plan: &DurationPlan, squeeze: &SqueezeOutcome, n: u32) -> f64 {
    debug_assert!(n >= 1, "segment index counts from 1");
    let n = f64::from(n.max(1));
    (plan.t_com + plan.t_cpt - (n - 1.0) * squeeze.per_segment_squeeze).max(0.0)
}

pub fn simulate(config: &SimConfig) -> Result<Vec<SegmentOutcome>> {
    config.validate()?;
    let SimConfig {
        plan,
        rates,
        video,
        timing,
        delivery_semantics,
        horizon,
    } = *config;
    let t_seg = timing.t_seg();
    let squeeze = squeeze_of_plan(&plan, t_seg);
    let on_time_rate = completion_rate(&plan, &rates, &video);
    let render_bits = video.render_bits_per_segment();

    let mut outcomes = Vec::with_capacity(horizon as usize);
    let mut prev_render_finish = f64::NEG_INFINITY;
    let mut prev_tx_finish = f64::NEG_INFINITY;
    for n in 0..horizon {
        let released = f64::from(n) * t_seg;
        let render_start = released.max(prev_render_finish);
        let render_finish = render_start + plan.t_cpt;
        let tx_start = render_finish.max(prev_tx_finish);
        let tx_finish = tx_start + plan.t_com;
        let deadline = timing.t_cc() + released;

        let s_cc = match delivery_semantics {
            DeliverySemantics::AllOrNothing => {
                if tx_finish <= deadline + DEADLINE_TOLERANCE {
                    on_time_rate
                } else {
                    0.0
                }
            }
            DeliverySemantics::Truncate => {
                let render_eff = (render_finish.min(deadline) - render_start).max(0.0);
                let tx_eff = (tx_finish.min(deadline) - tx_start).max(0.0);
                (rates.c_com_equiv() * tx_eff).min(rates.c_cpt() * render_eff) / render_bits
            }
        };
        let stalled = match delivery_semantics {
            DeliverySemantics::AllOrNothing => tx_finish > deadline + DEADLINE_TOLERANCE,
            DeliverySemantics::Truncate => s_cc == 0.0,
        };

        outcomes.push(SegmentOutcome {
            segment_offset: n,
            render_start,
            render_finish,
            tx_start,
            tx_finish,
            deadline,
            lateness: tx_finish - deadline,
            s_cc,
            stalled,
            mtp_latency: mtp_latency(&plan, &squeeze, n + 1),
        });
        prev_render_finish = render_finish;
        prev_tx_finish = tx_finish;
    }
    Ok(outcomes)
}
