//! Resource-configuration regimes and rate-grid sweeps.
//!
//! The regime depends only on how the total budget `T_cc` compares with the
//! segment duration `T_seg`:
//!
//! | region                    | condition                   | case            |
//! |---------------------------|-----------------------------|-----------------|
//! | minimum-resource-limited  | `T_cc > 2·T_seg`            | always case 1*  |
//! | unconditional tradeoff    | `T_cc <= T_seg`             | always case 2   |
//! | conditional tradeoff      | `T_seg < T_cc <= 2·T_seg`   | either          |
//!
//! \* except for exactly equal rates.

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ResourceRates, TimingParams, VideoParams};
use crate::optimizer::{classify_case, optimize_durations, CaseKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    MinimumResourceLimited,
    UnconditionalTradeoff,
    ConditionalTradeoff,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::MinimumResourceLimited => "minimum-resource-limited",
            Region::UnconditionalTradeoff => "unconditional-tradeoff",
            Region::ConditionalTradeoff => "conditional-tradeoff",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Resource {
    Communication,
    Computing,
}

impl Resource {
    pub fn label(&self) -> &'static str {
        match self {
            Resource::Communication => "communication",
            Resource::Computing => "computing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionVerdict {
    pub region: Region,
    pub case: CaseKind,
    pub efficient_condition_holds: bool,
    /// Set only in the resource-limited case with unequal rates.
    pub limiting_resource: Option<Resource>,
}

pub fn classify_region(timing: &TimingParams) -> Region {
    let (t_cc, t_seg) = (timing.t_cc(), timing.t_seg());
    if t_cc <= t_seg {
        Region::UnconditionalTradeoff
    } else if t_cc <= 2.0 * t_seg {
        Region::ConditionalTradeoff
    } else {
        Region::MinimumResourceLimited
    }
}

/// `max(C̃_com, C_cpt) / (C̃_com + C_cpt) <= T_seg / T_cc`.
pub fn efficient_condition(rates: &ResourceRates, timing: &TimingParams) -> Result<bool> {
    if rates.is_degenerate() {
        return Err(Error::DegenerateRates);
    }
    let share = rates.c_com_equiv().max(rates.c_cpt()) / rates.total();
    Ok(share <= timing.t_seg() / timing.t_cc())
}

pub fn verdict(rates: &ResourceRates, timing: &TimingParams) -> Result<RegionVerdict> {
    let case = classify_case(rates, timing)?;
    let (com, cpt) = (rates.c_com_equiv(), rates.c_cpt());
    let limiting_resource = match case {
        CaseKind::ResourceLimited if com < cpt => Some(Resource::Communication),
        CaseKind::ResourceLimited if com > cpt => Some(Resource::Computing),
        _ => None,
    };
    Ok(RegionVerdict {
        region: classify_region(timing),
        case,
        efficient_condition_holds: efficient_condition(rates, timing)?,
        limiting_resource,
    })
}

/// One grid point of a rate sweep. `verdict` is `None` when both rates are
/// zero; such cells carry zero durations and zero completion rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub c_com_equiv: f64,
    pub c_cpt: f64,
    pub region: Region,
    pub verdict: Option<RegionVerdict>,
    pub s_cc_star: f64,
    pub t_cpt_star: f64,
    pub t_com_star: f64,
}

fn sweep_cell(c_com_equiv: f64, c_cpt: f64, timing: &TimingParams, video: &VideoParams) -> Result<SweepCell> {
    let rates = ResourceRates::new(c_com_equiv, c_cpt)?;
    let region = classify_region(timing);
    if rates.is_degenerate() {
        return Ok(SweepCell {
            c_com_equiv,
            c_cpt,
            region,
            verdict: None,
            s_cc_star: 0.0,
            t_cpt_star: 0.0,
            t_com_star: 0.0,
        });
    }
    let verdict = verdict(&rates, timing)?;
    let opt = optimize_durations(&rates, timing, video)?;
    Ok(SweepCell {
        c_com_equiv,
        c_cpt,
        region,
        verdict: Some(verdict),
        s_cc_star: opt.s_cc_star,
        t_cpt_star: opt.plan.t_cpt,
        t_com_star: opt.plan.t_com,
    })
}

/// `steps` evenly spaced values from `min` to `max` inclusive; a single
/// step yields just `min`.
pub fn linear_axis(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 1 {
        return Err(Error::InvalidSweep("axis needs at least one step".into()));
    }
    if !(min.is_finite() && max.is_finite() && min >= 0.0 && max >= min) {
        return Err(Error::InvalidSweep(format!(
            "axis bounds must satisfy 0 <= min <= max, got [{min}, {max}]"
        )));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let span = max - min;
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| min + span * i as f64 / last).collect())
}

/// Cartesian sweep with separate axes, row-major: the transmission rate
/// varies slowest.
pub fn sweep_grid(
    com_axis: &[f64],
    cpt_axis: &[f64],
    timing: &TimingParams,
    video: &VideoParams,
) -> Result<Vec<SweepCell>> {
    for &x in com_axis.iter().chain(cpt_axis) {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::InvalidSweep(format!(
                "axis value {x} is not a finite rate >= 0"
            )));
        }
    }
    let pairs: Vec<(f64, f64)> = com_axis
        .iter()
        .flat_map(|&com| cpt_axis.iter().map(move |&cpt| (com, cpt)))
        .collect();
    #[cfg(feature = "parallel")]
    let iter = pairs.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = pairs.iter();
    iter.map(|&(com, cpt)| sweep_cell(com, cpt, timing, video))
        .collect()
}

/// Square sweep using the same axis for both rates.
pub fn sweep(rate_axis: &[f64], timing: &TimingParams, video: &VideoParams) -> Result<Vec<SweepCell>> {
    sweep_grid(rate_axis, rate_axis, timing, video)
}
