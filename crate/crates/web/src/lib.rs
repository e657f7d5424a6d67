//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string. Failures come
//! back as `{"error": "..."}` so the page can show them inline.

use serde::Serialize;
use squeeze_core::region::{linear_axis, sweep};
use squeeze_core::{
    classify_region, optimize_durations, simulate, DeliverySemantics, ResourceRates, SchemeSpec,
    SegmentOutcome, SimConfig, TimingParams, VideoParams,
};
use wasm_bindgen::prelude::wasm_bindgen;

const SCHEMES: [SchemeSpec; 3] = [SchemeSpec::Optimal, SchemeSpec::OptNoSp, SchemeSpec::EqualSplit];

#[derive(Serialize)]
struct PlanView {
    scheme: String,
    t_cpt: f64,
    t_com: f64,
    s_cc: f64,
}

#[derive(Serialize)]
struct OptimizeView {
    region: &'static str,
    case: &'static str,
    bottleneck: &'static str,
    t_c_max: f64,
    t_cpt_interval: [f64; 2],
    t_com_interval: [f64; 2],
    plans: Vec<PlanView>,
}

#[derive(Serialize)]
struct SchemeRun {
    scheme: String,
    segments: Vec<SegmentOutcome>,
}

#[derive(Serialize)]
struct RegionMap {
    region: &'static str,
    axis: Vec<f64>,
    /// Row-major over (c_com_equiv, c_cpt): 1 or 2 for the optimum's case, 0 when both rates are zero.
    case: Vec<u8>,
    s_cc_star: Vec<f64>,
}

fn to_json<T: Serialize>(result: squeeze_core::Result<T>) -> String {
    match result {
        Ok(value) => serde_json::to_string(&value).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e.to_string()),
    }
}

fn error_json(message: &str) -> String {
    serde_json::json!({ "error": message }).to_string()
}

fn setup(
    c_com_equiv_mbps: f64,
    c_cpt_mbps: f64,
    t_cc: f64,
    segments: u32,
) -> squeeze_core::Result<(ResourceRates, TimingParams, VideoParams)> {
    let video = VideoParams::reference_4k();
    let rates = ResourceRates::new(c_com_equiv_mbps * 1e6, c_cpt_mbps * 1e6)?;
    let timing = TimingParams::new(t_cc, video.segment_duration(), segments, 1)?;
    Ok((rates, timing, video))
}

fn optimize_view(c_com_equiv_mbps: f64, c_cpt_mbps: f64, t_cc: f64) -> squeeze_core::Result<OptimizeView> {
    let (rates, timing, video) = setup(c_com_equiv_mbps, c_cpt_mbps, t_cc, 1)?;
    let best = optimize_durations(&rates, &timing, &video)?;
    let plans = SCHEMES
        .iter()
        .map(|s| {
            let plan = s.plan(&rates, &timing, &video)?;
            Ok(PlanView {
                scheme: s.to_string(),
                t_cpt: plan.t_cpt,
                t_com: plan.t_com,
                s_cc: squeeze_core::completion_rate(&plan, &rates, &video),
            })
        })
        .collect::<squeeze_core::Result<_>>()?;
    Ok(OptimizeView {
        region: classify_region(&timing).label(),
        case: best.case.label(),
        bottleneck: best.bottleneck.label(),
        t_c_max: best.t_c_max,
        t_cpt_interval: [best.t_cpt_interval.low, best.t_cpt_interval.high],
        t_com_interval: [best.t_com_interval.low, best.t_com_interval.high],
        plans,
    })
}

fn simulate_view(
    c_com_equiv_mbps: f64,
    c_cpt_mbps: f64,
    t_cc: f64,
    horizon: u32,
    truncate: bool,
) -> squeeze_core::Result<Vec<SchemeRun>> {
    let (rates, timing, video) = setup(c_com_equiv_mbps, c_cpt_mbps, t_cc, horizon)?;
    let delivery_semantics = if truncate {
        DeliverySemantics::Truncate
    } else {
        DeliverySemantics::AllOrNothing
    };
    SCHEMES
        .iter()
        .map(|s| {
            let plan = s.plan(&rates, &timing, &video)?;
            let segments = simulate(&SimConfig {
                plan,
                rates,
                video,
                timing,
                delivery_semantics,
                horizon,
            })?;
            Ok(SchemeRun {
                scheme: s.to_string(),
                segments,
            })
        })
        .collect()
}

fn region_map_view(t_cc: f64, max_rate_mbps: f64, steps: usize) -> squeeze_core::Result<RegionMap> {
    let video = VideoParams::reference_4k();
    let timing = TimingParams::single(t_cc, video.segment_duration())?;
    let axis = linear_axis(0.0, max_rate_mbps * 1e6, steps)?;
    let cells = sweep(&axis, &timing, &video)?;
    Ok(RegionMap {
        region: classify_region(&timing).label(),
        axis,
        case: cells
            .iter()
            .map(|c| match c.verdict {
                None => 0,
                Some(v) => match v.case {
                    squeeze_core::CaseKind::ResourceLimited => 1,
                    squeeze_core::CaseKind::Tradeoff => 2,
                },
            })
            .collect(),
        s_cc_star: cells.iter().map(|c| c.s_cc_star).collect(),
    })
}

/// Optimal and baseline splits for one rate pair. Rates are in Mbit/s.
#[wasm_bindgen]
pub fn optimize(c_com_equiv_mbps: f64, c_cpt_mbps: f64, t_cc: f64) -> String {
    to_json(optimize_view(c_com_equiv_mbps, c_cpt_mbps, t_cc))
}

/// Segment-by-segment replay of the three schemes.
#[wasm_bindgen]
pub fn replay(c_com_equiv_mbps: f64, c_cpt_mbps: f64, t_cc: f64, horizon: u32, truncate: bool) -> String {
    to_json(simulate_view(
        c_com_equiv_mbps,
        c_cpt_mbps,
        t_cc,
        horizon,
        truncate,
    ))
}

/// Case map over a square rate grid from 0 to `max_rate_mbps`.
#[wasm_bindgen]
pub fn region_map(t_cc: f64, max_rate_mbps: f64, steps: usize) -> String {
    to_json(region_map_view(t_cc, max_rate_mbps, steps))
}
