//! Scenario files.
//!
//! A scenario is a TOML document. Units are fixed: seconds, bits per second,
//! watts, hertz, FLOP/s and FLOP/bit. Nothing is converted.

use std::path::Path;

use serde::Deserialize;
use squeeze_core::channel::{self, ChannelParams, ComputeParams};
use squeeze_core::{DeliverySemantics, ResourceRates, SchemeSpec, TimingParams, VideoParams};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub video: VideoSection,
    pub timing: TimingSection,
    pub rates: Option<RatesSection>,
    #[serde(default)]
    pub schemes: Vec<String>,
    #[serde(default)]
    pub simulation: SimulationSection,
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoSection {
    pub pixels_wide: u32,
    pub pixels_high: u32,
    pub bits_per_pixel: u32,
    pub fov_ratio: f64,
    pub frame_rate: f64,
    pub compression_ratio: f64,
    pub segment_duration: f64,
    /// Tiles per segment; recorded but not used in any computation.
    pub tiles_per_segment: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingSection {
    pub t_cc: f64,
    /// Optional mirror of `video.segment_duration`; must agree when present.
    pub t_seg: Option<f64>,
    pub num_segments: u32,
    #[serde(default = "one")]
    pub first_proactive_index: u32,
}

fn one() -> u32 {
    1
}

/// Communication comes from exactly one of `c_com_equiv`, `c_com` (physical
/// rate, scaled by the compression ratio) or `[rates.channel]`; computing
/// from exactly one of `c_cpt` or `[rates.compute]`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSection {
    pub c_com_equiv: Option<f64>,
    pub c_com: Option<f64>,
    pub c_cpt: Option<f64>,
    pub channel: Option<ChannelSection>,
    pub compute: Option<ComputeSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub num_users: usize,
    pub num_antennas: usize,
    pub bandwidth: f64,
    pub total_power: f64,
    pub noise_power: f64,
    pub pathloss_exponent: f64,
    pub distances: Vec<f64>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: u64,
    pub rng_seed: u64,
}

fn default_mc_samples() -> u64 {
    100_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeSection {
    pub total_flops: f64,
    pub num_users: usize,
    pub render_intensity: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(default)]
    pub delivery_semantics: DeliverySemantics,
    /// Defaults to every proactively streamed segment.
    pub horizon: Option<u32>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub c_com_equiv: AxisSection,
    pub c_cpt: AxisSection,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub axis_min: f64,
    pub axis_max: f64,
    pub axis_steps: usize,
}

/// Validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub video: VideoParams,
    pub timing: TimingParams,
    pub rates: Option<RatesSpec>,
    pub schemes: Vec<SchemeSpec>,
    pub delivery_semantics: DeliverySemantics,
    pub horizon: u32,
    pub sweep: Option<SweepSection>,
    pub tiles_per_segment: Option<u32>,
}

#[derive(Debug, Clone)]
pub enum ComSource {
    Equivalent(f64),
    Physical(f64),
    Channel(ChannelParams),
}

#[derive(Debug, Clone)]
pub enum CptSource {
    Direct(f64),
    Compute(ComputeParams),
}

#[derive(Debug, Clone)]
pub struct RatesSpec {
    pub com: ComSource,
    pub cpt: CptSource,
}

impl RatesSpec {
    pub fn is_derived(&self) -> bool {
        !matches!(
            (&self.com, &self.cpt),
            (ComSource::Equivalent(_), CptSource::Direct(_))
        )
    }
}

/// Everything the `rates` command reports. Entries not derivable from the
/// scenario are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRates {
    pub rates: ResourceRates,
    pub channel: Option<ChannelSummary>,
    /// Physical transmission rate, when known.
    pub c_com: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSummary {
    pub rng_seed: u64,
    pub mc_samples: u64,
    pub beta: f64,
    pub per_user_power: Vec<f64>,
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text).map_err(|err| match err {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        file.validate()
    }

    pub fn rates_spec(&self) -> Result<&RatesSpec, CliError> {
        self.rates
            .as_ref()
            .ok_or_else(|| CliError::Config("missing `[rates]` table".into()))
    }

    /// Resolves the configured rates, running the Monte-Carlo estimate when
    /// the transmission rate comes from a channel model.
    pub fn resolve_rates(&self) -> Result<ResolvedRates, CliError> {
        let spec = self.rates_spec()?;
        let (c_com_equiv, c_com, channel) = match &spec.com {
            ComSource::Equivalent(x) => (*x, None, None),
            ComSource::Physical(x) => (channel::equivalent_rate(*x, &self.video), Some(*x), None),
            ComSource::Channel(params) => {
                let power = channel::power_allocation(params);
                let c_com = channel::ensemble_average_rate(params)?;
                let summary = ChannelSummary {
                    rng_seed: params.rng_seed(),
                    mc_samples: params.mc_samples(),
                    beta: power.beta,
                    per_user_power: power.per_user,
                };
                (
                    channel::equivalent_rate(c_com, &self.video),
                    Some(c_com),
                    Some(summary),
                )
            }
        };
        let c_cpt = match &spec.cpt {
            CptSource::Direct(x) => *x,
            CptSource::Compute(p) => channel::computing_rate(p),
        };
        Ok(ResolvedRates {
            rates: ResourceRates::new(c_com_equiv, c_cpt)?,
            channel,
            c_com,
        })
    }
}

fn exactly_one(what: &str, present: &[(&str, bool)]) -> Result<usize, CliError> {
    let names: Vec<&str> = present.iter().map(|(n, _)| *n).collect();
    let set: Vec<usize> = present
        .iter()
        .enumerate()
        .filter(|(_, (_, p))| *p)
        .map(|(i, _)| i)
        .collect();
    match set.as_slice() {
        [i] => Ok(*i),
        [] => Err(CliError::Config(format!(
            "[rates] needs a {what} source: one of {}",
            names.join(", ")
        ))),
        _ => Err(CliError::Config(format!(
            "[rates] has more than one {what} source; keep exactly one of {}",
            names.join(", ")
        ))),
    }
}

impl RatesSection {
    fn validate(self) -> Result<RatesSpec, CliError> {
        let com = match exactly_one(
            "transmission",
            &[
                ("c_com_equiv", self.c_com_equiv.is_some()),
                ("c_com", self.c_com.is_some()),
                ("[rates.channel]", self.channel.is_some()),
            ],
        )? {
            0 => ComSource::Equivalent(self.c_com_equiv.unwrap_or_default()),
            1 => ComSource::Physical(self.c_com.unwrap_or_default()),
            _ => {
                let c = self.channel.expect("checked above");
                ComSource::Channel(ChannelParams::new(
                    c.num_users,
                    c.num_antennas,
                    c.bandwidth,
                    c.total_power,
                    c.noise_power,
                    c.pathloss_exponent,
                    c.distances,
                    c.mc_samples,
                    c.rng_seed,
                )?)
            }
        };
        let cpt = match exactly_one(
            "computing",
            &[
                ("c_cpt", self.c_cpt.is_some()),
                ("[rates.compute]", self.compute.is_some()),
            ],
        )? {
            0 => CptSource::Direct(self.c_cpt.unwrap_or_default()),
            _ => {
                let c = self.compute.expect("checked above");
                CptSource::Compute(ComputeParams::new(
                    c.total_flops,
                    c.num_users,
                    c.render_intensity,
                )?)
            }
        };
        for (name, value) in [
            ("c_com_equiv", self.c_com_equiv),
            ("c_com", self.c_com),
            ("c_cpt", self.c_cpt),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(CliError::Config(format!(
                        "`rates.{name}` must be a finite rate >= 0, got {v}"
                    )));
                }
            }
        }
        Ok(RatesSpec { com, cpt })
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario, CliError> {
        let v = &self.video;
        let video = VideoParams::new(
            v.pixels_wide,
            v.pixels_high,
            v.bits_per_pixel,
            v.fov_ratio,
            v.frame_rate,
            v.compression_ratio,
            v.segment_duration,
        )?;
        let t = &self.timing;
        let timing = TimingParams::new(
            t.t_cc,
            t.t_seg.unwrap_or(video.segment_duration()),
            t.num_segments,
            t.first_proactive_index,
        )?;
        timing.check_matches(&video)?;

        let schemes = self
            .schemes
            .iter()
            .map(|s| s.parse::<SchemeSpec>())
            .collect::<Result<Vec<_>, _>>()?;

        let horizon = self.simulation.horizon.unwrap_or(timing.proactive_segments());

        if let Some(sweep) = &self.sweep {
            for (name, axis) in [("c_com_equiv", sweep.c_com_equiv), ("c_cpt", sweep.c_cpt)] {
                if axis.axis_steps < 1 {
                    return Err(CliError::Core(squeeze_core::Error::InvalidSweep(format!(
                        "`sweep.{name}.axis_steps` must be >= 1"
                    ))));
                }
            }
        }

        Ok(Scenario {
            video,
            timing,
            rates: self.rates.map(RatesSection::validate).transpose()?,
            schemes,
            delivery_semantics: self.simulation.delivery_semantics,
            horizon,
            sweep: self.sweep,
            tiles_per_segment: self.video.tiles_per_segment,
        })
    }
}
