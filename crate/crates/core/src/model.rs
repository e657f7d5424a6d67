//! Shared domain values.
//!
//! Times are seconds and rates are bits per second, both as `f64`. Nothing in
//! the library quantizes to milliseconds; rounding is left to presentation.

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Frame geometry and encoding of the video being streamed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VideoParams {
    pixels_wide: u32,
    pixels_high: u32,
    bits_per_pixel: u32,
    fov_ratio: f64,
    frame_rate: f64,
    compression_ratio: f64,
    segment_duration: f64,
}

impl VideoParams {
    pub fn new(
        pixels_wide: u32,
        pixels_high: u32,
        bits_per_pixel: u32,
        fov_ratio: f64,
        frame_rate: f64,
        compression_ratio: f64,
        segment_duration: f64,
    ) -> Result<Self> {
        for (name, value) in [
            ("pixels_wide", pixels_wide),
            ("pixels_high", pixels_high),
            ("bits_per_pixel", bits_per_pixel),
        ] {
            if value == 0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be >= 1".into(),
                });
            }
        }
        check_positive("fov_ratio", fov_ratio)?;
        if fov_ratio > 1.0 {
            return Err(Error::InvalidParameter {
                name: "fov_ratio",
                reason: format!("must lie in (0, 1], got {fov_ratio}"),
            });
        }
        check_positive("frame_rate", frame_rate)?;
        if !(compression_ratio.is_finite() && compression_ratio >= 1.0) {
            return Err(Error::InvalidParameter {
                name: "compression_ratio",
                reason: format!("must be finite and >= 1, got {compression_ratio}"),
            });
        }
        check_positive("segment_duration", segment_duration)?;
        Ok(Self {
            pixels_wide,
            pixels_high,
            bits_per_pixel,
            fov_ratio,
            frame_rate,
            compression_ratio,
            segment_duration,
        })
    }

    /// 4K (3840x2160) at 12 bit/pixel, 20 % field of view, 30 fps,
    /// HEVC-like compression ratio 2.41 and one-second segments.
    pub fn reference_4k() -> Self {
        Self::new(3840, 2160, 12, 0.2, 30.0, 2.41, 1.0).expect("reference parameters are valid")
    }

    pub fn pixels_wide(&self) -> u32 {
        self.pixels_wide
    }

    pub fn pixels_high(&self) -> u32 {
        self.pixels_high
    }

    pub fn bits_per_pixel(&self) -> u32 {
        self.bits_per_pixel
    }

    pub fn fov_ratio(&self) -> f64 {
        self.fov_ratio
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn compression_ratio(&self) -> f64 {
        self.compression_ratio
    }

    pub fn segment_duration(&self) -> f64 {
        self.segment_duration
    }

    /// Bits in one field of view of one frame.
    pub fn fov_bits(&self) -> f64 {
        self.fov_ratio
            * f64::from(self.pixels_wide)
            * f64::from(self.pixels_high)
            * f64::from(self.bits_per_pixel)
    }

    /// Bits of predicted field of view in one segment, before compression.
    /// This is the rendering target and the denominator of the completion rate.
    pub fn render_bits_per_segment(&self) -> f64 {
        self.fov_bits() * self.frame_rate * self.segment_duration
    }

    pub fn transmit_bits_per_segment(&self) -> f64 {
        self.render_bits_per_segment() / self.compression_ratio
    }

    /// `(transmit_bits, render_bits)` for one segment.
    pub fn segment_bit_targets(&self) -> (f64, f64) {
        (self.transmit_bits_per_segment(), self.render_bits_per_segment())
    }
}

/// Equivalent transmission rate (physical rate times compression ratio) and
/// computing (rendering) rate of one user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResourceRates {
    c_com_equiv: f64,
    c_cpt: f64,
}

impl ResourceRates {
    pub fn new(c_com_equiv: f64, c_cpt: f64) -> Result<Self> {
        check_non_negative("c_com_equiv", c_com_equiv)?;
        check_non_negative("c_cpt", c_cpt)?;
        Ok(Self { c_com_equiv, c_cpt })
    }

    pub fn c_com_equiv(&self) -> f64 {
        self.c_com_equiv
    }

    pub fn c_cpt(&self) -> f64 {
        self.c_cpt
    }

    pub fn total(&self) -> f64 {
        self.c_com_equiv + self.c_cpt
    }

    pub fn is_degenerate(&self) -> bool {
        self.total() <= 0.0
    }

    /// Same rates with both multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.c_com_equiv * factor, self.c_cpt * factor)
    }
}

/// Timing of the proactive segments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingParams {
    t_cc: f64,
    t_seg: f64,
    num_segments: u32,
    first_proactive_index: u32,
}

impl TimingParams {
    /// `first_proactive_index` is 1-based and must not exceed `num_segments`.
    pub fn new(t_cc: f64, t_seg: f64, num_segments: u32, first_proactive_index: u32) -> Result<Self> {
        if !(t_cc.is_finite() && t_cc > 0.0) {
            return Err(Error::InvalidTiming(format!(
                "t_cc must be finite and > 0, got {t_cc}"
            )));
        }
        if !(t_seg.is_finite() && t_seg > 0.0) {
            return Err(Error::InvalidTiming(format!(
                "t_seg must be finite and > 0, got {t_seg}"
            )));
        }
        if num_segments == 0 {
            return Err(Error::InvalidTiming("num_segments must be >= 1".into()));
        }
        if first_proactive_index == 0 || first_proactive_index > num_segments {
            return Err(Error::InvalidTiming(format!(
                "first_proactive_index must lie in [1, {num_segments}], got {first_proactive_index}"
            )));
        }
        Ok(Self {
            t_cc,
            t_seg,
            num_segments,
            first_proactive_index,
        })
    }

    /// Timing whose segment duration is taken from `video`.
    pub fn for_video(
        video: &VideoParams,
        t_cc: f64,
        num_segments: u32,
        first_proactive_index: u32,
    ) -> Result<Self> {
        Self::new(
            t_cc,
            video.segment_duration(),
            num_segments,
            first_proactive_index,
        )
    }

    /// A single proactive segment; convenient when only the optimizer is used.
    pub fn single(t_cc: f64, t_seg: f64) -> Result<Self> {
        Self::new(t_cc, t_seg, 1, 1)
    }

    pub fn t_cc(&self) -> f64 {
        self.t_cc
    }

    pub fn t_seg(&self) -> f64 {
        self.t_seg
    }

    pub fn num_segments(&self) -> u32 {
        self.num_segments
    }

    pub fn first_proactive_index(&self) -> u32 {
        self.first_proactive_index
    }

    /// Number of proactively streamed segments, `L - l + 1`.
    pub fn proactive_segments(&self) -> u32 {
        self.num_segments - self.first_proactive_index + 1
    }

    /// Errors unless the mirrored segment duration equals the video's.
    pub fn check_matches(&self, video: &VideoParams) -> Result<()> {
        if self.t_seg == video.segment_duration() {
            Ok(())
        } else {
            Err(Error::SegmentDurationMismatch {
                video: video.segment_duration(),
                timing: self.t_seg,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Closed-form optimum under the squeeze-prohibited constraints.
    OptimalWithSp,
    /// Optimum ignoring the per-segment duration caps.
    OptimalNoSp,
    /// Half of the budget to each task.
    EqualSplit,
    /// User-supplied durations.
    Fixed,
}

impl Scheme {
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::OptimalWithSp => "optimal",
            Scheme::OptimalNoSp => "opt-no-sp",
            Scheme::EqualSplit => "equal-split",
            Scheme::Fixed => "fixed",
        }
    }
}

/// Rendering and transmission durations for one segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DurationPlan {
    pub t_cpt: f64,
    pub t_com: f64,
    pub scheme: Scheme,
}

impl DurationPlan {
    pub fn new(t_cpt: f64, t_com: f64, scheme: Scheme) -> Result<Self> {
        check_non_negative("t_cpt", t_cpt)?;
        check_non_negative("t_com", t_com)?;
        Ok(Self { t_cpt, t_com, scheme })
    }

    pub fn fixed(t_cpt: f64, t_com: f64) -> Result<Self> {
        Self::new(t_cpt, t_com, Scheme::Fixed)
    }

    pub fn total(&self) -> f64 {
        self.t_cpt + self.t_com
    }
}

/// How far one segment's tasks overrun into the next segment's windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeOutcome {
    /// Rendering overrun; negative means slack.
    pub delta_p: f64,
    /// Transmission overrun; negative means slack.
    pub delta_m: f64,
    pub per_segment_squeeze: f64,
}

impl SqueezeOutcome {
    pub fn new(delta_p: f64, delta_m: f64) -> Self {
        Self {
            delta_p,
            delta_m,
            per_segment_squeeze: delta_p.max(0.0) + delta_m.max(0.0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.per_segment_squeeze == 0.0
    }
}
