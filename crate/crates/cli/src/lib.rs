//! Batch front end: reads a scenario file, runs one of the analyses and
//! writes CSV or JSON records.

pub mod error;
pub mod format;
pub mod scenario;

use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use squeeze_core::optimize_durations;
use squeeze_core::pipeline::{simulate, SimConfig};
use squeeze_core::region::{self, linear_axis, sweep_grid};

pub use error::CliError;
use format::sig6;
pub use scenario::Scenario;

#[derive(Debug, Parser)]
#[command(
    name = "squeeze",
    version,
    about = "Duration planning for proactive VR segment streaming"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form optimal durations for the scenario's rates.
    Optimize(IoArgs),
    /// Region map over a grid of rates.
    Sweep(IoArgs),
    /// Per-segment replay of each configured scheme.
    Simulate(IoArgs),
    /// Transmission and computing rates derived from channel/compute models.
    Rates(IoArgs),
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A row of command output.
pub trait Record: Serialize {
    const HEADER: &'static [&'static str];
    fn csv_fields(&self) -> Vec<String>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeRecord {
    pub c_com_equiv: f64,
    pub c_cpt: f64,
    pub t_cpt_star: f64,
    pub t_com_star: f64,
    pub t_cpt_low: f64,
    pub t_cpt_high: f64,
    pub t_com_low: f64,
    pub t_com_high: f64,
    pub s_cc_star: f64,
    pub t_c_max: f64,
    pub case: &'static str,
    pub bottleneck: &'static str,
    pub region: &'static str,
    pub efficient: bool,
}

impl Record for OptimizeRecord {
    const HEADER: &'static [&'static str] = &[
        "c_com_equiv",
        "c_cpt",
        "t_cpt_star",
        "t_com_star",
        "t_cpt_low",
        "t_cpt_high",
        "t_com_low",
        "t_com_high",
        "s_cc_star",
        "t_c_max",
        "case",
        "bottleneck",
        "region",
        "efficient",
    ];

    fn csv_fields(&self) -> Vec<String> {
        let mut fields: Vec<String> = [
            self.c_com_equiv,
            self.c_cpt,
            self.t_cpt_star,
            self.t_com_star,
            self.t_cpt_low,
            self.t_cpt_high,
            self.t_com_low,
            self.t_com_high,
            self.s_cc_star,
            self.t_c_max,
        ]
        .into_iter()
        .map(sig6)
        .collect();
        fields.extend([
            self.case.to_string(),
            self.bottleneck.to_string(),
            self.region.to_string(),
            self.efficient.to_string(),
        ]);
        fields
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub c_com_equiv: f64,
    pub c_cpt: f64,
    pub region: &'static str,
    /// `None` when both rates are zero.
    pub case: Option<&'static str>,
    pub efficient: Option<bool>,
    pub s_cc_star: f64,
    pub t_cpt_star: f64,
    pub t_com_star: f64,
}

impl Record for SweepRecord {
    const HEADER: &'static [&'static str] = &[
        "c_com_equiv",
        "c_cpt",
        "region",
        "case",
        "efficient",
        "s_cc_star",
        "t_cpt_star",
        "t_com_star",
    ];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            sig6(self.c_com_equiv),
            sig6(self.c_cpt),
            self.region.to_string(),
            self.case.unwrap_or("degenerate").to_string(),
            self.efficient.map(|e| e.to_string()).unwrap_or_default(),
            sig6(self.s_cc_star),
            sig6(self.t_cpt_star),
            sig6(self.t_com_star),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateRecord {
    pub scheme: String,
    pub segment_offset: u32,
    pub render_start: f64,
    pub render_finish: f64,
    pub tx_start: f64,
    pub tx_finish: f64,
    pub deadline: f64,
    pub lateness: f64,
    pub s_cc: f64,
    pub stalled: bool,
    pub mtp_latency: f64,
}

impl Record for SimulateRecord {
    const HEADER: &'static [&'static str] = &[
        "scheme",
        "segment_offset",
        "render_start",
        "render_finish",
        "tx_start",
        "tx_finish",
        "deadline",
        "lateness",
        "s_cc",
        "stalled",
        "mtp_latency",
    ];

    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.scheme.clone(),
            self.segment_offset.to_string(),
            sig6(self.render_start),
            sig6(self.render_finish),
            sig6(self.tx_start),
            sig6(self.tx_finish),
            sig6(self.deadline),
            sig6(self.lateness),
            sig6(self.s_cc),
            self.stalled.to_string(),
            sig6(self.mtp_latency),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatesRecord {
    pub rng_seed: Option<u64>,
    pub mc_samples: Option<u64>,
    pub beta: Option<f64>,
    pub per_user_power: Vec<f64>,
    pub c_com: Option<f64>,
    pub c_com_equiv: f64,
    pub c_cpt: f64,
}

impl Record for RatesRecord {
    const HEADER: &'static [&'static str] = &[
        "rng_seed",
        "mc_samples",
        "beta",
        "per_user_power",
        "c_com",
        "c_com_equiv",
        "c_cpt",
    ];

    fn csv_fields(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(sig6).unwrap_or_default();
        vec![
            self.rng_seed.map(|s| s.to_string()).unwrap_or_default(),
            self.mc_samples.map(|s| s.to_string()).unwrap_or_default(),
            opt(self.beta),
            self.per_user_power
                .iter()
                .map(|&p| sig6(p))
                .collect::<Vec<_>>()
                .join(";"),
            opt(self.c_com),
            sig6(self.c_com_equiv),
            sig6(self.c_cpt),
        ]
    }
}

pub fn cmd_optimize(scenario: &Scenario) -> Result<Vec<OptimizeRecord>, CliError> {
    let rates = scenario.resolve_rates()?.rates;
    let res = optimize_durations(&rates, &scenario.timing, &scenario.video)?;
    let verdict = region::verdict(&rates, &scenario.timing)?;
    Ok(vec![OptimizeRecord {
        c_com_equiv: rates.c_com_equiv(),
        c_cpt: rates.c_cpt(),
        t_cpt_star: res.plan.t_cpt,
        t_com_star: res.plan.t_com,
        t_cpt_low: res.t_cpt_interval.low,
        t_cpt_high: res.t_cpt_interval.high,
        t_com_low: res.t_com_interval.low,
        t_com_high: res.t_com_interval.high,
        s_cc_star: res.s_cc_star,
        t_c_max: res.t_c_max,
        case: res.case.label(),
        bottleneck: res.bottleneck.label(),
        region: verdict.region.label(),
        efficient: verdict.efficient_condition_holds,
    }])
}

pub fn cmd_sweep(scenario: &Scenario) -> Result<Vec<SweepRecord>, CliError> {
    let sweep = scenario
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("the sweep command needs a `[sweep]` table".into()))?;
    let com = linear_axis(
        sweep.c_com_equiv.axis_min,
        sweep.c_com_equiv.axis_max,
        sweep.c_com_equiv.axis_steps,
    )?;
    let cpt = linear_axis(sweep.c_cpt.axis_min, sweep.c_cpt.axis_max, sweep.c_cpt.axis_steps)?;
    let cells = sweep_grid(&com, &cpt, &scenario.timing, &scenario.video)?;
    Ok(cells
        .into_iter()
        .map(|c| SweepRecord {
            c_com_equiv: c.c_com_equiv,
            c_cpt: c.c_cpt,
            region: c.region.label(),
            case: c.verdict.map(|v| v.case.label()),
            efficient: c.verdict.map(|v| v.efficient_condition_holds),
            s_cc_star: c.s_cc_star,
            t_cpt_star: c.t_cpt_star,
            t_com_star: c.t_com_star,
        })
        .collect())
}

pub fn cmd_simulate(scenario: &Scenario) -> Result<Vec<SimulateRecord>, CliError> {
    if scenario.schemes.is_empty() {
        return Err(CliError::Config(format!(
            "the simulate command needs a non-empty `schemes` list; valid identifiers: {}",
            squeeze_core::optimizer::SCHEME_IDENTIFIERS.join(", ")
        )));
    }
    let rates = scenario.resolve_rates()?.rates;
    let mut records = Vec::new();
    for scheme in &scenario.schemes {
        let plan = scheme.plan(&rates, &scenario.timing, &scenario.video)?;
        let config = SimConfig {
            plan,
            rates,
            video: scenario.video,
            timing: scenario.timing,
            delivery_semantics: scenario.delivery_semantics,
            horizon: scenario.horizon,
        };
        records.extend(simulate(&config)?.into_iter().map(|o| SimulateRecord {
            scheme: scheme.to_string(),
            segment_offset: o.segment_offset,
            render_start: o.render_start,
            render_finish: o.render_finish,
            tx_start: o.tx_start,
            tx_finish: o.tx_finish,
            deadline: o.deadline,
            lateness: o.lateness,
            s_cc: o.s_cc,
            stalled: o.stalled,
            mtp_latency: o.mtp_latency,
        }));
    }
    Ok(records)
}

pub fn cmd_rates(scenario: &Scenario) -> Result<Vec<RatesRecord>, CliError> {
    if !scenario.rates_spec()?.is_derived() {
        return Err(CliError::Config(
            "the rates command needs `[rates.channel]`, `[rates.compute]` or a physical `c_com`".into(),
        ));
    }
    let resolved = scenario.resolve_rates()?;
    let channel = resolved.channel;
    Ok(vec![RatesRecord {
        rng_seed: channel.as_ref().map(|c| c.rng_seed),
        mc_samples: channel.as_ref().map(|c| c.mc_samples),
        beta: channel.as_ref().map(|c| c.beta),
        per_user_power: channel.map(|c| c.per_user_power).unwrap_or_default(),
        c_com: resolved.c_com,
        c_com_equiv: resolved.rates.c_com_equiv(),
        c_cpt: resolved.rates.c_cpt(),
    }])
}

pub fn render<R: Record>(records: &[R], format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(records)?;
            text.push('\n');
            Ok(text)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(R::HEADER)?;
            for r in records {
                writer.write_record(r.csv_fields())?;
            }
            Ok(String::from_utf8(writer.into_inner()?)?)
        }
    }
}

fn emit(text: &str, args: &IoArgs) -> anyhow::Result<()> {
    match &args.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write `{}`", path.display()))?
        }
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let args = match &cli.command {
        Command::Optimize(a) | Command::Sweep(a) | Command::Simulate(a) | Command::Rates(a) => a,
    };
    let scenario = Scenario::from_path(&args.config)?;
    let text = match &cli.command {
        Command::Optimize(_) => render(&cmd_optimize(&scenario)?, args.format)?,
        Command::Sweep(_) => render(&cmd_sweep(&scenario)?, args.format)?,
        Command::Simulate(_) => render(&cmd_simulate(&scenario)?, args.format)?,
        Command::Rates(_) => render(&cmd_rates(&scenario)?, args.format)?,
    };
    emit(&text, args)
}
