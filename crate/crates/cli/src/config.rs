use std::path::{Path, PathBuf};

use badweave::construction::{derive_params, Params, ScheduleKind, TrimPolicy};
use badweave::exact::{parse_rational, Rat, ThetaSpec};
use badweave::Pair;
use clap::Args;
use serde::Deserialize;

use crate::Failure;

/// Settings shared by every subcommand. Flags override the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// JSON config file; unknown keys are rejected.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Weight pair "i,j", repeatable (or separated by ';').
    #[arg(long)]
    pub pairs: Vec<String>,
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long = "R")]
    pub r: Option<u64>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub epsilon: Option<String>,
    /// "desk" (no trimming), "paper", or a fixed trim count.
    #[arg(long)]
    pub trim: Option<String>,
    /// "finite" or "countable".
    #[arg(long)]
    pub schedule: Option<String>,
    /// Use only the first T pairs of the schedule.
    #[arg(long = "T")]
    pub truncate: Option<usize>,
    #[arg(long = "Q")]
    pub q_max: Option<u64>,
    #[arg(long = "Hmax")]
    pub h_max: Option<u64>,
    /// Output file (JSON lines) or directory (plot data); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Extra copy of the point certificate.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    pairs: Option<Vec<String>>,
    theta: Option<String>,
    #[serde(rename = "R")]
    r: Option<u64>,
    depth: Option<u32>,
    epsilon: Option<String>,
    trim: Option<String>,
    schedule: Option<String>,
    #[serde(rename = "T")]
    truncate: Option<usize>,
    #[serde(rename = "Q")]
    q_max: Option<u64>,
    #[serde(rename = "Hmax")]
    h_max: Option<u64>,
    out: Option<PathBuf>,
    cert: Option<PathBuf>,
    seed: Option<u64>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pairs: Vec<Pair>,
    pub theta: ThetaSpec,
    pub r: u64,
    pub depth: u32,
    pub epsilon: Option<Rat>,
    pub trim: TrimPolicy,
    pub schedule: ScheduleKind,
    pub q_max: Option<u64>,
    pub h_max: Option<u64>,
    pub out: Option<PathBuf>,
    pub cert: Option<PathBuf>,
    pub seed: u64,
}

fn config_err(key: &str, msg: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{key}: {msg}"))
}

fn read_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err("config", format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        config_err(if path == "." { "config" } else { &path }, e.into_inner())
    })
}

pub fn parse_pair(s: &str) -> Result<Pair, Failure> {
    let (i, j) = s
        .split_once(',')
        .ok_or_else(|| config_err("pairs", format!("{s:?} is not of the form i,j")))?;
    let i = parse_rational(i.trim()).map_err(|e| config_err("pairs", e))?;
    let j = parse_rational(j.trim()).map_err(|e| config_err("pairs", e))?;
    Pair::new(&i, &j).map_err(|e| config_err("pairs", e))
}

fn parse_trim(s: &str) -> Result<TrimPolicy, Failure> {
    match s {
        "desk" => Ok(TrimPolicy::Fixed(0)),
        "paper" => Ok(TrimPolicy::Paper),
        n => n
            .parse()
            .map(TrimPolicy::Fixed)
            .map_err(|_| config_err("trim", format!("expected desk, paper or a count, got {n:?}"))),
    }
}

fn parse_schedule(s: &str) -> Result<ScheduleKind, Failure> {
    match s {
        "finite" => Ok(ScheduleKind::Finite),
        "countable" => Ok(ScheduleKind::Countable),
        other => Err(config_err(
            "schedule",
            format!("expected finite or countable, got {other:?}"),
        )),
    }
}

impl RunConfig {
    pub fn resolve(flags: &Common) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let pair_strs: Vec<String> = if !flags.pairs.is_empty() {
            flags
                .pairs
                .iter()
                .flat_map(|s| s.split(';').map(str::to_string).collect::<Vec<_>>())
                .collect()
        } else {
            file.pairs.unwrap_or_else(|| vec!["1/2,1/2".into()])
        };
        let mut pairs = pair_strs.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>, _>>()?;
        if let Some(t) = flags.truncate.or(file.truncate) {
            if t == 0 {
                return Err(config_err("T", "must be at least 1"));
            }
            pairs.truncate(t);
        }
        let theta_src = flags.theta.clone().or(file.theta).unwrap_or_else(|| "sqrt(2)-1".into());
        let theta = ThetaSpec::parse(&theta_src).map_err(|e| config_err("theta", e))?;
        let r = flags.r.or(file.r).unwrap_or(16);
        let epsilon = match flags.epsilon.clone().or(file.epsilon) {
            Some(s) => Some(parse_rational(&s).map_err(|e| config_err("epsilon", e))?),
            None => None,
        };
        let trim = parse_trim(flags.trim.as_deref().or(file.trim.as_deref()).unwrap_or("desk"))?;
        let schedule = parse_schedule(
            flags
                .schedule
                .as_deref()
                .or(file.schedule.as_deref())
                .unwrap_or("finite"),
        )?;
        Ok(RunConfig {
            pairs,
            theta,
            r,
            depth: flags.depth.or(file.depth).unwrap_or(3),
            epsilon,
            trim,
            schedule,
            q_max: flags.q_max.or(file.q_max),
            h_max: flags.h_max.or(file.h_max),
            out: flags.out.clone().or(file.out),
            cert: flags.cert.clone().or(file.cert),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        })
    }

    pub fn params(&self) -> Result<Params, Failure> {
        derive_params(
            &self.pairs,
            &self.theta,
            self.r,
            self.epsilon.clone(),
            self.trim,
            self.schedule,
        )
        .map_err(|e| config_err("params", e))
    }
}
