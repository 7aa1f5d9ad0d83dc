use std::path::Path;

use crate::episodes::EpisodeRecord;
use crate::stats::{bootstrap_ci, deviation_stats, mean_and_sample_std};
use crate::{Error, Result};

/// Aggregated evaluation statistics. Top speed is reported two ways (the
/// mean of per-episode window maxima and the overall maximum) since either
/// reading of "top speed" is defensible.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub episode_count: usize,
    pub mean_velocity: f64,
    pub mean_velocity_ci: (f64, f64),
    pub top_velocity_mean: f64,
    pub top_velocity_std: f64,
    pub top_velocity_ci: (f64, f64),
    pub top_velocity_max: f64,
    pub deviation_mean_deg: f64,
    pub deviation_std_deg: f64,
    pub excluded_zero_displacement: usize,
    pub bootstrap_resamples: usize,
}

impl EvalReport {
    pub fn from_records(records: &[EpisodeRecord], resamples: usize, seed: u64) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySamples);
        }
        let means: Vec<f64> = records.iter().map(|r| r.mean_velocity).collect();
        let tops: Vec<f64> = records.iter().map(|r| r.top_velocity).collect();
        let (mean_velocity, _) = mean_and_sample_std(&means);
        let (top_mean, top_std) = mean_and_sample_std(&tops);
        let deviation = deviation_stats(records);
        Ok(Self {
            episode_count: records.len(),
            mean_velocity,
            mean_velocity_ci: bootstrap_ci(&means, resamples, 0.95, seed)?,
            top_velocity_mean: top_mean,
            top_velocity_std: top_std,
            top_velocity_ci: bootstrap_ci(&tops, resamples, 0.95, seed ^ 0x7075)?,
            top_velocity_max: tops.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v)),
            deviation_mean_deg: deviation.mean_deg,
            deviation_std_deg: deviation.std_deg,
            excluded_zero_displacement: deviation.excluded,
            bootstrap_resamples: resamples,
        })
    }

    pub fn to_text(&self) -> String {
        format!(
            "eval-report 1\nepisodes = {}\nmean_velocity = {}\nmean_velocity_ci = {} {}\n\
             top_velocity_mean = {}\ntop_velocity_std = {}\ntop_velocity_ci = {} {}\n\
             top_velocity_max = {}\ndeviation_mean_deg = {}\ndeviation_std_deg = {}\n\
             excluded_zero_displacement = {}\nbootstrap_resamples = {}\n",
            self.episode_count,
            self.mean_velocity,
            self.mean_velocity_ci.0,
            self.mean_velocity_ci.1,
            self.top_velocity_mean,
            self.top_velocity_std,
            self.top_velocity_ci.0,
            self.top_velocity_ci.1,
            self.top_velocity_max,
            self.deviation_mean_deg,
            self.deviation_std_deg,
            self.excluded_zero_displacement,
            self.bootstrap_resamples,
        )
    }
}

/// Writes `report.txt` plus the two flat tabular files: `episodes.csv`
/// (per-episode records) and `bootstrap.csv` (interval summary).
pub fn write_report_files(dir: &Path, report: &EvalReport, records: &[EpisodeRecord]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.txt"), report.to_text())?;

    let mut episodes = String::from(
        "episode,length,terminal,final_x,final_y,mean_velocity,top_velocity,deviation_deg\n",
    );
    for (i, r) in records.iter().enumerate() {
        let (dx, dy) = r.final_displacement();
        let deviation = if dx == 0.0 && dy == 0.0 {
            f64::NAN
        } else {
            dy.atan2(dx).abs().to_degrees()
        };
        episodes.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            i,
            r.length,
            r.terminal.as_str(),
            r.xs.last().unwrap(),
            r.ys.last().unwrap(),
            r.mean_velocity,
            r.top_velocity,
            deviation
        ));
    }
    std::fs::write(dir.join("episodes.csv"), episodes)?;

    let bootstrap = format!(
        "metric,point,lo,hi\nmean_velocity,{},{},{}\ntop_velocity_mean,{},{},{}\n",
        report.mean_velocity,
        report.mean_velocity_ci.0,
        report.mean_velocity_ci.1,
        report.top_velocity_mean,
        report.top_velocity_ci.0,
        report.top_velocity_ci.1,
    );
    std::fs::write(dir.join("bootstrap.csv"), bootstrap)?;
    Ok(())
}

/// Reads back `report.txt` written by `write_report_files`.
pub fn read_report(dir: &Path) -> Result<EvalReport> {
    let text = std::fs::read_to_string(dir.join("report.txt"))?;
    let mut lines = text.lines();
    if lines.next() != Some("eval-report 1") {
        return Err(Error::Report("bad header".into()));
    }
    let mut report = EvalReport {
        episode_count: 0,
        mean_velocity: f64::NAN,
        mean_velocity_ci: (f64::NAN, f64::NAN),
        top_velocity_mean: f64::NAN,
        top_velocity_std: f64::NAN,
        top_velocity_ci: (f64::NAN, f64::NAN),
        top_velocity_max: f64::NAN,
        deviation_mean_deg: f64::NAN,
        deviation_std_deg: f64::NAN,
        excluded_zero_displacement: 0,
        bootstrap_resamples: 0,
    };
    for line in lines {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        let key = key.trim();
        let value = value.trim();
        let pair = || -> Result<(f64, f64)> {
            let mut it = value.split_whitespace();
            let lo = it.next().and_then(|v| v.parse().ok());
            let hi = it.next().and_then(|v| v.parse().ok());
            match (lo, hi) {
                (Some(lo), Some(hi)) => Ok((lo, hi)),
                _ => Err(Error::Report(format!("bad interval for {key}"))),
            }
        };
        let scalar = || -> Result<f64> {
            value
                .parse()
                .map_err(|_| Error::Report(format!("bad value for {key}")))
        };
        match key {
            "episodes" => report.episode_count = scalar()? as usize,
            "mean_velocity" => report.mean_velocity = scalar()?,
            "mean_velocity_ci" => report.mean_velocity_ci = pair()?,
            "top_velocity_mean" => report.top_velocity_mean = scalar()?,
            "top_velocity_std" => report.top_velocity_std = scalar()?,
            "top_velocity_ci" => report.top_velocity_ci = pair()?,
            "top_velocity_max" => report.top_velocity_max = scalar()?,
            "deviation_mean_deg" => report.deviation_mean_deg = scalar()?,
            "deviation_std_deg" => report.deviation_std_deg = scalar()?,
            "excluded_zero_displacement" => {
                report.excluded_zero_displacement = scalar()? as usize
            }
            "bootstrap_resamples" => report.bootstrap_resamples = scalar()? as usize,
            _ => {}
        }
    }
    Ok(report)
}
