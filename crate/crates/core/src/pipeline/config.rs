use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::dataset::SplitMode;
use crate::ensemble::TrainParams;
use crate::error::{Error, Result};
use crate::ingest::{SeriesOptions, Window};
use crate::preprocess::PreprocessParams;

/// Every tunable of the pipeline. Defaults are listed in [`PipelineConfig::KEYS`].
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub window: Window,
    pub preprocess: PreprocessParams,
    pub disk_radius: usize,
    pub train: TrainParams,
    pub cv_folds: usize,
    pub train_fraction: f64,
    pub split: SplitMode,
    pub output_dir: PathBuf,
    pub pgm_slice_thickness_mm: f64,
    pub pgm_pixel_spacing_mm: (f64, f64),
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let series = SeriesOptions::default();
        Self {
            window: series.window,
            preprocess: PreprocessParams::default(),
            disk_radius: 8,
            train: TrainParams::default(),
            cv_folds: 15,
            train_fraction: 0.6,
            split: SplitMode::Patient,
            output_dir: PathBuf::from("results"),
            pgm_slice_thickness_mm: series.pgm_slice_thickness_mm,
            pgm_pixel_spacing_mm: series.pgm_pixel_spacing_mm,
            threads: 0,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

impl PipelineConfig {
    /// Recognised keys with their defaults.
    pub const KEYS: [(&'static str, &'static str); 20] = [
        ("window_center", "-300"),
        ("window_width", "1400"),
        ("blackout_fraction", "0.2"),
        ("band_lo", "110"),
        ("band_hi", "130"),
        ("strip_width_fraction", "0.06"),
        ("cleanup_radius_close", "3"),
        ("cleanup_radius_open", "3"),
        ("disk_radius", "8"),
        ("n_trees", "30"),
        ("min_leaf", "5"),
        ("max_depth", "12"),
        ("seed", "0"),
        ("cv_folds", "15"),
        ("train_fraction", "0.6"),
        ("split", "patient"),
        ("output_dir", "results"),
        ("pgm_slice_thickness_mm", "5"),
        ("pgm_pixel_spacing_mm", "1,1"),
        ("threads", "0"),
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "window_center" => self.window.center = parse(key, value)?,
            "window_width" => self.window.width = parse(key, value)?,
            "blackout_fraction" => self.preprocess.blackout_fraction = parse(key, value)?,
            "band_lo" => self.preprocess.band_lo = parse(key, value)?,
            "band_hi" => self.preprocess.band_hi = parse(key, value)?,
            "strip_width_fraction" => self.preprocess.strip_width_fraction = parse(key, value)?,
            "cleanup_radius_close" => self.preprocess.cleanup_radius_close = parse(key, value)?,
            "cleanup_radius_open" => self.preprocess.cleanup_radius_open = parse(key, value)?,
            "disk_radius" => self.disk_radius = parse(key, value)?,
            "n_trees" => self.train.n_trees = parse(key, value)?,
            "min_leaf" => self.train.min_leaf = parse(key, value)?,
            "max_depth" => self.train.max_depth = parse(key, value)?,
            "seed" => self.train.seed = parse(key, value)?,
            "cv_folds" => self.cv_folds = parse(key, value)?,
            "train_fraction" => self.train_fraction = parse(key, value)?,
            "split" => self.split = value.parse()?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "pgm_slice_thickness_mm" => self.pgm_slice_thickness_mm = parse(key, value)?,
            "pgm_pixel_spacing_mm" => {
                let (r, c) = value
                    .split_once(',')
                    .ok_or_else(|| Error::Config(format!("{key}: expected `row,col`, got {value:?}")))?;
                self.pgm_pixel_spacing_mm = (parse(key, r.trim())?, parse(key, c.trim())?);
            }
            "threads" => self.threads = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values.
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(k.trim(), v)
                .map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        let p = &self.preprocess;
        if !(self.window.width > 0.0) {
            return fail("window_width must be positive");
        }
        if !(0.0..0.5).contains(&p.blackout_fraction) {
            return fail("blackout_fraction must be in [0, 0.5)");
        }
        if p.band_lo >= p.band_hi {
            return fail("band_lo must be below band_hi");
        }
        if !(p.strip_width_fraction > 0.0 && p.strip_width_fraction <= 0.3) {
            return fail("strip_width_fraction must be in (0, 0.3]");
        }
        if p.cleanup_radius_close == 0 || p.cleanup_radius_open == 0 {
            return fail("cleanup radii must be at least 1");
        }
        if self.disk_radius == 0 {
            return fail("disk_radius must be at least 1");
        }
        if self.train.n_trees == 0 || self.train.min_leaf == 0 || self.train.max_depth == 0 {
            return fail("n_trees, min_leaf and max_depth must be at least 1");
        }
        if self.cv_folds < 2 {
            return fail("cv_folds must be at least 2");
        }
        if !(self.train_fraction > 0.0 && self.train_fraction <= 1.0) {
            return fail("train_fraction must be in (0, 1]");
        }
        if !(self.pgm_slice_thickness_mm > 0.0)
            || !(self.pgm_pixel_spacing_mm.0 > 0.0 && self.pgm_pixel_spacing_mm.1 > 0.0)
        {
            return fail("PGM geometry must be positive");
        }
        Ok(())
    }

    pub fn series_options(&self) -> SeriesOptions {
        SeriesOptions {
            window: self.window,
            pgm_slice_thickness_mm: self.pgm_slice_thickness_mm,
            pgm_pixel_spacing_mm: self.pgm_pixel_spacing_mm,
        }
    }

    /// Current values in the config-file syntax.
    pub fn to_text(&self) -> String {
        let p = &self.preprocess;
        let split = match self.split {
            SplitMode::Patient => "patient",
            SplitMode::Slice => "slice",
        };
        let values = [
            self.window.center.to_string(),
            self.window.width.to_string(),
            p.blackout_fraction.to_string(),
            p.band_lo.to_string(),
            p.band_hi.to_string(),
            p.strip_width_fraction.to_string(),
            p.cleanup_radius_close.to_string(),
            p.cleanup_radius_open.to_string(),
            self.disk_radius.to_string(),
            self.train.n_trees.to_string(),
            self.train.min_leaf.to_string(),
            self.train.max_depth.to_string(),
            self.train.seed.to_string(),
            self.cv_folds.to_string(),
            self.train_fraction.to_string(),
            split.to_string(),
            self.output_dir.display().to_string(),
            self.pgm_slice_thickness_mm.to_string(),
            format!("{},{}", self.pgm_pixel_spacing_mm.0, self.pgm_pixel_spacing_mm.1),
            self.threads.to_string(),
        ];
        let mut s = String::new();
        for ((key, _), value) in Self::KEYS.iter().zip(values) {
            let _ = writeln!(s, "{key} = {value}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_key_table() {
        let mut from_table = PipelineConfig::default();
        for (k, v) in PipelineConfig::KEYS {
            from_table.set(k, v).unwrap();
        }
        assert_eq!(from_table, PipelineConfig::default());
    }

    #[test]
    fn text_round_trip() {
        let cfg = PipelineConfig::parse_text("seed = 7 # comment\n\nsplit=slice\npgm_pixel_spacing_mm = 0.7, 0.8\n").unwrap();
        assert_eq!(cfg.train.seed, 7);
        assert_eq!(cfg.split, SplitMode::Slice);
        assert_eq!(cfg.pgm_pixel_spacing_mm, (0.7, 0.8));
        assert_eq!(PipelineConfig::parse_text(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PipelineConfig::parse_text("nope = 1").is_err());
        assert!(PipelineConfig::parse_text("seed").is_err());
        assert!(PipelineConfig::parse_text("band_lo = 140").is_err());
        assert!(PipelineConfig::parse_text("disk_radius = x").is_err());
    }
}
