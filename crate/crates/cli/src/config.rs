//! Run configuration: command-line flags merged over an optional key=value
//! file.

use eiszero::zero_locator::{Convention, LocateOptions};
use eiszero::{Error, Result};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub svg: bool,
    pub json: bool,
}

impl Formats {
    pub fn parse(s: &str) -> Result<Self> {
        let mut f = Formats::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "svg" => f.svg = true,
                "json" => f.json = true,
                other => return Err(Error::Config(format!("unknown format {other:?}"))),
            }
        }
        Ok(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Eisenstein,
    Hauptmodul,
}

/// Settings as given, before defaults. Every field is optional so a file
/// and the flags can be layered.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub group: Option<String>,
    pub weights: Option<String>,
    pub precision: Option<u32>,
    pub trunc: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub jobs: Option<usize>,
    pub delta_geom: Option<f64>,
    pub delta_imag: Option<f64>,
    pub convention: Option<String>,
    pub form: Option<String>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
            map.insert(k.trim().replace('-', "_"), v.trim().to_string());
        }
        let mut s = Settings::default();
        for (k, v) in map {
            match k.as_str() {
                "group" => s.group = Some(v),
                "weights" => s.weights = Some(v),
                "precision" => s.precision = Some(parse_num(&k, &v)?),
                "trunc" => s.trunc = Some(parse_num(&k, &v)?),
                "out" => s.out = Some(PathBuf::from(v)),
                "format" => s.format = Some(v),
                "jobs" => s.jobs = Some(parse_num(&k, &v)?),
                "delta_geom" => s.delta_geom = Some(parse_num(&k, &v)?),
                "delta_imag" => s.delta_imag = Some(parse_num(&k, &v)?),
                "convention" => s.convention = Some(v),
                "form" => s.form = Some(v),
                _ => return Err(Error::Config(format!("unknown key {k:?}"))),
            }
        }
        Ok(s)
    }

    /// Fields set in `over` replace those here.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            group: over.group.or(self.group),
            weights: over.weights.or(self.weights),
            precision: over.precision.or(self.precision),
            trunc: over.trunc.or(self.trunc),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            jobs: over.jobs.or(self.jobs),
            delta_geom: over.delta_geom.or(self.delta_geom),
            delta_imag: over.delta_imag.or(self.delta_imag),
            convention: over.convention.or(self.convention),
            form: over.form.or(self.form),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub groups: Vec<String>,
    pub weights: Vec<u32>,
    pub precision: u32,
    pub trunc: usize,
    pub out: Option<PathBuf>,
    pub formats: Formats,
    pub jobs: Option<usize>,
    pub delta_geom: Option<f64>,
    pub delta_imag: Option<f64>,
    pub convention: Convention,
    pub form: FormKind,
}

/// Parses `A`, `A..B` or `A..B/step`, comma-separated. Weights must be even
/// and at least 4.
pub fn parse_weights(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (range, step) = match part.split_once('/') {
            Some((r, st)) => (r, parse_num::<u32>("weights", st)?),
            None => (part, 2),
        };
        if step == 0 {
            return Err(Error::Config("weights: step must be positive".into()));
        }
        match range.split_once("..") {
            Some((a, b)) => {
                let a: u32 = parse_num("weights", a)?;
                let b: u32 = parse_num("weights", b)?;
                if b < a {
                    return Err(Error::Config(format!("weights: empty range {part}")));
                }
                out.extend((a..=b).step_by(step as usize));
            }
            None => out.push(parse_num("weights", range)?),
        }
    }
    if out.is_empty() {
        return Err(Error::Config("weights: none given".into()));
    }
    if let Some(w) = out.iter().find(|&&w| w < 4 || w % 2 == 1) {
        return Err(Error::Config(format!("weights: {w} is not an even integer >= 4")));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl RunConfig {
    pub fn resolve(s: Settings, default_weights: Option<&str>) -> Result<Self> {
        let groups: Vec<String> = s
            .group
            .as_deref()
            .unwrap_or("")
            .split(',')
            .map(|g| g.trim().to_string())
            .filter(|g| !g.is_empty())
            .collect();
        let weights = match s.weights.as_deref().or(default_weights) {
            Some(w) => parse_weights(w)?,
            None => Vec::new(),
        };
        let precision = s.precision.unwrap_or(128);
        if precision < 64 {
            return Err(Error::Config(format!("precision {precision} is below 64 bits")));
        }
        let convention = match s.convention.as_deref() {
            None => Convention::WINDING,
            Some(c) => Convention::parse(c).ok_or_else(|| Error::Config(format!("unknown convention {c:?}")))?,
        };
        let form = match s.form.as_deref() {
            None | Some("eisenstein") => FormKind::Eisenstein,
            Some("hauptmodul") => FormKind::Hauptmodul,
            Some(f) => return Err(Error::Config(format!("unknown form {f:?}"))),
        };
        if s.jobs == Some(0) {
            return Err(Error::Config("jobs must be positive".into()));
        }
        Ok(RunConfig {
            groups,
            weights,
            precision,
            trunc: s.trunc.unwrap_or(100),
            out: s.out,
            formats: Formats::parse(s.format.as_deref().unwrap_or("csv"))?,
            jobs: s.jobs,
            delta_geom: s.delta_geom,
            delta_imag: s.delta_imag,
            convention,
            form,
        })
    }

    pub fn locate_options(&self) -> LocateOptions {
        LocateOptions {
            precision: self.precision,
            trunc: self.trunc.max(8),
            delta_geom: self.delta_geom,
            delta_imag: self.delta_imag,
        }
    }

    pub fn require_groups(&self, n: Option<usize>) -> Result<()> {
        match n {
            _ if self.groups.is_empty() => Err(Error::Config("no group given".into())),
            Some(k) if self.groups.len() != k => {
                Err(Error::Config(format!("expected {k} group(s), got {}", self.groups.len())))
            }
            _ => Ok(()),
        }
    }

    pub fn require_weights(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::Config("no weights given".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_ranges() {
        assert_eq!(parse_weights("4..12").unwrap(), vec![4, 6, 8, 10, 12]);
        assert_eq!(parse_weights("4..20/4").unwrap(), vec![4, 8, 12, 16, 20]);
        assert_eq!(parse_weights("12").unwrap(), vec![12]);
        assert_eq!(parse_weights("1000").unwrap(), vec![1000]);
        assert_eq!(parse_weights("8,4,4..6").unwrap(), vec![4, 6, 8]);
        assert!(parse_weights("3").is_err());
        assert!(parse_weights("4..10/3").is_err());
        assert!(parse_weights("12..4").is_err());
        assert!(parse_weights("x").is_err());
    }

    #[test]
    fn file_then_flags() {
        let file = Settings::from_text("group = SL2Z\nweights=4..8 # comment\nprecision=96\n").unwrap();
        let flags = Settings { weights: Some("12".into()), ..Default::default() };
        let cfg = RunConfig::resolve(file.overlay(flags), None).unwrap();
        assert_eq!(cfg.groups, vec!["SL2Z"]);
        assert_eq!(cfg.weights, vec![12]);
        assert_eq!(cfg.precision, 96);
    }

    #[test]
    fn bad_settings() {
        assert!(Settings::from_text("nonsense").is_err());
        assert!(Settings::from_text("colour=red").is_err());
        let low = Settings { precision: Some(32), ..Default::default() };
        assert!(RunConfig::resolve(low, None).is_err());
        assert!(Formats::parse("csv,png").is_err());
        assert_eq!(Formats::parse("svg,json").unwrap(), Formats { csv: false, svg: true, json: true });
    }
}
