//! Argument parsers and the configuration error type. A [`ConfigError`]
//! maps to exit status 2; everything else that fails maps to 1.

use std::fmt;

use hyperpoly::{BernsteinFn, LevySpec, PolyFamily};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Bail out with a [`ConfigError`] unless `cond` holds.
pub fn require(cond: bool, msg: impl FnOnce() -> String) -> anyhow::Result<()> {
    if cond {
        Ok(())
    } else {
        Err(config_error(msg()))
    }
}

/// Strictly increasing list of degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees(pub Vec<usize>);

/// `a..b` (inclusive), `a,b,c`, or a single degree.
pub fn parse_degrees(s: &str) -> Result<Degrees, String> {
    let bad = |e: std::num::ParseIntError| format!("bad degree in {s:?}: {e}");
    let ns: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(bad)?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(bad)?;
        if lo > hi {
            return Err(format!("empty degree range {s:?}"));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(bad)).collect::<Result<_, _>>()?
    };
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("degrees must increase in {s:?}"));
    }
    Ok(Degrees(ns))
}

/// Inline triplet JSON (`{"a":0,"b":0.5}`) or a catalogue name: `sqrt`,
/// `identity`, `drift:B`, `stable:THETA`, `tempered:THETA:KAPPA`.
pub fn parse_bernstein(s: &str) -> Result<BernsteinFn, String> {
    let s = s.trim();
    if s.starts_with('{') {
        return BernsteinFn::json_parse(s).map_err(|e| e.to_string());
    }
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("bad number {t:?} in {s:?}: {e}"));
    let f = match parts.as_slice() {
        ["sqrt"] => Ok(BernsteinFn::sqrt()),
        ["identity"] => BernsteinFn::drift(1.0),
        ["drift", b] => BernsteinFn::drift(num(b)?),
        ["stable", theta] => BernsteinFn::stable(0.0, num(theta)?),
        ["tempered", theta, kappa] => BernsteinFn::new(
            0.0,
            0.0,
            LevySpec::TemperedStable {
                theta: num(theta)?,
                kappa: num(kappa)?,
            },
        ),
        _ => {
            return Err(format!(
                "unknown Bernstein function {s:?}; use JSON or sqrt, identity, drift:B, stable:THETA, tempered:THETA:KAPPA"
            ))
        }
    };
    f.map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum FamilyName {
    Hermite,
    Laguerre,
}

impl FamilyName {
    pub fn family(self, alpha: f64) -> anyhow::Result<PolyFamily> {
        match self {
            FamilyName::Hermite => Ok(PolyFamily::Hermite),
            FamilyName::Laguerre => PolyFamily::laguerre(alpha).map_err(|e| config_error(e.to_string())),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FamilyName::Hermite => "hermite",
            FamilyName::Laguerre => "laguerre",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Expectation {
    Bounded,
    BlowUp,
}
