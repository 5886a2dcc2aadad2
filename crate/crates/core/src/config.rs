//! Plain-text `key = value` run configuration.

use crate::error::{Error, Result};
use crate::twistedop::SolverMode;
use serde::Serialize;
use std::fmt::Write;
use std::str::FromStr;

/// Experiment selected by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Mesh,
    Forms,
    Lattice,
    Spectrum,
    Trace,
    Weyl,
    Radial,
    VerifyAll,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Mesh,
        Command::Forms,
        Command::Lattice,
        Command::Spectrum,
        Command::Trace,
        Command::Weyl,
        Command::Radial,
        Command::VerifyAll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Mesh => "mesh",
            Command::Forms => "forms",
            Command::Lattice => "lattice",
            Command::Spectrum => "spectrum",
            Command::Trace => "trace",
            Command::Weyl => "weyl",
            Command::Radial => "radial",
            Command::VerifyAll => "verify-all",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidConfig { key: "command".into(), message: format!("unknown command {s:?}") })
    }
}

/// Band half-width around the window endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaPolicy {
    /// `4000 c h` with `c` the sup norm of the form.
    Auto,
    Value(f64),
}

impl DeltaPolicy {
    pub fn resolve(self, c: f64, h: f64) -> f64 {
        match self {
            DeltaPolicy::Auto => 4000.0 * c * h,
            DeltaPolicy::Value(d) => d,
        }
    }
}

/// Every setting of a run. Unset keys take the defaults of [`RunConfig::default`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    /// Mesh subdivision level; for `verify-all`, the level of the checks
    /// that do not fix their own.
    pub level: usize,
    /// Semiclassical parameter.
    pub h: f64,
    /// Heat times for `trace`.
    pub t: Vec<f64>,
    /// Spectral window `[a, b]`.
    pub a: f64,
    pub b: f64,
    pub delta: DeltaPolicy,
    /// Periods of the harmonic form along the four generator loops.
    pub form: [f64; 4],
    /// Subdivision level of the geometric-side quadrature.
    pub quad_level: usize,
    /// Truncation tolerance of the geometric side.
    pub tail_tol: f64,
    /// Quadrature level of the radial averages.
    pub radial_quad_level: usize,
    /// Averaging radius for `radial`.
    pub radius: f64,
    /// Enumeration radius for `lattice`.
    pub lattice_radius: f64,
    pub basepoint: [f64; 2],
    pub samples: usize,
    pub solver: SolverMode,
    /// Number of eigenvalues for `spectrum` (0 = all).
    pub count: usize,
    pub tol: f64,
    pub seed: u64,
    /// Output directory.
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::VerifyAll,
            level: 3,
            h: 1.0,
            t: vec![1.0],
            a: 0.0,
            b: 10.0,
            delta: DeltaPolicy::Auto,
            form: [0.0; 4],
            quad_level: 4,
            tail_tol: 1e-6,
            radial_quad_level: 1,
            radius: 2.0,
            lattice_radius: 8.0,
            basepoint: [0.0, 1.0],
            samples: 50,
            solver: SolverMode::Dense,
            count: 30,
            tol: 1e-8,
            seed: 0,
            out: "out".into(),
        }
    }
}

fn bad(key: &str, message: impl Into<String>) -> Error {
    Error::InvalidConfig { key: key.into(), message: message.into() }
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| bad(key, format!("cannot parse {v:?}")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| num::<f64>(key, s)).collect()
}

fn finite(key: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, "value must be finite"))
    }
}

fn positive(key: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(bad(key, format!("value must be positive, got {x}")))
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Sets one key. The `threads` key is accepted and ignored (it only
    /// affects speed and is read from the environment).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "command" => self.command = v.parse()?,
            "level" => self.level = num(key, v)?,
            "h" => self.h = positive(key, num(key, v)?)?,
            "t" => {
                let t = list(key, v)?;
                for x in &t {
                    positive(key, *x)?;
                }
                self.t = t;
            }
            "a" => self.a = finite(key, num(key, v)?)?,
            "b" => self.b = finite(key, num(key, v)?)?,
            "delta" => {
                self.delta = if v == "auto" { DeltaPolicy::Auto } else { DeltaPolicy::Value(positive(key, num(key, v)?)?) }
            }
            "form" => {
                let f = list(key, v)?;
                if f.len() != 4 {
                    return Err(bad(key, format!("expected 4 periods, got {}", f.len())));
                }
                for x in &f {
                    finite(key, *x)?;
                }
                self.form = [f[0], f[1], f[2], f[3]];
            }
            "quad_level" => self.quad_level = num(key, v)?,
            "tail_tol" => self.tail_tol = positive(key, num(key, v)?)?,
            "radial_quad_level" => self.radial_quad_level = num(key, v)?,
            "radius" => self.radius = positive(key, num(key, v)?)?,
            "lattice_radius" => self.lattice_radius = positive(key, num(key, v)?)?,
            "basepoint" => {
                let p = list(key, v)?;
                if p.len() != 2 {
                    return Err(bad(key, format!("expected x,y, got {} values", p.len())));
                }
                if !(p[1] > 0.0) || !p[0].is_finite() || !p[1].is_finite() {
                    return Err(bad(key, format!("basepoint must lie in the upper half-plane (y > 0), got y = {}", p[1])));
                }
                self.basepoint = [p[0], p[1]];
            }
            "samples" => self.samples = num(key, v)?,
            "solver" => self.solver = v.parse().map_err(|_| bad(key, format!("unknown solver mode {v:?}")))?,
            "count" => self.count = num(key, v)?,
            "tol" => self.tol = positive(key, num(key, v)?)?,
            "seed" => self.seed = num(key, v)?,
            "out" => self.out = v.to_string(),
            "threads" => {
                num::<usize>(key, v)?;
            }
            _ => return Err(bad(key, "unknown key")),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(line, "expected `key = value`"))?;
            self.set(k.trim(), v)?;
        }
        self.validate()
    }

    /// Cross-key checks.
    pub fn validate(&self) -> Result<()> {
        if self.b < self.a {
            return Err(bad("b", format!("window [{}, {}] is empty", self.a, self.b)));
        }
        if self.samples == 0 {
            return Err(bad("samples", "need at least one sample"));
        }
        Ok(())
    }

    /// Canonical text form; [`RunConfig::parse`] inverts it exactly.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let delta = match self.delta {
            DeltaPolicy::Auto => "auto".to_string(),
            DeltaPolicy::Value(d) => format!("{d:?}"),
        };
        let solver = match self.solver {
            SolverMode::Dense => "dense",
            SolverMode::Iterative => "iterative",
        };
        let rows: [(&str, String); 20] = [
            ("command", self.command.name().into()),
            ("level", self.level.to_string()),
            ("h", format!("{:?}", self.h)),
            ("t", join(&self.t)),
            ("a", format!("{:?}", self.a)),
            ("b", format!("{:?}", self.b)),
            ("delta", delta),
            ("form", join(&self.form)),
            ("quad_level", self.quad_level.to_string()),
            ("tail_tol", format!("{:?}", self.tail_tol)),
            ("radial_quad_level", self.radial_quad_level.to_string()),
            ("radius", format!("{:?}", self.radius)),
            ("lattice_radius", format!("{:?}", self.lattice_radius)),
            ("basepoint", join(&self.basepoint)),
            ("samples", self.samples.to_string()),
            ("solver", solver.into()),
            ("count", self.count.to_string()),
            ("tol", format!("{:?}", self.tol)),
            ("seed", self.seed.to_string()),
            ("out", self.out.clone()),
        ];
        for (k, v) in rows {
            writeln!(s, "{k} = {v}").unwrap();
        }
        s
    }
}
