use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cone::KSequence;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Widths,
    Rips,
    Iet,
    Section,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Widths => "widths",
            Command::Rips => "rips",
            Command::Iet => "iet",
            Command::Section => "section",
            Command::Verify => "verify",
        }
    }
}

/// Plane levels for `section`: a random count or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Levels {
    Count { count: usize },
    List { list: Vec<f64> },
}

/// Deliberate corruption of one entry of the `R(k)` table, for testing `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fault {
    pub k: u64,
    pub row: usize,
    pub col: usize,
    pub delta: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub ks: KSequence,
    pub depth: usize,
    pub precision: u32,
    /// Hilbert-diameter tolerance for `widths`.
    pub tolerance: f64,
    pub seed: u64,
    pub jitter: bool,
    pub levels: Levels,
    pub per_level: usize,
    pub radius: usize,
    /// Tracer steps per section curve.
    pub steps: usize,
    pub box_half: i64,
    pub svg: bool,
    pub polyline: bool,
    /// Area certificates are computed for this many Rips steps.
    pub rips_steps: usize,
    /// The machine itself runs (and is checked) on the first `machine_steps` of them.
    pub machine_steps: usize,
    pub lengths: [u64; 4],
    pub orbit_steps: usize,
    /// Orbit start as a fraction of the first transversal.
    pub orbit_start: f64,
    /// Equidistribution bins per unit `w1`.
    pub bins_per_w1: f64,
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            ks: KSequence::Doubling { k0: 2 },
            depth: 24,
            precision: 128,
            tolerance: 1e-12,
            seed: 1,
            jitter: false,
            levels: Levels::Count { count: 20 },
            per_level: 3,
            radius: 200,
            steps: 100_000,
            box_half: 400,
            svg: true,
            polyline: false,
            rips_steps: 15,
            machine_steps: 8,
            lengths: [1, 1, 1, 1],
            orbit_steps: 100_000,
            orbit_start: 0.381_966_011_250_105,
            bins_per_w1: 300.0,
            fault: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Configuration(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Configuration(m.to_string()));
        self.ks.validate()?;
        if self.depth == 0 || self.precision < 64 {
            return bad("depth must be positive and precision at least 64 bits");
        }
        if !(self.tolerance > 0.0) || !(self.bins_per_w1 > 0.0) {
            return bad("tolerance and bins_per_w1 must be positive");
        }
        if self.per_level == 0 || self.radius == 0 || self.steps == 0 || self.box_half <= 0 || self.orbit_steps == 0 {
            return bad("per_level, radius, steps, box_half and orbit_steps must be positive");
        }
        if self.lengths.contains(&0) {
            return bad("lengths must be positive");
        }
        if !(0.0..1.0).contains(&self.orbit_start) {
            return bad("orbit_start must lie in [0, 1)");
        }
        if let Levels::List { list } = &self.levels {
            if list.iter().any(|a| !a.is_finite()) {
                return bad("levels must be finite");
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
