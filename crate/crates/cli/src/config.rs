//! Scenario files.
//!
//! A scenario is a TOML document. The `mode` key selects what is computed and
//! which parameter blocks must be present; see the book chapter on scenarios
//! for the full grammar.

use std::path::{Path, PathBuf};

use cl_momentum::quad::linspace;
use cl_momentum::{
    CatStateSpec, DetectorWindow, EnvironmentParams, GaussianPacketSpec, LinearPotential,
    StatisticsFlavor, TwoParticleState,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SinglePacket,
    Cat,
    TwoParticle,
    OracleCheck,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::SinglePacket => "single-packet",
            Mode::Cat => "cat",
            Mode::TwoParticle => "two-particle",
            Mode::OracleCheck => "oracle-check",
        }
    }
}

/// Sample points, either listed or as an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Samples {
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Samples {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Samples::List(v) => v.clone(),
            Samples::Range { start, stop, count } => linspace(*start, *stop, *count),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentBlock {
    pub gamma: f64,
    #[serde(rename = "kBT")]
    pub kbt: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub hbar: f64,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialBlock {
    #[serde(default)]
    pub g: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PacketBlock {
    #[serde(default)]
    pub x0: f64,
    pub p0: f64,
    pub sigma0: f64,
    #[serde(default)]
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CatBlock {
    pub p0: f64,
    pub sigma0: f64,
    #[serde(default)]
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OneParticleBlock {
    pub p0: f64,
    pub sigma0: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WindowBlock {
    #[serde(default)]
    pub center: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairBlock {
    pub phi: OneParticleBlock,
    pub chi: OneParticleBlock,
    /// Subset of `MB`, `BE`, `FD`; all three when omitted.
    #[serde(default)]
    pub flavors: Option<Vec<String>>,
    /// Fixed momentum of the first particle in the joint-density output.
    #[serde(default)]
    pub p1: f64,
    #[serde(default)]
    pub window: Option<WindowBlock>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    pub u: Samples,
    pub v: Samples,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    #[serde(default = "zero_slice")]
    pub v: Samples,
    #[serde(default)]
    pub n_u: Option<usize>,
    #[serde(default)]
    pub dt: Option<f64>,
}

impl Default for OracleBlock {
    fn default() -> Self {
        Self {
            v: zero_slice(),
            n_u: None,
            dt: None,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn zero_slice() -> Samples {
    Samples::List(vec![0.0])
}

/// Raw scenario as written in the file.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub mode: Mode,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub environment: EnvironmentBlock,
    #[serde(default)]
    pub potential: PotentialBlock,
    pub times: Samples,
    #[serde(default)]
    pub momenta: Option<Samples>,
    #[serde(default)]
    pub packet: Option<PacketBlock>,
    #[serde(default)]
    pub cat: Option<CatBlock>,
    #[serde(default)]
    pub pair: Option<PairBlock>,
    #[serde(default)]
    pub map: Option<MapBlock>,
    #[serde(default)]
    pub oracle: Option<OracleBlock>,
}

/// What a validated scenario evolves.
#[derive(Debug, Clone)]
pub enum Subject {
    Packet(GaussianPacketSpec),
    Cat(CatStateSpec),
    Pair {
        states: Vec<TwoParticleState>,
        p1: f64,
        window: Option<DetectorWindow>,
    },
}

/// Oracle grid overrides and `v` slices.
#[derive(Debug, Clone)]
pub struct OracleSettings {
    pub v: Vec<f64>,
    pub n_u: Option<usize>,
    pub dt: Option<f64>,
}

/// A scenario whose parameters have all been checked.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub mode: Mode,
    pub output: Option<PathBuf>,
    pub env: EnvironmentParams,
    pub potential: LinearPotential,
    pub times: Vec<f64>,
    pub momenta: Vec<f64>,
    pub subject: Subject,
    pub map: Option<(Vec<f64>, Vec<f64>)>,
    pub oracle: OracleSettings,
    /// The parsed file, echoed into the run manifest.
    pub raw: ScenarioConfig,
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Re-labels a model constructor error with the path of the offending field.
fn in_block<T>(block: &str, r: cl_momentum::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        cl_momentum::Error::InvalidParameter { name, reason } => invalid(format!("{block}.{name}"), reason),
        other => invalid(block, other.to_string()),
    })
}

fn checked_samples(field: &str, samples: &Samples, sorted: bool) -> Result<Vec<f64>, CliError> {
    if let Samples::Range { count, start, stop } = samples {
        if *count < 2 {
            return Err(invalid(format!("{field}.count"), format!("must be >= 2, got {count}")));
        }
        if !(start < stop) {
            return Err(invalid(field, format!("needs start < stop, got {start} .. {stop}")));
        }
    }
    let values = samples.values();
    if values.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
        return Err(invalid(field, format!("contains a non-finite value {bad}")));
    }
    if sorted && values.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid(field, "must be sorted in ascending order"));
    }
    Ok(values)
}

fn flavor_list(field: &str, names: &Option<Vec<String>>) -> Result<Vec<StatisticsFlavor>, CliError> {
    let Some(names) = names else {
        return Ok(StatisticsFlavor::ALL.to_vec());
    };
    if names.is_empty() {
        return Err(invalid(field, "must name at least one of MB, BE, FD"));
    }
    let mut out = Vec::new();
    for n in names {
        let f: StatisticsFlavor = n
            .parse()
            .map_err(|_| invalid(field, format!("unknown flavor `{n}` (expected MB, BE or FD)")))?;
        if out.contains(&f) {
            return Err(invalid(field, format!("lists `{n}` twice")));
        }
        out.push(f);
    }
    Ok(out)
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Checks the scenario against its mode and builds the model values.
    pub fn validate(self) -> Result<Scenario, CliError> {
        let e = &self.environment;
        let env = in_block("environment", EnvironmentParams::new(e.gamma, e.kbt, e.mass, e.hbar))?;
        let potential = in_block("potential", LinearPotential::new(self.potential.g))?;
        let times = checked_samples("times", &self.times, true)?;
        if let Some(t) = times.iter().find(|&&t| t < 0.0) {
            return Err(invalid("times", format!("must be >= 0, got {t}")));
        }

        let present = [
            ("packet", self.packet.is_some()),
            ("cat", self.cat.is_some()),
            ("pair", self.pair.is_some()),
        ];
        let wanted = match self.mode {
            Mode::SinglePacket => Some("packet"),
            Mode::Cat => Some("cat"),
            Mode::TwoParticle => Some("pair"),
            Mode::OracleCheck => None,
        };
        match wanted {
            Some(block) => {
                if !present.iter().any(|&(b, p)| b == block && p) {
                    return Err(invalid(block, format!("is required in {} mode", self.mode.name())));
                }
                if let Some((extra, _)) = present.iter().find(|&&(b, p)| p && b != block) {
                    return Err(invalid(*extra, format!("is not used in {} mode", self.mode.name())));
                }
            }
            None => {
                let count = present.iter().filter(|(_, p)| *p).count();
                if count != 1 {
                    return Err(invalid(
                        "mode",
                        "oracle-check needs exactly one of the packet, cat or pair blocks",
                    ));
                }
            }
        }
        if self.oracle.is_some() && self.mode != Mode::OracleCheck {
            return Err(invalid("oracle", format!("is not used in {} mode", self.mode.name())));
        }
        if self.map.is_some() && self.mode != Mode::Cat {
            return Err(invalid("map", "is only used in cat mode"));
        }

        let momenta = match (&self.momenta, self.mode) {
            (Some(m), _) => checked_samples("momenta", m, false)?,
            (None, Mode::OracleCheck) => Vec::new(),
            (None, mode) => return Err(invalid("momenta", format!("is required in {} mode", mode.name()))),
        };

        let subject = if let Some(p) = &self.packet {
            Subject::Packet(in_block("packet", GaussianPacketSpec::new(p.x0, p.p0, p.sigma0, p.eta))?)
        } else if let Some(c) = &self.cat {
            let cat = in_block("cat", CatStateSpec::new(c.p0, c.sigma0, c.eta))?;
            if cat.p0 == 0.0 {
                return Err(invalid("cat.p0", "must be non-zero for a superposition of two packets"));
            }
            Subject::Cat(cat)
        } else {
            let p = self.pair.as_ref().expect("block presence checked above");
            let phi = in_block("pair.phi", GaussianPacketSpec::minimal(p.phi.p0, p.phi.sigma0))?;
            let chi = in_block("pair.chi", GaussianPacketSpec::minimal(p.chi.p0, p.chi.sigma0))?;
            let states = flavor_list("pair.flavors", &p.flavors)?
                .into_iter()
                .map(|f| in_block("pair", TwoParticleState::new(phi, chi, f)))
                .collect::<Result<Vec<_>, _>>()?;
            if !p.p1.is_finite() {
                return Err(invalid("pair.p1", "must be finite"));
            }
            let window = match &p.window {
                Some(w) => Some(in_block("pair.window", DetectorWindow::new(w.center, w.width))?),
                None => None,
            };
            Subject::Pair {
                states,
                p1: p.p1,
                window,
            }
        };

        let map = match &self.map {
            Some(m) => Some((checked_samples("map.u", &m.u, true)?, checked_samples("map.v", &m.v, true)?)),
            None => None,
        };

        let o = self.oracle.clone().unwrap_or_default();
        let oracle = OracleSettings {
            v: checked_samples("oracle.v", &o.v, false)?,
            n_u: o.n_u,
            dt: o.dt,
        };
        if let Some(n) = oracle.n_u {
            if n < 64 {
                return Err(invalid("oracle.n_u", format!("must be >= 64, got {n}")));
            }
        }
        if let Some(dt) = oracle.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(invalid("oracle.dt", format!("must be > 0, got {dt}")));
            }
        }

        Ok(Scenario {
            mode: self.mode,
            output: self.output.clone(),
            env,
            potential,
            times,
            momenta,
            subject,
            map,
            oracle,
            raw: self,
        })
    }
}

/// Reads, parses and validates a scenario file.
pub fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_toml(&text)
        .map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?
        .validate()
}
