use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::nodeset::Domain;
use crate::respower::{FilterTargets, KmRule, Quadrature};
use crate::solver::{AdCase, SolverOptions, TimestepRule};
use crate::weights::Scheme;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Convergence,
    Respower,
    Stability,
    Pde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PdeSystem {
    PoissonPeriodic,
    PoissonDisc,
    AdvectionDiffusion,
    Burgers,
}

impl PdeSystem {
    pub fn name(self) -> &'static str {
        match self {
            PdeSystem::PoissonPeriodic => "poisson-periodic",
            PdeSystem::PoissonDisc => "poisson-disc",
            PdeSystem::AdvectionDiffusion => "advection-diffusion",
            PdeSystem::Burgers => "burgers",
        }
    }

    pub fn is_steady(self) -> bool {
        matches!(self, PdeSystem::PoissonPeriodic | PdeSystem::PoissonDisc)
    }
}

fn default_re() -> f64 {
    1.0
}

fn default_advection() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_modes() -> usize {
    3
}

fn default_terms() -> usize {
    40
}

fn default_one() -> usize {
    1
}

fn default_case() -> AdCase {
    AdCase::Axis
}

/// One PDE benchmark of a plan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdeConfig {
    pub system: PdeSystem,
    #[serde(default = "default_case")]
    pub case: AdCase,
    #[serde(default = "default_re")]
    pub re: f64,
    #[serde(default)]
    pub end_time: f64,
    #[serde(default = "default_advection")]
    pub advection: [f64; 2],
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_terms")]
    pub terms: usize,
    /// Apply the order-8 filter after every step.
    #[serde(default)]
    pub filter: bool,
    #[serde(default)]
    pub filter_targets: Option<FilterTargets>,
    #[serde(default)]
    pub rule: TimestepRule,
    #[serde(default = "default_one")]
    pub record_every: usize,
}

impl PdeConfig {
    /// Defaults for everything but the system; transient systems still need
    /// `end_time`.
    pub fn new(system: PdeSystem) -> Self {
        PdeConfig {
            system,
            case: default_case(),
            re: default_re(),
            end_time: 0.0,
            advection: default_advection(),
            modes: default_modes(),
            terms: default_terms(),
            filter: false,
            filter_targets: None,
            rule: TimestepRule::default(),
            record_every: default_one(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self.system {
            PdeSystem::PoissonDisc => Domain::disc(1.0),
            PdeSystem::AdvectionDiffusion => Domain::periodic_square(self.case.side()),
            _ => Domain::unit_square(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.re > 0.0) {
            return Err(Error::Config(format!("Re must be positive, got {}", self.re)));
        }
        if !self.system.is_steady() && !(self.end_time > 0.0) {
            return Err(Error::Config(format!("{} needs end_time > 0", self.system.name())));
        }
        if self.system == PdeSystem::AdvectionDiffusion && self.modes == 0 {
            return Err(Error::Config("advection-diffusion needs at least one mode".into()));
        }
        Ok(())
    }
}

fn default_seeds() -> Vec<u64> {
    vec![1]
}

fn default_samples() -> usize {
    50
}

/// A declarative experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub kind: ExperimentKind,
    pub schemes: Vec<Scheme>,
    /// Node spacings; eigen studies default to the 441-node set.
    #[serde(default)]
    pub spacings: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Overrides the per-experiment `k_M` choice.
    #[serde(default)]
    pub k_m: Option<KmRule>,
    #[serde(default)]
    pub quadrature: Quadrature,
    /// Samples per resolving-power ray.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub solver: Option<SolverOptions>,
    #[serde(default)]
    pub pde: Vec<PdeConfig>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(kind: ExperimentKind, schemes: Vec<Scheme>, spacings: Vec<f64>) -> Self {
        ExperimentPlan {
            kind,
            schemes,
            spacings,
            seeds: default_seeds(),
            k_m: None,
            quadrature: Quadrature::default(),
            samples: default_samples(),
            solver: None,
            pde: Vec::new(),
            output: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("plan lists no schemes".into()));
        }
        for s in &self.schemes {
            s.validate()?;
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("plan lists no seeds".into()));
        }
        if self.kind != ExperimentKind::Stability && self.spacings.is_empty() {
            return Err(Error::Config("plan lists no spacings".into()));
        }
        if let Some(s) = self.spacings.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::Config(format!("invalid spacing {s}")));
        }
        if self.kind == ExperimentKind::Pde {
            if self.pde.is_empty() {
                return Err(Error::Config("pde plan lists no systems".into()));
            }
            for p in &self.pde {
                p.validate()?;
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical serialisation, as lowercase hex.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).unwrap_or_default();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
