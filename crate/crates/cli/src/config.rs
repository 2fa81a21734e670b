//! Config file schema and validation.
//!
//! Configs are JSON with a `command` field that must match the CLI
//! subcommand. Unknown keys and duplicate keys are rejected; range errors
//! are collected and reported together.

use agglab_core::{InitialCondition, KernelSpec, MassInit, MassLaw, MomentumInit, SimConfig};
use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::Deserialize;
use std::collections::HashSet;
use std::fmt;

#[derive(Debug)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, e) in self.0.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "config error: {e}")?;
        }
        Ok(())
    }
}

/// Deserializes any JSON value while rejecting duplicate object keys
/// (serde_json alone silently keeps the last occurrence).
struct DupCheck;

impl<'de> Deserialize<'de> for DupCheck {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = DupCheck;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("any JSON value")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<DupCheck, A::Error> {
                let mut seen = HashSet::new();
                while let Some(key) = map.next_key::<String>()? {
                    if !seen.insert(key.clone()) {
                        return Err(de::Error::custom(format!("duplicate key \"{key}\"")));
                    }
                    map.next_value::<DupCheck>()?;
                }
                Ok(DupCheck)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<DupCheck, A::Error> {
                while seq.next_element::<DupCheck>()?.is_some() {}
                Ok(DupCheck)
            }

            fn visit_bool<E>(self, _: bool) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
            fn visit_i64<E>(self, _: i64) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
            fn visit_u64<E>(self, _: u64) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
            fn visit_f64<E>(self, _: f64) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
            fn visit_str<E>(self, _: &str) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
            fn visit_unit<E>(self) -> Result<DupCheck, E> {
                Ok(DupCheck)
            }
        }
        deserializer.deserialize_any(V)
    }
}

#[derive(Debug, Deserialize)]
struct CommandProbe {
    command: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelCfg {
    Constant,
    ImpulsionPower { gamma: f64 },
    HardSphere,
    Manev,
    MassOnly { law: MassLawCfg },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassLawCfg {
    Constant,
    Sum,
    Product,
}

impl KernelCfg {
    pub fn to_kernel(&self) -> KernelSpec {
        match self {
            KernelCfg::Constant => KernelSpec::Constant,
            KernelCfg::ImpulsionPower { gamma } => KernelSpec::ImpulsionPower { gamma: *gamma },
            KernelCfg::HardSphere => KernelSpec::HardSphere,
            KernelCfg::Manev => KernelSpec::Manev,
            KernelCfg::MassOnly { law } => KernelSpec::MassOnly {
                law: match law {
                    MassLawCfg::Constant => MassLaw::Constant,
                    MassLawCfg::Sum => MassLaw::Sum,
                    MassLawCfg::Product => MassLaw::Product,
                },
            },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MassInitCfg {
    Monodisperse { m0: f64 },
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MomentumInitCfg {
    Gaussian { sigma: f64 },
    Samples { list: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitCfg {
    pub mass: MassInitCfg,
    pub momentum: MomentumInitCfg,
    #[serde(default)]
    pub symmetrize: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateCfg {
    #[allow(dead_code)]
    command: String,
    pub kernel: KernelCfg,
    pub n0: usize,
    pub dim: usize,
    pub t_grid: Vec<f64>,
    pub init: InitCfg,
    pub ensemble: usize,
    pub seed: u64,
    /// Moment orders (alpha, beta) reported per grid time.
    pub moments: Vec<(f64, f64)>,
}

impl SimulateCfg {
    pub fn to_sim_config(&self) -> SimConfig {
        SimConfig {
            kernel: self.kernel.to_kernel(),
            n0: self.n0,
            dim: self.dim,
            t_grid: self.t_grid.clone(),
            init: InitialCondition {
                mass_law: match &self.init.mass {
                    MassInitCfg::Monodisperse { m0 } => MassInit::Monodisperse { m0: *m0 },
                    MassInitCfg::Exponential { rate } => MassInit::Exponential { rate: *rate },
                },
                momentum_law: match &self.init.momentum {
                    MomentumInitCfg::Gaussian { sigma } => {
                        MomentumInit::GaussianIsotropic { sigma: *sigma }
                    }
                    MomentumInitCfg::Samples { list } => MomentumInit::SymmetrizedSamples {
                        samples: list.clone(),
                    },
                },
                symmetrize: self.init.symmetrize,
            },
            ensemble: self.ensemble,
            seed: self.seed,
        }
    }

    fn validate(&self, errors: &mut Vec<String>) {
        if let KernelCfg::ImpulsionPower { gamma } = &self.kernel {
            if !(0.0..=2.0).contains(gamma) {
                errors.push(format!("kernel.gamma must lie in [0,2], got {gamma}"));
            }
        }
        if self.n0 < 2 {
            errors.push(format!("n0 must be >= 2, got {}", self.n0));
        }
        if !(1..=3).contains(&self.dim) {
            errors.push(format!("dim must be 1, 2 or 3, got {}", self.dim));
        }
        if self.t_grid.is_empty() {
            errors.push("t_grid must not be empty".into());
        }
        if self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
            errors.push("t_grid must be strictly increasing".into());
        }
        if self.t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
            errors.push("t_grid times must be finite and nonnegative".into());
        }
        if self.ensemble < 2 {
            errors.push(format!(
                "ensemble must be >= 2 for standard errors, got {}",
                self.ensemble
            ));
        }
        if self.moments.is_empty() {
            errors.push("moments must list at least one (alpha, beta) pair".into());
        }
        match &self.init.mass {
            MassInitCfg::Monodisperse { m0 } if !(*m0 > 0.0) => {
                errors.push(format!("init.mass.m0 must be positive, got {m0}"));
            }
            MassInitCfg::Exponential { rate } if !(*rate > 0.0) => {
                errors.push(format!("init.mass.rate must be positive, got {rate}"));
            }
            _ => {}
        }
        match &self.init.momentum {
            MomentumInitCfg::Gaussian { sigma } if !(*sigma > 0.0) => {
                errors.push(format!("init.momentum.sigma must be positive, got {sigma}"));
            }
            MomentumInitCfg::Samples { list } => {
                if list.is_empty() {
                    errors.push("init.momentum.list must not be empty".into());
                } else if list.iter().any(|s| s.len() != self.dim) {
                    errors.push("init.momentum.list entries must match dim".into());
                }
            }
            _ => {}
        }
        if self.init.symmetrize && self.n0 % 2 != 0 {
            errors.push(format!(
                "symmetrize requires an even n0, got {}",
                self.n0
            ));
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeCfg {
    #[allow(dead_code)]
    command: String,
    pub dim: usize,
    /// Initial even moments (M0, M2, ..., M_{2B}).
    pub moments0: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
}

impl OdeCfg {
    fn validate(&self, errors: &mut Vec<String>) {
        if !(1..=3).contains(&self.dim) {
            errors.push(format!("dim must be 1, 2 or 3, got {}", self.dim));
        }
        if self.moments0.len() < 2 {
            errors.push("moments0 needs at least (M0, M2)".into());
        }
        if self.dim != 1 && self.moments0.len() > 3 {
            errors.push("moments beyond M4 close only for dim = 1".into());
        }
        if self.moments0.iter().any(|m| !(m > &0.0)) {
            errors.push("moments0 entries must be positive".into());
        }
        if !(self.t_end > 0.0) {
            errors.push(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.dt > 0.0 && self.dt <= self.t_end) {
            errors.push(format!("dt must lie in (0, t_end], got {}", self.dt));
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridCfg {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridCfg {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str, errors: &mut Vec<String>) {
        if self.count == 0 {
            errors.push(format!("{name}.count must be >= 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min <= self.max) {
            errors.push(format!("{name} range invalid: [{}, {}]", self.min, self.max));
        }
    }
}

fn default_one() -> f64 {
    1.0
}

fn default_h() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExactOutput {
    /// `(t, zeta, xi, f_re, f_im)` of the exact transform solution.
    Transform,
    /// `(zeta, xi, psi)` of the limit transform.
    PsiInfty,
    /// `(m, p, phi)` of the real-space limit profile.
    Profile,
    /// `(t, zeta, xi, residual)` of the Bernoulli equation.
    BernoulliResidual,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactCfg {
    #[allow(dead_code)]
    command: String,
    pub output: ExactOutput,
    #[serde(default = "default_one")]
    pub h0: f64,
    #[serde(default = "default_one")]
    pub m10_0: f64,
    #[serde(default = "default_one")]
    pub m02_0: f64,
    pub zeta: Option<GridCfg>,
    pub xi: Option<GridCfg>,
    pub m: Option<GridCfg>,
    pub p: Option<GridCfg>,
    #[serde(default)]
    pub t_list: Vec<f64>,
    #[serde(default = "default_h")]
    pub h: f64,
}

impl ExactCfg {
    fn validate(&self, errors: &mut Vec<String>) {
        for (name, v) in [("h0", self.h0), ("m10_0", self.m10_0), ("m02_0", self.m02_0)] {
            if !(v > 0.0 && v.is_finite()) {
                errors.push(format!("{name} must be positive, got {v}"));
            }
        }
        let canonical = self.h0 == 1.0 && self.m10_0 == 1.0 && self.m02_0 == 1.0;
        match self.output {
            ExactOutput::Transform | ExactOutput::BernoulliResidual => {
                if !canonical {
                    errors.push(
                        "transform/bernoulli_residual outputs use the built-in \
                         exponential-Gaussian datum; h0, m10_0 and m02_0 must stay 1"
                            .into(),
                    );
                }
                if self.t_list.is_empty() {
                    errors.push("t_list must not be empty for this output".into());
                }
                if self.output == ExactOutput::BernoulliResidual
                    && self.t_list.iter().any(|t| *t < self.h)
                {
                    errors.push("bernoulli_residual needs t >= h for centered differencing".into());
                }
                self.require_grid("zeta", self.zeta, errors);
                self.require_grid("xi", self.xi, errors);
            }
            ExactOutput::PsiInfty => {
                self.require_grid("zeta", self.zeta, errors);
                self.require_grid("xi", self.xi, errors);
            }
            ExactOutput::Profile => {
                self.require_grid("m", self.m, errors);
                self.require_grid("p", self.p, errors);
                if let Some(m) = self.m {
                    if m.min <= 0.0 {
                        errors.push("profile grid requires m > 0".into());
                    }
                }
            }
        }
        if !(self.h > 0.0) {
            errors.push(format!("h must be positive, got {}", self.h));
        }
    }

    fn require_grid(&self, name: &str, grid: Option<GridCfg>, errors: &mut Vec<String>) {
        match grid {
            Some(g) => g.validate(name, errors),
            None => errors.push(format!("{name} grid required for output {:?}", self.output)),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum LiftOutput {
    /// `(t, k, p_k)` impulsion-moment table.
    PkTable,
    /// `(t, m, residual)` of the lifted equation at `p = 0`.
    Residual,
    /// `(m, m2, eta1, eta2, eta3, residual)` of the transform factorization.
    Factorization,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftCfg {
    #[allow(dead_code)]
    command: String,
    pub output: LiftOutput,
    #[serde(default = "default_one")]
    pub coeff: f64,
    #[serde(default)]
    pub k_list: Vec<u32>,
    #[serde(default)]
    pub t_grid: Vec<f64>,
    #[serde(default)]
    pub t_list: Vec<f64>,
    #[serde(default)]
    pub m_grid: Vec<f64>,
    pub m: Option<f64>,
    pub m2: Option<f64>,
    #[serde(default)]
    pub eta_grid: Vec<[f64; 3]>,
}

impl LiftCfg {
    fn validate(&self, errors: &mut Vec<String>) {
        if !(self.coeff > 0.0) {
            errors.push(format!("coeff must be positive, got {}", self.coeff));
        }
        match self.output {
            LiftOutput::PkTable => {
                if self.k_list.is_empty() {
                    errors.push("k_list must not be empty for pk_table".into());
                }
                if self.k_list.iter().any(|&k| k as f64 * 0.5 > 1.0) {
                    errors.push("k_list entries with k/2 > 1 are not integrable".into());
                }
                if self.t_grid.len() < 2 || self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
                    errors.push("t_grid must be strictly increasing with >= 2 points".into());
                }
                if self.t_grid.iter().any(|t| !(t > &0.0)) {
                    errors.push("t_grid times must be positive".into());
                }
            }
            LiftOutput::Residual => {
                if self.t_list.is_empty() {
                    errors.push("t_list must not be empty for residual".into());
                }
                if self.m_grid.is_empty() || self.m_grid.iter().any(|m| !(m > &0.0)) {
                    errors.push("m_grid must list positive masses".into());
                }
            }
            LiftOutput::Factorization => {
                match (self.m, self.m2) {
                    (Some(m), Some(m2)) if m2 > 0.0 && m2 < m => {}
                    _ => errors.push("factorization needs 0 < m2 < m".into()),
                }
                if self.eta_grid.is_empty() {
                    errors.push("eta_grid must not be empty".into());
                }
            }
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FaultCfg {
    /// Override the sphere constant in closed-form comparisons (testing
    /// hook for the exit-code contract).
    pub sphere_constant: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyCfg {
    #[allow(dead_code)]
    command: String,
    /// Subset of criteria to run (e.g. ["A3", "A7"]); all when empty.
    #[serde(default)]
    pub criteria: Vec<String>,
    #[serde(default)]
    pub fault: Option<FaultCfg>,
}

impl VerifyCfg {
    fn validate(&self, errors: &mut Vec<String>) {
        let known: Vec<String> = (1..=10).map(|i| format!("A{i}")).collect();
        for c in &self.criteria {
            if !known.contains(c) {
                errors.push(format!("unknown criterion {c:?} (expected A1..A10)"));
            }
        }
    }
}

#[derive(Debug)]
pub enum RunConfig {
    Simulate(SimulateCfg),
    Ode(OdeCfg),
    Exact(ExactCfg),
    Lift(LiftCfg),
    Verify(VerifyCfg),
}

impl RunConfig {
    pub fn command_name(&self) -> &'static str {
        match self {
            RunConfig::Simulate(_) => "simulate",
            RunConfig::Ode(_) => "ode",
            RunConfig::Exact(_) => "exact",
            RunConfig::Lift(_) => "lift",
            RunConfig::Verify(_) => "verify",
        }
    }
}

/// Parse and validate a config file for the given CLI subcommand.
pub fn parse_config(text: &str, expected_command: &str) -> Result<RunConfig, ConfigErrors> {
    // duplicate-key scan first, then the strict schema
    serde_json::from_str::<DupCheck>(text)
        .map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
    let probe: CommandProbe = serde_json::from_str(text)
        .map_err(|e| ConfigErrors(vec![format!("missing or invalid \"command\" field: {e}")]))?;
    if probe.command != expected_command {
        return Err(ConfigErrors(vec![format!(
            "config command {:?} does not match CLI subcommand {:?}",
            probe.command, expected_command
        )]));
    }
    let mut errors = Vec::new();
    let config = match expected_command {
        "simulate" => {
            let cfg: SimulateCfg =
                serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
            cfg.validate(&mut errors);
            RunConfig::Simulate(cfg)
        }
        "ode" => {
            let cfg: OdeCfg =
                serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
            cfg.validate(&mut errors);
            RunConfig::Ode(cfg)
        }
        "exact" => {
            let cfg: ExactCfg =
                serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
            cfg.validate(&mut errors);
            RunConfig::Exact(cfg)
        }
        "lift" => {
            let cfg: LiftCfg =
                serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
            cfg.validate(&mut errors);
            RunConfig::Lift(cfg)
        }
        "verify" => {
            let cfg: VerifyCfg =
                serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("{e}")]))?;
            cfg.validate(&mut errors);
            RunConfig::Verify(cfg)
        }
        other => {
            return Err(ConfigErrors(vec![format!("unknown command {other:?}")]));
        }
    };
    if errors.is_empty() {
        Ok(config)
    } else {
        Err(ConfigErrors(errors))
    }
}
