//! Collision kernels and their rejection-sampling majorants.
//!
//! A kernel `a(y, y')` is the nonnegative symmetric rate at which two
//! particles merge. Supported families: the constant kernel, impulsion
//! power kernels `|p - p'|^γ` with `γ ∈ [0,2]`, the hard-sphere kernel
//! `(m^{1/3} + m'^{1/3})² |v - v'|`, the Manev capture kernel
//! `(m + m')/(m m') · |v - v'|⁻²` (evaluable but with no finite majorant,
//! hence never simulated), and mass-only kernels.

use crate::particle::{check_dims, norm, sub, ParticleError, ParticleState};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error(transparent)]
    Particle(#[from] ParticleError),
    #[error("impulsion power exponent must lie in [0,2], got {0}")]
    GammaOutOfRange(f64),
    #[error("Manev kernel is singular at equal velocities")]
    ManevEqualVelocities,
    #[error("kernel admits no finite majorant over the current system")]
    NoFiniteMajorant,
}

/// Mass-only collision laws `a(m, m')` with known homogeneity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassLaw {
    /// `a = 1`, homogeneity 0.
    Constant,
    /// `a = m + m'`, homogeneity 1.
    Sum,
    /// `a = m m'`, homogeneity 2.
    Product,
}

impl MassLaw {
    pub fn eval(&self, m: f64, m2: f64) -> f64 {
        match self {
            MassLaw::Constant => 1.0,
            MassLaw::Sum => m + m2,
            MassLaw::Product => m * m2,
        }
    }

    /// Homogeneity degree λ: `a(sm, sm') = s^λ a(m, m')`.
    pub fn homogeneity(&self) -> f64 {
        match self {
            MassLaw::Constant => 0.0,
            MassLaw::Sum => 1.0,
            MassLaw::Product => 2.0,
        }
    }

    /// Upper bound of `a` over `(0, m_total]²`.
    fn bound(&self, m_total: f64) -> f64 {
        match self {
            MassLaw::Constant => 1.0,
            MassLaw::Sum => 2.0 * m_total,
            MassLaw::Product => m_total * m_total,
        }
    }
}

/// Tagged description of a collision rate `a(y, y')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Constant,
    /// `a = |p - p'|^γ`, requires `γ ∈ [0,2]`.
    ImpulsionPower { gamma: f64 },
    HardSphere,
    Manev,
    MassOnly { law: MassLaw },
}

impl KernelSpec {
    pub fn impulsion_power(gamma: f64) -> Result<Self, KernelError> {
        if !(0.0..=2.0).contains(&gamma) {
            return Err(KernelError::GammaOutOfRange(gamma));
        }
        Ok(KernelSpec::ImpulsionPower { gamma })
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if let KernelSpec::ImpulsionPower { gamma } = self {
            if !(0.0..=2.0).contains(gamma) {
                return Err(KernelError::GammaOutOfRange(*gamma));
            }
        }
        Ok(())
    }

    /// Short tag used in output metadata.
    pub fn tag(&self) -> String {
        match self {
            KernelSpec::Constant => "constant".into(),
            KernelSpec::ImpulsionPower { gamma } => format!("impulsion_power({gamma})"),
            KernelSpec::HardSphere => "hard_sphere".into(),
            KernelSpec::Manev => "manev".into(),
            KernelSpec::MassOnly { law } => match law {
                MassLaw::Constant => "mass_only(constant)".into(),
                MassLaw::Sum => "mass_only(sum)".into(),
                MassLaw::Product => "mass_only(product)".into(),
            },
        }
    }
}

/// Evaluate `a(y, y2)`. Symmetric in its particle arguments.
pub fn eval_kernel(
    kernel: &KernelSpec,
    y: &ParticleState,
    y2: &ParticleState,
) -> Result<f64, KernelError> {
    check_dims(y, y2)?;
    kernel.validate()?;
    match kernel {
        KernelSpec::Constant => Ok(1.0),
        KernelSpec::ImpulsionPower { gamma } => {
            let dp = sub(&y.impulsion_padded(), &y2.impulsion_padded());
            Ok(power(crate::particle::norm_sq(&dp), *gamma))
        }
        KernelSpec::HardSphere => {
            let cross = y.cbrt_mass() + y2.cbrt_mass();
            let dv = sub(&y.velocity(), &y2.velocity());
            Ok(cross * cross * norm(&dv))
        }
        KernelSpec::Manev => {
            let dv = sub(&y.velocity(), &y2.velocity());
            let dv2 = crate::particle::norm_sq(&dv);
            if dv2 == 0.0 {
                return Err(KernelError::ManevEqualVelocities);
            }
            Ok((y.mass() + y2.mass()) / (y.mass() * y2.mass()) / dv2)
        }
        KernelSpec::MassOnly { law } => Ok(law.eval(y.mass(), y2.mass())),
    }
}

/// `|Δp|^γ` from `|Δp|²`, fast paths for the closed-form exponents.
fn power(norm_sq: f64, gamma: f64) -> f64 {
    if gamma == 2.0 {
        norm_sq
    } else if gamma == 1.0 {
        norm_sq.sqrt()
    } else if gamma == 0.0 {
        1.0
    } else {
        norm_sq.powf(gamma / 2.0)
    }
}

/// Summary of a particle system used for majorant evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemStats {
    /// Upper bound on `|p_i|` over the current particles.
    pub max_abs_impulsion: f64,
    /// Maximum mass over the current particles.
    pub max_mass: f64,
    /// Upper bound on `|v_i|` over the current particles.
    pub max_speed: f64,
    /// Total mass (invariant over a run).
    pub total_mass: f64,
}

impl SystemStats {
    pub fn from_particles(particles: &[ParticleState]) -> Self {
        let mut stats = SystemStats {
            max_abs_impulsion: 0.0,
            max_mass: 0.0,
            max_speed: 0.0,
            total_mass: 0.0,
        };
        for p in particles {
            stats.max_abs_impulsion = stats.max_abs_impulsion.max(p.abs_impulsion());
            stats.max_mass = stats.max_mass.max(p.mass());
            stats.max_speed = stats.max_speed.max(p.speed());
            stats.total_mass += p.mass();
        }
        stats
    }
}

/// Uniform bound `Λ ≥ a(y, y')` over every pair drawn from a system with
/// the given summary.
///
/// Impulsion power: `(2 max|p|)^γ`; hard sphere:
/// `(2 max m^{1/3})² (2 max|v|)`; mass-only: the law's bound over
/// `(0, m_total]²`. The Manev kernel is unbounded over any neighborhood of
/// equal velocities and is rejected.
pub fn majorant(kernel: &KernelSpec, stats: &SystemStats) -> Result<f64, KernelError> {
    kernel.validate()?;
    match kernel {
        KernelSpec::Constant => Ok(1.0),
        KernelSpec::ImpulsionPower { gamma } => {
            let reach = 2.0 * stats.max_abs_impulsion;
            Ok(power(reach * reach, *gamma))
        }
        KernelSpec::HardSphere => {
            let cross = 2.0 * stats.max_mass.cbrt();
            Ok(cross * cross * 2.0 * stats.max_speed)
        }
        KernelSpec::Manev => Err(KernelError::NoFiniteMajorant),
        KernelSpec::MassOnly { law } => Ok(law.bound(stats.total_mass)),
    }
}
