//! Particle states and the coalescence mechanism.
//!
//! A particle is a pair `(m, p)` of a positive mass and an impulsion vector
//! in dimension `d ∈ {1,2,3}`; its velocity is `v = p/m`. Two particles merge
//! into one with `m'' = m + m'`, `p'' = p + p'`, which dissipates kinetic
//! energy at the rate `(1/2) m m'/(m+m') |v - v'|²`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParticleError {
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("impulsion must have 1 to 3 finite components, got length {0}")]
    InvalidImpulsion(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// One particle `(m, p)` in dimension `d`.
///
/// The impulsion is stored padded to three components; components at index
/// `>= dim` are always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    mass: f64,
    impulsion: [f64; 3],
    dim: usize,
}

impl ParticleState {
    pub fn new(mass: f64, impulsion: &[f64]) -> Result<Self, ParticleError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(ParticleError::InvalidMass(mass));
        }
        if impulsion.is_empty() || impulsion.len() > 3 || impulsion.iter().any(|c| !c.is_finite())
        {
            return Err(ParticleError::InvalidImpulsion(impulsion.len()));
        }
        let mut padded = [0.0; 3];
        padded[..impulsion.len()].copy_from_slice(impulsion);
        Ok(Self {
            mass,
            impulsion: padded,
            dim: impulsion.len(),
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Impulsion components (length `dim`).
    pub fn impulsion(&self) -> &[f64] {
        &self.impulsion[..self.dim]
    }

    /// Euclidean norm `|p|`.
    pub fn abs_impulsion(&self) -> f64 {
        norm(&self.impulsion)
    }

    /// Velocity `v = p/m`, padded to three components.
    pub fn velocity(&self) -> [f64; 3] {
        [
            self.impulsion[0] / self.mass,
            self.impulsion[1] / self.mass,
            self.impulsion[2] / self.mass,
        ]
    }

    /// Speed `|v| = |p|/m`.
    pub fn speed(&self) -> f64 {
        self.abs_impulsion() / self.mass
    }

    /// Kinetic energy `|p|²/(2m)`.
    pub fn kinetic_energy(&self) -> f64 {
        norm_sq(&self.impulsion) / (2.0 * self.mass)
    }

    /// Cube root of the mass, used by the hard-sphere cross-section.
    pub fn cbrt_mass(&self) -> f64 {
        self.mass.cbrt()
    }

    pub(crate) fn impulsion_padded(&self) -> [f64; 3] {
        self.impulsion
    }
}

/// Merge two particles: `m'' = m + m'`, `p'' = p + p'`.
pub fn coalesce(a: &ParticleState, b: &ParticleState) -> Result<ParticleState, ParticleError> {
    check_dims(a, b)?;
    Ok(ParticleState {
        mass: a.mass + b.mass,
        impulsion: [
            a.impulsion[0] + b.impulsion[0],
            a.impulsion[1] + b.impulsion[1],
            a.impulsion[2] + b.impulsion[2],
        ],
        dim: a.dim,
    })
}

/// Kinetic energy dissipated by merging `a` and `b`:
/// `(1/2) m m'/(m+m') |v - v'|²`.
///
/// Equals `E(a) + E(b) - E(coalesce(a,b))` up to rounding.
pub fn kinetic_energy_loss(a: &ParticleState, b: &ParticleState) -> Result<f64, ParticleError> {
    check_dims(a, b)?;
    let reduced = a.mass * b.mass / (a.mass + b.mass);
    let va = a.velocity();
    let vb = b.velocity();
    let dv = sub(&va, &vb);
    Ok(0.5 * reduced * norm_sq(&dv))
}

pub(crate) fn check_dims(a: &ParticleState, b: &ParticleState) -> Result<(), ParticleError> {
    if a.dim != b.dim {
        return Err(ParticleError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(())
}

pub(crate) fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm_sq(v: &[f64; 3]) -> f64 {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    norm_sq(v).sqrt()
}
