//! Laboratory for mass–impulsion coalescence dynamics.
//!
//! Particles carry a mass `m > 0` and an impulsion vector `p`; a merger
//! produces a particle with `m'' = m + m'` and `p'' = p + p'`, conserving
//! both quantities and dissipating kinetic energy. This crate bundles
//!
//! * a mean-field stochastic particle simulator over several collision
//!   kernels ([`sim`]),
//! * the collision kernels themselves and the per-event conservation and
//!   dissipation identities ([`particle`], [`kernel`]),
//! * closed moment hierarchies and bound checkers ([`moments`]),
//! * the exact constant-kernel solution in Fourier–Laplace variables and
//!   its self-similar limit ([`exact`]),
//! * the lift from mass-only coagulation solutions to mass–impulsion
//!   solutions ([`lift`]),
//! * and a verification suite wiring the above together ([`verify`]).

pub mod exact;
pub mod kernel;
pub mod lift;
pub mod moments;
pub mod particle;
pub mod quad;
pub mod rng;
pub mod sim;
pub mod verify;

pub use kernel::{eval_kernel, majorant, KernelError, KernelSpec, MassLaw, SystemStats};
pub use particle::{coalesce, kinetic_energy_loss, ParticleError, ParticleState};
pub use sim::{
    ensemble_moments, CoalescenceEvent, InitialCondition, MassInit, MomentumInit, ParticleSystem,
    SimConfig, SimError,
};
