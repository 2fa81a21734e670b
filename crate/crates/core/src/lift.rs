//! Lift from mass-only coagulation solutions to mass–impulsion solutions.
//!
//! For a momentum symbol `b` on ℝ³ homogeneous of degree `1/θ` with
//! `φ = 𝓕⁻¹(e^{-b}) ≥ 0`, every solution `F(t,m)` of the mass-only
//! coagulation equation lifts to `f(t,m,p) = m^{-3θ} F(t,m) φ(p/m^θ)`.
//! The mechanism is the factorization `e^{-m b(η)} = e^{-m' b(η)}
//! e^{-(m-m') b(η)}`, which collapses the impulsion convolution in the gain
//! term, so the residual of the lifted function is exactly
//! `m^{-3θ} φ(p/m^θ)` times the mass-only residual.
//!
//! The built-in oracle is the constant-kernel solution
//! `F(t,m) = T⁻² e^{-m/T}`, `T = 1 + t/2`. For self-similar `F` of the
//! homogeneity-λ family, the impulsion moments scale as
//! `P_k(t) ~ t^{-(1-kθ)/(1-λ)}`.

use crate::kernel::MassLaw;
use crate::quad::{integrate, QuadConfig, QuadError};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("parameter {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("lift evaluation requires m > 0, got {0}")]
    NonPositiveMass(f64),
    #[error("masses must satisfy 0 < m2 < m, got m = {m}, m2 = {m2}")]
    BadMassSplit { m: f64, m2: f64 },
    #[error("residual oracle requires the built-in exact mass solution")]
    NoOracle,
    #[error("P_k with kθ >= 1 is not integrable (k = {k}, θ = {theta})")]
    NonIntegrable { k: u32, theta: f64 },
    #[error("scaling fit needs at least two positive grid times")]
    DegenerateGrid,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

type SymbolFn = dyn Fn(&[f64; 3]) -> f64 + Send + Sync;
type ProfileFn = dyn Fn(&[f64; 3]) -> f64 + Send + Sync;

/// Momentum symbol `b(η)`, homogeneous of degree `1/θ`.
#[derive(Clone)]
pub enum MomentumSymbol {
    /// `b(η) = coeff·|η|²` (degree 2, so `θ = 1/2`); analytic Gaussian
    /// profile.
    Quadratic { coeff: f64 },
    /// User-supplied symbol together with its claimed inverse transform
    /// `φ = 𝓕⁻¹(e^{-b})`; positivity of `φ` is the user's certificate.
    Custom {
        symbol: Arc<SymbolFn>,
        profile: Arc<ProfileFn>,
    },
}

impl std::fmt::Debug for MomentumSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MomentumSymbol::Quadratic { coeff } => write!(f, "Quadratic(coeff={coeff})"),
            MomentumSymbol::Custom { .. } => write!(f, "Custom(..)"),
        }
    }
}

/// Homogeneity parameter θ plus the momentum symbol; the momentum dimension
/// is fixed to 3.
#[derive(Debug, Clone)]
pub struct LiftSpec {
    theta: f64,
    symbol: MomentumSymbol,
}

impl LiftSpec {
    /// `b(η) = |η|²`, `θ = 1/2`.
    pub fn quadratic() -> Self {
        LiftSpec {
            theta: 0.5,
            symbol: MomentumSymbol::Quadratic { coeff: 1.0 },
        }
    }

    /// `b(η) = c|η|²`, `θ = 1/2`.
    pub fn quadratic_scaled(coeff: f64) -> Result<Self, LiftError> {
        if !(coeff > 0.0 && coeff.is_finite()) {
            return Err(LiftError::NonPositive {
                name: "coeff",
                value: coeff,
            });
        }
        Ok(LiftSpec {
            theta: 0.5,
            symbol: MomentumSymbol::Quadratic { coeff },
        })
    }

    pub fn custom(
        theta: f64,
        symbol: Arc<SymbolFn>,
        profile: Arc<ProfileFn>,
    ) -> Result<Self, LiftError> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(LiftError::NonPositive {
                name: "theta",
                value: theta,
            });
        }
        Ok(LiftSpec {
            theta,
            symbol: MomentumSymbol::Custom { symbol, profile },
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn symbol(&self) -> &MomentumSymbol {
        &self.symbol
    }

    pub fn eval_symbol(&self, eta: &[f64; 3]) -> f64 {
        match &self.symbol {
            MomentumSymbol::Quadratic { coeff } => {
                coeff * (eta[0] * eta[0] + eta[1] * eta[1] + eta[2] * eta[2])
            }
            MomentumSymbol::Custom { symbol, .. } => symbol(eta),
        }
    }

    /// Momentum dimension of the lift construction.
    pub const MOMENTUM_DIM: usize = 3;
}

/// Momentum profile `φ = 𝓕⁻¹(e^{-b})`; `certified` marks the analytic
/// Gaussian path (Custom symbols carry a user-supplied, unverified profile).
#[derive(Clone)]
pub struct MomentumProfile {
    eval: Arc<ProfileFn>,
    certified: bool,
}

impl MomentumProfile {
    pub fn eval(&self, p: &[f64; 3]) -> f64 {
        (self.eval)(p)
    }

    /// Radial evaluation `φ(p)` at `|p| = r` (all shipped profiles are
    /// radially symmetric).
    pub fn eval_radial(&self, r: f64) -> f64 {
        (self.eval)(&[r, 0.0, 0.0])
    }

    pub fn certified(&self) -> bool {
        self.certified
    }
}

impl std::fmt::Debug for MomentumProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MomentumProfile(certified={})", self.certified)
    }
}

/// `φ = 𝓕⁻¹(e^{-b})`: for `b = c|η|²` this is the Gaussian
/// `φ(p) = (4πc)^{-3/2} e^{-|p|²/(4c)}` with `∫φ = e^{-b(0)} = 1`; custom
/// symbols return the user profile flagged as uncertified.
pub fn phi_from_b(spec: &LiftSpec) -> MomentumProfile {
    match &spec.symbol {
        MomentumSymbol::Quadratic { coeff } => {
            let c = *coeff;
            let norm = (4.0 * std::f64::consts::PI * c).powf(-1.5);
            MomentumProfile {
                eval: Arc::new(move |p: &[f64; 3]| {
                    let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
                    norm * (-r2 / (4.0 * c)).exp()
                }),
                certified: true,
            }
        }
        MomentumSymbol::Custom { profile, .. } => MomentumProfile {
            eval: profile.clone(),
            certified: false,
        },
    }
}

/// Max deviation of `b(sη) = s^{1/θ} b(η)` over a grid of scales and
/// directions (relative).
pub fn check_symbol_homogeneity(spec: &LiftSpec, etas: &[[f64; 3]], scales: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for eta in etas {
        let base = spec.eval_symbol(eta);
        if base == 0.0 {
            continue;
        }
        for &s in scales {
            let scaled = spec.eval_symbol(&[s * eta[0], s * eta[1], s * eta[2]]);
            let expected = s.powf(1.0 / spec.theta) * base;
            let denom = expected.abs().max(f64::MIN_POSITIVE);
            worst = worst.max((scaled - expected).abs() / denom);
        }
    }
    worst
}

/// Max residual of the exponential factorization
/// `e^{-m b(η)} = e^{-m2 b(η)} e^{-(m-m2) b(η)}` over the η grid.
pub fn factorization_check(
    spec: &LiftSpec,
    m: f64,
    m2: f64,
    eta_grid: &[[f64; 3]],
) -> Result<f64, LiftError> {
    if !(m2 > 0.0 && m2 < m) {
        return Err(LiftError::BadMassSplit { m, m2 });
    }
    let mut worst: f64 = 0.0;
    for eta in eta_grid {
        let b = spec.eval_symbol(eta);
        let whole = (-m * b).exp();
        let split = (-m2 * b).exp() * (-(m - m2) * b).exp();
        let resid = (whole - split).abs();
        assert!(resid.is_finite(), "factorization produced a non-finite value");
        worst = worst.max(resid);
    }
    Ok(worst)
}

type MassFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// A mass-only coagulation solution `F(t, m)` with its kernel and
/// homogeneity.
#[derive(Clone)]
pub struct MassSolution {
    eval: Arc<MassFn>,
    kernel: MassLaw,
    lambda: f64,
    exact: bool,
}

impl std::fmt::Debug for MassSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MassSolution(kernel={:?}, lambda={}, exact={})",
            self.kernel, self.lambda, self.exact
        )
    }
}

impl MassSolution {
    /// The exact constant-kernel solution `F(t,m) = T⁻² e^{-m/T}`,
    /// `T = 1 + t/2`, with `F(0,m) = e^{-m}`.
    pub fn constant_kernel_exact() -> Self {
        MassSolution {
            eval: Arc::new(smoluchowski_constant_exact),
            kernel: MassLaw::Constant,
            lambda: 0.0,
            exact: true,
        }
    }

    /// Wrap an arbitrary evaluator claimed to solve the mass-only equation
    /// exactly. The claim is trusted by the residual oracle, which makes
    /// this the hook for sensitivity experiments.
    pub fn custom_claimed_exact(eval: Arc<MassFn>, kernel: MassLaw, lambda: f64) -> Self {
        MassSolution {
            eval,
            kernel,
            lambda,
            exact: true,
        }
    }

    /// Wrap an evaluator with no exactness claim; the residual oracle
    /// rejects it.
    pub fn custom(eval: Arc<MassFn>, kernel: MassLaw, lambda: f64) -> Self {
        MassSolution {
            eval,
            kernel,
            lambda,
            exact: false,
        }
    }

    pub fn eval(&self, t: f64, m: f64) -> f64 {
        (self.eval)(t, m)
    }

    pub fn kernel(&self) -> MassLaw {
        self.kernel
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// Exact constant-kernel mass solution `T⁻² e^{-m/T}` with `T = 1 + t/2`.
pub fn smoluchowski_constant_exact(t: f64, m: f64) -> f64 {
    let big_t = 1.0 + 0.5 * t;
    (-m / big_t).exp() / (big_t * big_t)
}

/// The lifted density `f(t,m,p) = m^{-3θ} F(t,m) φ(p/m^θ)`.
pub fn lift_solution(
    mass: &MassSolution,
    spec: &LiftSpec,
    t: f64,
    m: f64,
    p: &[f64; 3],
) -> Result<f64, LiftError> {
    if !(m > 0.0) {
        return Err(LiftError::NonPositiveMass(m));
    }
    let phi = phi_from_b(spec);
    let scale = m.powf(spec.theta);
    let arg = [p[0] / scale, p[1] / scale, p[2] / scale];
    Ok(m.powf(-3.0 * spec.theta) * mass.eval(t, m) * phi.eval(&arg))
}

/// Residual of the mass-only coagulation equation
/// `∂ₜF - [gain - loss]` at `(t, m)`, with the time derivative by five-point
/// central differencing and both collision integrals by adaptive quadrature
/// (the loss integral truncated at `40·T(t)`, tail below `1e-17` relative).
fn mass_equation_residual(
    mass: &MassSolution,
    t: f64,
    m: f64,
    cfg: &QuadConfig,
) -> Result<f64, LiftError> {
    let h = 1e-3;
    let f = |t: f64| mass.eval(t, m);
    let dt = if t >= 2.0 * h {
        (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
    } else {
        // one-sided 4th-order stencil for t near 0
        (-25.0 * f(t) + 48.0 * f(t + h) - 36.0 * f(t + 2.0 * h) + 16.0 * f(t + 3.0 * h)
            - 3.0 * f(t + 4.0 * h))
            / (12.0 * h)
    };
    let law = mass.kernel;
    let gain = 0.5
        * integrate(
            |mp| mass.eval(t, m - mp) * mass.eval(t, mp) * law.eval(m - mp, mp),
            0.0,
            m,
            cfg,
        )?;
    let horizon = 40.0 * (1.0 + 0.5 * t);
    let loss = mass.eval(t, m)
        * integrate(
            |mp| mass.eval(t, mp) * law.eval(m, mp),
            0.0,
            horizon,
            cfg,
        )?;
    Ok(dt - (gain - loss))
}

/// `|∂ₜ lift - Q(lift)|` at one point `(t, m, p)`, using the factorization
/// reduction: the residual equals `m^{-3θ} φ(p/m^θ)` times the mass-only
/// residual.
pub fn lifted_residual(
    mass: &MassSolution,
    spec: &LiftSpec,
    t: f64,
    m: f64,
    p: &[f64; 3],
    cfg: &QuadConfig,
) -> Result<f64, LiftError> {
    if !mass.exact {
        return Err(LiftError::NoOracle);
    }
    if !(m > 0.0) {
        return Err(LiftError::NonPositiveMass(m));
    }
    let phi = phi_from_b(spec);
    let mass_resid = mass_equation_residual(mass, t, m, cfg)?;
    let scale = m.powf(spec.theta);
    let arg = [p[0] / scale, p[1] / scale, p[2] / scale];
    let prefactor = m.powf(-3.0 * spec.theta) * phi.eval(&arg);
    Ok((prefactor * mass_resid).abs())
}

/// Max of [`lifted_residual`] over collocation points `(m, p)` at time `t`.
pub fn residual_check(
    mass: &MassSolution,
    spec: &LiftSpec,
    t: f64,
    points: &[(f64, [f64; 3])],
    cfg: &QuadConfig,
) -> Result<f64, LiftError> {
    let mut worst: f64 = 0.0;
    for &(m, p) in points {
        worst = worst.max(lifted_residual(mass, spec, t, m, &p, cfg)?);
    }
    Ok(worst)
}

/// `P_k(t) = ∫∫ |p|^k f(t,m,p) dm dp` by nested quadrature: radial in `|p|`
/// (truncated at `(8+2k)` Gaussian widths of `φ(·/m^θ)`) inside an adaptive
/// mass integral truncated at `40·T(t)`. The substitution `m = u²` removes
/// the fractional-power cusp of the integrand at `m = 0`.
pub fn pk_quadrature(
    mass: &MassSolution,
    spec: &LiftSpec,
    k: u32,
    t: f64,
    cfg: &QuadConfig,
) -> Result<f64, LiftError> {
    let phi = phi_from_b(spec);
    let theta = spec.theta;
    let u_max = (40.0 * (1.0 + 0.5 * t)).sqrt();
    let four_pi = 4.0 * std::f64::consts::PI;
    let value = integrate(
        |u| {
            let m = u * u;
            if m <= 0.0 {
                return 0.0;
            }
            let scale = m.powf(theta);
            let r_max = (8.0 + 2.0 * k as f64) * 2.0 * scale;
            let inner = integrate(
                |r| r.powi((2 + k) as i32) * phi.eval_radial(r / scale),
                0.0,
                r_max,
                cfg,
            )
            .unwrap_or(f64::NAN);
            2.0 * u * m.powf(-3.0 * theta) * mass.eval(t, m) * four_pi * inner
        },
        0.0,
        u_max,
        cfg,
    )?;
    if !value.is_finite() {
        return Err(LiftError::Quadrature(QuadError::NoConvergence {
            abs_tol: cfg.abs_tol,
            rel_tol: cfg.rel_tol,
        }));
    }
    Ok(value)
}

/// Result of the `P_k` scaling fit.
#[derive(Debug, Clone)]
pub struct PkScaling {
    pub slope: f64,
    /// `-(1 - kθ)/(1 - λ)`.
    pub expected: f64,
    pub table: Vec<(f64, f64)>,
}

/// Fit `log P_k` against `log t` over the last decade of the grid and
/// compare the slope with `-(1-kθ)/(1-λ)`.
pub fn pk_scaling_check(
    mass: &MassSolution,
    spec: &LiftSpec,
    k: u32,
    t_grid: &[f64],
    cfg: &QuadConfig,
) -> Result<PkScaling, LiftError> {
    // kθ = 1 is the borderline constant-P_k case and is admitted (slope 0);
    // beyond it P_k grows and the scaling law no longer decays.
    if k as f64 * spec.theta > 1.0 {
        return Err(LiftError::NonIntegrable {
            k,
            theta: spec.theta,
        });
    }
    let mut table = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !(t > 0.0) {
            return Err(LiftError::DegenerateGrid);
        }
        table.push((t, pk_quadrature(mass, spec, k, t, cfg)?));
    }
    let t_max = table.iter().map(|r| r.0).fold(0.0, f64::max);
    let fit: Vec<(f64, f64)> = table
        .iter()
        .filter(|(t, _)| *t >= t_max / 10.0)
        .map(|&(t, pk)| (t.ln(), pk.ln()))
        .collect();
    if fit.len() < 2 {
        return Err(LiftError::DegenerateGrid);
    }
    let n = fit.len() as f64;
    let mean_x = fit.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = fit.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = fit.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    let sxy = fit
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>();
    let expected = -(1.0 - k as f64 * spec.theta) / (1.0 - mass.lambda);
    Ok(PkScaling {
        slope: sxy / sxx,
        expected,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn default_cfg() -> QuadConfig {
        QuadConfig::with_tol(1e-12, 1e-10)
    }

    #[test]
    fn gaussian_profile_normalization_and_peak() {
        let spec = LiftSpec::quadratic();
        let phi = phi_from_b(&spec);
        assert!(phi.certified());
        // φ(0) = (4π)^{-3/2}
        let peak = phi.eval(&[0.0, 0.0, 0.0]);
        assert!((peak - (4.0 * PI).powf(-1.5)).abs() < 1e-15);
        // ∫φ = 1 via radial quadrature
        let cfg = default_cfg();
        let total = integrate(
            |r| 4.0 * PI * r * r * phi.eval_radial(r),
            0.0,
            40.0,
            &cfg,
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-8, "∫φ = {total}");

        // rescaled symbol b -> 2b keeps ∫φ = 1
        let spec2 = LiftSpec::quadratic_scaled(2.0).unwrap();
        let phi2 = phi_from_b(&spec2);
        let total2 = integrate(
            |r| 4.0 * PI * r * r * phi2.eval_radial(r),
            0.0,
            60.0,
            &cfg,
        )
        .unwrap();
        assert!((total2 - 1.0).abs() < 1e-8);
    }

    #[test]
    fn custom_profile_is_flagged_uncertified() {
        let spec = LiftSpec::custom(
            0.5,
            Arc::new(|eta: &[f64; 3]| eta.iter().map(|c| c * c).sum()),
            Arc::new(|_: &[f64; 3]| 1.0),
        )
        .unwrap();
        assert!(!phi_from_b(&spec).certified());
    }

    #[test]
    fn quadratic_symbol_is_homogeneous_of_degree_two() {
        let spec = LiftSpec::quadratic();
        let etas = [[1.0, 0.0, 0.0], [0.3, -1.2, 0.8], [2.0, 2.0, 2.0]];
        let scales = [0.1, 0.5, 2.0, 7.3];
        assert!(check_symbol_homogeneity(&spec, &etas, &scales) < 1e-10);
    }

    #[test]
    fn factorization_is_exact_to_rounding() {
        let spec = LiftSpec::quadratic();
        let grid: Vec<[f64; 3]> = (0..30)
            .map(|k| {
                let s = 0.2 * k as f64;
                [s, 0.5 * s, -0.25 * s]
            })
            .collect();
        let worst = factorization_check(&spec, 2.0, 0.7, &grid).unwrap();
        assert!(worst < 1e-12, "factorization residual {worst}");
        // m2 -> 0 makes the split factor approach 1
        let tiny = factorization_check(&spec, 2.0, 1e-14, &grid).unwrap();
        assert!(tiny < 1e-12);
        // huge m·b underflows both sides to zero together
        let huge = factorization_check(&spec, 1e6, 0.5e6, &[[30.0, 0.0, 0.0]]).unwrap();
        assert_eq!(huge, 0.0);
        assert!(factorization_check(&spec, 1.0, 1.0, &grid).is_err());
    }

    #[test]
    fn exact_mass_solution_properties() {
        // t = 0 -> e^{-m}
        assert!((smoluchowski_constant_exact(0.0, 1.3) - (-1.3f64).exp()).abs() < 1e-15);
        let cfg = default_cfg();
        for t in [0.0, 1.0, 5.0] {
            let big_t = 1.0 + 0.5 * t;
            let number = integrate(
                |m| smoluchowski_constant_exact(t, m),
                0.0,
                40.0 * big_t,
                &cfg,
            )
            .unwrap();
            assert!(
                (number - 1.0 / big_t).abs() < 1e-8,
                "number at t={t}: {number}"
            );
            let mass = integrate(
                |m| m * smoluchowski_constant_exact(t, m),
                0.0,
                80.0 * big_t,
                &cfg,
            )
            .unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "mass at t={t}: {mass}");
        }
    }

    #[test]
    fn exact_mass_solution_satisfies_the_equation() {
        let mass = MassSolution::constant_kernel_exact();
        let cfg = QuadConfig::with_tol(1e-13, 1e-11);
        for t in [0.0, 0.5, 5.0] {
            for m in [0.2, 1.0, 4.0, 12.0] {
                let r = mass_equation_residual(&mass, t, m, &cfg).unwrap();
                assert!(r.abs() < 1e-8, "residual {r} at t={t}, m={m}");
            }
        }
    }

    #[test]
    fn lift_hand_value_and_structure() {
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        // θ = 1/2, F = e^{-m}, t = 0, m = 1, p = 0 -> e^{-1} (4π)^{-3/2}
        let v = lift_solution(&mass, &spec, 0.0, 1.0, &[0.0, 0.0, 0.0]).unwrap();
        assert!((v - (-1.0f64).exp() * (4.0 * PI).powf(-1.5)).abs() < 1e-15);
        assert!(lift_solution(&mass, &spec, 0.0, 0.0, &[0.0; 3]).is_err());

        // scaling in p: lift(2p)/lift(p) = φ(2p/√m)/φ(p/√m)
        let phi = phi_from_b(&spec);
        let (t, m) = (1.0, 2.5);
        let p = [0.4, -0.3, 0.9];
        let p2 = [0.8, -0.6, 1.8];
        let lhs = lift_solution(&mass, &spec, t, m, &p2).unwrap()
            / lift_solution(&mass, &spec, t, m, &p).unwrap();
        let s = m.powf(0.5);
        let rhs = phi.eval(&[p2[0] / s, p2[1] / s, p2[2] / s])
            / phi.eval(&[p[0] / s, p[1] / s, p[2] / s]);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn lift_preserves_the_mass_marginal() {
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let phi = phi_from_b(&spec);
        let cfg = default_cfg();
        for (t, m) in [(0.0f64, 1.0f64), (2.0, 0.5), (5.0, 6.0)] {
            let scale: f64 = m.powf(spec.theta());
            let marginal = integrate(
                |r| {
                    4.0 * PI * r * r * m.powf(-1.5) * mass.eval(t, m)
                        * phi.eval_radial(r / scale)
                },
                0.0,
                20.0 * scale,
                &cfg,
            )
            .unwrap();
            let f = mass.eval(t, m);
            assert!(
                (marginal - f).abs() <= 1e-8 * f,
                "marginal {marginal} vs F {f} at (t={t}, m={m})"
            );
        }
    }

    #[test]
    fn lifted_residual_is_quadrature_level_for_the_exact_solution() {
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let cfg = QuadConfig::with_tol(1e-13, 1e-11);
        let points: Vec<(f64, [f64; 3])> = vec![
            (0.5, [0.0, 0.0, 0.0]),
            (1.0, [0.5, 0.0, 0.0]),
            (2.0, [1.0, -1.0, 0.5]),
            (8.0, [0.0, 2.0, 0.0]),
        ];
        for t in [0.0, 5.0] {
            let worst = residual_check(&mass, &spec, t, &points, &cfg).unwrap();
            assert!(worst < 1e-6, "residual {worst} at t={t}");
        }
    }

    #[test]
    fn perturbed_solution_blows_up_the_residual() {
        let exact = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let cfg = QuadConfig::with_tol(1e-13, 1e-11);
        let points = [(1.0, [0.0, 0.0, 0.0])];
        let base = residual_check(&exact, &spec, 1.0, &points, &cfg).unwrap();

        let perturbed = MassSolution::custom_claimed_exact(
            Arc::new(|t, m| 1.01 * smoluchowski_constant_exact(t, m)),
            MassLaw::Constant,
            0.0,
        );
        let wrong = residual_check(&perturbed, &spec, 1.0, &points, &cfg).unwrap();
        assert!(
            wrong > 1e3 * base.max(1e-12),
            "sensitivity check: {base} -> {wrong}"
        );

        let uncertified = MassSolution::custom(
            Arc::new(smoluchowski_constant_exact),
            MassLaw::Constant,
            0.0,
        );
        assert!(matches!(
            residual_check(&uncertified, &spec, 1.0, &points, &cfg),
            Err(LiftError::NoOracle)
        ));
    }

    #[test]
    fn corollary_selfsim_form_matches_pointwise() {
        // F = ν(t) Φ(μ(t) m) with ν = T^{-2}, μ = 1/T, Φ(x) = e^{-x};
        // the lift must equal ν μ^{3θ} Ψ(μ m, μ^θ p).
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let phi = phi_from_b(&spec);
        let psi = |big_m: f64, big_p: &[f64; 3]| -> f64 {
            let s = big_m.powf(spec.theta());
            big_m.powf(-3.0 * spec.theta())
                * (-big_m).exp()
                * phi.eval(&[big_p[0] / s, big_p[1] / s, big_p[2] / s])
        };
        for (t, m, p) in [
            (0.5, 1.0, [0.3, 0.0, 0.0]),
            (3.0, 2.0, [0.0, -0.7, 0.4]),
            (10.0, 0.4, [1.0, 1.0, 1.0]),
        ] {
            let big_t: f64 = 1.0 + 0.5 * t;
            let (nu, mu) = (big_t.powi(-2), 1.0 / big_t);
            let mt = mu.powf(spec.theta());
            let lhs = lift_solution(&mass, &spec, t, m, &p).unwrap();
            let rhs = nu
                * mu.powf(3.0 * spec.theta())
                * psi(mu * m, &[p[0] * mt, p[1] * mt, p[2] * mt]);
            assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-300),
                "selfsim form at (t={t}, m={m})"
            );
        }
    }

    #[test]
    fn pk_slopes_match_the_scaling_law() {
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let cfg = QuadConfig::with_tol(1e-11, 1e-9);
        let t_grid: Vec<f64> = (0..10).map(|i| 100.0 * 10f64.powf(i as f64 / 9.0)).collect();
        for (k, target) in [(0u32, -1.0), (1, -0.5), (2, 0.0)] {
            let fit = pk_scaling_check(&mass, &spec, k, &t_grid, &cfg).unwrap();
            assert!((fit.expected - target).abs() < 1e-12);
            assert!(
                (fit.slope - target).abs() < 0.05,
                "k={k}: slope {} vs {target}",
                fit.slope
            );
        }
        assert!(matches!(
            pk_scaling_check(&mass, &spec, 2, &[1.0], &cfg),
            Err(LiftError::DegenerateGrid)
        ));
        assert!(matches!(
            pk_scaling_check(&mass, &spec, 3, &t_grid, &cfg),
            Err(LiftError::NonIntegrable { .. })
        ));
    }

    #[test]
    fn pk_decays_and_normalized_pk_grows() {
        let mass = MassSolution::constant_kernel_exact();
        let spec = LiftSpec::quadratic();
        let cfg = QuadConfig::with_tol(1e-11, 1e-9);
        let t_grid = [10.0, 40.0, 160.0];
        for k in [0u32, 1] {
            let vals: Vec<f64> = t_grid
                .iter()
                .map(|&t| pk_quadrature(&mass, &spec, k, t, &cfg).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "P_{k} not decaying: {vals:?}");
        }
        let p0: Vec<f64> = t_grid
            .iter()
            .map(|&t| pk_quadrature(&mass, &spec, 0, t, &cfg).unwrap())
            .collect();
        let p1: Vec<f64> = t_grid
            .iter()
            .map(|&t| pk_quadrature(&mass, &spec, 1, t, &cfg).unwrap())
            .collect();
        let ratio: Vec<f64> = p1.iter().zip(&p0).map(|(a, b)| a / b).collect();
        assert!(ratio.windows(2).all(|w| w[1] > w[0]), "P1/P0 not growing: {ratio:?}");
    }
}
