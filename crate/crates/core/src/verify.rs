//! Executable verification suite.
//!
//! Each criterion function runs one end-to-end check at pinned scale and
//! tolerance and reports pass/fail with per-check details; [`run_all`]
//! drives the full suite. The CLI `verify` command and the acceptance test
//! target both dispatch here.

use crate::exact::{
    bernoulli_residual, limit_profile_moments, profile_transform_quadrature, psi_infty,
    selfsim_transform_pde_residual, PhiDescriptor, SelfSimProfile, TransformSolution,
};
use crate::kernel::KernelSpec;
use crate::lift::{
    factorization_check, pk_scaling_check, residual_check, LiftSpec, MassSolution,
};
use crate::moments::{
    check_gamma1_brackets, check_hs_bound, gamma2_closed_m0, gamma2_closed_m2, gamma2_closed_m4,
    integrate_gamma2, BoundTolerance, Gamma1Initials, Gamma2State,
};
use crate::quad::QuadConfig;
use crate::sim::{
    ensemble_moments, InitialCondition, MassInit, MomentumInit, ParticleSystem, SimConfig,
};
use crate::particle::{coalesce, kinetic_energy_loss, ParticleState};
use num_complex::Complex64;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub runtime_seconds: f64,
}

impl CriterionResult {
    pub fn status_line(&self) -> String {
        format!(
            "{} {} [{:.1}s]: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.runtime_seconds,
            self.description
        )
    }
}

/// Suite configuration. `sphere_constant_override` injects a wrong `k_d`
/// into the closed-form comparisons; it exists to exercise the failure path
/// of the exit-code contract and must stay `None` for real verification.
#[derive(Debug, Clone, Default)]
pub struct VerifyConfig {
    pub sphere_constant_override: Option<f64>,
}

struct Checks {
    details: Vec<String>,
    passed: bool,
}

impl Checks {
    fn new() -> Self {
        Checks {
            details: Vec::new(),
            passed: true,
        }
    }

    fn require(&mut self, ok: bool, detail: String) {
        if !ok {
            self.passed = false;
        }
        self.details
            .push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("     {detail}"));
    }

    fn finish(
        self,
        id: &'static str,
        description: &'static str,
        started: Instant,
    ) -> CriterionResult {
        CriterionResult {
            id,
            description,
            passed: self.passed,
            details: self.details,
            runtime_seconds: started.elapsed().as_secs_f64(),
        }
    }

    fn fail_with_error(
        id: &'static str,
        description: &'static str,
        started: Instant,
        err: impl std::fmt::Display,
    ) -> CriterionResult {
        CriterionResult {
            id,
            description,
            passed: false,
            details: vec![format!("FAIL runtime error: {err}")],
            runtime_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

fn exp_gauss_config(kernel: KernelSpec, n0: usize, t_grid: Vec<f64>, runs: usize, seed: u64) -> SimConfig {
    SimConfig {
        kernel,
        n0,
        dim: 1,
        t_grid,
        init: InitialCondition {
            mass_law: MassInit::Exponential { rate: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma: 1.0 },
            symmetrize: true,
        },
        ensemble: runs,
        seed,
    }
}

/// A1: constant-kernel number decay tracks `1/(1 + t/2)` within `3·stderr`.
pub fn criterion_a1(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "constant-kernel number decay M_{0,0}(t) = 1/(1 + t/2)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sim = exp_gauss_config(
        KernelSpec::Constant,
        10_000,
        vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0],
        32,
        0xA1_2026,
    );
    let series = match ensemble_moments(&sim, &[(0.0, 0.0)]) {
        Ok(s) => s,
        Err(e) => return Checks::fail_with_error("A1", DESC, started, e),
    };
    let track = series.track(0.0, 0.0).unwrap();
    let se = track.stderr.as_ref().unwrap();
    for (idx, &t) in series.t_grid.iter().enumerate() {
        let target = 1.0 / (1.0 + 0.5 * t);
        let dev = (track.values[idx] - target).abs();
        checks.require(
            dev <= 3.0 * se[idx],
            format!(
                "t={t}: mean {:.6} vs 1/(1+t/2) {:.6} (|dev| {:.2e} <= 3 stderr {:.2e})",
                track.values[idx], target, dev, 3.0 * se[idx]
            ),
        );
    }
    checks.finish("A1", DESC, started)
}

/// A2: Monte Carlo moments of the quadratic kernel match the integrated
/// closed hierarchy, and the integrator matches the closed forms to 1e-8.
pub fn criterion_a2(cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "quadratic-kernel closed moments (MC vs ODE vs closed forms)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sigma = 0.5f64.sqrt(); // M_{0,2}(0) = 1/2
    let sim = SimConfig {
        kernel: KernelSpec::impulsion_power(2.0).unwrap(),
        n0: 10_000,
        dim: 1,
        t_grid: vec![0.5, 1.0, 2.0, 5.0],
        init: InitialCondition {
            mass_law: MassInit::Monodisperse { m0: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma },
            symmetrize: true,
        },
        ensemble: 32,
        seed: 0xA2_2026,
    };
    let series = match ensemble_moments(&sim, &[(0.0, 0.0), (0.0, 2.0), (0.0, 4.0)]) {
        Ok(s) => s,
        Err(e) => return Checks::fail_with_error("A2", DESC, started, e),
    };
    // Gaussian initial moments: M0 = 1, M2 = sigma^2, M4 = 3 sigma^4.
    let init = vec![1.0, 0.5, 0.75];
    let k_d = cfg.sphere_constant_override.unwrap_or(1.0);
    if cfg.sphere_constant_override.is_some() {
        checks.note(format!("fault injection active: sphere constant forced to {k_d}"));
    }
    for (idx, &t) in series.t_grid.iter().enumerate() {
        let state = Gamma2State::new(1, init.clone()).unwrap();
        let ode = match integrate_gamma2(&state, t, 1e-3) {
            Ok(s) => s,
            Err(e) => return Checks::fail_with_error("A2", DESC, started, e),
        };
        let last = ode.t_grid.len() - 1;
        let ode_vals = [
            ode.track(0.0, 0.0).unwrap().values[last],
            ode.track(0.0, 2.0).unwrap().values[last],
            ode.track(0.0, 4.0).unwrap().values[last],
        ];
        let closed = [
            gamma2_closed_m0(1.0, 0.5, k_d, t),
            gamma2_closed_m2(0.5, k_d, t),
            gamma2_closed_m4(0.75, 0.5, k_d, t),
        ];
        for (which, (&(alpha, beta), (&ode_v, &closed_v))) in [(0.0, 0.0), (0.0, 2.0), (0.0, 4.0)]
            .iter()
            .zip(ode_vals.iter().zip(closed.iter()))
            .enumerate()
        {
            let track = series.track(alpha, beta).unwrap();
            let se = track.stderr.as_ref().unwrap()[idx];
            let mc = track.values[idx];
            let dev = (mc - ode_v).abs();
            checks.require(
                dev <= 3.0 * se,
                format!(
                    "t={t} M_{{0,{}}}: MC {mc:.5} vs ODE {ode_v:.5} (|dev| {dev:.2e} <= {:.2e})",
                    2 * which,
                    3.0 * se
                ),
            );
            let rel = (ode_v - closed_v).abs() / closed_v.abs();
            checks.require(
                rel <= 1e-8,
                format!(
                    "t={t} M_{{0,{}}}: ODE {ode_v:.10} vs closed {closed_v:.10} (rel {rel:.2e} <= 1e-8)",
                    2 * which
                ),
            );
        }
    }
    checks.finish("A2", DESC, started)
}

/// A3: the leading coefficient of `M₆`: `M₆(t)/(1+t)^{3/2}` settles at
/// `M₆(0) - 2 M₄(0)²` with relative drift below 1e-3 between t=10³ and 10⁴.
pub fn criterion_a3(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "M6 hierarchy coefficient M6(0) - 2 M4(0)^2";
    let started = Instant::now();
    let mut checks = Checks::new();
    // Gaussian with M2(0) = 1/2: (M0, M2, M4, M6) = (1, 1/2, 3/4, 15/8).
    let init = vec![1.0, 0.5, 0.75, 1.875];
    let limit = 1.875 - 2.0 * 0.75 * 0.75;
    let mut scaled = Vec::new();
    for t_end in [1e3, 1e4] {
        let state = Gamma2State::new(1, init.clone()).unwrap();
        let series = match integrate_gamma2(&state, t_end, 0.01) {
            Ok(s) => s,
            Err(e) => return Checks::fail_with_error("A3", DESC, started, e),
        };
        let last = series.t_grid.len() - 1;
        let m6 = series.track(0.0, 6.0).unwrap().values[last];
        scaled.push(m6 / (1.0 + t_end).powf(1.5));
    }
    let drift = (scaled[1] - scaled[0]).abs() / scaled[0].abs();
    checks.require(
        drift < 1e-3,
        format!(
            "M6/(1+t)^{{3/2}}: {:.9} at t=1e3, {:.9} at t=1e4 (rel drift {drift:.2e} < 1e-3)",
            scaled[0], scaled[1]
        ),
    );
    let off = (scaled[1] - limit).abs() / limit;
    checks.require(
        off < 1e-3,
        format!("limit {:.9} vs M6(0) - 2 M4(0)^2 = {limit} (rel {off:.2e})", scaled[1]),
    );
    checks.finish("A3", DESC, started)
}

/// A4: `γ = 1, d = 1` moment brackets at `3·stderr + 5%` tolerance.
pub fn criterion_a4(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "gamma=1 moment brackets (M0..M3)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sim = SimConfig {
        kernel: KernelSpec::impulsion_power(1.0).unwrap(),
        n0: 10_000,
        dim: 1,
        t_grid: vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0],
        init: InitialCondition {
            mass_law: MassInit::Monodisperse { m0: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma: 1.0 },
            symmetrize: true,
        },
        ensemble: 32,
        seed: 0xA4_2026,
    };
    let pairs = [(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (0.0, 3.0)];
    let series = match ensemble_moments(&sim, &pairs) {
        Ok(s) => s,
        Err(e) => return Checks::fail_with_error("A4", DESC, started, e),
    };
    // standard Gaussian impulsion moments
    let sq2pi = (2.0 / std::f64::consts::PI).sqrt();
    let init = Gamma1Initials {
        m0: 1.0,
        m1: sq2pi,
        m2: 1.0,
        m3: 2.0 * sq2pi,
    };
    let reports = match check_gamma1_brackets(&series, &init, &BoundTolerance::default()) {
        Ok(r) => r,
        Err(e) => return Checks::fail_with_error("A4", DESC, started, e),
    };
    for report in reports {
        checks.require(report.passed, format!("{} ({})", report.claim, report.summary));
    }
    checks.finish("A4", DESC, started)
}

/// A5: rescaled empirical moments of the constant kernel converge to the
/// limit-profile moments: monotone shrinking gap, final gap < 10% + 3·stderr.
pub fn criterion_a5(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "self-similar convergence of rescaled moments (constant kernel)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sim = exp_gauss_config(
        KernelSpec::Constant,
        10_000,
        vec![20.0, 80.0, 320.0],
        32,
        0xA5_2026,
    );
    let pairs = [(0.0, 0.0), (1.0, 0.0), (0.0, 2.0)];
    let series = match ensemble_moments(&sim, &pairs) {
        Ok(s) => s,
        Err(e) => return Checks::fail_with_error("A5", DESC, started, e),
    };
    let sol = TransformSolution::exp_gaussian();
    for &(alpha, beta) in &pairs {
        let mu = limit_profile_moments(&sol, alpha as u32, beta as u32).unwrap();
        let track = series.track(alpha, beta).unwrap();
        let se = track.stderr.as_ref().unwrap();
        let exponent = 1.0 - alpha - beta / 2.0;
        let mut gaps = Vec::new();
        let mut scaled_se = Vec::new();
        for (idx, &t) in series.t_grid.iter().enumerate() {
            let factor = t.powf(exponent);
            gaps.push((factor * track.values[idx] - mu).abs());
            scaled_se.push(factor * se[idx]);
        }
        for idx in 1..gaps.len() {
            checks.require(
                gaps[idx] <= gaps[idx - 1] + 3.0 * (scaled_se[idx] + scaled_se[idx - 1]),
                format!(
                    "(alpha,beta)=({alpha},{beta}) gap at t={} is {:.4e}, previous {:.4e} (noise allowance {:.1e})",
                    series.t_grid[idx],
                    gaps[idx],
                    gaps[idx - 1],
                    3.0 * (scaled_se[idx] + scaled_se[idx - 1]),
                ),
            );
        }
        let last = gaps.len() - 1;
        checks.require(
            gaps[last] < 0.10 * mu + 3.0 * scaled_se[last],
            format!(
                "(alpha,beta)=({alpha},{beta}) final gap {:.4e} < 10% of mu={mu} + 3 stderr",
                gaps[last]
            ),
        );
    }
    checks.finish("A5", DESC, started)
}

/// A6: hard-sphere decay bound `M_{-1/3,1}(t) ≤ 1/(A + t/4)` with 5% slack.
pub fn criterion_a6(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "hard-sphere bound M_{-1/3,1}(t) <= 1/(A + t/4)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sim = SimConfig {
        kernel: KernelSpec::HardSphere,
        n0: 5_000,
        dim: 3,
        t_grid: vec![0.0, 1.0, 2.0, 5.0, 10.0],
        init: InitialCondition {
            mass_law: MassInit::Monodisperse { m0: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma: 1.0 },
            symmetrize: true,
        },
        ensemble: 16,
        seed: 0xA6_2026,
    };
    let series = match ensemble_moments(&sim, &[(-1.0 / 3.0, 1.0)]) {
        Ok(s) => s,
        Err(e) => return Checks::fail_with_error("A6", DESC, started, e),
    };
    let a_inv = series.track(-1.0 / 3.0, 1.0).unwrap().values[0];
    let report = match check_hs_bound(&series, a_inv, &BoundTolerance::default()) {
        Ok(r) => r,
        Err(e) => return Checks::fail_with_error("A6", DESC, started, e),
    };
    checks.note(format!("A^-1 = M_{{-1/3,1}}(0) = {a_inv:.6}"));
    for row in &report.rows {
        checks.require(
            row.passed,
            format!(
                "t={}: value {:.6} <= bound {:.6} (+5% + 3 stderr = {:.6})",
                row.t, row.value, row.bound, row.allowed
            ),
        );
    }
    checks.finish("A6", DESC, started)
}

/// A7: transform identities — Bernoulli residual, self-similar transform
/// equation residual, and the profile↔transform quadrature match.
pub fn criterion_a7(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "transform identities (Bernoulli, selfsim PDE, profile quadrature)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let sol = TransformSolution::exp_gaussian();

    let mut worst_bernoulli: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let zeta = Complex64::new(0.1 + 0.2 * i as f64, 0.0);
            let xi = -2.0 + 4.0 * j as f64 / 9.0;
            match bernoulli_residual(&sol, 1.0, zeta, xi, 1e-3) {
                Ok(r) => worst_bernoulli = worst_bernoulli.max(r),
                Err(e) => return Checks::fail_with_error("A7", DESC, started, e),
            }
        }
    }
    checks.require(
        worst_bernoulli < 1e-5,
        format!("Bernoulli residual on 10x10 grid at h=1e-3: worst {worst_bernoulli:.2e} < 1e-5"),
    );

    let zp1 = SelfSimProfile::new(PhiDescriptor::ZPlusOne);
    let mut worst_pde: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let zeta = 0.5 + 1.5 * i as f64 / 9.0;
            let xi = -1.5 + 3.0 * j as f64 / 9.0;
            match selfsim_transform_pde_residual(&zp1, zeta, xi, 1e-4) {
                Ok(r) => worst_pde = worst_pde.max(r),
                Err(e) => return Checks::fail_with_error("A7", DESC, started, e),
            }
        }
    }
    checks.require(
        worst_pde < 1e-7,
        format!("selfsim transform equation residual (Z+1): worst {worst_pde:.2e} < 1e-7"),
    );

    let quad_cfg = QuadConfig::with_tol(1e-11, 1e-9);
    let mut worst_rel: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let zeta = 1.8 * i as f64 / 9.0;
            let xi = -2.0 + 4.0 * j as f64 / 9.0;
            let exact = psi_infty(&sol, zeta, xi).unwrap();
            match profile_transform_quadrature(&sol, zeta, xi, &quad_cfg) {
                Ok(numeric) => worst_rel = worst_rel.max((numeric - exact).abs() / exact.abs()),
                Err(e) => return Checks::fail_with_error("A7", DESC, started, e),
            }
        }
    }
    checks.require(
        worst_rel < 1e-6,
        format!("profile transform vs psi_infty on 10x10 grid: worst rel {worst_rel:.2e} < 1e-6"),
    );
    checks.finish("A7", DESC, started)
}

/// A8: lift correctness — factorization, lifted residual, P_k scaling slopes.
pub fn criterion_a8(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "mass-solution lift (factorization, residual, P_k slopes)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let spec = LiftSpec::quadratic();
    let eta_grid: Vec<[f64; 3]> = (0..30)
        .map(|k| {
            let s = 0.15 * k as f64;
            [s, -0.4 * s, 0.7 * s]
        })
        .collect();
    match factorization_check(&spec, 2.0, 0.7, &eta_grid) {
        Ok(worst) => checks.require(
            worst < 1e-12,
            format!("factorization residual {worst:.2e} < 1e-12"),
        ),
        Err(e) => return Checks::fail_with_error("A8", DESC, started, e),
    }

    let mass = MassSolution::constant_kernel_exact();
    let quad_cfg = QuadConfig::with_tol(1e-13, 1e-11);
    let masses = [0.1, 0.3, 0.7, 1.0, 1.8, 3.0, 5.0, 8.0, 12.0, 20.0];
    let points: Vec<(f64, [f64; 3])> = masses
        .iter()
        .map(|&m| (m, [0.3 * m, 0.0, -0.1]))
        .collect();
    let mut worst_resid: f64 = 0.0;
    for t in [0.5, 5.0] {
        match residual_check(&mass, &spec, t, &points, &quad_cfg) {
            Ok(r) => worst_resid = worst_resid.max(r),
            Err(e) => return Checks::fail_with_error("A8", DESC, started, e),
        }
    }
    checks.require(
        worst_resid < 1e-6,
        format!("lifted-equation residual at 20 collocation points: {worst_resid:.2e} < 1e-6"),
    );

    let pk_cfg = QuadConfig::with_tol(1e-11, 1e-9);
    let t_grid: Vec<f64> = (0..10)
        .map(|i| 100.0 * 10f64.powf(i as f64 / 9.0))
        .collect();
    for k in [0u32, 1, 2] {
        match pk_scaling_check(&mass, &spec, k, &t_grid, &pk_cfg) {
            Ok(fit) => checks.require(
                (fit.slope - fit.expected).abs() < 0.05,
                format!(
                    "P_{k} slope {:.4} vs -(1-k theta)/(1-lambda) = {:.4}",
                    fit.slope, fit.expected
                ),
            ),
            Err(e) => return Checks::fail_with_error("A8", DESC, started, e),
        }
    }
    checks.finish("A8", DESC, started)
}

struct AuditTotals {
    events: u64,
    violations: u64,
    notes: Vec<String>,
}

fn audit_kernel(kernel: KernelSpec, n0: usize, dim: usize, t_end: f64, seed: u64) -> Result<AuditTotals, crate::sim::SimError> {
    let sigma = if matches!(kernel, KernelSpec::ImpulsionPower { gamma } if gamma == 2.0) {
        0.5f64.sqrt()
    } else {
        1.0
    };
    let cfg = SimConfig {
        kernel,
        n0,
        dim,
        t_grid: vec![t_end],
        init: InitialCondition {
            mass_law: MassInit::Monodisperse { m0: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma },
            symmetrize: true,
        },
        ensemble: 1,
        seed,
    };
    let mut sys = ParticleSystem::init(&cfg, 0)?;
    let mass_before = sys.total_mass();
    let p_before = sys.total_impulsion();
    let p_scale: f64 = sys
        .particles()
        .iter()
        .map(|p| p.abs_impulsion())
        .sum::<f64>()
        .max(1.0);
    let mut events = 0u64;
    let mut violations = 0u64;
    sys.run_to_with(t_end, |e| {
        events += 1;
        let rebuilt = coalesce(&e.first, &e.second).unwrap();
        // exact per-event conservation: the merged particle is bitwise the
        // sum of its parents
        if e.merged != rebuilt
            || e.merged.mass() != e.first.mass() + e.second.mass()
        {
            violations += 1;
        }
        let e_in = e.first.kinetic_energy() + e.second.kinetic_energy();
        let dissipated = e_in - e.merged.kinetic_energy();
        let identity = kinetic_energy_loss(&e.first, &e.second).unwrap();
        if (dissipated - identity).abs() > 1e-12 * e_in.max(1.0) {
            violations += 1;
        }
        if e.merged.kinetic_energy() > e_in * (1.0 + 1e-12) {
            violations += 1;
        }
        let vmax = e.first.speed().max(e.second.speed());
        if e.merged.speed() > vmax * (1.0 + 1e-12) {
            violations += 1;
        }
        for beta in [0.5, 1.0] {
            let merged = e.merged.abs_impulsion().powf(beta);
            let parents =
                e.first.abs_impulsion().powf(beta) + e.second.abs_impulsion().powf(beta);
            if merged > parents * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    })?;
    let mass_after = sys.total_mass();
    let p_after = sys.total_impulsion();
    let mut notes = Vec::new();
    if (mass_after - mass_before).abs() > 1e-12 * mass_before {
        violations += 1;
        notes.push(format!(
            "total mass drifted: {mass_before} -> {mass_after}"
        ));
    }
    let p_drift = (0..3)
        .map(|c| (p_after[c] - p_before[c]).abs())
        .fold(0.0, f64::max);
    if p_drift > 1e-12 * p_scale {
        violations += 1;
        notes.push(format!("total impulsion drifted by {p_drift:e}"));
    }
    Ok(AuditTotals {
        events,
        violations,
        notes,
    })
}

/// A9: conservation/dissipation audit over at least 1e5 events across the
/// constant, γ=1, γ=2 and hard-sphere kernels; zero violations allowed.
pub fn criterion_a9(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "conservation and dissipation audit (>= 1e5 events, zero violations)";
    let started = Instant::now();
    let mut checks = Checks::new();
    let plan: Vec<(&str, KernelSpec, usize, usize, f64)> = vec![
        ("constant", KernelSpec::Constant, 40_000, 1, 100.0),
        (
            "gamma=1",
            KernelSpec::impulsion_power(1.0).unwrap(),
            30_000,
            1,
            50.0,
        ),
        (
            "gamma=2",
            KernelSpec::impulsion_power(2.0).unwrap(),
            30_000,
            1,
            50.0,
        ),
        ("hard-sphere", KernelSpec::HardSphere, 10_000, 3, 10.0),
    ];
    let mut total_events = 0u64;
    for (label, kernel, n0, dim, t_end) in plan {
        match audit_kernel(kernel, n0, dim, t_end, 0xA9_2026) {
            Ok(audit) => {
                total_events += audit.events;
                checks.require(
                    audit.violations == 0,
                    format!(
                        "{label}: {} events, {} violations",
                        audit.events, audit.violations
                    ),
                );
                for n in audit.notes {
                    checks.note(n);
                }
            }
            Err(e) => return Checks::fail_with_error("A9", DESC, started, e),
        }
    }
    checks.require(
        total_events >= 100_000,
        format!("audited {total_events} events (>= 1e5 required)"),
    );
    checks.finish("A9", DESC, started)
}

/// 99th percentiles of the chi-squared distribution for the degrees of
/// freedom used by A10 (pair counts C(n,2)-1 and 20 time bins).
fn chi2_99(df: usize) -> f64 {
    match df {
        2 => 9.210340,
        5 => 15.086272,
        9 => 21.665994,
        14 => 29.141238,
        19 => 36.190869,
        _ => panic!("chi-squared quantile for df={df} not tabulated"),
    }
}

/// A10: small monodisperse systems match the exact first-event law — the
/// merger pair is uniform over pairs and the waiting time is exponential
/// with rate `n(n-1)/(2 n0)` — by chi-squared tests at the 1% level.
pub fn criterion_a10(_cfg: &VerifyConfig) -> CriterionResult {
    const DESC: &str = "small-system first-event law vs exact enumeration (chi-squared, 1%)";
    let started = Instant::now();
    let mut checks = Checks::new();
    const TRIALS: usize = 100_000;
    const TIME_BINS: usize = 20;
    for n in 3usize..=6 {
        let pair_count = n * (n - 1) / 2;
        let mut pair_hits = vec![0u64; pair_count];
        let mut time_hits = [0u64; TIME_BINS];
        let rate = (n as f64) * (n as f64 - 1.0) / (2.0 * n as f64);
        let template: Vec<ParticleState> = (0..n)
            .map(|_| ParticleState::new(1.0, &[0.0]).unwrap())
            .collect();
        for trial in 0..TRIALS {
            let mut sys = ParticleSystem::from_particles(
                KernelSpec::Constant,
                template.clone(),
                n,
                0xA10_2026 + n as u64,
                trial as u64,
            )
            .unwrap();
            let event = match sys.next_event(f64::INFINITY) {
                Ok(Some(e)) => e,
                Ok(None) => {
                    return Checks::fail_with_error("A10", DESC, started, "no event fired")
                }
                Err(e) => return Checks::fail_with_error("A10", DESC, started, e),
            };
            let (lo, hi) = event.indices;
            // unordered pair index in lexicographic order
            let pair_idx = lo * n - lo * (lo + 1) / 2 + (hi - lo - 1);
            pair_hits[pair_idx] += 1;
            // equiprobable exponential bins: edges -ln(1 - k/B)/rate
            let u = 1.0 - (-rate * event.time).exp();
            let bin = ((u * TIME_BINS as f64) as usize).min(TIME_BINS - 1);
            time_hits[bin] += 1;
        }
        let expected_pair = TRIALS as f64 / pair_count as f64;
        let chi2_pair: f64 = pair_hits
            .iter()
            .map(|&o| {
                let d = o as f64 - expected_pair;
                d * d / expected_pair
            })
            .sum();
        let crit_pair = chi2_99(pair_count - 1);
        checks.require(
            chi2_pair < crit_pair,
            format!(
                "n0={n}: pair-choice chi2 {chi2_pair:.2} < {crit_pair:.2} (df {})",
                pair_count - 1
            ),
        );
        let expected_time = TRIALS as f64 / TIME_BINS as f64;
        let chi2_time: f64 = time_hits
            .iter()
            .map(|&o| {
                let d = o as f64 - expected_time;
                d * d / expected_time
            })
            .sum();
        let crit_time = chi2_99(TIME_BINS - 1);
        checks.require(
            chi2_time < crit_time,
            format!(
                "n0={n}: event-time chi2 {chi2_time:.2} < {crit_time:.2} (df {})",
                TIME_BINS - 1
            ),
        );
    }
    checks.finish("A10", DESC, started)
}

/// Run the full suite in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    vec![
        criterion_a1(cfg),
        criterion_a2(cfg),
        criterion_a3(cfg),
        criterion_a4(cfg),
        criterion_a5(cfg),
        criterion_a6(cfg),
        criterion_a7(cfg),
        criterion_a8(cfg),
        criterion_a9(cfg),
        criterion_a10(cfg),
    ]
}
