//! Moment series, the closed moment hierarchy for the quadratic impulsion
//! kernel, and checkers for the decay bounds satisfied by generic solutions.
//!
//! For `a = |p - p'|²` and radially symmetric data the even impulsion
//! moments close: `dM₀/dt = -M₂M₀`, `dM₂/dt = -2 k_d M₂²`,
//! `dM₄/dt = (2 - 4 k_d) M₂ M₄` with `k_d = 1/d` the mean of `σ₁²` over the
//! unit sphere, and in one dimension the full hierarchy
//! `dM_{2α}/dt = Σ_{β=1}^{α-1} C(2α,2β) M_{2β} M_{2(α+1-β)}
//!             - Σ_{β=0}^{α-1} C(2α,2β+1) M_{2β+2} M_{2(α-β)}`.
//!
//! Closed forms are used in the normalized shape
//! `M(t) = M(0) (1 + 2 k_d M₂(0) t)^q`, which agrees with the raw
//! `(M₂(0)^{-1} + 2 k_d t)^q` shape exactly when `M₂(0) = 1` and is the one
//! consistent at `t = 0`; the fixed-step RK4 integrator double-checks both.

use crate::kernel::{eval_kernel, KernelError, KernelSpec};
use crate::sim::ParticleSystem;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MomentError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("hierarchy with more than three closed moments requires d = 1, got d = {d} with {orders} orders")]
    HierarchyRequiresD1 { d: usize, orders: usize },
    #[error("invalid moment state: {0}")]
    InvalidState(String),
    #[error("series layout invalid: {0}")]
    InvalidSeries(String),
    #[error("step-doubling check failed: halving dt changes the trajectory by {max_rel_diff:e} (> {tol:e})")]
    StepDoubling { max_rel_diff: f64, tol: f64 },
    #[error("Cauchy-Schwarz chain violated during integration at t = {t}: M_{{2β}}² > M_{{2β-2}}·M_{{2β+2}} for β = {beta}")]
    CauchySchwarz { t: f64, beta: usize },
    #[error("series track (alpha={alpha}, beta={beta}) missing")]
    MissingTrack { alpha: f64, beta: f64 },
    #[error("Monte Carlo standard errors missing from series")]
    MissingStderr,
    #[error("series carries kernel tag {found:?}, expected {expected:?}")]
    WrongKernel { expected: String, found: String },
    #[error("moment value {0} is zero; scaling ratio undefined")]
    ZeroMoment(f64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Where a series came from; Monte Carlo series carry standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MonteCarlo,
    Ode,
    ClosedForm,
}

/// One `(α, β)` moment trajectory on the shared time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTrack {
    pub alpha: f64,
    pub beta: f64,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

/// Time grid with per-(α, β) moment values, plus reproducibility metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries {
    pub t_grid: Vec<f64>,
    pub tracks: Vec<MomentTrack>,
    pub provenance: Provenance,
    /// Number of independent runs (Monte Carlo only).
    pub runs: Option<usize>,
    /// Kernel tag of the generating simulation (Monte Carlo only).
    pub kernel_tag: Option<String>,
    /// Spatial dimension of the generating simulation (Monte Carlo only).
    pub dim: Option<usize>,
}

impl MomentSeries {
    pub fn new(
        t_grid: Vec<f64>,
        tracks: Vec<MomentTrack>,
        provenance: Provenance,
        runs: Option<usize>,
        kernel_tag: Option<String>,
        dim: Option<usize>,
    ) -> Result<Self, MomentError> {
        if t_grid.is_empty() || tracks.is_empty() {
            return Err(MomentError::InvalidSeries("empty grid or tracks".into()));
        }
        for track in &tracks {
            if track.values.len() != t_grid.len() {
                return Err(MomentError::InvalidSeries(format!(
                    "track ({}, {}) has {} values for {} grid times",
                    track.alpha,
                    track.beta,
                    track.values.len(),
                    t_grid.len()
                )));
            }
            let has_stderr = track.stderr.is_some();
            if has_stderr != (provenance == Provenance::MonteCarlo) {
                return Err(MomentError::InvalidSeries(
                    "standard errors must be present exactly for Monte Carlo series".into(),
                ));
            }
            if let Some(se) = &track.stderr {
                if se.len() != t_grid.len() {
                    return Err(MomentError::InvalidSeries("stderr length mismatch".into()));
                }
            }
        }
        Ok(MomentSeries {
            t_grid,
            tracks,
            provenance,
            runs,
            kernel_tag,
            dim,
        })
    }

    pub fn track(&self, alpha: f64, beta: f64) -> Option<&MomentTrack> {
        self.tracks
            .iter()
            .find(|tr| tr.alpha == alpha && tr.beta == beta)
    }

    fn track_with_stderr(&self, alpha: f64, beta: f64) -> Result<(&MomentTrack, &[f64]), MomentError> {
        let track = self
            .track(alpha, beta)
            .ok_or(MomentError::MissingTrack { alpha, beta })?;
        let se = track.stderr.as_deref().ok_or(MomentError::MissingStderr)?;
        Ok((track, se))
    }
}

/// Mean of `σ₁²` over the unit sphere `S^{d-1}`: `k_d = 1/d`.
///
/// The quadratic-kernel closure lemma states `k₁ := 2` but its own proof
/// computes `k₁ = 1` (and `k₂ = 1/2`), consistent with this definition; the
/// proof value is the one used throughout.
pub fn sphere_constant(d: usize) -> Result<f64, MomentError> {
    if !(1..=3).contains(&d) {
        return Err(MomentError::InvalidDimension(d));
    }
    Ok(1.0 / d as f64)
}

/// Even-moment state `(M₀, M₂, …, M_{2B})` of the quadratic-kernel hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma2State {
    d: usize,
    k_d: f64,
    values: Vec<f64>,
}

impl Gamma2State {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self, MomentError> {
        let k_d = sphere_constant(d)?;
        Self::with_sphere_constant(d, k_d, values)
    }

    /// Like [`Gamma2State::new`] but with an explicit sphere constant;
    /// exists so the verification suite can exercise fault injection.
    pub fn with_sphere_constant(d: usize, k_d: f64, values: Vec<f64>) -> Result<Self, MomentError> {
        if !(1..=3).contains(&d) {
            return Err(MomentError::InvalidDimension(d));
        }
        if values.len() < 2 {
            return Err(MomentError::InvalidState(
                "need at least (M0, M2)".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(MomentError::InvalidState(
                "moments must be finite and nonnegative".into(),
            ));
        }
        Ok(Gamma2State { d, k_d, values })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn sphere_constant(&self) -> f64 {
        self.k_d
    }

    /// `(M₀, M₂, …, M_{2B})`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest half-order B.
    pub fn max_half_order(&self) -> usize {
        self.values.len() - 1
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Time derivative of `(M₀, …, M_{2B})` under the quadratic impulsion kernel.
///
/// In one dimension the full recursion applies for any B; for `d ∈ {2, 3}`
/// only the closed `M₀, M₂, M₄` equations are available (`B ≤ 2`).
pub fn gamma2_rhs(state: &Gamma2State) -> Result<Vec<f64>, MomentError> {
    let b_max = state.max_half_order();
    if state.d != 1 && b_max > 2 {
        return Err(MomentError::HierarchyRequiresD1 {
            d: state.d,
            orders: b_max + 1,
        });
    }
    let m = &state.values;
    let mut out = vec![0.0; m.len()];
    out[0] = -m[1] * m[0];
    if state.d == 1 {
        for alpha in 1..=b_max {
            let mut gain = 0.0;
            for beta in 1..alpha {
                gain += binomial(2 * alpha, 2 * beta) * m[beta] * m[alpha + 1 - beta];
            }
            let mut loss = 0.0;
            for beta in 0..alpha {
                loss += binomial(2 * alpha, 2 * beta + 1) * m[beta + 1] * m[alpha - beta];
            }
            out[alpha] = gain - loss;
        }
    } else {
        out[1] = -2.0 * state.k_d * m[1] * m[1];
        if b_max >= 2 {
            out[2] = (2.0 - 4.0 * state.k_d) * m[1] * m[2];
        }
    }
    Ok(out)
}

/// Normalized closed forms for the quadratic kernel.
pub fn gamma2_closed_m0(m0_0: f64, m2_0: f64, k_d: f64, t: f64) -> f64 {
    m0_0 * (1.0 + 2.0 * k_d * m2_0 * t).powf(-1.0 / (2.0 * k_d))
}

pub fn gamma2_closed_m2(m2_0: f64, k_d: f64, t: f64) -> f64 {
    m2_0 / (1.0 + 2.0 * k_d * m2_0 * t)
}

pub fn gamma2_closed_m4(m4_0: f64, m2_0: f64, k_d: f64, t: f64) -> f64 {
    m4_0 * (1.0 + 2.0 * k_d * m2_0 * t).powf(1.0 / k_d - 2.0)
}

const STEP_DOUBLING_TOL: f64 = 1e-8;
const CAUCHY_SCHWARZ_SLACK: f64 = 1e-9;
const MAX_OUTPUT_POINTS: usize = 2000;

fn check_cauchy_schwarz(values: &[f64], t: f64) -> Result<(), MomentError> {
    for beta in 1..values.len().saturating_sub(1) {
        let lhs = values[beta] * values[beta];
        let rhs = values[beta - 1] * values[beta + 1];
        if lhs > rhs * (1.0 + CAUCHY_SCHWARZ_SLACK) {
            return Err(MomentError::CauchySchwarz { t, beta });
        }
    }
    Ok(())
}

fn rk4_trajectory(
    state0: &Gamma2State,
    n_steps: usize,
    dt: f64,
    record_every: usize,
) -> Result<Vec<Vec<f64>>, MomentError> {
    let mut values = state0.values.clone();
    let mut recorded = Vec::with_capacity(n_steps / record_every + 2);
    recorded.push(values.clone());
    let deriv = |v: &[f64]| -> Result<Vec<f64>, MomentError> {
        let s = Gamma2State {
            d: state0.d,
            k_d: state0.k_d,
            values: v.to_vec(),
        };
        gamma2_rhs(&s)
    };
    let n = values.len();
    for step in 0..n_steps {
        let k1 = deriv(&values)?;
        let mut tmp: Vec<f64> = (0..n).map(|i| values[i] + 0.5 * dt * k1[i]).collect();
        let k2 = deriv(&tmp)?;
        for i in 0..n {
            tmp[i] = values[i] + 0.5 * dt * k2[i];
        }
        let k3 = deriv(&tmp)?;
        for i in 0..n {
            tmp[i] = values[i] + dt * k3[i];
        }
        let k4 = deriv(&tmp)?;
        for i in 0..n {
            values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t = (step + 1) as f64 * dt;
        check_cauchy_schwarz(&values, t)?;
        if (step + 1).is_multiple_of(record_every) {
            recorded.push(values.clone());
        }
    }
    Ok(recorded)
}

/// Integrate the closed hierarchy with fixed-step RK4 on a uniform grid.
///
/// A built-in step-doubling run at `dt/2` must agree with the `dt` run to
/// `1e-8` relative at every output time or the integration is rejected; the
/// returned trajectory is the finer one. The Cauchy–Schwarz chain
/// `M_{2β}² ≤ M_{2β-2} M_{2β+2}` is asserted after every step. Output is
/// thinned to at most 2000 uniform intervals.
pub fn integrate_gamma2(
    state0: &Gamma2State,
    t_end: f64,
    dt: f64,
) -> Result<MomentSeries, MomentError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(MomentError::InvalidState(format!("t_end must be positive, got {t_end}")));
    }
    if !(dt > 0.0 && dt <= t_end) {
        return Err(MomentError::InvalidState(format!("dt must lie in (0, t_end], got {dt}")));
    }
    if state0.values.iter().any(|v| *v <= 0.0) {
        return Err(MomentError::InvalidState(
            "integration requires strictly positive initial moments".into(),
        ));
    }
    check_cauchy_schwarz(&state0.values, 0.0)?;

    let raw_steps = (t_end / dt).ceil() as usize;
    let outputs = raw_steps.min(MAX_OUTPUT_POINTS);
    // round the step count up to a multiple of the output count so the
    // recorded grid stays uniform and ends exactly at t_end
    let n_steps = raw_steps.div_ceil(outputs) * outputs;
    let record_every = n_steps / outputs;
    let dt_eff = t_end / n_steps as f64;

    let coarse = rk4_trajectory(state0, n_steps, dt_eff, record_every)?;
    let fine = rk4_trajectory(state0, 2 * n_steps, 0.5 * dt_eff, 2 * record_every)?;
    let mut max_rel_diff: f64 = 0.0;
    for (c_row, f_row) in coarse.iter().zip(&fine) {
        for (c, f) in c_row.iter().zip(f_row) {
            let scale = c.abs().max(f.abs()).max(f64::MIN_POSITIVE);
            max_rel_diff = max_rel_diff.max((c - f).abs() / scale);
        }
    }
    if max_rel_diff > STEP_DOUBLING_TOL {
        return Err(MomentError::StepDoubling {
            max_rel_diff,
            tol: STEP_DOUBLING_TOL,
        });
    }

    let t_grid: Vec<f64> = (0..=outputs)
        .map(|k| k as f64 * record_every as f64 * dt_eff)
        .collect();
    let tracks = (0..state0.values.len())
        .map(|order| MomentTrack {
            alpha: 0.0,
            beta: 2.0 * order as f64,
            values: fine.iter().map(|row| row[order]).collect(),
            stderr: None,
        })
        .collect();
    MomentSeries::new(t_grid, tracks, Provenance::Ode, None, None, None)
}

/// Empirical right-hand side of `dM_α/dt` for the current system:
/// `(1/2)(1/n0²) Σ_{i≠j} a(y_i, y_j) [|p_i+p_j|^α - |p_i|^α - |p_j|^α]`.
pub fn moment_drift(
    kernel: &KernelSpec,
    system: &ParticleSystem,
    alpha: f64,
) -> Result<f64, MomentError> {
    let particles = system.particles();
    let n0 = system.n0() as f64;
    let mut sum = 0.0;
    for i in 0..particles.len() {
        for j in (i + 1)..particles.len() {
            let rate = eval_kernel(kernel, &particles[i], &particles[j])?;
            if rate == 0.0 {
                continue;
            }
            let merged_norm = {
                let a = particles[i].impulsion_padded();
                let b = particles[j].impulsion_padded();
                let s = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
            };
            let bracket = pow0(merged_norm, alpha)
                - pow0(particles[i].abs_impulsion(), alpha)
                - pow0(particles[j].abs_impulsion(), alpha);
            sum += rate * bracket;
        }
    }
    Ok(sum / (n0 * n0))
}

fn pow0(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else {
        base.powf(exponent)
    }
}

/// Tolerances for statistical bound checks: `value` passes an upper bound
/// `b` when `value <= b (1 + model_slack) + stderr_multiplier · stderr`.
#[derive(Debug, Clone, Copy)]
pub struct BoundTolerance {
    pub stderr_multiplier: f64,
    pub model_slack: f64,
}

impl Default for BoundTolerance {
    fn default() -> Self {
        BoundTolerance {
            stderr_multiplier: 3.0,
            model_slack: 0.05,
        }
    }
}

/// One grid time of a bound check. For upper bounds `slack = value - allowed`
/// (positive means violation); for lower bounds `slack = allowed - value`.
#[derive(Debug, Clone)]
pub struct BoundRow {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
    pub allowed: f64,
    pub passed: bool,
    pub slack: f64,
}

/// Pass/fail record for one claimed bound over a series.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub claim: String,
    pub rows: Vec<BoundRow>,
    pub passed: bool,
    pub summary: String,
}

impl BoundReport {
    fn from_rows(claim: &str, rows: Vec<BoundRow>) -> Self {
        let passed = rows.iter().all(|r| r.passed);
        let worst = rows
            .iter()
            .map(|r| r.slack)
            .fold(f64::NEG_INFINITY, f64::max);
        BoundReport {
            claim: claim.to_string(),
            passed,
            summary: format!("worst slack {worst:.3e}"),
            rows,
        }
    }
}

enum Side {
    Upper,
    Lower,
}

fn check_side(
    claim: &str,
    t_grid: &[f64],
    values: &[f64],
    stderr: &[f64],
    bound_at: impl Fn(f64) -> f64,
    side: Side,
    tol: &BoundTolerance,
) -> BoundReport {
    let rows = t_grid
        .iter()
        .zip(values.iter().zip(stderr))
        .map(|(&t, (&value, &se))| {
            let bound = bound_at(t);
            let (allowed, passed, slack) = match side {
                Side::Upper => {
                    let allowed = bound * (1.0 + tol.model_slack) + tol.stderr_multiplier * se;
                    (allowed, value <= allowed, value - allowed)
                }
                Side::Lower => {
                    let allowed = bound / (1.0 + tol.model_slack) - tol.stderr_multiplier * se;
                    (allowed, value >= allowed, allowed - value)
                }
            };
            BoundRow {
                t,
                value,
                bound,
                allowed,
                passed,
                slack,
            }
        })
        .collect();
    BoundReport::from_rows(claim, rows)
}

/// Hard-sphere decay bound `M_{-1/3,1}(t) ≤ 1/(A + t/4)` with
/// `A⁻¹ = M_{-1/3,1}(0)`, checked against a Monte Carlo series.
pub fn check_hs_bound(
    series: &MomentSeries,
    a_inv: f64,
    tol: &BoundTolerance,
) -> Result<BoundReport, MomentError> {
    if let Some(tag) = &series.kernel_tag {
        if tag != "hard_sphere" {
            return Err(MomentError::WrongKernel {
                expected: "hard_sphere".into(),
                found: tag.clone(),
            });
        }
    }
    if !(a_inv > 0.0) {
        return Err(MomentError::InvalidState(format!("A^-1 must be positive, got {a_inv}")));
    }
    let (track, se) = series.track_with_stderr(-1.0 / 3.0, 1.0)?;
    let a = 1.0 / a_inv;
    Ok(check_side(
        "hard-sphere: M_{-1/3,1}(t) <= 1/(A + t/4)",
        &series.t_grid,
        &track.values,
        se,
        |t| 1.0 / (a + t / 4.0),
        Side::Upper,
        tol,
    ))
}

/// Initial impulsion moments used by the one-dimensional `γ = 1` brackets.
#[derive(Debug, Clone, Copy)]
pub struct Gamma1Initials {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

/// Bracket checks for `a = |p - p'|`, `d = 1`:
/// `1/(M₁(0)⁻¹ + t) ≤ M₁ ≤ 1/(M₁(0)⁻¹ + t/2)`, the two-sided `M₀` bracket,
/// and `M_α(0)/(1 + M₁(0)t/2)² ≤ M_α ≤ M_α(0)` for `α ∈ {2, 3}`.
pub fn check_gamma1_brackets(
    series: &MomentSeries,
    init: &Gamma1Initials,
    tol: &BoundTolerance,
) -> Result<Vec<BoundReport>, MomentError> {
    if let Some(tag) = &series.kernel_tag {
        if tag != "impulsion_power(1)" {
            return Err(MomentError::WrongKernel {
                expected: "impulsion_power(1)".into(),
                found: tag.clone(),
            });
        }
    }
    if let Some(d) = series.dim {
        if d != 1 {
            return Err(MomentError::InvalidSeries(format!(
                "gamma=1 brackets apply to d = 1 data, got d = {d}"
            )));
        }
    }
    let mut reports = Vec::new();
    let (m1, se1) = series.track_with_stderr(0.0, 1.0)?;
    reports.push(check_side(
        "gamma1: M1 lower bound 1/(M1(0)^-1 + t)",
        &series.t_grid,
        &m1.values,
        se1,
        |t| 1.0 / (1.0 / init.m1 + t),
        Side::Lower,
        tol,
    ));
    reports.push(check_side(
        "gamma1: M1 upper bound 1/(M1(0)^-1 + t/2)",
        &series.t_grid,
        &m1.values,
        se1,
        |t| 1.0 / (1.0 / init.m1 + t / 2.0),
        Side::Upper,
        tol,
    ));
    let (m0, se0) = series.track_with_stderr(0.0, 0.0)?;
    let m0_init = init.m0;
    let m1_init = init.m1;
    let m3_init = init.m3;
    reports.push(check_side(
        "gamma1: M0 lower bound max(quadratic, cubic)",
        &series.t_grid,
        &m0.values,
        se0,
        move |t| {
            let first = m0_init / (1.0 + m1_init * t / 2.0).powi(2);
            let second =
                2_f64.powf(1.5) * m0_init / (2.0 + 3.0 * m3_init.cbrt() * t).powf(1.5);
            first.max(second)
        },
        Side::Lower,
        tol,
    ));
    reports.push(check_side(
        "gamma1: M0 upper bound M0(0)/(1 + M1(0) t)^{1/2}",
        &series.t_grid,
        &m0.values,
        se0,
        move |t| m0_init / (1.0 + m1_init * t).sqrt(),
        Side::Upper,
        tol,
    ));
    for (order, init_val) in [(2.0, init.m2), (3.0, init.m3)] {
        let (track, se) = series.track_with_stderr(0.0, order)?;
        reports.push(check_side(
            &format!("gamma1: M{order} lower bound M(0)/(1 + M1(0) t/2)^2"),
            &series.t_grid,
            &track.values,
            se,
            move |t| init_val / (1.0 + m1_init * t / 2.0).powi(2),
            Side::Lower,
            tol,
        ));
        reports.push(check_side(
            &format!("gamma1: M{order} non-increasing (<= M(0))"),
            &series.t_grid,
            &track.values,
            se,
            move |_| init_val,
            Side::Upper,
            tol,
        ));
    }
    Ok(reports)
}

/// Two-sided `1/M_γ` linearity check for `γ ∈ (0, 2)`: the ratio
/// `r(t) = (1/M_γ(t) - 1/M_γ(0))/t` must stay positive with bounded spread
/// (`max r / min r ≤ 10`); the bracket constants themselves are not given
/// numerically.
pub fn check_gamma_bracket_scaling(
    series: &MomentSeries,
    gamma: f64,
) -> Result<BoundReport, MomentError> {
    let track = series
        .track(0.0, gamma)
        .ok_or(MomentError::MissingTrack { alpha: 0.0, beta: gamma })?;
    let m_init = track.values[0];
    if m_init == 0.0 {
        return Err(MomentError::ZeroMoment(0.0));
    }
    let mut rows = Vec::new();
    let mut r_min = f64::INFINITY;
    let mut r_max = f64::NEG_INFINITY;
    for (&t, &value) in series.t_grid.iter().zip(&track.values) {
        if t == 0.0 {
            continue;
        }
        if value == 0.0 {
            return Err(MomentError::ZeroMoment(t));
        }
        let r = (1.0 / value - 1.0 / m_init) / t;
        r_min = r_min.min(r);
        r_max = r_max.max(r);
        rows.push(BoundRow {
            t,
            value: r,
            bound: 0.0,
            allowed: 0.0,
            passed: r > 0.0,
            slack: -r,
        });
    }
    if rows.is_empty() {
        return Err(MomentError::InvalidSeries(
            "scaling check needs at least one t > 0".into(),
        ));
    }
    let ratio = r_max / r_min;
    let positive = rows.iter().all(|r| r.passed);
    let spread_ok = r_min > 0.0 && ratio <= 10.0;
    Ok(BoundReport {
        claim: format!("gamma={gamma}: (1/M - 1/M(0))/t positive with spread <= 10"),
        passed: positive && spread_ok,
        summary: format!("r in [{r_min:.4e}, {r_max:.4e}], spread {ratio:.3}"),
        rows,
    })
}
