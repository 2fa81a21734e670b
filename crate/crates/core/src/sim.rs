//! Mean-field stochastic coalescence simulator.
//!
//! A finite system of `n0` particles evolves by binary mergers: each
//! unordered pair `(i, j)` merges at rate `a(y_i, y_j)/n0`, so the empirical
//! measure `(1/n0) Σ δ_{y_i}` approximates the mean-field density. Events
//! are sampled by thinning: candidates fire at total rate
//! `[n(n-1)/2] Λ/n0` for a majorant `Λ` of the kernel over the current
//! system, and each candidate picks a uniform pair that is accepted with
//! probability `a/Λ`.
//!
//! Per accepted event the merged particle carries exactly the sums of the
//! parents' mass and impulsion, the particle count drops by one, kinetic
//! energy dissipates, and the maximal speed never increases.

use crate::kernel::{eval_kernel, majorant, KernelError, KernelSpec, SystemStats};
use crate::moments::{MomentSeries, MomentTrack, Provenance};
use crate::particle::{coalesce, ParticleError, ParticleState};
use crate::rng::run_stream;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Particle(#[from] ParticleError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("target time {requested} is before current time {current}")]
    BackwardTime { current: f64, requested: f64 },
    #[error("symmetrized initial data needs an even particle count, got {0}")]
    SymmetrizeOddCount(usize),
    #[error("moment with beta = {beta} undefined: system contains a zero impulsion")]
    UndefinedMoment { beta: f64 },
    #[error("ensemble standard error needs at least 2 runs, got {0}")]
    NeedTwoRuns(usize),
}

/// Initial mass distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum MassInit {
    Monodisperse { m0: f64 },
    Exponential { rate: f64 },
}

/// Initial impulsion distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentumInit {
    /// Independent `N(0, σ²)` components; radially symmetric in law.
    GaussianIsotropic { sigma: f64 },
    /// Cycles deterministically through the given list of vectors.
    SymmetrizedSamples { samples: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition {
    pub mass_law: MassInit,
    pub momentum_law: MomentumInit,
    /// Pair every sampled `p` with `-p` (forces exactly even empirical data;
    /// the two partners share one sampled mass).
    pub symmetrize: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub kernel: KernelSpec,
    pub n0: usize,
    pub dim: usize,
    pub t_grid: Vec<f64>,
    pub init: InitialCondition,
    /// Number of independent runs.
    pub ensemble: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.kernel.validate()?;
        if self.n0 < 2 {
            return Err(SimError::Config(format!("n0 must be >= 2, got {}", self.n0)));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(SimError::Config(format!(
                "dimension must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        if self.ensemble < 1 {
            return Err(SimError::Config("ensemble must be >= 1".into()));
        }
        if self.t_grid.is_empty() {
            return Err(SimError::Config("t_grid must not be empty".into()));
        }
        if self.t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(SimError::Config("t_grid times must be finite and >= 0".into()));
        }
        if self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SimError::Config("t_grid must be strictly increasing".into()));
        }
        if self.init.symmetrize && !self.n0.is_multiple_of(2) {
            return Err(SimError::SymmetrizeOddCount(self.n0));
        }
        match &self.init.mass_law {
            MassInit::Monodisperse { m0 } => {
                if !(*m0 > 0.0 && m0.is_finite()) {
                    return Err(SimError::Config(format!("monodisperse mass must be positive, got {m0}")));
                }
            }
            MassInit::Exponential { rate } => {
                if !(*rate > 0.0 && rate.is_finite()) {
                    return Err(SimError::Config(format!("exponential rate must be positive, got {rate}")));
                }
            }
        }
        match &self.init.momentum_law {
            MomentumInit::GaussianIsotropic { sigma } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(SimError::Config(format!("gaussian sigma must be positive, got {sigma}")));
                }
            }
            MomentumInit::SymmetrizedSamples { samples } => {
                if samples.is_empty() {
                    return Err(SimError::Config("momentum sample list must not be empty".into()));
                }
                if samples.iter().any(|s| s.len() != self.dim) {
                    return Err(SimError::Config("momentum samples must match the configured dimension".into()));
                }
                if samples.iter().flatten().any(|c| !c.is_finite()) {
                    return Err(SimError::Config("momentum samples must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

/// One accepted merger, reported to event observers.
#[derive(Debug, Clone, Copy)]
pub struct CoalescenceEvent {
    pub time: f64,
    pub first: ParticleState,
    pub second: ParticleState,
    pub merged: ParticleState,
    /// Positions in the particle array at the moment of the event,
    /// `indices.0 < indices.1`.
    pub indices: (usize, usize),
}

/// Finite particle ensemble with its kernel, clock and random stream.
#[derive(Debug, Clone)]
pub struct ParticleSystem {
    kernel: KernelSpec,
    particles: Vec<ParticleState>,
    n0: usize,
    dim: usize,
    t: f64,
    rng: ChaCha12Rng,
    stats: SystemStats,
    accepted_events: u64,
    events_since_refresh: u64,
    refresh_every: u64,
}

impl ParticleSystem {
    /// Build the initial system for run `run_index` of the configured
    /// ensemble. The random stream is derived deterministically from
    /// `(cfg.seed, run_index)`.
    pub fn init(cfg: &SimConfig, run_index: u64) -> Result<Self, SimError> {
        cfg.validate()?;
        let mut rng = run_stream(cfg.seed, run_index);
        let mut particles = Vec::with_capacity(cfg.n0);
        let mut sample_cursor = 0usize;
        let mut momentum = |rng: &mut ChaCha12Rng| -> Vec<f64> {
            match &cfg.init.momentum_law {
                MomentumInit::GaussianIsotropic { sigma } => (0..cfg.dim)
                    .map(|_| {
                        let g: f64 = StandardNormal.sample(rng);
                        *sigma * g
                    })
                    .collect(),
                MomentumInit::SymmetrizedSamples { samples } => {
                    let s = samples[sample_cursor % samples.len()].clone();
                    sample_cursor += 1;
                    s
                }
            }
        };
        let draws = if cfg.init.symmetrize { cfg.n0 / 2 } else { cfg.n0 };
        for _ in 0..draws {
            let mass = sample_mass(&cfg.init.mass_law, &mut rng);
            let p = momentum(&mut rng);
            particles.push(ParticleState::new(mass, &p)?);
            if cfg.init.symmetrize {
                let neg: Vec<f64> = p.iter().map(|c| -c).collect();
                particles.push(ParticleState::new(mass, &neg)?);
            }
        }
        Ok(Self::assemble(cfg.kernel, particles, cfg.n0, cfg.dim, rng))
    }

    /// Build a system directly from explicit particles; `n0` is the
    /// mean-field normalizer used in rates and moments.
    pub fn from_particles(
        kernel: KernelSpec,
        particles: Vec<ParticleState>,
        n0: usize,
        seed: u64,
        run_index: u64,
    ) -> Result<Self, SimError> {
        kernel.validate()?;
        if n0 == 0 {
            return Err(SimError::Config("n0 must be >= 1".into()));
        }
        if particles.is_empty() {
            return Err(SimError::Config("particle list must not be empty".into()));
        }
        let dim = particles[0].dim();
        if particles.iter().any(|p| p.dim() != dim) {
            return Err(SimError::Config("particles must share one dimension".into()));
        }
        let rng = run_stream(seed, run_index);
        Ok(Self::assemble(kernel, particles, n0, dim, rng))
    }

    fn assemble(
        kernel: KernelSpec,
        particles: Vec<ParticleState>,
        n0: usize,
        dim: usize,
        rng: ChaCha12Rng,
    ) -> Self {
        let stats = SystemStats::from_particles(&particles);
        ParticleSystem {
            kernel,
            particles,
            n0,
            dim,
            t: 0.0,
            rng,
            stats,
            accepted_events: 0,
            events_since_refresh: 0,
            refresh_every: (n0 as u64 / 10).max(1),
        }
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn particle_count(&self) -> usize {
        self.particles.len()
    }

    pub fn particles(&self) -> &[ParticleState] {
        &self.particles
    }

    pub fn accepted_events(&self) -> u64 {
        self.accepted_events
    }

    pub fn stats(&self) -> &SystemStats {
        &self.stats
    }

    pub fn total_mass(&self) -> f64 {
        self.particles.iter().map(|p| p.mass()).sum()
    }

    pub fn total_impulsion(&self) -> [f64; 3] {
        let mut sum = [0.0; 3];
        for p in &self.particles {
            let q = p.impulsion_padded();
            sum[0] += q[0];
            sum[1] += q[1];
            sum[2] += q[2];
        }
        sum
    }

    pub fn total_kinetic_energy(&self) -> f64 {
        self.particles.iter().map(|p| p.kinetic_energy()).sum()
    }

    /// Advance the exact stochastic dynamics to `t_target`.
    pub fn run_to(&mut self, t_target: f64) -> Result<(), SimError> {
        self.advance(t_target, None, &mut |_| {})
    }

    /// Advance to `t_target`, reporting every accepted merger.
    pub fn run_to_with<F>(&mut self, t_target: f64, mut on_event: F) -> Result<(), SimError>
    where
        F: FnMut(&CoalescenceEvent),
    {
        self.advance(t_target, None, &mut on_event)
    }

    /// Advance until the first accepted merger or `t_max`, whichever comes
    /// first; returns the event if one fired.
    pub fn next_event(&mut self, t_max: f64) -> Result<Option<CoalescenceEvent>, SimError> {
        let mut captured = None;
        self.advance(t_max, Some(1), &mut |e| captured = Some(*e))?;
        Ok(captured)
    }

    fn advance(
        &mut self,
        t_target: f64,
        max_events: Option<u64>,
        on_event: &mut dyn FnMut(&CoalescenceEvent),
    ) -> Result<(), SimError> {
        // An infinite target means "run until nothing can happen" (or the
        // event cap fires); the clock is only fast-forwarded to finite
        // targets.
        if t_target.is_nan() || t_target < self.t {
            return Err(SimError::BackwardTime {
                current: self.t,
                requested: t_target,
            });
        }
        // Fail on kernels without a finite majorant before touching the clock.
        let mut lambda = majorant(&self.kernel, &self.stats)?;
        let mut fired = 0u64;
        loop {
            let n = self.particles.len();
            if n <= 1 {
                if t_target.is_finite() {
                    self.t = t_target;
                }
                return Ok(());
            }
            let total_rate = 0.5 * (n as f64) * (n as f64 - 1.0) * lambda / self.n0 as f64;
            if total_rate <= 0.0 {
                // Kernel vanishes identically over the current system.
                if t_target.is_finite() {
                    self.t = t_target;
                }
                return Ok(());
            }
            let wait: f64 = Exp1.sample(&mut self.rng);
            let dt = wait / total_rate;
            if self.t + dt > t_target {
                self.t = t_target;
                return Ok(());
            }
            self.t += dt;
            let i = self.rng.random_range(0..n);
            let j = loop {
                let j = self.rng.random_range(0..n);
                if j != i {
                    break j;
                }
            };
            let rate = eval_kernel(&self.kernel, &self.particles[i], &self.particles[j])?;
            debug_assert!(
                rate <= lambda * (1.0 + 1e-12),
                "majorant {lambda} violated by pair rate {rate}"
            );
            let u: f64 = self.rng.random();
            if u * lambda >= rate {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let first = self.particles[lo];
            let second = self.particles[hi];
            let merged = coalesce(&first, &second)?;
            on_event(&CoalescenceEvent {
                time: self.t,
                first,
                second,
                merged,
                indices: (lo, hi),
            });
            self.stats.max_abs_impulsion = self.stats.max_abs_impulsion.max(merged.abs_impulsion());
            self.stats.max_mass = self.stats.max_mass.max(merged.mass());
            self.particles[lo] = merged;
            self.particles.swap_remove(hi);
            self.accepted_events += 1;
            self.events_since_refresh += 1;
            fired += 1;
            if self.events_since_refresh >= self.refresh_every {
                // Tighten the tracked bounds; max|v| only ever shrinks and the
                // impulsion/mass maxima were kept as valid upper bounds above,
                // so correctness never depends on this refresh.
                self.stats = SystemStats::from_particles(&self.particles);
                self.events_since_refresh = 0;
            }
            lambda = majorant(&self.kernel, &self.stats)?;
            if let Some(cap) = max_events {
                if fired >= cap {
                    return Ok(());
                }
            }
        }
    }

    /// Empirical moment `(1/n0) Σ_i m_i^α |p_i|^β`, with `|p|⁰ = 1` at `p = 0`.
    pub fn empirical_moment(&self, alpha: f64, beta: f64) -> Result<f64, SimError> {
        if beta < 0.0 && self.particles.iter().any(|p| p.abs_impulsion() == 0.0) {
            return Err(SimError::UndefinedMoment { beta });
        }
        let mut sum = 0.0;
        for p in &self.particles {
            let ma = pow_general(p.mass(), alpha);
            let pb = if beta == 0.0 {
                1.0
            } else {
                pow_general(p.abs_impulsion(), beta)
            };
            sum += ma * pb;
        }
        Ok(sum / self.n0 as f64)
    }
}

fn pow_general(base: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else if exponent == 1.0 {
        base
    } else if exponent == 2.0 {
        base * base
    } else {
        base.powf(exponent)
    }
}

fn sample_mass(law: &MassInit, rng: &mut ChaCha12Rng) -> f64 {
    match law {
        MassInit::Monodisperse { m0 } => *m0,
        MassInit::Exponential { rate } => loop {
            let u: f64 = rng.random();
            let m = -(1.0 - u).ln() / rate;
            if m > 0.0 {
                break m;
            }
        },
    }
}

/// Run `cfg.ensemble` independent simulations and aggregate the requested
/// moments on the time grid.
///
/// Runs execute in parallel; per-run streams come from
/// `(seed, run_index)` and aggregation reduces in run-index order, so the
/// output is identical regardless of execution order or thread count.
pub fn ensemble_moments(cfg: &SimConfig, pairs: &[(f64, f64)]) -> Result<MomentSeries, SimError> {
    cfg.validate()?;
    if cfg.ensemble < 2 {
        return Err(SimError::NeedTwoRuns(cfg.ensemble));
    }
    if pairs.is_empty() {
        return Err(SimError::Config("at least one (alpha, beta) pair required".into()));
    }
    // per run: per pair: per time value
    let runs: Vec<Vec<Vec<f64>>> = (0..cfg.ensemble as u64)
        .into_par_iter()
        .map(|run_index| -> Result<Vec<Vec<f64>>, SimError> {
            let mut sys = ParticleSystem::init(cfg, run_index)?;
            let mut values = vec![Vec::with_capacity(cfg.t_grid.len()); pairs.len()];
            for &t in &cfg.t_grid {
                sys.run_to(t)?;
                for (slot, &(alpha, beta)) in values.iter_mut().zip(pairs.iter()) {
                    slot.push(sys.empirical_moment(alpha, beta)?);
                }
            }
            Ok(values)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let r = cfg.ensemble as f64;
    let mut tracks = Vec::with_capacity(pairs.len());
    for (pair_idx, &(alpha, beta)) in pairs.iter().enumerate() {
        let mut means = Vec::with_capacity(cfg.t_grid.len());
        let mut stderrs = Vec::with_capacity(cfg.t_grid.len());
        for time_idx in 0..cfg.t_grid.len() {
            let mean = runs.iter().map(|run| run[pair_idx][time_idx]).sum::<f64>() / r;
            let ss = runs
                .iter()
                .map(|run| {
                    let d = run[pair_idx][time_idx] - mean;
                    d * d
                })
                .sum::<f64>();
            means.push(mean);
            stderrs.push((ss / (r - 1.0)).sqrt() / r.sqrt());
        }
        tracks.push(MomentTrack {
            alpha,
            beta,
            values: means,
            stderr: Some(stderrs),
        });
    }
    MomentSeries::new(
        cfg.t_grid.clone(),
        tracks,
        Provenance::MonteCarlo,
        Some(cfg.ensemble),
        Some(cfg.kernel.tag()),
        Some(cfg.dim),
    )
    .map_err(|e| SimError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_cfg(kernel: KernelSpec, n0: usize, dim: usize) -> SimConfig {
        SimConfig {
            kernel,
            n0,
            dim,
            t_grid: vec![0.0, 1.0, 2.0],
            init: InitialCondition {
                mass_law: MassInit::Monodisperse { m0: 1.0 },
                momentum_law: MomentumInit::GaussianIsotropic { sigma: 1.0 },
                symmetrize: true,
            },
            ensemble: 4,
            seed: 1234,
        }
    }

    #[test]
    fn init_is_deterministic_per_stream() {
        let cfg = gaussian_cfg(KernelSpec::Constant, 100, 2);
        let a = ParticleSystem::init(&cfg, 3).unwrap();
        let b = ParticleSystem::init(&cfg, 3).unwrap();
        assert_eq!(a.particles(), b.particles());
        let c = ParticleSystem::init(&cfg, 4).unwrap();
        assert_ne!(a.particles(), c.particles());
    }

    #[test]
    fn symmetrized_data_has_exactly_zero_total_impulsion() {
        let cfg = gaussian_cfg(KernelSpec::Constant, 10_000, 3);
        let sys = ParticleSystem::init(&cfg, 0).unwrap();
        assert_eq!(sys.total_impulsion(), [0.0, 0.0, 0.0]);
        // partners share the mass, so the empirical law is exactly even
        let ps = sys.particles();
        for k in (0..ps.len()).step_by(2) {
            assert_eq!(ps[k].mass(), ps[k + 1].mass());
        }
    }

    #[test]
    fn symmetrize_rejects_odd_counts() {
        let mut cfg = gaussian_cfg(KernelSpec::Constant, 101, 1);
        cfg.t_grid = vec![1.0];
        assert!(matches!(
            ParticleSystem::init(&cfg, 0),
            Err(SimError::SymmetrizeOddCount(101))
        ));
    }

    #[test]
    fn forced_construction_from_samples() {
        let cfg = SimConfig {
            kernel: KernelSpec::Constant,
            n0: 2,
            dim: 1,
            t_grid: vec![1.0],
            init: InitialCondition {
                mass_law: MassInit::Monodisperse { m0: 1.0 },
                momentum_law: MomentumInit::SymmetrizedSamples {
                    samples: vec![vec![1.0]],
                },
                symmetrize: true,
            },
            ensemble: 2,
            seed: 0,
        };
        let sys = ParticleSystem::init(&cfg, 0).unwrap();
        assert_eq!(sys.particles().len(), 2);
        assert_eq!(sys.particles()[0].impulsion(), &[1.0]);
        assert_eq!(sys.particles()[1].impulsion(), &[-1.0]);
        assert_eq!(sys.particles()[0].mass(), 1.0);
    }

    #[test]
    fn single_particle_run_leaves_particles_untouched() {
        let p = ParticleState::new(2.0, &[1.0]).unwrap();
        let mut sys =
            ParticleSystem::from_particles(KernelSpec::Constant, vec![p], 1, 7, 0).unwrap();
        sys.run_to(5.0).unwrap();
        assert_eq!(sys.particle_count(), 1);
        assert_eq!(sys.particles()[0], p);
        assert_eq!(sys.t(), 5.0);
        assert_eq!(sys.accepted_events(), 0);
    }

    #[test]
    fn manev_refuses_to_simulate() {
        let cfg = gaussian_cfg(KernelSpec::Manev, 10, 1);
        let mut sys = ParticleSystem::init(&cfg, 0).unwrap();
        assert!(matches!(
            sys.run_to(1.0),
            Err(SimError::Kernel(KernelError::NoFiniteMajorant))
        ));
    }

    #[test]
    fn per_event_identities_hold_bitwise() {
        let cfg = gaussian_cfg(KernelSpec::HardSphere, 400, 3);
        let mut sys = ParticleSystem::init(&cfg, 1).unwrap();
        let mut events = 0;
        sys.run_to_with(2.0, |e| {
            events += 1;
            let direct = coalesce(&e.first, &e.second).unwrap();
            assert_eq!(e.merged, direct);
            assert_eq!(e.merged.mass(), e.first.mass() + e.second.mass());
        })
        .unwrap();
        assert!(events > 50, "expected a busy run, got {events} events");
        assert_eq!(sys.accepted_events(), events);
    }

    #[test]
    fn count_drops_by_one_per_event_and_time_advances() {
        let cfg = gaussian_cfg(KernelSpec::Constant, 200, 1);
        let mut sys = ParticleSystem::init(&cfg, 0).unwrap();
        let before = sys.particle_count();
        let mut events = 0u64;
        sys.run_to_with(3.0, |_| events += 1).unwrap();
        assert_eq!(sys.particle_count(), before - events as usize);
        assert_eq!(sys.t(), 3.0);
    }

    #[test]
    fn empirical_moment_hand_values() {
        let particles = vec![
            ParticleState::new(1.0, &[2.0]).unwrap(),
            ParticleState::new(3.0, &[-1.0]).unwrap(),
        ];
        let sys =
            ParticleSystem::from_particles(KernelSpec::Constant, particles, 2, 0, 0).unwrap();
        assert_eq!(sys.empirical_moment(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(sys.empirical_moment(1.0, 0.0).unwrap(), 2.0);

        let single = vec![ParticleState::new(8.0, &[0.0, 0.0, 6.0]).unwrap()];
        let sys = ParticleSystem::from_particles(KernelSpec::Constant, single, 1, 0, 0).unwrap();
        let v = sys.empirical_moment(-1.0 / 3.0, 1.0).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
    }

    #[test]
    fn negative_beta_with_zero_impulsion_is_undefined() {
        let particles = vec![
            ParticleState::new(1.0, &[0.0]).unwrap(),
            ParticleState::new(1.0, &[1.0]).unwrap(),
        ];
        let sys =
            ParticleSystem::from_particles(KernelSpec::Constant, particles, 2, 0, 0).unwrap();
        assert!(matches!(
            sys.empirical_moment(0.0, -0.5),
            Err(SimError::UndefinedMoment { .. })
        ));
        // |p|^0 = 1 including at p = 0
        assert_eq!(sys.empirical_moment(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn ensemble_is_deterministic_and_conserves_mass_column() {
        let mut cfg = gaussian_cfg(KernelSpec::Constant, 300, 1);
        cfg.init.mass_law = MassInit::Exponential { rate: 1.0 };
        cfg.ensemble = 6;
        let pairs = [(0.0, 0.0), (1.0, 0.0)];
        let a = ensemble_moments(&cfg, &pairs).unwrap();
        let b = ensemble_moments(&cfg, &pairs).unwrap();
        for (ta, tb) in a.tracks.iter().zip(&b.tracks) {
            assert_eq!(ta.values, tb.values);
            assert_eq!(ta.stderr, tb.stderr);
        }
        // single-threaded pool must give bit-identical output
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| ensemble_moments(&cfg, &pairs).unwrap());
        for (ta, tc) in a.tracks.iter().zip(&c.tracks) {
            assert_eq!(ta.values, tc.values);
        }
        // M_{1,0} is conserved per run, so its column is constant
        let mass = a.track(1.0, 0.0).unwrap();
        let m0 = mass.values[0];
        for v in &mass.values {
            assert!((v - m0).abs() <= 1e-12 * m0.abs());
        }
        assert!(a.track(0.0, 0.0).unwrap().values.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn ensemble_requires_two_runs() {
        let mut cfg = gaussian_cfg(KernelSpec::Constant, 10, 1);
        cfg.ensemble = 1;
        assert!(matches!(
            ensemble_moments(&cfg, &[(0.0, 0.0)]),
            Err(SimError::NeedTwoRuns(1))
        ));
    }

    #[test]
    fn config_rejections() {
        let mut cfg = gaussian_cfg(KernelSpec::Constant, 1, 1);
        assert!(cfg.validate().is_err());
        cfg.n0 = 10;
        cfg.t_grid = vec![1.0, 1.0];
        assert!(cfg.validate().is_err());
        cfg.t_grid = vec![1.0, 0.5];
        assert!(cfg.validate().is_err());
        cfg.t_grid = vec![1.0];
        cfg.dim = 4;
        assert!(cfg.validate().is_err());
        cfg.dim = 1;
        cfg.kernel = KernelSpec::ImpulsionPower { gamma: 2.5 };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn backward_time_is_rejected() {
        let cfg = gaussian_cfg(KernelSpec::Constant, 10, 1);
        let mut sys = ParticleSystem::init(&cfg, 0).unwrap();
        sys.run_to(1.0).unwrap();
        assert!(matches!(sys.run_to(0.5), Err(SimError::BackwardTime { .. })));
    }
}
