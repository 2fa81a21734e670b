//! Command execution: dispatch a validated config to the owning module and
//! assemble the result table.

use crate::config::{ExactCfg, ExactOutput, LiftCfg, LiftOutput, OdeCfg, RunConfig, SimulateCfg, VerifyCfg};
use crate::table::{cell, opt_cell, Metadata, ResultTable};
use agglab_core::exact::{
    bernoulli_residual, compute_ab, f_exact, phi_infty_profile, psi_infty, InitialTransform,
    TransformSolution,
};
use agglab_core::lift::{factorization_check, lifted_residual, pk_quadrature, LiftSpec, MassSolution};
use agglab_core::moments::{integrate_gamma2, Gamma2State};
use agglab_core::quad::QuadConfig;
use agglab_core::sim::ensemble_moments;
use agglab_core::verify::{self, VerifyConfig};
use num_complex::Complex64;
use serde_json::json;
use sha2::{Digest, Sha256};

pub struct RunOutcome {
    pub table: ResultTable,
    /// Human-readable status lines (verify prints these to stderr).
    pub status_lines: Vec<String>,
    /// False only when a verification criterion failed.
    pub checks_passed: bool,
}

#[derive(Debug)]
pub struct RuntimeError(pub String);

impl std::fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "runtime error: {}", self.0)
    }
}

fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn base_metadata(command: &str, config_text: &str) -> Metadata {
    Metadata {
        command: command.to_string(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: sha256_hex(config_text),
        config: serde_json::from_str(config_text).unwrap_or(serde_json::Value::Null),
        seed: None,
        generator: None,
        n_runs: None,
        kernel: None,
        tolerances: json!({}),
    }
}

pub fn execute(cfg: &RunConfig, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let command = cfg.command_name();
    match cfg {
        RunConfig::Simulate(c) => run_simulate(c, command, config_text),
        RunConfig::Ode(c) => run_ode(c, command, config_text),
        RunConfig::Exact(c) => run_exact(c, command, config_text),
        RunConfig::Lift(c) => run_lift(c, command, config_text),
        RunConfig::Verify(c) => run_verify(c, command, config_text),
    }
}

fn run_simulate(cfg: &SimulateCfg, command: &str, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let sim = cfg.to_sim_config();
    let series =
        ensemble_moments(&sim, &cfg.moments).map_err(|e| RuntimeError(e.to_string()))?;
    let mut rows = Vec::new();
    for (idx, &t) in series.t_grid.iter().enumerate() {
        for track in &series.tracks {
            rows.push(vec![
                cell(t),
                cell(track.alpha),
                cell(track.beta),
                cell(track.values[idx]),
                opt_cell(track.stderr.as_ref().map(|se| se[idx])),
                format!("{}", series.runs.unwrap_or(0)),
            ]);
        }
    }
    let mut metadata = base_metadata(command, config_text);
    metadata.seed = Some(sim.seed);
    metadata.generator = Some(agglab_core::rng::GENERATOR_NAME.to_string());
    metadata.n_runs = series.runs;
    metadata.kernel = series.kernel_tag.clone();
    Ok(RunOutcome {
        table: ResultTable {
            metadata,
            columns: vec!["t", "alpha", "beta", "value", "stderr", "n_runs"],
            rows,
        },
        status_lines: vec![],
        checks_passed: true,
    })
}

fn run_ode(cfg: &OdeCfg, command: &str, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let state = Gamma2State::new(cfg.dim, cfg.moments0.clone())
        .map_err(|e| RuntimeError(e.to_string()))?;
    let series = integrate_gamma2(&state, cfg.t_end, cfg.dt)
        .map_err(|e| RuntimeError(e.to_string()))?;
    let mut rows = Vec::new();
    for (idx, &t) in series.t_grid.iter().enumerate() {
        for track in &series.tracks {
            rows.push(vec![
                cell(t),
                cell(track.alpha),
                cell(track.beta),
                cell(track.values[idx]),
                String::new(),
                String::new(),
            ]);
        }
    }
    let mut metadata = base_metadata(command, config_text);
    metadata.tolerances = json!({"step_doubling_rel": 1e-8});
    Ok(RunOutcome {
        table: ResultTable {
            metadata,
            columns: vec!["t", "alpha", "beta", "value", "stderr", "n_runs"],
            rows,
        },
        status_lines: vec![],
        checks_passed: true,
    })
}

fn run_exact(cfg: &ExactCfg, command: &str, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let (a, b) = compute_ab(cfg.m10_0, cfg.m02_0, cfg.h0)
        .map_err(|e| RuntimeError(e.to_string()))?;
    let sol = TransformSolution::new(cfg.h0, a, b, InitialTransform::ExpMassGaussMomentum)
        .map_err(|e| RuntimeError(e.to_string()))?;
    let mut rows = Vec::new();
    let columns: Vec<&'static str> = match cfg.output {
        ExactOutput::Transform => {
            let zetas = cfg.zeta.unwrap().points();
            let xis = cfg.xi.unwrap().points();
            for &t in &cfg.t_list {
                for &zeta in &zetas {
                    for &xi in &xis {
                        let v = f_exact(&sol, t, Complex64::new(zeta, 0.0), xi)
                            .map_err(|e| RuntimeError(e.to_string()))?;
                        rows.push(vec![cell(t), cell(zeta), cell(xi), cell(v.re), cell(v.im)]);
                    }
                }
            }
            vec!["t", "zeta", "xi", "f_re", "f_im"]
        }
        ExactOutput::PsiInfty => {
            let zetas = cfg.zeta.unwrap().points();
            let xis = cfg.xi.unwrap().points();
            for &zeta in &zetas {
                for &xi in &xis {
                    let v = psi_infty(&sol, zeta, xi).map_err(|e| RuntimeError(e.to_string()))?;
                    rows.push(vec![cell(zeta), cell(xi), cell(v)]);
                }
            }
            vec!["zeta", "xi", "psi"]
        }
        ExactOutput::Profile => {
            let ms = cfg.m.unwrap().points();
            let ps = cfg.p.unwrap().points();
            for &m in &ms {
                for &p in &ps {
                    let v =
                        phi_infty_profile(&sol, m, p).map_err(|e| RuntimeError(e.to_string()))?;
                    rows.push(vec![cell(m), cell(p), cell(v)]);
                }
            }
            vec!["m", "p", "phi"]
        }
        ExactOutput::BernoulliResidual => {
            let zetas = cfg.zeta.unwrap().points();
            let xis = cfg.xi.unwrap().points();
            for &t in &cfg.t_list {
                for &zeta in &zetas {
                    for &xi in &xis {
                        let r = bernoulli_residual(&sol, t, Complex64::new(zeta, 0.0), xi, cfg.h)
                            .map_err(|e| RuntimeError(e.to_string()))?;
                        rows.push(vec![cell(t), cell(zeta), cell(xi), cell(r)]);
                    }
                }
            }
            vec!["t", "zeta", "xi", "residual"]
        }
    };
    let mut metadata = base_metadata(command, config_text);
    metadata.tolerances = json!({"finite_difference_h": cfg.h});
    Ok(RunOutcome {
        table: ResultTable {
            metadata,
            columns,
            rows,
        },
        status_lines: vec![],
        checks_passed: true,
    })
}

fn run_lift(cfg: &LiftCfg, command: &str, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let spec = LiftSpec::quadratic_scaled(cfg.coeff).map_err(|e| RuntimeError(e.to_string()))?;
    let mass = MassSolution::constant_kernel_exact();
    let quad = QuadConfig::with_tol(1e-12, 1e-10);
    let mut rows = Vec::new();
    let columns: Vec<&'static str> = match cfg.output {
        LiftOutput::PkTable => {
            for &k in &cfg.k_list {
                for &t in &cfg.t_grid {
                    let v = pk_quadrature(&mass, &spec, k, t, &quad)
                        .map_err(|e| RuntimeError(e.to_string()))?;
                    rows.push(vec![cell(t), format!("{k}"), cell(v)]);
                }
            }
            vec!["t", "k", "p_k"]
        }
        LiftOutput::Residual => {
            for &t in &cfg.t_list {
                for &m in &cfg.m_grid {
                    let r = lifted_residual(&mass, &spec, t, m, &[0.0, 0.0, 0.0], &quad)
                        .map_err(|e| RuntimeError(e.to_string()))?;
                    rows.push(vec![cell(t), cell(m), cell(r)]);
                }
            }
            vec!["t", "m", "residual"]
        }
        LiftOutput::Factorization => {
            let (m, m2) = (cfg.m.unwrap(), cfg.m2.unwrap());
            for eta in &cfg.eta_grid {
                let r = factorization_check(&spec, m, m2, std::slice::from_ref(eta))
                    .map_err(|e| RuntimeError(e.to_string()))?;
                rows.push(vec![
                    cell(m),
                    cell(m2),
                    cell(eta[0]),
                    cell(eta[1]),
                    cell(eta[2]),
                    cell(r),
                ]);
            }
            vec!["m", "m2", "eta1", "eta2", "eta3", "residual"]
        }
    };
    let mut metadata = base_metadata(command, config_text);
    metadata.tolerances = json!({"quadrature_abs": 1e-12, "quadrature_rel": 1e-10});
    Ok(RunOutcome {
        table: ResultTable {
            metadata,
            columns,
            rows,
        },
        status_lines: vec![],
        checks_passed: true,
    })
}

fn run_verify(cfg: &VerifyCfg, command: &str, config_text: &str) -> Result<RunOutcome, RuntimeError> {
    let vcfg = VerifyConfig {
        sphere_constant_override: cfg.fault.as_ref().and_then(|f| f.sphere_constant),
    };
    let all = [
        ("A1", verify::criterion_a1 as fn(&VerifyConfig) -> verify::CriterionResult),
        ("A2", verify::criterion_a2),
        ("A3", verify::criterion_a3),
        ("A4", verify::criterion_a4),
        ("A5", verify::criterion_a5),
        ("A6", verify::criterion_a6),
        ("A7", verify::criterion_a7),
        ("A8", verify::criterion_a8),
        ("A9", verify::criterion_a9),
        ("A10", verify::criterion_a10),
    ];
    let mut rows = Vec::new();
    let mut status_lines = Vec::new();
    let mut checks_passed = true;
    for (id, criterion) in all {
        if !cfg.criteria.is_empty() && !cfg.criteria.iter().any(|c| c == id) {
            continue;
        }
        let result = criterion(&vcfg);
        status_lines.push(result.status_line());
        for d in &result.details {
            status_lines.push(format!("    {d}"));
        }
        if !result.passed {
            checks_passed = false;
        }
        rows.push(vec![
            result.id.to_string(),
            if result.passed { "pass" } else { "fail" }.to_string(),
            format!("{:.3}", result.runtime_seconds),
            result.description.to_string(),
            result.details.join(" | "),
        ]);
    }
    let mut metadata = base_metadata(command, config_text);
    metadata.generator = Some(agglab_core::rng::GENERATOR_NAME.to_string());
    metadata.tolerances = json!({
        "stderr_multiplier": 3.0,
        "model_slack": 0.05,
        "closed_form_rel": 1e-8,
        "m6_drift_rel": 1e-3,
        "bernoulli_residual": 1e-5,
        "selfsim_pde_residual": 1e-7,
        "profile_transform_rel": 1e-6,
        "factorization": 1e-12,
        "lift_residual": 1e-6,
        "pk_slope_abs": 0.05,
        "chi_squared_level": 0.01,
    });
    Ok(RunOutcome {
        table: ResultTable {
            metadata,
            columns: vec![
                "criterion",
                "status",
                "runtime_seconds",
                "description",
                "details",
            ],
            rows,
        },
        status_lines,
        checks_passed,
    })
}
