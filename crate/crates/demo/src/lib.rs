//! Interactive browser demo: three operations exposed to a static page
//! through wasm-bindgen. All exports take plain numbers/strings and return
//! JSON strings, so they compile and test on native targets too.
//!
//! Ensemble runs execute sequentially here (no threads on plain wasm);
//! per-run streams and the run-index aggregation order are the same as in
//! the parallel library path.

use agglab_core::exact::{limit_profile_moments, phi_infty_profile, psi_infty, TransformSolution};
use agglab_core::moments::{
    gamma2_closed_m0, gamma2_closed_m2, gamma2_closed_m4, integrate_gamma2, Gamma2State,
};
use agglab_core::{
    InitialCondition, KernelSpec, MassInit, MomentumInit, ParticleSystem, SimConfig,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn err_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Run a small coalescence ensemble and return moment trajectories.
///
/// `kernel` is one of `"constant"`, `"impulsion_power"`, `"hard_sphere"`
/// (`gamma` applies to the power kernel only). Returns
/// `{t, m00, m00_stderr, m02, m02_stderr, energy, exact_m00?}` where
/// `exact_m00` is the constant-kernel law `1/(1 + t/2)`.
#[wasm_bindgen]
pub fn simulate_moments(
    kernel: &str,
    gamma: f64,
    n0: u32,
    runs: u32,
    t_max: f64,
    sigma: f64,
    seed: u32,
) -> String {
    let kernel_spec = match kernel {
        "constant" => KernelSpec::Constant,
        "impulsion_power" => match KernelSpec::impulsion_power(gamma) {
            Ok(k) => k,
            Err(e) => return err_json(e),
        },
        "hard_sphere" => KernelSpec::HardSphere,
        other => return err_json(format!("unknown kernel {other:?}")),
    };
    let n0 = (n0 as usize).clamp(2, 20_000) & !1; // even, bounded for the browser
    let runs = (runs as usize).clamp(2, 64);
    if !(t_max > 0.0 && t_max.is_finite()) {
        return err_json("t_max must be positive");
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return err_json("sigma must be positive");
    }
    let dim = if matches!(kernel_spec, KernelSpec::HardSphere) { 3 } else { 1 };
    // quadratic spacing resolves the fast early decay
    let points = 25usize;
    let t_grid: Vec<f64> = (0..=points)
        .map(|k| t_max * (k as f64 / points as f64).powi(2))
        .map(|t| if t == 0.0 { 0.0 } else { t })
        .collect();
    let t_grid: Vec<f64> = {
        // quadratic spacing can collide at the origin after rounding
        let mut g = t_grid;
        g.dedup();
        g
    };
    let cfg = SimConfig {
        kernel: kernel_spec,
        n0,
        dim,
        t_grid: t_grid.clone(),
        init: InitialCondition {
            mass_law: MassInit::Exponential { rate: 1.0 },
            momentum_law: MomentumInit::GaussianIsotropic { sigma },
            symmetrize: true,
        },
        ensemble: runs,
        seed: seed as u64,
    };
    // per run: [m00, m02, kinetic energy] per grid time
    let mut per_run: Vec<[Vec<f64>; 3]> = Vec::with_capacity(runs);
    for run_index in 0..runs as u64 {
        let mut sys = match ParticleSystem::init(&cfg, run_index) {
            Ok(s) => s,
            Err(e) => return err_json(e),
        };
        let mut cols: [Vec<f64>; 3] = Default::default();
        for &t in &t_grid {
            if let Err(e) = sys.run_to(t) {
                return err_json(e);
            }
            cols[0].push(sys.empirical_moment(0.0, 0.0).unwrap());
            cols[1].push(sys.empirical_moment(0.0, 2.0).unwrap());
            cols[2].push(sys.total_kinetic_energy() / sys.n0() as f64);
        }
        per_run.push(cols);
    }
    let aggregate = |which: usize| -> (Vec<f64>, Vec<f64>) {
        let r = runs as f64;
        let mut means = Vec::with_capacity(t_grid.len());
        let mut stderrs = Vec::with_capacity(t_grid.len());
        for idx in 0..t_grid.len() {
            let mean = per_run.iter().map(|c| c[which][idx]).sum::<f64>() / r;
            let ss = per_run
                .iter()
                .map(|c| (c[which][idx] - mean).powi(2))
                .sum::<f64>();
            means.push(mean);
            stderrs.push((ss / (r - 1.0)).sqrt() / r.sqrt());
        }
        (means, stderrs)
    };
    let (m00, m00_se) = aggregate(0);
    let (m02, m02_se) = aggregate(1);
    let (energy, _) = aggregate(2);
    let exact_m00: Option<Vec<f64>> = match cfg.kernel {
        KernelSpec::Constant => Some(t_grid.iter().map(|t| 1.0 / (1.0 + 0.5 * t)).collect()),
        _ => None,
    };
    json!({
        "t": t_grid,
        "m00": m00,
        "m00_stderr": m00_se,
        "m02": m02,
        "m02_stderr": m02_se,
        "energy": energy,
        "exact_m00": exact_m00,
        "kernel": cfg.kernel.tag(),
        "n0": n0,
        "runs": runs,
    })
    .to_string()
}

/// Evaluate the self-similar limit profile of the constant kernel on an
/// `(m, p)` grid, plus its transform section and low-order moments.
///
/// `m10_0` and `m02_0` are the initial mass and impulsion-square moments
/// that set the profile scales.
#[wasm_bindgen]
pub fn limit_profile(h0: f64, m10_0: f64, m02_0: f64, grid: u32, m_max: f64, p_max: f64) -> String {
    let (a, b) = match agglab_core::exact::compute_ab(m10_0, m02_0, h0) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let sol = match TransformSolution::new(
        h0,
        a,
        b,
        agglab_core::exact::InitialTransform::ExpMassGaussMomentum,
    ) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let grid = (grid as usize).clamp(16, 160);
    if !(m_max > 0.0 && p_max > 0.0) {
        return err_json("grid extents must be positive");
    }
    let ms: Vec<f64> = (1..=grid).map(|i| m_max * i as f64 / grid as f64).collect();
    let ps: Vec<f64> = (0..grid)
        .map(|j| -p_max + 2.0 * p_max * j as f64 / (grid - 1) as f64)
        .collect();
    let mut phi = Vec::with_capacity(grid * grid);
    for &m in &ms {
        for &p in &ps {
            match phi_infty_profile(&sol, m, p) {
                Ok(v) => phi.push(v),
                Err(e) => return err_json(e),
            }
        }
    }
    let xi: Vec<f64> = (0..64).map(|k| -4.0 + 8.0 * k as f64 / 63.0).collect();
    let psi: Vec<f64> = xi
        .iter()
        .map(|&x| psi_infty(&sol, 0.0, x).unwrap_or(f64::NAN))
        .collect();
    json!({
        "m": ms,
        "p": ps,
        "phi": phi,
        "xi": xi,
        "psi": psi,
        "mu00": limit_profile_moments(&sol, 0, 0).ok(),
        "mu10": limit_profile_moments(&sol, 1, 0).ok(),
        "mu02": limit_profile_moments(&sol, 0, 2).ok(),
        "a_mass": a,
        "b_impulsion": b,
    })
    .to_string()
}

/// Integrate the closed even-moment hierarchy of the quadratic impulsion
/// kernel in one dimension and compare with the closed forms.
///
/// `moments0` must contain the positive initial values `M0, M2, ...`
/// (between 2 and 6 entries).
#[wasm_bindgen]
pub fn gamma2_hierarchy(moments0: Vec<f64>, t_end: f64) -> String {
    if !(2..=6).contains(&moments0.len()) {
        return err_json("between 2 and 6 initial moments required");
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return err_json("t_end must be positive");
    }
    let state = match Gamma2State::new(1, moments0.clone()) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let dt = (t_end / 5_000.0).min(1e-2);
    let series = match integrate_gamma2(&state, t_end, dt) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let k1 = 1.0;
    let m2_0 = moments0[1];
    let closed_m0: Vec<f64> = series
        .t_grid
        .iter()
        .map(|&t| gamma2_closed_m0(moments0[0], m2_0, k1, t))
        .collect();
    let closed_m2: Vec<f64> = series
        .t_grid
        .iter()
        .map(|&t| gamma2_closed_m2(m2_0, k1, t))
        .collect();
    let closed_m4: Option<Vec<f64>> = moments0.get(2).map(|&m4_0| {
        series
            .t_grid
            .iter()
            .map(|&t| gamma2_closed_m4(m4_0, m2_0, k1, t))
            .collect()
    });
    let tracks: Vec<serde_json::Value> = series
        .tracks
        .iter()
        .map(|tr| {
            json!({
                "order": tr.beta as u32,
                "values": tr.values,
            })
        })
        .collect();
    json!({
        "t": series.t_grid,
        "tracks": tracks,
        "closed_m0": closed_m0,
        "closed_m2": closed_m2,
        "closed_m4": closed_m4,
    })
    .to_string()
}
