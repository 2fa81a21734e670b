//! Adaptive panel quadrature built on the 15-point Gauss–Kronrod pair.
//!
//! Panels are bisected until the embedded Gauss estimate agrees with the
//! Kronrod estimate within the requested tolerance. Used by the transform
//! and lift oracles; integrands are truncated by the caller (truncation
//! choices are documented at the call sites).

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature failed to converge (requested abs {abs_tol}, rel {rel_tol})")]
    NoConvergence { abs_tol: f64, rel_tol: f64 },
    #[error("integration bounds must be finite, got [{0}, {1}]")]
    InvalidBounds(f64, f64),
}

/// Kronrod nodes on [0, 1] (positive half; even indices are Gauss-7 nodes),
/// at published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 48,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// One Gauss–Kronrod panel: returns (Kronrod estimate, |Kronrod - Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (idx, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[idx] * pair;
        if idx % 2 == 1 {
            gauss += WG[idx / 2] * pair;
        }
    }
    (half * kronrod, half * (kronrod - gauss).abs())
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<f64, QuadError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QuadError::InvalidBounds(a, b));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    // Worklist of (a, b, depth); bisect until each panel meets its share of
    // the tolerance.
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (value, err) = gk15(&f, lo, hi);
        let width_fraction = ((hi - lo) / (b - a)).abs();
        let allowed = (cfg.abs_tol * width_fraction).max(cfg.rel_tol * value.abs());
        if err <= allowed || (hi - lo).abs() < f64::EPSILON * (1.0 + lo.abs() + hi.abs()) {
            total += value;
            continue;
        }
        if depth >= cfg.max_depth {
            return Err(QuadError::NoConvergence {
                abs_tol: cfg.abs_tol,
                rel_tol: cfg.rel_tol,
            });
        }
        let mid = 0.5 * (lo + hi);
        stack.push((lo, mid, depth + 1));
        stack.push((mid, hi, depth + 1));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn truncated_exponential() {
        let v = integrate(|x| (-x).exp(), 0.0, 60.0, &QuadConfig::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let v = integrate(|x| (10.0 * x).cos(), 0.0, PI, &QuadConfig::default()).unwrap();
        assert!(v.abs() < 1e-12, "got {v}");
    }

    #[test]
    fn gaussian_matches_erf_normalization() {
        let v = integrate(
            |x| (-x * x / 2.0).exp(),
            -12.0,
            12.0,
            &QuadConfig::default(),
        )
        .unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn depth_cap_reports_failure() {
        let cfg = QuadConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_depth: 3,
        };
        let res = integrate(|x| 1.0 / x.sqrt(), 1e-12, 1.0, &cfg);
        assert!(matches!(res, Err(QuadError::NoConvergence { .. })));
    }
}
