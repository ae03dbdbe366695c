//! Adaptive double-exponential quadrature with recursive bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute tolerance used when the integral vanishes.
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_depth: 16,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadConfig {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Quad {
    type Output = Quad;
    fn add(self, o: Quad) -> Quad {
        Quad {
            value: self.value + o.value,
            error: self.error + o.error,
        }
    }
}

/// `∫ₐᵇ f`. The integrand may blow up integrably at either endpoint but must
/// be finite in the interior.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0 });
    }
    let rough = quadrature::integrate(&f, a, b, 0.0);
    if !rough.integral.is_finite() {
        return Err(Error::NonFinite("integrand".into()));
    }
    let mut target = cfg.rel_tol * rough.integral.abs();
    if target == 0.0 {
        target = cfg.abs_tol;
    }
    let q = bisect(&f, a, b, target, cfg.max_depth)?;
    if q.error > target.max(cfg.rel_tol * q.value.abs()) {
        return Err(Error::QuadratureFailed {
            value: q.value,
            error: q.error,
        });
    }
    Ok(q)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, target: f64, depth: u32) -> Result<Quad> {
    let o = quadrature::integrate(f, a, b, target);
    if o.error_estimate <= target || depth == 0 {
        return Ok(Quad {
            value: o.integral,
            error: o.error_estimate,
        });
    }
    let m = 0.5 * (a + b);
    Ok(bisect(f, a, m, 0.5 * target, depth - 1)? + bisect(f, m, b, 0.5 * target, depth - 1)?)
}

/// `∫₀ᴸ g(r) dr` for `g` singular at `r = 0`, via `r = τᵏ`.
pub fn integrate_endpoint<F: Fn(f64) -> f64>(g: F, len: f64, k: u32, cfg: &QuadConfig) -> Result<Quad> {
    if k <= 1 {
        return integrate(g, 0.0, len, cfg);
    }
    let kf = k as f64;
    let upper = len.powf(1.0 / kf);
    integrate(
        |tau| {
            let r = tau.powi(k as i32);
            if r <= 0.0 {
                return 0.0;
            }
            g(r) * kf * r / tau
        },
        0.0,
        upper,
        cfg,
    )
}

/// `∫₀ᴸ g(x) dx` for `g(x) = x^m h(x)` with `m > −1` and `h` bounded near
/// 0, via `x = L·u^{1/(m+1)}`: the integrand becomes `L^{m+1} h(x)/(m+1)`.
/// `h` is taken constant below `1e−100·L`, where products inside `g` could
/// underflow.
pub fn integrate_power_endpoint<F: Fn(f64) -> f64>(g: F, len: f64, m: f64, cfg: &QuadConfig) -> Result<Quad> {
    if !(m > -1.0) {
        return Err(Error::Divergent(format!("x^{m} is not integrable at 0")));
    }
    let kappa = 1.0 / (m + 1.0);
    let scale = len.powf(m + 1.0) * kappa;
    let floor = 1e-100 * len;
    integrate(
        |u| {
            let x = (len * u.powf(kappa)).max(floor);
            scale * g(x) / x.powf(m)
        },
        0.0,
        1.0,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_singular() {
        let cfg = QuadConfig::default();
        let q = integrate(|x| x * x, 0.0, 3.0, &cfg).unwrap();
        assert!((q.value - 9.0).abs() < 1e-12);
        let q = integrate(|x| 1.0 / x.sqrt(), 0.0, 4.0, &cfg).unwrap();
        assert!((q.value - 4.0).abs() < 1e-8);
        let q = integrate_endpoint(|r| r.powf(-0.9), 1.0, 10, &cfg).unwrap();
        assert!((q.value - 10.0).abs() < 1e-7, "{q:?}");
    }

    #[test]
    fn nearly_divergent_power() {
        let cfg = QuadConfig::default();
        for m in [-0.5, -0.98, -0.999] {
            let q = integrate_power_endpoint(|x| x.powf(m) * (1.0 + x), 0.5, m, &cfg).unwrap();
            let exact = 0.5f64.powf(m + 1.0) / (m + 1.0) + 0.5f64.powf(m + 2.0) / (m + 2.0);
            assert!((q.value / exact - 1.0).abs() < 1e-9, "{m}: {q:?} vs {exact}");
        }
        assert!(integrate_power_endpoint(|x| 1.0 / x, 1.0, -1.0, &cfg).is_err());
    }

    #[test]
    fn oscillatory_needs_bisection() {
        let cfg = QuadConfig::default();
        let q = integrate(|x| (40.0 * x).sin().powi(2), 0.0, 10.0, &cfg).unwrap();
        let exact = 5.0 - (800.0f64).sin() / 160.0;
        assert!((q.value - exact).abs() < 1e-8, "{q:?}");
    }

    #[test]
    fn halving_tolerance_moves_less_than_error() {
        let f = |x: f64| (x * 3.0).exp() / (1.0 + x * x);
        let a = integrate(f, 0.0, 2.0, &QuadConfig::with_rel_tol(1e-8)).unwrap();
        let b = integrate(f, 0.0, 2.0, &QuadConfig::with_rel_tol(5e-9)).unwrap();
        assert!((a.value - b.value).abs() <= a.error.max(1e-8 * a.value.abs()));
    }
}
