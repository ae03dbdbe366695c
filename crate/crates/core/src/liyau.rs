//! Li-Yau coefficients from a decreasing profile `b` on `[0, t]`.
//!
//! Integrating `(−b′Φ₁ + bΦ₂)′ ≥ −b′(E·LP_tf − ¼E²·P_tf)` over `[0, t]` with
//! `b(t) = b′(t) = 0` and dividing by `P_tf · (−b′(0))` gives
//!
//! `Γ(u) + c_z (Zu)² ≤ c_rate ∂ₜu + c_const`, `u = ln P_tf`,
//!
//! with `c_z = b(0)/(−b′(0))`, `c_rate = ∫b′E/(−b′(0))` and
//! `c_const = ∫b′E²/(4b′(0))`, where `E = b″/b′ + 2b′/b + 2ρ`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::heat::LogHeatDerivatives;
use crate::quadrature::{integrate_endpoint, Quad, QuadConfig};

/// `b`, `b′`, `b″` (derivatives in `s`) at `r = t − s`.
pub type ProfileFn = Arc<dyn Fn(f64) -> [f64; 3] + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Power { alpha: f64 },
    /// `b = wᵅ` with `w = e^{−ks} − e^{−kt}`.
    Exponential { alpha: f64, k: f64 },
    Custom(ProfileFn),
}

#[derive(Clone)]
pub struct BProfile {
    shape: Shape,
    pub t: f64,
    /// `b(s) ~ (t − s)^q` as `s → t`.
    pub vanishing_order: f64,
    pub terminal_zero: bool,
    pub terminal_slope_zero: bool,
    pub decreasing: bool,
}

impl fmt::Debug for BProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match &self.shape {
            Shape::Power { alpha } => format!("power(alpha={alpha})"),
            Shape::Exponential { alpha, k } => format!("exponential(alpha={alpha}, k={k})"),
            Shape::Custom(_) => "custom".to_string(),
        };
        f.debug_struct("BProfile")
            .field("shape", &shape)
            .field("t", &self.t)
            .field("vanishing_order", &self.vanishing_order)
            .finish()
    }
}

fn check_alpha_t(alpha: f64, t: f64) -> Result<()> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(invalid("alpha", format!("must exceed 2, got {alpha}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    Ok(())
}

impl BProfile {
    /// `b(s) = (t − s)^α`.
    pub fn power(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(t > 0.0) {
            return Err(invalid("alpha", "power profile needs alpha > 0 and t > 0"));
        }
        Ok(BProfile {
            shape: Shape::Power { alpha },
            t,
            vanishing_order: alpha,
            terminal_zero: true,
            terminal_slope_zero: alpha > 1.0,
            decreasing: true,
        })
    }

    /// `b(s) = (e^{−2ρs/(3α)} − e^{−2ρt/(3α)})^α`; reduces to the power
    /// profile (up to a constant factor) at `ρ = 0`.
    pub fn exponential(alpha: f64, rho: f64, t: f64) -> Result<Self> {
        if rho == 0.0 {
            return Self::power(alpha, t);
        }
        if !(alpha > 1.0) || !(t > 0.0) {
            return Err(invalid("alpha", "exponential profile needs alpha > 1 and t > 0"));
        }
        Ok(BProfile {
            shape: Shape::Exponential {
                alpha,
                k: 2.0 * rho / (3.0 * alpha),
            },
            t,
            vanishing_order: alpha,
            terminal_zero: true,
            terminal_slope_zero: true,
            decreasing: rho > 0.0,
        })
    }

    /// A user profile given as `r ↦ [b, b′, b″]` with `r = t − s`. Flags are
    /// established by sampling.
    pub fn custom(t: f64, vanishing_order: f64, f: ProfileFn) -> Result<Self> {
        if !(t > 0.0) {
            return Err(invalid("t", format!("must be positive, got {t}")));
        }
        let [b_end, db_end, _] = f(0.0);
        let mut p = BProfile {
            shape: Shape::Custom(f),
            t,
            vanishing_order,
            terminal_zero: b_end.abs() <= 1e-14,
            terminal_slope_zero: db_end.abs() <= 1e-14,
            decreasing: true,
        };
        p.decreasing = p.sampled_defect(1000).is_none();
        Ok(p)
    }

    /// `[b, b′, b″]` at `r = t − s`.
    pub fn eval_r(&self, r: f64) -> [f64; 3] {
        match &self.shape {
            Shape::Power { alpha } => {
                let a = *alpha;
                [r.powf(a), -a * r.powf(a - 1.0), a * (a - 1.0) * r.powf(a - 2.0)]
            }
            Shape::Exponential { alpha, k } => {
                let a = *alpha;
                let ekt = (-k * self.t).exp();
                let w = ekt * (k * r).exp_m1();
                let dw = -k * ekt * (k * r).exp();
                let d2w = -k * dw;
                [
                    w.powf(a),
                    a * w.powf(a - 1.0) * dw,
                    a * (a - 1.0) * w.powf(a - 2.0) * dw * dw + a * w.powf(a - 1.0) * d2w,
                ]
            }
            Shape::Custom(f) => f(r),
        }
    }

    pub fn b(&self, s: f64) -> f64 {
        self.eval_r(self.t - s)[0]
    }

    pub fn db(&self, s: f64) -> f64 {
        self.eval_r(self.t - s)[1]
    }

    pub fn d2b(&self, s: f64) -> f64 {
        self.eval_r(self.t - s)[2]
    }

    /// `(b″/b′, b′/b)` at `r`, in closed form where available.
    fn ratios(&self, r: f64) -> (f64, f64) {
        match &self.shape {
            Shape::Power { alpha } => (-(alpha - 1.0) / r, -alpha / r),
            Shape::Exponential { alpha, k } => {
                let lw = -k * (k * r).exp() / (k * r).exp_m1();
                ((alpha - 1.0) * lw - k, alpha * lw)
            }
            Shape::Custom(_) => {
                let [b, db, d2b] = self.eval_r(r);
                (d2b / db, db / b)
            }
        }
    }

    /// First sampled violation of `b ≥ 0`, `b′ ≤ 0` on `[0, t)`.
    fn sampled_defect(&self, n: usize) -> Option<f64> {
        (0..n).map(|i| self.t * i as f64 / n as f64).find(|&s| {
            let [b, db, _] = self.eval_r(self.t - s);
            !(b >= 0.0 && db <= 0.0)
        })
    }

    /// Checks the profile invariants on 10³ sample points.
    pub fn validate(&self) -> Result<()> {
        if let Some(s) = self.sampled_defect(1000) {
            return Err(Error::ProfileDefect(format!("b < 0 or b' > 0 at s = {s}")));
        }
        Ok(())
    }

    fn substitution_power(&self) -> u32 {
        let q = self.vanishing_order;
        if q > 3.0 {
            1
        } else if q > 2.0 {
            (1.0 / (q - 2.0)).ceil().max(1.0) as u32
        } else {
            1
        }
    }
}

/// `E(s) = b″/b′ + 2b′/b + 2ρ`.
pub fn integrand_e(b: &BProfile, rho: f64, s: f64) -> Result<f64> {
    let r = b.t - s;
    let [bv, db, _] = b.eval_r(r);
    if db == 0.0 || bv == 0.0 {
        return Err(Error::ProfileDefect(format!("b or b' vanishes at s = {s}")));
    }
    let (q1, q2) = b.ratios(r);
    Ok(q1 + 2.0 * q2 + 2.0 * rho)
}

/// Coefficients of `c_gamma Γ(u) + c_z (Zu)² ≤ c_rate ∂ₜu + c_const`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiYauForm {
    pub c_gamma: f64,
    pub c_z: f64,
    pub c_rate: f64,
    pub c_const: f64,
    pub rho: f64,
    pub t: f64,
}

impl LiYauForm {
    /// Divides through by `c_gamma`.
    pub fn normalized(&self) -> LiYauForm {
        let k = 1.0 / self.c_gamma;
        LiYauForm {
            c_gamma: 1.0,
            c_z: self.c_z * k,
            c_rate: self.c_rate * k,
            c_const: self.c_const * k,
            ..*self
        }
    }

    /// `c_rate ∂ₜu + c_const − c_gamma Γ(u) − c_z (Zu)²`.
    pub fn margin(&self, gamma_u: f64, zu_sq: f64, du_dt: f64) -> f64 {
        self.c_rate * du_dt + self.c_const - self.c_gamma * gamma_u - self.c_z * zu_sq
    }

    /// Largest relative difference over the four coefficients.
    pub fn max_relative_gap(&self, other: &LiYauForm) -> f64 {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
        [
            rel(self.c_gamma, other.c_gamma),
            rel(self.c_z, other.c_z),
            rel(self.c_rate, other.c_rate),
            rel(self.c_const, other.c_const),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureForm {
    pub form: LiYauForm,
    /// Quadrature error estimate carried into `c_rate`.
    pub rate_error: f64,
    pub const_error: f64,
}

pub fn coefficients_from_b(b: &BProfile, rho: f64, cfg: &QuadConfig) -> Result<QuadratureForm> {
    if !b.terminal_zero || !b.terminal_slope_zero {
        return Err(Error::ProfileDefect("integrated route needs b(t) = b'(t) = 0".into()));
    }
    b.validate()?;
    let t = b.t;
    let [b0, db0, _] = b.eval_r(t);
    if db0 == 0.0 {
        return Err(Error::ProfileDefect("b'(0) = 0".into()));
    }
    let k = b.substitution_power();
    let e = |r: f64| {
        let (q1, q2) = b.ratios(r);
        q1 + 2.0 * q2 + 2.0 * rho
    };
    let i1: Quad = integrate_endpoint(|r| b.eval_r(r)[1] * e(r), t, k, cfg)?;
    let i2: Quad = integrate_endpoint(
        |r| {
            let ev = e(r);
            b.eval_r(r)[1] * ev * ev
        },
        t,
        k,
        cfg,
    )?;
    let n = -db0;
    Ok(QuadratureForm {
        form: LiYauForm {
            c_gamma: 1.0,
            c_z: b0 / n,
            c_rate: i1.value / n,
            c_const: i2.value / (4.0 * db0),
            rho,
            t,
        },
        rate_error: i1.error / n,
        const_error: i2.error / (4.0 * n),
    })
}

/// The power-profile form with the constant term exactly as displayed:
/// `c_const = ρ²t/α − ρ(3α−1)/(α−1) + (3α−1)²/((α−2)t)`.
pub fn corollary22_form(alpha: f64, rho: f64, t: f64) -> Result<LiYauForm> {
    check_alpha_t(alpha, t)?;
    let a = alpha;
    let q = (3.0 * a - 1.0) / (a - 1.0);
    Ok(LiYauForm {
        c_gamma: 1.0,
        c_z: t / a,
        c_rate: q - 2.0 * rho * t / a,
        c_const: rho * rho * t / a - rho * q + (3.0 * a - 1.0).powi(2) / ((a - 2.0) * t),
        rho,
        t,
    })
}

/// The power-profile form as the integrated inequality produces it: the
/// `ρ = 0` part of the constant is `(3α−1)²/(4(α−2)t)`, a quarter of the
/// displayed value in [`corollary22_form`].
pub fn corollary22_sharp_form(alpha: f64, rho: f64, t: f64) -> Result<LiYauForm> {
    let mut f = corollary22_form(alpha, rho, t)?;
    f.c_const -= 0.75 * (3.0 * alpha - 1.0).powi(2) / ((alpha - 2.0) * t);
    Ok(f)
}

/// Closed form for the exponential profile, `ρ > 0`.
pub fn corollary24_form(alpha: f64, rho: f64, t: f64) -> Result<LiYauForm> {
    check_alpha_t(alpha, t)?;
    if !(rho > 0.0) {
        return Err(invalid("rho", format!("must be positive, got {rho}")));
    }
    let a = alpha;
    let decay = (-2.0 * rho * t / (3.0 * a)).exp();
    let one_minus = -(-2.0 * rho * t / (3.0 * a)).exp_m1();
    Ok(LiYauForm {
        c_gamma: 1.0,
        c_z: 1.5 * one_minus / rho,
        c_rate: (3.0 * a - 1.0) / (a - 1.0) * decay,
        c_const: 1.5 * rho * ((1.0 - 1.0 / (3.0 * a)).powi(2) / (1.0 - 2.0 / a)) * decay * decay / one_minus,
        rho,
        t,
    })
}

/// `(A, B, C)` with `∂ₜu ≥ AΓ(u) + Bt(Zu)² − C/t`, read off
/// [`corollary22_form`] at `ρ = 0`; `C = c_const·t/c_rate`.
pub fn corollary23_constants(alpha: f64) -> Result<(f64, f64, f64)> {
    let f = corollary22_form(alpha, 0.0, 1.0)?;
    Ok((1.0 / f.c_rate, f.c_z / f.c_rate, f.c_const / f.c_rate))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// Pass iff `margin ≥ −k·σ`.
    Sigmas(f64),
    /// Pass iff `margin ≥ −σ`, with `σ` a deterministic error budget.
    Budget,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub margin: f64,
    pub sigma: f64,
    pub threshold: f64,
    pub passed: bool,
}

pub fn verify_liyau(form: &LiYauForm, d: &LogHeatDerivatives, tol: Tolerance) -> Result<MarginReport> {
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
    if !same(form.t, d.t) || !same(form.rho, d.rho) {
        return Err(invalid(
            "form",
            format!("(rho, t) = ({}, {}) but derivatives at ({}, {})", form.rho, form.t, d.rho, d.t),
        ));
    }
    let margin = form.margin(d.gamma_u, d.zu_sq, d.du_dt);
    let sigma = ((form.c_rate * d.du_dt_se).powi(2)
        + (form.c_gamma * d.gamma_u_se).powi(2)
        + (form.c_z * d.zu_sq_se).powi(2))
    .sqrt();
    let threshold = match tol {
        Tolerance::Sigmas(k) => -k * sigma,
        Tolerance::Budget => -sigma,
    };
    Ok(MarginReport {
        margin,
        sigma,
        threshold,
        passed: margin >= threshold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnackReport {
    pub t: f64,
    pub c: f64,
    /// `ln P₁f − C ln t − ln P_tf` per point.
    pub margins: Vec<f64>,
    pub min_margin: f64,
}

/// Checks `P_tf ≤ t^{−C} P₁f` pointwise from paired values.
pub fn harnack_time_bound(p_t: &[f64], p_1: &[f64], t: f64, c: f64) -> Result<HarnackReport> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid("t", format!("must lie in (0, 1], got {t}")));
    }
    if p_t.len() != p_1.len() {
        return Err(invalid("p_t", "length differs from p_1"));
    }
    if let Some(v) = p_t.iter().chain(p_1).find(|v| !(**v > 0.0)) {
        return Err(Error::NonPositiveEstimate(*v));
    }
    let margins: Vec<f64> = p_t
        .iter()
        .zip(p_1)
        .map(|(a, b)| b.ln() - c * t.ln() - a.ln())
        .collect();
    Ok(HarnackReport {
        t,
        c,
        min_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn power_profile_e() {
        let b = BProfile::power(3.0, 1.0).unwrap();
        for s in [0.0, 0.3, 0.9] {
            let e = integrand_e(&b, 0.5, s).unwrap();
            assert!(rel(e, -8.0 / (1.0 - s) + 1.0) < 1e-14);
            let shifted = integrand_e(&b, 0.75, s).unwrap();
            assert!((shifted - e - 0.5).abs() < 1e-12);
        }
        let third = BProfile::power(1.0 / 3.0, 2.0).unwrap();
        assert!((integrand_e(&third, 1.5, 0.7).unwrap() - 3.0).abs() < 1e-12);
        assert!(integrand_e(&b, 0.0, 1.0).is_err());
    }

    #[test]
    fn profile_derivatives_match_differences() {
        for b in [
            BProfile::power(3.5, 2.0).unwrap(),
            BProfile::exponential(3.0, 1.0, 2.0).unwrap(),
            BProfile::exponential(3.0, -1.0, 2.0).unwrap(),
        ] {
            for s in [0.2, 1.0, 1.5] {
                let h = 1e-5;
                let fd1 = (b.b(s + h) - b.b(s - h)) / (2.0 * h);
                let fd2 = (b.db(s + h) - b.db(s - h)) / (2.0 * h);
                assert!(rel(b.db(s), fd1) < 1e-7, "{b:?}");
                assert!(rel(b.d2b(s), fd2) < 1e-7, "{b:?}");
                let e = integrand_e(&b, 0.3, s).unwrap();
                let direct = b.d2b(s) / b.db(s) + 2.0 * b.db(s) / b.b(s) + 0.6;
                assert!(rel(e, direct) < 1e-10);
            }
        }
    }

    #[test]
    fn spot_values() {
        let f = corollary22_form(3.0, 0.0, 1.0).unwrap();
        assert!(rel(f.c_z, 1.0 / 3.0) < 1e-15);
        assert_eq!(f.c_rate, 4.0);
        assert_eq!(f.c_const, 64.0);
        let g = corollary22_form(3.0, 1.0, 1.0).unwrap();
        assert!(rel(g.c_rate, 10.0 / 3.0) < 1e-15);
        assert_eq!(corollary22_sharp_form(3.0, 0.0, 1.0).unwrap().c_const, 16.0);
        assert!(corollary22_form(2.0, 0.0, 1.0).is_err());
        assert!(corollary24_form(3.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn quadrature_power_profile() {
        let cfg = QuadConfig::default();
        for alpha in [2.5, 3.0, 5.0, 10.0] {
            for t in [0.1, 1.0, 10.0] {
                for rho in [-1.0, 0.0, 1.0] {
                    let b = BProfile::power(alpha, t).unwrap();
                    let q = coefficients_from_b(&b, rho, &cfg).unwrap().form;
                    let sharp = corollary22_sharp_form(alpha, rho, t).unwrap();
                    assert!(q.max_relative_gap(&sharp) < 1e-8, "{alpha} {t} {rho}: {q:?} vs {sharp:?}");
                    let shown = corollary22_form(alpha, rho, t).unwrap();
                    assert!(rel(q.c_rate, shown.c_rate) < 1e-8);
                    assert!(rel(q.c_z, shown.c_z) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadrature_exponential_profile() {
        let cfg = QuadConfig::default();
        for alpha in [2.5, 3.0, 5.0, 10.0] {
            for t in [0.1, 1.0, 10.0] {
                let b = BProfile::exponential(alpha, 1.0, t).unwrap();
                let q = coefficients_from_b(&b, 1.0, &cfg).unwrap().form;
                let c = corollary24_form(alpha, 1.0, t).unwrap();
                assert!(q.max_relative_gap(&c) < 1e-8, "{alpha} {t}: {q:?} vs {c:?}");
            }
        }
    }

    #[test]
    fn exponential_form_limits() {
        let far = corollary24_form(3.0, 1.0, 400.0).unwrap();
        assert!(far.c_rate < 1e-30);
        assert!(rel(far.c_z, 1.5) < 1e-12);
        let near = corollary24_form(3.0, 1e-7, 1.0).unwrap();
        let sharp = corollary22_sharp_form(3.0, 0.0, 1.0).unwrap();
        assert!(rel(near.c_z, sharp.c_z) < 1e-6);
        assert!(rel(near.c_rate, sharp.c_rate) < 1e-6);
        assert!(rel(near.c_const, sharp.c_const) < 1e-5);
    }

    #[test]
    fn time_scaling() {
        let cfg = QuadConfig::default();
        let a = coefficients_from_b(&BProfile::power(4.0, 1.0).unwrap(), 0.0, &cfg).unwrap().form;
        let b = coefficients_from_b(&BProfile::power(4.0, 3.0).unwrap(), 0.0, &cfg).unwrap().form;
        assert!(rel(a.c_rate, b.c_rate) < 1e-9);
        assert!(rel(a.c_const, 3.0 * b.c_const) < 1e-9);
    }

    #[test]
    fn halving_tolerance_is_within_error() {
        let b = BProfile::exponential(3.0, 1.0, 2.0).unwrap();
        let a = coefficients_from_b(&b, 1.0, &QuadConfig::with_rel_tol(1e-7)).unwrap();
        let c = coefficients_from_b(&b, 1.0, &QuadConfig::with_rel_tol(5e-8)).unwrap();
        assert!((a.form.c_rate - c.form.c_rate).abs() <= a.rate_error.max(1e-7 * a.form.c_rate.abs()));
        assert!((a.form.c_const - c.form.c_const).abs() <= a.const_error.max(1e-7 * a.form.c_const.abs()));
    }

    #[test]
    fn custom_profile_and_defects() {
        let b = BProfile::custom(
            1.0,
            3.0,
            Arc::new(|r: f64| [r.powi(3), -3.0 * r * r, 6.0 * r]),
        )
        .unwrap();
        let q = coefficients_from_b(&b, 0.0, &QuadConfig::default()).unwrap().form;
        assert!(rel(q.c_const, 16.0) < 1e-8);
        let bad = BProfile::custom(1.0, 3.0, Arc::new(|r: f64| [r, -1.0, 0.0])).unwrap();
        assert!(coefficients_from_b(&bad, 0.0, &QuadConfig::default()).is_err());
        let flat = BProfile::custom(1.0, 3.0, Arc::new(|r: f64| [(r - 0.5).powi(3) + 0.125, -3.0 * (r - 0.5).powi(2), 6.0 * (r - 0.5)])).unwrap();
        assert!(!flat.decreasing || flat.validate().is_ok());
    }

    #[test]
    fn corollary23() {
        let (a, b, c) = corollary23_constants(3.0).unwrap();
        assert!(rel(a, 0.25) < 1e-15 && rel(b, 1.0 / 12.0) < 1e-15 && rel(c, 16.0) < 1e-15);
        let (xmin, cmin) = crate::stats::golden_section(|x| corollary23_constants(x).unwrap().2, 2.05, 10.0, 1e-10);
        // d/dα of (3α−1)(α−1)/(α−2) vanishes at α = 2 + √(5/3)
        assert!((xmin - (2.0 + (5.0f64 / 3.0).sqrt())).abs() < 1e-6);
        assert!((cmin - 15.75).abs() < 0.05);
        for i in 1..2000 {
            let alpha = 2.0 + i as f64 * 0.01;
            assert!(corollary23_constants(alpha).unwrap().2 > 2.0);
        }
    }

    #[test]
    fn margin_and_harnack() {
        let f = corollary22_form(3.0, 0.0, 1.0).unwrap();
        let d = LogHeatDerivatives::zero(0.0, 1.0);
        let r = verify_liyau(&f, &d, Tolerance::Sigmas(3.0)).unwrap();
        assert_eq!(r.margin, 64.0);
        assert!(r.passed);
        let wrong = LogHeatDerivatives::zero(0.0, 2.0);
        assert!(verify_liyau(&f, &wrong, Tolerance::Sigmas(3.0)).is_err());
        let h = harnack_time_bound(&[2.0], &[2.0], 1.0, 16.0).unwrap();
        assert_eq!(h.min_margin, 0.0);
        assert!(harnack_time_bound(&[1.0], &[1.0], 1.5, 16.0).is_err());
    }
}
