//! Profiles `V` on `[0, L]` and the functionals behind the `ρ = 0` best
//! constant and the long-time decay for `ρ > 0`.
//!
//! A decreasing profile `b` on `[0, t]` becomes `V(b) = −b²b′` as a function
//! of the value `x = b`. Then `E = −V′/x² + 2ρ`, and with `b(0) = 1` and the
//! time constraint `∫₀¹ x²/V = t` rescaled to 1, the integrated inequality
//! reads
//!
//! `V(1)Γ(u) + t(Zu)² ≤ (α − 2ρt)∂ₜu + (β − α² + (α − 2ρt)²)/(4t)`
//!
//! with `α = ∫V′/x²` and `β = ∫(V′/x²)²`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::liyau::{BProfile, LiYauForm};
use crate::quadrature::{integrate, integrate_power_endpoint, Quad, QuadConfig};
use crate::stats::{golden_section, linear_fit, LinearFit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "representation", rename_all = "snake_case")]
pub enum VProfile {
    /// `λε^{3−γ}x^γ` on `[0, ε]` and `λx³` on `[ε, 1]`.
    Parametric { eps: f64, gamma: f64 },
    /// Piecewise power law through `(nodes[i], values[i])`, with
    /// `nodes[0] = 0`, `values[0] = 0` and `V = values[1]·(x/nodes[1])^p`
    /// on the first cell.
    Grid {
        nodes: Vec<f64>,
        values: Vec<f64>,
        first_power: f64,
    },
}

/// `V = v0·(x/x0)^p` on `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Piece {
    a: f64,
    b: f64,
    x0: f64,
    v0: f64,
    p: f64,
}

/// `∫ y^m dy` over `[lo, hi]`.
fn power_integral(m: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo == 0.0 {
        if m <= -1.0 {
            return Err(Error::Divergent(format!("x^{m} is not integrable at 0")));
        }
        return Ok(hi.powf(m + 1.0) / (m + 1.0));
    }
    let l = (hi / lo).ln();
    let z = (m + 1.0) * l;
    let ratio = if z.abs() < 1e-12 { 1.0 } else { z.exp_m1() / z };
    Ok(lo.powf(m + 1.0) * l * ratio)
}

impl Piece {
    fn value(&self, x: f64) -> f64 {
        self.v0 * (x / self.x0).powf(self.p)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.v0 * self.p * (x / self.x0).powf(self.p - 1.0) / self.x0
    }

    fn j(&self, m: f64) -> Result<f64> {
        power_integral(m, self.a / self.x0, self.b / self.x0)
    }

    /// `[∫x²/V, ∫V′/x², ∫(V′/x²)², ∫V/x³]` in closed form.
    fn exact(&self) -> Result<[f64; 4]> {
        let (x0, v0, p) = (self.x0, self.v0, self.p);
        Ok([
            x0.powi(3) / v0 * self.j(2.0 - p)?,
            v0 * p / (x0 * x0) * self.j(p - 3.0)?,
            (v0 * p).powi(2) / x0.powi(5) * self.j(2.0 * p - 6.0)?,
            v0 / (x0 * x0) * self.j(p - 3.0)?,
        ])
    }

    /// `∫ₐᵇ g`; on the first cell the integrand behaves like `x^m`, and the
    /// substitution `x = τᵏ` removes the singularity.
    fn integrate<F: Fn(f64) -> f64>(&self, g: F, m: f64, cfg: &QuadConfig) -> Result<Quad> {
        if self.a > 0.0 {
            return integrate(g, self.a, self.b, cfg);
        }
        integrate_power_endpoint(g, self.b, m, cfg)
    }
}

/// Closed forms for the parametric family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyClosedForms {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    /// The reference form `λ²ε((3−γ)²/(γ−2))((γ+10)/(2γ−5) + 4ε/(γ−2))`.
    pub beta_minus_alpha_sq_displayed: f64,
    /// The same difference from expanding `β − α²`; the sign of the `ε²` term
    /// is negative.
    pub beta_minus_alpha_sq: f64,
}

pub fn family_lambda(eps: f64, gamma: f64) -> f64 {
    -eps.ln() + 1.0 / (3.0 - gamma)
}

fn check_family(eps: f64, gamma: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if !(gamma > 2.5 && gamma < 3.0) {
        return Err(invalid("gamma", format!("must lie in (5/2, 3), got {gamma}")));
    }
    Ok(())
}

pub fn family_closed_forms(eps: f64, gamma: f64) -> Result<FamilyClosedForms> {
    check_family(eps, gamma)?;
    let (e, g) = (eps, gamma);
    let l = family_lambda(e, g);
    let lead = l * l * e * (3.0 - g).powi(2) / (g - 2.0);
    Ok(FamilyClosedForms {
        lambda: l,
        alpha: l * (3.0 + 2.0 * e * (3.0 - g) / (g - 2.0)),
        beta: l * l * (9.0 + e * (15.0 - g) * (3.0 - g) / (2.0 * g - 5.0)),
        beta_minus_alpha_sq_displayed: lead * ((g + 10.0) / (2.0 * g - 5.0) + 4.0 * e / (g - 2.0)),
        beta_minus_alpha_sq: lead * ((g + 10.0) / (2.0 * g - 5.0) - 4.0 * e / (g - 2.0)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VFunctionals {
    /// `∫₀ᴸ V′/x²`.
    pub alpha: f64,
    /// `V(L)/L² + 2∫₀ᴸ V/x³`.
    pub alpha_by_parts: f64,
    /// `∫₀ᴸ (V′/x²)²`.
    pub beta: f64,
    /// `V` at the right end of the support.
    pub v_at_1: f64,
    /// `∫₀ᴸ x²/V`.
    pub constraint: f64,
    pub alpha_error: f64,
    pub beta_error: f64,
}

impl VFunctionals {
    /// `C = tβ/(4α)`, the constant in `∂ₜu ≥ −C/t` for `ρ = 0`. Invariant
    /// under both rescalings.
    pub fn best_constant(&self) -> f64 {
        self.constraint * self.beta / (4.0 * self.alpha)
    }

    pub fn beta_margin(&self) -> f64 {
        self.beta - self.alpha * self.alpha
    }

    pub fn alpha_margin(&self) -> f64 {
        self.alpha - self.v_at_1 - 8.0
    }
}

impl VProfile {
    pub fn parametric(eps: f64, gamma: f64) -> Result<Self> {
        check_family(eps, gamma)?;
        Ok(VProfile::Parametric { eps, gamma })
    }

    /// `V = c·x^p` on `[0, 1]`.
    pub fn power(c: f64, p: f64) -> Result<Self> {
        Self::grid(vec![0.0, 1.0], vec![0.0, c], p)
    }

    pub fn grid(nodes: Vec<f64>, values: Vec<f64>, first_power: f64) -> Result<Self> {
        let v = VProfile::Grid {
            nodes,
            values,
            first_power,
        };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            VProfile::Parametric { eps, gamma } => check_family(*eps, *gamma),
            VProfile::Grid {
                nodes,
                values,
                first_power,
            } => {
                if nodes.len() < 2 || nodes.len() != values.len() {
                    return Err(invalid("nodes", "need at least two nodes and one value per node"));
                }
                if nodes[0] != 0.0 || values[0] != 0.0 {
                    return Err(invalid("nodes", "grid must start at x = 0 with V(0) = 0"));
                }
                if nodes.windows(2).any(|w| !(w[1] > w[0])) || !nodes.iter().all(|x| x.is_finite()) {
                    return Err(invalid("nodes", "must be strictly increasing and finite"));
                }
                if values[1..].iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(invalid("values", "must be positive away from 0"));
                }
                if !(*first_power > 2.0) {
                    return Err(invalid("first_power", format!("V/x² must vanish at 0, got p = {first_power}")));
                }
                Ok(())
            }
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self {
            VProfile::Parametric { eps, gamma } => Some(family_lambda(*eps, *gamma)),
            VProfile::Grid { .. } => None,
        }
    }

    /// Exact grid representation; the family is a two-cell power law.
    pub fn to_grid(&self) -> VProfile {
        match self {
            VProfile::Parametric { eps, gamma } => {
                let l = family_lambda(*eps, *gamma);
                VProfile::Grid {
                    nodes: vec![0.0, *eps, 1.0],
                    values: vec![0.0, l * eps.powi(3), l],
                    first_power: *gamma,
                }
            }
            g => g.clone(),
        }
    }

    fn pieces(&self) -> Vec<Piece> {
        let VProfile::Grid {
            nodes,
            values,
            first_power,
        } = self.to_grid()
        else {
            unreachable!()
        };
        let mut out = vec![Piece {
            a: 0.0,
            b: nodes[1],
            x0: nodes[1],
            v0: values[1],
            p: first_power,
        }];
        for i in 1..nodes.len() - 1 {
            out.push(Piece {
                a: nodes[i],
                b: nodes[i + 1],
                x0: nodes[i],
                v0: values[i],
                p: (values[i + 1] / values[i]).ln() / (nodes[i + 1] / nodes[i]).ln(),
            });
        }
        out
    }

    fn piece_at(&self, x: f64) -> Piece {
        let ps = self.pieces();
        *ps.iter().find(|p| x <= p.b).unwrap_or(ps.last().expect("non-empty"))
    }

    pub fn support(&self) -> f64 {
        match self {
            VProfile::Parametric { .. } => 1.0,
            VProfile::Grid { nodes, .. } => *nodes.last().expect("validated"),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.piece_at(x).value(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.piece_at(x).derivative(x)
    }

    /// `V ↦ cV`.
    pub fn scaled(&self, c: f64) -> VProfile {
        let VProfile::Grid {
            nodes,
            values,
            first_power,
        } = self.to_grid()
        else {
            unreachable!()
        };
        VProfile::Grid {
            nodes,
            values: values.iter().map(|v| v * c).collect(),
            first_power,
        }
    }

    /// `V(s) ↦ V(λs)/λ³`, moving the support from `[0, L]` to `[0, L/λ]`.
    pub fn rescaled_argument(&self, lambda: f64) -> VProfile {
        let VProfile::Grid {
            nodes,
            values,
            first_power,
        } = self.to_grid()
        else {
            unreachable!()
        };
        VProfile::Grid {
            nodes: nodes.iter().map(|x| x / lambda).collect(),
            values: values.iter().map(|v| v / lambda.powi(3)).collect(),
            first_power,
        }
    }

    fn first_power(&self) -> f64 {
        match self {
            VProfile::Parametric { gamma, .. } => *gamma,
            VProfile::Grid { first_power, .. } => *first_power,
        }
    }

    /// `∫₀ᴸ x²/V` by quadrature.
    pub fn constraint_integral(&self, cfg: &QuadConfig) -> Result<f64> {
        self.validate()?;
        let p = self.first_power();
        if p >= 3.0 {
            return Err(Error::Divergent(format!(
                "constraint integral ∫x²/V diverges for V ~ x^{p} at 0"
            )));
        }
        let mut total = 0.0;
        for pc in self.pieces() {
            total += pc.integrate(|x| x * x / pc.value(x), 2.0 - pc.p, cfg)?.value;
        }
        Ok(total)
    }

    /// Moves the support to `[0, 1]` and scales so that `∫₀¹ x²/V = 1`. The
    /// parametric family is returned unchanged.
    pub fn normalize(&self, cfg: &QuadConfig) -> Result<VProfile> {
        self.constraint_integral(cfg)?;
        if let VProfile::Parametric { .. } = self {
            return Ok(self.clone());
        }
        let c = self.functionals_exact()?.constraint;
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Divergent(format!("constraint integral is {c}")));
        }
        let unit = self.rescaled_argument(1.0 / self.support());
        Ok(unit.scaled(c))
    }

    /// All functionals by quadrature on each cell; the two routes to `α` must
    /// agree to `1e−8`.
    pub fn functionals(&self, cfg: &QuadConfig) -> Result<VFunctionals> {
        self.validate()?;
        let p = self.first_power();
        if p <= 2.5 {
            return Err(Error::Divergent(format!("β = ∫(V′/x²)² diverges for V ~ x^{p} at 0")));
        }
        let constraint = self.constraint_integral(cfg)?;
        let mut alpha = Quad { value: 0.0, error: 0.0 };
        let mut beta = alpha;
        let mut v_x3 = alpha;
        for pc in self.pieces() {
            let d = |x: f64| pc.derivative(x) / (x * x);
            alpha = alpha + pc.integrate(d, pc.p - 3.0, cfg)?;
            beta = beta + pc.integrate(|x| d(x).powi(2), 2.0 * pc.p - 6.0, cfg)?;
            v_x3 = v_x3 + pc.integrate(|x| pc.value(x) / x.powi(3), pc.p - 3.0, cfg)?;
        }
        let l = self.support();
        let v_at_1 = self.value(l);
        let alpha_by_parts = v_at_1 / (l * l) + 2.0 * v_x3.value;
        let gap = (alpha.value - alpha_by_parts).abs() / alpha.value.abs().max(1.0);
        if gap > 1e-8 {
            return Err(Error::QuadratureFailed {
                value: alpha.value,
                error: gap,
            });
        }
        Ok(VFunctionals {
            alpha: alpha.value,
            alpha_by_parts,
            beta: beta.value,
            v_at_1,
            constraint,
            alpha_error: alpha.error,
            beta_error: beta.error,
        })
    }

    /// The same functionals from the per-cell closed forms.
    pub fn functionals_exact(&self) -> Result<VFunctionals> {
        self.validate()?;
        let mut s = [0.0; 4];
        for pc in self.pieces() {
            let e = pc.exact()?;
            for (acc, v) in s.iter_mut().zip(e) {
                *acc += v;
            }
        }
        let l = self.support();
        let v_at_1 = self.value(l);
        Ok(VFunctionals {
            alpha: s[1],
            alpha_by_parts: v_at_1 / (l * l) + 2.0 * s[3],
            beta: s[2],
            v_at_1,
            constraint: s[0],
            alpha_error: 0.0,
            beta_error: 0.0,
        })
    }
}

/// `V(1)Γ(u) + t(Zu)² ≤ (α − 2ρt)∂ₜu + (β − α² + (α − 2ρt)²)/(4t)` for a
/// normalized profile.
pub fn liyau_from_v(v: &VProfile, rho: f64, t: f64, cfg: &QuadConfig) -> Result<LiYauForm> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    let f = v.functionals(cfg)?;
    if (f.constraint - 1.0).abs() > 1e-8 || (v.support() - 1.0).abs() > 1e-12 {
        return Err(invalid("v", format!("profile is not normalized (∫x²/V = {})", f.constraint)));
    }
    let rate = f.alpha - 2.0 * rho * t;
    Ok(LiYauForm {
        c_gamma: f.v_at_1,
        c_z: t,
        c_rate: rate,
        c_const: (f.beta - f.alpha * f.alpha + rate * rate) / (4.0 * t),
        rho,
        t,
    })
}

/// Profile of `V(x) = −b²b′` at `b = x`, after scaling `b(0)` to 1 and the
/// time constraint to 1. Sampled on `n` geometric nodes in `[1e−4, 1]`; the
/// first cell uses the power `3 − 1/q` implied by `b ~ (t−s)^q`.
pub fn v_from_b(b: &BProfile, n: usize, cfg: &QuadConfig) -> Result<VProfile> {
    if n < 2 {
        return Err(invalid("n", "need at least two nodes"));
    }
    b.validate()?;
    let t = b.t;
    let [b0, db0, _] = b.eval_r(t);
    if !(b0 > 0.0) || db0 == 0.0 {
        return Err(Error::ProfileDefect("v_from_b needs b(0) > 0 and b'(0) < 0".into()));
    }
    let mut nodes = vec![0.0];
    let mut values = vec![0.0];
    for i in 0..n {
        let x = if i + 1 == n {
            1.0
        } else {
            1e-4f64.powf(1.0 - i as f64 / (n - 1) as f64)
        };
        // b(t − r)/b₀ = x, increasing in r.
        let (mut lo, mut hi) = (0.0, t);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if b.eval_r(mid)[0] / b0 < x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        let db = b.eval_r(r)[1];
        nodes.push(x);
        values.push(t * x * x * (-db) / b0);
    }
    let p = 3.0 - 1.0 / b.vanishing_order;
    VProfile::grid(nodes, values, p)?.normalize(cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub eps_points: usize,
    pub gamma_points: usize,
    pub eps_min: f64,
    /// Interior nodes of the grid search.
    pub grid_nodes: usize,
    pub grid_sweeps: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            eps_points: 40,
            gamma_points: 40,
            eps_min: 1e-4,
            grid_nodes: 16,
            grid_sweeps: 60,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub stage: &'static str,
    pub index: usize,
    pub eps: f64,
    pub gamma: f64,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestConstant {
    pub c_min: f64,
    pub profile: VProfile,
    pub family_eps: f64,
    pub family_gamma: f64,
    pub family_c: f64,
    /// Whether the family optimum sits on the edge of the scanned box.
    pub boundary_hit: bool,
    pub evaluated: usize,
    pub min_evaluated: f64,
    /// Evaluated profiles with `C ≤ 2`.
    pub violations: usize,
    pub trace: Vec<TraceRow>,
}

fn family_c(eps: f64, gamma: f64) -> Result<f64> {
    let f = family_closed_forms(eps, gamma)?;
    Ok(f.beta / (4.0 * f.alpha))
}

fn grid_c(nodes: &[f64], logv: &[f64], p: f64) -> Option<f64> {
    let mut values = vec![0.0];
    values.extend(logv.iter().map(|l| l.exp()));
    let v = VProfile::grid(nodes.to_vec(), values, p).ok()?;
    let f = v.functionals_exact().ok()?;
    let c = f.best_constant();
    c.is_finite().then_some(c)
}

/// Minimizes `C(V) = β/(4α)` over the family (scan plus golden-section
/// refinement) and then over grid profiles by a coordinate search on
/// `ln V` and the first-cell power, warm-started at the family optimum.
pub fn best_c_rho0(cfg: &SearchConfig) -> Result<BestConstant> {
    if cfg.eps_points < 2 || cfg.gamma_points < 2 || !(cfg.eps_min > 0.0 && cfg.eps_min < 1.0) {
        return Err(invalid("search", "need at least a 2×2 family scan and eps_min in (0, 1)"));
    }
    let eps_grid: Vec<f64> = (0..cfg.eps_points)
        .map(|i| cfg.eps_min.powf(1.0 - i as f64 / (cfg.eps_points - 1) as f64) * 0.99)
        .collect();
    let gamma_grid: Vec<f64> = (0..cfg.gamma_points)
        .map(|j| 2.5 + 0.5 * (j as f64 + 0.5) / cfg.gamma_points as f64)
        .collect();
    let scan: Vec<(usize, usize, f64)> = (0..cfg.eps_points * cfg.gamma_points)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / cfg.gamma_points, k % cfg.gamma_points);
            (i, j, family_c(eps_grid[i], gamma_grid[j]).unwrap_or(f64::INFINITY))
        })
        .collect();
    let mut trace: Vec<TraceRow> = scan
        .iter()
        .enumerate()
        .map(|(k, &(i, j, c))| TraceRow {
            stage: "family_scan",
            index: k,
            eps: eps_grid[i],
            gamma: gamma_grid[j],
            c,
        })
        .collect();
    let &(bi, bj, _) = scan
        .iter()
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .expect("non-empty scan");
    let boundary_hit = bi == 0 || bi + 1 == cfg.eps_points || bj == 0 || bj + 1 == cfg.gamma_points;

    // Alternating golden-section refinement in (ln ε, γ).
    let (mut le, mut g) = (eps_grid[bi].ln(), gamma_grid[bj]);
    let (le_lo, le_hi) = (cfg.eps_min.ln() - 2.0, (0.999f64).ln());
    for round in 0..8 {
        let (x, c) = golden_section(|x| family_c(x.exp(), g).unwrap_or(f64::INFINITY), le_lo, le_hi, 1e-10);
        le = x;
        trace.push(TraceRow {
            stage: "family_refine",
            index: 2 * round,
            eps: le.exp(),
            gamma: g,
            c,
        });
        let (y, c) = golden_section(|y| family_c(le.exp(), y).unwrap_or(f64::INFINITY), 2.5 + 1e-9, 3.0 - 1e-9, 1e-10);
        g = y;
        trace.push(TraceRow {
            stage: "family_refine",
            index: 2 * round + 1,
            eps: le.exp(),
            gamma: g,
            c,
        });
    }
    let (family_eps, family_gamma) = (le.exp(), g);
    let family_best = family_c(family_eps, family_gamma)?;

    // Grid search from the family optimum.
    let n = cfg.grid_nodes.max(2);
    let mut nodes = vec![0.0, family_eps];
    nodes.extend((1..=n).map(|i| family_eps.powf(1.0 - i as f64 / n as f64)));
    let warm = VProfile::parametric(family_eps, family_gamma)?;
    let mut logv: Vec<f64> = nodes[1..].iter().map(|&x| warm.value(x).ln()).collect();
    let mut p = family_gamma;
    let mut best = grid_c(&nodes, &logv, p).ok_or_else(|| Error::Divergent("warm start inadmissible".into()))?;
    let mut evaluated = scan.len() + 1;
    let mut all_c: Vec<f64> = scan.iter().map(|s| s.2).collect();
    all_c.push(best);
    let mut step = 0.05;
    let mut idx = 0;
    for _ in 0..cfg.grid_sweeps {
        let mut improved = false;
        for coord in 0..=logv.len() {
            for dir in [1.0, -1.0] {
                let (mut lv, mut pp) = (logv.clone(), p);
                if coord == logv.len() {
                    pp = (p + dir * step).clamp(2.5 + 1e-6, 3.0 - 1e-6);
                } else {
                    lv[coord] += dir * step;
                }
                // Inadmissible trial points are projected away, not counted.
                let Some(c) = grid_c(&nodes, &lv, pp) else { continue };
                evaluated += 1;
                all_c.push(c);
                if c < best {
                    best = c;
                    logv = lv;
                    p = pp;
                    improved = true;
                    trace.push(TraceRow {
                        stage: "grid_search",
                        index: idx,
                        eps: f64::NAN,
                        gamma: p,
                        c,
                    });
                    idx += 1;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-6 {
                break;
            }
        }
    }
    let mut values = vec![0.0];
    values.extend(logv.iter().map(|l| l.exp()));
    let grid_best = VProfile::grid(nodes, values, p)?.normalize(&QuadConfig::default())?;
    let (c_min, profile) = if best < family_best {
        (best, grid_best)
    } else {
        (family_best, warm)
    };
    let min_evaluated = all_c.iter().copied().fold(f64::INFINITY, f64::min);
    let violations = all_c.iter().filter(|c| **c <= 2.0).count();
    Ok(BestConstant {
        c_min,
        profile,
        family_eps,
        family_gamma,
        family_c: family_best,
        boundary_hit,
        evaluated,
        min_evaluated,
        violations,
        trace,
    })
}

pub fn write_trace_csv<W: Write>(trace: &[TraceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "stage,index,eps,gamma,c")?;
    for r in trace {
        writeln!(out, "{},{},{},{},{}", r.stage, r.index, r.eps, r.gamma, r.c)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t: f64,
    pub eps_upper: f64,
    pub eps_lower: f64,
    /// `∂ₜu ≤ upper` from the choice with `c > 0`.
    pub upper: f64,
    /// `∂ₜu ≥ −lower` from the choice with `c < 0`.
    pub lower: f64,
    pub width: f64,
    /// `(α − 2ρt)²/(β − α²)` along the `c > 0` choice.
    pub order_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub rho: f64,
    pub gamma: f64,
    pub c: f64,
    pub rows: Vec<DecayRow>,
    pub fit: LinearFit,
    pub slope: f64,
    pub expected_slope: f64,
}

/// Coefficients `(c_rate, c_const)` of the family form at `ε`, with the
/// cancellations in `α − 2ρt` and `β − α²` done analytically.
fn decay_coefficients(eps: f64, gamma: f64, t: f64, r: f64) -> Result<(f64, f64, f64, f64)> {
    let f = family_closed_forms(eps, gamma)?;
    // λ = 2ρt/3 − R, so α − 2ρt = −3R + 2λε(3−γ)/(γ−2).
    let rate = -3.0 * r + 2.0 * f.lambda * eps * (3.0 - gamma) / (gamma - 2.0);
    let bma = f.beta_minus_alpha_sq;
    Ok((rate, (bma + rate * rate) / (4.0 * t), rate * rate, bma))
}

/// For each `t`, takes `ε = exp(−2ρt/3 + 1/(3−γ) + R)` with `R = ±c·t·e^{−ρt/3}`
/// and reads the two one-sided bounds on `∂ₜu` off the family form with the
/// non-negative left side dropped; fits `ln(upper + lower)` against `t`.
pub fn long_time_decay(rho: f64, t_grid: &[f64], gamma: f64, c: f64) -> Result<DecayFit> {
    if !(rho > 0.0) {
        return Err(invalid("rho", format!("must be positive, got {rho}")));
    }
    if !(c > 0.0) {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let r = c * t * (-rho * t / 3.0).exp();
        let base = -2.0 * rho * t / 3.0 + 1.0 / (3.0 - gamma);
        let (eps_upper, eps_lower) = ((base + r).exp(), (base - r).exp());
        if eps_upper >= 1.0 {
            return Err(invalid("t", format!("t = {t} too small: ε = {eps_upper} ≥ 1")));
        }
        let (rate_u, const_u, rate_sq, bma) = decay_coefficients(eps_upper, gamma, t, r)?;
        let (rate_l, const_l, _, _) = decay_coefficients(eps_lower, gamma, t, -r)?;
        if !(rate_u < 0.0 && rate_l > 0.0) {
            return Err(Error::Divergent(format!(
                "rate coefficients have the wrong signs at t = {t}: {rate_u}, {rate_l}"
            )));
        }
        let upper = const_u / -rate_u;
        let lower = const_l / rate_l;
        rows.push(DecayRow {
            t,
            eps_upper,
            eps_lower,
            upper,
            lower,
            width: upper + lower,
            order_ratio: rate_sq / bma,
        });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let lw: Vec<f64> = rows.iter().map(|r| r.width.ln()).collect();
    let fit = linear_fit(&ts, &lw, None)?;
    Ok(DecayFit {
        rho,
        gamma,
        c,
        slope: fit.slope,
        expected_slope: -rho / 3.0,
        rows,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liyau::{corollary22_sharp_form, BProfile};

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn family_is_normalized() {
        for eps in [0.01, 0.1, 0.3] {
            for gamma in [2.6, 2.75, 2.9] {
                let v = VProfile::parametric(eps, gamma).unwrap();
                let c = v.constraint_integral(&cfg()).unwrap();
                assert!((c - 1.0).abs() < 1e-10, "{eps} {gamma} {c}");
            }
        }
    }

    #[test]
    fn family_spot_values() {
        let f = family_closed_forms(0.1, 2.75).unwrap();
        assert!((f.lambda - 6.302585).abs() < 1e-6);
        assert!((f.alpha - 19.3279).abs() < 1e-4, "{}", f.alpha);
    }

    #[test]
    fn family_closed_forms_match_quadrature() {
        for eps in [0.01, 0.05, 0.1, 0.3] {
            for gamma in [2.6, 2.75, 2.9] {
                let cf = family_closed_forms(eps, gamma).unwrap();
                let q = VProfile::parametric(eps, gamma).unwrap().functionals(&cfg()).unwrap();
                let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
                assert!(rel(q.alpha, cf.alpha) < 1e-9);
                assert!(rel(q.beta, cf.beta) < 1e-9);
                assert!(rel(q.beta - q.alpha * q.alpha, cf.beta_minus_alpha_sq) < 1e-6);
                assert!(q.beta_margin() > 0.0 && q.alpha_margin() > 0.0);
            }
        }
    }

    #[test]
    fn displayed_difference_has_wrong_sign_in_eps_squared_term() {
        let cf = family_closed_forms(0.1, 2.75).unwrap();
        let direct = cf.beta - cf.alpha * cf.alpha;
        assert!((direct - cf.beta_minus_alpha_sq).abs() < 1e-9 * cf.beta);
        assert!((direct - cf.beta_minus_alpha_sq_displayed).abs() > 1e-3);
    }

    #[test]
    fn pure_power_functionals() {
        let p = 2.7;
        let v = VProfile::power(1.0 / (3.0 - p), p).unwrap();
        let f = v.functionals(&cfg()).unwrap();
        let alpha = p / ((3.0 - p) * (p - 2.0));
        let beta = p * p / ((3.0 - p).powi(2) * (2.0 * p - 5.0));
        assert!((f.constraint - 1.0).abs() < 1e-10);
        assert!((f.alpha - alpha).abs() < 1e-8 * alpha);
        assert!((f.beta - beta).abs() < 1e-8 * beta);
        assert!((f.best_constant() - 3.9375).abs() < 1e-8);
    }

    #[test]
    fn cube_diverges() {
        let v = VProfile::power(1.0, 3.0).unwrap();
        assert!(matches!(v.normalize(&cfg()), Err(Error::Divergent(_))));
        let v = VProfile::power(1.0, 2.4).unwrap();
        assert!(matches!(v.functionals(&cfg()), Err(Error::Divergent(_))));
    }

    #[test]
    fn normalize_is_scale_free() {
        let v = VProfile::grid(vec![0.0, 0.2, 0.5, 1.0], vec![0.0, 0.05, 0.4, 3.0], 2.8).unwrap();
        let a = v.normalize(&cfg()).unwrap();
        let b = v.scaled(2.0).normalize(&cfg()).unwrap();
        let (VProfile::Grid { values: va, .. }, VProfile::Grid { values: vb, .. }) = (&a, &b) else {
            panic!()
        };
        for (x, y) in va.iter().zip(vb) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
        assert!((a.constraint_integral(&cfg()).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exact_and_quadrature_agree_on_grid() {
        let v = VProfile::grid(vec![0.0, 0.1, 0.3, 0.6, 1.0], vec![0.0, 0.004, 0.1, 0.9, 5.0], 2.65).unwrap();
        let q = v.functionals(&cfg()).unwrap();
        let e = v.functionals_exact().unwrap();
        for (a, b) in [(q.alpha, e.alpha), (q.beta, e.beta), (q.constraint, e.constraint)] {
            assert!((a - b).abs() < 1e-9 * b.abs());
        }
        assert!((e.alpha - e.alpha_by_parts).abs() < 1e-10 * e.alpha);
    }

    #[test]
    fn best_constant_is_rescaling_invariant() {
        let v = VProfile::parametric(0.1, 2.75).unwrap();
        let c0 = v.functionals(&cfg()).unwrap().best_constant();
        for lambda in [0.5, 2.0, 7.0] {
            let w = v.rescaled_argument(lambda);
            let c1 = w.functionals(&cfg()).unwrap().best_constant();
            let c2 = w.normalize(&cfg()).unwrap().functionals(&cfg()).unwrap().best_constant();
            assert!((c1 - c0).abs() < 1e-9 * c0 && (c2 - c0).abs() < 1e-9 * c0);
        }
    }

    #[test]
    fn power_profile_maps_to_sharp_form() {
        for alpha in [2.5, 3.0, 5.0] {
            for t in [0.1, 1.0] {
                for rho in [-1.0, 0.0, 1.0] {
                    let b = BProfile::power(alpha, t).unwrap();
                    let v = v_from_b(&b, 24, &cfg()).unwrap();
                    let form = liyau_from_v(&v, rho, t, &cfg()).unwrap().normalized();
                    let sharp = corollary22_sharp_form(alpha, rho, t).unwrap();
                    assert!(form.max_relative_gap(&sharp) < 1e-8, "{alpha} {t} {rho}: {form:?} {sharp:?}");
                }
            }
        }
    }

    #[test]
    fn rho_zero_form() {
        let v = VProfile::parametric(0.05, 2.6).unwrap();
        let f = v.functionals(&cfg()).unwrap();
        let form = liyau_from_v(&v, 0.0, 2.0, &cfg()).unwrap();
        assert!((form.c_rate - f.alpha).abs() < 1e-12);
        assert!((form.c_const - f.beta / 8.0).abs() < 1e-9 * f.beta);
        assert!(liyau_from_v(&v.scaled(2.0), 0.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn search_stays_above_two() {
        let r = best_c_rho0(&SearchConfig {
            grid_sweeps: 10,
            ..Default::default()
        })
        .unwrap();
        assert!(r.evaluated >= 1000);
        assert_eq!(r.violations, 0);
        assert!(r.min_evaluated > 2.0);
        assert!(r.c_min <= family_c(0.1, 2.75).unwrap());
        assert!(r.c_min <= r.family_c);
    }

    #[test]
    fn decay_slope() {
        let ts: Vec<f64> = (0..13).map(|i| 10.0 + 2.5 * i as f64).collect();
        let d = long_time_decay(1.0, &ts, 2.75, 2.0).unwrap();
        assert!(d.slope > -0.40 && d.slope < -0.27, "{}", d.slope);
        for r in &d.rows {
            assert!(r.upper > 0.0 && r.lower > 0.0);
            assert!(r.order_ratio > 0.1 && r.order_ratio < 10.0, "{r:?}");
        }
        assert!(long_time_decay(1.0, &[1.0], 2.75, 1.0).is_err());
    }
}
