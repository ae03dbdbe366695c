//! Haar sampling on SU(2), variance decay of the heat semigroup, the
//! Poincaré inequality and the on-diagonal ultracontractivity fit.
//!
//! Rates are measured on the squared norm `∫(P_t f)² dμ ~ e^{−2λt}`, so a gap
//! `λ` shows up as a fitted rate `2λ`.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::ScalarField;
use crate::gamma::gamma;
use crate::group::{GroupElement, GroupModel, ModelKind};
use crate::heat::{path_rng, short_time_exponent, simulate, DiffusionConfig, ShortTimeConfig, ShortTimeFit};
use crate::stats::{linear_fit, mean_estimate, LinearFit};

/// Stream offset separating Haar draws from the diffusion noise.
const HAAR_STREAM: u64 = 1 << 62;

/// `[[a+bi, c+di], [−c+di, a−bi]]` from a uniform point on `S³`.
pub fn haar_element<R: Rng + ?Sized>(rng: &mut R) -> GroupElement {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 1e-12 {
            let [a, b, c, d] = q.map(|v| v / n);
            return GroupElement::from_entries(ModelKind::Su2, [a, b, c, d, -c, d, a, -b, 0.0]);
        }
    }
}

pub fn haar_sample_su2(seed: u64, n: usize) -> Vec<GroupElement> {
    (0..n as u64)
        .map(|i| haar_element(&mut path_rng(seed, HAAR_STREAM + i)))
        .collect()
}

fn require_su2(model: &GroupModel) -> Result<()> {
    if model.kind != ModelKind::Su2 {
        return Err(Error::ModelMismatch(model.kind, ModelKind::Su2));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    pub step: f64,
    pub paths: usize,
    pub seed: u64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            step: 1e-2,
            paths: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    /// Fitted rate of `∫(P_t f − m)² dμ ~ e^{−rate·t}`.
    pub decay_rate: f64,
    /// Three-standard-error interval.
    pub ci: (f64, f64),
    pub t_grid: Vec<f64>,
    pub covariance: Vec<f64>,
    pub covariance_se: Vec<f64>,
    pub variance: f64,
    pub fit: LinearFit,
}

/// `∫(P_t f − m)² dμ = E[(f(X₀) − m)(f(X_{2t}) − m)]` for `X₀ ~ μ` by
/// stationarity and symmetry of `P_t`; the mean `m` is the empirical mean
/// over the Haar starts.
pub fn variance_decay(
    model: &GroupModel,
    f: &ScalarField,
    t_grid: &[f64],
    cfg: &SpectralConfig,
) -> Result<SpectralEstimate> {
    require_su2(model)?;
    if t_grid.len() < 2 || t_grid.iter().any(|t| !(*t > 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("t_grid", "need at least two increasing positive times"));
    }
    let dcfg = DiffusionConfig {
        step: cfg.step,
        paths: cfg.paths,
        seed: cfg.seed,
        ..Default::default()
    };
    dcfg.validate()?;
    let steps: Vec<usize> = t_grid.iter().map(|t| ((2.0 * t / cfg.step).round() as usize).max(1)).collect();
    let times: Vec<f64> = steps.iter().map(|&s| 0.5 * s as f64 * cfg.step).collect();
    let start = |p: u64| haar_element(&mut path_rng(cfg.seed, HAAR_STREAM + p));
    let rows: Vec<(f64, Vec<f64>)> = simulate(model, start, &steps, cfg.step, &dcfg, 0..cfg.paths as u64, |p, s| {
        (f.value(&start(p)), s.iter().map(|g| f.value(g)).collect())
    });
    let f0: Vec<f64> = rows.iter().map(|r| r.0).collect();
    if f0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("test function at a Haar sample".into()));
    }
    let m = mean_estimate(&f0).mean;
    let variance = f0.iter().map(|v| (v - m).powi(2)).sum::<f64>() / f0.len() as f64;
    if !(variance > 1e-14 * (1.0 + m * m)) {
        return Err(Error::FitRejected(format!(
            "variance of f under Haar measure vanishes ({variance:.3e}); f is constant"
        )));
    }
    let mut covariance = Vec::with_capacity(times.len());
    let mut covariance_se = Vec::with_capacity(times.len());
    for ti in 0..times.len() {
        let prods: Vec<f64> = rows.iter().map(|(a, b)| (a - m) * (b[ti] - m)).collect();
        let e = mean_estimate(&prods);
        covariance.push(e.mean);
        covariance_se.push(e.std_error);
    }
    if let Some((i, c)) = covariance.iter().enumerate().find(|(i, c)| !(**c > 2.0 * covariance_se[*i])) {
        return Err(Error::FitRejected(format!(
            "covariance at t = {} is {c:.3e}, not resolved above noise; shorten t_grid or add paths",
            times[i]
        )));
    }
    let ly: Vec<f64> = covariance.iter().map(|c| c.ln()).collect();
    let w: Vec<f64> = covariance.iter().zip(&covariance_se).map(|(c, s)| (c / s).powi(2)).collect();
    let fit = linear_fit(&times, &ly, Some(&w))?;
    let worst = times
        .iter()
        .zip(&ly)
        .zip(&w)
        .map(|((t, y), w)| (y - fit.intercept - fit.slope * t).abs() * w.sqrt())
        .fold(0.0, f64::max);
    if worst > 6.0 {
        return Err(Error::FitRejected(format!(
            "residual of {worst:.1} standard errors; decay not exponential on this window"
        )));
    }
    let (lo, hi) = fit.slope_interval(3.0);
    Ok(SpectralEstimate {
        decay_rate: -fit.slope,
        ci: (-hi, -lo),
        t_grid: times,
        covariance,
        covariance_se,
        variance,
        fit,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    /// `(3/ρ)∫Γ(f) − Var(f)`.
    pub margin: f64,
    pub sigma: f64,
    pub variance: f64,
    pub energy: f64,
    pub passed: bool,
    pub samples: usize,
}

/// Monte Carlo check of `∫f² − (∫f)² ≤ (3/ρ)∫Γ(f)` under Haar measure.
pub fn poincare_check(model: &GroupModel, f: &ScalarField, n: usize, seed: u64) -> Result<PoincareReport> {
    require_su2(model)?;
    if n < 2 {
        return Err(invalid("n", "need at least two samples"));
    }
    let gf = gamma(f, f, model)?;
    let pts = haar_sample_su2(seed, n);
    let vals: Vec<(f64, f64)> = pts.par_iter().map(|g| (f.value(g), gf.value(g))).collect();
    // Shifting by the first value makes a constant f give exactly zero.
    let base = vals[0].0;
    let d: Vec<f64> = vals.iter().map(|v| v.0 - base).collect();
    let dm = d.iter().sum::<f64>() / n as f64;
    let variance = d.iter().map(|v| v * v).sum::<f64>() / n as f64 - dm * dm;
    let k = 3.0 / model.rho;
    let energy = vals.iter().map(|v| v.1).sum::<f64>() / n as f64;
    let per: Vec<f64> = vals.iter().zip(&d).map(|(v, x)| k * v.1 - (x - dm).powi(2)).collect();
    let sigma = mean_estimate(&per).std_error;
    let margin = k * energy - variance;
    Ok(PoincareReport {
        margin,
        sigma,
        variance,
        energy,
        passed: margin >= -3.0 * sigma,
        samples: n,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UltracontractivityFit {
    /// `ln p_t ≤ A − C ln t`.
    pub a: f64,
    pub c: f64,
    pub c_ci: (f64, f64),
    pub residual_rms: f64,
    pub short_time: ShortTimeFit,
}

/// Heisenberg on-diagonal density fit, sharing the short-time machinery.
pub fn ultracontractivity_probe(cfg: &ShortTimeConfig) -> Result<UltracontractivityFit> {
    if cfg.t_max / cfg.t_min < 2.0 {
        return Err(invalid("window", "t_max / t_min must be at least 2"));
    }
    let st = short_time_exponent(cfg)?;
    Ok(UltracontractivityFit {
        a: st.fit.intercept,
        c: -st.slope,
        c_ci: (-st.ci.1, -st.ci.0),
        residual_rms: st.fit.residual_rms,
        short_time: st,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::sub_laplacian;

    #[test]
    fn haar_moments() {
        let pts = haar_sample_su2(5, 20_000);
        for g in pts.iter().take(50) {
            assert!(g.constraint_defect() < 1e-14);
        }
        for slot in 0..8 {
            let v: Vec<f64> = pts.iter().map(|g| g.entries[slot]).collect();
            let m = mean_estimate(&v);
            assert!(m.mean.abs() < 3.0 * m.std_error + 1e-12);
        }
        for k in 0..4 {
            let v: Vec<f64> = pts
                .iter()
                .map(|g| g.entries[2 * k].powi(2) + g.entries[2 * k + 1].powi(2))
                .collect();
            let m = mean_estimate(&v);
            assert!((m.mean - 0.5).abs() < 3.0 * m.std_error, "{m:?}");
        }
        assert_eq!(haar_sample_su2(5, 3), haar_sample_su2(5, 3));
    }

    #[test]
    fn entries_are_eigenfunctions() {
        let model = GroupModel::su2();
        let f = ScalarField::coord(0);
        let lf = sub_laplacian(&f, &model).unwrap();
        for g in haar_sample_su2(1, 10) {
            assert!((lf.value(&g) + 0.5 * f.value(&g)).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_entry_decays_at_rate_one() {
        let model = GroupModel::su2();
        let cfg = SpectralConfig {
            paths: 20_000,
            seed: 3,
            ..Default::default()
        };
        let ts = [0.1, 0.3, 0.5, 0.7, 0.9];
        let e = variance_decay(&model, &ScalarField::coord(0), &ts, &cfg).unwrap();
        assert!(e.decay_rate > 2.0 / 3.0 - 0.1, "{e:?}");
        assert!((e.decay_rate - 1.0).abs() < 0.3, "{e:?}");
        let shifted = ScalarField::coord(0) + ScalarField::constant(5.0);
        let s = variance_decay(&model, &shifted, &ts, &cfg).unwrap();
        assert!((s.decay_rate - e.decay_rate).abs() < 1e-9);
    }

    #[test]
    fn constant_is_rejected() {
        let r = variance_decay(&GroupModel::su2(), &ScalarField::constant(2.0), &[0.1, 0.2], &SpectralConfig::default());
        assert!(matches!(r, Err(Error::FitRejected(_))));
    }

    #[test]
    fn poincare_constant_and_homogeneity() {
        let model = GroupModel::su2();
        let c = poincare_check(&model, &ScalarField::constant(3.0), 500, 1).unwrap();
        assert_eq!(c.margin, 0.0);
        let f = ScalarField::coord(0) * ScalarField::coord(3) + ScalarField::coord(5);
        let a = poincare_check(&model, &f, 4000, 2).unwrap();
        let b = poincare_check(&model, &f.scale(10.0), 4000, 2).unwrap();
        assert!(a.passed && a.margin > 0.0);
        assert!((b.margin - 100.0 * a.margin).abs() < 1e-9 * b.margin.abs());
    }

    #[test]
    fn wrong_model_rejected() {
        let r = poincare_check(&GroupModel::heisenberg(), &ScalarField::coord(1), 10, 0);
        assert!(matches!(r, Err(Error::ModelMismatch(..))));
    }
}
