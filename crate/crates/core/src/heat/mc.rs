//! Lie-group Monte Carlo for `∂ₜf = (X² + Y²)f`.
//!
//! One step is `g ← g·exp(√(2h)(ξ₁X + ξ₂Y))`. Expanding `exp` to second
//! order, `E f(g·exp(√(2h)V)) = f + h(X² + Y²)f + O(h²)` because `E ξᵢξⱼ = δᵢⱼ`,
//! so the chain has weak order one for the generator without a factor ½.

use std::io::Write;
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LogHeatDerivatives;
use crate::error::{invalid, Error, Result};
use crate::field::ScalarField;
use crate::group::{exp_matrix, AlgebraElement, GroupElement, GroupModel, ProductAccumulator, RENORM_INTERVAL};
use crate::stats::{linear_fit, log_space, mean_estimate, LinearFit, MeanEstimate};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionConfig {
    /// Time step `h`.
    pub step: f64,
    pub paths: usize,
    pub seed: u64,
    pub renorm_interval: usize,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        DiffusionConfig {
            step: 1e-2,
            paths: 10_000,
            seed: 0,
            renorm_interval: RENORM_INTERVAL,
        }
    }
}

impl DiffusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(invalid("step", format!("must be positive, got {}", self.step)));
        }
        if self.paths < 1000 {
            return Err(invalid("paths", format!("need at least 1000, got {}", self.paths)));
        }
        Ok(())
    }

    /// Number of steps and the step length actually used to reach `t`.
    pub fn steps_for(&self, t: f64) -> (usize, f64) {
        let n = ((t / self.step) - 1e-9).ceil().max(1.0) as usize;
        (n, t / n as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub paths_used: usize,
}

/// Independent per-path stream derived from the configuration seed.
pub fn path_rng(seed: u64, path: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path);
    rng
}

pub fn mc_step(model: &GroupModel, g: &GroupElement, h: f64, noise: (f64, f64)) -> Result<GroupElement> {
    let k = (2.0 * h).sqrt();
    g.multiply(&model.exp(AlgebraElement::new(k * noise.0, k * noise.1, 0.0)))
}

/// Runs paths `paths` with step `h`, recording the state after each count in
/// `record_steps` (ascending), and maps each path through `observe`. Output
/// order follows path ids whatever the thread count.
pub fn simulate<R, S, O>(
    model: &GroupModel,
    start: S,
    record_steps: &[usize],
    h: f64,
    cfg: &DiffusionConfig,
    paths: Range<u64>,
    observe: O,
) -> Vec<R>
where
    R: Send,
    S: Fn(u64) -> GroupElement + Sync,
    O: Fn(u64, &[GroupElement]) -> R + Sync,
{
    debug_assert!(record_steps.windows(2).all(|w| w[0] <= w[1]));
    let [bx, by, _] = model.basis();
    let k = (2.0 * h).sqrt();
    let kind = model.kind;
    paths
        .into_par_iter()
        .map(|p| {
            let mut rng = path_rng(cfg.seed, p);
            let mut acc = ProductAccumulator::new(&start(p), cfg.renorm_interval);
            let mut states = Vec::with_capacity(record_steps.len());
            let mut done = 0usize;
            for &target in record_steps {
                while done < target {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    let mut m = [0.0; 9];
                    for i in 0..9 {
                        m[i] = k * (a * bx[i] + b * by[i]);
                    }
                    acc.push(&exp_matrix(kind, &m));
                    done += 1;
                }
                states.push(acc.element());
            }
            observe(p, &states)
        })
        .collect()
}

fn check_values(values: &[f64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("test function produced {v} along a path")));
    }
    Ok(())
}

pub fn estimate_ptf(
    model: &GroupModel,
    x: &GroupElement,
    f: &ScalarField,
    t: f64,
    cfg: &DiffusionConfig,
) -> Result<HeatEstimate> {
    if t == 0.0 {
        return Ok(HeatEstimate {
            mean: f.value(x),
            std_error: 0.0,
            paths_used: 0,
        });
    }
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be non-negative, got {t}")));
    }
    cfg.validate()?;
    let (n, h) = cfg.steps_for(t);
    let values = simulate(model, |_| *x, &[n], h, cfg, 0..cfg.paths as u64, |_, s| f.value(&s[0]));
    check_values(&values)?;
    let m = mean_estimate(&values);
    Ok(HeatEstimate {
        mean: m.mean,
        std_error: m.std_error,
        paths_used: values.len(),
    })
}

/// `Var(a/mₐ − b/m_b)/N` for paired per-path samples.
fn ratio_difference_se(a: &[f64], ma: f64, b: &[f64], mb: f64) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(u, v)| u / ma - v / mb).collect();
    mean_estimate(&d).std_error
}

fn square_se(mu: f64, se: f64) -> f64 {
    (4.0 * mu * mu * se * se + 2.0 * se.powi(4)).sqrt()
}

/// Central differences of `ln P̂_tf` with common random numbers: all shifted
/// starts share the same noise product, and the time difference reuses the
/// prefix of each path.
pub fn estimate_log_derivatives(
    model: &GroupModel,
    x: &GroupElement,
    f: &ScalarField,
    t: f64,
    cfg: &DiffusionConfig,
    eps: f64,
) -> Result<LogHeatDerivatives> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("must be positive, got {t}")));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    cfg.validate()?;
    let (mut n, mut h) = cfg.steps_for(t);
    if n < 10 {
        n = 10;
        h = t / 10.0;
    }
    let m = (n / 10).max(1);
    let dt = m as f64 * h;
    let shifts: Vec<GroupElement> = [AlgebraElement::X, AlgebraElement::Y, AlgebraElement::Z]
        .iter()
        .flat_map(|a| [a.scale(eps), a.scale(-eps)])
        .map(|a| x.multiply(&model.exp(a)))
        .collect::<Result<_>>()?;
    let id = model.identity();
    let rows: Vec<[f64; 9]> = simulate(model, |_| id, &[n - m, n, n + m], h, cfg, 0..cfg.paths as u64, |_, s| {
        let mut row = [0.0; 9];
        let w = &s[1];
        for (j, start) in shifts.iter().enumerate() {
            row[j] = f.value(&start.multiply(w).expect("same model"));
        }
        row[6] = f.value(&x.multiply(w).expect("same model"));
        row[7] = f.value(&x.multiply(&s[0]).expect("same model"));
        row[8] = f.value(&x.multiply(&s[2]).expect("same model"));
        row
    });
    let cols: Vec<Vec<f64>> = (0..9).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    for c in &cols {
        check_values(c)?;
    }
    let means: Vec<f64> = cols.iter().map(|c| mean_estimate(c).mean).collect();
    if let Some(bad) = means.iter().find(|m| !(**m > 0.0)) {
        return Err(Error::NonPositiveEstimate(*bad));
    }
    let diff = |a: usize, b: usize, width: f64| -> (f64, f64) {
        let v = (means[a].ln() - means[b].ln()) / width;
        let se = ratio_difference_se(&cols[a], means[a], &cols[b], means[b]) / width;
        (v, se)
    };
    let (xu, xu_se) = diff(0, 1, 2.0 * eps);
    let (yu, yu_se) = diff(2, 3, 2.0 * eps);
    let (zu, zu_se) = diff(4, 5, 2.0 * eps);
    let (du_dt, du_dt_se) = diff(8, 7, 2.0 * dt);
    let gx = square_se(xu, xu_se);
    let gy = square_se(yu, yu_se);
    Ok(LogHeatDerivatives {
        t,
        rho: model.rho,
        u: means[6].ln(),
        xu,
        yu,
        zu,
        gamma_u: xu * xu + yu * yu,
        zu_sq: zu * zu,
        du_dt,
        gamma_u_se: (gx * gx + gy * gy).sqrt(),
        zu_sq_se: square_se(zu, zu_se),
        du_dt_se,
    })
}

/// Writes `path_id,step,<coordinates>` rows every `every` steps up to `t`.
pub fn write_trajectories<W: Write>(
    model: &GroupModel,
    start: &GroupElement,
    t: f64,
    cfg: &DiffusionConfig,
    n_paths: usize,
    every: usize,
    out: &mut W,
) -> Result<()> {
    let (n, h) = cfg.steps_for(t);
    let every = every.max(1);
    let steps: Vec<usize> = (0..=n).step_by(every).collect();
    let rows = simulate(model, |_| *start, &steps, h, cfg, 0..n_paths as u64, |_, s| s.to_vec());
    let io = |e: std::io::Error| Error::NonFinite(format!("write failed: {e}"));
    let names = model.kind.coord_names();
    writeln!(out, "path_id,step,{}", names.join(",")).map_err(io)?;
    for (p, states) in rows.iter().enumerate() {
        for (s, g) in steps.iter().zip(states) {
            let coords: Vec<String> = g.coords().iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(out, "{p},{s},{}", coords.join(",")).map_err(io)?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortTimeConfig {
    pub paths: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub n_times: usize,
    pub step: f64,
    pub seed: u64,
    /// Paths used to set the kernel bandwidths.
    pub pilot_paths: usize,
}

impl Default for ShortTimeConfig {
    fn default() -> Self {
        ShortTimeConfig {
            paths: 1_000_000,
            t_min: 0.05,
            t_max: 0.4,
            n_times: 8,
            step: 1e-3,
            seed: 0,
            pilot_paths: 20_000,
        }
    }
}

/// Fit of `ln p̂_t(e,e)` against `ln t` on the Heisenberg group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShortTimeFit {
    pub times: Vec<f64>,
    pub density: Vec<f64>,
    pub density_se: Vec<f64>,
    pub fit: LinearFit,
    pub slope: f64,
    /// Three-standard-error interval for the slope.
    pub ci: (f64, f64),
    /// Moments `E x̃²`, `E ỹ²`, `E z̃²` of `(x/√t, y/√t, z/t)` per time.
    pub scaled_moments: Vec<[MeanEstimate; 3]>,
}

const CHUNK: u64 = 4096;

pub fn short_time_exponent(cfg: &ShortTimeConfig) -> Result<ShortTimeFit> {
    if cfg.paths < 1000 || cfg.n_times < 2 || !(0.0 < cfg.t_min && cfg.t_min < cfg.t_max) {
        return Err(invalid("short_time", "need paths >= 1000, two times, 0 < t_min < t_max"));
    }
    let model = GroupModel::heisenberg();
    let dcfg = DiffusionConfig {
        step: cfg.step,
        paths: cfg.paths,
        seed: cfg.seed,
        renorm_interval: RENORM_INTERVAL,
    };
    dcfg.validate()?;
    let steps: Vec<usize> = log_space(cfg.t_min, cfg.t_max, cfg.n_times)
        .into_iter()
        .map(|t| ((t / cfg.step).round() as usize).max(1))
        .collect();
    let times: Vec<f64> = steps.iter().map(|&s| s as f64 * cfg.step).collect();
    let id = model.identity();
    let xyz = |g: &GroupElement| [g.entries[1], g.entries[5], g.entries[2]];
    let k = times.len();

    let pilot = cfg.pilot_paths.clamp(100, cfg.paths) as u64;
    let pilot_states = simulate(&model, |_| id, &steps, cfg.step, &dcfg, 0..pilot, |_, s| {
        s.iter().map(xyz).collect::<Vec<_>>()
    });
    // Scott's rule in three dimensions: σ·n^{-1/7}
    let shrink = (cfg.paths as f64).powf(-1.0 / 7.0);
    let bandwidths: Vec<[f64; 3]> = (0..k)
        .map(|ti| {
            let mut b = [0.0; 3];
            for (axis, bw) in b.iter_mut().enumerate() {
                let v: Vec<f64> = pilot_states.iter().map(|p| p[ti][axis]).collect();
                let m = mean_estimate(&v);
                *bw = m.std_error * (v.len() as f64).sqrt() * shrink;
            }
            b
        })
        .collect();

    // Per time: Σk, Σk², and Σ, Σ² of the three scaled squared coordinates.
    let width = 8usize;
    let n_chunks = (cfg.paths as u64).div_ceil(CHUNK);
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(cfg.paths as u64);
            let per_path = simulate(&model, |_| id, &steps, cfg.step, &dcfg, range, |_, s| {
                s.iter().map(xyz).collect::<Vec<_>>()
            });
            let mut acc = vec![0.0; k * width];
            for path in &per_path {
                for (ti, p) in path.iter().enumerate() {
                    let bw = &bandwidths[ti];
                    let mut kern = 1.0;
                    for a in 0..3 {
                        let u = p[a] / bw[a];
                        kern *= (-0.5 * u * u).exp() / (bw[a] * (2.0 * std::f64::consts::PI).sqrt());
                    }
                    let t = times[ti];
                    let sc = [p[0] * p[0] / t, p[1] * p[1] / t, p[2] * p[2] / (t * t)];
                    let row = &mut acc[ti * width..(ti + 1) * width];
                    row[0] += kern;
                    row[1] += kern * kern;
                    for a in 0..3 {
                        row[2 + 2 * a] += sc[a];
                        row[3 + 2 * a] += sc[a] * sc[a];
                    }
                }
            }
            acc
        })
        .collect();
    let mut tot = vec![0.0; k * width];
    for c in &chunks {
        for (a, b) in tot.iter_mut().zip(c) {
            *a += b;
        }
    }
    let nf = cfg.paths as f64;
    let summarize = |s: f64, s2: f64| {
        let mean = s / nf;
        let var = ((s2 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
        MeanEstimate {
            mean,
            std_error: (var / nf).sqrt(),
            n: cfg.paths,
        }
    };
    let mut density = Vec::with_capacity(k);
    let mut density_se = Vec::with_capacity(k);
    let mut scaled_moments = Vec::with_capacity(k);
    for ti in 0..k {
        let row = &tot[ti * width..(ti + 1) * width];
        let d = summarize(row[0], row[1]);
        density.push(d.mean);
        density_se.push(d.std_error);
        scaled_moments.push([
            summarize(row[2], row[3]),
            summarize(row[4], row[5]),
            summarize(row[6], row[7]),
        ]);
    }
    if let Some(bad) = density.iter().find(|d| !(**d > 0.0)) {
        return Err(Error::NonPositiveEstimate(*bad));
    }
    let lx: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = density.iter().map(|d| d.ln()).collect();
    let w: Vec<f64> = density.iter().zip(&density_se).map(|(d, s)| (d / s).powi(2)).collect();
    let fit = linear_fit(&lx, &ly, Some(&w))?;
    let ci = fit.slope_interval(3.0);
    if ci.1 - ci.0 > 1.0 {
        return Err(Error::FitRejected(format!(
            "slope interval [{:.3}, {:.3}] too wide; increase paths",
            ci.0, ci.1
        )));
    }
    Ok(ShortTimeFit {
        times,
        density,
        density_se,
        slope: fit.slope,
        fit,
        ci,
        scaled_moments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(paths: usize, seed: u64) -> DiffusionConfig {
        DiffusionConfig {
            paths,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn zero_noise_is_identity_step() {
        for m in crate::group::ModelKind::ALL.map(GroupModel::new) {
            let g = m.random_element(3);
            assert_eq!(mc_step(&m, &g, 0.01, (0.0, 0.0)).unwrap(), g);
        }
    }

    #[test]
    fn constant_is_conserved_exactly() {
        for m in crate::group::ModelKind::ALL.map(GroupModel::new) {
            let e = estimate_ptf(&m, &m.identity(), &ScalarField::constant(1.0), 0.3, &cfg(2000, 1)).unwrap();
            assert_eq!(e.mean, 1.0);
            assert_eq!(e.std_error, 0.0);
        }
    }

    #[test]
    fn time_zero_is_exact() {
        let m = GroupModel::su2();
        let f = crate::field::test_function_suite(&m, 2, 1).remove(0);
        let g = m.random_element(9);
        assert_eq!(estimate_ptf(&m, &g, &f, 0.0, &cfg(2000, 0)).unwrap().mean, f.value(&g));
    }

    #[test]
    fn radial_moment_and_z_mean() {
        let m = GroupModel::heisenberg();
        let x = ScalarField::heisenberg_x();
        let y = ScalarField::heisenberg_y();
        let r2 = &x * &x + &y * &y;
        let e = estimate_ptf(&m, &m.identity(), &r2, 0.5, &cfg(20_000, 4)).unwrap();
        assert!((e.mean - 2.0).abs() <= 3.0 * e.std_error, "{e:?}");
        let z = estimate_ptf(&m, &m.identity(), &ScalarField::heisenberg_z(), 0.5, &cfg(20_000, 4)).unwrap();
        assert!(z.mean.abs() <= 3.0 * z.std_error);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let m = GroupModel::sl2();
        let f = crate::field::test_function_suite(&m, 5, 1).remove(0);
        let a = estimate_ptf(&m, &m.identity(), &f, 0.2, &cfg(3000, 8)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| estimate_ptf(&m, &m.identity(), &f, 0.2, &cfg(3000, 8)).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn log_derivatives_of_exponential() {
        let m = GroupModel::heisenberg();
        let f = ScalarField::heisenberg_x().exp();
        let d = estimate_log_derivatives(&m, &m.identity(), &f, 0.1, &cfg(5000, 2), 1e-2).unwrap();
        assert!((d.xu - 1.0).abs() < 1e-9, "{d:?}");
        assert!(d.yu.abs() < 1e-9 && d.zu.abs() < 1e-9);
        // P_t e^x = e^{x + t}
        assert!((d.du_dt - 1.0).abs() <= 4.0 * d.du_dt_se + 0.05, "{d:?}");
        let one = estimate_log_derivatives(&m, &m.identity(), &ScalarField::constant(1.0), 0.1, &cfg(1000, 2), 1e-2)
            .unwrap();
        assert_eq!((one.gamma_u, one.zu_sq, one.du_dt), (0.0, 0.0, 0.0));
    }

    #[test]
    fn richardson_shift_is_second_order() {
        let m = GroupModel::su2();
        let f = crate::field::test_function_suite(&m, 7, 4).remove(3);
        let g = m.random_element(1);
        let c = cfg(2000, 5);
        let d1 = estimate_log_derivatives(&m, &g, &f, 0.2, &c, 4e-2).unwrap();
        let d2 = estimate_log_derivatives(&m, &g, &f, 0.2, &c, 2e-2).unwrap();
        let d3 = estimate_log_derivatives(&m, &g, &f, 0.2, &c, 1e-2).unwrap();
        let s1 = (d1.xu - d2.xu).abs();
        let s2 = (d2.xu - d3.xu).abs();
        assert!(s2 <= 0.3 * s1 + 1e-12, "{s1} {s2}");
    }

    #[test]
    fn trajectories_have_header_and_rows() {
        let m = GroupModel::heisenberg();
        let mut buf = Vec::new();
        write_trajectories(&m, &m.identity(), 0.1, &cfg(1000, 0), 2, 5, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("path_id,step,m11,x,z"));
        assert_eq!(lines.len(), 1 + 2 * 3);
    }
}
