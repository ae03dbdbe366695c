//! Carnot–Carathéodory distance by direct transcription.
//!
//! A path from `x` is `x·Π_k exp((u₁ₖX + u₂ₖY)/K)` with `K` piecewise
//! constant controls on `[0, 1]`. Every such path is horizontal, so its
//! length `(1/K)Σ|uₖ|` bounds `d(x, y)` from above once the endpoint matches.
//! The energy `(1/K)Σ|uₖ|²` plus a quadratic endpoint penalty is minimized by
//! Levenberg–Marquardt under penalty continuation from several starts, and
//! the best run is polished onto the endpoint by minimum-norm Gauss–Newton.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{
    exp_derivative, exp_matrix, identity_entries, inverse_entries, mat_mul, project_to_algebra, Entries,
    GroupElement, GroupModel, ModelKind,
};
use crate::heat::path_rng;
use crate::spectral::haar_sample_su2;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Number of piecewise constant controls.
    pub controls: usize,
    pub starts: usize,
    pub penalty_start: f64,
    pub penalty_stages: usize,
    pub lm_iterations: usize,
    pub polish_iterations: usize,
    /// Largest admissible entrywise endpoint error.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for PathConfig {
    fn default() -> Self {
        PathConfig {
            controls: 32,
            starts: 8,
            penalty_start: 10.0,
            penalty_stages: 4,
            lm_iterations: 60,
            polish_iterations: 30,
            tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl PathConfig {
    fn validate(&self) -> Result<()> {
        if self.controls == 0 || self.starts == 0 || self.penalty_stages == 0 {
            return Err(invalid("path", "controls, starts and penalty stages must be positive"));
        }
        if !(self.penalty_start > 0.0 && self.tolerance > 0.0) {
            return Err(invalid("path", "penalty and tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizontalPath {
    pub start: GroupElement,
    pub controls: Vec<[f64; 2]>,
    pub endpoint: GroupElement,
    pub length: f64,
    /// Largest entrywise difference between the endpoint and the target.
    pub residual: f64,
}

impl HorizontalPath {
    /// Points at times `k/K`, `k = 0..=K`.
    pub fn points(&self, model: &GroupModel) -> Vec<GroupElement> {
        let k = self.controls.len() as f64;
        let mut g = self.start.entries;
        let mut out = vec![self.start];
        for u in &self.controls {
            let m = factor_matrix(model, u[0] / k, u[1] / k);
            g = mat_mul(model.kind, &g, &exp_matrix(model.kind, &m));
            out.push(GroupElement::from_entries(model.kind, g));
        }
        out
    }

    /// `time,u1,u2,<entries>`; the controls on row `k` act on `[k/K, (k+1)/K)`
    /// and the last row repeats the final control.
    pub fn write_csv<W: Write>(&self, model: &GroupModel, mut out: W) -> std::io::Result<()> {
        let names = model.kind.coord_names();
        writeln!(out, "time,u1,u2,{}", names.join(","))?;
        let pts = self.points(model);
        let k = self.controls.len();
        for (i, p) in pts.iter().enumerate() {
            let u = self.controls[i.min(k - 1)];
            let coords: Vec<String> = p.coords().iter().map(|v| v.to_string()).collect();
            writeln!(out, "{},{},{},{}", i as f64 / k as f64, u[0], u[1], coords.join(","))?;
        }
        Ok(())
    }
}

fn factor_matrix(model: &GroupModel, a: f64, b: f64) -> Entries<f64> {
    let [bx, by, _] = model.basis();
    std::array::from_fn(|i| a * bx[i] + b * by[i])
}

/// Slots of `T⁻¹P − I` that make up the residual.
fn residual_slots(kind: ModelKind) -> &'static [usize] {
    match kind {
        ModelKind::Heisenberg => &[1, 5, 2],
        ModelKind::Su2 => &[0, 1, 2, 3, 4, 5, 6, 7],
        ModelKind::Sl2 => &[0, 1, 2, 3],
    }
}

struct Problem<'a> {
    model: &'a GroupModel,
    /// `T⁻¹x`.
    q0: Entries<f64>,
    k: usize,
}

impl Problem<'_> {
    fn residual(&self, u: &[f64]) -> DVector<f64> {
        let kind = self.model.kind;
        let kf = self.k as f64;
        let mut q = self.q0;
        for c in u.chunks(2) {
            q = mat_mul(kind, &q, &exp_matrix(kind, &factor_matrix(self.model, c[0] / kf, c[1] / kf)));
        }
        let id = identity_entries::<f64>(kind);
        let slots = residual_slots(kind);
        DVector::from_iterator(slots.len(), slots.iter().map(|&i| q[i] - id[i]))
    }

    /// Residual and its Jacobian with respect to the controls.
    fn jacobian(&self, u: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let kind = self.model.kind;
        let kf = self.k as f64;
        let ms: Vec<Entries<f64>> = u.chunks(2).map(|c| factor_matrix(self.model, c[0] / kf, c[1] / kf)).collect();
        let es: Vec<Entries<f64>> = ms.iter().map(|m| exp_matrix(kind, m)).collect();
        let mut prefix = Vec::with_capacity(self.k + 1);
        prefix.push(self.q0);
        for e in &es {
            let last = prefix.last().expect("non-empty");
            prefix.push(mat_mul(kind, last, e));
        }
        let mut suffix = vec![identity_entries::<f64>(kind); self.k + 1];
        for i in (0..self.k).rev() {
            suffix[i] = mat_mul(kind, &es[i], &suffix[i + 1]);
        }
        let slots = residual_slots(kind);
        let id = identity_entries::<f64>(kind);
        let q = prefix[self.k];
        let r = DVector::from_iterator(slots.len(), slots.iter().map(|&i| q[i] - id[i]));
        let mut jac = DMatrix::zeros(slots.len(), 2 * self.k);
        let [bx, by, _] = self.model.basis();
        for i in 0..self.k {
            for (j, b) in [bx, by].iter().enumerate() {
                let h: Entries<f64> = b.map(|v| v / kf);
                let d = exp_derivative(kind, &ms[i], &h);
                let dq = mat_mul(kind, &mat_mul(kind, &prefix[i], &d), &suffix[i + 1]);
                for (row, &s) in slots.iter().enumerate() {
                    jac[(row, 2 * i + j)] = dq[s];
                }
            }
        }
        (r, jac)
    }

    fn objective(&self, u: &[f64], mu: f64) -> f64 {
        let e: f64 = u.iter().map(|v| v * v).sum::<f64>() / self.k as f64;
        0.5 * (e + mu * self.residual(u).norm_squared())
    }

    /// Levenberg–Marquardt on `½(|u|²/K + μ|r|²)`. The damped normal matrix
    /// `aI + μJᵀJ` is inverted through the Woodbury identity.
    fn minimize(&self, mut u: Vec<f64>, mu: f64, iterations: usize) -> Vec<f64> {
        let kf = self.k as f64;
        let mut damping = 1e-3;
        let mut f = self.objective(&u, mu);
        for _ in 0..iterations {
            let (r, jac) = self.jacobian(&u);
            let uv = DVector::from_column_slice(&u);
            let g = &uv / kf + jac.transpose() * &r * mu;
            let mut accepted = false;
            for _ in 0..30 {
                let a = 1.0 / kf + damping;
                let small = DMatrix::identity(r.len(), r.len()) * (a / mu) + &jac * jac.transpose();
                let Some(chol) = small.cholesky() else {
                    damping *= 4.0;
                    continue;
                };
                let jg = &jac * &g;
                let step = -(&g - jac.transpose() * chol.solve(&jg)) / a;
                let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
                let ft = self.objective(&trial, mu);
                if ft < f {
                    let small_step = step.norm() <= 1e-13 * (1.0 + uv.norm());
                    u = trial;
                    f = ft;
                    damping = (damping / 3.0).max(1e-12);
                    accepted = true;
                    if small_step {
                        return u;
                    }
                    break;
                }
                damping *= 4.0;
            }
            if !accepted {
                break;
            }
        }
        u
    }

    /// Minimum-norm Gauss–Newton on `r(u) = 0`.
    fn polish(&self, mut u: Vec<f64>, iterations: usize, tol: f64) -> Vec<f64> {
        for _ in 0..iterations {
            let (r, jac) = self.jacobian(&u);
            if r.amax() <= 0.1 * tol {
                break;
            }
            let svd = jac.clone().svd(true, true);
            let Ok(pinv) = svd.pseudo_inverse(1e-12) else { break };
            let step = -(pinv * &r);
            let trial: Vec<f64> = u.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            if self.residual(&trial).amax() >= r.amax() {
                break;
            }
            u = trial;
        }
        u
    }
}

fn path_length(u: &[f64]) -> f64 {
    u.chunks(2).map(|c| c[0].hypot(c[1])).sum::<f64>() / (u.len() / 2) as f64
}

/// Upper bound for `d(x, y)` with the path realizing it.
pub fn cc_distance(
    x: &GroupElement,
    y: &GroupElement,
    model: &GroupModel,
    cfg: &PathConfig,
) -> Result<(f64, HorizontalPath)> {
    cfg.validate()?;
    if x.kind != model.kind || y.kind != model.kind {
        return Err(Error::ModelMismatch(x.kind, model.kind));
    }
    let kind = model.kind;
    let t_inv = inverse_entries(kind, &y.entries);
    let problem = Problem {
        model,
        q0: mat_mul(kind, &t_inv, &x.entries),
        k: cfg.controls,
    };
    let offset: Entries<f64> = std::array::from_fn(|i| y.entries[i] - x.entries[i]);
    let x_inv = inverse_entries(kind, &x.entries);
    let chord = project_to_algebra(kind, &mat_mul(kind, &x_inv, &offset));
    let scale = chord.norm() + 1.0;
    let runs: Vec<(f64, f64, Vec<f64>)> = (0..cfg.starts as u64)
        .into_par_iter()
        .map(|s| {
            let mut u = if s == 0 {
                (0..cfg.controls).flat_map(|_| [chord.x, chord.y]).collect::<Vec<_>>()
            } else {
                let mut rng = path_rng(cfg.seed, s);
                (0..2 * cfg.controls)
                    .map(|_| { let z: f64 = StandardNormal.sample(&mut rng); scale * z })
                    .collect()
            };
            let mut mu = cfg.penalty_start;
            for _ in 0..cfg.penalty_stages {
                u = problem.minimize(u, mu, cfg.lm_iterations);
                mu *= 10.0;
            }
            u = problem.polish(u, cfg.polish_iterations, cfg.tolerance);
            let res = problem.residual(&u).amax();
            (res, path_length(&u), u)
        })
        .collect();
    let best = runs
        .iter()
        .filter(|r| r.0 <= cfg.tolerance)
        .min_by(|a, b| a.1.total_cmp(&b.1));
    let Some((res, length, u)) = best else {
        let res = runs.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        return Err(Error::NotConverged(res));
    };
    let controls: Vec<[f64; 2]> = u.chunks(2).map(|c| [c[0], c[1]]).collect();
    let mut path = HorizontalPath {
        start: *x,
        controls,
        endpoint: *x,
        length: *length,
        residual: *res,
    };
    path.endpoint = *path.points(model).last().expect("non-empty");
    path.residual = path.endpoint.distance_max(y);
    Ok((*length, path))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterReport {
    pub max: f64,
    pub mean: f64,
    pub min: f64,
    pub distances: Vec<f64>,
    pub max_residual: f64,
    pub controls: usize,
}

/// Distances between `n_pairs` Haar-distributed pairs on SU(2). Every pair
/// must converge.
pub fn diameter_probe(model: &GroupModel, n_pairs: usize, cfg: &PathConfig, seed: u64) -> Result<DiameterReport> {
    if model.kind != ModelKind::Su2 {
        return Err(Error::ModelMismatch(model.kind, ModelKind::Su2));
    }
    if n_pairs == 0 {
        return Err(invalid("n_pairs", "must be positive"));
    }
    let pts = haar_sample_su2(seed, 2 * n_pairs);
    let results: Vec<Result<(f64, f64)>> = (0..n_pairs)
        .into_par_iter()
        .map(|i| {
            let pcfg = PathConfig {
                seed: cfg.seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
                ..*cfg
            };
            cc_distance(&pts[2 * i], &pts[2 * i + 1], model, &pcfg).map(|(d, p)| (d, p.residual))
        })
        .collect();
    let mut distances = Vec::with_capacity(n_pairs);
    let mut max_residual: f64 = 0.0;
    for r in results {
        let (d, res) = r?;
        distances.push(d);
        max_residual = max_residual.max(res);
    }
    let max = distances.iter().copied().fold(0.0, f64::max);
    let min = distances.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = distances.iter().sum::<f64>() / n_pairs as f64;
    Ok(DiameterReport {
        max,
        mean,
        min,
        distances,
        max_residual,
        controls: cfg.controls,
    })
}
