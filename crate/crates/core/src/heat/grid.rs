//! Explicit finite differences for `∂ₜf = (∂ₓ² + (∂_y + x∂_z)²) f`.
//!
//! The lattice uses `Δz = ΔxΔy`, so the flow of `Y = ∂_y + x∂_z` through a
//! node `(i, j, k)` passes exactly through `(i, j±1, k±i)`. Both second
//! differences are then plain three-point stencils along straight lines and
//! the update `f + Δt·L_h f` has non-negative weights whenever
//! `Δt ≤ 1/(2/Δx² + 2/Δy²)`.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LogHeatDerivatives;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Missing neighbours take the centre value; total mass is conserved.
    Neumann,
    /// Missing neighbours are zero.
    Dirichlet,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub dx: f64,
    pub dy: f64,
    pub half_x: f64,
    pub half_y: f64,
    pub half_z: f64,
    /// Time step; defaults to half the stability bound.
    pub dt: Option<f64>,
    pub boundary: Boundary,
    /// Largest admissible fraction of the mass on the outermost layer.
    pub flux_threshold: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            dx: 0.2,
            dy: 0.2,
            half_x: 6.0,
            half_y: 6.0,
            half_z: 8.0,
            dt: None,
            boundary: Boundary::Neumann,
            flux_threshold: 1e-2,
        }
    }
}

impl GridConfig {
    /// The same box at twice the spacing in `x` and `y`.
    pub fn coarsened(&self) -> GridConfig {
        GridConfig {
            dx: 2.0 * self.dx,
            dy: 2.0 * self.dy,
            dt: self.dt.map(|d| 4.0 * d),
            ..*self
        }
    }

    pub fn stability_bound(&self) -> f64 {
        1.0 / (2.0 / (self.dx * self.dx) + 2.0 / (self.dy * self.dy))
    }

    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or(0.5 * self.stability_bound())
    }

    pub fn shape(&self) -> Result<GridShape> {
        if !(self.dx > 0.0 && self.dy > 0.0 && self.half_x > 0.0 && self.half_y > 0.0 && self.half_z > 0.0) {
            return Err(invalid("grid", "spacings and half widths must be positive"));
        }
        let dz = self.dx * self.dy;
        let n = |half: f64, d: f64| (half / d).round().max(2.0) as i64;
        Ok(GridShape {
            nx: n(self.half_x, self.dx),
            ny: n(self.half_y, self.dy),
            nz: n(self.half_z, dz),
            dx: self.dx,
            dy: self.dy,
            dz,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.shape()?;
        let bound = self.stability_bound();
        let dt = self.time_step();
        if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
            return Err(Error::StabilityViolated { dt, bound });
        }
        Ok(())
    }
}

/// Node `(i, j, k)` with `|i| ≤ nx` etc. sits at `(iΔx, jΔy, kΔz)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub nx: i64,
    pub ny: i64,
    pub nz: i64,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl GridShape {
    pub fn dims(&self) -> [usize; 3] {
        [(2 * self.nx + 1) as usize, (2 * self.ny + 1) as usize, (2 * self.nz + 1) as usize]
    }

    pub fn len(&self) -> usize {
        let [a, b, c] = self.dims();
        a * b * c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, i: i64, j: i64, k: i64) -> bool {
        i.abs() <= self.nx && j.abs() <= self.ny && k.abs() <= self.nz
    }

    #[inline]
    pub fn index(&self, i: i64, j: i64, k: i64) -> usize {
        let [_, b, c] = self.dims();
        ((i + self.nx) as usize * b + (j + self.ny) as usize) * c + (k + self.nz) as usize
    }

    pub fn position(&self, i: i64, j: i64, k: i64) -> [f64; 3] {
        [i as f64 * self.dx, j as f64 * self.dy, k as f64 * self.dz]
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    fn nodes(&self) -> impl Iterator<Item = (i64, i64, i64)> + '_ {
        (-self.nx..=self.nx)
            .flat_map(move |i| (-self.ny..=self.ny).flat_map(move |j| (-self.nz..=self.nz).map(move |k| (i, j, k))))
    }

    /// Whether every stencil of reach `r` (in units of the spacing) around
    /// `(i, j, k)` stays inside the box.
    pub fn has_margin(&self, i: i64, j: i64, k: i64, r: i64) -> bool {
        i.abs() + r <= self.nx && j.abs() + r <= self.ny && k.abs() + r * (i.abs() + r) + r <= self.nz
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub shape: GridShape,
    pub t: f64,
    pub data: Vec<f64>,
}

impl GridFunction {
    pub fn from_fn<F: Fn(f64, f64, f64) -> f64>(cfg: &GridConfig, f: F) -> Result<Self> {
        let shape = cfg.shape()?;
        let data = shape
            .nodes()
            .map(|(i, j, k)| {
                let [x, y, z] = shape.position(i, j, k);
                f(x, y, z)
            })
            .collect();
        Ok(GridFunction { shape, t: 0.0, data })
    }

    /// `exp(−(x² + y²)/(2σ²) − z²/(2σ_z²))`.
    pub fn gaussian_bump(cfg: &GridConfig, sigma: f64, sigma_z: f64) -> Result<Self> {
        Self::from_fn(cfg, |x, y, z| {
            (-(x * x + y * y) / (2.0 * sigma * sigma) - z * z / (2.0 * sigma_z * sigma_z)).exp()
        })
    }

    #[inline]
    pub fn get(&self, i: i64, j: i64, k: i64) -> Option<f64> {
        self.shape.contains(i, j, k).then(|| self.data[self.shape.index(i, j, k)])
    }

    pub fn at(&self, i: i64, j: i64, k: i64) -> f64 {
        self.data[self.shape.index(i, j, k)]
    }

    pub fn mass(&self) -> f64 {
        self.data.iter().sum::<f64>() * self.shape.cell_volume()
    }

    /// `∫(x² + y²) f`.
    pub fn radial_moment(&self) -> f64 {
        self.shape
            .nodes()
            .map(|(i, j, k)| {
                let [x, y, _] = self.shape.position(i, j, k);
                (x * x + y * y) * self.at(i, j, k)
            })
            .sum::<f64>()
            * self.shape.cell_volume()
    }

    /// Share of the total on the outermost layer of nodes.
    pub fn boundary_fraction(&self) -> f64 {
        let s = &self.shape;
        let total: f64 = self.data.iter().map(|v| v.abs()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let edge: f64 = s
            .nodes()
            .filter(|(i, j, k)| i.abs() == s.nx || j.abs() == s.ny || k.abs() == s.nz)
            .map(|(i, j, k)| self.at(i, j, k).abs())
            .sum();
        edge / total
    }

    fn map_nodes<F: Fn(i64, i64, i64) -> f64>(&self, f: F) -> GridFunction {
        GridFunction {
            shape: self.shape,
            t: self.t,
            data: self.shape.nodes().map(|(i, j, k)| f(i, j, k)).collect(),
        }
    }
}

/// `L_h f` with the chosen boundary rule.
pub fn apply_sub_laplacian(f: &GridFunction, boundary: Boundary, out: &mut Vec<f64>) {
    let s = f.shape;
    let [_, b, c] = s.dims();
    let (sx, sy) = ((b * c) as isize, c as isize);
    let (ax, ay) = (1.0 / (s.dx * s.dx), 1.0 / (s.dy * s.dy));
    out.clear();
    out.resize(f.data.len(), 0.0);
    let d = &f.data;
    for i in -s.nx..=s.nx {
        for j in -s.ny..=s.ny {
            let base = s.index(i, j, -s.nz) as isize;
            for k in -s.nz..=s.nz {
                let p = base + (k + s.nz) as isize;
                let centre = d[p as usize];
                let ghost = match boundary {
                    Boundary::Neumann => centre,
                    Boundary::Dirichlet => 0.0,
                };
                let xp = if i < s.nx { d[(p + sx) as usize] } else { ghost };
                let xm = if i > -s.nx { d[(p - sx) as usize] } else { ghost };
                let yp = if j < s.ny && (k + i).abs() <= s.nz {
                    d[(p + sy + i as isize) as usize]
                } else {
                    ghost
                };
                let ym = if j > -s.ny && (k - i).abs() <= s.nz {
                    d[(p - sy - i as isize) as usize]
                } else {
                    ghost
                };
                out[p as usize] = ax * (xp - 2.0 * centre + xm) + ay * (yp - 2.0 * centre + ym);
            }
        }
    }
}

/// Advances `f` to time `f.t + duration` with steps of `cfg.time_step()`
/// and a shorter final step. No positivity or flux checks.
pub fn evolve(f: &mut GridFunction, duration: f64, cfg: &GridConfig) -> Result<()> {
    cfg.validate()?;
    if !(duration >= 0.0) {
        return Err(invalid("t", format!("must be non-negative, got {duration}")));
    }
    let dt = cfg.time_step();
    let n_full = (duration / dt * (1.0 + 1e-12)).floor() as usize;
    let rest = duration - n_full as f64 * dt;
    let mut lap = Vec::new();
    let mut step = |f: &mut GridFunction, h: f64| {
        apply_sub_laplacian(f, cfg.boundary, &mut lap);
        for (v, l) in f.data.iter_mut().zip(&lap) {
            *v += h * l;
        }
    };
    for _ in 0..n_full {
        step(f, dt);
    }
    if rest > 1e-14 * dt.max(duration) {
        step(f, rest);
    }
    f.t += duration;
    Ok(())
}

/// Evolves a non-negative initial datum by `t`, checking the boundary layer.
pub fn heisenberg_grid_solve(f0: &GridFunction, t: f64, cfg: &GridConfig) -> Result<GridFunction> {
    if f0.shape != cfg.shape()? {
        return Err(invalid("f0", "grid shape differs from the configuration"));
    }
    if f0.data.iter().any(|v| !(*v >= 0.0)) || f0.data.iter().all(|v| *v == 0.0) {
        return Err(invalid("f0", "must be non-negative and not identically zero"));
    }
    let mut f = f0.clone();
    evolve(&mut f, t, cfg)?;
    let flux = f.boundary_fraction();
    if flux > cfg.flux_threshold {
        return Err(Error::BoundaryFlux {
            flux,
            threshold: cfg.flux_threshold,
        });
    }
    if f.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("grid solution".into()));
    }
    Ok(f)
}

/// Difference quotients at reach `m` (in lattice units).
struct Stencil<'a> {
    g: &'a GridFunction,
    m: i64,
    /// Difference `ln g` instead of `g`.
    log: bool,
}

impl Stencil<'_> {
    #[inline]
    fn v(&self, i: i64, j: i64, k: i64) -> f64 {
        let v = self.g.at(i, j, k);
        if self.log {
            v.ln()
        } else {
            v
        }
    }

    fn x(&self, i: i64, j: i64, k: i64) -> f64 {
        let m = self.m;
        (self.v(i + m, j, k) - self.v(i - m, j, k)) / (2.0 * m as f64 * self.g.shape.dx)
    }

    fn y(&self, i: i64, j: i64, k: i64) -> f64 {
        let m = self.m;
        (self.v(i, j + m, k + m * i) - self.v(i, j - m, k - m * i)) / (2.0 * m as f64 * self.g.shape.dy)
    }

    fn z(&self, i: i64, j: i64, k: i64) -> f64 {
        let m = self.m;
        (self.v(i, j, k + m) - self.v(i, j, k - m)) / (2.0 * m as f64 * self.g.shape.dz)
    }

    fn lap(&self, i: i64, j: i64, k: i64) -> f64 {
        let m = self.m;
        let c = self.v(i, j, k);
        let hx = m as f64 * self.g.shape.dx;
        let hy = m as f64 * self.g.shape.dy;
        (self.v(i + m, j, k) - 2.0 * c + self.v(i - m, j, k)) / (hx * hx)
            + (self.v(i, j + m, k + m * i) - 2.0 * c + self.v(i, j - m, k - m * i)) / (hy * hy)
    }
}

/// Derivative terms of `u = ln p` at a node, with the difference between the
/// reach-1 and reach-2 stencils as the error budget of each term.
pub fn grid_log_derivatives(p: &GridFunction, node: (i64, i64, i64), rho: f64) -> Result<LogHeatDerivatives> {
    let (i, j, k) = node;
    if !p.shape.has_margin(i, j, k, 2) {
        return Err(invalid("node", format!("({i}, {j}, {k}) too close to the boundary")));
    }
    for (a, b, c) in [(0, 0, 0), (2, 0, 0), (-2, 0, 0), (0, 2, 2 * i), (0, -2, -2 * i), (0, 0, 2), (0, 0, -2)] {
        let v = p.at(i + a, j + b, k + c);
        if !(v > 0.0) {
            return Err(Error::NonPositiveEstimate(v));
        }
    }
    let terms = |m: i64| {
        let su = Stencil { g: p, m, log: true };
        let sp = Stencil { g: p, m, log: false };
        let (xu, yu, zu) = (su.x(i, j, k), su.y(i, j, k), su.z(i, j, k));
        (xu, yu, zu, xu * xu + yu * yu, zu * zu, sp.lap(i, j, k) / p.at(i, j, k))
    };
    let a = terms(1);
    let b = terms(2);
    Ok(LogHeatDerivatives {
        t: p.t,
        rho,
        u: p.at(i, j, k).ln(),
        xu: a.0,
        yu: a.1,
        zu: a.2,
        gamma_u: a.3,
        zu_sq: a.4,
        du_dt: a.5,
        gamma_u_se: (a.3 - b.3).abs(),
        zu_sq_se: (a.4 - b.4).abs(),
        du_dt_se: (a.5 - b.5).abs(),
    })
}

/// `n` distinct nodes with `|x| ≤ rx`, `|y| ≤ ry`, `|z| ≤ rz`, drawn
/// deterministically and kept away from the boundary.
pub fn sample_interior_nodes(shape: &GridShape, n: usize, extent: [f64; 3], seed: u64) -> Vec<(i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lim = |r: f64, d: f64, n: i64| ((r / d).floor() as i64).min(n);
    let (li, lj, lk) = (
        lim(extent[0], shape.dx, shape.nx),
        lim(extent[1], shape.dy, shape.ny),
        lim(extent[2], shape.dz, shape.nz),
    );
    let mut out: Vec<(i64, i64, i64)> = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n && tries < 100 * n {
        tries += 1;
        let node = (rng.random_range(-li..=li), rng.random_range(-lj..=lj), rng.random_range(-lk..=lk));
        if shape.has_margin(node.0, node.1, node.2, 4) && !out.contains(&node) {
            out.push(node);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub s: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub dphi1_difference: f64,
    pub dphi1_formula: f64,
    pub dphi2_difference: f64,
    pub dphi2_formula: f64,
    pub gap1: f64,
    pub gap2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiReport {
    pub t: f64,
    pub entries: Vec<PhiEntry>,
    pub max_relative_gap: f64,
}

/// Fields built from `p = P_{t−s}f`, zero where the stencils leave the box.
struct PhiFields {
    g1: GridFunction,
    g2: GridFunction,
    r1: GridFunction,
    r2: GridFunction,
}

fn phi_fields(p: &GridFunction) -> PhiFields {
    let sh = p.shape;
    let u = p.map_nodes(|i, j, k| p.at(i, j, k).ln());
    let s1 = Stencil { g: &u, m: 1, log: false };
    let ok1 = |i, j, k| sh.has_margin(i, j, k, 1);
    let ok2 = |i, j, k| sh.has_margin(i, j, k, 2);
    let xu = u.map_nodes(|i, j, k| if ok1(i, j, k) { s1.x(i, j, k) } else { 0.0 });
    let yu = u.map_nodes(|i, j, k| if ok1(i, j, k) { s1.y(i, j, k) } else { 0.0 });
    let zu = u.map_nodes(|i, j, k| if ok1(i, j, k) { s1.z(i, j, k) } else { 0.0 });
    let lu = u.map_nodes(|i, j, k| if ok1(i, j, k) { s1.lap(i, j, k) } else { 0.0 });
    let gam = u.map_nodes(|i, j, k| xu.at(i, j, k).powi(2) + yu.at(i, j, k).powi(2));
    let st = |g| Stencil { g, m: 1, log: false };
    let (sg, sl, sz) = (st(&gam), st(&lu), st(&zu));
    let g1 = u.map_nodes(|i, j, k| p.at(i, j, k) * gam.at(i, j, k));
    let g2 = u.map_nodes(|i, j, k| p.at(i, j, k) * zu.at(i, j, k).powi(2));
    let r1 = u.map_nodes(|i, j, k| {
        if !ok2(i, j, k) {
            return 0.0;
        }
        let g2 = 0.5 * sg.lap(i, j, k) - (xu.at(i, j, k) * sl.x(i, j, k) + yu.at(i, j, k) * sl.y(i, j, k));
        2.0 * p.at(i, j, k) * g2
    });
    let r2 = u.map_nodes(|i, j, k| {
        if !ok2(i, j, k) {
            return 0.0;
        }
        2.0 * p.at(i, j, k) * (sz.x(i, j, k).powi(2) + sz.y(i, j, k).powi(2))
    });
    PhiFields { g1, g2, r1, r2 }
}

/// Compares finite differences in `s` of
/// `Φ₁(s) = P_s(P_{t−s}f · Γ(ln P_{t−s}f))` and
/// `Φ₂(s) = P_s(P_{t−s}f · (Z ln P_{t−s}f)²)` at the origin with
/// `2P_s(P_{t−s}f · Γ₂(ln P_{t−s}f))` and `2P_s(P_{t−s}f · Γ(Z ln P_{t−s}f))`.
pub fn check_phi_derivatives(
    f0: &GridFunction,
    t: f64,
    s_grid: &[f64],
    ds: f64,
    cfg: &GridConfig,
) -> Result<PhiReport> {
    if s_grid.iter().any(|&s| !(s - ds > 0.0 && s + ds < t)) {
        return Err(invalid("s_grid", format!("each s must satisfy {ds} < s < t - {ds}")));
    }
    let origin = |g: &GridFunction| g.at(0, 0, 0);
    let run = |field: &GridFunction, dur: f64| -> Result<f64> {
        let mut g = field.clone();
        evolve(&mut g, dur, cfg)?;
        Ok(origin(&g))
    };
    let mut entries = Vec::new();
    for &s in s_grid {
        let mut phis = [[0.0; 2]; 3];
        let mut rhs = [0.0; 2];
        for (slot, sigma) in [s - ds, s, s + ds].into_iter().enumerate() {
            let mut p = f0.clone();
            evolve(&mut p, t - sigma, cfg)?;
            if p.data.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::NonPositiveEstimate(p.data.iter().copied().fold(f64::INFINITY, f64::min)));
            }
            let fields = phi_fields(&p);
            phis[slot] = [run(&fields.g1, sigma)?, run(&fields.g2, sigma)?];
            if slot == 1 {
                rhs = [run(&fields.r1, sigma)?, run(&fields.r2, sigma)?];
            }
        }
        let d1 = (phis[2][0] - phis[0][0]) / (2.0 * ds);
        let d2 = (phis[2][1] - phis[0][1]) / (2.0 * ds);
        let gap = |a: f64, b: f64| {
            let scale = a.abs().max(b.abs());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).abs() / scale
            }
        };
        entries.push(PhiEntry {
            s,
            phi1: phis[1][0],
            phi2: phis[1][1],
            dphi1_difference: d1,
            dphi1_formula: rhs[0],
            dphi2_difference: d2,
            dphi2_formula: rhs[1],
            gap1: gap(d1, rhs[0]),
            gap2: gap(d2, rhs[1]),
        });
    }
    let max_relative_gap = entries.iter().map(|e| e.gap1.max(e.gap2)).fold(0.0, f64::max);
    Ok(PhiReport {
        t,
        entries,
        max_relative_gap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    /// Node counts along x, y, z; data is row-major with z fastest.
    pub shape: [usize; 3],
    pub bounds: [[f64; 2]; 3],
    pub spacing: [f64; 3],
    pub t: f64,
    pub dtype: String,
}

/// Writes `<stem>.bin` (little-endian `f64`) and `<stem>.json`.
pub fn write_snapshot(g: &GridFunction, stem: &Path) -> Result<()> {
    let io = |e: std::io::Error| invalid("snapshot", e.to_string());
    let s = g.shape;
    let header = SnapshotHeader {
        shape: s.dims(),
        bounds: [
            [-(s.nx as f64) * s.dx, s.nx as f64 * s.dx],
            [-(s.ny as f64) * s.dy, s.ny as f64 * s.dy],
            [-(s.nz as f64) * s.dz, s.nz as f64 * s.dz],
        ],
        spacing: [s.dx, s.dy, s.dz],
        t: g.t,
        dtype: "f64-le".into(),
    };
    let mut bin = fs::File::create(stem.with_extension("bin")).map_err(io)?;
    let bytes: Vec<u8> = g.data.iter().flat_map(|v| v.to_le_bytes()).collect();
    bin.write_all(&bytes).map_err(io)?;
    let json = serde_json::to_string_pretty(&header).map_err(|e| invalid("snapshot", e.to_string()))?;
    fs::write(stem.with_extension("json"), json).map_err(io)?;
    Ok(())
}

pub fn read_snapshot(stem: &Path) -> Result<(SnapshotHeader, Vec<f64>)> {
    let io = |e: std::io::Error| invalid("snapshot", e.to_string());
    let header: SnapshotHeader = serde_json::from_str(&fs::read_to_string(stem.with_extension("json")).map_err(io)?)
        .map_err(|e| invalid("snapshot", e.to_string()))?;
    let bytes = fs::read(stem.with_extension("bin")).map_err(io)?;
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((header, data))
}
