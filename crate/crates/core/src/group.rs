//! Matrix realizations of the three model groups.
//!
//! Every point is stored in ambient matrix coordinates packed in a `[T; 9]`:
//!
//! * Heisenberg: the 3×3 real matrix, row-major (`x` at 1, `y` at 5, `z` at 2);
//! * SU(2): the 2×2 complex matrix as `(re, im)` pairs, row-major (8 slots);
//! * SL(2): the 2×2 real matrix, row-major (4 slots).
//!
//! Unused trailing slots are zero.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Scalar;

pub type Entries<T> = [T; 9];

/// Multiplications after which long products are projected back onto the group.
pub const RENORM_INTERVAL: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Heisenberg,
    Su2,
    Sl2,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Heisenberg, ModelKind::Su2, ModelKind::Sl2];

    /// Curvature parameter of the model.
    pub fn rho(self) -> f64 {
        match self {
            ModelKind::Heisenberg => 0.0,
            ModelKind::Su2 => 1.0,
            ModelKind::Sl2 => -1.0,
        }
    }

    /// Number of used slots in the packed entry array.
    pub fn len(self) -> usize {
        match self {
            ModelKind::Heisenberg => 9,
            ModelKind::Su2 => 8,
            ModelKind::Sl2 => 4,
        }
    }

    /// Slots that actually vary over the group.
    pub fn free_coords(self) -> &'static [usize] {
        match self {
            ModelKind::Heisenberg => &[1, 5, 2],
            ModelKind::Su2 => &[0, 1, 2, 3, 4, 5, 6, 7],
            ModelKind::Sl2 => &[0, 1, 2, 3],
        }
    }

    /// Column names for the packed entries, used by CSV dumps and the
    /// expression grammar.
    pub fn coord_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Heisenberg => &["m11", "x", "z", "m21", "m22", "y", "m31", "m32", "m33"],
            ModelKind::Su2 => &["u11r", "u11i", "u12r", "u12i", "u21r", "u21i", "u22r", "u22i"],
            ModelKind::Sl2 => &["m11", "m12", "m21", "m22"],
        }
    }

    pub fn coord_index(self, name: &str) -> Option<usize> {
        let alias = match (self, name) {
            (ModelKind::Heisenberg, "m12") => Some(1),
            (ModelKind::Heisenberg, "m13") => Some(2),
            (ModelKind::Heisenberg, "m23") => Some(5),
            _ => None,
        };
        alias.or_else(|| self.coord_names().iter().position(|n| *n == name))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Heisenberg => "heisenberg",
            ModelKind::Su2 => "su2",
            ModelKind::Sl2 => "sl2",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heisenberg" | "h" => Ok(ModelKind::Heisenberg),
            "su2" => Ok(ModelKind::Su2),
            "sl2" => Ok(ModelKind::Sl2),
            other => Err(crate::error::invalid("model", format!("unknown model `{other}`"))),
        }
    }
}

/// A model group together with its structure constant ρ.
///
/// `rho` is fixed by the matrix realization for [`GroupModel::new`]; the
/// algebraic bracket accepts any real via [`GroupModel::with_rho`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupModel {
    pub kind: ModelKind,
    pub rho: f64,
}

impl GroupModel {
    pub fn new(kind: ModelKind) -> Self {
        GroupModel {
            kind,
            rho: kind.rho(),
        }
    }

    pub fn heisenberg() -> Self {
        Self::new(ModelKind::Heisenberg)
    }

    pub fn su2() -> Self {
        Self::new(ModelKind::Su2)
    }

    pub fn sl2() -> Self {
        Self::new(ModelKind::Sl2)
    }

    pub fn with_rho(kind: ModelKind, rho: f64) -> Self {
        GroupModel { kind, rho }
    }

    pub fn bracket(&self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
        bracket(self.rho, a, b)
    }

    /// The basis matrices `X`, `Y`, `Z` in packed layout.
    pub fn basis(&self) -> [Entries<f64>; 3] {
        basis_matrices(self.kind)
    }

    pub fn embed(&self, a: AlgebraElement) -> Entries<f64> {
        let [x, y, z] = self.basis();
        let mut out = [0.0; 9];
        for i in 0..9 {
            out[i] = a.x * x[i] + a.y * y[i] + a.z * z[i];
        }
        out
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            kind: self.kind,
            entries: identity_entries(self.kind),
        }
    }

    /// Matrix exponential in closed form: the terminating series on the
    /// nilpotent Heisenberg algebra, and `C(δ)I + S(δ)M` with
    /// `M² = δI` on the trace-free 2×2 algebras.
    pub fn exp(&self, a: AlgebraElement) -> GroupElement {
        GroupElement {
            kind: self.kind,
            entries: exp_matrix(self.kind, &self.embed(a)),
        }
    }

    /// Gaussian algebra element pushed through `exp`; deterministic per seed.
    pub fn random_element(&self, seed: u64) -> GroupElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.exp(AlgebraElement::gaussian(&mut rng))
    }
}

/// Coefficients of `x·X + y·Y + z·Z`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AlgebraElement {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AlgebraElement {
    pub const X: AlgebraElement = AlgebraElement { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: AlgebraElement = AlgebraElement { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: AlgebraElement = AlgebraElement { x: 0.0, y: 0.0, z: 1.0 };
    pub const ZERO: AlgebraElement = AlgebraElement { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        AlgebraElement { x, y, z }
    }

    pub fn scale(self, k: f64) -> Self {
        AlgebraElement::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn add(self, o: AlgebraElement) -> Self {
        AlgebraElement::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        AlgebraElement::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        )
    }
}

impl std::ops::Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Bracket from the structure constants `[X,Y]=Z, [X,Z]=-ρY, [Y,Z]=ρX`.
pub fn bracket(rho: f64, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement {
    let xy = a.x * b.y - a.y * b.x;
    let xz = a.x * b.z - a.z * b.x;
    let yz = a.y * b.z - a.z * b.y;
    AlgebraElement::new(rho * yz, -rho * xz, xy)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub kind: ModelKind,
    pub entries: Entries<f64>,
}

impl GroupElement {
    pub fn from_entries(kind: ModelKind, entries: Entries<f64>) -> Self {
        GroupElement { kind, entries }
    }

    /// Heisenberg point with the given `(x, y, z)` matrix entries.
    pub fn heisenberg(x: f64, y: f64, z: f64) -> Self {
        let mut e = identity_entries(ModelKind::Heisenberg);
        e[1] = x;
        e[5] = y;
        e[2] = z;
        GroupElement {
            kind: ModelKind::Heisenberg,
            entries: e,
        }
    }

    pub fn multiply(&self, other: &GroupElement) -> Result<GroupElement> {
        if self.kind != other.kind {
            return Err(Error::ModelMismatch(self.kind, other.kind));
        }
        Ok(GroupElement {
            kind: self.kind,
            entries: mat_mul(self.kind, &self.entries, &other.entries),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            kind: self.kind,
            entries: inverse_entries(self.kind, &self.entries),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.entries[..self.kind.len()]
    }

    /// Real determinant for the real models, modulus of the complex one for SU(2).
    pub fn determinant(&self) -> (f64, f64) {
        determinant(self.kind, &self.entries)
    }

    /// Maximal entrywise distance to another element.
    pub fn distance_max(&self, other: &GroupElement) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Projects back onto the constraint set (unitarity / unit determinant).
    pub fn renormalize(&mut self) {
        renormalize(self.kind, &mut self.entries);
    }

    /// Deviation from the defining constraints of the group.
    pub fn constraint_defect(&self) -> f64 {
        let e = &self.entries;
        match self.kind {
            ModelKind::Heisenberg => {
                let want = [1.0, e[1], e[2], 0.0, 1.0, e[5], 0.0, 0.0, 1.0];
                want.iter().zip(e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            }
            ModelKind::Sl2 => (e[0] * e[3] - e[1] * e[2] - 1.0).abs(),
            ModelKind::Su2 => {
                let u_h = conj_transpose(e);
                let p = mat_mul(ModelKind::Su2, e, &u_h);
                let id = identity_entries::<f64>(ModelKind::Su2);
                let unit = p.iter().zip(id).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let (dr, di) = determinant(ModelKind::Su2, e);
                unit.max((dr - 1.0).abs()).max(di.abs())
            }
        }
    }
}

pub fn identity_entries<T: Scalar>(kind: ModelKind) -> Entries<T> {
    let mut e = [T::zero(); 9];
    let one = T::from_f64(1.0);
    match kind {
        ModelKind::Heisenberg => {
            e[0] = one;
            e[4] = one;
            e[8] = one;
        }
        ModelKind::Su2 => {
            e[0] = one;
            e[6] = one;
        }
        ModelKind::Sl2 => {
            e[0] = one;
            e[3] = one;
        }
    }
    e
}

pub fn basis_matrices(kind: ModelKind) -> [Entries<f64>; 3] {
    let mut x = [0.0; 9];
    let mut y = [0.0; 9];
    let mut z = [0.0; 9];
    match kind {
        ModelKind::Heisenberg => {
            x[1] = 1.0;
            y[5] = 1.0;
            z[2] = 1.0;
        }
        ModelKind::Su2 => {
            // X = ½[[0,1],[-1,0]], Y = ½[[0,i],[i,0]], Z = ½[[i,0],[0,-i]]
            x[2] = 0.5;
            x[4] = -0.5;
            y[3] = 0.5;
            y[5] = 0.5;
            z[1] = 0.5;
            z[7] = -0.5;
        }
        ModelKind::Sl2 => {
            // X = ½diag(1,-1), Y = ½[[0,1],[1,0]], Z = ½[[0,1],[-1,0]]
            x[0] = 0.5;
            x[3] = -0.5;
            y[1] = 0.5;
            y[2] = 0.5;
            z[1] = 0.5;
            z[2] = -0.5;
        }
    }
    [x, y, z]
}

/// Matrix product in packed layout, generic over the scalar.
#[inline]
pub fn mat_mul<T: Scalar>(kind: ModelKind, a: &Entries<T>, b: &Entries<T>) -> Entries<T> {
    let mut out = [T::zero(); 9];
    match kind {
        ModelKind::Heisenberg => {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = T::zero();
                    for k in 0..3 {
                        acc += a[3 * i + k] * b[3 * k + j];
                    }
                    out[3 * i + j] = acc;
                }
            }
        }
        ModelKind::Sl2 => {
            out[0] = a[0] * b[0] + a[1] * b[2];
            out[1] = a[0] * b[1] + a[1] * b[3];
            out[2] = a[2] * b[0] + a[3] * b[2];
            out[3] = a[2] * b[1] + a[3] * b[3];
        }
        ModelKind::Su2 => {
            for i in 0..2 {
                for j in 0..2 {
                    let mut re = T::zero();
                    let mut im = T::zero();
                    for k in 0..2 {
                        let (ar, ai) = (a[2 * (2 * i + k)], a[2 * (2 * i + k) + 1]);
                        let (br, bi) = (b[2 * (2 * k + j)], b[2 * (2 * k + j) + 1]);
                        re += ar * br - ai * bi;
                        im += ar * bi + ai * br;
                    }
                    out[2 * (2 * i + j)] = re;
                    out[2 * (2 * i + j) + 1] = im;
                }
            }
        }
    }
    out
}

/// `a · m` where `m` is a real-valued (constant) matrix.
#[inline]
pub fn mat_mul_const<T: Scalar>(kind: ModelKind, a: &Entries<T>, m: &Entries<f64>) -> Entries<T> {
    let mut out = [T::zero(); 9];
    match kind {
        ModelKind::Heisenberg => {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = T::zero();
                    for k in 0..3 {
                        let c = m[3 * k + j];
                        if c != 0.0 {
                            acc += a[3 * i + k].scale(c);
                        }
                    }
                    out[3 * i + j] = acc;
                }
            }
        }
        ModelKind::Sl2 => {
            for i in 0..2 {
                for j in 0..2 {
                    let mut acc = T::zero();
                    for k in 0..2 {
                        let c = m[2 * k + j];
                        if c != 0.0 {
                            acc += a[2 * i + k].scale(c);
                        }
                    }
                    out[2 * i + j] = acc;
                }
            }
        }
        ModelKind::Su2 => {
            for i in 0..2 {
                for j in 0..2 {
                    let mut re = T::zero();
                    let mut im = T::zero();
                    for k in 0..2 {
                        let (ar, ai) = (a[2 * (2 * i + k)], a[2 * (2 * i + k) + 1]);
                        let (br, bi) = (m[2 * (2 * k + j)], m[2 * (2 * k + j) + 1]);
                        if br != 0.0 {
                            re += ar.scale(br);
                            im += ai.scale(br);
                        }
                        if bi != 0.0 {
                            re += ai.scale(-bi);
                            im += ar.scale(bi);
                        }
                    }
                    out[2 * (2 * i + j)] = re;
                    out[2 * (2 * i + j) + 1] = im;
                }
            }
        }
    }
    out
}

pub fn mat_add(a: &Entries<f64>, b: &Entries<f64>) -> Entries<f64> {
    let mut out = *a;
    for (o, v) in out.iter_mut().zip(b) {
        *o += v;
    }
    out
}

pub fn mat_scale(a: &Entries<f64>, k: f64) -> Entries<f64> {
    let mut out = *a;
    for o in &mut out {
        *o *= k;
    }
    out
}

pub fn commutator(kind: ModelKind, a: &Entries<f64>, b: &Entries<f64>) -> Entries<f64> {
    let ab = mat_mul(kind, a, b);
    let ba = mat_mul(kind, b, a);
    let mut out = ab;
    for (o, v) in out.iter_mut().zip(ba) {
        *o -= v;
    }
    out
}

/// Real part of the trace.
pub fn trace_re(kind: ModelKind, a: &Entries<f64>) -> f64 {
    match kind {
        ModelKind::Heisenberg => a[0] + a[4] + a[8],
        ModelKind::Sl2 => a[0] + a[3],
        ModelKind::Su2 => a[0] + a[6],
    }
}

fn conj_transpose(e: &Entries<f64>) -> Entries<f64> {
    let mut out = [0.0; 9];
    for i in 0..2 {
        for j in 0..2 {
            out[2 * (2 * i + j)] = e[2 * (2 * j + i)];
            out[2 * (2 * i + j) + 1] = -e[2 * (2 * j + i) + 1];
        }
    }
    out
}

/// `(re, im)` of the determinant (imaginary part zero for real models).
pub fn determinant(kind: ModelKind, e: &Entries<f64>) -> (f64, f64) {
    match kind {
        ModelKind::Heisenberg => {
            let d = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6])
                + e[2] * (e[3] * e[7] - e[4] * e[6]);
            (d, 0.0)
        }
        ModelKind::Sl2 => (e[0] * e[3] - e[1] * e[2], 0.0),
        ModelKind::Su2 => {
            let (ar, ai, br, bi, cr, ci, dr, di) = (e[0], e[1], e[2], e[3], e[4], e[5], e[6], e[7]);
            let re = (ar * dr - ai * di) - (br * cr - bi * ci);
            let im = (ar * di + ai * dr) - (br * ci + bi * cr);
            (re, im)
        }
    }
}

pub fn inverse_entries(kind: ModelKind, e: &Entries<f64>) -> Entries<f64> {
    let mut out = [0.0; 9];
    match kind {
        ModelKind::Heisenberg => {
            let (x, y, z) = (e[1], e[5], e[2]);
            out = identity_entries(kind);
            out[1] = -x;
            out[5] = -y;
            out[2] = x * y - z;
        }
        ModelKind::Sl2 => {
            let d = e[0] * e[3] - e[1] * e[2];
            out[0] = e[3] / d;
            out[1] = -e[1] / d;
            out[2] = -e[2] / d;
            out[3] = e[0] / d;
        }
        ModelKind::Su2 => {
            let (dr, di) = determinant(kind, e);
            let n = dr * dr + di * di;
            // 1/det
            let (ir, ii) = (dr / n, -di / n);
            let adj = [e[6], e[7], -e[2], -e[3], -e[4], -e[5], e[0], e[1]];
            for k in 0..4 {
                let (ar, ai) = (adj[2 * k], adj[2 * k + 1]);
                out[2 * k] = ar * ir - ai * ii;
                out[2 * k + 1] = ar * ii + ai * ir;
            }
        }
    }
    out
}

/// Even and odd parts of the exponential as functions of `δ` where `M² = δI`:
/// `C(δ) = Σ δⁿ/(2n)!`, `S(δ) = Σ δⁿ/(2n+1)!` and the derivative `S'(δ)`.
pub fn exp_coefficients(delta: f64) -> (f64, f64, f64) {
    if delta.abs() < 1.0 {
        let mut c = 0.0;
        let mut s = 0.0;
        let mut ds = 0.0;
        let mut pow = 1.0; // δ^n
        let mut prev = 0.0; // δ^(n-1)
        let mut fact_even = 1.0; // (2n)!
        for n in 0..20 {
            let fact_odd = fact_even * (2 * n + 1) as f64;
            c += pow / fact_even;
            s += pow / fact_odd;
            ds += n as f64 * prev / fact_odd;
            prev = pow;
            pow *= delta;
            fact_even = fact_odd * (2 * n + 2) as f64;
        }
        (c, s, ds)
    } else if delta > 0.0 {
        let r = delta.sqrt();
        let c = r.cosh();
        let s = r.sinh() / r;
        (c, s, (c - s) / (2.0 * delta))
    } else {
        let r = (-delta).sqrt();
        let c = r.cos();
        let s = r.sin() / r;
        (c, s, (c - s) / (2.0 * delta))
    }
}

pub fn exp_matrix(kind: ModelKind, m: &Entries<f64>) -> Entries<f64> {
    let id = identity_entries::<f64>(kind);
    let m2 = mat_mul(kind, m, m);
    match kind {
        ModelKind::Heisenberg => {
            let mut out = [0.0; 9];
            for i in 0..9 {
                out[i] = id[i] + m[i] + 0.5 * m2[i];
            }
            out
        }
        ModelKind::Su2 | ModelKind::Sl2 => {
            let delta = 0.5 * trace_re(kind, &m2);
            let (c, s, _) = exp_coefficients(delta);
            let mut out = [0.0; 9];
            for i in 0..9 {
                out[i] = c * id[i] + s * m[i];
            }
            out
        }
    }
}

/// Directional derivative of `exp` at `m` along `h`.
pub fn exp_derivative(kind: ModelKind, m: &Entries<f64>, h: &Entries<f64>) -> Entries<f64> {
    let mh = mat_mul(kind, m, h);
    let hm = mat_mul(kind, h, m);
    match kind {
        ModelKind::Heisenberg => {
            let mut out = [0.0; 9];
            for i in 0..9 {
                out[i] = h[i] + 0.5 * (mh[i] + hm[i]);
            }
            out
        }
        ModelKind::Su2 | ModelKind::Sl2 => {
            let m2 = mat_mul(kind, m, m);
            let delta = 0.5 * trace_re(kind, &m2);
            let (_, s, ds) = exp_coefficients(delta);
            let d_delta = trace_re(kind, &mh);
            let id = identity_entries::<f64>(kind);
            let mut out = [0.0; 9];
            for i in 0..9 {
                out[i] = 0.5 * s * d_delta * id[i] + ds * d_delta * m[i] + s * h[i];
            }
            out
        }
    }
}

pub fn renormalize(kind: ModelKind, e: &mut Entries<f64>) {
    match kind {
        ModelKind::Heisenberg => {
            e[0] = 1.0;
            e[3] = 0.0;
            e[4] = 1.0;
            e[6] = 0.0;
            e[7] = 0.0;
            e[8] = 1.0;
        }
        ModelKind::Sl2 => {
            let d = e[0] * e[3] - e[1] * e[2];
            if d > 0.0 {
                let k = 1.0 / d.sqrt();
                for v in e.iter_mut().take(4) {
                    *v *= k;
                }
            }
        }
        ModelKind::Su2 => {
            // Gram-Schmidt on the first row; the second row is then forced to
            // (-conj(b), conj(a)).
            let n = (e[0] * e[0] + e[1] * e[1] + e[2] * e[2] + e[3] * e[3]).sqrt();
            let (ar, ai, br, bi) = (e[0] / n, e[1] / n, e[2] / n, e[3] / n);
            *e = [ar, ai, br, bi, -br, bi, ar, -ai, 0.0];
        }
    }
}

/// Maps an SU(2)/SL(2)/Heisenberg matrix deviation `A - I` (or any matrix)
/// to the algebra coefficients of its least-squares projection onto span{X,Y,Z}.
pub fn project_to_algebra(kind: ModelKind, m: &Entries<f64>) -> AlgebraElement {
    match kind {
        ModelKind::Heisenberg => AlgebraElement::new(m[1], m[5], m[2]),
        _ => {
            // The basis is orthogonal for the real Frobenius product with
            // squared norm 1/2 (SL2: X,Y,Z each 1/2; SU2: each 1/2).
            let basis = basis_matrices(kind);
            let mut c = [0.0; 3];
            for (k, b) in basis.iter().enumerate() {
                let dot: f64 = b.iter().zip(m).map(|(u, v)| u * v).sum();
                let nn: f64 = b.iter().map(|u| u * u).sum();
                c[k] = dot / nn;
            }
            AlgebraElement::new(c[0], c[1], c[2])
        }
    }
}

/// Right-multiplies by `exp(m)` with periodic renormalization; helper for
/// long products.
pub struct ProductAccumulator {
    kind: ModelKind,
    pub entries: Entries<f64>,
    count: usize,
    interval: usize,
}

impl ProductAccumulator {
    pub fn new(start: &GroupElement, interval: usize) -> Self {
        ProductAccumulator {
            kind: start.kind,
            entries: start.entries,
            count: 0,
            interval: interval.max(1),
        }
    }

    #[inline]
    pub fn push(&mut self, factor: &Entries<f64>) {
        self.entries = mat_mul(self.kind, &self.entries, factor);
        self.count += 1;
        if self.count % self.interval == 0 {
            renormalize(self.kind, &mut self.entries);
        }
    }

    pub fn element(&self) -> GroupElement {
        GroupElement {
            kind: self.kind,
            entries: self.entries,
        }
    }
}
