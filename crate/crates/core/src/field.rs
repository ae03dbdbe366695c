//! Scalar test functions on ambient matrix coordinates, evaluable on reals
//! and on [`Jet`]s, and the left-invariant vector field action on them.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{mat_mul_const, AlgebraElement, Entries, GroupElement, GroupModel, ModelKind};
use crate::jet::{Jet, Scalar, MAX_DEPTH};

/// One monomial `coeff · Π coords[i]^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub powers: Vec<(usize, u32)>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| m.powers.iter().map(|(_, e)| *e).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn eval<T: Scalar>(&self, p: &Entries<T>) -> T {
        let mut acc = T::zero();
        for m in &self.terms {
            let mut term = T::from_f64(m.coeff);
            for &(i, e) in &m.powers {
                term = term * p[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }
}

#[derive(Clone)]
enum Node {
    Const(f64),
    Coord(usize),
    Poly(Polynomial),
    Add(ScalarField, ScalarField),
    Sub(ScalarField, ScalarField),
    Mul(ScalarField, ScalarField),
    Div(ScalarField, ScalarField),
    Scale(f64, ScalarField),
    Exp(ScalarField),
    Ln(ScalarField),
    Sqrt(ScalarField),
    Powi(ScalarField, i32),
    /// `(A f)(g) = d/dt f(g·(I + tA))` at `t = 0`.
    Directional {
        kind: ModelKind,
        matrix: Entries<f64>,
        inner: ScalarField,
    },
}

/// A smooth function of the packed matrix entries of a group element.
///
/// `depth` is the number of nested directional derivatives the field
/// already consumes; evaluation needs one jet slot per level.
#[derive(Clone)]
pub struct ScalarField {
    node: Arc<Node>,
    depth: u8,
    positive: bool,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("depth", &self.depth)
            .field("positive", &self.positive)
            .finish()
    }
}

impl ScalarField {
    fn from_node(node: Node, depth: u8, positive: bool) -> Self {
        ScalarField {
            node: Arc::new(node),
            depth,
            positive,
        }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(Node::Const(c), 0, c > 0.0)
    }

    /// The packed matrix entry with index `i`.
    pub fn coord(i: usize) -> Self {
        assert!(i < 9, "coordinate index out of range");
        Self::from_node(Node::Coord(i), 0, false)
    }

    pub fn polynomial(p: Polynomial) -> Self {
        Self::from_node(Node::Poly(p), 0, false)
    }

    /// Heisenberg `x`, `y`, `z` entries.
    pub fn heisenberg_x() -> Self {
        Self::coord(1)
    }
    pub fn heisenberg_y() -> Self {
        Self::coord(5)
    }
    pub fn heisenberg_z() -> Self {
        Self::coord(2)
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    /// Marks the field as positive; the caller vouches for it.
    pub fn assume_positive(mut self) -> Self {
        self.positive = true;
        self
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_node(Node::Scale(k, self.clone()), self.depth, self.positive && k > 0.0)
    }

    pub fn exp(&self) -> Self {
        Self::from_node(Node::Exp(self.clone()), self.depth, true)
    }

    pub fn ln(&self) -> Result<Self> {
        if !self.positive {
            return Err(Error::NotPositive);
        }
        Ok(Self::from_node(Node::Ln(self.clone()), self.depth, false))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if !self.positive {
            return Err(Error::NotPositive);
        }
        Ok(Self::from_node(Node::Sqrt(self.clone()), self.depth, true))
    }

    pub fn powi(&self, n: i32) -> Self {
        let positive = self.positive || n == 0;
        Self::from_node(Node::Powi(self.clone(), n), self.depth, positive)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn div(&self, other: &ScalarField) -> Self {
        Self::from_node(
            Node::Div(self.clone(), other.clone()),
            self.depth.max(other.depth),
            self.positive && other.positive,
        )
    }

    /// Evaluates at packed coordinates. Works for both `f64` and [`Jet`].
    pub fn eval<T: Scalar>(&self, p: &Entries<T>) -> T {
        match &*self.node {
            Node::Const(c) => T::from_f64(*c),
            Node::Coord(i) => p[*i],
            Node::Poly(poly) => poly.eval(p),
            Node::Add(a, b) => a.eval(p) + b.eval(p),
            Node::Sub(a, b) => a.eval(p) - b.eval(p),
            Node::Mul(a, b) => a.eval(p) * b.eval(p),
            Node::Div(a, b) => a.eval(p) / b.eval(p),
            Node::Scale(k, a) => a.eval(p).scale(*k),
            Node::Exp(a) => a.eval(p).exp(),
            Node::Ln(a) => a.eval(p).ln(),
            Node::Sqrt(a) => a.eval(p).sqrt(),
            Node::Powi(a, n) => a.eval(p).powi(*n),
            Node::Directional {
                kind,
                matrix,
                inner,
            } => {
                let jets: Entries<Jet> = p.map(|v| v.to_jet());
                T::from_jet(directional_jet(*kind, matrix, inner, &jets))
            }
        }
    }

    pub fn value(&self, g: &GroupElement) -> f64 {
        self.eval(&g.entries)
    }
}

fn directional_jet(kind: ModelKind, matrix: &Entries<f64>, inner: &ScalarField, p: &Entries<Jet>) -> Jet {
    let slot = inner.depth;
    let q = mat_mul_const(kind, p, matrix);
    let mut shifted = *p;
    for i in 0..kind.len() {
        shifted[i] = p[i].add_perturbation(slot, &q[i]);
    }
    inner.eval(&shifted).partial(slot)
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident, $pos:expr) => {
        impl std::ops::$trait<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                let positive: fn(bool, bool) -> bool = $pos;
                ScalarField::from_node(
                    Node::$variant(self.clone(), rhs.clone()),
                    self.depth.max(rhs.depth),
                    positive(self.positive, rhs.positive),
                )
            }
        }
        impl std::ops::$trait<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
        impl std::ops::$trait<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                std::ops::$trait::$method(&self, rhs)
            }
        }
        impl std::ops::$trait<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                std::ops::$trait::$method(self, &rhs)
            }
        }
    };
}

binary_op!(Add, add, Add, |a, b| a && b);
binary_op!(Sub, sub, Sub, |_, _| false);
binary_op!(Mul, mul, Mul, |a, b| a && b);

impl std::ops::Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

impl std::ops::Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

/// `A f` for the left-invariant field of `A`, via one first-order
/// perturbation `g ↦ g·(I + εA)`.
pub fn apply_field(a: AlgebraElement, f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    apply_matrix(model.kind, model.embed(a), f)
}

pub(crate) fn apply_matrix(kind: ModelKind, matrix: Entries<f64>, f: &ScalarField) -> Result<ScalarField> {
    let depth = f.depth + 1;
    if depth > MAX_DEPTH {
        return Err(Error::DepthExceeded {
            requested: depth,
            max: MAX_DEPTH,
        });
    }
    Ok(ScalarField::from_node(
        Node::Directional {
            kind,
            matrix,
            inner: f.clone(),
        },
        depth,
        false,
    ))
}

/// Random test functions for identity checks.
///
/// Every fourth field is `exp(q)` with `q` a small-coefficient polynomial of
/// degree ≤ 2 (flagged positive); the others are polynomials of total degree
/// 1..=4 in the free matrix entries of the model.
pub fn test_function_suite(model: &GroupModel, seed: u64, count: usize) -> Vec<ScalarField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f1e1_d5u64);
    let coords = model.kind.free_coords();
    (0..count)
        .map(|i| {
            if i % 4 == 3 {
                let q = random_polynomial(&mut rng, coords, 2, 0.4);
                ScalarField::polynomial(q).exp()
            } else {
                let deg = rng.random_range(1..=4);
                ScalarField::polynomial(random_polynomial(&mut rng, coords, deg, 1.0))
            }
        })
        .collect()
}

/// Random polynomial with exactly `max_degree` as its top degree.
pub fn random_polynomial<R: Rng>(rng: &mut R, coords: &[usize], max_degree: u32, scale: f64) -> Polynomial {
    let n_terms = rng.random_range(1..=6);
    let mut terms = Vec::with_capacity(n_terms + 1);
    for k in 0..=n_terms {
        let deg = if k == 0 { max_degree } else { rng.random_range(0..=max_degree) };
        let mut powers: Vec<(usize, u32)> = Vec::new();
        for _ in 0..deg {
            let c = coords[rng.random_range(0..coords.len())];
            match powers.iter_mut().find(|(i, _)| *i == c) {
                Some(entry) => entry.1 += 1,
                None => powers.push((c, 1)),
            }
        }
        powers.sort_unstable();
        terms.push(Monomial {
            coeff: scale * rng.random_range(-1.0..1.0),
            powers,
        });
    }
    Polynomial { terms }
}
