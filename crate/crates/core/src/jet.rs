//! Truncated multivariate first-order expansions.
//!
//! A [`Jet`] is an element of `ℝ[ε₀, ε₁, ε₂] / (ε₀², ε₁², ε₂²)`: a value plus
//! one coefficient for every product of distinct perturbation slots. Nesting
//! three first-order perturbations this way yields exact mixed third
//! derivatives, which is the order needed by Γ₂.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Number of perturbation slots, i.e. the maximal nesting depth.
pub const MAX_DEPTH: u8 = 3;
const SIZE: usize = 1 << MAX_DEPTH;

/// Scalar types that matrix and field code can be written against.
pub trait Scalar:
    Copy
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
{
    fn from_f64(v: f64) -> Self;
    /// The real (value) part.
    fn re(&self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn to_jet(self) -> Jet;
    fn from_jet(j: Jet) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn scale(self, k: f64) -> Self {
        self * Self::from_f64(k)
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn ln(self) -> Self {
        f64::ln(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn to_jet(self) -> Jet {
        Jet::constant(self)
    }
    #[inline]
    fn from_jet(j: Jet) -> Self {
        j.value()
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        self * k
    }
}

/// Coefficients indexed by the bitmask of the slots in the monomial.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Jet {
    c: [f64; SIZE],
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.c)
    }
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        let mut c = [0.0; SIZE];
        c[0] = v;
        Jet { c }
    }

    /// `v + ε_slot`.
    pub fn variable(v: f64, slot: u8) -> Self {
        assert!(slot < MAX_DEPTH);
        let mut j = Jet::constant(v);
        j.c[1 << slot] = 1.0;
        j
    }

    pub fn from_coeffs(c: [f64; SIZE]) -> Self {
        Jet { c }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Coefficient of the monomial whose slots are the bits of `mask`.
    pub fn coeff(&self, mask: usize) -> f64 {
        self.c[mask]
    }

    pub fn coeffs(&self) -> &[f64; SIZE] {
        &self.c
    }

    /// Highest slot in use plus one (0 for constants).
    pub fn depth(&self) -> u8 {
        let mut used = 0usize;
        for (mask, &v) in self.c.iter().enumerate() {
            if v != 0.0 {
                used |= mask;
            }
        }
        (usize::BITS - used.leading_zeros()) as u8
    }

    /// `∂/∂ε_slot`, an exact operation on the truncated expansion.
    #[inline]
    pub fn partial(&self, slot: u8) -> Jet {
        let bit = 1usize << slot;
        let mut out = [0.0; SIZE];
        for (mask, o) in out.iter_mut().enumerate() {
            if mask & bit == 0 {
                *o = self.c[mask | bit];
            }
        }
        Jet { c: out }
    }

    /// `self + ε_slot · q`.
    #[inline]
    pub fn add_perturbation(&self, slot: u8, q: &Jet) -> Jet {
        let bit = 1usize << slot;
        let mut out = self.c;
        for mask in 0..SIZE {
            if mask & bit == 0 {
                out[mask | bit] += q.c[mask];
            }
        }
        Jet { c: out }
    }

    /// Applies a scalar function given its value and first three derivatives
    /// at the real part. Exact because the nilpotent part cubed is the
    /// highest surviving power.
    #[inline]
    pub fn lift(&self, d: [f64; 4]) -> Jet {
        let mut n = *self;
        n.c[0] = 0.0;
        let n2 = n * n;
        let n3 = n2 * n;
        let mut out = [0.0; SIZE];
        out[0] = d[0];
        for m in 1..SIZE {
            out[m] = d[1] * n.c[m] + 0.5 * d[2] * n2.c[m] + d[3] / 6.0 * n3.c[m];
        }
        Jet { c: out }
    }

    pub fn recip(self) -> Jet {
        let v = self.c[0];
        let r = 1.0 / v;
        self.lift([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }
}

impl Scalar for Jet {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Jet::constant(v)
    }
    #[inline]
    fn re(&self) -> f64 {
        self.c[0]
    }
    fn exp(self) -> Self {
        let e = self.c[0].exp();
        self.lift([e, e, e, e])
    }
    fn ln(self) -> Self {
        let v = self.c[0];
        let r = 1.0 / v;
        self.lift([v.ln(), r, -r * r, 2.0 * r * r * r])
    }
    fn sqrt(self) -> Self {
        let v = self.c[0];
        let s = v.sqrt();
        self.lift([s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::constant(1.0),
            1 => self,
            2 => self * self,
            _ => {
                let v = self.c[0];
                let nf = n as f64;
                self.lift([
                    v.powi(n),
                    nf * v.powi(n - 1),
                    nf * (nf - 1.0) * v.powi(n - 2),
                    nf * (nf - 1.0) * (nf - 2.0) * v.powi(n - 3),
                ])
            }
        }
    }
    #[inline]
    fn to_jet(self) -> Jet {
        self
    }
    #[inline]
    fn from_jet(j: Jet) -> Self {
        j
    }
    #[inline]
    fn scale(self, k: f64) -> Self {
        let mut c = self.c;
        for v in &mut c {
            *v *= k;
        }
        Jet { c }
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Jet { c }
    }
}

impl AddAssign for Jet {
    #[inline]
    fn add_assign(&mut self, rhs: Jet) {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, rhs: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        Jet { c }
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [0.0; SIZE];
        for (s, o) in out.iter_mut().enumerate() {
            // enumerate all submasks of s
            let mut sub = s;
            let mut acc = 0.0;
            loop {
                acc += self.c[sub] * rhs.c[s ^ sub];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & s;
            }
            *o = acc;
        }
        Jet { c: out }
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, rhs: Jet) {
        *self = *self * rhs;
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn third_mixed_derivative_of_product() {
        // f(a,b,c) = a*b*c with a=2+ε0, b=3+ε1, c=5+ε2: ∂³f = 1
        let a = Jet::variable(2.0, 0);
        let b = Jet::variable(3.0, 1);
        let c = Jet::variable(5.0, 2);
        let f = a * b * c;
        assert_eq!(f.value(), 30.0);
        assert_eq!(f.coeff(0b111), 1.0);
        assert_eq!(f.coeff(0b001), 15.0);
        assert_eq!(f.coeff(0b011), 5.0);
    }

    #[test]
    fn repeated_variable_gives_higher_derivatives() {
        // x = 0.7 + ε0 + ε1 + ε2: the ε0ε1ε2 coefficient of g(x) is g'''(0.7).
        let x0 = 0.7;
        let mut x = Jet::constant(x0);
        for s in 0..3 {
            x = x.add_perturbation(s, &Jet::constant(1.0));
        }
        let e = x.exp();
        assert!(close(e.coeff(7), x0.exp(), 1e-14));
        let l = x.ln();
        assert!(close(l.coeff(7), 2.0 / x0.powi(3), 1e-14));
        let s = x.sqrt();
        assert!(close(s.coeff(7), 0.375 * x0.powf(-2.5), 1e-14));
        let p = x.powi(5);
        assert!(close(p.coeff(7), 60.0 * x0 * x0, 1e-14));
        let r = Jet::constant(1.0) / x;
        assert!(close(r.coeff(7), -6.0 / x0.powi(4), 1e-14));
        let q = x * x * x;
        assert!(close(q.coeff(3), 6.0 * x0, 1e-14));
    }

    #[test]
    fn partial_extracts_slot() {
        let a = Jet::variable(2.0, 1);
        let f = a * a;
        let d = f.partial(1);
        assert_eq!(d.value(), 4.0);
        assert_eq!(d.depth(), 0);
        assert_eq!(f.depth(), 2);
    }

    #[test]
    fn ln_exp_roundtrip() {
        let x = Jet::variable(1.3, 0).add_perturbation(2, &Jet::constant(0.5));
        let y = x.exp().ln();
        for m in 0..8 {
            assert!(close(y.coeff(m), x.coeff(m), 1e-14));
        }
    }
}
