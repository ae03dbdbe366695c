//! Heat semigroup `P_t = e^{tL}`: Monte Carlo on all models, explicit finite
//! differences on the Heisenberg group.

mod grid;
mod mc;

pub use grid::*;
pub use mc::*;

use serde::{Deserialize, Serialize};

/// Estimates of the derivative terms of `u = ln P_tf` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogHeatDerivatives {
    pub t: f64,
    pub rho: f64,
    pub u: f64,
    pub xu: f64,
    pub yu: f64,
    pub zu: f64,
    /// `Γ(u) = (Xu)² + (Yu)²`.
    pub gamma_u: f64,
    /// `(Zu)²`.
    pub zu_sq: f64,
    /// `∂ₜu = LP_tf / P_tf`.
    pub du_dt: f64,
    pub gamma_u_se: f64,
    pub zu_sq_se: f64,
    pub du_dt_se: f64,
}

impl LogHeatDerivatives {
    pub fn zero(rho: f64, t: f64) -> Self {
        LogHeatDerivatives {
            t,
            rho,
            u: 0.0,
            xu: 0.0,
            yu: 0.0,
            zu: 0.0,
            gamma_u: 0.0,
            zu_sq: 0.0,
            du_dt: 0.0,
            gamma_u_se: 0.0,
            zu_sq_se: 0.0,
            du_dt_se: 0.0,
        }
    }
}
