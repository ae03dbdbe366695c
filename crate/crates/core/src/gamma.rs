//! The operators `L = X² + Y²`, `Γ`, `Γ₂` and `Z`, and numerical checks of
//! the algebraic identities behind the Li-Yau estimates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{apply_field, ScalarField};
use crate::group::{AlgebraElement, GroupElement, GroupModel, ModelKind};

fn x(f: &ScalarField, m: &GroupModel) -> Result<ScalarField> {
    apply_field(AlgebraElement::X, f, m)
}

fn y(f: &ScalarField, m: &GroupModel) -> Result<ScalarField> {
    apply_field(AlgebraElement::Y, f, m)
}

/// `L f = X²f + Y²f`.
pub fn sub_laplacian(f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    Ok(x(&x(f, model)?, model)? + y(&y(f, model)?, model)?)
}

/// `Γ(f, h) = (Xf)(Xh) + (Yf)(Yh)`.
pub fn gamma(f: &ScalarField, h: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    Ok(x(f, model)? * x(h, model)? + y(f, model)? * y(h, model)?)
}

/// `Γ(f, h) = ½(L(fh) − f·Lh − h·Lf)`.
pub fn gamma_by_definition(f: &ScalarField, h: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    let lfh = sub_laplacian(&(f * h), model)?;
    let lh = sub_laplacian(h, model)?;
    let lf = sub_laplacian(f, model)?;
    Ok((lfh - f * lh - h * lf).scale(0.5))
}

/// Derivative along the basis matrix `Z`.
pub fn z_direct(f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    apply_field(AlgebraElement::Z, f, model)
}

/// `Zf = XYf − YXf`.
pub fn z_by_bracket(f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    Ok(x(&y(f, model)?, model)? - y(&x(f, model)?, model)?)
}

/// `Γ₂(f) = ½(LΓ(f,f) − 2Γ(f, Lf))`.
pub fn gamma2_definition(f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    let g = gamma(f, f, model)?;
    let lg = sub_laplacian(&g, model)?;
    let lf = sub_laplacian(f, model)?;
    let cross = gamma(f, &lf, model)?;
    Ok((lg - cross.scale(2.0)).scale(0.5))
}

/// The expanded form
/// `(X²f)² + (Y²f)² + ½((XY+YX)f)² + ½(Zf)² + ρΓ(f,f) − 2(Xf)(YZf) + 2(Yf)(XZf)`.
pub fn gamma2_expanded(f: &ScalarField, model: &GroupModel) -> Result<ScalarField> {
    let xf = x(f, model)?;
    let yf = y(f, model)?;
    let xxf = x(&xf, model)?;
    let yyf = y(&yf, model)?;
    let sym = x(&yf, model)? + y(&xf, model)?;
    let zf = z_direct(f, model)?;
    let yzf = y(&zf, model)?;
    let xzf = x(&zf, model)?;
    let g = &xf * &xf + &yf * &yf;
    Ok(xxf.square() + yyf.square() + sym.square().scale(0.5) + zf.square().scale(0.5) + g.scale(model.rho)
        - (&xf * &yzf).scale(2.0)
        + (&yf * &xzf).scale(2.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaEntry {
    pub function: usize,
    pub point: usize,
    pub gamma2_definition: f64,
    pub gamma2_expanded: f64,
    pub abs_gap: f64,
    pub relative_gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaReport {
    pub model: ModelKind,
    pub entries: Vec<GammaEntry>,
    pub max_abs_gap: f64,
    /// Maximum of `|definition − expansion| / (1 + |definition|)`.
    pub max_relative_gap: f64,
}

impl GammaReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_relative_gap <= tol
    }
}

/// Evaluates both Γ₂ routes on every (function, point) pair.
pub fn verify_gamma2(model: &GroupModel, fields: &[ScalarField], points: &[GroupElement]) -> Result<GammaReport> {
    let per_field: Vec<Vec<GammaEntry>> = fields
        .par_iter()
        .enumerate()
        .map(|(fi, f)| {
            let def = gamma2_definition(f, model)?;
            let exp = gamma2_expanded(f, model)?;
            Ok(points
                .iter()
                .enumerate()
                .map(|(pi, g)| {
                    let a = def.value(g);
                    let b = exp.value(g);
                    let gap = (a - b).abs();
                    GammaEntry {
                        function: fi,
                        point: pi,
                        gamma2_definition: a,
                        gamma2_expanded: b,
                        abs_gap: gap,
                        relative_gap: gap / (1.0 + a.abs()),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let entries: Vec<GammaEntry> = per_field.into_iter().flatten().collect();
    let max_abs_gap = entries.iter().map(|e| e.abs_gap).fold(0.0, f64::max);
    let max_relative_gap = entries.iter().map(|e| e.relative_gap).fold(0.0, f64::max);
    Ok(GammaReport {
        model: model.kind,
        entries,
        max_abs_gap,
        max_relative_gap,
    })
}

/// Maximal absolute residuals of the structural identities over a suite.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct IdentityReport {
    pub model: Option<ModelKind>,
    /// `[X,Y]f − Zf` with both sides as operators.
    pub bracket_xy: f64,
    /// `[X,Z]f + ρ·Yf`.
    pub bracket_xz: f64,
    /// `[Y,Z]f − ρ·Xf`.
    pub bracket_yz: f64,
    /// `L(Zf) − Z(Lf)`.
    pub lz_commutator: f64,
    /// `(Xf)(Zf)([X,Z]f) + (Yf)(Zf)([Y,Z]f)`.
    pub mixed_identity: f64,
    /// `Γ` by definition vs. direct form, relative to `1 + |Γ|`.
    pub gamma_forms_relative: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.bracket_xy,
            self.bracket_xz,
            self.bracket_yz,
            self.lz_commutator,
            self.mixed_identity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    fn merge(mut self, o: IdentityReport) -> IdentityReport {
        self.bracket_xy = self.bracket_xy.max(o.bracket_xy);
        self.bracket_xz = self.bracket_xz.max(o.bracket_xz);
        self.bracket_yz = self.bracket_yz.max(o.bracket_yz);
        self.lz_commutator = self.lz_commutator.max(o.lz_commutator);
        self.mixed_identity = self.mixed_identity.max(o.mixed_identity);
        self.gamma_forms_relative = self.gamma_forms_relative.max(o.gamma_forms_relative);
        self
    }
}

pub fn check_proof_identities(
    model: &GroupModel,
    fields: &[ScalarField],
    points: &[GroupElement],
) -> Result<IdentityReport> {
    let rho = model.rho;
    let reports: Vec<IdentityReport> = fields
        .par_iter()
        .map(|f| {
            let xf = x(f, model)?;
            let yf = y(f, model)?;
            let zf = z_direct(f, model)?;
            let xz = x(&zf, model)? - z_direct(&xf, model)?;
            let yz = y(&zf, model)? - z_direct(&yf, model)?;
            let xy = z_by_bracket(f, model)?;
            let lz = sub_laplacian(&zf, model)? - z_direct(&sub_laplacian(f, model)?, model)?;
            let mixed = &xf * &zf * &xz + &yf * &zf * &yz;
            let g_direct = gamma(f, f, model)?;
            let g_def = gamma_by_definition(f, f, model)?;
            let mut r = IdentityReport::default();
            for g in points {
                let (xv, yv, zv) = (xf.value(g), yf.value(g), zf.value(g));
                r.bracket_xy = r.bracket_xy.max((xy.value(g) - zv).abs());
                r.bracket_xz = r.bracket_xz.max((xz.value(g) + rho * yv).abs());
                r.bracket_yz = r.bracket_yz.max((yz.value(g) - rho * xv).abs());
                r.lz_commutator = r.lz_commutator.max(lz.value(g).abs());
                r.mixed_identity = r.mixed_identity.max(mixed.value(g).abs());
                let gd = g_direct.value(g);
                r.gamma_forms_relative = r
                    .gamma_forms_relative
                    .max((gd - g_def.value(g)).abs() / (1.0 + gd.abs()));
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut out = reports.into_iter().fold(IdentityReport::default(), IdentityReport::merge);
    out.model = Some(model.kind);
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub lambda: f64,
    pub min_margin: f64,
    pub margins: Vec<f64>,
}

/// Margin of `Γ₂(f) ≥ ½(Lf)² + ½(Zf)² + (ρ − 1/λ)Γ(f) − λΓ(Zf)` at each point,
/// one report per `λ`.
pub fn gamma2_lower_bound_check(
    f: &ScalarField,
    model: &GroupModel,
    lambdas: &[f64],
    points: &[GroupElement],
) -> Result<Vec<LowerBoundReport>> {
    if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0)) {
        return Err(invalid("lambda", format!("must be positive, got {bad}")));
    }
    let g2 = gamma2_definition(f, model)?;
    let lf = sub_laplacian(f, model)?;
    let zf = z_direct(f, model)?;
    let gf = gamma(f, f, model)?;
    let gz = gamma(&zf, &zf, model)?;
    let values: Vec<[f64; 5]> = points
        .iter()
        .map(|g| [g2.value(g), lf.value(g), zf.value(g), gf.value(g), gz.value(g)])
        .collect();
    Ok(lambdas
        .iter()
        .map(|&lambda| {
            let margins: Vec<f64> = values
                .iter()
                .map(|[g2, l, z, gf, gz]| {
                    g2 - (0.5 * l * l + 0.5 * z * z + (model.rho - 1.0 / lambda) * gf - lambda * gz)
                })
                .collect();
            LowerBoundReport {
                lambda,
                min_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
                margins,
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticBoundReport {
    pub min_margin: f64,
    pub count: usize,
}

/// `v² − (2γv − γ²)` over the given `(v, γ)` pairs.
pub fn quadratic_bound_check(pairs: &[(f64, f64)]) -> QuadraticBoundReport {
    let min_margin = pairs
        .iter()
        .map(|(v, g)| v * v - (2.0 * g * v - g * g))
        .fold(f64::INFINITY, f64::min);
    QuadraticBoundReport {
        min_margin,
        count: pairs.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::test_function_suite;
    use rand::{Rng, SeedableRng};

    fn pts(m: &GroupModel, n: u64) -> Vec<GroupElement> {
        (0..n).map(|s| m.random_element(77 + s)).collect()
    }

    #[test]
    fn heisenberg_hand_values() {
        let h = GroupModel::heisenberg();
        let xs = ScalarField::heisenberg_x();
        let ys = ScalarField::heisenberg_y();
        let zs = ScalarField::heisenberg_z();
        let r2 = &xs * &xs + &ys * &ys;
        let l = sub_laplacian(&r2, &h).unwrap();
        let lz = sub_laplacian(&zs, &h).unwrap();
        let gx = gamma(&xs, &xs, &h).unwrap();
        let gz = gamma(&zs, &zs, &h).unwrap();
        let gc = gamma(&zs, &ScalarField::constant(2.0), &h).unwrap();
        let zb = z_by_bracket(&zs, &h).unwrap();
        let zd = z_direct(&zs, &h).unwrap();
        let d = gamma2_definition(&zs, &h).unwrap();
        let e = gamma2_expanded(&zs, &h).unwrap();
        let dx = gamma2_definition(&xs, &h).unwrap();
        let ex = gamma2_expanded(&xs, &h).unwrap();
        for g in pts(&h, 20) {
            let xv = g.entries[1];
            assert_eq!(l.value(&g), 4.0);
            assert_eq!(lz.value(&g), 0.0);
            assert_eq!(gx.value(&g), 1.0);
            assert_eq!(gz.value(&g), xv * xv);
            assert_eq!(gc.value(&g), 0.0);
            assert_eq!(zb.value(&g), 1.0);
            assert_eq!(zd.value(&g), 1.0);
            assert_eq!(d.value(&g), 1.0);
            assert_eq!(e.value(&g), 1.0);
            assert_eq!(dx.value(&g), 0.0);
            assert_eq!(ex.value(&g), 0.0);
        }
    }

    #[test]
    fn constants_vanish() {
        for kind in ModelKind::ALL {
            let m = GroupModel::new(kind);
            let c = ScalarField::constant(-1.5);
            for g in pts(&m, 5) {
                assert_eq!(sub_laplacian(&c, &m).unwrap().value(&g), 0.0);
                assert_eq!(z_direct(&c, &m).unwrap().value(&g), 0.0);
                assert_eq!(gamma2_definition(&c, &m).unwrap().value(&g), 0.0);
            }
        }
    }

    #[test]
    fn gamma2_forms_agree_on_suite() {
        for kind in ModelKind::ALL {
            let m = GroupModel::new(kind);
            let suite = test_function_suite(&m, 11, 12);
            let r = verify_gamma2(&m, &suite, &pts(&m, 6)).unwrap();
            assert!(r.passes(1e-8), "{kind}: {}", r.max_relative_gap);
        }
    }

    #[test]
    fn su2_z_routes_agree() {
        let m = GroupModel::su2();
        let suite = test_function_suite(&m, 3, 25);
        let points = pts(&m, 20);
        for f in &suite {
            let a = z_by_bracket(f, &m).unwrap();
            let b = z_direct(f, &m).unwrap();
            for g in &points {
                assert!((a.value(g) - b.value(g)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn identities_hold() {
        for kind in ModelKind::ALL {
            let m = GroupModel::new(kind);
            let suite = test_function_suite(&m, 21, 10);
            let r = check_proof_identities(&m, &suite, &pts(&m, 5)).unwrap();
            assert!(r.max_residual() <= 1e-9, "{kind}: {r:?}");
            assert!(r.gamma_forms_relative <= 1e-9);
        }
    }

    #[test]
    fn lower_bound_margins() {
        let h = GroupModel::heisenberg();
        let zs = ScalarField::heisenberg_z();
        let points = pts(&h, 10);
        // margin = ½((XY+YX)z)² + x²/λ = ½ + x²/λ, with Γ(Zz) = 0
        let reports = gamma2_lower_bound_check(&zs, &h, &[0.1, 1.0, 10.0], &points).unwrap();
        for r in &reports {
            for (m, g) in r.margins.iter().zip(&points) {
                let xv = g.entries[1];
                assert!((m - (0.5 + xv * xv / r.lambda)).abs() < 1e-12);
            }
        }
        let c = gamma2_lower_bound_check(&ScalarField::constant(1.0), &h, &[1.0], &points).unwrap();
        assert_eq!(c[0].min_margin, 0.0);
        assert!(gamma2_lower_bound_check(&zs, &h, &[0.0], &points).is_err());
        assert!(gamma2_lower_bound_check(&zs, &h, &[-1.0], &points).is_err());
    }

    #[test]
    fn quadratic_bound() {
        assert_eq!(quadratic_bound_check(&[(2.5, 2.5)]).min_margin, 0.0);
        assert_eq!(quadratic_bound_check(&[(0.0, 1.0)]).min_margin, 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let pairs: Vec<(f64, f64)> = (0..10_000)
            .map(|_| (rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0)))
            .collect();
        assert!(quadratic_bound_check(&pairs).min_margin >= 0.0);
    }
}
