//! One function per subcommand. Each returns the JSON document, the CSV
//! table and an optional plot description.

use serde_json::{json, Value};
use subelliptic::expr::parse_field;
use subelliptic::field::test_function_suite;
use subelliptic::gamma::{check_proof_identities, gamma2_lower_bound_check, verify_gamma2};
use subelliptic::geometry::{cc_distance, diameter_probe, PathConfig};
use subelliptic::heat::{
    estimate_log_derivatives, grid_log_derivatives, heisenberg_grid_solve, sample_interior_nodes,
    DiffusionConfig, GridConfig, GridFunction, ShortTimeConfig,
};
use subelliptic::liyau::{
    coefficients_from_b, corollary22_form, corollary22_sharp_form, corollary24_form, verify_liyau, BProfile,
    LiYauForm, Tolerance,
};
use subelliptic::quadrature::QuadConfig;
use subelliptic::spectral::{poincare_check, ultracontractivity_probe, variance_decay, SpectralConfig};
use subelliptic::vprofile::{best_c_rho0, family_closed_forms, long_time_decay, SearchConfig, VProfile};
use subelliptic::{GroupElement, GroupModel, ModelKind, Result, ScalarField};

use crate::args::{
    CcDistanceArgs, CheckLiyauArgs, DiameterArgs, LiyauCoeffsArgs, OptimizeMode, OptimizeVArgs, Profile, Route,
    ShortTimeArgs, SpectralGapArgs, VerifyIdentitiesArgs,
};
use crate::output::{Outcome, PlotSpec, Table};

pub const GAMMA2_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-9;
pub const LOWER_BOUND_TOL: f64 = 1e-9;
pub const LAMBDAS: [f64; 3] = [0.1, 1.0, 10.0];
pub const COEFF_TOL: f64 = 1e-6;
pub const CONSTRAINT_TOL: f64 = 1e-8;
pub const FAMILY_EPS: [f64; 4] = [0.01, 0.05, 0.1, 0.3];
pub const FAMILY_GAMMA: [f64; 3] = [2.6, 2.75, 2.9];
pub const DECAY_REL_TOL: f64 = 0.25;
pub const GAP_FLOOR: f64 = 2.0 / 3.0 - 0.1;
pub const HALF_GAP_TOL: f64 = 0.3;
pub const REFINE_TOL: f64 = 0.1;
pub const SHORT_TIME_WINDOW: (f64, f64) = (-2.3, -1.7);

/// Default bump for the grid route and the Heisenberg Monte Carlo route.
pub const BUMP: &str = "exp(-(x^2 + y^2)/2 - z^2/2)";

pub fn default_field(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Heisenberg => BUMP,
        ModelKind::Su2 => "exp(u11r)",
        ModelKind::Sl2 => "exp(-(m11^2 + m12^2 + m21^2 + m22^2)/4)",
    }
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn suite_points(model: &GroupModel, seed: u64, n: usize) -> Vec<GroupElement> {
    (0..n as u64)
        .map(|i| model.random_element(seed.wrapping_mul(1_000_003).wrapping_add(i)))
        .collect()
}

pub fn verify_identities(a: &VerifyIdentitiesArgs) -> Result<Outcome> {
    let model = GroupModel::new(a.model);
    let fields = test_function_suite(&model, a.seed, a.count);
    let points = suite_points(&model, a.seed, a.points);
    let g2 = verify_gamma2(&model, &fields, &points)?;
    let ids = check_proof_identities(&model, &fields, &points)?;
    let mut lower = vec![f64::INFINITY; LAMBDAS.len()];
    for f in &fields {
        for (slot, r) in gamma2_lower_bound_check(f, &model, &LAMBDAS, &points)?.iter().enumerate() {
            lower[slot] = lower[slot].min(r.min_margin);
        }
    }
    let g2_ok = g2.passes(GAMMA2_TOL);
    let id_ok = ids.max_residual() <= IDENTITY_TOL;
    let lb_ok = lower.iter().all(|m| *m >= -LOWER_BOUND_TOL);
    let passed = g2_ok && id_ok && lb_ok;

    let mut table = Table::new(&["check", "value", "tolerance", "passed"]);
    let mut row = |name: &str, v: f64, tol: f64, ok: bool| {
        table.push([name.to_string(), num(v), num(tol), ok.to_string()]);
    };
    row("gamma2_relative_gap", g2.max_relative_gap, GAMMA2_TOL, g2_ok);
    for (name, v) in [
        ("bracket_xy", ids.bracket_xy),
        ("bracket_xz", ids.bracket_xz),
        ("bracket_yz", ids.bracket_yz),
        ("lz_commutator", ids.lz_commutator),
        ("mixed_identity", ids.mixed_identity),
    ] {
        row(name, v, IDENTITY_TOL, v <= IDENTITY_TOL);
    }
    for (l, m) in LAMBDAS.iter().zip(&lower) {
        row(&format!("lower_bound_lambda_{l}"), *m, -LOWER_BOUND_TOL, *m >= -LOWER_BOUND_TOL);
    }

    let json = json!({
        "command": "verify-identities",
        "model": a.model,
        "seed": a.seed,
        "count": fields.len(),
        "points": points.len(),
        "gamma2": {
            "max_abs_gap": g2.max_abs_gap,
            "max_relative_gap": g2.max_relative_gap,
            "tolerance": GAMMA2_TOL,
            "passed": g2_ok,
        },
        "identities": {
            "bracket_xy": ids.bracket_xy,
            "bracket_xz": ids.bracket_xz,
            "bracket_yz": ids.bracket_yz,
            "lz_commutator": ids.lz_commutator,
            "mixed_identity": ids.mixed_identity,
            "gamma_forms_relative": ids.gamma_forms_relative,
            "tolerance": IDENTITY_TOL,
            "passed": id_ok,
        },
        "lower_bound": LAMBDAS.iter().zip(&lower).map(|(l, m)| json!({
            "lambda": l,
            "min_margin": m,
            "passed": *m >= -LOWER_BOUND_TOL,
        })).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: None,
        passed,
    })
}

fn form_json(f: &LiYauForm) -> Value {
    json!({
        "c_gamma": f.c_gamma,
        "c_z": f.c_z,
        "c_rate": f.c_rate,
        "c_const": f.c_const,
    })
}

pub fn liyau_coeffs(a: &LiyauCoeffsArgs) -> Result<Outcome> {
    let cfg = QuadConfig::default();
    let (b, closed, integrated, closed_name) = match a.profile {
        Profile::Power => (
            BProfile::power(a.alpha, a.t)?,
            corollary22_form(a.alpha, a.rho, a.t)?,
            corollary22_sharp_form(a.alpha, a.rho, a.t)?,
            "corollary22_form",
        ),
        Profile::Exp => {
            let f = corollary24_form(a.alpha, a.rho, a.t)?;
            (BProfile::exponential(a.alpha, a.rho, a.t)?, f, f, "corollary24_form")
        }
    };
    let quad = coefficients_from_b(&b, a.rho, &cfg)?;
    let agreement = quad.form.max_relative_gap(&integrated);
    let agreement_displayed = quad.form.max_relative_gap(&closed);
    let passed = agreement <= COEFF_TOL;

    let mut table = Table::new(&["source", "c_gamma", "c_z", "c_rate", "c_const"]);
    for (name, f) in [("quadrature", &quad.form), ("closed_form", &closed), ("integrated_closed_form", &integrated)] {
        table.push([name.to_string(), num(f.c_gamma), num(f.c_z), num(f.c_rate), num(f.c_const)]);
    }
    let json = json!({
        "command": "liyau-coeffs",
        "profile": a.profile.name(),
        "alpha": a.alpha,
        "rho": a.rho,
        "t": a.t,
        "quadrature": form_json(&quad.form),
        "quadrature_error": { "c_rate": quad.rate_error, "c_const": quad.const_error },
        "closed_form": form_json(&closed),
        "closed_form_name": closed_name,
        "integrated_closed_form": form_json(&integrated),
        "c_z": closed.c_z,
        "c_rate": closed.c_rate,
        "c_const": closed.c_const,
        "agreement": agreement,
        "agreement_displayed": agreement_displayed,
        "tolerance": COEFF_TOL,
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: None,
        passed,
    })
}

fn heisenberg_coords(p: [f64; 3]) -> GroupElement {
    GroupElement::heisenberg(p[0], p[1], p[2])
}

pub fn check_liyau(a: &CheckLiyauArgs) -> Result<Outcome> {
    let model = GroupModel::new(a.model);
    let src = a.f.clone().unwrap_or_else(|| default_field(a.model).to_string());
    let f: ScalarField = parse_field(&src, a.model)?;
    let mut table = Table::new(&["index", "gamma_u", "zu_sq", "du_dt", "margin", "sigma", "threshold", "passed"]);
    let (form, form_name, tolerance) = match (a.route, a.model.rho() > 0.0) {
        (Route::Mc, true) => (corollary24_form(a.alpha, model.rho, a.t)?, "corollary24_form", Tolerance::Sigmas(3.0)),
        (Route::Mc, false) => (corollary22_form(a.alpha, model.rho, a.t)?, "corollary22_form", Tolerance::Sigmas(3.0)),
        (Route::Grid, _) => (corollary22_form(a.alpha, 0.0, a.t)?, "corollary22_form", Tolerance::Budget),
    };
    let n_points = a.points.unwrap_or(match a.route {
        Route::Grid => 50,
        Route::Mc => 4,
    });
    let mut reports = Vec::new();
    match a.route {
        Route::Grid => {
            let cfg = GridConfig::default();
            let f0 = GridFunction::from_fn(&cfg, |x, y, z| f.value(&heisenberg_coords([x, y, z])))?;
            let p = heisenberg_grid_solve(&f0, a.t, &cfg)?;
            let shape = cfg.shape()?;
            for node in sample_interior_nodes(&shape, n_points, [2.0, 2.0, 3.0], a.seed) {
                let d = grid_log_derivatives(&p, node, 0.0)?;
                reports.push((d, verify_liyau(&form, &d, tolerance)?));
            }
        }
        Route::Mc => {
            let cfg = DiffusionConfig {
                step: a.step,
                paths: a.paths,
                seed: a.seed,
                ..Default::default()
            };
            for x in suite_points(&model, a.seed, n_points) {
                let d = estimate_log_derivatives(&model, &x, &f, a.t, &cfg, a.eps)?;
                reports.push((d, verify_liyau(&form, &d, tolerance)?));
            }
        }
    }
    let passed = reports.iter().all(|r| r.1.passed);
    let min_margin = reports.iter().map(|r| r.1.margin).fold(f64::INFINITY, f64::min);
    for (i, (d, r)) in reports.iter().enumerate() {
        table.push([
            i.to_string(),
            num(d.gamma_u),
            num(d.zu_sq),
            num(d.du_dt),
            num(r.margin),
            num(r.sigma),
            num(r.threshold),
            r.passed.to_string(),
        ]);
    }
    let json = json!({
        "command": "check-liyau",
        "model": a.model,
        "route": a.route.name(),
        "f": src,
        "t": a.t,
        "alpha": a.alpha,
        "form_name": form_name,
        "form": form_json(&form),
        "tolerance": tolerance,
        "points": reports.iter().map(|(d, r)| json!({
            "gamma_u": d.gamma_u,
            "zu_sq": d.zu_sq,
            "du_dt": d.du_dt,
            "margin": r.margin,
            "sigma": r.sigma,
            "threshold": r.threshold,
            "passed": r.passed,
        })).collect::<Vec<_>>(),
        "min_margin": min_margin,
        "failures": reports.iter().filter(|r| !r.1.passed).count(),
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: format!("Li-Yau margin, {} route, t = {}", a.route.name(), a.t),
            x: "index".into(),
            ys: vec!["margin".into(), "threshold".into()],
            log_y: false,
        }),
        passed,
    })
}

pub fn optimize_v(a: &OptimizeVArgs) -> Result<Outcome> {
    if a.rho > 0.0 {
        return decay_job(a);
    }
    let cfg = QuadConfig::default();
    let mut rows = Vec::new();
    let mut checks_ok = true;
    for &eps in &FAMILY_EPS {
        for &gamma in &FAMILY_GAMMA {
            let v = VProfile::parametric(eps, gamma)?;
            let cf = family_closed_forms(eps, gamma)?;
            let q = v.functionals(&cfg)?;
            let constraint = v.constraint_integral(&cfg)?;
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
            let gaps = [
                rel(v.lambda().unwrap_or(f64::NAN), cf.lambda),
                rel(q.alpha, cf.alpha),
                rel(q.beta, cf.beta),
                rel(q.beta - q.alpha * q.alpha, cf.beta_minus_alpha_sq),
            ];
            let ok = (constraint - 1.0).abs() <= CONSTRAINT_TOL
                && gaps.iter().all(|g| *g <= COEFF_TOL)
                && q.beta_margin() > 0.0
                && q.alpha_margin() > 0.0;
            checks_ok &= ok;
            rows.push(json!({
                "eps": eps,
                "gamma": gamma,
                "constraint": constraint,
                "lambda": cf.lambda,
                "alpha": q.alpha,
                "alpha_closed": cf.alpha,
                "beta": q.beta,
                "beta_closed": cf.beta,
                "beta_minus_alpha_sq": q.beta - q.alpha * q.alpha,
                "beta_minus_alpha_sq_closed": cf.beta_minus_alpha_sq,
                "beta_minus_alpha_sq_displayed": cf.beta_minus_alpha_sq_displayed,
                "max_relative_gap": gaps.iter().copied().fold(0.0, f64::max),
                "beta_margin": q.beta_margin(),
                "alpha_margin": q.alpha_margin(),
                "c": q.best_constant(),
                "passed": ok,
            }));
        }
    }
    let search = SearchConfig {
        eps_points: a.eps_points,
        gamma_points: a.gamma_points,
        eps_min: a.eps_min,
        grid_nodes: a.grid_nodes,
        grid_sweeps: match a.mode {
            OptimizeMode::FamilyScan => 0,
            OptimizeMode::GridSearch => a.grid_sweeps,
        },
    };
    let best = best_c_rho0(&search)?;
    let c_ok = best.violations == 0 && best.min_evaluated > 2.0;
    let passed = checks_ok && c_ok;
    let mut table = Table::new(&["stage", "index", "eps", "gamma", "c"]);
    for r in &best.trace {
        table.push([r.stage.to_string(), r.index.to_string(), num(r.eps), num(r.gamma), num(r.c)]);
    }
    let json = json!({
        "command": "optimize-v",
        "mode": a.mode.name(),
        "rho": a.rho,
        "functionals": rows,
        "best_constant": {
            "c_min": best.c_min,
            "profile": best.profile,
            "family_eps": best.family_eps,
            "family_gamma": best.family_gamma,
            "family_c": best.family_c,
            "boundary_hit": best.boundary_hit,
            "evaluated": best.evaluated,
            "min_evaluated": best.min_evaluated,
            "violations": best.violations,
        },
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "C = beta/(4 alpha) along the search".into(),
            x: "index".into(),
            ys: vec!["c".into()],
            log_y: false,
        }),
        passed,
    })
}

fn decay_job(a: &OptimizeVArgs) -> Result<Outcome> {
    let fit = long_time_decay(a.rho, &a.t_grid.0, a.gamma, a.c)?;
    let passed = (fit.slope / fit.expected_slope - 1.0).abs() <= DECAY_REL_TOL;
    let mut table = Table::new(&["t", "eps_upper", "eps_lower", "upper", "lower", "width", "order_ratio"]);
    for r in &fit.rows {
        table.push([
            num(r.t),
            num(r.eps_upper),
            num(r.eps_lower),
            num(r.upper),
            num(r.lower),
            num(r.width),
            num(r.order_ratio),
        ]);
    }
    let json = json!({
        "command": "optimize-v",
        "mode": "decay",
        "rho": a.rho,
        "gamma": a.gamma,
        "c": a.c,
        "rows": fit.rows,
        "slope": fit.slope,
        "slope_se": fit.fit.slope_se,
        "expected_slope": fit.expected_slope,
        "relative_tolerance": DECAY_REL_TOL,
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "width of the time-derivative bounds".into(),
            x: "t".into(),
            ys: vec!["width".into()],
            log_y: true,
        }),
        passed,
    })
}

pub fn spectral_gap(a: &SpectralGapArgs) -> Result<Outcome> {
    let model = GroupModel::su2();
    let src = a.f.clone().unwrap_or_else(|| "u11r".to_string());
    let f = parse_field(&src, ModelKind::Su2)?;
    let cfg = SpectralConfig {
        step: a.step,
        paths: a.paths,
        seed: a.seed,
    };
    let est = variance_decay(&model, &f, &a.t_grid.0, &cfg)?;
    let poincare = poincare_check(&model, &f, a.poincare_samples, a.seed)?;
    let gap_ok = est.decay_rate >= GAP_FLOOR;
    let near_half_gap = (est.decay_rate - 1.0).abs() <= HALF_GAP_TOL;
    let passed = gap_ok && poincare.passed;
    let mut table = Table::new(&["t", "covariance", "covariance_se"]);
    for ((t, c), s) in est.t_grid.iter().zip(&est.covariance).zip(&est.covariance_se) {
        table.push([num(*t), num(*c), num(*s)]);
    }
    let json = json!({
        "command": "spectral-gap",
        "f": src,
        "paths": a.paths,
        "seed": a.seed,
        "step": a.step,
        "t_grid": est.t_grid,
        "covariance": est.covariance,
        "covariance_se": est.covariance_se,
        "variance": est.variance,
        "decay_rate": est.decay_rate,
        "decay_rate_ci": [est.ci.0, est.ci.1],
        "gap_floor": GAP_FLOOR,
        "near_half_gap": near_half_gap,
        "half_gap_tolerance": HALF_GAP_TOL,
        "poincare": poincare,
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "variance decay of P_t f".into(),
            x: "t".into(),
            ys: vec!["covariance".into()],
            log_y: true,
        }),
        passed,
    })
}

pub fn parse_point(spec: &str, kind: ModelKind) -> std::result::Result<GroupElement, String> {
    let model = GroupModel::new(kind);
    let nums = |s: &str| -> std::result::Result<Vec<f64>, String> {
        s.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad number `{v}` in `{spec}`")))
            .collect()
    };
    if spec == "identity" {
        return Ok(model.identity());
    }
    if let Some(rest) = spec.strip_prefix("exp:") {
        let v = nums(rest)?;
        let [x, y, z] = v[..] else {
            return Err(format!("`exp:` needs three coefficients, got {}", v.len()));
        };
        return Ok(model.exp(subelliptic::AlgebraElement::new(x, y, z)));
    }
    if let Some(rest) = spec.strip_prefix("entries:") {
        let v = nums(rest)?;
        let free = kind.free_coords();
        if v.len() != free.len() {
            return Err(format!("`entries:` needs {} values for {kind}, got {}", free.len(), v.len()));
        }
        let mut e = model.identity().entries;
        for (slot, val) in free.iter().zip(&v) {
            e[*slot] = *val;
        }
        let g = GroupElement::from_entries(kind, e);
        if g.constraint_defect() > 1e-9 {
            return Err(format!("`{spec}` is not a point of {kind}"));
        }
        return Ok(g);
    }
    Err(format!("point `{spec}` must be `identity`, `exp:a,b,c` or `entries:...`"))
}

pub fn cc_distance_job(a: &CcDistanceArgs, x: GroupElement, y: GroupElement) -> Result<Outcome> {
    let model = GroupModel::new(a.model);
    let cfg = PathConfig {
        controls: a.controls,
        starts: a.starts,
        seed: a.seed,
        ..Default::default()
    };
    let (d, path) = cc_distance(&x, &y, &model, &cfg)?;
    let mut buf = Vec::new();
    path.write_csv(&model, &mut buf).expect("in-memory write");
    let text = String::from_utf8(buf).expect("utf8");
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or_default().split(',').collect();
    let mut table = Table::new(&header);
    for l in lines {
        table.push(l.split(',').map(str::to_string));
    }
    let json = json!({
        "command": "cc-distance",
        "model": a.model,
        "x": a.x,
        "y": a.y,
        "distance": d,
        "residual": path.residual,
        "controls": path.controls,
        "endpoint": path.endpoint.coords(),
        "passed": true,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "horizontal controls".into(),
            x: "time".into(),
            ys: vec!["u1".into(), "u2".into()],
            log_y: false,
        }),
        passed: true,
    })
}

pub fn diameter(a: &DiameterArgs) -> Result<Outcome> {
    let model = GroupModel::su2();
    let cfg = PathConfig {
        controls: a.controls,
        seed: a.seed,
        ..Default::default()
    };
    let base = diameter_probe(&model, a.n_pairs, &cfg, a.seed)?;
    let refined = if a.refine {
        let fine = PathConfig {
            controls: 2 * a.controls,
            ..cfg
        };
        Some(diameter_probe(&model, a.n_pairs, &fine, a.seed)?)
    } else {
        None
    };
    let stability = refined.as_ref().map(|r| (r.max - base.max).abs() / base.max);
    let passed = stability.is_none_or(|s| s <= REFINE_TOL);
    let mut header = vec!["pair", "distance"];
    if refined.is_some() {
        header.push("distance_refined");
    }
    let mut table = Table::new(&header);
    for (i, d) in base.distances.iter().enumerate() {
        let mut row = vec![i.to_string(), num(*d)];
        if let Some(r) = &refined {
            row.push(num(r.distances[i]));
        }
        table.push(row);
    }
    let summary = |r: &subelliptic::geometry::DiameterReport| {
        json!({
            "controls": r.controls,
            "max": r.max,
            "mean": r.mean,
            "min": r.min,
            "max_residual": r.max_residual,
            "distances": r.distances,
        })
    };
    let json = json!({
        "command": "diameter",
        "n_pairs": a.n_pairs,
        "seed": a.seed,
        "base": summary(&base),
        "refined": refined.as_ref().map(summary),
        "relative_change": stability,
        "tolerance": REFINE_TOL,
        "passed": passed,
    });
    let mut ys = vec!["distance".to_string()];
    if refined.is_some() {
        ys.push("distance_refined".into());
    }
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "distances between Haar pairs".into(),
            x: "pair".into(),
            ys,
            log_y: false,
        }),
        passed,
    })
}

pub fn short_time(a: &ShortTimeArgs) -> Result<Outcome> {
    let cfg = ShortTimeConfig {
        paths: a.paths,
        t_min: a.t_min,
        t_max: a.t_max,
        n_times: a.n_times,
        step: a.step,
        seed: a.seed,
        pilot_paths: a.pilot_paths,
    };
    let u = ultracontractivity_probe(&cfg)?;
    let st = &u.short_time;
    let passed = st.slope >= SHORT_TIME_WINDOW.0 && st.slope <= SHORT_TIME_WINDOW.1;
    let mut table = Table::new(&["t", "density", "density_se"]);
    for ((t, d), s) in st.times.iter().zip(&st.density).zip(&st.density_se) {
        table.push([num(*t), num(*d), num(*s)]);
    }
    let json = json!({
        "command": "short-time",
        "config": cfg,
        "times": st.times,
        "density": st.density,
        "density_se": st.density_se,
        "slope": st.slope,
        "slope_ci": [st.ci.0, st.ci.1],
        "window": [SHORT_TIME_WINDOW.0, SHORT_TIME_WINDOW.1],
        "ultracontractivity": {
            "a": u.a,
            "c": u.c,
            "c_ci": [u.c_ci.0, u.c_ci.1],
            "residual_rms": u.residual_rms,
        },
        "passed": passed,
    });
    Ok(Outcome {
        json,
        table,
        plot: Some(PlotSpec {
            title: "on-diagonal density estimate".into(),
            x: "t".into(),
            ys: vec!["density".into()],
            log_y: true,
        }),
        passed,
    })
}
