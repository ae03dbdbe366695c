use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subelliptic::field::random_polynomial;
use subelliptic::gamma::{gamma2_lower_bound_check, verify_gamma2};
use subelliptic::liyau::{coefficients_from_b, corollary22_sharp_form, BProfile};
use subelliptic::quadrature::QuadConfig;
use subelliptic::vprofile::VProfile;
use subelliptic::{AlgebraElement, GroupModel, ModelKind, ScalarField};

fn kind() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::Heisenberg), Just(ModelKind::Su2), Just(ModelKind::Sl2)]
}

fn algebra() -> impl Strategy<Value = AlgebraElement> {
    (-1.5..1.5f64, -1.5..1.5f64, -1.5..1.5f64).prop_map(|(x, y, z)| AlgebraElement::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_stay_on_the_group(kind in kind(), a in algebra(), b in algebra()) {
        let m = GroupModel::new(kind);
        let (g, h) = (m.exp(a), m.exp(b));
        let gh = g.multiply(&h).unwrap();
        prop_assert!(gh.constraint_defect() < 1e-12);
        let back = gh.multiply(&h.inverse()).unwrap();
        prop_assert!(back.distance_max(&g) < 1e-10);
    }

    #[test]
    fn one_parameter_subgroups(kind in kind(), a in algebra(), s in -1.0..1.0f64, r in -1.0..1.0f64) {
        let m = GroupModel::new(kind);
        let lhs = m.exp(a.scale(s)).multiply(&m.exp(a.scale(r))).unwrap();
        prop_assert!(lhs.distance_max(&m.exp(a.scale(s + r))) < 1e-10);
    }

    #[test]
    fn gamma2_identity_on_random_polynomials(kind in kind(), seed in any::<u64>(), degree in 1u32..=4) {
        let m = GroupModel::new(kind);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = ScalarField::polynomial(random_polynomial(&mut rng, kind.free_coords(), degree, 1.0));
        let pts = [m.random_element(seed), m.random_element(seed ^ 1)];
        let r = verify_gamma2(&m, std::slice::from_ref(&f), &pts).unwrap();
        prop_assert!(r.max_relative_gap <= 1e-8);
        for b in gamma2_lower_bound_check(&f, &m, &[0.1, 1.0, 10.0], &pts).unwrap() {
            prop_assert!(b.min_margin >= -1e-9);
        }
    }

    #[test]
    fn power_profile_quadrature_matches_integrated_form(
        alpha in 2.2..12.0f64,
        t in 0.05..20.0f64,
        rho in -2.0..2.0f64,
    ) {
        let b = BProfile::power(alpha, t).unwrap();
        let q = coefficients_from_b(&b, rho, &QuadConfig::default()).unwrap();
        let exact = corollary22_sharp_form(alpha, rho, t).unwrap();
        prop_assert!(q.form.max_relative_gap(&exact) <= 1e-6, "{:?} vs {:?}", q.form, exact);
    }

    #[test]
    fn family_is_normalized(eps in 1e-4..0.99f64, gamma in 2.501..2.999f64) {
        let v = VProfile::parametric(eps, gamma).unwrap();
        let c = v.constraint_integral(&QuadConfig::default()).unwrap();
        prop_assert!((c - 1.0).abs() <= 1e-8);
        let f = v.functionals(&QuadConfig::default()).unwrap();
        prop_assert!(f.beta_margin() > 0.0 && f.best_constant() > 2.0);
    }
}
