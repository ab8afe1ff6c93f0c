//! Worked values and brute-force oracles for the public API.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use genosc::algebra::{op_m, op_n, su11_labels, su2_triplet, OperatorBasis};
use genosc::interbasis::{v_coeff, w_coeff, w_matrix, Route};
use genosc::model::{
    degeneracy, energy, psi_1d, psi_at, separation_a, BasisState, Branch, CartesianState, CylindricalState,
    PolarState, SphericalState, SystemParams,
};
use genosc::special::{hahn, hermite, hyp3f2_terminating, jacobi, laguerre, log_gamma, make_rule, RuleKind};
use genosc::verify::{draw_params, run_suite, Suite, SuiteConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn plus(omega: f64, k: &[f64]) -> SystemParams {
    SystemParams::plus(omega, k).unwrap()
}

/// `ln Γ(x)` by upward shift and the Stirling series.
fn ln_gamma_stirling(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 30.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Overlap of two states of one level by a tensor Gauss–Laguerre rule in
/// `t = Ωx²` on each axis.
fn overlap(p: &SystemParams, a: &BasisState, b: &BasisState) -> f64 {
    let n = a.principal();
    let rules: Vec<_> = (0..p.dim()).map(|ax| make_rule(RuleKind::Laguerre { nu: p.nu(ax) }, n + 3).unwrap()).collect();
    let sizes: Vec<usize> = rules.iter().map(|r| r.nodes.len()).collect();
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|mut flat| {
            let mut w = 1.0;
            let mut x = Vec::new();
            for ax in 0..p.dim() {
                let i = flat % sizes[ax];
                flat /= sizes[ax];
                let t = rules[ax].nodes[i];
                w *= rules[ax].weights[i] * (t - (p.nu(ax) + 0.5) * t.ln()).exp() / p.omega().sqrt();
                x.push((t / p.omega()).sqrt());
            }
            w * psi_at(p, a, &x).unwrap() * psi_at(p, b, &x).unwrap()
        })
        .sum()
}

#[test]
fn special_function_values() {
    assert_relative_eq!(log_gamma(7.3).unwrap(), ln_gamma_stirling(7.3), max_relative = 1e-14);
    assert_relative_eq!(log_gamma(0.5).unwrap(), 0.5 * std::f64::consts::PI.ln(), max_relative = 1e-14);
    assert_abs_diff_eq!(laguerre(2, 0.0, 1.0).unwrap(), -0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(jacobi(1, 0.0, 0.0, 0.3).unwrap(), 0.3, epsilon = 1e-15);
    assert_relative_eq!(hermite(4, 0.5), 16.0 * 0.0625 - 48.0 * 0.25 + 12.0, max_relative = 1e-15);
    assert_abs_diff_eq!(hyp3f2_terminating([-1.0, 2.0, 3.0], [4.0, 5.0]).unwrap(), 0.7, epsilon = 1e-15);
    assert_abs_diff_eq!(hyp3f2_terminating([-2.0, 1.0, 1.0], [1.0, 1.0]).unwrap(), 0.0, epsilon = 1e-15);
    // −(5)₁(1.7)₁ · (1 − 3·2/(1.7·5))
    assert_abs_diff_eq!(hahn(1, 0.3, 0.7, 2.0, 6).unwrap(), -2.5, epsilon = 1e-13);
}

#[test]
fn jacobi_rule_mass() {
    let rule = make_rule(RuleKind::Jacobi { alpha: 0.3, beta: 0.7 }, 8).unwrap();
    let mass = 4.0 * (ln_gamma_stirling(1.3) + ln_gamma_stirling(1.7) - ln_gamma_stirling(3.0)).exp();
    assert_relative_eq!(rule.weight_sum(), mass, max_relative = 1e-12);
    assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
    assert!(rule.nodes.iter().all(|&x| x > -1.0 && x < 1.0));
}

#[test]
fn one_dimensional_values() {
    let p = SystemParams::new(1.0, &[0.5], &[Branch::Plus]).unwrap();
    assert_relative_eq!(psi_1d(&p, 0, 0, 1.0).unwrap(), 0.644_288_365_113_475_1, max_relative = 1e-14);

    // 2∫ψ² dx = 1 with a 64-node rule, k = 0.3 on the minus branch
    let p = SystemParams::new(1.0, &[0.3], &[Branch::Minus]).unwrap();
    let nu = p.nu(0);
    let rule = make_rule(RuleKind::Laguerre { nu }, 64).unwrap();
    let norm = rule.integrate(|t| psi_1d(&p, 0, 1, t.sqrt()).unwrap().powi(2) * (t - (nu + 0.5) * t.ln()).exp());
    assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
}

#[test]
fn spectrum_values() {
    assert_eq!(energy(&plus(1.0, &[0.5, 0.5]), 0), 3.0);
    assert_relative_eq!(energy(&plus(2.0, &[0.3, 0.7]), 1), 10.0, max_relative = 1e-15);
    assert_relative_eq!(energy(&plus(1.0, &[0.3, 0.7, 0.5]), 0), 4.5, max_relative = 1e-15);
    assert_eq!(degeneracy(&plus(1.0, &[0.3, 0.7]), 4).unwrap(), 5);

    assert_relative_eq!(separation_a(&plus(1.0, &[0.3, 0.7]), 1).unwrap(), 4.0, max_relative = 1e-15);
    let half = |s: [Branch; 2]| SystemParams::new(1.0, &[0.5, 0.5], &s).unwrap();
    assert_eq!(separation_a(&half([Branch::Minus, Branch::Minus]), 0).unwrap(), 0.0);
    assert_eq!(separation_a(&half([Branch::Plus, Branch::Minus]), 0).unwrap(), 1.0);
}

#[test]
fn operator_values() {
    let p = plus(1.0, &[0.3, 0.7]);
    assert_relative_eq!(op_n(&p, 0).unwrap().matrix[(0, 0)], -0.2, max_relative = 1e-14);
    let m = op_m(&p, 1, OperatorBasis::Polar).unwrap().matrix;
    assert_relative_eq!(m[(1, 1)], 4.0, max_relative = 1e-14);
    let [_, lp, _] = su2_triplet(1);
    assert_eq!(lp.matrix[(0, 1)], 1.0);
    let lab = su11_labels(&plus(1.0, &[0.5, 0.5]), &CartesianState::new(&[0, 0])).unwrap();
    assert_eq!(lab.casimir[0], -0.1875);
}

#[test]
fn ground_coefficient_is_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = draw_params(&mut rng, 3);
        for r in Route::ALL {
            assert_abs_diff_eq!(w_coeff(&p, 0, 0, 0, r).unwrap(), 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(v_coeff(&p, 0, 0, 0, 0, r).unwrap(), 1.0, epsilon = 1e-13);
        }
    }
}

#[test]
fn w_is_the_overlap_matrix_for_the_ordinary_oscillator() {
    let p = plus(1.4, &[0.5, 0.5]);
    for n in 0..=6 {
        let w = w_matrix(&p, n, Route::Cgc).unwrap();
        for n1 in 0..=n {
            for m in 0..=n {
                let cart = BasisState::Cartesian(CartesianState::new(&[n1, n - n1]));
                let pol = BasisState::Polar(PolarState { n_rho: n - m, m });
                assert_abs_diff_eq!(w.get(n1, m), overlap(&p, &cart, &pol), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn v_is_the_cylindrical_spherical_overlap() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..30 {
        let p = draw_params(&mut rng, 3);
        for n in 0..=3 {
            for m in 0..=n {
                for q in 0..=n - m {
                    for n3 in 0..=n - m {
                        let n_rho = n - m - n3;
                        let cyl = BasisState::Cylindrical(CylindricalState { n_rho, m, n3 });
                        let sph = BasisState::Spherical(SphericalState { n_r: n - m - q, q, m });
                        let v = v_coeff(&p, n_rho, n3, q, m, Route::default()).unwrap();
                        assert_abs_diff_eq!(v, overlap(&p, &cyl, &sph), epsilon = 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn suite_examples() {
    let routes = run_suite(Suite::Routes, &SuiteConfig::seeded(42)).unwrap();
    assert!(routes.pass);
    assert!(routes.worst("routes/four-route agreement").unwrap() < 1e-10);

    let cfg = SuiteConfig { params: Some(plus(1.0, &[0.5, 0.5])), ..SuiteConfig::seeded(42) };
    let norm = run_suite(Suite::Normalization, &cfg).unwrap();
    assert!(norm.pass);
    assert!(norm.worst("normalization/hermite limit").unwrap() < 1e-12);

    let eig = run_suite(Suite::Eigenresidual, &SuiteConfig::seeded(42)).unwrap();
    assert!(eig.worst("eigenresidual/Spherical/D=3").unwrap() < 1e-5);

    let a = run_suite(Suite::Algebra, &SuiteConfig::seeded(5)).unwrap();
    let b = run_suite(Suite::Algebra, &SuiteConfig::seeded(5)).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(matches!("nope".parse::<Suite>(), Err(genosc::Error::Usage(_))));
}
