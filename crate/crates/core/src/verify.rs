//! Seeded verification suites over the whole library.
//!
//! Every suite draws its parameters from its own seeded stream, so a suite
//! run alone and the same suite inside `all` see identical draws.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    check_limits_and_ladders, check_quadratic_algebra, chebyshev_polar, m_differential,
    n_differential, op_m, op_n, op_t, p_triplet, su11_labels, su11_lowering, su2_triplet,
    t_differential, OperatorBasis,
};
use crate::error::{Error, Result};
use crate::interbasis::{expand, expansion_terms, v_matrix, w_kappa, w_matrix, Route};
use crate::model::{
    basis_states, bases_for, cartesian_states, degeneracy, energy, phi_angular, polar_from_cartesian,
    potential, psi_1d, psi_at, psi_polar, radial_polar, radial_spherical, separation_a, separation_j,
    theta_spherical, Basis, BasisState, Branch, CartesianState, PolarState, SystemParams,
};
use crate::report::{CaseRecord, SuiteReport};
use crate::special::{
    hermite, hyp3f2_terminating, jacobi, laguerre, ln_gamma, make_rule, QuadratureRule, RuleKind,
};
use crate::stencil;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Normalization,
    Orthogonality,
    Eigenresidual,
    Routes,
    Expansion,
    Algebra,
    Limits,
    All,
}

impl Suite {
    pub const PARTS: [Suite; 7] = [
        Suite::Normalization,
        Suite::Orthogonality,
        Suite::Eigenresidual,
        Suite::Routes,
        Suite::Expansion,
        Suite::Algebra,
        Suite::Limits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Orthogonality => "orthogonality",
            Suite::Eigenresidual => "eigenresidual",
            Suite::Routes => "routes",
            Suite::Expansion => "expansion",
            Suite::Algebra => "algebra",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }

    fn stream(self) -> u64 {
        Suite::PARTS.iter().position(|&s| s == self).map_or(0, |i| i as u64 + 1)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Suite::PARTS
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown suite '{s}' (expected one of normalization, orthogonality, eigenresidual, routes, expansion, algebra, limits, all)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Quadrature, orthogonality and route agreement.
    pub quadrature: f64,
    /// Matrix identities of the invariance algebra.
    pub algebra: f64,
    /// Pointwise expansion residuals.
    pub expansion: f64,
    /// Finite-difference residuals.
    pub stencil: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quadrature: 1e-10, algebra: 1e-9, expansion: 1e-8, stencil: 1e-5 }
    }
}

/// Inputs of [`run_suite`]. With `params` set, that system replaces the
/// random draws wherever its dimension fits.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub params: Option<SystemParams>,
    /// Overrides the per-suite number of random draws.
    pub draws: Option<usize>,
    pub tolerances: Tolerances,
}

impl SuiteConfig {
    pub fn seeded(seed: u64) -> Self {
        Self { seed, params: None, draws: None, tolerances: Tolerances::default() }
    }
}

/// Open fundamental domains for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    HalfLine,
    Quadrant,
    Octant,
}

impl Domain {
    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            1 => Ok(Domain::HalfLine),
            2 => Ok(Domain::Quadrant),
            3 => Ok(Domain::Octant),
            _ => Err(Error::Arity(format!("no sampling domain in dimension {dim}"))),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Domain::HalfLine => 1,
            Domain::Quadrant => 2,
            Domain::Octant => 3,
        }
    }
}

/// Side of the sampling box `[margin, margin + SAMPLE_EXTENT]^D`.
pub const SAMPLE_EXTENT: f64 = 2.5;

const HALTON_BASES: [u64; 3] = [2, 3, 5];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Quasi-uniform points of a Halton sequence with a seeded random shift,
/// every coordinate in `[margin, margin + SAMPLE_EXTENT]`, so at least
/// `margin` from every axis.
pub fn sample_points(domain: Domain, count: usize, seed: u64, margin: f64) -> Result<Vec<Vec<f64>>> {
    if !(margin > 0.0) || !margin.is_finite() {
        return Err(Error::Usage(format!("sampling margin must be positive, got {margin}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..domain.dim()).map(|_| rng.random::<f64>()).collect();
    Ok((0..count as u64)
        .map(|i| {
            (0..domain.dim())
                .map(|d| {
                    let u = (radical_inverse(i + 1, HALTON_BASES[d]) + shift[d]).fract();
                    margin + SAMPLE_EXTENT * u
                })
                .collect()
        })
        .collect())
}

/// One random system: `Ω ∈ (0.5, 3)`, `k_a ∈ (0.05, 1.2)`, `σ_a` uniform
/// over the signs the branch rule admits.
pub fn draw_params<R: Rng>(rng: &mut R, dim: usize) -> SystemParams {
    let omega = rng.random_range(0.5..3.0);
    let k: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..1.2)).collect();
    let signs: Vec<Branch> = k
        .iter()
        .map(|&ka| if ka <= 0.5 && rng.random::<bool>() { Branch::Minus } else { Branch::Plus })
        .collect();
    SystemParams::new(omega, &k, &signs).expect("draws respect the branch rule")
}

struct Run<'a> {
    cfg: &'a SuiteConfig,
    tol: Tolerances,
    cases: Vec<CaseRecord>,
    draws: Vec<SystemParams>,
}

impl<'a> Run<'a> {
    fn new(cfg: &'a SuiteConfig) -> Self {
        Self { cfg, tol: cfg.tolerances, cases: Vec::new(), draws: Vec::new() }
    }

    fn systems(&mut self, suite: Suite, dim: usize, default_count: usize) -> Vec<SystemParams> {
        let out = match &self.cfg.params {
            Some(p) if p.dim() == dim => vec![p.clone()],
            Some(_) => Vec::new(),
            None => {
                let seed = self.cfg.seed ^ (suite.stream() << 56) ^ ((dim as u64) << 48);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let count = self.cfg.draws.unwrap_or(default_count);
                (0..count).map(|_| draw_params(&mut rng, dim)).collect()
            }
        };
        for p in &out {
            if !self.draws.contains(p) {
                self.draws.push(p.clone());
            }
        }
        out
    }

    fn point_seed(&self, suite: Suite, salt: u64) -> u64 {
        self.cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (suite.stream() << 40) ^ salt
    }

    fn record(&mut self, identity: String, n: usize, params: Option<&SystemParams>, residual: f64, tol: f64) {
        self.cases.push(CaseRecord::new(identity, n, params, residual, tol));
    }

    /// Records a failed case instead of aborting the suite.
    fn guard<T>(&mut self, identity: &str, params: Option<&SystemParams>, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(format!("{identity}: error {e}"), 0, params, f64::NAN, 0.0);
                None
            }
        }
    }
}

const QN_MAX: usize = 8;

/// Gram matrix `G[a, b] = Σ_i w_i f_a(t_i) f_b(t_i)`.
fn gram<F: Fn(usize, f64) -> f64>(rule: &QuadratureRule, count: usize, f: F) -> DMatrix<f64> {
    let values: Vec<Vec<f64>> = rule.nodes.iter().map(|&t| (0..count).map(|a| f(a, t)).collect()).collect();
    DMatrix::from_fn(count, count, |a, b| {
        values.iter().zip(&rule.weights).map(|(v, &w)| w * v[a] * v[b]).sum()
    })
}

/// Gram matrices of every separated factor under its measure.
fn factor_grams(p: &SystemParams) -> Result<Vec<(String, DMatrix<f64>)>> {
    let count = QN_MAX + 1;
    let nodes = QN_MAX + 4;
    let omega = p.omega();
    let mut out = Vec::new();

    // 2∫ψ_aψ_b dx, t = Ωx²
    for axis in 0..p.dim() {
        let nu = p.nu(axis);
        let rule = make_rule(RuleKind::Laguerre { nu }, nodes)?;
        let g = gram(&rule, count, |n, t| {
            let x = (t / omega).sqrt();
            psi_1d(p, axis, n, x).unwrap_or(f64::NAN) * (0.5 * t - 0.5 * (nu + 0.5) * t.ln()).exp() / omega.powf(0.25)
        });
        out.push((format!("psi_1d axis {axis}"), g));
    }
    if p.dim() < 2 {
        return Ok(out);
    }

    // 4∫Φ_aΦ_b dφ, x = cos 2φ
    let (nu1, nu2) = (p.nu(0), p.nu(1));
    let rule = make_rule(RuleKind::Jacobi { alpha: nu2, beta: nu1 }, nodes)?;
    let g = gram(&rule, count, |m, x| {
        let phi = 0.5 * x.acos();
        let (s, c) = phi.sin_cos();
        let w = (s * c).sqrt() * (1.0 - x).powf(0.5 * nu2) * (1.0 + x).powf(0.5 * nu1);
        phi_angular(p, m, phi).unwrap_or(f64::NAN) / w
    });
    out.push(("phi".into(), g));

    // ∫R_aR_b ρdρ, t = Ωρ², per m
    for m in 0..=QN_MAX {
        let a = separation_a(p, m)?;
        let rule = make_rule(RuleKind::Laguerre { nu: a }, nodes)?;
        let g = gram(&rule, count, |nr, t| {
            let rho = (t / omega).sqrt();
            radial_polar(p, nr, m, rho).unwrap_or(f64::NAN) * (0.5 * t - 0.5 * a * t.ln()).exp() / (2.0 * omega).sqrt()
        });
        out.push((format!("radial_polar m={m}"), g));
    }
    if p.dim() < 3 {
        return Ok(out);
    }

    // 2∫Θ_aΘ_b sinθ dθ, x = cos 2θ, per m
    let nu3 = p.nu(2);
    for m in 0..=QN_MAX {
        let a = separation_a(p, m)?;
        let rule = make_rule(RuleKind::Jacobi { alpha: a, beta: nu3 }, nodes)?;
        let g = gram(&rule, count, |q, x| {
            let theta = 0.5 * x.acos();
            let w = (2.0 * theta.cos()).sqrt() * (1.0 - x).powf(0.5 * a) * (1.0 + x).powf(0.5 * nu3);
            theta_spherical(p, q, m, theta).unwrap_or(f64::NAN) / w
        });
        out.push((format!("theta m={m}"), g));
    }

    // ∫R_aR_b r²dr, t = Ωr², per (q, m)
    for m in 0..=QN_MAX {
        for q in 0..=QN_MAX - m {
            let j = separation_j(p, q, m)?;
            let rule = make_rule(RuleKind::Laguerre { nu: j + 0.5 }, nodes)?;
            let g = gram(&rule, count, |nr, t| {
                let r = (t / omega).sqrt();
                radial_spherical(p, nr, q, m, r).unwrap_or(f64::NAN) * (0.5 * t - 0.5 * j * t.ln()).exp()
                    / (2.0 * omega.powf(1.5)).sqrt()
            });
            out.push((format!("radial_spherical q={q} m={m}"), g));
        }
    }
    Ok(out)
}

fn diag_defect(g: &DMatrix<f64>) -> f64 {
    (0..g.nrows()).map(|i| (g[(i, i)] - 1.0).abs()).fold(0.0, f64::max)
}

fn offdiag_defect(g: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            if i != j {
                worst = worst.max(g[(i, j)].abs());
            }
        }
    }
    worst
}

fn gram_suite(run: &mut Run, suite: Suite) {
    let tol = run.tol.quadrature;
    let diagonal = suite == Suite::Normalization;
    let mut systems = Vec::new();
    for dim in 1..=3 {
        systems.extend(run.systems(suite, dim, 3));
    }
    if diagonal && run.cfg.params.is_none() {
        // ordinary-oscillator limit on every branch
        for signs in [[Branch::Plus, Branch::Plus], [Branch::Minus, Branch::Minus], [Branch::Plus, Branch::Minus]] {
            let p = SystemParams::new(1.0, &[0.5, 0.5], &signs).expect("valid");
            run.draws.push(p.clone());
            systems.push(p);
        }
    }
    for (i, p) in systems.iter().enumerate() {
        let Some(grams) = run.guard(suite.name(), Some(p), factor_grams(p)) else { continue };
        let (mut worst, mut what) = (0.0f64, String::new());
        for (name, g) in &grams {
            let d = if diagonal { diag_defect(g) } else { offdiag_defect(g) };
            if !(d <= worst) {
                worst = d;
                what = name.clone();
            }
        }
        let label = if diagonal { "unit norm" } else { "orthogonal" };
        run.record(format!("{}/factors {label}/D={}/draw {i:02} (worst {what})", suite.name(), p.dim()), QN_MAX, Some(p), worst, tol);

        if p.dim() >= 2 {
            // 4∬ Ψ_a Ψ_b dx dy by a tensor rule
            let nodes = QN_MAX + 4;
            let rules: Option<Vec<QuadratureRule>> =
                (0..2).map(|a| make_rule(RuleKind::Laguerre { nu: p.nu(a) }, nodes).ok()).collect();
            let Some(rules) = rules else { continue };
            let states: Vec<CartesianState> = (0..=4).flat_map(|n| cartesian_states(2, n)).collect();
            let mut g = DMatrix::zeros(states.len(), states.len());
            for (ix, &tx) in rules[0].nodes.iter().enumerate() {
                for (iy, &ty) in rules[1].nodes.iter().enumerate() {
                    let w = rules[0].weights[ix] * rules[1].weights[iy];
                    let x = (tx / p.omega()).sqrt();
                    let y = (ty / p.omega()).sqrt();
                    let scale = (0.5 * (tx + ty) - 0.5 * (p.nu(0) + 0.5) * tx.ln() - 0.5 * (p.nu(1) + 0.5) * ty.ln()).exp()
                        / p.omega().sqrt();
                    let vals: Vec<f64> = states
                        .iter()
                        .map(|s| crate::model::psi_cartesian(p, &CartesianState::new(&s.n[..2]), &[x, y]).unwrap_or(f64::NAN) * scale)
                        .collect();
                    for a in 0..states.len() {
                        for b in 0..states.len() {
                            g[(a, b)] += w * vals[a] * vals[b];
                        }
                    }
                }
            }
            let d = if diagonal { diag_defect(&g) } else { offdiag_defect(&g) };
            run.record(format!("{}/cartesian product {label}/draw {i:02}", suite.name()), 4, Some(p), d, tol);
        }
    }

    if diagonal {
        kernel_checks(run);
        hermite_checks(run, suite);
    }
}

/// Invariants of the polynomial, hypergeometric and quadrature kernels.
fn jacobi_u(n: usize, a: f64, b: f64, x: f64) -> f64 {
    jacobi(n, a, b, x).unwrap_or(f64::NAN)
}

fn kernel_checks(run: &mut Run) {
    let mut rng = ChaCha8Rng::seed_from_u64(run.point_seed(Suite::Normalization, 0x6b));
    let tol = 1e-12;

    // recurrences against explicit polynomials, n ≤ 4
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x: f64 = rng.random_range(-1.0..1.0);
        let t: f64 = rng.random_range(0.0..6.0);
        let nu: f64 = rng.random_range(-0.9..3.0);
        let (a, b): (f64, f64) = (rng.random_range(-0.9..3.0), rng.random_range(-0.9..3.0));
        for n in 0..=4usize {
            let lag = (0..=n)
                .map(|i| {
                    let c = (ln_gamma(n as f64 + nu + 1.0) - ln_gamma(i as f64 + nu + 1.0) - ln_gamma((n - i) as f64 + 1.0)).exp();
                    (if i % 2 == 0 { 1.0 } else { -1.0 }) * c * t.powi(i as i32) / (1..=i).product::<usize>() as f64
                })
                .sum::<f64>();
            let jac = (0..=n)
                .map(|s| {
                    let c1 = (ln_gamma(n as f64 + a + 1.0) - ln_gamma((n - s) as f64 + 1.0) - ln_gamma(s as f64 + a + 1.0)).exp();
                    let c2 = (ln_gamma(n as f64 + b + 1.0) - ln_gamma(s as f64 + 1.0) - ln_gamma((n - s) as f64 + b + 1.0)).exp();
                    c1 * c2 * (0.5 * (x - 1.0)).powi(s as i32) * (0.5 * (x + 1.0)).powi((n - s) as i32)
                })
                .sum::<f64>();
            let herm = [1.0, 2.0 * t, 4.0 * t * t - 2.0, 8.0 * t.powi(3) - 12.0 * t, 16.0 * t.powi(4) - 48.0 * t * t + 12.0][n];
            let rel = |got: f64, want: f64| (got - want).abs() / want.abs().max(1.0);
            worst = worst
                .max(rel(laguerre(n, nu, t).unwrap_or(f64::NAN), lag))
                .max(rel(jacobi(n, a, b, x).unwrap_or(f64::NAN), jac))
                .max(rel(hermite(n, t), herm));
        }
    }
    run.record("normalization/kernels/recurrence vs explicit".into(), 4, None, worst, tol);

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let x: f64 = rng.random_range(-1.0..1.0);
        let (a, b): (f64, f64) = (rng.random_range(-0.9..3.0), rng.random_range(-0.9..3.0));
        for n in 0..=10 {
            let lhs = jacobi(n, a, b, -x).unwrap_or(f64::NAN);
            let rhs = if n % 2 == 0 { 1.0 } else { -1.0 } * jacobi(n, b, a, x).unwrap_or(f64::NAN);
            worst = worst.max((lhs - rhs).abs() / rhs.abs().max(1.0));
        }
    }
    run.record("normalization/kernels/jacobi reflection".into(), 10, None, worst, tol);

    let mut worst = 0.0f64;
    for _ in 0..10 {
        let (a, b): (f64, f64) = (rng.random_range(-0.9..3.0), rng.random_range(-0.9..3.0));
        for nodes in 1..=10usize {
            let Ok(rule) = make_rule(RuleKind::Jacobi { alpha: a, beta: b }, nodes) else {
                worst = f64::NAN;
                continue;
            };
            // ∫ P_a P_b w = δ_ab h_a for a + b < 2·nodes
            let h = |n: usize| {
                if n == 0 {
                    return rule.kind.total_mass();
                }
                let n = n as f64;
                ((a + b + 1.0) * 2f64.ln() - (2.0 * n + a + b + 1.0).ln() + ln_gamma(n + a + 1.0) + ln_gamma(n + b + 1.0)
                    - ln_gamma(n + a + b + 1.0)
                    - ln_gamma(n + 1.0))
                .exp()
            };
            for i in 0..nodes {
                for j in 0..2 * nodes - i {
                    let got = rule.integrate(|x| jacobi_u(i, a, b, x) * jacobi_u(j, a, b, x));
                    let want = if i == j { h(i) } else { 0.0 };
                    worst = worst.max((got - want).abs() / (h(i) * h(j)).sqrt());
                }
            }
        }
    }
    run.record("normalization/kernels/quadrature exactness".into(), 19, None, worst, tol);

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let m = rng.random_range(0..8usize) as f64;
        let a = [-m, rng.random_range(-2.0..4.0), rng.random_range(-2.0..4.0)];
        let b = [rng.random_range(0.2..4.0), rng.random_range(0.2..4.0)];
        let base = hyp3f2_terminating(a, b).unwrap_or(f64::NAN);
        for perm in [[0, 1, 2], [1, 0, 2], [2, 1, 0], [1, 2, 0], [2, 0, 1], [0, 2, 1]] {
            let v = hyp3f2_terminating([a[perm[0]], a[perm[1]], a[perm[2]]], [b[1], b[0]]).unwrap_or(f64::NAN);
            worst = worst.max((v - base).abs() / base.abs().max(1.0));
        }
    }
    run.record("normalization/kernels/3F2 permutation symmetry".into(), 7, None, worst, tol);
}

/// `ψ_n` at `k = ½` against `(−1)^n (Ω/π)^{1/4} H_p(√Ω x) e^{−Ωx²/2} / √(2^p p!)`.
pub fn hermite_limit(omega: f64, branch: Branch, n: usize, x: f64) -> f64 {
    let p = match branch {
        Branch::Plus => 2 * n + 1,
        Branch::Minus => 2 * n,
    };
    let ln_norm = 0.25 * (omega / PI).ln() - 0.5 * (p as f64 * 2f64.ln() + ln_gamma(p as f64 + 1.0));
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * (ln_norm - 0.5 * omega * x * x).exp() * hermite(p, omega.sqrt() * x)
}

fn hermite_checks(run: &mut Run, suite: Suite) {
    let points = sample_points(Domain::HalfLine, 40, run.point_seed(suite, 0x4e), 0.05).expect("valid margin");
    for omega in [1.0, 2.3] {
        for branch in [Branch::Plus, Branch::Minus] {
            let p = SystemParams::new(omega, &[0.5], &[branch]).expect("valid");
            let mut worst = 0.0f64;
            for n in 0..=QN_MAX {
                for pt in &points {
                    let got = psi_1d(&p, 0, n, pt[0]).unwrap_or(f64::NAN);
                    worst = worst.max((got - hermite_limit(omega, branch, n, pt[0])).abs());
                }
            }
            run.record(format!("{}/hermite limit/omega={omega}/sigma={branch}", suite.name()), QN_MAX, Some(&p), worst, 1e-12);
        }
    }
}

/// `|HΨ − EΨ|` over `E · max|Ψ|` on the sample points, `H = −½Δ + V`.
fn schrodinger_residual(p: &SystemParams, state: &BasisState, points: &[Vec<f64>]) -> Result<f64> {
    let e = energy(p, state.principal());
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for pt in points {
        let f = |x: &[f64]| psi_at(p, state, x).unwrap_or(f64::NAN);
        let psi = f(pt);
        let lap = stencil::laplacian(f, pt, stencil::STEP);
        let h_psi = -0.5 * lap + potential(p, pt)? * psi;
        worst = worst.max((h_psi - e * psi).abs());
        scale = scale.max(psi.abs());
    }
    Ok(worst / (e * scale))
}

fn eigenresidual_suite(run: &mut Run) {
    let tol = run.tol.stencil;
    for dim in [2, 3] {
        let systems = run.systems(Suite::Eigenresidual, dim, 2);
        let points = sample_points(Domain::for_dim(dim).expect("2 or 3"), 50, run.point_seed(Suite::Eigenresidual, dim as u64), 0.2)
            .expect("valid margin");
        for (i, p) in systems.iter().enumerate() {
            for &basis in bases_for(dim) {
                let mut worst = 0.0f64;
                for n in 0..=4 {
                    for state in basis_states(dim, basis, n).expect("supported basis") {
                        let r = schrodinger_residual(p, &state, &points).unwrap_or(f64::NAN);
                        worst = if r.is_nan() { f64::NAN } else { worst.max(r) };
                    }
                }
                run.record(format!("eigenresidual/{basis:?}/D={dim}/draw {i:02}"), 4, Some(p), worst, tol);
            }
            // E(n) = Ω(2n + D + Σσk) as an independent formula
            let mut worst = 0.0f64;
            for n in 0..=8 {
                let nu_sum: f64 = p.k().iter().zip(p.signs()).map(|(k, s)| s.sign() * k).sum();
                let formula = p.omega() * (2.0 * n as f64 + dim as f64 + nu_sum);
                worst = worst.max((energy(p, n) - formula).abs());
            }
            run.record(format!("eigenresidual/energy formula/D={dim}/draw {i:02}"), 8, Some(p), worst, 0.0);
        }
    }
}

/// Entry-wise deviation between two `W` matrices, relative to their unit
/// row norm.
fn route_deviation(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn routes_suite(run: &mut Run) {
    let tol = run.tol.quadrature;
    let systems = run.systems(Suite::Routes, 2, 50);
    for (i, p) in systems.iter().enumerate() {
        let (k1, k2) = (p.nu(0), p.nu(1));
        let mut pair = 0.0f64;
        let mut alt = 0.0f64;
        let mut sign_flips = 0usize;
        let mut orth = 0.0f64;
        let mut round_trip = 0.0f64;
        for n in 0..=10 {
            let mats: Result<Vec<DMatrix<f64>>> =
                Route::ALL.iter().map(|&r| w_matrix(p, n, r).map(|m| m.entries)).collect();
            let Some(mats) = run.guard("routes/w", Some(p), mats) else { continue };
            if n <= QN_MAX {
                let main = [0usize, 1, 3, 4];
                for (x, &a) in main.iter().enumerate() {
                    for &b in &main[x + 1..] {
                        pair = pair.max(route_deviation(&mats[a], &mats[b]));
                        for (u, v) in mats[a].iter().zip(mats[b].iter()) {
                            if u.abs() > 1e-8 && u.signum() != v.signum() {
                                sign_flips += 1;
                            }
                        }
                    }
                }
                alt = alt.max(route_deviation(&mats[2], &mats[1]));
            }
            let w = &mats[4];
            let id = DMatrix::<f64>::identity(n + 1, n + 1);
            orth = orth.max((w.transpose() * w - &id).amax());
            round_trip = round_trip.max((w * w.transpose() - &id).amax());
        }
        run.record(format!("routes/four-route agreement/draw {i:02}"), QN_MAX, Some(p), pair, tol);
        run.record(format!("routes/alternate 3F2 vs 3F2/draw {i:02}"), QN_MAX, Some(p), alt, 1e-11);
        run.record(format!("routes/sign agreement/draw {i:02}"), QN_MAX, Some(p), sign_flips as f64, 0.0);
        run.record(format!("routes/W orthogonal/draw {i:02}"), 10, Some(p), orth, tol);
        run.record(format!("routes/forward then inverse/draw {i:02}"), 10, Some(p), round_trip, tol);
        let ground = w_kappa(Route::Integral, k1, k2, 0, 0, 0).map(|v| (v - 1.0).abs()).unwrap_or(f64::NAN);
        run.record(format!("routes/ground coefficient/draw {i:02}"), 0, Some(p), ground, tol);
    }

    for (i, p) in run.systems(Suite::Routes, 3, 10).iter().enumerate() {
        let mut orth = 0.0f64;
        for n in 0..=6 {
            for m in 0..=4 {
                match v_matrix(p, n, m, Route::default()) {
                    Ok(v) => orth = orth.max(v.orthogonality_defect()),
                    Err(_) => orth = f64::NAN,
                }
            }
        }
        run.record(format!("routes/V orthogonal/draw {i:02}"), 6, Some(p), orth, tol);
    }
}

fn completeness(
    p: &SystemParams,
    from: Basis,
    to: Basis,
    nmax: usize,
    points: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..=nmax {
        for state in basis_states(p.dim(), from, n)? {
            let terms = expansion_terms(p, &state, to, Route::default())?;
            for pt in points {
                let direct = psi_at(p, &state, pt)?;
                let mut sum = 0.0;
                for (t, c) in &terms {
                    sum += c * psi_at(p, t, pt)?;
                }
                worst = worst.max((direct - sum).abs());
            }
        }
    }
    Ok(worst)
}

fn expansion_suite(run: &mut Run) {
    let tol = run.tol.expansion;
    let pts2 = sample_points(Domain::Quadrant, 100, run.point_seed(Suite::Expansion, 2), 0.05).expect("valid margin");
    for (i, p) in run.systems(Suite::Expansion, 2, 5).iter().enumerate() {
        for (from, to) in [(Basis::Cartesian, Basis::Polar), (Basis::Polar, Basis::Cartesian)] {
            let r = completeness(p, from, to, 4, &pts2).unwrap_or(f64::NAN);
            run.record(format!("expansion/{from:?} to {to:?}/D=2/draw {i:02}"), 4, Some(p), r, tol);
        }
        let ground = expand(p, &BasisState::Cartesian(CartesianState::new(&[0, 0])), Basis::Polar, &pts2[0], Route::default())
            .and_then(|v| Ok(v - psi_at(p, &BasisState::Polar(PolarState { n_rho: 0, m: 0 }), &pts2[0])?))
            .unwrap_or(f64::NAN);
        run.record(format!("expansion/ground state identity/draw {i:02}"), 0, Some(p), ground, tol);
    }
    let pts3 = sample_points(Domain::Octant, 20, run.point_seed(Suite::Expansion, 3), 0.05).expect("valid margin");
    for (i, p) in run.systems(Suite::Expansion, 3, 5).iter().enumerate() {
        for (from, to) in [
            (Basis::Cartesian, Basis::Spherical),
            (Basis::Spherical, Basis::Cartesian),
            (Basis::Cartesian, Basis::Cylindrical),
            (Basis::Cylindrical, Basis::Spherical),
            (Basis::Spherical, Basis::Cylindrical),
        ] {
            let r = completeness(p, from, to, 3, &pts3).unwrap_or(f64::NAN);
            run.record(format!("expansion/{from:?} to {to:?}/D=3/draw {i:02}"), 3, Some(p), r, tol);
        }
    }
}

fn algebra_suite(run: &mut Run) {
    let tol = run.tol.algebra;
    let systems = run.systems(Suite::Algebra, 2, 20);
    let pts = sample_points(Domain::Quadrant, 20, run.point_seed(Suite::Algebra, 0), 0.2).expect("valid margin");
    for (i, p) in systems.iter().enumerate() {
        let mut closure = 0.0f64;
        let mut scaled = 0.0f64;
        let mut commute = 0.0f64;
        let mut ladders = 0.0f64;
        let mut coherence = 0.0f64;
        let big = p.with_omega(5.0 * p.omega()).expect("positive omega");
        for n in 0..=QN_MAX {
            for r in check_quadratic_algebra(p, n).unwrap_or_default() {
                if r.identity.starts_with("[N,H]") || r.identity.starts_with("[M,H]") {
                    commute = commute.max(r.residual);
                } else {
                    closure = closure.max(r.residual);
                }
            }
            for r in check_quadratic_algebra(&big, n).unwrap_or_default() {
                scaled = scaled.max(r.residual);
            }
            for r in check_limits_and_ladders(p, n).unwrap_or_default() {
                if r.identity.starts_with("[N,M]") || r.identity.starts_with("M =") {
                    ladders = ladders.max(r.residual);
                }
            }
            // M in the Cartesian basis applied to the expansion of each polar state
            if let (Ok(mc), Ok(w)) = (op_m(p, n, OperatorBasis::Cartesian), w_matrix(p, n, Route::default())) {
                for m in 0..=n {
                    let a = separation_a(p, m).unwrap_or(f64::NAN);
                    let col = w.entries.column(m);
                    coherence = coherence.max((&mc.matrix * col - col * (0.25 * a * a)).amax());
                }
            }
        }
        run.record(format!("algebra/quadratic closure/draw {i:02}"), QN_MAX, Some(p), closure, tol);
        run.record(format!("algebra/quadratic closure at 5 omega/draw {i:02}"), QN_MAX, Some(&big), scaled, tol);
        run.record(format!("algebra/[N,H] and [M,H]/draw {i:02}"), QN_MAX, Some(p), commute, tol);
        run.record(format!("algebra/ladder forms of T and M/draw {i:02}"), QN_MAX, Some(p), ladders, tol);
        run.record(format!("algebra/basis-change coherence/draw {i:02}"), QN_MAX, Some(p), coherence, tol);

        if i < 3 {
            let n = 3;
            let fd = (|| -> Result<f64> {
                let nm = op_n(p, n)?.matrix;
                let t = op_t(p, n)?.matrix;
                let mut worst = 0.0f64;
                for pt in &pts {
                    let states: Vec<CartesianState> = cartesian_states(2, n);
                    let vals: Vec<f64> = states.iter().map(|s| crate::model::psi_cartesian(p, s, pt)).collect::<Result<_>>()?;
                    let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
                    for (j, s) in states.iter().enumerate() {
                        let nd = n_differential(p, s, pt[0], pt[1])?;
                        worst = worst.max((nd - nm[(j, j)] * vals[j]).abs() / (scale * nm.amax().max(1.0)));
                        let td = t_differential(p, s, pt[0], pt[1])?;
                        let spectral: f64 = (0..=n).map(|l| t[(l, j)] * vals[l]).sum();
                        worst = worst.max((td - spectral).abs() / (scale * t.amax().max(1.0)));
                    }
                    let (_, phi) = polar_from_cartesian(pt[0], pt[1]);
                    for m in 0..=n {
                        let a = separation_a(p, m)?;
                        let v = phi_angular(p, m, phi)?;
                        worst = worst.max((m_differential(p, m, phi)? - 0.25 * a * a * v).abs() / (0.25 * a * a).max(1.0));
                    }
                }
                Ok(worst)
            })()
            .unwrap_or(f64::NAN);
            run.record(format!("algebra/differential forms/draw {i:02}"), n, Some(p), fd, run.tol.stencil);
        }

        let mut lowest = 0.0f64;
        for a in 0..2 {
            lowest = lowest.max(su11_lowering(p.nu(a), QN_MAX + 1).column(0).amax());
        }
        run.record(format!("algebra/J- annihilates lowest/draw {i:02}"), QN_MAX, Some(p), lowest, 0.0);
    }
}

fn limits_suite(run: &mut Run) {
    let pts = sample_points(Domain::Quadrant, 30, run.point_seed(Suite::Limits, 0), 0.05).expect("valid margin");
    // Chebyshev forms on all four branch pairs
    for omega in [1.0, 1.7] {
        for signs in [
            [Branch::Minus, Branch::Minus],
            [Branch::Plus, Branch::Plus],
            [Branch::Plus, Branch::Minus],
            [Branch::Minus, Branch::Plus],
        ] {
            let p = SystemParams::new(omega, &[0.5, 0.5], &signs).expect("valid");
            let mut worst = 0.0f64;
            for n in 0..=6 {
                for m in 0..=n {
                    let t = separation_a(&p, m).expect("planar") as usize;
                    let quanta = (2.0 * n as f64 + 1.0 + p.nu(0) + p.nu(1)) as usize;
                    for pt in &pts {
                        let (rho, phi) = polar_from_cartesian(pt[0], pt[1]);
                        let got = psi_polar(&p, &PolarState { n_rho: n - m, m }, rho, phi).unwrap_or(f64::NAN);
                        let want = chebyshev_polar(omega, quanta, t, signs[1] == Branch::Minus, rho, phi).unwrap_or(f64::NAN);
                        worst = worst.max((got - want).abs());
                    }
                }
            }
            run.record(format!("limits/chebyshev form/omega={omega}/sigma={}{}", signs[0], signs[1]), 6, Some(&p), worst, 1e-10);
        }
    }
    hermite_checks(run, Suite::Limits);

    let mut su2 = 0.0f64;
    for n in 0..=10 {
        let [l0, lp, lm] = su2_triplet(n);
        let c = crate::algebra::commutator;
        su2 = su2
            .max((c(&l0.matrix, &lp.matrix) - &lp.matrix).amax())
            .max((c(&l0.matrix, &lm.matrix) + &lm.matrix).amax())
            .max((c(&lp.matrix, &lm.matrix) - &l0.matrix * 2.0).amax());
    }
    run.record("limits/su(2) L0 L+ L-".into(), 10, None, su2, 1e-12);
    let lp1 = su2_triplet(1)[1].matrix[(0, 1)];
    run.record("limits/L+ on (1,0)".into(), 1, None, lp1 - 1.0, 0.0);

    let mut ptrip = 0.0f64;
    for level in 0..=20 {
        match p_triplet(1.0, level) {
            Ok([p1, p2, p3]) => {
                let c = crate::algebra::commutator;
                ptrip = ptrip
                    .max((c(&p1.matrix, &p2.matrix) - &p3.matrix).amax())
                    .max((c(&p2.matrix, &p3.matrix) - &p1.matrix).amax())
                    .max((c(&p3.matrix, &p1.matrix) + &p2.matrix).amax())
                    / p3.matrix.amax().max(1.0);
            }
            Err(_) => ptrip = f64::NAN,
        }
    }
    run.record("limits/su(2) P1 P2 P3".into(), 20, None, ptrip, 1e-12);

    // Casimir, spectrum and level structure on every branch combination
    let systems = run.systems(Suite::Limits, 2, 5);
    for (i, base) in systems.iter().enumerate() {
        let mut casimir = 0.0f64;
        let mut spectral = 0.0f64;
        let mut count = 0.0f64;
        let mut energies = Vec::new();
        let k = [base.k()[0].min(0.49), base.k()[1].min(0.48)];
        for s1 in [Branch::Plus, Branch::Minus] {
            for s2 in [Branch::Plus, Branch::Minus] {
                let p = SystemParams::new(base.omega(), &k, &[s1, s2]).expect("k < 1/2");
                for n in 0..=QN_MAX {
                    for st in cartesian_states(2, n) {
                        let l = su11_labels(&p, &st).expect("planar");
                        for a in 0..2 {
                            casimir = casimir.max((l.casimir[a] - (k[a] * k[a] - 1.0) / 4.0).abs());
                        }
                        spectral = spectral.max((2.0 * p.omega() * (l.m[0] + l.m[1]) - energy(&p, n)).abs());
                    }
                    let deg = degeneracy(&p, n).unwrap_or(0);
                    count = count.max((deg as f64 - (n + 1) as f64).abs()).max((deg as f64 - cartesian_states(2, n).len() as f64).abs());
                }
                energies.push(energy(&p, 0));
            }
        }
        let mut min_gap = f64::INFINITY;
        for a in 0..energies.len() {
            for b in a + 1..energies.len() {
                min_gap = min_gap.min((energies[a] - energies[b]).abs());
            }
        }
        let p = SystemParams::new(base.omega(), &k, &[Branch::Plus, Branch::Plus]).expect("valid");
        run.record(format!("limits/casimir (k^2-1)/4/draw {i:02}"), QN_MAX, Some(&p), casimir, 1e-15);
        run.record(format!("limits/H = 2 omega C0 on four branches/draw {i:02}"), QN_MAX, Some(&p), spectral, 1e-12);
        run.record(format!("limits/degeneracy n+1/draw {i:02}"), QN_MAX, Some(&p), count, 0.0);
        let distinct = if min_gap > 1e-9 { 0.0 } else { 1.0 };
        run.record(format!("limits/four distinct levels/draw {i:02}"), 0, Some(&p), distinct, 0.0);
    }
}

/// Identity prefixes that must appear in an `all` run, one per checked
/// property.
const COVERAGE: &[&str] = &[
    "normalization/kernels/recurrence vs explicit",
    "normalization/kernels/jacobi reflection",
    "normalization/kernels/quadrature exactness",
    "normalization/kernels/3F2 permutation symmetry",
    "normalization/factors unit norm",
    "normalization/cartesian product unit norm",
    "normalization/hermite limit",
    "orthogonality/factors orthogonal",
    "orthogonality/cartesian product orthogonal",
    "eigenresidual/Cartesian",
    "eigenresidual/Polar",
    "eigenresidual/Cylindrical",
    "eigenresidual/Spherical",
    "eigenresidual/energy formula",
    "limits/hermite limit",
    "limits/chebyshev form",
    "routes/four-route agreement",
    "routes/alternate 3F2",
    "routes/sign agreement",
    "routes/W orthogonal",
    "routes/forward then inverse",
    "routes/V orthogonal",
    "expansion/Cartesian to Polar",
    "expansion/Polar to Cartesian",
    "expansion/Cartesian to Spherical",
    "expansion/Spherical to Cartesian",
    "algebra/quadratic closure",
    "algebra/[N,H] and [M,H]",
    "algebra/ladder forms",
    "algebra/basis-change coherence",
    "algebra/differential forms",
    "algebra/J- annihilates lowest",
    "limits/su(2) L0 L+ L-",
    "limits/su(2) P1 P2 P3",
    "limits/casimir",
    "limits/H = 2 omega C0",
    "limits/degeneracy",
    "limits/four distinct levels",
    "all/determinism",
];

fn run_part(run: &mut Run, suite: Suite) {
    match suite {
        Suite::Normalization | Suite::Orthogonality => gram_suite(run, suite),
        Suite::Eigenresidual => eigenresidual_suite(run),
        Suite::Routes => routes_suite(run),
        Suite::Expansion => expansion_suite(run),
        Suite::Algebra => algebra_suite(run),
        Suite::Limits => limits_suite(run),
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

/// Runs one suite, or all of them, and collects a report.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut run = Run::new(cfg);
    if suite == Suite::All {
        for part in Suite::PARTS {
            run_part(&mut run, part);
        }
        // determinism: a part rerun from scratch gives the same payload
        let again = run_suite(Suite::Limits, cfg)?;
        let mut fresh = Run::new(cfg);
        run_part(&mut fresh, Suite::Limits);
        let first = SuiteReport::new("limits", cfg.seed, fresh.draws, fresh.cases).to_json();
        let pts_a = sample_points(Domain::Octant, 10, cfg.seed, 0.2)?;
        let pts_b = sample_points(Domain::Octant, 10, cfg.seed, 0.2)?;
        let same = first == again.to_json() && pts_a == pts_b;
        run.record("all/determinism".into(), 0, None, if same { 0.0 } else { 1.0 }, 0.0);

        if cfg.params.is_none() {
            let missing: Vec<&str> = COVERAGE
                .iter()
                .copied()
                .filter(|prefix| !run.cases.iter().any(|c| c.identity.starts_with(prefix)))
                .collect();
            let identity = if missing.is_empty() {
                "all/coverage checklist".to_string()
            } else {
                format!("all/coverage checklist (missing: {})", missing.join("; "))
            };
            run.record(identity, 0, None, missing.len() as f64, 0.0);
        }
    } else {
        run_part(&mut run, suite);
    }
    let mut report = SuiteReport::new(suite.name(), cfg.seed, run.draws, run.cases);
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_points_contract() {
        for domain in [Domain::HalfLine, Domain::Quadrant, Domain::Octant] {
            let a = sample_points(domain, 50, 7, 0.2).unwrap();
            assert_eq!(a, sample_points(domain, 50, 7, 0.2).unwrap());
            assert_ne!(a, sample_points(domain, 50, 8, 0.2).unwrap());
            assert!(a.iter().flatten().all(|&c| c >= 0.2 && c <= 0.2 + SAMPLE_EXTENT));
            assert!(a.iter().all(|p| p.len() == domain.dim()));
        }
        assert_eq!(sample_points(Domain::Quadrant, 1, 3, 0.1).unwrap().len(), 1);
        assert!(sample_points(Domain::Quadrant, 1, 3, 0.0).is_err());
    }

    #[test]
    fn draws_respect_branch_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut minus = 0;
        for _ in 0..200 {
            let p = draw_params(&mut rng, 3);
            for a in 0..3 {
                assert!(p.k()[a] > 0.05 && p.k()[a] < 1.2);
                if p.signs()[a] == Branch::Minus {
                    assert!(p.k()[a] <= 0.5);
                    minus += 1;
                }
            }
        }
        assert!(minus > 0);
    }

    #[test]
    fn unknown_suite_is_usage_error() {
        assert!(matches!("bogus".parse::<Suite>(), Err(Error::Usage(_))));
        assert_eq!("routes".parse::<Suite>().unwrap(), Suite::Routes);
    }

    #[test]
    fn hermite_oracle_matches_ground_state() {
        assert!((hermite_limit(1.0, Branch::Plus, 0, 1.0) - 0.644_288_365_113_475_1).abs() < 1e-15);
    }
}
