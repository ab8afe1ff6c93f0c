//! System parameters, quantum-number labels, spectra and wavefunctions.
//!
//! All wavefunctions live on the open fundamental domain: the positive
//! half-line per Cartesian axis, `0 < φ < π/2`, `0 < θ < π/2`. The
//! integration measures carry the sector factors (`2 dx` per axis, `4 dφ`,
//! `2 sinθ dθ`); the functions themselves do not.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::special::{jacobi_unchecked, laguerre_unchecked, ln_factorial, ln_gamma, ln_norm_gamma};

/// Choice of `±k_a` in the local exponent of axis `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "plus" => Ok(Branch::Plus),
            "-" | "-1" | "minus" => Ok(Branch::Minus),
            other => Err(Error::Params(format!("branch sign must be '+' or '-', got '{other}'"))),
        }
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Frequency, dimension, barrier strengths `k_a` and branch signs `σ_a`.
///
/// The branch is fixed at construction: `σ_a = -1` is only admissible for
/// `k_a ≤ 1/2`, so the effective exponent `ν_a = σ_a k_a` is always
/// `≥ -1/2` and every state is normalizable. `k_a = 1/2` is accepted with
/// either sign; it is the ordinary-oscillator limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega: f64,
    k: Vec<f64>,
    #[serde(rename = "signs")]
    sigma: Vec<Branch>,
}

impl SystemParams {
    pub fn new(omega: f64, k: &[f64], sigma: &[Branch]) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Params(format!("omega must be positive and finite, got {omega}")));
        }
        if k.is_empty() || k.len() > 3 {
            return Err(Error::Params(format!("dimension must be 1, 2 or 3, got {}", k.len())));
        }
        if k.len() != sigma.len() {
            return Err(Error::Params(format!(
                "{} barrier strengths but {} branch signs",
                k.len(),
                sigma.len()
            )));
        }
        for (a, (&ka, &sa)) in k.iter().zip(sigma).enumerate() {
            if !(ka > 0.0) || !ka.is_finite() {
                return Err(Error::Params(format!("k[{a}] must be positive and finite, got {ka}")));
            }
            if sa == Branch::Minus && ka > 0.5 {
                return Err(Error::Params(format!(
                    "branch rule violated on axis {a}: k = {ka} > 1/2 admits only the '+' sign"
                )));
            }
        }
        Ok(Self { omega, k: k.to_vec(), sigma: sigma.to_vec() })
    }

    /// All axes on the `+` branch.
    pub fn plus(omega: f64, k: &[f64]) -> Result<Self> {
        Self::new(omega, k, &vec![Branch::Plus; k.len()])
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub fn signs(&self) -> &[Branch] {
        &self.sigma
    }

    /// Effective exponent `ν_a = σ_a k_a`.
    pub fn nu(&self, axis: usize) -> f64 {
        self.sigma[axis].sign() * self.k[axis]
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(omega, &self.k, &self.sigma)
    }

    /// Bit-exact key for caches.
    pub fn key(&self) -> ParamsKey {
        ParamsKey {
            omega: self.omega.to_bits(),
            k: self.k.iter().map(|v| v.to_bits()).collect(),
            sigma: self.sigma.clone(),
        }
    }

    fn axis_nu(&self, axis: usize) -> Result<f64> {
        if axis >= self.dim() {
            return Err(Error::Arity(format!("axis {axis} out of range for dimension {}", self.dim())));
        }
        Ok(self.nu(axis))
    }

    fn require_dim(&self, min: usize, what: &str) -> Result<()> {
        if self.dim() < min {
            return Err(Error::Arity(format!("{what} needs dimension >= {min}, have {}", self.dim())));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamsKey {
    omega: u64,
    k: Vec<u64>,
    sigma: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartesianState {
    pub n: Vec<usize>,
}

impl CartesianState {
    pub fn new(n: &[usize]) -> Self {
        Self { n: n.to_vec() }
    }

    pub fn principal(&self) -> usize {
        self.n.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolarState {
    pub n_rho: usize,
    pub m: usize,
}

impl PolarState {
    pub fn principal(&self) -> usize {
        self.n_rho + self.m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylindricalState {
    pub n_rho: usize,
    pub m: usize,
    pub n3: usize,
}

impl CylindricalState {
    pub fn principal(&self) -> usize {
        self.n_rho + self.m + self.n3
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphericalState {
    pub n_r: usize,
    pub q: usize,
    pub m: usize,
}

impl SphericalState {
    pub fn principal(&self) -> usize {
        self.n_r + self.q + self.m
    }
}

/// A labelled eigenstate in one of the separable coordinate systems.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "basis", rename_all = "lowercase")]
pub enum BasisState {
    Cartesian(CartesianState),
    Polar(PolarState),
    Cylindrical(CylindricalState),
    Spherical(SphericalState),
}

impl BasisState {
    pub fn principal(&self) -> usize {
        match self {
            BasisState::Cartesian(s) => s.principal(),
            BasisState::Polar(s) => s.principal(),
            BasisState::Cylindrical(s) => s.principal(),
            BasisState::Spherical(s) => s.principal(),
        }
    }

    pub fn basis(&self) -> Basis {
        match self {
            BasisState::Cartesian(_) => Basis::Cartesian,
            BasisState::Polar(_) => Basis::Polar,
            BasisState::Cylindrical(_) => Basis::Cylindrical,
            BasisState::Spherical(_) => Basis::Spherical,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Cartesian,
    Polar,
    Cylindrical,
    Spherical,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cartesian" | "cart" => Ok(Basis::Cartesian),
            "polar" => Ok(Basis::Polar),
            "cylindrical" | "cyl" => Ok(Basis::Cylindrical),
            "spherical" | "sph" => Ok(Basis::Spherical),
            other => Err(Error::Usage(format!("unknown basis '{other}'"))),
        }
    }
}

/// Energy `Ω (2n + D + Σ_a σ_a k_a)` of the level with principal number `n`.
pub fn energy(params: &SystemParams, n: usize) -> f64 {
    let nu_sum: f64 = (0..params.dim()).map(|a| params.nu(a)).sum();
    params.omega() * (2.0 * n as f64 + params.dim() as f64 + nu_sum)
}

/// Number of states at level `n` in two dimensions.
pub fn degeneracy(params: &SystemParams, n: usize) -> Result<usize> {
    if params.dim() != 2 {
        return Err(Error::Arity(format!(
            "degeneracy is defined for dimension 2, have {}",
            params.dim()
        )));
    }
    Ok(n + 1)
}

/// All Cartesian labels with `Σ n_a = n`, lexicographic with `n_1` ascending.
pub fn cartesian_states(dim: usize, n: usize) -> Vec<CartesianState> {
    fn rec(dim: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<CartesianState>) {
        if dim == 1 {
            prefix.push(left);
            out.push(CartesianState { n: prefix.clone() });
            prefix.pop();
            return;
        }
        for first in 0..=left {
            prefix.push(first);
            rec(dim - 1, left - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, n, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// Every state of level `n` in `basis` for a system of dimension `dim`.
pub fn basis_states(dim: usize, basis: Basis, n: usize) -> Result<Vec<BasisState>> {
    let out = match (basis, dim) {
        (Basis::Cartesian, 1..=3) => cartesian_states(dim, n).into_iter().map(BasisState::Cartesian).collect(),
        (Basis::Polar, 2) => (0..=n).map(|m| BasisState::Polar(PolarState { n_rho: n - m, m })).collect(),
        (Basis::Cylindrical, 3) => {
            let mut v = Vec::new();
            for n3 in 0..=n {
                for m in 0..=n - n3 {
                    v.push(BasisState::Cylindrical(CylindricalState { n_rho: n - n3 - m, m, n3 }));
                }
            }
            v
        }
        (Basis::Spherical, 3) => {
            let mut v = Vec::new();
            for m in 0..=n {
                for q in 0..=n - m {
                    v.push(BasisState::Spherical(SphericalState { n_r: n - m - q, q, m }));
                }
            }
            v
        }
        _ => return Err(Error::Arity(format!("no {basis:?} basis in dimension {dim}"))),
    };
    Ok(out)
}

/// The separable bases of a system of dimension `dim`.
pub fn bases_for(dim: usize) -> &'static [Basis] {
    match dim {
        2 => &[Basis::Cartesian, Basis::Polar],
        3 => &[Basis::Cartesian, Basis::Cylindrical, Basis::Spherical],
        _ => &[Basis::Cartesian],
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_open_angle(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < FRAC_PI_2 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in (0, pi/2), got {v}")))
    }
}

/// `√(N) · t^{p/2} e^{-t/2} L_n^ν(t)` with `ln N` given, `t = Ω x²`.
fn laguerre_profile(ln_norm: f64, power: f64, n: usize, nu: f64, t: f64) -> f64 {
    let lag = laguerre_unchecked(n, nu, t);
    if lag == 0.0 {
        return 0.0;
    }
    (0.5 * ln_norm + 0.5 * power * t.ln() - 0.5 * t).exp() * lag
}

/// One-dimensional factor `Ψ_n(x; σk)`, normalized as `2∫₀^∞ Ψ² dx = 1`.
pub fn psi_1d(params: &SystemParams, axis: usize, n: usize, x: f64) -> Result<f64> {
    let nu = params.axis_nu(axis)?;
    check_positive("x", x)?;
    Ok(psi_1d_nu(params.omega(), nu, n, x))
}

pub(crate) fn psi_1d_nu(omega: f64, nu: f64, n: usize, x: f64) -> f64 {
    let t = omega * x * x;
    let ln_norm = 0.5 * omega.ln() + ln_factorial(n) - ln_gamma(n as f64 + nu + 1.0);
    laguerre_profile(ln_norm, 0.5 + nu, n, nu, t)
}

/// [`psi_1d`] extended to `x = 0` by its limit, which is 0 since `½ + ν > 0`.
pub fn psi_1d_closed(params: &SystemParams, axis: usize, n: usize, x: f64) -> Result<f64> {
    if x == 0.0 {
        params.axis_nu(axis)?;
        return Ok(0.0);
    }
    psi_1d(params, axis, n, x)
}

/// Product wavefunction `Π_a Ψ_{n_a}(x_a)`.
pub fn psi_cartesian(params: &SystemParams, state: &CartesianState, point: &[f64]) -> Result<f64> {
    let d = params.dim();
    if state.n.len() != d || point.len() != d {
        return Err(Error::Arity(format!(
            "dimension {d} needs {d} quantum numbers and {d} coordinates, got {} and {}",
            state.n.len(),
            point.len()
        )));
    }
    let mut value = 1.0;
    for (a, (&na, &xa)) in state.n.iter().zip(point).enumerate() {
        value *= psi_1d(params, a, na, xa)?;
    }
    Ok(value)
}

/// Polar separation constant `A = 2m + σ₁k₁ + σ₂k₂ + 1`.
pub fn separation_a(params: &SystemParams, m: usize) -> Result<f64> {
    params.require_dim(2, "the polar separation constant")?;
    Ok(2.0 * m as f64 + params.nu(0) + params.nu(1) + 1.0)
}

/// Angular factor `Φ_m(φ)`, normalized as `4∫₀^{π/2} Φ² dφ = 1`.
pub fn phi_angular(params: &SystemParams, m: usize, phi: f64) -> Result<f64> {
    params.require_dim(2, "the angular factor")?;
    check_open_angle("phi", phi)?;
    Ok(phi_nu(params.nu(0), params.nu(1), m, phi))
}

pub(crate) fn phi_nu(nu1: f64, nu2: f64, m: usize, phi: f64) -> f64 {
    let s = nu1 + nu2;
    let mf = m as f64;
    let ln_norm = ln_norm_gamma(m, s) + ln_factorial(m)
        - std::f64::consts::LN_2
        - ln_gamma(mf + nu1 + 1.0)
        - ln_gamma(mf + nu2 + 1.0);
    let (sin, cos) = phi.sin_cos();
    let jac = jacobi_unchecked(m, nu2, nu1, (2.0 * phi).cos());
    (0.5 * ln_norm + (0.5 + nu1) * cos.ln() + (0.5 + nu2) * sin.ln()).exp() * jac
}

/// [`phi_angular`] on the closed quarter circle; the endpoints give 0.
pub fn phi_angular_closed(params: &SystemParams, m: usize, phi: f64) -> Result<f64> {
    params.require_dim(2, "the angular factor")?;
    if phi == 0.0 || phi == FRAC_PI_2 {
        return Ok(0.0);
    }
    phi_angular(params, m, phi)
}

/// Polar radial factor `R_{n_ρ m}(ρ)`, normalized as `∫₀^∞ R² ρ dρ = 1`.
pub fn radial_polar(params: &SystemParams, n_rho: usize, m: usize, rho: f64) -> Result<f64> {
    let a = separation_a(params, m)?;
    check_positive("rho", rho)?;
    Ok(radial_polar_a(params.omega(), a, n_rho, rho))
}

pub(crate) fn radial_polar_a(omega: f64, a: f64, n_rho: usize, rho: f64) -> f64 {
    let t = omega * rho * rho;
    let ln_norm = (2.0 * omega).ln() + ln_factorial(n_rho) - ln_gamma(n_rho as f64 + a + 1.0);
    laguerre_profile(ln_norm, a, n_rho, a, t)
}

/// [`radial_polar`] extended to `ρ = 0`. The limit is 0 unless `A = 0`
/// (`m = 0`, `σk = (-½, -½)`), where it is the finite value
/// `√(2Ω n_ρ!/Γ(n_ρ+1)) L_{n_ρ}^0(0) = √(2Ω)`.
pub fn radial_polar_closed(params: &SystemParams, n_rho: usize, m: usize, rho: f64) -> Result<f64> {
    let a = separation_a(params, m)?;
    if rho == 0.0 {
        return Ok(if a == 0.0 { (2.0 * params.omega()).sqrt() } else { 0.0 });
    }
    radial_polar(params, n_rho, m, rho)
}

pub fn psi_polar(params: &SystemParams, state: &PolarState, rho: f64, phi: f64) -> Result<f64> {
    Ok(radial_polar(params, state.n_rho, state.m, rho)? * phi_angular(params, state.m, phi)?)
}

/// `Ψ_{n_ρ m n₃} = R_{n_ρ m}(ρ) Φ_m(φ) Ψ_{n₃}(z)`.
pub fn psi_cylindrical(
    params: &SystemParams,
    state: &CylindricalState,
    rho: f64,
    phi: f64,
    z: f64,
) -> Result<f64> {
    params.require_dim(3, "the cylindrical basis")?;
    Ok(radial_polar(params, state.n_rho, state.m, rho)?
        * phi_angular(params, state.m, phi)?
        * psi_1d(params, 2, state.n3, z)?)
}

/// Spherical separation constant `J = 2q + A + σ₃k₃ + ½`.
pub fn separation_j(params: &SystemParams, q: usize, m: usize) -> Result<f64> {
    params.require_dim(3, "the spherical separation constant")?;
    Ok(2.0 * q as f64 + separation_a(params, m)? + params.nu(2) + 0.5)
}

/// Polar-angle factor `Θ_{qm}(θ)`, normalized as `2∫₀^{π/2} Θ² sinθ dθ = 1`.
pub fn theta_spherical(params: &SystemParams, q: usize, m: usize, theta: f64) -> Result<f64> {
    params.require_dim(3, "the polar-angle factor")?;
    check_open_angle("theta", theta)?;
    let a = separation_a(params, m)?;
    Ok(theta_a(a, params.nu(2), q, theta))
}

fn theta_a(a: f64, nu3: f64, q: usize, theta: f64) -> f64 {
    let qf = q as f64;
    // (2q + A + ν₃ + 1) q! Γ(q + A + ν₃ + 1) / (Γ(q + ν₃ + 1) Γ(q + A + 1))
    let ln_norm = (2.0 * qf + a + nu3 + 1.0).ln() + ln_factorial(q) + ln_gamma(qf + a + nu3 + 1.0)
        - ln_gamma(qf + nu3 + 1.0)
        - ln_gamma(qf + a + 1.0);
    let (sin, cos) = theta.sin_cos();
    let jac = jacobi_unchecked(q, a, nu3, (2.0 * theta).cos());
    (0.5 * ln_norm + (0.5 + nu3) * cos.ln() + a * sin.ln()).exp() * jac
}

/// [`theta_spherical`] on the closed interval; `Θ(0) = Θ(π/2) = 0` except
/// at `θ = 0` when `A = 0`, where the limit is finite.
pub fn theta_spherical_closed(params: &SystemParams, q: usize, m: usize, theta: f64) -> Result<f64> {
    params.require_dim(3, "the polar-angle factor")?;
    let a = separation_a(params, m)?;
    if theta == FRAC_PI_2 {
        return Ok(0.0);
    }
    if theta == 0.0 {
        if a != 0.0 {
            return Ok(0.0);
        }
        return Ok(theta_a(a, params.nu(2), q, f64::MIN_POSITIVE));
    }
    theta_spherical(params, q, m, theta)
}

/// Spherical radial factor `R_{n_r q m}(r)`, normalized as `∫ R² r² dr = 1`.
pub fn radial_spherical(params: &SystemParams, n_r: usize, q: usize, m: usize, r: f64) -> Result<f64> {
    let j = separation_j(params, q, m)?;
    check_positive("r", r)?;
    let omega = params.omega();
    let t = omega * r * r;
    let nu = j + 0.5;
    let ln_norm = (2.0f64).ln() + 1.5 * omega.ln() + ln_factorial(n_r) - ln_gamma(n_r as f64 + nu + 1.0);
    Ok(laguerre_profile(ln_norm, j, n_r, nu, t))
}

/// `Ψ_{n_r q m} = R(r) Θ(θ) Φ(φ)`, with `z = r cosθ`, `ρ = r sinθ`.
pub fn psi_spherical(
    params: &SystemParams,
    state: &SphericalState,
    r: f64,
    theta: f64,
    phi: f64,
) -> Result<f64> {
    Ok(radial_spherical(params, state.n_r, state.q, state.m, r)?
        * theta_spherical(params, state.q, state.m, theta)?
        * phi_angular(params, state.m, phi)?)
}

/// `(ρ, φ)` of a point `(x, y)`.
pub fn polar_from_cartesian(x: f64, y: f64) -> (f64, f64) {
    (x.hypot(y), y.atan2(x))
}

/// `(ρ, φ, z)` of a point `(x, y, z)`.
pub fn cylindrical_from_cartesian(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let (rho, phi) = polar_from_cartesian(x, y);
    (rho, phi, z)
}

/// `(r, θ, φ)` of a point `(x, y, z)`; `θ` is measured from the `z` axis.
pub fn spherical_from_cartesian(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    let rho = x.hypot(y);
    (rho.hypot(z), rho.atan2(z), y.atan2(x))
}

pub fn cartesian_from_polar(rho: f64, phi: f64) -> [f64; 2] {
    [rho * phi.cos(), rho * phi.sin()]
}

pub fn cartesian_from_spherical(r: f64, theta: f64, phi: f64) -> [f64; 3] {
    let rho = r * theta.sin();
    [rho * phi.cos(), rho * phi.sin(), r * theta.cos()]
}

/// Evaluates any basis state at a point given in Cartesian coordinates.
pub fn psi_at(params: &SystemParams, state: &BasisState, point: &[f64]) -> Result<f64> {
    let need = match state {
        BasisState::Cartesian(s) => s.n.len(),
        BasisState::Polar(_) => 2,
        BasisState::Cylindrical(_) | BasisState::Spherical(_) => 3,
    };
    if point.len() != need || params.dim() != need {
        return Err(Error::Arity(format!(
            "{:?} state needs a {need}-dimensional system and point, got dimension {} and {} coordinates",
            state.basis(),
            params.dim(),
            point.len()
        )));
    }
    match state {
        BasisState::Cartesian(s) => psi_cartesian(params, s, point),
        BasisState::Polar(s) => {
            let (rho, phi) = polar_from_cartesian(point[0], point[1]);
            psi_polar(params, s, rho, phi)
        }
        BasisState::Cylindrical(s) => {
            let (rho, phi, z) = cylindrical_from_cartesian(point[0], point[1], point[2]);
            psi_cylindrical(params, s, rho, phi, z)
        }
        BasisState::Spherical(s) => {
            let (r, theta, phi) = spherical_from_cartesian(point[0], point[1], point[2]);
            psi_spherical(params, s, r, theta, phi)
        }
    }
}

/// The potential `V(x) = Σ_a [½Ω²x_a² + ½(k_a² − ¼)/x_a²]`.
pub fn potential(params: &SystemParams, point: &[f64]) -> Result<f64> {
    if point.len() != params.dim() {
        return Err(Error::Arity(format!(
            "potential needs {} coordinates, got {}",
            params.dim(),
            point.len()
        )));
    }
    let w2 = params.omega() * params.omega();
    Ok(point
        .iter()
        .zip(params.k())
        .map(|(&x, &k)| 0.5 * w2 * x * x + 0.5 * (k * k - 0.25) / (x * x))
        .sum())
}
