//! Interbasis expansion coefficients.
//!
//! `W` links the Cartesian and polar bases of the planar system,
//! `Ψ_{n₁n₂} = Σ_m W_{n₁n₂}^m Ψ_{n_ρ m}`, and it is orthogonal, so the same
//! matrix also expands polar states in Cartesian ones. `V` links the
//! cylindrical and spherical bases and `C = W·V` the Cartesian and spherical
//! ones.
//!
//! Every coefficient is a function of two effective exponents `(κ₁, κ₂)` and
//! three labels. For `W` these are `(σ₁k₁, σ₂k₂)`; `V` reuses the same
//! machinery with `κ₁ = σ₃k₃` and `κ₂ = A(m)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{
    cartesian_states, psi_at, separation_a, Basis, BasisState, CartesianState, CylindricalState,
    PolarState, SphericalState, SystemParams,
};
use crate::special::{
    hahn, hyp3f2_terminating, ln_factorial, ln_gamma, ln_norm_gamma, make_rule, parity, RuleKind,
};

/// Independent ways of computing `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Projection integral after integration by parts, by Gauss–Jacobi quadrature.
    Integral,
    /// Closed form with a terminating `₃F₂`.
    Hypergeometric,
    /// A second `₃F₂` representation, related to the first by a Sheppard transformation.
    HypergeometricAlt,
    /// Hahn polynomial form.
    Hahn,
    /// Analytically continued SU(2) Clebsch–Gordan coefficient.
    Cgc,
}

impl Route {
    pub const ALL: [Route; 5] =
        [Route::Integral, Route::Hypergeometric, Route::HypergeometricAlt, Route::Hahn, Route::Cgc];

    pub fn name(self) -> &'static str {
        match self {
            Route::Integral => "integral",
            Route::Hypergeometric => "hypergeometric",
            Route::HypergeometricAlt => "hypergeometric-alt",
            Route::Hahn => "hahn",
            Route::Cgc => "cgc",
        }
    }
}

impl Default for Route {
    /// The single Clebsch–Gordan sum loses the fewest digits at large `n`.
    fn default() -> Self {
        Route::Cgc
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .or(match s.as_str() {
                "hyp" | "3f2" => Some(Route::Hypergeometric),
                "hyp-alt" => Some(Route::HypergeometricAlt),
                _ => None,
            })
            .ok_or_else(|| Error::Usage(format!("unknown route '{s}'")))
    }
}

fn check_labels(n1: usize, n2: usize, m: usize) -> Result<()> {
    if m > n1 + n2 {
        return Err(Error::Index(format!("m = {m} exceeds n1 + n2 = {}", n1 + n2)));
    }
    Ok(())
}

/// `W_{n₁n₂}^m` for effective exponents `(κ₁, κ₂)` by the chosen route.
pub fn w_kappa(route: Route, k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    check_labels(n1, n2, m)?;
    if !(k1 > -1.0 && k2 > -1.0) || k1 + k2 < -1.0 {
        return Err(Error::Params(format!("exponents ({k1}, {k2}) out of range")));
    }
    match route {
        Route::Integral => integral_route(k1, k2, n1, n2, m),
        Route::Hypergeometric => hypergeometric_route(k1, k2, n1, n2, m),
        Route::HypergeometricAlt => hypergeometric_alt_route(k1, k2, n1, n2, m),
        Route::Hahn => hahn_route(k1, k2, n1, n2, m),
        Route::Cgc => cgc_route(k1, k2, n1, n2, m),
    }
}

fn integral_route(k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    let n = n1 + n2;
    let (nf, mf, s) = (n as f64, m as f64, k1 + k2);
    let ln_pre = 0.5
        * (ln_norm_gamma(m, s) + ln_factorial(n - m) + ln_gamma(nf + mf + s + 2.0)
            - ln_factorial(n1)
            - ln_factorial(n2)
            - ln_factorial(m)
            - ln_gamma(mf + k1 + 1.0)
            - ln_gamma(mf + k2 + 1.0)
            - ln_gamma(n1 as f64 + k1 + 1.0)
            - ln_gamma(n2 as f64 + k2 + 1.0))
        - (nf + mf + s + 1.0) * std::f64::consts::LN_2;

    // m-th derivative of (1-x)^{n₂}(1+x)^{n₁}, by Leibniz.
    let lo = m.saturating_sub(n1);
    let hi = m.min(n2);
    let terms: Vec<(f64, i32, i32)> = (lo..=hi)
        .map(|j| {
            let ln_c = ln_factorial(m) - ln_factorial(j) - ln_factorial(m - j)
                + ln_factorial(n2)
                - ln_factorial(n2 - j)
                + ln_factorial(n1)
                - ln_factorial(n1 + j - m);
            (parity(j as i64) * ln_c.exp(), (n2 - j) as i32, (n1 + j - m) as i32)
        })
        .collect();

    let nodes = (n + 1).div_ceil(2) + 2;
    let rule = make_rule(RuleKind::Jacobi { alpha: mf + k2, beta: mf + k1 }, nodes)
        .map_err(|e| Error::Numeric(format!("projection quadrature: {e}")))?;
    let integral = rule.integrate(|x| {
        terms.iter().map(|&(c, p, q)| c * (1.0 - x).powi(p) * (1.0 + x).powi(q)).sum::<f64>()
    });
    Ok(parity(m as i64) * ln_pre.exp() * integral)
}

fn hypergeometric_route(k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    let n = n1 + n2;
    let (nf, mf, s) = (n as f64, m as f64, k1 + k2);
    let ln_pre = ln_factorial(n) - ln_gamma(1.0 + k2)
        + 0.5
            * (ln_norm_gamma(m, s) + ln_gamma(mf + k2 + 1.0)
                - ln_factorial(n1)
                - ln_factorial(n2)
                - ln_factorial(m)
                - ln_factorial(n - m)
                - ln_gamma(mf + k1 + 1.0)
                + ln_gamma(n1 as f64 + k1 + 1.0)
                + ln_gamma(n2 as f64 + k2 + 1.0)
                - ln_gamma(nf + mf + s + 2.0));
    let series = hyp3f2_terminating([-mf, mf + s + 1.0, -(n2 as f64)], [1.0 + k2, -nf])?;
    Ok(parity(m as i64) * ln_pre.exp() * series)
}

fn hypergeometric_alt_route(k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    let n = n1 + n2;
    let (nf, mf, s, n2f) = (n as f64, m as f64, k1 + k2, n2 as f64);
    let ln_pre = ln_factorial(n) + ln_gamma(n2f + mf + k2 + 1.0)
        - 0.5 * (ln_factorial(n - m) + ln_gamma(mf + k1 + 1.0) + ln_gamma(mf + k2 + 1.0))
        + 0.5
            * (ln_norm_gamma(m, s) + ln_gamma(n1 as f64 + k1 + 1.0)
                - ln_factorial(n1)
                - ln_factorial(n2)
                - ln_factorial(m)
                - ln_gamma(n2f + k2 + 1.0)
                - ln_gamma(nf + mf + s + 2.0));
    let series =
        hyp3f2_terminating([-nf - mf - s - 1.0, -n2f, -mf], [-nf, -n2f - mf - k2])?;
    Ok(parity(m as i64) * ln_pre.exp() * series)
}

fn hahn_route(k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    let n = n1 + n2;
    let (nf, mf, s) = (n as f64, m as f64, k1 + k2);
    let ln_pre = 0.5
        * (ln_norm_gamma(m, s) + ln_factorial(m) + ln_factorial(n - m)
            - ln_factorial(n1)
            - ln_factorial(n2)
            - ln_gamma(mf + k1 + 1.0)
            - ln_gamma(mf + k2 + 1.0)
            + ln_gamma(n1 as f64 + k1 + 1.0)
            + ln_gamma(n2 as f64 + k2 + 1.0)
            - ln_gamma(nf + mf + s + 2.0));
    let h = hahn(m, k2, k1, n1 as f64, n + 1)?;
    Ok(parity(m as i64) * ln_pre.exp() * h)
}

fn cgc_route(k1: f64, k2: f64, n1: usize, n2: usize, m: usize) -> Result<f64> {
    let n = n1 + n2;
    let n_rho = n - m;
    let (nf, mf, s) = (n as f64, m as f64, k1 + k2);
    let ln_pre = 0.5
        * (ln_norm_gamma(m, s)
            + ln_gamma(mf + k1 + 1.0)
            + ln_gamma(mf + k2 + 1.0)
            + ln_factorial(n_rho)
            + ln_factorial(m)
            + ln_factorial(n2)
            + ln_gamma(n1 as f64 + k1 + 1.0)
            + ln_factorial(n1)
            + ln_gamma(n2 as f64 + k2 + 1.0)
            - ln_gamma(nf + mf + s + 2.0));

    let lo = n2.saturating_sub(m);
    let hi = n_rho.min(n2);
    if lo > hi {
        return Err(Error::Numeric(format!(
            "empty Clebsch-Gordan summation range for (n1, n2, m) = ({n1}, {n2}, {m})"
        )));
    }
    let sum: f64 = (lo..=hi)
        .map(|k| {
            let kf = k as f64;
            let ln_den = ln_factorial(k)
                + ln_factorial(n_rho - k)
                + ln_factorial(n2 - k)
                + ln_gamma(n2 as f64 + k2 - kf + 1.0)
                + ln_gamma(mf + k1 - n2 as f64 + kf + 1.0)
                + ln_factorial(m + k - n2);
            parity(k as i64) * (ln_pre - ln_den).exp()
        })
        .sum();
    Ok(parity(n1 as i64 - n_rho as i64) * sum)
}

fn planar_exponents(params: &SystemParams) -> Result<(f64, f64)> {
    if params.dim() < 2 {
        return Err(Error::Arity(format!(
            "interbasis coefficients need dimension >= 2, have {}",
            params.dim()
        )));
    }
    Ok((params.nu(0), params.nu(1)))
}

pub fn w_integral(params: &SystemParams, n1: usize, n2: usize, m: usize) -> Result<f64> {
    w_coeff(params, n1, n2, m, Route::Integral)
}

pub fn w_hypergeometric(params: &SystemParams, n1: usize, n2: usize, m: usize) -> Result<f64> {
    w_coeff(params, n1, n2, m, Route::Hypergeometric)
}

pub fn w_hahn(params: &SystemParams, n1: usize, n2: usize, m: usize) -> Result<f64> {
    w_coeff(params, n1, n2, m, Route::Hahn)
}

pub fn w_cgc(params: &SystemParams, n1: usize, n2: usize, m: usize) -> Result<f64> {
    w_coeff(params, n1, n2, m, Route::Cgc)
}

/// `W_{n₁n₂}^m` of the `(x₁, x₂)` plane.
pub fn w_coeff(params: &SystemParams, n1: usize, n2: usize, m: usize, route: Route) -> Result<f64> {
    let (k1, k2) = planar_exponents(params)?;
    w_kappa(route, k1, k2, n1, n2, m)
}

/// `V_{n_ρ n₃}^{q}(m)`, expanding a cylindrical state in spherical ones.
pub fn v_coeff(
    params: &SystemParams,
    n_rho: usize,
    n3: usize,
    q: usize,
    m: usize,
    route: Route,
) -> Result<f64> {
    let (k3, a) = spatial_exponents(params, m)?;
    w_kappa(route, k3, a, n3, n_rho, q)
}

fn spatial_exponents(params: &SystemParams, m: usize) -> Result<(f64, f64)> {
    if params.dim() != 3 {
        return Err(Error::Arity(format!("V and C coefficients need dimension 3, have {}", params.dim())));
    }
    Ok((params.nu(2), separation_a(params, m)?))
}

/// `C_{n₁n₂n₃}^{qm} = W_{n₁n₂}^m · V_{n_ρ n₃}^q(m)` with `n_ρ = n₁ + n₂ − m`.
pub fn c_coeff(
    params: &SystemParams,
    n1: usize,
    n2: usize,
    n3: usize,
    m: usize,
    q: usize,
    route: Route,
) -> Result<f64> {
    if m > n1 + n2 {
        return Err(Error::Index(format!("m = {m} exceeds n1 + n2 = {}", n1 + n2)));
    }
    let n_rho = n1 + n2 - m;
    if q > n_rho + n3 {
        return Err(Error::Index(format!("q = {q} exceeds n_rho + n3 = {}", n_rho + n3)));
    }
    Ok(w_coeff(params, n1, n2, m, route)? * v_coeff(params, n_rho, n3, q, m, route)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct CacheKey {
    k1: u64,
    k2: u64,
    n: usize,
    route: Route,
}

type MatrixCache = RwLock<HashMap<CacheKey, Arc<DMatrix<f64>>>>;

fn cache() -> &'static MatrixCache {
    static CACHE: OnceLock<MatrixCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `(n+1)×(n+1)` matrix with entry `[n₁, m]`, shared through a process-wide
/// cache. Concurrent misses may compute the same matrix twice; the first
/// insertion wins and every caller sees identical entries.
fn kappa_matrix(route: Route, k1: f64, k2: f64, n: usize) -> Result<Arc<DMatrix<f64>>> {
    let key = CacheKey { k1: k1.to_bits(), k2: k2.to_bits(), n, route };
    if let Some(hit) = cache().read().ok().and_then(|c| c.get(&key).cloned()) {
        return Ok(hit);
    }
    let mut mat = DMatrix::zeros(n + 1, n + 1);
    for n1 in 0..=n {
        for m in 0..=n {
            mat[(n1, m)] = w_kappa(route, k1, k2, n1, n - n1, m)?;
        }
    }
    let mat = Arc::new(mat);
    match cache().write() {
        Ok(mut c) => Ok(c.entry(key).or_insert(mat).clone()),
        Err(_) => Ok(mat),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum CoeffKind {
    /// Rows `n₁` (with `n₂ = n − n₁`), columns `m` (with `n_ρ = n − m`).
    W,
    /// Rows `n₃` (with `n_ρ = n − n₃`), columns `q`, at fixed `m`.
    V { m: usize },
}

/// Orthogonal interbasis matrix for one principal number.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMatrix {
    pub kind: CoeffKind,
    pub principal: usize,
    pub route: Route,
    pub params: SystemParams,
    pub entries: DMatrix<f64>,
}

impl CoeffMatrix {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    /// `max |MᵀM − I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = self.entries.transpose() * &self.entries;
        let d = g - DMatrix::identity(self.principal + 1, self.principal + 1);
        d.amax()
    }

    /// Forward expansion followed by the inverse one, `M Mᵀ`; the identity
    /// when the two bases span the same eigenspace.
    pub fn round_trip(&self) -> DMatrix<f64> {
        &self.entries * self.entries.transpose()
    }

    fn index_names(&self) -> [&'static str; 3] {
        match self.kind {
            CoeffKind::W => ["n1", "n2", "m"],
            CoeffKind::V { .. } => ["n3", "n_rho", "q"],
        }
    }

    /// CSV table, one coefficient per line.
    pub fn to_csv(&self) -> String {
        let n = self.principal;
        let names = self.index_names();
        let mut out = match self.kind {
            CoeffKind::W => format!("{},{},{},value,route\n", names[0], names[1], names[2]),
            CoeffKind::V { .. } => format!("{},{},{},m,value,route\n", names[0], names[1], names[2]),
        };
        for row in 0..=n {
            for col in 0..=n {
                let v = format_value(self.get(row, col));
                match self.kind {
                    CoeffKind::W => out.push_str(&format!("{row},{},{col},{v},{}\n", n - row, self.route)),
                    CoeffKind::V { m } => {
                        out.push_str(&format!("{row},{},{col},{m},{v},{}\n", n - row, self.route))
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let n = self.principal;
        let names = self.index_names();
        let mut entries = Vec::with_capacity((n + 1) * (n + 1));
        for row in 0..=n {
            for col in 0..=n {
                entries.push(json!({
                    names[0]: row,
                    names[1]: n - row,
                    names[2]: col,
                    "value": self.get(row, col),
                }));
            }
        }
        let mut doc = json!({
            "kind": self.kind,
            "principal": n,
            "route": self.route,
            "params": self.params,
            "entries": entries,
        });
        if let CoeffKind::V { m } = self.kind {
            doc["m"] = json!(m);
        }
        doc
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:?}")
}

/// Cartesian → polar matrix `W` at principal number `n`.
pub fn w_matrix(params: &SystemParams, n: usize, route: Route) -> Result<CoeffMatrix> {
    let (k1, k2) = planar_exponents(params)?;
    Ok(CoeffMatrix {
        kind: CoeffKind::W,
        principal: n,
        route,
        params: params.clone(),
        entries: (*kappa_matrix(route, k1, k2, n)?).clone(),
    })
}

/// Cylindrical → spherical matrix `V` at fixed `m` and `n_ρ + n₃ = n`.
pub fn v_matrix(params: &SystemParams, n: usize, m: usize, route: Route) -> Result<CoeffMatrix> {
    let (k3, a) = spatial_exponents(params, m)?;
    Ok(CoeffMatrix {
        kind: CoeffKind::V { m },
        principal: n,
        route,
        params: params.clone(),
        entries: (*kappa_matrix(route, k3, a, n)?).clone(),
    })
}

/// One entry of a `C` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEntry {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub m: usize,
    pub q: usize,
    pub value: f64,
}

/// All nonzero-label `C` coefficients at principal number `n`.
pub fn c_table(params: &SystemParams, n: usize, route: Route) -> Result<Vec<CEntry>> {
    spatial_exponents(params, 0)?;
    let mut out = Vec::new();
    for state in cartesian_states(3, n) {
        let (n1, n2, n3) = (state.n[0], state.n[1], state.n[2]);
        for m in 0..=n1 + n2 {
            for q in 0..=n - m {
                let value = c_coeff(params, n1, n2, n3, m, q, route)?;
                out.push(CEntry { n1, n2, n3, m, q, value });
            }
        }
    }
    Ok(out)
}

pub fn c_table_csv(entries: &[CEntry], route: Route) -> String {
    let mut out = String::from("n1,n2,n3,m,q,value,route\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{route}\n",
            e.n1,
            e.n2,
            e.n3,
            e.m,
            e.q,
            format_value(e.value)
        ));
    }
    out
}

/// Coefficients of `source` in the `target` basis at the same principal
/// number: `source = Σ coeff · target_state`.
pub fn expansion_terms(
    params: &SystemParams,
    source: &BasisState,
    target: Basis,
    route: Route,
) -> Result<Vec<(BasisState, f64)>> {
    use BasisState as S;
    let d = params.dim();
    let want_dim = match source {
        S::Cartesian(c) => c.n.len(),
        S::Polar(_) => 2,
        S::Cylindrical(_) | S::Spherical(_) => 3,
    };
    let target_ok = match target {
        Basis::Cartesian => true,
        Basis::Polar => d == 2,
        Basis::Cylindrical | Basis::Spherical => d == 3,
    };
    if want_dim != d || !target_ok {
        return Err(Error::Arity(format!(
            "cannot expand a {:?} state in the {target:?} basis of a {d}-dimensional system",
            source.basis()
        )));
    }
    if source.basis() == target {
        return Ok(vec![(source.clone(), 1.0)]);
    }
    let n = source.principal();
    let mut out = Vec::new();
    match (source, target) {
        (S::Cartesian(c), Basis::Polar) => {
            let (n1, n2) = (c.n[0], c.n[1]);
            for m in 0..=n {
                let w = w_coeff(params, n1, n2, m, route)?;
                out.push((S::Polar(PolarState { n_rho: n - m, m }), w));
            }
        }
        (S::Polar(p), Basis::Cartesian) => {
            for n1 in 0..=n {
                let w = w_coeff(params, n1, n - n1, p.m, route)?;
                out.push((S::Cartesian(CartesianState::new(&[n1, n - n1])), w));
            }
        }
        (S::Cartesian(c), Basis::Cylindrical) => {
            let (n1, n2, n3) = (c.n[0], c.n[1], c.n[2]);
            for m in 0..=n1 + n2 {
                let w = w_coeff(params, n1, n2, m, route)?;
                out.push((S::Cylindrical(CylindricalState { n_rho: n1 + n2 - m, m, n3 }), w));
            }
        }
        (S::Cylindrical(c), Basis::Cartesian) => {
            let np = c.n_rho + c.m;
            for n1 in 0..=np {
                let w = w_coeff(params, n1, np - n1, c.m, route)?;
                out.push((S::Cartesian(CartesianState::new(&[n1, np - n1, c.n3])), w));
            }
        }
        (S::Cylindrical(c), Basis::Spherical) => {
            let np = c.n_rho + c.n3;
            for q in 0..=np {
                let v = v_coeff(params, c.n_rho, c.n3, q, c.m, route)?;
                out.push((S::Spherical(SphericalState { n_r: np - q, q, m: c.m }), v));
            }
        }
        (S::Spherical(s), Basis::Cylindrical) => {
            let np = s.n_r + s.q;
            for n3 in 0..=np {
                let v = v_coeff(params, np - n3, n3, s.q, s.m, route)?;
                out.push((S::Cylindrical(CylindricalState { n_rho: np - n3, m: s.m, n3 }), v));
            }
        }
        (S::Cartesian(c), Basis::Spherical) => {
            let (n1, n2, n3) = (c.n[0], c.n[1], c.n[2]);
            for m in 0..=n1 + n2 {
                for q in 0..=n - m {
                    let v = c_coeff(params, n1, n2, n3, m, q, route)?;
                    out.push((S::Spherical(SphericalState { n_r: n - m - q, q, m }), v));
                }
            }
        }
        (S::Spherical(s), Basis::Cartesian) => {
            for c in cartesian_states(3, n) {
                let (n1, n2, n3) = (c.n[0], c.n[1], c.n[2]);
                if s.m <= n1 + n2 && s.q <= n1 + n2 - s.m + n3 {
                    let v = c_coeff(params, n1, n2, n3, s.m, s.q, route)?;
                    out.push((S::Cartesian(c), v));
                }
            }
        }
        (source, target) => {
            return Err(Error::Unsupported(format!(
                "no expansion from {:?} to {target:?}",
                source.basis()
            )))
        }
    }
    Ok(out)
}

/// `Σ coeff · Ψ_target(point)` for the expansion of `source` in `target`;
/// the point is given in Cartesian coordinates.
pub fn expand(
    params: &SystemParams,
    source: &BasisState,
    target: Basis,
    point: &[f64],
    route: Route,
) -> Result<f64> {
    let mut total = 0.0;
    for (state, c) in expansion_terms(params, source, target, route)? {
        total += c * psi_at(params, &state, point)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Branch;
    use approx::assert_relative_eq;

    fn plus2(k1: f64, k2: f64) -> SystemParams {
        SystemParams::plus(1.3, &[k1, k2]).unwrap()
    }

    #[test]
    fn ground_coefficient_is_one() {
        for route in Route::ALL {
            for &(k1, k2) in &[(0.3, 0.7), (0.05, 1.1), (-0.5, -0.5), (-0.2, 0.4)] {
                let v = w_kappa(route, k1, k2, 0, 0, 0).unwrap();
                assert_relative_eq!(v, 1.0, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn golden_entries() {
        let p = plus2(0.3, 0.7);
        let cases = [
            ((1, 0, 0), 0.658280588604),
            ((1, 0, 1), -0.752772652709),
            ((0, 1, 0), 0.752772652709),
            ((2, 1, 3), 0.686263173176),
        ];
        for route in Route::ALL {
            for &((n1, n2, m), want) in &cases {
                let got = w_coeff(&p, n1, n2, m, route).unwrap();
                assert!((got - want).abs() < 1e-11, "{route} {n1}{n2}{m}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn routes_agree_including_corner() {
        for &(k1, k2) in &[(0.3, 0.7), (-0.5, -0.5), (0.5, -0.5), (-0.45, 1.15)] {
            for n in 0..=8 {
                let reference = kappa_matrix(Route::Integral, k1, k2, n).unwrap();
                for route in Route::ALL {
                    let other = kappa_matrix(route, k1, k2, n).unwrap();
                    let dev = (&*other - &*reference).amax();
                    assert!(dev < 1e-11, "route {route} n {n} k ({k1},{k2}) dev {dev}");
                }
            }
        }
    }

    #[test]
    fn orthogonal_matrices() {
        let p = SystemParams::new(2.0, &[0.3, 0.2], &[Branch::Minus, Branch::Plus]).unwrap();
        for n in 0..=10 {
            assert!(w_matrix(&p, n, Route::Hypergeometric).unwrap().orthogonality_defect() < 1e-12);
        }
    }

    #[test]
    fn label_errors() {
        let p = plus2(0.3, 0.7);
        assert!(matches!(w_hypergeometric(&p, 1, 1, 3), Err(Error::Index(_))));
        let p3 = SystemParams::plus(1.0, &[0.3, 0.7, 0.4]).unwrap();
        assert!(matches!(c_coeff(&p3, 1, 0, 0, 2, 0, Route::Hahn), Err(Error::Index(_))));
        assert!(matches!(c_coeff(&p3, 1, 0, 0, 1, 1, Route::Hahn), Err(Error::Index(_))));
        assert!(matches!(v_coeff(&p, 0, 0, 0, 0, Route::Hahn), Err(Error::Arity(_))));
    }

    #[test]
    fn route_names_round_trip() {
        for r in Route::ALL {
            assert_eq!(r.name().parse::<Route>().unwrap(), r);
        }
        assert!("bogus".parse::<Route>().is_err());
    }

    #[test]
    fn csv_keeps_full_precision() {
        let p = plus2(0.3, 0.7);
        let w = w_matrix(&p, 2, Route::Cgc).unwrap();
        let csv = w.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n1,n2,m,value,route"));
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            let (r, c): (usize, usize) = (f[0].parse().unwrap(), f[2].parse().unwrap());
            assert_eq!(f[3].parse::<f64>().unwrap(), w.get(r, c));
            assert_eq!(f[4], "cgc");
        }
    }
}
