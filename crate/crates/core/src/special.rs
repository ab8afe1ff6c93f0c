//! Special functions and quadrature kernels.
//!
//! Everything here is a pure function of its arguments. Polynomials are
//! evaluated by forward three-term recurrence, which stays stable for the
//! non-integer parameters that the oscillator produces. Gamma-function
//! ratios are handled in log space by the callers through [`ln_gamma`].

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

// Lanczos approximation, g = 671/128, 14 terms.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

// Taylor coefficients of ln Γ(1+z): c_1 = -γ, c_k = (-1)^k ζ(k)/k.
const LN_GAMMA_1P: [f64; 30] = [
    -0.577_215_664_901_532_9,
    0.822_467_033_424_113_2,
    -0.400_685_634_386_531_43,
    0.270_580_808_427_784_54,
    -0.207_385_551_028_673_98,
    0.169_557_176_997_408_2,
    -0.144_049_896_768_846_1,
    0.125_509_669_524_743_04,
    -0.111_334_265_869_564_69,
    0.100_099_457_512_781_69,
    -0.090_954_017_145_829_04,
    0.083_353_840_546_109,
    -0.076_932_516_411_352_2,
    0.071_432_946_295_361_33,
    -0.066_668_705_882_420_46,
    0.062_500_955_141_213_04,
    -0.058_823_978_658_684_585,
    0.055_555_767_627_403_614,
    -0.052_631_679_379_616_66,
    0.050_000_047_698_101_69,
    -0.047_619_070_330_142_226,
    0.045_454_556_293_204_67,
    -0.043_478_266_053_040_26,
    0.041_666_669_150_341_21,
    -0.040_000_001_192_140_14,
    0.038_461_539_034_675_18,
    -0.037_037_037_312_989_324,
    0.035_714_285_847_333_355,
    -0.034_482_758_684_919_304,
    0.033_333_333_364_377_58,
];

/// Radius around 1 and 2 inside which the Taylor expansion replaces Lanczos.
const TAYLOR_RADIUS: f64 = 0.25;

fn ln_gamma_1p_series(z: f64) -> f64 {
    let mut acc = 0.0;
    for c in LN_GAMMA_1P.iter().rev() {
        acc = acc * z + c;
    }
    acc * z
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    let mut y = x;
    let t = x + LANCZOS_G;
    let lead = (x + 0.5) * t.ln() - t;
    let mut ser = LANCZOS_C0;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    lead + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma(x))
}

/// Unchecked `ln Γ(x)`; the argument must be positive and finite.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma called with {x}");
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if (x - 1.0).abs() < TAYLOR_RADIUS {
        return ln_gamma_1p_series(x - 1.0);
    }
    if (x - 2.0).abs() < TAYLOR_RADIUS {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p_series(z);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x
        return ln_gamma(x + 1.0) - x.ln();
    }
    ln_gamma_lanczos(x)
}

/// `ln[(2m + s + 1) Γ(m + s + 1)]`, finite at the removable pole
/// `m = 0, s = -1` where it equals `ln Γ(s + 2) = 0`.
pub(crate) fn ln_norm_gamma(m: usize, s: f64) -> f64 {
    if m == 0 {
        ln_gamma(s + 2.0)
    } else {
        (2.0 * m as f64 + s + 1.0).ln() + ln_gamma(m as f64 + s + 1.0)
    }
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a + i as f64))
}

/// `(-1)^k` as a float.
#[inline]
pub(crate) fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Associated Laguerre polynomial `L_n^ν(x)`.
pub fn laguerre(n: usize, nu: f64, x: f64) -> Result<f64> {
    if !(nu > -1.0) {
        return Err(domain(format!("laguerre requires nu > -1, got {nu}")));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("laguerre requires x >= 0, got {x}")));
    }
    Ok(laguerre_unchecked(n, nu, x))
}

pub(crate) fn laguerre_unchecked(n: usize, nu: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + nu - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - x) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^(α,β)(x)` on `[-1, 1]`.
pub fn jacobi(n: usize, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(domain(format!(
            "jacobi requires alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("jacobi requires x in [-1, 1], got {x}")));
    }
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: usize, alpha: f64, beta: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let ab = alpha + beta;
    // P_1 in closed form: the generic recurrence divides by (1 + α + β).
    let mut cur = 0.5 * (alpha - beta) + 0.5 * (ab + 2.0) * x;
    let a2b2 = alpha * alpha - beta * beta;
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + ab;
        let a1 = 2.0 * kf * (kf + ab) * (c - 2.0);
        let a2 = (c - 1.0) * a2b2;
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Physicists' Hermite polynomial `H_p(x)`.
pub fn hermite(p: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..p {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn nonpositive_integer(v: f64) -> Option<usize> {
    let r = v.round();
    if v <= 0.0 && (v - r).abs() <= 1e-12 * v.abs().max(1.0) {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Terminating `₃F₂(a1, a2, a3; b1, b2; 1)`.
///
/// The series stops at `S = min |a_i|` over the numerator parameters that are
/// nonpositive integers. Terms come from running ratios and are added with
/// Neumaier compensation, so large alternating sums keep their low digits.
pub fn hyp3f2_terminating(a: [f64; 3], b: [f64; 2]) -> Result<f64> {
    let stop = a
        .iter()
        .filter_map(|&v| nonpositive_integer(v))
        .min()
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "3F2 with numerator {a:?} does not terminate"
            ))
        })?;
    for &bj in &b {
        if let Some(p) = nonpositive_integer(bj) {
            if p < stop {
                return Err(Error::Pole(format!(
                    "3F2 denominator {bj} vanishes before termination at {stop}"
                )));
            }
        }
    }

    let mut term = 1.0;
    let mut sum = 1.0;
    let mut comp = 0.0;
    for s in 0..stop {
        let sf = s as f64;
        term *= (a[0] + sf) * (a[1] + sf) * (a[2] + sf) / ((b[0] + sf) * (b[1] + sf) * (sf + 1.0));
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    Ok(sum + comp)
}

/// Hahn polynomial `h_m^(α,β)(x, N)` in the Nikiforov–Suslov–Uvarov
/// normalization
///
/// ```text
/// h_m^(α,β)(x, N) = (-1)^m (N-m)_m (β+1)_m / m!
///                   · ₃F₂(-m, m+α+β+1, -x; β+1, 1-N; 1)
/// ```
///
/// which is orthogonal on `x = 0..N-1` with weight
/// `Γ(N+α-x)Γ(β+1+x) / (Γ(x+1)Γ(N-x))`. `h_0 = 1`.
pub fn hahn(m: usize, alpha: f64, beta: f64, x: f64, big_n: usize) -> Result<f64> {
    if big_n == 0 || m + 1 > big_n {
        return Err(Error::Index(format!("hahn requires m <= N-1, got m={m}, N={big_n}")));
    }
    if !(beta > -1.0) {
        return Err(domain(format!("hahn requires beta > -1, got {beta}")));
    }
    let mf = m as f64;
    let nf = big_n as f64;
    let ln_pre = ln_gamma(nf) - ln_gamma(nf - mf) + ln_gamma(beta + 1.0 + mf)
        - ln_gamma(beta + 1.0)
        - ln_factorial(m);
    let series = hyp3f2_terminating(
        [-mf, mf + alpha + beta + 1.0, -x],
        [beta + 1.0, 1.0 - nf],
    )?;
    Ok(parity(m as i64) * ln_pre.exp() * series)
}

/// Weight function of a Gauss rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RuleKind {
    /// Unit weight on `(-1, 1)`.
    Legendre,
    /// `(1-x)^alpha (1+x)^beta` on `(-1, 1)`.
    Jacobi { alpha: f64, beta: f64 },
    /// `x^nu e^{-x}` on `(0, ∞)`.
    Laguerre { nu: f64 },
}

impl RuleKind {
    /// `∫ w(x) dx` over the interval of the rule.
    pub fn total_mass(&self) -> f64 {
        match *self {
            RuleKind::Legendre => 2.0,
            RuleKind::Jacobi { alpha, beta } => ((alpha + beta + 1.0) * std::f64::consts::LN_2
                + ln_gamma(alpha + 1.0)
                + ln_gamma(beta + 1.0)
                - ln_gamma(alpha + beta + 2.0))
            .exp(),
            RuleKind::Laguerre { nu } => ln_gamma(nu + 1.0).exp(),
        }
    }

    /// Diagonal and off-diagonal of the Jacobi matrix of the orthonormal
    /// polynomials.
    fn recurrence(&self, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n];
        match *self {
            RuleKind::Legendre => {
                for k in 1..n {
                    let kf = k as f64;
                    off[k - 1] = kf / (4.0 * kf * kf - 1.0).sqrt();
                }
            }
            RuleKind::Jacobi { alpha, beta } => {
                let ab = alpha + beta;
                for (k, d) in diag.iter_mut().enumerate() {
                    let c = 2.0 * k as f64 + ab;
                    *d = if k == 0 {
                        (beta - alpha) / (ab + 2.0)
                    } else {
                        (beta * beta - alpha * alpha) / (c * (c + 2.0))
                    };
                }
                for k in 1..n {
                    let kf = k as f64;
                    let c = 2.0 * kf + ab;
                    off[k - 1] = if k == 1 {
                        // (k + α + β) cancels against (c - 1) at k = 1
                        (4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0).powi(2) * (ab + 3.0)))
                            .sqrt()
                    } else {
                        (4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab)
                            / (c * c * (c + 1.0) * (c - 1.0)))
                            .sqrt()
                    };
                }
            }
            RuleKind::Laguerre { nu } => {
                for (k, d) in diag.iter_mut().enumerate() {
                    *d = 2.0 * k as f64 + nu + 1.0;
                }
                for k in 1..n {
                    let kf = k as f64;
                    off[k - 1] = (kf * (kf + nu)).sqrt();
                }
            }
        }
        (diag, off)
    }

    fn interval(&self) -> (f64, f64) {
        match self {
            RuleKind::Laguerre { .. } => (0.0, f64::INFINITY),
            _ => (-1.0, 1.0),
        }
    }
}

/// Gauss rule: `∫ w(x) f(x) dx ≈ Σ_i weights[i] f(nodes[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

const QL_TOLERANCE: f64 = 1e-14;
const QL_MAX_ITER: usize = 200;

/// Eigenvalues of a symmetric tridiagonal matrix and the first component of
/// each normalized eigenvector, by implicit QL with Wilkinson-type shifts.
///
/// `off[i]` couples rows `i` and `i+1`; its last entry is ignored.
fn tridiagonal_eigen(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = d.len();
    if n == 0 {
        return Ok((d, Vec::new()));
    }
    e[n - 1] = 0.0;
    // First row of the accumulated rotation matrix.
    let mut z0 = vec![0.0; n];
    z0[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= QL_TOLERANCE * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::Numeric(format!(
                    "tridiagonal QL did not converge for eigenvalue {l} in {QL_MAX_ITER} iterations"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * zf;
                z0[i] = c * z0[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((d, z0))
}

/// Builds an `node_count`-point Gauss rule by the Golub–Welsch construction.
pub fn make_rule(kind: RuleKind, node_count: usize) -> Result<QuadratureRule> {
    if node_count == 0 {
        return Err(domain("quadrature rule needs at least one node"));
    }
    match kind {
        RuleKind::Jacobi { alpha, beta } if !(alpha > -1.0 && beta > -1.0) => {
            return Err(domain(format!(
                "jacobi rule requires alpha, beta > -1, got ({alpha}, {beta})"
            )))
        }
        RuleKind::Laguerre { nu } if !(nu > -1.0) => {
            return Err(domain(format!("laguerre rule requires nu > -1, got {nu}")))
        }
        _ => {}
    }
    let (diag, off) = kind.recurrence(node_count);
    let (values, first) = tridiagonal_eigen(diag, off)?;
    let mass = kind.total_mass();

    let mut pairs: Vec<(f64, f64)> = values
        .into_iter()
        .zip(first)
        .map(|(x, v)| (x, mass * v * v))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (lo, hi) = kind.interval();
    for (i, &(x, w)) in pairs.iter().enumerate() {
        let ordered = i == 0 || x > pairs[i - 1].0;
        if !(x > lo && x < hi && w > 0.0 && ordered) {
            return Err(Error::Numeric(format!(
                "rule {kind:?} with {node_count} nodes produced invalid node {x} / weight {w}"
            )));
        }
    }
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule { kind, nodes, weights })
}
