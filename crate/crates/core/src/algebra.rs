//! Integrals of motion of the planar system as matrices on one degenerate
//! eigenspace, and the identities they satisfy.
//!
//! The Cartesian basis of level `n` is indexed by `n₁ = 0..=n` (with
//! `n₂ = n − n₁`), the polar basis by `m = 0..=n`. Matrices act on column
//! coefficient vectors: `Ô e_i = Σ_j O[j, i] e_j`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interbasis::{w_matrix, Route};
use crate::model::{
    energy, phi_angular, phi_nu, psi_cartesian, radial_polar_a, separation_a, Branch,
    CartesianState, SystemParams,
};
use crate::stencil;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLabel {
    H,
    N,
    M,
    T,
    L0,
    Lplus,
    Lminus,
    P1,
    P2,
    P3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorBasis {
    Cartesian,
    Polar,
    /// Polar states of two branches of the ordinary oscillator (`k₁ = k₂ = ½`)
    /// that together span one level; see [`p_triplet`].
    BranchPair,
}

/// An integral of motion restricted to one eigenspace. When `imaginary` is
/// set the operator is `i · matrix`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenspaceOperator {
    pub label: OperatorLabel,
    pub principal: usize,
    pub basis: OperatorBasis,
    pub matrix: DMatrix<f64>,
    pub imaginary: bool,
}

impl EigenspaceOperator {
    fn real(label: OperatorLabel, principal: usize, basis: OperatorBasis, matrix: DMatrix<f64>) -> Self {
        Self { label, principal, basis, matrix, imaginary: false }
    }

    /// The same operator in the other planar basis, by conjugation with `W`.
    pub fn to_basis(&self, params: &SystemParams, target: OperatorBasis) -> Result<Self> {
        if self.basis == target {
            return Ok(self.clone());
        }
        let w = w_matrix(params, self.principal, Route::default())?.entries;
        let matrix = match (self.basis, target) {
            (OperatorBasis::Cartesian, OperatorBasis::Polar) => w.transpose() * &self.matrix * &w,
            (OperatorBasis::Polar, OperatorBasis::Cartesian) => &w * &self.matrix * w.transpose(),
            _ => {
                return Err(Error::Unsupported(format!(
                    "no basis change from {:?} to {target:?}",
                    self.basis
                )))
            }
        };
        Ok(Self { matrix, basis: target, ..self.clone() })
    }

    /// Largest absolute off-diagonal entry.
    pub fn off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for ((i, j), v) in self.matrix.iter().enumerate().map(|(k, v)| ((k % self.matrix.nrows(), k / self.matrix.nrows()), v)) {
            if i != j {
                worst = worst.max(v.abs());
            }
        }
        worst
    }
}

pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

fn planar(params: &SystemParams) -> Result<()> {
    if params.dim() != 2 {
        return Err(Error::Arity(format!("the invariance algebra needs dimension 2, have {}", params.dim())));
    }
    Ok(())
}

/// `H = E(n) · I`.
pub fn op_h(params: &SystemParams, n: usize) -> Result<EigenspaceOperator> {
    planar(params)?;
    let e = energy(params, n);
    Ok(EigenspaceOperator::real(
        OperatorLabel::H,
        n,
        OperatorBasis::Cartesian,
        DMatrix::identity(n + 1, n + 1) * e,
    ))
}

/// `N = J₀⁽¹⁾ − J₀⁽²⁾`, diagonal in the Cartesian basis.
pub fn op_n(params: &SystemParams, n: usize) -> Result<EigenspaceOperator> {
    planar(params)?;
    let shift = 0.5 * (params.nu(0) - params.nu(1));
    let diag = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i == j {
            i as f64 - (n - i) as f64 + shift
        } else {
            0.0
        }
    });
    Ok(EigenspaceOperator::real(OperatorLabel::N, n, OperatorBasis::Cartesian, diag))
}

/// The polar integral `M`, diagonal in the polar basis with eigenvalue
/// `A(m)²/4`.
pub fn op_m(params: &SystemParams, n: usize, basis: OperatorBasis) -> Result<EigenspaceOperator> {
    planar(params)?;
    let mut diag = DMatrix::zeros(n + 1, n + 1);
    for m in 0..=n {
        let a = separation_a(params, m)?;
        diag[(m, m)] = 0.25 * a * a;
    }
    EigenspaceOperator::real(OperatorLabel::M, n, OperatorBasis::Polar, diag).to_basis(params, basis)
}

/// `T = [N, M]` in the Cartesian basis.
pub fn op_t(params: &SystemParams, n: usize) -> Result<EigenspaceOperator> {
    let nm = op_n(params, n)?;
    let mm = op_m(params, n, OperatorBasis::Cartesian)?;
    Ok(EigenspaceOperator::real(
        OperatorLabel::T,
        n,
        OperatorBasis::Cartesian,
        commutator(&nm.matrix, &mm.matrix),
    ))
}

/// Per-axis SU(1,1) data of a Cartesian state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su11Labels {
    /// Lowest weight `j_a = (1 + σ_a k_a)/2`.
    pub j: Vec<f64>,
    /// `J₀` eigenvalue `j_a + n_a`.
    pub m: Vec<f64>,
    /// Casimir value `j_a (j_a − 1)`.
    pub casimir: Vec<f64>,
}

pub fn su11_labels(params: &SystemParams, state: &CartesianState) -> Result<Su11Labels> {
    if state.n.len() != params.dim() {
        return Err(Error::Arity(format!(
            "{} quantum numbers for dimension {}",
            state.n.len(),
            params.dim()
        )));
    }
    let j: Vec<f64> = (0..params.dim()).map(|a| 0.5 * (1.0 + params.nu(a))).collect();
    let m = j.iter().zip(&state.n).map(|(&ja, &na)| ja + na as f64).collect();
    let casimir = j.iter().map(|&ja| ja * (ja - 1.0)).collect();
    Ok(Su11Labels { j, m, casimir })
}

/// `J₊` on the span of `|j, 0⟩ … |j, size−1⟩` for exponent `ν = 2j − 1`,
/// truncated at the top.
pub fn su11_raising(nu: f64, size: usize) -> DMatrix<f64> {
    DMatrix::from_fn(size, size, |i, j| {
        if i == j + 1 {
            let n = j as f64;
            ((n + 1.0 + nu) * (n + 1.0)).sqrt()
        } else {
            0.0
        }
    })
}

/// `J₋` on the same span as [`su11_raising`].
pub fn su11_lowering(nu: f64, size: usize) -> DMatrix<f64> {
    su11_raising(nu, size).transpose()
}

/// `J₋⁽¹⁾J₊⁽²⁾` and `J₊⁽¹⁾J₋⁽²⁾` on level `n`.
fn coupled_ladders(params: &SystemParams, n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let (nu1, nu2) = (params.nu(0), params.nu(1));
    let mut down_up = DMatrix::zeros(n + 1, n + 1);
    let mut up_down = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        let (n1, n2) = (i as f64, (n - i) as f64);
        if i > 0 {
            down_up[(i - 1, i)] = (n1 * (n1 + nu1) * (n2 + 1.0 + nu2) * (n2 + 1.0)).sqrt();
        }
        if i < n {
            up_down[(i + 1, i)] = ((n1 + 1.0 + nu1) * (n1 + 1.0) * n2 * (n2 + nu2)).sqrt();
        }
    }
    (down_up, up_down)
}

/// `T = 2(J₋⁽¹⁾J₊⁽²⁾ − J₊⁽¹⁾J₋⁽²⁾)` from the SU(1,1) matrix elements.
pub fn ladder_t(params: &SystemParams, n: usize) -> Result<EigenspaceOperator> {
    planar(params)?;
    let (down_up, up_down) = coupled_ladders(params, n);
    Ok(EigenspaceOperator::real(OperatorLabel::T, n, OperatorBasis::Cartesian, (down_up - up_down) * 2.0))
}

/// `M = Q₁ + Q₂ + 2J₀⁽¹⁾J₀⁽²⁾ − J₊⁽¹⁾J₋⁽²⁾ − J₋⁽¹⁾J₊⁽²⁾ + ¼`.
pub fn ladder_m(params: &SystemParams, n: usize) -> Result<EigenspaceOperator> {
    planar(params)?;
    let (down_up, up_down) = coupled_ladders(params, n);
    let mut mat = -(down_up + up_down);
    for i in 0..=n {
        let l = su11_labels(params, &CartesianState::new(&[i, n - i]))?;
        mat[(i, i)] += l.casimir[0] + l.casimir[1] + 2.0 * l.m[0] * l.m[1] + 0.25;
    }
    Ok(EigenspaceOperator::real(OperatorLabel::M, n, OperatorBasis::Cartesian, mat))
}

/// `L₀`, `L₊`, `L₋` on level `n`: `L₀Ψ = ½(n₂ − n₁)Ψ`,
/// `L₊Ψ_{n₁n₂} = √(n₁(n₂+1)) Ψ_{n₁−1,n₂+1}`,
/// `L₋Ψ_{n₁n₂} = √((n₁+1)n₂) Ψ_{n₁+1,n₂−1}`.
pub fn su2_triplet(n: usize) -> [EigenspaceOperator; 3] {
    let l0 = DMatrix::from_fn(n + 1, n + 1, |i, j| if i == j { 0.5 * ((n - i) as f64 - i as f64) } else { 0.0 });
    let lp = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        if i + 1 == j {
            (j as f64 * ((n - j) as f64 + 1.0)).sqrt()
        } else {
            0.0
        }
    });
    let lm = lp.transpose();
    let c = OperatorBasis::Cartesian;
    [
        EigenspaceOperator::real(OperatorLabel::L0, n, c, l0),
        EigenspaceOperator::real(OperatorLabel::Lplus, n, c, lp),
        EigenspaceOperator::real(OperatorLabel::Lminus, n, c, lm),
    ]
}

/// One state of the two-branch polar basis used by [`p_triplet`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchPairState {
    pub signs: [Branch; 2],
    pub n_rho: usize,
    pub m: usize,
    /// Angular frequency `t = A(m)`: the state is `∝ cos tφ` or `sin tφ`.
    pub t: usize,
    pub cosine: bool,
}

/// The ordinary-oscillator level `p = 2n + 2 + σ₁/2 + σ₂/2 − 1` (in units
/// of `Ω`, `E = Ω(p + 1)`) split into its two branch pieces.
pub fn branch_pair_basis(level: usize) -> Vec<BranchPairState> {
    use Branch::{Minus, Plus};
    let mut out = Vec::with_capacity(level + 1);
    let (cos_signs, sin_signs, cos_n, sin_n, offset) = if level % 2 == 0 {
        ([Minus, Minus], [Plus, Plus], Some(level / 2), (level / 2).checked_sub(1), 0)
    } else {
        ([Plus, Minus], [Minus, Plus], Some((level - 1) / 2), Some((level - 1) / 2), 1)
    };
    if let Some(n) = cos_n {
        for m in 0..=n {
            out.push(BranchPairState { signs: cos_signs, n_rho: n - m, m, t: 2 * m + offset, cosine: true });
        }
    }
    if let Some(n) = sin_n {
        for m in 0..=n {
            let t = 2 * m + offset + if offset == 0 { 2 } else { 0 };
            out.push(BranchPairState { signs: sin_signs, n_rho: n - m, m, t, cosine: false });
        }
    }
    out
}

/// Sign of a polar angular factor relative to `cos tφ` (or `sin tφ`),
/// read off close to `φ = 0` where neither vanishes.
fn chebyshev_phase(s: &BranchPairState) -> f64 {
    let phi = 1e-2;
    let nu1 = 0.5 * s.signs[0].sign();
    let nu2 = 0.5 * s.signs[1].sign();
    let v = phi_nu(nu1, nu2, s.m, phi);
    let reference = if s.cosine { (s.t as f64 * phi).cos() } else { (s.t as f64 * phi).sin() };
    (v * reference).signum()
}

/// `P₁ = N`, `P₂ = L_z/2`, `P₃ = [P₁, P₂]/i` of the ordinary oscillator
/// (`k₁ = k₂ = ½`) on the level with `level` quanta, in the
/// [`branch_pair_basis`]. `P₂` is stored as its real antisymmetric part.
pub fn p_triplet(omega: f64, level: usize) -> Result<[EigenspaceOperator; 3]> {
    let basis = branch_pair_basis(level);
    let dim = basis.len();
    let mut p1 = DMatrix::zeros(dim, dim);
    // N is block diagonal: conjugate the Cartesian N of each branch by its W.
    let mut start = 0;
    while start < dim {
        let signs = basis[start].signs;
        let len = basis[start..].iter().take_while(|s| s.signs == signs).count();
        let params = SystemParams::new(omega, &[0.5, 0.5], &signs)?;
        let n = len - 1;
        let block = op_n(&params, n)?.to_basis(&params, OperatorBasis::Polar)?;
        p1.view_mut((start, start), (len, len)).copy_from(&block.matrix);
        start += len;
    }

    let mut p2 = DMatrix::zeros(dim, dim);
    for (ci, c) in basis.iter().enumerate().filter(|(_, s)| s.cosine && s.t > 0) {
        let (si, s) = basis
            .iter()
            .enumerate()
            .find(|(_, s)| !s.cosine && s.t == c.t)
            .ok_or_else(|| Error::Numeric(format!("no sine partner for t = {}", c.t)))?;
        // -½ ∂_φ cos tφ = (t/2) sin tφ
        let v = 0.5 * c.t as f64 * chebyshev_phase(c) * chebyshev_phase(s);
        p2[(si, ci)] = v;
        p2[(ci, si)] = -v;
    }
    let p3 = commutator(&p1, &p2);
    let b = OperatorBasis::BranchPair;
    Ok([
        EigenspaceOperator::real(OperatorLabel::P1, level, b, p1),
        EigenspaceOperator { label: OperatorLabel::P2, principal: level, basis: b, matrix: p2, imaginary: true },
        EigenspaceOperator::real(OperatorLabel::P3, level, b, p3),
    ])
}

/// Max-norm residual of one matrix identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub identity: String,
    pub n: usize,
    pub residual: f64,
}

impl IdentityResidual {
    fn new(identity: &str, n: usize, residual: f64) -> Self {
        Self { identity: identity.to_string(), n, residual }
    }
}

/// Closure of `{N, M, T, H}` on level `n`:
///
/// ```text
/// [M, T] = −2(MN + NM) + (k₁² − k₂²)/(2Ω) H + N
/// [T, N] = −2N² + H²/(2Ω²) − 4M + k₁² + k₂² − 1
/// [N, H] = [M, H] = 0
/// ```
pub fn check_quadratic_algebra(params: &SystemParams, n: usize) -> Result<Vec<IdentityResidual>> {
    let h = op_h(params, n)?.matrix;
    let nm = op_n(params, n)?.matrix;
    let mm = op_m(params, n, OperatorBasis::Cartesian)?.matrix;
    let t = commutator(&nm, &mm);
    let omega = params.omega();
    let (k1, k2) = (params.k()[0], params.k()[1]);
    let id = DMatrix::<f64>::identity(n + 1, n + 1);

    let mt_rhs = -(&mm * &nm + &nm * &mm) * 2.0 + &h * ((k1 * k1 - k2 * k2) / (2.0 * omega)) + &nm;
    let tn_rhs = -(&nm * &nm) * 2.0 + (&h * &h) / (2.0 * omega * omega) - &mm * 4.0
        + id * (k1 * k1 + k2 * k2 - 1.0);
    Ok(vec![
        IdentityResidual::new("[M,T] = -2(MN+NM) + (k1^2-k2^2)/(2 omega) H + N", n, (commutator(&mm, &t) - mt_rhs).amax()),
        IdentityResidual::new("[T,N] = -2N^2 + H^2/(2 omega^2) - 4M + k1^2 + k2^2 - 1", n, (commutator(&t, &nm) - tn_rhs).amax()),
        IdentityResidual::new("[N,H] = 0", n, commutator(&nm, &h).amax()),
        IdentityResidual::new("[M,H] = 0", n, commutator(&mm, &h).amax()),
    ])
}

/// SU(1,1) bookkeeping and the su(2) reductions on level `n`; when
/// `k₁ = k₂ = ½` also the `P` triplet on the ordinary-oscillator levels
/// `2n` and `2n + 1`.
pub fn check_limits_and_ladders(params: &SystemParams, n: usize) -> Result<Vec<IdentityResidual>> {
    planar(params)?;
    let mut out = Vec::new();

    let [l0, lp, lm] = su2_triplet(n);
    let (l0, lp, lm) = (l0.matrix, lp.matrix, lm.matrix);
    out.push(IdentityResidual::new("[L0,L+] = L+", n, (commutator(&l0, &lp) - &lp).amax()));
    out.push(IdentityResidual::new("[L0,L-] = -L-", n, (commutator(&l0, &lm) + &lm).amax()));
    out.push(IdentityResidual::new("[L+,L-] = 2 L0", n, (commutator(&lp, &lm) - &l0 * 2.0).amax()));

    let t = op_t(params, n)?.matrix;
    out.push(IdentityResidual::new("[N,M] = 2(J-1 J+2 - J+1 J-2)", n, (t - ladder_t(params, n)?.matrix).amax()));
    let m_cart = op_m(params, n, OperatorBasis::Cartesian)?.matrix;
    out.push(IdentityResidual::new("M = Q1 + Q2 + 2 J01 J02 - J+1 J-2 - J-1 J+2 + 1/4", n, (m_cart - ladder_m(params, n)?.matrix).amax()));

    let mut casimir = 0.0f64;
    let mut spectral = 0.0f64;
    let e = energy(params, n);
    for i in 0..=n {
        let l = su11_labels(params, &CartesianState::new(&[i, n - i]))?;
        for a in 0..2 {
            let k = params.k()[a];
            casimir = casimir.max((l.casimir[a] - (k * k - 1.0) / 4.0).abs());
        }
        spectral = spectral.max((2.0 * params.omega() * (l.m[0] + l.m[1]) - e).abs());
    }
    out.push(IdentityResidual::new("Q_a = (k_a^2 - 1)/4", n, casimir));
    out.push(IdentityResidual::new("H = 2 omega C0", n, spectral));

    let mut lowest = 0.0f64;
    for a in 0..2 {
        let jm = su11_lowering(params.nu(a), n + 1);
        lowest = lowest.max(jm.column(0).amax());
    }
    out.push(IdentityResidual::new("J- |j, 0> = 0", n, lowest));

    if params.k().iter().all(|&k| k == 0.5) {
        for level in [2 * n, 2 * n + 1] {
            let [p1, p2, p3] = p_triplet(params.omega(), level)?;
            let (p1, p2, p3) = (p1.matrix, p2.matrix, p3.matrix);
            // With P₂ = i·p2 the relations [P_k, P_l] = i ε_klm P_m read
            // [p1, p2] = p3, [p2, p3] = p1, [p3, p1] = −p2.
            out.push(IdentityResidual::new("[P1,P2] = i P3", level, (commutator(&p1, &p2) - &p3).amax()));
            out.push(IdentityResidual::new("[P2,P3] = i P1", level, (commutator(&p2, &p3) - &p1).amax()));
            out.push(IdentityResidual::new("[P3,P1] = i P2", level, (commutator(&p3, &p1) + &p2).amax()));
        }
    }
    Ok(out)
}

/// `D_xx − D_yy + (k₁²−¼)/x² − (k₂²−¼)/y²` over `4Ω`, applied to a Cartesian
/// state by finite differences.
pub fn n_differential(params: &SystemParams, state: &CartesianState, x: f64, y: f64) -> Result<f64> {
    planar(params)?;
    let h = stencil::STEP;
    let psi = |a: f64, b: f64| psi_cartesian(params, state, &[a, b]).unwrap_or(f64::NAN);
    let w2 = params.omega() * params.omega();
    let (k1, k2) = (params.k()[0], params.k()[1]);
    let v = psi(x, y);
    let dxx = -stencil::second(|a| psi(a, y), x, h) + w2 * x * x * v;
    let dyy = -stencil::second(|b| psi(x, b), y, h) + w2 * y * y * v;
    let out = (dxx - dyy + (k1 * k1 - 0.25) / (x * x) * v - (k2 * k2 - 0.25) / (y * y) * v)
        / (4.0 * params.omega());
    finite(out)
}

/// `¼(−∂_φφ + (k₁²−¼)/cos²φ + (k₂²−¼)/sin²φ)` applied to `Φ_m`.
pub fn m_differential(params: &SystemParams, m: usize, phi: f64) -> Result<f64> {
    planar(params)?;
    if !(phi > 2.0 * stencil::STEP && phi < FRAC_PI_2 - 2.0 * stencil::STEP) {
        return Err(Error::Domain(format!("phi = {phi} too close to the boundary for the stencil")));
    }
    let f = |p: f64| phi_angular(params, m, p).unwrap_or(f64::NAN);
    let (k1, k2) = (params.k()[0], params.k()[1]);
    let (s, c) = phi.sin_cos();
    let v = f(phi);
    finite(0.25 * (-stencil::second(f, phi, stencil::STEP) + (k1 * k1 - 0.25) / (c * c) * v + (k2 * k2 - 0.25) / (s * s) * v))
}

/// The differential form of `T`,
/// `−(D_xx − D_yy)/(4Ω) − (i/2Ω) D_xy L_z + (k₁²−¼)/(2Ωx²)(y∂_y + ½) − (k₂²−¼)/(2Ωy²)(x∂_x + ½)`,
/// applied to a Cartesian state.
pub fn t_differential(params: &SystemParams, state: &CartesianState, x: f64, y: f64) -> Result<f64> {
    planar(params)?;
    let h = stencil::STEP;
    let omega = params.omega();
    let w2 = omega * omega;
    let (k1, k2) = (params.k()[0], params.k()[1]);
    let psi = |a: f64, b: f64| psi_cartesian(params, state, &[a, b]).unwrap_or(f64::NAN);
    let v = psi(x, y);
    let dx = stencil::first(|a| psi(a, y), x, h);
    let dy = stencil::first(|b| psi(x, b), y, h);
    let dxx = -stencil::second(|a| psi(a, y), x, h) + w2 * x * x * v;
    let dyy = -stencil::second(|b| psi(x, b), y, h) + w2 * y * y * v;

    // −(i/2Ω) D_xy L_z = −(1/2Ω) D_xy (x∂_y − y∂_x)
    let rot = |a: f64, b: f64| {
        a * stencil::first(|bb| psi(a, bb), b, h) - b * stencil::first(|aa| psi(aa, b), a, h)
    };
    let d_xy_rot = -stencil::mixed(rot, x, y, h) + w2 * x * y * rot(x, y);

    let out = -(dxx - dyy) / (4.0 * omega) - d_xy_rot / (2.0 * omega)
        + (k1 * k1 - 0.25) / (2.0 * omega * x * x) * (y * dy + 0.5 * v)
        - (k2 * k2 - 0.25) / (2.0 * omega * y * y) * (x * dx + 0.5 * v);
    finite(out)
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain("stencil left the fundamental domain".into()))
    }
}

/// Chebyshev form of a polar state of the ordinary oscillator:
/// `R_{p,t}(ρ) · cos tφ / √π` (or `sin`), with `1/√(2π)` for `t = 0`.
pub fn chebyshev_polar(omega: f64, p: usize, t: usize, cosine: bool, rho: f64, phi: f64) -> Result<f64> {
    if t > p || (p - t) % 2 != 0 {
        return Err(Error::Index(format!("Chebyshev state needs t <= p with p - t even, got p={p}, t={t}")));
    }
    if t == 0 && !cosine {
        return Err(Error::Index("sin(0 phi) vanishes identically".into()));
    }
    let radial = radial_polar_a(omega, t as f64, (p - t) / 2, rho);
    let tf = t as f64;
    let angular = if cosine { (tf * phi).cos() } else { (tf * phi).sin() };
    let norm = if t == 0 { (2.0 * std::f64::consts::PI).sqrt() } else { std::f64::consts::PI.sqrt() };
    Ok(radial * angular / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn n_spectrum() {
        let p = SystemParams::plus(1.0, &[0.4, 0.4]).unwrap();
        let n1 = op_n(&p, 1).unwrap().matrix;
        assert_eq!((n1[(0, 0)], n1[(1, 1)]), (-1.0, 1.0));
        let p = SystemParams::plus(1.0, &[0.3, 0.7]).unwrap();
        assert_relative_eq!(op_n(&p, 0).unwrap().matrix[(0, 0)], -0.2, max_relative = 1e-15);
    }

    #[test]
    fn m_spectrum() {
        let p = SystemParams::plus(1.0, &[0.3, 0.7]).unwrap();
        assert_relative_eq!(op_m(&p, 1, OperatorBasis::Polar).unwrap().matrix[(1, 1)], 4.0);
        let corner = SystemParams::new(1.0, &[0.5, 0.5], &[Branch::Minus, Branch::Minus]).unwrap();
        assert_eq!(op_m(&corner, 3, OperatorBasis::Polar).unwrap().matrix[(0, 0)], 0.0);
    }

    #[test]
    fn t_is_antisymmetric_and_trivial_at_ground() {
        let p = SystemParams::plus(1.7, &[0.3, 0.7]).unwrap();
        assert_eq!(op_t(&p, 0).unwrap().matrix[(0, 0)], 0.0);
        let t = op_t(&p, 5).unwrap().matrix;
        assert!((&t + t.transpose()).amax() < 1e-12);
    }

    #[test]
    fn l_plus_action() {
        let [_, lp, _] = su2_triplet(1);
        // L₊Ψ_{1,0} = Ψ_{0,1}: column n₁ = 1, row n₁ = 0
        assert_eq!(lp.matrix[(0, 1)], 1.0);
    }

    #[test]
    fn casimir_value() {
        let p = SystemParams::plus(1.0, &[0.5, 0.3]).unwrap();
        let l = su11_labels(&p, &CartesianState::new(&[0, 0])).unwrap();
        assert_relative_eq!(l.casimir[0], -0.1875);
    }

    #[test]
    fn corrected_closure_holds() {
        for &(omega, k, s) in &[
            (1.0, [0.3, 0.7], [Branch::Plus, Branch::Plus]),
            (2.5, [0.3, 0.2], [Branch::Minus, Branch::Plus]),
            (0.7, [0.5, 0.5], [Branch::Minus, Branch::Minus]),
        ] {
            let p = SystemParams::new(omega, &k, &s).unwrap();
            for n in 0..=8 {
                for r in check_quadratic_algebra(&p, n).unwrap() {
                    assert!(r.residual < 1e-9, "{r:?}");
                }
                for r in check_limits_and_ladders(&p, n).unwrap() {
                    assert!(r.residual < 1e-10, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn p_triplet_spans_level() {
        for level in 0..8 {
            let basis = branch_pair_basis(level);
            assert_eq!(basis.len(), level + 1);
            let [p1, _, p3] = p_triplet(1.0, level).unwrap();
            let mut e1: Vec<f64> = p1.matrix.symmetric_eigenvalues().iter().copied().collect();
            let mut e3: Vec<f64> = p3.matrix.symmetric_eigenvalues().iter().copied().collect();
            e1.sort_by(f64::total_cmp);
            e3.sort_by(f64::total_cmp);
            for (i, (a, b)) in e1.iter().zip(&e3).enumerate() {
                let want = i as f64 - level as f64 / 2.0;
                assert!((a - want).abs() < 1e-12 && (b - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn differential_forms_match_matrices() {
        let p = SystemParams::new(1.3, &[0.3, 0.7], &[Branch::Minus, Branch::Plus]).unwrap();
        let n = 3;
        let nm = op_n(&p, n).unwrap().matrix;
        let t = op_t(&p, n).unwrap().matrix;
        for &(x, y) in &[(0.6, 0.9), (1.1, 0.4), (0.8, 1.5)] {
            for i in 0..=n {
                let s = CartesianState::new(&[i, n - i]);
                let psi = psi_cartesian(&p, &s, &[x, y]).unwrap();
                let fd = n_differential(&p, &s, x, y).unwrap();
                assert!((fd - nm[(i, i)] * psi).abs() < 1e-6 * (1.0 + psi.abs()));
                let spectral: f64 = (0..=n)
                    .map(|j| t[(j, i)] * psi_cartesian(&p, &CartesianState::new(&[j, n - j]), &[x, y]).unwrap())
                    .sum();
                let fd = t_differential(&p, &s, x, y).unwrap();
                assert!((fd - spectral).abs() < 1e-5, "T fd {fd} vs {spectral}");
            }
        }
        for m in 0..4 {
            let a = separation_a(&p, m).unwrap();
            for &phi in &[0.3, 0.8, 1.2] {
                let fd = m_differential(&p, m, phi).unwrap();
                let v = phi_angular(&p, m, phi).unwrap();
                assert!((fd - 0.25 * a * a * v).abs() < 1e-6 * (1.0 + v.abs()));
            }
        }
    }
}
