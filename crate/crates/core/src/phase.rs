//! Linear-time simulation by phase estimation on the walk.
//!
//! Phase estimation with register size `M` and the sine input state
//! `c_x = √(2/(M+1)) sin(π(x+1)/(M+1))` maps a walk eigenvector with phase
//! `θ` to `Σ_j a_{φ_j|θ} |φ_j⟩`, where
//! `a_{φ|θ} = (1/√M) Σ_x c_x e^{ix(θ-φ)}` and `φ_j = 2πj/M`. Multiplying by
//! `e^{-iτ sin φ}` and uncomputing leaves each eigenvector `|λ⟩` of
//! `H/‖abs(H)‖` scaled by the transfer value
//! `Φ(λ, τ) = ½[g(arcsin λ) + g(π - arcsin λ)]` with
//! `g(θ) = Σ_j e^{-iτ sin φ_j} |a_{φ_j|θ}|²`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{
    check_dim, eig_hermitian, exact_propagator, require_unit, CMatrix, CVector, HermitianMatrix,
};
use crate::walk::{build_walk, dense_isometry, dense_walk, WalkVariant, COLLAPSE_THRESHOLD};

#[derive(Clone)]
pub struct PhaseEstimator {
    m: usize,
    amplitudes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for PhaseEstimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhaseEstimator").field("m", &self.m).finish()
    }
}

impl PhaseEstimator {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(WalkError::InvalidParameter(format!(
                "phase register size must be at least 2, got {m}"
            )));
        }
        let scale = (2.0 / (m as f64 + 1.0)).sqrt();
        let amplitudes = (0..m)
            .map(|x| scale * (PI * (x as f64 + 1.0) / (m as f64 + 1.0)).sin())
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        Ok(Self { m, amplitudes, fft })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn input_amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn grid_phase(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    /// `a_{φ_j|θ}` for every `j`, via one length-`M` FFT.
    pub fn amplitudes(&self, theta: f64) -> Vec<Complex64> {
        let norm = 1.0 / (self.m as f64).sqrt();
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(x, &c)| Complex64::from_polar(c * norm, x as f64 * theta))
            .collect();
        self.fft.process(&mut buf);
        buf
    }

    /// `a_{φ_j|θ}` by the direct `O(M²)` sum.
    pub fn amplitudes_direct(&self, theta: f64) -> Vec<Complex64> {
        let norm = 1.0 / (self.m as f64).sqrt();
        (0..self.m)
            .map(|j| {
                let phi = self.grid_phase(j);
                self.amplitudes
                    .iter()
                    .enumerate()
                    .map(|(x, &c)| Complex64::from_polar(c * norm, x as f64 * (theta - phi)))
                    .sum()
            })
            .collect()
    }

    /// `g(θ) = Σ_j e^{-iτ sin φ_j} |a_{φ_j|θ}|²`.
    pub fn phase_kick(&self, theta: f64, tau: f64) -> Complex64 {
        self.amplitudes(theta)
            .iter()
            .enumerate()
            .map(|(j, a)| Complex64::from_polar(a.norm_sqr(), -tau * self.grid_phase(j).sin()))
            .sum()
    }
}

/// Outcome probabilities `|a_{φ_j|θ}|²`.
pub fn qpe_distribution(p: &PhaseEstimator, theta: f64) -> Vec<f64> {
    p.amplitudes(theta).iter().map(|a| a.norm_sqr()).collect()
}

/// Closed form of `|a_{θ+Δ|θ}|²`; `None` where a denominator factor falls
/// below `1e-12`.
pub fn closed_form_probability(m: usize, delta: f64) -> Option<f64> {
    let mf = m as f64;
    let half = PI / (2.0 * (mf + 1.0));
    let s1 = (delta / 2.0 + half).sin().powi(2);
    let s2 = (delta / 2.0 - half).sin().powi(2);
    if s1 < 1e-12 || s2 < 1e-12 {
        return None;
    }
    let num = (delta * (mf + 1.0) / 2.0).cos().powi(2) * (PI / (mf + 1.0)).sin().powi(2);
    Some(num / (2.0 * mf * (mf + 1.0) * s1 * s2))
}

/// Largest gap between [`qpe_distribution`] and [`closed_form_probability`]
/// over the non-singular grid offsets, with the number of offsets compared.
pub fn closed_form_residual(p: &PhaseEstimator, theta: f64) -> (f64, usize) {
    let probs = qpe_distribution(p, theta);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for (j, prob) in probs.iter().enumerate() {
        if let Some(expected) = closed_form_probability(p.size(), p.grid_phase(j) - theta) {
            worst = worst.max((prob - expected).abs());
            compared += 1;
        }
    }
    (worst, compared)
}

/// Reduces an angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `Σ_j wrap(θ - φ_j)² |a_{φ_j|θ}|²`.
pub fn wrapped_variance(p: &PhaseEstimator, theta: f64) -> f64 {
    qpe_distribution(p, theta)
        .iter()
        .enumerate()
        .map(|(j, prob)| wrap_phase(theta - p.grid_phase(j)).powi(2) * prob)
        .sum()
}

/// Maximum wrapped variance over `points` equally spaced `θ ∈ [0, 2π)`.
pub fn max_wrapped_variance(p: &PhaseEstimator, points: usize) -> f64 {
    (0..points)
        .map(|k| wrapped_variance(p, 2.0 * PI * k as f64 / points as f64))
        .fold(0.0, f64::max)
}

pub fn variance_bound(m: usize) -> f64 {
    186.0 / (m as f64).powi(2)
}

pub fn fidelity_bound(tau: f64, m: usize) -> f64 {
    1.0 - 93.0 * tau * tau / (m as f64).powi(2)
}

/// The branch phases `(arcsin λ, π - arcsin λ)`, or the single phase
/// `sign(λ)·π/2` when the two branches merge.
fn branch_phases(lambda: f64) -> (f64, Option<f64>) {
    if lambda.abs() >= COLLAPSE_THRESHOLD {
        (PI / 2.0 * lambda.signum(), None)
    } else {
        let a = lambda.asin();
        (a, Some(PI - a))
    }
}

/// `Φ(λ, τ)`; exactly 1 at `τ = 0`.
pub fn transfer_function(p: &PhaseEstimator, lambda: f64, tau: f64) -> Complex64 {
    if tau == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    match branch_phases(lambda) {
        (theta, None) => p.phase_kick(theta, tau),
        (plus, Some(minus)) => (p.phase_kick(plus, tau) + p.phase_kick(minus, tau)) * 0.5,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferValue {
    pub lambda: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub m: usize,
    pub t: f64,
    /// `τ = ‖abs(H)‖·t`.
    pub tau_norm: f64,
    pub transfer: Vec<TransferValue>,
    /// `|⟨ψ|e^{iHt}·out⟩|`.
    pub fidelity: f64,
    pub bound_93: f64,
    /// Largest wrapped variance over the branch phases of the spectrum.
    pub variance_max: f64,
    pub bound_186: f64,
    pub leakage: f64,
    pub shift: f64,
    pub collapsed: usize,
}

/// Applies the phase-estimation channel to `psi` and compares it with
/// `e^{-iHt}psi`.
pub fn simulate_phase_channel(
    h: &HermitianMatrix,
    psi: &CVector,
    t: f64,
    m: usize,
) -> Result<(CVector, ChannelReport)> {
    check_dim(h.dim(), psi.len())?;
    require_unit(psi, 1e-10)?;
    if !t.is_finite() {
        return Err(WalkError::InvalidParameter(format!("time must be finite, got {t}")));
    }
    let walk = build_walk(h, WalkVariant::PerronWeighted)?;
    let tau = walk.normalizer() * t;
    let spec = eig_hermitian(&walk.normalized_hamiltonian())?;
    let coeffs = spec.coefficients(psi);

    let estimator = if tau == 0.0 {
        None
    } else {
        Some(PhaseEstimator::new(m)?)
    };
    let mut out = CVector::zeros(h.dim());
    let mut transfer = Vec::with_capacity(spec.dim());
    let mut variance_max: f64 = 0.0;
    let mut collapsed = 0;
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let value = match &estimator {
            None => Complex64::new(1.0, 0.0),
            Some(p) => {
                let (plus, minus) = branch_phases(lambda);
                variance_max = variance_max.max(wrapped_variance(p, plus));
                if let Some(minus) = minus {
                    variance_max = variance_max.max(wrapped_variance(p, minus));
                } else {
                    collapsed += 1;
                }
                transfer_function(p, lambda, tau)
            }
        };
        transfer.push(TransferValue {
            lambda,
            re: value.re,
            im: value.im,
        });
        out += spec.eigenvector(k) * (coeffs[k] * value);
    }
    if collapsed > 0 {
        log::warn!("{collapsed} eigenvalue(s) with |λ| ≥ 1 - 1e-8; transfer evaluated on a single branch");
    }
    out *= Complex64::from_polar(1.0, walk.shift() * t);

    let target = exact_propagator(h, t)? * psi;
    let report = ChannelReport {
        m,
        t,
        tau_norm: tau,
        transfer,
        fidelity: target.dotc(&out).norm(),
        bound_93: fidelity_bound(tau, m),
        variance_max,
        bound_186: variance_bound(m),
        leakage: 1.0 - out.norm_squared(),
        shift: walk.shift(),
        collapsed,
    };
    Ok((out, report))
}

/// `M = ⌈√93·‖abs(H)‖t/√δ⌉ + 1`, with `‖abs(H)‖` taken from the walk
/// (after any diagonal shift).
pub fn steps_for_fidelity(h: &HermitianMatrix, t: f64, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(WalkError::InvalidTolerance(delta));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WalkError::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let walk = build_walk(h, WalkVariant::PerronWeighted)?;
    Ok(register_size_for(walk.normalizer() * t, delta))
}

pub fn register_size_for(tau: f64, delta: f64) -> usize {
    (93f64.sqrt() * tau / delta.sqrt()).ceil() as usize + 1
}

/// `min_λ Re(Φ(λ, τ) e^{iλτ})` over the given eigenvalues: a lower bound on
/// the fidelity for every state supported on them.
pub fn worst_case_fidelity(p: &PhaseEstimator, tau: f64, lambdas: &[f64]) -> f64 {
    lambdas
        .iter()
        .map(|&l| (transfer_function(p, l, tau) * Complex64::from_polar(1.0, l * tau)).re)
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `M ≥ 2` with `worst_case_fidelity ≥ 1 - δ`, by bisection between
/// 2 and twice the analytic register size.
pub fn minimal_register_size(tau: f64, delta: f64, lambdas: &[f64]) -> Result<usize> {
    let ok = |m: usize| -> Result<bool> {
        Ok(worst_case_fidelity(&PhaseEstimator::new(m)?, tau, lambdas) >= 1.0 - delta)
    };
    let mut hi = 2 * register_size_for(tau, delta).max(2);
    while !ok(hi)? {
        hi *= 2;
        if hi > 1 << 24 {
            return Err(WalkError::ConvergenceFailure { residual: delta });
        }
    }
    let mut lo = 1;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if mid >= 2 && ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `Σ_λ Φ(λ, τ)|λ⟩⟨λ|` for the (shifted) Hamiltonian the walk encodes.
pub fn transfer_channel(h: &HermitianMatrix, t: f64, m: usize) -> Result<CMatrix> {
    let walk = build_walk(h, WalkVariant::PerronWeighted)?;
    let tau = walk.normalizer() * t;
    let p = PhaseEstimator::new(m)?;
    let spec = eig_hermitian(&walk.normalized_hamiltonian())?;
    Ok(spec.matrix_function(|l| transfer_function(&p, l, tau)))
}

/// Brute-force `T†P†F_tPT` with `P` materialized as an isometry into the
/// walk space tensored with the `M`-dimensional phase register.
/// Restricted to `N ≤ 4` and `M ≤ 16`.
pub fn dense_channel(h: &HermitianMatrix, t: f64, m: usize) -> Result<CMatrix> {
    if h.dim() > 4 || m > 16 {
        return Err(WalkError::InvalidParameter(
            "dense channel oracle is limited to N ≤ 4 and M ≤ 16".into(),
        ));
    }
    let walk = build_walk(h, WalkVariant::PerronWeighted)?;
    let tau = walk.normalizer() * t;
    let p = PhaseEstimator::new(m)?;
    let u = dense_walk(&walk);
    let d = u.nrows();
    let mut powers = Vec::with_capacity(m);
    let mut acc = CMatrix::identity(d, d);
    for _ in 0..m {
        powers.push(acc.clone());
        acc = &u * &acc;
    }
    let norm = 1.0 / (m as f64).sqrt();
    // rows ordered (walk index, register index)
    let mut big_p = CMatrix::zeros(d * m, d);
    for j in 0..m {
        let phi = p.grid_phase(j);
        let mut block = CMatrix::zeros(d, d);
        for (x, &c) in p.input_amplitudes().iter().enumerate() {
            block += &powers[x] * Complex64::from_polar(c * norm, -(x as f64) * phi);
        }
        for r in 0..d {
            for col in 0..d {
                big_p[(r * m + j, col)] = block[(r, col)];
            }
        }
    }
    let kick = CVector::from_fn(d * m, |row, _| {
        Complex64::from_polar(1.0, -tau * p.grid_phase(row % m).sin())
    });
    let t_iso = dense_isometry(&walk);
    let pt = &big_p * &t_iso;
    let mut fpt = pt.clone();
    for (r, mut row) in fpt.row_iter_mut().enumerate() {
        row *= kick[r];
    }
    Ok(pt.adjoint() * fpt)
}
