//! Lazy walks and the continuous-time limit.
//!
//! The lazy states are `|ψ_j^ε⟩ = √ε|ψ_j⟩ + √(1-ε)|j, N⟩` on
//! `ℂ^{N+1} ⊗ ℂ^{N+1}`, so that `T_ε†ST_ε = εH/‖abs(H)‖`. Running `τ`
//! steps of the lazy walk between half-swap rotations approximates
//! `e^{-iHt}` with `ε = ‖abs(H)‖t/τ`:
//!
//! ```text
//! T_ε† ((1 + iS)/√2) (-U)^τ ((1 - iS)/√2) T_ε ≈ e^{-iHt}
//! ```
//!
//! The rotation `(1 - iS)/√2` selects the branch with eigenvalue
//! `-e^{-i arcsin(ελ)}`, and the sign on `U` removes the resulting `(-1)^τ`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{
    abs_matrix, basis_vector, check_dim, exact_propagator, operator_norm, require_unit,
    spectral_norm, CMatrix, CVector, HermitianMatrix, I,
};
use crate::walk::{apply_walk, build_walk, swap, WalkOperator, WalkVariant};

#[derive(Debug, Clone, PartialEq)]
pub struct LazyWalk {
    base: WalkOperator,
    walk: WalkOperator,
    epsilon: f64,
}

impl LazyWalk {
    /// The non-lazy walk the states were derived from.
    pub fn base(&self) -> &WalkOperator {
        &self.base
    }

    /// The walk on `ℂ^{N+1} ⊗ ℂ^{N+1}` built from the lazy states.
    pub fn walk(&self) -> &WalkOperator {
        &self.walk
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Largest magnitude among the `3N²` inner products
    /// `⟨ψ_j|⊥_k⟩`, `⟨ψ_j|S|⊥_k⟩`, `⟨⊥_j|S|⊥_k⟩`, with `|ψ_j⟩` the
    /// non-lazy state embedded in the enlarged space (its `⊥` part dropped).
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.base.dim_base();
        let l = n + 1;
        let psi: Vec<CVector> = (0..n)
            .map(|j| {
                let mut v = CVector::zeros(l * l);
                for k in 0..n {
                    v[j * l + k] = self.base.coeff()[(j, k)];
                }
                v
            })
            .collect();
        let perp: Vec<CVector> = (0..n)
            .map(|j| basis_vector(l * l, j * l + n))
            .collect();
        let swapped: Vec<CVector> = perp.iter().map(|v| swap(v, l).expect("dims")).collect();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                worst = worst
                    .max(psi[j].dotc(&perp[k]).norm())
                    .max(psi[j].dotc(&swapped[k]).norm())
                    .max(perp[j].dotc(&swapped[k]).norm());
            }
        }
        worst
    }

    /// Largest deviation of the Gram matrix of the analysis basis
    /// `{((1 - iS)/√2) T_ε|j⟩}` from the identity.
    pub fn analysis_basis_residual(&self) -> f64 {
        let n = self.walk.dim_base();
        let cols: Vec<CVector> = (0..n)
            .map(|j| {
                let v = self.walk.isometry(&basis_vector(n, j)).expect("dims");
                rotate_half_swap(&v, Rotation::Minus).expect("square dimension")
            })
            .collect();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((cols[j].dotc(&cols[k]) - target).norm());
            }
        }
        worst
    }

    /// `T_ε† ((1 + iS)/√2) (-U)^τ ((1 - iS)/√2) T_ε |φ⟩`.
    pub fn procedure(&self, phi: &CVector, tau: usize) -> Result<CVector> {
        self.rotated_power(phi, tau, Rotation::Minus, -Complex64::new(1.0, 0.0))
    }

    /// `T_ε† R' (zU)^τ R T_ε |φ⟩`, where `R` is the half-swap rotation `first`
    /// and `R'` its opposite.
    pub fn rotated_power(&self, phi: &CVector, tau: usize, first: Rotation, z: Complex64) -> Result<CVector> {
        let mut v = self.walk.isometry(phi)?;
        v = rotate_half_swap(&v, first)?;
        for _ in 0..tau {
            v = apply_walk(&self.walk, &v)? * z;
        }
        v = rotate_half_swap(&v, first.opposite())?;
        self.walk.isometry_adjoint(&v)
    }

    /// The `N × N` matrix of [`LazyWalk::rotated_power`].
    pub fn rotated_power_matrix(&self, tau: usize, first: Rotation, z: Complex64) -> Result<CMatrix> {
        let n = self.walk.dim_base();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &self.rotated_power(&basis_vector(n, j), tau, first, z)?);
        }
        Ok(m)
    }

    /// The `N × N` matrix of [`LazyWalk::procedure`].
    pub fn procedure_matrix(&self, tau: usize) -> Result<CMatrix> {
        self.rotated_power_matrix(tau, Rotation::Minus, -Complex64::new(1.0, 0.0))
    }
}

pub fn build_lazy(h: &HermitianMatrix, epsilon: f64) -> Result<LazyWalk> {
    build_lazy_with(h, WalkVariant::PerronWeighted, epsilon)
}

pub fn build_lazy_with(h: &HermitianMatrix, variant: WalkVariant, epsilon: f64) -> Result<LazyWalk> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(WalkError::InvalidEpsilon(epsilon));
    }
    let base = build_walk(h, variant)?;
    Ok(lazy_from(base, epsilon))
}

fn lazy_from(base: WalkOperator, epsilon: f64) -> LazyWalk {
    let walk = base.lazy(epsilon);
    LazyWalk {
        base,
        walk,
        epsilon,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// `(1 + iS)/√2`
    Plus,
    /// `(1 - iS)/√2`
    Minus,
}

impl Rotation {
    pub fn opposite(self) -> Self {
        match self {
            Rotation::Plus => Rotation::Minus,
            Rotation::Minus => Rotation::Plus,
        }
    }
}

/// Applies `(1 ± iS)/√2` to a vector on `ℂ^L ⊗ ℂ^L`.
pub fn rotate_half_swap(v: &CVector, direction: Rotation) -> Result<CVector> {
    let l = (v.len() as f64).sqrt().round() as usize;
    check_dim(l * l, v.len())?;
    let sv = swap(v, l)?;
    let sign = match direction {
        Rotation::Plus => 1.0,
        Rotation::Minus => -1.0,
    };
    Ok((v + sv * (I * sign)) * Complex64::new(FRAC_1_SQRT_2, 0.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub tau: usize,
    pub epsilon: f64,
    /// `‖procedure matrix - e^{-iHt}‖` in operator norm.
    pub measured_error: f64,
    /// `(εh)²(1 + (π/2 - 1)εhτ)` with `h = ‖H‖/‖abs(H)‖`.
    pub bound: f64,
    pub ratio: f64,
    /// `1 - ‖output‖²`: mass outside the analysis basis.
    pub leakage: f64,
    /// `‖output - e^{-iHt}φ₀‖`.
    pub state_error: f64,
    /// Diagonal shift applied to make the diagonal nonnegative; the output
    /// has been multiplied by `e^{ict}` to undo it.
    pub shift: f64,
}

pub fn limit_error_bound(eps_h: f64, tau: usize) -> f64 {
    eps_h * eps_h * (1.0 + (PI / 2.0 - 1.0) * eps_h * tau as f64)
}

/// Runs the three-step lazy-walk procedure for total time `t` with `τ` steps
/// and compares it to the exact propagator.
pub fn simulate_by_limit(
    h: &HermitianMatrix,
    phi0: &CVector,
    t: f64,
    tau: usize,
) -> Result<(CVector, LimitReport)> {
    check_dim(h.dim(), phi0.len())?;
    require_unit(phi0, 1e-10)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WalkError::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let base = build_walk(h, WalkVariant::PerronWeighted)?;
    let epsilon = if t == 0.0 {
        0.0
    } else {
        base.normalizer() * t / tau as f64
    };
    if !(epsilon.is_finite() && epsilon <= 1.0) {
        return Err(WalkError::InsufficientSteps { epsilon });
    }
    run_limit(h, base, phi0, epsilon, tau, t)
}

/// Procedure error at a fixed laziness `ε` and step count `τ`, i.e. for the
/// effective time `t = ετ/‖abs(H)‖`, reported for the input `phi0`.
pub fn limit_error(h: &HermitianMatrix, phi0: &CVector, epsilon: f64, tau: usize) -> Result<LimitReport> {
    check_dim(h.dim(), phi0.len())?;
    require_unit(phi0, 1e-10)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(WalkError::InvalidEpsilon(epsilon));
    }
    let base = build_walk(h, WalkVariant::PerronWeighted)?;
    let t = epsilon * tau as f64 / base.normalizer();
    run_limit(h, base, phi0, epsilon, tau, t).map(|(_, report)| report)
}

fn run_limit(
    h: &HermitianMatrix,
    base: WalkOperator,
    phi0: &CVector,
    epsilon: f64,
    tau: usize,
    t: f64,
) -> Result<(CVector, LimitReport)> {
    let shift = base.shift();
    let h_ratio = spectral_norm(base.hamiltonian())? / base.normalizer();
    let lazy = lazy_from(base, epsilon);

    let correction = Complex64::from_polar(1.0, shift * t);
    let procedure = lazy.procedure_matrix(tau)? * correction;
    let exact = exact_propagator(h, t)?;
    let out = &procedure * phi0;
    let measured_error = operator_norm(&(&procedure - &exact));
    let bound = limit_error_bound(epsilon * h_ratio, tau);
    let ratio = if bound > 0.0 {
        measured_error / bound
    } else {
        0.0
    };
    let report = LimitReport {
        tau,
        epsilon,
        measured_error,
        bound,
        ratio,
        leakage: 1.0 - out.norm_squared(),
        state_error: (&out - exact * phi0).norm(),
        shift,
    };
    Ok((out, report))
}

/// Draws `shots` outcomes of the final projection. Index `N` stands for
/// "outside the analysis basis" and carries the leakage mass.
pub fn sample_outcomes<R: Rng + ?Sized>(out: &CVector, shots: usize, rng: &mut R) -> Result<Vec<usize>> {
    let mut weights: Vec<f64> = out.iter().map(|z| z.norm_sqr()).collect();
    weights.push((1.0 - out.norm_squared()).max(0.0));
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| WalkError::InvalidParameter(format!("outcome weights: {e}")))?;
    let mut counts = vec![0; weights.len()];
    for _ in 0..shots {
        counts[dist.sample(rng)] += 1;
    }
    Ok(counts)
}

/// `τ = ⌈max(‖H‖t·√((1 + (π/2 - 1)‖H‖t)/δ), ‖abs(H)‖t)⌉`, evaluated on the
/// diagonally shifted matrix the walk actually encodes.
pub fn steps_for_accuracy(h: &HermitianMatrix, t: f64, delta: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(WalkError::InvalidTolerance(delta));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WalkError::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    let shifted = h.shifted((-h.min_diagonal()).max(0.0));
    let norm = spectral_norm(&shifted)?;
    let abs_norm = spectral_norm(&abs_matrix(&shifted))?;
    Ok(steps_from_norms(norm * t, abs_norm * t, delta))
}

pub fn steps_from_norms(norm_t: f64, abs_norm_t: f64, delta: f64) -> usize {
    let accuracy = norm_t * ((1.0 + (PI / 2.0 - 1.0) * norm_t) / delta).sqrt();
    accuracy.max(abs_norm_t).ceil() as usize
}
