//! The discrete-time walk `U = iS(2TT† - 1)` attached to a Hermitian matrix.
//!
//! The walk acts on `ℂ^L ⊗ ℂ^L` with `L = N` (Perron-weighted states) or
//! `L = N + 1` (column-sum-weighted or lazy states, where index `N` holds
//! the `|⊥_j⟩ = |j, N⟩` component). A basis state `|a, b⟩` is stored at
//! flat index `a·L + b`.
//!
//! The isometry `T` maps `|j⟩` to `|ψ_j⟩ = Σ_k a_jk |j, k⟩`, so `T` is fully
//! described by the `N × L` coefficient table `a`. Phases are split
//! antisymmetrically: with `H_jk = |H_jk| e^{iθ_jk}` and `θ_jk ∈ (-π, π]`
//! for `j < k`, `a_jk` carries `e^{-iθ_jk/2}` and `a_kj` carries
//! `e^{+iθ_jk/2}`, which gives `conj(a_jk)·a_kj = H_jk / normalizer` for
//! every Hermitian input, including negative real entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{
    abs_matrix, check_dim, max_column_sum_norm, perron_vector, CMatrix,
    CVector, HermitianMatrix, SpectralDecomposition, I, ONE, ZERO,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkVariant {
    /// States weighted by the Perron vector of `abs(H)`; normalizer `‖abs(H)‖`.
    PerronWeighted,
    /// States weighted by `|H_jk|` alone; normalizer `‖H‖₁`.
    ColumnSumWeighted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOptions {
    /// Shift `H → H + cI` with `c = max(0, -min_j H_jj)` so every diagonal
    /// entry is representable as `|a_jj|²`.
    pub shift_negative_diagonal: bool,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            shift_negative_diagonal: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkOperator {
    variant: WalkVariant,
    hamiltonian: HermitianMatrix,
    shift: f64,
    normalizer: f64,
    perron: Option<CVector>,
    coeff: CMatrix,
}

impl WalkOperator {
    pub fn variant(&self) -> WalkVariant {
        self.variant
    }

    /// `N`, the dimension of the Hamiltonian.
    pub fn dim_base(&self) -> usize {
        self.coeff.nrows()
    }

    /// `L`, the dimension of each register.
    pub fn local_dim(&self) -> usize {
        self.coeff.ncols()
    }

    /// `L²`, the dimension of the walk space.
    pub fn dim(&self) -> usize {
        self.local_dim() * self.local_dim()
    }

    /// The (possibly shifted) Hamiltonian the walk encodes.
    pub fn hamiltonian(&self) -> &HermitianMatrix {
        &self.hamiltonian
    }

    /// Diagonal shift `c` applied before construction.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `‖abs(H)‖` or `‖H‖₁` depending on the variant.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn perron(&self) -> Option<&CVector> {
        self.perron.as_ref()
    }

    pub fn coeff(&self) -> &CMatrix {
        &self.coeff
    }

    /// `H / normalizer`, which equals `T†ST`.
    pub fn normalized_hamiltonian(&self) -> HermitianMatrix {
        self.hamiltonian.scaled(1.0 / self.normalizer)
    }

    /// `T x` for `x ∈ ℂ^N`.
    pub fn isometry(&self, x: &CVector) -> Result<CVector> {
        let (n, l) = self.coeff.shape();
        check_dim(n, x.len())?;
        let mut out = CVector::zeros(l * l);
        for j in 0..n {
            if x[j] == ZERO {
                continue;
            }
            for k in 0..l {
                out[j * l + k] = self.coeff[(j, k)] * x[j];
            }
        }
        Ok(out)
    }

    /// `T† v` for `v ∈ ℂ^{L²}`.
    pub fn isometry_adjoint(&self, v: &CVector) -> Result<CVector> {
        let (n, l) = self.coeff.shape();
        check_dim(l * l, v.len())?;
        Ok(CVector::from_fn(n, |j, _| {
            (0..l).map(|k| self.coeff[(j, k)].conj() * v[j * l + k]).sum()
        }))
    }

    /// Lazy version with states `√ε|ψ_j⟩ + √(1 - ε‖ψ_j restricted‖²)|j, N⟩`.
    /// `ε = 0` is allowed here; the public constructor in `lazy` rejects it.
    pub(crate) fn lazy(&self, epsilon: f64) -> WalkOperator {
        let n = self.dim_base();
        let sqrt_eps = epsilon.sqrt();
        let mut coeff = CMatrix::zeros(n, n + 1);
        for j in 0..n {
            let mut mass = 0.0;
            for k in 0..n {
                let a = self.coeff[(j, k)];
                mass += a.norm_sqr();
                coeff[(j, k)] = a * sqrt_eps;
            }
            coeff[(j, n)] = Complex64::new((1.0 - epsilon * mass).max(0.0).sqrt(), 0.0);
        }
        WalkOperator {
            variant: self.variant,
            hamiltonian: self.hamiltonian.clone(),
            shift: self.shift,
            normalizer: self.normalizer,
            perron: self.perron.clone(),
            coeff,
        }
    }
}

pub fn build_walk(h: &HermitianMatrix, variant: WalkVariant) -> Result<WalkOperator> {
    build_walk_with(h, variant, WalkOptions::default())
}

pub fn build_walk_with(
    h: &HermitianMatrix,
    variant: WalkVariant,
    options: WalkOptions,
) -> Result<WalkOperator> {
    let n = h.dim();
    let min_diag = h.min_diagonal();
    let shift = if min_diag < 0.0 {
        if !options.shift_negative_diagonal {
            let index = (0..n)
                .find(|&j| h[(j, j)].re == min_diag)
                .unwrap_or_default();
            return Err(WalkError::NegativeDiagonal {
                index,
                value: min_diag,
            });
        }
        log::warn!("shifting Hamiltonian by {} to clear negative diagonal", -min_diag);
        -min_diag
    } else {
        0.0
    };
    let h = if shift > 0.0 { h.shifted(shift) } else { h.clone() };
    if h.matrix().iter().all(|z| *z == ZERO) {
        return Err(WalkError::InvalidParameter("Hamiltonian is zero".into()));
    }

    let phase = |j: usize, k: usize| -> Complex64 {
        if j == k {
            return ONE;
        }
        let theta = if j < k { h[(j, k)].arg() } else { -h[(k, j)].arg() };
        Complex64::from_polar(1.0, -theta / 2.0)
    };

    let (normalizer, perron, coeff) = match variant {
        WalkVariant::PerronWeighted => {
            let abs_h = abs_matrix(&h);
            let d = perron_vector(&abs_h)?;
            let rho = (abs_h.matrix() * &d).dotc(&d).re;
            let coeff = CMatrix::from_fn(n, n, |j, k| {
                let mag = h[(j, k)].norm();
                if mag == 0.0 {
                    ZERO
                } else {
                    phase(j, k) * (mag * d[k].re / (d[j].re * rho)).sqrt()
                }
            });
            (rho, Some(d), coeff)
        }
        WalkVariant::ColumnSumWeighted => {
            let norm1 = max_column_sum_norm(&h);
            let mut coeff = CMatrix::zeros(n, n + 1);
            for j in 0..n {
                let mut mass = 0.0;
                for k in 0..n {
                    let mag = h[(j, k)].norm();
                    if mag != 0.0 {
                        mass += mag / norm1;
                        coeff[(j, k)] = phase(j, k) * (mag / norm1).sqrt();
                    }
                }
                coeff[(j, n)] = Complex64::new((1.0 - mass).max(0.0).sqrt(), 0.0);
            }
            (norm1, None, coeff)
        }
    };

    Ok(WalkOperator {
        variant,
        hamiltonian: h,
        shift,
        normalizer,
        perron,
        coeff,
    })
}

/// Applies the register swap `S|a, b⟩ = |b, a⟩` on `ℂ^L ⊗ ℂ^L`.
pub fn swap(v: &CVector, local_dim: usize) -> Result<CVector> {
    check_dim(local_dim * local_dim, v.len())?;
    Ok(CVector::from_fn(v.len(), |idx, _| {
        let (a, b) = (idx / local_dim, idx % local_dim);
        v[b * local_dim + a]
    }))
}

/// `U v` without forming `U`: `u = T†v`, `w = 2Tu - v`, then `iSw`.
pub fn apply_walk(w: &WalkOperator, v: &CVector) -> Result<CVector> {
    let (n, l) = w.coeff.shape();
    check_dim(l * l, v.len())?;
    let u = w.isometry_adjoint(v)?;
    let mut reflected = -v;
    for j in 0..n {
        let uj = u[j] * 2.0;
        for k in 0..l {
            reflected[j * l + k] += w.coeff[(j, k)] * uj;
        }
    }
    Ok(CVector::from_fn(v.len(), |idx, _| {
        let (a, b) = (idx / l, idx % l);
        I * reflected[b * l + a]
    }))
}

/// Dense `T` as an `L² × N` matrix.
pub fn dense_isometry(w: &WalkOperator) -> CMatrix {
    let (n, l) = w.coeff.shape();
    let mut t = CMatrix::zeros(l * l, n);
    for j in 0..n {
        for k in 0..l {
            t[(j * l + k, j)] = w.coeff[(j, k)];
        }
    }
    t
}

pub fn dense_swap(local_dim: usize) -> CMatrix {
    let d = local_dim * local_dim;
    let mut s = CMatrix::zeros(d, d);
    for a in 0..local_dim {
        for b in 0..local_dim {
            s[(a * local_dim + b, b * local_dim + a)] = ONE;
        }
    }
    s
}

/// Dense `U = iS(2TT† - 1)`.
pub fn dense_walk(w: &WalkOperator) -> CMatrix {
    let t = dense_isometry(w);
    let d = t.nrows();
    let reflection = (&t * t.adjoint()).map(|z| z * 2.0) - CMatrix::identity(d, d);
    (dense_swap(w.local_dim()) * reflection).map(|z| z * I)
}

/// Eigenvalues of `U` restricted to its invariant subspace `span{T, ST}`,
/// computed from a dense orthonormal basis of that span (small `N` only).
pub fn restricted_spectrum(w: &WalkOperator) -> Result<Vec<Complex64>> {
    let t = dense_isometry(w);
    let s = dense_swap(w.local_dim());
    let st = &s * &t;
    let n = t.ncols();
    let mut span = CMatrix::zeros(t.nrows(), 2 * n);
    span.columns_mut(0, n).copy_from(&t);
    span.columns_mut(n, n).copy_from(&st);
    let svd = span.svd(true, false);
    let u_left = svd.u.expect("left singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-8)
        .collect();
    let q = CMatrix::from_fn(t.nrows(), keep.len(), |r, c| u_left[(r, keep[c])]);
    let r = q.adjoint() * dense_walk(w) * &q;
    let schur = nalgebra::linalg::Schur::try_new(r, f64::EPSILON, 0).ok_or(
        WalkError::ConvergenceFailure {
            residual: f64::INFINITY,
        },
    )?;
    let eig = schur.eigenvalues().ok_or(WalkError::ConvergenceFailure {
        residual: f64::INFINITY,
    })?;
    Ok(eig.iter().copied().collect())
}

/// Eigenvalues predicted for `U` on `span{T, ST}`: `e^{i arcsin λ}` and
/// `-e^{-i arcsin λ}` per eigenvalue `λ` of `T†ST`, merged into the single
/// value `i·sign(λ)` when `|λ| = 1`.
pub fn predicted_spectrum(lambdas: &[f64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(2 * lambdas.len());
    for &lambda in lambdas {
        if lambda.abs() >= COLLAPSE_THRESHOLD {
            out.push(I * lambda.signum());
        } else {
            let phase = lambda.asin();
            out.push(Complex64::from_polar(1.0, phase));
            out.push(-Complex64::from_polar(1.0, -phase));
        }
    }
    out
}

/// Greedy one-to-one matching of two eigenvalue lists; returns the largest
/// matched distance, or infinity when the lists differ in length.
pub fn spectrum_mismatch(found: &[Complex64], expected: &[Complex64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; expected.len()];
    let mut worst: f64 = 0.0;
    for z in found {
        let best = (0..expected.len())
            .filter(|&k| !used[k])
            .min_by(|&a, &b| {
                (expected[a] - z)
                    .norm()
                    .total_cmp(&(expected[b] - z).norm())
            })
            .expect("lengths agree");
        used[best] = true;
        worst = worst.max((expected[best] - z).norm());
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkEigenpair {
    pub lambda: f64,
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    pub vec_plus: CVector,
    pub vec_minus: CVector,
    /// `|λ| ≥ 1 - 1e-8`: a single eigenvector `T|λ⟩` with eigenvalue `i·sign(λ)`.
    pub collapsed: bool,
    pub residual_plus: f64,
    pub residual_minus: f64,
}

pub const COLLAPSE_THRESHOLD: f64 = 1.0 - 1e-8;

/// Eigenpairs of `U` built from the spectrum of `T†ST = H/normalizer`.
///
/// For `|λ| < 1` the vectors are `(1 - e^{∓i arccos λ}S)T|λ⟩/√(2(1-λ²))`
/// with eigenvalues `μ_± = ±e^{±i arcsin λ}`.
pub fn walk_eigenpairs(w: &WalkOperator, spec: &SpectralDecomposition) -> Result<Vec<WalkEigenpair>> {
    check_dim(w.dim_base(), spec.dim())?;
    let l = w.local_dim();
    let mut pairs = Vec::with_capacity(spec.dim());
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let lambda = lambda.clamp(-1.0, 1.0);
        let t_lambda = w.isometry(&spec.eigenvector(k))?;
        let pair = if lambda.abs() >= COLLAPSE_THRESHOLD {
            let mu = I * lambda.signum();
            let r = (apply_walk(w, &t_lambda)? - &t_lambda * mu).norm();
            WalkEigenpair {
                lambda,
                mu_plus: mu,
                mu_minus: mu,
                vec_plus: t_lambda.clone(),
                vec_minus: t_lambda,
                collapsed: true,
                residual_plus: r,
                residual_minus: r,
            }
        } else {
            let st = swap(&t_lambda, l)?;
            let asin = lambda.asin();
            let acos = lambda.acos();
            let norm = (2.0 * (1.0 - lambda * lambda)).sqrt();
            let build = |sign: f64| -> CVector {
                let rot = Complex64::from_polar(1.0, -sign * acos);
                (&t_lambda - &st * rot).unscale(norm)
            };
            let mu_plus = Complex64::from_polar(1.0, asin);
            let mu_minus = -Complex64::from_polar(1.0, -asin);
            let vec_plus = build(1.0);
            let vec_minus = build(-1.0);
            let residual_plus = (apply_walk(w, &vec_plus)? - &vec_plus * mu_plus).norm();
            let residual_minus = (apply_walk(w, &vec_minus)? - &vec_minus * mu_minus).norm();
            WalkEigenpair {
                lambda,
                mu_plus,
                mu_minus,
                vec_plus,
                vec_minus,
                collapsed: false,
                residual_plus,
                residual_minus,
            }
        };
        pairs.push(pair);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{basis_vector, eig_hermitian, frobenius};
    use crate::sampling::{random_hermitian, random_real_symmetric, random_unit_vector, stream};
    use std::f64::consts::PI;

    fn gram_residuals(w: &WalkOperator) -> (f64, f64) {
        let t = dense_isometry(w);
        let n = w.dim_base();
        let s = dense_swap(w.local_dim());
        let tt = t.adjoint() * &t - CMatrix::identity(n, n);
        let tst = t.adjoint() * s * &t - w.normalized_hamiltonian().matrix();
        (frobenius(&tt), frobenius(&tst))
    }

    #[test]
    fn pauli_x_walk() {
        let h = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        assert!((w.normalizer() - 1.0).abs() < 1e-12);
        let d = w.perron().unwrap();
        assert!((d[0].re - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((w.coeff()[(0, 1)] - ONE).norm() < 1e-12);
        assert!((w.coeff()[(1, 0)] - ONE).norm() < 1e-12);
        assert_eq!(w.coeff()[(0, 0)], ZERO);
    }

    #[test]
    fn negative_entries_split_phase() {
        let h = HermitianMatrix::from_real_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]).unwrap();
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        let a12 = w.coeff()[(0, 1)];
        let a21 = w.coeff()[(1, 0)];
        assert!((a12 - Complex64::from_polar(1.0, -PI / 2.0)).norm() < 1e-12);
        assert!((a21 - Complex64::from_polar(1.0, PI / 2.0)).norm() < 1e-12);
        assert!((a12.conj() * a21 + 1.0).norm() < 1e-12);
    }

    #[test]
    fn gram_identities_both_variants() {
        let mut rng = stream(0, "walk-gram");
        for n in [2, 3, 5] {
            let mut inputs = vec![random_hermitian(&mut rng, n), random_real_symmetric(&mut rng, n)];
            inputs.push(random_hermitian(&mut rng, n).scaled(-1.0));
            for h in inputs {
                for variant in [WalkVariant::PerronWeighted, WalkVariant::ColumnSumWeighted] {
                    let w = build_walk(&h, variant).unwrap();
                    let (tt, tst) = gram_residuals(&w);
                    assert!(tt < 1e-10 && tst < 1e-10, "{variant:?}: {tt:e} {tst:e}");
                }
            }
        }
    }

    #[test]
    fn coefficient_support_matches_hamiltonian() {
        let h = HermitianMatrix::from_real_rows(&[
            &[1.0, 2.0, 0.0],
            &[2.0, 0.0, -1.0],
            &[0.0, -1.0, 0.5],
        ])
        .unwrap();
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        for j in 0..3 {
            let row: f64 = (0..3).map(|k| w.coeff()[(j, k)].norm_sqr()).sum();
            assert!((row - 1.0).abs() < 1e-10);
            for k in 0..3 {
                assert_eq!(w.coeff()[(j, k)] == ZERO, h[(j, k)] == ZERO);
            }
        }
    }

    #[test]
    fn negative_diagonal_handling() {
        let h = HermitianMatrix::from_real_rows(&[&[-1.0, 1.0], &[1.0, 0.5]]).unwrap();
        let err = build_walk_with(
            &h,
            WalkVariant::PerronWeighted,
            WalkOptions {
                shift_negative_diagonal: false,
            },
        )
        .unwrap_err();
        assert_eq!(err, WalkError::NegativeDiagonal { index: 0, value: -1.0 });
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        assert_eq!(w.shift(), 1.0);
        assert_eq!(w.hamiltonian()[(0, 0)].re, 0.0);
    }

    #[test]
    fn reducible_input_is_rejected() {
        let h = HermitianMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            build_walk(&h, WalkVariant::PerronWeighted),
            Err(WalkError::ReducibleMatrix { .. })
        ));
        // the column-sum variant needs no Perron data
        assert!(build_walk(&h, WalkVariant::ColumnSumWeighted).is_ok());
    }

    #[test]
    fn structured_matches_dense() {
        let mut rng = stream(0, "walk-dense");
        for n in [2, 4, 7] {
            let h = random_hermitian(&mut rng, n);
            for variant in [WalkVariant::PerronWeighted, WalkVariant::ColumnSumWeighted] {
                let w = build_walk(&h, variant).unwrap();
                let u = dense_walk(&w);
                let d = u.nrows();
                assert!(frobenius(&(u.adjoint() * &u - CMatrix::identity(d, d))) < 1e-10);
                let v = random_unit_vector(&mut rng, d);
                let diff = apply_walk(&w, &v).unwrap() - &u * &v;
                assert!(diff.camax() < 1e-10);
            }
        }
    }

    #[test]
    fn walk_acts_on_isometry_images() {
        let mut rng = stream(1, "walk-images");
        let h = random_hermitian(&mut rng, 4);
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        let l = w.local_dim();
        for j in 0..4 {
            let tj = w.isometry(&basis_vector(4, j)).unwrap();
            let expect = swap(&tj, l).unwrap() * I;
            assert!((apply_walk(&w, &tj).unwrap() - expect).norm() < 1e-12);
        }
        let spec = eig_hermitian(&w.normalized_hamiltonian()).unwrap();
        for k in 0..4 {
            let lambda = spec.eigenvalues[k];
            let t = w.isometry(&spec.eigenvector(k)).unwrap();
            let st = swap(&t, l).unwrap();
            let expect = &st * (I * 2.0 * lambda) - &t * I;
            assert!((apply_walk(&w, &st).unwrap() - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let h = HermitianMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        assert_eq!(
            apply_walk(&w, &CVector::zeros(3)),
            Err(WalkError::DimensionMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn eigenpair_values() {
        // λ = 0 → μ = ±1; λ = 1/2 → ±e^{±iπ/6}
        let h = HermitianMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
        let spec = eig_hermitian(&w.normalized_hamiltonian()).unwrap();
        let pairs = walk_eigenpairs(&w, &spec).unwrap();
        assert!(pairs[0].lambda.abs() < 1e-12);
        assert!((pairs[0].mu_plus - ONE).norm() < 1e-12);
        assert!((pairs[0].mu_minus + ONE).norm() < 1e-12);
        // top Perron value collapses: ST|λ⟩ = T|λ⟩ and UT|λ⟩ = iT|λ⟩
        assert!(pairs[1].collapsed);
        let t = &pairs[1].vec_plus;
        assert!((swap(t, w.local_dim()).unwrap() - t).norm() < 1e-12);
        assert!(pairs[1].residual_plus < 1e-12);
        assert_eq!(pairs[1].mu_plus, I);

        let h = HermitianMatrix::from_real_rows(&[&[0.0, 0.5, 0.5], &[0.5, 0.0, 0.5], &[0.5, 0.5, 0.0]])
            .unwrap();
        let w = build_walk(&h, WalkVariant::ColumnSumWeighted).unwrap();
        let spec = eig_hermitian(&w.normalized_hamiltonian()).unwrap();
        // eigenvalues of (J - I)/2: -1/2, -1/2, 1
        let pairs = walk_eigenpairs(&w, &spec).unwrap();
        let p = &pairs[0];
        assert!((p.lambda + 0.5).abs() < 1e-12);
        assert!((p.mu_plus - Complex64::from_polar(1.0, -PI / 6.0)).norm() < 1e-12);
        assert!((p.mu_minus + Complex64::from_polar(1.0, PI / 6.0)).norm() < 1e-12);
        assert!(p.residual_plus < 1e-12 && p.residual_minus < 1e-12);
    }

    #[test]
    fn eigenpairs_of_random_hamiltonians() {
        let mut rng = stream(2, "walk-eigen");
        for n in [3, 4, 6] {
            let h = random_hermitian(&mut rng, n);
            let w = build_walk(&h, WalkVariant::PerronWeighted).unwrap();
            let spec = eig_hermitian(&w.normalized_hamiltonian()).unwrap();
            for p in walk_eigenpairs(&w, &spec).unwrap() {
                assert!(!p.collapsed);
                assert!(p.residual_plus < 1e-9 && p.residual_minus < 1e-9);
                assert!((p.vec_plus.norm() - 1.0).abs() < 1e-10);
                assert!((p.vec_minus.norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn restricted_spectrum_matches_prediction() {
        let mut rng = stream(4, "walk-spectrum");
        for n in [2, 3, 5] {
            let h = random_hermitian(&mut rng, n);
            for variant in [WalkVariant::PerronWeighted, WalkVariant::ColumnSumWeighted] {
                let w = build_walk(&h, variant).unwrap();
                let spec = eig_hermitian(&w.normalized_hamiltonian()).unwrap();
                let found = restricted_spectrum(&w).unwrap();
                let expected = predicted_spectrum(&spec.eigenvalues);
                assert!(spectrum_mismatch(&found, &expected) < 1e-9, "n={n} {variant:?}");
            }
        }
    }
}
