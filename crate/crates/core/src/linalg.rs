//! Dense complex linear algebra: Hermitian matrices, a deterministic
//! eigendecomposition, norms, Perron vectors and the exact propagator.

use std::collections::VecDeque;
use std::ops::Index;

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::tolerance::Tolerances;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// A dense Hermitian matrix. The stored entries are exactly Hermitian:
/// construction symmetrizes the input as `(A + A†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::DEFAULT.hermiticity)
    }

    /// Accepts `m` if every `|m_jk - conj(m_kj)|` is at most `tol`.
    pub fn with_tolerance(m: CMatrix, tol: f64) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Err(WalkError::Empty);
        }
        if rows != cols {
            return Err(WalkError::NotSquare { rows, cols });
        }
        let mut max_asymmetry = 0.0f64;
        for j in 0..rows {
            for k in j..rows {
                let d = (m[(j, k)] - m[(k, j)].conj()).norm();
                if !d.is_finite() {
                    return Err(WalkError::NotHermitian {
                        max_asymmetry: f64::INFINITY,
                    });
                }
                max_asymmetry = max_asymmetry.max(d);
            }
        }
        if max_asymmetry > tol {
            return Err(WalkError::NotHermitian { max_asymmetry });
        }
        let entries = (&m + m.adjoint()).map(|z| z * 0.5);
        Ok(Self { entries })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| Complex64::new(x, 0.0)))
    }

    /// Builds a matrix from row slices of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(WalkError::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, |r| r.len()),
            });
        }
        Self::from_real(&DMatrix::from_fn(n, n, |j, k| rows[j][k]))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            entries: CMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * s),
        }
    }

    /// `H + c·I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut entries = self.entries.clone();
        for j in 0..self.dim() {
            entries[(j, j)] += c;
        }
        Self { entries }
    }

    pub fn sum(&self, other: &HermitianMatrix) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(WalkError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn min_diagonal(&self) -> f64 {
        (0..self.dim())
            .map(|j| self.entries[(j, j)].re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_dim(self.dim(), v.len())?;
        Ok(&self.entries * v)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.entries[idx]
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(WalkError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Fails with `NotNormalized` unless `|‖v‖ - 1| <= tol`.
pub fn require_unit(v: &CVector, tol: f64) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > tol || !norm.is_finite() {
        return Err(WalkError::NotNormalized { norm });
    }
    Ok(())
}

pub fn basis_vector(n: usize, j: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[j] = ONE;
    v
}

/// Eigenvalues in ascending order and orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V f(Λ) V†`.
    pub fn matrix_function<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let fk = f(lambda);
            for z in scaled.column_mut(k).iter_mut() {
                *z *= fk;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.matrix_function(|l| Complex64::new(l, 0.0))
    }

    /// Expansion coefficients `V† v` of `v` in the eigenbasis.
    pub fn coefficients(&self, v: &CVector) -> CVector {
        self.eigenvectors.adjoint() * v
    }
}

pub fn eig_hermitian(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    eig_hermitian_with(h, &Tolerances::DEFAULT)
}

/// Deterministic Hermitian eigendecomposition.
///
/// Eigenvalues are sorted ascending. Each eigenvector has its
/// largest-magnitude component (lowest index on ties) real and positive.
/// Within a degenerate cluster the basis is replaced by the Gram-Schmidt
/// orthonormalization of the cluster projector applied to the standard
/// basis in index order, so the output depends only on the eigenspaces.
pub fn eig_hermitian_with(h: &HermitianMatrix, tol: &Tolerances) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 0)
        .ok_or(WalkError::ConvergenceFailure {
            residual: f64::INFINITY,
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = eigenvalues
        .iter()
        .fold(1.0f64, |acc, l| acc.max(l.abs()));
    let raw = SpectralDecomposition {
        eigenvalues: eigenvalues.clone(),
        eigenvectors: vectors.clone(),
    };
    let residual = frobenius(&(raw.reconstruct() - h.matrix()));
    let orth = frobenius(&(vectors.adjoint() * &vectors - CMatrix::identity(n, n)));
    if !(residual <= tol.algebraic * scale) || !(orth <= tol.algebraic) {
        return Err(WalkError::ConvergenceFailure {
            residual: residual.max(orth),
        });
    }

    let gap = tol.cluster_gap * scale;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eigenvalues[end] - eigenvalues[end - 1] < gap {
            end += 1;
        }
        if end - start > 1 {
            rebase_cluster(&mut vectors, start, end);
        }
        start = end;
    }

    for k in 0..n {
        fix_phase(&mut vectors, k);
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: vectors,
    })
}

fn rebase_cluster(vectors: &mut CMatrix, start: usize, end: usize) {
    let n = vectors.nrows();
    let block = vectors.columns(start, end - start).into_owned();
    let projector = &block * block.adjoint();
    // Completion is guaranteed: the rejected residuals sum to less than n/(2n).
    let threshold = 1.0 / (2.0 * n as f64);
    let mut accepted: Vec<CVector> = Vec::with_capacity(end - start);
    for i in 0..n {
        if accepted.len() == end - start {
            break;
        }
        let mut r: CVector = projector.column(i).into_owned();
        for q in &accepted {
            let c = q.dotc(&r);
            r.axpy(-c, q, ONE);
        }
        // second pass for numerical orthogonality
        for q in &accepted {
            let c = q.dotc(&r);
            r.axpy(-c, q, ONE);
        }
        let norm_sq = r.norm_squared();
        if norm_sq >= threshold {
            accepted.push(r.unscale(norm_sq.sqrt()));
        }
    }
    for (offset, q) in accepted.iter().enumerate() {
        vectors.set_column(start + offset, q);
    }
}

fn fix_phase(vectors: &mut CMatrix, k: usize) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (r, z) in vectors.column(k).iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = r;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let pivot = vectors[(best, k)];
    let phase = pivot.conj() / best_mag;
    for z in vectors.column_mut(k).iter_mut() {
        *z *= phase;
    }
    vectors[(best, k)] = Complex64::new(best_mag, 0.0);
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Elementwise absolute value `Σ |H_jk| |j⟩⟨k|`.
pub fn abs_matrix(h: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix {
        entries: h.matrix().map(|z| Complex64::new(z.norm(), 0.0)),
    }
}

/// Largest eigenvalue magnitude.
pub fn spectral_norm(h: &HermitianMatrix) -> Result<f64> {
    let spec = eig_hermitian(h)?;
    Ok(spectral_norm_of(&spec))
}

pub fn spectral_norm_of(spec: &SpectralDecomposition) -> f64 {
    spec.eigenvalues.iter().fold(0.0f64, |acc, l| acc.max(l.abs()))
}

/// `max_j Σ_k |H_jk|`.
pub fn max_column_sum_norm(h: &HermitianMatrix) -> f64 {
    let m = h.matrix();
    (0..h.dim())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value of an arbitrary complex matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    match SVD::try_new(m.clone(), false, false, f64::EPSILON, 0) {
        Some(svd) => svd.singular_values.max(),
        None => frobenius(m),
    }
}

/// Connected components of the off-diagonal nonzero pattern, each sorted,
/// ordered by smallest member.
pub fn pattern_components(a: &HermitianMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let m = a.matrix();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && v != u && m[(u, v)] != ZERO {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Principal eigenvector of an entrywise nonnegative irreducible matrix,
/// normalized with strictly positive entries.
pub fn perron_vector(a: &HermitianMatrix) -> Result<CVector> {
    let n = a.dim();
    let m = a.matrix();
    let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1.0);
    let tol = Tolerances::DEFAULT.algebraic * scale;
    for j in 0..n {
        for k in 0..n {
            let z = m[(j, k)];
            if z.re < -tol || z.im.abs() > tol {
                return Err(WalkError::NotNonnegative { row: j, col: k });
            }
        }
    }
    let components = pattern_components(a);
    if components.len() > 1 {
        return Err(WalkError::ReducibleMatrix { components });
    }
    let spec = eig_hermitian(a)?;
    let rho = spec.eigenvalues[n - 1];
    let top = spec.eigenvector(n - 1);
    // the phase convention already makes the largest entry positive
    let d = top.map(|z| Complex64::new(z.re.abs(), 0.0));
    if d.iter().any(|z| z.re <= 0.0) {
        return Err(WalkError::ConvergenceFailure { residual: 0.0 });
    }
    let d = d.unscale(d.norm());
    let residual = (m * &d - d.scale(rho)).norm();
    if residual > Tolerances::DEFAULT.algebraic * rho.max(1.0) {
        return Err(WalkError::ConvergenceFailure { residual });
    }
    Ok(d)
}

/// `e^{-iHt}` via the eigendecomposition.
pub fn exact_propagator(h: &HermitianMatrix, t: f64) -> Result<CMatrix> {
    let spec = eig_hermitian(h)?;
    propagator_from(&spec, t)
}

pub fn propagator_from(spec: &SpectralDecomposition, t: f64) -> Result<CMatrix> {
    if !t.is_finite() {
        return Err(WalkError::InvalidParameter(format!("time must be finite, got {t}")));
    }
    let w = spec.matrix_function(|l| Complex64::from_polar(1.0, -l * t));
    let n = spec.dim();
    let defect = frobenius(&(w.adjoint() * &w - CMatrix::identity(n, n)));
    if defect > Tolerances::DEFAULT.unitarity {
        return Err(WalkError::ConvergenceFailure { residual: defect });
    }
    Ok(w)
}
