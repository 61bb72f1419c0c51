//! Continuous-time walk for element distinctness.
//!
//! The walk runs on the Johnson graph `J(N, m)` with `m = nint(N^{2/3})`,
//! plus one pendant vertex attached to every subset containing both
//! colliding indices. Its dynamics from the uniform superposition stay in
//! the span of `|A₀⟩, |A₁⟩, |A₂⟩, |B₂⟩`, where `A_j` collects the subsets
//! holding `j` of the two colliding indices and `B₂` the pendant vertices.
//! In that basis `H = H_U + H_C` is a real symmetric 4×4 matrix.
//!
//! For large `N` the two highest eigenvalues behave like
//! `λ± N^{1/3} → (1 ± √17)/4` (effective matrix `[[0, 1], [1, 1/2]]N^{-1/3}`
//! on `span{A₀, B₂}`), with eigenvectors tending to
//! `(√μ, 0, 0, √(1-μ))` and `(√(1-μ), 0, 0, -√μ)`, `μ = 8/(17 + √17)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{eig_hermitian, propagator_from, CVector, HermitianMatrix, SpectralDecomposition};
use crate::phase::register_size_for;

pub const MIN_N: usize = 8;
pub const MAX_FULL_GRAPH_N: usize = 12;

/// `μ = 8/(17 + √17)`.
pub fn mu() -> f64 {
    8.0 / (17.0 + 17f64.sqrt())
}

/// Limits of `λ± N^{1/3}`: `((1 + √17)/4, (1 - √17)/4)`.
pub fn scaled_eigenvalue_limits() -> (f64, f64) {
    ((1.0 + 17f64.sqrt()) / 4.0, (1.0 - 17f64.sqrt()) / 4.0)
}

/// `N^{2/3}` computed as `cbrt(N)²`, exact for perfect cubes.
pub fn two_thirds_power(n: usize) -> f64 {
    (n as f64).cbrt().powi(2)
}

/// Subset size `nint(N^{2/3})`, rounding halves up.
pub fn subset_size(n: usize) -> usize {
    (two_thirds_power(n) + 0.5).floor() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdInstance {
    pub n: usize,
    pub m: usize,
    /// Walk part, in the basis `A₀, A₁, A₂, B₂`.
    pub h_walk: HermitianMatrix,
    /// Marking part: the `A₂ - B₂` coupling.
    pub h_marked: HermitianMatrix,
    /// Uniform superposition over the Johnson-graph vertices.
    pub start: CVector,
}

impl EdInstance {
    pub fn hamiltonian(&self) -> HermitianMatrix {
        self.h_walk.sum(&self.h_marked).expect("both 4x4")
    }
}

pub fn build_ed(n: usize) -> Result<EdInstance> {
    if n < MIN_N {
        return Err(WalkError::TooSmall { n, min: MIN_N });
    }
    let m = subset_size(n);
    let (nf, mf) = (n as f64, m as f64);
    let scale = 1.0 / two_thirds_power(n);
    let a01 = (2.0 * mf * (nf - mf - 1.0)).sqrt();
    let a12 = (2.0 * (nf - mf) * (mf - 1.0)).sqrt();
    let mut walk = DMatrix::zeros(4, 4);
    walk[(0, 0)] = -2.0 * mf;
    walk[(1, 1)] = 2.0 - nf;
    walk[(2, 2)] = 2.0 * (mf - nf);
    walk[(0, 1)] = a01;
    walk[(1, 0)] = a01;
    walk[(1, 2)] = a12;
    walk[(2, 1)] = a12;
    let walk = walk * scale;
    let mut marked = DMatrix::zeros(4, 4);
    marked[(2, 3)] = 1.0;
    marked[(3, 2)] = 1.0;

    let pairs = nf * (nf - 1.0);
    let weights = [
        (nf - mf) * (nf - mf - 1.0) / pairs,
        2.0 * mf * (nf - mf) / pairs,
        mf * (mf - 1.0) / pairs,
        0.0,
    ];
    let start = CVector::from_iterator(4, weights.iter().map(|w| Complex64::new(w.sqrt(), 0.0)));
    Ok(EdInstance {
        n,
        m,
        h_walk: HermitianMatrix::from_real(&walk)?,
        h_marked: HermitianMatrix::from_real(&marked)?,
        start,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdSpectrum {
    pub n: usize,
    pub m: usize,
    /// All four eigenvalues, ascending.
    pub eigenvalues: [f64; 4],
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub gap: f64,
    /// `λ± N^{1/3}`.
    pub scaled_plus: f64,
    pub scaled_minus: f64,
    /// Eigenvectors in the basis `A₀, A₁, A₂, B₂`, signed so the `A₀`
    /// component is nonnegative.
    pub vec_plus: [f64; 4],
    pub vec_minus: [f64; 4],
}

fn real_vector(spec: &SpectralDecomposition, k: usize) -> [f64; 4] {
    let v = spec.eigenvector(k);
    let sign = if v[0].re < 0.0 { -1.0 } else { 1.0 };
    [0, 1, 2, 3].map(|i| sign * v[i].re)
}

pub fn ed_spectrum(inst: &EdInstance) -> Result<EdSpectrum> {
    let spec = eig_hermitian(&inst.hamiltonian())?;
    let ev = &spec.eigenvalues;
    let cube_root = (inst.n as f64).cbrt();
    Ok(EdSpectrum {
        n: inst.n,
        m: inst.m,
        eigenvalues: [ev[0], ev[1], ev[2], ev[3]],
        lambda_plus: ev[3],
        lambda_minus: ev[2],
        gap: ev[3] - ev[2],
        scaled_plus: ev[3] * cube_root,
        scaled_minus: ev[2] * cube_root,
        vec_plus: real_vector(&spec, 3),
        vec_minus: real_vector(&spec, 2),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdDynamics {
    /// `(t, |⟨B₂|e^{-iHt}|ψ(0)⟩|²)` on the evaluation grid.
    pub curve: Vec<[f64; 2]>,
    pub t_peak: f64,
    pub peak_overlap: f64,
    /// `t_peak / N^{1/3}`.
    pub peak_time_constant: f64,
}

/// `|⟨B₂|e^{-iHt}|ψ(0)⟩|²`.
pub struct OverlapCurve {
    spec: SpectralDecomposition,
    start: CVector,
}

impl OverlapCurve {
    pub fn new(inst: &EdInstance) -> Result<Self> {
        Ok(Self {
            spec: eig_hermitian(&inst.hamiltonian())?,
            start: inst.start.clone(),
        })
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        let evolved = propagator_from(&self.spec, t)? * &self.start;
        Ok(evolved[3].norm_sqr())
    }
}

/// Evenly spaced grid over `[0, 4π/gap]`.
pub fn default_grid(spectrum: &EdSpectrum, points: usize) -> Vec<f64> {
    let end = 4.0 * PI / spectrum.gap;
    (0..points)
        .map(|k| end * k as f64 / (points - 1) as f64)
        .collect()
}

/// Samples the overlap curve and locates its first prominent maximum: the
/// first grid local maximum reaching half the grid maximum, refined by
/// golden-section search between its neighbours.
pub fn ed_dynamics(inst: &EdInstance, grid: &[f64]) -> Result<EdDynamics> {
    let spectrum = ed_spectrum(inst)?;
    let end = 4.0 * PI / spectrum.gap;
    if grid.len() < 3 || grid[0] > 0.0 || *grid.last().expect("non-empty") < end * (1.0 - 1e-12) {
        return Err(WalkError::InvalidParameter(format!(
            "time grid must cover [0, {end}] with at least 3 points"
        )));
    }
    let overlap = OverlapCurve::new(inst)?;
    let values = grid.iter().map(|&t| overlap.at(t)).collect::<Result<Vec<f64>>>()?;
    let top = values.iter().copied().fold(0.0, f64::max);
    let k = (1..values.len() - 1)
        .find(|&k| values[k] >= 0.5 * top && values[k] >= values[k - 1] && values[k] > values[k + 1])
        .unwrap_or_else(|| {
            (0..values.len())
                .max_by(|&a, &b| values[a].total_cmp(&values[b]))
                .expect("non-empty")
        });
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let (t_peak, peak_overlap) = golden_max(|t| overlap.at(t), lo, hi, 1e-12 * end.max(1.0))?;
    let (t_peak, peak_overlap) = if peak_overlap >= values[k] {
        (t_peak, peak_overlap)
    } else {
        (grid[k], values[k])
    };
    Ok(EdDynamics {
        curve: grid.iter().zip(&values).map(|(&t, &p)| [t, p]).collect(),
        t_peak,
        peak_overlap,
        peak_time_constant: t_peak / (inst.n as f64).cbrt(),
    })
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let t = (a + b) / 2.0;
    Ok((t, f(t)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryCount {
    pub n: usize,
    /// Queries to prepare the start state, `m = nint(N^{2/3})`.
    pub setup: usize,
    /// `‖abs(H)‖` used for the simulation cost, `2N^{1/3}`.
    pub abs_norm: f64,
    pub t_peak: f64,
    /// Phase-estimation register size for `τ = ‖abs(H)‖·t_peak`.
    pub register_size: usize,
    /// Two queries per walk step.
    pub walk_queries: usize,
    pub total: usize,
    /// `total / N^{2/3}`.
    pub ratio: f64,
}

pub fn ed_query_count(inst: &EdInstance, delta: f64) -> Result<QueryCount> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(WalkError::InvalidTolerance(delta));
    }
    let spectrum = ed_spectrum(inst)?;
    let dynamics = ed_dynamics(inst, &default_grid(&spectrum, 2001))?;
    let abs_norm = 2.0 * (inst.n as f64).cbrt();
    let register_size = register_size_for(abs_norm * dynamics.t_peak, delta);
    let walk_queries = 2 * register_size;
    let total = inst.m + walk_queries;
    Ok(QueryCount {
        n: inst.n,
        setup: inst.m,
        abs_norm,
        t_peak: dynamics.t_peak,
        register_size,
        walk_queries,
        total,
        ratio: total as f64 / two_thirds_power(inst.n),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullGraphProjection {
    pub n: usize,
    pub m: usize,
    pub pair: (usize, usize),
    pub johnson_vertices: usize,
    pub pendant_vertices: usize,
    /// `QᵀHQ` in the basis `A₀, A₁, A₂, B₂`.
    pub projected: [[f64; 4]; 4],
    /// `‖HQ - Q(QᵀHQ)‖`.
    pub invariance_residual: f64,
    /// Largest entrywise gap to [`build_ed`].
    pub max_deviation: f64,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Builds the full Johnson-graph Hamiltonian with pendant vertices for
/// `N ≤ 12` and projects it onto the four-dimensional subspace.
pub fn project_full_graph(n: usize, pair: (usize, usize)) -> Result<FullGraphProjection> {
    if n < MIN_N {
        return Err(WalkError::TooSmall { n, min: MIN_N });
    }
    if n > MAX_FULL_GRAPH_N {
        return Err(WalkError::Infeasible {
            n,
            max: MAX_FULL_GRAPH_N,
        });
    }
    let (x, y) = pair;
    if x == y || x >= n || y >= n {
        return Err(WalkError::InvalidParameter(format!(
            "marked pair ({x}, {y}) must be two distinct indices below {n}"
        )));
    }
    let m = subset_size(n).clamp(2, n - 2);
    let subsets: Vec<u32> = (0u32..(1 << n)).filter(|s| s.count_ones() as usize == m).collect();
    let mut index = vec![usize::MAX; 1 << n];
    for (i, &s) in subsets.iter().enumerate() {
        index[s as usize] = i;
    }
    let marked_mask = (1u32 << x) | (1u32 << y);
    let class = |s: u32| (s & marked_mask).count_ones() as usize;
    let holders: Vec<usize> = (0..subsets.len()).filter(|&i| class(subsets[i]) == 2).collect();
    let pendants = holders.len();
    if pendants != binomial(n - 2, m - 2) {
        return Err(WalkError::InvalidParameter(format!(
            "pendant count {pendants} differs from C({}, {})",
            n - 2,
            m - 2
        )));
    }
    let dim = subsets.len() + pendants;
    let scale = 1.0 / two_thirds_power(n);
    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (i, &s) in subsets.iter().enumerate() {
        h[(i, i)] = -((m * (n - m)) as f64) * scale;
        for a in (0..n).filter(|a| s & (1 << a) != 0) {
            for b in (0..n).filter(|b| s & (1 << b) == 0) {
                let j = index[(s ^ (1 << a) ^ (1 << b)) as usize];
                h[(i, j)] = scale;
            }
        }
    }
    for (p, &i) in holders.iter().enumerate() {
        let b = subsets.len() + p;
        h[(i, b)] = 1.0;
        h[(b, i)] = 1.0;
    }

    let mut q = DMatrix::<f64>::zeros(dim, 4);
    let mut counts = [0usize; 4];
    for (i, &s) in subsets.iter().enumerate() {
        counts[class(s)] += 1;
        q[(i, class(s))] = 1.0;
    }
    counts[3] = pendants;
    for p in 0..pendants {
        q[(subsets.len() + p, 3)] = 1.0;
    }
    for (c, &count) in counts.iter().enumerate() {
        let norm = (count as f64).sqrt();
        q.column_mut(c).unscale_mut(norm);
    }
    let hq = &h * &q;
    let projected_m = q.transpose() * &hq;
    let residual_m = &hq - &q * &projected_m;
    let invariance_residual = residual_m.svd(false, false).singular_values.max();

    let reference = build_ed(n)?.hamiltonian();
    let mut projected = [[0.0; 4]; 4];
    let mut max_deviation: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            projected[r][c] = projected_m[(r, c)];
            max_deviation = max_deviation.max((projected_m[(r, c)] - reference[(r, c)].re).abs());
        }
    }
    Ok(FullGraphProjection {
        n,
        m,
        pair,
        johnson_vertices: subsets.len(),
        pendant_vertices: pendants,
        projected,
        invariance_residual,
        max_deviation,
    })
}

/// Uniform superposition start state computed by explicit subset counting,
/// for cross-checking the closed-form amplitudes.
pub fn start_state_by_counting(n: usize, m: usize) -> DVector<f64> {
    let total = binomial(n, m) as f64;
    DVector::from_vec(vec![
        (binomial(n - 2, m) as f64 / total).sqrt(),
        (2.0 * binomial(n - 2, m - 1) as f64 / total).sqrt(),
        (binomial(n - 2, m - 2) as f64 / total).sqrt(),
        0.0,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::loglog_slope;

    #[test]
    fn subset_sizes() {
        assert_eq!(subset_size(1000), 100);
        assert_eq!(subset_size(8), 4);
        assert_eq!(subset_size(9), 4);
        assert_eq!(subset_size(10), 5);
        assert_eq!(subset_size(1_000_000_000), 1_000_000);
        assert_eq!(build_ed(7).unwrap_err(), WalkError::TooSmall { n: 7, min: 8 });
    }

    #[test]
    fn displayed_entries() {
        let inst = build_ed(1000).unwrap();
        assert!((inst.h_walk[(0, 0)].re + 2.0).abs() < 1e-12);
        assert_eq!(inst.h_marked[(2, 3)].re, 1.0);
        assert_eq!(inst.h_marked[(3, 2)].re, 1.0);
        for k in 0..4 {
            assert_eq!(inst.h_walk[(3, k)].re, 0.0);
        }
        let norm: f64 = inst.start.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_eq!(inst.start[3].re, 0.0);
    }

    #[test]
    fn start_state_matches_counting() {
        for n in [8, 10, 12, 20] {
            let inst = build_ed(n).unwrap();
            let counted = start_state_by_counting(n, inst.m);
            for k in 0..4 {
                assert!((inst.start[k].re - counted[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mu_value() {
        assert!((mu() - 0.378732187481834).abs() < 1e-12);
        assert!((mu().sqrt() - 0.6154).abs() < 1e-4);
        assert!(((1.0 - mu()).sqrt() - 0.7882).abs() < 1e-4);
    }

    #[test]
    fn spectrum_approaches_two_level_limit() {
        let (plus, minus) = scaled_eigenvalue_limits();
        let ns = [10_000usize, 100_000, 1_000_000, 10_000_000, 100_000_000];
        let mut devs = Vec::new();
        for &n in &ns {
            let s = ed_spectrum(&build_ed(n).unwrap()).unwrap();
            assert!(s.gap > 0.0);
            devs.push((s.scaled_plus - plus).abs().max((s.scaled_minus - minus).abs()));
        }
        assert!(devs.windows(2).all(|w| w[1] < w[0]));
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&xs, &devs);
        assert!((slope + 1.0 / 3.0).abs() < 0.4 / 3.0, "{slope}");

        let s = ed_spectrum(&build_ed(100_000_000).unwrap()).unwrap();
        assert!((s.vec_plus[0] - mu().sqrt()).abs() < 0.01);
        assert!((s.vec_plus[3] - (1.0 - mu()).sqrt()).abs() < 0.01);
        assert!((s.vec_minus[0] - (1.0 - mu()).sqrt()).abs() < 0.01);
        assert!((s.vec_minus[3] + mu().sqrt()).abs() < 0.01);
    }

    #[test]
    fn dynamics_peak() {
        let inst = build_ed(1_000_000).unwrap();
        let s = ed_spectrum(&inst).unwrap();
        let d = ed_dynamics(&inst, &default_grid(&s, 2001)).unwrap();
        assert!(d.curve[0][1].abs() < 1e-20);
        assert!(d.peak_overlap >= 0.3);
        assert!((d.t_peak / (PI / s.gap) - 1.0).abs() < 0.25);

        let inst = build_ed(100_000_000).unwrap();
        let s = ed_spectrum(&inst).unwrap();
        let d = ed_dynamics(&inst, &default_grid(&s, 2001)).unwrap();
        let two_level = 4.0 * mu() * (1.0 - mu());
        assert!((d.peak_overlap - two_level).abs() < 0.03, "{}", d.peak_overlap);
    }

    #[test]
    fn grid_must_cover_two_periods() {
        let inst = build_ed(1000).unwrap();
        assert!(ed_dynamics(&inst, &[0.0, 1.0, 2.0]).is_err());
    }

    #[test]
    fn query_ratio_is_bounded() {
        let ratios: Vec<f64> = [1_000usize, 1_000_000, 1_000_000_000]
            .iter()
            .map(|&n| ed_query_count(&build_ed(n).unwrap(), 0.1).unwrap().ratio)
            .collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        assert!(hi / lo < 2.0, "{ratios:?}");
        let q = ed_query_count(&build_ed(1000).unwrap(), 0.1).unwrap();
        assert_eq!(q.setup, 100);
        assert_eq!(q.walk_queries, 2 * q.register_size);
        assert_eq!(q.total, q.setup + q.walk_queries);
    }

    #[test]
    fn full_graph_projection_small() {
        let p = project_full_graph(8, (0, 1)).unwrap();
        assert_eq!(p.m, 4);
        assert_eq!(p.johnson_vertices, 70);
        assert_eq!(p.pendant_vertices, 15);
        assert!(p.invariance_residual < 1e-10);
        assert!(p.max_deviation < 1e-10);
        let q = project_full_graph(8, (2, 6)).unwrap();
        assert_eq!(p.projected, q.projected);
        assert!(matches!(project_full_graph(13, (0, 1)), Err(WalkError::Infeasible { .. })));
        assert!(project_full_graph(8, (3, 3)).is_err());
    }

    #[test]
    fn full_graph_projection_all_sizes() {
        for n in 8..=12 {
            let p = project_full_graph(n, (1, n - 1)).unwrap();
            assert!(p.invariance_residual < 1e-10, "{n}");
            assert!(p.max_deviation < 1e-10, "{n}");
            assert_eq!(p.johnson_vertices, binomial(n, p.m));
        }
        assert_eq!(project_full_graph(12, (0, 1)).unwrap().pendant_vertices, 120);
    }
}
