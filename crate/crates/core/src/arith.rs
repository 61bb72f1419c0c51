//! Prime-field characters, Kloosterman-type sums, the Paley-type Cayley
//! graph and symmetric association schemes.
//!
//! Only prime fields `𝔽_p` are supported, where the trace map is the
//! identity.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::linalg::{abs_matrix, eig_hermitian, spectral_norm, CMatrix, HermitianMatrix};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let (mut acc, mut b) = (1u128, (base % p) as u128);
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(WalkError::NotPrime(p));
    }
    Ok(())
}

/// Quadratic character by Euler's criterion.
pub fn legendre(p: u64, x: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(match pow_mod(x, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    chi: Vec<i8>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        let chi = (0..p).map(|x| legendre(p, x)).collect::<Result<_>>()?;
        Ok(Self { p, chi })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn chi(&self, x: u64) -> i8 {
        self.chi[(x % self.p) as usize]
    }

    pub fn character_table(&self) -> &[i8] {
        &self.chi
    }

    /// Nonzero squares, ascending.
    pub fn squares(&self) -> Vec<u64> {
        (1..self.p).filter(|&x| self.chi[x as usize] == 1).collect()
    }

    pub fn sqrt(&self, c: u64) -> Option<u64> {
        (0..self.p).find(|&x| x * x % self.p == c % self.p)
    }

    pub fn smallest_nonresidue(&self) -> u64 {
        (2..self.p).find(|&x| self.chi[x as usize] == -1).expect("odd prime has a nonresidue")
    }
}

fn omega(p: u64, k: u64, x: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * ((k * x) % p) as f64 / p as f64)
}

/// `Σ_x χ(x² − c) ω^{kx}` evaluated as a complex sum.
pub fn kloosterman_complex(field: &PrimeField, c: u64, k: u64) -> Complex64 {
    let p = field.order();
    (0..p)
        .map(|x| f64::from(field.chi((x * x + p - c % p) % p)) * omega(p, k, x))
        .sum()
}

/// Real value of `Σ_x χ(x² − c) ω^{kx}`; fails if the imaginary part
/// exceeds `1e-9`.
pub fn kloosterman_brute(p: u64, c: u64, k: u64) -> Result<f64> {
    let field = PrimeField::new(p)?;
    kloosterman_in(&field, c, k)
}

pub fn kloosterman_in(field: &PrimeField, c: u64, k: u64) -> Result<f64> {
    if c.is_multiple_of(field.order()) {
        return Err(WalkError::InvalidParameter("c must be nonzero".into()));
    }
    let z = kloosterman_complex(field, c, k);
    if z.im.abs() > 1e-9 {
        return Err(WalkError::InvalidParameter(format!(
            "sum has imaginary part {}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Largest `|K(c, k)| / (2√p)` over all `c ≠ 0` and `k`.
pub fn weil_ratio(p: u64) -> Result<f64> {
    let field = PrimeField::new(p)?;
    let mut worst: f64 = 0.0;
    for c in 1..p {
        for k in 0..p {
            worst = worst.max(kloosterman_in(&field, c, k)?.abs());
        }
    }
    Ok(worst / (2.0 * (p as f64).sqrt()))
}

/// `X = {x : χ(x² − c) = +1}`.
pub fn connection_set(field: &PrimeField, c: u64) -> Vec<u64> {
    let p = field.order();
    (0..p).filter(|&x| field.chi((x * x + p - c % p) % p) == 1).collect()
}

/// Adjacency of the Cayley graph on `ℤ_p` with connection set `X`, minus
/// its projection `|X|/p` onto the uniform vector.
pub fn build_paley_hamiltonian(p: u64, c: u64) -> Result<HermitianMatrix> {
    let field = PrimeField::new(p)?;
    if c.is_multiple_of(p) {
        return Err(WalkError::InvalidParameter("c must be nonzero".into()));
    }
    let set = connection_set(&field, c);
    let n = p as usize;
    let mut member = vec![false; n];
    for &x in &set {
        member[x as usize] = true;
    }
    let offset = set.len() as f64 / p as f64;
    let h = DMatrix::from_fn(n, n, |a, b| {
        let d = (a + n - b) % n;
        f64::from(u8::from(member[d])) - offset
    });
    HermitianMatrix::from_real(&h)
}

/// Eigenvalue of the Paley Hamiltonian on Fourier mode `k`:
/// `½K(c, k) − [χ(c) = 1] cos(2πkr/p)` with `r² = c`, and `0` at `k = 0`.
pub fn paley_eigenvalue(field: &PrimeField, c: u64, k: u64) -> Result<f64> {
    let p = field.order();
    if k.is_multiple_of(p) {
        return Ok(0.0);
    }
    let mut value = 0.5 * kloosterman_in(field, c, k)?;
    if field.chi(c) == 1 {
        let r = field.sqrt(c).expect("c is a square");
        let r = r.min(p - r);
        value -= (2.0 * PI * ((k * r) % p) as f64 / p as f64).cos();
    }
    Ok(value)
}

pub fn fourier_matrix(p: u64) -> CMatrix {
    let n = p as usize;
    let s = 1.0 / (p as f64).sqrt();
    CMatrix::from_fn(n, n, |x, k| omega(p, k as u64, x as u64) * s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaleyReport {
    pub p: u64,
    pub c: u64,
    pub chi_c: i8,
    pub degree: usize,
    /// `(p − 1)/2 − [χ(c) = 1]`.
    pub expected_degree: usize,
    pub norm: f64,
    pub abs_norm: f64,
    /// `2|X|(p − |X|)/p`.
    pub expected_abs_norm: f64,
    /// `(p² − 1)/2p`.
    pub nonresidue_abs_norm: f64,
    pub sign_ratio: f64,
    /// Largest off-diagonal entry of `F†HF`.
    pub fourier_offdiag: f64,
    /// Largest gap between the diagonal of `F†HF` and [`paley_eigenvalue`].
    pub eigenvalue_residual: f64,
    pub eigenvalues: Vec<f64>,
}

pub fn paley_report(p: u64, c: u64) -> Result<PaleyReport> {
    let field = PrimeField::new(p)?;
    let h = build_paley_hamiltonian(p, c)?;
    let degree = connection_set(&field, c).len();
    let f = fourier_matrix(p);
    let diag = f.adjoint() * h.matrix() * &f;
    let n = p as usize;
    let mut fourier_offdiag: f64 = 0.0;
    let mut eigenvalue_residual: f64 = 0.0;
    let mut eigenvalues = Vec::with_capacity(n);
    for k in 0..n {
        for j in 0..n {
            if j != k {
                fourier_offdiag = fourier_offdiag.max(diag[(j, k)].norm());
            }
        }
        let predicted = paley_eigenvalue(&field, c, k as u64)?;
        eigenvalue_residual = eigenvalue_residual.max((diag[(k, k)] - predicted).norm());
        eigenvalues.push(predicted);
    }
    let norm = spectral_norm(&h)?;
    let abs_norm = spectral_norm(&abs_matrix(&h))?;
    let pf = p as f64;
    let chi_c = field.chi(c);
    Ok(PaleyReport {
        p,
        c: c % p,
        chi_c,
        degree,
        expected_degree: (p as usize - 1) / 2 - usize::from(chi_c == 1),
        norm,
        abs_norm,
        expected_abs_norm: 2.0 * degree as f64 * (pf - degree as f64) / pf,
        nonresidue_abs_norm: (pf * pf - 1.0) / (2.0 * pf),
        sign_ratio: abs_norm / norm,
        fourier_offdiag,
        eigenvalue_residual,
        eigenvalues,
    })
}

/// Symmetric association scheme with its idempotents and dual eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeData {
    pub classes: Vec<DMatrix<f64>>,
    pub idempotents: Vec<DMatrix<f64>>,
    /// `q[i][j]` with `E_i = (1/N) Σ_j q_ij A_j`.
    pub dual: Vec<Vec<f64>>,
    pub class_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeCheck {
    pub identity_class: f64,
    pub partition: f64,
    pub symmetry: f64,
    /// `A_iA_j − Σ_k p_ij^k A_k` and `[A_i, A_j]`.
    pub closure: f64,
    pub commutation: f64,
    pub idempotent_products: f64,
    pub idempotent_sum: f64,
    pub idempotent_commutators: f64,
    pub dual_expansion: f64,
}

impl SchemeCheck {
    pub fn worst(&self) -> f64 {
        [
            self.identity_class,
            self.partition,
            self.symmetry,
            self.closure,
            self.commutation,
            self.idempotent_products,
            self.idempotent_sum,
            self.idempotent_commutators,
            self.dual_expansion,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.amax()
}

/// Coefficients `x_k` minimising `‖M − Σ_k x_k A_k‖_F` for 0/1 matrices with
/// disjoint supports, with the residual.
fn expand_in_classes(m: &DMatrix<f64>, classes: &[DMatrix<f64>]) -> (Vec<f64>, f64) {
    let coeffs: Vec<f64> = classes
        .iter()
        .map(|a| m.component_mul(a).sum() / a.sum())
        .collect();
    let mut fit = DMatrix::zeros(m.nrows(), m.ncols());
    for (a, &x) in classes.iter().zip(&coeffs) {
        fit += a * x;
    }
    (coeffs, max_abs(&(m - fit)))
}

impl SchemeData {
    /// Derives idempotents from the common eigenspaces of the classes.
    /// `E₀ = J/N` comes first; the rest are ordered by decreasing eigenvalue
    /// of `A₁`.
    pub fn from_classes(classes: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = classes.first().ok_or(WalkError::Empty)?.nrows();
        let d = classes.len() - 1;
        let mut generic = DMatrix::zeros(n, n);
        for (i, a) in classes.iter().enumerate() {
            generic += a * (1.0 + (i as f64 * 0.7548776662).fract());
        }
        let spec = eig_hermitian(&HermitianMatrix::from_real(&generic)?)?;
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            match clusters.last_mut() {
                Some(c) if (spec.eigenvalues[k] - spec.eigenvalues[c[0]]).abs() < 1e-6 => c.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        if clusters.len() != d + 1 {
            return Err(WalkError::InvalidParameter(format!(
                "{} common eigenspaces for {} classes",
                clusters.len(),
                d + 1
            )));
        }
        let mut idempotents: Vec<DMatrix<f64>> = clusters
            .iter()
            .map(|c| {
                let mut e = CMatrix::zeros(n, n);
                for &k in c {
                    let v = spec.eigenvector(k);
                    e += &v * v.adjoint();
                }
                e.map(|z| z.re)
            })
            .collect();
        let ones = DMatrix::from_element(n, 1, 1.0 / (n as f64).sqrt());
        let holds_ones = |e: &DMatrix<f64>| (ones.transpose() * e * &ones)[(0, 0)] > 0.5;
        let on_a1 = |e: &DMatrix<f64>| {
            let a1 = classes.get(1).unwrap_or(&classes[0]);
            (a1 * e).trace() / e.trace()
        };
        idempotents.sort_by(|a, b| {
            holds_ones(b)
                .cmp(&holds_ones(a))
                .then(on_a1(b).total_cmp(&on_a1(a)))
        });
        let dual = idempotents
            .iter()
            .map(|e| {
                expand_in_classes(e, &classes)
                    .0
                    .into_iter()
                    .map(|x| x * n as f64)
                    .collect()
            })
            .collect();
        let class_sizes = classes.iter().map(|a| a.row(0).sum().round() as usize).collect();
        Ok(Self {
            classes,
            idempotents,
            dual,
            class_sizes,
        })
    }

    pub fn points(&self) -> usize {
        self.classes[0].nrows()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn verify(&self) -> SchemeCheck {
        let n = self.points();
        let id = DMatrix::<f64>::identity(n, n);
        let mut total = DMatrix::zeros(n, n);
        for a in &self.classes {
            total += a;
        }
        let mut check = SchemeCheck {
            identity_class: max_abs(&(&self.classes[0] - &id)),
            partition: max_abs(&(total - DMatrix::from_element(n, n, 1.0))),
            symmetry: self
                .classes
                .iter()
                .map(|a| max_abs(&(a - a.transpose())))
                .fold(0.0, f64::max),
            closure: 0.0,
            commutation: 0.0,
            idempotent_products: 0.0,
            idempotent_sum: 0.0,
            idempotent_commutators: 0.0,
            dual_expansion: 0.0,
        };
        for a in &self.classes {
            for b in &self.classes {
                let ab = a * b;
                check.commutation = check.commutation.max(max_abs(&(&ab - b * a)));
                check.closure = check.closure.max(expand_in_classes(&ab, &self.classes).1);
            }
        }
        let mut esum = DMatrix::zeros(n, n);
        for (i, e) in self.idempotents.iter().enumerate() {
            esum += e;
            for (j, f) in self.idempotents.iter().enumerate() {
                let target = if i == j { e.clone() } else { DMatrix::zeros(n, n) };
                check.idempotent_products = check.idempotent_products.max(max_abs(&(e * f - target)));
            }
            for a in &self.classes {
                check.idempotent_commutators = check.idempotent_commutators.max(max_abs(&(e * a - a * e)));
            }
            let mut expansion = DMatrix::zeros(n, n);
            for (a, q) in self.classes.iter().zip(&self.dual[i]) {
                expansion += a * (q / n as f64);
            }
            check.dual_expansion = check.dual_expansion.max(max_abs(&(e - expansion)));
        }
        check.idempotent_sum = max_abs(&(esum - id));
        check
    }
}

/// Two classes on `n` points: `I` and `J − I`.
pub fn trivial_scheme(n: usize) -> Result<SchemeData> {
    if n < 2 {
        return Err(WalkError::TooSmall { n, min: 2 });
    }
    let id = DMatrix::identity(n, n);
    let rest = DMatrix::from_element(n, n, 1.0) - &id;
    SchemeData::from_classes(vec![id, rest])
}

/// Classes `I`, square differences and nonsquare differences on `ℤ_p`.
pub fn build_paley_scheme(p: u64) -> Result<SchemeData> {
    let field = PrimeField::new(p)?;
    if p % 4 != 1 {
        return Err(WalkError::BadPrime(p));
    }
    let n = p as usize;
    let class = |want: i8| {
        DMatrix::from_fn(n, n, |a, b| {
            let d = ((a + n - b) % n) as u64;
            f64::from(u8::from(d != 0 && field.chi(d) == want))
        })
    };
    SchemeData::from_classes(vec![DMatrix::identity(n, n), class(1), class(-1)])
}

/// Projector onto the Fourier modes `k` with `χ(k) = sign` (or `k = 0`
/// when `sign = 0`).
pub fn fourier_projector(p: u64, sign: i8) -> Result<DMatrix<f64>> {
    let field = PrimeField::new(p)?;
    let f = fourier_matrix(p);
    let n = p as usize;
    let mut e = CMatrix::zeros(n, n);
    for k in (0..p).filter(|&k| field.chi(k) == sign) {
        let col = f.column(k as usize);
        e += col * col.adjoint();
    }
    Ok(e.map(|z| z.re))
}

/// `U = Σ_i e^{iφ_i} E_i`.
pub fn bose_mesner_unitary(scheme: &SchemeData, phases: &[f64]) -> Result<CMatrix> {
    if phases.len() != scheme.idempotents.len() {
        return Err(WalkError::DimensionMismatch {
            expected: scheme.idempotents.len(),
            got: phases.len(),
        });
    }
    let n = scheme.points();
    let mut u = CMatrix::zeros(n, n);
    for (e, &phi) in scheme.idempotents.iter().zip(phases) {
        let z = Complex64::from_polar(1.0, phi);
        u += e.map(|x| z * x);
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSuccess {
    pub class: usize,
    pub size: usize,
    /// `φ_j = −arg(q_ji)`.
    pub phases: Vec<f64>,
    /// `|⟨t|U|ψ_i⟩|²` by matrix action.
    pub direct: f64,
    /// `(N_i/N²)(Σ_j |q_ji|)²`.
    pub formula: f64,
    /// `(N_i/N) · direct`: success when the class is sampled uniformly.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HidingReport {
    pub per_class: Vec<ClassSuccess>,
    /// `max_i (N_i²/N³)(Σ_j |q_ji|)²`.
    pub bound: f64,
    pub best_class: usize,
    pub max_formula_gap: f64,
}

pub fn hiding_success(scheme: &SchemeData) -> Result<HidingReport> {
    let n = scheme.points();
    let nf = n as f64;
    let hidden = 0;
    let mut per_class = Vec::new();
    for i in 1..scheme.classes.len() {
        let q_col: Vec<f64> = scheme.dual.iter().map(|row| row[i]).collect();
        let phases: Vec<f64> = q_col.iter().map(|&q| if q < 0.0 { PI } else { 0.0 }).collect();
        let u = bose_mesner_unitary(scheme, &phases)?;
        let size = scheme.class_sizes[i];
        let norm = 1.0 / (size as f64).sqrt();
        let amplitude: Complex64 = (0..n)
            .filter(|&y| scheme.classes[i][(hidden, y)] == 1.0)
            .map(|y| u[(hidden, y)] * norm)
            .sum();
        let direct = amplitude.norm_sqr();
        let sum: f64 = q_col.iter().map(|q| q.abs()).sum();
        let formula = size as f64 / (nf * nf) * sum * sum;
        per_class.push(ClassSuccess {
            class: i,
            size,
            phases,
            direct,
            formula,
            bound: size as f64 / nf * formula,
        });
    }
    let best = per_class
        .iter()
        .max_by(|a, b| a.bound.total_cmp(&b.bound))
        .ok_or(WalkError::Empty)?;
    Ok(HidingReport {
        bound: best.bound,
        best_class: best.class,
        max_formula_gap: per_class
            .iter()
            .map(|c| (c.direct - c.formula).abs())
            .fold(0.0, f64::max),
        per_class: per_class.clone(),
    })
}

/// `(√p + 1)²(p − 1)²/4p³`.
pub fn paley_hiding_closed_form(p: u64) -> f64 {
    let pf = p as f64;
    (pf.sqrt() + 1.0).powi(2) * (pf - 1.0).powi(2) / (4.0 * pf.powi(3))
}

/// `(√p + 1)(p − 1)/2p`.
pub fn paley_abs_idempotent_norm(p: u64) -> f64 {
    let pf = p as f64;
    (pf.sqrt() + 1.0) * (pf - 1.0) / (2.0 * pf)
}

pub fn abs_norm_real(m: &DMatrix<f64>) -> Result<f64> {
    spectral_norm(&abs_matrix(&HermitianMatrix::from_real(m)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::loglog_slope;
    use crate::linalg::operator_norm;
    use crate::phase::steps_for_fidelity;

    fn odd_primes(limit: u64) -> Vec<u64> {
        (3..=limit).filter(|&p| is_prime(p)).collect()
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in odd_primes(97) {
            let field = PrimeField::new(p).unwrap();
            let squares: std::collections::BTreeSet<u64> = (1..p).map(|x| x * x % p).collect();
            assert_eq!(field.squares(), squares.into_iter().collect::<Vec<_>>());
            assert_eq!(field.chi(0), 0);
            assert_eq!(field.chi(1), 1);
            assert_eq!(field.character_table().iter().map(|&c| i32::from(c)).sum::<i32>(), 0);
            for x in 1..p {
                for y in 1..p {
                    assert_eq!(field.chi(x * y), field.chi(x) * field.chi(y));
                }
            }
        }
        assert_eq!(PrimeField::new(13).unwrap().squares(), vec![1, 3, 4, 9, 10, 12]);
        assert_eq!(legendre(15, 2), Err(WalkError::NotPrime(15)));
        assert_eq!(legendre(2, 1), Err(WalkError::NotPrime(2)));
    }

    #[test]
    fn kloosterman_is_real_and_weil_bounded() {
        for p in odd_primes(97) {
            let field = PrimeField::new(p).unwrap();
            for c in 1..p {
                assert!((kloosterman_in(&field, c, 0).unwrap() + 1.0).abs() < 1e-9);
                for k in 0..p {
                    let z = kloosterman_complex(&field, c, k);
                    assert!(z.im.abs() < 1e-12);
                    assert!(z.re.abs() <= 2.0 * (p as f64).sqrt() + 1e-9);
                }
            }
        }
        assert!(kloosterman_brute(13, 0, 1).is_err());
    }

    #[test]
    fn paley_degree_counts() {
        let field = PrimeField::new(13).unwrap();
        assert_eq!(field.chi(1), 1);
        assert_eq!(connection_set(&field, 1).len(), 5);
        assert_eq!(connection_set(&field, 2).len(), 6);
        for p in odd_primes(61) {
            let field = PrimeField::new(p).unwrap();
            for c in 1..p {
                let expected = (p as usize - 1) / 2 - usize::from(field.chi(c) == 1);
                assert_eq!(connection_set(&field, c).len(), expected);
            }
        }
    }

    #[test]
    fn fourier_diagonalizes_paley() {
        for p in [5, 7, 11, 13, 17, 29] {
            for c in 1..p {
                let r = paley_report(p, c).unwrap();
                assert!(r.fourier_offdiag < 1e-8);
                assert!(r.eigenvalue_residual < 1e-8, "p={p} c={c}");
                assert!(r.norm <= 2.0 * (p as f64).sqrt() + 1.0);
                assert!((r.abs_norm - r.expected_abs_norm).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn paley_abs_norm_values() {
        let r = paley_report(13, 1).unwrap();
        assert!((r.abs_norm - 80.0 / 13.0).abs() < 1e-9);
        let r = paley_report(13, 2).unwrap();
        assert!((r.abs_norm - 84.0 / 13.0).abs() < 1e-9);
    }

    #[test]
    fn sign_ratio_grows_like_sqrt_p() {
        let ps = [13u64, 29, 53, 89];
        let ratios: Vec<f64> = ps
            .iter()
            .map(|&p| {
                let c = PrimeField::new(p).unwrap().smallest_nonresidue();
                paley_report(p, c).unwrap().sign_ratio
            })
            .collect();
        let xs: Vec<f64> = ps.iter().map(|&p| p as f64).collect();
        let slope = loglog_slope(&xs, &ratios);
        assert!((slope - 0.5).abs() < 0.1, "{slope}");
    }

    #[test]
    fn walk_budget_exceeds_norm_budget() {
        for p in [13u64, 29, 53] {
            let c = PrimeField::new(p).unwrap().smallest_nonresidue();
            let h = build_paley_hamiltonian(p, c).unwrap();
            let t = 1.0;
            let walk_steps = steps_for_fidelity(&h, t, 0.1).unwrap() as f64;
            let norm_steps = crate::phase::register_size_for(spectral_norm(&h).unwrap() * t, 0.1) as f64;
            assert!(walk_steps / norm_steps >= (p as f64).sqrt() / 4.0);
        }
    }

    #[test]
    fn paley_scheme_axioms() {
        for p in [5u64, 13, 17, 29] {
            let s = build_paley_scheme(p).unwrap();
            assert_eq!(s.class_count(), 2);
            assert!(s.verify().worst() < 1e-8, "{p}");
            let half = (p as usize - 1) / 2;
            assert_eq!(s.class_sizes, vec![1, half, half]);
            let rp = (p as f64).sqrt();
            let expected = [
                [1.0, 1.0, 1.0],
                [half as f64, (rp - 1.0) / 2.0, (-rp - 1.0) / 2.0],
                [half as f64, (-rp - 1.0) / 2.0, (rp - 1.0) / 2.0],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    assert!((s.dual[i][j] - expected[i][j]).abs() < 1e-8, "{:?}", s.dual);
                }
            }
            for (e, sign) in s.idempotents.iter().zip([0i8, 1, -1]) {
                assert!((e - fourier_projector(p, sign).unwrap()).amax() < 1e-8);
            }
            assert!((abs_norm_real(&s.idempotents[1]).unwrap() - paley_abs_idempotent_norm(p)).abs() < 1e-8);
            assert!((abs_norm_real(&s.idempotents[1]).unwrap() - 1.0).abs() > 0.5 || p < 13);
        }
        assert!((paley_abs_idempotent_norm(13) - 2.1256).abs() < 1e-4);
        assert_eq!(build_paley_scheme(7), Err(WalkError::BadPrime(7)));
        assert_eq!(build_paley_scheme(9), Err(WalkError::NotPrime(9)));
    }

    #[test]
    fn bose_mesner_unitaries() {
        let s = build_paley_scheme(13).unwrap();
        let id = CMatrix::identity(13, 13);
        assert!((bose_mesner_unitary(&s, &[0.0; 3]).unwrap() - &id).camax() < 1e-10);
        let u = bose_mesner_unitary(&s, &[0.0, PI, PI]).unwrap();
        let expected = CMatrix::from_element(13, 13, Complex64::new(2.0 / 13.0, 0.0)) - &id;
        assert!((&u - expected).camax() < 1e-10);
        let u = bose_mesner_unitary(&s, &[0.3, -1.1, 2.0]).unwrap();
        assert!((u.adjoint() * &u - &id).camax() < 1e-9);
        for a in &s.classes {
            let a = a.map(|x| Complex64::new(x, 0.0));
            assert!((&u * &a - &a * &u).camax() < 1e-8);
        }
        let f = fourier_matrix(13);
        let d = f.adjoint() * &u * &f;
        let off = operator_norm(&(d.clone() - CMatrix::from_diagonal(&d.diagonal())));
        assert!(off < 1e-8);
        assert!(bose_mesner_unitary(&s, &[0.0]).is_err());
    }

    #[test]
    fn hiding_success_paley() {
        let r = hiding_success(&build_paley_scheme(13).unwrap()).unwrap();
        assert!((r.bound - paley_hiding_closed_form(13)).abs() < 1e-8);
        assert!((r.bound - 0.3476).abs() < 1e-4);
        assert!(r.max_formula_gap < 1e-8);
        for p in [13u64, 17, 29, 53] {
            let r = hiding_success(&build_paley_scheme(p).unwrap()).unwrap();
            assert!((r.bound - paley_hiding_closed_form(p)).abs() < 1e-8);
            assert!((r.bound - 0.25).abs() <= 3.0 / (p as f64).sqrt());
        }
    }

    #[test]
    fn hiding_success_trivial() {
        for n in [2usize, 5, 9] {
            let s = trivial_scheme(n).unwrap();
            assert!(s.verify().worst() < 1e-8);
            let r = hiding_success(&s).unwrap();
            let nf = n as f64;
            assert!((r.per_class[0].direct - 4.0 * (nf - 1.0) / (nf * nf)).abs() < 1e-10);
            assert!((r.bound - 4.0 * (nf - 1.0).powi(2) / nf.powi(3)).abs() < 1e-10);
        }
    }
}
