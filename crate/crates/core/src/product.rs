//! Product-formula baselines and tree simulation by two star forests.
//!
//! A rooted tree splits into stars centered at even-depth vertices and stars
//! centered at odd-depth vertices (each star holds a center and its
//! children). Stars in one forest are vertex-disjoint, so each forest is a
//! direct sum of rank-2 star Hamiltonians whose propagators are closed-form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WalkError};
use crate::io::TreeFile;
use crate::linalg::{check_dim, exact_propagator, CMatrix, CVector, HermitianMatrix, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    First,
    Second,
}

impl TryFrom<u32> for Order {
    type Error = WalkError;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            other => Err(WalkError::InvalidParameter(format!(
                "product formula order must be 1 or 2, got {other}"
            ))),
        }
    }
}

fn require_steps(n: usize) -> Result<()> {
    if n == 0 {
        return Err(WalkError::InvalidParameter("step count must be at least 1".into()));
    }
    Ok(())
}

/// `(e^{-iAt/n} e^{-iBt/n})^n`.
pub fn trotter1(a: &HermitianMatrix, b: &HermitianMatrix, t: f64, n: usize) -> Result<CMatrix> {
    require_steps(n)?;
    check_dim(a.dim(), b.dim())?;
    let dt = t / n as f64;
    let step = exact_propagator(a, dt)? * exact_propagator(b, dt)?;
    Ok(power(&step, n))
}

/// `(e^{-iAt/2n} e^{-iBt/n} e^{-iAt/2n})^n`.
pub fn trotter2(a: &HermitianMatrix, b: &HermitianMatrix, t: f64, n: usize) -> Result<CMatrix> {
    require_steps(n)?;
    check_dim(a.dim(), b.dim())?;
    let dt = t / n as f64;
    let half = exact_propagator(a, dt / 2.0)?;
    let step = &half * exact_propagator(b, dt)? * &half;
    Ok(power(&step, n))
}

pub fn product_formula(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    t: f64,
    n: usize,
    order: Order,
) -> Result<CMatrix> {
    match order {
        Order::First => trotter1(a, b, t, n),
        Order::Second => trotter2(a, b, t, n),
    }
}

fn power(m: &CMatrix, mut n: usize) -> CMatrix {
    let mut result = CMatrix::identity(m.nrows(), m.ncols());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// A rooted tree with complex edge weights. `weights[c]` is the entry
/// `H[c][parent(c)]`; the opposite entry is its conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    weights: Vec<Complex64>,
    depth: Vec<usize>,
}

impl WeightedTree {
    pub fn new(root: usize, parent: Vec<Option<usize>>, weights: Vec<Complex64>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(WalkError::MalformedTree("tree has no vertices".into()));
        }
        if weights.len() != n {
            return Err(WalkError::MalformedTree(format!(
                "{} weights for {n} vertices",
                weights.len()
            )));
        }
        if root >= n {
            return Err(WalkError::MalformedTree(format!("root {root} out of range")));
        }
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if v != root => {
                    return Err(WalkError::MalformedTree(format!("vertex {v} has no parent")))
                }
                Some(_) if v == root => {
                    return Err(WalkError::MalformedTree("root has a parent".into()))
                }
                Some(q) if q >= n => {
                    return Err(WalkError::MalformedTree(format!("parent {q} of {v} out of range")))
                }
                Some(q) if q == v => {
                    return Err(WalkError::MalformedTree(format!("vertex {v} is its own parent")))
                }
                _ => {}
            }
        }
        let mut depth: Vec<Option<usize>> = vec![None; n];
        depth[root] = Some(0);
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while depth[v].is_none() {
                if path.len() > n {
                    return Err(WalkError::MalformedTree(format!("cycle through vertex {start}")));
                }
                path.push(v);
                v = parent[v].expect("only the root lacks a parent");
            }
            let mut d = depth[v].expect("loop exits on a known depth");
            for &u in path.iter().rev() {
                d += 1;
                depth[u] = Some(d);
            }
        }
        Ok(Self {
            root,
            parent,
            weights,
            depth: depth.into_iter().map(|d| d.expect("all depths set")).collect(),
        })
    }

    pub fn from_file(file: &TreeFile) -> Result<Self> {
        if file.parent.len() != file.n || file.weights.len() != file.n {
            return Err(WalkError::MalformedTree(format!(
                "n = {} but {} parents and {} weights",
                file.n,
                file.parent.len(),
                file.weights.len()
            )));
        }
        let parent = file
            .parent
            .iter()
            .enumerate()
            .map(|(v, &p)| {
                if p < 0 || p as usize == v && v == file.root {
                    Ok(None)
                } else {
                    usize::try_from(p)
                        .map(Some)
                        .map_err(|_| WalkError::MalformedTree(format!("bad parent {p}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let weights = file.weights.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Self::new(file.root, parent, weights)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn weight(&self, v: usize) -> Complex64 {
        self.weights[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.parent[c] == Some(v)).collect()
    }

    pub fn hamiltonian(&self) -> HermitianMatrix {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for c in 0..n {
            if let Some(p) = self.parent[c] {
                m[(c, p)] = self.weights[c];
                m[(p, c)] = self.weights[c].conj();
            }
        }
        HermitianMatrix::new(m).expect("tree Hamiltonian is Hermitian by construction")
    }
}

/// `h = max_j √(Σ_k |H_kj|²)`, the largest column 2-norm.
pub fn max_column_norm(h: &HermitianMatrix) -> f64 {
    let m = h.matrix();
    (0..m.ncols())
        .map(|j| m.column(j).norm())
        .fold(0.0, f64::max)
}

/// A star: `H = Σ_i w_i |leaf_i⟩⟨center| + h.c.`.
#[derive(Debug, Clone, PartialEq)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
    pub weights: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarForestSplit {
    pub h1: HermitianMatrix,
    pub h2: HermitianMatrix,
    /// Stars centered at even depth.
    pub forest1: Vec<Star>,
    /// Stars centered at odd depth.
    pub forest2: Vec<Star>,
}

pub fn split_tree(tree: &WeightedTree) -> Result<StarForestSplit> {
    let n = tree.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..n {
        if let Some(p) = tree.parent(c) {
            children[p].push(c);
        }
    }
    let mut m1 = CMatrix::zeros(n, n);
    let mut m2 = CMatrix::zeros(n, n);
    let mut forest1 = Vec::new();
    let mut forest2 = Vec::new();
    for (center, kids) in children.into_iter().enumerate() {
        if kids.is_empty() {
            continue;
        }
        let (m, forest) = if tree.depth(center).is_multiple_of(2) {
            (&mut m1, &mut forest1)
        } else {
            (&mut m2, &mut forest2)
        };
        for &c in &kids {
            m[(c, center)] = tree.weight(c);
            m[(center, c)] = tree.weight(c).conj();
        }
        forest.push(Star {
            center,
            weights: kids.iter().map(|&c| tree.weight(c)).collect(),
            leaves: kids,
        });
    }
    Ok(StarForestSplit {
        h1: HermitianMatrix::new(m1)?,
        h2: HermitianMatrix::new(m2)?,
        forest1,
        forest2,
    })
}

/// The two nonzero eigenpairs of a star on its local basis
/// `(center, leaf_1, ..., leaf_k)`: `λ = √Σ|w_i|²` with eigenvectors
/// `(|0⟩ ± (1/λ)Σ w_i|i⟩)/√2` for `±λ`.
pub fn star_eigenpairs(weights: &[Complex64]) -> Result<(f64, CVector, CVector)> {
    let lambda = weights.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if weights.is_empty() || lambda == 0.0 {
        return Err(WalkError::ZeroStar);
    }
    let k = weights.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVector::from_fn(k + 1, |i, _| {
        if i == 0 {
            Complex64::new(s, 0.0)
        } else {
            weights[i - 1] * (s / lambda)
        }
    });
    let minus = CVector::from_fn(k + 1, |i, _| if i == 0 { plus[0] } else { -plus[i] });
    Ok((lambda, plus, minus))
}

/// `e^{-iH_star t}` on the star's local basis, from the rank-2 form
/// `1 + (e^{-iλt} - 1)v₊v₊† + (e^{iλt} - 1)v₋v₋†`.
pub fn star_propagator(weights: &[Complex64], t: f64) -> Result<CMatrix> {
    let (lambda, plus, minus) = star_eigenpairs(weights)?;
    let k = weights.len() + 1;
    let a = Complex64::from_polar(1.0, -lambda * t) - 1.0;
    let b = Complex64::from_polar(1.0, lambda * t) - 1.0;
    Ok(CMatrix::identity(k, k) + &plus * plus.adjoint() * a + &minus * minus.adjoint() * b)
}

/// Applies `e^{-iH_star t}` in place to a global state vector.
pub fn apply_star(star: &Star, t: f64, v: &mut CVector) -> Result<()> {
    let (lambda, plus, minus) = star_eigenpairs(&star.weights)?;
    let idx: Vec<usize> = std::iter::once(star.center)
        .chain(star.leaves.iter().copied())
        .collect();
    let a = Complex64::from_polar(1.0, -lambda * t) - 1.0;
    let b = Complex64::from_polar(1.0, lambda * t) - 1.0;
    let mut p = ZERO;
    let mut m = ZERO;
    for (i, &g) in idx.iter().enumerate() {
        p += plus[i].conj() * v[g];
        m += minus[i].conj() * v[g];
    }
    for (i, &g) in idx.iter().enumerate() {
        v[g] += plus[i] * (a * p) + minus[i] * (b * m);
    }
    Ok(())
}

/// Applies a forest's propagator: stars are disjoint, so order is irrelevant.
/// Stars whose weights are all zero act as the identity.
pub fn apply_forest(stars: &[Star], t: f64, v: &mut CVector) -> Result<()> {
    for star in stars {
        match apply_star(star, t, v) {
            Err(WalkError::ZeroStar) => {}
            other => other?,
        }
    }
    Ok(())
}

/// Product-formula evolution of `v` under `H = H₁ + H₂` using the forest
/// propagators.
pub fn simulate_tree_state(
    split: &StarForestSplit,
    v: &CVector,
    t: f64,
    n: usize,
    order: Order,
) -> Result<CVector> {
    require_steps(n)?;
    check_dim(split.h1.dim(), v.len())?;
    let dt = t / n as f64;
    let mut out = v.clone();
    for _ in 0..n {
        match order {
            Order::First => {
                apply_forest(&split.forest2, dt, &mut out)?;
                apply_forest(&split.forest1, dt, &mut out)?;
            }
            Order::Second => {
                apply_forest(&split.forest1, dt / 2.0, &mut out)?;
                apply_forest(&split.forest2, dt, &mut out)?;
                apply_forest(&split.forest1, dt / 2.0, &mut out)?;
            }
        }
    }
    Ok(out)
}

/// Dense unitary of the forest product formula,
/// `(e^{-iH₁t/n} e^{-iH₂t/n})^n` or its symmetric second-order version.
pub fn simulate_tree(tree: &WeightedTree, t: f64, n: usize, order: Order) -> Result<CMatrix> {
    let split = split_tree(tree)?;
    let dim = tree.len();
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let e = crate::linalg::basis_vector(dim, j);
        m.set_column(j, &simulate_tree_state(&split, &e, t, n, order)?);
    }
    Ok(m)
}

/// Splits a matrix into its diagonal and off-diagonal parts.
pub fn diagonal_split(h: &HermitianMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let m = h.matrix();
    let n = m.nrows();
    let diag = CMatrix::from_fn(n, n, |j, k| if j == k { m[(j, k)] } else { ZERO });
    let off = CMatrix::from_fn(n, n, |j, k| if j == k { ZERO } else { m[(j, k)] });
    (
        HermitianMatrix::new(diag).expect("diagonal of a Hermitian matrix"),
        HermitianMatrix::new(off).expect("off-diagonal of a Hermitian matrix"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::loglog_slope;
    use crate::linalg::{eig_hermitian, operator_norm};
    use crate::sampling::{random_hermitian, random_tree, random_unit_vector, stream};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn path4() -> WeightedTree {
        WeightedTree::new(0, vec![None, Some(0), Some(1), Some(2)], vec![ZERO, c(1.0), c(2.0), c(3.0)])
            .unwrap()
    }

    #[test]
    fn commuting_pairs_are_exact() {
        let a = HermitianMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -2.0]]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 3.0]]).unwrap();
        let exact = exact_propagator(&a.sum(&b).unwrap(), 1.3).unwrap();
        for n in [1, 3, 10] {
            assert!(operator_norm(&(trotter1(&a, &b, 1.3, n).unwrap() - &exact)) < 1e-10);
            assert!(operator_norm(&(trotter2(&a, &b, 1.3, n).unwrap() - &exact)) < 1e-10);
        }
    }

    #[test]
    fn pauli_pair_first_order() {
        let a = HermitianMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        let b = HermitianMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, -0.5]]).unwrap();
        let exact = exact_propagator(&a.sum(&b).unwrap(), 1.0).unwrap();
        // independent reference value: 2.296820291e-3 (scipy expm)
        let err = operator_norm(&(trotter1(&a, &b, 1.0, 100).unwrap() - exact));
        assert!((err - 2.296820291e-3).abs() < 1e-9, "{err}");
    }

    #[test]
    fn error_scaling_orders() {
        let mut rng = stream(0, "trotter-scaling");
        let ns = [4usize, 8, 16, 32, 64, 128, 256];
        for _ in 0..3 {
            let a = random_hermitian(&mut rng, 4).scaled(0.25);
            let b = random_hermitian(&mut rng, 4).scaled(0.25);
            let exact = exact_propagator(&a.sum(&b).unwrap(), 1.0).unwrap();
            let e1: Vec<f64> = ns
                .iter()
                .map(|&n| operator_norm(&(trotter1(&a, &b, 1.0, n).unwrap() - &exact)))
                .collect();
            let e2: Vec<f64> = ns
                .iter()
                .map(|&n| operator_norm(&(trotter2(&a, &b, 1.0, n).unwrap() - &exact)))
                .collect();
            let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
            assert!((loglog_slope(&xs, &e1) + 1.0).abs() < 0.3);
            assert!((loglog_slope(&xs, &e2) + 2.0).abs() < 0.3);
            let halving = e1[2] / e1[3];
            assert!((halving - 2.0).abs() < 0.4, "{halving}");
        }
    }

    #[test]
    fn second_order_time_reversal() {
        let mut rng = stream(1, "trotter-reverse");
        let a = random_hermitian(&mut rng, 3);
        let b = random_hermitian(&mut rng, 3);
        let fwd = trotter2(&a, &b, 0.7, 5).unwrap();
        let bwd = trotter2(&a, &b, -0.7, 5).unwrap();
        assert!(operator_norm(&(fwd * bwd - CMatrix::identity(3, 3))) < 1e-9);
    }

    #[test]
    fn zero_steps_rejected() {
        let a = HermitianMatrix::identity(2);
        assert!(trotter1(&a, &a, 1.0, 0).is_err());
        assert!(Order::try_from(3).is_err());
    }

    #[test]
    fn tree_validation() {
        assert!(matches!(
            WeightedTree::new(0, vec![None, Some(2), Some(1)], vec![ZERO; 3]),
            Err(WalkError::MalformedTree(_))
        ));
        assert!(matches!(
            WeightedTree::new(0, vec![None, None], vec![ZERO; 2]),
            Err(WalkError::MalformedTree(_))
        ));
        assert!(matches!(
            WeightedTree::new(0, vec![None, Some(5)], vec![ZERO; 2]),
            Err(WalkError::MalformedTree(_))
        ));
        assert!(matches!(
            WeightedTree::new(0, vec![None, Some(0)], vec![ZERO; 3]),
            Err(WalkError::MalformedTree(_))
        ));
        let t = path4();
        assert_eq!((0..4).map(|v| t.depth(v)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn single_edge_split() {
        let t = WeightedTree::new(0, vec![None, Some(0)], vec![ZERO, Complex64::new(1.0, 2.0)]).unwrap();
        let s = split_tree(&t).unwrap();
        assert_eq!(s.h1, t.hamiltonian());
        assert_eq!(s.h2, HermitianMatrix::zeros(2));
    }

    #[test]
    fn path_split() {
        let s = split_tree(&path4()).unwrap();
        let centers1: Vec<(usize, Vec<usize>)> =
            s.forest1.iter().map(|st| (st.center, st.leaves.clone())).collect();
        let centers2: Vec<(usize, Vec<usize>)> =
            s.forest2.iter().map(|st| (st.center, st.leaves.clone())).collect();
        assert_eq!(centers1, vec![(0, vec![1]), (2, vec![3])]);
        assert_eq!(centers2, vec![(1, vec![2])]);
    }

    #[test]
    fn random_tree_split_is_exact_and_disjoint() {
        let (parent, weights) = random_tree(&mut stream(2, "split"), 50);
        let tree = WeightedTree::new(0, parent, weights).unwrap();
        let s = split_tree(&tree).unwrap();
        assert_eq!(s.h1.matrix() + s.h2.matrix(), *tree.hamiltonian().matrix());
        for forest in [&s.forest1, &s.forest2] {
            let mut incidence = [0; 50];
            for star in forest {
                incidence[star.center] += 1;
                for &l in &star.leaves {
                    incidence[l] += 1;
                }
            }
            assert!(incidence.iter().all(|&k| k <= 1));
        }
        let edges: usize = s.forest1.iter().chain(&s.forest2).map(|st| st.leaves.len()).sum();
        assert_eq!(edges, 49);
    }

    #[test]
    fn star_examples() {
        let (lambda, _, _) = star_eigenpairs(&[c(3.0), c(4.0)]).unwrap();
        assert_eq!(lambda, 5.0);

        let u = star_propagator(&[c(1.0)], PI / 2.0).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, -Complex64::i(), -Complex64::i(), ZERO]);
        assert!(operator_norm(&(u - expected)) < 1e-12);

        let w = [c(1.0), c(1.0), c(1.0)];
        let (lambda, plus, minus) = star_eigenpairs(&w).unwrap();
        let mut m = CMatrix::zeros(4, 4);
        for i in 0..3 {
            m[(i + 1, 0)] = w[i];
            m[(0, i + 1)] = w[i].conj();
        }
        assert!((lambda - 3f64.sqrt()).abs() < 1e-15);
        assert!((&m * &plus - &plus * c(lambda)).norm() < 1e-10);
        assert!((&m * &minus + &minus * c(lambda)).norm() < 1e-10);
        assert!((plus[1] - c(1.0 / 6f64.sqrt())).norm() < 1e-15);

        assert_eq!(star_eigenpairs(&[ZERO, ZERO]).unwrap_err(), WalkError::ZeroStar);
    }

    #[test]
    fn star_rank_and_dense_agreement() {
        let mut rng = stream(3, "star");
        let (_, weights) = random_tree(&mut rng, 6);
        let w = &weights[1..];
        let k = w.len() + 1;
        let mut m = CMatrix::zeros(k, k);
        for i in 0..w.len() {
            m[(i + 1, 0)] = w[i];
            m[(0, i + 1)] = w[i].conj();
        }
        let h = HermitianMatrix::new(m).unwrap();
        let spec = eig_hermitian(&h).unwrap();
        let lambda = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((spec.eigenvalues[0] + lambda).abs() < 1e-10);
        assert!((spec.eigenvalues[k - 1] - lambda).abs() < 1e-10);
        for e in &spec.eigenvalues[1..k - 1] {
            assert!(e.abs() < 1e-10);
        }
        let dense = exact_propagator(&h, 0.9).unwrap();
        assert!(operator_norm(&(star_propagator(w, 0.9).unwrap() - dense)) < 1e-10);
    }

    #[test]
    fn forest_order_is_irrelevant() {
        let mut rng = stream(4, "forest-order");
        let (parent, weights) = random_tree(&mut rng, 30);
        let s = split_tree(&WeightedTree::new(0, parent, weights).unwrap()).unwrap();
        let v = random_unit_vector(&mut rng, 30);
        let mut a = v.clone();
        apply_forest(&s.forest1, 0.8, &mut a).unwrap();
        let reversed: Vec<Star> = s.forest1.iter().rev().cloned().collect();
        let mut b = v.clone();
        apply_forest(&reversed, 0.8, &mut b).unwrap();
        assert!((a - b).norm() < 1e-12);
        let mut c = v.clone();
        apply_forest(&s.forest1, 0.8, &mut c).unwrap();
        let dense = exact_propagator(&s.h1, 0.8).unwrap() * &v;
        assert!((c - dense).norm() < 1e-10);
    }

    #[test]
    fn tree_simulation() {
        let t = path4();
        assert!(operator_norm(&(simulate_tree(&t, 0.0, 3, Order::First).unwrap() - CMatrix::identity(4, 4))) < 1e-14);

        let star = WeightedTree::new(0, vec![None, Some(0), Some(0)], vec![ZERO, c(1.0), c(-2.0)]).unwrap();
        let exact = exact_propagator(&star.hamiltonian(), 1.7).unwrap();
        assert!(operator_norm(&(simulate_tree(&star, 1.7, 1, Order::First).unwrap() - exact)) < 1e-10);

        let (parent, _) = random_tree(&mut stream(5, "tree20"), 20);
        let tree = WeightedTree::new(0, parent, vec![c(1.0); 20]).unwrap();
        let exact = exact_propagator(&tree.hamiltonian(), 1.0).unwrap();
        let approx = simulate_tree(&tree, 1.0, 64, Order::Second).unwrap();
        assert!(operator_norm(&(approx - exact)) < 1e-3);
    }

    #[test]
    fn tree_error_scaling() {
        let mut rng = stream(6, "tree-scaling");
        let ns = [4usize, 8, 16, 32, 64, 128, 256];
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        for _ in 0..3 {
            let (parent, weights) = random_tree(&mut rng, 12);
            let tree = WeightedTree::new(0, parent, weights).unwrap();
            let h = tree.hamiltonian();
            let t = 2.0 / max_column_norm(&h);
            let exact = exact_propagator(&h, t).unwrap();
            for (order, target) in [(Order::First, -1.0), (Order::Second, -2.0)] {
                let errs: Vec<f64> = ns
                    .iter()
                    .map(|&n| operator_norm(&(simulate_tree(&tree, t, n, order).unwrap() - &exact)))
                    .collect();
                let slope = loglog_slope(&xs, &errs);
                assert!((slope - target).abs() < 0.3, "{order:?} {slope}");
            }
        }
    }

    #[test]
    fn tree_file_roundtrip() {
        let file = TreeFile {
            n: 3,
            root: 0,
            parent: vec![-1, 0, 0],
            weights: vec![[0.0, 0.0], [1.0, 0.5], [2.0, 0.0]],
        };
        let t = WeightedTree::from_file(&file).unwrap();
        assert_eq!(t.hamiltonian()[(1, 0)], Complex64::new(1.0, 0.5));
        assert_eq!(t.hamiltonian()[(0, 1)], Complex64::new(1.0, -0.5));
        assert_eq!(t.children(0), vec![1, 2]);
    }

    #[test]
    fn diagonal_split_sums_back() {
        let h = random_hermitian(&mut stream(7, "dsplit"), 4);
        let (a, b) = diagonal_split(&h);
        assert_eq!(a.sum(&b).unwrap(), h);
    }
}
