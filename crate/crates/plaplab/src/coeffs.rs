//! The regularized coefficient matrix `a_ij(q) = delta_ij + (p-2) q_i q_j / (|q|^2 + eps^2)`
//! and its ellipticity class.

use crate::error::{Error, Result};

/// Parameters (p, eps, n). `p > 1` strictly; `eps = 0` is admitted only for
/// analytic evaluation away from critical points — the solver requires
/// `eps > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PLaplaceParams {
    pub p: f64,
    pub eps: f64,
    pub n: usize,
}

impl PLaplaceParams {
    pub fn new(p: f64, eps: f64, n: usize) -> Result<PLaplaceParams> {
        if !(p > 1.0) {
            return Err(Error::Config(format!("p must exceed 1, got {p}")));
        }
        if !(eps >= 0.0) {
            return Err(Error::Config(format!("eps must be nonnegative, got {eps}")));
        }
        if !(1..=3).contains(&n) {
            return Err(Error::Config(format!("dimension n = {n} not in 1..=3")));
        }
        Ok(PLaplaceParams { p, eps, n })
    }
}

/// Uniform parabolicity interval: `lambda_min = min(p-1, 1)`, `lambda_max = max(p-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticityBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

pub fn ellipticity_bounds(params: &PLaplaceParams) -> EllipticityBounds {
    EllipticityBounds {
        lambda_min: (params.p - 1.0).min(1.0),
        lambda_max: (params.p - 1.0).max(1.0),
    }
}

/// Symmetric n x n matrix, n <= 3, stored as the upper triangle
/// (00, 01, 02, 11, 12, 22) so symmetry is exact by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix {
    n: usize,
    upper: [f64; 6],
}

impl SymMatrix {
    pub fn zero(n: usize) -> SymMatrix {
        SymMatrix { n, upper: [0.0; 6] }
    }

    pub fn identity(n: usize) -> SymMatrix {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> SymMatrix {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn slot(i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        match (a, b) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => unreachable!("index out of range for 3x3 symmetric storage"),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[Self::slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.upper[Self::slot(i, j)] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..self.n {
            for j in 0..self.n {
                out[i] += self.get(i, j) * v[j];
            }
        }
        out
    }

    /// `v . M v`
    pub fn quad_form(&self, v: &[f64; 3]) -> f64 {
        let mv = self.mul_vec(v);
        (0..self.n).map(|i| v[i] * mv[i]).sum()
    }

    /// `sum_ij A_ij B_ij`
    pub fn double_dot(&self, other: &SymMatrix) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    /// Squared Frobenius norm; this realizes `|D^2 u|^2`.
    pub fn frobenius_sq(&self) -> f64 {
        self.double_dot(self)
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        let mut m = *self;
        for v in m.upper.iter_mut() {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        let mut m = *self;
        for (a, b) in m.upper.iter_mut().zip(other.upper.iter()) {
            *a += b;
        }
        m
    }
}

fn norm_sq(q: &[f64], n: usize) -> f64 {
    q.iter().take(n).map(|c| c * c).sum()
}

/// `a_ij(q) = delta_ij + (p-2) q_i q_j / (|q|^2 + eps^2)`.
///
/// Refuses the degenerate pair `eps = 0, q = 0`: there the equation falls
/// back to the viscosity rule ("a_ij = delta_ij + (p-2) q_i q_j for some
/// |q| <= 1"), which has no canonical numerical choice.
pub fn coeff_matrix(q: &[f64], params: &PLaplaceParams) -> Result<SymMatrix> {
    let n = params.n;
    let qsq = norm_sq(q, n);
    let denom = qsq + params.eps * params.eps;
    if denom == 0.0 {
        return Err(Error::DegenerateGradient);
    }
    let fac = (params.p - 2.0) / denom;
    let mut m = SymMatrix::identity(n);
    for i in 0..n {
        for j in i..n {
            m.set(i, j, m.get(i, j) + fac * q[i] * q[j]);
        }
    }
    Ok(m)
}

/// Closed-form eigenvalues of `coeff_matrix(q)` from the rank-one structure:
/// 1 with multiplicity n-1, and `1 + (p-2)|q|^2/(|q|^2 + eps^2)` along q.
pub fn coeff_eigenvalues(q: &[f64], params: &PLaplaceParams) -> Result<Vec<f64>> {
    let n = params.n;
    let qsq = norm_sq(q, n);
    let denom = qsq + params.eps * params.eps;
    if denom == 0.0 {
        return Err(Error::DegenerateGradient);
    }
    let mut eigs = vec![1.0; n];
    eigs[n - 1] = 1.0 + (params.p - 2.0) * qsq / denom;
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eigs)
}

/// Eigenvalues plus the check that all lie in `[lambda_min, lambda_max]`
/// (margin `-1e-12`).
pub fn eigen_within_bounds(q: &[f64], params: &PLaplaceParams) -> Result<(bool, Vec<f64>)> {
    let eigs = coeff_eigenvalues(q, params)?;
    let b = ellipticity_bounds(params);
    let ok = eigs
        .iter()
        .all(|&e| e >= b.lambda_min - 1e-12 && e <= b.lambda_max + 1e-12);
    Ok((ok, eigs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use proptest::prelude::*;

    fn params(p: f64, eps: f64, n: usize) -> PLaplaceParams {
        PLaplaceParams::new(p, eps, n).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PLaplaceParams::new(1.0, 0.1, 2).is_err());
        assert!(PLaplaceParams::new(0.5, 0.1, 2).is_err());
        assert!(PLaplaceParams::new(2.0, -0.1, 2).is_err());
        assert!(PLaplaceParams::new(2.0, 0.1, 4).is_err());
    }

    #[test]
    fn coeff_matrix_examples() {
        // p = 2 gives the identity for any q, eps.
        let m = coeff_matrix(&[0.3, -0.7], &params(2.0, 0.5, 2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(m.get(i, j), want);
            }
        }
        // q = 0, eps = 0.1, p = 5: numerator vanishes.
        let m = coeff_matrix(&[0.0, 0.0], &params(5.0, 0.1, 2)).unwrap();
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(m.get(0, 1), 0.0);
        // q = (1,0), eps = 0, p = 3 -> diag(2, 1).
        let m = coeff_matrix(&[1.0, 0.0], &params(3.0, 0.0, 2)).unwrap();
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.get(1, 1), 1.0);
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn degenerate_pair_is_refused() {
        let e = coeff_matrix(&[0.0, 0.0], &params(3.0, 0.0, 2)).unwrap_err();
        assert!(matches!(e, Error::DegenerateGradient));
    }

    #[test]
    fn bounds_examples() {
        let b = ellipticity_bounds(&params(2.0, 0.0, 2));
        assert_eq!((b.lambda_min, b.lambda_max), (1.0, 1.0));
        let b = ellipticity_bounds(&params(3.0, 0.0, 2));
        assert_eq!((b.lambda_min, b.lambda_max), (1.0, 2.0));
        let b = ellipticity_bounds(&params(1.5, 0.0, 2));
        assert_eq!((b.lambda_min, b.lambda_max), (0.5, 1.0));
    }

    #[test]
    fn eigen_examples() {
        let (ok, eigs) = eigen_within_bounds(&[1.0, 0.0], &params(3.0, 1.0, 2)).unwrap();
        assert!(ok);
        assert_eq!(eigs, vec![1.0, 1.5]);

        let (ok, eigs) = eigen_within_bounds(&[0.0, 2.0], &params(1.5, 0.0, 2)).unwrap();
        assert!(ok);
        assert_eq!(eigs, vec![0.5, 1.0]);

        let (ok, eigs) = eigen_within_bounds(&[0.4, -0.2], &params(2.0, 0.3, 2)).unwrap();
        assert!(ok);
        assert_eq!(eigs, vec![1.0, 1.0]);
    }

    #[test]
    fn trace_identity_and_large_q_limit() {
        let mut rng = SplitMix64::new(42);
        for _ in 0..2000 {
            let n = 1 + (rng.next_below(3) as usize);
            let p = rng.next_range(1.05, 9.0);
            let eps = rng.next_range(0.0001, 1.0);
            let pl = params(p, eps, n);
            let mut q = [0.0; 3];
            for c in q.iter_mut().take(n) {
                *c = rng.next_range(-2.0, 2.0);
            }
            let m = coeff_matrix(&q[..n], &pl).unwrap();
            let qsq: f64 = q.iter().take(n).map(|c| c * c).sum();
            let want = n as f64 + (p - 2.0) * qsq / (qsq + eps * eps);
            assert!((m.trace() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn eps_zero_scale_invariance_and_eps_decay_bound() {
        let pl0 = params(3.5, 0.0, 2);
        let q = [0.3, -0.8];
        let m1 = coeff_matrix(&q, &pl0).unwrap();
        let q2 = [3.0 * q[0], 3.0 * q[1]];
        let m2 = coeff_matrix(&q2, &pl0).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m1.get(i, j) - m2.get(i, j)).abs() < 1e-14);
            }
        }
        // For eps > 0 and |q| >= 10 eps the matrix is within
        // 2|p-2| eps^2/|q|^2 of the eps = 0 matrix of q/|q|.
        let mut rng = SplitMix64::new(7);
        for _ in 0..2000 {
            let p = rng.next_range(1.1, 8.0);
            let eps = rng.next_range(0.001, 0.1);
            let scale = rng.next_range(10.0, 100.0) * eps;
            let theta = rng.next_range(0.0, std::f64::consts::TAU);
            let q = [scale * theta.cos(), scale * theta.sin()];
            let qhat = [theta.cos(), theta.sin()];
            let with_eps = coeff_matrix(&q, &params(p, eps, 2)).unwrap();
            let no_eps = coeff_matrix(&qhat, &params(p, 0.0, 2)).unwrap();
            let mut diff: f64 = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    diff = diff.max((with_eps.get(i, j) - no_eps.get(i, j)).abs());
                }
            }
            let bound = 2.0 * (p - 2.0).abs() * eps * eps / (scale * scale);
            assert!(diff <= bound + 1e-15, "diff {diff} > bound {bound}");
        }
    }

    proptest! {
        #[test]
        fn eigenvalues_stay_in_bounds(
            p in 1.05f64..10.0,
            eps in 1e-6f64..1.0,
            qx in -5.0f64..5.0,
            qy in -5.0f64..5.0,
            qz in -5.0f64..5.0,
        ) {
            for n in 1..=3usize {
                let pl = params(p, eps, n);
                let q = [qx, qy, qz];
                let (ok, eigs) = eigen_within_bounds(&q[..n], &pl).unwrap();
                prop_assert!(ok, "eigs {eigs:?} escape bounds for p={p}");
                // Orthogonal eigenvalues are exactly 1.
                prop_assert!(eigs.iter().filter(|&&e| e == 1.0).count() >= n - 1);
            }
        }
    }
}
