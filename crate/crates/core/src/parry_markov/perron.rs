use super::MarkovError;

pub const DEFAULT_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Perron eigenvalue with left (`u`) and right (`v`) eigenvectors, scaled so
/// that Σ vᵢ = 1 and uᵀv = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronData {
    pub lambda: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl PerronData {
    /// max‖Mv − λv‖∞ and ‖uᵀM − λuᵀ‖∞.
    pub fn residuals(&self, m: &[Vec<f64>]) -> (f64, f64) {
        let n = m.len();
        let right = (0..n)
            .map(|i| {
                let mv: f64 = (0..n).map(|j| m[i][j] * self.v[j]).sum();
                (mv - self.lambda * self.v[i]).abs()
            })
            .fold(0.0, f64::max);
        let left = (0..n)
            .map(|j| {
                let um: f64 = (0..n).map(|i| self.u[i] * m[i][j]).sum();
                (um - self.lambda * self.u[j]).abs()
            })
            .fold(0.0, f64::max);
        (right, left)
    }

    pub fn normalization(&self) -> f64 {
        self.u.iter().zip(&self.v).map(|(a, b)| a * b).sum()
    }
}

/// Power iteration on M and Mᵀ from the all-ones vector, renormalizing every
/// step. λ is the two-sided Rayleigh quotient uᵀMv / uᵀv at convergence.
pub fn perron_frobenius(
    m: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<PerronData, MarkovError> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(MarkovError::InvalidArgument(
            "matrix must be square and nonempty".into(),
        ));
    }
    if m.iter().flatten().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
        return Err(MarkovError::InvalidArgument(
            "matrix entries must be finite and nonnegative".into(),
        ));
    }
    let transpose: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let v = dominant_vector(m, tol, max_iter)?;
    let u = dominant_vector(&transpose, tol, max_iter)?;

    let mv = mat_vec(m, &v);
    let numerator: f64 = u.iter().zip(&mv).map(|(a, b)| a * b).sum();
    let denominator: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let lambda = numerator / denominator;

    let v_sum: f64 = v.iter().sum();
    let v: Vec<f64> = v.iter().map(|x| x / v_sum).collect();
    let uv: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let u: Vec<f64> = u.iter().map(|x| x / uv).collect();
    Ok(PerronData { lambda, u, v })
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn dominant_vector(m: &[Vec<f64>], tol: f64, max_iter: usize) -> Result<Vec<f64>, MarkovError> {
    let n = m.len();
    let mut x = vec![1.0; n];
    let mut change = f64::INFINITY;
    for _ in 0..max_iter {
        let mut y = mat_vec(m, &x);
        let scale = y.iter().cloned().fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(MarkovError::InvalidArgument(
                "matrix is nilpotent on the all-ones vector".into(),
            ));
        }
        y.iter_mut().for_each(|e| *e /= scale);
        change = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if change <= tol {
            return Ok(x);
        }
    }
    Err(MarkovError::NoConvergence {
        iterations: max_iter,
        residual: change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding_graph::build_free_group_graph;

    #[test]
    fn f2_closed_forms() {
        let g = build_free_group_graph(2).unwrap();
        let p = perron_frobenius(&g.adjacency_f64(), DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap();
        assert!((p.lambda - 3.0).abs() < 1e-12);
        for i in 0..4 {
            assert!((p.u[i] - p.u[0]).abs() < 1e-12);
            assert!((p.v[i] - p.v[0]).abs() < 1e-12);
            assert!((p.u[i] * p.v[i] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn golden_ratio() {
        let m = vec![vec![1.0, 1.0], vec![1.0, 0.0]];
        let p = perron_frobenius(&m, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.lambda - phi).abs() < 1e-12);
        let (r, l) = p.residuals(&m);
        assert!(r < 1e-12 && l < 1e-12);
        assert!((p.normalization() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_convergence_reports_residual() {
        // period-2 matrix: the all-ones start is an eigenvector here, so use an
        // asymmetric one whose iterates oscillate.
        let m = vec![vec![0.0, 2.0], vec![1.0, 0.0]];
        match perron_frobenius(&m, 1e-14, 50) {
            Err(MarkovError::NoConvergence { iterations, residual }) => {
                assert_eq!(iterations, 50);
                assert!(residual > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_negative_entries() {
        let m = vec![vec![1.0, -1.0], vec![1.0, 1.0]];
        assert!(perron_frobenius(&m, 1e-14, 10).is_err());
    }
}
