//! Small dense Jacobi solvers.
//!
//! Concurrence depends to first order on couplings many orders of magnitude
//! below the diagonal (`|z| ~ e^{−s}`). The QR-based solvers in `nalgebra`
//! deflate such couplings early, so the eigenvectors and singular values
//! used there come from cyclic Jacobi sweeps, which keep them to working
//! precision.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;

/// Couplings below this are rounding debris; in the subnormal range `z/|z|`
/// is no longer a unit phase, so rotating by it would not be unitary.
const NEGLIGIBLE: f64 = f64::MIN_POSITIVE / f64::EPSILON;

/// Parameters `(c, s)` of the real rotation that zeroes the coupling `r > 0`
/// between diagonal entries `app` and `aqq`.
fn rotation(app: f64, aqq: f64, r: f64) -> (f64, f64) {
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let c = 1.0 / t.hypot(1.0);
    (c, t * c)
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a Hermitian
/// matrix. Only the upper triangle is trusted.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in 0..i {
            a[(i, j)] = a[(j, i)].conj();
        }
    }
    let mut v = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        let scale: f64 = (0..n).map(|i| a[(i, i)].re.powi(2)).sum::<f64>();
        if off <= (f64::EPSILON * f64::EPSILON) * 1e-4 * scale || off < NEGLIGIBLE {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r < NEGLIGIBLE {
                    continue;
                }
                let phase = apq / r;
                let (c, s) = rotation(a[(p, p)].re, a[(q, q)].re, r);
                // J = diag(.., 1, .., e^{−iφ}, ..) · R(c, s) on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Singular values (descending) by one-sided Jacobi orthogonalization of
/// the columns.
pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let (rows, n) = m.shape();
    let mut g = m.clone();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = g.column(p).norm_squared();
                let beta = g.column(q).norm_squared();
                let gamma = g.column(p).dotc(&g.column(q));
                let r = gamma.norm();
                if r < NEGLIGIBLE || r <= f64::EPSILON * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let (c, s) = rotation(alpha, beta, r);
                for k in 0..rows {
                    let gp = g[(k, p)];
                    let gq = g[(k, q)] * phase.conj();
                    g[(k, p)] = gp * c - gq * s;
                    g[(k, q)] = gp * s + gq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
