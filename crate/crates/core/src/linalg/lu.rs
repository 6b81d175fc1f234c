use num_complex::Complex64;

use super::{matrix_p_norm, ComplexMatrix, PNorm};
use crate::error::{Error, Result};

/// Pivots at or below this multiple of the largest entry modulus count as zero.
pub const SINGULARITY_TOL: f64 = 1e-13;

/// LU factorization with partial pivoting: `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    pub l: ComplexMatrix,
    pub u: ComplexMatrix,
    /// `perm[i]` is the row of `A` that ends up in row `i` of `P A`.
    pub perm: Vec<usize>,
    /// Sign of the permutation, ±1.
    pub sign: f64,
}

impl Lu {
    pub fn min_pivot(&self) -> f64 {
        self.u.diagonal().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// The permutation as a matrix.
    pub fn permutation_matrix(&self) -> ComplexMatrix {
        let n = self.perm.len();
        let mut p = ComplexMatrix::zeros(n, n);
        for (i, &src) in self.perm.iter().enumerate() {
            p[(i, src)] = Complex64::new(1.0, 0.0);
        }
        p
    }

    /// Solves `A x = b` using the factors.
    fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.perm.len();
        let mut y: Vec<Complex64> = self.perm.iter().map(|&k| b[k]).collect();
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                let yk = y[k];
                y[i] -= lik * yk;
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let uik = self.u[(i, k)];
                let yk = y[k];
                y[i] -= uik * yk;
            }
            y[i] /= self.u[(i, i)];
        }
        y
    }
}

pub fn lu_decompose(a: &ComplexMatrix) -> Result<Lu> {
    let n = a.order()?;
    let mut u = a.clone();
    let mut l = ComplexMatrix::identity(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| u[(i, k)].norm().total_cmp(&u[(j, k)].norm()))
            .unwrap_or(k);
        if pivot_row != k {
            for j in 0..n {
                let tmp = u[(k, j)];
                u[(k, j)] = u[(pivot_row, j)];
                u[(pivot_row, j)] = tmp;
            }
            for j in 0..k {
                let tmp = l[(k, j)];
                l[(k, j)] = l[(pivot_row, j)];
                l[(pivot_row, j)] = tmp;
            }
            perm.swap(k, pivot_row);
            sign = -sign;
        }
        let pivot = u[(k, k)];
        if pivot == Complex64::new(0.0, 0.0) {
            continue;
        }
        for i in k + 1..n {
            let factor = u[(i, k)] / pivot;
            l[(i, k)] = factor;
            u[(i, k)] = Complex64::new(0.0, 0.0);
            for j in k + 1..n {
                let ukj = u[(k, j)];
                u[(i, j)] -= factor * ukj;
            }
        }
    }
    Ok(Lu { l, u, perm, sign })
}

pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    let lu = lu_decompose(a)?;
    let prod: Complex64 = lu.u.diagonal().into_iter().product();
    Ok(prod * lu.sign)
}

/// Inverse via LU; fails with [`Error::SingularMatrix`] when the smallest
/// pivot is at most `1e-13 · max|a_ij|`.
pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.order()?;
    let lu = lu_decompose(a)?;
    let threshold = SINGULARITY_TOL * matrix_p_norm(a, PNorm::Infinity);
    let pivot = lu.min_pivot();
    if pivot <= threshold {
        return Err(Error::SingularMatrix { pivot, threshold });
    }
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e[j] = Complex64::new(1.0, 0.0);
        for (i, v) in lu.solve(&e).into_iter().enumerate() {
            inv[(i, j)] = v;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn cofactor_det(a: &ComplexMatrix) -> Complex64 {
        let n = a.rows();
        if n == 1 {
            return a[(0, 0)];
        }
        (0..n)
            .map(|j| {
                let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, c| {
                    a[(r + 1, if c < j { c } else { c + 1 })]
                });
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                a[(0, j)] * cofactor_det(&minor) * s
            })
            .sum()
    }

    fn sample(n: usize, seed: u64) -> ComplexMatrix {
        crate::test_support::random_matrix(n, seed)
    }

    #[test]
    fn identity_and_swap() {
        let lu = lu_decompose(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(lu.l, ComplexMatrix::identity(3));
        assert_eq!(lu.u, ComplexMatrix::identity(3));
        assert_eq!(lu.perm, vec![0, 1, 2]);
        assert_eq!(lu.sign, 1.0);

        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let lu = lu_decompose(&swap).unwrap();
        assert_eq!(lu.sign, -1.0);
        assert_eq!(lu.perm, vec![1, 0]);
    }

    #[test]
    fn reconstruction_residual() {
        let a = sample(5, 4);
        let lu = lu_decompose(&a).unwrap();
        let pa = &lu.permutation_matrix() * &a;
        let res = (&pa - &(&lu.l * &lu.u)).frobenius_norm();
        assert!(res <= 1e-12 * a.frobenius_norm(), "residual {res}");
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&ComplexMatrix::identity(4)).unwrap(), c64(1.0, 0.0));
        let d = ComplexMatrix::from_diag(&[c64(2.0, 0.0), c64(0.0, 3.0)]);
        assert!((determinant(&d).unwrap() - c64(0.0, 6.0)).norm() < 1e-15);
        for salt in [0, 11, 27] {
            let a = sample(3, salt);
            let got = determinant(&a).unwrap();
            let want = cofactor_det(&a);
            assert!((got - want).norm() <= 1e-10 * want.norm().max(1e-300));
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(inverse(&ComplexMatrix::identity(3)).unwrap(), ComplexMatrix::identity(3));
        let d = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]);
        assert_eq!(
            inverse(&d).unwrap(),
            ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.25]])
        );
        let u = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert_eq!(
            inverse(&u).unwrap(),
            ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 1.0]])
        );
        let a = sample(6, 9);
        let r = (&(&a * &inverse(&a).unwrap()) - &ComplexMatrix::identity(6)).frobenius_norm();
        assert!(r < 1e-10);
    }

    #[test]
    fn singular_is_rejected() {
        let s = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(inverse(&s), Err(Error::SingularMatrix { .. })));
        assert!(matches!(inverse(&ComplexMatrix::zeros(2, 2)), Err(Error::SingularMatrix { .. })));
    }
}
