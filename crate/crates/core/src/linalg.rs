//! Dense complex matrix helpers shared by the representation builders and
//! the relation checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense complex matrix. Entry `(row, col)` is `(output basis vector, input basis vector)`;
/// matrices act on column vectors of basis coefficients.
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Entrywise max-norm `max |a_ij|`. Zero for empty matrices.
pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Entrywise max-norm of `a - b`. Shapes must agree.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Ordered product `ms[0] * ms[1] * ... * ms[k-1]`; identity of size `dim` for an empty list.
pub fn product<'a, I>(dim: usize, ms: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
{
    ms.into_iter().fold(identity(dim), |acc, m| acc * m)
}

/// Inverse through LU; `None` when singular. The empty matrix is its own inverse.
pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(m.clone());
    }
    m.clone().try_inverse()
}

/// `e^{i * angle}`.
pub fn phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

pub fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_matrices_behave() {
        let e = identity(0);
        assert_eq!(max_norm(&e), 0.0);
        assert_eq!(inverse(&e).unwrap().shape(), (0, 0));
        assert_eq!(product(0, []).shape(), (0, 0));
    }

    #[test]
    fn inverse_of_rotation() {
        let m = CMatrix::from_row_slice(2, 2, &[ZERO, phase(0.3), ONE, ZERO]);
        let inv = inverse(&m).unwrap();
        assert!(max_diff(&(m * inv), &identity(2)) < 1e-14);
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = CMatrix::from_element(2, 2, ONE);
        assert!(inverse(&m).is_none());
    }
}
