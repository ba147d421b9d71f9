// SPDX-License-Identifier: Apache-2.0

//! Dense complex matrix helpers shared by the model, integrator and
//! observables.

use nalgebra::ComplexField;
use nalgebra::{DMatrix, SymmetricEigen};

use crate::scalar::{Cplx, Real};

/// Dense complex matrix over the scalar type.
pub type CMatrix<T> = DMatrix<Cplx<T>>;

/// Tolerance that never drops below a few ulps of the scalar type, so that
/// thresholds chosen for `f64` stay meaningful in `f32`.
#[inline]
pub fn tolerance<T: Real>(base: f64) -> T {
    let floor = T::default_epsilon() * T::lit(64.0);
    let base = T::lit(base);
    if base > floor {
        base
    } else {
        floor
    }
}

pub fn trace<T: Real>(m: &CMatrix<T>) -> Cplx<T> {
    m.diagonal()
        .iter()
        .fold(Cplx::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).modulus())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// Largest entrywise modulus.
pub fn max_abs<T: Real>(a: &CMatrix<T>) -> T {
    a.iter()
        .map(|z| z.modulus())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
}

/// max |m - m†|
pub fn hermiticity_error<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// In-place projection onto the Hermitian part, (m + m†)/2.
pub fn hermitize<T: Real>(m: &mut CMatrix<T>) {
    let n = m.nrows();
    let half = T::lit(0.5);
    for i in 0..n {
        m[(i, i)].im = T::zero();
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()).scale(half);
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut h = m.clone();
    hermitize(&mut h);
    let mut values: Vec<T> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn hermitize_symmetrizes() {
        let mut m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.1),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        assert!(hermiticity_error(&m) > 0.5);
        hermitize(&mut m);
        assert_eq!(hermiticity_error(&m), 0.0);
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 0.5));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, -0.5));
    }

    #[test]
    fn pauli_y_spectrum() {
        let m = CMatrix::<f64>::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let ev = hermitian_eigenvalues(&m);
        assert!((ev[0] + 1.0).abs() < 1e-14);
        assert!((ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tolerance_floor() {
        assert_eq!(tolerance::<f64>(1e-12), 1e-12);
        assert!(tolerance::<f32>(1e-12) > 1e-6);
    }
}
