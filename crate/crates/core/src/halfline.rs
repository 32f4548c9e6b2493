//! Constant-coefficient Dirac systems `T(d/dt + A)` on the half-line with
//! spectral boundary conditions.
//!
//! Solutions are `σ(t) = e^{-tA}σ(0)`: square integrable iff `σ(0) ∈ H_{>0}(A)`
//! and bounded (extended) iff `σ(0) ∈ H_{≥0}(A)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, max_abs};

const INVARIANT_TOL: f64 = 1e-10;

/// The half `H⁺` or `H⁻` of a grading a basis vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Half {
    Plus,
    Minus,
}

#[derive(Clone, Debug)]
pub struct ConstantDiracSystem {
    a: DMatrix<Complex64>,
    t: DMatrix<Complex64>,
    grading: Option<Vec<Half>>,
    spectrum: Vec<f64>,
    tol: f64,
}

impl ConstantDiracSystem {
    /// Checks `A* = A`, `T* = -T`, `T² = -1` and `AT = -TA`.
    pub fn new(a: DMatrix<Complex64>, t: DMatrix<Complex64>) -> Result<Self> {
        let k = a.nrows();
        if a.ncols() != k || t.nrows() != k || t.ncols() != k {
            return Err(Error::InvalidSystem("A and T must be square of equal size".into()));
        }
        let violations = [
            ("A is not Hermitian", max_abs(&(&a - a.adjoint()))),
            ("T* != -T", max_abs(&(t.adjoint() + &t))),
            ("T^2 != -1", max_abs(&(&t * &t + DMatrix::identity(k, k)))),
            ("AT != -TA", max_abs(&(&a * &t + &t * &a))),
        ];
        if let Some((rule, r)) = violations.iter().find(|(_, r)| *r > INVARIANT_TOL) {
            return Err(Error::InvalidSystem(format!("{rule} (residual {r:e})")));
        }
        let spectrum = if k == 0 { Vec::new() } else { hermitian_eigen(&a, INVARIANT_TOL)?.0 };
        let tol = 1e-9 * max_abs(&a).max(1.0);
        Ok(ConstantDiracSystem { a, t, grading: None, spectrum, tol })
    }

    /// Adds a grading; `T` must swap the halves and `A` preserve them.
    pub fn with_grading(mut self, grading: Vec<Half>) -> Result<Self> {
        if grading.len() != self.a.nrows() {
            return Err(Error::InvalidSystem("grading length differs from rank".into()));
        }
        let k = grading.len();
        for r in 0..k {
            for c in 0..k {
                let same = grading[r] == grading[c];
                if same && self.t[(r, c)].norm() > INVARIANT_TOL {
                    return Err(Error::InvalidSystem("T does not exchange the graded halves".into()));
                }
                if !same && self.a[(r, c)].norm() > INVARIANT_TOL {
                    return Err(Error::InvalidSystem("A does not preserve the graded halves".into()));
                }
            }
        }
        self.grading = Some(grading);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.a.nrows()
    }

    /// Eigenvalues of `A`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    fn half(&self, half: Half) -> Result<Vec<f64>> {
        let grading =
            self.grading.as_ref().ok_or_else(|| Error::InvalidSystem("system has no grading".into()))?;
        let idx: Vec<usize> = (0..grading.len()).filter(|&i| grading[i] == half).collect();
        if idx.is_empty() {
            return Ok(Vec::new());
        }
        let block = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.a[(idx[r], idx[c])]);
        Ok(hermitian_eigen(&block, INVARIANT_TOL)?.0)
    }
}

/// The condition `σ(0) ∈ H_{<a}(A)` (strict) or `H_{≤a}(A)` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralBC {
    pub threshold: f64,
    pub inclusive: bool,
}

impl SpectralBC {
    pub fn below(threshold: f64) -> Self {
        SpectralBC { threshold, inclusive: false }
    }

    pub fn at_most(threshold: f64) -> Self {
        SpectralBC { threshold, inclusive: true }
    }

    /// `H_{<a}` and `H_{≤-a}` are adjoint to each other.
    pub fn adjoint(&self) -> Self {
        SpectralBC { threshold: -self.threshold, inclusive: !self.inclusive }
    }

    fn admits(&self, mu: f64, tol: f64) -> bool {
        if self.inclusive {
            mu <= self.threshold + tol
        } else {
            mu < self.threshold - tol
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDims {
    pub l2: usize,
    pub ext: usize,
}

fn count_kernels(spectrum: &[f64], bc: &SpectralBC, tol: f64) -> KernelDims {
    let admitted = spectrum.iter().filter(|&&mu| bc.admits(mu, tol));
    let (mut l2, mut ext) = (0, 0);
    for &mu in admitted {
        if mu > tol {
            l2 += 1;
        }
        if mu > -tol {
            ext += 1;
        }
    }
    KernelDims { l2, ext }
}

pub fn kernel_dims(sys: &ConstantDiracSystem, bc: &SpectralBC) -> KernelDims {
    count_kernels(&sys.spectrum, bc, sys.tol)
}

/// Extended kernel minus the cokernel, the latter being the L² kernel under
/// the adjoint condition.
pub fn index_ext(sys: &ConstantDiracSystem, bc: &SpectralBC) -> i64 {
    kernel_dims(sys, bc).ext as i64 - kernel_dims(sys, &bc.adjoint()).l2 as i64
}

/// Index of `D⁺` on `H⁺` with condition `bc`; the cokernel lives on
/// `H⁻` under the adjoint condition.
pub fn graded_index_ext(sys: &ConstantDiracSystem, bc: &SpectralBC) -> Result<i64> {
    let plus = sys.half(Half::Plus)?;
    let minus = sys.half(Half::Minus)?;
    Ok(count_kernels(&plus, bc, sys.tol).ext as i64 - count_kernels(&minus, &bc.adjoint(), sys.tol).l2 as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CindextReport {
    /// `index_ext(H_{<0})`.
    pub lhs: i64,
    /// `dim H_{[-λ,0)}`.
    pub window: usize,
    /// L² kernel under `H_{≤λ}`.
    pub l2_kernel: usize,
    pub rhs: i64,
    pub holds: bool,
}

pub fn check_cindext(sys: &ConstantDiracSystem, lambda: f64) -> Result<CindextReport> {
    if !(lambda >= 0.0) {
        return Err(Error::Precondition(format!("λ must be non-negative, got {lambda}")));
    }
    let lhs = index_ext(sys, &SpectralBC::below(0.0));
    let tol = sys.tol;
    let window = sys.spectrum.iter().filter(|&&mu| mu >= -lambda - tol && mu < -tol).count();
    let l2_kernel = kernel_dims(sys, &SpectralBC::at_most(lambda)).l2;
    let rhs = window as i64 - l2_kernel as i64;
    Ok(CindextReport { lhs, window, l2_kernel, rhs, holds: lhs == rhs })
}

/// `A = ⊕ diag(μ_i, -μ_i)` with `T` the block rotation `[[0, -1], [1, 0]]`.
pub fn block_system(mus: &[f64]) -> Result<ConstantDiracSystem> {
    let k = 2 * mus.len();
    let mut a = DMatrix::zeros(k, k);
    let mut t = DMatrix::zeros(k, k);
    for (i, &mu) in mus.iter().enumerate() {
        a[(2 * i, 2 * i)] = Complex64::new(mu, 0.0);
        a[(2 * i + 1, 2 * i + 1)] = Complex64::new(-mu, 0.0);
        t[(2 * i, 2 * i + 1)] = Complex64::new(-1.0, 0.0);
        t[(2 * i + 1, 2 * i)] = Complex64::new(1.0, 0.0);
    }
    ConstantDiracSystem::new(a, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn kernel_examples() {
        let sys = block_system(&[1.0]).unwrap();
        assert_eq!(kernel_dims(&sys, &SpectralBC::below(0.0)), KernelDims { l2: 0, ext: 0 });
        assert_eq!(kernel_dims(&sys, &SpectralBC::at_most(1.0)), KernelDims { l2: 1, ext: 1 });
        let zero = block_system(&[0.0]).unwrap();
        assert_eq!(kernel_dims(&zero, &SpectralBC::at_most(0.0)), KernelDims { l2: 0, ext: 2 });
    }

    #[test]
    fn index_examples() {
        let sys = block_system(&[1.0]).unwrap();
        assert_eq!(index_ext(&sys, &SpectralBC::below(0.0)), 0);
        assert_eq!(index_ext(&sys, &SpectralBC::at_most(1.0)), 1);
        let zero = block_system(&[0.0]).unwrap();
        assert_eq!(index_ext(&zero, &SpectralBC::at_most(0.0)), 2);
    }

    #[test]
    fn cindext_examples() {
        let r = check_cindext(&block_system(&[1.0]).unwrap(), 1.0).unwrap();
        assert_eq!((r.lhs, r.window, r.l2_kernel, r.holds), (0, 1, 1, true));
        let r = check_cindext(&block_system(&[2.0]).unwrap(), 1.0).unwrap();
        assert_eq!((r.lhs, r.window, r.l2_kernel, r.holds), (0, 0, 0, true));
        let r = check_cindext(&block_system(&[0.0]).unwrap(), 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (0, 0, true));
        assert!(check_cindext(&block_system(&[0.0]).unwrap(), -1.0).is_err());
    }

    #[test]
    fn rejects_invalid_systems() {
        let a = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(1.0)]);
        let t = DMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]);
        assert!(matches!(ConstantDiracSystem::new(a, t), Err(Error::InvalidSystem(_))));
        let a = DMatrix::zeros(2, 2);
        let t = DMatrix::identity(2, 2);
        assert!(ConstantDiracSystem::new(a, t).is_err());
    }

    #[test]
    fn graded_index_vanishes() {
        // H⁺ = span(e_0, e_2), H⁻ = span(e_1, e_3); T swaps e_0 ↔ e_1 and e_2 ↔ e_3.
        let mut a = DMatrix::zeros(4, 4);
        let mut t = DMatrix::zeros(4, 4);
        for (i, mu) in [(0, 1.5), (2, 0.0)] {
            a[(i, i)] = c(mu);
            a[(i + 1, i + 1)] = c(-mu);
            t[(i, i + 1)] = c(-1.0);
            t[(i + 1, i)] = c(1.0);
        }
        let grading = vec![Half::Plus, Half::Minus, Half::Plus, Half::Minus];
        let sys = ConstantDiracSystem::new(a, t).unwrap().with_grading(grading).unwrap();
        assert_eq!(graded_index_ext(&sys, &SpectralBC::below(0.0)).unwrap(), 0);
        let bad = ConstantDiracSystem::new(DMatrix::zeros(2, 2), DMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]))
            .unwrap()
            .with_grading(vec![Half::Plus, Half::Plus]);
        assert!(bad.is_err());
    }

    proptest! {
        #[test]
        fn adjoint_is_an_involution(a in -10.0f64..10.0, inclusive: bool) {
            let bc = SpectralBC { threshold: a, inclusive };
            prop_assert_eq!(bc.adjoint().adjoint(), bc);
        }

        #[test]
        fn cindext_holds_on_block_systems(
            mus in proptest::collection::vec(prop_oneof![Just(0.0), (-8i32..=8).prop_map(|x| x as f64 / 2.0)], 0..=6),
            lambda in prop_oneof![(0i32..=10).prop_map(|x| x as f64 / 2.0), 0.0f64..5.0],
        ) {
            let sys = block_system(&mus).unwrap();
            let r = check_cindext(&sys, lambda).unwrap();
            prop_assert!(r.holds, "{:?}", r);
            prop_assert_eq!(index_ext(&sys, &SpectralBC::below(0.0)), 0);
            prop_assert_eq!(kernel_dims(&sys, &SpectralBC::below(0.0)).ext, 0);
            prop_assert_eq!(kernel_dims(&sys, &SpectralBC::at_most(0.0)).l2, 0);
        }
    }
}
