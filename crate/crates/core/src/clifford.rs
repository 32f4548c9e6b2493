//! The complex spinor module of `R^{2n}` in the fermionic Fock model.
//!
//! Basis states are subsets `I ⊆ {1..n}` encoded as bit masks (bit `j-1` for
//! mode `j`). With `F_j = a_j†` and `F̄_j = -a_j` the unit vectors of the
//! `j`-th complex pair act as `X_j = a_j† - a_j` and `Y_j = i(a_j† + a_j)`,
//! and `ω_j = i X_j Y_j` is `+1` on states without mode `j`. This fixes one
//! orientation; the opposite convention flips the sign of the volume grading.
//!
//! Vectors of `R^{2n}` are ordered `(X_1, Y_1, X_2, Y_2, …)`.

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{ExactMatrix, GaussRat};

/// Operators on Σ are plain exact matrices in the Fock basis.
pub type SpinorOperator = ExactMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    X,
    Y,
}

/// Σ for `R^{2n}`, dimension `2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpinorModule {
    n: usize,
}

/// Basis states split by the eigenvalue of `ω_1 ⋯ ω_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorPartition {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl SpinorModule {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::Precondition(format!("spinor rank n must lie in 1..=16, got {n}")));
        }
        Ok(SpinorModule { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Occupied modes of a basis state, 1-based.
    pub fn modes(&self, state: usize) -> Vec<usize> {
        (1..=self.n).filter(|j| state & (1 << (j - 1)) != 0).collect()
    }

    fn check_mode(&self, j: usize) {
        assert!((1..=self.n).contains(&j), "mode {j} out of range 1..={}", self.n);
    }

    /// Jordan–Wigner sign of mode `j` on `state`.
    fn jw_sign(state: usize, j: usize) -> i64 {
        if (state & ((1 << (j - 1)) - 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn generator(&self, j: usize, kind: GeneratorKind) -> SpinorOperator {
        self.check_mode(j);
        let bit = 1 << (j - 1);
        let mut m = ExactMatrix::zeros(self.dim(), self.dim());
        for state in 0..self.dim() {
            let s = Self::jw_sign(state, j);
            let target = state ^ bit;
            let occupied = state & bit != 0;
            let v = match (kind, occupied) {
                (GeneratorKind::X, false) => GaussRat::int(s),
                (GeneratorKind::X, true) => GaussRat::int(-s),
                (GeneratorKind::Y, _) => GaussRat::i().scale(&Rational::integer(s)),
            };
            m.set(target, state, v);
        }
        m
    }

    /// Generator attached to the real basis vector `e_a`, `a = 1..2n`.
    pub fn gamma_basis(&self, a: usize) -> SpinorOperator {
        assert!((1..=2 * self.n).contains(&a), "vector index {a} out of range");
        let kind = if a % 2 == 1 { GeneratorKind::X } else { GeneratorKind::Y };
        self.generator(a.div_ceil(2), kind)
    }

    /// Clifford multiplication by a real vector.
    pub fn gamma(&self, v: &[Rational]) -> SpinorOperator {
        assert_eq!(v.len(), 2 * self.n, "vector length must be 2n");
        let mut m = ExactMatrix::zeros(self.dim(), self.dim());
        for (a, x) in v.iter().enumerate() {
            if !x.is_zero() {
                m = m.add(&self.gamma_basis(a + 1).scale_rational(x));
            }
        }
        m
    }

    pub fn omega(&self, j: usize) -> SpinorOperator {
        self.check_mode(j);
        let entries: Vec<GaussRat> = (0..self.dim())
            .map(|state| GaussRat::int(if state & (1 << (j - 1)) == 0 { 1 } else { -1 }))
            .collect();
        ExactMatrix::diagonal(&entries)
    }

    /// `ω_1 ⋯ ω_n`.
    pub fn volume(&self) -> SpinorOperator {
        let entries: Vec<GaussRat> = (0..self.dim())
            .map(|state| GaussRat::int(if state.count_ones() % 2 == 0 { 1 } else { -1 }))
            .collect();
        ExactMatrix::diagonal(&entries)
    }

    pub fn partition(&self) -> SpinorPartition {
        let (plus, minus) = (0..self.dim()).partition(|s: &usize| s.count_ones() % 2 == 0);
        SpinorPartition { plus, minus }
    }

    /// Spinor action `¼ Σ_a γ(e_a) γ(B e_a)` of `B ∈ so(2n)`.
    pub fn spin_lift(&self, b: &ExactMatrix) -> Result<SpinorOperator> {
        let m = 2 * self.n;
        if b.nrows() != m || b.ncols() != m {
            return Err(Error::Precondition(format!("spin_lift needs a {m}x{m} matrix")));
        }
        for r in 0..m {
            for c in 0..m {
                let x = b.get(r, c);
                if !x.is_real() || *x != -b.get(c, r) {
                    return Err(Error::NotAntisymmetric);
                }
            }
        }
        let gammas: Vec<SpinorOperator> = (1..=m).map(|a| self.gamma_basis(a)).collect();
        let mut out = ExactMatrix::zeros(self.dim(), self.dim());
        for a in 0..m {
            for c in 0..m {
                let coeff = b.get(c, a);
                if coeff.is_zero() {
                    continue;
                }
                let term = gammas[a].mul(&gammas[c]).scale(&coeff.scale(&Rational::new(1, 4)));
                out = out.add(&term);
            }
        }
        Ok(out)
    }
}

pub fn clifford_generator(n: usize, j: usize, kind: GeneratorKind) -> Result<SpinorOperator> {
    let module = SpinorModule::new(n)?;
    if !(1..=n).contains(&j) {
        return Err(Error::Precondition(format!("mode {j} out of range 1..={n}")));
    }
    Ok(module.generator(j, kind))
}

pub fn omega(n: usize, j: usize) -> Result<SpinorOperator> {
    let module = SpinorModule::new(n)?;
    if !(1..=n).contains(&j) {
        return Err(Error::Precondition(format!("mode {j} out of range 1..={n}")));
    }
    Ok(module.omega(j))
}

pub fn plus_projection(n: usize) -> Result<SpinorPartition> {
    Ok(SpinorModule::new(n)?.partition())
}

pub fn spin_lift(n: usize, b: &ExactMatrix) -> Result<SpinorOperator> {
    SpinorModule::new(n)?.spin_lift(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn minus_identity(d: usize) -> ExactMatrix {
        ExactMatrix::identity(d).neg()
    }

    fn all_generators(s: &SpinorModule) -> Vec<SpinorOperator> {
        (1..=2 * s.n()).map(|a| s.gamma_basis(a)).collect()
    }

    #[test]
    fn single_mode_generators() {
        let x = clifford_generator(1, 1, GeneratorKind::X).unwrap();
        assert_eq!(*x.get(1, 0), GaussRat::int(1));
        assert_eq!(*x.get(0, 1), GaussRat::int(-1));
        let y = clifford_generator(1, 1, GeneratorKind::Y).unwrap();
        assert_eq!(*y.get(1, 0), GaussRat::i());
        assert_eq!(*y.get(0, 1), GaussRat::i());
    }

    #[test]
    fn generators_satisfy_clifford_relations() {
        for n in 1..=4 {
            let s = SpinorModule::new(n).unwrap();
            let g = all_generators(&s);
            for a in 0..g.len() {
                assert!(g[a].is_skew_hermitian());
                assert_eq!(g[a].mul(&g[a]), minus_identity(s.dim()));
                for b in 0..a {
                    assert!(g[a].anticommutator(&g[b]).is_zero(), "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn omega_examples() {
        let w = omega(1, 1).unwrap();
        assert_eq!(w, ExactMatrix::diagonal(&[GaussRat::int(1), GaussRat::int(-1)]));
        let w2 = omega(2, 2).unwrap();
        assert_eq!(*w2.get(1, 1), GaussRat::int(1));
        let s = SpinorModule::new(3).unwrap();
        let prod = (1..=3).fold(ExactMatrix::identity(8), |acc, j| acc.mul(&s.omega(j)));
        assert_eq!(prod, s.volume());
    }

    #[test]
    fn omega_is_i_x_y() {
        for n in 1..=3 {
            let s = SpinorModule::new(n).unwrap();
            for j in 1..=n {
                let xy = s.generator(j, GeneratorKind::X).mul(&s.generator(j, GeneratorKind::Y));
                assert_eq!(xy.scale(&GaussRat::i()), s.omega(j));
            }
        }
    }

    #[test]
    fn omega_commutation_pattern() {
        let s = SpinorModule::new(3).unwrap();
        for j in 1..=3 {
            let w = s.omega(j);
            assert_eq!(w.mul(&w), ExactMatrix::identity(8));
            for k in 1..=3 {
                assert!(w.commutator(&s.omega(k)).is_zero());
                for kind in [GeneratorKind::X, GeneratorKind::Y] {
                    let g = s.generator(k, kind);
                    if j == k {
                        assert!(w.anticommutator(&g).is_zero());
                    } else {
                        assert!(w.commutator(&g).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn joint_eigenspaces_are_lines() {
        let s = SpinorModule::new(3).unwrap();
        let mut signs: Vec<Vec<bool>> = (0..8)
            .map(|st| (1..=3).map(|j| s.omega(j).get(st, st).re.is_positive()).collect())
            .collect();
        signs.sort();
        signs.dedup();
        assert_eq!(signs.len(), 8);
    }

    #[test]
    fn plus_projection_examples() {
        let p1 = plus_projection(1).unwrap();
        assert_eq!((p1.plus, p1.minus), (vec![0], vec![1]));
        assert_eq!(plus_projection(2).unwrap().plus, vec![0, 3]);
        assert_eq!(plus_projection(3).unwrap().plus.len(), 4);
    }

    #[test]
    fn spin_lift_of_plane_rotation() {
        let n = 3;
        let s = SpinorModule::new(n).unwrap();
        assert!(s.spin_lift(&ExactMatrix::zeros(6, 6)).unwrap().is_zero());
        for j in 1..=n {
            let mut b = ExactMatrix::zeros(6, 6);
            b.set(2 * j - 1, 2 * j - 2, GaussRat::int(1));
            b.set(2 * j - 2, 2 * j - 1, GaussRat::int(-1));
            let expected = s.omega(j).scale(&GaussRat::new(Rational::zero(), Rational::new(-1, 2)));
            assert_eq!(s.spin_lift(&b).unwrap(), expected);
        }
    }

    #[test]
    fn spin_lift_rejects_non_antisymmetric() {
        let mut b = ExactMatrix::zeros(2, 2);
        b.set(0, 1, GaussRat::int(1));
        assert_eq!(spin_lift(1, &b), Err(Error::NotAntisymmetric));
    }

    fn antisym(n: usize) -> impl Strategy<Value = ExactMatrix> {
        let m = 2 * n;
        proptest::collection::vec(-3i64..=3, m * m).prop_map(move |v| {
            let mut b = ExactMatrix::zeros(m, m);
            for r in 0..m {
                for c in r + 1..m {
                    b.set(r, c, GaussRat::int(v[r * m + c]));
                    b.set(c, r, GaussRat::int(-v[r * m + c]));
                }
            }
            b
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn spin_lift_intertwines_clifford_multiplication(
            (n, b, v) in (1usize..=3).prop_flat_map(|n| (
                Just(n),
                antisym(n),
                proptest::collection::vec(-4i64..=4, 2 * n),
            ))
        ) {
            let s = SpinorModule::new(n).unwrap();
            let lift = s.spin_lift(&b).unwrap();
            let v: Vec<Rational> = v.into_iter().map(Rational::integer).collect();
            let bv: Vec<Rational> = (0..2 * n)
                .map(|r| (0..2 * n).map(|c| &b.get(r, c).re * &v[c]).sum())
                .collect();
            prop_assert_eq!(lift.commutator(&s.gamma(&v)), s.gamma(&bv));
        }

        #[test]
        fn spin_lift_is_a_homomorphism(
            (n, b1, b2) in (1usize..=3).prop_flat_map(|n| (Just(n), antisym(n), antisym(n)))
        ) {
            let s = SpinorModule::new(n).unwrap();
            let l1 = s.spin_lift(&b1).unwrap();
            let l2 = s.spin_lift(&b2).unwrap();
            let bracket = s.spin_lift(&b1.commutator(&b2)).unwrap();
            prop_assert_eq!(bracket, l1.commutator(&l2));
        }
    }
}
