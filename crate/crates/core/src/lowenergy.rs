//! The low-energy model operator `D^le = D_z + D_x` on `Σ⁺ ⊗ V` for a complex
//! hyperbolic cusp, built from Clifford generators and a representation of
//! `u(n)`. Clifford pair 1 carries `(T, Z)`; pairs `2..n` carry `(X_j, Y_j)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clifford::{GeneratorKind, SpinorModule, SpinorOperator};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{hermitian_eigen, rationalize, ExactMatrix, GaussRat};
use crate::unrep::{LieRep, ScalarBlock};

#[derive(Clone, Debug)]
pub struct LowEnergyOperator {
    n: usize,
    rep_dim: usize,
    /// Σ⁺ basis states, in the order used for rows and columns.
    plus_states: Vec<usize>,
    pub dx: ExactMatrix,
    pub dz: ExactMatrix,
    pub dle: ExactMatrix,
    /// `A^le = -D^le`.
    pub a_le: ExactMatrix,
}

impl LowEnergyOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dle.nrows()
    }

    /// Number of occupied modes among `2..n` for each row, i.e. the `k` of
    /// `Σ⁺_k ⊗ V`.
    pub fn grading(&self) -> Vec<usize> {
        self.plus_states
            .iter()
            .flat_map(|&s| std::iter::repeat_n((s >> 1).count_ones() as usize, self.rep_dim))
            .collect()
    }
}

fn restrict_plus(op: &SpinorOperator, plus: &[usize]) -> ExactMatrix {
    op.submatrix(plus, plus)
}

/// Builds `D_x`, `D_z` and `D^le` on `Σ⁺ ⊗ V` and checks `{D_z, D_x} = 0`.
pub fn build_lowenergy(n: usize, rep: &LieRep) -> Result<LowEnergyOperator> {
    if n < 2 {
        return Err(Error::Precondition(format!("low-energy operator needs n >= 2, got {n}")));
    }
    if rep.n() != n {
        return Err(Error::RepMismatch(format!("representation of u({}) used for n = {n}", rep.n())));
    }
    let s = SpinorModule::new(n)?;
    let plus = s.partition().plus;
    let (t, z) = (s.generator(1, GeneratorKind::X), s.generator(1, GeneratorKind::Y));
    let tz = t.mul(&z);
    let minus_i = GaussRat::new(Rational::zero(), Rational::integer(-1));
    let id_v = ExactMatrix::identity(rep.dim());

    let mut dx = ExactMatrix::zeros(plus.len() * rep.dim(), plus.len() * rep.dim());
    let mut dz_spin = ExactMatrix::zeros(plus.len(), plus.len());
    for j in 2..=n {
        let (x, y) = (s.generator(j, GeneratorKind::X), s.generator(j, GeneratorKind::Y));
        let ax = rep.e(1, j).sub(rep.e(j, 1));
        let ay = rep.e(1, j).add(rep.e(j, 1)).scale(&minus_i);
        dx = dx.add(&restrict_plus(&t.mul(&x), &plus).kron(&ax));
        dx = dx.add(&restrict_plus(&t.mul(&y), &plus).kron(&ay));
        dz_spin = dz_spin.add(&restrict_plus(&tz.mul(&x).mul(&y), &plus));
    }
    let dz = dz_spin
        .scale_rational(&Rational::new(1, 2))
        .kron(&id_v)
        .add(&restrict_plus(&tz, &plus).kron(&rep.e(1, 1).scale(&minus_i)));
    if !dx.is_hermitian() || !dz.is_hermitian() {
        return Err(Error::Construction("D_x or D_z is not Hermitian".into()));
    }
    if !dz.anticommutator(&dx).is_zero() {
        return Err(Error::Construction("D_z and D_x do not anticommute".into()));
    }
    let dle = dz.add(&dx);
    let a_le = dle.neg();
    Ok(LowEnergyOperator { n, rep_dim: rep.dim(), plus_states: plus, dx, dz, dle, a_le })
}

/// `ker D_x = ⊕_k H^k` with the scalars of `D_z` on each `H^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicDecomposition {
    pub blocks: Vec<ScalarBlock>,
}

impl HarmonicDecomposition {
    pub fn kernel_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    /// `η(D_z|ker D_x)`.
    pub fn dz_eta(&self) -> i64 {
        self.blocks
            .iter()
            .flat_map(|b| &b.scalars)
            .map(|(mu, m)| mu.signum() * *m as i64)
            .sum()
    }

    /// `dim ker D_z ∩ ker D_x`.
    pub fn dz_kernel_dim(&self) -> usize {
        self.blocks.iter().flat_map(|b| &b.scalars).filter(|(mu, _)| mu.is_zero()).map(|(_, m)| m).sum()
    }
}

/// Exact eigenvalue candidates of a Hermitian matrix.
fn candidate_eigenvalues(m: &ExactMatrix) -> Result<Vec<Rational>> {
    let mut vals: Vec<Rational> = if m.is_diagonal() {
        (0..m.nrows()).map(|i| m.get(i, i).re.clone()).collect()
    } else {
        let (floats, _) = hermitian_eigen(&m.to_float(), 1e-10)?;
        floats
            .into_iter()
            .map(|x| {
                rationalize(x, 64, 1e-8)
                    .ok_or_else(|| Error::Diagonalization(format!("D_z eigenvalue {x} is not a small rational")))
            })
            .collect::<Result<_>>()?
    };
    vals.sort();
    vals.dedup();
    Ok(vals)
}

pub fn harmonic_decompose(op: &LowEnergyOperator) -> Result<HarmonicDecomposition> {
    let grading = op.grading();
    let all_rows: Vec<usize> = (0..op.dim()).collect();
    let total_kernel = op.dim() - op.dx.rank();
    let mut blocks = Vec::new();
    for k in 0..op.n {
        let cols: Vec<usize> = (0..op.dim()).filter(|&i| grading[i] == k).collect();
        if cols.is_empty() {
            blocks.push(ScalarBlock { k, dim: 0, scalars: Vec::new() });
            continue;
        }
        let dx_k = op.dx.submatrix(&all_rows, &cols);
        let basis = dx_k.nullspace();
        let free = dx_k.free_columns();
        let dz_k = op.dz.submatrix(&cols, &cols);
        // D_z preserves the grade and ker D_x; in the nullspace basis the
        // coordinates of a vector are its entries at the free columns.
        let images: Vec<Vec<GaussRat>> = basis.iter().map(|v| dz_k.mul_vec(v)).collect();
        let restricted = ExactMatrix::from_fn(basis.len(), basis.len(), |a, b| images[b][free[a]].clone());
        for (v, img) in basis.iter().zip(&images) {
            let coords: Vec<GaussRat> = free.iter().map(|&f| img[f].clone()).collect();
            let rebuilt = basis.iter().zip(&coords).fold(vec![GaussRat::zero(); v.len()], |mut acc, (b, c)| {
                for (x, y) in acc.iter_mut().zip(b) {
                    if !y.is_zero() && !c.is_zero() {
                        *x += &(y * c);
                    }
                }
                acc
            });
            if rebuilt != *img {
                return Err(Error::Construction(format!("D_z does not preserve ker D_x in degree {k}")));
            }
        }
        let mut scalars: BTreeMap<Rational, usize> = BTreeMap::new();
        let id = ExactMatrix::identity(basis.len());
        for mu in candidate_eigenvalues(&dz_k)? {
            let nullity = basis.len() - restricted.sub(&id.scale_rational(&mu)).rank();
            if nullity > 0 {
                scalars.insert(mu, nullity);
            }
        }
        if scalars.values().sum::<usize>() != basis.len() {
            return Err(Error::Diagonalization(format!("D_z on H^{k} is not diagonalized by its candidates")));
        }
        blocks.push(ScalarBlock { k, dim: basis.len(), scalars: scalars.into_iter().collect() });
    }
    let decomposition = HarmonicDecomposition { blocks };
    if decomposition.kernel_dim() != total_kernel {
        return Err(Error::Construction(format!(
            "ker D_x has dimension {total_kernel} but its graded pieces add up to {}",
            decomposition.kernel_dim()
        )));
    }
    Ok(decomposition)
}

/// `#positive - #negative` eigenvalues, exactly.
pub fn eta_finite(m: &ExactMatrix) -> Result<i64> {
    if !m.is_hermitian() {
        return Err(Error::NotHermitian(f64::NAN));
    }
    let inertia = m.inertia();
    Ok(inertia.positive as i64 - inertia.negative as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unrep::{build_rep, highest_weights, kostant_blocks, RepSpec};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn op(n: usize, spec: RepSpec) -> LowEnergyOperator {
        build_lowenergy(n, &build_rep(&spec).unwrap()).unwrap()
    }

    fn dims(h: &HarmonicDecomposition) -> Vec<usize> {
        h.blocks.iter().map(|b| b.dim).collect()
    }

    fn single_scalars(h: &HarmonicDecomposition) -> Vec<Rational> {
        h.blocks
            .iter()
            .map(|b| {
                assert_eq!(b.scalars.len(), 1, "block {} is not scalar", b.k);
                b.scalars[0].0.clone()
            })
            .collect()
    }

    #[test]
    fn trivial_n2_has_positive_a_le() {
        let o = op(2, RepSpec::Trivial(2));
        assert_eq!(o.dim(), 2);
        assert_eq!(o.a_le, ExactMatrix::identity(2).scale_rational(&q("1/2")));
        let h = harmonic_decompose(&o).unwrap();
        assert_eq!(dims(&h), vec![1, 1]);
        assert_eq!(single_scalars(&h), vec![q("-1/2"), q("-1/2")]);
    }

    #[test]
    fn dolbeault_n2() {
        let o = op(2, RepSpec::trace_shift(RepSpec::Trivial(2), q("3/2")));
        let h = harmonic_decompose(&o).unwrap();
        assert_eq!(dims(&h), vec![1, 1]);
        assert_eq!(single_scalars(&h), vec![q("-2"), q("1")]);
    }

    #[test]
    fn signature_n2() {
        let o = op(2, RepSpec::Spin(2));
        let h = harmonic_decompose(&o).unwrap();
        assert_eq!(h.kernel_dim(), 6);
        assert_eq!(dims(&h), vec![3, 3]);
        assert_eq!(-h.dz_eta(), 2);
    }

    #[test]
    fn trivial_n3() {
        let h = harmonic_decompose(&op(3, RepSpec::Trivial(3))).unwrap();
        assert_eq!(dims(&h), vec![1, 2, 1]);
        assert_eq!(single_scalars(&h), vec![q("-1"), q("0"), q("1")]);
    }

    #[test]
    fn eta_finite_examples() {
        assert_eq!(eta_finite(&ExactMatrix::zeros(3, 3)).unwrap(), 0);
        let d = ExactMatrix::diagonal(&[GaussRat::int(2), GaussRat::int(-2), GaussRat::zero()]);
        assert_eq!(eta_finite(&d).unwrap(), 0);
        let o = op(2, RepSpec::Spin(2));
        // η(A^le) = -η(D^le) = -η(D_z|ker D_x)
        assert_eq!(-eta_finite(&o.dle).unwrap(), 2);
        assert_eq!(eta_finite(&o.a_le).unwrap(), 2);
    }

    #[test]
    fn rejects_rank_mismatch() {
        let rep = build_rep(&RepSpec::Trivial(3)).unwrap();
        assert!(matches!(build_lowenergy(2, &rep), Err(Error::RepMismatch(_))));
    }

    #[test]
    fn oracle_matches_kostant_for_small_catalog() {
        for n in 2..=3 {
            let specs = vec![
                RepSpec::Trivial(n),
                RepSpec::Defining(n),
                RepSpec::Spin(n),
                RepSpec::tensor(RepSpec::Defining(n), RepSpec::Defining(n)),
                RepSpec::DirectSum(vec![RepSpec::Exterior(n, 2), RepSpec::Trivial(n)]),
            ];
            for spec in specs {
                let rep = build_rep(&spec).unwrap();
                let h = harmonic_decompose(&build_lowenergy(n, &rep).unwrap()).unwrap();
                let closed = kostant_blocks(&highest_weights(&rep).unwrap());
                assert_eq!(h.blocks, closed, "n={n} {spec:?}");
            }
        }
    }

    #[test]
    fn eta_split_and_kernel_intersection() {
        for n in 2..=3 {
            for spec in [RepSpec::Trivial(n), RepSpec::Spin(n), RepSpec::Exterior(n, 1)] {
                let o = op(n, spec);
                let h = harmonic_decompose(&o).unwrap();
                assert_eq!(eta_finite(&o.dle).unwrap(), h.dz_eta());
                assert_eq!(eta_finite(&o.dx).unwrap(), 0);
                let ker_dle = o.dim() - o.dle.rank();
                let ker_both = o.dim() - ExactMatrix::vstack(&[o.dz.clone(), o.dx.clone()]).rank();
                assert_eq!(ker_dle, ker_both);
                assert_eq!(ker_dle, h.dz_kernel_dim());
            }
        }
    }
}
