use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gaussian::GaussRat;
use crate::exact::Rational;

/// Dense matrix over `Q(i)`, row-major.
///
/// Products skip zero entries; the operators built here are sparse tensor
/// products of Clifford generators and representation matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

/// Signature counts of a Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[GaussRat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True when every off-diagonal entry vanishes.
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        let data = self.data.iter().map(|a| if a.is_zero() { GaussRat::zero() } else { a * s }).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_rational(&self, s: &Rational) -> Self {
        self.scale(&GaussRat::real(s.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    out.data[r * other.cols + c] += &p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = GaussRat::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(r, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r..self.cols).all(|c| *self.get(r, c) == self.get(c, r).conj()))
    }

    pub fn is_skew_hermitian(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r..self.cols).all(|c| *self.get(r, c) == -&self.get(c, r).conj()))
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product `A ⊗ B`; the index of `B` varies fastest.
    pub fn kron(&self, other: &Self) -> Self {
        let (rb, cb) = (other.rows, other.cols);
        let mut out = Self::zeros(self.rows * rb, self.cols * cb);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a.is_zero() {
                    continue;
                }
                for i in 0..rb {
                    for j in 0..cb {
                        let b = other.get(i, j);
                        if !b.is_zero() {
                            out.set(r * rb + i, c * cb + j, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[Self]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "shape mismatch");
            data.extend(b.data.iter().cloned());
            rows += b.rows;
        }
        ExactMatrix { rows, cols, data }
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref(&self) -> (Vec<Vec<GaussRat>>, Vec<usize>) {
        let mut m: Vec<Vec<GaussRat>> =
            (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].inv();
            for x in m[row].iter_mut().skip(col) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            let pivot_row = m[row].clone();
            for (r, line) in m.iter_mut().enumerate() {
                if r == row || line[col].is_zero() {
                    continue;
                }
                let f = line[col].clone();
                for (c, pv) in pivot_row.iter().enumerate().skip(col) {
                    if !pv.is_zero() {
                        line[c] = &line[c] - &(&f * pv);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space. Each basis vector has a 1 at its own
    /// free column and 0 at every other free column, so the coordinates of a
    /// vector in the span are its entries at [`free_columns`](Self::free_columns).
    pub fn nullspace(&self) -> Vec<Vec<GaussRat>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussRat::zero(); self.cols];
                v[f] = GaussRat::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&m[r][f];
                }
                v
            })
            .collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let pivots = self.rref().1;
        (0..self.cols).filter(|c| !pivots.contains(c)).collect()
    }

    /// Exact inertia of a Hermitian matrix via Hermitian congruence.
    pub fn inertia(&self) -> Inertia {
        assert!(self.is_hermitian(), "inertia needs a Hermitian matrix");
        let mut a: Vec<Vec<GaussRat>> =
            (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect();
        let mut active: Vec<usize> = (0..self.rows).collect();
        let (mut positive, mut negative) = (0, 0);
        loop {
            if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
                let i = active.remove(pos);
                let p = a[i][i].re.clone();
                if p.is_positive() {
                    positive += 1;
                } else {
                    negative += 1;
                }
                let pinv = GaussRat::real(p.recip());
                for &j in &active {
                    if a[j][i].is_zero() {
                        continue;
                    }
                    let f = &a[j][i] * &pinv;
                    for &k in &active {
                        if a[i][k].is_zero() {
                            continue;
                        }
                        let d = &f * &a[i][k];
                        a[j][k] = &a[j][k] - &d;
                    }
                }
                continue;
            }
            let off = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !a[i][j].is_zero());
            let Some((i, j)) = off else {
                break;
            };
            // Column i += t·column j, row i += conj(t)·row j with t = conj(a_ij)
            // turns the zero diagonal entry a_ii into 2|a_ij|^2.
            let t = a[i][j].conj();
            for &r in &active {
                if !a[r][j].is_zero() {
                    let d = &t * &a[r][j];
                    a[r][i] = &a[r][i] + &d;
                }
            }
            let tc = t.conj();
            for &c in &active {
                if !a[j][c].is_zero() {
                    let d = &tc * &a[j][c];
                    a[i][c] = &a[i][c] + &d;
                }
            }
        }
        Inertia { positive, negative, zero: self.rows - positive - negative }
    }

    pub fn to_float(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c).to_c64())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self.get(r, c))).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::new(Rational::integer(re), Rational::integer(im))
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = ExactMatrix::from_fn(2, 3, |r, c| g((r as i64 + 1) * (c as i64 + 1), 0));
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(GaussRat::is_zero));
        }
    }

    #[test]
    fn inertia_of_diagonal_and_off_diagonal() {
        let d = ExactMatrix::diagonal(&[g(2, 0), g(-2, 0), g(0, 0)]);
        assert_eq!(d.inertia(), Inertia { positive: 1, negative: 1, zero: 1 });
        // [[0, i], [-i, 0]] has eigenvalues ±1.
        let m = ExactMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => g(0, 1),
            (1, 0) => g(0, -1),
            _ => GaussRat::zero(),
        });
        assert_eq!(m.inertia(), Inertia { positive: 1, negative: 1, zero: 0 });
        // rank-one [[1, 1], [1, 1]]
        let j = ExactMatrix::from_fn(2, 2, |_, _| g(1, 0));
        assert_eq!(j.inertia(), Inertia { positive: 1, negative: 0, zero: 1 });
    }

    #[test]
    fn kron_shapes_and_entries() {
        let a = ExactMatrix::diagonal(&[g(1, 0), g(2, 0)]);
        let b = ExactMatrix::from_fn(2, 2, |r, c| g((r * 2 + c) as i64, 0));
        let k = a.kron(&b);
        assert_eq!(k.nrows(), 4);
        assert_eq!(*k.get(3, 3), g(6, 0));
        assert_eq!(*k.get(0, 3), GaussRat::zero());
    }

    mod props {
        use super::*;
        use nalgebra::linalg::SymmetricEigen;
        use proptest::prelude::*;

        fn hermitian(n: usize) -> impl Strategy<Value = ExactMatrix> {
            proptest::collection::vec((-3i64..=3, -3i64..=3), n * n).prop_map(move |v| {
                let mut m = ExactMatrix::zeros(n, n);
                for r in 0..n {
                    for c in r..n {
                        let (re, im) = v[r * n + c];
                        if r == c {
                            m.set(r, c, g(re, 0));
                        } else {
                            m.set(r, c, g(re, im));
                            m.set(c, r, g(re, -im));
                        }
                    }
                }
                m
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn inertia_matches_float_eigenvalues(m in (1usize..7).prop_flat_map(hermitian)) {
                let exact = m.inertia();
                let eig = SymmetricEigen::new(m.to_float()).eigenvalues;
                let pos = eig.iter().filter(|&&x| x > 1e-9).count();
                let neg = eig.iter().filter(|&&x| x < -1e-9).count();
                prop_assert_eq!((exact.positive, exact.negative), (pos, neg));
            }

            #[test]
            fn rank_plus_nullity(m in (1usize..6).prop_flat_map(hermitian)) {
                prop_assert_eq!(m.rank() + m.nullspace().len(), m.ncols());
            }
        }
    }
}
