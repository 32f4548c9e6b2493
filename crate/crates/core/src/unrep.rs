//! Representations of `u(n)`: highest weights, the Weyl dimension formula,
//! explicit catalog representations and the closed-form Kostant data.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::clifford::SpinorModule;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{hermitian_eigen, rationalize, ExactMatrix, GaussRat};

/// A highest weight `λ_1 ≥ … ≥ λ_n` with integral differences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct DominantWeight(Vec<Rational>);

impl DominantWeight {
    pub fn new(lambda: Vec<Rational>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::NotDominant("empty weight".into()));
        }
        for w in lambda.windows(2) {
            let diff = &w[0] - &w[1];
            if !diff.is_integer() || diff.is_negative() {
                return Err(Error::NotDominant(format!(
                    "need λ_j - λ_(j+1) a non-negative integer, got {} - {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(DominantWeight(lambda))
    }

    /// `(c, …, c)` of length `n`.
    pub fn constant(n: usize, c: Rational) -> Self {
        DominantWeight(vec![c; n])
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, Rational::zero())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `λ_j`, 1-based.
    pub fn get(&self, j: usize) -> &Rational {
        &self.0[j - 1]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

impl TryFrom<Vec<Rational>> for DominantWeight {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        DominantWeight::new(v)
    }
}

impl From<DominantWeight> for Vec<Rational> {
    fn from(w: DominantWeight) -> Self {
        w.0
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dimension of the irreducible representation with highest weight `λ`.
pub fn weyl_dim(lambda: &DominantWeight) -> u64 {
    let n = lambda.n();
    let mut num = Rational::one();
    for j in 1..=n {
        for k in j + 1..=n {
            let gap = Rational::integer((k - j) as i64);
            num = num * ((&gap + lambda.get(j) - lambda.get(k)) / &gap);
        }
    }
    num.to_i64().and_then(|d| u64::try_from(d).ok()).expect("Weyl dimension is a positive integer")
}

/// Weights of the summands `V_0, …, V_n` of the spin representation.
pub fn spin_weights(n: usize) -> Vec<DominantWeight> {
    let half = |shift: i64| Rational::new(shift, 2);
    (0..=n)
        .map(|l| {
            let top = Rational::integer(l as i64) - half(n as i64 - 1);
            let bottom = Rational::integer(l as i64) - half(n as i64 + 1);
            DominantWeight((0..n).map(|j| if j < l { top.clone() } else { bottom.clone() }).collect())
        })
        .collect()
}

/// Dimension and central scalar of the `k`-th harmonic space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KostantDatum {
    pub k: usize,
    pub b_k: u64,
    pub z_value: Rational,
    pub kernel_flag: bool,
}

/// Closed-form Kostant data for `k = 0..n-1`.
pub fn kostant_data(lambda: &DominantWeight) -> Vec<KostantDatum> {
    let n = lambda.n();
    let dim = weyl_dim(lambda);
    let factorial: u64 = (1..n as u64).product();
    (0..n)
        .map(|k| {
            let lk = lambda.get(k + 1);
            let mut b = Rational::integer((factorial * dim) as i64);
            for j in (1..=n).filter(|&j| j != k + 1) {
                let f = (lambda.get(j) - lk + Rational::integer(k as i64 + 1 - j as i64)).abs();
                assert!(!f.is_zero(), "Kostant denominator vanishes for a dominant weight");
                b = b / f;
            }
            let b_k = b.to_i64().and_then(|x| u64::try_from(x).ok()).expect("b_k is a non-negative integer");
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let z_value = Rational::new(sign, 2) * (Rational::integer(2 * k as i64 + 1 - n as i64) - lk * 2);
            KostantDatum { k, b_k, kernel_flag: z_value.is_zero(), z_value }
        })
        .collect()
}

/// Per-degree dimension together with the scalars a central operator takes
/// on that degree, as a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarBlock {
    pub k: usize,
    pub dim: usize,
    pub scalars: Vec<(Rational, usize)>,
}

/// Kostant data summed over the irreducible components of a representation.
pub fn kostant_blocks(components: &[(DominantWeight, usize)]) -> Vec<ScalarBlock> {
    let n = components.first().map_or(0, |(w, _)| w.n());
    let mut acc: Vec<BTreeMap<Rational, usize>> = vec![BTreeMap::new(); n];
    for (w, mult) in components {
        for d in kostant_data(w) {
            if d.b_k > 0 {
                *acc[d.k].entry(d.z_value).or_default() += d.b_k as usize * mult;
            }
        }
    }
    acc.into_iter()
        .enumerate()
        .map(|(k, m)| ScalarBlock { k, dim: m.values().sum(), scalars: m.into_iter().collect() })
        .collect()
}

/// A catalog representation of `u(n)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RepSpec {
    Trivial(usize),
    Defining(usize),
    Exterior(usize, usize),
    Spin(usize),
    DirectSum(Vec<RepSpec>),
    Tensor(Box<RepSpec>, Box<RepSpec>),
    TraceShift(Box<RepSpec>, Rational),
}

impl RepSpec {
    pub fn trace_shift(inner: RepSpec, s: Rational) -> Self {
        RepSpec::TraceShift(Box::new(inner), s)
    }

    pub fn tensor(a: RepSpec, b: RepSpec) -> Self {
        RepSpec::Tensor(Box::new(a), Box::new(b))
    }
}

/// A representation of `u(n)`, stored by the complex-linear extension of its
/// action to the elementary matrices `E_jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieRep {
    n: usize,
    dim: usize,
    action: Vec<ExactMatrix>,
}

fn elementary(n: usize, j: usize, k: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(n, n);
    m.set(j - 1, k - 1, GaussRat::one());
    m
}

impl LieRep {
    /// From the matrices of `E_jk`, row-major in `(j, k)`.
    pub fn from_elementary(n: usize, action: Vec<ExactMatrix>) -> Result<Self> {
        if n == 0 || action.len() != n * n {
            return Err(Error::RepMismatch(format!("need {} matrices for u({n})", n * n)));
        }
        let dim = action[0].nrows();
        if action.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::RepMismatch("action matrices must share one square shape".into()));
        }
        Ok(LieRep { n, dim, action })
    }

    /// Complex-linear extension of an action given on skew-Hermitian matrices.
    fn from_unitary_action(n: usize, f: impl Fn(&ExactMatrix) -> Result<ExactMatrix>) -> Result<Self> {
        let half = GaussRat::real(Rational::new(1, 2));
        let minus_half_i = GaussRat::new(Rational::zero(), Rational::new(-1, 2));
        let i = GaussRat::i();
        let mut action = vec![ExactMatrix::zeros(0, 0); n * n];
        for j in 1..=n {
            action[(j - 1) * n + (j - 1)] = f(&elementary(n, j, j).scale(&i))?.scale(&-&i);
            for k in j + 1..=n {
                let a = elementary(n, j, k).sub(&elementary(n, k, j));
                let s = elementary(n, j, k).add(&elementary(n, k, j)).scale(&i);
                let (pa, ps) = (f(&a)?, f(&s)?.scale(&minus_half_i));
                action[(j - 1) * n + (k - 1)] = pa.scale(&half).add(&ps);
                action[(k - 1) * n + (j - 1)] = pa.scale(&-&half).add(&ps);
            }
        }
        LieRep::from_elementary(n, action)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `π(E_jk)`, 1-based.
    pub fn e(&self, j: usize, k: usize) -> &ExactMatrix {
        &self.action[(j - 1) * self.n + (k - 1)]
    }

    /// `π(A) = Σ A_jk π(E_jk)`.
    pub fn apply(&self, a: &ExactMatrix) -> ExactMatrix {
        assert_eq!((a.nrows(), a.ncols()), (self.n, self.n), "argument must be n x n");
        let mut out = ExactMatrix::zeros(self.dim, self.dim);
        for j in 1..=self.n {
            for k in 1..=self.n {
                let c = a.get(j - 1, k - 1);
                if !c.is_zero() {
                    out = out.add(&self.e(j, k).scale(c));
                }
            }
        }
        out
    }

    /// Checks the bracket relations `[E_ab, E_cd] = δ_bc E_ad - δ_da E_cb` and
    /// `π(E_jk)* = π(E_kj)`, which makes `π` skew-Hermitian on `u(n)`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for a in 1..=n {
            for b in 1..=n {
                if self.e(a, b).adjoint() != *self.e(b, a) {
                    return Err(Error::RepMismatch(format!("π(E_{a}{b})* differs from π(E_{b}{a})")));
                }
                for c in 1..=n {
                    for d in 1..=n {
                        let mut expected = ExactMatrix::zeros(self.dim, self.dim);
                        if b == c {
                            expected = expected.add(self.e(a, d));
                        }
                        if d == a {
                            expected = expected.sub(self.e(c, b));
                        }
                        if self.e(a, b).commutator(self.e(c, d)) != expected {
                            return Err(Error::RepMismatch(format!(
                                "bracket [E_{a}{b}, E_{c}{d}] is not preserved"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn fermion_sign(state: usize, mode: usize) -> i64 {
    if (state & ((1 << mode) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn exterior(n: usize, q: usize) -> LieRep {
    let states: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == q).collect();
    let index: BTreeMap<usize, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut action = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            let mut m = ExactMatrix::zeros(states.len(), states.len());
            for (col, &s) in states.iter().enumerate() {
                if s & (1 << k) == 0 {
                    continue;
                }
                let removed = s & !(1 << k);
                if removed & (1 << j) != 0 {
                    continue;
                }
                let sign = fermion_sign(s, k) * fermion_sign(removed, j);
                m.set(index[&(removed | (1 << j))], col, GaussRat::int(sign));
            }
            action.push(m);
        }
    }
    LieRep { n, dim: states.len(), action }
}

/// Real `2n x 2n` matrix of a complex `n x n` matrix in the basis
/// `(e_1, i e_1, e_2, i e_2, …)`.
pub fn realify(m: &ExactMatrix) -> ExactMatrix {
    let n = m.nrows();
    let mut r = ExactMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            let z = m.get(a, b);
            let (x, y) = (GaussRat::real(z.re.clone()), GaussRat::real(z.im.clone()));
            r.set(2 * a, 2 * b, x.clone());
            r.set(2 * a, 2 * b + 1, -&y);
            r.set(2 * a + 1, 2 * b, y);
            r.set(2 * a + 1, 2 * b + 1, x);
        }
    }
    r
}

fn spin(n: usize) -> Result<LieRep> {
    let module = SpinorModule::new(n)?;
    LieRep::from_unitary_action(n, |a| {
        let mut trace = GaussRat::zero();
        for j in 0..n {
            trace += a.get(j, j);
        }
        let shifted = a.add(&ExactMatrix::identity(n).scale(&trace));
        module.spin_lift(&realify(&shifted))
    })
}

/// Builds a catalog representation.
pub fn build_rep(spec: &RepSpec) -> Result<LieRep> {
    match spec {
        RepSpec::Trivial(n) => {
            check_rank(*n)?;
            Ok(LieRep { n: *n, dim: 1, action: vec![ExactMatrix::zeros(1, 1); n * n] })
        }
        RepSpec::Defining(n) => {
            check_rank(*n)?;
            Ok(exterior(*n, 1))
        }
        RepSpec::Exterior(n, q) => {
            check_rank(*n)?;
            if q > n {
                return Err(Error::RepMismatch(format!("exterior power {q} exceeds n = {n}")));
            }
            Ok(exterior(*n, *q))
        }
        RepSpec::Spin(n) => {
            check_rank(*n)?;
            spin(*n)
        }
        RepSpec::DirectSum(parts) => {
            let reps = parts.iter().map(build_rep).collect::<Result<Vec<_>>>()?;
            let Some(first) = reps.first() else {
                return Err(Error::RepMismatch("empty direct sum".into()));
            };
            let n = first.n;
            if reps.iter().any(|r| r.n != n) {
                return Err(Error::RepMismatch("direct sum components act on different u(n)".into()));
            }
            let action = (0..n * n)
                .map(|i| {
                    reps.iter().skip(1).fold(reps[0].action[i].clone(), |acc, r| acc.direct_sum(&r.action[i]))
                })
                .collect();
            LieRep::from_elementary(n, action)
        }
        RepSpec::Tensor(a, b) => {
            let (ra, rb) = (build_rep(a)?, build_rep(b)?);
            if ra.n != rb.n {
                return Err(Error::RepMismatch("tensor factors act on different u(n)".into()));
            }
            let (ia, ib) = (ExactMatrix::identity(ra.dim), ExactMatrix::identity(rb.dim));
            let action =
                ra.action.iter().zip(&rb.action).map(|(x, y)| x.kron(&ib).add(&ia.kron(y))).collect();
            LieRep::from_elementary(ra.n, action)
        }
        RepSpec::TraceShift(inner, s) => {
            let mut rep = build_rep(inner)?;
            let shift = ExactMatrix::identity(rep.dim).scale_rational(s);
            for j in 1..=rep.n {
                let idx = (j - 1) * rep.n + (j - 1);
                rep.action[idx] = rep.action[idx].add(&shift);
            }
            Ok(rep)
        }
    }
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::RepMismatch("u(0) has no representations here".into()));
    }
    Ok(())
}

/// Candidate eigenvalues of a Hermitian operator, confirmed exactly.
fn exact_spectrum(m: &ExactMatrix) -> Result<Vec<Rational>> {
    if m.is_diagonal() {
        let mut vals: Vec<Rational> = (0..m.nrows()).map(|i| m.get(i, i).re.clone()).collect();
        vals.sort();
        vals.dedup();
        return Ok(vals);
    }
    let (floats, _) = hermitian_eigen(&m.to_float(), 1e-10)?;
    let mut vals = Vec::new();
    for x in floats {
        let q = rationalize(x, 64, 1e-7)
            .ok_or_else(|| Error::Diagonalization(format!("eigenvalue {x} is not a small rational")))?;
        if !vals.contains(&q) {
            vals.push(q);
        }
    }
    let id = ExactMatrix::identity(m.nrows());
    let total: usize = vals.iter().map(|q| m.nrows() - m.sub(&id.scale_rational(q)).rank()).sum();
    if total != m.nrows() {
        return Err(Error::Diagonalization("eigenvalue multiplicities do not fill the space".into()));
    }
    vals.sort();
    Ok(vals)
}

/// Highest weights of `ρ` with multiplicity, sorted.
pub fn highest_weights(rep: &LieRep) -> Result<Vec<(DominantWeight, usize)>> {
    let n = rep.n;
    let cartan: Vec<&ExactMatrix> = (1..=n).map(|j| rep.e(j, j)).collect();
    let raising = ExactMatrix::vstack(&(1..n).map(|j| rep.e(j, j + 1).clone()).collect::<Vec<_>>());
    let mut found: BTreeMap<Vec<Rational>, usize> = BTreeMap::new();

    if cartan.iter().all(|h| h.is_diagonal()) {
        let mut spaces: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
        for i in 0..rep.dim {
            let w = cartan.iter().map(|h| h.get(i, i).re.clone()).collect();
            spaces.entry(w).or_default().push(i);
        }
        for (w, cols) in spaces {
            if DominantWeight::new(w.clone()).is_err() {
                continue;
            }
            let nullity = if n == 1 {
                cols.len()
            } else {
                let rows: Vec<usize> = (0..raising.nrows()).collect();
                cols.len() - raising.submatrix(&rows, &cols).rank()
            };
            if nullity > 0 {
                found.insert(w, nullity);
            }
        }
    } else {
        let spectra = cartan.iter().map(|h| exact_spectrum(h)).collect::<Result<Vec<_>>>()?;
        let id = ExactMatrix::identity(rep.dim);
        let mut tuples: Vec<Vec<Rational>> = vec![Vec::new()];
        for spec in &spectra {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    spec.iter().filter_map(move |v| {
                        if t.last().is_some_and(|last: &Rational| !(last - v).is_integer() || last < v) {
                            return None;
                        }
                        let mut t = t.clone();
                        t.push(v.clone());
                        Some(t)
                    })
                })
                .collect();
        }
        for w in tuples {
            let mut blocks: Vec<ExactMatrix> =
                cartan.iter().zip(&w).map(|(h, v)| h.sub(&id.scale_rational(v))).collect();
            if n > 1 {
                blocks.push(raising.clone());
            }
            let nullity = rep.dim - ExactMatrix::vstack(&blocks).rank();
            if nullity > 0 {
                found.insert(w, nullity);
            }
        }
    }

    let result: Vec<(DominantWeight, usize)> =
        found.into_iter().map(|(w, m)| (DominantWeight(w), m)).collect();
    let total: u64 = result.iter().map(|(w, m)| weyl_dim(w) * *m as u64).sum();
    if total != rep.dim as u64 {
        return Err(Error::Diagonalization(format!(
            "highest weights account for dimension {total}, representation has {}",
            rep.dim
        )));
    }
    Ok(result)
}
