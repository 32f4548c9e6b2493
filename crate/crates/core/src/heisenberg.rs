//! Lattices in the Heisenberg group `G_n`, flat Dirac spectra on the
//! nilmanifolds `Γ\G_n`, and their eta functions.
//!
//! A sector is labelled by the central frequency `w ≡ c (mod 1)`, `w ≠ 0`; the
//! `w = 0` sector has vanishing eta and is never enumerated.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{GeneratorKind, SpinorModule};
use crate::error::{Error, Result};
use crate::exact::{hurwitz_zeta_neg, hurwitz_zeta_series, Rational, SeriesValue, TwistParameter};
use crate::linalg::{hermitian_eigen, max_abs};

/// Lattice type `d = (d_1, …, d_n)` with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct LatticeType(Vec<u64>);

impl LatticeType {
    pub fn new(d: Vec<u64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::LatticeType("empty type".into()));
        }
        if d.contains(&0) {
            return Err(Error::LatticeType(format!("{d:?} has a zero entry")));
        }
        if let Some(w) = d.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::LatticeType(format!("{} does not divide {}", w[0], w[1])));
        }
        Ok(LatticeType(d))
    }

    /// The standard lattice `(1, …, 1)`.
    pub fn unit(n: usize) -> Self {
        LatticeType(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    /// `|Γ| = d_1 ⋯ d_n`.
    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }
}

impl TryFrom<Vec<u64>> for LatticeType {
    type Error = Error;
    fn try_from(d: Vec<u64>) -> Result<Self> {
        LatticeType::new(d)
    }
}

impl From<LatticeType> for Vec<u64> {
    fn from(d: LatticeType) -> Self {
        d.0
    }
}

/// Data of the irreducible Γ-representation with central character `e^{2πic}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaRepData {
    pub c: TwistParameter,
    pub m: Vec<u64>,
    pub dim_v: u64,
}

pub fn gamma_rep_data(d: &LatticeType, c: &TwistParameter) -> GammaRepData {
    let m: Vec<u64> = d
        .entries()
        .iter()
        .map(|&dj| {
            let x = c.value() * Rational::integer(dj as i64);
            x.denom().try_into().expect("denominator fits in u64")
        })
        .collect();
    let dim_v = m.iter().product();
    GammaRepData { c: c.clone(), m, dim_v }
}

/// Metric in normal form: `r_1X_1, r_1Y_1, …, r_nY_n, rZ` orthonormal.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergMetric {
    r_j: Vec<f64>,
    r: f64,
}

impl HeisenbergMetric {
    pub fn new(r_j: Vec<f64>, r: f64) -> Result<Self> {
        if r_j.is_empty() || r_j.iter().chain([&r]).any(|&x| !(x.is_finite() && x > 0.0)) {
            return Err(Error::Precondition("metric parameters must be positive and finite".into()));
        }
        Ok(HeisenbergMetric { r_j, r })
    }

    pub fn unit(n: usize) -> Self {
        HeisenbergMetric { r_j: vec![1.0; n], r: 1.0 }
    }

    pub fn n(&self) -> usize {
        self.r_j.len()
    }

    pub fn r_j(&self) -> &[f64] {
        &self.r_j
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// One eigenvalue family `λ(w, p, ε)` of `D̄²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralItem {
    pub w: Rational,
    pub p: Vec<u64>,
    pub eps: Vec<i8>,
    pub value: f64,
    pub multiplicity: u64,
}

fn check_dims(d: &LatticeType, metric: &HeisenbergMetric) -> Result<()> {
    if d.n() != metric.n() {
        return Err(Error::Precondition(format!(
            "lattice type has length {} but metric has {} parameters",
            d.n(),
            metric.n()
        )));
    }
    Ok(())
}

/// `4π²w²r² + 2π|w| Σ_j N_j r_j²` with `N_j = 2p_j + 1 + ε_j sign(w)`.
fn lambda_value(w: f64, levels: &[u64], metric: &HeisenbergMetric) -> f64 {
    let sum: f64 = levels.iter().zip(&metric.r_j).map(|(&nj, rj)| nj as f64 * rj * rj).sum();
    4.0 * PI * PI * w * w * metric.r * metric.r + 2.0 * PI * w.abs() * sum
}

/// Frequencies `w ≡ c`, `w ≠ 0`, with `4π²w²r² ≤ cutoff`.
fn frequencies(c: &TwistParameter, r: f64, cutoff: f64) -> Vec<Rational> {
    let wmax = cutoff.max(0.0).sqrt() / (2.0 * PI * r);
    let kmax = wmax.ceil() as i64 + 1;
    (-kmax - 1..=kmax)
        .map(|k| c.value() + Rational::integer(k))
        .filter(|w| !w.is_zero() && w.to_f64().abs() <= wmax)
        .collect()
}

/// Level vectors `N ∈ (2ℕ)^n` with `λ ≤ cutoff`.
fn level_vectors(w: f64, metric: &HeisenbergMetric, cutoff: f64) -> Vec<Vec<u64>> {
    let base = 4.0 * PI * PI * w * w * metric.r * metric.r;
    let budget = (cutoff - base) / (2.0 * PI * w.abs());
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(j: usize, left: f64, rj: &[f64], current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if j == rj.len() {
            out.push(current.clone());
            return;
        }
        let mut nj = 0u64;
        while nj as f64 * rj[j] * rj[j] <= left + 1e-12 {
            current.push(nj);
            rec(j + 1, left - nj as f64 * rj[j] * rj[j], rj, current, out);
            current.pop();
            nj += 2;
        }
    }
    if budget >= -1e-12 {
        rec(0, budget, &metric.r_j, &mut current, &mut out);
    }
    out
}

/// Per-copy eigenvalues of `D̄²` in the sector `w`, one item per `(p, ε)`.
pub fn sector_sq_spectrum(w: &Rational, metric: &HeisenbergMetric, cutoff: f64) -> Vec<SpectralItem> {
    let wf = w.to_f64();
    let sign: i64 = w.signum();
    let mut items = Vec::new();
    for levels in level_vectors(wf, metric, cutoff) {
        let value = lambda_value(wf, &levels, metric);
        // N_j = 2p_j when ε_j sign(w) = -1 and N_j = 2p_j + 2 when it is +1.
        let choices: Vec<Vec<(u64, i8)>> = levels
            .iter()
            .map(|&nj| {
                let mut v = vec![(nj / 2, (-sign) as i8)];
                if nj > 0 {
                    v.push((nj / 2 - 1, sign as i8));
                }
                v
            })
            .collect();
        let mut combos: Vec<(Vec<u64>, Vec<i8>)> = vec![(Vec::new(), Vec::new())];
        for opts in &choices {
            combos = combos
                .into_iter()
                .flat_map(|(p, e)| {
                    opts.iter().map(move |&(pj, ej)| {
                        let (mut p, mut e) = (p.clone(), e.clone());
                        p.push(pj);
                        e.push(ej);
                        (p, e)
                    })
                })
                .collect();
        }
        for (p, eps) in combos {
            items.push(SpectralItem { w: w.clone(), p, eps, value, multiplicity: 1 });
        }
    }
    items.sort_by(|a, b| a.value.total_cmp(&b.value));
    items
}

/// `|Γ| dim V |w|^n`, an integer for `w ≡ c`.
fn sector_multiplicity(d: &LatticeType, rep: &GammaRepData, w: &Rational) -> u64 {
    let m = Rational::integer((d.order() * rep.dim_v) as i64) * w.abs().pow(d.n() as i32);
    let m = m.to_i64().expect("sector multiplicity is an integer");
    u64::try_from(m).expect("sector multiplicity is positive")
}

/// All eigenvalues of `D̄²` up to `cutoff`, with multiplicities.
pub fn dirac_sq_spectrum(
    d: &LatticeType,
    c: &TwistParameter,
    metric: &HeisenbergMetric,
    cutoff: f64,
) -> Result<Vec<SpectralItem>> {
    check_dims(d, metric)?;
    if !(cutoff > 0.0) {
        return Err(Error::Precondition("cutoff must be positive".into()));
    }
    let rep = gamma_rep_data(d, c);
    let mut items = Vec::new();
    for w in frequencies(c, metric.r, cutoff) {
        let mult = sector_multiplicity(d, &rep, &w);
        items.extend(sector_sq_spectrum(&w, metric, cutoff).into_iter().map(|mut it| {
            it.multiplicity = mult;
            it
        }));
    }
    items.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.w.cmp(&b.w)));
    Ok(items)
}

/// An eigenvalue of `D̄` in one sector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiracEigenvalue {
    pub w: Rational,
    pub value: f64,
    pub multiplicity: u64,
}

/// Eigenvalues of `D̄` in the sector `w` per copy of the Schrödinger
/// representation. Every level vector `N ≠ 0` splits evenly into `±√λ`; the
/// ground state `N = 0` is the single asymmetric eigenvalue, `2πwr` for even
/// `n` and `-2π|w|r` for odd `n`.
pub fn sector_dirac_spectrum(w: &Rational, metric: &HeisenbergMetric, cutoff: f64) -> Vec<(f64, u64)> {
    let wf = w.to_f64();
    let mut groups: BTreeMap<Vec<u64>, (f64, u64)> = BTreeMap::new();
    for it in sector_sq_spectrum(w, metric, cutoff) {
        let key: Vec<u64> = it
            .p
            .iter()
            .zip(&it.eps)
            .map(|(&p, &e)| 2 * p + if i64::from(e) == w.signum() { 2 } else { 0 })
            .collect();
        let entry = groups.entry(key).or_insert((it.value, 0));
        entry.1 += 1;
    }
    let mut out = Vec::new();
    for (key, (value, count)) in groups {
        if key.iter().all(|&x| x == 0) {
            let ground = if metric.n() % 2 == 0 { 2.0 * PI * wf * metric.r } else { -2.0 * PI * wf.abs() * metric.r };
            out.push((ground, count));
        } else {
            out.push((value.sqrt(), count / 2));
            out.push((-value.sqrt(), count / 2));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Eigenvalues of `D̄` with `D̄² ≤ cutoff`, with multiplicities.
pub fn dirac_spectrum(
    d: &LatticeType,
    c: &TwistParameter,
    metric: &HeisenbergMetric,
    cutoff: f64,
) -> Result<Vec<DiracEigenvalue>> {
    check_dims(d, metric)?;
    if !(cutoff > 0.0) {
        return Err(Error::Precondition("cutoff must be positive".into()));
    }
    let rep = gamma_rep_data(d, c);
    let mut out = Vec::new();
    for w in frequencies(c, metric.r, cutoff) {
        let mult = sector_multiplicity(d, &rep, &w);
        for (value, count) in sector_dirac_spectrum(&w, metric, cutoff) {
            out.push(DiracEigenvalue { w: w.clone(), value, multiplicity: count * mult });
        }
    }
    out.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.w.cmp(&b.w)));
    Ok(out)
}

/// Coefficient `Q` of `η(D̄, s) = Q·(2πr)^{-s}` at an integer `s ≤ 0`; at
/// `s = 0` this is the eta invariant itself. `dim_v` is the full coefficient
/// dimension (Γ-representation times any twisting bundle).
pub fn eta_closed(d: &LatticeType, c: &TwistParameter, dim_v: u64, s: i64) -> Result<Rational> {
    if s > 0 {
        return Err(Error::Precondition(format!("closed eta needs an integer s <= 0, got {s}")));
    }
    let n = d.n() as i64;
    let m = (n - s + 1) as usize;
    let zc = hurwitz_zeta_neg(m, c)?;
    let zc1 = hurwitz_zeta_neg(m, &c.complement())?;
    let pref = Rational::integer((d.order() * dim_v) as i64);
    Ok(if n % 2 == 0 { pref * (zc - zc1) } else { -(pref * (zc + zc1)) })
}

/// `|Γ| dim V (2πr)^{-s}(ζ_c(s-n) ∓ ζ_{1-c}(s-n))` at real `s > n + 1`, with the
/// Hurwitz values taken from the convergent series.
pub fn eta_closed_real(
    d: &LatticeType,
    c: &TwistParameter,
    dim_v: u64,
    metric: &HeisenbergMetric,
    s: f64,
    tol: f64,
) -> Result<SeriesValue> {
    check_dims(d, metric)?;
    let n = d.n() as f64;
    if !(s > n + 1.0) {
        return Err(Error::Divergent { s, bound: n + 1.0 });
    }
    let zc = hurwitz_zeta_series(s - n, c, tol)?;
    let zc1 = hurwitz_zeta_series(s - n, &c.complement(), tol)?;
    let pref = (d.order() * dim_v) as f64 * (2.0 * PI * metric.r).powf(-s);
    let value = if d.n() % 2 == 0 { pref * (zc.value - zc1.value) } else { -pref * (zc.value + zc1.value) };
    Ok(SeriesValue { value, tail_bound: pref * (zc.tail_bound + zc1.tail_bound), terms: zc.terms + zc1.terms })
}

/// Truncated lattice sum for `η(D̄, s)` over `0 < |w| ≤ w_max`, `s > n + 1`.
pub fn eta_series(
    d: &LatticeType,
    c: &TwistParameter,
    dim_v: u64,
    metric: &HeisenbergMetric,
    s: f64,
    w_max: u64,
) -> Result<SeriesValue> {
    check_dims(d, metric)?;
    let n = d.n();
    let sigma = s - n as f64;
    if !(sigma > 1.0) {
        return Err(Error::Divergent { s, bound: n as f64 + 1.0 });
    }
    if w_max == 0 {
        return Err(Error::Precondition("W_max must be at least 1".into()));
    }
    let cf = c.value().to_f64();
    let mut total = 0.0;
    let mut terms = 0;
    // Positive w = c + k, k ≥ 0, and negative w = c - k, k ≥ 1.
    let mut contributions = Vec::new();
    for k in 0..=w_max as i64 + 1 {
        let candidates = if k == 0 { vec![cf] } else { vec![cf + k as f64, cf - k as f64] };
        for w in candidates {
            if w == 0.0 || w.abs() > w_max as f64 {
                continue;
            }
            let mag = w.abs().powf(-sigma);
            contributions.push(if n % 2 == 0 { w.signum() * mag } else { -mag });
        }
    }
    // Smallest terms first.
    contributions.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    for x in contributions {
        total += x;
        terms += 1;
    }
    let pref = (d.order() * dim_v) as f64 * (2.0 * PI * metric.r).powf(-s);
    let edge = (w_max as f64 - 1.0).max(f64::MIN_POSITIVE);
    let tail = 2.0 * pref * edge.powf(1.0 - sigma) / (sigma - 1.0);
    Ok(SeriesValue { value: pref * total, tail_bound: tail, terms })
}

/// `lim_{t→∞} η(A^{he,+}_t)` for a cusp of complex dimension `n` whose cross
/// section has lattice type `d` of length `n - 1`.
pub fn eta_cusp_asymptotic(n: usize, d: &LatticeType, c: &TwistParameter, dim_v: u64) -> Result<Rational> {
    if n < 2 || d.n() != n - 1 {
        return Err(Error::Precondition(format!(
            "cusp of complex dimension {n} needs a lattice type of length {}, got {}",
            n.saturating_sub(1),
            d.n()
        )));
    }
    let zc = hurwitz_zeta_neg(n, c)?;
    let zc1 = hurwitz_zeta_neg(n, &c.complement())?;
    let pref = Rational::integer((d.order() * dim_v) as i64);
    Ok(if n % 2 == 0 { pref * (zc + zc1) } else { -(pref * (zc - zc1)) })
}

/// Spectrum of the flat Dirac operator in the sector `w` on the truncated
/// Hermite basis with levels `0..=levels` in each coordinate, tensored with
/// the spinors. Eigenvectors with weight at least `1e-6` on the top two levels
/// of any coordinate are dropped. Returns sorted `(eigenvalue, multiplicity)`
/// clusters.
pub fn hermite_oracle(w: &Rational, metric: &HeisenbergMetric, levels: usize) -> Result<Vec<(f64, usize)>> {
    if w.is_zero() {
        return Err(Error::Precondition("hermite oracle needs w != 0".into()));
    }
    if levels < 4 {
        return Err(Error::Precondition("hermite oracle needs at least 4 levels".into()));
    }
    let n = metric.n();
    let size = levels + 1;
    let modes = SpinorModule::new(n)?;
    let wf = w.to_f64();
    let sign = wf.signum();
    let alpha = (2.0 * PI * wf.abs()).sqrt();

    let lower = DMatrix::from_fn(size, size, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let raise = lower.adjoint();
    let id = |k: usize| DMatrix::<Complex64>::identity(k, k);
    // Operator on mode j of the oscillator part, identity elsewhere.
    let on_mode = |j: usize, op: &DMatrix<Complex64>| {
        let other = id(size);
        let mut acc = id(1);
        for k in 0..n {
            acc = acc.kronecker(if k == j { op } else { &other });
        }
        acc
    };
    let osc_dim = size.pow(n as u32);
    let spin_dim = modes.dim();

    let mut d = DMatrix::<Complex64>::zeros(spin_dim * osc_dim, spin_dim * osc_dim);
    let i = Complex64::new(0.0, 1.0);
    for j in 0..n {
        let coeff = metric.r_j[j] * alpha / 2f64.sqrt();
        let x = modes.generator(j + 1, GeneratorKind::X).to_float();
        let y = modes.generator(j + 1, GeneratorKind::Y).to_float();
        let minus = on_mode(j, &(&lower - &raise));
        let plus = on_mode(j, &(&lower + &raise));
        d += x.kronecker(&minus) * Complex64::new(coeff, 0.0);
        d += y.kronecker(&plus) * (i * sign * coeff);
    }
    let volume = modes.volume().to_float();
    d += volume.kronecker(&id(osc_dim)) * Complex64::new(2.0 * PI * wf * metric.r, 0.0);

    let residual = max_abs(&(&d - d.adjoint()));
    if residual > 1e-10 {
        return Err(Error::NotHermitian(residual));
    }
    let (values, vectors) = hermitian_eigen(&d, 1e-10)?;

    // Oscillator index of a basis vector, coordinate j.
    let level_of = |idx: usize, j: usize| (idx % osc_dim) / size.pow((n - 1 - j) as u32) % size;
    let boundary: Vec<bool> =
        (0..spin_dim * osc_dim).map(|idx| (0..n).any(|j| level_of(idx, j) + 2 > levels)).collect();
    let rows: Vec<usize> = (0..boundary.len()).filter(|&i| boundary[i]).collect();
    // Nearly degenerate eigenvectors can mix arbitrarily, so the weight test is
    // applied to each cluster's eigenspace: count the directions in it whose
    // boundary weight stays below the threshold.
    let mut out = Vec::new();
    for (start, len) in cluster_ranges(&values, 1e-6) {
        let weights = DMatrix::from_fn(len, len, |a, b| {
            rows.iter().map(|&i| vectors[(i, start + a)].conj() * vectors[(i, start + b)]).sum::<Complex64>()
        });
        let (w_eig, _) = hermitian_eigen(&weights, 1e-8)?;
        let interior = w_eig.iter().filter(|&&x| x < 1e-6).count();
        if interior > 0 {
            let mean = values[start..start + len].iter().sum::<f64>() / len as f64;
            out.push((mean, interior));
        }
    }
    Ok(out)
}

/// `(start, len)` runs of sorted values whose neighbours are within `tol`.
fn cluster_ranges(sorted: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for i in 0..sorted.len() {
        match out.last_mut() {
            Some((start, len)) if sorted[i] - sorted[*start + *len - 1] <= tol => *len += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn tw(s: &str) -> TwistParameter {
        TwistParameter::new(q(s)).unwrap()
    }

    fn lat(d: &[u64]) -> LatticeType {
        LatticeType::new(d.to_vec()).unwrap()
    }

    #[test]
    fn lattice_type_validation() {
        assert!(LatticeType::new(vec![2, 3]).is_err());
        assert!(LatticeType::new(vec![0]).is_err());
        assert_eq!(lat(&[2, 4, 12]).order(), 96);
        assert_eq!(serde_json::to_string(&lat(&[1, 2])).unwrap(), "[1,2]");
        assert!(serde_json::from_str::<LatticeType>("[2,3]").is_err());
    }

    #[test]
    fn gamma_rep_examples() {
        let a = gamma_rep_data(&lat(&[1, 1]), &tw("0"));
        assert_eq!((a.m, a.dim_v), (vec![1, 1], 1));
        let b = gamma_rep_data(&lat(&[1, 2]), &tw("1/2"));
        assert_eq!((b.m, b.dim_v), (vec![2, 1], 2));
        let c = gamma_rep_data(&lat(&[3]), &tw("1/3"));
        assert_eq!((c.m, c.dim_v), (vec![1], 1));
    }

    #[test]
    fn dirac_sq_examples() {
        let metric = HeisenbergMetric::unit(1);
        let items = dirac_sq_spectrum(&lat(&[1]), &tw("0"), &metric, 4.0 * PI * PI + 4.0 * PI + 1e-9).unwrap();
        let find = |w: i64, p: u64, e: i8| {
            items.iter().find(|it| it.w == Rational::integer(w) && it.p == vec![p] && it.eps == vec![e]).cloned()
        };
        let ground = find(1, 0, -1).unwrap();
        assert!((ground.value - 4.0 * PI * PI).abs() < 1e-12);
        assert_eq!(ground.multiplicity, 1);
        let excited = find(1, 0, 1).unwrap();
        assert!((excited.value - (4.0 * PI * PI + 4.0 * PI)).abs() < 1e-9);

        let items = dirac_sq_spectrum(&lat(&[3]), &tw("0"), &metric, 16.0 * PI * PI + 1.0).unwrap();
        let w2: Vec<&SpectralItem> = items.iter().filter(|it| it.w == Rational::integer(2)).collect();
        assert!(!w2.is_empty());
        assert!(w2.iter().all(|it| it.multiplicity == 6));
    }

    #[test]
    fn fractional_frequency_multiplicity() {
        let metric = HeisenbergMetric::unit(1);
        let items = dirac_sq_spectrum(&lat(&[2]), &tw("1/2"), &metric, 200.0).unwrap();
        for it in &items {
            let expected = Rational::integer(2) * it.w.abs();
            assert_eq!(Rational::integer(it.multiplicity as i64), expected);
        }
    }

    #[test]
    fn eta_closed_examples() {
        assert_eq!(eta_closed(&lat(&[1]), &tw("0"), 1, 0).unwrap(), q("1/6"));
        assert_eq!(eta_closed(&lat(&[3]), &tw("0"), 1, 0).unwrap(), q("1/2"));
        assert_eq!(eta_closed(&lat(&[1, 1]), &tw("0"), 1, 0).unwrap(), Rational::zero());
        assert!(eta_closed(&lat(&[1]), &tw("0"), 1, 1).is_err());
    }

    #[test]
    fn eta_series_examples() {
        let m1 = HeisenbergMetric::unit(1);
        let got = eta_series(&lat(&[1]), &tw("0"), 1, &m1, 4.0, 2000).unwrap();
        let zeta3 = 1.202_056_903_159_594_3;
        let expected = -2.0 * zeta3 / (2.0 * PI).powi(4);
        assert!((got.value - expected).abs() < 1e-9, "{} vs {expected}", got.value);
        assert!((got.value + 1.5427e-3).abs() < 1e-6);

        let m2 = HeisenbergMetric::unit(2);
        for w_max in [1, 7, 100] {
            assert_eq!(eta_series(&lat(&[1, 1]), &tw("0"), 1, &m2, 5.0, w_max).unwrap().value, 0.0);
        }

        let half = eta_series(&lat(&[1]), &tw("1/2"), 1, &m1, 4.0, 2000).unwrap();
        let z = hurwitz_zeta_series(3.0, &tw("1/2"), 1e-12).unwrap().value;
        assert!((half.value + 2.0 * z / (2.0 * PI).powi(4)).abs() < 1e-9);

        assert!(eta_series(&lat(&[1]), &tw("0"), 1, &m1, 2.0, 10).is_err());
    }

    #[test]
    fn cusp_asymptotic_examples() {
        assert_eq!(eta_cusp_asymptotic(2, &lat(&[1]), &tw("0"), 1).unwrap(), q("-1/6"));
        assert_eq!(eta_cusp_asymptotic(2, &lat(&[1]), &tw("1/2"), 1).unwrap(), q("1/12"));
        assert_eq!(eta_cusp_asymptotic(3, &lat(&[1, 1]), &tw("0"), 1).unwrap(), Rational::zero());
        assert!(eta_cusp_asymptotic(3, &lat(&[1]), &tw("0"), 1).is_err());
    }

    #[test]
    fn sign_bridge_small_cases() {
        for n in 2..=6 {
            for c in ["0", "1/2", "1/3", "2/5"] {
                let d = LatticeType::unit(n - 1);
                let cusp = eta_cusp_asymptotic(n, &d, &tw(c), 3).unwrap();
                let closed = eta_closed(&d, &tw(c), 3, 0).unwrap();
                assert_eq!(cusp, -closed, "n={n} c={c}");
            }
        }
    }

    #[test]
    fn real_closed_form_scales_with_central_radius() {
        let d = lat(&[1]);
        let a = eta_closed_real(&d, &tw("1/3"), 1, &HeisenbergMetric::new(vec![1.0], 1.0).unwrap(), 5.0, 1e-13)
            .unwrap()
            .value;
        let b = eta_closed_real(&d, &tw("1/3"), 1, &HeisenbergMetric::new(vec![3.0], 2.0).unwrap(), 5.0, 1e-13)
            .unwrap()
            .value;
        assert!((a / b - 2f64.powi(5)).abs() < 1e-9);
    }

    #[test]
    fn hermite_oracle_ground_and_pairs() {
        let metric = HeisenbergMetric::unit(1);
        let spec = hermite_oracle(&Rational::one(), &metric, 60).unwrap();
        let has = |x: f64| spec.iter().find(|(v, _)| (v - x).abs() < 1e-6).map(|&(_, m)| m);
        assert_eq!(has(-2.0 * PI), Some(1));
        assert_eq!(has(2.0 * PI), None);
        let pair = (4.0 * PI * PI + 4.0 * PI).sqrt();
        assert_eq!(has(pair), Some(1));
        assert_eq!(has(-pair), Some(1));
    }

    #[test]
    fn hermite_oracle_matches_closed_spectrum_for_both_signs_of_w() {
        let metric = HeisenbergMetric::unit(1);
        for w in [1, -1] {
            let w = Rational::integer(w);
            let oracle = hermite_oracle(&w, &metric, 60).unwrap();
            let cutoff = 4.0 * PI * PI + 20.0 * PI;
            for (value, mult) in sector_dirac_spectrum(&w, &metric, cutoff) {
                let got = oracle.iter().find(|(v, _)| (v - value).abs() < 1e-6).map(|&(_, m)| m as u64);
                assert_eq!(got, Some(mult), "w={w} eigenvalue {value}");
            }
        }
    }

    #[test]
    fn hermite_oracle_two_modes_even_ground() {
        let metric = HeisenbergMetric::new(vec![1.0, 0.8], 1.3).unwrap();
        let w = Rational::integer(1);
        let oracle = hermite_oracle(&w, &metric, 10).unwrap();
        let cutoff = 4.0 * PI * PI * 1.69 + 12.0;
        let closed = sector_dirac_spectrum(&w, &metric, cutoff);
        assert!(closed.iter().any(|&(v, _)| (v - 2.0 * PI * 1.3).abs() < 1e-12));
        for (value, mult) in closed {
            let got = oracle.iter().find(|(v, _)| (v - value).abs() < 1e-6).map(|&(_, m)| m as u64);
            assert_eq!(got, Some(mult), "eigenvalue {value}");
        }
    }

    #[test]
    fn hermite_oracle_rejects_bad_input() {
        let metric = HeisenbergMetric::unit(1);
        assert!(hermite_oracle(&Rational::zero(), &metric, 10).is_err());
        assert!(hermite_oracle(&Rational::one(), &metric, 3).is_err());
    }
}
