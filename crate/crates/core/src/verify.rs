//! Self-verification suite: each criterion checks an exact identity or an
//! oracle equivalence and reports a one-line verdict.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cusps_index::{
    dolbeault_index, extended_index, fredholm_type, low_energy_terms, signature_index, BundleSpec, Bulk,
    CuspSpec, ManifoldDescription,
};
use crate::error::Result;
use crate::exact::{binomial_i, hurwitz_zeta_neg, hurwitz_zeta_series, riemann_zeta_neg, Rational, TwistParameter};
use crate::heisenberg::{
    eta_closed, eta_cusp_asymptotic, eta_series, hermite_oracle, sector_dirac_spectrum, HeisenbergMetric,
    LatticeType,
};
use crate::halfline::{check_cindext, index_ext, kernel_dims, ConstantDiracSystem, SpectralBC};
use crate::lowenergy::{build_lowenergy, eta_finite, harmonic_decompose};
use crate::unrep::{build_rep, highest_weights, kostant_blocks, kostant_data, spin_weights, DominantWeight, RepSpec};

/// Seed of the randomized criteria.
pub const SEED: u64 = 0x5eed_c0de;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{}] {}: {}", self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "kostant oracle equivalence"),
    (2, "example regression"),
    (3, "eta series vs closed form"),
    (4, "hermite oracle"),
    (5, "exact zeta identities"),
    (6, "sign bridge"),
    (7, "pipeline consistency"),
    (8, "half-line identities"),
    (9, "anticommutator and eta split"),
    (10, "fredholm predicate"),
];

/// Runs one criterion by number.
pub fn run(id: u8) -> Option<CriterionResult> {
    let name = CRITERIA.iter().find(|(i, _)| *i == id)?.1;
    let start = Instant::now();
    let outcome = match id {
        1 => kostant_oracle(),
        2 => example_regression(),
        3 => series_vs_closed(),
        4 => hermite(),
        5 => zeta_identities(),
        6 => sign_bridge(),
        7 => pipeline(),
        8 => halfline_identities(),
        9 => eta_split(),
        10 => fredholm(),
        _ => return None,
    };
    let elapsed = start.elapsed();
    let (passed, detail) = match outcome {
        Ok(Ok(detail)) => match time_budget(id) {
            Some(budget) if elapsed > budget => {
                (false, format!("{detail}; took {:.2?}, budget {budget:?}", elapsed))
            }
            _ => (true, format!("{detail} ({elapsed:.2?})")),
        },
        Ok(Err(failure)) => (false, failure),
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionResult { id, name: name.to_string(), passed, detail })
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|(id, _)| run(*id)).collect()
}

fn time_budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        3 | 4 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

/// `Ok(Ok(detail))` on success, `Ok(Err(reason))` on a violated identity.
type Check = Result<std::result::Result<String, String>>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Ok(Err(format!($($fmt)+)));
        }
    };
}

fn q(p: i64, d: i64) -> Rational {
    Rational::new(p, d)
}

fn twist(p: i64, d: i64) -> TwistParameter {
    TwistParameter::new(q(p, d)).expect("twist in range")
}

/// Catalog representations with their known irreducible components.
fn catalog(n: usize) -> Vec<(String, RepSpec, Vec<DominantWeight>)> {
    let shift = q(n as i64 + 1, 2);
    let mut out = vec![
        ("trivial".to_string(), RepSpec::Trivial(n), vec![DominantWeight::zero(n)]),
        (
            format!("trace_shift({shift})"),
            RepSpec::trace_shift(RepSpec::Trivial(n), shift.clone()),
            vec![DominantWeight::constant(n, shift)],
        ),
    ];
    for k in 1..=n {
        let w = (0..n).map(|j| Rational::integer(i64::from(j < k))).collect();
        out.push((format!("exterior({k})"), RepSpec::Exterior(n, k), vec![DominantWeight::new(w).expect("dominant")]));
    }
    out.push(("spin".to_string(), RepSpec::Spin(n), spin_weights(n)));
    out
}

fn tally(weights: &[DominantWeight]) -> Vec<(DominantWeight, usize)> {
    let mut out: Vec<(DominantWeight, usize)> = Vec::new();
    for w in weights {
        match out.iter_mut().find(|(x, _)| x == w) {
            Some((_, m)) => *m += 1,
            None => out.push((w.clone(), 1)),
        }
    }
    out
}

fn kostant_oracle() -> Check {
    let mut count = 0;
    for n in 2..=4 {
        for (name, spec, weights) in catalog(n) {
            let rep = build_rep(&spec)?;
            let known = tally(&weights);
            let mut found = highest_weights(&rep)?;
            found.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
            let mut expected = known.clone();
            expected.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
            ensure!(found == expected, "n={n} {name}: highest weights {found:?}, expected {expected:?}");
            let h = harmonic_decompose(&build_lowenergy(n, &rep)?)?;
            let closed = kostant_blocks(&known);
            ensure!(h.blocks == closed, "n={n} {name}: harmonic blocks {:?} differ from {:?}", h.blocks, closed);
            count += 1;
        }
    }
    Ok(Ok(format!("{count} representations agree exactly")))
}

fn example_regression() -> Check {
    for n in 2..=5usize {
        let ni = n as i64;
        let dol = DominantWeight::constant(n, q(ni + 1, 2));
        for d in kostant_data(&dol) {
            let k = d.k as i64;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            ensure!(d.b_k as i64 == binomial_i(ni - 1, k), "dolbeault n={n}: b_{k} = {}", d.b_k);
            ensure!(d.z_value == Rational::integer(sign * (k - ni)), "dolbeault n={n}: z_{k} = {}", d.z_value);
        }
        ensure!(low_energy_terms(&dol) == (0, 0), "dolbeault n={n}: le terms {:?}", low_energy_terms(&dol));

        let sig = spin_weights(n).iter().map(low_energy_terms).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        let expected_sig = if n % 2 == 1 {
            0
        } else {
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            2 * sign * (binomial_i(ni - 2, ni / 2) - binomial_i(ni - 2, ni / 2 - 1))
        };
        if n % 2 == 1 || n <= 4 {
            ensure!(sig == (expected_sig, 0), "signature n={n}: (le, ker) = {sig:?}, expected ({expected_sig}, 0)");
        }

        let spinor = low_energy_terms(&DominantWeight::zero(n));
        if n % 2 == 0 && n <= 4 {
            let sign = if ((n - 2) / 2) % 2 == 0 { 1 } else { -1 };
            let expected = 2 * sign * binomial_i(ni - 2, (ni - 2) / 2);
            ensure!(spinor.0 == expected, "spinor n={n}: le = {}, expected {expected}", spinor.0);
        }
        if n % 2 == 1 {
            let expected = binomial_i(ni - 1, (ni - 1) / 2) as u64;
            ensure!(spinor.1 == expected, "spinor n={n}: ker = {}, expected {expected}", spinor.1);
        }
    }
    Ok(Ok("dolbeault, signature and spinor tables match for n = 2..5".into()))
}

fn series_vs_closed() -> Check {
    let mut worst: f64 = 0.0;
    for n in 1..=3usize {
        let d = LatticeType::unit(n);
        let metric = HeisenbergMetric::unit(n);
        let s = n as f64 + 3.0;
        for c in [twist(0, 1), twist(1, 3), twist(1, 2)] {
            let series = eta_series(&d, &c, 1, &metric, s, 2000)?;
            let zc = hurwitz_zeta_series(s - n as f64, &c, 1e-14)?.value;
            let zc1 = hurwitz_zeta_series(s - n as f64, &c.complement(), 1e-14)?.value;
            let pref = (2.0 * PI).powf(-s);
            let closed = if n % 2 == 0 { pref * (zc - zc1) } else { -pref * (zc + zc1) };
            let err = (series.value - closed).abs();
            worst = worst.max(err);
            ensure!(err <= 1e-6, "n={n} c={c}: series {} vs closed {closed} (error {err:e})", series.value);
        }
    }
    Ok(Ok(format!("max deviation {worst:.3e}")))
}

fn hermite() -> Check {
    let metric = HeisenbergMetric::unit(1);
    let w = Rational::one();
    let oracle = hermite_oracle(&w, &metric, 60)?;
    let cutoff = 4.0 * PI * PI + 40.0 * PI;
    let closed = sector_dirac_spectrum(&w, &metric, cutoff);
    for &(value, mult) in &closed {
        let got = oracle.iter().find(|(v, _)| (v - value).abs() <= 1e-6).map(|&(_, m)| m as u64);
        ensure!(got == Some(mult), "eigenvalue {value:.9}: oracle multiplicity {got:?}, expected {mult}");
    }
    let unpaired: Vec<f64> = closed
        .iter()
        .filter(|(v, _)| !closed.iter().any(|(u, _)| (u + v).abs() <= 1e-9))
        .map(|&(v, _)| v)
        .collect();
    ensure!(
        unpaired.len() == 1 && (unpaired[0] + 2.0 * PI).abs() <= 1e-9,
        "asymmetric eigenvalues {unpaired:?}, expected only -2π"
    );
    let ground = oracle.iter().filter(|(v, _)| (v + 2.0 * PI).abs() <= 1e-6).map(|&(_, m)| m).sum::<usize>();
    let mirror = oracle.iter().any(|(v, _)| (v - 2.0 * PI).abs() <= 1e-6);
    ensure!(ground == 1 && !mirror, "oracle ground multiplicity {ground}, +2π present: {mirror}");
    Ok(Ok(format!("{} eigenvalues reproduced", closed.len())))
}

fn zeta_identities() -> Check {
    let half = TwistParameter::half();
    for n in 1..=8usize {
        let lhs = hurwitz_zeta_neg(n, &half)?;
        let rhs = (Rational::integer(2).pow(1 - n as i32) - Rational::one()) * riemann_zeta_neg(n)?;
        ensure!(lhs == rhs, "ζ_1/2(1-{n}) = {lhs}, expected {rhs}");
        for c in [twist(1, 3), twist(1, 4), twist(2, 5)] {
            let a = hurwitz_zeta_neg(n, &c.complement())?;
            let b = hurwitz_zeta_neg(n, &c)?;
            let b = if n % 2 == 0 { b } else { -b };
            ensure!(a == b, "reflection fails at n={n}, c={c}: {a} vs {b}");
        }
    }
    Ok(Ok("32 identities hold exactly".into()))
}

fn random_lattice(rng: &mut ChaCha8Rng, len: usize) -> Vec<u64> {
    let mut acc = 1;
    (0..len)
        .map(|_| {
            acc *= rng.random_range(1..=3u64);
            acc
        })
        .collect()
}

fn sign_bridge() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for n in 2..=5usize {
        for c in [twist(0, 1), twist(1, 2), twist(1, 3)] {
            for _ in 0..5 {
                let d = LatticeType::new(random_lattice(&mut rng, n - 1))?;
                let dim_v = rng.random_range(1..=4u64);
                let a = eta_cusp_asymptotic(n, &d, &c, dim_v)?;
                let b = eta_closed(&d, &c, dim_v, 0)?;
                ensure!(a == -&b, "n={n} c={c} d={:?} dimV={dim_v}: {a} vs -({b})", d.entries());
                count += 1;
            }
        }
    }
    Ok(Ok(format!("{count} randomized cases")))
}

fn random_manifold(rng: &mut ChaCha8Rng, n: usize, bundle: BundleSpec) -> (ManifoldDescription, Vec<u64>) {
    let v = q(rng.random_range(-60..=60), rng.random_range(1..=24));
    let cusps: Vec<Vec<u64>> = (0..rng.random_range(0..=4)).map(|_| random_lattice(rng, n - 1)).collect();
    let gammas = cusps.iter().map(|d| d.iter().product()).collect();
    let m = ManifoldDescription {
        n,
        bundle,
        bulk: Bulk::VolumeRatio { v },
        cusps: cusps
            .into_iter()
            .map(|d| CuspSpec { d: LatticeType::new(d).expect("divisibility chain"), twist: None })
            .collect(),
        h_diff: None,
    };
    (m, gammas)
}

fn pipeline() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    for draw in 0..100 {
        let n = [2, 3, 4][draw % 3];
        let (m, gammas) = random_manifold(&mut rng, n, BundleSpec::Dolbeault {});
        let Bulk::VolumeRatio { v } = &m.bulk else { unreachable!() };
        let (a, b) = (extended_index(&m)?, dolbeault_index(n, v, &gammas)?);
        ensure!(a == b, "dolbeault draw {draw} (n={n}): pipeline {a} vs closed {b}");

        let n = [2, 4][draw % 2];
        let (m, gammas) = random_manifold(&mut rng, n, BundleSpec::Signature {});
        let Bulk::VolumeRatio { v } = &m.bulk else { unreachable!() };
        let (a, b) = (extended_index(&m)?, signature_index(n, v, &gammas, m.cusps.len() as u64)?);
        ensure!(a == b, "signature draw {draw} (n={n}): pipeline {a} vs closed {b}");
    }
    Ok(Ok("100 dolbeault and 100 signature draws agree exactly".into()))
}

/// `diag(μ_i, -μ_i)` blocks conjugated by a random unitary.
fn random_system(rng: &mut ChaCha8Rng) -> Result<ConstantDiracSystem> {
    let blocks = rng.random_range(0..=6usize);
    let k = 2 * blocks;
    let mut a = DMatrix::<Complex64>::zeros(k, k);
    let mut t = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..blocks {
        let mu = if rng.random_bool(0.25) { 0.0 } else { rng.random_range(-8..=8) as f64 / 2.0 };
        a[(2 * i, 2 * i)] = Complex64::new(mu, 0.0);
        a[(2 * i + 1, 2 * i + 1)] = Complex64::new(-mu, 0.0);
        t[(2 * i, 2 * i + 1)] = Complex64::new(-1.0, 0.0);
        t[(2 * i + 1, 2 * i)] = Complex64::new(1.0, 0.0);
    }
    if k > 0 {
        let g = DMatrix::from_fn(k, k, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let u = g.qr().q();
        a = &u * a * u.adjoint();
        t = &u * t * u.adjoint();
    }
    ConstantDiracSystem::new(a, t)
}

fn halfline_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    for draw in 0..200 {
        let sys = random_system(&mut rng)?;
        let lambda = if rng.random_bool(0.5) { rng.random_range(0..=10) as f64 / 2.0 } else { rng.random_range(0.0..5.0) };
        let r = check_cindext(&sys, lambda)?;
        ensure!(r.holds, "draw {draw}: spectrum {:?}, λ = {lambda}: {r:?}", sys.spectrum());
        let kernel = kernel_dims(&sys, &SpectralBC::below(0.0)).ext;
        let cokernel = kernel_dims(&sys, &SpectralBC::below(0.0).adjoint()).l2;
        let index = index_ext(&sys, &SpectralBC::below(0.0));
        ensure!(
            index == 0 && kernel == 0 && cokernel == 0,
            "draw {draw}: index {index}, kernel {kernel}, cokernel {cokernel}"
        );
    }
    Ok(Ok("200 randomized systems".into()))
}

fn eta_split() -> Check {
    let mut count = 0;
    for n in 2..=4 {
        for (name, spec, _) in catalog(n) {
            let op = build_lowenergy(n, &build_rep(&spec)?)?;
            ensure!(op.dz.anticommutator(&op.dx).is_zero(), "n={n} {name}: {{D_z, D_x}} != 0");
            let h = harmonic_decompose(&op)?;
            let (full, split, dx) = (eta_finite(&op.dle)?, h.dz_eta(), eta_finite(&op.dx)?);
            ensure!(full == split, "n={n} {name}: η(D^le) = {full}, η(D_z|ker D_x) = {split}");
            ensure!(dx == 0, "n={n} {name}: η(D_x) = {dx}");
            count += 1;
        }
    }
    Ok(Ok(format!("{count} representations")))
}

fn fredholm() -> Check {
    let one_cusp = |n: usize, bundle: BundleSpec| ManifoldDescription {
        n,
        bundle,
        bulk: Bulk::Integral { value: Rational::zero() },
        cusps: vec![CuspSpec { d: LatticeType::unit(n - 1), twist: None }],
        h_diff: None,
    };
    for n in 2..=5 {
        ensure!(fredholm_type(&one_cusp(n, BundleSpec::Dolbeault {}))?, "dolbeault n={n} is not Fredholm");
        if n % 2 == 0 {
            ensure!(fredholm_type(&one_cusp(n, BundleSpec::Signature {}))?, "signature n={n} is not Fredholm");
        } else {
            let spinor = BundleSpec::Spinor { twist: TwistParameter::zero() };
            ensure!(!fredholm_type(&one_cusp(n, spinor))?, "spinor n={n} is Fredholm");
        }
    }
    Ok(Ok("dolbeault/signature Fredholm, odd spinor not".into()))
}
