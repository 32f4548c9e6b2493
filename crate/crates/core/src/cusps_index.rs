//! Per-cusp correction terms and the extended and L² index of a Dirac
//! operator on a complex hyperbolic manifold with cusps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial_i, riemann_zeta_neg, Rational, TwistParameter};
use crate::heisenberg::{eta_cusp_asymptotic, gamma_rep_data, LatticeType};
use crate::unrep::{kostant_data, spin_weights, weyl_dim, DominantWeight};

/// Twist of a custom bundle by a representation of the cusp lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Twist {
    Trivial {},
    Nontrivial { c: TwistParameter },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BundleSpec {
    Dolbeault {},
    Signature {},
    Spinor {
        twist: TwistParameter,
    },
    Custom {
        weight: DominantWeight,
        twist: Twist,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim_v_override: Option<u64>,
    },
}

impl BundleSpec {
    pub fn spinor(twist: TwistParameter) -> Result<Self> {
        let b = BundleSpec::Spinor { twist };
        b.validate(None)?;
        Ok(b)
    }

    pub fn name(&self) -> &'static str {
        match self {
            BundleSpec::Dolbeault {} => "dolbeault",
            BundleSpec::Signature {} => "signature",
            BundleSpec::Spinor { .. } => "spinor",
            BundleSpec::Custom { .. } => "custom",
        }
    }

    fn validate(&self, n: Option<usize>) -> Result<()> {
        match self {
            BundleSpec::Signature {} => {
                if n.is_some_and(|n| n % 2 == 1) {
                    return Err(Error::Precondition("signature bundle needs even n".into()));
                }
            }
            BundleSpec::Spinor { twist } => {
                if !twist.value().is_zero() && *twist != TwistParameter::half() {
                    return Err(Error::Precondition(format!("spinor twist must be 0 or 1/2, got {twist}")));
                }
            }
            BundleSpec::Custom { weight, dim_v_override, .. } => {
                if n.is_some_and(|n| weight.n() != n) {
                    return Err(Error::RepMismatch(format!(
                        "custom weight has length {} for n = {}",
                        weight.n(),
                        n.unwrap_or_default()
                    )));
                }
                if *dim_v_override == Some(0) {
                    return Err(Error::Precondition("dim_v_override must be positive".into()));
                }
            }
            BundleSpec::Dolbeault {} => {}
        }
        Ok(())
    }
}

/// A cusp with cross section of lattice type `d`, `len(d) = n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspDescription {
    n: usize,
    d: LatticeType,
    bundle: BundleSpec,
}

impl CuspDescription {
    pub fn new(n: usize, d: LatticeType, bundle: BundleSpec) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("complex dimension must be at least 2, got {n}")));
        }
        if d.n() != n - 1 {
            return Err(Error::LatticeType(format!("cusp of dimension {n} needs {} entries, got {}", n - 1, d.n())));
        }
        bundle.validate(Some(n))?;
        if let BundleSpec::Spinor { twist } = &bundle {
            if !twist.value().is_zero() && d.entries().iter().any(|dj| dj % 2 == 1) {
                return Err(Error::Precondition(format!(
                    "a spin structure with twist 1/2 needs every d_j even, got {:?}",
                    d.entries()
                )));
            }
        }
        Ok(CuspDescription { n, d, bundle })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &LatticeType {
        &self.d
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionReport {
    pub he_eta: Rational,
    pub le_eta: i64,
    pub ker_dim: u64,
    pub corr: Rational,
}

/// Irreducible components with multiplicity, the representation dimension
/// and the twist, or `None` for the twist when it is trivial.
struct Expanded {
    components: Vec<(DominantWeight, u64)>,
    pi_dim: u64,
    twist: Option<TwistParameter>,
    gamma_dim_override: Option<u64>,
}

fn expand(n: usize, bundle: &BundleSpec) -> Expanded {
    match bundle {
        BundleSpec::Dolbeault {} => Expanded {
            components: vec![(DominantWeight::constant(n, Rational::new(n as i64 + 1, 2)), 1)],
            pi_dim: 1,
            twist: None,
            gamma_dim_override: None,
        },
        BundleSpec::Signature {} => Expanded {
            components: spin_weights(n).into_iter().map(|w| (w, 1)).collect(),
            pi_dim: 1 << n,
            twist: None,
            gamma_dim_override: None,
        },
        BundleSpec::Spinor { twist } => Expanded {
            components: vec![(DominantWeight::zero(n), 1)],
            pi_dim: 1,
            twist: (!twist.value().is_zero()).then(|| twist.clone()),
            // A spin structure twists by a character.
            gamma_dim_override: Some(1),
        },
        BundleSpec::Custom { weight, twist, dim_v_override } => Expanded {
            components: vec![(weight.clone(), 1)],
            pi_dim: weyl_dim(weight),
            twist: match twist {
                Twist::Trivial {} => None,
                Twist::Nontrivial { c } => Some(c.clone()),
            },
            gamma_dim_override: *dim_v_override,
        },
    }
}

/// Low-energy eta of `A^le` and its kernel dimension for one irreducible
/// component.
pub fn low_energy_terms(lambda: &DominantWeight) -> (i64, u64) {
    let n = lambda.n() as i64;
    let mut eta = 0;
    let mut ker = 0;
    for d in kostant_data(lambda) {
        let b = d.b_k as i64;
        let arg = Rational::integer(n - 1 - 2 * d.k as i64) + lambda.get(d.k + 1) * 2;
        let sign = if d.k % 2 == 0 { 1 } else { -1 };
        eta += sign * b * arg.signum();
        if d.kernel_flag {
            ker += d.b_k;
        }
    }
    (eta, ker)
}

pub fn correction(cusp: &CuspDescription) -> Result<CorrectionReport> {
    let e = expand(cusp.n, &cusp.bundle);
    let c = e.twist.clone().unwrap_or_else(TwistParameter::zero);
    let gamma_dim = e.gamma_dim_override.unwrap_or_else(|| gamma_rep_data(&cusp.d, &c).dim_v);
    let he_eta = eta_cusp_asymptotic(cusp.n, &cusp.d, &c, gamma_dim * e.pi_dim)?;
    let (le_eta, ker_dim) = if e.twist.is_some() {
        (0, 0)
    } else {
        e.components.iter().fold((0, 0), |(eta, ker), (w, m)| {
            let (x, y) = low_energy_terms(w);
            (eta + x * *m as i64, ker + y * m)
        })
    };
    let corr = (&he_eta + Rational::integer(le_eta) + Rational::integer(ker_dim as i64)) / Rational::integer(2);
    Ok(CorrectionReport { he_eta, le_eta, ker_dim, corr })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Bulk {
    /// `vol X / vol CP^n`, converted by the proportionality constant of the
    /// named bundle.
    VolumeRatio { v: Rational },
    Integral { value: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CuspSpec {
    pub d: LatticeType,
    /// Replaces the bundle's twist parameter at this cusp.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistParameter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDescription {
    pub n: usize,
    pub bundle: BundleSpec,
    pub bulk: Bulk,
    pub cusps: Vec<CuspSpec>,
    /// `h⁺_∞ - h⁻_∞`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_diff: Option<Rational>,
}

impl ManifoldDescription {
    /// Per-cusp descriptions with twist overrides applied.
    pub fn cusp_descriptions(&self) -> Result<Vec<CuspDescription>> {
        self.bundle.validate(Some(self.n))?;
        self.cusps
            .iter()
            .map(|spec| {
                let bundle = match (&self.bundle, &spec.twist) {
                    (b, None) => b.clone(),
                    (BundleSpec::Spinor { .. }, Some(t)) => BundleSpec::Spinor { twist: t.clone() },
                    (BundleSpec::Custom { weight, twist: Twist::Nontrivial { .. }, dim_v_override }, Some(t)) => {
                        BundleSpec::Custom {
                            weight: weight.clone(),
                            twist: Twist::Nontrivial { c: t.clone() },
                            dim_v_override: *dim_v_override,
                        }
                    }
                    (BundleSpec::Custom { .. }, Some(t)) if t.value().is_zero() => self.bundle.clone(),
                    (b, Some(_)) => {
                        return Err(Error::Precondition(format!(
                            "a twist override needs a twisted bundle, {} is untwisted",
                            b.name()
                        )))
                    }
                };
                CuspDescription::new(self.n, spec.d.clone(), bundle)
            })
            .collect()
    }

    pub fn bulk_value(&self) -> Result<Rational> {
        match (&self.bulk, &self.bundle) {
            (Bulk::Integral { value }, _) => Ok(value.clone()),
            (Bulk::VolumeRatio { v }, BundleSpec::Dolbeault {}) => {
                Ok(if self.n % 2 == 0 { v.clone() } else { -v })
            }
            (Bulk::VolumeRatio { v }, BundleSpec::Signature {}) => Ok(v.clone()),
            (Bulk::VolumeRatio { .. }, BundleSpec::Spinor { .. }) if self.n % 2 == 1 => Ok(Rational::zero()),
            (Bulk::VolumeRatio { .. }, b) => Err(Error::MissingBulk(format!(
                "no proportionality constant for a {} bundle with n = {}; give the integral instead",
                b.name(),
                self.n
            ))),
        }
    }
}

pub fn corrections(m: &ManifoldDescription) -> Result<Vec<CorrectionReport>> {
    m.cusp_descriptions()?.iter().map(correction).collect()
}

/// Bulk term plus the sum of the cusp corrections.
pub fn extended_index(m: &ManifoldDescription) -> Result<Rational> {
    let bulk = m.bulk_value()?;
    Ok(corrections(m)?.iter().fold(bulk, |acc, c| acc + &c.corr))
}

/// True iff no cusp has low-energy kernel.
pub fn fredholm_type(m: &ManifoldDescription) -> Result<bool> {
    Ok(corrections(m)?.iter().all(|c| c.ker_dim == 0))
}

/// `h⁺_∞ - h⁻_∞`: the given value, else 0 when the operator is Fredholm or
/// for spinors in odd dimension.
fn resolve_h_diff(m: &ManifoldDescription, reports: &[CorrectionReport]) -> Result<Rational> {
    let h_sum: u64 = reports.iter().map(|c| c.ker_dim).sum();
    if let Some(h) = &m.h_diff {
        if !h.is_integer() || h.abs() > Rational::integer(h_sum as i64) || !(h + Rational::integer(h_sum as i64)).is_integer()
        {
            return Err(Error::Precondition(format!("h_diff must be an integer with |h_diff| <= {h_sum}")));
        }
        let parity = h.to_i64().unwrap_or(1) + h_sum as i64;
        if parity % 2 != 0 {
            return Err(Error::Precondition(format!("h_diff + h_sum must be even, got {h} + {h_sum}")));
        }
        return Ok(h.clone());
    }
    if h_sum == 0 {
        return Ok(Rational::zero());
    }
    if matches!(m.bundle, BundleSpec::Spinor { .. }) && m.n % 2 == 1 {
        return Ok(Rational::zero());
    }
    Err(Error::NonLocal(format!(
        "the operator is not Fredholm (low-energy kernel {h_sum}) and h+ - h- cannot be computed locally; supply h_diff"
    )))
}

/// `bulk + ½Σ(he + le) - ½(h⁺_∞ - h⁻_∞)`.
pub fn l2_index(m: &ManifoldDescription) -> Result<Rational> {
    let reports = corrections(m)?;
    let h_diff = resolve_h_diff(m, &reports)?;
    let bulk = m.bulk_value()?;
    let half = Rational::new(1, 2);
    let sum = reports.iter().fold(Rational::zero(), |acc, c| acc + &c.he_eta + Rational::integer(c.le_eta));
    Ok(bulk + &half * sum - half * h_diff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexReport {
    pub bulk: Rational,
    pub corrections: Vec<CorrectionReport>,
    pub extended_index: Rational,
    /// `None` when `h⁺ - h⁻` is undetermined.
    pub l2_index: Option<Rational>,
    pub fredholm: bool,
    /// `h⁺_∞ + h⁻_∞ = Σ dim ker A^le`.
    pub h_sum: u64,
}

pub fn index_report(m: &ManifoldDescription) -> Result<IndexReport> {
    let reports = corrections(m)?;
    let bulk = m.bulk_value()?;
    let extended_index = reports.iter().fold(bulk.clone(), |acc, c| acc + &c.corr);
    let l2 = match l2_index(m) {
        Ok(v) => Some(v),
        Err(Error::NonLocal(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(IndexReport {
        bulk,
        h_sum: reports.iter().map(|c| c.ker_dim).sum(),
        fredholm: reports.iter().all(|c| c.ker_dim == 0),
        corrections: reports,
        extended_index,
        l2_index: l2,
    })
}

/// `χ_{L²}(X, O) = (-1)^n v + ζ(1-n) Σ|Γ|` (the zeta term only for even `n`).
pub fn dolbeault_index(n: usize, v: &Rational, gammas: &[u64]) -> Result<Rational> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let sign_v = if n % 2 == 0 { v.clone() } else { -v };
    if n % 2 == 1 {
        return Ok(sign_v);
    }
    let total: u64 = gammas.iter().sum();
    Ok(sign_v + riemann_zeta_neg(n)? * Rational::integer(total as i64))
}

/// Signature for even `n`.
pub fn signature_index(n: usize, v: &Rational, gammas: &[u64], ends: u64) -> Result<Rational> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::Precondition(format!("signature formula needs even n >= 2, got {n}")));
    }
    let total: u64 = gammas.iter().sum();
    let ni = n as i64;
    let zeta_term = riemann_zeta_neg(n)? * Rational::integer((1i64 << n) * total as i64);
    let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
    let boundary = sign * (binomial_i(ni - 2, ni / 2) - binomial_i(ni - 2, ni / 2 - 1));
    Ok(v + zeta_term + Rational::integer(ends as i64 * boundary))
}

/// `(n + 1) v = (-1)^n χ`.
pub fn harder_check(n: usize, v: &Rational, chi: i64) -> bool {
    let lhs = v * Rational::integer(n as i64 + 1);
    let rhs = Rational::integer(if n % 2 == 0 { chi } else { -chi });
    lhs == rhs
}

/// Extended index of the spinor Dirac operator for odd `n`: `(ν/2) C(n-1, (n-1)/2)`.
pub fn spinor_extended_index_odd(n: usize, ends: u64) -> Result<Rational> {
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("needs odd n, got {n}")));
    }
    let ni = n as i64;
    Ok(Rational::new(ends as i64, 2) * Rational::integer(binomial_i(ni - 1, (ni - 1) / 2)))
}
