use std::fmt::Write;

use cusp_eta::cusps_index::{BundleSpec, CorrectionReport, IndexReport};
use cusp_eta::exact::{Rational, TwistParameter};
use cusp_eta::unrep::{DominantWeight, KostantDatum};
use cusp_eta::verify::CriterionResult;
use serde::{Deserialize, Serialize};

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// 12 significant digits, in exponent form outside `[1e-4, 1e12)`.
pub fn fmt12(x: f64) -> String {
    let y = sig12(x);
    if y == 0.0 || !y.is_finite() || (1e-4..1e12).contains(&y.abs()) {
        y.to_string()
    } else {
        format!("{y:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaOutput {
    pub n: usize,
    pub d: Vec<u64>,
    pub c: TwistParameter,
    pub dim_v: u64,
    pub s: i64,
    /// Central radius; the eta function is `coefficient · (2πr)^{-s}`.
    pub r: f64,
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheckOutput {
    pub s: f64,
    pub w_max: u64,
    pub series: f64,
    pub tail_bound: f64,
    pub closed: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspCorrection {
    pub d: Vec<u64>,
    pub bundle: BundleSpec,
    #[serde(flatten)]
    pub report: CorrectionReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrOutput {
    pub cusps: Vec<CuspCorrection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub w: Rational,
    pub value: f64,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub squared: bool,
    #[serde(skip)]
    pub csv: bool,
    pub rows: Vec<SpectrumRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KostantOutput {
    pub weight: DominantWeight,
    pub dim: u64,
    pub rows: Vec<KostantDatum>,
}

pub enum Output {
    Eta(EtaOutput),
    SeriesCheck(SeriesCheckOutput),
    Corr(CorrOutput),
    Index(IndexReport),
    Spectrum(SpectrumOutput),
    Verify(Vec<CriterionResult>),
    Kostant(KostantOutput),
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output is serializable");
    s.push('\n');
    s
}

fn opt(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "undetermined (supply h_diff)".to_string(), Rational::to_string)
}

impl Output {
    pub fn failed(&self) -> bool {
        matches!(self, Output::Verify(results) if results.iter().any(|r| !r.passed))
    }

    pub fn to_json(&self) -> String {
        match self {
            Output::Eta(o) => json(o),
            Output::SeriesCheck(o) => json(o),
            Output::Corr(o) => json(o),
            Output::Index(o) => json(o),
            Output::Spectrum(o) => json(o),
            Output::Verify(o) => json(o),
            Output::Kostant(o) => json(o),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Eta(o) => {
                if o.s == 0 {
                    writeln!(s, "{}", o.coefficient)
                } else {
                    writeln!(s, "{} * (2*pi*{})^{}", o.coefficient, fmt12(o.r), -o.s)
                }
            }
            Output::SeriesCheck(o) => writeln!(
                s,
                "s = {}, W_max = {}\nseries      {}\ntail bound  {}\nclosed form {}\ndifference  {}",
                fmt12(o.s),
                o.w_max,
                fmt12(o.series),
                fmt12(o.tail_bound),
                fmt12(o.closed),
                fmt12(o.difference)
            ),
            Output::Corr(o) => {
                let _ = writeln!(s, "{:<16} {:>10} {:>8} {:>8} {:>10}", "d", "he_eta", "le_eta", "ker", "corr");
                for c in &o.cusps {
                    let d = c.d.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                    let r = &c.report;
                    let _ = writeln!(
                        s,
                        "{:<16} {:>10} {:>8} {:>8} {:>10}",
                        format!("({d})"),
                        r.he_eta.to_string(),
                        r.le_eta,
                        r.ker_dim,
                        r.corr.to_string()
                    );
                }
                Ok(())
            }
            Output::Index(r) => writeln!(
                s,
                "bulk            {}\nextended index  {}\nL2 index        {}\nfredholm        {}\nh+ + h-         {}",
                r.bulk,
                r.extended_index,
                opt(&r.l2_index),
                r.fredholm,
                r.h_sum
            ),
            Output::Spectrum(o) if o.csv => {
                let _ = writeln!(s, "w,value,multiplicity");
                for r in &o.rows {
                    let _ = writeln!(s, "{},{},{}", r.w, fmt12(r.value), r.multiplicity);
                }
                Ok(())
            }
            Output::Spectrum(o) => {
                let _ = writeln!(s, "{:>8} {:>20} {:>12}", "w", if o.squared { "D^2" } else { "D" }, "mult");
                for r in &o.rows {
                    let _ = writeln!(s, "{:>8} {:>20} {:>12}", r.w.to_string(), fmt12(r.value), r.multiplicity);
                }
                Ok(())
            }
            Output::Verify(results) => {
                for r in results {
                    let _ = writeln!(s, "{r}");
                }
                Ok(())
            }
            Output::Kostant(o) => {
                let _ = writeln!(s, "weight {} (dim {})", o.weight, o.dim);
                let _ = writeln!(s, "{:>3} {:>8} {:>8} {:>7}", "k", "b_k", "z", "kernel");
                for r in &o.rows {
                    let _ =
                        writeln!(s, "{:>3} {:>8} {:>8} {:>7}", r.k, r.b_k, r.z_value.to_string(), r.kernel_flag);
                }
                Ok(())
            }
        }
        .expect("writing to a string");
        s
    }
}
