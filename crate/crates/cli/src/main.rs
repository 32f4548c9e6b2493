mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cusp_eta::cusps_index::{correction, index_report, BundleSpec, CuspDescription, ManifoldDescription, Twist};
use cusp_eta::error::Error;
use cusp_eta::exact::{Rational, TwistParameter};
use cusp_eta::heisenberg::{
    dirac_spectrum, dirac_sq_spectrum, eta_closed, eta_closed_real, eta_series, gamma_rep_data, HeisenbergMetric,
    LatticeType,
};
use cusp_eta::unrep::{kostant_data, weyl_dim, DominantWeight};
use cusp_eta::verify;

use render::{
    sig12, CorrOutput, CuspCorrection, EtaOutput, KostantOutput, Output, SeriesCheckOutput, SpectrumOutput,
    SpectrumRow,
};

/// Eta invariants and cusp index corrections.
#[derive(Parser, Debug)]
#[command(name = "cusp-eta", version)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eta function of the flat Dirac operator on a Heisenberg nilmanifold.
    Eta(EtaArgs),
    /// Per-cusp correction terms.
    Corr(CorrArgs),
    /// Extended and L² index of a manifold description.
    Index {
        #[arg(long)]
        config: PathBuf,
    },
    /// Low-lying spectrum of the Heisenberg Dirac operator.
    Spectrum(SpectrumArgs),
    /// Run every acceptance check; exits 2 on failure.
    Verify {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// Harmonic dimensions and central scalars for a highest weight.
    Kostant {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
}

#[derive(Args, Debug)]
struct HeisenbergArgs {
    /// Heisenberg dimension parameter n.
    #[arg(long = "heis-dim")]
    heis_dim: usize,
    /// Lattice type d_1,…,d_n.
    #[arg(long = "type")]
    lattice: String,
    #[arg(long, default_value = "0")]
    twist: String,
    /// Radii r_1,…,r_n,r; unit metric by default.
    #[arg(long)]
    metric: Option<String>,
    /// Dimension of an extra coefficient bundle.
    #[arg(long, default_value_t = 1)]
    bundle_dim: u64,
}

#[derive(Args, Debug)]
struct EtaArgs {
    #[command(flatten)]
    heis: HeisenbergArgs,
    /// Integer s ≤ 0 for the exact value.
    #[arg(long = "at-s", default_value_t = 0, allow_hyphen_values = true)]
    at_s: i64,
    /// Compare the truncated series at real s with the closed form.
    #[arg(long = "series-check", num_args = 2, value_names = ["S", "WMAX"])]
    series_check: Option<Vec<String>>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    heis: HeisenbergArgs,
    /// Bound on D̄².
    #[arg(long)]
    cutoff: f64,
    /// List eigenvalues of D̄² instead of D̄.
    #[arg(long)]
    squared: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BundleKind {
    Dolbeault,
    Signature,
    Spinor,
    Custom,
}

#[derive(Args, Debug)]
struct CorrArgs {
    #[arg(long, conflicts_with_all = ["n", "lattice", "bundle"])]
    config: Option<PathBuf>,
    /// Complex dimension of the cusp.
    #[arg(long)]
    n: Option<usize>,
    /// Lattice type d_1,…,d_{n-1}.
    #[arg(long = "type")]
    lattice: Option<String>,
    #[arg(long, value_enum)]
    bundle: Option<BundleKind>,
    #[arg(long)]
    twist: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long)]
    dim_v_override: Option<u64>,
}

/// Invalid input or a failed check.
enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| bad(format!("invalid {what} entry {x:?}: {e}"))))
        .collect()
}

fn parse_twist(s: &str) -> Result<TwistParameter, Failure> {
    let c: Rational = s.parse()?;
    Ok(TwistParameter::new(c)?)
}

fn parse_weight(s: &str) -> Result<DominantWeight, Failure> {
    Ok(DominantWeight::new(parse_list(s, "weight")?)?)
}

fn heisenberg_inputs(a: &HeisenbergArgs) -> Result<(LatticeType, TwistParameter, HeisenbergMetric), Failure> {
    let d = LatticeType::new(parse_list(&a.lattice, "lattice type")?)?;
    if d.n() != a.heis_dim {
        return Err(bad(format!("--type has {} entries but --heis-dim is {}", d.n(), a.heis_dim)));
    }
    let c = parse_twist(&a.twist)?;
    let metric = match &a.metric {
        None => HeisenbergMetric::unit(a.heis_dim),
        Some(m) => {
            let mut r: Vec<f64> = parse_list(m, "metric")?;
            if r.len() != a.heis_dim + 1 {
                return Err(bad(format!("--metric needs {} radii r_1,…,r_n,r", a.heis_dim + 1)));
            }
            let central = r.pop().expect("non-empty");
            HeisenbergMetric::new(r, central)?
        }
    };
    if a.bundle_dim == 0 {
        return Err(bad("--bundle-dim must be positive"));
    }
    Ok((d, c, metric))
}

fn eta(a: &EtaArgs) -> Result<Output, Failure> {
    let (d, c, metric) = heisenberg_inputs(&a.heis)?;
    let dim_v = gamma_rep_data(&d, &c).dim_v * a.heis.bundle_dim;
    if let Some(check) = &a.series_check {
        let s: f64 = check[0].parse().map_err(|_| bad(format!("invalid s {:?}", check[0])))?;
        let w_max: u64 = check[1].parse().map_err(|_| bad(format!("invalid W_max {:?}", check[1])))?;
        let series = eta_series(&d, &c, dim_v, &metric, s, w_max)?;
        let closed = eta_closed_real(&d, &c, dim_v, &metric, s, 1e-15)?;
        return Ok(Output::SeriesCheck(SeriesCheckOutput {
            s: sig12(s),
            w_max,
            series: sig12(series.value),
            tail_bound: sig12(series.tail_bound),
            closed: sig12(closed.value),
            difference: sig12((series.value - closed.value).abs()),
        }));
    }
    let coefficient = eta_closed(&d, &c, dim_v, a.at_s)?;
    Ok(Output::Eta(EtaOutput { n: d.n(), d: d.entries().to_vec(), c, dim_v, s: a.at_s, r: metric.r(), coefficient }))
}

fn inline_bundle(a: &CorrArgs, n: usize) -> Result<BundleSpec, Failure> {
    let kind = a.bundle.ok_or_else(|| bad("--bundle is required without --config"))?;
    let twist = a.twist.as_deref().map(parse_twist).transpose()?;
    if a.weight.is_some() != matches!(kind, BundleKind::Custom) {
        return Err(bad("--weight is required for, and only for, --bundle custom"));
    }
    let bundle = match kind {
        BundleKind::Dolbeault | BundleKind::Signature if twist.as_ref().is_some_and(|t| !t.value().is_zero()) => {
            return Err(bad("named bundles other than spinor are untwisted"));
        }
        BundleKind::Dolbeault => BundleSpec::Dolbeault {},
        BundleKind::Signature => BundleSpec::Signature {},
        BundleKind::Spinor => BundleSpec::spinor(twist.unwrap_or_else(TwistParameter::zero))?,
        BundleKind::Custom => {
            let weight = parse_weight(a.weight.as_deref().unwrap_or_default())?;
            if weight.n() != n {
                return Err(bad(format!("--weight has {} entries for n = {n}", weight.n())));
            }
            BundleSpec::Custom {
                weight,
                twist: match twist {
                    Some(c) if !c.value().is_zero() => Twist::Nontrivial { c },
                    _ => Twist::Trivial {},
                },
                dim_v_override: a.dim_v_override,
            }
        }
    };
    Ok(bundle)
}

fn corr(a: &CorrArgs) -> Result<Output, Failure> {
    let cusps = match &a.config {
        Some(path) => load(path)?.cusp_descriptions()?,
        None => {
            let n = a.n.ok_or_else(|| bad("--n is required without --config"))?;
            let lattice = a.lattice.as_deref().ok_or_else(|| bad("--type is required without --config"))?;
            let d = LatticeType::new(parse_list(lattice, "lattice type")?)?;
            vec![CuspDescription::new(n, d, inline_bundle(a, n)?)?]
        }
    };
    let rows = cusps
        .iter()
        .map(|c| {
            Ok(CuspCorrection {
                d: c.lattice().entries().to_vec(),
                bundle: c.bundle().clone(),
                report: correction(c)?,
            })
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Output::Corr(CorrOutput { cusps: rows }))
}

fn load(path: &PathBuf) -> Result<ManifoldDescription, Failure> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("cannot read {}: {e}", path.display())))?;
    let m: ManifoldDescription =
        serde_json::from_str(&text).map_err(|e| bad(format!("invalid config {}: {e}", path.display())))?;
    m.cusp_descriptions()?;
    Ok(m)
}

fn spectrum(a: &SpectrumArgs) -> Result<Output, Failure> {
    let (d, c, metric) = heisenberg_inputs(&a.heis)?;
    let scale = a.heis.bundle_dim;
    let rows = if a.squared {
        let mut rows: Vec<SpectrumRow> = Vec::new();
        for it in dirac_sq_spectrum(&d, &c, &metric, a.cutoff)? {
            let value = sig12(it.value);
            match rows.last_mut() {
                Some(last) if last.w == it.w && last.value == value => last.multiplicity += it.multiplicity * scale,
                _ => rows.push(SpectrumRow { w: it.w, value, multiplicity: it.multiplicity * scale }),
            }
        }
        rows
    } else {
        dirac_spectrum(&d, &c, &metric, a.cutoff)?
            .into_iter()
            .map(|e| SpectrumRow { w: e.w, value: sig12(e.value), multiplicity: e.multiplicity * scale })
            .collect()
    };
    Ok(Output::Spectrum(SpectrumOutput { squared: a.squared, csv: a.csv, rows }))
}

fn kostant(n: usize, weight: &str) -> Result<Output, Failure> {
    let weight = parse_weight(weight)?;
    if weight.n() != n {
        return Err(bad(format!("--weight has {} entries for n = {n}", weight.n())));
    }
    Ok(Output::Kostant(KostantOutput { dim: weyl_dim(&weight), rows: kostant_data(&weight), weight }))
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Eta(a) => eta(a),
        Command::Corr(a) => corr(a),
        Command::Index { config } => Ok(Output::Index(index_report(&load(config)?)?)),
        Command::Spectrum(a) => spectrum(a),
        Command::Verify { only } => {
            let results = if only.is_empty() {
                verify::run_all()
            } else {
                only.iter()
                    .map(|&id| verify::run(id).ok_or_else(|| bad(format!("no criterion {id}"))))
                    .collect::<Result<_, _>>()?
            };
            Ok(Output::Verify(results))
        }
        Command::Kostant { n, weight } => kostant(*n, weight),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error: {line}");
            return ExitCode::from(1);
        }
    };
    let result = dispatch(&cli).and_then(|out| {
        print!("{}", if cli.json { out.to_json() } else { out.to_text() });
        if out.failed() {
            Err(Failure::Verification)
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("error: verification failed");
            ExitCode::from(2)
        }
    }
}
