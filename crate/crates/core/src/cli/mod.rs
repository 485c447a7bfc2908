//! The `pinchlab` command line.

pub mod selfcheck;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Tolerances;
use crate::error::Error;
use crate::scattering::{
    circle_max, cylinder_c, cylinder_scattering, maass_selberg_residual, max_norm, CMatrix, Cutoff,
};
use crate::surface::{assemble, build_pants, length_spectrum, AugmentedGraph, FNLabel, LengthSpectrum};
use crate::transform::{cylinder_trace_check, transform_roundtrip, ChainSpec, TraceConfig};
use crate::zeta::{lhp_reduction_ratio, pinch_asymptotic, zeta_factor, zeta_truncated};

/// Parses `re+imi`, `re-imi`, `re` or `imi`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}; expected re+imi");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?))
}

/// Formats as `re+imi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "pinchlab", version, about = "Spectral geometry of hyperbolic surfaces under degeneration")]
pub struct Cli {
    /// Output format; defaults to csv for an `--out` path ending in .csv, json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance for closed-form identities.
    #[arg(long, global = true)]
    pub identity_tol: Option<f64>,
    /// Tolerance for checks coupled to quadrature.
    #[arg(long, global = true)]
    pub coupled_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the pants group with the given boundary lengths.
    Pants {
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<f64>,
    },
    /// Assemble the groups of a glued surface.
    Assemble {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Closed-geodesic length spectrum up to a cutoff.
    Spectrum {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        rmax: f64,
    },
    /// Zeta factor of one geodesic, or the truncated product over a spectrum.
    Zeta {
        #[arg(long, conflicts_with_all = ["graph", "lengths"])]
        ell: Option<f64>,
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        rmax: Option<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Vec<Complex64>,
    },
    /// 𝒵 and 𝒵/𝒵_d while one edge is pinched.
    ZetaSweep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        edge: String,
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<f64>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long)]
        rmax: f64,
    },
    /// Γ(s)²𝒵_ℓ(s)e^{π²/3ℓ}ℓ^{2s-1} against its limit 2π.
    PinchAsym {
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Vec<Complex64>,
    },
    /// 𝒵_ℓ(s)ℓ^{4s-2}Γ(s)²/(𝒵_ℓ(1-s)Γ(1-s)²) against its limit 1.
    LhpRatio {
        #[arg(long, value_delimiter = ',', required = true)]
        ells: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Vec<Complex64>,
    },
    /// Approximate scattering matrices of an elementary cylinder.
    CylScatter {
        #[arg(long)]
        ell: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        /// Cut-off width; defaults to 0.3 of the collar half-width.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Maass-Selberg relation on an elementary cylinder.
    MsCheck {
        #[arg(long)]
        ell: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        sprime: Complex64,
        #[arg(long = "A")]
        a: f64,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Trace formula on an elementary cylinder.
    TraceCheck {
        #[arg(long)]
        ell: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s: Complex64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        s0: Complex64,
        #[arg(long = "A", default_value_t = 1.0)]
        a: f64,
    },
    /// Selberg transform applied twice to k(t) = (1+t)^{-2}.
    TransformRoundtrip {
        #[arg(long, default_value_t = 20.0)]
        tmax: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
    /// Run the acceptance criteria.
    Selfcheck {
        /// Criterion ids to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct SurfaceArgs {
    /// Graph JSON with Fenchel-Nielsen labels.
    #[arg(long, conflicts_with = "lengths")]
    pub graph: Option<PathBuf>,
    /// Boundary lengths of a single pair of pants.
    #[arg(long, value_delimiter = ',')]
    pub lengths: Option<Vec<f64>>,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// A command's result: JSON body, CSV table and, for checks, the verdict.
struct Report {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    pass: Option<bool>,
}

impl Report {
    fn new(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            pass: None,
        }
    }

    /// A key/value table flattened from the JSON body.
    fn flat(json: Value) -> Self {
        let mut rows = Vec::new();
        flatten("", &json, &mut rows);
        Report {
            json,
            header: vec!["key".into(), "value".into()],
            rows,
            pass: None,
        }
    }

    fn verdict(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        if let Value::Object(m) = &mut self.json {
            m.insert("pass".into(), Value::Bool(pass));
        }
        if self.header == ["key", "value"] {
            self.rows.push(vec!["pass".into(), pass.to_string()]);
        }
        self
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, rows);
            }
        }
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            let re = a[0].as_f64().unwrap_or(f64::NAN);
            let im = a[1].as_f64().unwrap_or(f64::NAN);
            rows.push(vec![prefix.to_string(), format_complex(Complex64::new(re, im))]);
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, rows);
            }
        }
        Value::String(s) => rows.push(vec![prefix.to_string(), s.clone()]),
        other => rows.push(vec![prefix.to_string(), other.to_string()]),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn matrix_json(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    to_json(&rows)
}

fn cz(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn read_graph(path: &Path) -> Outcome<(AugmentedGraph, FNLabel)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read graph file {}: {e}", path.display())))?;
    Ok(AugmentedGraph::from_json(&text)?)
}

fn surface_from(args: &SurfaceArgs) -> Outcome<(AugmentedGraph, FNLabel)> {
    match (&args.graph, &args.lengths) {
        (Some(p), _) => read_graph(p),
        (None, Some(l)) if l.len() == 3 => Ok(AugmentedGraph::pants([l[0], l[1], l[2]])),
        (None, Some(l)) => Err(Failure::Usage(format!("--lengths needs three values, got {}", l.len()))),
        (None, None) => Err(Failure::Usage("give --graph or --lengths".into())),
    }
}

fn spectrum_of(args: &SurfaceArgs, rmax: f64, tol: &Tolerances) -> Outcome<LengthSpectrum> {
    let (g, l) = surface_from(args)?;
    let surface = assemble(&g, &l)?;
    Ok(length_spectrum(&surface, rmax, tol.dedup)?)
}

fn is_pole(e: &Error) -> bool {
    matches!(e, Error::Pole { .. } | Error::PoleProximity { .. } | Error::SingularMatrix { .. })
}

fn cutoff_for(ell: f64, eps: Option<f64>) -> Outcome<Cutoff> {
    Ok(match eps {
        Some(e) => Cutoff::new(e)?,
        None => Cutoff::default_for(ell),
    })
}

fn pants_cmd(lengths: &[f64]) -> Outcome<Report> {
    if lengths.len() != 3 {
        return Err(Failure::Usage(format!("--lengths needs three values, got {}", lengths.len())));
    }
    let p = build_pants(lengths[0], lengths[1], lengths[2])?;
    let mut rows = Vec::new();
    let mut translation = Vec::new();
    for (i, g) in p.gamma.iter().enumerate() {
        let t = g.translation_length().ok();
        translation.push(t);
        let m = g.to_rows();
        rows.push(vec![
            (i + 1).to_string(),
            p.lengths[i].to_string(),
            t.map_or("cusp".into(), |t| t.to_string()),
            m[0][0].to_string(),
            m[0][1].to_string(),
            m[1][0].to_string(),
            m[1][1].to_string(),
        ]);
    }
    let json = json!({
        "lengths": p.lengths,
        "generators": p.gamma.iter().map(|g| g.to_rows()).collect::<Vec<_>>(),
        "translation_lengths": translation,
        "relation_residual": p.relation_residual(),
        "hexagon": to_json(&p.hexagon),
    });
    Ok(Report::new(json, &["generator", "length", "translation_length", "a", "b", "c", "d"], rows))
}

fn spectrum_cmd(args: &SurfaceArgs, rmax: f64, tol: &Tolerances) -> Outcome<Report> {
    let sp = spectrum_of(args, rmax, tol)?;
    let rows = sp
        .entries
        .iter()
        .map(|e| {
            vec![
                e.length.to_string(),
                e.multiplicity.to_string(),
                e.primitive.to_string(),
                e.words.join(" "),
            ]
        })
        .collect();
    Ok(Report::new(to_json(&sp), &["length", "multiplicity", "primitive", "word"], rows))
}

fn zeta_cmd(
    ell: Option<f64>,
    surface: &SurfaceArgs,
    rmax: Option<f64>,
    s: &[Complex64],
    tol: &Tolerances,
) -> Outcome<Report> {
    let values = match ell {
        Some(ell) => s
            .iter()
            .map(|&z| Ok(zeta_factor(ell, z, tol.series)?))
            .collect::<Outcome<Vec<_>>>()?,
        None => {
            let rmax = rmax.ok_or_else(|| Failure::Usage("--rmax is required with a surface".into()))?;
            let sp = spectrum_of(surface, rmax, tol)?;
            s.iter()
                .map(|&z| Ok(zeta_truncated(&sp, z, tol.series)?))
                .collect::<Outcome<Vec<_>>>()?
        }
    };
    let rows = s
        .iter()
        .zip(&values)
        .map(|(z, v)| vec![format_complex(*z), format_complex(v.value), v.error_bound.to_string()])
        .collect();
    let json = json!({
        "ell": ell,
        "points": s.iter().zip(&values).map(|(z, v)| json!({"s": cz(*z), "value": cz(v.value), "log_value": cz(v.log_value), "error_bound": v.error_bound, "terms": v.terms})).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, &["s", "value", "error_bound"], rows))
}

fn zeta_sweep_cmd(
    graph: &Path,
    edge: &str,
    ells: &[f64],
    s: Complex64,
    rmax: f64,
    tol: &Tolerances,
) -> Outcome<Report> {
    let (g, base) = read_graph(graph)?;
    let index = g
        .edge_index(edge)
        .ok_or_else(|| Failure::Usage(format!("graph has no edge {edge:?}")))?;
    let tau = base.tau[index];
    let results = ells
        .par_iter()
        .map(|&ell| {
            let mut label = base.clone();
            label.set(&g, index, ell, tau);
            let surface = assemble(&g, &label)?;
            let sp = length_spectrum(&surface, rmax, tol.dedup)?;
            let z = zeta_truncated(&sp, s, tol.series)?;
            let zd = zeta_factor(ell, s, tol.series)?;
            Ok((ell, z, z.value / zd.value))
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let rows = results
        .iter()
        .map(|(ell, z, q)| {
            vec![
                ell.to_string(),
                s.re.to_string(),
                s.im.to_string(),
                z.value.re.to_string(),
                z.value.im.to_string(),
                z.error_bound.to_string(),
                q.re.to_string(),
                q.im.to_string(),
            ]
        })
        .collect();
    let json = json!({
        "edge": edge,
        "s": cz(s),
        "rmax": rmax,
        "points": results.iter().map(|(ell, z, q)| json!({"ell": ell, "zeta": cz(z.value), "error_bound": z.error_bound, "quotient": cz(*q)})).collect::<Vec<_>>(),
    });
    Ok(Report::new(
        json,
        &["ell", "s_re", "s_im", "value_re", "value_im", "err_bound", "quotient_re", "quotient_im"],
        rows,
    ))
}

fn grid_cmd(
    ells: &[f64],
    s: &[Complex64],
    f: impl Fn(f64, Complex64) -> crate::Result<Complex64> + Sync,
    target: Complex64,
) -> Outcome<Report> {
    let points: Vec<(f64, Complex64)> = s.iter().flat_map(|&z| ells.iter().map(move |&l| (l, z))).collect();
    let values = points
        .par_iter()
        .map(|&(l, z)| f(l, z))
        .collect::<crate::Result<Vec<_>>>()?;
    let rows = points
        .iter()
        .zip(&values)
        .map(|((l, z), v)| {
            vec![
                l.to_string(),
                format_complex(*z),
                format_complex(*v),
                ((v - target).norm() / target.norm()).to_string(),
            ]
        })
        .collect();
    let json = json!({
        "limit": cz(target),
        "points": points.iter().zip(&values).map(|((l, z), v)| json!({"ell": l, "s": cz(*z), "value": cz(*v), "relative_deviation": (v - target).norm() / target.norm()})).collect::<Vec<_>>(),
    });
    Ok(Report::new(json, &["ell", "s", "value", "relative_deviation"], rows))
}

fn circle<F: Fn(Complex64) -> crate::Result<f64>>(s: Complex64, f: F) -> crate::Result<f64> {
    circle_max(s, selfcheck::POLE_CIRCLE_RADIUS, selfcheck::POLE_CIRCLE_POINTS, f)
}

fn cyl_scatter_cmd(ell: f64, s: Complex64, eps: Option<f64>, tol: &Tolerances) -> Outcome<Report> {
    let k = cutoff_for(ell, eps)?;
    let report = match cylinder_scattering(ell, s, k) {
        Ok(out) => {
            let p = &out.pair;
            let dcalc = p.dcalc_residual()?;
            let (sym, comm) = (p.symmetry_residual(), p.commutation_residual());
            let pass = dcalc < tol.quadrature_coupled && sym < tol.identity && comm < tol.quadrature_coupled;
            Report::flat(json!({
                "ell": ell, "s": cz(s), "eps": k.eps, "method": "direct",
                "c": matrix_json(&p.c), "d": matrix_json(&p.d),
                "dcalc_residual": dcalc, "symmetry_residual": sym, "commutation_residual": comm,
                "constancy": out.constancy,
            }))
            .verdict(pass)
        }
        Err(e) if is_pole(&e) => {
            let c = cylinder_c(ell, s, k)?;
            let sym = max_norm(&(&c - c.transpose()));
            let dcalc = circle(s, |z| cylinder_scattering(ell, z, k)?.pair.dcalc_residual())?;
            let comm = circle(s, |z| Ok(cylinder_scattering(ell, z, k)?.pair.commutation_residual()))?;
            let pass = dcalc < tol.quadrature_coupled && sym < tol.identity && comm < tol.quadrature_coupled;
            Report::flat(json!({
                "ell": ell, "s": cz(s), "eps": k.eps, "method": "circle_bound",
                "circle_radius": selfcheck::POLE_CIRCLE_RADIUS,
                "c": matrix_json(&c), "d": Value::Null,
                "dcalc_residual": dcalc, "symmetry_residual": sym, "commutation_residual": comm,
            }))
            .verdict(pass)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(report)
}

fn ms_check_cmd(ell: f64, s: Complex64, sprime: Complex64, a: f64, eps: Option<f64>, tol: &Tolerances) -> Outcome<Report> {
    let k = cutoff_for(ell, eps)?;
    let quad = tol.quadrature;
    let report = match maass_selberg_residual(ell, s, sprime, a, k, quad) {
        Ok(r) => Report::flat(json!({
            "ell": ell, "s": cz(s), "sprime": cz(sprime), "A": a, "eps": k.eps, "method": "direct",
            "lhs": matrix_json(&r.lhs), "rhs": matrix_json(&r.rhs), "residual": r.residual,
            "tolerance": tol.quadrature_coupled,
        }))
        .verdict(r.residual < tol.quadrature_coupled),
        Err(e) if is_pole(&e) => {
            let bound = circle(s, |z| Ok(maass_selberg_residual(ell, z, sprime, a, k, quad)?.residual))?;
            Report::flat(json!({
                "ell": ell, "s": cz(s), "sprime": cz(sprime), "A": a, "eps": k.eps, "method": "circle_bound",
                "circle_radius": selfcheck::POLE_CIRCLE_RADIUS, "residual": bound,
                "tolerance": tol.quadrature_coupled,
            }))
            .verdict(bound < tol.quadrature_coupled)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(report)
}

fn trace_check_cmd(ell: f64, s: Complex64, s0: Complex64, a: f64, tol: &Tolerances) -> Outcome<Report> {
    let r = cylinder_trace_check(ell, &TraceConfig::new(s, s0, a)?)?;
    Ok(Report::flat(to_json(&r)).verdict(r.residual < tol.quadrature_coupled))
}

fn roundtrip_cmd(tmax: f64, points: usize, tol: &Tolerances) -> Outcome<Report> {
    if !(tmax >= 0.0) || points < 2 {
        return Err(Failure::Usage("need --tmax ≥ 0 and at least two points".into()));
    }
    let ts: Vec<f64> = (0..points).map(|i| tmax * i as f64 / (points - 1) as f64).collect();
    let r = transform_roundtrip(selfcheck::inverse_square_kernel(), 1.0, 1.0, &ts, ChainSpec::default())?;
    let rows = r
        .points
        .iter()
        .map(|p| {
            vec![
                p.t.to_string(),
                format_complex(p.k),
                format_complex(p.k_round_trip),
                (p.k - p.k_round_trip).norm().to_string(),
            ]
        })
        .collect();
    let pass = r.sup_residual < tol.quadrature_coupled;
    Ok(Report::new(to_json(&r), &["t", "k", "k_round_trip", "residual"], rows).verdict(pass))
}

fn selfcheck_cmd(only: &[usize]) -> Outcome<Report> {
    let ids: Vec<usize> = if only.is_empty() { (1..=12).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
        return Err(Failure::Usage(format!("criterion ids run from 1 to 12, got {bad}")));
    }
    let results: Vec<_> = ids.iter().map(|&i| selfcheck::run_criterion(i)).collect();
    for c in &results {
        eprintln!("{}", c.line());
    }
    let rows = results
        .iter()
        .map(|c| vec![c.id.to_string(), c.title.to_string(), c.pass.to_string(), c.detail.clone()])
        .collect();
    let pass = results.iter().all(|c| c.pass);
    Ok(Report::new(json!({ "criteria": to_json(&results) }), &["id", "title", "pass", "detail"], rows).verdict(pass))
}

fn dispatch(cli: &Cli, tol: &Tolerances) -> Outcome<Report> {
    match &cli.command {
        Command::Pants { lengths } => pants_cmd(lengths),
        Command::Assemble { graph } => {
            let (g, l) = read_graph(graph)?;
            Ok(Report::flat(to_json(&assemble(&g, &l)?)))
        }
        Command::Spectrum { surface, rmax } => spectrum_cmd(surface, *rmax, tol),
        Command::Zeta { ell, surface, rmax, s } => zeta_cmd(*ell, surface, *rmax, s, tol),
        Command::ZetaSweep { graph, edge, ells, s, rmax } => zeta_sweep_cmd(graph, edge, ells, *s, *rmax, tol),
        Command::PinchAsym { ells, s } => grid_cmd(ells, s, pinch_asymptotic, Complex64::new(2.0 * std::f64::consts::PI, 0.0)),
        Command::LhpRatio { ells, s } => grid_cmd(ells, s, lhp_reduction_ratio, Complex64::new(1.0, 0.0)),
        Command::CylScatter { ell, s, eps } => cyl_scatter_cmd(*ell, *s, *eps, tol),
        Command::MsCheck { ell, s, sprime, a, eps } => ms_check_cmd(*ell, *s, *sprime, *a, *eps, tol),
        Command::TraceCheck { ell, s, s0, a } => trace_check_cmd(*ell, *s, *s0, *a, tol),
        Command::TransformRoundtrip { tmax, points } => roundtrip_cmd(*tmax, *points, tol),
        Command::Selfcheck { only } => selfcheck_cmd(only),
    }
}

fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&report.json)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.header).map_err(|e| e.to_string())?;
            for row in &report.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("PINCHLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // Fails only if the global pool already exists, in which case it is kept.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the command line; returns the process exit status (0 success,
/// 1 computation or check failure, 2 usage error).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = Cli::command()
        .mut_subcommands(|c| c.allow_negative_numbers(true))
        .try_get_matches_from(args)
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let mut tol = Tolerances::default();
    if let Some(v) = cli.identity_tol {
        tol.identity = v;
    }
    if let Some(v) = cli.coupled_tol {
        tol.quadrature_coupled = v;
    }
    if let Err(e) = tol.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    let out = cli.out.as_deref();
    let format = cli.format.unwrap_or(match out.and_then(Path::extension) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    });
    match dispatch(&cli, &tol) {
        Ok(report) => {
            let text = match render(&report, format) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            if let Err(e) = emit(&text, out) {
                eprintln!("error: {e}");
                return 1;
            }
            match report.pass {
                Some(false) => 1,
                _ => 0,
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Compute(e)) => {
            let body = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            let text = serde_json::to_string_pretty(&body).expect("error JSON serializes") + "\n";
            if emit(&text, out).is_err() {
                print!("{text}");
            }
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        for (text, z) in [
            ("2+0i", Complex64::new(2.0, 0.0)),
            ("1.5-0.25i", Complex64::new(1.5, -0.25)),
            ("-3", Complex64::new(-3.0, 0.0)),
            ("0.5i", Complex64::new(0.0, 0.5)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("1e-3+2E+1i", Complex64::new(1e-3, 20.0)),
        ] {
            assert_eq!(parse_complex(text).unwrap(), z, "{text}");
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert!(parse_complex("2+x").is_err());
        assert_eq!(format_complex(Complex64::new(0.3, -0.5)), "0.3-0.5i");
    }

    #[test]
    fn flatten_marks_pairs_as_complex() {
        let mut rows = Vec::new();
        flatten("", &json!({"a": [1.0, -2.0], "b": {"c": true}}), &mut rows);
        assert_eq!(rows, vec![vec!["a".to_string(), "1-2i".to_string()], vec!["b.c".to_string(), "true".to_string()]]);
    }
}
