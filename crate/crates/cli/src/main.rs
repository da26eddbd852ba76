mod json;
mod mesh;
mod report;
mod spec;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crosscap::normalform::reduce_with_tol;
use crosscap::ruled::classify_singularity_with_tol;
use crosscap::surface::first_form;
use serde::Serialize;

use report::{ClassifyReport, DeformReport, InvariantReport, MemberReport};
use spec::{SurfaceSpec, Variant};

const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("{0}")]
    Io(String),
}

impl From<crosscap::Error> for CliError {
    fn from(e: crosscap::Error) -> Self {
        CliError::Math(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Math(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "crosscap",
    version,
    about = "Cross cap normal forms, invariants and isometric deformations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Surface, family or ruled surface spec (JSON)
    spec: PathBuf,
    /// Write the structured report (or OBJ mesh) here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Jet order, overriding the spec
    #[arg(long)]
    order: Option<usize>,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal form and invariants of a cross cap
    Analyze(Common),
    /// Members of an isometric deformation family
    Deform {
        #[command(flatten)]
        common: Common,
        /// Comma-separated curvature values, e.g. 0,1,3
        #[arg(long, allow_hyphen_values = true)]
        kappas: String,
    },
    /// Singularity class of a ruled surface
    Classify(Common),
    /// Wavefront OBJ mesh over the spec's domain
    Mesh {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
    /// Polar limits of the mean and Gaussian curvature
    Asymptotics(Common),
}

fn tolerance() -> Result<f64, CliError> {
    match std::env::var("CROSSCAP_TOL") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_TOL),
        Err(e) => Err(CliError::Usage(format!("CROSSCAP_TOL: {e}"))),
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Usage(format!(
                "CROSSCAP_TOL: expected a positive number, got {s:?}"
            ))),
        },
    }
}

fn parse_kappas(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect();
    if parts.is_empty() {
        return Err(CliError::Usage(
            "--kappas: at least one value is required".into(),
        ));
    }
    parts
        .iter()
        .map(|p| match p.parse::<f64>() {
            Ok(k) if k.is_finite() => Ok(k),
            _ => Err(CliError::Usage(format!("--kappas: invalid number {p:?}"))),
        })
        .collect()
}

fn subject(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// JSON to stdout with `--json`, text otherwise; JSON to `--out` if given.
fn emit<T: Serialize>(
    c: &Common,
    value: &T,
    text: impl FnOnce() -> String,
) -> Result<(), CliError> {
    let doc = json::to_string(value);
    if let Some(out) = &c.out {
        write_file(out, &doc)?;
    }
    if c.json {
        print!("{doc}");
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn load(c: &Common) -> Result<SurfaceSpec, CliError> {
    SurfaceSpec::load(&c.spec)?.with_order(c.order)
}

fn g(x: f64) -> String {
    format!("{x:>24.16e}")
}

fn analyze_text(r: &InvariantReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "subject        {}", r.subject);
    let _ = writeln!(s, "order          {}", r.order);
    let _ = writeln!(s, "tolerance      {:e}", r.tolerance);
    let _ = writeln!(s, "delta        {}", g(r.crosscap.delta));
    let _ = writeln!(s, "residual     {}", g(r.normal_form.residual));
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<12} {:>24} {:>24}", "invariant", "map", "metric");
    let (m, q) = (&r.intrinsic.map, &r.intrinsic.metric);
    for (name, a, b) in [
        ("a02", m.a02, q.a02),
        ("a20", m.a20, q.a20),
        ("a11", m.a11, q.a11),
        ("delta^2", m.delta_sq, q.delta_sq),
    ] {
        let _ = writeln!(s, "{name:<12} {} {}", g(a), g(b));
    }
    let _ = writeln!(
        s,
        "{:<12} {}",
        "discrepancy",
        g(r.intrinsic.max_discrepancy)
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "{:<12} {}", "a12", g(r.extrinsic.a12));
    let _ = writeln!(s, "{:<12} {}", "a03", g(r.extrinsic.a03));
    let _ = writeln!(s, "{:<12} {}", "b3", g(r.extrinsic.b3));
    if let Some(c) = &r.combos {
        for (name, v) in [("c1", c.c1), ("c2", c.c2), ("c3", c.c3), ("c4", c.c4)] {
            let _ = writeln!(s, "{name:<12} {}", g(v));
        }
    }
    let _ = writeln!(s);
    let cl = &r.classification;
    let _ = writeln!(s, "sign           {}", cl.sign);
    let _ = writeln!(s, "focal conic    {}", r.focal_conic.kind);
    let _ = writeln!(s, "degenerate     {}", cl.degenerate);
    let _ = writeln!(s, "quadratic      {}", cl.quadratic);
    let _ = writeln!(s, "normal         {}", cl.normal);
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<8} {:>24} {:>24} {:>6}",
        "theta", "lim r^2 H", "lim r^2 K", "ok"
    );
    for a in &r.asymptotics {
        let _ = writeln!(
            s,
            "{:<8.4} {} {} {:>6}",
            a.theta,
            g(a.h.leading),
            g(a.k.leading),
            a.passed
        );
    }
    s
}

fn cmd_analyze(c: &Common, tol: f64) -> Result<(), CliError> {
    let spec = load(c)?;
    let f = spec.surface()?;
    let (r, _) = report::analyze(&subject(&c.spec), &f, spec.order, tol)?;
    emit(c, &r, || analyze_text(&r))
}

fn cmd_deform(c: &Common, kappas: &str, tol: f64) -> Result<(), CliError> {
    let kappas = parse_kappas(kappas)?;
    let spec = load(c)?;
    if !matches!(spec.variant, Variant::Circle(_) | Variant::Spherical(_)) {
        return Err(CliError::Usage(format!(
            "deform needs a circle_deformation or spherical_deformation spec, got {}",
            spec.variant.name()
        )));
    }
    let name = subject(&c.spec);
    let base_fam = spec.family(None)?.expect("deformation spec");
    let base = base_fam.base(spec.order).with_domain(spec.domain);
    let base_nf = reduce_with_tol(&base, spec.order, tol)?;
    let base_ff = first_form(&base);
    let mut members = Vec::new();
    let mut forms = Vec::new();
    for &k in &kappas {
        let fam = spec.family(Some(k))?.expect("deformation spec");
        let f = fam.build_crosscap_on(spec.order, spec.domain)?;
        let (report, nf) = report::analyze(&format!("{name} kappa={k}"), &f, spec.order, tol)?;
        let ff = first_form(&f);
        members.push(MemberReport {
            kappa: k,
            base_metric_deviation: ff.max_abs_diff(&base_ff),
            base_normal_form_deviation: nf.max_coeff_diff(&base_nf, spec.order),
            report,
        });
        forms.push(ff);
    }
    let matrix: Vec<Vec<f64>> = forms
        .iter()
        .map(|a| forms.iter().map(|b| a.max_abs_diff(b)).collect())
        .collect();
    let max_deviation = matrix.iter().flatten().fold(0.0f64, |m, &x| m.max(x));
    let r = DeformReport {
        subject: name,
        kappas,
        members,
        deviation_matrix: matrix,
        max_deviation,
        isometric: max_deviation < tol,
    };
    emit(c, &r, || {
        let mut s = String::new();
        let _ = writeln!(s, "subject        {}", r.subject);
        let _ = writeln!(
            s,
            "{:<10} {:>24} {:>24} {:>24} {:>24} {:>24}",
            "kappa", "a12", "a03", "b3", "metric dev", "nf dev"
        );
        for m in &r.members {
            let e = &m.report.extrinsic;
            let _ = writeln!(
                s,
                "{:<10} {} {} {} {} {}",
                m.kappa,
                g(e.a12),
                g(e.a03),
                g(e.b3),
                g(m.base_metric_deviation),
                g(m.base_normal_form_deviation)
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "pairwise metric deviation");
        for row in &r.deviation_matrix {
            let cells: Vec<String> = row.iter().map(|&x| format!("{x:>10.2e}")).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        let _ = writeln!(s, "isometric      {}", r.isometric);
        s
    })
}

fn cmd_classify(c: &Common, tol: f64) -> Result<(), CliError> {
    let spec = load(c)?;
    let Some(rs) = spec.ruled()? else {
        return Err(CliError::Usage(format!(
            "classify needs a ruled or deformation spec, got {}",
            spec.variant.name()
        )));
    };
    let r = ClassifyReport {
        subject: subject(&c.spec),
        class: classify_singularity_with_tol(&rs, tol).as_str().into(),
    };
    emit(c, &r, || format!("{}\n", r.class))
}

fn cmd_mesh(c: &Common, resolution: usize) -> Result<(), CliError> {
    if resolution == 0 {
        return Err(CliError::Usage("--resolution must be at least 1".into()));
    }
    let spec = load(c)?;
    let text = mesh::obj(&spec.surface()?, resolution)?;
    match &c.out {
        Some(out) => write_file(out, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_asymptotics(c: &Common) -> Result<(), CliError> {
    let spec = load(c)?;
    let r = report::asymptotics(&subject(&c.spec), &spec.surface()?)?;
    emit(c, &r, || {
        let mut s = String::new();
        let _ = writeln!(s, "subject        {}", r.subject);
        let _ = writeln!(s, "min A_theta  {}", g(r.a_theta_min));
        let _ = writeln!(
            s,
            "{:<8} {:>24} {:>24} {:>24} {:>24} {:>6}",
            "theta", "lead r^2 H", "fit r^2 H", "lead r^2 K", "fit r^2 K", "ok"
        );
        for a in &r.rays {
            let _ = writeln!(
                s,
                "{:<8.4} {} {} {} {} {:>6}",
                a.theta,
                g(a.h.leading),
                g(a.h.extrapolated),
                g(a.k.leading),
                g(a.k.extrapolated),
                a.passed
            );
        }
        for gap in &r.gaps {
            let _ = writeln!(
                s,
                "gap {:<6.4} lead {} fit {} ok {}",
                gap.theta,
                g(gap.gap.leading),
                g(gap.gap.extrapolated),
                gap.passed
            );
        }
        let _ = writeln!(s, "passed         {}", r.passed);
        s
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = tolerance()?;
    match &cli.command {
        Command::Analyze(c) => cmd_analyze(c, tol),
        Command::Deform { common, kappas } => cmd_deform(common, kappas, tol),
        Command::Classify(c) => cmd_classify(c, tol),
        Command::Mesh { common, resolution } => cmd_mesh(common, *resolution),
        Command::Asymptotics(c) => cmd_asymptotics(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crosscap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
