use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use hypertwist::config::{Command, RunConfig};
use hypertwist::fuchsian::{bolza_group, sample_domain, shell_table, systole};
use hypertwist::output::{write_csv, write_json, Cell, Metadata};
use hypertwist::radialform::{mu_factor, primitive_on_domain, supnorm_bound_check, PrimitiveField};
use hypertwist::surfmesh::{combine, exterior_calculus, form_norms, harmonic_basis, write_mesh, SurfaceMesh};
use hypertwist::traceweyl::{geometric_side, trace_report, GeometricOptions, weyl_report};
use hypertwist::twistedop::{assemble_twisted, compute_spectrum, structure_report, SpectrumOptions};
use hypertwist::verify::{verify_all, VerifyProfile};
use hypertwist::{Error, Point};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable with the worker thread count (speed only).
const THREADS_ENV: &str = "HYPERTWIST_THREADS";

#[derive(Parser)]
#[command(name = "hypertwist", version, about = "Twisted Laplacian experiments on the Bolza surface")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Triangulate the octagon and write the mesh file.
    Mesh(Opts),
    /// Harmonic basis diagnostics and the configured form as an edge cochain.
    Forms(Opts),
    /// Lattice-point shell counts at a basepoint.
    Lattice(Opts),
    /// Low spectrum of the twisted operator.
    Spectrum(Opts),
    /// Both sides of the heat-trace identity.
    Trace(Opts),
    /// Weyl count against the main term.
    Weyl(Opts),
    /// Radial averaging identity and the sup-norm bound.
    Radial(Opts),
    /// Run every acceptance check; exits nonzero on any failure.
    VerifyAll(Opts),
}

/// Every flag maps to the config key of the same name (dashes become
/// underscores); flags override the config file.
#[derive(Args, Clone, Default)]
#[command(allow_negative_numbers = true)]
struct Opts {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    level: Option<String>,
    #[arg(long)]
    h: Option<String>,
    /// Heat times, comma separated.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// `auto` (4000 c h) or a value.
    #[arg(long)]
    delta: Option<String>,
    /// Four periods, comma separated.
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    quad_level: Option<String>,
    #[arg(long)]
    tail_tol: Option<String>,
    #[arg(long)]
    radial_quad_level: Option<String>,
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    lattice_radius: Option<String>,
    /// `x,y` in the upper half-plane.
    #[arg(long)]
    basepoint: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// `dense` or `iterative`.
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    count: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

impl Opts {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let flags = [
            ("level", &self.level),
            ("h", &self.h),
            ("t", &self.t),
            ("a", &self.a),
            ("b", &self.b),
            ("delta", &self.delta),
            ("form", &self.form),
            ("quad_level", &self.quad_level),
            ("tail_tol", &self.tail_tol),
            ("radial_quad_level", &self.radial_quad_level),
            ("radius", &self.radius),
            ("lattice_radius", &self.lattice_radius),
            ("basepoint", &self.basepoint),
            ("samples", &self.samples),
            ("solver", &self.solver),
            ("count", &self.count),
            ("tol", &self.tol),
            ("seed", &self.seed),
            ("out", &self.out),
        ];
        flags.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect()
    }
}

fn build_config(command: Command, opts: &Opts) -> hypertwist::Result<RunConfig> {
    let mut cfg = RunConfig { command, ..Default::default() };
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path)?;
        cfg.apply_text(&text)?;
        cfg.command = command;
    }
    for (k, v) in opts.pairs() {
        cfg.set(k, &v)?;
    }
    for kv in &opts.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig { key: kv.clone(), message: "expected KEY=VALUE".into() })?;
        if k.trim() == "command" {
            return Err(Error::InvalidConfig { key: "command".into(), message: "set by the subcommand".into() });
        }
        cfg.set(k.trim(), v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::Mesh(o) => (Command::Mesh, o),
        Cmd::Forms(o) => (Command::Forms, o),
        Cmd::Lattice(o) => (Command::Lattice, o),
        Cmd::Spectrum(o) => (Command::Spectrum, o),
        Cmd::Trace(o) => (Command::Trace, o),
        Cmd::Weyl(o) => (Command::Weyl, o),
        Cmd::Radial(o) => (Command::Radial, o),
        Cmd::VerifyAll(o) => (Command::VerifyAll, o),
    };
    let cfg = match build_config(command, opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = set_threads() {
        eprintln!("usage error: {e}");
        return ExitCode::from(2);
    }
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn set_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV} must be a thread count, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Runs the configured experiment; `Ok(false)` reports failed checks.
fn run(cfg: &RunConfig) -> anyhow::Result<bool> {
    let out = Path::new(&cfg.out);
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    match cfg.command {
        Command::Mesh => run_mesh(cfg, out),
        Command::Forms => run_forms(cfg, out),
        Command::Lattice => run_lattice(cfg, out),
        Command::Spectrum => run_spectrum(cfg, out),
        Command::Trace => run_trace(cfg, out),
        Command::Weyl => run_weyl(cfg, out),
        Command::Radial => run_radial(cfg, out),
        Command::VerifyAll => run_verify(cfg, out),
    }
}

fn report(path: PathBuf) -> PathBuf {
    println!("wrote {}", path.display());
    path
}

#[derive(Serialize)]
struct MeshSummary {
    level: usize,
    cut_vertices: usize,
    vertices: usize,
    edges: usize,
    triangles: usize,
    euler_characteristic: i64,
    area: f64,
    mesh_file: String,
    warnings: Vec<String>,
}

fn run_mesh(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let mesh = SurfaceMesh::build(cfg.level)?;
    let name = format!("mesh_L{}.txt", cfg.level);
    let mut file = std::io::BufWriter::new(std::fs::File::create(out.join(&name))?);
    write_mesh(&mesh, &mut file)?;
    drop(file);
    report(out.join(&name));
    let summary = MeshSummary {
        level: mesh.level,
        cut_vertices: mesh.local_pos.len(),
        vertices: mesh.num_vertices(),
        edges: mesh.num_edges(),
        triangles: mesh.num_triangles(),
        euler_characteristic: mesh.euler_characteristic(),
        area: mesh.total_area(),
        mesh_file: name,
        warnings: mesh.warnings.clone(),
    };
    write_json(&report(out.join("mesh.json")), &Metadata::new(cfg), &summary)?;
    Ok(true)
}

#[derive(Serialize)]
struct FormSummary {
    index: usize,
    periods: [f64; 4],
    l2_norm: f64,
    linf_norm: f64,
    codifferential_residual: f64,
}

#[derive(Serialize)]
struct FormsReport {
    level: usize,
    basis: Vec<FormSummary>,
    form_periods: [f64; 4],
    form_l2_norm: f64,
    form_linf_norm: f64,
}

fn run_forms(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let mesh = SurfaceMesh::build(cfg.level)?;
    let ext = exterior_calculus(&mesh);
    let basis = harmonic_basis(&mesh, &ext)?;
    let w = combine(&basis, &cfg.form);
    let (l2, linf) = form_norms(&mesh, &w);
    let meta = Metadata::new(cfg).with_form_scale(cfg, linf);
    let rows: Vec<Vec<Cell>> = w.iter().enumerate().map(|(e, v)| vec![e.into(), (*v).into()]).collect();
    write_csv(&report(out.join("form.csv")), &meta, &["edge_id", "value"], &rows)?;
    let basis_rows: Vec<Vec<Cell>> = (0..mesh.num_edges())
        .map(|e| {
            let mut r: Vec<Cell> = vec![e.into()];
            r.extend(basis.iter().map(|b| Cell::from(b.cochain[e])));
            r
        })
        .collect();
    write_csv(&report(out.join("basis.csv")), &meta, &["edge_id", "basis0", "basis1", "basis2", "basis3"], &basis_rows)?;
    let rep = FormsReport {
        level: cfg.level,
        basis: basis
            .iter()
            .enumerate()
            .map(|(index, b)| FormSummary {
                index,
                periods: b.periods,
                l2_norm: b.l2_norm,
                linf_norm: b.linf_norm,
                codifferential_residual: b.codifferential_residual,
            })
            .collect(),
        form_periods: cfg.form,
        form_l2_norm: l2,
        form_linf_norm: linf,
    };
    write_json(&report(out.join("forms.json")), &meta, &rep)?;
    Ok(true)
}

#[derive(Serialize)]
struct LatticeReport {
    basepoint: [f64; 2],
    radius: f64,
    injectivity_at_base: f64,
    systole: f64,
    total: usize,
    counts: Vec<usize>,
    violations: Vec<usize>,
}

fn run_lattice(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let gens = bolza_group::<f64>();
    let x = Point::new(cfg.basepoint[0], cfg.basepoint[1])?;
    let tab = shell_table(&gens, &x, cfg.lattice_radius)?;
    let meta = Metadata::new(cfg);
    let rows: Vec<Vec<Cell>> = (0..tab.counts.len())
        .map(|r| vec![r.into(), tab.counts[r].into(), tab.cosh_bounds[r].into(), tab.exp_bounds[r].into()])
        .collect();
    write_csv(&report(out.join("lattice.csv")), &meta, &["shell", "count", "cosh_bound", "exp_bound"], &rows)?;
    let rep = LatticeReport {
        basepoint: cfg.basepoint,
        radius: cfg.lattice_radius,
        injectivity_at_base: tab.inj_at_base,
        systole: systole(&gens, 4.0)?,
        total: tab.total,
        counts: tab.counts.clone(),
        violations: tab.violations(),
    };
    write_json(&report(out.join("lattice.json")), &meta, &rep)?;
    Ok(rep.violations.is_empty())
}

fn twisted_operator(cfg: &RunConfig) -> anyhow::Result<(SurfaceMesh, Vec<f64>, hypertwist::twistedop::TwistedOperator)> {
    let mesh = SurfaceMesh::build(cfg.level)?;
    let ext = exterior_calculus(&mesh);
    let basis = harmonic_basis(&mesh, &ext)?;
    let w = combine(&basis, &cfg.form);
    let op = assemble_twisted(&mesh, &w, cfg.h)?;
    Ok((mesh, w, op))
}

fn spectrum_options(cfg: &RunConfig) -> SpectrumOptions {
    SpectrumOptions { mode: cfg.solver, tol: cfg.tol, seed: cfg.seed, ..Default::default() }
}

fn run_spectrum(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let (_, _, op) = twisted_operator(cfg)?;
    let count = if cfg.count == 0 { op.dim() } else { cfg.count.min(op.dim()) };
    let spec = compute_spectrum(&op, count, &spectrum_options(cfg))?;
    let structure = structure_report(&spec, op.linf, cfg.b, cfg.tol);
    let meta = Metadata::new(cfg).with_form_scale(cfg, op.linf).derive("adjoint_defect", op.adjoint_defect);
    let rows: Vec<Vec<Cell>> = spec
        .eigenvalues
        .iter()
        .zip(&spec.residuals)
        .enumerate()
        .map(|(k, (z, r))| vec![k.into(), z.re.into(), z.im.into(), (*r).into()])
        .collect();
    write_csv(&report(out.join("spectrum.csv")), &meta, &["k", "re", "im", "residual"], &rows)?;
    #[derive(Serialize)]
    struct Out<'a> {
        spectrum: &'a hypertwist::twistedop::Spectrum,
        structure: &'a hypertwist::twistedop::StructureReport,
    }
    write_json(&report(out.join("spectrum.json")), &meta, &Out { spectrum: &spec, structure: &structure })?;
    Ok(true)
}

fn run_trace(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let (_, _, op) = twisted_operator(cfg)?;
    anyhow::ensure!(cfg.h == 1.0, "trace requires h = 1");
    let spec = compute_spectrum(&op, op.dim(), &spectrum_options(cfg))?;
    let gens = bolza_group::<f64>();
    let opts =
        GeometricOptions { quad_level: cfg.quad_level, tail_tol: cfg.tail_tol, form_linf: 1.1 * op.linf, ..Default::default() };
    let mut reports = Vec::new();
    for &t in &cfg.t {
        let geo = geometric_side(&gens, &cfg.form, t, &opts)?;
        reports.push(trace_report(t, &cfg.form, &spec, &geo)?);
    }
    let meta = Metadata::new(cfg).with_form_scale(cfg, op.linf);
    let rows: Vec<Vec<Cell>> = reports
        .iter()
        .map(|r| {
            vec![
                r.t.into(),
                r.spectral_side.into(),
                r.topological_term.into(),
                r.geometric_term.into(),
                r.residual.into(),
                r.relative_residual.into(),
                r.truncation_radius.into(),
                r.tail_estimate.into(),
            ]
        })
        .collect();
    let cols = ["t", "spectral", "topological", "geometric", "residual", "relative_residual", "truncation_radius", "tail_estimate"];
    write_csv(&report(out.join("trace.csv")), &meta, &cols, &rows)?;
    write_json(&report(out.join("trace.json")), &meta, &reports)?;
    Ok(true)
}

fn run_weyl(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let (_, _, op) = twisted_operator(cfg)?;
    let mut count = if cfg.count == 0 { op.dim() } else { cfg.count.min(op.dim()) };
    let opts = spectrum_options(cfg);
    let scale = cfg.h * cfg.h;
    let rep = loop {
        let spec = compute_spectrum(&op, count, &opts)?;
        let top = spec.eigenvalues.last().map(|z| z.re).unwrap_or(f64::NEG_INFINITY);
        if top > cfg.b * scale || count == op.dim() {
            break weyl_report(&spec, cfg.a * scale, cfg.b * scale, 4.0 * PI)?;
        }
        count = (2 * count).min(op.dim());
    };
    let meta = Metadata::new(cfg).with_form_scale(cfg, op.linf);
    write_json(&report(out.join("weyl.json")), &meta, &rep)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(true)
}

fn run_radial(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let mesh = SurfaceMesh::build(cfg.level)?;
    let ext = exterior_calculus(&mesh);
    let basis = harmonic_basis(&mesh, &ext)?;
    let forms: Vec<Vec<f64>> = if cfg.form.iter().all(|p| *p == 0.0) {
        basis.iter().map(|b| b.cochain.clone()).collect()
    } else {
        vec![combine(&basis, &cfg.form)]
    };
    let fields: Vec<PrimitiveField> =
        forms.iter().map(|w| primitive_on_domain(&mesh, &ext, w)).collect::<hypertwist::Result<_>>()?;
    let l2: Vec<f64> = forms.iter().map(|w| form_norms(&mesh, w).0).collect();
    let refs: Vec<&PrimitiveField> = fields.iter().collect();
    let points = sample_domain(&mesh.group, cfg.samples);
    let rep = supnorm_bound_check(&mesh, &refs, &l2, cfg.radius, &points, cfg.radial_quad_level)?;
    let meta = Metadata::new(cfg).derive("mu", mu_factor(cfg.radius)).derive("bound_constant", rep.bound_constant);
    let rows: Vec<Vec<Cell>> = rep
        .samples
        .iter()
        .map(|s| {
            vec![
                s.x.into(),
                s.y.into(),
                s.form.into(),
                s.df_norm.into(),
                s.mu_omega.into(),
                s.ratio.into(),
                s.relative_error.into(),
                s.bound.into(),
                s.pass.into(),
            ]
        })
        .collect();
    let cols = ["x", "y", "form", "df_norm", "mu_omega", "ratio", "relative_error", "bound", "pass"];
    write_csv(&report(out.join("radial.csv")), &meta, &cols, &rows)?;
    write_json(&report(out.join("radial.json")), &meta, &rep)?;
    Ok(rep.bound_violations == 0)
}

fn run_verify(cfg: &RunConfig, out: &Path) -> anyhow::Result<bool> {
    let profile = VerifyProfile { level: cfg.level };
    let results = verify_all(profile);
    let meta = Metadata::new(cfg);
    println!("{:>3}  {:<28} {:<6} summary", "id", "criterion", "status");
    for r in &results {
        println!("{:>3}  {:<28} {:<6} {}", r.id, r.name, if r.pass { "PASS" } else { "FAIL" }, r.summary);
    }
    let rows: Vec<Vec<Cell>> = results
        .iter()
        .map(|r| vec![r.id.into(), r.name.as_str().into(), r.pass.into(), r.summary.as_str().into()])
        .collect();
    write_csv(&report(out.join("verify.csv")), &meta, &["id", "criterion", "pass", "summary"], &rows)?;
    write_json(&report(out.join("verify.json")), &meta, &results)?;
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    Ok(failed == 0)
}
