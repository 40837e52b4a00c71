//! `flatnorm`: command-line front end.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input or usage.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use flatnorm::cochain::Cochain;
use flatnorm::document::{canonical_json, read_surface, write_surface, CochainDocument};
use flatnorm::norm::{self, CompareOptions};
use flatnorm::saddle::{self, Options};
use flatnorm::{cover, delaunay, gallery, homology, ExampleSpec, Kind, Surface};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "flatnorm", version, about = "Flat geometry of translation and half-translation surfaces")]
struct Cli {
    /// Emit JSON: to stdout, or to the given file. Put it after the input file.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    json: Option<PathBuf>,
    /// Emit CSV (saddles, kw-scan): to stdout, or to the given file.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "-", value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Worker threads for saddle enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Tolerance of the comparison checks.
    #[arg(long, global = true, default_value_t = norm::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a surface file.
    Validate { surface: PathBuf },
    /// Genus, area, cone points and systole.
    Info { surface: PathBuf },
    /// Delaunay triangulation by edge flips.
    Delaunay {
        surface: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Saddle connections up to a length.
    Saddles {
        surface: PathBuf,
        #[arg(long)]
        max_length: f64,
    },
    /// Symplectic homology basis and the bilinear relation check.
    Homology { surface: PathBuf },
    /// Orientation double cover of a half-translation surface.
    Cover {
        surface: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// AGY norm of a cochain.
    Agy {
        surface: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        cutoff: Option<f64>,
    },
    /// Both sides of the AGY / Teichmüller comparison.
    Compare {
        surface: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        beta: Option<PathBuf>,
        #[arg(long)]
        cutoff: Option<f64>,
        /// Assert the cochain is anti-holomorphic, making the lower check binding.
        #[arg(long)]
        anti_holomorphic: bool,
    },
    /// The twisted slit-cylinder family over several widths.
    KwScan {
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.05,0.025")]
        eps: Vec<f64>,
    },
    /// Write a gallery surface (and optionally a cochain on it).
    Example {
        name: String,
        #[arg(long)]
        eps: Option<f64>,
        /// Perturb the example by a seeded random deformation.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Also write a cochain of the given kind.
        #[arg(long, requires = "cochain_out")]
        cochain: Option<CochainKind>,
        #[arg(long)]
        cochain_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CochainKind {
    Omega,
    ConjOmega,
    Twist,
    Random,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Check(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<flatnorm::Error> for Failure {
    fn from(e: flatnorm::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn load_surface(path: &Path) -> anyhow::Result<Surface> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_surface(&text).with_context(|| format!("invalid surface {}", path.display()))
}

fn load_cochain(path: &Path, surface: &Surface) -> anyhow::Result<Cochain> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = CochainDocument::from_json(&text)?;
    let n = surface.half_edge_count();
    let cochain = if doc.values.len() == 2 * n && surface.kind() == Kind::HalfTranslation {
        doc.to_cochain(&cover::double_cover(surface)?.total)
    } else {
        doc.to_cochain(surface)
    };
    cochain.with_context(|| format!("invalid cochain {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    if path == Path::new("-") {
        println!("{text}");
        Ok(())
    } else {
        fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))
    }
}

struct Ctx {
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
    opts: Options,
    tol: f64,
}

impl Ctx {
    /// Prints `summary` unless JSON goes to stdout, and writes `value` if asked.
    fn report(&self, summary: &str, value: &Value) -> anyhow::Result<()> {
        let to_stdout = self.json.as_deref() == Some(Path::new("-"));
        if !to_stdout {
            println!("{summary}");
        }
        if let Some(p) = &self.json {
            write_out(p, &canonical_json(value))?;
        }
        Ok(())
    }

    fn csv(&self, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        let Some(path) = &self.csv else { return Ok(()) };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        let text = String::from_utf8(w.into_inner().map_err(|e| anyhow!(e.to_string()))?)?;
        write_out(path, text.trim_end())
    }
}

fn cx(re: f64, im: f64) -> Value {
    json!([re, im])
}

fn info_value(s: &Surface) -> anyhow::Result<Value> {
    let systole = delaunay::systole(s)?;
    let vertices: Vec<Value> = s
        .vertices()
        .iter()
        .map(|v| json!({"id": v.id, "angle": v.angle, "angle_over_pi": v.angle / std::f64::consts::PI, "order": v.order}))
        .collect();
    Ok(json!({
        "kind": s.kind(),
        "genus": s.genus(),
        "area": s.area(),
        "triangles": s.faces().len(),
        "edges": s.edges().len(),
        "vertices": vertices,
        "systole": systole,
    }))
}

fn run(cli: Cli) -> Outcome {
    if cli.threads == 0 {
        return Err(Failure::Input(anyhow!("--threads must be at least 1")));
    }
    if !(cli.tol > 0.0) {
        return Err(Failure::Input(anyhow!("--tol must be positive")));
    }
    let ctx = Ctx { json: cli.json, csv: cli.csv, opts: Options { threads: cli.threads, ..Options::default() }, tol: cli.tol };
    match cli.command {
        Command::Validate { surface } => {
            let s = load_surface(&surface)?;
            let summary = format!(
                "valid {:?} surface: {} triangles, {} edges, {} vertices, genus {}",
                s.kind(),
                s.faces().len(),
                s.edges().len(),
                s.vertices().len(),
                s.genus()
            );
            ctx.report(&summary, &json!({"valid": true, "kind": s.kind(), "genus": s.genus()}))?;
        }
        Command::Info { surface } => {
            let s = load_surface(&surface)?;
            let v = info_value(&s)?;
            let angles: Vec<String> = s.vertices().iter().map(|v| format!("{:.6}pi", v.angle / std::f64::consts::PI)).collect();
            let summary = format!(
                "kind: {:?}\ngenus: {}\narea: {}\nvertices: {} (cone angles {})\nsystole: {}",
                s.kind(),
                s.genus(),
                s.area(),
                s.vertices().len(),
                angles.join(", "),
                v["systole"]
            );
            ctx.report(&summary, &v)?;
        }
        Command::Delaunay { surface, emit } => {
            let s = load_surface(&surface)?;
            let (d, rep) = delaunay::delaunayize(&s)?;
            if let Some(p) = emit {
                write_out(&p, &write_surface(&d))?;
            }
            let value = serde_json::to_value(&rep).map_err(anyhow::Error::from)?;
            let text = canonical_json(&value);
            if ctx.json.is_none() {
                println!("{text}");
            } else {
                ctx.report(&format!("{} flips, all Delaunay: {}", rep.flips_performed, rep.all_delaunay), &value)?;
            }
            if !rep.all_delaunay {
                return Err(Failure::Check("triangulation is not Delaunay after flipping".into()));
            }
        }
        Command::Saddles { surface, max_length } => {
            let s = load_surface(&surface)?;
            let found = saddle::enumerate(&s, max_length, &ctx.opts)?;
            let rows: Vec<Vec<String>> = found
                .iter()
                .map(|sc| {
                    vec![
                        sc.start.to_string(),
                        sc.end.to_string(),
                        format!("{:?}", sc.holonomy.re),
                        format!("{:?}", sc.holonomy.im),
                        format!("{:?}", sc.length),
                    ]
                })
                .collect();
            ctx.csv(&["start", "end", "holonomy_re", "holonomy_im", "length"], &rows)?;
            let value = json!({
                "max_length": max_length,
                "count": found.len(),
                "connections": found.iter().map(|sc| json!({
                    "start": sc.start, "end": sc.end, "holonomy": cx(sc.holonomy.re, sc.holonomy.im),
                    "length": sc.length, "corner": sc.corner, "crossings": sc.crossings,
                })).collect::<Vec<_>>(),
            });
            if ctx.csv.as_deref() != Some(Path::new("-")) {
                let shortest = found.first().map(|sc| sc.length);
                ctx.report(&format!("{} saddle connections of length <= {max_length}; shortest {shortest:?}", found.len()), &value)?;
            }
        }
        Command::Homology { surface } => {
            let s = load_surface(&surface)?;
            let (target, note) = match s.kind() {
                Kind::Translation => (s, ""),
                Kind::HalfTranslation => (cover::double_cover(&s)?.total, " (on the orientation double cover)"),
            };
            let basis = homology::h1_basis(&target)?;
            let hodge = homology::hodge_norm(&target, &basis, &Cochain::omega(&target))?;
            let area = target.area();
            let rel = (hodge * hodge - area).abs() / area;
            let ok = rel <= ctx.tol;
            let value = json!({
                "genus": basis.genus,
                "a_cycles": basis.a,
                "b_cycles": basis.b,
                "intersection": basis.intersection,
                "area": area,
                "hodge_norm_squared": hodge * hodge,
                "relative_error": rel,
                "bilinear_check": ok,
                "cocycle_space_dim": homology::cocycle_space_dim(&target)?,
            });
            let summary = format!(
                "genus{note}: {}\nintersection matrix: {:?}\nhodge_norm(omega)^2 = {} vs area {} (relative error {rel:.2e}): {}",
                basis.genus,
                basis.intersection,
                hodge * hodge,
                area,
                if ok { "ok" } else { "FAILED" }
            );
            ctx.report(&summary, &value)?;
            if !ok {
                return Err(Failure::Check("Riemann bilinear check failed".into()));
            }
        }
        Command::Cover { surface, emit } => {
            let s = load_surface(&surface)?;
            let cov = cover::double_cover(&s)?;
            if let Some(p) = emit {
                write_out(&p, &cov.to_document().to_json())?;
            }
            let value = json!({
                "genus": cov.total.genus(),
                "area": cov.total.area(),
                "base_area": s.area(),
                "ramification_vertices": cov.ramification_vertices(),
                "anti_invariant_dimension": cover::anti_invariant_dimension(&cov),
            });
            let summary = format!(
                "double cover: genus {}, area {} (base {}), {} ramification points, anti-invariant dimension {}",
                cov.total.genus(),
                cov.total.area(),
                s.area(),
                cov.ramification_vertices().len(),
                value["anti_invariant_dimension"]
            );
            ctx.report(&summary, &value)?;
        }
        Command::Agy { surface, cochain, cutoff } => {
            let s = load_surface(&surface)?;
            let eta = load_cochain(&cochain, &s)?;
            if eta.len() != s.half_edge_count() {
                return Err(Failure::Input(anyhow!("agy needs a cochain on the surface itself")));
            }
            let (d, rep) = delaunay::delaunayize(&s)?;
            let eta = eta.follow_flips(&rep.flips);
            let r = norm::agy_norm(&d, &eta, cutoff, &ctx.opts)?;
            let value = json!({
                "value": r.value,
                "cutoff": r.cutoff,
                "stabilized": r.stabilized,
                "connections": r.connections,
                "certificate": r.certificate.as_ref().map(|sc| json!({
                    "holonomy": cx(sc.holonomy.re, sc.holonomy.im), "length": sc.length,
                })),
            });
            ctx.report(&format!("agy = {} (cutoff {}, stabilized {})", r.value, r.cutoff, r.stabilized), &value)?;
        }
        Command::Compare { surface, cochain, beta, cutoff, anti_holomorphic } => {
            let s = load_surface(&surface)?;
            let eta = load_cochain(&cochain, &s)?;
            let beta = beta.map(|p| load_cochain(&p, &s)).transpose()?;
            let opts = CompareOptions { cutoff, beta, anti_holomorphic, tol: ctx.tol, saddle: ctx.opts };
            let rep = norm::compare(&s, &eta, &opts)?;
            let value = serde_json::to_value(&rep).map_err(anyhow::Error::from)?;
            let mut summary = format!(
                "r = {}\nagy = {} (stabilized {})\nteich_upper = {}\nteich_lower = {}\nlower check: {}{}\nupper check: {}",
                rep.r,
                rep.agy.value,
                rep.agy.stabilized,
                rep.teich_upper,
                rep.teich_lower,
                rep.lower_constant_check,
                if rep.lower_check_advisory { " (advisory)" } else { "" },
                rep.upper_constant_check
            );
            if let Some(h) = rep.hodge_bound_check {
                summary += &format!("\nhodge check: {h}");
            }
            for a in &rep.advisories {
                summary += &format!("\nnote: {a}");
            }
            ctx.report(&summary, &value)?;
            if !rep.passed() {
                return Err(Failure::Check("comparison check failed".into()));
            }
        }
        Command::KwScan { eps } => {
            let opts = CompareOptions { tol: ctx.tol, saddle: ctx.opts, ..CompareOptions::default() };
            let rows = norm::kw_scan(&eps, &opts)?;
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        format!("{:?}", r.eps),
                        format!("{:?}", r.r),
                        format!("{:?}", r.agy),
                        format!("{:?}", r.teich_upper),
                        format!("{:?}", r.teich_lower),
                        r.lower_check.to_string(),
                        r.upper_check.to_string(),
                    ]
                })
                .collect();
            ctx.csv(&["eps", "r", "agy", "teich_upper", "teich_lower", "lower_check", "upper_check"], &table)?;
            if ctx.csv.as_deref() != Some(Path::new("-")) {
                let lines: Vec<String> = rows
                    .iter()
                    .map(|r| format!("eps {}: agy {:.9}, teich_upper {:.9}, teich_upper*eps {:.6}", r.eps, r.agy, r.teich_upper, r.teich_upper * r.eps))
                    .collect();
                let value = serde_json::to_value(&rows).map_err(anyhow::Error::from)?;
                ctx.report(&lines.join("\n"), &value)?;
            }
            if !rows.iter().all(|r| r.lower_check && r.upper_check) {
                return Err(Failure::Check("kw scan check failed".into()));
            }
        }
        Command::Example { name, eps, seed, emit, cochain, cochain_out } => {
            let spec = ExampleSpec { name: name.clone(), eps, seed };
            let mut s = spec.build()?;
            if let Some(seed) = seed {
                let eta = Cochain::random(&s, seed, 0.2 * s.shortest_edge());
                let t = norm::max_deformation_time(&s, &eta)?;
                s = norm::deform(&s, &eta, (0.5 * t).min(1.0))?;
            }
            if let (Some(kind), Some(path)) = (cochain, cochain_out) {
                let c = match kind {
                    CochainKind::Omega => Cochain::omega(&s),
                    CochainKind::ConjOmega => Cochain::conj_omega(&s),
                    CochainKind::Random => Cochain::random(&s, seed.unwrap_or(0), 1.0),
                    CochainKind::Twist => {
                        if name != "kw" || seed.is_some() {
                            return Err(Failure::Input(anyhow!("twist cochains exist only on the unperturbed kw example")));
                        }
                        gallery::twist_cochain(&gallery::kw_surface(eps.unwrap_or(0.1))?, 0)?
                    }
                };
                write_out(&path, &CochainDocument::from_cochain(&c).to_json())?;
            }
            let text = write_surface(&s);
            match emit {
                Some(p) => {
                    write_out(&p, &text)?;
                    ctx.report(&format!("wrote {name} (genus {}, area {}) to {}", s.genus(), s.area(), p.display()), &info_value(&s)?)?;
                }
                None => println!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
