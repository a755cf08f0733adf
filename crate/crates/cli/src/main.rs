use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nodal_atlas::catalog::{
    check_invariants, decic_surface_family, miyaoka_bound, record_table, sextic_surface_family, surfaces,
    SurfaceArgs,
};
use nodal_atlas::icosahedral::{icosahedral_group, is_invariant};
use nodal_atlas::render::{render, Camera, Lighting, RenderStats};
use nodal_atlas::rootcert::SearchOptions;
use nodal_atlas::singularities::{
    analyze, build_report, derive_decic_parameters, family_scan, verify, OrbitSummary, SearchSettings,
};
use nodal_atlas::GoldenNumber;
use num_rational::BigRational;
use serde::Serialize;

mod input;

/// Exact computations on icosahedral nodal surfaces.
#[derive(Parser, Debug)]
#[command(name = "nodal-atlas", version)]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true, env = "NODAL_ATLAS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Named surfaces, node records and bounds.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// The icosahedral rotation group.
    Group {
        /// Print the number of elements of each order.
        #[arg(long)]
        census: bool,
        /// Check every catalog form against all group elements; exit 1 on failure.
        #[arg(long)]
        check_invariants: bool,
    },
    /// Certify the real singular points of a surface.
    Singularities {
        #[command(flatten)]
        surface: SurfaceOpts,
        #[command(flatten)]
        precision: PrecisionOpts,
        /// Write the JSON report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print unresolved boxes to standard error as JSON lines.
        #[arg(long)]
        debug_boxes: bool,
    },
    /// Node counts across a family.
    Scan {
        #[command(subcommand)]
        family: ScanFamily,
    },
    /// Ray-cast a surface to a binary PPM image.
    Render(RenderOpts),
    /// Certify a catalog surface and compare with its expected node count.
    Verify {
        #[command(flatten)]
        surface: SurfaceOpts,
        #[command(flatten)]
        precision: PrecisionOpts,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ScanFamily {
    /// `Q − α·w²·K²` over `α = from + k·(to − from)/steps`.
    Sextic {
        #[arg(long, default_value = "1/4")]
        from: String,
        #[arg(long, default_value = "2")]
        to: String,
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[command(flatten)]
        precision: PrecisionOpts,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Locate the decic parameters from coinciding critical values on a
    /// mirror plane, then scan `β` around the choice.
    Decic {
        #[arg(long, default_value = "1/10")]
        c_from: String,
        #[arg(long, default_value = "1")]
        c_to: String,
        #[arg(long, default_value_t = 90)]
        c_steps: usize,
        /// Grid points on each side of the chosen `β`.
        #[arg(long, default_value_t = 1)]
        beta_steps: usize,
        /// Spacing of the `β` grid.
        #[arg(long, default_value = "1/100")]
        beta_spacing: String,
        #[command(flatten)]
        precision: PrecisionOpts,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SurfaceOpts {
    /// Catalog name (see `catalog list`) or a file with a polynomial.
    #[arg(long, default_value = "barth-sextic")]
    surface: String,
    /// Sextic parameter, as an exact expression such as `(2*tau+1)/4`.
    #[arg(long)]
    alpha: Option<String>,
    /// Decic sphere weight.
    #[arg(long)]
    beta: Option<String>,
    /// Decic second sphere radius squared.
    #[arg(long)]
    c: Option<String>,
}

#[derive(Args, Debug)]
struct PrecisionOpts {
    /// Certified enclosures get radius at most 2^-BITS.
    #[arg(long, default_value_t = 33, value_parser = clap::value_parser!(u32).range(32..=48))]
    precision: u32,
}

#[derive(Args, Debug)]
struct RenderOpts {
    #[command(flatten)]
    surface: SurfaceOpts,
    #[arg(long, default_value_t = 512)]
    width: u32,
    #[arg(long, default_value_t = 512)]
    height: u32,
    /// Radius of the clipping ball around the origin.
    #[arg(long, default_value = "3")]
    clip: String,
    /// Eye and look-at point, `"ex,ey,ez lx,ly,lz"`; defaults to the
    /// catalog view.
    #[arg(long)]
    camera: Option<String>,
    #[arg(long, default_value = "0,0,1")]
    up: String,
    /// Vertical field of view in degrees.
    #[arg(long, default_value = "40")]
    fov: String,
    /// Output image; defaults to `<surface>.ppm`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or unwritable output: exit 2.
    Usage(String),
    /// A check did not hold: exit 1.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("{m}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Catalog {
            action: CatalogAction::List { json },
        } => catalog_list(json),
        Command::Group {
            census,
            check_invariants,
        } => group(census || !check_invariants, check_invariants),
        Command::Singularities {
            surface,
            precision,
            report,
            debug_boxes,
        } => singularities(&surface, &precision, report.as_deref(), debug_boxes),
        Command::Scan { family } => scan(family),
        Command::Render(opts) => render_cmd(&opts),
        Command::Verify {
            surface,
            precision,
            report,
        } => verify_cmd(&surface, &precision, report.as_deref()),
    }
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn settings(p: &PrecisionOpts) -> SearchSettings {
    SearchSettings {
        search: SearchOptions {
            target_radius: 2f64.powi(-(p.precision as i32)),
            ..SearchOptions::default()
        },
    }
}

fn surface_args(s: &SurfaceOpts) -> Result<SurfaceArgs> {
    Ok(SurfaceArgs {
        alpha: input::optional("--alpha", &s.alpha)?,
        beta: input::optional("--beta", &s.beta)?,
        c: input::optional("--c", &s.c)?,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Pretty JSON to `path`, or to standard output.
fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match path {
        Some(p) => write_file(p, format!("{text}\n").as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn catalog_list(json: bool) -> Result<()> {
    #[derive(Serialize)]
    struct Record {
        degree: u32,
        nodes: u64,
        attribution: &'static str,
        year: u32,
        maximal: bool,
        bound: Option<u64>,
        note: &'static str,
    }
    #[derive(Serialize)]
    struct Listing {
        surfaces: Vec<nodal_atlas::catalog::CatalogEntry>,
        records: Vec<Record>,
    }
    let listing = Listing {
        surfaces: surfaces(),
        records: record_table()
            .into_iter()
            .map(|r| Record {
                degree: r.degree,
                nodes: r.nodes,
                attribution: r.attribution,
                year: r.year,
                maximal: r.maximal,
                bound: miyaoka_bound(r.degree).ok(),
                note: r.note,
            })
            .collect(),
    };
    if json {
        return emit_json(&listing, None);
    }
    println!("{:<16} {:>6} {:>6}  {:<40} description", "surface", "degree", "nodes", "parameters");
    for s in &listing.surfaces {
        println!(
            "{:<16} {:>6} {:>6}  {:<40} {}",
            s.name,
            s.degree,
            s.expected_nodes.map_or("-".to_string(), |n| n.to_string()),
            s.default_parameter.as_deref().unwrap_or("-"),
            s.description
        );
    }
    println!();
    println!("{:>6} {:>6} {:>6}  {:<16} {:>4}  note", "degree", "nodes", "bound", "attribution", "year");
    for r in &listing.records {
        println!(
            "{:>6} {:>6} {:>6}  {:<16} {:>4}  {}",
            r.degree,
            r.nodes,
            r.bound.map_or("-".to_string(), |b| b.to_string()),
            r.attribution,
            r.year,
            r.note
        );
    }
    Ok(())
}

fn group(census: bool, invariants: bool) -> Result<()> {
    let g = icosahedral_group();
    if census {
        let c = g.order_census();
        println!("{} elements", g.len());
        for (order, n) in [1, 2, 3, 5].iter().zip(c) {
            println!("order {order}: {n}");
        }
        if c[4] != 0 {
            println!("other orders: {}", c[4]);
        }
    }
    if invariants {
        let checks = check_invariants(g);
        for c in &checks {
            println!("{:<8} {}", if c.invariant { "ok" } else { "FAILED" }, c.form);
        }
        let failed = checks.iter().filter(|c| !c.invariant).count();
        if failed > 0 {
            return Err(CliError::Failed(format!("{failed} forms are not invariant")));
        }
    }
    Ok(())
}

fn print_orbits(orbits: &[OrbitSummary]) {
    for o in orbits {
        let r = o.representative;
        let mut loci = Vec::new();
        if o.on_mid_line {
            loci.push("mid-line");
        }
        if o.on_plane {
            loci.push("symmetry plane");
        }
        if o.on_mirror_plane {
            loci.push("mirror plane");
        }
        eprintln!(
            "  orbit of {:>3} {:?}  ({:+.6}, {:+.6}, {:+.6}, {:+.6})  {}",
            o.size,
            o.kind,
            r[0],
            r[1],
            r[2],
            r[3],
            loci.join(", ")
        );
    }
}

fn singularities(s: &SurfaceOpts, p: &PrecisionOpts, report: Option<&Path>, debug_boxes: bool) -> Result<()> {
    let surface = input::surface(&s.surface, &surface_args(s)?)?;
    let settings = settings(p);
    let group = icosahedral_group();
    let symmetric = is_invariant(group, &surface.form);
    let analysis = analyze(&surface.form, &settings, symmetric.then_some(group))
        .map_err(|e| CliError::Usage(format!("{}: {e}", surface.label)))?;
    let r = build_report(&surface.label, surface.form.degree(), &surface.parameters, &analysis, &settings);
    if debug_boxes {
        for b in &r.unresolved_boxes {
            eprintln!("{}", serde_json::to_string(b).expect("boxes serialize"));
        }
    }
    eprintln!(
        "{}: {} singular points ({} unresolved boxes) in {:.2} s",
        r.surface,
        r.total_count,
        r.unresolved_boxes.len(),
        r.runtime_seconds
    );
    print_orbits(&r.orbits);
    emit_json(&r, report)
}

fn verify_cmd(s: &SurfaceOpts, p: &PrecisionOpts, report: Option<&Path>) -> Result<()> {
    let v = verify(&s.surface, &surface_args(s)?, &settings(p)).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(path) = report {
        emit_json(&v, Some(path))?;
    }
    if v.passed {
        println!("{}", v.summary());
        return Ok(());
    }
    let mut msg = format!("VERIFICATION FAILED for {}: {}\n", s.surface, v.summary());
    for d in &v.discrepancies {
        msg.push_str(&format!("  - {d}\n"));
    }
    msg.push_str(&serde_json::to_string_pretty(&v.report).expect("reports serialize"));
    print_orbits(&v.report.orbits);
    Err(CliError::Failed(msg))
}

#[derive(Serialize)]
struct ScanReproducibility {
    precision_bits: u32,
    target_radius: f64,
    grid: Vec<String>,
    version: &'static str,
}

fn scan(family: ScanFamily) -> Result<()> {
    match family {
        ScanFamily::Sextic {
            from,
            to,
            steps,
            precision,
            report,
        } => {
            if steps == 0 {
                return Err(CliError::Usage("--steps must be positive".into()));
            }
            let (a, b) = (input::constant("--from", &from)?, input::constant("--to", &to)?);
            let step = (&b - &a).scale(&BigRational::new(1.into(), (steps as i64).into()));
            let grid: Vec<GoldenNumber> = (0..=steps)
                .map(|k| &a + &step.scale(&BigRational::from_integer((k as i64).into())))
                .collect();
            let settings = settings(&precision);
            let r = family_scan(&sextic_surface_family(), &grid, &settings);
            for e in &r.entries {
                eprintln!(
                    "alpha = {:<24} {:>4} nodes{}{}",
                    e.parameter.to_string(),
                    e.count,
                    if e.complete { "" } else { " (incomplete)" },
                    if e.above_generic { "  above generic" } else { "" }
                );
            }
            #[derive(Serialize)]
            struct Out<'a> {
                scan: &'a nodal_atlas::singularities::ScanReport,
                reproducibility: ScanReproducibility,
            }
            emit_json(
                &Out {
                    scan: &r,
                    reproducibility: ScanReproducibility {
                        precision_bits: precision.precision,
                        target_radius: settings.search.target_radius,
                        grid: grid.iter().map(|g| g.to_string()).collect(),
                        version: VERSION,
                    },
                },
                report.as_deref(),
            )
        }
        ScanFamily::Decic {
            c_from,
            c_to,
            c_steps,
            beta_steps,
            beta_spacing,
            precision,
            report,
        } => {
            let c_lo = input::constant("--c-from", &c_from)?.to_f64();
            let c_hi = input::constant("--c-to", &c_to)?.to_f64();
            if !(c_lo < c_hi) || c_steps == 0 {
                return Err(CliError::Usage("need --c-from < --c-to and --c-steps > 0".into()));
            }
            let spacing = input::constant("--beta-spacing", &beta_spacing)?;
            let settings = settings(&precision);
            let derivation = derive_decic_parameters(c_lo, c_hi, c_steps, &settings);
            for cand in &derivation.candidates {
                eprintln!(
                    "c = {:.6}, beta = {:.6}  {}  {}",
                    cand.crossing.c,
                    cand.crossing.beta,
                    match (&cand.crossing.c_exact, &cand.crossing.beta_exact) {
                        (Some(c), Some(b)) => format!("exact c = {c}, beta = {b}"),
                        _ => "not recognized in Q(sqrt5)".to_string(),
                    },
                    match cand.certified_count {
                        Some(n) => format!("{n} nodes{}", if cand.accepted { " (chosen)" } else { "" }),
                        None => "-".to_string(),
                    }
                );
            }
            let chosen = derivation
                .chosen
                .clone()
                .ok_or_else(|| CliError::Failed("no decic parameters found in the sweep".into()))?;
            let grid: Vec<GoldenNumber> = (-(beta_steps as i64)..=beta_steps as i64)
                .map(|k| &chosen.beta + &spacing.scale(&BigRational::from_integer(k.into())))
                .collect();
            let r = family_scan(&decic_surface_family(chosen.c.clone()), &grid, &settings);
            for e in &r.entries {
                eprintln!("beta = {:<32} {:>4} nodes", e.parameter.to_string(), e.count);
            }
            #[derive(Serialize)]
            struct Out<'a> {
                derivation: &'a nodal_atlas::singularities::DecicDerivation,
                beta_scan: &'a nodal_atlas::singularities::ScanReport,
                reproducibility: ScanReproducibility,
            }
            emit_json(
                &Out {
                    derivation: &derivation,
                    beta_scan: &r,
                    reproducibility: ScanReproducibility {
                        precision_bits: precision.precision,
                        target_radius: settings.search.target_radius,
                        grid: grid.iter().map(|g| g.to_string()).collect(),
                        version: VERSION,
                    },
                },
                report.as_deref(),
            )
        }
    }
}

fn render_cmd(o: &RenderOpts) -> Result<()> {
    let surface = input::surface(&o.surface.surface, &surface_args(&o.surface)?)?;
    let clip = input::rational("--clip", &o.clip)?;
    let clip_f = nodal_atlas::GoldenNumber::from_rational(clip.clone()).to_f64();
    let camera = match &o.camera {
        Some(src) => {
            let (eye, look_at) = input::eye_and_target(src)?;
            Camera::new(
                eye,
                look_at,
                input::point("--up", &o.up)?,
                input::rational("--fov", &o.fov)?,
                o.width,
                o.height,
            )
        }
        None => Camera::default_view(o.width, o.height),
    }
    .map_err(|e| CliError::Usage(format!("camera: {e}")))?;
    let out = o.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.ppm", surface.label)));

    let start = Instant::now();
    let r = render(&surface.form, &camera, &Lighting::default(), clip_f)
        .map_err(|e| CliError::Usage(format!("render: {e}")))?;
    let elapsed = start.elapsed().as_secs_f64();
    write_file(&out, &r.image.to_ppm())?;

    #[derive(Serialize)]
    struct CameraSpec {
        eye: Vec<String>,
        look_at: Vec<String>,
        up: Vec<String>,
        fov_degrees: String,
    }
    #[derive(Serialize)]
    struct Reproducibility {
        parameters: Vec<(String, String)>,
        camera: CameraSpec,
        width: u32,
        height: u32,
        clip: String,
        arithmetic: &'static str,
        version: &'static str,
    }
    #[derive(Serialize)]
    struct RenderReport {
        surface: String,
        output: String,
        stats: RenderStats,
        runtime_seconds: f64,
        reproducibility: Reproducibility,
    }
    let strs = |v: &[BigRational; 3]| v.iter().map(|x| x.to_string()).collect();
    let report = RenderReport {
        surface: surface.label.clone(),
        output: out.display().to_string(),
        stats: r.stats.clone(),
        runtime_seconds: elapsed,
        reproducibility: Reproducibility {
            parameters: surface.parameters.clone(),
            camera: CameraSpec {
                eye: strs(&camera.eye),
                look_at: strs(&camera.look_at),
                up: strs(&camera.up),
                fov_degrees: camera.fov_degrees.to_string(),
            },
            width: o.width,
            height: o.height,
            clip: clip.to_string(),
            arithmetic: "exact Q(sqrt5) surface; f64 interval Bernstein isolation with exact Sturm fallback",
            version: VERSION,
        },
    };
    eprintln!(
        "{}: {}x{} -> {} ({} hits, {} exact fallbacks, max residual {:.3e}) in {:.2} s",
        surface.label,
        o.width,
        o.height,
        out.display(),
        r.stats.hits,
        r.stats.exact_fallbacks,
        r.stats.max_residual,
        elapsed
    );
    if let Some(path) = &o.report {
        emit_json(&report, Some(path))?;
    }
    Ok(())
}
