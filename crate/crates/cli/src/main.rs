//! Command-line front end: builds catalog functions and grids from flags,
//! runs transforms and identity checks, serializes fields, and emits
//! plot-ready data.
//!
//! Exit codes: 0 success / all checks pass; 1 failed check or failed demo
//! assertion; 2 usage errors (including refused windows); 3 unknown catalog
//! name.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use ridgelet_cli::field_file;
use ridgelet_cli::report::ReportRow;
use ridgelet_core::activation::{
    c_constant, is_admissible, k_constant, ActivationFunction, ReconstructionPair,
};
use ridgelet_core::fourier::{SampledField, SliceSource, SourceFunction};
use ridgelet_core::grid::{Axis, CartesianGrid, DirectionSet, ScaleGrid, YGrid};
use ridgelet_core::radon::{duality_check, radon};
use ridgelet_core::ridgelet::{
    decay_slope, desingularization_check, factorization_check, parseval_check, radon_via_ridgelet,
    reconstruct, ridgelet, scale_supremum_profile, sinogram_rel_l2, transpose_check,
    RidgeletField,
};
use ridgelet_core::TransformError;

#[derive(Parser)]
#[command(
    name = "ridgelet",
    version,
    about = "Continuous ridgelet transform, companion transforms, and identity checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a source and write the ridgelet coefficient field to a file
    Transform(TransformArgs),
    /// Run identity-check suites and print a CSV report
    Check(CheckArgs),
    /// Print reconstruction-pair constants and admissibility
    Constants(ConstantsArgs),
    /// Scale-decay demonstration: plateau and log-log slope of a
    /// slowly-decaying coefficient field
    #[command(name = "demo-remark43")]
    DemoRemark43(DemoArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Number of directions on the circle
    #[arg(long, default_value_t = 180)]
    directions: usize,
    /// Half-width of the location axis
    #[arg(long, default_value_t = 12.0)]
    b_range: f64,
    /// Location samples; even counts use the half-open convention [-R, R)
    /// so that a node lands exactly on 0
    #[arg(long, default_value_t = 256)]
    b_count: usize,
    /// Scale range as lo:hi (geometric spacing)
    #[arg(long, default_value = "0.0625:16")]
    scales: String,
    /// Number of scale nodes
    #[arg(long, default_value_t = 96)]
    scale_count: usize,
    /// Half-width of the frequency window
    #[arg(long, default_value_t = 16.0)]
    omega_range: f64,
    /// Frequency samples across the symmetric window
    #[arg(long, default_value_t = 513)]
    omega_count: usize,
}

#[derive(Args)]
struct TransformArgs {
    /// Catalog source (gaussian, gaussian(x,y), lizorkin) or a field file
    #[arg(long)]
    input: String,
    /// Activation kernel from the catalog
    #[arg(long, default_value = "hermite_spectral(2)")]
    psi: String,
    #[command(flatten)]
    grid: GridArgs,
    /// Output field file
    #[arg(long)]
    out: PathBuf,
    /// Optional plot CSV: scale supremum profile and location profiles
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Reconstruct,
    Parseval,
    Transpose,
    Factorize,
    RadonDuality,
    RadonViaRidgelet,
    Desingularize,
    All,
}

#[derive(Args)]
struct CheckArgs {
    /// Which identity suite to run
    #[arg(long, value_enum)]
    suite: Suite,
    /// Analysis kernel
    #[arg(long, default_value = "hermite_spectral(2)")]
    psi: String,
    /// Synthesis kernel (defaults to the analysis kernel)
    #[arg(long)]
    eta: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Half-width of the spatial comparison grid
    #[arg(long, default_value_t = 8.0)]
    space_range: f64,
    /// Samples per spatial axis
    #[arg(long, default_value_t = 128)]
    space_count: usize,
}

#[derive(Args)]
struct ConstantsArgs {
    /// Analysis kernel
    #[arg(long)]
    psi: String,
    /// Synthesis kernel (defaults to the analysis kernel)
    #[arg(long)]
    eta: Option<String>,
    /// Ambient dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,
}

#[derive(Args)]
struct DemoArgs {
    /// Top of the scale window (the slope fit needs it to reach 64)
    #[arg(long, default_value_t = 64.0)]
    scale_max: f64,
    /// Write the (a, a*|coefficient|) table here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(code: i32, message: impl Display) -> ! {
    eprintln!("error: {message}");
    std::process::exit(code);
}

fn exit_code_for(err: &TransformError) -> i32 {
    match err {
        TransformError::UnknownCatalogEntry(_)
        | TransformError::MomentOrderUnsupported { .. } => 3,
        TransformError::ZeroConstant(_) | TransformError::DivergentConstant(_) => 1,
        _ => 2,
    }
}

fn catalog_activation(name: &str) -> ActivationFunction {
    ActivationFunction::parse(name).unwrap_or_else(|err| fail(exit_code_for(&err), err))
}

/// Location/offset axis. Even counts use the half-open convention [-R, R)
/// so a node lands exactly on 0; odd counts take the closed symmetric axis.
fn location_axis(range: f64, count: usize) -> Axis {
    let result = if count % 2 == 0 {
        Axis::new(-range, range - 2.0 * range / count as f64, count)
    } else {
        Axis::symmetric(range, count)
    };
    result.unwrap_or_else(|err| fail(2, err))
}

struct Grids {
    ygrid: YGrid,
    omega: Axis,
}

fn build_grids(args: &GridArgs) -> Grids {
    let directions = DirectionSet::uniform_circle(args.directions)
        .unwrap_or_else(|err| fail(2, err));
    let b_axis = location_axis(args.b_range, args.b_count);
    let (lo, hi) = parse_scale_range(&args.scales);
    let scales =
        ScaleGrid::new(lo, hi, args.scale_count).unwrap_or_else(|err| fail(2, err));
    let omega = Axis::symmetric(args.omega_range, args.omega_count)
        .unwrap_or_else(|err| fail(2, err));
    Grids {
        ygrid: YGrid::new(directions, b_axis, scales),
        omega,
    }
}

fn parse_scale_range(text: &str) -> (f64, f64) {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        fail(2, format!("--scales expects lo:hi, got {text:?}"));
    }
    let lo: f64 = parts[0]
        .trim()
        .parse()
        .unwrap_or_else(|_| fail(2, format!("bad scale bound {:?}", parts[0])));
    let hi: f64 = parts[1]
        .trim()
        .parse()
        .unwrap_or_else(|_| fail(2, format!("bad scale bound {:?}", parts[1])));
    (lo, hi)
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Transform(args) => run_transform(&args),
        Command::Check(args) => run_check(&args),
        Command::Constants(args) => run_constants(&args),
        Command::DemoRemark43(args) => run_demo(&args),
    };
    std::process::exit(code);
}

fn run_transform(args: &TransformArgs) -> i32 {
    let psi = catalog_activation(&args.psi);
    let grids = build_grids(&args.grid);
    let stored_input: Option<SampledField> = if Path::new(&args.input).is_file() {
        match field_file::read_plane(Path::new(&args.input)) {
            Ok(field) => Some(field),
            Err(err) => fail(2, format!("cannot read {}: {err}", args.input)),
        }
    } else {
        None
    };
    let catalog_input: Option<SourceFunction> = if stored_input.is_none() {
        match SourceFunction::parse(&args.input, 2) {
            Ok(src) => Some(src),
            Err(err) => fail(exit_code_for(&err), err),
        }
    } else {
        None
    };
    let source = match (&stored_input, &catalog_input) {
        (Some(field), _) => SliceSource::Sampled(field),
        (None, Some(src)) => SliceSource::Analytic(src),
        _ => unreachable!("one of the input forms is always present"),
    };
    let field = ridgelet(&source, &psi, &grids.ygrid, &grids.omega)
        .unwrap_or_else(|err| fail(2, err));
    if let Err(err) = field_file::write_ridgelet(&args.out, &field) {
        fail(2, format!("cannot write {}: {err}", args.out.display()));
    }
    if let Some(plot) = &args.plot {
        if let Err(err) = write_plot(plot, &field) {
            fail(2, format!("cannot write {}: {err}", plot.display()));
        }
    }
    0
}

fn write_plot(path: &Path, field: &RidgeletField) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# scale supremum profile")?;
    writeln!(out, "a,sup_abs")?;
    let profile = scale_supremum_profile(field);
    for (j, sup) in profile.iter().enumerate() {
        writeln!(out, "{:.9e},{:.9e}", field.scales().value(j), sup)?;
    }
    let picks = [0, field.scales().count() / 2, field.scales().count() - 1];
    for j in picks {
        writeln!(
            out,
            "# location profile at scale {:.6} (first direction)",
            field.scales().value(j)
        )?;
        writeln!(out, "b,re,im")?;
        for i in 0..field.b_axis().count() {
            let v = field.value(0, i, j);
            writeln!(
                out,
                "{:.9e},{:.9e},{:.9e}",
                field.b_axis().value(i),
                v.re,
                v.im
            )?;
        }
    }
    out.flush()
}

fn run_check(args: &CheckArgs) -> i32 {
    let psi = catalog_activation(&args.psi);
    let eta = args
        .eta
        .as_deref()
        .map(catalog_activation)
        .unwrap_or_else(|| psi.clone());
    let grids = build_grids(&args.grid);
    let grid = CartesianGrid::centered(2, args.space_range, args.space_count)
        .unwrap_or_else(|err| fail(2, err));
    let p_axis = location_axis(args.b_range_for_p(), args.grid.b_count);

    let suites: Vec<Suite> = if args.suite == Suite::All {
        vec![
            Suite::Reconstruct,
            Suite::Parseval,
            Suite::Transpose,
            Suite::Factorize,
            Suite::RadonDuality,
            Suite::RadonViaRidgelet,
            Suite::Desingularize,
        ]
    } else {
        vec![args.suite]
    };
    let needs_pair = suites.iter().any(|s| {
        matches!(
            s,
            Suite::Reconstruct | Suite::Parseval | Suite::RadonViaRidgelet | Suite::Desingularize
        )
    });
    let pair = if needs_pair {
        match ReconstructionPair::new(psi.clone(), eta.clone(), 2) {
            Ok(pair) => Some(pair),
            Err(err) => fail(exit_code_for(&err), err),
        }
    } else {
        None
    };

    println!("{}", ReportRow::CSV_HEADER);
    let mut all_pass = true;
    for suite in suites {
        let row = run_suite(suite, &psi, pair.as_ref(), &grids, &p_axis, &grid);
        all_pass &= row.pass;
        println!("{}", row.to_csv());
    }
    if all_pass {
        0
    } else {
        1
    }
}

impl CheckArgs {
    /// The sinogram offset axis reuses the location flags.
    fn b_range_for_p(&self) -> f64 {
        self.grid.b_range
    }
}

fn run_suite(
    suite: Suite,
    psi: &ActivationFunction,
    pair: Option<&ReconstructionPair>,
    grids: &Grids,
    p_axis: &Axis,
    grid: &CartesianGrid,
) -> ReportRow {
    let gaussian = SourceFunction::gaussian(2).expect("catalog gaussian");
    let or_die = |err: TransformError| -> ! { fail(2, err) };
    match suite {
        Suite::Reconstruct => {
            // The unit Gaussian reconstructs to the scale-window floor
            // (about 5.5e-2 relative on the default window [1/16, 16]);
            // the tolerance sits just above it.
            let pair = pair.expect("pair built for this suite");
            let (_, err) = reconstruct(
                &SliceSource::Analytic(&gaussian),
                pair,
                &grids.ygrid,
                grid,
                &grids.omega,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::deviation("reconstruct", err, 6.5e-2)
        }
        Suite::Parseval => {
            let pair = pair.expect("pair built for this suite");
            let identity = parseval_check(
                &SliceSource::Analytic(&gaussian),
                &SliceSource::Analytic(&gaussian),
                pair,
                &grids.ygrid,
                &grids.omega,
                grid,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::scalar("parseval", identity, 2e-2)
        }
        Suite::Transpose => {
            let bump = |_: &[f64], b: f64, a: f64| {
                let la = a.ln();
                Complex64::new((-b * b).exp() * (-la * la).exp(), 0.0)
            };
            let identity = transpose_check(
                &SliceSource::Analytic(&gaussian),
                bump,
                psi,
                &grids.ygrid,
                &grids.omega,
                grid,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::scalar("transpose", identity, 1e-3)
        }
        Suite::Factorize => {
            let deviation = factorization_check(
                &SliceSource::Analytic(&gaussian),
                psi,
                &grids.ygrid,
                p_axis,
                &grids.omega,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::deviation("factorize", deviation, 1e-10)
        }
        Suite::RadonDuality => {
            let rho = |u: &[f64], p: f64| Complex64::new((-p * p).exp() * (1.0 + 0.3 * u[0]), 0.0);
            let identity = duality_check(
                &SliceSource::Analytic(&gaussian),
                rho,
                grids.ygrid.directions(),
                p_axis,
                &grids.omega,
                grid,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::scalar("radon-duality", identity, 1e-3)
        }
        Suite::RadonViaRidgelet => {
            // Canonical input with slice spectra vanishing at frequency
            // zero; sources with direct-current mass cannot round-trip
            // through the scale window.
            let pair = pair.expect("pair built for this suite");
            let lizorkin = SourceFunction::lizorkin_product(2).expect("catalog lizorkin");
            let via = radon_via_ridgelet(
                &SliceSource::Analytic(&lizorkin),
                pair,
                &grids.ygrid,
                p_axis,
                &grids.omega,
            )
            .unwrap_or_else(|e| or_die(e));
            let reference = radon(
                &SliceSource::Analytic(&lizorkin),
                grids.ygrid.directions(),
                p_axis,
                &grids.omega,
            )
            .unwrap_or_else(|e| or_die(e));
            let gap = sinogram_rel_l2(&via, &reference).unwrap_or_else(|e| or_die(e));
            ReportRow::deviation("radon-via-ridgelet", gap, 2e-2)
        }
        Suite::Desingularize => {
            let pair = pair.expect("pair built for this suite");
            let phi = SourceFunction::gaussian_at(2, &[0.5, 0.0]).expect("catalog gaussian");
            let identity = desingularization_check(
                &SliceSource::Analytic(&gaussian),
                &SliceSource::Analytic(&phi),
                pair,
                &grids.ygrid,
                p_axis,
                &grids.omega,
                grid,
            )
            .unwrap_or_else(|e| or_die(e));
            ReportRow::scalar("desingularize", identity, 2e-2)
        }
        Suite::All => unreachable!("expanded before dispatch"),
    }
}

fn run_constants(args: &ConstantsArgs) -> i32 {
    let psi = catalog_activation(&args.psi);
    println!("psi = {}", args.psi.trim());
    match is_admissible(&psi, args.dim) {
        Ok(adm) => {
            match adm.value {
                Some(value) if adm.admissible => {
                    println!("admissible (n={}): true (integral {:.7})", args.dim, value)
                }
                _ => println!("admissible (n={}): {}", args.dim, adm.admissible),
            };
        }
        Err(err) => fail(2, err),
    }
    let eta = match &args.eta {
        Some(name) => {
            println!("eta = {}", name.trim());
            catalog_activation(name)
        }
        None => psi.clone(),
    };
    match k_constant(&psi, &eta, args.dim) {
        Ok(k) => println!("K = {:.7} + {:.7}i", k.re, k.im),
        Err(err) => println!("K: not finite and nonzero ({err})"),
    }
    match c_constant(&psi, &eta) {
        Ok(c) => println!("c = {:.7} + {:.7}i", c.re, c.im),
        Err(err) => println!("c: not finite and nonzero ({err})"),
    }
    0
}

fn run_demo(args: &DemoArgs) -> i32 {
    const SLOPE_WINDOW: (f64, f64) = (8.0, 64.0);
    if args.scale_max < SLOPE_WINDOW.1 {
        fail(
            2,
            format!(
                "slope fit refused: the window reaches scale {} but --scale-max is {}",
                SLOPE_WINDOW.1, args.scale_max
            ),
        );
    }
    let source = SourceFunction::gaussian(2).expect("catalog gaussian");
    let psi = ActivationFunction::remark43(2).expect("catalog remark43(2)");
    let directions = DirectionSet::uniform_circle(4).expect("four directions");
    let b_axis = Axis::symmetric(2.0, 9).expect("location axis");
    let octaves = args.scale_max.log2();
    let count = (octaves * 10.0).round() as usize + 1;
    let scales = ScaleGrid::new(1.0, args.scale_max, count).unwrap_or_else(|err| fail(2, err));
    let omega_count = ((128.0 * args.scale_max) as usize).next_power_of_two() + 1;
    let omega = Axis::symmetric(16.0, omega_count).expect("frequency axis");
    let ygrid = YGrid::new(directions, b_axis.clone(), scales.clone());
    let field = ridgelet(&SliceSource::Analytic(&source), &psi, &ygrid, &omega)
        .unwrap_or_else(|err| fail(2, err));
    let b0 = b_axis.index_of_zero().expect("odd symmetric axis");

    let mut table = String::from("a,scaled_abs\n");
    for j in 0..scales.count() {
        let a = scales.value(j);
        table.push_str(&format!("{:.9e},{:.9e}\n", a, a * field.value(0, b0, j).norm()));
    }
    match &args.out {
        Some(path) => {
            if let Err(err) = std::fs::write(path, &table) {
                fail(2, format!("cannot write {}: {err}", path.display()));
            }
        }
        None => print!("{table}"),
    }

    let plateau = 24.0 * std::f64::consts::PI.sqrt();
    let mut worst = 0.0f64;
    for j in 0..scales.count() {
        let a = scales.value(j);
        if (16.0..=64.0).contains(&a) {
            let value = a * field.value(0, b0, j).norm();
            worst = worst.max((value / plateau - 1.0).abs());
        }
    }
    let plateau_pass = worst <= 1e-2;
    eprintln!(
        "plateau: target {plateau:.4}, max deviation {:.2}% on a in [16, 64]: {}",
        worst * 100.0,
        if plateau_pass { "pass" } else { "fail" }
    );
    let slope = decay_slope(&field, SLOPE_WINDOW.0, SLOPE_WINDOW.1)
        .unwrap_or_else(|| fail(2, "slope fit needs at least two scales in the window"));
    let slope_pass = (slope + 1.0).abs() <= 0.02;
    eprintln!(
        "slope on [{}, {}]: {slope:.4} (target -1.00 +- 0.02): {}",
        SLOPE_WINDOW.0,
        SLOPE_WINDOW.1,
        if slope_pass { "pass" } else { "fail" }
    );
    if plateau_pass && slope_pass {
        0
    } else {
        1
    }
}
