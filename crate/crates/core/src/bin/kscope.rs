use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kscope::adaptive::{estimate_from_iteration, EstimateOptions, EstimateSource};
use kscope::analysis::{compute_bounds, BoundsConfig};
use kscope::bounds::{curves_to_csv, default_eps_family, BoundKind};
use kscope::gallery::{self, NAMES};
use kscope::io::{read_matrix, write_matrix_market};
use kscope::krylov::{arnoldi, gmres_residual_ratios, random_unit_vector, trial_rng};
use kscope::report::{ConvergencePlot, SetPlot};
use kscope::sets::{
    cg_region, extract_contour, fov_boundary, pseudospectrum_grid, GridBox, CG_GRID_SIZE,
    FOV_ANGLES,
};
use kscope::verify::{paper_suite, properties_suite, render_table};
use kscope::{ComplexMatrix, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "kscope",
    version,
    about = "Spectral sets and GMRES convergence bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or build gallery matrices.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Field of values, pseudospectra and the Crouzeix-Greenbaum region.
    Sets(RunArgs),
    /// Bound curves, the ideal-GMRES sandwich and GMRES runs.
    Bounds(RunArgs),
    /// Estimates from the Arnoldi Hessenberg matrix at given iterations.
    Adaptive {
        #[command(flatten)]
        run: RunArgs,
        /// Snapshot iterations, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "4")]
        at: Vec<usize>,
        /// Use the square `H_k` instead of the rectangular `H̃_k`.
        #[arg(long)]
        square: bool,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    List,
    /// Build `<name>` with `--param k=v` or trailing `--key value` pairs.
    Build {
        name: String,
        #[arg(long = "param", value_name = "K=V")]
        param: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, hide = true)]
        extra: Vec<String>,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Matrix Market or dense JSON file.
    #[arg(long, conflicts_with = "gallery")]
    matrix: Option<PathBuf>,
    #[arg(long)]
    gallery: Option<String>,
    #[arg(long = "param", value_name = "K=V")]
    param: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    kmax: usize,
    /// `re_min,re_max,im_min,im_max`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r#box: Vec<f64>,
    #[arg(long, default_value_t = kscope::sets::GRID_SIZE)]
    grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long = "no-svg")]
    no_svg: bool,
    /// Use 2 as the field-of-values constant.
    #[arg(long = "conjecture-cfov2")]
    conjecture_cfov2: bool,
    /// Bound kinds, comma separated; all when empty.
    #[arg(long, value_delimiter = ',')]
    kinds: Vec<String>,
}

enum Failure {
    Usage(String),
    Numerical(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownEntry(_) | Error::InvalidArgument(_) | Error::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_params(pairs: &[String], extra: &[String]) -> Outcome<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: &str| -> Outcome<()> {
        let x: f64 = v
            .parse()
            .map_err(|_| usage(format!("parameter `{k}` needs a number, got `{v}`")))?;
        out.insert(k.to_string(), x);
        Ok(())
    };
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| usage(format!("expected k=v, got `{p}`")))?;
        put(k, v)?;
    }
    let mut it = extra.iter();
    while let Some(flag) = it.next() {
        let key = flag
            .strip_prefix("--")
            .ok_or_else(|| usage(format!("unexpected argument `{flag}`")))?;
        let value = it
            .next()
            .ok_or_else(|| usage(format!("`{flag}` needs a value")))?;
        put(key, value)?;
    }
    Ok(out)
}

impl RunArgs {
    fn validate(&self) -> Outcome<()> {
        if self.kmax == 0 {
            return Err(usage("--kmax must be positive"));
        }
        if self.grid < 2 {
            return Err(usage("--grid must be at least 2"));
        }
        if let Some(e) = self.eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(usage(format!("--eps values must be positive, got {e}")));
        }
        if !self.r#box.is_empty() && self.r#box.len() != 4 {
            return Err(usage("--box needs re_min,re_max,im_min,im_max"));
        }
        Ok(())
    }

    fn matrix(&self) -> Outcome<(String, ComplexMatrix)> {
        match (&self.matrix, &self.gallery) {
            (Some(p), None) => Ok((
                p.file_stem()
                    .map_or("matrix".into(), |s| s.to_string_lossy().into_owned()),
                read_matrix(p)?,
            )),
            (None, Some(name)) => {
                let e = gallery::build(name, &parse_params(&self.param, &[])?)?;
                Ok((e.name, e.matrix))
            }
            _ => Err(usage("give exactly one of --matrix or --gallery")),
        }
    }

    fn bbox(&self) -> Outcome<Option<GridBox>> {
        match self.r#box.as_slice() {
            [] => Ok(None),
            [a, b, c, d] => Ok(Some(GridBox::new(*a, *b, *c, *d)?)),
            _ => Err(usage("--box needs four values")),
        }
    }

    fn kinds(&self) -> Outcome<Vec<BoundKind>> {
        let all = [
            BoundKind::EV,
            BoundKind::EVprime,
            BoundKind::FOV,
            BoundKind::FOVprime,
            BoundKind::PSA,
            BoundKind::PSAprime,
            BoundKind::PSAdoubleprime,
            BoundKind::CG,
        ];
        self.kinds
            .iter()
            .map(|s| {
                all.iter()
                    .copied()
                    .find(|k| k.as_str().eq_ignore_ascii_case(s))
                    .ok_or_else(|| usage(format!("unknown bound kind `{s}`")))
            })
            .collect()
    }

    fn svg(&self) -> bool {
        !self.no_svg
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome<()> {
    fs::write(dir.join(name), contents)?;
    println!("wrote {}", dir.join(name).display());
    Ok(())
}

fn cmd_gallery(action: GalleryAction) -> Outcome<()> {
    match action {
        GalleryAction::List => {
            for (name, desc) in NAMES {
                println!("{name:<16} {desc}");
            }
            Ok(())
        }
        GalleryAction::Build {
            name,
            param,
            mut out,
            extra,
        } => {
            // trailing pairs may also carry --out
            let mut rest = Vec::new();
            let mut it = extra.into_iter();
            while let Some(flag) = it.next() {
                if flag == "--out" {
                    out = it
                        .next()
                        .ok_or_else(|| usage("--out needs a value"))?
                        .into();
                } else {
                    rest.push(flag);
                }
            }
            let entry = gallery::build(&name, &parse_params(&param, &rest)?)?;
            fs::create_dir_all(&out)?;
            let path = out.join(format!("{name}.mtx"));
            write_matrix_market(&path, &entry.matrix)?;
            println!("wrote {}", path.display());
            write(
                &out,
                &format!("{name}.json"),
                &serde_json::to_string_pretty(&entry).map_err(Error::from)?,
            )
        }
    }
}

fn cmd_sets(args: RunArgs) -> Outcome<()> {
    args.validate()?;
    let (name, a) = args.matrix()?;
    fs::create_dir_all(&args.out)?;
    let spec = kscope::linalg::eigen_full(&a)?;
    let fov = fov_boundary(&a, FOV_ANGLES)?;
    let eps = if args.eps.is_empty() {
        default_eps_family()
    } else {
        args.eps.clone()
    };
    let eps_max = eps.iter().copied().fold(0.0, f64::max);
    let bbox = match args.bbox()? {
        Some(b) => b,
        None => GridBox::covering(&a, &spec.eigenvalues, spec.norm_a, eps_max)?,
    };
    let grid = pseudospectrum_grid(&a, bbox, args.grid, args.grid)?;
    let (lo, hi) = (grid.min_value(), grid.max_value());
    let contours: Vec<_> = eps
        .iter()
        .filter(|&&e| e > lo && e < hi)
        .map(|&e| extract_contour(&grid, e))
        .collect::<Result<_, _>>()?;

    let mut fov_csv = String::from("re,im\n");
    for z in &fov.vertices {
        fov_csv.push_str(&format!("{:.17e},{:.17e}\n", z.re, z.im));
    }
    write(&args.out, &format!("{name}_fov.csv"), &fov_csv)?;
    write(&args.out, &format!("{name}_grid.csv"), &grid.to_csv())?;
    let mut eig_csv = String::from("re,im,kappa\n");
    for (z, k) in spec.eigenvalues.iter().zip(&spec.kappa_lambda) {
        eig_csv.push_str(&format!("{:.17e},{:.17e},{:.17e}\n", z.re, z.im, k));
    }
    write(&args.out, &format!("{name}_eigenvalues.csv"), &eig_csv)?;
    let mut contour_csv = String::from("epsilon,loop,re,im\n");
    for c in &contours {
        for (l, lp) in c.loops.iter().enumerate() {
            for z in lp {
                contour_csv.push_str(&format!(
                    "{:e},{l},{:.17e},{:.17e}\n",
                    c.epsilon, z.re, z.im
                ));
            }
        }
    }
    write(&args.out, &format!("{name}_contours.csv"), &contour_csv)?;

    let cg = match cg_region(&a, &fov, CG_GRID_SIZE) {
        Ok(r) => Some(r),
        Err(Error::SingularMatrix) => None,
        Err(e) => return Err(e.into()),
    };
    let summary = serde_json::json!({
        "numerical_radius": fov.numerical_radius,
        "min_real_part": fov.min_real_part,
        "kappa_v": spec.kappa_v(),
        "kappa_v_raw": spec.kappa_v_raw,
        "contours": contours.iter().map(|c| serde_json::json!({
            "epsilon": c.epsilon, "length": c.length,
            "encloses_origin": c.encloses_origin, "touches_boundary": c.touches_boundary,
        })).collect::<Vec<_>>(),
        "cg": cg.as_ref().map(|r| serde_json::json!({
            "radius": r.radius, "surrounds_origin": r.surrounds_origin(),
        })),
    });
    write(
        &args.out,
        &format!("{name}_sets.json"),
        &serde_json::to_string_pretty(&summary).map_err(Error::from)?,
    )?;

    if args.svg() {
        let mut plot = SetPlot::new(format!("{name}: eigenvalues, W(A), pseudospectra"));
        plot.points = spec.eigenvalues.clone();
        let mut w = fov.vertices.clone();
        w.push(w[0]);
        plot.add_curve("W(A)", vec![w], false);
        for c in &contours {
            plot.add_curve(format!("eps = {:e}", c.epsilon), c.loops.clone(), false);
        }
        if let Some(r) = &cg {
            plot.add_curve("Omega_CG", r.contour.loops.clone(), true);
        }
        write(&args.out, &format!("{name}_sets.svg"), &plot.to_svg())?;
    }
    Ok(())
}

fn cmd_bounds(args: RunArgs) -> Outcome<()> {
    args.validate()?;
    let (name, a) = args.matrix()?;
    fs::create_dir_all(&args.out)?;
    let cfg = BoundsConfig {
        kmax: args.kmax,
        eps: (!args.eps.is_empty()).then(|| args.eps.clone()),
        bbox: args.bbox()?,
        grid: args.grid,
        conjecture: args.conjecture_cfov2,
        kinds: args.kinds()?,
        seed: args.seed,
        ..Default::default()
    };
    let rep = compute_bounds(&a, &cfg)?;
    let mut all = rep.curves.clone();
    all.extend(rep.envelope.iter().cloned());
    write(
        &args.out,
        &format!("{name}_bounds.csv"),
        &curves_to_csv(&all),
    )?;
    let mut sw = String::from("k,lower,upper,gmres_worst\n");
    for k in 0..=args.kmax {
        let at = |v: &[f64]| v[k.min(v.len() - 1)];
        sw.push_str(&format!(
            "{k},{:.17e},{:.17e},{:.17e}\n",
            at(&rep.sandwich.lower),
            at(&rep.sandwich.upper),
            rep.gmres_worst[k]
        ));
    }
    write(&args.out, &format!("{name}_sandwich.csv"), &sw)?;
    write(
        &args.out,
        &format!("{name}_bounds.json"),
        &serde_json::to_string_pretty(&rep).map_err(Error::from)?,
    )?;
    if args.svg() {
        let mut plot = ConvergencePlot::new(format!("{name}: bounds"));
        plot.add("GMRES (worst of trials)", rep.gmres_worst.clone(), false);
        plot.add("ideal GMRES upper", rep.sandwich.upper.clone(), true);
        for c in &rep.curves {
            let label = match c.epsilon {
                Some(e) => format!("{} eps={e:e}", c.kind.as_str()),
                None => c.kind.as_str().to_string(),
            };
            plot.add(
                if c.applicable {
                    label
                } else {
                    format!("{label} (n/a)")
                },
                c.values.clone(),
                !c.applicable,
            );
        }
        if let Some(env) = &rep.envelope {
            plot.add("PSA envelope", env.values.clone(), false);
        }
        write(&args.out, &format!("{name}_bounds.svg"), &plot.to_svg())?;
    }
    Ok(())
}

fn cmd_adaptive(args: RunArgs, at: Vec<usize>, square: bool) -> Outcome<()> {
    args.validate()?;
    let (name, a) = args.matrix()?;
    let n = a.rows();
    if at.iter().any(|&k| k == 0 || k > n) {
        return Err(usage(format!("--at iterations must lie in 1..={n}")));
    }
    fs::create_dir_all(&args.out)?;
    let mut rng = trial_rng(args.seed, 0);
    let r0 = random_unit_vector(n, &mut rng);
    let kmax = args.kmax.max(*at.iter().max().unwrap_or(&1));
    let hist = gmres_residual_ratios(&a, &r0, kmax.min(n), false)?;
    write(&args.out, &format!("{name}_gmres.csv"), &hist.to_csv())?;
    let dec = arnoldi(&a, &r0, *at.iter().max().unwrap_or(&1))?;
    let eps = if args.eps.is_empty() {
        default_eps_family()
    } else {
        args.eps.clone()
    };
    let realized: Vec<f64> = (0..=kmax).map(|k| hist.relative_at(k)).collect();
    for &k in &at {
        if k > dec.steps() {
            println!(
                "skipping k = {k}: Arnoldi stopped after {} steps",
                dec.steps()
            );
            continue;
        }
        let est = estimate_from_iteration(
            &dec,
            k,
            &eps,
            kmax,
            &EstimateOptions {
                source: if square {
                    EstimateSource::SquareHk
                } else {
                    EstimateSource::RectHtilde
                },
                bbox: args.bbox()?,
                resolution: args.grid,
                matrix: Some(&a),
            },
        )?;
        write(
            &args.out,
            &format!("{name}_adaptive_k{k}.csv"),
            &curves_to_csv(&est.curves),
        )?;
        write(
            &args.out,
            &format!("{name}_adaptive_k{k}.json"),
            &serde_json::to_string_pretty(&est).map_err(Error::from)?,
        )?;
        if args.svg() {
            let mut plot = ConvergencePlot::new(format!("{name}: estimates from iteration {k}"));
            plot.marker = Some(k);
            plot.add("GMRES", realized.clone(), false);
            for c in &est.curves {
                plot.add(
                    format!("estimate eps={:e}", c.epsilon.unwrap_or(f64::NAN)),
                    c.values.clone(),
                    !c.applicable,
                );
            }
            write(
                &args.out,
                &format!("{name}_adaptive_k{k}.svg"),
                &plot.to_svg(),
            )?;
        }
    }
    Ok(())
}

fn cmd_verify(suite: &str, trials: usize, seed: u64) -> Outcome<bool> {
    let checks = match suite {
        "paper" => paper_suite()?,
        "properties" => {
            if trials == 0 {
                return Err(usage("--trials must be positive"));
            }
            properties_suite(trials, seed)?
        }
        other => {
            return Err(usage(format!(
                "unknown suite `{other}`; expected paper or properties"
            )))
        }
    };
    print!("{}", render_table(&checks));
    Ok(checks.iter().all(|c| c.passed))
}

fn init_threads() -> Outcome<()> {
    if let Ok(v) = std::env::var("KSCOPE_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            usage(format!(
                "KSCOPE_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome<bool> {
    init_threads()?;
    match cli.command {
        Command::Gallery { action } => cmd_gallery(action).map(|_| true),
        Command::Sets(a) => cmd_sets(a).map(|_| true),
        Command::Bounds(a) => cmd_bounds(a).map(|_| true),
        Command::Adaptive { run, at, square } => cmd_adaptive(run, at, square).map(|_| true),
        Command::Verify {
            suite,
            trials,
            seed,
        } => cmd_verify(&suite, trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
