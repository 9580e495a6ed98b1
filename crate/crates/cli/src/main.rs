mod commands;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use ftquad::comparison::GlueCase;
use ftquad::config::SceneFile;
use ftquad::forward::SolverOptions;
use serde_json::{json, Value};

use commands::{ClassArg, Failure, Outcome};
use report::RunReport;

#[derive(Parser)]
#[command(name = "ftquad", version, about = "Weighted Fermat-Torricelli quadrilaterals on constant-curvature planes")]
struct Cli {
    /// Scene file (JSON).
    #[arg(long, global = true)]
    scene: Option<PathBuf>,
    /// Machine-readable JSON output; `--json false` prints `path = value` lines.
    #[arg(long, global = true, action = ArgAction::Set, num_args = 0..=1, default_value_t = true, default_missing_value = "true")]
    json: bool,
    /// Solver tolerance, overriding the scene.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Solver iteration cap, overriding the scene.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convexity, perimeter bound and stationarity residual of the scene.
    Check,
    /// Solve for the weighted minimizer.
    Forward,
    /// Weights that make the scene's point the minimizer.
    Inverse {
        /// Weight budget; defaults to the sum of the scene weights.
        #[arg(long)]
        budget: Option<f64>,
        /// Evaluate at w_D: a value, `a:b:n`, or "sweep a:b:n".
        #[arg(long, allow_hyphen_values = true)]
        wd: Option<String>,
    },
    /// Tangent-plane image and its parallelogram.
    Symmetrize {
        #[arg(long, value_enum, default_value_t = ClassOpt::Auto)]
        class: ClassOpt,
        /// Write the figure as SVG.
        #[arg(long)]
        out_svg: Option<PathBuf>,
        /// Tolerance for the parallelogram test; defaults to 1e-9 · max weight.
        #[arg(long)]
        par_tol: Option<f64>,
    },
    /// Glue the sub-triangles onto comparison planes.
    Glue {
        #[arg(long, value_enum)]
        case: CaseOpt,
        #[arg(long, allow_hyphen_values = true)]
        k1: f64,
        #[arg(long, allow_hyphen_values = true)]
        k2: f64,
        /// Weight budget for the comparative lines; defaults to the sum of the scene weights.
        #[arg(long)]
        budget: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassOpt {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    Auto,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseOpt {
    Mprime,
    Mdoubleprime,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Forward => "forward",
            Command::Inverse { .. } => "inverse",
            Command::Symmetrize { .. } => "symmetrize",
            Command::Glue { .. } => "glue",
        }
    }
}

fn fail_early(message: &str) -> ExitCode {
    eprintln!("ftquad: {message}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Some(scene_path) = cli.scene.clone() else {
        return fail_early("--scene <path> is required");
    };
    let bytes = match std::fs::read(&scene_path) {
        Ok(b) => b,
        Err(e) => return fail_early(&format!("cannot read {}: {e}", scene_path.display())),
    };
    let Ok(text) = std::str::from_utf8(&bytes) else {
        return fail_early(&format!("{} is not UTF-8", scene_path.display()));
    };
    let file = match SceneFile::parse(text) {
        Ok(f) => f,
        Err(e) => return fail_early(&format!("{}: {e}", scene_path.display())),
    };

    // `check` reports perimeter violations itself; everything else needs a
    // buildable scene up front.
    if !matches!(cli.command, Command::Check) {
        if let Err(e) = file.build() {
            return fail_early(&format!("{}: {e}", scene_path.display()));
        }
    }
    let mut opts = file.solver.map(|s| SolverOptions { tol: s.tol, max_iter: s.max_iter }).unwrap_or_default();
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0) {
            return fail_early(&format!("--tol must be positive, got {t}"));
        }
        opts.tol = t;
    }
    if let Some(n) = cli.max_iter {
        opts.max_iter = n;
    }

    let outcome = run(&cli.command, &file, &opts);
    let args: Vec<String> = std::env::args().skip(1).collect();
    let command = json!({
        "name": cli.command.name(),
        "argv": args,
        "solver": { "tol": opts.tol, "max_iter": opts.max_iter },
    });
    let report = match outcome {
        Ok(Outcome { results, warnings, exit_code }) => RunReport {
            command,
            scene_path: scene_path.display().to_string(),
            scene_sha256: report::sha256_hex(&bytes),
            results,
            warnings,
            exit_code,
            error: None,
        },
        Err(Failure { exit_code, kind, message, results, warnings }) => RunReport {
            command,
            scene_path: scene_path.display().to_string(),
            scene_sha256: report::sha256_hex(&bytes),
            results,
            warnings,
            exit_code,
            error: Some((kind, message)),
        },
    };
    let value = report.to_value();
    if cli.json {
        print!("{}", report::to_json(&value));
    } else {
        print!("{}", report::to_text(&value));
    }
    if let Some((_, message)) = &report.error {
        eprintln!("ftquad: {message}");
    }
    ExitCode::from(report.exit_code)
}

fn run(command: &Command, file: &SceneFile, opts: &SolverOptions) -> Result<Outcome, Failure> {
    if let Command::Check = command {
        return commands::check(file, opts);
    }
    // Already validated in `main`.
    let scene = file.build().map_err(|e| Failure {
        exit_code: 1,
        kind: "Scene".into(),
        message: e.to_string(),
        results: Value::Null,
        warnings: Vec::new(),
    })?;
    match command {
        Command::Check => unreachable!(),
        Command::Forward => commands::forward(&scene, opts),
        Command::Inverse { budget, wd } => {
            let values = match wd {
                None => Vec::new(),
                Some(spec) => commands::parse_wd(spec).map_err(|m| Failure {
                    exit_code: 1,
                    kind: "Usage".into(),
                    message: m,
                    results: Value::Null,
                    warnings: Vec::new(),
                })?,
            };
            commands::inverse(&scene, opts, *budget, &values)
        }
        Command::Symmetrize { class, out_svg, par_tol } => {
            let class = match class {
                ClassOpt::A => ClassArg::A,
                ClassOpt::B => ClassArg::B,
                ClassOpt::Auto => ClassArg::Auto,
                ClassOpt::Direct => ClassArg::Direct,
            };
            commands::symmetrize_cmd(&scene, opts, class, *par_tol, out_svg.as_ref())
        }
        Command::Glue { case, k1, k2, budget } => {
            let case = match case {
                CaseOpt::Mprime => GlueCase::MPrime,
                CaseOpt::Mdoubleprime => GlueCase::MDoublePrime,
            };
            commands::glue(&scene, opts, case, *k1, *k2, *budget)
        }
    }
}
