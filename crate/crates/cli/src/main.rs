//! `noon` — sweeps, optimization, figure data and self-verification for the
//! NOON-state post-selection simulator.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing invariant,
//! 2 on flag or domain errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noon_sim::optimize::{optimize, SearchConfig};
use noon_sim::sweep::{self, EvalCutoff, Fig1Config, SvPairing, SweepConfig};
use noon_sim::verify::{self, FaultInjection, VerifyOptions};
use noon_sim::FamilyTag;

#[derive(Parser)]
#[command(name = "noon", version, about = "Two-mode Fock-space NOON-state simulator")]
struct Cli {
    /// Worker threads for sweeps and optimization (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Photon-number cutoff override for the constructed modes.
    #[arg(long = "n-max", global = true)]
    n_max: Option<usize>,

    /// Truncation tail tolerance for automatic cutoffs.
    #[arg(long, global = true)]
    tail: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

/// Resolves the shared --n-max/--tail flags into a cutoff policy.
fn eval_cutoff_from(n_max: Option<usize>, tail: Option<f64>) -> Result<EvalCutoff, String> {
    if let Some(t) = tail {
        if !(f64::MIN_POSITIVE..0.1).contains(&t) {
            return Err(format!("--tail must lie in (0, 0.1), got {t}"));
        }
    }
    Ok(match (n_max, tail) {
        (Some(u), _) => EvalCutoff::Fixed(u),
        (None, Some(t)) => EvalCutoff::Auto(t),
        (None, None) => EvalCutoff::BlockExact,
    })
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    /// Squeeze amplitude maximizes the post-selected fidelity (default).
    Fidelity,
    /// Squeeze amplitude maximizes the overlap with the ideal input.
    Overlap,
    /// Fixed squeeze amplitude; set it with --sv-r.
    Fixed,
}

#[derive(Args)]
struct SweepArgs {
    /// Input family; repeat for several (sv-cs, ecs-cs, ocs-cs).
    #[arg(long = "family", required = true)]
    families: Vec<FamilyTag>,

    /// Post-selected photon number; repeat for several (positive even).
    #[arg(long = "N", required = true)]
    photon_numbers: Vec<usize>,

    #[arg(long, default_value_t = 0.0)]
    alpha_min: f64,
    #[arg(long, default_value_t = 2.2)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha_step: f64,

    /// Pairing rule for the SV-CS squeeze amplitude.
    #[arg(long, value_enum, default_value = "fidelity")]
    sv_pairing: PairingArg,

    /// Squeeze amplitude used with --sv-pairing fixed.
    #[arg(long)]
    sv_r: Option<f64>,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "family")]
    family: FamilyTag,

    /// Post-selected photon number (any N >= 1).
    #[arg(long = "N")]
    photon_number: usize,

    /// Points per axis of the coarse search grid.
    #[arg(long, default_value_t = 50)]
    grid: usize,

    /// Coordinate-descent refinement passes.
    #[arg(long, default_value_t = 6)]
    refine_iters: usize,

    /// Points on the coarse relative-phase grid.
    #[arg(long, default_value_t = 16)]
    phase_grid: usize,

    /// Write the report here as well as to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Fig1Args {
    /// Output directory for the panel CSVs and the gnuplot script.
    #[arg(long, default_value = "fig1")]
    out: PathBuf,

    #[arg(long, default_value_t = 2.2)]
    alpha_max: f64,
    #[arg(long, default_value_t = 0.05)]
    alpha_step: f64,

    /// Pairing rule for the SV-CS squeeze amplitude.
    #[arg(long, value_enum, default_value = "fidelity")]
    sv_pairing: PairingArg,

    /// Squeeze amplitude used with --sv-pairing fixed.
    #[arg(long)]
    sv_r: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Flip the disentangling signs to demonstrate the suite catches it.
    #[arg(long, hide = true)]
    inject_sign_flip: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep fidelity, overlap and post-selection probability over |alpha|.
    Sweep(SweepArgs),
    /// Maximize the NOON fidelity over the input amplitudes.
    Optimize(OptimizeArgs),
    /// Emit the four-panel overlap-versus-|alpha| figure data.
    ReproduceFig1(Fig1Args),
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
}

fn pairing_from(arg: PairingArg, sv_r: Option<f64>) -> Result<SvPairing, String> {
    match arg {
        PairingArg::Fidelity => Ok(SvPairing::FidelityOptimal),
        PairingArg::Overlap => Ok(SvPairing::OverlapOptimal),
        PairingArg::Fixed => {
            let r = sv_r.ok_or_else(|| "--sv-pairing fixed requires --sv-r".to_string())?;
            if !(0.0..=5.0).contains(&r) {
                return Err(format!("--sv-r must lie in [0, 5], got {r}"));
            }
            Ok(SvPairing::Fixed(r))
        }
    }
}

fn run_sweep(args: SweepArgs, eval_cutoff: EvalCutoff) -> Result<(), String> {
    let pairing = pairing_from(args.sv_pairing, args.sv_r)?;
    let grid = sweep::alpha_grid(args.alpha_min, args.alpha_max, args.alpha_step)
        .map_err(|e| e.to_string())?;
    let mut config = SweepConfig::new(args.families, args.photon_numbers, grid);
    config.sv_pairing = pairing;
    config.eval_cutoff = eval_cutoff;
    let records = sweep::run(&config).map_err(|e| e.to_string())?;
    let file = File::create(&args.out).map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    sweep::write_csv(&mut w, &records).map_err(|e| e.to_string())?;
    w.flush().map_err(|e| e.to_string())?;
    eprintln!("wrote {} rows to {}", records.len(), args.out.display());
    Ok(())
}

fn run_optimize(args: OptimizeArgs, eval_cutoff: EvalCutoff) -> Result<(), String> {
    let cfg = SearchConfig {
        coarse_grid: args.grid,
        refine_passes: args.refine_iters,
        phase_grid: args.phase_grid,
        eval_cutoff,
        ..SearchConfig::default()
    };
    let report = optimize(args.family, args.photon_number, &cfg).map_err(|e| e.to_string())?;
    let text = report.render();
    print!("{text}");
    if let Some(path) = args.out {
        let mut f = File::create(&path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        f.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn run_fig1(args: Fig1Args, eval_cutoff: EvalCutoff) -> Result<(), String> {
    let pairing = pairing_from(args.sv_pairing, args.sv_r)?;
    let cfg = Fig1Config {
        alpha_max: args.alpha_max,
        alpha_step: args.alpha_step,
        sv_pairing: pairing,
        eval_cutoff,
        ..Fig1Config::default()
    };
    let panels = sweep::fig1_panels(&cfg).map_err(|e| e.to_string())?;
    let written = sweep::write_fig1(&args.out, &panels).map_err(|e| e.to_string())?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn run_verify(args: VerifyArgs, n_max: Option<usize>, tail: Option<f64>) -> ExitCode {
    let fault = if args.inject_sign_flip {
        FaultInjection::DisentangledSignFlip
    } else {
        FaultInjection::None
    };
    let mut opts = VerifyOptions::default();
    if let Some(u) = n_max {
        if !(4..=48).contains(&u) {
            eprintln!("error: verify --n-max must lie in [4, 48], got {u}");
            return ExitCode::from(2);
        }
        opts.n_max = u;
    }
    if tail.is_some() {
        eprintln!("note: --tail does not affect verify; the suite pins its own truncation");
    }
    let report = verify::run_with(fault, opts);
    print!("{}", report.render());
    if report.all_passed() {
        println!("verify: all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("verify: FAILURES detected");
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        // Ignore the error when a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let eval_cutoff = match eval_cutoff_from(cli.n_max, cli.tail) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = match cli.command {
        Command::Sweep(args) => run_sweep(args, eval_cutoff),
        Command::Optimize(args) => run_optimize(args, eval_cutoff),
        Command::ReproduceFig1(args) => run_fig1(args, eval_cutoff),
        Command::Verify(args) => return run_verify(args, cli.n_max, cli.tail),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            ExitCode::from(2)
        }
    }
}
