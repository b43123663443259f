use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sirnet::classifier::{classify_fixed, classify_random_base};
use sirnet::harness::{dump_curve_csv, frustration_curve, rare_event_mc};
use sirnet::minimizer::{
    minimize_b0, minimize_direct_uplink, minimize_pathloss_free_downlink, oracle_minimize_updir,
    RadialProblem,
};
use sirnet::model::{product_intensity, BaseFading, NetworkModel};
use sirnet::sampler::{dump_users_csv, sample_ppp, FadingKernel};
use sirnet::scenario::{parse_scenario, scenario_hash};
use sirnet::sir::Mode;

#[derive(Parser)]
#[command(
    name = "sirnet",
    about = "SIR frustration analysis for marked Poisson networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MinimizeKind {
    /// Direct-uplink frustration minimizer
    Updir,
    /// Small-b boundary solution (interference constraint only)
    B0,
    /// Path-loss-free downlink family
    PlfreeDodir,
    /// Discretized dual-ascent oracle, direct uplink
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one Poisson configuration and dump the users as CSV
    Sample {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// A-priori frustration curve p(c) on a uniform threshold grid
    Curve {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "up-dir")]
        mode: String,
        #[arg(long)]
        cmin: f64,
        #[arg(long)]
        cmax: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rare-event Monte Carlo study of the frustrated-fraction event
    Mc {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        bfrac: f64,
        #[arg(long, default_value = "up-dir")]
        mode: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rate-function minimizer for the frustration event
    Minimize {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, value_enum)]
        kind: MinimizeKind,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exponential vs. sub-exponential decay verdict
    Classify {
        #[arg(long)]
        scenario: PathBuf,
        /// Four mass targets b1,b2,b3,b4 (up, up-dir, do, do-dir)
        #[arg(long, value_delimiter = ',')]
        b: Vec<f64>,
        /// Four QoS thresholds c1,c2,c3,c4
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
    },
}

fn load(path: &PathBuf) -> Result<(NetworkModel, String), String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read scenario {}: {e}", path.display()))?;
    let model = parse_scenario(&text).map_err(|e| e.to_string())?;
    Ok((model, scenario_hash(&text)))
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

fn four(name: &str, v: &[f64]) -> Result<[f64; 4], String> {
    v.try_into()
        .map_err(|_| format!("--{name} needs exactly 4 comma-separated values, got {}", v.len()))
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Sample { scenario, lambda, seed, out } => {
            let (model, _) = load(&scenario)?;
            let kernel = FadingKernel::Iid(model.fading.clone());
            let sample =
                sample_ppp(&model, &kernel, lambda, seed).map_err(|e| e.to_string())?;
            let file = fs::File::create(&out).map_err(|e| e.to_string())?;
            dump_users_csv(&sample, model.window.dim(), file).map_err(|e| e.to_string())?;
            println!("wrote {} users to {}", sample.users.entries().len(), out.display());
        }
        Command::Curve { scenario, mode, cmin, cmax, points, out } => {
            let (model, _) = load(&scenario)?;
            let mode = parse_mode(&mode)?;
            if points < 2 {
                return Err("--points must be at least 2".into());
            }
            let grid: Vec<f64> = (0..points)
                .map(|j| cmin + (cmax - cmin) * j as f64 / (points - 1) as f64)
                .collect();
            let curve =
                frustration_curve(&model, mode, &grid).map_err(|e| e.to_string())?;
            let file = fs::File::create(&out).map_err(|e| e.to_string())?;
            dump_curve_csv(&curve, file).map_err(|e| e.to_string())?;
            println!("wrote {} curve points to {}", curve.len(), out.display());
        }
        Command::Mc { scenario, lambda, samples, c, bfrac, mode, seed, out } => {
            let (model, hash) = load(&scenario)?;
            let mode = parse_mode(&mode)?;
            let mut report = rare_event_mc(&model, lambda, samples, c, bfrac, mode, seed)
                .map_err(|e| e.to_string())?;
            report.scenario_hash = hash;
            let file = fs::File::create(&out).map_err(|e| e.to_string())?;
            report.write_csv(file).map_err(|e| e.to_string())?;
            let (lo, hi) = sirnet::harness::wilson_ci(report.hit_count(), report.n_samples);
            println!(
                "{} hits / {} samples (frequency {:.3e}, 95% CI [{:.3e}, {:.3e}]) -> {}",
                report.hit_count(),
                report.n_samples,
                report.hit_frequency(),
                lo,
                hi,
                out.display()
            );
        }
        Command::Minimize { scenario, c, b, kind, out } => {
            let (model, _) = load(&scenario)?;
            let file = fs::File::create(&out).map_err(|e| e.to_string())?;
            match kind {
                MinimizeKind::Updir => {
                    let p = RadialProblem::from_model(&model, c, b).map_err(|e| e.to_string())?;
                    let sol = minimize_direct_uplink(&p).map_err(|e| e.to_string())?;
                    sol.dump_csv(&p, 64, 32, file).map_err(|e| e.to_string())?;
                    println!("entropy {:.9} -> {}", sol.entropy, out.display());
                }
                MinimizeKind::B0 => {
                    let p = RadialProblem::from_model(&model, c, 0.0).map_err(|e| e.to_string())?;
                    let sol = minimize_b0(&p).map_err(|e| e.to_string())?;
                    sol.dump_csv(&p, 64, 32, file).map_err(|e| e.to_string())?;
                    println!("entropy {:.9} -> {}", sol.entropy, out.display());
                }
                MinimizeKind::PlfreeDodir => {
                    let sol = minimize_pathloss_free_downlink(&model, c, b)
                        .map_err(|e| e.to_string())?;
                    dump_plfree_csv(&model, &sol, file).map_err(|e| e.to_string())?;
                    println!("entropy {:.9} -> {}", sol.entropy, out.display());
                }
                MinimizeKind::Oracle => {
                    let p = RadialProblem::from_model(&model, c, b).map_err(|e| e.to_string())?;
                    let (alpha, sol) =
                        oracle_minimize_updir(&p, 40, 20).map_err(|e| e.to_string())?;
                    dump_oracle_csv(alpha, &sol, file).map_err(|e| e.to_string())?;
                    println!("entropy {:.9} -> {}", sol.entropy, out.display());
                }
            }
        }
        Command::Classify { scenario, b, c } => {
            let (model, _) = load(&scenario)?;
            let b = four("b", &b)?;
            let c = four("c", &c)?;
            let grid = product_intensity(&model, 24, 12).map_err(|e| e.to_string())?;
            match &model.base {
                BaseFading::Random(_) => {
                    let rv = classify_random_base(&model, &grid, &b, &c, 16)
                        .map_err(|e| e.to_string())?;
                    println!(
                        "verdict={} critical_mass={:.6e}",
                        rv.verdict, rv.critical_mass
                    );
                    for (u, v) in &rv.per_base {
                        println!("base_fading={u:.6} {v}");
                    }
                }
                BaseFading::Fixed(_) => {
                    let v = classify_fixed(&model, &grid, &b, &c).map_err(|e| e.to_string())?;
                    println!("{v}");
                }
            }
        }
    }
    Ok(())
}

fn dump_plfree_csv(
    model: &NetworkModel,
    sol: &sirnet::minimizer::MinimizerSolution,
    mut out: impl Write,
) -> std::io::Result<()> {
    use sirnet::minimizer::Tilt;
    let (gamma, delta) = match sol.tilt {
        Tilt::PathLossFree { gamma, delta } => (gamma, delta),
        _ => (0.0, 0.0),
    };
    writeln!(
        out,
        "# gamma={gamma}, delta={delta}, entropy={}",
        sol.entropy
    )?;
    writeln!(out, "u,density_factor")?;
    let (lo, hi) = (model.fading.f_min(), model.fading.f_max());
    for j in 0..64 {
        let u = lo + (hi - lo) * (j as f64 + 0.5) / 64.0;
        writeln!(out, "{u},{}", sol.density_factor(1.0, u))?;
    }
    Ok(())
}

fn dump_oracle_csv(
    alpha: f64,
    sol: &sirnet::minimizer::OracleSolution,
    mut out: impl Write,
) -> std::io::Result<()> {
    writeln!(
        out,
        "# alpha_min={alpha}, lambda1={}, lambda2={}, entropy={}",
        sol.lambda[0], sol.lambda[1], sol.entropy
    )?;
    writeln!(out, "s,u,nu_mass")?;
    for (cell, nu) in sol.cells.iter().zip(&sol.nu) {
        writeln!(out, "{},{},{nu}", cell.s, cell.u)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
