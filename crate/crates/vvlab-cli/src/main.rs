use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vvlab::{cmd_expand, cmd_solve, cmd_sweep, cmd_verify, load_config, Result, RunConfig};

#[derive(Parser)]
#[command(name = "vvlab", version, about = "Expansion builds, NS solves and verification for the strip problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the truncated hierarchy and write its manifest and field dumps.
    Expand(Common),
    /// Solve the NS problem for every eps, starting from the composite.
    Solve(Common),
    /// Convergence table over eps with fitted slopes.
    Sweep(Common),
    /// Run the property suites and write a report.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for the eps loop.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation order (overrides `expansion.order`).
    #[arg(long)]
    order: Option<u32>,
    /// Comma-separated eps list (overrides `expansion.epsilons`).
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
}

impl Common {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = load_config(&self.config)?;
        if let Some(m) = self.order {
            cfg.expansion.order = m;
        }
        if let Some(e) = &self.epsilon {
            cfg.expansion.epsilons = e.clone();
        }
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (c, which) = match &cli.command {
        Command::Expand(c) => (c, "expand"),
        Command::Solve(c) => (c, "solve"),
        Command::Sweep(c) => (c, "sweep"),
        Command::Verify(c) => (c, "verify"),
    };
    let cfg = c.config()?;
    let out = cfg.output.dir.clone();
    let passed = match which {
        "expand" => {
            let m = cmd_expand(&cfg, &out)?;
            for t in &m.terms {
                println!("{:<6} level {:>2}  max {:.3e}  {}", t.kind, t.level, t.max_abs, if t.passed { "ok" } else { "FAILED" });
            }
            m.passed
        }
        "solve" => {
            let m = cmd_solve(&cfg, &out, c.jobs)?;
            for r in &m.runs {
                let status = r.error.clone().unwrap_or_else(|| if r.passed { "ok".into() } else { "FAILED".into() });
                println!("eps {:<8} iterations {:>2}  {status}", r.eps, r.iterations);
            }
            m.passed
        }
        "sweep" => {
            let t = cmd_sweep(&cfg, &out, c.jobs)?;
            for f in &t.fits {
                match (&f.fit, &f.note) {
                    (Some(r), _) => println!("{:<18} slope {:.3}  R^2 {:.4}", f.column, r.slope, r.r_squared),
                    (None, note) => println!("{:<18} {}", f.column, note.as_deref().unwrap_or("not fitted")),
                }
            }
            for ch in t.checks.iter().filter(|c| !c.passed) {
                println!("check {} failed: {:.3e} > {:.3e}", ch.name, ch.value, ch.tolerance);
            }
            t.passed
        }
        _ => {
            let r = cmd_verify(&cfg, &out, None)?;
            for s in &r.suites {
                println!("{:<16} {}", s.name, if s.passed { "ok" } else { "FAILED" });
            }
            r.passed
        }
    };
    println!("output in {}", out.display());
    Ok(passed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
