use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};

use wreathgame::config::ConfigError;
use wreathgame::{exit, run_check, run_sweep, simulate, Check, RunConfig, SweepConfig, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "wreathgame", version, about = "Lamplighter and weak cops-and-robbers games on wreath products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play one game and write its NDJSON trace.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Trace file; defaults to the config's `out`, else stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play every cell of a grid in parallel and write DIR/summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification check and print PASS/FAIL lines.
    Verify {
        /// iso-fig3, board-iso, cayley-link or metric-axioms
        #[arg(long)]
        check: Check,
        #[arg(long, default_value_t = 4)]
        radius: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Start the interactive session server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 30)]
        idle_minutes: u64,
        /// Enable the debug teleport endpoint.
        #[arg(long)]
        debug: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WREATHGAME_LOG", "warn")).init();
    let code = match Cli::parse().command {
        Command::Simulate { config, seed, out } => cmd_simulate(config, seed, out),
        Command::Sweep { config, out } => cmd_sweep(config, out),
        Command::Verify { check, radius, samples, seed } => cmd_verify(check, VerifyOptions { radius, samples, seed }),
        Command::Serve { port, host, idle_minutes, debug } => cmd_serve(&host, port, idle_minutes, debug),
    };
    ExitCode::from(code as u8)
}

fn config_error(e: &ConfigError) -> i32 {
    eprintln!("error: {e}");
    exit::CONFIG_INVALID
}

fn cmd_simulate(path: PathBuf, seed: Option<u64>, out: Option<PathBuf>) -> i32 {
    let cfg = match RunConfig::load(&path) {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    let report = match simulate(&cfg, seed) {
        Ok(r) => r,
        Err(e) => return config_error(&e),
    };
    let text = report.trace.to_ndjson();
    let written = match out.or_else(|| cfg.out.clone()) {
        Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: writing trace: {e}");
        return exit::IO;
    }
    let dist = report.min_dist.map_or_else(|| "beyond cutoff".to_string(), |d| d.to_string());
    eprintln!(
        "{}: {} after {} rounds, min distance {dist}{}",
        serde_json::to_string(&report.status).unwrap_or_default().trim_matches('"'),
        report.outcome,
        report.rounds,
        report.detail.map(|d| format!(" ({d})")).unwrap_or_default()
    );
    report.status.exit_code()
}

fn cmd_sweep(path: PathBuf, out: PathBuf) -> i32 {
    let cfg = match fs::read_to_string(&path)
        .map_err(|source| ConfigError::Read { path: path.clone(), source })
        .and_then(|t| SweepConfig::from_json(&t))
    {
        Ok(c) => c,
        Err(e) => return config_error(&e),
    };
    if let Err(e) = cfg.validate() {
        return config_error(&e);
    }
    match run_sweep(&cfg, &out) {
        Ok(report) => {
            let clean = report.rows.iter().filter(|r| r.is_clean()).count();
            let faults = report.rows.iter().filter(|r| r.is_fault()).count();
            eprintln!(
                "{} cells, {clean} clean, {faults} faults, {} ms; summary in {}",
                report.rows.len(),
                report.wall_ms,
                out.join("summary.csv").display()
            );
            for r in report.rows.iter().filter(|r| !r.is_clean()) {
                eprintln!("flagged cell {}: {} {:?} {}", r.cell, r.outcome, r.min_dist, r.fault);
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::IO
        }
    }
}

fn cmd_verify(check: Check, opts: VerifyOptions) -> i32 {
    let results = run_check(check, &opts);
    for r in &results {
        println!("{}", r.line());
    }
    if results.iter().all(|r| r.passed) {
        exit::OK
    } else {
        exit::LOST
    }
}

fn cmd_serve(host: &str, port: u16, idle_minutes: u64, debug: bool) -> i32 {
    let addr: SocketAddr = match format!("{host}:{port}").parse() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: bad address {host}:{port}: {e}");
            return exit::CONFIG_INVALID;
        }
    };
    let config = wreathgame_session::ServerConfig { idle_timeout: Duration::from_secs(idle_minutes * 60), debug };
    let rt = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::IO;
        }
    };
    match rt.block_on(wreathgame_session::serve(addr, config)) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit::IO
        }
    }
}
