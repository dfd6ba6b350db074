use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::Parser;
use pressurekit::verify::{self, Suite};
use pressurekit::{Command, Config, Error};

/// Pressures, Kingman limits and Bowen-equation dimensions on subshifts of finite type.
///
/// Exit status: 0 pass, 1 computation or check failure, 2 config error, 3 incomplete under budget.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// pressure, measure-pressure, caratheodory, capacity, kingman, entropy,
    /// bowen-root, dimension, generic-set or verify
    command: String,
    /// Experiment config (flat key = value); optional for verify
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; CSV goes to stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for verify
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    budget_minutes: Option<f64>,
    /// Suite for verify: core, pressure, dimension, acceptance or all
    #[arg(long)]
    suite: Option<String>,
}

/// Write via a temporary sibling and rename, so a failed run leaves no file behind.
fn write_atomically(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let res = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    res
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("pressurekit: {e}");
    ExitCode::from(e.exit_code())
}

fn budget(cli: &Cli) -> Result<Option<Duration>, Error> {
    match cli.budget_minutes {
        None => Ok(None),
        Some(m) if m > 0.0 && m.is_finite() => Ok(Some(Duration::from_secs_f64(m * 60.0))),
        Some(m) => Err(Error::config(format!("budget-minutes must be positive, got {m}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Command = match cli.command.parse() {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let budget = match budget(&cli) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let config = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => Some(c),
            Err(e) => return fail(&e),
        },
        None => None,
    };
    if command == Command::Verify {
        let name = cli
            .suite
            .as_deref()
            .or_else(|| config.as_ref().and_then(|c| c.raw("suite")))
            .unwrap_or("all");
        let report = match name.parse::<Suite>().and_then(|s| verify::verify(s, budget, cli.threads)) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        let text = report.render();
        print!("{text}");
        if let Some(out) = &cli.out {
            if let Err(e) = write_atomically(out, text.as_bytes()) {
                return fail(&Error::Io(e));
            }
        }
        return ExitCode::from(report.exit_code());
    }
    let Some(config) = config else {
        return fail(&Error::config(format!("{} needs --config", command.name())));
    };

    // the computation runs on a worker so the budget can cut it short
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(pressurekit::run(command, &config));
    });
    let result = match budget {
        Some(b) => match rx.recv_timeout(b) {
            Ok(r) => r,
            Err(_) => {
                eprintln!("pressurekit: incomplete: budget of {:.2} minutes exhausted", b.as_secs_f64() / 60.0);
                return ExitCode::from(3);
            }
        },
        None => rx.recv().expect("worker finished"),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    match &cli.out {
        Some(out) => {
            if let Err(e) = write_atomically(out, &outcome.csv) {
                return fail(&Error::Io(e));
            }
            print!("{}", outcome.summary);
        }
        None => {
            let _ = std::io::stdout().write_all(&outcome.csv);
            eprint!("{}", outcome.summary);
        }
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("pressurekit: a check reported in the summary failed");
        ExitCode::from(1)
    }
}
