//! File formats and the command-line driver for `ghc-core`.

pub mod commands;
mod config;
mod error;
pub mod io;
pub mod verify;

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{Command, EhAction, MonopoleAction, NahmAction, NahmInput, RunConfig};
pub use error::CliError;

/// Default `--tol` for residual checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Run one command. Text goes to `stdout` unless `--out` names a file.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let tol = config.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Validation(format!("--tol must be positive, got {tol}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let text = match &config.command {
        Command::Rep { k, k2, part } => commands::rep(*k, k2.unwrap_or(*k), *part)?,
        Command::Quillen { k, n, csv } => {
            if *csv {
                commands::quillen_csv(*k, *n)?
            } else {
                commands::quillen_report(*k, *n)?
            }
        }
        Command::Eh { action } => match action {
            EhAction::Sample { k, level, count } => {
                let s = read_level(level)?;
                commands::eh_sample(*k, &s, *count, tol, &mut rng)?
            }
            EhAction::Check { point, level } => {
                let pt = io::read_json::<io::PointJson>(point)?.to_point()?;
                let s = read_level(level)?;
                commands::eh_check(&pt, &s, tol)?
            }
        },
        Command::Nahm { action } => match action {
            NahmAction::Run { input, zetas } => {
                let (init, m) = read_nahm(input)?;
                let zetas = match zetas {
                    Some(p) => io::read_zetas(p)?,
                    None => commands::default_zetas(),
                };
                let run = commands::nahm_run(&init, input.steps, m, &zetas)?;
                return write_nahm_run(config.out.as_deref(), &run, stdout);
            }
            NahmAction::Convergence { input } => {
                let (init, m) = read_nahm(input)?;
                commands::nahm_convergence(&init, input.steps, m)?
            }
        },
        Command::Monopole { action } => match action {
            MonopoleAction::Residual { fields, q_samples } => {
                let f = io::read_json::<io::FieldsJson>(fields)?.to_fields()?;
                let qs = q_samples.as_deref().map(io::read_q_samples).transpose()?;
                commands::monopole_residual(&f, qs.as_deref(), tol)?
            }
            MonopoleAction::PureGauge { m } => commands::monopole_pure_gauge(*m, &mut rng)?,
        },
        Command::Verify { criterion } => {
            let ids: Vec<u32> = match criterion {
                Some(c) => vec![*c],
                None => (1..=verify::CRITERIA).collect(),
            };
            let mut text = String::new();
            let mut ok = true;
            for id in ids {
                let r = verify::run_criterion(id, config.seed).expect("ids are in range");
                ok &= r.pass();
                text.push_str(&r.render());
                eprintln!(
                    "criterion {id}: {:.3} s (budget {:.0} s)",
                    r.elapsed.as_secs_f64(),
                    r.budget.map_or(f64::INFINITY, |b| b.as_secs_f64())
                );
            }
            emit(config.out.as_deref(), &text, stdout)?;
            if !ok {
                return Err(CliError::Validation("verification failed".into()));
            }
            return Ok(());
        }
    };
    emit(config.out.as_deref(), &text, stdout)
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display()))),
        None => write_stdout(stdout, text.as_bytes()),
    }
}

/// A closed pipe (`ghc ... | head`) is not an error.
fn write_stdout(stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match stdout.write_all(bytes).and_then(|()| stdout.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

/// CSV to `--out` and the summary beside it with extension `.json`; without
/// `--out` both go to stdout, CSV first.
fn write_nahm_run(out: Option<&Path>, run: &commands::NahmRun, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => {
            let summary = p.with_extension("json");
            if summary == p {
                return Err(CliError::Validation(format!(
                    "--out {} would be overwritten by the summary; use a .csv name",
                    p.display()
                )));
            }
            emit(Some(p), &run.csv, stdout)?;
            emit(Some(&summary), &run.summary, stdout)?;
            writeln!(stdout, "wrote {} and {}", p.display(), summary.display())?;
            Ok(())
        }
        None => {
            write_stdout(stdout, run.csv.as_bytes())?;
            write_stdout(stdout, run.summary.as_bytes())
        }
    }
}

fn read_level(path: &Path) -> Result<ghc_core::cp1_sections::Poly, CliError> {
    io::read_json::<io::PolyJson>(path)?.to_poly("level")
}

fn read_nahm(input: &NahmInput) -> Result<(ghc_core::nahm_flow::NahmState, usize), CliError> {
    let init = io::read_json::<io::StateJson>(&input.init)?.to_state()?;
    let m = input.invariants.unwrap_or(init.n());
    if m == 0 || m > init.n() {
        return Err(CliError::schema(
            "invariants",
            &format!("must be in 1..={} for {0}x{0} matrices", init.n()),
        ));
    }
    Ok((init, m))
}
