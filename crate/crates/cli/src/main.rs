use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use sgm_cli::{emit_json, parse_coefficients, render_text, run_spectrum, RunError, RunOptions};
use sgm_core::CoefficientSpec;

/// Which target dimensions n admit special generic maps from a closed manifold.
#[derive(Parser, Debug)]
#[command(name = "sgm", version)]
struct Args {
    /// Manifold expression, e.g. "S(2) x S(2) x S(2)" or "S(2)xS(4) # CP(3)".
    expression: String,
    /// Coefficient ring: Z, Q, Z2 or Zp:<p>.
    #[arg(long, default_value = "Q", value_parser = parse_coefficients)]
    coeff: CoefficientSpec,
    /// Emit canonical JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Include full witnesses and derivation trees in text output.
    #[arg(long)]
    witness: bool,
    /// Skip the certificate search; only obstructions are reported.
    #[arg(long)]
    no_admissibility: bool,
    /// Omit timing so output is byte-for-byte reproducible.
    #[arg(long)]
    deterministic: bool,
    /// Refuse manifolds above this dimension.
    #[arg(long, default_value_t = 16)]
    max_dim: u32,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = Instant::now();
    let options = RunOptions { admissibility: !args.no_admissibility, max_dim: args.max_dim };
    let mut report = match run_spectrum(&args.expression, args.coeff, options) {
        Ok(r) => r,
        Err(e) => {
            match &e {
                RunError::Parse(p) => eprintln!("error: {}", p.render(&args.expression)),
                other => eprintln!("error: {other}"),
            }
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if !args.deterministic {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    let out = if args.json { emit_json(&report) } else { render_text(&report, args.witness).into_bytes() };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
