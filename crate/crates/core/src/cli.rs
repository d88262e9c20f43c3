//! Command-line front end. Output is plain text or CSV; exit status is 0 on
//! success, 1 when a check or a precondition fails, 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    curve_points, fw000_analytic, p000_analytic, recurrence, witness_discrepancy, witness_report,
    write_curves, WitnessPreset,
};
use crate::basis::{
    eigencheck_basic_states, eigencheck_genuine_basis, genuine_basis_3, genuine_basis_4,
    verify_basis,
};
use crate::engine::{byproduct_analysis, purification_round, Classification, Outcome};
use crate::error::{Error, Result};
use crate::numfmt::sig12;
use crate::wstates::CoefficientVector;

/// Directory used for `sweep` output when `--out` is not given.
pub const OUT_DIR_ENV: &str = "GBPURIFY_OUT_DIR";
/// Seed used by `oracle` when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20080501;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gbpurify",
    version,
    about = "Tripartite W-state purification in the genuine basis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genuine-basis checks.
    #[command(subcommand)]
    Basis(BasisCommand),
    /// One purification round: all eight target outcomes.
    Purify(PurifyArgs),
    /// Iterate the concise-family map.
    Iterate {
        #[arg(long)]
        c1: f64,
        #[arg(long)]
        rounds: usize,
    },
    /// Write the f_in,f_out,p000,yield sweep as CSV.
    Sweep {
        #[arg(long = "from")]
        from: f64,
        #[arg(long = "to")]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Output file; defaults to `$GBPURIFY_OUT_DIR/sweep.csv` or `./sweep.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness expectation on the concise state and its threshold.
    Witness {
        #[arg(long)]
        c1: f64,
        #[arg(long, value_enum)]
        preset: PresetArg,
    },
    /// Bell-pair analysis of a failed branch.
    Byproduct {
        #[arg(long, value_enum)]
        mix: MixArg,
        /// Weight of the first state of the pair (ignored for equal-gb1gb4).
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        outcome: String,
    },
    /// Compare the brute-force round with the closed forms on random inputs.
    Oracle {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum BasisCommand {
    /// Orthonormality and completeness defects.
    Verify {
        #[arg(long, default_value_t = 3)]
        qubits: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Total-spin eigenvalues of the basic states and of all eight basis states.
    Spin {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PurifyArgs {
    /// Concise-family input with this GB¹ weight.
    #[arg(long)]
    c1: Option<f64>,
    /// File with eight simplex coefficients.
    #[arg(long)]
    coeffs: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    PaperW,
    StandardW,
    Ghz,
}

impl From<PresetArg> for WitnessPreset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::PaperW => WitnessPreset::PaperW,
            PresetArg::StandardW => WitnessPreset::StandardW,
            PresetArg::Ghz => WitnessPreset::Ghz,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MixArg {
    Gb1gb4,
    Gb2gb5,
    Gb3gb6,
    EqualGb1gb4,
}

impl MixArg {
    fn coefficients(self, weight: Option<f64>) -> Result<CoefficientVector> {
        let (first, w) = match self {
            MixArg::Gb1gb4 => (0, weight.unwrap_or(0.6)),
            MixArg::Gb2gb5 => (1, weight.unwrap_or(0.6)),
            MixArg::Gb3gb6 => (2, weight.unwrap_or(0.6)),
            MixArg::EqualGb1gb4 => (0, 0.5),
        };
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!(
                "--c1 must lie in [0, 1], got {w}"
            )));
        }
        let mut c = vec![0.0; 8];
        c[first] = w;
        c[first + 3] = 1.0 - w;
        CoefficientVector::new(c)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_VALIDATION
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn check_c1(c1: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&c1) {
        return Err(Error::InvalidParameter(format!(
            "--c1 must lie in [0, 1], got {c1}"
        )));
    }
    Ok(())
}

/// Returns whether every requested check passed.
fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Basis(BasisCommand::Verify { qubits, tol }) => {
            let basis = match qubits {
                3 => genuine_basis_3(),
                4 => genuine_basis_4(),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "--qubits must be 3 or 4, got {other}"
                    )))
                }
            };
            let report = verify_basis(&basis, tol)?;
            writeln!(
                out,
                "basis                {qubits}-qubit genuine basis ({} states)",
                basis.len()
            )
            .map_err(io)?;
            writeln!(out, "{report}").map_err(io)?;
            Ok(report.passes())
        }
        Command::Basis(BasisCommand::Spin { tol }) => {
            writeln!(out, "state J2_123 J2_12 residual eigenvector").map_err(io)?;
            let basic = eigencheck_basic_states();
            let mut ok = true;
            for r in &basic {
                let pass = r.is_simultaneous_eigenvector(tol)
                    && (r.j123 - 3.75).abs() < tol
                    && (r.j12 - 2.0).abs() < tol;
                ok &= pass;
                writeln!(
                    out,
                    "{} {} {} {:.3e} {}",
                    r.label.replace(' ', "_"),
                    sig12(r.j123),
                    sig12(r.j12),
                    r.residual(),
                    pass
                )
                .map_err(io)?;
            }
            writeln!(
                out,
                "# genuine basis states (expectation values where not eigenvectors)"
            )
            .map_err(io)?;
            for r in eigencheck_genuine_basis() {
                writeln!(
                    out,
                    "{} {} {} {:.3e} {}",
                    r.label,
                    sig12(r.j123),
                    sig12(r.j12),
                    r.residual(),
                    r.is_simultaneous_eigenvector(tol)
                )
                .map_err(io)?;
            }
            Ok(ok)
        }
        Command::Purify(args) => {
            let c = match (args.c1, args.coeffs) {
                (Some(c1), _) => {
                    check_c1(c1)?;
                    CoefficientVector::concise(c1)?
                }
                (None, Some(path)) => CoefficientVector::from_file(path)?,
                (None, None) => unreachable!("clap enforces one input"),
            };
            if c.len() != 8 {
                return Err(Error::InvalidCoefficients(
                    "purify expects 8 coefficients".into(),
                ));
            }
            let round = purification_round(&c)?;
            write!(out, "{}", round.to_text()).map_err(io)?;
            writeln!(out, "# p000_closed_form {}", sig12(p000_analytic(&c)?)).map_err(io)?;
            if let Ok(f) = fw000_analytic(&c) {
                writeln!(out, "# fw000_closed_form {}", sig12(f)).map_err(io)?;
            }
            Ok(true)
        }
        Command::Iterate { c1, rounds } => {
            check_c1(c1)?;
            if rounds == 0 {
                return Err(Error::InvalidParameter(
                    "--rounds must be at least 1".into(),
                ));
            }
            let trace = recurrence(c1, rounds)?;
            write!(out, "{trace}").map_err(io)?;
            writeln!(out, "# final_w_fraction {}", sig12(trace.final_fraction())).map_err(io)?;
            writeln!(out, "# cumulative_yield {}", sig12(trace.cumulative_yield)).map_err(io)?;
            Ok(true)
        }
        Command::Sweep {
            from,
            to,
            steps,
            out: path,
        } => {
            let points = curve_points(from, to, steps)?;
            let path = path.unwrap_or_else(|| {
                std::env::var_os(OUT_DIR_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("."))
                    .join("sweep.csv")
            });
            let file = std::fs::File::create(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            write_curves(&points, &mut w)?;
            w.flush().map_err(io)?;
            writeln!(out, "wrote {} rows to {}", points.len(), path.display()).map_err(io)?;
            Ok(true)
        }
        Command::Witness { c1, preset } => {
            check_c1(c1)?;
            let preset = WitnessPreset::from(preset);
            let report = witness_report(c1, preset)?;
            writeln!(out, "{report}").map_err(io)?;
            if preset != WitnessPreset::Ghz {
                if let Some(note) = witness_discrepancy()? {
                    writeln!(out, "note         {note}").map_err(io)?;
                }
            }
            Ok(true)
        }
        Command::Byproduct { mix, c1, outcome } => {
            let c = mix.coefficients(c1)?;
            let outcome: Outcome = outcome.parse()?;
            if outcome.len() != 3 {
                return Err(Error::InvalidOutcome(format!(
                    "--outcome needs 3 bits, got {outcome}"
                )));
            }
            let round = purification_round(&c)?;
            let report = byproduct_analysis(&round, &outcome)?;
            writeln!(out, "input                {c}").map_err(io)?;
            write!(out, "{report}").map_err(io)?;
            Ok(true)
        }
        Command::Oracle { samples, seed, tol } => {
            if samples == 0 {
                return Err(Error::InvalidParameter(
                    "--samples must be at least 1".into(),
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut dp, mut df) = (0.0f64, 0.0f64);
            for _ in 0..samples {
                let c = CoefficientVector::sample(&mut rng, 8)?;
                let round = purification_round(&c)?;
                let b = round
                    .branches
                    .iter()
                    .find(|b| b.classification == Classification::Success)
                    .expect("all-zeros branch");
                dp = dp.max((b.probability - p000_analytic(&c)?).abs());
                let fid = b
                    .gb1_fidelity()
                    .ok_or(Error::ImpossibleBranch(b.probability))?;
                df = df.max((fid - fw000_analytic(&c)?).abs());
            }
            let pass = dp < tol && df < tol;
            writeln!(out, "samples              {samples}").map_err(io)?;
            writeln!(out, "seed                 {seed}").map_err(io)?;
            writeln!(out, "max_p000_error       {dp:.3e}").map_err(io)?;
            writeln!(out, "max_fw000_error      {df:.3e}").map_err(io)?;
            writeln!(
                out,
                "status               {}",
                if pass { "PASS" } else { "FAIL" }
            )
            .map_err(io)?;
            Ok(pass)
        }
    }
}
