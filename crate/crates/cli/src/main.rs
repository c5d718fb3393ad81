//! Command line front end for the core library.
//!
//! Subcommands read block matrices as structured text documents,
//! print scalar results in full precision on standard output, and
//! write matrix or report documents to `--out` paths. Exit status: 0
//! on success, 1 when the verification suite reports a failed check,
//! 2 on usage, input, or computation errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

use statgeom_core::duality::{conjugate, dual_norm, psi_decompose, PsiValue};
use statgeom_core::entropy::relative_entropy;
use statgeom_core::io::{read_matrix, write_matrix, MatrixDoc};
use statgeom_core::manifold::{chart_forward, chart_inverse, transition, Chart, TransportMap};
use statgeom_core::orlicz::{luxemburg_norm, YoungFunctionHandle};
use statgeom_core::perturbation::{cumulant, perturb};
use statgeom_core::verify::{parse_shape, run_suite, TolProfile, VerifyConfig};
use statgeom_core::{
    DualFunctional, FaithfulState, HermitianObservable, PositiveFunctional, Result,
};

#[derive(Parser)]
#[command(
    name = "statgeom",
    version,
    about = "Relative entropy, exponential perturbations, and Orlicz geometry \
             for block-diagonal density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative entropy S(a, b); prints `inf` outside the support
    /// condition.
    Entropy {
        /// First positive matrix document.
        #[arg(long)]
        a: PathBuf,
        /// Second positive matrix document.
        #[arg(long)]
        b: PathBuf,
    },
    /// Cumulant of an observable at a faithful state.
    Cumulant {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Hermitian observable document.
        #[arg(long)]
        obs: PathBuf,
    },
    /// Exponentially perturbed state of a faithful state by an
    /// observable.
    Perturb {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Hermitian observable document.
        #[arg(long)]
        obs: PathBuf,
        /// Where to write the perturbed density document; standard
        /// output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Luxemburg norm of an observable in a state's gauge.
    Norm {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Hermitian observable document.
        #[arg(long)]
        obs: PathBuf,
        /// Use the centered gauge instead of the uncentered one.
        #[arg(long)]
        centered: bool,
    },
    /// Dual norm of a traceless functional against a state's gauge.
    Dualnorm {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Traceless Hermitian document.
        #[arg(long)]
        dual: PathBuf,
        /// Use the centered gauge instead of the uncentered one.
        #[arg(long)]
        centered: bool,
    },
    /// Fenchel conjugate of a state's gauge at a traceless functional.
    Conjugate {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Traceless Hermitian document.
        #[arg(long)]
        dual: PathBuf,
        /// Conjugate the centered gauge instead of the uncentered one.
        #[arg(long)]
        centered: bool,
    },
    /// Decomposition functional of a traceless functional; prints the
    /// value or `inf`.
    Psi {
        /// Faithful density document.
        #[arg(long)]
        state: PathBuf,
        /// Traceless Hermitian document.
        #[arg(long)]
        dual: PathBuf,
        /// Write the positive certificate state here.
        #[arg(long)]
        out_pos: Option<PathBuf>,
        /// Write the negative certificate state here.
        #[arg(long)]
        out_neg: Option<PathBuf>,
    },
    /// Exponential chart at a base state: forward from a centered
    /// observable, or invert at a faithful target.
    #[command(group(ArgGroup::new("direction").required(true).args(["forward", "invert"])))]
    Chart {
        /// Faithful density document of the chart center.
        #[arg(long)]
        base: PathBuf,
        /// Observable document to map through the chart.
        #[arg(long)]
        forward: Option<PathBuf>,
        /// Faithful density document to pull back to an observable.
        #[arg(long)]
        invert: Option<PathBuf>,
        /// Where to write the resulting document; standard output when
        /// omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transition map of an observable between two chart centers.
    Transition {
        /// Source chart center document.
        #[arg(long)]
        from: PathBuf,
        /// Target chart center document.
        #[arg(long)]
        to: PathBuf,
        /// Observable document, centered at the source.
        #[arg(long)]
        obs: PathBuf,
        /// Where to write the transported observable; standard output
        /// when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parallel transport of an observable or dual functional between
    /// two states.
    #[command(group(ArgGroup::new("payload").required(true).args(["obs", "dual"])))]
    Transport {
        /// Source state document.
        #[arg(long)]
        from: PathBuf,
        /// Target state document.
        #[arg(long)]
        to: PathBuf,
        /// Connection to transport along.
        #[arg(long, value_enum, default_value_t = Kind::Exponential)]
        kind: Kind,
        /// Observable document to transport.
        #[arg(long)]
        obs: Option<PathBuf>,
        /// Traceless functional document to transport.
        #[arg(long)]
        dual: Option<PathBuf>,
        /// Where to write the transported document; standard output
        /// when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        /// Comma-separated shape labels, block dims joined by `x`
        /// (example: 2,3,4,2x2).
        #[arg(long, default_value = "2,3,4,2x2,1x1x1x1")]
        dims: String,
        /// Baseline sample count per check and shape.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Master seed for all sampling.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Named tolerance profile.
        #[arg(long, value_enum, default_value_t = Profile::Default)]
        tol_profile: Profile,
        /// Where to write the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Recenters observables; identity on centered duals.
    Exponential,
    /// Identity on observables; recenters duals.
    Mixture,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    /// The documented tolerance table.
    Default,
}

fn load_state(path: &Path) -> Result<FaithfulState> {
    FaithfulState::new(read_matrix(path)?)
}

fn load_positive(path: &Path) -> Result<PositiveFunctional> {
    PositiveFunctional::new(read_matrix(path)?)
}

fn load_obs(path: &Path) -> Result<HermitianObservable> {
    Ok(HermitianObservable::new(read_matrix(path)?))
}

fn load_dual(path: &Path) -> Result<DualFunctional> {
    DualFunctional::new(read_matrix(path)?)
}

/// Full-precision scalar line; `inf` marks the infinite branch.
fn print_value(v: f64) {
    if v.is_infinite() {
        println!("inf");
    } else {
        println!("{v:.16e}");
    }
}

/// Writes a matrix document to `out`, or prints it when `out` is
/// omitted.
fn emit_matrix(mat: &statgeom_core::BlockMat, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_matrix(path, mat),
        None => {
            print!("{}", MatrixDoc::from_mat(mat).render());
            Ok(())
        }
    }
}

fn gauge(state: FaithfulState, centered: bool) -> YoungFunctionHandle {
    if centered {
        YoungFunctionHandle::phi_phi0(state)
    } else {
        YoungFunctionHandle::phi_phi(state)
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Entropy { a, b } => {
            let s = relative_entropy(&load_positive(&a)?, &load_positive(&b)?)?;
            print_value(s.value());
        }
        Command::Cumulant { state, obs } => {
            print_value(cumulant(&load_state(&state)?, &load_obs(&obs)?)?);
        }
        Command::Perturb { state, obs, out } => {
            let result = perturb(&load_state(&state)?, &load_obs(&obs)?)?;
            emit_matrix(result.state.density(), out.as_deref())?;
            if out.is_some() {
                print_value(result.cumulant);
            }
        }
        Command::Norm {
            state,
            obs,
            centered,
        } => {
            let handle = gauge(load_state(&state)?, centered);
            print_value(luxemburg_norm(&handle, (&load_obs(&obs)?).into())?.value);
        }
        Command::Dualnorm {
            state,
            dual,
            centered,
        } => {
            let handle = gauge(load_state(&state)?, centered);
            print_value(dual_norm(&handle, &load_dual(&dual)?)?.value);
        }
        Command::Conjugate {
            state,
            dual,
            centered,
        } => {
            let handle = gauge(load_state(&state)?, centered);
            print_value(conjugate(&handle, &load_dual(&dual)?)?.value);
        }
        Command::Psi {
            state,
            dual,
            out_pos,
            out_neg,
        } => {
            let value = psi_decompose(&load_state(&state)?, &load_dual(&dual)?)?;
            print_value(value.value());
            if let PsiValue::Finite(d) = value {
                if let Some(path) = out_pos {
                    write_matrix(&path, d.omega1.density())?;
                }
                if let Some(path) = out_neg {
                    write_matrix(&path, d.omega2.density())?;
                }
            }
        }
        Command::Chart {
            base,
            forward,
            invert,
            out,
        } => {
            let chart = Chart::new(load_state(&base)?);
            if let Some(path) = forward {
                let image = chart_forward(&chart, &load_obs(&path)?)?;
                emit_matrix(image.density(), out.as_deref())?;
            } else if let Some(path) = invert {
                let inverse = chart_inverse(&chart, &load_state(&path)?)?;
                emit_matrix(inverse.h.mat(), out.as_deref())?;
                if out.is_some() {
                    print_value(inverse.norm);
                }
            }
        }
        Command::Transition { from, to, obs, out } => {
            let moved = transition(&load_state(&from)?, &load_state(&to)?, &load_obs(&obs)?)?;
            emit_matrix(moved.mat(), out.as_deref())?;
        }
        Command::Transport {
            from,
            to,
            kind,
            obs,
            dual,
            out,
        } => {
            let map = match kind {
                Kind::Exponential => {
                    TransportMap::exponential(load_state(&from)?, load_state(&to)?)?
                }
                Kind::Mixture => TransportMap::mixture(load_state(&from)?, load_state(&to)?)?,
            };
            if let Some(path) = obs {
                let moved = map.apply_observable(&load_obs(&path)?)?;
                emit_matrix(moved.mat(), out.as_deref())?;
            } else if let Some(path) = dual {
                let moved = map.apply_dual(&load_dual(&path)?)?;
                emit_matrix(moved.mat(), out.as_deref())?;
            }
        }
        Command::Verify {
            dims,
            samples,
            seed,
            tol_profile: Profile::Default,
            out,
        } => {
            let dims = dims
                .split(',')
                .map(parse_shape)
                .collect::<Result<Vec<_>>>()?;
            let config = VerifyConfig {
                dims,
                samples,
                seed,
                profile: TolProfile::default(),
            };
            let report = run_suite(&config)?;
            print!("{}", report.render_text());
            if let Some(path) = out {
                std::fs::write(&path, report.to_json()?).map_err(|e| {
                    statgeom_core::Error::Document {
                        context: path.display().to_string(),
                        message: e.to_string(),
                    }
                })?;
            }
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
