//! `plie`: compute Iwasawa decompositions, E_s values, Poisson bivectors and
//! delinearized forms, run the verification suites, and export s -> 0 sweep
//! tables.
//!
//! Exit codes: 0 success, 1 validation failure (bad input), 2 a residual
//! suite reported a failure.

mod io;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use plie_core::cotangent::CotangentPoint;
use plie_core::delin;
use plie_core::grp;
use plie_core::liealg::{basis_su_n, CoordVector};
use plie_core::poisson;
use plie_core::verify::{self, SweepSelector};

#[derive(Parser)]
#[command(name = "plie", version, about = "Poisson-Lie group computations on SU(n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompOrder {
    /// g = k b with k unitary, b triangular.
    Kan,
    /// g = b k.
    Ank,
}

#[derive(Clone, Copy, ValueEnum)]
enum BivectorKind {
    /// pi_AN at a point of AN (left-translated pairing matrix).
    An,
    /// pi_K at a point of SU(n).
    K,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepQuantity {
    /// |pi_{x,y}(e, t*)| as s -> 0.
    PiXy,
    /// |B(t,t*) - 1| at a generic lambda as s -> 0.
    BTt,
}

#[derive(Subcommand)]
enum Command {
    /// Iwasawa-decompose a det-1 complex matrix read from a JSON file.
    Decompose {
        /// Path to a JSON matrix ({"schema": "...", "matrix": [[re, im], ...] } or a bare row-major array).
        #[arg(long)]
        matrix: std::path::PathBuf,
        #[arg(long, value_enum, default_value = "ank")]
        order: DecompOrder,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Evaluate E_s (and the su(2) closed form when n = 2).
    Es {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Coordinates of lambda in the dual basis, comma separated
        /// (xi, eta1, eta2 for n = 2).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Evaluate a Poisson bivector pairing matrix.
    Bivector {
        #[arg(long, value_enum)]
        kind: BivectorKind,
        /// For kind=an with n=2: the (a, u, v) coordinates of the AN point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<f64>>,
        /// For kind=k or kind=an with a matrix input: path to a JSON matrix.
        #[arg(long)]
        matrix: Option<std::path::PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// The delinearized 2-form and its Poisson structure on T*SU(2).
    Delin {
        /// Coordinates (xi, eta1, eta2) of the fiber point.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
        #[arg(long)]
        s: f64,
        /// Optional JSON matrix of an SU(2) element for a general base point
        /// (default: the group identity).
        #[arg(long)]
        k: Option<std::path::PathBuf>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run verification suites and report residuals.
    Verify {
        /// Suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Override the base step of the plain central-difference suites
        /// (the tight suites keep their Richardson configuration).
        #[arg(long)]
        fd_step: Option<f64>,
        /// Override the pass tolerance of the reports (exploration only;
        /// the shipped tolerances are pinned in the library).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        /// List available suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// Tabulate an s -> 0 sweep and its fitted log-log slope.
    Sweep {
        #[arg(long, value_enum)]
        quantity: SweepQuantity,
        /// Decreasing positive s grid, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
        grid: Vec<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let record = serde_json::json!({
                "schema": io::SCHEMA,
                "error": err.to_string(),
            });
            eprintln!("{}", serde_json::to_string_pretty(&record).unwrap());
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> plie_core::Result<ExitCode> {
    match cli.command {
        Command::Decompose { matrix, order, out } => {
            let g = io::read_matrix(&matrix)?;
            let value = match order {
                DecompOrder::Kan => {
                    let (k, b) = grp::iwasawa_kan(&g)?;
                    serde_json::json!({
                        "schema": io::SCHEMA,
                        "order": "kan",
                        "k": io::matrix_json(k.entries()),
                        "b": io::matrix_json(b.entries()),
                    })
                }
                DecompOrder::Ank => {
                    let (b, k) = grp::iwasawa_ank(&g)?;
                    serde_json::json!({
                        "schema": io::SCHEMA,
                        "order": "ank",
                        "b": io::matrix_json(b.entries()),
                        "k": io::matrix_json(k.entries()),
                    })
                }
            };
            io::emit(&value, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Es { n, lambda, s, out } => {
            let basis = basis_su_n(n)?;
            if lambda.len() != basis.dim() {
                return Err(plie_core::Error::DimensionMismatch {
                    expected: basis.dim(),
                    found: lambda.len(),
                });
            }
            let lam = CoordVector::kstar_from_slice(&lambda);
            let b = grp::e_s(&lam, s, &basis)?;
            let mut value = serde_json::json!({
                "schema": io::SCHEMA,
                "n": n,
                "s": s,
                "lambda": lambda,
                "matrix": io::matrix_json(b.entries()),
            });
            if n == 2 {
                let closed = grp::es_su2_closed(lambda[0], lambda[1], lambda[2], s)?;
                value["closed_form"] = serde_json::json!({
                    "a": closed.a, "u": closed.u, "v": closed.v,
                });
            }
            io::emit(&value, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bivector { kind, point, matrix, n, s, out } => {
            let basis = basis_su_n(n)?;
            let framed = match kind {
                BivectorKind::An => {
                    let b = if let Some(coords) = point {
                        if n != 2 || coords.len() != 3 {
                            return Err(plie_core::Error::InvalidArgument(
                                "--point a,u,v is only valid for n = 2".into(),
                            ));
                        }
                        grp::SU2ANCoords::new(coords[0], coords[1], coords[2])?.to_matrix()
                    } else if let Some(path) = matrix {
                        grp::TriangularANElement::new(io::read_matrix(&path)?)?
                    } else {
                        return Err(plie_core::Error::InvalidArgument(
                            "bivector --kind an needs --point or --matrix".into(),
                        ));
                    };
                    poisson::pi_an(&b, s, &basis)?
                }
                BivectorKind::K => {
                    let path = matrix.ok_or_else(|| {
                        plie_core::Error::InvalidArgument("bivector --kind k needs --matrix".into())
                    })?;
                    let k = grp::UnitaryElement::new(io::read_matrix(&path)?)?;
                    poisson::pi_k(&k, s, &basis)?
                }
            };
            io::emit(&io::framed_json(&framed), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Delin { lambda, s, k, out } => {
            if lambda.len() != 3 {
                return Err(plie_core::Error::DimensionMismatch {
                    expected: 3,
                    found: lambda.len(),
                });
            }
            let basis = basis_su_n(2)?;
            let ku = match k {
                Some(path) => grp::UnitaryElement::new(io::read_matrix(&path)?)?,
                None => grp::UnitaryElement::identity(2),
            };
            let pt = CotangentPoint::new(ku, CoordVector::kstar_from_slice(&lambda))?;
            let form = delin::delin_at(&pt, s, &basis)?;
            let pi = delin::pi_delin_at(&pt, s, &basis)?;
            let value = serde_json::json!({
                "schema": io::SCHEMA,
                "s": s,
                "lambda": lambda,
                "delin_form": io::framed_json(&form),
                "poisson": io::framed_json(&pi),
            });
            io::emit(&value, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed, fd_step, tol, out, list } => {
            if list {
                for name in verify::suite_names() {
                    println!("{name}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            if let Some(step) = fd_step {
                if step <= 0.0 {
                    return Err(plie_core::Error::InvalidArgument(
                        "fd-step must be positive".into(),
                    ));
                }
            }
            let opts = verify::SuiteOptions { fd_step, tolerance: tol };
            let reports = verify::run_suite_with(&suite, seed, opts)?;
            let all_pass = reports.iter().all(|r| r.pass);
            for r in &reports {
                println!(
                    "{}: {} (max residual {:.3e}, tolerance {:.1e}, {} samples)",
                    r.name,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.max_residual,
                    r.tolerance,
                    r.num_samples
                );
            }
            let value = serde_json::json!({
                "schema": io::SCHEMA,
                "seed": seed,
                "suite": suite,
                "reports": reports,
            });
            if let Some(path) = out {
                io::emit(&value, Some(&path))?;
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Sweep { quantity, grid, format, out } => {
            let selector = match quantity {
                SweepQuantity::PiXy => SweepSelector::PiXyIdentity { xi: 1.0 },
                SweepQuantity::BTt => SweepSelector::BttDeviation { lambda: [1.0, 0.8, -0.5] },
            };
            let table = verify::limit_sweep(selector, &grid)?;
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "schema": io::SCHEMA,
                        "sweep": table,
                    });
                    io::emit(&value, out.as_deref())?;
                }
                Format::Csv => {
                    let mut text = String::from("s,value,fitted_slope\n");
                    for (s, v) in table.s_values.iter().zip(table.values[0].iter()) {
                        text.push_str(&format!("{s},{v},{}\n", table.slope));
                    }
                    io::emit_text(&text, out.as_deref())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
