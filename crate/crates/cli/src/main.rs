//! `certikraw`: certify hyperbolicity of triangulated 3-manifolds from
//! exported gluing-equation files.
//!
//! Exit codes: 0 = verified, 1 = not verified, 2 = input error.
//! In batch mode: 0 = every input verified, 1 otherwise.

use anyhow::Context;
use certikraw_core::certificate::Certificate;
use certikraw_core::verify::{verify_bytes, VerifyOptions};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "certikraw",
    version,
    about = "Rigorous hyperbolicity certificates via interval arithmetic and the Krawczyk test"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Args, Clone, Copy)]
struct PipelineArgs {
    /// Newton refinement iterations before the Krawczyk test
    #[arg(long, default_value_t = 5)]
    newton_iters: usize,
    /// Smallest-singular-value threshold for row selection
    #[arg(long, default_value_t = 1e-8)]
    rank_delta: f64,
    /// Embed R, c, X, K(X) and the Jacobian enclosure in the certificate
    #[arg(long)]
    print_data: bool,
}

impl PipelineArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            newton_iters: self.newton_iters,
            rank_delta: self.rank_delta,
            print_data: self.print_data,
        }
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Verify one gluing file and print its certificate
    Verify {
        /// Gluing-equation file (JSON)
        file: PathBuf,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
    /// Verify many files (or directories of .json files), certificates
    /// written alongside the inputs
    Batch {
        /// Gluing files or directories containing them
        inputs: Vec<PathBuf>,
        /// Worker threads (default: rayon's choice)
        #[arg(long, short)]
        jobs: Option<usize>,
        #[command(flatten)]
        pipeline: PipelineArgs,
    },
}

fn run_verify(path: &Path, opts: &VerifyOptions) -> anyhow::Result<Certificate> {
    let bytes =
        std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    verify_bytes(&name, &bytes, opts).with_context(|| format!("invalid input {}", path.display()))
}

fn collect_inputs(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("cannot list {}", p.display()))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|f| {
                    f.is_file()
                        && f.extension().is_some_and(|x| x == "json")
                        && !f
                            .file_name()
                            .is_some_and(|n| n.to_string_lossy().ends_with(".cert.json"))
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn cert_path(input: &Path) -> PathBuf {
    input.with_extension("cert.json")
}

enum BatchOutcome {
    Verified,
    Failed,
    Errored(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Commands::Verify {
            file,
            output,
            pipeline,
        } => match run_verify(&file, &pipeline.options()) {
            Ok(cert) => {
                let json = cert.to_json();
                if let Some(out) = output {
                    if let Err(e) = std::fs::write(&out, &json) {
                        eprintln!("error: cannot write {}: {e}", out.display());
                        return ExitCode::from(2);
                    }
                } else {
                    println!("{json}");
                }
                if cert.verified {
                    eprintln!("{}: verified", cert.input_name);
                    ExitCode::SUCCESS
                } else {
                    eprintln!(
                        "{}: NOT verified (failed stage: {})",
                        cert.input_name,
                        cert.failed_stage.as_deref().unwrap_or("unknown")
                    );
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Commands::Batch {
            inputs,
            jobs,
            pipeline,
        } => {
            if let Some(j) = jobs {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            let files = match collect_inputs(&inputs) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(2);
                }
            };
            let opts = pipeline.options();
            let outcomes: Vec<BatchOutcome> = files
                .par_iter()
                .map(|f| match run_verify(f, &opts) {
                    Ok(cert) => {
                        if let Err(e) = std::fs::write(cert_path(f), cert.to_json()) {
                            return BatchOutcome::Errored(format!(
                                "{}: cannot write certificate: {e}",
                                f.display()
                            ));
                        }
                        if cert.verified {
                            BatchOutcome::Verified
                        } else {
                            BatchOutcome::Failed
                        }
                    }
                    Err(e) => BatchOutcome::Errored(format!("{}: {e:#}", f.display())),
                })
                .collect();

            let verified = outcomes
                .iter()
                .filter(|o| matches!(o, BatchOutcome::Verified))
                .count();
            let failed = outcomes
                .iter()
                .filter(|o| matches!(o, BatchOutcome::Failed))
                .count();
            let errored = outcomes.len() - verified - failed;
            for o in &outcomes {
                if let BatchOutcome::Errored(msg) = o {
                    eprintln!("error: {msg}");
                }
            }
            println!(
                "Out of {} inputs, {} verified, {} failed, {} errored",
                outcomes.len(),
                verified,
                failed,
                errored
            );
            if verified == outcomes.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
