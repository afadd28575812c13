use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pca::backend::BackendId;
use pca::bench::bench_dir;
use pca::codec::{compress, decompress};
use pca::dictionary::Mode;
use pca::normalizer::{named_text, normalize};
use pca::reader::read_program;
use pca::stats;

/// Terms can nest as deep as the longest list in a file; give the work
/// thread room for the recursive parts (drop, equality, the writer).
const STACK_SIZE: usize = 512 << 20;

#[derive(Parser)]
#[command(
    name = "pca",
    version,
    about = "Dictionary-based compressor for Prolog source"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Pca0,
    Pca2,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    None,
    Deflate,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compress a Prolog file into a container
    Compress {
        input: PathBuf,
        /// Output path [default: INPUT.pca]
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "pca0")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "deflate")]
        backend: BackendArg,
    },
    /// Regenerate Prolog source from a container
    Decompress {
        input: PathBuf,
        /// Output path [default: standard output]
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Show per-step sizes and ratios
    Stats {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// One JSON record per line
        #[arg(long)]
        json: bool,
    },
    /// Compare ratios over every .pl file of a directory
    Bench {
        dir: PathBuf,
        /// Shell command for a comparison codec; `{}` is replaced by the
        /// input path, otherwise the input arrives on standard input.
        /// The output size is the size of its standard output.
        #[arg(long, value_name = "TEMPLATE")]
        external_cmd: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

fn read_source(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Cmd::Compress {
            input,
            output,
            mode,
            backend,
        } => {
            let source = read_source(&input)?;
            let program = read_program(&source).map_err(|e| format!("{}:{e}", input.display()))?;
            for w in &program.warnings {
                eprintln!("{}:{w}", input.display());
            }
            let mode = match mode {
                ModeArg::Pca0 => Mode::Pca0,
                ModeArg::Pca2 => Mode::Pca2,
            };
            let backend = match backend {
                BackendArg::None => BackendId::None,
                BackendArg::Deflate => BackendId::Deflate,
            };
            let image = compress(&normalize(program), mode, backend).map_err(|e| e.to_string())?;
            let output = output.unwrap_or_else(|| {
                let mut p = input.clone().into_os_string();
                p.push(".pca");
                p.into()
            });
            write_output(Some(&output), &image)?;
            let ratio = if source.is_empty() {
                0.0
            } else {
                image.len() as f64 / source.len() as f64
            };
            eprintln!(
                "{}: {} -> {} bytes (ratio {ratio:.3})",
                input.display(),
                source.len(),
                image.len()
            );
        }
        Cmd::Decompress { input, output } => {
            let image = fs::read(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            let program = decompress(&image).map_err(|e| format!("{}: {e}", input.display()))?;
            write_output(output.as_deref(), named_text(&program).as_bytes())?;
        }
        Cmd::Stats { inputs, json } => {
            let mut failed = false;
            for input in inputs {
                let report = read_source(&input).and_then(|src| {
                    stats::report(&input.display().to_string(), &src)
                        .map_err(|e| format!("{}:{e}", input.display()))
                });
                match report {
                    Ok(r) if json => {
                        println!("{}", serde_json::to_string(&r).expect("serializable"))
                    }
                    Ok(r) => println!("{}", r.render()),
                    Err(e) => {
                        eprintln!("error: {e}");
                        failed = true;
                    }
                }
            }
            if failed {
                return Err("some inputs could not be read".into());
            }
        }
        Cmd::Bench {
            dir,
            external_cmd,
            json,
        } => {
            let bench = bench_dir(&dir, external_cmd.as_deref())
                .map_err(|e| format!("{}: {e}", dir.display()))?;
            for (path, why) in &bench.skipped {
                eprintln!("warning: skipping {}: {why}", path.display());
            }
            for e in &bench.external_errors {
                eprintln!("warning: external codec: {e}");
            }
            if json {
                for row in &bench.rows {
                    println!("{}", serde_json::to_string(row).expect("serializable"));
                }
            } else {
                print!("{}", bench.render());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    rayon::ThreadPoolBuilder::new()
        .stack_size(STACK_SIZE / 8)
        .build_global()
        .expect("global thread pool is configured once");
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || run(cli))
        .expect("spawning the worker thread");
    match worker.join() {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
        Err(_) => ExitCode::FAILURE,
    }
}
