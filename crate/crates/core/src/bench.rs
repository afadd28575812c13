//! Corpus benchmark: full-pipeline ratios per file, optionally next to an
//! external compressor run on both the original text and NF₀.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use rayon::prelude::*;
use serde::Serialize;

use crate::normalizer::{nf0_text, normalize};
use crate::reader::read_program;
use crate::stats::{report_for, StatsReport};

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub stats: StatsReport,
    /// External codec output size on the original file.
    pub ext_pp: Option<u64>,
    /// External codec output size on the NF₀ text.
    pub ext_nf0: Option<u64>,
}

#[derive(Debug, Default)]
pub struct Bench {
    pub rows: Vec<BenchRow>,
    /// Files that could not be processed, with the reason.
    pub skipped: Vec<(PathBuf, String)>,
    /// Problems running the external command.
    pub external_errors: Vec<String>,
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "'\\''"))
}

/// Runs `template` through `sh -c` and returns the size of its standard
/// output. Every `{}` is replaced by the quoted path of the input; without
/// a `{}` the input is fed on standard input instead.
pub fn external_size(template: &str, input: &Path) -> io::Result<u64> {
    let with_path = template.contains("{}");
    let script = template.replace("{}", &shell_quote(&input.to_string_lossy()));
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&script)
        .stdin(if with_path {
            Stdio::null()
        } else {
            Stdio::piped()
        })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    if !with_path {
        let data = fs::read(input)?;
        let mut stdin = child.stdin.take().expect("piped");
        // Writing on this thread while the child fills its stdout pipe
        // could deadlock, so feed it from a helper.
        std::thread::spawn(move || {
            let _ = stdin.write_all(&data);
        });
    }
    let out = child.wait_with_output()?;
    if !out.status.success() {
        let err = String::from_utf8_lossy(&out.stderr);
        return Err(io::Error::other(format!(
            "`{script}` failed ({}): {}",
            out.status,
            err.trim()
        )));
    }
    Ok(out.stdout.len() as u64)
}

/// `.pl` files directly inside `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "pl"));
    files.sort();
    Ok(files)
}

enum Outcome {
    Row(BenchRow, Vec<String>),
    Skipped(PathBuf, String),
}

fn bench_file(path: &Path, external: Option<&str>) -> Outcome {
    let skip = |why: String| Outcome::Skipped(path.to_owned(), why);
    let source = match fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return skip(e.to_string()),
    };
    let program = match read_program(&source) {
        Ok(p) => normalize(p),
        Err(e) => return skip(e.to_string()),
    };
    let name = path
        .file_name()
        .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let stats = match report_for(&name, source.len() as u64, &program) {
        Ok(s) => s,
        Err(e) => return skip(e.to_string()),
    };
    let mut errors = Vec::new();
    let (mut ext_pp, mut ext_nf0) = (None, None);
    if let Some(cmd) = external {
        let mut run = |p: &Path| match external_size(cmd, p) {
            Ok(n) => Some(n),
            Err(e) => {
                errors.push(format!("{}: {e}", path.display()));
                None
            }
        };
        ext_pp = run(path);
        let nf0 = tempfile::NamedTempFile::new().and_then(|mut f| {
            f.write_all(nf0_text(&program).as_bytes())?;
            Ok(f)
        });
        match nf0 {
            Ok(f) => ext_nf0 = run(f.path()),
            Err(e) => errors.push(format!("{}: {e}", path.display())),
        }
    }
    Outcome::Row(
        BenchRow {
            stats,
            ext_pp,
            ext_nf0,
        },
        errors,
    )
}

/// Benchmarks every `.pl` file of `dir` in parallel.
pub fn bench_dir(dir: &Path, external: Option<&str>) -> io::Result<Bench> {
    let files = corpus_files(dir)?;
    let outcomes: Vec<Outcome> = files.par_iter().map(|p| bench_file(p, external)).collect();
    let mut bench = Bench::default();
    for o in outcomes {
        match o {
            Outcome::Row(row, errors) => {
                bench.rows.push(row);
                bench.external_errors.extend(errors);
            }
            Outcome::Skipped(path, why) => bench.skipped.push((path, why)),
        }
    }
    Ok(bench)
}

fn ratio_cell(size: Option<u64>, base: u64) -> String {
    match size {
        Some(s) if base > 0 => format!("{:.3}", s as f64 / base as f64),
        _ => "-".to_owned(),
    }
}

impl Bench {
    fn has_external(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.ext_pp.is_some() || r.ext_nf0.is_some())
    }

    fn table(
        &self,
        title: &str,
        base: impl Fn(&StatsReport) -> u64,
        ext: impl Fn(&BenchRow) -> Option<u64>,
    ) -> String {
        let with_ext = self.has_external();
        let width = self
            .rows
            .iter()
            .map(|r| r.stats.file.len())
            .chain([5])
            .max()
            .unwrap();
        let mut out = format!("{title}\n{:<width$}{:>12}", "file", "bytes");
        if with_ext {
            out.push_str(&format!("{:>10}", "external"));
        }
        out.push_str(&format!("{:>10}\n", "PCA0"));
        let mut line = |name: &str, base: u64, ext: Option<u64>, pca: u64| {
            out.push_str(&format!("{name:<width$}{base:>12}"));
            if with_ext {
                out.push_str(&format!("{:>10}", ratio_cell(ext, base)));
            }
            out.push_str(&format!("{:>10}\n", ratio_cell(Some(pca), base)));
        };
        let (mut total_base, mut total_pca, mut total_ext) = (0, 0, Some(0));
        for row in &self.rows {
            let b = base(&row.stats);
            let e = ext(row);
            line(&row.stats.file, b, e, row.stats.size4);
            total_base += b;
            total_pca += row.stats.size4;
            total_ext = total_ext.zip(e).map(|(t, e)| t + e);
        }
        if !self.rows.is_empty() {
            line("TOTAL", total_base, total_ext, total_pca);
        }
        out
    }

    /// Ratios against the original text and against NF₀, as two tables.
    pub fn render(&self) -> String {
        let pp = self.table("Compression ratio w.r.t. PP", |s| s.size_pp, |r| r.ext_pp);
        let nf0 = self.table(
            "Compression ratio w.r.t. NF0",
            |s| s.size_nf0,
            |r| r.ext_nf0,
        );
        format!("{pp}\n{nf0}")
    }
}
