//! The `dsalign` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Parser, Subcommand};

use crate::derive::{attach, derive_all, influence_warnings, EvaluationItemSet};
use crate::diagnostic::{codes, has_errors, Diagnostic};
use crate::dsl::{self, ParseResult};
use crate::export::{export, ExportFormat, ExportOptions};
use crate::model::AlignmentModel;
use crate::report::{item_table, matrix, ReportFormat};
use crate::validate::validate;

pub mod exit {
    pub const OK: i32 = 0;
    pub const DIAGNOSTICS: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "dsalign", version, about = "Business-dialogue-system alignment models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate models.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Derive evaluation items and print a summary.
    Derive {
        file: PathBuf,
        /// Write the itemset as JSON to this path (`-` for stdout).
        #[arg(long, value_name = "PATH")]
        items: Option<PathBuf>,
    },
    /// Attach derived items and export the model.
    Export {
        file: PathBuf,
        #[arg(
            long,
            default_value = "open_exchange",
            value_parser = PossibleValuesParser::new(["open_exchange", "dot"])
                .map(|s| s.parse::<ExportFormat>().expect("restricted to known formats"))
        )]
        format: ExportFormat,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Leave out values, risks, costs and principles.
        #[arg(long)]
        no_derived: bool,
    },
    /// Render item tables or a comparison matrix.
    Report {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        matrix: bool,
        #[arg(
            long,
            default_value = "markdown",
            value_parser = PossibleValuesParser::new(["markdown", "csv"])
                .map(|s| s.parse::<ReportFormat>().expect("restricted to known formats"))
        )]
        format: ReportFormat,
    },
    /// Print models in canonical form.
    Fmt {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Rewrite files in place.
        #[arg(long, conflicts_with = "check")]
        write: bool,
        /// Exit 1 if any file is not in canonical form.
        #[arg(long)]
        check: bool,
    },
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    color: bool,
}

impl Io<'_> {
    fn report(&mut self, diagnostics: &[Diagnostic]) {
        for d in diagnostics {
            let _ = writeln!(self.stderr, "{}", d.render(self.color));
        }
    }

    fn note(&mut self, message: &str) {
        let _ = writeln!(self.stderr, "{message}");
    }

    fn emit(&mut self, text: &str) -> i32 {
        match self.stdout.write_all(text.as_bytes()) {
            Ok(()) => exit::OK,
            Err(err) => {
                self.note(&format!("cannot write output: {err}"));
                exit::IO
            }
        }
    }

    fn write_to(&mut self, path: &Path, text: &str) -> i32 {
        if path == Path::new("-") {
            return self.emit(text);
        }
        match std::fs::write(path, text) {
            Ok(()) => exit::OK,
            Err(err) => {
                self.note(&format!("cannot write {}: {err}", path.display()));
                exit::IO
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut io = Io {
        stdout,
        stderr,
        color,
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            return if err.use_stderr() {
                let _ = write!(io.stderr, "{text}");
                exit::USAGE
            } else {
                io.emit(&text)
            };
        }
    };
    match cli.command {
        Command::Check { files, strict } => check(&mut io, &files, strict),
        Command::Derive { file, items } => derive(&mut io, &file, items.as_deref()),
        Command::Export {
            file,
            format,
            out,
            no_derived,
        } => {
            let options = ExportOptions {
                format,
                include_derived: !no_derived,
                ..ExportOptions::default()
            };
            export_cmd(&mut io, &file, &options, out.as_deref())
        }
        Command::Report {
            files,
            matrix,
            format,
        } => report(&mut io, &files, matrix, format),
        Command::Fmt {
            files,
            write,
            check,
        } => fmt(&mut io, &files, write, check),
    }
}

/// A parsed file together with every finding about it, located.
struct Loaded {
    model: Option<AlignmentModel>,
    findings: Vec<Diagnostic>,
}

impl Loaded {
    fn ok(&self) -> Option<&AlignmentModel> {
        self.model.as_ref().filter(|_| !has_errors(&self.findings))
    }

    fn exit_code(&self) -> i32 {
        if self.findings.iter().any(|d| d.code == codes::UNREADABLE_FILE) {
            exit::IO
        } else {
            exit::DIAGNOSTICS
        }
    }
}

fn load(path: &Path) -> Loaded {
    let parsed: ParseResult = dsl::load_file(path);
    let mut findings = parsed.diagnostics.clone();
    if let Some(model) = &parsed.model {
        let mut more = validate(model);
        if !has_errors(&more) {
            more.extend(influence_warnings(model));
        }
        parsed.locate(&mut more);
        findings.extend(more);
    }
    Loaded {
        model: parsed.model,
        findings,
    }
}

/// Loads and reports findings; `Err` carries the exit code.
fn load_valid(io: &mut Io, path: &Path) -> Result<AlignmentModel, i32> {
    let loaded = load(path);
    io.report(&loaded.findings);
    match loaded.ok() {
        Some(_) => Ok(loaded.model.expect("checked above")),
        None => Err(loaded.exit_code()),
    }
}

fn check(io: &mut Io, files: &[PathBuf], strict: bool) -> i32 {
    let mut code = exit::OK;
    for path in files {
        let loaded = load(path);
        io.report(&loaded.findings);
        let failed = has_errors(&loaded.findings) || (strict && !loaded.findings.is_empty());
        if failed {
            code = code.max(loaded.exit_code());
        }
    }
    code
}

fn derive(io: &mut Io, path: &Path, items: Option<&Path>) -> i32 {
    let model = match load_valid(io, path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let itemset = match derive_all(&model) {
        Ok(set) => set,
        Err(d) => {
            io.report(&[d]);
            return exit::DIAGNOSTICS;
        }
    };
    let summary = format!("{}\n", itemset.summary());
    match items {
        Some(target) => {
            let code = io.write_to(target, &itemset.to_json());
            if code != exit::OK {
                return code;
            }
            if target == Path::new("-") {
                let _ = io.stderr.write_all(summary.as_bytes());
                exit::OK
            } else {
                io.emit(&summary)
            }
        }
        None => io.emit(&summary),
    }
}

fn export_cmd(io: &mut Io, path: &Path, options: &ExportOptions, out: Option<&Path>) -> i32 {
    let model = match load_valid(io, path) {
        Ok(m) => m,
        Err(code) => return code,
    };
    let result = derive_all(&model)
        .and_then(|set| attach(&model, &set))
        .and_then(|attached| export(&attached, options));
    match result {
        Ok(text) => match out {
            Some(target) => io.write_to(target, &text),
            None => io.emit(&text),
        },
        Err(d) => {
            io.report(&[d]);
            exit::DIAGNOSTICS
        }
    }
}

fn derive_file(path: &Path) -> (Loaded, Option<EvaluationItemSet>) {
    let loaded = load(path);
    let set = loaded.ok().and_then(|m| derive_all(m).ok());
    (loaded, set)
}

fn report(io: &mut Io, files: &[PathBuf], as_matrix: bool, format: ReportFormat) -> i32 {
    if files.len() > 1 && !as_matrix {
        io.note("error: several inputs need --matrix");
        return exit::USAGE;
    }
    let results: Vec<(Loaded, Option<EvaluationItemSet>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| scope.spawn(move || derive_file(path)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("derivation thread panicked"))
            .collect()
    });

    let mut code = exit::OK;
    let mut sets = Vec::with_capacity(results.len());
    for (loaded, set) in results {
        io.report(&loaded.findings);
        match set {
            Some(set) => sets.push(set),
            None => code = code.max(loaded.exit_code()),
        }
    }
    if code != exit::OK {
        return code;
    }
    let text = if as_matrix {
        match matrix(&sets, format) {
            Ok(text) => text,
            Err(d) => {
                io.report(&[d]);
                return exit::DIAGNOSTICS;
            }
        }
    } else {
        item_table(&sets[0], format)
    };
    io.emit(&text)
}

fn fmt(io: &mut Io, files: &[PathBuf], write: bool, check: bool) -> i32 {
    let mut code = exit::OK;
    for path in files {
        let model = match load_valid(io, path) {
            Ok(m) => m,
            Err(c) => {
                code = code.max(c);
                continue;
            }
        };
        let text = match dsl::format(&model) {
            Ok(text) => text,
            Err(diags) => {
                io.report(&diags);
                code = code.max(exit::DIAGNOSTICS);
                continue;
            }
        };
        if check || write {
            let current = std::fs::read_to_string(path).unwrap_or_default();
            if current == text {
                continue;
            }
            if check {
                io.note(&format!("{}: not in canonical form", path.display()));
                code = code.max(exit::DIAGNOSTICS);
            } else {
                code = code.max(io.write_to(path, &text));
            }
        } else {
            code = code.max(io.emit(&text));
        }
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("dsalign").chain(args.iter().copied()),
            &mut out,
            &mut err,
            false,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn missing_inputs_are_usage_errors() {
        assert_eq!(run_args(&["check"]).0, exit::USAGE);
        assert_eq!(run_args(&["report"]).0, exit::USAGE);
        assert_eq!(run_args(&[]).0, exit::USAGE);
        assert_eq!(run_args(&["export", "x.dsa", "--format", "svg"]).0, exit::USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, exit::OK);
        assert!(out.contains("Usage"));
    }

    #[test]
    fn unreadable_file_is_io_error() {
        let (code, _, err) = run_args(&["check", "/nonexistent/model.dsa"]);
        assert_eq!(code, exit::IO);
        assert!(err.contains("E190"));
    }
}
