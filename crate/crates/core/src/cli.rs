//! Command-line driver. Output is plain text; no styling is ever emitted.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ColorChoice, Parser, Subcommand};

use crate::classify::{classify_relevance, filter_sotif};
use crate::diagnostic::{emit_diagnostics, has_errors, Diagnostic, DiagnosticStyle, Severity};
use crate::dsl::{factor_line, parse_files, scenario_line, uca_line};
use crate::generate::{enumerate_uca_candidates, expand_loss_scenarios, Taxonomy};
use crate::model::{assemble_model, AnalysisModel, EntityId, Relevance};
use crate::trace::{export, stats, trace_from, ExportFormat, TraceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "stpa-sotif", version, about = "STPA models, UCA and loss-scenario generation, SOTIF trigger tracing", color = ColorChoice::Never)]
struct Cli {
    /// Print diagnostics as JSON lines.
    #[arg(long, global = true)]
    machine: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, assemble and validate.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Generate UCA candidates or loss-scenario skeletons.
    #[command(subcommand)]
    Gen(Gen),
    /// Summarize the SOTIF relevance partition.
    Classify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the trace tree from a loss (downstream) or a trigger (upstream).
    Trace {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        from: String,
    },
    /// Print entity and link counts.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Export as json, csv, dot or markdown.
    Export {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// One candidate per control action, guide word and behavior.
    Ucas {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Append new candidates to the last file.
        #[arg(long)]
        write: bool,
    },
    /// Scenario skeletons for every retained UCA.
    Scenarios {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        merge_controller_flaws: bool,
        /// Append new scenarios (and any missing factors) to the last file.
        #[arg(long)]
        write: bool,
    },
}

/// Loaded and assembled input files.
struct Input {
    model: AnalysisModel,
    diagnostics: Vec<Diagnostic>,
    last: Option<(PathBuf, String)>,
}

struct Session<'a> {
    style: DiagnosticStyle,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

type Outcome = Result<i32, i32>;

impl Session<'_> {
    fn diagnostics(&mut self, diags: &[Diagnostic]) {
        let _ = self.stderr.write_all(emit_diagnostics(diags, self.style).as_bytes());
    }

    fn fail(&mut self, code: i32, message: &str) -> i32 {
        let _ = writeln!(self.stderr, "error: {message}");
        code
    }

    fn out(&mut self, text: &str) {
        let _ = self.stdout.write_all(text.as_bytes());
    }

    fn load(&mut self, files: &[PathBuf]) -> Result<Input, i32> {
        let mut sources = Vec::new();
        for path in files {
            match fs::read_to_string(path) {
                Ok(text) => sources.push((path.to_string_lossy().into_owned(), text)),
                Err(e) => return Err(self.fail(EXIT_USAGE, &format!("cannot read {}: {e}", path.display()))),
            }
        }
        let (decls, mut diagnostics) = parse_files(sources.iter().map(|(f, t)| (f.as_str(), t.as_str())));
        let (model, assembly) = assemble_model(&decls);
        diagnostics.extend(assembly);
        let last = files.last().cloned().zip(sources.pop().map(|(_, t)| t));
        Ok(Input { model, diagnostics, last })
    }

    /// Loads, reports diagnostics and stops on errors.
    fn load_valid(&mut self, files: &[PathBuf]) -> Result<Input, i32> {
        let input = self.load(files)?;
        self.diagnostics(&input.diagnostics);
        if has_errors(&input.diagnostics) {
            return Err(EXIT_DIAGNOSTICS);
        }
        Ok(input)
    }

    fn append(&mut self, last: Option<(PathBuf, String)>, lines: &[String]) -> Outcome {
        let Some((path, mut text)) = last else {
            return Err(self.fail(EXIT_USAGE, "no file to write to"));
        };
        if !lines.is_empty() {
            if !text.is_empty() && !text.ends_with('\n') {
                text.push('\n');
            }
            if !text.is_empty() {
                text.push('\n');
            }
            for line in lines {
                text.push_str(line);
                text.push('\n');
            }
            if let Err(e) = fs::write(&path, text) {
                return Err(self.fail(EXIT_USAGE, &format!("cannot write {}: {e}", path.display())));
            }
        }
        self.out(&format!("wrote {} declaration(s) to {}\n", lines.len(), path.display()));
        Ok(EXIT_OK)
    }

    fn check(&mut self, files: &[PathBuf]) -> Outcome {
        let input = self.load(files)?;
        self.diagnostics(&input.diagnostics);
        let errors = input.diagnostics.iter().filter(|d| d.severity == Severity::Error).count();
        let warnings = input.diagnostics.len() - errors;
        let verdict = if errors == 0 { "ok" } else { "failed" };
        self.out(&format!("{verdict}: {errors} error(s), {warnings} warning(s)\n"));
        Ok(if errors == 0 { EXIT_OK } else { EXIT_DIAGNOSTICS })
    }

    fn gen_ucas(&mut self, files: &[PathBuf], write: bool) -> Outcome {
        let input = self.load_valid(files)?;
        let candidates = enumerate_uca_candidates(&input.model).map_err(|e| self.fail(EXIT_DIAGNOSTICS, &e.to_string()))?;
        if write {
            let new: Vec<String> =
                candidates.iter().filter(|u| !input.model.ucas.contains_key(&u.id)).map(uca_line).collect();
            return self.append(input.last, &new);
        }
        let text: String = candidates.iter().map(|u| uca_line(u) + "\n").collect();
        self.out(&text);
        Ok(EXIT_OK)
    }

    fn gen_scenarios(&mut self, files: &[PathBuf], merge: bool, write: bool) -> Outcome {
        let input = self.load_valid(files)?;
        let taxonomy = Taxonomy::from_model(&input.model, merge);
        let expansion =
            expand_loss_scenarios(&input.model, &taxonomy).map_err(|e| self.fail(EXIT_DIAGNOSTICS, &e.to_string()))?;
        self.diagnostics(&expansion.diagnostics);
        if write {
            let mut lines: Vec<String> = taxonomy
                .factors
                .iter()
                .filter(|f| !input.model.factors.contains_key(&f.id))
                .map(factor_line)
                .collect();
            lines.extend(
                expansion
                    .scenarios
                    .iter()
                    .filter(|s| !input.model.scenarios.contains_key(&s.id))
                    .map(scenario_line),
            );
            return self.append(input.last, &lines);
        }
        let text: String = expansion.scenarios.iter().map(|s| scenario_line(s) + "\n").collect();
        self.out(&text);
        Ok(EXIT_OK)
    }

    fn classify(&mut self, files: &[PathBuf]) -> Outcome {
        let input = self.load_valid(files)?;
        let model = &input.model;
        let taxonomy = Taxonomy::from_model(model, false);
        let (retained, excluded) = filter_sotif(model, &taxonomy);
        let mut by_class: BTreeMap<&str, usize> = BTreeMap::new();
        let mut by_factor: BTreeMap<EntityId, usize> = BTreeMap::new();
        for s in model.scenarios.values() {
            let class = classify_relevance(s, &taxonomy).unwrap_or(Relevance::NeedsReview);
            *by_class.entry(class.as_str()).or_default() += 1;
            *by_factor.entry(taxonomy.resolve(s.factor)).or_default() += 1;
        }
        let mut out = format!(
            "scenarios: {}\nretained: {}\nexcluded: {}\n",
            model.scenarios.len(),
            retained.len(),
            excluded.len()
        );
        for class in [Relevance::Sotif, Relevance::NeedsReview, Relevance::FunctionalSafety] {
            out.push_str(&format!("{}: {}\n", class, by_class.get(class.as_str()).copied().unwrap_or(0)));
        }
        out.push_str("\nfactor label relevance scenarios\n");
        for f in &taxonomy.factors {
            let n = by_factor.get(&f.id).copied().unwrap_or(0);
            out.push_str(&format!("{} {} {} {n}\n", f.id, f.label, f.default_relevance));
        }
        self.out(&out);
        Ok(EXIT_OK)
    }

    fn trace(&mut self, files: &[PathBuf], from: &str) -> Outcome {
        let root: EntityId = from.parse().map_err(|e| self.fail(EXIT_USAGE, &format!("--from {from}: {e}")))?;
        let input = self.load_valid(files)?;
        match trace_from(&input.model, root) {
            Ok(tree) => {
                self.out(&tree.render(&input.model));
                Ok(EXIT_OK)
            }
            Err(e @ TraceError::Dangling(_)) => Err(self.fail(EXIT_DIAGNOSTICS, &e.to_string())),
            Err(e @ TraceError::UnsupportedRoot(_)) => Err(self.fail(EXIT_USAGE, &e.to_string())),
        }
    }

    fn stats(&mut self, files: &[PathBuf]) -> Outcome {
        let input = self.load_valid(files)?;
        self.out(&stats(&input.model).render());
        Ok(EXIT_OK)
    }

    fn export(&mut self, files: &[PathBuf], format: &str, out: Option<&Path>) -> Outcome {
        let format: ExportFormat = format.parse().map_err(|e: String| self.fail(EXIT_USAGE, &e))?;
        let input = self.load_valid(files)?;
        let bytes = export(&input.model, format);
        match out {
            Some(path) => fs::write(path, bytes)
                .map(|_| EXIT_OK)
                .map_err(|e| self.fail(EXIT_USAGE, &format!("cannot write {}: {e}", path.display()))),
            None => {
                let _ = self.stdout.write_all(&bytes);
                Ok(EXIT_OK)
            }
        }
    }
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 success, 1 diagnostics with errors, 2 usage or I/O error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let style = if cli.machine { DiagnosticStyle::Machine } else { DiagnosticStyle::Human };
    let mut s = Session { style, stdout, stderr };
    let outcome = match &cli.command {
        Command::Check { files } => s.check(files),
        Command::Gen(Gen::Ucas { files, write }) => s.gen_ucas(files, *write),
        Command::Gen(Gen::Scenarios { files, merge_controller_flaws, write }) => {
            s.gen_scenarios(files, *merge_controller_flaws, *write)
        }
        Command::Classify { files } => s.classify(files),
        Command::Trace { files, from } => s.trace(files, from),
        Command::Stats { files } => s.stats(files),
        Command::Export { files, format, out } => s.export(files, format, out.as_deref()),
    };
    let code = outcome.unwrap_or_else(|code| code);
    let _ = s.stdout.flush();
    code
}
