//! The `matchertext` command-line tool.
//!
//! [`run`] takes the argument vector and the bytes of standard input and
//! returns everything the process would write, so the whole front end can be
//! driven from tests without spawning a process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchertext::cesc::{self, EscapeStyle, QuoteContext};
use matchertext::minml::{minml_to_html, minml_to_xml, parse_minml};
use matchertext::mlx::{expand_ml, MlDialect};
use matchertext::mri::{decode_uri_extended_with, mri_to_uri, parse_mri_with, uri_to_mri};
use matchertext::report::Report;
use matchertext::rex::translate_rex_str;
use matchertext::{analyze_source, validate, ContextViolation, LanguageProfile, MatcherConfig, RegionContext};
use rayon::prelude::*;

/// Environment variable naming a default matcher configuration file.
pub const CONFIG_ENV: &str = "MATCHERTEXT_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Nothing to report.
    Clean,
    /// Violations or conversion errors were found.
    Findings,
    /// Bad arguments or configuration.
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Clean => 0,
            ExitStatus::Findings => 1,
            ExitStatus::Usage => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub status: ExitStatus,
}

#[derive(Debug, Parser)]
#[command(name = "matchertext", version, about = "Check and convert matchertext")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate files (or stdin) as matchertext
    Check {
        #[command(flatten)]
        config: ConfigArgs,
        /// Emit the JSON report on stdout
        #[arg(long)]
        json: bool,
        /// Files to check; stdin when empty
        paths: Vec<PathBuf>,
    },
    /// Encode stdin as a string-literal body
    Escape {
        #[arg(long, value_enum, default_value_t = Style::Select)]
        style: Style,
        /// Also escape apostrophes, for single-quoted literals
        #[arg(long)]
        single_quote: bool,
        /// Wrap stdin verbatim in a `\[...]` escape instead (must be matchertext)
        #[arg(long, conflicts_with_all = ["style", "single_quote"])]
        embed: bool,
    },
    /// Decode a string-literal body from stdin
    Unescape,
    /// Expand bracketed HTML/XML hosting forms
    MlExpand {
        #[arg(long, value_enum, default_value_t = Dialect::Html)]
        dialect: Dialect,
    },
    /// Convert MinML to HTML or XML
    Minml {
        #[arg(long, value_enum, default_value_t = Target::Html)]
        to: Target,
    },
    /// Convert resource identifiers, one per line
    Mri {
        #[command(subcommand)]
        op: MriOp,
    },
    /// Regex preprocessing
    Rex {
        #[command(subcommand)]
        op: RexOp,
    },
    /// Survey violations in source files by lexical context
    Analyze {
        /// Built-in profile name or path to a profile file
        #[arg(long)]
        profile: String,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        json: bool,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum MriOp {
    /// MRI to conventional URI
    ToUri {
        /// Accept the standard alphabet (spaces, controls) in bodies
        #[arg(long)]
        standard: bool,
    },
    /// Conventional URI to MRI
    FromUri,
    /// Decode a URI component, including `%[...]` escapes
    Decode {
        #[arg(long)]
        standard: bool,
    },
}

#[derive(Debug, Subcommand)]
enum RexOp {
    /// Rewrite extended regexes into the plain dialect, one per line
    Translate,
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Alphabet variant
    #[arg(long, value_enum, default_value_t = Variant::Standard)]
    config: Variant,
    /// TOML file with `alphabet` and `pairs` keys; overrides --config
    #[arg(long, env = CONFIG_ENV)]
    config_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    Standard,
    Graphical,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Style {
    Select,
    Hex,
    Universal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dialect {
    Html,
    Xhtml,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Html,
    Xml,
}

/// True when the given arguments select a command that reads stdin.
pub fn wants_stdin(argv: &[String]) -> bool {
    match Cli::try_parse_from(argv) {
        Ok(cli) => match cli.command {
            Command::Check { paths, .. } => paths.is_empty(),
            Command::Analyze { .. } => false,
            _ => true,
        },
        Err(_) => false,
    }
}

/// Runs one invocation.
pub fn run(argv: &[String], stdin: &[u8]) -> Output {
    let mut out = Output {
        stdout: Vec::new(),
        stderr: Vec::new(),
        status: ExitStatus::Clean,
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string().into_bytes();
            if e.use_stderr() {
                out.stderr = rendered;
                out.status = ExitStatus::Usage;
            } else {
                out.stdout = rendered;
            }
            return out;
        }
    };
    let mut io = Io::default();
    let status = match dispatch(cli.command, stdin, &mut io) {
        Ok(status) => status,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            ExitStatus::Usage
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            ExitStatus::Findings
        }
    };
    out.stdout = io.out.into_bytes();
    out.stderr = io.err.into_bytes();
    out.status = status;
    out
}

#[derive(Default)]
struct Io {
    out: String,
    err: String,
}

enum Failure {
    Usage(String),
    Input(String),
}

fn utf8(bytes: &[u8], what: &str) -> Result<String, Failure> {
    String::from_utf8(bytes.to_vec()).map_err(|e| Failure::Input(format!("{what} is not UTF-8 ({e})")))
}

fn findings(any: bool) -> ExitStatus {
    if any {
        ExitStatus::Findings
    } else {
        ExitStatus::Clean
    }
}

fn dispatch(command: Command, stdin: &[u8], io: &mut Io) -> Result<ExitStatus, Failure> {
    match command {
        Command::Check { config, json, paths } => check(&load_config(&config)?, json, &paths, stdin, io),
        Command::Escape {
            style,
            single_quote,
            embed,
        } => {
            let text = utf8(stdin, "input")?;
            if embed {
                let body = cesc::embed(&text).map_err(|e| Failure::Input(e.to_string()))?;
                io.out.push_str(&body);
                return Ok(ExitStatus::Clean);
            }
            let style = match style {
                Style::Select => EscapeStyle::MatcherSelect,
                Style::Hex => EscapeStyle::NumericHex,
                Style::Universal => EscapeStyle::NumericUniversal,
            };
            let quote = if single_quote {
                QuoteContext::Single
            } else {
                QuoteContext::Double
            };
            io.out.push_str(&cesc::encode_with(&text, style, quote));
            Ok(ExitStatus::Clean)
        }
        Command::Unescape => {
            let body = utf8(stdin, "input")?;
            io.out
                .push_str(&cesc::decode(&body).map_err(|e| Failure::Input(e.to_string()))?);
            Ok(ExitStatus::Clean)
        }
        Command::MlExpand { dialect } => {
            let dialect = match dialect {
                Dialect::Html => MlDialect::Html,
                Dialect::Xhtml => MlDialect::Xhtml,
            };
            let text = utf8(stdin, "input")?;
            io.out
                .push_str(&expand_ml(&text, dialect).map_err(|e| Failure::Input(e.to_string()))?);
            Ok(ExitStatus::Clean)
        }
        Command::Minml { to } => {
            let text = utf8(stdin, "input")?;
            let nodes = parse_minml(&text).map_err(|e| Failure::Input(e.to_string()))?;
            io.out.push_str(&match to {
                Target::Html => minml_to_html(&nodes),
                Target::Xml => minml_to_xml(&nodes),
            });
            Ok(ExitStatus::Clean)
        }
        Command::Mri { op } => {
            let text = utf8(stdin, "input")?;
            let relaxed = |standard: bool| {
                if standard {
                    MatcherConfig::standard()
                } else {
                    MatcherConfig::graphical()
                }
            };
            Ok(match op {
                MriOp::ToUri { standard } => {
                    let cfg = relaxed(standard);
                    per_line(&text, io, |l| {
                        parse_mri_with(l, &cfg)
                            .map(|m| mri_to_uri(&m))
                            .map_err(|e| e.to_string())
                    })
                }
                MriOp::FromUri => per_line(&text, io, |l| {
                    uri_to_mri(l).map(|m| m.to_string()).map_err(|e| e.to_string())
                }),
                MriOp::Decode { standard } => {
                    let cfg = relaxed(standard);
                    per_line(&text, io, |l| {
                        decode_uri_extended_with(l, &cfg).map_err(|e| e.to_string())
                    })
                }
            })
        }
        Command::Rex { op: RexOp::Translate } => {
            let text = utf8(stdin, "input")?;
            Ok(per_line(&text, io, |l| translate_rex_str(l).map_err(|e| e.to_string())))
        }
        Command::Analyze {
            profile,
            config,
            json,
            paths,
        } => {
            let profile = load_profile(&profile)?;
            analyze(&profile, &load_config(&config)?, json, &paths, io)
        }
    }
}

/// Applies `f` to each line; failures go to stderr and leave an empty line
/// in the output so line numbers stay aligned.
fn per_line(text: &str, io: &mut Io, f: impl Fn(&str) -> Result<String, String>) -> ExitStatus {
    let mut failed = false;
    for (i, line) in text.lines().enumerate() {
        match f(line) {
            Ok(converted) => io.out.push_str(&converted),
            Err(e) => {
                failed = true;
                let _ = writeln!(io.err, "line {}: {e}", i + 1);
            }
        }
        io.out.push('\n');
    }
    findings(failed)
}

fn load_config(args: &ConfigArgs) -> Result<MatcherConfig, Failure> {
    if let Some(path) = &args.config_file {
        let src = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
        return MatcherConfig::from_toml_str(&src).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    Ok(match args.config {
        Variant::Standard => MatcherConfig::standard(),
        Variant::Graphical => MatcherConfig::graphical(),
    })
}

fn load_profile(name: &str) -> Result<LanguageProfile, Failure> {
    if LanguageProfile::builtin_names().any(|n| n == name) {
        return LanguageProfile::builtin(name).map_err(|e| Failure::Usage(e.to_string()));
    }
    let src = std::fs::read_to_string(name).map_err(|e| {
        let builtins: Vec<_> = LanguageProfile::builtin_names().collect();
        Failure::Usage(format!(
            "profile {name:?} is neither built in ({}) nor a readable file: {e}",
            builtins.join(", ")
        ))
    })?;
    LanguageProfile::from_toml_str(&src).map_err(|e| Failure::Usage(format!("{name}: {e}")))
}

fn check(
    config: &MatcherConfig,
    json: bool,
    paths: &[PathBuf],
    stdin: &[u8],
    io: &mut Io,
) -> Result<ExitStatus, Failure> {
    let mut inputs: Vec<(String, String)> = Vec::new();
    if paths.is_empty() {
        inputs.push(("-".to_string(), utf8(stdin, "stdin")?));
    } else {
        for path in paths {
            let bytes =
                std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            inputs.push((path.display().to_string(), utf8(&bytes, &path.display().to_string())?));
        }
    }
    let results: Vec<(String, Vec<_>)> = inputs
        .iter()
        .map(|(p, text)| (p.clone(), validate(text, config)))
        .collect();
    let any = results.iter().any(|(_, vs)| !vs.is_empty());
    for (path, vs) in &results {
        for v in vs {
            let _ = writeln!(io.err, "{path}:{v}");
        }
    }
    if json {
        io.out
            .push_str(&serde_json::to_string_pretty(&Report::from_validation(results)).expect("report serializes"));
        io.out.push('\n');
    }
    Ok(findings(any))
}

fn collect_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut files = Vec::new();
    for root in paths {
        if !root.exists() {
            return Err(Failure::Usage(format!("no such file or directory: {}", root.display())));
        }
        for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(|e| Failure::Usage(e.to_string()))?;
            if entry.file_type().is_file() {
                files.push(entry.into_path());
            }
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}

/// Path, violations or a read error, and lexer warnings for one file.
type FileOutcome = (String, Result<Vec<ContextViolation>, String>, Vec<String>);

fn analyze(
    profile: &LanguageProfile,
    config: &MatcherConfig,
    json: bool,
    paths: &[PathBuf],
    io: &mut Io,
) -> Result<ExitStatus, Failure> {
    let files = collect_files(paths)?;
    let per_file: Vec<FileOutcome> = files
        .par_iter()
        .map(|path| {
            let name = display_path(path);
            let text = match std::fs::read(path) {
                Ok(bytes) => match String::from_utf8(bytes) {
                    Ok(text) => text,
                    Err(_) => return (name, Err("not UTF-8; skipped".to_string()), Vec::new()),
                },
                Err(e) => return (name, Err(e.to_string()), Vec::new()),
            };
            let analysis = analyze_source(&text, profile, config).in_file(&name);
            let warnings = analysis
                .warnings
                .iter()
                .map(|w| format!("{:?} at offset {}", w.kind, w.offset))
                .collect();
            (name, Ok(analysis.violations), warnings)
        })
        .collect();

    let mut failed = false;
    let mut names = Vec::new();
    let mut all = Vec::new();
    for (name, result, warnings) in per_file {
        for w in warnings {
            let _ = writeln!(io.err, "{name}: warning: {w}");
        }
        match result {
            Ok(vs) => {
                names.push(name);
                all.extend(vs);
            }
            Err(e) => {
                failed = true;
                let _ = writeln!(io.err, "{name}: error: {e}");
            }
        }
    }
    let report = Report::from_analysis(names, &all);
    if json {
        io.out
            .push_str(&serde_json::to_string_pretty(&report).expect("report serializes"));
        io.out.push('\n');
    } else {
        for v in &all {
            let _ = writeln!(io.out, "{}:{} [{}]", v.file, v.violation, v.context);
        }
        let s = &report.summary;
        let _ = writeln!(io.out, "{} violation(s) in {} file(s)", s.total, report.files.len());
        for ctx in RegionContext::ALL {
            let _ = writeln!(io.out, "  {ctx}: {}", s.count(ctx));
        }
    }
    Ok(findings(failed || !all.is_empty()))
}
