mod text;

use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use llmrisk_core::format::{from_json, sniff_kind, to_canonical_json, DocumentKind};
use llmrisk_core::rating::validate_scheme;
use llmrisk_core::{
    apply_adjustment, build_matrix, evaluate_document, filter_by_stakeholder, filter_traditional,
    load_catalog, render, validate_document, AssessmentDocument, Catalog, CatalogSource,
    ControlAdjustment, DocumentStore, Error, Issue, OutputFormat, RatingScheme, StakeholderGroup,
    ValidationReport,
};
use llmrisk_server::ServerConfig;

#[derive(Parser, Debug)]
#[command(
    name = "llmrisk",
    version,
    about = "Risk ratings and threat matrices for LLM systems"
)]
struct Cli {
    /// Rating scheme file; the bundled OWASP scheme when unset.
    #[arg(long, global = true, env = "LLMRISK_SCHEME", value_name = "FILE")]
    scheme: Option<PathBuf>,

    /// Threat catalog file; the bundled catalog when unset.
    #[arg(long, global = true, env = "LLMRISK_CATALOG", value_name = "FILE")]
    catalog: Option<PathBuf>,

    /// Never colorize output.
    #[arg(long, global = true)]
    no_color: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an assessment, scheme or catalog file.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Rate one assessment document.
    Evaluate {
        doc: PathBuf,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Rate a document before and after a control adjustment.
    Whatif {
        doc: PathBuf,
        /// Control adjustment file.
        #[arg(long, value_name = "FILE")]
        adjust: PathBuf,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Build the threat matrix from a directory of assessments.
    Matrix {
        dir: PathBuf,
        #[arg(long)]
        stakeholder: Option<StakeholderGroup>,
        /// csv, md or json.
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Query or export the threat catalog.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Export the rating scheme.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Subcommand, Debug)]
enum CatalogCommand {
    List {
        #[arg(long)]
        stakeholder: Option<StakeholderGroup>,
        /// Keep only entries with this traditional-cybersec flag.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        traditional: Option<bool>,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    Export {
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SchemeCommand {
    Export {
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, env = "LLMRISK_ADDR", default_value = llmrisk_server::DEFAULT_ADDR)]
    addr: std::net::SocketAddr,
    /// Directory holding assessment documents.
    #[arg(long, env = "LLMRISK_STORE", default_value = "assessments")]
    store: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Assessment,
    Scheme,
    Catalog,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

fn exit_code(err: &Error) -> u8 {
    match err.code() {
        "io_failure" => 3,
        _ if err.is_usage() => 2,
        _ => 1,
    }
}

/// Reads `path`, falling back to `path.json` so fixture names work bare.
fn read_input(path: &Path) -> Result<(PathBuf, String), Error> {
    let mut actual = path.to_path_buf();
    if !actual.exists() && actual.extension().is_none() {
        let with_ext = path.with_extension("json");
        if with_ext.exists() {
            actual = with_ext;
        }
    }
    let text = std::fs::read_to_string(&actual).map_err(|source| Error::Io {
        path: actual.clone(),
        source,
    })?;
    Ok((actual, text))
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    let result = match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| (path.to_path_buf(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| (PathBuf::from("<stdout>"), e))
        }
    };
    result.map_err(|(path, source)| Error::Io { path, source })
}

struct Context {
    scheme: RatingScheme,
    catalog: Catalog,
    color: bool,
}

impl Context {
    fn load(cli: &Cli) -> Result<Self, Error> {
        let scheme = match &cli.scheme {
            Some(path) => RatingScheme::load(path)?,
            None => RatingScheme::bundled(),
        };
        let catalog = match &cli.catalog {
            Some(path) => load_catalog(CatalogSource::File(path.clone()))?,
            None => Catalog::bundled(),
        };
        let color = !cli.no_color
            && std::env::var_os("NO_COLOR").is_none()
            && std::io::stdout().is_terminal();
        Ok(Context {
            scheme,
            catalog,
            color,
        })
    }
}

fn load_document(path: &Path) -> Result<AssessmentDocument, Error> {
    let (_, text) = read_input(path)?;
    AssessmentDocument::from_json(&text)
}

fn validate(
    ctx: &Context,
    path: &Path,
    kind: Option<Kind>,
    format: TextOrJson,
) -> Result<bool, Error> {
    let (actual, text) = read_input(path)?;
    let kind = match kind {
        Some(k) => k,
        None => match sniff_kind(&text) {
            Some(DocumentKind::Assessment) => Kind::Assessment,
            Some(DocumentKind::Scheme) => Kind::Scheme,
            Some(DocumentKind::Catalog) => Kind::Catalog,
            None => {
                return Err(Error::Usage {
                    what: "document kind (pass --kind)".into(),
                    value: actual.display().to_string(),
                })
            }
        },
    };
    let report = match kind {
        Kind::Assessment => {
            let doc = AssessmentDocument::from_json(&text)?;
            validate_document(&doc, &ctx.catalog, &ctx.scheme)
        }
        Kind::Scheme => validate_scheme(&from_json::<RatingScheme>(&text, "rating scheme")?),
        Kind::Catalog => {
            let mut report = ValidationReport::default();
            if let Err(e) = Catalog::from_json(&text, CatalogSource::File(actual.clone())) {
                let mut issue = Issue::new(e.code(), e.to_string());
                issue.locus = e.locus();
                report.error(issue);
            }
            report
        }
    };
    let out = match format {
        TextOrJson::Json => to_canonical_json(&report),
        TextOrJson::Text => format!("{}: {}", actual.display(), report),
    };
    write_output(None, out.as_bytes())?;
    Ok(report.is_ok())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let ctx = Context::load(&cli)?;
    match cli.command {
        Command::Validate { path, kind, format } => return validate(&ctx, &path, kind, format),
        Command::Evaluate { doc, format } => {
            let doc = load_document(&doc)?;
            let rating = evaluate_document(&doc, &ctx.scheme)?;
            let out = match format {
                TextOrJson::Json => to_canonical_json(&rating),
                TextOrJson::Text => {
                    text::rating_sheet(&doc, &rating, &ctx.scheme, &ctx.catalog, ctx.color)
                }
            };
            write_output(None, out.as_bytes())?;
        }
        Command::Whatif {
            doc,
            adjust,
            format,
        } => {
            let doc = load_document(&doc)?;
            let (_, text) = read_input(&adjust)?;
            let adjustment: ControlAdjustment = from_json(&text, "control adjustment")?;
            let result = apply_adjustment(&doc, &adjustment, &ctx.scheme)?;
            let out = match format {
                TextOrJson::Json => to_canonical_json(&result),
                TextOrJson::Text => text::whatif(&adjustment, &result, ctx.color),
            };
            write_output(None, out.as_bytes())?;
        }
        Command::Matrix {
            dir,
            stakeholder,
            format,
            out,
        } => {
            if !dir.is_dir() {
                return Err(Error::Io {
                    path: dir,
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
                });
            }
            let docs = DocumentStore::open(&dir)?.load_all()?;
            let matrix = build_matrix(&ctx.catalog, &docs, &ctx.scheme, stakeholder)?;
            write_output(out.as_deref(), &render(&matrix, format))?;
        }
        Command::Catalog(CatalogCommand::List {
            stakeholder,
            traditional,
            format,
        }) => {
            let mut entries: Vec<_> = match stakeholder {
                Some(group) => filter_by_stakeholder(&ctx.catalog, group),
                None => ctx.catalog.entries.iter().collect(),
            };
            if let Some(flag) = traditional {
                let keep = filter_traditional(&ctx.catalog, flag);
                entries.retain(|e| keep.iter().any(|k| k.id == e.id));
            }
            let out = match format {
                TextOrJson::Json => to_canonical_json(&entries),
                TextOrJson::Text => text::catalog_list(&entries),
            };
            write_output(None, out.as_bytes())?;
        }
        Command::Catalog(CatalogCommand::Export { out }) => {
            write_output(out.as_deref(), ctx.catalog.to_json().as_bytes())?;
        }
        Command::Scheme(SchemeCommand::Export { out }) => {
            write_output(out.as_deref(), to_canonical_json(&ctx.scheme).as_bytes())?;
        }
        Command::Serve(args) => {
            let config = ServerConfig {
                addr: args.addr,
                store_root: args.store,
                scheme_path: cli.scheme,
                catalog_path: cli.catalog,
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|source| Error::Io {
                path: PathBuf::from("<runtime>"),
                source,
            })?;
            if let Err(e) = runtime.block_on(llmrisk_server::serve(config)) {
                return match e.downcast::<Error>() {
                    Ok(e) => Err(*e),
                    Err(e) => Err(Error::Io {
                        path: PathBuf::from("<server>"),
                        source: std::io::Error::other(e.to_string()),
                    }),
                };
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Command::Serve(_)) {
        tracing_subscriber::fmt()
            .with_env_filter(
                tracing_subscriber::EnvFilter::try_from_default_env()
                    .unwrap_or_else(|_| "info".into()),
            )
            .with_writer(std::io::stderr)
            .init();
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("llmrisk: {err}");
            if let Error::InvalidDocument(issues) | Error::InvalidScheme(issues) = &err {
                for issue in issues {
                    eprintln!("  {issue}");
                }
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
