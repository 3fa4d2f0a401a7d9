//! Command-line front end.
//!
//! Exit codes: 0 success (or criterion holds), 2 criterion fails,
//! 3 inconclusive, 1 any load, validation or replay error, 64 bad usage.

use std::ffi::OsString;
use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use kanbench_core::criterion::{check_cartesian_closed, check_left_adjoint};
use kanbench_core::fincat::validate_category;
use kanbench_core::kan::lan_apply;
use kanbench_core::reflection::{reflect, replay, Budget, Schedule, Strategy};
use kanbench_core::{Presheaf, Workspace};

use crate::doc::{BaseDoc, Document, Kind, PresheafDoc};
use crate::error::{Result, WorkbenchError};
use crate::export::presheaf_body;
use crate::fixtures::fixture_dir;
use crate::load::{dir_of, read_document, Loader};
use crate::report::{Report, SizeRow};
use crate::service::{serve, AppState};
use crate::session::Session;

pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "kanbench", version, about = "Finite presheaf models, Kan extensions and the game of reflection")]
pub struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    /// Greedy play: uniqueness moves first, then existence moves.
    Greedy,
    /// Saturate the codomain to convergence, then the domain.
    Exhaustive,
    /// Alternate codomain and domain saturation steps.
    Interleaved,
}

impl StrategyArg {
    fn strategy(self) -> Strategy {
        match self {
            StrategyArg::Greedy => Strategy::default(),
            StrategyArg::Exhaustive => Strategy::Exhaustive(Schedule::CodomainFirst),
            StrategyArg::Interleaved => Strategy::Exhaustive(Schedule::Interleaved),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a document.
    Validate { file: PathBuf },
    /// Left Kan extension of a presheaf along a Kan model.
    Lan {
        #[arg(long)]
        kan: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Reflect a presheaf into a model by iterated saturation.
    Reflect {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_steps: usize,
        #[arg(long)]
        max_elements: Option<usize>,
    },
    /// Check the left-adjointness criterion for a Kan model between models.
    CheckLa {
        #[arg(long)]
        kan: PathBuf,
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        /// Rounds (greedy) or saturation steps (exhaustive) per condition.
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long)]
        max_elements: Option<usize>,
    },
    /// Check the cartesian-closure criterion for a model.
    CheckCc {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Greedy)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long)]
        max_elements: Option<usize>,
    },
    /// Start a session on a configuration and serve it over HTTP.
    Play {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = 0)]
        port: u16,
    },
    /// Replay a trace and check every recorded digest.
    Replay {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Run the session service.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory that base references in uploaded documents resolve against.
        #[arg(long)]
        docs: Option<PathBuf>,
    },
}

/// Parses `args` and runs the command, writing the report to `out`.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let json = cli.json;
    let report = match execute(cli.command, out) {
        Ok(Some(r)) => r,
        Ok(None) => return 0,
        Err(e) => Report::error(&e),
    };
    let text = if json { report.to_json() } else { report.to_text() };
    let _ = out.write_all(text.as_bytes());
    report.exit_code()
}

fn expect<T>(path: &Path, kind: Kind, pick: impl FnOnce(Document) -> Option<T>) -> Result<T> {
    let doc = read_document(path)?.expect_kind(kind)?;
    Ok(pick(doc).expect("kind checked"))
}

fn sizes(x: &Presheaf) -> Vec<SizeRow> {
    let base = x.base();
    base.objects().iter().map(|c| SizeRow { object: base.name(c), size: x.set(c).len() }).collect()
}

fn result_doc(base: BaseDoc, x: &Presheaf) -> serde_json::Value {
    Document::Presheaf(PresheafDoc::new(base, presheaf_body(x))).to_value()
}

fn budget(rounds: usize, max_elements: Option<usize>) -> Budget {
    Budget { rounds, max_elements }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<Option<Report>> {
    let ws = Workspace::new();
    let mut loader = Loader::new(&ws);
    let report = match command {
        Command::Validate { file } => Some(validate(&mut loader, &file)?),
        Command::Lan { kan, input } => {
            let kdoc = expect(&kan, Kind::KanModel, |d| match d {
                Document::KanModel(k) => Some(k),
                _ => None,
            })?;
            let f = loader.kan_model(&kdoc, &dir_of(&kan))?;
            let idoc = expect(&input, Kind::Presheaf, |d| match d {
                Document::Presheaf(p) => Some(p),
                _ => None,
            })?;
            let base = loader.base(&idoc.base, &dir_of(&input))?;
            let x = loader.presheaf(&base, &idoc.body())?;
            let lan = lan_apply(&ws, &f, &x)?;
            let target = loader.resolve_base(&kdoc.target, &dir_of(&kan))?;
            Some(Report::Lan { sizes: sizes(&lan.presheaf), result: result_doc(target, &lan.presheaf) })
        }
        Command::Reflect { model, input, max_steps, max_elements } => {
            let mdoc = expect(&model, Kind::Model, |d| match d {
                Document::Model(m) => Some(m),
                _ => None,
            })?;
            let m = loader.model(&mdoc, &dir_of(&model))?;
            let idoc = expect(&input, Kind::Presheaf, |d| match d {
                Document::Presheaf(p) => Some(p),
                _ => None,
            })?;
            let base = loader.base(&idoc.base, &dir_of(&input))?;
            let x = loader.presheaf(&base, &idoc.body())?;
            let r = reflect(&ws, &x, &m, max_steps, max_elements)?;
            let base_doc = loader.resolve_base(&mdoc.base, &dir_of(&model))?;
            Some(Report::Reflect {
                status: format!("{:?}", r.status),
                steps_used: r.steps_used,
                sizes: sizes(&r.result),
                result: result_doc(base_doc, &r.result),
            })
        }
        Command::CheckLa { kan, source, target, strategy, budget: rounds, max_elements } => {
            let load_model = |loader: &mut Loader, path: &Path| {
                let doc = expect(path, Kind::Model, |d| match d {
                    Document::Model(m) => Some(m),
                    _ => None,
                })?;
                loader.model(&doc, &dir_of(path))
            };
            let s = load_model(&mut loader, &source)?;
            let t = Arc::new(load_model(&mut loader, &target)?);
            let kdoc = expect(&kan, Kind::KanModel, |d| match d {
                Document::KanModel(k) => Some(k),
                _ => None,
            })?;
            let f = loader.kan_model(&kdoc, &dir_of(&kan))?;
            let r = check_left_adjoint(&ws, &f, &s, &t, &strategy.strategy(), &budget(rounds, max_elements))?;
            Some(Report::check_la(&r))
        }
        Command::CheckCc { model, strategy, budget: rounds, max_elements } => {
            let doc = expect(&model, Kind::Model, |d| match d {
                Document::Model(m) => Some(m),
                _ => None,
            })?;
            let m = Arc::new(loader.model(&doc, &dir_of(&model))?);
            let r = check_cartesian_closed(&ws, &m, &strategy.strategy(), &budget(rounds, max_elements))?;
            Some(Report::check_cc(&r))
        }
        Command::Replay { trace } => {
            let doc = expect(&trace, Kind::Trace, |d| match d {
                Document::Trace(t) => Some(t),
                _ => None,
            })?;
            let t = loader.trace(&doc, &dir_of(&trace))?;
            let end = replay(&ws, &t)?;
            Some(Report::Replay {
                steps: t.steps.len(),
                moves: t.moves(),
                final_digest: end.digest(),
                won: end.is_won(),
            })
        }
        Command::Play { model, config, host, port } => {
            let mdoc = expect(&model, Kind::Model, |d| match d {
                Document::Model(m) => Some(m),
                _ => None,
            })?;
            let cdoc = expect(&config, Kind::Morphism, |d| match d {
                Document::Morphism(m) => Some(m),
                _ => None,
            })?;
            let id = uuid::Uuid::new_v4().simple().to_string();
            let session = Session::new(id.clone(), &mdoc, &dir_of(&model), &cdoc, &dir_of(&config))?;
            let state = AppState::new(dir_of(&config));
            state.insert(session);
            run_server(state, SocketAddr::new(host, port), out, Some(&id))?;
            None
        }
        Command::Serve { host, port, docs } => {
            let state = AppState::new(docs.unwrap_or_else(fixture_dir));
            run_server(state, SocketAddr::new(host, port), out, None)?;
            None
        }
    };
    Ok(report)
}

fn run_server(state: AppState, addr: SocketAddr, out: &mut dyn Write, session: Option<&str>) -> Result<()> {
    let rt = tokio::runtime::Runtime::new().map_err(|e| WorkbenchError::BadRequest(e.to_string()))?;
    rt.block_on(serve(state, addr, |bound| {
        let _ = match session {
            Some(id) => writeln!(out, "session http://{bound}/sessions/{id}"),
            None => writeln!(out, "listening on http://{bound}"),
        };
        let _ = out.flush();
    }))
    .map_err(|source| WorkbenchError::Io { path: PathBuf::from(addr.to_string()), source })
}

fn validate(loader: &mut Loader, path: &Path) -> Result<Report> {
    let doc = read_document(path)?;
    let dir = dir_of(path);
    let summary = match &doc {
        Document::Presentation(_) | Document::Category(_) => {
            let b = match &doc {
                Document::Presentation(p) => BaseDoc::Presentation(p.clone()),
                Document::Category(c) => BaseDoc::Category(c.clone()),
                _ => unreachable!(),
            };
            let base = loader.base(&b, &dir)?;
            let vs = validate_category(&base);
            if !vs.is_empty() {
                return Err(WorkbenchError::Validation(vs.iter().map(|v| v.to_string()).collect()));
            }
            format!("{} objects, {} morphisms", base.objects().len(), base.morphisms().len())
        }
        Document::Presheaf(p) => {
            let base = loader.base(&p.base, &dir)?;
            let x = loader.presheaf(&base, &p.body())?;
            format!("{} elements", x.total_size())
        }
        Document::Morphism(m) => {
            let base = loader.base(&m.base, &dir)?;
            let f = loader.morphism(&base, &m.body())?;
            format!(
                "{} -> {} elements{}",
                f.source().total_size(),
                f.target().total_size(),
                if f.is_iso() { ", iso" } else { "" }
            )
        }
        Document::Model(m) => {
            let model = loader.model(m, &dir)?;
            format!(
                "{} objects, {} morphisms, {} conditions",
                model.base.objects().len(),
                model.base.morphisms().len(),
                model.conditions.len()
            )
        }
        Document::KanModel(k) => {
            let f = loader.kan_model(k, &dir)?;
            format!(
                "{} source objects into presheaves on {} objects",
                f.source.objects().len(),
                f.target.objects().len()
            )
        }
        Document::Trace(t) => {
            let tr = loader.trace(t, &dir)?;
            format!("{} steps", tr.steps.len())
        }
    };
    Ok(Report::Validate { file: path.display().to_string(), kind: doc.kind().name().to_string(), summary })
}
