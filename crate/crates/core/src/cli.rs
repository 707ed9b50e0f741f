//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::bpmn::{emit_implemented, parse_design};
use crate::config::Config;
use crate::keywords::{Extractor, Lexicon};
use crate::matching::{explain_match, match_task};
use crate::ontology::{build_service_ontology, load_triples, prune_baseline, save_triples, ConceptGraph, ProcessMemo};
use crate::orchestrator::Orchestrator;
use crate::registry::{emit_descriptor, Registry};

pub const CONFIG_ENV: &str = "BPMN_WEAVER_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "bpmn-weaver", version, about = "Bind design-stage BPMN tasks to registry services")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn the concept graph from a registry and write it as triples.
    BuildOntology {
        /// Directory of service descriptor XML files
        #[arg(short, long = "registry", value_name = "DIR")]
        r: PathBuf,
        /// Triples file to write
        #[arg(short, long = "output", value_name = "FILE")]
        o: PathBuf,
        /// Keep every concept instead of pruning below-mean ones
        #[arg(long)]
        no_prune: bool,
        /// Key = value settings; falls back to $BPMN_WEAVER_CONFIG
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Replacement tagger lexicon
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
    /// Bind every task of a design document.
    Implement {
        /// Design-stage process document
        #[arg(short, long = "process", value_name = "FILE")]
        p: PathBuf,
        /// Directory of service descriptor XML files
        #[arg(short, long = "registry", value_name = "DIR")]
        r: PathBuf,
        /// Concept graph written by build-ontology
        #[arg(short = 'g', long = "ontology", value_name = "FILE")]
        g: PathBuf,
        /// Implemented process document to write
        #[arg(short, long = "output", value_name = "FILE")]
        o: PathBuf,
        /// Resolution report (JSON)
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Key = value settings; falls back to $BPMN_WEAVER_CONFIG
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Composition memo; read if present, rewritten afterwards.
        #[arg(long, value_name = "FILE")]
        memo: Option<PathBuf>,
        /// Replacement tagger lexicon
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
    /// Fold an execution log into the registry's QoS records.
    IngestLog {
        /// Directory of service descriptor XML files
        #[arg(short, long = "registry", value_name = "DIR")]
        r: PathBuf,
        /// Execution log: date,serviceId,success|failure,responseMs per line
        #[arg(short, long = "log", value_name = "FILE")]
        l: PathBuf,
    },
    /// Show how one task's keywords match registry services.
    Explain {
        /// Design-stage process document
        #[arg(short, long = "process", value_name = "FILE")]
        p: PathBuf,
        /// Directory of service descriptor XML files
        #[arg(short, long = "registry", value_name = "DIR")]
        r: PathBuf,
        /// Concept graph written by build-ontology
        #[arg(short = 'g', long = "ontology", value_name = "FILE")]
        g: PathBuf,
        /// Task id in the process document
        #[arg(long)]
        task: String,
        /// Trace this service even if it is not a candidate.
        #[arg(long)]
        service: Option<String>,
        /// Key = value settings; falls back to $BPMN_WEAVER_CONFIG
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        /// Replacement tagger lexicon
        #[arg(long, value_name = "FILE")]
        lexicon: Option<PathBuf>,
    },
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Descriptor files of a registry directory: `*.xml`, sorted by name.
fn descriptor_paths(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| format!("{}: {e}", dir.display()))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "xml") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn load_registry(dir: &Path) -> CliResult<(Registry, Vec<PathBuf>)> {
    let paths = descriptor_paths(dir)?;
    let texts = paths.iter().map(|p| read(p)).collect::<CliResult<Vec<_>>>()?;
    let reg = Registry::load(&texts).map_err(|e| match e {
        crate::registry::RegistryError::MalformedDescriptor { index, reason } => {
            format!("{}: {reason}", paths[index].display())
        }
        other => format!("{}: {other}", dir.display()),
    })?;
    Ok((reg, paths))
}

fn load_config(path: Option<&Path>) -> CliResult<Config> {
    let path = path.map(Path::to_path_buf).or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => Config::parse(&read(&p)?).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(Config::default()),
    }
}

fn load_lexicon(path: Option<&Path>) -> CliResult<Arc<Lexicon>> {
    match path {
        Some(p) => Lexicon::from_path(p).map(Arc::new).map_err(|e| e.to_string()),
        None => Ok(Lexicon::builtin()),
    }
}

fn load_ontology(path: &Path) -> CliResult<ConceptGraph> {
    load_triples(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn staleness_warning(reg: &Registry, g: &ConceptGraph, err: &mut dyn Write) {
    let in_graph = g.services();
    let unseen: Vec<&str> = reg.records().map(|r| r.id.as_str()).filter(|id| !in_graph.contains(id)).collect();
    if !unseen.is_empty() {
        let _ = writeln!(
            err,
            "warning: {} registry service(s) have no ontology concepts (pruned, or added after build-ontology): {}",
            unseen.len(),
            unseen.join(", ")
        );
    }
}

fn build_ontology(
    r: &Path,
    o: &Path,
    no_prune: bool,
    config: Option<&Path>,
    lexicon: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let cfg = load_config(config)?;
    let (reg, _) = load_registry(r)?;
    let extractor = Extractor::new(load_lexicon(lexicon)?, &cfg.chunk_pattern).map_err(|e| e.to_string())?;
    let full = build_service_ontology(&reg.snapshot(), &extractor).map_err(|e| e.to_string())?;
    let g = if no_prune { full.clone() } else { prune_baseline(&full) };
    write(o, &save_triples(&g))?;
    let _ = writeln!(
        out,
        "{} services, {} concepts ({} kept), {} is-a edges",
        reg.len(),
        full.len(),
        g.len(),
        g.is_a_edges().count()
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn implement(
    p: &Path,
    r: &Path,
    g: &Path,
    o: &Path,
    report: Option<&Path>,
    config: Option<&Path>,
    memo_path: Option<&Path>,
    lexicon: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let cfg = load_config(config)?;
    let design = parse_design(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
    let (reg, _) = load_registry(r)?;
    let graph = load_ontology(g)?;
    staleness_warning(&reg, &graph, err);
    let mut memo = match memo_path {
        Some(m) if m.exists() => ProcessMemo::parse(&read(m)?).map_err(|e| format!("{}: {e}", m.display()))?,
        _ => ProcessMemo::new(),
    };
    let snapshot = reg.snapshot();
    let orch =
        Orchestrator::with_lexicon(&snapshot, &graph, &cfg, load_lexicon(lexicon)?).map_err(|e| e.to_string())?;
    let (bound, rep) = orch.implement(&design, &mut memo).map_err(|e| e.to_string())?;
    write(o, &emit_implemented(&bound))?;
    if let Some(path) = report {
        write(path, &rep.to_json())?;
    }
    if let Some(m) = memo_path {
        write(m, &memo.save())?;
    }
    let c = rep.counters;
    let _ = writeln!(out, "{} tasks: {} matched, {} composed, {} unresolved", c.tasks, c.matched, c.composed, c.failed);
    Ok(if rep.all_bound() { 0 } else { 2 })
}

fn ingest_log(r: &Path, l: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let (reg, paths) = load_registry(r)?;
    let (updated, warnings) = reg.ingest_qos_log(&read(l)?).map_err(|e| format!("{}: {e}", l.display()))?;
    for w in &warnings {
        let _ = writeln!(err, "warning: {}: {w}", l.display());
    }
    let by_file: Vec<(PathBuf, String)> = paths
        .iter()
        .map(|p| Ok((p.clone(), crate::registry::parse_descriptor(&read(p)?)?.id)))
        .collect::<CliResult<_>>()?;
    for (path, id) in by_file {
        let rec = updated.get(&id).expect("same ids after ingest");
        if Some(rec) != reg.get(&id) {
            write(&path, &emit_descriptor(rec))?;
        }
    }
    let _ = writeln!(out, "registry version {} -> {}", reg.version(), updated.version());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn explain(
    p: &Path,
    r: &Path,
    g: &Path,
    task: &str,
    service: Option<&str>,
    config: Option<&Path>,
    lexicon: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let cfg = load_config(config)?;
    let design = parse_design(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
    let node = design
        .tasks()
        .find(|t| t.id == task)
        .ok_or_else(|| format!("{}: no task `{task}`", p.display()))?;
    let (reg, _) = load_registry(r)?;
    let graph = load_ontology(g)?;
    staleness_warning(&reg, &graph, err);
    let snapshot = reg.snapshot();
    let orch =
        Orchestrator::with_lexicon(&snapshot, &graph, &cfg, load_lexicon(lexicon)?).map_err(|e| e.to_string())?;
    let k = orch.task_keywords(node);
    let _ = writeln!(out, "task {task}");
    let _ = writeln!(out, "verbs: {}", k.verbs.iter().cloned().collect::<Vec<_>>().join(", "));
    let _ = writeln!(out, "noun phrases: {}", k.noun_phrases.iter().cloned().collect::<Vec<_>>().join(", "));
    let cands = match_task(&k, &graph, &snapshot, &cfg.matching, cfg.execution);
    let mut ids: Vec<String> = cands.iter().map(|c| c.service_id.clone()).collect();
    if let Some(s) = service {
        if !ids.iter().any(|i| i == s) {
            ids.push(s.to_string());
        }
    }
    if cands.is_empty() {
        let _ = writeln!(out, "no candidates at theta {}; composition would be attempted", cfg.matching.theta);
    }
    for id in ids {
        let trace = explain_match(&k, &graph, &snapshot, &id, &cfg.matching).map_err(|e| e.to_string())?;
        let _ = write!(out, "{trace}");
    }
    Ok(0)
}

/// Runs the CLI and returns the process exit code.
///
/// 0 when everything succeeded, 2 when `implement` left some task
/// unresolved, 1 on usage or hard errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::BuildOntology { r, o, no_prune, config, lexicon } => {
            build_ontology(&r, &o, no_prune, config.as_deref(), lexicon.as_deref(), out)
        }
        Command::Implement { p, r, g, o, report, config, memo, lexicon } => implement(
            &p,
            &r,
            &g,
            &o,
            report.as_deref(),
            config.as_deref(),
            memo.as_deref(),
            lexicon.as_deref(),
            out,
            err,
        ),
        Command::IngestLog { r, l } => ingest_log(&r, &l, out, err),
        Command::Explain { p, r, g, task, service, config, lexicon } => explain(
            &p,
            &r,
            &g,
            &task,
            service.as_deref(),
            config.as_deref(),
            lexicon.as_deref(),
            out,
            err,
        ),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        1
    })
}
