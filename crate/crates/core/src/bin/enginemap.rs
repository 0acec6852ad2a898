use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use enginemap::config::CorpusConfig;
use enginemap::metrics::Averaging;
use enginemap::pipeline::{
    cmd_aggregate, cmd_analyse, cmd_scan, for_each_engine, AggregateSummary, AnalyseSummary,
    ScanSummary,
};
use enginemap::subsystem::suggest_mapping;
use enginemap::{Error, Result};

/// Include-graph extraction and subsystem coupling analysis for C/C++ engines.
#[derive(Parser)]
#[command(name = "enginemap", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Corpus configuration file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the configuration).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Number of engines processed concurrently.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Add a repository ad hoc, as `<name>=<root>`.
    #[arg(long = "repo", global = true, value_name = "NAME=ROOT")]
    add_repos: Vec<String>,

    /// Set a repository's mapping file, as `<name>=<mapping.csv>`.
    #[arg(long = "mapping", global = true, value_name = "NAME=CSV")]
    set_mappings: Vec<String>,

    /// Minimum engine count for a frequent coupling pair.
    #[arg(long, global = true)]
    pair_threshold: Option<usize>,

    /// Number of subsystems placed in the inner core.
    #[arg(long, global = true)]
    inner_core_size: Option<usize>,

    /// `present-only` or `zero-fill`.
    #[arg(long, global = true)]
    averaging: Option<String>,

    /// Leave ambiguous second-pass includes unresolved.
    #[arg(long, global = true)]
    strict_resolve: bool,

    /// Divide betweenness by (n-1)(n-2).
    #[arg(long, global = true)]
    normalize: bool,

    /// Keep unassigned files as an extra UNASSIGNED node.
    #[arg(long, global = true)]
    include_unassigned: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build include graphs and unresolved-include reports.
    Scan {
        /// Repositories to scan (default: all configured).
        repos: Vec<String>,
    },
    /// Build subsystem graphs and metrics.
    #[command(alias = "analyze")]
    Analyse {
        /// Repositories to analyse (default: all configured).
        repos: Vec<String>,
    },
    /// Aggregate analysed engines into heatmap, pairs and architecture.
    Aggregate,
    /// Propose an advisory mapping from folder names.
    SuggestMapping {
        repo: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Analyse every configured engine, then aggregate.
    All,
}

fn load_config(global: &GlobalArgs) -> Result<CorpusConfig> {
    let mut config = match &global.config {
        Some(path) => CorpusConfig::load(path)?,
        None => CorpusConfig::default(),
    };
    for repo in &global.add_repos {
        config.add_repo_arg(repo)?;
    }
    for mapping in &global.set_mappings {
        config.set_mapping_arg(mapping)?;
    }
    if let Some(out) = &global.out {
        config.output_dir = out.clone();
    }
    config.output_dir = std::path::absolute(&config.output_dir)
        .map_err(|e| Error::Config(format!("bad output directory: {e}")))?;
    let options = &mut config.options;
    if let Some(t) = global.pair_threshold {
        options.pair_threshold = t;
    }
    if let Some(k) = global.inner_core_size {
        options.inner_core_size = k;
    }
    if let Some(mode) = &global.averaging {
        options.averaging = mode.parse::<Averaging>()?;
    }
    options.strict_resolve |= global.strict_resolve;
    options.normalize_centrality |= global.normalize;
    options.include_unassigned |= global.include_unassigned;
    config.validate()?;
    Ok(config)
}

fn selected(config: &CorpusConfig, repos: &[String]) -> Result<Vec<String>> {
    let names = if repos.is_empty() {
        config.repo_names()
    } else {
        repos.to_vec()
    };
    if names.is_empty() {
        return Err(Error::Config("no repositories configured".to_string()));
    }
    Ok(names)
}

fn print_scan(s: &ScanSummary) {
    println!(
        "{}: {} files, {} edges (first-pass {}, second-pass {}, ambiguous {}, unresolved {})",
        s.engine,
        s.files,
        s.edges,
        s.counts.first_pass,
        s.counts.second_pass,
        s.counts.ambiguous,
        s.counts.unresolved
    );
    if s.diagnostics > 0 {
        eprintln!("warning: {}: {} unreadable files", s.engine, s.diagnostics);
    }
}

fn print_analyse(a: &AnalyseSummary) {
    print_scan(&a.scan);
    println!(
        "{}: {} subsystems, {} subsystem edges, mapping coverage {:.1}% ({} unassigned)",
        a.scan.engine,
        a.graph.nodes.len(),
        a.graph.edges.len(),
        a.coverage.coverage_percent(),
        a.coverage.unassigned
    );
    for w in &a.warnings {
        eprintln!("warning: {w}");
    }
}

fn print_aggregate(a: &AggregateSummary) {
    for name in &a.skipped {
        eprintln!("warning: {name}: no subsystem model found, skipped");
    }
    let r = &a.result;
    let join = |codes: &[enginemap::SubsystemCode]| {
        codes.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(" ")
    };
    println!("engines: {}", r.engines.join(" "));
    println!("frequent pairs: {}", r.pairs.len());
    println!("inner core: {}", join(&r.architecture.inner_core));
    println!("outer core: {}", join(&r.architecture.outer_core));
    println!("periphery: {}", join(&r.architecture.periphery));
}

fn run(cli: Cli) -> Result<()> {
    let config = load_config(&cli.global)?;
    let jobs = cli
        .global
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    match cli.command {
        Command::Scan { repos } => {
            let names = selected(&config, &repos)?;
            for s in for_each_engine(&config, &names, jobs, |r| cmd_scan(&config, &r.spec.name))? {
                print_scan(&s);
            }
        }
        Command::Analyse { repos } => {
            let names = selected(&config, &repos)?;
            for a in for_each_engine(&config, &names, jobs, |r| cmd_analyse(&config, &r.spec.name))? {
                print_analyse(&a);
            }
        }
        Command::Aggregate => print_aggregate(&cmd_aggregate(&config)?),
        Command::SuggestMapping { repo, output } => {
            let repo = config.repo(&repo)?;
            let suggestions = suggest_mapping(&repo.spec.absolute_root()?, &repo.spec.exclude_dirs)?;
            let mut text = String::from(
                "# advisory: guessed from folder names only; review every row\nfolder,subsystem\n",
            );
            for s in suggestions {
                text.push_str(&format!("{},{}\n", s.folder, s.code));
            }
            match output {
                Some(path) => enginemap::emit::write_text(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::All => {
            let summary = enginemap::pipeline::cmd_all(&config, jobs)?;
            for a in &summary.engines {
                print_analyse(a);
            }
            print_aggregate(&summary.aggregate);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(1),
    }
}
