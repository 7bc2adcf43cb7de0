use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semspan::config::{Overrides, PipelineConfig};
use semspan::core::corpus::{generate_synthetic, summarize, SyntheticSpec};
use semspan::core::simgraph::tau_sweep;
use semspan::core::text::tfidf;
use semspan::core::topics::{fit_nmf, perplexity, NmfConfig};
use semspan::formats::graph::{graph_dot, graph_json, read_graph_json};
use semspan::formats::sparse::write_sparse;
use semspan::formats::summary::{summary_json, summary_table};
use semspan::formats::vocab::write_vocabulary;
use semspan::formats::{csv_number, to_json_string};
use semspan::hash::tokenizer_hash;
use semspan::jsonl::{load_jsonl, write_jsonl};
use semspan::pipeline::{self, Which};
use semspan::{write_string, Error, Result};

#[derive(Parser)]
#[command(name = "semspan", version, about = "Compare communities by the semantic spans of their posts")]
struct Cli {
    /// More log output (-v info, -vv debug). RUST_LOG takes precedence.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a JSONL corpus against the submission schema.
    Validate {
        input: PathBuf,
        /// Stop at the first bad line.
        #[arg(long)]
        strict: bool,
    },
    /// Per-community post and token statistics.
    Summarize {
        input: Option<PathBuf>,
        #[arg(short, long)]
        config: Option<PathBuf>,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Write to a file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with known structure.
    Synth {
        /// Corpus path; ground truth goes to `<out>.truth.json`.
        #[arg(short, long)]
        out: PathBuf,
        /// Generator spec as JSON. Defaults to the four-community example.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit a topic model and export vocabulary, counts and factors.
    FitTopics {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "lda")]
        method: Method,
        /// NMF iterations.
        #[arg(long, default_value_t = 200)]
        iterations: usize,
    },
    /// Community centroid similarity graph.
    Exp1 {
        #[command(flatten)]
        common: Common,
    },
    /// Semantic spans, their similarity graph and labeled sub-graphs.
    Exp2 {
        #[command(flatten)]
        common: Common,
    },
    /// Convert a graph.json to Graphviz, optionally re-cut at another threshold.
    ExportGraph {
        graph: PathBuf,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Component counts of a graph.json over a range of thresholds.
    TauSweep {
        graph: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        from: f64,
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Lda,
    Nmf,
}

#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Corpus path; overrides the config.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of topics.
    #[arg(long)]
    k: Option<usize>,
    /// Graph threshold of this command (exp1: centroid graph, exp2: all-span graph).
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    top_words: Option<usize>,
    /// Refit the topic model even if a cached one matches.
    #[arg(long)]
    no_cache: bool,
}

impl Common {
    fn config(&self, tau_target: &str) -> Result<PipelineConfig> {
        let mut config = match (&self.config, &self.input) {
            (Some(path), _) => PipelineConfig::load(path)?,
            (None, Some(input)) => PipelineConfig::new(input),
            (None, None) => return Err(Error::Config("give --config or --input".into())),
        };
        let overrides = Overrides {
            input: self.input.clone(),
            output: self.output.clone(),
            seed: self.seed,
            k: self.k,
            tau: self.tau,
            top_words: self.top_words,
        };
        config.apply(&overrides, tau_target)?;
        Ok(config)
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_string(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn validate(input: &Path, strict: bool) -> Result<()> {
    let loaded = load_jsonl(input, strict)?;
    let corpus = &loaded.corpus;
    for line in &loaded.skipped {
        eprintln!("{}:{}: {}", input.display(), line.line, line.reason);
    }
    println!("{} submissions in {} communities", corpus.len(), corpus.communities().len());
    for c in corpus.communities() {
        println!("  {c}\t{}", corpus.documents_of(c).count());
    }
    if loaded.skip_count() > 0 {
        return Err(Error::Data(format!("{} invalid line(s)", loaded.skip_count())));
    }
    Ok(())
}

fn summarize_cmd(input: Option<PathBuf>, config: Option<PathBuf>, json: bool, output: Option<PathBuf>) -> Result<()> {
    let config = match (config, input) {
        (Some(c), input) => {
            let mut cfg = PipelineConfig::load(&c)?;
            if let Some(i) = input {
                cfg.input = i;
            }
            cfg
        }
        (None, Some(i)) => PipelineConfig::new(i),
        (None, None) => return Err(Error::Config("give an input file or --config".into())),
    };
    let loaded = load_jsonl(&config.input, config.strict)?;
    let rows = summarize(&loaded.corpus, &config.tokenizer_config()?)?;
    let text = if json { summary_json(&rows) } else { summary_table(&rows) };
    emit(output.as_deref(), &text)
}

fn synth(out: &Path, spec: Option<PathBuf>, seed: Option<u64>) -> Result<()> {
    let mut spec: SyntheticSpec = match spec {
        Some(p) => serde_json::from_str(&semspan::read_string(&p)?).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?,
        None => pipeline::example_spec(0),
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    let (corpus, truth) = generate_synthetic(&spec)?;
    write_jsonl(&corpus, out)?;
    let mut truth_path = out.as_os_str().to_owned();
    truth_path.push(".truth.json");
    write_string(Path::new(&truth_path), &to_json_string(&truth))?;
    log::info!("wrote {} submissions to {}", corpus.len(), out.display());
    Ok(())
}

fn fit_topics(common: &Common, method: Method, iterations: usize) -> Result<()> {
    let config = common.config("all")?;
    let prepared = pipeline::prepare(&config)?;
    let dir = config.output.join("topics");
    let thash = tokenizer_hash(&prepared.tokenizer);
    write_vocabulary(&prepared.vocab, &dir.join("vocab.json"))?;
    write_sparse(&prepared.counts.counts, &prepared.counts.rows, &thash, &dir.join("counts.mtx"))?;
    match method {
        Method::Lda => {
            let space = pipeline::topic_space(&config, &prepared, !common.no_cache)?;
            let vocab_hash = prepared.vocabulary_hash();
            semspan::formats::model::write_model(&space.model, &vocab_hash, &dir.join("lda.json"))?;
            let theta = semspan::core::CsrMatrix::from_dense(&space.theta.theta);
            write_sparse(&theta, &space.theta.rows, &thash, &dir.join("theta.mtx"))?;
            let p = perplexity(&space.model, &space.theta, &prepared.counts)?;
            println!("perplexity {}", csv_number(p));
        }
        Method::Nmf => {
            let weights = tfidf(&prepared.counts)?;
            let nmf = fit_nmf(
                &weights.weights,
                &NmfConfig {
                    k: config.lda.k,
                    iterations,
                    seed: config.seed,
                },
            )?;
            write_string(&dir.join("nmf.json"), &to_json_string(&nmf))?;
            if let Some(last) = nmf.objective.last() {
                println!("objective {}", csv_number(*last));
            }
        }
    }
    Ok(())
}

fn experiment(common: &Common, which: Which) -> Result<()> {
    let config = common.config(if which == Which::Exp1 { "exp1" } else { "all" })?;
    let exp = if common.no_cache {
        let prepared = pipeline::prepare(&config)?;
        let space = pipeline::topic_space(&config, &prepared, false)?;
        let exp = match which {
            Which::Exp1 => pipeline::exp1(&config, &prepared, &space)?,
            Which::Exp2 => pipeline::exp2(&config, &prepared, &space)?,
        };
        pipeline::write_experiment(&exp, &prepared, &config.output.join(which.name()))?;
        exp
    } else {
        pipeline::run(&config, which)?
    };
    print!("{}", exp.report.to_text());
    Ok(())
}

fn export_graph(path: &Path, tau: Option<f64>, output: Option<PathBuf>) -> Result<()> {
    let (mut graph, mut subs) = read_graph_json(path)?;
    if let Some(t) = tau {
        graph = graph.with_threshold(t).map_err(|e| Error::Config(e.to_string()))?;
        subs = semspan::core::simgraph::connected_components(&graph);
    }
    match output {
        Some(p) if p.extension().is_some_and(|e| e == "json") => write_string(&p, &graph_json(&graph, &subs)),
        other => emit(other.as_deref(), &graph_dot(&graph, &subs)),
    }
}

fn sweep(path: &Path, from: f64, to: f64, step: f64, output: Option<PathBuf>) -> Result<()> {
    if !(step > 0.0) || !(from <= to) {
        return Err(Error::Config("need --step > 0 and --from <= --to".into()));
    }
    let (graph, _) = read_graph_json(path)?;
    let n = ((to - from) / step + 1e-9).floor() as usize;
    let taus: Vec<f64> = (0..=n).map(|i| from + i as f64 * step).collect();
    let rows = tau_sweep(&graph, &taus).map_err(|e| Error::Config(e.to_string()))?;
    let mut out = String::from("tau,edges,components,cliques,partials,singletons\n");
    for r in rows {
        out.push_str(&format!("{:.6},{},{},{},{},{}\n", r.tau, r.edges, r.components, r.cliques, r.partials, r.singletons));
    }
    emit(output.as_deref(), &out)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { input, strict } => validate(&input, strict),
        Command::Summarize { input, config, json, output } => summarize_cmd(input, config, json, output),
        Command::Synth { out, spec, seed } => synth(&out, spec, seed),
        Command::FitTopics { common, method, iterations } => fit_topics(&common, method, iterations),
        Command::Exp1 { common } => experiment(&common, Which::Exp1),
        Command::Exp2 { common } => experiment(&common, Which::Exp2),
        Command::ExportGraph { graph, tau, output } => export_graph(&graph, tau, output),
        Command::TauSweep { graph, from, to, step, output } => sweep(&graph, from, to, step, output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
