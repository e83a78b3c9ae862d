//! Command-line driver: ingest streams, query walks, run verification
//! suites and generate test streams.

pub mod state;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use streamwalk::oracle::{
    gadget_directed, gadget_undirected, random_multigraph, random_simple_graph, random_turnstile_stream, shuffled,
    Planted,
};
use streamwalk::rng::query_rng;
use streamwalk::stream::{write_stream, UpdateReader};
use streamwalk::verify::{CheckRecord, Suite};
use streamwalk::{Algorithm, Ingestor, Mode, Model, Update, VertexId, WalkerConfig};

#[derive(Debug, Parser)]
#[command(name = "streamwalk", version, about = "Random walks from single-pass graph-stream sketches")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read a stream once and save the frozen sketch.
    Ingest(IngestArgs),
    /// Simulate walks from a saved sketch.
    Walk(WalkArgs),
    /// Run a verification suite and print one JSON record per check.
    Verify(VerifyArgs),
    /// Write a generated stream.
    Gen(GenArgs),
    /// Print a saved sketch as JSON.
    Dump(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Directed,
    Undirected,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Directed => Mode::Directed,
            ModeArg::Undirected => Mode::Undirected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Insertion,
    Turnstile,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Insertion => Model::Insertion,
            ModelArg::Turnstile => Model::Turnstile,
        }
    }
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "insertion")]
    pub model: ModelArg,
    /// wr, wor, undirected-sketch, turnstile-directed or turnstile-undirected;
    /// defaults to the walker for the mode and model.
    #[arg(long, value_parser = |s: &str| s.parse::<Algorithm>())]
    pub algo: Option<Algorithm>,
    /// Walk length.
    #[arg(long, default_value_t = 4)]
    pub t: u64,
    /// Simulation error budget of the undirected and turnstile walkers.
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of vertices; ids are `0..n`.
    #[arg(long)]
    pub n: usize,
    /// Stream file; standard input when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Where to write the sketch state.
    #[arg(long)]
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub start: u32,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Master seed for per-query randomness; defaults to the build seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = |s: &str| s.parse::<Suite>())]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random instances per check family.
    #[arg(long)]
    pub instances: Option<usize>,
    /// Monte-Carlo queries per instance.
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    GadgetDirected,
    GadgetUndirected,
    RandomSimple,
    RandomMulti,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Orientation of the random kinds; gadgets fix their own.
    #[arg(long, value_enum, default_value = "undirected")]
    pub mode: ModeArg,
    /// With `turnstile`, the graph is interleaved with `m` cancelling
    /// insert/delete pairs.
    #[arg(long, value_enum, default_value = "insertion")]
    pub model: ModelArg,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 8)]
    pub m: usize,
    #[arg(long, default_value_t = 16)]
    pub t: u64,
    #[arg(long, default_value_t = 1)]
    pub groups: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    #[arg(long)]
    pub state: PathBuf,
}

fn output(
    path: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

/// Runs a command, writing its output to `stdout`. Returns `false` when a
/// verification suite reports a failed check.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Ingest(a) => ingest(a, stdout).map(|_| true),
        Command::Walk(a) => walk(a, stdout).map(|_| true),
        Command::Verify(a) => verify(a, stdout),
        Command::Gen(a) => generate(a, stdout).map(|_| true),
        Command::Dump(a) => {
            let w = state::load(&a.state)?;
            serde_json::to_writer_pretty(&mut *stdout, &w)?;
            writeln!(stdout)?;
            Ok(true)
        }
    }
}

fn ingest(a: IngestArgs, stdout: &mut dyn Write) -> Result<()> {
    let (mode, model) = (Mode::from(a.mode), Model::from(a.model));
    let algorithm = a.algo.unwrap_or_else(|| Algorithm::for_stream(mode, model));
    algorithm.check(mode, model)?;
    let mut ing = Ingestor::new(WalkerConfig::new(algorithm, a.n, a.t, a.epsilon, a.seed))?;
    let reader: Box<dyn BufRead> = match &a.input {
        Some(p) => Box::new(BufReader::new(File::open(p).with_context(|| format!("opening {}", p.display()))?)),
        None => Box::new(BufReader::new(io::stdin())),
    };
    for update in UpdateReader::new(reader, mode, model) {
        ing.ingest(update?)?;
    }
    let walker = ing.finish();
    state::save(&a.state, &walker)?;
    let s = walker.space();
    writeln!(stdout, "algorithm: {algorithm}")?;
    writeln!(stdout, "vertices: {}", walker.n())?;
    writeln!(stdout, "updates: {}", walker.stats.updates)?;
    writeln!(stdout, "forwarded_arcs: {}", walker.stats.forwarded)?;
    writeln!(stdout, "important_entries: {}", s.important_entries)?;
    writeln!(stdout, "important_multiplicity: {}", s.important_multiplicity)?;
    writeln!(stdout, "sample_slots: {}", s.sample_slots)?;
    writeln!(stdout, "samples_held: {}", s.samples_held)?;
    writeln!(stdout, "sketch_counters: {}", s.sketch_counters)?;
    writeln!(stdout, "stored_arcs: {}", s.stored_arcs())?;
    Ok(())
}

fn walk(a: WalkArgs, stdout: &mut dyn Write) -> Result<()> {
    let walker = state::load(&a.state)?;
    if a.start as usize >= walker.n() {
        bail!("start vertex {} out of range for a graph with {} vertices", a.start, walker.n());
    }
    let master = a.seed.unwrap_or(walker.config.seed);
    output(&a.out, stdout, |w| {
        for i in 0..a.count {
            writeln!(w, "{}", walker.walk(VertexId(a.start), &mut query_rng(master, i)))?;
        }
        Ok(())
    })
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<bool> {
    let mut budget = a.suite.default_budget(a.seed);
    budget.instances = a.instances.unwrap_or(budget.instances);
    budget.queries = a.count.unwrap_or(budget.queries);
    let records = a.suite.run(&budget).unwrap_or_else(|e| {
        vec![CheckRecord { name: format!("{}/error: {e}", a.suite), value: 0.0, bound: 0.0, pass: false }]
    });
    output(&a.out, stdout, |w| {
        for r in &records {
            serde_json::to_writer(&mut *w, r)?;
            writeln!(w)?;
        }
        Ok(())
    })?;
    Ok(records.iter().all(|r| r.pass))
}

fn generate(a: GenArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = Model::from(a.model);
    let (header, graph, stream): (String, _, Vec<Update>) = match a.kind {
        GenKind::GadgetUndirected => {
            let g = gadget_undirected(a.t, a.groups, Planted::Random, a.seed)?;
            let header = format!(
                "undirected gadget t={} groups={} vertices={} v0={} query_group={}",
                a.t,
                a.groups,
                g.graph.n(),
                g.v0,
                g.query_group
            );
            (header, g.graph, g.updates)
        }
        GenKind::GadgetDirected => {
            let g = gadget_directed(a.n, a.t as usize, a.seed)?;
            let header =
                format!("directed gadget n={} t={} vertices={} v0={} query={}", a.n, a.t, g.graph.n(), g.v0, g.query);
            (header, g.graph, g.updates)
        }
        GenKind::RandomSimple | GenKind::RandomMulti => {
            let mode = Mode::from(a.mode);
            if a.n < 2 {
                bail!("random graphs need n >= 2");
            }
            let g = if a.kind == GenKind::RandomSimple {
                random_simple_graph(a.n, a.m, mode, a.seed)?
            } else {
                random_multigraph(a.n, a.m, mode, a.seed)
            };
            let header = format!("{:?} random graph n={} m={} seed={}", mode, a.n, a.m, a.seed).to_lowercase();
            let ups = shuffled(&g.to_updates(), a.seed);
            (header, g, ups)
        }
    };
    let stream = match model {
        Model::Insertion => stream,
        Model::Turnstile => random_turnstile_stream(&graph, a.m, a.seed),
    };
    output(&a.out, stdout, |w| {
        writeln!(w, "# {header}")?;
        write_stream(&mut *w, &stream, model)?;
        Ok(())
    })
}
