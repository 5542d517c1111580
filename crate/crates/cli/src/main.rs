use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chtnr::bench::{
    gen_random_queries, run_benchmark_sharded, run_rank_benchmark, run_target_benchmark, write_histogram_csv,
    write_index_stats_csv, write_query_stats_csv, write_rank_csv, write_target_csv, IndexStats, QueryStats,
    TimingSummary,
};
use chtnr::ch::{build_hierarchy, ChIndex, ChParams};
use chtnr::graph::{is_strongly_connected, parse_dimacs};
use chtnr::tnr::{build_tnr_from_ch, RenumberStrategy, TnrIndex, TnrParams, TnrQuery};
use chtnr::{Graph, NodeId, INFINITY};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chtnr", version, about = "Contraction hierarchies and transit node routing")]
struct Cli {
    /// Worker threads for preprocessing and sharded benchmarks (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a DIMACS graph to the binary format (or back with --dimacs).
    Convert {
        input: PathBuf,
        output: PathBuf,
        /// Write DIMACS text instead of binary.
        #[arg(long)]
        dimacs: bool,
    },
    /// Build a contraction hierarchy.
    ChBuild {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Build a transit node routing index.
    TnrBuild {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Number of transit nodes.
        #[arg(long)]
        k: usize,
        /// Stall-on-demand depth of the access-node searches.
        #[arg(long, default_value_t = 1)]
        stall_hops: u32,
        /// dfs-increasing, dfs-decreasing or input-level.
        #[arg(long, default_value = "dfs-increasing")]
        renumber: RenumberStrategy,
        /// Reuse a hierarchy built with `ch-build` for this graph.
        #[arg(long)]
        ch: Option<PathBuf>,
    },
    /// Answer one query (input ids).
    Query { index: PathBuf, s: NodeId, t: NodeId },
    /// Random-pair query benchmark.
    Bench {
        index: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        queries: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Graph used for verification.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Check every answer against Dijkstra (needs --graph).
        #[arg(long, requires = "graph")]
        verify: bool,
        #[arg(long, default_value_t = 1000)]
        warmup: usize,
        /// Split the queries over this many workers; 1 is the reference mode.
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dijkstra-rank benchmark: local share per rank bucket.
    RankBench {
        index: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1000)]
        sources: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Many-to-one benchmark towards target `t`.
    TargetBench {
        index: PathBuf,
        t: NodeId,
        #[arg(long)]
        graph: PathBuf,
        /// Number of random sources; 0 queries every node.
        #[arg(long, default_value_t = 0)]
        sources: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Index size statistics.
    Stats {
        index: PathBuf,
        /// Also recompute raw search spaces.
        #[arg(long)]
        search_spaces: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        histogram_csv: Option<PathBuf>,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("cannot open {}", path.display()))?,
    ))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    ))
}

/// Reads a binary graph or, failing the magic check, DIMACS text.
fn read_graph(path: &Path) -> Result<Graph> {
    let mut head = [0u8; 8];
    let n = open(path)?.read(&mut head)?;
    let g = if n == 8 && &head == b"CHTNRGR\0" {
        Graph::read_binary(&mut open(path)?)?
    } else {
        parse_dimacs(open(path)?)?
    };
    log::info!("{}: {} nodes, {} arcs", path.display(), g.node_count(), g.arc_count());
    Ok(g)
}

fn read_index(path: &Path) -> Result<TnrIndex> {
    let start = Instant::now();
    let idx = TnrIndex::read_binary(&mut open(path)?).with_context(|| format!("reading {}", path.display()))?;
    log::info!("loaded index in {:.2?}", start.elapsed());
    Ok(idx)
}

fn write_csv(path: Option<&PathBuf>, f: impl FnOnce(BufWriter<File>) -> chtnr::Result<()>) -> Result<()> {
    if let Some(p) = path {
        f(create(p)?)?;
    }
    Ok(())
}

fn timing_line(name: &str, t: &TimingSummary) -> String {
    format!(
        "{name:<8} {:>10} {:>12.1} {:>10} {:>10}",
        t.count, t.mean_ns, t.p50_ns, t.p99_ns
    )
}

fn print_query_stats(s: &QueryStats) {
    println!("queries            {}", s.total);
    println!("table              {}", s.table);
    println!("local              {} ({:.2}%)", s.local, 100.0 * s.local_fraction());
    println!(
        "false positives    {} ({:.2}%)",
        s.false_positives,
        100.0 * s.false_positive_fraction()
    );
    println!("unreachable        {}", s.unreachable);
    println!("interval skips     {}", s.interval_short_circuits);
    println!("table lookups      {}", s.table_lookups);
    println!("verified           {}", s.verified);
    println!(
        "{:<8} {:>10} {:>12} {:>10} {:>10}",
        "class", "timed", "mean_ns", "p50_ns", "p99_ns"
    );
    println!("{}", timing_line("table", &s.table_timing));
    println!("{}", timing_line("local", &s.local_timing));
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Convert { input, output, dimacs } => {
            let g = read_graph(&input)?;
            let mut w = create(&output)?;
            if dimacs {
                g.write_dimacs(&mut w)?;
            } else {
                g.write_binary(&mut w)?;
            }
            w.flush()?;
        }
        Command::ChBuild { graph, output } => {
            let g = read_graph(&graph)?;
            let start = Instant::now();
            let ch = build_hierarchy(&g, &ChParams::default(), None)?;
            println!(
                "hierarchy: {} up arcs, {} down arcs, {} shortcuts, {:.2?}",
                ch.up().arc_count(),
                ch.down().arc_count(),
                ch.up().shortcut_count() + ch.down().shortcut_count(),
                start.elapsed()
            );
            let mut w = create(&output)?;
            ch.write_binary(&mut w)?;
            w.flush()?;
        }
        Command::TnrBuild {
            graph,
            output,
            k,
            stall_hops,
            renumber,
            ch,
        } => {
            let g = read_graph(&graph)?;
            if !is_strongly_connected(&g) {
                log::warn!("graph is not strongly connected; unreachable pairs answer {INFINITY}");
            }
            let params = TnrParams {
                k,
                stall_hops,
                renumber,
                ch: ChParams::default(),
            };
            let start = Instant::now();
            let hierarchy = match ch {
                Some(p) => {
                    let h = ChIndex::read_binary(&mut open(&p)?)?;
                    if h.node_count() != g.node_count() {
                        bail!("hierarchy has {} nodes, graph has {}", h.node_count(), g.node_count());
                    }
                    h
                }
                None => build_hierarchy(&g, &params.ch, None)?,
            };
            let idx = build_tnr_from_ch(&g, hierarchy, &params)?;
            println!(
                "index: {} transit nodes, {} access entries, {} representative entries, {:.1} bytes/node, {:.2?}",
                idx.transit_count(),
                idx.access_entry_count(),
                idx.rep_entry_count(),
                idx.memory().total() as f64 / idx.node_count().max(1) as f64,
                start.elapsed()
            );
            let mut w = create(&output)?;
            idx.write_binary(&mut w)?;
            w.flush()?;
        }
        Command::Query { index, s, t } => {
            let idx = read_index(&index)?;
            let mut q = TnrQuery::new(&idx);
            let r = q.query(s, t)?;
            let d = if r.distance == INFINITY {
                "unreachable".to_string()
            } else {
                r.distance.to_string()
            };
            println!("{d} ({:?}, {} table lookups)", r.kind, r.counters.table_lookups);
        }
        Command::Bench {
            index,
            queries,
            seed,
            graph,
            verify,
            warmup,
            shards,
            csv,
        } => {
            let idx = read_index(&index)?;
            let g = match &graph {
                Some(p) => Some(read_graph(p)?),
                None => None,
            };
            let qs = gen_random_queries(queries, seed, idx.node_count());
            let check = if verify { g.as_ref() } else { None };
            let stats = run_benchmark_sharded(&idx, &qs, check, warmup.min(qs.len()), shards)?;
            print_query_stats(&stats);
            write_csv(csv.as_ref(), |w| write_query_stats_csv(w, &stats))?;
        }
        Command::RankBench {
            index,
            graph,
            sources,
            seed,
            verify,
            csv,
        } => {
            let idx = read_index(&index)?;
            let g = read_graph(&graph)?;
            let buckets = run_rank_benchmark(&idx, &g, sources, seed, verify)?;
            println!(
                "{:>4} {:>8} {:>8} {:>10} {:>12}",
                "rank", "queries", "local", "local_%", "mean_ns"
            );
            for b in &buckets {
                println!(
                    "{:>4} {:>8} {:>8} {:>10.2} {:>12.1}",
                    b.exponent,
                    b.queries,
                    b.local,
                    100.0 * b.local_fraction(),
                    b.timing.mean_ns
                );
            }
            write_csv(csv.as_ref(), |w| write_rank_csv(w, &buckets))?;
        }
        Command::TargetBench {
            index,
            t,
            graph,
            sources,
            seed,
            verify,
            csv,
        } => {
            let idx = read_index(&index)?;
            let g = read_graph(&graph)?;
            let srcs: Vec<NodeId> = if sources == 0 {
                (0..g.node_count() as NodeId).collect()
            } else {
                gen_random_queries(sources, seed, g.node_count())
                    .into_iter()
                    .map(|(s, _)| s)
                    .collect()
            };
            let s = run_target_benchmark(&idx, &g, t, &srcs, verify)?;
            println!("target             {}", s.target);
            println!("sources            {}", s.sources);
            println!("local entries      {}", s.local_entries);
            println!("unreachable        {}", s.unreachable);
            println!("reads per source   {:.2} (max {})", s.mean_reads, s.max_reads);
            println!("verified           {}", s.verified);
            println!("build              {} ns", s.build_ns);
            println!(
                "query              {:.1} ns mean, {} ns p99",
                s.timing.mean_ns, s.timing.p99_ns
            );
            write_csv(csv.as_ref(), |w| write_target_csv(w, &s))?;
        }
        Command::Stats {
            index,
            search_spaces,
            csv,
            histogram_csv,
        } => {
            let idx = read_index(&index)?;
            let s = IndexStats::collect(&idx, search_spaces);
            println!("nodes              {}", s.nodes);
            println!("transit            {}", s.transit);
            println!("hierarchy arcs     {} ({} shortcuts)", s.ch_arcs, s.shortcuts);
            println!("access up/down     {:.2} / {:.2}", s.avg_access_up, s.avg_access_down);
            println!("representatives    {:.2}", s.avg_reps);
            if search_spaces {
                println!("search space       {:.2}", s.avg_search_space);
            }
            for (name, b) in [
                ("hierarchy", s.bytes_ch),
                ("table", s.bytes_table),
                ("access", s.bytes_access),
                ("locality", s.bytes_locality),
            ] {
                println!("bytes/node {name:<9} {:.2}", s.bytes_per_node(b));
            }
            write_csv(csv.as_ref(), |w| write_index_stats_csv(w, &s))?;
            write_csv(histogram_csv.as_ref(), |w| write_histogram_csv(w, &s))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        log::warn!("thread pool: {e}");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
