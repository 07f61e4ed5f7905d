//! Command-line front end: generate instances, build either
//! representation, answer queries, verify against the brute-force
//! oracle, and benchmark space and operation counts.
//!
//! Exit codes: 0 ok, 1 usage, 2 parse/input, 3 verification mismatch.

use clap::{Parser, Subcommand, ValueEnum};
use pathgraph::blob::{self, LoadedGraph};
use pathgraph::instance::InstanceFile;
use pathgraph::oracle::{self, Rng};
use pathgraph::treeprep::{prepare, PathSet};
use pathgraph::{Error, LevelStructure, SuccinctPathGraph};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "pathgraph",
    version,
    about = "Compressed path graph queries over a clique tree plus paths"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Succinct,
    Level,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random valid instance file.
    Gen {
        /// Tree node count.
        m: u32,
        /// Path count (at least the node count).
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a queryable representation from an instance file.
    Build {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a query against a built representation.
    ///
    /// QUERY is one of: `adj I J`, `nbr I`, `deg I` with 1-based input
    /// path indices.
    Query { blob: PathBuf, query: Vec<String> },
    /// Check both representations against the brute-force oracle.
    Verify {
        /// Instance file to verify; omit to only verify generated ones.
        instance: Option<PathBuf>,
        /// Number of generated instances to verify.
        #[arg(long, default_value_t = 0)]
        seeds: u64,
        /// Largest generated path count.
        #[arg(long, default_value_t = 200)]
        max_n: u32,
        /// Adjacency pairs checked per structure; all pairs when the
        /// square fits, sampled otherwise.
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
    },
    /// Space and operation-count table across instance sizes.
    Bench {
        /// Comma-separated path counts.
        #[arg(long, default_value = "1024,4096,16384,65536")]
        sizes: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Instrumented queries per size.
        #[arg(long, default_value_t = 2000)]
        trials: u64,
    },
}

fn main() {
    // Die quietly when stdout closes mid-stream (e.g. piped into head),
    // like any other line-oriented tool.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are normal exits, not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> pathgraph::Result<i32> {
    match cli.cmd {
        Cmd::Gen { m, n, seed, out } => cmd_gen(m, n, seed, &out),
        Cmd::Build { input, mode, out } => cmd_build(&input, mode, &out),
        Cmd::Query { blob, query } => cmd_query(&blob, &query),
        Cmd::Verify {
            instance,
            seeds,
            max_n,
            trials,
        } => cmd_verify(instance.as_deref(), seeds, max_n, trials),
        Cmd::Bench {
            sizes,
            seed,
            mode,
            trials,
        } => cmd_bench(&sizes, seed, mode, trials),
    }
}

fn cmd_gen(m: u32, n: u32, seed: u64, out: &std::path::Path) -> pathgraph::Result<i32> {
    let inst = oracle::gen_instance(m, n, seed)?;
    InstanceFile::from_instance(&inst).write(out)?;
    let report = oracle::validate_instance(&inst.tree, &inst.paths);
    println!(
        "wrote {} ({m} nodes, {n} paths, seed {seed})",
        out.display()
    );
    if report.is_valid() {
        println!(
            "validity: ok (every node covered, every node a path meeting point, cliques maximal)"
        );
    } else {
        println!("validity: {} violations", report.violations.len());
        for v in &report.violations {
            println!("  {v}");
        }
    }
    Ok(0)
}

fn cmd_build(input: &std::path::Path, mode: Mode, out: &std::path::Path) -> pathgraph::Result<i32> {
    let file = InstanceFile::read(input)?;
    let pt = prepare(&file.tree)?;
    let ps = PathSet::from_original(&pt, &file.paths)?;
    let bytes = match mode {
        Mode::Succinct => {
            let g = SuccinctPathGraph::build(pt, &ps)?;
            print!("{}", g.space_report());
            blob::save_succinct(&g)
        }
        Mode::Level => {
            let g = LevelStructure::build(pt, &ps)?;
            print!("{}", g.space_report());
            blob::save_level(&g)
        }
    };
    std::fs::write(out, &bytes)?;
    println!("wrote {} ({} bytes)", out.display(), bytes.len());
    Ok(0)
}

fn cmd_query(blob_path: &std::path::Path, query: &[String]) -> pathgraph::Result<i32> {
    let g = blob::load_any(&std::fs::read(blob_path)?)?;
    let n = g.path_count();
    let index = |w: &str| -> Option<u32> { w.parse::<u32>().ok().filter(|&i| i >= 1 && i <= n) };
    let usage = |msg: &str| -> i32 {
        eprintln!("error: {msg} (paths are 1..={n})");
        1
    };
    match query {
        [op, a, b] if op == "adj" => match (index(a), index(b)) {
            (Some(i), Some(j)) => {
                println!("{}", g.adjacent_input(i, j));
                Ok(0)
            }
            _ => Ok(usage("adj needs two valid path indices")),
        },
        [op, a] if op == "nbr" => match index(a) {
            Some(i) => {
                let words: Vec<String> = g
                    .neighbours_input(i)
                    .iter()
                    .map(|q| q.to_string())
                    .collect();
                println!("{}", words.join(" "));
                Ok(0)
            }
            None => Ok(usage("nbr needs a valid path index")),
        },
        [op, a] if op == "deg" => match index(a) {
            Some(i) => {
                println!("{}", g.degree_input(i));
                Ok(0)
            }
            None => Ok(usage("deg needs a valid path index")),
        },
        _ => Ok(usage("expected `adj I J`, `nbr I` or `deg I`")),
    }
}

/// Both representations plus a reloaded copy of each must agree with
/// the oracle on every query; returns a mismatch description if not.
fn verify_instance(
    file: &InstanceFile,
    label: &str,
    trials: u64,
) -> pathgraph::Result<Option<String>> {
    let pt = prepare(&file.tree)?;
    let ps = PathSet::from_original(&pt, &file.paths)?;
    let succ = SuccinctPathGraph::build(pt.clone(), &ps)?;
    let level = LevelStructure::build(pt, &ps)?;
    let reloaded_s = blob::load_succinct(&blob::save_succinct(&succ))?;
    let reloaded_l = blob::load_level(&blob::save_level(&level))?;
    let oracle_graph = oracle::build_oracle(&file.tree, &file.paths);
    let n = file.paths.len() as u32;
    let graphs: [(&str, LoadedGraph); 4] = [
        ("succinct", LoadedGraph::Succinct(succ)),
        ("level", LoadedGraph::Level(level)),
        ("succinct+reload", LoadedGraph::Succinct(reloaded_s)),
        ("level+reload", LoadedGraph::Level(reloaded_l)),
    ];
    for (name, g) in &graphs {
        for i in 1..=n {
            let expect: Vec<u32> = oracle_graph.adj[i as usize - 1]
                .iter()
                .map(|&q| q + 1)
                .collect();
            let got = g.neighbours_input(i);
            if got != expect {
                return Ok(Some(format!(
                    "{label}: {name} neighbourhood({i}) = {got:?}, oracle says {expect:?}"
                )));
            }
            if g.degree_input(i) != expect.len() as u64 {
                return Ok(Some(format!(
                    "{label}: {name} degree({i}) = {}, oracle says {}",
                    g.degree_input(i),
                    expect.len()
                )));
            }
        }
        let check_pair = |i: u32, j: u32| -> Option<String> {
            let expect = i == j || oracle_graph.adjacent(i as usize - 1, j as usize - 1);
            if g.adjacent_input(i, j) != expect {
                Some(format!(
                    "{label}: {name} adjacency({i},{j}) = {}, oracle says {expect}",
                    !expect
                ))
            } else {
                None
            }
        };
        if u64::from(n) * u64::from(n) <= trials {
            for i in 1..=n {
                for j in 1..=n {
                    if let Some(err) = check_pair(i, j) {
                        return Ok(Some(err));
                    }
                }
            }
        } else {
            let mut rng = Rng::new(0xbadc0de ^ u64::from(n));
            for _ in 0..trials {
                if let Some(err) = check_pair(rng.below(n), rng.below(n)) {
                    return Ok(Some(err));
                }
            }
        }
    }
    Ok(None)
}

fn cmd_verify(
    instance: Option<&std::path::Path>,
    seeds: u64,
    max_n: u32,
    trials: u64,
) -> pathgraph::Result<i32> {
    let mut checked = 0u64;
    if let Some(path) = instance {
        let file = InstanceFile::read(path)?;
        if let Some(err) = verify_instance(&file, &path.display().to_string(), trials)? {
            println!("FAIL {err}");
            return Ok(3);
        }
        println!("PASS {} ({} paths)", path.display(), file.paths.len());
        checked += 1;
    }
    for seed in 0..seeds {
        let mut rng = Rng::new(seed.wrapping_mul(0x9e37_79b9).wrapping_add(7));
        let n = 2 + rng.below(max_n.max(3) - 2);
        let m = rng.below(n);
        let inst = oracle::gen_instance(m, n, seed)?;
        let file = InstanceFile::from_instance(&inst);
        let label = format!("seed {seed} (m={m}, n={n})");
        if let Some(err) = verify_instance(&file, &label, trials)? {
            println!("FAIL {err}");
            return Ok(3);
        }
        println!("PASS {label}");
        checked += 1;
    }
    if checked == 0 {
        eprintln!("error: nothing to verify; give an instance file or --seeds");
        return Ok(1);
    }
    println!("verified {checked} instance(s): all queries match the oracle");
    Ok(0)
}

fn cmd_bench(sizes: &str, seed: u64, mode: Option<Mode>, trials: u64) -> pathgraph::Result<i32> {
    let sizes: Vec<u32> = sizes
        .split(',')
        .map(|w| {
            w.trim()
                .parse::<u32>()
                .map_err(|_| Error::Invalid(format!("bad size '{w}'")))
        })
        .collect::<pathgraph::Result<_>>()?;
    let (do_succ, do_level) = match mode {
        None => (true, true),
        Some(Mode::Succinct) => (true, false),
        Some(Mode::Level) => (false, true),
    };
    if do_succ {
        println!("succinct: n, build ms, total bits, bits/(n log n), mean alpha checks/adj, mean rects/nbr, mean wt visits/deg");
        for &n in &sizes {
            let m = (n / 2).max(1);
            let inst = oracle::gen_instance(m, n, seed)?;
            let pt = prepare(&inst.tree)?;
            let ps = PathSet::from_original(&pt, &inst.paths)?;
            let t0 = Instant::now();
            let g = SuccinctPathGraph::build(pt, &ps)?;
            let build_ms = t0.elapsed().as_millis();
            let report = g.space_report();
            let mut rng = Rng::new(seed ^ 0x5eed);
            let (mut alpha, mut rects, mut visits) = (0u64, 0u64, 0u64);
            for _ in 0..trials {
                let i = u64::from(rng.below(n));
                let j = u64::from(rng.below(n));
                alpha += g.adjacency_instr(i, j).1.check_alpha_calls;
                rects += g.neighbourhood_instr(i).1.rectangles;
                visits += g.degree_counting(i).1.wt.partial_visits;
            }
            let t = trials.max(1) as f64;
            println!(
                "succinct, {n}, {build_ms}, {}, {:.3}, {:.1}, {:.1}, {:.1}",
                report.total_bits(),
                report.leading_ratio(),
                alpha as f64 / t,
                rects as f64 / t,
                visits as f64 / t
            );
        }
    }
    if do_level {
        println!("level: n, build ms, total bits, bits/(n log^2 n), mean ig probes/adj, mean reads/adj, mean touches per (d+1)");
        for &n in &sizes {
            let m = (n / 2).max(1);
            let inst = oracle::gen_instance(m, n, seed)?;
            let pt = prepare(&inst.tree)?;
            let ps = PathSet::from_original(&pt, &inst.paths)?;
            let t0 = Instant::now();
            let g = LevelStructure::build(pt, &ps)?;
            let build_ms = t0.elapsed().as_millis();
            let report = g.space_report();
            let mut rng = Rng::new(seed ^ 0x5eed);
            let (mut probes, mut reads, mut touch_ratio) = (0u64, 0u64, 0f64);
            let mut scratch = g.new_scratch();
            for _ in 0..trials {
                let i = u64::from(rng.below(n));
                let j = u64::from(rng.below(n));
                let (_, a) = g.adjacency_instr(i, j);
                probes += a.ig_probes;
                reads += a.array_reads;
                let (nbr, s) = g.neighbourhood_with(i, &mut scratch);
                touch_ratio += s.candidate_touches as f64 / (nbr.len() + 1) as f64;
            }
            let t = trials.max(1) as f64;
            println!(
                "level, {n}, {build_ms}, {}, {:.3}, {:.2}, {:.2}, {:.2}",
                report.total_bits(),
                report.ratio(),
                probes as f64 / t,
                reads as f64 / t,
                touch_ratio / t
            );
        }
    }
    Ok(0)
}
