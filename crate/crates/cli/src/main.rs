//! Command-line front end: orbit computation, closed-form prediction,
//! verification suites, sieving checks, toric promotion, lifted
//! trajectories, and SVG rendering.
//!
//! Exit codes: 0 success or verified, 1 verification mismatch, 2 usage or
//! input error, 3 capacity exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use toric_billiards::verify::{self, DEFAULT_SEED};
use toric_billiards::{
    dynamics, predictors, render, sieving, AffinePermutation, AffineState, BilliardsGraph,
    Error, Labeling, RenderOptions, State,
};

#[derive(Parser)]
#[command(
    name = "toric-billiards",
    version,
    about = "Toric promotion with reflections and refractions: orbits, predictors, sieving, lifts, diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Human-readable output instead of JSON.
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force orbit size of a state, or the full orbit decomposition of
    /// the state space when no state is given.
    Orbit {
        /// Graph JSON: {"n": int, "edges": [{"u", "v", "kind"}]}.
        #[arg(long)]
        graph: PathBuf,
        /// State JSON: {"labels": [...], "i": int, "eps": 1|-1}.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Worker threads for the decomposition; output is identical for
        /// any value.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Closed-form orbit size: the forest formula, or the cycle formula for
    /// even-refraction cycles; reports "no closed form" otherwise.
    Predict {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Toric promotion: the full promotion orbit of a labeling, or the
    /// labeling after --steps applications.
    Tpro {
        #[arg(long)]
        graph: PathBuf,
        /// Labeling JSON: {"labels": [...]}.
        #[arg(long)]
        labeling: PathBuf,
        #[arg(long)]
        steps: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verification suites; exit 1 on any mismatch.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// SVG diagrams.
    Render {
        #[command(subcommand)]
        what: RenderWhat,
    },
    /// Count permutations of 1..=m commuting with powers of the long cycle:
    /// those with c^k xi c^j = xi for some j.
    Gamma {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Forest orbit formula vs brute force.
    Forest {
        #[arg(long)]
        n: usize,
        /// Check every forest, material partition, and state (n <= 6).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cycle orbit formula vs brute force (even refraction counts).
    Cycle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Projection of the lifted dynamics vs the dynamics on the torus.
    Lift {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coin first-return times and the leaf-cycle rotation congruence on
    /// random trees.
    Lemma {
        /// Largest tree size to sample.
        #[arg(long, default_value_t = 7)]
        n: usize,
        /// Number of random trees.
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cyclic sieving on the all-refraction n-cycle.
    Csp {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum RenderWhat {
    /// Stone diagram of a state.
    Stone {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coin diagram: the graph with the coin on the stone's replica vertex.
    Coin {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The full orbit as a horizontal strip of stone diagrams.
    Strip {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        state: PathBuf,
        /// Largest orbit that will be rendered.
        #[arg(long, default_value_t = 64)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Triangular alcove grid (n = 3) with a discrete trajectory overlay.
    Alcoves {
        #[arg(long)]
        graph: PathBuf,
        /// Window JSON: {"window": [...]}; identity when omitted.
        #[arg(long)]
        window: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long, default_value_t = 1)]
        eps: i8,
        #[arg(long, default_value_t = 18)]
        steps: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::BadInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::VerificationMismatch(_) => 1,
        Error::CapacityExceeded { .. } | Error::OrbitTooLarge { .. } => 3,
        _ => 2,
    }
}

fn load_graph(path: &Path) -> Result<BilliardsGraph, Error> {
    BilliardsGraph::from_json(&read_file(path)?)
}

fn load_state(path: &Path) -> Result<State, Error> {
    State::from_json(&read_file(path)?)
}

fn load_scene(graph: &Path, state: &Path) -> Result<(BilliardsGraph, State), Error> {
    let g = load_graph(graph)?;
    let s = load_state(state)?;
    if s.n() != g.n() {
        return Err(Error::BadInput("state size differs from graph size".into()));
    }
    Ok((g, s))
}

fn run_orbit(
    graph: &Path,
    state: Option<&Path>,
    threads: usize,
    output: &OutputArgs,
) -> Result<(), Error> {
    match state {
        Some(path) => {
            let (g, s) = load_scene(graph, path)?;
            let size = dynamics::orbit_size(&g, &s);
            let text = if output.pretty {
                format!("orbit size: {size}")
            } else {
                json!({ "size": size }).to_string()
            };
            emit(&text, output.out.as_deref())
        }
        None => {
            let g = load_graph(graph)?;
            let report = dynamics::orbit_decomposition_threaded(&g, threads)?;
            let text = if output.pretty {
                let mut t = String::from("size  count\n");
                for c in &report.orbits {
                    t.push_str(&format!("{:>4}  {:>5}\n", c.size, c.count));
                }
                t.push_str(&format!("total states: {}", report.total));
                t
            } else if output
                .out
                .as_deref()
                .and_then(Path::extension)
                .is_some_and(|e| e == "csv")
            {
                report.to_csv()
            } else {
                report.to_json()
            };
            emit(&text, output.out.as_deref())
        }
    }
}

fn run_predict(graph: &Path, state: &Path, output: &OutputArgs) -> Result<(), Error> {
    let (g, s) = load_scene(graph, state)?;
    let method = if g.is_forest() {
        "forest"
    } else if g.is_cycle() && g.refract_count() % 2 == 0 {
        "cycle"
    } else {
        "none"
    };
    let text = match predictors::closed_form_orbit_size(&g, &s)? {
        Some(size) => {
            if output.pretty {
                format!("predicted orbit size: {size} ({method} formula)")
            } else {
                json!({ "size": size, "method": method }).to_string()
            }
        }
        None => {
            let note = "no closed form; use brute force";
            if output.pretty {
                note.to_string()
            } else {
                json!({ "size": null, "method": method, "note": note }).to_string()
            }
        }
    };
    emit(&text, output.out.as_deref())
}

fn run_tpro(
    graph: &Path,
    labeling: &Path,
    steps: Option<u64>,
    output: &OutputArgs,
) -> Result<(), Error> {
    let g = load_graph(graph)?;
    let sigma = Labeling::from_json(&read_file(labeling)?)?;
    if sigma.n() != g.n() {
        return Err(Error::BadInput(
            "labeling size differs from graph size".into(),
        ));
    }
    match steps {
        Some(k) => {
            let mut cur = sigma;
            for _ in 0..k {
                cur = dynamics::toric_promotion(&g, &cur)?;
            }
            let text = if output.pretty {
                format!("{:?}", cur.labels())
            } else {
                cur.to_json()
            };
            emit(&text, output.out.as_deref())
        }
        None => {
            // Full promotion orbit of the labeling.
            let mut orbit = vec![sigma.clone()];
            let mut cur = dynamics::toric_promotion(&g, &sigma)?;
            while cur != sigma {
                orbit.push(cur.clone());
                cur = dynamics::toric_promotion(&g, &cur)?;
            }
            let text = if output.pretty {
                let mut t = format!("promotion orbit of size {}:\n", orbit.len());
                for l in &orbit {
                    t.push_str(&format!("{:?}\n", l.labels()));
                }
                t.trim_end().to_string()
            } else {
                let labelings: Vec<Vec<usize>> =
                    orbit.iter().map(|l| l.labels().to_vec()).collect();
                json!({ "orbit": labelings, "size": labelings.len() }).to_string()
            };
            emit(&text, output.out.as_deref())
        }
    }
}

fn run_verify(suite: &VerifySuite) -> Result<(), Error> {
    match suite {
        VerifySuite::Forest {
            n,
            exhaustive,
            samples,
            seed,
            output,
        } => {
            let summary = if *exhaustive {
                verify::verify_forest_exhaustive(*n)?
            } else {
                verify::verify_forest_random(*n, *samples, *seed)?
            };
            let text = if output.pretty {
                format!("verified: {} ({} checks)", summary.suite, summary.checked)
            } else {
                summary.to_json()
            };
            emit(&text, output.out.as_deref())
        }
        VerifySuite::Cycle {
            n,
            exhaustive,
            samples,
            seed,
            output,
        } => {
            let summary = if *exhaustive {
                verify::verify_cycle_exhaustive(*n)?
            } else {
                verify::verify_cycle_random(*n, *samples, *seed)?
            };
            let text = if output.pretty {
                format!("verified: {} ({} checks)", summary.suite, summary.checked)
            } else {
                summary.to_json()
            };
            emit(&text, output.out.as_deref())
        }
        VerifySuite::Lift {
            n,
            samples,
            seed,
            output,
        } => {
            let summary = verify::verify_lift(*n, *samples, *seed)?;
            let text = if output.pretty {
                format!("verified: {} ({} checks)", summary.suite, summary.checked)
            } else {
                summary.to_json()
            };
            emit(&text, output.out.as_deref())
        }
        VerifySuite::Lemma {
            n,
            samples,
            seed,
            output,
        } => {
            let summary = verify::verify_coin_lemmas(*samples, *n, *seed)?;
            let text = if output.pretty {
                format!("verified: {} ({} checks)", summary.suite, summary.checked)
            } else {
                summary.to_json()
            };
            emit(&text, output.out.as_deref())
        }
        VerifySuite::Csp { n, output } => {
            let report = sieving::verify_csp(*n)?;
            let text = if output.pretty {
                let mut t = format!(
                    "cyclic sieving verified on the all-refraction {}-cycle (order {})\n",
                    report.n, report.order
                );
                for (k, entry) in report.k.iter().enumerate() {
                    t.push_str(&format!(
                        "k = {k}: fixed = {}, F at root = {}\n",
                        entry.fixed, entry.f_at_root
                    ));
                }
                t.trim_end().to_string()
            } else {
                report.to_json()
            };
            emit(&text, output.out.as_deref())
        }
    }
}

fn run_render(what: &RenderWhat) -> Result<(), Error> {
    let opts = RenderOptions::default();
    match what {
        RenderWhat::Stone { state, out } => {
            let s = load_state(state)?;
            emit(&render::render_stone_diagram(&s, &opts), out.as_deref())
        }
        RenderWhat::Coin { graph, state, out } => {
            let (g, s) = load_scene(graph, state)?;
            emit(&render::render_coin_diagram(&g, &s, &opts), out.as_deref())
        }
        RenderWhat::Strip {
            graph,
            state,
            cap,
            out,
        } => {
            let (g, s) = load_scene(graph, state)?;
            let opts = RenderOptions {
                orbit_cap: *cap,
                ..opts
            };
            emit(&render::render_orbit_strip(&g, &s, &opts)?, out.as_deref())
        }
        RenderWhat::Alcoves {
            graph,
            window,
            i,
            eps,
            steps,
            out,
        } => {
            let g = load_graph(graph)?;
            let u = match window {
                Some(path) => AffinePermutation::from_json(&read_file(path)?)?,
                None => AffinePermutation::identity(g.n()),
            };
            let start = AffineState::new(u, *i, *eps)?;
            emit(
                &render::render_alcove_trajectory(&g, &start, *steps, &opts)?,
                out.as_deref(),
            )
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Orbit {
            graph,
            state,
            threads,
            output,
        } => run_orbit(graph, state.as_deref(), *threads, output),
        Command::Predict {
            graph,
            state,
            output,
        } => run_predict(graph, state, output),
        Command::Tpro {
            graph,
            labeling,
            steps,
            output,
        } => run_tpro(graph, labeling, *steps, output),
        Command::Verify { suite } => run_verify(suite),
        Command::Render { what } => run_render(what),
        Command::Gamma { m, k, output } => {
            let count = sieving::gamma_count(*m, *k)?;
            let text = if output.pretty {
                format!("gamma count for m = {m}, k = {k}: {count}")
            } else {
                json!({ "m": m, "k": k, "count": count }).to_string()
            };
            emit(&text, output.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
