use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rfl_core::bounds::{bound_report, f_lower, f_upper, verify_constant_identities, BoundReport, ConstantCheck};
use rfl_core::coloring::{generate, EdgeColoring};
use rfl_core::extended;
use rfl_core::graph::{named_graph, parse_graph, FiniteGraph};
use rfl_core::packing::PackingBudget;
use rfl_core::report::{DensityTable, Payload, ReportEnvelope, RunConfig, DEFAULT_SEED};
use rfl_core::variational::{f_upper_bound_from_g, ratio_limsup_estimate, PiecewiseLinearG, DEFAULT_RESOLUTION};
use rfl_core::verifiers::bowcase::DEFAULT_SPLIT_DEPTH;
use rfl_core::verifiers::density::{bes_verify, final_verify};
use rfl_core::verifiers::lemmaik::lemmaik_verify;
use rfl_core::verifiers::{
    bes_coverage_check, bowcase_exhaustive, final_lemma_check, k6_observation_verify, BowcaseConfig, ColoringSpace,
    SearchCertificate, W1Reading,
};
use rfl_core::Error;

const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_CAPACITY: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "rfl", version, about = "Ramsey density bounds and finite lemma verification for infinite F-factors")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Worker threads for the verifiers.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Base seed for sampled runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the human summary.
    #[arg(long, global = true)]
    json: bool,
    /// Largest n for exact triangle packing.
    #[arg(long, global = true, default_value_t = PackingBudget::default().triangle_vertices)]
    triangle_cap: usize,
    /// Largest n for exact bowtie packing.
    #[arg(long, global = true, default_value_t = PackingBudget::default().bowtie_vertices)]
    bowtie_cap: usize,
    /// Largest candidate family handed to the packing solver.
    #[arg(long, global = true, default_value_t = PackingBudget::default().candidates)]
    candidate_cap: usize,
}

impl Common {
    fn budget(&self) -> PackingBudget {
        PackingBudget {
            triangle_vertices: self.triangle_cap,
            bowtie_vertices: self.bowtie_cap,
            candidates: self.candidate_cap,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bound report for one or more graphs, or a CSV of the f bracket.
    Bounds {
        /// `K5`, `C7`, `K2,3`, an edge list `"3;0-1,1-2,0-2"`, graph6, or a file holding one.
        #[arg(long, required_unless_present = "curve")]
        graph: Vec<String>,
        /// `start:end:step`; prints `x,f_lower,f_upper` rows.
        #[arg(long, conflicts_with = "graph")]
        curve: Option<String>,
    },
    /// Run one of the finite verifications.
    Verify {
        #[command(subcommand)]
        lemma: Lemma,
    },
    /// Triangle coverage table for a single coloring.
    Density {
        /// Coloring file, or `random:<n>:<seed>`, `allred:<n>`, `allblue:<n>`, `pentagon-blowup:<n>`.
        #[arg(long)]
        coloring: String,
        #[arg(long, value_enum, default_value_t = DensityLemma::Final)]
        lemma: DensityLemma,
    },
    /// Ratio estimate for a candidate g, or the f bound it certifies.
    Hfunc {
        #[arg(long, required_unless_present = "lambda", conflicts_with = "lambda", allow_hyphen_values = true)]
        gamma: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// `zero`, `linear:<c>`, `sawtooth:<p>,<duty>`, or a JSON object.
        #[arg(long, default_value = "zero", allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 4096.0)]
        horizon: f64,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
    /// Check the triangle constants and their identities.
    Constants,
}

#[derive(Subcommand)]
enum Lemma {
    /// `3|F| + 2|F'| >= 2`.
    Lemmaik(SweepArgs),
    /// Every cross-coloring of the split K6 holds a bowtie.
    K6,
    /// Exhaustive search over completions of two disjoint bowties.
    Bowcase {
        #[arg(long, default_value_t = DEFAULT_SPLIT_DEPTH)]
        split_depth: usize,
        #[arg(long, value_enum, default_value_t = Reading::AtLeastFour)]
        reading: Reading,
        /// Skip the second search under the other reading.
        #[arg(long)]
        single_reading: bool,
    },
    /// `3|F| >= 3(n - 5)/5` for monochromatic triangle packings.
    Bes(SweepArgs),
    /// Prefix coverage for `k` in `{floor(delta* n), n}`.
    Final(SweepArgs),
    /// Same as the `constants` subcommand.
    Constants,
}

#[derive(Args)]
struct SweepArgs {
    /// Enumerate every coloring of K_n.
    #[arg(long, requires = "n")]
    exhaustive: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with = "exhaustive")]
    samples: Option<u64>,
    #[arg(long, conflicts_with = "exhaustive")]
    n_min: Option<usize>,
    #[arg(long, conflicts_with = "exhaustive")]
    n_max: Option<usize>,
}

/// Space a sweep uses when no range is given.
struct SweepDefaults {
    exhaustive: Option<usize>,
    samples: u64,
    n_min: usize,
    n_max: usize,
}

impl SweepArgs {
    fn space(&self, defaults: SweepDefaults, seed: u64) -> ColoringSpace {
        let sampled = self.samples.is_some() || self.n_min.is_some() || self.n_max.is_some();
        if self.exhaustive || (!sampled && defaults.exhaustive.is_some() && self.n.is_none()) {
            return ColoringSpace::Exhaustive { n: self.n.or(defaults.exhaustive).expect("checked") };
        }
        let n_min = self.n_min.or(self.n).unwrap_or(defaults.n_min);
        ColoringSpace::Sampled {
            n_min,
            n_max: self.n_max.or(self.n).unwrap_or(defaults.n_max.max(n_min)),
            count: self.samples.unwrap_or(defaults.samples),
            seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityLemma {
    Final,
    Bes,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Reading {
    AtLeastFour,
    ExactlyFour,
}

/// What a subcommand produced and how the process should exit.
enum Outcome {
    Report(Payload, RunConfig),
    Csv(String),
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => EXIT_COUNTEREXAMPLE,
        Error::Capacity(_) => EXIT_CAPACITY,
        _ => EXIT_USAGE,
    }
}

fn read_if_file(arg: &str) -> Result<Option<String>, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(Some(std::fs::read_to_string(path)?))
    } else {
        Ok(None)
    }
}

fn load_graph(arg: &str) -> Result<FiniteGraph, Error> {
    let text = read_if_file(arg)?.unwrap_or_else(|| arg.to_string());
    let text = text.trim();
    named_graph(text).unwrap_or_else(|| parse_graph(text))
}

fn load_coloring(arg: &str) -> Result<EdgeColoring, Error> {
    match read_if_file(arg)? {
        Some(text) => EdgeColoring::parse_file(&text),
        None => generate(arg),
    }
}

fn curve_csv(spec: &str) -> Result<String, Error> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("curve '{spec}' is not start:end:step")))?;
    let [start, end, step] = parts[..] else {
        return Err(usage(format!("curve '{spec}' is not start:end:step")));
    };
    if !(step > 0.0) || !(end >= start) || start < 0.0 {
        return Err(usage("curve needs 0 <= start <= end and step > 0"));
    }
    let steps = ((end - start) / step + 1e-9).floor() as u64;
    let mut out = String::from("x,f_lower,f_upper\n");
    for i in 0..=steps {
        let x = start + step * i as f64;
        out.push_str(&format!("{x},{},{}\n", f_lower(x)?, f_upper(x)?));
    }
    Ok(out)
}

fn base_config(cli: &Cli, subcommand: &str) -> RunConfig {
    RunConfig {
        subcommand: subcommand.into(),
        seed: cli.common.seed,
        threads: cli.common.threads,
        budget: cli.common.budget(),
        output: cli.common.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let budget = cli.common.budget();
    let threads = cli.common.threads;
    match &cli.command {
        Command::Bounds { graph, curve } => {
            if let Some(spec) = curve {
                return Ok(Outcome::Csv(curve_csv(spec)?));
            }
            let reports = graph
                .iter()
                .map(|g| Ok(bound_report(&load_graph(g)?, g)))
                .collect::<Result<Vec<_>, Error>>()?;
            let mut config = base_config(cli, "bounds");
            config.inputs = graph.clone();
            Ok(Outcome::Report(Payload::Bounds(reports), config))
        }
        Command::Verify { lemma } => {
            let mut config = base_config(cli, "verify");
            let seed = cli.common.seed;
            let (name, payload) = match lemma {
                Lemma::Lemmaik(args) => {
                    let space = args.space(SweepDefaults { exhaustive: Some(7), samples: 500, n_min: 8, n_max: 9 }, seed);
                    config.options.insert("space".into(), serde_json::to_string(&space)?);
                    ("lemmaik", Payload::Certificate(lemmaik_verify(&space, threads, &budget)?))
                }
                Lemma::K6 => ("k6", Payload::Certificate(k6_observation_verify()?)),
                Lemma::Bowcase { split_depth, reading, single_reading } => {
                    let reading = match reading {
                        Reading::AtLeastFour => W1Reading::AtLeastFour,
                        Reading::ExactlyFour => W1Reading::ExactlyFour,
                    };
                    config.split_depth = *split_depth;
                    config.options.insert("reading".into(), serde_json::to_string(&reading)?);
                    config.options.insert("report_other_reading".into(), (!single_reading).to_string());
                    let cfg = BowcaseConfig {
                        split_depth: *split_depth,
                        threads,
                        reading,
                        report_other_reading: !single_reading,
                    };
                    ("bowcase", Payload::Certificate(bowcase_exhaustive(&cfg)?))
                }
                Lemma::Bes(args) => {
                    let space = args.space(SweepDefaults { exhaustive: None, samples: 500, n_min: 10, n_max: 14 }, seed);
                    config.options.insert("space".into(), serde_json::to_string(&space)?);
                    ("bes", Payload::Certificate(bes_verify(&space, threads, &budget)?))
                }
                Lemma::Final(args) => {
                    let space = args.space(SweepDefaults { exhaustive: None, samples: 200, n_min: 15, n_max: 24 }, seed);
                    config.options.insert("space".into(), serde_json::to_string(&space)?);
                    ("final", Payload::Certificate(final_verify(&space, threads, &budget)?))
                }
                Lemma::Constants => ("constants", Payload::Constants(verify_constant_identities()?)),
            };
            config.inputs = vec![name.into()];
            Ok(Outcome::Report(payload, config))
        }
        Command::Density { coloring, lemma } => {
            let c = load_coloring(coloring)?;
            let mut config = base_config(cli, "density");
            config.inputs = vec![coloring.clone()];
            let (bes, fin) = match lemma {
                DensityLemma::Final => (false, true),
                DensityLemma::Bes => (true, false),
                DensityLemma::Both => (true, true),
            };
            config.options.insert("lemma".into(), match lemma {
                DensityLemma::Final => "final",
                DensityLemma::Bes => "bes",
                DensityLemma::Both => "both",
            }.into());
            let table = DensityTable {
                source: coloring.clone(),
                n: c.n(),
                bes: if bes { Some(bes_coverage_check(&c, &budget)?) } else { None },
                final_lemma: if fin { Some(final_lemma_check(&c, &budget)?) } else { None },
            };
            Ok(Outcome::Report(Payload::Density(table), config))
        }
        Command::Hfunc { gamma, lambda, g, horizon, resolution } => {
            let func = PiecewiseLinearG::parse(g)?;
            let mut config = base_config(cli, "hfunc");
            config.inputs = vec![g.clone()];
            config.horizon = *horizon;
            config.resolution = *resolution;
            let payload = match (gamma, lambda) {
                (_, Some(l)) => {
                    config.options.insert("lambda".into(), l.to_string());
                    Payload::FBound(f_upper_bound_from_g(*l, &func, *horizon, *resolution)?)
                }
                (Some(gm), None) => {
                    config.options.insert("gamma".into(), gm.to_string());
                    Payload::HEstimate(ratio_limsup_estimate(&func, *gm, *horizon, *resolution)?)
                }
                (None, None) => return Err(usage("hfunc needs --gamma or --lambda")),
            };
            Ok(Outcome::Report(payload, config))
        }
        Command::Constants => {
            Ok(Outcome::Report(Payload::Constants(verify_constant_identities()?), base_config(cli, "constants")))
        }
    }
}

fn print_bounds(reports: &[BoundReport]) {
    for r in reports {
        println!("graph {}  (graph6 {}, n = {}, |E| = {}, alpha = {})", r.graph_id, r.graph6, r.vertices, r.edges, r.alpha);
        println!("  min |N(I)|/|I|   {}  at I = {}", r.minratio, r.minratio_witness);
        println!(
            "  upper            rho <= f({}), f({}) in [{:.6}, {:.6}]",
            r.upper_arg, r.upper_arg, r.upper_interval.lower, r.upper_interval.upper
        );
        for c in &r.lower_candidates {
            let arg = c.argument.map(|a| format!(" at {a}")).unwrap_or_default();
            if c.applicable {
                println!("  lower {:<26}{:.6}{arg}", c.source.label(), c.value);
            } else {
                println!("  lower {:<26}n/a", c.source.label());
            }
        }
        println!("  best lower       {:.6} ({})", r.best_lower, r.best_lower_source.label());
        if let Some(e) = r.exact {
            println!("  exact            rho = f({}) in [{:.6}, {:.6}]", extended::fmt(e.x), e.lower, e.upper);
        }
    }
}

fn print_certificate(c: &SearchCertificate) {
    println!("lemma        {}", c.lemma);
    println!("space        {} ({} elements)", c.space, c.space_size);
    println!("verdict      {:?}", c.verdict);
    println!("nodes        {}  leaves {}", c.nodes, c.leaves);
    println!(
        "pruned       {} by predicate, {} by symmetry",
        c.pruned.predicate_satisfied, c.pruned.symmetry
    );
    println!("checksum     {}", c.checksum);
    println!("elapsed      {:.3}s", c.elapsed.as_secs_f64());
    for (k, v) in &c.details {
        if !v.is_array() {
            println!("  {k}: {v}");
        }
    }
    if c.counterexample_count > 0 {
        println!("counterexamples: {} (first shown)", c.counterexample_count);
        print!("{}", c.counterexamples[0]);
    }
}

fn print_constants(c: &ConstantCheck) {
    println!("delta* = {:.12}", c.constants.delta_star);
    println!("gamma* = {:.12}", c.constants.gamma_star);
    println!("first identity residual  {:e} (exact zero: {})", c.first_residual, c.first_exact_zero);
    println!("second identity residual {:e} (exact zero: {})", c.second_residual, c.second_exact_zero);
    println!(
        "Newton root ({:.12}, {:.12}) after {} steps, error {:e}",
        c.newton_root.0, c.newton_root.1, c.newton_iterations, c.root_error
    );
}

fn print_summary(payload: &Payload) {
    match payload {
        Payload::Bounds(r) => print_bounds(r),
        Payload::Certificate(c) => print_certificate(c),
        Payload::Constants(c) => print_constants(c),
        Payload::HEstimate(h) => {
            println!("gamma {}  resolution {}", h.gamma, h.resolution);
            for t in &h.trace {
                println!("  T = {:<10} sup ratio {}", t.horizon, extended::fmt(t.sup_ratio));
            }
        }
        Payload::FBound(b) => {
            println!("lambda {}  gamma {:.6}", b.lambda, b.estimate.gamma);
            for t in &b.estimate.trace {
                println!("  T = {:<10} sup ratio {}", t.horizon, extended::fmt(t.sup_ratio));
            }
            if b.vacuous {
                println!("f bound 1 (vacuous: ratio never finite)");
            } else {
                println!("f bound {:.6} (finite-horizon estimate)", b.f_bound);
            }
            if f_upper(b.lambda).is_ok_and(|u| (u - b.f_bound).abs() <= 1e-9) {
                println!("matches the closed-form upper bound f_upper({})", b.lambda);
            }
        }
        Payload::Density(d) => {
            println!("coloring {}  n = {}", d.source, d.n);
            if let Some(b) = &d.bes {
                println!("  disjoint monochromatic triangles {}  (need 5|F| >= n - 5: {})", b.triangles, b.holds);
            }
            if let Some(f) = &d.final_lemma {
                println!("  {:>4} {:>5} {:>9} {:>12} attained", "k", "color", "coverage", "threshold");
                for r in &f.rows {
                    println!(
                        "  {:>4} {:>5} {:>9} {:>12.6} {}",
                        r.k,
                        r.color.name(),
                        r.coverage,
                        r.threshold,
                        r.attained
                    );
                }
                println!("  holds: {}", f.holds);
            }
        }
    }
}

fn finish(cli: &Cli, payload: Payload, config: RunConfig, elapsed_ms: u64) -> Result<u8, Error> {
    let failed = matches!(&payload, Payload::Certificate(c) if !c.is_verified());
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let env = ReportEnvelope::new(config, timestamp, elapsed_ms, payload);
    env.validate()?;
    let json = env.to_json()?;
    if let Some(path) = &cli.common.out {
        std::fs::write(path, format!("{json}\n"))?;
    }
    if cli.common.json {
        println!("{json}");
    } else {
        print_summary(&env.payload);
    }
    Ok(if failed { EXIT_COUNTEREXAMPLE } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = run(&cli).and_then(|outcome| match outcome {
        Outcome::Csv(text) => {
            print!("{text}");
            Ok(0)
        }
        Outcome::Report(payload, config) => finish(&cli, payload, config, start.elapsed().as_millis() as u64),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
