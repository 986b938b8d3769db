//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rfl_core::bounds::{
    bound_report, f_lower, f_lower_exact, f_upper, first_identity, second_identity, solve_identities,
    verify_constant_identities, TriangleConstants,
};
use rfl_core::coloring::{enumerate_colorings, Color};
use rfl_core::graph::{alpha, corollary_condition, min_independent_ratio, FiniteGraph, RatioValue};
use rfl_core::packing::{max_bowtie_packing, max_triangle_packing, PackingBudget};
use rfl_core::report::{Payload, DEFAULT_SEED};
use rfl_core::variational::{
    f_upper_bound_from_g, gamma_minus, gamma_plus, ratio_limsup_estimate, Extension, PiecewiseLinearG,
    DEFAULT_RESOLUTION,
};
use rfl_core::verifiers::bowcase::{forced_edges, B2, B3, C1, C2, R2, R3};
use rfl_core::verifiers::density::{bes_verify, final_verify};
use rfl_core::verifiers::lemmaik::lemmaik_verify;
use rfl_core::verifiers::{
    bowcase_exhaustive, k6_observation_verify, BowcaseConfig, BowcaseInstance, ColoringSpace, SearchCertificate,
    W1Reading,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(budget: Duration, start: Instant, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= budget, format!("{what} took {took:?}, budget {budget:?}"))
}

fn clean(cert: &SearchCertificate) -> Result<(), String> {
    cert.validate().map_err(|e| e.to_string())?;
    ensure(
        cert.is_verified() && cert.counterexample_count == 0,
        format!("{}: {} counterexamples", cert.lemma, cert.counterexample_count),
    )
}

fn c1_bracket_values() -> Check {
    let start = Instant::now();
    let u1 = f_upper(1.0).unwrap();
    let u2 = f_upper(2.0).unwrap();
    let want1 = (12.0 + 8f64.sqrt()) / 17.0;
    let want2 = (21.0 + 12f64.sqrt()) / 33.0;
    ensure((u1 - want1).abs() <= 1e-12, format!("f_upper(1) = {u1}, want {want1}"))?;
    ensure((u2 - want2).abs() <= 1e-12, format!("f_upper(2) = {u2}, want {want2}"))?;
    let l1 = f_lower_exact(RatioValue::integer(1));
    let l2 = f_lower_exact(RatioValue::integer(2));
    ensure(l1 == RatioValue::new(2, 3).unwrap(), format!("f_lower(1) = {l1}"))?;
    ensure(l2 == RatioValue::new(3, 5).unwrap(), format!("f_lower(2) = {l2}"))?;
    ensure(f_lower(1.0).unwrap() == 2.0 / 3.0 && f_lower(2.0).unwrap() == 3.0 / 5.0, "f64 f_lower differs")?;
    within(Duration::from_secs(1), start, "criterion 1")?;
    Ok(format!("f_upper(1) = {u1:.15}, f_upper(2) = {u2:.15}, f_lower = 2/3, 3/5"))
}

fn c2_constants() -> Check {
    let start = Instant::now();
    let k = TriangleConstants::new();
    ensure((k.gamma_star - 0.622035526990).abs() < 1e-12, format!("gamma* = {}", k.gamma_star))?;
    ensure((k.delta_star - 0.466037231268).abs() < 1e-12, format!("delta* = {}", k.delta_star))?;
    let (g, d) = (1.0 - 1.0 / 7f64.sqrt(), (4.0 * 7f64.sqrt() + 2.0) / 27.0);
    ensure((k.gamma_star - g).abs() <= 1e-15 && (k.delta_star - d).abs() <= 1e-15, "closed forms differ")?;
    // identities evaluated here from their polynomial form
    let r1 = g * d + 2.0 * g + d - 2.0;
    let r2 = 11.0 * g * d + 10.0 / 3.0 * g - 7.0 * d - 2.0;
    ensure(r1.abs() <= 1e-12 && r2.abs() <= 1e-12, format!("residuals {r1:e}, {r2:e}"))?;
    ensure(
        (first_identity(d, g) - r1).abs() <= 1e-15 && (second_identity(d, g) - r2).abs() <= 1e-15,
        "library identities disagree with the polynomials",
    )?;
    let check = verify_constant_identities().map_err(|e| e.to_string())?;
    ensure(check.first_exact_zero && check.second_exact_zero, "exact Q(sqrt 7) evaluation is nonzero")?;
    let ((rd, rg), _) = solve_identities((0.3, 0.8), 200).map_err(|e| e.to_string())?;
    ensure((rd - d).abs() < 1e-10 && (rg - g).abs() < 1e-10, format!("root ({rd}, {rg})"))?;
    within(Duration::from_secs(1), start, "criterion 2")?;
    Ok(format!("residuals {r1:.1e}, {r2:.1e}; exact zero in Q(sqrt 7); root ({rd:.10}, {rg:.10})"))
}

/// 50 graphs: complete, cycles, paths, complete bipartite and seeded random ones.
fn corpus() -> Vec<(String, FiniteGraph)> {
    let mut out = Vec::new();
    for n in 2..=9 {
        out.push((format!("K{n}"), FiniteGraph::complete(n).unwrap()));
    }
    for n in 3..=12 {
        out.push((format!("C{n}"), FiniteGraph::cycle(n).unwrap()));
    }
    for n in 2..=8 {
        out.push((format!("P{n}"), FiniteGraph::path(n).unwrap()));
    }
    for (a, b) in [(1, 1), (1, 3), (2, 2), (2, 3), (2, 5), (3, 3), (3, 4), (4, 4)] {
        out.push((format!("K{a},{b}"), FiniteGraph::complete_bipartite(a, b).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    while out.len() < 50 {
        let n = rng.gen_range(3..=12);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        out.push((format!("random{}", out.len()), FiniteGraph::from_edges(n, &edges).unwrap()));
    }
    out
}

fn c3_vertex_ratio_identity() -> Check {
    let start = Instant::now();
    let graphs = corpus();
    ensure(graphs.len() == 50, "corpus size")?;
    for (name, g) in &graphs {
        let (n, a) = (g.n() as u64, alpha(g) as u64);
        ensure(a as usize == common::alpha(g), format!("{name}: alpha disagrees with brute force"))?;
        let lhs = f_lower_exact(RatioValue::new(n - a, a).unwrap());
        let rhs = RatioValue::new(n, 2 * n - a).unwrap();
        ensure(lhs == rhs, format!("{name}: {lhs} != {rhs}"))?;
        bound_report(g, name).validate().map_err(|e| format!("{name}: {e}"))?;
    }
    within(Duration::from_secs(1), start, "criterion 3")?;
    Ok("f_lower(|V|/alpha - 1) = |V|/(2|V| - alpha) exactly on 50 graphs".into())
}

fn c4_minratio() -> Check {
    let start = Instant::now();
    for n in 2..=8 {
        let g = FiniteGraph::complete(n).unwrap();
        let r = min_independent_ratio(&g).ratio;
        ensure(r == RatioValue::integer(n as u64 - 1), format!("K{n}: {r}"))?;
        ensure(corollary_condition(&g), format!("K{n}: corollary condition false"))?;
    }
    for n in 1..=5 {
        let g = FiniteGraph::cycle(2 * n + 1).unwrap();
        let r = min_independent_ratio(&g).ratio;
        let want = RatioValue::new(n as u64 + 1, n as u64).unwrap();
        ensure(r == want, format!("C{}: {r}, want {want}", 2 * n + 1))?;
        ensure(corollary_condition(&g), format!("C{}: corollary condition false", 2 * n + 1))?;
    }
    within(Duration::from_secs(1), start, "criterion 4")?;
    Ok("K_n -> n-1 (n = 2..8), C_{2n+1} -> (n+1)/n (n = 1..5), corollary condition holds".into())
}

fn c5_k6() -> Check {
    let start = Instant::now();
    let cert = k6_observation_verify().map_err(|e| e.to_string())?;
    clean(&cert)?;
    ensure(cert.space_size == 512 && cert.leaves == 512, format!("space {}", cert.space_size))?;
    ensure(cert.details["verified_instances"] == 512, "not all instances recorded as verified")?;
    within(Duration::from_secs(1), start, "criterion 5")?;
    Ok("512 cross-colorings, each with a bowtie".into())
}

fn c6_lemmaik() -> Check {
    let start = Instant::now();
    let budget = PackingBudget::default();
    let cert = lemmaik_verify(&ColoringSpace::Exhaustive { n: 7 }, 1, &budget).map_err(|e| e.to_string())?;
    clean(&cert)?;
    ensure(cert.space_size == 1 << 21 && cert.leaves == 1 << 21, format!("covered {}", cert.leaves))?;
    let sweep_time = start.elapsed();

    let mut mismatches = 0u64;
    let mut compare = |c: &rfl_core::coloring::EdgeColoring| {
        for color in Color::BOTH {
            let got = max_triangle_packing(c, color, &budget).unwrap().size() as u64;
            if got != common::max_packing_size(c.n(), &common::triangles(c, color)) {
                mismatches += 1;
            }
        }
        let got = max_bowtie_packing(c, &budget).unwrap().size() as u64;
        if got != common::max_packing_size(c.n(), &common::bowtie_sets(c)) {
            mismatches += 1;
        }
    };
    let k6 = enumerate_colorings(6, &mut compare).map_err(|e| e.to_string())?;
    let sampled = ColoringSpace::Sampled { n_min: 8, n_max: 9, count: 500, seed: DEFAULT_SEED };
    for i in 0..500 {
        compare(&sampled.coloring(i).map_err(|e| e.to_string())?);
    }
    ensure(k6 == 32768, format!("enumerated {k6} K_6 colorings"))?;
    ensure(mismatches == 0, format!("{mismatches} packing mismatches against the subset oracle"))?;
    within(Duration::from_secs(600), start, "criterion 6")?;
    Ok(format!(
        "2^21 K_7 colorings, 0 violations, min slack {} ({sweep_time:.1?}); oracle agrees on 32768 K_6 + 500 K_8/K_9",
        cert.details["min_slack"]
    ))
}

fn c7_bowcase() -> Check {
    let start = Instant::now();
    let base = BowcaseConfig::default();
    let one = bowcase_exhaustive(&base).map_err(|e| e.to_string())?;
    let eight = bowcase_exhaustive(&BowcaseConfig { threads: 8, ..base }).map_err(|e| e.to_string())?;
    clean(&one)?;
    clean(&eight)?;
    ensure(one.details["covered_completions"] == 1u64 << 33, "completions not fully covered")?;
    ensure(one.checksum == eight.checksum, format!("checksums {} vs {}", one.checksum, eight.checksum))?;
    ensure(one.details["symmetry_control"]["agree"] == true, "symmetry control disagrees")?;
    ensure(one.details["other_reading"]["verdict"] == "verified", "exactly-four reading fails")?;

    // control: a deeper split, where fewer symmetries stabilize the prefix
    let deep = BowcaseConfig { split_depth: 12, ..base };
    let d1 = bowcase_exhaustive(&deep).map_err(|e| e.to_string())?;
    let d8 = bowcase_exhaustive(&BowcaseConfig { threads: 8, ..deep }).map_err(|e| e.to_string())?;
    clean(&d1)?;
    ensure(d1.checksum == d8.checksum, "depth-12 checksums differ across threads")?;
    ensure(d1.details["symmetry_control"]["agree"] == true, "depth-12 symmetry control disagrees")?;

    let inst = BowcaseInstance::new()
        .with(C1, C2, Color::Blue)
        .and_then(|i| i.with(B2, R3, Color::Blue))
        .and_then(|i| i.with(R2, B3, Color::Red))
        .map_err(|e| e.to_string())?;
    let forced = forced_edges(inst.partial(), W1Reading::AtLeastFour);
    ensure(
        forced.contains(&((C1, R3), Color::Red)),
        format!("C1R3 not forced red; forced: {forced:?}"),
    )?;
    within(Duration::from_secs(4 * 3600), start, "criterion 7")?;
    Ok(format!(
        "2^33 completions, 0 counterexamples, {} nodes; checksum {}.. for 1 and 8 threads; C1R3 forced red",
        one.nodes,
        &one.checksum[..12]
    ))
}

fn c8_bes() -> Check {
    let start = Instant::now();
    let budget = PackingBudget::default();
    let mut covered = 0;
    for n in 1..=7 {
        let cert = bes_verify(&ColoringSpace::Exhaustive { n }, 1, &budget).map_err(|e| e.to_string())?;
        clean(&cert)?;
        covered += cert.leaves;
    }
    let space = ColoringSpace::Sampled { n_min: 10, n_max: 14, count: 500, seed: DEFAULT_SEED };
    let cert = bes_verify(&space, 1, &budget).map_err(|e| e.to_string())?;
    clean(&cert)?;
    within(Duration::from_secs(900), start, "criterion 8")?;
    Ok(format!("{covered} colorings with n <= 7 and 500 random with n = 10..14, 0 violations"))
}

fn c9_final() -> Check {
    let start = Instant::now();
    let space = ColoringSpace::Sampled { n_min: 15, n_max: 24, count: 200, seed: DEFAULT_SEED };
    let cert = final_verify(&space, 1, &PackingBudget::default()).map_err(|e| e.to_string())?;
    clean(&cert)?;
    ensure(cert.leaves == 200, "not all samples visited")?;
    within(Duration::from_secs(1800), start, "criterion 9")?;
    Ok(format!("200 random colorings, n = 15..24, 0 violations, min slack {}", cert.details["min_slack"]))
}

fn random_g(rng: &mut ChaCha8Rng) -> PiecewiseLinearG {
    let mut breakpoints = vec![0.0];
    let mut slopes = Vec::new();
    for _ in 0..rng.gen_range(0..5) {
        breakpoints.push(breakpoints.last().unwrap() + rng.gen_range(0.1..10.0));
        slopes.push(rng.gen_range(-1.0..=1.0));
    }
    let extension = if rng.gen_bool(0.5) {
        Extension::Constant(rng.gen_range(-1.0..=1.0))
    } else {
        Extension::Periodic((0..rng.gen_range(1..4)).map(|_| (rng.gen_range(0.1..5.0), rng.gen_range(-1.0..=1.0))).collect())
    };
    PiecewiseLinearG::new(breakpoints, slopes, extension).unwrap()
}

fn c10_variational() -> Check {
    let start = Instant::now();
    let zero = PiecewiseLinearG::zero();
    let mut values = Vec::new();
    for lambda in [3.0, 4.0, 5.0] {
        let b = f_upper_bound_from_g(lambda, &zero, 4096.0, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
        let want = (lambda + 1.0) / (2.0 * lambda);
        ensure((b.f_bound - want).abs() <= 1e-9, format!("lambda {lambda}: {} vs {want}", b.f_bound))?;
        ensure((b.f_bound - f_upper(lambda).unwrap()).abs() <= 1e-9, "disagrees with f_upper")?;
        values.push(b.f_bound);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for i in 0..10_000 {
        let g = random_g(&mut rng);
        let gamma = rng.gen_range(-0.99..0.99);
        let t = rng.gen_range(0.01..1000.0);
        let t2 = t + rng.gen_range(0.0..100.0);
        for (name, f) in [("plus", gamma_plus as fn(&PiecewiseLinearG, f64, f64) -> _), ("minus", gamma_minus)] {
            let (a, b) = (f(&g, gamma, t).unwrap(), f(&g, gamma, t2).unwrap());
            ensure(a <= b, format!("sample {i}: Gamma {name} not monotone, {a} > {b} for {g:?}"))?;
        }
    }
    let flat = ratio_limsup_estimate(&zero, 0.5, 4096.0, DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
    ensure(flat.trace.iter().all(|h| h.sup_ratio == 4.0), "zero g trace is not flat at 2/gamma")?;
    within(Duration::from_secs(60), start, "criterion 10")?;
    Ok(format!("f bounds {values:.9?}; monotone on 10^4 random (g, gamma, t)"))
}

fn bytes(p: Payload) -> Result<Vec<u8>, String> {
    p.canonical_bytes().map_err(|e| e.to_string())
}

fn c11_determinism() -> Check {
    let budget = PackingBudget::default();
    let cert = |r: rfl_core::Result<SearchCertificate>| r.map(Payload::Certificate).map_err(|e| e.to_string());
    let sampled = ColoringSpace::Sampled { n_min: 10, n_max: 14, count: 100, seed: DEFAULT_SEED };
    let final_space = ColoringSpace::Sampled { n_min: 15, n_max: 20, count: 40, seed: DEFAULT_SEED };
    let runs: Vec<(&str, Box<dyn Fn(usize) -> Result<Payload, String>>)> = vec![
        ("k6", Box::new(|_| cert(k6_observation_verify()))),
        ("lemmaik", Box::new(|t| cert(lemmaik_verify(&ColoringSpace::Exhaustive { n: 6 }, t, &budget)))),
        ("bes", Box::new(|t| cert(bes_verify(&sampled, t, &budget)))),
        ("final", Box::new(|t| cert(final_verify(&final_space, t, &budget)))),
        (
            "bowcase",
            Box::new(|t| cert(bowcase_exhaustive(&BowcaseConfig { threads: t, ..BowcaseConfig::default() }))),
        ),
        ("constants", Box::new(|_| verify_constant_identities().map(Payload::Constants).map_err(|e| e.to_string()))),
        ("bounds", Box::new(|_| Ok(Payload::Bounds(corpus().iter().map(|(n, g)| bound_report(g, n)).collect())))),
        (
            "hfunc",
            Box::new(|_| {
                let g = PiecewiseLinearG::sawtooth(8.0, 0.5).unwrap();
                ratio_limsup_estimate(&g, 0.5, 64.0, 256).map(Payload::HEstimate).map_err(|e| e.to_string())
            }),
        ),
    ];
    for (name, run) in &runs {
        let reference = bytes(run(1)?)?;
        for threads in [1, 2, 8] {
            ensure(bytes(run(threads)?)? == reference, format!("{name} payload differs at {threads} threads"))?;
        }
    }
    Ok(format!("{} payload kinds byte-identical across reruns at 1, 2 and 8 threads", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("f bracket values", c1_bracket_values),
        ("triangle constants and identities", c2_constants),
        ("vertex-ratio identity on a 50-graph corpus", c3_vertex_ratio_identity),
        ("minimum independence ratios", c4_minratio),
        ("K_6 bowtie observation", c5_k6),
        ("3|F| + 2|F'| >= n - 5 on K_7, solver vs oracle", c6_lemmaik),
        ("two-bowtie configuration", c7_bowcase),
        ("3/5 triangle coverage", c8_bes),
        ("prefix density lemma at desk scale", c9_final),
        ("variational sanity", c10_variational),
        ("certificate determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match check() {
            Ok(summary) => println!("PASS {:>2}  {title}: {summary} [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}  {title}: {why} [{:.2?}]", i + 1, start.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
