//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use statrs::distribution::{Binomial, DiscreteCDF};

use cyclefree::generators::{distance_to_cycle_freeness, gen_forest, gen_planted, gen_well_connected, generate, Family, InstanceSpec};
use cyclefree::harness::{run_experiment, scaling_fit, scaling_points, CellSpec, ExperimentSpec, ParamPreset, RunReport};
use cyclefree::oracles::{
    check_dominant_forest, check_dominant_path_through_edge, check_no_bidirectional_dominance, classify_edges,
    estimate_cyc, reach_profile, ClassifyConfig, ReachMethod,
};
use cyclefree::tester::DeskPreset;
use cyclefree::walks::DEFAULT_EXACT_BUDGET;
use cyclefree::{cycle_freeness_tester, lazy_step, lazy_walk, seeded_rng, BoundedDegreeGraph, Outcome, QueryMeter, TesterParams};

struct Verdict {
    pass: bool,
    detail: String,
}

fn within(limit: Duration, started: Instant, mut v: Verdict) -> Verdict {
    let took = started.elapsed();
    v.detail.push_str(&format!(" [{:.1}s, limit {}s]", took.as_secs_f64(), limit.as_secs()));
    if took > limit {
        v.pass = false;
    }
    v
}

/// Reduced desk schedule for the forest sweep; one-sidedness does not
/// depend on the parameters.
fn forest_params(n: usize) -> TesterParams {
    let preset = DeskPreset {
        beta1: 1.0,
        beta2: 0.25,
        c: 1.0,
    };
    TesterParams::desk(n, 0.5, preset).unwrap()
}

fn ac1() -> Verdict {
    let started = Instant::now();
    let mut rng = seeded_rng(2024, 0);
    let instances: Vec<(usize, usize, u64)> = (0..1000)
        .map(|i| {
            let n = 10f64.powf(rng.random_range(1.0..=4.0)).round() as usize;
            let d = [3, 5, 8][rng.random_range(0..3)];
            (n, d, i as u64)
        })
        .collect();
    let failures: usize = instances
        .par_iter()
        .map(|&(n, d, seed)| {
            let g = gen_forest(n, d, seed).unwrap();
            assert_eq!(distance_to_cycle_freeness(&g), 0);
            let params = forest_params(n);
            (0..3)
                .filter(|&t| {
                    let v = cycle_freeness_tester(&g, &params, &mut seeded_rng(seed, 100 + t)).unwrap();
                    v.outcome != Outcome::Accept || v.certificate.is_some()
                })
                .count()
        })
        .sum();
    within(
        Duration::from_secs(120),
        started,
        Verdict {
            pass: failures == 0,
            detail: format!("one-sided error: {failures} non-accepts over 3000 forest runs"),
        },
    )
}

fn disjoint_cycles_cell(n: usize) -> CellSpec {
    CellSpec {
        family: Family::DisjointCycles { cycle_len: 10 },
        n,
        d: 2,
    }
}

fn ac3() -> (Verdict, RunReport) {
    let started = Instant::now();
    let spec = ExperimentSpec::new(
        vec![disjoint_cycles_cell(10_000)],
        0.1,
        ParamPreset::Desk(DeskPreset::default()),
        100,
        300,
    );
    let report = run_experiment(&spec).unwrap();
    let cell = &report.cells[0];
    let v = Verdict {
        pass: cell.rejection_rate >= 2.0 / 3.0,
        detail: format!(
            "detection on disjoint 10-cycles, n=10^4: {}/{} rejected (95% CI {:.3}..{:.3})",
            cell.rejections, cell.trials, cell.ci_low, cell.ci_high
        ),
    };
    (within(Duration::from_secs(600), started, v), report)
}

fn ac4() -> (Verdict, RunReport) {
    let started = Instant::now();
    let cells = (10..=16).map(|k| disjoint_cycles_cell(1 << k)).collect();
    let spec = ExperimentSpec::new(cells, 0.1, ParamPreset::Desk(DeskPreset::default()), 40, 400);
    let report = run_experiment(&spec).unwrap();
    let fit = scaling_fit(&scaling_points(&report)).unwrap();
    let v = Verdict {
        pass: fit.corrected_exponent <= 0.6 && fit.raw_exponent <= 0.75,
        detail: format!(
            "query scaling n=2^10..2^16: raw exponent {:.3} (<= 0.75), corrected {:.3} (<= 0.6)",
            fit.raw_exponent, fit.corrected_exponent
        ),
    };
    (within(Duration::from_secs(1200), started, v), report)
}

fn ac2(reports: &[&RunReport]) -> Verdict {
    let mut rejects = 0;
    let mut bad = 0;
    for r in reports {
        for t in &r.trials {
            if t.outcome == Outcome::Reject {
                rejects += 1;
                if t.cert_verified != Some(true) || t.cert_within_cap != Some(true) {
                    bad += 1;
                }
            }
        }
    }
    Verdict {
        pass: bad == 0 && rejects > 0,
        detail: format!("certificate soundness: {bad} bad certificates among {rejects} rejects"),
    }
}

fn extra_reject_report() -> RunReport {
    let cells = vec![
        CellSpec {
            family: Family::ForestPlusPlantedCycles { planted: 8 },
            n: 400,
            d: 3,
        },
        CellSpec {
            family: Family::WellConnectedCyclic,
            n: 500,
            d: 4,
        },
    ];
    let preset = ParamPreset::Explicit {
        ell: 200,
        m: 200,
        num_starts: 5,
    };
    run_experiment(&ExperimentSpec::new(cells, 0.1, preset, 50, 500)).unwrap()
}

fn ac5() -> Verdict {
    let mut checked = 0usize;
    let mut mismatches = 0usize;
    for n in 1..=6 {
        for edges in common::all_graphs(n) {
            if !common::is_connected(n, &edges) {
                continue;
            }
            let g = BoundedDegreeGraph::from_edges(n, n.max(2) - 1, edges.iter().copied()).unwrap();
            checked += 1;
            if distance_to_cycle_freeness(&g) != common::brute_force_distance(n, &edges) {
                mismatches += 1;
            }
        }
    }
    let exhaustive = checked;
    let mut rng = seeded_rng(5, 0);
    for _ in 0..10_000 {
        let n = rng.random_range(7..=8);
        let extra = rng.random_range(0..=6);
        let g = common::random_connected(n, extra, &mut rng);
        let edges: Vec<_> = g.edges().collect();
        checked += 1;
        if distance_to_cycle_freeness(&g) != common::brute_force_distance(n, &edges) {
            mismatches += 1;
        }
    }
    Verdict {
        pass: mismatches == 0,
        detail: format!(
            "circuit rank vs brute force: {mismatches} mismatches over {checked} connected graphs ({exhaustive} exhaustive for n<=6, {} random for n in 7..8)",
            checked - exhaustive
        ),
    }
}

fn ac6() -> Verdict {
    let started = Instant::now();
    let configs: Vec<(Family, usize, usize)> = vec![
        (Family::UniformForest, 6, 3),
        (Family::UniformForest, 12, 3),
        (Family::DisjointCycles { cycle_len: 3 }, 6, 2),
        (Family::DisjointCycles { cycle_len: 4 }, 12, 2),
        (Family::DisjointCycles { cycle_len: 6 }, 12, 2),
        (Family::ForestPlusPlantedCycles { planted: 1 }, 8, 3),
        (Family::ForestPlusPlantedCycles { planted: 2 }, 12, 3),
        (Family::WellConnectedCyclic, 8, 3),
        (Family::WellConnectedCyclic, 12, 3),
    ];
    let jobs: Vec<(Family, usize, usize, u64)> = configs
        .iter()
        .flat_map(|(f, n, d)| (0..20).map(move |seed| (f.clone(), *n, *d, seed)))
        .collect();
    let results: Vec<(usize, usize, usize, usize, usize)> = jobs
        .par_iter()
        .map(|(family, n, d, seed)| {
            let inst = generate(&InstanceSpec {
                family: family.clone(),
                n: *n,
                d: *d,
                seed: *seed,
            })
            .unwrap();
            let cfg = ClassifyConfig::new(0.25, 3 * n, 30_000).with_seed(*seed);
            let cls = classify_edges(&inst.graph, 0, &cfg).unwrap();
            let checks = [
                check_dominant_forest(&cls).is_violation(),
                check_no_bidirectional_dominance(&cls).is_violation(),
                check_dominant_path_through_edge(&cls).is_violation(),
            ];
            let conclusive = cls.directed.iter().filter(|c| c.dominant.is_conclusive()).count();
            let dominant = cls.certain_dominant().count();
            (
                checks.iter().filter(|&&v| v).count(),
                conclusive,
                cls.directed.len(),
                dominant,
                usize::from(cls.is_conclusive()),
            )
        })
        .collect();
    let violations: usize = results.iter().map(|r| r.0).sum();
    let conclusive: usize = results.iter().map(|r| r.1).sum();
    let labels: usize = results.iter().map(|r| r.2).sum();
    let dominant: usize = results.iter().map(|r| r.3).sum();
    let whole: usize = results.iter().map(|r| r.4).sum();
    let frac = conclusive as f64 / labels.max(1) as f64;
    within(
        Duration::from_secs(900),
        started,
        Verdict {
            pass: violations == 0 && frac >= 0.8,
            detail: format!(
                "dominant-edge structure: {violations} violations over {} classifications; {conclusive}/{labels} directed labels conclusive ({:.1}%), {dominant} certain-dominant, {whole} classifications fully conclusive",
                results.len(),
                100.0 * frac
            ),
        },
    )
}

/// Exact probability that Binomial(trials, p) lands outside `[lo, hi]`.
fn outside(trials: u64, p: f64, lo: f64, hi: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let b = Binomial::new(p, trials).unwrap();
    let below = if lo <= 0.0 { 0.0 } else { b.cdf(lo.ceil() as u64 - 1) };
    let above = if hi >= trials as f64 { 0.0 } else { 1.0 - b.cdf(hi.floor() as u64) };
    below + above
}

fn ac7() -> Verdict {
    let mut expected_failures = 0.0;
    let mut failures = Vec::new();

    // lazy step frequencies
    let samples: u64 = 1_000_000;
    let configs: Vec<(BoundedDegreeGraph, usize)> = vec![
        (BoundedDegreeGraph::from_edges(4, 3, [(0, 1), (0, 2), (0, 3)]).unwrap(), 0),
        (BoundedDegreeGraph::from_edges(3, 4, [(0, 1), (0, 2)]).unwrap(), 0),
        (BoundedDegreeGraph::from_edges(2, 5, [(0, 1)]).unwrap(), 0),
    ];
    for (ci, (g, v)) in configs.iter().enumerate() {
        let mut rng = seeded_rng(70 + ci as u64, 0);
        let mut meter = QueryMeter::new();
        let mut hits = vec![0u64; g.n()];
        for _ in 0..samples {
            hits[lazy_step(g, *v, &mut rng, &mut meter).unwrap()] += 1;
        }
        let two_d = 2.0 * g.d() as f64;
        for (w, &h) in hits.iter().enumerate() {
            let p = if w == *v {
                1.0 - g.adjacent(*v).len() as f64 / two_d
            } else if g.has_edge(*v, w) {
                1.0 / two_d
            } else {
                0.0
            };
            let n = samples as f64;
            expected_failures += outside(samples, p, (p - 0.01) * n, (p + 0.01) * n);
            if (h as f64 / n - p).abs() > 0.01 {
                failures.push(format!("step config {ci} -> {w}: {} vs {p}", h as f64 / n));
            }
        }
    }

    // Monte Carlo reach probabilities against the exact DP
    let trials = 100_000usize;
    for i in 0..20u64 {
        let n = 3 + (i as usize % 6);
        let g = match i % 3 {
            0 => gen_forest(n, 3, i).unwrap(),
            1 => gen_planted(n.max(4), 3, 1, i).unwrap(),
            _ => gen_well_connected(n.max(4), 3, i).unwrap(),
        };
        let ell = 2 * g.n();
        let exact = reach_profile(&g, 0, ell, ReachMethod::Exact { budget: DEFAULT_EXACT_BUDGET }).unwrap();
        let mc = reach_profile(
            &g,
            0,
            ell,
            ReachMethod::MonteCarlo {
                samples: trials,
                seed: 700 + i,
                cyc_samples: None,
            },
        )
        .unwrap();
        for v in 0..g.n() {
            let p = exact.q[v];
            let tol = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
            let nf = trials as f64;
            expected_failures += outside(trials as u64, p, (p - tol) * nf, (p + tol) * nf);
            if (mc.q[v] - p).abs() > tol + 1e-12 {
                failures.push(format!("graph {i} vertex {v}: {} vs {p}", mc.q[v]));
            }
        }
    }
    Verdict {
        pass: failures.is_empty() && expected_failures < 0.01,
        detail: format!(
            "walk-model exactness: {} deviations (expected false-failure rate {:.4}){}",
            failures.len(),
            expected_failures,
            if failures.is_empty() { String::new() } else { format!(": {}", failures.join("; ")) }
        ),
    }
}

fn ac8() -> Verdict {
    let mut nonzero = 0;
    let mut walks = 0;
    for f in 0..10u64 {
        let g = gen_forest(60 + 10 * f as usize, 3, f).unwrap();
        let mut rng = seeded_rng(800 + f, 0);
        for _ in 0..100 {
            let s = rng.random_range(0..g.n());
            let w = lazy_walk(&g, s, 40, &mut rng, &mut QueryMeter::new()).unwrap();
            let st = estimate_cyc(&g, &w, 40, 50, &mut rng).unwrap();
            walks += 1;
            if st.cyc != 0.0 || st.hits != 0 {
                nonzero += 1;
            }
        }
    }
    Verdict {
        pass: nonzero == 0,
        detail: format!("forest nullity of cyc: {nonzero} nonzero estimates over {walks} walks"),
    }
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    results.push(("AC1", ac1()));
    let (v3, r3) = ac3();
    let (v4, r4) = ac4();
    let extra = extra_reject_report();
    results.push(("AC2", ac2(&[&r3, &r4, &extra])));
    results.push(("AC3", v3));
    results.push(("AC4", v4));
    results.push(("AC5", ac5()));
    results.push(("AC6", ac6()));
    results.push(("AC7", ac7()));
    results.push(("AC8", ac8()));
    results.sort_by_key(|(k, _)| *k);
    let mut ok = true;
    for (name, v) in &results {
        println!("[{}] {name} {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        ok &= v.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
