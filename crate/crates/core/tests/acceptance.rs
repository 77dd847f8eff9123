//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use digitlaw::asymptotics::{alpha, alpha_sub, central_value, hill_prob};
use digitlaw::audit::{self, ColumnSelector, IngestOptions, Law};
use digitlaw::digit_core::{count_pth_digit_upto, pow10, pth_digit};
use digitlaw::exact_law::{distribution_at, prob_exact, prob_via_recursion, Decimation, Scan};
use digitlaw::oracle::{
    prob_oracle, sample_values, simulate, simulate_with_workers, SimulationConfig,
};
use digitlaw::tables;
use digitlaw::{Digit, ModelParams, Position};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn pos(p: u32) -> Position {
    Position::new(p).unwrap()
}

fn exact(n: u64, p: u32, d: Digit) -> f64 {
    prob_exact(&ModelParams::new(n, pos(p), d).unwrap())
        .unwrap()
        .value
}

/// Compares `(label, computed, target)` triples at `tol`.
fn compare(items: &[(String, f64, f64)], tol: f64) -> Outcome {
    let worst = items
        .iter()
        .max_by(|a, b| (a.1 - a.2).abs().total_cmp(&(b.1 - b.2).abs()))
        .ok_or("nothing compared")?;
    let bad: Vec<String> = items
        .iter()
        .filter(|(_, c, t)| (c - t).abs() > tol)
        .map(|(l, c, t)| format!("{l}: {c:.6} vs {t:.4}"))
        .collect();
    let worst_diff = (worst.1 - worst.2).abs();
    if bad.is_empty() {
        Ok(format!(
            "{} values, max diff {worst_diff:.2e} at {}",
            items.len(),
            worst.0
        ))
    } else {
        Err(format!(
            "{} of {} outside {tol:e}: {}",
            bad.len(),
            items.len(),
            bad.join("; ")
        ))
    }
}

fn within(elapsed: Duration, budget: Duration, body: Outcome) -> Outcome {
    let body = body?;
    if elapsed > budget {
        Err(format!(
            "{body}, but took {elapsed:.2?} (budget {budget:.0?})"
        ))
    } else {
        Ok(body)
    }
}

fn worked_examples() -> Outcome {
    let t = Instant::now();
    let items: Vec<_> = tables::WORKED_EXAMPLES
        .iter()
        .map(|&(n, p, d, target)| {
            (
                format!("({n},{p},{d})"),
                exact(n, p, Digit::new(d).unwrap()),
                target,
            )
        })
        .collect();
    within(t.elapsed(), Duration::from_secs(1), compare(&items, 5e-5))
}

fn subsequence_table(p: u32) -> Vec<(String, f64, f64)> {
    let (first_m, rows) = tables::subsequence(p).unwrap();
    let mut items = Vec::new();
    for d in Digit::all() {
        let row = &rows[d.index()];
        for (col, &target) in row[..row.len() - 1].iter().enumerate() {
            let m = first_m + col as u32;
            items.push((format!("d={d} m={m}"), exact(pow10(m) - 1, p, d), target));
        }
        items.push((
            format!("alpha d={d}"),
            alpha(d, pos(p)).unwrap().value,
            row[row.len() - 1],
        ));
    }
    items
}

fn table_second_digit() -> Outcome {
    let t = Instant::now();
    let items = subsequence_table(2);
    within(t.elapsed(), Duration::from_secs(10), compare(&items, 5e-5))
}

fn table_third_digit() -> Outcome {
    let t = Instant::now();
    let items = subsequence_table(3);
    within(t.elapsed(), Duration::from_secs(60), compare(&items, 5e-5))
}

fn window_tables() -> Outcome {
    let mut items = Vec::new();
    for p in [2u32, 3] {
        let (i, first_m, rows) = tables::window(p).unwrap();
        for d in Digit::all() {
            let row = &rows[d.index()];
            for (col, &target) in row[..row.len() - 1].iter().enumerate() {
                let m = first_m + col as u32;
                let n = (10 * i + u64::from(d.get()) + 1) * pow10(m + 1 - p) - 1;
                items.push((format!("p={p} d={d} m={m}"), exact(n, p, d), target));
            }
            let limit = alpha_sub(d, pos(p), i).unwrap().value;
            items.push((format!("p={p} alpha_sub d={d}"), limit, row[row.len() - 1]));
        }
    }
    compare(&items, 5e-5)
}

fn central_tables() -> Outcome {
    let mut items = Vec::new();
    for p in [2u32, 3] {
        let rows = tables::central(p).unwrap();
        for d in Digit::all() {
            let [c, h] = rows[d.index()];
            items.push((
                format!("C p={p} d={d}"),
                central_value(d, pos(p)).unwrap().value,
                c,
            ));
            items.push((
                format!("Hill p={p} d={d}"),
                hill_prob(d, pos(p)).unwrap().value,
                h,
            ));
        }
    }
    let c0 = central_value(Digit::new(0).unwrap(), pos(2)).unwrap().value;
    items.push(("C(0,2) caption".into(), c0, tables::CENTRAL_0_2));
    compare(&items, 5e-4)
}

fn oracle_equivalence() -> Outcome {
    let t = Instant::now();
    let mut worst: (f64, String) = (0.0, String::new());
    let mut check = |n: u64, p: u32| -> Result<(), String> {
        for d in Digit::all() {
            let params = ModelParams::new(n, pos(p), d).unwrap();
            let a = prob_exact(&params).map_err(|e| e.to_string())?.value;
            let b = prob_oracle(&params).map_err(|e| e.to_string())?.value;
            let diff = (a - b).abs();
            if diff > worst.0 {
                worst = (diff, format!("({n},{p},{d})"));
            }
        }
        Ok(())
    };
    let mut points = 0u64;
    for p in [2u32, 3] {
        for n in pos(p).floor()..=10_000 {
            check(n, p)?;
            points += 10;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let n = rng.random_range(100..=100_000u64);
        for p in [2u32, 3] {
            check(n, p)?;
            points += 10;
        }
    }
    let body = if worst.0 == 0.0 {
        Ok(format!("{points} triples, all bitwise identical"))
    } else if worst.0 <= 1e-12 {
        Ok(format!(
            "{points} triples, max diff {:.2e} at {}",
            worst.0, worst.1
        ))
    } else {
        Err(format!("max diff {:.2e} at {}", worst.0, worst.1))
    };
    within(t.elapsed(), Duration::from_secs(120), body)
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn n_for(max: u64) -> impl Strategy<Value = (u32, u64)> {
    (2u32..=5).prop_flat_map(move |p| {
        let lo = pow10(p - 1);
        (Just(p), lo..=max.max(lo))
    })
}

fn property_suites() -> Outcome {
    run_property(96, n_for(300_000), |(p, n)| {
        let total: f64 = Digit::all().map(|d| exact(n, p, d)).sum();
        prop_assert!(
            (total - 1.0).abs() <= 1e-10,
            "partition n={} p={}: {}",
            n,
            p,
            total
        );
        Ok(())
    })
    .map_err(|e| format!("partition: {e}"))?;

    run_property(96, n_for(200_000), |(p, n)| {
        let probs = distribution_at(n, pos(p)).unwrap();
        let strict = n >= pos(p).floor() + 9;
        for d in 0..9 {
            if strict {
                prop_assert!(probs[d] > probs[d + 1], "n={} p={} d={}", n, p, d);
            } else {
                prop_assert!(probs[d] >= probs[d + 1], "n={} p={} d={}", n, p, d);
            }
        }
        Ok(())
    })
    .map_err(|e| format!("monotonicity: {e}"))?;

    run_property(192, (n_for(2_000_000), 0u32..10), |((p, n), d)| {
        let params = ModelParams::from_raw(n, p, d).unwrap();
        let a = prob_via_recursion(&params).value;
        let b = prob_exact(&params).unwrap().value;
        prop_assert!(
            (a - b).abs() <= 1e-12,
            "n={} p={} d={}: {} vs {}",
            n,
            p,
            d,
            a,
            b
        );
        Ok(())
    })
    .map_err(|e| format!("recursion: {e}"))?;

    let p2 = pos(2);
    let mut running = [0u64; 10];
    for m in 10..=20_000u64 {
        running[pth_digit(m, p2).unwrap().index()] += 1;
        for d in Digit::all() {
            let c = count_pth_digit_upto(m, p2, d).unwrap().total();
            if c != running[d.index()] {
                return Err(format!("count m={m} d={d}: {c} vs {}", running[d.index()]));
            }
        }
    }

    for p in 2..=6 {
        let total: f64 = Digit::all()
            .map(|d| hill_prob(d, pos(p)).unwrap().value)
            .sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(format!("hill p={p}: sum {total}"));
        }
    }
    Ok("partition, monotonicity, recursion, exhaustive count and telescoping hold".into())
}

/// Local maxima of `series[k].1`, with the first point counted when it
/// exceeds its successor.
fn local_maxima(series: &[(u64, f64)]) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 0..series.len().saturating_sub(1) {
        let left_ok = k == 0 || series[k].1 > series[k - 1].1;
        if left_ok && series[k].1 > series[k + 1].1 {
            out.push(series[k].0);
        }
    }
    out
}

fn long_scan() -> Outcome {
    let n_max = 2_000_000u64;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("scan.csv");
    let t = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_digitlaw"))
        .args([
            "scan",
            "-p",
            "2",
            "--n-max",
            "2000000",
            "--format",
            "csv",
            "--precision",
            "17",
            "--out",
        ])
        .arg(&path)
        .status()
        .map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    if !status.success() {
        return Err(format!("scan exited with {status}"));
    }
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut found = 0;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let n: u64 = fields[0].parse().map_err(|_| format!("bad row {line}"))?;
        if ![99, 999, 9_999, 99_999].contains(&n) {
            continue;
        }
        found += 1;
        for d in Digit::all() {
            let v: f64 = fields[1 + d.index()]
                .parse()
                .map_err(|_| format!("bad row {line}"))?;
            worst = worst.max((v - exact(n, 2, d)).abs());
        }
    }
    if found != 4 {
        return Err(format!(
            "only {found} of 4 checkpoints in the decimated output"
        ));
    }
    if worst > 1e-10 {
        return Err(format!("checkpoint diff {worst:.2e}"));
    }

    let series: Vec<(u64, f64)> = Scan::new(n_max, pos(2), Decimation::All)
        .map_err(|e| e.to_string())?
        .map(|pt| (pt.n, pt.probs[0]))
        .collect();
    let maxima = local_maxima(&series);
    let per_decade: Vec<usize> = (1..=5u32)
        .map(|m| {
            let (lo, hi) = (pow10(m), pow10(m + 1));
            maxima.iter().filter(|&&n| (lo..hi).contains(&n)).count()
        })
        .collect();
    let shown = per_decade
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("/");
    if let Some(m) = per_decade.iter().position(|&c| c < 9) {
        return Err(format!(
            "decade 10^{}: {} local maxima of P_0 (per decade from 10^1: {shown}; first maxima {:?})",
            m + 1,
            per_decade[m],
            &maxima[..maxima.len().min(12)]
        ));
    }
    within(
        elapsed,
        Duration::from_secs(10),
        Ok(format!(
            "CLI scan {elapsed:.2?}, checkpoint diff {worst:.1e}, P_0 maxima per decade {shown}"
        )),
    )
}

fn monte_carlo() -> Outcome {
    let p = pos(2);
    let config = SimulationConfig::new(212, p, 1_000_000, 20_240_314).map_err(|e| e.to_string())?;
    let report = simulate(&config);
    let again = simulate(&config);
    if report != again {
        return Err("repeated runs differ".into());
    }
    for workers in [1, 2, 4] {
        if simulate_with_workers(&config, workers).map_err(|e| e.to_string())? != report {
            return Err(format!("report differs with {workers} workers"));
        }
    }
    let expected = distribution_at(212, p).map_err(|e| e.to_string())?;
    let mut expected_exact = [0.0; 10];
    for d in Digit::all() {
        expected_exact[d.index()] = exact(212, 2, d);
        if (expected_exact[d.index()] - expected[d.index()]).abs() > 1e-12 {
            return Err("scan and closed form disagree at n = 212".into());
        }
    }
    let z = report.z_scores(&expected_exact);
    let max_z = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_z > 4.0 {
        return Err(format!("max |z| = {max_z:.3}"));
    }
    Ok(format!(
        "max |z| = {max_z:.3}, identical across runs and 1/2/4 workers"
    ))
}

fn audit_round_trip() -> Outcome {
    let p = pos(2);
    let config = SimulationConfig::new(999, p, 1_000_000, 77).map_err(|e| e.to_string())?;
    let values = sample_values(&config);
    let mut file = tempfile::NamedTempFile::new().map_err(|e| e.to_string())?;
    {
        let mut w = std::io::BufWriter::new(file.as_file_mut());
        writeln!(w, "value").map_err(|e| e.to_string())?;
        for v in &values {
            writeln!(w, "{v}").map_err(|e| e.to_string())?;
        }
    }
    let ds = audit::ingest_path(
        file.path(),
        &ColumnSelector::Name("value".into()),
        &IngestOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    if ds.values.len() != values.len() {
        return Err(format!(
            "read back {} of {} values",
            ds.values.len(),
            values.len()
        ));
    }
    let report = audit::audit(&ds, p, &Law::ALL, Some(999)).map_err(|e| e.to_string())?;
    let mad = |law| report.get(law).unwrap().mad;
    let (model, hill, uniform) = (mad(Law::Model), mad(Law::Hill), mad(Law::Uniform));
    let summary = format!("mad model {model:.2e}, hill {hill:.2e}, uniform {uniform:.2e}");
    if model < hill && model < uniform {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked examples", worked_examples),
        ("second-digit subsequence table", table_second_digit),
        ("third-digit subsequence table", table_third_digit),
        ("windowed subsequence tables", window_tables),
        ("central value and Hill tables", central_tables),
        ("oracle equivalence grid", oracle_equivalence),
        ("property suites", property_suites),
        ("long scan", long_scan),
        ("Monte Carlo agreement", monte_carlo),
        ("audit round trip", audit_round_trip),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} PASS {name} ({secs:.2}s): {detail}",
                idx + 1
            ),
            Err(detail) => {
                failures += 1;
                println!(
                    "criterion {:>2} FAIL {name} ({secs:.2}s): {detail}",
                    idx + 1
                );
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
