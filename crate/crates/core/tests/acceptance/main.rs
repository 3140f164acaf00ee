//! Acceptance gate. Prints one PASS/FAIL line per criterion, then fails if
//! any line failed. Run with `cargo test -p indexradix --test acceptance`.

#[path = "../common/mod.rs"]
mod common;
mod vectors;

use std::io::Write;
use std::num::NonZeroUsize;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{big, big_or_zero, dec};
use indexradix::bench::{crossover_report, read_csv, run_bench, write_csv, Algorithm, BenchConfig, BenchRecord, CSV_HEADER};
use indexradix::parallel::{partition_size, Aggregation, ParallelParams};
use indexradix::{
    add, concat_add, dec2binary, deconstruct, karatsuba_mul, multiply_indices, multiply_integers, normalize,
    ntt_mul, parallel_multiply, parallel_multiply_with, reconstruct_strings, reconstruct_sum, schoolbook_mul,
    simplify_reference, split, IndexList, LimbNumber, RawIndexBag,
};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use vectors::*;

const PROPERTY_CASES: u32 = 10_000;
const MULTIPLIER_CASES: u32 = 1_000;
const PARALLEL_CASES: u32 = 1_000;
const ROUND_TRIP_MAX_BITS: u64 = 4096;
const MULTIPLIER_MAX_BITS: u64 = 8192;
const PARALLEL_MAX_BITS: u64 = 2048;
/// Partition requests are drawn from `1..=min(popcount, this)`.
const PARALLEL_MAX_ESTIMATE: usize = 24;
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);
const BENCH_BUDGET: Duration = Duration::from_secs(600);
const SMALL_GRID_MAX_BITS: u64 = 64;

const RSA100: &str = concat!(
    "15226050279225333605356183781326374297180681149613",
    "80688657908494580122963258952897654000350692006139",
);
const RSA100_P: &str = "37975227936943673922808872755445627854565536638199";
const RSA100_Q: &str = "40094690950920881030683735292761468389214899724061";
const RSA100_FACTOR_SUM: &str = "78069918887864554953492608048207096243780436362260";
const RSA220_P: &str = concat!(
    "686365641226756627438237149928843780013084223997916484",
    "46212449933215410614414642667938213644208420192054999687",
);
const RSA220_Q: &str = concat!(
    "329290743948634981204930154921293529191645519653623395",
    "24626860511692903493094652463337824866390738191765712603",
);
const RSA220: &str = concat!(
    "2260138526203405784941654048610197513508038915719776718",
    "3211977681094456418179666766085931213065825772506315628",
    "8667697044807000181114971186300211248792819948748206607",
    "0131066586646083327982803560379205391980139946496955261",
);
const RSA220_FIRST_TASK: [u64; 16] = [26, 25, 24, 20, 19, 18, 13, 12, 9, 8, 6, 5, 4, 3, 2, 0];

type Outcome = Result<String, String>;

struct Gate {
    results: Vec<(String, bool)>,
}

impl Gate {
    fn check(&mut self, id: &str, what: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|payload| Err(format!("panicked: {}", panic_text(&payload))));
        let elapsed = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        let mut line = format!("{} {id:<4} {what} [{elapsed:.2}s]", if pass { "PASS" } else { "FAIL" });
        if !detail.is_empty() {
            line.push_str(" :: ");
            line.push_str(&detail);
        }
        // written to the handle directly so the harness does not capture it
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
        self.results.push((line, pass));
    }
}

fn panic_text(payload: &Box<dyn std::any::Any + Send>) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| (*s).to_owned())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    runner(cases)
        .run(&strategy, test)
        .map(|()| format!("{cases} cases"))
        .map_err(|e| e.to_string())
}

fn list(indices: &[u64]) -> IndexList {
    IndexList::new(indices.to_vec()).expect("reference list is canonical")
}

fn worked_examples(gate: &mut Gate) {
    gate.check("W1", "add(17, 21) = 38 via [4,0] + [4,2,0] -> [5,2,1]", || {
        let (a, b) = (deconstruct(&17u32.into()), deconstruct(&21u32.into()));
        ensure(a.as_slice() == [4, 0] && b.as_slice() == [4, 2, 0], || format!("{a} {b}"))?;
        let sum = add(&a, &b).map_err(|e| e.to_string())?;
        ensure(sum.as_slice() == [5, 2, 1], || sum.to_string())?;
        ensure(sum.to_biguint() == 38u32.into(), || "value".into())?;
        Ok(String::new())
    });

    gate.check("W2", "deconstruct(RSA-100) equals the reference list", || {
        let v = deconstruct(&dec(RSA100));
        ensure(v.as_slice() == RSA100_INDICES, || format!("got {} entries: {v}", v.len()))?;
        Ok(format!("{} entries", v.len()))
    });

    gate.check("W3", "deconstruct of both RSA-100 factors equals the reference lists", || {
        let (p, q) = (deconstruct(&dec(RSA100_P)), deconstruct(&dec(RSA100_Q)));
        ensure(p.as_slice() == RSA100_P_INDICES, || format!("p: {p}"))?;
        ensure(q.as_slice() == RSA100_Q_INDICES, || format!("q: {q}"))?;
        Ok(format!("{} + {} entries", p.len(), q.len()))
    });

    gate.check("W4", "factor sum: concatenation, simplified list and value", || {
        let (p, q) = (list(&RSA100_P_INDICES), list(&RSA100_Q_INDICES));
        let bag = concat_add(&p, &q);
        ensure(bag.entries() == RSA100_CONCAT, || "concatenation differs".into())?;
        let simplified = normalize(&bag).map_err(|e| e.to_string())?;
        ensure(simplified.as_slice() == RSA100_FACTOR_SUM_INDICES, || format!("normalize: {simplified}"))?;
        let reference = simplify_reference(&bag).map_err(|e| e.to_string())?;
        ensure(reference == simplified, || format!("reference simplifier: {reference}"))?;
        let sum = add(&p, &q).map_err(|e| e.to_string())?;
        ensure(reconstruct_sum(sum.as_slice()) == dec(RSA100_FACTOR_SUM), || sum.to_biguint().to_string())?;
        ensure(reconstruct_strings(&sum) == dec(RSA100_FACTOR_SUM), || "string reconstruction".into())?;
        Ok(format!("{} raw -> {} entries", bag.len(), simplified.len()))
    });

    gate.check("W5", "multiply_integers(RSA-100 factors) = RSA-100", || {
        let product = multiply_integers(&dec(RSA100_P), &dec(RSA100_Q)).map_err(|e| e.to_string())?;
        ensure(product == dec(RSA100), || product.to_string())?;
        Ok(String::new())
    });

    gate.check("W6", "RSA-220 split with size 9 reproduces the reference partitions", || {
        let (a, b) = (list(&RSA220_P_INDICES), list(&RSA220_Q_INDICES));
        ensure(deconstruct(&dec(RSA220_P)) == a, || "prime a index list".into())?;
        ensure(deconstruct(&dec(RSA220_Q)) == b, || "prime b index list".into())?;
        let twenty = NonZeroUsize::new(20).unwrap();
        let sizes = (partition_size(a.len(), twenty).get(), partition_size(b.len(), twenty).get());
        ensure(sizes == (9, 9), || format!("partition sizes {sizes:?}"))?;
        let nine = NonZeroUsize::new(9).unwrap();
        let (pa, pb) = (split(&a, nine), split(&b, nine));
        ensure(pa.parts().iter().map(Vec::as_slice).eq(RSA220_P_PARTS), || format!("a parts {:?}", pa.parts()))?;
        ensure(pb.parts().iter().map(Vec::as_slice).eq(RSA220_Q_PARTS), || format!("b parts {:?}", pb.parts()))?;
        Ok(format!("{} x {} parts", pa.len(), pb.len()))
    });

    gate.check("W7", "first RSA-220 sub-product = 119288701", || {
        let nine = NonZeroUsize::new(9).unwrap();
        let pa = split(&list(&RSA220_P_INDICES), nine);
        let pb = split(&list(&RSA220_Q_INDICES), nine);
        let product = multiply_indices(&pa.index_list(0), &pb.index_list(0)).map_err(|e| e.to_string())?;
        ensure(product.as_slice() == RSA220_FIRST_TASK, || product.to_string())?;
        ensure(product.to_biguint() == 119_288_701u32.into(), || product.to_biguint().to_string())?;
        Ok(String::new())
    });

    gate.check("W8", "parallel_multiply(a, b, 20, 20, 500) = RSA-220 with 441 tasks", || {
        let (a, b) = (dec(RSA220_P), dec(RSA220_Q));
        let product = parallel_multiply(&a, &b, 20, 20, 500).map_err(|e| e.to_string())?;
        ensure(product == dec(RSA220), || product.to_string())?;
        let outcome = parallel_multiply_with(&a, &b, &ParallelParams::new(20, 20, 500)).map_err(|e| e.to_string())?;
        ensure(outcome.task_count() == 441, || format!("{} tasks", outcome.task_count()))?;
        ensure(outcome.product == product, || "traced run differs".into())?;
        Ok("441 tasks".into())
    });

    gate.check("W9", "dec2binary(\"0.390625\", 64) = [-2,-3,-6]", || {
        let v = dec2binary("0.390625", 64).map_err(|e| e.to_string())?;
        ensure(v.indices() == [-2, -3, -6], || format!("{:?}", v.indices()))?;
        Ok(String::new())
    });
}

fn property_suites(gate: &mut Gate) {
    let start = Instant::now();

    gate.check("P1", "round trip through both reconstructors, bits 1..4096", || {
        run_property(PROPERTY_CASES, big(ROUND_TRIP_MAX_BITS), |n| {
            let v = deconstruct(&n);
            prop_assert_eq!(reconstruct_sum(v.as_slice()), n.clone());
            prop_assert_eq!(reconstruct_strings(&v), n);
            Ok(())
        })
    });

    gate.check("P2", "deconstruct length equals popcount, strictly decreasing", || {
        run_property(PROPERTY_CASES, big_or_zero(ROUND_TRIP_MAX_BITS), |n| {
            let v = deconstruct(&n);
            prop_assert_eq!(v.len() as u64, n.count_ones());
            prop_assert!(v.as_slice().windows(2).all(|w| w[0] > w[1]));
            Ok(())
        })
    });

    gate.check("P3", "add and multiply agree with big-integer arithmetic", || {
        let pair = (big_or_zero(ROUND_TRIP_MAX_BITS), big_or_zero(ROUND_TRIP_MAX_BITS));
        run_property(PROPERTY_CASES, pair, |(a, b)| {
            let (x, y) = (deconstruct(&a), deconstruct(&b));
            let sum = add(&x, &y).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(reconstruct_sum(sum.as_slice()), &a + &b);
            let product = multiply_indices(&x, &y).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(reconstruct_sum(product.as_slice()), &a * &b);
            Ok(())
        })
    });

    gate.check("P4", "poly index, schoolbook, Karatsuba and NTT agree up to 8192 bits", || {
        let pair = (big(MULTIPLIER_MAX_BITS), big(MULTIPLIER_MAX_BITS));
        run_property(MULTIPLIER_CASES, pair, |(a, b)| {
            let expected = &a * &b;
            let poly = multiply_integers(&a, &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&poly, &expected);
            let (x, y) = (LimbNumber::from_biguint(&a), LimbNumber::from_biguint(&b));
            prop_assert_eq!(schoolbook_mul(&x, &y).to_biguint(), expected.clone());
            prop_assert_eq!(karatsuba_mul(&x, &y).to_biguint(), expected.clone());
            let ntt = ntt_mul(&x, &y).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(ntt.to_biguint(), expected);
            Ok(())
        })
    });

    gate.check("P5", "parallel_multiply exact and invariant under pool size and aggregation", || {
        let tuple = (
            big(PARALLEL_MAX_BITS),
            big(PARALLEL_MAX_BITS),
            any::<Index>(),
            any::<Index>(),
            any::<Index>(),
        );
        run_property(PARALLEL_CASES, tuple, |(a, b, ia, ib, ipool)| {
            let expected = multiply_integers(&a, &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let pa = 1 + ia.index((a.count_ones() as usize).min(PARALLEL_MAX_ESTIMATE));
            let pb = 1 + ib.index((b.count_ones() as usize).min(PARALLEL_MAX_ESTIMATE));
            let base = ParallelParams::new(pa, pb, usize::MAX);
            let run = |params: &ParallelParams| {
                parallel_multiply_with(&a, &b, params).map_err(|e| TestCaseError::fail(e.to_string()))
            };
            let first = run(&base)?;
            let tasks = first.task_count();
            prop_assert_eq!(&first.product, &expected);
            let sampled = 1 + ipool.index(tasks);
            for pool in [1, 2, 8, tasks, sampled] {
                let params = ParallelParams {
                    workers: NonZeroUsize::new(pool),
                    ..base
                };
                prop_assert_eq!(&run(&params)?.product, &expected, "pool {}", pool);
            }
            let indexed = ParallelParams {
                aggregation: Aggregation::IndexDomain,
                ..base
            };
            prop_assert_eq!(&run(&indexed)?.product, &expected);
            Ok(())
        })
    });

    gate.check("P6", "normalize idempotent on canonical lists and order-insensitive", || {
        let bag = prop::collection::vec(0u64..512, 0..300).prop_flat_map(|entries| {
            let shuffled = Just(entries.clone()).prop_shuffle();
            (Just(entries), shuffled)
        });
        run_property(PROPERTY_CASES, bag, |(entries, shuffled)| {
            let raw = RawIndexBag::new(entries);
            let v = normalize(&raw).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let again = normalize(&RawIndexBag::from(&v)).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&again, &v);
            let permuted = normalize(&RawIndexBag::new(shuffled)).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(&permuted, &v);
            Ok(())
        })
    });

    let elapsed = start.elapsed();
    gate.check("P7", "property suites finish within 60 s", || {
        ensure(elapsed < PROPERTY_BUDGET, || format!("{:.1}s", elapsed.as_secs_f64()))?;
        Ok(format!("{:.1}s", elapsed.as_secs_f64()))
    });
}

fn benchmark(gate: &mut Gate) {
    let cfg = BenchConfig::default();
    let start = Instant::now();
    let run = run_bench(&cfg);
    let elapsed = start.elapsed();
    let records: Vec<BenchRecord> = run.as_ref().cloned().unwrap_or_default();

    gate.check("B1", "bench over 2^2..2^14 with 3 algorithms finishes within 10 min", || {
        let expected_grid: Vec<u64> = (2..=14).map(|k| 1u64 << k).collect();
        ensure(cfg.bit_sizes == expected_grid, || format!("grid {:?}", cfg.bit_sizes))?;
        ensure(cfg.algorithms.len() == 3, || format!("{:?}", cfg.algorithms))?;
        run.as_ref().map_err(|e| e.to_string())?;
        ensure(elapsed < BENCH_BUDGET, || format!("{:.1}s", elapsed.as_secs_f64()))?;
        Ok(format!("{:.1}s", elapsed.as_secs_f64()))
    });

    gate.check("B2", "bench CSV well formed with every correctness flag true", || {
        ensure(!records.is_empty(), || "no records".into())?;
        let mut buf = Vec::new();
        write_csv(&records, &mut buf).map_err(|e| e.to_string())?;
        let text = String::from_utf8(buf).map_err(|e| e.to_string())?;
        ensure(!text.contains('\r'), || "CR in output".into())?;
        ensure(text.lines().next() == Some(CSV_HEADER), || "header".into())?;
        ensure(text.lines().count() == 1 + 13 * 3, || format!("{} lines", text.lines().count()))?;
        let parsed = read_csv(text.as_bytes()).map_err(|e| e.to_string())?;
        ensure(parsed == records, || "CSV round trip differs".into())?;
        ensure(records.iter().all(|r| r.correct), || "a correctness flag is false".into())?;
        Ok(format!("{} rows", records.len()))
    });

    gate.check("B3", "crossover report produced", || {
        let report = crossover_report(&records).map_err(|e| e.to_string())?;
        ensure(report.crossovers.len() == 6, || format!("{} pairs", report.crossovers.len()))?;
        ensure(report.rankings.len() == 13, || format!("{} rankings", report.rankings.len()))?;
        let summary: Vec<String> = report
            .crossovers
            .iter()
            .filter(|c| c.first == Algorithm::PolyIndex)
            .map(|c| match (c.faster_throughout, c.crossover_bits) {
                (true, _) => format!("{} faster throughout", c.second),
                (false, Some(bits)) => format!("{} overtakes at {bits} bits", c.second),
                (false, None) => format!("{} never overtakes", c.second),
            })
            .collect();
        Ok(summary.join(", "))
    });

    gate.check("B4", "poly index fastest at every grid size up to 2^6 bits", || {
        let mut notes = Vec::new();
        let mut ok = !records.is_empty();
        for bits in cfg.bit_sizes.iter().copied().filter(|&b| b <= SMALL_GRID_MAX_BITS) {
            let at: Vec<&BenchRecord> = records.iter().filter(|r| r.bits == bits).collect();
            let poly = at.iter().find(|r| r.algorithm == Algorithm::PolyIndex).map(|r| r.median_seconds);
            let best_other = at
                .iter()
                .filter(|r| r.algorithm != Algorithm::PolyIndex)
                .min_by(|x, y| x.median_seconds.total_cmp(&y.median_seconds));
            match (poly, best_other) {
                (Some(p), Some(o)) => {
                    ok &= p < o.median_seconds;
                    notes.push(format!("{bits}b poly/{} = {:.2}", o.algorithm, p / o.median_seconds));
                }
                _ => {
                    ok = false;
                    notes.push(format!("{bits}b missing"));
                }
            }
        }
        let detail = notes.join(", ");
        if ok {
            Ok(detail)
        } else {
            Err(detail)
        }
    });
}

#[test]
fn acceptance_gate() {
    let mut gate = Gate { results: Vec::new() };
    let _ = writeln!(std::io::stdout());
    worked_examples(&mut gate);
    property_suites(&mut gate);
    benchmark(&mut gate);

    let failed: Vec<&str> = gate.results.iter().filter(|(_, pass)| !pass).map(|(l, _)| l.as_str()).collect();
    let passed = gate.results.len() - failed.len();
    let _ = writeln!(std::io::stdout(), "acceptance: {passed}/{} criteria passed", gate.results.len());
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}

