//! Timing harness comparing the multipliers across operand sizes.
//!
//! Each (algorithm, bits) point multiplies one deterministic operand pair,
//! checks the product against schoolbook multiplication, then records the
//! median per-call time over the configured repetitions.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::multiply_indices;
use crate::baselines::{karatsuba_mul_with, ntt_mul, schoolbook_mul, LimbNumber, DEFAULT_KARATSUBA_CUTOFF};
use crate::error::{Error, Result};
use crate::index_repr::{deconstruct, IndexList};

pub const CSV_HEADER: &str = "algorithm,bits,median_seconds,repetitions,correct,seed,includes_conversion";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    PolyIndex,
    Karatsuba,
    Ntt,
    Schoolbook,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::PolyIndex,
        Algorithm::Karatsuba,
        Algorithm::Ntt,
        Algorithm::Schoolbook,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PolyIndex => "poly_index",
            Algorithm::Karatsuba => "karatsuba",
            Algorithm::Ntt => "ntt",
            Algorithm::Schoolbook => "schoolbook",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::BenchConfig(format!("unknown algorithm {s:?}")))
    }
}

/// Named size grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `2^2 ..= 2^14` bits.
    Ci,
    /// `2^2 ..= 2^18` bits.
    Long,
}

impl Profile {
    pub fn bit_sizes(self) -> Vec<u64> {
        let top = match self {
            Profile::Ci => 14,
            Profile::Long => 18,
        };
        (2..=top).map(|k| 1u64 << k).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub bit_sizes: Vec<u64>,
    pub repetitions: usize,
    pub algorithms: Vec<Algorithm>,
    pub rng_seed: u64,
    pub output: Option<PathBuf>,
    /// Time index-list conversion (and limb conversion for the coefficient
    /// algorithms) together with the multiplication.
    pub include_conversion: bool,
    pub karatsuba_cutoff: usize,
    /// Minimum wall time per repetition; fast calls are batched up to it.
    pub min_sample_seconds: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            bit_sizes: Profile::Ci.bit_sizes(),
            repetitions: 3,
            algorithms: vec![Algorithm::PolyIndex, Algorithm::Karatsuba, Algorithm::Ntt],
            rng_seed: 42,
            output: None,
            include_conversion: false,
            karatsuba_cutoff: DEFAULT_KARATSUBA_CUTOFF,
            min_sample_seconds: 0.002,
        }
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: BenchConfig = toml::from_str(text).map_err(|e| Error::BenchConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bit_sizes.contains(&0) {
            return Err(Error::BenchConfig("bit sizes must be positive".into()));
        }
        if self.bit_sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BenchConfig("bit sizes must be strictly ascending".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::BenchConfig("repetitions must be at least 1".into()));
        }
        if self.karatsuba_cutoff == 0 {
            return Err(Error::BenchConfig("karatsuba cutoff must be at least 1".into()));
        }
        if self.min_sample_seconds.is_nan() || self.min_sample_seconds < 0.0 {
            return Err(Error::BenchConfig("min_sample_seconds must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub bits: u64,
    pub median_seconds: f64,
    pub repetitions: usize,
    pub correct: bool,
    pub seed: u64,
    pub includes_conversion: bool,
}

/// Uniform random integer of exactly `bits` bits (top bit forced),
/// determined by `(bits, seed)`.
pub fn gen_operand(bits: u64, seed: u64) -> BigUint {
    assert!(bits >= 1, "operands need at least one bit");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(bits);
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    let top_bits = bits - (words as u64 - 1) * 32;
    let last = digits.last_mut().expect("at least one word");
    if top_bits < 32 {
        *last &= (1u32 << top_bits) - 1;
    }
    *last |= 1u32 << (top_bits - 1);
    BigUint::new(digits)
}

/// The operand pair used at `bits` for a run seeded with `seed`.
pub fn operand_pair(bits: u64, seed: u64) -> (BigUint, BigUint) {
    (
        gen_operand(bits, seed),
        gen_operand(bits, seed.wrapping_add(0x9E37_79B9_7F4A_7C15)),
    )
}

enum Prepared {
    Indices(IndexList, IndexList),
    Limbs(LimbNumber, LimbNumber),
}

fn multiply_once(algorithm: Algorithm, cfg: &BenchConfig, a: &BigUint, b: &BigUint, prepared: &Prepared) -> Result<BigUint> {
    if cfg.include_conversion {
        return Ok(match algorithm {
            Algorithm::PolyIndex => multiply_indices(&deconstruct(a), &deconstruct(b))?.to_biguint(),
            _ => run_limbs(algorithm, cfg, &LimbNumber::from_biguint(a), &LimbNumber::from_biguint(b))?.to_biguint(),
        });
    }
    // Without conversion the result stays in the algorithm's own form; the
    // caller converts once, outside the timed region, for checking.
    match prepared {
        Prepared::Indices(x, y) => {
            let product = multiply_indices(x, y)?;
            black_box(&product);
            Ok(BigUint::default())
        }
        Prepared::Limbs(x, y) => {
            black_box(run_limbs(algorithm, cfg, x, y)?);
            Ok(BigUint::default())
        }
    }
}

fn run_limbs(algorithm: Algorithm, cfg: &BenchConfig, a: &LimbNumber, b: &LimbNumber) -> Result<LimbNumber> {
    match algorithm {
        Algorithm::Karatsuba => Ok(karatsuba_mul_with(a, b, cfg.karatsuba_cutoff)),
        Algorithm::Ntt => ntt_mul(a, b),
        Algorithm::Schoolbook => Ok(schoolbook_mul(a, b)),
        Algorithm::PolyIndex => unreachable!("poly_index does not use limbs"),
    }
}

fn checked_product(algorithm: Algorithm, cfg: &BenchConfig, prepared: &Prepared) -> Result<BigUint> {
    Ok(match prepared {
        Prepared::Indices(x, y) => multiply_indices(x, y)?.to_biguint(),
        Prepared::Limbs(x, y) => run_limbs(algorithm, cfg, x, y)?.to_biguint(),
    })
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        (samples[mid - 1] + samples[mid]) / 2.0
    }
}

fn time_point(algorithm: Algorithm, cfg: &BenchConfig, a: &BigUint, b: &BigUint, prepared: &Prepared) -> Result<f64> {
    // warm-up, also used to size the batch
    let start = Instant::now();
    black_box(multiply_once(algorithm, cfg, a, b, prepared)?);
    let single = start.elapsed().max(Duration::from_nanos(1));
    let target = Duration::from_secs_f64(cfg.min_sample_seconds);
    let batch = (target.as_nanos() / single.as_nanos()).clamp(1, 1_000_000) as u32;

    let mut samples = Vec::with_capacity(cfg.repetitions);
    for _ in 0..cfg.repetitions {
        let start = Instant::now();
        for _ in 0..batch {
            black_box(multiply_once(algorithm, cfg, black_box(a), black_box(b), prepared)?);
        }
        let per_call = start.elapsed().as_secs_f64() / f64::from(batch);
        samples.push(per_call.max(f64::MIN_POSITIVE));
    }
    Ok(median(&mut samples))
}

/// Runs the grid and returns one record per (algorithm, bits), in grid
/// order. A wrong product aborts the run.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(cfg.bit_sizes.len() * cfg.algorithms.len());
    for &bits in &cfg.bit_sizes {
        let (a, b) = operand_pair(bits, cfg.rng_seed);
        let expected = schoolbook_mul(&LimbNumber::from_biguint(&a), &LimbNumber::from_biguint(&b)).to_biguint();
        for &algorithm in &cfg.algorithms {
            let prepared = match algorithm {
                Algorithm::PolyIndex => Prepared::Indices(deconstruct(&a), deconstruct(&b)),
                _ => Prepared::Limbs(LimbNumber::from_biguint(&a), LimbNumber::from_biguint(&b)),
            };
            let product = if cfg.include_conversion {
                multiply_once(algorithm, cfg, &a, &b, &prepared)?
            } else {
                checked_product(algorithm, cfg, &prepared)?
            };
            if product != expected {
                return Err(Error::Correctness {
                    algorithm: algorithm.to_string(),
                    bits,
                    seed: cfg.rng_seed,
                });
            }
            let median_seconds = time_point(algorithm, cfg, &a, &b, &prepared)?;
            records.push(BenchRecord {
                algorithm,
                bits,
                median_seconds,
                repetitions: cfg.repetitions,
                correct: true,
                seed: cfg.rng_seed,
                includes_conversion: cfg.include_conversion,
            });
        }
    }
    Ok(records)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for record in records {
        writer.serialize(record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[BenchRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::BenchConfig(format!("unexpected CSV header {:?}", header.join(","))));
    }
    reader
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossover {
    /// Algorithm being overtaken.
    pub first: Algorithm,
    /// Algorithm that becomes faster.
    pub second: Algorithm,
    /// Smallest shared size from which `second` is faster at every larger
    /// shared size; `None` when that never happens in range.
    pub crossover_bits: Option<u64>,
    /// `second` was already faster at the smallest shared size.
    pub faster_throughout: bool,
    pub shared_sizes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ranking {
    pub bits: u64,
    /// Fastest first.
    pub order: Vec<Algorithm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub crossovers: Vec<Crossover>,
    pub rankings: Vec<Ranking>,
    pub reference_note: &'static str,
}

const REFERENCE_NOTE: &str = "Reference runs of interpreted implementations on a \
4-core desktop put the NTT crossover against poly_index near 2^36,000-2^40,000 bits and the \
Karatsuba crossover near 2^200,000 bits. Absolute crossovers depend on implementation and \
hardware and are not expected to match.";

/// For every ordered algorithm pair, where the second overtakes the first
/// for good.
pub fn crossover_report(records: &[BenchRecord]) -> Result<CrossoverReport> {
    let mut timings: BTreeMap<Algorithm, BTreeMap<u64, f64>> = BTreeMap::new();
    for r in records {
        timings.entry(r.algorithm).or_default().insert(r.bits, r.median_seconds);
    }
    if timings.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 algorithms, found {}",
            timings.len()
        )));
    }

    let mut crossovers = Vec::new();
    for (&first, first_times) in &timings {
        for (&second, second_times) in &timings {
            if first == second {
                continue;
            }
            let shared: Vec<(u64, f64, f64)> = first_times
                .iter()
                .filter_map(|(bits, &t1)| second_times.get(bits).map(|&t2| (*bits, t1, t2)))
                .collect();
            if shared.len() < 2 {
                return Err(Error::InsufficientData(format!(
                    "{first} and {second} share {} grid sizes, need at least 2",
                    shared.len()
                )));
            }
            let mut from = None;
            for &(bits, t1, t2) in shared.iter().rev() {
                if t2 < t1 {
                    from = Some(bits);
                } else {
                    break;
                }
            }
            crossovers.push(Crossover {
                first,
                second,
                crossover_bits: from,
                faster_throughout: from == Some(shared[0].0),
                shared_sizes: shared.len(),
            });
        }
    }

    let mut by_bits: BTreeMap<u64, Vec<(f64, Algorithm)>> = BTreeMap::new();
    for r in records {
        by_bits.entry(r.bits).or_default().push((r.median_seconds, r.algorithm));
    }
    let rankings = by_bits
        .into_iter()
        .map(|(bits, mut entries)| {
            entries.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            Ranking {
                bits,
                order: entries.into_iter().map(|(_, a)| a).collect(),
            }
        })
        .collect();

    Ok(CrossoverReport {
        crossovers,
        rankings,
        reference_note: REFERENCE_NOTE,
    })
}

impl CrossoverReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("crossovers (second overtakes first):\n");
        for c in &self.crossovers {
            let when = match c.crossover_bits {
                None => "none in range".to_owned(),
                Some(bits) if c.faster_throughout => format!("faster throughout (from {bits} bits)"),
                Some(bits) => format!("{bits} bits"),
            };
            let _ = writeln!(out, "  {:<11} -> {:<11} {when}", c.first.name(), c.second.name());
        }
        out.push_str("ranking (fastest first):\n");
        for r in &self.rankings {
            let order: Vec<&str> = r.order.iter().map(|a| a.name()).collect();
            let _ = writeln!(out, "  {:>7} bits: {}", r.bits, order.join(" < "));
        }
        let _ = writeln!(out, "note: {}", self.reference_note);
        out
    }

    pub fn crossover(&self, first: Algorithm, second: Algorithm) -> Option<&Crossover> {
        self.crossovers.iter().find(|c| c.first == first && c.second == second)
    }
}
