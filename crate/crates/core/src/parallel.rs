//! Partitioned multiplication: both operands' index lists are cut into
//! sub-arrays, every (a-part, b-part) pair becomes an independent task and
//! the partial products are summed by the controller.

use std::num::NonZeroUsize;
use std::panic::{self, AssertUnwindSafe};
use std::sync::mpsc;
use std::thread;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{multiply_indices, normalize, RawIndexBag};
use crate::baselines::{karatsuba_mul, ntt_mul, LimbNumber};
use crate::error::{Error, Result};
use crate::index_repr::{deconstruct, reconstruct_sum, IndexList};

/// Sub-arrays of a parent list, in the order `split` pops them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionSet {
    parts: Vec<Vec<u64>>,
}

impl PartitionSet {
    /// Parts as produced: each one ascending.
    pub fn parts(&self) -> &[Vec<u64>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `k` as a canonical (descending) list.
    pub fn index_list(&self, k: usize) -> IndexList {
        let mut v = self.parts[k].clone();
        v.reverse();
        IndexList::new(v).expect("split parts come from a canonical list")
    }

    /// Total number of entries across all parts.
    pub fn total_len(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }
}

/// Cuts `v` into parts of `partition_size` by repeatedly popping its tail
/// (least significant index). The last part may be shorter; no part is
/// empty.
pub fn split(v: &IndexList, partition_size: NonZeroUsize) -> PartitionSet {
    let size = partition_size.get();
    let mut input = v.as_slice().to_vec();
    let mut parts = Vec::with_capacity(input.len().div_ceil(size));
    let mut current = Vec::with_capacity(size);
    while let Some(element) = input.pop() {
        current.push(element);
        if current.len() == size {
            parts.push(std::mem::replace(&mut current, Vec::with_capacity(size)));
        }
    }
    if !current.is_empty() {
        parts.push(current);
    }
    PartitionSet { parts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TaskId {
    pub row: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelJob {
    pub a_part: IndexList,
    pub b_part: IndexList,
    pub task_id: TaskId,
}

/// Jobs for the full grid of part pairs, row-major.
pub fn build_jobs(a_parts: &PartitionSet, b_parts: &PartitionSet) -> Vec<ParallelJob> {
    let b_lists: Vec<IndexList> = (0..b_parts.len()).map(|k| b_parts.index_list(k)).collect();
    let mut jobs = Vec::with_capacity(a_parts.len() * b_parts.len());
    for row in 0..a_parts.len() {
        let a_part = a_parts.index_list(row);
        for (column, b_part) in b_lists.iter().enumerate() {
            jobs.push(ParallelJob {
                a_part: a_part.clone(),
                b_part: b_part.clone(),
                task_id: TaskId { row, column },
            });
        }
    }
    jobs
}

/// In-core multiplier each worker runs on its pair of sub-arrays.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WorkerMultiplier {
    #[default]
    PolyIndex,
    Karatsuba,
    Ntt,
}

impl WorkerMultiplier {
    pub fn multiply(self, a: &IndexList, b: &IndexList) -> Result<IndexList> {
        match self {
            WorkerMultiplier::PolyIndex => multiply_indices(a, b),
            WorkerMultiplier::Karatsuba => {
                let product = karatsuba_mul(&limbs_of(a), &limbs_of(b));
                Ok(deconstruct(&product.to_biguint()))
            }
            WorkerMultiplier::Ntt => {
                let product = ntt_mul(&limbs_of(a), &limbs_of(b))?;
                Ok(deconstruct(&product.to_biguint()))
            }
        }
    }
}

fn limbs_of(v: &IndexList) -> LimbNumber {
    LimbNumber::from_biguint(&v.to_biguint())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialProduct {
    pub task_id: TaskId,
    pub worker: usize,
    pub product: IndexList,
}

/// Worker index for each job: job `k` goes to worker `k mod worker_count`.
pub fn round_robin(job_count: usize, worker_count: NonZeroUsize) -> Vec<usize> {
    (0..job_count).map(|k| k % worker_count.get()).collect()
}

/// Runs every job exactly once on a pool of `worker_count` threads with
/// round-robin assignment. Results come back in job order regardless of
/// completion order. The first failing task (in job order) is reported.
pub fn dispatch(
    jobs: &[ParallelJob],
    worker_count: NonZeroUsize,
    multiplier: WorkerMultiplier,
) -> Result<Vec<PartialProduct>> {
    let assignment = round_robin(jobs.len(), worker_count);
    let active = worker_count.get().min(jobs.len());
    let mut slots: Vec<Option<Result<IndexList>>> = (0..jobs.len()).map(|_| None).collect();

    thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        for worker in 0..active {
            let tx = tx.clone();
            let assignment = &assignment;
            scope.spawn(move || {
                for (k, job) in jobs.iter().enumerate() {
                    if assignment[k] != worker {
                        continue;
                    }
                    let outcome = panic::catch_unwind(AssertUnwindSafe(|| {
                        multiplier.multiply(&job.a_part, &job.b_part)
                    }))
                    .unwrap_or_else(|payload| Err(Error::WorkerPanic(panic_message(&payload))));
                    if tx.send((k, outcome)).is_err() {
                        return;
                    }
                }
            });
        }
        drop(tx);
        for (k, outcome) in rx {
            slots[k] = Some(outcome);
        }
    });

    slots
        .into_iter()
        .zip(jobs)
        .zip(assignment)
        .map(|((slot, job), worker)| {
            let outcome = slot.expect("every job reports exactly once");
            match outcome {
                Ok(product) => Ok(PartialProduct {
                    task_id: job.task_id,
                    worker,
                    product,
                }),
                Err(source) => Err(Error::Worker {
                    row: job.task_id.row,
                    column: job.task_id.column,
                    source: Box::new(source),
                }),
            }
        })
        .collect()
}

fn panic_message(payload: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_owned()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "worker panicked".to_owned()
    }
}

/// How partial products are combined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Aggregation {
    /// Reconstruct each partial to an integer and sum the integers.
    #[default]
    Scalar,
    /// Concatenate all partial index lists and normalize once.
    IndexDomain,
}

#[derive(Clone, Copy, Debug)]
pub struct ParallelParams {
    pub estimated_partitions_a: NonZeroUsize,
    pub estimated_partitions_b: NonZeroUsize,
    pub max_cpu: usize,
    /// Pool size; `None` uses one thread per task up to the machine's
    /// available parallelism.
    pub workers: Option<NonZeroUsize>,
    pub multiplier: WorkerMultiplier,
    pub aggregation: Aggregation,
}

impl ParallelParams {
    pub fn new(estimated_partitions_a: usize, estimated_partitions_b: usize, max_cpu: usize) -> Self {
        ParallelParams {
            estimated_partitions_a: NonZeroUsize::new(estimated_partitions_a).unwrap_or(NonZeroUsize::MIN),
            estimated_partitions_b: NonZeroUsize::new(estimated_partitions_b).unwrap_or(NonZeroUsize::MIN),
            max_cpu,
            workers: None,
            multiplier: WorkerMultiplier::default(),
            aggregation: Aggregation::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskTrace {
    pub task_id: TaskId,
    pub a_part_len: usize,
    pub b_part_len: usize,
    pub partial_product: String,
    pub worker: usize,
}

#[derive(Clone, Debug)]
pub struct ParallelOutcome {
    pub product: BigUint,
    pub a_parts: PartitionSet,
    pub b_parts: PartitionSet,
    pub partials: Vec<PartialProduct>,
}

impl ParallelOutcome {
    pub fn task_count(&self) -> usize {
        self.partials.len()
    }

    pub fn trace(&self) -> Vec<TaskTrace> {
        self.partials
            .iter()
            .map(|p| TaskTrace {
                task_id: p.task_id,
                a_part_len: self.a_parts.parts()[p.task_id.row].len(),
                b_part_len: self.b_parts.parts()[p.task_id.column].len(),
                partial_product: p.product.to_biguint().to_str_radix(10),
                worker: p.worker,
            })
            .collect()
    }
}

/// Sub-array size for a requested partition count: `floor(len / estimate)`,
/// at least 1.
pub fn partition_size(len: usize, estimate: NonZeroUsize) -> NonZeroUsize {
    NonZeroUsize::new(len / estimate.get()).unwrap_or(NonZeroUsize::MIN)
}

pub fn parallel_multiply(
    a: &BigUint,
    b: &BigUint,
    estimated_partitions_a: usize,
    estimated_partitions_b: usize,
    max_cpu: usize,
) -> Result<BigUint> {
    let params = ParallelParams::new(estimated_partitions_a, estimated_partitions_b, max_cpu);
    Ok(parallel_multiply_with(a, b, &params)?.product)
}

pub fn parallel_multiply_with(a: &BigUint, b: &BigUint, params: &ParallelParams) -> Result<ParallelOutcome> {
    let av = deconstruct(a);
    let bv = deconstruct(b);
    let a_parts = split(&av, partition_size(av.len(), params.estimated_partitions_a));
    let b_parts = split(&bv, partition_size(bv.len(), params.estimated_partitions_b));

    let required = a_parts.len() * b_parts.len();
    if required > params.max_cpu {
        return Err(Error::MaxCpuExceeded {
            required,
            allowed: params.max_cpu,
        });
    }

    let jobs = build_jobs(&a_parts, &b_parts);
    let workers = params.workers.unwrap_or_else(|| {
        let available = thread::available_parallelism().map_or(1, NonZeroUsize::get);
        NonZeroUsize::new(available.min(jobs.len())).unwrap_or(NonZeroUsize::MIN)
    });
    let partials = dispatch(&jobs, workers, params.multiplier)?;
    let product = aggregate(&partials, params.aggregation)?;
    Ok(ParallelOutcome {
        product,
        a_parts,
        b_parts,
        partials,
    })
}

pub fn aggregate(partials: &[PartialProduct], aggregation: Aggregation) -> Result<BigUint> {
    match aggregation {
        Aggregation::Scalar => Ok(partials
            .iter()
            .map(|p| reconstruct_sum(p.product.as_slice()))
            .sum()),
        Aggregation::IndexDomain => {
            let entries = partials
                .iter()
                .flat_map(|p| p.product.iter().copied())
                .collect();
            Ok(normalize(&RawIndexBag::new(entries))?.to_biguint())
        }
    }
}
