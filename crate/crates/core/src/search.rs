//! Randomized witness search and an exhaustive oracle for tiny cases.
//!
//! Both searches keep the first partition fixed at the canonical one
//! (`{0..a-1}, {a..2a-1}, ...`): Sym(ab) and Alt(ab) are transitive on
//! regular partitions, so this loses nothing.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{count_regular_partitions, CodeSet, Params, RegularPartition, Symbol};
use crate::error::{domain, Error, Result};
use crate::formulas::{lower_bound_alt, lower_bound_sym, Group};
use crate::verifier::decide;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Randomized,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Maximum number of candidate tuples handed to the verifier.
    pub budget: u64,
    pub mode: SearchMode,
    pub workers: usize,
    pub guard: Guard,
}

/// Limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_partitions: u64,
    pub max_points: usize,
}

impl Default for Guard {
    fn default() -> Guard {
        Guard {
            max_partitions: 20_000,
            max_points: 12,
        }
    }
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig {
            seed: 0,
            budget: 1 << 20,
            mode: SearchMode::Randomized,
            workers: default_workers(),
            guard: Guard::default(),
        }
    }
}

impl SearchConfig {
    pub fn deterministic(seed: u64) -> SearchConfig {
        SearchConfig {
            seed,
            workers: 1,
            ..SearchConfig::default()
        }
    }
}

/// `PARTITION_BASE_WORKERS` if set, else the number of cores.
pub fn default_workers() -> usize {
    std::env::var("PARTITION_BASE_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w: &usize| w >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// A uniformly random `(a,b)`-regular partition.
pub fn random_regular_partition<R: Rng + ?Sized>(a: usize, b: usize, rng: &mut R) -> RegularPartition {
    let mut points: Vec<usize> = (0..a * b).collect();
    points.shuffle(rng);
    let parts = points.chunks(a).map(|c| c.to_vec()).collect();
    RegularPartition::from_parts(parts).expect("blocks of equal size")
}

/// Result of [`search_witness`].
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found {
        partitions: Vec<RegularPartition>,
        codeset: CodeSet,
        trial: u64,
    },
    Exhausted {
        candidates: u64,
    },
}

/// Candidates verified per randomized trial.
const CANDIDATES_PER_TRIAL: u64 = 64;

/// Looks for `size` partitions forming a base of `group`.
///
/// Randomized mode runs independent trials, each seeded from `(seed, trial)`,
/// and reports the lowest-numbered successful trial, so the answer does not
/// depend on the number of workers.
pub fn search_witness(a: usize, b: usize, size: usize, group: Group, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let params = Params::new(a, b)?;
    if !params.is_faithful() {
        return Err(domain("the action on (2,2)-partitions is not faithful"));
    }
    if cfg.budget == 0 {
        return Err(domain("search budget must be at least 1"));
    }
    let lower = match group {
        Group::Sym => lower_bound_sym(a, b)?,
        Group::Alt => lower_bound_alt(a, b)?,
    } as usize;
    if size < lower {
        return Err(domain(format!("no base of size {size} can exist; the lower bound is {lower}")));
    }
    match cfg.mode {
        SearchMode::Exhaustive => exhaustive_witness(a, b, size, group, cfg),
        SearchMode::Randomized => randomized_witness(a, b, size, group, cfg),
    }
}

fn randomized_witness(a: usize, b: usize, size: usize, group: Group, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let trials = cfg.budget.div_ceil(CANDIDATES_PER_TRIAL);
    let workers = cfg.workers.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| domain(format!("cannot start workers: {e}")))?;
    let batch = (workers as u64) * 4;
    let mut start = 0u64;
    let mut used = 0u64;
    while start < trials {
        let end = (start + batch).min(trials);
        let results: Vec<(u64, TrialResult)> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|t| (t, run_trial(a, b, size, group, cfg.seed, t)))
                .collect()
        });
        for (t, r) in results {
            match r {
                TrialResult::Found(codeset) => {
                    let partitions = labels_to_partitions(&codeset)?;
                    return Ok(SearchOutcome::Found {
                        partitions,
                        codeset: codeset.into_set(b)?,
                        trial: t,
                    });
                }
                TrialResult::Failed(c) => used += c,
            }
        }
        start = end;
    }
    Ok(SearchOutcome::Exhausted { candidates: used })
}

enum TrialResult {
    Found(Columns),
    Failed(u64),
}

/// Point labels, one vector per partition.
#[derive(Clone)]
struct Columns {
    cols: Vec<Vec<Symbol>>,
}

impl Columns {
    fn word(&self, p: usize) -> Vec<Symbol> {
        self.cols.iter().map(|c| c[p]).collect()
    }

    fn n(&self) -> usize {
        self.cols[0].len()
    }

    fn into_set(self, b: usize) -> Result<CodeSet> {
        let words: Vec<Vec<Symbol>> = (0..self.n()).map(|p| self.word(p)).collect();
        CodeSet::from_words(self.cols.len(), b, words)
    }
}

fn labels_to_partitions(c: &Columns) -> Result<Vec<RegularPartition>> {
    c.cols.iter().map(|col| RegularPartition::from_labels(col)).collect()
}

/// Fiber counts with the collision penalty of a group: for Sym every repeated
/// point counts, for Alt one pair of equal words is free.
struct Fibers {
    counts: HashMap<Vec<Symbol>, usize>,
    surplus: usize,
    multi: usize,
}

impl Fibers {
    fn new(c: &Columns) -> Fibers {
        let mut f = Fibers {
            counts: HashMap::new(),
            surplus: 0,
            multi: 0,
        };
        for p in 0..c.n() {
            f.add(c.word(p));
        }
        f
    }

    fn add(&mut self, w: Vec<Symbol>) {
        let e = self.counts.entry(w).or_insert(0);
        *e += 1;
        if *e >= 2 {
            self.surplus += 1;
        }
        if *e == 2 {
            self.multi += 1;
        }
    }

    fn remove(&mut self, w: &[Symbol]) {
        let e = self.counts.get_mut(w).expect("word present");
        if *e >= 2 {
            self.surplus -= 1;
        }
        if *e == 2 {
            self.multi -= 1;
        }
        *e -= 1;
        if *e == 0 {
            self.counts.remove(w);
        }
    }

    fn penalty(&self, group: Group) -> usize {
        match group {
            Group::Sym => self.surplus,
            Group::Alt => self.surplus - self.multi.min(1),
        }
    }

    fn count(&self, w: &[Symbol]) -> usize {
        self.counts.get(w).copied().unwrap_or(0)
    }
}

fn swap(c: &mut Columns, f: &mut Fibers, j: usize, p: usize, q: usize) {
    f.remove(&c.word(p));
    f.remove(&c.word(q));
    c.cols[j].swap(p, q);
    f.add(c.word(p));
    f.add(c.word(q));
}

fn run_trial(a: usize, b: usize, size: usize, group: Group, seed: u64, trial: u64) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let n = a * b;
    let canonical: Vec<Symbol> = (0..n).map(|p| (p / a) as Symbol).collect();
    let mut cols = vec![canonical];
    for _ in 1..size {
        let mut col: Vec<Symbol> = (0..n).map(|p| (p / a) as Symbol).collect();
        col.shuffle(&mut rng);
        cols.push(col);
    }
    let mut c = Columns { cols };
    if size < 2 {
        return TrialResult::Failed(0);
    }
    let mut fibers = Fibers::new(&c);

    // Repair collisions with swaps that do not increase the penalty.
    let repair_steps = 200 * n;
    let mut step = 0;
    while fibers.penalty(group) > 0 && step < repair_steps {
        step += 1;
        let bad: Vec<usize> = (0..n).filter(|&p| fibers.count(&c.word(p)) >= 2).collect();
        let p = bad[rng.gen_range(0..bad.len())];
        let j = rng.gen_range(1..size);
        let q = rng.gen_range(0..n);
        if c.cols[j][p] == c.cols[j][q] {
            continue;
        }
        let before = fibers.penalty(group);
        swap(&mut c, &mut fibers, j, p, q);
        if fibers.penalty(group) > before && rng.gen_range(0..20) != 0 {
            swap(&mut c, &mut fibers, j, p, q);
        }
    }
    if fibers.penalty(group) > 0 {
        return TrialResult::Failed(0);
    }

    // Walk through collision-free states, verifying each.
    let mut candidates = 0;
    loop {
        candidates += 1;
        let set = match c.clone().into_set(b) {
            Ok(s) => s,
            Err(_) => return TrialResult::Failed(candidates),
        };
        if matches!(decide(&set, group), Ok(v) if v.is_base) {
            return TrialResult::Found(c);
        }
        if candidates >= CANDIDATES_PER_TRIAL {
            return TrialResult::Failed(candidates);
        }
        let mut moved = false;
        for _ in 0..100 * n {
            let j = rng.gen_range(1..size);
            let p = rng.gen_range(0..n);
            let q = rng.gen_range(0..n);
            if c.cols[j][p] == c.cols[j][q] {
                continue;
            }
            swap(&mut c, &mut fibers, j, p, q);
            if fibers.penalty(group) == 0 {
                moved = true;
                break;
            }
            swap(&mut c, &mut fibers, j, p, q);
        }
        if !moved {
            return TrialResult::Failed(candidates);
        }
    }
}

/// Every `(a,b)`-regular partition of `0..ab` as canonical label vectors.
pub fn all_regular_partitions(a: usize, b: usize, guard: &Guard) -> Result<Vec<Vec<u8>>> {
    let n = a * b;
    if n > guard.max_points {
        return Err(Error::Guard(format!(
            "{n} points exceeds the exhaustive limit of {}",
            guard.max_points
        )));
    }
    let count = count_regular_partitions(a, b)?;
    if count > guard.max_partitions.into() {
        return Err(Error::Guard(format!(
            "{count} regular partitions exceeds the exhaustive limit of {}",
            guard.max_partitions
        )));
    }
    let mut out = Vec::new();
    let mut labels = vec![0u8; n];
    let mut sizes = vec![0usize; b];
    fill(0, 0, a, b, &mut labels, &mut sizes, &mut out);
    Ok(out)
}

fn fill(p: usize, used: usize, a: usize, b: usize, labels: &mut [u8], sizes: &mut [usize], out: &mut Vec<Vec<u8>>) {
    if p == labels.len() {
        out.push(labels.to_vec());
        return;
    }
    for l in 0..b.min(used + 1) {
        if sizes[l] == a {
            continue;
        }
        labels[p] = l as u8;
        sizes[l] += 1;
        fill(p + 1, used.max(l + 1), a, b, labels, sizes, out);
        sizes[l] -= 1;
    }
}

fn tuple_is_base(all: &[Vec<u8>], tuple: &[usize], b: usize, group: Group) -> bool {
    let n = all[0].len();
    let words: Vec<Vec<Symbol>> = (0..n)
        .map(|p| tuple.iter().map(|&i| all[i][p] as Symbol).collect())
        .collect();
    let set = CodeSet::from_words(tuple.len(), b, words).expect("labels are in range");
    decide(&set, group).map(|v| v.is_base).unwrap_or(false)
}

/// Calls `visit` on every increasing `k`-tuple drawn from `from..total`,
/// stopping at the first `true`.
fn any_combination(from: usize, total: usize, k: usize, prefix: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == 0 {
        return visit(prefix);
    }
    for i in from..total {
        if total - i < k {
            break;
        }
        prefix.push(i);
        if any_combination(i + 1, total, k - 1, prefix, visit) {
            prefix.pop();
            return true;
        }
        prefix.pop();
    }
    false
}

/// First base of exactly `size` partitions in enumeration order, if any.
fn exhaustive_tuple(a: usize, b: usize, size: usize, group: Group, guard: &Guard) -> Result<Option<Vec<usize>>> {
    let all = all_regular_partitions(a, b, guard)?;
    // Canonical labels put the partition `p -> p / a` first.
    let first = 0usize;
    debug_assert!(all[first].iter().enumerate().all(|(p, &l)| l as usize == p / a));
    if size == 0 {
        return Ok(None);
    }
    let total = all.len();
    let found: Option<Vec<usize>> = (first + 1..total.max(first + 1))
        .into_par_iter()
        .filter_map(|second| {
            if size == 1 {
                return None;
            }
            let mut hit = None;
            let mut prefix = vec![first, second];
            any_combination(second + 1, total, size - 2, &mut prefix, &mut |t| {
                if tuple_is_base(&all, t, b, group) {
                    hit = Some(t.to_vec());
                    true
                } else {
                    false
                }
            });
            hit
        })
        .min();
    if size == 1 && tuple_is_base(&all, &[first], b, group) {
        return Ok(Some(vec![first]));
    }
    Ok(found)
}

fn exhaustive_witness(a: usize, b: usize, size: usize, group: Group, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let all = all_regular_partitions(a, b, &cfg.guard)?;
    match exhaustive_tuple(a, b, size, group, &cfg.guard)? {
        Some(t) => {
            let partitions: Vec<RegularPartition> = t
                .iter()
                .map(|&i| RegularPartition::from_labels(&all[i]))
                .collect::<Result<_>>()?;
            let codeset = crate::domain::partitions_to_codeset(&partitions)?;
            Ok(SearchOutcome::Found {
                partitions,
                codeset,
                trial: 0,
            })
        }
        None => Ok(SearchOutcome::Exhausted {
            candidates: all.len() as u64,
        }),
    }
}

/// Smallest `s <= max_size` for which some `s` partitions form a base, by
/// exhausting all tuples; `None` when there is none up to `max_size`.
pub fn minimal_base_size_bruteforce(a: usize, b: usize, group: Group, max_size: usize) -> Result<Option<usize>> {
    minimal_base_size_guarded(a, b, group, max_size, &Guard::default())
}

pub fn minimal_base_size_guarded(a: usize, b: usize, group: Group, max_size: usize, guard: &Guard) -> Result<Option<usize>> {
    Params::new(a, b)?;
    for s in 1..=max_size {
        if exhaustive_tuple(a, b, s, group, guard)?.is_some() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}
