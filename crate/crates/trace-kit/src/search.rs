//! Exact desk-scale computation of the arrowing relation and of
//! `μ(n, δ) = min{|𝓕| : 𝓕 hereditary on [n], δ(𝓕) ≥ δ}`, which pins
//! `m(n, s) = μ(n, s+1) − 1`.
//!
//! Two engines live here. For `n ≤ 6` the full lattice of hereditary
//! families fits in a `u64` bitmap per family (one bit per subset of `[n]`)
//! and questions are settled by enumerating down-closed bitmaps. For
//! `μ(n, δ)` up to `n = 14` a branch-and-bound search walks antichains of
//! maximal sets in colex order, pruning with the weight inequality
//! `|𝓕| − 1 = Σ_x ω(x) ≥ Σ_x W(max(δ, d(x)))`, seeded with block
//! constructions so that instances whose optimum meets the weight floor are
//! proved at the root.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructions::build_construction_b;
use crate::error::{Error, Result};
use crate::family::Family;

/// Full-enumeration regime: every hereditary family on [n] is visited.
const ENUMERATION_CAP: u32 = 6;
/// Branch-and-bound regime.
const SEARCH_CAP: u32 = 14;
/// lcm(1..=14): clears every denominator `1/(|H|+1)` for links on [14].
const SCALE: u64 = 360_360;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub time_budget: Duration,
    pub thread_count: usize,
    pub symmetry_breaking: bool,
    pub katona_pruning: bool,
}

impl Default for SearchConfig {
    /// One minute, single-threaded, all pruning on. The proved value is
    /// independent of `thread_count` and `symmetry_breaking`; a single
    /// worker additionally makes the witness reproducible.
    fn default() -> Self {
        SearchConfig {
            time_budget: Duration::from_secs(60),
            thread_count: 1,
            symmetry_breaking: true,
            katona_pruning: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    Proved,
    Timeout,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    /// The minimized `|𝓕|`, the value `m(n, s)`, or 1/0 for a decided
    /// arrow relation.
    pub value: u64,
    /// Best proved lower bound on the value; equals `value` when proved.
    pub lower_bound: u64,
    /// For minimization, a family attaining the value (for `m_exact` it
    /// has `value + 1` sets, the `μ` witness); for a failed arrow
    /// relation, a counterexample family.
    pub witness: Option<Family>,
    pub nodes_explored: u64,
    pub wallclock: Duration,
    pub status: SearchStatus,
}

/// Bitmaps over the subsets of [n], one bit per mask, for `n ≤ 6`.
struct Lattice {
    n: u32,
    total: u32,
    /// `parents[i]`: bitmap of the masks `i` minus one element.
    parents: Vec<u64>,
    /// `member_of[x]`: bitmap of the masks containing vertex `x + 1`.
    member_of: Vec<u64>,
}

impl Lattice {
    fn new(n: u32) -> Lattice {
        let total = 1u32 << n;
        let parents = (0..total)
            .map(|i| {
                let mut p = 0u64;
                let mut rest = i;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    p |= 1u64 << (i ^ b);
                    rest ^= b;
                }
                p
            })
            .collect();
        let member_of = (0..n)
            .map(|x| {
                (0..total)
                    .filter(|i| i >> x & 1 == 1)
                    .fold(0u64, |acc, i| acc | 1u64 << i)
            })
            .collect();
        Lattice {
            n,
            total,
            parents,
            member_of,
        }
    }

    fn min_degree(&self, family: u64) -> u32 {
        (0..self.n)
            .map(|x| (family & self.member_of[x as usize]).count_ones())
            .min()
            .unwrap()
    }

    fn to_family(&self, bits: u64) -> Family {
        let masks = (0..self.total).filter(|&i| bits >> i & 1 == 1).collect();
        Family::from_masks(self.n, masks).expect("downset bitmap is a valid family")
    }

    /// Visits every down-closed bitmap whose size stays within `max_size`.
    /// The visitor returns false to abort the walk; the return value is
    /// false iff some visitor call aborted.
    fn for_each_downset(&self, max_size: u32, visit: &mut dyn FnMut(u64, u32) -> bool) -> bool {
        self.walk(0, 0, 0, max_size, visit)
    }

    fn walk(
        &self,
        i: u32,
        bits: u64,
        count: u32,
        max_size: u32,
        visit: &mut dyn FnMut(u64, u32) -> bool,
    ) -> bool {
        if i == self.total {
            return visit(bits, count);
        }
        if !self.walk(i + 1, bits, count, max_size, visit) {
            return false;
        }
        // Include mask i only if all its one-element deletions are in.
        if count < max_size && self.parents[i as usize] & !bits == 0 {
            return self.walk(i + 1, bits | 1u64 << i, count + 1, max_size, visit);
        }
        true
    }
}

/// Decides whether `(n, m) → (a, b)`: every family of `m` sets on `[n]`
/// has an `a`-set `T` with `|𝓕|_T| ≥ b`. Hereditary families suffice, and
/// for a hereditary family the trace on `T` is exactly the members inside
/// `T`, so the check is a popcount per `T`. `value` is the truth value;
/// a failing relation carries a counterexample witness.
pub fn arrows(n: u32, m: u64, a: u32, b: u64) -> Result<SearchResult> {
    if n == 0 || n > ENUMERATION_CAP {
        return Err(Error::UniverseTooLarge {
            op: "arrows",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if a > n {
        return Err(Error::InvalidParams(format!(
            "arrows needs a <= n, got a = {a}, n = {n}"
        )));
    }
    if m > 1 << n {
        return Err(Error::InvalidParams(format!(
            "arrows needs m <= 2^n, got m = {m}"
        )));
    }
    let start = Instant::now();
    let lattice = Lattice::new(n);
    // Bitmap of the subsets of each a-set T.
    let t_windows: Vec<u64> = (0..lattice.total)
        .filter(|t| t.count_ones() == a)
        .map(|t| {
            crate::mask::submasks(t).fold(0u64, |acc, s| acc | 1u64 << s)
        })
        .collect();

    let mut nodes = 0u64;
    let mut counterexample = None;
    if b > 0 {
        lattice.for_each_downset(m as u32, &mut |bits, count| {
            if count as u64 != m {
                return true;
            }
            nodes += 1;
            let traced = t_windows
                .iter()
                .any(|&w| (bits & w).count_ones() as u64 >= b);
            if traced {
                true
            } else {
                counterexample = Some(bits);
                false
            }
        });
    }
    let holds = counterexample.is_none();
    Ok(SearchResult {
        value: holds as u64,
        lower_bound: holds as u64,
        witness: counterexample.map(|bits| lattice.to_family(bits)),
        nodes_explored: nodes,
        wallclock: start.elapsed(),
        status: SearchStatus::Proved,
    })
}

/// Reference implementation of `μ(n, δ)` by visiting every hereditary
/// family on `[n]`. Only for cross-checking the branch-and-bound engine.
pub fn min_family_size_oracle(n: u32, delta_min: u64) -> Result<u64> {
    if n == 0 || n > ENUMERATION_CAP {
        return Err(Error::UniverseTooLarge {
            op: "min_family_size_oracle",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    check_delta(n, delta_min)?;
    let lattice = Lattice::new(n);
    let mut best = u64::MAX;
    lattice.for_each_downset(lattice.total, &mut |bits, count| {
        if (count as u64) < best && lattice.min_degree(bits) as u64 >= delta_min {
            best = count as u64;
        }
        true
    });
    Ok(best)
}

fn check_delta(n: u32, delta_min: u64) -> Result<()> {
    if delta_min == 0 {
        return Err(Error::InvalidParams("delta_min must be at least 1".into()));
    }
    if delta_min > 1 << (n - 1) {
        return Err(Error::InvalidParams(format!(
            "no hereditary family on [{n}] reaches minimum degree {delta_min}; the \
             power set caps every degree at 2^(n-1) = {}",
            1u64 << (n - 1)
        )));
    }
    Ok(())
}

/// `W(m)` with denominators cleared: `w_scaled[m] = SCALE · W(m)`, built
/// from `W(m+1) = W(m) + 1/(popcount(m)+1)`.
fn scaled_w_table(max: u64) -> Vec<u64> {
    let mut table = Vec::with_capacity(max as usize + 1);
    table.push(0u64);
    for m in 0..max {
        let share = SCALE / (m.count_ones() as u64 + 1);
        table.push(table[m as usize] + share);
    }
    table
}

/// Block seeds: for every `d | n` with `δ ≤ 2^{d−1}`, keep the colex-first
/// `2^{d−1} + δ − 1` nonempty local sets per block (dropping the colex-last
/// ones, which all contain the block's top element), plus the near-extremal
/// family when its parameters fit. Only measured-valid families are kept.
fn seed_families(n: u32, delta_min: u64) -> Vec<Family> {
    let mut seeds = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let half = 1u64 << (d - 1);
        if delta_min > half {
            continue;
        }
        let keep = (half + delta_min - 1) as u32;
        let mut masks = vec![0u32];
        for block in 0..n / d {
            let shift = block * d;
            masks.extend((1..=keep).map(|v| v << shift));
        }
        if let Ok(family) = Family::from_masks(n, masks) {
            if family.min_degree() >= delta_min {
                seeds.push(family);
            }
        }
        if d >= 5 && n % (2 * d) == 0 && delta_min + d as u64 <= half + 1 {
            if let Ok(family) = build_construction_b(n, d) {
                if family.min_degree() >= delta_min {
                    seeds.push(family);
                }
            }
        }
    }
    seeds
}

struct Shared<'a> {
    n: u32,
    delta: u64,
    words: usize,
    /// Flat `[mask][word]` table: bitmap of the down-closure of each mask.
    closures: &'a [u64],
    w_table: &'a [u64],
    katona: bool,
    symmetry: bool,
    best: AtomicU64,
    incumbent: Mutex<Vec<u32>>,
    nodes: AtomicU64,
    cancelled: AtomicBool,
    deadline: Instant,
}

struct State {
    bits: Vec<u64>,
    degrees: Vec<u64>,
    gens: Vec<u32>,
    size: u64,
    /// Vertices still below the degree target.
    short: u32,
}

impl State {
    fn root(n: u32, words: usize) -> State {
        let mut bits = vec![0u64; words];
        bits[0] |= 1; // the empty set
        State {
            bits,
            degrees: vec![0; n as usize],
            gens: Vec::new(),
            size: 1,
            short: n,
        }
    }

    fn contains(&self, mask: u32) -> bool {
        self.bits[(mask / 64) as usize] >> (mask % 64) & 1 == 1
    }
}

fn new_set_count(shared: &Shared, state: &State, gen: u32) -> u64 {
    let row = &shared.closures[gen as usize * shared.words..(gen as usize + 1) * shared.words];
    row.iter()
        .zip(&state.bits)
        .map(|(c, b)| (c & !b).count_ones() as u64)
        .sum()
}

fn apply(shared: &Shared, state: &mut State, gen: u32) -> Vec<u32> {
    let row = &shared.closures[gen as usize * shared.words..(gen as usize + 1) * shared.words];
    let mut added = Vec::new();
    for w in 0..shared.words {
        let mut fresh = row[w] & !state.bits[w];
        state.bits[w] |= fresh;
        while fresh != 0 {
            let bit = fresh.trailing_zeros();
            fresh &= fresh - 1;
            let mask = (w as u32) * 64 + bit;
            added.push(mask);
            let mut rest = mask;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                state.degrees[x] += 1;
                if state.degrees[x] == shared.delta {
                    state.short -= 1;
                }
            }
        }
    }
    state.size += added.len() as u64;
    state.gens.push(gen);
    added
}

fn undo(shared: &Shared, state: &mut State, added: &[u32]) {
    for &mask in added {
        state.bits[(mask / 64) as usize] &= !(1u64 << (mask % 64));
        let mut rest = mask;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if state.degrees[x] == shared.delta {
                state.short += 1;
            }
            state.degrees[x] -= 1;
        }
    }
    state.size -= added.len() as u64;
    state.gens.pop();
}

/// `⌈Σ_x W(max(δ, d(x)))⌉ + 1` in scaled integers: a lower bound on the
/// size of any hereditary completion meeting the degree target.
fn katona_floor(shared: &Shared, degrees: &[u64]) -> u64 {
    let total: u64 = degrees
        .iter()
        .map(|&d| shared.w_table[d.max(shared.delta) as usize])
        .sum();
    total.div_ceil(SCALE) + 1
}

/// Colex-least relabeling of `gen` under permutations fixing the set
/// `{1..k}`: the bits inside and outside pack to the bottom independently.
fn stabilizer_min(gen: u32, k: u32) -> u32 {
    let inside = (gen & ((1u32 << k) - 1)).count_ones();
    let outside = (gen >> k).count_ones();
    ((1u32 << inside) - 1) | (((1u32 << outside) - 1) << k)
}

fn symmetry_allows(state: &State, gen: u32) -> bool {
    match state.gens.len() {
        // First generator: least maximal set of some relabeling, i.e. a
        // contiguous run of low bits.
        0 => gen == (1u32 << gen.count_ones()) - 1,
        // Second: minimal under the stabilizer of the first.
        1 => gen == stabilizer_min(gen, state.gens[0].count_ones()),
        _ => true,
    }
}

fn record_candidate(shared: &Shared, state: &State) {
    let mut incumbent = shared.incumbent.lock().unwrap();
    if state.size < shared.best.load(Ordering::SeqCst) {
        let words = &state.bits;
        let mut masks = Vec::with_capacity(state.size as usize);
        for (w, &word) in words.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                masks.push((w as u32) * 64 + bit);
            }
        }
        *incumbent = masks;
        shared.best.store(state.size, Ordering::SeqCst);
    }
}

fn dfs(shared: &Shared, state: &mut State, last: u32, local_nodes: &mut u64) {
    if shared.cancelled.load(Ordering::Relaxed) {
        return;
    }
    *local_nodes += 1;
    if *local_nodes % 1024 == 0 {
        shared.nodes.fetch_add(1024, Ordering::Relaxed);
        if Instant::now() >= shared.deadline {
            shared.cancelled.store(true, Ordering::Relaxed);
            return;
        }
    }
    if state.short == 0 {
        record_candidate(shared, state);
        return;
    }
    let total = 1u32 << shared.n;
    for gen in last + 1..total {
        if state.contains(gen) {
            continue;
        }
        if state.gens.iter().any(|&h| gen & h == h) {
            continue;
        }
        if shared.symmetry && !symmetry_allows(state, gen) {
            continue;
        }
        let best = shared.best.load(Ordering::Relaxed);
        if state.size + new_set_count(shared, state, gen) >= best {
            continue;
        }
        let added = apply(shared, state, gen);
        let keep = !shared.katona || katona_floor(shared, &state.degrees) < best;
        if keep {
            dfs(shared, state, gen, local_nodes);
        }
        undo(shared, state, &added);
        if shared.cancelled.load(Ordering::Relaxed) {
            return;
        }
    }
}

/// `μ(n, δ)`: branch-and-bound over antichains of maximal sets added in
/// colex order, so every node is a hereditary family. Returns the proved
/// optimum, or the best seeded/found value with `status = Timeout` when the
/// budget runs out first.
pub fn min_family_size(n: u32, delta_min: u64, config: &SearchConfig) -> Result<SearchResult> {
    if n == 0 || n > SEARCH_CAP {
        return Err(Error::UniverseTooLarge {
            op: "min_family_size",
            n,
            cap: SEARCH_CAP,
        });
    }
    check_delta(n, delta_min)?;
    if config.thread_count == 0 {
        return Err(Error::InvalidParams("thread_count must be positive".into()));
    }
    let start = Instant::now();

    let total = 1usize << n;
    let words = total.div_ceil(64);
    let mut closures = vec![0u64; total * words];
    for mask in 0..total as u32 {
        let row = mask as usize * words;
        for sub in crate::mask::submasks(mask) {
            closures[row + (sub / 64) as usize] |= 1u64 << (sub % 64);
        }
    }
    let w_table = scaled_w_table(1 << (n - 1));

    let seeds = seed_families(n, delta_min);
    let (seed_size, seed_masks) = seeds
        .iter()
        .map(|f| (f.len() as u64, f.masks().to_vec()))
        .min()
        .expect("the single-block seed always applies");

    let shared = Shared {
        n,
        delta: delta_min,
        words,
        closures: &closures,
        w_table: &w_table,
        katona: config.katona_pruning,
        symmetry: config.symmetry_breaking,
        best: AtomicU64::new(seed_size),
        incumbent: Mutex::new(seed_masks),
        nodes: AtomicU64::new(0),
        cancelled: AtomicBool::new(false),
        deadline: start + config.time_budget,
    };

    let root = State::root(n, words);
    let root_floor = katona_floor(&shared, &root.degrees);
    if seed_size > root_floor {
        // Top-level branches are the choices of first generator; workers
        // claim them from a shared cursor.
        let top: Vec<u32> = (1..total as u32)
            .filter(|&g| !config.symmetry_breaking || symmetry_allows(&root, g))
            .collect();
        let cursor = AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..config.thread_count {
                scope.spawn(|| {
                    let mut state = State::root(n, words);
                    let mut local_nodes = 0u64;
                    loop {
                        let i = cursor.fetch_add(1, Ordering::SeqCst);
                        if i >= top.len() || shared.cancelled.load(Ordering::Relaxed) {
                            break;
                        }
                        let gen = top[i];
                        let best = shared.best.load(Ordering::Relaxed);
                        if state.size + new_set_count(&shared, &state, gen) >= best {
                            continue;
                        }
                        let added = apply(&shared, &mut state, gen);
                        let keep =
                            !shared.katona || katona_floor(&shared, &state.degrees) < best;
                        if keep {
                            dfs(&shared, &mut state, gen, &mut local_nodes);
                        }
                        undo(&shared, &mut state, &added);
                    }
                    shared.nodes.fetch_add(local_nodes % 1024, Ordering::Relaxed);
                });
            }
        });
    }

    let cancelled = shared.cancelled.load(Ordering::SeqCst);
    let value = shared.best.load(Ordering::SeqCst);
    let witness_masks = shared.incumbent.into_inner().unwrap();
    let witness = Family::from_masks(n, witness_masks)?;
    debug_assert!(witness.is_hereditary() && witness.min_degree() >= delta_min);
    Ok(SearchResult {
        value,
        lower_bound: if cancelled { root_floor } else { value },
        witness: Some(witness),
        nodes_explored: shared.nodes.load(Ordering::SeqCst),
        wallclock: start.elapsed(),
        status: if cancelled {
            SearchStatus::Timeout
        } else {
            SearchStatus::Proved
        },
    })
}

/// `m(n, s) = μ(n, s+1) − 1`. The witness is the minimizing family, so it
/// has `value + 1` sets: it is the family showing no smaller degree
/// threshold gap is possible.
pub fn m_exact(n: u32, s: u64, config: &SearchConfig) -> Result<SearchResult> {
    let mut result = min_family_size(n, s + 1, config)?;
    result.value -= 1;
    result.lower_bound = result.lower_bound.saturating_sub(1);
    Ok(result)
}

/// Joint verdict of the four equivalent forms tied to `m(n, s)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Prop22Report {
    pub n: u32,
    pub m: u64,
    pub s: u64,
    /// `(n, m) → (n−1, m−s)`.
    pub arrow_decision: bool,
    /// `m ≤ m(n, s)`.
    pub within_m_bound: bool,
    /// Every hereditary family with at most `m` sets has a vertex of
    /// degree at most `s`.
    pub low_degree_vertex: bool,
    /// Every hereditary family with `δ ≥ s+1` has at least `m+1` sets.
    pub size_floor: bool,
    /// False when the family-quantified forms were only sampled.
    pub exhaustive: bool,
}

impl Prop22Report {
    pub fn agree(&self) -> bool {
        let d = self.arrow_decision;
        self.within_m_bound == d && self.low_degree_vertex == d && self.size_floor == d
    }

    /// The common verdict, when all four forms concur.
    pub fn decision(&self) -> Option<bool> {
        self.agree().then_some(self.arrow_decision)
    }
}

/// Evaluates the four forms independently: the arrow relation by
/// enumeration, the `m(n, s)` comparison by branch-and-bound, and the two
/// family-quantified forms by enumeration (`n ≤ 5`, or `sample_count = 0`)
/// or on seeded random hereditary samples.
pub fn verify_prop22_equivalences(
    n: u32,
    m: u64,
    s: u64,
    sample_count: u64,
) -> Result<Prop22Report> {
    if n == 0 || n > ENUMERATION_CAP {
        return Err(Error::UniverseTooLarge {
            op: "verify_prop22_equivalences",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if m == 0 || m > 1 << n {
        return Err(Error::InvalidParams(format!(
            "prop22 needs 1 <= m <= 2^n, got m = {m}"
        )));
    }

    let arrow_decision = if m <= s {
        true // trace targets of size <= 0 are vacuous
    } else {
        arrows(n, m, n - 1, m - s)?.value == 1
    };
    // Degrees cap at 2^(n-1), so s at or above the cap bounds nothing.
    let within_m_bound =
        s >= 1 << (n - 1) || m <= m_exact(n, s, &SearchConfig::default())?.value;

    let lattice = Lattice::new(n);
    let exhaustive = n <= 5 || sample_count == 0;
    let (low_degree_vertex, size_floor) = if exhaustive {
        let mut low_degree = true;
        lattice.for_each_downset(m as u32, &mut |bits, count| {
            if (count as u64) <= m && lattice.min_degree(bits) as u64 > s {
                low_degree = false;
                return false;
            }
            true
        });
        let mut floor = true;
        lattice.for_each_downset(m as u32, &mut |bits, count| {
            // Completions only grow, so only sizes <= m can violate.
            if (count as u64) <= m && lattice.min_degree(bits) as u64 >= s + 1 {
                floor = false;
                return false;
            }
            true
        });
        (low_degree, floor)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x2202_2022);
        let closures: Vec<u64> = (0..lattice.total)
            .map(|g| crate::mask::submasks(g).fold(0u64, |acc, sub| acc | 1u64 << sub))
            .collect();
        let mut low_degree = true;
        let mut floor = true;
        for _ in 0..sample_count {
            let gens = rng.gen_range(1..=6u32);
            let bits = (0..gens).fold(0u64, |acc, _| {
                acc | closures[rng.gen_range(0..lattice.total) as usize]
            });
            let size = bits.count_ones() as u64;
            let delta = lattice.min_degree(bits) as u64;
            if size <= m && delta > s {
                low_degree = false;
            }
            if delta >= s + 1 && size <= m {
                floor = false;
            }
        }
        (low_degree, floor)
    };

    Ok(Prop22Report {
        n,
        m,
        s,
        arrow_decision,
        within_m_bound,
        low_degree_vertex,
        size_floor,
        exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn arrows_sauer_shelah_instance() {
        // 6 > C(4,0) + C(4,1), so every 6-set family on [4] has a 2-set
        // with full trace.
        let r = arrows(4, 6, 2, 4).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.witness.is_none());
        assert_eq!(r.status, SearchStatus::Proved);
    }

    #[test]
    fn arrows_full_power_set() {
        let r = arrows(4, 16, 4, 16).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn arrows_failure_has_witness() {
        let r = arrows(4, 5, 2, 4).unwrap();
        assert_eq!(r.value, 0);
        let w = r.witness.unwrap();
        assert!(w.is_hereditary());
        assert_eq!(w.len(), 5);
        for t in [
            &[1u32, 2][..],
            &[1, 3],
            &[1, 4],
            &[2, 3],
            &[2, 4],
            &[3, 4],
        ] {
            let t = crate::mask::SubsetMask::new(4, t).unwrap();
            assert!(w.trace(&t).len() < 4);
        }
    }

    #[test]
    fn arrows_rejects_bad_params() {
        assert!(matches!(
            arrows(7, 5, 2, 4),
            Err(Error::UniverseTooLarge { .. })
        ));
        assert!(arrows(4, 17, 2, 4).is_err());
        assert!(arrows(4, 5, 5, 4).is_err());
    }

    #[test]
    fn minimum_at_degree_one_is_singletons() {
        for n in 1..=9 {
            let r = min_family_size(n, 1, &quick()).unwrap();
            assert_eq!(r.value, n as u64 + 1, "n = {n}");
            assert_eq!(r.status, SearchStatus::Proved);
            assert_eq!(r.lower_bound, r.value);
        }
    }

    #[test]
    fn minimum_for_pairs() {
        // m(4, 1) = 6: the optimum adds two disjoint pairs to the
        // singletons.
        let r = min_family_size(4, 2, &quick()).unwrap();
        assert_eq!(r.value, 7);
        let w = r.witness.unwrap();
        assert!(w.is_hereditary());
        assert!(w.min_degree() >= 2);
        assert_eq!(w.len(), 7);
    }

    #[test]
    fn minimum_for_two_cubes() {
        // m(6, 3) = 14 via two disjoint copies of 2^[3].
        let r = min_family_size(6, 4, &quick()).unwrap();
        assert_eq!(r.value, 15);
        assert_eq!(r.status, SearchStatus::Proved);
    }

    #[test]
    fn oracle_equivalence_small() {
        for n in 1..=4u32 {
            for delta in 1..=(1u64 << (n - 1)).min(8) {
                let oracle = min_family_size_oracle(n, delta).unwrap();
                let searched = min_family_size(n, delta, &quick()).unwrap();
                assert_eq!(searched.value, oracle, "n = {n}, delta = {delta}");
                assert_eq!(searched.status, SearchStatus::Proved);
            }
        }
    }

    #[test]
    fn pruning_and_symmetry_do_not_change_values() {
        let base = min_family_size(5, 3, &quick()).unwrap();
        assert_eq!(base.value, min_family_size_oracle(5, 3).unwrap());
        for (katona, symmetry) in [(false, true), (true, false), (false, false)] {
            let config = SearchConfig {
                katona_pruning: katona,
                symmetry_breaking: symmetry,
                ..quick()
            };
            let r = min_family_size(5, 3, &config).unwrap();
            assert_eq!(r.value, base.value);
            assert_eq!(r.status, SearchStatus::Proved);
        }
    }

    #[test]
    fn thread_count_does_not_change_values() {
        for threads in [1usize, 3, 8] {
            let config = SearchConfig {
                thread_count: threads,
                ..quick()
            };
            let r = min_family_size(5, 3, &config).unwrap();
            assert_eq!(r.value, min_family_size_oracle(5, 3).unwrap());
            assert_eq!(r.status, SearchStatus::Proved);
        }
    }

    #[test]
    fn monotone_in_delta_and_n() {
        let values: Vec<u64> = (1..=16)
            .map(|delta| min_family_size(5, delta, &quick()).unwrap().value)
            .collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
        let by_n: Vec<u64> = (2..=7)
            .map(|n| min_family_size(n, 2, &quick()).unwrap().value)
            .collect();
        assert!(by_n.windows(2).all(|w| w[0] <= w[1]), "{by_n:?}");
    }

    #[test]
    fn m_exact_reference_values() {
        let r = m_exact(3, 2, &quick()).unwrap();
        assert_eq!(r.value, 6);
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 7);
        assert!(w.min_degree() >= 3);

        let r = m_exact(8, 7, &quick()).unwrap();
        assert_eq!(r.value, 30);
        assert_eq!(r.status, SearchStatus::Proved);
    }

    #[test]
    fn stretch_instance_degrades_to_seed() {
        // With no budget the search reports the seeded upper bound 54 and
        // the weight floor 53 without claiming optimality.
        let config = SearchConfig {
            time_budget: Duration::ZERO,
            ..quick()
        };
        let r = min_family_size(10, 12, &config).unwrap();
        assert_eq!(r.status, SearchStatus::Timeout);
        assert_eq!(r.value, 54);
        assert_eq!(r.lower_bound, 53);
        let w = r.witness.unwrap();
        assert!(w.is_hereditary());
        assert!(w.min_degree() >= 12);
    }

    #[test]
    fn infeasible_degree_is_rejected() {
        assert!(min_family_size(3, 5, &quick()).is_err());
        assert!(min_family_size(3, 0, &quick()).is_err());
        assert!(matches!(
            min_family_size(15, 1, &quick()),
            Err(Error::UniverseTooLarge { .. })
        ));
    }

    #[test]
    fn prop22_agreement() {
        let r = verify_prop22_equivalences(4, 6, 1, 0).unwrap();
        assert!(r.agree());
        assert_eq!(r.decision(), Some(true));
        assert!(r.exhaustive);

        let r = verify_prop22_equivalences(4, 7, 1, 0).unwrap();
        assert!(r.agree());
        assert_eq!(r.decision(), Some(false));

        let r = verify_prop22_equivalences(3, 4, 0, 0).unwrap();
        assert!(r.agree());
        assert_eq!(r.decision(), Some(false));

        let r = verify_prop22_equivalences(3, 3, 0, 0).unwrap();
        assert!(r.agree());
        assert_eq!(r.decision(), Some(true));
    }

    #[test]
    fn prop22_sampled_mode() {
        let r = verify_prop22_equivalences(6, 14, 3, 500).unwrap();
        assert!(!r.exhaustive);
        // m(6,3) = 14, so every form should report true; sampling can only
        // produce false negatives for the quantified forms, not false
        // positives.
        assert!(r.arrow_decision);
        assert!(r.within_m_bound);
    }

    #[test]
    fn seeded_upper_bounds_are_valid_families() {
        for (n, delta) in [(6, 4), (10, 12), (12, 16), (8, 8)] {
            for seed in seed_families(n, delta) {
                assert!(seed.is_hereditary());
                assert!(seed.min_degree() >= delta);
            }
        }
    }
}
