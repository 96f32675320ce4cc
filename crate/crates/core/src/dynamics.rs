//! The map Theta on states (labeling, index, orientation), its inverse and
//! powers, brute-force orbit enumeration over the full state space, the
//! normalization automorphism omega, the cyclic shift, toric promotion, and
//! stone/coin diagram extraction.

use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::graph::{wrap_add, BilliardsGraph, Labeling, Material};

/// Largest `n` supported by full state-space enumeration (2 * 9 * 9! states).
pub const MAX_ENUM_N: usize = 9;

/// A point of the state space: a labeling sigma, an index i in Z/nZ
/// (represented in `1..=n`), and an orientation epsilon in {+1, -1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    sigma: Labeling,
    index: usize,
    orientation: i8,
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    labels: Vec<usize>,
    i: usize,
    eps: i8,
}

impl State {
    pub fn new(sigma: Labeling, index: usize, orientation: i8) -> Result<Self> {
        if index == 0 || index > sigma.n() {
            return Err(Error::InvalidState(format!(
                "index {index} out of range 1..={}",
                sigma.n()
            )));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidState(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        Ok(Self {
            sigma,
            index,
            orientation,
        })
    }

    pub fn sigma(&self) -> &Labeling {
        &self.sigma
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    /// Vertex of the cycle holding the stone: `i + (1 - eps)/2`.
    pub fn stone_vertex(&self) -> usize {
        if self.orientation == 1 {
            self.index
        } else {
            wrap_add(self.index, 1, self.n())
        }
    }

    /// Vertex of the cycle the stone points toward: `i + (1 + eps)/2`.
    pub fn target_vertex(&self) -> usize {
        if self.orientation == 1 {
            wrap_add(self.index, 1, self.n())
        } else {
            self.index
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: StateWire = serde_json::from_str(text)?;
        State::new(Labeling::from_labels(wire.labels)?, wire.i, wire.eps)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateWire {
            labels: self.sigma.labels().to_vec(),
            i: self.index,
            eps: self.orientation,
        })
        .expect("state serializes")
    }
}

/// Applies Theta in place. The three cases, by the pair of vertices labeled
/// `i` and `i+1`: a non-edge swaps the labels and advances the index; a
/// reflection edge advances the index only; a refraction edge swaps the
/// labels and reverses the orientation.
fn theta_step(g: &BilliardsGraph, s: &mut State) {
    debug_assert_eq!(g.n(), s.n());
    let n = s.n();
    let i = s.index;
    let ip1 = wrap_add(i, 1, n);
    let a = s.sigma.vertex_with(i);
    let b = s.sigma.vertex_with(ip1);
    match g.material_of(a, b) {
        None => {
            s.sigma.swap_values(i, ip1);
            s.index = wrap_add(i, s.orientation as i64, n);
        }
        Some(Material::Reflect) => {
            s.index = wrap_add(i, s.orientation as i64, n);
        }
        Some(Material::Refract) => {
            s.sigma.swap_values(i, ip1);
            s.index = wrap_add(i, -(s.orientation as i64), n);
            s.orientation = -s.orientation;
        }
    }
}

/// Undoes one application of Theta in place. Every case of the forward map
/// sends the index to `i + eps'` with the pre-image pair of vertices
/// unchanged as a set, so the pre-index is always `i' - eps'`.
fn theta_unstep(g: &BilliardsGraph, s: &mut State) {
    debug_assert_eq!(g.n(), s.n());
    let n = s.n();
    let i = wrap_add(s.index, -(s.orientation as i64), n);
    let ip1 = wrap_add(i, 1, n);
    let a = s.sigma.vertex_with(i);
    let b = s.sigma.vertex_with(ip1);
    match g.material_of(a, b) {
        None => {
            s.sigma.swap_values(i, ip1);
            s.index = i;
        }
        Some(Material::Reflect) => {
            s.index = i;
        }
        Some(Material::Refract) => {
            s.sigma.swap_values(i, ip1);
            s.index = i;
            s.orientation = -s.orientation;
        }
    }
}

/// One application of Theta. Total on the state space.
pub fn theta(g: &BilliardsGraph, s: &State) -> State {
    let mut t = s.clone();
    theta_step(g, &mut t);
    t
}

/// The unique state mapped to `s` by [`theta`].
pub fn theta_inverse(g: &BilliardsGraph, s: &State) -> State {
    let mut t = s.clone();
    theta_unstep(g, &mut t);
    t
}

/// Above this many steps, `theta_power` reduces the exponent modulo the
/// orbit length before iterating.
const POWER_REDUCTION_THRESHOLD: i64 = 4096;

/// `k`-fold composition of Theta (negative `k` uses the inverse).
pub fn theta_power(g: &BilliardsGraph, s: &State, k: i64) -> State {
    let mut k = k;
    if k.abs() > POWER_REDUCTION_THRESHOLD {
        let len = orbit_size(g, s) as i64;
        k = k.rem_euclid(len);
    }
    let mut t = s.clone();
    if k >= 0 {
        for _ in 0..k {
            theta_step(g, &mut t);
        }
    } else {
        for _ in 0..(-k) {
            theta_unstep(g, &mut t);
        }
    }
    t
}

/// Least `k >= 1` with `Theta^k(s) = s`.
pub fn orbit_size(g: &BilliardsGraph, s: &State) -> u64 {
    let mut t = s.clone();
    let mut len = 0u64;
    loop {
        theta_step(g, &mut t);
        len += 1;
        if t == *s {
            return len;
        }
    }
}

/// The full forward orbit of `s`, in Theta order starting at `s`.
pub fn orbit_of(g: &BilliardsGraph, s: &State) -> Vec<State> {
    let mut out = vec![s.clone()];
    let mut t = theta(g, s);
    while t != *s {
        let next = theta(g, &t);
        out.push(t);
        t = next;
    }
    out
}

/// Normalizes a state to index 1 and orientation +1 by relabeling the cycle
/// with the automorphism that sends the stone vertex to 1 and the vertex the
/// stone points toward to 2: the rotation `j -> j - i + 1` when eps = +1,
/// the reflection `j -> i - j + 2` when eps = -1. Relabeling the cycle
/// commutes with the dynamics, so orbit sizes are preserved for every graph;
/// idempotent on already-normalized states.
pub fn omega_normalize(s: &State) -> State {
    let n = s.n();
    let i = s.index as i64;
    let eps = s.orientation as i64;
    let offset = if eps == 1 { 0 } else { 1 };
    let labels = (1..=n)
        .map(|v| {
            let j = s.sigma.label_of(v) as i64;
            ((eps * (j - i) + offset).rem_euclid(n as i64)) as usize + 1
        })
        .collect();
    State {
        sigma: Labeling::from_labels(labels).expect("omega is an automorphism"),
        index: 1,
        orientation: 1,
    }
}

/// `k`-fold cyclic shift: every label advances by one and so does the index.
pub fn cyc_shift(s: &State, k: i64) -> State {
    let n = s.n();
    let labels = (1..=n)
        .map(|v| wrap_add(s.sigma.label_of(v), k, n))
        .collect();
    State {
        sigma: Labeling::from_labels(labels).expect("shift preserves bijectivity"),
        index: wrap_add(s.index, k, n),
        orientation: s.orientation,
    }
}

/// Toric promotion: the labeling of `Theta^n(sigma, 1, 1)`. Only defined
/// when the graph has no refraction edges.
pub fn toric_promotion(g: &BilliardsGraph, sigma: &Labeling) -> Result<Labeling> {
    if g.refract_count() != 0 {
        return Err(Error::RefractionPresent);
    }
    let s = State::new(sigma.clone(), 1, 1)?;
    Ok(theta_power(g, &s, g.n() as i64).sigma)
}

/// Stone diagram of a state: the replica of vertex `v_k` sits on the cycle
/// vertex `sigma(v_k)`, and a directed stone sits on `i + (1 - eps)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneDiagram {
    /// `positions[k-1]` = cycle vertex holding the replica of vertex k.
    pub positions: Vec<usize>,
    pub stone_at: usize,
    /// +1 clockwise, -1 counterclockwise.
    pub direction: i8,
}

impl StoneDiagram {
    pub fn target(&self) -> usize {
        let n = self.positions.len();
        wrap_add(self.stone_at, self.direction as i64, n)
    }
}

pub fn stone_diagram(s: &State) -> StoneDiagram {
    StoneDiagram {
        positions: s.sigma.labels().to_vec(),
        stone_at: s.stone_vertex(),
        direction: s.orientation,
    }
}

/// Vertex of the graph whose replica sits on the stone.
pub fn coin_position(s: &State) -> usize {
    s.sigma.vertex_with(s.stone_vertex())
}

/// Coin positions after `t` applications of Theta, for `t = 0..=steps`.
pub fn coin_trace(g: &BilliardsGraph, s: &State, steps: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    let mut t = s.clone();
    out.push(coin_position(&t));
    for _ in 0..steps {
        theta_step(g, &mut t);
        out.push(coin_position(&t));
    }
    out
}

/// Multiset of orbit sizes of Theta over the whole state space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub orbits: Vec<OrbitClass>,
    pub total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub size: u64,
    pub count: u64,
}

impl OrbitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,count\n");
        for c in &self.orbits {
            out.push_str(&format!("{},{}\n", c.size, c.count));
        }
        out
    }

    /// Number of states fixed by `Theta^k`, i.e. the states on orbits whose
    /// size divides `k`.
    pub fn fixed_by_power(&self, k: u64) -> u64 {
        if k == 0 {
            return self.total;
        }
        self.orbits
            .iter()
            .filter(|c| k.is_multiple_of(c.size))
            .map(|c| c.size * c.count)
            .sum()
    }

    /// Order of `Theta^q` as a permutation of the state space.
    pub fn order_of_power(&self, q: u64) -> u64 {
        self.orbits
            .iter()
            .map(|c| c.size / gcd(c.size, q))
            .fold(1, lcm)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation word with values `1..=n`.
pub fn lehmer_rank(word: &[usize]) -> usize {
    let n = word.len();
    let mut rank = 0usize;
    let mut fact = factorial(n.saturating_sub(1));
    for j in 0..n {
        let smaller = word[j + 1..].iter().filter(|&&x| x < word[j]).count();
        rank += smaller * fact;
        if n - j > 1 {
            fact /= n - j - 1;
        }
    }
    rank
}

/// Inverse of [`lehmer_rank`].
pub fn lehmer_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut avail: Vec<usize> = (1..=n).collect();
    let mut out = Vec::with_capacity(n);
    let mut fact = factorial(n.saturating_sub(1));
    for j in 0..n {
        let d = rank / fact;
        rank %= fact;
        out.push(avail.remove(d));
        if n - j > 1 {
            fact /= n - j - 1;
        }
    }
    out
}

/// Rank of a state in `0..2*n*n!`: permutation rank, then index, then sign.
pub fn state_rank(s: &State) -> usize {
    let n = s.n();
    ((lehmer_rank(s.sigma.labels()) * n + (s.index - 1)) << 1)
        | usize::from(s.orientation == -1)
}

pub fn state_unrank(n: usize, rank: usize) -> State {
    let orientation = if rank & 1 == 1 { -1 } else { 1 };
    let rest = rank >> 1;
    let index = rest % n + 1;
    let labels = lehmer_unrank(n, rest / n);
    State {
        sigma: Labeling::from_labels(labels).expect("unrank yields a bijection"),
        index,
        orientation,
    }
}

/// Partitions the full state space into Theta-orbits, single-threaded.
pub fn orbit_decomposition(g: &BilliardsGraph) -> Result<OrbitReport> {
    orbit_decomposition_threaded(g, 1)
}

/// Scratch buffers for the enumeration walk: a state that mutates in place.
struct Walker {
    label: Vec<usize>,
    inverse: Vec<usize>,
    index: usize,
    orientation: i8,
    fact_suffix: Vec<usize>,
}

impl Walker {
    fn new(n: usize) -> Self {
        // fact_suffix[j] = (n - 1 - j)!
        let fact_suffix = (0..n).map(|j| factorial(n - 1 - j)).collect();
        Walker {
            label: vec![0; n],
            inverse: vec![0; n],
            index: 1,
            orientation: 1,
            fact_suffix,
        }
    }

    fn load(&mut self, n: usize, rank: usize) {
        self.orientation = if rank & 1 == 1 { -1 } else { 1 };
        let rest = rank >> 1;
        self.index = rest % n + 1;
        let word = lehmer_unrank(n, rest / n);
        for (v, &l) in word.iter().enumerate() {
            self.label[v] = l;
            self.inverse[l - 1] = v + 1;
        }
    }

    fn rank(&self, n: usize) -> usize {
        let mut perm_rank = 0usize;
        for j in 0..n {
            let mut smaller = 0usize;
            for k in j + 1..n {
                smaller += usize::from(self.label[k] < self.label[j]);
            }
            perm_rank += smaller * self.fact_suffix[j];
        }
        ((perm_rank * n + (self.index - 1)) << 1) | usize::from(self.orientation == -1)
    }

    fn step(&mut self, g: &BilliardsGraph, n: usize) {
        let i = self.index;
        let ip1 = wrap_add(i, 1, n);
        let a = self.inverse[i - 1];
        let b = self.inverse[ip1 - 1];
        match g.material_of(a, b) {
            None => {
                self.label[a - 1] = ip1;
                self.label[b - 1] = i;
                self.inverse.swap(i - 1, ip1 - 1);
                self.index = wrap_add(i, self.orientation as i64, n);
            }
            Some(Material::Reflect) => {
                self.index = wrap_add(i, self.orientation as i64, n);
            }
            Some(Material::Refract) => {
                self.label[a - 1] = ip1;
                self.label[b - 1] = i;
                self.inverse.swap(i - 1, ip1 - 1);
                self.index = wrap_add(i, -(self.orientation as i64), n);
                self.orientation = -self.orientation;
            }
        }
    }
}

/// Partitions all `2*n*n!` states into Theta-orbits using `threads` workers.
/// Output is identical for any worker count: workers may race to walk the
/// same orbit, so orbits are deduplicated by their minimum state rank.
pub fn orbit_decomposition_threaded(g: &BilliardsGraph, threads: usize) -> Result<OrbitReport> {
    let n = g.n();
    if n > MAX_ENUM_N {
        return Err(Error::CapacityExceeded {
            what: "n",
            got: n,
            max: MAX_ENUM_N,
        });
    }
    let total = 2 * n * factorial(n);
    let visited: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let threads = threads.max(1).min(total);

    let walk_range = |lo: usize, hi: usize| -> Vec<(usize, u64)> {
        let mut found = Vec::new();
        let mut w = Walker::new(n);
        for start in lo..hi {
            if visited[start / 64].load(Ordering::Relaxed) >> (start % 64) & 1 == 1 {
                continue;
            }
            w.load(n, start);
            let mut rank = start;
            let mut min_rank = start;
            let mut len = 0u64;
            loop {
                visited[rank / 64].fetch_or(1 << (rank % 64), Ordering::Relaxed);
                min_rank = min_rank.min(rank);
                w.step(g, n);
                rank = w.rank(n);
                len += 1;
                if rank == start {
                    break;
                }
            }
            found.push((min_rank, len));
        }
        found
    };

    let mut found: Vec<(usize, u64)> = if threads == 1 {
        walk_range(0, total)
    } else {
        let chunk = total.div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let walk = &walk_range;
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(total);
                    scope.spawn(move || walk(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    // Deduplicate orbits walked by more than one worker.
    found.sort_unstable();
    found.dedup();
    let mut counts = std::collections::BTreeMap::new();
    for &(_, len) in &found {
        *counts.entry(len).or_insert(0u64) += 1;
    }
    let orbits: Vec<OrbitClass> = counts
        .into_iter()
        .map(|(size, count)| OrbitClass { size, count })
        .collect();
    let sum: u64 = orbits.iter().map(|c| c.size * c.count).sum();
    if sum != total as u64 {
        return Err(Error::InternalMismatch(format!(
            "orbit sizes sum to {sum}, state space has {total}"
        )));
    }
    Ok(OrbitReport {
        orbits,
        total: total as u64,
    })
}

/// Number of states fixed by `Theta^k`, by full orbit decomposition.
pub fn fixed_point_count(g: &BilliardsGraph, k: u64) -> Result<u64> {
    Ok(orbit_decomposition(g)?.fixed_by_power(k))
}
