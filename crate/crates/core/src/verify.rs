//! Verification suites that compare the closed-form predictors, the lifted
//! dynamics, and the coin lemmas against brute force, plus the deterministic
//! generators they sample from. Every suite is reproducible from its seed.

use serde::Serialize;

use crate::dynamics::{
    self, coin_position, cyc_shift, factorial, lehmer_unrank, orbit_size, state_unrank, theta,
    theta_power, State,
};
use crate::error::{Error, Result};
use crate::graph::{BilliardsGraph, Labeling, Material};
use crate::predictors::{cycle_invariants, cycle_orbit_size, forest_orbit_size, subtree_size};

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

/// Small deterministic generator (splitmix64). Kept in-tree so seeded runs
/// reproduce byte-identically across toolchain and dependency updates.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Rejection sampling to kill modulo bias.
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform value in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for j in (1..slice.len()).rev() {
            slice.swap(j, self.below(j as u64 + 1) as usize);
        }
    }
}

/// Uniform random labeled tree on `1..=n` via a random Pruefer sequence.
pub fn random_tree(n: usize, rng: &mut SplitMix64) -> Vec<(usize, usize)> {
    debug_assert!(n >= 2);
    if n == 2 {
        return vec![(1, 2)];
    }
    let pruefer: Vec<usize> = (0..n - 2).map(|_| rng.range(1, n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &v in &pruefer {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in &pruefer {
        let leaf = (1..=n).find(|&u| degree[u] == 1).expect("a leaf exists");
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

pub fn random_materials(
    edges: &[(usize, usize)],
    rng: &mut SplitMix64,
) -> Vec<(usize, usize, Material)> {
    edges
        .iter()
        .map(|&(u, v)| {
            let kind = if rng.coin() {
                Material::Reflect
            } else {
                Material::Refract
            };
            (u, v, kind)
        })
        .collect()
}

pub fn random_labeling(n: usize, rng: &mut SplitMix64) -> Labeling {
    let mut labels: Vec<usize> = (1..=n).collect();
    rng.shuffle(&mut labels);
    Labeling::from_labels(labels).expect("shuffle keeps a bijection")
}

pub fn random_state(n: usize, rng: &mut SplitMix64) -> State {
    let sigma = random_labeling(n, rng);
    let index = rng.range(1, n);
    let orientation = if rng.coin() { 1 } else { -1 };
    State::new(sigma, index, orientation).expect("generated state is valid")
}

/// All forests on `1..=n`, as edge lists, by filtering every subset of the
/// complete graph for acyclicity.
pub fn enumerate_forests(n: usize) -> Vec<Vec<(usize, usize)>> {
    let all_edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let m = all_edges.len();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << m) {
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut edges = Vec::new();
        for (k, &(u, v)) in all_edges.iter().enumerate() {
            if mask >> k & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru == rv {
                    continue 'mask;
                }
                parent[ru] = rv;
                edges.push((u, v));
            }
        }
        out.push(edges);
    }
    out
}

/// Outcome of a verification suite; suites return `Err` on any mismatch.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub suite: String,
    pub checked: u64,
}

impl VerifySummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("summary serializes")
    }
}

fn forest_mismatch(g: &BilliardsGraph, s: &State, predicted: u64, brute: u64) -> Error {
    Error::VerificationMismatch(format!(
        "forest formula predicts {predicted}, brute force finds {brute} for graph {} and state {}",
        g.to_json(),
        s.to_json()
    ))
}

/// Checks the forest orbit formula against brute force for every forest on
/// `n` vertices, every material partition, and every state.
pub fn verify_forest_exhaustive(n: usize) -> Result<VerifySummary> {
    if n > 6 {
        return Err(Error::CapacityExceeded {
            what: "n",
            got: n,
            max: 6,
        });
    }
    let total_states = 2 * n * factorial(n);
    let mut checked = 0u64;
    for edges in enumerate_forests(n) {
        let m = edges.len();
        for mask in 0u32..(1 << m) {
            let tagged: Vec<(usize, usize, Material)> = edges
                .iter()
                .enumerate()
                .map(|(k, &(u, v))| {
                    let kind = if mask >> k & 1 == 1 {
                        Material::Refract
                    } else {
                        Material::Reflect
                    };
                    (u, v, kind)
                })
                .collect();
            let g = BilliardsGraph::new(n, &tagged)?;
            // Walk each orbit once; every state on it must predict the
            // orbit's true length.
            let mut visited = vec![false; total_states];
            for start in 0..total_states {
                if visited[start] {
                    continue;
                }
                let mut predictions = Vec::new();
                let mut s = state_unrank(n, start);
                let mut len = 0u64;
                loop {
                    visited[dynamics::state_rank(&s)] = true;
                    predictions.push((forest_orbit_size(&g, &s)?, s.clone()));
                    s = theta(&g, &s);
                    len += 1;
                    if dynamics::state_rank(&s) == start {
                        break;
                    }
                }
                for (predicted, witness) in predictions {
                    if predicted != len {
                        return Err(forest_mismatch(&g, &witness, predicted, len));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(VerifySummary {
        suite: format!("forest exhaustive n={n}"),
        checked,
    })
}

/// Checks the forest formula on random (forest, materials, state) triples;
/// trees and proper forests are both sampled.
pub fn verify_forest_random(n: usize, samples: u64, seed: u64) -> Result<VerifySummary> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..samples {
        let mut edges = random_tree(n, &mut rng);
        // Half the samples thin the tree into a forest.
        if rng.coin() {
            edges.retain(|_| rng.below(4) != 0);
        }
        let g = BilliardsGraph::new(n, &random_materials(&edges, &mut rng))?;
        let s = random_state(n, &mut rng);
        let predicted = forest_orbit_size(&g, &s)?;
        let brute = orbit_size(&g, &s);
        if predicted != brute {
            return Err(forest_mismatch(&g, &s, predicted, brute));
        }
    }
    Ok(VerifySummary {
        suite: format!("forest random n={n}"),
        checked: samples,
    })
}

fn check_cycle_labeling(g: &BilliardsGraph, sigma: &Labeling) -> Result<()> {
    let predicted = cycle_orbit_size(g, sigma)?;
    let s = State::new(sigma.clone(), 1, 1)?;
    let brute = orbit_size(g, &s);
    if predicted != brute {
        return Err(Error::VerificationMismatch(format!(
            "cycle formula predicts {predicted}, brute force finds {brute} for graph {} and labeling {}",
            g.to_json(),
            sigma.to_json()
        )));
    }
    // All-reflect specialization: the formula collapses to p*m*n.
    if g.refract_count() == 0 {
        let inv = cycle_invariants(g, sigma)?;
        if predicted != inv.p * inv.m * g.n() as u64 {
            return Err(Error::VerificationMismatch(format!(
                "all-reflect cycle size {predicted} is not p*m*n for labeling {}",
                sigma.to_json()
            )));
        }
    }
    Ok(())
}

/// Checks the cycle orbit formula against brute force for every material
/// assignment with an even number of refraction edges and every labeling.
pub fn verify_cycle_exhaustive(n: usize) -> Result<VerifySummary> {
    if n > 6 {
        return Err(Error::CapacityExceeded {
            what: "n",
            got: n,
            max: 6,
        });
    }
    let mut checked = 0u64;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let kinds: Vec<Material> = (0..n)
            .map(|k| {
                if mask >> k & 1 == 1 {
                    Material::Refract
                } else {
                    Material::Reflect
                }
            })
            .collect();
        let g = BilliardsGraph::cycle(n, &kinds)?;
        for rank in 0..factorial(n) {
            let sigma = Labeling::from_labels(lehmer_unrank(n, rank))?;
            check_cycle_labeling(&g, &sigma)?;
            checked += 1;
        }
    }
    Ok(VerifySummary {
        suite: format!("cycle exhaustive n={n}"),
        checked,
    })
}

/// Randomized version of [`verify_cycle_exhaustive`] for larger n.
pub fn verify_cycle_random(n: usize, samples: u64, seed: u64) -> Result<VerifySummary> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..samples {
        // Even-refraction material assignment.
        let kinds: Vec<Material> = loop {
            let kinds: Vec<Material> = (0..n)
                .map(|_| {
                    if rng.coin() {
                        Material::Refract
                    } else {
                        Material::Reflect
                    }
                })
                .collect();
            if kinds.iter().filter(|&&k| k == Material::Refract).count() % 2 == 0 {
                break kinds;
            }
        };
        let g = BilliardsGraph::cycle(n, &kinds)?;
        let sigma = random_labeling(n, &mut rng);
        check_cycle_labeling(&g, &sigma)?;
    }
    Ok(VerifySummary {
        suite: format!("cycle random n={n}"),
        checked: samples,
    })
}

/// Checks that projecting the lifted dynamics commutes with the dynamics on
/// the torus, over `steps` random steps split across random scenes.
pub fn verify_lift(n: usize, steps: u64, seed: u64) -> Result<VerifySummary> {
    use crate::affine::{theta_tilde, AffinePermutation, AffineState};
    let mut rng = SplitMix64::new(seed);
    let mut done = 0u64;
    while done < steps {
        // Random graph on n vertices with random materials.
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.coin() {
                    edges.push((u, v));
                }
            }
        }
        let g = BilliardsGraph::new(n, &random_materials(&edges, &mut rng))?;
        // Random window: a shuffled base window plus sum-zero shifts of n.
        let mut window: Vec<i64> = (1..=n as i64).collect();
        rng.shuffle(&mut window);
        let mut shift_sum = 0i64;
        for w in window.iter_mut().take(n - 1) {
            let c = rng.range(0, 6) as i64 - 3;
            *w += c * n as i64;
            shift_sum += c;
        }
        window[n - 1] -= shift_sum * n as i64;
        let u = AffinePermutation::from_window(window)?;
        let mut lifted = AffineState::new(
            u,
            rng.range(1, n),
            if rng.coin() { 1 } else { -1 },
        )?;
        let mut projected = lifted.project();
        for _ in 0..rng.range(20, 60) {
            lifted = theta_tilde(&g, &lifted);
            projected = theta(&g, &projected);
            if lifted.project() != projected {
                return Err(Error::VerificationMismatch(format!(
                    "lift does not commute with projection for graph {} at window {:?}",
                    g.to_json(),
                    lifted.u.window()
                )));
            }
            done += 1;
        }
    }
    Ok(VerifySummary {
        suite: format!("lift commutation n={n}"),
        checked: done,
    })
}

/// Checks the coin first-return law and the leaf-cycle rotation congruence
/// on random trees with random materials and starts.
pub fn verify_coin_lemmas(trees: u64, max_n: usize, seed: u64) -> Result<VerifySummary> {
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0u64;
    for _ in 0..trees {
        let n = rng.range(4, max_n.max(4));
        let g = BilliardsGraph::new(n, &random_materials(&random_tree(n, &mut rng), &mut rng))?;
        let start = random_state(n, &mut rng);

        // Enough steps to see several returns: a full orbit never exceeds
        // n * n * (n-1) on a tree.
        let horizon = (2 * n * n * (n - 1)) as u64;
        let trace = dynamics::coin_trace(&g, &start, horizon);

        // First-return law: a crossing into vertex b over the edge {a, b}
        // returns across the same edge after exactly |side of b| * (n-1)
        // steps.
        for t in 0..(horizon / 2) as usize {
            let (a, b) = (trace[t], trace[t + 1]);
            if a == b {
                continue;
            }
            let eta = subtree_size(&g, b, a)?;
            let expected = t as u64 + eta * (n as u64 - 1);
            let actual = (t + 1..trace.len() - 1)
                .find(|&tp| trace[tp] == b && trace[tp + 1] == a)
                .map(|tp| tp as u64);
            if actual != Some(expected) {
                return Err(Error::VerificationMismatch(format!(
                    "crossing {a}->{b} at t={t} returns at {actual:?}, expected {expected} for graph {}",
                    g.to_json()
                )));
            }
            checked += 1;
        }

        // Rotation congruence: from a crossing out of a leaf at time t*, the
        // state at t* + n(n-1) is cyc^delta of the state at t*, with
        // delta = -(|X_1| - |X_{-1}|) mod n for the partition anchored by
        // the coin's side at time t*.
        let t_star = (0..(horizon / 2) as usize).find(|&t| {
            trace[t] != trace[t + 1] && g.degree(trace[t]) == 1
        });
        if let Some(t_star) = t_star {
            let at_star = theta_power(&g, &start, t_star as i64);
            let after = theta_power(&g, &at_star, (n * (n - 1)) as i64);
            let delta = (0..n as i64)
                .find(|&d| cyc_shift(&at_star, d) == after)
                .ok_or_else(|| {
                    Error::VerificationMismatch(format!(
                        "no cyclic rotation relates the leaf-cycle states for graph {}",
                        g.to_json()
                    ))
                })?;
            let component: Vec<usize> = (1..=n).collect();
            let sp = g.sign_partition(&component, coin_position(&at_star))?;
            let (x1, xm1) = if at_star.orientation() == 1 {
                (sp.plus.len() as i64, sp.minus.len() as i64)
            } else {
                (sp.minus.len() as i64, sp.plus.len() as i64)
            };
            if delta.rem_euclid(n as i64) != (-(x1 - xm1)).rem_euclid(n as i64) {
                return Err(Error::VerificationMismatch(format!(
                    "leaf-cycle rotation {delta} is not -(|X1|-|X-1|) mod n for graph {}",
                    g.to_json()
                )));
            }
            checked += 1;
        }
    }
    Ok(VerifySummary {
        suite: format!("coin first-return and rotation congruence, max n = {max_n}"),
        checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = SplitMix64::new(8);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn random_tree_is_a_tree() {
        let mut rng = SplitMix64::new(DEFAULT_SEED);
        for _ in 0..50 {
            let n = rng.range(3, 8);
            let edges = random_tree(n, &mut rng);
            assert_eq!(edges.len(), n - 1);
            let tagged: Vec<_> = edges
                .iter()
                .map(|&(u, v)| (u, v, Material::Reflect))
                .collect();
            let g = BilliardsGraph::new(n, &tagged).unwrap();
            assert!(g.is_forest());
            assert_eq!(g.components().len(), 1);
        }
    }

    #[test]
    fn forests_on_five_vertices_number_291() {
        assert_eq!(enumerate_forests(5).len(), 291);
        assert_eq!(enumerate_forests(3).len(), 7);
    }

    #[test]
    fn small_suites_pass() {
        verify_forest_exhaustive(4).unwrap();
        verify_cycle_exhaustive(4).unwrap();
        verify_forest_random(5, 50, DEFAULT_SEED).unwrap();
        verify_cycle_random(5, 50, DEFAULT_SEED).unwrap();
        verify_lift(3, 500, DEFAULT_SEED).unwrap();
        verify_coin_lemmas(5, 6, DEFAULT_SEED).unwrap();
    }
}
