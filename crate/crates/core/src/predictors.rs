//! Closed-form orbit-size predictors: the forest formula driven by chi, and
//! the cycle formula driven by the gap sequence (a_0, ..., a_{n-2}) with its
//! period p, normalized sum m, and the sign statistic mu.

use serde::Serialize;

use crate::dynamics::{coin_position, gcd, State};
use crate::error::{Error, Result};
use crate::graph::{BilliardsGraph, Labeling, Material};

/// Orbit size of a state when the graph is a forest:
/// `|V_T| * n * (n-1) / gcd(n, chi(T))`, where `T` is the component holding
/// the coin.
pub fn forest_orbit_size(g: &BilliardsGraph, s: &State) -> Result<u64> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let n = g.n() as u64;
    let component = g.connected_component_of(coin_position(s));
    let chi = g.chi(&component)?;
    Ok(component.len() as u64 * n * (n - 1) / gcd(n, chi))
}

/// Size of the side of the edge split `{l, lp}` containing `l` (the vertices
/// closer to `l` than to `lp`). The edge must belong to a tree component.
pub fn subtree_size(g: &BilliardsGraph, l: usize, lp: usize) -> Result<u64> {
    if g.material_of(l, lp).is_none() {
        return Err(Error::NotATreeEdge { l, lp });
    }
    let component = g.connected_component_of(l);
    let edges_inside = component
        .iter()
        .map(|&v| g.degree(v))
        .sum::<usize>()
        / 2;
    if edges_inside != component.len() - 1 {
        return Err(Error::NotATreeEdge { l, lp });
    }
    // BFS from l that refuses to cross the split edge.
    let mut seen = vec![false; g.n()];
    seen[l - 1] = true;
    let mut stack = vec![l];
    let mut size = 0u64;
    while let Some(v) = stack.pop() {
        size += 1;
        for &w in g.neighbors(v) {
            if (v, w) == (l, lp) || (v, w) == (lp, l) {
                continue;
            }
            if !seen[w - 1] {
                seen[w - 1] = true;
                stack.push(w);
            }
        }
    }
    Ok(size)
}

/// A cycle graph renamed into canonical order `v_1, ..., v_n`: `v_n` is the
/// vertex labeled 1, and of its two cycle neighbors, `v_1` is the one with
/// the smaller label. Edge materials ride along: `materials[k]` tags the
/// edge between `order[k]` and `order[(k+1) % n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCycle {
    pub order: Vec<usize>,
    pub materials: Vec<Material>,
}

pub fn canonicalize_cycle(g: &BilliardsGraph, sigma: &Labeling) -> Result<CanonicalCycle> {
    if !g.is_cycle() {
        return Err(Error::NotACycle);
    }
    let n = g.n();
    let vn = sigma.vertex_with(1);
    let nb = g.neighbors(vn);
    debug_assert_eq!(nb.len(), 2);
    let v1 = if sigma.label_of(nb[0]) < sigma.label_of(nb[1]) {
        nb[0]
    } else {
        nb[1]
    };
    // Walk the cycle from v_1 away from v_n.
    let mut order = Vec::with_capacity(n);
    let mut prev = vn;
    let mut cur = v1;
    for _ in 0..n - 1 {
        order.push(cur);
        let next = *g
            .neighbors(cur)
            .iter()
            .find(|&&w| w != prev)
            .expect("cycle vertex has two neighbors");
        prev = cur;
        cur = next;
    }
    debug_assert_eq!(cur, vn);
    order.push(vn);
    let materials = (0..n)
        .map(|k| {
            g.material_of(order[k], order[(k + 1) % n])
                .expect("consecutive canonical vertices are adjacent")
        })
        .collect();
    Ok(CanonicalCycle { order, materials })
}

/// The gap sequence `(a_0, ..., a_{n-2})` of a canonically ordered cycle:
/// `a_k` is 1 plus the number of replicas other than the one of `v_n`
/// crossed on the clockwise walk from the replica of `v_k` to the replica of
/// `v_{k+1}` (the `k = 0` walk runs from `v_{n-1}` to `v_1`). Computed in
/// closed form as the label difference mod n, minus one when the cycle
/// vertex 1 lies strictly inside the walk.
pub fn cycle_a_sequence(canon: &CanonicalCycle, sigma: &Labeling) -> Vec<u64> {
    let n = canon.order.len();
    let pos: Vec<usize> = canon.order.iter().map(|&v| sigma.label_of(v)).collect();
    debug_assert_eq!(pos[n - 1], 1);
    let gap = |x: usize, y: usize| -> u64 {
        let d = (y as i64 - x as i64).rem_euclid(n as i64) as u64;
        let one_inside = ((1i64 - x as i64).rem_euclid(n as i64) as u64) < d;
        d - u64::from(one_inside)
    };
    let mut a = Vec::with_capacity(n - 1);
    a.push(gap(pos[n - 2], pos[0]));
    for k in 1..=n - 2 {
        a.push(gap(pos[k - 1], pos[k]));
    }
    a
}

/// Invariants of a labeled cycle with an even number of refraction edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleInvariants {
    pub a: Vec<u64>,
    /// Least period of the (n-1)-periodic extension of `a`; divides n-1.
    pub p: u64,
    /// `sum(a) = m * (n-1)`.
    pub m: u64,
    /// Size of the plus side of the sign partition anchored at `v_n`.
    pub mu: u64,
    #[serde(skip)]
    pub ordering: Vec<usize>,
}

impl CycleInvariants {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("invariants serialize")
    }
}

pub fn cycle_invariants(g: &BilliardsGraph, sigma: &Labeling) -> Result<CycleInvariants> {
    let canon = canonicalize_cycle(g, sigma)?;
    let n = g.n();
    let a = cycle_a_sequence(&canon, sigma);
    let sum: u64 = a.iter().sum();
    debug_assert_eq!(sum % (n as u64 - 1), 0);
    let m = sum / (n as u64 - 1);
    // The least period divides n-1, so only divisors need testing.
    let period = (1..=n - 1)
        .filter(|d| (n - 1).is_multiple_of(*d))
        .find(|&d| (0..n - 1).all(|j| a[(j + d) % (n - 1)] == a[j]))
        .expect("n-1 is always a period");
    let all: Vec<usize> = (1..=n).collect();
    let vn = canon.order[n - 1];
    let sp = g.sign_partition(&all, vn)?;
    Ok(CycleInvariants {
        a,
        p: period as u64,
        m,
        mu: sp.plus.len() as u64,
        ordering: canon.order,
    })
}

/// Orbit size of `(sigma, 1, 1)` on a cycle with an even number of
/// refraction edges:
/// `n * p / gcd(n, mu) * (mu * m + (n - mu) * (n - 1 - m))`.
pub fn cycle_orbit_size(g: &BilliardsGraph, sigma: &Labeling) -> Result<u64> {
    let inv = cycle_invariants(g, sigma)?;
    let n = g.n() as u64;
    Ok(n * inv.p / gcd(n, inv.mu) * (inv.mu * inv.m + (n - inv.mu) * (n - 1 - inv.m)))
}

/// Closed-form orbit size when one is known: the forest formula for forests,
/// the cycle formula (after omega-normalization) for even-refraction cycles,
/// `None` otherwise.
pub fn closed_form_orbit_size(g: &BilliardsGraph, s: &State) -> Result<Option<u64>> {
    if g.is_forest() {
        return forest_orbit_size(g, s).map(Some);
    }
    if g.is_cycle() && g.refract_count().is_multiple_of(2) {
        let normalized = crate::dynamics::omega_normalize(s);
        return cycle_orbit_size(g, normalized.sigma()).map(Some);
    }
    Ok(None)
}
