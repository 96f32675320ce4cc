//! Billiards graphs: simple graphs on vertices `1..=n` whose edges are each
//! tagged as a reflection edge or a refraction edge, together with bijective
//! labelings and the sign partitions behind the statistics chi and mu.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Material of an edge: crossing a reflection edge keeps the labeling and
/// advances the index; crossing a refraction edge swaps labels and reverses
/// the orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Reflect,
    Refract,
}

#[derive(Serialize, Deserialize)]
struct EdgeWire {
    u: usize,
    v: usize,
    kind: Material,
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    n: usize,
    edges: Vec<EdgeWire>,
}

/// A simple graph on vertices `1..=n` (n >= 3) with every edge tagged by a
/// [`Material`]. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilliardsGraph {
    n: usize,
    /// Normalized `(a, b, material)` with `a < b`, sorted.
    edges: Vec<(usize, usize, Material)>,
    /// Adjacency lists, indexed by vertex - 1.
    adj: Vec<Vec<usize>>,
    /// Dense material lookup, indexed by `(a-1)*n + (b-1)` in both orders.
    material: Vec<Option<Material>>,
}

impl BilliardsGraph {
    /// Validates a raw description and builds the graph. Rejects n < 3,
    /// loops, duplicate edges, out-of-range vertices.
    pub fn new(n: usize, raw_edges: &[(usize, usize, Material)]) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "need at least 3 vertices, got {n}"
            )));
        }
        let mut edges: Vec<(usize, usize, Material)> = Vec::with_capacity(raw_edges.len());
        // Normalize each pair to a < b; sort by endpoints for determinism.
        for &(u, v, kind) in raw_edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{u}, {v}}} out of range 1..={n}"
                )));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            edges.push((a, b, kind));
        }
        edges.sort_unstable_by_key(|&(a, b, _)| (a, b));
        if edges.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidGraph("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut material = vec![None; n * n];
        for &(a, b, kind) in &edges {
            adj[a - 1].push(b);
            adj[b - 1].push(a);
            material[(a - 1) * n + (b - 1)] = Some(kind);
            material[(b - 1) * n + (a - 1)] = Some(kind);
        }
        Ok(Self {
            n,
            edges,
            adj,
            material,
        })
    }

    /// Edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    /// Path `1 - 2 - ... - n` with the given edge materials (one per edge).
    pub fn path(n: usize, kinds: &[Material]) -> Result<Self> {
        if kinds.len() + 1 != n {
            return Err(Error::InvalidGraph("path needs n-1 materials".into()));
        }
        let edges: Vec<_> = (1..n).map(|v| (v, v + 1, kinds[v - 1])).collect();
        Self::new(n, &edges)
    }

    /// Cycle `1 - 2 - ... - n - 1` with the given edge materials; `kinds[k]`
    /// tags the edge `{k+1, k+2}` and `kinds[n-1]` tags `{n, 1}`.
    pub fn cycle(n: usize, kinds: &[Material]) -> Result<Self> {
        if kinds.len() != n {
            return Err(Error::InvalidGraph("cycle needs n materials".into()));
        }
        let mut edges: Vec<_> = (1..n).map(|v| (v, v + 1, kinds[v - 1])).collect();
        edges.push((n, 1, kinds[n - 1]));
        Self::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Material)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v - 1]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].len()
    }

    /// Material of the edge `{u, v}`, or `None` if the pair is not an edge.
    pub fn material_of(&self, u: usize, v: usize) -> Option<Material> {
        self.material[(u - 1) * self.n + (v - 1)]
    }

    pub fn refract_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|&&(_, _, k)| k == Material::Refract)
            .count()
    }

    pub fn reflect_count(&self) -> usize {
        self.edges.len() - self.refract_count()
    }

    /// Vertex set of the connected component containing `v`, sorted.
    pub fn connected_component_of(&self, v: usize) -> Vec<usize> {
        debug_assert!(v >= 1 && v <= self.n);
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([v]);
        seen[v - 1] = true;
        while let Some(w) = queue.pop_front() {
            for &x in self.neighbors(w) {
                if !seen[x - 1] {
                    seen[x - 1] = true;
                    queue.push_back(x);
                }
            }
        }
        (1..=self.n).filter(|&w| seen[w - 1]).collect()
    }

    /// All connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for v in 1..=self.n {
            if !seen[v - 1] {
                let comp = self.connected_component_of(v);
                for &w in &comp {
                    seen[w - 1] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.n
    }

    pub fn is_cycle(&self) -> bool {
        (1..=self.n).all(|v| self.degree(v) == 2) && self.components().len() == 1
    }

    /// Two-colors `component` so that refraction edges cross the partition
    /// and reflection edges stay inside one side, with `anchor` placed in
    /// `plus`. Exists for trees always; for a cycle iff the number of
    /// refraction edges on the cycle is even.
    pub fn sign_partition(&self, component: &[usize], anchor: usize) -> Result<SignPartition> {
        debug_assert!(component.contains(&anchor));
        let mut in_comp = vec![false; self.n];
        for &v in component {
            in_comp[v - 1] = true;
        }
        // +1 / -1 coloring; 0 = unassigned.
        let mut color = vec![0i8; self.n];
        color[anchor - 1] = 1;
        let mut queue = VecDeque::from([anchor]);
        while let Some(v) = queue.pop_front() {
            for &w in self.neighbors(v) {
                if !in_comp[w - 1] {
                    continue;
                }
                let flip = self.material_of(v, w) == Some(Material::Refract);
                let want = if flip { -color[v - 1] } else { color[v - 1] };
                if color[w - 1] == 0 {
                    color[w - 1] = want;
                    queue.push_back(w);
                } else if color[w - 1] != want {
                    return Err(Error::OddRefractionCycle);
                }
            }
        }
        let plus = component
            .iter()
            .copied()
            .filter(|&v| color[v - 1] == 1)
            .collect();
        let minus = component
            .iter()
            .copied()
            .filter(|&v| color[v - 1] == -1)
            .collect();
        Ok(SignPartition { plus, minus })
    }

    /// `chi` of a component: `||plus| - |minus||` of its sign partition.
    /// Anchor-independent, since swapping the sides preserves the value.
    pub fn chi(&self, component: &[usize]) -> Result<u64> {
        let sp = self.sign_partition(component, component[0])?;
        Ok(sp.plus.len().abs_diff(sp.minus.len()) as u64)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: GraphWire = serde_json::from_str(text)?;
        let edges: Vec<_> = wire.edges.iter().map(|e| (e.u, e.v, e.kind)).collect();
        Self::new(wire.n, &edges)
    }

    pub fn to_json(&self) -> String {
        let wire = GraphWire {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|&(u, v, kind)| EdgeWire { u, v, kind })
                .collect(),
        };
        serde_json::to_string(&wire).expect("graph serializes")
    }
}

/// Two-coloring of a component in which every refraction edge crosses sides
/// and every reflection edge stays inside a side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPartition {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LabelingWire {
    labels: Vec<usize>,
}

/// A bijection from vertices `1..=n` to labels `1..=n` (representing Z/nZ),
/// stored in both directions so lookups run in O(1) either way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    label: Vec<usize>,
    inverse: Vec<usize>,
}

impl Labeling {
    /// Builds from `labels[v-1] = label of vertex v`, validating bijectivity.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        let mut inverse = vec![0usize; n];
        for (idx, &l) in labels.iter().enumerate() {
            if l == 0 || l > n {
                return Err(Error::InvalidLabeling(format!(
                    "label {l} out of range 1..={n}"
                )));
            }
            if inverse[l - 1] != 0 {
                return Err(Error::InvalidLabeling(format!("label {l} repeats")));
            }
            inverse[l - 1] = idx + 1;
        }
        Ok(Self {
            label: labels,
            inverse,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            label: (1..=n).collect(),
            inverse: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.label.len()
    }

    /// sigma(v).
    pub fn label_of(&self, v: usize) -> usize {
        self.label[v - 1]
    }

    /// sigma^{-1}(l).
    pub fn vertex_with(&self, l: usize) -> usize {
        self.inverse[l - 1]
    }

    pub fn labels(&self) -> &[usize] {
        &self.label
    }

    /// Swaps which vertices carry the label values `l1` and `l2`.
    pub(crate) fn swap_values(&mut self, l1: usize, l2: usize) {
        let a = self.inverse[l1 - 1];
        let b = self.inverse[l2 - 1];
        self.label[a - 1] = l2;
        self.label[b - 1] = l1;
        self.inverse.swap(l1 - 1, l2 - 1);
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: LabelingWire = serde_json::from_str(text)?;
        Self::from_labels(wire.labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LabelingWire {
            labels: self.label.clone(),
        })
        .expect("labeling serializes")
    }
}

/// Wraps an index into `1..=n` after adding a (possibly negative) offset.
/// Representatives of Z/nZ live in `{1..n}` so that `n + 1 == 1`.
pub(crate) fn wrap_add(i: usize, delta: i64, n: usize) -> usize {
    (((i as i64 - 1 + delta).rem_euclid(n as i64)) + 1) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use Material::{Reflect, Refract};

    fn fig1() -> BilliardsGraph {
        BilliardsGraph::new(3, &[(1, 2, Reflect), (2, 3, Refract)]).unwrap()
    }

    #[test]
    fn validate_accepts_fig1_path() {
        let g = fig1();
        assert_eq!(g.n(), 3);
        assert_eq!(g.material_of(1, 2), Some(Reflect));
        assert_eq!(g.material_of(3, 2), Some(Refract));
        assert_eq!(g.material_of(1, 3), None);
    }

    #[test]
    fn validate_accepts_edgeless() {
        let g = BilliardsGraph::edgeless(3).unwrap();
        assert!(g.edges().is_empty());
    }

    #[test]
    fn validate_rejects_loops_duplicates_and_small_n() {
        assert!(matches!(
            BilliardsGraph::new(3, &[(1, 1, Reflect)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            BilliardsGraph::new(3, &[(1, 2, Reflect), (2, 1, Refract)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            BilliardsGraph::new(2, &[]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            BilliardsGraph::new(3, &[(1, 4, Reflect)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn component_of_connected_and_isolated() {
        assert_eq!(fig1().connected_component_of(2), vec![1, 2, 3]);
        let g = BilliardsGraph::edgeless(3).unwrap();
        assert_eq!(g.connected_component_of(2), vec![2]);
        let g = BilliardsGraph::new(4, &[(1, 2, Reflect), (3, 4, Refract)]).unwrap();
        assert_eq!(g.connected_component_of(1), vec![1, 2]);
    }

    #[test]
    fn sign_partition_fig1() {
        let g = fig1();
        let sp = g.sign_partition(&[1, 2, 3], 1).unwrap();
        assert_eq!(sp.plus, vec![1, 2]);
        assert_eq!(sp.minus, vec![3]);
    }

    #[test]
    fn sign_partition_seven_cycle_example() {
        // Cycle v1..v7 with reflect {2,3},{3,4},{5,6}; refract elsewhere.
        let g = BilliardsGraph::cycle(
            7,
            &[
                Refract, Reflect, Reflect, Refract, Reflect, Refract, Refract,
            ],
        )
        .unwrap();
        let all: Vec<usize> = (1..=7).collect();
        let sp = g.sign_partition(&all, 7).unwrap();
        assert_eq!(sp.plus, vec![2, 3, 4, 7]);
        assert_eq!(sp.minus, vec![1, 5, 6]);
    }

    #[test]
    fn sign_partition_odd_refraction_triangle_fails() {
        let g = BilliardsGraph::cycle(3, &[Refract; 3]).unwrap();
        assert_eq!(
            g.sign_partition(&[1, 2, 3], 1),
            Err(Error::OddRefractionCycle)
        );
    }

    #[test]
    fn sign_partition_exists_iff_refraction_count_even_on_cycles() {
        for n in 3..=8 {
            for mask in 0u32..(1 << n) {
                let kinds: Vec<Material> = (0..n)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            Refract
                        } else {
                            Reflect
                        }
                    })
                    .collect();
                let g = BilliardsGraph::cycle(n, &kinds).unwrap();
                let comp: Vec<usize> = (1..=n).collect();
                let got = g.sign_partition(&comp, 1);
                if mask.count_ones() % 2 == 0 {
                    assert!(got.is_ok(), "n={n} mask={mask:b}");
                } else {
                    assert_eq!(got, Err(Error::OddRefractionCycle), "n={n} mask={mask:b}");
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(fig1().chi(&[1, 2, 3]).unwrap(), 1);
        // Path on 5 vertices, all refract: chi = 1 for odd n.
        let g = BilliardsGraph::path(5, &[Refract; 4]).unwrap();
        assert_eq!(g.chi(&[1, 2, 3, 4, 5]).unwrap(), 1);
        // Star on n vertices with r refraction edges: chi = |n - 2r|.
        for n in [4usize, 5, 6] {
            for r in 0..n {
                let edges: Vec<_> = (2..=n)
                    .enumerate()
                    .map(|(k, v)| (1, v, if k < r { Refract } else { Reflect }))
                    .collect();
                let g = BilliardsGraph::new(n, &edges).unwrap();
                let comp: Vec<usize> = (1..=n).collect();
                assert_eq!(g.chi(&comp).unwrap() as i64, (n as i64 - 2 * r as i64).abs());
            }
        }
    }

    #[test]
    fn chi_is_anchor_independent() {
        let graphs = [
            fig1(),
            BilliardsGraph::new(
                5,
                &[(1, 2, Refract), (2, 3, Reflect), (2, 5, Refract), (3, 4, Refract)],
            )
            .unwrap(),
            BilliardsGraph::path(4, &[Refract; 3]).unwrap(),
        ];
        for g in graphs {
            for comp in g.components() {
                let base = g.sign_partition(&comp, comp[0]).unwrap();
                let chi = g.chi(&comp).unwrap();
                for &anchor in &comp {
                    let sp = g.sign_partition(&comp, anchor).unwrap();
                    let same = sp == base;
                    let swapped = sp.plus == base.minus && sp.minus == base.plus;
                    assert!(same || swapped);
                    assert_eq!(sp.plus.len().abs_diff(sp.minus.len()) as u64, chi);
                }
            }
        }
    }

    #[test]
    fn labeling_round_trip_and_validation() {
        let l = Labeling::from_labels(vec![3, 1, 2]).unwrap();
        for v in 1..=3 {
            assert_eq!(l.vertex_with(l.label_of(v)), v);
            assert_eq!(l.label_of(l.vertex_with(v)), v);
        }
        assert!(Labeling::from_labels(vec![1, 1, 3]).is_err());
        assert!(Labeling::from_labels(vec![0, 1, 2]).is_err());
    }

    #[test]
    fn graph_json_round_trip() {
        let g = fig1();
        let text = g.to_json();
        assert_eq!(
            text,
            r#"{"n":3,"edges":[{"u":1,"v":2,"kind":"reflect"},{"u":2,"v":3,"kind":"refract"}]}"#
        );
        assert_eq!(BilliardsGraph::from_json(&text).unwrap(), g);
        assert!(BilliardsGraph::from_json(r#"{"n":3,"edges":[{"u":1,"v":2,"kind":"mirror"}]}"#).is_err());
    }

    #[test]
    fn labeling_json_round_trip() {
        let l = Labeling::from_labels(vec![2, 3, 1]).unwrap();
        let text = l.to_json();
        assert_eq!(text, r#"{"labels":[2,3,1]}"#);
        assert_eq!(Labeling::from_json(&text).unwrap(), l);
    }
}
