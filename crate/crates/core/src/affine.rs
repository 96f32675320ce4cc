//! Window-notation arithmetic for the affine symmetric group, the projection
//! to finite permutations, the lifted dynamics on alcove-indexed states, the
//! direction vector nu, and separating hyperplanes with their canonical
//! (i, j, level) normal form.

use serde::{Deserialize, Serialize};

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::graph::{wrap_add, BilliardsGraph, Labeling, Material};

/// An affine permutation `u` in window notation `[u(1), ..., u(n)]`,
/// extended to all of Z by `u(x + n) = u(x) + n`. The entries have pairwise
/// distinct residues mod n and sum to `n(n+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct WindowWire {
    window: Vec<i64>,
}

impl AffinePermutation {
    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let n = window.len();
        if n < 3 {
            return Err(Error::BadInput(format!(
                "window length must be at least 3, got {n}"
            )));
        }
        let mut seen = vec![false; n];
        for &w in &window {
            let r = w.rem_euclid(n as i64) as usize;
            if seen[r] {
                return Err(Error::BadResidues);
            }
            seen[r] = true;
        }
        let expected = (n as i64) * (n as i64 + 1) / 2;
        let actual: i64 = window.iter().sum();
        if actual != expected {
            return Err(Error::BadSum { expected, actual });
        }
        Ok(Self { window })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            window: (1..=n as i64).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// Value at any integer, via periodicity.
    pub fn apply(&self, x: i64) -> i64 {
        let n = self.n() as i64;
        let r = (x - 1).rem_euclid(n) + 1;
        let q = (x - r) / n;
        self.window[(r - 1) as usize] + q * n
    }

    /// Function composition `self . other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n(), other.n());
        Self {
            window: other.window.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n();
        let mut window = vec![0i64; n];
        for p in 1..=n as i64 {
            let y = self.window[(p - 1) as usize];
            let r = (y - 1).rem_euclid(n as i64) + 1;
            // u(p + m n) = y + m n = r  =>  u^{-1}(r) = p + (r - y)/n * n.
            window[(r - 1) as usize] = p + (r - y);
        }
        Self { window }
    }

    /// Left multiplication by the simple reflection: `s~_i . self`. The
    /// reflection swaps the values congruent to `i` and `i + 1` mod n, so
    /// each window entry moves by at most one.
    pub fn left_mul_simple(&self, i: usize) -> Self {
        let n = self.n() as i64;
        debug_assert!(i >= 1 && i as i64 <= n);
        let window = self
            .window
            .iter()
            .map(|&x| match (x - i as i64).rem_euclid(n) {
                0 => x + 1,
                1 => x - 1,
                _ => x,
            })
            .collect();
        Self { window }
    }

    /// Reduction of the window modulo n into `1..=n`, as a labeling of the
    /// vertex set `1..=n`.
    pub fn project(&self) -> Labeling {
        let n = self.n() as i64;
        let labels = self
            .window
            .iter()
            .map(|&w| ((w - 1).rem_euclid(n) + 1) as usize)
            .collect();
        Labeling::from_labels(labels).expect("distinct residues project to a bijection")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: WindowWire = serde_json::from_str(text)?;
        Self::from_window(wire.window)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WindowWire {
            window: self.window.clone(),
        })
        .expect("window serializes")
    }
}

/// The affine hyperplane `{x : x_i - x_j = level}` with `1 <= i < j <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Hyperplane {
    pub i: usize,
    pub j: usize,
    pub level: i64,
}

/// An integer vector with entries summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorootVector {
    entries: Vec<i64>,
}

impl CorootVector {
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
}

/// The direction vector of a lifted state: entry `eps * (1 - n)` in the
/// position of the projected inverse at the stone label, `eps` elsewhere.
pub fn nu(u: &AffinePermutation, i: usize, eps: i8) -> CorootVector {
    let n = u.n();
    let stone_label = if eps == 1 { i } else { wrap_add(i, 1, n) };
    let pos = u.project().vertex_with(stone_label);
    let mut entries = vec![eps as i64; n];
    entries[pos - 1] = (eps as i64) * (1 - n as i64);
    CorootVector { entries }
}

/// Canonical form of the reflection that swaps the residue classes of `a`
/// and `b` in steps of n: the unique hyperplane it fixes. The two simple
/// walls pin the convention: `r_{i,i+1}` fixes level 0 of `(i, i+1)` and
/// `r_{n,n+1}` fixes level 1 of `(1, n)`.
fn canonical_hyperplane(a: i64, b: i64, n: usize) -> Hyperplane {
    let n = n as i64;
    let ar = (a - 1).rem_euclid(n) + 1;
    let br = (b - 1).rem_euclid(n) + 1;
    debug_assert_ne!(ar, br);
    let level = ((ar - a) - (br - b)) / n;
    if ar < br {
        Hyperplane {
            i: ar as usize,
            j: br as usize,
            level: -level,
        }
    } else {
        Hyperplane {
            i: br as usize,
            j: ar as usize,
            level,
        }
    }
}

/// The unique hyperplane separating the alcoves of `u` and `s~_i . u`; the
/// reflection between them is `u^{-1} s~_i u = r_{u^{-1}(i), u^{-1}(i+1)}`.
pub fn separating_hyperplane(u: &AffinePermutation, i: usize) -> Hyperplane {
    let inv = u.inverse();
    let a = inv.apply(i as i64);
    let b = inv.apply(i as i64 + 1);
    canonical_hyperplane(a, b, u.n())
}

/// A lifted state: an affine permutation plus the index and orientation of
/// the discretized beam.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineState {
    pub u: AffinePermutation,
    pub index: usize,
    pub orientation: i8,
}

impl AffineState {
    pub fn new(u: AffinePermutation, index: usize, orientation: i8) -> Result<Self> {
        if index == 0 || index > u.n() {
            return Err(Error::InvalidState(format!(
                "index {index} out of range 1..={}",
                u.n()
            )));
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidState(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        Ok(Self {
            u,
            index,
            orientation,
        })
    }

    /// The projected state on the torus.
    pub fn project(&self) -> State {
        State::new(self.u.project(), self.index, self.orientation)
            .expect("lifted state projects to a valid state")
    }
}

/// One step of the lifted dynamics. The wall between the alcoves of `u` and
/// `s~_i u` is classified by the edge `{ubar^{-1}(i), ubar^{-1}(i+1)}` of
/// `g`: a non-edge is a window, a reflection edge a mirror, a refraction
/// edge a metalens.
pub fn theta_tilde(g: &BilliardsGraph, s: &AffineState) -> AffineState {
    let n = s.u.n();
    debug_assert_eq!(g.n(), n);
    let i = s.index;
    let projected = s.u.project();
    let a = projected.vertex_with(i);
    let b = projected.vertex_with(wrap_add(i, 1, n));
    let (u, index, orientation) = match g.material_of(a, b) {
        None => (
            s.u.left_mul_simple(i),
            wrap_add(i, s.orientation as i64, n),
            s.orientation,
        ),
        Some(Material::Reflect) => (
            s.u.clone(),
            wrap_add(i, s.orientation as i64, n),
            s.orientation,
        ),
        Some(Material::Refract) => (
            s.u.left_mul_simple(i),
            wrap_add(i, -(s.orientation as i64), n),
            -s.orientation,
        ),
    };
    AffineState {
        u,
        index,
        orientation,
    }
}

/// The discrete billiards trajectory: `steps + 1` lifted states starting at
/// `start`, in iteration order.
pub fn trajectory_states(g: &BilliardsGraph, start: &AffineState, steps: u64) -> Vec<AffineState> {
    let mut out = Vec::with_capacity(steps as usize + 1);
    out.push(start.clone());
    for _ in 0..steps {
        let next = theta_tilde(g, out.last().unwrap());
        out.push(next);
    }
    out
}

/// The first components of [`trajectory_states`].
pub fn trajectory(g: &BilliardsGraph, start: &AffineState, steps: u64) -> Vec<AffinePermutation> {
    trajectory_states(g, start, steps)
        .into_iter()
        .map(|s| s.u)
        .collect()
}

#[derive(Serialize)]
struct TrajectoryStateWire {
    labels: Vec<usize>,
    i: usize,
    eps: i8,
}

#[derive(Serialize)]
struct TrajectoryWire {
    windows: Vec<Vec<i64>>,
    projected: Vec<TrajectoryStateWire>,
}

/// JSON report of a trajectory: the window of every visited alcove plus the
/// projected state stream on the torus.
pub fn trajectory_json(g: &BilliardsGraph, start: &AffineState, steps: u64) -> String {
    let states = trajectory_states(g, start, steps);
    let wire = TrajectoryWire {
        windows: states.iter().map(|s| s.u.window().to_vec()).collect(),
        projected: states
            .iter()
            .map(|s| TrajectoryStateWire {
                labels: s.u.project().labels().to_vec(),
                i: s.index,
                eps: s.orientation,
            })
            .collect(),
    };
    serde_json::to_string(&wire).expect("trajectory serializes")
}

/// An interior point of the alcove of `u`, scaled by `2n` so every
/// coordinate is an integer: the image of the base alcove's centroid under
/// the right action `x . u = (x_{ubar(1)}, ..., x_{ubar(n)}) - d(u)`, where
/// `d(u)_j = (u(j) - ubar(j)) / n`.
pub fn alcove_point_scaled(u: &AffinePermutation) -> Vec<i64> {
    let n = u.n() as i64;
    u.window()
        .iter()
        .map(|&w| {
            let ubar = (w - 1).rem_euclid(n) + 1;
            let d = (w - ubar) / n;
            (n + 1 - 2 * ubar) - 2 * n * d
        })
        .collect()
}
