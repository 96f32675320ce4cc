//! Toric promotion with reflections and refractions.
//!
//! A billiards graph is a simple graph on `1..=n` whose edges are reflection
//! or refraction edges. The map Theta acts on triples (labeling, index,
//! orientation): when the labels `i` and `i+1` sit on a non-edge the labels
//! swap and the index advances; on a reflection edge only the index
//! advances; on a refraction edge the labels swap and the orientation
//! reverses. This crate provides:
//!
//! - [`dynamics`]: Theta, its inverse and powers, full orbit enumeration,
//!   normalization, cyclic shifts, toric promotion, stone and coin diagrams;
//! - [`predictors`]: closed-form orbit sizes for forests and for cycles with
//!   an even number of refraction edges;
//! - [`sieving`]: tableau combinatorics, exact q-polynomials, and the cyclic
//!   sieving verifier for all-refraction even cycles;
//! - [`affine`]: the lift to window notation, separating hyperplanes, and
//!   discrete billiards trajectories;
//! - [`render`]: deterministic SVG diagrams;
//! - [`verify`]: seeded suites comparing every predictor against brute force.

pub mod affine;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod predictors;
pub mod render;
pub mod sieving;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{BilliardsGraph, Labeling, Material, SignPartition};

pub use dynamics::{
    coin_position, coin_trace, cyc_shift, fixed_point_count, omega_normalize,
    orbit_decomposition, orbit_decomposition_threaded, orbit_size, state_rank, state_unrank,
    stone_diagram, theta, theta_inverse, theta_power, toric_promotion, OrbitClass, OrbitReport,
    State, StoneDiagram, MAX_ENUM_N,
};

pub use predictors::{
    canonicalize_cycle, closed_form_orbit_size, cycle_a_sequence, cycle_invariants,
    cycle_orbit_size, forest_orbit_size, subtree_size, CanonicalCycle, CycleInvariants,
};

pub use sieving::{
    csp_polynomial, f_div_count, f_poly, gamma_count, maj, partitions_of, standard_tableaux,
    verify_csp, CspReport, IntPolynomial, Partition, Tableau,
};

pub use affine::{
    alcove_point_scaled, nu, separating_hyperplane, theta_tilde, trajectory, trajectory_json,
    trajectory_states, AffinePermutation, AffineState, CorootVector, Hyperplane,
};

pub use render::{
    render_alcove_trajectory, render_coin_diagram, render_orbit_strip, render_stone_diagram,
    RenderOptions,
};
