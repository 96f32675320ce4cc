//! Static SVG emission: stone diagrams, coin diagrams, orbit strips, and the
//! rank-2 triangular alcove picture with an overlaid discrete trajectory.
//! All renderers are pure; identical inputs give identical bytes.

use std::fmt::Write as _;

use crate::affine::{alcove_point_scaled, trajectory_states, AffineState};
use crate::dynamics::{coin_position, orbit_of, orbit_size, State};
use crate::error::{Error, Result};
use crate::graph::{BilliardsGraph, Material};

/// Layout and palette knobs. The defaults are fixed so tests can assert
/// exact bytes. Color roles: red-class for reflection edges and mirrors,
/// teal-class for refraction edges and metalenses, gray-class for windows.
#[derive(Debug, Clone)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub reflect_color: String,
    pub refract_color: String,
    pub window_color: String,
    pub show_labels: bool,
    /// Panel cap for [`render_orbit_strip`].
    pub orbit_cap: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width: 240,
            height: 240,
            reflect_color: "#c0392b".into(),
            refract_color: "#11887b".into(),
            window_color: "#9aa0a6".into(),
            show_labels: true,
            orbit_cap: 64,
        }
    }
}

impl RenderOptions {
    fn color_of(&self, m: Option<Material>) -> &str {
        match m {
            Some(Material::Reflect) => &self.reflect_color,
            Some(Material::Refract) => &self.refract_color,
            None => &self.window_color,
        }
    }
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = write!(
        out,
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" ",
            "viewBox=\"0 0 {w:.0} {h:.0}\">\n"
        ),
        w = width,
        h = height,
    );
    out.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" ",
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">",
        "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#222222\"/></marker></defs>\n"
    ));
}

/// Point on the cycle circle for position `p` (1-based), clockwise from the
/// top. SVG y grows downward, so increasing angle moves clockwise visually.
fn ring_point(p: usize, n: usize, cx: f64, cy: f64, r: f64) -> (f64, f64) {
    let angle = -std::f64::consts::FRAC_PI_2
        + 2.0 * std::f64::consts::PI * ((p - 1) as f64) / (n as f64);
    (cx + r * angle.cos(), cy + r * angle.sin())
}

/// Emits one stone diagram as a `<g>` whose top-left corner is `(ox, oy)`.
fn stone_group(s: &State, opts: &RenderOptions, ox: f64, oy: f64, side: f64) -> String {
    let n = s.n();
    let cx = ox + side / 2.0;
    let cy = oy + side / 2.0;
    let ring = side * 0.36;
    let node_r = side * 0.07;
    let mut out = String::from("<g class=\"stone-diagram\">\n");
    // Base circle for the cycle.
    let _ = writeln!(
        out,
        "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{ring:.2}\" fill=\"none\" stroke=\"#dddddd\" stroke-width=\"1\"/>"
    );
    for p in 1..=n {
        let (x, y) = ring_point(p, n, cx, cy, ring);
        let _ = writeln!(
            out,
            "<circle class=\"position\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{node_r:.2}\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"1\"/>"
        );
        if opts.show_labels {
            let replica = s.sigma().vertex_with(p);
            let _ = writeln!(
                out,
                "<text class=\"replica\" x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{fs:.2}\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"monospace\">v{replica}</text>",
                fs = side * 0.07,
            );
        }
    }
    // Stone marker just outside the ring, with an arrow along the chord
    // toward the position the stone points at.
    let stone = s.stone_vertex();
    let target = s.target_vertex();
    let (sx, sy) = ring_point(stone, n, cx, cy, ring * 1.28);
    let (tx, ty) = ring_point(target, n, cx, cy, ring * 1.28);
    let stone_r = side * 0.035;
    let _ = writeln!(
        out,
        "<circle class=\"stone\" cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"{stone_r:.2}\" fill=\"#222222\"/>"
    );
    // Shorten the arrow so the head does not overlap the target node.
    let (mx, my) = (sx + 0.62 * (tx - sx), sy + 0.62 * (ty - sy));
    let _ = writeln!(
        out,
        "<line class=\"stone-arrow\" data-from=\"{stone}\" data-to=\"{target}\" x1=\"{sx:.2}\" y1=\"{sy:.2}\" x2=\"{mx:.2}\" y2=\"{my:.2}\" stroke=\"#222222\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>"
    );
    out.push_str("</g>\n");
    out
}

/// Stone diagram of a single state.
pub fn render_stone_diagram(s: &State, opts: &RenderOptions) -> String {
    let (w, h) = (opts.width as f64, opts.height as f64);
    let mut out = String::new();
    svg_open(&mut out, w, h);
    out.push_str(&stone_group(s, opts, 0.0, 0.0, w.min(h)));
    out.push_str("</svg>\n");
    out
}

/// Coin diagram: the graph on a circular layout, edges colored by material,
/// and a coin on the vertex whose replica sits on the stone.
pub fn render_coin_diagram(g: &BilliardsGraph, s: &State, opts: &RenderOptions) -> String {
    let n = g.n();
    let (w, h) = (opts.width as f64, opts.height as f64);
    let side = w.min(h);
    let cx = w / 2.0;
    let cy = h / 2.0;
    let ring = side * 0.36;
    let node_r = side * 0.07;
    let mut out = String::new();
    svg_open(&mut out, w, h);
    for &(u, v, kind) in g.edges() {
        let (x1, y1) = ring_point(u, n, cx, cy, ring);
        let (x2, y2) = ring_point(v, n, cx, cy, ring);
        let class = match kind {
            Material::Reflect => "edge reflect",
            Material::Refract => "edge refract",
        };
        let _ = writeln!(
            out,
            "<line class=\"{class}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{color}\" stroke-width=\"2.5\"/>",
            color = opts.color_of(Some(kind)),
        );
    }
    let coin = coin_position(s);
    for v in 1..=n {
        let (x, y) = ring_point(v, n, cx, cy, ring);
        let _ = writeln!(
            out,
            "<circle class=\"vertex\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{node_r:.2}\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"1\"/>"
        );
        if v == coin {
            let _ = writeln!(
                out,
                "<circle class=\"coin\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r:.2}\" fill=\"none\" stroke=\"#b8860b\" stroke-width=\"2.5\"/>",
                r = node_r * 1.5,
            );
        }
        if opts.show_labels {
            let _ = writeln!(
                out,
                "<text class=\"vertex-name\" x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{fs:.2}\" text-anchor=\"middle\" dominant-baseline=\"central\" font-family=\"monospace\">v{v}</text>",
                fs = side * 0.07,
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// The full orbit of `s` as a horizontal strip of stone diagrams in Theta
/// order. Errors if the orbit exceeds `opts.orbit_cap`.
pub fn render_orbit_strip(g: &BilliardsGraph, s: &State, opts: &RenderOptions) -> Result<String> {
    let size = orbit_size(g, s);
    if size > opts.orbit_cap {
        return Err(Error::OrbitTooLarge {
            size,
            cap: opts.orbit_cap,
        });
    }
    let panel = opts.height as f64;
    let orbit = orbit_of(g, s);
    let mut out = String::new();
    svg_open(&mut out, panel * orbit.len() as f64, panel);
    for (k, state) in orbit.iter().enumerate() {
        out.push_str(&stone_group(state, opts, panel * k as f64, 0.0, panel));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Orthonormal in-plane coordinates for the sum-zero plane in R^3:
/// X along (1,-1,0)/sqrt2 and Y along (1,1,-2)/sqrt6.
fn plane_coords(p: &[i64], scale: f64) -> (f64, f64) {
    let (a, b, c) = (p[0] as f64, p[1] as f64, p[2] as f64);
    (
        (a - b) / 2f64.sqrt() / scale,
        (a + b - 2.0 * c) / 6f64.sqrt() / scale,
    )
}

/// Intersection of the line `a*x + b*y = c` with a bounding box, as a drawn
/// segment, or `None` when it misses the box.
fn clip_line_to_box(
    a: f64,
    b: f64,
    c: f64,
    (x0, y0, x1, y1): (f64, f64, f64, f64),
) -> Option<((f64, f64), (f64, f64))> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let eps = 1e-9;
    if a.abs() > eps {
        for y in [y0, y1] {
            let x = (c - b * y) / a;
            if x >= x0 - eps && x <= x1 + eps {
                pts.push((x, y));
            }
        }
    }
    if b.abs() > eps {
        for x in [x0, x1] {
            let y = (c - a * x) / b;
            if y >= y0 - eps && y <= y1 + eps {
                pts.push((x, y));
            }
        }
    }
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < 1e-7 && (p.1 - q.1).abs() < 1e-7);
    if pts.len() < 2 {
        return None;
    }
    // Keep the two extreme intersection points.
    pts.sort_by(|p, q| p.partial_cmp(q).expect("finite coordinates"));
    Some((pts[0], *pts.last().unwrap()))
}

/// The triangular alcove grid for n = 3 with hyperplane families colored by
/// material, overlaid with the discrete trajectory as a polyline through
/// alcove interior points.
pub fn render_alcove_trajectory(
    g: &BilliardsGraph,
    start: &AffineState,
    steps: u64,
    opts: &RenderOptions,
) -> Result<String> {
    let n = g.n();
    if n != 3 || start.u.n() != 3 {
        return Err(Error::UnsupportedRank { n });
    }
    let states = trajectory_states(g, start, steps);
    // Alcove points are scaled by 2n = 6.
    let pts: Vec<(f64, f64)> = states
        .iter()
        .map(|s| plane_coords(&alcove_point_scaled(&s.u), 6.0))
        .collect();
    let margin = 1.0;
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - margin;
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + margin;
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - margin;
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + margin;
    let scale = (opts.width as f64 / (max_x - min_x)).min(opts.height as f64 / (max_y - min_y));
    let to_px = |(x, y): (f64, f64)| -> (f64, f64) {
        ((x - min_x) * scale, (max_y - y) * scale)
    };

    let mut out = String::new();
    svg_open(
        &mut out,
        (max_x - min_x) * scale,
        (max_y - min_y) * scale,
    );
    // Hyperplane families x_i - x_j = k in plane coordinates:
    // (1,2): sqrt2 * X = k; (1,3): X/sqrt2 + sqrt(3/2) Y = k;
    // (2,3): -X/sqrt2 + sqrt(3/2) Y = k.
    let families: [(usize, usize, f64, f64); 3] = [
        (1, 2, 2f64.sqrt(), 0.0),
        (1, 3, 1.0 / 2f64.sqrt(), (1.5f64).sqrt()),
        (2, 3, -1.0 / 2f64.sqrt(), (1.5f64).sqrt()),
    ];
    let bbox = (min_x, min_y, max_x, max_y);
    for (i, j, a, b) in families {
        let color = opts.color_of(g.material_of(i, j));
        // Levels k whose line can meet the box.
        let corners = [
            a * min_x + b * min_y,
            a * min_x + b * max_y,
            a * max_x + b * min_y,
            a * max_x + b * max_y,
        ];
        let k_lo = corners.iter().fold(f64::INFINITY, |m, &v| m.min(v)).floor() as i64;
        let k_hi = corners
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
            .ceil() as i64;
        for k in k_lo..=k_hi {
            if let Some((p, q)) = clip_line_to_box(a, b, k as f64, bbox) {
                let (x1, y1) = to_px(p);
                let (x2, y2) = to_px(q);
                let _ = writeln!(
                    out,
                    "<line class=\"wall wall-{i}-{j}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{color}\" stroke-width=\"1.2\"/>"
                );
            }
        }
    }
    let path: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = to_px(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(
        out,
        "<polyline class=\"trajectory\" points=\"{}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"2\"/>",
        path.join(" ")
    );
    let (sx, sy) = to_px(pts[0]);
    let _ = writeln!(
        out,
        "<circle class=\"trajectory-start\" cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"3.00\" fill=\"#222222\"/>"
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffinePermutation;
    use crate::graph::Labeling;
    use Material::{Reflect, Refract};

    fn fig1() -> BilliardsGraph {
        BilliardsGraph::new(3, &[(1, 2, Reflect), (2, 3, Refract)]).unwrap()
    }

    fn state(labels: Vec<usize>, i: usize, eps: i8) -> State {
        State::new(Labeling::from_labels(labels).unwrap(), i, eps).unwrap()
    }

    #[test]
    fn stone_diagram_structure() {
        let opts = RenderOptions::default();
        let svg = render_stone_diagram(&state(vec![1, 2, 3], 1, 1), &opts);
        assert_eq!(svg.matches("class=\"position\"").count(), 3);
        assert_eq!(svg.matches("class=\"stone-arrow\"").count(), 1);
        // From the worked triple (sigma, 2, -1): stone on 3, pointing at 2.
        let svg = render_stone_diagram(&state(vec![3, 1, 2], 2, -1), &opts);
        assert!(svg.contains("data-from=\"3\" data-to=\"2\""));
    }

    #[test]
    fn renders_are_deterministic() {
        let opts = RenderOptions::default();
        let s = state(vec![3, 1, 2], 2, -1);
        assert_eq!(
            render_stone_diagram(&s, &opts),
            render_stone_diagram(&s, &opts)
        );
        let g = fig1();
        assert_eq!(
            render_coin_diagram(&g, &s, &opts),
            render_coin_diagram(&g, &s, &opts)
        );
    }

    #[test]
    fn coin_diagram_structure() {
        let opts = RenderOptions::default();
        let g = fig1();
        let svg = render_coin_diagram(&g, &state(vec![1, 2, 3], 1, 1), &opts);
        assert_eq!(svg.matches("class=\"edge reflect\"").count(), 1);
        assert_eq!(svg.matches("class=\"edge refract\"").count(), 1);
        assert_eq!(svg.matches("class=\"coin\"").count(), 1);
        // Coin on vertex 1: drawn right after vertex 1's node.
        let v1 = svg.find("v1</text>").unwrap();
        let coin = svg.find("class=\"coin\"").unwrap();
        assert!(coin < v1);

        let g = BilliardsGraph::edgeless(3).unwrap();
        let svg = render_coin_diagram(&g, &state(vec![1, 2, 3], 1, 1), &opts);
        assert_eq!(svg.matches("class=\"edge").count(), 0);
    }

    #[test]
    fn orbit_strip_panel_counts() {
        let opts = RenderOptions::default();
        let g = fig1();
        let svg = render_orbit_strip(&g, &state(vec![1, 2, 3], 1, 1), &opts).unwrap();
        assert_eq!(svg.matches("class=\"stone-diagram\"").count(), 18);

        let g = BilliardsGraph::edgeless(3).unwrap();
        let svg = render_orbit_strip(&g, &state(vec![1, 2, 3], 1, 1), &opts).unwrap();
        assert_eq!(svg.matches("class=\"stone-diagram\"").count(), 6);
    }

    #[test]
    fn orbit_strip_respects_cap() {
        let opts = RenderOptions {
            orbit_cap: 4,
            ..RenderOptions::default()
        };
        assert_eq!(
            render_orbit_strip(&fig1(), &state(vec![1, 2, 3], 1, 1), &opts),
            Err(Error::OrbitTooLarge { size: 18, cap: 4 })
        );
    }

    #[test]
    fn alcove_trajectory_structure() {
        let opts = RenderOptions::default();
        let g = BilliardsGraph::edgeless(3).unwrap();
        let start = AffineState::new(AffinePermutation::identity(3), 1, 1).unwrap();
        let svg = render_alcove_trajectory(&g, &start, 10, &opts).unwrap();
        let polyline = svg
            .lines()
            .find(|l| l.contains("class=\"trajectory\""))
            .unwrap();
        // 11 alcove interior points on the polyline.
        let points = polyline.split_once("points=\"").unwrap().1;
        let points = points.split_once('"').unwrap().0;
        assert_eq!(points.split(' ').count(), 11);

        let g4 = BilliardsGraph::edgeless(4).unwrap();
        let start4 = AffineState::new(AffinePermutation::identity(4), 1, 1).unwrap();
        assert_eq!(
            render_alcove_trajectory(&g4, &start4, 5, &opts),
            Err(Error::UnsupportedRank { n: 4 })
        );
    }
}
