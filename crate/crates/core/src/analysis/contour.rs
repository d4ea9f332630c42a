//! Zero contours of a function on a 2D grid by marching squares. Cell
//! topology comes from corner signs alone; each edge crossing is then
//! located by bisection along the edge.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::analysis::roots::{bisect, crosses_pole, RESIDUAL_TOLERANCE};
use crate::analysis::sweep::{Axis, Base};
use crate::circuit::OperatingPoint;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourChain {
    /// Ordered (first-axis, second-axis) coordinates.
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    /// For open chains: whether each end lies on the outer grid edge (as
    /// opposed to stopping next to a pole or an unevaluable point).
    pub starts_on_boundary: bool,
    pub ends_on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub chains: Vec<ContourChain>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Edge {
    /// (i, j)–(i+1, j)
    H(usize, usize),
    /// (i, j)–(i, j+1)
    V(usize, usize),
}

impl Edge {
    fn ends(self) -> ((usize, usize), (usize, usize)) {
        match self {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        }
    }

    fn on_boundary(self, nx: usize, ny: usize) -> bool {
        match self {
            Edge::H(_, j) => j == 0 || j + 1 == ny,
            Edge::V(i, _) => i == 0 || i + 1 == nx,
        }
    }
}

struct Sample {
    value: Option<f64>,
    poles: Vec<f64>,
}

pub fn zero_contour(
    base: &Base,
    first: &Axis,
    second: &Axis,
    eval: impl Fn(&OperatingPoint) -> Option<f64> + Sync,
    poles: impl Fn(&OperatingPoint) -> Vec<f64> + Sync,
) -> Contour {
    let xs = first.values();
    let ys = second.values();
    let (nx, ny) = (xs.len(), ys.len());
    let at = |u: f64, v: f64| {
        base.set(first.variable, u)
            .set(second.variable, v)
            .grid_point()
            .point
    };
    let samples: Vec<Sample> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let p = at(xs[k / ny], ys[k % ny]);
            Sample {
                value: eval(&p).filter(|v| v.is_finite()),
                poles: poles(&p),
            }
        })
        .collect();
    let s = |i: usize, j: usize| &samples[i * ny + j];
    let positive = |i: usize, j: usize| s(i, j).value.map(|v| v >= 0.0);

    let mut diagnostics = Vec::new();
    let crossing = |e: Edge| -> bool {
        let ((i0, j0), (i1, j1)) = e.ends();
        match (positive(i0, j0), positive(i1, j1)) {
            (Some(a), Some(b)) if a != b => !crosses_pole(&s(i0, j0).poles, &s(i1, j1).poles),
            _ => false,
        }
    };

    let mut adjacency: HashMap<Edge, Vec<Edge>> = HashMap::new();
    let link = |adjacency: &mut HashMap<Edge, Vec<Edge>>, a: Edge, b: Edge| {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    };
    let mut skipped = 0usize;
    for i in 0..nx.saturating_sub(1) {
        for j in 0..ny.saturating_sub(1) {
            let sides = [
                Edge::H(i, j),
                Edge::V(i + 1, j),
                Edge::H(i, j + 1),
                Edge::V(i, j),
            ];
            let hits: Vec<Edge> = sides.iter().copied().filter(|&e| crossing(e)).collect();
            match hits.len() {
                2 => link(&mut adjacency, hits[0], hits[1]),
                4 => {
                    let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                    let mean = corners
                        .iter()
                        .map(|&(a, b)| s(a, b).value.unwrap_or(0.0))
                        .sum::<f64>()
                        / 4.0;
                    let [bottom, right, top, left] = sides;
                    if (mean >= 0.0) == positive(i, j).unwrap_or(true) {
                        link(&mut adjacency, bottom, right);
                        link(&mut adjacency, top, left);
                    } else {
                        link(&mut adjacency, left, bottom);
                        link(&mut adjacency, right, top);
                    }
                }
                0 => {}
                _ => {
                    skipped += 1;
                    for pair in hits.chunks(2).filter(|c| c.len() == 2) {
                        link(&mut adjacency, pair[0], pair[1]);
                    }
                    for &e in hits.iter().skip(hits.len() / 2 * 2) {
                        adjacency.entry(e).or_default();
                    }
                }
            }
        }
    }
    if skipped > 0 {
        diagnostics.push(format!(
            "{skipped} cell(s) next to poles or missing values left open"
        ));
    }

    let coord = |(i, j): (usize, usize)| (xs[i], ys[j]);
    let locate = |e: Edge| -> (f64, f64) {
        let ((i0, j0), (i1, j1)) = e.ends();
        let (p0, p1) = (coord((i0, j0)), coord((i1, j1)));
        let f0 = s(i0, j0).value.expect("crossing edges have values");
        let along = |t: f64| eval(&at(p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1)));
        let t = match bisect(&along, 0.0, 1.0, f0, 1e-12) {
            Some((lo, hi)) => 0.5 * (lo + hi),
            None => 0.5,
        };
        (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1))
    };

    let mut nodes: Vec<Edge> = adjacency.keys().copied().collect();
    nodes.sort();
    let mut visited: HashMap<Edge, bool> = nodes.iter().map(|&e| (e, false)).collect();
    let mut chains = Vec::new();
    let walk = |start: Edge, visited: &mut HashMap<Edge, bool>| -> (Vec<Edge>, bool) {
        let mut path = vec![start];
        visited.insert(start, true);
        let mut current = start;
        loop {
            let next = adjacency[&current].iter().copied().find(|n| !visited[n]);
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    path.push(n);
                    current = n;
                }
                None => {
                    let closed = path.len() > 2 && adjacency[&current].contains(&start);
                    return (path, closed);
                }
            }
        }
    };
    // Open chains first, started from their degree-one ends.
    for &e in &nodes {
        if !visited[&e] && adjacency[&e].len() < 2 {
            let (path, _) = walk(e, &mut visited);
            chains.push((path, false));
        }
    }
    for &e in &nodes {
        if !visited[&e] {
            let (path, closed) = walk(e, &mut visited);
            chains.push((path, closed));
        }
    }

    let chains = chains
        .into_iter()
        .map(|(path, closed)| {
            let mut points: Vec<(f64, f64)> = path.iter().map(|&e| locate(e)).collect();
            if closed {
                points.push(points[0]);
            }
            ContourChain {
                starts_on_boundary: !closed && path[0].on_boundary(nx, ny),
                ends_on_boundary: !closed && path[path.len() - 1].on_boundary(nx, ny),
                points,
                closed,
            }
        })
        .collect::<Vec<_>>();

    let bad = chains
        .iter()
        .flat_map(|c| c.points.iter())
        .filter(|&&(u, v)| eval(&at(u, v)).is_none_or(|f| f.abs() > RESIDUAL_TOLERANCE))
        .count();
    if bad > 0 {
        diagnostics.push(format!(
            "{bad} contour point(s) exceed the residual tolerance"
        ));
    }
    Contour {
        chains,
        diagnostics,
    }
}
