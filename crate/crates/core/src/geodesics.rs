//! Directed geodesics, allowable geodesics and polygonal paths.
//!
//! A sequence of simplices `σ_0, …, σ_n` is a directed geodesic when
//! consecutive simplices are disjoint and span a simplex, and for every
//! interior position the residue of `σ_i` in the link of `σ_{i+1}` misses
//! the 1-ball of `σ_{i+2}` there.

use std::collections::{BTreeSet, VecDeque};

use crate::complex::{ComplexFragment, Simplex, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedGeodesic {
    pub simplices: Vec<Simplex>,
}

impl DirectedGeodesic {
    pub fn new(simplices: Vec<Simplex>) -> Self {
        DirectedGeodesic { simplices }
    }

    pub fn from_vertices(vertices: &[VertexId]) -> Self {
        DirectedGeodesic {
            simplices: vertices.iter().map(|&v| vec![v]).collect(),
        }
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn first(&self) -> &Simplex {
        &self.simplices[0]
    }

    pub fn last(&self) -> &Simplex {
        &self.simplices[self.simplices.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        let mut simplices = self.simplices.clone();
        simplices.reverse();
        DirectedGeodesic { simplices }
    }

    pub fn display(&self, fragment: &ComplexFragment) -> String {
        self.simplices
            .iter()
            .map(|s| {
                let names: Vec<String> = s
                    .iter()
                    .map(|&v| fragment.key(v).display(fragment.oracle()))
                    .collect();
                format!("{{{}}}", names.join(", "))
            })
            .collect::<Vec<_>>()
            .join(" -> ")
    }
}

/// The first condition that fails, by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Entry `i` is empty or not a simplex of the fragment.
    NotSimplex(usize),
    /// Entries `i` and `i + 1` overlap or do not span a simplex.
    NotSpanning(usize),
    /// The residue of entry `i` meets the 1-ball of entry `i + 2` in the
    /// link of entry `i + 1`.
    ResidueMeetsBall(usize),
}

fn disjoint_and_spanning(fragment: &ComplexFragment, s: &[VertexId], t: &[VertexId]) -> bool {
    s.iter()
        .all(|&x| t.iter().all(|&y| x != y && fragment.adjacent(x, y)))
        && s.len() + t.len() <= 5
}

/// `Ok(None)` when `seq` is a directed geodesic, otherwise the first
/// violation.
pub fn find_violation(fragment: &ComplexFragment, seq: &[Simplex]) -> Result<Option<Violation>> {
    for (i, s) in seq.iter().enumerate() {
        if s.is_empty() || !fragment.is_simplex(s) {
            return Ok(Some(Violation::NotSimplex(i)));
        }
    }
    for i in 0..seq.len().saturating_sub(1) {
        if !disjoint_and_spanning(fragment, &seq[i], &seq[i + 1]) {
            return Ok(Some(Violation::NotSpanning(i)));
        }
    }
    for i in 0..seq.len().saturating_sub(2) {
        if !fragment.residue_avoids_ball(&seq[i], &seq[i + 1], &seq[i + 2])? {
            return Ok(Some(Violation::ResidueMeetsBall(i)));
        }
    }
    Ok(None)
}

pub fn is_directed_geodesic(fragment: &ComplexFragment, seq: &[Simplex]) -> Result<bool> {
    Ok(find_violation(fragment, seq)?.is_none())
}

/// Breadth-first distances from `source`, up to `cap` (unreached vertices
/// get `u32::MAX`).
pub fn distances_from(fragment: &ComplexFragment, source: VertexId, cap: u32) -> Vec<u32> {
    let mut dist = vec![u32::MAX; fragment.vertex_count()];
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u as usize];
        if d >= cap {
            continue;
        }
        for &x in fragment.neighbors(u) {
            if dist[x as usize] == u32::MAX {
                dist[x as usize] = d + 1;
                queue.push_back(x);
            }
        }
    }
    dist
}

/// 1-skeleton distance between two vertices, provided one of them is far
/// enough from the frontier for every path of that length to be visible.
pub fn distance(fragment: &ComplexFragment, v: VertexId, w: VertexId) -> Result<u32> {
    let bv = fragment.boundary_distance(v);
    let bw = fragment.boundary_distance(w);
    let (source, target, margin) = if bv >= bw { (v, w, bv) } else { (w, v, bw) };
    let d = distances_from(fragment, source, margin)[target as usize];
    if d == u32::MAX || d.saturating_add(1) > margin {
        return Err(Error::InsufficientRadius(format!(
            "distance between {} and {} is not determined inside the fragment",
            fragment.key(v).display(fragment.oracle()),
            fragment.key(w).display(fragment.oracle()),
        )));
    }
    Ok(d)
}

/// Vertices of the 1-skeleton geodesics from `v` to `w`, by distance from `v`.
fn geodesic_layers(fragment: &ComplexFragment, v: VertexId, w: VertexId) -> Result<Vec<Vec<VertexId>>> {
    let n = distance(fragment, v, w)? as usize;
    // Distances from both ends are exact here: whichever end has the margin
    // sees every path of length n, and the layers only use such paths.
    let from_v = distances_from(fragment, v, n as u32);
    let from_w = distances_from(fragment, w, n as u32);
    let mut layers = vec![Vec::new(); n + 1];
    for x in 0..fragment.vertex_count() as VertexId {
        let (a, b) = (from_v[x as usize], from_w[x as usize]);
        if a != u32::MAX && b != u32::MAX && (a + b) as usize == n {
            layers[a as usize].push(x);
        }
    }
    Ok(layers)
}

/// Every directed geodesic of length `d(v, w)` from `v` to `w`, stopping
/// after `limit` are found.
pub fn directed_geodesics_between(
    fragment: &ComplexFragment,
    v: VertexId,
    w: VertexId,
    limit: usize,
) -> Result<Vec<DirectedGeodesic>> {
    let layers = geodesic_layers(fragment, v, w)?;
    let n = layers.len() - 1;
    let mut out = Vec::new();
    let mut path: Vec<Simplex> = vec![vec![v]];
    extend_layers(fragment, &layers, n, &mut path, &mut out, limit)?;
    Ok(out)
}

fn extend_layers(
    fragment: &ComplexFragment,
    layers: &[Vec<VertexId>],
    n: usize,
    path: &mut Vec<Simplex>,
    out: &mut Vec<DirectedGeodesic>,
    limit: usize,
) -> Result<()> {
    if out.len() >= limit {
        return Ok(());
    }
    let i = path.len();
    if i == n + 1 {
        out.push(DirectedGeodesic::new(path.clone()));
        return Ok(());
    }
    let prev = &path[i - 1];
    let mut pool: Vec<VertexId> = layers[i]
        .iter()
        .copied()
        .filter(|&x| prev.iter().all(|&p| fragment.adjacent(p, x)))
        .collect();
    pool.sort_unstable();
    let candidates: Vec<Simplex> = if i == n {
        vec![layers[n].clone()]
    } else {
        fragment.cliques_within(&pool)
    };
    for sigma in candidates {
        if !disjoint_and_spanning(fragment, &path[i - 1], &sigma) {
            continue;
        }
        if i >= 2 && !fragment.residue_avoids_ball(&path[i - 2], &path[i - 1], &sigma)? {
            continue;
        }
        path.push(sigma);
        extend_layers(fragment, layers, n, path, out, limit)?;
        path.pop();
    }
    Ok(())
}

/// The unique directed geodesic from `v` to `w`.
pub fn directed_geodesic_between(
    fragment: &ComplexFragment,
    v: VertexId,
    w: VertexId,
) -> Result<DirectedGeodesic> {
    let mut found = directed_geodesics_between(fragment, v, w, 2)?;
    if found.len() != 1 {
        return Err(Error::NotUnique(found.len()));
    }
    Ok(found.pop().expect("one geodesic"))
}

/// All vertex paths through the simplices of `gamma`, each checked to be a
/// path in the 1-skeleton of length `n`.
pub fn allowable_geodesics_of(fragment: &ComplexFragment, gamma: &DirectedGeodesic) -> Result<Vec<Vec<VertexId>>> {
    let mut paths: Vec<Vec<VertexId>> = vec![Vec::new()];
    for s in &gamma.simplices {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                s.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    for p in &paths {
        if p.windows(2).any(|e| !fragment.adjacent(e[0], e[1])) {
            return Err(Error::Construction("allowable path is not an edge path".into()));
        }
    }
    if gamma.first().len() == 1 && gamma.last().len() == 1 && gamma.len() > 0 {
        let d = distance(fragment, gamma.first()[0], gamma.last()[0])? as usize;
        if d != gamma.len() {
            return Err(Error::Construction(format!(
                "allowable path of length {} between vertices at distance {d}",
                gamma.len()
            )));
        }
    }
    Ok(paths)
}

/// `σ_0, σ_0∗σ_1, σ_1, …, σ_n`.
pub fn polygonal_path_of(gamma: &DirectedGeodesic) -> Vec<Simplex> {
    let mut out = Vec::with_capacity(2 * gamma.simplices.len());
    for (k, s) in gamma.simplices.iter().enumerate() {
        if k > 0 {
            let span: BTreeSet<VertexId> = gamma.simplices[k - 1].iter().chain(s).copied().collect();
            out.push(span.into_iter().collect());
        }
        out.push(s.clone());
    }
    out
}

/// Replaces the last simplex by one of its vertices and, if that vertex is
/// interior, continues through the complex until a real vertex is reached.
/// Among all such extensions the shortest is returned, ties broken by
/// vertex ids; `max_steps` bounds the number of added vertices.
pub fn extend_to_real_vertex(
    fragment: &ComplexFragment,
    gamma: &DirectedGeodesic,
    max_steps: usize,
) -> Result<DirectedGeodesic> {
    let n = gamma.len();
    let last = gamma.last();
    let head = &gamma.simplices[..n];
    // Lemma: truncating the last simplex to any of its vertices keeps a
    // directed geodesic, so a real vertex there finishes immediately.
    if let Some(&v) = last.iter().find(|&&v| fragment.key(v).is_real()) {
        let mut simplices = head.to_vec();
        simplices.push(vec![v]);
        return Ok(DirectedGeodesic::new(simplices));
    }
    let mut best: Option<Vec<Simplex>> = None;
    for &start in last {
        let mut frontier: Vec<Vec<Simplex>> = vec![{
            let mut s = head.to_vec();
            s.push(vec![start]);
            s
        }];
        for _ in 0..max_steps {
            let mut next = Vec::new();
            let mut done: Option<Vec<Simplex>> = None;
            for path in &frontier {
                let k = path.len();
                let current = path[k - 1][0];
                let mut candidates = fragment.neighbors(current).to_vec();
                candidates.sort_unstable();
                for x in candidates {
                    if k >= 2 && !fragment.residue_avoids_ball(&path[k - 2], &path[k - 1], &[x])? {
                        continue;
                    }
                    let mut extended = path.clone();
                    extended.push(vec![x]);
                    if fragment.key(x).is_real() {
                        done = Some(extended);
                        break;
                    }
                    next.push(extended);
                }
                if done.is_some() {
                    break;
                }
            }
            if let Some(found) = done {
                let better = match &best {
                    None => true,
                    Some(b) => found.len() < b.len(),
                };
                if better {
                    best = Some(found);
                }
                break;
            }
            frontier = next;
        }
    }
    best.map(DirectedGeodesic::new).ok_or_else(|| {
        Error::Construction(format!(
            "no extension to a real vertex within {max_steps} steps from {}",
            gamma.display(fragment)
        ))
    })
}
