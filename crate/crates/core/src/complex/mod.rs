//! Finite fragments of the systolic complex built from the Cayley graph.
//!
//! Every precell (the relator cycle `_m(a_i,a_j) _m(a_j,a_i)⁻¹` read from a
//! real vertex) whose boundary lies in the ball is triangulated; interior
//! vertices of overlapping precells are then joined according to the
//! overlap pattern for their label, and cliques are filled in.
//!
//! A fragment is always the full subcomplex of the infinite complex on its
//! vertex set, so the link of a simplex is exact as soon as one of its
//! vertices is *complete* (has all of its neighbours in the fragment).

mod build;
mod overlap;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coxeter::FinitePair;
use crate::error::{Error, Result};
use crate::oracle::{Element, Oracle};

pub use build::{build_fragment, build_fragment_with, BuildOptions, OverlapMode};
pub use overlap::{overlap_pattern, OverlapPattern, OverlapSlot};

pub type VertexId = u32;

/// Sorted list of vertex ids.
pub type Simplex = Vec<VertexId>;

/// Symbolic name of a vertex, independent of any fragment.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VertexKey {
    Real(Element),
    /// Interior vertex `index` (1-based, along the spine) of the precell
    /// based at `base` for the finite pair `(i, j)`.
    Interior {
        base: Element,
        pair: (u8, u8),
        index: u8,
    },
}

impl VertexKey {
    /// The group element that carries the orbit representative to this
    /// vertex: the element itself, or the base of the precell.
    pub fn anchor(&self) -> &Element {
        match self {
            VertexKey::Real(g) => g,
            VertexKey::Interior { base, .. } => base,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, VertexKey::Real(_))
    }

    /// Left translate by `g`.
    pub fn translate(&self, oracle: &Oracle, g: &Element) -> Result<VertexKey> {
        Ok(match self {
            VertexKey::Real(h) => VertexKey::Real(oracle.multiply(g, h)?),
            VertexKey::Interior { base, pair, index } => VertexKey::Interior {
                base: oracle.multiply(g, base)?,
                pair: *pair,
                index: *index,
            },
        })
    }

    /// Left translate by `g⁻¹`.
    pub fn translate_inverse(&self, oracle: &Oracle, g: &Element) -> Result<VertexKey> {
        Ok(match self {
            VertexKey::Real(h) => VertexKey::Real(oracle.quotient(g, h)?),
            VertexKey::Interior { base, pair, index } => VertexKey::Interior {
                base: oracle.quotient(g, base)?,
                pair: *pair,
                index: *index,
            },
        })
    }

    /// One-token form: `<word>` for a real vertex, `<base>:<gen><gen>:<index>`
    /// for an interior one.
    pub fn token(&self, oracle: &Oracle) -> String {
        let mx = oracle.matrix();
        match self {
            VertexKey::Real(g) => oracle.format(g),
            VertexKey::Interior { base, pair, index } => format!(
                "{}:{}{}:{}",
                oracle.format(base),
                mx.name(pair.0 as usize),
                mx.name(pair.1 as usize),
                index
            ),
        }
    }

    /// Text form: `r <word>` or `i <base> <gen> <gen> <index>`.
    pub fn display(&self, oracle: &Oracle) -> String {
        let mx = oracle.matrix();
        match self {
            VertexKey::Real(g) => format!("r {}", oracle.format(g)),
            VertexKey::Interior { base, pair, index } => format!(
                "i {} {} {} {}",
                oracle.format(base),
                mx.name(pair.0 as usize),
                mx.name(pair.1 as usize),
                index
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CellCounts {
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
}

#[derive(Clone, Debug)]
pub struct Precell {
    pub base: Element,
    pub pair: FinitePair,
    /// Vertices along `_m(a_i,a_j)` from the initial vertex; `None` when
    /// outside the ball.
    pub upper: Vec<Option<VertexId>>,
    /// Vertices along `_m(a_j,a_i)`.
    pub lower: Vec<Option<VertexId>>,
    pub interior: Vec<VertexId>,
    pub complete: bool,
    /// Cells added by the triangulation (zero when incomplete).
    pub added: CellCounts,
}

impl Precell {
    pub fn initial(&self) -> Option<VertexId> {
        self.upper[0]
    }

    pub fn terminal(&self) -> Option<VertexId> {
        *self.upper.last().expect("nonempty")
    }

    /// Boundary cycle of `2m` vertices when complete.
    pub fn boundary(&self) -> Option<Vec<VertexId>> {
        if !self.complete {
            return None;
        }
        let mut out: Vec<VertexId> = self.upper.iter().map(|v| v.expect("complete")).collect();
        let m = self.lower.len() - 1;
        out.extend(self.lower[1..m].iter().rev().map(|v| v.expect("complete")));
        Some(out)
    }
}

/// A finite subcomplex, closed under faces; stores every simplex including
/// vertices as one-element lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    simplices: BTreeSet<Simplex>,
}

impl Subcomplex {
    /// Full subcomplex of `fragment` induced on `vertices`.
    fn induced(fragment: &ComplexFragment, vertices: &[VertexId]) -> Subcomplex {
        let mut simplices = BTreeSet::new();
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for c in fragment.cliques_within(&sorted) {
            simplices.insert(c);
        }
        Subcomplex { simplices }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 1)
            .map(|s| s[0])
            .collect()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.len() == dim + 1).count()
    }

    pub fn contains(&self, sigma: &[VertexId]) -> bool {
        self.simplices.contains(sigma)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            simplices: self.simplices.intersection(&other.simplices).cloned().collect(),
        }
    }

    pub fn max_dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }
}

/// An induced 4- or 5-cycle in the link of a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub vertex: VertexId,
    pub cycle: Vec<VertexId>,
}

#[derive(Clone, Debug, Default)]
pub struct SixLargeReport {
    pub checked: usize,
    pub witnesses: Vec<CycleWitness>,
}

impl SixLargeReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub struct ComplexFragment {
    pub(crate) oracle: Arc<Oracle>,
    pub(crate) radius: usize,
    pub(crate) keys: Vec<VertexKey>,
    pub(crate) index: HashMap<VertexKey, VertexId>,
    pub(crate) adjacency: Vec<Vec<VertexId>>,
    /// `simplices[d]` lists the `d`-simplices, `d = 0..=4`.
    pub(crate) simplices: Vec<Vec<Simplex>>,
    pub(crate) precells: Vec<Precell>,
    pub(crate) precell_index: HashMap<(Element, FinitePair), usize>,
    pub(crate) complete: Vec<bool>,
    pub(crate) boundary_distance: Vec<u32>,
    pub(crate) overlap_edges: usize,
}

/// Marker for vertices with no incomplete vertex in their component.
pub const UNBOUNDED: u32 = u32::MAX;

impl ComplexFragment {
    pub fn oracle(&self) -> &Arc<Oracle> {
        &self.oracle
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn key(&self, v: VertexId) -> &VertexKey {
        &self.keys[v as usize]
    }

    pub fn id(&self, key: &VertexKey) -> Option<VertexId> {
        self.index.get(key).copied()
    }

    /// Looks up a vertex, failing with `InsufficientRadius` when it lies
    /// outside the fragment.
    pub fn require(&self, key: &VertexKey) -> Result<VertexId> {
        self.id(key).ok_or_else(|| {
            Error::InsufficientRadius(format!(
                "vertex {} lies outside the radius-{} fragment",
                key.display(&self.oracle),
                self.radius
            ))
        })
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v as usize]
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_dimension(&self) -> usize {
        (0..self.simplices.len())
            .rev()
            .find(|&d| !self.simplices[d].is_empty())
            .unwrap_or(0)
    }

    pub fn precells(&self) -> &[Precell] {
        &self.precells
    }

    pub fn precell(&self, base: &Element, pair: FinitePair) -> Option<&Precell> {
        self.precell_index
            .get(&(base.clone(), pair))
            .map(|&k| &self.precells[k])
    }

    pub fn overlap_edge_count(&self) -> usize {
        self.overlap_edges
    }

    /// Whether every neighbour of `v` in the full complex is present.
    pub fn is_complete(&self, v: VertexId) -> bool {
        self.complete[v as usize]
    }

    /// Graph distance to the nearest vertex missing from the fragment.
    pub fn boundary_distance(&self, v: VertexId) -> u32 {
        self.boundary_distance[v as usize]
    }

    pub fn is_simplex(&self, sigma: &[VertexId]) -> bool {
        sigma
            .iter()
            .enumerate()
            .all(|(k, &u)| sigma[k + 1..].iter().all(|&w| u != w && self.adjacent(u, w)))
    }

    /// Errors unless some vertex of `sigma` is complete, i.e. its link is
    /// exactly visible.
    pub fn require_visible_link(&self, sigma: &[VertexId]) -> Result<()> {
        if sigma.iter().any(|&v| self.complete[v as usize]) {
            Ok(())
        } else {
            Err(Error::InsufficientRadius(format!(
                "link of [{}] reaches the frontier of the radius-{} fragment",
                sigma
                    .iter()
                    .map(|&v| self.key(v).display(&self.oracle))
                    .collect::<Vec<_>>()
                    .join(", "),
                self.radius
            )))
        }
    }

    /// Vertices adjacent to every vertex of `sigma` and not in it.
    pub fn link_vertices(&self, sigma: &[VertexId]) -> Vec<VertexId> {
        let Some((&first, rest)) = sigma.split_first() else {
            return Vec::new();
        };
        self.adjacency[first as usize]
            .iter()
            .copied()
            .filter(|&x| !sigma.contains(&x) && rest.iter().all(|&s| self.adjacent(s, x)))
            .collect()
    }

    pub fn link_of(&self, sigma: &[VertexId]) -> Result<Subcomplex> {
        self.require_visible_link(sigma)?;
        Ok(Subcomplex::induced(self, &self.link_vertices(sigma)))
    }

    /// Union of the closed simplices of `y` containing `sigma`, for `sigma`
    /// a simplex of `y`.
    pub fn residue_in(&self, sigma: &[VertexId], y: &Subcomplex) -> Subcomplex {
        let mut simplices = BTreeSet::new();
        for s in y.simplices() {
            if sigma.iter().all(|v| s.contains(v)) {
                add_faces(s, &mut simplices);
            }
        }
        Subcomplex { simplices }
    }

    /// Union of the closed simplices of `y` meeting `sigma`.
    pub fn one_ball_in(&self, sigma: &[VertexId], y: &Subcomplex) -> Subcomplex {
        let mut simplices = BTreeSet::new();
        for s in y.simplices() {
            if sigma.iter().any(|v| s.contains(v)) {
                add_faces(s, &mut simplices);
            }
        }
        Subcomplex { simplices }
    }

    /// `Res(alpha, Y) ∩ B₁(beta, Y) = ∅` for `Y` the link of `sigma`,
    /// decided on vertex sets (both sets are full subcomplexes' vertex
    /// sets in a flag complex).
    pub fn residue_avoids_ball(
        &self,
        alpha: &[VertexId],
        sigma: &[VertexId],
        beta: &[VertexId],
    ) -> Result<bool> {
        self.require_visible_link(sigma)?;
        let in_link = |x: VertexId| !sigma.contains(&x) && sigma.iter().all(|&s| self.adjacent(s, x));
        // Residue vertices: alpha plus link vertices adjacent to all of alpha.
        // 1-ball vertices: beta plus link vertices adjacent to some of beta.
        let near_beta = |x: VertexId| beta.contains(&x) || beta.iter().any(|&b| self.adjacent(b, x));
        for &a in alpha {
            if near_beta(a) {
                return Ok(false);
            }
        }
        let Some(&a0) = alpha.first() else {
            return Ok(true);
        };
        for &x in &self.adjacency[a0 as usize] {
            if alpha.contains(&x) || !in_link(x) {
                continue;
            }
            if alpha.iter().all(|&a| self.adjacent(a, x)) && near_beta(x) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All cliques (as sorted simplices) within a sorted vertex list.
    pub(crate) fn cliques_within(&self, vertices: &[VertexId]) -> Vec<Simplex> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn extend(
            frag: &ComplexFragment,
            candidates: &[VertexId],
            current: &mut Vec<VertexId>,
            out: &mut Vec<Simplex>,
        ) {
            for (k, &v) in candidates.iter().enumerate() {
                current.push(v);
                out.push(current.clone());
                let next: Vec<VertexId> = candidates[k + 1..]
                    .iter()
                    .copied()
                    .filter(|&w| frag.adjacent(v, w))
                    .collect();
                extend(frag, &next, current, out);
                current.pop();
            }
        }
        extend(self, vertices, &mut current, &mut out);
        out
    }

    /// Simplices of the link of `sigma`, without the visibility check.
    pub(crate) fn link_simplices(&self, sigma: &[VertexId]) -> Vec<Simplex> {
        let mut link = self.link_vertices(sigma);
        link.sort_unstable();
        self.cliques_within(&link)
    }

    /// Induced 4- and 5-cycles in the link of one vertex.
    pub fn link_cycles(&self, v: VertexId, first_only: bool) -> Vec<Vec<VertexId>> {
        let link = self.neighbors(v).to_vec();
        short_induced_cycles(&link, |x, y| self.adjacent(x, y), first_only)
    }

    /// Searches the links of all complete vertices for induced cycles of
    /// length 4 or 5.
    pub fn check_six_large(&self) -> SixLargeReport {
        let mut report = SixLargeReport::default();
        for v in 0..self.keys.len() as VertexId {
            if !self.complete[v as usize] {
                continue;
            }
            report.checked += 1;
            if let Some(cycle) = self.link_cycles(v, true).into_iter().next() {
                report.witnesses.push(CycleWitness { vertex: v, cycle });
            }
        }
        report
    }

    /// Text dump of vertices, edges, higher simplices and complete
    /// precells, one per line, named by vertex tokens and sorted so that
    /// output is stable across runs.
    pub fn dump(&self) -> String {
        let tokens: Vec<String> = self.keys.iter().map(|k| k.token(&self.oracle)).collect();
        let names = |s: &[VertexId]| {
            let mut t: Vec<&str> = s.iter().map(|&v| tokens[v as usize].as_str()).collect();
            t.sort_unstable();
            t.join(" ")
        };
        let mut lines = Vec::new();
        for (v, key) in self.keys.iter().enumerate() {
            let kind = if key.is_real() { "real" } else { "interior" };
            lines.push(format!("v {} {kind} {}", tokens[v], key.display(&self.oracle)));
        }
        for e in self.simplices(1) {
            lines.push(format!("e {}", names(e)));
        }
        for d in 2..self.simplices.len() {
            for s in &self.simplices[d] {
                lines.push(format!("s {d} {}", names(s)));
            }
        }
        let mx = self.oracle.matrix();
        for p in self.precells.iter().filter(|p| p.complete) {
            lines.push(format!(
                "p {} {} {}",
                self.oracle.format(&p.base),
                mx.name(p.pair.i),
                mx.name(p.pair.j)
            ));
        }
        lines.sort_unstable();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn add_faces(s: &[VertexId], out: &mut BTreeSet<Simplex>) {
    let n = s.len();
    for mask in 1u32..(1 << n) {
        out.insert(
            (0..n)
                .filter(|&k| mask & (1 << k) != 0)
                .map(|k| s[k])
                .collect(),
        );
    }
}

/// Chordless cycles of length 4 and 5 in the graph induced on `vertices`.
pub(crate) fn short_induced_cycles(
    vertices: &[VertexId],
    adjacent: impl Fn(VertexId, VertexId) -> bool,
    first_only: bool,
) -> Vec<Vec<VertexId>> {
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    let nbrs: Vec<Vec<usize>> = (0..sorted.len())
        .map(|i| {
            (0..sorted.len())
                .filter(|&j| j != i && adjacent(sorted[i], sorted[j]))
                .collect()
        })
        .collect();
    let adj = |i: usize, j: usize| nbrs[i].binary_search(&j).is_ok();
    let mut out = Vec::new();
    // Cycles are reported once: smallest vertex first, second < last.
    for p0 in 0..sorted.len() {
        for &p1 in &nbrs[p0] {
            if p1 < p0 {
                continue;
            }
            for &p2 in &nbrs[p1] {
                if p2 <= p0 || adj(p0, p2) {
                    continue;
                }
                for &p3 in &nbrs[p2] {
                    if p3 <= p0 || p3 == p1 || adj(p1, p3) {
                        continue;
                    }
                    if adj(p3, p0) {
                        if p1 < p3 {
                            out.push(vec![sorted[p0], sorted[p1], sorted[p2], sorted[p3]]);
                            if first_only {
                                return out;
                            }
                        }
                        continue;
                    }
                    for &p4 in &nbrs[p3] {
                        if p4 <= p0 || p4 == p2 || adj(p4, p1) || adj(p4, p2) || !adj(p4, p0) {
                            continue;
                        }
                        if p1 < p4 && !adj(p0, p3) {
                            out.push(vec![
                                sorted[p0], sorted[p1], sorted[p2], sorted[p3], sorted[p4],
                            ]);
                            if first_only {
                                return out;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

impl fmt::Debug for ComplexFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ComplexFragment(radius {}, {} vertices, dims {:?})",
            self.radius,
            self.keys.len(),
            self.simplices.iter().map(Vec::len).collect::<Vec<_>>()
        )
    }
}
