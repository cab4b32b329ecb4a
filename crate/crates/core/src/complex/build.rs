use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use super::overlap::{overlap_pattern, OverlapPattern};
use super::{CellCounts, ComplexFragment, Precell, Simplex, VertexId, VertexKey, UNBOUNDED};
use crate::coxeter::{alternating_word, inverse_word, letter, FinitePair, Letter, Word};
use crate::error::{Error, Result};
use crate::oracle::{Element, Oracle};

/// Which edges join interior vertices of overlapping precells.
#[derive(Clone, Debug, Default)]
pub enum OverlapMode {
    /// The pattern found by [`overlap_pattern`] for each label.
    #[default]
    Resolved,
    /// No overlap edges; used to exhibit the short link cycles they repair.
    Disabled,
    /// Explicit patterns keyed by label (labels without an entry get none).
    Custom(Vec<OverlapPattern>),
}

#[derive(Clone, Debug, Default)]
pub struct BuildOptions {
    pub overlap: OverlapMode,
}

pub fn build_fragment(oracle: Arc<Oracle>, radius: usize) -> Result<ComplexFragment> {
    build_fragment_with(oracle, radius, &BuildOptions::default())
}

const MAX_SIMPLEX_VERTICES: usize = 5;

/// Pair letters `(a_i, a_j)` from a local letter (0 = a, 1 = A, 2 = b, 3 = B).
fn globalize(pair: FinitePair, local: &[u8]) -> Word {
    local
        .iter()
        .map(|&l| {
            let g = if l >> 1 == 0 { pair.i } else { pair.j };
            letter(g, l & 1 == 1)
        })
        .collect()
}

struct Builder {
    keys: Vec<VertexKey>,
    index: HashMap<VertexKey, VertexId>,
    edges: HashSet<(VertexId, VertexId)>,
}

impl Builder {
    fn vertex(&mut self, key: VertexKey) -> VertexId {
        if let Some(&v) = self.index.get(&key) {
            return v;
        }
        let v = self.keys.len() as VertexId;
        self.index.insert(key.clone(), v);
        self.keys.push(key);
        v
    }

    fn edge(&mut self, u: VertexId, v: VertexId) -> bool {
        debug_assert_ne!(u, v);
        self.edges.insert((u.min(v), u.max(v)))
    }
}

pub fn build_fragment_with(
    oracle: Arc<Oracle>,
    radius: usize,
    options: &BuildOptions,
) -> Result<ComplexFragment> {
    let mx = oracle.matrix().clone();
    let pairs = mx.finite_pairs();
    let patterns: HashMap<FinitePair, Option<OverlapPattern>> = pairs
        .iter()
        .map(|&p| {
            let pat = if p.m < 3 {
                None
            } else {
                match &options.overlap {
                    OverlapMode::Resolved => Some(overlap_pattern(p.m)?.clone()),
                    OverlapMode::Disabled => None,
                    OverlapMode::Custom(list) => list.iter().find(|q| q.m == p.m).cloned(),
                }
            };
            Ok((p, pat))
        })
        .collect::<Result<_>>()?;

    // Real vertices and Cayley edges.
    let real: Vec<Element> = oracle.spheres(radius)?.into_iter().flatten().collect();
    let mut b = Builder {
        keys: Vec::new(),
        index: HashMap::new(),
        edges: HashSet::new(),
    };
    for g in &real {
        b.vertex(VertexKey::Real(g.clone()));
    }
    let letters: Vec<Letter> = (0..2 * mx.rank() as u8).collect();
    let mut step: Vec<Vec<Option<VertexId>>> = Vec::with_capacity(real.len());
    for g in &real {
        let mut row = Vec::with_capacity(letters.len());
        for &l in &letters {
            let h = oracle.mul_letter(g, l)?;
            row.push(b.index.get(&VertexKey::Real(h)).copied());
        }
        step.push(row);
    }
    for (v, row) in step.iter().enumerate() {
        for w in row.iter().flatten() {
            b.edge(v as VertexId, *w);
        }
    }
    let walk = |start: VertexId, word: &[Letter]| -> Vec<Option<VertexId>> {
        let mut out = vec![Some(start)];
        let mut cur = Some(start);
        for &l in word {
            cur = cur.and_then(|v| step[v as usize][l as usize]);
            out.push(cur);
        }
        out
    };

    // Precells, their triangulations, and m = 2 diagonals.
    let mut precells: Vec<Precell> = Vec::new();
    let mut precell_index = HashMap::new();
    for (gi, g) in real.iter().enumerate() {
        let gv = gi as VertexId;
        for &p in &pairs {
            let m = p.m as usize;
            let (ai, aj) = (letter(p.i, false), letter(p.j, false));
            let upper = walk(gv, &alternating_word(ai, aj, m)?);
            let lower = walk(gv, &alternating_word(aj, ai, m)?);
            let all = upper.iter().chain(&lower).all(Option::is_some);
            if all && upper[m] != lower[m] {
                return Err(Error::OracleInconsistent(format!(
                    "relator for pair ({},{}) does not close at {}",
                    mx.name(p.i),
                    mx.name(p.j),
                    oracle.format(g)
                )));
            }
            let mut precell = Precell {
                base: g.clone(),
                pair: p,
                upper,
                lower,
                interior: Vec::new(),
                complete: all,
                added: CellCounts::default(),
            };
            if all {
                triangulate(&mut b, &mut precell)?;
            } else if m == 2 {
                // The diagonal exists whenever both ends are present, which
                // keeps the fragment a full subcomplex.
                let t = oracle.mul_word(g, &[ai, aj])?;
                if let Some(&tv) = b.index.get(&VertexKey::Real(t)) {
                    b.edge(gv, tv);
                }
            }
            precell_index.insert((g.clone(), p), precells.len());
            precells.push(precell);
        }
    }

    // Overlap edges.
    let mut overlap_edges = 0;
    let slots_for: HashMap<FinitePair, Vec<(Word, u8, u8)>> = patterns
        .iter()
        .map(|(&p, pat)| {
            let slots = pat
                .iter()
                .flat_map(|pat| pat.slots.iter())
                .map(|s| (globalize(p, &s.offset), s.from, s.to))
                .collect();
            (p, slots)
        })
        .collect();
    for k in 0..precells.len() {
        if !precells[k].complete {
            continue;
        }
        let (base, pair) = (precells[k].base.clone(), precells[k].pair);
        for (offset, from, to) in &slots_for[&pair] {
            let other = oracle.mul_word(&base, offset)?;
            let Some(&j) = precell_index.get(&(other, pair)) else {
                continue;
            };
            if !precells[j].complete {
                continue;
            }
            let u = precells[k].interior[*from as usize - 1];
            let w = precells[j].interior[*to as usize - 1];
            if b.edge(u, w) {
                overlap_edges += 1;
            }
        }
    }

    // Renumber vertices in key order.
    let n = b.keys.len();
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.sort_by(|&x, &y| b.keys[x as usize].cmp(&b.keys[y as usize]));
    let mut new_id = vec![0 as VertexId; n];
    for (k, &old) in order.iter().enumerate() {
        new_id[old as usize] = k as VertexId;
    }
    let keys: Vec<VertexKey> = order.iter().map(|&o| b.keys[o as usize].clone()).collect();
    let index: HashMap<VertexKey, VertexId> = keys
        .iter()
        .enumerate()
        .map(|(k, key)| (key.clone(), k as VertexId))
        .collect();
    let mut adjacency: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &(u, v) in &b.edges {
        let (u, v) = (new_id[u as usize], new_id[v as usize]);
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    for row in &mut adjacency {
        row.sort_unstable();
    }
    for p in &mut precells {
        for v in p.upper.iter_mut().chain(p.lower.iter_mut()).flatten() {
            *v = new_id[*v as usize];
        }
        for v in &mut p.interior {
            *v = new_id[*v as usize];
        }
    }

    let mut fragment = ComplexFragment {
        oracle: oracle.clone(),
        radius,
        keys,
        index,
        adjacency,
        simplices: Vec::new(),
        precells,
        precell_index,
        complete: Vec::new(),
        boundary_distance: Vec::new(),
        overlap_edges,
    };
    fragment.simplices = flag_completion(&fragment)?;
    mark_completeness(&mut fragment, &slots_for)?;
    Ok(fragment)
}

/// Adds the interior vertices, edges and triangles of a complete precell.
fn triangulate(b: &mut Builder, p: &mut Precell) -> Result<()> {
    let m = p.pair.m as usize;
    let initial = p.upper[0].expect("complete");
    let terminal = p.upper[m].expect("complete");
    let mut spine = vec![initial];
    for k in 1..m - 1 {
        let v = b.vertex(VertexKey::Interior {
            base: p.base.clone(),
            pair: (p.pair.i as u8, p.pair.j as u8),
            index: k as u8,
        });
        p.interior.push(v);
        spine.push(v);
    }
    spine.push(terminal);
    let mut added = CellCounts {
        vertices: m - 2,
        ..CellCounts::default()
    };
    let mut count_edge = |b: &mut Builder, u: VertexId, v: VertexId| {
        if b.edge(u, v) {
            added.edges += 1;
        }
    };
    for j in 0..m - 1 {
        count_edge(b, spine[j], spine[j + 1]);
    }
    let mut triangles = 0;
    for half in [&p.upper, &p.lower] {
        let side: Vec<VertexId> = half[1..m].iter().map(|v| v.expect("complete")).collect();
        for j in 1..m - 1 {
            count_edge(b, spine[j], side[j - 1]);
            count_edge(b, spine[j], side[j]);
        }
        // (s_j, s_{j+1}, t_j) and (t_{j-1}, t_j, s_j)
        triangles += (m - 1) + (m - 2);
    }
    added.triangles = triangles;
    p.added = added;
    Ok(())
}

/// Enumerates all cliques of size 2..=5 as simplices, sorted by dimension
/// and lexicographically within a dimension.
fn flag_completion(f: &ComplexFragment) -> Result<Vec<Vec<Simplex>>> {
    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); MAX_SIMPLEX_VERTICES];
    by_dim[0] = (0..f.keys.len() as VertexId).map(|v| vec![v]).collect();
    let mut oversized = None;
    fn extend(
        f: &ComplexFragment,
        current: &mut Vec<VertexId>,
        candidates: &[VertexId],
        by_dim: &mut Vec<Vec<Simplex>>,
        oversized: &mut Option<Simplex>,
    ) {
        for (k, &v) in candidates.iter().enumerate() {
            current.push(v);
            if current.len() > MAX_SIMPLEX_VERTICES {
                if oversized.is_none() {
                    *oversized = Some(current.clone());
                }
                current.pop();
                return;
            }
            by_dim[current.len() - 1].push(current.clone());
            let next: Vec<VertexId> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|&w| f.adjacent(v, w))
                .collect();
            extend(f, current, &next, by_dim, oversized);
            current.pop();
        }
    }
    for v in 0..f.keys.len() as VertexId {
        let higher: Vec<VertexId> = f.adjacency[v as usize]
            .iter()
            .copied()
            .filter(|&w| w > v)
            .collect();
        let mut current = vec![v];
        extend(f, &mut current, &higher, &mut by_dim, &mut oversized);
    }
    if let Some(s) = oversized {
        return Err(Error::Construction(format!(
            "clique with more than {MAX_SIMPLEX_VERTICES} vertices at [{}]",
            s.iter()
                .map(|&v| f.key(v).display(&f.oracle))
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    for list in &mut by_dim {
        list.sort();
    }
    Ok(by_dim)
}

fn mark_completeness(
    f: &mut ComplexFragment,
    slots_for: &HashMap<FinitePair, Vec<(Word, u8, u8)>>,
) -> Result<()> {
    let oracle = f.oracle.clone();
    let mx = oracle.matrix().clone();
    let degree = 2 * mx.rank();
    // Boundary offsets of each precell shape, inverted: base = v · y⁻¹.
    let mut back_offsets: HashMap<FinitePair, Vec<Word>> = HashMap::new();
    for p in mx.finite_pairs() {
        let m = p.m as usize;
        let (ai, aj) = (letter(p.i, false), letter(p.j, false));
        let upper = alternating_word(ai, aj, m)?;
        let mut list: Vec<Word> = (0..=m).map(|k| inverse_word(&upper[..k])).collect();
        for k in 1..m {
            list.push(inverse_word(&alternating_word(aj, ai, k)?));
        }
        back_offsets.insert(p, list);
    }
    let complete_precell = |base: &Element, pair: FinitePair| {
        f.precell_index
            .get(&(base.clone(), pair))
            .is_some_and(|&k| f.precells[k].complete)
    };
    let mut complete = vec![false; f.keys.len()];
    for v in 0..f.keys.len() {
        complete[v] = match &f.keys[v] {
            VertexKey::Real(g) => {
                let mut ok = true;
                for l in 0..degree as u8 {
                    let h = oracle.mul_letter(g, l)?;
                    if !f.index.contains_key(&VertexKey::Real(h)) {
                        ok = false;
                        break;
                    }
                }
                'pairs: for (p, offsets) in &back_offsets {
                    if !ok {
                        break;
                    }
                    for y in offsets {
                        let base = oracle.mul_word(g, y)?;
                        if !complete_precell(&base, *p) {
                            ok = false;
                            break 'pairs;
                        }
                    }
                }
                ok
            }
            VertexKey::Interior { base, pair, index } => {
                let p = mx
                    .pair(pair.0 as usize, pair.1 as usize)
                    .expect("interior vertices come from finite pairs");
                let mut ok = true;
                for (offset, from, _) in &slots_for[&p] {
                    if from != index {
                        continue;
                    }
                    if !complete_precell(&oracle.mul_word(base, offset)?, p) {
                        ok = false;
                        break;
                    }
                }
                ok
            }
        };
    }
    let mut dist = vec![UNBOUNDED; f.keys.len()];
    let mut queue = VecDeque::new();
    for v in 0..f.keys.len() {
        if !complete[v] {
            dist[v] = 1;
            queue.push_back(v as VertexId);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize];
        for &w in &f.adjacency[v as usize] {
            if dist[w as usize] == UNBOUNDED {
                dist[w as usize] = d + 1;
                queue.push_back(w);
            }
        }
    }
    f.complete = complete;
    f.boundary_distance = dist;
    Ok(())
}
