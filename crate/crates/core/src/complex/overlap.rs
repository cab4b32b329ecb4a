//! Edges between interior vertices of overlapping precells.
//!
//! Two precells of the same pair overlap when their boundaries share a path
//! of at least two edges through the initial vertex of one and the terminal
//! vertex of the other. Triangulating precells alone leaves induced 4- and
//! 5-cycles in links at such junctions. The pattern of repair edges is
//! determined by search: among edge sets invariant under the group, under
//! swapping the two generators and under reversal of the overlap, take the
//! inclusion-minimal one for which no vertex link has an induced 4- or
//! 5-cycle.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::build::{build_fragment_with, BuildOptions, OverlapMode};
use super::VertexKey;
use crate::coxeter::{inverse_word, parse_coxeter, Word};
use crate::error::{Error, Result};
use crate::oracle::{Element, Oracle};

/// Interior vertex `from` of the precell at `g` is joined to interior
/// vertex `to` of the precell at `g · offset`. Offsets use local letters
/// (0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹) for the pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OverlapSlot {
    pub offset: Word,
    pub from: u8,
    pub to: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapPattern {
    pub m: u32,
    /// Closed under reversal: `(x, k, k')` is present with `(x⁻¹, k', k)`.
    pub slots: Vec<OverlapSlot>,
}

/// Offset `x` of a precell overlapping the precell at the identity, with the
/// number of shared boundary vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partner {
    pub offset: Element,
    pub shared: usize,
}

fn local_group(m: u32) -> Result<Arc<Oracle>> {
    let mx = parse_coxeter(&format!("gens: a b\nm a b = {m}"))?;
    Ok(Arc::new(Oracle::new(&mx)?))
}

fn boundary(oracle: &Oracle, m: u32) -> Result<Vec<Element>> {
    let m = m as usize;
    let upper: Word = (0..m).map(|k| if k % 2 == 0 { 0 } else { 2 }).collect();
    let lower: Word = (0..m).map(|k| if k % 2 == 0 { 2 } else { 0 }).collect();
    let mut out = Vec::new();
    for k in 0..=m {
        out.push(oracle.canonical(&upper[..k])?);
    }
    for k in 1..m {
        out.push(oracle.canonical(&lower[..k])?);
    }
    Ok(out)
}

/// All overlap partners of the precell based at the identity.
pub fn overlap_partners(oracle: &Oracle, m: u32) -> Result<Vec<Partner>> {
    let b = boundary(oracle, m)?;
    let delta = b[m as usize].clone();
    let own: BTreeSet<Element> = b.iter().cloned().collect();
    let mut offsets = BTreeSet::new();
    for p in &b {
        for q in &b {
            let x = oracle.multiply(p, &oracle.inverse(q)?)?;
            if !x.is_identity() {
                offsets.insert(x);
            }
        }
    }
    let mut out = Vec::new();
    for x in offsets {
        let moved: BTreeSet<Element> = b
            .iter()
            .map(|y| oracle.multiply(&x, y))
            .collect::<Result<_>>()?;
        let shared = own.intersection(&moved).count();
        let x_delta = oracle.multiply(&x, &delta)?;
        // The shared path must run through the initial vertex of one
        // precell and the terminal vertex of the other.
        let through = (moved.contains(&delta) && own.contains(&x))
            || (moved.contains(&Element::identity()) && own.contains(&x_delta));
        if shared >= 3 && through {
            out.push(Partner { offset: x, shared });
        }
    }
    Ok(out)
}

fn swap_letters(w: &[u8]) -> Word {
    w.iter().map(|&l| l ^ 2).collect()
}

/// Orbits of candidate slots under reversal and generator swap.
fn slot_orbits(oracle: &Oracle, m: u32, partners: &[Partner]) -> Result<Vec<Vec<OverlapSlot>>> {
    let canon = |w: &[u8]| -> Result<Word> { Ok(oracle.canonical(w)?.key().to_vec()) };
    let mut seen: BTreeSet<OverlapSlot> = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in partners {
        for from in 1..=(m as u8 - 2) {
            for to in 1..=(m as u8 - 2) {
                let slot = OverlapSlot {
                    offset: p.offset.key().to_vec(),
                    from,
                    to,
                };
                if seen.contains(&slot) {
                    continue;
                }
                let mut orbit = BTreeSet::new();
                let mut stack = vec![slot];
                while let Some(s) = stack.pop() {
                    if !orbit.insert(s.clone()) {
                        continue;
                    }
                    stack.push(OverlapSlot {
                        offset: canon(&inverse_word(&s.offset))?,
                        from: s.to,
                        to: s.from,
                    });
                    stack.push(OverlapSlot {
                        offset: canon(&swap_letters(&s.offset))?,
                        from: s.from,
                        to: s.to,
                    });
                }
                seen.extend(orbit.iter().cloned());
                orbits.push(orbit.into_iter().collect());
            }
        }
    }
    Ok(orbits)
}

/// Whether the pattern leaves every vertex link free of induced 4- and
/// 5-cycles, checked at one vertex per orbit.
fn pattern_passes(oracle: &Arc<Oracle>, pattern: &OverlapPattern) -> Result<bool> {
    let m = pattern.m;
    let options = BuildOptions {
        overlap: OverlapMode::Custom(vec![pattern.clone()]),
    };
    let mut radius = 2 * m as usize - 1;
    loop {
        let f = build_fragment_with(oracle.clone(), radius, &options)?;
        let mut reps = vec![VertexKey::Real(Element::identity())];
        for k in 1..=(m as u8 - 2) {
            reps.push(VertexKey::Interior {
                base: Element::identity(),
                pair: (0, 1),
                index: k,
            });
        }
        let ids: Vec<_> = reps.iter().map(|k| f.id(k)).collect();
        if ids.iter().all(|v| v.is_some_and(|v| f.is_complete(v))) {
            return Ok(ids
                .into_iter()
                .flatten()
                .all(|v| f.link_cycles(v, true).is_empty()));
        }
        radius += 1;
        if radius > 4 * m as usize {
            return Err(Error::Construction(
                "overlap search could not see complete links".into(),
            ));
        }
    }
}

fn search(m: u32) -> Result<OverlapPattern> {
    let oracle = local_group(m)?;
    let partners = overlap_partners(&oracle, m)?;
    let orbits = slot_orbits(&oracle, m, &partners)?;
    if orbits.len() > 16 {
        return Err(Error::Construction(format!(
            "{} slot orbits is too many to search",
            orbits.len()
        )));
    }
    let mut passing: Vec<u32> = Vec::new();
    for mask in 0u32..(1 << orbits.len()) {
        if passing.iter().any(|&p| p & mask == p) {
            continue;
        }
        let mut slots: Vec<OverlapSlot> = (0..orbits.len())
            .filter(|&k| mask & (1 << k) != 0)
            .flat_map(|k| orbits[k].iter().cloned())
            .collect();
        slots.sort();
        if pattern_passes(&oracle, &OverlapPattern { m, slots })? {
            passing.push(mask);
        }
    }
    let minimal: Vec<u32> = passing
        .iter()
        .copied()
        .filter(|&p| !passing.iter().any(|&q| q != p && q & p == q))
        .collect();
    match minimal.as_slice() {
        [mask] => {
            let mut slots: Vec<OverlapSlot> = (0..orbits.len())
                .filter(|&k| mask & (1 << k) != 0)
                .flat_map(|k| orbits[k].iter().cloned())
                .collect();
            slots.sort();
            Ok(OverlapPattern { m, slots })
        }
        [] => Err(Error::Construction(format!(
            "no overlap pattern repairs the links for m = {m}"
        ))),
        _ => Err(Error::Construction(format!(
            "{} minimal overlap patterns for m = {m}",
            minimal.len()
        ))),
    }
}

/// The overlap pattern for label `m >= 3`, computed once per process.
pub fn overlap_pattern(m: u32) -> Result<&'static OverlapPattern> {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static OverlapPattern>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("pattern cache").get(&m) {
        return Ok(p);
    }
    let pattern: &'static OverlapPattern = Box::leak(Box::new(search(m)?));
    cache.lock().expect("pattern cache").insert(m, pattern);
    Ok(pattern)
}
