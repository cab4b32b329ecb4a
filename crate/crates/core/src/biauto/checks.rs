//! Verification of the acceptor and multipliers against the word problem.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::multiplier::{pair_differences, Multiplier, Multipliers, Side};
use super::{max_finite_label, Acceptor};
use crate::complex::{ComplexFragment, VertexId, VertexKey};
use crate::error::{Error, Result};
use crate::fsa::{State, Sym};
use crate::geodesics::{
    directed_geodesics_between, distance, extend_to_real_vertex, is_directed_geodesic,
    DirectedGeodesic,
};
use crate::labels::OrbitTable;
use crate::oracle::Oracle;

/// One named property with its outcome and a witness or summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn multiplier_name(oracle: &Oracle, m: &Multiplier) -> String {
    let side = match m.side {
        Side::Right => "right",
        Side::Left => "left",
    };
    format!("{side} multiplier {}", oracle.format(&m.generator))
}

/// Accepted pairs up to `max_len` satisfy the defining equation, stay in
/// the difference set and have accepted components.
pub fn check_multiplier_pairs(
    acceptor: &Acceptor,
    oracle: &Oracle,
    m: &Multiplier,
    max_len: usize,
) -> Result<Check> {
    let name = format!("{} pairs", multiplier_name(oracle, m));
    let pairs = m.machine.enumerate_pairs(max_len);
    for (u, v) in &pairs {
        let gu = acceptor.evaluate(oracle, u)?;
        let gv = acceptor.evaluate(oracle, v)?;
        let ok = match m.side {
            Side::Right => oracle.multiply(&gu, &m.generator)? == gv,
            Side::Left => gu == oracle.multiply(&m.generator, &gv)?,
        };
        let witness = || format!("({}, {})", acceptor.format_word(u), acceptor.format_word(v));
        if !ok {
            return Ok(Check::new(name, false, format!("equation fails for {}", witness())));
        }
        if !acceptor.accepts(u) || !acceptor.accepts(v) {
            return Ok(Check::new(name, false, format!("component not accepted in {}", witness())));
        }
        for d in pair_differences(oracle, acceptor, m.side, &m.generator, u, v)? {
            if !m.differences.contains(&d) {
                return Ok(Check::new(
                    name,
                    false,
                    format!("difference {} escapes in {}", oracle.format(&d), witness()),
                ));
            }
        }
    }
    Ok(Check::new(name, true, format!("{} pairs up to length {max_len}", pairs.len())))
}

/// Both projections equal the acceptor language, plus the pair check, for
/// every multiplier.
pub fn axiom_check(
    acceptor: &Acceptor,
    oracle: &Oracle,
    multipliers: &Multipliers,
    max_len: usize,
) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in multipliers.all() {
        let name = format!("{} projections", multiplier_name(oracle, m));
        let ok = m.projections_match(acceptor)?;
        let detail = format!("{} states", m.machine.fsa.state_count());
        out.push(Check::new(name, ok, detail));
        out.push(check_multiplier_pairs(acceptor, oracle, m, max_len)?);
    }
    out.push(check_cross_section(acceptor, oracle, max_len)?);
    Ok(out)
}

/// Accepted words up to length `k` name distinct elements, and every
/// element of word length at most `k` is named.
pub fn check_cross_section(acceptor: &Acceptor, oracle: &Oracle, k: usize) -> Result<Check> {
    let name = "cross-section";
    let mut seen = HashMap::new();
    let words = acceptor.dfa.enumerate_language(k);
    for w in &words {
        let g = acceptor.evaluate(oracle, w)?;
        if let Some(other) = seen.insert(g.clone(), w.clone()) {
            return Ok(Check::new(
                name,
                false,
                format!(
                    "`{}` and `{}` both name {}",
                    acceptor.format_word(&other),
                    acceptor.format_word(w),
                    oracle.format(&g)
                ),
            ));
        }
    }
    let mut ball = 0;
    for sphere in oracle.spheres(k)? {
        for g in sphere {
            ball += 1;
            if !seen.contains_key(&g) {
                return Ok(Check::new(name, false, format!("{} has no accepted word", oracle.format(&g))));
            }
        }
    }
    Ok(Check::new(
        name,
        true,
        format!("{} words up to length {k}, ball of {ball} elements covered", words.len()),
    ))
}

/// `|w| ≤ |g|_X ≤ max(2, M-2)·|w|` for accepted `w` of length at most `k`.
pub fn check_length_bounds(acceptor: &Acceptor, oracle: &Oracle, k: usize) -> Result<Check> {
    let name = "length bounds";
    let factor = 2.max(max_finite_label(oracle.matrix()) as usize - 2);
    let words = acceptor.dfa.enumerate_language(k);
    for w in &words {
        let g = acceptor.evaluate(oracle, w)?;
        let len = oracle.geodesic_length(&g);
        if w.len() > len || len > factor * w.len() {
            return Ok(Check::new(
                name,
                false,
                format!("`{}` has value of length {len}", acceptor.format_word(w)),
            ));
        }
    }
    Ok(Check::new(name, true, format!("{} words, factor {factor}", words.len())))
}

/// For every prefix `w₁` of an accepted word, with `w₂` its maximal proper
/// prefix, exhibits an accepted word `w₂·e` with `|e| ≤ max(m - 1)`. The
/// continuation `e` is read off the extension of the last step of the
/// traced geodesic to a real vertex, and depends only on the
/// nondeterministic state reached.
pub fn check_prefix_property(
    acceptor: &Acceptor,
    fragment: &ComplexFragment,
    table: &OrbitTable,
    k: usize,
) -> Result<Check> {
    let name = "prefix property";
    let oracle = table.oracle();
    let bound = (max_finite_label(oracle.matrix()) as usize - 1).max(1);
    let mut tails: HashMap<State, Vec<Sym>> = HashMap::new();
    let mut checked: HashSet<Vec<Sym>> = HashSet::new();
    let mut worst = 0;
    for w in acceptor.dfa.enumerate_language(k) {
        let states = acceptor.trace_states(&w)?;
        for j in 1..=w.len() {
            let w1 = &w[..j];
            if !checked.insert(w1.to_vec()) {
                continue;
            }
            let q = states[j];
            let tail = match tails.get(&q) {
                Some(t) => t.clone(),
                None => {
                    let t = continuation(acceptor, fragment, table, q, bound)?;
                    tails.insert(q, t.clone());
                    t
                }
            };
            let mut candidate = w1[..j - 1].to_vec();
            candidate.extend(&tail);
            if tail.len() > bound || !acceptor.accepts(&candidate) {
                return Ok(Check::new(
                    name,
                    false,
                    format!(
                        "prefix `{}` extends to `{}` (excess {})",
                        acceptor.format_word(w1),
                        acceptor.format_word(&candidate),
                        tail.len()
                    ),
                ));
            }
            worst = worst.max(tail.len());
        }
    }
    Ok(Check::new(
        name,
        true,
        format!("{} prefixes, largest excess {worst} (bound {bound})", checked.len()),
    ))
}

/// Symbols replacing the last letter into nondeterministic state `q`.
fn continuation(
    acceptor: &Acceptor,
    fragment: &ComplexFragment,
    table: &OrbitTable,
    q: State,
    bound: usize,
) -> Result<Vec<Sym>> {
    let oracle = table.oracle();
    let st = acceptor.nfa_states[q as usize]
        .as_ref()
        .ok_or_else(|| Error::Construction("start state has no incoming letter".into()))?;
    let prev = st
        .previous
        .iter()
        .map(|k| fragment.require(k))
        .collect::<Result<Vec<_>>>()?;
    let current = table.orbit(st.orbit).ids.clone();
    let gamma = DirectedGeodesic::new(vec![prev, current]);
    let extended = extend_to_real_vertex(fragment, &gamma, 2 * bound)?;
    let labels = extended
        .simplices
        .iter()
        .map(|s| {
            let keys: Vec<_> = s.iter().map(|&v| fragment.key(v).clone()).collect();
            table.label(&keys)
        })
        .collect::<Result<Vec<_>>>()?;
    labels
        .windows(2)
        .map(|p| {
            let g = oracle.quotient(&p[0], &p[1])?;
            acceptor
                .alphabet
                .index_of(&g)
                .map(|k| k as Sym)
                .ok_or_else(|| Error::Construction(format!("{} is not in A", oracle.format(&g))))
        })
        .collect()
}

/// No vertex with a fully visible link has an induced 4- or 5-cycle in it.
pub fn check_six_large(fragment: &ComplexFragment) -> Check {
    let report = fragment.check_six_large();
    let detail = match report.witnesses.first() {
        None => format!("{} vertex links", report.checked),
        Some(w) => {
            let names: Vec<String> = w.cycle.iter().map(|&v| fragment.key(v).token(fragment.oracle())).collect();
            format!(
                "link of {} has the cycle {}",
                fragment.key(w.vertex).token(fragment.oracle()),
                names.join(" ")
            )
        }
    };
    Check::new("six-large", report.passed(), detail)
}

/// Each pair has exactly one directed geodesic, of length equal to the
/// 1-skeleton distance, whose prefixes and suffixes are directed geodesics.
pub fn check_directed_geodesics(
    fragment: &ComplexFragment,
    pairs: &[(VertexId, VertexId)],
) -> Result<Check> {
    let name = "directed geodesics";
    if pairs.is_empty() {
        return Ok(Check::new(name, false, "no vertex pair far enough from the frontier"));
    }
    let oracle = fragment.oracle();
    for &(v, w) in pairs {
        let pair = || {
            format!(
                "{} to {}",
                fragment.key(v).token(oracle),
                fragment.key(w).token(oracle)
            )
        };
        let found = directed_geodesics_between(fragment, v, w, 2)?;
        if found.len() != 1 {
            return Ok(Check::new(name, false, format!("{} geodesics from {}", found.len(), pair())));
        }
        let gamma = &found[0];
        if gamma.len() != distance(fragment, v, w)? as usize {
            return Ok(Check::new(name, false, format!("wrong length from {}", pair())));
        }
        let s = &gamma.simplices;
        for k in 1..s.len() {
            if !is_directed_geodesic(fragment, &s[..k])? || !is_directed_geodesic(fragment, &s[k..])? {
                return Ok(Check::new(name, false, format!("subpath fails from {}", pair())));
            }
        }
    }
    let longest = pairs
        .iter()
        .map(|&(v, w)| distance(fragment, v, w))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(Check::new(
        name,
        true,
        format!("{} vertex pairs, distances up to {longest}", pairs.len()),
    ))
}

/// The traced simplices of each accepted word form a directed geodesic
/// ending at the word's value. Words whose trace leaves the fragment are
/// counted as skipped.
pub fn check_trace_soundness(
    acceptor: &Acceptor,
    fragment: &ComplexFragment,
    table: &OrbitTable,
    words: &[Vec<Sym>],
) -> Result<Check> {
    let name = "trace soundness";
    let oracle = table.oracle();
    let mut skipped = 0;
    for w in words {
        let keys = acceptor.trace(table, w)?;
        let seq = keys
            .iter()
            .map(|s| s.iter().map(|k| fragment.require(k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .and_then(|seq| Ok((is_directed_geodesic(fragment, &seq)?, seq)));
        let valid = match seq {
            Ok((valid, _)) => valid,
            Err(Error::InsufficientRadius(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let end = VertexKey::Real(acceptor.evaluate(oracle, w)?);
        if !valid || keys.last().map(|s| s.as_slice()) != Some(std::slice::from_ref(&end)) {
            return Ok(Check::new(name, false, format!("`{}`", acceptor.format_word(w))));
        }
    }
    Ok(Check::new(
        name,
        true,
        format!("{} sampled words, {skipped} beyond the fragment", words.len() - skipped),
    ))
}
