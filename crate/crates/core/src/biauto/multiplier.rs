//! Padded pair automata recognizing right and left multiplication by a
//! generator, word reduction through them, and growth of the word
//! difference sets.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use super::Acceptor;
use crate::coxeter::Letter;
use crate::error::{Error, Result};
use crate::fsa::{pair_projection, Combine, Fsa, PairFsa, State, Sym};
use crate::oracle::{Element, Oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Accepts `(u, v)` with `u·x = v`.
    Right,
    /// Accepts `(u, v)` with `u = x·v`.
    Left,
}

pub struct Multiplier {
    pub side: Side,
    pub generator: Element,
    pub differences: BTreeSet<Element>,
    pub machine: PairFsa,
}

impl Multiplier {
    /// Whether both projections are the acceptor's language.
    pub fn projections_match(&self, acceptor: &Acceptor) -> Result<bool> {
        for c in [1, 2] {
            let p = pair_projection(&self.machine, c)?;
            if !Fsa::language_equal(&p, &acceptor.dfa)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The element the difference must end at, starting from `start`.
    fn endpoints(side: Side, x: &Element) -> (Element, Element) {
        match side {
            Side::Right => (Element::identity(), x.clone()),
            Side::Left => (x.clone(), Element::identity()),
        }
    }

    /// The unique `v` with `(u, v)` accepted, for the first component fixed.
    pub fn partner(&self, u: &[Sym]) -> Result<Option<Vec<Sym>>> {
        let fsa = &self.machine.fsa;
        let pairs = self.machine.pairs;
        let Some(&q0) = fsa.initial().first() else {
            return Ok(None);
        };
        let mut parent: HashMap<(State, usize), ((State, usize), Option<Sym>)> = HashMap::new();
        let mut seen: HashSet<(State, usize)> = HashSet::from([(q0, 0)]);
        let mut queue = VecDeque::from([(q0, 0usize)]);
        while let Some((q, i)) = queue.pop_front() {
            if i == u.len() && fsa.is_accepting(q) {
                let mut v = Vec::new();
                let mut cur = (q, i);
                while let Some(&(prev, y)) = parent.get(&cur) {
                    v.extend(y);
                    cur = prev;
                }
                v.reverse();
                return Ok(Some(v));
            }
            for &(s, r) in fsa.transitions_from(q) {
                let (x, y) = pairs.decode(s);
                let next = match x {
                    Some(x) if i < u.len() && u[i] == x => i + 1,
                    None if i == u.len() => i,
                    _ => continue,
                };
                if seen.insert((r, next)) {
                    parent.insert((r, next), ((q, i), y));
                    queue.push_back((r, next));
                }
            }
        }
        Ok(None)
    }
}

/// Product of two copies of the acceptor and the difference set. A track
/// may switch to padding only from an accepting state.
pub fn build_multiplier(
    acceptor: &Acceptor,
    oracle: &Oracle,
    x: &Element,
    side: Side,
    differences: &BTreeSet<Element>,
) -> Result<Multiplier> {
    const DONE: State = State::MAX;
    let dfa = &acceptor.dfa;
    let mut machine = PairFsa::new(acceptor.alphabet.names());
    let pairs = machine.pairs;
    let values: Vec<&Element> = acceptor.alphabet.symbols.iter().map(|s| &s.value).collect();
    let w: Vec<Element> = differences.iter().cloned().collect();
    let w_index: HashMap<&Element, u32> = w.iter().enumerate().map(|(k, g)| (g, k as u32)).collect();
    let (start, target) = Multiplier::endpoints(side, x);
    let (Some(&d0), Some(&dt)) = (w_index.get(&start), w_index.get(&target)) else {
        return Err(Error::Construction("difference set must contain the endpoints".into()));
    };
    let mut step_cache: HashMap<(u32, Sym), Option<u32>> = HashMap::new();
    let mut diff_step = |d: u32, s: Sym| -> Result<Option<u32>> {
        if let Some(&r) = step_cache.get(&(d, s)) {
            return Ok(r);
        }
        let (a, b) = pairs.decode(s);
        let mut g = w[d as usize].clone();
        if let Some(a) = a {
            g = oracle.quotient(values[a as usize], &g)?;
        }
        if let Some(b) = b {
            g = oracle.multiply(&g, values[b as usize])?;
        }
        let r = w_index.get(&g).copied();
        step_cache.insert((d, s), r);
        Ok(r)
    };
    let Some(&q0) = dfa.initial().first() else {
        return Ok(Multiplier {
            side,
            generator: x.clone(),
            differences: differences.clone(),
            machine,
        });
    };
    let finished = |p: State| p == DONE || dfa.is_accepting(p);
    let options = |p: State| -> Vec<(Option<Sym>, State)> {
        if p == DONE {
            return vec![(None, DONE)];
        }
        let mut out: Vec<(Option<Sym>, State)> =
            dfa.transitions_from(p).iter().map(|&(s, r)| (Some(s), r)).collect();
        if dfa.is_accepting(p) {
            out.push((None, DONE));
        }
        out
    };
    let fsa = &mut machine.fsa;
    let mut index: HashMap<(State, State, u32), State> = HashMap::new();
    let first = (q0, q0, d0);
    let s0 = fsa.add_state(finished(q0) && d0 == dt);
    fsa.add_initial(s0);
    index.insert(first, s0);
    let mut queue = VecDeque::from([first]);
    while let Some((p, q, d)) = queue.pop_front() {
        let from = index[&(p, q, d)];
        for (a, p2) in options(p) {
            for &(b, q2) in &options(q) {
                if a.is_none() && b.is_none() {
                    continue;
                }
                let s = pairs.encode(a, b);
                let Some(d2) = diff_step(d, s)? else { continue };
                let key = (p2, q2, d2);
                let to = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        let t = fsa.add_state(finished(p2) && finished(q2) && d2 == dt);
                        index.insert(key, t);
                        queue.push_back(key);
                        t
                    }
                };
                fsa.add_transition(from, s, to);
            }
        }
    }
    machine.fsa = machine.fsa.minimize()?;
    Ok(Multiplier {
        side,
        generator: x.clone(),
        differences: differences.clone(),
        machine,
    })
}

/// Right multipliers for the identity and every generator letter, with
/// memoized reduction of group elements.
pub struct Multipliers {
    pub identity: Multiplier,
    /// Indexed by letter code.
    pub letters: Vec<Multiplier>,
    memo: Mutex<HashMap<Element, Vec<Sym>>>,
}

impl Multipliers {
    pub fn right(acceptor: &Acceptor, oracle: &Oracle, differences: &BTreeSet<Element>) -> Result<Self> {
        let identity = build_multiplier(acceptor, oracle, &Element::identity(), Side::Right, differences)?;
        let letters = (0..2 * oracle.matrix().rank() as Letter)
            .map(|l| build_multiplier(acceptor, oracle, &oracle.generator(l)?, Side::Right, differences))
            .collect::<Result<Vec<_>>>()?;
        Ok(Multipliers {
            identity,
            letters,
            memo: Mutex::new(HashMap::from([(Element::identity(), Vec::new())])),
        })
    }

    pub fn all(&self) -> impl Iterator<Item = &Multiplier> {
        std::iter::once(&self.identity).chain(self.letters.iter())
    }

    /// The accepted word for `g`, built along its shortlex key one
    /// multiplier step at a time.
    pub fn reduce_element(&self, oracle: &Oracle, g: &Element) -> Result<Vec<Sym>> {
        if let Some(w) = self.memo.lock().expect("memo").get(g) {
            return Ok(w.clone());
        }
        let key = g.key();
        let (&last, head) = key.split_last().expect("non-identity");
        let prefix = oracle.canonical(head)?;
        let u = self.reduce_element(oracle, &prefix)?;
        let v = self.letters[last as usize].partner(&u)?.ok_or_else(|| {
            Error::Construction(format!(
                "no multiplier partner for {} times {}",
                oracle.format(&prefix),
                oracle.matrix().format_letter(last)
            ))
        })?;
        self.memo.lock().expect("memo").insert(g.clone(), v.clone());
        Ok(v)
    }
}

/// The accepted word representing the X-word `w`.
pub fn reduce_word(multipliers: &Multipliers, oracle: &Oracle, w: &[Letter]) -> Result<Vec<Sym>> {
    let mut u: Vec<Sym> = Vec::new();
    for &l in w {
        u = multipliers.letters[l as usize].partner(&u)?.ok_or_else(|| {
            Error::Construction(format!(
                "no multiplier partner after {}",
                oracle.matrix().format_letter(l)
            ))
        })?;
    }
    Ok(u)
}

pub struct DifferenceGrowth {
    pub differences: BTreeSet<Element>,
    pub multiplier: Multiplier,
    pub rounds: usize,
    pub passed: bool,
    /// An accepted word whose partner needed a new difference in the last
    /// round, if any.
    pub last_witness: Option<String>,
}

/// Differences `u(i)⁻¹·c·v(i)` along the pair, with `c = 1` for right and
/// `c = x` for left multiplication; prefixes stop growing at the end of
/// their word.
pub fn pair_differences(
    oracle: &Oracle,
    acceptor: &Acceptor,
    side: Side,
    x: &Element,
    u: &[Sym],
    v: &[Sym],
) -> Result<Vec<Element>> {
    let (mut d, _) = Multiplier::endpoints(side, x);
    let mut out = vec![d.clone()];
    for k in 0..u.len().max(v.len()) {
        if let Some(&a) = u.get(k) {
            d = oracle.quotient(&acceptor.alphabet.symbols[a as usize].value, &d)?;
        }
        if let Some(&b) = v.get(k) {
            d = oracle.multiply(&d, &acceptor.alphabet.symbols[b as usize].value)?;
        }
        out.push(d.clone());
    }
    Ok(out)
}

/// Starts from the alphabet values and adds the differences of pairs of
/// accepted words up to `max_len`; while a projection of the multiplier
/// for `x` still differs from the acceptor language, the accepted words
/// it misses (up to two letters beyond the shortest) contribute their
/// pairs' differences too.
#[allow(clippy::too_many_arguments)]
pub fn grow_left_differences(
    acceptor: &Acceptor,
    oracle: &Oracle,
    reducer: &Multipliers,
    x: Letter,
    side: Side,
    max_len: usize,
    cap: usize,
    max_rounds: usize,
) -> Result<DifferenceGrowth> {
    let xg = oracle.generator(x)?;
    let x_inv = oracle.inverse(&xg)?;
    let mut w: BTreeSet<Element> = acceptor.alphabet.values();
    let mut last_witness = None;
    // Partner of an accepted word on the given track.
    let partner = |word: &[Sym], first: bool| -> Result<(Vec<Sym>, Vec<Sym>)> {
        let g = acceptor.evaluate(oracle, word)?;
        let h = match (side, first) {
            (Side::Right, true) => oracle.multiply(&g, &xg)?,
            (Side::Right, false) => oracle.multiply(&g, &x_inv)?,
            (Side::Left, true) => oracle.multiply(&x_inv, &g)?,
            (Side::Left, false) => oracle.multiply(&xg, &g)?,
        };
        let other = reducer.reduce_element(oracle, &h)?;
        Ok(if first {
            (word.to_vec(), other)
        } else {
            (other, word.to_vec())
        })
    };
    let mut pending: Vec<(Vec<Sym>, Vec<Sym>)> = acceptor
        .dfa
        .enumerate_language(max_len)
        .iter()
        .map(|u| partner(u, true))
        .collect::<Result<_>>()?;
    for round in 1..=max_rounds {
        for (u, v) in &pending {
            for d in pair_differences(oracle, acceptor, side, &xg, u, v)? {
                if w.insert(d) {
                    last_witness = Some(acceptor.format_word(u));
                }
            }
        }
        if w.len() > cap {
            return Err(Error::Construction(format!(
                "difference set grew past {cap} elements (last witness `{}`)",
                last_witness.unwrap_or_default()
            )));
        }
        let m = build_multiplier(acceptor, oracle, &xg, side, &w)?;
        pending.clear();
        for first in [true, false] {
            let projection = pair_projection(&m.machine, if first { 1 } else { 2 })?;
            let missing = Fsa::combine(Combine::Difference, &acceptor.dfa, &projection)?;
            let Some(shortest) = missing.shortest_word() else { continue };
            for word in missing.enumerate_language(shortest.len() + 2) {
                pending.push(partner(&word, first)?);
            }
        }
        if pending.is_empty() {
            let passed = m.projections_match(acceptor)?;
            return Ok(DifferenceGrowth {
                differences: w,
                multiplier: m,
                rounds: round,
                passed,
                last_witness: None,
            });
        }
        if round == max_rounds {
            return Ok(DifferenceGrowth {
                differences: w,
                multiplier: m,
                rounds: round,
                passed: false,
                last_witness,
            });
        }
    }
    unreachable!("the final round returns")
}

/// Bounds used when growing left difference sets: words enumerated per
/// round, largest difference set, and rounds.
pub const LEFT_WORD_LENGTH: usize = 6;
pub const LEFT_DIFFERENCE_CAP: usize = 2000;
pub const LEFT_ROUNDS: usize = 10;

/// Left multipliers for every generator letter, indexed by letter code.
pub fn left_multipliers(
    acceptor: &Acceptor,
    oracle: &Oracle,
    reducer: &Multipliers,
) -> Result<Vec<DifferenceGrowth>> {
    (0..2 * oracle.matrix().rank() as Letter)
        .map(|l| {
            grow_left_differences(
                acceptor,
                oracle,
                reducer,
                l,
                Side::Left,
                LEFT_WORD_LENGTH,
                LEFT_DIFFERENCE_CAP,
                LEFT_ROUNDS,
            )
        })
        .collect()
}
