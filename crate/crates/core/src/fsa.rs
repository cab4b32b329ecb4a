//! Finite state automata over small named alphabets, including padded pair
//! automata for multipliers.
//!
//! Automata are partial: a missing transition rejects. Deterministic
//! results are renumbered breadth-first from the initial state, visiting
//! symbols in alphabet order, so equal languages give identical minimal
//! machines.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type State = u32;
pub type Sym = u32;

/// Default cap on states produced by subset construction.
pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa {
    alphabet: Vec<String>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    /// Outgoing `(symbol, target)` pairs per state, sorted.
    transitions: Vec<Vec<(Sym, State)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Intersect,
    Union,
    Difference,
}

impl Fsa {
    pub fn new(alphabet: Vec<String>) -> Self {
        Fsa {
            alphabet,
            initial: Vec::new(),
            accepting: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn symbol(&self, name: &str) -> Option<Sym> {
        self.alphabet.iter().position(|s| s == name).map(|k| k as Sym)
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_accepting(&self, q: State) -> bool {
        self.accepting[q as usize]
    }

    pub fn transitions_from(&self, q: State) -> &[(Sym, State)] {
        &self.transitions[q as usize]
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn add_state(&mut self, accepting: bool) -> State {
        self.accepting.push(accepting);
        self.transitions.push(Vec::new());
        (self.accepting.len() - 1) as State
    }

    pub fn set_accepting(&mut self, q: State, accepting: bool) {
        self.accepting[q as usize] = accepting;
    }

    pub fn add_initial(&mut self, q: State) {
        if !self.initial.contains(&q) {
            self.initial.push(q);
            self.initial.sort_unstable();
        }
    }

    pub fn add_transition(&mut self, from: State, sym: Sym, to: State) {
        let list = &mut self.transitions[from as usize];
        if let Err(pos) = list.binary_search(&(sym, to)) {
            list.insert(pos, (sym, to));
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self
                .transitions
                .iter()
                .all(|list| list.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Target of the unique transition, for deterministic machines.
    pub fn step(&self, q: State, sym: Sym) -> Option<State> {
        let list = &self.transitions[q as usize];
        list.binary_search_by(|&(s, _)| s.cmp(&sym))
            .ok()
            .map(|k| list[k].1)
    }

    fn states_after(&self, word: &[Sym]) -> BTreeSet<State> {
        let mut current: BTreeSet<State> = self.initial.iter().copied().collect();
        for &s in word {
            current = current
                .iter()
                .flat_map(|&q| {
                    self.transitions[q as usize]
                        .iter()
                        .filter(move |&&(t, _)| t == s)
                        .map(|&(_, r)| r)
                })
                .collect();
            if current.is_empty() {
                break;
            }
        }
        current
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        self.states_after(word).iter().any(|&q| self.is_accepting(q))
    }

    pub fn parse_symbols(&self, names: &[&str]) -> Result<Vec<Sym>> {
        names
            .iter()
            .map(|n| {
                self.symbol(n)
                    .ok_or_else(|| Error::Automaton(format!("unknown symbol `{n}`")))
            })
            .collect()
    }

    pub fn accepts_names(&self, names: &[&str]) -> Result<bool> {
        Ok(self.accepts(&self.parse_symbols(names)?))
    }

    pub fn format_word(&self, word: &[Sym]) -> String {
        if word.is_empty() {
            return "ε".into();
        }
        word.iter()
            .map(|&s| self.alphabet[s as usize].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Subset construction over reachable subsets.
    pub fn determinize(&self, limit: usize) -> Result<Fsa> {
        let mut out = Fsa::new(self.alphabet.clone());
        let start: Vec<State> = self.initial.clone();
        let mut index: HashMap<Vec<State>, State> = HashMap::new();
        let mut queue = VecDeque::new();
        let q0 = out.add_state(start.iter().any(|&q| self.is_accepting(q)));
        out.add_initial(q0);
        index.insert(start.clone(), q0);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let from = index[&set];
            let mut moves: Vec<(Sym, State)> = set
                .iter()
                .flat_map(|&q| self.transitions[q as usize].iter().copied())
                .collect();
            moves.sort_unstable();
            moves.dedup();
            let mut k = 0;
            while k < moves.len() {
                let sym = moves[k].0;
                let mut target = Vec::new();
                while k < moves.len() && moves[k].0 == sym {
                    target.push(moves[k].1);
                    k += 1;
                }
                let to = match index.get(&target) {
                    Some(&to) => to,
                    None => {
                        if out.state_count() >= limit {
                            return Err(Error::StateLimit(limit));
                        }
                        let to = out.add_state(target.iter().any(|&q| self.is_accepting(q)));
                        index.insert(target.clone(), to);
                        queue.push_back(target);
                        to
                    }
                };
                out.transitions[from as usize].push((sym, to));
            }
        }
        Ok(out)
    }

    /// States from which an accepting state is reachable.
    fn productive(&self) -> Vec<bool> {
        let mut reverse: Vec<Vec<State>> = vec![Vec::new(); self.state_count()];
        for (q, list) in self.transitions.iter().enumerate() {
            for &(_, r) in list {
                reverse[r as usize].push(q as State);
            }
        }
        let mut good = self.accepting.clone();
        let mut stack: Vec<State> = (0..self.state_count() as State)
            .filter(|&q| good[q as usize])
            .collect();
        while let Some(r) = stack.pop() {
            for &q in &reverse[r as usize] {
                if !good[q as usize] {
                    good[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        good
    }

    /// Removes unreachable and unproductive states.
    pub fn trim(&self) -> Fsa {
        let good = self.productive();
        let mut reach = vec![false; self.state_count()];
        let mut stack: Vec<State> = self
            .initial
            .iter()
            .copied()
            .filter(|&q| good[q as usize])
            .collect();
        for &q in &stack {
            reach[q as usize] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, r) in &self.transitions[q as usize] {
                if good[r as usize] && !reach[r as usize] {
                    reach[r as usize] = true;
                    stack.push(r);
                }
            }
        }
        let mut map = vec![None; self.state_count()];
        let mut out = Fsa::new(self.alphabet.clone());
        for q in 0..self.state_count() {
            if reach[q] {
                map[q] = Some(out.add_state(self.accepting[q]));
            }
        }
        for &q in &self.initial {
            if let Some(n) = map[q as usize] {
                out.add_initial(n);
            }
        }
        for (q, list) in self.transitions.iter().enumerate() {
            let Some(from) = map[q] else { continue };
            for &(s, r) in list {
                if let Some(to) = map[r as usize] {
                    out.transitions[from as usize].push((s, to));
                }
            }
        }
        out
    }

    /// Minimal partial DFA (no dead state), renumbered breadth-first.
    pub fn minimize(&self) -> Result<Fsa> {
        if !self.is_deterministic() {
            return Err(Error::Automaton("minimize needs a deterministic automaton".into()));
        }
        let m = self.trim();
        let n = m.state_count();
        if n == 0 {
            return Ok(Fsa::new(self.alphabet.clone()));
        }
        // Moore refinement; the missing target acts as an extra dead class.
        let mut class: Vec<u32> = m.accepting.iter().map(|&a| a as u32).collect();
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut signatures: HashMap<(u32, Vec<(Sym, u32)>), u32> = HashMap::new();
            let mut next = vec![0u32; n];
            for q in 0..n {
                let sig: Vec<(Sym, u32)> = m.transitions[q]
                    .iter()
                    .map(|&(s, r)| (s, class[r as usize]))
                    .collect();
                let fresh = signatures.len() as u32;
                next[q] = *signatures.entry((class[q], sig)).or_insert(fresh);
            }
            let new_count = signatures.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut out = Fsa::new(self.alphabet.clone());
        for _ in 0..count {
            out.add_state(false);
        }
        for q in 0..n {
            let c = class[q];
            out.accepting[c as usize] = m.accepting[q];
            if out.transitions[c as usize].is_empty() {
                out.transitions[c as usize] = m.transitions[q]
                    .iter()
                    .map(|&(s, r)| (s, class[r as usize]))
                    .collect();
            }
        }
        out.add_initial(class[m.initial[0] as usize]);
        Ok(out.canonical())
    }

    /// Breadth-first renumbering from the initial states; drops unreachable
    /// states.
    pub fn canonical(&self) -> Fsa {
        let mut map: Vec<Option<State>> = vec![None; self.state_count()];
        let mut order = Vec::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        for &q in &self.initial {
            if map[q as usize].is_none() {
                map[q as usize] = Some(order.len() as State);
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for &(_, r) in &self.transitions[q as usize] {
                if map[r as usize].is_none() {
                    map[r as usize] = Some(order.len() as State);
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        let mut out = Fsa::new(self.alphabet.clone());
        for &q in &order {
            out.add_state(self.accepting[q as usize]);
        }
        for &q in &self.initial {
            out.add_initial(map[q as usize].expect("initial state"));
        }
        for &q in &order {
            let from = map[q as usize].expect("reached");
            for &(s, r) in &self.transitions[q as usize] {
                out.add_transition(from, s, map[r as usize].expect("reached"));
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.trim().state_count() == 0
    }

    /// Product construction on determinized operands. The missing state of
    /// a partial machine stands for rejection, which makes union and
    /// difference work without completing either operand.
    pub fn combine(op: Combine, a: &Fsa, b: &Fsa) -> Result<Fsa> {
        if a.alphabet != b.alphabet {
            return Err(Error::Automaton("alphabets differ".into()));
        }
        let a = a.determinize(DEFAULT_STATE_LIMIT)?;
        let b = b.determinize(DEFAULT_STATE_LIMIT)?;
        let accept = |p: Option<State>, q: Option<State>| {
            let x = p.is_some_and(|p| a.is_accepting(p));
            let y = q.is_some_and(|q| b.is_accepting(q));
            match op {
                Combine::Intersect => x && y,
                Combine::Union => x || y,
                Combine::Difference => x && !y,
            }
        };
        let mut out = Fsa::new(a.alphabet.clone());
        let start = (a.initial.first().copied(), b.initial.first().copied());
        let mut index: HashMap<(Option<State>, Option<State>), State> = HashMap::new();
        let q0 = out.add_state(accept(start.0, start.1));
        out.add_initial(q0);
        index.insert(start, q0);
        let mut queue = VecDeque::from([start]);
        while let Some((p, q)) = queue.pop_front() {
            let from = index[&(p, q)];
            let mut syms: Vec<Sym> = Vec::new();
            if let Some(p) = p {
                syms.extend(a.transitions[p as usize].iter().map(|&(s, _)| s));
            }
            if let Some(q) = q {
                syms.extend(b.transitions[q as usize].iter().map(|&(s, _)| s));
            }
            syms.sort_unstable();
            syms.dedup();
            for s in syms {
                let pair = (p.and_then(|p| a.step(p, s)), q.and_then(|q| b.step(q, s)));
                if op == Combine::Intersect && (pair.0.is_none() || pair.1.is_none()) {
                    continue;
                }
                if op == Combine::Difference && pair.0.is_none() {
                    continue;
                }
                let to = match index.get(&pair) {
                    Some(&to) => to,
                    None => {
                        let to = out.add_state(accept(pair.0, pair.1));
                        index.insert(pair, to);
                        queue.push_back(pair);
                        to
                    }
                };
                out.transitions[from as usize].push((s, to));
            }
        }
        Ok(out)
    }

    pub fn language_equal(a: &Fsa, b: &Fsa) -> Result<bool> {
        Ok(Fsa::combine(Combine::Difference, a, b)?.is_empty()
            && Fsa::combine(Combine::Difference, b, a)?.is_empty())
    }

    /// A shortest word in `L(a) \ L(b)` or `L(b) \ L(a)`, if any.
    pub fn difference_witness(a: &Fsa, b: &Fsa) -> Result<Option<Vec<Sym>>> {
        for (x, y) in [(a, b), (b, a)] {
            let d = Fsa::combine(Combine::Difference, x, y)?;
            if let Some(w) = d.shortest_word() {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Shortlex-least accepted word.
    pub fn shortest_word(&self) -> Option<Vec<Sym>> {
        let d = self.determinize(DEFAULT_STATE_LIMIT).ok()?;
        let mut parent: Vec<Option<(State, Sym)>> = vec![None; d.state_count()];
        let mut seen = vec![false; d.state_count()];
        let q0 = *d.initial.first()?;
        seen[q0 as usize] = true;
        let mut queue = VecDeque::from([q0]);
        while let Some(q) = queue.pop_front() {
            if d.is_accepting(q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((p, s)) = parent[cur as usize] {
                    word.push(s);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for &(s, r) in &d.transitions[q as usize] {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    parent[r as usize] = Some((q, s));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// Accepted words of length at most `max_len`, in shortlex order.
    pub fn enumerate_language(&self, max_len: usize) -> Vec<Vec<Sym>> {
        let mut out = Vec::new();
        let good = self.productive();
        let start: BTreeSet<State> = self.initial.iter().copied().filter(|&q| good[q as usize]).collect();
        let mut layer: Vec<(Vec<Sym>, BTreeSet<State>)> = vec![(Vec::new(), start)];
        for len in 0..=max_len {
            for (w, set) in &layer {
                if set.iter().any(|&q| self.is_accepting(q)) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                let mut by_sym: Vec<(Sym, State)> = set
                    .iter()
                    .flat_map(|&q| self.transitions[q as usize].iter().copied())
                    .filter(|&(_, r)| good[r as usize])
                    .collect();
                by_sym.sort_unstable();
                by_sym.dedup();
                let mut k = 0;
                while k < by_sym.len() {
                    let s = by_sym[k].0;
                    let mut target = BTreeSet::new();
                    while k < by_sym.len() && by_sym[k].0 == s {
                        target.insert(by_sym[k].1);
                        k += 1;
                    }
                    let mut v = w.clone();
                    v.push(s);
                    next.push((v, target));
                }
            }
            layer = next;
        }
        out
    }

    /// Text form; lines after the header are sorted.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet: {}", self.alphabet.join(" "));
        let _ = writeln!(s, "states: {}", self.state_count());
        let _ = writeln!(
            s,
            "initial: {}",
            self.initial.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
        );
        let acc: Vec<String> = (0..self.state_count())
            .filter(|&q| self.accepting[q])
            .map(|q| q.to_string())
            .collect();
        let _ = writeln!(s, "accepting: {}", acc.join(" "));
        for (q, list) in self.transitions.iter().enumerate() {
            for &(sym, r) in list {
                let _ = writeln!(s, "t {q} {} {r}", self.alphabet[sym as usize]);
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Fsa> {
        let bad = |line: usize, msg: &str| Error::Syntax {
            line,
            msg: msg.to_string(),
        };
        let mut alphabet: Option<Vec<String>> = None;
        let mut states: Option<usize> = None;
        let mut initial = Vec::new();
        let mut accepting = Vec::new();
        let mut moves = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let (head, rest) = raw.split_once(char::is_whitespace).unwrap_or((raw, ""));
            let numbers = |rest: &str| -> Result<Vec<State>> {
                rest.split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad(line, "expected a state number")))
                    .collect()
            };
            match head {
                "alphabet:" => alphabet = Some(rest.split_whitespace().map(String::from).collect()),
                "states:" => {
                    states = Some(rest.trim().parse().map_err(|_| bad(line, "expected a count"))?)
                }
                "initial:" => initial = numbers(rest)?,
                "accepting:" => accepting = numbers(rest)?,
                "t" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(bad(line, "transition needs source, symbol and target"));
                    }
                    let q: State = parts[0].parse().map_err(|_| bad(line, "bad source"))?;
                    let r: State = parts[2].parse().map_err(|_| bad(line, "bad target"))?;
                    moves.push((line, q, parts[1].to_string(), r));
                }
                _ => return Err(bad(line, "unknown line")),
            }
        }
        let alphabet = alphabet.ok_or_else(|| bad(0, "missing alphabet"))?;
        let n = states.ok_or_else(|| bad(0, "missing state count"))?;
        let mut out = Fsa::new(alphabet);
        for _ in 0..n {
            out.add_state(false);
        }
        for q in initial {
            if q as usize >= n {
                return Err(bad(0, "initial state out of range"));
            }
            out.add_initial(q);
        }
        for q in accepting {
            if q as usize >= n {
                return Err(bad(0, "accepting state out of range"));
            }
            out.accepting[q as usize] = true;
        }
        for (line, q, sym, r) in moves {
            let s = out.symbol(&sym).ok_or_else(|| bad(line, "unknown symbol"))?;
            if q as usize >= n || r as usize >= n {
                return Err(bad(line, "state out of range"));
            }
            out.add_transition(q, s, r);
        }
        Ok(out)
    }
}

/// Symbols of a padded pair alphabet over `n` base symbols: `(x, y)` with
/// `x, y ∈ 0..=n`, where `n` is the padding symbol, excluding `(n, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairAlphabet {
    pub base: usize,
}

impl PairAlphabet {
    pub fn new(base: usize) -> Self {
        PairAlphabet { base }
    }

    pub fn pad(&self) -> Sym {
        self.base as Sym
    }

    pub fn len(&self) -> usize {
        (self.base + 1) * (self.base + 1) - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn encode(&self, x: Option<Sym>, y: Option<Sym>) -> Sym {
        let x = x.unwrap_or(self.pad());
        let y = y.unwrap_or(self.pad());
        debug_assert!(x != self.pad() || y != self.pad());
        x * (self.base as Sym + 1) + y
    }

    pub fn decode(&self, s: Sym) -> (Option<Sym>, Option<Sym>) {
        let w = self.base as Sym + 1;
        let (x, y) = (s / w, s % w);
        let f = |v: Sym| (v != self.pad()).then_some(v);
        (f(x), f(y))
    }

    /// Names `x,y` with `_` for padding.
    pub fn names(&self, base_names: &[String]) -> Vec<String> {
        (0..self.len() as Sym)
            .map(|s| {
                let (x, y) = self.decode(s);
                let f = |v: Option<Sym>| v.map_or("_".to_string(), |v| base_names[v as usize].clone());
                format!("{},{}", f(x), f(y))
            })
            .collect()
    }

    /// Pads the shorter word at the end.
    pub fn pad_pair(&self, u: &[Sym], v: &[Sym]) -> Vec<Sym> {
        (0..u.len().max(v.len()))
            .map(|k| self.encode(u.get(k).copied(), v.get(k).copied()))
            .collect()
    }

    pub fn unpad(&self, w: &[Sym]) -> (Vec<Sym>, Vec<Sym>) {
        let mut u = Vec::new();
        let mut v = Vec::new();
        for &s in w {
            let (x, y) = self.decode(s);
            u.extend(x);
            v.extend(y);
        }
        (u, v)
    }
}

/// An automaton over a padded pair alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFsa {
    pub pairs: PairAlphabet,
    pub base_alphabet: Vec<String>,
    pub fsa: Fsa,
}

impl PairFsa {
    pub fn new(base_alphabet: Vec<String>) -> Self {
        let pairs = PairAlphabet::new(base_alphabet.len());
        let fsa = Fsa::new(pairs.names(&base_alphabet));
        PairFsa {
            pairs,
            base_alphabet,
            fsa,
        }
    }

    pub fn accepts_pair(&self, u: &[Sym], v: &[Sym]) -> bool {
        self.fsa.accepts(&self.pairs.pad_pair(u, v))
    }

    /// Accepted pairs with both components of length at most `max_len`.
    pub fn enumerate_pairs(&self, max_len: usize) -> Vec<(Vec<Sym>, Vec<Sym>)> {
        self.fsa
            .enumerate_language(max_len)
            .iter()
            .map(|w| self.pairs.unpad(w))
            .collect()
    }

    /// Whether padding only ever appears at the end of one component, on
    /// every accepted pair up to `max_len`.
    pub fn padding_well_formed(&self, max_len: usize) -> bool {
        self.fsa.enumerate_language(max_len).iter().all(|w| {
            let mut u_done = false;
            let mut v_done = false;
            w.iter().all(|&s| {
                let (x, y) = self.pairs.decode(s);
                let ok = !(u_done && x.is_some()) && !(v_done && y.is_some());
                u_done |= x.is_none();
                v_done |= y.is_none();
                ok
            })
        })
    }
}

/// Automaton for one component of the pairs, with padding erased.
pub fn pair_projection(m: &PairFsa, component: usize) -> Result<Fsa> {
    if component != 1 && component != 2 {
        return Err(Error::Automaton(format!("no component {component}")));
    }
    let f = &m.fsa;
    let n = f.state_count();
    let pick = |s: Sym| {
        let (x, y) = m.pairs.decode(s);
        if component == 1 {
            x
        } else {
            y
        }
    };
    // Padding moves become empty moves; close over them.
    let mut closure: Vec<Vec<State>> = Vec::with_capacity(n);
    for q in 0..n as State {
        let mut seen = BTreeSet::from([q]);
        let mut stack = vec![q];
        while let Some(p) = stack.pop() {
            for &(s, r) in f.transitions_from(p) {
                if pick(s).is_none() && seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        closure.push(seen.into_iter().collect());
    }
    let mut out = Fsa::new(m.base_alphabet.clone());
    for q in 0..n {
        let acc = closure[q].iter().any(|&p| f.is_accepting(p));
        out.add_state(acc);
    }
    for &q in f.initial() {
        out.add_initial(q);
    }
    for q in 0..n {
        for &p in &closure[q] {
            for &(s, r) in f.transitions_from(p) {
                if let Some(x) = pick(s) {
                    out.add_transition(q as State, x, r);
                }
            }
        }
    }
    Ok(out.trim())
}
