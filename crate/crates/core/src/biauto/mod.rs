//! The biautomatic structure: the word acceptor built from directed
//! geodesics at orbit representatives, multiplier automata, word reduction
//! and the property checks.
//!
//! A word `λ_1 ⋯ λ_n` over `𝒜` spells the directed geodesic
//! `σ_0 = v₀, …, σ_n = g·v₀` with `λ_{σ_i} = λ_1 ⋯ λ_i`. The acceptor
//! tracks the last two simplices in the frame of the current one: a state
//! is the pair `(λ_{σ_i}⁻¹ σ_{i-1}, σ̄_i)`.

mod checks;
mod multiplier;

pub use checks::{
    axiom_check, check_cross_section, check_directed_geodesics, check_length_bounds,
    check_multiplier_pairs, check_prefix_property, check_six_large, check_trace_soundness, Check,
};
pub use multiplier::{
    build_multiplier, grow_left_differences, left_multipliers, pair_differences, reduce_word,
    DifferenceGrowth, Multiplier, Multipliers, Side, LEFT_DIFFERENCE_CAP, LEFT_ROUNDS,
    LEFT_WORD_LENGTH,
};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::complex::{build_fragment, ComplexFragment, VertexKey};
use crate::coxeter::{CoxeterMatrix, Label, Letter};
use crate::error::{Error, Result};
use crate::fsa::{Fsa, State, Sym, DEFAULT_STATE_LIMIT};
use crate::geodesics::{polygonal_path_of, DirectedGeodesic};
use crate::labels::{build_alphabets, choose_orbit_tables, Alphabet, OrbitTable, SimplexKey};
use crate::oracle::{Element, Oracle};

/// A state of the nondeterministic acceptor other than the start.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AcceptorState {
    /// The previous simplex, in the frame of the current representative.
    pub previous: SimplexKey,
    pub orbit: usize,
}

pub struct Acceptor {
    pub alphabet: Alphabet,
    pub nfa: Fsa,
    /// Index 0 is the start state.
    pub nfa_states: Vec<Option<AcceptorState>>,
    /// Minimal partial DFA for the same language.
    pub dfa: Fsa,
    identity_orbit: usize,
}

impl Acceptor {
    pub fn values(&self, word: &[Sym]) -> Vec<&Element> {
        word.iter().map(|&s| &self.alphabet.symbols[s as usize].value).collect()
    }

    pub fn evaluate(&self, oracle: &Oracle, word: &[Sym]) -> Result<Element> {
        let mut g = Element::identity();
        for v in self.values(word) {
            g = oracle.multiply(&g, v)?;
        }
        Ok(g)
    }

    pub fn format_word(&self, word: &[Sym]) -> String {
        if word.is_empty() {
            return String::new();
        }
        word.iter()
            .map(|&s| self.alphabet.symbols[s as usize].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses space-separated symbol names; an empty string is the empty
    /// word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Sym>> {
        text.split_whitespace()
            .map(|t| {
                self.alphabet
                    .index_of_name(t)
                    .map(|k| k as Sym)
                    .ok_or_else(|| Error::BadWord(t.to_string()))
            })
            .collect()
    }

    pub fn accepts(&self, word: &[Sym]) -> bool {
        self.dfa.accepts(word)
    }

    pub fn state_count(&self) -> usize {
        self.dfa.state_count()
    }

    /// The nondeterministic states along an accepting run of `word`.
    pub fn trace_states(&self, word: &[Sym]) -> Result<Vec<State>> {
        let nfa = &self.nfa;
        let mut sets: Vec<BTreeSet<State>> = vec![nfa.initial().iter().copied().collect()];
        for &s in word {
            let next: BTreeSet<State> = sets
                .last()
                .expect("nonempty")
                .iter()
                .flat_map(|&q| {
                    nfa.transitions_from(q)
                        .iter()
                        .filter(move |&&(t, _)| t == s)
                        .map(|&(_, r)| r)
                })
                .collect();
            sets.push(next);
        }
        let not_accepted = || Error::NotAccepted(self.format_word(word));
        let mut current = *sets
            .last()
            .expect("nonempty")
            .iter()
            .find(|&&q| nfa.is_accepting(q))
            .ok_or_else(not_accepted)?;
        let mut path = vec![current];
        for k in (0..word.len()).rev() {
            current = *sets[k]
                .iter()
                .find(|&&q| nfa.transitions_from(q).contains(&(word[k], current)))
                .ok_or_else(not_accepted)?;
            path.push(current);
        }
        path.reverse();
        Ok(path)
    }

    /// The directed geodesic spelled by an accepted word, as vertex keys.
    pub fn trace(&self, table: &OrbitTable, word: &[Sym]) -> Result<Vec<SimplexKey>> {
        let oracle = table.oracle();
        let states = self.trace_states(word)?;
        let mut label = Element::identity();
        let mut out = vec![vec![VertexKey::Real(Element::identity())]];
        for (k, &s) in word.iter().enumerate() {
            label = oracle.multiply(&label, &self.alphabet.symbols[s as usize].value)?;
            let st = self.nfa_states[states[k + 1] as usize]
                .as_ref()
                .expect("only the start has no data");
            let mut sigma = table
                .orbit(st.orbit)
                .rep
                .iter()
                .map(|v| v.translate(oracle, &label))
                .collect::<Result<SimplexKey>>()?;
            sigma.sort();
            out.push(sigma);
        }
        Ok(out)
    }

    pub fn identity_orbit(&self) -> usize {
        self.identity_orbit
    }
}

/// Builds the acceptor by exploring directed-geodesic steps at orbit
/// representatives, then determinizes and minimizes.
pub fn synthesize_acceptor(
    fragment: &ComplexFragment,
    table: &OrbitTable,
    alphabet: &Alphabet,
) -> Result<Acceptor> {
    let oracle = table.oracle();
    let identity = VertexKey::Real(Element::identity());
    let identity_orbit = table
        .orbit_of_rep(std::slice::from_ref(&identity))
        .ok_or_else(|| Error::Construction("identity vertex has no orbit".into()))?;
    let mut nfa = Fsa::new(alphabet.names());
    let mut states: Vec<Option<AcceptorState>> = vec![None];
    let mut index: HashMap<AcceptorState, State> = HashMap::new();
    let start = nfa.add_state(true);
    nfa.add_initial(start);
    let mut queue = VecDeque::from([start]);
    while let Some(q) = queue.pop_front() {
        let (previous, sigma) = match &states[q as usize] {
            None => (None, table.orbit(identity_orbit).ids.clone()),
            Some(st) => {
                let prev = st
                    .previous
                    .iter()
                    .map(|k| fragment.require(k))
                    .collect::<Result<Vec<_>>>()?;
                (Some(prev), table.orbit(st.orbit).ids.clone())
            }
        };
        fragment.require_visible_link(&sigma)?;
        let sigma_keys: SimplexKey = sigma.iter().map(|&v| fragment.key(v).clone()).collect();
        for beta in fragment.link_simplices(&sigma) {
            if sigma.len() + beta.len() > 5 {
                continue;
            }
            if let Some(prev) = &previous {
                if !fragment.residue_avoids_ball(prev, &sigma, &beta)? {
                    continue;
                }
            }
            let beta_keys: SimplexKey = beta.iter().map(|&v| fragment.key(v).clone()).collect();
            let (orbit, label) = table.classify(&beta_keys)?;
            let sym = alphabet.index_of(&label).ok_or_else(|| {
                Error::Construction(format!("label {} is not in the alphabet", oracle.format(&label)))
            })? as Sym;
            let mut prev_keys = sigma_keys
                .iter()
                .map(|v| v.translate_inverse(oracle, &label))
                .collect::<Result<SimplexKey>>()?;
            prev_keys.sort();
            let st = AcceptorState {
                previous: prev_keys,
                orbit,
            };
            let target = match index.get(&st) {
                Some(&t) => t,
                None => {
                    let t = nfa.add_state(orbit == identity_orbit);
                    index.insert(st.clone(), t);
                    states.push(Some(st));
                    queue.push_back(t);
                    t
                }
            };
            nfa.add_transition(q, sym, target);
        }
    }
    let dfa = nfa.determinize(DEFAULT_STATE_LIMIT)?.minimize()?;
    Ok(Acceptor {
        alphabet: alphabet.clone(),
        nfa,
        nfa_states: states,
        dfa,
        identity_orbit,
    })
}

/// Labels of consecutive entries of the polygonal path of an accepted
/// word, as symbols of `ℬ`.
pub fn word_over_b(
    acceptor: &Acceptor,
    table: &OrbitTable,
    alphabet_b: &Alphabet,
    word: &[Sym],
) -> Result<Vec<Sym>> {
    let oracle = table.oracle();
    let simplices = acceptor.trace(table, word)?;
    // Polygonal paths only need the simplices, not fragment ids; index
    // vertex keys locally.
    let mut keys: Vec<VertexKey> = simplices.iter().flatten().cloned().collect();
    keys.sort();
    keys.dedup();
    let id = |k: &VertexKey| keys.binary_search(k).expect("key present") as u32;
    let gamma = DirectedGeodesic::new(
        simplices
            .iter()
            .map(|s| {
                let mut v: Vec<u32> = s.iter().map(id).collect();
                v.sort_unstable();
                v
            })
            .collect(),
    );
    let path = polygonal_path_of(&gamma);
    let labels = path
        .iter()
        .map(|s| {
            let ks: SimplexKey = s.iter().map(|&v| keys[v as usize].clone()).collect();
            table.label(&ks)
        })
        .collect::<Result<Vec<_>>>()?;
    labels
        .windows(2)
        .map(|w| {
            let g = oracle.quotient(&w[0], &w[1])?;
            alphabet_b
                .index_of(&g)
                .map(|k| k as Sym)
                .ok_or_else(|| Error::Construction(format!("{} is not in B", oracle.format(&g))))
        })
        .collect()
}

/// Radius that makes every link needed by the acceptor visible: 7 when
/// some label is 4, otherwise 4.
pub fn default_radius(mx: &CoxeterMatrix) -> usize {
    let has_four = (0..mx.rank())
        .any(|i| (0..mx.rank()).any(|j| i != j && mx.label(i, j) == Label::Finite(4)));
    if has_four {
        7
    } else {
        4
    }
}

/// The largest finite label, or 2 when every label is infinite.
pub fn max_finite_label(mx: &CoxeterMatrix) -> u32 {
    mx.finite_pairs().iter().map(|p| p.m).max().unwrap_or(2)
}

/// Everything derived from one presentation.
pub struct Structure {
    pub fragment: ComplexFragment,
    pub table: OrbitTable,
    pub alphabet_a: Alphabet,
    pub alphabet_b: Alphabet,
    pub acceptor: Acceptor,
}

impl Structure {
    pub fn build(mx: &CoxeterMatrix, radius: Option<usize>) -> Result<Structure> {
        let oracle = Arc::new(Oracle::new(mx)?);
        let radius = radius.unwrap_or_else(|| default_radius(mx));
        let fragment = build_fragment(oracle, radius)?;
        let table = choose_orbit_tables(&fragment)?;
        table.check_based_on_base_precells()?;
        let (alphabet_a, alphabet_b) = build_alphabets(&table)?;
        let acceptor = synthesize_acceptor(&fragment, &table, &alphabet_a)?;
        Ok(Structure {
            fragment,
            table,
            alphabet_a,
            alphabet_b,
            acceptor,
        })
    }

    pub fn oracle(&self) -> &Arc<Oracle> {
        self.fragment.oracle()
    }

    /// `𝒜` symbol for a generator letter or its inverse.
    pub fn letter_symbol(&self, l: Letter) -> Result<Sym> {
        let g = self.oracle().generator(l)?;
        self.alphabet_a
            .index_of(&g)
            .map(|k| k as Sym)
            .ok_or_else(|| Error::Construction("generator missing from the alphabet".into()))
    }
}
