use std::collections::BTreeSet;

use proptest::prelude::*;
use systolic_artin::fsa::{pair_projection, Combine, Fsa, PairAlphabet, PairFsa, Sym, DEFAULT_STATE_LIMIT};

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

/// NFA from `(from, symbol, to)` triples.
fn nfa(states: usize, symbols: usize, initial: &[u32], accepting: &[bool], edges: &[(u32, Sym, u32)]) -> Fsa {
    let mut f = Fsa::new(names(symbols));
    for q in 0..states {
        f.add_state(accepting[q]);
    }
    for &q in initial {
        f.add_initial(q);
    }
    for &(p, s, q) in edges {
        f.add_transition(p, s, q);
    }
    f
}

/// Membership by direct simulation of sets of states.
fn simulate(f: &Fsa, w: &[Sym]) -> bool {
    let mut current: BTreeSet<u32> = f.initial().iter().copied().collect();
    for &s in w {
        current = current
            .iter()
            .flat_map(|&q| f.transitions_from(q).iter().filter(|(t, _)| *t == s).map(|&(_, r)| r))
            .collect();
    }
    current.iter().any(|&q| f.is_accepting(q))
}

fn all_words(symbols: usize, max_len: usize) -> Vec<Vec<Sym>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Sym>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..symbols as Sym).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn language(f: &Fsa, symbols: usize, max_len: usize) -> BTreeSet<Vec<Sym>> {
    all_words(symbols, max_len).into_iter().filter(|w| simulate(f, w)).collect()
}

fn nfa_strategy() -> impl Strategy<Value = Fsa> {
    (1usize..6).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec((0..n as u32, 0..2 as Sym, 0..n as u32), 0..12),
            proptest::collection::vec(0..n as u32, 1..3),
        )
            .prop_map(move |(acc, edges, init)| nfa(n, 2, &init, &acc, &edges))
    })
}

#[test]
fn determinize_example() {
    // a | ab
    let f = nfa(4, 2, &[0], &[false, true, false, true], &[(0, 0, 1), (0, 0, 2), (2, 1, 3)]);
    assert!(!f.is_deterministic());
    let d = f.determinize(DEFAULT_STATE_LIMIT).unwrap();
    assert!(d.is_deterministic());
    assert_eq!(d.state_count(), 3);
    assert!(d.accepts(&[0]) && d.accepts(&[0, 1]));
    assert!(!d.accepts(&[]) && !d.accepts(&[1]) && !d.accepts(&[0, 1, 1]));
    assert!(f.determinize(2).is_err());
    assert_eq!(d.enumerate_language(5), vec![vec![0], vec![0, 1]]);
    assert_eq!(d.shortest_word(), Some(vec![0]));
}

#[test]
fn minimize_example() {
    // Words over {x} of even length, built with four states.
    let f = nfa(4, 1, &[0], &[true, false, true, false], &[(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 0)]);
    let m = f.minimize().unwrap();
    assert_eq!(m.state_count(), 2);
    assert!(m.accepts(&[0, 0]) && !m.accepts(&[0]));
    // Nothing accepted: the empty automaton.
    let dead = nfa(2, 1, &[0], &[false, false], &[(0, 0, 1)]);
    let m = dead.minimize().unwrap();
    assert_eq!(m.state_count(), 0);
    assert!(m.is_empty());
    assert!(f.clone().determinize(10).unwrap().minimize().is_ok());
    let nd = nfa(2, 1, &[0], &[false, true], &[(0, 0, 0), (0, 0, 1)]);
    assert!(nd.minimize().is_err());
}

#[test]
fn text_form() {
    let f = nfa(3, 2, &[0], &[false, false, true], &[(0, 0, 1), (1, 1, 2), (2, 0, 0)]);
    let text = f.to_text();
    assert!(text.starts_with("alphabet: x y\nstates: 3\ninitial: 0\naccepting: 2\n"));
    assert!(text.contains("t 1 y 2\n"));
    assert_eq!(Fsa::from_text(&text).unwrap(), f);
    assert!(Fsa::from_text("alphabet: x\nstates: 1\ninitial: 0\naccepting:\nt 0 q 0\n").is_err());
    assert!(Fsa::from_text("states: 1\n").is_err());
}

#[test]
fn pair_automata() {
    // Pairs (x^n, y^n) and (x^n, y^(n+1)).
    let mut m = PairFsa::new(names(2));
    let p = m.pairs;
    let q0 = m.fsa.add_state(true);
    let q1 = m.fsa.add_state(true);
    m.fsa.add_initial(q0);
    m.fsa.add_transition(q0, p.encode(Some(0), Some(1)), q0);
    m.fsa.add_transition(q0, p.encode(None, Some(1)), q1);
    assert!(m.accepts_pair(&[0, 0], &[1, 1]));
    assert!(m.accepts_pair(&[0], &[1, 1]));
    assert!(!m.accepts_pair(&[0, 0], &[1]));
    assert!(m.padding_well_formed(5));
    let first = pair_projection(&m, 1).unwrap();
    let second = pair_projection(&m, 2).unwrap();
    assert_eq!(language(&first, 2, 4), all_words(1, 4).into_iter().collect());
    let ys: BTreeSet<Vec<Sym>> = (0..=4).map(|n| vec![1; n]).collect();
    assert_eq!(language(&second, 2, 4), ys);
    assert!(pair_projection(&m, 3).is_err());
    let pairs = m.enumerate_pairs(3);
    assert!(pairs.contains(&(vec![0, 0], vec![1, 1, 1])));

    let a = PairAlphabet::new(3);
    assert_eq!(a.len(), 15);
    for s in 0..a.len() as Sym {
        let (x, y) = a.decode(s);
        assert!(x.is_some() || y.is_some());
        assert_eq!(a.encode(x, y), s);
    }
    let w = a.pad_pair(&[0, 1, 2], &[2]);
    assert_eq!(a.unpad(&w), (vec![0, 1, 2], vec![2]));
    assert_eq!(a.names(&names(3))[a.encode(Some(1), None) as usize], "y,_");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn determinize_and_minimize_keep_the_language(f in nfa_strategy()) {
        let want = language(&f, 2, 6);
        let d = f.determinize(DEFAULT_STATE_LIMIT).unwrap();
        prop_assert!(d.is_deterministic());
        prop_assert_eq!(&language(&d, 2, 6), &want);
        let m = d.minimize().unwrap();
        prop_assert_eq!(&language(&m, 2, 6), &want);
        prop_assert!(m.state_count() <= d.trim().state_count());
        // Minimal automata are unique up to the breadth-first numbering.
        prop_assert_eq!(m.minimize().unwrap(), m.clone());
        let doubled = Fsa::combine(Combine::Union, &f, &f).unwrap();
        prop_assert_eq!(doubled.determinize(DEFAULT_STATE_LIMIT).unwrap().minimize().unwrap(), m.clone());
        let listed: BTreeSet<Vec<Sym>> = m.enumerate_language(6).into_iter().collect();
        prop_assert_eq!(&listed, &want);
        prop_assert_eq!(m.is_empty(), f.shortest_word().is_none());
        prop_assert_eq!(Fsa::from_text(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn combine_is_set_algebra(f in nfa_strategy(), g in nfa_strategy()) {
        let (lf, lg) = (language(&f, 2, 5), language(&g, 2, 5));
        let i = Fsa::combine(Combine::Intersect, &f, &g).unwrap();
        let u = Fsa::combine(Combine::Union, &f, &g).unwrap();
        let d = Fsa::combine(Combine::Difference, &f, &g).unwrap();
        prop_assert_eq!(language(&i, 2, 5), lf.intersection(&lg).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(language(&u, 2, 5), lf.union(&lg).cloned().collect::<BTreeSet<_>>());
        prop_assert_eq!(language(&d, 2, 5), lf.difference(&lg).cloned().collect::<BTreeSet<_>>());
        let equal = Fsa::language_equal(&f, &g).unwrap();
        let witness = Fsa::difference_witness(&f, &g).unwrap();
        prop_assert_eq!(equal, witness.is_none());
        if let Some(w) = witness {
            prop_assert_ne!(simulate(&f, &w), simulate(&g, &w));
        }
        prop_assert!(Fsa::language_equal(&f, &f.determinize(DEFAULT_STATE_LIMIT).unwrap()).unwrap());
    }
}
