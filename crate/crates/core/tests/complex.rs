mod common;

use std::collections::HashSet;
use std::sync::Arc;

use common::cells::{is_cayley_edge, recount_cells};
use common::matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systolic_artin::biauto::default_radius;
use systolic_artin::complex::{
    build_fragment, build_fragment_with, BuildOptions, ComplexFragment, OverlapMode, VertexId,
    VertexKey,
};
use systolic_artin::oracle::{Element, Oracle};

fn fragment(text: &str, radius: usize) -> ComplexFragment {
    let oracle = Arc::new(Oracle::new(&matrix(text)).unwrap());
    build_fragment(oracle, radius).unwrap()
}

fn default_fragment(text: &str) -> ComplexFragment {
    fragment(text, default_radius(&matrix(text)))
}

fn real(f: &ComplexFragment, word: &str) -> VertexId {
    let o = f.oracle();
    let g = o.canonical(&o.matrix().parse_word(word).unwrap()).unwrap();
    f.id(&VertexKey::Real(g)).unwrap()
}

fn sorted<const N: usize>(mut s: [VertexId; N]) -> Vec<VertexId> {
    s.sort();
    s.to_vec()
}

#[test]
fn triangulation_counts() {
    for text in [common::Z2, common::A2, common::B2, common::F2_X_Z, common::Z2_FREE_Z] {
        let f = default_fragment(text);
        let mut checked = 0;
        for p in f.precells().iter().filter(|p| p.complete) {
            let m = p.pair.m as usize;
            let expected = (m - 2, 5 * m - 9, 4 * m - 6);
            assert_eq!(recount_cells(&f, p), expected, "m = {m}");
            assert_eq!((p.added.vertices, p.added.edges, p.added.triangles), expected);
            checked += 1;
        }
        assert!(checked >= 10, "only {checked} complete precells");
    }
}

#[test]
fn six_large_on_fixtures() {
    for text in [common::Z2, common::A2, common::B2, common::Z2_FREE_Z, common::F2_X_Z] {
        let f = default_fragment(text);
        let report = f.check_six_large();
        assert!(report.checked > 0);
        assert!(report.passed(), "{:?}", report.witnesses.first());
    }
}

#[test]
fn suppressing_overlap_edges_breaks_six_largeness() {
    let oracle = Arc::new(Oracle::new(&matrix(common::A2)).unwrap());
    let options = BuildOptions {
        overlap: OverlapMode::Disabled,
    };
    let f = build_fragment_with(oracle, 4, &options).unwrap();
    assert_eq!(f.overlap_edge_count(), 0);
    let report = f.check_six_large();
    let w = report.witnesses.first().expect("a short cycle");
    assert!(matches!(w.cycle.len(), 4 | 5));
    assert!(f.key(w.vertex).is_real());
    // The witness is an induced cycle in the link.
    for (k, &x) in w.cycle.iter().enumerate() {
        assert!(f.adjacent(w.vertex, x));
        for (l, &y) in w.cycle.iter().enumerate() {
            let consecutive = (k + 1) % w.cycle.len() == l || (l + 1) % w.cycle.len() == k;
            if k != l {
                assert_eq!(f.adjacent(x, y), consecutive);
            }
        }
    }
}

/// The link of `v` is a cycle of length `n`: n vertices, n edges, each
/// vertex of degree 2.
fn assert_link_cycle(f: &ComplexFragment, v: VertexId, n: usize) {
    let link = f.link_of(&[v]).unwrap();
    assert_eq!(link.count(0), n);
    assert_eq!(link.count(1), n);
    assert_eq!(link.count(2), 0);
    for x in link.vertices() {
        let degree = link.simplices().filter(|s| s.len() == 2 && s.contains(&x)).count();
        assert_eq!(degree, 2);
    }
}

#[test]
fn links_residues_and_balls() {
    let f = fragment(common::Z2, 4);
    let v0 = real(&f, "1");
    assert_link_cycle(&f, v0, 6);
    let link = f.link_of(&[v0]).unwrap();
    let x = real(&f, "a");
    let res = f.residue_in(&[x], &link);
    assert_eq!((res.count(0), res.count(1)), (3, 2));
    let ball = f.one_ball_in(&[x], &link);
    assert_eq!((ball.count(0), ball.count(1)), (3, 2));
    let e: Vec<VertexId> = {
        let mut e = vec![x, real(&f, "ab")];
        e.sort();
        e
    };
    assert!(link.contains(&e));
    let res = f.residue_in(&e, &link);
    assert_eq!((res.count(0), res.count(1)), (2, 1));
    let ball = f.one_ball_in(&e, &link);
    assert_eq!((ball.count(0), ball.count(1)), (4, 3));

    let a2 = fragment(common::A2, 4);
    let centre = VertexKey::Interior {
        base: Element::identity(),
        pair: (0, 1),
        index: 1,
    };
    // The boundary hexagon of the precell sits in the link as an induced
    // cycle, next to four overlap partners.
    let c = a2.id(&centre).unwrap();
    let link = a2.link_of(&[c]).unwrap();
    assert_eq!(link.count(0), 10);
    let o = a2.oracle();
    let precell = a2.precell(&Element::identity(), o.matrix().finite_pairs()[0]).unwrap();
    let hexagon = precell.boundary().unwrap();
    for (k, &x) in hexagon.iter().enumerate() {
        assert!(link.contains(&[x]));
        for (l, &y) in hexagon.iter().enumerate() {
            let gap = k.abs_diff(l);
            if gap != 0 {
                assert_eq!(link.contains(&sorted([x, y])), gap == 1 || gap == 5);
            }
        }
    }

    // Links near the frontier are refused rather than truncated.
    let edge = (0..f.vertex_count() as VertexId).find(|&v| !f.is_complete(v)).unwrap();
    assert!(f.link_of(&[edge]).is_err());
}

/// Every non-Cayley edge of Z² is a diagonal `g -- g·ab^±1` of a unit
/// square and every triangle holds exactly one diagonal.
#[test]
fn z2_interior_edges_are_square_diagonals() {
    let f = fragment(common::Z2, 3);
    let o = f.oracle();
    let mut diagonals = HashSet::new();
    for e in f.simplices(1) {
        if !is_cayley_edge(&f, e[0], e[1]) {
            let (VertexKey::Real(g), VertexKey::Real(h)) = (f.key(e[0]), f.key(e[1])) else {
                panic!("Z2 has no interior vertices")
            };
            let q = o.quotient(g, h).unwrap();
            let value = common::Model::Abelian.value(q.key());
            assert!(["[1, 1]", "[-1, -1]"].contains(&value.as_str()), "{value}");
            diagonals.insert(e.clone());
        }
    }
    assert!(diagonals.len() >= f.precells().iter().filter(|p| p.complete).count());
    for t in f.simplices(2) {
        let held = [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
            .iter()
            .filter(|e| diagonals.contains(&e.to_vec()))
            .count();
        assert_eq!(held, 1);
    }
    assert!(f.simplices(3).is_empty());
}

#[test]
fn free_group_fragment_is_the_cayley_ball() {
    let f = fragment(common::F2, 4);
    assert!(f.precells().is_empty());
    assert_eq!(f.vertex_count(), 1 + 4 + 12 + 36 + 108);
    assert_eq!(f.simplices(1).len(), f.vertex_count() - 1);
    assert!(f.simplices(2).is_empty());
}

/// Cliques found by an independent recursion match the stored simplices
/// around central vertices.
#[test]
fn flag_completion() {
    for text in [common::A2, common::B2, common::F2_X_Z] {
        let f = default_fragment(text);
        let stored: HashSet<Vec<VertexId>> =
            (1..=4).flat_map(|d| f.simplices(d).iter().cloned()).collect();
        for s in &stored {
            assert!(s.windows(2).all(|p| p[0] < p[1]));
            assert!(f.is_simplex(s));
        }
        for v in (0..f.vertex_count() as VertexId).filter(|&v| f.boundary_distance(v) >= 3) {
            let mut nbrs: Vec<VertexId> = f.neighbors(v).to_vec();
            nbrs.sort();
            let mut stack: Vec<Vec<VertexId>> = vec![vec![v]];
            while let Some(c) = stack.pop() {
                if c.len() >= 2 {
                    let mut s = c.clone();
                    s.sort();
                    assert!(stored.contains(&s), "missing simplex {s:?}");
                }
                if c.len() == 5 {
                    continue;
                }
                let last = *c.last().unwrap();
                for &x in &nbrs {
                    if (c.len() == 1 || x > last) && c.iter().all(|&y| f.adjacent(x, y)) {
                        let mut d = c.clone();
                        d.push(x);
                        stack.push(d);
                    }
                }
            }
        }
        assert!(f.max_dimension() <= 4);
    }
}

/// Translating an edge near the centre by a short element keeps it an edge.
#[test]
fn edges_are_translation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for text in [common::A2, common::B2, common::Z2_FREE_Z] {
        let f = default_fragment(text);
        let o = f.oracle().clone();
        let letters = 2 * o.matrix().rank() as u8;
        let centre: Vec<VertexId> =
            (0..f.vertex_count() as VertexId).filter(|&v| f.boundary_distance(v) >= 3).collect();
        for _ in 0..300 {
            let u = centre[rng.gen_range(0..centre.len())];
            let v = centre[rng.gen_range(0..centre.len())];
            if u == v {
                continue;
            }
            let w: Vec<u8> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..letters)).collect();
            let g = o.canonical(&w).unwrap();
            let tu = f.id(&f.key(u).translate(&o, &g).unwrap());
            let tv = f.id(&f.key(v).translate(&o, &g).unwrap());
            if let (Some(tu), Some(tv)) = (tu, tv) {
                if f.is_complete(tu) && f.is_complete(tv) {
                    assert_eq!(f.adjacent(u, v), f.adjacent(tu, tv));
                }
            }
        }
    }
}

/// A path of `n` edges between real vertices joins elements at Cayley
/// distance at most `n·max(2, M-2)`.
#[test]
fn paths_bound_cayley_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (text, factor) in [(common::A2, 2), (common::B2, 2), (common::Z2, 2)] {
        let f = default_fragment(text);
        let o = f.oracle().clone();
        let reals: Vec<VertexId> =
            (0..f.vertex_count() as VertexId).filter(|&v| f.key(v).is_real()).collect();
        let mut sampled = 0;
        while sampled < 200 {
            let start = reals[rng.gen_range(0..reals.len())];
            let mut path = vec![start];
            for _ in 0..rng.gen_range(1..6) {
                let nbrs = f.neighbors(*path.last().unwrap());
                path.push(nbrs[rng.gen_range(0..nbrs.len())]);
            }
            let end = *path.last().unwrap();
            let (VertexKey::Real(g), VertexKey::Real(h)) = (f.key(start), f.key(end)) else {
                continue;
            };
            let d = o.geodesic_length(&o.quotient(g, h).unwrap());
            assert!(d <= (path.len() - 1) * factor);
            sampled += 1;
        }
    }
}

#[test]
fn dump_is_sorted_and_deterministic() {
    let a = fragment(common::A2, 3).dump();
    let b = fragment(common::A2, 3).dump();
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert!(lines.windows(2).all(|p| p[0] <= p[1]));
    assert!(lines.iter().any(|l| l.starts_with("v 1:ab:1 interior")));
    assert!(lines.iter().any(|l| l.starts_with("p 1 a b")));
    assert!(lines.iter().any(|l| l.starts_with("s 3 ")));
}
