mod common;

use std::sync::Arc;

use common::census::{count_directed_geodesics, unique_geodesics};
use common::matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systolic_artin::complex::{build_fragment, ComplexFragment, VertexId, VertexKey};
use systolic_artin::geodesics::{
    allowable_geodesics_of, directed_geodesic_between, distance, distances_from,
    extend_to_real_vertex, find_violation, is_directed_geodesic, polygonal_path_of,
    DirectedGeodesic, Violation,
};
use systolic_artin::oracle::Oracle;
use systolic_artin::Error;

fn fragment(text: &str, radius: usize) -> ComplexFragment {
    let oracle = Arc::new(Oracle::new(&matrix(text)).unwrap());
    build_fragment(oracle, radius).unwrap()
}

/// Vertex of Z² at lattice point `(x, y)`.
fn point(f: &ComplexFragment, x: i32, y: i32) -> VertexId {
    let mut w = String::new();
    for (n, pos, neg) in [(x, 'a', 'A'), (y, 'b', 'B')] {
        let c = if n >= 0 { pos } else { neg };
        w.extend(std::iter::repeat(c).take(n.unsigned_abs() as usize));
    }
    let o = f.oracle();
    let g = o.canonical(&o.matrix().parse_word(&w).unwrap_or_default()).unwrap();
    f.id(&VertexKey::Real(g)).unwrap()
}

fn sorted(mut s: Vec<VertexId>) -> Vec<VertexId> {
    s.sort();
    s
}

#[test]
fn z2_examples() {
    let f = fragment(common::Z2, 6);
    let p = |x, y| point(&f, x, y);
    let straight = vec![vec![p(0, 0)], vec![p(1, 0)], vec![p(2, 0)]];
    assert!(is_directed_geodesic(&f, &straight).unwrap());
    let bent = vec![vec![p(0, 0)], vec![p(1, 0)], vec![p(2, 1)]];
    assert_eq!(find_violation(&f, &bent).unwrap(), Some(Violation::ResidueMeetsBall(0)));
    let thick = vec![vec![p(0, 0)], sorted(vec![p(1, 0), p(1, 1)]), vec![p(2, 1)]];
    assert!(is_directed_geodesic(&f, &thick).unwrap());
    assert_eq!(directed_geodesic_between(&f, p(0, 0), p(2, 1)).unwrap().simplices, thick);

    let gamma = DirectedGeodesic::new(thick.clone());
    let mut paths = allowable_geodesics_of(&f, &gamma).unwrap();
    paths.sort();
    let mut expected = vec![vec![p(0, 0), p(1, 0), p(2, 1)], vec![p(0, 0), p(1, 1), p(2, 1)]];
    expected.sort();
    assert_eq!(paths, expected);
    let poly = polygonal_path_of(&gamma);
    assert_eq!(poly.len(), 5);
    assert_eq!(poly[1], sorted(vec![p(0, 0), p(1, 0), p(1, 1)]));
    assert_eq!(poly[3], sorted(vec![p(1, 0), p(1, 1), p(2, 1)]));

    // Malformed sequences.
    assert_eq!(
        find_violation(&f, &[vec![p(0, 0)], vec![p(2, 0)]]).unwrap(),
        Some(Violation::NotSpanning(0))
    );
    assert_eq!(
        find_violation(&f, &[vec![p(0, 0)], vec![p(0, 0)]]).unwrap(),
        Some(Violation::NotSpanning(0))
    );
    assert_eq!(find_violation(&f, &[vec![]]).unwrap(), Some(Violation::NotSimplex(0)));
}

#[test]
fn distances_and_visibility() {
    // Diagonals shorten the (1, 1) direction only, so the frontier of a
    // Cayley ball is nearest along it.
    let f = fragment(common::Z2, 12);
    let o = point(&f, 0, 0);
    assert_eq!(f.boundary_distance(o), 7);
    assert_eq!(distance(&f, o, point(&f, 3, 3)).unwrap(), 3);
    assert_eq!(distance(&f, o, point(&f, 2, -2)).unwrap(), 4);
    assert_eq!(distance(&f, o, point(&f, 2, -1)).unwrap(), 3);
    let far = point(&f, 6, 6);
    let near_edge = point(&f, 5, 6);
    assert!(matches!(distance(&f, far, near_edge), Err(Error::InsufficientRadius(_))));
    let d = distances_from(&f, o, 2);
    assert_eq!(d.iter().filter(|&&x| x == 1).count(), 6);
    assert_eq!(d.iter().filter(|&&x| x == 2).count(), 12);
}

/// Every vertex pair within distance 4 of a source at least 6 away from
/// the frontier has exactly one directed geodesic; the sources meet every
/// vertex orbit, so by equivariance this covers all pairs at distance <= 4.
#[test]
fn unique_directed_geodesics_z2() {
    let c = unique_geodesics(common::Z2, 12, 6, 4);
    assert!(c.passed(), "{c:?}");
    assert_eq!(c.max_distance, 4);
}

#[test]
fn unique_directed_geodesics_a2() {
    let c = unique_geodesics(common::A2, 10, 6, 4);
    assert!(c.passed(), "{:?}", &c.failures[..c.failures.len().min(5)]);
    assert_eq!(c.max_distance, 4);
}

/// Pairs of central vertices in the richer fixtures, sampled.
#[test]
fn sampled_unique_geodesics() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (text, radius) in [(common::B2, 8), (common::F2_X_Z, 6), (common::Z2_FREE_Z, 6)] {
        let f = fragment(text, radius);
        let deep: Vec<VertexId> =
            (0..f.vertex_count() as VertexId).filter(|&v| f.boundary_distance(v) >= 4).collect();
        assert!(!deep.is_empty());
        for _ in 0..60 {
            let v = deep[rng.gen_range(0..deep.len())];
            let d = distances_from(&f, v, 2);
            let near: Vec<VertexId> =
                (0..f.vertex_count() as VertexId).filter(|&w| w != v && d[w as usize] <= 2).collect();
            let w = near[rng.gen_range(0..near.len())];
            let gamma = directed_geodesic_between(&f, v, w).unwrap();
            assert_eq!(count_directed_geodesics(&f, v, w, d[w as usize]), 1);
            assert_eq!(gamma.len(), d[w as usize] as usize);
        }
    }
}

/// Subpaths of directed geodesics are directed geodesics, and they are
/// the unique directed geodesics between their ends when those are vertices.
#[test]
fn subpaths_of_directed_geodesics() {
    let f = fragment(common::A2, 8);
    let o = point_a2(&f, "1");
    let d = distances_from(&f, o, 4);
    for w in (0..f.vertex_count() as VertexId).filter(|&w| d[w as usize] == 4) {
        let gamma = directed_geodesic_between(&f, o, w).unwrap();
        for i in 0..gamma.simplices.len() {
            for j in i + 1..=gamma.simplices.len() {
                assert!(is_directed_geodesic(&f, &gamma.simplices[i..j]).unwrap());
            }
        }
        for k in 1..gamma.simplices.len() {
            if gamma.simplices[k].len() == 1 {
                let head = directed_geodesic_between(&f, o, gamma.simplices[k][0]).unwrap();
                assert_eq!(head.simplices, gamma.simplices[..=k]);
            }
        }
    }
}

fn point_a2(f: &ComplexFragment, word: &str) -> VertexId {
    let o = f.oracle();
    let g = o.canonical(&o.matrix().parse_word(word).unwrap()).unwrap();
    f.id(&VertexKey::Real(g)).unwrap()
}

/// Directed geodesics depend on their direction: some reversed geodesic
/// is not the geodesic back.
#[test]
fn direction_matters() {
    let f = fragment(common::Z2, 6);
    let o = point(&f, 0, 0);
    let d = distances_from(&f, o, 3);
    let witness = (0..f.vertex_count() as VertexId).filter(|&w| d[w as usize] == 3).find(|&w| {
        let there = directed_geodesic_between(&f, o, w).unwrap();
        let back = directed_geodesic_between(&f, w, o).unwrap();
        back.simplices != there.reversed().simplices
    });
    assert!(witness.is_some());
}

/// Geodesics from one source to adjacent targets stay close step by step.
#[test]
fn fellow_travelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (text, radius) in [(common::Z2, 8), (common::A2, 8), (common::B2, 10)] {
        let f = fragment(text, radius);
        let source = point_a2(&f, "1");
        let d = distances_from(&f, source, 5);
        let targets: Vec<VertexId> =
            (0..f.vertex_count() as VertexId).filter(|&w| (2..=3).contains(&d[w as usize])).collect();
        let mut worst = 0;
        for _ in 0..80 {
            let w = targets[rng.gen_range(0..targets.len())];
            let nbrs: Vec<VertexId> =
                f.neighbors(w).iter().copied().filter(|&x| d[x as usize] <= 3 && x != source).collect();
            let w2 = nbrs[rng.gen_range(0..nbrs.len())];
            let g1 = directed_geodesic_between(&f, source, w).unwrap();
            let g2 = directed_geodesic_between(&f, source, w2).unwrap();
            for i in 0..g1.simplices.len().min(g2.simplices.len()) {
                let from: Vec<u32> = distances_from(&f, g1.simplices[i][0], 4);
                let gap = g2.simplices[i].iter().map(|&x| from[x as usize]).min().unwrap();
                worst = worst.max(gap);
            }
        }
        assert!(worst <= 1, "gap {worst}");
    }
}

/// Extending to a real vertex keeps a directed geodesic that ends at a
/// real vertex.
#[test]
fn extension_to_real_vertices() {
    let f = fragment(common::A2, 8);
    let o = point_a2(&f, "1");
    let d = distances_from(&f, o, 3);
    let mut extended = 0;
    for w in (0..f.vertex_count() as VertexId).filter(|&w| d[w as usize] == 3 && !f.key(w).is_real()) {
        let gamma = directed_geodesic_between(&f, o, w).unwrap();
        let e = extend_to_real_vertex(&f, &gamma, 4).unwrap();
        assert!(is_directed_geodesic(&f, &e.simplices).unwrap());
        assert_eq!(e.simplices[..gamma.len()], gamma.simplices[..gamma.len()]);
        let end = e.last();
        assert_eq!(end.len(), 1);
        assert!(f.key(end[0]).is_real());
        extended += 1;
    }
    assert!(extended > 0);

    // A geodesic ending at a real vertex is returned as is.
    let gamma = directed_geodesic_between(&f, o, point_a2(&f, "ab")).unwrap();
    assert_eq!(extend_to_real_vertex(&f, &gamma, 4).unwrap().simplices, gamma.simplices);
}
