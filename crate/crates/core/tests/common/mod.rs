//! Fixtures and word-problem solutions that share no code with the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use systolic_artin::coxeter::{parse_coxeter, CoxeterMatrix, Letter};

pub const Z2: &str = "gens: a b\nm a b = 2\n";
pub const A2: &str = "gens: a b\nm a b = 3\n";
pub const B2: &str = "gens: a b\nm a b = 4\n";
pub const F2: &str = "gens: a b\n";
pub const F2_X_Z: &str = "gens: a b c\nm a b = 2\nm a c = 2\n";
pub const Z2_FREE_Z: &str = "gens: a b c\nm a b = 2\n";

pub const FIXTURES: [(&str, &str); 6] = [
    ("Z2", Z2),
    ("A2", A2),
    ("B2", B2),
    ("F2", F2),
    ("F2xZ", F2_X_Z),
    ("Z2*Z", Z2_FREE_Z),
];

pub fn matrix(text: &str) -> CoxeterMatrix {
    parse_coxeter(text).expect("fixture parses")
}

/// Every word of length exactly `n` over `letters` letters.
pub fn words_of_length(letters: u8, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(letters: u8, n: usize) -> Vec<Vec<Letter>> {
    (0..=n).flat_map(|k| words_of_length(letters, k)).collect()
}

fn generator(l: Letter) -> usize {
    (l / 2) as usize
}

fn sign(l: Letter) -> i64 {
    if l % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Laurent polynomial in `t`, exponent to coefficient, no zero entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Laurent(BTreeMap<i32, i64>);

impl Laurent {
    pub fn monomial(c: i64, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        Laurent(m)
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut m = self.0.clone();
        for (&e, &c) in &other.0 {
            let v = m.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                m.remove(&e);
            }
        }
        Laurent(m)
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &other.0 {
                out = out.add(&Laurent::monomial(c1 * c2, e1 + e2));
            }
        }
        out
    }
}

pub type Mat = [[Laurent; 2]; 2];

fn mat(entries: [[(i64, i32); 2]; 2]) -> Mat {
    entries.map(|row| row.map(|(c, e)| Laurent::monomial(c, e)))
}

/// `p` is a sum of monomials given as (coefficient, exponent) pairs.
fn mat_sum(entries: [[&[(i64, i32)]; 2]; 2]) -> Mat {
    entries.map(|row| {
        row.map(|terms| {
            terms
                .iter()
                .fold(Laurent::default(), |acc, &(c, e)| acc.add(&Laurent::monomial(c, e)))
        })
    })
}

pub fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let entry = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn identity_mat() -> Mat {
    mat([[(1, 0), (0, 0)], [(0, 0), (1, 0)]])
}

/// Reduced Burau images of the braid generators of B3 and their inverses:
/// `[s1, S1, s2, S2]`. Faithful on B3.
pub fn burau() -> [Mat; 4] {
    [
        mat([[(-1, 1), (1, 0)], [(0, 0), (1, 0)]]),
        mat([[(-1, -1), (1, -1)], [(0, 0), (1, 0)]]),
        mat([[(1, 0), (0, 0)], [(1, 1), (-1, 1)]]),
        mat_sum([[&[(1, 0)], &[]], [&[(1, 0)], &[(-1, -1)]]]),
    ]
}

/// Independent solutions of the word problem: each maps a word to a value
/// that is equal for two words exactly when they are equal in the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// A2 = B3 via a, b -> s1, s2.
    BraidA2,
    /// B2 inside B3 via a, b -> s1^2, s2.
    BraidB2,
    /// Z^2 by exponent sums.
    Abelian,
    /// Free group by free reduction.
    Free,
    /// F2 x Z with a central: free reduction of b, c and the a exponent.
    FreeTimesZ,
    /// Z^2 * Z: alternating syllables of Z^2 (a, b) and powers of c.
    Z2FreeZ,
}

pub fn model(name: &str) -> Model {
    match name {
        "Z2" => Model::Abelian,
        "A2" => Model::BraidA2,
        "B2" => Model::BraidB2,
        "F2" => Model::Free,
        "F2xZ" => Model::FreeTimesZ,
        "Z2*Z" => Model::Z2FreeZ,
        _ => panic!("unknown fixture {name}"),
    }
}

fn free_reduce(w: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in w {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Model {
    pub fn value(&self, w: &[Letter]) -> String {
        match self {
            Model::BraidA2 | Model::BraidB2 => {
                let b = burau();
                let mut m = identity_mat();
                for &l in w {
                    let image: Vec<&Mat> = match (self, generator(l)) {
                        (Model::BraidB2, 0) => vec![&b[l as usize], &b[l as usize]],
                        _ => vec![&b[l as usize]],
                    };
                    for x in image {
                        m = mat_mul(&m, x);
                    }
                }
                format!("{m:?}")
            }
            Model::Abelian => {
                let mut e = [0i64; 2];
                for &l in w {
                    e[generator(l)] += sign(l);
                }
                format!("{e:?}")
            }
            Model::Free => format!("{:?}", free_reduce(w.iter().copied())),
            Model::FreeTimesZ => {
                let a: i64 = w.iter().filter(|&&l| generator(l) == 0).map(|&l| sign(l)).sum();
                let rest = free_reduce(w.iter().copied().filter(|&l| generator(l) != 0));
                format!("{a} {rest:?}")
            }
            Model::Z2FreeZ => {
                // Syllables: Ok((x, y)) in Z^2 or Err(k) for c^k, never trivial.
                let mut out: Vec<Result<(i64, i64), i64>> = Vec::new();
                for &l in w {
                    let s = match generator(l) {
                        0 => Ok((sign(l), 0)),
                        1 => Ok((0, sign(l))),
                        _ => Err(sign(l)),
                    };
                    let merged = match (out.last(), s) {
                        (Some(Ok((x, y))), Ok((dx, dy))) => Some(Ok((x + dx, y + dy))),
                        (Some(Err(k)), Err(dk)) => Some(Err(k + dk)),
                        _ => None,
                    };
                    match merged {
                        Some(m) => {
                            out.pop();
                            if m != Ok((0, 0)) && m != Err(0) {
                                out.push(m);
                            }
                        }
                        None => out.push(s),
                    }
                }
                format!("{out:?}")
            }
        }
    }

    /// Length of a shortest word with the same value, by search over words
    /// of increasing length.
    pub fn geodesic_length(&self, w: &[Letter], letters: u8, cap: usize) -> Option<usize> {
        let target = self.value(w);
        (0..=cap).find(|&n| words_of_length(letters, n).iter().any(|u| self.value(u) == target))
    }
}

pub mod census {
    //! Exhaustive uniqueness of directed geodesics, counted by a search
    //! written from the definition over adjacency alone.

    use std::collections::{BTreeSet, VecDeque};
    use std::sync::Arc;

    use systolic_artin::complex::{build_fragment, ComplexFragment, VertexId};
    use systolic_artin::geodesics::{directed_geodesics_between, is_directed_geodesic};
    use systolic_artin::labels::choose_orbit_tables;
    use systolic_artin::oracle::Oracle;

    fn bfs(f: &ComplexFragment, s: VertexId, cap: u32) -> Vec<u32> {
        let mut d = vec![u32::MAX; f.vertex_count()];
        d[s as usize] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if d[x as usize] == cap {
                continue;
            }
            for &y in f.neighbors(x) {
                if d[y as usize] == u32::MAX {
                    d[y as usize] = d[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        d
    }

    fn cliques(f: &ComplexFragment, pool: &[VertexId], current: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        for (k, &v) in pool.iter().enumerate() {
            if current.iter().all(|&c| f.adjacent(c, v)) {
                current.push(v);
                out.push(current.clone());
                cliques(f, &pool[k + 1..], current, out);
                current.pop();
            }
        }
    }

    /// The residue of `a` in the link of `s` misses the 1-ball of `b` there.
    fn residue_misses_ball(f: &ComplexFragment, a: &[VertexId], s: &[VertexId], b: &[VertexId]) -> bool {
        let link: BTreeSet<VertexId> = f
            .neighbors(s[0])
            .iter()
            .copied()
            .filter(|&x| !s.contains(&x) && s.iter().all(|&y| f.adjacent(x, y)))
            .collect();
        link.iter().all(|&x| {
            let in_residue = a.contains(&x) || a.iter().all(|&y| f.adjacent(x, y));
            let in_ball = b.contains(&x) || b.iter().any(|&y| f.adjacent(x, y));
            !(in_residue && in_ball)
        })
    }

    /// Number of directed geodesics from `v` to `w` of length `d(v, w)`.
    pub fn count_directed_geodesics(f: &ComplexFragment, v: VertexId, w: VertexId, n: u32) -> usize {
        let from_v = bfs(f, v, n);
        let from_w = bfs(f, w, n);
        let layer = |i: u32| -> Vec<VertexId> {
            (0..f.vertex_count() as VertexId)
                .filter(|&x| from_v[x as usize] == i && from_w[x as usize] == n - i)
                .collect()
        };
        let layers: Vec<Vec<VertexId>> = (0..=n).map(layer).collect();
        fn go(f: &ComplexFragment, layers: &[Vec<VertexId>], path: &mut Vec<Vec<VertexId>>) -> usize {
            let i = path.len();
            let candidates: Vec<Vec<VertexId>> = if i + 1 == layers.len() {
                vec![layers[i].clone()]
            } else {
                let prev = &path[i - 1];
                let pool: Vec<VertexId> =
                    layers[i].iter().copied().filter(|&x| prev.iter().all(|&p| f.adjacent(p, x))).collect();
                let mut out = Vec::new();
                cliques(f, &pool, &mut Vec::new(), &mut out);
                out
            };
            let mut total = 0;
            for s in candidates {
                let prev = &path[i - 1];
                if prev.len() + s.len() > 5 || !s.iter().all(|&x| prev.iter().all(|&p| f.adjacent(p, x))) {
                    continue;
                }
                if i >= 2 && !residue_misses_ball(f, &path[i - 2], prev, &s) {
                    continue;
                }
                if i + 1 == layers.len() {
                    total += 1;
                } else {
                    path.push(s);
                    total += go(f, layers, path);
                    path.pop();
                }
            }
            total
        }
        if n == 0 {
            return 1;
        }
        go(f, &layers, &mut vec![vec![v]])
    }

    #[derive(Debug)]
    pub struct Census {
        pub pairs: usize,
        pub max_distance: u32,
        pub failures: Vec<String>,
        pub vertex_orbits: usize,
        pub source_orbits: usize,
    }

    impl Census {
        pub fn passed(&self) -> bool {
            self.failures.is_empty() && self.pairs > 0 && self.source_orbits == self.vertex_orbits
        }
    }

    /// Every source at boundary distance at least `depth` against every
    /// target within `reach` of it.
    pub fn unique_geodesics(text: &str, radius: usize, depth: u32, reach: u32) -> Census {
        let oracle = Arc::new(Oracle::new(&super::matrix(text)).unwrap());
        let f = build_fragment(oracle, radius).unwrap();
        let table = choose_orbit_tables(&f).unwrap();
        let vertex_orbits = table.counts_by_dimension()[0];
        let mut orbits = BTreeSet::new();
        let mut census = Census { pairs: 0, max_distance: 0, failures: Vec::new(), vertex_orbits, source_orbits: 0 };
        for v in (0..f.vertex_count() as VertexId).filter(|&v| f.boundary_distance(v) >= depth) {
            orbits.insert(table.classify(&[f.key(v).clone()]).unwrap().0);
            let d = bfs(&f, v, reach);
            for w in (0..f.vertex_count() as VertexId).filter(|&w| w != v && d[w as usize] <= reach) {
                let n = d[w as usize];
                census.pairs += 1;
                census.max_distance = census.max_distance.max(n);
                let by_definition = count_directed_geodesics(&f, v, w, n);
                let found = directed_geodesics_between(&f, v, w, 3).unwrap();
                let ok = by_definition == 1
                    && found.len() == 1
                    && found[0].len() == n as usize
                    && is_directed_geodesic(&f, &found[0].simplices).unwrap();
                if !ok {
                    census.failures.push(format!(
                        "{} -> {}: {by_definition} by definition, {} found",
                        f.key(v).token(f.oracle()),
                        f.key(w).token(f.oracle()),
                        found.len()
                    ));
                }
            }
        }
        census.source_orbits = orbits.len();
        census
    }
}

pub mod languages {
    //! The Z² and Z² ∗ Z languages as described in words.

    use systolic_artin::fsa::{Fsa, Sym};

    /// Words in the Z² language as listed: `αⁿ` on the six rays, the six
    /// alternating families `(xy)ⁿ`, and each of those followed by a run of
    /// one of its two letters. `d` is `ab`.
    pub const Z2_BLOCKS: [(&str, &str); 6] =
        [("a", "ab"), ("b", "ab"), ("A", "b"), ("AB", "A"), ("AB", "B"), ("B", "a")];
    pub const Z2_RAYS: [&str; 6] = ["a", "b", "ab", "A", "B", "AB"];

    pub fn z2_form(w: &[&str]) -> bool {
        if w.is_empty() || (Z2_RAYS.contains(&w[0]) && w.iter().all(|x| *x == w[0])) {
            return true;
        }
        Z2_BLOCKS.iter().any(|&(x, y)| {
            let k = w.chunks(2).take_while(|c| c == &[x, y]).count();
            let rest = &w[2 * k..];
            k >= 1 && (rest.iter().all(|t| *t == x) || rest.iter().all(|t| *t == y))
        })
    }

    /// The same language as an automaton, one branch per family.
    pub fn z2_automaton(alphabet: &[String]) -> Fsa {
        let mut f = Fsa::new(alphabet.to_vec());
        let sym = |n: &str| alphabet.iter().position(|a| a == n).unwrap() as Sym;
        let start = f.add_state(true);
        f.add_initial(start);
        for r in Z2_RAYS {
            let q = f.add_state(true);
            f.add_transition(start, sym(r), q);
            f.add_transition(q, sym(r), q);
        }
        for (x, y) in Z2_BLOCKS {
            let mid = f.add_state(false);
            let end = f.add_state(true);
            f.add_transition(start, sym(x), mid);
            f.add_transition(mid, sym(y), end);
            f.add_transition(end, sym(x), mid);
            for t in [x, y] {
                let run = f.add_state(true);
                f.add_transition(end, sym(t), run);
                f.add_transition(run, sym(t), run);
            }
        }
        f
    }

    /// Z² ∗ Z: maximal runs without `c` are words of the Z² language and
    /// runs of `c` letters are powers of one sign.
    pub fn z2_free_z_form(w: &[&str]) -> bool {
        let is_c = |t: &&str| *t == "c" || *t == "C";
        let mut k = 0;
        while k < w.len() {
            let c = is_c(&w[k]);
            let end = (k..w.len()).find(|&j| is_c(&w[j]) != c).unwrap_or(w.len());
            let run = &w[k..end];
            let ok = if c { run.iter().all(|t| *t == run[0]) } else { z2_form(run) };
            if !ok {
                return false;
            }
            k = end;
        }
        true
    }
}

pub mod cells {
    //! Cells of a triangulated precell, counted from the fragment.

    use std::collections::{BTreeSet, HashSet};

    use systolic_artin::complex::{ComplexFragment, Precell, VertexId, VertexKey};

    pub fn is_cayley_edge(f: &ComplexFragment, u: VertexId, v: VertexId) -> bool {
        match (f.key(u), f.key(v)) {
            (VertexKey::Real(g), VertexKey::Real(h)) => {
                let o = f.oracle();
                o.geodesic_length(&o.quotient(g, h).unwrap()) == 1
            }
            _ => false,
        }
    }

    /// Interior vertices, non-Cayley edges and triangles spanned by the
    /// vertices of a complete precell.
    pub fn recount_cells(f: &ComplexFragment, p: &Precell) -> (usize, usize, usize) {
        let triangles: HashSet<&Vec<VertexId>> = f.simplices(2).iter().collect();
        let mut cell: BTreeSet<VertexId> = p.boundary().unwrap().into_iter().collect();
        assert_eq!(cell.len(), 2 * p.pair.m as usize);
        cell.extend(p.interior.iter().copied());
        let vs: Vec<VertexId> = cell.into_iter().collect();
        let (mut edges, mut tris) = (0, 0);
        for (i, &u) in vs.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate().skip(i + 1) {
                if f.adjacent(u, v) && !is_cayley_edge(f, u, v) {
                    edges += 1;
                }
                for &w in &vs[j + 1..] {
                    if triangles.contains(&vec![u, v, w]) {
                        tris += 1;
                    }
                }
            }
        }
        (p.interior.len(), edges, tris)
    }
}
