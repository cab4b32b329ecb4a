//! Orbit representatives, simplex labels and the alphabets built from them.
//!
//! The group acts freely on simplices, so each simplex `σ` is `λ_σ · σ̄` for
//! a unique representative `σ̄` and label `λ_σ`. Representatives are chosen
//! among the translates `anchor(u)⁻¹ · σ`, `u ∈ σ`, where the anchor of a
//! real vertex is itself and that of an interior vertex is its precell's
//! base. Each candidate therefore contains the identity vertex or an
//! interior vertex of a precell based at the identity. The winner has the
//! most vertices in a single closed base precell, then the smallest total
//! anchor length, then the smallest sorted key list.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::complex::{ComplexFragment, Simplex, VertexKey};
use crate::coxeter::{alternating_word, letter, FinitePair};
use crate::error::{Error, Result};
use crate::oracle::{Element, Oracle};

/// A simplex named by its sorted vertex keys.
pub type SimplexKey = Vec<VertexKey>;

/// Vertex sets of the closed precells based at the identity, one per
/// finite pair.
#[derive(Clone, Debug)]
pub struct BasePrecells {
    pub cells: Vec<(FinitePair, BTreeSet<VertexKey>)>,
}

impl BasePrecells {
    pub fn new(oracle: &Oracle) -> Result<Self> {
        let mut cells = Vec::new();
        for p in oracle.matrix().finite_pairs() {
            let m = p.m as usize;
            let mut set = BTreeSet::new();
            for (x, y) in [(p.i, p.j), (p.j, p.i)] {
                let w = alternating_word(letter(x, false), letter(y, false), m)?;
                for k in 0..=m {
                    set.insert(VertexKey::Real(oracle.canonical(&w[..k])?));
                }
            }
            for index in 1..m.saturating_sub(1) {
                set.insert(VertexKey::Interior {
                    base: Element::identity(),
                    pair: (p.i as u8, p.j as u8),
                    index: index as u8,
                });
            }
            cells.push((p, set));
        }
        Ok(BasePrecells { cells })
    }

    /// Largest number of vertices of `sigma` inside one closed base precell;
    /// with no finite pairs only the identity vertex counts.
    pub fn overlap(&self, sigma: &[VertexKey]) -> usize {
        let identity = VertexKey::Real(Element::identity());
        let own = sigma.contains(&identity) as usize;
        self.cells
            .iter()
            .map(|(_, set)| sigma.iter().filter(|v| set.contains(v)).count())
            .max()
            .unwrap_or(0)
            .max(own)
    }

    pub fn touches(&self, sigma: &[VertexKey]) -> bool {
        self.overlap(sigma) > 0
    }
}

fn sorted(mut key: SimplexKey) -> SimplexKey {
    key.sort();
    key
}

/// Representative and label of the simplex with vertex keys `sigma`.
pub fn canonical_rep_and_label(
    oracle: &Oracle,
    base: &BasePrecells,
    sigma: &[VertexKey],
) -> Result<(SimplexKey, Element)> {
    if sigma.is_empty() {
        return Err(Error::Construction("empty simplex has no label".into()));
    }
    let mut best: Option<((isize, usize, SimplexKey), Element)> = None;
    let anchors: BTreeSet<&Element> = sigma.iter().map(|v| v.anchor()).collect();
    for g in anchors {
        let candidate = sorted(
            sigma
                .iter()
                .map(|v| v.translate_inverse(oracle, g))
                .collect::<Result<_>>()?,
        );
        let score = (
            -(base.overlap(&candidate) as isize),
            candidate.iter().map(|v| v.anchor().len()).sum::<usize>(),
            candidate,
        );
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, g.clone()));
        }
    }
    let ((_, _, rep), label) = best.expect("non-empty simplex");
    Ok((rep, label))
}

#[derive(Clone, Debug)]
pub struct Orbit {
    pub rep: SimplexKey,
    /// The representative as vertex ids of the fragment it was found in.
    pub ids: Simplex,
}

impl Orbit {
    pub fn dimension(&self) -> usize {
        self.rep.len() - 1
    }
}

/// One representative per orbit of simplices.
pub struct OrbitTable {
    oracle: Arc<Oracle>,
    base: BasePrecells,
    orbits: Vec<Orbit>,
    index: HashMap<SimplexKey, usize>,
    /// Edges through the identity vertex and the base interior vertices.
    edges: BTreeSet<SimplexKey>,
}

impl OrbitTable {
    pub fn oracle(&self) -> &Arc<Oracle> {
        &self.oracle
    }

    pub fn base_precells(&self) -> &BasePrecells {
        &self.base
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit(&self, k: usize) -> &Orbit {
        &self.orbits[k]
    }

    pub fn orbit_of_rep(&self, rep: &[VertexKey]) -> Option<usize> {
        self.index.get(rep).copied()
    }

    /// Orbit index and label of a simplex given by keys.
    pub fn classify(&self, sigma: &[VertexKey]) -> Result<(usize, Element)> {
        let (rep, label) = canonical_rep_and_label(&self.oracle, &self.base, sigma)?;
        let k = self.orbit_of_rep(&rep).ok_or_else(|| {
            Error::Construction(format!("simplex with no orbit in the table: {}", self.describe(&rep)))
        })?;
        Ok((k, label))
    }

    pub fn label(&self, sigma: &[VertexKey]) -> Result<Element> {
        Ok(canonical_rep_and_label(&self.oracle, &self.base, sigma)?.1)
    }

    /// Number of orbits in each dimension.
    pub fn counts_by_dimension(&self) -> Vec<usize> {
        let mut counts = Vec::new();
        for o in &self.orbits {
            let d = o.dimension();
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        counts
    }

    pub fn describe(&self, sigma: &[VertexKey]) -> String {
        let parts: Vec<String> = sigma.iter().map(|v| v.display(&self.oracle)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Checks that the representatives are based on the base precells:
    /// the identity vertex, the two real edges at the identity on each
    /// base precell, and every interior vertex and interior edge of each
    /// base precell are representatives, and every representative meets a
    /// closed base precell (or contains the identity).
    pub fn check_based_on_base_precells(&self) -> Result<()> {
        let oracle = &self.oracle;
        let identity = VertexKey::Real(Element::identity());
        let mut required: Vec<SimplexKey> = vec![vec![identity.clone()]];
        for (p, set) in &self.base.cells {
            for g in [p.i, p.j] {
                required.push(sorted(vec![
                    identity.clone(),
                    VertexKey::Real(oracle.generator(letter(g, false))?),
                ]));
            }
            let interior: Vec<&VertexKey> = set.iter().filter(|v| !v.is_real()).collect();
            for &u in &interior {
                required.push(vec![u.clone()]);
                for w in set {
                    if w != u && self.adjacent_keys(u, w) {
                        required.push(sorted(vec![u.clone(), w.clone()]));
                    }
                }
            }
        }
        for r in required {
            if self.orbit_of_rep(&r).is_none() {
                return Err(Error::Construction(format!(
                    "{} should be an orbit representative",
                    self.describe(&r)
                )));
            }
        }
        for o in &self.orbits {
            if !self.base.touches(&o.rep) {
                return Err(Error::Construction(format!(
                    "representative {} misses the base precells",
                    self.describe(&o.rep)
                )));
            }
        }
        Ok(())
    }

    fn adjacent_keys(&self, u: &VertexKey, w: &VertexKey) -> bool {
        self.edges.contains(&sorted(vec![u.clone(), w.clone()]))
    }
}

/// Finds every orbit: each has a representative through the identity
/// vertex or an interior vertex of a base precell, so it suffices to
/// classify the simplices through those vertices.
pub fn choose_orbit_tables(fragment: &ComplexFragment) -> Result<OrbitTable> {
    let oracle = fragment.oracle().clone();
    let base = BasePrecells::new(&oracle)?;
    let mut centres = Vec::new();
    let identity = VertexKey::Real(Element::identity());
    centres.push(fragment.require(&identity)?);
    for (p, _) in &base.cells {
        for index in 1..(p.m as usize).saturating_sub(1) {
            centres.push(fragment.require(&VertexKey::Interior {
                base: Element::identity(),
                pair: (p.i as u8, p.j as u8),
                index: index as u8,
            })?);
        }
    }
    for &c in &centres {
        fragment.require_visible_link(&[c])?;
    }
    let mut reps: BTreeMap<SimplexKey, Simplex> = BTreeMap::new();
    for dim in 0..=fragment.max_dimension() {
        for s in fragment.simplices(dim) {
            if !s.iter().any(|v| centres.contains(v)) {
                continue;
            }
            let keys: SimplexKey = s.iter().map(|&v| fragment.key(v).clone()).collect();
            let (rep, _) = canonical_rep_and_label(&oracle, &base, &keys)?;
            if reps.contains_key(&rep) {
                continue;
            }
            let ids: Simplex = {
                let mut ids = rep.iter().map(|k| fragment.require(k)).collect::<Result<Vec<_>>>()?;
                ids.sort_unstable();
                ids
            };
            reps.insert(rep, ids);
        }
    }
    let mut orbits: Vec<Orbit> = reps.into_iter().map(|(rep, ids)| Orbit { rep, ids }).collect();
    orbits.sort_by(|a, b| (a.rep.len(), &a.rep).cmp(&(b.rep.len(), &b.rep)));
    let index = orbits.iter().enumerate().map(|(k, o)| (o.rep.clone(), k)).collect();
    let mut edges = BTreeSet::new();
    for &c in &centres {
        for &x in fragment.neighbors(c) {
            edges.insert(sorted(vec![fragment.key(c).clone(), fragment.key(x).clone()]));
        }
    }
    Ok(OrbitTable {
        oracle,
        base,
        orbits,
        index,
        edges,
    })
}

/// A letter of `𝒜` or `ℬ`: a group element displayed by its shortlex word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub value: Element,
    pub name: String,
}

/// Symbols sorted by element (identity first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn from_elements(oracle: &Oracle, elements: BTreeSet<Element>) -> Self {
        Alphabet {
            symbols: elements
                .into_iter()
                .map(|value| Symbol {
                    name: oracle.format(&value),
                    value,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.name.clone()).collect()
    }

    pub fn values(&self) -> BTreeSet<Element> {
        self.symbols.iter().map(|s| s.value.clone()).collect()
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.symbols.binary_search_by(|s| s.value.cmp(g)).ok()
    }

    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

fn nonempty_subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (1u32..(1 << items.len()))
        .map(|mask| {
            (0..items.len())
                .filter(|&k| mask & (1 << k) != 0)
                .map(|k| items[k].clone())
                .collect()
        })
        .collect()
}

/// `𝒜` from disjoint spanning pairs and `ℬ` from nested pairs, both with
/// the identity. Every such pair sits inside a translate of a
/// representative, and the differences of labels are translation
/// invariant, so the faces of representatives suffice.
pub fn build_alphabets(table: &OrbitTable) -> Result<(Alphabet, Alphabet)> {
    let oracle = table.oracle();
    let mut a = BTreeSet::from([Element::identity()]);
    let mut b = BTreeSet::from([Element::identity()]);
    for o in table.orbits() {
        let faces = nonempty_subsets(&o.rep);
        let mut labels: HashMap<Vec<VertexKey>, Element> = HashMap::new();
        for f in &faces {
            labels.insert(f.clone(), table.label(f)?);
        }
        let whole = &labels[&o.rep];
        for f in &faces {
            let lf = &labels[f];
            if f.len() < o.rep.len() {
                b.insert(oracle.quotient(lf, whole)?);
                b.insert(oracle.quotient(whole, lf)?);
            }
            for g in &faces {
                if f.iter().any(|v| g.contains(v)) {
                    continue;
                }
                a.insert(oracle.quotient(lf, &labels[g])?);
            }
        }
    }
    let expected = garside_elements(oracle)?;
    for (name, set) in [("A", &a), ("B", &b)] {
        if *set != expected {
            let extra: Vec<String> = set.difference(&expected).map(|g| oracle.format(g)).collect();
            let missing: Vec<String> = expected.difference(set).map(|g| oracle.format(g)).collect();
            return Err(Error::Construction(format!(
                "alphabet {name} is not the Garside set: extra [{}], missing [{}]",
                extra.join(" "),
                missing.join(" ")
            )));
        }
    }
    Ok((Alphabet::from_elements(oracle, a), Alphabet::from_elements(oracle, b)))
}

/// The identity, every generator and, for each finite pair, every Garside
/// generator, together with inverses.
pub fn garside_elements(oracle: &Oracle) -> Result<BTreeSet<Element>> {
    let mx = oracle.matrix();
    let mut out = BTreeSet::from([Element::identity()]);
    for g in 0..mx.rank() {
        out.insert(oracle.generator(letter(g, false))?);
        out.insert(oracle.generator(letter(g, true))?);
    }
    for p in mx.finite_pairs() {
        let m = p.m as usize;
        for (x, y) in [(p.i, p.j), (p.j, p.i)] {
            let w = alternating_word(letter(x, false), letter(y, false), m)?;
            for k in 1..=m {
                let g = oracle.canonical(&w[..k])?;
                out.insert(oracle.inverse(&g)?);
                out.insert(g);
            }
        }
    }
    Ok(out)
}
