//! Exact arithmetic in Artin groups of the supported class.
//!
//! Elements are identified by their shortlex-least geodesic word. The
//! backend is chosen by decomposing the generator set: free products along
//! disconnected finite-label graphs, direct products with a generator that
//! commutes with everything else, dihedral pieces handled through Garside
//! normal forms, and a bounded rewriting search for what remains.

mod dihedral;
mod rewrite;

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::coxeter::{
    free_reduce, generator_of, inverse_word, is_inverse, letter, CoxeterMatrix, FinitePair, Label,
    Letter, Word,
};
use crate::error::{Error, Result};

use dihedral::Dihedral;
use rewrite::Rewriting;

/// A group element, stored as its canonical key. Ordering is shortlex on keys.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element(Arc<[Letter]>);

impl Element {
    pub fn identity() -> Self {
        Element(Arc::from(Vec::new()))
    }

    fn from_key(key: Word) -> Self {
        Element(Arc::from(key))
    }

    pub fn key(&self) -> &[Letter] {
        &self.0
    }

    /// Geodesic length `|g|_X`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        crate::coxeter::shortlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({:?})", &self.0[..])
    }
}

/// One factor of a dihedral Garside normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GarsideFactor {
    pub pair: FinitePair,
    /// Alternating word of length `1..=m`; length `m` is the half twist Δ.
    pub word: Word,
    pub inverted: bool,
}

impl GarsideFactor {
    pub fn is_delta(&self) -> bool {
        self.word.len() == self.pair.m as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallReport {
    pub sphere_sizes: Vec<usize>,
    /// First `(vertex key, relation index)` where the two sides disagree.
    pub failure: Option<(Word, usize)>,
}

impl BallReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

enum Backend {
    Cyclic(usize),
    Dihedral(Dihedral),
    FreeProduct {
        factor_of: HashMap<usize, usize>,
        factors: Vec<Backend>,
    },
    Central {
        center: usize,
        rest: Box<Backend>,
    },
    Rewriting(Rewriting),
}

fn components(mx: &CoxeterMatrix, gens: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &g in gens {
        if !seen.insert(g) {
            continue;
        }
        let mut comp = vec![g];
        let mut stack = vec![g];
        while let Some(x) = stack.pop() {
            for &y in gens {
                if mx.label(x, y) != Label::Infinite && seen.insert(y) {
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort();
        out.push(comp);
    }
    out
}

const REWRITE_CLASS_LIMIT: usize = 200_000;

impl Backend {
    fn plan(mx: &CoxeterMatrix, gens: &[usize]) -> Backend {
        if gens.len() == 1 {
            return Backend::Cyclic(gens[0]);
        }
        let comps = components(mx, gens);
        if comps.len() > 1 {
            let mut factor_of = HashMap::new();
            let mut factors = Vec::new();
            for (k, comp) in comps.iter().enumerate() {
                for &g in comp {
                    factor_of.insert(g, k);
                }
                factors.push(Backend::plan(mx, comp));
            }
            return Backend::FreeProduct { factor_of, factors };
        }
        if let Some(&c) = gens
            .iter()
            .find(|&&c| gens.iter().all(|&x| x == c || mx.label(c, x) == Label::Finite(2)))
        {
            let rest: Vec<usize> = gens.iter().copied().filter(|&x| x != c).collect();
            return Backend::Central {
                center: c,
                rest: Box::new(Backend::plan(mx, &rest)),
            };
        }
        if gens.len() == 2 {
            let m = mx.label(gens[0], gens[1]).finite().expect("connected pair");
            return Backend::Dihedral(Dihedral::new(gens[0], gens[1], m));
        }
        Backend::Rewriting(Rewriting::new(
            gens.to_vec(),
            &mx.finite_pairs(),
            REWRITE_CLASS_LIMIT,
        ))
    }

    fn uses_rewriting(&self) -> bool {
        match self {
            Backend::Rewriting(_) => true,
            Backend::FreeProduct { factors, .. } => factors.iter().any(Backend::uses_rewriting),
            Backend::Central { rest, .. } => rest.uses_rewriting(),
            _ => false,
        }
    }

    fn describe(&self, mx: &CoxeterMatrix) -> String {
        match self {
            Backend::Cyclic(g) => format!("Z<{}>", mx.name(*g)),
            Backend::Dihedral(d) => {
                let [i, j] = d.generators();
                format!("dihedral<{},{};{}>", mx.name(i), mx.name(j), d.label())
            }
            Backend::FreeProduct { factors, .. } => factors
                .iter()
                .map(|f| f.describe(mx))
                .collect::<Vec<_>>()
                .join(" * "),
            Backend::Central { center, rest } => {
                format!("Z<{}> x ({})", mx.name(*center), rest.describe(mx))
            }
            Backend::Rewriting(r) => format!(
                "rewriting<{}>",
                r.generators().iter().map(|&g| mx.name(g)).collect::<Vec<_>>().join(",")
            ),
        }
    }

    fn normalize(&self, w: &[Letter]) -> Result<Word> {
        match self {
            Backend::Cyclic(g) => {
                let mut exp: i64 = 0;
                for &l in w {
                    debug_assert_eq!(generator_of(l), *g);
                    exp += if is_inverse(l) { -1 } else { 1 };
                }
                Ok(vec![letter(*g, exp < 0); exp.unsigned_abs() as usize])
            }
            Backend::Dihedral(d) => d.normalize(w),
            Backend::Rewriting(r) => r.normalize(w),
            Backend::Central { center, rest } => {
                let mut exp: i64 = 0;
                let mut others = Vec::with_capacity(w.len());
                for &l in w {
                    if generator_of(l) == *center {
                        exp += if is_inverse(l) { -1 } else { 1 };
                    } else {
                        others.push(l);
                    }
                }
                let r = rest.normalize(&others)?;
                let c = letter(*center, exp < 0);
                let n = exp.unsigned_abs() as usize;
                // Shortlex-least shuffle: the central letters go in front of
                // the first letter that sorts after them.
                let p = r.iter().position(|&x| x > c).unwrap_or(r.len());
                let mut out = Vec::with_capacity(r.len() + n);
                out.extend_from_slice(&r[..p]);
                out.extend(std::iter::repeat(c).take(n));
                out.extend_from_slice(&r[p..]);
                Ok(out)
            }
            Backend::FreeProduct { factor_of, factors } => {
                let mut syllables: Vec<(usize, Word)> = Vec::new();
                let mut i = 0;
                while i < w.len() {
                    let f = factor_of[&generator_of(w[i])];
                    let mut j = i;
                    while j < w.len() && factor_of[&generator_of(w[j])] == f {
                        j += 1;
                    }
                    let run = &w[i..j];
                    i = j;
                    match syllables.last_mut() {
                        Some((g, syl)) if *g == f => {
                            let mut joined = std::mem::take(syl);
                            joined.extend_from_slice(run);
                            let n = factors[f].normalize(&joined)?;
                            if n.is_empty() {
                                syllables.pop();
                            } else {
                                *syl = n;
                            }
                        }
                        _ => {
                            let n = factors[f].normalize(run)?;
                            if !n.is_empty() {
                                syllables.push((f, n));
                            }
                        }
                    }
                }
                Ok(syllables.into_iter().flat_map(|(_, s)| s).collect())
            }
        }
    }

    fn find_dihedral(&self, i: usize, j: usize) -> Option<&Dihedral> {
        match self {
            Backend::Dihedral(d) if d.generators() == [i, j] => Some(d),
            Backend::FreeProduct { factors, .. } => {
                factors.iter().find_map(|f| f.find_dihedral(i, j))
            }
            Backend::Central { rest, .. } => rest.find_dihedral(i, j),
            _ => None,
        }
    }
}

pub struct Oracle {
    mx: CoxeterMatrix,
    backend: Backend,
    /// Dihedral machinery for each finite pair, used for Garside forms even
    /// when the main backend handles the pair differently.
    pair_forms: HashMap<(usize, usize), Dihedral>,
    cache: RwLock<HashMap<Word, Element>>,
}

const CACHE_LIMIT: usize = 4_000_000;
const VERIFY_RADIUS: usize = 4;

impl Oracle {
    /// Builds an oracle; refuses diagrams outside the supported class.
    pub fn new(mx: &CoxeterMatrix) -> Result<Self> {
        mx.require_supported()?;
        let gens: Vec<usize> = (0..mx.rank()).collect();
        let backend = Backend::plan(mx, &gens);
        let mut pair_forms = HashMap::new();
        for p in mx.finite_pairs() {
            pair_forms.insert((p.i, p.j), Dihedral::new(p.i, p.j, p.m));
        }
        let oracle = Oracle {
            mx: mx.clone(),
            backend,
            pair_forms,
            cache: RwLock::new(HashMap::new()),
        };
        if oracle.backend.uses_rewriting() {
            let report = oracle.verify_oracle_on_ball(VERIFY_RADIUS)?;
            if let Some((w, r)) = report.failure {
                return Err(Error::OracleInconsistent(format!(
                    "relation {r} fails at vertex {}",
                    mx.format_word(&w)
                )));
            }
        }
        Ok(oracle)
    }

    /// Builds an oracle that always uses the bounded rewriting search, for
    /// cross-checking the structured backends.
    pub fn new_rewriting(mx: &CoxeterMatrix) -> Result<Self> {
        mx.require_supported()?;
        let gens: Vec<usize> = (0..mx.rank()).collect();
        let backend = Backend::Rewriting(Rewriting::new(
            gens,
            &mx.finite_pairs(),
            REWRITE_CLASS_LIMIT,
        ));
        let mut pair_forms = HashMap::new();
        for p in mx.finite_pairs() {
            pair_forms.insert((p.i, p.j), Dihedral::new(p.i, p.j, p.m));
        }
        Ok(Oracle {
            mx: mx.clone(),
            backend,
            pair_forms,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.mx
    }

    pub fn backend_description(&self) -> String {
        self.backend.describe(&self.mx)
    }

    pub fn canonical(&self, w: &[Letter]) -> Result<Element> {
        for &l in w {
            if generator_of(l) >= self.mx.rank() {
                return Err(Error::UnknownGenerator(format!("letter code {l}")));
            }
        }
        let w = free_reduce(w);
        if let Some(e) = self.cache.read().expect("cache lock").get(&w) {
            return Ok(e.clone());
        }
        let key = self.backend.normalize(&w)?;
        let e = Element::from_key(key);
        let mut cache = self.cache.write().expect("cache lock");
        if cache.len() > CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(w, e.clone());
        Ok(e)
    }

    pub fn generator(&self, l: Letter) -> Result<Element> {
        self.canonical(&[l])
    }

    pub fn multiply(&self, g: &Element, h: &Element) -> Result<Element> {
        if h.is_identity() {
            return Ok(g.clone());
        }
        if g.is_identity() {
            return Ok(h.clone());
        }
        let mut w = g.key().to_vec();
        w.extend_from_slice(h.key());
        self.canonical(&w)
    }

    pub fn mul_word(&self, g: &Element, w: &[Letter]) -> Result<Element> {
        let mut v = g.key().to_vec();
        v.extend_from_slice(w);
        self.canonical(&v)
    }

    pub fn mul_letter(&self, g: &Element, l: Letter) -> Result<Element> {
        self.mul_word(g, &[l])
    }

    pub fn inverse(&self, g: &Element) -> Result<Element> {
        self.canonical(&inverse_word(g.key()))
    }

    /// `g⁻¹ h`.
    pub fn quotient(&self, g: &Element, h: &Element) -> Result<Element> {
        let mut w = inverse_word(g.key());
        w.extend_from_slice(h.key());
        self.canonical(&w)
    }

    pub fn geodesic_length(&self, g: &Element) -> usize {
        g.len()
    }

    pub fn format(&self, g: &Element) -> String {
        self.mx.format_word(g.key())
    }

    /// Left-greedy Garside normal form of a word in one finite parabolic pair.
    pub fn garside_normal_form(&self, w: &[Letter]) -> Result<Vec<GarsideFactor>> {
        let mut gens: Vec<usize> = w.iter().map(|&l| generator_of(l)).collect();
        gens.sort();
        gens.dedup();
        let (i, j) = match gens.as_slice() {
            [] => return Ok(Vec::new()),
            [g] => {
                let partner = (0..self.mx.rank())
                    .find(|&k| k != *g && self.mx.label(*g, k) != Label::Infinite)
                    .ok_or_else(|| {
                        Error::Unsupported("generator lies in no finite parabolic pair".into())
                    })?;
                (*g.min(&partner), *g.max(&partner))
            }
            [i, j] => (*i, *j),
            _ => return Err(Error::Unsupported("word mixes more than two generators".into())),
        };
        let pair = self
            .mx
            .pair(i, j)
            .ok_or_else(|| Error::Unsupported("pair has infinite label".into()))?;
        let d = &self.pair_forms[&(i, j)];
        let form = d.normal_form(w)?;
        Ok(d
            .factor_words(&form)
            .into_iter()
            .map(|(word, _, inverted)| GarsideFactor {
                pair,
                word,
                inverted,
            })
            .collect())
    }

    /// Shortlex key for a word in a finite pair computed from Garside forms
    /// alone; used to cross-check the main backend.
    pub fn dihedral_key(&self, pair: FinitePair, w: &[Letter]) -> Result<Word> {
        match self.backend.find_dihedral(pair.i, pair.j) {
            Some(d) => d.normalize(w),
            None => self.pair_forms[&(pair.i, pair.j)].normalize(w),
        }
    }

    /// Ball of radius `radius` in the Cayley graph, grouped by sphere and
    /// sorted shortlex within each sphere.
    pub fn spheres(&self, radius: usize) -> Result<Vec<Vec<Element>>> {
        let mut spheres = vec![vec![Element::identity()]];
        let mut seen: HashSet<Element> = HashSet::from([Element::identity()]);
        let letters: Vec<Letter> = (0..2 * self.mx.rank() as u8).collect();
        for _ in 0..radius {
            let mut next = Vec::new();
            for g in spheres.last().expect("nonempty") {
                for &l in &letters {
                    let h = self.mul_letter(g, l)?;
                    if h.len() == g.len() + 1 && seen.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            next.sort();
            spheres.push(next);
        }
        Ok(spheres)
    }

    /// Checks every defining relation at every vertex of the ball and
    /// reports sphere sizes.
    pub fn verify_oracle_on_ball(&self, radius: usize) -> Result<BallReport> {
        let spheres = self.spheres(radius)?;
        let relations = self.mx.relations();
        let mut failure = None;
        'outer: for g in spheres.iter().flatten() {
            for (k, r) in relations.iter().enumerate() {
                if self.mul_word(g, &r.lhs)? != self.mul_word(g, &r.rhs)? {
                    failure = Some((g.key().to_vec(), k));
                    break 'outer;
                }
            }
            for l in 0..2 * self.mx.rank() as u8 {
                let h = self.mul_letter(g, l)?;
                if h.len().abs_diff(g.len()) != 1
                    || self.mul_letter(&h, crate::coxeter::inverse_letter(l))? != *g
                {
                    failure = Some((g.key().to_vec(), usize::MAX));
                    break 'outer;
                }
            }
        }
        Ok(BallReport {
            sphere_sizes: spheres.iter().map(Vec::len).collect(),
            failure,
        })
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.backend_description())
    }
}
