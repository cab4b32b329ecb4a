//! Bounded length-non-increasing rewriting for diagrams that do not split
//! into free and direct products.
//!
//! Moves act on maximal subwords in the letters of one finite pair: such a
//! subword is replaced by any geodesic of the same dihedral element (found
//! through Garside normal forms). A word is reduced by exploring all
//! equal-length rewrites breadth-first, restarting whenever a strictly
//! shorter word appears; the key is the shortlex-least word of the final
//! equal-length class.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::RwLock;

use super::dihedral::Dihedral;
use crate::coxeter::{free_reduce, generator_of, shortlex_cmp, FinitePair, Letter, Word};
use crate::error::{Error, Result};

pub(crate) struct Rewriting {
    generators: Vec<usize>,
    pieces: Vec<Dihedral>,
    class_limit: usize,
    cache: RwLock<HashMap<Word, Word>>,
}

const GEODESIC_LIMIT: usize = 5000;

impl Rewriting {
    pub fn new(
        generators: Vec<usize>,
        pairs: &[FinitePair],
        class_limit: usize,
    ) -> Self {
        let pieces = pairs
            .iter()
            .filter(|p| generators.contains(&p.i) && generators.contains(&p.j))
            .map(|p| Dihedral::new(p.i, p.j, p.m))
            .collect();
        Rewriting {
            generators,
            pieces,
            class_limit,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Either a strictly shorter word equal to `x`, or all words obtained
    /// from `x` by one equal-length move.
    fn moves(&self, x: &[Letter]) -> Result<std::result::Result<Vec<Word>, Word>> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            let [i, j] = piece.generators();
            let inside = |l: Letter| generator_of(l) == i || generator_of(l) == j;
            let mut start = 0;
            while start < x.len() {
                if !inside(x[start]) {
                    start += 1;
                    continue;
                }
                let mut end = start;
                while end < x.len() && inside(x[end]) {
                    end += 1;
                }
                let segment = &x[start..end];
                if segment.len() >= 2 {
                    let key = piece.normalize(segment)?;
                    let splice = |mid: &[Letter]| {
                        let mut y = x[..start].to_vec();
                        y.extend_from_slice(mid);
                        y.extend_from_slice(&x[end..]);
                        free_reduce(&y)
                    };
                    if key.len() < segment.len() {
                        return Ok(Err(splice(&key)));
                    }
                    for g in piece.geodesics(segment, GEODESIC_LIMIT)? {
                        if g.as_slice() != segment {
                            out.push(splice(&g));
                        }
                    }
                }
                start = end;
            }
        }
        Ok(Ok(out))
    }

    pub fn normalize(&self, w: &[Letter]) -> Result<Word> {
        for &l in w {
            if !self.generators.contains(&generator_of(l)) {
                return Err(Error::Unsupported(format!(
                    "generator {} not handled by this rewriting system",
                    generator_of(l)
                )));
            }
        }
        let start = free_reduce(w);
        if let Some(k) = self.cache.read().expect("cache lock").get(&start) {
            return Ok(k.clone());
        }
        let mut current = start.clone();
        let key = 'restart: loop {
            let mut seen: HashSet<Word> = HashSet::new();
            seen.insert(current.clone());
            let mut queue = VecDeque::from([current.clone()]);
            while let Some(x) = queue.pop_front() {
                match self.moves(&x)? {
                    Err(shorter) => {
                        current = shorter;
                        continue 'restart;
                    }
                    Ok(next) => {
                        for y in next {
                            if y.len() < x.len() {
                                current = y;
                                continue 'restart;
                            }
                            if seen.insert(y.clone()) {
                                if seen.len() > self.class_limit {
                                    return Err(Error::OracleLimit(format!(
                                        "rewriting class exceeded {} words",
                                        self.class_limit
                                    )));
                                }
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
            break seen.into_iter().min_by(|u, v| shortlex_cmp(u, v)).expect("nonempty");
        };
        let mut cache = self.cache.write().expect("cache lock");
        if cache.len() > 1 << 20 {
            cache.clear();
        }
        cache.insert(start, key.clone());
        Ok(key)
    }
}
