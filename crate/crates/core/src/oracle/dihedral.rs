//! Two-generator Artin groups with a finite label: Garside normal forms,
//! geodesic length read off the normal form, and shortlex-least geodesics.

use crate::coxeter::{generator_of, is_inverse, Letter, Word};
use crate::error::{Error, Result};

/// A proper simple element: the alternating word of length `len` starting
/// with generator `first` (0 or 1), `1 <= len < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Simple {
    pub first: u8,
    pub len: u8,
}

impl Simple {
    fn last(self) -> u8 {
        if self.len % 2 == 1 {
            self.first
        } else {
            1 - self.first
        }
    }
}

/// Left-greedy normal form `Δ^delta s_1 ⋯ s_r`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct GarsideForm {
    pub delta: i32,
    pub factors: Vec<Simple>,
}

impl GarsideForm {
    fn conjugate_by_delta(&mut self, m: u32) {
        if m % 2 == 1 {
            for s in &mut self.factors {
                s.first = 1 - s.first;
            }
        }
    }

    fn mul_positive(&mut self, x: u8, m: u32) {
        match self.factors.last_mut() {
            Some(s) if s.last() != x => {
                s.len += 1;
                if s.len as u32 == m {
                    self.factors.pop();
                    self.delta += 1;
                    // s_1 ⋯ s_{r-1} Δ = Δ φ(s_1) ⋯ φ(s_{r-1})
                    self.conjugate_by_delta(m);
                }
            }
            _ => {
                if m == 1 {
                    self.delta += 1;
                } else {
                    self.factors.push(Simple { first: x, len: 1 });
                }
            }
        }
    }

    fn mul_negative(&mut self, x: u8, m: u32) {
        // g x⁻¹ = g Δ⁻¹ (Δ x⁻¹), and Δ x⁻¹ is the alternating word of
        // length m - 1 whose final letter differs from x.
        self.delta -= 1;
        self.conjugate_by_delta(m);
        let len = m - 1;
        let first = if len % 2 == 1 { 1 - x } else { x };
        for k in 0..len {
            let y = if k % 2 == 0 { first } else { 1 - first };
            self.mul_positive(y, m);
        }
    }
}

/// Letters local to the pair: 0 = a, 1 = a⁻¹, 2 = b, 3 = b⁻¹.
fn local_generator(l: u8) -> u8 {
    l >> 1
}

fn free_reduce_local(w: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub(crate) struct Dihedral {
    generators: [usize; 2],
    m: u32,
}

impl Dihedral {
    pub fn new(i: usize, j: usize, m: u32) -> Self {
        Dihedral { generators: [i, j], m }
    }

    pub fn label(&self) -> u32 {
        self.m
    }

    pub fn generators(&self) -> [usize; 2] {
        self.generators
    }

    fn to_local(&self, l: Letter) -> Result<u8> {
        let g = generator_of(l);
        let side = if g == self.generators[0] {
            0
        } else if g == self.generators[1] {
            1
        } else {
            return Err(Error::Unsupported(format!(
                "letter outside the parabolic pair ({g})"
            )));
        };
        Ok(side << 1 | is_inverse(l) as u8)
    }

    fn to_global(&self, l: u8) -> Letter {
        (self.generators[local_generator(l) as usize] as u8) << 1 | (l & 1)
    }

    fn act(&self, form: &mut GarsideForm, l: u8) {
        if l & 1 == 0 {
            form.mul_positive(local_generator(l), self.m);
        } else {
            form.mul_negative(local_generator(l), self.m);
        }
    }

    pub fn normal_form(&self, w: &[Letter]) -> Result<GarsideForm> {
        let local = w.iter().map(|&l| self.to_local(l)).collect::<Result<Vec<u8>>>()?;
        Ok(self.local_form(&local))
    }

    fn local_form(&self, w: &[u8]) -> GarsideForm {
        let mut form = GarsideForm::default();
        for &l in w {
            self.act(&mut form, l);
        }
        form
    }

    /// Geodesic length over the standard generators: each Δ⁻¹ absorbs the
    /// longest remaining factor `s` into the negative simple of length
    /// `m - |s|`; Δ⁻¹s left over count `m` each.
    pub fn length(&self, form: &GarsideForm) -> usize {
        let m = self.m as usize;
        let mut lens: Vec<usize> = form.factors.iter().map(|s| s.len as usize).collect();
        if form.delta >= 0 {
            return form.delta as usize * m + lens.iter().sum::<usize>();
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        let n = form.delta.unsigned_abs() as usize;
        let absorbed = n.min(lens.len());
        (n - absorbed) * m
            + lens[..absorbed].iter().map(|&l| m - l).sum::<usize>()
            + lens[absorbed..].iter().sum::<usize>()
    }

    /// Alternating global word for a simple element.
    pub fn simple_word(&self, first: u8, len: u32) -> Word {
        (0..len)
            .map(|k| {
                let side = if k % 2 == 0 { first } else { 1 - first };
                (self.generators[side as usize] as u8) << 1
            })
            .collect()
    }

    /// Shortlex-least geodesic for the element represented by `w`, built
    /// letter by letter: the next letter is the least one that lowers the
    /// length of what remains.
    pub fn normalize(&self, w: &[Letter]) -> Result<Word> {
        let local = w.iter().map(|&l| self.to_local(l)).collect::<Result<Vec<u8>>>()?;
        let mut remaining = self.length(&self.local_form(&local));
        // `rest` spells (prefix)⁻¹ · w.
        let mut rest = local;
        let mut out = Vec::with_capacity(remaining);
        while remaining > 0 {
            let next = (0..4u8)
                .find(|&l| {
                    let mut candidate = vec![l ^ 1];
                    candidate.extend_from_slice(&rest);
                    self.length(&self.local_form(&candidate)) + 1 == remaining
                })
                .ok_or_else(|| {
                    Error::OracleInconsistent("no letter shortens a dihedral element".into())
                })?;
            rest.insert(0, next ^ 1);
            rest = free_reduce_local(&rest);
            out.push(self.to_global(next));
            remaining -= 1;
        }
        Ok(out)
    }

    /// All geodesic words for the element represented by `w`, in shortlex
    /// order, stopping after `limit` words.
    pub fn geodesics(&self, w: &[Letter], limit: usize) -> Result<Vec<Word>> {
        let target = self.normalize(w)?;
        let mut out = Vec::new();
        let mut prefix: Word = Vec::new();
        self.extend_geodesics(&target, &mut prefix, &mut out, limit)?;
        Ok(out)
    }

    fn extend_geodesics(
        &self,
        target: &[Letter],
        prefix: &mut Word,
        out: &mut Vec<Word>,
        limit: usize,
    ) -> Result<()> {
        if out.len() >= limit {
            return Ok(());
        }
        if prefix.len() == target.len() {
            out.push(prefix.clone());
            return Ok(());
        }
        let remaining = target.len() - prefix.len() - 1;
        for side in 0..2 {
            for inv in 0..2u8 {
                let l = (self.generators[side] as u8) << 1 | inv;
                prefix.push(l);
                let mut rest = crate::coxeter::inverse_word(prefix);
                rest.extend_from_slice(target);
                if self.length(&self.normal_form(&rest)?) == remaining {
                    self.extend_geodesics(target, prefix, out, limit)?;
                }
                prefix.pop();
            }
        }
        Ok(())
    }

    /// The words of the normal form: `|delta|` copies of Δ^{±1} followed by
    /// the simple factors, as (global word, is Δ, inverted).
    pub fn factor_words(&self, form: &GarsideForm) -> Vec<(Word, bool, bool)> {
        let mut out = Vec::new();
        let delta = self.simple_word(0, self.m);
        for _ in 0..form.delta.unsigned_abs() {
            out.push((delta.clone(), true, form.delta < 0));
        }
        for s in &form.factors {
            out.push((self.simple_word(s.first, s.len as u32), false, false));
        }
        out
    }
}
