//! Coxeter matrices, the Artin presentations they define, and word I/O.
//!
//! Letters are encoded as `u8`: generator `i` is `2i` and its inverse is
//! `2i + 1`. Comparing codes therefore orders `a < A < b < B < ...`, which is
//! the shortlex letter order used for canonical keys.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

pub type Letter = u8;
pub type Word = Vec<Letter>;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    (generator as u8) << 1 | inverse as u8
}

pub fn generator_of(l: Letter) -> usize {
    (l >> 1) as usize
}

pub fn is_inverse(l: Letter) -> bool {
    l & 1 == 1
}

pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| inverse_letter(l)).collect()
}

/// Cancels adjacent `x x⁻¹` pairs.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Shortlex comparison of two words over the letter codes.
pub fn shortlex_cmp(u: &[Letter], v: &[Letter]) -> std::cmp::Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// Off-diagonal entry of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    labels: Vec<Vec<Label>>,
}

/// A parabolic pair `{i, j}` with `i < j` and finite label `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinitePair {
    pub i: usize,
    pub j: usize,
    pub m: u32,
}

impl FinitePair {
    pub fn contains(&self, generator: usize) -> bool {
        self.i == generator || self.j == generator
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeReport {
    pub almost_large: bool,
    pub supported: bool,
    /// Largest finite off-diagonal label, `None` when every label is infinite.
    pub max_label: Option<u32>,
}

impl fmt::Display for TypeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "almost_large: {}", self.almost_large)?;
        writeln!(f, "supported: {}", self.supported)?;
        match self.max_label {
            Some(m) => write!(f, "M: {m}"),
            None => write!(f, "M: none"),
        }
    }
}

/// One defining relation `lhs = rhs` of the Artin presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub pair: FinitePair,
    pub lhs: Word,
    pub rhs: Word,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl CoxeterMatrix {
    /// Builds a matrix from generator names and explicit finite entries;
    /// missing pairs are infinite.
    pub fn new(names: Vec<String>, entries: &[(usize, usize, u32)]) -> Result<Self> {
        let n = names.len();
        let mut labels = vec![vec![Label::Infinite; n]; n];
        for (i, row) in labels.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(i, j, m) in entries {
            if i >= n || j >= n || i == j {
                return Err(Error::Syntax {
                    line: 0,
                    msg: format!("bad entry index ({i},{j})"),
                });
            }
            if m < 2 {
                return Err(Error::LabelTooSmall {
                    line: 0,
                    a: names[i].clone(),
                    b: names[j].clone(),
                    value: m as u64,
                });
            }
            labels[i][j] = Label::Finite(m);
            labels[j][i] = Label::Finite(m);
        }
        Ok(CoxeterMatrix { names, labels })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, generator: usize) -> &str {
        &self.names[generator]
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[i][j]
    }

    /// All pairs `i < j` with finite label, in lexicographic order.
    pub fn finite_pairs(&self) -> Vec<FinitePair> {
        let mut out = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if let Label::Finite(m) = self.labels[i][j] {
                    out.push(FinitePair { i, j, m });
                }
            }
        }
        out
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<FinitePair> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.labels[i][j].finite().map(|m| FinitePair { i, j, m })
    }

    pub fn relations(&self) -> Vec<Relation> {
        self.finite_pairs()
            .into_iter()
            .map(|p| Relation {
                pair: p,
                lhs: alternating_word(letter(p.i, false), letter(p.j, false), p.m as usize)
                    .expect("m >= 2"),
                rhs: alternating_word(letter(p.j, false), letter(p.i, false), p.m as usize)
                    .expect("m >= 2"),
            })
            .collect()
    }

    /// Returns the matrix with generators relabelled by `perm` (new index
    /// `k` is old generator `perm[k]`).
    pub fn permuted(&self, perm: &[usize]) -> CoxeterMatrix {
        let names = perm.iter().map(|&k| self.names[k].clone()).collect();
        let labels = perm
            .iter()
            .map(|&a| perm.iter().map(|&b| self.labels[a][b]).collect())
            .collect();
        CoxeterMatrix { names, labels }
    }

    pub fn validate_type(&self) -> TypeReport {
        let n = self.rank();
        let lab = |i: usize, j: usize| self.labels[i][j];
        let mut almost_large = true;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let tri = [lab(i, j), lab(j, k), lab(i, k)];
                    let has_inf = tri.contains(&Label::Infinite);
                    let has_two = tri.contains(&Label::Finite(2));
                    if !has_inf && has_two {
                        almost_large = false;
                    }
                }
            }
        }
        // Every 4-cycle on distinct vertices; each appears with all its
        // rotations and reflections, which is harmless.
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let d = [i, j, k, l];
                        if (0..4).any(|x| (x + 1..4).any(|y| d[x] == d[y])) {
                            continue;
                        }
                        let sq = [lab(i, j), lab(j, k), lab(k, l), lab(l, i)];
                        let has_inf = sq.contains(&Label::Infinite);
                        let twos = sq.iter().filter(|&&x| x == Label::Finite(2)).count();
                        if !has_inf && twos > 1 {
                            almost_large = false;
                        }
                    }
                }
            }
        }
        let finite: Vec<u32> = self.finite_pairs().iter().map(|p| p.m).collect();
        let max_label = finite.iter().copied().max();
        TypeReport {
            almost_large,
            supported: almost_large && finite.iter().all(|&m| m <= 4),
            max_label,
        }
    }

    /// Errors unless the matrix is of almost large type with labels in
    /// `{2, 3, 4, ∞}`.
    pub fn require_supported(&self) -> Result<TypeReport> {
        let report = self.validate_type();
        if !report.almost_large {
            return Err(Error::Unsupported("diagram is not of almost large type".into()));
        }
        if !report.supported {
            return Err(Error::Unsupported(
                "finite labels must lie in {2, 3, 4}".into(),
            ));
        }
        Ok(report)
    }

    fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses a word such as `abA`; `1` is the empty word. Multi-character
    /// generator names are matched greedily, longest first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Vec::new());
        }
        let mut order: Vec<usize> = (0..self.rank()).collect();
        order.sort_by_key(|&g| std::cmp::Reverse(self.names[g].len()));
        let mut out = Vec::new();
        let mut rest = text;
        'outer: while !rest.is_empty() {
            for &g in &order {
                let name = &self.names[g];
                if rest.len() < name.len() || !rest.is_char_boundary(name.len()) {
                    continue;
                }
                let head = &rest[..name.len()];
                if head == name {
                    out.push(letter(g, false));
                } else if head == name.to_ascii_uppercase() {
                    out.push(letter(g, true));
                } else {
                    continue;
                }
                rest = &rest[name.len()..];
                continue 'outer;
            }
            return Err(Error::BadWord(text.to_string()));
        }
        Ok(out)
    }

    pub fn format_letter(&self, l: Letter) -> String {
        let name = &self.names[generator_of(l)];
        if is_inverse(l) {
            name.to_ascii_uppercase()
        } else {
            name.clone()
        }
    }

    /// Renders a word; the empty word is `1`.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&l| self.format_letter(l)).collect()
    }
}

/// Alternating word of length `m` starting with `a`.
pub fn alternating_word(a: Letter, b: Letter, m: usize) -> Result<Word> {
    if m == 0 {
        return Err(Error::Unsupported("alternating word of length 0".into()));
    }
    Ok((0..m).map(|k| if k % 2 == 0 { a } else { b }).collect())
}

fn parse_label(tok: &str, line: usize) -> Result<Label> {
    match tok {
        "inf" | "infinity" | "∞" => Ok(Label::Infinite),
        _ => tok
            .parse::<u64>()
            .map(|v| Label::Finite(v.min(u32::MAX as u64) as u32))
            .map_err(|_| Error::Syntax {
                line,
                msg: format!("expected an integer label, found `{tok}`"),
            }),
    }
}

/// Parses the text input format:
///
/// ```text
/// gens: a b c
/// m a b = 3     # unlisted pairs are infinite
/// ```
pub fn parse_coxeter(text: &str) -> Result<CoxeterMatrix> {
    let mut names: Option<Vec<String>> = None;
    let mut entries: BTreeMap<(usize, usize), (Label, usize, bool)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("gens:") {
            if names.is_some() {
                return Err(Error::Syntax {
                    line,
                    msg: "duplicate `gens:` line".into(),
                });
            }
            let list: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if list.is_empty() {
                return Err(Error::Syntax {
                    line,
                    msg: "no generators listed".into(),
                });
            }
            for (k, name) in list.iter().enumerate() {
                if !valid_name(name) {
                    return Err(Error::Syntax {
                        line,
                        msg: format!("`{name}` is not a lowercase identifier"),
                    });
                }
                if list[..k].contains(name) {
                    return Err(Error::Syntax {
                        line,
                        msg: format!("generator `{name}` listed twice"),
                    });
                }
            }
            if list.len() > 100 {
                return Err(Error::Syntax {
                    line,
                    msg: "too many generators".into(),
                });
            }
            names = Some(list);
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.first() != Some(&"m") {
            return Err(Error::Syntax {
                line,
                msg: format!("unrecognised line `{content}`"),
            });
        }
        let Some(list) = &names else {
            return Err(Error::Syntax {
                line,
                msg: "`m` entry before `gens:` line".into(),
            });
        };
        let (a, b, value) = match toks.as_slice() {
            [_, a, b, "=", v] => (*a, *b, *v),
            [_, a, b, v] => (*a, *b, v.trim_start_matches('=')),
            _ => {
                return Err(Error::Syntax {
                    line,
                    msg: "expected `m <name> <name> = <int>`".into(),
                })
            }
        };
        let find = |s: &str| {
            list.iter().position(|n| n == s).ok_or_else(|| Error::Syntax {
                line,
                msg: format!("unknown generator `{s}`"),
            })
        };
        let (i, j) = (find(a)?, find(b)?);
        if i == j {
            return Err(Error::Syntax {
                line,
                msg: "diagonal entries are fixed at 1".into(),
            });
        }
        let label = parse_label(value, line)?;
        if let Label::Finite(v) = label {
            if v < 2 {
                return Err(Error::LabelTooSmall {
                    line,
                    a: a.to_string(),
                    b: b.to_string(),
                    value: v as u64,
                });
            }
        }
        let key = (i.min(j), i.max(j));
        if let Some(&(prev, _, prev_forward)) = entries.get(&key) {
            if prev != label {
                let (x, y) = if prev_forward { (a, b) } else { (b, a) };
                return Err(Error::NonSymmetric {
                    a: x.to_string(),
                    b: y.to_string(),
                    first: prev.to_string(),
                    second: label.to_string(),
                });
            }
        }
        entries.insert(key, (label, line, i < j));
    }
    let names = names.ok_or(Error::Syntax {
        line: 0,
        msg: "missing `gens:` line".into(),
    })?;
    let finite: Vec<(usize, usize, u32)> = entries
        .iter()
        .filter_map(|(&(i, j), &(l, _, _))| l.finite().map(|m| (i, j, m)))
        .collect();
    CoxeterMatrix::new(names, &finite)
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.names.join(" "))?;
        for p in self.finite_pairs() {
            writeln!(f, "m {} {} = {}", self.names[p.i], self.names[p.j], p.m)?;
        }
        Ok(())
    }
}

impl CoxeterMatrix {
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}
