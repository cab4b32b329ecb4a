//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails or the construction
//! breaks, 2 for usage and input errors.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biauto::{
    axiom_check, check_directed_geodesics, check_length_bounds, check_multiplier_pairs,
    check_prefix_property, check_six_large, check_trace_soundness, left_multipliers,
    reduce_word, Check, Multipliers, Structure,
};
use crate::complex::{build_fragment, ComplexFragment, VertexId, VertexKey};
use crate::coxeter::{parse_coxeter, CoxeterMatrix};
use crate::error::{Error, Result};
use crate::fsa::{Fsa, Sym};
use crate::geodesics::distances_from;
use crate::labels::{garside_elements, OrbitTable};
use crate::oracle::{Element, Oracle};

#[derive(Parser, Debug)]
#[command(name = "systolic-artin", version, about = "Biautomatic structures for Artin groups of almost large type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Fragment radius (default 7 when some label is 4, else 4).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..))]
    pub radius: Option<u32>,

    /// Longest accepted word used by exhaustive checks.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub maxlen: u32,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Directory for written artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report whether the diagram is of almost large type.
    Validate { input: PathBuf },
    /// Build the complex fragment and orbit table.
    Build { input: PathBuf },
    /// Synthesize the minimized word acceptor.
    Acceptor { input: PathBuf },
    /// Build right and left multipliers and their difference sets.
    Multipliers { input: PathBuf },
    /// Run every check and print one PASS or FAIL line each.
    Verify { input: PathBuf },
    /// Print the accepted word for a word over the generators, or for a
    /// space-separated word over the alphabet.
    Reduce { input: PathBuf, word: String },
    /// Orbit counts, alphabet sizes, acceptor size and sphere sizes.
    Stats { input: PathBuf },
    /// Print the complex or the orbit representatives.
    Dump {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DumpTarget::Complex)]
        what: DumpTarget,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DumpTarget {
    Complex,
    Orbits,
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::NonSymmetric { .. }
        | Error::LabelTooSmall { .. }
        | Error::UnknownGenerator(_)
        | Error::BadWord(_)
        | Error::Unsupported(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn read_matrix(path: &Path) -> Result<CoxeterMatrix> {
    parse_coxeter(&fs::read_to_string(path)?)
}

fn structure(cli: &Cli, mx: &CoxeterMatrix) -> Result<Structure> {
    Structure::build(mx, cli.radius.map(|r| r as usize))
}

fn write_artifact(cli: &Cli, name: &str, contents: &str) -> Result<()> {
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

/// File-safe name of a multiplier letter: `a`, `a_inv`, or `1`.
fn letter_file_name(mx: &CoxeterMatrix, l: u8) -> String {
    let g = mx.name(crate::coxeter::generator_of(l));
    if crate::coxeter::is_inverse(l) {
        format!("{g}_inv")
    } else {
        g.to_string()
    }
}

fn element_list(oracle: &Oracle, set: &BTreeSet<Element>) -> String {
    let mut s: String = set.iter().map(|g| oracle.format(g) + "\n").collect();
    if s.is_empty() {
        s.push('\n');
    }
    s
}

fn orbit_dump(table: &OrbitTable) -> String {
    let oracle = table.oracle();
    let mut out = String::new();
    for (k, orbit) in table.orbits().iter().enumerate() {
        let tokens: Vec<String> = orbit.rep.iter().map(|v| v.token(oracle)).collect();
        out.push_str(&format!("o {k} {} {}\n", orbit.dimension(), tokens.join(" ")));
    }
    out
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    match &cli.command {
        Command::Validate { input } => {
            let mx = read_matrix(input)?;
            writeln!(out, "generators: {}", mx.names().join(" "))?;
            writeln!(out, "{}", mx.validate_type())?;
            Ok(true)
        }
        Command::Build { input } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            let f = &s.fragment;
            writeln!(out, "radius: {}", f.radius())?;
            writeln!(out, "vertices: {}", f.vertex_count())?;
            let simplices: Vec<String> =
                (1..=f.max_dimension()).map(|d| f.simplices(d).len().to_string()).collect();
            writeln!(out, "simplices by dimension from 1: {}", simplices.join(" "))?;
            writeln!(out, "complete precells: {}", f.precells().iter().filter(|p| p.complete).count())?;
            writeln!(out, "overlap edges: {}", f.overlap_edge_count())?;
            writeln!(out, "orbits: {}", join(&s.table.counts_by_dimension()))?;
            write_artifact(cli, "complex.txt", &f.dump())?;
            write_artifact(cli, "orbits.txt", &orbit_dump(&s.table))?;
            Ok(true)
        }
        Command::Acceptor { input } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            writeln!(out, "alphabet: {}", s.alphabet_a.names().join(" "))?;
            writeln!(out, "states: {}", s.acceptor.state_count())?;
            write_artifact(cli, "acceptor.fsa", &s.acceptor.dfa.to_text())?;
            Ok(true)
        }
        Command::Multipliers { input } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            let oracle = s.oracle().clone();
            let w_right = s.alphabet_a.values();
            let right = Multipliers::right(&s.acceptor, &oracle, &w_right)?;
            writeln!(out, "W_R: {} elements", w_right.len())?;
            write_artifact(cli, "w_right.txt", &element_list(&oracle, &w_right))?;
            write_artifact(cli, "right_1.fsa", &right.identity.machine.fsa.to_text())?;
            writeln!(out, "right 1: {} states", right.identity.machine.fsa.state_count())?;
            for (l, m) in right.letters.iter().enumerate() {
                let name = letter_file_name(&mx, l as u8);
                writeln!(out, "right {}: {} states", mx.format_letter(l as u8), m.machine.fsa.state_count())?;
                write_artifact(cli, &format!("right_{name}.fsa"), &m.machine.fsa.to_text())?;
            }
            let mut ok = true;
            for (l, g) in left_multipliers(&s.acceptor, &oracle, &right)?.iter().enumerate() {
                let name = letter_file_name(&mx, l as u8);
                writeln!(
                    out,
                    "left {}: {} states, W_L {} elements, {} rounds{}",
                    mx.format_letter(l as u8),
                    g.multiplier.machine.fsa.state_count(),
                    g.differences.len(),
                    g.rounds,
                    if g.passed { "" } else { ", projections differ" }
                )?;
                ok &= g.passed;
                write_artifact(cli, &format!("left_{name}.fsa"), &g.multiplier.machine.fsa.to_text())?;
                write_artifact(cli, &format!("w_left_{name}.txt"), &element_list(&oracle, &g.differences))?;
            }
            Ok(ok)
        }
        Command::Verify { input } => {
            let mx = read_matrix(input)?;
            let checks = verify(cli, &mx)?;
            for c in &checks {
                writeln!(out, "{c}")?;
            }
            Ok(checks.iter().all(|c| c.passed))
        }
        Command::Reduce { input, word } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            let oracle = s.oracle().clone();
            let right = Multipliers::right(&s.acceptor, &oracle, &s.alphabet_a.values())?;
            let normal = if word.trim().contains(' ') {
                let g = s.acceptor.evaluate(&oracle, &s.acceptor.parse_word(word)?)?;
                right.reduce_element(&oracle, &g)?
            } else {
                reduce_word(&right, &oracle, &mx.parse_word(word.trim())?)?
            };
            writeln!(out, "{}", if normal.is_empty() { "ε".to_string() } else { s.acceptor.format_word(&normal) })?;
            Ok(true)
        }
        Command::Stats { input } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            let oracle = s.oracle();
            writeln!(out, "backend: {}", oracle.backend_description())?;
            writeln!(out, "radius: {}", s.fragment.radius())?;
            writeln!(out, "orbits: {}", join(&s.table.counts_by_dimension()))?;
            writeln!(out, "alphabet A: {}", s.alphabet_a.len())?;
            writeln!(out, "alphabet B: {}", s.alphabet_b.len())?;
            writeln!(out, "acceptor states: {}", s.acceptor.state_count())?;
            let spheres: Vec<usize> = oracle.spheres(cli.maxlen as usize)?.iter().map(Vec::len).collect();
            writeln!(out, "sphere sizes: {}", join(&spheres))?;
            Ok(true)
        }
        Command::Dump { input, what } => {
            let mx = read_matrix(input)?;
            let s = structure(cli, &mx)?;
            let (name, text) = match what {
                DumpTarget::Complex => ("complex.txt", s.fragment.dump()),
                DumpTarget::Orbits => ("orbits.txt", orbit_dump(&s.table)),
            };
            if cli.out.is_some() {
                write_artifact(cli, name, &text)?;
            } else {
                write!(out, "{text}")?;
            }
            Ok(true)
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

const WIDE_VERTEX_LIMIT: usize = 20_000;

/// Largest distance between sampled geodesic endpoints.
const PAIR_DISTANCE: u32 = 3;

/// A fragment at least three rings wider than the structure's, grown until
/// the identity is `margin` away from the frontier or the fragment has
/// `WIDE_VERTEX_LIMIT` vertices.
pub fn wide_fragment(s: &Structure, margin: u32) -> Result<ComplexFragment> {
    let oracle = s.oracle().clone();
    let mut radius = s.fragment.radius() + 3;
    loop {
        let f = build_fragment(oracle.clone(), radius)?;
        let centre = f.require(&VertexKey::Real(Element::identity()))?;
        if f.boundary_distance(centre) >= margin || f.vertex_count() >= WIDE_VERTEX_LIMIT {
            return Ok(f);
        }
        radius += 1;
    }
}

/// Every check, in a fixed order.
pub fn verify(cli: &Cli, mx: &CoxeterMatrix) -> Result<Vec<Check>> {
    let k = cli.maxlen as usize;
    let mut checks = Vec::new();
    let s = structure(cli, mx)?;
    let oracle = s.oracle().clone();

    let ball = oracle.verify_oracle_on_ball(k.min(4))?;
    checks.push(Check {
        name: "oracle relations".into(),
        passed: ball.passed(),
        detail: format!("sphere sizes {}", join(&ball.sphere_sizes)),
    });
    // Geometric checks run on a wider fragment so that more links are
    // complete and geodesics of length PAIR_DISTANCE are visible around the
    // identity.
    let wide = wide_fragment(&s, PAIR_DISTANCE + 3)?;
    checks.push(check_six_large(&wide));
    checks.push(Check {
        name: "alphabet".into(),
        passed: s.alphabet_a.values() == garside_elements(&oracle)?,
        detail: format!("|A| = {}, |B| = {}", s.alphabet_a.len(), s.alphabet_b.len()),
    });

    let right = Multipliers::right(&s.acceptor, &oracle, &s.alphabet_a.values())?;
    checks.extend(axiom_check(&s.acceptor, &oracle, &right, k)?);
    for g in left_multipliers(&s.acceptor, &oracle, &right)? {
        let name = format!("left multiplier {} projections", oracle.format(&g.multiplier.generator));
        checks.push(Check {
            name,
            passed: g.passed,
            detail: format!(
                "|W_L| = {}, {} rounds{}",
                g.differences.len(),
                g.rounds,
                g.last_witness.map(|w| format!(", witness `{w}`")).unwrap_or_default()
            ),
        });
        checks.push(check_multiplier_pairs(&s.acceptor, &oracle, &g.multiplier, k)?);
    }
    checks.push(check_length_bounds(&s.acceptor, &oracle, k)?);
    checks.push(check_prefix_property(&s.acceptor, &s.fragment, &s.table, k)?);

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let pairs = sample_vertex_pairs(&wide, PAIR_DISTANCE, 40, &mut rng);
    checks.push(check_directed_geodesics(&wide, &pairs)?);
    let words = sample_accepted_words(&s.acceptor.dfa, k, 100, &mut rng);
    checks.push(check_trace_soundness(&s.acceptor, &wide, &s.table, &words)?);
    Ok(checks)
}

/// Random pairs `(v, w)` with `d(v, w)` at most `max_dist`, lowered to
/// what the fragment supports, both far enough from the frontier for every
/// link along the search to be visible.
pub fn sample_vertex_pairs(
    f: &ComplexFragment,
    max_dist: u32,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<(VertexId, VertexId)> {
    let deepest = (0..f.vertex_count() as VertexId)
        .map(|v| f.boundary_distance(v))
        .max()
        .unwrap_or(0);
    let max_dist = max_dist.min(deepest.saturating_sub(2));
    let sources: Vec<VertexId> = (0..f.vertex_count() as VertexId)
        .filter(|&v| f.boundary_distance(v) >= max_dist + 2)
        .collect();
    let mut out = Vec::new();
    if max_dist == 0 || sources.is_empty() {
        return out;
    }
    for _ in 0..count {
        let v = *sources.choose(rng).expect("nonempty");
        let dist = distances_from(f, v, max_dist);
        let near: Vec<VertexId> = (0..f.vertex_count() as VertexId)
            .filter(|&w| dist[w as usize] <= max_dist && f.boundary_distance(w) >= 2)
            .collect();
        out.push((v, *near.choose(rng).expect("contains v")));
    }
    out
}

/// Random accepted words of length at most `max_len`, by random walks on
/// the trimmed acceptor.
pub fn sample_accepted_words(dfa: &Fsa, max_len: usize, count: usize, rng: &mut impl Rng) -> Vec<Vec<Sym>> {
    let mut out = Vec::new();
    for _ in 0..count {
        let target = rng.gen_range(0..=max_len);
        let mut q = dfa.initial()[0];
        let mut word = Vec::new();
        let mut last_accepted = Vec::new();
        while word.len() < target {
            let Some(&(s, r)) = dfa.transitions_from(q).choose(rng) else { break };
            word.push(s);
            q = r;
            if dfa.is_accepting(q) {
                last_accepted = word.clone();
            }
        }
        out.push(last_accepted);
    }
    out
}
