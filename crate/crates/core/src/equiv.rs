//! Language equivalence and probabilistic bisimilarity.
//!
//! Language equivalence is decided on the reactive view, treating the GPTS
//! as a weighted automaton: two states are equivalent iff every vector
//! `(δₓ − δᵧ)·A(w)` is orthogonal to the acceptance vector. Reachable
//! difference vectors are explored breadth first and only linearly
//! independent ones are expanded, so at most `n` vectors are ever kept.

use std::collections::VecDeque;
use std::fmt;

use crate::deriv::{derivative_automaton, StateNaming};
use crate::error::GptsError;
use crate::expr::{Expr, Letter};
use crate::gpts::{Gpts, Output, Rpts};
use crate::prob::{Prob, Weight};

#[derive(Debug, Clone, PartialEq)]
pub enum EquivVerdict<W = Prob> {
    Equal,
    /// `word` gets `left` from the first state and `right` from the second.
    Distinguished {
        word: Vec<Letter>,
        left: W,
        right: W,
    },
}

impl<W> EquivVerdict<W> {
    pub fn is_equal(&self) -> bool {
        matches!(self, EquivVerdict::Equal)
    }

    /// The distinguishing word as a string, if any.
    pub fn witness(&self) -> Option<String> {
        match self {
            EquivVerdict::Equal => None,
            EquivVerdict::Distinguished { word, .. } => Some(word.iter().map(|a| a.as_char()).collect()),
        }
    }
}

/// `EQUAL`, or `DIFFER at "w": l vs r`.
impl<W: fmt::Display> fmt::Display for EquivVerdict<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivVerdict::Equal => f.write_str("EQUAL"),
            EquivVerdict::Distinguished { left, right, .. } => {
                write!(
                    f,
                    "DIFFER at \"{}\": {left} vs {right}",
                    self.witness().unwrap_or_default()
                )
            }
        }
    }
}

/// Row-echelon basis over a field.
struct Basis<W> {
    rows: Vec<(usize, Vec<W>)>,
}

impl<W: Weight> Basis<W> {
    fn new() -> Self {
        Basis { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<W>) -> Vec<W> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_negligible() {
                continue;
            }
            let factor = v[*pivot].clone() / row[*pivot].clone();
            for (vi, ri) in v.iter_mut().zip(row) {
                if !ri.is_negligible() {
                    *vi = vi.clone() - factor.clone() * ri.clone();
                }
            }
        }
        v
    }

    /// Inserts `v` if it is independent of the current rows.
    fn insert(&mut self, v: Vec<W>) -> bool {
        let reduced = self.reduce(v);
        match reduced.iter().position(|x| !x.is_negligible()) {
            Some(pivot) => {
                self.rows.push((pivot, reduced));
                true
            }
            None => false,
        }
    }
}

/// Decides `⟦x⟧ = ⟦y⟧` for two states of one system. On failure the
/// returned word is a shortest distinguishing word, ties broken by
/// alphabet order.
pub fn lang_equiv<W: Weight>(g: &Gpts<W>, x: usize, y: usize) -> Result<EquivVerdict<W>, GptsError> {
    let n = g.num_states();
    for s in [x, y] {
        if s >= n {
            return Err(GptsError::UnknownState(format!("#{s}")));
        }
    }
    let rpts = g.to_rpts();
    Ok(match distinguishing_word(&rpts, x, y) {
        None => EquivVerdict::Equal,
        Some(word) => EquivVerdict::Distinguished {
            left: g.word_prob(x, &word)?,
            right: g.word_prob(y, &word)?,
            word,
        },
    })
}

/// `lang_equiv` addressed by state name.
pub fn lang_equiv_named<W: Weight>(g: &Gpts<W>, x: &str, y: &str) -> Result<EquivVerdict<W>, GptsError> {
    lang_equiv(g, g.state_id(x)?, g.state_id(y)?)
}

fn distinguishing_word<W: Weight>(rpts: &Rpts<W>, x: usize, y: usize) -> Option<Vec<Letter>> {
    let n = rpts.num_states();
    let mut start = vec![W::zero(); n];
    start[x] = start[x].clone() + W::one();
    start[y] = start[y].clone() - W::one();
    if !rpts.observe(&start).is_negligible() {
        return Some(Vec::new());
    }
    let mut basis = Basis::new();
    if !basis.insert(start.clone()) {
        return None;
    }
    let letters: Vec<Letter> = rpts.alphabet().iter().copied().collect();
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some((v, word)) = queue.pop_front() {
        for &a in &letters {
            let next = rpts.step_row(&v, a);
            let mut next_word = word.clone();
            next_word.push(a);
            if !rpts.observe(&next).is_negligible() {
                return Some(next_word);
            }
            if basis.insert(next.clone()) {
                queue.push_back((next, next_word));
            }
        }
    }
    None
}

/// Decides language equivalence of two expressions on the disjoint union
/// of their derivative automata.
pub fn expr_equiv(e: &Expr, f: &Expr) -> EquivVerdict {
    let mut alphabet = e.letters();
    alphabet.extend(f.letters());
    let left = derivative_automaton(e, StateNaming::Indexed, &alphabet).gpts;
    let right = derivative_automaton(f, StateNaming::Indexed, &alphabet).gpts;
    let (union, offset) = left.disjoint_union(&right);
    lang_equiv(&union, 0, offset).expect("roots exist")
}

/// A partition of the states, as a block index per state. Blocks are
/// numbered in order of their first member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
}

impl Partition {
    fn from_keys(block_of: Vec<usize>) -> Self {
        // renumber by first occurrence
        let mut map = std::collections::HashMap::new();
        let block_of = block_of
            .into_iter()
            .map(|b| {
                let next = map.len();
                *map.entry(b).or_insert(next)
            })
            .collect();
        Partition { block_of }
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    /// Members of each block, in state order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }
}

/// Per-state signature: termination mass and mass into each
/// `(letter, block)` pair, sorted by key.
type Signature<W> = (W, Vec<((Letter, usize), W)>);

fn signature<W: Weight>(g: &Gpts<W>, x: usize, partition: &Partition) -> Signature<W> {
    let mut masses: Vec<((Letter, usize), W)> = Vec::new();
    for (out, w) in g.transitions(x).iter() {
        if let Output::Step(a, y) = out {
            let key = (*a, partition.block_of(*y));
            match masses.iter_mut().find(|(k, _)| *k == key) {
                Some((_, m)) => *m = m.clone() + w.clone(),
                None => masses.push((key, w.clone())),
            }
        }
    }
    masses.retain(|(_, m)| !m.is_negligible());
    masses.sort_by_key(|(k, _)| *k);
    (g.accept(x), masses)
}

fn same_signature<W: Weight>(s: &Signature<W>, t: &Signature<W>) -> bool {
    s.0.approx_eq(&t.0)
        && s.1.len() == t.1.len()
        && s.1
            .iter()
            .zip(&t.1)
            .all(|((k1, m1), (k2, m2))| k1 == k2 && m1.approx_eq(m2))
}

/// Groups states by a key compared with `same`, refining `current`.
fn split<K>(current: &Partition, keys: &[K], same: impl Fn(&K, &K) -> bool) -> Partition {
    let mut reps: Vec<usize> = Vec::new();
    let mut block_of = Vec::with_capacity(keys.len());
    for x in 0..keys.len() {
        let found = reps
            .iter()
            .position(|&r| current.same_block(r, x) && same(&keys[r], &keys[x]));
        let b = match found {
            Some(b) => b,
            None => {
                reps.push(x);
                reps.len() - 1
            }
        };
        block_of.push(b);
    }
    Partition::from_keys(block_of)
}

/// Coarsest partition in which related states agree on termination mass and
/// on the total mass sent into every block under every letter.
pub fn bisim_classes<W: Weight>(g: &Gpts<W>) -> Partition {
    let n = g.num_states();
    let trivial = Partition::from_keys(vec![0; n]);
    let accepts: Vec<W> = (0..n).map(|x| g.accept(x)).collect();
    let mut partition = split(&trivial, &accepts, |a, b| a.approx_eq(b));
    loop {
        let sigs: Vec<Signature<W>> = (0..n).map(|x| signature(g, x, &partition)).collect();
        let refined = split(&partition, &sigs, same_signature);
        if refined.num_blocks() == partition.num_blocks() {
            return refined;
        }
        partition = refined;
    }
}
