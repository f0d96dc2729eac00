use std::collections::BTreeMap;

use crate::dist::SubDist;
use crate::expr::{Alphabet, Letter};
use crate::prob::Weight;

use super::{Gpts, Output};

/// Reactive view of a GPTS: per state, an acceptance weight and one
/// successor subdistribution per letter.
///
/// This is the linear representation used for language equivalence: a word
/// `a₁…aₙ` read from state `x` has weight `δₓ · A(a₁) ⋯ A(aₙ) · accept`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rpts<W> {
    alphabet: Alphabet,
    accept: Vec<W>,
    next: Vec<BTreeMap<Letter, SubDist<usize, W>>>,
}

impl<W: Weight> Rpts<W> {
    pub fn from_gpts(g: &Gpts<W>) -> Self {
        let n = g.num_states();
        let mut accept = Vec::with_capacity(n);
        let mut next = Vec::with_capacity(n);
        for x in 0..n {
            accept.push(g.accept(x));
            let mut per_letter: BTreeMap<Letter, SubDist<usize, W>> = BTreeMap::new();
            for (out, w) in g.transitions(x).iter() {
                if let Output::Step(a, y) = out {
                    per_letter.entry(*a).or_default().add(*y, w.clone());
                }
            }
            next.push(per_letter);
        }
        Rpts {
            alphabet: g.alphabet().clone(),
            accept,
            next,
        }
    }

    pub fn num_states(&self) -> usize {
        self.accept.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn accept(&self, x: usize) -> &W {
        &self.accept[x]
    }

    pub fn accept_vector(&self) -> &[W] {
        &self.accept
    }

    /// Successor subdistribution of `x` under `a`; empty if none.
    pub fn next(&self, x: usize, a: Letter) -> SubDist<usize, W> {
        self.next[x].get(&a).cloned().unwrap_or_default()
    }

    /// Row vector times the letter matrix: `(v · A(a))[y] = Σₓ v[x]·A(a)[x][y]`.
    pub fn step_row(&self, row: &[W], a: Letter) -> Vec<W> {
        let mut out = vec![W::zero(); self.num_states()];
        for (x, vx) in row.iter().enumerate() {
            if vx.is_negligible() {
                continue;
            }
            if let Some(dist) = self.next[x].get(&a) {
                for (y, w) in dist.iter() {
                    out[*y] = out[*y].clone() + vx.clone() * w.clone();
                }
            }
        }
        out
    }

    /// `v · accept`.
    pub fn observe(&self, row: &[W]) -> W {
        row.iter()
            .zip(&self.accept)
            .fold(W::zero(), |acc, (v, o)| acc + v.clone() * o.clone())
    }

    /// Word weight computed left to right through the letter matrices.
    pub fn word_weight(&self, x: usize, word: &[Letter]) -> W {
        let mut row = vec![W::zero(); self.num_states()];
        row[x] = W::one();
        for &a in word {
            row = self.step_row(&row, a);
        }
        self.observe(&row)
    }

    /// Reassembles the generative transition subdistribution of `x`.
    pub fn generative(&self, x: usize) -> SubDist<Output<usize>, W> {
        let mut out = SubDist::empty();
        out.add(Output::Term, self.accept[x].clone());
        for (a, dist) in &self.next[x] {
            for (y, w) in dist.iter() {
                out.add(Output::Step(*a, *y), w.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::prob::{ratio, Prob};

    #[test]
    fn reshuffles_a_branching_state() {
        let g = build(
            "a",
            &["q0", "q1", "q2"],
            &[
                ("q0", None, (1, 4), ""),
                ("q0", Some('a'), (1, 4), "q1"),
                ("q0", Some('a'), (1, 2), "q2"),
            ],
        );
        let r = g.to_rpts();
        assert_eq!(*r.accept(0), ratio(1, 4));
        let next = r.next(0, letter('a'));
        assert_eq!(next.get(&1), ratio(1, 4));
        assert_eq!(next.get(&2), ratio(1, 2));
        assert_eq!(next.len(), 2);
    }

    #[test]
    fn deadlock_state_has_nothing() {
        let g = build("ab", &["d"], &[]);
        let r = g.to_rpts();
        assert_eq!(*r.accept(0), ratio(0, 1));
        assert!(r.next(0, letter('a')).is_empty());
        assert!(r.next(0, letter('b')).is_empty());
    }

    #[test]
    fn generative_view_is_recovered() {
        let g = systems_example();
        let r = g.to_rpts();
        for x in 0..g.num_states() {
            let rebuilt = r.generative(x);
            assert_eq!(rebuilt.len(), g.transitions(x).len());
            for (out, w) in g.transitions(x).iter() {
                assert_eq!(rebuilt.get(out), *w);
            }
        }
    }

    #[test]
    fn matrix_route_matches_word_prob() {
        let g = bisimilarity_example();
        let r: Rpts<Prob> = g.to_rpts();
        for text in ["", "a", "ab", "ba", "abb"] {
            let w = g.word(text).unwrap();
            for x in 0..g.num_states() {
                assert_eq!(r.word_weight(x, &w), g.word_prob(x, &w).unwrap());
            }
        }
    }
}
