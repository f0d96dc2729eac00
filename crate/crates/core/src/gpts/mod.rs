//! Generative probabilistic transition systems.
//!
//! Each state carries one subdistribution over outputs: successful
//! termination ([`Output::Term`]) or an `a`-labelled step to a successor
//! ([`Output::Step`]). Missing mass is deadlock.

mod dot;
mod io;
mod rpts;

use std::collections::HashMap;
use std::fmt;

use crate::dist::SubDist;
use crate::error::GptsError;
use crate::expr::{Alphabet, Letter};
use crate::prob::{Prob, Weight};

pub use dot::to_dot;
pub use io::{from_json_str, load, save, to_json_string};
pub use rpts::Rpts;

/// One outcome of a transition: terminate, or emit a letter and move on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Output<S> {
    Term,
    Step(Letter, S),
}

impl<S> Output<S> {
    pub fn target(&self) -> Option<&S> {
        match self {
            Output::Term => None,
            Output::Step(_, s) => Some(s),
        }
    }

    pub fn map<U, F: FnOnce(&S) -> U>(&self, f: F) -> Output<U> {
        match self {
            Output::Term => Output::Term,
            Output::Step(a, s) => Output::Step(*a, f(s)),
        }
    }
}

/// A problem reported by [`Gpts::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingTarget { state: String, target: usize },
    LetterOutsideAlphabet { state: String, letter: Letter },
    MassExceedsOne { state: String, mass: String },
    NegativeWeight { state: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingTarget { state, target } => {
                write!(f, "state {state} has a transition to undeclared state #{target}")
            }
            Violation::LetterOutsideAlphabet { state, letter } => {
                write!(f, "state {state} uses letter {letter} outside the alphabet")
            }
            Violation::MassExceedsOne { state, mass } => {
                write!(f, "mass {mass} > 1 at state {state}")
            }
            Violation::NegativeWeight { state } => write!(f, "negative weight at state {state}"),
        }
    }
}

/// A finite GPTS with named states, indexed densely in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Gpts<W = Prob> {
    states: Vec<String>,
    index: HashMap<String, usize>,
    alphabet: Alphabet,
    trans: Vec<SubDist<Output<usize>, W>>,
    start: Vec<usize>,
}

impl<W: Weight> Gpts<W> {
    pub fn new(alphabet: Alphabet) -> Self {
        Gpts {
            states: Vec::new(),
            index: HashMap::new(),
            alphabet,
            trans: Vec::new(),
            start: Vec::new(),
        }
    }

    /// Declares a state with no transitions.
    pub fn add_state(&mut self, name: impl Into<String>) -> Result<usize, GptsError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(GptsError::DuplicateState(name));
        }
        let id = self.states.len();
        self.index.insert(name.clone(), id);
        self.states.push(name);
        self.trans.push(SubDist::empty());
        Ok(id)
    }

    /// Adds `w` to the weight of `out` at `from`. Targets are not checked
    /// here; see [`Gpts::validate`].
    pub fn add_transition(&mut self, from: usize, out: Output<usize>, w: W) {
        self.trans[from].add(out, w);
    }

    pub fn set_transitions(&mut self, from: usize, dist: SubDist<Output<usize>, W>) {
        self.trans[from] = dist;
    }

    pub fn mark_start(&mut self, id: usize) {
        if !self.start.contains(&id) {
            self.start.push(id);
        }
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: usize) -> &str {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Result<usize, GptsError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GptsError::UnknownState(name.to_string()))
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Extends the alphabet; letters already present are kept.
    pub fn extend_alphabet<I: IntoIterator<Item = Letter>>(&mut self, letters: I) {
        self.alphabet.extend(letters);
    }

    pub fn start(&self) -> &[usize] {
        &self.start
    }

    pub fn transitions(&self, id: usize) -> &SubDist<Output<usize>, W> {
        &self.trans[id]
    }

    /// Probability of terminating immediately at `id`.
    pub fn accept(&self, id: usize) -> W {
        self.trans[id].get(&Output::Term)
    }

    /// Checks that every target is declared, every letter is in the
    /// alphabet, weights are nonnegative and per-state mass is at most 1.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        let n = self.states.len();
        for (id, dist) in self.trans.iter().enumerate() {
            let state = self.states[id].clone();
            for (out, w) in dist.iter() {
                if *w < W::zero() {
                    violations.push(Violation::NegativeWeight { state: state.clone() });
                }
                if let Output::Step(a, target) = out {
                    if *target >= n {
                        violations.push(Violation::DanglingTarget {
                            state: state.clone(),
                            target: *target,
                        });
                    }
                    if !self.alphabet.contains(a) {
                        violations.push(Violation::LetterOutsideAlphabet {
                            state: state.clone(),
                            letter: *a,
                        });
                    }
                }
            }
            let mass = dist.mass();
            if mass > W::one() && !(mass.clone() - W::one()).is_negligible() {
                violations.push(Violation::MassExceedsOne {
                    state,
                    mass: mass.to_string(),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Converts a word given as text into letters of this alphabet.
    pub fn word(&self, text: &str) -> Result<Vec<Letter>, GptsError> {
        text.chars()
            .map(|c| match Letter::new(c) {
                Some(a) if self.alphabet.contains(&a) => Ok(a),
                _ => Err(GptsError::UnknownLetter(c)),
            })
            .collect()
    }

    /// `⟦q⟧(w)`: the probability that state `q` generates exactly `w`.
    ///
    /// Evaluated right to left: start from the termination vector and apply
    /// one letter's transition weights per step.
    pub fn word_prob(&self, q: usize, word: &[Letter]) -> Result<W, GptsError> {
        if q >= self.num_states() {
            return Err(GptsError::UnknownState(format!("#{q}")));
        }
        if let Some(a) = word.iter().find(|a| !self.alphabet.contains(a)) {
            return Err(GptsError::UnknownLetter(a.as_char()));
        }
        let mut values: Vec<W> = (0..self.num_states()).map(|x| self.accept(x)).collect();
        for &a in word.iter().rev() {
            values = self
                .trans
                .iter()
                .map(|dist| {
                    dist.iter().fold(W::zero(), |acc, (out, w)| match out {
                        Output::Step(b, y) if *b == a => acc + w.clone() * values[*y].clone(),
                        _ => acc,
                    })
                })
                .collect();
        }
        Ok(values[q].clone())
    }

    /// `word_prob` addressed by state name.
    pub fn word_prob_named(&self, q: &str, word: &[Letter]) -> Result<W, GptsError> {
        self.word_prob(self.state_id(q)?, word)
    }

    /// Places `other` after `self`. State names from `other` that clash are
    /// suffixed with `'`. Returns the union and the index offset of `other`.
    pub fn disjoint_union(&self, other: &Gpts<W>) -> (Gpts<W>, usize) {
        let mut out = self.clone();
        out.alphabet.extend(other.alphabet.iter().copied());
        let offset = out.num_states();
        for name in &other.states {
            let mut fresh = name.clone();
            while out.index.contains_key(&fresh) {
                fresh.push('\'');
            }
            out.add_state(fresh).expect("fresh name");
        }
        for (id, dist) in other.trans.iter().enumerate() {
            out.trans[offset + id] = dist.map_support(|o| o.map(|t| t + offset));
        }
        for &s in &other.start {
            out.mark_start(s + offset);
        }
        (out, offset)
    }

    /// The same system with every weight converted by `f`.
    pub fn map_weights<V: Weight, F: FnMut(&W) -> V>(&self, mut f: F) -> Gpts<V> {
        Gpts {
            states: self.states.clone(),
            index: self.index.clone(),
            alphabet: self.alphabet.clone(),
            trans: self.trans.iter().map(|d| d.map_weights(&mut f)).collect(),
            start: self.start.clone(),
        }
    }

    pub fn to_rpts(&self) -> Rpts<W> {
        Rpts::from_gpts(self)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::prob::ratio;

    #[test]
    fn example_systems_are_valid() {
        assert!(systems_example().validate().is_ok());
        assert!(bisimilarity_example().validate().is_ok());
        assert!(Gpts::<Prob>::new(Alphabet::new()).validate().is_ok());
    }

    #[test]
    fn excess_mass_is_reported() {
        let g = build("a", &["s"], &[("s", None, (3, 4), ""), ("s", Some('a'), (1, 2), "s")]);
        let violations = g.validate().unwrap_err();
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].to_string(), "mass 5/4 > 1 at state s");
    }

    #[test]
    fn dangling_targets_and_foreign_letters_are_reported() {
        let mut g: Gpts = Gpts::new([letter('a')].into_iter().collect());
        let s = g.add_state("s").unwrap();
        g.add_transition(s, Output::Step(letter('a'), 7), ratio(1, 2));
        g.add_transition(s, Output::Step(letter('b'), s), ratio(1, 4));
        let violations = g.validate().unwrap_err();
        assert!(violations.contains(&Violation::DanglingTarget {
            state: "s".into(),
            target: 7
        }));
        assert!(violations.contains(&Violation::LetterOutsideAlphabet {
            state: "s".into(),
            letter: letter('b')
        }));
    }

    #[test]
    fn word_probabilities_of_worked_examples() {
        let g = systems_example();
        let q0 = g.state_id("q0").unwrap();
        assert_eq!(g.word_prob(q0, &g.word("aaa").unwrap()).unwrap(), ratio(3, 64));
        assert_eq!(g.word_prob(q0, &[]).unwrap(), ratio(0, 1));
        let q2 = g.state_id("q2").unwrap();
        for n in 0..6u32 {
            let w = g.word(&"a".repeat(n as usize + 1)).unwrap();
            let expected = ratio(1, 4i64.pow(n)) * ratio(3, 4);
            assert_eq!(g.word_prob(q0, &w).unwrap(), expected);
            assert_eq!(g.word_prob(q2, &w).unwrap(), expected);
        }

        let h = bisimilarity_example();
        assert_eq!(h.word_prob_named("q0", &h.word("ab").unwrap()).unwrap(), ratio(1, 3));
        assert_eq!(h.word_prob_named("q3", &h.word("ab").unwrap()).unwrap(), ratio(1, 3));
    }

    #[test]
    fn word_prob_errors() {
        let g = systems_example();
        assert!(matches!(g.word("ab"), Err(GptsError::UnknownLetter('b'))));
        assert!(matches!(g.word_prob(99, &[]), Err(GptsError::UnknownState(_))));
        assert!(matches!(
            g.word_prob(0, &[letter('z')]),
            Err(GptsError::UnknownLetter('z'))
        ));
        assert!(matches!(g.state_id("nope"), Err(GptsError::UnknownState(_))));
    }

    #[test]
    fn duplicate_states_are_rejected() {
        let mut g: Gpts = Gpts::new(Alphabet::new());
        g.add_state("x").unwrap();
        assert!(matches!(g.add_state("x"), Err(GptsError::DuplicateState(_))));
    }

    #[test]
    fn disjoint_union_renames_and_shifts() {
        let g = systems_example();
        let (u, offset) = g.disjoint_union(&g);
        assert_eq!(offset, 5);
        assert_eq!(u.num_states(), 10);
        assert_eq!(u.state_name(5), "q0'");
        let w = u.word("aa").unwrap();
        assert_eq!(u.word_prob(5, &w).unwrap(), g.word_prob(0, &w).unwrap());
        assert!(u.validate().is_ok());
    }

    #[test]
    fn float_view_agrees() {
        let g = systems_example();
        let approx = g.map_weights(f64::from_prob);
        let w = g.word("aaa").unwrap();
        assert!((approx.word_prob(0, &w).unwrap() - 3.0 / 64.0).abs() < 1e-12);
    }
}
