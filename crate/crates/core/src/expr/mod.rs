//! Probabilistic regular expressions.
//!
//! An [`Expr`] is an immutable, reference-counted syntax tree. Subterms are
//! shared freely, and every node carries a precomputed structural hash so
//! that expressions can be used as automaton states without rehashing whole
//! trees.

mod axioms;
mod parse;
mod render;

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_traits::{One, Zero};

pub use axioms::{AxiomSchema, Bindings};
pub use parse::{parse, parse_with_alphabet};

use crate::error::ChoiceError;
use crate::prob::{complement, is_probability, Prob};

/// An alphabet symbol: a single lowercase ASCII letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(char);

impl Letter {
    pub fn new(c: char) -> Option<Letter> {
        c.is_ascii_lowercase().then_some(Letter(c))
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TryFrom<char> for Letter {
    type Error = char;

    fn try_from(c: char) -> Result<Self, char> {
        Letter::new(c).ok_or(c)
    }
}

pub type Alphabet = BTreeSet<Letter>;

/// Parses an alphabet given as a string of letters, e.g. `"ab"`. Commas and
/// whitespace are ignored.
pub fn alphabet_from_str(s: &str) -> Result<Alphabet, char> {
    s.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(Letter::try_from)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExprKind {
    Zero,
    One,
    Act(Letter),
    /// `left +[p] right`: behaves as `left` with probability `p`.
    Choice(Expr, Prob, Expr),
    Seq(Expr, Expr),
    /// `body^[p]`: loop, re-entering the body with probability `p`.
    Star(Expr, Prob),
}

struct Node {
    kind: ExprKind,
    hash: u64,
}

/// A probabilistic regular expression.
///
/// Equality is structural. Cloning is cheap.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    fn from_kind(kind: ExprKind) -> Expr {
        let mut hasher = DefaultHasher::new();
        kind.hash(&mut hasher);
        let hash = hasher.finish();
        Expr(Arc::new(Node { kind, hash }))
    }

    pub fn zero() -> Expr {
        Expr::from_kind(ExprKind::Zero)
    }

    pub fn one() -> Expr {
        Expr::from_kind(ExprKind::One)
    }

    pub fn act(a: Letter) -> Expr {
        Expr::from_kind(ExprKind::Act(a))
    }

    /// `left +[p] right`. Panics if `p` is not a probability.
    pub fn choice(left: Expr, p: Prob, right: Expr) -> Expr {
        assert!(is_probability(&p), "choice weight {p} outside [0, 1]");
        Expr::from_kind(ExprKind::Choice(left, p, right))
    }

    pub fn seq(left: Expr, right: Expr) -> Expr {
        Expr::from_kind(ExprKind::Seq(left, right))
    }

    /// `body^[p]`. Panics if `p` is not a probability.
    pub fn star(body: Expr, p: Prob) -> Expr {
        assert!(is_probability(&p), "loop weight {p} outside [0, 1]");
        Expr::from_kind(ExprKind::Star(body, p))
    }

    pub fn kind(&self) -> &ExprKind {
        &self.0.kind
    }

    /// Right-nested sequence of the given expressions; `One` when empty.
    pub fn seq_all<I>(parts: I) -> Expr
    where
        I: IntoIterator<Item = Expr>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = parts.into_iter().rev();
        match iter.next() {
            None => Expr::one(),
            Some(last) => iter.fold(last, |acc, e| Expr::seq(e, acc)),
        }
    }

    /// Letters occurring in the expression.
    pub fn letters(&self) -> Alphabet {
        let mut out = Alphabet::new();
        let mut stack = vec![self];
        let mut seen = std::collections::HashSet::new();
        while let Some(e) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&e.0)) {
                continue;
            }
            match e.kind() {
                ExprKind::Zero | ExprKind::One => {}
                ExprKind::Act(a) => {
                    out.insert(*a);
                }
                ExprKind::Choice(l, _, r) | ExprKind::Seq(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
                ExprKind::Star(b, _) => stack.push(b),
            }
        }
        out
    }

    /// Height of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self.kind() {
            ExprKind::Zero | ExprKind::One | ExprKind::Act(_) => 0,
            ExprKind::Choice(l, _, r) | ExprKind::Seq(l, r) => 1 + l.depth().max(r.depth()),
            ExprKind::Star(b, _) => 1 + b.depth(),
        }
    }

    /// The termination weight `E(e)`: the probability of accepting the
    /// empty word.
    pub fn termination_weight(&self) -> Prob {
        match self.kind() {
            ExprKind::Zero | ExprKind::Act(_) => Prob::zero(),
            ExprKind::One => Prob::one(),
            ExprKind::Choice(l, p, r) => p * l.termination_weight() + complement(p) * r.termination_weight(),
            ExprKind::Seq(l, r) => {
                let left = l.termination_weight();
                if left.is_zero() {
                    left
                } else {
                    left * r.termination_weight()
                }
            }
            ExprKind::Star(body, p) => {
                let inner = body.termination_weight();
                if inner.is_one() && p.is_one() {
                    Prob::zero()
                } else {
                    complement(p) / (Prob::one() - p * inner)
                }
            }
        }
    }

    /// Upper bound on the number of derivative-reachable states:
    /// `#(0) = #(1) = 1`, `#(a) = 2`, `#(e op f) = #(e) + #(f)`,
    /// `#(e^[p]) = #(e) + 1`. Saturates at `u64::MAX`.
    pub fn size_bound(&self) -> u64 {
        match self.kind() {
            ExprKind::Zero | ExprKind::One => 1,
            ExprKind::Act(_) => 2,
            ExprKind::Choice(l, _, r) | ExprKind::Seq(l, r) => l.size_bound().saturating_add(r.size_bound()),
            ExprKind::Star(b, _) => b.size_bound().saturating_add(1),
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

/// Folds a finite sub-convex sum `⊕ pᵢ·eᵢ` into binary choices.
///
/// Zero-weight terms are dropped first. Then: no terms gives `Zero`; a term
/// of weight 1 is returned as is; otherwise the first term is the pivot,
/// `e₀ +[p₀] (⊕ pᵢ/(1−p₀)·eᵢ)`.
pub fn nary_choice<I>(terms: I) -> Result<Expr, ChoiceError>
where
    I: IntoIterator<Item = (Prob, Expr)>,
{
    let terms: Vec<(Prob, Expr)> = terms.into_iter().collect();
    let mut total = Prob::zero();
    for (p, _) in &terms {
        if !is_probability(p) {
            return Err(ChoiceError::WeightOutOfRange(p.to_string()));
        }
        total += p;
    }
    if total > Prob::one() {
        return Err(ChoiceError::MassExceedsOne(total.to_string()));
    }
    let live: Vec<(Prob, Expr)> = terms.into_iter().filter(|(p, _)| !p.is_zero()).collect();
    Ok(fold_choice(&live))
}

fn fold_choice(terms: &[(Prob, Expr)]) -> Expr {
    match terms {
        [] => Expr::zero(),
        [(p, e), rest @ ..] => {
            if p.is_one() {
                return e.clone();
            }
            let rest_scale = complement(p);
            let rescaled: Vec<(Prob, Expr)> = rest.iter().map(|(q, f)| (q / &rest_scale, f.clone())).collect();
            Expr::choice(e.clone(), p.clone(), fold_choice(&rescaled))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::ratio;

    fn a() -> Expr {
        Expr::act(Letter::new('a').unwrap())
    }

    fn b() -> Expr {
        Expr::act(Letter::new('b').unwrap())
    }

    #[test]
    fn termination_weight_cases() {
        assert_eq!(Expr::one().termination_weight(), ratio(1, 1));
        assert_eq!(Expr::zero().termination_weight(), ratio(0, 1));
        assert_eq!(a().termination_weight(), ratio(0, 1));
        let e = Expr::seq(
            Expr::star(a(), ratio(1, 2)),
            Expr::choice(b(), ratio(1, 2), Expr::one()),
        );
        assert_eq!(e.termination_weight(), ratio(1, 4));
        assert_eq!(Expr::star(Expr::one(), ratio(1, 1)).termination_weight(), ratio(0, 1));
        // E(1) = 1 but p < 1: (1 - p) / (1 - p) = 1.
        assert_eq!(Expr::star(Expr::one(), ratio(1, 3)).termination_weight(), ratio(1, 1));
        assert_eq!(Expr::star(a(), ratio(1, 1)).termination_weight(), ratio(0, 1));
    }

    #[test]
    fn nary_choice_cases() {
        assert_eq!(nary_choice(vec![]).unwrap(), Expr::zero());
        assert_eq!(nary_choice(vec![(ratio(1, 1), a())]).unwrap(), a());
        assert_eq!(
            nary_choice(vec![(ratio(1, 4), a()), (ratio(1, 2), b())]).unwrap(),
            Expr::choice(a(), ratio(1, 4), Expr::choice(b(), ratio(2, 3), Expr::zero()))
        );
        assert_eq!(
            nary_choice(vec![(ratio(0, 1), a()), (ratio(0, 1), b())]).unwrap(),
            Expr::zero()
        );
        assert!(matches!(
            nary_choice(vec![(ratio(3, 4), a()), (ratio(1, 2), b())]),
            Err(ChoiceError::MassExceedsOne(_))
        ));
        assert!(matches!(
            nary_choice(vec![(ratio(5, 4), a())]),
            Err(ChoiceError::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn size_bound_cases() {
        assert_eq!(a().size_bound(), 2);
        assert_eq!(Expr::zero().size_bound(), 1);
        assert_eq!(Expr::one().size_bound(), 1);
        assert_eq!(Expr::seq(a(), Expr::star(a(), ratio(1, 4))).size_bound(), 5);
    }

    #[test]
    fn structural_equality_ignores_sharing() {
        let x = Expr::seq(a(), b());
        let y = Expr::seq(a(), b());
        assert_eq!(x, y);
        assert_ne!(x, Expr::seq(b(), a()));
        assert_ne!(Expr::star(a(), ratio(1, 2)), Expr::star(a(), ratio(1, 3)));
    }

    #[test]
    fn letters_and_alphabet() {
        let e = Expr::choice(a(), ratio(1, 2), Expr::seq(b(), a()));
        let letters: Vec<char> = e.letters().into_iter().map(Letter::as_char).collect();
        assert_eq!(letters, vec!['a', 'b']);
        assert_eq!(alphabet_from_str("a, b").unwrap().len(), 2);
        assert_eq!(alphabet_from_str("aB"), Err('B'));
    }
}
