//! Antimirov derivatives and the derivative automaton.
//!
//! `∂(e)` is a subdistribution over termination and `(letter, expression)`
//! pairs. Repeatedly deriving from `e` reaches finitely many expressions,
//! which form a GPTS giving `e` its operational semantics.

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use crate::dist::SubDist;
use crate::expr::{nary_choice, Alphabet, Expr, ExprKind};
use crate::gpts::{Gpts, Output};
use crate::prob::{complement, Prob};

/// Derivative of a single expression.
pub fn derivative(e: &Expr) -> SubDist<Output<Expr>> {
    Deriver::default().derive(e)
}

/// Memoizing derivative evaluator. Subterms shared between states are
/// derived once.
#[derive(Default)]
pub struct Deriver {
    cache: HashMap<Expr, SubDist<Output<Expr>>>,
}

impl Deriver {
    pub fn derive(&mut self, e: &Expr) -> SubDist<Output<Expr>> {
        if let Some(d) = self.cache.get(e) {
            return d.clone();
        }
        let d = match e.kind() {
            ExprKind::Zero => SubDist::empty(),
            ExprKind::One => SubDist::dirac(Output::Term),
            ExprKind::Act(a) => SubDist::dirac(Output::Step(*a, Expr::one())),
            ExprKind::Choice(l, p, r) => {
                let (dl, dr) = (self.derive(l), self.derive(r));
                SubDist::convex_combine(p, &dl, &dr)
            }
            ExprKind::Seq(l, r) => {
                let dl = self.derive(l);
                let exit = dl.get(&Output::Term);
                let mut out = if exit.is_zero() {
                    SubDist::empty()
                } else {
                    self.derive(r).scaled(&exit)
                };
                for (o, w) in dl.iter() {
                    if let Output::Step(a, next) = o {
                        out.add(Output::Step(*a, Expr::seq(next.clone(), r.clone())), w.clone());
                    }
                }
                out
            }
            ExprKind::Star(body, p) => {
                let db = self.derive(body);
                let exit = db.get(&Output::Term);
                if exit.is_one() && p.is_one() {
                    // divergent loop: deadlock
                    SubDist::empty()
                } else {
                    let denom = Prob::one() - p * &exit;
                    let mut out = SubDist::empty();
                    out.add(Output::Term, complement(p) / &denom);
                    for (o, w) in db.iter() {
                        if let Output::Step(a, next) = o {
                            out.add(Output::Step(*a, Expr::seq(next.clone(), e.clone())), p * w / &denom);
                        }
                    }
                    out
                }
            }
        };
        self.cache.insert(e.clone(), d.clone());
        d
    }
}

/// How states of a derivative automaton are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateNaming {
    /// The rendered expression.
    Rendered,
    /// `e0`, `e1`, … in discovery order. Cheap for large expressions.
    Indexed,
}

/// The reachable part of the derivative GPTS, with the expression behind
/// each state. State 0 is the root.
#[derive(Debug, Clone)]
pub struct DerivativeAutomaton {
    pub gpts: Gpts,
    pub exprs: Vec<Expr>,
}

/// Breadth-first closure of `∂` from `e`. States are deduplicated by
/// structural equality; the root is state 0 and is marked as a start state.
pub fn derivative_automaton(e: &Expr, naming: StateNaming, extra: &Alphabet) -> DerivativeAutomaton {
    let mut alphabet = e.letters();
    alphabet.extend(extra.iter().copied());
    let mut gpts = Gpts::new(alphabet);
    let mut ids: HashMap<Expr, usize> = HashMap::new();
    let mut exprs = Vec::new();
    let mut queue = VecDeque::new();
    let mut deriver = Deriver::default();

    let mut intern = |x: &Expr, gpts: &mut Gpts, queue: &mut VecDeque<usize>, exprs: &mut Vec<Expr>| -> usize {
        if let Some(&id) = ids.get(x) {
            return id;
        }
        let name = match naming {
            StateNaming::Rendered => x.to_string(),
            StateNaming::Indexed => format!("e{}", exprs.len()),
        };
        let id = gpts.add_state(name).expect("distinct expressions render distinctly");
        ids.insert(x.clone(), id);
        exprs.push(x.clone());
        queue.push_back(id);
        id
    };

    let root = intern(e, &mut gpts, &mut queue, &mut exprs);
    gpts.mark_start(root);
    while let Some(id) = queue.pop_front() {
        let d = deriver.derive(&exprs[id].clone());
        let mut dist = SubDist::empty();
        for (o, w) in d.iter() {
            let out = match o {
                Output::Term => Output::Term,
                Output::Step(a, next) => Output::Step(*a, intern(next, &mut gpts, &mut queue, &mut exprs)),
            };
            dist.add(out, w.clone());
        }
        gpts.set_transitions(id, dist);
    }
    DerivativeAutomaton { gpts, exprs }
}

/// `⟨e⟩` as a GPTS with states named by their expressions; `e` is state 0.
pub fn reachable(e: &Expr) -> Gpts {
    derivative_automaton(e, StateNaming::Rendered, &Alphabet::new()).gpts
}

/// Support order used for output: termination first, then by letter, then
/// by rendered target.
pub fn support_order(d: &SubDist<Output<Expr>>) -> Vec<(Output<Expr>, Prob)> {
    d.sorted_by_key(|o| match o {
        Output::Term => (0u8, None, String::new()),
        Output::Step(a, e) => (1u8, Some(*a), e.to_string()),
    })
    .into_iter()
    .map(|(o, w)| (o.clone(), w.clone()))
    .collect()
}

/// Rebuilds `e` from its own derivative: `⊕ ∂(e)(d)·ex(d)` where
/// `ex(✓) = 1` and `ex(a, e') = a ; e'`.
pub fn fundamental_form(e: &Expr) -> Expr {
    let terms = support_order(&derivative(e)).into_iter().map(|(o, w)| {
        let body = match o {
            Output::Term => Expr::one(),
            Output::Step(a, next) => Expr::seq(Expr::act(a), next),
        };
        (w, body)
    });
    nary_choice(terms).expect("derivatives have mass at most 1")
}
