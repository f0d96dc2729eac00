//! Random generators for expressions, probabilities and transition systems.
//! Used by the axiom harness and by property tests.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::expr::{Alphabet, Expr, Letter};
use crate::gpts::{Gpts, Output};
use crate::prob::{ratio, Prob};

/// Shape limits for generated objects.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub letters: Vec<Letter>,
    /// Largest denominator of generated probabilities.
    pub max_denominator: i64,
    /// Maximum expression depth.
    pub max_depth: usize,
}

impl GenConfig {
    pub fn new(alphabet: &Alphabet, max_denominator: i64, max_depth: usize) -> Self {
        assert!(!alphabet.is_empty(), "generators need at least one letter");
        assert!(max_denominator >= 1);
        GenConfig {
            letters: alphabet.iter().copied().collect(),
            max_denominator,
            max_depth,
        }
    }
}

pub fn random_prob<R: Rng + ?Sized>(rng: &mut R, max_denominator: i64) -> Prob {
    let d = rng.gen_range(1..=max_denominator);
    let n = rng.gen_range(0..=d);
    ratio(n, d)
}

fn random_letter<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Letter {
    *cfg.letters.choose(rng).expect("non-empty alphabet")
}

fn random_atom<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Expr {
    match rng.gen_range(0..6) {
        0 => Expr::zero(),
        1 => Expr::one(),
        _ => Expr::act(random_letter(rng, cfg)),
    }
}

/// An expression of depth at most `cfg.max_depth`.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Expr {
    expr_of_depth(rng, cfg, cfg.max_depth)
}

fn expr_of_depth<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return random_atom(rng, cfg);
    }
    match rng.gen_range(0..3) {
        0 => Expr::choice(
            expr_of_depth(rng, cfg, depth - 1),
            random_prob(rng, cfg.max_denominator),
            expr_of_depth(rng, cfg, depth - 1),
        ),
        1 => Expr::seq(expr_of_depth(rng, cfg, depth - 1), expr_of_depth(rng, cfg, depth - 1)),
        _ => Expr::star(
            expr_of_depth(rng, cfg, depth - 1),
            random_prob(rng, cfg.max_denominator),
        ),
    }
}

/// An expression `e` with `E(e) = 0`, of depth at most `cfg.max_depth`.
pub fn random_productive_expr<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Expr {
    productive_of_depth(rng, cfg, cfg.max_depth)
}

fn productive_of_depth<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Expr {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return if rng.gen_ratio(1, 6) {
            Expr::zero()
        } else {
            Expr::act(random_letter(rng, cfg))
        };
    }
    let e = match rng.gen_range(0..4) {
        0 => Expr::choice(
            productive_of_depth(rng, cfg, depth - 1),
            random_prob(rng, cfg.max_denominator),
            productive_of_depth(rng, cfg, depth - 1),
        ),
        1 => Expr::seq(
            productive_of_depth(rng, cfg, depth - 1),
            expr_of_depth(rng, cfg, depth - 1),
        ),
        2 => Expr::seq(
            expr_of_depth(rng, cfg, depth - 1),
            productive_of_depth(rng, cfg, depth - 1),
        ),
        _ => Expr::star(expr_of_depth(rng, cfg, depth - 1), ratio(1, 1)),
    };
    debug_assert!(e.termination_weight().is_zero());
    e
}

/// A valid GPTS with `states` states named `s0, s1, …`. Each state gets
/// up to four outputs whose weights share one random denominator; the
/// total is at most 1 and often exactly 1.
pub fn random_gpts<R: Rng + ?Sized>(rng: &mut R, states: usize, cfg: &GenConfig) -> Gpts {
    let mut g = Gpts::new(cfg.letters.iter().copied().collect());
    for i in 0..states {
        g.add_state(format!("s{i}")).expect("distinct names");
    }
    for x in 0..states {
        let outputs = rng.gen_range(0..=4);
        let denom = rng.gen_range(1..=cfg.max_denominator);
        let mut budget = if rng.gen_ratio(2, 3) {
            denom
        } else {
            rng.gen_range(0..=denom)
        };
        for k in 0..outputs {
            let share = if k + 1 == outputs {
                budget
            } else {
                rng.gen_range(0..=budget)
            };
            budget -= share;
            let out = if rng.gen_ratio(1, 4) {
                Output::Term
            } else {
                Output::Step(random_letter(rng, cfg), rng.gen_range(0..states))
            };
            g.add_transition(x, out, ratio(share, denom));
        }
    }
    debug_assert!(g.validate().is_ok());
    g
}
