//! Strategies and reference semantics shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pre_core::expr::alphabet_from_str;
use pre_core::prob::ratio;
use pre_core::random::{random_gpts, GenConfig};
use pre_core::{Alphabet, Expr, ExprKind, Gpts, Letter, Output, Prob};

pub fn letter(c: char) -> Letter {
    Letter::new(c).unwrap()
}

pub fn ab() -> Alphabet {
    alphabet_from_str("ab").unwrap()
}

pub fn arb_prob(max_den: i64) -> impl Strategy<Value = Prob> {
    (1..=max_den).prop_flat_map(|d| (0..=d).prop_map(move |n| ratio(n, d)))
}

fn arb_leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        1 => Just(Expr::zero()),
        1 => Just(Expr::one()),
        2 => Just(Expr::act(letter('a'))),
        2 => Just(Expr::act(letter('b'))),
    ]
}

/// Expressions over `{a, b}` with denominators up to 12.
pub fn arb_expr(depth: u32) -> impl Strategy<Value = Expr> {
    arb_leaf().prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), arb_prob(12), inner.clone()).prop_map(|(l, p, r)| Expr::choice(l, p, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::seq(l, r)),
            (inner, arb_prob(12)).prop_map(|(b, p)| Expr::star(b, p)),
        ]
    })
}

/// A random valid GPTS over `{a, b}` with 1 to `max_states` states.
pub fn arb_gpts(max_states: usize) -> impl Strategy<Value = Gpts> {
    (any::<u64>(), 1..=max_states).prop_map(|(seed, n)| seeded_gpts(seed, n))
}

pub fn seeded_gpts(seed: u64, states: usize) -> Gpts {
    let cfg = GenConfig::new(&ab(), 12, 0);
    random_gpts(&mut ChaCha8Rng::seed_from_u64(seed), states, &cfg)
}

/// All words over `alphabet` of length at most `max_len`, shortest first.
pub fn words(alphabet: &Alphabet, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &a in alphabet {
                let mut v: Vec<Letter> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Language of an expression computed from the syntax alone, as a
/// convolution of sub-languages. Loops solve
/// `X(w) = p·Σ_{uv=w} L(u)·X(v) + (1-p)·[w = ε]` for the least `X`.
pub fn expr_lang(e: &Expr, w: &[Letter]) -> Prob {
    let mut memo = HashMap::new();
    lang_between(e, w, 0, w.len(), &mut memo)
}

fn lang_between(e: &Expr, w: &[Letter], i: usize, j: usize, memo: &mut HashMap<(Expr, usize, usize), Prob>) -> Prob {
    if let Some(v) = memo.get(&(e.clone(), i, j)) {
        return v.clone();
    }
    let v = match e.kind() {
        ExprKind::Zero => Prob::zero(),
        ExprKind::One => indicator(i == j),
        ExprKind::Act(a) => indicator(j == i + 1 && w[i] == *a),
        ExprKind::Choice(l, p, r) => {
            p * lang_between(l, w, i, j, memo) + (Prob::one() - p) * lang_between(r, w, i, j, memo)
        }
        ExprKind::Seq(l, r) => (i..=j)
            .map(|k| lang_between(l, w, i, k, memo) * lang_between(r, w, k, j, memo))
            .fold(Prob::zero(), |acc, x| acc + x),
        ExprKind::Star(b, p) => {
            let denom = Prob::one() - p * lang_between(b, w, i, i, memo);
            if denom.is_zero() {
                Prob::zero()
            } else {
                let mut sum = (Prob::one() - p) * indicator(i == j);
                for k in i + 1..=j {
                    sum += p * lang_between(b, w, i, k, memo) * lang_between(e, w, k, j, memo);
                }
                sum / denom
            }
        }
    };
    memo.insert((e.clone(), i, j), v.clone());
    v
}

fn indicator(b: bool) -> Prob {
    if b {
        Prob::one()
    } else {
        Prob::zero()
    }
}

/// Word probability by direct recursion on the transition structure:
/// `P(x, ε) = β(x)(✓)` and `P(x, a·v) = Σ_y β(x)(a, y)·P(y, v)`.
pub fn gpts_lang(g: &Gpts, x: usize, w: &[Letter]) -> Prob {
    match w.split_first() {
        None => g.transitions(x).get(&Output::Term),
        Some((a, rest)) => g
            .transitions(x)
            .iter()
            .filter_map(|(o, p)| match o {
                Output::Step(b, y) if b == a => Some(p * gpts_lang(g, *y, rest)),
                _ => None,
            })
            .fold(Prob::zero(), |acc, v| acc + v),
    }
}

/// Row-vector propagation over the transition structure: the weights of
/// reaching each state after reading `a`, from the row `row`.
pub fn push_row(g: &Gpts, row: &[Prob], a: Letter) -> Vec<Prob> {
    let mut next = vec![Prob::zero(); g.num_states()];
    for (x, wx) in row.iter().enumerate() {
        if wx.is_zero() {
            continue;
        }
        for (o, p) in g.transitions(x).iter() {
            if let Output::Step(b, y) = o {
                if *b == a {
                    next[*y] += wx * p;
                }
            }
        }
    }
    next
}

pub fn accept_of(g: &Gpts, row: &[Prob]) -> Prob {
    row.iter()
        .enumerate()
        .map(|(x, w)| w * g.transitions(x).get(&Output::Term))
        .fold(Prob::zero(), |acc, v| acc + v)
}

pub fn unit_row(n: usize, x: usize) -> Vec<Prob> {
    let mut row = vec![Prob::zero(); n];
    row[x] = Prob::one();
    row
}
