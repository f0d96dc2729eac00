//! Left-affine equation systems and their solution by elimination.
//!
//! A system over unknowns `q₁ … qₙ` reads, for every `q`,
//!
//! ```text
//! h(q) ≡ (⊕_{q'} p(q,q')·M(q,q');h(q')) ⊕ r(q)·b(q)
//! ```
//!
//! with each row of `p` plus `r(q)` summing to 1 and every `M(q,q')`
//! unable to terminate immediately. Such a system has a unique solution up
//! to the axioms. It is computed by eliminating one unknown at a time
//! through the unique-fixpoint rule and substituting it into the remaining
//! rows, then back-substituting once a single unknown is left.

use num_traits::{One, Zero};

use crate::equiv::{expr_equiv, EquivVerdict};
use crate::error::{SolveError, SystemError};
use crate::expr::{nary_choice, Expr};
use crate::gpts::{Gpts, Output};
use crate::prob::{complement, is_probability, Prob};

#[derive(Debug, Clone, PartialEq)]
pub struct LeftAffineSystem {
    unknowns: Vec<String>,
    m: Vec<Vec<Expr>>,
    p: Vec<Vec<Prob>>,
    b: Vec<Expr>,
    r: Vec<Prob>,
}

/// One expression per unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    unknowns: Vec<String>,
    exprs: Vec<Expr>,
}

impl Solution {
    pub fn get(&self, name: &str) -> Result<&Expr, SystemError> {
        self.unknowns
            .iter()
            .position(|u| u == name)
            .map(|i| &self.exprs[i])
            .ok_or_else(|| SystemError::UnknownVariable(name.to_string()))
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }
}

impl std::ops::Index<usize> for Solution {
    type Output = Expr;

    fn index(&self, i: usize) -> &Expr {
        &self.exprs[i]
    }
}

fn choice(terms: Vec<(Prob, Expr)>) -> Expr {
    nary_choice(terms).expect("elimination keeps every row sub-convex")
}

/// `a / b`, with the convention `x / 0 = 0`.
fn quotient(a: &Prob, b: &Prob) -> Prob {
    if b.is_zero() {
        Prob::zero()
    } else {
        a / b
    }
}

impl LeftAffineSystem {
    /// Builds a system after checking its invariants.
    pub fn new(
        unknowns: Vec<String>,
        m: Vec<Vec<Expr>>,
        p: Vec<Vec<Prob>>,
        b: Vec<Expr>,
        r: Vec<Prob>,
    ) -> Result<Self, SystemError> {
        let s = LeftAffineSystem { unknowns, m, p, b, r };
        s.check()?;
        Ok(s)
    }

    /// The system `S(β)` of a GPTS: `p(x,x')` is the total step mass from
    /// `x` to `x'`, `M(x,x')` the letter mix of those steps, `r(x)` the
    /// mass not spent on steps and `b(x)` the termination share of it.
    pub fn of_gpts(g: &Gpts) -> Self {
        let n = g.num_states();
        let mut m = vec![vec![Expr::zero(); n]; n];
        let mut p = vec![vec![Prob::zero(); n]; n];
        let mut b = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        for x in 0..n {
            let dist = g.transitions(x);
            let mut step_mass = Prob::zero();
            for (out, w) in dist.iter() {
                if let Output::Step(_, y) = out {
                    p[x][*y] += w;
                    step_mass += w;
                }
            }
            for y in 0..n {
                if p[x][y].is_zero() {
                    continue;
                }
                let letters = g.alphabet().iter().filter_map(|&a| {
                    let w = dist.get(&Output::Step(a, y));
                    (!w.is_zero()).then(|| (&w / &p[x][y], Expr::act(a)))
                });
                m[x][y] = choice(letters.collect());
            }
            let rest = Prob::one() - step_mass;
            b.push(if rest.is_zero() {
                Expr::zero()
            } else {
                choice(vec![(g.accept(x) / &rest, Expr::one())])
            });
            r.push(rest);
        }
        LeftAffineSystem {
            unknowns: g.state_names().to_vec(),
            m,
            p,
            b,
            r,
        }
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }

    pub fn unknowns(&self) -> &[String] {
        &self.unknowns
    }

    pub fn coefficient(&self, q: usize, q2: usize) -> (&Expr, &Prob) {
        (&self.m[q][q2], &self.p[q][q2])
    }

    pub fn constant(&self, q: usize) -> (&Expr, &Prob) {
        (&self.b[q], &self.r[q])
    }

    /// Row sums equal 1, probabilities lie in `[0, 1]` and every `M` has
    /// termination weight 0.
    pub fn check(&self) -> Result<(), SystemError> {
        let n = self.unknowns.len();
        if self.m.len() != n
            || self.p.len() != n
            || self.b.len() != n
            || self.r.len() != n
            || self.m.iter().any(|row| row.len() != n)
            || self.p.iter().any(|row| row.len() != n)
        {
            return Err(SystemError::Shape(n));
        }
        for q in 0..n {
            let row = &self.unknowns[q];
            let mut sum = self.r[q].clone();
            if !is_probability(&self.r[q]) {
                return Err(SystemError::OutOfRange {
                    row: row.clone(),
                    col: "r".into(),
                    value: self.r[q].to_string(),
                });
            }
            for q2 in 0..n {
                let col = &self.unknowns[q2];
                let pq = &self.p[q][q2];
                if !is_probability(pq) {
                    return Err(SystemError::OutOfRange {
                        row: row.clone(),
                        col: col.clone(),
                        value: pq.to_string(),
                    });
                }
                sum += pq;
                let exit = self.m[q][q2].termination_weight();
                if !exit.is_zero() {
                    return Err(SystemError::NotProductive {
                        row: row.clone(),
                        col: col.clone(),
                        value: exit.to_string(),
                    });
                }
            }
            if !sum.is_one() {
                return Err(SystemError::RowSum {
                    row: row.clone(),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Right-hand side of the equation for `q` with `h` plugged in.
    pub fn rhs(&self, q: usize, h: &[Expr]) -> Expr {
        let mut terms: Vec<(Prob, Expr)> = (0..self.len())
            .map(|q2| (self.p[q][q2].clone(), Expr::seq(self.m[q][q2].clone(), h[q2].clone())))
            .collect();
        terms.push((self.r[q].clone(), self.b[q].clone()));
        choice(terms)
    }

    /// Checks semantically that `h` satisfies every equation. Returns the
    /// first unknown whose equation fails, with the verdict.
    pub fn first_violation(&self, h: &Solution) -> Option<(usize, EquivVerdict)> {
        (0..self.len()).find_map(|q| {
            let verdict = expr_equiv(&h.exprs[q], &self.rhs(q, &h.exprs));
            (!verdict.is_equal()).then_some((q, verdict))
        })
    }

    /// Solves by eliminating the highest-index unknown first.
    pub fn solve(&self) -> Result<Solution, SystemError> {
        let order: Vec<usize> = (0..self.len()).rev().collect();
        self.solve_in_order(&order)
    }

    /// Solves eliminating unknowns in the given order; the last entry is the
    /// one solved directly.
    pub fn solve_in_order(&self, order: &[usize]) -> Result<Solution, SystemError> {
        self.check()?;
        let n = self.len();
        let mut seen = vec![false; n];
        for &k in order {
            if k >= n || std::mem::replace(&mut seen[k], true) {
                return Err(SystemError::BadOrder);
            }
        }
        if order.len() != n {
            return Err(SystemError::BadOrder);
        }
        Ok(Solution {
            unknowns: self.unknowns.clone(),
            exprs: eliminate(self.clone(), order),
        })
    }
}

/// How to rebuild one eliminated unknown once the rest are known:
/// `h(k) = star ; ((⊕ wᵢ·Mᵢ;h(i)) ⊕ w·b)`.
struct Elimination {
    k: usize,
    star: Expr,
    terms: Vec<(usize, Prob, Expr)>,
    constant: (Prob, Expr),
}

fn eliminate(mut s: LeftAffineSystem, order: &[usize]) -> Vec<Expr> {
    let n = s.len();
    let mut h: Vec<Option<Expr>> = vec![None; n];
    if n == 0 {
        return Vec::new();
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut steps = Vec::with_capacity(n);

    for &k in &order[..n - 1] {
        remaining.retain(|&i| i != k);
        let p_kk = s.p[k][k].clone();
        let p_bar = complement(&p_kk);
        let star = Expr::star(s.m[k][k].clone(), p_kk);

        // h(k) in terms of the remaining unknowns. With p̄ = 0 the row is
        // all zeros and the inner sum is empty.
        let terms: Vec<(usize, Prob, Expr)> = remaining
            .iter()
            .map(|&i| (i, quotient(&s.p[k][i], &p_bar), s.m[k][i].clone()))
            .collect();
        let constant = (quotient(&s.r[k], &p_bar), s.b[k].clone());

        for &j in &remaining {
            let p_jk = s.p[j][k].clone();
            let m_jk = s.m[j][k].clone();
            for &i in &remaining {
                let via = &p_jk * quotient(&s.p[k][i], &p_bar);
                let s_ji = &s.p[j][i] + &via;
                let n_ji = if s_ji.is_zero() {
                    Expr::zero()
                } else {
                    choice(vec![
                        (&s.p[j][i] / &s_ji, s.m[j][i].clone()),
                        (
                            &via / &s_ji,
                            Expr::seq(m_jk.clone(), Expr::seq(star.clone(), s.m[k][i].clone())),
                        ),
                    ])
                };
                s.p[j][i] = s_ji;
                s.m[j][i] = n_ji;
            }
            // When p̄ = 0, h(k) = star;0 is closed and its whole share moves
            // into the constant part.
            let (via, tail) = if p_bar.is_zero() {
                (p_jk.clone(), Expr::zero())
            } else {
                (&p_jk * &s.r[k] / &p_bar, s.b[k].clone())
            };
            let t_j = &s.r[j] + &via;
            let c_j = if t_j.is_zero() {
                Expr::zero()
            } else {
                choice(vec![
                    (&s.r[j] / &t_j, s.b[j].clone()),
                    (&via / &t_j, Expr::seq(m_jk.clone(), Expr::seq(star.clone(), tail))),
                ])
            };
            s.r[j] = t_j;
            s.b[j] = c_j;
            s.p[j][k] = Prob::zero();
            s.m[j][k] = Expr::zero();
        }
        steps.push(Elimination {
            k,
            star,
            terms,
            constant,
        });
    }

    let last = order[n - 1];
    h[last] = Some(Expr::seq(
        Expr::star(s.m[last][last].clone(), s.p[last][last].clone()),
        s.b[last].clone(),
    ));

    for step in steps.into_iter().rev() {
        let mut terms: Vec<(Prob, Expr)> = step
            .terms
            .into_iter()
            .map(|(i, w, m)| {
                let hi = h[i].clone().expect("later unknowns are solved first");
                (w, Expr::seq(m, hi))
            })
            .collect();
        terms.push(step.constant);
        h[step.k] = Some(Expr::seq(step.star, choice(terms)));
    }
    h.into_iter().map(|e| e.expect("every unknown solved")).collect()
}

/// The system of a GPTS.
pub fn system_of(g: &Gpts) -> LeftAffineSystem {
    LeftAffineSystem::of_gpts(g)
}

/// An expression whose language is that of state `x`.
pub fn gpts_to_expr(g: &Gpts, x: &str) -> Result<Expr, SolveError> {
    let id = g.state_id(x)?;
    let solution = system_of(g).solve()?;
    Ok(solution.exprs[id].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::reachable;
    use crate::expr::{parse, Letter};
    use crate::gpts::fixtures::*;
    use crate::prob::ratio;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("q{i}")).collect()
    }

    #[test]
    fn system_of_worked_example() {
        let g = systems_example();
        let s = system_of(&g);
        assert!(s.check().is_ok());
        let a = Expr::act(Letter::new('a').unwrap());
        assert_eq!(s.coefficient(0, 1), (&a, &ratio(1, 1)));
        assert_eq!(s.constant(0), (&Expr::zero(), &ratio(0, 1)));
        assert_eq!(s.coefficient(1, 1), (&a, &ratio(1, 4)));
        assert_eq!(s.constant(1), (&Expr::one(), &ratio(3, 4)));
        // q2 reaches q3 and q4 with a only
        assert_eq!(s.coefficient(2, 4), (&a, &ratio(3, 4)));
        assert_eq!(s.coefficient(2, 0), (&Expr::zero(), &ratio(0, 1)));
    }

    #[test]
    fn system_of_edge_states() {
        let g = build(
            "a",
            &["acc", "dead", "half"],
            &[("acc", None, (1, 1), ""), ("half", None, (1, 2), "")],
        );
        let s = system_of(&g);
        assert_eq!(s.constant(0), (&Expr::one(), &ratio(1, 1)));
        assert_eq!(s.constant(1), (&Expr::zero(), &ratio(1, 1)));
        assert_eq!(
            s.constant(2),
            (&Expr::choice(Expr::one(), ratio(1, 2), Expr::zero()), &ratio(1, 1))
        );
        assert!(s.check().is_ok());
    }

    #[test]
    fn mixed_letters_split_by_weight() {
        let g = build(
            "ab",
            &["s", "t"],
            &[("s", Some('a'), (1, 4), "t"), ("s", Some('b'), (1, 2), "t")],
        );
        let s = system_of(&g);
        assert_eq!(s.coefficient(0, 1).1, &ratio(3, 4));
        assert_eq!(s.coefficient(0, 1).0, &parse("a +[1/3] b").unwrap());
        assert_eq!(s.constant(0), (&Expr::zero(), &ratio(1, 4)));
    }

    #[test]
    fn solves_worked_example() {
        let g = systems_example();
        let h = system_of(&g).solve().unwrap();
        assert!(expr_equiv(h.get("q1").unwrap(), &parse("a^[1/4]").unwrap()).is_equal());
        assert!(expr_equiv(h.get("q0").unwrap(), &parse("a;a^[1/4]").unwrap()).is_equal());
        assert!(expr_equiv(h.get("q2").unwrap(), &parse("a;a^[1/4]").unwrap()).is_equal());
        assert!(system_of(&g).first_violation(&h).is_none());
    }

    #[test]
    fn base_case_shapes() {
        let s = LeftAffineSystem::new(
            names(1),
            vec![vec![Expr::zero()]],
            vec![vec![ratio(0, 1)]],
            vec![Expr::one()],
            vec![ratio(1, 1)],
        )
        .unwrap();
        let h = s.solve().unwrap();
        assert_eq!(h[0], Expr::seq(Expr::star(Expr::zero(), ratio(0, 1)), Expr::one()));
        let g = reachable(&h[0]);
        assert_eq!(g.word_prob(0, &[]).unwrap(), ratio(1, 1));
        assert_eq!(g.word_prob(0, &g.word("").unwrap()).unwrap(), ratio(1, 1));

        let a = Expr::act(Letter::new('a').unwrap());
        let s = LeftAffineSystem::new(
            names(1),
            vec![vec![a.clone()]],
            vec![vec![ratio(1, 1)]],
            vec![Expr::zero()],
            vec![ratio(0, 1)],
        )
        .unwrap();
        let h = s.solve().unwrap();
        assert_eq!(h[0], Expr::seq(Expr::star(a, ratio(1, 1)), Expr::zero()));
        let g = reachable(&h[0]);
        for n in 0..=4 {
            let w = vec![Letter::new('a').unwrap(); n];
            assert_eq!(g.word_prob(0, &w).unwrap(), ratio(0, 1));
        }
    }

    #[test]
    fn full_self_loop_in_the_middle() {
        // t loops forever on a; s reaches t or accepts.
        let g = build(
            "a",
            &["s", "t", "u"],
            &[
                ("s", Some('a'), (1, 2), "t"),
                ("s", Some('a'), (1, 4), "u"),
                ("s", None, (1, 4), ""),
                ("t", Some('a'), (1, 1), "t"),
                ("u", None, (1, 1), ""),
            ],
        );
        let s = system_of(&g);
        for order in [vec![2, 1, 0], vec![1, 0, 2], vec![0, 2, 1], vec![1, 2, 0]] {
            let h = s.solve_in_order(&order).unwrap();
            let (union, offset) = g.disjoint_union(&reachable(&h[0]));
            assert!(
                crate::equiv::lang_equiv(&union, 0, offset).unwrap().is_equal(),
                "{order:?}"
            );
            assert!(s.first_violation(&h).is_none());
        }
    }

    #[test]
    fn invariant_violations_are_rejected() {
        let a = Expr::act(Letter::new('a').unwrap());
        let bad_sum = LeftAffineSystem::new(
            names(1),
            vec![vec![a.clone()]],
            vec![vec![ratio(1, 2)]],
            vec![Expr::one()],
            vec![ratio(1, 4)],
        );
        assert!(matches!(bad_sum, Err(SystemError::RowSum { .. })));
        let unproductive = LeftAffineSystem::new(
            names(1),
            vec![vec![Expr::one()]],
            vec![vec![ratio(1, 2)]],
            vec![Expr::one()],
            vec![ratio(1, 2)],
        );
        assert!(matches!(unproductive, Err(SystemError::NotProductive { .. })));
        let shape = LeftAffineSystem::new(names(2), vec![], vec![], vec![], vec![]);
        assert!(matches!(shape, Err(SystemError::Shape(2))));
    }

    #[test]
    fn bad_orders_are_rejected() {
        let s = system_of(&systems_example());
        assert!(matches!(s.solve_in_order(&[0, 1]), Err(SystemError::BadOrder)));
        assert!(matches!(s.solve_in_order(&[0, 0, 1, 2, 3]), Err(SystemError::BadOrder)));
    }

    #[test]
    fn gpts_to_expr_errors_and_accepting_state() {
        let g = build("a", &["s"], &[("s", None, (1, 1), "")]);
        let e = gpts_to_expr(&g, "s").unwrap();
        let r = reachable(&e);
        assert_eq!(r.word_prob(0, &[]).unwrap(), ratio(1, 1));
        assert!(matches!(gpts_to_expr(&g, "nope"), Err(SolveError::Gpts(_))));
    }
}
