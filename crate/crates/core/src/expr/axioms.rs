//! Axiom schemas of the equational theory, as instantiable templates.
//!
//! Instances are checked semantically elsewhere (every instance must relate
//! language-equivalent expressions); nothing here performs proof search.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::AxiomError;
use crate::prob::{complement, is_probability, Prob};

use super::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomSchema {
    /// `e ≡ e +[p] e`
    C1,
    /// `e ≡ e +[1] f`
    C2,
    /// `e +[p] f ≡ f +[1-p] e`
    C3,
    /// `(e +[p] f) +[q] g ≡ e +[pq] (f +[(1-p)q/(1-pq)] g)`
    C4,
    /// `(e +[p] f) ; g ≡ e;g +[p] f;g`
    D1,
    /// `e ; (f +[p] g) ≡ e;f +[p] e;g`
    D2,
    /// `0 ; e ≡ 0`
    ZeroSeq,
    /// `e ; 0 ≡ 0`
    SeqZero,
    /// `1 ; e ≡ e`
    OneSeq,
    /// `e ; 1 ≡ e`
    SeqOne,
    /// `e ; (f ; g) ≡ (e ; f) ; g`
    Assoc,
    /// `e;e^[p] +[p] 1 ≡ e^[p]`
    Unroll,
    /// `(e +[p] 1)^[q] ; 1 ≡ e^[pq/(1-(1-p)q)]`
    Tight,
    /// `1^[1] ≡ 0`
    Div,
    /// From `g ≡ e;g +[p] f` and `E(e) = 0` conclude `g ≡ e^[p];f`.
    Unique,
}

/// Metavariable assignment. Unused entries are ignored.
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    pub e: Option<Expr>,
    pub f: Option<Expr>,
    pub g: Option<Expr>,
    pub p: Option<Prob>,
    pub q: Option<Prob>,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 15] = [
        AxiomSchema::C1,
        AxiomSchema::C2,
        AxiomSchema::C3,
        AxiomSchema::C4,
        AxiomSchema::D1,
        AxiomSchema::D2,
        AxiomSchema::ZeroSeq,
        AxiomSchema::SeqZero,
        AxiomSchema::OneSeq,
        AxiomSchema::SeqOne,
        AxiomSchema::Assoc,
        AxiomSchema::Unroll,
        AxiomSchema::Tight,
        AxiomSchema::Div,
        AxiomSchema::Unique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::C1 => "C1",
            AxiomSchema::C2 => "C2",
            AxiomSchema::C3 => "C3",
            AxiomSchema::C4 => "C4",
            AxiomSchema::D1 => "D1",
            AxiomSchema::D2 => "D2",
            AxiomSchema::ZeroSeq => "0S",
            AxiomSchema::SeqZero => "S0",
            AxiomSchema::OneSeq => "1S",
            AxiomSchema::SeqOne => "S1",
            AxiomSchema::Assoc => "S",
            AxiomSchema::Unroll => "Unroll",
            AxiomSchema::Tight => "Tight",
            AxiomSchema::Div => "Div",
            AxiomSchema::Unique => "Unique",
        }
    }

    /// Expression metavariables the schema reads. For [`AxiomSchema::Unique`],
    /// `g` is optional (see [`AxiomSchema::instantiate`]).
    pub fn expr_vars(self) -> &'static [&'static str] {
        use AxiomSchema::*;
        match self {
            C1 | ZeroSeq | SeqZero | OneSeq | SeqOne | Unroll | Tight => &["e"],
            C2 | C3 => &["e", "f"],
            C4 | D1 | D2 | Assoc => &["e", "f", "g"],
            Unique => &["e", "f"],
            Div => &[],
        }
    }

    pub fn prob_vars(self) -> &'static [&'static str] {
        use AxiomSchema::*;
        match self {
            C1 | C3 | D1 | D2 | Unroll | Unique => &["p"],
            C4 | Tight => &["p", "q"],
            _ => &[],
        }
    }

    /// Whether instantiation requires `E(e) = 0`.
    pub fn has_side_condition(self) -> bool {
        self == AxiomSchema::Unique
    }

    /// Substitutes the bindings into the schema and returns `(lhs, rhs)`.
    ///
    /// For `Unique` the pair is the conclusion `(g, e^[p];f)`. When `g` is not
    /// bound it defaults to `e^[p];f` itself; use [`AxiomSchema::premise`] to
    /// obtain the hypothesis that `g` must satisfy.
    pub fn instantiate(self, b: &Bindings) -> Result<(Expr, Expr), AxiomError> {
        let schema = self.name();
        let expr =
            |var: &'static str, slot: &Option<Expr>| slot.clone().ok_or(AxiomError::MissingBinding { schema, var });
        let prob = |var: &'static str, slot: &Option<Prob>| {
            let p = slot.clone().ok_or(AxiomError::MissingBinding { schema, var })?;
            if is_probability(&p) {
                Ok(p)
            } else {
                Err(AxiomError::OutOfRange {
                    schema,
                    var,
                    value: p.to_string(),
                })
            }
        };
        use AxiomSchema::*;
        let pair = match self {
            C1 => {
                let (e, p) = (expr("e", &b.e)?, prob("p", &b.p)?);
                (e.clone(), Expr::choice(e.clone(), p, e))
            }
            C2 => {
                let (e, f) = (expr("e", &b.e)?, expr("f", &b.f)?);
                (e.clone(), Expr::choice(e, Prob::one(), f))
            }
            C3 => {
                let (e, f, p) = (expr("e", &b.e)?, expr("f", &b.f)?, prob("p", &b.p)?);
                let p_bar = complement(&p);
                (Expr::choice(e.clone(), p, f.clone()), Expr::choice(f, p_bar, e))
            }
            C4 => {
                let (e, f, g) = (expr("e", &b.e)?, expr("f", &b.f)?, expr("g", &b.g)?);
                let (p, q) = (prob("p", &b.p)?, prob("q", &b.q)?);
                let pq = &p * &q;
                let denom = Prob::one() - &pq;
                if denom.is_zero() {
                    return Err(AxiomError::Undefined {
                        schema,
                        reason: "1 - pq = 0".into(),
                    });
                }
                let inner = complement(&p) * &q / denom;
                (
                    Expr::choice(Expr::choice(e.clone(), p, f.clone()), q, g.clone()),
                    Expr::choice(e, pq, Expr::choice(f, inner, g)),
                )
            }
            D1 => {
                let (e, f, g) = (expr("e", &b.e)?, expr("f", &b.f)?, expr("g", &b.g)?);
                let p = prob("p", &b.p)?;
                (
                    Expr::seq(Expr::choice(e.clone(), p.clone(), f.clone()), g.clone()),
                    Expr::choice(Expr::seq(e, g.clone()), p, Expr::seq(f, g)),
                )
            }
            D2 => {
                let (e, f, g) = (expr("e", &b.e)?, expr("f", &b.f)?, expr("g", &b.g)?);
                let p = prob("p", &b.p)?;
                (
                    Expr::seq(e.clone(), Expr::choice(f.clone(), p.clone(), g.clone())),
                    Expr::choice(Expr::seq(e.clone(), f), p, Expr::seq(e, g)),
                )
            }
            ZeroSeq => {
                let e = expr("e", &b.e)?;
                (Expr::seq(Expr::zero(), e), Expr::zero())
            }
            SeqZero => {
                let e = expr("e", &b.e)?;
                (Expr::seq(e, Expr::zero()), Expr::zero())
            }
            OneSeq => {
                let e = expr("e", &b.e)?;
                (Expr::seq(Expr::one(), e.clone()), e)
            }
            SeqOne => {
                let e = expr("e", &b.e)?;
                (Expr::seq(e.clone(), Expr::one()), e)
            }
            Assoc => {
                let (e, f, g) = (expr("e", &b.e)?, expr("f", &b.f)?, expr("g", &b.g)?);
                (
                    Expr::seq(e.clone(), Expr::seq(f.clone(), g.clone())),
                    Expr::seq(Expr::seq(e, f), g),
                )
            }
            Unroll => {
                let (e, p) = (expr("e", &b.e)?, prob("p", &b.p)?);
                let looped = Expr::star(e.clone(), p.clone());
                (Expr::choice(Expr::seq(e, looped.clone()), p, Expr::one()), looped)
            }
            Tight => {
                let e = expr("e", &b.e)?;
                let (p, q) = (prob("p", &b.p)?, prob("q", &b.q)?);
                let denom = Prob::one() - complement(&p) * &q;
                if denom.is_zero() {
                    return Err(AxiomError::Undefined {
                        schema,
                        reason: "1 - (1-p)q = 0".into(),
                    });
                }
                let tightened = &p * &q / denom;
                (
                    Expr::seq(Expr::star(Expr::choice(e.clone(), p, Expr::one()), q), Expr::one()),
                    Expr::star(e, tightened),
                )
            }
            Div => (Expr::star(Expr::one(), Prob::one()), Expr::zero()),
            Unique => {
                let (e, f, p) = (expr("e", &b.e)?, expr("f", &b.f)?, prob("p", &b.p)?);
                check_productive(schema, &e)?;
                let solution = Expr::seq(Expr::star(e, p), f);
                let g = b.g.clone().unwrap_or_else(|| solution.clone());
                (g, solution)
            }
        };
        Ok(pair)
    }

    /// The hypothesis `(g, e;g +[p] f)` of the `Unique` rule; `None` for the
    /// plain equational schemas.
    pub fn premise(self, b: &Bindings) -> Result<Option<(Expr, Expr)>, AxiomError> {
        if self != AxiomSchema::Unique {
            return Ok(None);
        }
        let (g, solution) = self.instantiate(b)?;
        let (e, p, f) = match solution.kind() {
            super::ExprKind::Seq(looped, f) => match looped.kind() {
                super::ExprKind::Star(e, p) => (e.clone(), p.clone(), f.clone()),
                _ => unreachable!("Unique conclusion is e^[p];f"),
            },
            _ => unreachable!("Unique conclusion is e^[p];f"),
        };
        Ok(Some((g.clone(), Expr::choice(Expr::seq(e, g), p, f))))
    }
}

fn check_productive(schema: &'static str, e: &Expr) -> Result<(), AxiomError> {
    let weight = e.termination_weight();
    if weight.is_zero() {
        Ok(())
    } else {
        Err(AxiomError::SideCondition {
            schema,
            value: weight.to_string(),
        })
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSchema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AxiomSchema::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom schema `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Letter};
    use crate::prob::ratio;

    fn a() -> Expr {
        Expr::act(Letter::new('a').unwrap())
    }

    #[test]
    fn unroll_instance() {
        let b = Bindings {
            e: Some(a()),
            p: Some(ratio(1, 4)),
            ..Default::default()
        };
        let (lhs, rhs) = AxiomSchema::Unroll.instantiate(&b).unwrap();
        let looped = Expr::star(a(), ratio(1, 4));
        assert_eq!(
            lhs,
            Expr::choice(Expr::seq(a(), looped.clone()), ratio(1, 4), Expr::one())
        );
        assert_eq!(rhs, looped);
    }

    #[test]
    fn div_needs_no_bindings() {
        let (lhs, rhs) = AxiomSchema::Div.instantiate(&Bindings::default()).unwrap();
        assert_eq!(lhs, Expr::star(Expr::one(), ratio(1, 1)));
        assert_eq!(rhs, Expr::zero());
    }

    #[test]
    fn divided_schemas_reject_zero_denominators() {
        let b = Bindings {
            e: Some(a()),
            f: Some(a()),
            g: Some(a()),
            p: Some(ratio(1, 1)),
            q: Some(ratio(1, 1)),
        };
        assert!(matches!(
            AxiomSchema::C4.instantiate(&b),
            Err(AxiomError::Undefined { .. })
        ));
        let b = Bindings {
            p: Some(ratio(0, 1)),
            q: Some(ratio(1, 1)),
            ..b
        };
        assert!(matches!(
            AxiomSchema::Tight.instantiate(&b),
            Err(AxiomError::Undefined { .. })
        ));
    }

    #[test]
    fn tight_rescales_the_loop_weight() {
        let b = Bindings {
            e: Some(a()),
            p: Some(ratio(1, 2)),
            q: Some(ratio(1, 2)),
            ..Default::default()
        };
        let (lhs, rhs) = AxiomSchema::Tight.instantiate(&b).unwrap();
        assert_eq!(lhs, parse("(a +[1/2] 1)^[1/2] ; 1").unwrap());
        assert_eq!(rhs, parse("a^[1/3]").unwrap());
    }

    #[test]
    fn unique_checks_side_condition() {
        let b = Bindings {
            e: Some(Expr::one()),
            f: Some(a()),
            p: Some(ratio(1, 2)),
            ..Default::default()
        };
        assert!(matches!(
            AxiomSchema::Unique.instantiate(&b),
            Err(AxiomError::SideCondition { .. })
        ));
        let b = Bindings { e: Some(a()), ..b };
        let (g, rhs) = AxiomSchema::Unique.instantiate(&b).unwrap();
        assert_eq!(g, rhs);
        let (pg, body) = AxiomSchema::Unique.premise(&b).unwrap().unwrap();
        assert_eq!(pg, g);
        assert_eq!(body, Expr::choice(Expr::seq(a(), g), ratio(1, 2), a()));
    }

    #[test]
    fn missing_and_out_of_range_bindings() {
        assert!(matches!(
            AxiomSchema::C1.instantiate(&Bindings::default()),
            Err(AxiomError::MissingBinding { var: "e", .. })
        ));
        let b = Bindings {
            e: Some(a()),
            p: Some(ratio(3, 2)),
            ..Default::default()
        };
        assert!(matches!(
            AxiomSchema::C1.instantiate(&b),
            Err(AxiomError::OutOfRange { var: "p", .. })
        ));
    }

    #[test]
    fn names_round_trip() {
        for schema in AxiomSchema::ALL {
            assert_eq!(schema.name().parse::<AxiomSchema>().unwrap(), schema);
        }
    }
}
