//! Randomized soundness check for the axiom schemas.
//!
//! Each trial draws bindings, instantiates the schema and decides language
//! equivalence of the two sides. Instances that are undefined (for example
//! `1 - pq = 0` in C4) are redrawn and do not count as trials.

use rand::Rng;

use crate::equiv::{expr_equiv, EquivVerdict};
use crate::expr::{AxiomSchema, Bindings, Expr};
use crate::prob::complement;
use crate::random::{random_expr, random_prob, random_productive_expr, GenConfig};
use crate::solver::LeftAffineSystem;

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub lhs: Expr,
    pub rhs: Expr,
    pub verdict: EquivVerdict,
}

#[derive(Debug, Clone)]
pub struct SchemaReport {
    pub schema: AxiomSchema,
    pub trials: usize,
    pub passed: usize,
    /// Undefined instances that were redrawn.
    pub redrawn: usize,
    pub first_failure: Option<Counterexample>,
}

impl SchemaReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

/// Draws bindings for `schema`. For `Unique`, `e` is productive and `g`
/// is either the solution of the one-unknown system `h ≡ p·e;h ⊕ (1-p)·f`
/// or that solution unrolled once.
pub fn random_bindings<R: Rng + ?Sized>(rng: &mut R, schema: AxiomSchema, cfg: &GenConfig) -> Bindings {
    let mut b = Bindings {
        e: Some(random_expr(rng, cfg)),
        f: Some(random_expr(rng, cfg)),
        g: Some(random_expr(rng, cfg)),
        p: Some(random_prob(rng, cfg.max_denominator)),
        q: Some(random_prob(rng, cfg.max_denominator)),
    };
    if schema == AxiomSchema::Unique {
        let e = random_productive_expr(rng, cfg);
        let (f, p) = (b.f.clone().unwrap(), b.p.clone().unwrap());
        let system = LeftAffineSystem::new(
            vec!["h".into()],
            vec![vec![e.clone()]],
            vec![vec![p.clone()]],
            vec![f.clone()],
            vec![complement(&p)],
        )
        .expect("productive e gives a valid system");
        let solved = system.solve().expect("one-unknown systems solve")[0].clone();
        b.g = Some(if rng.gen_bool(0.5) {
            solved
        } else {
            Expr::choice(Expr::seq(e.clone(), solved), p, f)
        });
        b.e = Some(e);
    }
    b
}

/// Runs `trials` defined instances of `schema`. For `Unique` a trial
/// passes when both the premise and the conclusion hold.
pub fn check_schema<R: Rng + ?Sized>(rng: &mut R, schema: AxiomSchema, trials: usize, cfg: &GenConfig) -> SchemaReport {
    let mut report = SchemaReport {
        schema,
        trials,
        passed: 0,
        redrawn: 0,
        first_failure: None,
    };
    let mut done = 0;
    while done < trials {
        let b = random_bindings(rng, schema, cfg);
        let (lhs, rhs) = match schema.instantiate(&b) {
            Ok(pair) => pair,
            Err(_) => {
                report.redrawn += 1;
                continue;
            }
        };
        done += 1;
        let mut pairs = vec![(lhs, rhs)];
        if let Ok(Some(premise)) = schema.premise(&b) {
            pairs.insert(0, premise);
        }
        let failure = pairs.into_iter().find_map(|(l, r)| {
            let verdict = expr_equiv(&l, &r);
            (!verdict.is_equal()).then_some(Counterexample {
                lhs: l,
                rhs: r,
                verdict,
            })
        });
        match failure {
            None => report.passed += 1,
            Some(c) => {
                report.first_failure.get_or_insert(c);
            }
        }
    }
    report
}

pub fn check_all<R: Rng + ?Sized>(rng: &mut R, trials: usize, cfg: &GenConfig) -> Vec<SchemaReport> {
    AxiomSchema::ALL
        .into_iter()
        .map(|s| check_schema(rng, s, trials, cfg))
        .collect()
}
