//! Probabilistic regular expressions.
//!
//! Expressions combine actions with probabilistic choice `e +[p] f`,
//! sequencing `e ; f` and probabilistic loops `e^[p]`. Their semantics is a
//! generative probabilistic transition system (GPTS) built from Antimirov
//! derivatives. The crate also converts a GPTS state back into an
//! expression, decides language equivalence, and computes bisimilarity.
//!
//! Syntax and the solver work over exact rationals ([`Prob`]). Transition
//! systems, word probabilities and the equivalence checks are generic over
//! [`Weight`], so the same code runs on `f64` when exactness is not needed.
//!
//! ```
//! use pre_core::{expr_equiv, parse};
//!
//! let e = parse("a +[1/2] a").unwrap();
//! let f = parse("a").unwrap();
//! assert!(expr_equiv(&e, &f).is_equal());
//! ```

pub mod deriv;
pub mod dist;
pub mod equiv;
pub mod error;
pub mod expr;
pub mod gpts;
pub mod harness;
pub mod prob;
pub mod random;
pub mod solver;

pub use deriv::{derivative, derivative_automaton, fundamental_form, reachable, StateNaming};
pub use dist::SubDist;
pub use equiv::{bisim_classes, expr_equiv, lang_equiv, lang_equiv_named, EquivVerdict, Partition};
pub use error::{AxiomError, ChoiceError, GptsError, ParseError, ProbError, SolveError, SystemError};
pub use expr::{nary_choice, parse, parse_with_alphabet, Alphabet, AxiomSchema, Bindings, Expr, ExprKind, Letter};
pub use gpts::{Gpts, Output, Rpts};
pub use prob::{Prob, Weight};
pub use solver::{gpts_to_expr, system_of, LeftAffineSystem, Solution};

/// Exact GPTS, the default.
pub type ExactGpts = Gpts<Prob>;
/// GPTS with floating-point weights.
pub type FloatGpts = Gpts<f64>;
pub type ExactDist<T> = SubDist<T, Prob>;
pub type FloatDist<T> = SubDist<T, f64>;
