use std::fmt;

use super::{Expr, ExprKind};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Choice,
    Seq,
    Star,
}

fn level(e: &Expr) -> Level {
    match e.kind() {
        ExprKind::Choice(..) => Level::Choice,
        ExprKind::Seq(..) => Level::Seq,
        _ => Level::Star,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: Level) -> fmt::Result {
    if level(e) < min {
        write!(f, "(")?;
        write_expr(f, e)?;
        write!(f, ")")
    } else {
        write_expr(f, e)
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    match e.kind() {
        ExprKind::Zero => write!(f, "0"),
        ExprKind::One => write!(f, "1"),
        ExprKind::Act(a) => write!(f, "{a}"),
        ExprKind::Choice(l, p, r) => {
            write_at(f, l, Level::Seq)?;
            write!(f, " +[{p}] ")?;
            write_at(f, r, Level::Choice)
        }
        ExprKind::Seq(l, r) => {
            write_at(f, l, Level::Star)?;
            write!(f, " ; ")?;
            write_at(f, r, Level::Seq)
        }
        ExprKind::Star(b, p) => {
            write_at(f, b, Level::Star)?;
            write!(f, "^[{p}]")
        }
    }
}

/// Renders in the ASCII grammar accepted by [`super::parse`]: `+[p]` for
/// choice, `;` for sequencing, `^[p]` for loops, with the minimum number of
/// parentheses.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}
