//! Recursive-descent parser for the ASCII expression grammar:
//!
//! ```text
//! expr   := choice
//! choice := seq ("+[" prob "]" choice)?
//! seq    := star (";" seq)?
//! star   := atom ("^[" prob "]")*
//! atom   := "0" | "1" | letter | "(" expr ")"
//! ```
//!
//! `⊕[p]` is accepted for `+[p]` and `^{[p]}` for `^[p]`.

use std::iter::Peekable;
use std::str::CharIndices;

use crate::error::{ParseError, ParseErrorKind};
use crate::prob::{parse_prob, Prob};

use super::{Alphabet, Expr, Letter};

/// Parses an expression over any lowercase letters.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    Parser::new(text, None).parse_all()
}

/// Parses an expression, rejecting letters outside `alphabet`.
pub fn parse_with_alphabet(text: &str, alphabet: &Alphabet) -> Result<Expr, ParseError> {
    Parser::new(text, Some(alphabet)).parse_all()
}

struct Parser<'a> {
    chars: Peekable<CharIndices<'a>>,
    /// Character (not byte) offset of the next char.
    pos: usize,
    alphabet: Option<&'a Alphabet>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, alphabet: Option<&'a Alphabet>) -> Self {
        Parser {
            chars: text.char_indices().peekable(),
            pos: 0,
            alphabet,
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos,
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next().map(|(_, c)| c);
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected(what))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn parse_all(mut self) -> Result<Expr, ParseError> {
        let e = self.choice()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => Err(self.err(ParseErrorKind::Unexpected(c))),
        }
    }

    fn choice(&mut self) -> Result<Expr, ParseError> {
        let mut operands = vec![self.seq()?];
        let mut weights = Vec::new();
        while matches!(self.peek(), Some('+') | Some('⊕')) {
            self.bump();
            self.expect('[', "[")?;
            weights.push(self.prob_until(']')?);
            operands.push(self.seq()?);
        }
        let mut acc = operands.pop().expect("at least one operand");
        while let Some(left) = operands.pop() {
            let p = weights.pop().expect("one weight per operator");
            acc = Expr::choice(left, p, acc);
        }
        Ok(acc)
    }

    fn seq(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.star()?];
        while self.peek() == Some(';') {
            self.bump();
            parts.push(self.star()?);
        }
        Ok(Expr::seq_all(parts))
    }

    fn star(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.peek() == Some('^') {
            self.bump();
            let p = match self.peek() {
                Some('[') => {
                    self.bump();
                    self.prob_until(']')?
                }
                Some('{') => {
                    self.bump();
                    self.expect('[', "[")?;
                    let p = self.prob_until(']')?;
                    self.expect('}', "}")?;
                    p
                }
                Some(_) => return Err(self.err(ParseErrorKind::Expected("["))),
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
            };
            e = Expr::star(e, p);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some('0') => {
                self.bump();
                Ok(Expr::zero())
            }
            Some('1') => {
                self.bump();
                Ok(Expr::one())
            }
            Some('(') => {
                self.bump();
                let e = self.choice()?;
                self.expect(')', ")")?;
                Ok(e)
            }
            Some(c) => match Letter::new(c) {
                Some(a) => {
                    if let Some(alphabet) = self.alphabet {
                        if !alphabet.contains(&a) {
                            return Err(self.err(ParseErrorKind::UnknownSymbol(c)));
                        }
                    }
                    self.bump();
                    Ok(Expr::act(a))
                }
                None => Err(self.err(ParseErrorKind::Unexpected(c))),
            },
        }
    }

    /// Reads a probability literal up to (and consuming) `close`.
    fn prob_until(&mut self, close: char) -> Result<Prob, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut literal = String::new();
        loop {
            match self.bump() {
                None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
                Some(c) if c == close => break,
                Some(c) => literal.push(c),
            }
        }
        parse_prob(&literal).map_err(|e| ParseError {
            position: start,
            kind: e.into(),
        })
    }
}
