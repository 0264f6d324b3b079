//! Recursive-descent parser for formula text.
//!
//! ```text
//! formula  ::= disj
//! disj     ::= conj ("|" conj)*
//! conj     ::= unary ("&" unary)*
//! unary    ::= "!" unary | "(" formula ")" | basic
//! basic    ::= expr ( ">=" | "<=" | ">" | "<" | "=" ) expr
//! expr     ::= ["+" | "-"] item (("+" | "-") item)*
//! item     ::= number ["*"] "ED" "(" prop ")" | "ED" "(" prop ")" | number
//! prop     ::= pconj ("|" pconj)*
//! pconj    ::= punary ("&" punary)*
//! punary   ::= "!" punary | "(" prop ")" | ident | "true" | "false"
//! ```
//!
//! Both sides of a comparison may mix ED summands and constants; the result
//! is normalized to `term relation bound` with all summands on the left.

use num_traits::{One, Zero};

use super::ast::{BasicEdFormula, EdFormula, EdTerm, PropFormula, Relation, Summand};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("syntax error at {position}: expected {expected}, found {found}")]
    Unexpected {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown token `{token}` at {position}")]
    UnknownToken { position: usize, token: String },
    #[error("unsupported construct at {position}: {what}")]
    Unsupported { position: usize, what: String },
}

impl SyntaxError {
    pub fn position(&self) -> usize {
        match self {
            SyntaxError::Unexpected { position, .. }
            | SyntaxError::UnknownToken { position, .. }
            | SyntaxError::Unsupported { position, .. } => *position,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(Rational),
    Ed,
    True,
    False,
    Not,
    And,
    Or,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Rel(Relation),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Ed => "`ED`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Rel(r) => format!("`{}`", r.symbol()),
            Tok::End => "end of input".into(),
        }
    }
}

/// Character offset of each token, plus the end-of-input sentinel.
fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '!' | '¬' | '~' => (Tok::Not, 1),
            '&' | '∧' => (Tok::And, if two == "&&" { 2 } else { 1 }),
            '|' | '∨' => (Tok::Or, if two == "||" { 2 } else { 1 }),
            '+' => (Tok::Plus, 1),
            '-' | '−' => (Tok::Minus, 1),
            '*' | '·' => (Tok::Star, 1),
            '≥' => (Tok::Rel(Relation::Ge), 1),
            '≤' => (Tok::Rel(Relation::Le), 1),
            '>' if two == ">=" => (Tok::Rel(Relation::Ge), 2),
            '<' if two == "<=" => (Tok::Rel(Relation::Le), 2),
            '=' if two == "==" => (Tok::Rel(Relation::Eq), 2),
            '>' => (Tok::Rel(Relation::Gt), 1),
            '<' => (Tok::Rel(Relation::Lt), 1),
            '=' => (Tok::Rel(Relation::Eq), 1),
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '/' {
                    j += 1;
                    while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                        j += 1;
                    }
                }
                let lit: String = chars[i..j].iter().collect();
                let value = parse_rational(&lit).map_err(|_| SyntaxError::UnknownToken {
                    position: start,
                    token: lit.clone(),
                })?;
                (Tok::Number(value), j - i)
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "ED" => Tok::Ed,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word),
                };
                (tok, j - i)
            }
            other => {
                return Err(SyntaxError::UnknownToken {
                    position: start,
                    token: other.to_string(),
                })
            }
        };
        out.push((start, tok));
        i += width;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> SyntaxError {
        SyntaxError::Unexpected {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn formula(&mut self) -> Result<EdFormula, SyntaxError> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<EdFormula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<EdFormula, SyntaxError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.basic().map(EdFormula::Basic),
        }
    }

    fn basic(&mut self) -> Result<BasicEdFormula, SyntaxError> {
        let start = self.offset();
        let (mut summands, lhs_const) = self.expr()?;
        let relation = match self.peek() {
            Tok::Rel(r) => *r,
            _ => return Err(self.unexpected("a comparison (>=, <=, >, <, =)")),
        };
        self.bump();
        let (rhs, rhs_const) = self.expr()?;
        summands.extend(rhs.into_iter().map(|s| Summand {
            coeff: -s.coeff,
            arg: s.arg,
        }));
        if summands.is_empty() {
            return Err(SyntaxError::Unsupported {
                position: start,
                what: "comparison without any ED term".into(),
            });
        }
        Ok(BasicEdFormula::new(
            EdTerm { summands },
            relation,
            rhs_const - lhs_const,
        ))
    }

    /// Linear expression: ED summands plus the sum of bare constants.
    fn expr(&mut self) -> Result<(Vec<Summand>, Rational), SyntaxError> {
        let mut summands = Vec::new();
        let mut constant = Rational::zero();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let coeff = match self.peek().clone() {
                Tok::Number(n) => {
                    self.bump();
                    match self.peek() {
                        Tok::Star => {
                            self.bump();
                            if *self.peek() != Tok::Ed {
                                return Err(self.unexpected("`ED`"));
                            }
                            Some(n)
                        }
                        Tok::Ed => Some(n),
                        _ => {
                            constant += if negate { -n } else { n };
                            None
                        }
                    }
                }
                Tok::Ed => Some(Rational::one()),
                _ => return Err(self.unexpected("a number or `ED(`")),
            };
            if let Some(c) = coeff {
                self.expect(Tok::Ed, "`ED`")?;
                self.expect(Tok::LParen, "`(` after ED")?;
                let arg = self.prop()?;
                self.expect(Tok::RParen, "`)` closing ED(")?;
                summands.push(Summand {
                    coeff: if negate { -c } else { c },
                    arg,
                });
            }
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
        }
        Ok((summands, constant))
    }

    fn prop(&mut self) -> Result<PropFormula, SyntaxError> {
        let mut lhs = self.pconj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.pconj()?);
        }
        Ok(lhs)
    }

    fn pconj(&mut self) -> Result<PropFormula, SyntaxError> {
        let mut lhs = self.punary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.punary()?);
        }
        Ok(lhs)
    }

    fn punary(&mut self) -> Result<PropFormula, SyntaxError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.punary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let p = self.prop()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(PropFormula::Atom(name))
            }
            Tok::True => {
                self.bump();
                Ok(PropFormula::True)
            }
            Tok::False => {
                self.bump();
                Ok(PropFormula::False)
            }
            Tok::Ed => Err(SyntaxError::Unsupported {
                position: self.offset(),
                what: "ED may not be nested inside ED".into(),
            }),
            _ => Err(self.unexpected("a proposition")),
        }
    }
}

/// Parses one formula.
pub fn parse(text: &str) -> Result<EdFormula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses a standalone propositional formula.
pub fn parse_prop(text: &str) -> Result<PropFormula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.prop()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// One formula per non-blank line; `#` starts a comment. Errors carry the
/// 1-based line number.
pub fn parse_lines(text: &str) -> Result<Vec<EdFormula>, (usize, SyntaxError)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| parse(body).map_err(|e| (i + 1, e)))
        })
        .collect()
}
