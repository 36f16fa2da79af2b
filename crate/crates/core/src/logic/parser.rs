//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := unary (op unary)*          one operator kind per level
//! unary   := '~' unary | ('A'|'E') var unary | primary
//! primary := '(' formula ')' | 'true' | 'false' | atom
//! atom    := var '=' var | var '<' var ('<' var)* | NAME '(' var (',' var)* ')'
//! op      := '&' | '|' | '->'
//! ```

use super::formula::{Formula, Var};
use crate::error::{Error, Result};
use crate::structure::{is_variable_name, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Equals,
    Less,
    Ident(String),
}

struct Lexer;

impl Lexer {
    fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
        let bytes = text.as_bytes();
        let mut out = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let tok = match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'~' => Tok::Not,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'=' => Tok::Equals,
                b'<' => Tok::Less,
                b'-' if bytes.get(i + 1) == Some(&b'>') => {
                    i += 1;
                    Tok::Implies
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                        i += 1;
                    }
                    Tok::Ident(text[start..=i].to_string())
                }
                _ => {
                    return Err(Error::FormulaSyntax {
                        column: start + 1,
                        message: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
                    })
                }
            };
            i += 1;
            out.push((start, tok));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    sig: &'a Signature,
}

/// Parses `text` as a formula over `sig`.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        sig,
    };
    let f = p.sequence()?;
    if p.pos < p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(c, _)| *c) + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::FormulaSyntax {
            column: self.column(),
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn sequence(&mut self) -> Result<Formula> {
        let first = self.unary()?;
        let op = match self.peek() {
            Some(t @ (Tok::And | Tok::Or | Tok::Implies)) => t.clone(),
            _ => return Ok(first),
        };
        let mut items = vec![first];
        while self.peek() == Some(&op) {
            self.pos += 1;
            items.push(self.unary()?);
        }
        if matches!(self.peek(), Some(Tok::And | Tok::Or | Tok::Implies)) {
            return Err(self.error("mixed connectives need parentheses"));
        }
        match op {
            Tok::And => Ok(Formula::And(items)),
            Tok::Or => Ok(Formula::Or(items)),
            _ => {
                if items.len() != 2 {
                    return Err(self.error("`->` is binary; add parentheses"));
                }
                let b = items.pop().unwrap();
                let a = items.pop().unwrap();
                Ok(Formula::implies(a, b))
            }
        }
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Ident(q)) if (q == "A" || q == "E") && self.peek_at(1) != Some(&Tok::LParen) => {
                let universal = q == "A";
                self.pos += 1;
                let v = self.var()?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.sequence()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) if name == "true" => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some(Tok::Ident(name)) if name == "false" => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some(Tok::Ident(name)) if is_variable_name(&name) => self.infix_atom(),
            Some(Tok::Ident(name)) => self.prefix_atom(name),
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek() {
            Some(Tok::Ident(name)) if is_variable_name(name) => {
                let v = name[1..]
                    .parse()
                    .map_err(|_| self.error(format!("variable index in `{name}` is too large")))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a variable `v<k>`")),
        }
    }

    fn infix_atom(&mut self) -> Result<Formula> {
        let a = self.var()?;
        match self.peek() {
            Some(Tok::Equals) => {
                self.pos += 1;
                let b = self.var()?;
                Ok(Formula::eq(a, b))
            }
            Some(Tok::Less) => {
                if !self.sig.has_order_symbol() {
                    return Err(self.error("`<` is not declared in the signature"));
                }
                let mut chain = vec![a];
                while self.peek() == Some(&Tok::Less) {
                    self.pos += 1;
                    chain.push(self.var()?);
                }
                Ok(Formula::and(chain.windows(2).map(|w| Formula::less(w[0], w[1]))))
            }
            _ => Err(self.error("expected `=` or `<` after a variable")),
        }
    }

    fn prefix_atom(&mut self, name: String) -> Result<Formula> {
        let arity = self
            .sig
            .arity_of(&name)
            .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
        self.pos += 1;
        self.expect(Tok::LParen, "`(` after a relation symbol")?;
        let mut args = vec![self.var()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.var()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != arity {
            return Err(Error::ArityMismatch {
                symbol: name,
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Formula::Atom { symbol: name, args })
    }
}

/// Checks that every atom of `f` names a symbol of `sig` with the right arity.
pub fn check_against(f: &Formula, sig: &Signature) -> Result<()> {
    let mut err = None;
    f.visit_atoms(&mut |symbol, args| {
        if err.is_some() {
            return;
        }
        match sig.arity_of(symbol) {
            None => err = Some(Error::UnknownSymbol(symbol.to_string())),
            Some(a) if a != args.len() => {
                err = Some(Error::ArityMismatch {
                    symbol: symbol.to_string(),
                    expected: a,
                    found: args.len(),
                })
            }
            _ => {}
        }
    });
    err.map_or(Ok(()), Err)
}

/// The order signature, used for formulas over `<` alone.
pub fn parse_order_formula(text: &str) -> Result<Formula> {
    parse_formula(text, &Signature::order())
}
