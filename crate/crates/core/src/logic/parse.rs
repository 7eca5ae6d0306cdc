//! Parser for the ASCII formula and action syntax.
//!
//! ```text
//! formula ::= impl ("<->" impl)*
//! impl    ::= or [ "->" impl ]
//! or      ::= and ("|" and)*
//! and     ::= unary ("&" unary)*
//! unary   ::= "~" unary | "[" action "]" unary | "<" action ">" unary | atom
//! atom    ::= "true" | "false" | PROP | "(" formula ")"
//! action  ::= seq ("|" seq)*
//! seq     ::= star (";" star)*
//! star    ::= prim "*"*
//! prim    ::= "U" | "new" | "new!" | "test(" formula ")"
//!           | "setg(" PROP "," formula ")" | "setl(" PROP "," formula ")"
//!           | "add(" FEAT "," formula "," formula ")"
//!           | "del(" FEAT "," formula "," formula ")"
//!           | FEAT | "(" action ")"
//! ```
//!
//! Propositions and features share one lexical class (identifiers,
//! integers, or `+`); the grammar position disambiguates.

use super::{Formula, ModalAction};
use crate::sym::Sym;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{msg} at offset {offset}")]
pub struct FormulaParseError {
    pub msg: String,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LBrack,
    RBrack,
    Lt,
    Gt,
    LParen,
    RParen,
    Comma,
    Semi,
    Star,
    Bang,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaParseError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '#' => {
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_' || bytes[i] == '\'')
                {
                    i += 1;
                }
                out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(bytes[start..i].iter().collect()), start));
            }
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '~' => {
                out.push((Tok::Tilde, i));
                i += 1;
            }
            '&' => {
                out.push((Tok::Amp, i));
                i += 1;
            }
            '|' => {
                out.push((Tok::Pipe, i));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&'>') {
                    out.push((Tok::Arrow, i));
                    i += 2;
                } else {
                    return Err(FormulaParseError { msg: "expected '->'".into(), offset: i });
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&'-') && bytes.get(i + 2) == Some(&'>') {
                    out.push((Tok::Iff, i));
                    i += 3;
                } else {
                    out.push((Tok::Lt, i));
                    i += 1;
                }
            }
            '>' => {
                out.push((Tok::Gt, i));
                i += 1;
            }
            '[' => {
                out.push((Tok::LBrack, i));
                i += 1;
            }
            ']' => {
                out.push((Tok::RBrack, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, i));
                i += 1;
            }
            ';' => {
                out.push((Tok::Semi, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '!' => {
                out.push((Tok::Bang, i));
                i += 1;
            }
            '$' => {
                return Err(FormulaParseError {
                    msg: "symbols starting with '$' are reserved for generated markers".into(),
                    offset: i,
                });
            }
            other => {
                return Err(FormulaParseError {
                    msg: format!("unexpected character '{other}'"),
                    offset: i,
                });
            }
        }
    }
    out.push((Tok::Eof, bytes.len()));
    Ok(out)
}

struct P {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl P {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> FormulaParseError {
        FormulaParseError { msg: msg.into(), offset: self.offset() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    /// A proposition or feature symbol.
    fn symbol(&mut self, what: &str) -> Result<Sym, FormulaParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Sym::new(s))
            }
            Tok::Int(s) => {
                self.bump();
                Ok(Sym::new(s))
            }
            Tok::Plus => {
                self.bump();
                Ok(Sym::new("+"))
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, FormulaParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBrack => {
                self.bump();
                let action = self.action()?;
                self.expect(Tok::RBrack, "']'")?;
                Ok(Formula::boxed(action, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let action = self.action()?;
                self.expect(Tok::Gt, "'>'")?;
                Ok(Formula::diamond(action, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, FormulaParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::truth())
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(_) | Tok::Int(_) | Tok::Plus => {
                Ok(Formula::Prop(self.symbol("a proposition")?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            _ => Err(self.err("expected a formula")),
        }
    }

    fn action(&mut self) -> Result<ModalAction, FormulaParseError> {
        let mut lhs = self.action_seq()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.action_seq()?;
            lhs = ModalAction::choice(lhs, rhs);
        }
        Ok(lhs)
    }

    fn action_seq(&mut self) -> Result<ModalAction, FormulaParseError> {
        let mut lhs = self.action_star()?;
        while *self.peek() == Tok::Semi {
            self.bump();
            let rhs = self.action_star()?;
            lhs = ModalAction::seq(lhs, rhs);
        }
        Ok(lhs)
    }

    fn action_star(&mut self) -> Result<ModalAction, FormulaParseError> {
        let mut a = self.action_prim()?;
        while *self.peek() == Tok::Star {
            self.bump();
            a = ModalAction::star(a);
        }
        Ok(a)
    }

    fn action_prim(&mut self) -> Result<ModalAction, FormulaParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let a = self.action()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(a)
            }
            Tok::Ident(s) => match s.as_str() {
                "U" => {
                    self.bump();
                    Ok(ModalAction::Universal)
                }
                "new" => {
                    self.bump();
                    if *self.peek() == Tok::Bang {
                        self.bump();
                        Ok(ModalAction::NewNodeGo)
                    } else {
                        Ok(ModalAction::NewNode)
                    }
                }
                "test" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(ModalAction::test(f))
                }
                "setg" | "setl" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let p = self.symbol("a proposition")?;
                    self.expect(Tok::Comma, "','")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(if s == "setg" {
                        ModalAction::assign_global(p, f)
                    } else {
                        ModalAction::assign_local(p, f)
                    })
                }
                "add" | "del" => {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    let a = self.symbol("a feature")?;
                    self.expect(Tok::Comma, "','")?;
                    let from = self.formula()?;
                    self.expect(Tok::Comma, "','")?;
                    let to = self.formula()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(if s == "add" {
                        ModalAction::add_edges(a, from, to)
                    } else {
                        ModalAction::del_edges(a, from, to)
                    })
                }
                _ => {
                    self.bump();
                    Ok(ModalAction::Feature(Sym::new(s)))
                }
            },
            Tok::Int(_) | Tok::Plus => Ok(ModalAction::Feature(self.symbol("a feature")?)),
            _ => Err(self.err("expected an action")),
        }
    }
}

/// Parse a formula.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaParseError> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

/// Parse a bare action.
pub fn parse_action(text: &str) -> Result<ModalAction, FormulaParseError> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let a = p.action()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::sym;

    #[test]
    fn box_of_test() {
        let f = parse_formula("[test(p)]q").unwrap();
        assert_eq!(
            f,
            Formula::boxed(ModalAction::test(Formula::prop("p")), Formula::prop("q"))
        );
    }

    #[test]
    fn irreflexivity_formula() {
        let f = parse_formula("[setg(w,false)][U][setl(w,true)][a]~w").unwrap();
        let expected = Formula::boxed(
            ModalAction::assign_global(sym("w"), Formula::False),
            Formula::boxed(
                ModalAction::Universal,
                Formula::boxed(
                    ModalAction::assign_local(sym("w"), Formula::truth()),
                    Formula::boxed(
                        ModalAction::feature("a"),
                        Formula::not(Formula::prop("w")),
                    ),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn diamond_star_sequence() {
        let f = parse_formula("<(a;b)*>done").unwrap();
        assert_eq!(
            f,
            Formula::diamond(
                ModalAction::star(ModalAction::seq(
                    ModalAction::feature("a"),
                    ModalAction::feature("b")
                )),
                Formula::prop("done")
            )
        );
    }

    #[test]
    fn precedence_follows_the_usual_rules() {
        // ~ binds tighter than &, which binds tighter than |, then ->.
        let f = parse_formula("~p & q | r -> s").unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::and(Formula::not(Formula::prop("p")), Formula::prop("q")),
                Formula::prop("r"),
            ),
            Formula::prop("s"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn action_precedence() {
        // * > ; > |
        let a = parse_action("a;b*|U").unwrap();
        let expected = ModalAction::choice(
            ModalAction::seq(
                ModalAction::feature("a"),
                ModalAction::star(ModalAction::feature("b")),
            ),
            ModalAction::Universal,
        );
        assert_eq!(a, expected);
    }

    #[test]
    fn new_and_new_go() {
        assert_eq!(parse_action("new").unwrap(), ModalAction::NewNode);
        assert_eq!(parse_action("new!").unwrap(), ModalAction::NewNodeGo);
    }

    #[test]
    fn numeric_features_and_plus_proposition() {
        let f = parse_formula("<1>+ & [2]true").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::diamond(ModalAction::feature("1"), Formula::prop("+")),
                Formula::boxed(ModalAction::feature("2"), Formula::truth()),
            )
        );
    }

    #[test]
    fn errors_have_offsets() {
        let err = parse_formula("[a q").unwrap_err();
        assert!(err.offset > 0);
        assert!(parse_formula("p $q").is_err());
    }
}
