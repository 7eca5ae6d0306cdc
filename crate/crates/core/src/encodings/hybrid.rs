//! Hybrid-logic formulas, their evaluation, and the translation into the
//! modifier logic.
//!
//! Nominals name single nodes, state variables are bound to nodes by the
//! `down` binder, and `@` jumps to a named node. The translation turns a
//! nominal `'i` into a dedicated marker proposition `$nom_i`, a state
//! variable `?x` into `$var_x`, `@` into a universal diamond guarded by
//! the marker, and `down ?x.` into the pair of assignments that stamps
//! `$var_x` onto exactly the current node.

use crate::logic::{Formula, ModalAction};
use crate::sym::Sym;
use crate::termgraph::RootedTermgraph;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HybridFormula {
    Prop(Sym),
    Nominal(Sym),
    SVar(Sym),
    False,
    Not(Box<HybridFormula>),
    Or(Box<HybridFormula>, Box<HybridFormula>),
    BoxFeature(Sym, Box<HybridFormula>),
    BoxUniversal(Box<HybridFormula>),
    AtNominal(Sym, Box<HybridFormula>),
    AtSVar(Sym, Box<HybridFormula>),
    Down(Sym, Box<HybridFormula>),
}

impl HybridFormula {
    pub fn not(f: HybridFormula) -> Self {
        HybridFormula::Not(Box::new(f))
    }

    pub fn or(a: HybridFormula, b: HybridFormula) -> Self {
        HybridFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: HybridFormula, b: HybridFormula) -> Self {
        HybridFormula::not(HybridFormula::or(HybridFormula::not(a), HybridFormula::not(b)))
    }

    pub fn implies(a: HybridFormula, b: HybridFormula) -> Self {
        HybridFormula::or(HybridFormula::not(a), b)
    }

    pub fn truth() -> Self {
        HybridFormula::not(HybridFormula::False)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HybridError {
    #[error("state variable ?{0} is unbound")]
    UnboundVariable(Sym),
    #[error("nominal '{0} has no assigned node")]
    UnknownNominal(Sym),
    #[error("symbol {0} collides with the marker namespace")]
    MarkerCollision(Sym),
    #[error("{msg} at offset {offset}")]
    Parse { msg: String, offset: usize },
}

pub fn nominal_marker(name: &Sym) -> Sym {
    Sym::new(format!("$nom_{name}"))
}

pub fn svar_marker(name: &Sym) -> Sym {
    Sym::new(format!("$var_{name}"))
}

/// Translate into the modifier logic.
pub fn hybrid_translate(f: &HybridFormula) -> Result<Formula, HybridError> {
    check_symbols(f)?;
    Ok(translate(f))
}

fn check_symbols(f: &HybridFormula) -> Result<(), HybridError> {
    match f {
        HybridFormula::Prop(p) => {
            if p.is_reserved() {
                return Err(HybridError::MarkerCollision(p.clone()));
            }
            Ok(())
        }
        HybridFormula::Nominal(_) | HybridFormula::SVar(_) | HybridFormula::False => Ok(()),
        HybridFormula::Not(g) | HybridFormula::BoxUniversal(g) => check_symbols(g),
        HybridFormula::Or(a, b) => {
            check_symbols(a)?;
            check_symbols(b)
        }
        HybridFormula::BoxFeature(_, g)
        | HybridFormula::AtNominal(_, g)
        | HybridFormula::AtSVar(_, g)
        | HybridFormula::Down(_, g) => check_symbols(g),
    }
}

fn translate(f: &HybridFormula) -> Formula {
    match f {
        HybridFormula::Prop(p) => Formula::Prop(p.clone()),
        HybridFormula::Nominal(i) => Formula::Prop(nominal_marker(i)),
        HybridFormula::SVar(x) => Formula::Prop(svar_marker(x)),
        HybridFormula::False => Formula::False,
        HybridFormula::Not(g) => Formula::not(translate(g)),
        HybridFormula::Or(a, b) => Formula::or(translate(a), translate(b)),
        HybridFormula::BoxFeature(a, g) => {
            Formula::boxed(ModalAction::Feature(a.clone()), translate(g))
        }
        HybridFormula::BoxUniversal(g) => Formula::boxed(ModalAction::Universal, translate(g)),
        HybridFormula::AtNominal(i, g) => Formula::diamond(
            ModalAction::Universal,
            Formula::and(Formula::Prop(nominal_marker(i)), translate(g)),
        ),
        HybridFormula::AtSVar(x, g) => Formula::diamond(
            ModalAction::Universal,
            Formula::and(Formula::Prop(svar_marker(x)), translate(g)),
        ),
        HybridFormula::Down(x, g) => {
            let marker = svar_marker(x);
            Formula::boxed(
                ModalAction::assign_global(marker.clone(), Formula::False),
                Formula::boxed(
                    ModalAction::assign_local(marker, Formula::truth()),
                    translate(g),
                ),
            )
        }
    }
}

/// Direct hybrid-Kripke evaluation, the oracle for the translation.
/// `nominals` maps nominal names to the nodes they denote.
pub fn hybrid_eval(
    model: &RootedTermgraph,
    nominals: &BTreeMap<Sym, Sym>,
    f: &HybridFormula,
) -> Result<bool, HybridError> {
    eval(model, model.root(), nominals, &mut BTreeMap::new(), f)
}

fn eval(
    g: &RootedTermgraph,
    here: &Sym,
    nominals: &BTreeMap<Sym, Sym>,
    env: &mut BTreeMap<Sym, Sym>,
    f: &HybridFormula,
) -> Result<bool, HybridError> {
    Ok(match f {
        HybridFormula::Prop(p) => g.has_label(here, p),
        HybridFormula::Nominal(i) => {
            let node =
                nominals.get(i).ok_or_else(|| HybridError::UnknownNominal(i.clone()))?;
            node == here
        }
        HybridFormula::SVar(x) => {
            let node = env.get(x).ok_or_else(|| HybridError::UnboundVariable(x.clone()))?;
            node == here
        }
        HybridFormula::False => false,
        HybridFormula::Not(inner) => !eval(g, here, nominals, env, inner)?,
        HybridFormula::Or(a, b) => {
            eval(g, here, nominals, env, a)? || eval(g, here, nominals, env, b)?
        }
        HybridFormula::BoxFeature(a, inner) => {
            for t in g.successors(here, a) {
                if !eval(g, &t, nominals, env, inner)? {
                    return Ok(false);
                }
            }
            true
        }
        HybridFormula::BoxUniversal(inner) => {
            for n in g.nodes().cloned().collect::<Vec<_>>() {
                if !eval(g, &n, nominals, env, inner)? {
                    return Ok(false);
                }
            }
            true
        }
        HybridFormula::AtNominal(i, inner) => {
            let node = nominals
                .get(i)
                .ok_or_else(|| HybridError::UnknownNominal(i.clone()))?
                .clone();
            eval(g, &node, nominals, env, inner)?
        }
        HybridFormula::AtSVar(x, inner) => {
            let node =
                env.get(x).ok_or_else(|| HybridError::UnboundVariable(x.clone()))?.clone();
            eval(g, &node, nominals, env, inner)?
        }
        HybridFormula::Down(x, inner) => {
            let saved = env.insert(x.clone(), here.clone());
            let result = eval(g, here, nominals, env, inner)?;
            match saved {
                Some(old) => {
                    env.insert(x.clone(), old);
                }
                None => {
                    env.remove(x);
                }
            }
            result
        }
    })
}

/// Stamp each nominal's marker onto its node, so the translated formula
/// can be model checked against the same model the evaluator sees.
pub fn seed_nominals(g: &RootedTermgraph, nominals: &BTreeMap<Sym, Sym>) -> RootedTermgraph {
    let mut out = g.clone();
    for (name, node) in nominals {
        out.add_label(node, nominal_marker(name));
    }
    out
}

/// Parser for the hybrid grammar: `'i` nominal, `?x` state variable,
/// `@'i f`, `@?x f`, `down ?x . f`, boxes `[a]`/`[U]` and diamonds, and
/// the propositional connectives.
pub fn parse_hybrid(text: &str) -> Result<HybridFormula, HybridError> {
    let mut p = HP { chars: text.chars().collect(), pos: 0 };
    p.skip_ws();
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

struct HP {
    chars: Vec<char>,
    pos: usize,
}

impl HP {
    fn err(&self, msg: impl Into<String>) -> HybridError {
        HybridError::Parse { msg: msg.into(), offset: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), HybridError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<Sym, HybridError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an identifier"));
        }
        Ok(Sym::new(self.chars[start..self.pos].iter().collect::<String>()))
    }

    fn lookahead_word(&self, word: &str) -> bool {
        let mut i = self.pos;
        for c in word.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        !matches!(self.chars.get(i), Some(c) if c.is_ascii_alphanumeric() || *c == '_')
    }

    fn formula(&mut self) -> Result<HybridFormula, HybridError> {
        let mut lhs = self.implication()?;
        loop {
            self.skip_ws();
            if self.lookahead_op("<->") {
                self.pos += 3;
                let rhs = self.implication()?;
                lhs = HybridFormula::and(
                    HybridFormula::implies(lhs.clone(), rhs.clone()),
                    HybridFormula::implies(rhs, lhs),
                );
            } else {
                return Ok(lhs);
            }
        }
    }

    fn lookahead_op(&self, op: &str) -> bool {
        let mut i = self.pos;
        for c in op.chars() {
            if self.chars.get(i) != Some(&c) {
                return false;
            }
            i += 1;
        }
        true
    }

    fn implication(&mut self) -> Result<HybridFormula, HybridError> {
        let lhs = self.disjunction()?;
        self.skip_ws();
        if self.lookahead_op("->") {
            self.pos += 2;
            let rhs = self.implication()?;
            Ok(HybridFormula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<HybridFormula, HybridError> {
        let mut lhs = self.conjunction()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                lhs = HybridFormula::or(lhs, self.conjunction()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn conjunction(&mut self) -> Result<HybridFormula, HybridError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('&') {
                self.pos += 1;
                lhs = HybridFormula::and(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<HybridFormula, HybridError> {
        self.skip_ws();
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(HybridFormula::not(self.unary()?))
            }
            Some('[') => {
                self.pos += 1;
                let m = self.modality()?;
                self.expect(']')?;
                let body = self.unary()?;
                Ok(match m {
                    None => HybridFormula::BoxUniversal(Box::new(body)),
                    Some(a) => HybridFormula::BoxFeature(a, Box::new(body)),
                })
            }
            Some('<') => {
                self.pos += 1;
                let m = self.modality()?;
                self.expect('>')?;
                let body = self.unary()?;
                Ok(HybridFormula::not(match m {
                    None => HybridFormula::BoxUniversal(Box::new(HybridFormula::not(body))),
                    Some(a) => HybridFormula::BoxFeature(a, Box::new(HybridFormula::not(body))),
                }))
            }
            Some('@') => {
                self.pos += 1;
                self.skip_ws();
                match self.peek() {
                    Some('\'') => {
                        self.pos += 1;
                        let i = self.ident()?;
                        Ok(HybridFormula::AtNominal(i, Box::new(self.unary()?)))
                    }
                    Some('?') => {
                        self.pos += 1;
                        let x = self.ident()?;
                        Ok(HybridFormula::AtSVar(x, Box::new(self.unary()?)))
                    }
                    _ => Err(self.err("expected a nominal or state variable after '@'")),
                }
            }
            _ => {
                self.skip_ws();
                if self.lookahead_word("down") {
                    self.pos += 4;
                    self.skip_ws();
                    self.expect('?')?;
                    let x = self.ident()?;
                    self.expect('.')?;
                    let body = self.formula()?;
                    return Ok(HybridFormula::Down(x, Box::new(body)));
                }
                self.atom()
            }
        }
    }

    fn modality(&mut self) -> Result<Option<Sym>, HybridError> {
        self.skip_ws();
        let name = self.ident()?;
        if name.as_str() == "U" {
            Ok(None)
        } else {
            Ok(Some(name))
        }
    }

    fn atom(&mut self) -> Result<HybridFormula, HybridError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('\'') => {
                self.pos += 1;
                Ok(HybridFormula::Nominal(self.ident()?))
            }
            Some('?') => {
                self.pos += 1;
                Ok(HybridFormula::SVar(self.ident()?))
            }
            Some('$') => Err(self.err("symbols starting with '$' are reserved")),
            _ => {
                if self.lookahead_word("true") {
                    self.pos += 4;
                    return Ok(HybridFormula::truth());
                }
                if self.lookahead_word("false") {
                    self.pos += 5;
                    return Ok(HybridFormula::False);
                }
                Ok(HybridFormula::Prop(self.ident()?))
            }
        }
    }
}
