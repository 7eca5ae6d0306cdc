//! Parsers for the termgraph linear notation, action sequences and rule
//! files.
//!
//! ```text
//! termgraph ::= node ("+" node)*
//! node      ::= IDENT ":" LABEL [ "(" arg ("," arg)* ")" ]
//!             | IDENT ":" "_" [ "(" arg ("," arg)* ")" ]
//!             | IDENT
//! arg       ::= FEATURE "=>" node | node
//! ```
//!
//! A positional argument at position `i` gets feature `i` (1-based). An
//! optional `root IDENT;` directive overrides the default root (the first
//! node of the first summand). `#` starts a line comment. Labels are
//! identifiers, integers or `+`; features are identifiers or integers.
//! The `$` namespace is reserved for generated markers and rejected here.
//!
//! Rule files contain one rule per line group: `LHS -> ACTION ; ... ;
//! ACTION`, where an action is a node definition in linear syntax, a local
//! redirection `n >a> m`, or a global redirection `n >> m`. Node
//! definitions nested inside another definition's arguments are split out
//! into their own actions, after the enclosing one.

use super::rewrite::{RewriteRule, RewriteSystem};
use super::{ElementaryAction, RootedTermgraph};
use crate::sym::Sym;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{msg} at line {line}, column {col}")]
pub struct ParseError {
    pub msg: String,
    pub line: usize,
    pub col: usize,
}

impl ParseError {
    fn new(msg: impl Into<String>, line: usize, col: usize) -> Self {
        ParseError { msg: msg.into(), line, col }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Colon,
    Underscore,
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,     // ->
    FatArrow,  // =>
    Gt,        // >
    GtGt,      // >>
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                if s == "_" {
                    out.push(Token { tok: Tok::Underscore, line: tl, col: tc });
                } else {
                    out.push(Token { tok: Tok::Ident(s), line: tl, col: tc });
                }
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Int(s), line: tl, col: tc });
            }
            '+' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::Plus, line: tl, col: tc });
            }
            ':' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::Colon, line: tl, col: tc });
            }
            '(' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::LParen, line: tl, col: tc });
            }
            ')' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::RParen, line: tl, col: tc });
            }
            ',' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::Comma, line: tl, col: tc });
            }
            ';' => {
                bump(&mut chars);
                out.push(Token { tok: Tok::Semi, line: tl, col: tc });
            }
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
                } else {
                    return Err(ParseError::new("expected '->'", tl, tc));
                }
            }
            '=' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::FatArrow, line: tl, col: tc });
                } else {
                    return Err(ParseError::new("expected '=>'", tl, tc));
                }
            }
            '>' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Token { tok: Tok::GtGt, line: tl, col: tc });
                } else {
                    out.push(Token { tok: Tok::Gt, line: tl, col: tc });
                }
            }
            '$' => {
                return Err(ParseError::new(
                    "symbols starting with '$' are reserved for generated markers",
                    tl,
                    tc,
                ));
            }
            other => {
                return Err(ParseError::new(format!("unexpected character '{other}'"), tl, tc));
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            let (l, c) = self.here();
            Err(ParseError::new(format!("expected {what}"), l, c))
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(msg, l, c)
    }

    fn ident(&mut self, what: &str) -> Result<Sym, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Sym::new(s))
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    /// A label: identifier, integer, or `+`.
    fn label(&mut self) -> Result<Sym, ParseError> {
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
            _ => Err(self.err("expected a node label")),
        }
    }

    fn feature(&mut self) -> Result<Sym, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Sym::new(s))
            }
            Tok::Int(s) => {
                self.bump();
                Ok(Sym::new(s))
            }
            _ => Err(self.err("expected a feature")),
        }
    }
}

/// Intermediate node expression from the grammar.
#[derive(Clone, Debug)]
enum NodeExpr {
    /// Bare reference.
    Ref(Sym),
    /// Defining occurrence: `n : label-or-underscore ( args )`.
    Def { node: Sym, label: Option<Sym>, args: Vec<(Sym, NodeExpr)>, line: usize, col: usize },
}

impl NodeExpr {
    fn node(&self) -> &Sym {
        match self {
            NodeExpr::Ref(n) => n,
            NodeExpr::Def { node, .. } => node,
        }
    }
}

fn parse_node_expr(p: &mut Parser) -> Result<NodeExpr, ParseError> {
    let (line, col) = p.here();
    let node = p.ident("a node identifier")?;
    if *p.peek() != Tok::Colon {
        return Ok(NodeExpr::Ref(node));
    }
    p.bump();
    let label = match p.peek() {
        Tok::Underscore => {
            p.bump();
            None
        }
        _ => Some(p.label()?),
    };
    let mut args = Vec::new();
    if *p.peek() == Tok::LParen {
        p.bump();
        let mut position = 1usize;
        loop {
            // Named argument if a feature token is followed by `=>`.
            let named = matches!(p.peek(), Tok::Ident(_) | Tok::Int(_))
                && *p.peek2() == Tok::FatArrow;
            let (feat, expr) = if named {
                let f = p.feature()?;
                p.expect(Tok::FatArrow, "'=>'")?;
                (f, parse_node_expr(p)?)
            } else {
                (Sym::new(position.to_string()), parse_node_expr(p)?)
            };
            args.push((feat, expr));
            position += 1;
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::RParen => {
                    p.bump();
                    break;
                }
                _ => return Err(p.err("expected ',' or ')'")),
            }
        }
    }
    Ok(NodeExpr::Def { node, label, args, line, col })
}

#[derive(Default)]
struct GraphBuilder {
    defined: BTreeSet<Sym>,
    labels: BTreeMap<Sym, Sym>,
    nodes: Vec<Sym>,
    edges: Vec<(Sym, Sym, Sym)>,
    slots: BTreeSet<(Sym, Sym)>,
}

impl GraphBuilder {
    fn touch(&mut self, n: &Sym) {
        if !self.nodes.contains(n) {
            self.nodes.push(n.clone());
        }
    }

    fn add(&mut self, expr: &NodeExpr) -> Result<(), ParseError> {
        match expr {
            NodeExpr::Ref(n) => self.touch(n),
            NodeExpr::Def { node, label, args, line, col } => {
                self.touch(node);
                if !self.defined.insert(node.clone()) {
                    return Err(ParseError::new(
                        format!("node {node} is defined twice"),
                        *line,
                        *col,
                    ));
                }
                if let Some(l) = label {
                    self.labels.insert(node.clone(), l.clone());
                }
                for (f, sub) in args {
                    if !self.slots.insert((node.clone(), f.clone())) {
                        return Err(ParseError::new(
                            format!("duplicate edge ({node}, {f})"),
                            *line,
                            *col,
                        ));
                    }
                    self.edges.push((node.clone(), f.clone(), sub.node().clone()));
                    self.add(sub)?;
                }
            }
        }
        Ok(())
    }

    fn finish(self, root: Sym) -> RootedTermgraph {
        let mut g = RootedTermgraph::single(root);
        for n in self.nodes {
            g.add_node(n);
        }
        for (n, l) in self.labels {
            g.add_label(&n, l);
        }
        for (s, f, t) in self.edges {
            g.add_edge(s, f, t);
        }
        g
    }
}

/// Parse a termgraph in linear notation.
pub fn parse_termgraph(text: &str) -> Result<RootedTermgraph, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let g = parse_termgraph_inner(&mut p)?;
    match p.peek() {
        Tok::Eof => Ok(g),
        _ => Err(p.err("unexpected trailing input")),
    }
}

fn parse_termgraph_inner(p: &mut Parser) -> Result<RootedTermgraph, ParseError> {
    let mut root_override = None;
    if let Tok::Ident(s) = p.peek() {
        if s == "root" && matches!(p.peek2(), Tok::Ident(_)) {
            p.bump();
            root_override = Some(p.ident("a root node identifier")?);
            p.expect(Tok::Semi, "';' after the root directive")?;
        }
    }
    let mut builder = GraphBuilder::default();
    let first = parse_node_expr(p)?;
    let mut root = first.node().clone();
    builder.add(&first)?;
    while *p.peek() == Tok::Plus {
        p.bump();
        let next = parse_node_expr(p)?;
        builder.add(&next)?;
    }
    if let Some(r) = root_override {
        if !builder.nodes.contains(&r) {
            return Err(p.err(format!("root directive names unknown node {r}")));
        }
        root = r;
    }
    Ok(builder.finish(root))
}

/// Flatten a node expression used as an *action*: the outer definition is
/// emitted first, nested definitions follow depth-first, left to right.
fn flatten_action(expr: &NodeExpr, out: &mut Vec<ElementaryAction>) -> Result<(), ParseError> {
    match expr {
        NodeExpr::Ref(_) => Ok(()),
        NodeExpr::Def { node, label, args, line, col } => {
            let label = label.clone().ok_or_else(|| {
                ParseError::new("a node definition action requires a label", *line, *col)
            })?;
            let arg_pairs: Vec<(Sym, Sym)> =
                args.iter().map(|(f, e)| (f.clone(), e.node().clone())).collect();
            out.push(ElementaryAction::NodeDefinition { node: node.clone(), label, args: arg_pairs });
            for (_, sub) in args {
                flatten_action(sub, out)?;
            }
            Ok(())
        }
    }
}

fn parse_action_item(p: &mut Parser) -> Result<Vec<ElementaryAction>, ParseError> {
    let node = p.ident("a node identifier")?;
    match p.peek().clone() {
        Tok::GtGt => {
            p.bump();
            let target = p.ident("a target node")?;
            Ok(vec![ElementaryAction::GlobalRedirection { node, target }])
        }
        Tok::Gt => {
            p.bump();
            let feature = p.feature()?;
            p.expect(Tok::Gt, "'>' after the feature")?;
            let target = p.ident("a target node")?;
            Ok(vec![ElementaryAction::LocalRedirection { node, feature, target }])
        }
        Tok::Colon => {
            p.bump();
            let (line, col) = p.here();
            let label = match p.peek() {
                Tok::Underscore => {
                    return Err(p.err("a node definition action requires a label"));
                }
                _ => Some(p.label()?),
            };
            let mut args = Vec::new();
            if *p.peek() == Tok::LParen {
                p.bump();
                let mut position = 1usize;
                loop {
                    let named = matches!(p.peek(), Tok::Ident(_) | Tok::Int(_))
                        && *p.peek2() == Tok::FatArrow;
                    let (feat, expr) = if named {
                        let f = p.feature()?;
                        p.expect(Tok::FatArrow, "'=>'")?;
                        (f, parse_node_expr(p)?)
                    } else {
                        (Sym::new(position.to_string()), parse_node_expr(p)?)
                    };
                    args.push((feat, expr));
                    position += 1;
                    match p.peek() {
                        Tok::Comma => {
                            p.bump();
                        }
                        Tok::RParen => {
                            p.bump();
                            break;
                        }
                        _ => return Err(p.err("expected ',' or ')'")),
                    }
                }
            }
            let expr = NodeExpr::Def { node, label, args, line, col };
            let mut out = Vec::new();
            flatten_action(&expr, &mut out)?;
            Ok(out)
        }
        _ => Err(p.err("expected an action (node definition, '>f>' or '>>')")),
    }
}

/// Parse a `;`-separated action sequence.
pub fn parse_actions(text: &str) -> Result<Vec<ElementaryAction>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = Vec::new();
    loop {
        out.extend(parse_action_item(&mut p)?);
        match p.peek() {
            Tok::Semi => {
                p.bump();
            }
            Tok::Eof => break,
            _ => return Err(p.err("expected ';' or end of input")),
        }
    }
    Ok(out)
}

/// Parse a rule file. A rule spans one or more physical lines; a new rule
/// starts whenever the accumulated text already contains `->` and the next
/// line is blank or itself contains `->`.
pub fn parse_rules(text: &str) -> Result<RewriteSystem, ParseError> {
    let mut groups: Vec<(String, usize)> = Vec::new();
    let mut buf = String::new();
    let mut buf_start = 0usize;
    let flush = |buf: &mut String, start: usize, groups: &mut Vec<(String, usize)>| {
        let trimmed: String = buf
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join("\n");
        if !trimmed.trim().is_empty() {
            groups.push((buf.clone(), start));
        }
        buf.clear();
    };
    for (i, line) in text.lines().enumerate() {
        let code = line.split('#').next().unwrap_or("").trim();
        if code.is_empty() {
            flush(&mut buf, buf_start, &mut groups);
            continue;
        }
        if buf.contains("->") && code.contains("->") {
            flush(&mut buf, buf_start, &mut groups);
        }
        if buf.is_empty() {
            buf_start = i;
        }
        buf.push_str(line);
        buf.push('\n');
    }
    flush(&mut buf, buf_start, &mut groups);

    let mut rules = Vec::new();
    for (group, start_line) in groups {
        let rule = parse_rule(&group).map_err(|e| ParseError {
            msg: e.msg,
            line: e.line + start_line,
            col: e.col,
        })?;
        rules.push(rule);
    }
    Ok(RewriteSystem::new(rules))
}

fn parse_rule(text: &str) -> Result<RewriteRule, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let lhs = parse_termgraph_inner(&mut p)?;
    p.expect(Tok::Arrow, "'->' between pattern and actions")?;
    let mut rhs = Vec::new();
    loop {
        rhs.extend(parse_action_item(&mut p)?);
        match p.peek() {
            Tok::Semi => {
                p.bump();
            }
            Tok::Eof => break,
            _ => return Err(p.err("expected ';' or end of rule")),
        }
    }
    RewriteRule::new(lhs, rhs).map_err(|msg| ParseError::new(msg, 1, 1))
}
