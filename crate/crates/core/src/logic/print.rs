//! Display impls for formulas and actions, re-sugaring derived forms.

use super::{Formula, ModalAction};
use std::fmt;

enum View<'a> {
    True,
    False,
    Prop(&'a crate::sym::Sym),
    Not(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    BoxA(&'a ModalAction, &'a Formula),
    Diamond(&'a ModalAction, &'a Formula),
}

fn view(f: &Formula) -> View<'_> {
    match f {
        Formula::False => View::False,
        Formula::Prop(p) => View::Prop(p),
        Formula::Not(inner) => match &**inner {
            Formula::False => View::True,
            Formula::Box(a, g) => match &**g {
                Formula::Not(h) => View::Diamond(a, h),
                _ => View::Not(inner),
            },
            Formula::Or(l, r) => match (&**l, &**r) {
                (Formula::Not(a), Formula::Not(b)) => View::And(a, b),
                _ => View::Not(inner),
            },
            _ => View::Not(inner),
        },
        Formula::Or(l, r) => match &**l {
            Formula::Not(a) => View::Implies(a, r),
            _ => View::Or(l, r),
        },
        Formula::Box(a, g) => View::BoxA(a, g),
    }
}

// Precedence levels: -> 0, | 1, & 2, unary 3, atoms 4.
fn fmt_formula(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match view(f) {
        View::True | View::False | View::Prop(_) => 4,
        View::Not(_) | View::BoxA(..) | View::Diamond(..) => 3,
        View::And(..) => 2,
        View::Or(..) => 1,
        View::Implies(..) => 0,
    };
    let parens = level < min;
    if parens {
        out.write_str("(")?;
    }
    match view(f) {
        View::True => out.write_str("true")?,
        View::False => out.write_str("false")?,
        View::Prop(p) => write!(out, "{p}")?,
        View::Not(g) => {
            out.write_str("~")?;
            fmt_formula(g, 3, out)?;
        }
        View::BoxA(a, g) => {
            write!(out, "[{a}]")?;
            fmt_formula(g, 3, out)?;
        }
        View::Diamond(a, g) => {
            write!(out, "<{a}>")?;
            fmt_formula(g, 3, out)?;
        }
        View::And(a, b) => {
            fmt_formula(a, 2, out)?;
            out.write_str(" & ")?;
            fmt_formula(b, 3, out)?;
        }
        View::Or(a, b) => {
            fmt_formula(a, 1, out)?;
            out.write_str(" | ")?;
            fmt_formula(b, 2, out)?;
        }
        View::Implies(a, b) => {
            fmt_formula(a, 1, out)?;
            out.write_str(" -> ")?;
            fmt_formula(b, 0, out)?;
        }
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, out)
    }
}

// Action precedence: | 0, ; 1, * 2 (postfix), primitives 3.
fn fmt_action(a: &ModalAction, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match a {
        ModalAction::Choice(..) => 0,
        ModalAction::Seq(..) => 1,
        ModalAction::Star(..) => 2,
        _ => 3,
    };
    let parens = level < min;
    if parens {
        out.write_str("(")?;
    }
    match a {
        ModalAction::Feature(f) => write!(out, "{f}")?,
        ModalAction::Universal => out.write_str("U")?,
        ModalAction::NewNode => out.write_str("new")?,
        ModalAction::NewNodeGo => out.write_str("new!")?,
        ModalAction::Test(f) => write!(out, "test({f})")?,
        ModalAction::AssignGlobal(p, f) => write!(out, "setg({p}, {f})")?,
        ModalAction::AssignLocal(p, f) => write!(out, "setl({p}, {f})")?,
        ModalAction::AddEdges(e, from, to) => write!(out, "add({e}, {from}, {to})")?,
        ModalAction::DelEdges(e, from, to) => write!(out, "del({e}, {from}, {to})")?,
        ModalAction::Seq(x, y) => {
            fmt_action(x, 2, out)?;
            out.write_str("; ")?;
            fmt_action(y, 1, out)?;
        }
        ModalAction::Choice(x, y) => {
            fmt_action(x, 1, out)?;
            out.write_str(" | ")?;
            fmt_action(y, 1, out)?;
        }
        ModalAction::Star(x) => {
            fmt_action(x, 3, out)?;
            out.write_str("*")?;
        }
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for ModalAction {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_action(self, 0, out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_action, parse_formula};

    #[test]
    fn printing_round_trips_through_the_parser() {
        for text in [
            "[test(p)]q",
            "[setg(w, false)][U][setl(w, true)][a]~w",
            "<(a; b)*>done",
            "p -> q & ~r | false",
            "<U>(p & <a>q)",
            "[add(a, p, q)][a]r",
            "(p | q) & w",
            "p <-> q",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = f.to_string();
            let back = parse_formula(&printed).unwrap();
            assert_eq!(back, f, "{text} printed as {printed}");
        }
        for text in ["a; (b | U)*; test(p & q)", "setg(w, <a>p); new!; add(a, w, true)"] {
            let a = parse_action(text).unwrap();
            let printed = a.to_string();
            let back = parse_action(&printed).unwrap();
            assert_eq!(back, a, "{text} printed as {printed}");
        }
    }

    #[test]
    fn derived_forms_resugar() {
        assert_eq!(parse_formula("p & q").unwrap().to_string(), "p & q");
        assert_eq!(parse_formula("p -> q").unwrap().to_string(), "p -> q");
        assert_eq!(parse_formula("<a>p").unwrap().to_string(), "<a>p");
        assert_eq!(parse_formula("true").unwrap().to_string(), "true");
    }
}
