//! Pretty-printer for kinds, terms and contexts (ASCII concrete syntax).
//!
//! Bound variables get their binder hint, primed until they clash neither with
//! a free variable of the printed object nor with an enclosing binder, so the
//! output always parses back to an α-equal term.

use std::collections::BTreeSet;

use crate::syntax::{Context, Kind, Term};

struct Printer {
    avoid: BTreeSet<String>,
    scope: Vec<String>,
    out: String,
}

impl Printer {
    fn new(avoid: BTreeSet<String>) -> Self {
        Printer { avoid, scope: Vec::new(), out: String::new() }
    }

    fn binder_name(&self, hint: &str, used: bool) -> String {
        if !used {
            return "_".to_string();
        }
        let base = if hint.is_empty() || hint == "_" { "x" } else { hint };
        let mut name = base.to_string();
        while self.avoid.contains(&name) || self.scope.iter().any(|s| s == &name) {
            name.push('\'');
        }
        name
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(x) => self.out.push_str(x.as_str()),
            Term::Bound(i) => {
                let depth = self.scope.len();
                match depth.checked_sub(*i as usize + 1) {
                    Some(pos) => {
                        let name = self.scope[pos].clone();
                        self.out.push_str(&name);
                    }
                    None => self.out.push_str(&format!("#{i}")),
                }
            }
            Term::Lam(h, k, body) => {
                let name = self.binder_name(h.as_str(), body.has_loose(0));
                self.out.push('[');
                self.out.push_str(&name);
                self.out.push(':');
                self.kind(k);
                self.out.push(']');
                self.scope.push(name);
                self.term(body);
                self.scope.pop();
            }
            Term::App(m, n) => {
                self.head(m);
                self.out.push('(');
                self.term(n);
                self.out.push(')');
            }
            Term::EmptyRec => self.out.push_str("<>"),
            Term::RecTypeExt(r, l, a) => {
                self.out.push('<');
                self.term(r);
                self.out.push_str(", ");
                self.out.push_str(l.as_str());
                self.out.push_str(" : ");
                self.term(a);
                self.out.push('>');
            }
            Term::RecExt(r, l, a, fam) => {
                self.out.push('<');
                self.term(r);
                self.out.push_str(", ");
                self.out.push_str(l.as_str());
                self.out.push_str(" = ");
                self.term(a);
                self.out.push_str(" : ");
                self.term(fam);
                self.out.push('>');
            }
            Term::Restr(r) => {
                self.out.push('[');
                self.term(r);
                self.out.push(']');
            }
            Term::Sel(r, l) => {
                self.head(r);
                self.out.push('.');
                self.out.push_str(l.as_str());
            }
        }
    }

    /// A term in function or selection-subject position: abstractions extend
    /// to the right, so they need parentheses here.
    fn head(&mut self, t: &Term) {
        if t.is_abstraction() {
            self.out.push('(');
            self.term(t);
            self.out.push(')');
        } else {
            self.term(t);
        }
    }

    fn kind(&mut self, k: &Kind) {
        match k {
            Kind::Type => self.out.push_str("Type"),
            Kind::RType => self.out.push_str("RType"),
            Kind::RTypeL(ls) => {
                self.out.push_str("RType[");
                let names: Vec<&str> = ls.iter().map(|l| l.as_str()).collect();
                self.out.push_str(&names.join(","));
                self.out.push(']');
            }
            Kind::El(t) => {
                self.out.push_str("El(");
                self.term(t);
                self.out.push(')');
            }
            Kind::Prod(h, d, c) => {
                let name = self.binder_name(h.as_str(), c.has_loose(0));
                self.out.push('(');
                self.out.push_str(&name);
                self.out.push(':');
                self.kind(d);
                self.out.push(')');
                self.scope.push(name);
                self.kind(c);
                self.scope.pop();
            }
        }
    }
}

fn names(set: BTreeSet<crate::syntax::Name>) -> BTreeSet<String> {
    set.into_iter().map(|n| n.as_str().to_string()).collect()
}

pub fn term_to_string(t: &Term) -> String {
    let mut p = Printer::new(names(t.free_vars()));
    p.term(t);
    p.out
}

pub fn kind_to_string(k: &Kind) -> String {
    let mut p = Printer::new(names(k.free_vars()));
    p.kind(k);
    p.out
}

/// Prints a term whose free variables include names declared in `ctx`
/// (binders avoid all of them, not only those that occur).
pub fn term_in_context(ctx: &Context, t: &Term) -> String {
    let mut avoid = names(t.free_vars());
    avoid.extend(ctx.entries().iter().map(|(x, _)| x.as_str().to_string()));
    let mut p = Printer::new(avoid);
    p.term(t);
    p.out
}

pub fn kind_in_context(ctx: &Context, k: &Kind) -> String {
    let mut avoid = names(k.free_vars());
    avoid.extend(ctx.entries().iter().map(|(x, _)| x.as_str().to_string()));
    let mut p = Printer::new(avoid);
    p.kind(k);
    p.out
}

pub fn context_to_string(ctx: &Context) -> String {
    if ctx.is_empty() {
        return "()".to_string();
    }
    let parts: Vec<String> = ctx
        .entries()
        .iter()
        .enumerate()
        .map(|(i, (x, k))| format!("{}:{}", x, kind_in_context(&ctx.prefix(i + 1), k)))
        .collect();
    parts.join(", ")
}

// Serialization goes through the concrete syntax so dumps stay readable and
// round-trip through the parser.

macro_rules! serde_via_syntax {
    ($ty:ty, $print:path, $parse:path) => {
        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&$print(self))
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let text = <String as serde::Deserialize>::deserialize(d)?;
                $parse(&text).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_syntax!(Term, term_to_string, crate::parse::parse_term);
serde_via_syntax!(Kind, kind_to_string, crate::parse::parse_kind);
serde_via_syntax!(Context, context_to_string, crate::parse::parse_context);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Hint, Name};
    use std::sync::Arc;

    #[test]
    fn atoms() {
        assert_eq!(term_to_string(&Term::EmptyRec), "<>");
        assert_eq!(term_to_string(&Term::restr(Term::var("r"))), "[r]");
        assert_eq!(term_to_string(&Term::sel(Term::var("r"), "l")), "r.l");
    }

    #[test]
    fn binders_and_heads() {
        let id = Term::lam("x", Kind::Type, Term::var("x"));
        assert_eq!(term_to_string(&id), "[x:Type]x");
        assert_eq!(term_to_string(&Term::app(id.clone(), Term::var("y"))), "([x:Type]x)(y)");
        let k = Kind::prod("x", Kind::Type, Kind::el(Term::var("x")));
        assert_eq!(kind_to_string(&k), "(x:Type)El(x)");
        let vac = Term::lam("y", Kind::el(Term::EmptyRec), Term::var("T"));
        assert_eq!(term_to_string(&vac), "[_:El(<>)]T");
    }

    #[test]
    fn capture_is_avoided_in_output() {
        // [y/x]([y:Type]x)
        let t = Term::lam("y", Kind::Type, Term::var("x")).subst(&Name::new("x"), &Term::var("y"));
        assert_eq!(term_to_string(&t), "[_:Type]y");
        let body = Term::app(Term::var("x"), Term::var("y"));
        let t = Term::lam("y", Kind::Type, body).subst(&Name::new("x"), &Term::var("y"));
        assert_eq!(term_to_string(&t), "[y':Type]y(y')");
        let raw = Term::Lam(Hint::new("x"), Arc::new(Kind::Type), Arc::new(Term::Bound(5)));
        assert_eq!(term_to_string(&raw), "[_:Type]#5");
    }
}
