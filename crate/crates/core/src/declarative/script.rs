//! Textual derivation scripts.
//!
//! ```text
//! (Conv "A:Type, x:El(A) |- x : El(A)"
//!   (Var "A:Type, x:El(A) |- x : El(A)" #1=(CtxExt "A:Type, x:El(A) |- valid" ...))
//!   ...)
//! ```
//!
//! A node is `(Rule "judgement" premise*)`. A shared node is labelled on its
//! first occurrence with `#n=` and referenced afterwards as `#n#`.
//! Judgements are written `Γ |- valid`, `Γ |- K kind`, `Γ |- K = K'`,
//! `Γ |- M : K` or `Γ |- M = N : K`, with `()` for the empty context.
//! Comments run from `;` to the end of the line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::{DeclRule, Derivation, Judgement};
use crate::parse::{context_from_entries, AstKind, Elaborator, ParseError, Parser, Tok};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: in judgement: {err}")]
    Judgement { line: usize, col: usize, err: ParseError },
}

/// Parses one judgement in the script notation.
pub fn parse_judgement(text: &str) -> Result<Judgement, ParseError> {
    let mut p = Parser::new(text)?;
    let entries = p.context_entries()?;
    let g = context_from_entries(entries)?;
    p.expect_sym("|-")?;
    if p.at_ident("valid") && matches!(p.peek_at(1), Tok::Eof) {
        p.bump();
        return Ok(Judgement::CtxValid(g));
    }
    let first = p.kind()?;
    let as_term = |k: AstKind, p: &Parser| match k {
        AstKind::El(t) => Elaborator::new().term(&t, None),
        _ => p.error("expected a term, found a kind"),
    };
    let j = if p.at_ident("kind") {
        p.bump();
        Judgement::KindWf(g, Elaborator::new().kind(&first)?)
    } else if p.at_sym(":") {
        p.bump();
        let m = as_term(first, &p)?;
        let k = p.kind()?;
        Judgement::HasKind(g, m, Elaborator::new().kind(&k)?)
    } else if p.at_sym("=") {
        p.bump();
        let second = p.kind()?;
        if p.at_sym(":") {
            p.bump();
            let m = as_term(first, &p)?;
            let n = as_term(second, &p)?;
            let k = p.kind()?;
            Judgement::TermEq(g, m, n, Elaborator::new().kind(&k)?)
        } else {
            Judgement::KindEq(g, Elaborator::new().kind(&first)?, Elaborator::new().kind(&second)?)
        }
    } else {
        return p.error("expected `kind`, `:` or `=`");
    };
    p.expect_eof()?;
    Ok(j)
}

struct Reader {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    labels: HashMap<u64, Arc<Derivation>>,
}

impl Reader {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ScriptError> {
        Err(ScriptError::Syntax { line: self.line, col: self.col, msg: msg.into() })
    }

    fn advance(&mut self) -> Option<char> {
        let c = *self.chars.get(self.i)?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.get(self.i) {
            if c == ';' {
                while self.chars.get(self.i).is_some_and(|&c| c != '\n') {
                    self.advance();
                }
            } else if c.is_whitespace() {
                self.advance();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).copied()
    }

    fn number(&mut self) -> Result<u64, ScriptError> {
        let start = self.i;
        while self.chars.get(self.i).is_some_and(|c| c.is_ascii_digit()) {
            self.advance();
        }
        let s: String = self.chars[start..self.i].iter().collect();
        match s.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err("expected a node number"),
        }
    }

    fn node(&mut self) -> Result<Arc<Derivation>, ScriptError> {
        match self.peek() {
            Some('#') => {
                self.advance();
                let n = self.number()?;
                match self.advance() {
                    Some('#') => match self.labels.get(&n) {
                        Some(d) => Ok(d.clone()),
                        None => self.err(format!("node #{n}# is referenced before it is defined")),
                    },
                    Some('=') => {
                        let d = self.node()?;
                        if self.labels.insert(n, d.clone()).is_some() {
                            return self.err(format!("node #{n} is defined twice"));
                        }
                        Ok(d)
                    }
                    _ => self.err("expected `#` or `=` after a node number"),
                }
            }
            Some('(') => {
                self.advance();
                self.skip_ws();
                let start = self.i;
                while self.chars.get(self.i).is_some_and(|c| c.is_alphanumeric()) {
                    self.advance();
                }
                let name: String = self.chars[start..self.i].iter().collect();
                let Some(rule) = DeclRule::from_name(&name) else {
                    return self.err(format!("unknown rule `{name}`"));
                };
                if self.peek() != Some('"') {
                    return self.err("expected a quoted judgement");
                }
                let (line, col) = (self.line, self.col);
                self.advance();
                let start = self.i;
                while self.chars.get(self.i).is_some_and(|&c| c != '"') {
                    self.advance();
                }
                if self.advance().is_none() {
                    return self.err("unterminated judgement string");
                }
                let text: String = self.chars[start..self.i - 1].iter().collect();
                let conclusion = parse_judgement(&text).map_err(|err| ScriptError::Judgement { line, col, err })?;
                let mut premises = Vec::new();
                loop {
                    match self.peek() {
                        Some(')') => {
                            self.advance();
                            break;
                        }
                        None => return self.err("unclosed node"),
                        _ => premises.push(self.node()?),
                    }
                }
                Ok(Derivation::new(rule, conclusion, premises))
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of script"),
        }
    }
}

/// Parses a script into a derivation. Nothing is checked beyond syntax.
pub fn parse_script(text: &str) -> Result<Arc<Derivation>, ScriptError> {
    let mut r = Reader { chars: text.chars().collect(), i: 0, line: 1, col: 1, labels: HashMap::new() };
    let d = r.node()?;
    if r.peek().is_some() {
        return r.err("trailing input after the derivation");
    }
    Ok(d)
}

/// Prints a derivation as a script; nodes with premises that occur more than
/// once are printed once and referenced afterwards.
pub fn print_script(d: &Arc<Derivation>) -> String {
    let mut uses: HashMap<*const Derivation, usize> = HashMap::new();
    let mut stack = vec![d.clone()];
    while let Some(n) = stack.pop() {
        let c = uses.entry(Arc::as_ptr(&n)).or_default();
        *c += 1;
        if *c == 1 {
            stack.extend(n.premises.iter().cloned());
        }
    }
    let mut out = String::new();
    let mut names: HashMap<*const Derivation, u64> = HashMap::new();
    write_node(d, 0, &uses, &mut names, &mut out);
    out.push('\n');
    out
}

fn write_node(
    d: &Arc<Derivation>,
    depth: usize,
    uses: &HashMap<*const Derivation, usize>,
    names: &mut HashMap<*const Derivation, u64>,
    out: &mut String,
) {
    let ptr = Arc::as_ptr(d);
    if let Some(n) = names.get(&ptr) {
        let _ = write!(out, "#{n}#");
        return;
    }
    if uses[&ptr] > 1 && !d.premises.is_empty() {
        let n = names.len() as u64 + 1;
        names.insert(ptr, n);
        let _ = write!(out, "#{n}=");
    }
    let _ = write!(out, "({} \"{}\"", d.rule, d.conclusion);
    for p in &d.premises {
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
        write_node(p, depth + 1, uses, names, out);
    }
    out.push(')');
}
