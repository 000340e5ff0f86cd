//! Concrete syntax: lexer, surface AST, parser and elaboration into core
//! terms (including the `<n : Nat, v : Vect(n)>` field-dependency sugar).
//!
//! ```text
//! kind  := "Type" | "El" "(" term ")" | "(" IDENT ":" kind ")" kind
//!        | "RType" | "RType" "[" [IDENT {"," IDENT}] "]" | term      -- El omitted
//! term  := atom { "(" term ")" | "." IDENT }
//! atom  := IDENT | "[" IDENT ":" kind "]" term | "[" term "]" | "<" ">"
//!        | "<" term "," IDENT (":" term | "=" term [":" term]) ">"
//!        | "<" IDENT ":" term {"," IDENT ":" term} ">"               -- record type sugar
//!        | "<" IDENT "=" term {"," IDENT "=" term} ">"               -- record sugar
//!        | "(" term ")"
//! file  := { IDENT ":" kind ";" | "check" term ":" kind ";"
//!          | "eq" term "=" term ":" kind ";" | "normalize" term ";" }
//! ```
//! `--` starts a comment. `⟨ ⟩` are accepted for `< >`, `⊢` for `|-`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Context, Hint, Kind, Label, LabelSet, Name, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: syntax error: {msg}")]
    Syntax { span: Span, msg: String },
    #[error("{span}: {msg}")]
    Elab { span: Span, msg: String },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Elab { span, .. } => *span,
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            adv(1, &mut i, &mut col);
        } else if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), span));
        } else if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' {
                if chars[j] == '\n' {
                    return Err(ParseError::Syntax { span, msg: "unterminated string".into() });
                }
                j += 1;
            }
            if j >= chars.len() {
                return Err(ParseError::Syntax { span, msg: "unterminated string".into() });
            }
            out.push((Tok::Str(chars[start..j].iter().collect()), span));
            col += j + 1 - i;
            i = j + 1;
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let sym: &'static str = match (c, two.as_str()) {
                (_, "|-") => "|-",
                ('⊢', _) => "|-",
                ('(', _) => "(",
                (')', _) => ")",
                ('[', _) => "[",
                (']', _) => "]",
                ('<' | '⟨', _) => "<",
                ('>' | '⟩', _) => ">",
                (',', _) => ",",
                (':', _) => ":",
                ('=', _) => "=",
                ('.', _) => ".",
                (';', _) => ";",
                _ => {
                    return Err(ParseError::Syntax { span, msg: format!("unexpected character `{c}`") });
                }
            };
            let n = if sym == "|-" && c != '⊢' { 2 } else { 1 };
            adv(n, &mut i, &mut col);
            out.push((Tok::Sym(sym), span));
        }
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Surface syntax

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Var(String, Span),
    Lam(String, Box<AstKind>, Box<Ast>, Span),
    App(Box<Ast>, Box<Ast>),
    EmptyRec(Span),
    RecTypeExt(Box<Ast>, String, Box<Ast>, Span),
    /// Family may be omitted where an expected record type supplies it.
    RecExt(Box<Ast>, String, Box<Ast>, Option<Box<Ast>>, Span),
    Restr(Box<Ast>, Span),
    Sel(Box<Ast>, String, Span),
    /// `<l1 : A1, ..., ln : An>`
    RecTypeSugar(Vec<(String, Ast)>, Span),
    /// `<l1 = a1, ..., ln = an>`
    RecSugar(Vec<(String, Ast)>, Span),
}

impl Ast {
    pub fn span(&self) -> Span {
        match self {
            Ast::Var(_, s)
            | Ast::Lam(_, _, _, s)
            | Ast::EmptyRec(s)
            | Ast::RecTypeExt(_, _, _, s)
            | Ast::RecExt(_, _, _, _, s)
            | Ast::Restr(_, s)
            | Ast::Sel(_, _, s)
            | Ast::RecTypeSugar(_, s)
            | Ast::RecSugar(_, s) => *s,
            Ast::App(f, _) => f.span(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AstKind {
    Type,
    El(Ast),
    Prod(String, Box<AstKind>, Box<AstKind>),
    RType,
    RTypeL(Vec<String>),
}

const KEYWORDS: [&str; 6] = ["Type", "El", "RType", "check", "eq", "normalize"];

pub(crate) struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    pub(crate) fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == s)
    }

    pub(crate) fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { span: self.span(), msg: msg.into() })
    }

    pub(crate) fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.at_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    pub(crate) fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {t} after end of expression")),
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {t}")),
        }
    }

    fn is_ident_at(&self, n: usize) -> bool {
        matches!(self.peek_at(n), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
    }

    fn sym_at(&self, n: usize, s: &str) -> bool {
        matches!(self.peek_at(n), Tok::Sym(t) if *t == s)
    }

    pub(crate) fn kind(&mut self) -> Result<AstKind, ParseError> {
        if self.at_ident("Type") {
            self.bump();
            Ok(AstKind::Type)
        } else if self.at_ident("RType") {
            self.bump();
            if self.at_sym("[") {
                self.bump();
                let mut labels = Vec::new();
                if !self.at_sym("]") {
                    labels.push(self.ident()?);
                    while self.at_sym(",") {
                        self.bump();
                        labels.push(self.ident()?);
                    }
                }
                self.expect_sym("]")?;
                Ok(AstKind::RTypeL(labels))
            } else {
                Ok(AstKind::RType)
            }
        } else if self.at_ident("El") {
            self.bump();
            self.expect_sym("(")?;
            let t = self.term()?;
            self.expect_sym(")")?;
            Ok(AstKind::El(t))
        } else if self.at_sym("(") && self.is_ident_at(1) && self.sym_at(2, ":") {
            self.bump();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let dom = self.kind()?;
            self.expect_sym(")")?;
            let cod = self.kind()?;
            Ok(AstKind::Prod(x, Box::new(dom), Box::new(cod)))
        } else {
            Ok(AstKind::El(self.term()?))
        }
    }

    pub(crate) fn term(&mut self) -> Result<Ast, ParseError> {
        let mut t = self.atom()?;
        loop {
            if self.at_sym("(") {
                self.bump();
                let a = self.term()?;
                self.expect_sym(")")?;
                t = Ast::App(Box::new(t), Box::new(a));
            } else if self.at_sym(".") {
                let span = self.span();
                self.bump();
                let l = self.ident()?;
                t = Ast::Sel(Box::new(t), l, span);
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Ast::Var(s, span))
            }
            Tok::Sym("[") => {
                self.bump();
                if self.is_ident_at(0) && self.sym_at(1, ":") {
                    let x = self.ident()?;
                    self.expect_sym(":")?;
                    let k = self.kind()?;
                    self.expect_sym("]")?;
                    let body = self.term()?;
                    Ok(Ast::Lam(x, Box::new(k), Box::new(body), span))
                } else {
                    let r = self.term()?;
                    self.expect_sym("]")?;
                    Ok(Ast::Restr(Box::new(r), span))
                }
            }
            Tok::Sym("<") => {
                self.bump();
                if self.at_sym(">") {
                    self.bump();
                    return Ok(Ast::EmptyRec(span));
                }
                if self.is_ident_at(0) && (self.sym_at(1, ":") || self.sym_at(1, "=")) {
                    return self.record_sugar(span);
                }
                let r = self.term()?;
                self.expect_sym(",")?;
                let l = self.ident()?;
                if self.at_sym(":") {
                    self.bump();
                    let a = self.term()?;
                    self.expect_sym(">")?;
                    Ok(Ast::RecTypeExt(Box::new(r), l, Box::new(a), span))
                } else if self.at_sym("=") {
                    self.bump();
                    let a = self.term()?;
                    let fam = if self.at_sym(":") {
                        self.bump();
                        Some(Box::new(self.term()?))
                    } else {
                        None
                    };
                    self.expect_sym(">")?;
                    Ok(Ast::RecExt(Box::new(r), l, Box::new(a), fam, span))
                } else {
                    self.error(format!("expected `:` or `=` after label, found {}", self.peek()))
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            t => self.error(format!("expected a term, found {t}")),
        }
    }

    fn record_sugar(&mut self, span: Span) -> Result<Ast, ParseError> {
        let is_type = self.sym_at(1, ":");
        let sep = if is_type { ":" } else { "=" };
        let mut fields = Vec::new();
        loop {
            let l = self.ident()?;
            self.expect_sym(sep)?;
            fields.push((l, self.term()?));
            if self.at_sym(",") {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_sym(">")?;
        Ok(if is_type { Ast::RecTypeSugar(fields, span) } else { Ast::RecSugar(fields, span) })
    }

    /// `x:K, y:K'` (possibly empty, or `()`), terminated by `until` or EOF.
    pub(crate) fn context_entries(&mut self) -> Result<Vec<(String, AstKind, Span)>, ParseError> {
        let mut out = Vec::new();
        if self.at_sym("(") && self.sym_at(1, ")") {
            self.bump();
            self.bump();
            return Ok(out);
        }
        if !self.is_ident_at(0) {
            return Ok(out);
        }
        loop {
            let span = self.span();
            let x = self.ident()?;
            self.expect_sym(":")?;
            let k = self.kind()?;
            out.push((x, k, span));
            if self.at_sym(",") {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Elaboration

enum Scope {
    Var(String),
    /// Binder of a desugared field family; earlier labels resolve to
    /// selections from it.
    Family(Vec<String>),
}

#[derive(Default)]
pub struct Elaborator {
    scope: Vec<Scope>,
}

fn elab_err<T>(span: Span, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Elab { span, msg: msg.into() })
}

impl Elaborator {
    pub fn new() -> Self {
        Elaborator { scope: Vec::new() }
    }

    fn resolve(&self, name: &str) -> Term {
        for (depth, entry) in self.scope.iter().rev().enumerate() {
            match entry {
                Scope::Var(s) if s == name => return Term::Bound(depth as u32),
                Scope::Family(labels) if labels.iter().any(|l| l == name) => {
                    return Term::sel(Term::Bound(depth as u32), name);
                }
                _ => {}
            }
        }
        Term::var(name)
    }

    fn binder(&mut self, x: &str) -> Scope {
        if x == "_" {
            // anonymous binders are never referenced
            Scope::Var(String::new())
        } else {
            Scope::Var(x.to_string())
        }
    }

    pub fn kind(&mut self, k: &AstKind) -> Result<Kind, ParseError> {
        Ok(match k {
            AstKind::Type => Kind::Type,
            AstKind::RType => Kind::RType,
            AstKind::RTypeL(ls) => Kind::RTypeL(ls.iter().map(|l| Label::new(l)).collect::<LabelSet>()),
            AstKind::El(t) => Kind::El(Arc::new(self.term(t, None)?)),
            AstKind::Prod(x, d, c) => {
                let dom = self.kind(d)?;
                let b = self.binder(x);
                self.scope.push(b);
                let cod = self.kind(c);
                self.scope.pop();
                Kind::Prod(Hint::new(x), Arc::new(dom), Arc::new(cod?))
            }
        })
    }

    /// Elaborates a term. `expected` is the record type (a core term) the
    /// term is checked against, if known; it supplies omitted families.
    pub fn term(&mut self, t: &Ast, expected: Option<&Term>) -> Result<Term, ParseError> {
        Ok(match t {
            Ast::Var(x, span) => {
                if x == "_" {
                    return elab_err(*span, "`_` cannot be used as a term");
                }
                self.resolve(x)
            }
            Ast::Lam(x, k, body, _) => {
                let dom = self.kind(k)?;
                let b = self.binder(x);
                self.scope.push(b);
                let body = self.term(body, None);
                self.scope.pop();
                Term::Lam(Hint::new(x), Arc::new(dom), Arc::new(body?))
            }
            Ast::App(f, a) => Term::app(self.term(f, None)?, self.term(a, None)?),
            Ast::EmptyRec(_) => Term::EmptyRec,
            Ast::RecTypeExt(r, l, a, _) => {
                Term::RecTypeExt(Arc::new(self.term(r, None)?), Label::new(l), Arc::new(self.term(a, None)?))
            }
            Ast::RecExt(r, l, a, fam, span) => {
                let (inner_expected, fam_expected) = match expected {
                    Some(Term::RecTypeExt(rr, el, fa)) if el.as_str() == l => (Some(&**rr), Some(&**fa)),
                    _ => (None, None),
                };
                let r = self.term(r, inner_expected)?;
                let a = self.term(a, None)?;
                let fam = match (fam, fam_expected) {
                    (Some(f), _) => self.term(f, None)?,
                    (None, Some(f)) => f.clone(),
                    (None, None) => {
                        return elab_err(
                            *span,
                            format!("field `{l}` needs a family annotation `: A` (no expected record type is known here)"),
                        )
                    }
                };
                Term::RecExt(Arc::new(r), Label::new(l), Arc::new(a), Arc::new(fam))
            }
            Ast::Restr(r, _) => Term::restr(self.term(r, None)?),
            Ast::Sel(r, l, _) => Term::Sel(Arc::new(self.term(r, None)?), Label::new(l)),
            Ast::RecTypeSugar(fields, span) => self.record_type_sugar(fields, *span)?,
            Ast::RecSugar(fields, span) => self.record_sugar(fields, expected, *span)?,
        })
    }

    /// `<l1 : A1, ..., ln : An>` becomes nested extensions whose i-th family
    /// is `[x : R_{i-1}] A_i` with earlier labels `l` in `A_i` read as `x.l`.
    fn record_type_sugar(&mut self, fields: &[(String, Ast)], span: Span) -> Result<Term, ParseError> {
        let mut acc = Term::EmptyRec;
        let mut seen: Vec<String> = Vec::new();
        for (i, (l, ty)) in fields.iter().enumerate() {
            self.scope.push(Scope::Family(seen.clone()));
            let body = self.term(ty, None);
            self.scope.pop();
            let body = body?;
            let later: Vec<&String> = fields[i + 1..].iter().map(|(m, _)| m).collect();
            for fv in body.free_vars() {
                if later.iter().any(|m| m.as_str() == fv.as_str()) && !seen.iter().any(|s| s == fv.as_str()) {
                    return elab_err(ty.span(), format!("label `{fv}` is referenced before it is introduced"));
                }
            }
            let fam = Term::Lam(Hint::new("x"), Arc::new(Kind::El(Arc::new(acc.clone()))), Arc::new(body));
            acc = Term::RecTypeExt(Arc::new(acc), Label::new(l), Arc::new(fam));
            seen.push(l.clone());
        }
        let _ = span;
        Ok(acc)
    }

    fn record_sugar(&mut self, fields: &[(String, Ast)], expected: Option<&Term>, span: Span) -> Result<Term, ParseError> {
        let Some(expected) = expected else {
            return elab_err(span, "record `<l = a, ...>` needs an expected record type (use it in a `check` directive)");
        };
        // collect the expected fields outermost-last
        let mut spine = Vec::new();
        let mut cur = expected;
        while let Term::RecTypeExt(r, l, fam) = cur {
            spine.push((l.clone(), fam.clone()));
            cur = r;
        }
        if !matches!(cur, Term::EmptyRec) {
            return elab_err(span, format!("expected record type is not a record type literal: {expected}"));
        }
        spine.reverse();
        if spine.len() != fields.len() {
            return elab_err(
                span,
                format!("record has {} fields but the expected record type has {}", fields.len(), spine.len()),
            );
        }
        let mut acc = Term::EmptyRec;
        for ((l, val), (el, fam)) in fields.iter().zip(spine) {
            if l != el.as_str() {
                return elab_err(val.span(), format!("expected field `{el}`, found `{l}`"));
            }
            let v = self.term(val, None)?;
            acc = Term::RecExt(Arc::new(acc), el, Arc::new(v), fam);
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Entry points

pub fn parse_ast(text: &str) -> Result<Ast, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    Elaborator::new().term(&parse_ast(text)?, None)
}

/// Parses a term, filling omitted record families from `expected`.
pub fn parse_term_against(text: &str, expected: &Term) -> Result<Term, ParseError> {
    Elaborator::new().term(&parse_ast(text)?, Some(expected))
}

pub fn parse_kind(text: &str) -> Result<Kind, ParseError> {
    let mut p = Parser::new(text)?;
    let k = p.kind()?;
    p.expect_eof()?;
    Elaborator::new().kind(&k)
}

pub fn parse_context(text: &str) -> Result<Context, ParseError> {
    let mut p = Parser::new(text)?;
    let entries = p.context_entries()?;
    p.expect_eof()?;
    context_from_entries(entries)
}

pub(crate) fn context_from_entries(entries: Vec<(String, AstKind, Span)>) -> Result<Context, ParseError> {
    let mut ctx = Context::new();
    for (x, k, _) in entries {
        let k = Elaborator::new().kind(&k)?;
        ctx.push(Name::new(&x), k);
    }
    Ok(ctx)
}

/// Desugars `<l1 : A1, ..., ln : An>` given already-parsed field types.
pub fn desugar_record_type(fields: &[(&str, &str)]) -> Result<Term, ParseError> {
    let mut asts = Vec::new();
    for (l, ty) in fields {
        asts.push((l.to_string(), parse_ast(ty)?));
    }
    Elaborator::new().record_type_sugar(&asts, Span::default())
}

// ---------------------------------------------------------------------------
// Source files

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    /// `x : K;`
    Declare(Name, Kind),
    /// `check M : K;`
    Check(Ast, AstKind),
    /// `eq M = N : K;`
    Eq(Ast, Ast, AstKind),
    /// `normalize M;`
    Normalize(Ast),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceFile {
    pub directives: Vec<(Directive, Span)>,
}

pub fn parse_file(text: &str) -> Result<SourceFile, ParseError> {
    let mut p = Parser::new(text)?;
    let mut directives = Vec::new();
    loop {
        let span = p.span();
        let d = match p.peek().clone() {
            Tok::Eof => break,
            Tok::Ident(s) if s == "check" => {
                p.bump();
                let t = p.term()?;
                p.expect_sym(":")?;
                Directive::Check(t, p.kind()?)
            }
            Tok::Ident(s) if s == "eq" => {
                p.bump();
                let a = p.term()?;
                p.expect_sym("=")?;
                let b = p.term()?;
                p.expect_sym(":")?;
                Directive::Eq(a, b, p.kind()?)
            }
            Tok::Ident(s) if s == "normalize" => {
                p.bump();
                Directive::Normalize(p.term()?)
            }
            Tok::Ident(_) => {
                let x = p.ident()?;
                p.expect_sym(":")?;
                let k = p.kind()?;
                Directive::Declare(Name::new(&x), Elaborator::new().kind(&k)?)
            }
            t => return p.error(format!("expected a declaration or directive, found {t}")),
        };
        p.expect_sym(";")?;
        directives.push((d, span));
    }
    Ok(SourceFile { directives })
}

/// Elaborates a surface kind (for callers holding a parsed directive).
pub fn elaborate_kind(k: &AstKind) -> Result<Kind, ParseError> {
    Elaborator::new().kind(k)
}

/// Elaborates a surface term against an optional expected record type.
pub fn elaborate_term(t: &Ast, expected: Option<&Term>) -> Result<Term, ParseError> {
    Elaborator::new().term(t, expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::term_to_string;

    #[test]
    fn basic_terms() {
        assert_eq!(parse_term("<>").unwrap(), Term::EmptyRec);
        assert_eq!(
            parse_term("<r, l = a : A>").unwrap(),
            Term::rec(Term::var("r"), "l", Term::var("a"), Term::var("A"))
        );
        assert_eq!(parse_term("[x:Type]x").unwrap(), Term::lam("x", Kind::Type, Term::var("x")));
        assert_eq!(parse_term("⟨⟩").unwrap(), Term::EmptyRec);
    }

    #[test]
    fn restriction_versus_abstraction() {
        assert_eq!(parse_term("[r]").unwrap(), Term::restr(Term::var("r")));
        assert_eq!(parse_term("[f(x)]").unwrap(), Term::restr(Term::app(Term::var("f"), Term::var("x"))));
        assert!(matches!(parse_term("[x : Type] x").unwrap(), Term::Lam(..)));
    }

    #[test]
    fn el_may_be_omitted_in_kinds() {
        assert_eq!(parse_kind("T").unwrap(), Kind::el(Term::var("T")));
        assert_eq!(parse_kind("El(T)").unwrap(), Kind::el(Term::var("T")));
        assert_eq!(
            parse_kind("(x:T)Type").unwrap(),
            Kind::prod("x", Kind::el(Term::var("T")), Kind::Type)
        );
        assert_eq!(parse_kind("RType[]").unwrap(), Kind::RTypeL(LabelSet::new()));
        assert_eq!(parse_kind("RType[l, m]").unwrap(), Kind::rtype_l(["l", "m"]));
    }

    #[test]
    fn dependency_sugar() {
        let got = parse_term("<n : Nat, v : Vect(n)>").unwrap();
        let nat = Term::lam("_", Kind::el(Term::EmptyRec), Term::var("Nat"));
        let r1 = Term::rec_type(Term::EmptyRec, "n", nat);
        let vfam = Term::lam(
            "x",
            Kind::el(r1.clone()),
            Term::app(Term::var("Vect"), Term::sel(Term::var("x"), "n")),
        );
        assert_eq!(got, Term::rec_type(r1, "v", vfam));
        assert_eq!(
            term_to_string(&got),
            "<<<>, n : [_:El(<>)]Nat>, v : [x:El(<<>, n : [_:El(<>)]Nat>)]Vect(x.n)>"
        );
    }

    #[test]
    fn sugar_without_dependencies_is_vacuous() {
        let got = parse_term("<a : T, b : T>").unwrap();
        let Term::RecTypeExt(inner, _, fb) = &got else { panic!() };
        let Term::RecTypeExt(_, _, fa) = &**inner else { panic!() };
        for fam in [fa, fb] {
            let Term::Lam(_, _, body) = &**fam else { panic!() };
            assert!(!body.has_loose(0));
        }
    }

    #[test]
    fn forward_label_reference_is_rejected() {
        let err = parse_term("<v : Vect(n), n : Nat>").unwrap_err();
        assert!(err.to_string().contains("before it is introduced"), "{err}");
    }

    #[test]
    fn omitted_family_needs_expectation() {
        assert!(parse_term("<<>, l = a>").is_err());
        let expected = parse_term("<l : T>").unwrap();
        let got = parse_term_against("<l = a>", &expected).unwrap();
        let fam = Term::lam("_", Kind::el(Term::EmptyRec), Term::var("T"));
        assert_eq!(got, Term::rec(Term::EmptyRec, "l", Term::var("a"), fam));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_term("[x:Type]\n  (").unwrap_err();
        assert_eq!(err.span(), Span { line: 2, col: 4 });
        assert!(parse_term("_").is_err());
    }

    #[test]
    fn files() {
        let src = "T : Type; -- a type\n c : T;\n check c : T;\n eq c = c : T;\n normalize c;";
        let f = parse_file(src).unwrap();
        assert_eq!(f.directives.len(), 5);
        assert!(matches!(f.directives[2].0, Directive::Check(..)));
        assert_eq!(f.directives[1].1, Span { line: 2, col: 2 });
    }

    #[test]
    fn contexts() {
        let g = parse_context("T:Type, c:El(T)").unwrap();
        assert_eq!(g.len(), 2);
        assert!(parse_context("()").unwrap().is_empty());
        assert!(parse_context("").unwrap().is_empty());
    }
}
