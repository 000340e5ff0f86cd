//! Algorithmic type checking on top of the evaluator. Kinds are compared by
//! normal form up to α (with the record-kind inclusions), and definitional
//! equality is decided by comparing normal forms.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::parse::{elaborate_kind, elaborate_term, parse_file, Directive, ParseError};
use crate::print::{context_to_string, kind_in_context, term_in_context};
use crate::syntax::{Context, Kind, Term};
use crate::tos::{Engine, TosError, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// The subterm (or context entry) where evaluation got stuck.
    pub path: String,
    pub reason: String,
    /// The rule that could not be applied, when known.
    pub rule: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub context_nf: Option<Context>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inferred_kind_nf: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub whnf: Option<Term>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nf: Option<Term>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub traces: Vec<Arc<Trace>>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    fn ok() -> Self {
        CheckReport {
            verdict: Verdict::Accepted,
            context_nf: None,
            inferred_kind_nf: None,
            whnf: None,
            nf: None,
            failure: None,
            traces: Vec::new(),
        }
    }

    fn rejected(failure: Failure) -> Self {
        CheckReport { verdict: Verdict::Rejected, failure: Some(failure), ..CheckReport::ok() }
    }

    fn from_error(e: TosError) -> Self {
        let failure = match e {
            TosError::IllFormed { entry, reason } => Failure { path: entry, reason, rule: Some("WEAK".into()) },
            TosError::NotDerivable { subject, rule, reason } => Failure { path: subject, reason, rule: Some(rule.into()) },
            TosError::FuelExhausted => Failure { path: String::new(), reason: "evaluation fuel exhausted".into(), rule: None },
        };
        CheckReport::rejected(failure)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Accepted => {
                f.write_str("accepted")?;
                if let Some(k) = &self.inferred_kind_nf {
                    write!(f, " : {k}")?;
                }
                if let Some(n) = &self.nf {
                    write!(f, "  (normal form {n})")?;
                }
                Ok(())
            }
            Verdict::Rejected => {
                let fl = self.failure.as_ref().expect("rejected report carries a failure");
                f.write_str("rejected")?;
                if let Some(r) = &fl.rule {
                    write!(f, " [{r}]")?;
                }
                if !fl.path.is_empty() {
                    write!(f, " at `{}`", fl.path)?;
                }
                write!(f, ": {}", fl.reason)
            }
        }
    }
}

/// The algorithmic checker. Wraps an [`Engine`] so fuel, tracing and rule
/// counters carry across calls.
#[derive(Debug, Clone, Default)]
pub struct Checker {
    pub engine: Engine,
}

impl Checker {
    pub fn new() -> Self {
        Checker { engine: Engine::new() }
    }

    pub fn with_engine(engine: Engine) -> Self {
        Checker { engine }
    }

    pub fn check_context(&mut self, g: &Context) -> CheckReport {
        match self.engine.eval_context(g) {
            Ok((d, t)) => CheckReport { context_nf: Some(d), traces: t.into_iter().collect(), ..CheckReport::ok() },
            Err(e) => CheckReport::from_error(e),
        }
    }

    /// Well-formedness of a kind, reporting its normal form.
    pub fn check_kind(&mut self, g: &Context, k: &Kind) -> CheckReport {
        match self.engine.eval_kind(g, k) {
            Ok((b, t)) => CheckReport { inferred_kind_nf: Some(b), traces: t.into_iter().collect(), ..CheckReport::ok() },
            Err(e) => CheckReport::from_error(e),
        }
    }

    pub fn infer(&mut self, g: &Context, m: &Term) -> CheckReport {
        match self.engine.eval_term(g, m) {
            Ok((r, t)) => CheckReport {
                inferred_kind_nf: Some(r.kind_nf),
                whnf: Some(r.whnf),
                nf: Some(r.nf),
                traces: t.into_iter().collect(),
                ..CheckReport::ok()
            },
            Err(e) => CheckReport::from_error(e),
        }
    }

    /// `Γ ⊢ M : K`, up to the record-kind inclusions.
    pub fn check(&mut self, g: &Context, m: &Term, k: &Kind) -> CheckReport {
        match self.engine.eval_against(g, m, k) {
            Ok((r, t)) => CheckReport {
                inferred_kind_nf: Some(r.kind_nf),
                whnf: Some(r.whnf),
                nf: Some(r.nf),
                traces: t.into_iter().collect(),
                ..CheckReport::ok()
            },
            Err(e) => CheckReport::from_error(e),
        }
    }

    /// `Γ ⊢ M = N : K`: both check against `K` and share a normal form.
    pub fn equal(&mut self, g: &Context, m: &Term, n: &Term, k: &Kind) -> CheckReport {
        let left = self.check(g, m, k);
        if !left.accepted() {
            return left;
        }
        let right = self.check(g, n, k);
        if !right.accepted() {
            return right;
        }
        let (p, q) = (left.nf.clone().unwrap(), right.nf.clone().unwrap());
        if p != q {
            return CheckReport::rejected(Failure {
                path: format!("{} = {}", term_in_context(g, m), term_in_context(g, n)),
                reason: format!("normal forms differ: {} vs {}", term_in_context(g, &p), term_in_context(g, &q)),
                rule: None,
            });
        }
        let mut traces = left.traces;
        traces.extend(right.traces);
        CheckReport { traces, ..left }
    }
}

/// Human-readable form of a judgement `Γ ⊢ M : K`.
pub fn show_has_kind(g: &Context, m: &Term, k: &Kind) -> String {
    format!("{} |- {} : {}", context_to_string(g), term_in_context(g, m), kind_in_context(g, k))
}

pub fn check_context(g: &Context) -> CheckReport {
    Checker::new().check_context(g)
}

pub fn infer(g: &Context, m: &Term) -> CheckReport {
    Checker::new().infer(g, m)
}

pub fn check(g: &Context, m: &Term, k: &Kind) -> CheckReport {
    Checker::new().check(g, m, k)
}

pub fn equal(g: &Context, m: &Term, n: &Term, k: &Kind) -> CheckReport {
    Checker::new().equal(g, m, n, k)
}

/// Outcome of one directive of a source file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectiveOutcome {
    pub line: usize,
    pub col: usize,
    /// The directive as written back by the printer.
    pub directive: String,
    pub report: CheckReport,
}

/// Outcomes of every directive of a source file, in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceReport {
    pub outcomes: Vec<DirectiveOutcome>,
}

impl SourceReport {
    pub fn accepted(&self) -> bool {
        self.outcomes.iter().all(|o| o.report.accepted())
    }
}

impl fmt::Display for SourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            writeln!(f, "{}:{}: {}", o.line, o.col, o.directive)?;
            writeln!(f, "  {}", o.report)?;
        }
        Ok(())
    }
}

impl Checker {
    /// Runs the directives of a source file. Declarations extend the context
    /// once their kind checks; later directives see them.
    pub fn check_source(&mut self, text: &str) -> Result<SourceReport, ParseError> {
        let file = parse_file(text)?;
        let mut ctx = Context::new();
        let mut outcomes = Vec::new();
        for (d, span) in file.directives {
            let (directive, report) = match d {
                Directive::Declare(x, k) => {
                    let shown = format!("{x} : {}", kind_in_context(&ctx, &k));
                    let report = if ctx.declares(&x) {
                        CheckReport::rejected(Failure {
                            path: x.to_string(),
                            reason: format!("`{x}` is already declared"),
                            rule: Some("WEAK".into()),
                        })
                    } else {
                        self.check_kind(&ctx, &k)
                    };
                    if report.accepted() {
                        ctx.push(x, k);
                    }
                    (shown, report)
                }
                Directive::Check(m, k) => {
                    let k = elaborate_kind(&k)?;
                    let expected = match &k {
                        Kind::El(r) => Some((**r).clone()),
                        _ => None,
                    };
                    let m = elaborate_term(&m, expected.as_ref())?;
                    let shown = format!("check {} : {}", term_in_context(&ctx, &m), kind_in_context(&ctx, &k));
                    (shown, self.check(&ctx, &m, &k))
                }
                Directive::Eq(m, n, k) => {
                    let k = elaborate_kind(&k)?;
                    let expected = match &k {
                        Kind::El(r) => Some((**r).clone()),
                        _ => None,
                    };
                    let m = elaborate_term(&m, expected.as_ref())?;
                    let n = elaborate_term(&n, expected.as_ref())?;
                    let shown = format!(
                        "eq {} = {} : {}",
                        term_in_context(&ctx, &m),
                        term_in_context(&ctx, &n),
                        kind_in_context(&ctx, &k)
                    );
                    (shown, self.equal(&ctx, &m, &n, &k))
                }
                Directive::Normalize(m) => {
                    let m = elaborate_term(&m, None)?;
                    (format!("normalize {}", term_in_context(&ctx, &m)), self.infer(&ctx, &m))
                }
            };
            outcomes.push(DirectiveOutcome { line: span.line, col: span.col, directive, report });
        }
        Ok(SourceReport { outcomes })
    }
}

pub fn check_source(text: &str) -> Result<SourceReport, ParseError> {
    Checker::new().check_source(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_context, parse_kind, parse_term};

    fn c(s: &str) -> Context {
        parse_context(s).unwrap()
    }
    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }
    fn k(s: &str) -> Kind {
        parse_kind(s).unwrap()
    }

    const TWO: &str = "T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)";

    #[test]
    fn contexts() {
        assert!(check_context(&c("")).accepted());
        assert!(check_context(&c("A:Type, x:El(A)")).accepted());
        assert!(!check_context(&c("x:El(y)")).accepted());
    }

    #[test]
    fn inference() {
        let r = infer(&c("T:Type"), &t("<<>, l : [_:El(<>)]T>"));
        assert_eq!(r.inferred_kind_nf, Some(k("RType[l]")));
        let r = infer(&c("A:Type"), &t("<<<>, l : [_:El(<>)]A>, l : [_:El(<<>, l : [_:El(<>)]A>)]A>"));
        assert!(!r.accepted());
        let r = infer(&c(TWO), &t("r.k"));
        assert_eq!(r.inferred_kind_nf, Some(Kind::el(t("T"))));
    }

    #[test]
    fn kind_inclusions() {
        let g = c("T:Type");
        let rt = t("<<>, l : [_:El(<>)]T>");
        assert!(check(&g, &rt, &k("RType[l, m]")).accepted());
        assert!(check(&g, &rt, &k("RType")).accepted());
        assert!(check(&g, &rt, &k("Type")).accepted());
        assert!(!check(&g, &rt, &k("RType[m]")).accepted());
        assert!(!check(&g, &t("<>"), &Kind::el(rt)).accepted());
    }

    #[test]
    fn computation_equalities() {
        let g = c("T:Type, a:El(T), r:El(<<>, k : [_:El(<>)]T>)");
        let fam = "[_:El(<<>, k : [_:El(<>)]T>)]T";
        let pair = format!("<r, l = a : {fam}>");
        assert!(equal(&g, &t(&format!("[{pair}]")), &t("r"), &k("El(<<>, k : [_:El(<>)]T>)")).accepted());
        assert!(equal(&g, &t(&format!("{pair}.l")), &t("a"), &k("El(T)")).accepted());
        assert!(equal(&c(TWO), &t("r.k"), &t("[r].k"), &k("El(T)")).accepted());
        assert!(!equal(&g, &t("a"), &t("r.k"), &k("El(T)")).accepted());
    }

    #[test]
    fn source_files() {
        let src = "T : Type;\nc : El(T);\ncheck <l : T> : RType[l];\ncheck <l = c> : El(<l : T>);\np : El(<l : T>);\ncheck p.l : El(T);\n";
        let r = check_source(src).unwrap();
        assert!(r.accepted(), "{r}");
        assert_eq!(r.outcomes.len(), 6);
        let bad = check_source("T : Type;\ncheck <l : T, l : T> : RType;\n").unwrap();
        assert!(!bad.accepted());
        assert!(bad.to_string().contains("l ∉ L"), "{bad}");
        assert!(check_source("T : Type\n").is_err());
    }

    #[test]
    fn report_serializes() {
        let r = infer(&c("T:Type"), &t("<<>, l : [_:El(<>)]T>"));
        let json = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.to_string(), "accepted : RType[l]  (normal form <<>, l : [_:El(<>)]T>)");
    }
}
