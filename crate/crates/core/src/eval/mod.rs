//! Small-step evaluation of core programs.
//!
//! Declarations are run top to bottom. A `def` is evaluated to a value and
//! then substituted into the rest of the program; an `spdef` is evaluated to
//! a quotation whose body, with its own splices filled in, replaces the
//! splice variable. Splice definitions therefore run before the definitions
//! that mention them, which is when code generation happens.

mod step;
mod subst;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::prelude::builtins;
use crate::syntax::{pretty_term, CoreDecl, CoreProgram, SpliceBinding, Term};

pub use step::{is_value, step};
pub use subst::{shift_levels, subst_global, subst_splice, subst_ty, subst_val, Fresh};

/// Name of the rule that justified a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    #[serde(rename = "DE_Beta")]
    Beta,
    #[serde(rename = "DE_TBeta")]
    TyBeta,
    #[serde(rename = "DE_Delta")]
    Delta,
    #[serde(rename = "DE_Fix")]
    Fix,
    #[serde(rename = "DE_Ifz")]
    Ifz,
    #[serde(rename = "DP_DefBeta")]
    DefBeta,
    #[serde(rename = "DP_SPDefBeta")]
    SpDefBeta,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Beta => "DE_Beta",
            Rule::TyBeta => "DE_TBeta",
            Rule::Delta => "DE_Delta",
            Rule::Fix => "DE_Fix",
            Rule::Ifz => "DE_Ifz",
            Rule::DefBeta => "DP_DefBeta",
            Rule::SpDefBeta => "DP_SPDefBeta",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("evaluation is stuck at `{term}`")]
    Stuck { term: String },
    #[error("splice definition `{name}` evaluated to `{value}`, which is not a quotation")]
    NotCode { name: String, value: String },
    #[error("unbound splice variable `{0}`")]
    UnboundSpliceVariable(String),
    #[error("integer overflow in `{term}`")]
    Overflow { term: String },
    #[error("step budget of {0} exhausted")]
    BudgetExceeded(u64),
}

impl RuntimeError {
    pub fn code(&self) -> &'static str {
        match self {
            RuntimeError::Stuck { .. } => "Stuck",
            RuntimeError::NotCode { .. } => "NotCode",
            RuntimeError::UnboundSpliceVariable(_) => "UnboundSpliceVariable",
            RuntimeError::Overflow { .. } => "Overflow",
            RuntimeError::BudgetExceeded(_) => "BudgetExceeded",
        }
    }
}

/// Upper bound on the number of steps a run may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepBudget(pub u64);

impl StepBudget {
    pub const DEFAULT: StepBudget = StepBudget(1_000_000);

    /// The default, overridden by `STAGEC_MAX_STEPS` when it holds a number.
    pub fn from_env() -> StepBudget {
        std::env::var("STAGEC_MAX_STEPS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(StepBudget)
            .unwrap_or(StepBudget::DEFAULT)
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::DEFAULT
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub value: Term,
    pub steps: u64,
}

impl RunOutcome {
    /// The value as it is printed by `stagec run`.
    pub fn display(&self) -> String {
        pretty_term(&self.value)
    }
}

/// Fill the splice variables of a quotation body with the code of its
/// evaluated splice environment.
pub fn apply_splice_env(
    body: &Term,
    sps: &[SpliceBinding],
    globals: &BTreeSet<String>,
) -> Result<Term, RuntimeError> {
    let mut out = body.clone();
    for s in sps {
        let Term::Quote(code, inner) = &s.rhs else {
            return Err(RuntimeError::NotCode {
                name: s.name.clone(),
                value: pretty_term(&s.rhs),
            });
        };
        let code = apply_splice_env(code, inner, globals)?;
        out = subst_splice(&out, &s.name, &code);
    }
    if let Some(sp) = free_splices(&out)
        .into_iter()
        .find(|sp| !globals.contains(sp))
    {
        return Err(RuntimeError::UnboundSpliceVariable(sp));
    }
    Ok(out)
}

fn free_splices(t: &Term) -> BTreeSet<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match t {
            Term::SpliceVar(s) => {
                if !bound.contains(s) {
                    out.insert(s.clone());
                }
            }
            Term::Lam(_, _, b) | Term::TyLam(_, b) | Term::TyApp(b, _) => go(b, bound, out),
            Term::App(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Term::Quote(b, sps) => {
                for s in sps {
                    go(&s.rhs, bound, out);
                }
                let mark = bound.len();
                bound.extend(sps.iter().map(|s| s.name.clone()));
                go(b, bound, out);
                bound.truncate(mark);
            }
            Term::Ifz(a, b, c) => {
                go(a, bound, out);
                go(b, bound, out);
                go(c, bound, out);
            }
            Term::Var(_) | Term::Global(_) | Term::Int(_) | Term::Bool(_) | Term::Str(_) => {}
        }
    }
    let mut out = BTreeSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// A program being evaluated.
#[derive(Clone, Debug)]
pub struct Machine {
    pub program: CoreProgram,
    fresh: Fresh,
}

impl Machine {
    pub fn new(program: CoreProgram) -> Machine {
        let mut avoid = program.names();
        avoid.extend(builtins().iter().map(|b| b.name.to_string()));
        Machine {
            program,
            fresh: Fresh::new(avoid),
        }
    }

    /// Take one step; `None` once main is a value.
    pub fn step(&mut self) -> Result<Option<Rule>, RuntimeError> {
        let p = &mut self.program;
        let Some(first) = p.decls.first() else {
            return match step(&p.main, &mut self.fresh)? {
                Some((main, rule)) => {
                    p.main = main;
                    Ok(Some(rule))
                }
                None => Ok(None),
            };
        };
        let body = first.body();
        if let Some((next, rule)) = step(body, &mut self.fresh)? {
            match &mut p.decls[0] {
                CoreDecl::Def { body, .. } | CoreDecl::SpDef { body, .. } => *body = next,
            }
            return Ok(Some(rule));
        }
        match p.decls.remove(0) {
            CoreDecl::Def { name, body, .. } => {
                for d in &mut p.decls {
                    match d {
                        CoreDecl::Def { body: b, .. } => *b = subst_global(b, &name, &body, 0),
                        CoreDecl::SpDef { body: b, level, .. } => {
                            *b = subst_global(b, &name, &body, *level)
                        }
                    }
                }
                p.main = subst_global(&p.main, &name, &body, 0);
                Ok(Some(Rule::DefBeta))
            }
            CoreDecl::SpDef { name, body, .. } => {
                let Term::Quote(code, sps) = &body else {
                    return Err(RuntimeError::NotCode {
                        name,
                        value: pretty_term(&body),
                    });
                };
                let globals = p
                    .decls
                    .iter()
                    .filter(|d| matches!(d, CoreDecl::SpDef { .. }))
                    .map(|d| d.name().to_string())
                    .collect();
                let code = apply_splice_env(code, sps, &globals)?;
                for d in &mut p.decls {
                    match d {
                        CoreDecl::Def { body: b, .. } | CoreDecl::SpDef { body: b, .. } => {
                            *b = subst_splice(b, &name, &code)
                        }
                    }
                }
                p.main = subst_splice(&p.main, &name, &code);
                Ok(Some(Rule::SpDefBeta))
            }
        }
    }
}

/// Run to a value, reporting every step to `on_step`.
pub fn run_program_with(
    program: CoreProgram,
    budget: StepBudget,
    mut on_step: impl FnMut(u64, Rule, &CoreProgram),
) -> Result<RunOutcome, RuntimeError> {
    let mut m = Machine::new(program);
    let mut steps = 0;
    while let Some(rule) = m.step()? {
        steps += 1;
        if steps > budget.0 {
            return Err(RuntimeError::BudgetExceeded(budget.0));
        }
        on_step(steps, rule, &m.program);
    }
    Ok(RunOutcome {
        value: m.program.main,
        steps,
    })
}

pub fn run_program(program: CoreProgram, budget: StepBudget) -> Result<RunOutcome, RuntimeError> {
    run_program_with(program, budget, |_, _, _| {})
}

/// One line of `--trace --json` output.
#[derive(Clone, Debug, Serialize)]
pub struct TraceEvent {
    pub step: u64,
    pub rule: Rule,
    pub program: String,
}
