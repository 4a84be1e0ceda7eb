//! Independent type checker for core programs.
//!
//! Elaboration is trusted nowhere: every program it produces is run back
//! through this checker, and so is every intermediate evaluation state in
//! the tests. The checker is syntax directed and never infers anything.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::prelude::builtins;
use crate::syntax::{CoreBinding, CoreDecl, CoreEnv, CoreProgram, Term, Type};
use crate::Level;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LintErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{name}` is bound at level {bound} but used at level {used}")]
    LevelMismatch {
        name: String,
        bound: Level,
        used: Level,
    },
    #[error("unbound global `{0}`")]
    UnboundGlobal(String),
    #[error("global `{0}` is used before its definition")]
    ForwardGlobalReference(String),
    #[error("unbound splice variable `{0}`")]
    UnboundSplice(String),
    #[error("splice variable `{name}` is used {reason}")]
    SpliceMisuse { name: String, reason: String },
    #[error("unbound type variable `{0}`")]
    UnboundTypeVariable(String),
    #[error("type mismatch in {context}: expected {expected}, found {found}")]
    Mismatch {
        context: String,
        expected: Type,
        found: Type,
    },
    #[error("applied a non-function of type {0}")]
    NotAFunction(Type),
    #[error("type application to a non-polymorphic term of type {0}")]
    NotPolymorphic(Type),
    #[error("`{0}` is defined twice")]
    Duplicate(String),
}

impl LintErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            LintErrorKind::UnboundVariable(_) => "UnboundVariable",
            LintErrorKind::LevelMismatch { .. } => "LevelMismatch",
            LintErrorKind::UnboundGlobal(_) => "UnboundGlobal",
            LintErrorKind::ForwardGlobalReference(_) => "ForwardGlobalReference",
            LintErrorKind::UnboundSplice(_) => "UnboundSplice",
            LintErrorKind::SpliceMisuse { .. } => "SpliceMisuse",
            LintErrorKind::UnboundTypeVariable(_) => "UnboundTypeVariable",
            LintErrorKind::Mismatch { .. } => "TypeMismatch",
            LintErrorKind::NotAFunction(_) => "NotAFunction",
            LintErrorKind::NotPolymorphic(_) => "NotPolymorphic",
            LintErrorKind::Duplicate(_) => "DuplicateName",
        }
    }
}

/// A lint failure and the declaration it was found in (`None` for main).
#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{}: {kind}", decl.as_deref().unwrap_or("main"))]
pub struct LintError {
    pub decl: Option<String>,
    pub kind: LintErrorKind,
}

type LintResult<T> = Result<T, LintErrorKind>;

/// Top-level bindings visible to a term: builtins, earlier `def`s and
/// earlier `spdef`s.
#[derive(Clone, Debug)]
pub struct CoreTheory {
    globals: BTreeMap<String, Type>,
    spglobals: BTreeMap<String, (CoreEnv, Type, Level)>,
    later: Vec<String>,
}

impl Default for CoreTheory {
    fn default() -> Self {
        CoreTheory::new()
    }
}

impl CoreTheory {
    pub fn new() -> CoreTheory {
        CoreTheory {
            globals: builtins()
                .iter()
                .map(|b| (b.name.to_string(), b.core_type()))
                .collect(),
            spglobals: BTreeMap::new(),
            later: Vec::new(),
        }
    }

    /// Extend with a global, as a `def` would.
    pub fn with_global(mut self, name: impl Into<String>, ty: Type) -> CoreTheory {
        self.globals.insert(name.into(), ty);
        self
    }

    fn defines(&self, name: &str) -> bool {
        self.globals.contains_key(name) || self.spglobals.contains_key(name)
    }
}

/// Check a whole program, threading the theory through its declarations.
pub fn lint_program(p: &CoreProgram) -> Result<(), LintError> {
    let mut theory = CoreTheory::new();
    theory.later = p.decls.iter().map(|d| d.name().to_string()).collect();
    for d in &p.decls {
        let at = |kind| LintError {
            decl: Some(d.name().to_string()),
            kind,
        };
        theory.later.remove(0);
        if theory.defines(d.name()) {
            return Err(at(LintErrorKind::Duplicate(d.name().to_string())));
        }
        match d {
            CoreDecl::Def { name, ty, body } => {
                let env = CoreEnv::new();
                check_type(&env, ty).map_err(at)?;
                let found = lint_term(&theory, &env, 0, body).map_err(at)?;
                expect(ty, &found, "definition body").map_err(at)?;
                theory.globals.insert(name.clone(), ty.clone());
            }
            CoreDecl::SpDef {
                env,
                level,
                name,
                ty,
                body,
            } => {
                check_env(env).map_err(at)?;
                check_type(env, ty).map_err(at)?;
                let found = lint_term(&theory, env, *level, body).map_err(at)?;
                expect(&Type::code(ty.clone()), &found, "splice definition").map_err(at)?;
                theory
                    .spglobals
                    .insert(name.clone(), (env.clone(), ty.clone(), level + 1));
            }
        }
    }
    let at = |kind| LintError { decl: None, kind };
    check_type(&CoreEnv::new(), &p.main_ty).map_err(at)?;
    let found = lint_term(&theory, &CoreEnv::new(), 0, &p.main).map_err(at)?;
    expect(&p.main_ty, &found, "main").map_err(at)
}

fn expect(expected: &Type, found: &Type, context: &str) -> LintResult<()> {
    if expected.alpha_eq(found) {
        Ok(())
    } else {
        Err(LintErrorKind::Mismatch {
            context: context.to_string(),
            expected: expected.clone(),
            found: found.clone(),
        })
    }
}

/// Every free type variable of `ty` is bound in `env`.
fn check_type(env: &CoreEnv, ty: &Type) -> LintResult<()> {
    match ty.free_vars().into_iter().find(|a| !env.has_tyvar(a)) {
        Some(a) => Err(LintErrorKind::UnboundTypeVariable(a)),
        None => Ok(()),
    }
}

/// Types in an environment only mention type variables bound before them.
fn check_env(env: &CoreEnv) -> LintResult<()> {
    let mut prefix = CoreEnv::new();
    for b in env.iter() {
        match b {
            CoreBinding::Val { ty, .. } => check_type(&prefix, ty)?,
            CoreBinding::Splice { env: delta, ty, .. } => {
                check_env(delta)?;
                check_type(delta, ty)?;
            }
            CoreBinding::TyVar(_) => {}
        }
        prefix.push(b.clone());
    }
    Ok(())
}

/// The type of `t` at `level` under `env`.
pub fn lint_term(theory: &CoreTheory, env: &CoreEnv, level: Level, t: &Term) -> LintResult<Type> {
    match t {
        Term::Var(x) => {
            let (ty, bound) = env
                .lookup_val(x)
                .ok_or_else(|| LintErrorKind::UnboundVariable(x.clone()))?;
            if bound != level {
                return Err(LintErrorKind::LevelMismatch {
                    name: x.clone(),
                    bound,
                    used: level,
                });
            }
            Ok(ty.clone())
        }
        Term::Global(k) => {
            if let Some(ty) = theory.globals.get(k) {
                Ok(ty.clone())
            } else if theory.later.contains(k) {
                Err(LintErrorKind::ForwardGlobalReference(k.clone()))
            } else {
                Err(LintErrorKind::UnboundGlobal(k.clone()))
            }
        }
        Term::SpliceVar(sp) => {
            let misuse = |reason: String| LintErrorKind::SpliceMisuse {
                name: sp.clone(),
                reason,
            };
            let (delta, ty, bound) = if let Some(found) = env.lookup_splice(sp) {
                found
            } else if let Some((delta, ty, bound)) = theory.spglobals.get(sp) {
                (delta, ty, *bound)
            } else if theory.later.contains(sp) {
                return Err(LintErrorKind::ForwardGlobalReference(sp.clone()));
            } else {
                return Err(LintErrorKind::UnboundSplice(sp.clone()));
            };
            if bound != level {
                return Err(misuse(format!(
                    "at level {level} but bound at level {bound}"
                )));
            }
            if !delta.is_sub_env_of(env) {
                return Err(misuse("outside the environment it was captured in".into()));
            }
            Ok(ty.clone())
        }
        Term::Lam(x, ty, body) => {
            check_type(env, ty)?;
            let inner = env.extended(CoreBinding::Val {
                name: x.clone(),
                ty: ty.clone(),
                level,
            });
            let bt = lint_term(theory, &inner, level, body)?;
            Ok(Type::arrow(ty.clone(), bt))
        }
        Term::App(f, a) => {
            let ft = lint_term(theory, env, level, f)?;
            let at = lint_term(theory, env, level, a)?;
            match ft {
                Type::Arrow(dom, cod) => {
                    expect(&dom, &at, "application")?;
                    Ok(*cod)
                }
                other => Err(LintErrorKind::NotAFunction(other)),
            }
        }
        Term::TyLam(a, body) => {
            let inner = env.extended(CoreBinding::TyVar(a.clone()));
            let bt = lint_term(theory, &inner, level, body)?;
            Ok(Type::Forall(a.clone(), Box::new(bt)))
        }
        Term::TyApp(f, arg) => {
            check_type(env, arg)?;
            match lint_term(theory, env, level, f)? {
                Type::Forall(a, body) => Ok(body.subst(&a, arg)),
                other => Err(LintErrorKind::NotPolymorphic(other)),
            }
        }
        Term::Quote(body, sps) => {
            let mut inner = env.clone();
            for b in sps {
                let local = env.concat(&b.env);
                check_type(&local, &b.ty)?;
                let rt = lint_term(theory, &local, level, &b.rhs)?;
                expect(&Type::code(b.ty.clone()), &rt, "splice point")?;
                inner.push(CoreBinding::Splice {
                    name: b.name.clone(),
                    env: b.env.clone(),
                    ty: b.ty.clone(),
                    level: level + 1,
                });
            }
            Ok(Type::code(lint_term(theory, &inner, level + 1, body)?))
        }
        Term::Int(_) => Ok(Type::Int),
        Term::Bool(_) => Ok(Type::Bool),
        Term::Str(_) => Ok(Type::Str),
        Term::Ifz(c, z, nz) => {
            let ct = lint_term(theory, env, level, c)?;
            expect(&Type::Int, &ct, "ifz condition")?;
            let zt = lint_term(theory, env, level, z)?;
            let nt = lint_term(theory, env, level, nz)?;
            expect(&zt, &nt, "ifz branches")?;
            Ok(zt)
        }
    }
}
