use crate::Level;

use super::types::Type;

/// Explicitly typed core terms. There is no splice form: splice points are
/// `SpliceVar`s bound by a quote's splice environment or by an `spdef`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Global(String),
    SpliceVar(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    TyLam(String, Box<Term>),
    TyApp(Box<Term>, Type),
    Quote(Box<Term>, SpliceEnv),
    Int(i64),
    Bool(bool),
    Str(String),
    Ifz(Box<Term>, Box<Term>, Box<Term>),
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn ty_app(f: Term, t: Type) -> Term {
        Term::TyApp(Box::new(f), t)
    }

    pub fn lam(x: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam(x.into(), ty, Box::new(body))
    }

    pub fn ty_lam(a: impl Into<String>, body: Term) -> Term {
        Term::TyLam(a.into(), Box::new(body))
    }

    pub fn quote(body: Term, env: SpliceEnv) -> Term {
        Term::Quote(Box::new(body), env)
    }

    /// Does the local variable `x` occur free (lexically) in the term?
    pub fn mentions_var(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::Global(_) | Term::SpliceVar(_) => false,
            Term::Lam(y, _, b) => y != x && b.mentions_var(x),
            Term::App(a, b) => a.mentions_var(x) || b.mentions_var(x),
            Term::TyLam(_, b) | Term::TyApp(b, _) => b.mentions_var(x),
            Term::Quote(b, sp) => b.mentions_var(x) || sp.iter().any(|s| s.rhs.mentions_var(x)),
            Term::Int(_) | Term::Bool(_) | Term::Str(_) => false,
            Term::Ifz(a, b, c) => a.mentions_var(x) || b.mentions_var(x) || c.mentions_var(x),
        }
    }

    /// Does some captured environment inside the term list the variable?
    pub fn captures_var(&self, x: &str) -> bool {
        match self {
            Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => false,
            Term::Int(_) | Term::Bool(_) | Term::Str(_) => false,
            Term::Lam(_, _, b) | Term::TyLam(_, b) | Term::TyApp(b, _) => b.captures_var(x),
            Term::App(a, b) => a.captures_var(x) || b.captures_var(x),
            Term::Ifz(a, b, c) => a.captures_var(x) || b.captures_var(x) || c.captures_var(x),
            Term::Quote(b, sp) => {
                b.captures_var(x)
                    || sp
                        .iter()
                        .any(|s| s.env.lookup_val(x).is_some() || s.rhs.captures_var(x))
            }
        }
    }

    /// Collect every name (variables, globals, splice points, binders and
    /// type variables) appearing in the term.
    pub fn names(&self, out: &mut std::collections::BTreeSet<String>) {
        match self {
            Term::Var(x) | Term::Global(x) | Term::SpliceVar(x) => {
                out.insert(x.clone());
            }
            Term::Lam(x, t, b) => {
                out.insert(x.clone());
                out.extend(t.free_vars());
                b.names(out);
            }
            Term::App(a, b) => {
                a.names(out);
                b.names(out);
            }
            Term::TyLam(a, b) => {
                out.insert(a.clone());
                b.names(out);
            }
            Term::TyApp(b, t) => {
                out.extend(t.free_vars());
                b.names(out);
            }
            Term::Quote(b, sp) => {
                b.names(out);
                for s in sp {
                    out.insert(s.name.clone());
                    s.env.names(out);
                    out.extend(s.ty.free_vars());
                    s.rhs.names(out);
                }
            }
            Term::Int(_) | Term::Bool(_) | Term::Str(_) => {}
            Term::Ifz(a, b, c) => {
                a.names(out);
                b.names(out);
                c.names(out);
            }
        }
    }
}

/// One splice point: `Δ ⊢ sp : τ = e`, where `e : Code τ` under `Δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceBinding {
    pub env: CoreEnv,
    pub name: String,
    pub ty: Type,
    pub rhs: Term,
}

pub type SpliceEnv = Vec<SpliceBinding>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreBinding {
    Val {
        name: String,
        ty: Type,
        level: Level,
    },
    Splice {
        name: String,
        env: CoreEnv,
        ty: Type,
        level: Level,
    },
    TyVar(String),
}

impl CoreBinding {
    pub fn name(&self) -> &str {
        match self {
            CoreBinding::Val { name, .. } | CoreBinding::Splice { name, .. } => name,
            CoreBinding::TyVar(a) => a,
        }
    }

    /// Payload equality: same name, level and alpha-equal types.
    pub fn same_as(&self, other: &CoreBinding) -> bool {
        match (self, other) {
            (
                CoreBinding::Val { name, ty, level },
                CoreBinding::Val {
                    name: n2,
                    ty: t2,
                    level: l2,
                },
            ) => name == n2 && level == l2 && ty.alpha_eq(t2),
            (
                CoreBinding::Splice {
                    name,
                    env,
                    ty,
                    level,
                },
                CoreBinding::Splice {
                    name: n2,
                    env: e2,
                    ty: t2,
                    level: l2,
                },
            ) => name == n2 && level == l2 && ty.alpha_eq(t2) && env.same_as(e2),
            (CoreBinding::TyVar(a), CoreBinding::TyVar(b)) => a == b,
            _ => false,
        }
    }
}

/// Core typing environments Γ and captured environments Δ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoreEnv(pub Vec<CoreBinding>);

impl CoreEnv {
    pub fn new() -> CoreEnv {
        CoreEnv(Vec::new())
    }

    pub fn push(&mut self, b: CoreBinding) {
        self.0.push(b);
    }

    pub fn extended(&self, b: CoreBinding) -> CoreEnv {
        let mut e = self.clone();
        e.push(b);
        e
    }

    pub fn concat(&self, other: &CoreEnv) -> CoreEnv {
        let mut e = self.clone();
        e.0.extend(other.0.iter().cloned());
        e
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &CoreBinding> {
        self.0.iter()
    }

    /// Rightmost value binding of `x`.
    pub fn lookup_val(&self, x: &str) -> Option<(&Type, Level)> {
        self.0.iter().rev().find_map(|b| match b {
            CoreBinding::Val { name, ty, level } if name == x => Some((ty, *level)),
            _ => None,
        })
    }

    /// Rightmost splice binding of `sp`.
    pub fn lookup_splice(&self, sp: &str) -> Option<(&CoreEnv, &Type, Level)> {
        self.0.iter().rev().find_map(|b| match b {
            CoreBinding::Splice {
                name,
                env,
                ty,
                level,
            } if name == sp => Some((env, ty, *level)),
            _ => None,
        })
    }

    pub fn has_tyvar(&self, a: &str) -> bool {
        self.0
            .iter()
            .any(|b| matches!(b, CoreBinding::TyVar(x) if x == a))
    }

    pub fn same_as(&self, other: &CoreEnv) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.same_as(b))
    }

    /// Ordered containment: every entry of `self` occurs in `outer` with an
    /// identical payload, in the same relative order.
    pub fn is_sub_env_of(&self, outer: &CoreEnv) -> bool {
        let mut it = outer.0.iter();
        self.0.iter().all(|needle| it.any(|b| b.same_as(needle)))
    }

    pub fn names(&self, out: &mut std::collections::BTreeSet<String>) {
        for b in &self.0 {
            out.insert(b.name().to_string());
            match b {
                CoreBinding::Val { ty, .. } => out.extend(ty.free_vars()),
                CoreBinding::Splice { env, ty, .. } => {
                    env.names(out);
                    out.extend(ty.free_vars());
                }
                CoreBinding::TyVar(_) => {}
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreDecl {
    Def {
        name: String,
        ty: Type,
        body: Term,
    },
    SpDef {
        env: CoreEnv,
        level: Level,
        name: String,
        ty: Type,
        body: Term,
    },
}

impl CoreDecl {
    pub fn name(&self) -> &str {
        match self {
            CoreDecl::Def { name, .. } | CoreDecl::SpDef { name, .. } => name,
        }
    }

    pub fn body(&self) -> &Term {
        match self {
            CoreDecl::Def { body, .. } | CoreDecl::SpDef { body, .. } => body,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreProgram {
    pub decls: Vec<CoreDecl>,
    pub main: Term,
    pub main_ty: Type,
}

impl CoreProgram {
    pub fn names(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for d in &self.decls {
            out.insert(d.name().to_string());
            match d {
                CoreDecl::Def { ty, body, .. } => {
                    out.extend(ty.free_vars());
                    body.names(&mut out);
                }
                CoreDecl::SpDef { env, ty, body, .. } => {
                    env.names(&mut out);
                    out.extend(ty.free_vars());
                    body.names(&mut out);
                }
            }
        }
        self.main.names(&mut out);
        out
    }
}
