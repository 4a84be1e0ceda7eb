//! Substitution on core terms.
//!
//! Captured environments are snapshots of the binders in scope at a splice
//! point. Substituting for a binder (or renaming it) therefore also has to
//! edit the entry that binder contributed to every snapshot below it. That
//! entry is found by counting from the right: it is preceded by one entry
//! for every inner binder of the same name between it and the splice point.

use std::collections::BTreeSet;

use crate::syntax::{fresh_name, CoreBinding, CoreEnv, SpliceBinding, Term, Type};
use crate::Level;

/// Source of binder names that clash with nothing in the program.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    avoid: BTreeSet<String>,
}

impl Fresh {
    pub fn new(avoid: BTreeSet<String>) -> Fresh {
        Fresh { avoid }
    }

    pub fn name(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.avoid);
        self.avoid.insert(n.clone());
        n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ns {
    Val,
    Ty,
}

#[derive(Clone, Debug)]
enum Action {
    Subst(Term),
    SubstTy(Type),
    Rename(String),
}

/// One binder being eliminated or renamed throughout its scope.
struct Act {
    ns: Ns,
    x: String,
    action: Action,
    /// Free value variables of the inserted term.
    fv: BTreeSet<String>,
    /// Free type variables of the inserted term or type.
    ftv: BTreeSet<String>,
}

/// `body[v/x]` for the value binder `x`.
pub fn subst_val(body: &Term, x: &str, v: &Term, fresh: &mut Fresh) -> Term {
    let mut fv = BTreeSet::new();
    free_vals(v, &mut Vec::new(), &mut fv);
    let mut ftv = BTreeSet::new();
    free_tys(v, &mut Vec::new(), &mut ftv);
    Act {
        ns: Ns::Val,
        x: x.to_string(),
        action: Action::Subst(v.clone()),
        fv,
        ftv,
    }
    .term(body, 0, fresh)
}

/// `body[τ/a]` for the type binder `a`.
pub fn subst_ty(body: &Term, a: &str, ty: &Type, fresh: &mut Fresh) -> Term {
    Act {
        ns: Ns::Ty,
        x: a.to_string(),
        action: Action::SubstTy(ty.clone()),
        fv: BTreeSet::new(),
        ftv: ty.free_vars().into_iter().collect(),
    }
    .term(body, 0, fresh)
}

fn rename(ns: Ns, body: &Term, x: &str, to: &str, fresh: &mut Fresh) -> Term {
    let mut set = BTreeSet::new();
    set.insert(to.to_string());
    let (fv, ftv) = match ns {
        Ns::Val => (set, BTreeSet::new()),
        Ns::Ty => (BTreeSet::new(), set),
    };
    Act {
        ns,
        x: x.to_string(),
        action: Action::Rename(to.to_string()),
        fv,
        ftv,
    }
    .term(body, 0, fresh)
}

impl Act {
    /// `shadow` counts the inner binders of `x` passed so far.
    fn term(&self, t: &Term, shadow: usize, fresh: &mut Fresh) -> Term {
        match t {
            Term::Var(y) if self.ns == Ns::Val && *y == self.x && shadow == 0 => {
                match &self.action {
                    Action::Subst(v) => v.clone(),
                    Action::Rename(n) => Term::Var(n.clone()),
                    Action::SubstTy(_) => unreachable!("type action on a value binder"),
                }
            }
            Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => t.clone(),
            Term::Int(_) | Term::Bool(_) | Term::Str(_) => t.clone(),
            Term::Lam(y, ty, b) => {
                let ty = self.ty(ty, shadow);
                if self.ns == Ns::Val && *y == self.x {
                    return Term::lam(y.clone(), ty, self.term(b, shadow + 1, fresh));
                }
                let (y, b) =
                    if self.ns == Ns::Val && self.fv.contains(y) && self.inserts_into(b, shadow) {
                        let y2 = fresh.name(y);
                        let b = rename(Ns::Val, b, y, &y2, fresh);
                        (y2, b)
                    } else {
                        (y.clone(), (**b).clone())
                    };
                Term::lam(y, ty, self.term(&b, shadow, fresh))
            }
            Term::TyLam(a, b) => {
                if self.ns == Ns::Ty && *a == self.x {
                    return Term::ty_lam(a.clone(), self.term(b, shadow + 1, fresh));
                }
                let (a, b) = if self.ftv.contains(a) && self.inserts_into(b, shadow) {
                    let a2 = fresh.name(a);
                    let b = rename(Ns::Ty, b, a, &a2, fresh);
                    (a2, b)
                } else {
                    (a.clone(), (**b).clone())
                };
                Term::ty_lam(a, self.term(&b, shadow, fresh))
            }
            Term::App(f, a) => Term::app(self.term(f, shadow, fresh), self.term(a, shadow, fresh)),
            Term::TyApp(f, ty) => Term::ty_app(self.term(f, shadow, fresh), self.ty(ty, shadow)),
            Term::Quote(body, sps) => {
                let sps = sps
                    .iter()
                    .map(|b| {
                        let k = shadow + binders_on_path(body, &b.name, self.ns, &self.x);
                        SpliceBinding {
                            env: self.env(&b.env, k),
                            name: b.name.clone(),
                            ty: self.ty(&b.ty, k),
                            rhs: self.term(&b.rhs, shadow, fresh),
                        }
                    })
                    .collect();
                Term::quote(self.term(body, shadow, fresh), sps)
            }
            Term::Ifz(c, z, nz) => Term::Ifz(
                Box::new(self.term(c, shadow, fresh)),
                Box::new(self.term(z, shadow, fresh)),
                Box::new(self.term(nz, shadow, fresh)),
            ),
        }
    }

    /// Could the action insert something into `b`? Only then does a binder
    /// above `b` need renaming.
    fn inserts_into(&self, b: &Term, shadow: usize) -> bool {
        if shadow > 0 {
            return false;
        }
        match self.ns {
            Ns::Val => b.mentions_var(&self.x),
            Ns::Ty => {
                let mut names = BTreeSet::new();
                b.names(&mut names);
                names.contains(&self.x)
            }
        }
    }

    fn ty(&self, ty: &Type, shadow: usize) -> Type {
        if self.ns != Ns::Ty || shadow > 0 {
            return ty.clone();
        }
        match &self.action {
            Action::SubstTy(t) => ty.subst(&self.x, t),
            Action::Rename(n) => ty.subst(&self.x, &Type::var(n.clone())),
            Action::Subst(_) => ty.clone(),
        }
    }

    /// Edit the entry for our binder, `k` entries of the same name from the
    /// right.
    fn env(&self, env: &CoreEnv, k: usize) -> CoreEnv {
        let is_ours = |b: &CoreBinding| match (self.ns, b) {
            (Ns::Val, CoreBinding::Val { name, .. }) => *name == self.x,
            (Ns::Ty, CoreBinding::TyVar(a)) => *a == self.x,
            _ => false,
        };
        let Some(pos) = env
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, b)| is_ours(b))
            .nth(k)
            .map(|(i, _)| i)
        else {
            return env.clone();
        };
        let mut out = Vec::with_capacity(env.0.len());
        let mut in_scope = false;
        for (i, b) in env.0.iter().enumerate() {
            if i == pos {
                in_scope = true;
                if let Action::Rename(n) = &self.action {
                    out.push(match b {
                        CoreBinding::Val { ty, level, .. } => CoreBinding::Val {
                            name: n.clone(),
                            ty: ty.clone(),
                            level: *level,
                        },
                        _ => CoreBinding::TyVar(n.clone()),
                    });
                }
                continue;
            }
            if is_ours(b) {
                // A later binder of the same name ends our scope.
                in_scope = false;
            }
            let shadow = usize::from(!in_scope);
            out.push(match b {
                CoreBinding::Val { name, ty, level } => CoreBinding::Val {
                    name: name.clone(),
                    ty: self.ty(ty, shadow),
                    level: *level,
                },
                CoreBinding::Splice {
                    name,
                    env,
                    ty,
                    level,
                } => CoreBinding::Splice {
                    name: name.clone(),
                    env: env.clone(),
                    ty: self.ty(ty, shadow),
                    level: *level,
                },
                CoreBinding::TyVar(a) => CoreBinding::TyVar(a.clone()),
            });
        }
        CoreEnv(out)
    }
}

/// Number of binders of `x` (in namespace `ns`) between the top of `body`
/// and the first occurrence of the splice variable `sp`.
fn binders_on_path(body: &Term, sp: &str, ns: Ns, x: &str) -> usize {
    fn go(t: &Term, sp: &str, ns: Ns, x: &str) -> Option<usize> {
        match t {
            Term::SpliceVar(s) if s == sp => Some(0),
            Term::Lam(y, _, b) => {
                go(b, sp, ns, x).map(|c| c + usize::from(ns == Ns::Val && y == x))
            }
            Term::TyLam(a, b) => go(b, sp, ns, x).map(|c| c + usize::from(ns == Ns::Ty && a == x)),
            Term::App(f, a) => go(f, sp, ns, x).or_else(|| go(a, sp, ns, x)),
            Term::TyApp(f, _) => go(f, sp, ns, x),
            Term::Quote(b, sps) => sps.iter().find_map(|s| go(&s.rhs, sp, ns, x)).or_else(|| {
                if sps.iter().any(|s| s.name == sp) {
                    None
                } else {
                    go(b, sp, ns, x)
                }
            }),
            Term::Ifz(a, b, c) => go(a, sp, ns, x)
                .or_else(|| go(b, sp, ns, x))
                .or_else(|| go(c, sp, ns, x)),
            _ => None,
        }
    }
    go(body, sp, ns, x).unwrap_or(0)
}

/// Free value variables, including those inside quotation bodies.
pub fn free_vals(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Lam(x, _, b) => {
            bound.push(x.clone());
            free_vals(b, bound, out);
            bound.pop();
        }
        Term::TyLam(_, b) | Term::TyApp(b, _) => free_vals(b, bound, out),
        Term::App(a, b) => {
            free_vals(a, bound, out);
            free_vals(b, bound, out);
        }
        Term::Quote(b, sps) => {
            free_vals(b, bound, out);
            for s in sps {
                free_vals(&s.rhs, bound, out);
            }
        }
        Term::Ifz(a, b, c) => {
            free_vals(a, bound, out);
            free_vals(b, bound, out);
            free_vals(c, bound, out);
        }
        Term::Global(_) | Term::SpliceVar(_) | Term::Int(_) | Term::Bool(_) | Term::Str(_) => {}
    }
}

/// Free type variables of annotations, over-approximated inside captured
/// environments.
fn free_tys(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    fn add(ty: &Type, bound: &[String], out: &mut BTreeSet<String>) {
        out.extend(ty.free_vars().into_iter().filter(|a| !bound.contains(a)));
    }
    match t {
        Term::Lam(_, ty, b) => {
            add(ty, bound, out);
            free_tys(b, bound, out);
        }
        Term::TyLam(a, b) => {
            bound.push(a.clone());
            free_tys(b, bound, out);
            bound.pop();
        }
        Term::TyApp(b, ty) => {
            add(ty, bound, out);
            free_tys(b, bound, out);
        }
        Term::App(a, b) => {
            free_tys(a, bound, out);
            free_tys(b, bound, out);
        }
        Term::Quote(b, sps) => {
            for s in sps {
                add(&s.ty, bound, out);
                for e in s.env.iter() {
                    match e {
                        CoreBinding::Val { ty, .. } | CoreBinding::Splice { ty, .. } => {
                            add(ty, bound, out)
                        }
                        CoreBinding::TyVar(_) => {}
                    }
                }
                free_tys(&s.rhs, bound, out);
            }
            free_tys(b, bound, out);
        }
        Term::Ifz(a, b, c) => {
            free_tys(a, bound, out);
            free_tys(b, bound, out);
            free_tys(c, bound, out);
        }
        Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => {}
        Term::Int(_) | Term::Bool(_) | Term::Str(_) => {}
    }
}

/// Replace the global `k` by `v`, shifting the levels recorded in `v` to
/// the level of each occurrence.
pub fn subst_global(t: &Term, k: &str, v: &Term, level: Level) -> Term {
    match t {
        Term::Global(g) if g == k => shift_levels(v, level),
        Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => t.clone(),
        Term::Int(_) | Term::Bool(_) | Term::Str(_) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), subst_global(b, k, v, level)),
        Term::TyLam(a, b) => Term::ty_lam(a.clone(), subst_global(b, k, v, level)),
        Term::App(f, a) => Term::app(subst_global(f, k, v, level), subst_global(a, k, v, level)),
        Term::TyApp(f, ty) => Term::ty_app(subst_global(f, k, v, level), ty.clone()),
        Term::Quote(b, sps) => Term::quote(
            subst_global(b, k, v, level + 1),
            sps.iter()
                .map(|s| SpliceBinding {
                    rhs: subst_global(&s.rhs, k, v, level),
                    ..s.clone()
                })
                .collect(),
        ),
        Term::Ifz(a, b, c) => Term::Ifz(
            Box::new(subst_global(a, k, v, level)),
            Box::new(subst_global(b, k, v, level)),
            Box::new(subst_global(c, k, v, level)),
        ),
    }
}

/// Move a closed level-0 term to level `by`.
pub fn shift_levels(t: &Term, by: Level) -> Term {
    if by == 0 {
        return t.clone();
    }
    fn env(e: &CoreEnv, by: Level) -> CoreEnv {
        CoreEnv(
            e.iter()
                .map(|b| match b {
                    CoreBinding::Val { name, ty, level } => CoreBinding::Val {
                        name: name.clone(),
                        ty: ty.clone(),
                        level: level + by,
                    },
                    CoreBinding::Splice {
                        name,
                        env: inner,
                        ty,
                        level,
                    } => CoreBinding::Splice {
                        name: name.clone(),
                        env: env(inner, by),
                        ty: ty.clone(),
                        level: level + by,
                    },
                    CoreBinding::TyVar(a) => CoreBinding::TyVar(a.clone()),
                })
                .collect(),
        )
    }
    match t {
        Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => t.clone(),
        Term::Int(_) | Term::Bool(_) | Term::Str(_) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), shift_levels(b, by)),
        Term::TyLam(a, b) => Term::ty_lam(a.clone(), shift_levels(b, by)),
        Term::App(f, a) => Term::app(shift_levels(f, by), shift_levels(a, by)),
        Term::TyApp(f, ty) => Term::ty_app(shift_levels(f, by), ty.clone()),
        Term::Quote(b, sps) => Term::quote(
            shift_levels(b, by),
            sps.iter()
                .map(|s| SpliceBinding {
                    env: env(&s.env, by),
                    name: s.name.clone(),
                    ty: s.ty.clone(),
                    rhs: shift_levels(&s.rhs, by),
                })
                .collect(),
        ),
        Term::Ifz(a, b, c) => Term::Ifz(
            Box::new(shift_levels(a, by)),
            Box::new(shift_levels(b, by)),
            Box::new(shift_levels(c, by)),
        ),
    }
}

/// Replace the top-level splice variable `sp` by `code`. The replacement
/// is deliberately capturing: `code` refers to the binders of the
/// environment the splice was taken in, which are in scope at every use.
pub fn subst_splice(t: &Term, sp: &str, code: &Term) -> Term {
    match t {
        Term::SpliceVar(s) if s == sp => code.clone(),
        Term::Var(_) | Term::Global(_) | Term::SpliceVar(_) => t.clone(),
        Term::Int(_) | Term::Bool(_) | Term::Str(_) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), subst_splice(b, sp, code)),
        Term::TyLam(a, b) => Term::ty_lam(a.clone(), subst_splice(b, sp, code)),
        Term::App(f, a) => Term::app(subst_splice(f, sp, code), subst_splice(a, sp, code)),
        Term::TyApp(f, ty) => Term::ty_app(subst_splice(f, sp, code), ty.clone()),
        Term::Quote(b, sps) => {
            let sps: Vec<SpliceBinding> = sps
                .iter()
                .map(|s| SpliceBinding {
                    rhs: subst_splice(&s.rhs, sp, code),
                    ..s.clone()
                })
                .collect();
            let body = if sps.iter().any(|s| s.name == sp) {
                (**b).clone()
            } else {
                subst_splice(b, sp, code)
            };
            Term::quote(body, sps)
        }
        Term::Ifz(a, b, c) => Term::Ifz(
            Box::new(subst_splice(a, sp, code)),
            Box::new(subst_splice(b, sp, code)),
            Box::new(subst_splice(c, sp, code)),
        ),
    }
}
