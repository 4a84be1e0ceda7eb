//! First pass: type inference with unification variables and stage checks.

use crate::syntax::{Constraint, Expr, Type};
use crate::Level;

use super::env::{check_type_scope, Theory};
use super::unify::Subst;
use super::{TcResult, TypeErrorKind};

/// Source expressions annotated with what elaboration needs: resolved
/// variables and the instantiation of every global occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tm {
    Local(String),
    Global {
        name: String,
        ty_args: Vec<Type>,
        wanted: Vec<Constraint>,
    },
    Lam(String, Type, Box<Tm>),
    App(Box<Tm>, Box<Tm>),
    Quote(Box<Tm>),
    /// The splice and the type of the code it produces.
    Splice(Box<Tm>, Type),
    Int(i64),
    Bool(bool),
    Str(String),
    Ifz(Box<Tm>, Box<Tm>, Box<Tm>),
}

impl Tm {
    pub(crate) fn map_types(self, f: &impl Fn(&Type) -> Type) -> Tm {
        match self {
            Tm::Global {
                name,
                ty_args,
                wanted,
            } => Tm::Global {
                name,
                ty_args: ty_args.iter().map(f).collect(),
                wanted: wanted.iter().map(|c| c.map_type(f)).collect(),
            },
            Tm::Lam(x, t, b) => Tm::Lam(x, f(&t), Box::new(b.map_types(f))),
            Tm::App(a, b) => Tm::App(Box::new(a.map_types(f)), Box::new(b.map_types(f))),
            Tm::Quote(b) => Tm::Quote(Box::new(b.map_types(f))),
            Tm::Splice(b, t) => Tm::Splice(Box::new(b.map_types(f)), f(&t)),
            Tm::Ifz(a, b, c) => Tm::Ifz(
                Box::new(a.map_types(f)),
                Box::new(b.map_types(f)),
                Box::new(c.map_types(f)),
            ),
            t @ (Tm::Local(_) | Tm::Int(_) | Tm::Bool(_) | Tm::Str(_)) => t,
        }
    }

    pub(crate) fn metas(&self, out: &mut Vec<u32>) {
        match self {
            Tm::Global {
                ty_args, wanted, ..
            } => {
                ty_args.iter().for_each(|t| t.metas(out));
                wanted.iter().for_each(|c| c.base().1.metas(out));
            }
            Tm::Lam(_, t, b) => {
                t.metas(out);
                b.metas(out);
            }
            Tm::App(a, b) => {
                a.metas(out);
                b.metas(out);
            }
            Tm::Quote(b) => b.metas(out),
            Tm::Splice(b, t) => {
                b.metas(out);
                t.metas(out);
            }
            Tm::Ifz(a, b, c) => {
                a.metas(out);
                b.metas(out);
                c.metas(out);
            }
            Tm::Local(_) | Tm::Int(_) | Tm::Bool(_) | Tm::Str(_) => {}
        }
    }

    /// Every deferred constraint together with the level it is wanted at.
    pub(crate) fn wanteds(&self, level: Level, out: &mut Vec<(Constraint, Level)>) {
        match self {
            Tm::Global { wanted, .. } => out.extend(wanted.iter().map(|c| (c.clone(), level))),
            Tm::Lam(_, _, b) => b.wanteds(level, out),
            Tm::App(a, b) => {
                a.wanteds(level, out);
                b.wanteds(level, out);
            }
            Tm::Quote(b) => b.wanteds(level + 1, out),
            Tm::Splice(b, _) => b.wanteds(level - 1, out),
            Tm::Ifz(a, b, c) => {
                a.wanteds(level, out);
                b.wanteds(level, out);
                c.wanteds(level, out);
            }
            Tm::Local(_) | Tm::Int(_) | Tm::Bool(_) | Tm::Str(_) => {}
        }
    }
}

pub(crate) struct Infer<'a> {
    pub theory: &'a Theory,
    pub subst: Subst,
    locals: Vec<(String, Type, Level)>,
    tyvars: Vec<String>,
}

impl<'a> Infer<'a> {
    /// `tyvars` are the rigid type variables in scope; `locals` the value
    /// binders (name, type, level).
    pub fn new(theory: &'a Theory, tyvars: Vec<String>) -> Infer<'a> {
        Infer {
            theory,
            subst: Subst::new(),
            locals: Vec::new(),
            tyvars,
        }
    }

    pub fn infer(&mut self, e: &Expr, level: Level) -> TcResult<(Tm, Type)> {
        match e {
            Expr::Var(x) => {
                if let Some((_, ty, bound)) = self.locals.iter().rev().find(|(n, _, _)| n == x) {
                    if *bound != level {
                        return Err(TypeErrorKind::StageError {
                            name: x.clone(),
                            bound: *bound,
                            used: level,
                        });
                    }
                    return Ok((Tm::Local(x.clone()), ty.clone()));
                }
                let scheme = self
                    .theory
                    .global(x)
                    .ok_or_else(|| TypeErrorKind::UnboundVariable(x.clone()))?
                    .clone();
                let ty_args: Vec<Type> =
                    scheme.binders.iter().map(|_| self.subst.fresh()).collect();
                let inst = |t: &Type| {
                    scheme
                        .binders
                        .iter()
                        .zip(&ty_args)
                        .fold(t.clone(), |acc, (b, m)| acc.subst(b, m))
                };
                let wanted = scheme.context.iter().map(|c| c.map_type(&inst)).collect();
                let ty = inst(&scheme.ty);
                Ok((
                    Tm::Global {
                        name: x.clone(),
                        ty_args,
                        wanted,
                    },
                    ty,
                ))
            }
            Expr::Lam(x, ann, body) => {
                let tyvars = &self.tyvars;
                check_type_scope(&|v: &String| tyvars.contains(v), ann)?;
                self.locals.push((x.clone(), ann.clone(), level));
                let r = self.infer(body, level);
                self.locals.pop();
                let (b, bt) = r?;
                Ok((
                    Tm::Lam(x.clone(), ann.clone(), Box::new(b)),
                    Type::arrow(ann.clone(), bt),
                ))
            }
            Expr::App(f, a) => {
                let (tf, ft) = self.infer(f, level)?;
                let (ta, at) = self.infer(a, level)?;
                let res = match self.subst.zonk(&ft) {
                    Type::Arrow(dom, cod) => {
                        self.subst.unify(&dom, &at)?;
                        *cod
                    }
                    Type::Meta(_) => {
                        let res = self.subst.fresh();
                        self.subst.unify(&ft, &Type::arrow(at, res.clone()))?;
                        res
                    }
                    other => {
                        let res = self.subst.fresh();
                        return Err(TypeErrorKind::Mismatch {
                            expected: Type::arrow(self.subst.zonk(&at), res),
                            found: other,
                        });
                    }
                };
                Ok((Tm::App(Box::new(tf), Box::new(ta)), res))
            }
            Expr::Quote(b) => {
                let (t, bt) = self.infer(b, level + 1)?;
                Ok((Tm::Quote(Box::new(t)), Type::code(bt)))
            }
            Expr::Splice(b) => {
                let (t, bt) = self.infer(b, level - 1)?;
                let res = self.subst.fresh();
                self.subst.unify(&Type::code(res.clone()), &bt)?;
                Ok((Tm::Splice(Box::new(t), res.clone()), res))
            }
            Expr::Int(n) => Ok((Tm::Int(*n), Type::Int)),
            Expr::Bool(b) => Ok((Tm::Bool(*b), Type::Bool)),
            Expr::Str(s) => Ok((Tm::Str(s.clone()), Type::Str)),
            Expr::Ifz(c, z, nz) => {
                let (tc, ct) = self.infer(c, level)?;
                self.subst.unify(&Type::Int, &ct)?;
                let (tz, zt) = self.infer(z, level)?;
                let (tn, nt) = self.infer(nz, level)?;
                self.subst.unify(&zt, &nt)?;
                Ok((Tm::Ifz(Box::new(tc), Box::new(tz), Box::new(tn)), zt))
            }
        }
    }

    pub fn zonk_tm(&self, tm: Tm) -> Tm {
        tm.map_types(&|t| self.subst.zonk(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn infer_closed(src: &str) -> TcResult<(Tm, Type)> {
        let theory = Theory::new();
        let mut inf = Infer::new(&theory, vec![]);
        let (tm, ty) = inf.infer(&parse_expr(src).unwrap(), 0)?;
        Ok((inf.zonk_tm(tm), inf.subst.zonk(&ty)))
    }

    #[test]
    fn tardy_variable_is_a_stage_error() {
        assert_eq!(
            infer_closed("\\x : Int -> [| x |]").unwrap_err(),
            TypeErrorKind::StageError {
                name: "x".into(),
                bound: 0,
                used: 1
            }
        );
    }

    #[test]
    fn hasty_variable_is_a_stage_error() {
        assert_eq!(
            infer_closed("\\c : Code Int -> $( c )").unwrap_err(),
            TypeErrorKind::StageError {
                name: "c".into(),
                bound: 0,
                used: -1
            }
        );
    }

    #[test]
    fn splice_of_quote_has_inner_type() {
        let (tm, ty) = infer_closed("$( [| 42 |] )").unwrap();
        assert_eq!(ty, Type::Int);
        assert_eq!(
            tm,
            Tm::Splice(Box::new(Tm::Quote(Box::new(Tm::Int(42)))), Type::Int)
        );
    }

    #[test]
    fn globals_are_instantiated() {
        let (tm, ty) = infer_closed("cons 1 nil").unwrap();
        assert_eq!(ty, Type::list(Type::Int));
        let mut ms = Vec::new();
        tm.metas(&mut ms);
        assert!(ms.is_empty());
    }

    #[test]
    fn application_of_non_function() {
        assert!(matches!(
            infer_closed("1 2").unwrap_err(),
            TypeErrorKind::Mismatch { .. }
        ));
    }
}
