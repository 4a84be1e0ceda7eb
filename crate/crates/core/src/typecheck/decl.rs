//! Declaration and program checking.

use crate::prelude::builtins;
use crate::syntax::{
    Constraint, CoreDecl, CoreProgram, Decl, Expr, Scheme, SourceProgram, Term, Type,
};

use super::elab::Elab;
use super::env::{form_constraint, form_type, Axiom, ClassInfo, NameSupply, Theory, TypeEnv};
use super::infer::{Infer, Tm};
use super::tsp::{collapse, spdefs};
use super::{TcResult, TypeError, TypeErrorKind};

/// Typecheck a source program and elaborate it to core.
pub fn check_program(p: &SourceProgram) -> Result<CoreProgram, TypeError> {
    let mut avoid = p.identifiers();
    avoid.extend(builtins().iter().map(|b| b.name.to_string()));
    let mut cx = Checker {
        theory: Theory::new(),
        names: NameSupply::new(avoid),
        decls: Vec::new(),
    };
    for d in &p.decls {
        cx.check_decl(&d.node)
            .map_err(|kind| TypeError { kind, span: d.span })?;
    }
    let (main, main_ty) = cx.check_main(&p.main.node).map_err(|kind| TypeError {
        kind,
        span: p.main.span,
    })?;
    Ok(CoreProgram {
        decls: cx.decls,
        main,
        main_ty,
    })
}

struct Checker {
    theory: Theory,
    names: NameSupply,
    decls: Vec<CoreDecl>,
}

/// Evidence binders are only ever introduced for signatures, at level 0.
fn push_given(theory: &Theory, env: &mut TypeEnv, name: &str, c: &Constraint) -> TcResult<()> {
    env.push_ev(theory, name, c.clone(), 0)
}

impl Checker {
    fn check_decl(&mut self, d: &Decl) -> TcResult<()> {
        match d {
            Decl::Def { name, sig, body } => self.check_def(name, sig, body),
            Decl::Class {
                class,
                tyvar,
                method,
                sig,
            } => self.check_class(class, tyvar, method, sig),
            Decl::Instance {
                context,
                class,
                head,
                method,
                body,
            } => self.check_instance(context, class, head, method, body),
        }
    }

    /// Infer `body` against `expected`, apply the substitution and reject
    /// unresolved unification variables.
    fn infer_against(&self, tyvars: &[String], body: &Expr, expected: &Type) -> TcResult<Tm> {
        let mut inf = Infer::new(&self.theory, tyvars.to_vec());
        let (tm, ty) = inf.infer(body, 0)?;
        inf.subst.unify(expected, &ty)?;
        let tm = inf.zonk_tm(tm);
        let mut metas = Vec::new();
        tm.metas(&mut metas);
        if !metas.is_empty() {
            return Err(TypeErrorKind::AmbiguousType(
                "cannot determine the type at which a polymorphic global is used".into(),
            ));
        }
        Ok(tm)
    }

    fn check_def(&mut self, name: &str, sig: &Scheme, body: &Expr) -> TcResult<()> {
        if self.theory.is_defined(name) {
            return Err(TypeErrorKind::DuplicateName(name.to_string()));
        }
        self.theory.check_scheme(&[], sig)?;
        let tm = self.infer_against(&sig.binders, body, &sig.ty)?;

        let mut env = TypeEnv::new();
        for a in &sig.binders {
            env.push_tyvar(a.clone());
        }
        let mut evs = Vec::new();
        for c in &sig.context {
            let ev = self.names.fresh("ev");
            push_given(&self.theory, &mut env, &ev, c)?;
            evs.push((ev, form_constraint(&self.theory, c)?));
        }
        let (t, tsp) = Elab {
            theory: &self.theory,
            names: &mut self.names,
        }
        .elab(&mut env, 0, &tm)?;

        let body = wrap_binders(&sig.binders, &evs, t);
        let ty = form_type(&self.theory, sig)?;
        self.decls.extend(collapse(
            tsp,
            CoreDecl::Def {
                name: name.to_string(),
                ty,
                body,
            },
        ));
        self.theory.add_global(name, sig.clone());
        Ok(())
    }

    fn check_class(
        &mut self,
        class: &str,
        tyvar: &str,
        method: &str,
        sig: &Scheme,
    ) -> TcResult<()> {
        if self.theory.class(class).is_some() {
            return Err(TypeErrorKind::DuplicateName(class.to_string()));
        }
        if self.theory.is_defined(method) {
            return Err(TypeErrorKind::DuplicateName(method.to_string()));
        }
        if !sig.binders.is_empty() {
            return Err(TypeErrorKind::InvalidClassSignature {
                class: class.to_string(),
                reason: "a method signature cannot quantify further type variables".into(),
            });
        }
        self.theory.check_scheme(&[tyvar.to_string()], sig)?;
        self.theory.add_class(ClassInfo {
            name: class.to_string(),
            tyvar: tyvar.to_string(),
            method: method.to_string(),
            sig: sig.clone(),
        });
        // The dictionary is the method itself, so the selector is the
        // identity on evidence.
        let m = form_constraint(&self.theory, &Constraint::class(class, Type::var(tyvar)))?;
        let ev = self.names.fresh("ev");
        self.decls.push(CoreDecl::Def {
            name: method.to_string(),
            ty: Type::Forall(
                tyvar.to_string(),
                Box::new(Type::arrow(m.clone(), m.clone())),
            ),
            body: Term::ty_lam(tyvar, Term::lam(ev.clone(), m, Term::Var(ev))),
        });
        Ok(())
    }

    fn check_instance(
        &mut self,
        context: &[Constraint],
        class: &str,
        head: &Type,
        method: &str,
        body: &Expr,
    ) -> TcResult<()> {
        let info = self
            .theory
            .class(class)
            .ok_or_else(|| TypeErrorKind::UnknownClass(class.to_string()))?
            .clone();
        if info.method != method {
            return Err(TypeErrorKind::UnknownMethod {
                class: class.to_string(),
                method: method.to_string(),
            });
        }
        if self.theory.axioms().iter().any(|a| a.overlaps(class, head)) {
            return Err(TypeErrorKind::OverlappingInstance {
                class: class.to_string(),
                head: head.clone(),
            });
        }
        let binders = head.free_vars();
        let in_scope = |v: &String| binders.contains(v);
        for c in context {
            self.theory.check_constraint(&in_scope, c)?;
        }

        let candidate = format!("ev{class}{}", head.head_name());
        let self_ev = if self.names.is_taken(&candidate) || self.theory.is_defined(&candidate) {
            self.names.fresh("ev")
        } else {
            self.names.reserve(candidate.clone());
            candidate
        };

        let expected = info.sig.subst(&info.tyvar, head);
        let method_ty = form_type(&self.theory, &expected)?;
        let tm = self
            .infer_against(&binders, body, &expected.ty)
            .map_err(|e| match e {
                TypeErrorKind::Mismatch { .. } | TypeErrorKind::OccursCheck { .. } => {
                    TypeErrorKind::MethodSignatureMismatch {
                        class: class.to_string(),
                        reason: e.to_string(),
                    }
                }
                other => other,
            })?;

        let mut env = TypeEnv::new();
        for b in &binders {
            env.push_tyvar(b.clone());
        }
        let mut ctx_evs = Vec::new();
        for c in context {
            let ev = self.names.fresh("ev");
            push_given(&self.theory, &mut env, &ev, c)?;
            ctx_evs.push((ev, form_constraint(&self.theory, c)?));
        }
        push_given(
            &self.theory,
            &mut env,
            &self_ev,
            &Constraint::class(class, head.clone()),
        )?;
        let mut sig_evs = Vec::new();
        for c in &expected.context {
            let ev = self.names.fresh("ev");
            push_given(&self.theory, &mut env, &ev, c)?;
            sig_evs.push((ev, form_constraint(&self.theory, c)?));
        }

        let snapshot = self.names.clone();
        let (t, tsp) = Elab {
            theory: &self.theory,
            names: &mut self.names,
        }
        .elab(&mut env.clone(), 0, &tm)?;
        let uses_self =
            t.mentions_var(&self_ev) || tsp.iter().any(|(_, b)| b.rhs.mentions_var(&self_ev));

        let (method_body, tsp) = if uses_self {
            let Type::Arrow(dom, cod) = &method_ty else {
                return Err(TypeErrorKind::RecursiveInstance(self_ev));
            };
            let inner = wrap_binders(&[], &sig_evs, t);
            let knot = Term::lam(self_ev.clone(), method_ty.clone(), inner);
            let fix = Term::ty_app(
                Term::ty_app(Term::Global("fix".into()), (**dom).clone()),
                (**cod).clone(),
            );
            (Term::app(fix, knot), tsp)
        } else {
            // The self evidence is unused; elaborate again without it so
            // that no captured environment mentions it.
            self.names = snapshot;
            let mut env = env.without(&self_ev);
            let (t, tsp) = Elab {
                theory: &self.theory,
                names: &mut self.names,
            }
            .elab(&mut env, 0, &tm)?;
            (wrap_binders(&[], &sig_evs, t), tsp)
        };

        let body = wrap_binders(&binders, &ctx_evs, method_body);
        let ctx_tys: Vec<Type> = ctx_evs.iter().map(|(_, t)| t.clone()).collect();
        let ty = Type::forall(binders.clone(), Type::arrows(ctx_tys, method_ty));
        self.decls.extend(collapse(
            tsp,
            CoreDecl::Def {
                name: self_ev.clone(),
                ty,
                body,
            },
        ));
        self.theory.add_axiom(Axiom {
            ev: self_ev,
            class: class.to_string(),
            binders,
            context: context.to_vec(),
            head: head.clone(),
        });
        Ok(())
    }

    fn check_main(&mut self, e: &Expr) -> TcResult<(Term, Type)> {
        let mut inf = Infer::new(&self.theory, Vec::new());
        let (tm, ty) = inf.infer(e, 0)?;
        let tm = inf.zonk_tm(tm);
        let ty = inf.subst.zonk(&ty);

        // Generalise over the unification variables left in Main's type.
        let mut gen = Vec::new();
        ty.metas(&mut gen);
        let mut all = Vec::new();
        tm.metas(&mut all);
        if all.iter().any(|m| !gen.contains(m)) {
            return Err(TypeErrorKind::AmbiguousType(
                "a type in `main` is not determined by its result type".into(),
            ));
        }
        let binders: Vec<String> = (0..gen.len()).map(type_var_name).collect();
        let lookup = |m: u32| {
            gen.iter()
                .position(|g| *g == m)
                .map(|i| Type::var(binders[i].clone()))
        };
        let tm = tm.map_types(&|t| t.map_metas(&lookup));
        let ty = ty.map_metas(&lookup);

        // Constraints on the generalised variables become level-0 givens.
        let mut wanted = Vec::new();
        tm.wanteds(0, &mut wanted);
        let mut context: Vec<Constraint> = Vec::new();
        for (c, level) in wanted {
            if !c.free_vars().iter().any(|v| binders.contains(v)) {
                continue;
            }
            let norm = level + c.depth() as i64;
            if norm < 0 {
                return Err(TypeErrorKind::NoEvidence {
                    constraint: c,
                    level,
                    hint: " (main's own constraints are only available from level 0)".into(),
                });
            }
            let (class, arg) = c.base();
            let given = Constraint::class(class, arg.clone()).wrap(norm as usize);
            if !context.contains(&given) {
                context.push(given);
            }
        }

        let mut env = TypeEnv::new();
        for a in &binders {
            env.push_tyvar(a.clone());
        }
        let mut evs = Vec::new();
        for c in &context {
            let ev = self.names.fresh("ev");
            push_given(&self.theory, &mut env, &ev, c)?;
            evs.push((ev, form_constraint(&self.theory, c)?));
        }
        let (t, tsp) = Elab {
            theory: &self.theory,
            names: &mut self.names,
        }
        .elab(&mut env, 0, &tm)?;
        self.decls.extend(spdefs(tsp));
        let scheme = Scheme {
            binders: binders.clone(),
            context,
            ty,
        };
        Ok((
            wrap_binders(&binders, &evs, t),
            form_type(&self.theory, &scheme)?,
        ))
    }
}

/// `Λā. λev₁:τ₁. … t`
fn wrap_binders(tyvars: &[String], evs: &[(String, Type)], t: Term) -> Term {
    let t = evs
        .iter()
        .rev()
        .fold(t, |acc, (ev, ty)| Term::lam(ev.clone(), ty.clone(), acc));
    tyvars
        .iter()
        .rev()
        .fold(t, |acc, a| Term::ty_lam(a.clone(), acc))
}

/// `a`, `b`, …, `z`, `a1`, `b1`, …
fn type_var_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    match i / 26 {
        0 => letter.to_string(),
        n => format!("{letter}{n}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_program, pretty_core};

    fn check(src: &str) -> Result<CoreProgram, TypeError> {
        check_program(&parse_program(src).unwrap())
    }

    fn code(src: &str) -> &'static str {
        check(src).unwrap_err().code()
    }

    #[test]
    fn def_elaborates_to_dictionary_abstraction() {
        let p = check(
            "class Show a where show :: a -> String;
             def f :: forall a . Show a => a -> String = \\x : a -> show x;
             main = 0",
        )
        .unwrap();
        let out = pretty_core(&p);
        assert!(
            out.contains(
                "def f : forall a . (a -> String) -> a -> String = /\\a . \\ev1 : (a -> String) -> \\x : a -> show <a> ev1 x ;"
            ),
            "{out}"
        );
    }

    #[test]
    fn duplicate_definitions() {
        assert_eq!(
            code("def f :: Int = 1; def f :: Int = 2; main = 0"),
            "DuplicateName"
        );
        assert_eq!(code("def add :: Int = 1; main = 0"), "DuplicateName");
    }

    #[test]
    fn method_signature_cannot_quantify() {
        assert_eq!(
            code("class C a where m :: forall b . a -> b; main = 0"),
            "InvalidClassSignature"
        );
    }

    #[test]
    fn instance_errors() {
        let cls = "class C a where m :: a -> Int;";
        assert_eq!(code("instance C Int where m = 1; main = 0"), "UnknownClass");
        assert_eq!(
            code(&format!(
                "{cls} instance C Int where n = \\x : Int -> x; main = 0"
            )),
            "UnknownMethod"
        );
        assert_eq!(
            code(&format!(
                "{cls} instance C Int where m = \\x : Int -> x;
                 instance C Int where m = \\x : Int -> 0; main = 0"
            )),
            "OverlappingInstance"
        );
        assert_eq!(
            code(&format!("{cls} instance C Int where m = true; main = 0")),
            "MethodSignatureMismatch"
        );
    }

    #[test]
    fn self_reference_needs_a_function_type() {
        assert_eq!(
            code("class D a where d :: a; instance D Int where d = d; main = 0"),
            "RecursiveInstance"
        );
    }

    #[test]
    fn unused_self_is_not_wrapped() {
        let p = check("class D a where d :: a; instance D Int where d = 3; main = d").unwrap();
        assert!(pretty_core(&p).contains("def evDInt : Int = 3 ;"));
    }

    #[test]
    fn main_is_generalised() {
        let p = check("main = \\x : Int -> nil").unwrap();
        assert_eq!(p.main_ty.to_string(), "forall a . Int -> List a");
    }

    #[test]
    fn ambiguous_instantiation() {
        assert_eq!(
            code("def f :: Int = matchList nil 0 (\\x : Int -> \\y : List Int -> 1) ; def g :: Int = fstP (pair 1 nil); main = 0"),
            "AmbiguousType"
        );
    }

    #[test]
    fn type_var_names() {
        assert_eq!(type_var_name(0), "a");
        assert_eq!(type_var_name(25), "z");
        assert_eq!(type_var_name(27), "b1");
    }
}
