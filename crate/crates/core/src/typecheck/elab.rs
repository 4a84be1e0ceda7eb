//! Second pass: elaboration of a fully resolved tree to core.

use crate::syntax::{SpliceBinding, Term};
use crate::Level;

use super::entail::entail;
use super::env::{NameSupply, Theory, TypeEnv};
use super::infer::Tm;
use super::tsp::Tsp;
use super::{TcResult, TypeErrorKind};

pub(crate) struct Elab<'a> {
    pub theory: &'a Theory,
    pub names: &'a mut NameSupply,
}

impl Elab<'_> {
    /// Elaborate `tm` at `level`; the returned splices are all strictly
    /// below `level`.
    pub fn elab(&mut self, env: &mut TypeEnv, level: Level, tm: &Tm) -> TcResult<(Term, Tsp)> {
        let r = self.elab_inner(env, level, tm)?;
        assert!(r.1.is_below(level), "splice environment escaped its level");
        Ok(r)
    }

    fn elab_inner(&mut self, env: &mut TypeEnv, level: Level, tm: &Tm) -> TcResult<(Term, Tsp)> {
        Ok(match tm {
            Tm::Local(x) => {
                let (core, _, _) = env
                    .lookup_val(x)
                    .ok_or_else(|| TypeErrorKind::UnboundVariable(x.clone()))?;
                (Term::Var(core.to_string()), Tsp::new())
            }
            Tm::Global {
                name,
                ty_args,
                wanted,
            } => {
                let mut t = Term::Global(name.clone());
                for a in ty_args {
                    t = Term::ty_app(t, a.clone());
                }
                let mut tsp = Tsp::new();
                for c in wanted {
                    let (ev, s) = entail(self.theory, env, level, c, self.names)?;
                    t = Term::app(t, ev);
                    tsp.merge(s);
                }
                (t, tsp)
            }
            Tm::Lam(x, ty, body) => {
                let core = if env.binds_core_name(x) {
                    self.names.fresh_like(x)
                } else {
                    x.clone()
                };
                let mark = env.len();
                env.push_val(x.clone(), core.clone(), ty.clone(), level);
                let r = self.elab(env, level, body);
                env.truncate(mark);
                let (t, tsp) = r?;
                (Term::lam(core, ty.clone(), t), tsp)
            }
            Tm::App(f, a) => {
                let (tf, mut tsp) = self.elab(env, level, f)?;
                let (ta, s) = self.elab(env, level, a)?;
                tsp.merge(s);
                (Term::app(tf, ta), tsp)
            }
            Tm::Quote(body) => {
                let (t, mut tsp) = self.elab(env, level + 1, body)?;
                let sp = tsp.take(level);
                (Term::quote(t, sp), tsp)
            }
            Tm::Splice(body, ty) => {
                let (t, mut tsp) = self.elab(env, level - 1, body)?;
                let name = self.names.fresh("sp");
                tsp.push(
                    level - 1,
                    SpliceBinding {
                        env: env.elab_env(),
                        name: name.clone(),
                        ty: ty.clone(),
                        rhs: t,
                    },
                );
                (Term::SpliceVar(name), tsp)
            }
            Tm::Int(n) => (Term::Int(*n), Tsp::new()),
            Tm::Bool(b) => (Term::Bool(*b), Tsp::new()),
            Tm::Str(s) => (Term::Str(s.clone()), Tsp::new()),
            Tm::Ifz(c, z, nz) => {
                let (tc, mut tsp) = self.elab(env, level, c)?;
                let (tz, s1) = self.elab(env, level, z)?;
                let (tn, s2) = self.elab(env, level, nz)?;
                tsp.merge(s1);
                tsp.merge(s2);
                (Term::Ifz(Box::new(tc), Box::new(tz), Box::new(tn)), tsp)
            }
        })
    }
}
