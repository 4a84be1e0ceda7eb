//! Level-aware constraint entailment with evidence construction.
//!
//! A constraint `CodeC^d C` wanted at level `n` is equivalent to `C` at
//! level `n + d`: quoting evidence moves it one level down and splicing
//! moves it one level up. Local evidence therefore matches when the
//! normalised forms coincide, and the evidence term is adjusted by quotes
//! or by a chain of splice points.

use crate::syntax::{Constraint, SpliceBinding, Term};
use crate::Level;

use super::env::{form_constraint, EnvEntry, NameSupply, Theory, TypeEnv};
use super::tsp::Tsp;
use super::{TcResult, TypeErrorKind};

pub const MAX_SEARCH_DEPTH: usize = 32;

/// Solve `wanted` at `level`, returning evidence of type
/// `form_constraint(wanted)` and the splices it produced (all strictly
/// below `level`).
pub fn entail(
    theory: &Theory,
    env: &TypeEnv,
    level: Level,
    wanted: &Constraint,
    names: &mut NameSupply,
) -> TcResult<(Term, Tsp)> {
    let r = solve(theory, env, level, wanted, names, 0)?;
    debug_assert!(r.1.is_below(level));
    Ok(r)
}

fn solve(
    theory: &Theory,
    env: &TypeEnv,
    level: Level,
    wanted: &Constraint,
    names: &mut NameSupply,
    depth: usize,
) -> TcResult<(Term, Tsp)> {
    if depth > MAX_SEARCH_DEPTH {
        return Err(TypeErrorKind::InstanceSearchDepthExceeded(wanted.clone()));
    }
    let (class, ty) = wanted.base();
    let dw = wanted.depth() as Level;
    let norm = level + dw;

    for entry in env.entries().iter().rev() {
        if let EnvEntry::Ev {
            name,
            constraint,
            level: m,
            ..
        } = entry
        {
            if constraint.base() == (class, ty) && m + constraint.depth() as Level == norm {
                let dd = constraint.depth() as Level;
                return from_local(theory, env, level, wanted, name, dw - dd, names);
            }
        }
    }

    for ax in theory.axioms().iter().filter(|a| a.class == class) {
        let Some(args) = ax.match_head(ty) else {
            continue;
        };
        let mut ev = Term::Global(ax.ev.clone());
        for a in &args {
            ev = Term::ty_app(ev, a.clone());
        }
        let mut tsp = Tsp::new();
        for c in &ax.context {
            let c = ax
                .binders
                .iter()
                .zip(&args)
                .fold(c.clone(), |acc, (b, a)| acc.subst(b, a));
            let (sub, s) = solve(theory, env, norm, &c, names, depth + 1)?;
            ev = Term::app(ev, sub);
            tsp.merge(s);
        }
        for j in (level..norm).rev() {
            ev = Term::quote(ev, tsp.take(j));
        }
        return Ok((ev, tsp));
    }

    Err(no_evidence(env, level, wanted))
}

/// Evidence from the local `name`; `shift` is depth(wanted) − depth(given).
fn from_local(
    theory: &Theory,
    env: &TypeEnv,
    level: Level,
    wanted: &Constraint,
    name: &str,
    shift: Level,
    names: &mut NameSupply,
) -> TcResult<(Term, Tsp)> {
    let var = Term::Var(name.to_string());
    if shift >= 0 {
        let ev = (0..shift).fold(var, |t, _| Term::quote(t, vec![]));
        return Ok((ev, Tsp::new()));
    }
    // The given lives `k` levels below: splice it back up through a chain
    // of splice points, one per level.
    let k = (-shift) as usize;
    let delta = env.elab_env();
    let sps: Vec<String> = (0..k).map(|_| names.fresh("sp")).collect();
    let mut tsp = Tsp::new();
    for i in 0..k {
        let rhs = match sps.get(i + 1) {
            Some(next) => Term::SpliceVar(next.clone()),
            None => var.clone(),
        };
        tsp.push(
            level - 1 - i as Level,
            SpliceBinding {
                env: delta.clone(),
                name: sps[i].clone(),
                ty: form_constraint(theory, &wanted.clone().wrap(i))?,
                rhs,
            },
        );
    }
    Ok((Term::SpliceVar(sps[0].clone()), tsp))
}

fn no_evidence(env: &TypeEnv, level: Level, wanted: &Constraint) -> TypeErrorKind {
    let (class, ty) = wanted.base();
    let dw = wanted.depth() as Level;
    let norm = level + dw;
    let nearest = env
        .entries()
        .iter()
        .filter_map(|e| match e {
            EnvEntry::Ev {
                constraint,
                level: m,
                ..
            } if constraint.base() == (class, ty) => Some(m + constraint.depth() as Level),
            _ => None,
        })
        .min_by_key(|m| (m - norm).abs());
    let hint = match nearest {
        Some(m) if m < norm => format!(" (have it at level {}; consider CodeC)", m - dw),
        Some(m) => format!(
            " (have it at level {}; evidence cannot be used at an earlier level)",
            m - dw
        ),
        None => String::new(),
    };
    TypeErrorKind::NoEvidence {
        constraint: wanted.clone(),
        level,
        hint,
    }
}
