//! One step of call-by-value reduction on terms.

use crate::prelude::builtin;
use crate::syntax::{SpliceBinding, Term, Type};

use super::subst::{free_vals, subst_ty, subst_val, Fresh};
use super::{Rule, RuntimeError};

/// A builtin head applied to type and value arguments.
struct Spine<'a> {
    head: &'a str,
    tys: Vec<&'a Type>,
    args: Vec<&'a Term>,
}

fn spine(t: &Term) -> Option<Spine<'_>> {
    let mut tys = Vec::new();
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::App(f, a) => {
                args.push(&**a);
                cur = f;
            }
            Term::TyApp(f, ty) => {
                tys.push(ty);
                cur = f;
            }
            Term::Global(g) if builtin(g).is_some() => {
                tys.reverse();
                args.reverse();
                return Some(Spine { head: g, tys, args });
            }
            _ => return None,
        }
    }
}

pub fn is_value(t: &Term) -> bool {
    match t {
        Term::Int(_) | Term::Bool(_) | Term::Str(_) => true,
        Term::Lam(..) | Term::TyLam(..) => true,
        Term::Quote(_, sps) => sps.iter().all(|s| is_value(&s.rhs)),
        Term::App(..) | Term::TyApp(..) | Term::Global(_) => match spine(t) {
            Some(sp) => {
                let b = builtin(sp.head).expect("spine heads are builtins");
                let limit = if b.constructor { b.arity + 1 } else { b.arity };
                sp.args.len() < limit && sp.args.iter().all(|a| is_value(a))
            }
            None => false,
        },
        Term::Var(_) | Term::SpliceVar(_) | Term::Ifz(..) => false,
    }
}

fn stuck(t: &Term) -> RuntimeError {
    RuntimeError::Stuck {
        term: crate::syntax::pretty_term(t),
    }
}

/// Take one leftmost-outermost step, or `None` if `t` is a value.
pub fn step(t: &Term, fresh: &mut Fresh) -> Result<Option<(Term, Rule)>, RuntimeError> {
    if is_value(t) {
        return Ok(None);
    }
    let r = match t {
        Term::App(f, a) => {
            if !is_value(f) {
                let (f2, r) = step_some(f, fresh)?;
                (Term::app(f2, (**a).clone()), r)
            } else if !is_value(a) {
                let (a2, r) = step_some(a, fresh)?;
                (Term::app((**f).clone(), a2), r)
            } else if let Term::Lam(x, _, body) = &**f {
                (subst_val(body, x, a, fresh), Rule::Beta)
            } else {
                delta(t, fresh)?
            }
        }
        Term::TyApp(f, ty) => {
            if !is_value(f) {
                let (f2, r) = step_some(f, fresh)?;
                (Term::ty_app(f2, ty.clone()), r)
            } else if let Term::TyLam(a, body) = &**f {
                (subst_ty(body, a, ty, fresh), Rule::TyBeta)
            } else {
                return Err(stuck(t));
            }
        }
        Term::Quote(body, sps) => {
            let i = sps
                .iter()
                .position(|s| !is_value(&s.rhs))
                .expect("a quotation with evaluated splices is a value");
            let (rhs, r) = step_some(&sps[i].rhs, fresh)?;
            let mut sps = sps.clone();
            sps[i] = SpliceBinding {
                rhs,
                ..sps[i].clone()
            };
            (Term::quote((**body).clone(), sps), r)
        }
        Term::Ifz(c, z, nz) => match &**c {
            Term::Int(0) => ((**z).clone(), Rule::Ifz),
            Term::Int(_) => ((**nz).clone(), Rule::Ifz),
            c if !is_value(c) => {
                let (c2, r) = step_some(c, fresh)?;
                (Term::Ifz(Box::new(c2), z.clone(), nz.clone()), r)
            }
            _ => return Err(stuck(t)),
        },
        _ => return Err(stuck(t)),
    };
    Ok(Some(r))
}

fn step_some(t: &Term, fresh: &mut Fresh) -> Result<(Term, Rule), RuntimeError> {
    step(t, fresh)?.ok_or_else(|| stuck(t))
}

/// A saturated builtin application.
fn delta(t: &Term, fresh: &mut Fresh) -> Result<(Term, Rule), RuntimeError> {
    let sp = spine(t).ok_or_else(|| stuck(t))?;
    let b = builtin(sp.head).expect("spine heads are builtins");
    if b.constructor || sp.args.len() != b.arity {
        return Err(stuck(t));
    }
    let int = |i: usize| match sp.args[i] {
        Term::Int(n) => Ok(*n),
        _ => Err(stuck(t)),
    };
    let overflow = || RuntimeError::Overflow {
        term: crate::syntax::pretty_term(t),
    };
    let out = match sp.head {
        "add" => Term::Int(int(0)?.checked_add(int(1)?).ok_or_else(overflow)?),
        "sub" => Term::Int(int(0)?.checked_sub(int(1)?).ok_or_else(overflow)?),
        "mul" => Term::Int(int(0)?.checked_mul(int(1)?).ok_or_else(overflow)?),
        "eqInt" => Term::Bool(int(0)? == int(1)?),
        "showInt" => Term::Str(int(0)?.to_string()),
        "liftInt" => Term::quote(Term::Int(int(0)?), vec![]),
        "and" => match (sp.args[0], sp.args[1]) {
            (Term::Bool(a), Term::Bool(b)) => Term::Bool(*a && *b),
            _ => return Err(stuck(t)),
        },
        "concat" => match (sp.args[0], sp.args[1]) {
            (Term::Str(a), Term::Str(b)) => Term::Str(format!("{a}{b}")),
            _ => return Err(stuck(t)),
        },
        "fix" => {
            let [a, b] = sp.tys[..] else {
                return Err(stuck(t));
            };
            let f = sp.args[0];
            let mut avoid = Default::default();
            free_vals(f, &mut Vec::new(), &mut avoid);
            let x = if avoid.contains("x") {
                fresh.name("x")
            } else {
                "x".to_string()
            };
            let again = Term::app(
                Term::app(
                    Term::ty_app(
                        Term::ty_app(Term::Global("fix".into()), a.clone()),
                        b.clone(),
                    ),
                    f.clone(),
                ),
                Term::Var(x.clone()),
            );
            return Ok((
                Term::app(f.clone(), Term::lam(x, a.clone(), again)),
                Rule::Fix,
            ));
        }
        "matchList" => {
            let scrutinee = spine(sp.args[0]).ok_or_else(|| stuck(t))?;
            match (scrutinee.head, &scrutinee.args[..]) {
                ("nil", []) => sp.args[1].clone(),
                ("cons", [h, tl]) => {
                    Term::app(Term::app(sp.args[2].clone(), (*h).clone()), (*tl).clone())
                }
                _ => return Err(stuck(t)),
            }
        }
        "fstP" | "sndP" => {
            let p = spine(sp.args[0]).ok_or_else(|| stuck(t))?;
            match (p.head, &p.args[..]) {
                ("pair", [a, b]) => {
                    if sp.head == "fstP" {
                        (*a).clone()
                    } else {
                        (*b).clone()
                    }
                }
                _ => return Err(stuck(t)),
            }
        }
        _ => return Err(stuck(t)),
    };
    Ok((out, Rule::Delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_core_term, pretty_term};

    fn run(src: &str) -> (String, Vec<Rule>) {
        let mut t = parse_core_term(src).unwrap();
        let mut rules = Vec::new();
        let mut fresh = Fresh::default();
        while let Some((next, r)) = step(&t, &mut fresh).unwrap() {
            t = next;
            rules.push(r);
        }
        (pretty_term(&t), rules)
    }

    #[test]
    fn beta() {
        assert_eq!(run("(\\x : Int -> x) 7"), ("7".into(), vec![Rule::Beta]));
    }

    #[test]
    fn type_beta() {
        assert_eq!(
            run("(/\\a . \\x : a -> x) <Int>"),
            ("\\x : Int -> x".into(), vec![Rule::TyBeta])
        );
    }

    #[test]
    fn arithmetic_left_to_right() {
        assert_eq!(
            run("add (mul 2 3) (sub 5 1)"),
            ("10".into(), vec![Rule::Delta, Rule::Delta, Rule::Delta])
        );
    }

    #[test]
    fn partial_applications_and_constructors_are_values() {
        for v in [
            "add 1",
            "cons <Int> 1 (nil <Int>)",
            "pair <Int> <Bool> 1 true",
            "fix <Int> <Int>",
        ] {
            assert!(is_value(&parse_core_term(v).unwrap()), "{v}");
        }
        assert!(!is_value(&parse_core_term("add 1 2").unwrap()));
    }

    #[test]
    fn quote_steps_only_its_splices() {
        let src = "[| mul sp 1 |]{() |- sp : Int = (\\c : Code Int -> c) [| 2 |]{}}";
        let (out, rules) = run(src);
        assert_eq!(out, "[| mul sp 1 |]{() |- sp : Int = [| 2 |]{}}");
        assert_eq!(rules, vec![Rule::Beta]);
    }

    #[test]
    fn ifz_selects_without_evaluating_the_other_branch() {
        assert_eq!(run("ifz 0 then 1 else add 1 true").0, "1");
        assert_eq!(run("ifz sub 3 3 then 1 else 2").0, "1");
        assert_eq!(run("ifz 4 then 1 else 2").0, "2");
    }

    #[test]
    fn fix_unfolds_lazily() {
        let fact = "fix <Int> <Int> (\\f : (Int -> Int) -> \\n : Int -> ifz n then 1 else mul n (f (sub n 1))) 5";
        let (out, rules) = run(fact);
        assert_eq!(out, "120");
        assert!(rules.contains(&Rule::Fix));
    }

    #[test]
    fn list_and_pair_eliminators() {
        assert_eq!(
            run("matchList <Int> <Int> (cons <Int> 4 (nil <Int>)) 0 (\\h : Int -> \\t : List Int -> h)").0,
            "4"
        );
        assert_eq!(
            run("sndP <Int> <String> (pair <Int> <String> 1 \"x\")").0,
            "\"x\""
        );
        assert_eq!(run("concat (showInt 4) \"2\"").0, "\"42\"");
        assert_eq!(run("liftInt 3").0, "[| 3 |]{}");
    }

    #[test]
    fn stuck_and_overflow() {
        let mut fresh = Fresh::default();
        let t = parse_core_term("add true 1").unwrap();
        assert!(matches!(
            step(&t, &mut fresh),
            Err(RuntimeError::Stuck { .. })
        ));
        let t = parse_core_term("mul 9223372036854775807 2").unwrap();
        assert!(matches!(
            step(&t, &mut fresh),
            Err(RuntimeError::Overflow { .. })
        ));
    }
}
