//! Deterministic printers. Output re-parses to the same tree.
//!
//! Expression precedence: 0 allows binders and `ifz`, 1 is the function
//! position of an application, 2 is an argument position.

use std::fmt::Write;

use super::core_lang::{CoreBinding, CoreDecl, CoreEnv, CoreProgram, SpliceBinding, Term};
use super::source::{Decl, Expr, SourceProgram};
use super::types::AtPrec;

pub fn pretty_source(p: &SourceProgram) -> String {
    let mut out = String::new();
    for d in &p.decls {
        match &d.node {
            Decl::Def { name, sig, body } => {
                let _ = writeln!(out, "def {name} :: {sig} = {};", expr(body));
            }
            Decl::Class {
                class,
                tyvar,
                method,
                sig,
            } => {
                let _ = writeln!(out, "class {class} {tyvar} where {method} :: {sig};");
            }
            Decl::Instance {
                context,
                class,
                head,
                method,
                body,
            } => {
                out.push_str("instance ");
                if !context.is_empty() {
                    let cs: Vec<String> = context.iter().map(|c| c.to_string()).collect();
                    let _ = write!(out, "({}) => ", cs.join(", "));
                }
                let _ = writeln!(
                    out,
                    "{class} {} where {method} = {};",
                    AtPrec(head, 2),
                    expr(body)
                );
            }
        }
    }
    let _ = writeln!(out, "main = {}", expr(&p.main.node));
    out
}

pub fn expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_expr(out: &mut String, e: &Expr, prec: u8) {
    match e {
        Expr::Var(x) => out.push_str(x),
        Expr::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Expr::Str(s) => write_str_lit(out, s),
        Expr::Quote(b) => {
            out.push_str("[| ");
            write_expr(out, b, 0);
            out.push_str(" |]");
        }
        Expr::Splice(b) => {
            out.push_str("$( ");
            write_expr(out, b, 0);
            out.push_str(" )");
        }
        Expr::App(f, a) => parens(out, prec > 1, |out| {
            write_expr(out, f, 1);
            out.push(' ');
            write_expr(out, a, 2);
        }),
        Expr::Lam(x, ty, b) => parens(out, prec > 0, |out| {
            let _ = write!(out, "\\{x} : {} -> ", AtPrec(ty, 1));
            write_expr(out, b, 0);
        }),
        Expr::Ifz(c, z, nz) => parens(out, prec > 0, |out| {
            out.push_str("ifz ");
            write_expr(out, c, 0);
            out.push_str(" then ");
            write_expr(out, z, 0);
            out.push_str(" else ");
            write_expr(out, nz, 0);
        }),
    }
}

fn parens(out: &mut String, wrap: bool, inner: impl FnOnce(&mut String)) {
    if wrap {
        out.push('(');
    }
    inner(out);
    if wrap {
        out.push(')');
    }
}

fn write_str_lit(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

pub fn pretty_core(p: &CoreProgram) -> String {
    let mut out = String::new();
    for d in &p.decls {
        out.push_str(&core_decl(d));
        out.push('\n');
    }
    let _ = writeln!(out, "main : {} = {}", p.main_ty, term(&p.main));
    out
}

pub fn core_decl(d: &CoreDecl) -> String {
    match d {
        CoreDecl::Def { name, ty, body } => format!("def {name} : {ty} = {} ;", term(body)),
        CoreDecl::SpDef {
            env,
            level,
            name,
            ty,
            body,
        } => format!(
            "spdef<{level}> {} |- {name} : {ty} = {} ;",
            core_env(env),
            term(body)
        ),
    }
}

pub fn term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 0);
    s
}

pub fn core_env(env: &CoreEnv) -> String {
    let parts: Vec<String> = env
        .iter()
        .map(|b| match b {
            CoreBinding::Val { name, ty, level } => format!("{name} : ({ty}, {level})"),
            CoreBinding::Splice {
                name,
                env,
                ty,
                level,
            } => format!("{name} : ({} |- {ty}, {level})", core_env(env)),
            CoreBinding::TyVar(a) => a.clone(),
        })
        .collect();
    format!("({})", parts.join(", "))
}

pub fn splice_binding(s: &SpliceBinding) -> String {
    format!(
        "{} |- {} : {} = {}",
        core_env(&s.env),
        s.name,
        s.ty,
        term(&s.rhs)
    )
}

fn write_term(out: &mut String, t: &Term, prec: u8) {
    match t {
        Term::Var(x) | Term::Global(x) | Term::SpliceVar(x) => out.push_str(x),
        Term::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Term::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Term::Str(s) => write_str_lit(out, s),
        Term::Quote(b, sp) => {
            out.push_str("[| ");
            write_term(out, b, 0);
            out.push_str(" |]{");
            let entries: Vec<String> = sp.iter().map(splice_binding).collect();
            out.push_str(&entries.join(" ; "));
            out.push('}');
        }
        Term::App(f, a) => parens(out, prec > 1, |out| {
            write_term(out, f, 1);
            out.push(' ');
            write_term(out, a, 2);
        }),
        Term::TyApp(f, ty) => parens(out, prec > 1, |out| {
            write_term(out, f, 1);
            let _ = write!(out, " <{ty}>");
        }),
        Term::Lam(x, ty, b) => parens(out, prec > 0, |out| {
            let _ = write!(out, "\\{x} : {} -> ", AtPrec(ty, 1));
            write_term(out, b, 0);
        }),
        Term::TyLam(a, b) => parens(out, prec > 0, |out| {
            let _ = write!(out, "/\\{a} . ");
            write_term(out, b, 0);
        }),
        Term::Ifz(c, z, nz) => parens(out, prec > 0, |out| {
            out.push_str("ifz ");
            write_term(out, c, 0);
            out.push_str(" then ");
            write_term(out, z, 0);
            out.push_str(" else ");
            write_term(out, nz, 0);
        }),
    }
}
