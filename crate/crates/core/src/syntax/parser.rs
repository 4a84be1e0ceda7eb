//! Recursive-descent parsers for the source and core languages.
//!
//! Both languages share the lexer and the type grammar. The core parser
//! additionally resolves every identifier to a local variable, a splice
//! variable or a global, following the binding structure of the term.

use thiserror::Error;

use crate::Level;

use super::core_lang::{CoreBinding, CoreDecl, CoreEnv, CoreProgram, SpliceBinding, Term};
use super::lexer::{is_keyword, tokenize, Span, Tok, Token};
use super::source::{Decl, Expr, Located, SourceProgram};
use super::types::{Constraint, Scheme, Type, BASE_TYPE_NAMES};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

fn expected_suffix(expected: &[String]) -> String {
    match expected {
        [] => String::new(),
        [one] => format!(" (expected {one})"),
        many => format!(" (expected one of {})", many.join(", ")),
    }
}

type PResult<T> = Result<T, ParseError>;

pub fn parse_program(src: &str) -> PResult<SourceProgram> {
    let mut p = Parser::new(src, false)?;
    let prog = p.source_program()?;
    Ok(prog)
}

pub fn parse_expr(src: &str) -> PResult<Expr> {
    let mut p = Parser::new(src, false)?;
    let e = p.source_expr()?;
    p.expect(Tok::Eof)?;
    Ok(e)
}

pub fn parse_type(src: &str) -> PResult<Type> {
    let mut p = Parser::new(src, false)?;
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub fn parse_scheme(src: &str) -> PResult<Scheme> {
    let mut p = Parser::new(src, false)?;
    let s = p.scheme()?;
    p.expect(Tok::Eof)?;
    Ok(s)
}

pub fn parse_core_type(src: &str) -> PResult<Type> {
    let mut p = Parser::new(src, true)?;
    let t = p.ty()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

/// Parse a closed core term; free identifiers become globals.
pub fn parse_core_term(src: &str) -> PResult<Term> {
    let mut p = Parser::new(src, true)?;
    let t = p.core_expr()?;
    p.expect(Tok::Eof)?;
    Ok(resolve(t, &mut Vec::new()))
}

pub fn parse_core_program(src: &str) -> PResult<CoreProgram> {
    let mut p = Parser::new(src, true)?;
    p.core_program()
}

pub(crate) fn is_class_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase()) && !BASE_TYPE_NAMES.contains(&s) && s != "CodeC"
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    core: bool,
}

impl Parser {
    fn new(src: &str, core: bool) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            core,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            message: format!("unexpected {}", self.peek()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[&tok.to_string()]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<()> {
        if self.is_kw(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn int(&mut self) -> PResult<i64> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.advance();
                Ok(n)
            }
            _ => Err(self.error(&["integer"])),
        }
    }

    /// Run `f`, restoring the position if it fails.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Parser) -> PResult<T>) -> Option<T> {
        let saved = self.pos;
        match f(self) {
            Ok(v) => Some(v),
            Err(_) => {
                self.pos = saved;
                None
            }
        }
    }

    // Types.

    fn ty(&mut self) -> PResult<Type> {
        if self.core && self.is_kw("forall") {
            self.advance();
            let binders = self.binders()?;
            let body = self.ty()?;
            return Ok(Type::forall(binders, body));
        }
        let b = self.btype()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            Ok(Type::arrow(b, self.ty()?))
        } else {
            Ok(b)
        }
    }

    fn binders(&mut self) -> PResult<Vec<String>> {
        let mut binders = vec![self.ident()?];
        while *self.peek() != Tok::Dot {
            binders.push(self.ident()?);
        }
        self.expect(Tok::Dot)?;
        Ok(binders)
    }

    fn btype(&mut self) -> PResult<Type> {
        match self.peek() {
            Tok::Upper(s) if s == "List" => {
                self.advance();
                Ok(Type::list(self.atype()?))
            }
            Tok::Upper(s) if s == "Code" => {
                self.advance();
                Ok(Type::code(self.atype()?))
            }
            Tok::Upper(s) if s == "Pair" => {
                self.advance();
                let a = self.atype()?;
                Ok(Type::pair(a, self.atype()?))
            }
            _ => self.atype(),
        }
    }

    fn atype(&mut self) -> PResult<Type> {
        let t = match self.peek() {
            Tok::Upper(s) if s == "Int" => Type::Int,
            Tok::Upper(s) if s == "Bool" => Type::Bool,
            Tok::Upper(s) if s == "String" => Type::Str,
            Tok::Ident(s) if !is_keyword(s) => Type::Var(s.clone()),
            Tok::LParen => {
                self.advance();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                return Ok(t);
            }
            _ => return Err(self.error(&["type"])),
        };
        self.advance();
        Ok(t)
    }

    // Constraints and schemes.

    fn constraint(&mut self) -> PResult<Constraint> {
        match self.peek().clone() {
            Tok::Upper(s) if s == "CodeC" => {
                self.advance();
                Ok(Constraint::Code(Box::new(self.constraint()?)))
            }
            Tok::Upper(s) if is_class_name(&s) => {
                self.advance();
                Ok(Constraint::Class(s, self.atype()?))
            }
            Tok::LParen => {
                self.advance();
                let c = self.constraint()?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            _ => Err(self.error(&["constraint"])),
        }
    }

    fn scheme(&mut self) -> PResult<Scheme> {
        let binders = if self.is_kw("forall") {
            self.advance();
            self.binders()?
        } else {
            Vec::new()
        };
        let mut context = Vec::new();
        while let Some(c) = self.attempt(|p| {
            let c = p.constraint()?;
            p.expect(Tok::FatArrow)?;
            Ok(c)
        }) {
            context.push(c);
        }
        let ty = self.ty()?;
        Ok(Scheme {
            binders,
            context,
            ty,
        })
    }

    fn instance_context(&mut self) -> Vec<Constraint> {
        let tuple = self.attempt(|p| {
            p.expect(Tok::LParen)?;
            let mut cs = vec![p.constraint()?];
            while *p.peek() == Tok::Comma {
                p.advance();
                cs.push(p.constraint()?);
            }
            p.expect(Tok::RParen)?;
            p.expect(Tok::FatArrow)?;
            Ok(cs)
        });
        if let Some(cs) = tuple {
            return cs;
        }
        self.attempt(|p| {
            let c = p.constraint()?;
            p.expect(Tok::FatArrow)?;
            Ok(vec![c])
        })
        .unwrap_or_default()
    }

    // Source programs.

    fn source_program(&mut self) -> PResult<SourceProgram> {
        let mut decls = Vec::new();
        loop {
            let span = self.span();
            let node = if self.is_kw("def") {
                self.advance();
                let name = self.ident()?;
                self.expect(Tok::DoubleColon)?;
                let sig = self.scheme()?;
                self.expect(Tok::Equals)?;
                let body = self.source_expr()?;
                Decl::Def { name, sig, body }
            } else if self.is_kw("class") {
                self.advance();
                let class = match self.advance() {
                    Tok::Upper(s) if is_class_name(&s) => s,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["class name"]));
                    }
                };
                let tyvar = self.ident()?;
                self.expect_kw("where")?;
                let method = self.ident()?;
                self.expect(Tok::DoubleColon)?;
                let sig = self.scheme()?;
                Decl::Class {
                    class,
                    tyvar,
                    method,
                    sig,
                }
            } else if self.is_kw("instance") {
                self.advance();
                let context = self.instance_context();
                let class = match self.advance() {
                    Tok::Upper(s) if is_class_name(&s) => s,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["class name"]));
                    }
                };
                let head = self.btype()?;
                self.expect_kw("where")?;
                let method = self.ident()?;
                self.expect(Tok::Equals)?;
                let body = self.source_expr()?;
                Decl::Instance {
                    context,
                    class,
                    head,
                    method,
                    body,
                }
            } else if self.is_kw("main") {
                self.advance();
                self.expect(Tok::Equals)?;
                let e = self.source_expr()?;
                if *self.peek() == Tok::Semi {
                    self.advance();
                }
                self.expect(Tok::Eof)?;
                return Ok(SourceProgram {
                    decls,
                    main: Located { node: e, span },
                });
            } else {
                return Err(self.error(&["`def`", "`class`", "`instance`", "`main`"]));
            };
            self.expect(Tok::Semi)?;
            decls.push(Located { node, span });
        }
    }

    fn source_expr(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Backslash {
            self.advance();
            let x = self.ident()?;
            self.expect(Tok::Colon)?;
            let ty = self.btype()?;
            self.expect(Tok::Arrow)?;
            return Ok(Expr::lam(x, ty, self.source_expr()?));
        }
        if self.is_kw("ifz") {
            self.advance();
            let c = self.source_expr()?;
            self.expect_kw("then")?;
            let z = self.source_expr()?;
            self.expect_kw("else")?;
            let nz = self.source_expr()?;
            return Ok(Expr::Ifz(Box::new(c), Box::new(z), Box::new(nz)));
        }
        let mut f = self.source_atom()?;
        while self.starts_atom() {
            f = Expr::app(f, self.source_atom()?);
        }
        Ok(f)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || s == "true" || s == "false",
            Tok::Int(_) | Tok::Str(_) | Tok::LParen | Tok::QuoteOpen => true,
            Tok::SpliceOpen => !self.core,
            _ => false,
        }
    }

    fn source_atom(&mut self) -> PResult<Expr> {
        let e = match self.peek().clone() {
            Tok::Ident(s) if s == "true" => Expr::Bool(true),
            Tok::Ident(s) if s == "false" => Expr::Bool(false),
            Tok::Ident(s) if !is_keyword(&s) => Expr::Var(s),
            Tok::Int(n) => Expr::Int(n),
            Tok::Str(s) => Expr::Str(s),
            Tok::LParen => {
                self.advance();
                let e = self.source_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::QuoteOpen => {
                self.advance();
                let e = self.source_expr()?;
                self.expect(Tok::QuoteClose)?;
                return Ok(Expr::quote(e));
            }
            Tok::SpliceOpen => {
                self.advance();
                let e = self.source_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(Expr::splice(e));
            }
            _ => return Err(self.error(&["expression"])),
        };
        self.advance();
        Ok(e)
    }

    // Core programs. Identifiers are parsed as globals and resolved once
    // the enclosing binding structure is known.

    fn core_program(&mut self) -> PResult<CoreProgram> {
        let mut decls = Vec::new();
        let mut spdefs: Vec<String> = Vec::new();
        let scope_of = |spdefs: &[String]| -> Vec<(String, Kind)> {
            spdefs.iter().map(|s| (s.clone(), Kind::Splice)).collect()
        };
        loop {
            if self.is_kw("def") {
                self.advance();
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::Equals)?;
                let body = self.core_expr()?;
                self.expect(Tok::Semi)?;
                let body = resolve(body, &mut scope_of(&spdefs));
                decls.push(CoreDecl::Def { name, ty, body });
            } else if self.is_kw("spdef") {
                self.advance();
                self.expect(Tok::Lt)?;
                let level: Level = self.int()?;
                self.expect(Tok::Gt)?;
                let env = self.core_env()?;
                self.expect(Tok::Turnstile)?;
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                self.expect(Tok::Equals)?;
                let body = self.core_expr()?;
                self.expect(Tok::Semi)?;
                let mut scope = scope_of(&spdefs);
                push_env_scope(&env, &mut scope);
                let body = resolve(body, &mut scope);
                spdefs.push(name.clone());
                decls.push(CoreDecl::SpDef {
                    env,
                    level,
                    name,
                    ty,
                    body,
                });
            } else if self.is_kw("main") {
                self.advance();
                self.expect(Tok::Colon)?;
                let main_ty = self.ty()?;
                self.expect(Tok::Equals)?;
                let main = self.core_expr()?;
                if *self.peek() == Tok::Semi {
                    self.advance();
                }
                self.expect(Tok::Eof)?;
                let main = resolve(main, &mut scope_of(&spdefs));
                return Ok(CoreProgram {
                    decls,
                    main,
                    main_ty,
                });
            } else {
                return Err(self.error(&["`def`", "`spdef`", "`main`"]));
            }
        }
    }

    fn core_env(&mut self) -> PResult<CoreEnv> {
        self.expect(Tok::LParen)?;
        let mut env = CoreEnv::new();
        if *self.peek() == Tok::RParen {
            self.advance();
            return Ok(env);
        }
        loop {
            let name = self.ident()?;
            if *self.peek() == Tok::Colon {
                self.advance();
                self.expect(Tok::LParen)?;
                let nested = self.attempt(|p| {
                    let e = p.core_env()?;
                    p.expect(Tok::Turnstile)?;
                    Ok(e)
                });
                let ty = self.ty()?;
                self.expect(Tok::Comma)?;
                let level = self.int()?;
                self.expect(Tok::RParen)?;
                env.push(match nested {
                    Some(env) => CoreBinding::Splice {
                        name,
                        env,
                        ty,
                        level,
                    },
                    None => CoreBinding::Val { name, ty, level },
                });
            } else {
                env.push(CoreBinding::TyVar(name));
            }
            match self.advance() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(env),
                _ => {
                    self.pos -= 1;
                    return Err(self.error(&["`,`", "`)`"]));
                }
            }
        }
    }

    fn core_expr(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Backslash => {
                self.advance();
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.btype()?;
                self.expect(Tok::Arrow)?;
                Ok(Term::lam(x, ty, self.core_expr()?))
            }
            Tok::BigLambda => {
                self.advance();
                let a = self.ident()?;
                self.expect(Tok::Dot)?;
                Ok(Term::ty_lam(a, self.core_expr()?))
            }
            _ if self.is_kw("ifz") => {
                self.advance();
                let c = self.core_expr()?;
                self.expect_kw("then")?;
                let z = self.core_expr()?;
                self.expect_kw("else")?;
                let nz = self.core_expr()?;
                Ok(Term::Ifz(Box::new(c), Box::new(z), Box::new(nz)))
            }
            _ => {
                let mut f = self.core_atom()?;
                loop {
                    if *self.peek() == Tok::Lt {
                        self.advance();
                        let t = self.ty()?;
                        self.expect(Tok::Gt)?;
                        f = Term::ty_app(f, t);
                    } else if self.starts_atom() {
                        f = Term::app(f, self.core_atom()?);
                    } else {
                        return Ok(f);
                    }
                }
            }
        }
    }

    fn core_atom(&mut self) -> PResult<Term> {
        let t = match self.peek().clone() {
            Tok::Ident(s) if s == "true" => Term::Bool(true),
            Tok::Ident(s) if s == "false" => Term::Bool(false),
            Tok::Ident(s) if !is_keyword(&s) => Term::Global(s),
            Tok::Int(n) => Term::Int(n),
            Tok::Str(s) => Term::Str(s),
            Tok::LParen => {
                self.advance();
                let e = self.core_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            Tok::QuoteOpen => {
                self.advance();
                let body = self.core_expr()?;
                self.expect(Tok::QuoteClose)?;
                self.expect(Tok::LBrace)?;
                let mut sp = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        let env = self.core_env()?;
                        self.expect(Tok::Turnstile)?;
                        let name = self.ident()?;
                        self.expect(Tok::Colon)?;
                        let ty = self.ty()?;
                        self.expect(Tok::Equals)?;
                        let rhs = self.core_expr()?;
                        sp.push(SpliceBinding { env, name, ty, rhs });
                        if *self.peek() == Tok::Semi {
                            self.advance();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                return Ok(Term::quote(body, sp));
            }
            _ => return Err(self.error(&["expression"])),
        };
        self.advance();
        Ok(t)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Local,
    Splice,
}

fn push_env_scope(env: &CoreEnv, scope: &mut Vec<(String, Kind)>) {
    for b in env.iter() {
        match b {
            CoreBinding::Val { name, .. } => scope.push((name.clone(), Kind::Local)),
            CoreBinding::Splice { name, .. } => scope.push((name.clone(), Kind::Splice)),
            CoreBinding::TyVar(_) => {}
        }
    }
}

fn resolve(t: Term, scope: &mut Vec<(String, Kind)>) -> Term {
    match t {
        Term::Global(x) | Term::Var(x) | Term::SpliceVar(x) => {
            match scope.iter().rev().find(|(n, _)| *n == x) {
                Some((_, Kind::Local)) => Term::Var(x),
                Some((_, Kind::Splice)) => Term::SpliceVar(x),
                None => Term::Global(x),
            }
        }
        Term::Lam(x, ty, body) => {
            scope.push((x.clone(), Kind::Local));
            let body = resolve(*body, scope);
            scope.pop();
            Term::lam(x, ty, body)
        }
        Term::App(a, b) => Term::app(resolve(*a, scope), resolve(*b, scope)),
        Term::TyLam(a, b) => Term::ty_lam(a, resolve(*b, scope)),
        Term::TyApp(b, ty) => Term::ty_app(resolve(*b, scope), ty),
        Term::Quote(body, sp) => {
            let sp: Vec<SpliceBinding> = sp
                .into_iter()
                .map(|s| {
                    let mark = scope.len();
                    push_env_scope(&s.env, scope);
                    let rhs = resolve(s.rhs, scope);
                    scope.truncate(mark);
                    SpliceBinding { rhs, ..s }
                })
                .collect();
            let mark = scope.len();
            scope.extend(sp.iter().map(|s| (s.name.clone(), Kind::Splice)));
            let body = resolve(*body, scope);
            scope.truncate(mark);
            Term::quote(body, sp)
        }
        Term::Ifz(a, b, c) => Term::Ifz(
            Box::new(resolve(*a, scope)),
            Box::new(resolve(*b, scope)),
            Box::new(resolve(*c, scope)),
        ),
        lit @ (Term::Int(_) | Term::Bool(_) | Term::Str(_)) => lit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schemes_with_nested_codec() {
        let s = parse_scheme(
            "forall a . CodeC (Num a) => CodeC (FromInt a) => Int -> Code a -> Code a",
        )
        .unwrap();
        assert_eq!(s.binders, vec!["a"]);
        assert_eq!(s.context.len(), 2);
        assert_eq!(s.context[0].depth(), 1);
        assert_eq!(
            s.ty,
            Type::arrows(
                [Type::Int, Type::code(Type::var("a"))],
                Type::code(Type::var("a"))
            )
        );
    }

    #[test]
    fn parenthesised_type_is_not_a_constraint() {
        let s = parse_scheme("(a -> String) -> a").unwrap();
        assert!(s.context.is_empty());
    }

    #[test]
    fn instance_contexts() {
        let p = parse_program(
            "instance (Eq a, Show a) => Eq (List a) where eq = eq; \
             instance Show Int where show = showInt; main = 1",
        )
        .unwrap();
        match &p.decls[0].node {
            Decl::Instance { context, head, .. } => {
                assert_eq!(context.len(), 2);
                assert_eq!(*head, Type::list(Type::var("a")));
            }
            d => panic!("{d:?}"),
        }
        match &p.decls[1].node {
            Decl::Instance { context, .. } => assert!(context.is_empty()),
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn lambda_annotation_needs_parens_for_arrows() {
        assert!(parse_expr("\\f : (Int -> Int) -> f 1").is_ok());
        let e = parse_expr("\\x : List Int -> x").unwrap();
        assert_eq!(e, Expr::lam("x", Type::list(Type::Int), Expr::var("x")));
    }

    #[test]
    fn splices_and_quotes() {
        let e = parse_expr("$( [| add 1 -2 |] )").unwrap();
        assert_eq!(
            e,
            Expr::splice(Expr::quote(Expr::app(
                Expr::app(Expr::var("add"), Expr::Int(1)),
                Expr::Int(-2)
            )))
        );
    }

    #[test]
    fn error_reports_position_and_expectation() {
        let err = parse_program("def f :: Int = ;\nmain = f").unwrap_err();
        assert_eq!(err.span, Span { line: 1, col: 16 });
        assert_eq!(err.expected, vec!["expression"]);
    }

    #[test]
    fn core_identifier_resolution() {
        let p = parse_core_program(
            "spdef<-1> (a, ev : (a -> String, 0)) |- sp : a -> String = c [| ev |]{} ;\n\
             main : Int = (\\x : Int -> [| sp2 x |]{(x : (Int, 0)) |- sp2 : Int = f x sp}) 1",
        )
        .unwrap();
        match &p.decls[0] {
            CoreDecl::SpDef {
                env, level, body, ..
            } => {
                assert_eq!(*level, -1);
                assert_eq!(env.0.len(), 2);
                assert_eq!(
                    *body,
                    Term::app(
                        Term::Global("c".into()),
                        Term::quote(Term::Var("ev".into()), vec![])
                    )
                );
            }
            d => panic!("{d:?}"),
        }
        let Term::App(lam, _) = &p.main else { panic!() };
        let Term::Lam(_, _, q) = &**lam else { panic!() };
        let Term::Quote(body, sp) = &**q else {
            panic!()
        };
        assert_eq!(
            **body,
            Term::app(Term::SpliceVar("sp2".into()), Term::Var("x".into()))
        );
        assert_eq!(
            sp[0].rhs,
            Term::app(
                Term::app(Term::Global("f".into()), Term::Var("x".into())),
                Term::SpliceVar("sp".into())
            )
        );
    }

    #[test]
    fn core_nested_splice_entries() {
        let p = parse_core_program("main : Code Int = [| s |]{(q : ((a) |- a, 1)) |- s : Int = q}")
            .unwrap();
        let Term::Quote(_, sp) = &p.main else {
            panic!()
        };
        match &sp[0].env.0[0] {
            CoreBinding::Splice { env, level, .. } => {
                assert_eq!(*level, 1);
                assert!(env.has_tyvar("a"));
            }
            b => panic!("{b:?}"),
        }
        assert_eq!(sp[0].rhs, Term::SpliceVar("q".into()));
    }
}
