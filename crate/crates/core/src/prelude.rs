//! Built-in globals shared by the typechecker, the lint and the evaluator.

use std::sync::OnceLock;

use crate::syntax::{parse_scheme, Scheme, Type};

#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub scheme: Scheme,
    /// Number of value arguments the δ-rule consumes.
    pub arity: usize,
    /// Saturated constructor applications are values rather than redexes.
    pub constructor: bool,
}

impl Builtin {
    /// The System F type of the builtin.
    pub fn core_type(&self) -> Type {
        Type::forall(self.scheme.binders.clone(), self.scheme.ty.clone())
    }
}

const TABLE: &[(&str, &str, usize, bool)] = &[
    ("add", "Int -> Int -> Int", 2, false),
    ("sub", "Int -> Int -> Int", 2, false),
    ("mul", "Int -> Int -> Int", 2, false),
    ("eqInt", "Int -> Int -> Bool", 2, false),
    ("showInt", "Int -> String", 1, false),
    ("and", "Bool -> Bool -> Bool", 2, false),
    ("concat", "String -> String -> String", 2, false),
    ("liftInt", "Int -> Code Int", 1, false),
    (
        "fix",
        "forall a b . ((a -> b) -> a -> b) -> a -> b",
        1,
        false,
    ),
    ("nil", "forall a . List a", 0, true),
    ("cons", "forall a . a -> List a -> List a", 2, true),
    (
        "matchList",
        "forall a b . List a -> b -> (a -> List a -> b) -> b",
        3,
        false,
    ),
    ("pair", "forall a b . a -> b -> Pair a b", 2, true),
    ("fstP", "forall a b . Pair a b -> a", 1, false),
    ("sndP", "forall a b . Pair a b -> b", 1, false),
];

pub fn builtins() -> &'static [Builtin] {
    static CELL: OnceLock<Vec<Builtin>> = OnceLock::new();
    CELL.get_or_init(|| {
        TABLE
            .iter()
            .map(|&(name, sig, arity, constructor)| Builtin {
                name,
                scheme: parse_scheme(sig).expect("builtin signature parses"),
                arity,
                constructor,
            })
            .collect()
    })
}

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    builtins().iter().find(|b| b.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arities_match_signatures() {
        for b in builtins() {
            let mut ty = &b.scheme.ty;
            let mut args = 0;
            while let Type::Arrow(_, r) = ty {
                args += 1;
                ty = r;
            }
            if b.name == "fix" {
                // fix unfolds once it has its functional argument.
                assert_eq!(b.arity, 1);
            } else {
                assert_eq!(args, b.arity, "{}", b.name);
            }
        }
    }
}
