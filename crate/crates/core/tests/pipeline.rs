//! End-to-end behaviour of the pipeline on the corpus and the fixtures.

use std::path::{Path, PathBuf};

use stagec::corpus::{check_dir, check_file, corpus_files, expected_verdict, Verdict};
use stagec::eval::{Machine, Rule};
use stagec::syntax::{CoreDecl, Term};
use stagec::{lint_program, pretty_core, Pipeline, PipelineError, StepBudget};

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn fixture(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn rules_of(src: &str) -> (String, Vec<Rule>) {
    let mut rules = Vec::new();
    let out = Pipeline::default()
        .run_traced(src, |_, r, _| rules.push(r))
        .unwrap();
    (out.display(), rules)
}

#[test]
fn every_corpus_verdict_matches() {
    let results = check_dir(&Pipeline::default(), &corpus_dir()).unwrap();
    assert_eq!(results.len(), 12);
    for r in &results {
        assert!(
            r.passed,
            "{}: expected {}, got {}",
            r.file, r.expected, r.actual
        );
    }
}

#[test]
fn fixture_verdicts_match() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for f in corpus_files(&dir).unwrap() {
        let r = check_file(&Pipeline::default(), &f).unwrap();
        assert!(
            r.passed,
            "{}: expected {}, got {}",
            r.file, r.expected, r.actual
        );
    }
}

#[test]
fn stage_errors_carry_both_levels() {
    for (file, bound, used) in [("hasty.sth", 0, -1), ("tardy.sth", 0, 1)] {
        let err = Pipeline::default().check(&fixture(file)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let d = err.diagnostic();
        assert_eq!(d.code, "StageError");
        assert_eq!(
            (d.bound_level, d.use_level),
            (Some(bound), Some(used)),
            "{file}"
        );
    }
}

#[test]
fn rejected_corpus_programs_suggest_codec() {
    let src = std::fs::read_to_string(corpus_dir().join("c1_reject.sth")).unwrap();
    let err = Pipeline::default().check(&src).unwrap_err();
    assert_eq!(
        err.diagnostic().message,
        "no evidence for Show a at level 1 (have it at level 0; consider CodeC)"
    );
}

#[test]
fn nested_splices_run_innermost_first() {
    let core = Pipeline::default()
        .elaborate(&fixture("nested_splice.sth"))
        .unwrap();
    let levels: Vec<_> = core
        .decls
        .iter()
        .filter_map(|d| match d {
            CoreDecl::SpDef { level, .. } => Some(*level),
            _ => None,
        })
        .collect();
    assert_eq!(levels, vec![-2, -1]);
    let (v, rules) = rules_of(&fixture("nested_splice.sth"));
    assert_eq!(v, "3");
    assert_eq!(rules, vec![Rule::SpDefBeta, Rule::SpDefBeta, Rule::Delta]);
}

#[test]
fn power_with_exponent_zero() {
    let (v, rules) = rules_of(&fixture("power0.sth"));
    assert_eq!(v, "1");
    assert_eq!(rules.iter().filter(|r| **r == Rule::SpDefBeta).count(), 1);
}

#[test]
fn splice_definitions_precede_the_definitions_that_use_them() {
    for f in ["power.sth", "c2.sth", "tv1.sth"] {
        let src = std::fs::read_to_string(corpus_dir().join(f)).unwrap();
        let core = Pipeline::default().elaborate(&src).unwrap();
        let mut m = Machine::new(core);
        let mut seen_main = false;
        while let Some(rule) = m.step().unwrap() {
            if rule == Rule::SpDefBeta {
                assert!(!seen_main, "{f}: splice definition ran after main started");
            }
            if m.program.decls.is_empty() {
                seen_main = true;
            }
        }
    }
}

/// `[| .. |]` bodies never change except by substitution of whole terms:
/// once all definitions are gone, a quote's body is left alone.
#[test]
fn quote_bodies_are_opaque_to_evaluation() {
    fn quote_bodies(t: &Term, out: &mut Vec<Term>) {
        match t {
            Term::Quote(b, sps) => {
                out.push((**b).clone());
                for s in sps {
                    quote_bodies(&s.rhs, out);
                }
            }
            Term::App(a, b) => {
                quote_bodies(a, out);
                quote_bodies(b, out);
            }
            Term::Lam(_, _, b) | Term::TyLam(_, b) | Term::TyApp(b, _) => quote_bodies(b, out),
            Term::Ifz(a, b, c) => {
                quote_bodies(a, out);
                quote_bodies(b, out);
                quote_bodies(c, out);
            }
            _ => {}
        }
    }
    let src = "main = (\\c : Code Int -> 7) [| add (mul 2 3) 1 |]";
    let mut m = Machine::new(Pipeline::default().elaborate(src).unwrap());
    let mut before = Vec::new();
    quote_bodies(&m.program.main, &mut before);
    assert_eq!(before.len(), 1);
    let mut after = Vec::new();
    assert_eq!(m.step().unwrap(), Some(Rule::Beta));
    quote_bodies(&m.program.main, &mut after);
    assert!(after.is_empty() || after == before);
}

#[test]
fn splice_of_quote_cancels() {
    for line in fixture("cancellation.txt")
        .lines()
        .filter(|l| !l.starts_with("--"))
    {
        let (e, want) = line.split_once(";;").unwrap();
        let (e, want) = (e.trim(), want.trim());
        let plain = Pipeline::default().run(&format!("main = {e}")).unwrap();
        let staged = Pipeline::default()
            .run(&format!("main = $( [| {e} |] )"))
            .unwrap();
        assert_eq!(plain.display(), want, "{e}");
        assert_eq!(staged.display(), want, "$( [| {e} |] )");
    }
}

#[test]
fn every_step_of_the_corpus_lints() {
    for f in corpus_files(&corpus_dir()).unwrap() {
        let src = std::fs::read_to_string(&f).unwrap();
        if matches!(expected_verdict(&src).unwrap(), Verdict::Reject(_)) {
            continue;
        }
        let mut m = Machine::new(Pipeline::default().elaborate(&src).unwrap());
        let mut k = 0;
        while k < 200 && m.step().unwrap().is_some() {
            k += 1;
            if let Err(e) = lint_program(&m.program) {
                panic!(
                    "{} after {k} steps: {e}\n{}",
                    f.display(),
                    pretty_core(&m.program)
                );
            }
        }
    }
}

#[test]
fn error_phases_map_to_exit_codes() {
    let p = Pipeline::default();
    assert_eq!(p.check("main = (").unwrap_err().exit_code(), 2);
    assert_eq!(p.check("main = add true 1").unwrap_err().exit_code(), 1);
    assert_eq!(p.lint_core("main : Int = true").unwrap_err().exit_code(), 1);
    assert_eq!(
        p.run("main = sub 0 (mul 4611686018427387904 2)")
            .unwrap_err()
            .exit_code(),
        3
    );
    let tight = Pipeline::new(StepBudget(2));
    let err = tight.run("main = add 1 (add 2 (add 3 4))").unwrap_err();
    assert!(matches!(err, PipelineError::Runtime(_)));
    assert_eq!(err.code(), "BudgetExceeded");
}
