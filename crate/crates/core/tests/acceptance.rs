//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::cell::Cell;
use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use stagec::corpus::{check_dir, corpus_files, expected_verdict, Verdict};
use stagec::eval::{Machine, Rule};
use stagec::lint::{lint_term, CoreTheory};
use stagec::syntax::{parse_scheme, Constraint, CoreBinding, CoreDecl, Type};
use stagec::typecheck::{entail, form_constraint, Axiom, ClassInfo, NameSupply, Theory, TypeEnv};
use stagec::{lint_program, pretty_core, Level, Pipeline};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(root().join(path)).unwrap()
}

fn fixture(name: &str) -> String {
    read(Path::new("crates/core/tests/fixtures").join(name))
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn verdicts() -> Outcome {
    let start = Instant::now();
    let results =
        check_dir(&Pipeline::default(), &root().join("corpus")).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(5), start)?;
    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} (expected {}, got {})", r.file, r.expected, r.actual))
        .collect();
    if results.len() != 12 {
        return Err(format!("expected 12 corpus files, found {}", results.len()));
    }
    if !failed.is_empty() {
        return Err(failed.join("; "));
    }
    Ok(format!("12/12 verdicts matched in {took:?}"))
}

/// Split into identifier runs and single punctuation characters, then
/// rename evidence and splice names by order of first appearance.
fn canonical(text: &str) -> Vec<String> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '_' || c == '\'' {
            cur.push(c);
            continue;
        }
        if !cur.is_empty() {
            toks.push(std::mem::take(&mut cur));
        }
        if !c.is_whitespace() {
            toks.push(c.to_string());
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    let mut seen: Vec<String> = Vec::new();
    toks.into_iter()
        .map(|t| {
            let stem = t.trim_end_matches(|c: char| c.is_ascii_digit());
            if stem != "ev" && stem != "sp" {
                return t;
            }
            let i = seen.iter().position(|s| *s == t).unwrap_or_else(|| {
                seen.push(t.clone());
                seen.len() - 1
            });
            format!("{stem}#{i}")
        })
        .collect()
}

fn golden_c1prime() -> Outcome {
    // The displayed output, in the core's concrete syntax.
    const EXPECTED: &str =
        "spdef<-1> (a, ev : (a -> String, 0)) |- sp : a -> String = c1' <a> [| ev |]{} ;
        main : forall a . (a -> String) -> a -> String = /\\a . \\ev : (a -> String) -> sp";
    let core = Pipeline::default()
        .elaborate(&read("corpus/c1prime.sth"))
        .map_err(|e| format!("{e:?}"))?;
    let text = pretty_core(&core);
    if read("corpus/golden/c1prime.core") != text {
        return Err("corpus/golden/c1prime.core is stale".into());
    }
    let tail: Vec<_> = text
        .lines()
        .rev()
        .take(2)
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    let (got, want) = (canonical(&tail.join("\n")), canonical(EXPECTED));
    if got != want {
        return Err(format!("got `{}`", tail.join(" ")));
    }
    Ok("spdef and main match up to fresh names".into())
}

fn accepted_lint() -> Outcome {
    let mut n = 0;
    for f in corpus_files(&root().join("corpus")).map_err(|e| e.to_string())? {
        let src = std::fs::read_to_string(&f).unwrap();
        if matches!(expected_verdict(&src), Ok(Verdict::Reject(_))) {
            continue;
        }
        let core = Pipeline::default()
            .check(&src)
            .map_err(|e| format!("{}: {e:?}", f.display()))?;
        lint_program(&core).map_err(|e| format!("{}: {e}", f.display()))?;
        n += 1;
    }
    Ok(format!("{n} accepted programs lint"))
}

const CLASSES: [(&str, &str); 2] = [("Show", "a -> String"), ("Eq", "a -> a -> Bool")];

#[derive(Clone, Debug)]
struct Instance {
    /// (class, head) of each context-free axiom
    axioms: Vec<(usize, Type)>,
    /// (class, type, CodeC depth, level)
    givens: Vec<(usize, Type, usize, Level)>,
    wanted: (usize, Type, usize, Level),
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    let ty = || prop::sample::select(vec![Type::Int, Type::Bool, Type::var("a"), Type::var("b")]);
    let head = prop::sample::select(vec![Type::Int, Type::Bool]);
    let constraint = move || (0..CLASSES.len(), ty(), 0usize..=3, -2i64..=2);
    (
        prop::collection::btree_set((0..CLASSES.len(), head), 0..=3),
        prop::collection::vec(constraint(), 0..=4),
        constraint(),
    )
        .prop_map(|(axioms, givens, wanted)| Instance {
            axioms: axioms.into_iter().collect(),
            givens,
            wanted,
        })
}

fn build(c: usize, ty: &Type, depth: usize) -> Constraint {
    Constraint::class(CLASSES[c].0, ty.clone()).wrap(depth)
}

/// Breadth-first search over the entailment rules, at most six rule
/// applications deep. A goal is a constraint at a level; a local given
/// closes it when it is the same constraint at the same level, a
/// context-free axiom closes an unwrapped class constraint at any level,
/// `CodeC C` at n reduces to `C` at n+1 and `C` at n to `CodeC C` at n-1.
fn oracle(inst: &Instance) -> bool {
    let givens: Vec<(Constraint, Level)> = inst
        .givens
        .iter()
        .map(|(c, t, d, l)| (build(*c, t, *d), *l))
        .collect();
    let (c, t, d, l) = &inst.wanted;
    let mut queue = VecDeque::from([(build(*c, t, *d), *l, 0usize)]);
    while let Some((goal, level, depth)) = queue.pop_front() {
        if givens.contains(&(goal.clone(), level)) {
            return true;
        }
        if let Constraint::Class(class, ty) = &goal {
            let axiom = inst
                .axioms
                .iter()
                .any(|(c, head)| CLASSES[*c].0 == class && head == ty);
            if axiom {
                return true;
            }
        }
        if depth == 6 {
            continue;
        }
        if let Constraint::Code(inner) = &goal {
            queue.push_back(((**inner).clone(), level + 1, depth + 1));
        }
        queue.push_back((Constraint::Code(Box::new(goal)), level - 1, depth + 1));
    }
    false
}

fn theory(inst: &Instance) -> (Theory, CoreTheory) {
    let mut t = Theory::new();
    for (name, sig) in CLASSES {
        t.add_class(ClassInfo {
            name: name.into(),
            tyvar: "a".into(),
            method: name.to_lowercase(),
            sig: parse_scheme(sig).unwrap(),
        });
    }
    let mut core = CoreTheory::new();
    for (c, head) in &inst.axioms {
        let ev = format!("ev{}{}", CLASSES[*c].0, head);
        core = core.with_global(&ev, form_constraint(&t, &build(*c, head, 0)).unwrap());
        t.add_axiom(Axiom {
            ev,
            class: CLASSES[*c].0.into(),
            binders: vec![],
            context: vec![],
            head: head.clone(),
        });
    }
    (t, core)
}

/// Solve with the elaborator's entailment and check the evidence it builds.
fn solver(inst: &Instance) -> Result<bool, String> {
    let (theory, core) = theory(inst);
    let mut env = TypeEnv::new();
    env.push_tyvar("a");
    env.push_tyvar("b");
    for (i, (c, t, d, l)) in inst.givens.iter().enumerate() {
        env.push_ev(&theory, format!("g{i}"), build(*c, t, *d), *l)
            .unwrap();
    }
    let (c, t, d, level) = &inst.wanted;
    let wanted = build(*c, t, *d);
    let mut names = NameSupply::new(["g0", "g1", "g2", "g3"].map(String::from));
    let Ok((ev, tsp)) = entail(&theory, &env, *level, &wanted, &mut names) else {
        return Ok(false);
    };
    // Evidence must have the dictionary type, with its splice points bound
    // from the lowest level up.
    let mut lint_env = env.elab_env();
    let mut points: Vec<_> = tsp.iter().collect();
    points.sort_by_key(|(l, _)| *l);
    for (l, sp) in points {
        if l >= *level {
            return Err(format!(
                "splice point {} at level {l} not below {level}",
                sp.name
            ));
        }
        let rhs =
            lint_term(&core, &lint_env.concat(&sp.env), l, &sp.rhs).map_err(|e| e.to_string())?;
        if !rhs.alpha_eq(&Type::code(sp.ty.clone())) {
            return Err(format!("splice point {} has type {rhs}", sp.name));
        }
        lint_env.push(CoreBinding::Splice {
            name: sp.name.clone(),
            env: sp.env.clone(),
            ty: sp.ty.clone(),
            level: l + 1,
        });
    }
    let got = lint_term(&core, &lint_env, *level, &ev).map_err(|e| e.to_string())?;
    let want = form_constraint(&theory, &wanted).unwrap();
    if !got.alpha_eq(&want) {
        return Err(format!("evidence has type {got}, expected {want}"));
    }
    Ok(true)
}

fn entailment_oracle() -> Outcome {
    const CASES: u32 = 10_000;
    let start = Instant::now();
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(config, rng);
    let (checked, entailed) = (Cell::new(0u32), Cell::new(0u32));
    let result = runner.run(&arb_instance(), |inst| {
        let want = oracle(&inst);
        match solver(&inst) {
            Ok(got) if got == want => {
                checked.set(checked.get() + 1);
                entailed.set(entailed.get() + u32::from(got));
                Ok(())
            }
            Ok(got) => Err(TestCaseError::fail(format!("solver {got}, oracle {want}"))),
            Err(e) => Err(TestCaseError::fail(format!("bad evidence: {e}"))),
        }
    });
    if let Err(e) = result {
        return Err(e.to_string());
    }
    let took = within(Duration::from_secs(60), start)?;
    if checked.get() < CASES {
        return Err(format!("only {} instances checked", checked.get()));
    }
    Ok(format!(
        "{} instances agree ({} entailed) in {took:?}",
        checked.get(),
        entailed.get()
    ))
}

/// Reference result by repeated multiplication, no staging involved.
fn unstaged_power(base: i64, exp: u32) -> i64 {
    (0..exp).fold(1, |acc, _| acc * base)
}

fn staged_power_run(src: &str, want: i64) -> Result<Duration, String> {
    let start = Instant::now();
    let mut rules = Vec::new();
    let mut main_started = None;
    let out = Pipeline::default()
        .run_traced(src, |k, rule, p| {
            rules.push(rule);
            if main_started.is_none() && p.decls.is_empty() {
                main_started = Some(k);
            }
        })
        .map_err(|e| format!("{e:?}"))?;
    let took = within(Duration::from_secs(1), start)?;
    if out.display() != want.to_string() {
        return Err(format!("printed {}, expected {want}", out.display()));
    }
    let sp: Vec<_> = rules
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == Rule::SpDefBeta)
        .map(|(i, _)| i as u64 + 1)
        .collect();
    match (&sp[..], main_started) {
        ([k], Some(m)) if *k < m => Ok(took),
        _ => Err(format!(
            "splice definition steps {sp:?}, main from step {main_started:?}"
        )),
    }
}

fn staged_power() -> Outcome {
    let five = staged_power_run(&read("corpus/power.sth"), unstaged_power(2, 5))?;
    let zero = staged_power_run(&fixture("power0.sth"), unstaged_power(2, 0))?;
    Ok(format!(
        "2^5 = 32 in {five:?}, 2^0 = 1 in {zero:?}, one splice definition each"
    ))
}

fn cancellation() -> Outcome {
    let mut n = 0;
    for line in fixture("cancellation.txt")
        .lines()
        .filter(|l| !l.starts_with("--"))
    {
        let (e, want) = line.split_once(";;").ok_or("malformed line")?;
        let (e, want) = (e.trim(), want.trim());
        let run = |src: String| {
            Pipeline::default()
                .run(&src)
                .map(|o| o.display())
                .map_err(|err| format!("{src}: {err:?}"))
        };
        let plain = run(format!("main = {e}"))?;
        let staged = run(format!("main = $( [| {e} |] )"))?;
        if plain != staged || plain != want {
            return Err(format!(
                "{e}: plain {plain}, staged {staged}, expected {want}"
            ));
        }
        n += 1;
    }
    if n != 10 {
        return Err(format!("{n} expressions, expected 10"));
    }
    Ok("10 expressions agree".into())
}

fn subject_reduction() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for f in ["power.sth", "c2.sth", "ts1.sth", "i2.sth", "tv1.sth"] {
        let core = Pipeline::default()
            .elaborate(&read(Path::new("corpus").join(f)))
            .map_err(|e| format!("{f}: {e:?}"))?;
        let mut m = Machine::new(core);
        for k in 1..=200 {
            match m.step().map_err(|e| format!("{f}: {e}"))? {
                Some(_) => {
                    lint_program(&m.program).map_err(|e| format!("{f} after step {k}: {e}"))?;
                    total += 1;
                }
                None => break,
            }
        }
    }
    let took = within(Duration::from_secs(30), start)?;
    Ok(format!("{total} intermediate states lint in {took:?}"))
}

fn collapse_order() -> Outcome {
    let core = Pipeline::default()
        .elaborate(&fixture("nested_splice.sth"))
        .map_err(|e| format!("{e:?}"))?;
    let spdefs: Vec<(String, Level)> = core
        .decls
        .iter()
        .filter_map(|d| match d {
            CoreDecl::SpDef { name, level, .. } => Some((name.clone(), *level)),
            _ => None,
        })
        .collect();
    let levels: Vec<_> = spdefs.iter().map(|(_, l)| *l).collect();
    if levels != [-2, -1] {
        return Err(format!("spdef levels in text order {levels:?}"));
    }
    let mut m = Machine::new(core);
    let mut ran = Vec::new();
    loop {
        let head = m.program.decls.first().map(|d| d.name().to_string());
        match m.step().map_err(|e| e.to_string())? {
            Some(Rule::SpDefBeta) => ran.push(head.unwrap_or_default()),
            Some(_) => {}
            None => break,
        }
    }
    let expected: Vec<_> = spdefs.iter().map(|(n, _)| n.clone()).collect();
    if ran != expected {
        return Err(format!("ran {ran:?}, expected {expected:?}"));
    }
    if pretty_core(&m.program).trim_end() != "main : Int = 3" {
        return Err(format!("final program `{}`", pretty_core(&m.program)));
    }
    Ok("level -2 spdef precedes level -1 and runs first".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("corpus verdicts", verdicts),
        ("golden elaboration of c1'", golden_c1prime),
        ("elaboration preserves typing", accepted_lint),
        ("entailment agrees with rule search", entailment_oracle),
        ("staged power", staged_power),
        ("splice/quote cancellation", cancellation),
        ("subject reduction", subject_reduction),
        ("collapse ordering", collapse_order),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(note) => println!("PASS {} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
