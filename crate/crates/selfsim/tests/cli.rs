use std::path::Path;
use std::process::{Command as Process, Output};

use num_bigint::BigInt;
use proptest::prelude::*;
use selfsim::ast::{BaseAst, Command, ContextAst, FactorAst, Located, Script, SeriesAst, Statement, WordAst};
use selfsim::formats::portrait_from_json;
use selfsim::{parse, print, run, Options};
use serde_json::Value;

fn selfsim(args: &[&str], dir: &Path) -> Output {
    Process::new(env!("CARGO_BIN_EXE_selfsim")).args(args).current_dir(dir).output().expect("binary runs")
}

fn run_text(text: &str, args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.ss"), text).unwrap();
    let mut all = args.to_vec();
    all.extend(["run", "s.ss"]);
    selfsim(&all, dir.path())
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn run_lib(text: &str) -> Vec<Value> {
    let mut buf = Vec::new();
    run(&parse(text).unwrap(), &Options::default(), &mut buf).unwrap();
    String::from_utf8(buf).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

// ---- parse and print ----

fn series() -> impl Strategy<Value = SeriesAst> {
    prop::collection::vec(-5i64..6, 0..4).prop_map(|mut c| {
        while c.last() == Some(&0) {
            c.pop();
        }
        SeriesAst { coeffs: c.into_iter().map(BigInt::from).collect() }
    })
}

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "beta'", "g12", "x1", "K_2"]).prop_map(String::from)
}

fn cycles() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(1u32..6, 1..4), 0..3)
}

fn word() -> impl Strategy<Value = WordAst> {
    let leaf = (name(), prop::option::of(series()), 0usize..3, any::<bool>())
        .prop_map(|(n, exp, shift, inverse)| FactorAst { base: BaseAst::Name(n), exp, shift, inverse });
    let factor =
        leaf.prop_recursive(3, 16, 3, |inner| {
            let w = prop::collection::vec(inner, 0..3).prop_map(|factors| WordAst { factors });
            let base = prop_oneof![
                cycles().prop_map(BaseAst::Rooted),
                prop::collection::vec(w.clone(), 2..4).prop_map(BaseAst::Tuple),
                w.prop_map(BaseAst::Group),
            ];
            (base, prop::option::of(series()), 0usize..3, any::<bool>())
                .prop_map(|(base, exp, shift, inverse)| FactorAst { base, exp, shift, inverse })
        });
    prop::collection::vec(factor, 0..4).prop_map(|factors| WordAst { factors })
}

fn statement() -> impl Strategy<Value = Statement> {
    let depth = prop::option::of(1usize..20);
    prop_oneof![
        (prop::option::of(2u32..9), prop::option::of(1usize..20), prop::option::of(1usize..20), depth.clone())
            .prop_map(|(m, k, d, l)| Statement::Context(ContextAst { m, k, d, l })),
        (name(), prop::collection::vec(word(), 1..4), cycles()).prop_map(|(name, entries, cycles)| Statement::Gen {
            name,
            entries,
            cycles
        }),
        (name(), word()).prop_map(|(name, word)| Statement::Let { name, word }),
        (word(), depth.clone()).prop_map(|(word, depth)| Statement::Command(Command::Portrait { word, depth })),
        (word(), prop::collection::vec(1u32..5, 0..5))
            .prop_map(|(word, path)| Statement::Command(Command::Act { word, path })),
        (word(), prop::option::of(1u64..100)).prop_map(|(word, cap)| Statement::Command(Command::Order { word, cap })),
        word().prop_map(|word| Statement::Command(Command::Zeta { word })),
        prop::collection::vec(word(), 1..3).prop_map(|words| Statement::Command(Command::Closure { words })),
        prop::collection::vec(word(), 1..3).prop_map(|words| Statement::Command(Command::Present { words })),
        (series(), series()).prop_map(|(value, r)| Statement::Command(Command::Reduce { value, r })),
        (name(), 1usize..4).prop_map(|(name, j)| Statement::Command(Command::Conjugate { name, j })),
        "[a-z0-9_./]{1,12}".prop_map(|file| Statement::Command(Command::Represent { file })),
        "[a-z][a-z0-9-]{0,10}".prop_map(|suite| Statement::Command(Command::Verify { suite })),
        (word(), word(), depth).prop_map(|(lhs, rhs, depth)| Statement::Command(Command::Assert { lhs, rhs, depth })),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(statements in prop::collection::vec(statement(), 0..8)) {
        let script = Script {
            statements: statements.into_iter().enumerate().map(|(i, statement)| Located { line: i + 1, statement }).collect(),
        };
        let text = print(&script);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back.statements(), script.statements());
        prop_assert_eq!(print(&back), text);
    }
}

#[test]
fn parse_errors_point_at_the_token() {
    let e = parse("gen a = (e, a) (1 2)\nlet w = a^{1 + }").unwrap_err();
    assert_eq!((e.line, e.column), (2, 16));
    let e = parse("context m=2\nportrait a L=").unwrap_err();
    assert_eq!((e.line, e.column), (2, 14));
    let e = parse("act a 1 2").unwrap_err();
    assert_eq!(e.line, 1);
    assert!(e.message.contains("at"));
}

#[test]
fn documented_generators_parse() {
    for text in ["gen a = (e, a) (1 2)", "gen a = (e, e, e, a^{2}) (1 2 3 4)", "gen b = (e, b^{1+x}) (1 2)"] {
        let s = parse(text).unwrap();
        assert!(matches!(s.statements[0].statement, Statement::Gen { .. }), "{text}");
    }
}

// ---- commands ----

#[test]
fn reduce_six_by_two_minus_x() {
    let out = run_lib("reduce \"6\" r=\"2-x\"");
    assert_eq!(out[0]["result"], "x + x^2");
    assert_eq!(out[0]["digits"].as_array().unwrap()[..3], [0, 1, 1]);
}

/// Label at a vertex of the binary adding machine: a carry reaches the vertex
/// exactly when every letter above it is 2, and then its label is the swap.
fn carry_label(path: &[u32]) -> Vec<u32> {
    if path.iter().all(|&y| y == 2) {
        vec![2, 1]
    } else {
        vec![1, 2]
    }
}

#[test]
fn adding_machine_portrait_json() {
    let out = run_lib("gen a = (e, a) (1 2)\nportrait a L=3");
    let mut nodes = Vec::new();
    let mut level: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..3 {
        nodes.extend(level.iter().map(|p| carry_label(p)));
        level = level.iter().flat_map(|p| [1, 2].map(|y| [p.clone(), vec![y]].concat())).collect();
    }
    let p = &out[0]["portrait"];
    assert_eq!(p["m"], 2);
    assert_eq!(p["L"], 3);
    assert_eq!(p["nodes"], serde_json::to_value(&nodes).unwrap());
    assert_eq!(p.to_string(), r#"{"L":3,"m":2,"nodes":[[2,1],[1,2],[2,1],[1,2],[1,2],[1,2],[2,1]]}"#);
}

#[test]
fn act_order_zeta_and_assert() {
    let out = run_lib(
        "context m=3 L=6\ngen a = (e, e, a) (1 2 3)\nact a at 3 3 1\nzeta a\nassert a^{3} = a@1\norder perm(1 2) cap=10",
    );
    assert_eq!(out[0]["image"], serde_json::json!([1, 1, 2]));
    assert_eq!(out[0]["state"], "e");
    assert_eq!(out[1]["zeta"], 1);
    assert_eq!(out[2]["pass"], true);
    assert_eq!(out[3]["order"], 2);
}

#[test]
fn closure_and_presentation_of_a_gap_two_machine() {
    let out = run_lib("gen a = (e, a@1) (1 2)\nclosure a\npresent a, a@1");
    assert_eq!(out[0]["report"]["generators"].as_array().unwrap().len(), 2);
    assert_eq!(out[0]["report"]["abelian"], true);
    let p = &out[1]["presentation"];
    assert!(p["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(p["relator"]["j"], 2);
}

#[test]
fn conjugate_example_three() {
    let out = run_lib("context L=10\ngen b = (e, b^{1+x}) (1 2)\nconjugate b j=1");
    assert_eq!(out[0]["verified"], true);
    assert_eq!(out[0]["stages"][2]["exponent"], "3 + x");
}

#[test]
fn lets_expand_and_pending_generators_resolve() {
    let out = run_lib("gen a = (e, b) (1 2)\nlet w = a a\ngen b = (e, a) (1 2)\nassert w = a^{2}\nassert a = b");
    assert_eq!(out[0]["pass"], true);
    assert_eq!(out[1]["pass"], true);
}

// ---- binary ----

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run_text("gen a = (e, a) (1 2)\nportrait a", &[])), 0);
    assert_eq!(code(&run_text("gen a = (e, a) (1 2)\nassert a = e", &[])), 1);
    assert_eq!(code(&run_text("gen a = (e, a (1 2)", &[])), 2);
    assert_eq!(code(&run_text("portrait nothing", &[])), 2);
    assert_eq!(code(&run_text("gen a = (e, e, a) (1 2)", &[])), 2);
    assert_eq!(code(&run_text("portrait a\ngen a = (e, a) (1 2)", &[])), 2);
    assert_eq!(code(&run_text("context K=4 L=8\ngen a = (e, a) (1 2)", &[])), 3);
    assert_eq!(code(&run_text("zeta perm()", &[])), 4);
    assert_eq!(code(&run_text("portrait perm(1 2) L=20", &[])), 4);
    assert_eq!(code(&run_text("represent missing.json", &[])), 3);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&selfsim(&["verify", "example2"], dir.path())), 0);
    assert_eq!(code(&selfsim(&["verify", "no-such-suite"], dir.path())), 2);
    assert_eq!(code(&selfsim(&["run", "absent.ss"], dir.path())), 3);
}

#[test]
fn failed_assert_still_runs_the_rest() {
    let out = run_text("gen a = (e, a) (1 2)\nassert a = e\nzeta a", &[]);
    assert_eq!(code(&out), 1);
    assert_eq!(records(&out).len(), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn output_is_deterministic() {
    let text =
        "gen a = (e, a^{1 + x}) (1 2)\nclosure a\npresent a\nportrait a^{3 - x} L=5\nconjugate a j=1\nverify example1";
    let first = run_text(text, &[]);
    let second = run_text(text, &[]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn flags_override_the_script_context() {
    let out = run_text("context m=2 L=8\ngen a = (e, a) (1 2)\nportrait a", &["--L", "4"]);
    assert_eq!(records(&out)[0]["portrait"]["L"], 4);
    let out = run_text("gen a = (e, e, a) (1 2 3)\nportrait a L=2", &["--m", "3"]);
    assert_eq!(records(&out)[0]["portrait"]["nodes"].as_array().unwrap().len(), 4);
}

#[test]
fn pretty_and_dot_output() {
    let out = run_text("gen a = (e, a) (1 2)\nportrait a L=2", &["--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("level 1: () (1 2)"), "{text}");
    let out = run_text("gen a = (e, a) (1 2)\nportrait a L=2", &["--dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph") && text.contains("v0 -> v2 [label=\"2\"]"), "{text}");
}

#[test]
fn cache_size_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.ss"), "gen a = (e, a^{3}) (1 2)\nportrait a").unwrap();
    let out = Process::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(["run", "s.ss"])
        .env("SELFSIM_CACHE_SIZE", "3")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn represent_writes_a_script_that_runs() {
    let dir = tempfile::tempdir().unwrap();
    let triple = r#"{"free_rank": 1, "torsion": [], "H_gens": [[2]], "f_images": [[1]], "transversal": [[0], [1]]}"#;
    std::fs::write(dir.path().join("halving.json"), triple).unwrap();
    std::fs::write(dir.path().join("s.ss"), "represent halving.json").unwrap();
    let out = selfsim(&["run", "s.ss"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rec = &records(&out)[0];
    assert_eq!(rec["closed"], true);
    assert_eq!(rec["index"], 2);
    assert!(rec["kernel_witnesses"].as_array().unwrap().is_empty());

    // With the transversal {0, 1} the generator 1 of Z is the binary adding machine.
    let seed = portrait_from_json(&rec["seeds"][0]["portrait"]).unwrap();
    let odometer = run_lib("gen a = (e, a) (1 2)\nportrait a");
    assert_eq!(Some(seed), portrait_from_json(&odometer[0]["portrait"]));

    let script = rec["script"].as_str().unwrap();
    let name = rec["seeds"][0]["name"].as_str().unwrap();
    let replay = run_lib(&format!("{script}portrait {name}"));
    assert_eq!(replay[0]["portrait"], rec["seeds"][0]["portrait"]);
}

#[test]
fn represent_rejects_an_infinite_index() {
    let dir = tempfile::tempdir().unwrap();
    let triple = r#"{"free_rank": 2, "H_gens": [[1, 0]], "f_images": [[0, 1]], "transversal": [[0, 0]]}"#;
    std::fs::write(dir.path().join("t.json"), triple).unwrap();
    std::fs::write(dir.path().join("s.ss"), "represent t.json").unwrap();
    assert_eq!(code(&selfsim(&["run", "s.ss"], dir.path())), 4);
}
