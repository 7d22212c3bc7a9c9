mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use nv_raag::nv::Element;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nv-raag"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const ZZ_Z: &str = "v a\nv b\nv c\ne a b\n";
const PAIR: &str = "v a\nv b\n";
const EDGE: &str = "# Z^2\nv a\nv b\ne a b\n";
const K3: &str = "v a\nv b\nv c\ne a b\ne b c\ne a c\n";
const CONE: &str = "v apex\nv a\nv b\ne apex a\ne apex b\n";

fn embed(dir: &Path, graph: &str, extra: &[&str]) -> (PathBuf, Output) {
    let g = write(dir, "graph.txt", graph);
    let out = dir.join("manifest");
    let mut args = vec!["embed", s(&g), "--out", s(&out)];
    args.extend_from_slice(extra);
    let o = run(&args);
    (out, o)
}

#[test]
fn embed_free_product() {
    let dir = TempDir::new().unwrap();
    let (m, o) = embed(dir.path(), ZZ_Z, &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("dimension 2\n") && text.contains("complementary-edges 2\n"));
    let elements: Vec<_> = fs::read_dir(&m)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "elem"))
        .collect();
    assert_eq!(elements.len(), 3);
    for e in elements {
        let el: Element = fs::read_to_string(e.path()).unwrap().parse().unwrap();
        assert_eq!(el.dim(), 2);
    }
}

#[test]
fn embed_edgeless_pair_and_reject_complete_graphs() {
    let dir = TempDir::new().unwrap();
    let (_, o) = embed(dir.path(), PAIR, &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("dimension 1\n"));

    let dir = TempDir::new().unwrap();
    let (_, o) = embed(dir.path(), K3, &[]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());

    let dir = TempDir::new().unwrap();
    let (_, o) = embed(dir.path(), K3, &["--abelian"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("construction abelian"));
}

#[test]
fn parse_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let (_, o) = embed(dir.path(), "v a\ne a ghost\n", &[]);
    assert_eq!(code(&o), 1);
    let (_, o) = embed(dir.path(), "vertex a\n", &[]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["check", "/nonexistent/manifest"])), 1);
    assert_ne!(code(&run(&["embed", "--bogus-flag"])), 0);
}

#[test]
fn eval_words() {
    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), PAIR, &[]);
    let o = run(&["eval", s(&m)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "pieces 1\nidentity\n");

    let out = dir.path().join("commutator.elem");
    let o = run(&["eval", s(&m), "a", "b", "a^-1", "b^-1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("nontrivial\n"));
    let e: Element = fs::read_to_string(&out).unwrap().parse().unwrap();
    assert!(!e.is_identity());

    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), EDGE, &["--abelian"]);
    let o = run(&["eval", s(&m), "a", "b", "a^-1", "b^-1"]);
    assert!(stdout(&o).ends_with("\nidentity\n"));

    let o = run(&["eval", s(&m), "a", "zzz"]);
    assert_eq!(code(&o), 1);
    let o = run(&["eval", s(&m), "a", "b", "a", "--max-pieces", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("2"));
}

#[test]
fn check_reports_no_counterexamples() {
    for (graph, extra) in [(ZZ_Z, vec![]), (EDGE, vec!["--abelian"])] {
        let dir = TempDir::new().unwrap();
        let (m, o) = embed(dir.path(), graph, &extra);
        assert_eq!(code(&o), 0);
        let o = run(&["check", s(&m), "--max-len", "6"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(stdout(&o).contains("counterexamples 0\n"));
    }
}

#[test]
fn check_catches_a_corrupted_element() {
    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), ZZ_Z, &[]);
    fs::write(m.join("gen_3.elem"), Element::identity(2).to_string()).unwrap();
    let o = run(&["check", s(&m), "--max-len", "2"]);
    assert_eq!(code(&o), 3);
    let text = stdout(&o);
    assert!(
        text.contains("counterexample c expected=non-identity"),
        "{text}"
    );
    assert_eq!(code(&run(&["check", s(&m), "--max-len", "0"])), 1);
}

#[test]
fn pingpong_certificates() {
    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), ZZ_Z, &[]);
    let o = run(&["verify-pingpong", s(&m)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("certificate valid\n"));
    for c in [
        "condition-1 pass",
        "condition-2 pass",
        "condition-3 pass",
        "condition-4 pass",
    ] {
        assert!(text.contains(c), "{text}");
    }

    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), CONE, &[]);
    let o = run(&["verify-pingpong", s(&m)]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("check"));
}

#[test]
fn pingpong_failure_exits_three() {
    let dir = TempDir::new().unwrap();
    let (m, _) = embed(dir.path(), ZZ_Z, &[]);
    let slices = fs::read_to_string(m.join("slices.txt")).unwrap();
    // exchange the plus and minus halves of the first generator's slice
    let swapped: String = slices
        .lines()
        .map(|l| {
            let mut toks: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            if toks[0] == "a" {
                let plus = toks.iter().position(|t| t.starts_with("plus=")).unwrap();
                let minus = toks.iter().position(|t| t.starts_with("minus=")).unwrap();
                let (p, q) = (toks[plus][5..].to_string(), toks[minus][6..].to_string());
                toks[plus] = format!("plus={q}");
                toks[minus] = format!("minus={p}");
            }
            toks.join(" ") + "\n"
        })
        .collect();
    fs::write(m.join("slices.txt"), swapped).unwrap();
    let o = run(&["verify-pingpong", s(&m)]);
    assert_eq!(
        code(&o),
        3,
        "{}{}",
        stdout(&o),
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(
        text.contains("condition-1 fail") && text.contains("condition-1-witness"),
        "{text}"
    );
}

#[test]
fn render_figure_and_reject_other_dimensions() {
    let dir = TempDir::new().unwrap();
    let h = dir.path().join("h.elem");
    let o = run(&[
        "slice-map",
        "--axes",
        "1,2",
        "--slice",
        "[{0,1},{0,1}]",
        "--out",
        s(&h),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("pieces 8\n"));
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert_eq!(code(&run(&["render", s(&h), "--out", s(&a)])), 0);
    assert_eq!(code(&run(&["render", s(&h), "--out", s(&b)])), 0);
    let svg = fs::read(&a).unwrap();
    assert_eq!(svg, fs::read(&b).unwrap());
    let svg = String::from_utf8(svg).unwrap();
    assert_eq!(svg.matches(r#"class="label""#).count(), 16);
    for k in 0..8 {
        assert_eq!(svg.matches(&format!(">{k}</text>")).count(), 2);
    }

    let one = write(dir.path(), "one.elem", &Element::identity(1).to_string());
    assert_eq!(code(&run(&["render", s(&one), "--out", s(&a)])), 5);
    let three = write(dir.path(), "three.elem", &Element::identity(3).to_string());
    assert_eq!(code(&run(&["render", s(&three), "--out", s(&a)])), 5);
}

#[test]
fn random_elements_round_trip_before_rendering() {
    let dir = TempDir::new().unwrap();
    let mut r = rng(41);
    for k in 0..5 {
        let e = random_element(&mut r, 2, 9);
        let path = write(dir.path(), &format!("e{k}.elem"), &e.to_string());
        let back: Element = fs::read_to_string(&path).unwrap().parse().unwrap();
        assert_eq!(back, e);
        let svg = dir.path().join(format!("e{k}.svg"));
        assert_eq!(code(&run(&["render", s(&path), "--out", s(&svg)])), 0);
        let text = fs::read_to_string(&svg).unwrap();
        assert_eq!(text, nv_raag::svg::render_element(&e).unwrap());
        assert_eq!(text.matches(r#"class="label""#).count(), 2 * e.len());
    }
}

#[test]
fn slice_map_with_explicit_division() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("h.elem");
    let o = run(&[
        "slice-map",
        "--axes",
        "1",
        "--slice",
        "[{0,1},{0,0}]",
        "--plus",
        "[{1,2},{0,0}]",
        "--minus",
        "[{0,2},{0,0}]",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&[
        "slice-map",
        "--axes",
        "1",
        "--slice",
        "[{0,1},{0,0}]",
        "--plus",
        "[{1,2},{0,0}]",
        "--minus",
        "[{1,2},{0,0}]",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
    let o = run(&[
        "slice-map",
        "--axes",
        "0",
        "--slice",
        "[{0,1}]",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn outputs_are_deterministic() {
    let (d1, d2) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let (m1, o1) = embed(d1.path(), CONE, &[]);
    let (m2, o2) = embed(d2.path(), CONE, &[]);
    assert_eq!(o1.stdout, o2.stdout);
    for name in ["manifest.txt", "gen_1.elem", "gen_2.elem", "gen_3.elem"] {
        assert_eq!(
            fs::read(m1.join(name)).unwrap(),
            fs::read(m2.join(name)).unwrap(),
            "{name}"
        );
    }
    let c1 = run(&["check", s(&m1), "--max-len", "4"]);
    let c2 = run(&["check", s(&m2), "--max-len", "4"]);
    assert_eq!(c1.stdout, c2.stdout);
    assert_eq!(code(&c1), 0);
}
