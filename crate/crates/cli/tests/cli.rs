use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn lexiscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexiscan"))
        .args(args)
        .env_remove("LEXISCAN_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

struct Fixture {
    dir: TempDir,
    lexicon: PathBuf,
    index: PathBuf,
}

fn d3() -> Fixture {
    let dir = TempDir::new().unwrap();
    let lexicon = dir.path().join("d3.txt");
    std::fs::write(&lexicon, "ear\nlead\nreal\n").unwrap();
    let index = dir.path().join("d3.idx");
    let o = lexiscan(&["build", "--lexicon", p(&lexicon), "--out", p(&index)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    Fixture { dir, lexicon, index }
}

#[test]
fn build_is_deterministic() {
    let f = d3();
    let again = f.dir.path().join("again.idx");
    assert!(lexiscan(&["build", "--lexicon", p(&f.lexicon), "--out", p(&again)])
        .status
        .success());
    let a = std::fs::read(&f.index).unwrap();
    assert_eq!(&a[..4], b"SCDG");
    assert_eq!(a, std::fs::read(&again).unwrap());
}

#[test]
fn build_missing_lexicon() {
    let dir = TempDir::new().unwrap();
    let o = lexiscan(&[
        "build",
        "--lexicon",
        p(&dir.path().join("nope")),
        "--out",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn query_dread() {
    let f = d3();
    let o = lexiscan(&["query", "--index", p(&f.index), "--pattern", "dread", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lead\t2\nreal\t2\n");
    let o = lexiscan(&["query", "--index", p(&f.index), "--pattern", "ear", "--bound", "0"]);
    assert_eq!(stdout(&o), "ear\t0\n");
    let o = lexiscan(&["query", "--index", p(&f.index), "--pattern", "zzzzzz", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "");
}

#[test]
fn query_methods_agree() {
    let f = d3();
    for pat in ["dread", "ea", "rael", "x", ""] {
        for b in ["0", "1", "2", "3"] {
            for ops in ["lev", "lev-transpose", "lev-merge-split"] {
                let run = |extra: &[&str]| {
                    let mut args = vec![
                        "query",
                        "--index",
                        p(&f.index),
                        "--pattern",
                        pat,
                        "--bound",
                        b,
                        "--ops",
                        ops,
                    ];
                    args.extend_from_slice(extra);
                    let o = lexiscan(&args);
                    assert!(o.status.success());
                    stdout(&o)
                };
                let want = run(&["--method", "brute"]);
                assert_eq!(run(&[]), want, "{pat} {b} {ops}");
                assert_eq!(run(&["--method", "fb"]), want);
                assert_eq!(run(&["--method", "oflazer"]), want);
                assert_eq!(run(&["--no-prune"]), want);
                assert_eq!(run(&["--bottom-up"]), want);
            }
        }
    }
}

#[test]
fn query_substrings_and_ops_file() {
    let f = d3();
    let o = lexiscan(&[
        "query",
        "--index",
        p(&f.index),
        "--pattern",
        "dread",
        "--bound",
        "2",
        "--include-substrings",
    ]);
    assert_eq!(stdout(&o), "lead\t2\nreal\t2\n~ead\t2\n~lead\t2\n~rea\t2\n~real\t2\n");
    let ops = f.dir.path().join("ops.tsv");
    std::fs::write(&ops, "classes: substitute insert delete transpose\n").unwrap();
    let o = lexiscan(&[
        "query",
        "--index",
        p(&f.index),
        "--pattern",
        "laed",
        "--bound",
        "1",
        "--ops-file",
        p(&ops),
    ]);
    assert_eq!(stdout(&o), "lead\t1\n");
}

#[test]
fn query_usage_errors() {
    let f = d3();
    let base = ["query", "--index", p(&f.index), "--pattern", "ear", "--bound"];
    let with = |rest: &[&str]| {
        let mut a = base.to_vec();
        a.extend_from_slice(rest);
        lexiscan(&a).status.code()
    };
    assert_eq!(with(&["-1"]), Some(2));
    assert_eq!(with(&["1", "--ops", "nope"]), Some(2));
    assert_eq!(with(&["1", "--method", "fb", "--bottom-up"]), Some(2));
    assert_eq!(with(&["1", "--method", "ideal"]), Some(2));
    let junk = f.dir.path().join("junk.idx");
    std::fs::write(&junk, b"not an index").unwrap();
    let o = lexiscan(&["query", "--index", p(&junk), "--pattern", "ear", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_d3() {
    let f = d3();
    for ops in ["lev", "lev-transpose", "lev-merge-split"] {
        let o = lexiscan(&["verify", "--lexicon", p(&f.lexicon), "--ops", ops]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("pass\t"));
    }
}

#[test]
fn generators_are_seeded() {
    let dir = TempDir::new().unwrap();
    let gen = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let o = lexiscan(&[
            "gen-lexicon",
            "--entries",
            "300",
            "--mean-len",
            "8",
            "--alphabet",
            "5",
            "--seed",
            seed,
            "--output",
            p(&out),
        ]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    let a = gen("a", "4");
    assert_eq!(a, gen("b", "4"));
    assert_ne!(a, gen("c", "5"));

    let env = Command::new(env!("CARGO_BIN_EXE_lexiscan"))
        .args([
            "gen-lexicon",
            "--entries",
            "300",
            "--mean-len",
            "8",
            "--alphabet",
            "5",
            "--seed",
            "5",
        ])
        .env("LEXISCAN_SEED", "4")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a);

    let lex = dir.path().join("a");
    let q = |seed: &str| {
        stdout(&lexiscan(&[
            "gen-queries",
            "--lexicon",
            p(&lex),
            "--bound",
            "2",
            "--count",
            "20",
            "--seed",
            seed,
        ]))
    };
    let first = q("9");
    assert_eq!(first, q("9"));
    assert_eq!(first.lines().count(), 20);
    assert!(first.lines().all(|l| l.chars().count() >= 6));
}

#[test]
fn gen_queries_needs_long_entries() {
    let f = d3();
    let o = lexiscan(&["gen-queries", "--lexicon", p(&f.lexicon), "--bound", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("longest has 4"));
}

#[test]
fn bench_report_and_coverage() {
    let f = d3();
    let queries = f.dir.path().join("q.txt");
    std::fs::write(&queries, "dread\nlaed\nrea\n").unwrap();
    let out = f.dir.path().join("report.csv");
    let o = lexiscan(&[
        "bench",
        "--lexicon",
        p(&f.lexicon),
        "--queries",
        p(&queries),
        "--bound",
        "2",
        "--repeat",
        "1",
        "--methods",
        "ideal,new,fb,oflazer,brute",
        "--output",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("method,bound,queries,mean_us,median_us,total_answers,checksum,ratio_vs_ideal")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][0], "ideal");
    assert_eq!(rows[0][7], "1.000");
    assert!(rows.iter().all(|r| r[6] == rows[0][6] && r[5] == rows[0][5]));

    let cover = f.dir.path().join("cover.txt");
    std::fs::write(&cover, "dread\n").unwrap();
    let o = lexiscan(&[
        "bench",
        "--lexicon",
        p(&f.lexicon),
        "--queries",
        p(&queries),
        "--bound",
        "2",
        "--cover",
        p(&cover),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn dump_lists_states() {
    let f = d3();
    let o = lexiscan(&["dump", "--index", p(&f.index)]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("states\t9\n"));
    let mut reps: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("state\t"))
        .map(|l| l.split('\t').nth(2).unwrap())
        .collect();
    reps.sort();
    assert_eq!(reps, ["", "#", "#ear$", "#lead$", "#real$", "$", "ea", "l", "r"]);
    assert!(text.lines().any(|l| l.starts_with("right\t")));
    assert!(text.lines().any(|l| l.starts_with("left\t")));

    let o = lexiscan(&["dump", "--index", p(&f.index), "--dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph "));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    assert!(dot.contains("style=dashed"));
    assert_eq!(
        dot.lines()
            .filter(|l| l.contains("[label=") && !l.contains("->"))
            .count(),
        9
    );

    let empty = lexiscan(&["dump", "--index", ""]);
    assert_eq!(empty.status.code(), Some(2));
}
