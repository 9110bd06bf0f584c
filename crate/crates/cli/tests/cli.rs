use std::path::PathBuf;
use std::process::{Command, Output};

fn inertia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inertia"))
        .args(args)
        .output()
        .expect("run inertia")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hh_z2_matches_two_copies_of_bz2() {
    let o = inertia(&["hh", "Z2", "--ring", "Z", "--cap", "6", "--format", "tsv"]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    let groups: Vec<&str> = rows.iter().map(|r| r.rsplit('\t').next().unwrap()).collect();
    assert_eq!(groups, ["Z^2", "(Z/2)^2", "0", "(Z/2)^2", "0", "(Z/2)^2"]);
}

#[test]
fn hp_z3() {
    let o = inertia(&["hp", "Z3", "--format", "tsv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "degree\trank\tread from\tHH sum\n0\t3\tHC_0\t3\n1\t0\tHC_1\t0\n"
    );
    let o = inertia(&["hp", "Z3", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_s3_passes() {
    let o = inertia(&["verify", "S3", "--cap", "4"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text
        .lines()
        .skip(2)
        .filter(|l| !l.starts_with("all"))
        .all(|l| l.contains(" pass ")));
}

#[test]
fn user_group_matches_builtin() {
    let file = data("z2.inertia");
    let a = inertia(&["--input", &file, "homology", "C2", "--format", "tsv"]);
    let b = inertia(&["homology", "Z2", "--format", "tsv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cr_against() {
    let file = data("z2.inertia");
    let o = inertia(&["--input", &file, "cr", "pt2", "--against", "C2", "--cap", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("even    2      2   match"));
    let o = inertia(&["--input", &file, "cr", "pt2", "--against", "Z3", "--cap", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn mixed_document() {
    let file = data("mixed.inertia");
    let o = inertia(&["--input", &file, "validate", "--format", "tsv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "name\tkind\tobjects\tmorphisms\tsectors\tstatus\n\
         C3\tgroup\t1\t3\t-\tok\n\
         flip\taction\t2\t4\t-\tok\n\
         pair\tgroupoid\t2\t4\t-\tok\n\
         half\tsectors\t-\t-\t2\tok\n"
    );
    let o = inertia(&["--input", &file, "hc", "pair"]);
    assert!(stdout(&o).starts_with("HC_*(cyclic nerve pair)  ring Q  cap 3  exact through degree 2\n"));
    let o = inertia(&["--input", &file, "cr", "half", "--format", "tsv"]);
    assert_eq!(stdout(&o), "degree\trank\n0\t1\n1\t1\n2\t1\n");
    let o = inertia(&["--input", &file, "cr", "half", "--against", "C3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = inertia(&["--input", &file, "inertia", "flip", "--format", "tsv"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn errors_exit_two_with_location() {
    let dir = std::env::temp_dir().join(format!("inertia-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.inertia");
    std::fs::write(
        &bad,
        "group A { elements e; table e }\naction x { group B; points p }\n",
    )
    .unwrap();
    let o = inertia(&["--input", bad.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("2:18: unresolved reference"), "{err}");
    let o = inertia(&["hh", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fuzz_seeds_parse_or_report_a_location() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fuzz", "corpus", "parse_input"]
        .iter()
        .collect();
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        if let Err(e) = inertia_cli::input::parse_input(&text) {
            assert!(e.line >= 1 && e.line <= text.lines().count().max(1) && e.column >= 1);
        }
        seen += 1;
    }
    assert!(seen >= 3);
}
