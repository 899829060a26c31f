use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn kscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kscope"))
        .args(args)
        .env("KSCOPE_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn assert_valid_svg(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    let doc =
        roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(doc.root_element().tag_name().name(), "svg");
}

#[test]
fn gallery_list_names_every_entry() {
    let o = kscope(&["gallery", "list"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for (name, _) in kscope::gallery::NAMES {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn gallery_build_writes_a_readable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kscope(&[
        "gallery",
        "build",
        "integration",
        "--out",
        out,
        "--beta",
        "2.0",
        "--n",
        "10",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mtx = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "mtx"))
        .expect("a Matrix Market file");
    let a = kscope::io::read_matrix(&mtx).unwrap();
    assert_eq!(
        a,
        kscope::gallery::integration_matrix(2.0, 10).unwrap().matrix
    );
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&kscope(&["gallery", "build", "no-such-matrix"])), 1);
    assert_eq!(
        code(&kscope(&[
            "bounds",
            "--gallery",
            "scalar",
            "--param",
            "zeta=1"
        ])),
        1
    );
    assert_eq!(
        code(&kscope(&[
            "bounds",
            "--gallery",
            "scalar",
            "--box",
            "1,0,0,1"
        ])),
        1
    );
    assert_eq!(code(&kscope(&["frobnicate"])), 1);
}

#[test]
fn non_finite_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.mtx");
    fs::write(
        &path,
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 nan\n",
    )
    .unwrap();
    let o = kscope(&[
        "sets",
        "--matrix",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn properties_suite_passes() {
    let o = kscope(&["verify", "--suite", "properties", "--trials", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn bounds_are_reproducible_and_plots_parse() {
    let run = |dir: &Path| {
        let o = kscope(&[
            "bounds",
            "--gallery",
            "example-d",
            "--param",
            "n=8",
            "--kmax",
            "6",
            "--grid",
            "40",
            "--seed",
            "3",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path());
    run(b.path());
    let mut csvs = 0;
    for entry in fs::read_dir(a.path()).unwrap() {
        let p = entry.unwrap().path();
        let ext = p.extension().and_then(|e| e.to_str()).unwrap_or("");
        if ext == "csv" {
            csvs += 1;
            let twin = b.path().join(p.file_name().unwrap());
            assert_eq!(
                fs::read(&p).unwrap(),
                fs::read(twin).unwrap(),
                "{}",
                p.display()
            );
        }
        if ext == "svg" {
            assert_valid_svg(&p);
            // every plot has a data twin
            let stem = p.file_stem().unwrap().to_str().unwrap();
            assert!(a.path().join(format!("{stem}.csv")).exists(), "{stem}");
        }
    }
    assert!(csvs >= 2);
}

#[test]
fn sets_and_adaptive_write_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = kscope(&[
        "sets",
        "--gallery",
        "jordan2",
        "--eps",
        "0.1,0.01",
        "--grid",
        "40",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_valid_svg(&dir.path().join("jordan2_sets.svg"));
    assert!(dir.path().join("jordan2_fov.csv").exists());
    let o = kscope(&[
        "adaptive",
        "--gallery",
        "integration",
        "--param",
        "n=32",
        "--at",
        "4,8",
        "--eps",
        "0.01",
        "--grid",
        "30",
        "--kmax",
        "10",
        "--out",
        out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for k in [4, 8] {
        assert_valid_svg(&dir.path().join(format!("integration_adaptive_k{k}.svg")));
        assert!(dir
            .path()
            .join(format!("integration_adaptive_k{k}.csv"))
            .exists());
    }
}
