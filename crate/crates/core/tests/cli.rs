use std::process::Command;

use engelkit::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["engelkit"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn documented_examples() {
    assert_eq!(call(&["milnor", "trivial", "--n", "2", "[m1, m1^m2]"]).0, 0);
    assert_eq!(
        call(&["milnor", "trivial", "--n", "2", "[m1, m1^m2]"])
            .1
            .trim(),
        "trivial"
    );
    assert_eq!(
        call(&["link", "classify", "wh(+)"]).1.trim(),
        "h-trivial-plus"
    );
    assert_eq!(call(&["word", "[x1,x2]"]).1.trim(), "x1*x2*x1^-1*x2^-1");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["milnor", "trivial", "[[m1,m2],[m3,m4]]"]).0, 1);
    assert_eq!(call(&["milnor", "equal", "x*y", "y*x"]).0, 1);
    assert_eq!(call(&["wndl", "--gamma", "[x,y,y,w]"]).0, 0);
    assert_eq!(
        call(&["wndl", "--gamma", "[[m1,m2],[m3,m4]]", "--n", "4"]).0,
        1
    );
    let (code, _, err) = call(&["link", "build", "bing(hopf,"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error"));
    assert_eq!(call(&["link", "mu", "hopf", "--index", "1,1"]).0, 2);
    assert_eq!(call(&["no-such-command"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["decompose", "--gamma", "[m1,m2]"]).0, 2);
}

#[test]
fn subcommands_produce_results() {
    let (code, out, _) = call(&["link", "mu", "bing(hopf,1)", "--index", "1,2,3"]);
    assert_eq!(code, 0);
    assert!(out.trim() == "1" || out.trim() == "-1");
    let (code, out, _) = call(&["decompose", "--gamma", "[[m1,m2],[m3,m4]]"]);
    assert_eq!(code, 0);
    assert!(out.contains("verified=true"));
    let (code, out, _) = call(&["engel", "certify", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("certified 16 targets"));
    assert_eq!(call(&["engel", "check", "[x1,x2,x2]"]).0, 0);
    assert_eq!(call(&["engel", "check", "[x1,x2,x3]"]).0, 1);
    assert_eq!(
        call(&["magnus", "[x1,x2]", "--degree", "2"]).1.trim(),
        "1 + X1X2 - X2X1"
    );
}

#[test]
fn slide_script_file() {
    let dir = std::env::temp_dir().join(format!("engelkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pattern.txt");
    std::fs::write(
        &path,
        "engel [x, y*z, y*z, w]\nreport\nslide y over z band 1 sign -\nreport\n",
    )
    .unwrap();
    let (code, out, _) = call(&["slide", "--script", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("holds true"));
    assert!(out.contains("split unknots: y"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_is_versioned_and_deterministic() {
    let cases: &[&[&str]] = &[
        &["--json", "link", "build", "bing(wh(+),1)"],
        &["--json", "magnus", "[x,y]*z", "--degree", "3"],
        &["--json", "decompose", "--gamma", "[[m1,m2],[m3,m4]]"],
        &["--json", "engel", "certify", "--n", "3"],
        &["--json", "link", "classify", "par(wh(+),1)"],
    ];
    for args in cases {
        let (c1, a, _) = call(args);
        let (c2, b, _) = call(args);
        assert_eq!((c1, &a), (c2, &b));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["schema"], "engelkit/1");
    }
    let (_, out, _) = call(&["--json", "link", "mu", "bing(hopf,1)", "--index", "1,2,3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["value"].is_string());
}

#[test]
fn binary_exit_codes_and_depth_override() {
    let bin = env!("CARGO_BIN_EXE_engelkit");
    let st = Command::new(bin)
        .args(["milnor", "trivial", "--n", "2", "[m1, m1^m2]"])
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(0));
    let st = Command::new(bin)
        .args(["link", "classify"])
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
    let out = Command::new(bin)
        .args(["engel", "certify", "--n", "3"])
        .env("ENGELKIT_DEPTH", "1")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("depth=1"));
    let st = Command::new(bin)
        .args(["engel", "certify", "--n", "2"])
        .env("ENGELKIT_DEPTH", "zero")
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
}
