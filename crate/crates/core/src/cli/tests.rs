use super::*;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hurwitz").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn count_prints_one_integer() {
    let (code, out, _) = call(&["count", "--variant", "monotone", "--genus", "0", "--lambda", "1,1,1", "--mu", "1,1,1"]);
    assert_eq!((code, out.as_str()), (0, "8\n"));
    let (code, out, _) = call(&[
        "count", "--variant", "real-monotone", "--lambda", "1,1,1", "--mu", "1,1,1", "--signs", "+++-",
    ]);
    assert_eq!((code, out.as_str()), (0, "6\n"));
    let (_, out, _) = call(&["count", "--variant", "real-monotone", "--lambda", "1,1,1", "--mu", "1,1,1", "--signs", "+-++"]);
    assert_eq!(out, "4\n");
}

#[test]
fn thread_count_does_not_change_counts() {
    let base = ["count", "--variant", "real", "--lambda", "1,3", "--mu", "2,2", "--signs", "++"];
    let (_, one, _) = call(&[&base[..], &["--threads", "1"]].concat());
    let (_, two, _) = call(&[&base[..], &["--threads", "2"]].concat());
    assert_eq!(one, "24\n");
    assert_eq!(one, two);
}

#[test]
fn fixed_start() {
    let (code, out, _) = call(&[
        "count", "--variant", "real", "--lambda", "1,3", "--mu", "2,2", "--signs", "++", "--sigma1", "(1)(234)",
    ]);
    assert_eq!((code, out.as_str()), (0, "3\n"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = call(&["count", "--lambda", "1,1"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, _) = call(&["count", "--bogus"]);
    assert_eq!(code, 2);
    let (code, _, err) = call(&["count", "--lambda", "1,2", "--mu", "1,1"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = call(&["count", "--variant", "real", "--lambda", "1,1,1", "--mu", "1,1,1"]);
    assert_eq!(code, 2);
    let (code, _, err) = call(&["count", "--lambda", "1,1,1", "--mu", "1,1,1", "--limit-r", "3"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = call(&["count", "--lambda", "1,1,1", "--mu", "1,1,1", "--limit-r", "12"]);
    assert_eq!(code, 2);
    let (code, out, _) = call(&["count", "--lambda", "1,1,1", "--mu", "1,1,1", "--limit-r", "12", "--allow-unbounded"]);
    assert_eq!((code, out.as_str()), (0, "24\n"));
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("asymptotics"));
}

#[test]
fn cached_and_uncached_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["count", "--variant", "monotone", "--lambda", "1,3", "--mu", "2,2", "--cache-dir", d];
    let (_, plain, _) = call(&args[..7]);
    let (_, first, _) = call(&args);
    let (_, second, _) = call(&args);
    assert_eq!(plain, first);
    assert_eq!(first, second);
    let (_, json, _) = call(&[&args[..], &["--json"]].concat());
    assert!(json.contains("\"cached\": true"));
    let (code, out, _) = call(&["cache", "inspect", "--cache-dir", d]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 records"));
    let (_, out, _) = call(&["cache", "clear", "--cache-dir", d]);
    assert_eq!(out, "removed 1 records\n");
}

#[test]
fn correspondence_report() {
    let (code, out, _) = call(&["verify-correspondence", "--genus", "0", "--lambda", "1,3", "--mu", "2,2", "--signs", "++", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["lhs"], 24);
    assert_eq!(v["rhs"], "24");
    assert_eq!(v["equal"], true);
}

#[test]
fn build_then_classify() {
    let (code, out, _) = call(&["zigzag", "build", "standard", "--m", "1", "--json"]);
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = call(&["zigzag", "classify", "--cover", path.to_str().unwrap(), "--json", "--k", "0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["class"], "universally_monotone_zigzag");
    assert_eq!(v[0]["kmixed"], true);
    assert!(!v[0]["witness"]["edges"].as_array().unwrap().is_empty());
}

#[test]
fn string_builder_flags() {
    let (code, out, _) = call(&["zigzag", "build", "string", "--start", "1", "--tails", "i2f,o2f,o2f,i2f"]);
    assert_eq!(code, 0);
    assert!(out.contains("class "));
    let (code, _, _) = call(&["zigzag", "build", "string", "--tails", "x2"]);
    assert_eq!(code, 2);
    let (code, _, _) = call(&["zigzag", "build", "standard", "--m", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn asymptotics_rejects_m_zero() {
    let (code, _, _) = call(&["asymptotics", "--family", "arbitrary-splitting", "--m-min", "0"]);
    assert_eq!(code, 2);
    let (code, out, _) = call(&["asymptotics", "--family", "arbitrary-splitting", "--m-max", "1", "--csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("1,arbitrary-splitting,4,"));
}
