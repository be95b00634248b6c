use std::process::{Command, Output};

use serde_json::Value;

fn cmlocus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmlocus")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cmlocus(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

type Row = (String, u64, u64, u64, u64);

fn json_rows(doc: &Value) -> Vec<Row> {
    let mut rows: Vec<Row> = doc["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            (
                c["field"]["base"].as_str().unwrap().to_string(),
                c["field"]["m"].as_u64().unwrap(),
                c["d"].as_u64().unwrap(),
                c["e"].as_u64().unwrap(),
                c["count"].as_u64().unwrap(),
            )
        })
        .collect();
    rows.sort();
    rows
}

fn table_rows(text: &str) -> Vec<Row> {
    let mut rows: Vec<Row> = text
        .lines()
        .skip(2)
        .filter(|l| l.starts_with('Q') || l.starts_with('K'))
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            let (base, m) = t[0].trim_end_matches(')').split_once('(').unwrap();
            let n = |i: usize| t[t.len() - i].parse::<u64>().unwrap();
            (base.to_string(), m.parse().unwrap(), n(3), n(2), n(1))
        })
        .collect();
    rows.sort();
    rows
}

#[test]
fn json_example() {
    let out = stdout(&["fiber", "--dk", "-4", "--f", "1", "--M", "1", "--N", "2", "--format", "json"]);
    assert_eq!(
        out,
        concat!(
            r#"{"checkTotal":3,"classes":[{"count":1,"d":1,"e":1,"field":{"base":"Q","m":1}},"#,
            r#"{"count":1,"d":1,"e":2,"field":{"base":"Q","m":2}}],"curve":{"M":1,"N":2},"#,
            r#""order":{"deltaK":-4,"f":1},"psiCheck":true}"#,
            "\n"
        )
    );
}

#[test]
fn json_round_trip_is_byte_identical() {
    for args in [["-4", "1", "2", "8"], ["-3", "2", "3", "36"], ["-4", "3", "1", "60"], ["-3", "1", "1", "7"]] {
        let [dk, f, m, n] = args;
        let out = stdout(&["fiber", "--dk", dk, "--f", f, "--M", m, "--N", n, "--format", "json"]);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(format!("{doc}\n"), out);
        assert_eq!(doc["psiCheck"], Value::Bool(true));
    }
}

#[test]
fn table_and_json_agree() {
    for args in [["-4", "1", "2", "8"], ["-3", "2", "3", "36"], ["-4", "6", "1", "48"], ["-3", "1", "1", "49"]] {
        let [dk, f, m, n] = args;
        let base = ["fiber", "--dk", dk, "--f", f, "--M", m, "--N", n];
        let table = stdout(&base);
        let json: Value = serde_json::from_str(&stdout(&[&base[..], &["--format", "json"]].concat())).unwrap();
        assert_eq!(table_rows(&table), json_rows(&json), "{args:?}");
    }
}

#[test]
fn csv_columns() {
    let out = stdout(&["fiber", "--dk", "-4", "--M", "2", "--N", "8", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("base,m,degree,d,e,count"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows, ["Q,8,4,4,2,2", "K,4,4,4,2,1"]);
}

#[test]
fn disc_flag_matches_split_form() {
    let a = stdout(&["fiber", "--disc", "-36", "--N", "12", "--format", "json"]);
    let b = stdout(&["fiber", "--dk", "-4", "--f", "3", "--N", "12", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn other_subcommands() {
    assert!(stdout(&["classgroup", "--disc", "-243"]).contains("h = 3"));
    let c: Value = serde_json::from_str(&stdout(&["rcf", "compose", "--dk", "-3", "K(2)", "K(3)", "--format", "json"])).unwrap();
    assert_eq!(c["closure"]["m"], 6);
    assert_eq!(c["index"], 3);
    let p: Value = serde_json::from_str(&stdout(&["primitive", "--dk", "-4", "--f", "5", "--N", "125", "--format", "json"])).unwrap();
    assert_eq!(p["degrees"].as_array().unwrap().len(), 2);
    let x: Value = serde_json::from_str(&stdout(&["x1", "--dk", "-3", "--N", "7", "--elliptic", "--format", "json"])).unwrap();
    assert_eq!((x["e"].as_u64(), x["f"].as_u64()), (Some(3), Some(1)));
    assert!(stdout(&["graph", "--dk", "-4", "--l", "2", "--depth", "3", "--dot"]).starts_with("digraph"));
}

#[test]
fn exit_codes() {
    assert_eq!(cmlocus(&["--help"]).status.code(), Some(0));
    assert_eq!(cmlocus(&["fiber", "--bogus"]).status.code(), Some(1));
    assert_eq!(cmlocus(&["fiber", "--N", "2"]).status.code(), Some(1));
    assert_eq!(cmlocus(&["fiber", "--dk", "-7", "--N", "2"]).status.code(), Some(2));
    assert_eq!(cmlocus(&["fiber", "--dk", "-4", "--M", "3", "--N", "4"]).status.code(), Some(2));
    assert_eq!(cmlocus(&["x1", "--dk", "-4", "--N", "7", "--elliptic"]).status.code(), Some(2));
    let check = cmlocus(&["check"]);
    assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stdout));
}
