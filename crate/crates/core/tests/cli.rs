mod common;

use std::process::{Command, Output};

use serde_json::Value;

use common::{fixture, fixture_dir};
use tropfan::io::{parse_fan, parse_matroid, serialize_fan, serialize_matroid};

fn tropfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfan")).args(args).env_remove("TROPFAN_THREADS").output().expect("binary runs")
}

fn fan_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = tropfan(&[args, &["--json"]].concat());
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().expect("exit code"), v)
}

#[test]
fn verdicts_map_to_exit_codes() {
    let cases: [(&[&str], &str, i32); 8] = [
        (&["tpd"], "signed_cube.json", 0),
        (&["tpd"], "cross.json", 1),
        (&["balance"], "cross.json", 0),
        (&["balance"], "cross_unbalanced.json", 1),
        (&["local-tpd"], "u34_fan.json", 0),
        (&["local-tpd"], "stars_only.json", 1),
        (&["dim1"], "line.json", 1),
        (&["homology", "--p", "1"], "stars_only.json", 0),
    ];
    for (cmd, name, code) in cases {
        let f = fan_arg(name);
        let out = tropfan(&[cmd, &["--fan", &f]].concat());
        assert_eq!(out.status.code(), Some(code), "{cmd:?} {name}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let f = fan_arg("line.json");
    assert_eq!(tropfan(&["dim1", "--fan", &f, "--ring", "Q"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_with_two() {
    let f = fan_arg("cross.json");
    let out = tropfan(&["tpd", "--fan", &f, "--ring", "Fp:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("modulus not prime"));

    let out = tropfan(&["tpd", "--fan", "no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no/such/file.json"));

    assert_eq!(tropfan(&["tpd", "--fan", &f, "--bogus"]).status.code(), Some(2));
    assert_eq!(tropfan(&["tpd", "--fan", &f, "--face", "99"]).status.code(), Some(2));
    let m = fan_arg("u34_matroid.json");
    assert_eq!(tropfan(&["tpd", "--fan", &m]).status.code(), Some(2));
}

#[test]
fn json_reports_have_the_common_shape() {
    let f = fan_arg("signed_cube.json");
    let (code, v) = report(&["tpd", "--fan", &f]);
    assert_eq!(code, 0);
    for key in ["command", "inputs", "results", "witnesses", "verdict"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["command"], "tpd");
    assert_eq!(v["verdict"], true);

    let f = fan_arg("cross_unbalanced.json");
    let (code, v) = report(&["balance", "--fan", &f]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], false);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    let f = fan_arg("stars_only.json");
    let (code, v) = report(&["euler", "--fan", &f]);
    assert_eq!(code, 1);
    assert!(v.to_string().contains("hypothesis_violated"));
}

#[test]
fn bergman_output_feeds_local_tpd() {
    let dir = std::env::temp_dir().join(format!("tropfan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fan_path = dir.join("u34.json");
    let m = fan_arg("u34_matroid.json");
    let out = tropfan(&["bergman", "--matroid", &m, "-o", fan_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let written = std::fs::read_to_string(&fan_path).unwrap();
    assert_eq!(written, std::fs::read_to_string(fixture("u34_fan.json")).unwrap());
    let out = tropfan(&["local-tpd", "--fan", fan_path.to_str().unwrap(), "--ring", "Z"]);
    assert_eq!(out.status.code(), Some(0));

    let star_path = dir.join("star.json");
    let f = fan_path.to_str().unwrap();
    let out = tropfan(&["star-export", "--fan", f, "--face", "1", "-o", star_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = tropfan(&["tpd", "--fan", star_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn threads_flag_and_variable_do_not_change_results() {
    let f = fan_arg("stars_only.json");
    let (_, base) = report(&["local-tpd", "--fan", &f]);
    let (_, one) = report(&["local-tpd", "--fan", &f, "--threads", "1"]);
    assert_eq!(base, one);
    let out = Command::new(env!("CARGO_BIN_EXE_tropfan"))
        .args(["local-tpd", "--fan", &f, "--json"])
        .env("TROPFAN_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), base);
}

#[test]
fn fixtures_are_canonical() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixture_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let again = if name.ends_with("_matroid.json") {
            serialize_matroid(&parse_matroid(&text).unwrap()).unwrap()
        } else {
            serialize_fan(&parse_fan(&text).unwrap()).unwrap()
        };
        assert_eq!(again, text, "{name} is not in canonical form");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn library_entry_point_matches_binary() {
    let f = fan_arg("four_rays.json");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tropfan::cli::run(["tropfan", "tpd", "--fan", &f, "--json"], &mut out, &mut err);
    assert_eq!(code, 0);
    let bin = tropfan(&["tpd", "--fan", &f, "--json"]);
    assert_eq!(out, bin.stdout);
}
