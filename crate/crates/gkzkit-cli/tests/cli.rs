use std::path::PathBuf;
use std::process::{Command, Output};

fn gkzkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkzkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("gkzkit-cli-{}-{name}", std::process::id()))
}

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn sr_of_the_enhanced_quintic() {
    let o = gkzkit(&["sr", &fixture_path("quintic")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("SR ideal (3 generators):"));
    for g in ["D5D6", "D1D2D3D4D5", "D1D2D3D4D7"] {
        assert!(out.lines().any(|l| l.trim() == g), "{g} missing in\n{out}");
    }
    assert!(out.contains("length 9"));
}

#[test]
fn verify_quintic_operators() {
    let o = gkzkit(&["verify", &fixture_path("quintic"), "--order", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.matches("pass (45 coefficients checked to order 8)").count(), 3);
    let one = gkzkit(&["verify", "--fixture", "quintic", "--order", "3", "--rel", "2"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one).matches("l = ").count(), 1);
}

#[test]
fn aj_reports_the_inhomogeneous_term() {
    let o = gkzkit(&["aj", "--fixture", "quintic"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("inhomogeneous term: (3/40)*t^5 = Θ_x (3/20)*x^(1/2)"));
    assert!(out.contains("multiplier 75/16 π^-2"));
}

#[test]
fn aj_json_has_rational_strings() {
    let json = scratch_path("aj.json");
    let o = gkzkit(&["aj", "--fixture", "quintic", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    std::fs::remove_file(&json).ok();
    assert_eq!(v["results"]["walcher_multiplier"], "75/16");
    assert_eq!(v["results"]["total"], "(3/40)*t^5");
}

#[test]
fn reports_are_deterministic() {
    let a = scratch_path("a.json");
    let b = scratch_path("b.json");
    let oa = gkzkit(&["triangulate", "--fixture", "p72221", "--json", a.to_str().unwrap()]);
    let ob = gkzkit(&["triangulate", "--fixture", "p72221", "--json", b.to_str().unwrap()]);
    assert_eq!(oa.stdout, ob.stdout);
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();
    assert_eq!(ja, jb);
}

#[test]
fn schema_errors_exit_with_two_and_a_pointer() {
    let path = scratch_path("bad.json");
    let text = std::fs::read_to_string(fixture_path("p22211")).unwrap().replace("[1, 2, 5, 6]", "[1, 2, 5, 60]");
    std::fs::write(&path, text).unwrap();
    let o = gkzkit(&["sr", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/fan/max_cones/2/3"), "{}", stderr(&o));
    let o = gkzkit(&["sr", "--fixture", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = gkzkit(&["beta", "--fixture", "p72221"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_check_exits_with_one() {
    // Twice l0 does not generate the lattice together with l1.
    let o = gkzkit(&["relations", "--fixture", "quintic", "--chart", "-5,1,1,1,1,1,0,0;-2,0,0,0,0,2,2,-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("spans the lattice: no"));
}

#[test]
fn enhance_without_brane_is_an_input_error() {
    let o = gkzkit(&["enhance", "--fixture", "p22211"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/brane"));
}
