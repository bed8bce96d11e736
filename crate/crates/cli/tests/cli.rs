use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use geoloop::boundary::BoxParameters;
use geoloop::lemmas::required_radius;
use geoloop::persist::load_census;
use tempfile::TempDir;

fn geoloop(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoloop"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("GEOLOOP_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Data rows of a series CSV as `(t, count)` pairs.
fn rows(path: &Path) -> Vec<(String, u64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            (
                f.next().unwrap().to_string(),
                f.next().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

/// One census to radius 13 shared by the statistics tests.
fn shared() -> &'static PathBuf {
    static DIR: OnceLock<(TempDir, PathBuf)> = OnceLock::new();
    &DIR.get_or_init(|| {
        let tmp = TempDir::new().unwrap();
        let radius = required_radius(&BoxParameters::defaults(), 12.0).max(13.0);
        let o = geoloop(tmp.path(), &["census", "--radius", &radius.to_string()]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let p = tmp.path().join("census.bin");
        (tmp, p)
    })
    .1
}

fn census_arg() -> String {
    shared().display().to_string()
}

#[test]
fn census_below_minimal_displacement_is_empty() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(tmp.path(), &["census", "--radius", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("records: 0"));
    assert!(load_census(&tmp.path().join("census.bin"))
        .unwrap()
        .is_empty());
}

#[test]
fn census_reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        assert_eq!(code(&geoloop(d.path(), &["census", "--radius", "8"])), 0);
    }
    let read = |d: &TempDir| fs::read(d.path().join("census.bin")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn extension_matches_fresh_census() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(
        code(&geoloop(
            d,
            &["census", "--radius", "10", "--file", "small.bin"]
        )),
        0
    );
    let small = d.join("small.bin").display().to_string();
    let o = geoloop(
        d,
        &[
            "census", "--radius", "12", "--extend", &small, "--file", "ext.bin",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        code(&geoloop(
            d,
            &["census", "--radius", "12", "--file", "fresh.bin"]
        )),
        0
    );
    let ext = load_census(&d.join("ext.bin")).unwrap();
    let fresh = load_census(&d.join("fresh.bin")).unwrap();
    assert_eq!(ext.records, fresh.records);
    assert_eq!(ext.config, fresh.config);
}

#[test]
fn budget_exhaustion_flags_partial_file() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(tmp.path(), &["census", "--radius", "9", "--budget", "5000"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("budget"));
    let c = load_census(&tmp.path().join("census.bin")).unwrap();
    assert!(c.partial && c.radius < 9.0);
}

#[test]
fn full_sector_reproduces_count() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let c = census_arg();
    assert_eq!(code(&geoloop(d, &["count", "--census", &c])), 0);
    let pi = std::f64::consts::PI.to_string();
    let o = geoloop(
        d,
        &[
            "sector",
            "--census",
            &c,
            "--theta",
            &pi,
            "--theta-prime",
            &pi,
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let count = rows(&d.join("count.csv"));
    assert!(count.len() > 200);
    assert_eq!(count, rows(&d.join("sector.csv")));
}

#[test]
fn homology_series_partition_count() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let c = census_arg();
    assert_eq!(code(&geoloop(d, &["count", "--census", &c])), 0);
    assert_eq!(
        code(&geoloop(
            d,
            &["homology", "--census", &c, "--scheme", "mod2"]
        )),
        0
    );
    let count = rows(&d.join("count.csv"));
    let all = rows(&d.join("homology.csv"));
    assert_eq!(all.len(), 16 * count.len());
    for (i, (t, n)) in count.iter().enumerate() {
        let sum: u64 = (0..16).map(|k| all[k * count.len() + i].1).sum();
        assert_eq!((t, sum), (t, *n));
    }
    assert!(d.join("homology_015.dat").exists());
}

#[test]
fn cover_proportion_is_near_one_half() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(
        tmp.path(),
        &[
            "cover",
            "--census",
            &census_arg(),
            "--scheme",
            "index-two",
            "--grid-start",
            "13",
            "--grid-end",
            "13",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("cover.csv")).unwrap();
    let last = text.lines().last().unwrap();
    let p: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((0.45..=0.55).contains(&p), "{p}");
}

#[test]
fn fit_recovers_entropy_and_constant() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(
        tmp.path(),
        &[
            "fit",
            "--census",
            &census_arg(),
            "--window-start",
            "9",
            "--window-end",
            "13",
        ],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("fit.json")).unwrap()).unwrap();
    let h = v["fit"]["h_estimate"].as_f64().unwrap();
    let a = v["fit"]["a_estimate"].as_f64().unwrap();
    assert!((0.95..=1.05).contains(&h), "{h}");
    assert!((a - 0.25).abs() <= 0.25 * 0.25, "{a}");
    let band = v["fit"]["a_band"].as_array().unwrap();
    assert!(band[0].as_f64().unwrap() <= band[1].as_f64().unwrap());
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config_fingerprint"].as_str().unwrap().len(), 16);
}

#[test]
fn grid_beyond_census_names_the_deficit() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(
        tmp.path(),
        &["count", "--census", &census_arg(), "--grid-end", "20"],
    );
    assert_eq!(code(&o), 2);
    assert!(
        stderr(&o).contains("exceeds census radius"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn verify_lemmas_default_passes_and_is_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for d in [&a, &b] {
        let o = geoloop(
            d.path(),
            &[
                "verify-lemmas",
                "--census",
                &census_arg(),
                "--t-list",
                "10,11,12",
                "--samples",
                "200",
                "--seed",
                "5",
            ],
        );
        assert_eq!(code(&o), 0, "{}{}", stdout(&o), stderr(&o));
    }
    let read = |d: &TempDir| fs::read_to_string(d.path().join("lemmas.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    let v: serde_json::Value = serde_json::from_str(&read(&a)).unwrap();
    assert_eq!(v["report"]["pass"], true);
    assert_eq!(v["report"]["inclusion"]["window_violations"], 0);
}

#[test]
fn verify_lemmas_inverted_arcs_fail() {
    let tmp = TempDir::new().unwrap();
    let o = geoloop(
        tmp.path(),
        &[
            "verify-lemmas",
            "--census",
            &census_arg(),
            "--preset",
            "wide",
            "--rho",
            "0.4",
            "--rho-prime",
            "0.4",
            "--t-list",
            "11,12",
            "--samples",
            "50",
        ],
    );
    assert_eq!(code(&o), 1, "{}{}", stdout(&o), stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("lemmas.json")).unwrap()).unwrap();
    assert_eq!(v["report"]["pass"], false);
    assert!(
        v["report"]["inclusion"]["window_violations"]
            .as_u64()
            .unwrap()
            > 0
    );
    assert_eq!(v["report"]["inclusion"]["nested"], false);
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cfg = d.join("run.toml");
    fs::write(
        &cfg,
        "[census]\nradius = 5.0\nslack = 2.0\n[output]\nseed = 3\n",
    )
    .unwrap();
    let c = cfg.display().to_string();
    let o = geoloop(d, &["--config", &c, "census"]);
    assert!(stdout(&o).contains("radius: 5"), "{}", stdout(&o));
    let o = geoloop(d, &["--config", &c, "census", "--radius", "6"]);
    assert!(stdout(&o).contains("radius: 6"));

    fs::write(&cfg, "[census]\nradius = 5.0\nunknown = 1\n").unwrap();
    let o = geoloop(d, &["--config", &c, "census"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown"));
    assert_eq!(code(&geoloop(d, &["census", "--bogus"])), 2);
}

#[test]
fn out_dir_variable_is_honoured() {
    let tmp = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_geoloop"))
        .args(["census", "--radius", "4"])
        .env("GEOLOOP_OUT_DIR", tmp.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(tmp.path().join("census.bin").exists());
}

#[test]
fn outputs_embed_provenance() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let c = census_arg();
    assert_eq!(
        code(&geoloop(
            d,
            &["--gnuplot", "count", "--census", &c, "--grid-start", "10"]
        )),
        0
    );
    assert_eq!(code(&geoloop(d, &["export", "--census", &c])), 0);
    let version = format!("# geoloop {}", env!("CARGO_PKG_VERSION"));
    for f in ["count.csv", "count.dat", "count.gp", "census.csv"] {
        let text = fs::read_to_string(d.join(f)).unwrap();
        assert!(text.starts_with(&version), "{f}");
        assert!(text.contains("# config "), "{f}");
    }
    let gp = fs::read_to_string(d.join("count.gp")).unwrap();
    assert!(gp.contains("'count.dat' using 1:2"));
    let csv = fs::read_to_string(d.join("census.csv")).unwrap();
    let n = load_census(shared()).unwrap().len();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), n + 1);
}
