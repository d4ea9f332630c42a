use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dualres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualres"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn header(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn coupling_header() {
    let o = dualres(&[
        "--omega-x",
        "4.56",
        "coupling",
        "--sweep",
        "omega_y:4.2:5.0:5",
    ]);
    assert!(o.status.success());
    assert_eq!(
        header(&o),
        "omega_y_ghz,g_d_mhz,g_cr_mhz,g_in_a_mhz,g_in_b_mhz,omega_d_x_ghz,omega_d_y_ghz,\
         delta_omega_x_mhz,delta_omega_y_mhz,omega_cr_x_ghz,omega_cr_y_ghz"
    );
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn zz_headers() {
    let plain = dualres(&["--omega-x", "4.52", "zz", "--sweep", "omega_y:4.75:4.95:3"]);
    assert_eq!(
        header(&plain),
        "omega_y_ghz,xi2_mhz,xi3_mhz,xi4s_mhz,xi_total_mhz,near_pole"
    );
    let full = dualres(&[
        "--omega-x",
        "4.52",
        "--cross-kerr",
        "--numeric-zz",
        "zz",
        "--sweep",
        "omega_y:4.75:4.95:3",
    ]);
    assert_eq!(
        header(&full),
        "omega_y_ghz,xi2_mhz,xi3_mhz,xi4s_mhz,xi4c0_mhz,xi4c1_mhz,xi_total_mhz,near_pole,\
         xi_numeric_mhz,numeric_unreliable"
    );
}

#[test]
fn phase_sweep_header() {
    let o = dualres(&["--omega-x", "4.56", "coupling", "--sweep", "phi_y:0:1:3"]);
    assert!(header(&o).starts_with("phi_y,omega_y_ghz,g_d_mhz,g_cr_mhz"));
}

#[test]
fn spectrum_at_point() {
    let o = dualres(&["--omega-x", "4.52", "--omega-y", "4.8", "spectrum"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "phi_x,phi_y,label,energy_ghz,overlap,hybridized"
    );
    assert_eq!(text.lines().count(), 1 + 144);
    assert!(text.lines().any(|l| l.contains(",0110,")));
}

#[test]
fn dump_matrix_is_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let o = dualres(&[
        "--truncation",
        "2,2,2,2",
        "spectrum",
        "--dump-matrix",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut entries = std::collections::HashMap::new();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        entries.insert((f[0].to_string(), f[1].to_string()), f[2].to_string());
    }
    for ((r, c), v) in &entries {
        assert_eq!(entries.get(&(c.clone(), r.clone())), Some(v));
    }
}

#[test]
fn switchoff_finds_root_without_direct_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.cfg");
    let text = dualres::config::reference_config_text().replace("g_xy_mhz = 1", "g_xy_mhz = 0");
    fs::write(&cfg, text).unwrap();
    let o = dualres(&[
        "--config",
        cfg.to_str().unwrap(),
        "--omega-x",
        "4.56",
        "switchoff",
        "--sweep",
        "omega_y:4.2:5.0:401",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "root,bracket_lo,bracket_hi,grid_lo,grid_hi,residual_hz"
    );
    assert!(text.lines().count() >= 2);
}

#[test]
fn contour_output() {
    let o = dualres(&[
        "switchoff",
        "--which",
        "g_d",
        "--sweep",
        "phi_x:-0.6:0.6:21",
        "--sweep2",
        "phi_y:-0.6:0.6:21",
    ]);
    assert!(o.status.success());
    assert_eq!(header(&o), "chain,point,phi_x,phi_y,closed");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = dualres(&[
            "--grid",
            "9",
            "--out",
            d.to_str().unwrap(),
            "figure",
            "fig7",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["fig7.csv", "fig7_roots.csv"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let s1 = dualres(&["zz", "--sweep", "omega_y:4.7:5.0:31"]);
    let s2 = dualres(&["zz", "--sweep", "omega_y:4.7:5.0:31"]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn figure_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = dualres(&[
        "--grid",
        "5",
        "--out",
        dir.path().to_str().unwrap(),
        "figure",
        "fig4",
    ]);
    assert!(o.status.success());
    let first_line = |name: &str| {
        fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(
        first_line("fig4c.csv"),
        "phi_y,omega_y_ghz,g_d_mhz,g_cr_mhz"
    );
    assert!(Path::new(&dir.path().join("fig4a.csv")).exists());
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "omega_a_ghz = 4.1\nomega_q_ghz = 3\n").unwrap();
    let o = dualres(&["--config", cfg.to_str().unwrap(), "zz"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");

    assert_eq!(
        dualres(&["--config", "/nonexistent/file", "zz"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        dualres(&["zz", "--sweep", "omega_z:1:2"]).status.code(),
        Some(1)
    );
    assert_eq!(dualres(&["figure", "fig8"]).status.code(), Some(1));
    assert_eq!(
        dualres(&["--truncation", "1,3,3,4", "spectrum"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(dualres(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn unevaluable_points_are_not_errors() {
    // Qubit x on resonator a: second-order denominators vanish.
    let o = dualres(&[
        "--omega-x",
        "4.1",
        "coupling",
        "--sweep",
        "omega_y:4.8:4.8:1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().contains("nan"));
}

#[test]
fn validate_disagreement_exits_two() {
    // The analytic expansion misses the diagonalized ZZ near ω_y ≈ 4.8 GHz.
    let o = dualres(&["validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle equivalence:"));
    assert_eq!(
        header(&o),
        "omega_y_ghz,xi_analytic_mhz,xi_numeric_mhz,tolerance_mhz,passed,numeric_unreliable"
    );
}
