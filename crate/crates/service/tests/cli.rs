use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Command, Stdio};

use ufg_core::map::level::{LevelDocument, LevelMeta};
use ufg_core::map::{decode, MapGenome};

const BIN: &str = env!("CARGO_BIN_EXE_ufg");

#[test]
fn render_writes_svg_for_an_exported_level() {
    let dir = tempfile::tempdir().unwrap();
    let layout = decode(&MapGenome::filled(0.4).unwrap()).unwrap();
    let level = dir.path().join("level.json");
    std::fs::write(&level, LevelDocument::new(&layout, LevelMeta::default()).to_json()).unwrap();
    let svg = dir.path().join("level.svg");
    let status = Command::new(BIN).args(["render", "--level"]).arg(&level).arg("--svg").arg(&svg).status().unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn render_rejects_a_broken_level() {
    let dir = tempfile::tempdir().unwrap();
    let level = dir.path().join("bad.json");
    std::fs::write(&level, r#"{"version":"ufg-level/1"}"#).unwrap();
    let out = Command::new(BIN).args(["render", "--level"]).arg(&level).args(["--svg", "/dev/null"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn experiment_writes_one_row_per_seed_and_arm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("results.csv");
    let out = Command::new(BIN)
        .args(["experiment", "--seeds", "2", "--iterations", "10", "--assist", "both", "--noise", "0.02", "--out"])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("seed,assist,human_rounds,generations,final_distance"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r.split(',').nth(1) == Some("on")).count(), 2);
}

#[test]
fn experiment_only_accepts_10_or_20_iterations() {
    let out = Command::new(BIN).args(["experiment", "--iterations", "15"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn serve_uses_ufg_data_and_answers_http() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("from-env");
    let mut child = Command::new(BIN)
        .args(["serve", "--port", "0", "--data"])
        .arg(dir.path().join("from-flag"))
        .env("UFG_DATA", &data)
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut addr = None;
    for _ in 0..4 {
        let mut line = String::new();
        stderr.read_line(&mut line).unwrap();
        if let Some(a) = line.trim().strip_prefix("listening on ") {
            addr = Some(a.to_string());
            break;
        }
    }
    let addr = addr.expect("server address");
    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(stream, "POST /sessions HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: 2\r\nConnection: close\r\n\r\n{{}}").unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(response.starts_with("HTTP/1.1 201"), "{}", &response[..response.len().min(200)]);
    assert!(data.is_dir());
    assert!(!dir.path().join("from-flag").exists());
    assert_eq!(std::fs::read_dir(&data).unwrap().count(), 1);
}
