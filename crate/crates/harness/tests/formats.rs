use std::fs;

use lqgame::HardCase;
use lqgame_harness::format::{encode_binary, load_instance, load_labels, load_vector, parse_hard_stanza, save_binary};
use lqgame_harness::HarnessError;

#[test]
fn csv_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.csv");
    fs::write(&path, "2,2,2.0\n1,0\n0,1\n").unwrap();
    let g = load_instance(&path).unwrap().game;
    assert_eq!((g.n(), g.d()), (2, 2));
    assert_eq!(g.snapshot(), vec![1.0, 0.0, 0.0, 1.0]);

    fs::write(&path, "# comment\nn,d,p\n2,2,2\n\n1,0\n0,1\n").unwrap();
    assert_eq!(load_instance(&path).unwrap().game.snapshot(), vec![1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn csv_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    for (text, line) in [
        ("2,2,2\n1,0\n0\n", "line 3"),
        ("2,2,2\n1,0\n0,NaN\n", "line 3"),
        ("2,2,2\n1,x\n0,1\n", "line 2"),
        ("2,2\n", "line 1"),
    ] {
        fs::write(&path, text).unwrap();
        match load_instance(&path) {
            Err(HarnessError::Parse { location, .. }) => assert_eq!(location, line, "{text:?}"),
            Err(other) => panic!("{text:?}: unexpected error {other}"),
            Ok(_) => panic!("{text:?} parsed"),
        }
    }
}

#[test]
fn hard_stanza_loads_a_generator() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hard.txt");
    fs::write(&path, "hard: case=2 n=8 d=8 l=3 p=2\n").unwrap();
    let loaded = load_instance(&path).unwrap();
    let spec = loaded.hard.unwrap();
    assert_eq!(spec.case, HardCase::Two);
    assert!(!loaded.game.is_dense());
    let a = 2f64.powf(-0.5);
    assert_eq!(loaded.game.query(0, 3).unwrap(), a);
    assert_eq!(loaded.game.query(0, 0).unwrap(), -a);
    assert!(parse_hard_stanza("hard: case=3 n=8 d=8 l=3 p=2").is_err());
    assert!(parse_hard_stanza("hard: case=1 n=8 d=8 l=3 p=2").is_err());
    assert!(parse_hard_stanza("hard: case=1 n=8 d=8 l=3 k=4 p=2").is_ok());
}

#[test]
fn binary_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    fs::write(&csv, "2,3,2\n0.1,-0.2,0.3\n0.6,0,-0.8\n").unwrap();
    let g = load_instance(&csv).unwrap().game;
    let first = dir.path().join("a.bin");
    let second = dir.path().join("b.bin");
    save_binary(&g, &first).unwrap();
    let reloaded = load_instance(&first).unwrap().game;
    save_binary(&reloaded, &second).unwrap();
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    assert_eq!(encode_binary(&reloaded), fs::read(&first).unwrap());
    assert_eq!(reloaded.snapshot(), g.snapshot());
}

#[test]
fn binary_errors_name_the_offset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    let mut bytes = b"LQG1".to_vec();
    bytes.extend_from_slice(&1u32.to_le_bytes());
    bytes.extend_from_slice(&2u32.to_le_bytes());
    bytes.extend_from_slice(&2f64.to_le_bytes());
    bytes.extend_from_slice(&0.5f64.to_le_bytes());
    fs::write(&path, &bytes).unwrap();
    assert!(matches!(load_instance(&path), Err(HarnessError::Parse { .. })));
    bytes.extend_from_slice(&f64::NAN.to_le_bytes());
    fs::write(&path, &bytes).unwrap();
    match load_instance(&path) {
        Err(HarnessError::Parse { location, .. }) => assert_eq!(location, "offset 28"),
        _ => panic!("NaN accepted"),
    }
}

#[test]
fn vectors_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    let row = dir.path().join("row.csv");
    fs::write(&row, "0.5,0.25\n").unwrap();
    assert_eq!(load_vector(&row).unwrap().as_slice(), &[0.5, 0.25]);
    let col = dir.path().join("col.csv");
    fs::write(&col, "0.5\n0.25\n").unwrap();
    assert_eq!(load_vector(&col).unwrap().as_slice(), &[0.5, 0.25]);
    let labels = dir.path().join("labels.txt");
    fs::write(&labels, "1\n-1\n+1,-1\n").unwrap();
    assert_eq!(load_labels(&labels).unwrap(), vec![1, -1, 1, -1]);
    fs::write(&labels, "1\n0\n").unwrap();
    assert!(load_labels(&labels).is_err());
}
