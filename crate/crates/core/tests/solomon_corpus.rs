mod common;

use common::{solomon_dir, solomon_file};
use rwpso::io::solomon::{build_instance, load_instance, parse_instance, read_instance, truncate};

fn corpus() -> Vec<std::path::PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(solomon_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_file_parses_with_family_capacity() {
    let files = corpus();
    assert_eq!(files.len(), 56);
    for path in files {
        let raw = read_instance(&path).unwrap();
        let inst = build_instance(&raw).unwrap();
        let family = raw.name.trim_end_matches(char::is_numeric).to_ascii_uppercase();
        let series = raw.name.chars().find(char::is_ascii_digit).unwrap();
        let expected = match (family.as_str(), series) {
            ("C", '2') => 700.0,
            (_, '2') => 1000.0,
            _ => 200.0,
        };
        assert_eq!(inst.capacity(), expected, "{}", raw.name);
        assert_eq!(inst.n_customers(), 100, "{}", raw.name);
        assert_eq!(raw.rows[0].id, 0);
        assert_eq!(raw.rows[0].demand, 0.0);
    }
}

#[test]
fn c101_first_customer_row() {
    let raw = read_instance(&solomon_file("C101")).unwrap();
    let row = raw.rows[1];
    assert_eq!((row.id, row.x, row.y, row.demand), (1, 45.0, 68.0, 10.0));
    assert_eq!((row.ready_time, row.due_date, row.service_time), (912.0, 967.0, 90.0));
    assert_eq!(raw.vehicle_count_declared, 25);
}

#[test]
fn r101_first_customer_row() {
    let raw = read_instance(&solomon_file("R101")).unwrap();
    let row = raw.rows[1];
    assert_eq!((row.id, row.x, row.y, row.demand), (1, 41.0, 49.0, 10.0));
    assert_eq!((row.ready_time, row.due_date, row.service_time), (161.0, 171.0, 10.0));
}

#[test]
fn corpus_round_trips_through_serializer() {
    for path in corpus() {
        let raw = read_instance(&path).unwrap();
        let again = parse_instance(&raw.to_solomon_string()).unwrap();
        assert_eq!(raw, again, "{}", path.display());
    }
}

#[test]
fn truncation_keeps_leading_customers() {
    let raw = read_instance(&solomon_file("RC201")).unwrap();
    for n in [25, 50, 100] {
        let cut = truncate(&raw, n).unwrap();
        assert_eq!(cut.customer_count(), n);
        assert_eq!(&cut.rows[..], &raw.rows[..=n]);
    }
    let (_, inst) = load_instance(&solomon_file("RC201"), Some(25)).unwrap();
    assert_eq!(inst.n_customers(), 25);
    assert!(truncate(&raw, 101).is_err());
}
