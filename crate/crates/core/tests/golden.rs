use std::fs;
use std::path::PathBuf;

use circwidth::format::{parse, serialize};
use circwidth::knot_table;

fn corpus() -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "dec"))
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(out.len() >= 10);
    out
}

#[test]
fn corpus_files_are_canonical_and_valid() {
    for (path, text) in corpus() {
        let d = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(d.is_valid(), "{}: {}", path.display(), d.validate());
        assert_eq!(serialize(&d), text, "{}", path.display());
        assert_eq!(parse(&serialize(&d)).unwrap(), d);
    }
}

#[test]
fn corpus_widths() {
    let expect = [
        ("almostfib-g1.dec", vec![3]),
        ("closed-g2.dec", vec![5]),
        ("closed-thin-piece.dec", vec![3, 3]),
        ("csum-fib-af.dec", vec![5]),
        ("disk-piece.dec", vec![5, 3, 1]),
        ("fibered-g1.dec", vec![]),
        ("genus3-stage.dec", vec![5]),
        ("sphere-piece.dec", vec![4, 2]),
        ("three-handle.dec", vec![1]),
        ("two-stage-connected.dec", vec![3, 3]),
    ];
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, width) in expect {
        let d = parse(&fs::read_to_string(dir.join(name)).unwrap()).unwrap();
        assert_eq!(d.width().unwrap().entries(), width.as_slice(), "{name}");
    }
}

#[test]
fn sample_table_records_match_fixtures() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let rows =
        knot_table::parse_table(&fs::read_to_string(dir.join("knots.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 6);
    let trefoil =
        knot_table::canonical_decomposition(knot_table::find(&rows, "3_1").unwrap()).unwrap();
    let file = parse(&fs::read_to_string(dir.join("fibered-g1.dec")).unwrap()).unwrap();
    assert_eq!(trefoil.thin_surfaces(), file.thin_surfaces());
    assert_eq!(trefoil.min_genus(), file.min_genus());
    let hn1 = knot_table::canonical_decomposition(knot_table::find(&rows, "5_2").unwrap()).unwrap();
    let file = parse(&fs::read_to_string(dir.join("almostfib-g1.dec")).unwrap()).unwrap();
    assert_eq!(hn1.thick_surfaces(), file.thick_surfaces());
    assert!(knot_table::canonical_decomposition(knot_table::find(&rows, "7_4").unwrap()).is_err());
}
