use assocarray::io::{
    format_table, format_triples, parse_table, parse_triples, read_table, read_triples, songs, write_table,
    write_triples, SONGS_TSV, TRIPLE_HEADER,
};
use assocarray::{ArrayStats, Key, Value};

fn temp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("assocarray-{}-{name}", std::process::id()))
}

#[test]
fn song_table_has_four_by_four_stats() {
    let a = parse_table(SONGS_TSV).unwrap();
    assert_eq!(a.stats(), ArrayStats { m: 4, n: 4, nnz: 16 });
    assert_eq!(a.get(&Key::from("063012ktnA1"), &Key::from("Duration")), Some(&Value::str("4:38")));
    assert_eq!(a.get(&Key::from("053013ktnA1"), &Key::from("Date")), Some(&Value::str("2013-05-30")));
}

#[test]
fn song_table_round_trips_through_triples() {
    let a = songs();
    let text = format_triples(&a).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with(TRIPLE_HEADER));
    assert!(parse_triples(&text).unwrap().equal_exact(&a));
}

#[test]
fn files_round_trip_byte_for_byte() {
    let (t, g) = (temp("songs.tsv"), temp("songs.triples"));
    write_table(&songs(), &t).unwrap();
    assert_eq!(std::fs::read_to_string(&t).unwrap(), SONGS_TSV);
    let a = read_table(&t).unwrap();
    write_triples(&a, &g).unwrap();
    let b = read_triples(&g).unwrap();
    assert!(a.equal_exact(&b));
    assert_eq!(format_table(&b).unwrap(), SONGS_TSV);
    std::fs::remove_file(t).unwrap();
    std::fs::remove_file(g).unwrap();
}

#[test]
fn duplicate_numeric_triples_add() {
    let a = parse_triples("row\tcol\tval\nr\tc\t2\nr\tc\t3\nr\td\t1\n").unwrap();
    assert_eq!(a.nnz(), 2);
    assert_eq!(a.get(&Key::from("r"), &Key::from("c")), Some(&Value::Int(5)));
}

#[test]
fn table_with_one_empty_cell_stores_one_fewer() {
    let a = parse_table("\tx\ty\na\t1\t\nb\t2\t3\n").unwrap();
    assert_eq!(a.nnz(), 3);
}

#[test]
fn malformed_inputs_are_rejected() {
    assert!(parse_triples("row\tcol\tval\nr\tc\n").is_err());
    assert!(parse_table("\tx\ty\na\t1\n").is_err());
    assert!(parse_table("\tx\tx\na\t1\t2\n").is_err());
    assert!(parse_table("\tx\na\t1\na\t2\n").is_err());
    assert!(read_table(temp("missing.tsv")).is_err());
}
