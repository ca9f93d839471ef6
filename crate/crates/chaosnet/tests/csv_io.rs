use chaosnet::core::{LabeledDataset, Matrix};
use chaosnet::{load_csv, read_csv, write_csv, CsvOptions, Error, LabelColumn};
use proptest::prelude::*;

fn iris_path() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/data/iris.csv").to_string()
}

#[test]
fn bundled_iris() {
    let opts = CsvOptions { label_column: LabelColumn::Name("species".into()), has_header: true };
    let l = load_csv(iris_path(), &opts).unwrap();
    assert_eq!(l.dataset.features().shape(), (150, 4));
    assert_eq!(l.dataset.classes().len(), 3);
    for c in l.dataset.classes() {
        assert_eq!(l.dataset.rows_of(c).len(), 50);
    }
    assert_eq!(l.label_name.as_deref(), Some("species"));
    assert_eq!(l.dropped, 0);
}

#[test]
fn malformed_cell_names_row_and_column() {
    let text = "a,b,y\n1,2,x\n3,oops,y\n";
    match read_csv(text.as_bytes(), &CsvOptions::default()) {
        Err(Error::Parse { line: 3, column: Some(2), .. }) => {}
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn headerless_file() {
    let opts = CsvOptions { label_column: LabelColumn::Index(0), has_header: false };
    let l = read_csv("a,1,2\nb,3,4\n".as_bytes(), &opts).unwrap();
    assert_eq!(l.dataset.len(), 2);
    assert_eq!(l.dataset.features().row(1), &[3.0, 4.0]);
    assert_eq!(l.dataset.labels(), &["a".to_string(), "b".to_string()]);
}

#[test]
fn ragged_and_empty_inputs() {
    let ragged = read_csv("a,b,y\n1,2,x\n3,y\n".as_bytes(), &CsvOptions::default());
    assert!(matches!(ragged, Err(Error::Parse { line: 3, .. })), "{ragged:?}");
    assert!(matches!(read_csv("".as_bytes(), &CsvOptions::default()), Err(Error::Parse { .. })));
    assert!(matches!(read_csv("a,b,y\n".as_bytes(), &CsvOptions::default()), Err(Error::Parse { .. })));
}

#[test]
fn missing_values_drop_rows() {
    let l = read_csv("a,b,y\n1,,x\n3,4,y\n5,NA,y\n6,7,?\n8,9,x\n".as_bytes(), &CsvOptions::default()).unwrap();
    assert_eq!(l.dropped, 3);
    assert_eq!(l.dataset.len(), 2);
}

#[test]
fn unknown_label_name() {
    let opts = CsvOptions { label_column: LabelColumn::Name("class".into()), has_header: true };
    assert!(matches!(read_csv("a,y\n1,x\n".as_bytes(), &opts), Err(Error::Config(_))));
}

proptest! {
    #[test]
    fn save_load_identity(rows in prop::collection::vec((prop::collection::vec(-1e6f64..1e6, 3), 0u8..4), 1..30)) {
        let x = Matrix::from_rows(&rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>()).unwrap();
        let labels = rows.iter().map(|r| format!("class {}", r.1)).collect();
        let ds = LabeledDataset::new(x, labels).unwrap();
        let names = vec!["a".to_string(), "b".into(), "c".into()];
        let mut buf = Vec::new();
        write_csv(&mut buf, &ds, Some((&names, "label"))).unwrap();
        let back = read_csv(buf.as_slice(), &CsvOptions::default()).unwrap();
        prop_assert_eq!(back.dataset.features(), ds.features());
        prop_assert_eq!(back.dataset.labels(), ds.labels());
        prop_assert_eq!(back.feature_names, Some(names));
    }
}
