//! Comma-separated datasets: numeric feature columns plus one label column.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chaosnet_core::{LabeledDataset, Matrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    #[default]
    #[serde(skip)]
    Last,
    /// Zero-based column index.
    Index(usize),
    /// Header name; requires a header row.
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub label_column: LabelColumn,
    pub has_header: bool,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions { label_column: LabelColumn::Last, has_header: true }
    }
}

#[derive(Debug, Clone)]
pub struct Loaded {
    pub dataset: LabeledDataset,
    /// Feature column names, when the file had a header.
    pub feature_names: Option<Vec<String>>,
    pub label_name: Option<String>,
    /// Rows skipped because a cell was missing.
    pub dropped: usize,
}

/// Unlabeled rows, e.g. inputs for prediction.
#[derive(Debug, Clone)]
pub struct LoadedMatrix {
    pub features: Matrix,
    pub labels: Option<Vec<String>>,
    pub dropped: usize,
}

/// Empty, `NA` and `?` cells are treated as missing.
pub fn is_missing(cell: &str) -> bool {
    matches!(cell.trim(), "" | "NA" | "?")
}

pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Loaded> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, opts)
}

pub fn read_csv<R: Read>(reader: R, opts: &CsvOptions) -> Result<Loaded> {
    let table = read_table(reader, opts.has_header, Some(&opts.label_column))?;
    let labels = table.labels.expect("label column requested");
    let (feature_names, label_name) = match table.header {
        Some(mut h) => {
            let label = h.remove(table.label_index.expect("label column requested"));
            (Some(h), Some(label))
        }
        None => (None, None),
    };
    Ok(Loaded {
        dataset: LabeledDataset::new(table.features, labels)?,
        feature_names,
        label_name,
        dropped: table.dropped,
    })
}

/// Reads a numeric table, optionally setting one label column aside.
pub fn read_matrix<R: Read>(reader: R, has_header: bool, label_column: Option<&LabelColumn>) -> Result<LoadedMatrix> {
    let table = read_table(reader, has_header, label_column)?;
    Ok(LoadedMatrix { features: table.features, labels: table.labels, dropped: table.dropped })
}

struct Table {
    header: Option<Vec<String>>,
    label_index: Option<usize>,
    features: Matrix,
    labels: Option<Vec<String>>,
    dropped: usize,
}

fn read_table<R: Read>(reader: R, has_header: bool, label_column: Option<&LabelColumn>) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut records = rdr.records();

    let header = if has_header {
        match records.next() {
            Some(r) => Some(r?.iter().map(str::to_owned).collect::<Vec<_>>()),
            None => return Err(Error::Parse { line: 1, column: None, message: "empty file".into() }),
        }
    } else {
        None
    };

    let mut width = header.as_ref().map(Vec::len);
    let mut label_index = None;
    let mut features: Option<Matrix> = None;
    let mut labels = label_column.map(|_| Vec::new());
    let mut dropped = 0;
    let mut row = Vec::new();

    for record in records {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Parse {
                line,
                column: None,
                message: format!("expected {expected} fields, found {}", record.len()),
            });
        }
        if let (Some(column), None) = (label_column, label_index) {
            label_index = Some(resolve_label(column, header.as_deref(), expected)?);
        }
        if record.iter().any(is_missing) {
            dropped += 1;
            continue;
        }
        row.clear();
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_index {
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(Error::Parse {
                        line,
                        column: Some(col + 1),
                        message: format!("non-numeric feature value {cell:?}"),
                    })
                }
            }
        }
        if let (Some(labels), Some(i)) = (labels.as_mut(), label_index) {
            labels.push(record[i].to_owned());
        }
        features.get_or_insert_with(|| Matrix::empty(row.len())).push_row(&row)?;
    }

    let features = match features {
        Some(f) => f,
        None if dropped > 0 => {
            return Err(Error::Parse { line: 0, column: None, message: "every row has a missing value".into() })
        }
        None => return Err(Error::Parse { line: 1, column: None, message: "no data rows".into() }),
    };
    Ok(Table { header, label_index, features, labels, dropped })
}

fn resolve_label(column: &LabelColumn, header: Option<&[String]>, width: usize) -> Result<usize> {
    let index = match column {
        LabelColumn::Last => width.checked_sub(1),
        LabelColumn::Index(i) => Some(*i).filter(|&i| i < width),
        LabelColumn::Name(name) => match header {
            Some(h) => h.iter().position(|c| c == name),
            None => return Err(Error::Config(format!("label column {name:?} needs a header row"))),
        },
    };
    index.ok_or_else(|| Error::Config(format!("label column {column:?} not found among {width} columns")))
}

/// Writes features followed by the label as the last column.
pub fn write_csv<W: Write>(writer: W, data: &LabeledDataset, header: Option<(&[String], &str)>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if let Some((names, label)) = header {
        w.write_record(names.iter().map(String::as_str).chain([label]))?;
    }
    let mut cells = Vec::with_capacity(data.features().cols() + 1);
    for (row, label) in data.features().iter_rows().zip(data.labels()) {
        cells.clear();
        cells.extend(row.iter().map(f64::to_string));
        cells.push(label.clone());
        w.write_record(&cells)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn save_csv(path: impl AsRef<Path>, data: &LabeledDataset, header: Option<(&[String], &str)>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(file, data, header)
}
