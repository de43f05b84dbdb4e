use serde::Serialize;

use crate::error::{Error, Result};

/// One row of a dataset: an attribute tuple and its label, if known.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Record {
    pub attributes: Vec<bool>,
    pub label: Option<bool>,
}

impl Record {
    pub fn known(&self) -> bool {
        self.label.is_some()
    }
}

/// Binary attribute tuples with optional binary labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    attribute_names: Vec<String>,
    records: Vec<Record>,
}

impl Dataset {
    /// Builds a dataset with attributes named `x1`, `x2`, ….
    pub fn new(dimension: usize, records: Vec<Record>) -> Result<Self> {
        let names = (1..=dimension).map(|i| format!("x{i}")).collect();
        Self::with_names(names, records)
    }

    pub fn with_names(attribute_names: Vec<String>, records: Vec<Record>) -> Result<Self> {
        let n = attribute_names.len();
        if let Some(bad) = records.iter().find(|r| r.attributes.len() != n) {
            return Err(Error::LengthMismatch(format!(
                "record has {} attributes, dataset dimension is {n}",
                bad.attributes.len()
            )));
        }
        Ok(Dataset {
            attribute_names,
            records,
        })
    }

    /// All points of `{0,1}^n` labelled by `label`, in table-index order.
    pub fn from_function(dimension: usize, label: impl Fn(&[bool]) -> bool) -> Result<Self> {
        let records = (0..1usize << dimension)
            .map(|i| {
                let attributes: Vec<bool> = (0..dimension).map(|j| (i >> j) & 1 == 1).collect();
                let label = Some(label(&attributes));
                Record { attributes, label }
            })
            .collect();
        Self::new(dimension, records)
    }

    pub fn dimension(&self) -> usize {
        self.attribute_names.len()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.attribute_names
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn known(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.known())
    }

    pub fn unknown(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.known())
    }
}

fn parse_cell(cell: &str, row: usize, column: usize, allow_unknown: bool) -> Result<Option<bool>> {
    match cell.trim() {
        "0" => Ok(Some(false)),
        "1" => Ok(Some(true)),
        "?" if allow_unknown => Ok(None),
        other => Err(Error::ParseDataset {
            row,
            column,
            reason: format!(
                "expected 0 or 1{}, found {other:?}",
                if allow_unknown { " or ?" } else { "" }
            ),
        }),
    }
}

/// Parses CSV text: a header row whose last column is `label`, then one row
/// per record with `0`/`1` attributes and a `0`/`1`/`?` label.
///
/// Rows and columns in errors are 1-based; the header is row 1.
pub fn load_dataset(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::ParseDataset {
        row: 1,
        column: 0,
        reason: e.to_string(),
    })?;
    let columns: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
    match columns.last() {
        Some(last) if last == "label" => {}
        _ => {
            return Err(Error::ParseDataset {
                row: 1,
                column: columns.len(),
                reason: "last column must be named `label`".into(),
            })
        }
    }
    let n = columns.len() - 1;
    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::ParseDataset {
            row: line,
            column: 0,
            reason: e.to_string(),
        })?;
        if row.len() != n + 1 {
            return Err(Error::ParseDataset {
                row: line,
                column: row.len().min(n + 1),
                reason: format!("expected {} cells, found {}", n + 1, row.len()),
            });
        }
        let mut attributes = Vec::with_capacity(n);
        for (j, cell) in row.iter().take(n).enumerate() {
            attributes.push(parse_cell(cell, line, j + 1, false)?.expect("known cell"));
        }
        let label = parse_cell(&row[n], line, n + 1, true)?;
        records.push(Record { attributes, label });
    }
    Dataset::with_names(columns[..n].to_vec(), records)
}

/// Serializes a dataset in the format read by [`load_dataset`].
pub fn write_dataset(ds: &Dataset) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let bit = |b: bool| if b { "1" } else { "0" };
    let mut header: Vec<&str> = ds.attribute_names.iter().map(String::as_str).collect();
    header.push("label");
    writer.write_record(&header).expect("in-memory write");
    for r in &ds.records {
        let mut row: Vec<&str> = r.attributes.iter().map(|&b| bit(b)).collect();
        row.push(r.label.map_or("?", bit));
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_truth_table() {
        let mut text = String::from("a,b,c,label\n");
        for i in 0..8 {
            text.push_str(&format!(
                "{},{},{},{}\n",
                i & 1,
                (i >> 1) & 1,
                (i >> 2) & 1,
                (i >> 2) & 1
            ));
        }
        let ds = load_dataset(&text).unwrap();
        assert_eq!(ds.dimension(), 3);
        assert_eq!(ds.known().count(), 8);
        assert_eq!(ds.attribute_names(), ["a", "b", "c"]);
    }

    #[test]
    fn unknown_label() {
        let ds = load_dataset("x1,x2,label\n0,1,?\n").unwrap();
        assert_eq!(
            ds.records(),
            &[Record {
                attributes: vec![false, true],
                label: None
            }]
        );
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!(
            load_dataset("x1,x2,label\n0,1,1\n0,2,1\n"),
            Err(Error::ParseDataset {
                row: 3,
                column: 2,
                ..
            })
        ));
        assert!(matches!(
            load_dataset("x1,x2,label\n0,1\n"),
            Err(Error::ParseDataset { row: 2, .. })
        ));
        assert!(matches!(
            load_dataset("x1,?,label\n0,?,1\n"),
            Err(Error::ParseDataset {
                row: 2,
                column: 2,
                ..
            })
        ));
        assert!(matches!(
            load_dataset("x1,y\n0,1\n"),
            Err(Error::ParseDataset { row: 1, .. })
        ));
    }

    #[test]
    fn round_trip() {
        let ds = Dataset::new(
            2,
            vec![
                Record {
                    attributes: vec![true, false],
                    label: Some(true),
                },
                Record {
                    attributes: vec![false, false],
                    label: None,
                },
                Record {
                    attributes: vec![true, false],
                    label: Some(true),
                },
            ],
        )
        .unwrap();
        let again = load_dataset(&write_dataset(&ds)).unwrap();
        assert_eq!(again, ds);
    }
}
