use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::Dataset;
use crate::error::{Result, SmuError};
use crate::tensor::Tensor2D;

/// Writes `label,f0,f1,...` with one sample per row, LF line endings.
///
/// Reals are written in shortest round-trip form, so [`load_csv`] reproduces them exactly.
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "label")?;
    for j in 0..dataset.feature_dim() {
        write!(out, ",f{j}")?;
    }
    writeln!(out)?;
    for (i, label) in dataset.labels.iter().enumerate() {
        write!(out, "{label}")?;
        for v in dataset.features.row(i) {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a headed CSV; `label_column` names the class column, every other column is a feature.
///
/// Labels must be non-negative integers; `class_count` is `max label + 1`.
pub fn load_csv(path: impl AsRef<Path>, label_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())
        .map_err(|e| csv_error(e, 1))?;
    let headers = reader.headers().map_err(|e| csv_error(e, 1))?.clone();
    let label_idx = headers.iter().position(|h| h == label_column).ok_or_else(|| {
        SmuError::InvalidArgument(format!(
            "label column '{label_column}' not found (columns: {})",
            headers.iter().collect::<Vec<_>>().join(",")
        ))
    })?;
    let dim = headers.len() - 1;

    let mut data = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            csv_error(e, line)
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(SmuError::Parse {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.parse().map_err(|_| SmuError::Parse {
                line,
                message: format!("column '{}': '{field}' is not a number", &headers[j]),
            })?;
            if !value.is_finite() {
                return Err(SmuError::Parse { line, message: format!("column '{}': non-finite value", &headers[j]) });
            }
            if j == label_idx {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(SmuError::Parse {
                        line,
                        message: format!("label '{field}' is not a non-negative integer"),
                    });
                }
                labels.push(value as usize);
            } else {
                data.push(value);
            }
        }
    }
    if labels.is_empty() {
        return Err(SmuError::InvalidArgument("CSV contains no samples".into()));
    }
    let class_count = labels.iter().max().map_or(0, |m| m + 1);
    let features = Tensor2D::from_vec(labels.len(), dim, data)?;
    Dataset::new(features, labels, class_count)
}

fn csv_error(e: csv::Error, line: usize) -> SmuError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => SmuError::Io(io),
        other => SmuError::Parse { line, message: format!("{other:?}") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::{make_two_moons, split};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("moons.csv");
        let ds = make_two_moons(57, 0.1, 4).unwrap();
        write_csv(&ds, &path).unwrap();
        let back = load_csv(&path, "label").unwrap();
        assert_eq!(back.features, ds.features);
        assert_eq!(back.labels, ds.labels);
        assert_eq!(back.class_count, 2);
        assert_eq!(split(back, 0.2, 4).unwrap(), ds);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("label,f0,f1\n"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn malformed_row_names_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "label,f0\n0,1.5\n1,abc\n").unwrap();
        match load_csv(&path, "label") {
            Err(SmuError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        std::fs::write(&path, "label,f0\n0,1.5\n1\n").unwrap();
        match load_csv(&path, "label") {
            Err(SmuError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        std::fs::write(&path, "label,f0\n0.5,1.5\n").unwrap();
        assert!(matches!(load_csv(&path, "label"), Err(SmuError::Parse { line: 2, .. })));
    }

    #[test]
    fn unknown_label_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        std::fs::write(&path, "y,a,b\n1,0.5,2\n0,1,1\n").unwrap();
        assert!(matches!(load_csv(&path, "label"), Err(SmuError::InvalidArgument(_))));
        let ds = load_csv(&path, "y").unwrap();
        assert_eq!(ds.feature_dim(), 2);
        assert_eq!(ds.labels, vec![1, 0]);
    }
}
