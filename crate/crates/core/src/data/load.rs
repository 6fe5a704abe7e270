//! IDX and CSV readers.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::info::Label;

const IDX_IMAGES: u32 = 0x0000_0803;
const IDX_LABELS: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DataSource {
    /// Image and label files in IDX format; pixels are scaled by 1/255.
    Idx { images: PathBuf, labels: PathBuf },
    /// `label,v1,…,vd` rows with an optional header; values kept as read.
    Csv(PathBuf),
}

/// Samples with their original integer class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub vectors: Vec<Vec<f64>>,
    pub classes: Vec<i64>,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn format_err(format: &'static str, offset: usize, reason: impl Into<String>) -> Error {
    Error::Format {
        format,
        offset: offset as u64,
        reason: reason.into(),
    }
}

fn be_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| format_err("idx", at, "truncated header"))
}

/// `(dims, payload offset)` after checking the magic number.
fn idx_header(bytes: &[u8], magic: u32) -> Result<(Vec<usize>, usize)> {
    let found = be_u32(bytes, 0)?;
    if found != magic {
        return Err(format_err(
            "idx",
            0,
            format!("magic {found:#010x}, expected {magic:#010x}"),
        ));
    }
    let rank = (magic & 0xff) as usize;
    let dims = (0..rank)
        .map(|k| be_u32(bytes, 4 + 4 * k).map(|d| d as usize))
        .collect::<Result<Vec<_>>>()?;
    let start = 4 + 4 * rank;
    let expected = dims.iter().product::<usize>();
    if bytes.len() - start != expected {
        return Err(format_err(
            "idx",
            bytes.len().min(start + expected),
            format!("payload has {} bytes, header declares {expected}", bytes.len() - start),
        ));
    }
    Ok((dims, start))
}

/// Reads an image/label IDX pair; pixels scaled to `[0, 1]`.
pub fn read_idx(images: &Path, labels: &Path) -> Result<RawDataset> {
    let img = read(images)?;
    let lab = read(labels)?;
    let (dims, img_start) = idx_header(&img, IDX_IMAGES)?;
    let (ldims, lab_start) = idx_header(&lab, IDX_LABELS)?;
    if dims[0] != ldims[0] {
        return Err(format_err(
            "idx",
            4,
            format!("{} images but {} labels", dims[0], ldims[0]),
        ));
    }
    let pixels = dims[1] * dims[2];
    let vectors = img[img_start..]
        .chunks_exact(pixels.max(1))
        .take(dims[0])
        .map(|c| c.iter().map(|p| f64::from(*p) / 255.0).collect())
        .collect();
    let classes = lab[lab_start..].iter().map(|c| i64::from(*c)).collect();
    Ok(RawDataset { vectors, classes })
}

/// Reads `label,v1,…,vd` rows; a first line whose label is not an integer is a header.
pub fn read_csv(path: &Path) -> Result<RawDataset> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| format_err("csv", e.valid_up_to(), "invalid UTF-8"))?;
    let mut vectors = Vec::new();
    let mut classes = Vec::new();
    let mut offset = 0;
    let mut width = None;
    for (line_no, line) in text.split_inclusive('\n').enumerate() {
        let start = offset;
        offset += line.len();
        let row = line.trim_end_matches(['\n', '\r']);
        if row.trim().is_empty() {
            continue;
        }
        let mut fields = row.split(',');
        let label = fields.next().unwrap_or("").trim();
        let class = match label.parse::<i64>() {
            Ok(c) => c,
            Err(_) if line_no == 0 => continue,
            Err(_) => return Err(format_err("csv", start, format!("label `{label}` is not an integer"))),
        };
        let mut field_at = start + row.find(',').map_or(row.len(), |p| p + 1);
        let mut values = Vec::new();
        for f in fields {
            let v = f
                .trim()
                .parse::<f64>()
                .map_err(|_| format_err("csv", field_at, format!("value `{}` is not a number", f.trim())))?;
            values.push(v);
            field_at += f.len() + 1;
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(format_err(
                    "csv",
                    start,
                    format!("row has {} values, expected {w}", values.len()),
                ))
            }
            _ => {}
        }
        vectors.push(values);
        classes.push(class);
    }
    Ok(RawDataset { vectors, classes })
}

/// Loads a source and keeps two classes; `classes.0 → -1`, `classes.1 → +1`.
pub fn load_dataset(source: &DataSource, classes: (i64, i64)) -> Result<LabeledDataset> {
    let raw = match source {
        DataSource::Idx { images, labels } => read_idx(images, labels)?,
        DataSource::Csv(path) => read_csv(path)?,
    };
    if classes.0 == classes.1 {
        return Err(Error::invalid("the two classes must differ"));
    }
    let present: BTreeSet<i64> = raw.classes.iter().copied().collect();
    for c in [classes.0, classes.1] {
        if !present.contains(&c) {
            return Err(Error::UnknownClass(c));
        }
    }
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    for (v, c) in raw.vectors.into_iter().zip(raw.classes) {
        if c == classes.0 {
            labels.push(Label::Neg);
        } else if c == classes.1 {
            labels.push(Label::Pos);
        } else {
            continue;
        }
        vectors.push(v);
    }
    LabeledDataset::new(vectors, labels)
}
