use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_core::{make_field, Space};
use crate::resultant::PointSet;

/// `{"p":3,"n":2,"d":2,"elements":[[e00,e01],...]}`; several sets go under `"sets"`.
/// Entries are field elements in the integer encoding of their base-`p` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    pub p: u32,
    pub n: u32,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<Vec<u64>>>>,
}

impl SetFile {
    pub fn from_sets(sets: &[PointSet]) -> Result<SetFile> {
        let space = crate::resultant::common_space(sets)?;
        let f = space.field();
        let rows = |e: &PointSet| -> Vec<Vec<u64>> {
            e.vectors().iter().map(|v| v.iter().map(|&c| c as u64).collect()).collect()
        };
        let (elements, sets) = match sets {
            [one] => (Some(rows(one)), None),
            many => (None, Some(many.iter().map(rows).collect())),
        };
        Ok(SetFile {
            p: f.p(),
            n: f.n(),
            d: space.dim(),
            elements,
            sets,
        })
    }

    pub fn into_sets(self) -> Result<(Space, Vec<PointSet>)> {
        let field = make_field(self.p, self.n).map_err(|e| Error::ConfigInvalid(format!("set file field: {e}")))?;
        let space = Space::new(&field, self.d)?;
        let lists = match (self.elements, self.sets) {
            (Some(e), None) => vec![e],
            (None, Some(s)) if !s.is_empty() => s,
            _ => {
                return Err(Error::ConfigInvalid(
                    "set file needs exactly one of \"elements\" or a nonempty \"sets\"".into(),
                ))
            }
        };
        let sets = lists
            .iter()
            .map(|rows| {
                let vecs = rows
                    .iter()
                    .map(|row| {
                        if row.len() != self.d {
                            return Err(Error::DimensionMismatch(format!(
                                "element of length {} in dimension {}",
                                row.len(),
                                self.d
                            )));
                        }
                        row.iter().map(|&c| field.check(c)).collect::<Result<Vec<u32>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                PointSet::from_vectors(&space, &vecs)
            })
            .collect::<Result<_>>()?;
        Ok((space, sets))
    }
}

pub fn read_set_file(path: &Path) -> Result<(Space, Vec<PointSet>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
    let file: SetFile = serde_json::from_str(&text).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
    file.into_sets()
}

pub fn write_set_file(path: &Path, sets: &[PointSet]) -> Result<()> {
    let file = SetFile::from_sets(sets)?;
    fs::write(path, serde_json::to_string(&file)?)?;
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

/// Rows as CSV with a header.
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Writes rows as CSV; returns the bytes written.
pub fn write_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<Vec<u8>> {
    let bytes = csv_bytes(rows)?;
    emit(path, &bytes)?;
    Ok(bytes)
}

pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit(path, &bytes)?;
    Ok(bytes)
}
