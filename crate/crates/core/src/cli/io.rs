//! Input files: matrices as `{"rows", "cols", "data"}` objects, complex
//! entries as `[re, im]`.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::Value;

use crate::numcore::{CMatrix, RMatrix};

use super::CliError;

/// JSON document with its file name attached to every diagnostic.
pub struct InputFile {
    path: PathBuf,
    root: Value,
}

impl InputFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input {
            file: path.display().to_string(),
            field: "<file>".into(),
            message: e.to_string(),
        })?;
        let root = serde_json::from_str(&text).map_err(|e| CliError::Input {
            file: path.display().to_string(),
            field: "<document>".into(),
            message: format!("not valid JSON: {e}"),
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            root,
        })
    }

    pub fn error(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Input {
            file: self.path.display().to_string(),
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn root(&self) -> &Value {
        &self.root
    }

    pub fn field<'a>(&self, obj: &'a Value, path: &str, key: &str) -> Result<&'a Value, CliError> {
        obj.get(key)
            .ok_or_else(|| self.error(&join(path, key), "missing field"))
    }

    /// Real matrix at `value` (named `path` in diagnostics).
    pub fn real_matrix(&self, value: &Value, path: &str) -> Result<RMatrix, CliError> {
        let (rows, cols, data) = self.shape(value, path)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let at = format!("{}[{i}][{j}]", join(path, "data"));
                entries.push(self.number(v, &at)?);
            }
        }
        RMatrix::from_vec(rows, cols, entries).map_err(|e| self.error(path, e.to_string()))
    }

    /// Complex matrix at `value`; entries `[re, im]` (plain numbers are real).
    pub fn complex_matrix(&self, value: &Value, path: &str) -> Result<CMatrix, CliError> {
        let (rows, cols, data) = self.shape(value, path)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for (i, row) in data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let at = format!("{}[{i}][{j}]", join(path, "data"));
                let z = match v {
                    Value::Array(pair) if pair.len() == 2 => {
                        Complex64::new(self.number(&pair[0], &at)?, self.number(&pair[1], &at)?)
                    }
                    Value::Number(_) => Complex64::new(self.number(v, &at)?, 0.0),
                    _ => return Err(self.error(&at, "expected [re, im]")),
                };
                entries.push(z);
            }
        }
        CMatrix::from_vec(rows, cols, entries).map_err(|e| self.error(path, e.to_string()))
    }

    fn shape<'a>(
        &self,
        value: &'a Value,
        path: &str,
    ) -> Result<(usize, usize, Vec<&'a Vec<Value>>), CliError> {
        if !value.is_object() {
            return Err(self.error(path, "expected a matrix object with rows, cols, data"));
        }
        let dim = |key: &str| -> Result<usize, CliError> {
            self.field(value, path, key)?
                .as_u64()
                .filter(|&d| d > 0)
                .map(|d| d as usize)
                .ok_or_else(|| self.error(&join(path, key), "expected a positive integer"))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let data_path = join(path, "data");
        let data = self
            .field(value, path, "data")?
            .as_array()
            .ok_or_else(|| self.error(&data_path, "expected an array of rows"))?;
        if data.len() != rows {
            return Err(self.error(
                &data_path,
                format!("{} rows, header says {rows}", data.len()),
            ));
        }
        let mut out = Vec::with_capacity(rows);
        for (i, row) in data.iter().enumerate() {
            let at = format!("{data_path}[{i}]");
            let row = row
                .as_array()
                .ok_or_else(|| self.error(&at, "expected an array"))?;
            if row.len() != cols {
                return Err(self.error(&at, format!("{} entries, header says {cols}", row.len())));
            }
            out.push(row);
        }
        Ok((rows, cols, out))
    }

    fn number(&self, v: &Value, at: &str) -> Result<f64, CliError> {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.error(at, "expected a finite number"))
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Matrices from `{"matrices": [..]}` or a bare array.
pub fn load_matrices(path: &Path) -> Result<Vec<RMatrix>, CliError> {
    let file = InputFile::load(path)?;
    let (list, prefix) = match file.root() {
        Value::Array(a) => (a, String::new()),
        Value::Object(_) => {
            let v = file.field(file.root(), "", "matrices")?;
            let a = v
                .as_array()
                .ok_or_else(|| file.error("matrices", "expected an array of matrices"))?;
            (a, "matrices".to_string())
        }
        _ => return Err(file.error("<document>", "expected an object or an array")),
    };
    list.iter()
        .enumerate()
        .map(|(i, v)| file.real_matrix(v, &format!("{prefix}[{i}]")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn field_of(err: CliError) -> String {
        match err {
            CliError::Input { field, .. } => field,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reads_matrices() {
        let f = write(r#"{"matrices": [{"rows": 2, "cols": 2, "data": [[1, 2], [3, 4.5]]}]}"#);
        let ms = load_matrices(f.path()).unwrap();
        assert_eq!(ms[0], RMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.5]]));
        let f = write(r#"[{"rows": 1, "cols": 1, "data": [[7]]}]"#);
        assert_eq!(load_matrices(f.path()).unwrap()[0][(0, 0)], 7.0);
    }

    #[test]
    fn reads_complex_entries() {
        let f = write(r#"{"rows": 1, "cols": 2, "data": [[[1, -2], 3]]}"#);
        let file = InputFile::load(f.path()).unwrap();
        let m = file.complex_matrix(file.root(), "A").unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, -2.0));
        assert_eq!(m[(0, 1)], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let f = write(r#"{"matrices": [{"rows": 2, "cols": 2, "data": [[1, 2], [3, "x"]]}]}"#);
        assert_eq!(
            field_of(load_matrices(f.path()).unwrap_err()),
            "matrices[0].data[1][1]"
        );
        let f = write(r#"{"matrices": [{"rows": 2, "cols": 2, "data": [[1, 2]]}]}"#);
        assert_eq!(
            field_of(load_matrices(f.path()).unwrap_err()),
            "matrices[0].data"
        );
        let f = write(r#"{"matrices": [{"cols": 2, "data": []}]}"#);
        assert_eq!(
            field_of(load_matrices(f.path()).unwrap_err()),
            "matrices[0].rows"
        );
        let f = write("{ nope");
        assert_eq!(field_of(load_matrices(f.path()).unwrap_err()), "<document>");
        assert_eq!(
            field_of(load_matrices(Path::new("/nonexistent/m.json")).unwrap_err()),
            "<file>"
        );
    }
}
