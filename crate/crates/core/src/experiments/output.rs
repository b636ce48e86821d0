use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::numerics::io::write_field_csv;
use crate::numerics::ScalarField;

/// Writes result files into one directory and remembers their names.
pub struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path) -> Self {
        Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn register(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    /// A table with a header row; numbers are written in `{:e}` form.
    pub fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let path = self.register(name);
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn field(&mut self, name: &str, field: &ScalarField) -> Result<()> {
        let path = self.register(name);
        write_field_csv(&path, field)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.register(name);
        super::write_json(&path, value)
    }

    pub fn into_files(self) -> Vec<String> {
        self.files
    }
}
