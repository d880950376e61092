use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(path: &Path) -> Result<Self> {
        fs::create_dir_all(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(OutDir(path.to_owned()))
    }

    fn file(&self, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
        let path = self.0.join(name);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        Ok((path, BufWriter::new(f)))
    }

    pub fn csv<T: Serialize>(&self, name: &str, header: &[&str], rows: &[T]) -> Result<()> {
        let (path, w) = self.file(name)?;
        lcadc_core::report::write_csv_with_header(w, header, rows)
            .with_context(|| format!("writing {}", path.display()))
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        let path = self.0.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}

/// Writes `text` and a newline to stdout. A closed pipe (`lcadc ... | head`) is not an error.
pub fn print_text(text: &str) -> Result<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    print_text(&serde_json::to_string_pretty(value)?)
}
