use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::{Error, Result};

/// Append-only, line-oriented control file shared between workers.
#[derive(Debug)]
pub struct ControlList {
    path: PathBuf,
    sink: Mutex<BufWriter<File>>,
}

impl ControlList {
    /// Creates (truncating) the list at `path`.
    pub fn create(path: &Path) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(Self {
            path: path.to_path_buf(),
            sink: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn append(&self, line: &str) -> Result<()> {
        let mut sink = self.sink.lock().expect("control list lock poisoned");
        writeln!(sink, "{line}").map_err(|e| Error::io(&self.path, e))
    }

    pub fn flush(&self) -> Result<()> {
        let mut sink = self.sink.lock().expect("control list lock poisoned");
        sink.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl Drop for ControlList {
    fn drop(&mut self) {
        if let Ok(sink) = self.sink.get_mut() {
            let _ = sink.flush();
        }
    }
}
