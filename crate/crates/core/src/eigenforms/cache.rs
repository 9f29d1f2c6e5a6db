//! Text cache for tau tables.
//!
//! ```text
//! TAUCACHE v1 <n_max>
//! tau(1)
//! ...
//! tau(n_max)
//! CRC32 <8 hex digits over every preceding byte>
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::tau::TauTable;

const MAGIC: &str = "TAUCACHE";
const VERSION: &str = "v1";

pub fn encode_table(table: &TauTable) -> String {
    let mut body = String::with_capacity(table.values().len() * 24 + 32);
    let _ = writeln!(body, "{MAGIC} {VERSION} {}", table.n_max());
    for t in table.values() {
        let _ = writeln!(body, "{t}");
    }
    let crc = crc32fast::hash(body.as_bytes());
    let _ = writeln!(body, "CRC32 {crc:08x}");
    body
}

pub fn save_table(table: &TauTable, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    // write-then-rename so an interrupted save never leaves a truncated cache
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode_table(table)).map_err(|source| Error::Io {
        path: tmp.clone(),
        source,
    })?;
    fs::rename(&tmp, path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_table(path: &Path) -> Result<TauTable> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_table(&text, path)
}

pub fn decode_table(text: &str, path: &Path) -> Result<TauTable> {
    let err = |line: usize, msg: String| Error::Format {
        path: path.to_path_buf(),
        line,
        msg,
    };

    let mut lines = text.split_inclusive('\n').enumerate();
    let mut consumed = 0usize;

    let (_, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    consumed += header.len();
    let fields: Vec<&str> = header.trim_end().split(' ').collect();
    if fields.first() != Some(&MAGIC) {
        return Err(err(1, format!("bad magic, expected `{MAGIC}`")));
    }
    if fields.get(1) != Some(&VERSION) || fields.len() != 3 {
        return Err(err(1, format!("unsupported header `{}`", header.trim_end())));
    }
    let n_max: usize = fields[2]
        .parse()
        .map_err(|_| err(1, format!("bad n_max `{}`", fields[2])))?;

    let mut values = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let (i, line) = lines
            .next()
            .ok_or_else(|| err(values.len() + 2, "truncated: missing tau values".into()))?;
        if !line.ends_with('\n') {
            return Err(err(i + 1, "truncated line".into()));
        }
        let v: i128 = line
            .trim_end()
            .parse()
            .map_err(|_| err(i + 1, format!("not an integer: `{}`", line.trim_end())))?;
        values.push(v);
        consumed += line.len();
    }

    let (i, trailer) = lines
        .next()
        .ok_or_else(|| err(n_max + 2, "truncated: missing CRC32 line".into()))?;
    let hex = trailer
        .trim_end()
        .strip_prefix("CRC32 ")
        .ok_or_else(|| err(i + 1, "expected `CRC32 <hex>`".into()))?;
    let want = u32::from_str_radix(hex, 16).map_err(|_| err(i + 1, format!("bad checksum `{hex}`")))?;
    let got = crc32fast::hash(&text.as_bytes()[..consumed]);
    if got != want {
        return Err(err(i + 1, format!("checksum mismatch: file says {want:08x}, content hashes to {got:08x}")));
    }
    if let Some((j, _)) = lines.next() {
        return Err(err(j + 1, "trailing data after checksum".into()));
    }
    Ok(TauTable::from_values(values))
}
