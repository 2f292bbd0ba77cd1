//! On-disk store of error sequences, one file per content hash.
//!
//! A file is named after the SHA-256 of `(spec name, α, β, p, interval,
//! solver settings)` and repeats that hash on its first line. Numbers are
//! written with 17 significant digits, which round-trips every `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use once_cell::sync::Lazy;
use parking_lot::Mutex;
use sha2::{Digest, Sha256};

use crate::bestapprox::{Certificate, SolverSettings};
use crate::error::{Error, Result};
use crate::harness::{ErrorSequence, SequenceEntry};
use crate::weights::WeightParams;

const MAGIC: &str = "# jacobi-approx error sequence v1";

static WRITE_LOCK: Lazy<Mutex<()>> = Lazy::new(|| Mutex::new(()));

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Hex SHA-256 of the sequence identity.
pub fn cache_key(spec_name: &str, params: &WeightParams, interval: (f64, f64), settings: &SolverSettings) -> String {
    let text = format!(
        "{spec_name}|{}|{}|{}|{}|{}|{}",
        num(params.alpha()),
        num(params.beta()),
        num(params.p()),
        num(interval.0),
        num(interval.1),
        settings.fingerprint()
    );
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn cache_file(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.seq"))
}

pub fn serialize_sequence(seq: &ErrorSequence, key: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "key\t{key}");
    let _ = writeln!(s, "spec\t{}", seq.spec_name);
    let _ = writeln!(s, "params\t{}\t{}\t{}", num(seq.params.alpha()), num(seq.params.beta()), num(seq.params.p()));
    let _ = writeln!(s, "interval\t{}\t{}", num(seq.interval.0), num(seq.interval.1));
    for e in &seq.entries {
        let cert = e.certificate.map_or("failed", |c| c.as_str());
        let note = e.note.as_deref().map(|n| n.replace(['\t', '\n', '\r'], " "));
        let _ = writeln!(s, "{}\t{}\t{cert}\t{}\t{}", e.n, num(e.error), e.converged, note.unwrap_or_default());
    }
    s
}

fn bad(line: usize, what: &str) -> Error {
    Error::Io(format!("cache line {line}: {what}"))
}

fn field<'a>(parts: &[&'a str], i: usize, line: usize) -> Result<&'a str> {
    parts.get(i).copied().ok_or_else(|| bad(line, "missing field"))
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| bad(line, &format!("bad number `{s}`")))
}

/// Parses a cache file into its stored key and sequence.
pub fn parse_sequence(text: &str) -> Result<(String, ErrorSequence)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |tag: &str| -> Result<(usize, Vec<&str>)> {
        let (i, l) = lines.next().ok_or_else(|| bad(0, "truncated file"))?;
        let parts: Vec<&str> = l.split('\t').collect();
        if !tag.is_empty() && parts[0] != tag {
            return Err(bad(i, &format!("expected `{tag}`")));
        }
        Ok((i, parts))
    };
    let (i, magic) = next("")?;
    if magic.join("\t") != MAGIC {
        return Err(bad(i, "not an error-sequence file"));
    }
    let (i, k) = next("key")?;
    let key = field(&k, 1, i)?.to_string();
    let (i, sp) = next("spec")?;
    let spec_name = field(&sp, 1, i)?.to_string();
    let (i, pr) = next("params")?;
    let params = WeightParams::new(
        parse_f64(field(&pr, 1, i)?, i)?,
        parse_f64(field(&pr, 2, i)?, i)?,
        parse_f64(field(&pr, 3, i)?, i)?,
    )?;
    let (i, iv) = next("interval")?;
    let interval = (parse_f64(field(&iv, 1, i)?, i)?, parse_f64(field(&iv, 2, i)?, i)?);
    let mut entries = Vec::new();
    for (i, l) in lines {
        if l.is_empty() {
            continue;
        }
        let parts: Vec<&str> = l.splitn(5, '\t').collect();
        let n: usize = field(&parts, 0, i)?.parse().map_err(|_| bad(i, "bad n"))?;
        let error = parse_f64(field(&parts, 1, i)?, i)?;
        let cert = field(&parts, 2, i)?;
        let certificate = match cert {
            "failed" => None,
            c => Some(Certificate::parse(c).ok_or_else(|| bad(i, &format!("unknown certificate `{c}`")))?),
        };
        let converged = match field(&parts, 3, i)? {
            "true" => true,
            "false" => false,
            _ => return Err(bad(i, "bad converged flag")),
        };
        let note = parts.get(4).filter(|s| !s.is_empty()).map(|s| s.to_string());
        if entries.last().is_some_and(|e: &SequenceEntry| e.n >= n) {
            return Err(bad(i, "entries out of order"));
        }
        entries.push(SequenceEntry { n, error, certificate, converged, note });
    }
    Ok((key, ErrorSequence { spec_name, params, interval, entries }))
}

/// Loads a cached sequence. A missing file is a silent miss; an unreadable,
/// corrupt or mismatched file is a miss with a warning.
pub fn load_sequence(
    dir: &Path,
    spec_name: &str,
    params: &WeightParams,
    interval: (f64, f64),
    settings: &SolverSettings,
) -> Option<ErrorSequence> {
    let key = cache_key(spec_name, params, interval, settings);
    let path = cache_file(dir, &key);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
        Err(e) => {
            log::warn!("ignoring unreadable cache file {}: {e}", path.display());
            return None;
        }
    };
    match parse_sequence(&text) {
        Ok((stored, seq)) if stored == key && seq.spec_name == spec_name => Some(seq),
        Ok(_) => {
            log::warn!("ignoring cache file {} with a mismatched key", path.display());
            None
        }
        Err(e) => {
            log::warn!("ignoring corrupt cache file {}: {e}", path.display());
            None
        }
    }
}

/// Writes `seq`, merged with any entries already stored under its key
/// (new entries win). Writes go through a temporary file and a rename.
pub fn store_sequence(dir: &Path, seq: &ErrorSequence, settings: &SolverSettings) -> Result<PathBuf> {
    let _guard = WRITE_LOCK.lock();
    fs::create_dir_all(dir)?;
    let key = cache_key(&seq.spec_name, &seq.params, seq.interval, settings);
    let mut merged = seq.clone();
    if let Some(old) = load_sequence(dir, &seq.spec_name, &seq.params, seq.interval, settings) {
        for e in old.entries {
            if merged.get(e.n).is_none() {
                merged.entries.push(e);
            }
        }
        merged.entries.sort_by_key(|e| e.n);
    }
    let path = cache_file(dir, &key);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, serialize_sequence(&merged, &key))?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}
