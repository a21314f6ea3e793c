//! One text file per prime holding its trace histogram.
//!
//! ```text
//! p 5 V 20
//! -4 2
//! -3 2
//! ...
//! ```
//!
//! The header is followed by one `<t> <count>` line per nonzero bucket in
//! ascending `t`, each line terminated by `\n`. Identical histograms always
//! serialize to identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::curve_family::{family_histogram_with, FamilyParams, ScanStrategy, TraceHistogram};
use crate::error::{Error, Result};

pub fn cache_path(dir: &Path, p: u64) -> PathBuf {
    dir.join(format!("traces_p{p}.txt"))
}

pub fn to_cache_string(hist: &TraceHistogram) -> String {
    let mut out = format!("p {} V {}\n", hist.p(), hist.v_p());
    for (t, c) in hist.buckets() {
        writeln!(out, "{t} {c}").unwrap();
    }
    out
}

/// Parses and fully validates cache text. `path` is only used in errors.
pub fn parse_cache(text: &str, path: &Path) -> Result<TraceHistogram> {
    let corrupt = |reason: String| Error::CorruptCache {
        path: path.to_path_buf(),
        reason,
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (p, v) = match fields.as_slice() {
        ["p", p, "V", v] => (
            p.parse::<u64>().map_err(|e| corrupt(format!("bad prime: {e}")))?,
            v.parse::<u64>().map_err(|e| corrupt(format!("bad V: {e}")))?,
        ),
        _ => return Err(corrupt(format!("bad header {header:?}"))),
    };
    let params = FamilyParams::new(p).map_err(|e| corrupt(e.to_string()))?;
    if params.v_p() != v {
        return Err(corrupt(format!("header V = {v} but p(p-1) = {}", params.v_p())));
    }
    let mut counts = BTreeMap::new();
    let mut last = None;
    for line in lines {
        let (t, c) = line
            .split_once(' ')
            .ok_or_else(|| corrupt(format!("bad bucket line {line:?}")))?;
        let t: i64 = t.parse().map_err(|e| corrupt(format!("bad trace {t:?}: {e}")))?;
        let c: u64 = c.parse().map_err(|e| corrupt(format!("bad count {c:?}: {e}")))?;
        if last.is_some_and(|prev| prev >= t) {
            return Err(corrupt(format!("buckets not strictly ascending at t = {t}")));
        }
        if c == 0 {
            return Err(corrupt(format!("zero bucket at t = {t}")));
        }
        last = Some(t);
        counts.insert(t, c);
    }
    TraceHistogram::from_counts(params, counts).map_err(|e| corrupt(e.to_string()))
}

pub fn read_cache(path: &Path) -> Result<TraceHistogram> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_cache(&text, path)
}

/// Writes through a temporary file and a rename so readers never observe a
/// half-written cache.
pub fn write_cache(dir: &Path, hist: &TraceHistogram) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = cache_path(dir, hist.p());
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, to_cache_string(hist)).map_err(io(&tmp))?;
    fs::rename(&tmp, &path).map_err(io(&path))?;
    Ok(path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Cached,
    Computed,
    /// The cache was unreadable or invalid and has been recomputed.
    Recomputed,
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub hist: TraceHistogram,
    pub provenance: Provenance,
    /// Error from writing the cache, if any; the histogram is still valid.
    pub write_error: Option<String>,
}

/// Loads the histogram for `p` from `dir`, computing and persisting it when
/// the cache is missing or invalid.
pub fn load_or_compute(dir: &Path, p: u64, strategy: ScanStrategy) -> Result<Loaded> {
    FamilyParams::new(p)?;
    let path = cache_path(dir, p);
    let provenance = match read_cache(&path) {
        Ok(hist) if hist.p() == p => {
            return Ok(Loaded {
                hist,
                provenance: Provenance::Cached,
                write_error: None,
            })
        }
        Ok(_) => Provenance::Recomputed,
        Err(Error::Io { source, .. }) if source.kind() == std::io::ErrorKind::NotFound => {
            Provenance::Computed
        }
        Err(_) => Provenance::Recomputed,
    };
    let hist = family_histogram_with(p, strategy)?;
    let write_error = write_cache(dir, &hist).err().map(|e| e.to_string());
    Ok(Loaded {
        hist,
        provenance,
        write_error,
    })
}

/// Cache-only lookup.
pub fn load_cached(dir: &Path, p: u64) -> Result<TraceHistogram> {
    let hist = read_cache(&cache_path(dir, p))?;
    if hist.p() != p {
        return Err(Error::CorruptCache {
            path: cache_path(dir, p),
            reason: format!("file holds p = {}", hist.p()),
        });
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_family::family_histogram;

    #[test]
    fn round_trip_and_format() {
        let hist = family_histogram(5).unwrap();
        let text = to_cache_string(&hist);
        assert!(text.starts_with("p 5 V 20\n"));
        assert!(text.ends_with('\n'));
        let back = parse_cache(&text, Path::new("mem")).unwrap();
        assert_eq!(back, hist);
        assert_eq!(to_cache_string(&back), text);
    }

    #[test]
    fn rejects_corruption() {
        let good = to_cache_string(&family_histogram(7).unwrap());
        let mem = Path::new("mem");
        assert!(parse_cache("", mem).is_err());
        assert!(parse_cache("q 7 V 42\n", mem).is_err());
        assert!(parse_cache(&good.replace("V 42", "V 41"), mem).is_err());
        assert!(parse_cache(&good.replace("p 7", "p 9"), mem).is_err());
        // drop one bucket: total mismatch
        let truncated: String = good.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(parse_cache(&truncated, mem).is_err());
        assert!(parse_cache(&format!("{good}oops\n"), mem).is_err());
    }

    #[test]
    fn recomputes_invalid_cache() {
        let dir = tempfile::tempdir().unwrap();
        let first = load_or_compute(dir.path(), 11, ScanStrategy::Direct).unwrap();
        assert_eq!(first.provenance, Provenance::Computed);
        let second = load_or_compute(dir.path(), 11, ScanStrategy::Direct).unwrap();
        assert_eq!(second.provenance, Provenance::Cached);
        assert_eq!(first.hist, second.hist);

        fs::write(cache_path(dir.path(), 11), "p 11 V 110\n0 100\n").unwrap();
        let third = load_or_compute(dir.path(), 11, ScanStrategy::Direct).unwrap();
        assert_eq!(third.provenance, Provenance::Recomputed);
        assert_eq!(third.hist, first.hist);
        assert_eq!(load_cached(dir.path(), 11).unwrap(), first.hist);
    }

    #[test]
    fn missing_cache_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_cached(dir.path(), 13), Err(Error::Io { .. })));
    }
}
