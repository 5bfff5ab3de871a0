//! OEIS "stripped" files and offset-tolerant sequence matching.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_MIN_OVERLAP: usize = 7;
pub const DEFAULT_MAX_SHIFT: usize = 4;
pub const ENV_OEIS: &str = "POPLAB_OEIS";

const BUNDLED: &str = include_str!("../data/oeis_fixture.txt");

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("file starts with a UTF-8 byte order mark")]
    Bom,
    #[error("no valid sequence lines")]
    Empty,
    #[error("{given} terms supplied, at least {needed} needed")]
    TooFewTerms { given: usize, needed: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OeisDb {
    seqs: BTreeMap<String, Vec<BigInt>>,
}

/// A parsed database plus the lines that were skipped, by line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub db: OeisDb,
    pub warnings: Vec<String>,
}

/// `shift` is the index in the OEIS data where the first compared term
/// lands, after dropping `skipped` of our leading terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Match {
    pub a_number: String,
    pub shift: usize,
    pub skipped: usize,
    pub overlap: usize,
}

fn is_a_number(s: &str) -> bool {
    s.len() == 7 && s.starts_with('A') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

fn parse_line(line: &str) -> Result<(String, Vec<BigInt>), String> {
    let (id, rest) = line.split_once(' ').ok_or("missing space after the A-number")?;
    if !is_a_number(id) {
        return Err(format!("bad A-number {id:?}"));
    }
    let rest = rest.strip_prefix(',').ok_or("terms must start with ','")?;
    let rest = rest.strip_suffix(',').unwrap_or(rest);
    if rest.is_empty() {
        return Err("no terms".into());
    }
    let terms = rest
        .split(',')
        .map(|t| t.parse::<BigInt>().map_err(|_| format!("bad term {t:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((id.to_string(), terms))
}

impl OeisDb {
    /// Parses stripped-format text: `#` comments, data lines
    /// `Annnnnn ,t1,t2,...,`, LF or CRLF line ends.
    pub fn parse(text: &str) -> Result<Loaded, OeisError> {
        if text.starts_with('\u{feff}') {
            return Err(OeisError::Bom);
        }
        let mut seqs = BTreeMap::new();
        let mut warnings = Vec::new();
        for (i, raw) in text.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_line(line) {
                Ok((id, terms)) => match seqs.entry(id) {
                    Entry::Occupied(e) => warnings.push(format!("line {}: duplicate {}, first kept", i + 1, e.key())),
                    Entry::Vacant(e) => {
                        e.insert(terms);
                    }
                },
                Err(e) => warnings.push(format!("line {}: {e}", i + 1)),
            }
        }
        if seqs.is_empty() {
            return Err(OeisError::Empty);
        }
        Ok(Loaded { db: OeisDb { seqs }, warnings })
    }

    pub fn load_stripped(path: &Path) -> Result<Loaded, OeisError> {
        let text = std::fs::read_to_string(path).map_err(|source| OeisError::Io { path: path.to_path_buf(), source })?;
        OeisDb::parse(&text)
    }

    /// The fixture compiled into the crate.
    pub fn bundled() -> OeisDb {
        OeisDb::parse(BUNDLED).expect("bundled fixture parses").db
    }

    /// An explicit path, else `$POPLAB_OEIS`, else the bundled fixture.
    pub fn resolve(path: Option<&Path>) -> Result<Loaded, OeisError> {
        match path.map(Path::to_path_buf).or_else(|| std::env::var_os(ENV_OEIS).map(PathBuf::from)) {
            Some(p) => OeisDb::load_stripped(&p),
            None => Ok(Loaded { db: OeisDb::bundled(), warnings: Vec::new() }),
        }
    }

    pub fn get(&self, a_number: &str) -> Option<&[BigInt]> {
        self.seqs.get(a_number).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn a_numbers(&self) -> impl Iterator<Item = &str> {
        self.seqs.keys().map(String::as_str)
    }

    /// Every sequence containing our terms (from `n = 1`) as a contiguous
    /// block, after dropping at most `max_shift` of our leading terms and
    /// starting at most `max_shift` into the OEIS data, with at least
    /// `min_overlap` equal terms. One match per A-number, the smallest
    /// `(shift, skipped)`; sorted by `(shift, A-number)`.
    pub fn match_sequence(&self, terms: &[BigUint], min_overlap: usize, max_shift: usize) -> Result<Vec<Match>, OeisError> {
        if terms.len() < min_overlap {
            return Err(OeisError::TooFewTerms { given: terms.len(), needed: min_overlap });
        }
        let ours: Vec<BigInt> = terms.iter().cloned().map(BigInt::from).collect();
        let mut out = Vec::new();
        for (id, data) in &self.seqs {
            let mut best: Option<Match> = None;
            for shift in 0..=max_shift.min(data.len()) {
                for skipped in 0..=max_shift.min(ours.len()) {
                    let overlap = (ours.len() - skipped).min(data.len() - shift);
                    if overlap < min_overlap || overlap == 0 {
                        continue;
                    }
                    if ours[skipped..skipped + overlap] == data[shift..shift + overlap] {
                        let m = Match { a_number: id.clone(), shift, skipped, overlap };
                        if best.as_ref().is_none_or(|b| (shift, skipped) < (b.shift, b.skipped)) {
                            best = Some(m);
                        }
                    }
                }
            }
            out.extend(best);
        }
        out.sort_by(|a, b| (a.shift, &a.a_number).cmp(&(b.shift, &b.a_number)));
        Ok(out)
    }
}
