//! Reference knot table: names, crossing numbers, planar diagram codes, and a
//! fingerprint index for identification.

use crate::invariants::{fingerprint, parse_pd, DiagramCode, Fingerprint};
use crate::Error;
use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct KnotRecord {
    pub name: String,
    pub crossings: u32,
    pub code: DiagramCode,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, Default)]
pub struct KnotTable {
    pub records: Vec<KnotRecord>,
    index: HashMap<Fingerprint, Vec<String>>,
}

impl KnotTable {
    /// All table names whose fingerprint matches; empty means "not in table".
    pub fn identify(&self, fp: &Fingerprint) -> Vec<String> {
        self.index.get(fp).cloned().unwrap_or_default()
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Identify a concrete diagram. Fingerprint lookup first; ties are broken
    /// by successively stronger (and costlier) checks: the crossing-number
    /// lower bound (a knot needs at least its crossing number of crossings in
    /// any diagram), HOMFLY, |signature|, and finally the Kauffman
    /// two-variable polynomial, which separates every fingerprint tie in the
    /// built-in table.
    pub fn identify_code(&self, code: &DiagramCode, fp: &Fingerprint) -> Vec<String> {
        use crate::invariants as inv;
        let mut names = self.identify(fp);
        if names.len() > 1 {
            let k = code.k() as u32;
            names.retain(|n| self.get(n).unwrap().crossings <= k);
        }
        if names.len() > 1 {
            let h = inv::homfly_canonical(code);
            names.retain(|n| inv::homfly_canonical(&self.get(n).unwrap().code) == h);
        }
        if names.len() > 1 {
            if let Ok(s) = inv::signature_abs(code) {
                names.retain(|n| {
                    inv::signature_abs(&self.get(n).unwrap().code).map_or(true, |v| v == s)
                });
            }
        }
        if names.len() > 1 {
            let f = inv::kauffman_canonical(code);
            names.retain(|n| inv::kauffman_canonical(&self.get(n).unwrap().code) == f);
        }
        names
    }

    /// Fingerprints shared by more than one name.
    pub fn collisions(&self) -> Vec<(Fingerprint, Vec<String>)> {
        let mut out: Vec<_> =
            self.index.iter().filter(|(_, v)| v.len() > 1).map(|(k, v)| (k.clone(), v.clone())).collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Load "name,crossings,planar-code" rows; '#' lines are comments.
pub fn load_table(text: &str) -> Result<KnotTable, Error> {
    let mut records = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (name, crossings, code_text) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(c)) => (a.trim(), b.trim(), c.trim()),
            _ => return Err(Error::Parse(format!("line {}: expected 3 fields", ln + 1))),
        };
        let crossings: u32 = crossings
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad crossing number", ln + 1)))?;
        let code = parse_pd(code_text)
            .map_err(|e| Error::Parse(format!("line {} ({name}): {e}", ln + 1)))?;
        if code.k() as u32 != crossings {
            return Err(Error::Parse(format!(
                "line {} ({name}): code has {} crossings, expected {crossings}",
                ln + 1,
                code.k()
            )));
        }
        let fp = fingerprint(&code)?;
        records.push(KnotRecord { name: name.to_string(), crossings, code, fingerprint: fp });
    }
    let mut index: HashMap<Fingerprint, Vec<String>> = HashMap::new();
    for r in &records {
        index.entry(r.fingerprint.clone()).or_default().push(r.name.clone());
    }
    for names in index.values_mut() {
        names.sort();
        names.dedup();
    }
    Ok(KnotTable { records, index })
}

pub fn load_table_file(path: &Path) -> Result<KnotTable, Error> {
    load_table(&std::fs::read_to_string(path)?)
}

/// The table shipped with the crate: the unknot, all prime knots with at most 10
/// crossings plus the named 11-13 crossing knots used by the 7-mosaic survey.
pub fn builtin_table() -> KnotTable {
    static TABLE: std::sync::OnceLock<KnotTable> = std::sync::OnceLock::new();
    TABLE
        .get_or_init(|| {
            load_table(include_str!("../data/knots.csv")).expect("shipped table is well-formed")
        })
        .clone()
}

/// Parse the exclusion list: one knot name per line, '#' comments.
pub fn load_exclusions(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// The shipped exclusion list: knots with 9 or more crossings already known
/// to fit a 6-mosaic with at most 27 tiles.
pub fn builtin_exclusions() -> Vec<String> {
    load_exclusions(include_str!("../data/exclude.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_row() {
        let t = load_table("3_1,3,[[1 5 2 4][3 1 4 6][5 3 6 2]]").unwrap();
        assert_eq!(t.len(), 1);
        let r = t.get("3_1").unwrap();
        assert_eq!(r.fingerprint.determinant, 3);
        assert_eq!(t.identify(&r.fingerprint), vec!["3_1"]);
    }

    #[test]
    fn empty_and_malformed() {
        assert!(load_table("").unwrap().is_empty());
        assert!(load_table("3_1,3").is_err());
        // edge label appearing once
        assert!(load_table("x,1,[[1 2 2 3]]").is_err());
        assert!(load_table("3_1,4,[[1 5 2 4][3 1 4 6][5 3 6 2]]").is_err());
    }

    #[test]
    fn builtin_table_is_consistent() {
        let t = builtin_table();
        assert!(t.len() >= 260, "{}", t.len());
        for r in &t.records {
            // crossing number consistent with the name prefix
            let prefix: String =
                r.name.chars().take_while(|c| c.is_ascii_digit()).collect();
            assert_eq!(prefix.parse::<u32>().unwrap(), r.crossings, "{}", r.name);
            assert!(t.identify(&r.fingerprint).contains(&r.name));
            // recomputation matches
            assert_eq!(fingerprint(&r.code).unwrap(), r.fingerprint, "{}", r.name);
        }
        assert!(!builtin_exclusions().is_empty());
    }

    #[test]
    fn odd_determinants() {
        for r in &builtin_table().records {
            assert_eq!(r.fingerprint.determinant % 2, 1, "{}", r.name);
        }
    }
}
