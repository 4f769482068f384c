//! Reference tables and their live reproduction.
//!
//! The expected cells live in `fixtures/tables.txt`, guarded by a SHA-256
//! digest so that a transcription slip is reported as a fixture error rather
//! than as a computation mismatch. Rows are regenerated from the engine and
//! compared cell by cell.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::collatz;
use crate::error::{Error, Result};
use crate::families::{self, FamilyId, FamilySpec};
use crate::par;
use crate::poly::Poly;

const FIXTURE: &str = include_str!("../fixtures/tables.txt");
const FIXTURE_SHA256: &str = include_str!("../fixtures/tables.txt.sha256");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    MnPlus1,
    Mn,
    OnePlusM,
    Mixed,
    M2m1,
    Trinomial,
    Remark,
}

impl TableId {
    pub const ALL: [TableId; 7] = [
        TableId::MnPlus1,
        TableId::Mn,
        TableId::OnePlusM,
        TableId::Mixed,
        TableId::M2m1,
        TableId::Trinomial,
        TableId::Remark,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::MnPlus1 => "mn_plus1",
            TableId::Mn => "mn",
            TableId::OnePlusM => "one_plus_m",
            TableId::Mixed => "mixed",
            TableId::M2m1 => "m2m1",
            TableId::Trinomial => "trinomial",
            TableId::Remark => "remark",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            TableId::MnPlus1 => "M^n + 1",
            TableId::Mn => "M^n",
            TableId::OnePlusM => "(1 + M)^n + 1",
            TableId::Mixed => "1 + M^a (1 + M)^b",
            TableId::M2m1 => "(M^2 + M + 1)^n",
            TableId::Trinomial => "x^n + x + 1",
            TableId::Remark => "A and its reciprocal",
        }
    }

    /// Header of the key column.
    pub fn key_name(self) -> &'static str {
        match self {
            TableId::Mixed => "(a,b)",
            TableId::Remark => "A",
            _ => "n",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str() == norm)
            .ok_or_else(|| Error::Domain(format!("unknown table {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedRow {
    pub table: TableId,
    pub key: String,
    pub degrees: Vec<usize>,
    pub length: u64,
}

/// Checks the fixture digest, then parses every row.
pub fn fixtures() -> Result<Vec<ExpectedRow>> {
    let digest = Sha256::digest(FIXTURE.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != FIXTURE_SHA256.trim() {
        return Err(Error::Fixture(format!(
            "tables.txt digest {hex} does not match the recorded {}",
            FIXTURE_SHA256.trim()
        )));
    }
    parse_fixture(FIXTURE)
}

fn parse_fixture(text: &str) -> Result<Vec<ExpectedRow>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| Error::Fixture(format!("line {}: {what}", i + 1));
        let cells: Vec<&str> = line.split('|').map(str::trim).collect();
        let [table, key, seq, len] = cells[..] else {
            return Err(bad("expected 4 cells"));
        };
        rows.push(ExpectedRow {
            table: table.parse().map_err(|_| bad("unknown table"))?,
            key: key.to_string(),
            degrees: seq
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("bad degree"))?,
            length: len.parse().map_err(|_| bad("bad length"))?,
        });
    }
    Ok(rows)
}

/// The polynomial a row key stands for.
pub fn row_poly(table: TableId, key: &str) -> Result<Poly> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| Error::Domain(format!("bad row key {key:?} for table {table}")))
    };
    let spec = match table {
        TableId::Remark => return Poly::parse_nonzero(key),
        TableId::Mixed => {
            let (a, b) = key
                .split_once(',')
                .ok_or_else(|| Error::Domain(format!("row key {key:?} is not a,b")))?;
            FamilySpec::new(FamilyId::MixedProduct, &[("a", num(a)?), ("b", num(b)?)])
        }
        TableId::MnPlus1 => FamilySpec::new(FamilyId::MnPlus1, &[("n", num(key)?)]),
        TableId::Mn => FamilySpec::new(FamilyId::Mn, &[("n", num(key)?)]),
        TableId::OnePlusM => FamilySpec::new(FamilyId::OnePlusMPowPlus1, &[("n", num(key)?)]),
        TableId::M2m1 => FamilySpec::new(FamilyId::M2m1Pow, &[("n", num(key)?)]),
        TableId::Trinomial => FamilySpec::new(FamilyId::Trinomial, &[("n", num(key)?)]),
    };
    families::build(&spec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub key: String,
    #[serde(with = "crate::serde_poly")]
    pub input: Poly,
    pub degree_sequence: Vec<usize>,
    pub length: u64,
    pub expected_degree_sequence: Vec<usize>,
    pub expected_length: u64,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.degree_sequence == self.expected_degree_sequence && self.length == self.expected_length
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDiff {
    pub key: String,
    pub column: String,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} column {}: expected {}, computed {}",
            self.key, self.column, self.expected, self.computed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: TableId,
    pub title: String,
    pub rows: Vec<TableRow>,
    pub diffs: Vec<CellDiff>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.diffs.is_empty()
    }
}

pub fn format_sequence(seq: &[usize]) -> String {
    let inner: Vec<String> = seq.iter().map(usize::to_string).collect();
    format!("[{}]", inner.join(", "))
}

/// Regenerates one table from the engine and diffs it against the fixture.
pub fn reproduce(table: TableId, workers: usize) -> Result<TableReport> {
    let expected: Vec<ExpectedRow> = fixtures()?
        .into_iter()
        .filter(|r| r.table == table)
        .collect();
    let computed = par::ordered_map(expected, workers, |row| -> Result<TableRow> {
        let input = row_poly(table, &row.key)?;
        let t = collatz::trace(&input)?;
        Ok(TableRow {
            key: row.key,
            input,
            degree_sequence: t.odd_degrees,
            length: t.length as u64,
            expected_degree_sequence: row.degrees,
            expected_length: row.length,
        })
    });
    let rows = computed.into_iter().collect::<Result<Vec<_>>>()?;
    let mut diffs = Vec::new();
    for r in &rows {
        if r.degree_sequence != r.expected_degree_sequence {
            diffs.push(CellDiff {
                key: r.key.clone(),
                column: "degree_sequence".into(),
                expected: format_sequence(&r.expected_degree_sequence),
                computed: format_sequence(&r.degree_sequence),
            });
        }
        if r.length != r.expected_length {
            diffs.push(CellDiff {
                key: r.key.clone(),
                column: "length".into(),
                expected: r.expected_length.to_string(),
                computed: r.length.to_string(),
            });
        }
    }
    Ok(TableReport {
        table,
        title: table.title().to_string(),
        rows,
        diffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_digest_and_shape() {
        let rows = fixtures().unwrap();
        let count = |t| rows.iter().filter(|r| r.table == t).count();
        assert_eq!(count(TableId::MnPlus1), 8);
        assert_eq!(count(TableId::Mn), 8);
        assert_eq!(count(TableId::OnePlusM), 7);
        assert_eq!(count(TableId::Mixed), 10);
        assert_eq!(count(TableId::M2m1), 8);
        assert_eq!(count(TableId::Trinomial), 7);
        assert_eq!(count(TableId::Remark), 2);
        // the length column is the size of the sequence it summarises
        for r in &rows {
            assert_eq!(r.degrees.len() as u64, r.length, "{} {}", r.table, r.key);
        }
    }

    #[test]
    fn parse_rejects_malformed_rows() {
        assert!(parse_fixture("mn | 9 | 1 0").is_err());
        assert!(parse_fixture("nope | 9 | 0 | 1").is_err());
        assert!(parse_fixture("mn | 9 | a 0 | 1").is_err());
        assert_eq!(parse_fixture("# only a comment\n\n").unwrap(), vec![]);
    }

    #[test]
    fn row_keys() {
        assert_eq!(
            row_poly(TableId::Trinomial, "7").unwrap().to_string(),
            "x^7+x+1"
        );
        assert_eq!(
            row_poly(TableId::Mixed, "2,2").unwrap().degree().unwrap(),
            8
        );
        assert!(row_poly(TableId::Mixed, "2").is_err());
        assert!(row_poly(TableId::Mn, "x").is_err());
    }

    #[test]
    fn mn_plus1_row_15() {
        let rep = reproduce(TableId::MnPlus1, 1).unwrap();
        let row = rep.rows.iter().find(|r| r.key == "15").unwrap();
        assert_eq!(format_sequence(&row.degree_sequence), "[28, 0]");
        assert_eq!(row.length, 2);
    }

    #[test]
    fn every_table_reproduces() {
        for t in TableId::ALL {
            let rep = reproduce(t, 2).unwrap();
            assert!(rep.all_match(), "{t}: {:?}", rep.diffs);
        }
    }

    #[test]
    fn ids_round_trip() {
        for t in TableId::ALL {
            assert_eq!(t.as_str().parse::<TableId>().unwrap(), t);
        }
        assert_eq!("ONE-PLUS-M".parse::<TableId>().unwrap(), TableId::OnePlusM);
    }
}
