//! Reference tables of `Φ(n)`, `H(n)` and `G(n)` and their verification
//! against live computation.
//!
//! Fixture format, one row per line (UTF-8):
//!
//! ```text
//! # comment
//! n: p1^e1 * p2^e2 * ...
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Primes are listed in
//! increasing order; `^e` may be omitted when `e = 1`; the value 1 is written
//! `1`. Rows must be sorted and contiguous from `n = 1`.

use num_bigint::BigUint;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::arith::FactoredNat;
use crate::bounds::{g_order_bound, h_exact, phi_cap};
use crate::{Error, Result};

const PHI_DATA: &str = include_str!("../data/phi.txt");
const H_DATA: &str = include_str!("../data/h.txt");
const G_DATA: &str = include_str!("../data/g.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    Phi,
    H,
    G,
}

impl TableId {
    pub const ALL: [TableId; 3] = [TableId::Phi, TableId::H, TableId::G];

    pub fn label(&self) -> &'static str {
        match self {
            TableId::Phi => "PHI",
            TableId::H => "H",
            TableId::G => "G",
        }
    }

    /// Number of rows the table must have.
    pub fn expected_rows(&self) -> usize {
        match self {
            TableId::Phi => 120,
            TableId::H => 25,
            TableId::G => 7,
        }
    }

    fn embedded(&self) -> &'static str {
        match self {
            TableId::Phi => PHI_DATA,
            TableId::H => H_DATA,
            TableId::G => G_DATA,
        }
    }

    /// The live value this table records at `n`.
    pub fn compute(&self, n: u64) -> Result<FactoredNat> {
        match self {
            TableId::Phi => phi_cap(n),
            TableId::H => h_exact(n),
            TableId::G => {
                let n = u32::try_from(n).map_err(|_| Error::cap("n", n, u32::MAX))?;
                g_order_bound(n, false)
            }
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(TableId::Phi),
            "h" => Ok(TableId::H),
            "g" => Ok(TableId::G),
            _ => Err(Error::invalid(format!("unknown table {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFixture {
    pub id: TableId,
    pub rows: Vec<(u64, FactoredNat)>,
}

/// The embedded copy of a table.
pub fn fixture(id: TableId) -> TableFixture {
    parse(id, id.embedded()).expect("embedded fixture is well formed")
}

/// Reads a fixture file from disk.
pub fn load_from_path(id: TableId, path: &Path) -> Result<TableFixture> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    parse(id, &text)
}

fn parse_value(text: &str) -> Result<FactoredNat> {
    let text = text.trim();
    if text == "1" {
        return Ok(FactoredNat::one());
    }
    let mut factors = Vec::new();
    for term in text.split('*') {
        let term = term.trim();
        let (p, e) = term.split_once('^').unwrap_or((term, "1"));
        let p = p
            .trim()
            .parse::<BigUint>()
            .map_err(|_| Error::invalid(format!("bad prime {p:?}")))?;
        let e = e
            .trim()
            .parse::<BigUint>()
            .map_err(|_| Error::invalid(format!("bad exponent {e:?}")))?;
        factors.push((p, e));
    }
    let sorted = factors.windows(2).all(|w| w[0].0 < w[1].0);
    if !sorted {
        return Err(Error::invalid(format!("primes not increasing in {text:?}")));
    }
    FactoredNat::new(factors)
}

pub fn parse(id: TableId, text: &str) -> Result<TableFixture> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |e: Error| Error::invalid(format!("line {}: {e}", lineno + 1));
        let (n, value) = line
            .split_once(':')
            .ok_or_else(|| at(Error::invalid("missing ':'")))?;
        let n = n
            .trim()
            .parse::<u64>()
            .map_err(|_| at(Error::invalid(format!("bad index {n:?}"))))?;
        if n != rows.len() as u64 + 1 {
            return Err(at(Error::invalid(format!(
                "expected row {}, found {n}",
                rows.len() + 1
            ))));
        }
        rows.push((n, parse_value(value).map_err(at)?));
    }
    Ok(TableFixture { id, rows })
}

pub fn serialize(fixture: &TableFixture) -> String {
    let mut out = String::new();
    for (n, value) in &fixture.rows {
        let body = if value.is_one() {
            "1".to_string()
        } else {
            value
                .factors()
                .iter()
                .map(|(p, e)| format!("{p}^{e}"))
                .collect::<Vec<_>>()
                .join(" * ")
        };
        out.push_str(&format!("{n}: {body}\n"));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub expected: FactoredNat,
    pub computed: FactoredNat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub id: TableId,
    pub rows: usize,
    pub matched: usize,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.rows == self.id.expected_rows()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}/{}", self.id, self.matched, self.rows)
    }
}

/// Compares every row of `fixture` with the live computation.
pub fn verify_fixture(fixture: &TableFixture) -> Result<VerifyReport> {
    let mut mismatches = Vec::new();
    for (n, expected) in &fixture.rows {
        let computed = fixture.id.compute(*n)?;
        if &computed != expected {
            mismatches.push(Mismatch {
                n: *n,
                expected: expected.clone(),
                computed,
            });
        }
    }
    Ok(VerifyReport {
        id: fixture.id,
        rows: fixture.rows.len(),
        matched: fixture.rows.len() - mismatches.len(),
        mismatches,
    })
}

/// Verifies the embedded table `id`.
pub fn verify(id: TableId) -> Result<VerifyReport> {
    verify_fixture(&fixture(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fnat(pairs: &[(u64, u64)]) -> FactoredNat {
        FactoredNat::from_u64_pairs(pairs).unwrap()
    }

    #[test]
    fn row_counts() {
        for id in TableId::ALL {
            let f = fixture(id);
            assert_eq!(f.rows.len(), id.expected_rows(), "{id}");
        }
    }

    #[test]
    fn sample_rows() {
        assert_eq!(
            fixture(TableId::Phi).rows[41],
            (42, fnat(&[(2, 1), (3, 1), (7, 2)]))
        );
        assert_eq!(
            fixture(TableId::H).rows[9],
            (
                10,
                fnat(&[
                    (2, 39),
                    (3, 14),
                    (5, 6),
                    (7, 3),
                    (11, 2),
                    (13, 1),
                    (17, 1),
                    (19, 1)
                ])
            )
        );
        assert_eq!(
            fixture(TableId::G).rows[6],
            (
                7,
                fnat(&[
                    (2, 32),
                    (3, 91),
                    (5, 3),
                    (7, 2),
                    (11, 4),
                    (13, 4),
                    (23, 1),
                    (41, 1),
                    (61, 1),
                    (73, 1),
                    (547, 1),
                    (757, 1),
                    (1093, 2),
                    (3851, 1),
                    (797161, 1)
                ])
            )
        );
    }

    #[test]
    fn round_trip() {
        for id in TableId::ALL {
            let f = fixture(id);
            assert_eq!(parse(id, &serialize(&f)).unwrap(), f);
        }
    }

    #[test]
    fn grammar() {
        let f = parse(TableId::Phi, "# c\n\n1: 1\n2: 2 * 3^2\n").unwrap();
        assert_eq!(
            f.rows,
            vec![(1, FactoredNat::one()), (2, fnat(&[(2, 1), (3, 2)]))]
        );
        assert!(parse(TableId::Phi, "2: 2\n").is_err());
        assert!(parse(TableId::Phi, "1: 3 * 2\n").is_err());
        assert!(parse(TableId::Phi, "1: 4\n").is_err());
        assert!(parse(TableId::Phi, "1 2\n").is_err());
    }

    #[test]
    fn verify_all_tables() {
        for id in TableId::ALL {
            let r = verify(id).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_row_is_reported() {
        let mut f = fixture(TableId::H);
        f.rows[2].1 = fnat(&[(2, 11), (3, 4), (5, 1)]);
        let r = verify_fixture(&f).unwrap();
        assert_eq!(r.matched, 24);
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(r.mismatches[0].n, 3);
        assert!(!r.ok());
    }

    #[test]
    fn disk_copy_matches_embedded() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        for (id, file) in [
            (TableId::Phi, "phi.txt"),
            (TableId::H, "h.txt"),
            (TableId::G, "g.txt"),
        ] {
            assert_eq!(load_from_path(id, &dir.join(file)).unwrap(), fixture(id));
        }
    }
}
