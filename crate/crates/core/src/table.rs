//! Tables of structure constants, written as tab-separated text.
//!
//! ```text
//! # derived-hall constant table
//! # quiver = A1
//! # p = 2
//! # version = 0.1.0
//! # mode = derived
//! # max_dim = 1
//! # degrees = 0..1
//! x    y    z    value
//! S1[0]    S1[1]    0    1/1
//! ```
//!
//! Records are sorted by `(x, y, z)` label, so identical inputs give
//! byte-identical files. A table whose header matches the requested one is
//! reused as a cache: pairs it already covers are copied, not recomputed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::element::{fraction_string, parse_fraction, HallElement};
use crate::error::{Error, Result};
use crate::graded::{graded_objects, GradedObject};
use crate::hall_derived::DerivedHall;
use crate::label::{graded_label, heart_label};

type Record = ((String, String, String), BigRational);

const MAGIC: &str = "# derived-hall constant table";
const COLUMNS: &str = "x\ty\tz\tvalue";

/// Which engine computes products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Subrepresentation counting in the heart.
    Classical,
    /// Normal-ordering rewrite in the derived algebra.
    Derived,
    /// Closed formula with morphisms counted on explicit complexes.
    Oracle,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Classical => "classical",
            Mode::Derived => "derived",
            Mode::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Mode::Classical),
            "derived" => Ok(Mode::Derived),
            "oracle" => Ok(Mode::Oracle),
            other => Err(Error::Parse(format!("unknown mode {other:?} (expected classical, derived or oracle)"))),
        }
    }
}

/// Parses `a..b` (inclusive) or a single integer.
pub fn parse_degrees(s: &str) -> Result<RangeInclusive<i64>> {
    let bad = || Error::Parse(format!("degree range {s:?}: expected a..b"));
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            Ok(a.trim().parse().map_err(|_| bad())?..=b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            Ok(n..=n)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableHeader {
    pub quiver: String,
    pub p: u32,
    pub version: String,
    pub mode: Mode,
    pub max_dim: usize,
    pub degrees: RangeInclusive<i64>,
}

impl TableHeader {
    pub fn new(quiver: &str, p: u32, mode: Mode, max_dim: usize, degrees: RangeInclusive<i64>) -> Self {
        TableHeader {
            quiver: quiver.into(),
            p,
            version: env!("CARGO_PKG_VERSION").into(),
            mode,
            max_dim,
            degrees,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantTable {
    pub header: TableHeader,
    pub records: BTreeMap<(String, String, String), BigRational>,
}

impl ConstantTable {
    pub fn empty(header: TableHeader) -> Self {
        ConstantTable {
            header,
            records: BTreeMap::new(),
        }
    }

    /// The `(x, y)` pairs that have at least one record.
    pub fn pairs(&self) -> BTreeSet<(String, String)> {
        self.records.keys().map(|(x, y, _)| (x.clone(), y.clone())).collect()
    }

    pub fn render(&self) -> String {
        let h = &self.header;
        let mut out = format!(
            "{MAGIC}\n# quiver = {}\n# p = {}\n# version = {}\n# mode = {}\n# max_dim = {}\n# degrees = {}..{}\n{COLUMNS}\n",
            h.quiver,
            h.p,
            h.version,
            h.mode,
            h.max_dim,
            h.degrees.start(),
            h.degrees.end()
        );
        for ((x, y, z), v) in &self.records {
            out.push_str(&format!("{x}\t{y}\t{z}\t{}\n", fraction_string(v)));
        }
        out
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let err = |line: usize, why: String| Error::Parse(format!("{origin}:{line}: {why}"));
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(err(1, "not a constant table".into())),
        }
        let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
        for (no, line) in lines.by_ref() {
            if line == COLUMNS {
                break;
            }
            let (k, v) = line
                .strip_prefix("# ")
                .and_then(|l| l.split_once(" = "))
                .ok_or_else(|| err(no, format!("malformed header line {line:?}")))?;
            fields.insert(k, v);
        }
        let field = |k: &str| fields.get(k).copied().ok_or_else(|| err(1, format!("header lacks {k}")));
        let num = |k: &str| -> Result<u64> { field(k)?.parse().map_err(|_| err(1, format!("header {k} is not a number"))) };
        let header = TableHeader {
            quiver: field("quiver")?.into(),
            p: num("p")? as u32,
            version: field("version")?.into(),
            mode: field("mode")?.parse()?,
            max_dim: num("max_dim")? as usize,
            degrees: parse_degrees(field("degrees")?)?,
        };
        let mut records = BTreeMap::new();
        for (no, line) in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            let [x, y, z, v] = cols[..] else {
                return Err(err(no, format!("expected 4 tab-separated columns, got {}", cols.len())));
            };
            let value = parse_fraction(v).ok_or_else(|| err(no, format!("bad fraction {v:?}")))?;
            records.insert((x.into(), y.into(), z.into()), value);
        }
        Ok(ConstantTable { header, records })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Writes through a temporary sibling and renames it into place, so a
    /// reader never sees a partial table.
    pub fn write(&self, path: &Path) -> Result<()> {
        let io = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        std::fs::write(&tmp, self.render()).map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }
}

/// The basis objects a table over these bounds covers. Classical tables
/// cover heart classes, and only when degree 0 is in range.
pub fn basis_family(engine: &DerivedHall, mode: Mode, max_dim: usize, degrees: RangeInclusive<i64>) -> Vec<GradedObject> {
    let heart = engine.heart();
    match mode {
        Mode::Classical if degrees.contains(&0) => {
            heart.classes_up_to(max_dim).into_iter().map(GradedObject::heart).collect()
        }
        Mode::Classical => Vec::new(),
        _ if degrees.is_empty() => Vec::new(),
        _ => graded_objects(heart, degrees, max_dim),
    }
}

/// `χ_x · χ_y` computed by the chosen engine.
pub fn product(engine: &DerivedHall, mode: Mode, x: &GradedObject, y: &GradedObject) -> Result<HallElement<GradedObject>> {
    match mode {
        Mode::Classical => {
            if !x.is_heart() || !y.is_heart() {
                return Err(Error::Malformed("classical products need heart objects".into()));
            }
            Ok(engine
                .classical()
                .basis_product(&x.component(0), &y.component(0))?
                .map_labels(|z| GradedObject::heart(z.clone())))
        }
        Mode::Derived => engine.basis_product(x, y),
        Mode::Oracle => engine.oracle_product(x, y),
    }
}

/// Label of a basis object in the chosen mode's notation.
pub fn label(engine: &DerivedHall, mode: Mode, x: &GradedObject) -> String {
    match mode {
        Mode::Classical => heart_label(engine.heart(), &x.component(0)),
        _ => graded_label(engine.heart(), x),
    }
}

/// Every product of two basis objects within the header's bounds.
pub fn build(engine: &DerivedHall, header: TableHeader, cache: Option<&ConstantTable>) -> Result<ConstantTable> {
    let family = basis_family(engine, header.mode, header.max_dim, header.degrees.clone());
    let cache = cache.filter(|c| c.header == header);
    let cached_pairs = cache.map(ConstantTable::pairs).unwrap_or_default();
    let pairs: Vec<(&GradedObject, &GradedObject)> =
        family.iter().flat_map(|x| family.iter().map(move |y| (x, y))).collect();
    let computed: Vec<Result<Vec<Record>>> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let (lx, ly) = (label(engine, header.mode, x), label(engine, header.mode, y));
            if let Some(c) = cache.filter(|_| cached_pairs.contains(&(lx.clone(), ly.clone()))) {
                return Ok(c
                    .records
                    .range((lx.clone(), ly.clone(), String::new())..)
                    .take_while(|((a, b, _), _)| *a == lx && *b == ly)
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect());
            }
            let prod = product(engine, header.mode, x, y)?;
            Ok(prod
                .iter()
                .map(|(z, v)| ((lx.clone(), ly.clone(), label(engine, header.mode, z)), v.clone()))
                .collect())
        })
        .collect();
    let mut table = ConstantTable::empty(header);
    for part in computed {
        table.records.extend(part?);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heart::Heart;
    use std::sync::Arc;

    fn engine() -> DerivedHall {
        DerivedHall::new(Arc::new(Heart::linear_a(1, 2).unwrap()))
    }

    #[test]
    fn classical_table_a1() {
        let e = engine();
        let header = TableHeader::new("A1", 2, Mode::Classical, 2, 0..=0);
        let t = build(&e, header, None).unwrap();
        let key = ("S1".to_string(), "S1".to_string(), "S1^2".to_string());
        assert_eq!(fraction_string(&t.records[&key]), "3/1");
        assert_eq!(ConstantTable::parse(&t.render(), "t").unwrap(), t);
    }

    #[test]
    fn empty_bounds_give_header_only() {
        let e = engine();
        #[allow(clippy::reversed_empty_ranges)]
        let t = build(&e, TableHeader::new("A1", 2, Mode::Derived, 1, 1..=0), None).unwrap();
        assert!(t.records.is_empty());
        assert!(t.render().ends_with(&format!("{COLUMNS}\n")));
    }

    #[test]
    fn cache_reuse_is_byte_identical() {
        let e = engine();
        let header = TableHeader::new("A1", 2, Mode::Derived, 1, 0..=1);
        let first = build(&e, header.clone(), None).unwrap();
        let mut partial = first.clone();
        let drop: Vec<_> = partial.records.keys().filter(|k| k.0 == "S1[1]").cloned().collect();
        for k in drop {
            partial.records.remove(&k);
        }
        let second = build(&e, header, Some(&partial)).unwrap();
        assert_eq!(first.render(), second.render());
    }

    #[test]
    fn modes_and_degrees_parse() {
        assert_eq!("oracle".parse::<Mode>().unwrap(), Mode::Oracle);
        assert!("fast".parse::<Mode>().is_err());
        assert_eq!(parse_degrees("-1..2").unwrap(), -1..=2);
        assert_eq!(parse_degrees("0..=1").unwrap(), 0..=1);
        assert_eq!(parse_degrees("3").unwrap(), 3..=3);
        assert!(parse_degrees("a..b").is_err());
    }
}
