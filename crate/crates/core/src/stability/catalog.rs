//! The flip-locus type catalogs for the two sides of the first wall.

use std::fmt;

use super::patterns::{parse_marked, SubsheafPattern};
use super::walls::Side;
use super::StabilityError;

const BUNDLED: &str = include_str!("../../data/catalog.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
        }
    }

    fn from_letter(s: &str) -> Option<Family> {
        match s {
            "a" => Some(Family::A),
            "b" => Some(Family::B),
            "c" => Some(Family::C),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub family: Family,
    pub side: Side,
    pub index: usize,
    /// Vertical reflection of the unprimed entry.
    pub primed: bool,
    pub pattern: SubsheafPattern,
}

impl CatalogEntry {
    /// `I_a^+1`, `I_a^-2'`.
    pub fn label(&self) -> String {
        let sign = match self.side {
            Side::SigmaPlus => '+',
            Side::SigmaMinus => '-',
        };
        let prime = if self.primed { "'" } else { "" };
        format!("I_{}^{}{}{}", self.family.letter(), sign, self.index, prime)
    }

    pub fn reflect(&self, family: Family, primed: bool) -> CatalogEntry {
        CatalogEntry {
            family,
            side: self.side,
            index: self.index,
            primed,
            pattern: self.pattern.reflect(),
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.side {
            Side::SigmaPlus => '+',
            Side::SigmaMinus => '-',
        };
        writeln!(
            f,
            "type {} {}{}{} marked {}",
            self.family.letter(),
            sign,
            self.index,
            if self.primed { "'" } else { "" },
            self.pattern.marked
        )?;
        for r in &self.pattern.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Parses blocks headed `type <family> <sign><index>['] marked <node>`.
pub fn parse_entries(text: &str) -> Result<Vec<CatalogEntry>, StabilityError> {
    let mut out = Vec::new();
    let mut header: Option<(usize, Family, Side, usize, bool, usize)> = None;
    let mut rows: Vec<(usize, &str)> = Vec::new();
    let flush = |header: &mut Option<(usize, Family, Side, usize, bool, usize)>,
                 rows: &mut Vec<(usize, &str)>,
                 out: &mut Vec<CatalogEntry>|
     -> Result<(), StabilityError> {
        if let Some((ln, family, side, index, primed, marked)) = header.take() {
            if rows.is_empty() {
                return Err(StabilityError::Parse {
                    line: ln,
                    column: 1,
                    message: "type without rows".into(),
                });
            }
            let pattern = SubsheafPattern::parse_rows(marked, rows.drain(..))?;
            out.push(CatalogEntry {
                family,
                side,
                index,
                primed,
                pattern,
            });
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("type ") {
            flush(&mut header, &mut rows, &mut out)?;
            let bad = |column: usize, message: &str| StabilityError::Parse {
                line: ln,
                column,
                message: message.into(),
            };
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() != 4 {
                return Err(bad(
                    6,
                    "expected `type <family> <sign><index> marked <node>`",
                ));
            }
            let family =
                Family::from_letter(words[0]).ok_or_else(|| bad(6, "family must be a, b or c"))?;
            let tag = words[1];
            let side = match tag.chars().next() {
                Some('+') => Side::SigmaPlus,
                Some('-') => Side::SigmaMinus,
                _ => return Err(bad(8, "index must start with + or -")),
            };
            let (digits, primed) = match tag[1..].strip_suffix('\'') {
                Some(d) => (d, true),
                None => (&tag[1..], false),
            };
            let index: usize = digits.parse().map_err(|_| bad(9, "bad index"))?;
            let marked = parse_marked(&words[2..].join(" "), ln)?;
            header = Some((ln, family, side, index, primed, marked));
        } else {
            if header.is_none() {
                return Err(StabilityError::Parse {
                    line: ln,
                    column: 1,
                    message: "row before any `type` header".into(),
                });
            }
            rows.push((ln, line));
        }
    }
    flush(&mut header, &mut rows, &mut out)?;
    Ok(out)
}

/// The catalog for one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub side: Side,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Builds a side from parsed entries. On the minus side the primed
    /// family-a types and family c are generated by reflection.
    pub fn from_entries(side: Side, all: &[CatalogEntry]) -> Catalog {
        let listed: Vec<CatalogEntry> = all.iter().filter(|e| e.side == side).cloned().collect();
        let entries = match side {
            Side::SigmaPlus => listed,
            Side::SigmaMinus => {
                let mut v = Vec::new();
                for e in listed.iter().filter(|e| e.family == Family::A) {
                    v.push(e.clone());
                    v.push(e.reflect(Family::A, true));
                }
                for e in listed.iter().filter(|e| e.family == Family::B) {
                    v.push(e.clone());
                }
                for e in listed.iter().filter(|e| e.family == Family::B) {
                    v.push(e.reflect(Family::C, false));
                }
                v
            }
        };
        Catalog { side, entries }
    }

    pub fn bundled(side: Side) -> Catalog {
        let all = parse_entries(BUNDLED).expect("bundled catalog parses");
        Catalog::from_entries(side, &all)
    }

    pub fn sigma_plus() -> Catalog {
        Catalog::bundled(Side::SigmaPlus)
    }

    pub fn sigma_minus() -> Catalog {
        Catalog::bundled(Side::SigmaMinus)
    }

    pub fn get(&self, family: Family, index: usize, primed: bool) -> Option<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.family == family && e.index == index && e.primed == primed)
    }

    pub fn family(&self, family: Family) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| e.family == family).collect()
    }

    pub fn count(&self, family: Family) -> usize {
        self.family(family).len()
    }

    /// Labels grouped by type, in catalog order.
    pub fn distinct_types(&self) -> Vec<Vec<String>> {
        let mut classes: Vec<(SubsheafPattern, Vec<String>)> = Vec::new();
        for e in &self.entries {
            match classes.iter_mut().find(|(p, _)| p.same_type(&e.pattern)) {
                Some((_, labels)) => labels.push(e.label()),
                None => classes.push((e.pattern.clone(), vec![e.label()])),
            }
        }
        classes.into_iter().map(|(_, l)| l).collect()
    }

    /// Pairs of labels naming the same type.
    pub fn identifications(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if a.pattern.same_type(&b.pattern) {
                    out.push((a.label(), b.label()));
                }
            }
        }
        out
    }

    /// Types shared by two families, each given as `label = label`.
    pub fn intersection(&self, f: Family, g: Family) -> Vec<String> {
        let mut out = Vec::new();
        for a in self.family(f) {
            for b in self.family(g) {
                if a.pattern.same_type(&b.pattern) {
                    out.push(format!("{} = {}", a.label(), b.label()));
                }
            }
        }
        out
    }
}
