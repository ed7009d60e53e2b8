//! Dot/circle interval diagrams for subsheaves on a chain `q_0 ... q_n`.
//!
//! A row reads left to right: an optional end (`-` attached to the main
//! component, `.` detached), nodes (`*` where the section is nonzero, `o`
//! where it vanishes), two-character segments between nodes (`--` inside the
//! support, `..` outside), an optional right end and an optional twist
//! column ` [k]`.

use std::fmt;

use super::StabilityError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Dot,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Attached,
    Detached,
}

impl End {
    fn symbol(self) -> char {
        match self {
            End::Attached => '-',
            End::Detached => '.',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row {
    pub left: Option<End>,
    pub nodes: Vec<Node>,
    /// `support[s]` is the segment between `q_s` and `q_{s+1}`.
    pub support: Vec<bool>,
    pub right: Option<End>,
    pub label: Option<usize>,
}

impl Row {
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_dot(&self, q: usize) -> bool {
        self.nodes[q] == Node::Dot
    }

    pub fn without_ends(&self) -> Row {
        Row {
            left: None,
            right: None,
            ..self.clone()
        }
    }

    pub fn reflect(&self) -> Row {
        let n = self.n();
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        let mut support = self.support.clone();
        support.reverse();
        Row {
            left: self.right,
            nodes,
            support,
            right: self.left,
            label: self.label.map(|k| n + 1 - k),
        }
    }

    /// Parses one row; `line` is used for error positions only.
    pub fn parse_line(text: &str, line: usize) -> Result<Row, StabilityError> {
        let chars: Vec<char> = text.chars().collect();
        let err = |i: usize, message: String| StabilityError::Parse {
            line,
            column: i + 1,
            message,
        };
        let node = |c: char| match c {
            '*' => Some(Node::Dot),
            'o' => Some(Node::Circle),
            _ => None,
        };
        let end = |c: char| match c {
            '-' => Some(End::Attached),
            '.' => Some(End::Detached),
            _ => None,
        };
        let mut i = 0;
        while i < chars.len() && chars[i] == ' ' {
            i += 1;
        }
        let mut left = None;
        if let Some(e) = chars.get(i).and_then(|&c| end(c)) {
            left = Some(e);
            i += 1;
        }
        let mut nodes = Vec::new();
        let mut support = Vec::new();
        match chars.get(i).and_then(|&c| node(c)) {
            Some(nd) => nodes.push(nd),
            None => return Err(err(i, "expected a node `*` or `o`".into())),
        }
        i += 1;
        let mut right = None;
        loop {
            let seg = match (chars.get(i), chars.get(i + 1)) {
                (Some('-'), Some('-')) => Some(true),
                (Some('.'), Some('.')) => Some(false),
                _ => None,
            };
            if let Some(s) = seg {
                match chars.get(i + 2).and_then(|&c| node(c)) {
                    Some(nd) => {
                        support.push(s);
                        nodes.push(nd);
                        i += 3;
                        continue;
                    }
                    None => return Err(err(i + 2, "expected a node after segment".into())),
                }
            }
            if let Some(e) = chars.get(i).and_then(|&c| end(c)) {
                right = Some(e);
                i += 1;
            }
            break;
        }
        while i < chars.len() && chars[i] == ' ' {
            i += 1;
        }
        let mut label = None;
        if chars.get(i) == Some(&'[') {
            let close = chars[i..]
                .iter()
                .position(|&c| c == ']')
                .map(|p| p + i)
                .ok_or_else(|| err(i, "unclosed `[`".into()))?;
            let body: String = chars[i + 1..close].iter().collect();
            let k: usize = body
                .trim()
                .parse()
                .map_err(|_| err(i + 1, format!("bad column `{body}`")))?;
            if k == 0 || k > nodes.len() - 1 {
                return Err(err(
                    i + 1,
                    format!("column {k} outside 1..={}", nodes.len() - 1),
                ));
            }
            label = Some(k);
            i = close + 1;
            while i < chars.len() && chars[i] == ' ' {
                i += 1;
            }
        }
        if i < chars.len() {
            return Err(err(i, format!("unexpected `{}`", chars[i])));
        }
        Ok(Row {
            left,
            nodes,
            support,
            right,
            label,
        })
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if let Some(e) = self.left {
            s.push(e.symbol());
        }
        for (q, nd) in self.nodes.iter().enumerate() {
            if q > 0 {
                s.push_str(if self.support[q - 1] { "--" } else { ".." });
            }
            s.push(match nd {
                Node::Dot => '*',
                Node::Circle => 'o',
            });
        }
        if let Some(e) = self.right {
            s.push(e.symbol());
        }
        if let Some(k) = self.label {
            s.push_str(&format!(" [{k}]"));
        }
        f.write_str(&s)
    }
}

/// The building blocks a destabilizing subsheaf decomposes into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Summand {
    /// `O_[0,i)`, `1 <= i <= n`.
    Initial(usize),
    /// `O_(j,n]`, `0 <= j < n`.
    Terminal(usize),
    /// `O_[0,n]`.
    Full,
    /// `O^[k]_[0,n]`, `1 <= k <= n`.
    Twisted(usize),
}

impl Summand {
    /// Every summand available on a chain with `n` segments.
    pub fn all(n: usize) -> Vec<Summand> {
        let mut v: Vec<Summand> = (1..=n).map(Summand::Initial).collect();
        v.extend((0..n).map(Summand::Terminal));
        v.push(Summand::Full);
        v.extend((1..=n).map(Summand::Twisted));
        v
    }

    pub fn row(self, n: usize) -> Row {
        let (nodes, support, label): (Vec<Node>, Vec<bool>, Option<usize>) = match self {
            Summand::Initial(i) => (
                (0..=n)
                    .map(|q| if q < i { Node::Dot } else { Node::Circle })
                    .collect(),
                (1..=n).map(|s| s <= i).collect(),
                Some(i),
            ),
            Summand::Terminal(j) => (
                (0..=n)
                    .map(|q| if q > j { Node::Dot } else { Node::Circle })
                    .collect(),
                (1..=n).map(|s| s > j).collect(),
                Some(j + 1),
            ),
            Summand::Full => (vec![Node::Dot; n + 1], vec![true; n], None),
            Summand::Twisted(k) => (vec![Node::Dot; n + 1], vec![true; n], Some(k)),
        };
        Row {
            left: None,
            nodes,
            support,
            right: None,
            label,
        }
    }

    /// Recognizes a row, ignoring its ends.
    pub fn from_row(row: &Row) -> Option<Summand> {
        let bare = row.without_ends();
        Summand::all(bare.n())
            .into_iter()
            .find(|s| s.row(bare.n()) == bare)
    }

    pub fn name(self, n: usize) -> String {
        match self {
            Summand::Initial(i) => format!("O_[0,{i})"),
            Summand::Terminal(j) => format!("O_({j},{n}]"),
            Summand::Full => format!("O_[0,{n}]"),
            Summand::Twisted(k) => format!("O^[{k}]_[0,{n}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsheafPattern {
    pub marked: usize,
    pub rows: Vec<Row>,
}

impl SubsheafPattern {
    pub fn from_summands(n: usize, marked: usize, summands: &[Summand]) -> Self {
        SubsheafPattern {
            marked,
            rows: summands.iter().map(|s| s.row(n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.first().map_or(0, Row::n)
    }

    pub fn summands(&self) -> Option<Vec<Summand>> {
        self.rows.iter().map(Summand::from_row).collect()
    }

    pub fn dots_at(&self, q: usize) -> usize {
        self.rows.iter().filter(|r| r.is_dot(q)).count()
    }

    /// Number of rows labelled with each column `1..=n`.
    pub fn consumption(&self) -> Vec<usize> {
        let mut c = vec![0; self.n()];
        for r in &self.rows {
            if let Some(k) = r.label {
                c[k - 1] += 1;
            }
        }
        c
    }

    /// Same chain, same marked node and the same rows up to order.
    pub fn same_type(&self, other: &SubsheafPattern) -> bool {
        self.n() == other.n()
            && self.marked == other.marked
            && self.sorted_rows() == other.sorted_rows()
    }

    pub fn sorted_rows(&self) -> Vec<Row> {
        let mut r = self.rows.clone();
        r.sort();
        r
    }

    pub fn reflect(&self) -> SubsheafPattern {
        SubsheafPattern {
            marked: self.n() - self.marked,
            rows: self.rows.iter().map(Row::reflect).collect(),
        }
    }

    pub fn without_ends(&self) -> SubsheafPattern {
        SubsheafPattern {
            marked: self.marked,
            rows: self.rows.iter().map(Row::without_ends).collect(),
        }
    }

    /// `O_[0,2) + O_(0,2] + O_[0,2]`, or `None` if a row is not a summand.
    pub fn name(&self) -> Option<String> {
        let n = self.n();
        let s = self.summands()?;
        Some(s.iter().map(|x| x.name(n)).collect::<Vec<_>>().join(" + "))
    }

    /// Rows after a header line `marked <l>`; rows start at line `first_line`.
    pub fn parse_rows<'a>(
        marked: usize,
        lines: impl Iterator<Item = (usize, &'a str)>,
    ) -> Result<Self, StabilityError> {
        let mut rows: Vec<Row> = Vec::new();
        for (ln, text) in lines {
            let row = Row::parse_line(text, ln)?;
            if let Some(first) = rows.first() {
                if first.nodes.len() != row.nodes.len() {
                    return Err(StabilityError::Parse {
                        line: ln,
                        column: 1,
                        message: format!(
                            "row has {} nodes, expected {}",
                            row.nodes.len(),
                            first.nodes.len()
                        ),
                    });
                }
            }
            rows.push(row);
        }
        let Some(first) = rows.first() else {
            return Err(StabilityError::Parse {
                line: 1,
                column: 1,
                message: "pattern has no rows".into(),
            });
        };
        if marked > first.n() {
            return Err(StabilityError::Parse {
                line: 1,
                column: 1,
                message: format!("marked node {marked} outside 0..={}", first.n()),
            });
        }
        Ok(SubsheafPattern { marked, rows })
    }

    /// Text form: `marked <l>` followed by one row per line. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, StabilityError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or(StabilityError::Parse {
            line: 1,
            column: 1,
            message: "empty pattern".into(),
        })?;
        let marked = parse_marked(header.trim(), hl)?;
        SubsheafPattern::parse_rows(marked, lines)
    }
}

pub(crate) fn parse_marked(header: &str, line: usize) -> Result<usize, StabilityError> {
    let rest = header.strip_prefix("marked").ok_or(StabilityError::Parse {
        line,
        column: 1,
        message: "expected `marked <node>`".into(),
    })?;
    rest.trim().parse().map_err(|_| StabilityError::Parse {
        line,
        column: 8,
        message: format!("bad marked node `{}`", rest.trim()),
    })
}

impl fmt::Display for SubsheafPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "marked {}", self.marked)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Three-summand subsheaves of `E|_D` with `r_dag = 3` at `q_marked`, rank 2
/// at both ends, and twist columns covering every component at most once
/// in total, that is one degree-1 factor per component of a regular `E|_D`.
pub fn enumerate_destab_patterns(
    n: usize,
    marked: usize,
) -> Result<Vec<SubsheafPattern>, StabilityError> {
    if !(2..=3).contains(&n) {
        return Err(StabilityError::Unsupported(format!(
            "chain length {n} (2 or 3)"
        )));
    }
    if marked == 0 || marked >= n {
        return Err(StabilityError::Unsupported(format!(
            "marked node {marked} (must be interior to 0..={n})"
        )));
    }
    let all = Summand::all(n);
    let mut out = Vec::new();
    for a in 0..all.len() {
        for b in a..all.len() {
            for c in b..all.len() {
                let p = SubsheafPattern::from_summands(n, marked, &[all[a], all[b], all[c]]);
                let cons = p.consumption();
                if p.dots_at(marked) == 3
                    && p.dots_at(0) == 2
                    && p.dots_at(n) == 2
                    && cons.iter().all(|&k| k >= 1)
                    && cons.iter().sum::<usize>() <= 3
                {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Summand::*;

    fn names(n: usize, m: usize) -> Vec<String> {
        enumerate_destab_patterns(n, m)
            .unwrap()
            .iter()
            .map(|p| p.name().unwrap())
            .collect()
    }

    #[test]
    fn two_segment_chain() {
        assert_eq!(
            names(2, 1),
            vec![
                "O_[0,2) + O_(0,2] + O_[0,2]",
                "O_[0,2) + O_(0,2] + O^[1]_[0,2]",
                "O_[0,2) + O_(0,2] + O^[2]_[0,2]",
            ]
        );
    }

    #[test]
    fn three_segment_chain() {
        assert_eq!(
            names(3, 1),
            vec![
                "O_[0,2) + O_(0,3] + O^[3]_[0,3]",
                "O_[0,3) + O_(0,3] + O^[2]_[0,3]"
            ]
        );
        assert_eq!(
            names(3, 2),
            vec![
                "O_[0,3) + O_(0,3] + O^[2]_[0,3]",
                "O_[0,3) + O_(1,3] + O^[1]_[0,3]"
            ]
        );
        assert!(enumerate_destab_patterns(4, 1).is_err());
        assert!(enumerate_destab_patterns(3, 0).is_err());
    }

    #[test]
    fn summand_rows() {
        assert_eq!(Initial(2).row(2).to_string(), "*--*--o [2]");
        assert_eq!(Terminal(0).row(2).to_string(), "o--*--* [1]");
        assert_eq!(Initial(2).row(3).to_string(), "*--*--o..o [2]");
        assert_eq!(Terminal(1).row(3).to_string(), "o..o--*--* [2]");
        assert_eq!(Full.row(2).to_string(), "*--*--*");
        assert_eq!(Twisted(3).row(3).to_string(), "*--*--*--* [3]");
        for n in 1..5 {
            for s in Summand::all(n) {
                assert_eq!(Summand::from_row(&s.row(n)), Some(s));
            }
        }
    }

    #[test]
    fn rows_round_trip() {
        for text in [
            "-*--*--o. [2]",
            ".o..o--*--*- [2]",
            "-o.",
            "*",
            ".o--*- [1]",
            "o--*",
        ] {
            let r = Row::parse_line(text, 1).unwrap();
            assert_eq!(r.to_string(), text);
        }
        let r = Row::parse_line("-*--*--o. [2]", 1).unwrap();
        assert_eq!(r.reflect().to_string(), ".o--*--*- [1]");
        assert_eq!(r.reflect().reflect(), r);
    }

    #[test]
    fn row_errors_carry_positions() {
        let e = Row::parse_line("*--x", 4).unwrap_err();
        assert_eq!(
            e,
            StabilityError::Parse {
                line: 4,
                column: 4,
                message: "expected a node after segment".into()
            }
        );
        assert!(Row::parse_line("*--* [3]", 1).is_err());
        assert!(Row::parse_line("*--* [1", 1).is_err());
        assert!(Row::parse_line("", 1).is_err());
        assert!(Row::parse_line("*-*", 1).is_err());
    }

    #[test]
    fn pattern_text_round_trip() {
        for p in enumerate_destab_patterns(3, 2).unwrap() {
            let back = SubsheafPattern::parse(&p.to_string()).unwrap();
            assert_eq!(back, p);
        }
        assert!(SubsheafPattern::parse("marked 1\n*--*\n*--*--*\n").is_err());
        assert!(SubsheafPattern::parse("marked 5\n*--*\n").is_err());
        assert!(SubsheafPattern::parse("*--*\n").is_err());
    }

    #[test]
    fn enumerated_patterns_are_consistent() {
        for (n, m) in [(2, 1), (3, 1), (3, 2)] {
            for p in enumerate_destab_patterns(n, m).unwrap() {
                assert_eq!(p.rows.len(), 3);
                assert_eq!(p.dots_at(m), 3);
                assert!(p.dots_at(0) <= 2 && p.dots_at(n) <= 2);
                assert!(p.summands().is_some());
            }
        }
    }
}
