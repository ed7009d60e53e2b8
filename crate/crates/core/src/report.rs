//! Reports: a list of stage records with a summary, rendered either as JSON
//! or as a line-oriented text form that parses back to the same value.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vanish::{Certificate, Check, TermDiff};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    /// `None` for computations that have no printed value to compare with.
    pub claimed: Option<String>,
    pub computed: String,
    #[serde(rename = "match")]
    pub matched: bool,
    /// `None` when timing is switched off.
    pub ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nf_steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diff: Vec<TermDiff>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StageRecord {
    /// A record with nothing claimed.
    pub fn computed(name: impl Into<String>, computed: impl Into<String>, matched: bool) -> Self {
        StageRecord {
            name: name.into(),
            claimed: None,
            computed: computed.into(),
            matched,
            ms: None,
            sign: None,
            nf_steps: None,
            checks: Vec::new(),
            diff: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check::new(name, passed, detail));
        passed
    }
}

impl From<&Certificate> for StageRecord {
    fn from(c: &Certificate) -> Self {
        StageRecord {
            name: c.stage.clone(),
            claimed: Some(c.claimed.clone()),
            computed: c.computed.clone(),
            matched: c.matched,
            ms: Some(c.runtime_ms),
            sign: c.sign,
            nf_steps: Some(c.stats.nf_steps),
            checks: c.checks.clone(),
            diff: c.diff.clone(),
            notes: c.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub stages: usize,
    pub matched: usize,
    pub failed: Vec<String>,
    pub all_matched: bool,
}

impl Summary {
    pub fn of(stages: &[StageRecord]) -> Self {
        let failed: Vec<String> = stages
            .iter()
            .filter(|s| !s.matched)
            .map(|s| s.name.clone())
            .collect();
        Summary {
            stages: stages.len(),
            matched: stages.len() - failed.len(),
            all_matched: failed.is_empty(),
            failed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub stages: Vec<StageRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Text { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
}

impl Report {
    pub fn new(command: impl Into<String>, stages: Vec<StageRecord>) -> Self {
        let summary = Summary::of(&stages);
        Report {
            version: REPORT_VERSION.to_string(),
            command: command.into(),
            stages,
            summary,
        }
    }

    pub fn all_matched(&self) -> bool {
        self.summary.all_matched
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_matched() {
            0
        } else {
            1
        }
    }

    /// Clears every timing field.
    pub fn without_timing(mut self) -> Self {
        for s in &mut self.stages {
            s.ms = None;
        }
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse_text(text: &str) -> Result<Self, ReportError> {
        parse_text(text)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '|' => out.push_str("\\|"),
            c => out.push(c),
        }
    }
    out
}

/// Splits on unescaped `|` and unescapes each field.
fn fields(s: &str) -> Result<Vec<String>, String> {
    let mut out = vec![String::new()];
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('\\') => out.last_mut().unwrap().push('\\'),
                Some('n') => out.last_mut().unwrap().push('\n'),
                Some('|') => out.last_mut().unwrap().push('|'),
                other => {
                    return Err(format!(
                        "bad escape `\\{}`",
                        other.map(String::from).unwrap_or_default()
                    ))
                }
            },
            '|' => out.push(String::new()),
            c => out.last_mut().unwrap().push(c),
        }
    }
    let last = out.len() - 1;
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            let f = if i > 0 {
                f.strip_prefix(' ').map(String::from).unwrap_or(f)
            } else {
                f
            };
            if i < last {
                f.strip_suffix(' ').map(String::from).unwrap_or(f)
            } else {
                f
            }
        })
        .collect())
}

fn one_field(s: &str) -> Result<String, String> {
    let f = fields(s)?;
    if f.len() != 1 {
        return Err("unexpected `|`".into());
    }
    Ok(f.into_iter().next().unwrap())
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "version: {}", escape(&self.version))?;
        writeln!(f, "command: {}", escape(&self.command))?;
        for s in &self.stages {
            let verdict = if s.matched { "MATCH" } else { "MISMATCH" };
            match s.ms {
                Some(ms) => writeln!(f, "stage {}: {verdict} ({ms} ms)", escape(&s.name))?,
                None => writeln!(f, "stage {}: {verdict}", escape(&s.name))?,
            }
            if let Some(c) = &s.claimed {
                writeln!(f, "  claimed: {}", escape(c))?;
            }
            writeln!(f, "  computed: {}", escape(&s.computed))?;
            if let Some(sign) = s.sign {
                writeln!(f, "  sign: {sign:+}")?;
            }
            if let Some(n) = s.nf_steps {
                writeln!(f, "  nf steps: {n}")?;
            }
            for c in &s.checks {
                let mark = if c.passed { "ok" } else { "FAILED" };
                writeln!(
                    f,
                    "  check: {mark} | {} | {}",
                    escape(&c.name),
                    escape(&c.detail)
                )?;
            }
            for d in &s.diff {
                writeln!(
                    f,
                    "  diff: {} | claimed {} | computed {}",
                    escape(&d.monomial),
                    escape(&d.claimed),
                    escape(&d.computed)
                )?;
            }
            for n in &s.notes {
                writeln!(f, "  note: {}", escape(n))?;
            }
        }
        writeln!(
            f,
            "summary: {} of {} matched",
            self.summary.matched, self.summary.stages
        )?;
        if !self.summary.failed.is_empty() {
            writeln!(f, "failed: {}", self.summary.failed.join(", "))?;
        }
        Ok(())
    }
}

fn parse_text(text: &str) -> Result<Report, ReportError> {
    let mut version = None;
    let mut command = None;
    let mut stages: Vec<StageRecord> = Vec::new();
    let mut summary_seen = false;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let err = |message: String| ReportError::Text { line: ln, message };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("  ") {
            let stage = stages
                .last_mut()
                .ok_or_else(|| err("field outside a stage".into()))?;
            let (key, value) = rest
                .split_once(": ")
                .ok_or_else(|| err(format!("expected `key: value`, found `{rest}`")))?;
            match key {
                "claimed" => stage.claimed = Some(one_field(value).map_err(err)?),
                "computed" => stage.computed = one_field(value).map_err(err)?,
                "sign" => {
                    stage.sign = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("bad sign `{value}`")))?,
                    )
                }
                "nf steps" => {
                    stage.nf_steps = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("bad step count `{value}`")))?,
                    )
                }
                "check" => {
                    let f = fields(value).map_err(err)?;
                    let [mark, name, detail] = <[String; 3]>::try_from(f)
                        .map_err(|_| err("check needs three fields".into()))?;
                    let passed = match mark.as_str() {
                        "ok" => true,
                        "FAILED" => false,
                        _ => return Err(err(format!("bad check mark `{mark}`"))),
                    };
                    stage.checks.push(Check::new(name, passed, detail));
                }
                "diff" => {
                    let f = fields(value).map_err(err)?;
                    let [monomial, claimed, computed] = <[String; 3]>::try_from(f)
                        .map_err(|_| err("diff needs three fields".into()))?;
                    let claimed = claimed
                        .strip_prefix("claimed ")
                        .ok_or_else(|| err("expected `claimed <value>`".into()))?;
                    let computed = computed
                        .strip_prefix("computed ")
                        .ok_or_else(|| err("expected `computed <value>`".into()))?;
                    stage.diff.push(TermDiff {
                        monomial,
                        claimed: claimed.to_string(),
                        computed: computed.to_string(),
                    });
                }
                "note" => stage.notes.push(one_field(value).map_err(err)?),
                _ => return Err(err(format!("unknown field `{key}`"))),
            }
        } else if let Some(v) = line.strip_prefix("version: ") {
            version = Some(one_field(v).map_err(err)?);
        } else if let Some(v) = line.strip_prefix("command: ") {
            command = Some(one_field(v).map_err(err)?);
        } else if let Some(rest) = line.strip_prefix("stage ") {
            let (name, verdict) = rest
                .rsplit_once(": ")
                .ok_or_else(|| err("expected `stage <name>: <verdict>`".into()))?;
            let (word, ms) = match verdict.split_once(" (") {
                Some((w, t)) => {
                    let n = t
                        .strip_suffix(" ms)")
                        .and_then(|n| n.parse().ok())
                        .ok_or_else(|| err(format!("bad timing `{t}`")))?;
                    (w, Some(n))
                }
                None => (verdict, None),
            };
            let matched = match word {
                "MATCH" => true,
                "MISMATCH" => false,
                _ => return Err(err(format!("bad verdict `{word}`"))),
            };
            let mut rec = StageRecord::computed(one_field(name).map_err(err)?, "", matched);
            rec.ms = ms;
            stages.push(rec);
        } else if line.starts_with("summary: ") || line.starts_with("failed: ") {
            summary_seen = true;
        } else {
            return Err(err(format!("unexpected line `{line}`")));
        }
    }
    let missing = |what: &str| ReportError::Text {
        line: 0,
        message: format!("missing {what}"),
    };
    let version = version.ok_or_else(|| missing("version"))?;
    let command = command.ok_or_else(|| missing("command"))?;
    if !summary_seen {
        return Err(missing("summary"));
    }
    let mut r = Report::new(command, stages);
    r.version = version;
    let shown = text
        .lines()
        .find_map(|l| l.strip_prefix("summary: "))
        .unwrap_or_default();
    let expect = format!("{} of {} matched", r.summary.matched, r.summary.stages);
    if shown != expect {
        return Err(ReportError::Text {
            line: 0,
            message: format!("summary `{shown}` disagrees with the stages (`{expect}`)"),
        });
    }
    Ok(r)
}
