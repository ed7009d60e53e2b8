//! The `chernvan` command line.
//!
//! Exit status: 0 when every record matched, 1 when some certificate
//! failed, 2 on usage, parse or I/O errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cohomology::{RingName, Rings};
use crate::groebner::RingPresentation;
use crate::poly::Polynomial;
use crate::report::{Report, StageRecord};
use crate::stability::{
    self, destab_triples, dims_table, enumerate_destab_patterns, gpb_slope, lambda_set,
    parse_rational, reverse_transfer, slope_compare, transfer, Catalog, ChainBundle, Family,
    Polarization, SheafInvariants, Side, Q,
};
use crate::vanish::{DisplayName, Displays, Verifier};

/// Environment variable naming a directory for reports when `--out` is absent.
pub const OUT_DIR_ENV: &str = "CHERNVAN_OUT_DIR";

pub const DEFAULT_TRUNC: u32 = 16;

#[derive(Debug, Parser)]
#[command(
    name = "chernvan",
    version,
    about = "Exact Chern-class vanishing checks and stability-wall combinatorics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Leave timings out of the report.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    C7,
    C8,
    Stages,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RingArg {
    B,
    Btilde,
    S1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the vanishing pipeline.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// Working degree (even, at least 2).
        #[arg(long, default_value_t = DEFAULT_TRUNC)]
        trunc: u32,
        /// Replace a ring presentation: b, btilde or s1.
        #[arg(long = "presentation", value_name = "NAME=PATH")]
        presentations: Vec<String>,
        /// Replace a display text.
        #[arg(long = "display", value_name = "NAME=PATH")]
        displays: Vec<String>,
        /// Use this class (in xi, a, b) as mu in the c8 certificate.
        #[arg(long, value_name = "POLY", allow_hyphen_values = true)]
        mu: Option<String>,
    },
    /// Normal form of a polynomial in a quotient ring.
    Nf {
        #[arg(long, value_enum, conflicts_with = "presentation")]
        ring: Option<RingArg>,
        #[arg(long, value_name = "PATH")]
        presentation: Option<PathBuf>,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// The wall set for rank and Euler characteristic.
    Walls {
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
    /// Destabilizing invariants at a wall.
    Destab {
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
        #[arg(long)]
        wall: String,
    },
    /// Transfer along a chain bundle such as "0 0 1 | 0 1 1".
    Transfer {
        #[arg(long)]
        rank: i64,
        #[arg(long)]
        bundle: String,
    },
    /// Destabilizing subsheaf patterns on a chain.
    Patterns {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        marked: usize,
    },
    /// Flip-locus type catalogs.
    Catalog {
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Dimension counts for genus g.
    Dims {
        #[arg(long, allow_hyphen_values = true)]
        genus: i64,
    },
}

/// A usage or input error; exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Report, UsageError>;

fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn split_assignment(s: &str) -> Result<(&str, &str), UsageError> {
    s.split_once('=')
        .ok_or_else(|| UsageError(format!("expected NAME=PATH, found `{s}`")))
}

fn cmd_verify(
    target: Target,
    trunc: u32,
    presentations: &[String],
    displays: &[String],
    mu: Option<&str>,
) -> CmdResult {
    if trunc < 2 || !trunc.is_multiple_of(2) {
        return Err(UsageError(format!(
            "--trunc must be even and at least 2, got {trunc}"
        )));
    }
    let mut texts: Vec<(RingName, String)> = RingName::ALL
        .iter()
        .map(|&r| (r, r.bundled_text().to_string()))
        .collect();
    for p in presentations {
        let (name, path) = split_assignment(p)?;
        let ring = RingName::from_stem(name)
            .ok_or_else(|| UsageError(format!("unknown ring `{name}` (b, btilde or s1)")))?;
        let text = read(Path::new(path))?;
        texts.iter_mut().find(|(r, _)| *r == ring).unwrap().1 = text;
    }
    let rings = Rings::from_texts(&texts[0].1, &texts[1].1, &texts[2].1)?;
    let mut disp = Displays::bundled();
    for d in displays {
        let (name, path) = split_assignment(d)?;
        let dn = DisplayName::from_stem(name).ok_or_else(|| {
            let known: Vec<&str> = DisplayName::ALL.iter().map(|d| d.file_stem()).collect();
            UsageError(format!("unknown display `{name}` ({})", known.join(", ")))
        })?;
        disp = disp.with_override(dn, read(Path::new(path))?);
        disp.parse(dn)
            .map_err(|e| UsageError(format!("display {name} ({path}): {e}")))?;
    }
    let mut v = Verifier::new(rings, disp, trunc);
    if let Some(text) = mu {
        let p = Polynomial::parse(text, v.rings().s1.ambient())
            .map_err(|e| UsageError(format!("--mu: {e}")))?;
        v = v.with_mu(p);
    }
    let certs = match target {
        Target::C7 => vec![v.verify_c7()],
        Target::C8 => vec![v.verify_c8()],
        Target::Stages => v.verify_stages(),
        Target::All => {
            let mut c = v.verify_stages();
            c.push(v.verify_c7());
            c.push(v.verify_c8());
            c
        }
    };
    let target = match target {
        Target::C7 => "c7",
        Target::C8 => "c8",
        Target::Stages => "stages",
        Target::All => "all",
    };
    let mut command = format!("verify {target} --trunc {trunc}");
    if let Some(text) = mu {
        command.push_str(&format!(" --mu {text}"));
    }
    Ok(Report::new(
        command,
        certs.iter().map(StageRecord::from).collect(),
    ))
}

fn cmd_nf(ring: Option<RingArg>, presentation: Option<&Path>, poly: &str) -> CmdResult {
    let (label, pres) = match (ring, presentation) {
        (_, Some(path)) => (
            format!("--presentation {}", path.display()),
            RingPresentation::parse(&read(path)?)
                .map_err(|e| UsageError(format!("{}: {e}", path.display())))?,
        ),
        (r, None) => {
            let name = match r.unwrap_or(RingArg::Btilde) {
                RingArg::B => RingName::B,
                RingArg::Btilde => RingName::BTilde,
                RingArg::S1 => RingName::S1,
            };
            (
                format!("--ring {}", name.file_stem()),
                RingPresentation::parse(name.bundled_text())?,
            )
        }
    };
    let q = pres.complete();
    let p = q
        .parse(poly)
        .map_err(|e| UsageError(format!("polynomial: {e}")))?;
    let rec = StageRecord::computed("nf", q.nf(&p).to_string(), true);
    Ok(Report::new(format!("nf {label} {poly}"), vec![rec]))
}

fn cmd_walls(r: i64, chi: i64) -> CmdResult {
    let walls = lambda_set(r, chi)?;
    let alphas: Vec<String> = walls.iter().map(|w| w.alpha.to_string()).collect();
    let mut rec = StageRecord::computed("lambda_set", alphas.join(", "), true);
    for w in &walls {
        let ok = w.alpha * Q::from(w.r0 - w.r_dag) == Q::new(w.r0 * chi, r) - Q::from(w.chi0);
        rec.check(
            &format!("wall {}", w.alpha),
            ok,
            format!("chi0 = {}, r0 = {}, r_dag = {}", w.chi0, w.r0, w.r_dag),
        );
    }
    rec.matched = rec.checks.iter().all(|c| c.passed);
    Ok(Report::new(
        format!("walls --rank {r} --chi {chi}"),
        vec![rec],
    ))
}

fn cmd_destab(r: i64, chi: i64, wall_text: &str) -> CmdResult {
    let wall = parse_rational(wall_text)?;
    let triples = destab_triples(r, chi, wall)?;
    let shown: Vec<String> = triples
        .iter()
        .map(|t| format!("({},{},{}) {}", t.r0, t.r_dag, t.chi, t.side))
        .collect();
    let mut rec = StageRecord::computed("destab_triples", shown.join("; "), true);
    let e = SheafInvariants::new(r, r, chi);
    let e_gpb = gpb_slope(chi + r, r, r, wall)?;
    // Smaller than half the gap between walls with denominators at most r^2.
    let delta = Q::new(1, 2 * r.pow(4) + 2);
    let pol = Polarization::uniform(1);
    for t in &triples {
        let f = SheafInvariants::new(t.r0, t.r_dag, t.chi);
        let g = t.gpb();
        let s = gpb_slope(g.chi, g.r_plus, g.rank, wall)?;
        rec.check(
            &format!("gpb slope ({},{},{})", t.r0, t.r_dag, t.chi),
            s == e_gpb,
            format!(
                "rank {}, chi {}, r+ {}: slope {s}, E has {e_gpb}",
                g.rank, g.chi, g.r_plus
            ),
        );
        let above = slope_compare(&f, &e, wall + delta, &pol)?;
        let below = slope_compare(&f, &e, wall - delta, &pol)?;
        use std::cmp::Ordering::*;
        let ok = match t.side {
            Side::SigmaMinus => above == Greater && below == Less,
            Side::SigmaPlus => above == Less && below == Greater,
        };
        rec.check(
            &format!("side ({},{},{})", t.r0, t.r_dag, t.chi),
            ok,
            format!("{}: {below:?} below, {above:?} above", t.side),
        );
    }
    rec.matched = rec.checks.iter().all(|c| c.passed);
    Ok(Report::new(
        format!("destab --rank {r} --chi {chi} --wall {wall}"),
        vec![rec],
    ))
}

fn cmd_transfer(r: i64, bundle: &str) -> CmdResult {
    let cb = ChainBundle::parse(bundle)?;
    let fwd = transfer(&cb, r)?;
    let back = reverse_transfer(&cb, r)?;
    let show = |w: &[i64]| {
        w.iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let regular = stability::is_regular(&cb, r);
    let mut a = StageRecord::computed(
        "transfer",
        format!(
            "W = {}; t_forward = {}; regular = {regular}",
            show(&fwd.dims),
            fwd.forward
        ),
        true,
    );
    a.notes.push(format!("degree = {}", cb.degree()));
    let b = StageRecord::computed(
        "reverse_transfer",
        format!("W = {}; t_backward = {}", show(&back.dims), back.forward),
        true,
    );
    Ok(Report::new(
        format!("transfer --rank {r} --bundle {cb}"),
        vec![a, b],
    ))
}

fn cmd_patterns(n: usize, marked: usize) -> CmdResult {
    let pats = enumerate_destab_patterns(n, marked)?;
    let mut recs = vec![StageRecord::computed(
        "patterns",
        format!("{} patterns", pats.len()),
        true,
    )];
    for (i, p) in pats.iter().enumerate() {
        let mut rec = StageRecord::computed(
            format!("pattern_{}", i + 1),
            p.name().unwrap_or_default(),
            true,
        );
        rec.notes = p.rows.iter().map(|r| r.to_string()).collect();
        recs.push(rec);
    }
    Ok(Report::new(
        format!("patterns --n {n} --marked {marked}"),
        recs,
    ))
}

fn catalog_record(cat: &Catalog) -> StageRecord {
    let (name, sign) = match cat.side {
        Side::SigmaPlus => ("sigma_plus", '+'),
        Side::SigmaMinus => ("sigma_minus", '-'),
    };
    let counts = format!(
        "a {}, b {}, c {}",
        cat.count(Family::A),
        cat.count(Family::B),
        cat.count(Family::C)
    );
    let inter = |f, g| {
        let v = cat.intersection(f, g);
        if v.is_empty() {
            "none".to_string()
        } else {
            v.join(", ")
        }
    };
    let computed = format!(
        "{} entries ({counts}), {} types; a&b: {}; a&c: {}; b&c: {}",
        cat.entries.len(),
        cat.distinct_types().len(),
        inter(Family::A, Family::B),
        inter(Family::A, Family::C),
        inter(Family::B, Family::C),
    );
    let mut rec = StageRecord::computed(name, computed, true);
    match cat.side {
        Side::SigmaPlus => {
            for i in 0..3 {
                if let (Some(b), Some(c)) =
                    (cat.get(Family::B, i, false), cat.get(Family::C, i, false))
                {
                    rec.check(
                        &format!("I_c^{sign}{i} reflects I_b^{sign}{i}"),
                        b.pattern.reflect().same_type(&c.pattern),
                        "",
                    );
                }
            }
        }
        Side::SigmaMinus => {
            for e in &cat.entries {
                if e.family == Family::A && !e.primed {
                    let ok = cat
                        .get(Family::A, e.index, true)
                        .is_some_and(|p| p.pattern.same_type(&e.pattern.reflect()));
                    rec.check(
                        &format!("I_a^{sign}{}' reflects I_a^{sign}{}", e.index, e.index),
                        ok,
                        "",
                    );
                }
            }
        }
    }
    for (a, b) in cat.identifications() {
        rec.notes.push(format!("{a} = {b}"));
    }
    for e in &cat.entries {
        let rows: Vec<String> = e.pattern.rows.iter().map(|r| r.to_string()).collect();
        rec.notes.push(format!(
            "{} marked {}: {}",
            e.label(),
            e.pattern.marked,
            rows.join(" / ")
        ));
    }
    rec.matched = rec.checks.iter().all(|c| c.passed);
    rec
}

fn cmd_catalog(side: SideArg) -> CmdResult {
    let mut recs = Vec::new();
    if side != SideArg::Minus {
        recs.push(catalog_record(&Catalog::sigma_plus()));
    }
    if side != SideArg::Plus {
        recs.push(catalog_record(&Catalog::sigma_minus()));
    }
    let s = match side {
        SideArg::Plus => "plus",
        SideArg::Minus => "minus",
        SideArg::Both => "both",
    };
    Ok(Report::new(format!("catalog --side {s}"), recs))
}

fn cmd_dims(g: i64) -> CmdResult {
    let t = dims_table(g)?;
    let shown: Vec<String> = t
        .entries
        .iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect();
    let mut rec = StageRecord::computed("dims", shown.join(", "), t.all_identities_hold());
    for (id, ok) in &t.identities {
        rec.check(id, *ok, "");
    }
    Ok(Report::new(format!("dims --genus {g}"), vec![rec]))
}

fn slug(command: &str) -> String {
    let mut s = String::new();
    for c in command.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('_') {
            s.push('_');
        }
    }
    let s = s.trim_matches('_');
    s.chars().take(80).collect()
}

/// Runs the command line given by `args`, writing to `out` and `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    let result = match &cli.command {
        Command::Verify {
            target,
            trunc,
            presentations,
            displays,
            mu,
        } => cmd_verify(*target, *trunc, presentations, displays, mu.as_deref()),
        Command::Nf {
            ring,
            presentation,
            poly,
        } => cmd_nf(*ring, presentation.as_deref(), poly),
        Command::Walls { rank, chi } => cmd_walls(*rank, *chi),
        Command::Destab { rank, chi, wall } => cmd_destab(*rank, *chi, wall),
        Command::Transfer { rank, bundle } => cmd_transfer(*rank, bundle),
        Command::Patterns { n, marked } => cmd_patterns(*n, *marked),
        Command::Catalog { side } => cmd_catalog(*side),
        Command::Dims { genus } => cmd_dims(*genus),
    };
    let report = match result {
        Ok(r) => r,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let report = if cli.no_timing {
        report.without_timing()
    } else {
        report
    };
    let (text, ext) = match cli.format {
        Format::Text => (report.to_text(), "txt"),
        Format::Structured => (report.to_json(), "json"),
    };
    let dest = match (&cli.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) if !dir.is_empty() => {
            Some(Path::new(&dir).join(format!("{}.{ext}", slug(&report.command))))
        }
        _ => None,
    };
    if cli.out.is_none() && out.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    if let Some(path) = dest {
        if let Err(e) = std::fs::write(&path, &text) {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return 2;
        }
    }
    if !report.all_matched() {
        let _ = writeln!(
            err,
            "certificate failed: {}",
            report.summary.failed.join(", ")
        );
    }
    report.exit_code()
}

pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
