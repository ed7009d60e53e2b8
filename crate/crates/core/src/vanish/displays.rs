//! The printed intermediate classes, as bundled text.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::poly::{Ambient, ParseError, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DisplayName {
    NormalBundle,
    Cf,
    GrrProduct,
    GrrA,
    GrrB,
    GrrExpansion,
    C7,
    C8,
    Chk7,
    C8Minus3Mu,
    Ch8van,
}

/// Which variables a display is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplayVars {
    /// xi, u, v, a, b (xi = u + v on B).
    B,
    /// xi, eta, u, v, a, b (xi = u + v on B~).
    BTilde,
    /// A, B, u, v.
    Grr,
    /// xi, eta, juv, ju2v2, ju3v3, a, b.
    S2,
}

impl DisplayName {
    pub const ALL: [DisplayName; 11] = [
        DisplayName::NormalBundle,
        DisplayName::Cf,
        DisplayName::GrrProduct,
        DisplayName::GrrA,
        DisplayName::GrrB,
        DisplayName::GrrExpansion,
        DisplayName::C7,
        DisplayName::C8,
        DisplayName::Chk7,
        DisplayName::C8Minus3Mu,
        DisplayName::Ch8van,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            DisplayName::NormalBundle => "normal_bundle",
            DisplayName::Cf => "cf",
            DisplayName::GrrProduct => "grr_product",
            DisplayName::GrrA => "grr_a",
            DisplayName::GrrB => "grr_b",
            DisplayName::GrrExpansion => "grr_expansion",
            DisplayName::C7 => "c7",
            DisplayName::C8 => "c8",
            DisplayName::Chk7 => "chk7",
            DisplayName::C8Minus3Mu => "c8_minus_3mu",
            DisplayName::Ch8van => "ch8van",
        }
    }

    pub fn from_stem(s: &str) -> Option<Self> {
        DisplayName::ALL.into_iter().find(|d| d.file_stem() == s)
    }

    pub fn vars(self) -> DisplayVars {
        match self {
            DisplayName::NormalBundle => DisplayVars::B,
            DisplayName::GrrExpansion => DisplayVars::Grr,
            DisplayName::C7 | DisplayName::C8 => DisplayVars::S2,
            _ => DisplayVars::BTilde,
        }
    }

    pub fn bundled_text(self) -> &'static str {
        match self {
            DisplayName::NormalBundle => include_str!("../../data/displays/normal_bundle.txt"),
            DisplayName::Cf => include_str!("../../data/displays/cf.txt"),
            DisplayName::GrrProduct => include_str!("../../data/displays/grr_product.txt"),
            DisplayName::GrrA => include_str!("../../data/displays/grr_a.txt"),
            DisplayName::GrrB => include_str!("../../data/displays/grr_b.txt"),
            DisplayName::GrrExpansion => include_str!("../../data/displays/grr_expansion.txt"),
            DisplayName::C7 => include_str!("../../data/displays/c7.txt"),
            DisplayName::C8 => include_str!("../../data/displays/c8.txt"),
            DisplayName::Chk7 => include_str!("../../data/displays/chk7.txt"),
            DisplayName::C8Minus3Mu => include_str!("../../data/displays/c8_minus_3mu.txt"),
            DisplayName::Ch8van => include_str!("../../data/displays/ch8van.txt"),
        }
    }
}

impl DisplayVars {
    pub fn ambient(self) -> Arc<Ambient> {
        let pairs: &[(&str, u32)] = match self {
            DisplayVars::B => &[("xi", 2), ("u", 2), ("v", 2), ("a", 4), ("b", 6)],
            DisplayVars::BTilde => &[
                ("xi", 2),
                ("eta", 2),
                ("u", 2),
                ("v", 2),
                ("a", 4),
                ("b", 6),
            ],
            // A and B are inhomogeneous; their weight here is nominal.
            DisplayVars::Grr => &[("A", 2), ("B", 2), ("u", 2), ("v", 2)],
            DisplayVars::S2 => &[
                ("xi", 2),
                ("eta", 2),
                ("juv", 6),
                ("ju2v2", 10),
                ("ju3v3", 14),
                ("a", 4),
                ("b", 6),
            ],
        };
        Ambient::from_pairs(pairs).expect("static ambient")
    }
}

/// Drops `#` comments; the remaining lines form one expression.
pub fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find('#') {
            Some(k) => &l[..k],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Display texts, bundled unless overridden.
#[derive(Debug, Clone, Default)]
pub struct Displays {
    overrides: BTreeMap<DisplayName, String>,
}

impl Displays {
    pub fn bundled() -> Self {
        Displays::default()
    }

    pub fn with_override(mut self, name: DisplayName, text: String) -> Self {
        self.overrides.insert(name, text);
        self
    }

    pub fn text(&self, name: DisplayName) -> &str {
        self.overrides
            .get(&name)
            .map(|s| s.as_str())
            .unwrap_or_else(|| name.bundled_text())
    }

    /// Parses a display in its own variables.
    pub fn parse(&self, name: DisplayName) -> Result<Polynomial, ParseError> {
        Polynomial::parse(&strip_comments(self.text(name)), &name.vars().ambient())
    }
}
