//! Deterministic text-type recognizers.
//!
//! Each text category gets an offline pattern matcher; the checksummed kinds
//! (IBAN, ISBN, credit card) additionally validate their check digits and
//! require whole-token validity — a digit run that is one digit too long
//! matches nothing rather than matching a prefix. Dates are US-ordered and
//! the address matcher is a deliberately narrow keyword heuristic.

use std::collections::BTreeSet;
use std::sync::LazyLock;

use regex::Regex;

use crate::ast::TextKind;

/// One recognized span. For IBAN/ISBN/credit card the value has spaces and
/// hyphens stripped; other kinds keep the matched text verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextMatch {
    pub kind: TextKind,
    pub value: String,
    pub start: usize,
    pub end: usize,
}

fn re(pattern: &str) -> Regex {
    Regex::new(pattern).expect("recognizer pattern compiles")
}

static NUMBER: LazyLock<Regex> =
    LazyLock::new(|| re(r"\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?"));
static TIME: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?i)\b(?:[01]?\d|2[0-3]):[0-5]\d(?::[0-5]\d)?(?:\s?[ap]m)?\b"));
static DATE: LazyLock<Regex> = LazyLock::new(|| {
    re(concat!(
        r"(?i)\b(?:",
        r"(?:JAN|FEB|MAR|APR|MAY|JUN|JUL|AUG|SEP|OCT|NOV|DEC)\s+\d{1,2}\s+\d{4}",
        r"|\d{4}-(?:0?[1-9]|1[0-2])-(?:0?[1-9]|[12]\d|3[01])",
        r"|(?:0?[1-9]|1[0-2])/(?:0?[1-9]|[12]\d|3[01])/\d{4}",
        r"|(?:0?[1-9]|1[0-2])/(?:0?[1-9]|[12]\d|3[01])/\d{2}",
        r"|(?:0?[1-9]|1[0-2])/\d{4}",
        r")\b",
    ))
});
static MONEY: LazyLock<Regex> = LazyLock::new(|| {
    re(r"[$€£]\s?\d+(?:,\d{3})*(?:\.\d{1,2})?|\d+(?:,\d{3})*(?:\.\d{1,2})?\s?(?:USD|EUR|GBP)\b")
});
static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| re(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}"));
static URL: LazyLock<Regex> = LazyLock::new(|| {
    re(r#"(?i)\b(?:https?://|www\.)[a-z0-9.-]+(?::\d{1,5})?(?:/[^\s<>"']*)?"#)
});
static US_PHONE: LazyLock<Regex> = LazyLock::new(|| {
    re(r"(?:\+1[-. ])?(?:\(\d{3}\)\s?|\d{3}[-. ])\d{3}[-. ]\d{4}")
});
static FLIGHT: LazyLock<Regex> =
    LazyLock::new(|| re(r"(?:[A-Z][A-Z0-9]|[0-9][A-Z])\s?[0-9]{1,4}"));
static IBAN: LazyLock<Regex> =
    LazyLock::new(|| re(r"[A-Z]{2}[0-9]{2}(?:[ -]?[A-Z0-9]){11,30}"));
static ISBN: LazyLock<Regex> = LazyLock::new(|| re(r"\d(?:[ -]?[0-9Xx]){9,12}"));
static CREDIT_CARD: LazyLock<Regex> = LazyLock::new(|| re(r"\d(?:[ -]?\d){12,18}"));
static TRACKING: LazyLock<Regex> =
    LazyLock::new(|| re(r"1Z(?:[ -]?[A-Z0-9]){16}|\d(?:[ -]?\d){11,21}"));
static TOKEN: LazyLock<Regex> = LazyLock::new(|| re(r"\S+"));

/// True when the bytes adjacent to `[start, end)` are not alphanumeric, i.e.
/// the match is a whole token and not a slice of a longer run.
fn token_bounded(s: &str, start: usize, end: usize) -> bool {
    let before = s[..start].chars().next_back();
    let after = s[end..].chars().next();
    !before.is_some_and(|c| c.is_ascii_alphanumeric())
        && !after.is_some_and(|c| c.is_ascii_alphanumeric())
}

fn strip_separators(s: &str) -> String {
    s.chars().filter(|c| !matches!(c, ' ' | '-')).collect()
}

fn luhn_valid(digits: &str) -> bool {
    let mut sum = 0u32;
    for (i, c) in digits.chars().rev().enumerate() {
        let Some(d) = c.to_digit(10) else { return false };
        let d = if i % 2 == 1 {
            let d = d * 2;
            if d > 9 {
                d - 9
            } else {
                d
            }
        } else {
            d
        };
        sum += d;
    }
    sum % 10 == 0
}

fn isbn10_valid(s: &str) -> bool {
    if s.len() != 10 {
        return false;
    }
    let mut sum = 0u32;
    for (i, c) in s.chars().enumerate() {
        let v = match c {
            '0'..='9' => c.to_digit(10).unwrap(),
            'X' | 'x' if i == 9 => 10,
            _ => return false,
        };
        sum += (10 - i as u32) * v;
    }
    sum % 11 == 0
}

fn isbn13_valid(s: &str) -> bool {
    if s.len() != 13 || !s.chars().all(|c| c.is_ascii_digit()) {
        return false;
    }
    let sum: u32 = s
        .chars()
        .enumerate()
        .map(|(i, c)| {
            let d = c.to_digit(10).unwrap();
            if i % 2 == 0 {
                d
            } else {
                3 * d
            }
        })
        .sum();
    sum % 10 == 0
}

fn iban_valid(s: &str) -> bool {
    if !(15..=34).contains(&s.len()) {
        return false;
    }
    let (head, body) = s.split_at(4);
    let mut rem = 0u64;
    for c in body.chars().chain(head.chars()) {
        if let Some(d) = c.to_digit(10) {
            rem = (rem * 10 + u64::from(d)) % 97;
        } else if c.is_ascii_uppercase() {
            rem = (rem * 100 + (c as u64 - 'A' as u64 + 10)) % 97;
        } else {
            return false;
        }
    }
    rem == 1
}

/// Street-suffix keywords for the address heuristic.
const STREET_SUFFIXES: [&str; 10] =
    ["st", "street", "ave", "rd", "blvd", "dr", "lane", "ln", "way", "ct"];

fn trim_token_punct(tok: &str) -> &str {
    tok.trim_end_matches(['.', ',', ';', ':', '!', '?'])
}

fn is_house_number(tok: &str) -> bool {
    let mut chars = tok.chars();
    match chars.next() {
        Some(c) if c.is_ascii_digit() => {}
        _ => return false,
    }
    let rest: Vec<char> = chars.collect();
    let digits = rest.iter().take_while(|c| c.is_ascii_digit()).count();
    // all digits, optionally one trailing letter ("123A")
    rest[digits..].len() <= 1 && rest[digits..].iter().all(|c| c.is_ascii_alphabetic())
}

/// A house-number token followed by a street-suffix token within four tokens.
fn recognize_address(s: &str) -> Vec<TextMatch> {
    let tokens: Vec<(usize, &str)> = TOKEN.find_iter(s).map(|m| (m.start(), m.as_str())).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let (start, tok) = tokens[i];
        if is_house_number(trim_token_punct(tok)) {
            let limit = (i + 4).min(tokens.len() - 1);
            if let Some(j) = (i + 1..=limit).find(|&j| {
                STREET_SUFFIXES.contains(&trim_token_punct(tokens[j].1).to_lowercase().as_str())
            }) {
                let (suf_start, suf_tok) = tokens[j];
                let end = suf_start + trim_token_punct(suf_tok).len();
                out.push(TextMatch {
                    kind: TextKind::Address,
                    value: s[start..end].to_string(),
                    start,
                    end,
                });
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    out
}

fn regex_matches(kind: TextKind, regex: &Regex, s: &str) -> Vec<TextMatch> {
    regex
        .find_iter(s)
        .map(|m| TextMatch {
            kind,
            value: m.as_str().to_string(),
            start: m.start(),
            end: m.end(),
        })
        .collect()
}

/// Like `regex_matches`, but candidates must be whole tokens and must pass
/// `accept` on their separator-stripped form, which becomes the value.
fn checked_matches(
    kind: TextKind,
    regex: &Regex,
    s: &str,
    accept: impl Fn(&str) -> bool,
) -> Vec<TextMatch> {
    regex
        .find_iter(s)
        .filter(|m| token_bounded(s, m.start(), m.end()))
        .filter_map(|m| {
            let stripped = strip_separators(m.as_str());
            accept(&stripped).then(|| TextMatch {
                kind,
                value: stripped,
                start: m.start(),
                end: m.end(),
            })
        })
        .collect()
}

/// Find all matches of one text category in `s`, left to right,
/// non-overlapping within the category.
pub fn recognize(kind: TextKind, s: &str) -> Vec<TextMatch> {
    match kind {
        TextKind::Number => regex_matches(kind, &NUMBER, s),
        TextKind::Time => regex_matches(kind, &TIME, s),
        TextKind::Date => regex_matches(kind, &DATE, s),
        TextKind::Email => regex_matches(kind, &EMAIL, s),
        TextKind::Url => regex_matches(kind, &URL, s)
            .into_iter()
            .map(|mut m| {
                // URLs keep sentence punctuation out of the value.
                let trimmed = m.value.trim_end_matches(['.', ',', ';', '!', '?', ')']);
                m.end = m.start + trimmed.len();
                m.value.truncate(trimmed.len());
                m
            })
            .collect(),
        TextKind::Money => regex_matches(kind, &MONEY, s)
            .into_iter()
            .filter(|m| {
                // The bare-amount + currency-code form must start a token.
                m.value.starts_with(|c: char| !c.is_ascii_digit())
                    || !s[..m.start]
                        .chars()
                        .next_back()
                        .is_some_and(|c| c.is_ascii_alphanumeric())
            })
            .collect(),
        TextKind::UsPhone => regex_matches(kind, &US_PHONE, s)
            .into_iter()
            .filter(|m| token_bounded(s, m.start, m.end))
            .collect(),
        TextKind::FlightNumber => regex_matches(kind, &FLIGHT, s)
            .into_iter()
            .filter(|m| token_bounded(s, m.start, m.end))
            .collect(),
        TextKind::Iban => checked_matches(kind, &IBAN, s, iban_valid),
        TextKind::Isbn => {
            checked_matches(kind, &ISBN, s, |v| isbn10_valid(v) || isbn13_valid(v))
        }
        TextKind::CreditCard => checked_matches(kind, &CREDIT_CARD, s, |v| {
            (13..=19).contains(&v.len()) && luhn_valid(v)
        }),
        TextKind::TrackingNumber => TRACKING
            .find_iter(s)
            .filter(|m| token_bounded(s, m.start(), m.end()))
            .filter(|m| {
                let stripped = strip_separators(m.as_str());
                if stripped.starts_with("1Z") {
                    stripped.len() == 18
                } else {
                    matches!(stripped.len(), 12 | 15 | 20..=22)
                }
            })
            .map(|m| TextMatch {
                kind,
                value: m.as_str().to_string(),
                start: m.start(),
                end: m.end(),
            })
            .collect(),
        TextKind::Address => recognize_address(s),
    }
}

/// True when the match covers the whole string apart from surrounding
/// whitespace and trailing sentence punctuation.
fn dominant(s: &str, m: &TextMatch) -> bool {
    s[..m.start].chars().all(char::is_whitespace)
        && s[m.end..]
            .chars()
            .all(|c| c.is_whitespace() || matches!(c, '.' | ',' | ';' | ':' | '!' | '?'))
}

/// All categories with a whole-string match in `s`.
pub fn classify_text(s: &str) -> BTreeSet<TextKind> {
    TextKind::ALL
        .iter()
        .copied()
        .filter(|&kind| recognize(kind, s).iter().any(|m| dominant(s, m)))
        .collect()
}

/// Specificity order used to pick one label for a text snippet. Address is
/// deliberately absent: its heuristic is too weak to name a node by.
const SPECIFICITY: [TextKind; 12] = [
    TextKind::Iban,
    TextKind::CreditCard,
    TextKind::Isbn,
    TextKind::TrackingNumber,
    TextKind::FlightNumber,
    TextKind::UsPhone,
    TextKind::Email,
    TextKind::Url,
    TextKind::Money,
    TextKind::Date,
    TextKind::Time,
    TextKind::Number,
];

/// The most specific whole-string category of `s`, if any.
pub fn most_specific(s: &str) -> Option<TextKind> {
    let kinds = classify_text(s);
    SPECIFICITY.iter().copied().find(|k| kinds.contains(k))
}
