//! Target relations: builtin families and the text file format.
//!
//! ```text
//! # comment lines start with '#'
//! n=3
//! 011
//! 101
//! ```
//!
//! After `n=<int>` every non-comment, non-blank line lists one accepted
//! string of exactly `n` bits; duplicates are rejected.

use std::collections::BTreeSet;

use aeqs_core::qqaf::{RelationTable, Word, MAX_INPUT_LEN};

use crate::error::{CliError, Result};

pub const BUILTINS: [&str; 6] = ["all", "none", "eq", "balanced", "parity-even", "majority"];

/// Resolves a builtin name or a relation file path. `n` is required for
/// builtins and, for files, must match the declared length when given.
pub fn parse_relation(source: &str, n: Option<usize>) -> Result<RelationTable> {
    if BUILTINS.contains(&source) {
        let n = n.ok_or_else(|| CliError::MissingLength(source.to_string()))?;
        return builtin(source, n);
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::Io {
        path: source.to_string(),
        source: e,
    })?;
    let table = parse_relation_text(&text)?;
    if let Some(n) = n {
        if n != table.n() {
            return Err(CliError::InvalidConfig(format!(
                "--n {n} does not match relation file length {}",
                table.n()
            )));
        }
    }
    Ok(table)
}

pub fn builtin(name: &str, n: usize) -> Result<RelationTable> {
    check_length(n)?;
    let table = match name {
        "all" => RelationTable::full(n)?,
        "none" => RelationTable::empty(n)?,
        "eq" => {
            if n % 2 != 0 {
                return Err(CliError::OddLengthForEq(n));
            }
            RelationTable::from_predicate(n, |w: &Word| {
                let (x, y) = w.bits().split_at(n / 2);
                x == y
            })?
        }
        "balanced" => RelationTable::from_predicate(n, |w: &Word| 2 * w.count_ones() == n)?,
        "parity-even" => RelationTable::from_predicate(n, |w: &Word| w.count_ones() % 2 == 0)?,
        "majority" => RelationTable::from_predicate(n, |w: &Word| 2 * w.count_ones() > n)?,
        other => {
            return Err(CliError::InvalidConfig(format!(
                "unknown relation `{other}`; builtins: {}",
                BUILTINS.join(", ")
            )))
        }
    };
    Ok(table)
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 || n > MAX_INPUT_LEN {
        return Err(CliError::InvalidConfig(format!(
            "input length n = {n} must lie in [1, {MAX_INPUT_LEN}]"
        )));
    }
    Ok(())
}

fn malformed(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::MalformedRelationFile {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_relation_text(text: &str) -> Result<RelationTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());

    let (ln, header) = lines.next().ok_or_else(|| malformed(1, 1, "missing `n=` header"))?;
    let digits = header
        .strip_prefix("n=")
        .ok_or_else(|| malformed(ln, 1, "expected `n=<int>`"))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed(ln, 3, "expected a decimal length"));
    }
    let n: usize = digits.parse().map_err(|_| malformed(ln, 3, "length out of range"))?;
    if n == 0 || n > MAX_INPUT_LEN {
        return Err(malformed(ln, 3, format!("length {n} must lie in [1, {MAX_INPUT_LEN}]")));
    }

    let mut members = BTreeSet::new();
    for (ln, line) in lines {
        if let Some((col, c)) = line.chars().enumerate().find(|(_, c)| *c != '0' && *c != '1') {
            return Err(malformed(ln, col + 1, format!("unexpected character `{c}`")));
        }
        let got = line.len();
        if got != n {
            return Err(CliError::LengthMismatch { line: ln, expected: n, got });
        }
        let index = Word::parse(line)?.index();
        if !members.insert(index) {
            return Err(malformed(ln, 1, format!("duplicate string {line}")));
        }
    }
    Ok(RelationTable::from_members(n, &members)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(t: &RelationTable) -> Vec<String> {
        t.members().map(|w| w.to_string()).collect()
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(members(&builtin("balanced", 2).unwrap()), ["01", "10"]);
        assert_eq!(members(&builtin("eq", 2).unwrap()), ["00", "11"]);
        assert_eq!(members(&builtin("eq", 4).unwrap()), ["0000", "0101", "1010", "1111"]);
        assert_eq!(builtin("none", 5).unwrap().member_count(), 0);
        assert_eq!(builtin("all", 3).unwrap().member_count(), 8);
        assert_eq!(members(&builtin("parity-even", 2).unwrap()), ["00", "11"]);
        assert_eq!(members(&builtin("majority", 3).unwrap()), ["011", "101", "110", "111"]);
        assert!(matches!(builtin("eq", 3), Err(CliError::OddLengthForEq(3))));
        assert!(matches!(parse_relation("all", None), Err(CliError::MissingLength(_))));
    }

    #[test]
    fn file_format() {
        let t = parse_relation_text("# target\nn=3\n011\n\n# more\n101\n").unwrap();
        assert_eq!(members(&t), ["011", "101"]);
        assert_eq!(parse_relation_text("n=2\n").unwrap().member_count(), 0);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(
            parse_relation_text("n=2\n01\n0x\n"),
            Err(CliError::MalformedRelationFile { line: 3, column: 2, .. })
        ));
        assert!(matches!(
            parse_relation_text("n=2\n011\n"),
            Err(CliError::LengthMismatch { line: 2, expected: 2, got: 3 })
        ));
        assert!(matches!(
            parse_relation_text("n=2\n01\n01\n"),
            Err(CliError::MalformedRelationFile { line: 3, column: 1, .. })
        ));
        assert!(matches!(
            parse_relation_text("# only\n011\n"),
            Err(CliError::MalformedRelationFile { line: 2, column: 1, .. })
        ));
        assert!(matches!(
            parse_relation_text("n=0\n"),
            Err(CliError::MalformedRelationFile { line: 1, column: 3, .. })
        ));
        assert!(parse_relation_text("").is_err());
    }
}
