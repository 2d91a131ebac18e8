//! Canonical line-oriented text form of a [`MachineEncoding`].
//!
//! ```text
//! m=<int>
//! sacc=<comma-separated indices, ascending>
//! <σ>: [(i,gψ,gα,gθ,gβ),...] cnot=(i,j) D=<int>     one line per design, σ ∈ {L,0,1,R}
//! ```
//!
//! Design lines are grouped by symbol in the order `L, 0, 1, R`; a symbol with
//! an empty design list contributes no lines. Angles are grid indices, never
//! floats, so the form round-trips exactly.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{DesignTuple, GateParams, MachineEncoding, Symbol, SymbolDesign};
use crate::error::{Error, Result};

pub fn serialize(enc: &MachineEncoding) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "m={}", enc.m());
    let sacc: Vec<String> = enc.s_acc().iter().map(|u| u.to_string()).collect();
    let _ = writeln!(out, "sacc={}", sacc.join(","));
    for symbol in Symbol::ALL {
        for t in enc.design(symbol).designs() {
            let singles: Vec<String> = t
                .singles()
                .iter()
                .map(|(w, p)| {
                    let [a, b, c, d] = p.indices();
                    format!("({w},{a},{b},{c},{d})")
                })
                .collect();
            let (i, j) = t.cnot();
            let _ = writeln!(
                out,
                "{}: [{}] cnot=({i},{j}) D={}",
                symbol.as_char(),
                singles.join(","),
                t.grid()
            );
        }
    }
    out
}

pub fn deserialize(text: &str) -> Result<MachineEncoding> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();

    let (ln, line) = lines.next().ok_or_else(|| malformed(1, 1, "missing `m=` line"))?;
    let mut cur = Cursor::new(ln, line);
    cur.expect("m=")?;
    let m = cur.number()?;
    cur.end()?;
    if m == 0 || m > super::MAX_QUBITS {
        return Err(malformed(ln, 3, format!("qubit count {m} out of range")));
    }

    let (ln, line) = lines
        .next()
        .ok_or_else(|| malformed(2, 1, "missing `sacc=` line"))?;
    let mut cur = Cursor::new(ln, line);
    cur.expect("sacc=")?;
    let mut s_acc = BTreeSet::new();
    if !cur.at_end() {
        loop {
            let col = cur.column();
            let u = cur.number()?;
            if u >= 1 << m {
                return Err(malformed(ln, col, format!("accepting index {u} >= 2^{m}")));
            }
            if !s_acc.insert(u) {
                return Err(malformed(ln, col, format!("duplicate accepting index {u}")));
            }
            if cur.at_end() {
                break;
            }
            cur.expect(",")?;
        }
    }

    let mut designs: [Vec<DesignTuple>; 4] = Default::default();
    let mut last_symbol = 0;
    for (ln, line) in lines {
        if line.is_empty() {
            return Err(malformed(ln, 1, "blank line"));
        }
        let mut cur = Cursor::new(ln, line);
        let symbol = cur
            .peek()
            .and_then(Symbol::from_char)
            .ok_or_else(|| malformed(ln, 1, "expected symbol L, 0, 1 or R"))?;
        if symbol.index() < last_symbol {
            return Err(malformed(ln, 1, "design lines out of symbol order"));
        }
        last_symbol = symbol.index();
        cur.bump();
        cur.expect(": [")?;
        let mut singles = Vec::new();
        let mut raw = Vec::new();
        if cur.peek() != Some(']') {
            loop {
                let col = cur.column();
                cur.expect("(")?;
                let wire = cur.number()?;
                let mut g = [0u32; 4];
                for slot in &mut g {
                    cur.expect(",")?;
                    *slot = cur.number_u32()?;
                }
                cur.expect(")")?;
                raw.push((col, wire, g));
                if cur.peek() == Some(']') {
                    break;
                }
                cur.expect(",")?;
            }
        }
        cur.expect("] cnot=(")?;
        let ccol = cur.column();
        let i = cur.number()?;
        cur.expect(",")?;
        let j = cur.number()?;
        cur.expect(") D=")?;
        let dcol = cur.column();
        let grid = cur.number_u32()?;
        cur.end()?;
        if grid == 0 {
            return Err(malformed(ln, dcol, "grid resolution must be positive"));
        }
        for (col, wire, [a, b, c, d]) in raw {
            if wire == 0 || wire > m {
                return Err(malformed(ln, col, format!("wire {wire} out of range [1, {m}]")));
            }
            let p = GateParams::new(a, b, c, d, grid)
                .map_err(|e| malformed(ln, col, e.to_string()))?;
            singles.push((wire, p));
        }
        for w in [i, j] {
            if w == 0 || w > m {
                return Err(malformed(ln, ccol, format!("cnot wire {w} out of range [1, {m}]")));
            }
        }
        let t = DesignTuple::new(grid, singles, (i, j)).map_err(|e| malformed(ln, 1, e.to_string()))?;
        designs[symbol.index()].push(t);
    }

    let symbol_designs = designs.map(SymbolDesign::new);
    MachineEncoding::new(m, s_acc, symbol_designs).map_err(|e| malformed(0, 0, e.to_string()))
}

fn malformed(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::MalformedEncoding {
        line,
        column,
        message: message.into(),
    }
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Self { line, text, pos: 0 }
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        malformed(self.line, self.column(), message)
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected a number"));
        }
        // Leading zeros would make two spellings of one value.
        if len > 1 && rest.starts_with('0') {
            return Err(self.error("leading zero in number"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<usize> {
        let col = self.column();
        let d = self.digits()?;
        d.parse()
            .map_err(|_| malformed(self.line, col, "number out of range"))
    }

    fn number_u32(&mut self) -> Result<u32> {
        let col = self.column();
        let d = self.digits()?;
        d.parse()
            .map_err(|_| malformed(self.line, col, "number out of range"))
    }

    fn end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing characters"))
        }
    }
}
