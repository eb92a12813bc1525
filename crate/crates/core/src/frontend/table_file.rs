//! Truth-table files:
//!
//! ```text
//! vars x1[1] x2[1]
//! 0110
//! ```
//!
//! The first line declares the predicate's variables in input order. The
//! second holds the table, index 0 first, as `0`/`1` characters or as `0x`
//! followed by hex digits (big-endian nibbles; unused leading bits of the
//! first nibble must be zero).

use std::path::Path;

use crate::classical::TruthTableOracle;
use crate::error::{Error, Result};
use crate::formula::{Formula, Variable};

pub fn load_truth_table(path: impl AsRef<Path>) -> Result<TruthTableOracle> {
    parse_truth_table(&std::fs::read_to_string(path)?)
}

pub fn parse_truth_table(text: &str) -> Result<TruthTableOracle> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::VarsMismatch("missing `vars` line".into()))?;
    let vars = parse_vars(header)?;
    let n: usize = vars.iter().map(|v| v.width).sum();
    let body = lines.next().unwrap_or("");
    if let Some(extra) = lines.next() {
        return Err(Error::VarsMismatch(format!("unexpected extra line `{extra}`")));
    }
    let size = 1usize << n;
    let bits = match body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        Some(hex) => hex_bits(hex, size)?,
        None => body
            .chars()
            .enumerate()
            .map(|(position, ch)| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadCharacter { ch, position }),
            })
            .collect::<Result<Vec<_>>>()?,
    };
    TruthTableOracle::new(n, bits)?.with_vars(vars)
}

fn parse_vars(line: &str) -> Result<Vec<Variable>> {
    let mut words = line.split_whitespace();
    if words.next() != Some("vars") {
        return Err(Error::VarsMismatch(format!("expected `vars` header, found `{line}`")));
    }
    words
        .map(|w| {
            let bad = || Error::VarsMismatch(format!("bad declaration `{w}`"));
            let (name, rest) = w.split_once('[').ok_or_else(bad)?;
            let width = rest
                .strip_suffix(']')
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(bad)?;
            if name.is_empty() {
                return Err(bad());
            }
            if width == 0 {
                return Err(Error::ZeroWidth(name.to_string()));
            }
            Ok(Variable::new(name, width))
        })
        .collect()
}

fn hex_bits(hex: &str, size: usize) -> Result<Vec<bool>> {
    let digits = size.div_ceil(4);
    if hex.len() != digits {
        return Err(Error::LengthMismatch {
            expected: size,
            found: 4 * hex.chars().count(),
        });
    }
    let mut bits = Vec::with_capacity(4 * digits);
    for (i, ch) in hex.chars().enumerate() {
        let v = ch.to_digit(16).ok_or(Error::BadCharacter { ch, position: i + 2 })?;
        bits.extend((0..4).rev().map(|b| (v >> b) & 1 == 1));
    }
    let pad = bits.len() - size;
    if bits[..pad].iter().any(|&b| b) {
        return Err(Error::LengthMismatch {
            expected: size,
            found: bits.len(),
        });
    }
    Ok(bits.split_off(pad))
}

/// Checks that the table's declaration matches the formula's free then
/// bound variables.
pub fn check_vars(table: &TruthTableOracle, formula: &Formula) -> Result<()> {
    let Some(vars) = table.vars() else {
        return Ok(());
    };
    let want: Vec<&Variable> = formula.variables().collect();
    if vars.len() != want.len() || vars.iter().zip(&want).any(|(a, b)| a != *b) {
        let show = |vs: Vec<&Variable>| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        return Err(Error::VarsMismatch(format!(
            "table declares `{}`, formula declares `{}`",
            show(vars.iter().collect()),
            show(want)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_body() {
        let t = parse_truth_table("vars x1[1] x2[1]\n0110\n").unwrap();
        assert_eq!(t.bits(), &[false, true, true, false]);
        assert_eq!(t.vars().unwrap().len(), 2);
    }

    #[test]
    fn hex_body() {
        let t = parse_truth_table("vars x[2]\n0xF").unwrap();
        assert_eq!(t.to_bit_string(), "1111");
        let t = parse_truth_table("vars x[3]\n0x6a").unwrap();
        assert_eq!(t.to_bit_string(), "01101010");
        let t = parse_truth_table("vars x[1]\n0x2").unwrap();
        assert_eq!(t.to_bit_string(), "10");
        assert!(parse_truth_table("vars x[1]\n0x4").is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_truth_table("vars x1[1] x2[1]\n011"),
            Err(Error::LengthMismatch { expected: 4, found: 3 })
        ));
        assert!(matches!(
            parse_truth_table("vars x[2]\n01a0"),
            Err(Error::BadCharacter { ch: 'a', position: 2 })
        ));
        assert!(matches!(
            parse_truth_table("x[2]\n0110"),
            Err(Error::VarsMismatch(_))
        ));
    }

    #[test]
    fn declaration_must_match_formula() {
        let f = crate::frontend::parse_formula("forall x1[1] exists x2[1] : p").unwrap();
        let ok = parse_truth_table("vars x1[1] x2[1]\n0110").unwrap();
        assert!(check_vars(&ok, &f).is_ok());
        let swapped = parse_truth_table("vars x2[1] x1[1]\n0110").unwrap();
        assert!(matches!(check_vars(&swapped, &f), Err(Error::VarsMismatch(_))));
    }
}
