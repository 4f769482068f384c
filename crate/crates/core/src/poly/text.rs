//! Text forms: symbolic (`x^8+x^3+1`), `0b` binary written most significant
//! coefficient first, and `0x` hex of the little-endian coefficient integer.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Poly, WORD};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Symbolic,
    Binary,
    Hex,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

pub(super) fn parse(src: &str) -> Result<Poly> {
    let lead = src.len() - src.trim_start().len();
    let s = src.trim();
    if s.is_empty() {
        return Err(err(0, "empty input"));
    }
    if let Some(digits) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        parse_radix(digits, lead + 2, 4)
    } else if let Some(digits) = s.strip_prefix("0b").or_else(|| s.strip_prefix("0B")) {
        parse_radix(digits, lead + 2, 1)
    } else {
        parse_symbolic(s, lead)
    }
}

/// Digits are most-significant first; each digit carries `bits` coefficients.
fn parse_radix(digits: &str, offset: usize, bits: usize) -> Result<Poly> {
    if digits.is_empty() {
        return Err(err(offset, "missing digits after prefix"));
    }
    let radix = 1u32 << bits;
    let mut vals = Vec::with_capacity(digits.len());
    for (i, c) in digits.char_indices() {
        if c == '_' {
            continue;
        }
        let v = c
            .to_digit(radix)
            .ok_or_else(|| err(offset + i, format!("invalid base-{radix} digit {c:?}")))?;
        vals.push(v as u64);
    }
    if vals.is_empty() {
        return Err(err(offset, "missing digits after prefix"));
    }
    let mut words = vec![0u64; (vals.len() * bits).div_ceil(WORD)];
    for (k, v) in vals.iter().rev().enumerate() {
        let pos = k * bits;
        words[pos / WORD] |= v << (pos % WORD);
    }
    Ok(Poly::from_words(words))
}

fn parse_symbolic(s: &str, offset: usize) -> Result<Poly> {
    if s == "0" {
        return Ok(Poly::zero());
    }
    let mut seen = BTreeSet::new();
    let mut start = 0;
    for term in s.split('+') {
        let pos = offset + start;
        start += term.len() + 1;
        let inner_off = term.len() - term.trim_start().len();
        let t = term.trim();
        if t.is_empty() {
            return Err(err(pos, "empty term"));
        }
        let exp = parse_term(t, pos + inner_off)?;
        if !seen.insert(exp) {
            return Err(err(
                pos + inner_off,
                format!("duplicate term of degree {exp}"),
            ));
        }
    }
    Ok(Poly::from_exponents(seen))
}

fn parse_term(t: &str, pos: usize) -> Result<usize> {
    if t == "1" {
        return Ok(0);
    }
    let rest = t
        .strip_prefix('x')
        .ok_or_else(|| err(pos, format!("malformed term {t:?}")))?;
    if rest.is_empty() {
        return Ok(1);
    }
    let digits = rest
        .strip_prefix('^')
        .ok_or_else(|| err(pos + 1, format!("malformed term {t:?}")))?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(pos + 2, format!("malformed exponent {digits:?}")));
    }
    digits
        .parse::<usize>()
        .map_err(|_| err(pos + 2, format!("exponent {digits:?} out of range")))
}

pub(super) fn render(p: &Poly, format: Format) -> String {
    match format {
        Format::Symbolic => {
            if p.is_zero() {
                return "0".into();
            }
            let terms: Vec<String> = p
                .exponents()
                .rev()
                .map(|e| match e {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{e}"),
                })
                .collect();
            terms.join("+")
        }
        Format::Binary => match p.deg_opt() {
            None => "0b0".into(),
            Some(d) => {
                let mut s = String::with_capacity(d + 3);
                s.push_str("0b");
                for i in (0..=d).rev() {
                    s.push(if p.coeff(i) { '1' } else { '0' });
                }
                s
            }
        },
        Format::Hex => {
            let Some((top, rest)) = p.words.split_last() else {
                return "0x0".into();
            };
            let mut s = format!("0x{top:x}");
            for w in rest.iter().rev() {
                s.push_str(&format!("{w:016x}"));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let m = parse("x^2+x+1").unwrap();
        assert_eq!(m, Poly::m());
        assert_eq!(parse("0x7").unwrap(), m);
        assert_eq!(parse("0b111").unwrap(), m);
        assert_eq!(parse("1+x+x^2").unwrap(), m);
        let a = parse("x^8+x^3+1").unwrap();
        assert_eq!(a.exponents().collect::<Vec<_>>(), vec![0, 3, 8]);
        assert_eq!(parse("0x109").unwrap(), a);
        assert_eq!(parse(" x^8 + x^3 + 1 ").unwrap(), a);
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert!(matches!(parse(""), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("x+x"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse("x^2+y"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("x^2++1"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse("x^"), Err(Error::Parse { .. })));
        assert!(matches!(parse("0x7g"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("0b12"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("0x"), Err(Error::Parse { .. })));
        assert!(Poly::parse_nonzero("0").is_err());
        assert!(Poly::parse_nonzero("0x0").is_err());
    }

    #[test]
    fn render_examples() {
        let m = Poly::m();
        assert_eq!(render(&m, Format::Symbolic), "x^2+x+1");
        assert_eq!(render(&m, Format::Hex), "0x7");
        assert_eq!(render(&m, Format::Binary), "0b111");
        assert_eq!(render(&Poly::zero(), Format::Symbolic), "0");
        assert_eq!(render(&Poly::zero(), Format::Hex), "0x0");
        assert_eq!(
            render(&Poly::monomial(64), Format::Hex),
            "0x10000000000000000"
        );
    }
}
