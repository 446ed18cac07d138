//! Text form of ring elements.
//!
//! ```text
//! expr := term ("+" term)* | "0"
//! term := INT "*" B "^" "(" RAT ")" | INT
//! ```
//! where `B` is `t` (characteristic p) or `p` (mixed). Printing emits one
//! term per nonzero digit, in increasing exponent order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring_core::{Exponent, RingDescriptor, RingElement};
use crate::scalar::ExpInt;

impl<I: ExpInt> fmt::Display for RingElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let b = self.mode().base_symbol();
        for (i, (e, c)) in self.terms().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{b}^({e})")?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(ch) = self.text[self.pos..].chars().next() {
            if !ch.is_whitespace() {
                break;
            }
            self.pos += ch.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == ch => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected {ch:?}, found {c:?}"))),
            None => Err(self.err(format!("expected {ch:?}, found end of input"))),
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn rational(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut out = String::new();
        if self.peek() == Some('-') {
            self.pos += 1;
            out.push('-');
        }
        out.push_str(self.digits()?);
        if self.peek() == Some('/') {
            self.pos += 1;
            out.push('/');
            out.push_str(self.digits()?);
        }
        Ok((out, start))
    }
}

impl<I: ExpInt> RingElement<I> {
    /// Parses the text form against a descriptor.
    pub fn parse(desc: &Arc<RingDescriptor<I>>, text: &str) -> Result<Self> {
        let base = desc.mode().base_symbol();
        let mut cur = Cursor { text, pos: 0 };
        let mut terms = Vec::new();
        loop {
            let coeff_at = {
                cur.skip_ws();
                cur.pos
            };
            let coeff: u64 = cur.digits()?.parse().map_err(|_| {
                Error::CoefficientOutOfRange(text[coeff_at..cur.pos].trim().to_string())
            })?;
            let exponent = if cur.peek() == Some('*') {
                cur.pos += 1;
                match cur.peek() {
                    Some(b) if b == base => cur.pos += 1,
                    Some(b) => {
                        return Err(cur.err(format!("expected base {base:?}, found {b:?}")))
                    }
                    None => return Err(cur.err("expected base symbol")),
                }
                cur.expect('^')?;
                cur.expect('(')?;
                let (rat, at) = cur.rational()?;
                cur.expect(')')?;
                let e = Exponent::parse(&rat).map_err(|_| Error::Syntax {
                    offset: at,
                    message: format!("malformed exponent {rat:?}"),
                })?;
                if e.is_negative() {
                    return Err(Error::BadExponent(e.to_string()));
                }
                desc.check_exponent(&e)?;
                e
            } else {
                Exponent::zero()
            };
            terms.push((exponent, coeff));
            match cur.peek() {
                None => break,
                Some('+') => cur.pos += 1,
                Some(c) => return Err(cur.err(format!("unexpected {c:?}"))),
            }
        }
        RingElement::from_terms(desc, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::Mode;
    use num_bigint::BigInt;

    fn desc(mode: Mode, p: u32, n: i64) -> Arc<RingDescriptor<BigInt>> {
        Arc::new(RingDescriptor::new(mode, p, Exponent::from_int(n)).unwrap())
    }

    #[test]
    fn carries_on_parse() {
        let d = desc(Mode::Mixed, 3, 4);
        let x = RingElement::parse(&d, "5*p^(1/3)").unwrap();
        assert_eq!(x.to_string(), "2*p^(1/3) + 1*p^(4/3)");
    }

    #[test]
    fn round_trip() {
        let d = desc(Mode::CharP, 2, 4);
        for s in ["0", "1*t^(0)", "1*t^(1/4) + 1*t^(3/2)"] {
            let x = RingElement::parse(&d, s).unwrap();
            assert_eq!(x.to_string(), s);
        }
        let x = RingElement::parse(&d, "1").unwrap();
        assert_eq!(x.to_string(), "1*t^(0)");
    }

    #[test]
    fn rejections() {
        let d = desc(Mode::Mixed, 3, 4);
        assert!(matches!(
            RingElement::parse(&d, "1*p^(-1/3)"),
            Err(Error::BadExponent(_))
        ));
        assert!(matches!(
            RingElement::parse(&d, "1*p^(1/2)"),
            Err(Error::BadExponent(_))
        ));
        assert!(matches!(
            RingElement::parse(&d, "1*t^(1)"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            RingElement::parse(&d, "1 +"),
            Err(Error::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            RingElement::parse(&d, "99999999999999999999999"),
            Err(Error::CoefficientOutOfRange(_))
        ));
    }

    #[test]
    fn truncates_at_precision() {
        let d = desc(Mode::CharP, 2, 1);
        let x = RingElement::parse(&d, "1*t^(1/2) + 1*t^(1)").unwrap();
        assert_eq!(x.to_string(), "1*t^(1/2)");
        assert!(!x.is_exact());
    }
}
