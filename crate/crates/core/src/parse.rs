//! Text syntax for structured groups.
//!
//! ```text
//! group := term { "+" term } | "0"
//! term  := atom [ "^" mult ]
//! atom  := "Z" | "Z(" int ")" | "Z(" prime "^" int ")" | "Z(" prime "^inf)"
//!        | "Q" | "J(" prime ")" | "T(" prime ")"
//! mult  := posint | "(" cardinal ")"
//! ```

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::arith;
use crate::cardinal::{Cardinal, CardinalParser};
use crate::group::{Atom, StructuredGroup};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct GroupParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, GroupParseError> {
        self.error_at(self.pos, message)
    }

    fn error_at<T>(&self, offset: usize, message: impl Into<String>) -> Result<T, GroupParseError> {
        Err(GroupParseError {
            offset,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GroupParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(format!("expected `{token}`"))
        }
    }

    fn integer(&mut self) -> Result<u64, GroupParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<u64>() {
            Ok(n) => Ok(n),
            Err(_) => self.error_at(start, "integer too large"),
        }
    }

    fn prime(&mut self) -> Result<u64, GroupParseError> {
        self.skip_ws();
        let start = self.pos;
        let p = self.integer()?;
        if !arith::is_prime(p) {
            return self.error_at(start, format!("{p} is not prime"));
        }
        Ok(p)
    }

    fn group(&mut self) -> Result<StructuredGroup, GroupParseError> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(StructuredGroup::zero());
        }
        let mut g = StructuredGroup::zero();
        loop {
            let (atoms, mult) = self.term()?;
            for atom in atoms {
                g.add_summand(atom, mult.clone());
            }
            if !self.eat("+") {
                break;
            }
        }
        Ok(g)
    }

    fn term(&mut self) -> Result<(Vec<Atom>, Cardinal), GroupParseError> {
        let atoms = self.atom()?;
        let mult = if self.eat("^") {
            self.multiplicity()?
        } else {
            Cardinal::one()
        };
        Ok((atoms, mult))
    }

    fn multiplicity(&mut self) -> Result<Cardinal, GroupParseError> {
        self.skip_ws();
        let start = self.pos;
        let mult = if self.eat("(") {
            let mut inner = CardinalParser {
                src: self.src,
                pos: self.pos,
            };
            let card = inner.cardinal().map_err(|e| GroupParseError {
                offset: e.offset,
                message: e.message,
            })?;
            self.pos = inner.pos;
            self.expect(")")?;
            card
        } else {
            Cardinal::finite(self.integer()?)
        };
        if mult.is_zero() {
            return self.error_at(start, "multiplicity must be positive");
        }
        Ok(mult)
    }

    /// One atom of the grammar; `Z(n)` may expand to several prime-power atoms.
    fn atom(&mut self) -> Result<Vec<Atom>, GroupParseError> {
        self.skip_ws();
        if self.eat("Q") {
            return Ok(vec![Atom::Q]);
        }
        if self.eat("J(") {
            let p = self.prime()?;
            self.expect(")")?;
            return Ok(vec![Atom::PAdic(p)]);
        }
        if self.eat("T(") {
            let p = self.prime()?;
            self.expect(")")?;
            return Ok(vec![Atom::TorProd(p)]);
        }
        if self.eat("Z(") {
            self.skip_ws();
            let start = self.pos;
            let n = self.integer()?;
            if self.eat("^") {
                if !arith::is_prime(n) {
                    return self.error_at(start, format!("{n} is not prime"));
                }
                if self.eat("inf") {
                    self.expect(")")?;
                    return Ok(vec![Atom::Prufer(n)]);
                }
                let at = self.pos;
                let k = self.integer()?;
                let k = match k.to_u32() {
                    Some(k) if k >= 1 => k,
                    _ => return self.error_at(at, "exponent must be a positive 32-bit integer"),
                };
                self.expect(")")?;
                return Ok(vec![Atom::Cyc { p: n, k }]);
            }
            self.expect(")")?;
            if n == 0 {
                return self.error_at(start, "Z(0) is not a finite cyclic group; write Z");
            }
            return Ok(arith::factorize(n)
                .into_iter()
                .map(|(p, k)| Atom::Cyc { p, k })
                .collect());
        }
        if self.eat("Z") {
            return Ok(vec![Atom::Z]);
        }
        self.error("expected an atom (Z, Z(n), Z(p^k), Z(p^inf), Q, J(p), T(p))")
    }
}

/// Parse a group expression such as `Z^2 + Z(8)^(aleph0) + Q + Z(3^inf)`.
pub fn parse_group(text: &str) -> Result<StructuredGroup, GroupParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let g = parser.group()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(g)
}

impl std::str::FromStr for StructuredGroup {
    type Err = GroupParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_group(s)
    }
}
