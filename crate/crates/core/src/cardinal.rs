//! Symbolic cardinal numbers.
//!
//! A [`Cardinal`] is either an exact natural number, an aleph `ℵ_i` with a
//! natural index, an iterated power `2^κ`, or a finite supremum of such
//! terms. Values are kept in a normal form:
//!
//! * `Exp` never wraps a finite cardinal (`2^n` is evaluated) and never wraps
//!   a `Sup` (`2^(sup S) = sup {2^s : s ∈ S}`), so every infinite non-`Sup`
//!   value is a *tower* `2^2^…^ℵ_i`;
//! * a `Sup` holds at least two towers, no one of which is provably `≤`
//!   another.
//!
//! Comparisons come in two flavours. [`CardinalMode::Zfc`] only answers what
//! follows from the rules `finite < infinite`, `ℵ_i < ℵ_j (i < j)`,
//! `κ < 2^κ`, `κ ≤ λ ⟹ 2^κ ≤ 2^λ`, `ℵ_{i+1} ≤ 2^{ℵ_i}` and the obvious
//! supremum rules; everything else is [`Ordering::Unknown`].
//! [`CardinalMode::Gch`] rewrites `2^{ℵ_i} = ℵ_{i+1}` and is total.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::verdict::Verdict;

/// Largest exponent for which `2^n` is materialised as an exact integer.
pub const MAX_FINITE_EXPONENT: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(BigUint),
    Aleph(u32),
    Exp(Box<Cardinal>),
    Sup(Vec<Cardinal>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ordering {
    Lt,
    Eq,
    Gt,
    Unknown,
}

impl Ordering {
    pub fn reverse(self) -> Ordering {
        match self {
            Ordering::Lt => Ordering::Gt,
            Ordering::Gt => Ordering::Lt,
            o => o,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Ordering::Unknown
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Lt => "lt",
            Ordering::Eq => "eq",
            Ordering::Gt => "gt",
            Ordering::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CardinalMode {
    #[default]
    Zfc,
    Gch,
}

impl fmt::Display for CardinalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CardinalMode::Zfc => "zfc",
            CardinalMode::Gch => "gch",
        })
    }
}

impl FromStr for CardinalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "zfc" => Ok(CardinalMode::Zfc),
            "gch" => Ok(CardinalMode::Gch),
            other => Err(format!(
                "unknown cardinal mode `{other}` (expected zfc or gch)"
            )),
        }
    }
}

/// `2^…^ℵ_index` with `height` exponentiations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Tower {
    height: u32,
    index: u32,
}

impl Tower {
    fn le(self, other: Tower) -> bool {
        // ℵ_{j+d} ≤ 2^…^ℵ_j (d times), then monotonicity of 2^(·).
        self.height <= other.height
            && u64::from(self.index)
                <= u64::from(other.index) + u64::from(other.height - self.height)
    }

    fn lt(self, other: Tower) -> bool {
        if self.height == 0 && other.height == 0 {
            return self.index < other.index;
        }
        // A strict step can only come from Cantor at the outermost level.
        self.height < other.height
            && u64::from(self.index)
                < u64::from(other.index) + u64::from(other.height - self.height)
    }

    fn gch_index(self) -> u64 {
        u64::from(self.index) + u64::from(self.height)
    }
}

/// Value of a cardinal once GCH has collapsed every tower to an aleph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum GchValue {
    Finite(BigUint),
    Aleph(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cardinal parse error at offset {offset}: {message}")]
pub struct CardinalParseError {
    pub offset: usize,
    pub message: String,
}

impl Cardinal {
    pub fn zero() -> Cardinal {
        Cardinal::Finite(BigUint::zero())
    }

    pub fn one() -> Cardinal {
        Cardinal::Finite(BigUint::one())
    }

    pub fn finite(n: u64) -> Cardinal {
        Cardinal::Finite(BigUint::from(n))
    }

    pub fn aleph(i: u32) -> Cardinal {
        Cardinal::Aleph(i)
    }

    /// `ω = ℵ_0`.
    pub fn omega() -> Cardinal {
        Cardinal::Aleph(0)
    }

    /// The continuum `𝔠 = 2^{ℵ_0}`.
    pub fn continuum() -> Cardinal {
        Cardinal::Exp(Box::new(Cardinal::Aleph(0)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Cardinal::Finite(n) if n.is_zero())
    }

    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            Cardinal::Finite(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.as_finite().and_then(|n| n.to_u64())
    }

    fn tower(&self) -> Option<Tower> {
        match self {
            Cardinal::Aleph(i) => Some(Tower {
                height: 0,
                index: *i,
            }),
            Cardinal::Exp(inner) => inner.tower().map(|t| Tower {
                height: t.height + 1,
                ..t
            }),
            _ => None,
        }
    }

    fn gch_value(&self) -> GchValue {
        match self {
            Cardinal::Finite(n) => GchValue::Finite(n.clone()),
            Cardinal::Sup(members) => members
                .iter()
                .map(Cardinal::gch_value)
                .max()
                .expect("normal-form sup is non-empty"),
            other => GchValue::Aleph(
                other
                    .tower()
                    .expect("normal-form infinite cardinal is a tower")
                    .gch_index(),
            ),
        }
    }

    /// Re-establish the normal form. Idempotent.
    pub fn normalize(&self) -> Cardinal {
        match self {
            Cardinal::Finite(_) | Cardinal::Aleph(_) => self.clone(),
            Cardinal::Exp(inner) => inner.normalize().exp2(),
            Cardinal::Sup(members) => sup(members.iter().map(Cardinal::normalize)),
        }
    }

    /// Cardinal addition.
    pub fn add(&self, other: &Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a + b),
            _ => sup([self.clone(), other.clone()]),
        }
    }

    /// Cardinal multiplication; `0 · κ = 0`.
    pub fn mul(&self, other: &Cardinal) -> Cardinal {
        if self.is_zero() || other.is_zero() {
            return Cardinal::zero();
        }
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => Cardinal::Finite(a * b),
            _ => sup([self.clone(), other.clone()]),
        }
    }

    /// `2^self`.
    ///
    /// # Panics
    ///
    /// Panics for a finite exponent above [`MAX_FINITE_EXPONENT`]; callers
    /// that only need the value up to an `ω` factor should not materialise it.
    pub fn exp2(&self) -> Cardinal {
        match self {
            Cardinal::Finite(n) => {
                let e = n
                    .to_u64()
                    .filter(|e| *e <= MAX_FINITE_EXPONENT)
                    .unwrap_or_else(|| panic!("2^{n} is too large to materialise"));
                Cardinal::Finite(BigUint::one() << e)
            }
            Cardinal::Sup(members) => sup(members.iter().map(Cardinal::exp2)),
            tower => Cardinal::Exp(Box::new(tower.clone())),
        }
    }

    /// `ω · self` for non-zero `self`, i.e. `max(ℵ_0, self)`.
    pub fn omega_times(&self) -> Cardinal {
        Cardinal::omega().mul(self)
    }

    /// ZFC-provable `self ≤ other`.
    pub fn provably_le(&self, other: &Cardinal) -> bool {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => a <= b,
            (Cardinal::Finite(_), _) => true,
            (_, Cardinal::Finite(_)) => false,
            (Cardinal::Sup(xs), _) => xs.iter().all(|x| x.provably_le(other)),
            (_, Cardinal::Sup(ys)) => ys.iter().any(|y| self.provably_le(y)),
            _ => match (self.tower(), other.tower()) {
                (Some(a), Some(b)) => a.le(b),
                _ => false,
            },
        }
    }

    /// ZFC-provable `self < other`.
    pub fn provably_lt(&self, other: &Cardinal) -> bool {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => a < b,
            (Cardinal::Finite(_), _) => true,
            (_, Cardinal::Finite(_)) => false,
            (Cardinal::Sup(xs), _) => xs.iter().all(|x| x.provably_lt(other)),
            (_, Cardinal::Sup(ys)) => ys.iter().any(|y| self.provably_lt(y)),
            _ => match (self.tower(), other.tower()) {
                (Some(a), Some(b)) => a.lt(b),
                _ => false,
            },
        }
    }

    /// Render back to the text grammar (`aleph0`, `2^aleph0`, `sup{…}`).
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Cardinal, CardinalParseError> {
        let mut p = CardinalParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let value = p.cardinal()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input after cardinal"));
        }
        Ok(value)
    }
}

/// Normalised supremum of a finite, non-empty family. The empty family has
/// supremum 0.
pub fn sup<I: IntoIterator<Item = Cardinal>>(items: I) -> Cardinal {
    let mut max_finite: Option<BigUint> = None;
    let mut towers: Vec<Cardinal> = Vec::new();
    let mut stack: Vec<Cardinal> = items.into_iter().collect();
    while let Some(item) = stack.pop() {
        match item {
            Cardinal::Finite(n) => {
                if max_finite.as_ref().is_none_or(|m| n > *m) {
                    max_finite = Some(n);
                }
            }
            Cardinal::Sup(members) => stack.extend(members),
            exp @ Cardinal::Exp(_) => {
                let normal = exp.normalize();
                if normal.tower().is_some() {
                    towers.push(normal);
                } else {
                    stack.push(normal);
                }
            }
            aleph => towers.push(aleph),
        }
    }
    if towers.is_empty() {
        return Cardinal::Finite(max_finite.unwrap_or_default());
    }
    towers.sort();
    towers.dedup();
    let antichain: Vec<Cardinal> = towers
        .iter()
        .enumerate()
        .filter(|(i, t)| {
            !towers
                .iter()
                .enumerate()
                .any(|(j, u)| *i != j && t.provably_le(u))
        })
        .map(|(_, t)| t.clone())
        .collect();
    if antichain.len() == 1 {
        antichain.into_iter().next().unwrap()
    } else {
        Cardinal::Sup(antichain)
    }
}

/// Compare two normal-form cardinals.
pub fn cmp(a: &Cardinal, b: &Cardinal, mode: CardinalMode) -> Ordering {
    match mode {
        CardinalMode::Zfc => {
            if a == b {
                Ordering::Eq
            } else if a.provably_lt(b) {
                Ordering::Lt
            } else if b.provably_lt(a) {
                Ordering::Gt
            } else if a.provably_le(b) && b.provably_le(a) {
                Ordering::Eq
            } else {
                Ordering::Unknown
            }
        }
        CardinalMode::Gch => match a.gch_value().cmp(&b.gch_value()) {
            std::cmp::Ordering::Less => Ordering::Lt,
            std::cmp::Ordering::Equal => Ordering::Eq,
            std::cmp::Ordering::Greater => Ordering::Gt,
        },
    }
}

/// Decide `log a ≤ b`, i.e. `a ≤ 2^b`, without ever computing a logarithm.
pub fn leq_log(a: &Cardinal, b: &Cardinal, mode: CardinalMode) -> Verdict {
    let bound = b.exp2();
    match mode {
        CardinalMode::Gch => Verdict::from(cmp(a, &bound, mode) != Ordering::Gt),
        CardinalMode::Zfc => {
            if a.provably_le(&bound) {
                Verdict::True
            } else if bound.provably_lt(a) {
                Verdict::False
            } else {
                Verdict::Unknown
            }
        }
    }
}

impl From<u64> for Cardinal {
    fn from(n: u64) -> Self {
        Cardinal::finite(n)
    }
}

impl From<BigUint> for Cardinal {
    fn from(n: BigUint) -> Self {
        Cardinal::Finite(n)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(i) => write!(f, "aleph{i}"),
            Cardinal::Exp(inner) => write!(f, "2^{inner}"),
            Cardinal::Sup(members) => {
                f.write_str("sup{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl FromStr for Cardinal {
    type Err = CardinalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cardinal::parse(s)
    }
}

/// Recursive-descent parser for the cardinal grammar
/// `n | alephN | c | 2^<cardinal> | sup{<cardinal>,…} | (<cardinal>)`.
pub(crate) struct CardinalParser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> CardinalParser<'a> {
    pub(crate) fn error(&self, message: &str) -> CardinalParseError {
        CardinalParseError {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
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

    fn digits(&mut self) -> Option<BigUint> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        BigUint::parse_bytes(text.as_bytes(), 10)
    }

    pub(crate) fn cardinal(&mut self) -> Result<Cardinal, CardinalParseError> {
        self.skip_ws();
        if self.eat("aleph") {
            let at = self.pos;
            let index = self
                .digits()
                .ok_or_else(|| self.error("expected aleph index"))?
                .to_u32()
                .ok_or(CardinalParseError {
                    offset: at,
                    message: "aleph index too large".into(),
                })?;
            return Ok(Cardinal::Aleph(index));
        }
        if self.eat("sup{") {
            let mut members = vec![self.cardinal()?];
            while self.eat(",") {
                members.push(self.cardinal()?);
            }
            if !self.eat("}") {
                return Err(self.error("expected `}` closing sup"));
            }
            return Ok(sup(members));
        }
        if self.eat("(") {
            let inner = self.cardinal()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        if self.eat("c") {
            return Ok(Cardinal::continuum());
        }
        let start = self.pos;
        match self.digits() {
            Some(n) => {
                if n == BigUint::from(2u32) && self.eat("^") {
                    let exponent = self.cardinal()?;
                    if exponent
                        .as_finite()
                        .is_some_and(|e| *e > BigUint::from(MAX_FINITE_EXPONENT))
                    {
                        return Err(CardinalParseError {
                            offset: start,
                            message: "finite power of two too large".into(),
                        });
                    }
                    Ok(exponent.exp2())
                } else {
                    Ok(Cardinal::Finite(n))
                }
            }
            None => Err(self.error("expected a cardinal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> Cardinal {
        Cardinal::continuum()
    }

    #[test]
    fn cantor_and_independence() {
        assert_eq!(
            cmp(&Cardinal::omega(), &c(), CardinalMode::Zfc),
            Ordering::Lt
        );
        assert_eq!(
            cmp(&c(), &Cardinal::aleph(2), CardinalMode::Zfc),
            Ordering::Unknown
        );
        assert_eq!(
            cmp(&c(), &Cardinal::aleph(1), CardinalMode::Gch),
            Ordering::Eq
        );
        // ℵ_1 ≤ 𝔠 is provable but strictness is not (CH).
        assert_eq!(
            cmp(&Cardinal::aleph(1), &c(), CardinalMode::Zfc),
            Ordering::Unknown
        );
    }

    #[test]
    fn arithmetic_absorbs() {
        assert_eq!(
            Cardinal::finite(3).add(&Cardinal::omega()),
            Cardinal::omega()
        );
        assert_eq!(Cardinal::omega().mul(&c()), c());
        assert_eq!(
            sup([Cardinal::finite(2).exp2(), Cardinal::omega()]),
            Cardinal::omega()
        );
        assert_eq!(Cardinal::zero().mul(&c()), Cardinal::zero());
        assert_eq!(
            Cardinal::finite(5).mul(&Cardinal::finite(7)),
            Cardinal::finite(35)
        );
    }

    #[test]
    fn exp_of_finite_is_evaluated() {
        assert_eq!(Cardinal::finite(10).exp2(), Cardinal::finite(1024));
        assert_eq!(
            Cardinal::Exp(Box::new(Cardinal::finite(3))).normalize(),
            Cardinal::finite(8)
        );
    }

    #[test]
    fn incomparable_sup_is_kept() {
        let s = sup([c(), Cardinal::aleph(2)]);
        assert!(matches!(s, Cardinal::Sup(ref m) if m.len() == 2));
        // sup is an upper bound of both
        assert!(c().provably_le(&s));
        assert!(Cardinal::aleph(2).provably_le(&s));
        // and exp distributes over it
        let e = s.exp2();
        assert!(matches!(e, Cardinal::Sup(ref m) if m.len() == 2));
        assert_eq!(
            cmp(&s, &Cardinal::aleph(2), CardinalMode::Gch),
            Ordering::Eq
        );
    }

    #[test]
    fn log_bounds() {
        assert_eq!(
            leq_log(&c(), &Cardinal::omega(), CardinalMode::Zfc),
            Verdict::True
        );
        assert_eq!(
            leq_log(&Cardinal::aleph(1), &Cardinal::omega(), CardinalMode::Zfc),
            Verdict::True
        );
        assert_eq!(
            leq_log(&c().exp2(), &Cardinal::omega(), CardinalMode::Zfc),
            Verdict::False
        );
        assert_eq!(
            leq_log(&Cardinal::aleph(2), &Cardinal::omega(), CardinalMode::Zfc),
            Verdict::Unknown
        );
        assert_eq!(
            leq_log(&Cardinal::aleph(2), &Cardinal::omega(), CardinalMode::Gch),
            Verdict::False
        );
        assert_eq!(
            leq_log(
                &Cardinal::finite(16),
                &Cardinal::finite(4),
                CardinalMode::Zfc
            ),
            Verdict::True
        );
        assert_eq!(
            leq_log(
                &Cardinal::finite(17),
                &Cardinal::finite(4),
                CardinalMode::Zfc
            ),
            Verdict::False
        );
    }

    #[test]
    fn render_and_parse() {
        for text in [
            "0",
            "17",
            "aleph0",
            "aleph3",
            "2^aleph0",
            "2^2^aleph1",
            "sup{aleph2,2^aleph0}",
        ] {
            let value = Cardinal::parse(text).unwrap();
            assert_eq!(Cardinal::parse(&value.render()).unwrap(), value, "{text}");
        }
        assert_eq!(Cardinal::parse("c").unwrap(), c());
        assert_eq!(Cardinal::parse("2^c").unwrap(), c().exp2());
        assert_eq!(Cardinal::parse("2^5").unwrap(), Cardinal::finite(32));
        assert_eq!(c().render(), "2^aleph0");
        assert!(Cardinal::parse("aleph").is_err());
        assert!(Cardinal::parse("3x").is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("GCH".parse::<CardinalMode>().unwrap(), CardinalMode::Gch);
        assert!("ma".parse::<CardinalMode>().is_err());
    }
}
