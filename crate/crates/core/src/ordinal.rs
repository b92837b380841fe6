//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite list of terms `w^e * k` with strictly
//! decreasing exponents and positive coefficients; exponents are ordinals
//! themselves. Coefficients are arbitrary-precision naturals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub exponent: Ordinal,
    pub coefficient: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Result of [`Ordinal::classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class {
    Zero,
    Successor(Ordinal),
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from(1u64)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Ordinal::one())
    }

    /// `w^e`.
    pub fn omega_pow(e: Ordinal) -> Self {
        Self::omega_pow_mul(e, BigUint::one())
    }

    /// `w^e * k`; zero when `k == 0`.
    pub fn omega_pow_mul(e: Ordinal, k: impl Into<BigUint>) -> Self {
        let k = k.into();
        if k.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: e,
                coefficient: k,
            }],
        }
    }

    /// Builds an ordinal from explicit terms, rejecting lists that are not in
    /// Cantor normal form.
    pub fn from_terms(terms: Vec<Term>) -> Result<Self, String> {
        for t in &terms {
            if t.coefficient.is_zero() {
                return Err("zero coefficient".into());
            }
        }
        for w in terms.windows(2) {
            if w[0].exponent <= w[1].exponent {
                return Err("exponents must be strictly decreasing".into());
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => t.coefficient.to_u64(),
            _ => None,
        }
    }

    /// Exponent of the leading term; zero for the zero ordinal.
    pub fn leading_exponent(&self) -> Ordinal {
        self.terms
            .first()
            .map(|t| t.exponent.clone())
            .unwrap_or_default()
    }

    pub fn successor(&self) -> Ordinal {
        self + &Ordinal::one()
    }

    pub fn classify(&self) -> Class {
        match self.terms.last() {
            None => Class::Zero,
            Some(last) if last.exponent.is_zero() => {
                let mut pred = self.clone();
                let t = pred.terms.last_mut().unwrap();
                if t.coefficient.is_one() {
                    pred.terms.pop();
                } else {
                    t.coefficient -= 1u32;
                }
                Class::Successor(pred)
            }
            Some(_) => Class::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), Class::Limit)
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn predecessor(&self) -> Option<Ordinal> {
        match self.classify() {
            Class::Successor(p) => Some(p),
            _ => None,
        }
    }

    /// Cantor-Bendixson rank of this point in any `[0, gamma]`: the least
    /// exponent of the normal form, with `nu_rank(0) = 0`.
    pub fn nu_rank(&self) -> Ordinal {
        self.terms
            .last()
            .map(|t| t.exponent.clone())
            .unwrap_or_default()
    }

    /// Coefficient of `w^e` in the normal form (zero if absent).
    pub fn coefficient_at(&self, e: &Ordinal) -> BigUint {
        self.terms
            .iter()
            .find(|t| t.exponent == *e)
            .map(|t| t.coefficient.clone())
            .unwrap_or_default()
    }

    /// Drops every term with exponent below `e`: the largest ordinal not
    /// exceeding `self` whose normal form uses only exponents `>= e`.
    pub fn truncate_below(&self, e: &Ordinal) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .take_while(|t| t.exponent >= *e)
                .cloned()
                .collect(),
        }
    }

    /// Least point `>= self` whose rank is at least `e`.
    pub fn ceil_to_rank(&self, e: &Ordinal) -> Ordinal {
        if e.is_zero() || (!self.is_zero() && self.nu_rank() >= *e) {
            return self.clone();
        }
        &self.truncate_below(e) + &Ordinal::omega_pow(e.clone())
    }

    /// True when both normal forms have the same terms above exponent `e`.
    pub fn agrees_above(&self, other: &Ordinal, e: &Ordinal) -> bool {
        let a = self.terms.iter().take_while(|t| t.exponent > *e);
        let b = other.terms.iter().take_while(|t| t.exponent > *e);
        a.eq(b)
    }

    /// The set of `k >= 1` with `w^e * k` in `[lo, hi]`.
    pub fn multiples_in(e: &Ordinal, lo: &Ordinal, hi: &Ordinal) -> Multiples {
        let empty = Multiples::Range {
            first: BigUint::one(),
            last: BigUint::zero(),
        };
        let first = match lo.terms.first() {
            None => BigUint::one(),
            Some(t) => match t.exponent.cmp(e) {
                Ordering::Greater => return empty,
                Ordering::Less => BigUint::one(),
                Ordering::Equal if lo.terms.len() == 1 => t.coefficient.clone(),
                Ordering::Equal => &t.coefficient + 1u32,
            },
        };
        match hi.terms.first() {
            None => empty,
            Some(t) => match t.exponent.cmp(e) {
                Ordering::Greater => Multiples::Unbounded { first },
                Ordering::Less => empty,
                Ordering::Equal => Multiples::Range {
                    first,
                    last: t.coefficient.clone(),
                },
            },
        }
    }

    fn parse_literal(text: &str) -> Result<Ordinal, ParseError> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
        };
        p.skip_ws();
        if p.peek().is_none() {
            return Err(p.error("expected an ordinal"));
        }
        let value = p.expr()?;
        p.skip_ws();
        if p.peek().is_some() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }
}

/// Answer of [`Ordinal::multiples_in`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Multiples {
    /// `first..=last`; empty when `first > last`.
    Range { first: BigUint, last: BigUint },
    /// Every `k >= first`.
    Unbounded { first: BigUint },
}

impl Multiples {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Multiples::Unbounded { .. })
    }

    pub fn count(&self) -> Option<BigUint> {
        match self {
            Multiples::Range { first, last } if first > last => Some(BigUint::zero()),
            Multiples::Range { first, last } => Some(last - first + 1u32),
            Multiples::Unbounded { .. } => None,
        }
    }

    /// Explicit list when finite.
    pub fn to_vec(&self) -> Option<Vec<BigUint>> {
        match self {
            Multiples::Range { first, last } => {
                let mut out = Vec::new();
                let mut k = first.clone();
                while k <= *last {
                    out.push(k.clone());
                    k += 1u32;
                }
                Some(out)
            }
            Multiples::Unbounded { .. } => None,
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::omega_pow_mul(Ordinal::zero(), n)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Ordinal {
    type Output = Ordinal;

    /// Terms of `self` below the leading exponent of `rhs` are absorbed.
    fn add(self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exponent > lead.exponent)
            .cloned()
            .collect();
        let mut rest = rhs.terms.clone();
        if let Some(t) = self.terms.iter().find(|t| t.exponent == lead.exponent) {
            rest[0].coefficient += &t.coefficient;
        }
        terms.extend(rest);
        Ordinal { terms }
    }
}

impl Add for Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: Ordinal) -> Ordinal {
        &self + &rhs
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            match t.exponent.to_u64() {
                Some(1) => f.write_str("w")?,
                Some(n) => write!(f, "w^{n}")?,
                None => write!(f, "w^({})", t.exponent)?,
            }
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse_literal(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// expr  := term ('+' term)*
// term  := nat ('*' nat)? | omega ('^' power)? ('*' nat)?
// power := nat | omega ('^' power)? | '(' expr ')'
struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn is_omega(c: char) -> bool {
        c == 'w' || c == 'ω'
    }

    fn expr(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let t = self.term()?;
            acc = &acc + &t;
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn coefficient(&mut self) -> Result<BigUint, ParseError> {
        if self.eat('*') {
            self.nat()
        } else {
            Ok(BigUint::one())
        }
    }

    fn term(&mut self) -> Result<Ordinal, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                let k = self.coefficient()?;
                Ok(Ordinal::omega_pow_mul(Ordinal::zero(), n * k))
            }
            Some(c) if Self::is_omega(c) => {
                self.pos += 1;
                let e = if self.eat('^') {
                    self.power()?
                } else {
                    Ordinal::one()
                };
                let k = self.coefficient()?;
                Ok(Ordinal::omega_pow_mul(e, k))
            }
            _ => Err(self.error("expected a natural number or 'w'")),
        }
    }

    fn power(&mut self) -> Result<Ordinal, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok(Ordinal::omega_pow_mul(Ordinal::zero(), n))
            }
            Some(c) if Self::is_omega(c) => {
                self.pos += 1;
                let e = if self.eat('^') {
                    self.power()?
                } else {
                    Ordinal::one()
                };
                Ok(Ordinal::omega_pow(e))
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected an exponent")),
        }
    }
}
