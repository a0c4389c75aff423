//! Elements of the W(2,2) and thin Lie algebras.
//!
//! W(2,2) has basis `{L_m, I_m : m ∈ ℤ}` with
//! `[L_m, L_n] = (m-n) L_{m+n}`, `[L_m, I_n] = (m-n) I_{m+n}` and
//! `[I_m, I_n] = 0`. The thin algebra has basis `{e_n : n ≥ 1}` with
//! `[e_1, e_n] = e_{n+1}` for `n ≥ 2` and all other generator brackets zero
//! (`[e_1, e_1] = 0` is forced by alternation).
//!
//! An [`Element`] is a finitely supported rational linear combination of
//! basis symbols of exactly one algebra, kept in canonical form: no stored
//! coefficient is zero, so equality is equality of term maps.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{rat, Rational};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AlgebraId {
    W22,
    Thin,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraId::W22 => write!(f, "w22"),
            AlgebraId::Thin => write!(f, "thin"),
        }
    }
}

/// A basis symbol: `L_m` or `I_m` of W(2,2), or `e_n` (n ≥ 1) of the thin
/// algebra. The derived order (all `L` before all `I`, ascending index) is
/// the canonical printing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisSymbol {
    L(i64),
    I(i64),
    E(i64),
}

impl BasisSymbol {
    /// `e_n`; panics on `n < 1` (the thin basis starts at `e_1`).
    pub fn e(n: i64) -> Self {
        assert!(n >= 1, "thin basis index must be >= 1, got {n}");
        BasisSymbol::E(n)
    }

    pub fn algebra(&self) -> AlgebraId {
        match self {
            BasisSymbol::L(_) | BasisSymbol::I(_) => AlgebraId::W22,
            BasisSymbol::E(_) => AlgebraId::Thin,
        }
    }

    pub fn index(&self) -> i64 {
        match self {
            BasisSymbol::L(m) | BasisSymbol::I(m) | BasisSymbol::E(m) => *m,
        }
    }
}

impl fmt::Display for BasisSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisSymbol::L(m) => write!(f, "L[{m}]"),
            BasisSymbol::I(m) => write!(f, "I[{m}]"),
            BasisSymbol::E(n) => write!(f, "e[{n}]"),
        }
    }
}

/// Bracket of two basis symbols, as an integer multiple of a basis symbol.
/// `None` means the bracket is zero.
fn bracket_symbols(a: BasisSymbol, b: BasisSymbol) -> Option<(i64, BasisSymbol)> {
    use BasisSymbol::*;
    match (a, b) {
        (L(m), L(n)) => Some((m - n, L(m + n))),
        (L(m), I(n)) => Some((m - n, I(m + n))),
        // [I_m, L_n] = -[L_n, I_m] by antisymmetry.
        (I(m), L(n)) => Some((-(n - m), I(m + n))),
        (I(_), I(_)) => None,
        (E(1), E(n)) if n >= 2 => Some((1, E(n + 1))),
        (E(n), E(1)) if n >= 2 => Some((-1, E(n + 1))),
        (E(_), E(_)) => None,
        _ => unreachable!("cross-algebra symbol bracket"),
    }
}

/// A finitely supported linear combination of basis symbols of one algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    algebra: AlgebraId,
    terms: BTreeMap<BasisSymbol, Rational>,
}

impl Element {
    pub fn zero(algebra: AlgebraId) -> Self {
        Element { algebra, terms: BTreeMap::new() }
    }

    pub fn basis(sym: BasisSymbol) -> Self {
        Element::term(rat(1), sym)
    }

    pub fn term(coeff: Rational, sym: BasisSymbol) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(sym, coeff);
        }
        Element { algebra: sym.algebra(), terms }
    }

    /// Builds an element from `(symbol, coefficient)` pairs, summing repeats
    /// and dropping zeros. All symbols must belong to `algebra`.
    pub fn from_terms(
        algebra: AlgebraId,
        terms: impl IntoIterator<Item = (BasisSymbol, Rational)>,
    ) -> Result<Self, Error> {
        let mut out = Element::zero(algebra);
        for (sym, coeff) in terms {
            if sym.algebra() != algebra {
                return Err(Error::AlgebraMismatch { expected: algebra, found: sym.algebra() });
            }
            out.add_term(sym, coeff);
        }
        Ok(out)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, sym: BasisSymbol) -> Rational {
        self.terms.get(&sym).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisSymbol, &Rational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn support(&self) -> impl Iterator<Item = BasisSymbol> + '_ {
        self.terms.keys().copied()
    }

    /// Largest absolute basis index in the support, 0 for the zero element.
    pub fn max_abs_index(&self) -> i64 {
        self.terms.keys().map(|s| s.index().abs()).max().unwrap_or(0)
    }

    fn add_term(&mut self, sym: BasisSymbol, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(sym).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&sym);
        }
    }

    fn check_algebra(&self, other: &Element) -> Result<(), Error> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch { expected: self.algebra, found: other.algebra });
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, Error> {
        self.check_algebra(other)?;
        let mut out = self.clone();
        for (sym, coeff) in other.terms() {
            out.add_term(sym, coeff.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        self.scale(&rat(-1))
    }

    pub fn scale(&self, k: &Rational) -> Element {
        if k.is_zero() {
            return Element::zero(self.algebra);
        }
        Element {
            algebra: self.algebra,
            terms: self.terms.iter().map(|(s, c)| (*s, c * k)).collect(),
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, other: &Element) -> Result<Element, Error> {
        self.check_algebra(other)?;
        let mut out = Element::zero(self.algebra);
        for (sa, ca) in self.terms() {
            for (sb, cb) in other.terms() {
                if let Some((k, sym)) = bracket_symbols(sa, sb) {
                    out.add_term(sym, ca * cb * rat(k));
                }
            }
        }
        Ok(out)
    }

    /// Parses the element text grammar:
    ///
    /// ```text
    /// element := term (('+'|'-') term)* | '0'
    /// term    := [coeff '*'] symbol
    /// coeff   := integer | integer '/' positive-integer
    /// symbol  := 'L[' integer ']' | 'I[' integer ']' | 'e[' positive-integer ']'
    /// ```
    ///
    /// e.g. `"2*L[3] - 1/2*I[-1]"`, `"e[1] + e[2]"`. A leading sign on the
    /// first term is also accepted. Symbols must belong to `algebra`.
    pub fn parse(algebra: AlgebraId, input: &str) -> Result<Element, ParseError> {
        Parser { algebra, input, pos: 0 }.parse()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (sym, coeff)) in self.terms().enumerate() {
            let (sign_negative, abs) =
                if coeff < &Rational::zero() { (true, -coeff.clone()) } else { (false, coeff.clone()) };
            if i == 0 {
                if sign_negative {
                    write!(f, "-{abs}*{sym}")?;
                    continue;
                }
            } else {
                write!(f, " {} ", if sign_negative { '-' } else { '+' })?;
            }
            if abs.is_one() {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{abs}*{sym}")?;
            }
        }
        Ok(())
    }
}

/// Parse failure with the byte offset it occurred at.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    algebra: AlgebraId,
    input: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse(mut self) -> Result<Element, ParseError> {
        self.skip_ws();
        let mut out = Element::zero(self.algebra);
        if self.peek() == Some('0') {
            let save = self.pos;
            self.pos += 1;
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(out);
            }
            self.pos = save;
        }
        let mut sign = match self.peek() {
            Some('+') => {
                self.pos += 1;
                rat(1)
            }
            Some('-') => {
                self.pos += 1;
                rat(-1)
            }
            _ => rat(1),
        };
        loop {
            self.skip_ws();
            let (coeff, sym) = self.parse_term()?;
            out.add_term(sym, coeff * &sign);
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some('+') => sign = rat(1),
                Some('-') => sign = rat(-1),
                Some(c) => return Err(self.err(format!("expected '+' or '-', found {c:?}"))),
            }
            self.pos += 1;
        }
    }

    fn parse_term(&mut self) -> Result<(Rational, BasisSymbol), ParseError> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '-' => {
                let coeff = self.parse_coeff()?;
                self.skip_ws();
                self.expect('*')?;
                self.skip_ws();
                coeff
            }
            _ => rat(1),
        };
        let sym = self.parse_symbol()?;
        Ok((coeff, sym))
    }

    fn parse_coeff(&mut self) -> Result<Rational, ParseError> {
        let numer = self.parse_integer()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let start = self.pos;
            let denom = self.parse_integer()?;
            if denom <= 0 {
                return Err(ParseError {
                    pos: start,
                    message: format!("denominator must be positive, got {denom}"),
                });
            }
            Ok(crate::rational::frac(numer, denom))
        } else {
            Ok(rat(numer))
        }
    }

    fn parse_symbol(&mut self) -> Result<BasisSymbol, ParseError> {
        let start = self.pos;
        let family = self
            .peek()
            .ok_or_else(|| self.err("expected a basis symbol".into()))?;
        if !matches!(family, 'L' | 'I' | 'e') {
            return Err(self.err(format!("expected symbol family 'L', 'I' or 'e', found {family:?}")));
        }
        self.pos += 1;
        self.expect('[')?;
        let index = self.parse_integer()?;
        self.expect(']')?;
        let sym = match family {
            'L' => BasisSymbol::L(index),
            'I' => BasisSymbol::I(index),
            _ => {
                if index < 1 {
                    return Err(ParseError {
                        pos: start,
                        message: format!("thin basis index must be >= 1, got {index}"),
                    });
                }
                BasisSymbol::E(index)
            }
        };
        if sym.algebra() != self.algebra {
            return Err(ParseError {
                pos: start,
                message: format!(
                    "symbol {sym} belongs to algebra {}, expected {}",
                    sym.algebra(),
                    self.algebra
                ),
            });
        }
        Ok(sym)
    }

    fn parse_integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse::<i64>()
            .map_err(|_| ParseError { pos: start, message: "expected an integer".into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn err(&self, message: String) -> ParseError {
        ParseError { pos: self.pos, message }
    }
}
