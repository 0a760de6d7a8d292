//! Exact membership grades in `[0,1]`.
//!
//! Grades only ever combine through `min` and `max`, so a grade produced by
//! any operation in this crate is always one of its inputs. Storage is an
//! exact reduced fraction; no floating point is involved anywhere.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A membership/possibility degree: an exact rational in `[0,1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade(Ratio<u64>);

impl Grade {
    pub const ZERO: Grade = Grade(Ratio::new_raw(0, 1));
    pub const ONE: Grade = Grade(Ratio::new_raw(1, 1));

    /// Builds `numer/denom`, reduced.
    pub fn new(numer: u64, denom: u64) -> Result<Grade> {
        if denom == 0 {
            return Err(Error::MalformedGrade(format!("{numer}/{denom}")));
        }
        if numer > denom {
            return Err(Error::OutOfRange(format!("{numer}/{denom}")));
        }
        Ok(Grade(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn is_one(&self) -> bool {
        self.numer() == self.denom()
    }

    /// `a ∧ b`
    pub fn meet(self, other: Grade) -> Grade {
        self.min(other)
    }

    /// `a ∨ b`
    pub fn join(self, other: Grade) -> Grade {
        self.max(other)
    }

    /// Join of an iterator; the join of nothing is 0.
    pub fn join_all<I: IntoIterator<Item = Grade>>(grades: I) -> Grade {
        grades.into_iter().fold(Grade::ZERO, Grade::join)
    }

    /// Meet of an iterator; the meet of nothing is 1.
    pub fn meet_all<I: IntoIterator<Item = Grade>>(grades: I) -> Grade {
        grades.into_iter().fold(Grade::ONE, Grade::meet)
    }
}

/// Parses a decimal (`0.8`, `1`, `0.70`) or fraction (`4/5`) literal.
pub fn parse_grade(text: &str) -> Result<Grade> {
    let malformed = || Error::MalformedGrade(text.to_string());
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());

    if let Some((num, den)) = text.split_once('/') {
        if !all_digits(num) || !all_digits(den) {
            return Err(malformed());
        }
        let num: u64 = num.parse().map_err(|_| malformed())?;
        let den: u64 = den.parse().map_err(|_| malformed())?;
        if den == 0 {
            return Err(malformed());
        }
        if num > den {
            return Err(Error::OutOfRange(text.to_string()));
        }
        return Grade::new(num, den);
    }

    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => {
            if !all_digits(f) {
                return Err(malformed());
            }
            (i, f)
        }
        None => (text, ""),
    };
    if !all_digits(int_part) {
        return Err(malformed());
    }
    // Strip leading zeros so that literals like `0000.5` don't overflow.
    let int_digits = int_part.trim_start_matches('0');
    let frac_digits = frac_part.trim_end_matches('0');
    if !matches!(int_digits, "" | "1") || (int_digits == "1" && !frac_digits.is_empty()) {
        return Err(Error::OutOfRange(text.to_string()));
    }
    if int_digits == "1" {
        return Ok(Grade::ONE);
    }
    if frac_digits.is_empty() {
        return Ok(Grade::ZERO);
    }
    if frac_digits.len() > 19 {
        return Err(malformed());
    }
    let numer: u64 = frac_digits.parse().map_err(|_| malformed())?;
    let denom = 10u64.checked_pow(frac_digits.len() as u32).ok_or_else(malformed)?;
    Grade::new(numer, denom)
}

impl FromStr for Grade {
    type Err = Error;

    fn from_str(s: &str) -> Result<Grade> {
        parse_grade(s)
    }
}

impl fmt::Display for Grade {
    /// Shortest exact decimal when the denominator is `2^i 5^j`, otherwise `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if n == 0 {
            return f.write_str("0");
        }
        if n == d {
            return f.write_str("1");
        }
        let (mut twos, mut fives, mut rest) = (0u32, 0u32, d);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        let digits = twos.max(fives);
        if rest == 1 && digits <= 18 {
            let scale = 10u128.pow(digits);
            let scaled = n as u128 * scale / d as u128;
            return write!(f, "0.{:0width$}", scaled, width = digits as usize);
        }
        write!(f, "{n}/{d}")
    }
}

impl fmt::Debug for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Grade {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Shorthand for literals in tests and examples. Panics on bad input.
pub fn g(text: &str) -> Grade {
    parse_grade(text).unwrap_or_else(|e| panic!("bad grade literal {text:?}: {e}"))
}
