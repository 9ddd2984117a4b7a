use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed past a closed endpoint before a point counts as outside.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// A real interval with independently open or closed endpoints.
///
/// Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval("NaN endpoint".into()));
        }
        if !(lo < hi) {
            return Err(Error::InvalidInterval(format!("lower endpoint {lo} is not below upper endpoint {hi}")));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval(format!("({lo}, {hi}) is empty")));
        }
        Ok(Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        })
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// `[lo, hi)`
    pub fn closed_open(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, false)
    }

    pub fn real_line() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY, lo_closed: false, hi_closed: false }
    }

    /// `[0, ∞)`
    pub fn nonnegative() -> Self {
        Interval { lo: 0.0, hi: f64::INFINITY, lo_closed: true, hi_closed: false }
    }

    /// `(0, ∞)`
    pub fn positive() -> Self {
        Interval { lo: 0.0, hi: f64::INFINITY, lo_closed: false, hi_closed: false }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    /// Maps `x` into the interval under the endpoint margin rule.
    ///
    /// A point may overshoot a closed endpoint by `DOMAIN_MARGIN·max(1, |endpoint|)`, in which
    /// case it is clamped onto the endpoint. Open endpoints admit no slack.
    pub fn admit(&self, x: f64) -> Option<f64> {
        if x.is_nan() {
            return None;
        }
        if self.contains(x) {
            return Some(x);
        }
        if self.lo_closed && x < self.lo && self.lo - x <= DOMAIN_MARGIN * self.lo.abs().max(1.0) {
            return Some(self.lo);
        }
        if self.hi_closed && x > self.hi && x - self.hi <= DOMAIN_MARGIN * self.hi.abs().max(1.0) {
            return Some(self.hi);
        }
        None
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let lo_ok = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let hi_ok = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lo_ok && hi_ok
    }

    /// Open interior shrunk by a relative margin at each finite endpoint.
    pub fn shrunk_interior(&self, rel_margin: f64) -> Result<(f64, f64)> {
        if !self.is_bounded() {
            return Err(Error::InvalidInterval(format!("{self} is unbounded; sampling needs finite endpoints")));
        }
        let a = self.lo + rel_margin * self.lo.abs().max(1.0);
        let b = self.hi - rel_margin * self.hi.abs().max(1.0);
        if !(a < b) {
            return Err(Error::InvalidInterval(format!("{self} is too narrow to sample")));
        }
        Ok((a, b))
    }

    /// Intersection with `(0, ∞)`.
    pub fn positive_part(&self) -> Result<Interval> {
        if self.lo > 0.0 {
            Ok(*self)
        } else {
            Interval::new(0.0, self.hi, false, self.hi_closed)
        }
    }

    pub fn midpoint(&self) -> f64 {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => 0.5 * (self.lo + self.hi),
            (true, false) => self.lo + 1.0,
            (false, true) => self.hi - 1.0,
            (false, false) => 0.0,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

fn parse_endpoint(s: &str) -> Result<f64> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t.parse::<f64>().map_err(|_| Error::Parse(format!("bad interval endpoint {s:?}"))),
    }
}

/// Accepts `lo,hi` (open), or bracketed forms such as `[0,10)` and `(0.1,10]`.
impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (lo_closed, rest) = match s.chars().next() {
            Some('[') => (true, &s[1..]),
            Some('(') => (false, &s[1..]),
            _ => (false, s),
        };
        let (hi_closed, body) = match rest.chars().last() {
            Some(']') => (true, &rest[..rest.len() - 1]),
            Some(')') => (false, &rest[..rest.len() - 1]),
            _ => (false, rest),
        };
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval {s:?} must look like lo,hi")))?;
        Interval::new(parse_endpoint(a)?, parse_endpoint(b)?, lo_closed, hi_closed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_rejected() {
        assert!(Interval::closed(0.0, 0.0).is_err());
        assert!(Interval::open(2.0, 1.0).is_err());
    }

    #[test]
    fn infinite_endpoints_are_open() {
        let j = Interval::new(0.0, f64::INFINITY, true, true).unwrap();
        assert!(!j.hi_closed());
        assert!(j.contains(0.0));
    }

    #[test]
    fn margin_clamps_closed_endpoint_only() {
        let closed = Interval::nonnegative();
        assert_eq!(closed.admit(-1e-14), Some(0.0));
        assert_eq!(closed.admit(-1e-9), None);
        let open = Interval::positive();
        assert_eq!(open.admit(0.0), None);
        assert_eq!(open.admit(1e-300), Some(1e-300));
    }

    #[test]
    fn parse_forms() {
        let j: Interval = "[0,10)".parse().unwrap();
        assert!(j.lo_closed() && !j.hi_closed());
        let k: Interval = "0.01,100".parse().unwrap();
        assert!(!k.lo_closed() && k.contains(50.0));
        let u: Interval = "(0,inf)".parse().unwrap();
        assert!(!u.is_bounded());
        assert!("1;2".parse::<Interval>().is_err());
    }

    #[test]
    fn subset() {
        let a = Interval::open(0.0, 1.0).unwrap();
        let b = Interval::closed(0.0, 1.0).unwrap();
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(b.is_subset_of(&Interval::nonnegative()));
    }
}
