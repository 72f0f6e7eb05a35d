//! Closed-form base sizes for Sym(ab) and Alt(ab) on (a,b)-regular partitions.
//!
//! All logarithms are computed as integer ceilings: `ceil_log(b, x)` is the
//! least `m` with `b^m >= x`. Floating point is never used, since `a+2`
//! landing exactly on a power of `b` is common.

use std::fmt;

use crate::error::{domain, Result};

/// Which group acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Sym,
    Alt,
}

impl Group {
    pub fn as_str(&self) -> &'static str {
        match self {
            Group::Sym => "sym",
            Group::Alt => "alt",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Group, String> {
        match s {
            "sym" => Ok(Group::Sym),
            "alt" => Ok(Group::Alt),
            other => Err(format!("unknown group `{other}` (expected sym or alt)")),
        }
    }
}

/// The clause that determined a base size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// (a,b) = (2,2): the action is not faithful.
    Unfaithful,
    /// a = 2, b = 3.
    PairsIntoThree,
    /// a = 2, b >= 4.
    PairsIntoMany,
    /// b = 2, a = 4.
    HalvesOfEight,
    /// b = 2, generic value `ceil(log2(a+3)) + 1`.
    Halves,
    /// a, b >= 3, generic value `ceil(log_b(a+2)) + 1`.
    Generic,
    /// One of (3,6), (3,7), (4,7), (7,3).
    Sporadic { a: usize, b: usize },
    /// a >= 3 and b = a + 2.
    TwoShort,
    /// The alternating group needs as many partitions as the symmetric group.
    SameAsSym,
    /// Alt drops by one at one of (2,3), (3,6), (3,7), (4,7), (7,3).
    AltSporadic { a: usize, b: usize },
    /// Alt drops by one when b = a + 2 and a >= 5.
    AltTwoShort,
    /// Alt drops by one when b >= 3 and a = b^k - 1 with b < k + floor((k+1)/2) + 2.
    AltPowerMinusOne { k: u32 },
    /// Alt drops by one when b = 2 and a = 2^k - `offset`, offset in {1, 2}.
    AltHalvesPower { k: u32, offset: u8 },
    /// Alt needs 4 partitions at (4,2), one fewer than Sym; found by exhaustive search.
    AltHalvesOfEight,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Unfaithful => write!(f, "action unfaithful"),
            Rule::PairsIntoThree => write!(f, "a=2, b=3"),
            Rule::PairsIntoMany => write!(f, "a=2, b>=4"),
            Rule::HalvesOfEight => write!(f, "b=2, a=4 exception"),
            Rule::Halves => write!(f, "b=2, ceil(log2(a+3))+1"),
            Rule::Generic => write!(f, "generic, ceil(log_b(a+2))+1"),
            Rule::Sporadic { a, b } => write!(f, "exception ({a},{b})"),
            Rule::TwoShort => write!(f, "exception b=a+2"),
            Rule::SameAsSym => write!(f, "alt equals sym"),
            Rule::AltSporadic { a, b } => write!(f, "alt exception ({a},{b})"),
            Rule::AltTwoShort => write!(f, "alt exception b=a+2, a>=5"),
            Rule::AltPowerMinusOne { k } => write!(f, "alt a=b^k-1, k={k}"),
            Rule::AltHalvesPower { k, offset } => write!(f, "alt b=2, a=2^{k}-{offset}"),
            Rule::AltHalvesOfEight => write!(f, "alt b=2, a=4 by exhaustive search"),
        }
    }
}

/// A base size, or `Undefined` for the unfaithful action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseSizeAnswer {
    pub value: Option<u32>,
    pub rule: Rule,
}

impl BaseSizeAnswer {
    fn defined(value: u32, rule: Rule) -> BaseSizeAnswer {
        BaseSizeAnswer {
            value: Some(value),
            rule,
        }
    }

    fn undefined() -> BaseSizeAnswer {
        BaseSizeAnswer {
            value: None,
            rule: Rule::Unfaithful,
        }
    }

    pub fn is_undefined(&self) -> bool {
        self.value.is_none()
    }
}

impl fmt::Display for BaseSizeAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{v} ({})", self.rule),
            None => write!(f, "undefined ({})", self.rule),
        }
    }
}

/// Least `m` with `base^m >= x`, for `base >= 2`.
pub fn ceil_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2, "ceil_log needs base >= 2");
    let mut power: u128 = 1;
    let mut m = 0;
    while power < x as u128 {
        power *= base as u128;
        m += 1;
    }
    m
}

/// Greatest `m` with `base^m <= x`, for `base >= 2` and `x >= 1`.
pub fn floor_log(base: u64, x: u64) -> u32 {
    assert!(base >= 2 && x >= 1);
    let mut power: u128 = base as u128;
    let mut m = 0;
    while power <= x as u128 {
        power *= base as u128;
        m += 1;
    }
    m
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

fn check_domain(a: usize, b: usize) -> Result<()> {
    if a < 2 || b < 2 {
        return Err(domain(format!("base sizes need a >= 2 and b >= 2, got ({a},{b})")));
    }
    Ok(())
}

const SPORADIC: [(usize, usize); 4] = [(3, 6), (3, 7), (4, 7), (7, 3)];

/// Base size of Sym(ab) on (a,b)-regular partitions.
pub fn base_size_sym(a: usize, b: usize) -> Result<BaseSizeAnswer> {
    check_domain(a, b)?;
    let (a64, b64) = (a as u64, b as u64);
    let answer = if a == 2 {
        match b {
            2 => BaseSizeAnswer::undefined(),
            3 => BaseSizeAnswer::defined(4, Rule::PairsIntoThree),
            _ => BaseSizeAnswer::defined(3, Rule::PairsIntoMany),
        }
    } else if b == 2 {
        if a == 4 {
            BaseSizeAnswer::defined(5, Rule::HalvesOfEight)
        } else {
            BaseSizeAnswer::defined(ceil_log(2, a64 + 3) + 1, Rule::Halves)
        }
    } else if SPORADIC.contains(&(a, b)) {
        let value = if (a, b) == (7, 3) { 4 } else { 3 };
        BaseSizeAnswer::defined(value, Rule::Sporadic { a, b })
    } else if b == a + 2 {
        BaseSizeAnswer::defined(3, Rule::TwoShort)
    } else {
        BaseSizeAnswer::defined(ceil_log(b64, a64 + 2) + 1, Rule::Generic)
    };
    Ok(answer)
}

/// `Some(k)` when `a = b^k - 1` for some `k >= 2`.
fn power_minus_one_exponent(a: usize, b: usize) -> Option<u32> {
    let target = a as u64 + 1;
    let k = ceil_log(b as u64, target);
    (k >= 2 && checked_pow(b as u64, k) == Some(target)).then_some(k)
}

/// Base size of Alt(ab) on (a,b)-regular partitions.
pub fn base_size_alt(a: usize, b: usize) -> Result<BaseSizeAnswer> {
    let sym = base_size_sym(a, b)?;
    let Some(value) = sym.value else {
        return Ok(sym);
    };
    let drop = |rule| Ok(BaseSizeAnswer::defined(value - 1, rule));
    if (a, b) == (2, 3) || SPORADIC.contains(&(a, b)) {
        return drop(Rule::AltSporadic { a, b });
    }
    if (a, b) == (4, 2) {
        return drop(Rule::AltHalvesOfEight);
    }
    if b == a + 2 && a >= 5 {
        return drop(Rule::AltTwoShort);
    }
    if b >= 3 {
        if let Some(k) = power_minus_one_exponent(a, b) {
            let k_us = k as usize;
            if b < k_us + (k_us + 1) / 2 + 2 && (b, k) != (4, 2) {
                return drop(Rule::AltPowerMinusOne { k });
            }
        }
    }
    if b == 2 {
        for offset in [1u8, 2] {
            let target = a as u64 + offset as u64;
            if target.is_power_of_two() {
                let k = target.trailing_zeros();
                if k >= 2 {
                    return drop(Rule::AltHalvesPower { k, offset });
                }
            }
        }
    }
    Ok(BaseSizeAnswer::defined(value, Rule::SameAsSym))
}

/// Counting lower bound for Sym: `ceil(log_b(a+2)) + 1`.
pub fn lower_bound_sym(a: usize, b: usize) -> Result<u32> {
    check_domain(a, b)?;
    Ok(ceil_log(b as u64, a as u64 + 2) + 1)
}

/// Counting lower bound for Alt: `ceil(log_b(a+1)) + 1`.
pub fn lower_bound_alt(a: usize, b: usize) -> Result<u32> {
    check_domain(a, b)?;
    Ok(ceil_log(b as u64, a as u64 + 1) + 1)
}

/// The known table for `2 <= a <= b`, kept separate from [`base_size_sym`]
/// so the two can be cross-checked.
pub fn a_le_b_table(a: usize, b: usize) -> Result<BaseSizeAnswer> {
    check_domain(a, b)?;
    if a > b {
        return Err(domain(format!("the a<=b table needs a <= b, got ({a},{b})")));
    }
    let answer = match (a, b) {
        (2, 2) => BaseSizeAnswer::undefined(),
        (2, 3) => BaseSizeAnswer::defined(4, Rule::PairsIntoThree),
        (2, _) => BaseSizeAnswer::defined(3, Rule::PairsIntoMany),
        _ if b == a + 2 => BaseSizeAnswer::defined(3, Rule::TwoShort),
        (3, 6) | (3, 7) | (4, 7) => BaseSizeAnswer::defined(3, Rule::Sporadic { a, b }),
        _ => {
            let m = ceil_log(b as u64, a as u64 + 2);
            BaseSizeAnswer::defined(m + 1, Rule::Generic)
        }
    };
    Ok(answer)
}
