//! Explicit code sets whose columns give minimal bases.
//!
//! Every builder returns a [`CodeSet`]; turning it into partitions and
//! checking it is the dispatcher's job.

use std::fmt;

use crate::domain::{CodeSet, RegularPartition, Symbol};
use crate::error::{domain, Result};
use crate::formulas::{ceil_log, checked_pow};

mod dispatch;

pub use dispatch::{dispatch_alt_witness, dispatch_sym_witness, Dispatcher};

/// Which recipe produced a code set, with the parameters it was run with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstructionTag {
    MakeT { b: usize, l: usize },
    Maincase { b: usize, l: usize, k: usize, r: usize },
    R1 { b: usize, l: usize, k: usize },
    Small { b: usize, l: usize, a: usize },
    Complement { a_prime: usize, kappa: usize, inner: Box<ConstructionTag> },
    B2Power { i: usize },
    B2PowerMinus1 { i: usize },
    B2RMinus2 { i: usize },
    AltBkMinus1Wide { b: usize, k: usize },
    AltBkMinus1Narrow { b: usize, k: usize },
    AltB2Minus1 { k: usize },
    AltB2Minus2 { k: usize },
    ExplicitTriple,
    Search { seed: u64, trial: u64 },
}

impl ConstructionTag {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionTag::MakeT { .. } => "make_T",
            ConstructionTag::Maincase { .. } => "cor_maincase",
            ConstructionTag::R1 { .. } => "cor_r1",
            ConstructionTag::Small { .. } => "cor_small",
            ConstructionTag::Complement { .. } => "complement",
            ConstructionTag::B2Power { .. } => "b2_power",
            ConstructionTag::B2PowerMinus1 { .. } => "b2_power_minus1",
            ConstructionTag::B2RMinus2 { .. } => "b2_rminus2",
            ConstructionTag::AltBkMinus1Wide { .. } => "alt_bk_minus1_wide",
            ConstructionTag::AltBkMinus1Narrow { .. } => "alt_bk_minus1_narrow",
            ConstructionTag::AltB2Minus1 { .. } => "alt_b2_minus1",
            ConstructionTag::AltB2Minus2 { .. } => "alt_b2_minus2",
            ConstructionTag::ExplicitTriple => "explicit_8_3_triple",
            ConstructionTag::Search { .. } => "search_fallback",
        }
    }
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            ConstructionTag::MakeT { b, l } => write!(f, "{name}(b={b},ℓ={l})"),
            ConstructionTag::Maincase { b, l, k, r } => write!(f, "{name}(b={b},ℓ={l},k={k},r={r})"),
            ConstructionTag::R1 { b, l, k } => write!(f, "{name}(b={b},ℓ={l},k={k})"),
            ConstructionTag::Small { b, l, a } => write!(f, "{name}(b={b},ℓ={l},a={a})"),
            ConstructionTag::Complement { a_prime, kappa, inner } => {
                write!(f, "{name}(a'={a_prime},κ={kappa}) of {inner}")
            }
            ConstructionTag::B2Power { i }
            | ConstructionTag::B2PowerMinus1 { i }
            | ConstructionTag::B2RMinus2 { i } => write!(f, "{name}(i={i})"),
            ConstructionTag::AltBkMinus1Wide { b, k } | ConstructionTag::AltBkMinus1Narrow { b, k } => {
                write!(f, "{name}(b={b},k={k})")
            }
            ConstructionTag::AltB2Minus1 { k } | ConstructionTag::AltB2Minus2 { k } => {
                write!(f, "{name}(k={k})")
            }
            ConstructionTag::ExplicitTriple => write!(f, "{name}"),
            ConstructionTag::Search { seed, trial } => write!(f, "{name}(seed={seed},trial={trial})"),
        }
    }
}

fn sym(x: usize) -> Symbol {
    x as Symbol
}

/// All words of `Delta^m` in lexicographic order.
fn cube(b: usize, m: usize) -> Vec<Vec<Symbol>> {
    let total = b.pow(m as u32);
    let mut out = Vec::with_capacity(total);
    let mut w = vec![0 as Symbol; m];
    for _ in 0..total {
        out.push(w.clone());
        for j in (0..m).rev() {
            w[j] += 1;
            if (w[j] as usize) < b {
                break;
            }
            w[j] = 0;
        }
    }
    out
}

/// Adds `s` to every coordinate, mod `b`.
fn shifted(word: &[Symbol], s: usize, b: usize) -> Vec<Symbol> {
    word.iter().map(|&x| sym((x as usize + s) % b)).collect()
}

fn appended(word: &[Symbol], last: usize, b: usize) -> Vec<Symbol> {
    let mut w = word.to_vec();
    w.push(sym(last % b));
    w
}

fn power(b: usize, e: usize) -> Result<usize> {
    checked_pow(b as u64, e as u32)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| domain(format!("{b}^{e} overflows")))
}

/// Caps the number of words a construction may emit.
const MAX_WORDS: usize = 1 << 26;

fn check_volume(b: usize, width: usize) -> Result<()> {
    let v = power(b, width)?;
    if v > MAX_WORDS {
        return Err(domain(format!("{b}^{width} words is too large to build")));
    }
    Ok(())
}

/// The `b` words of length `l+2`: `(0,...,0,1)` and `(x, x-1,...,x-1, x+1)`.
pub fn make_t(b: usize, l: usize) -> Result<CodeSet> {
    if b < 3 || l < 1 {
        return Err(domain("make_T needs b >= 3 and l >= 1"));
    }
    CodeSet::from_words(l + 2, b, t_words(b, l))
}

fn t_words(b: usize, l: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::with_capacity(b);
    let mut first = vec![0; l + 1];
    first.push(1);
    out.push(first);
    for x in 1..b {
        let mut w = vec![sym(x)];
        w.extend(std::iter::repeat(sym(x - 1)).take(l));
        w.push(sym((x + 1) % b));
        out.push(w);
    }
    out
}

/// Membership in `T'`, which is `T` with its last coordinate dropped.
fn t_prime_contains(w: &[Symbol]) -> bool {
    let rest = w[0].saturating_sub(1);
    w[1..].iter().all(|&s| s == rest)
}

/// `{0} x Delta^l` without `(0,...,0)` and `(0,b-1,...,b-1)`, lexicographic.
fn admissible(b: usize, l: usize) -> impl Iterator<Item = Vec<Symbol>> {
    cube(b, l).into_iter().filter_map(move |tail| {
        let zero = tail.iter().all(|&s| s == 0);
        let top = tail.iter().all(|&s| s as usize == b - 1);
        if zero || top {
            None
        } else {
            let mut w = vec![0];
            w.extend(tail);
            Some(w)
        }
    })
}

fn admissible_prefix(b: usize, l: usize, count: usize) -> Result<Vec<Vec<Symbol>>> {
    let out: Vec<Vec<Symbol>> = admissible(b, l).take(count).collect();
    if out.len() < count {
        return Err(domain(format!("fewer than {count} admissible words")));
    }
    Ok(out)
}

/// Sets `M_t`, `2 <= t <= k`: every word of `Delta^{l+1}` with last = first + t.
fn full_layers(b: usize, l: usize, k: usize, out: &mut Vec<Vec<Symbol>>) {
    let words = cube(b, l + 1);
    for t in 2..=k {
        for w in &words {
            out.push(appended(w, w[0] as usize + t, b));
        }
    }
}

/// Regular code set of degree `k b^l + r` in width `l+2`.
///
/// Needs `1 <= k <= b-2` with `r = 0` or `2 <= r <= b^l - 2`, or `k = b-1, r = 0`.
pub fn construct_maincase(b: usize, l: usize, k: usize, r: usize) -> Result<CodeSet> {
    if b < 3 || l < 1 {
        return Err(domain("need b >= 3 and l >= 1"));
    }
    check_volume(b, l + 2)?;
    let bl = power(b, l)?;
    let ok = (1..=b - 2).contains(&k) && (r == 0 || (2 <= r && r + 2 <= bl))
        || (k == b - 1 && r == 0);
    if !ok {
        return Err(domain(format!("no main-case set for b={b}, l={l}, k={k}, r={r}")));
    }
    let mut out = Vec::new();
    for w in cube(b, l + 1) {
        if !t_prime_contains(&w) {
            out.push(appended(&w, w[0] as usize, b));
        }
    }
    out.extend(t_words(b, l));
    full_layers(b, l, k, &mut out);
    let x = admissible_prefix(b, l, r)?;
    for n1 in 0..b {
        for w in &x {
            out.push(appended(&shifted(w, n1, b), n1 + k + 1, b));
        }
    }
    CodeSet::from_words(l + 2, b, out)
}

/// Regular code set of degree `k b^l + 1` in width `l+2`; needs `b^l > 4`.
pub fn construct_r1(b: usize, l: usize, k: usize) -> Result<CodeSet> {
    if b < 3 || l < 1 {
        return Err(domain("need b >= 3 and l >= 1"));
    }
    check_volume(b, l + 2)?;
    if power(b, l)? <= 4 {
        return Err(domain("need b^l > 4"));
    }
    if !(1..=b - 2).contains(&k) {
        return Err(domain("need 1 <= k <= b-2"));
    }
    let x = admissible_prefix(b, l, 2)?;
    let mut out = Vec::new();
    for w in cube(b, l + 1) {
        let n1 = w[0] as usize;
        if !t_prime_contains(&w) && w != shifted(&x[0], n1, b) {
            out.push(appended(&w, n1, b));
        }
    }
    out.extend(t_words(b, l));
    full_layers(b, l, k, &mut out);
    for xj in &x {
        for n1 in 0..b {
            out.push(appended(&shifted(xj, n1, b), n1 + k + 1, b));
        }
    }
    CodeSet::from_words(l + 2, b, out)
}

/// Regular code set of degree `a` in width `l+2`, for `3 <= a <= b^l`.
pub fn construct_small(b: usize, l: usize, a: usize) -> Result<CodeSet> {
    if b < 3 || l < 1 {
        return Err(domain("need b >= 3 and l >= 1"));
    }
    check_volume(b, l + 1)?;
    if a < 3 || a > power(b, l)? {
        return Err(domain(format!("need 3 <= a <= b^l, got a={a}")));
    }
    let mut out = Vec::new();
    let mut v0 = vec![0];
    v0.extend(std::iter::repeat(sym(b - 1)).take(l));
    out.push(appended(&v0, 0, b));
    for x in 1..b {
        out.push(vec![sym(x); l + 2]);
    }
    let x = admissible_prefix(b, l, a - 2)?;
    for n1 in 0..b {
        for w in &x {
            out.push(appended(&shifted(w, n1, b), n1, b));
        }
    }
    out.extend(t_words(b, l));
    CodeSet::from_words(l + 2, b, out)
}

/// `Delta^kappa` minus the words of `n1` padded with copies of their first coordinate.
///
/// `n1` must be a regular set without repeated words and of width at most
/// `kappa`, with `kappa <= ceil(log_b(b^kappa - a'b))`. The result is regular
/// of degree `b^(kappa-1) - a'`.
pub fn construct_complement(n1: &CodeSet, kappa: usize) -> Result<CodeSet> {
    let b = n1.alphabet();
    let m = n1.width();
    if b < 2 {
        return Err(domain("alphabet must have at least 2 symbols"));
    }
    let a_prime = n1
        .regular_degree()
        .ok_or_else(|| domain("the inner code set is not regular"))?;
    if n1.has_duplicates() {
        return Err(domain("the inner code set repeats a word"));
    }
    if m > kappa {
        return Err(domain(format!("inner width {m} exceeds kappa = {kappa}")));
    }
    check_volume(b, kappa)?;
    let total = power(b, kappa)?;
    let removed = a_prime * b;
    if removed >= total || (kappa as u32) > ceil_log(b as u64, (total - removed) as u64) {
        return Err(domain(format!(
            "kappa = {kappa} is too small for a' = {a_prime} and b = {b}"
        )));
    }
    let mut padded: Vec<Vec<Symbol>> = n1
        .words()
        .map(|w| {
            let mut p = w.to_vec();
            p.resize(kappa, w[0]);
            p
        })
        .collect();
    padded.sort_unstable();
    let out = cube(b, kappa)
        .into_iter()
        .filter(|w| padded.binary_search(w).is_err());
    CodeSet::from_words(kappa, b, out)
}

fn b2_parts(i: usize) -> (Vec<Vec<Symbol>>, usize) {
    // Words of T_{i+1} are 0^{i-2} followed by an element of T_3.
    let t3: [[Symbol; 3]; 4] = [[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 1]];
    let in_t = |w: &[Symbol]| {
        w[..i - 2].iter().all(|&s| s == 0) && t3.iter().any(|t| t[..] == w[i - 2..])
    };
    let mut out = Vec::new();
    let mut t_count = 0;
    for w in cube(2, i + 1) {
        let last = w[i] as usize;
        if in_t(&w) {
            out.push(appended(&w, 1 - last, 2));
            t_count += 1;
        } else {
            out.push(appended(&w, last, 2));
        }
    }
    (out, t_count)
}

/// Regular code set of degree `2^i` over `{0,1}` in width `i+2` (`i >= 3`).
pub fn construct_b2_power(i: usize) -> Result<CodeSet> {
    if i < 3 {
        return Err(domain("need i >= 3"));
    }
    check_volume(2, i + 2)?;
    CodeSet::from_words(i + 2, 2, b2_parts(i).0)
}

/// Regular code set of degree `2^i - 1` over `{0,1}` in width `i+2` (`i >= 3`).
///
/// Built from the degree-`2^i` set by removing the lexicographically
/// smallest pair of complementary words whose last two coordinates agree.
/// The all-zero word is not in that set, so it cannot be one of the pair.
pub fn construct_b2_power_minus1(i: usize) -> Result<CodeSet> {
    let full = construct_b2_power(i)?;
    let pair = full
        .words()
        .filter(|w| w[i] == w[i + 1])
        .map(|w| (w.to_vec(), w.iter().map(|&s| 1 - s).collect::<Vec<Symbol>>()))
        .find(|(_, c)| full.contains(c))
        .ok_or_else(|| domain("no complementary pair available"))?;
    full.remove_words(&[pair.0, pair.1])
}

/// Regular code set of degree `2^(i+1) - 2` over `{0,1}` in width `i+3` (`i >= 2`).
pub fn construct_b2_rminus2(i: usize) -> Result<CodeSet> {
    if i < 2 {
        return Err(domain("need i >= 2"));
    }
    check_volume(2, i + 3)?;
    let m = i + 2;
    let mut t_prime: Vec<Vec<Symbol>> = Vec::new();
    let mut w = vec![0; m];
    w[m - 1] = 1;
    t_prime.push(w);
    let mut w = vec![0; m];
    w[0] = 1;
    t_prime.push(w);
    let mut w = vec![1; m];
    w[0] = 0;
    w[m - 1] = 0;
    t_prime.push(w);
    t_prime.push(vec![1; m]);
    let mut w = vec![0; m];
    w[0] = 1;
    w[2] = 1;
    let t1 = [vec![0; m], w];
    let mut out = Vec::new();
    for w in cube(2, m) {
        let first = w[0] as usize;
        if t1.contains(&w) {
            out.push(appended(&w, 1 - first, 2));
        } else if !t_prime.contains(&w) {
            out.push(appended(&w, first, 2));
        }
    }
    CodeSet::from_words(i + 3, 2, out)
}

/// Whether the pair `(b,k)` has an alternating base of `k+1` partitions for
/// `a = b^k - 1` built by [`construct_alt_bk_minus1`].
pub fn alt_bk_minus1_applies(b: usize, k: usize) -> bool {
    b >= 3 && ((k >= 3 && b < k + (k + 1) / 2 + 2) || (b, k) == (3, 2))
}

/// `Delta^(k+1)` with `(0,...,0)` doubled and `b+1` words removed: regular of
/// degree `b^k - 1`. For `(b,k) = (3,2)` the explicit triple is used.
pub fn construct_alt_bk_minus1(b: usize, k: usize) -> Result<(CodeSet, ConstructionTag)> {
    if !alt_bk_minus1_applies(b, k) {
        return Err(domain(format!("no alternating construction for b={b}, k={k}")));
    }
    if (b, k) == (3, 2) {
        let set = crate::domain::partitions_to_codeset(&triple_8_3())?;
        return Ok((set, ConstructionTag::ExplicitTriple));
    }
    let width = k + 1;
    check_volume(b, width)?;
    let t = (k + 1).min(b - 2);
    let mut removed: Vec<Vec<Symbol>> = Vec::new();
    for i in 1..=t {
        let mut w = vec![sym(i); width];
        w[i - 1] = 0;
        removed.push(w);
    }
    let tag;
    if t == k + 1 {
        let extra = b - k - 2;
        let mut last = vec![0; width];
        for i in 1..=extra {
            let s = sym(k + 1 + i);
            let mut w = vec![s; width];
            w[2 * i - 2] = 0;
            w[2 * i - 1] = 0;
            removed.push(w);
            last[2 * i - 2] = s;
            last[2 * i - 1] = s;
        }
        removed.push(last);
        removed.push((1..=width).map(sym).collect());
        tag = ConstructionTag::AltBkMinus1Wide { b, k };
    } else if b == 4 {
        // With b = 4 the three words below would share their zero positions
        // with (1,2,0,...,0), and ((1 3),(2 3),1,...,1) fixes the set. These
        // three have zero sets {1,3..k+1}, {2..k} and {k+1}, all distinct.
        let mut w = vec![0; width];
        w[1] = 3;
        removed.push(w);
        let mut w = vec![0; width];
        w[0] = 3;
        w[k] = 3;
        removed.push(w);
        let mut w = vec![3; width];
        w[0] = 1;
        w[1] = 2;
        w[k] = 0;
        removed.push(w);
        tag = ConstructionTag::AltBkMinus1Narrow { b, k };
    } else {
        let mut w = vec![0; width];
        w[0] = sym(b - 1);
        w[1] = sym(b - 1);
        removed.push(w);
        let mut w = vec![sym(b - 1); width];
        w[0] = 0;
        w[1] = 0;
        removed.push(w);
        let mut w = vec![0; width];
        for (j, slot) in w.iter_mut().enumerate().take(b - 2) {
            *slot = sym(j + 1);
        }
        removed.push(w);
        tag = ConstructionTag::AltBkMinus1Narrow { b, k };
    }
    removed.sort_unstable();
    let mut out: Vec<Vec<Symbol>> = cube(b, width)
        .into_iter()
        .filter(|w| removed.binary_search(w).is_err())
        .collect();
    if out.len() + removed.len() != power(b, width)? {
        return Err(domain("removed words are not distinct"));
    }
    out.push(vec![0; width]);
    Ok((CodeSet::from_words(width, b, out)?, tag))
}

/// Which words [`construct_alt_b2`] removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AltB2Variant {
    /// Degree `2^k - 1`.
    Minus1,
    /// Degree `2^k - 2`.
    Minus2,
}

/// `{0,1}^(k+1)` with `(0,...,0)` doubled and 3 or 5 words removed (`k >= 3`).
pub fn construct_alt_b2(k: usize, variant: AltB2Variant) -> Result<CodeSet> {
    if k < 3 {
        return Err(domain("need k >= 3"));
    }
    let width = k + 1;
    check_volume(2, width)?;
    let unit = |j: usize| {
        let mut w = vec![0; width];
        w[j] = 1;
        w
    };
    let ones_from = |j: usize| {
        let mut w = vec![0; width];
        for s in &mut w[j..] {
            *s = 1;
        }
        w
    };
    let removed: Vec<Vec<Symbol>> = match variant {
        AltB2Variant::Minus1 => vec![unit(0), unit(1), ones_from(2)],
        AltB2Variant::Minus2 => vec![unit(0), unit(1), unit(2), ones_from(3), vec![1; width]],
    };
    let mut out: Vec<Vec<Symbol>> = cube(2, width)
        .into_iter()
        .filter(|w| !removed.contains(w))
        .collect();
    out.push(vec![0; width]);
    CodeSet::from_words(width, 2, out)
}

/// Three (8,3)-regular partitions of 24 points whose stabilizer in Alt(24)
/// is trivial, as printed with points numbered from 1.
pub const TRIPLE_8_3_ONE_INDEXED: [[[usize; 8]; 3]; 3] = [
    [
        [1, 2, 3, 4, 5, 6, 7, 8],
        [9, 10, 11, 12, 13, 14, 15, 16],
        [17, 18, 19, 20, 21, 22, 23, 24],
    ],
    [
        [1, 2, 8, 9, 12, 17, 18, 22],
        [4, 5, 6, 10, 15, 16, 21, 23],
        [3, 7, 11, 13, 14, 19, 20, 24],
    ],
    [
        [1, 5, 8, 13, 16, 17, 20, 21],
        [2, 3, 4, 11, 12, 15, 18, 24],
        [6, 7, 9, 10, 14, 19, 22, 23],
    ],
];

/// The explicit triple on points `0..24`.
pub fn triple_8_3() -> Vec<RegularPartition> {
    TRIPLE_8_3_ONE_INDEXED
        .iter()
        .map(|parts| {
            RegularPartition::from_parts(
                parts
                    .iter()
                    .map(|p| p.iter().map(|&x| x - 1).collect())
                    .collect(),
            )
            .expect("the triple is regular")
        })
        .collect()
}
