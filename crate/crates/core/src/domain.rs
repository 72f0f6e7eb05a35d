//! Regular partitions, code words over `Z/bZ`, and the dictionary between them.
//!
//! A list of `l` partitions of `{0..n-1}` into `b` parts sends every point to
//! the tuple of part indices it lies in. The image is a multiset of words of
//! length `l` over `{0..b-1}`; when every partition is `(a,b)`-regular, each
//! symbol occurs exactly `a` times in each column. Parts are numbered by
//! their minimum element, so the map is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{domain, shape, Error, Result};

/// A symbol of the alphabet `{0..b-1}`.
pub type Symbol = u16;

/// Part size `a` and number of parts `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    a: usize,
    b: usize,
}

impl Params {
    pub fn new(a: usize, b: usize) -> Result<Params> {
        if a < 2 || b < 2 {
            return Err(domain(format!("need a >= 2 and b >= 2, got ({a},{b})")));
        }
        if b > Symbol::MAX as usize {
            return Err(domain(format!("b = {b} exceeds the symbol range")));
        }
        Ok(Params { a, b })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.a * self.b
    }

    /// Sym(ab) acts faithfully on (a,b)-regular partitions except for (2,2).
    pub fn is_faithful(&self) -> bool {
        !(self.a == 2 && self.b == 2)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// One word of `{0..b-1}^l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeWord(Vec<Symbol>);

impl CodeWord {
    pub fn new(coords: Vec<Symbol>, alphabet: usize) -> Result<CodeWord> {
        if coords.is_empty() {
            return Err(shape("code words need at least one coordinate"));
        }
        if let Some(&s) = coords.iter().find(|&&s| s as usize >= alphabet) {
            return Err(domain(format!("symbol {s} outside alphabet of size {alphabet}")));
        }
        Ok(CodeWord(coords))
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[Symbol]> for CodeWord {
    fn as_ref(&self) -> &[Symbol] {
        &self.0
    }
}

/// A multiset of words of equal length over `{0..b-1}`.
///
/// Words are stored flat in lexicographic order with duplicates adjacent,
/// together with the per-column symbol counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeSet {
    width: usize,
    alphabet: usize,
    data: Vec<Symbol>,
    column_counts: Vec<usize>,
}

impl CodeSet {
    pub fn from_words<I, W>(width: usize, alphabet: usize, words: I) -> Result<CodeSet>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[Symbol]>,
    {
        if width == 0 {
            return Err(shape("code sets need width >= 1"));
        }
        if alphabet == 0 || alphabet > Symbol::MAX as usize + 1 {
            return Err(domain(format!("unsupported alphabet size {alphabet}")));
        }
        let mut rows: Vec<Vec<Symbol>> = Vec::new();
        for w in words {
            let w = w.as_ref();
            if w.len() != width {
                return Err(shape(format!(
                    "word of length {} in a code set of width {width}",
                    w.len()
                )));
            }
            if let Some(&s) = w.iter().find(|&&s| s as usize >= alphabet) {
                return Err(domain(format!("symbol {s} outside alphabet of size {alphabet}")));
            }
            rows.push(w.to_vec());
        }
        rows.sort_unstable();
        let mut data = Vec::with_capacity(rows.len() * width);
        for r in &rows {
            data.extend_from_slice(r);
        }
        Ok(Self::from_sorted_flat(width, alphabet, data))
    }

    fn from_sorted_flat(width: usize, alphabet: usize, data: Vec<Symbol>) -> CodeSet {
        let mut column_counts = vec![0usize; width * alphabet];
        for w in data.chunks_exact(width) {
            for (j, &s) in w.iter().enumerate() {
                column_counts[j * alphabet + s as usize] += 1;
            }
        }
        CodeSet {
            width,
            alphabet,
            data,
            column_counts,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Number of words counted with multiplicity.
    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// All words in lexicographic order, duplicates repeated.
    pub fn words(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.data.chunks_exact(self.width)
    }

    pub fn word(&self, index: usize) -> &[Symbol] {
        &self.data[index * self.width..(index + 1) * self.width]
    }

    /// Distinct words with their multiplicities, in lexicographic order.
    pub fn distinct(&self) -> Vec<(&[Symbol], usize)> {
        let mut out: Vec<(&[Symbol], usize)> = Vec::new();
        for w in self.words() {
            match out.last_mut() {
                Some((last, m)) if *last == w => *m += 1,
                _ => out.push((w, 1)),
            }
        }
        out
    }

    pub fn column_count(&self, column: usize, symbol: Symbol) -> usize {
        self.column_counts[column * self.alphabet + symbol as usize]
    }

    /// `Some(a)` when every symbol occurs exactly `a` times in every column.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = *self.column_counts.first()?;
        self.column_counts
            .iter()
            .all(|&c| c == first)
            .then_some(first)
    }

    pub fn is_regular(&self, a: usize) -> bool {
        self.regular_degree() == Some(a)
    }

    fn position(&self, word: &[Symbol]) -> std::result::Result<usize, usize> {
        let n = self.len();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.word(mid) < word {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo < n && self.word(lo) == word {
            Ok(lo)
        } else {
            Err(lo)
        }
    }

    pub fn multiplicity(&self, word: &[Symbol]) -> usize {
        match self.position(word) {
            Ok(start) => {
                let mut end = start;
                while end < self.len() && self.word(end) == word {
                    end += 1;
                }
                end - start
            }
            Err(_) => 0,
        }
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.position(word).is_ok()
    }

    /// For each multiplicity `m`, the number of distinct words occurring exactly `m` times.
    pub fn fiber_profile(&self) -> BTreeMap<usize, usize> {
        let mut profile = BTreeMap::new();
        for (_, m) in self.distinct() {
            *profile.entry(m).or_insert(0) += 1;
        }
        profile
    }

    pub fn has_duplicates(&self) -> bool {
        self.words()
            .zip(self.words().skip(1))
            .any(|(u, v)| u == v)
    }

    /// The image of the multiset under a column permutation.
    pub fn apply(&self, sigma: &ColumnPerm) -> Result<CodeSet> {
        if sigma.width() != self.width || sigma.alphabet() != self.alphabet {
            return Err(shape("column permutation does not match the code set"));
        }
        let mut buf = vec![0; self.width];
        let mut rows = Vec::with_capacity(self.len());
        for w in self.words() {
            sigma.apply_into(w, &mut buf);
            rows.push(buf.clone());
        }
        CodeSet::from_words(self.width, self.alphabet, rows)
    }

    /// Multiset difference: removes one copy of each listed word.
    pub fn remove_words<W: AsRef<[Symbol]>>(&self, words: &[W]) -> Result<CodeSet> {
        let mut rows: Vec<Vec<Symbol>> = self.words().map(|w| w.to_vec()).collect();
        for w in words {
            let w = w.as_ref();
            let pos = rows
                .iter()
                .position(|r| r.as_slice() == w)
                .ok_or_else(|| domain(format!("word {w:?} is not in the code set")))?;
            rows.remove(pos);
        }
        CodeSet::from_words(self.width, self.alphabet, rows)
    }
}

impl fmt::Display for CodeSet {
    /// One word per line, symbols separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in self.words() {
            let line: Vec<String> = w.iter().map(|s| s.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// A partition of `{0..n-1}` into `b` parts of equal size `a`.
///
/// Stored as the part index of every point, parts numbered by their minimum
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegularPartition {
    a: usize,
    b: usize,
    labels: Vec<u32>,
}

impl RegularPartition {
    pub fn from_parts(parts: Vec<Vec<usize>>) -> Result<RegularPartition> {
        if parts.is_empty() {
            return Err(shape("a partition needs at least one part"));
        }
        let a = parts[0].len();
        if a == 0 {
            return Err(shape("parts must be nonempty"));
        }
        if parts.iter().any(|p| p.len() != a) {
            return Err(shape("parts have different sizes"));
        }
        let n = a * parts.len();
        let mut labels = vec![u32::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &p in part {
                if p >= n {
                    return Err(shape(format!("point {p} outside 0..{n}")));
                }
                if labels[p] != u32::MAX {
                    return Err(shape(format!("point {p} lies in two parts")));
                }
                labels[p] = i as u32;
            }
        }
        Self::from_labels(&labels)
    }

    /// Builds a partition from an arbitrary labelling of the points.
    pub fn from_labels<L: Copy + Into<u64>>(labels: &[L]) -> Result<RegularPartition> {
        if labels.is_empty() {
            return Err(shape("a partition needs at least one point"));
        }
        let mut rename: BTreeMap<u64, u32> = BTreeMap::new();
        let mut out = Vec::with_capacity(labels.len());
        let mut sizes: Vec<usize> = Vec::new();
        for &l in labels {
            let next = rename.len() as u32;
            let id = *rename.entry(l.into()).or_insert(next);
            if id as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[id as usize] += 1;
            out.push(id);
        }
        let a = sizes[0];
        if sizes.iter().any(|&s| s != a) {
            return Err(Error::Regularity(format!(
                "part sizes {sizes:?} are not all equal"
            )));
        }
        Ok(RegularPartition {
            a,
            b: sizes.len(),
            labels: out,
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Part index of every point.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn part_of(&self, point: usize) -> usize {
        self.labels[point] as usize
    }

    /// Parts in canonical order, each sorted.
    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::with_capacity(self.a); self.b];
        for (p, &l) in self.labels.iter().enumerate() {
            parts[l as usize].push(p);
        }
        parts
    }

    /// The partition whose parts are the images of this one's parts under `perm`.
    pub fn relabel_points(&self, perm: &PointPerm) -> Result<RegularPartition> {
        if perm.len() != self.n() {
            return Err(shape("point permutation has the wrong degree"));
        }
        let mut labels = vec![0u32; self.n()];
        for (p, &l) in self.labels.iter().enumerate() {
            labels[perm.apply(p)] = l;
        }
        Self::from_labels(&labels)
    }
}

impl fmt::Display for RegularPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts()
            .iter()
            .map(|p| {
                let pts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An element of `Sym({0..b-1})^l` acting coordinatewise on words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColumnPerm {
    images: Vec<Vec<Symbol>>,
}

impl ColumnPerm {
    pub fn new(images: Vec<Vec<Symbol>>) -> Result<ColumnPerm> {
        let b = images.first().map(Vec::len).unwrap_or(0);
        if images.is_empty() || b == 0 {
            return Err(shape("column permutations need width >= 1 and b >= 1"));
        }
        for img in &images {
            if img.len() != b {
                return Err(shape("columns permute alphabets of different sizes"));
            }
            let mut seen = vec![false; b];
            for &s in img {
                if s as usize >= b || seen[s as usize] {
                    return Err(domain(format!("{img:?} is not a permutation of 0..{b}")));
                }
                seen[s as usize] = true;
            }
        }
        Ok(ColumnPerm { images })
    }

    pub fn identity(width: usize, alphabet: usize) -> ColumnPerm {
        let id: Vec<Symbol> = (0..alphabet as Symbol).collect();
        ColumnPerm {
            images: vec![id; width],
        }
    }

    /// Adds `shift` (mod b) to every coordinate.
    pub fn shift(width: usize, alphabet: usize, shift: usize) -> ColumnPerm {
        let col: Vec<Symbol> = (0..alphabet)
            .map(|s| ((s + shift) % alphabet) as Symbol)
            .collect();
        ColumnPerm {
            images: vec![col; width],
        }
    }

    pub fn width(&self) -> usize {
        self.images.len()
    }

    pub fn alphabet(&self) -> usize {
        self.images[0].len()
    }

    pub fn columns(&self) -> &[Vec<Symbol>] {
        &self.images
    }

    pub fn image(&self, column: usize, symbol: Symbol) -> Symbol {
        self.images[column][symbol as usize]
    }

    pub fn apply_into(&self, word: &[Symbol], out: &mut [Symbol]) {
        for (j, (&s, o)) in word.iter().zip(out.iter_mut()).enumerate() {
            *o = self.images[j][s as usize];
        }
    }

    pub fn apply(&self, word: &[Symbol]) -> Vec<Symbol> {
        let mut out = vec![0; word.len()];
        self.apply_into(word, &mut out);
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .all(|img| img.iter().enumerate().all(|(i, &s)| i == s as usize))
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &ColumnPerm) -> ColumnPerm {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(f, g)| f.iter().map(|&s| g[s as usize]).collect())
            .collect();
        ColumnPerm { images }
    }

    pub fn inverse(&self) -> ColumnPerm {
        let images = self
            .images
            .iter()
            .map(|f| {
                let mut inv = vec![0; f.len()];
                for (i, &s) in f.iter().enumerate() {
                    inv[s as usize] = i as Symbol;
                }
                inv
            })
            .collect();
        ColumnPerm { images }
    }
}

impl fmt::Display for ColumnPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .images
            .iter()
            .map(|img| {
                let p = PointPerm {
                    images: img.iter().map(|&s| s as usize).collect(),
                };
                p.to_string()
            })
            .collect();
        write!(f, "[{}]", cols.join("; "))
    }
}

/// A permutation of the points `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointPerm {
    images: Vec<usize>,
}

impl PointPerm {
    pub fn new(images: Vec<usize>) -> Result<PointPerm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(domain("not a permutation"));
            }
            seen[i] = true;
        }
        Ok(PointPerm { images })
    }

    pub fn identity(n: usize) -> PointPerm {
        PointPerm {
            images: (0..n).collect(),
        }
    }

    pub fn transposition(n: usize, x: usize, y: usize) -> PointPerm {
        let mut p = Self::identity(n);
        p.images.swap(x, y);
        p
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &PointPerm) -> PointPerm {
        PointPerm {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> PointPerm {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        PointPerm { images: inv }
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            out.push(cyc);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        transpositions % 2 == 0
    }
}

impl fmt::Display for PointPerm {
    /// Cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

fn check_same_shape(ps: &[RegularPartition]) -> Result<()> {
    let first = ps
        .first()
        .ok_or_else(|| shape("need at least one partition"))?;
    for p in ps {
        if p.n() != first.n() || p.a() != first.a() || p.b() != first.b() {
            return Err(shape(format!(
                "partitions of shape ({},{}) and ({},{}) cannot be combined",
                first.a(),
                first.b(),
                p.a(),
                p.b()
            )));
        }
    }
    if first.b() > Symbol::MAX as usize + 1 {
        return Err(domain("too many parts for the symbol range"));
    }
    Ok(())
}

/// The word of every point: entry `j` is the part of partition `j` containing it.
pub fn point_words(ps: &[RegularPartition]) -> Result<Vec<Vec<Symbol>>> {
    check_same_shape(ps)?;
    let n = ps[0].n();
    Ok((0..n)
        .map(|p| ps.iter().map(|s| s.labels()[p] as Symbol).collect())
        .collect())
}

/// Image of the points under the partitions, as a multiset of words.
pub fn partitions_to_codeset(ps: &[RegularPartition]) -> Result<CodeSet> {
    let words = point_words(ps)?;
    CodeSet::from_words(ps.len(), ps[0].b(), words)
}

/// The partitions induced by the columns of a regular code set.
///
/// Point `p` is the `p`-th word in lexicographic order (duplicates adjacent).
pub fn codeset_to_partitions(set: &CodeSet) -> Result<Vec<RegularPartition>> {
    if set.regular_degree().is_none() {
        return Err(Error::Regularity(
            "column counts of the code set are not all equal".into(),
        ));
    }
    (0..set.width())
        .map(|j| {
            let labels: Vec<u32> = set.words().map(|w| w[j] as u32).collect();
            RegularPartition::from_labels(&labels)
        })
        .collect()
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

/// Number of `(a,b)`-regular partitions of an `ab`-set: `(ab)! / ((a!)^b b!)`.
pub fn count_regular_partitions(a: usize, b: usize) -> Result<BigUint> {
    if a == 0 || b == 0 {
        return Err(domain("a and b must be positive"));
    }
    let n = a.checked_mul(b).ok_or_else(|| domain("ab overflows"))?;
    let denom = num_traits_pow(factorial(a), b) * factorial(b);
    Ok(factorial(n) / denom)
}

fn num_traits_pow(base: BigUint, exp: usize) -> BigUint {
    (0..exp).fold(BigUint::from(1u32), |acc, _| acc * &base)
}
