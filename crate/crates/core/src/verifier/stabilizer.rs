//! Setwise stabilizer of a multiset of words in `Sym(b)^l`.
//!
//! The code set is viewed as a coloured bipartite graph: one vertex per
//! distinct word (coloured by multiplicity), one vertex per (column, symbol)
//! pair (coloured by column), and an edge between a word and each of its `l`
//! coordinates. Column permutations fixing the multiset are exactly the
//! colour-preserving automorphisms of this graph restricted to the symbol
//! vertices.
//!
//! The search is the usual individualise-and-refine tree. A first path
//! individualises symbol vertices until every symbol vertex has its own
//! colour. Every other leaf is reached by individualising, level by level, a
//! vertex of the same cell; a branch is cut as soon as its refinement trace
//! differs from the first path's. Refinement commutes with automorphisms, so
//! no automorphism is ever cut. Each surviving leaf defines a candidate
//! column permutation, which is accepted only after checking `N^sigma = N`
//! word by word.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use crate::domain::{CodeSet, ColumnPerm, Symbol};

/// Column permutations fixing a code set as a multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerReport {
    /// Sorted; always contains the identity.
    pub elements: Vec<ColumnPerm>,
    /// False when enumeration stopped after finding more than `cap` elements.
    pub complete: bool,
}

impl StabilizerReport {
    /// The group order, when the enumeration is complete.
    pub fn order(&self) -> Option<usize> {
        self.complete.then_some(self.elements.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.complete && self.elements.len() == 1
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &ColumnPerm> {
        self.elements.iter().filter(|s| !s.is_identity())
    }
}

struct Graph<'a> {
    set: &'a CodeSet,
    width: usize,
    alphabet: usize,
    words: usize,
    /// `word_syms[w * width + j]` is the symbol index `j * alphabet + s`.
    word_syms: Vec<u32>,
    /// Words adjacent to each symbol index.
    sym_adj: Vec<Vec<u32>>,
    multiplicity: Vec<u32>,
}

impl<'a> Graph<'a> {
    fn new(set: &'a CodeSet) -> Graph<'a> {
        let width = set.width();
        let alphabet = set.alphabet();
        let distinct = set.distinct();
        let words = distinct.len();
        let mut word_syms = Vec::with_capacity(words * width);
        let mut sym_adj = vec![Vec::new(); width * alphabet];
        let mut multiplicity = Vec::with_capacity(words);
        for (w, (word, m)) in distinct.iter().enumerate() {
            multiplicity.push(*m as u32);
            for (j, &s) in word.iter().enumerate() {
                let u = j * alphabet + s as usize;
                word_syms.push(u as u32);
                sym_adj[u].push(w as u32);
            }
        }
        Graph {
            set,
            width,
            alphabet,
            words,
            word_syms,
            sym_adj,
            multiplicity,
        }
    }

    fn vertices(&self) -> usize {
        self.words + self.width * self.alphabet
    }

    fn initial_colors(&self) -> Colors {
        // Words first (by multiplicity), then symbol vertices by column.
        let mut mults: Vec<u32> = self.multiplicity.clone();
        mults.sort_unstable();
        mults.dedup();
        let mut colors = Vec::with_capacity(self.vertices());
        for &m in &self.multiplicity {
            colors.push(mults.binary_search(&m).unwrap() as u32);
        }
        let offset = mults.len() as u32;
        for j in 0..self.width {
            for _ in 0..self.alphabet {
                colors.push(offset + j as u32);
            }
        }
        Colors {
            count: offset as usize + self.width,
            of: colors,
        }
    }

    /// Refines to the coarsest equitable partition below `colors`.
    ///
    /// Records one hash per round into `trace`. With a `reference` trace the
    /// refinement stops and returns `false` at the first disagreement.
    fn refine(&self, colors: &mut Colors, trace: &mut Vec<u64>, reference: Option<&[u64]>) -> bool {
        let w = self.words;
        let width = self.width;
        let mut keys: Vec<Vec<u32>> = Vec::with_capacity(self.vertices());
        let mut order: Vec<u32> = (0..self.vertices() as u32).collect();
        let mut scratch: Vec<u32> = Vec::new();
        loop {
            keys.clear();
            for v in 0..w {
                let mut k = Vec::with_capacity(width + 1);
                k.push(colors.of[v]);
                for &u in &self.word_syms[v * width..(v + 1) * width] {
                    k.push(colors.of[w + u as usize]);
                }
                keys.push(k);
            }
            for (u, adj) in self.sym_adj.iter().enumerate() {
                scratch.clear();
                scratch.extend(adj.iter().map(|&v| colors.of[v as usize]));
                scratch.sort_unstable();
                let mut k = vec![colors.of[w + u]];
                let mut i = 0;
                while i < scratch.len() {
                    let c = scratch[i];
                    let mut j = i;
                    while j < scratch.len() && scratch[j] == c {
                        j += 1;
                    }
                    k.push(c);
                    k.push((j - i) as u32);
                    i = j;
                }
                keys.push(k);
            }
            order.sort_unstable_by(|&x, &y| keys[x as usize].cmp(&keys[y as usize]));

            let mut hasher = DefaultHasher::new();
            let mut next = vec![0u32; self.vertices()];
            let mut count = 0u32;
            let mut run = 0u32;
            for (i, &v) in order.iter().enumerate() {
                if i > 0 && keys[v as usize] != keys[order[i - 1] as usize] {
                    keys[order[i - 1] as usize].hash(&mut hasher);
                    run.hash(&mut hasher);
                    count += 1;
                    run = 0;
                }
                next[v as usize] = count;
                run += 1;
            }
            if let Some(&last) = order.last() {
                keys[last as usize].hash(&mut hasher);
                run.hash(&mut hasher);
                count += 1;
            }
            let digest = hasher.finish();
            let round = trace.len();
            trace.push(digest);
            if let Some(r) = reference {
                if r.get(round) != Some(&digest) {
                    return false;
                }
            }
            let stable = count as usize == colors.count;
            colors.of = next;
            colors.count = count as usize;
            if stable {
                if let Some(r) = reference {
                    if r.len() != trace.len() {
                        return false;
                    }
                }
                return true;
            }
        }
    }

    /// Smallest non-singleton cell of symbol vertices (ties by colour), if any.
    fn target_cell(&self, colors: &Colors) -> Option<u32> {
        let mut sizes = vec![0usize; colors.count];
        for &c in &colors.of[self.words..] {
            sizes[c as usize] += 1;
        }
        sizes
            .iter()
            .enumerate()
            .filter(|&(_, &s)| s >= 2)
            .min_by_key(|&(c, &s)| (s, c))
            .map(|(c, _)| c as u32)
    }

    fn cell_members(&self, colors: &Colors, cell: u32) -> Vec<usize> {
        (self.words..self.vertices())
            .filter(|&v| colors.of[v] == cell)
            .collect()
    }

    fn individualize(&self, colors: &Colors, v: usize) -> Colors {
        let mut out = colors.clone();
        out.of[v] = out.count as u32;
        out.count += 1;
        out
    }

    /// The column permutation sending the first-path leaf onto `leaf`.
    fn leaf_perm(&self, first: &Colors, leaf: &Colors) -> Option<ColumnPerm> {
        let w = self.words;
        let syms = self.width * self.alphabet;
        let mut by_color = vec![usize::MAX; leaf.count];
        for u in 0..syms {
            let c = leaf.of[w + u] as usize;
            if by_color[c] != usize::MAX {
                return None;
            }
            by_color[c] = u;
        }
        let mut images = vec![vec![0 as Symbol; self.alphabet]; self.width];
        for u in 0..syms {
            let c = first.of[w + u] as usize;
            let v = *by_color.get(c)?;
            if v == usize::MAX || v / self.alphabet != u / self.alphabet {
                return None;
            }
            images[u / self.alphabet][u % self.alphabet] = (v % self.alphabet) as Symbol;
        }
        ColumnPerm::new(images).ok()
    }

    fn fixes(&self, sigma: &ColumnPerm) -> bool {
        fixes_multiset(self.set, sigma)
    }
}

#[derive(Clone)]
struct Colors {
    of: Vec<u32>,
    count: usize,
}

struct Level {
    cell: u32,
    trace: Vec<u64>,
}

struct Search<'g, 'a> {
    graph: &'g Graph<'a>,
    levels: Vec<Level>,
    first_leaf: Colors,
    cap: usize,
    found: BTreeSet<ColumnPerm>,
}

impl Search<'_, '_> {
    fn exhausted(&self) -> bool {
        self.found.len() > self.cap
    }

    fn descend(&mut self, depth: usize, colors: &Colors) {
        if self.exhausted() {
            return;
        }
        if depth == self.levels.len() {
            if let Some(sigma) = self.graph.leaf_perm(&self.first_leaf, colors) {
                if self.graph.fixes(&sigma) {
                    self.found.insert(sigma);
                }
            }
            return;
        }
        let cell = self.levels[depth].cell;
        for v in self.graph.cell_members(colors, cell) {
            let mut next = self.graph.individualize(colors, v);
            let mut trace = Vec::new();
            let reference = std::mem::take(&mut self.levels[depth].trace);
            let ok = self.graph.refine(&mut next, &mut trace, Some(&reference));
            self.levels[depth].trace = reference;
            if ok {
                self.descend(depth + 1, &next);
            }
            if self.exhausted() {
                return;
            }
        }
    }
}

/// Enumerates `sigma` in `Sym(b)^l` with `N^sigma = N` as multisets, stopping
/// once more than `cap` elements are known.
pub fn stabilizer(set: &CodeSet, cap: usize) -> StabilizerReport {
    let cap = cap.max(1);
    let graph = Graph::new(set);
    let mut root = graph.initial_colors();
    let mut root_trace = Vec::new();
    graph.refine(&mut root, &mut root_trace, None);

    let mut levels = Vec::new();
    let mut current = root.clone();
    while let Some(cell) = graph.target_cell(&current) {
        let v = graph.cell_members(&current, cell)[0];
        let mut next = graph.individualize(&current, v);
        let mut trace = Vec::new();
        graph.refine(&mut next, &mut trace, None);
        levels.push(Level { cell, trace });
        current = next;
    }

    let mut search = Search {
        graph: &graph,
        levels,
        first_leaf: current,
        cap,
        found: BTreeSet::new(),
    };
    search.descend(0, &root);
    let complete = !search.exhausted();
    StabilizerReport {
        elements: search.found.into_iter().collect(),
        complete,
    }
}

/// Whether `sigma` maps the multiset onto itself.
pub fn fixes_multiset(set: &CodeSet, sigma: &ColumnPerm) -> bool {
    if sigma.width() != set.width() || sigma.alphabet() != set.alphabet() {
        return false;
    }
    let mut image = vec![0; set.width()];
    set.distinct().into_iter().all(|(w, m)| {
        sigma.apply_into(w, &mut image);
        set.multiplicity(&image) == m
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Every element of `Sym(b)^l`, by brute force.
    fn all_column_perms(width: usize, b: usize) -> Vec<ColumnPerm> {
        fn perms(b: usize) -> Vec<Vec<Symbol>> {
            if b == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(b - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, (b - 1) as Symbol);
                    out.push(q);
                }
            }
            out
        }
        let single = perms(b);
        let mut out: Vec<Vec<Vec<Symbol>>> = vec![vec![]];
        for _ in 0..width {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    single.iter().map(move |p| {
                        let mut q = prefix.clone();
                        q.push(p.clone());
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(|c| ColumnPerm::new(c).unwrap()).collect()
    }

    fn naive_fixes(set: &CodeSet, sigma: &ColumnPerm) -> bool {
        let mut a: Vec<Vec<Symbol>> = set.words().map(|w| sigma.apply(w)).collect();
        let mut b: Vec<Vec<Symbol>> = set.words().map(|w| w.to_vec()).collect();
        a.sort();
        b.sort();
        a == b
    }

    fn brute_force(set: &CodeSet) -> Vec<ColumnPerm> {
        let mut v: Vec<ColumnPerm> = all_column_perms(set.width(), set.alphabet())
            .into_iter()
            .filter(|s| naive_fixes(set, s))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn full_cube_is_fixed_by_everything() {
        let cube = CodeSet::from_words(3, 2, (0..8u16).map(|x| [x >> 2 & 1, x >> 1 & 1, x & 1]))
            .unwrap();
        let r = stabilizer(&cube, 4);
        assert!(!r.complete);
        let r = stabilizer(&cube, 8);
        assert_eq!(r.order(), Some(8));
        let sq = CodeSet::from_words(2, 3, (0..9u16).map(|x| [x / 3, x % 3])).unwrap();
        assert_eq!(stabilizer(&sq, 36).order(), Some(36));
        assert!(!stabilizer(&sq, 35).complete);
    }

    #[test]
    fn t_set_for_three_symbols() {
        let t = CodeSet::from_words(3, 3, [[0, 0, 1], [1, 0, 2], [2, 1, 0]]).unwrap();
        assert!(!fixes_multiset(&t, &ColumnPerm::shift(3, 3, 1)));
        let r = stabilizer(&t, 1000);
        assert_eq!(r.elements, brute_force(&t));
        assert!(r.elements.iter().all(|s| naive_fixes(&t, s)));
    }

    fn random_set() -> impl Strategy<Value = CodeSet> {
        (1usize..=4, 2usize..=4).prop_flat_map(|(width, b)| {
            let word = proptest::collection::vec(0..b as Symbol, width);
            proptest::collection::vec(word, 1..=14)
                .prop_map(move |ws| CodeSet::from_words(width, b, ws).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_brute_force(set in random_set()) {
            prop_assume!(set.width() <= 3 || set.alphabet() <= 3);
            let expected = brute_force(&set);
            let r = stabilizer(&set, usize::MAX - 1);
            prop_assert!(r.complete);
            prop_assert_eq!(r.elements, expected);
        }

        #[test]
        fn reported_elements_fix_the_set(set in random_set()) {
            let r = stabilizer(&set, 4);
            prop_assert!(r.elements.iter().any(|s| s.is_identity()));
            for s in &r.elements {
                prop_assert!(naive_fixes(&set, s));
            }
        }
    }
}
