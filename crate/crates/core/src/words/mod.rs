//! Words over positive-integer letters, their graphs, equivalence classes
//! and the Wigner-word classification used by the moment method.
//!
//! A closed word `(i_0, i_1, ..., i_{k-1}, i_0)` is an index tuple of the
//! trace expansion `Tr W^k = sum W_{i_0 i_1} ... W_{i_{k-1} i_0}`. Two words
//! are equivalent when a bijection of letters maps one onto the other; the
//! canonical representative relabels letters by order of first appearance.

mod dyck;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{LabError, Result};

pub use dyck::{dyck_to_wigner, enumerate_dyck, wigner_to_dyck, DyckPath, DYCK_CAP};

/// Longest closed word the class enumerator accepts by default.
pub const DEFAULT_CLASS_CAP: usize = 11;

/// Undirected edge `{a, b}` stored with `a <= b`. Self-loops have `a == b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub u32, pub u32);

impl Edge {
    #[inline]
    pub fn new(a: u32, b: u32) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn is_loop(self) -> bool {
        self.0 == self.1
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// A non-empty sequence of positive letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(LabError::Input("a word has at least one letter".into()));
        }
        if letters.contains(&0) {
            return Err(LabError::Input("letters are positive integers".into()));
        }
        Ok(Word(letters))
    }

    /// Builds a word from zero-based indices (index `i` becomes letter `i + 1`).
    pub fn from_indices(indices: &[usize]) -> Self {
        Word(indices.iter().map(|&i| i as u32 + 1).collect())
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_closed(&self) -> bool {
        self.0.first() == self.0.last()
    }

    /// Number of distinct letters.
    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.0.iter().copied().collect()
    }

    /// Consecutive steps `{s_i, s_{i+1}}` in order of traversal.
    pub fn steps(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.steps().map(|(a, b)| Edge::new(a, b)).collect()
    }

    /// Edge multiplicities: how often each undirected edge is traversed.
    pub fn traversals(&self) -> BTreeMap<Edge, usize> {
        let mut counts = BTreeMap::new();
        for (a, b) in self.steps() {
            *counts.entry(Edge::new(a, b)).or_insert(0) += 1;
        }
        counts
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = LabError;

    /// Parses a comma-separated list of letters such as `3,1,2,3`.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(|part| {
                part.trim().parse::<u32>().map_err(|_| {
                    LabError::Input(format!("malformed letter '{}' in '{s}'", part.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(letters)
    }
}

/// Relabels letters by order of first appearance.
pub fn canonical_form(w: &Word) -> Word {
    let mut labels: HashMap<u32, u32> = HashMap::new();
    let letters =
        w.0.iter()
            .map(|&l| {
                let next = labels.len() as u32 + 1;
                *labels.entry(l).or_insert(next)
            })
            .collect();
    Word(letters)
}

pub fn equivalent(a: &Word, b: &Word) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// `G_w`: the letters as vertices, consecutive pairs as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordGraph {
    pub vertices: BTreeSet<u32>,
    pub traversal_count: BTreeMap<Edge, usize>,
}

impl WordGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.traversal_count.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.traversal_count.keys().copied()
    }

    pub fn total_traversals(&self) -> usize {
        self.traversal_count.values().sum()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.iter().next() else {
            return true;
        };
        let mut adjacency: HashMap<u32, Vec<u32>> = HashMap::new();
        for e in self.edges() {
            adjacency.entry(e.0).or_default().push(e.1);
            adjacency.entry(e.1).or_default().push(e.0);
        }
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in adjacency.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.len() == self.vertices.len()
    }
}

pub fn word_graph(w: &Word) -> WordGraph {
    WordGraph {
        vertices: w.support(),
        traversal_count: w.traversals(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordClass {
    General,
    /// Weak Wigner but neither Wigner nor critical.
    WeakWigner,
    Wigner,
    CriticalWeakWigner,
}

impl WordClass {
    pub const ALL: [WordClass; 4] = [
        WordClass::General,
        WordClass::WeakWigner,
        WordClass::Wigner,
        WordClass::CriticalWeakWigner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WordClass::General => "general",
            WordClass::WeakWigner => "weak_wigner",
            WordClass::Wigner => "wigner",
            WordClass::CriticalWeakWigner => "critical_weak_wigner",
        }
    }

    pub fn is_weak_wigner(self) -> bool {
        self != WordClass::General
    }
}

impl fmt::Display for WordClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WordClass {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        WordClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| LabError::Input(format!("unknown word class '{s}'")))
    }
}

/// A closed word whose every edge is traversed at least twice is weak
/// Wigner; it is Wigner when `wt = (l + 1) / 2` and critical when
/// `wt = (l - 1) / 2`.
pub fn classify(w: &Word) -> WordClass {
    if !w.is_closed() {
        return WordClass::General;
    }
    if w.traversals().values().any(|&c| c < 2) {
        return WordClass::General;
    }
    let (wt, l) = (w.weight(), w.len());
    if 2 * wt == l + 1 {
        WordClass::Wigner
    } else if 2 * wt + 1 == l {
        WordClass::CriticalWeakWigner
    } else {
        WordClass::WeakWigner
    }
}

/// Canonical closed words of the given length, lexicographically ordered.
pub fn enumerate_closed_classes(length: usize) -> Result<Vec<Word>> {
    enumerate_closed_classes_capped(length, DEFAULT_CLASS_CAP)
}

pub fn enumerate_closed_classes_capped(length: usize, cap: usize) -> Result<Vec<Word>> {
    if length == 0 {
        return Err(LabError::Input("word length must be positive".into()));
    }
    if length > cap {
        return Err(LabError::Capacity(format!(
            "closed-word length {length} exceeds enumeration cap {cap}"
        )));
    }
    if length == 1 {
        return Ok(vec![Word(vec![1])]);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(length);
    prefix.push(1);
    grow_restricted(&mut prefix, 1, length - 1, &mut out);
    Ok(out)
}

// Restricted growth strings of length `body`, each closed by a final 1.
fn grow_restricted(prefix: &mut Vec<u32>, max: u32, body: usize, out: &mut Vec<Word>) {
    if prefix.len() == body {
        let mut letters = prefix.clone();
        letters.push(1);
        out.push(Word(letters));
        return;
    }
    for next in 1..=max + 1 {
        prefix.push(next);
        grow_restricted(prefix, max.max(next), body, out);
        prefix.pop();
    }
}

/// Number of canonical closed words of `length` in each class.
pub fn class_counts(length: usize) -> Result<BTreeMap<WordClass, usize>> {
    let mut counts: BTreeMap<WordClass, usize> = WordClass::ALL.iter().map(|&c| (c, 0)).collect();
    for w in enumerate_closed_classes(length)? {
        *counts.entry(classify(&w)).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Ordered collection of words with the union graph `G_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub words: Vec<Word>,
}

impl Sentence {
    pub fn new(words: Vec<Word>) -> Self {
        Self { words }
    }

    pub fn vertices(&self) -> BTreeSet<u32> {
        self.words
            .iter()
            .flat_map(|w| w.letters().iter().copied())
            .collect()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.words
            .iter()
            .flat_map(|w| w.steps().map(|(a, b)| Edge::new(a, b)))
            .collect()
    }

    /// Edge multiplicities summed over all words.
    pub fn traversals(&self) -> BTreeMap<Edge, usize> {
        let mut counts = BTreeMap::new();
        for w in &self.words {
            for (e, c) in w.traversals() {
                *counts.entry(e).or_insert(0) += c;
            }
        }
        counts
    }

    pub fn graph(&self) -> WordGraph {
        WordGraph {
            vertices: self.vertices(),
            traversal_count: self.traversals(),
        }
    }

    /// Groups word indices into classes of words linked through shared edges.
    pub fn edge_components(&self) -> Vec<Vec<usize>> {
        let edge_sets: Vec<BTreeSet<Edge>> = self.words.iter().map(Word::edges).collect();
        let m = self.words.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..m {
            for j in i + 1..m {
                if !edge_sets[i].is_disjoint(&edge_sets[j]) {
                    let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..m {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }
}
