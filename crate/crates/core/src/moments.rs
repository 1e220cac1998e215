//! Exact finite-`n` oracles for trace moments of Wigner matrices.
//!
//! `E[Tr W^k] = n^{-k/2} sum E[X_w]` over closed words `w` of length `k + 1`
//! on the letters `1..=n`, where `X_w` is the product of unscaled entries
//! along the steps of `w`. Independence of entries makes `E[X_w]` a product
//! over the distinct undirected edges of `w` of the moment of order equal to
//! the edge multiplicity. Two routes evaluate the sum: direct enumeration of
//! index tuples, and summation over canonical word classes weighted by the
//! number of injective letter assignments.

use std::collections::BTreeMap;

use crate::ensemble::{EntryDistribution, EntryLaw};
use crate::error::{LabError, Result};
use crate::words::{enumerate_closed_classes, Sentence, Word};

pub const DEFAULT_MOMENT_CAP: usize = 16;
/// Largest number of index tuples an exact oracle will enumerate.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

/// Exact entry moments `E[x^p]`, `p = 0..=cap`, for off-diagonal and diagonal entries.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    offdiag: Vec<f64>,
    diag: Vec<f64>,
}

impl MomentTable {
    pub fn new(offdiag: Vec<f64>, diag: Vec<f64>) -> Result<Self> {
        if offdiag.len() != diag.len() || offdiag.len() < 3 {
            return Err(LabError::Input(
                "moment tables need equal lengths and at least p = 0, 1, 2".into(),
            ));
        }
        Ok(Self { offdiag, diag })
    }

    pub fn for_distribution(dist: &EntryDistribution) -> Self {
        Self::with_cap(dist, DEFAULT_MOMENT_CAP)
    }

    pub fn with_cap(dist: &EntryDistribution, cap: usize) -> Self {
        let cap = cap.max(2);
        let table = |law: EntryLaw| (0..=cap as u32).map(|p| law.moment(p)).collect();
        Self {
            offdiag: table(dist.offdiag),
            diag: table(dist.diagonal_law()),
        }
    }

    pub fn cap(&self) -> usize {
        self.offdiag.len() - 1
    }

    pub fn offdiag(&self, p: usize) -> Result<f64> {
        self.offdiag.get(p).copied().ok_or_else(|| self.over(p))
    }

    pub fn diag(&self, p: usize) -> Result<f64> {
        self.diag.get(p).copied().ok_or_else(|| self.over(p))
    }

    fn over(&self, p: usize) -> LabError {
        LabError::Capacity(format!(
            "edge multiplicity {p} exceeds moment table cap {}",
            self.cap()
        ))
    }

    fn edge_moment(&self, is_loop: bool, p: usize) -> Result<f64> {
        if is_loop {
            self.diag(p)
        } else {
            self.offdiag(p)
        }
    }

    /// Whether every odd moment vanishes.
    pub fn is_symmetric(&self) -> bool {
        let odd_zero = |t: &[f64]| t.iter().skip(1).step_by(2).all(|&m| m == 0.0);
        odd_zero(&self.offdiag) && odd_zero(&self.diag)
    }
}

fn from_multiplicities(
    table: &MomentTable,
    mults: impl IntoIterator<Item = (bool, usize)>,
) -> Result<f64> {
    let mults: Vec<(bool, usize)> = mults.into_iter().collect();
    // Mean-zero entries: a single traversal kills the product.
    if mults.iter().any(|&(_, m)| m == 1) {
        return Ok(0.0);
    }
    let mut acc = 1.0;
    for (is_loop, m) in mults {
        acc *= table.edge_moment(is_loop, m)?;
    }
    Ok(acc)
}

/// `E[X_w]` for a closed word.
pub fn expected_x_w(w: &Word, table: &MomentTable) -> Result<f64> {
    if !w.is_closed() {
        return Err(LabError::Precondition(format!("({w}) is not closed")));
    }
    from_multiplicities(
        table,
        w.traversals().into_iter().map(|(e, m)| (e.is_loop(), m)),
    )
}

/// `E[prod_i X_{w_i}]` for the words of a sentence.
pub fn expected_sentence(s: &Sentence, table: &MomentTable) -> Result<f64> {
    from_multiplicities(
        table,
        s.traversals().into_iter().map(|(e, m)| (e.is_loop(), m)),
    )
}

/// `E[prod_i (X_{w_i} - E X_{w_i})]`, factorized over groups of words
/// linked by shared edges. A word sharing no edge with the rest of the
/// sentence is independent of it, so its centered factor has mean zero.
pub fn centered_sentence_expectation(s: &Sentence, table: &MomentTable) -> Result<f64> {
    let components = s.edge_components();
    if components.iter().any(|c| c.len() == 1) {
        return Ok(0.0);
    }
    let mut acc = 1.0;
    for comp in components {
        let words: Vec<Word> = comp.iter().map(|&i| s.words[i].clone()).collect();
        acc *= centered_by_expansion(&words, table)?;
        if acc == 0.0 {
            break;
        }
    }
    Ok(acc)
}

/// Multilinear expansion `sum_S E[prod_{S} X] prod_{not S} (-E X)` over all subsets.
pub fn centered_by_expansion(words: &[Word], table: &MomentTable) -> Result<f64> {
    let means = words
        .iter()
        .map(|w| expected_x_w(w, table))
        .collect::<Result<Vec<_>>>()?;
    let r = words.len();
    let mut total = 0.0;
    for mask in 0u32..(1 << r) {
        let mut coeff = 1.0;
        let mut chosen = Vec::new();
        for (i, w) in words.iter().enumerate() {
            if mask & (1 << i) != 0 {
                chosen.push(w.clone());
            } else {
                coeff *= -means[i];
            }
        }
        if coeff == 0.0 {
            continue;
        }
        total += coeff * expected_sentence(&Sentence::new(chosen), table)?;
    }
    Ok(total)
}

fn tuple_count(n: usize, len: usize) -> Result<u64> {
    let count = (n as u64)
        .checked_pow(len as u32)
        .filter(|&c| c <= ENUMERATION_BUDGET);
    count.ok_or_else(|| {
        LabError::Capacity(format!(
            "{n}^{len} index tuples exceed the enumeration budget of {ENUMERATION_BUDGET}"
        ))
    })
}

/// `n^{-k/2}`.
fn normalization(n: usize, k: usize) -> f64 {
    (n as f64).powi(-(k as i32)).sqrt()
}

/// Advances an odometer over `0..n` digits; returns `false` after the last tuple.
fn advance(idx: &mut [usize], n: usize) -> bool {
    for d in idx.iter_mut().rev() {
        *d += 1;
        if *d < n {
            return true;
        }
        *d = 0;
    }
    false
}

/// Edge multiplicities of the closed walk `idx[0] -> idx[1] -> ... -> idx[0]`,
/// computed with a sorted scratch buffer of edge codes.
fn closed_walk_expectation(
    idx: &[usize],
    n: usize,
    codes: &mut Vec<usize>,
    table: &MomentTable,
) -> Result<f64> {
    codes.clear();
    for (s, &a) in idx.iter().enumerate() {
        let b = idx[(s + 1) % idx.len()];
        codes.push(a.min(b) * n + a.max(b));
    }
    codes.sort_unstable();
    let mut acc = 1.0;
    let mut start = 0;
    while start < codes.len() {
        let mut end = start + 1;
        while end < codes.len() && codes[end] == codes[start] {
            end += 1;
        }
        let m = end - start;
        if m == 1 {
            return Ok(0.0);
        }
        let code = codes[start];
        acc *= table.edge_moment(code / n == code % n, m)?;
        start = end;
    }
    Ok(acc)
}

/// Exact `E[Tr W^k]` by enumerating all `n^k` index tuples.
pub fn trace_moment_direct(n: usize, k: usize, table: &MomentTable) -> Result<f64> {
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    if k == 0 {
        return Ok(n as f64);
    }
    tuple_count(n, k)?;
    if k > table.cap() {
        // The constant tuple is a self-loop of multiplicity k.
        return Err(table.over(k));
    }
    let mut idx = vec![0usize; k];
    let mut codes = Vec::with_capacity(k);
    let mut sum = 0.0;
    loop {
        sum += closed_walk_expectation(&idx, n, &mut codes, table)?;
        if !advance(&mut idx, n) {
            break;
        }
    }
    Ok(sum * normalization(n, k))
}

/// `n (n - 1) ... (n - r + 1)`.
pub fn falling_factorial(n: usize, r: usize) -> f64 {
    (0..r)
        .map(|i| n as f64 - i as f64)
        .product::<f64>()
        .max(0.0)
}

/// Exact `E[Tr W^k]` as a sum over canonical closed classes of length `k + 1`.
pub fn trace_moment_by_classes(n: usize, k: usize, table: &MomentTable) -> Result<f64> {
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    if k == 0 {
        return Ok(n as f64);
    }
    let classes = enumerate_closed_classes(k + 1)?;
    let mut sum = 0.0;
    for c in &classes {
        let wt = c.weight();
        if wt > n {
            continue;
        }
        let e = expected_x_w(c, table)?;
        if e != 0.0 {
            sum += falling_factorial(n, wt) * e;
        }
    }
    Ok(sum * normalization(n, k))
}

/// Sentences (one word per power) for a flat index tuple.
fn sentence_of(flat: &[usize], powers: &[usize]) -> Sentence {
    let mut words = Vec::with_capacity(powers.len());
    let mut at = 0;
    for &m in powers {
        let mut letters: Vec<usize> = flat[at..at + m].to_vec();
        letters.push(flat[at]);
        words.push(Word::from_indices(&letters));
        at += m;
    }
    Sentence::new(words)
}

/// Exact `E[prod_i (Tr W^{m_i} - E Tr W^{m_i})]`.
pub fn exact_joint_centered(n: usize, powers: &[usize], table: &MomentTable) -> Result<f64> {
    if powers.contains(&0) {
        return Err(LabError::Input("powers must be positive".into()));
    }
    if n == 0 {
        return Err(LabError::InvalidDimension("n must be at least 1".into()));
    }
    let total: usize = powers.iter().sum();
    if powers.is_empty() {
        return Ok(1.0);
    }
    tuple_count(n, total)?;
    let mut idx = vec![0usize; total];
    let mut sum = 0.0;
    loop {
        sum += centered_sentence_expectation(&sentence_of(&idx, powers), table)?;
        if !advance(&mut idx, n) {
            break;
        }
    }
    Ok(sum * normalization(n, total))
}

/// Split of a centered joint moment by whether the two groups of words share
/// an edge (`shared`) or not (`disjoint`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSplit {
    pub shared: f64,
    pub disjoint: f64,
    /// `disjoint` recomputed as `E[group 1 centered] * E[group 2 centered]`
    /// per sentence pair.
    pub disjoint_factorized: f64,
}

impl JointSplit {
    pub fn total(&self) -> f64 {
        self.shared + self.disjoint
    }
}

/// `E[prod_i (Tr W^{a_i} - E) prod_j (Tr W^{b_j} - E)]` split into sentence
/// pairs with intersecting and with disjoint edge sets.
pub fn exact_joint_split(
    n: usize,
    first: &[usize],
    second: &[usize],
    table: &MomentTable,
) -> Result<JointSplit> {
    let powers: Vec<usize> = first.iter().chain(second).copied().collect();
    if powers.is_empty() || powers.contains(&0) {
        return Err(LabError::Input(
            "powers must be positive and non-empty".into(),
        ));
    }
    let total: usize = powers.iter().sum();
    tuple_count(n, total)?;
    let split_at: usize = first.iter().sum();
    let mut idx = vec![0usize; total];
    let (mut shared, mut disjoint, mut factorized) = (0.0, 0.0, 0.0);
    loop {
        let a1 = sentence_of(&idx[..split_at], first);
        let a2 = sentence_of(&idx[split_at..], second);
        let whole = Sentence::new(a1.words.iter().chain(&a2.words).cloned().collect());
        let value = centered_by_expansion(&whole.words, table)?;
        if a1.edges().is_disjoint(&a2.edges()) {
            disjoint += value;
            factorized +=
                centered_by_expansion(&a1.words, table)? * centered_by_expansion(&a2.words, table)?;
        } else {
            shared += value;
        }
        if !advance(&mut idx, n) {
            break;
        }
    }
    let norm = normalization(n, total);
    Ok(JointSplit {
        shared: shared * norm,
        disjoint: disjoint * norm,
        disjoint_factorized: factorized * norm,
    })
}

/// Oracle method selector for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    Direct,
    Classes,
}

impl OracleMethod {
    pub fn name(self) -> &'static str {
        match self {
            OracleMethod::Direct => "direct",
            OracleMethod::Classes => "classes",
        }
    }

    pub fn evaluate(self, n: usize, k: usize, table: &MomentTable) -> Result<f64> {
        match self {
            OracleMethod::Direct => trace_moment_direct(n, k, table),
            OracleMethod::Classes => trace_moment_by_classes(n, k, table),
        }
    }
}

/// Contribution of each canonical class to `E[Tr W^k]` (before normalization).
pub fn class_contributions(n: usize, k: usize, table: &MomentTable) -> Result<BTreeMap<Word, f64>> {
    let mut out = BTreeMap::new();
    for c in enumerate_closed_classes(k + 1)? {
        let v = falling_factorial(n, c.weight()) * expected_x_w(&c, table)?;
        out.insert(c, v);
    }
    Ok(out)
}
