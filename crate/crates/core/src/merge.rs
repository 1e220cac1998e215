//! Splicing two closed words that share an edge into one closed word.
//!
//! `w2` is the outer frame: the output opens with `w2`'s prefix up to and
//! including the first step of `w2` whose edge also occurs in `w1`. At that
//! point the whole cycle of `w1` is inserted, entered through the matching
//! occurrence of the shared edge, after which `w2` resumes. When `w1`
//! traverses the shared edge against `w2`'s direction its cycle is walked
//! backwards. Every step of both inputs appears exactly once in the output.

use std::collections::BTreeMap;

use crate::error::{LabError, Result};
use crate::words::{Edge, Word};

/// Location of the splice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SharedEdge {
    /// The edge as oriented by its first traversal in `w2`: `(alpha, beta)`.
    pub alpha: u32,
    pub beta: u32,
    /// Index of the step `alpha -> beta` in `w2`.
    pub pos_in_w2: usize,
    /// Index of the first step of `w1` over the same edge.
    pub pos_in_w1: usize,
    /// `true` if `w1` traverses it as `alpha -> beta`.
    pub same_orientation: bool,
}

impl SharedEdge {
    pub fn edge(&self) -> Edge {
        Edge::new(self.alpha, self.beta)
    }
}

fn require_closed(w: &Word, which: &str) -> Result<()> {
    if w.is_closed() {
        Ok(())
    } else {
        Err(LabError::Precondition(format!(
            "{which} = ({w}) is not closed"
        )))
    }
}

/// First edge of `w2` (scanning left to right) that also occurs in `w1`.
pub fn find_shared_edge(w1: &Word, w2: &Word) -> Result<Option<SharedEdge>> {
    require_closed(w1, "w1")?;
    require_closed(w2, "w2")?;
    let mut first_in_w1: BTreeMap<Edge, usize> = BTreeMap::new();
    for (j, (a, b)) in w1.steps().enumerate() {
        first_in_w1.entry(Edge::new(a, b)).or_insert(j);
    }
    for (i, (alpha, beta)) in w2.steps().enumerate() {
        if let Some(&j) = first_in_w1.get(&Edge::new(alpha, beta)) {
            let l1 = w1.letters();
            return Ok(Some(SharedEdge {
                alpha,
                beta,
                pos_in_w2: i,
                pos_in_w1: j,
                same_orientation: l1[j] == alpha,
            }));
        }
    }
    Ok(None)
}

/// Merged closed word of length `l(w1) + l(w2) - 1`.
pub fn merge_words(w1: &Word, w2: &Word) -> Result<Word> {
    let shared = find_shared_edge(w1, w2)?.ok_or(LabError::NoSharedEdge)?;
    Ok(splice(w1, w2, &shared))
}

fn splice(w1: &Word, w2: &Word, shared: &SharedEdge) -> Word {
    let (a, b) = (w1.letters(), w2.letters());
    let (i, j) = (shared.pos_in_w2, shared.pos_in_w1);
    // w1 is a cycle of `steps1` steps; position `steps1` is identified with 0.
    let steps1 = a.len() - 1;
    let mut out = Vec::with_capacity(a.len() + b.len() - 1);
    out.extend_from_slice(&b[..=i + 1]);
    if shared.same_orientation {
        // Enter at beta = a[j + 1], go forward around the cycle back to it.
        out.extend((1..=steps1).map(|s| a[(j + 1 + s) % steps1]));
    } else {
        // Enter at beta = a[j], go backward around the cycle back to it.
        out.extend((1..=steps1).map(|s| a[(j + steps1 - s) % steps1]));
    }
    out.extend_from_slice(&b[i + 2..]);
    Word::new(out).expect("non-empty")
}

/// Outcome of checking a merge against its defining invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeReport {
    pub closed: bool,
    pub length_ok: bool,
    pub multiset_ok: bool,
    pub support_ok: bool,
    pub frame_ok: bool,
}

impl MergeReport {
    pub fn all_ok(&self) -> bool {
        self.closed && self.length_ok && self.multiset_ok && self.support_ok && self.frame_ok
    }
}

/// Checks `merged` against inputs `w1` (inner) and `w2` (frame).
pub fn check_merge(w1: &Word, w2: &Word, merged: &Word) -> MergeReport {
    let mut expected = w1.traversals();
    for (e, c) in w2.traversals() {
        *expected.entry(e).or_insert(0) += c;
    }
    let mut support = w1.support();
    support.extend(w2.support());
    MergeReport {
        closed: merged.is_closed(),
        length_ok: merged.len() + 1 == w1.len() + w2.len(),
        multiset_ok: merged.traversals() == expected,
        support_ok: merged.support() == support,
        frame_ok: merged.letters().first() == w2.letters().first(),
    }
}
