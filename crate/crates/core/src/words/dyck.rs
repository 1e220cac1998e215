use std::collections::BTreeSet;
use std::fmt;

use super::{classify, Edge, Word, WordClass};
use crate::error::{LabError, Result};

/// Largest semilength `enumerate_dyck` accepts.
pub const DYCK_CAP: usize = 12;

/// A lattice path of `+1`/`-1` steps that never dips below zero and ends at zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath(Vec<i8>);

impl DyckPath {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        let mut height = 0i64;
        for &s in &steps {
            if s != 1 && s != -1 {
                return Err(LabError::Input(format!("Dyck step {s} is not +1 or -1")));
            }
            height += i64::from(s);
            if height < 0 {
                return Err(LabError::Input("Dyck path dips below zero".into()));
            }
        }
        if height != 0 {
            return Err(LabError::Input("Dyck path does not return to zero".into()));
        }
        Ok(DyckPath(steps))
    }

    pub fn steps(&self) -> &[i8] {
        &self.0
    }

    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *s > 0 { "+1" } else { "-1" })?;
        }
        Ok(())
    }
}

/// Step `i` is `+1` when the edge `{s_i, s_{i+1}}` is traversed for the
/// first time and `-1` on its second traversal.
pub fn wigner_to_dyck(w: &Word) -> Result<DyckPath> {
    let class = classify(w);
    if class != WordClass::Wigner {
        return Err(LabError::Classification {
            word: w.to_string(),
            class: class.to_string(),
        });
    }
    let mut seen = BTreeSet::new();
    let steps = w
        .steps()
        .map(|(a, b)| if seen.insert(Edge::new(a, b)) { 1 } else { -1 })
        .collect();
    DyckPath::new(steps)
}

/// Canonical Wigner word of a Dyck path: up-steps open a fresh vertex,
/// down-steps return to the parent.
pub fn dyck_to_wigner(path: &DyckPath) -> Word {
    let mut letters = vec![1u32];
    let mut stack = vec![1u32];
    let mut next = 2u32;
    for &s in path.steps() {
        if s > 0 {
            stack.push(next);
            letters.push(next);
            next += 1;
        } else {
            stack.pop();
            letters.push(*stack.last().expect("valid Dyck path"));
        }
    }
    Word::new(letters).expect("non-empty")
}

/// All Dyck paths of semilength `k`, lexicographic with `-1 < +1`.
pub fn enumerate_dyck(k: usize) -> Result<Vec<DyckPath>> {
    if k > DYCK_CAP {
        return Err(LabError::Capacity(format!(
            "Dyck semilength {k} exceeds cap {DYCK_CAP}"
        )));
    }
    let mut out = Vec::new();
    let mut steps = Vec::with_capacity(2 * k);
    extend(&mut steps, 0, 0, k, &mut out);
    Ok(out)
}

fn extend(steps: &mut Vec<i8>, height: usize, ups: usize, k: usize, out: &mut Vec<DyckPath>) {
    if steps.len() == 2 * k {
        out.push(DyckPath(steps.clone()));
        return;
    }
    if height > 0 {
        steps.push(-1);
        extend(steps, height - 1, ups, k, out);
        steps.pop();
    }
    if ups < k {
        steps.push(1);
        extend(steps, height + 1, ups + 1, k, out);
        steps.pop();
    }
}
