//! Finite discrete dynamical systems: Fix, Per, Stab and Attrac.
//!
//! Grounds the dynamical notions behind the stability machinery on concrete
//! finite self-maps. On a finite system the stable and attractive subsets
//! always coincide (finitely branching preimage trees force an infinite
//! backward chain through any point with arbitrarily deep preimages); the
//! truncated version of the classical counterexample below documents how the
//! infinite phenomenon collapses under truncation.

use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DynSysError {
    #[error("bounds must be at least 1")]
    InvalidBounds,
    #[error("map misses element {0:?}")]
    MapNotTotal(String),
    #[error("map sends {0:?} to unknown element {1:?}")]
    UnknownTarget(String, String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
}

/// A finite set of labeled states with a total self-map.
#[derive(Debug, Clone)]
pub struct FiniteDynSys {
    labels: Vec<String>,
    map: Vec<usize>,
}

impl FiniteDynSys {
    /// Builds a system from labels and label pairs, checking totality and
    /// closure.
    pub fn new(labels: Vec<String>, edges: &HashMap<String, String>) -> Result<Self, DynSysError> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(DynSysError::DuplicateElement(l.clone()));
            }
        }
        let mut map = Vec::with_capacity(labels.len());
        for l in &labels {
            let target = edges
                .get(l)
                .ok_or_else(|| DynSysError::MapNotTotal(l.clone()))?;
            let t = index
                .get(target)
                .ok_or_else(|| DynSysError::UnknownTarget(l.clone(), target.clone()))?;
            map.push(*t);
        }
        Ok(FiniteDynSys { labels, map })
    }

    /// Builds a system on `0..n` from an index function.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Self {
        let map: Vec<usize> = (0..n).map(&f).collect();
        assert!(map.iter().all(|&t| t < n), "map must stay inside 0..n");
        FiniteDynSys {
            labels: (0..n).map(|i| i.to_string()).collect(),
            map,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn image(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().map(|&i| self.map[i]).collect()
    }

    pub fn is_surjective(&self) -> bool {
        let img: BTreeSet<usize> = self.map.iter().copied().collect();
        img.len() == self.len()
    }
}

/// The four canonical subsets of a dynamical system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetReport {
    pub fix: BTreeSet<usize>,
    pub per: BTreeSet<usize>,
    pub stab: BTreeSet<usize>,
    pub attrac: BTreeSet<usize>,
}

impl SubsetReport {
    pub fn inclusions_hold(&self) -> bool {
        self.fix.is_subset(&self.per)
            && self.per.is_subset(&self.stab)
            && self.stab.is_subset(&self.attrac)
    }
}

/// Computes Fix, Per, Stab and Attrac.
///
/// Stab is the greatest fixed point of `B -> B ∩ phi(B)` followed by a
/// shrink to `phi(B) = B` (a no-op on finite sets by cardinality, kept as a
/// guard); Attrac is the intersection of the images `phi^i(A)` for
/// `i <= |A|`, which has stabilized by then.
pub fn analyze(sys: &FiniteDynSys) -> SubsetReport {
    let n = sys.len();
    let all: BTreeSet<usize> = (0..n).collect();

    let fix: BTreeSet<usize> = (0..n).filter(|&i| sys.apply(i) == i).collect();

    let mut per = BTreeSet::new();
    for i in 0..n {
        let mut cur = i;
        for _ in 0..n {
            cur = sys.apply(cur);
            if cur == i {
                per.insert(i);
                break;
            }
        }
    }

    let mut stab = all.clone();
    loop {
        let refined: BTreeSet<usize> = stab.intersection(&sys.image(&stab)).copied().collect();
        if refined == stab {
            break;
        }
        stab = refined;
    }
    while sys.image(&stab) != stab {
        stab = sys.image(&stab);
    }

    let mut attrac = all;
    let mut cur: BTreeSet<usize> = (0..n).collect();
    for _ in 0..n {
        cur = sys.image(&cur);
        attrac = attrac.intersection(&cur).copied().collect();
    }

    SubsetReport {
        fix,
        per,
        stab,
        attrac,
    }
}

/// Instance-level check of the classical facts about Stab and Attrac.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GodelleReport {
    pub inclusions_hold: bool,
    pub stab_invariant: bool,
    pub surjective: bool,
    pub stab_equals_attrac: bool,
    pub report: SubsetReport,
}

impl GodelleReport {
    /// All facts that must hold on this instance do hold.
    pub fn passes(&self) -> bool {
        self.inclusions_hold && self.stab_invariant && (!self.surjective || self.stab_equals_attrac)
    }
}

pub fn check_godelle(sys: &FiniteDynSys) -> GodelleReport {
    let report = analyze(sys);
    GodelleReport {
        inclusions_hold: report.inclusions_hold(),
        stab_invariant: sys.image(&report.stab) == report.stab,
        surjective: sys.is_surjective(),
        stab_equals_attrac: report.stab == report.attrac,
        report,
    }
}

/// Finite truncation of the classical example separating Stab from Attrac:
/// states `(i, j)` with `-n <= i <= m`, `0 <= j <= max(i-1, 0)`; towers
/// descend, the spine slides left, and the single out-of-range image
/// `phi(-n, 0)` is clamped to `(-n, 0)`.
///
/// The infinite example has empty Stab but nonempty Attrac; truncation
/// destroys that separation, since clamping creates a fixed point and the
/// towers become finitely deep. Here Stab = Attrac = {(-n, 0)}.
pub fn godelle_truncation(n: i64, m: i64) -> Result<FiniteDynSys, DynSysError> {
    if n < 1 || m < 1 {
        return Err(DynSysError::InvalidBounds);
    }
    let label = |i: i64, j: i64| format!("({},{})", i, j);
    let mut labels = Vec::new();
    let mut edges = HashMap::new();
    for i in -n..=m {
        for j in 0..=(i - 1).max(0) {
            labels.push(label(i, j));
            let target = if j > 0 {
                (i, j - 1)
            } else {
                let next = (i - 1).min(0);
                (next.max(-n), 0)
            };
            edges.insert(label(i, j), label(target.0, target.1));
        }
    }
    FiniteDynSys::new(labels, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn identity_map() {
        let sys = FiniteDynSys::from_fn(3, |i| i);
        let r = analyze(&sys);
        let all = set(&[0, 1, 2]);
        assert_eq!(r.fix, all);
        assert_eq!(r.per, all);
        assert_eq!(r.stab, all);
        assert_eq!(r.attrac, all);
    }

    #[test]
    fn collapse_to_zero() {
        // 1 -> 0, 0 -> 0
        let sys = FiniteDynSys::from_fn(2, |_| 0);
        let r = analyze(&sys);
        assert_eq!(r.fix, set(&[0]));
        assert_eq!(r.per, set(&[0]));
        assert_eq!(r.stab, set(&[0]));
        assert_eq!(r.attrac, set(&[0]));
        let g = check_godelle(&sys);
        assert!(!g.surjective);
        assert!(g.passes());
    }

    #[test]
    fn three_cycle() {
        let sys = FiniteDynSys::from_fn(3, |i| (i + 1) % 3);
        let r = analyze(&sys);
        assert!(r.fix.is_empty());
        let all = set(&[0, 1, 2]);
        assert_eq!(r.per, all);
        assert_eq!(r.stab, all);
        assert_eq!(r.attrac, all);
        let g = check_godelle(&sys);
        assert!(g.surjective && g.stab_equals_attrac && g.passes());
    }

    #[test]
    fn truncated_godelle_example() {
        let sys = godelle_truncation(3, 3).unwrap();
        assert_eq!(sys.len(), 10);
        let r = analyze(&sys);
        // independent oracle: intersect phi^i(A) by brute iteration
        let mut cur: BTreeSet<usize> = (0..sys.len()).collect();
        let mut expected = cur.clone();
        for _ in 0..2 * sys.len() {
            cur = sys.image(&cur);
            expected = expected.intersection(&cur).copied().collect();
        }
        assert_eq!(r.attrac, expected);
        // the clamped fixed point is the whole attractor
        let labels: Vec<&str> = r.attrac.iter().map(|&i| sys.labels()[i].as_str()).collect();
        assert_eq!(labels, vec!["(-3,0)"]);
        assert_eq!(r.stab, r.attrac);
        assert!(check_godelle(&sys).passes());
    }

    #[test]
    fn truncated_godelle_small() {
        let sys = godelle_truncation(1, 1).unwrap();
        assert_eq!(sys.len(), 3); // (-1,0), (0,0), (1,0)
        let r = analyze(&sys);
        assert!(r.inclusions_hold());
        assert!(godelle_truncation(0, 3).is_err());
    }

    #[test]
    fn attrac_stable_at_double_iteration() {
        let sys = FiniteDynSys::from_fn(6, |i| i / 2);
        let r = analyze(&sys);
        let mut cur: BTreeSet<usize> = (0..6).collect();
        for _ in 0..12 {
            cur = sys.image(&cur);
        }
        assert_eq!(r.attrac, cur);
    }
}
