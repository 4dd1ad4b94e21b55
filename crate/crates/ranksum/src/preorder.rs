//! Total preorders on index sets: construction, rank vectors, containment,
//! and lazy enumeration.
//!
//! A total preorder is stored as an ordered partition of `{0..n}` into tie
//! classes, listed from lowest rank to highest. `i ≼ j` holds exactly when
//! the class of `i` is at or below the class of `j`. The text form used by
//! files and the CLI is 1-based, e.g. `"[4][3][1,2]"`.

use std::fmt;
use std::hash::{Hash, Hasher};

use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::rational;

/// Default bound on the index-set size for full enumeration of preorders.
/// The 545,835 preorders on 8 elements enumerate in well under a second;
/// anything larger must be requested explicitly.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Hard width limit of the bitmask-based enumerator.
const MASK_WIDTH: usize = 64;

/// An ordered partition of `{0..n}` into non-empty tie classes, lowest rank
/// first. Within a class, member indices are kept in ascending order, so
/// equality of class sequences is structural equality of the relation.
#[derive(Debug, Clone, Eq)]
pub struct TotalPreorder {
    classes: Vec<Vec<usize>>,
    class_index: Vec<usize>,
}

impl PartialEq for TotalPreorder {
    fn eq(&self, other: &Self) -> bool {
        self.class_index == other.class_index
    }
}

impl Hash for TotalPreorder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.class_index.hash(state);
    }
}

impl TotalPreorder {
    /// Builds a preorder from 0-based classes, lowest rank first. The classes
    /// must partition `{0..n}`; members may be given in any order.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "preorder needs at least one index".into(),
            ));
        }
        let mut class_index = vec![usize::MAX; n];
        let mut canonical = Vec::with_capacity(classes.len());
        for (pos, mut class) in classes.into_iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidInput(format!("class {pos} is empty")));
            }
            class.sort_unstable();
            for &member in &class {
                if member >= n {
                    return Err(Error::InvalidInput(format!(
                        "index {member} out of range for n={n}"
                    )));
                }
                if class_index[member] != usize::MAX {
                    return Err(Error::InvalidInput(format!("index {member} appears twice")));
                }
                class_index[member] = pos;
            }
            canonical.push(class);
        }
        if let Some(missing) = class_index.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidInput(format!(
                "index {missing} is not covered"
            )));
        }
        Ok(TotalPreorder {
            classes: canonical,
            class_index,
        })
    }

    /// All `n` indices tied in one class.
    pub fn single_class(n: usize) -> Result<Self> {
        Self::from_classes(n, vec![(0..n).collect()])
    }

    /// The preorder induced by a value vector: `i ≼ j` iff `v[i] <= v[j]`,
    /// with exactly equal values sharing a class.
    pub fn induced_by(values: &[BigRational]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "cannot induce a preorder from an empty vector".into(),
            ));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].cmp(&values[b]).then(a.cmp(&b)));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &idx in &order {
            match classes.last_mut() {
                Some(last) if values[last[0]] == values[idx] => last.push(idx),
                _ => classes.push(vec![idx]),
            }
        }
        Self::from_classes(values.len(), classes)
    }

    /// Float entry point for [`TotalPreorder::induced_by`]; values are first
    /// converted to rationals losslessly so ties keep exact semantics.
    pub fn induced_by_f64(values: &[f64]) -> Result<Self> {
        let exact: Vec<BigRational> = values
            .iter()
            .map(|&v| rational::from_f64(v))
            .collect::<Result<_>>()?;
        Self::induced_by(&exact)
    }

    pub fn n(&self) -> usize {
        self.class_index.len()
    }

    /// Tie classes from lowest rank to highest; members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Position of the class containing `index` (0 = lowest rank).
    pub fn class_of(&self, index: usize) -> usize {
        self.class_index[index]
    }

    /// `i ≼ j`
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.class_index[i] <= self.class_index[j]
    }

    /// `i ≺ j`
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.class_index[i] < self.class_index[j]
    }

    /// `i ∼ j`
    pub fn tied(&self, i: usize, j: usize) -> bool {
        self.class_index[i] == self.class_index[j]
    }

    pub fn is_total_order(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// The net number of elements preceding each element:
    /// `ρ_i = |{j : j ≺ i}| − |{j : j ≻ i}|`. Entries always sum to zero.
    pub fn rank_vector(&self) -> RankVector {
        let n = self.n();
        let mut values = vec![0i64; n];
        let mut below = 0usize;
        for class in &self.classes {
            let above = n - below - class.len();
            for &member in class {
                values[member] = below as i64 - above as i64;
            }
            below += class.len();
        }
        RankVector(values)
    }

    /// True when every relation of `self` also holds in `outer`; strict
    /// comparisons of `outer` are kept and its ties may only be kept or
    /// resolved.
    pub fn is_contained_in(&self, outer: &TotalPreorder) -> Result<bool> {
        if self.n() != outer.n() {
            return Err(Error::InvalidInput(format!(
                "containment over mismatched sizes {} and {}",
                self.n(),
                outer.n()
            )));
        }
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.le(i, j) && !outer.le(i, j) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The same partition with class order flipped (rank reversal).
    pub fn reversed(&self) -> TotalPreorder {
        let classes: Vec<Vec<usize>> = self.classes.iter().rev().cloned().collect();
        TotalPreorder::from_classes(self.n(), classes).expect("reversal preserves validity")
    }

    /// Restriction to the indices `0..keep`, dropping classes that become
    /// empty. Used by the sequential setting to compare consecutive rankings.
    pub fn restrict_to_first(&self, keep: usize) -> Result<TotalPreorder> {
        if keep == 0 || keep > self.n() {
            return Err(Error::InvalidInput(format!(
                "restriction to {keep} of {} indices",
                self.n()
            )));
        }
        let classes: Vec<Vec<usize>> = self
            .classes
            .iter()
            .map(|c| c.iter().copied().filter(|&m| m < keep).collect::<Vec<_>>())
            .filter(|c: &Vec<usize>| !c.is_empty())
            .collect();
        TotalPreorder::from_classes(keep, classes)
    }

    /// Parses the 1-based text form `"[4][3][1,2]"`; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut total = 0usize;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        while pos < bytes.len() {
            if bytes[pos] != b'[' {
                return Err(Error::Parse(format!(
                    "expected '[' at byte {pos} of {text:?}"
                )));
            }
            pos += 1;
            let mut class = Vec::new();
            loop {
                skip_ws(&mut pos);
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(Error::Parse(format!(
                        "expected index at byte {pos} of {text:?}"
                    )));
                }
                let index: usize = text[start..pos]
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad index at byte {start}: {e}")))?;
                if index == 0 {
                    return Err(Error::Parse(format!(
                        "indices are 1-based, found 0 at byte {start}"
                    )));
                }
                class.push(index - 1);
                total += 1;
                skip_ws(&mut pos);
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b']') => {
                        pos += 1;
                        break;
                    }
                    _ => {
                        return Err(Error::Parse(format!(
                            "expected ',' or ']' at byte {pos} of {text:?}"
                        )))
                    }
                }
            }
            classes.push(class);
            skip_ws(&mut pos);
        }
        if classes.is_empty() {
            return Err(Error::Parse("no classes in preorder text".into()));
        }
        Self::from_classes(total, classes)
    }
}

impl fmt::Display for TotalPreorder {
    /// 1-based text form, lowest class first: `"[4][3][1,2]"`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for class in &self.classes {
            write!(f, "[")?;
            for (k, member) in class.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", member + 1)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Net precedence counts of a preorder; sums to zero, entries in
/// `[-(n-1), n-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector(Vec<i64>);

impl RankVector {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Lazily enumerates every total preorder on `n` indices (each ordered set
/// partition exactly once) under the default cap.
pub fn enumerate_preorders(n: usize) -> Result<Preorders> {
    enumerate_preorders_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// As [`enumerate_preorders`] with an explicit cap.
pub fn enumerate_preorders_capped(n: usize, cap: usize) -> Result<Preorders> {
    if n > cap || n > MASK_WIDTH {
        return Err(Error::ResourceLimit {
            requested: n,
            cap: cap.min(MASK_WIDTH),
        });
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot enumerate preorders on zero indices".into(),
        ));
    }
    Ok(Preorders {
        n,
        stack: Vec::new(),
        started: false,
    })
}

/// Depth-first stream over ordered set partitions: each frame picks the
/// lowest remaining class as a non-empty submask of the unplaced elements.
#[derive(Debug, Clone)]
pub struct Preorders {
    n: usize,
    stack: Vec<Frame>,
    started: bool,
}

#[derive(Debug, Clone)]
struct Frame {
    remaining_before: u64,
    chosen: u64,
}

impl Preorders {
    fn emit(&self) -> TotalPreorder {
        let mut classes = Vec::with_capacity(self.stack.len());
        let mut class_index = vec![0usize; self.n];
        for (pos, frame) in self.stack.iter().enumerate() {
            let mut class = Vec::new();
            let mut bits = frame.chosen;
            while bits != 0 {
                let member = bits.trailing_zeros() as usize;
                class.push(member);
                class_index[member] = pos;
                bits &= bits - 1;
            }
            classes.push(class);
        }
        TotalPreorder {
            classes,
            class_index,
        }
    }
}

impl Iterator for Preorders {
    type Item = TotalPreorder;

    fn next(&mut self) -> Option<TotalPreorder> {
        if !self.started {
            self.started = true;
            let full = if self.n == MASK_WIDTH {
                u64::MAX
            } else {
                (1u64 << self.n) - 1
            };
            self.stack.push(Frame {
                remaining_before: full,
                chosen: full,
            });
            return Some(self.emit());
        }
        loop {
            let top = self.stack.last_mut()?;
            let next_sub = top.chosen.wrapping_sub(1) & top.remaining_before;
            if next_sub == 0 {
                self.stack.pop();
                continue;
            }
            top.chosen = next_sub;
            let mut remaining = top.remaining_before & !next_sub;
            while remaining != 0 {
                self.stack.push(Frame {
                    remaining_before: remaining,
                    chosen: remaining,
                });
                remaining = 0;
            }
            return Some(self.emit());
        }
    }
}

/// Stream of every preorder contained in `outer` under the default cap:
/// `outer`'s strict comparisons are fixed and each tie class is replaced by
/// an arbitrary ordered partition of its members.
pub fn contained_set(outer: &TotalPreorder) -> Result<ContainedSet> {
    contained_set_capped(outer, DEFAULT_ENUMERATION_CAP)
}

/// As [`contained_set`] with an explicit cap on the largest class expansion.
pub fn contained_set_capped(outer: &TotalPreorder, cap: usize) -> Result<ContainedSet> {
    let mut cursors = Vec::with_capacity(outer.class_count());
    let mut current = Vec::with_capacity(outer.class_count());
    for class in outer.classes() {
        let mut stream = enumerate_preorders_capped(class.len(), cap)?;
        let first = stream
            .next()
            .expect("non-empty class has at least one partition");
        current.push(map_partition(&first, class));
        cursors.push(stream);
    }
    Ok(ContainedSet {
        outer_classes: outer.classes().to_vec(),
        n: outer.n(),
        cursors,
        current,
        done: false,
    })
}

/// Mixed-radix product over per-class ordered partitions; constant memory,
/// restartable by constructing afresh.
#[derive(Debug, Clone)]
pub struct ContainedSet {
    outer_classes: Vec<Vec<usize>>,
    n: usize,
    cursors: Vec<Preorders>,
    current: Vec<Vec<Vec<usize>>>,
    done: bool,
}

fn map_partition(partition: &TotalPreorder, members: &[usize]) -> Vec<Vec<usize>> {
    partition
        .classes()
        .iter()
        .map(|class| class.iter().map(|&pos| members[pos]).collect())
        .collect()
}

impl Iterator for ContainedSet {
    type Item = TotalPreorder;

    fn next(&mut self) -> Option<TotalPreorder> {
        if self.done {
            return None;
        }
        let mut classes = Vec::new();
        for refinement in &self.current {
            classes.extend(refinement.iter().cloned());
        }
        let mut class_index = vec![0usize; self.n];
        for (pos, class) in classes.iter().enumerate() {
            for &member in class {
                class_index[member] = pos;
            }
        }
        let result = TotalPreorder {
            classes,
            class_index,
        };

        let mut slot = self.cursors.len();
        loop {
            if slot == 0 {
                self.done = true;
                break;
            }
            slot -= 1;
            if let Some(partition) = self.cursors[slot].next() {
                self.current[slot] = map_partition(&partition, &self.outer_classes[slot]);
                break;
            }
            let size = self.outer_classes[slot].len();
            let mut fresh = enumerate_preorders_capped(size, size).expect("size within cap");
            let first = fresh.next().expect("non-empty stream");
            self.current[slot] = map_partition(&first, &self.outer_classes[slot]);
            self.cursors[slot] = fresh;
        }
        Some(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn preorder(text: &str) -> TotalPreorder {
        TotalPreorder::parse(text).unwrap()
    }

    /// Ordered Bell numbers by the recurrence a(n) = Σ C(n,k) a(n-k); kept
    /// independent of the enumerator it checks.
    fn ordered_bell(n: usize) -> u64 {
        let mut binom = vec![vec![0u64; n + 1]; n + 1];
        for i in 0..=n {
            binom[i][0] = 1;
            for j in 1..=i {
                binom[i][j] = binom[i - 1][j - 1] + if j < i { binom[i - 1][j] } else { 0 };
            }
        }
        let mut a = vec![0u64; n + 1];
        a[0] = 1;
        for m in 1..=n {
            a[m] = (1..=m).map(|k| binom[m][k] * a[m - k]).sum();
        }
        a[n]
    }

    #[test]
    fn induces_from_rational_vectors() {
        let v = [ratio(1, 2), ratio(1, 2), ratio(7, 16), ratio(1, 16)];
        assert_eq!(
            TotalPreorder::induced_by(&v).unwrap(),
            preorder("[4][3][1,2]")
        );

        let tied = [ratio(5, 1), ratio(5, 1), ratio(5, 1)];
        assert_eq!(
            TotalPreorder::induced_by(&tied).unwrap(),
            preorder("[1,2,3]")
        );

        let alpha = [ratio(1, 8), ratio(1, 8), ratio(7, 48), ratio(1, 48)];
        assert_eq!(
            TotalPreorder::induced_by(&alpha).unwrap(),
            preorder("[4][1,2][3]")
        );

        assert!(TotalPreorder::induced_by(&[]).is_err());
    }

    #[test]
    fn rank_vectors_match_known_values() {
        assert_eq!(
            preorder("[4][3][1,2]").rank_vector().values(),
            &[2, 2, -1, -3]
        );
        assert_eq!(
            preorder("[4][1,2][3]").rank_vector().values(),
            &[0, 0, 3, -3]
        );
        assert_eq!(
            preorder("[1][2][3][4]").rank_vector().values(),
            &[-3, -1, 1, 3]
        );
        assert_eq!(preorder("[1,2,3]").rank_vector().values(), &[0, 0, 0]);
    }

    #[test]
    fn containment_examples() {
        let outer = preorder("[4][3][1,2]");
        assert!(preorder("[4][3][1][2]").is_contained_in(&outer).unwrap());
        assert!(!preorder("[3][4][1,2]").is_contained_in(&outer).unwrap());
        assert!(outer.is_contained_in(&outer).unwrap());
        assert!(preorder("[1][2]")
            .is_contained_in(&preorder("[1,2,3]"))
            .is_err());
    }

    #[test]
    fn containment_is_reflexive_and_transitive_up_to_n4() {
        for n in 1..=4 {
            let all: Vec<TotalPreorder> = enumerate_preorders(n).unwrap().collect();
            for a in &all {
                assert!(a.is_contained_in(a).unwrap());
            }
            for a in &all {
                for b in &all {
                    if !a.is_contained_in(b).unwrap() {
                        continue;
                    }
                    for c in &all {
                        if b.is_contained_in(c).unwrap() {
                            assert!(
                                a.is_contained_in(c).unwrap(),
                                "transitivity failed: {a} ⊆ {b} ⊆ {c}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_counts_match_recurrence() {
        let expected = [1u64, 1, 3, 13, 75, 541, 4683, 47293];
        for (n, &want) in expected.iter().enumerate().skip(1) {
            assert_eq!(ordered_bell(n), want);
            assert_eq!(
                enumerate_preorders(n).unwrap().count() as u64,
                want,
                "n={n}"
            );
        }
    }

    #[test]
    fn enumeration_yields_distinct_valid_preorders() {
        for n in 1..=5 {
            let mut seen = std::collections::HashSet::new();
            for p in enumerate_preorders(n).unwrap() {
                assert_eq!(p.n(), n);
                assert_eq!(p.rank_vector().values().iter().sum::<i64>(), 0);
                assert!(seen.insert(p), "duplicate preorder emitted");
            }
        }
    }

    #[test]
    fn enumeration_cap_is_enforced_and_named() {
        let err = enumerate_preorders(9).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                requested: 9,
                cap: 8
            }
        );
        assert!(enumerate_preorders_capped(9, 9).is_ok());
    }

    #[test]
    fn contained_set_examples() {
        let total = preorder("[1][2]");
        assert_eq!(
            contained_set(&total).unwrap().collect::<Vec<_>>(),
            vec![total.clone()]
        );

        let tie = preorder("[1,2]");
        assert_eq!(contained_set(&tie).unwrap().count(), 3);

        let mixed = preorder("[4][3][1,2]");
        let members: Vec<TotalPreorder> = contained_set(&mixed).unwrap().collect();
        assert_eq!(members.len(), 3);
        for m in &members {
            assert!(m.is_contained_in(&mixed).unwrap());
        }
        assert!(members.contains(&mixed));
        assert!(members.contains(&preorder("[4][3][1][2]")));
        assert!(members.contains(&preorder("[4][3][2][1]")));
    }

    #[test]
    fn contained_set_agrees_with_filtered_enumeration() {
        for n in 1..=4 {
            for outer in enumerate_preorders(n).unwrap() {
                let direct: std::collections::HashSet<TotalPreorder> =
                    contained_set(&outer).unwrap().collect();
                let filtered: std::collections::HashSet<TotalPreorder> = enumerate_preorders(n)
                    .unwrap()
                    .filter(|p| p.is_contained_in(&outer).unwrap())
                    .collect();
                assert_eq!(direct, filtered, "outer={outer}");
            }
        }
    }

    #[test]
    fn rank_vector_is_average_over_contained_total_orders() {
        for n in 1..=5 {
            for p in enumerate_preorders(n).unwrap() {
                let vectors: Vec<RankVector> = contained_set(&p)
                    .unwrap()
                    .filter(|q| q.is_total_order())
                    .map(|q| q.rank_vector())
                    .collect();
                assert!(!vectors.is_empty());
                let target = p.rank_vector();
                for i in 0..n {
                    let sum: i64 = vectors.iter().map(|v| v.values()[i]).sum();
                    assert_eq!(
                        ratio(sum, vectors.len() as i64),
                        ratio(target.values()[i], 1),
                        "averaging failed at {p} index {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn text_form_round_trips() {
        for text in ["[4][3][1,2]", "[1,2,3]", "[2][1]"] {
            let p = preorder(text);
            assert_eq!(p.to_string(), text);
            assert_eq!(TotalPreorder::parse(&p.to_string()).unwrap(), p);
        }
        assert_eq!(preorder(" [ 4 ] [3][ 1 , 2 ]"), preorder("[4][3][1,2]"));
        assert!(TotalPreorder::parse("[1][3]").is_err()); // gap
        assert!(TotalPreorder::parse("[0][1]").is_err()); // 1-based
        assert!(TotalPreorder::parse("").is_err());
        assert!(TotalPreorder::parse("[1,,2]").is_err());
    }

    #[test]
    fn restriction_drops_trailing_indices() {
        let p = preorder("[1][3][4][2]");
        assert_eq!(p.restrict_to_first(2).unwrap(), preorder("[1][2]"));
        assert_eq!(p.restrict_to_first(4).unwrap(), p);
        assert!(p.restrict_to_first(0).is_err());
        assert!(p.restrict_to_first(5).is_err());
    }

    #[test]
    fn reversal_flips_rank_vector() {
        let p = preorder("[4][3][1,2]");
        let r = p.reversed();
        let forward = p.rank_vector();
        let backward = r.rank_vector();
        for i in 0..p.n() {
            assert_eq!(forward.values()[i], -backward.values()[i]);
        }
    }

    proptest! {
        #[test]
        fn induce_is_invariant_under_increasing_maps(
            raw in proptest::collection::vec((-40i64..40, 1i64..12), 1..7),
            scale in 1i64..9,
            shift in -20i64..20,
        ) {
            let values: Vec<BigRational> =
                raw.iter().map(|&(a, b)| ratio(a, b)).collect();
            let affine: Vec<BigRational> =
                values.iter().map(|v| v * ratio(scale, 1) + ratio(shift, 3)).collect();
            let cubed: Vec<BigRational> = values.iter().map(|v| v * v * v).collect();
            let base = TotalPreorder::induced_by(&values).unwrap();
            prop_assert_eq!(&TotalPreorder::induced_by(&affine).unwrap(), &base);
            prop_assert_eq!(&TotalPreorder::induced_by(&cubed).unwrap(), &base);
        }

        #[test]
        fn rank_entries_stay_in_bounds(n in 1usize..6, pick in 0usize..200) {
            let all: Vec<TotalPreorder> = enumerate_preorders(n).unwrap().collect();
            let p = &all[pick % all.len()];
            let rho = p.rank_vector();
            prop_assert_eq!(rho.values().iter().sum::<i64>(), 0);
            for &v in rho.values() {
                prop_assert!((v.unsigned_abs() as usize) < n);
            }
        }
    }
}
