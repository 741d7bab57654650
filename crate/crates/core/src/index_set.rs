//! Sets of grid-cell indices stored as sorted, disjoint, non-adjacent
//! half-open ranges.

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    ranges: Vec<(u64, u64)>,
}

impl IndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn range(lo: u64, hi: u64) -> Self {
        let mut s = Self::new();
        if lo < hi {
            s.ranges.push((lo, hi));
        }
        s
    }

    /// Builds from arbitrary half-open ranges, sorting and merging.
    pub fn from_ranges(mut v: Vec<(u64, u64)>) -> Self {
        v.retain(|r| r.0 < r.1);
        v.sort_unstable();
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(v.len());
        for (a, b) in v {
            match out.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => out.push((a, b)),
            }
        }
        Self { ranges: out }
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(it: I) -> Self {
        Self::from_ranges(it.into_iter().map(|k| (k, k + 1)).collect())
    }

    pub fn ranges(&self) -> &[(u64, u64)] {
        &self.ranges
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn len(&self) -> u64 {
        self.ranges.iter().map(|r| r.1 - r.0).sum()
    }

    pub fn first(&self) -> Option<u64> {
        self.ranges.first().map(|r| r.0)
    }

    pub fn last(&self) -> Option<u64> {
        self.ranges.last().map(|r| r.1 - 1)
    }

    pub fn contains(&self, k: u64) -> bool {
        let i = self.ranges.partition_point(|r| r.1 <= k);
        i < self.ranges.len() && self.ranges[i].0 <= k
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.ranges.iter().flat_map(|&(a, b)| a..b)
    }

    /// Number of members in the inclusive range `[lo, hi]`.
    pub fn count_in(&self, lo: u64, hi: u64) -> u64 {
        if lo > hi {
            return 0;
        }
        let mut i = self.ranges.partition_point(|r| r.1 <= lo);
        let mut n = 0;
        while i < self.ranges.len() && self.ranges[i].0 <= hi {
            let (a, b) = self.ranges[i];
            n += b.min(hi + 1) - a.max(lo);
            i += 1;
        }
        n
    }

    /// Every member `k` replaced by its `r` children `kr .. kr + r`.
    pub fn subdivide(&self, r: u64) -> Self {
        Self {
            ranges: self.ranges.iter().map(|&(a, b)| (a * r, b * r)).collect(),
        }
    }

    /// Children of every member that sit at offset `≥ t` and `< r − t`
    /// within their parent.
    pub fn subdivide_trimmed(&self, r: u64, t: u64) -> Self {
        if t == 0 {
            return self.subdivide(r);
        }
        if 2 * t >= r {
            return Self::new();
        }
        let mut out = Vec::new();
        for &(a, b) in &self.ranges {
            for p in a..b {
                out.push((p * r + t, p * r + r - t));
            }
        }
        Self { ranges: out }
    }

    /// Removes members whose offset inside their ancestor block of size
    /// `block` is `< t` or `≥ block − t`, for every ancestor in `anc`.
    pub fn trim_blocks(&self, anc: &IndexSet, block: u64, t: u64) -> Self {
        if t == 0 {
            return self.clone();
        }
        if 2 * t >= block {
            return Self::new();
        }
        let mut cut = Vec::new();
        for g in anc.iter() {
            cut.push((g * block, g * block + t));
            cut.push(((g + 1) * block - t, (g + 1) * block));
        }
        self.difference(&Self::from_ranges(cut))
    }

    pub fn difference(&self, other: &IndexSet) -> Self {
        let mut out = Vec::with_capacity(self.ranges.len());
        let mut j = 0;
        for &(a, b) in &self.ranges {
            let mut lo = a;
            while j < other.ranges.len() && other.ranges[j].1 <= lo {
                j += 1;
            }
            let mut k = j;
            while lo < b {
                if k >= other.ranges.len() || other.ranges[k].0 >= b {
                    out.push((lo, b));
                    break;
                }
                let (oa, ob) = other.ranges[k];
                if oa > lo {
                    out.push((lo, oa));
                }
                lo = lo.max(ob);
                k += 1;
            }
        }
        Self { ranges: out }
    }

    pub fn intersection(&self, other: &IndexSet) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a, b) = self.ranges[i];
            let (c, d) = other.ranges[j];
            let lo = a.max(c);
            let hi = b.min(d);
            if lo < hi {
                out.push((lo, hi));
            }
            if b < d {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_ranges(out)
    }

    pub fn union(&self, other: &IndexSet) -> Self {
        let mut v = self.ranges.clone();
        v.extend_from_slice(&other.ranges);
        Self::from_ranges(v)
    }

    /// Parents (index `/ r`) of all members.
    pub fn parents(&self, r: u64) -> Self {
        Self::from_ranges(self.ranges.iter().map(|&(a, b)| (a / r, (b - 1) / r + 1)).collect())
    }

    /// Runs `(first_parent, last_parent_exclusive, children_each)` covering
    /// every parent with at least one member, in order.
    pub fn child_count_runs(&self, r: u64) -> Vec<(u64, u64, u64)> {
        let mut runs: Vec<(u64, u64, u64)> = Vec::new();
        let push = |p0: u64, p1: u64, c: u64, runs: &mut Vec<(u64, u64, u64)>| {
            if p0 >= p1 || c == 0 {
                return;
            }
            match runs.last_mut() {
                Some(l) if l.1 == p0 && l.2 == c => l.1 = p1,
                _ => runs.push((p0, p1, c)),
            }
        };
        let mut pending: Option<(u64, u64)> = None; // (parent, count) for a partial parent
        for &(a, b) in &self.ranges {
            let pa = a / r;
            let pb = (b - 1) / r;
            if pa == pb {
                let add = b - a;
                match pending {
                    Some((p, c)) if p == pa => pending = Some((p, c + add)),
                    Some((p, c)) => {
                        push(p, p + 1, c, &mut runs);
                        pending = Some((pa, add));
                    }
                    None => pending = Some((pa, add)),
                }
                continue;
            }
            let head = (pa + 1) * r - a;
            match pending {
                Some((p, c)) if p == pa => push(p, p + 1, c + head, &mut runs),
                Some((p, c)) => {
                    push(p, p + 1, c, &mut runs);
                    push(pa, pa + 1, head, &mut runs);
                }
                None => push(pa, pa + 1, head, &mut runs),
            }
            let tail = b - pb * r;
            if pa + 1 < pb {
                push(pa + 1, pb, r, &mut runs);
            }
            pending = Some((pb, tail));
        }
        if let Some((p, c)) = pending {
            push(p, p + 1, c, &mut runs);
        }
        runs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(v: &[u64]) -> std::collections::BTreeSet<u64> {
        v.iter().copied().collect()
    }

    proptest! {
        #[test]
        fn set_ops_match_btreeset(a in prop::collection::vec(0u64..200, 0..80), b in prop::collection::vec(0u64..200, 0..80)) {
            let (sa, sb) = (IndexSet::from_indices(a.clone()), IndexSet::from_indices(b.clone()));
            let (na, nb) = (naive(&a), naive(&b));
            prop_assert_eq!(sa.difference(&sb).iter().collect::<Vec<_>>(), na.difference(&nb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection(&sb).iter().collect::<Vec<_>>(), na.intersection(&nb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.union(&sb).iter().collect::<Vec<_>>(), na.union(&nb).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.len() as usize, na.len());
            for k in 0..200u64 {
                prop_assert_eq!(sa.contains(k), na.contains(&k));
            }
            prop_assert_eq!(sa.count_in(20, 120) as usize, na.range(20..=120).count());
        }

        #[test]
        fn child_runs_match_counts(a in prop::collection::vec(0u64..300, 0..120), r in 2u64..7) {
            let s = IndexSet::from_indices(a.clone());
            let mut counts = std::collections::BTreeMap::new();
            for k in naive(&a) {
                *counts.entry(k / r).or_insert(0u64) += 1;
            }
            let mut got = std::collections::BTreeMap::new();
            for (p0, p1, c) in s.child_count_runs(r) {
                for p in p0..p1 {
                    prop_assert!(got.insert(p, c).is_none());
                }
            }
            prop_assert_eq!(got, counts);
        }

        #[test]
        fn trimmed_subdivision(a in prop::collection::vec(0u64..50, 0..30), t in 0u64..3) {
            let s = IndexSet::from_indices(a.clone());
            let got: Vec<u64> = s.subdivide_trimmed(6, t).iter().collect();
            let want: Vec<u64> = naive(&a).iter().flat_map(|p| (p * 6 + t)..(p * 6 + 6 - t)).collect();
            prop_assert_eq!(got, want);
            let blocks: Vec<u64> = s.subdivide(6).trim_blocks(&s, 6, t).iter().collect();
            let want2: Vec<u64> = naive(&a).iter().flat_map(|p| (p * 6 + t)..(p * 6 + 6 - t)).collect();
            prop_assert_eq!(blocks, want2);
        }
    }
}
