//! Finite families of subsets of `[n]`.
//!
//! A [`Family`] stores its members as raw bit patterns sorted by integer
//! value, which is exactly colexicographic order, so membership is a binary
//! search and family equality is slice equality. All public constructors
//! validate labels and deduplicate, so an existing `Family` value always
//! satisfies the representation invariant.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{submasks, SubsetMask, MAX_UNIVERSE};

/// Cap for operations that materialize on the order of `2^n` sets.
pub const MATERIALIZE_CAP: u32 = 25;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: u32,
    /// Strictly increasing bit patterns; see module docs.
    sets: Vec<u32>,
}

/// Degree profile of a vertex: `counts[k]` is the number of members of the
/// link having size `k`, i.e. the number of members through the vertex having
/// size `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub counts: Vec<u64>,
}

impl DegreeProfile {
    /// Total degree of the vertex.
    pub fn degree(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl Family {
    /// Builds a family from 1-based element lists, deduplicating members.
    pub fn new(n: u32, sets: &[Vec<u32>]) -> Result<Family> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::UnsupportedUniverse(n as u64));
        }
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            masks.push(SubsetMask::new(n, set)?.bits());
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Family { n, sets: masks })
    }

    /// Builds a family from raw bit patterns.
    pub fn from_masks(n: u32, mut masks: Vec<u32>) -> Result<Family> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::UnsupportedUniverse(n as u64));
        }
        let limit = if n < 32 { 1u64 << n } else { 1 << 30 };
        for &m in &masks {
            if (m as u64) >= limit {
                return Err(Error::InvalidElement {
                    element: (32 - m.leading_zeros()) as u64,
                    universe: n,
                });
            }
        }
        masks.sort_unstable();
        masks.dedup();
        Ok(Family { n, sets: masks })
    }

    /// The family with no members at all (distinct from `{∅}`).
    pub fn empty(n: u32) -> Result<Family> {
        Family::from_masks(n, Vec::new())
    }

    /// All `2^n` subsets of `[n]`.
    pub fn power_set(n: u32) -> Result<Family> {
        if n == 0 || n > MAX_UNIVERSE {
            return Err(Error::UnsupportedUniverse(n as u64));
        }
        if n > MATERIALIZE_CAP {
            return Err(Error::UniverseTooLarge {
                op: "power_set",
                n,
                cap: MATERIALIZE_CAP,
            });
        }
        Ok(Family {
            n,
            sets: (0..1u64 << n).map(|m| m as u32).collect(),
        })
    }

    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.sets
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    pub fn contains(&self, set: &SubsetMask) -> bool {
        self.contains_mask(set.bits())
    }

    /// Members in colex order.
    pub fn members(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        let n = self.n;
        self.sets
            .iter()
            .map(move |&bits| SubsetMask::from_bits(n, bits).expect("invariant"))
    }

    /// Member element lists in colex order, for serialization.
    pub fn element_lists(&self) -> Vec<Vec<u32>> {
        self.members().map(|m| m.elements()).collect()
    }

    /// Reinterprets the family over a different universe size. Fails if some
    /// member does not fit in the new universe.
    pub fn with_universe(&self, n: u32) -> Result<Family> {
        Family::from_masks(n, self.sets.clone())
    }

    /// Merges two families over the same universe.
    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.n != other.n {
            return Err(Error::InvalidParams(format!(
                "universe mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        let mut masks = self.sets.clone();
        masks.extend_from_slice(&other.sets);
        Family::from_masks(self.n, masks)
    }

    /// The family with one member removed.
    pub fn without_mask(&self, mask: u32) -> Family {
        let sets = self
            .sets
            .iter()
            .copied()
            .filter(|&m| m != mask)
            .collect();
        Family { n: self.n, sets }
    }

    /// True iff every subset of every member is itself a member.
    ///
    /// Checks only one-element deletions; closure under those implies closure
    /// under arbitrary subsets by induction on the set size.
    pub fn is_hereditary(&self) -> bool {
        self.heredity_witness().is_none()
    }

    /// A member one of whose one-element deletions is missing, if any.
    fn heredity_witness(&self) -> Option<SubsetMask> {
        for &f in &self.sets {
            let mut rest = f;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= !bit;
                if !self.contains_mask(f & !bit) {
                    return Some(SubsetMask::from_bits(self.n, f).expect("invariant"));
                }
            }
        }
        None
    }

    pub(crate) fn require_hereditary(&self) -> Result<()> {
        match self.heredity_witness() {
            None => Ok(()),
            Some(w) => Err(Error::NotHereditary {
                witness: w.to_string(),
            }),
        }
    }

    /// Smallest hereditary family containing this one.
    pub fn downward_closure(&self) -> Result<Family> {
        let mut closed = BTreeSet::new();
        for &f in &self.sets {
            if f.count_ones() > MATERIALIZE_CAP {
                return Err(Error::UniverseTooLarge {
                    op: "downward_closure",
                    n: f.count_ones(),
                    cap: MATERIALIZE_CAP,
                });
            }
            // Sets already seen from an earlier member bring all their
            // subsets with them, so they can be skipped.
            if closed.contains(&f) {
                continue;
            }
            for s in submasks(f) {
                closed.insert(s);
            }
        }
        Ok(Family {
            n: self.n,
            sets: closed.into_iter().collect(),
        })
    }

    /// The link of a vertex: `{F \ {x} : x ∈ F ∈ family}`.
    pub fn link(&self, x: u32) -> Result<Family> {
        if x == 0 || x > self.n {
            return Err(Error::InvalidElement {
                element: x as u64,
                universe: self.n,
            });
        }
        let bit = 1u32 << (x - 1);
        let masks = self
            .sets
            .iter()
            .filter(|&&f| f & bit != 0)
            .map(|&f| f & !bit)
            .collect();
        // Distinct members containing x stay distinct after deleting x.
        Ok(Family { n: self.n, sets: masks })
    }

    /// Number of members containing the vertex.
    pub fn degree(&self, x: u32) -> Result<u64> {
        if x == 0 || x > self.n {
            return Err(Error::InvalidElement {
                element: x as u64,
                universe: self.n,
            });
        }
        let bit = 1u32 << (x - 1);
        Ok(self.sets.iter().filter(|&&f| f & bit != 0).count() as u64)
    }

    /// Number of members containing every element of `a`.
    pub fn set_degree(&self, a: &SubsetMask) -> u64 {
        let bits = a.bits();
        self.sets.iter().filter(|&&f| f & bits == bits).count() as u64
    }

    /// Minimum vertex degree over all of `[n]`, including isolated vertices.
    pub fn min_degree(&self) -> u64 {
        (1..=self.n)
            .map(|x| self.degree(x).expect("in range"))
            .min()
            .unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.n as usize];
        for &f in &self.sets {
            let mut rest = f;
            while rest != 0 {
                let bit = rest.trailing_zeros();
                d[bit as usize] += 1;
                rest &= rest - 1;
            }
        }
        d
    }

    /// Union of all members containing the vertex.
    pub fn neighborhood(&self, x: u32) -> Result<SubsetMask> {
        if x == 0 || x > self.n {
            return Err(Error::InvalidElement {
                element: x as u64,
                universe: self.n,
            });
        }
        let bit = 1u32 << (x - 1);
        let mut acc = 0u32;
        for &f in &self.sets {
            if f & bit != 0 {
                acc |= f;
            }
        }
        SubsetMask::from_bits(self.n, acc)
    }

    /// The trace on `t`: `{F ∩ t : F ∈ family}`, deduplicated, same universe.
    pub fn trace(&self, t: &SubsetMask) -> Family {
        let bits = t.bits();
        let mut masks: Vec<u32> = self.sets.iter().map(|&f| f & bits).collect();
        masks.sort_unstable();
        masks.dedup();
        Family { n: self.n, sets: masks }
    }

    /// Members with no proper superset in the family.
    pub fn maximal_sets(&self) -> Family {
        let mut maximal = Vec::new();
        for (i, &f) in self.sets.iter().enumerate() {
            // A proper superset has a strictly larger bit pattern.
            let dominated = self.sets[i + 1..]
                .iter()
                .any(|&g| g != f && g & f == f);
            if !dominated {
                maximal.push(f);
            }
        }
        Family { n: self.n, sets: maximal }
    }

    /// For a hereditary family: true iff the minimum degree is at least
    /// `threshold` and deleting any single maximal member drops it below.
    pub fn is_minimal_hereditary(&self, threshold: u64) -> Result<bool> {
        self.require_hereditary()?;
        let degrees = self.degrees();
        if degrees.iter().any(|&d| d < threshold) {
            return Ok(false);
        }
        for &m in self.maximal_sets().masks() {
            if min_degree_after_removal(&degrees, m, self.n) >= threshold {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Greedily deletes maximal members (colex-smallest first) while the
    /// minimum degree stays at least `threshold`. The result is minimal.
    pub fn reduce_to_minimal(&self, threshold: u64) -> Result<Family> {
        self.require_hereditary()?;
        let mut current = self.clone();
        let mut degrees = current.degrees();
        if degrees.iter().any(|&d| d < threshold) {
            return Err(Error::PreconditionViolated(format!(
                "minimum degree {} is below threshold {threshold}",
                degrees.iter().min().unwrap_or(&0)
            )));
        }
        loop {
            let maximal = current.maximal_sets();
            let removable = maximal
                .masks()
                .iter()
                .copied()
                .find(|&m| min_degree_after_removal(&degrees, m, current.n) >= threshold);
            match removable {
                None => return Ok(current),
                Some(m) => {
                    current = current.without_mask(m);
                    let mut rest = m;
                    while rest != 0 {
                        degrees[rest.trailing_zeros() as usize] -= 1;
                        rest &= rest - 1;
                    }
                }
            }
        }
    }

    /// Counts the members of the link of `x` by size.
    pub fn degree_profile(&self, x: u32) -> Result<DegreeProfile> {
        let link = self.link(x)?;
        let mut counts = vec![0u64; self.n as usize + 1];
        for &f in link.masks() {
            counts[f.count_ones() as usize] += 1;
        }
        Ok(DegreeProfile { counts })
    }

    /// The dual family `2^[n] \ {complement of F : F ∈ family}`.
    pub fn complement_dual(&self) -> Result<Family> {
        if self.n > MATERIALIZE_CAP {
            return Err(Error::UniverseTooLarge {
                op: "complement_dual",
                n: self.n,
                cap: MATERIALIZE_CAP,
            });
        }
        let full = (1u64 << self.n) as usize;
        let mut excluded = vec![false; full];
        let all = (full - 1) as u32;
        for &f in &self.sets {
            excluded[(all ^ f) as usize] = true;
        }
        let masks = (0..full as u32).filter(|&m| !excluded[m as usize]).collect();
        Ok(Family { n: self.n, sets: masks })
    }

    /// Applies a vertex relabeling. `perm[i - 1]` is the image of vertex `i`
    /// and must be a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Family> {
        if perm.len() != self.n as usize {
            return Err(Error::InvalidParams(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n as usize];
        for &img in perm {
            if img == 0 || img > self.n || seen[img as usize - 1] {
                return Err(Error::InvalidParams(format!(
                    "not a permutation of 1..={}",
                    self.n
                )));
            }
            seen[img as usize - 1] = true;
        }
        let masks = self
            .sets
            .iter()
            .map(|&f| {
                let mut out = 0u32;
                let mut rest = f;
                while rest != 0 {
                    let i = rest.trailing_zeros();
                    out |= 1 << (perm[i as usize] - 1);
                    rest &= rest - 1;
                }
                out
            })
            .collect();
        Family::from_masks(self.n, masks)
    }
}

fn min_degree_after_removal(degrees: &[u64], removed: u32, n: u32) -> u64 {
    (0..n as usize)
        .map(|i| {
            if removed >> i & 1 == 1 {
                degrees[i] - 1
            } else {
                degrees[i]
            }
        })
        .min()
        .unwrap_or(0)
}

/// Searches for a vertex relabeling carrying `a` onto `b`.
///
/// Returns the permutation as 1-based images, or `None` when the families are
/// not isomorphic (including trivially, when the universes differ). The
/// search partitions vertices by iterated degree-profile refinement and then
/// backtracks over class-respecting assignments, checking member images
/// incrementally; any permutation returned has been verified by applying it.
pub fn are_isomorphic(a: &Family, b: &Family) -> Option<Vec<u32>> {
    if a.n != b.n || a.len() != b.len() {
        return None;
    }
    let n = a.n as usize;

    let labels_a = refined_labels(a);
    let labels_b = refined_labels(b);
    let mut hist_a: HashMap<u64, usize> = HashMap::new();
    let mut hist_b: HashMap<u64, usize> = HashMap::new();
    for &l in &labels_a {
        *hist_a.entry(l).or_default() += 1;
    }
    for &l in &labels_b {
        *hist_b.entry(l).or_default() += 1;
    }
    if hist_a != hist_b {
        return None;
    }

    // Most-constrained-first: rarer classes get assigned earlier.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (hist_a[&labels_a[v]], labels_a[v], v));

    let b_mask_set: HashSet<u32> = b.sets.iter().copied().collect();
    let mut members_through: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &f in &a.sets {
        let mut rest = f;
        while rest != 0 {
            members_through[rest.trailing_zeros() as usize].push(f);
            rest &= rest - 1;
        }
    }

    struct State<'s> {
        a: &'s Family,
        b_masks: &'s HashSet<u32>,
        labels_a: &'s [u64],
        labels_b: &'s [u64],
        order: &'s [usize],
        members_through: &'s [Vec<u32>],
        image: Vec<u32>,
        used: Vec<bool>,
        assigned: u32,
    }

    fn extend(st: &mut State, depth: usize) -> bool {
        let n = st.image.len();
        if depth == n {
            return true;
        }
        let v = st.order[depth];
        for w in 0..n {
            if st.used[w] || st.labels_a[v] != st.labels_b[w] {
                continue;
            }
            st.image[v] = w as u32 + 1;
            st.used[w] = true;
            st.assigned |= 1 << v;
            let ok = st.members_through[v]
                .iter()
                .filter(|&&m| m & !st.assigned == 0)
                .all(|&m| {
                    let mut img = 0u32;
                    let mut rest = m;
                    while rest != 0 {
                        img |= 1 << (st.image[rest.trailing_zeros() as usize] - 1);
                        rest &= rest - 1;
                    }
                    st.b_masks.contains(&img)
                });
            if ok && extend(st, depth + 1) {
                return true;
            }
            st.image[v] = 0;
            st.used[w] = false;
            st.assigned &= !(1 << v);
        }
        false
    }

    let mut st = State {
        a,
        b_masks: &b_mask_set,
        labels_a: &labels_a,
        labels_b: &labels_b,
        order: &order,
        members_through: &members_through,
        image: vec![0; n],
        used: vec![false; n],
        assigned: 0,
    };
    if !extend(&mut st, 0) {
        return None;
    }
    let perm = st.image;
    // Soundness gate: only hand back permutations that verifiably work.
    match st.a.relabel(&perm) {
        Ok(mapped) if mapped == *b => Some(perm),
        _ => None,
    }
}

/// Iterated vertex invariants: start from the degree profile plus
/// neighborhood size, then repeatedly hash in the sorted labels of the
/// neighborhood until the partition stabilizes.
fn refined_labels(f: &Family) -> Vec<u64> {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    let n = f.n as usize;
    let neighborhoods: Vec<u32> = (1..=f.n)
        .map(|x| f.neighborhood(x).expect("in range").bits())
        .collect();
    let mut labels: Vec<u64> = (1..=f.n)
        .map(|x| {
            let mut h = DefaultHasher::new();
            f.degree_profile(x).expect("in range").counts.hash(&mut h);
            neighborhoods[x as usize - 1].count_ones().hash(&mut h);
            h.finish()
        })
        .collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let mut neigh: Vec<u64> = (0..n)
                .filter(|&u| neighborhoods[v] >> u & 1 == 1)
                .map(|u| labels[u])
                .collect();
            neigh.sort_unstable();
            let mut h = DefaultHasher::new();
            labels[v].hash(&mut h);
            neigh.hash(&mut h);
            next.push(h.finish());
        }
        if classes_of(&next) == classes_of(&labels) {
            break;
        }
        labels = next;
    }
    labels
}

fn classes_of(labels: &[u64]) -> Vec<usize> {
    let mut sorted: Vec<u64> = labels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    labels
        .iter()
        .map(|l| sorted.binary_search(l).expect("present"))
        .collect()
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Family(n={}, {} sets)", self.n, self.sets.len())
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: u32,
            sets: Vec<Vec<u32>>,
        }
        Repr {
            n: self.n,
            sets: self.element_lists(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: u32,
            sets: Vec<Vec<u32>>,
        }
        let repr = Repr::deserialize(d)?;
        Family::new(repr.n, &repr.sets).map_err(serde::de::Error::custom)
    }
}
