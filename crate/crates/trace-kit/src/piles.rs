//! Weight accounting for general block size `d`: the per-vertex weight
//! `ω(x) = Σ_{x∈F} 1/|F|`, the good/bad vertex split, pile detection with
//! the `J / K / isolated-pile` partition of the universe, and projection of
//! the family onto an isolated pile.
//!
//! Several of the bounds checked here are proved only for `d ≥ 50`, far
//! beyond what fits in a 30-element universe. Those checks run in report
//! mode: the comparison is computed exactly and returned as a flag, never
//! assumed. Flags whose statements are conditional on the weight-deficiency
//! hypothesis `Σ_{x∈P} ω(x) < 2^d − c` are `None` whenever the hypothesis
//! fails on the given pile, which is the usual situation on extremal
//! families.

use serde::Serialize;

use crate::colex::log2_enclosure;
use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::{submasks, SubsetMask};
use crate::rat::Rat;

/// Largest `d` for which a pile projection will enumerate all `2^d` subsets.
const PROJECTION_CAP: u32 = 20;

/// The per-vertex weight rate `𝔅_c`: `(2^d − c)/d` for `c ≤ d−1` and
/// `(2^d − d − 1/2)/d` for `c = d`.
pub fn frak_b(d: u32, c: u32) -> Result<Rat> {
    if d == 0 || d > 60 || c == 0 || c > d {
        return Err(Error::InvalidParams(format!(
            "frak_B needs 1 <= c <= d <= 60, got d = {d}, c = {c}"
        )));
    }
    let pow = Rat::from_int(1i64 << d);
    let num = if c == d {
        pow - Rat::from_int(d as i64) - Rat::new(1, 2)
    } else {
        pow - Rat::from_int(c as i64)
    };
    Ok(num / Rat::from_int(d as i64))
}

/// `ω(x) = Σ_{x∈F∈𝓕} 1/|F|`. Each nonempty member splits one unit of
/// weight equally among its elements, so `Σ_x ω(x) = |𝓕| − 1` whenever
/// `∅ ∈ 𝓕`.
pub fn omega_weight(family: &Family, x: u32) -> Result<Rat> {
    if x == 0 || x > family.universe() {
        return Err(Error::InvalidElement {
            element: x as u64,
            universe: family.universe(),
        });
    }
    let bit = 1u32 << (x - 1);
    let mut sum = Rat::zero();
    for &f in family.masks() {
        if f & bit != 0 {
            sum += &Rat::new(1, f.count_ones() as i64);
        }
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VertexClass {
    /// `|N(x)| ≥ d + 1`.
    Good,
    /// `|N(x)| = d`.
    Bad,
}

/// Classifies every vertex by neighborhood size. A vertex with
/// `|N(x)| < d` is an error: the degree floor `δ ≥ 2^{d−1} − d + 1`
/// guarantees `|N(x)| ≥ d`, so a smaller neighborhood means the family is
/// outside this machinery's range.
pub fn classify_vertices(family: &Family, d: u32) -> Result<Vec<VertexClass>> {
    let n = family.universe();
    let mut classes = Vec::with_capacity(n as usize);
    for x in 1..=n {
        let size = family.neighborhood(x)?.size();
        if size < d {
            return Err(Error::DegreeTooLow { vertex: x, size, d });
        }
        classes.push(if size == d {
            VertexClass::Bad
        } else {
            VertexClass::Good
        });
    }
    Ok(classes)
}

/// A set `P` with `|P| = d`, `P ⊆ N(y)` for every `y ∈ P`, and `N(z) = P`
/// for at least one witness `z ∈ P`.
#[derive(Clone, Debug, Serialize)]
pub struct Pile {
    pub members: SubsetMask,
    /// True when the pile meets no other pile.
    pub isolated: bool,
    /// Number of vertices of this pile lying in no other pile; a witness
    /// `z` with `N(z) = P` can belong only to `P`, so this is at least 1.
    pub theta: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct PileDecomposition {
    pub d: u32,
    pub piles: Vec<Pile>,
    /// Vertices lying in no pile.
    pub j: SubsetMask,
    /// Vertices covered by the intersecting piles.
    pub k: SubsetMask,
}

impl PileDecomposition {
    pub fn isolated_piles(&self) -> impl Iterator<Item = &Pile> {
        self.piles.iter().filter(|p| p.isolated)
    }

    pub fn intersecting_piles(&self) -> impl Iterator<Item = &Pile> {
        self.piles.iter().filter(|p| !p.isolated)
    }

    /// `[n] = J ∪ K ∪ ⋃(isolated piles)` with the three parts disjoint.
    pub fn partition_holds(&self, n: u32) -> bool {
        let full = (1u64 << n) - 1;
        let isolated: u64 = self
            .isolated_piles()
            .map(|p| p.members.bits() as u64)
            .sum();
        let j = self.j.bits() as u64;
        let k = self.k.bits() as u64;
        j & k == 0 && j & isolated == 0 && k & isolated == 0 && j | k | isolated == full
    }
}

/// Detects every pile of the family. A pile's witness `z` has `N(z) = P`
/// with `|P| = d`, making `z` bad, so the neighborhoods of bad vertices are
/// the only candidates; each one is kept iff `P ⊆ N(y)` for all `y ∈ P`.
pub fn find_piles(family: &Family, d: u32) -> Result<PileDecomposition> {
    let classes = classify_vertices(family, d)?;
    let n = family.universe();
    let nbhd: Vec<u32> = (1..=n)
        .map(|x| family.neighborhood(x).map(|m| m.bits()))
        .collect::<Result<_>>()?;

    let mut masks: Vec<u32> = Vec::new();
    for x in 1..=n {
        if classes[(x - 1) as usize] != VertexClass::Bad {
            continue;
        }
        let cand = nbhd[(x - 1) as usize];
        if masks.contains(&cand) {
            continue;
        }
        let covered = (1..=n)
            .filter(|y| cand >> (y - 1) & 1 == 1)
            .all(|y| cand & !nbhd[(y - 1) as usize] == 0);
        if covered {
            masks.push(cand);
        }
    }
    masks.sort_unstable();

    let mut membership = vec![0u32; n as usize];
    for &p in &masks {
        for y in 0..n {
            if p >> y & 1 == 1 {
                membership[y as usize] += 1;
            }
        }
    }

    let mut piles = Vec::with_capacity(masks.len());
    let mut k_bits = 0u32;
    for &p in &masks {
        let isolated = masks.iter().all(|&q| q == p || q & p == 0);
        if !isolated {
            k_bits |= p;
        }
        let theta = (0..n)
            .filter(|&y| p >> y & 1 == 1 && membership[y as usize] == 1)
            .count() as u32;
        piles.push(Pile {
            members: SubsetMask::from_bits(n, p)?,
            isolated,
            theta,
        });
    }

    let full = ((1u64 << n) - 1) as u32;
    let covered = masks.iter().fold(0u32, |acc, &p| acc | p);
    Ok(PileDecomposition {
        d,
        piles,
        j: SubsetMask::from_bits(n, full & !covered)?,
        k: SubsetMask::from_bits(n, k_bits)?,
    })
}

/// One row of the per-vertex weight floor report.
#[derive(Clone, Debug, Serialize)]
pub struct VertexWeightBound {
    pub vertex: u32,
    pub neighborhood_size: u32,
    pub omega: Rat,
    /// `𝔅_c − 1/18`, plus `(|N(x)| − d)/6` when the vertex is good.
    pub bound: Rat,
    /// `omega > bound`, computed exactly. The floor is proved only for
    /// `d ≥ 50`, so this is a report, not a certificate of the general
    /// statement.
    pub holds: bool,
}

/// Compares `ω(x)` against `𝔅_c − 1/18` (bad vertices) or
/// `𝔅_c − 1/18 + (|N(x)|−d)/6` (good vertices) at every vertex.
pub fn lemma43_check(family: &Family, d: u32, c: u32) -> Result<Vec<VertexWeightBound>> {
    let base = frak_b(d, c)? - Rat::new(1, 18);
    let delta = (1u64 << (d - 1)) - c as u64 + 1;
    let min = family.min_degree();
    if min < delta {
        return Err(Error::PreconditionViolated(format!(
            "lemma43_check needs every degree >= 2^(d-1) - c + 1 = {delta}, found {min}"
        )));
    }
    (1..=family.universe())
        .map(|x| {
            let size = family.neighborhood(x)?.size();
            if size < d {
                return Err(Error::DegreeTooLow { vertex: x, size, d });
            }
            let omega = omega_weight(family, x)?;
            let bound = &base + Rat::new((size - d) as i64, 6);
            let holds = omega > bound;
            Ok(VertexWeightBound {
                vertex: x,
                neighborhood_size: size,
                omega,
                bound,
                holds,
            })
        })
        .collect()
}

/// Per-vertex data of a pile projection.
#[derive(Clone, Debug, Serialize)]
pub struct PileVertex {
    pub vertex: u32,
    pub good: bool,
    /// Weight collected from members inside the pile.
    pub omega_in: Rat,
    /// Weight collected from members reaching outside the pile.
    pub omega_out: Rat,
    pub omega: Rat,
    /// `d_𝒢(x)`, the degree within the projection.
    pub projection_degree: u64,
    /// `d_𝒩(x)`, the degree within the missing-set complements.
    pub complement_degree: u64,
}

/// Outcome of every identity and bound checked on an isolated pile.
///
/// `Option` fields are statements conditional on the weight-deficiency
/// hypothesis `Σ_{x∈P} ω(x) < 2^d − c`; they are `None` when the hypothesis
/// fails, since the corresponding claims are then vacuous.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionFlags {
    /// `𝒩` hereditary ⇔ `𝒢` hereditary.
    pub hereditary_equivalence: bool,
    /// `d_𝒢(x) = 2^{d−1} − t + d_𝒩(x)` at every vertex of the pile.
    pub degree_identity: bool,
    /// `ω(x) = ω_in(x) + ω_out(x)` at every vertex of the pile.
    pub weight_split: bool,
    /// `Σ_{x∈P} ω_in(x) = |𝒢| − 1`.
    pub internal_weight_sum: bool,
    /// `Σ_{x∈P} ω(x) < 2^d − c`. Scopes every `Option` flag below.
    pub deficiency_hypothesis: bool,
    /// `t ≥ c`.
    pub t_at_least_c: Option<bool>,
    /// `t ≤ 2c − 2`.
    pub t_at_most_2c_minus_2: bool,
    /// `d_𝒢(x) ≥ 2^{d−1} − 2c + 2` at every vertex of the pile.
    pub projection_degree_floor: bool,
    /// Every bad vertex `x` of the pile has `{x} ∈ 𝒩`. Doubles as the
    /// fourth deficiency bullet.
    pub bad_singletons: Option<bool>,
    /// At most `d/2 − 1` good vertices in the pile.
    pub good_count_cap: Option<bool>,
    /// `ω_out(x) ≥ (δ − d_𝒢(x))/(3 + log₂ c)` at every vertex, with
    /// `δ = 2^{d−1} − c + 1`. Certified against the upper end of a log₂
    /// enclosure, so `true` implies the real inequality.
    pub external_weight_bound: bool,
    /// `|Nᵢ| ≤ f_u` for every missing-set complement, `u` = good count.
    /// `None` also when the pile has no good vertex (`f_u` undefined).
    pub complement_size_bound: Option<bool>,
    /// At most 7 good vertices in the pile.
    pub few_good: Option<bool>,
    /// `t ≤ d + 4`.
    pub t_cap: Option<bool>,
    /// `|Nᵢ| ≤ 3` for every missing-set complement.
    pub complement_size_cap: Option<bool>,
    /// `Σ_{x∈P} ω(x) ≥ 𝔅_c · d`, with equality only in the extremal shape.
    pub pile_weight_floor: bool,
}

/// Projection of a family onto an isolated pile `P`: the trace family
/// `𝒢 = {S ∈ 𝓕 : S ⊆ P}`, the `t` missing subsets `ℳ = 2^P ∖ 𝒢`, their
/// complements `𝒩 = {P ∖ M : M ∈ ℳ}`, and the weight split of every pile
/// vertex, together with all checked facts.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionReport {
    pub pile: SubsetMask,
    pub d: u32,
    pub c: u32,
    /// `𝒢`, the members lying inside the pile.
    pub g: Family,
    /// `t = 2^d − |𝒢|`.
    pub t: u64,
    /// `ℳ`, the subsets of the pile missing from the family.
    pub m: Family,
    /// `𝒩 = {P ∖ M : M ∈ ℳ}`.
    pub n: Family,
    pub vertices: Vec<PileVertex>,
    pub good_count: u32,
    /// `f_u` for `u = good_count`; `None` when the pile has no good vertex.
    pub f_u: Option<u32>,
    /// `Σ_{x∈P} ω(x)`.
    pub pile_weight: Rat,
    /// `𝔅_c · d`.
    pub weight_target: Rat,
    pub flags: ProjectionFlags,
}

/// Projects the family onto the isolated pile `P` and evaluates every
/// identity and bound. The family must be hereditary with minimum degree at
/// least `δ = 2^{d−1} − c + 1`.
pub fn analyze_isolated_pile(
    family: &Family,
    pile: &SubsetMask,
    d: u32,
    c: u32,
) -> Result<ProjectionReport> {
    if d == 0 || c == 0 || c > d {
        return Err(Error::InvalidParams(format!(
            "pile projection needs 1 <= c <= d, got d = {d}, c = {c}"
        )));
    }
    if d > PROJECTION_CAP {
        return Err(Error::UniverseTooLarge {
            op: "analyze_isolated_pile",
            n: d,
            cap: PROJECTION_CAP,
        });
    }
    let n = family.universe();
    if pile.universe() != n {
        return Err(Error::InvalidParams(format!(
            "pile universe {} does not match family universe {n}",
            pile.universe()
        )));
    }
    family.require_hereditary()?;
    let delta = (1u64 << (d - 1)) - c as u64 + 1;
    let min = family.min_degree();
    if min < delta {
        return Err(Error::PreconditionViolated(format!(
            "pile projection needs every degree >= 2^(d-1) - c + 1 = {delta}, found {min}"
        )));
    }

    if pile.size() != d {
        return Err(Error::NotAnIsolatedPile(format!(
            "{pile} has {} elements, a pile must have d = {d}",
            pile.size()
        )));
    }
    let decomposition = find_piles(family, d)?;
    let found = decomposition
        .piles
        .iter()
        .find(|p| p.members.bits() == pile.bits());
    match found {
        None => {
            return Err(Error::NotAnIsolatedPile(format!(
                "{pile} is not a pile of the family"
            )))
        }
        Some(p) if !p.isolated => {
            return Err(Error::NotAnIsolatedPile(format!(
                "{pile} intersects another pile"
            )))
        }
        Some(_) => {}
    }

    let p_bits = pile.bits();
    let g = Family::from_masks(
        n,
        family
            .masks()
            .iter()
            .copied()
            .filter(|&f| f & !p_bits == 0)
            .collect(),
    )?;
    let missing: Vec<u32> = submasks(p_bits)
        .filter(|&s| !family.contains_mask(s))
        .collect();
    let t = missing.len() as u64;
    let m = Family::from_masks(n, missing.clone())?;
    let n_fam = Family::from_masks(n, missing.iter().map(|&s| p_bits & !s).collect())?;

    let classes = classify_vertices(family, d)?;
    let mut vertices = Vec::with_capacity(d as usize);
    let mut good_count = 0u32;
    for x in pile.elements() {
        let bit = 1u32 << (x - 1);
        let mut omega_in = Rat::zero();
        let mut omega_out = Rat::zero();
        for &f in family.masks() {
            if f & bit == 0 {
                continue;
            }
            let share = Rat::new(1, f.count_ones() as i64);
            if f & !p_bits == 0 {
                omega_in += &share;
            } else {
                omega_out += &share;
            }
        }
        let good = classes[(x - 1) as usize] == VertexClass::Good;
        if good {
            good_count += 1;
        }
        vertices.push(PileVertex {
            vertex: x,
            good,
            omega: &omega_in + &omega_out,
            omega_in,
            omega_out,
            projection_degree: g.degree(x)?,
            complement_degree: n_fam.degree(x)?,
        });
    }

    let pile_weight: Rat = vertices.iter().map(|v| v.omega.clone()).sum();
    let weight_target = frak_b(d, c)? * Rat::from_int(d as i64);
    let hypothesis = pile_weight < Rat::from_int((1i64 << d) - c as i64);
    let scoped = |b: bool| hypothesis.then_some(b);

    let f_u_value = if good_count > 0 {
        Some(f_u(good_count as u64)?)
    } else {
        None
    };

    let half = 1i128 << (d - 1);
    let degree_identity = vertices
        .iter()
        .all(|v| v.projection_degree as i128 == half - t as i128 + v.complement_degree as i128);
    let weight_split = vertices
        .iter()
        .map(|v| omega_weight(family, v.vertex).map(|w| w == v.omega))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|ok| ok);
    let internal_sum: Rat = vertices.iter().map(|v| v.omega_in.clone()).sum();
    let projection_degree_floor = vertices
        .iter()
        .all(|v| v.projection_degree as i128 >= half - 2 * c as i128 + 2);

    // Upper end of the true bound (δ − d_𝒢)/(3 + log₂ c) comes from the
    // LOWER end of the log enclosure, so passing it certifies the bound.
    let (log_lo, _) = log2_enclosure(c as u64)?;
    let three_plus_log = Rat::from_int(3) + log_lo;
    let external_weight_bound = vertices.iter().all(|v| {
        let gap = delta as i128 - v.projection_degree as i128;
        gap <= 0 || {
            let bound = Rat::from_int(gap as i64) / &three_plus_log;
            v.omega_out >= bound
        }
    });

    let bad_singletons = scoped(vertices.iter().all(|v| {
        v.good || n_fam.contains_mask(1u32 << (v.vertex - 1))
    }));
    let complement_sizes_at_most = |cap: u32| n_fam.masks().iter().all(|s| s.count_ones() <= cap);

    let flags = ProjectionFlags {
        hereditary_equivalence: g.is_hereditary() == n_fam.is_hereditary(),
        degree_identity,
        weight_split,
        internal_weight_sum: internal_sum == Rat::from_int(g.len() as i64 - 1),
        deficiency_hypothesis: hypothesis,
        t_at_least_c: scoped(t >= c as u64),
        t_at_most_2c_minus_2: t <= 2 * c as u64 - 2,
        projection_degree_floor,
        bad_singletons,
        good_count_cap: scoped(2 * good_count + 2 <= d),
        external_weight_bound,
        complement_size_bound: match f_u_value {
            Some(f) if hypothesis => Some(complement_sizes_at_most(f)),
            _ => None,
        },
        few_good: scoped(good_count <= 7),
        t_cap: scoped(t <= d as u64 + 4),
        complement_size_cap: scoped(complement_sizes_at_most(3)),
        pile_weight_floor: pile_weight >= weight_target,
    };

    Ok(ProjectionReport {
        pile: *pile,
        d,
        c,
        g,
        t,
        m,
        n: n_fam,
        vertices,
        good_count,
        f_u: f_u_value,
        pile_weight,
        weight_target,
        flags,
    })
}

/// The unique integer `f` with `2^f − f ≤ u < 2^{f+1} − (f+1)`.
pub fn f_u(u: u64) -> Result<u32> {
    if u == 0 {
        return Err(Error::InvalidParams("f_u needs u >= 1".into()));
    }
    // 2^f − f is strictly increasing in f, so the largest f whose lower
    // edge fits is the unique solution.
    let mut f = 1u32;
    while (1u64 << (f + 1)) - (f as u64 + 1) <= u {
        f += 1;
    }
    Ok(f)
}
