//! Weight certificates for minimal hereditary families with minimum degree
//! 12 on blocks of size 5.
//!
//! Every member gets unit total weight, shared among its vertices: `1/|F|`
//! except for 3-sets not inside any 4-set, where the split 7/20 + 7/20 +
//! 6/20 follows the pair degrees. The per-vertex totals `u(x)` then sum to
//! `|F| - 1`, and a zero-sum perturbation `ε` built from the 4-sets turns
//! the pointwise bound `u(x) >= 53/10 + ε(x)` into the global floor
//! `|F| >= 53n/10 + 1`.

use std::collections::BTreeMap;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::constructions::build_construction_b;
use crate::error::{Error, Result};
use crate::family::{are_isomorphic, Family};
use crate::mask::{submasks, SubsetMask};
use crate::rat::Rat;

/// The per-vertex target `53/10`.
pub fn target_weight() -> Rat {
    Rat::new(53, 10)
}

/// Pair degree above which a pair is considered high when splitting the
/// weight of a bare 3-set.
const PAIR_DEGREE_THRESHOLD: u64 = 4;

fn validate_weighted_family(family: &Family) -> Result<()> {
    family.require_hereditary()?;
    for member in family.members() {
        if member.size() > 4 {
            return Err(Error::MemberTooLarge {
                member: member.to_string(),
                size: member.size(),
            });
        }
    }
    Ok(())
}

fn bits_of(mask: u32) -> impl Iterator<Item = u32> {
    std::iter::successors((mask != 0).then_some(mask), |&m| {
        let rest = m & (m - 1);
        (rest != 0).then_some(rest)
    })
    .map(|m| m.trailing_zeros() + 1)
}

/// Splits unit weight over each nonempty member: `1/|F|` off the 3-set
/// case; for a bare 3-set the two vertices spanning high-degree pairs get
/// 7/20 and the remaining one 6/20.
///
/// Keys are `(vertex, member bit pattern)`.
pub fn assign_incidence_weights(family: &Family) -> Result<BTreeMap<(u32, u32), Rat>> {
    validate_weighted_family(family)?;
    let four_sets: Vec<u32> = family
        .masks()
        .iter()
        .copied()
        .filter(|m| m.count_ones() == 4)
        .collect();
    let pair_degree = |pair: u32| family.masks().iter().filter(|&&g| g & pair == pair).count() as u64;

    let mut weights = BTreeMap::new();
    for &f in family.masks() {
        let size = f.count_ones();
        if size == 0 {
            continue;
        }
        if size != 3 {
            let share = Rat::new(1, size as i64);
            for x in bits_of(f) {
                weights.insert((x, f), share.clone());
            }
            continue;
        }
        if four_sets.iter().any(|&q| q & f == f) {
            for x in bits_of(f) {
                weights.insert((x, f), Rat::new(1, 3));
            }
            continue;
        }
        let elems: Vec<u32> = bits_of(f).collect();
        let pair_masks: [u32; 3] = [
            f & !(1 << (elems[0] - 1)),
            f & !(1 << (elems[1] - 1)),
            f & !(1 << (elems[2] - 1)),
        ];
        let high: Vec<u32> = pair_masks
            .iter()
            .copied()
            .filter(|&p| pair_degree(p) > PAIR_DEGREE_THRESHOLD)
            .collect();
        match high.len() {
            1 => {
                // Endpoints of the high pair carry 7/20 each.
                for x in bits_of(f) {
                    let w = if high[0] >> (x - 1) & 1 == 1 {
                        Rat::new(7, 20)
                    } else {
                        Rat::new(6, 20)
                    };
                    weights.insert((x, f), w);
                }
            }
            2 => {
                // The vertex shared by both high pairs carries 6/20.
                let common = high[0] & high[1];
                for x in bits_of(f) {
                    let w = if common >> (x - 1) & 1 == 1 {
                        Rat::new(6, 20)
                    } else {
                        Rat::new(7, 20)
                    };
                    weights.insert((x, f), w);
                }
            }
            _ => {
                for x in bits_of(f) {
                    weights.insert((x, f), Rat::new(1, 3));
                }
            }
        }
    }
    Ok(weights)
}

/// Full weight accounting for a family: incidence weights, vertex totals
/// `u`, the zero-sum perturbation `ε`, the mini-weight vertices, and the
/// 4-set bookkeeping behind `ε`.
#[derive(Clone, Debug)]
pub struct WeightCertificate {
    n: u32,
    incidence: BTreeMap<(u32, u32), Rat>,
    u: Vec<Rat>,
    eps: Vec<Rat>,
    mini: Vec<u32>,
    q: Family,
    c_q: BTreeMap<u32, u32>,
}

impl WeightCertificate {
    pub fn universe(&self) -> u32 {
        self.n
    }

    pub fn incidence_weights(&self) -> &BTreeMap<(u32, u32), Rat> {
        &self.incidence
    }

    pub fn omega(&self, x: u32, member: u32) -> Option<&Rat> {
        self.incidence.get(&(x, member))
    }

    /// Vertex total; `x` must lie in `[n]`.
    pub fn u(&self, x: u32) -> &Rat {
        &self.u[(x - 1) as usize]
    }

    /// Perturbation; `x` must lie in `[n]`.
    pub fn eps(&self, x: u32) -> &Rat {
        &self.eps[(x - 1) as usize]
    }

    pub fn u_values(&self) -> &[Rat] {
        &self.u
    }

    pub fn eps_values(&self) -> &[Rat] {
        &self.eps
    }

    pub fn mini_vertices(&self) -> &[u32] {
        &self.mini
    }

    pub fn is_mini(&self, x: u32) -> bool {
        self.mini.binary_search(&x).is_ok()
    }

    /// The 4-element members.
    pub fn four_sets(&self) -> &Family {
        &self.q
    }

    /// Number of mini-weight vertices inside a 4-element member.
    pub fn mini_count(&self, q_mask: u32) -> Option<u32> {
        self.c_q.get(&q_mask).copied()
    }
}

impl Serialize for WeightCertificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            vertex: u32,
            member: Vec<u32>,
            omega: &'a Rat,
        }
        let entries: Vec<Entry> = self
            .incidence
            .iter()
            .map(|(&(x, f), w)| Entry {
                vertex: x,
                member: bits_of(f).collect(),
                omega: w,
            })
            .collect();
        let c_q: Vec<u32> = self
            .q
            .masks()
            .iter()
            .map(|m| self.c_q[m])
            .collect();
        let mut st = serializer.serialize_struct("WeightCertificate", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("eps", &self.eps)?;
        st.serialize_field("mini_weight", &self.mini)?;
        st.serialize_field("four_sets", &self.q.element_lists())?;
        st.serialize_field("mini_counts", &c_q)?;
        st.serialize_field("incidence", &entries)?;
        st.end()
    }
}

/// Builds the full certificate. Requires heredity and member sizes at most
/// 4; the mini-weight profile test and the `ε` bookkeeping need nothing
/// else.
pub fn vertex_weights(family: &Family) -> Result<WeightCertificate> {
    let incidence = assign_incidence_weights(family)?;
    let n = family.universe();
    let mut u = vec![Rat::zero(); n as usize];
    for (&(x, _), w) in &incidence {
        u[(x - 1) as usize] += w;
    }

    let mut mini = Vec::new();
    let mut mini_bits = 0u32;
    for x in 1..=n {
        let profile = family.degree_profile(x)?;
        let f = |i: usize| profile.counts.get(i).copied().unwrap_or(0);
        if f(0) == 1 && f(1) == 4 && f(2) == 5 && f(3) == 2 {
            mini.push(x);
            mini_bits |= 1 << (x - 1);
        }
    }

    let q_masks: Vec<u32> = family
        .masks()
        .iter()
        .copied()
        .filter(|m| m.count_ones() == 4)
        .collect();
    let mut c_q = BTreeMap::new();
    for &q in &q_masks {
        let c = (q & mini_bits).count_ones();
        if c == 4 {
            return Err(Error::PreconditionViolated(format!(
                "4-set {} consists entirely of mini-weight vertices",
                SubsetMask::from_bits(n, q)?
            )));
        }
        c_q.insert(q, c);
    }

    let mut eps = vec![Rat::zero(); n as usize];
    for (&q, &c) in &c_q {
        for x in bits_of(q) {
            let term = if mini_bits >> (x - 1) & 1 == 1 {
                Rat::new(-1, 15)
            } else {
                Rat::new(c as i64, 15 * (4 - c as i64))
            };
            eps[(x - 1) as usize] += term;
        }
    }

    Ok(WeightCertificate {
        n,
        incidence,
        u,
        eps,
        mini,
        q: Family::from_masks(n, q_masks)?,
        c_q,
    })
}

/// Per-vertex verdicts for the four pointwise claims about `u` and `ε`.
#[derive(Clone, Debug, Serialize)]
pub struct KeyLemmaVertex {
    pub vertex: u32,
    pub u: Rat,
    pub eps: Rat,
    pub mini: bool,
    /// `u >= 53/10 + ε`.
    pub lower_bound_ok: bool,
    /// `u < 53/10` exactly for mini-weight vertices.
    pub mini_iff_below: bool,
    /// `u > 53/10` implies strict slack over `53/10 + ε`.
    pub strict_above_ok: bool,
    /// `u = 53/10` implies link profile `(5,6,0)` or `(4,6,1)`.
    pub equality_profile_ok: bool,
    /// Full link, populated only when some item fails.
    pub link: Option<Vec<Vec<u32>>>,
}

impl KeyLemmaVertex {
    pub fn passes(&self) -> bool {
        self.lower_bound_ok && self.mini_iff_below && self.strict_above_ok && self.equality_profile_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyLemmaReport {
    pub certificate: WeightCertificate,
    pub vertices: Vec<KeyLemmaVertex>,
    pub all_pass: bool,
}

/// Checks the four pointwise claims at every vertex of a minimal hereditary
/// family with minimum degree at least 12. A failure here means a bug in
/// the weight computation, not new mathematics, so violating vertices carry
/// their full link for debugging.
pub fn key_lemma_check(family: &Family) -> Result<KeyLemmaReport> {
    family.require_hereditary()?;
    let degrees = family.degrees();
    if let Some((i, &deg)) = degrees.iter().enumerate().find(|(_, &d)| d < 12) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {} has degree {deg} < 12",
            i + 1
        )));
    }
    if !family.is_minimal_hereditary(12)? {
        return Err(Error::PreconditionViolated(
            "family is not minimal: some maximal set can be deleted keeping all degrees >= 12"
                .into(),
        ));
    }
    let certificate = vertex_weights(family)?;
    let target = target_weight();
    let mut vertices = Vec::with_capacity(family.universe() as usize);
    for x in 1..=family.universe() {
        let u = certificate.u(x).clone();
        let eps = certificate.eps(x).clone();
        let mini = certificate.is_mini(x);
        let adjusted = &target + &eps;
        let lower_bound_ok = u >= adjusted;
        let mini_iff_below = (u < target) == mini;
        let strict_above_ok = u <= target || u > adjusted;
        let equality_profile_ok = if u == target {
            let profile = family.degree_profile(x)?;
            let f = |i: usize| profile.counts.get(i).copied().unwrap_or(0);
            (f(1) == 5 && f(2) == 6 && f(3) == 0) || (f(1) == 4 && f(2) == 6 && f(3) == 1)
        } else {
            true
        };
        let mut vertex = KeyLemmaVertex {
            vertex: x,
            u,
            eps,
            mini,
            lower_bound_ok,
            mini_iff_below,
            strict_above_ok,
            equality_profile_ok,
            link: None,
        };
        if !vertex.passes() {
            vertex.link = Some(family.link(x)?.element_lists());
        }
        vertices.push(vertex);
    }
    let all_pass = vertices.iter().all(KeyLemmaVertex::passes);
    Ok(KeyLemmaReport {
        certificate,
        vertices,
        all_pass,
    })
}

/// Structural facts the weights rely on: the rigid link of a mini-weight
/// vertex, the cap of three mini-weight vertices per 4-set, and the rigid
/// link of degree-12 vertices with profile `(4,6,1)`.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    /// Every mini-weight vertex has exactly two 4-sets meeting in a 3-set,
    /// link generated by them, and `u = 53/10 - 2/15`.
    pub mini_structure_ok: bool,
    /// Every 4-set has at most three mini-weight vertices.
    pub four_set_cap_ok: bool,
    /// For minimal families with degrees >= 12: every vertex with profile
    /// `(4,6,1)` has the pinned link `2^Y ∪ {{z}} ∪ {{y,z}}`, its 4-set has
    /// no mini-weight vertices, and `u = 53/10`. `None` when the
    /// hypotheses (minimality, degrees) do not apply to the input.
    pub pinned_links_ok: Option<bool>,
    pub violations: Vec<String>,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.mini_structure_ok && self.four_set_cap_ok && self.pinned_links_ok.unwrap_or(true)
    }
}

pub fn verify_structure(family: &Family) -> Result<StructureReport> {
    let certificate = vertex_weights(family)?;
    let n = family.universe();
    let mut violations = Vec::new();

    let mut mini_structure_ok = true;
    for &x in certificate.mini_vertices() {
        let bit = 1u32 << (x - 1);
        let qs: Vec<u32> = certificate
            .four_sets()
            .masks()
            .iter()
            .copied()
            .filter(|q| q & bit != 0)
            .collect();
        let mut ok = qs.len() == 2;
        if ok {
            ok &= (qs[0] & qs[1]).count_ones() == 3;
            let mut expected: Vec<u32> = submasks(qs[0] & !bit)
                .chain(submasks(qs[1] & !bit))
                .collect();
            expected.sort_unstable();
            expected.dedup();
            ok &= family.link(x)?.masks() == expected.as_slice();
            ok &= certificate.u(x) == &(target_weight() - Rat::new(2, 15));
        }
        if !ok {
            mini_structure_ok = false;
            violations.push(format!("mini-weight vertex {x} lacks the two-4-set link"));
        }
    }

    let mut four_set_cap_ok = true;
    for q in certificate.four_sets().masks() {
        if certificate.mini_count(*q).unwrap_or(0) > 3 {
            four_set_cap_ok = false;
            violations.push(format!(
                "4-set {} exceeds three mini-weight vertices",
                SubsetMask::from_bits(n, *q)?
            ));
        }
    }

    let applicable = family.min_degree() >= 12 && family.is_minimal_hereditary(12)?;
    let pinned_links_ok = if applicable {
        let mut all = true;
        for x in 1..=n {
            let profile = family.degree_profile(x)?;
            let f = |i: usize| profile.counts.get(i).copied().unwrap_or(0);
            if !(f(1) == 4 && f(3) == 1) {
                continue;
            }
            let bit = 1u32 << (x - 1);
            let q = *certificate
                .four_sets()
                .masks()
                .iter()
                .find(|&&q| q & bit != 0)
                .expect("profile has a 4-set");
            let neighborhood = family.neighborhood(x)?.bits();
            let z = neighborhood & !q & !bit;
            let y = q & !bit;
            let mut ok = z.count_ones() == 1;
            if ok {
                let mut expected: Vec<u32> = submasks(y).collect();
                expected.push(z);
                for yi in bits_of(y) {
                    expected.push(z | 1 << (yi - 1));
                }
                expected.sort_unstable();
                ok &= family.link(x)?.masks() == expected.as_slice();
                ok &= certificate.mini_count(q) == Some(0);
                ok &= certificate.u(x) == &target_weight();
            }
            if !ok {
                all = false;
                violations.push(format!("vertex {x} with profile (4,6,1) has an unpinned link"));
            }
        }
        Some(all)
    } else {
        None
    };

    Ok(StructureReport {
        mini_structure_ok,
        four_set_cap_ok,
        pinned_links_ok,
        violations,
    })
}

/// Outcome of testing a family against the size floor `53n/10 + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Theorem31Outcome {
    /// Size is above the floor; the classification says nothing.
    NotApplicable { size: u64 },
    /// Size equals the floor and the family is a relabeling of the
    /// reference: `family.relabel(permutation)` rebuilds it.
    ExtremalIsomorphicToF0 { permutation: Vec<u32> },
    /// The family contradicts the proven floor or the uniqueness of the
    /// extremal family; on valid inputs this indicates an implementation
    /// bug.
    ViolatesBound { reason: String },
}

/// Classifies a hereditary family with all degrees at least 12 against the
/// floor `|F| >= 53n/10 + 1`: anything at the floor must be a relabeled
/// reference family (so `n` is a multiple of 10), anything below is
/// impossible.
pub fn theorem31_classify(family: &Family) -> Result<Theorem31Outcome> {
    family.require_hereditary()?;
    let degrees = family.degrees();
    if let Some((i, &deg)) = degrees.iter().enumerate().find(|(_, &d)| d < 12) {
        return Err(Error::PreconditionViolated(format!(
            "vertex {} has degree {deg} < 12",
            i + 1
        )));
    }
    let n = family.universe();
    let size = family.len() as u64;
    let floor = Rat::new(53, 10) * Rat::from_int(n as i64) + Rat::one();
    if Rat::from_int(size as i64) > floor {
        return Ok(Theorem31Outcome::NotApplicable { size });
    }
    let reduced = family.reduce_to_minimal(12)?;
    if reduced.len() != family.len() {
        return Ok(Theorem31Outcome::ViolatesBound {
            reason: format!(
                "removing removable maximal sets left {} members, below the floor {floor}",
                reduced.len()
            ),
        });
    }
    if Rat::from_int(size as i64) < floor {
        return Ok(Theorem31Outcome::ViolatesBound {
            reason: format!("size {size} is below the floor {floor}"),
        });
    }
    if n % 10 != 0 {
        return Ok(Theorem31Outcome::ViolatesBound {
            reason: format!("size meets the floor exactly but n = {n} is not a multiple of 10"),
        });
    }
    let reference = build_construction_b(n, 5)?;
    match are_isomorphic(family, &reference) {
        Some(permutation) => Ok(Theorem31Outcome::ExtremalIsomorphicToF0 { permutation }),
        None => Ok(Theorem31Outcome::ViolatesBound {
            reason: "size meets the floor but the family is not a relabeled reference".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f0_10_5() -> Family {
        build_construction_b(10, 5).unwrap()
    }

    /// Two 4-sets sharing a 3-set: vertices 1..3 are mini-weight.
    fn mini_fixture() -> Family {
        Family::new(5, &[vec![1, 2, 3, 4], vec![1, 2, 3, 5]])
            .unwrap()
            .downward_closure()
            .unwrap()
    }

    #[test]
    fn incidence_weights_on_reference_family() {
        let f = f0_10_5();
        let weights = assign_incidence_weights(&f).unwrap();

        // Pairs split evenly.
        assert_eq!(weights[&(1, 0b00011)], Rat::new(1, 2));
        // 3-sets inside the 4-set {1,2,3,4} take 1/3.
        assert_eq!(weights[&(1, 0b00111)], Rat::new(1, 3));
        // {1,2,5}: the pair {1,2} has degree 5, the pairs through 5 have
        // degree 4, so 1 and 2 take 7/20 and 5 takes 6/20.
        assert_eq!(weights[&(1, 0b10011)], Rat::new(7, 20));
        assert_eq!(weights[&(2, 0b10011)], Rat::new(7, 20));
        assert_eq!(weights[&(5, 0b10011)], Rat::new(6, 20));

        // Unit row sums and the allowed value set.
        let allowed = [
            Rat::one(),
            Rat::new(1, 2),
            Rat::new(1, 3),
            Rat::new(1, 4),
            Rat::new(6, 20),
            Rat::new(7, 20),
        ];
        for member in f.members() {
            if member.is_empty() {
                continue;
            }
            let row: Rat = member
                .elements()
                .iter()
                .map(|&x| weights[&(x, member.bits())].clone())
                .sum();
            assert_eq!(row, Rat::one(), "row sum of {member}");
        }
        assert!(weights.values().all(|w| allowed.contains(w)));
    }

    #[test]
    fn incidence_weights_reject_bad_inputs() {
        assert!(matches!(
            assign_incidence_weights(&Family::power_set(5).unwrap()),
            Err(Error::MemberTooLarge { size: 5, .. })
        ));
        let not_hereditary = Family::new(4, &[vec![1, 2]]).unwrap();
        assert!(matches!(
            assign_incidence_weights(&not_hereditary),
            Err(Error::NotHereditary { .. })
        ));
    }

    #[test]
    fn certificate_on_reference_families() {
        for n in [10u32, 20] {
            let f = build_construction_b(n, 5).unwrap();
            let cert = vertex_weights(&f).unwrap();
            for x in 1..=n {
                assert_eq!(cert.u(x), &Rat::new(53, 10), "u({x}) on n = {n}");
                assert_eq!(cert.eps(x), &Rat::zero());
            }
            assert!(cert.mini_vertices().is_empty());
            let total: Rat = cert.u_values().iter().sum();
            assert_eq!(total, Rat::from_int(f.len() as i64 - 1));
        }
    }

    #[test]
    fn certificate_identities_on_mini_fixture() {
        let f = mini_fixture();
        let cert = vertex_weights(&f).unwrap();
        assert_eq!(cert.mini_vertices(), &[1, 2, 3]);
        for x in 1..=3 {
            assert_eq!(cert.u(x), &Rat::new(31, 6));
            assert_eq!(cert.eps(x), &Rat::new(-2, 15));
        }
        // Both 4-sets hold three mini-weight vertices, so the non-mini
        // vertices 4 and 5 absorb 3/15 each.
        assert_eq!(cert.eps(4), &Rat::new(1, 5));
        assert_eq!(cert.eps(5), &Rat::new(1, 5));
        assert_eq!(cert.mini_count(0b01111), Some(3));
        assert_eq!(cert.mini_count(0b10111), Some(3));

        let total_u: Rat = cert.u_values().iter().sum();
        assert_eq!(total_u, Rat::from_int(f.len() as i64 - 1));
        let total_eps: Rat = cert.eps_values().iter().sum();
        assert_eq!(total_eps, Rat::zero());
    }

    #[test]
    fn certificate_identities_on_random_closures() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for round in 0..40 {
            let n = 6 + round % 5;
            let mut sets = Vec::new();
            for _ in 0..5 {
                let mut elems: Vec<u32> = (1..=n).collect();
                elems.shuffle(&mut rng);
                sets.push(elems[..4].to_vec());
            }
            let f = Family::new(n, &sets).unwrap().downward_closure().unwrap();
            let cert = vertex_weights(&f).unwrap();
            let total_u: Rat = cert.u_values().iter().sum();
            assert_eq!(total_u, Rat::from_int(f.len() as i64 - 1), "round {round}");
            let total_eps: Rat = cert.eps_values().iter().sum();
            assert_eq!(total_eps, Rat::zero(), "round {round}");
            for member in f.members() {
                if member.is_empty() {
                    continue;
                }
                let row: Rat = member
                    .elements()
                    .iter()
                    .map(|&x| cert.omega(x, member.bits()).unwrap().clone())
                    .sum();
                assert_eq!(row, Rat::one());
            }
        }
    }

    #[test]
    fn key_lemma_passes_on_reference_families() {
        for n in [10u32, 20] {
            let report = key_lemma_check(&build_construction_b(n, 5).unwrap()).unwrap();
            assert!(report.all_pass, "n = {n}");
            assert!(report.vertices.iter().all(|v| v.link.is_none()));
            // All reference vertices sit exactly at the target.
            assert!(report
                .vertices
                .iter()
                .all(|v| v.u == Rat::new(53, 10) && v.eps == Rat::zero()));
        }
    }

    #[test]
    fn key_lemma_rejects_precondition_violations() {
        // Degrees 16 but not minimal.
        assert!(matches!(
            key_lemma_check(&Family::power_set(5).unwrap()),
            Err(Error::PreconditionViolated(_))
        ));
        // Minimal impossible at low degree.
        assert!(matches!(
            key_lemma_check(&mini_fixture()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn structure_report_on_reference_and_fixture() {
        let report = verify_structure(&f0_10_5()).unwrap();
        assert!(report.mini_structure_ok);
        assert!(report.four_set_cap_ok);
        // Vertices 1..4 and 6..9 carry profile (4,6,1); their links are
        // pinned.
        assert_eq!(report.pinned_links_ok, Some(true));
        assert!(report.violations.is_empty());

        let report = verify_structure(&mini_fixture()).unwrap();
        assert!(report.mini_structure_ok);
        assert!(report.four_set_cap_ok);
        // Not minimal at threshold 12, so the pinned-link check is vacuous.
        assert_eq!(report.pinned_links_ok, None);
    }

    #[test]
    fn classification_of_reference_and_relabelings() {
        let f = f0_10_5();
        match theorem31_classify(&f).unwrap() {
            Theorem31Outcome::ExtremalIsomorphicToF0 { permutation } => {
                assert_eq!(f.relabel(&permutation).unwrap(), f0_10_5());
            }
            other => panic!("unexpected outcome {other:?}"),
        }

        let perm: Vec<u32> = vec![4, 9, 2, 7, 1, 10, 3, 8, 5, 6];
        let relabeled = f.relabel(&perm).unwrap();
        match theorem31_classify(&relabeled).unwrap() {
            Theorem31Outcome::ExtremalIsomorphicToF0 { permutation } => {
                assert_eq!(relabeled.relabel(&permutation).unwrap(), f0_10_5());
            }
            other => panic!("unexpected outcome {other:?}"),
        }

        match theorem31_classify(&build_construction_b(20, 5).unwrap()).unwrap() {
            Theorem31Outcome::ExtremalIsomorphicToF0 { .. } => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn classification_of_oversized_family() {
        // Two disjoint full cubes, shared empty set: 63 members, all
        // degrees 16, above the floor 54.
        let mut sets = Family::power_set(5).unwrap().element_lists();
        for mask in Family::power_set(5).unwrap().masks() {
            let shifted: Vec<u32> = bits_of(*mask).map(|x| x + 5).collect();
            sets.push(shifted);
        }
        let f = Family::new(10, &sets).unwrap();
        assert_eq!(f.len(), 63);
        assert_eq!(f.min_degree(), 16);
        assert_eq!(
            theorem31_classify(&f).unwrap(),
            Theorem31Outcome::NotApplicable { size: 63 }
        );

        let low = Family::power_set(4).unwrap();
        assert!(theorem31_classify(&low).is_err());
    }
}
