//! Colexicographic prefixes and the weight function `W`.
//!
//! The first `m` subsets of the positive integers in colex order are exactly
//! the sets whose bit patterns are `0, 1, ..., m - 1`, so the prefix family
//! `R(m)` is hereditary for free and its size distribution is the popcount
//! distribution of `[0, m)`. The weight `W(m) = Σ_{R ∈ R(m)} 1/(|R| + 1)` is
//! the sharp lower bound, over hereditary families of size `m`, for any sum
//! of a nonincreasing function of the member sizes evaluated at `1/(k+1)`.

use num::bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::rat::Rat;

/// Cap on prefix lengths: `2^25` sets.
pub const PREFIX_CAP: u64 = 1 << 25;

fn check_prefix_len(m: u64) -> Result<()> {
    if m > PREFIX_CAP {
        return Err(Error::InvalidParams(format!(
            "prefix length {m} exceeds cap 2^25"
        )));
    }
    Ok(())
}

/// Universe size used for `R(m)`: `ceil(log2(m)) + 1`, at least 1.
fn prefix_universe(m: u64) -> u32 {
    if m <= 1 {
        1
    } else {
        (64 - (m - 1).leading_zeros()) + 1
    }
}

/// The first `m` subsets of the positive integers in colex order, as a
/// family over the universe `[ceil(log2 m) + 1]`.
pub fn colex_prefix(m: u64) -> Result<Family> {
    check_prefix_len(m)?;
    let n = prefix_universe(m);
    Family::from_masks(n, (0..m).map(|v| v as u32).collect())
}

/// `counts[k]` = number of integers in `[0, m)` with exactly `k` set bits.
pub fn popcount_distribution(m: u64) -> Vec<u64> {
    if m == 0 {
        return vec![0];
    }
    let width = (64 - m.leading_zeros()) as usize;
    let mut binom = vec![vec![0u64; width + 1]; width + 1];
    for i in 0..=width {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + if j <= i - 1 { binom[i - 1][j] } else { 0 };
        }
    }
    let mut counts = vec![0u64; width + 1];
    let mut ones = 0usize;
    for j in (0..width).rev() {
        if m >> j & 1 == 1 {
            // Numbers matching m above bit j, with 0 at bit j: the low j bits
            // are free.
            for t in 0..=j {
                counts[ones + t] += binom[j][t];
            }
            ones += 1;
        }
    }
    counts
}

/// `W(m)`: the sum of `1/(|R| + 1)` over the colex prefix `R(m)`. Computed
/// from the size distribution, never by materializing the prefix.
pub fn w(m: u64) -> Result<Rat> {
    check_prefix_len(m)?;
    if m == 0 {
        return Ok(Rat::zero());
    }
    let mut total = Rat::zero();
    for (k, &count) in popcount_distribution(m).iter().enumerate() {
        if count > 0 {
            total += Rat::from_big(BigInt::from(count), BigInt::from(k as u64 + 1));
        }
    }
    Ok(total)
}

/// Result of a single Katona comparison.
#[derive(Clone, Debug, Serialize)]
pub struct KatonaCheck {
    /// `Σ_{F ∈ family} f(|F|)` over the given family.
    pub sum: Rat,
    /// The same sum over the colex prefix of equal size.
    pub prefix_bound: Rat,
    /// `sum >= prefix_bound`.
    pub holds: bool,
}

/// Evaluates `Σ f(|F|)` over a hereditary family against the colex-prefix
/// bound, where `table[k] = f(k)` must be nonincreasing and cover sizes
/// `0..=n`.
pub fn katona_sum(family: &Family, table: &[Rat]) -> Result<KatonaCheck> {
    if table.len() < family.universe() as usize + 1 {
        return Err(Error::InvalidParams(format!(
            "weight table covers sizes up to {}, need {}",
            table.len().saturating_sub(1),
            family.universe()
        )));
    }
    if let Some(i) = table.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::NotMonotone { index: i + 1 });
    }
    if !family.is_hereditary() {
        let witness = family
            .members()
            .find(|m| {
                m.elements()
                    .iter()
                    .any(|&e| !family.contains(&m.without(e)))
            })
            .map(|m| m.to_string())
            .unwrap_or_default();
        return Err(Error::NotHereditary { witness });
    }

    let mut size_counts = vec![0u64; family.universe() as usize + 1];
    for &mask in family.masks() {
        size_counts[mask.count_ones() as usize] += 1;
    }
    let sum: Rat = size_counts
        .iter()
        .zip(table)
        .map(|(&c, f)| Rat::from_int(c as i64) * f.clone())
        .sum();

    let mut prefix_bound = Rat::zero();
    for (k, &count) in popcount_distribution(family.len() as u64)
        .iter()
        .enumerate()
    {
        if count > 0 && family.len() > 0 {
            prefix_bound += Rat::from_int(count as i64) * table[k].clone();
        }
    }
    let holds = sum >= prefix_bound;
    Ok(KatonaCheck {
        sum,
        prefix_bound,
        holds,
    })
}

/// Encloses `log2(c)` in a rational interval of width below `2^-40`
/// (exact for powers of two).
///
/// Squaring `c` fifty times while keeping 400-bit outward-rounded mantissa
/// bounds gives `c^(2^50) ∈ [lo, hi] · 2^e`; reading off bit lengths then
/// brackets `2^50 · log2(c)` between integers.
pub fn log2_enclosure(c: u64) -> Result<(Rat, Rat)> {
    if c == 0 {
        return Err(Error::InvalidParams("log2 of zero".into()));
    }
    if c.is_power_of_two() {
        let exact = Rat::from_int(c.trailing_zeros() as i64);
        return Ok((exact.clone(), exact));
    }
    const STEPS: u32 = 50;
    const MANTISSA_BITS: u64 = 400;
    let mut lo = BigUint::from(c);
    let mut hi = BigUint::from(c);
    let mut e: i64 = 0;
    for _ in 0..STEPS {
        lo = &lo * &lo;
        hi = &hi * &hi;
        e *= 2;
        let bits = hi.bits();
        if bits > MANTISSA_BITS {
            let shift = bits - MANTISSA_BITS;
            lo >>= shift; // floor keeps the lower end a lower bound
            hi = (&hi >> shift) + 1u32; // ceil keeps the upper end an upper bound
            e += shift as i64;
        }
    }
    let denom = BigInt::from(1u128 << STEPS);
    let lo_num = BigInt::from(e + lo.bits() as i64 - 1);
    let hi_num = BigInt::from(e + hi.bits() as i64);
    Ok((
        Rat::from_big(lo_num, denom.clone()),
        Rat::from_big(hi_num, denom),
    ))
}

/// Result of the prefix-weight floor comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma25Check {
    pub w_value: Rat,
    /// Rational upper enclosure of `(2^d - 1)/d - c/(d - log2 c)`.
    pub bound: Rat,
    /// `w_value >= bound`; implies the real inequality.
    pub holds: bool,
}

/// Checks `W(2^(d-1) - c) >= (2^d - 1)/d - c/(d - log2 c)`.
///
/// The right side is irrational unless `c` is a power of two; it is compared
/// through a rational upper enclosure built from the lower end of the
/// `log2 c` enclosure, so `holds = true` certifies the true inequality.
pub fn lemma25_check(d: u32, c: u64) -> Result<Lemma25Check> {
    if !(2..=26).contains(&d) {
        return Err(Error::InvalidParams(format!("d = {d} outside 2..=26")));
    }
    if c == 0 || c > 1u64 << (d - 2) {
        return Err(Error::InvalidParams(format!(
            "c = {c} outside 1..=2^(d-2) for d = {d}"
        )));
    }
    let m = (1u64 << (d - 1)) - c;
    let w_value = w(m)?;
    let (log_lo, _) = log2_enclosure(c)?;
    let lead = Rat::from_big(BigInt::from((1u64 << d) - 1), BigInt::from(d));
    let bound = lead - Rat::from_int(c as i64) / (Rat::from_int(d as i64) - log_lo);
    let holds = w_value >= bound;
    Ok(Lemma25Check {
        w_value,
        bound,
        holds,
    })
}

/// Result of the reciprocal-sum floor with the non-isolated-vertex surplus.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma26Check {
    /// `Σ_{H ∈ family} 1/(|H| + 1)`.
    pub sum: Rat,
    /// `W(2^d - c) + max(0, e - d)/6` where `e` counts non-isolated vertices.
    pub floor: Rat,
    pub non_isolated: u32,
    pub holds: bool,
}

/// For a hereditary family of size at least `2^d - c`, compares the
/// reciprocal-size sum against `W(2^d - c)` plus a surplus of `1/6` per
/// non-isolated vertex beyond `d`.
pub fn lemma26_surplus(family: &Family, d: u32, c: u64) -> Result<Lemma26Check> {
    if d == 0 || d > 25 {
        return Err(Error::InvalidParams(format!("d = {d} outside 1..=25")));
    }
    if c == 0 || c > 1u64 << d {
        return Err(Error::InvalidParams(format!(
            "c = {c} outside 1..=2^d for d = {d}"
        )));
    }
    let needed = (1u64 << d) - c;
    if (family.len() as u64) < needed {
        return Err(Error::PreconditionViolated(format!(
            "family has {} members, need at least 2^{d} - {c} = {needed}",
            family.len()
        )));
    }
    let table: Vec<Rat> = (0..=family.universe() as i64)
        .map(|k| Rat::new(1, k + 1))
        .collect();
    // Reuses the Katona plumbing for the heredity check and the bucketed sum.
    let check = katona_sum(family, &table)?;
    let non_isolated = family
        .degrees()
        .iter()
        .filter(|&&deg| deg > 0)
        .count() as u32;
    let surplus = if non_isolated as u64 > d as u64 {
        Rat::new(non_isolated as i64 - d as i64, 6)
    } else {
        Rat::zero()
    };
    let floor = w(needed)? + surplus;
    let holds = check.sum >= floor;
    Ok(Lemma26Check {
        sum: check.sum,
        floor,
        non_isolated,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;

    /// Oracle for W: materialize the prefix and sum reciprocals directly.
    fn w_by_enumeration(m: u64) -> Rat {
        colex_prefix(m)
            .unwrap()
            .members()
            .map(|r| Rat::new(1, r.size() as i64 + 1))
            .sum()
    }

    #[test]
    fn prefix_families() {
        assert_eq!(colex_prefix(0).unwrap().len(), 0);
        let r4 = colex_prefix(4).unwrap();
        assert_eq!(r4.masks(), &[0b00, 0b01, 0b10, 0b11]);
        assert_eq!(r4.universe(), 3);
        let r5 = colex_prefix(5).unwrap();
        assert!(r5.contains_mask(0b100));
        for m in [1u64, 2, 3, 7, 12, 100, 1000] {
            assert!(colex_prefix(m).unwrap().is_hereditary(), "R({m})");
        }
        assert!(colex_prefix(PREFIX_CAP + 1).is_err());
    }

    #[test]
    fn popcount_distribution_matches_enumeration() {
        for m in [1u64, 2, 5, 12, 64, 100, 1024, 5000] {
            let counts = popcount_distribution(m);
            let mut direct = vec![0u64; counts.len()];
            for v in 0..m {
                direct[v.count_ones() as usize] += 1;
            }
            assert_eq!(counts, direct, "m = {m}");
        }
    }

    #[test]
    fn w_reference_values() {
        assert_eq!(w(0).unwrap(), Rat::zero());
        assert_eq!(w(1).unwrap(), Rat::one());
        assert_eq!(w(12).unwrap(), Rat::new(31, 6));
        assert_eq!(w(12).unwrap(), w_by_enumeration(12));
        for m in [2u64, 3, 17, 255, 1000] {
            assert_eq!(w(m).unwrap(), w_by_enumeration(m), "m = {m}");
        }
    }

    #[test]
    fn w_closed_form_at_powers_of_two() {
        for d in 1..=20u32 {
            let expected = Rat::new((1i64 << d) - 1, d as i64);
            assert_eq!(w(1 << (d - 1)).unwrap(), expected, "d = {d}");
        }
    }

    fn reciprocal_table(n: u32) -> Vec<Rat> {
        (0..=n as i64).map(|k| Rat::new(1, k + 1)).collect()
    }

    #[test]
    fn katona_equality_on_prefixes_and_power_sets() {
        let r = colex_prefix(12).unwrap();
        let check = katona_sum(&r, &reciprocal_table(r.universe())).unwrap();
        assert!(check.holds);
        assert_eq!(check.sum, check.prefix_bound);

        let p = Family::power_set(4).unwrap();
        let check = katona_sum(&p, &reciprocal_table(4)).unwrap();
        assert_eq!(check.sum, Rat::new(31, 5));
        assert_eq!(check.prefix_bound, Rat::new(31, 5));
    }

    #[test]
    fn katona_strict_case() {
        // Two disjoint squares: 7 sets, strictly heavier than R(7).
        let f = Family::new(4, &[vec![1, 2], vec![3, 4]])
            .unwrap()
            .downward_closure()
            .unwrap();
        let check = katona_sum(&f, &reciprocal_table(4)).unwrap();
        assert!(check.holds);
        assert!(check.sum > check.prefix_bound);
    }

    #[test]
    fn katona_rejects_bad_inputs() {
        let p = Family::power_set(3).unwrap();
        let increasing = vec![Rat::zero(), Rat::one(), Rat::one(), Rat::one()];
        assert!(matches!(
            katona_sum(&p, &increasing),
            Err(Error::NotMonotone { index: 1 })
        ));
        let short = reciprocal_table(1);
        assert!(katona_sum(&p, &short).is_err());
        let not_hereditary = Family::new(3, &[vec![1, 2]]).unwrap();
        assert!(matches!(
            katona_sum(&not_hereditary, &reciprocal_table(3)),
            Err(Error::NotHereditary { .. })
        ));
    }

    #[test]
    fn log2_enclosure_brackets() {
        let (lo, hi) = log2_enclosure(4).unwrap();
        assert_eq!(lo, Rat::from_int(2));
        assert_eq!(hi, Rat::from_int(2));

        let (lo, hi) = log2_enclosure(3).unwrap();
        // log2(3) = 1.58496250072...
        assert!(lo < hi);
        assert!(lo > Rat::new(1_584_962, 1_000_000));
        assert!(hi < Rat::new(1_584_963, 1_000_000));
        let width_cap = Rat::from_big(BigInt::from(1), BigInt::from(1u64 << 40));
        assert!(hi - lo < width_cap);

        let (lo, hi) = log2_enclosure(1000).unwrap();
        assert!(lo > Rat::new(9_965_784, 1_000_000));
        assert!(hi < Rat::new(9_965_785, 1_000_000));
        assert!(log2_enclosure(0).is_err());
    }

    #[test]
    fn lemma25_examples() {
        let check = lemma25_check(5, 4).unwrap();
        assert_eq!(check.w_value, Rat::new(31, 6));
        assert_eq!(check.bound, Rat::new(31, 5) - Rat::new(4, 3));
        assert!(check.holds);

        // c = 1 is the equality case: W(2^(d-1) - 1) = (2^d - 1)/d - 1/d.
        for d in 4..=10 {
            let check = lemma25_check(d, 1).unwrap();
            assert_eq!(check.w_value, check.bound, "d = {d}");
            assert!(check.holds);
        }

        assert!(lemma25_check(5, 9).is_err());
        assert!(lemma25_check(1, 1).is_err());
        assert!(lemma25_check(5, 0).is_err());
    }

    #[test]
    fn lemma26_equality_and_surplus() {
        // The prefix itself attains the floor exactly.
        let m = (1u64 << 4) - 3;
        let prefix = colex_prefix(m).unwrap();
        let check = lemma26_surplus(&prefix, 4, 3).unwrap();
        assert_eq!(check.sum, check.floor);
        assert!(check.holds);

        // Full cube: sum = (2^(d+1) - 1)/(d + 1).
        let p = Family::power_set(4).unwrap();
        let check = lemma26_surplus(&p, 4, 1).unwrap();
        assert_eq!(check.sum, Rat::new(31, 5));
        assert_eq!(check.non_isolated, 4);
        assert!(check.holds);

        // Cube plus extra singletons: each extra vertex adds 1/2 to the sum
        // but only 1/6 to the floor.
        let mut sets: Vec<Vec<u32>> = Family::power_set(4).unwrap().element_lists();
        sets.push(vec![5]);
        sets.push(vec![6]);
        let padded = Family::new(6, &sets).unwrap();
        let check = lemma26_surplus(&padded, 4, 1).unwrap();
        assert_eq!(check.non_isolated, 6);
        assert_eq!(check.sum, Rat::new(31, 5) + Rat::one());
        assert_eq!(check.floor, w(15).unwrap() + Rat::new(2, 6));
        assert!(check.holds);

        let tiny = Family::new(3, &[vec![], vec![1]]).unwrap();
        assert!(matches!(
            lemma26_surplus(&tiny, 4, 1),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
