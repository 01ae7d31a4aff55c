//! The block-partition families, the small dual-side examples, and the
//! extremality predicate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::mask::SubsetMask;
use crate::rat::Rat;

/// A partition of `[n]` into consecutive blocks of equal size `d`:
/// block `i` is `{(i-1)d + 1, ..., id}`. The layout is fixed so that
/// repeated builds are byte-identical; relabelings go through
/// `Family::relabel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    d: u32,
    blocks: Vec<SubsetMask>,
}

impl BlockPartition {
    pub fn canonical(n: u32, d: u32) -> Result<BlockPartition> {
        if d == 0 || n == 0 || n % d != 0 {
            return Err(Error::InvalidParams(format!(
                "cannot split [{n}] into blocks of size {d}"
            )));
        }
        let block_bits = (1u32 << d) - 1;
        let blocks = (0..n / d)
            .map(|i| SubsetMask::from_bits(n, block_bits << (i * d)))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockPartition { d, blocks })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn blocks(&self) -> &[SubsetMask] {
        &self.blocks
    }

    /// The block containing element `x`, if `x` is in the universe.
    pub fn block_of(&self, x: u32) -> Option<&SubsetMask> {
        self.blocks.iter().find(|b| b.contains(x))
    }
}

fn validate_block_params(n: u32, d: u32) -> Result<u32> {
    if d < 5 {
        return Err(Error::InvalidParams(format!("block size d = {d} below 5")));
    }
    if n > 30 {
        return Err(Error::InvalidParams(format!("n = {n} exceeds 30")));
    }
    if n < d || n % d != 0 {
        return Err(Error::InvalidParams(format!(
            "n = {n} is not a positive multiple of d = {d}"
        )));
    }
    Ok(n / d)
}

/// The blocked family with the `c - 1` colex-largest subsets removed from
/// each block: members are the empty set together with every nonempty
/// `F ⊆ U_i` whose local bit pattern is at most `2^d - c`.
///
/// Removing a colex tail removes an up-set, so heredity survives; the size
/// comes out to `(n/d)(2^d - c) + 1` and every degree is at least
/// `2^(d-1) - c + 1`.
pub fn build_construction_a(n: u32, d: u32, c: u32) -> Result<Family> {
    let k = validate_block_params(n, d)?;
    if c == 0 || c > d - 1 {
        return Err(Error::InvalidParams(format!(
            "c = {c} outside 1..=d-1 for d = {d}"
        )));
    }
    let keep = (1u32 << d) - c;
    let mut masks = Vec::with_capacity((k * keep) as usize + 1);
    masks.push(0);
    for i in 0..k {
        let shift = i * d;
        masks.extend((1..=keep).map(|v| v << shift));
    }
    Family::from_masks(n, masks)
}

/// Variant of `build_construction_a` with caller-chosen excluded families,
/// one per block. Arbitrary exclusions can break heredity, so the result
/// carries a measured heredity flag instead of a guarantee.
///
/// Each `exclusions[i]` lists the members of `𝒢ᵢ` as global element sets;
/// all blocks must exclude the same number `c - 1` of nonempty subsets of
/// their own block, with `c ≤ d - 1`.
pub fn build_construction_a_with_exclusions(
    n: u32,
    d: u32,
    exclusions: &[Vec<Vec<u32>>],
) -> Result<(Family, bool)> {
    let k = validate_block_params(n, d)?;
    if exclusions.len() != k as usize {
        return Err(Error::InvalidParams(format!(
            "{} exclusion lists for {k} blocks",
            exclusions.len()
        )));
    }
    let c_minus_1 = exclusions[0].len();
    if c_minus_1 + 1 > (d - 1) as usize {
        return Err(Error::InvalidParams(format!(
            "{c_minus_1} exclusions per block exceeds d - 2 = {}",
            d - 2
        )));
    }
    let partition = BlockPartition::canonical(n, d)?;
    let mut masks = vec![0u32];
    for (i, (block, excluded)) in partition.blocks().iter().zip(exclusions).enumerate() {
        if excluded.len() != c_minus_1 {
            return Err(Error::InvalidParams(format!(
                "block {} excludes {} sets, block 1 excludes {c_minus_1}",
                i + 1,
                excluded.len()
            )));
        }
        let mut excluded_bits = Vec::with_capacity(excluded.len());
        for set in excluded {
            let m = SubsetMask::new(n, set)?;
            if m.is_empty() || !m.is_subset_of(block) {
                return Err(Error::InvalidParams(format!(
                    "excluded set {m} is not a nonempty subset of block {}",
                    i + 1
                )));
            }
            excluded_bits.push(m.bits());
        }
        excluded_bits.sort_unstable();
        excluded_bits.dedup();
        if excluded_bits.len() != c_minus_1 {
            return Err(Error::InvalidParams(format!(
                "duplicate excluded sets in block {}",
                i + 1
            )));
        }
        let shift = i as u32 * d;
        for v in 1..1u32 << d {
            if !excluded_bits.contains(&(v << shift)) {
                masks.push(v << shift);
            }
        }
    }
    let family = Family::from_masks(n, masks)?;
    let hereditary = family.is_hereditary();
    Ok((family, hereditary))
}

/// The degree-regular blocked family: per block all subsets of size at most
/// `d - 2`, plus the block minus its top element, plus the bridging pairs
/// `{di, d(i+1)}` for odd `i`.
///
/// Every vertex ends up with degree exactly `2^(d-1) - d + 1`: the bridging
/// pair compensates the top elements for sitting outside the near-full set
/// of their own block.
pub fn build_construction_b(n: u32, d: u32) -> Result<Family> {
    let k = validate_block_params(n, d)?;
    if k % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "n = {n} must be a multiple of 2d = {}",
            2 * d
        )));
    }
    let mut masks = Vec::new();
    for i in 0..k {
        let shift = i * d;
        for v in 1..1u32 << d {
            if v.count_ones() <= d - 2 {
                masks.push(v << shift);
            }
        }
        // U_i minus its largest element d·(i+1).
        let near_full = ((1u32 << (d - 1)) - 1) << shift;
        masks.push(near_full);
    }
    for i in (0..k).step_by(2) {
        // Pair the top elements of consecutive blocks: {d(i+1), d(i+2)}.
        let top_i = 1u32 << (i * d + d - 1);
        let top_next = 1u32 << ((i + 1) * d + d - 1);
        masks.push(top_i | top_next);
    }
    masks.push(0);
    Family::from_masks(n, masks)
}

/// Measurements against the extremality definition: hereditary, size
/// exactly `ms * n + 1`, and minimum degree at least `s + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ExtremalReport {
    pub size: u64,
    pub min_degree: u64,
    pub hereditary: bool,
    /// `|F| = ms * n + 1` as exact rationals.
    pub matches_formula: bool,
    /// `min_degree >= s + 1`.
    pub degree_ok: bool,
}

impl ExtremalReport {
    pub fn extremal(&self) -> bool {
        self.hereditary && self.matches_formula && self.degree_ok
    }
}

/// Checks whether `family` is extremal for threshold `s` with target slope
/// `ms`, which the caller supplies.
pub fn is_extremal(family: &Family, s: u64, ms: &Rat) -> ExtremalReport {
    let size = family.len() as u64;
    let min_degree = family.min_degree();
    let expected = ms * &Rat::from_int(family.universe() as i64) + Rat::one();
    ExtremalReport {
        size,
        min_degree,
        hereditary: family.is_hereditary(),
        matches_formula: Rat::from_int(size as i64) == expected,
        degree_ok: min_degree >= s + 1,
    }
}

/// `{∅} ∪ {singletons}` on `[d]`: the smallest hereditary family with
/// minimum degree 1.
pub fn appendix_b0(d: u32) -> Result<Family> {
    if d == 0 {
        return Err(Error::InvalidParams("empty universe".into()));
    }
    let mut sets = vec![vec![]];
    sets.extend((1..=d).map(|x| vec![x]));
    Family::new(d, &sets)
}

/// `{∅} ∪ {singletons} ∪ {{2i-1, 2i}}` on `[d]` for even `d`: minimum
/// degree 2 at slope 3/2.
pub fn appendix_b1(d: u32) -> Result<Family> {
    if d == 0 || d % 2 != 0 {
        return Err(Error::InvalidParams(format!("d = {d} must be even")));
    }
    let mut sets = vec![vec![]];
    sets.extend((1..=d).map(|x| vec![x]));
    sets.extend((1..=d / 2).map(|i| vec![2 * i - 1, 2 * i]));
    Family::new(d, &sets)
}

/// Verifies the three dual identities for a hereditary family: the
/// complement dual is hereditary, has size `2^n - |F|`, and every vertex
/// satisfies `deg_dual(x) = 2^(n-1) - |F| + deg(x)`.
pub fn fact62_check(family: &Family) -> Result<bool> {
    family.require_hereditary()?;
    let dual = family.complement_dual()?;
    let n = family.universe();
    if !dual.is_hereditary() {
        return Ok(false);
    }
    if dual.len() as u64 != (1u64 << n) - family.len() as u64 {
        return Ok(false);
    }
    let half = 1i64 << (n - 1);
    let offset = half - family.len() as i64;
    let degrees = family.degrees();
    let dual_degrees = dual.degrees();
    for x in 0..n as usize {
        if dual_degrees[x] as i64 != offset + degrees[x] as i64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two recorded size conditions under which the dual-extremality
/// question is posed: `ms * n + 1 <= 2^(n-3)` and `s <= 2^(n/2 - 1) - 1`.
/// The second is compared exactly as `(s + 1)^2 <= 2^(n-2)`.
#[derive(Clone, Debug, Serialize)]
pub struct Question63Preconditions {
    pub size_cap_ok: bool,
    pub threshold_cap_ok: bool,
}

pub fn question63_preconditions(n: u32, s: u64, ms: &Rat) -> Result<Question63Preconditions> {
    if n < 3 || n > 60 {
        return Err(Error::InvalidParams(format!("n = {n} outside 3..=60")));
    }
    let size = ms * &Rat::from_int(n as i64) + Rat::one();
    let size_cap_ok = size <= Rat::from_int(1i64 << (n - 3));
    let threshold_cap_ok = match (s + 1).checked_mul(s + 1) {
        Some(sq) if n >= 2 => sq <= 1u64 << (n - 2).min(62),
        _ => false,
    };
    Ok(Question63Preconditions {
        size_cap_ok,
        threshold_cap_ok,
    })
}
