//! Strict total orders on the integers.
//!
//! A [`TotalOrder`] is a comparator over `i64`. Three kinds exist: the
//! natural order, the 2-adic order [`TotalOrder::Pow2`] (higher power of two
//! wins, ties broken by stepping both operands down by one), and seeded finite
//! permutations of a window, used for randomized testing.
//!
//! Throughout the crate `Ordering::Less` from [`TotalOrder::compare`] means
//! "`a` precedes `b`", written `a ≺ b`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("{value} lies outside the permutation window [{lo}, {hi}]")]
    OutsideWindow { value: i64, lo: i64, hi: i64 },
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("{value} is not an element of [{lo}, {hi}]")]
    NotInInterval { value: i64, lo: i64, hi: i64 },
    #[error("k = {k} exceeds the interval size {len}")]
    CountTooLarge { k: u64, len: u64 },
    #[error("{x} lies outside the open window (-2^{n}, 2^{n})")]
    OutsideDyadicWindow { x: i64, n: u32 },
    #[error("invalid order specification {0:?}")]
    BadSpec(String),
}

/// `|k|_2`: exponent of the largest power of two dividing `k`.
///
/// Variant order matters: every finite value sorts below `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValuation {
    Finite(u32),
    Infinity,
}

impl ExtendedValuation {
    pub fn is_at_least(self, m: u32) -> bool {
        self >= ExtendedValuation::Finite(m)
    }
}

impl fmt::Display for ExtendedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValuation::Finite(v) => write!(f, "{v}"),
            ExtendedValuation::Infinity => f.write_str("inf"),
        }
    }
}

pub fn two_adic_valuation(k: i64) -> ExtendedValuation {
    if k == 0 {
        ExtendedValuation::Infinity
    } else {
        ExtendedValuation::Finite(k.trailing_zeros())
    }
}

/// Closed integer interval `[lo, hi]`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerInterval {
    lo: i64,
    hi: i64,
}

impl IntegerInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self, OrderError> {
        if lo > hi {
            return Err(OrderError::EmptyInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    /// Always false; intervals are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &IntegerInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for IntegerInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Seeded shuffle of a window `[lo, hi]`; values outside the window are not
/// comparable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationOrder {
    lo: i64,
    hi: i64,
    /// `None` for orders built from an explicit ranking.
    seed: Option<u64>,
    /// `rank[x - lo]` is the position of `x` in ≺-increasing order.
    rank: Arc<[u32]>,
}

impl PermutationOrder {
    pub fn seeded(seed: u64, lo: i64, hi: i64) -> Result<Self, OrderError> {
        if lo > hi {
            return Err(OrderError::EmptyInterval { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        let mut by_rank: Vec<u32> = (0..len as u32).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        by_rank.shuffle(&mut rng);
        let mut rank = vec![0u32; len];
        for (r, &offset) in by_rank.iter().enumerate() {
            rank[offset as usize] = r as u32;
        }
        Ok(Self {
            lo,
            hi,
            seed: Some(seed),
            rank: rank.into(),
        })
    }

    /// Order given by listing `[lo, hi]` in ≺-increasing order.
    pub fn from_ranking(lo: i64, hi: i64, ranking: &[i64]) -> Result<Self, OrderError> {
        if lo > hi {
            return Err(OrderError::EmptyInterval { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        if ranking.len() != len {
            return Err(OrderError::BadSpec(format!(
                "ranking of {} values for an interval of {len}",
                ranking.len()
            )));
        }
        let mut rank = vec![u32::MAX; len];
        for (r, &x) in ranking.iter().enumerate() {
            if x < lo || x > hi || rank[(x - lo) as usize] != u32::MAX {
                return Err(OrderError::BadSpec(format!("ranking is not a permutation at {x}")));
            }
            rank[(x - lo) as usize] = r as u32;
        }
        Ok(Self {
            lo,
            hi,
            seed: None,
            rank: rank.into(),
        })
    }

    pub fn window(&self) -> IntegerInterval {
        IntegerInterval {
            lo: self.lo,
            hi: self.hi,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn rank_of(&self, x: i64) -> Result<u32, OrderError> {
        if x < self.lo || x > self.hi {
            return Err(OrderError::OutsideWindow {
                value: x,
                lo: self.lo,
                hi: self.hi,
            });
        }
        Ok(self.rank[(x - self.lo) as usize])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalOrder {
    Natural,
    Pow2,
    Permutation(PermutationOrder),
}

impl TotalOrder {
    pub fn permutation(seed: u64, lo: i64, hi: i64) -> Result<Self, OrderError> {
        PermutationOrder::seeded(seed, lo, hi).map(TotalOrder::Permutation)
    }

    /// `Less` iff `a ≺ b`.
    pub fn compare(&self, a: i64, b: i64) -> Result<Ordering, OrderError> {
        match self {
            TotalOrder::Natural => Ok(a.cmp(&b)),
            TotalOrder::Pow2 => Ok(pow2_compare_counted(a, b).0),
            TotalOrder::Permutation(perm) => Ok(perm.rank_of(a)?.cmp(&perm.rank_of(b)?)),
        }
    }

    pub fn precedes(&self, a: i64, b: i64) -> Result<bool, OrderError> {
        Ok(self.compare(a, b)? == Ordering::Less)
    }

    /// Rejects intervals the order cannot rank.
    pub fn check_interval(&self, iv: &IntegerInterval) -> Result<(), OrderError> {
        if let TotalOrder::Permutation(perm) = self {
            perm.rank_of(iv.lo)?;
            perm.rank_of(iv.hi)?;
        }
        Ok(())
    }

    /// Unsigned key whose natural order coincides with ≺.
    ///
    /// For the 2-adic order, `a ≺ b` exactly when bit `|a - b|_2` of `a` is
    /// set, so complementing and bit-reversing the two's-complement word gives
    /// a monotone key. [`TotalOrder::compare`] does not use this; it backs
    /// bulk top-k selection during segment construction.
    pub fn rank_key(&self, x: i64) -> Result<u64, OrderError> {
        match self {
            TotalOrder::Natural => Ok((x as u64) ^ (1 << 63)),
            TotalOrder::Pow2 => Ok((!(x as u64)).reverse_bits()),
            TotalOrder::Permutation(perm) => perm.rank_of(x).map(u64::from),
        }
    }
}

impl fmt::Display for TotalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalOrder::Natural => f.write_str("natural"),
            TotalOrder::Pow2 => f.write_str("pow2"),
            TotalOrder::Permutation(p) => match p.seed {
                Some(seed) => write!(f, "perm:{}:{}:{}", seed, p.lo, p.hi),
                None => write!(f, "ranking:{}:{}", p.lo, p.hi),
            },
        }
    }
}

impl FromStr for TotalOrder {
    type Err = OrderError;

    /// `natural`, `pow2` or `perm:<seed>:<lo>:<hi>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrderError::BadSpec(s.to_string());
        match s {
            "natural" => Ok(TotalOrder::Natural),
            "pow2" => Ok(TotalOrder::Pow2),
            _ => {
                let rest = s.strip_prefix("perm:").ok_or_else(bad)?;
                let parts: Vec<&str> = rest.split(':').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                let seed = parts[0].parse().map_err(|_| bad())?;
                let lo = parts[1].parse().map_err(|_| bad())?;
                let hi = parts[2].parse().map_err(|_| bad())?;
                TotalOrder::permutation(seed, lo, hi)
            }
        }
    }
}

/// The 2-adic comparison loop, also returning the number of iterations taken.
///
/// At step `i` the valuations of `a - i` and `b - i` are compared and the
/// operand with the smaller one is ≺-smaller. For `a != b` the loop ends after
/// at most `2^(|a - b|_2)` steps.
pub fn pow2_compare_counted(a: i64, b: i64) -> (Ordering, u64) {
    if a == b {
        return (Ordering::Equal, 0);
    }
    let mut i: i64 = 0;
    loop {
        let va = two_adic_valuation(a.wrapping_sub(i));
        let vb = two_adic_valuation(b.wrapping_sub(i));
        if va != vb {
            return (va.cmp(&vb), i as u64 + 1);
        }
        i += 1;
    }
}

/// Elements of `iv` in ≺-increasing order.
pub fn sort_interval(order: &TotalOrder, iv: &IntegerInterval) -> Result<Vec<i64>, OrderError> {
    order.check_interval(iv)?;
    let mut items: Vec<i64> = iv.iter().collect();
    // check_interval guarantees compare succeeds on every element.
    items.sort_by(|&a, &b| order.compare(a, b).expect("interval checked"));
    Ok(items)
}

/// True iff fewer than `k` elements `t` of `iv` satisfy `s ≺ t`.
pub fn is_among_k_greatest(order: &TotalOrder, s: i64, iv: &IntegerInterval, k: u64) -> Result<bool, OrderError> {
    if !iv.contains(s) {
        return Err(OrderError::NotInInterval {
            value: s,
            lo: iv.lo,
            hi: iv.hi,
        });
    }
    if k > iv.len() {
        return Err(OrderError::CountTooLarge { k, len: iv.len() });
    }
    order.check_interval(iv)?;
    let mut greater = 0u64;
    for t in iv.iter() {
        if order.precedes(s, t)? {
            greater += 1;
            if greater >= k {
                return Ok(false);
            }
        }
    }
    Ok(greater < k)
}

/// Membership flags for the `k` ≺-greatest elements of `iv`, indexed by
/// `x - iv.lo()`. Runs in linear time using [`TotalOrder::rank_key`].
pub fn top_k_flags(order: &TotalOrder, iv: &IntegerInterval, k: u64) -> Result<Vec<bool>, OrderError> {
    let len = iv.len();
    if k > len {
        return Err(OrderError::CountTooLarge { k, len });
    }
    order.check_interval(iv)?;
    if k == 0 {
        return Ok(vec![false; len as usize]);
    }
    if k == len {
        return Ok(vec![true; len as usize]);
    }
    let keys: Vec<u64> = iv.iter().map(|x| order.rank_key(x)).collect::<Result<_, _>>()?;
    let mut scratch = keys.clone();
    let cut = (len - k) as usize;
    let (_, threshold, _) = scratch.select_nth_unstable(cut);
    let threshold = *threshold;
    Ok(keys.into_iter().map(|key| key >= threshold).collect())
}

/// 1-based position of the dyadic rational `0.5 - x·2^(-n-1)` in the base-2
/// van der Corput sequence, for `-2^n < x < 2^n`.
///
/// The value is `y / 2^(n+1)` with `y = 2^n - x`; the sequence index whose
/// radical inverse equals it is `y` with its `n + 1` low bits reversed.
pub fn vdc_index(x: i64, n: u32) -> Result<u64, OrderError> {
    if n > 61 {
        return Err(OrderError::OutsideDyadicWindow { x, n });
    }
    let half = 1i64 << n;
    if x <= -half || x >= half {
        return Err(OrderError::OutsideDyadicWindow { x, n });
    }
    let y = (half - x) as u64;
    Ok(y.reverse_bits() >> (64 - (n + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pow2_less(a: i64, b: i64) -> bool {
        TotalOrder::Pow2.precedes(a, b).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(two_adic_valuation(12), ExtendedValuation::Finite(2));
        assert_eq!(two_adic_valuation(7), ExtendedValuation::Finite(0));
        assert_eq!(two_adic_valuation(0), ExtendedValuation::Infinity);
        assert_eq!(two_adic_valuation(-8), ExtendedValuation::Finite(3));
        assert!(ExtendedValuation::Infinity > ExtendedValuation::Finite(u32::MAX));
    }

    #[test]
    fn pow2_compare_examples() {
        assert!(pow2_less(4, 0));
        assert!(pow2_less(10, 8));
        assert!(pow2_less(-1, -5));
        assert!(!pow2_less(0, 4));
        assert_eq!(TotalOrder::Pow2.compare(3, 3).unwrap(), Ordering::Equal);
    }

    #[test]
    fn sort_interval_examples() {
        let fig = IntegerInterval::new(5, 11).unwrap();
        assert_eq!(
            sort_interval(&TotalOrder::Pow2, &fig).unwrap(),
            vec![7, 11, 5, 9, 6, 10, 8]
        );
        let small = IntegerInterval::new(0, 3).unwrap();
        assert_eq!(sort_interval(&TotalOrder::Natural, &small).unwrap(), vec![0, 1, 2, 3]);
        let around_zero = IntegerInterval::new(-1, 1).unwrap();
        assert_eq!(sort_interval(&TotalOrder::Pow2, &around_zero).unwrap(), vec![-1, 1, 0]);
    }

    #[test]
    fn top_k_membership_examples() {
        let iv = IntegerInterval::new(5, 11).unwrap();
        assert!(is_among_k_greatest(&TotalOrder::Pow2, 8, &iv, 2).unwrap());
        assert!(!is_among_k_greatest(&TotalOrder::Pow2, 5, &iv, 2).unwrap());
        assert!(!is_among_k_greatest(&TotalOrder::Natural, 11, &iv, 0).unwrap());
        assert!(!is_among_k_greatest(&TotalOrder::Pow2, 8, &iv, 0).unwrap());
        assert!(matches!(
            is_among_k_greatest(&TotalOrder::Pow2, 12, &iv, 1),
            Err(OrderError::NotInInterval { .. })
        ));
        assert!(matches!(
            is_among_k_greatest(&TotalOrder::Pow2, 8, &iv, 8),
            Err(OrderError::CountTooLarge { .. })
        ));
    }

    #[test]
    fn vdc_index_examples() {
        assert_eq!(vdc_index(0, 3).unwrap(), 1);
        assert_eq!(vdc_index(4, 3).unwrap(), 2);
        assert_eq!(vdc_index(-4, 3).unwrap(), 3);
        assert!(vdc_index(8, 3).is_err());
        assert!(vdc_index(-8, 3).is_err());
    }

    #[test]
    fn permutation_rejects_outside_window() {
        let order = TotalOrder::permutation(7, -4, 4).unwrap();
        assert!(order.compare(-4, 4).is_ok());
        assert!(matches!(
            order.compare(5, 0),
            Err(OrderError::OutsideWindow { value: 5, .. })
        ));
        let iv = IntegerInterval::new(0, 9).unwrap();
        assert!(sort_interval(&order, &iv).is_err());
    }

    #[test]
    fn permutation_is_reproducible_and_bijective() {
        let a = PermutationOrder::seeded(42, -10, 10).unwrap();
        let b = PermutationOrder::seeded(42, -10, 10).unwrap();
        assert_eq!(a, b);
        let mut ranks: Vec<u32> = (-10..=10).map(|x| a.rank_of(x).unwrap()).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..21).collect::<Vec<_>>());
        let c = PermutationOrder::seeded(43, -10, 10).unwrap();
        assert_ne!(a.rank, c.rank);
    }

    #[test]
    fn order_spec_round_trip() {
        for spec in ["natural", "pow2", "perm:3:-20:20"] {
            let order: TotalOrder = spec.parse().unwrap();
            assert_eq!(order.to_string(), spec);
        }
        assert!("perm:1:5".parse::<TotalOrder>().is_err());
        assert!("perm:1:5:2".parse::<TotalOrder>().is_err());
        assert!("lexicographic".parse::<TotalOrder>().is_err());
    }

    #[test]
    fn strict_total_order_laws_pow2() {
        let window: Vec<i64> = (-512..=512).collect();
        for &a in &window {
            assert!(!pow2_less(a, a));
        }
        // antisymmetry and totality
        for &a in &window {
            for &b in &window {
                if a != b {
                    assert_ne!(pow2_less(a, b), pow2_less(b, a), "{a} {b}");
                }
            }
        }
        // transitivity through the rank key, which is checked against the loop
        // just above on every pair
        let iv = IntegerInterval::new(-512, 512).unwrap();
        let sorted = sort_interval(&TotalOrder::Pow2, &iv).unwrap();
        for w in sorted.windows(2) {
            assert!(pow2_less(w[0], w[1]));
        }
    }

    #[test]
    fn transitivity_exhaustive_small_window() {
        let window: Vec<i64> = (-24..=24).collect();
        for &a in &window {
            for &b in &window {
                if !pow2_less(a, b) {
                    continue;
                }
                for &c in &window {
                    if pow2_less(b, c) {
                        assert!(pow2_less(a, c), "{a} {b} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn rank_key_agrees_with_compare() {
        let orders = [
            TotalOrder::Natural,
            TotalOrder::Pow2,
            TotalOrder::permutation(5, -70, 70).unwrap(),
        ];
        for order in &orders {
            for a in -70..=70 {
                for b in -70..=70 {
                    let by_key = order.rank_key(a).unwrap().cmp(&order.rank_key(b).unwrap());
                    assert_eq!(by_key, order.compare(a, b).unwrap(), "{order} {a} {b}");
                }
            }
        }
        for (a, b) in [(i64::MIN / 2, 3), (1 << 40, (1 << 40) + 24), (123_456_789, 987_654_321)] {
            let by_key = TotalOrder::Pow2
                .rank_key(a)
                .unwrap()
                .cmp(&TotalOrder::Pow2.rank_key(b).unwrap());
            assert_eq!(by_key, TotalOrder::Pow2.compare(a, b).unwrap());
        }
    }

    #[test]
    fn compare_loop_respects_iteration_bound() {
        for a in -300i64..=300 {
            for b in -300i64..=300 {
                if a == b {
                    continue;
                }
                let (_, steps) = pow2_compare_counted(a, b);
                let v = (a - b).trailing_zeros();
                assert!(steps <= 1u64 << (v + 1), "{a} {b} took {steps}");
                assert!(steps <= 2 * (a - b).unsigned_abs());
            }
        }
    }

    #[test]
    fn top_k_flags_match_counting_definition() {
        let orders = [
            TotalOrder::Natural,
            TotalOrder::Pow2,
            TotalOrder::permutation(11, -40, 40).unwrap(),
        ];
        for order in &orders {
            for lo in -20..0 {
                for len in 1..20 {
                    let iv = IntegerInterval::new(lo, lo + len - 1).unwrap();
                    for k in 0..=iv.len() {
                        let flags = top_k_flags(order, &iv, k).unwrap();
                        for (i, s) in iv.iter().enumerate() {
                            assert_eq!(flags[i], is_among_k_greatest(order, s, &iv, k).unwrap());
                        }
                    }
                }
            }
        }
    }

    /// Radical inverse of `j` in base 2, as a numerator over `2^bits`.
    fn radical_inverse(j: u64, bits: u32) -> u64 {
        let mut num = 0u64;
        let mut rest = j;
        let mut weight = 1u64 << (bits - 1);
        while rest > 0 {
            if rest & 1 == 1 {
                num += weight;
            }
            rest >>= 1;
            weight >>= 1;
        }
        num
    }

    #[test]
    fn decreasing_order_walks_residues_in_van_der_corput_order() {
        // x ↦ (x mod 2^(n+1)) / 2^(n+1), with 0 sent to 1/2, turns the
        // ≺-decreasing enumeration of (-2^n, 2^n) into the first 2^(n+1) - 1
        // van der Corput terms.
        for n in 0..=10u32 {
            let half = 1i64 << n;
            let iv = IntegerInterval::new(-half + 1, half - 1).unwrap();
            let mut desc = sort_interval(&TotalOrder::Pow2, &iv).unwrap();
            desc.reverse();
            let modulus = 2 * half;
            for (idx, &x) in desc.iter().enumerate() {
                let numerator = if x == 0 { half } else { x.rem_euclid(modulus) } as u64;
                assert_eq!(numerator, radical_inverse(idx as u64 + 1, n + 1), "n={n} x={x}");
            }
        }
    }
}
