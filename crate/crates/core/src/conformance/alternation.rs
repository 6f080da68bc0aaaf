use thiserror::Error;

use crate::order::{sort_interval, two_adic_valuation, IntegerInterval, OrderError, TotalOrder};

#[derive(Debug, Error)]
pub enum AlternationError {
    #[error("k must be at least 1 and small enough for the interval to fit, got {0}")]
    BadExponent(u32),
    #[error("midpoint {midpoint} has valuation {valuation}, needs at least {k}")]
    ShallowMidpoint { midpoint: i64, valuation: String, k: u32 },
    #[error("{x} has valuation {valuation} but only the midpoint may reach {k}")]
    DeepElement { x: i64, valuation: String, k: u32 },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Checks that the ≺-increasing enumeration of `[A, A + 2^(k+1) - 2]` never
/// places two consecutive elements strictly on the same side of the midpoint
/// `M = A + 2^k - 1`.
///
/// The interval must have `|M|_2 >= k` and `|x|_2 < k` for every other element.
pub fn check_alternation(order: &TotalOrder, a: i64, k: u32) -> Result<bool, AlternationError> {
    if k == 0 || k > 61 {
        return Err(AlternationError::BadExponent(k));
    }
    let half = 1i64 << k;
    let midpoint = a
        .checked_add(half - 1)
        .filter(|m| m.checked_add(half - 1).is_some())
        .ok_or(AlternationError::BadExponent(k))?;
    let iv = IntegerInterval::new(a, midpoint + half - 1)?;

    let vm = two_adic_valuation(midpoint);
    if !vm.is_at_least(k) {
        return Err(AlternationError::ShallowMidpoint {
            midpoint,
            valuation: vm.to_string(),
            k,
        });
    }
    for x in iv.iter().filter(|&x| x != midpoint) {
        let v = two_adic_valuation(x);
        if v.is_at_least(k) {
            return Err(AlternationError::DeepElement {
                x,
                valuation: v.to_string(),
                k,
            });
        }
    }

    let sorted = sort_interval(order, &iv)?;
    Ok(sorted.windows(2).all(|w| {
        let same_left = w[0] < midpoint && w[1] < midpoint;
        let same_right = w[0] > midpoint && w[1] > midpoint;
        !same_left && !same_right
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(check_alternation(&TotalOrder::Pow2, 5, 2).unwrap());
        assert!(check_alternation(&TotalOrder::Pow2, 1, 1).unwrap());
        assert!(matches!(
            check_alternation(&TotalOrder::Pow2, 2, 1),
            Err(AlternationError::ShallowMidpoint { midpoint: 3, .. })
        ));
    }

    #[test]
    fn deep_element_rejected() {
        // [0, 6]: midpoint 3 is odd.
        assert!(check_alternation(&TotalOrder::Pow2, 0, 2).is_err());
        // [-3, 3]: midpoint 0 but -3..3 are all shallow except 0.
        assert!(check_alternation(&TotalOrder::Pow2, -3, 2).unwrap());
        // [1, 7]: midpoint 4 ok, no other multiple of 4.
        assert!(check_alternation(&TotalOrder::Pow2, 1, 2).unwrap());
        // [4, 10] midpoint 7 is odd.
        assert!(check_alternation(&TotalOrder::Pow2, 4, 2).is_err());
        assert!(matches!(
            check_alternation(&TotalOrder::Pow2, 1, 0),
            Err(AlternationError::BadExponent(0))
        ));
    }

    #[test]
    fn natural_order_does_not_alternate() {
        assert!(!check_alternation(&TotalOrder::Natural, 5, 2).unwrap());
    }
}
