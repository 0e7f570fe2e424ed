use alloc::vec::Vec;

use crate::arith::isqrt;

/// Writes `n` as a sum of at most four positive squares, returning the roots
/// in nonincreasing order. Largest square first, backtracking when the greedy
/// choice would need a fifth term.
pub fn four_squares(n: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(4);
    assert!(
        fill(n, 4, isqrt(n), &mut out),
        "every integer is a sum of four squares"
    );
    out
}

fn fill(n: u64, slots: usize, cap: u64, out: &mut Vec<u64>) -> bool {
    if n == 0 {
        return true;
    }
    if slots == 0 {
        return false;
    }
    let mut s = isqrt(n).min(cap);
    while s >= 1 {
        // The remaining slots cannot reach n if even all of them equal s.
        if (slots as u64) * s * s < n {
            return false;
        }
        out.push(s);
        if fill(n - s * s, slots - 1, s, out) {
            return true;
        }
        out.pop();
        s -= 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn greedy_would_need_five() {
        // 16 + 4 + 1 + 1 + 1 greedily
        assert_eq!(four_squares(23), vec![3, 3, 2, 1]);
        assert_eq!(four_squares(0), Vec::<u64>::new());
        assert_eq!(four_squares(8), vec![2, 2]);
        assert_eq!(four_squares(6), vec![2, 1, 1]);
        assert_eq!(four_squares(3), vec![1, 1, 1]);
    }

    proptest! {
        #[test]
        fn at_most_four_terms(n in 0u64..200_000) {
            let s = four_squares(n);
            prop_assert!(s.len() <= 4);
            prop_assert_eq!(s.iter().map(|v| v * v).sum::<u64>(), n);
            prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
