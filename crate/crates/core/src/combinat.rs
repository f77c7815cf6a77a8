//! Lexicographic k-subset enumeration and binomial counts, shared by the
//! exact solver and the group-greedy candidate generation.

/// Binomial coefficient `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // Multiply before dividing so the intermediate stays integral:
        // acc * (n - i) is always divisible by (i + 1) here.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

/// Calls `f` for every size-`k` subset of `0..n`, in lexicographic order of
/// the ascending index tuple. Enumeration stops early if `f` returns `false`.
pub fn for_each_combination<F: FnMut(&[usize]) -> bool>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Collects every size-`k` subset of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_combination(n, k, |c| {
        out.push(c.to_vec());
        true
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(47, 4), 178_365);
    }

    #[test]
    fn binomial_saturates() {
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn combinations_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }

    #[test]
    fn enumeration_counts_match_binomial() {
        for n in 0..10 {
            for k in 0..=n {
                let mut count = 0u128;
                for_each_combination(n, k, |c| {
                    assert_eq!(c.len(), k);
                    assert!(c.windows(2).all(|w| w[0] < w[1]));
                    count += 1;
                    true
                });
                assert_eq!(count, binomial(n, k));
            }
        }
    }

    #[test]
    fn early_stop() {
        let mut seen = 0;
        for_each_combination(6, 3, |_| {
            seen += 1;
            seen < 5
        });
        assert_eq!(seen, 5);
    }
}
