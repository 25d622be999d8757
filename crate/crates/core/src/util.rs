use num_bigint::BigInt;
use num_traits::One;

/// All `k`-element subsets of `0..n`, in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

pub fn indices_of(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_enumerate_in_lex_order() {
        assert_eq!(
            subsets_of_size(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets_of_size(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets_of_size(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets_of_size(2, 3).is_empty());
    }

    #[test]
    fn subset_counts_are_binomial() {
        assert_eq!(subsets_of_size(8, 3).len(), 56);
        assert_eq!(subsets_of_size(10, 5).len(), 252);
    }

    #[test]
    fn masks_round_trip() {
        assert_eq!(indices_of(mask_of(&[0, 3, 5])), vec![0, 3, 5]);
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
