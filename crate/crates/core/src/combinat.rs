//! Counting helpers shared by several modules.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn permutations_with_sign(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        if cur.len() == k {
            let inversions = (0..k)
                .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
                .filter(|&(i, j)| cur[i] > cur[j])
                .count();
            out.push((cur.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Factorials 0!..=max!.
pub fn factorial_table(max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(BigInt::one());
    for i in 1..=max {
        let next = &out[i - 1] * i;
        out.push(next);
    }
    out
}

/// C(n, k), zero when k > n.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial_u64(n: usize, k: usize) -> u64 {
    u64::try_from(binomial(n, k)).expect("binomial fits in u64")
}

/// All tuples of `parts` nonnegative integers summing to `total`, in
/// lexicographic order.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    // Odometer over the first parts-1 entries; the last takes the rest.
    let mut cur = vec![0usize; parts];
    loop {
        let used: usize = cur[..parts - 1].iter().sum();
        if used <= total {
            cur[parts - 1] = total - used;
            out.push(cur.clone());
        }
        let mut pos = parts - 1;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            let used: usize = cur[..parts - 1].iter().sum();
            if used < total {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 0;
        }
    }
}

/// Number of standard Young tableaux of the shape, by the hook length
/// formula.
pub fn standard_tableaux(parts: &[usize]) -> BigInt {
    let size: usize = parts.iter().sum();
    let mut hooks = BigInt::one();
    for (r, &len) in parts.iter().enumerate() {
        for c in 0..len {
            let arm = len - c - 1;
            let leg = parts[r + 1..].iter().filter(|&&p| p > c).count();
            hooks *= arm + leg + 1;
        }
    }
    factorial(size) / hooks
}
