//! Small counting helpers shared across the crate.

/// Binomial coefficient with the edge conventions used throughout:
/// `binomial(n, 0) == 1` and `binomial(n, m) == 0` whenever `m > n`.
pub fn binomial(n: usize, m: usize) -> usize {
    if m > n {
        return 0;
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Falling factorial k * (k-1) * ... * (k-r+1), zero when r > k.
pub fn falling_factorial(k: usize, r: usize) -> usize {
    if r > k {
        return 0;
    }
    (0..r).map(|i| k - i).product()
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All ordered tuples of `k` positive integers summing to `n`, in
/// lexicographic order. Empty when k == 0 or n < k.
pub fn positive_compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || n < k {
        return out;
    }
    let mut cur = vec![0usize; k];
    fill_compositions(n, 0, &mut cur, &mut out);
    out
}

fn fill_compositions(left: usize, idx: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let k = cur.len();
    if idx == k - 1 {
        cur[k - 1] = left;
        out.push(cur.clone());
        return;
    }
    let remaining_slots = k - idx - 1;
    for v in 1..=(left - remaining_slots) {
        cur[idx] = v;
        fill_compositions(left - v, idx + 1, cur, out);
    }
}
