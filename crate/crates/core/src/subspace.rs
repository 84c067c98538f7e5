//! Enumeration of the subspaces of `(F_2)^k`, each once, by reduced row
//! echelon form.

/// Calls `f` with a basis (as coordinate masks) of every `dim`-dimensional
/// subspace of `(F_2)^k`, stopping early when `f` returns `false`. Returns
/// `false` if stopped early.
pub fn for_each_subspace(k: usize, dim: usize, mut f: impl FnMut(&[u64]) -> bool) -> bool {
    if dim > k {
        return true;
    }
    let mut pivots = Vec::with_capacity(dim);
    pivot_sets(k, dim, 0, &mut pivots, &mut f)
}

fn pivot_sets(
    k: usize,
    dim: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    f: &mut impl FnMut(&[u64]) -> bool,
) -> bool {
    if pivots.len() == dim {
        return fill_free(k, pivots, f);
    }
    for p in start..k {
        pivots.push(p);
        let go_on = pivot_sets(k, dim, p + 1, pivots, f);
        pivots.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn fill_free(k: usize, pivots: &[usize], f: &mut impl FnMut(&[u64]) -> bool) -> bool {
    let pivot_mask: u64 = pivots.iter().map(|&p| 1u64 << p).sum();
    // (row, column) of every free entry
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(r, &p)| {
            (p + 1..k)
                .filter(move |&c| pivot_mask >> c & 1 == 0)
                .map(move |c| (r, c))
        })
        .collect();
    assert!(free.len() < 64, "too many free entries to enumerate");
    let mut rows = vec![0u64; pivots.len()];
    for assignment in 0..(1u64 << free.len()) {
        for (r, &p) in rows.iter_mut().zip(pivots) {
            *r = 1 << p;
        }
        for (bit, &(r, c)) in free.iter().enumerate() {
            if assignment >> bit & 1 == 1 {
                rows[r] |= 1 << c;
            }
        }
        if !f(&rows) {
            return false;
        }
    }
    true
}

/// Number of `dim`-dimensional subspaces of `(F_2)^k` (Gaussian binomial at q = 2).
pub fn subspace_count(k: usize, dim: usize) -> u128 {
    if dim > k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..dim {
        num *= (1u128 << (k - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}
