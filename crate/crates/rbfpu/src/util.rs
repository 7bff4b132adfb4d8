//! Small numeric helpers shared across modules.

/// `n` evenly spaced values from `lo` to `hi`, endpoints exact.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (n - 1) as f64;
    let mut out: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
    out[0] = lo;
    out[n - 1] = hi;
    out
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// Visits every multi-index in the inclusive box `[lo[k], hi[k]]` per axis,
/// last axis fastest (row-major order).
pub(crate) fn for_each_multi_index(
    lo: &[usize],
    hi: &[usize],
    mut f: impl FnMut(&[usize]),
) {
    debug_assert_eq!(lo.len(), hi.len());
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur: Vec<usize> = lo.to_vec();
    loop {
        f(&cur);
        // odometer increment
        let mut axis = cur.len();
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                break;
            }
            cur[axis] = lo[axis];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_exact() {
        let v = linspace(0.1, 0.2, 6);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[5], 0.2);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn multi_index_row_major() {
        let mut seen = Vec::new();
        for_each_multi_index(&[0, 1], &[1, 2], |ix| seen.push(ix.to_vec()));
        assert_eq!(
            seen,
            vec![vec![0, 1], vec![0, 2], vec![1, 1], vec![1, 2]]
        );
    }

    #[test]
    fn multi_index_empty_range() {
        let mut count = 0;
        for_each_multi_index(&[2], &[1], |_| count += 1);
        assert_eq!(count, 0);
    }
}
