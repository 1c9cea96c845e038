//! Label subsets as bitmasks. Label `l` (1-based) lives in bit `l - 1`.

pub type Mask = u64;

/// Largest label count representable in a [`Mask`].
pub const MAX_LABELS: usize = 64;

#[inline]
pub fn full(n: usize) -> Mask {
    debug_assert!(n <= MAX_LABELS);
    if n == MAX_LABELS {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

#[inline]
pub fn bit(label: usize) -> Mask {
    debug_assert!((1..=MAX_LABELS).contains(&label));
    1 << (label - 1)
}

#[inline]
pub fn size(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Smallest label in `m`, or `None` for the empty set.
#[inline]
pub fn min_label(m: Mask) -> Option<usize> {
    (m != 0).then(|| m.trailing_zeros() as usize + 1)
}

#[inline]
pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

pub fn from_labels<I: IntoIterator<Item = usize>>(labels: I) -> Mask {
    labels.into_iter().fold(0, |m, l| m | bit(l))
}

/// Labels of `m` in increasing order.
pub fn labels(m: Mask) -> impl Iterator<Item = usize> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let l = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(l + 1)
    })
}

/// Renumber the labels of `m` that survive in `keep` onto `1..=|keep|`,
/// preserving their order.
pub fn compress(m: Mask, keep: Mask) -> Mask {
    let mut out = 0;
    for (i, l) in labels(keep).enumerate() {
        if m & bit(l) != 0 {
            out |= 1 << i;
        }
    }
    out
}
