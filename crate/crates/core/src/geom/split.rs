use super::point::{PointId, PointSet};
use crate::{Error, Result};

/// Cuts `ids` by vertical lines into consecutive parts of the requested
/// sizes, left to right. Ties in x are broken by y, as if the plane were
/// sheared by an infinitesimal `x' = x + delta*y`.
pub fn vertical_split(
    set: &PointSet,
    ids: &[PointId],
    sizes: &[usize],
) -> Result<Vec<Vec<PointId>>> {
    let total: usize = sizes.iter().sum();
    if total != ids.len() {
        return Err(Error::SizeMismatch(format!(
            "part sizes sum to {total}, set has {} points",
            ids.len()
        )));
    }
    let mut sorted = ids.to_vec();
    set.sort_lex(&mut sorted);
    if let Some(w) = sorted.windows(2).find(|w| set.get(w[0]) == set.get(w[1])) {
        return Err(Error::DuplicateX(format!("{} and {}", w[0], w[1])));
    }
    let mut parts = Vec::with_capacity(sizes.len());
    let mut rest = sorted.as_slice();
    for &s in sizes {
        let (head, tail) = rest.split_at(s);
        parts.push(head.to_vec());
        rest = tail;
    }
    Ok(parts)
}

/// Sizes of `parts` nearly equal parts of `n` items, larger parts first.
pub(crate) fn balanced_sizes(n: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| n / parts + usize::from(i < n % parts))
        .collect()
}
