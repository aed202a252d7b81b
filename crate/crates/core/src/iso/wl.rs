//! Two-dimensional Weisfeiler-Leman refinement of an edge colouring.

use std::collections::HashMap;

use super::color::ColorMatrix;

/// Coarsest stable refinement under the 2-WL rule.
///
/// The new colour of `(x, y)` is the old colour together with the multiset of
/// pairs `(c(x, z), c(z, y))` over all `z`. Colours are renamed by the sorted
/// order of their signatures, so a stable input whose colours are `0..k` comes
/// back unchanged.
pub fn wl_refine(initial: &ColorMatrix) -> ColorMatrix {
    let n = initial.size();
    // the diagonal is an atomic type of its own
    let split: Vec<u32> = (0..n * n)
        .map(|i| initial.as_slice()[i] * 2 + u32::from(i % (n + 1) == 0))
        .collect();
    let mut current = normalize(&ColorMatrix::new(n, split));
    loop {
        let k = current.num_colors() as u64;
        let mut signatures: Vec<(u32, Vec<u64>)> = Vec::with_capacity(n * n);
        for x in 0..n {
            let row_x = current.row(x);
            for y in 0..n {
                let mut walk: Vec<u64> = (0..n)
                    .map(|z| row_x[z] as u64 * k + current.get(z, y) as u64)
                    .collect();
                walk.sort_unstable();
                signatures.push((current.get(x, y), walk));
            }
        }
        let mut distinct: Vec<&(u32, Vec<u64>)> = signatures.iter().collect();
        distinct.sort_unstable();
        distinct.dedup();
        let ids: HashMap<&(u32, Vec<u64>), u32> = distinct
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u32))
            .collect();
        let next_count = distinct.len();
        let colors: Vec<u32> = signatures.iter().map(|s| ids[s]).collect();
        let next = ColorMatrix::new(n, colors);
        if next_count == current.num_colors() {
            return next;
        }
        current = next;
    }
}

/// Renames colours to `0..k` preserving their relative order.
fn normalize(m: &ColorMatrix) -> ColorMatrix {
    let mut used: Vec<u32> = m.as_slice().to_vec();
    used.sort_unstable();
    used.dedup();
    let colors = m
        .as_slice()
        .iter()
        .map(|c| used.binary_search(c).expect("present") as u32)
        .collect();
    ColorMatrix::new(m.size(), colors)
}

/// True iff the colouring is already stable.
pub fn is_coherent(m: &ColorMatrix) -> bool {
    wl_refine(m).num_colors() == normalize(m).num_colors()
}
