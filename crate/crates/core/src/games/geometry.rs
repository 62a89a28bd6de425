//! Board coordinate helpers shared by the grid games.

/// The eight dihedral transforms of an `n x n` grid, as coordinate maps.
/// Index 0 is the identity.
pub(crate) fn dihedral_transform(k: usize, n: usize, r: usize, c: usize) -> (usize, usize) {
    let m = n - 1;
    match k {
        0 => (r, c),
        1 => (c, m - r),
        2 => (m - r, m - c),
        3 => (m - c, r),
        4 => (r, m - c),
        5 => (m - r, c),
        6 => (c, r),
        7 => (m - c, m - r),
        _ => unreachable!("dihedral group has 8 elements"),
    }
}

/// For each of the 8 transforms, the destination index of every cell of a
/// row-major `n x n` board.
pub(crate) fn dihedral_destinations(n: usize) -> Vec<Vec<usize>> {
    (0..8)
        .map(|k| {
            (0..n * n)
                .map(|i| {
                    let (r, c) = dihedral_transform(k, n, i / n, i % n);
                    r * n + c
                })
                .collect()
        })
        .collect()
}

/// Neighbours in the 8-connected grid.
pub(crate) fn king_neighbors(rows: usize, cols: usize, cell: usize) -> Vec<usize> {
    let (r, c) = ((cell / cols) as isize, (cell % cols) as isize);
    let mut out = Vec::with_capacity(8);
    for dr in -1..=1 {
        for dc in -1..=1 {
            if dr == 0 && dc == 0 {
                continue;
            }
            let (nr, nc) = (r + dr, c + dc);
            if nr >= 0 && nc >= 0 && (nr as usize) < rows && (nc as usize) < cols {
                out.push(nr as usize * cols + nc as usize);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_transform_is_a_permutation() {
        for dest in dihedral_destinations(4) {
            let mut seen = dest.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn corner_has_three_king_neighbors() {
        assert_eq!(king_neighbors(3, 3, 0).len(), 3);
        assert_eq!(king_neighbors(3, 3, 4).len(), 8);
    }
}
