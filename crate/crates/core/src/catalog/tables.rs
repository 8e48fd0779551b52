//! Frozen structure constants `(i, j, k, c[i][j][k])`, `i < j`, regenerated
//! from the matrix models in `generators`.

/// su(3): `h1, h2 | l: ⟨1,0,0⟩, ⟨i,0,0⟩ | m: ⟨0,1,0⟩, ⟨0,i,0⟩ | n: ⟨0,0,1⟩, ⟨0,0,i⟩`.
pub const SU3_TABLE: &[(usize, usize, usize, i64)] = &[
    (0, 2, 3, 2),
    (0, 3, 2, -2),
    (0, 4, 5, 1),
    (0, 5, 4, -1),
    (0, 6, 7, -1),
    (0, 7, 6, 1),
    (1, 2, 3, -1),
    (1, 3, 2, 1),
    (1, 4, 5, 1),
    (1, 5, 4, -1),
    (1, 6, 7, 2),
    (1, 7, 6, -2),
    (2, 3, 0, 2),
    (2, 4, 6, -1),
    (2, 5, 7, -1),
    (2, 6, 4, 1),
    (2, 7, 5, 1),
    (3, 4, 7, 1),
    (3, 5, 6, -1),
    (3, 6, 5, 1),
    (3, 7, 4, -1),
    (4, 5, 0, 2),
    (4, 5, 1, 2),
    (4, 6, 2, -1),
    (4, 7, 3, 1),
    (5, 6, 3, -1),
    (5, 7, 2, -1),
    (6, 7, 1, 2),
];

/// sp(2): `h: diag(i,0), diag(0,i), diag(0,j), diag(0,k) | m: a = 1, i, j, k | n: diag(j,0), diag(k,0)`.
pub const SP2_TABLE: &[(usize, usize, usize, i64)] = &[
    (0, 4, 5, 1),
    (0, 5, 4, -1),
    (0, 6, 7, 1),
    (0, 7, 6, -1),
    (0, 8, 9, 2),
    (0, 9, 8, -2),
    (1, 2, 3, 2),
    (1, 3, 2, -2),
    (1, 4, 5, -1),
    (1, 5, 4, 1),
    (1, 6, 7, 1),
    (1, 7, 6, -1),
    (2, 3, 1, 2),
    (2, 4, 6, -1),
    (2, 5, 7, -1),
    (2, 6, 4, 1),
    (2, 7, 5, 1),
    (3, 4, 7, -1),
    (3, 5, 6, 1),
    (3, 6, 5, -1),
    (3, 7, 4, 1),
    (4, 5, 0, 2),
    (4, 5, 1, -2),
    (4, 6, 2, -2),
    (4, 6, 8, 2),
    (4, 7, 3, -2),
    (4, 7, 9, 2),
    (4, 8, 6, -1),
    (4, 9, 7, -1),
    (5, 6, 3, 2),
    (5, 6, 9, 2),
    (5, 7, 2, -2),
    (5, 7, 8, -2),
    (5, 8, 7, 1),
    (5, 9, 6, -1),
    (6, 7, 0, 2),
    (6, 7, 1, 2),
    (6, 8, 4, 1),
    (6, 9, 5, 1),
    (7, 8, 5, -1),
    (7, 9, 4, 1),
    (8, 9, 0, 2),
];
