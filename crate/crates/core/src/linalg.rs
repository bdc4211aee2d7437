//! Sparse Gaussian elimination over an exact field.
//!
//! Matrices are lists of sparse rows. Elimination is ordinary field
//! elimination with exact arithmetic; pivots are normalised to one and the
//! result is fully reduced.

use crate::scalar::Scalar;

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow = Vec<(usize, Scalar)>;

/// Which nonzero entry of a fresh row becomes its pivot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Pivot {
    /// First nonzero entry in row-major order.
    #[default]
    First,
    /// Last nonzero entry; used to produce a second, different section.
    Last,
}

/// `a + c * b`, keeping the result sparse.
pub fn axpy(a: &SparseRow, c: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale(row: &SparseRow, c: &Scalar) -> SparseRow {
    row.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect()
}

fn entry(row: &SparseRow, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(k, _)| *k).ok().map(|i| &row[i].1)
}

/// Reduced row echelon form of a matrix, optionally with the transform.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<SparseRow>,
    pub pivots: Vec<usize>,
    /// `rows[i] = sum_j transforms[i][j] * input[j]`, when tracked.
    pub transforms: Vec<SparseRow>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn echelon(input: &[SparseRow], pivot: Pivot, track: bool) -> Echelon {
    let mut ech = Echelon { rows: Vec::new(), pivots: Vec::new(), transforms: Vec::new() };
    for (idx, original) in input.iter().enumerate() {
        let mut row = original.clone();
        let mut tr: SparseRow = Vec::new();
        if track {
            if let Some((_, v)) = original.first() {
                tr.push((idx, Scalar::one(v.field())));
            }
        }
        for k in 0..ech.rows.len() {
            if let Some(v) = entry(&row, ech.pivots[k]) {
                let c = v.negate();
                row = axpy(&row, &c, &ech.rows[k]);
                if track {
                    tr = axpy(&tr, &c, &ech.transforms[k]);
                }
            }
        }
        if row.is_empty() {
            continue;
        }
        let (pcol, pval) = match pivot {
            Pivot::First => row[0].clone(),
            Pivot::Last => row[row.len() - 1].clone(),
        };
        let inv = pval.inverse().expect("pivot is nonzero");
        row = scale(&row, &inv);
        if track {
            tr = scale(&tr, &inv);
        }
        for k in 0..ech.rows.len() {
            if let Some(v) = entry(&ech.rows[k], pcol) {
                let c = v.negate();
                ech.rows[k] = axpy(&ech.rows[k], &c, &row);
                if track {
                    ech.transforms[k] = axpy(&ech.transforms[k], &c, &tr);
                }
            }
        }
        ech.rows.push(row);
        ech.pivots.push(pcol);
        if track {
            ech.transforms.push(tr);
        }
    }
    ech
}

pub fn rank(input: &[SparseRow]) -> usize {
    echelon(input, Pivot::First, false).rank()
}

/// Right inverse of a full-row-rank matrix: one sparse column per input row
/// `y`, with `M * col_y = e_y`. `None` when the rows are dependent.
pub fn right_inverse(input: &[SparseRow], pivot: Pivot) -> Option<Vec<SparseRow>> {
    let ech = echelon(input, pivot, true);
    if ech.rank() < input.len() {
        return None;
    }
    let mut cols: Vec<SparseRow> = vec![Vec::new(); input.len()];
    for (i, tr) in ech.transforms.iter().enumerate() {
        for (y, v) in tr {
            cols[*y].push((ech.pivots[i], v.clone()));
        }
    }
    for c in &mut cols {
        c.sort_by_key(|(k, _)| *k);
    }
    Some(cols)
}

/// Basis of the right null space `{v : M v = 0}` over `ncols` unknowns.
pub fn kernel(input: &[SparseRow], ncols: usize, one: &Scalar) -> Vec<SparseRow> {
    let ech = echelon(input, Pivot::First, false);
    let mut is_pivot = vec![false; ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v: SparseRow = vec![(free, one.clone())];
        for (i, row) in ech.rows.iter().enumerate() {
            if let Some(x) = entry(row, free) {
                v.push((ech.pivots[i], x.negate()));
            }
        }
        v.sort_by_key(|(k, _)| *k);
        basis.push(v);
    }
    basis
}

/// Solve `M y = rhs` over `ncols` unknowns. Returns the solution with free
/// unknowns set to zero, plus whether it is unique; `None` if inconsistent.
pub fn solve(input: &[SparseRow], rhs: &[Scalar], ncols: usize) -> Option<(SparseRow, bool)> {
    let aug: Vec<SparseRow> = input
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            if !b.is_zero() {
                row.push((ncols, b.negate()));
            }
            row
        })
        .collect();
    let ech = echelon(&aug, Pivot::First, false);
    if ech.pivots.contains(&ncols) {
        return None;
    }
    let mut y: SparseRow = Vec::new();
    for (i, row) in ech.rows.iter().enumerate() {
        if let Some(c) = entry(row, ncols) {
            y.push((ech.pivots[i], c.negate()));
        }
    }
    y.sort_by_key(|(k, _)| *k);
    Some((y, ech.rank() == ncols))
}

/// `M * v` for sparse `M` given by rows.
pub fn mat_vec(rows: &[SparseRow], v: &SparseRow, zero: &Scalar) -> Vec<Scalar> {
    rows.iter()
        .map(|r| {
            let mut acc = zero.clone();
            for (k, x) in r {
                if let Some(y) = entry(v, *k) {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Rationals, n)
    }

    fn dense_to_rows(m: &[Vec<i64>]) -> Vec<SparseRow> {
        m.iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(k, &x)| (k, q(x))).collect())
            .collect()
    }

    // Independent rank oracle: fraction-free Bareiss elimination on i128.
    fn bareiss_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut rank = 0;
        let mut prev = 1i128;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, p);
            for r in rank + 1..rows {
                for k in c + 1..cols {
                    a[r][k] = (a[r][k] * a[rank][c] - a[r][c] * a[rank][k]) / prev;
                }
                a[r][c] = 0;
            }
            prev = a[rank][c];
            rank += 1;
        }
        rank
    }

    #[test]
    fn group_algebra_multiplication_section() {
        let m = dense_to_rows(&[vec![1, 0, 0, 1], vec![0, 1, 1, 0]]);
        assert_eq!(rank(&m), 2);
        for pivot in [Pivot::First, Pivot::Last] {
            let s = right_inverse(&m, pivot).unwrap();
            for (y, col) in s.iter().enumerate() {
                let img = mat_vec(&m, col, &q(0));
                for (k, v) in img.iter().enumerate() {
                    assert_eq!(v, &q(if k == y { 1 } else { 0 }));
                }
            }
        }
        let a = right_inverse(&m, Pivot::First).unwrap();
        let b = right_inverse(&m, Pivot::Last).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn dependent_rows_have_no_right_inverse() {
        let m = dense_to_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(right_inverse(&m, Pivot::First).is_none());
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = dense_to_rows(&[vec![1, 2, 3, 0], vec![0, 1, 1, 1]]);
        let k = kernel(&m, 4, &q(1));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v, &q(0)).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = dense_to_rows(&[vec![1, 1], vec![1, -1]]);
        let (y, unique) = solve(&m, &[q(3), q(1)], 2).unwrap();
        assert!(unique);
        assert_eq!(y, vec![(0, q(2)), (1, q(1))]);
        let d = dense_to_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(solve(&d, &[q(1), q(3)], 2).is_none());
        assert!(!solve(&d, &[q(1), q(2)], 2).unwrap().1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn rank_matches_bareiss(rows in 1usize..=12, cols in 1usize..=12, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| if rng.gen_bool(0.4) { rng.gen_range(-3..=3) } else { 0 }).collect())
                .collect();
            prop_assert_eq!(rank(&dense_to_rows(&m)), bareiss_rank(&m));
        }
    }
}
