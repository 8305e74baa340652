//! Exact rational geometry: affine independence and convex-hull intersection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Mersenne prime used for the fast modular rank test.
const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Residue of an integer modulo [`PRIME`].
pub(crate) fn residue(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let mut r = x % &p;
    if r.is_negative() {
        r += &p;
    }
    r.to_u64().expect("residue below the modulus")
}

/// Residues of an integral point, `None` if any coordinate has a denominator.
pub(crate) fn residues(point: &[BigRational]) -> Option<Vec<u64>> {
    point.iter().map(|x| x.is_integer().then(|| residue(x.numer()))).collect()
}

pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], PRIME - 2);
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = mul_mod(rows[r][col], inv);
            for c in col..cols {
                let sub = mul_mod(factor, rows[rank][c]);
                rows[r][c] = (rows[r][c] + PRIME - sub) % PRIME;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub(crate) fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &rows[rank][col];
            for c in col..cols {
                let sub = &factor * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Whether the points are affinely independent. `fast` holds optional
/// residues of the same points; a full modular rank settles the question
/// without rational arithmetic.
pub(crate) fn affinely_independent(points: &[&[BigRational]], fast: Option<&[&[u64]]>) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let dim = points[0].len();
    if points.len() > dim + 1 {
        return false;
    }
    if let Some(res) = fast {
        let rows = res[1..]
            .iter()
            .map(|p| p.iter().zip(res[0]).map(|(&x, &o)| (x + PRIME - o) % PRIME).collect())
            .collect();
        if rank_mod_p(rows) == points.len() - 1 {
            return true;
        }
    }
    let rows = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0]).map(|(x, o)| x - o).collect())
        .collect();
    rational_rank(rows) == points.len() - 1
}

/// Exact test of `conv(a) ∩ conv(b) ≠ ∅` by a phase-one simplex with Bland's rule.
pub(crate) fn hulls_intersect(a: &[&[BigRational]], b: &[&[BigRational]]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let dim = a[0].len();
    let nvar = a.len() + b.len();
    let rows = dim + 2;
    let width = nvar + rows + 1;
    let zero = BigRational::zero();
    let one = BigRational::one();

    // rows: coordinates of sum(l_i a_i) - sum(m_j b_j) = 0, then sum(l) = 1, sum(m) = 1
    let mut t = vec![vec![zero.clone(); width]; rows];
    for k in 0..dim {
        for (i, p) in a.iter().enumerate() {
            t[k][i] = p[k].clone();
        }
        for (j, q) in b.iter().enumerate() {
            t[k][a.len() + j] = -q[k].clone();
        }
    }
    for i in 0..a.len() {
        t[dim][i] = one.clone();
    }
    for j in 0..b.len() {
        t[dim + 1][a.len() + j] = one.clone();
    }
    t[dim][width - 1] = one.clone();
    t[dim + 1][width - 1] = one.clone();
    for (r, row) in t.iter_mut().enumerate() {
        row[nvar + r] = one.clone();
    }
    let mut basis: Vec<usize> = (nvar..nvar + rows).collect();

    let mut cost = vec![zero.clone(); width];
    for row in &t {
        for c in 0..nvar {
            cost[c] -= &row[c];
        }
        cost[width - 1] -= &row[width - 1];
    }

    loop {
        let Some(enter) = (0..nvar + rows).find(|&c| cost[c].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..rows {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][width - 1] / &t[r][enter];
            let better = match &leave {
                None => true,
                Some((best, q)) => ratio < *q || (ratio == *q && basis[r] < basis[*best]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pr, _)) = leave else { break };

        let pivot = t[pr][enter].clone();
        for c in 0..width {
            t[pr][c] = &t[pr][c] / &pivot;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r == pr || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for c in 0..width {
                row[c] -= &f * &pivot_row[c];
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for c in 0..width {
                cost[c] -= &f * &pivot_row[c];
            }
        }
        basis[pr] = enter;
    }
    cost[width - 1].is_zero()
}
