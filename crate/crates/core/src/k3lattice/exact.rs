//! Exact integer and rational linear algebra on small matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Counts `(positive, negative, zero)` of a congruence diagonalization of the
/// symmetric matrix over ℚ (Sylvester's law of inertia).
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> =
        m.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        // pivot on a nonzero diagonal entry, creating one if necessary
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                swap_sym(&mut a, i, k);
            } else if let Some((i, j)) =
                (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
            {
                // replace e_i by e_i + e_j: new diagonal 2 a_ij (all diagonals here vanish)
                add_sym(&mut a, i, j);
                swap_sym(&mut a, i, k);
            } else {
                break;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let v = &a[k][j] * &f;
                a[i][j] -= v;
            }
            for j in k..n {
                let v = &a[j][k] * &f;
                a[j][i] -= v;
            }
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

fn swap_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Row/column operation `e_i ← e_i + e_j`.
fn add_sym(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for c in 0..n {
        let v = a[j][c].clone();
        a[i][c] += v;
    }
    for r in 0..n {
        let v = a[r][j].clone();
        a[r][i] += v;
    }
}

/// A ℤ-basis of `{v ∈ ℤⁿ : A v = 0}` for an integer matrix with `n` columns.
///
/// Column operations bring `A` to echelon form `A U = [H | 0]` with `U`
/// unimodular; the columns of `U` over the zero block form a basis of the
/// kernel, which is therefore saturated in ℤⁿ.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let r = rows.len();
    // column-major copies
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|j| (0..r).map(|i| rows[i][j].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivot = 0;
    for i in 0..r {
        if pivot >= n {
            break;
        }
        loop {
            let best = (pivot..n).filter(|&j| !a[j][i].is_zero()).min_by(|&x, &y| a[x][i].abs().cmp(&a[y][i].abs()));
            let Some(j) = best else { break };
            a.swap(pivot, j);
            u.swap(pivot, j);
            let mut clean = true;
            for j in pivot + 1..n {
                if a[j][i].is_zero() {
                    continue;
                }
                let q = a[j][i].div_floor(&a[pivot][i]);
                let (head, tail) = a.split_at_mut(j);
                for (x, y) in tail[0].iter_mut().zip(&head[pivot]) {
                    *x -= &q * y;
                }
                let (uh, ut) = u.split_at_mut(j);
                for (x, y) in ut[0].iter_mut().zip(&uh[pivot]) {
                    *x -= &q * y;
                }
                if !a[j][i].is_zero() {
                    clean = false;
                }
            }
            if clean {
                pivot += 1;
                break;
            }
        }
    }
    u.split_off(pivot)
}

/// Rank over ℚ.
#[cfg(test)]
pub fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[rank][c];
                for j in c..cols {
                    let v = &a[rank][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Clears denominators of a rational row.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// `(g, x)` with `Σ xᵢ vᵢ = g = gcd(v)`, `g ≥ 0`.
pub fn extended_gcd_vec(v: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coeffs = vec![0i64; v.len()];
    for (i, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        if g == 0 {
            g = x.abs();
            coeffs[i] = x.signum();
            continue;
        }
        let e = g.extended_gcd(&x);
        // e.gcd = e.x * g + e.y * x
        for c in coeffs.iter_mut() {
            *c *= e.x;
        }
        coeffs[i] = e.y;
        g = e.gcd;
        if g < 0 {
            g = -g;
            for c in coeffs.iter_mut() {
                *c = -*c;
            }
        }
    }
    (g, coeffs)
}
