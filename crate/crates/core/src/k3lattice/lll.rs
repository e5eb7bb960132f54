//! Lenstra–Lenstra–Lovász reduction in floating point.

const MAX_SWAPS: usize = 200_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { dot(&b[i], &star[j]) / norms[j] } else { 0.0 };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

/// Reduces the rows of `basis` in place with Lovász constant `delta`.
///
/// Only integer combinations of rows are ever formed, so rows with integer
/// entries below 2⁵³ stay exactly integral. Returns `false` if the swap
/// budget ran out (the basis is still a basis of the same lattice).
pub fn lll_reduce(basis: &mut [Vec<f64>], delta: f64) -> bool {
    let n = basis.len();
    if n < 2 {
        return true;
    }
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut swaps = 0;
    while k < n {
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let (head, tail) = basis.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= q * y;
                }
                for l in 0..j {
                    mu[k][l] -= q * mu[j][l];
                }
                mu[k][j] -= q;
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            swaps += 1;
            if swaps > MAX_SWAPS {
                return false;
            }
            let (m, nn) = gram_schmidt(basis);
            mu = m;
            norms = nn;
            k = (k - 1).max(1);
        }
    }
    true
}

/// LLL on integer row vectors, skipped when entries are too large for exact
/// floating-point arithmetic.
pub(crate) fn lll_reduce_integer(basis: &mut Vec<Vec<i64>>) {
    const LIMIT: i64 = 1 << 40;
    if basis.iter().flatten().any(|x| x.abs() > LIMIT) {
        return;
    }
    let mut rows: Vec<Vec<f64>> = basis.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    lll_reduce(&mut rows, 0.99);
    if rows.iter().flatten().any(|x| x.abs() > LIMIT as f64) {
        return;
    }
    *basis = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_skewed_basis() {
        let mut b = vec![vec![1.0, 0.0, 0.0], vec![4.0, 1.0, 0.0], vec![17.0, 9.0, 1.0]];
        assert!(lll_reduce(&mut b, 0.99));
        for row in &b {
            assert!(dot(row, row) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn finds_integer_relation() {
        let x = [1.0, std::f64::consts::SQRT_2, 3.0 - 2.0 * std::f64::consts::SQRT_2];
        let k = 1e12;
        let mut b: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                let mut r = vec![0.0; 4];
                r[i] = 1.0;
                r[3] = k * x[i];
                r
            })
            .collect();
        lll_reduce(&mut b, 0.99);
        let c = &b[0];
        let c: Vec<f64> = if c[0] < 0.0 { c.iter().map(|v| -v).collect() } else { c.clone() };
        assert_eq!(&c[..3], &[3.0, -2.0, -1.0]);
    }
}
