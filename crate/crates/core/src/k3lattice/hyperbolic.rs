use serde::{Deserialize, Serialize};

use super::exact::{extended_gcd_vec, integer_kernel, to_i64_vec};
use super::lll::lll_reduce_integer;
use super::IntegralLattice;

/// Default cap on the number of candidate vectors `e` examined.
pub const DEFAULT_CANDIDATE_BUDGET: usize = 5_000_000;

const SHRINK_ROUNDS: usize = 1000;

/// Why a lattice cannot contain `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// `U` has rank 2.
    RankBelowTwo { rank: usize },
    /// `U` contains vectors of both signs (`e + f` and `e − f`).
    Semidefinite { positive: usize, negative: usize, zero: usize },
}

/// Outcome of a bounded search for `e, f` with `e² = f² = 0`, `e·f = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HyperbolicPlaneSearch {
    Found { e: Vec<i64>, f: Vec<i64> },
    /// Nothing in the coordinate box; this proves nothing about larger vectors.
    /// `exhaustive` is false if the candidate budget ran out first.
    NotFoundUpToBound { bound: i64, candidates: usize, exhaustive: bool },
    Obstructed { reason: Obstruction },
}

impl HyperbolicPlaneSearch {
    pub fn plane(&self) -> Option<(&[i64], &[i64])> {
        match self {
            HyperbolicPlaneSearch::Found { e, f } => Some((e, f)),
            _ => None,
        }
    }
}

/// Searches for a hyperbolic plane with coordinates in `[−bound, bound]`.
///
/// Candidates `e` are enumerated by increasing support size, then by support,
/// then by coefficients; for each primitive isotropic `e` with `G e`
/// primitive, `f` solves `⟨e, f⟩ = 1` by an extended gcd, is shortened by
/// vectors orthogonal to `e`, and is made isotropic by subtracting
/// `(⟨f, f⟩/2)·e`.
pub fn contains_hyperbolic_plane(lattice: &IntegralLattice, bound: i64) -> HyperbolicPlaneSearch {
    contains_hyperbolic_plane_with_budget(lattice, bound, DEFAULT_CANDIDATE_BUDGET)
}

pub fn contains_hyperbolic_plane_with_budget(
    lattice: &IntegralLattice,
    bound: i64,
    budget: usize,
) -> HyperbolicPlaneSearch {
    let n = lattice.rank();
    if n < 2 {
        return HyperbolicPlaneSearch::Obstructed { reason: Obstruction::RankBelowTwo { rank: n } };
    }
    let (positive, negative, zero) = lattice.inertia();
    if positive == 0 || negative == 0 {
        return HyperbolicPlaneSearch::Obstructed { reason: Obstruction::Semidefinite { positive, negative, zero } };
    }
    let bound = bound.max(1);
    let g = lattice.gram();
    let mut candidates = 0usize;
    for support in 1..=n {
        let mut idx: Vec<usize> = (0..support).collect();
        loop {
            // coefficient odometer: first entry in 1..=bound, others in ±1..=bound
            let mut coeff = vec![1i64; support];
            if support > 1 {
                coeff[1..].iter_mut().for_each(|c| *c = -bound);
            }
            loop {
                candidates += 1;
                if candidates > budget {
                    return HyperbolicPlaneSearch::NotFoundUpToBound { bound, candidates: budget, exhaustive: false };
                }
                let mut norm = 0i128;
                for (a, &i) in idx.iter().enumerate() {
                    for (b, &j) in idx.iter().enumerate() {
                        norm += coeff[a] as i128 * coeff[b] as i128 * g[i][j] as i128;
                    }
                }
                if norm == 0 && gcd_all(&coeff) == 1 {
                    let mut e = vec![0i64; n];
                    for (a, &i) in idx.iter().enumerate() {
                        e[i] = coeff[a];
                    }
                    if let Some(f) = partner(lattice, &e, bound) {
                        return HyperbolicPlaneSearch::Found { e, f };
                    }
                }
                if !advance(&mut coeff, bound) {
                    break;
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    HyperbolicPlaneSearch::NotFoundUpToBound { bound, candidates, exhaustive: true }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |a, &b| num_integer::gcd(a, b))
}

fn advance(coeff: &mut [i64], bound: i64) -> bool {
    for k in (0..coeff.len()).rev() {
        let lo = if k == 0 { 1 } else { -bound };
        let mut next = coeff[k] + 1;
        if next == 0 {
            next = 1;
        }
        if next <= bound {
            coeff[k] = next;
            return true;
        }
        coeff[k] = lo;
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn max_abs(v: &[i64]) -> i64 {
    v.iter().map(|x| x.abs()).max().unwrap_or(0)
}

fn sq(v: &[i64]) -> i128 {
    v.iter().map(|&x| x as i128 * x as i128).sum()
}

fn add(a: &[i64], b: &[i64], k: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

/// An isotropic `f` with `⟨e, f⟩ = 1` inside the box, if one is found.
fn partner(lattice: &IntegralLattice, e: &[i64], bound: i64) -> Option<Vec<i64>> {
    let ge: Vec<i64> = lattice.apply(e).into_iter().map(|x| x as i64).collect();
    let (d, x) = extended_gcd_vec(&ge);
    if d != 1 {
        return None;
    }
    let row: Vec<num_bigint::BigInt> = ge.iter().map(|&v| v.into()).collect();
    let mut perp: Vec<Vec<i64>> = integer_kernel(&[row], ge.len()).iter().filter_map(|v| to_i64_vec(v)).collect();
    lll_reduce_integer(&mut perp);

    let mut f = babai(&x, &perp);
    if lattice.pairing_wide(&f, &f) % 2 != 0 {
        let odd = perp.iter().find(|u| lattice.pairing_wide(u, u) % 2 != 0)?;
        f = add(&f, odd, 1);
    }
    let mut f = isotropic(lattice, e, &f)?;
    // shorten by even-norm vectors of e^⊥, keeping f isotropic
    let even: Vec<&Vec<i64>> = perp.iter().filter(|u| lattice.pairing_wide(u, u) % 2 == 0).collect();
    for _ in 0..SHRINK_ROUNDS {
        let mut best = (max_abs(&f), sq(&f));
        let mut next = None;
        for u in &even {
            for k in [-1, 1] {
                if let Some(c) = isotropic(lattice, e, &add(&f, u, k)) {
                    let key = (max_abs(&c), sq(&c));
                    if key < best {
                        best = key;
                        next = Some(c);
                    }
                }
            }
        }
        match next {
            Some(c) => f = c,
            None => break,
        }
    }
    (max_abs(&f) <= bound).then_some(f)
}

/// `f − (⟨f, f⟩/2)·e`, isotropic when `⟨e, e⟩ = 0` and `⟨e, f⟩ = 1`.
fn isotropic(lattice: &IntegralLattice, e: &[i64], f: &[i64]) -> Option<Vec<i64>> {
    let n = lattice.pairing_wide(f, f);
    if n % 2 != 0 {
        return None;
    }
    let k = i64::try_from(n / 2).ok()?;
    let out: Option<Vec<i64>> = f.iter().zip(e).map(|(&a, &b)| a.checked_sub(k.checked_mul(b)?)).collect();
    out
}

/// Babai rounding of `x` against the row lattice `basis` in the Euclidean norm.
fn babai(x: &[i64], basis: &[Vec<i64>]) -> Vec<i64> {
    let n = basis.len();
    let rows: Vec<Vec<f64>> = basis.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = rows[i].clone();
        for s in &star {
            let ss: f64 = s.iter().map(|a| a * a).sum();
            if ss > 0.0 {
                let m: f64 = rows[i].iter().zip(s).map(|(a, b)| a * b).sum::<f64>() / ss;
                v.iter_mut().zip(s).for_each(|(a, b)| *a -= m * b);
            }
        }
        star.push(v);
    }
    let mut out = x.to_vec();
    for j in (0..n).rev() {
        let ss: f64 = star[j].iter().map(|a| a * a).sum();
        if ss == 0.0 {
            continue;
        }
        let c = (out.iter().zip(&star[j]).map(|(&a, b)| a as f64 * b).sum::<f64>() / ss).round() as i64;
        if c != 0 {
            out = add(&out, &basis[j], -c);
        }
    }
    out
}
