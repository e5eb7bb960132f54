//! Integral lattices, the K3 lattice `L = E₈(−1)² ⊕ U³`, period points and
//! Néron–Severi lattices.
//!
//! The second cohomology of a K3 surface with its cup product is isometric
//! to `L`, an even unimodular lattice of rank 22 and signature `(3, 19)`. A
//! marking identifies the two, and the class of the holomorphic 2-form then
//! becomes a point `ω ∈ P(L ⊗ ℂ)` with `⟨ω, ω⟩ = 0`. The coordinates of `ω`
//! (the periods of the form over a marked basis of 2-cycles) are supplied by
//! the caller as a [`PeriodPoint`]; nothing here integrates over cycles.
//!
//! The Néron–Severi lattice is `ω^⊥ ∩ ω̄^⊥ ∩ L`, and a K3 surface is elliptic
//! with a section exactly when it contains a copy of the hyperbolic plane `U`.

mod exact;
mod hyperbolic;
mod lll;
mod period;
mod relations;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hyperbolic::{contains_hyperbolic_plane, HyperbolicPlaneSearch, Obstruction, DEFAULT_CANDIDATE_BUDGET};
pub use lll::lll_reduce;
pub use period::{neron_severi, NeronSeveri, PeriodPoint, DEFAULT_NS_TOL, DEFAULT_QUADRIC_TOL};
pub use relations::{rationalize, RationalDecomposition, MAX_DENOMINATOR};

/// A free ℤ-module of finite rank with a symmetric integer bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    rank: usize,
    gram: Vec<Vec<i64>>,
}

impl IntegralLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let rank = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidGram(format!("row {i} has length {}, expected {rank}", row.len())));
            }
        }
        for i in 0..rank {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidGram(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(IntegralLattice { rank, gram })
    }

    /// Diagonal lattice `⟨d₁⟩ ⊕ … ⊕ ⟨dₙ⟩`.
    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let gram = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        IntegralLattice { rank: n, gram }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Orthogonal direct sum, `self` first.
    pub fn direct_sum(&self, other: &IntegralLattice) -> IntegralLattice {
        let n = self.rank + other.rank;
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..self.rank {
            gram[i][..self.rank].copy_from_slice(&self.gram[i]);
        }
        for i in 0..other.rank {
            gram[self.rank + i][self.rank..].copy_from_slice(&other.gram[i]);
        }
        IntegralLattice { rank: n, gram }
    }

    /// Even diagonal implies `⟨v, v⟩ ∈ 2ℤ` for every `v`.
    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// Exact determinant of the Gram matrix.
    pub fn determinant(&self) -> BigInt {
        exact::determinant(&self.gram)
    }

    /// `(positive, negative, zero)` eigenvalue counts, computed exactly.
    pub fn inertia(&self) -> (usize, usize, usize) {
        exact::inertia(&self.gram)
    }

    /// `(p, q)` for a nondegenerate lattice.
    pub fn signature(&self) -> Result<(usize, usize)> {
        match self.inertia() {
            (p, q, 0) => Ok((p, q)),
            _ => Err(Error::DegenerateGram),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == self.rank {
            Ok(())
        } else {
            Err(Error::LengthMismatch { rank: self.rank, found: n })
        }
    }

    /// `vᵀ G w`.
    pub fn pairing(&self, v: &[i64], w: &[i64]) -> Result<i64> {
        self.check_len(v.len())?;
        self.check_len(w.len())?;
        let value = self.pairing_wide(v, w);
        value.to_i64().ok_or_else(|| Error::InvalidParameter("pairing overflows i64".into()))
    }

    pub(crate) fn pairing_wide(&self, v: &[i64], w: &[i64]) -> i128 {
        let mut s = 0i128;
        for i in 0..self.rank {
            if v[i] == 0 {
                continue;
            }
            let gw: i128 = self.gram[i].iter().zip(w).map(|(&g, &x)| g as i128 * x as i128).sum();
            s += v[i] as i128 * gw;
        }
        s
    }

    /// `G v`.
    pub(crate) fn apply(&self, v: &[i64]) -> Vec<i128> {
        self.gram.iter().map(|row| row.iter().zip(v).map(|(&g, &x)| g as i128 * x as i128).sum()).collect()
    }

    /// Bilinear (not sesquilinear) extension to `L ⊗ ℂ`.
    pub fn pairing_c(&self, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                let g = self.gram[i][j];
                if g != 0 {
                    s += g as f64 * x[i] * y[j];
                }
            }
        }
        Ok(s)
    }

    /// Gram matrix of the sublattice spanned by `basis`.
    pub fn restrict(&self, basis: &[Vec<i64>]) -> Result<IntegralLattice> {
        let mut gram = vec![vec![0i64; basis.len()]; basis.len()];
        for (i, v) in basis.iter().enumerate() {
            for (j, w) in basis.iter().enumerate().take(i + 1) {
                let p = self.pairing(v, w)?;
                gram[i][j] = p;
                gram[j][i] = p;
            }
        }
        Ok(IntegralLattice { rank: basis.len(), gram })
    }
}

impl fmt::Display for IntegralLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.rank)?;
        for row in &self.gram {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GramRepr {
    Flat(Vec<i64>),
    Nested(Vec<Vec<i64>>),
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    rank: usize,
    gram: GramRepr,
}

impl Serialize for IntegralLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat = self.gram.iter().flatten().copied().collect();
        LatticeRepr { rank: self.rank, gram: GramRepr::Flat(flat) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegralLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LatticeRepr::deserialize(d)?;
        let gram = match repr.gram {
            GramRepr::Nested(rows) => rows,
            GramRepr::Flat(flat) => {
                if flat.len() != repr.rank * repr.rank {
                    return Err(D::Error::custom(format!(
                        "gram has {} entries, expected {}",
                        flat.len(),
                        repr.rank * repr.rank
                    )));
                }
                flat.chunks(repr.rank.max(1)).map(|c| c.to_vec()).collect()
            }
        };
        if gram.len() != repr.rank {
            return Err(D::Error::custom("gram size does not match rank"));
        }
        IntegralLattice::new(gram).map_err(D::Error::custom)
    }
}

/// The hyperbolic plane, Gram `[[0, 1], [1, 0]]`.
pub fn lattice_u() -> IntegralLattice {
    IntegralLattice { rank: 2, gram: vec![vec![0, 1], vec![1, 0]] }
}

/// Edges of the E₈ Dynkin diagram in Bourbaki numbering (0-based): the chain
/// 1–3–4–5–6–7–8 with 2 attached to 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

/// Negative of the E₈ Cartan matrix: diagonal −2, +1 on Dynkin edges.
pub fn lattice_e8_minus() -> IntegralLattice {
    let mut gram = vec![vec![0i64; 8]; 8];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(i, j) in &E8_EDGES {
        gram[i][j] = 1;
        gram[j][i] = 1;
    }
    IntegralLattice { rank: 8, gram }
}

/// `E₈(−1) ⊕ E₈(−1) ⊕ U ⊕ U ⊕ U`, in that order (coordinates 0–7, 8–15,
/// then the U blocks at 16–17, 18–19, 20–21).
pub fn lattice_l() -> IntegralLattice {
    let e8 = lattice_e8_minus();
    let u = lattice_u();
    e8.direct_sum(&e8).direct_sum(&u).direct_sum(&u).direct_sum(&u)
}

/// Offset of the `k`-th U block (0, 1, 2) inside [`lattice_l`].
pub fn l_u_block(k: usize) -> usize {
    16 + 2 * k
}
