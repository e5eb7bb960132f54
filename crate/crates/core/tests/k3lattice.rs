use k3vol::k3lattice::{
    contains_hyperbolic_plane, lattice_e8_minus, lattice_l, lattice_u, l_u_block, neron_severi, IntegralLattice,
    PeriodPoint, DEFAULT_NS_TOL,
};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_matrix(l: &IntegralLattice) -> DMatrix<f64> {
    let n = l.rank();
    DMatrix::from_fn(n, n, |i, j| l.gram()[i][j] as f64)
}

fn eigen_signature(l: &IntegralLattice) -> (usize, usize) {
    let eig = SymmetricEigen::new(to_matrix(l));
    let p = eig.eigenvalues.iter().filter(|&&x| x > 1e-9).count();
    let q = eig.eigenvalues.iter().filter(|&&x| x < -1e-9).count();
    (p, q)
}

fn float_rank(rows: &[Vec<f64>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
    m.svd(false, false).singular_values.iter().filter(|&&s| s > 1e-9).count()
}

#[test]
fn signatures_match_eigenvalues() {
    for l in [lattice_u(), lattice_e8_minus(), lattice_l()] {
        assert_eq!(l.signature().unwrap(), eigen_signature(&l));
    }
    assert_eq!(eigen_signature(&lattice_l()), (3, 19));
    let det = to_matrix(&lattice_l()).determinant();
    assert!((det + 1.0).abs() < 1e-6, "{det}");
}

fn small_lattice() -> impl Strategy<Value = IntegralLattice> {
    (1usize..5).prop_flat_map(|n| {
        prop::collection::vec(-4i64..=4, n * n).prop_map(move |raw| {
            let gram = (0..n).map(|i| (0..n).map(|j| raw[i.min(j) * n + i.max(j)]).collect()).collect();
            IntegralLattice::new(gram).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn inertia_is_additive(a in small_lattice(), b in small_lattice()) {
        let (pa, qa, za) = a.inertia();
        let (pb, qb, zb) = b.inertia();
        prop_assert_eq!(a.direct_sum(&b).inertia(), (pa + pb, qa + qb, za + zb));
        if za == 0 {
            prop_assert_eq!(a.signature().unwrap(), eigen_signature(&a));
        }
    }
}

fn constraint_rows(omega: &[Complex64]) -> Vec<Vec<f64>> {
    let l = lattice_l();
    let gre: Vec<f64> = (0..22).map(|i| (0..22).map(|j| l.gram()[i][j] as f64 * omega[j].re).sum()).collect();
    let gim: Vec<f64> = (0..22).map(|i| (0..22).map(|j| l.gram()[i][j] as f64 * omega[j].im).sum()).collect();
    vec![gre, gim]
}

#[test]
fn ns_of_e1_plus_i_e2_has_rank_20() {
    let mut x = vec![0i64; 22];
    let mut y = vec![0i64; 22];
    x[l_u_block(0)] = 1;
    x[l_u_block(0) + 1] = 1;
    y[l_u_block(1)] = 1;
    y[l_u_block(1) + 1] = 1;
    let p = PeriodPoint::from_integer_parts(&x, &y).unwrap();
    let ns = neron_severi(&p, DEFAULT_NS_TOL).unwrap();

    // oracle: kernel dimension of the 2×22 constraint matrix
    let rows = constraint_rows(p.omega());
    assert_eq!(22 - float_rank(&rows, 22), 20);
    assert_eq!(ns.rank(), 20);
    let basis: Vec<Vec<f64>> = ns.basis.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect();
    assert_eq!(float_rank(&basis, 22), 20);
    for v in &ns.basis {
        for r in &rows {
            let d: f64 = r.iter().zip(v).map(|(a, &b)| a * b as f64).sum();
            assert_eq!(d, 0.0);
        }
    }

    // it contains the third copy of U
    let plane = contains_hyperbolic_plane(&ns.lattice, 2);
    let (e, f) = plane.plane().expect("U inside NS");
    let l = lattice_l();
    let lift = |c: &[i64]| -> Vec<i64> {
        (0..22).map(|i| c.iter().zip(&ns.basis).map(|(&a, v)| a * v[i]).sum()).collect()
    };
    let (e, f) = (lift(e), lift(f));
    assert_eq!(l.pairing(&e, &e).unwrap(), 0);
    assert_eq!(l.pairing(&f, &f).unwrap(), 0);
    assert_eq!(l.pairing(&e, &f).unwrap(), 1);
}

#[test]
fn generic_period_has_trivial_ns() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let omega: Vec<Complex64> =
            (0..22).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let ns = neron_severi(&PeriodPoint::new(omega).unwrap(), DEFAULT_NS_TOL).unwrap();
        assert_eq!(ns.rank(), 0);
    }
}

#[test]
fn ns_contains_chosen_vector() {
    // ω supported on a few coordinates of the first E₈(−1), made orthogonal
    // to v₀ by solving for one coordinate
    let l = lattice_l();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v0 = {
        let mut v = vec![0i64; 22];
        v[0] = 1;
        v[2] = 1;
        v
    };
    let g: Vec<i64> = (0..22).map(|i| (0..22).map(|j| l.gram()[i][j] * v0[j]).sum()).collect();
    for _ in 0..5 {
        let mut omega = vec![Complex64::new(0.0, 0.0); 22];
        for &i in &[0usize, 2, 3, 17] {
            omega[i] = Complex64::new(rng.gen_range(0.2..1.0), rng.gen_range(0.2..1.0));
        }
        // g·ω = −ω₀ − ω₂ + ω₃ over the support; solve for ω₃
        let partial: Complex64 = (0..22).filter(|&i| i != 3).map(|i| g[i] as f64 * omega[i]).sum();
        omega[3] = -partial / g[3] as f64;
        let p = PeriodPoint::new(omega).unwrap();
        let ns = neron_severi(&p, DEFAULT_NS_TOL).unwrap();
        let basis: Vec<Vec<f64>> = ns.basis.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect();
        let mut with_v0 = basis.clone();
        with_v0.push(v0.iter().map(|&x| x as f64).collect());
        assert!(ns.rank() >= 1);
        assert_eq!(float_rank(&with_v0, 22), float_rank(&basis, 22), "v0 not in NS");
        assert!(ns.max_residual <= 1e-12);
    }
}
