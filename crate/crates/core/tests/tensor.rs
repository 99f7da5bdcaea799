use exgamble::linalg::{c64, from_row_major, identity, max_abs, max_abs_diff};
use exgamble::sampling::{haar_product_state, haar_vector, rng_from_seed};
use exgamble::*;
use nalgebra::DMatrix;

fn shapes() -> Vec<SystemShape> {
    let mut v = Vec::new();
    for n in [2, 3] {
        for m in [2, 3] {
            v.push(SystemShape::new(n, m).unwrap());
        }
    }
    v
}

/// Entry (r, c) of P_π is 1 exactly when the digits of r are those of c
/// reordered by π: r_j = c_{π(j)}.
fn index_oracle(p: &Permutation, shape: SystemShape) -> ComplexMatrix {
    let dim = shape.dim();
    ComplexMatrix::from_fn(dim, dim, |r, c| {
        let dr = shape.digits(r);
        let dc = shape.digits(c);
        let hit = (0..shape.m()).all(|j| dr[j] == dc[p.mapping()[j]]);
        c64(if hit { 1.0 } else { 0.0 }, 0.0)
    })
}

#[test]
fn permutation_operator_matches_index_formula() {
    for shape in shapes() {
        for (p, _) in all_permutations(shape.m()).unwrap() {
            assert_eq!(permutation_operator(&p, shape).unwrap(), index_oracle(&p, shape));
        }
    }
}

#[test]
fn sign_matches_determinant() {
    for m in 1..=5 {
        for (p, sign) in all_permutations(m).unwrap() {
            let det = DMatrix::<f64>::from_fn(m, m, |i, j| if p.mapping()[i] == j { 1.0 } else { 0.0 }).determinant();
            assert_eq!(det.round() as i8, sign);
            assert_eq!(p.sign(), sign);
        }
    }
}

#[test]
fn enumeration_is_complete_and_distinct() {
    for m in 1..=6 {
        let perms = all_permutations(m).unwrap();
        let expected: usize = (1..=m).product();
        assert_eq!(perms.len(), expected);
        let mut seen: Vec<Vec<usize>> = perms.iter().map(|(p, _)| p.mapping().to_vec()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), expected);
    }
}

#[test]
fn operator_permutes_random_product_states() {
    let mut rng = rng_from_seed(17);
    for shape in shapes() {
        let perms = all_permutations(shape.m()).unwrap();
        for k in 0..50 {
            let s = haar_product_state(shape, &mut rng);
            let (p, _) = &perms[k % perms.len()];
            let lhs = permutation_operator(p, shape).unwrap() * s.vector();
            let rhs = s.permuted(p).unwrap().vector();
            assert!((lhs - rhs).camax() < 1e-14);
        }
    }
}

#[test]
fn composition_is_a_homomorphism() {
    for shape in shapes() {
        let perms = all_permutations(shape.m()).unwrap();
        for (a, sa) in &perms {
            for (b, sb) in &perms {
                let ab = a.compose(b).unwrap();
                let lhs = permutation_operator(&ab, shape).unwrap();
                let rhs = permutation_operator(a, shape).unwrap() * permutation_operator(b, shape).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(ab.sign(), sa * sb);
            }
        }
    }
}

#[test]
fn projector_algebra_and_permutation_absorption() {
    for shape in shapes() {
        let sym = symmetrizer(shape, StarFlag::Sym).unwrap();
        let anti = symmetrizer(shape, StarFlag::Anti).unwrap();
        for p in [&sym, &anti] {
            assert!(max_abs_diff(&(p * p), p) < 1e-10);
            assert!(max_abs_diff(&p.adjoint(), p) < 1e-10);
        }
        assert!(max_abs(&(&sym * &anti)) < 1e-10);
        for (perm, sign) in all_permutations(shape.m()).unwrap() {
            let op = permutation_operator(&perm, shape).unwrap();
            assert!(max_abs_diff(&(&op * &sym), &sym) < 1e-10);
            assert!(max_abs_diff(&(&op * &anti), &(&anti * c64(f64::from(sign), 0.0))) < 1e-10);
        }
    }
}

fn m4(v: [f64; 16]) -> ComplexMatrix {
    let e: Vec<_> = v.iter().map(|&x| c64(x, 0.0)).collect();
    from_row_major(4, 4, &e).unwrap()
}

#[test]
fn two_qubit_golden_matrices() {
    let shape = SystemShape::new(2, 2).unwrap();
    let swap = Permutation::transposition(2, 0, 1).unwrap();
    let pb = m4([1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.]);
    assert_eq!(permutation_operator(&swap, shape).unwrap(), pb);
    assert_eq!(swap.sign(), -1);
    let sym = m4([1., 0., 0., 0., 0., 0.5, 0.5, 0., 0., 0.5, 0.5, 0., 0., 0., 0., 1.]);
    let anti = m4([0., 0., 0., 0., 0., 0.5, -0.5, 0., 0., -0.5, 0.5, 0., 0., 0., 0., 0.]);
    assert_eq!(symmetrizer(shape, StarFlag::Sym).unwrap(), sym);
    assert_eq!(symmetrizer(shape, StarFlag::Anti).unwrap(), anti);
    assert_eq!(sym, (identity(4) + &pb) * c64(0.5, 0.0));
    assert_eq!(anti, (identity(4) - &pb) * c64(0.5, 0.0));
}

#[test]
fn projected_product_components() {
    let shape = SystemShape::new(2, 2).unwrap();
    let mut rng = rng_from_seed(2);
    let sym = symmetrizer(shape, StarFlag::Sym).unwrap();
    let anti = symmetrizer(shape, StarFlag::Anti).unwrap();
    for _ in 0..20 {
        let a = haar_vector(2, &mut rng);
        let b = haar_vector(2, &mut rng);
        let z = a.kronecker(&b);
        let mixed = (a[0] * b[1] + a[1] * b[0]) / 2.0;
        let wedge = (a[0] * b[1] - a[1] * b[0]) / 2.0;
        let s = &sym * &z;
        let t = &anti * &z;
        let zero = c64(0.0, 0.0);
        for (got, want) in s.iter().zip([a[0] * b[0], mixed, mixed, a[1] * b[1]]) {
            assert!((got - want).norm() < 1e-15);
        }
        for (got, want) in t.iter().zip([zero, wedge, -wedge, zero]) {
            assert!((got - want).norm() < 1e-15);
        }
    }
}

#[test]
fn pauli_exclusion() {
    let shape = SystemShape::new(2, 2).unwrap();
    let anti = symmetrizer(shape, StarFlag::Anti).unwrap();
    let mut rng = rng_from_seed(100);
    for _ in 0..100 {
        let a = haar_vector(2, &mut rng);
        assert!((&anti * a.kronecker(&a)).camax() < 1e-12);
    }
}

#[test]
fn too_many_particles_for_enumeration() {
    assert!(matches!(all_permutations(9), Err(Error::TooManyParticles { m: 9, .. })));
}
