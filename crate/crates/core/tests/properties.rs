use goldman_core::algebra::{bracket, in_gk, k_map, AlgebraVector};
use goldman_core::complex::{boundary, evaluate, coboundary, grading, is_derived_chain, project_derived, Cochain, Wedge, WedgeChain};
use goldman_core::linalg::{q, q_frac, Solution, SparseRationalMatrix, Q};
use goldman_core::sample::{random_element, random_spec};
use goldman_core::verify::axioms::k_bracket_counterexample;
use goldman_core::verify::homotopy::{contracting_elements, contracting_homotopy};
use goldman_core::verify::ideal::ideal_generator;
use goldman_core::verify::quotient::{f_map, g_map, ExteriorVector, QuotientTensorSpace};
use goldman_core::{AbelianGroup, GroupElement, GroupSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn setup(seed: u64) -> (AbelianGroup, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = AbelianGroup::new(random_spec(&mut rng));
    (h, rng)
}

fn add(h: &AbelianGroup, a: &GroupElement, b: &GroupElement) -> GroupElement {
    h.add(a, b).unwrap()
}

fn sub(h: &AbelianGroup, a: &GroupElement, b: &GroupElement) -> GroupElement {
    h.add(a, &h.neg(b).unwrap()).unwrap()
}

fn mul(h: &AbelianGroup, k: i64, a: &GroupElement) -> GroupElement {
    h.scalar_mul(k, a).unwrap()
}

fn single(rng: &mut ChaCha8Rng, h: &AbelianGroup) -> AlgebraVector {
    AlgebraVector::term(random_element(rng, h, 3), q_frac(rng.gen_range(1..=5), rng.gen_range(1..=3)))
}

fn br(h: &AbelianGroup, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
    bracket(h, a, b).unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, h: &AbelianGroup, p: usize, radius: i64) -> Option<WedgeChain> {
    let f: Vec<GroupElement> = (0..p).map(|_| random_element(rng, h, radius)).collect();
    Wedge::from_unsorted(f).map(|(w, _)| WedgeChain::from_wedge(w, q(1)))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> SparseRationalMatrix {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|_| (0..c).map(|_| if rng.gen_bool(0.4) { rng.gen_range(-3..=3) } else { 0 }).collect())
        .collect();
    SparseRationalMatrix::from_i64(&rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_is_bilinear_and_alternating(seed in any::<u64>(), k in -4i64..=4) {
        let (h, mut rng) = setup(seed);
        let (x, y, w) = (random_element(&mut rng, &h, 4), random_element(&mut rng, &h, 4), random_element(&mut rng, &h, 4));
        prop_assert_eq!(h.pairing(&add(&h, &x, &y), &w), h.pairing(&x, &w) + h.pairing(&y, &w));
        prop_assert_eq!(h.pairing(&mul(&h, k, &x), &y), k * h.pairing(&x, &y));
        prop_assert_eq!(h.pairing(&x, &y), -h.pairing(&y, &x));
    }

    #[test]
    fn relations_do_not_change_canonical_form(seed in any::<u64>(), k in -3i64..=3) {
        let (h, mut rng) = setup(seed);
        let coords: Vec<i64> = (0..h.n_generators()).map(|_| rng.gen_range(-5..=5)).collect();
        let x = h.element(&coords).unwrap();
        for r in h.spec().relations() {
            let shifted: Vec<i64> = coords.iter().zip(r).map(|(a, b)| a + k * b).collect();
            prop_assert_eq!(&h.element(&shifted).unwrap(), &x);
        }
    }

    #[test]
    fn derived_iff_some_generator_pairs(seed in any::<u64>()) {
        let (h, mut rng) = setup(seed);
        let x = random_element(&mut rng, &h, 3);
        let pairs = h.generators().iter().any(|g| h.pairing(&x, g) != 0);
        prop_assert_eq!(h.is_derived_element(&x), pairs);
        prop_assert_eq!(h.in_kernel_mu(&x), !pairs);
    }

    #[test]
    fn skew_and_jacobi(seed in any::<u64>()) {
        let (h, mut rng) = setup(seed);
        let (a, b, c) = (single(&mut rng, &h), single(&mut rng, &h), single(&mut rng, &h));
        prop_assert_eq!(br(&h, &a, &b), -&br(&h, &b, &a));
        let j = &(&br(&h, &a, &br(&h, &b, &c)) + &br(&h, &b, &br(&h, &c, &a))) + &br(&h, &c, &br(&h, &a, &b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn g_k_is_closed_under_the_bracket(seed in any::<u64>(), k in -3i64..=3) {
        let (h, mut rng) = setup(seed);
        let gk = |rng: &mut ChaCha8Rng| {
            let x = random_element(rng, &h, 2);
            let y = random_element(rng, &h, 2);
            AlgebraVector::from_terms([(mul(&h, k, &x), q(1)), (x.clone(), q(-k)), (add(&h, &x, &y), q(2)), (x, q(-2)), (y, q(-2))])
        };
        let (a, b) = (gk(&mut rng), gk(&mut rng));
        prop_assert!(in_gk(&h, &a) && in_gk(&h, &b));
        prop_assert!(in_gk(&h, &br(&h, &a, &b)));
    }

    #[test]
    fn kernel_elements_are_central(seed in any::<u64>()) {
        let (h, mut rng) = setup(seed);
        let b = single(&mut rng, &h);
        for u in h.kernel_mu_generators() {
            prop_assert!(br(&h, &AlgebraVector::basis(u), &b).is_zero());
        }
        let u = random_element(&mut rng, &h, 2);
        if h.is_derived_element(&u) {
            let hit = h.generators().iter().any(|g| !br(&h, &AlgebraVector::basis(u.clone()), &AlgebraVector::basis(g.clone())).is_zero());
            prop_assert!(hit);
        }
    }

    #[test]
    fn d_squared_grading_and_projection(seed in any::<u64>(), p in 2usize..=5) {
        let (h, mut rng) = setup(seed);
        if let Some(c) = random_chain(&mut rng, &h, p, 3) {
            let d = boundary(&h, &c);
            prop_assert!(boundary(&h, &d).is_zero());
            let g = c.grading(&h).unwrap();
            prop_assert!(d.terms().keys().all(|w| grading(&h, w) == g));
            if is_derived_chain(&h, &c) {
                prop_assert_eq!(project_derived(&h, &c), c);
            } else {
                prop_assert!(project_derived(&h, &c).is_zero());
            }
        }
    }

    #[test]
    fn kernel_only_chains_are_cycles(seed in any::<u64>(), p in 2usize..=4) {
        let (h, mut rng) = setup(seed);
        let ker = h.kernel_mu_generators();
        prop_assume!(!ker.is_empty());
        let f: Vec<GroupElement> = (0..p)
            .map(|_| ker.iter().fold(h.zero(), |acc, k| add(&h, &acc, &mul(&h, rng.gen_range(-2..=2), k))))
            .collect();
        if let Some((w, _)) = Wedge::from_unsorted(f) {
            prop_assert!(boundary(&h, &WedgeChain::from_wedge(w, q(1))).is_zero());
        }
    }

    #[test]
    fn coboundary_duality(seed in any::<u64>(), p in 2usize..=4) {
        let (h, mut rng) = setup(seed);
        let mut c = WedgeChain::zero(p);
        for _ in 0..3 {
            if let Some(w) = random_chain(&mut rng, &h, p, 2) {
                c.add_scaled(&w, &q(rng.gen_range(-3..=3)));
            }
        }
        let d = boundary(&h, &c);
        let eta = Cochain::from_fn(p - 1, d.terms().keys().cloned(), |_| q_frac(rng.gen_range(-4..=4), rng.gen_range(1..=3)));
        let de = coboundary(&h, &eta, c.terms().keys().cloned());
        prop_assert_eq!(de.truncation_edges, 0);
        prop_assert_eq!(evaluate(&de.cochain, &c).0, evaluate(&eta, &d).0);
    }

    #[test]
    fn rank_equals_transpose_rank(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn kernel_basis_is_an_independent_kernel(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        let k = m.kernel_basis();
        prop_assert_eq!(k.len() + m.rank(), m.n_cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == q(0)));
        }
        prop_assert_eq!(goldman_core::linalg::rank_of_vectors(&k), k.len());
    }

    #[test]
    fn span_test_agrees_with_rank_and_solver(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&mut rng);
        let b: Vec<Q> = (0..m.n_rows()).map(|_| q(rng.gen_range(-3..=3))).collect();
        // augmentation oracle
        let mut cols: Vec<Vec<Q>> = (0..m.n_cols()).map(|j| goldman_core::linalg::densify(m.column(j), m.n_rows())).collect();
        let r = goldman_core::linalg::rank_of_vectors(&cols);
        cols.push(b.clone());
        let in_span = goldman_core::linalg::rank_of_vectors(&cols) == r;
        match m.in_span(&b) {
            Some(x) => {
                prop_assert!(in_span);
                prop_assert_eq!(m.mul_vec(&x), b.clone());
            }
            None => prop_assert!(!in_span),
        }
        match m.solve_affine(&b) {
            Solution::Feasible(x) => prop_assert_eq!(m.mul_vec(&x), b),
            Solution::Infeasible(y) => {
                prop_assert!(m.left_mul_vec(&y).iter().all(|x| *x == q(0)));
                prop_assert!(goldman_core::linalg::dot(&y, &b) != q(0));
            }
        }
    }

    #[test]
    fn f_after_g_is_the_identity(seed in any::<u64>(), p in 2usize..=3) {
        let (h, mut rng) = setup(seed);
        let z = random_element(&mut rng, &h, 2);
        let space = QuotientTensorSpace::new(&h, &z);
        prop_assume!(space.dim() >= p - 1);
        let mut set: Vec<usize> = (0..space.dim()).collect();
        while set.len() > p - 1 {
            set.remove(rng.gen_range(0..set.len()));
        }
        let e = ExteriorVector::basis(set);
        prop_assert_eq!(f_map(&h, &space, &g_map(&h, &space, &e)), e);
    }

    #[test]
    fn f_ignores_factor_order_and_kills_the_ideal(seed in any::<u64>()) {
        let (h, mut rng) = setup(seed);
        let z = random_element(&mut rng, &h, 2);
        let space = QuotientTensorSpace::new(&h, &z);
        let u = random_element(&mut rng, &h, 2);
        let v = random_element(&mut rng, &h, 2);
        // [u]^[v]^[z-u-v] read with any factor last
        let w = sub(&h, &sub(&h, &z, &u), &v);
        let direct = ExteriorVector::wedge_of(&[space.project(&h, &u), space.project(&h, &v)]);
        prop_assert_eq!(f_map(&h, &space, &WedgeChain::monomial(vec![u.clone(), v.clone(), w.clone()], q(1))), direct.clone());
        prop_assert_eq!(f_map(&h, &space, &WedgeChain::monomial(vec![w.clone(), u.clone(), v.clone()], q(1))), direct);
        let x = sub(&h, &z, &add(&h, &u, &v));
        prop_assert!(f_map(&h, &space, &ideal_generator(&h, &u, &v, &x)).is_zero());
    }

    #[test]
    fn homotopy_identity_for_two_choices_of_y(seed in any::<u64>()) {
        let (h, mut rng) = setup(seed);
        let z = random_element(&mut rng, &h, 2);
        prop_assume!(h.is_derived_element(&z));
        let ys = contracting_elements(&h, &z, 1);
        prop_assume!(ys.len() >= 2);
        for y in ys.iter().take(2) {
            let hom = contracting_homotopy(&h, &z, y).unwrap();
            for _ in 0..5 {
                let u = random_element(&mut rng, &h, 2);
                let Some((w, _)) = Wedge::from_unsorted(vec![u.clone(), sub(&h, &z, &u)]) else { continue };
                let c = WedgeChain::from_wedge(w.clone(), q(1));
                let mut lhs = hom.phi1(&h, &boundary(&h, &c));
                lhs.add_scaled(&boundary(&h, &hom.phi2_wedge(&h, &w)), &q(1));
                prop_assert_eq!(lhs, c);
            }
        }
    }
}

#[test]
fn k_does_not_kill_brackets() {
    // the bracket of two generators with nonzero pairing has K = <x,y>(x+y)
    let h = AbelianGroup::surface(1, 0);
    let (x, y) = k_bracket_counterexample(&h).unwrap();
    let b = bracket(&h, &AlgebraVector::basis(x.clone()), &AlgebraVector::basis(y.clone())).unwrap();
    assert!(!k_map(&h, &b).is_zero());
    assert_eq!(h.pairing(&x, &y).abs(), 1);
}

#[test]
fn surface_kernel_is_spanned_by_boundary_curves() {
    for g in 0..=2 {
        for r in 0..=3 {
            if g == 0 && r == 0 {
                continue;
            }
            let h = AbelianGroup::new(GroupSpec::surface(g, r).unwrap());
            assert_eq!(h.kernel_mu_rank(), r.saturating_sub(1), "g={g} r={r}");
            for j in 1..=r {
                assert!(h.in_kernel_mu(h.generator(&format!("C{j}")).unwrap()));
            }
            for x in h.box_support(1).iter().filter(|x| h.in_kernel_mu(x)) {
                assert!(h.representative(x)[..2 * g].iter().all(|c| *c == 0), "g={g} r={r}");
            }
        }
    }
}
