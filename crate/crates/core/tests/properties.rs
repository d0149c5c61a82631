use num_traits::{One, Zero};
use proptest::prelude::*;

use sewing_core::correlators::{mode_oracle, monomial_insertions, wick_monomials};
use sewing_core::fock::{FockState, GradedSpace};
use sewing_core::lattice::{EvenLattice, LatticeVOAState, LatticeVector, LatticeVoa};
use sewing_core::schottky::{
    disks_disjoint, fixed_points_multiplier, from_wzq, in_u_gr, plumbing_check, to_wzq, GaussRat, MoebiusMap, Point,
    SchottkyGenerators,
};
use sewing_core::series::rat::{int, rat};
use sewing_core::series::qseries::exponents_by_degree;
use sewing_core::series::{QSeries, Rat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |x| !x.is_zero())
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (small_rat(), small_rat()).prop_map(|(a, b)| GaussRat::new(a, b))
}

fn series(vars: usize, trunc: u32) -> impl Strategy<Value = QSeries> {
    let exps = exponents_by_degree(vars, trunc, &None);
    proptest::collection::vec(small_rat(), exps.len())
        .prop_map(move |cs| QSeries::from_terms(vars, trunc, exps.clone().into_iter().zip(cs)).unwrap())
}

proptest! {
    #[test]
    fn series_ring_laws(a in series(2, 3), b in series(2, 3), c in series(2, 3)) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
    }

    #[test]
    fn series_inverse_and_powers(mut a in series(2, 4), c0 in nonzero_rat(), n in 1i64..4) {
        a.set(vec![0, 0], c0);
        let one = QSeries::one(2, 4);
        prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), one.clone());
        prop_assert_eq!(a.pow(n).unwrap().mul(&a.pow(-n).unwrap()).unwrap(), one);
        prop_assert_eq!(QSeries::from_json(&a.to_json()).unwrap(), a);
    }
}

fn heisenberg_state(voa: &LatticeVoa, max_weight: u32) -> impl Strategy<Value = LatticeVOAState> {
    let states: Vec<LatticeVOAState> = (0..=max_weight).flat_map(|k| voa.basis_shared(k).to_vec()).collect();
    proptest::sample::select(states)
}

fn distinct_points(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::btree_set(-30i64..=30, n).prop_flat_map(move |set| {
        let v: Vec<i64> = set.into_iter().collect();
        Just(v).prop_shuffle().prop_map(|v| v.into_iter().map(|x| rat(x, 3)).collect())
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn symmetric_under_permutations(voa: &LatticeVoa, states: &[LatticeVOAState], points: &[Rat]) -> Result<(), TestCaseError> {
    let base = wick_monomials(voa, &states.iter().collect::<Vec<_>>(), points).unwrap();
    for p in permutations(states.len()) {
        let s: Vec<&LatticeVOAState> = p.iter().map(|&i| &states[i]).collect();
        let x: Vec<Rat> = p.iter().map(|&i| points[i].clone()).collect();
        prop_assert_eq!(&wick_monomials(voa, &s, &x).unwrap(), &base);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn heisenberg_correlators_are_symmetric(
        states in proptest::collection::vec(heisenberg_state(&LatticeVoa::heisenberg(2), 3), 4),
        points in distinct_points(4),
    ) {
        symmetric_under_permutations(&LatticeVoa::heisenberg(2), &states, &points)?;
    }
}

fn a1() -> LatticeVoa {
    LatticeVoa::new(EvenLattice::fixture("A1").unwrap())
}

fn fock_piece() -> impl Strategy<Value = FockState> {
    proptest::sample::select(vec![
        FockState::vacuum(1),
        FockState::new(1, vec![(0, 1)]),
        FockState::new(1, vec![(0, 2)]),
        FockState::new(1, vec![(0, 1), (0, 1)]),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn lattice_correlators_with_charges_are_symmetric(
        charges in proptest::collection::vec(-1i64..=1, 3),
        focks in proptest::collection::vec(fock_piece(), 4),
        points in distinct_points(4),
    ) {
        let voa = a1();
        let last = -charges.iter().sum::<i64>();
        let states: Vec<LatticeVOAState> = charges
            .iter()
            .chain([&last])
            .zip(focks)
            .map(|(&c, f)| voa.state(f, vec![c]))
            .collect();
        symmetric_under_permutations(&voa, &states, &points)?;
        prop_assert!(!wick_monomials(&voa, &states.iter().collect::<Vec<_>>(), &points).unwrap().is_zero()
            || states.iter().any(|s| !s.fock.is_vacuum()));
    }

    #[test]
    fn wick_matches_the_mode_oracle(
        n in 2usize..=3,
        states in proptest::collection::vec(heisenberg_state(&LatticeVoa::heisenberg(1), 2), 3),
        a in 5i64..9,
        b in 2i64..4,
    ) {
        let voa = LatticeVoa::heisenberg(1);
        let points: Vec<Rat> = [int(a), int(b), int(0)].into_iter().take(n).collect();
        let ins = monomial_insertions(&states[..n], &points);
        let oracle = mode_oracle(&voa, &ins, 3).unwrap();
        prop_assert!(oracle.certified);
        let s: Vec<&LatticeVOAState> = states[..n].iter().collect();
        prop_assert_eq!(oracle.value, wick_monomials(&voa, &s, &points).unwrap());
    }
}

fn bracket(voa: &LatticeVoa, m: i64, n: i64, v: &LatticeVector) -> LatticeVector {
    voa.virasoro(m, &voa.virasoro(n, v)).sub(&voa.virasoro(n, &voa.virasoro(m, v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn virasoro_relations(
        s in heisenberg_state(&LatticeVoa::heisenberg(2), 6),
        m in -4i64..=4,
        n in -4i64..=4,
    ) {
        let voa = LatticeVoa::heisenberg(2);
        let v = LatticeVector::basis(s);
        let mut expected = voa.virasoro(m + n, &v).scale(&int(m - n));
        if m + n == 0 {
            // c = 2
            expected = expected.add(&v.scale(&(int(m * m * m - m) * rat(2, 12))));
        }
        prop_assert_eq!(bracket(&voa, m, n, &v), expected);
    }

    #[test]
    fn heisenberg_field_is_primary(
        s in heisenberg_state(&LatticeVoa::heisenberg(1), 5),
        m in -4i64..=4,
        n in -4i64..=4,
    ) {
        let voa = LatticeVoa::heisenberg(1);
        let v = LatticeVector::basis(s);
        let lhs = voa
            .virasoro(m, &voa.heis_mode(0, n, &v))
            .sub(&voa.heis_mode(0, n, &voa.virasoro(m, &v)));
        prop_assert_eq!(lhs, voa.heis_mode(0, m + n, &v).scale(&int(-n)));
    }
}

fn unit_disk_mu() -> impl Strategy<Value = GaussRat> {
    gauss()
        .prop_map(|g| GaussRat::new(g.re / int(25), g.im / int(25)))
        .prop_filter("0 < |mu| < 1", |m| !m.is_zero() && m.norm_sq() < Rat::one())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn schottky_round_trip(big_w in gauss(), big_z in gauss(), mu in unit_disk_mu()) {
        prop_assume!(big_w != big_z);
        let (w, z, q) = to_wzq(&big_w, &big_z, &mu).unwrap();
        let f = fixed_points_multiplier(&from_wzq(&w, &z, &q).unwrap()).unwrap();
        prop_assert!(f.exact);
        prop_assert_eq!(f.attracting, big_w);
        prop_assert_eq!(f.repelling, big_z);
        prop_assert_eq!(f.multiplier, mu);
    }

    #[test]
    fn plumbing_relation(w in gauss(), z in gauss(), q in gauss(), y in gauss()) {
        prop_assume!(w != z && !q.is_zero());
        let gens = SchottkyGenerators::new(vec![(w.clone(), z.clone(), q.clone())]).unwrap();
        prop_assert!(plumbing_check(&gens, 0, &Point::Finite(y.clone())).unwrap());
        let m = from_wzq(&w, &z, &q).unwrap();
        if let (Point::Finite(x), false) = (m.apply(&Point::Finite(y.clone())), y == z) {
            prop_assert_eq!(&(&x - &w) * &(&y - &z), q);
        }
    }

    #[test]
    fn region_membership_implies_disjoint_disks(
        centers in proptest::collection::vec(gauss(), 4),
        qs in proptest::collection::vec(gauss(), 2),
        r in (1i64..=20).prop_map(|n| rat(n, 10)),
    ) {
        let scaled: Vec<GaussRat> = qs.iter().map(|q| GaussRat::new(&q.re / int(100), &q.im / int(100))).collect();
        prop_assume!(scaled.iter().all(|q| !q.is_zero()) && centers[0] != centers[1] && centers[2] != centers[3]);
        let gens = SchottkyGenerators::new(vec![
            (centers[0].clone(), centers[1].clone(), scaled[0].clone()),
            (centers[2].clone(), centers[3].clone(), scaled[1].clone()),
        ])
        .unwrap();
        if in_u_gr(&gens, &r).unwrap() {
            prop_assert!(disks_disjoint(&gens));
        }
    }

    #[test]
    fn composition_and_inversion(a in gauss(), b in gauss(), c in gauss(), d in gauss(), x in gauss()) {
        prop_assume!(!(&(&a * &d) - &(&b * &c)).is_zero());
        let m = MoebiusMap::new(a, b, c, d).unwrap();
        prop_assert!(m.compose(&m.inverse()).is_identity());
        let mm = m.compose(&m);
        prop_assert_eq!(mm.det(), &m.det() * &m.det());
        let y = Point::Finite(x);
        prop_assert_eq!(mm.apply(&y), m.apply(&m.apply(&y)));
    }
}
