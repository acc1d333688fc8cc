use liftgap::exact_linalg::rational::{int, rat};
use liftgap::exact_linalg::{psd_check, Rational};
use liftgap::instances::{make_clique, make_star, Graph, VarIndex, VarSet};
use liftgap::moments::{build_cond_matrix, DistParams, MomentVector};
use num_traits::One;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mv(g: Graph, p: Rational) -> MomentVector {
    MomentVector::new(DistParams::new(g, p).unwrap())
}

fn all_vars(g: &Graph) -> Vec<VarIndex> {
    (0..g.num_vars()).map(|id| g.var_at(id)).collect()
}

/// Independent oracle: sum over every vertex assignment of the whole graph.
fn whole_graph_probability(
    g: &Graph,
    p: &Rational,
    ones: &[VarIndex],
    zeros: &[VarIndex],
) -> Rational {
    let n = g.num_vertices();
    let q = Rational::one() - p;
    let holds = |mask: u32, v: &VarIndex| match *v {
        VarIndex::Vertex(i) => mask >> (i - 1) & 1 == 1,
        VarIndex::Edge(i, j) => mask >> (i - 1) & 1 == 1 || mask >> (j - 1) & 1 == 1,
    };
    let mut total = Rational::from_integer(0.into());
    for mask in 0u32..(1 << n) {
        if ones.iter().all(|v| holds(mask, v)) && zeros.iter().all(|v| !holds(mask, v)) {
            let k = mask.count_ones() as i32;
            total +=
                num_traits::pow(p.clone(), k as usize) * num_traits::pow(q.clone(), n - k as usize);
        }
    }
    total
}

fn random_disjoint(rng: &mut ChaCha8Rng, vars: &[VarIndex], max: usize) -> (VarSet, VarSet) {
    let size = rng.gen_range(0..=max);
    let picked: Vec<VarIndex> = vars.choose_multiple(rng, size).cloned().collect();
    let split = rng.gen_range(0..=size);
    (
        VarSet::new(picked[..split].to_vec()),
        VarSet::new(picked[split..].to_vec()),
    )
}

#[test]
fn inclusion_exclusion_matches_whole_graph_oracle() {
    let g = make_clique(8).unwrap();
    let p = rat(1, 5);
    let m = mv(g.clone(), p.clone());
    let vars = all_vars(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let (y, n) = random_disjoint(&mut rng, &vars, 4);
        let yi = g.ids_of(&y).unwrap();
        let ni = g.ids_of(&n).unwrap();
        let ie = m.inclusion_exclusion_ids(&yi, &ni).unwrap();
        assert_eq!(ie, m.event_probability(&yi, &ni).unwrap());
        assert_eq!(
            ie,
            whole_graph_probability(&g, &p, y.as_slice(), n.as_slice())
        );
        assert_eq!(m.cond_weight(&y, &n).unwrap(), ie);
    }
}

#[test]
fn point_values() {
    let g = make_star(3).unwrap();
    let p = rat(2, 7);
    let m = mv(g, p.clone());
    let v1 = VarIndex::Vertex(1);
    let v2 = VarIndex::Vertex(2);
    let e = VarIndex::edge(1, 4);
    let pp = &p * &p;
    assert_eq!(m.moment(&VarSet::empty()).unwrap(), int(1));
    assert_eq!(m.moment(&VarSet::singleton(v1)).unwrap(), p);
    assert_eq!(m.moment(&VarSet::singleton(e)).unwrap(), &p * int(2) - &pp);
    assert_eq!(m.moment(&VarSet::new([v1, e])).unwrap(), p);
    assert_eq!(
        m.cond_weight(&VarSet::empty(), &VarSet::empty()).unwrap(),
        int(1)
    );
    assert_eq!(
        m.cond_weight(&VarSet::singleton(e), &VarSet::singleton(v1))
            .unwrap(),
        &p - &pp
    );
    assert_eq!(
        m.cond_weight(&VarSet::singleton(v1), &VarSet::singleton(v2))
            .unwrap(),
        &p - &pp
    );
    assert!(m
        .cond_weight(&VarSet::singleton(v1), &VarSet::singleton(v1))
        .is_err());
}

#[test]
fn support_cap_is_enforced() {
    let g = make_clique(12).unwrap();
    let m = MomentVector::with_support_cap(DistParams::new(g, rat(1, 3)).unwrap(), 3);
    let a = VarSet::new([VarIndex::edge(1, 2), VarIndex::edge(3, 4)]);
    assert!(m.moment(&a).is_err());
    assert!(DistParams::new(make_clique(3).unwrap(), rat(3, 2)).is_err());
}

#[test]
fn cond_matrix_structure() {
    let g = make_clique(5).unwrap();
    let m = mv(g.clone(), rat(1, 4));
    let y = VarSet::singleton(VarIndex::edge(1, 2));
    let n = VarSet::singleton(VarIndex::Vertex(3));
    let x = build_cond_matrix(&m, &y, &n).unwrap().matrix;
    assert_eq!(x.dim(), 1 + g.num_vars());
    assert_eq!(x.get(0, 0), &m.cond_weight(&y, &n).unwrap());
    for id in 0..g.num_vars() {
        assert_eq!(x.get(1 + id, 1 + id), x.get(0, 1 + id));
    }
    // The unconditioned matrix is the moment matrix on sets of size at most one.
    let x0 = build_cond_matrix(&m, &VarSet::empty(), &VarSet::empty())
        .unwrap()
        .matrix;
    for a in 0..g.num_vars() {
        for b in 0..g.num_vars() {
            let set = VarSet::new([g.var_at(a), g.var_at(b)]);
            assert_eq!(x0.get(1 + a, 1 + b), &m.moment(&set).unwrap());
        }
    }
}

#[test]
fn conditioned_matrices_are_psd_on_k10() {
    let g = make_clique(10).unwrap();
    let m = mv(g.clone(), rat(1, 28));
    let vars = all_vars(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (y, n) = random_disjoint(&mut rng, &vars, 2);
        let x = build_cond_matrix(&m, &y, &n).unwrap();
        assert!(
            psd_check(&x.matrix).is_psd(),
            "Y={} N={}",
            y.encode(),
            n.encode()
        );
    }
}

fn var_subset(g: &Graph, max: usize) -> impl Strategy<Value = Vec<VarIndex>> {
    let vars = all_vars(g);
    proptest::sample::subsequence(vars.clone(), 0..=max.min(vars.len()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn total_probability(s in var_subset(&make_clique(6).unwrap(), 3), pn in 0i64..=9) {
        let m = mv(make_clique(6).unwrap(), rat(pn, 9));
        let mut total = int(0);
        for mask in 0u32..(1 << s.len()) {
            let (y, n): (Vec<_>, Vec<_>) = s.iter().enumerate().partition(|(k, _)| mask >> k & 1 == 1);
            let y = VarSet::new(y.into_iter().map(|(_, v)| *v));
            let n = VarSet::new(n.into_iter().map(|(_, v)| *v));
            total += m.cond_weight(&y, &n).unwrap();
        }
        prop_assert_eq!(total, int(1));
    }

    #[test]
    fn moments_are_monotone_probabilities(
        a in var_subset(&make_clique(7).unwrap(), 3),
        b in var_subset(&make_clique(7).unwrap(), 3),
        pn in 0i64..=11,
    ) {
        let m = mv(make_clique(7).unwrap(), rat(pn, 11));
        let a = VarSet::new(a);
        let ab = a.union(&VarSet::new(b));
        let ya = m.moment(&a).unwrap();
        let yab = m.moment(&ab).unwrap();
        prop_assert!(yab <= ya);
        prop_assert!(yab >= int(0) && ya <= int(1));
    }

    #[test]
    fn untouched_edge_is_independent(seed in any::<u64>(), pn in 0i64..=13) {
        let g = make_clique(8).unwrap();
        let p = rat(pn, 13);
        let m = mv(g.clone(), p.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Condition only on variables inside vertices 1..=5, so edge {6,7} is untouched.
        let inner: Vec<VarIndex> = all_vars(&g)
            .into_iter()
            .filter(|v| match *v {
                VarIndex::Vertex(i) => i <= 5,
                VarIndex::Edge(_, j) => j <= 5,
            })
            .collect();
        let (y, n) = random_disjoint(&mut rng, &inner, 3);
        let f = VarIndex::edge(6, 7);
        let lhs = m.cond_weight(&y.with(f), &n).unwrap();
        let rhs = (&p * int(2) - &p * &p) * m.cond_weight(&y, &n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
