use gls_paths::crystal::{self, GenerateOptions};
use gls_paths::gls::{Bounds, PathModel};
use gls_paths::suites;
use gls_paths::weyl_monoid::WeylMonoid;
use gls_paths::{paths, BorcherdsCartanDatum, Path, Realization, Segment, Weight, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrices() -> Vec<Vec<Vec<i64>>> {
    vec![
        vec![vec![2]],
        vec![vec![-2]],
        vec![vec![0]],
        vec![vec![2, -1], vec![-1, 2]],
        vec![vec![2, -2], vec![-1, 2]],
        vec![vec![2, -1], vec![-2, -4]],
        vec![vec![-2, -1], vec![-1, 2]],
    ]
}

fn datum(k: usize) -> BorcherdsCartanDatum {
    BorcherdsCartanDatum::from_matrix(matrices()[k].clone()).unwrap()
}

fn q() -> impl Strategy<Value = Q> {
    (-40i128..40, 1i128..12).prop_map(|(n, d)| Q::new(n, d))
}

fn lowered(k: usize, seed: u64, steps: usize) -> (BorcherdsCartanDatum, Weight, Path<Weight>) {
    let d = datum(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shape = suites::random_shape(&mut rng, d.rank());
    let (_, p) = suites::random_path(&d, &mut rng, &shape, steps);
    (d, shape, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip_through_text(a in q()) {
        prop_assert_eq!(a.to_string().parse::<Q>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Q>(&json).unwrap(), a);
    }

    #[test]
    fn field_laws(a in q(), b in q(), c in q()) {
        prop_assert_eq!((a + b) * c, a * c + b * c);
        prop_assert_eq!(a - a, Q::ZERO);
        if !b.is_zero() {
            prop_assert_eq!(a / b * b, a);
        }
        prop_assert!(Q::int(a.floor() as i64) <= a && a < Q::int(a.floor() as i64 + 1));
    }

    #[test]
    fn refining_a_path_changes_nothing(k in 0usize..7, seed in any::<u64>(), steps in 0usize..6, cut in 1i128..9) {
        let (d, _, p) = lowered(k, seed, steps);
        let mut pieces = Vec::new();
        for s in p.segments() {
            let first = s.duration * Q::new(cut, 10);
            pieces.push(Segment { slope: s.slope.clone(), duration: first });
            pieces.push(Segment { slope: s.slope.clone(), duration: s.duration - first });
        }
        let refined = Path::new(pieces).unwrap();
        prop_assert_eq!(&refined, &p);
        prop_assert_eq!(paths::endpoint(&d, &refined), paths::endpoint(&d, &p));
        let again = Path::new(refined.segments().to_vec()).unwrap();
        prop_assert_eq!(again, refined);
    }

    #[test]
    fn split_inverts_concatenate(k in 0usize..7, seeds in prop::collection::vec(any::<u64>(), 1..4), steps in 0usize..5) {
        let d = datum(k);
        let factors: Vec<Path<Weight>> = seeds.iter().map(|&s| lowered(k, s, steps).2).collect();
        let cat = paths::concatenate(&d, &factors);
        prop_assert_eq!(paths::split(&d, &cat, factors.len()), factors.clone());
        let sum = factors.iter().fold(Weight::zero(d.rank()), |acc, p| acc.add(&paths::endpoint(&d, p)));
        prop_assert_eq!(paths::endpoint(&d, &cat), sum);
    }

    #[test]
    fn paths_round_trip_through_json(k in 0usize..7, seed in any::<u64>(), steps in 0usize..6) {
        let (_, _, p) = lowered(k, seed, steps);
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Path<Weight>>(&text).unwrap(), p);
    }

    #[test]
    fn root_operator_axioms(k in 0usize..7, seed in any::<u64>(), steps in 0usize..7) {
        let (d, shape, p) = lowered(k, seed, steps);
        let model = PathModel::new(d.clone(), Bounds::default());
        prop_assert!(model.is_gls(&p, &shape).unwrap());
        let wt = paths::endpoint(&d, &p);
        for i in 0..d.rank() {
            prop_assert_eq!(Q::int(paths::phi(&d, &p, i) - paths::epsilon(&d, &p, i)), d.eval(i, &wt));
            if let Some(f) = paths::f_op(&d, &p, i) {
                prop_assert_eq!(paths::endpoint(&d, &f), d.add_root(&wt, i, -Q::ONE));
                prop_assert_eq!(model.e(&f, &shape, i).unwrap(), Some(p.clone()));
                prop_assert!(model.is_gls(&f, &shape).unwrap());
            }
            if let Some(e) = model.e(&p, &shape, i).unwrap() {
                prop_assert_eq!(paths::f_op(&d, &e, i), Some(p.clone()));
            }
        }
    }

    #[test]
    fn normal_forms(k in 0usize..7, word in prop::collection::vec(0usize..2, 0..7)) {
        let d = datum(k);
        let word: Vec<usize> = word.into_iter().map(|i| i % d.rank()).collect();
        let m = WeylMonoid::new(d.clone(), 20_000);
        let nf = m.normal_form(&word);
        prop_assert_eq!(m.normal_form(&nf), nf.clone());
        prop_assert_eq!(m.length(&word), nf.len());
        prop_assert!(nf.len() <= word.len());
        let imag = |w: &[usize]| w.iter().filter(|&&i| !d.is_real(i)).count();
        prop_assert_eq!(imag(&nf), imag(&word));
        let mu = Weight::from_evals(&vec![1; d.rank()]);
        prop_assert_eq!(m.act(&nf, &mu), m.act(&word, &mu));
    }

    #[test]
    fn products_are_associative(k in 0usize..7, a in prop::collection::vec(0usize..2, 0..4), b in prop::collection::vec(0usize..2, 0..4), c in prop::collection::vec(0usize..2, 0..4)) {
        let d = datum(k);
        let fix = |w: Vec<usize>| -> Vec<usize> { w.into_iter().map(|i| i % d.rank()).collect() };
        let (a, b, c) = (fix(a), fix(b), fix(c));
        let m = WeylMonoid::new(d.clone(), 20_000);
        prop_assert_eq!(m.product(&m.product(&a, &b), &c), m.product(&a, &m.product(&b, &c)));
        prop_assert!(m.length(&m.product(&a, &b)) <= m.length(&a) + m.length(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn crystal_edges_lower_by_one_root(k in 0usize..7, seed in any::<u64>(), depth in 1usize..5) {
        let d = datum(k);
        let shape = suites::random_shape(&mut ChaCha8Rng::seed_from_u64(seed), d.rank());
        let g = crystal::generate(&d, &shape, depth, GenerateOptions::default()).unwrap();
        let model = PathModel::new(d.clone(), Bounds::default());
        prop_assert!(crystal::check_membership(&model, &g).unwrap().is_empty());
        for e in &g.edges {
            let lowered = d.add_root(&g.weights[e.source], e.label, -Q::ONE);
            prop_assert_eq!(&g.weights[e.target], &lowered);
            prop_assert_eq!(g.target(e.source, e.label), Some(e.target));
            let f = paths::f_op(&d, &g.nodes[e.source], e.label);
            prop_assert_eq!(f.as_ref(), Some(&g.nodes[e.target]));
        }
        for u in 0..g.len() {
            prop_assert_eq!(g.depths[u], g.fword(u).len());
            prop_assert_eq!(&g.weights[u], &paths::endpoint(&d, &g.nodes[u]));
            let word = g.fword(u);
            let rebuilt = word.iter().rev().try_fold(g.nodes[0].clone(), |p, &i| paths::f_op(&d, &p, i));
            prop_assert_eq!(rebuilt.as_ref(), Some(&g.nodes[u]));
        }
        let par = crystal::generate(&d, &shape, depth, GenerateOptions { parallel: true, ..Default::default() }).unwrap();
        prop_assert_eq!(serde_json::to_string(&par).unwrap(), serde_json::to_string(&g).unwrap());
    }

    #[test]
    fn generated_nodes_are_standard(k in 0usize..7, seed in any::<u64>()) {
        let d = datum(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shapes = [suites::random_shape(&mut rng, d.rank()), suites::random_shape(&mut rng, d.rank())];
        let g = crystal::generate_concat(&d, &shapes, 3, GenerateOptions::default()).unwrap();
        let model = PathModel::new(d.clone(), Bounds::default());
        for p in &g.nodes {
            prop_assert!(crystal::is_standard(&model, &shapes, p).unwrap());
        }
    }
}
