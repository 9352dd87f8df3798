use atlkf::fo::{pre_exists, pre_forced, Game};
use atlkf::oracle::{enumerate_uniform, DEFAULT_CAP};
use atlkf::po::{find_conflict, PoEngine};
use atlkf::{
    count_uniform, eval_fo, parse_formula, random_model, split, uniform_bound, Checker, Coalition, GenConfig, Model,
    PairSet, PathKind, PoAlgorithm, PoOptions, StateSet,
};
use proptest::prelude::*;

fn coalitions(model: &Model) -> Vec<Coalition> {
    let n = model.agents().len();
    (0..(1usize << n))
        .map(|mask| Coalition::new((0..n).filter(|i| mask & (1 << i) != 0)))
        .collect()
}

fn subset(n: usize, bits: u64) -> StateSet {
    StateSet::from_indices(n, (0..n).filter(|i| bits & (1 << (i % 64)) != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pre_duality_and_monotonicity(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        let n = model.n_states();
        let small = subset(n, a & b);
        let large = subset(n, a);
        for c in coalitions(&model) {
            let view = model.coalition_view(&c);
            let exists = pre_exists(&model, &view, &large);
            prop_assert_eq!(&exists, &pre_forced(&model, &view, &large.complement()).complement());
            prop_assert!(pre_forced(&model, &view, &small).is_subset(&pre_forced(&model, &view, &large)));
            prop_assert!(pre_exists(&model, &view, &small).is_subset(&exists));
            prop_assert!(pre_forced(&model, &view, &StateSet::empty(n)).is_empty());
            prop_assert!(pre_exists(&model, &view, &StateSet::full(n)).is_full());
        }
    }

    #[test]
    fn exists_is_dual_of_forced(seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        let n = model.n_states();
        let (p, q) = (subset(n, a), subset(n, b));
        for c in coalitions(&model) {
            let view = model.coalition_view(&c);
            let game = Game::new(&model, &view);
            for (kind, ops) in [
                (PathKind::Next, vec![p.clone()]),
                (PathKind::Globally, vec![p.clone()]),
                (PathKind::Until, vec![p.clone(), q.clone()]),
                (PathKind::WeakUntil, vec![p.clone(), q.clone()]),
            ] {
                prop_assert_eq!(game.exists(kind, &ops), game.exists_by_complement(kind, &ops), "{:?}", kind);
            }
        }
    }

    #[test]
    fn split_yields_the_uniform_strategies(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        for c in coalitions(&model).into_iter().filter(|c| !c.is_empty()) {
            let view = model.coalition_view(&c);
            let all = PairSet::all_enabled(&view);
            let parts = split(&model, &all).unwrap();
            prop_assert_eq!(parts.len() as u128, count_uniform(&model, &c));
            prop_assert!(count_uniform(&model, &c) <= uniform_bound(&model, &c));
            for (k, p) in parts.iter().enumerate() {
                prop_assert!(find_conflict(&model, p).is_none());
                prop_assert!(parts[k + 1..].iter().all(|o| o != p));
                for (s, a) in all.iter() {
                    if !p.contains(s, a) {
                        let mut bigger = p.clone();
                        bigger.insert(s, a);
                        prop_assert!(find_conflict(&model, &bigger).is_some());
                    }
                }
            }
            let mut from_split: Vec<Vec<usize>> = parts
                .iter()
                .map(|p| (0..model.n_states()).map(|s| p.actions_at(s).next().unwrap()).collect())
                .collect();
            let mut enumerated = enumerate_uniform(&model, &c, DEFAULT_CAP).unwrap();
            from_split.sort();
            enumerated.sort();
            prop_assert_eq!(from_split, enumerated);
        }
    }

    #[test]
    fn parallel_basic_is_deterministic(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        let c = Coalition::new([0]);
        let engine = PoEngine::new(&model, &c);
        let p = model.label("p").unwrap().clone();
        let q = model.label("q").unwrap().clone();
        for kind in [PathKind::Until, PathKind::Globally] {
            let ops = if kind == PathKind::Until { vec![p.clone(), q.clone()] } else { vec![p.clone()] };
            prop_assert_eq!(engine.basic(kind, &ops, false), engine.basic(kind, &ops, true));
            prop_assert_eq!(engine.improved(kind, &ops), engine.improved(kind, &ops));
        }
        let f = parse_formula("<<ag0>> [p U q]").unwrap();
        let run = |parallel| {
            let options = PoOptions { algorithm: PoAlgorithm::Basic, parallel, witness: true };
            Checker::po(&model, options).check(&f).unwrap()
        };
        prop_assert_eq!(run(false), run(true));
    }

    #[test]
    fn fairness_degenerate_cases(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig { max_fairness: 0, ..GenConfig::default() });
        for c in coalitions(&model) {
            let view = model.coalition_view(&c);
            prop_assert!(Game::new(&model, &view).fair().is_full());
        }
        let mut spec = atlkf::random_spec(seed, &GenConfig::default());
        spec.fairness.push(Vec::new());
        let model = atlkf::build_model(&spec).unwrap();
        prop_assert!(!model.warnings().is_empty());
        for c in coalitions(&model) {
            let view = model.coalition_view(&c);
            prop_assert!(Game::new(&model, &view).fair().is_empty());
        }
    }

    #[test]
    fn knowledge_is_closed_on_the_domain(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        let mut checker = Checker::fo(&model);
        let dom = checker.domain();
        let k = checker.eval(&parse_formula("K<ag0> (p | EX q)").unwrap()).unwrap();
        for s in k.iter() {
            for t in dom.iter() {
                if model.local(s, 0) == model.local(t, 0) {
                    prop_assert!(k.contains(t));
                }
            }
        }
    }

    #[test]
    fn ctl_through_the_empty_coalition(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        for (ctl, strategic) in [
            ("EG p", "[[]] G p"),
            ("E[p U q]", "[[]] [p U q]"),
            ("AX p", "<<>> X p"),
            ("A[p W q]", "<<>> [p W q]"),
            ("AG p", "!E[true U !p]"),
        ] {
            let a = eval_fo(&model, &parse_formula(ctl).unwrap()).unwrap();
            let b = eval_fo(&model, &parse_formula(strategic).unwrap()).unwrap();
            prop_assert_eq!(a, b, "{}", ctl);
        }
    }

    #[test]
    fn model_text_round_trip(seed in any::<u64>()) {
        let model = random_model(seed, &GenConfig::default());
        let text = atlkf::print_model(&model);
        prop_assert_eq!(atlkf::load_model(&text).unwrap(), model);
    }
}
