//! Acceptance criteria, one pass/fail line each.

use std::process::ExitCode;
use std::time::Instant;

use atlkf::fo::{pre_exists, pre_forced, Game};
use atlkf::oracle::{self, count_global, Oracle, DEFAULT_CAP};
use atlkf::{
    count_uniform, eval_fo, fixtures, negate_path, parse_formula, random_model, split, uniform_bound, Checker,
    Coalition, Formula, GenConfig, Model, PairSet, PathKind, PoAlgorithm, PoEngine, PoOptions, Semantics, StateSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn opts(algorithm: PoAlgorithm) -> PoOptions {
    PoOptions {
        algorithm,
        ..PoOptions::default()
    }
}

fn coalitions(model: &Model) -> Vec<Vec<String>> {
    let names: Vec<String> = model.agents().iter().map(|a| a.name.clone()).collect();
    (0..(1usize << names.len()))
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.clone())
                .collect()
        })
        .collect()
}

/// `<<Γ>>` and `[[Γ]]` over X, G, U and W.
fn strategic_forms(coalition: &[String]) -> Vec<Formula> {
    strategic_forms_over(coalition, "p", "q")
}

fn strategic_forms_over(coalition: &[String], p: &str, q: &str) -> Vec<Formula> {
    let g = coalition.join(",");
    ["X p", "G p", "[p U q]", "[p W q]"]
        .iter()
        .map(|psi| psi.replace('p', p).replace('q', q))
        .flat_map(|psi| [format!("<<{g}>> {psi}"), format!("[[{g}]] {psi}")])
        .map(|f| parse_formula(&f).unwrap())
        .collect()
}

fn full_range() -> GenConfig {
    GenConfig {
        max_states: 16,
        ..GenConfig::default()
    }
}

fn random_models(count: u64, base: u64) -> Vec<(u64, Model)> {
    (base..base + count)
        .map(|s| (s, random_model(s, &full_range())))
        .collect()
}

fn holds_at_init(model: &Model, text: &str, algorithm: PoAlgorithm) -> bool {
    let f = parse_formula(text).unwrap();
    Checker::po(model, opts(algorithm)).check(&f).unwrap().holds_in_all_init
}

fn card_game_one_round() -> Outcome {
    let m = fixtures::cg_oneround();
    for alg in [PoAlgorithm::Basic, PoAlgorithm::Improved] {
        ensure(!holds_at_init(&m, "<<player>> F win", alg), || {
            format!("holds with {alg}")
        })?;
    }
    Ok("fails at the initial state (basic, improved)".into())
}

fn card_game_repeated() -> Outcome {
    let m = fixtures::cg_repeat();
    for alg in [PoAlgorithm::Basic, PoAlgorithm::Improved] {
        ensure(!holds_at_init(&m, "<<player>> F win", alg), || {
            format!("holds with {alg}")
        })?;
    }
    Ok("fails at the initial state (basic, improved)".into())
}

fn card_game_fair() -> Outcome {
    let m = fixtures::cg_repeat_fair();
    for alg in [PoAlgorithm::Basic, PoAlgorithm::Improved] {
        ensure(holds_at_init(&m, "<<player>> F win", alg), || {
            format!("fails with {alg}")
        })?;
    }
    let f = parse_formula("<<player>> F win").unwrap();
    let options = PoOptions {
        witness: true,
        ..PoOptions::default()
    };
    let result = Checker::po(&m, options).check(&f).unwrap();
    let witness = result.witness.as_ref().and_then(|w| w.first()).ok_or("no witness")?;
    let keeps_a = witness
        .strategy
        .iter()
        .any(|e| e.agent == "player" && e.local_state == "A" && e.action == "keep");
    ensure(keeps_a, || {
        format!("witness does not keep on A: {:?}", witness.strategy)
    })?;

    // Keep everywhere: play `keep` holding a card, `wait` otherwise.
    let player = m.coalition(&["player"]).unwrap();
    let decl = &m.agents()[0];
    let act = |name: &str| decl.actions.iter().position(|a| a == name).unwrap();
    let keep_all: Vec<usize> = (0..m.n_states())
        .map(|s| match decl.local_states[m.local(s, 0)].as_str() {
            "A" | "K" | "Q" => act("keep"),
            _ => act("wait"),
        })
        .collect();
    let ops = [StateSet::full(m.n_states()), m.label("win").unwrap().clone()];
    let pm = oracle::prune(&m, &player, &keep_all);
    let init = m.init().first().unwrap();
    let oracle_ok = oracle::holds_all_fair_paths(&m, &pm, init, PathKind::Until, &ops);
    let view = m.coalition_view(&player);
    let mut strat = PairSet::empty(player.clone(), m.n_states(), view.n_actions());
    for (s, &a) in keep_all.iter().enumerate() {
        strat.insert(s, a);
    }
    let engine = PoEngine::new(&m, &player);
    let game = Game::restricted(&m, &view, &strat);
    let engine_ok = engine
        .closure()
        .filter(&game.exists(PathKind::Until, &ops))
        .contains(init);
    ensure(oracle_ok && engine_ok, || {
        format!("keep-everywhere not winning (oracle {oracle_ok}, engine {engine_ok})")
    })?;
    Ok("holds; witness keeps on A; keep-everywhere wins (oracle and engine)".into())
}

fn basic_equals_improved() -> Outcome {
    let models = random_models(150, 0);
    let mut checks = 0;
    let mut nontrivial = 0;
    for (seed, m) in &models {
        for names in coalitions(m) {
            for f in strategic_forms(&names) {
                let basic = atlkf::eval_po(m, &f, opts(PoAlgorithm::Basic)).unwrap();
                let improved = atlkf::eval_po(m, &f, opts(PoAlgorithm::Improved)).unwrap();
                ensure(basic == improved, || format!("seed {seed}: {f}"))?;
                checks += 1;
                if !basic.is_empty() && !basic.is_full() {
                    nontrivial += 1;
                }
            }
        }
    }
    for (name, m) in fixtures::all() {
        let atom = m.labels().keys().next().unwrap().clone();
        for names in coalitions(&m) {
            for f in strategic_forms_over(&names, &atom, &atom) {
                let basic = atlkf::eval_po(&m, &f, opts(PoAlgorithm::Basic)).unwrap();
                let improved = atlkf::eval_po(&m, &f, opts(PoAlgorithm::Improved)).unwrap();
                ensure(basic == improved, || format!("{name}: {f}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{} random models + {} fixtures, {checks} comparisons ({nontrivial} with a proper subset)",
        models.len(),
        fixtures::all().len()
    ))
}

fn engine_vs_oracle() -> Outcome {
    const GLOBAL_LIMIT: u128 = 1 << 16;
    let mut used = 0;
    let mut skipped_global = 0;
    let mut checks = 0;
    for seed in 0u64.. {
        if used >= 110 {
            break;
        }
        let m = random_model(10_000 + seed, &full_range());
        let all: Vec<Coalition> = coalitions(&m).iter().map(|n| m.coalition(n).unwrap()).collect();
        if !all.iter().all(|c| count_uniform(&m, c) <= 64) {
            continue;
        }
        if count_uniform(&m, &m.grand_coalition()) < 2 {
            // No choice at all: nothing to compare.
            continue;
        }
        if !all.iter().all(|c| count_global(&m, c) <= GLOBAL_LIMIT) {
            skipped_global += 1;
            continue;
        }
        used += 1;
        let po = Oracle::new(&m, Semantics::Po, DEFAULT_CAP);
        let fo = Oracle::new(&m, Semantics::Fo, DEFAULT_CAP);
        for names in coalitions(&m) {
            for f in strategic_forms(&names) {
                let engine = atlkf::eval_po(&m, &f, opts(PoAlgorithm::Basic)).unwrap();
                let reference = po.eval(&f).map_err(|e| e.to_string())?;
                ensure(engine == reference, || format!("po seed {}: {f}", 10_000 + seed))?;
                let engine = eval_fo(&m, &f).unwrap();
                let reference = fo.eval(&f).map_err(|e| e.to_string())?;
                ensure(engine == reference, || format!("fo seed {}: {f}", 10_000 + seed))?;
                checks += 2;
            }
        }
    }
    Ok(format!(
        "{used} models with a choice and count_uniform <= 64, {checks} comparisons \
         ({skipped_global} passed over: more than {GLOBAL_LIMIT} global strategies)"
    ))
}

fn duality() -> Outcome {
    let models = random_models(150, 20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for (seed, m) in &models {
        let n = m.n_states();
        for names in coalitions(m) {
            let c = m.coalition(&names).unwrap();
            let view = m.coalition_view(&c);
            for _ in 0..8 {
                let z = StateSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
                let lhs = pre_exists(m, &view, &z);
                let rhs = pre_forced(m, &view, &z.complement()).complement();
                ensure(lhs == rhs, || format!("seed {seed}: pre duality for {names:?}"))?;
                checks += 1;
            }
            let game = Game::new(m, &view);
            let mut checker = Checker::fo(m);
            for f in strategic_forms(&names).into_iter().step_by(2) {
                let Formula::Exists(g, psi) = &f else { unreachable!() };
                let exists = checker.eval(&f).unwrap();
                let forced = checker
                    .eval(&Formula::Forced(g.clone(), Box::new(negate_path(psi))))
                    .unwrap();
                ensure(exists == forced.complement(), || format!("seed {seed}: {f}"))?;
                let ops: Vec<StateSet> = psi.operands().into_iter().map(|o| checker.eval(o).unwrap()).collect();
                ensure(game.exists(psi.kind(), &ops) == exists, || {
                    format!("seed {seed}: direct {f}")
                })?;
                checks += 2;
            }
        }
    }
    Ok(format!("{} random models, {checks} identities", models.len()))
}

fn split_counting() -> Outcome {
    let models = random_models(150, 30_000);
    let mut checks = 0;
    for (seed, m) in &models {
        for names in coalitions(m).into_iter().filter(|n| !n.is_empty()) {
            let c = m.coalition(&names).unwrap();
            let parts = split(m, &PairSet::all_enabled(&m.coalition_view(&c))).unwrap();
            // Product over each member's local classes of the enabled actions
            // at any state of the class.
            let mut per_class: u128 = 1;
            for &i in c.members() {
                for l in 0..m.agents()[i].local_states.len() {
                    let s = (0..m.n_states()).find(|&s| m.local(s, i) == l).unwrap();
                    per_class *= m.enabled_agent(s, i).len() as u128;
                }
            }
            let counted = count_uniform(m, &c);
            ensure(parts.len() as u128 == counted && counted == per_class, || {
                format!(
                    "seed {seed} {names:?}: split {} count {counted} classes {per_class}",
                    parts.len()
                )
            })?;
            ensure(counted <= uniform_bound(m, &c), || {
                format!("seed {seed}: above the bound")
            })?;
            checks += 1;
        }
    }
    let cg = fixtures::cg_repeat();
    let player = cg.coalition(&["player"]).unwrap();
    let n = split(&cg, &PairSet::all_enabled(&cg.coalition_view(&player)))
        .unwrap()
        .len();
    ensure(n == 8 && count_uniform(&cg, &player) == 8, || {
        format!("card game yields {n}")
    })?;
    Ok(format!("{checks} coalitions; card game yields 8"))
}

fn fairness_degeneracy() -> Outcome {
    let mut checks = 0;
    let no_fairness = GenConfig {
        max_fairness: 0,
        ..full_range()
    };
    let mut models: Vec<Model> = (0..100).map(|s| random_model(40_000 + s, &no_fairness)).collect();
    models.extend(
        fixtures::all()
            .into_iter()
            .map(|(_, m)| m)
            .filter(|m| m.fairness().is_empty()),
    );
    for m in &models {
        for names in coalitions(m) {
            let view = m.coalition_view(&m.coalition(&names).unwrap());
            ensure(Game::new(m, &view).fair().is_full(), || "F empty but Fair != S".into())?;
            checks += 1;
        }
    }
    for seed in 0..100 {
        let mut spec = atlkf::random_spec(41_000 + seed, &full_range());
        spec.fairness.insert(0, Vec::new());
        let m = atlkf::build_model(&spec).map_err(|e| e.to_string())?;
        ensure(!m.warnings().is_empty(), || format!("seed {seed}: no warning"))?;
        for names in coalitions(&m) {
            let view = m.coalition_view(&m.coalition(&names).unwrap());
            ensure(Game::new(&m, &view).fair().is_empty(), || {
                "empty constraint but Fair != {}".into()
            })?;
            checks += 1;
        }
    }
    Ok(format!("{checks} coalition checks; empty constraints warned"))
}

fn envelope_and_closure() -> Outcome {
    let models = random_models(150, 50_000);
    let mut checks = 0;
    for (seed, m) in &models {
        for names in coalitions(m) {
            let c = m.coalition(&names).unwrap();
            for f in strategic_forms(&names).into_iter().step_by(2) {
                let po = atlkf::eval_po(m, &f, PoOptions::default()).unwrap();
                let fo = eval_fo(m, &f).unwrap();
                ensure(po.is_subset(&fo), || format!("seed {seed}: {f} po not within fo"))?;
                if !c.is_empty() {
                    for s in po.iter() {
                        let class = m.equiv_union(s, &c).unwrap();
                        ensure(class.is_subset(&po), || format!("seed {seed}: {f} not closed"))?;
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{} random models, {checks} formulas", models.len()))
}

fn fixture_points() -> Outcome {
    let names = |m: &Model, s: &StateSet| -> Vec<String> { s.iter().map(|i| m.state_name(i)).collect() };
    let m1 = fixtures::m1();
    let m2 = fixtures::m2();
    let cases: [(&Model, &str, Semantics, &[&str]); 6] = [
        (&m1, "EG p", Semantics::Fo, &["(y)"]),
        (&m1, "E[true U p]", Semantics::Fo, &["(x)", "(y)"]),
        (&m1, "<<g>> G p", Semantics::Fo, &["(y)"]),
        (&m1, "<<g>> G p", Semantics::Po, &["(y)"]),
        (&m2, "<<g>> X q", Semantics::Po, &["(u,v)", "(u,w)"]),
        (&m1, "EG p", Semantics::Po, &["(y)"]),
    ];
    for (m, text, semantics, expected) in cases {
        let f = parse_formula(text).unwrap();
        let reference = Oracle::new(m, semantics, DEFAULT_CAP)
            .eval(&f)
            .map_err(|e| e.to_string())?;
        ensure(names(m, &reference) == expected, || {
            format!("{text} ({semantics}): oracle gives {:?}", names(m, &reference))
        })?;
        for alg in [PoAlgorithm::Basic, PoAlgorithm::Improved] {
            let got = Checker::new(m, semantics, opts(alg)).eval(&f).unwrap();
            ensure(got == reference, || {
                format!("{text} ({semantics}, {alg}): {:?}", names(m, &got))
            })?;
        }
    }
    Ok("M1 EG p, E[true U p], <<g>> G p; M2 <<g>> X q".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("card game, one round: <<player>> F win fails", card_game_one_round),
        (
            "card game, repeated, no fairness: <<player>> F win fails",
            card_game_repeated,
        ),
        (
            "card game, repeated, fair: <<player>> F win holds, keep on A",
            card_game_fair,
        ),
        ("basic and improved algorithms agree", basic_equals_improved),
        ("engines agree with the brute-force oracle", engine_vs_oracle),
        ("pre-image and operator duality", duality),
        ("split count equals the uniform strategy count", split_counting),
        ("fairness degenerate cases", fairness_degeneracy),
        ("po within fo, closed under indistinguishability", envelope_and_closure),
        ("fixture point checks, recomputed by the oracle", fixture_points),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {title}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {title}: {why} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
