//! Seeded random models for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{build_model, for_each_product, AgentDecl, Model, ModelSpec, TransitionDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub max_agents: usize,
    pub max_local_states: usize,
    pub max_actions: usize,
    /// Upper bound on the number of global states.
    pub max_states: usize,
    pub max_successors: usize,
    pub max_fairness: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_agents: 2,
            max_local_states: 4,
            max_actions: 3,
            max_states: 12,
            max_successors: 2,
            max_fairness: 2,
        }
    }
}

fn subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

/// Random model with atoms `p` and `q`. Every joint action allowed by the
/// protocols has a transition, so the result always validates.
pub fn random_spec(seed: u64, config: &GenConfig) -> ModelSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_agents = rng.gen_range(1..=config.max_agents);
    let (locals, actions) = loop {
        let locals: Vec<usize> = (0..n_agents)
            .map(|_| rng.gen_range(1..=config.max_local_states))
            .collect();
        if locals.iter().product::<usize>() <= config.max_states {
            let actions: Vec<usize> = (0..n_agents).map(|_| rng.gen_range(1..=config.max_actions)).collect();
            break (locals, actions);
        }
    };

    let mut agents = Vec::new();
    let mut protocols: Vec<Vec<Vec<usize>>> = Vec::new();
    for i in 0..n_agents {
        let mut protocol = Vec::new();
        for _ in 0..locals[i] {
            let mut allowed = subset(&mut rng, actions[i], 0.6);
            if allowed.is_empty() {
                allowed.push(rng.gen_range(0..actions[i]));
            }
            protocol.push(allowed);
        }
        let local_names: Vec<String> = (0..locals[i]).map(|l| format!("l{l}")).collect();
        let action_names: Vec<String> = (0..actions[i]).map(|a| format!("a{a}")).collect();
        agents.push(AgentDecl {
            name: format!("ag{i}"),
            protocol: protocol
                .iter()
                .zip(&local_names)
                .map(|(allowed, l)| (l.clone(), allowed.iter().map(|&a| action_names[a].clone()).collect()))
                .collect(),
            local_states: local_names,
            actions: action_names,
        });
        protocols.push(protocol);
    }

    let mut states: Vec<Vec<usize>> = Vec::new();
    let radices: Vec<Vec<usize>> = locals.iter().map(|&n| (0..n).collect()).collect();
    for_each_product(&radices.iter().collect::<Vec<_>>(), |t| states.push(t.to_vec()));
    let name = |state: &[usize]| -> Vec<String> { state.iter().map(|l| format!("l{l}")).collect() };

    let mut transitions = Vec::new();
    for state in &states {
        let enabled: Vec<&Vec<usize>> = state.iter().enumerate().map(|(i, &l)| &protocols[i][l]).collect();
        let mut joint: Vec<Vec<usize>> = Vec::new();
        for_each_product(&enabled, |a| joint.push(a.to_vec()));
        for a in joint {
            let k = rng.gen_range(1..=config.max_successors);
            for _ in 0..k {
                let target = states.choose(&mut rng).expect("at least one state");
                transitions.push(TransitionDecl {
                    source: name(state),
                    action: a.iter().map(|x| format!("a{x}")).collect(),
                    target: name(target),
                });
            }
        }
    }

    let pick = |rng: &mut ChaCha8Rng, p: f64| -> Vec<Vec<String>> {
        subset(rng, states.len(), p)
            .into_iter()
            .map(|s| name(&states[s]))
            .collect()
    };
    let mut init = pick(&mut rng, 0.2);
    if init.is_empty() {
        init.push(name(states.choose(&mut rng).expect("at least one state")));
    }
    let labels = vec![
        ("p".to_string(), pick(&mut rng, 0.5)),
        ("q".to_string(), pick(&mut rng, 0.4)),
    ];
    let n_fair = rng.gen_range(0..=config.max_fairness);
    let fairness = (0..n_fair).map(|_| pick(&mut rng, 0.35)).collect();

    ModelSpec {
        agents,
        transitions,
        init,
        labels,
        fairness,
    }
}

pub fn random_model(seed: u64, config: &GenConfig) -> Model {
    build_model(&random_spec(seed, config)).expect("generated models are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let config = GenConfig::default();
        for seed in 0..50 {
            let a = random_model(seed, &config);
            assert_eq!(a, random_model(seed, &config));
            assert!(a.n_states() <= config.max_states);
            assert!(a.label("p").is_some() && a.label("q").is_some());
            assert!(!a.init().is_empty());
        }
    }
}
