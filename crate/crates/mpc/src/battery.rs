//! Scripted single-player deviations against the sharing and multiplication
//! steps. Tag patterns use `*`, so every script applies to any step.

use mediatorless_net::{Action, AdversaryScript, Rule, Trigger};

fn rule(tag: &str, from: usize, to: Option<usize>, index: Option<usize>, action: Action) -> Rule {
    Rule { when: Trigger { tag: Some(tag.into()), from: Some(from), to, index, ..Default::default() }, action }
}

/// At least twenty deviations by player `c` of `n`.
pub fn deviation_battery(n: usize, c: usize) -> Vec<AdversaryScript> {
    let a = (c + 1) % n;
    let b = (c + 2) % n;
    let off = |v| Action::Offset { value: v };
    let rnd = Action::Random { lo: 0, hi: 1 << 20 };
    let rnd_small = Action::Random { lo: 0, hi: 5 };
    let specs: Vec<(&str, Vec<Rule>)> = vec![
        ("silent", vec![rule("*", c, None, None, Action::Drop)]),
        ("drop-row", vec![rule("*.row", c, Some(a), None, Action::Drop)]),
        ("bad-row", vec![rule("*.row", c, Some(a), Some(0), off(1))]),
        ("bad-row-slope", vec![rule("*.row", c, Some(a), Some(1), off(3))]),
        ("zero-row", vec![rule("*.row", c, Some(b), None, Action::Set { value: 0 })]),
        ("random-rows", vec![rule("*.row", c, None, None, rnd.clone())]),
        (
            "two-faced-rows",
            vec![rule("*.row", c, Some(a), Some(0), off(1)), rule("*.row", c, Some(b), Some(0), off(2))],
        ),
        ("drop-cross", vec![rule("*.cross", c, None, None, Action::Drop)]),
        ("random-cross", vec![rule("*.cross", c, None, None, rnd.clone())]),
        ("bad-cross", vec![rule("*.cross", c, Some(a), None, off(1))]),
        ("false-complaints", vec![rule("*.complain", c, None, None, rnd_small.clone())]),
        ("drop-complaints", vec![rule("*.complain", c, None, None, Action::Drop)]),
        ("drop-reveal", vec![rule("*.reveal", c, None, None, Action::Drop)]),
        ("random-reveal", vec![rule("*.reveal", c, None, None, rnd.clone())]),
        ("bad-reveal", vec![rule("*.reveal", c, None, Some(0), off(1))]),
        ("false-accusation", vec![rule("*.accuse", c, None, None, Action::Set { value: 0 })]),
        ("drop-publish", vec![rule("*.publish", c, None, None, Action::Drop)]),
        ("random-publish", vec![rule("*.publish", c, None, None, rnd.clone())]),
        (
            "bad-row-then-silent",
            vec![rule("*.row", c, Some(a), Some(0), off(1)), rule("*.reveal", c, None, None, Action::Drop)],
        ),
        (
            "bad-row-random-publish",
            vec![rule("*.row", c, Some(a), None, off(2)), rule("*.publish", c, None, None, rnd.clone())],
        ),
        (
            "bad-cross-random-reveal",
            vec![rule("*.cross", c, Some(b), None, off(1)), rule("*.reveal", c, None, None, rnd.clone())],
        ),
        ("late-silence", vec![Rule { when: Trigger { from: Some(c), round_min: Some(3), ..Default::default() }, action: Action::Drop }]),
        ("random-everything", vec![rule("*", c, None, None, rnd_small)]),
        ("wrong-product", vec![rule("*.reshare.row", c, None, Some(0), off(1))]),
        ("random-syndrome", vec![rule("*.syndrome", c, None, None, rnd)]),
        ("drop-syndrome", vec![rule("*.syndrome", c, None, None, Action::Drop)]),
    ];
    specs
        .into_iter()
        .enumerate()
        .map(|(i, (name, rules))| AdversaryScript::new(name, vec![c], rules).with_seed(i as u64))
        .collect()
}
