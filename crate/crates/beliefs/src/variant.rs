use std::cmp::Ordering;

use mediatorless_game::CoalitionMask;

use crate::history::advance;
use crate::{label_lies, lex_compare, lie_sequence, BeliefError, GlobalHistory, Message, Protocol};

/// Rewrites `h` so that players outside `coalition` stop lying to each
/// other from the first round where they did.
///
/// Before that round nothing changes. In it, messages between outsiders
/// become the prescribed ones and everything else is kept. Afterwards the
/// coalition's messages and the outsiders' messages to the coalition are
/// replayed from `h`, while outsiders send each other the messages their
/// new histories prescribe. The coalition's local histories are unchanged
/// and the lie sequence strictly decreases; both are checked.
pub fn truthful_variant(
    protocol: &dyn Protocol,
    h: &GlobalHistory,
    coalition: &CoalitionMask,
) -> Result<GlobalHistory, BeliefError> {
    let labeled = label_lies(protocol, h)?;
    let inside = |i: usize| coalition.contains(i);
    let first = labeled.history.rounds.iter().zip(&labeled.lies).position(|(msgs, lies)| {
        msgs.iter().zip(lies).any(|(m, &lie)| lie && !inside(m.from) && !inside(m.to))
    });
    let Some(first) = first else {
        return Err(BeliefError::Usage("players outside the coalition never lie to each other".into()));
    };

    let n = protocol.players();
    let mut states: Vec<u64> = (0..n).map(|i| protocol.init(i, h.coins[i])).collect();
    let mut rounds = Vec::with_capacity(h.rounds.len());
    for (r, msgs) in h.rounds.iter().enumerate() {
        let round = r + 1;
        let next: Vec<Message> = if r < first {
            msgs.clone()
        } else {
            msgs.iter()
                .map(|m| {
                    if inside(m.from) || inside(m.to) {
                        *m
                    } else {
                        Message { value: protocol.message(m.from, states[m.from], round, m.to), ..*m }
                    }
                })
                .collect()
        };
        states = advance(protocol, &states, round, &next);
        rounds.push(next);
    }
    let out = GlobalHistory { players: n, coins: h.coins.clone(), rounds };

    for &i in coalition.members() {
        if out.local(protocol, i) != h.local(protocol, i) {
            return Err(BeliefError::Postcondition(format!("player {i} sees a different history")));
        }
    }
    let before = lie_sequence(&labeled);
    let after = lie_sequence(&label_lies(protocol, &out)?);
    if lex_compare(&after, &before) != Ordering::Less {
        return Err(BeliefError::Postcondition(format!("lie sequence {after:?} is not below {before:?}")));
    }
    Ok(out)
}
