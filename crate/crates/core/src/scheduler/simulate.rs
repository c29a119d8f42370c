//! Bit-exact end-to-end simulation of a schedule.

use rand::Rng;

use crate::detnet::{
    downlink_receive_position, node_downlink_receive, relay_uplink_receive,
    uplink_receive_position, uplink_transmit_position, DetNetwork, Direction, LevelVector, Link,
    Node,
};

use super::{AssignmentKind, Schedule, ScheduleError};

/// One bit string per directed session, indexed like a rate tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Messages(Vec<Vec<bool>>);

impl Messages {
    pub fn new(messages: Vec<Vec<bool>>) -> Self {
        Messages(messages)
    }

    pub fn random<R: Rng + ?Sized>(lengths: &[u64], rng: &mut R) -> Self {
        Messages(
            lengths
                .iter()
                .map(|&n| (0..n).map(|_| rng.gen()).collect())
                .collect(),
        )
    }

    pub fn get(&self, pair: usize, dir: Direction) -> &[bool] {
        &self.0[dir.rate_index(pair)]
    }

    pub fn as_slice(&self) -> &[Vec<bool>] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationOutcome {
    pub decoded: Messages,
    pub bit_errors: usize,
}

impl SimulationOutcome {
    pub fn verdict(&self) -> bool {
        self.bit_errors == 0
    }
}

/// Sends `messages` through `net` according to `sched` and decodes them.
pub fn simulate_schedule(
    net: &DetNetwork,
    sched: &Schedule,
    messages: &Messages,
) -> Result<SimulationOutcome, ScheduleError> {
    sched.validate(net)?;
    let budgets = sched.bit_counts(net.num_pairs());
    if messages.0.len() != budgets.len() {
        return Err(ScheduleError::MessageCount {
            expected: budgets.len(),
            found: messages.0.len(),
        });
    }
    for (index, (m, &b)) in messages.0.iter().zip(&budgets).enumerate() {
        if m.len() as u64 != b {
            return Err(ScheduleError::MessageLength {
                index,
                expected: b as usize,
                found: m.len(),
            });
        }
    }

    // Position of each assignment's bit within its message, per direction.
    let mut cursor = vec![0usize; budgets.len()];
    let carried: Vec<[Option<usize>; 2]> = sched
        .assignments()
        .iter()
        .map(|a| {
            let mut slot = [None, None];
            for &d in a.kind.serves() {
                let i = d.rate_index(a.pair);
                slot[i % 2] = Some(cursor[i]);
                cursor[i] += 1;
            }
            slot
        })
        .collect();
    let bit_of = |pair: usize, d: Direction, pos: Option<usize>| {
        pos.map(|p| messages.0[d.rate_index(pair)][p])
    };

    let slots = sched.num_slots();
    let (q_up, q_down) = (net.q_up(), net.q_down());
    let mut frames = vec![vec![LevelVector::zeros(q_up, Link::Uplink); net.num_nodes()]; slots];
    for (a, pos) in sched.assignments().iter().zip(&carried) {
        for &d in a.kind.serves() {
            let src = Node::new(a.pair, d.source());
            let bit = bit_of(a.pair, d, pos[d.rate_index(0)]).expect("served direction has a bit");
            let k = uplink_transmit_position(net.uplink_gain(src)?, a.uplink_level);
            frames[a.uplink_slot as usize][src.index()].set(k, bit);
        }
    }
    let received = frames
        .iter()
        .map(|f| relay_uplink_receive(net, f))
        .collect::<Result<Vec<_>, _>>()?;

    let mut relay = vec![LevelVector::zeros(q_down, Link::Downlink); slots];
    for a in sched.assignments() {
        let bit =
            received[a.uplink_slot as usize].get(uplink_receive_position(q_up, a.uplink_level));
        relay[a.downlink_slot as usize].set(a.downlink_level as usize, bit);
    }
    let heard = relay
        .iter()
        .map(|x| {
            net.nodes()
                .map(|n| node_downlink_receive(net, x, n))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, _>>()?;

    let mut decoded: Vec<Vec<bool>> = budgets.iter().map(|&b| vec![false; b as usize]).collect();
    for (a, pos) in sched.assignments().iter().zip(&carried) {
        for &d in a.kind.serves() {
            let dst = Node::new(a.pair, d.destination());
            let k = downlink_receive_position(q_down, net.downlink_gain(dst)?, a.downlink_level);
            let mut bit = heard[a.downlink_slot as usize][dst.index()].get(k);
            if a.kind == AssignmentKind::Xor {
                // The destination sent the other half of the XOR itself.
                let own = match d {
                    Direction::AtoB => Direction::BtoA,
                    Direction::BtoA => Direction::AtoB,
                };
                bit ^= bit_of(a.pair, own, pos[own.rate_index(0)]).expect("XOR carries both bits");
            }
            let p = pos[d.rate_index(0)].expect("served direction has a bit");
            decoded[d.rate_index(a.pair)][p] = bit;
        }
    }

    let bit_errors = decoded
        .iter()
        .zip(&messages.0)
        .map(|(x, y)| x.iter().zip(y).filter(|(a, b)| a != b).count())
        .sum();
    Ok(SimulationOutcome {
        decoded: Messages(decoded),
        bit_errors,
    })
}
