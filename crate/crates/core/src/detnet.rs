//! Linear shift deterministic channel model over F₂.
//!
//! A node with gain `n` towards a receiver of depth `q` delivers its `n` most
//! significant bits, shifted down by `q - n` positions. Received signals are
//! the XOR of all incoming contributions.
//!
//! # Level conventions
//!
//! These are the only level conventions used in the crate; the scheduler and
//! the simulator both go through the helpers defined here.
//!
//! * Bit vectors ([`LevelVector`]) are stored top-down: position 1 is the most
//!   significant bit.
//! * **Uplink relay levels** are numbered bottom-up: level 1 is the least
//!   significant bit of the relay's received vector. A node with uplink gain
//!   `n` reaches relay levels `1..=n`, and its own top bit lands on level `n`.
//!   The highest level shared by two nodes is therefore the smaller gain.
//! * **Downlink relay levels** are numbered top-down: level 1 is the most
//!   significant bit of the relay's transmit vector. A node with downlink gain
//!   `n` hears relay levels `1..=n`, so the lowest level two nodes share is
//!   again the smaller gain.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetError {
    #[error("a network needs at least one pair")]
    NoPairs,
    #[error("gain {gain} exceeds vector depth {depth}")]
    InvalidGain { gain: u32, depth: usize },
    #[error("expected a vector of length {expected}, got {found}")]
    Shape { expected: usize, found: usize },
    #[error("expected {expected} node frames, got {found}")]
    FrameCount { expected: usize, found: usize },
    #[error("pair {pair} does not exist (network has {pairs} pairs)")]
    UnknownNode { pair: usize, pairs: usize },
}

/// The two users of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// A directed message within a pair, named after its source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "a-to-b")]
    AtoB,
    #[serde(rename = "b-to-a")]
    BtoA,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::AtoB, Direction::BtoA];

    pub fn source(self) -> Side {
        match self {
            Direction::AtoB => Side::A,
            Direction::BtoA => Side::B,
        }
    }

    pub fn destination(self) -> Side {
        self.source().other()
    }

    /// Position of the rate `R_{A_i}` or `R_{B_i}` in a flat rate tuple.
    pub fn rate_index(self, pair: usize) -> usize {
        match self {
            Direction::AtoB => 2 * pair,
            Direction::BtoA => 2 * pair + 1,
        }
    }
}

/// One terminal of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub pair: usize,
    pub side: Side,
}

impl Node {
    pub fn new(pair: usize, side: Side) -> Self {
        Node { pair, side }
    }

    /// Index in the node order `A_1, B_1, A_2, B_2, ...`.
    pub fn index(self) -> usize {
        match self.side {
            Side::A => 2 * self.pair,
            Side::B => 2 * self.pair + 1,
        }
    }
}

/// Gains of one pair: `up` towards the relay, `down` from the relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairGains {
    pub a_up: u32,
    pub b_up: u32,
    pub a_down: u32,
    pub b_down: u32,
}

impl PairGains {
    pub fn new(a_up: u32, b_up: u32, a_down: u32, b_down: u32) -> Self {
        PairGains {
            a_up,
            b_up,
            a_down,
            b_down,
        }
    }

    pub fn up(&self, side: Side) -> u32 {
        match side {
            Side::A => self.a_up,
            Side::B => self.b_up,
        }
    }

    pub fn down(&self, side: Side) -> u32 {
        match side {
            Side::A => self.a_down,
            Side::B => self.b_down,
        }
    }
}

/// An M-pair deterministic relay network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DetNetwork {
    pairs: Vec<PairGains>,
}

impl DetNetwork {
    pub fn new(pairs: Vec<PairGains>) -> Result<Self, DetError> {
        if pairs.is_empty() {
            return Err(DetError::NoPairs);
        }
        Ok(DetNetwork { pairs })
    }

    /// Builds a network from the four per-node gain lists, each of length M.
    /// `uplink` is `(n_{A_1R}, n_{B_1R}, ...)`, `downlink` is `(n_{RA_1}, n_{RB_1}, ...)`.
    pub fn from_flat(uplink: &[u32], downlink: &[u32]) -> Result<Self, DetError> {
        if uplink.len() != downlink.len() {
            return Err(DetError::Shape {
                expected: uplink.len(),
                found: downlink.len(),
            });
        }
        if !uplink.len().is_multiple_of(2) {
            return Err(DetError::Shape {
                expected: uplink.len() + 1,
                found: uplink.len(),
            });
        }
        let pairs = uplink
            .chunks(2)
            .zip(downlink.chunks(2))
            .map(|(u, d)| PairGains::new(u[0], u[1], d[0], d[1]))
            .collect();
        DetNetwork::new(pairs)
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn num_nodes(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn pairs(&self) -> &[PairGains] {
        &self.pairs
    }

    pub fn pair(&self, i: usize) -> Result<&PairGains, DetError> {
        self.pairs.get(i).ok_or(DetError::UnknownNode {
            pair: i,
            pairs: self.pairs.len(),
        })
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..self.pairs.len()).flat_map(|p| [Node::new(p, Side::A), Node::new(p, Side::B)])
    }

    pub fn uplink_gain(&self, node: Node) -> Result<u32, DetError> {
        Ok(self.pair(node.pair)?.up(node.side))
    }

    pub fn downlink_gain(&self, node: Node) -> Result<u32, DetError> {
        Ok(self.pair(node.pair)?.down(node.side))
    }

    /// Flat uplink gains `(n_{A_1R}, n_{B_1R}, ...)`.
    pub fn uplink_gains(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|p| [p.a_up, p.b_up]).collect()
    }

    /// Flat downlink gains `(n_{RA_1}, n_{RB_1}, ...)`.
    pub fn downlink_gains(&self) -> Vec<u32> {
        self.pairs
            .iter()
            .flat_map(|p| [p.a_down, p.b_down])
            .collect()
    }

    /// Depth of the relay's received vector.
    pub fn q_up(&self) -> usize {
        self.pairs
            .iter()
            .map(|p| p.a_up.max(p.b_up))
            .max()
            .unwrap_or(0) as usize
    }

    /// Depth of the relay's transmitted vector.
    pub fn q_down(&self) -> usize {
        self.pairs
            .iter()
            .map(|p| p.a_down.max(p.b_down))
            .max()
            .unwrap_or(0) as usize
    }

    /// Single depth covering every link.
    pub fn q(&self) -> usize {
        self.q_up().max(self.q_down())
    }

    /// Applies `f` to every uplink gain and `g` to every downlink gain.
    pub fn map_gains(&self, f: impl Fn(u32) -> u32, g: impl Fn(u32) -> u32) -> DetNetwork {
        let pairs = self
            .pairs
            .iter()
            .map(|p| PairGains::new(f(p.a_up), f(p.b_up), g(p.a_down), g(p.b_down)))
            .collect();
        DetNetwork { pairs }
    }
}

/// Which end of the relay a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Uplink,
    Downlink,
}

/// A vector of bits, stored most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelVector {
    bits: Vec<bool>,
    link: Link,
}

impl LevelVector {
    pub fn new(bits: Vec<bool>, link: Link) -> Self {
        LevelVector { bits, link }
    }

    pub fn zeros(len: usize, link: Link) -> Self {
        LevelVector {
            bits: vec![false; len],
            link,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn link(&self) -> Link {
        self.link
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Bit at top-down position `k` (1-based).
    pub fn get(&self, k: usize) -> bool {
        self.bits[k - 1]
    }

    /// Sets the bit at top-down position `k` (1-based).
    pub fn set(&mut self, k: usize, bit: bool) {
        self.bits[k - 1] = bit;
    }

    pub fn xor_assign(&mut self, other: &LevelVector) -> Result<(), DetError> {
        if other.len() != self.len() {
            return Err(DetError::Shape {
                expected: self.len(),
                found: other.len(),
            });
        }
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= *b;
        }
        Ok(())
    }
}

/// `S^{q-n} x`: keeps the top `n` bits of `x` and moves them to the bottom of
/// a length-`q` vector.
pub fn shifted_contribution(x: &LevelVector, gain: u32) -> Result<LevelVector, DetError> {
    let q = x.len();
    let n = gain as usize;
    if n > q {
        return Err(DetError::InvalidGain { gain, depth: q });
    }
    let shift = q - n;
    let mut out = vec![false; q];
    out[shift..].copy_from_slice(&x.bits[..n]);
    Ok(LevelVector::new(out, x.link))
}

/// The relay's received vector: XOR of every node's shifted uplink frame.
/// `frames` follows the node order `A_1, B_1, A_2, B_2, ...`.
pub fn relay_uplink_receive(
    net: &DetNetwork,
    frames: &[LevelVector],
) -> Result<LevelVector, DetError> {
    if frames.len() != net.num_nodes() {
        return Err(DetError::FrameCount {
            expected: net.num_nodes(),
            found: frames.len(),
        });
    }
    let q = net.q_up();
    let mut y = LevelVector::zeros(q, Link::Uplink);
    for (node, frame) in net.nodes().zip(frames) {
        if frame.len() != q {
            return Err(DetError::Shape {
                expected: q,
                found: frame.len(),
            });
        }
        y.xor_assign(&shifted_contribution(frame, net.uplink_gain(node)?)?)?;
    }
    Ok(y)
}

/// What `node` hears when the relay broadcasts `relay_frame`.
pub fn node_downlink_receive(
    net: &DetNetwork,
    relay_frame: &LevelVector,
    node: Node,
) -> Result<LevelVector, DetError> {
    let q = net.q_down();
    if relay_frame.len() != q {
        return Err(DetError::Shape {
            expected: q,
            found: relay_frame.len(),
        });
    }
    let gain = net.downlink_gain(node)?;
    shifted_contribution(relay_frame, gain)
}

/// Top-down position in a node's uplink frame whose bit reaches bottom-up relay
/// level `level`. Requires `1 <= level <= gain`.
pub fn uplink_transmit_position(gain: u32, level: u32) -> usize {
    debug_assert!(level >= 1 && level <= gain);
    (gain - level + 1) as usize
}

/// Top-down position in the relay's received vector of bottom-up level `level`.
pub fn uplink_receive_position(q_up: usize, level: u32) -> usize {
    q_up - level as usize + 1
}

/// Top-down position in a node's received vector where relay level `level`
/// (top-down) arrives. Requires `1 <= level <= gain`.
pub fn downlink_receive_position(q_down: usize, gain: u32, level: u32) -> usize {
    debug_assert!(level >= 1 && level <= gain);
    level as usize + q_down - gain as usize
}
