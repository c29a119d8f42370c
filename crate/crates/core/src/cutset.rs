//! Cut-set bounds for deterministic networks, full and half duplex.
//!
//! A cut picks a nonempty set of pairs and, for each of them, one direction.
//! The rates crossing the cut are bounded by the strongest uplink among the
//! chosen sources and by the strongest downlink among the chosen destinations.
//! All arithmetic is exact.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detnet::{DetNetwork, Direction};

/// Largest number of pairs for which cuts are enumerated (3^M cuts).
pub const MAX_CUT_PAIRS: usize = 16;

/// Default cell budget for [`enumerate_integral_region`].
pub const DEFAULT_CELL_BUDGET: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutsetError {
    #[error("rate tuple has {found} entries, network needs {expected}")]
    Arity { expected: usize, found: usize },
    #[error("rate {index} is negative")]
    NegativeRate { index: usize },
    #[error("cannot parse rate {token:?}: expected an integer or a fraction p/q")]
    ParseRate { token: String },
    #[error("listen fraction {0} is not strictly between 0 and 1")]
    ListenFraction(Rational64),
    #[error("too many pairs ({0}) for exhaustive cut enumeration")]
    TooManyPairs(usize),
    #[error("search box has {cells} cells, budget is {budget}")]
    SearchTooLarge { cells: u128, budget: u128 },
}

/// Full duplex, or half duplex with the relay listening a fraction `Δ` of the time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DuplexMode {
    #[default]
    Full,
    Half(Rational64),
}

impl DuplexMode {
    pub fn half(listen: Rational64) -> Result<Self, CutsetError> {
        if listen <= Rational64::zero() || listen >= Rational64::from_integer(1) {
            return Err(CutsetError::ListenFraction(listen));
        }
        Ok(DuplexMode::Half(listen))
    }

    fn factors(self) -> (Rational64, Rational64) {
        match self {
            DuplexMode::Full => (Rational64::from_integer(1), Rational64::from_integer(1)),
            DuplexMode::Half(d) => (d, Rational64::from_integer(1) - d),
        }
    }
}

/// Rates `(R_{A_1}, R_{B_1}, ..., R_{A_M}, R_{B_M})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RateTuple(Vec<Rational64>);

impl RateTuple {
    pub fn new(rates: Vec<Rational64>) -> Result<Self, CutsetError> {
        if let Some(index) = rates.iter().position(|r| *r < Rational64::zero()) {
            return Err(CutsetError::NegativeRate { index });
        }
        Ok(RateTuple(rates))
    }

    pub fn from_integers(rates: &[u64]) -> Self {
        RateTuple(
            rates
                .iter()
                .map(|&r| Rational64::from_integer(r as i64))
                .collect(),
        )
    }

    pub fn zero(pairs: usize) -> Self {
        RateTuple(vec![Rational64::zero(); 2 * pairs])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational64] {
        &self.0
    }

    pub fn rate(&self, pair: usize, dir: Direction) -> Rational64 {
        self.0[dir.rate_index(pair)]
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|r| r.is_integer())
    }

    /// Integer rates, if every entry is integral.
    pub fn to_integers(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|r| {
                if r.is_integer() {
                    r.to_integer().to_u64()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Every entry multiplied by `k`.
    pub fn scale(&self, k: i64) -> RateTuple {
        RateTuple(self.0.iter().map(|r| r * k).collect())
    }

    pub fn check_arity(&self, net: &DetNetwork) -> Result<(), CutsetError> {
        if self.0.len() != net.num_nodes() {
            return Err(CutsetError::Arity {
                expected: net.num_nodes(),
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for RateTuple {
    type Err = CutsetError;

    /// Parses comma-separated entries such as `2,1,1/2,0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rates = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<Rational64>().map_err(|_| CutsetError::ParseRate {
                    token: t.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        RateTuple::new(rates)
    }
}

impl fmt::Display for RateTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One directed session crossing a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutTerm {
    pub pair: usize,
    pub direction: Direction,
}

/// A nonempty set of pairs with one direction each, sorted by pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cut {
    terms: Vec<CutTerm>,
}

impl Cut {
    /// Builds a cut; pairs must be distinct.
    pub fn new(mut terms: Vec<CutTerm>) -> Option<Self> {
        terms.sort();
        let distinct = terms.windows(2).all(|w| w[0].pair != w[1].pair);
        (!terms.is_empty() && distinct).then_some(Cut { terms })
    }

    pub fn terms(&self) -> &[CutTerm] {
        &self.terms
    }

    /// Total rate of the sessions crossing the cut.
    pub fn load(&self, rates: &RateTuple) -> Rational64 {
        self.terms
            .iter()
            .map(|t| rates.rate(t.pair, t.direction))
            .sum()
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let (s, d) = match t.direction {
                    Direction::AtoB => ("A", "B"),
                    Direction::BtoA => ("B", "A"),
                };
                format!("{s}{p}->{d}{p}", p = t.pair + 1)
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All `Σ_k C(M,k) 2^k = 3^M - 1` cuts of an M-pair network.
pub fn enumerate_cuts(pairs: usize) -> Result<Vec<Cut>, CutsetError> {
    if pairs > MAX_CUT_PAIRS {
        return Err(CutsetError::TooManyPairs(pairs));
    }
    let mut cuts = Vec::new();
    for subset in 1u32..(1 << pairs) {
        let members: Vec<usize> = (0..pairs).filter(|i| subset >> i & 1 == 1).collect();
        // Bit j of `orient` set means member j runs B -> A.
        for orient in 0u32..(1 << members.len()) {
            let terms = members
                .iter()
                .enumerate()
                .map(|(j, &pair)| CutTerm {
                    pair,
                    direction: if orient >> j & 1 == 0 {
                        Direction::AtoB
                    } else {
                        Direction::BtoA
                    },
                })
                .collect();
            cuts.push(Cut { terms });
        }
    }
    Ok(cuts)
}

/// Capacity of a cut: `min(Δ max source uplink, (1-Δ) max destination downlink)`.
pub fn det_cut_bound(net: &DetNetwork, cut: &Cut, mode: DuplexMode) -> Rational64 {
    let mut up = 0;
    let mut down = 0;
    for t in &cut.terms {
        let g = net.pairs()[t.pair];
        up = up.max(g.up(t.direction.source()));
        down = down.max(g.down(t.direction.destination()));
    }
    let (fu, fd) = mode.factors();
    (fu * i64::from(up)).min(fd * i64::from(down))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatedCut {
    pub cut: Cut,
    pub load: Rational64,
    pub bound: Rational64,
}

/// Outcome of a membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    /// Every violated cut, in enumeration order.
    pub violated: Vec<ViolatedCut>,
    /// Cuts whose load equals their bound exactly.
    pub tight: Vec<Cut>,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.violated.is_empty()
    }
}

pub fn in_det_cutset(
    net: &DetNetwork,
    rates: &RateTuple,
    mode: DuplexMode,
) -> Result<Membership, CutsetError> {
    rates.check_arity(net)?;
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    for cut in enumerate_cuts(net.num_pairs())? {
        let load = cut.load(rates);
        let bound = det_cut_bound(net, &cut, mode);
        if load > bound {
            violated.push(ViolatedCut { cut, load, bound });
        } else if load == bound && !load.is_zero() {
            tight.push(cut);
        }
    }
    Ok(Membership { violated, tight })
}

/// Largest integer rate each directed session could carry on its own.
fn single_session_caps(net: &DetNetwork, mode: DuplexMode) -> Vec<u64> {
    (0..net.num_pairs())
        .flat_map(|pair| Direction::BOTH.map(|direction| (pair, direction)))
        .map(|(pair, direction)| {
            let cut = Cut {
                terms: vec![CutTerm { pair, direction }],
            };
            det_cut_bound(net, &cut, mode).floor().to_integer() as u64
        })
        .collect()
}

/// Every integral rate tuple inside the region, in lexicographic order.
///
/// The search box is the product of the single-session caps; `budget` limits
/// its number of cells.
pub fn enumerate_integral_region(
    net: &DetNetwork,
    mode: DuplexMode,
    budget: u128,
) -> Result<Vec<RateTuple>, CutsetError> {
    let caps = single_session_caps(net, mode);
    let cells = caps
        .iter()
        .try_fold(1u128, |acc, &c| acc.checked_mul(u128::from(c) + 1));
    let cells = cells.unwrap_or(u128::MAX);
    if cells > budget {
        return Err(CutsetError::SearchTooLarge { cells, budget });
    }
    let cuts: Vec<(Vec<usize>, Rational64)> = enumerate_cuts(net.num_pairs())?
        .into_iter()
        .map(|c| {
            let idx = c
                .terms
                .iter()
                .map(|t| t.direction.rate_index(t.pair))
                .collect();
            (idx, det_cut_bound(net, &c, mode))
        })
        .collect();
    // Integer loads only ever need the floor of each bound.
    let cuts: Vec<(Vec<usize>, u64)> = cuts
        .into_iter()
        .map(|(idx, b)| (idx, b.floor().to_integer() as u64))
        .collect();

    let mut out = Vec::new();
    let mut current = vec![0u64; caps.len()];
    loop {
        if cuts
            .iter()
            .all(|(idx, bound)| idx.iter().map(|&i| current[i]).sum::<u64>() <= *bound)
        {
            out.push(RateTuple::from_integers(&current));
        }
        // Odometer with the last entry fastest keeps lexicographic order.
        let mut k = current.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if current[k] < caps[k] {
                current[k] += 1;
                break;
            }
            current[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn parses_fractions_and_rejects_decimals() {
        let t: RateTuple = "1/2, 3 ,0".parse().unwrap();
        assert_eq!(t.as_slice(), &[r(1, 2), r(3, 1), r(0, 1)]);
        assert!("0.5".parse::<RateTuple>().is_err());
        assert!(matches!(
            "-1,2".parse::<RateTuple>(),
            Err(CutsetError::NegativeRate { index: 0 })
        ));
    }

    #[test]
    fn listen_fraction_must_be_interior() {
        assert!(DuplexMode::half(r(0, 1)).is_err());
        assert!(DuplexMode::half(r(1, 1)).is_err());
        assert!(DuplexMode::half(r(1, 3)).is_ok());
    }

    #[test]
    fn cut_display() {
        let cut = Cut::new(vec![
            CutTerm {
                pair: 1,
                direction: Direction::BtoA,
            },
            CutTerm {
                pair: 0,
                direction: Direction::AtoB,
            },
        ])
        .unwrap();
        assert_eq!(cut.to_string(), "{A1->B1, B2->A2}");
        assert!(Cut::new(vec![]).is_none());
    }

    #[test]
    fn integral_region_size_guard() {
        let net = DetNetwork::from_flat(&[9, 9, 9, 9], &[9, 9, 9, 9]).unwrap();
        assert!(matches!(
            enumerate_integral_region(&net, DuplexMode::Full, 100),
            Err(CutsetError::SearchTooLarge {
                cells: 10_000,
                budget: 100
            })
        ));
    }
}
