//! Reduction to the ordered configurations the power allocations assume.
//!
//! Weakening a channel never enlarges the achievable region, so a tuple that
//! stays inside the restricted region of a weakened network is also reachable
//! on the original one. Per pair the side with the larger rate becomes A, then
//! `|h_BR|` is lowered to `|h_AR|` and `|h_RA|` to `|h_RB|` where they exceed
//! them, and finally the pairs are ordered so that `|h_A1R| >= |h_A2R|`.

use serde::{Deserialize, Serialize};

use super::{gauss_restricted_cutset, GaussError, GaussNetwork, GaussRateTuple};

/// Channel configuration of one link, after ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
}

/// Classifies `(strong1, weak1, strong2, weak2)` magnitudes with
/// `strong1 >= weak1`, `strong2 >= weak2` and `strong1 >= strong2`.
///
/// For the uplink these are `|h_A1R|, |h_B1R|, |h_A2R|, |h_B2R|`; for the
/// downlink `|h_RB1|, |h_RA1|, |h_RB2|, |h_RA2|`. Ties go to the lower case.
pub fn classify_case(m: [f64; 4]) -> Result<Case, GaussError> {
    if m[0] < m[1] || m[2] < m[3] || m[0] < m[2] {
        return Err(GaussError::Unordered(format!("{m:?}")));
    }
    Ok(if m[1] >= m[2] {
        Case::I
    } else if m[1] >= m[3] {
        Case::II
    } else {
        Case::III
    })
}

/// Uplink classification of an ordered network.
pub(crate) fn uplink_case(net: &GaussNetwork) -> Result<Case, GaussError> {
    classify_case(net.uplink())
}

/// Downlink classification; the flag is set when the pairs must be exchanged
/// to put the stronger `|h_RB|` first.
pub(crate) fn downlink_case(net: &GaussNetwork) -> Result<(Case, bool), GaussError> {
    let d = net.downlink();
    let swap = d[3] > d[1];
    let d = if swap { super::swap_pairs(d) } else { d };
    Ok((classify_case([d[1], d[0], d[3], d[2]])?, swap))
}

/// A network and rate tuple in ordered form, with the relabeling applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub net: GaussNetwork,
    pub rates: GaussRateTuple,
    /// Per original pair, whether A and B were exchanged.
    pub sides_swapped: [bool; 2],
    /// Whether the pairs were exchanged after the side swaps.
    pub pairs_swapped: bool,
    /// Magnitudes lowered to restore the ordering, as `(link, node, from, to)`
    /// in the relabeled network.
    pub clamped: Vec<(String, usize, f64, f64)>,
}

fn violated(net: &GaussNetwork, rates: &GaussRateTuple) -> Option<Vec<String>> {
    let check = gauss_restricted_cutset(net, rates);
    let violated: Vec<String> = check.violated().map(|c| c.family.clone()).collect();
    (!violated.is_empty()).then_some(violated)
}

/// Relabels and weakens `net` into ordered form; `rates` must lie in the
/// restricted region before and after.
pub fn reduce_orderings(
    net: &GaussNetwork,
    rates: &GaussRateTuple,
) -> Result<Normalized, GaussError> {
    if let Some(violated) = violated(net, rates) {
        return Err(GaussError::NotInRegion { violated });
    }
    let (mut net, mut rates) = (*net, *rates);
    let sides_swapped = [0, 1].map(|pair| rates.get(2 * pair + 1) > rates.get(2 * pair));
    for pair in (0..2).filter(|&p| sides_swapped[p]) {
        net = net.swap_sides(pair);
        rates = rates.swap_sides(pair);
    }

    let (mut up, mut down) = (net.uplink(), net.downlink());
    let mut clamped = Vec::new();
    for pair in 0..2 {
        let (a, b) = (2 * pair, 2 * pair + 1);
        if up[b] > up[a] {
            clamped.push(("uplink".to_string(), b, up[b], up[a]));
            up[b] = up[a];
        }
        if down[a] > down[b] {
            clamped.push(("downlink".to_string(), a, down[a], down[b]));
            down[a] = down[b];
        }
    }
    net = GaussNetwork::new(up, down, net.power())?;

    let pairs_swapped = up[2] > up[0];
    if pairs_swapped {
        net = net.swap_pairs();
        rates = rates.swap_pairs();
        for c in &mut clamped {
            c.1 ^= 2;
        }
    }

    if let Some(violated) = violated(&net, &rates) {
        return Err(GaussError::NotInRegion { violated });
    }
    Ok(Normalized {
        net,
        rates,
        sides_swapped,
        pairs_swapped,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_examples() {
        assert_eq!(classify_case([10.0, 5.0, 3.0, 1.0]).unwrap(), Case::I);
        assert_eq!(classify_case([10.0, 4.0, 5.0, 3.0]).unwrap(), Case::II);
        assert_eq!(classify_case([10.0, 2.0, 5.0, 3.0]).unwrap(), Case::III);
        assert_eq!(classify_case([10.0, 5.0, 5.0, 1.0]).unwrap(), Case::I);
        assert_eq!(classify_case([10.0, 3.0, 5.0, 3.0]).unwrap(), Case::II);
        assert!(classify_case([1.0, 5.0, 3.0, 1.0]).is_err());
        assert!(classify_case([10.0, 5.0, 11.0, 1.0]).is_err());
    }
}
