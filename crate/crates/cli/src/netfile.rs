//! Network description files.
//!
//! A TOML document whose `kind` selects the model:
//!
//! ```toml
//! kind = "deterministic"
//! uplink_a = [3, 2]      # n_{A_i R}, one entry per pair
//! uplink_b = [2, 1]      # n_{B_i R}
//! downlink_a = [2, 1]    # n_{R A_i}
//! downlink_b = [3, 2]    # n_{R B_i}
//! listen = "1/2"         # optional: half duplex, relay listens this fraction
//! ```
//!
//! ```toml
//! kind = "gaussian"
//! uplink = [10.0, 5.0, 3.0, 1.0]    # |h_A1R|, |h_B1R|, |h_A2R|, |h_B2R|
//! downlink = [5.0, 10.0, 3.0, 4.0]  # |h_RA1|, |h_RB1|, |h_RA2|, |h_RB2|
//! power = 1.0
//! ```
//!
//! Unknown fields are rejected.

use std::str::FromStr;

use num_rational::Rational64;
use relaynet::cutset::DuplexMode;
use relaynet::detnet::DetNetwork;
use relaynet::gaussian::GaussNetwork;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
struct Kind {
    kind: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DetFile {
    #[serde(rename = "kind")]
    _kind: String,
    pairs: Option<usize>,
    uplink_a: Vec<u32>,
    uplink_b: Vec<u32>,
    downlink_a: Vec<u32>,
    downlink_b: Vec<u32>,
    listen: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussFile {
    #[serde(rename = "kind")]
    _kind: String,
    uplink: [f64; 4],
    downlink: [f64; 4],
    power: f64,
}

/// A parsed network file.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkFile {
    Deterministic { net: DetNetwork, mode: DuplexMode },
    Gaussian(GaussNetwork),
}

/// Parses a listen fraction written as `p/q`.
pub fn parse_listen(text: &str) -> Result<DuplexMode, CliError> {
    let listen = Rational64::from_str(text.trim())
        .map_err(|_| CliError::Input(format!("listen fraction {text:?} must be written p/q")))?;
    Ok(DuplexMode::half(listen)?)
}

fn interleave(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).flat_map(|(&x, &y)| [x, y]).collect()
}

impl NetworkFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let input = |e: toml::de::Error| CliError::Input(e.to_string());
        let kind = toml::from_str::<Kind>(text).map_err(input)?.kind;
        match kind.as_str() {
            "deterministic" => {
                let f: DetFile = toml::from_str(text).map_err(input)?;
                let m = f.uplink_a.len();
                for (name, v) in [
                    ("uplink_b", &f.uplink_b),
                    ("downlink_a", &f.downlink_a),
                    ("downlink_b", &f.downlink_b),
                ] {
                    if v.len() != m {
                        return Err(CliError::Input(format!(
                            "`{name}` has {} entries, `uplink_a` has {m}",
                            v.len()
                        )));
                    }
                }
                if let Some(pairs) = f.pairs {
                    if pairs != m {
                        return Err(CliError::Input(format!(
                            "`pairs` is {pairs} but the gain arrays have {m} entries"
                        )));
                    }
                }
                let net = DetNetwork::from_flat(
                    &interleave(&f.uplink_a, &f.uplink_b),
                    &interleave(&f.downlink_a, &f.downlink_b),
                )?;
                let mode = f
                    .listen
                    .as_deref()
                    .map(parse_listen)
                    .transpose()?
                    .unwrap_or(DuplexMode::Full);
                Ok(NetworkFile::Deterministic { net, mode })
            }
            "gaussian" => {
                let f: GaussFile = toml::from_str(text).map_err(input)?;
                Ok(NetworkFile::Gaussian(GaussNetwork::new(
                    f.uplink, f.downlink, f.power,
                )?))
            }
            other => Err(CliError::Input(format!(
                "unknown network kind {other:?}; expected deterministic or gaussian"
            ))),
        }
    }
}
