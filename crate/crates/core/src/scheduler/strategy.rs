//! Named level-assignment strategies, selectable at runtime.
//!
//! A strategy only has to handle integral rates on a single slot. Fractional
//! rates and half duplex are handled by time expansion around any strategy.

use std::collections::BTreeMap;

use crate::cutset::RateTuple;
use crate::detnet::DetNetwork;

use super::{Chunked, DivideAndConquer, Schedule, ScheduleError};

pub trait LevelStrategy: Send + Sync {
    fn name(&self) -> &'static str;

    /// One-line description for listings.
    fn summary(&self) -> &'static str;

    /// Single-slot schedule for integral rates inside the full-duplex region.
    fn schedule(&self, net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError>;
}

pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Box<dyn LevelStrategy>>,
}

impl StrategyRegistry {
    pub const DEFAULT: &'static str = "divide-and-conquer";

    pub fn empty() -> Self {
        StrategyRegistry {
            strategies: BTreeMap::new(),
        }
    }

    /// Replaces any strategy already registered under the same name.
    pub fn register(&mut self, strategy: Box<dyn LevelStrategy>) {
        self.strategies.insert(strategy.name(), strategy);
    }

    pub fn get(&self, name: &str) -> Result<&dyn LevelStrategy, ScheduleError> {
        self.strategies
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| ScheduleError::UnknownStrategy(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn LevelStrategy> {
        self.strategies.values().map(|s| s.as_ref())
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = StrategyRegistry::empty();
        r.register(Box::new(DivideAndConquer));
        r.register(Box::new(Chunked));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_registered() {
        let r = StrategyRegistry::default();
        assert_eq!(
            r.names().collect::<Vec<_>>(),
            vec!["chunked", "divide-and-conquer"]
        );
        assert_eq!(
            r.get(StrategyRegistry::DEFAULT).unwrap().name(),
            "divide-and-conquer"
        );
        assert!(matches!(
            r.get("greedy"),
            Err(ScheduleError::UnknownStrategy(_))
        ));
    }
}
