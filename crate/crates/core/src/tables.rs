use crate::error::Result;
use crate::number::{SieveConfig, SieveTable, SummatoryTables, WeightCounters};

/// The sieve plus everything derived from it. Built once, then shared
/// read-only by every other module.
#[derive(Clone, Debug)]
pub struct Tables {
    pub sieve: SieveTable,
    pub counters: WeightCounters,
    pub summatory: SummatoryTables,
}

impl Tables {
    /// Sieve, counters and summatory tables all on `[1, limit]`.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, limit, &SieveConfig::default())
    }

    /// Counters are built only up to `counter_limit`, which may be smaller
    /// than the sieve limit.
    pub fn build_with(limit: u64, counter_limit: u64, config: &SieveConfig) -> Result<Self> {
        let sieve = SieveTable::build_with(limit, config)?;
        let counters = WeightCounters::build(&sieve, counter_limit)?;
        let summatory = SummatoryTables::build(&sieve);
        Ok(Self {
            sieve,
            counters,
            summatory,
        })
    }

    pub fn limit(&self) -> u64 {
        self.sieve.limit()
    }
}
