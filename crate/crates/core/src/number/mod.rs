//! Sieve-based arithmetic on `[1, N]`: Ω, μ, squarefree counters by weight
//! and parity, the Mertens and summatory Liouville functions, and primorial
//! dimension bounds.

pub mod counters;
pub mod primorial;
pub mod sieve;
pub mod summatory;

pub use counters::{floor_arg, WeightCounters};
pub use primorial::{parse_big, primorial_dim, primorial_dim_u64};
pub use sieve::{SieveConfig, SieveTable, DEFAULT_BUDGET_CAP, DEFAULT_SEGMENT_LEN};
pub use summatory::{mobius_inversion_pair, summatory_samples, InversionPair, SummatoryTables};
