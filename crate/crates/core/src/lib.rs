//! Tiered gradient codes.
//!
//! A tiered code launches `n1` servers, waits for `c` of them to finish, then
//! launches `n2 - n1` more servers whose data assignment depends on which `c`
//! finished. Any `k` completions recover the full gradient sum.
//!
//! Servers are numbered from 1; data partitions are numbered from 0.

pub mod codeplan;
pub mod error;
pub mod numeric;
pub mod sim;
pub mod supports;
pub mod verify;

pub use codeplan::{
    computation_fraction, cstar_lookup, plan, plain_fraction, CodePlan, Construction, Regime,
    TieredParams,
};
pub use error::{Error, Result};
pub use numeric::{decode, instantiate, DecoderOutput, ParityMatrix, TieredCode};
pub use supports::{SupportMatrix, TieredSupport};
pub use verify::VerificationReport;
