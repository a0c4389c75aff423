use thiserror::Error;

use crate::algebra::{AlgebraId, BasisSymbol, Element};

/// Errors shared across the algebra, derivation and 2-local layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("algebra mismatch: expected {expected}, found {found}")]
    AlgebraMismatch { expected: AlgebraId, found: AlgebraId },
    /// A witness search was asked about elements whose support does not fit
    /// inside the requested window.
    #[error("window {window} too small: symbol {symbol} lies outside it")]
    WindowTooSmall { symbol: BasisSymbol, window: i64 },
    /// A windowed derivation was probed outside the range it is defined on.
    /// This means the probe is unverifiable at this window, not that the
    /// Leibniz rule fails.
    #[error("probe escapes window {window}: symbol {symbol}")]
    WindowOverflow { symbol: BasisSymbol, window: i64 },
    /// A value-table oracle was queried at an element it has no entry for.
    #[error("no stored value for probe {0}")]
    UnknownProbe(Element),
}
