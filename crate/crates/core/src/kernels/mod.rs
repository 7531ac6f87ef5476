//! Kernel symbols, dispersion relation and multipliers.

pub mod dispersion;
pub mod identities;
pub mod multipliers;
pub mod symbols;

pub use dispersion::{b, c, lambda0, lambda_minus, lambda_plus, Dispersion};
pub use identities::{composite_symbol_identities, IdentityReport};
pub use multipliers::{multiplier_l, multiplier_symbol, Multiplier};
pub use symbols::{apply_kernel, eval_terms, symbol, terms, KernelId, Rate, Side, Source, Target, Term};
