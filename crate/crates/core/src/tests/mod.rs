//! Cross-module checks: frozen oracle values and randomized invariants.

mod golden;
mod properties;
