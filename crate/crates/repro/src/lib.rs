//! Stratum ledger, verification registry and spectral sequence assembly.

pub mod assembly;
pub mod audit;
pub mod cells;
pub mod ledger;
pub mod models;
pub mod verify;
