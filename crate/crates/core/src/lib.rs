//! Correspondence theory for Sahlqvist modal reduction principles on Kripke
//! frames, graph-based frames and polarity-based frames.

pub mod catalogue;
pub mod cli;
pub mod correspond;
pub mod frames;
pub mod relcalc;
pub mod roughsets;
pub mod syntax;
pub mod semantics;
pub mod verify;
