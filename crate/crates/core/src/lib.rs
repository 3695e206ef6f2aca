//! Synthesis of strategies for frequency-LTL objectives on Markov decision
//! processes via deterministic generalized Rabin automata with mean-payoff
//! conditions.

#![allow(clippy::needless_range_loop)]

pub mod boolfn;
pub mod calculus;
pub mod cli;
pub mod dgrma;
pub mod error;
pub mod formula;
pub mod lasso;
pub mod lp;
pub mod lts;
pub mod master;
pub mod mec_analysis;
pub mod mdp;
pub mod rational;
pub mod reach;
pub mod slave;
pub mod synthesis;

pub use error::{Error, Result};
