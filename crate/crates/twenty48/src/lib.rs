//! A 2048 learning and playing engine.
//!
//! The crate is organised around five subsystems:
//!
//! * [`game`] — exact 2048 mechanics on a packed 64-bit board: sliding,
//!   merging, rewards, random tile spawning and terminal detection.
//! * [`ntuple`] — n-tuple network value functions: tuple geometry, index
//!   computation, symmetric sampling, multi-stage tables, redundant-table
//!   folding and a binary file format.
//! * [`learning`] — afterstate value learning: TD(λ), temporal coherence,
//!   Autostep, their delayed variants, multi-stage weight promotion and
//!   carousel episode scheduling.
//! * [`search`] — expectimax over the learned value function with a
//!   transposition table, fixed-depth and per-move time budgets.
//! * [`trainer`] — budget-driven training orchestration: parallel workers,
//!   periodic evaluation checkpoints, learning-curve CSV and resumable
//!   checkpoints.

pub mod game;
pub mod learning;
pub mod ntuple;
pub mod search;
pub mod stats;
pub mod trainer;
