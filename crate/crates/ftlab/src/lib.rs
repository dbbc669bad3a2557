//! Simulation toolkit for fault-tolerant gadgets on the 7-qubit color code.
//!
//! The crate is layered bottom-up:
//! * [`circuit`]: circuit IR, Pauli strings, text format;
//! * [`stabilizer`] and [`statevector`]: the two simulation engines behind
//!   the common [`backend::Backend`] trait;
//! * [`noise`]: depolarizing fault placement and fixed fault injection;
//! * [`steane`]: code definition, decoder, logical fidelities, tomography;
//! * [`gadgets`]: circuit builders for every logical operation studied;
//! * [`verifier`]: exhaustive single-fault certification and pair counting;
//! * [`harness`]: Monte Carlo experiments, confidence intervals, reports.

pub mod backend;
pub mod circuit;
pub mod gadgets;
pub mod harness;
pub mod noise;
mod par;
pub mod stabilizer;
pub mod statevector;
pub mod steane;
pub mod verifier;
