//! Shared helpers for the integration and acceptance suites: independent
//! oracles (rational-rank Betti numbers, exhaustive path search, GF(2) span
//! checks) and random instance generators. Everything here recomputes from
//! first principles instead of calling the code paths under test.

#![allow(dead_code)]

pub mod gen;
pub mod oracle;
