//! Library side of the command line crate: the verification battery that
//! backs `equichar verify` and the acceptance tests.

pub mod battery;
