pub mod cli;
pub mod eigen;
pub mod ensemble;
pub mod error;
pub mod harness;
pub mod merge;
pub mod moments;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod words;
