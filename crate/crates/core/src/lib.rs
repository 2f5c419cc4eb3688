pub mod appendix_checks;
pub mod branching;
pub mod cli;
pub mod brauer;
pub mod error;
pub mod free_energy;
pub mod group_chars;
pub mod interval;
pub mod partitions;
pub mod spectra;
pub mod tableaux;
pub mod tensor;

pub use error::{Error, Result};
pub use partitions::{LambdaRhoPair, Partition};

