pub mod alpha;
pub mod cli;
pub mod finset;
pub mod fs_engine;
pub mod oracle;
pub mod parity;
pub mod search;
pub mod semigroup;
pub mod suites;
