//! Command-line front end for `combi-core` and a searchable store of
//! counting sequences.

pub mod cli;
pub mod store;

pub use cli::{run, Failure};
pub use store::{
    make_record, search_initial_values, search_keyword, verify, EcsRecord, Hit, LineError, Loaded, RecordError,
    RecordStore, StoredTerm,
};
