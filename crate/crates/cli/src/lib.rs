//! Support library for the `ridgelet` binary: field-file serialization and
//! check-report formatting. Kept as a library so integration tests can read
//! back what the binary writes.

pub mod field_file;
pub mod report;
