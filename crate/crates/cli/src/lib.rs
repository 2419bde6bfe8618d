//! Command-line layer over `eiszero`: configuration, CSV/SVG/JSON output and
//! the check subcommands.

pub mod commands;
pub mod config;
pub mod plot;
pub mod report;

use eiszero::Error;

/// 0 success or advisory, 1 verification failure, 2 configuration error,
/// 3 numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ValenceMismatch { .. } | Error::DegreeMismatch(..) | Error::CardinalityMismatch(..) => 1,
        Error::Config(_)
        | Error::BadWeight(_)
        | Error::NotGood(..)
        | Error::UnknownGroup(_)
        | Error::UnknownCusp(_)
        | Error::UnrelatedGroups(..)
        | Error::Registry(_)
        | Error::Io(_) => 2,
        _ => 3,
    }
}
