//! Command-line front end; see the binary for the entry point.

use std::io::Write;

/// Dispatches a full argv (excluding the program name); returns the exit
/// code. All output goes through `out` so tests can pin bytes.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let _ = (args, out);
    2
}
