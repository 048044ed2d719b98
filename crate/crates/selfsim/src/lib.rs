//! Script language, file formats and command runner on top of `selfsim_core`.
//!
//! ```text
//! context m=2 L=6
//! gen a = (e, a) (1 2)
//! portrait a L=3
//! assert a^{2} = a@1
//! ```

pub mod ast;
pub mod error;
pub mod formats;
pub mod parse;
pub mod print;
pub mod run;
pub mod suites;

pub use error::{CliError, ExitCode, ParseError};
pub use parse::parse;
pub use print::print;
pub use run::{run, Format, Options, Summary};
