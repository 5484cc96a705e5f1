//! The scripting front end: parse a script, run it against the engine,
//! and render a deterministic report.

mod run;
mod script;

pub use run::{
    exit_code, run, run_text, Options, Record, Report, EXIT_CONTRACT, EXIT_ENGINE, EXIT_OK,
    EXIT_PARSE,
};
pub use script::{
    parse, Arg, ConeDef, FalsifyProp, Pred, Quantity, Script, Statement, Stmt, FORMAT_VERSION,
    ORACLE_NAMES,
};
