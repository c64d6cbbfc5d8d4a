//! Text, LaTeX and JSON front ends for functions and operator expressions.

pub mod json;
pub mod parse;
pub mod render;

pub use parse::{parse_coefficient, parse_function, parse_matrix, parse_operator, ParseError, ParseErrorKind};
