//! Text formats: expressions, automorphism files, JSON output and the
//! random word generator.

pub mod autfile;
pub mod gen;
pub mod json;
pub mod parse;

pub use autfile::{parse_automorphism, print_automorphism, print_generator, read_automorphism};
pub use gen::{gen_tame, GeneratorSpec};
pub use parse::{parse_in, parse_poly, print_poly};
