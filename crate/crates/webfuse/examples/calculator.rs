//! The calculator tool: arithmetic with standard precedence, real-valued
//! division, and defined error paths.
//!
//! Run with: cargo run --example calculator

use webfuse::tools::calculator;

fn main() {
    for expression in ["2+2", "(1+1)", "2+3*4-6/3", "10/4", "-(2+3)*2", "2*(3+4)"] {
        println!("{expression} = {}", calculator(expression).expect("well-formed"));
    }
    for broken in ["1/0", "2+", "(1+2", "2+x"] {
        println!("{broken} -> error: {}", calculator(broken).unwrap_err());
    }
}
