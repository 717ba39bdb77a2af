//! Prints the centered spherical-integral coefficients.

use loopeq_core::hciz::{hciz_series, named_map};
use loopeq_core::weight::format_rational;

fn main() {
    let order = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let s = hciz_series(order, true).expect("series");
    for n in 1..=order {
        let mut line = String::new();
        for (m, c) in named_map(&s, n) {
            let c = format_rational(&c);
            match (line.is_empty(), c.strip_prefix('-')) {
                (true, _) => line = format!("{c} {m}"),
                (false, Some(abs)) => line += &format!(" - {abs} {m}"),
                (false, None) => line += &format!(" + {c} {m}"),
            }
        }
        if line.is_empty() {
            line.push('0');
        }
        println!("F{n} = {line}");
    }
}
