//! Minimizes the average concurrence over decompositions of a few qutrit
//! Werner states and compares with the closed form.
//!
//! cargo run --release -p qutrit-core --example werner_roof

use qutrit_core::decomp::{minimize_decomposition, MinimizeOptions};
use qutrit_core::states::werner;

fn main() -> qutrit_core::Result<()> {
    let options = MinimizeOptions {
        members: Some(9),
        ..MinimizeOptions::default()
    };
    println!(
        "{:>4}  {:>9}  {:>9}  {:>10}  {:>7}",
        "x", "min", "closed", "gap", "time"
    );
    for x in [0.1, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let r = minimize_decomposition(&werner(x)?, &options)?.report;
        println!(
            "{x:>4.1}  {:>9.6}  {:>9.6}  {:>10.3e}  {:>6.2}s",
            r.min_value, r.closed_form, r.gap, r.wall_time
        );
    }
    Ok(())
}
