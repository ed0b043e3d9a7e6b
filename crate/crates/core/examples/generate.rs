//! Closed-form monoids and their JSON tables.

use schreier::generators::{cyclic_monoid, full_transformation, truncated_add};

fn main() -> schreier::Result<()> {
    for m in [cyclic_monoid(3, 3)?, truncated_add(4)?, full_transformation(2)?] {
        println!("order {:>2} commutative {:<5} {}", m.order(), m.is_commutative(), serde_json::to_string(&m)?);
    }
    Ok(())
}
