//! The quaternion group as the Grothendieck construction of a pseudo action
//! of the Klein four-group on {±1}.

use std::sync::Arc;

use schreier::fibration::analyze;
use schreier::generators;
use schreier::groth::groth;
use schreier::iso::find_isomorphism;
use schreier::lax::{quaternion_action, validate_lax};

fn main() -> schreier::Result<()> {
    let action = Arc::new(quaternion_action());
    let lax = validate_lax(&action);
    println!("valid lax action: {}, pseudo: {}", lax.valid(), lax.is_pseudo);

    let g = groth(&action)?;
    println!("order {}, group: {}", g.underlying.order(), g.underlying.is_group());
    let q8 = Arc::new(generators::q8());
    match find_isomorphism(&g.underlying, &q8) {
        Some(iso) => println!("isomorphic to Q8 via {:?}", iso.map()),
        None => println!("not isomorphic to Q8"),
    }
    let r = analyze(&g.projection);
    println!("projection: prefibration {}, fibration {}", r.is_prefibration, r.is_fibration);
    Ok(())
}
