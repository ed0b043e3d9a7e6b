//! A lax action whose gamma is not invertible: valid, but not pseudo, and its
//! Grothendieck projection is a prefibration that is not a fibration.

use std::sync::Arc;

use schreier::catalog::{Catalog, Payload};
use schreier::fibration::analyze;
use schreier::groth::groth;
use schreier::lax::validate_lax;

fn main() -> schreier::Result<()> {
    let Some(Payload::Action(a)) = Catalog::builtin().get("semilattice_c2").map(|e| e.payload.clone()) else {
        unreachable!("builtin entry")
    };
    for v in validate_lax(&a).verdicts {
        println!("{v}");
    }
    let g = groth(&Arc::clone(&a))?;
    let r = analyze(&g.projection);
    println!("prefibration {}, fibration {}", r.is_prefibration, r.is_fibration);
    Ok(())
}
