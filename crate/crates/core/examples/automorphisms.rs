//! Automorphisms of Q8 fixing {±1} setwise and preserving cartesian elements,
//! through their (theta, eta, xi) parameters.

use schreier::automorphism::{aut_a, compute_c, oracle_check, rho, rho_fibers};
use schreier::catalog::{Catalog, Payload};
use schreier::cleavage::canonical_cleavage;

fn main() -> schreier::Result<()> {
    let Some(Payload::Hom(h)) = Catalog::builtin().get("q8_over_klein4").map(|e| e.payload.clone()) else {
        unreachable!("builtin entry")
    };
    let cl = canonical_cleavage(&h)?;
    let auts = aut_a(&cl)?;
    println!("{} automorphisms", auts.len());
    for t in auts.iter().take(4) {
        println!("  theta {:?} eta {:?} xi {:?} -> {:?}", t.theta, t.eta, t.xi, t.psi);
    }
    let c = compute_c(&cl)?;
    let table = rho(&auts, &c, &cl);
    println!("|C| = {}, fibres of rho: {:?}", c.len(), rho_fibers(&table));
    println!("{}", oracle_check(&cl)?);
    Ok(())
}
