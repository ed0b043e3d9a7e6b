//! Every cleavage of a prefibration induces a lax action, the Grothendieck
//! construction of that action recovers the map, and different cleavages give
//! actions related by a change of cleavage.

use schreier::catalog::{Catalog, Payload};
use schreier::cleavage::{enumerate_cleavages, reconstruct, transport, CleavageChange};

fn main() -> schreier::Result<()> {
    let cat = Catalog::builtin();
    let Some(Payload::Hom(h)) = cat.get("s3_over_c2").map(|e| e.payload.clone()) else {
        unreachable!("builtin entry")
    };
    let cleavages = enumerate_cleavages(&h, 4096)?;
    println!("{} cleavages", cleavages.len());
    let first = &cleavages[0];
    let (g, iso) = reconstruct(first)?;
    println!("reconstructed order {} via {:?}", g.underlying.order(), iso.map());
    for other in &cleavages[1..] {
        let change = CleavageChange::between(first, other)?;
        let (_, _, verdict) = transport(&change);
        println!("eta {:?}: {verdict}", change.eta);
    }
    Ok(())
}
