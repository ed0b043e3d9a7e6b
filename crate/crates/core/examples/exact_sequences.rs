//! Both exact sequences for C4 over C2, printed as a JSON report.

use schreier::catalog::{Catalog, Payload};
use schreier::cleavage::canonical_cleavage;
use schreier::cohomology::verify_exact_sequences;

fn main() -> schreier::Result<()> {
    let Some(Payload::Hom(h)) = Catalog::builtin().get("c4_over_c2").map(|e| e.payload.clone()) else {
        unreachable!("builtin entry")
    };
    let r = verify_exact_sequences(&canonical_cleavage(&h)?, 0)?;
    println!("{}", serde_json::to_string_pretty(&r.to_json())?);
    Ok(())
}
