//! Classes of regular 2-cocycles of C2 with coefficients in C2, and the
//! extensions they build (C4 and the Klein four-group).

use std::sync::Arc;

use schreier::cohomology::{extension_from_cocycle, h2, verify_h2_bijection, NModule};
use schreier::generators::{cyclic_group, klein4};
use schreier::iso::find_isomorphism;

fn main() -> schreier::Result<()> {
    let c2 = Arc::new(cyclic_group(2)?);
    let module = Arc::new(NModule::trivial(&c2, &c2)?);
    let classes = h2(&module, true)?;
    let c4 = Arc::new(cyclic_group(4)?);
    let v4 = Arc::new(klein4());
    for i in classes.representatives() {
        let cocycle = &classes.cocycles[i];
        let ext = extension_from_cocycle(cocycle)?;
        let name = if find_isomorphism(&ext.total, &c4).is_some() {
            "C4"
        } else if find_isomorphism(&ext.total, &v4).is_some() {
            "V4"
        } else {
            "?"
        };
        println!("gamma {:?} -> {name}, schreier {}", cocycle.rows(), ext.is_schreier());
    }
    let b = verify_h2_bijection(&module, true)?;
    println!("{} classes, {} congruence classes", b.classes, b.congruence_classes);
    for v in &b.verdicts {
        println!("  {v}");
    }
    Ok(())
}
