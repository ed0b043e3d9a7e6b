//! C(3,3) -> C3 has a precartesian element above every point of the base but
//! only one cartesian element, so it is a prefibration and not a fibration.

use schreier::cleavage::{canonical_cleavage, extract_action};
use schreier::fibration::{analyze, check_closure_lemmas};
use schreier::generators::c33_to_c3;

fn main() -> schreier::Result<()> {
    let h = c33_to_c3();
    let r = analyze(&h);
    println!("Pcar = {:?}", r.pcar);
    println!("Car  = {:?}", r.car);
    println!("prefibration {}, fibration {}", r.is_prefibration, r.is_fibration);
    for v in check_closure_lemmas(&h) {
        println!("  {v}");
    }
    // the induced action is lax but not pseudo
    let act = extract_action(&canonical_cleavage(&h)?);
    println!("gamma = {:?}, pseudo {}", act.gamma_rows(), act.is_pseudo());
    Ok(())
}
