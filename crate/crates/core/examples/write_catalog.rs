//! Writes the builtin catalog to a directory (default `catalog`) and reloads it.

use std::path::PathBuf;

use schreier::catalog::Catalog;

fn main() -> schreier::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("catalog"));
    let cat = Catalog::builtin();
    cat.write(&dir)?;
    let (back, broken) = Catalog::load(&dir)?;
    println!("wrote {} entries to {}, reloaded {}, {} broken", cat.entries().len(), dir.display(), back.entries().len(), broken.len());
    Ok(())
}
