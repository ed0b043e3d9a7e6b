use std::path::PathBuf;

use schreier::catalog::Catalog;

fn shipped() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[test]
fn shipped_catalog_matches_builtin() {
    let dir = shipped();
    let files = Catalog::builtin().files();
    for (name, body) in &files {
        let on_disk = std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&on_disk, body, "{name} is stale; rerun write-catalog");
    }
    let count = std::fs::read_dir(&dir).unwrap().filter(|e| {
        e.as_ref().unwrap().path().extension().is_some_and(|x| x == "json")
    }).count();
    assert_eq!(count, files.len());
}

#[test]
fn shipped_catalog_loads_cleanly() {
    let (cat, broken) = Catalog::load(&shipped()).unwrap();
    assert!(broken.is_empty(), "{broken:?}");
    assert!(cat.homs().count() >= 20);
    assert_eq!(cat.entries().len(), Catalog::builtin().entries().len());
}
