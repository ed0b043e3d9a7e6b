//! A directory of named JSON payloads: monoids, homomorphisms, lax actions and
//! modules. Monoids inside the other payloads are either inline objects or
//! the id (file stem) of a monoid entry.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::NModule;
use crate::error::{Error, Result};
use crate::generators;
use crate::groth::groth;
use crate::hom::MonoidHom;
use crate::lax::{quaternion_action, LaxAction};
use crate::monoid::{product_monoid, Elem, FiniteMonoid, MonoidJson};

pub const CATALOG_ENV: &str = "SCHREIER_CATALOG";

/// `$SCHREIER_CATALOG`, or `catalog` in the working directory.
pub fn catalog_dir() -> PathBuf {
    std::env::var_os(CATALOG_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("catalog"))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonoidRef {
    Id(String),
    Inline(MonoidJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HomFile {
    source: MonoidRef,
    target: MonoidRef,
    map: Vec<Elem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ActionFile {
    acting: MonoidRef,
    carrier: MonoidRef,
    phi: Vec<Vec<Elem>>,
    gamma: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModuleFile {
    acting: MonoidRef,
    carrier: MonoidRef,
    phi: Vec<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MonoidFile {
    #[serde(flatten)]
    monoid: MonoidJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Monoid(Arc<FiniteMonoid>),
    Hom(MonoidHom),
    Action(Arc<LaxAction>),
    Module(Arc<NModule>),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Monoid(_) => "monoid",
            Payload::Hom(_) => "hom",
            Payload::Action(_) => "action",
            Payload::Module(_) => "module",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub note: String,
    pub payload: Payload,
}

/// Looks up monoid ids: first among already known monoids, then as
/// `<id>.json` in each search directory.
#[derive(Debug, Default)]
pub struct Resolver {
    known: BTreeMap<String, Arc<FiniteMonoid>>,
    dirs: Vec<PathBuf>,
}

impl Resolver {
    pub fn new(dirs: Vec<PathBuf>) -> Self {
        Resolver {
            known: BTreeMap::new(),
            dirs,
        }
    }

    /// Resolver for a payload file: its own directory, then the catalog directory.
    pub fn for_file(path: &Path) -> Self {
        let mut dirs = Vec::new();
        if let Some(p) = path.parent() {
            dirs.push(if p.as_os_str().is_empty() { PathBuf::from(".") } else { p.to_path_buf() });
        }
        dirs.push(catalog_dir());
        Resolver::new(dirs)
    }

    pub fn monoid(&mut self, r: &MonoidRef) -> Result<Arc<FiniteMonoid>> {
        match r {
            MonoidRef::Inline(j) => Ok(Arc::new(FiniteMonoid::try_from(j.clone())?)),
            MonoidRef::Id(id) => {
                if let Some(m) = self.known.get(id) {
                    return Ok(Arc::clone(m));
                }
                for dir in &self.dirs {
                    let p = dir.join(format!("{id}.json"));
                    if p.is_file() {
                        let f: MonoidFile = serde_json::from_str(&fs::read_to_string(&p)?)?;
                        let m = Arc::new(FiniteMonoid::try_from(f.monoid)?);
                        self.known.insert(id.clone(), Arc::clone(&m));
                        return Ok(m);
                    }
                }
                Err(Error::Catalog(format!("unknown monoid id {id:?}")))
            }
        }
    }
}

/// Parses one payload, dispatching on its keys.
pub fn parse_payload(text: &str, resolver: &mut Resolver) -> Result<(Payload, String)> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let has = |k: &str| v.get(k).is_some();
    if has("map") {
        let f: HomFile = serde_json::from_value(v)?;
        let (s, t) = (resolver.monoid(&f.source)?, resolver.monoid(&f.target)?);
        Ok((Payload::Hom(MonoidHom::new(s, t, f.map)?), f.note.unwrap_or_default()))
    } else if has("gamma") {
        let f: ActionFile = serde_json::from_value(v)?;
        let (n, a) = (resolver.monoid(&f.acting)?, resolver.monoid(&f.carrier)?);
        Ok((Payload::Action(Arc::new(LaxAction::new(n, a, f.phi, f.gamma)?)), f.note.unwrap_or_default()))
    } else if has("phi") {
        let f: ModuleFile = serde_json::from_value(v)?;
        let (n, a) = (resolver.monoid(&f.acting)?, resolver.monoid(&f.carrier)?);
        Ok((Payload::Module(Arc::new(NModule::new(n, a, f.phi)?)), f.note.unwrap_or_default()))
    } else if has("table") {
        let f: MonoidFile = serde_json::from_value(v)?;
        Ok((Payload::Monoid(Arc::new(FiniteMonoid::try_from(f.monoid)?)), f.note.unwrap_or_default()))
    } else {
        Err(Error::Catalog("payload has none of map, gamma, phi, table".into()))
    }
}

fn read_payload(path: &Path) -> Result<Payload> {
    let text = fs::read_to_string(path)?;
    Ok(parse_payload(&text, &mut Resolver::for_file(path))?.0)
}

pub fn read_hom(path: &Path) -> Result<MonoidHom> {
    match read_payload(path)? {
        Payload::Hom(h) => Ok(h),
        p => Err(Error::Catalog(format!("{} holds a {}, expected a hom", path.display(), p.kind()))),
    }
}

pub fn read_action(path: &Path) -> Result<Arc<LaxAction>> {
    match read_payload(path)? {
        Payload::Action(a) => Ok(a),
        p => Err(Error::Catalog(format!("{} holds a {}, expected an action", path.display(), p.kind()))),
    }
}

/// A module file, or an action file whose cocycle is ignored.
pub fn read_module(path: &Path) -> Result<Arc<NModule>> {
    match read_payload(path)? {
        Payload::Module(m) => Ok(m),
        Payload::Action(a) => Ok(Arc::new(NModule::from_action(&a)?)),
        p => Err(Error::Catalog(format!("{} holds a {}, expected a module", path.display(), p.kind()))),
    }
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn homs(&self) -> impl Iterator<Item = (&str, &MonoidHom)> {
        self.entries.iter().filter_map(|e| match &e.payload {
            Payload::Hom(h) => Some((e.id.as_str(), h)),
            _ => None,
        })
    }

    pub fn actions(&self) -> impl Iterator<Item = (&str, &Arc<LaxAction>)> {
        self.entries.iter().filter_map(|e| match &e.payload {
            Payload::Action(a) => Some((e.id.as_str(), a)),
            _ => None,
        })
    }

    pub fn modules(&self) -> impl Iterator<Item = (&str, &Arc<NModule>)> {
        self.entries.iter().filter_map(|e| match &e.payload {
            Payload::Module(m) => Some((e.id.as_str(), m)),
            _ => None,
        })
    }

    pub fn monoids(&self) -> impl Iterator<Item = (&str, &Arc<FiniteMonoid>)> {
        self.entries.iter().filter_map(|e| match &e.payload {
            Payload::Monoid(m) => Some((e.id.as_str(), m)),
            _ => None,
        })
    }

    fn push(&mut self, id: &str, note: &str, payload: Payload) {
        self.entries.push(CatalogEntry {
            id: id.into(),
            note: note.into(),
            payload,
        });
    }

    /// Reads every `*.json` in `dir`. Entries that fail to parse or validate
    /// are returned separately with their error.
    pub fn load(dir: &Path) -> Result<(Catalog, Vec<(String, Error)>)> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let mut resolver = Resolver::new(vec![dir.to_path_buf()]);
        let mut cat = Catalog::default();
        let mut bad = Vec::new();
        for p in paths {
            let id = p.file_stem().expect("json file").to_string_lossy().into_owned();
            match fs::read_to_string(&p).map_err(Error::from).and_then(|t| parse_payload(&t, &mut resolver)) {
                Ok((payload, note)) => cat.push(&id, &note, payload),
                Err(e) => bad.push((id, e)),
            }
        }
        Ok((cat, bad))
    }

    fn monoid_ref(&self, m: &FiniteMonoid) -> MonoidRef {
        self.monoids()
            .find(|(_, x)| x.as_ref() == m)
            .map(|(id, _)| MonoidRef::Id(id.into()))
            .unwrap_or_else(|| MonoidRef::Inline(m.to_json()))
    }

    /// Serialized payload of one entry; named monoids are referenced by id.
    pub fn render(&self, e: &CatalogEntry) -> String {
        let note = (!e.note.is_empty()).then(|| e.note.clone());
        let value = match &e.payload {
            Payload::Monoid(m) => serde_json::to_value(MonoidFile {
                monoid: m.to_json(),
                note,
            }),
            Payload::Hom(h) => serde_json::to_value(HomFile {
                source: self.monoid_ref(h.source()),
                target: self.monoid_ref(h.target()),
                map: h.map().to_vec(),
                note,
            }),
            Payload::Action(a) => serde_json::to_value(ActionFile {
                acting: self.monoid_ref(a.acting()),
                carrier: self.monoid_ref(a.carrier()),
                phi: a.phi_rows(),
                gamma: a.gamma_rows(),
                note,
            }),
            Payload::Module(m) => serde_json::to_value(ModuleFile {
                acting: self.monoid_ref(m.acting()),
                carrier: self.monoid_ref(m.carrier()),
                phi: m.phi_rows(),
                note,
            }),
        }
        .expect("payload serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("json");
        s.push('\n');
        s
    }

    /// `(file name, contents)` for every entry, sorted by id.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> =
            self.entries.iter().map(|e| (format!("{}.json", e.id), self.render(e))).collect();
        out.sort();
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (name, text) in self.files() {
            fs::write(dir.join(name), text)?;
        }
        Ok(())
    }

    /// The shipped catalog, built from closed-form constructions.
    pub fn builtin() -> Catalog {
        builtin_catalog().expect("builtin catalog is valid")
    }
}

fn arc(m: Result<FiniteMonoid>) -> Result<Arc<FiniteMonoid>> {
    m.map(Arc::new)
}

fn hom(s: &Arc<FiniteMonoid>, t: &Arc<FiniteMonoid>, f: impl Fn(Elem) -> Elem) -> Result<MonoidHom> {
    MonoidHom::new(Arc::clone(s), Arc::clone(t), s.elements().map(f).collect())
}

fn builtin_catalog() -> Result<Catalog> {
    let trivial = Arc::new(FiniteMonoid::trivial());
    let c2 = arc(generators::cyclic_group(2))?;
    let c3 = arc(generators::cyclic_group(3))?;
    let c4 = arc(generators::cyclic_group(4))?;
    let c6 = arc(generators::cyclic_group(6))?;
    let klein4 = Arc::new(generators::klein4());
    let q8 = Arc::new(generators::q8());
    let s3 = arc(generators::symmetric(3))?;
    let c33 = arc(generators::cyclic_monoid(3, 3))?;
    let c12 = arc(generators::cyclic_monoid(1, 2))?;
    let c22 = arc(generators::cyclic_monoid(2, 2))?;
    let l2 = arc(generators::truncated_add(1))?;
    let l3 = arc(generators::truncated_add(2))?;
    let t2 = arc(generators::full_transformation(2))?;
    let quaternion = Arc::new(quaternion_action());
    let sign = Arc::clone(quaternion.carrier());

    let mut cat = Catalog::default();
    for (id, m, note) in [
        ("trivial", &trivial, "one-element monoid"),
        ("c2", &c2, "cyclic group of order 2"),
        ("c3", &c3, "cyclic group of order 3"),
        ("c4", &c4, "cyclic group of order 4"),
        ("c6", &c6, "cyclic group of order 6"),
        ("klein4", &klein4, "Klein four-group"),
        ("q8", &q8, "quaternion group"),
        ("s3", &s3, "symmetric group on three points"),
        ("c33", &c33, "cyclic monoid <t | t^6 = t^3>"),
        ("c12", &c12, "cyclic monoid <t | t^3 = t>"),
        ("c22", &c22, "cyclic monoid <t | t^4 = t^2>"),
        ("l2", &l2, "addition on {0, 1} capped at 1"),
        ("l3", &l3, "addition on {0, 1, 2} capped at 2"),
        ("t2", &t2, "all self-maps of a two-point set"),
        ("sign", &sign, "the group {1, -1}"),
    ] {
        cat.push(id, note, Payload::Monoid(Arc::clone(m)));
    }

    let sign_c2 = Arc::new(LaxAction::new(
        Arc::clone(&c2),
        Arc::clone(&c2),
        vec![vec![0, 0], vec![1, 1]],
        vec![vec![0, 0], vec![0, 1]],
    )?);
    let semilattice = Arc::new(LaxAction::new(
        Arc::clone(&c2),
        Arc::clone(&l2),
        vec![vec![0, 0], vec![1, 1]],
        vec![vec![0, 0], vec![0, 1]],
    )?);
    let inversion = Arc::new(LaxAction::new(
        Arc::clone(&c2),
        Arc::clone(&c3),
        vec![vec![0, 0], vec![1, 2], vec![2, 1]],
        vec![vec![0, 0], vec![0, 0]],
    )?);
    let trivial_c2 = Arc::new(LaxAction::trivial(&c2, &c2));
    let trivial_v4 = Arc::new(LaxAction::trivial(&klein4, &c2));

    let sign_of = |x: Elem| usize::from(s3.element_order(x) == Some(2));
    let homs: Vec<(&str, &str, MonoidHom)> = vec![
        ("c33_to_c3", "t^i to t^(i mod 3); a prefibration that is not a fibration", generators::c33_to_c3()),
        ("c12_to_c2", "t^i to t^(i mod 2)", hom(&c12, &c2, |i| i % 2)?),
        ("c22_to_c2", "t^i to t^(i mod 2)", hom(&c22, &c2, |i| i % 2)?),
        ("q8_over_klein4", "quaternion group over the Klein four-group", groth(&quaternion)?.projection),
        ("c4_over_c2", "C4 built from the sign cocycle over C2", groth(&sign_c2)?.projection),
        ("c4_to_c2", "reduction mod 2", generators::cyclic_reduction(4, 2)?),
        ("c6_to_c3", "reduction mod 3", generators::cyclic_reduction(6, 3)?),
        ("c6_to_c2", "reduction mod 2", generators::cyclic_reduction(6, 2)?),
        ("klein4_to_c2", "first projection of C2 x C2", product_monoid(&c2, &c2)?.first),
        ("c3xc3_to_c3", "first projection of C3 x C3", product_monoid(&c3, &c3)?.first),
        ("klein4xc2_to_klein4", "trivial extension of the Klein four-group by C2", groth(&trivial_v4)?.projection),
        ("s3_sign", "sign of a permutation", hom(&s3, &c2, sign_of)?),
        ("s3_over_c2", "C3 with inversion, split over C2", groth(&inversion)?.projection),
        ("id_c3", "identity", MonoidHom::identity(&c3)),
        ("id_klein4", "identity", MonoidHom::identity(&klein4)),
        ("id_l2", "identity", MonoidHom::identity(&l2)),
        ("s3_to_trivial", "collapse", MonoidHom::trivial(&s3, &trivial)),
        ("q8_to_trivial", "collapse", MonoidHom::trivial(&q8, &trivial)),
        ("c33_to_trivial", "collapse", MonoidHom::trivial(&c33, &trivial)),
        ("l3_to_trivial", "collapse", MonoidHom::trivial(&l3, &trivial)),
        ("trivial_into_c2", "inclusion of the identity; not a prefibration", MonoidHom::trivial(&trivial, &c2)),
        ("l2xl2_to_l2", "first projection of L2 x L2", product_monoid(&l2, &l2)?.first),
        ("l3_to_l2", "x to min(x, 1)", hom(&l3, &l2, |x| x.min(1))?),
        ("t2_to_l2", "permutations to 0, constants to 1", hom(&t2, &l2, |x| usize::from(!t2.is_unit(x)))?),
        ("l2_over_c2_lax", "semilattice coefficients; lax but not pseudo", groth(&semilattice)?.projection),
        ("c2_over_c2_trivial", "trivial extension of C2 by C2", groth(&trivial_c2)?.projection),
    ];
    for (id, note, h) in homs {
        cat.push(id, note, Payload::Hom(h));
    }

    for (id, note, a) in [
        ("quaternion_action", "sign cocycle on the Klein four-group", &quaternion),
        ("sign_c2", "sign cocycle on C2", &sign_c2),
        ("semilattice_c2", "C2 acting trivially on L2 with a non-invertible cocycle", &semilattice),
        ("inversion_c2_c3", "C2 acting on C3 by inversion", &inversion),
        ("trivial_c2_c2", "trivial action, trivial cocycle", &trivial_c2),
        ("trivial_klein4_c2", "trivial action, trivial cocycle", &trivial_v4),
    ] {
        cat.push(id, note, Payload::Action(Arc::clone(a)));
    }

    for (id, note, m) in [
        ("module_c2_c2", "C2 acting trivially on C2", NModule::trivial(&c2, &c2)?),
        ("module_klein4_c2", "Klein four-group acting trivially on C2", NModule::trivial(&klein4, &c2)?),
        ("module_c2_c3_inversion", "C2 acting on C3 by inversion", NModule::from_action(&inversion)?),
        ("module_c2_l2", "C2 acting trivially on L2", NModule::trivial(&c2, &l2)?),
        ("module_c3_c2", "C3 acting trivially on C2", NModule::trivial(&c3, &c2)?),
    ] {
        cat.push(id, note, Payload::Module(Arc::new(m)));
    }
    cat.entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(cat)
}
