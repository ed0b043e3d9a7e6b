//! The two exact sequences ending in H² for a regular Schreier extension.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cohomologous, enumerate_z1, Cocycle2, NModule};
use crate::automorphism::{aut_a, compute_c, materialize, AutTriple};
use crate::cleavage::{enumerate_cleavages, extract_action, kernel_units, Cleavage};
use crate::error::{Error, Result};
use crate::fibration::analyze;
use crate::iso::automorphisms;
use crate::monoid::Elem;
use crate::util::pointed_count;
use crate::verdict::Verdict;

/// Cleavage counts up to this are checked exhaustively, larger ones by sampling.
pub const EXHAUSTIVE_CLEAVAGES: usize = 256;
pub const SAMPLED_CLEAVAGES: usize = 32;

fn identity_perm(k: usize) -> Vec<Elem> {
    (0..k).collect()
}

/// The module `(A, φ)` of a regular Schreier extension, with `γ` read off `cl`.
pub fn module_from_cleavage(cl: &Cleavage) -> Result<(Arc<NModule>, Vec<Elem>)> {
    if !cl.kernel().is_commutative() {
        return Err(Error::NotRegularSchreier("kernel is not commutative".into()));
    }
    if !analyze(cl.hom()).is_fibration {
        return Err(Error::NotRegularSchreier("map is not a fibration".into()));
    }
    let act = extract_action(cl);
    let module = NModule::from_action(&act).map_err(|e| Error::NotRegularSchreier(e.to_string()))?;
    let gamma: Vec<Elem> = act.gamma_rows().into_iter().flatten().collect();
    if let Some(i) = gamma.iter().position(|&g| !cl.kernel().is_unit(g)) {
        let no = cl.hom().target().order();
        return Err(Error::NotRegular { m: i / no, n: i % no });
    }
    Ok((Arc::new(module), gamma))
}

/// The subgroups of the automorphism group cut out by fixing `θ`, `η` or both.
#[derive(Debug, Clone, Serialize)]
pub struct AutSubgroups {
    pub auts: Vec<AutTriple>,
    /// indices into `auts`
    pub fixing_both: Vec<usize>,
    pub fixing_a: Vec<usize>,
    pub fixing_n: Vec<usize>,
    pub c1: Vec<Vec<Elem>>,
    pub c2: Vec<Vec<Elem>>,
    pub verdicts: Vec<Verdict>,
}

pub fn aut_subgroups(cl: &Cleavage) -> Result<AutSubgroups> {
    let (module, _) = module_from_cleavage(cl)?;
    let auts = aut_a(cl)?;
    let c = compute_c(cl)?;
    let (ka, kn) = (cl.kernel().order(), cl.hom().target().order());
    let (ida, idn) = (identity_perm(ka), identity_perm(kn));
    let pick = |f: &dyn Fn(&AutTriple) -> bool| -> Vec<usize> {
        auts.iter().enumerate().filter(|(_, t)| f(t)).map(|(i, _)| i).collect()
    };
    let fixing_both = pick(&|t| t.theta == ida && t.eta == idn);
    let fixing_a = pick(&|t| t.theta == ida);
    let fixing_n = pick(&|t| t.eta == idn);

    let c1: Vec<Vec<Elem>> = c.pairs.iter().filter(|(_, e)| *e == idn).map(|(t, _)| t.clone()).collect();
    let c2: Vec<Vec<Elem>> = c.pairs.iter().filter(|(t, _)| *t == ida).map(|(_, e)| e.clone()).collect();
    let (a, n) = (module.carrier(), module.acting());
    let c1_direct: Vec<Vec<Elem>> = automorphisms(a)
        .into_iter()
        .filter(|th| n.elements().all(|b| a.elements().all(|x| th[module.phi(b, x)] == module.phi(b, th[x]))))
        .collect();
    let c2_direct: Vec<Vec<Elem>> = automorphisms(n)
        .into_iter()
        .filter(|et| n.elements().all(|b| a.elements().all(|x| module.phi(et[b], x) == module.phi(b, x))))
        .collect();
    let sorted = |v: &[Vec<Elem>]| v.iter().cloned().collect::<BTreeSet<_>>();

    let hom_check = |name: &str, members: &[usize], part: &dyn Fn(&AutTriple) -> &Vec<Elem>| {
        let index: std::collections::HashMap<&[Elem], usize> =
            auts.iter().enumerate().map(|(i, t)| (t.psi.as_slice(), i)).collect();
        let mut bad = None;
        'outer: for &i in members {
            for &j in members {
                let st: Vec<Elem> = auts[j].psi.iter().map(|&x| auts[i].psi[x]).collect();
                let composed: Vec<Elem> = part(&auts[j]).iter().map(|&x| part(&auts[i])[x]).collect();
                let ok = index.get(st.as_slice()).is_some_and(|&k| *part(&auts[k]) == composed);
                if !ok {
                    bad = Some(format!("{i} after {j}"));
                    break 'outer;
                }
            }
        }
        Verdict::from_witness(name, bad)
    };
    let verdicts = vec![
        Verdict::check("c1-matches-commuting-automorphisms", sorted(&c1) == sorted(&c1_direct), || {
            format!("{} from C, {} direct", c1.len(), c1_direct.len())
        }),
        Verdict::check("c2-matches-action-preserving-automorphisms", sorted(&c2) == sorted(&c2_direct), || {
            format!("{} from C, {} direct", c2.len(), c2_direct.len())
        }),
        hom_check("rho1-homomorphism", &fixing_n, &|t| &t.theta),
        hom_check("rho2-homomorphism", &fixing_a, &|t| &t.eta),
    ];
    Ok(AutSubgroups {
        auts,
        fixing_both,
        fixing_a,
        fixing_n,
        c1,
        c2,
        verdicts,
    })
}

/// `Z¹(N, A) ≅ Aut^{A,N}` via `ξ ↦ (x ↦ x ι(ξ(σx)))`.
pub fn z1_iso(cl: &Cleavage, module: &NModule, subgroups: &AutSubgroups) -> Vec<Verdict> {
    let z1 = enumerate_z1(module);
    let (ka, kn) = (cl.kernel().order(), cl.hom().target().order());
    let (ida, idn) = (identity_perm(ka), identity_perm(kn));
    let m = cl.hom().source();
    let images: Vec<Vec<Elem>> = z1.iter().map(|z| materialize(cl, &ida, &idn, &z.xi)).collect();
    let formula = z1
        .iter()
        .zip(&images)
        .find(|(z, psi)| {
            m.elements()
                .any(|x| psi[x] != m.mul(x, cl.embed().apply(z.xi[cl.hom().apply(x)])))
        })
        .map(|(z, _)| format!("xi {:?}", z.xi));
    let target: BTreeSet<&Vec<Elem>> = subgroups.fixing_both.iter().map(|&i| &subgroups.auts[i].psi).collect();
    let image: BTreeSet<&Vec<Elem>> = images.iter().collect();
    let a = module.carrier();
    let hom = (0..z1.len())
        .flat_map(|i| (0..z1.len()).map(move |j| (i, j)))
        .find(|&(i, j)| {
            let prod: Vec<Elem> = z1[i].xi.iter().zip(&z1[j].xi).map(|(&x, &y)| a.mul(x, y)).collect();
            let composed: Vec<Elem> = images[j].iter().map(|&x| images[i][x]).collect();
            z1.iter().position(|z| z.xi == prod).map(|k| &images[k]) != Some(&composed)
        })
        .map(|(i, j)| format!("{i}, {j}"));
    vec![
        Verdict::from_witness("z1-translation-formula", formula),
        Verdict::check("z1-injective", image.len() == z1.len(), || "two cocycles share an image".into()),
        Verdict::check("z1-onto-fixing-both", image == target, || {
            format!("{} cocycles, {} automorphisms", z1.len(), target.len())
        }),
        Verdict::from_witness("z1-group-iso", hom),
    ]
}

/// `λ₁(θ)_{m,n} = γ_{m,n} θ(γ_{m,n})⁻¹`.
pub fn lambda1(theta: &[Elem], cl: &Cleavage) -> Result<Cocycle2> {
    let (module, gamma) = module_from_cleavage(cl)?;
    let a = module.carrier();
    let table = gamma
        .iter()
        .map(|&g| a.mul(g, a.inverse(theta[g]).expect("regular")))
        .collect();
    Cocycle2::new(&module, table)
}

/// `λ₂(η)_{m,n} = γ_{η(m),η(n)} γ_{m,n}⁻¹`.
pub fn lambda2(eta: &[Elem], cl: &Cleavage) -> Result<Cocycle2> {
    let (module, gamma) = module_from_cleavage(cl)?;
    let (a, n) = (module.carrier(), module.acting());
    let no = n.order();
    let table = (0..no * no)
        .map(|i| {
            let (m, k) = (i / no, i % no);
            a.mul(gamma[eta[m] * no + eta[k]], a.inverse(gamma[i]).expect("regular"))
        })
        .collect();
    Cocycle2::new(&module, table)
}

/// Every cleavage if there are at most [`EXHAUSTIVE_CLEAVAGES`], otherwise
/// [`SAMPLED_CLEAVAGES`] random twists of `cl` drawn from `seed`.
pub fn cleavage_sample(cl: &Cleavage, seed: u64) -> Result<Vec<Cleavage>> {
    let units = kernel_units(cl);
    let n = cl.hom().target();
    let count = pointed_count(n.order(), units.len()).unwrap_or(u128::MAX);
    if count <= EXHAUSTIVE_CLEAVAGES as u128 {
        return enumerate_cleavages(cl.hom(), EXHAUSTIVE_CLEAVAGES);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SAMPLED_CLEAVAGES)
        .map(|_| {
            let eta: Vec<Elem> = n
                .elements()
                .map(|b| {
                    if b == n.identity() {
                        cl.kernel().identity()
                    } else {
                        units[rng.gen_range(0..units.len())]
                    }
                })
                .collect();
            cl.twist(&eta)
        })
        .collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ExactCounts {
    pub aut: usize,
    pub fixing_both: usize,
    pub fixing_a: usize,
    pub fixing_n: usize,
    pub c1: usize,
    pub c2: usize,
    pub z1: usize,
    pub cleavages_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactReport {
    pub counts: ExactCounts,
    pub verdicts: Vec<Verdict>,
}

impl ExactReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Checks exactness of
/// `0 -> Z¹ -> Aut^N_A -> C₁ -> H²` and `0 -> Z¹ -> Aut^A -> C₂ -> H²`.
pub fn verify_exact_sequences(cl: &Cleavage, seed: u64) -> Result<ExactReport> {
    let (module, _) = module_from_cleavage(cl)?;
    let sub = aut_subgroups(cl)?;
    let mut verdicts = sub.verdicts.clone();
    verdicts.extend(z1_iso(cl, &module, &sub));

    let (ka, kn) = (cl.kernel().order(), cl.hom().target().order());
    let (ida, idn) = (identity_perm(ka), identity_perm(kn));
    let trivial = Cocycle2::new(&module, module.trivial_cocycle())?;
    let fixing_both: BTreeSet<usize> = sub.fixing_both.iter().copied().collect();

    // kernels
    let ker1: BTreeSet<usize> = sub.fixing_n.iter().copied().filter(|&i| sub.auts[i].theta == ida).collect();
    let ker2: BTreeSet<usize> = sub.fixing_a.iter().copied().filter(|&i| sub.auts[i].eta == idn).collect();
    verdicts.push(Verdict::check("kernel-rho1", ker1 == fixing_both, || format!("{ker1:?}")));
    verdicts.push(Verdict::check("kernel-rho2", ker2 == fixing_both, || format!("{ker2:?}")));

    // images against the λ-kernels
    let lam1: Vec<Cocycle2> = sub.c1.iter().map(|t| lambda1(t, cl)).collect::<Result<_>>()?;
    let lam2: Vec<Cocycle2> = sub.c2.iter().map(|e| lambda2(e, cl)).collect::<Result<_>>()?;
    let img1: BTreeSet<&Vec<Elem>> = sub.fixing_n.iter().map(|&i| &sub.auts[i].theta).collect();
    let img2: BTreeSet<&Vec<Elem>> = sub.fixing_a.iter().map(|&i| &sub.auts[i].eta).collect();
    let ker_l1: BTreeSet<&Vec<Elem>> = sub
        .c1
        .iter()
        .zip(&lam1)
        .filter(|(_, l)| cohomologous(l, &trivial).is_some())
        .map(|(t, _)| t)
        .collect();
    let ker_l2: BTreeSet<&Vec<Elem>> = sub
        .c2
        .iter()
        .zip(&lam2)
        .filter(|(_, l)| cohomologous(l, &trivial).is_some())
        .map(|(e, _)| e)
        .collect();
    verdicts.push(Verdict::check("image-rho1-is-kernel-lambda1", img1 == ker_l1, || {
        format!("image {} elements, kernel {}", img1.len(), ker_l1.len())
    }));
    verdicts.push(Verdict::check("image-rho2-is-kernel-lambda2", img2 == ker_l2, || {
        format!("image {} elements, kernel {}", img2.len(), ker_l2.len())
    }));

    // λ does not depend on the cleavage up to cohomology
    let others = cleavage_sample(cl, seed)?;
    let mut independent = None;
    for other in &others {
        for (t, l) in sub.c1.iter().zip(&lam1) {
            let l2 = lambda1(t, other)?;
            if l2.module != module || cohomologous(l, &l2).is_none() {
                independent.get_or_insert_with(|| format!("lambda1 at kappa {:?}", other.kappa()));
            }
        }
        for (e, l) in sub.c2.iter().zip(&lam2) {
            let l2 = lambda2(e, other)?;
            if l2.module != module || cohomologous(l, &l2).is_none() {
                independent.get_or_insert_with(|| format!("lambda2 at kappa {:?}", other.kappa()));
            }
        }
    }
    verdicts.push(Verdict::from_witness("lambda-cleavage-independent", independent));

    Ok(ExactReport {
        counts: ExactCounts {
            aut: sub.auts.len(),
            fixing_both: sub.fixing_both.len(),
            fixing_a: sub.fixing_a.len(),
            fixing_n: sub.fixing_n.len(),
            c1: sub.c1.len(),
            c2: sub.c2.len(),
            z1: enumerate_z1(&module).len(),
            cleavages_checked: others.len(),
        },
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cleavage::canonical_cleavage;
    use crate::cohomology::{extension_from_cocycle, h2};
    use crate::generators;
    use crate::hom::MonoidHom;
    use crate::lax::quaternion_action;
    use crate::groth::groth;
    use crate::verdict::all_passed;

    fn q8_cleavage() -> Cleavage {
        let g = groth(&Arc::new(quaternion_action())).unwrap();
        canonical_cleavage(&g.projection).unwrap()
    }

    #[test]
    fn quaternion_sequences() {
        let cl = q8_cleavage();
        let r = verify_exact_sequences(&cl, 0).unwrap();
        assert!(all_passed(&r.verdicts), "{:?}", r.verdicts);
        assert_eq!(r.counts.aut, 24);
        assert_eq!(r.counts.z1, 4);
        assert_eq!(r.counts.fixing_both, 4);
        assert_eq!(r.counts.cleavages_checked, 8);
    }

    #[test]
    fn every_v4_extension_is_exact() {
        let v4 = Arc::new(generators::klein4());
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let m = Arc::new(NModule::trivial(&v4, &c2).unwrap());
        let h = h2(&m, true).unwrap();
        for &i in &h.representatives() {
            let e = extension_from_cocycle(&h.cocycles[i]).unwrap();
            let cl = canonical_cleavage(&e.sigma).unwrap();
            let r = verify_exact_sequences(&cl, 7).unwrap();
            assert!(all_passed(&r.verdicts), "class {i}: {:?}", r.verdicts);
        }
    }

    #[test]
    fn lambda_of_identity_is_trivial() {
        let cl = q8_cleavage();
        let (module, _) = module_from_cleavage(&cl).unwrap();
        let trivial = Cocycle2::new(&module, module.trivial_cocycle()).unwrap();
        let l1 = lambda1(&[0, 1], &cl).unwrap();
        let l2 = lambda2(&[0, 1, 2, 3], &cl).unwrap();
        assert_eq!(l1.gamma, trivial.gamma);
        assert_eq!(l2.gamma, trivial.gamma);
    }

    #[test]
    fn rejects_non_regular() {
        let c2 = Arc::new(generators::cyclic_group(2).unwrap());
        let l2 = Arc::new(generators::truncated_add(1).unwrap());
        let m = Arc::new(NModule::trivial(&c2, &l2).unwrap());
        let h = h2(&m, false).unwrap();
        let bad = h.cocycles.iter().find(|c| !c.is_regular()).unwrap();
        let e = extension_from_cocycle(bad).unwrap();
        let cl = canonical_cleavage(&e.sigma).unwrap();
        assert!(matches!(verify_exact_sequences(&cl, 0), Err(Error::NotRegularSchreier(_))));
    }

    #[test]
    fn rejects_non_commutative_kernel() {
        let s3 = Arc::new(generators::symmetric(3).unwrap());
        let one = Arc::new(crate::monoid::FiniteMonoid::trivial());
        let sigma = MonoidHom::trivial(&s3, &one);
        let cl = canonical_cleavage(&sigma).unwrap();
        assert!(matches!(module_from_cleavage(&cl), Err(Error::NotRegularSchreier(_))));
    }

    #[test]
    fn sampling_is_seeded() {
        let c4 = Arc::new(generators::cyclic_group(4).unwrap());
        let c7 = Arc::new(generators::cyclic_group(7).unwrap());
        let m = Arc::new(NModule::trivial(&c4, &c7).unwrap());
        let e = extension_from_cocycle(&Cocycle2::new(&m, m.trivial_cocycle()).unwrap()).unwrap();
        let cl = canonical_cleavage(&e.sigma).unwrap();
        let a = cleavage_sample(&cl, 3).unwrap();
        let b = cleavage_sample(&cl, 3).unwrap();
        assert_eq!(a.len(), SAMPLED_CLEAVAGES);
        assert!(a.iter().zip(&b).all(|(x, y)| x == y));
    }
}
