//! Ready-made instances for the worked examples: the Burnside category of
//! Z/2, the real/complex Grothendieck-Witt category, and the tower of
//! cyclic orbits standing for the fields F_p, F_{p^2}, F_{p^4}, F_{p^8}.
//! These are used by the command-line reproductions and the test suites.

use crate::burnside::{BurnsideElem, BurnsideFunctor};
use crate::error::Error;
use crate::group::{FiniteGroup, GMap, GSet};
use crate::gw::{GwClass, GwCyclicFunctor, GwElem, GwRealComplexFunctor};
use crate::gysin::GysinFunctor;
use crate::rdi::Env;

/// The Burnside instance for Z/2: gsets `G`, `pt`; maps `pi`, `sigma`;
/// element `t = [Z/2 -> *]`.
pub fn burnside_c2() -> (BurnsideFunctor, Env<BurnsideFunctor>) {
    let g = FiniteGroup::cyclic(2).expect("order 2");
    let e = BurnsideFunctor::new(&g);
    let reg = GSet::regular(g.clone());
    let pt = GSet::point(g.clone());
    let pi = GMap::to_point(&reg);
    let sigma = reg.automorphisms().into_iter().nth(1).expect("the flip");

    let mut env = Env::new();
    env.gsets.insert("G".into(), reg.clone());
    env.gsets.insert("pt".into(), pt.clone());
    env.maps.insert("pi".into(), pi.clone());
    env.maps.insert("sigma".into(), sigma);
    env.elements.insert("t".into(), (pt, BurnsideElem::from_map(&pi)));
    (e, env)
}

/// The real/complex GW instance over Z/2: gsets `C` (free orbit) and `R`
/// (the point); maps `pi`, `sigma`; elements `hyp = <1> + <-1>` over `R`.
pub fn gw_real_complex() -> (GwRealComplexFunctor, Env<GwRealComplexFunctor>) {
    let e = GwRealComplexFunctor::new();
    let g = e.group().clone();
    let c = GSet::regular(g.clone());
    let r = GSet::point(g.clone());
    let pi = GMap::to_point(&c);
    let sigma = c.automorphisms().into_iter().nth(1).expect("conjugation");

    let mut env = Env::new();
    env.gsets.insert("C".into(), c);
    env.gsets.insert("R".into(), r.clone());
    env.maps.insert("pi".into(), pi);
    env.maps.insert("sigma".into(), sigma);
    env.elements.insert(
        "hyp".into(),
        (r, GwElem { components: vec![GwClass::Real { plus: 1, minus: 1 }] }),
    );
    (e, env)
}

/// The orbit of size `d` in the Z/n tower (d | n), standing for F_{p^d}.
pub fn cyclic_orbit(group: &crate::group::Group, d: usize) -> GSet {
    let n = group.order();
    assert!(d >= 1 && n % d == 0, "orbit size must divide the group order");
    let subgroup: Vec<usize> = (0..n).filter(|x| x % d == 0).collect();
    GSet::coset_space(group, &subgroup)
}

/// The projection from the size-2n orbit to the size-n orbit (reduction
/// mod n), the Galois picture of Spec F_{p^{2n}} -> Spec F_{p^n}.
pub fn tower_projection(group: &crate::group::Group, n: usize) -> GMap {
    let big = cyclic_orbit(group, 2 * n);
    let small = cyclic_orbit(group, n);
    GMap::new(big, small, (0..2 * n).map(|i| i % n).collect()).expect("reduction is equivariant")
}

/// Translation by one on the size-d orbit (the Frobenius of F_{p^d}).
pub fn tower_frobenius(group: &crate::group::Group, d: usize) -> GMap {
    let orbit = cyclic_orbit(group, d);
    GMap::new(orbit.clone(), orbit, (0..d).map(|i| (i + 1) % d).collect())
        .expect("translation is equivariant")
}

/// The GW instance on Z/8-sets for an odd prime p, with the tower of
/// orbits named `O1`, `O2`, `O4`, `O8`, projections `pi1`, `pi2`, `pi4`,
/// Frobenius translations `sigma2`, `sigma4`, `sigma8`, and the order-two
/// classes `alpha1`, `alpha2`, `alpha4`, `alpha8`.
pub fn gw_z8(p: u64) -> Result<(GwCyclicFunctor, Env<GwCyclicFunctor>), Error> {
    let e = GwCyclicFunctor::new(p, 8)?;
    let g = e.group().clone();
    let mut env = Env::new();
    for d in [1usize, 2, 4, 8] {
        let orbit = cyclic_orbit(&g, d);
        env.gsets.insert(format!("O{d}"), orbit.clone());
        env.elements.insert(
            format!("alpha{d}"),
            (orbit, GwElem { components: vec![GwClass::ff_alpha(p, d)] }),
        );
        if d > 1 {
            env.maps.insert(format!("sigma{d}"), tower_frobenius(&g, d));
        }
    }
    for n in [1usize, 2, 4] {
        env.maps.insert(format!("pi{n}"), tower_projection(&g, n));
    }
    Ok((e, env))
}

/// The Burnside instance on the same Z/8 tower with the same names for
/// maps and gsets (elements: the classes `t1`, ..., `t8` of the orbits
/// over the point).
pub fn burnside_z8() -> (BurnsideFunctor, Env<BurnsideFunctor>) {
    let g = FiniteGroup::cyclic(8).expect("order 8");
    let e = BurnsideFunctor::new(&g);
    let mut env = Env::new();
    let pt = GSet::point(g.clone());
    for d in [1usize, 2, 4, 8] {
        let orbit = cyclic_orbit(&g, d);
        env.gsets.insert(format!("O{d}"), orbit.clone());
        env.elements.insert(
            format!("t{d}"),
            (pt.clone(), BurnsideElem::from_map(&GMap::to_point(&orbit))),
        );
        if d > 1 {
            env.maps.insert(format!("sigma{d}"), tower_frobenius(&g, d));
        }
    }
    for n in [1usize, 2, 4] {
        env.maps.insert(format!("pi{n}"), tower_projection(&g, n));
    }
    (e, env)
}
