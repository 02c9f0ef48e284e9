//! Property batteries for the categorical structure of correspondences:
//! associativity and identities, duality, the R/I/D exchange rules, the
//! tensor structure, naturality of the universal map, and soundness of
//! the RDI rewriting pass.  Shared by the acceptance suite and the
//! command-line `verify` subcommand.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::burnside::{BurnsideElem, BurnsideFunctor};
use crate::corr::{
    add_corr, apply_eprime, compose, dual_star, duality_check, hom_object, identity, lift_d,
    lift_i, lift_r, scale_corr, tensor_corr, Correspondence,
};
use crate::group::{product, pullback, swap_map, GMap, GSet};
use crate::gysin::{chi, GysinFunctor};
use crate::rdi::{
    elaborate, eval_expr_at, eval_normal_form, normalize, Env, MorExpr, NormalizeOptions, Sig,
};
use crate::sample::Sampler;

#[derive(Clone, Debug)]
pub struct LawReport {
    pub name: String,
    pub passed: bool,
    pub instances: usize,
    pub detail: Option<String>,
}

impl LawReport {
    fn new(name: &str, passed: bool, instances: usize, detail: Option<String>) -> LawReport {
        LawReport { name: name.into(), passed, instances, detail }
    }
}

fn random_corr<E: GysinFunctor>(
    e: &E,
    dom: &GSet,
    cod: &GSet,
    rng: &mut ChaCha8Rng,
) -> Correspondence<E> {
    let (carrier, _, _) = hom_object(dom, cod);
    Correspondence { dom: dom.clone(), cod: cod.clone(), elem: e.random_elem(&carrier, rng) }
}

/// Associativity, two-sided identities, duality contravariance, and the
/// whole catalogue of R/I/D identities, on random instances.
pub fn verify_category_laws<E: GysinFunctor>(e: &E, iters: usize, seed: u64) -> Vec<LawReport> {
    let group = e.group().clone();
    let mut out = Vec::new();

    // associativity of composition
    {
        let mut s = Sampler::new(&group, seed ^ 0x10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
        let mut passed = true;
        for _ in 0..iters {
            let a = s.nonempty_gset(2);
            let b = s.nonempty_gset(2);
            let c = s.nonempty_gset(2);
            let d = s.nonempty_gset(2);
            let f = random_corr(e, &a, &b, &mut rng);
            let g = random_corr(e, &b, &c, &mut rng);
            let h = random_corr(e, &c, &d, &mut rng);
            let left = compose(e, &h, &compose(e, &g, &f).unwrap()).unwrap();
            let right = compose(e, &compose(e, &h, &g).unwrap(), &f).unwrap();
            if left != right {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("associativity", passed, iters, None));
    }

    // two-sided identity
    {
        let mut s = Sampler::new(&group, seed ^ 0x12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x13);
        let mut passed = true;
        for _ in 0..iters {
            let a = s.gset(2);
            let b = s.gset(2);
            let f = random_corr(e, &a, &b, &mut rng);
            if compose(e, &f, &identity(e, &a)).unwrap() != f
                || compose(e, &identity(e, &b), &f).unwrap() != f
            {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("identity", passed, iters, None));
    }

    // duality: involution and contravariance
    {
        let mut s = Sampler::new(&group, seed ^ 0x14);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x15);
        let mut passed = true;
        for _ in 0..iters {
            let a = s.nonempty_gset(2);
            let b = s.nonempty_gset(2);
            let c = s.nonempty_gset(2);
            let f = random_corr(e, &a, &b, &mut rng);
            let g = random_corr(e, &b, &c, &mut rng);
            if dual_star(e, &dual_star(e, &f)) != f {
                passed = false;
                break;
            }
            let gf = compose(e, &g, &f).unwrap();
            if dual_star(e, &gf) != compose(e, &dual_star(e, &f), &dual_star(e, &g)).unwrap() {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("dual-contravariance", passed, iters, None));
    }

    // the four exchange identities against R and I lifts
    {
        let mut s = Sampler::new(&group, seed ^ 0x16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x17);
        let mut passed = true;
        for _ in 0..iters {
            let w = s.nonempty_gset(2);
            let z = s.nonempty_gset(2);
            let alpha = random_corr(e, &w, &z, &mut rng);
            let (zw, _, _) = hom_object(&w, &z);

            // alpha . R f = (id_Z x f)^*(alpha)
            let y = s.nonempty_gset(2);
            if let Some(f) = s.map_between(&y, &w) {
                let lhs = compose(e, &alpha, &lift_r(e, &f)).unwrap();
                let (zy, _, _) = hom_object(&y, &z);
                let idzf = GMap::new(
                    zy,
                    zw.clone(),
                    (0..z.size() * y.size())
                        .map(|i| (i / y.size()) * w.size() + f.apply(i % y.size()))
                        .collect(),
                )
                .unwrap();
                if lhs.elem != e.pullback(&idzf, &alpha.elem) {
                    passed = false;
                    break;
                }
            }

            // R g . alpha = (g x id)_! (alpha)
            let gmap = s.map_onto_random_target(&z, 1);
            let lhs = compose(e, &lift_r(e, &gmap), &alpha).unwrap();
            let (uw, _, _) = hom_object(&w, gmap.dst());
            let gxid = GMap::new(
                zw.clone(),
                uw,
                (0..z.size() * w.size())
                    .map(|i| gmap.apply(i / w.size()) * w.size() + i % w.size())
                    .collect(),
            )
            .unwrap();
            if lhs.elem != e.pushforward(&gxid, &alpha.elem) {
                passed = false;
                break;
            }

            // alpha . I f' = (id x f')_!(alpha)
            let fp = s.map_onto_random_target(&w, 1);
            let lhs = compose(e, &alpha, &lift_i(e, &fp)).unwrap();
            let (zyp, _, _) = hom_object(fp.dst(), &z);
            let idzfp = GMap::new(
                zw.clone(),
                zyp,
                (0..z.size() * w.size())
                    .map(|i| (i / w.size()) * fp.dst().size() + fp.apply(i % w.size()))
                    .collect(),
            )
            .unwrap();
            if lhs.elem != e.pushforward(&idzfp, &alpha.elem) {
                passed = false;
                break;
            }

            // I g' . alpha = (g' x id)^*(alpha)
            let up = s.nonempty_gset(2);
            if let Some(gp) = s.map_between(&up, &z) {
                let lhs = compose(e, &lift_i(e, &gp), &alpha).unwrap();
                let (upw, _, _) = hom_object(&w, &up);
                let gpxid = GMap::new(
                    upw,
                    zw.clone(),
                    (0..up.size() * w.size())
                        .map(|i| gp.apply(i / w.size()) * w.size() + i % w.size())
                        .collect(),
                )
                .unwrap();
                if lhs.elem != e.pullback(&gpxid, &alpha.elem) {
                    passed = false;
                    break;
                }
            }
        }
        out.push(LawReport::new("compose-with-lifts", passed, iters, None));
    }

    // span formulas: I f . R q and R p . I g as transfers of 1
    {
        let mut s = Sampler::new(&group, seed ^ 0x18);
        let mut passed = true;
        for _ in 0..iters {
            let (f, q) = s.cospan(2);
            let lhs = compose(e, &lift_i(e, &f), &lift_r(e, &q)).unwrap();
            let (p, pa, pb) = pullback(&f, &q).unwrap();
            let (carrier, _, _) = hom_object(q.src(), f.src());
            let span = GMap::new(
                p.clone(),
                carrier,
                (0..p.size()).map(|i| pa.apply(i) * q.src().size() + pb.apply(i)).collect(),
            )
            .unwrap();
            if lhs.elem != e.pushforward(&span, &e.one(&p)) {
                passed = false;
                break;
            }

            // R p . I g for a random span
            let z = s.nonempty_gset(2);
            let pmap = s.map_onto_random_target(&z, 1);
            let gmap = s.map_onto_random_target(&z, 1);
            let lhs = compose(e, &lift_r(e, &pmap), &lift_i(e, &gmap)).unwrap();
            let (carrier, _, _) = hom_object(gmap.dst(), pmap.dst());
            let span = GMap::new(
                z.clone(),
                carrier,
                (0..z.size())
                    .map(|i| pmap.apply(i) * gmap.dst().size() + gmap.apply(i))
                    .collect(),
            )
            .unwrap();
            if lhs.elem != e.pushforward(&span, &e.one(&z)) {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("span-formulas", passed, iters, None));
    }

    // Beck-Chevalley across random pullback squares
    {
        let mut s = Sampler::new(&group, seed ^ 0x19);
        let mut passed = true;
        for _ in 0..iters {
            let (f, q) = s.cospan(2);
            let (_, p, gmap) = pullback(&f, &q).unwrap();
            let lhs = compose(e, &lift_i(e, &f), &lift_r(e, &q)).unwrap();
            let rhs = compose(e, &lift_r(e, &p), &lift_i(e, &gmap)).unwrap();
            if lhs != rhs {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("beck-chevalley", passed, iters, None));
    }

    // isomorphism lifts invert each other
    {
        let mut s = Sampler::new(&group, seed ^ 0x1a);
        let mut passed = true;
        for _ in 0..iters {
            let x = s.nonempty_gset(2);
            let auts = x.automorphisms();
            let sigma = &auts[s.rng().gen_range(0..auts.len())];
            let ri = compose(e, &lift_r(e, sigma), &lift_i(e, sigma)).unwrap();
            let ir = compose(e, &lift_i(e, sigma), &lift_r(e, sigma)).unwrap();
            let id = identity(e, &x);
            if ri != id || ir != id || lift_i(e, sigma) != lift_r(e, &sigma.inverse().unwrap()) {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("iso-lifts", passed, iters, None));
    }

    // D is a ring map and satisfies the R-D exchange rules
    {
        let mut s = Sampler::new(&group, seed ^ 0x1b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1c);
        let mut passed = true;
        for _ in 0..iters {
            let x = s.nonempty_gset(2);
            let a = e.random_elem(&x, &mut rng);
            let b = e.random_elem(&x, &mut rng);
            let dab = lift_d(e, &x, &e.mul(&x, &a, &b));
            if dab != compose(e, &lift_d(e, &x, &a), &lift_d(e, &x, &b)).unwrap() {
                passed = false;
                break;
            }
            if lift_d(e, &x, &e.one(&x)) != identity(e, &x) {
                passed = false;
                break;
            }
            if dual_star(e, &lift_d(e, &x, &a)) != lift_d(e, &x, &a) {
                passed = false;
                break;
            }

            let y = s.nonempty_gset(2);
            let Some(f) = s.map_between(&y, &x) else { continue };
            let pulled = e.pullback(&f, &a);
            let lhs = compose(e, &lift_d(e, &x, &a), &lift_r(e, &f)).unwrap();
            let rhs = compose(e, &lift_r(e, &f), &lift_d(e, &y, &pulled)).unwrap();
            if lhs != rhs {
                passed = false;
                break;
            }
            let lhs = compose(e, &lift_i(e, &f), &lift_d(e, &x, &a)).unwrap();
            let rhs = compose(e, &lift_d(e, &y, &pulled), &lift_i(e, &f)).unwrap();
            if lhs != rhs {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("diagonal-ring-map", passed, iters, None));
    }

    // triple formulas
    {
        let mut s = Sampler::new(&group, seed ^ 0x1d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1e);
        let mut passed = true;
        for _ in 0..iters {
            let z = s.nonempty_gset(2);
            let f = s.map_onto_random_target(&z, 1);
            let gmap = s.map_onto_random_target(&z, 1);
            let a = e.random_elem(&z, &mut rng);
            let triple = compose(
                e,
                &lift_r(e, &f),
                &compose(e, &lift_d(e, &z, &a), &lift_i(e, &gmap)).unwrap(),
            )
            .unwrap();
            let (carrier, _, _) = hom_object(gmap.dst(), f.dst());
            let span = GMap::new(
                z.clone(),
                carrier,
                (0..z.size()).map(|i| f.apply(i) * gmap.dst().size() + gmap.apply(i)).collect(),
            )
            .unwrap();
            if triple.elem != e.pushforward(&span, &a) {
                passed = false;
                break;
            }
            let sym = compose(
                e,
                &lift_r(e, &f),
                &compose(e, &lift_d(e, &z, &a), &lift_i(e, &f)).unwrap(),
            )
            .unwrap();
            if sym != lift_d(e, f.dst(), &e.pushforward(&f, &a)) {
                passed = false;
                break;
            }
            let ri = compose(e, &lift_r(e, &f), &lift_i(e, &f)).unwrap();
            if ri != lift_d(e, f.dst(), &e.pushforward(&f, &e.one(&z))) {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("triple-formulas", passed, iters, None));
    }

    // R and I respect products; the symmetry braids tensors
    {
        let mut s = Sampler::new(&group, seed ^ 0x1f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x20);
        let mut passed = true;
        for _ in 0..iters {
            let x = s.nonempty_gset(2);
            let y = s.nonempty_gset(2);
            let f = s.map_onto_random_target(&x, 1);
            let gmap = s.map_onto_random_target(&y, 1);
            let (xy, p1, p2) = product(&x, &y).unwrap();
            let (xpyp, _, _) = product(f.dst(), gmap.dst()).unwrap();
            let fxg = GMap::new(
                xy.clone(),
                xpyp,
                (0..xy.size())
                    .map(|i| f.apply(p1.apply(i)) * gmap.dst().size() + gmap.apply(p2.apply(i)))
                    .collect(),
            )
            .unwrap();
            if lift_r(e, &fxg).elem != tensor_corr(e, &lift_r(e, &f), &lift_r(e, &gmap)).elem {
                passed = false;
                break;
            }
            if lift_i(e, &fxg).elem != tensor_corr(e, &lift_i(e, &f), &lift_i(e, &gmap)).elem {
                passed = false;
                break;
            }

            // tau . (a (x) b) = (b (x) a) . tau for random correspondences
            let a = random_corr(e, &x, f.dst(), &mut rng);
            let b = random_corr(e, &y, gmap.dst(), &mut rng);
            let tau_src = lift_r(e, &swap_map(&x, &y).unwrap());
            let tau_dst = lift_r(e, &swap_map(f.dst(), gmap.dst()).unwrap());
            let lhs = compose(e, &tau_dst, &tensor_corr(e, &a, &b)).unwrap();
            let rhs = compose(e, &tensor_corr(e, &b, &a), &tau_src).unwrap();
            if lhs != rhs {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("tensor-functoriality", passed, iters, None));
    }

    // E' extends both variances and is functorial
    {
        let mut s = Sampler::new(&group, seed ^ 0x21);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x22);
        let mut passed = true;
        for _ in 0..iters {
            let x = s.nonempty_gset(2);
            let f = s.map_onto_random_target(&x, 1);
            let b = e.random_elem(f.dst(), &mut rng);
            if apply_eprime(e, &lift_r(e, &f), &b) != e.pullback(&f, &b) {
                passed = false;
                break;
            }
            let a = e.random_elem(&x, &mut rng);
            if apply_eprime(e, &lift_i(e, &f), &a) != e.pushforward(&f, &a) {
                passed = false;
                break;
            }
            let g1 = lift_r(e, &f);
            let g2 = lift_i(e, &f);
            let composed = compose(e, &g1, &g2).unwrap();
            if apply_eprime(e, &composed, &b) != apply_eprime(e, &g2, &apply_eprime(e, &g1, &b)) {
                passed = false;
                break;
            }
        }
        out.push(LawReport::new("extended-functor", passed, iters, None));
    }

    out
}

/// Naturality of the universal map: additive, multiplicative, unit to
/// unit, and commuting with both variances.
pub fn verify_chi_naturality<E: GysinFunctor>(e: &E, iters: usize, seed: u64) -> LawReport {
    let group = e.group().clone();
    let burnside = BurnsideFunctor::new(&group);
    let mut s = Sampler::new(&group, seed ^ 0x30);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x31);
    let mut passed = true;
    for _ in 0..iters {
        let x = s.nonempty_gset(2);
        let a = burnside.random_elem(&x, &mut rng);
        let b = burnside.random_elem(&x, &mut rng);
        let sum = a.try_add(&b).unwrap();
        if chi(e, &sum) != e.add(&x, &chi(e, &a), &chi(e, &b)) {
            passed = false;
            break;
        }
        let prod = a.try_mul(&b).unwrap();
        if chi(e, &prod) != e.mul(&x, &chi(e, &a), &chi(e, &b)) {
            passed = false;
            break;
        }
        if chi(e, &BurnsideElem::unit(&x)) != e.one(&x) {
            passed = false;
            break;
        }
        let f = s.map_onto_random_target(&x, 1);
        if chi(e, &a.pushed_forward(&f)) != e.pushforward(&f, &chi(e, &a)) {
            passed = false;
            break;
        }
        let c = burnside.random_elem(f.dst(), &mut rng);
        if chi(e, &c.pulled_back(&f)) != e.pullback(&f, &chi(e, &c)) {
            passed = false;
            break;
        }
    }
    LawReport::new("chi-naturality", passed, iters, None)
}

/// Triangle identities for every given object.
pub fn verify_duality<E: GysinFunctor>(e: &E, objects: &[GSet]) -> LawReport {
    let mut passed = true;
    let mut detail = None;
    for x in objects {
        let report = duality_check(e, x);
        if !report.passed() {
            passed = false;
            detail = Some(format!("failed on a {}-point object", x.size()));
            break;
        }
    }
    LawReport::new("duality-triangles", passed, objects.len(), detail)
}

/// A random well-typed expression over the environment: composition
/// chains assembled by walking matching endpoints, wrapped in sums when a
/// second chain with the same endpoints shows up.
pub fn random_expr<E: GysinFunctor>(env: &Env<E>, rng: &mut ChaCha8Rng, max_len: usize) -> MorExpr {
    #[derive(Clone)]
    struct CatalogEntry {
        expr: MorExpr,
        dom: GSet,
        cod: GSet,
    }
    let mut catalog: Vec<CatalogEntry> = Vec::new();
    for (name, f) in &env.maps {
        catalog.push(CatalogEntry {
            expr: MorExpr::R(name.clone()),
            dom: f.src().clone(),
            cod: f.dst().clone(),
        });
        catalog.push(CatalogEntry {
            expr: MorExpr::I(name.clone()),
            dom: f.dst().clone(),
            cod: f.src().clone(),
        });
    }
    for (name, (x, _)) in &env.elements {
        catalog.push(CatalogEntry { expr: MorExpr::D(name.clone()), dom: x.clone(), cod: x.clone() });
    }
    for (name, x) in &env.gsets {
        catalog.push(CatalogEntry { expr: MorExpr::Id(name.clone()), dom: x.clone(), cod: x.clone() });
    }
    assert!(!catalog.is_empty(), "environment has no atoms");

    let chain = |rng: &mut ChaCha8Rng| -> (Vec<MorExpr>, GSet, GSet) {
        let len = rng.gen_range(1..=max_len);
        let first = catalog[rng.gen_range(0..catalog.len())].clone();
        let (mut dom, cod) = (first.dom.clone(), first.cod.clone());
        let mut parts = vec![first.expr];
        for _ in 1..len {
            // extend on the right: the next factor's codomain must match
            let options: Vec<&CatalogEntry> = catalog.iter().filter(|c| c.cod == dom).collect();
            if options.is_empty() {
                break;
            }
            let next = options[rng.gen_range(0..options.len())];
            parts.push(next.expr.clone());
            dom = next.dom.clone();
        }
        (parts, dom, cod)
    };

    let (parts, dom, cod) = chain(rng);
    let body = if parts.len() == 1 { parts.into_iter().next().unwrap() } else { MorExpr::Comp(parts) };
    if rng.gen_bool(0.4) {
        // try to add more summands with the same endpoints
        let mut terms = vec![(rng.gen_range(-2..=2), body)];
        for _ in 0..2 {
            for _attempt in 0..20 {
                let (parts, d2, c2) = chain(rng);
                if d2 == dom && c2 == cod {
                    let b = if parts.len() == 1 {
                        parts.into_iter().next().unwrap()
                    } else {
                        MorExpr::Comp(parts)
                    };
                    terms.push((rng.gen_range(-2..=2), b));
                    break;
                }
            }
        }
        MorExpr::Sum(terms)
    } else {
        body
    }
}

/// Normalization soundness: evaluating the normal form reproduces the
/// direct evaluation, with the symmetric-span shortcut both on and off.
pub fn verify_rdi_soundness<E: GysinFunctor>(
    e: &E,
    env: &Env<E>,
    iters: usize,
    max_len: usize,
    seed: u64,
) -> LawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x40);
    let mut passed = true;
    let mut detail = None;
    for k in 0..iters {
        let expr = random_expr(env, &mut rng, max_len);
        let Ok(Sig { endpoints: Some((dom, cod)) }) = elaborate(&expr, env) else {
            detail = Some(format!("instance {k}: generator produced an untypable expression"));
            passed = false;
            break;
        };
        let direct = eval_expr_at(e, &expr, env, &dom, &cod).unwrap();
        for collapse in [true, false] {
            let nf = normalize(e, &expr, env, NormalizeOptions { collapse_symmetric_spans: collapse })
                .unwrap();
            let via_nf = eval_normal_form(e, &nf);
            if via_nf != direct {
                passed = false;
                detail = Some(format!("instance {k}: {expr:?} (collapse={collapse})"));
                break;
            }
        }
        if !passed {
            break;
        }
    }
    LawReport::new("rdi-soundness", passed, iters, detail)
}

/// Sum helper used by a few suites: scaled sum of correspondences.
pub fn linear_combination<E: GysinFunctor>(
    e: &E,
    terms: &[(i64, Correspondence<E>)],
) -> Option<Correspondence<E>> {
    let mut acc: Option<Correspondence<E>> = None;
    for (c, t) in terms {
        let scaled = scale_corr(e, t, *c);
        acc = Some(match acc {
            None => scaled,
            Some(prev) => add_corr(e, &prev, &scaled).ok()?,
        });
    }
    acc
}
