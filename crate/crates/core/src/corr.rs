//! The category of correspondences attached to a Gysin functor E: objects
//! are the G-sets, maps from X to Y are elements of E(Y x X) (reading
//! composition right to left), and composition pulls the two factors to
//! the triple product and pushes down the outer projection.
//!
//! The canonical hom carrier for (X, Y) is the lexicographic product
//! Y x X; since products are constructed deterministically, two builds of
//! the same hom carrier are equal and element equality needs no
//! transport.  Triple products are flattened: (A x B) x C, A x (B x C)
//! and the direct three-factor construction all carry identical tables.

use serde_json::{json, Value};

use crate::error::Error;
use crate::group::{product, swap_map, GMap, GSet};
use crate::gysin::GysinFunctor;

/// A morphism of the correspondence category: an element of E(cod x dom).
#[derive(Debug)]
pub struct Correspondence<E: GysinFunctor> {
    pub dom: GSet,
    pub cod: GSet,
    pub elem: E::Elem,
}

impl<E: GysinFunctor> Clone for Correspondence<E> {
    fn clone(&self) -> Self {
        Correspondence { dom: self.dom.clone(), cod: self.cod.clone(), elem: self.elem.clone() }
    }
}

impl<E: GysinFunctor> PartialEq for Correspondence<E> {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.elem == other.elem
    }
}

/// The canonical hom carrier cod x dom with its two projections.
pub fn hom_object(dom: &GSet, cod: &GSet) -> (GSet, GMap, GMap) {
    let (prod, to_cod, to_dom) = product(cod, dom).expect("same group");
    (prod, to_cod, to_dom)
}

/// The identity i_X = Delta_!(1).  This is in general different from the
/// ring unit of E(X x X).
pub fn identity<E: GysinFunctor>(e: &E, x: &GSet) -> Correspondence<E> {
    let diag = diagonal_map(x);
    let one = e.one(x);
    Correspondence { dom: x.clone(), cod: x.clone(), elem: e.pushforward(&diag, &one) }
}

/// The diagonal X -> X x X into the canonical product.
pub fn diagonal_map(x: &GSet) -> GMap {
    let (xx, _, _) = product(x, x).expect("same group");
    let table = (0..x.size()).map(|i| i * x.size() + i).collect();
    GMap::new_unchecked(x.clone(), xx, table)
}

pub fn zero_corr<E: GysinFunctor>(e: &E, dom: &GSet, cod: &GSet) -> Correspondence<E> {
    let (prod, _, _) = hom_object(dom, cod);
    Correspondence { dom: dom.clone(), cod: cod.clone(), elem: e.zero(&prod) }
}

pub fn add_corr<E: GysinFunctor>(
    e: &E,
    a: &Correspondence<E>,
    b: &Correspondence<E>,
) -> Result<Correspondence<E>, Error> {
    if a.dom != b.dom || a.cod != b.cod {
        return Err(Error::InvalidArgument("sum of correspondences with different endpoints".into()));
    }
    let (prod, _, _) = hom_object(&a.dom, &a.cod);
    Ok(Correspondence { dom: a.dom.clone(), cod: a.cod.clone(), elem: e.add(&prod, &a.elem, &b.elem) })
}

pub fn scale_corr<E: GysinFunctor>(e: &E, a: &Correspondence<E>, k: i64) -> Correspondence<E> {
    let (prod, _, _) = hom_object(&a.dom, &a.cod);
    Correspondence { dom: a.dom.clone(), cod: a.cod.clone(), elem: e.scale(&prod, &a.elem, k) }
}

/// Composition (pi_{CA})_! ( pi_{CB}^*(g) . pi_{BA}^*(f) ) on the flat
/// triple product C x B x A.
pub fn compose<E: GysinFunctor>(
    e: &E,
    g: &Correspondence<E>,
    f: &Correspondence<E>,
) -> Result<Correspondence<E>, Error> {
    if g.dom != f.cod {
        return Err(Error::NotComposable(format!(
            "middle objects differ ({} vs {} points)",
            g.dom.size(),
            f.cod.size()
        )));
    }
    let a = &f.dom;
    let b = &f.cod;
    let c = &g.cod;
    let (cb, _, _) = hom_object(b, c);
    let (ba, _, _) = hom_object(a, b);
    let (ca, _, _) = hom_object(a, c);
    let (cba, _, _) = product(&cb, a).expect("same group");

    let na = a.size();
    let nb = b.size();
    let decode = |i: usize| -> (usize, usize, usize) {
        let (cb_idx, ai) = (i / na, i % na);
        (cb_idx / nb, cb_idx % nb, ai)
    };
    let pi_cb = GMap::new_unchecked(
        cba.clone(),
        cb.clone(),
        (0..cba.size())
            .map(|i| {
                let (ci, bi, _) = decode(i);
                ci * nb + bi
            })
            .collect(),
    );
    let pi_ba = GMap::new_unchecked(
        cba.clone(),
        ba.clone(),
        (0..cba.size())
            .map(|i| {
                let (_, bi, ai) = decode(i);
                bi * na + ai
            })
            .collect(),
    );
    let pi_ca = GMap::new_unchecked(
        cba.clone(),
        ca.clone(),
        (0..cba.size())
            .map(|i| {
                let (ci, _, ai) = decode(i);
                ci * na + ai
            })
            .collect(),
    );

    let upstairs = e.mul(&cba, &e.pullback(&pi_cb, &g.elem), &e.pullback(&pi_ba, &f.elem));
    Ok(Correspondence { dom: a.clone(), cod: c.clone(), elem: e.pushforward(&pi_ca, &upstairs) })
}

/// The duality anti-automorphism: pull back along the swap of the two
/// factors.  Involutive and contravariant.
pub fn dual_star<E: GysinFunctor>(e: &E, f: &Correspondence<E>) -> Correspondence<E> {
    // the swap A x B -> B x A pulls E(B x A) back to E(A x B)
    let t = swap_map(&f.dom, &f.cod).expect("same group");
    Correspondence { dom: f.cod.clone(), cod: f.dom.clone(), elem: e.pullback(&t, &f.elem) }
}

/// R f: the forward lift of a G-map, the class of the graph of f.
pub fn lift_r<E: GysinFunctor>(e: &E, f: &GMap) -> Correspondence<E> {
    let (ba, _, _) = hom_object(f.src(), f.dst());
    let graph = GMap::new_unchecked(
        f.src().clone(),
        ba,
        (0..f.src().size()).map(|x| f.apply(x) * f.src().size() + x).collect(),
    );
    Correspondence {
        dom: f.src().clone(),
        cod: f.dst().clone(),
        elem: e.pushforward(&graph, &e.one(f.src())),
    }
}

/// I f: the transfer lift, the dual of R f.
pub fn lift_i<E: GysinFunctor>(e: &E, f: &GMap) -> Correspondence<E> {
    let (ab, _, _) = hom_object(f.dst(), f.src());
    let cograph = GMap::new_unchecked(
        f.src().clone(),
        ab,
        (0..f.src().size()).map(|x| x * f.dst().size() + f.apply(x)).collect(),
    );
    Correspondence {
        dom: f.dst().clone(),
        cod: f.src().clone(),
        elem: e.pushforward(&cograph, &e.one(f.src())),
    }
}

/// D a = Delta_!(a), the diagonal endomorphism attached to a in E(X).
pub fn lift_d<E: GysinFunctor>(e: &E, x: &GSet, a: &E::Elem) -> Correspondence<E> {
    let diag = diagonal_map(x);
    Correspondence { dom: x.clone(), cod: x.clone(), elem: e.pushforward(&diag, a) }
}

/// The monoidal product on morphisms: external product of the elements,
/// transported along the factor shuffle to the canonical hom carrier of
/// the product objects.
pub fn tensor_corr<E: GysinFunctor>(
    e: &E,
    f: &Correspondence<E>,
    g: &Correspondence<E>,
) -> Correspondence<E> {
    let (x, xp) = (&f.dom, &f.cod);
    let (y, yp) = (&g.dom, &g.cod);
    let (fx_carrier, _, _) = hom_object(x, xp);
    let (gy_carrier, _, _) = hom_object(y, yp);
    let (q, q1, q2) = product(&fx_carrier, &gy_carrier).expect("same group");
    let ext = e.mul(&q, &e.pullback(&q1, &f.elem), &e.pullback(&q2, &g.elem));

    let (dom_prod, _, _) = product(x, y).expect("same group");
    let (cod_prod, _, _) = product(xp, yp).expect("same group");
    let (t, _, _) = hom_object(&dom_prod, &cod_prod);
    // ((x', y'), (x, y)) -> ((x', x), (y', y))
    let table = (0..t.size())
        .map(|i| {
            let (cd, dm) = (i / dom_prod.size(), i % dom_prod.size());
            let (xpi, ypi) = (cd / yp.size(), cd % yp.size());
            let (xi, yi) = (dm / y.size(), dm % y.size());
            let left = xpi * x.size() + xi;
            let right = ypi * y.size() + yi;
            left * gy_carrier.size() + right
        })
        .collect();
    let shuffle = GMap::new_unchecked(t.clone(), q, table);
    Correspondence { dom: dom_prod, cod: cod_prod, elem: e.pullback(&shuffle, &ext) }
}

/// The extension of E to the whole correspondence category:
/// E'(g)(x) = (pi_dom)_! ( pi_cod^*(x) . g ).
pub fn apply_eprime<E: GysinFunctor>(e: &E, g: &Correspondence<E>, x: &E::Elem) -> E::Elem {
    let (prod, to_cod, to_dom) = hom_object(&g.dom, &g.cod);
    let upstairs = e.mul(&prod, &e.pullback(&to_cod, x), &g.elem);
    e.pushforward(&to_dom, &upstairs)
}

/// Report from the twisted-group-ring comparison on a Galois object.
#[derive(Clone, Debug)]
pub struct EndoReport {
    /// Extracting coefficients along each graph recovers every sampled
    /// coefficient tuple.
    pub basis_injective: bool,
    /// Every sampled element of E(X x X) is the sum of its graph pieces.
    pub basis_surjective: bool,
    /// R_a D_u . R_b D_v = R_{ab} D_{b^*(u) . v} on sampled pairs.
    pub composition_law: bool,
    /// Whether every automorphism pulled back to the identity on sampled
    /// elements (true for the cyclic-field and Burnside-regular cases).
    pub twist_trivial: bool,
    pub automorphisms: usize,
    pub samples: usize,
}

impl EndoReport {
    pub fn passed(&self) -> bool {
        self.basis_injective && self.basis_surjective && self.composition_law
    }
}

/// Compare End(X) with the twisted group ring E(X)[Aut(X)] on a Galois
/// object: elements R_s . D_a are a basis, composition follows
/// R_a D_u . R_b D_v = R_{ab} D_{b^* u . v}.
pub fn endo_ring_galois<E: GysinFunctor>(
    e: &E,
    x: &GSet,
    samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<EndoReport, Error> {
    if !x.is_galois() {
        return Err(Error::InvalidArgument("endomorphism model needs a Galois object".into()));
    }
    let auts = x.automorphisms();
    let (xx, _, _) = hom_object(x, x);

    let r_d = |sigma: &GMap, a: &E::Elem| -> Correspondence<E> {
        compose(e, &lift_r(e, sigma), &lift_d(e, x, a)).expect("endomorphisms compose")
    };
    // graph embedding iota_t : X -> X x X, p -> (p, t p); pulling a class
    // back along it reads off the coefficient sitting on that graph.
    let graph_of = |t: &GMap| -> GMap {
        GMap::new_unchecked(
            x.clone(),
            xx.clone(),
            (0..x.size()).map(|p| p * x.size() + t.apply(p)).collect(),
        )
    };
    let extract = |z: &E::Elem, sigma: &GMap| -> E::Elem {
        let tau = sigma.inverse().expect("automorphism");
        let c = e.pullback(&graph_of(&tau), z);
        e.pullback(sigma, &c)
    };

    let mut basis_injective = true;
    let mut basis_surjective = true;
    let mut composition_law = true;
    let mut twist_trivial = true;

    for _ in 0..samples {
        // injectivity: random coefficient tuple, assemble, extract
        let coeffs: Vec<E::Elem> = auts.iter().map(|_| e.random_elem(x, rng)).collect();
        let mut z = e.zero(&xx);
        for (sigma, a) in auts.iter().zip(&coeffs) {
            z = e.add(&xx, &z, &r_d(sigma, a).elem);
        }
        for (sigma, a) in auts.iter().zip(&coeffs) {
            if extract(&z, sigma) != *a {
                basis_injective = false;
            }
        }

        // surjectivity: random class equals the sum of its graph pieces
        let w = e.random_elem(&xx, rng);
        let mut rebuilt = e.zero(&xx);
        for sigma in &auts {
            let a = extract(&w, sigma);
            rebuilt = e.add(&xx, &rebuilt, &r_d(sigma, &a).elem);
        }
        if rebuilt != w {
            basis_surjective = false;
        }

        // composition law
        let ai = rng_index(rng, auts.len());
        let bi = rng_index(rng, auts.len());
        let u = e.random_elem(x, rng);
        let v = e.random_elem(x, rng);
        let lhs = compose(e, &r_d(&auts[ai], &u), &r_d(&auts[bi], &v)).unwrap();
        let ab = auts[bi].then(&auts[ai]).unwrap(); // a after b
        let twisted = e.mul(x, &e.pullback(&auts[bi], &u), &v);
        let rhs = r_d(&ab, &twisted);
        if lhs != rhs {
            composition_law = false;
        }
        if e.pullback(&auts[bi], &u) != u {
            twist_trivial = false;
        }
    }

    Ok(EndoReport {
        basis_injective,
        basis_surjective,
        composition_law,
        twist_trivial,
        automorphisms: auts.len(),
        samples,
    })
}

fn rng_index(rng: &mut rand_chacha::ChaCha8Rng, len: usize) -> usize {
    use rand::Rng;
    rng.gen_range(0..len)
}

/// Check the two triangle identities for the self-duality of X, with
/// evaluation and coevaluation both given by i_X.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub first_triangle: bool,
    pub second_triangle: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.first_triangle && self.second_triangle
    }
}

pub fn duality_check<E: GysinFunctor>(e: &E, x: &GSet) -> DualityReport {
    let point = GSet::point(x.group().clone());
    let id_x = identity(e, x);
    let i_elem = id_x.elem.clone();
    let (xx, _, _) = product(x, x).expect("same group");

    // coevaluation: * -> X (x) X, evaluation: X (x) X -> *
    let cev = Correspondence::<E> { dom: point.clone(), cod: xx.clone(), elem: i_elem.clone() };
    let ev = Correspondence::<E> { dom: xx, cod: point, elem: i_elem };

    // (id (x) ev) . (cev (x) id) = id, both sides living on X after the
    // flat identifications of unit and associativity
    let first = {
        let left = tensor_corr(e, &cev, &id_x);
        let right = tensor_corr(e, &id_x, &ev);
        match compose(e, &right, &left) {
            Ok(c) => c == identity_on(e, &right.cod, &left.dom),
            Err(_) => false,
        }
    };
    // (ev (x) id) . (id (x) cev) = id
    let second = {
        let left = tensor_corr(e, &id_x, &cev);
        let right = tensor_corr(e, &ev, &id_x);
        match compose(e, &right, &left) {
            Ok(c) => c == identity_on(e, &right.cod, &left.dom),
            Err(_) => false,
        }
    };
    DualityReport { first_triangle: first, second_triangle: second }
}

/// The identity correspondence with explicitly given (equal-table)
/// endpoint objects, for comparisons after unitor identifications.
fn identity_on<E: GysinFunctor>(e: &E, cod: &GSet, dom: &GSet) -> Correspondence<E> {
    debug_assert_eq!(cod.size(), dom.size());
    let id = identity(e, dom);
    Correspondence { dom: dom.clone(), cod: cod.clone(), elem: id.elem }
}

/// Over the trivial group the Burnside instance is matrices of
/// non-negative ranks: read off the integer matrix of a correspondence by
/// fiber counting, M[y][x] = coefficient at (y, x).
pub fn matrix_model(
    corr: &Correspondence<crate::burnside::BurnsideFunctor>,
) -> Result<Vec<Vec<i64>>, Error> {
    if corr.dom.group().order() != 1 {
        return Err(Error::InvalidArgument("the matrix model needs the trivial group".into()));
    }
    let rows = corr.cod.size();
    let cols = corr.dom.size();
    let mut m = vec![vec![0i64; cols]; rows];
    for (key, &c) in corr.elem.terms() {
        let f = corr.elem.key_to_map(key);
        for x in 0..f.src().size() {
            let idx = f.apply(x);
            m[idx / cols][idx % cols] += c;
        }
    }
    Ok(m)
}

/// Inverse of [`matrix_model`]: build the correspondence with the given
/// integer matrix over the trivial group.
pub fn matrix_model_inverse(
    _e: &crate::burnside::BurnsideFunctor,
    m: &[Vec<i64>],
    dom: &GSet,
    cod: &GSet,
) -> Result<Correspondence<crate::burnside::BurnsideFunctor>, Error> {
    if dom.group().order() != 1 {
        return Err(Error::InvalidArgument("the matrix model needs the trivial group".into()));
    }
    if m.len() != cod.size() || m.iter().any(|r| r.len() != dom.size()) {
        return Err(Error::InvalidArgument("matrix shape must be |cod| x |dom|".into()));
    }
    let (prod, _, _) = hom_object(dom, cod);
    let pt = GSet::point(dom.group().clone());
    let mut elem = crate::burnside::BurnsideElem::zero(&prod);
    for (y, row) in m.iter().enumerate() {
        for (x, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let f = GMap::new(pt.clone(), prod.clone(), vec![y * dom.size() + x])?;
            elem = elem.try_add(&crate::burnside::BurnsideElem::from_map(&f).scaled(c))?;
        }
    }
    Ok(Correspondence { dom: dom.clone(), cod: cod.clone(), elem })
}

/// Correspondence JSON per the wire format:
/// {"functor", "dom", "cod", "elem"}; the G-sets are inlined structurally
/// (callers with an id registry can substitute ids).
pub fn corr_to_json<E: GysinFunctor>(e: &E, c: &Correspondence<E>) -> Value {
    let (prod, _, _) = hom_object(&c.dom, &c.cod);
    json!({
        "functor": e.name(),
        "dom": crate::burnside::gset_inline_json(&c.dom),
        "cod": crate::burnside::gset_inline_json(&c.cod),
        "elem": e.elem_to_json(&prod, &c.elem),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{BurnsideElem, BurnsideFunctor};
    use crate::group::{coproduct, FiniteGroup, GSet};
    use crate::gw::{GwClass, GwElem, GwRealComplexFunctor};
    use crate::sample::Sampler;
    use rand::SeedableRng;

    fn c2_setup() -> (BurnsideFunctor, GSet, GSet, GMap, GMap) {
        let g = FiniteGroup::cyclic(2).unwrap();
        let reg = GSet::regular(g.clone());
        let pt = GSet::point(g.clone());
        let pi = GMap::to_point(&reg);
        let sigma = reg.automorphisms().into_iter().nth(1).unwrap();
        (BurnsideFunctor::new(&g), reg, pt, pi, sigma)
    }

    #[test]
    fn identity_is_two_sided() {
        let (e, reg, pt, pi, _) = c2_setup();
        let rf = lift_r(&e, &pi);
        assert_eq!(compose(&e, &rf, &identity(&e, &reg)).unwrap(), rf);
        assert_eq!(compose(&e, &identity(&e, &pt), &rf).unwrap(), rf);
    }

    #[test]
    fn burnside_c2_example_relations() {
        let (e, reg, pt, pi, sigma) = c2_setup();
        // I pi . R pi = 1 + sigma in End(Z/2)
        let around = compose(&e, &lift_i(&e, &pi), &lift_r(&e, &pi)).unwrap();
        let expected = add_corr(&e, &identity(&e, &reg), &lift_r(&e, &sigma)).unwrap();
        assert_eq!(around, expected);
        // R pi . I pi = [Z/2] = D([Z/2 -> *])
        let down = compose(&e, &lift_r(&e, &pi), &lift_i(&e, &pi)).unwrap();
        let class = BurnsideElem::from_map(&pi);
        assert_eq!(down, lift_d(&e, &pt, &class));
    }

    #[test]
    fn gw_real_complex_example_relations() {
        let e = GwRealComplexFunctor::new();
        let g = e.group().clone();
        let reg = GSet::regular(g.clone());
        let pt = GSet::point(g.clone());
        let pi = GMap::to_point(&reg);
        let sigma = reg.automorphisms().into_iter().nth(1).unwrap();

        let around = compose(&e, &lift_i(&e, &pi), &lift_r(&e, &pi)).unwrap();
        let expected = add_corr(&e, &identity(&e, &reg), &lift_r(&e, &sigma)).unwrap();
        assert_eq!(around, expected);

        let down = compose(&e, &lift_r(&e, &pi), &lift_i(&e, &pi)).unwrap();
        let hyperbolic = GwElem { components: vec![GwClass::Real { plus: 1, minus: 1 }] };
        assert_eq!(down, lift_d(&e, &pt, &hyperbolic));
    }

    #[test]
    fn identity_differs_from_ring_unit() {
        let (e, reg, _, _, _) = c2_setup();
        let (xx, _, _) = hom_object(&reg, &reg);
        let i_x = identity(&e, &reg).elem;
        assert_ne!(i_x, e.one(&xx));
        // dictionary item 3: the unit is the full double-projection span
        let (p, _, _) = crate::group::product(&reg, &reg).unwrap();
        assert_eq!(e.one(&xx), BurnsideElem::from_map(&GMap::identity(&p)));
    }

    #[test]
    fn lift_r_matches_pullback_description() {
        // R f = (id x f)^*(i_B) and I f = (f x id)^*(i_B)
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let x = GSet::regular(g.clone());
        let y = GSet::coset_space(&g, &[0, 2]);
        let f = crate::sample::Sampler::new(&g, 5).map_between(&x, &y).unwrap();

        let i_b = identity(&e, &y).elem;
        let (ba, _, _) = hom_object(&x, &y);
        let id_x_f = GMap::new(
            ba.clone(),
            hom_object(&y, &y).0,
            (0..ba.size())
                .map(|i| {
                    let (b, a) = (i / x.size(), i % x.size());
                    b * y.size() + f.apply(a)
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(lift_r(&e, &f).elem, e.pullback(&id_x_f, &i_b));

        let (ab, _, _) = hom_object(&y, &x);
        let f_x_id = GMap::new(
            ab.clone(),
            hom_object(&y, &y).0,
            (0..ab.size())
                .map(|i| {
                    let (a, b) = (i / y.size(), i % y.size());
                    f.apply(a) * y.size() + b
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(lift_i(&e, &f).elem, e.pullback(&f_x_id, &i_b));
    }

    #[test]
    fn dual_star_properties() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let x = GSet::regular(g.clone());
        let y = GSet::coset_space(&g, &[0, 2]);
        let mut s = Sampler::new(&g, 11);
        let f = s.map_between(&x, &y).unwrap();

        // (i_A)^* = i_A and (D a)^* = D a
        let id = identity(&e, &x);
        assert_eq!(dual_star(&e, &id), id);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = e.random_elem(&x, &mut rng);
        let d = lift_d(&e, &x, &a);
        assert_eq!(dual_star(&e, &d), d);

        // (R f)^* = I f, involutive
        let rf = lift_r(&e, &f);
        assert_eq!(dual_star(&e, &rf), lift_i(&e, &f));
        assert_eq!(dual_star(&e, &dual_star(&e, &rf)), rf);

        // contravariance on a composable pair
        let h = s.map_between(&y, &GSet::point(g.clone())).unwrap();
        let rg = lift_r(&e, &h);
        let gf = compose(&e, &rg, &rf).unwrap();
        assert_eq!(
            dual_star(&e, &gf),
            compose(&e, &dual_star(&e, &rf), &dual_star(&e, &rg)).unwrap()
        );
    }

    #[test]
    fn functor_laws_for_lifts() {
        let g = FiniteGroup::cyclic(8).unwrap();
        let e = BurnsideFunctor::new(&g);
        let x = GSet::regular(g.clone());
        let y = GSet::coset_space(&g, &[0, 4]);
        let z = GSet::coset_space(&g, &[0, 2, 4, 6]);
        let mut s = Sampler::new(&g, 17);
        let f = s.map_between(&x, &y).unwrap();
        let h = s.map_between(&y, &z).unwrap();
        let hf = f.then(&h).unwrap();

        assert_eq!(
            lift_r::<BurnsideFunctor>(&e, &hf),
            compose(&e, &lift_r(&e, &h), &lift_r(&e, &f)).unwrap()
        );
        assert_eq!(
            lift_i::<BurnsideFunctor>(&e, &hf),
            compose(&e, &lift_i(&e, &f), &lift_i(&e, &h)).unwrap()
        );
        assert_eq!(lift_r(&e, &GMap::identity(&x)), identity(&e, &x));
        assert_eq!(lift_d(&e, &x, &e.one(&x)), identity(&e, &x));

        // R(iso) is inverse to I(iso)
        let sigma = x.automorphisms().into_iter().nth(3).unwrap();
        let ri = compose(&e, &lift_r(&e, &sigma), &lift_i(&e, &sigma)).unwrap();
        assert_eq!(ri, identity(&e, &x));
    }

    #[test]
    fn gysin_cat_e_identities() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let w = GSet::regular(g.clone());
        let z = GSet::coset_space(&g, &[0, 2]);
        let mut s = Sampler::new(&g, 23);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);

        for _ in 0..20 {
            let (zw, _, _) = hom_object(&w, &z);
            let alpha = Correspondence::<BurnsideFunctor> {
                dom: w.clone(),
                cod: z.clone(),
                elem: e.random_elem(&zw, &mut rng),
            };
            let y = s.nonempty_gset(2);
            let Some(f) = s.map_between(&y, &w) else { continue };
            // alpha . R f = (id_Z x f)^*(alpha)
            let lhs = compose(&e, &alpha, &lift_r(&e, &f)).unwrap();
            let (zy, _, _) = hom_object(&y, &z);
            let idzf = GMap::new(
                zy.clone(),
                zw.clone(),
                (0..zy.size())
                    .map(|i| {
                        let (zi, yi) = (i / y.size(), i % y.size());
                        zi * w.size() + f.apply(yi)
                    })
                    .collect(),
            )
            .unwrap();
            assert_eq!(lhs.elem, e.pullback(&idzf, &alpha.elem));

            // alpha . I f' = (id_Z x f')_!(alpha) for f': W -> Y'
            let fp = s.map_onto_random_target(&w, 1);
            let lhs = compose(&e, &alpha, &lift_i(&e, &fp)).unwrap();
            let (zyp, _, _) = hom_object(fp.dst(), &z);
            let idzfp = GMap::new(
                zw.clone(),
                zyp.clone(),
                (0..zw.size())
                    .map(|i| {
                        let (zi, wi) = (i / w.size(), i % w.size());
                        zi * fp.dst().size() + fp.apply(wi)
                    })
                    .collect(),
            )
            .unwrap();
            assert_eq!(lhs.elem, e.pushforward(&idzfp, &alpha.elem));

            // R g . alpha = (g x id_W)_!(alpha) for g: Z -> U
            let gm = s.map_onto_random_target(&z, 1);
            let lhs = compose(&e, &lift_r(&e, &gm), &alpha).unwrap();
            let (uw, _, _) = hom_object(&w, gm.dst());
            let gxid = GMap::new(
                zw.clone(),
                uw.clone(),
                (0..zw.size())
                    .map(|i| {
                        let (zi, wi) = (i / w.size(), i % w.size());
                        gm.apply(zi) * w.size() + wi
                    })
                    .collect(),
            )
            .unwrap();
            assert_eq!(lhs.elem, e.pushforward(&gxid, &alpha.elem));

            // I g' . alpha = (g' x id_W)^*(alpha) for g': U' -> Z
            let up = s.nonempty_gset(2);
            let Some(gp) = s.map_between(&up, &z) else { continue };
            let lhs = compose(&e, &lift_i(&e, &gp), &alpha).unwrap();
            let (upw, _, _) = hom_object(&w, &up);
            let gpxid = GMap::new(
                upw.clone(),
                zw.clone(),
                (0..upw.size())
                    .map(|i| {
                        let (ui, wi) = (i / w.size(), i % w.size());
                        gp.apply(ui) * w.size() + wi
                    })
                    .collect(),
            )
            .unwrap();
            assert_eq!(lhs.elem, e.pullback(&gpxid, &alpha.elem));
        }
    }

    #[test]
    fn beck_chevalley_and_span_formulas() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let e = BurnsideFunctor::new(&g);
        let mut s = Sampler::new(&g, 31);
        for _ in 0..30 {
            let (f, q) = s.cospan(2);
            // I f . R q = R p . I g for the pullback square
            let (_, p, gmap) = crate::group::pullback(&f, &q).unwrap();
            let lhs = compose(&e, &lift_i(&e, &f), &lift_r(&e, &q)).unwrap();
            let rhs = compose(&e, &lift_r(&e, &p), &lift_i(&e, &gmap)).unwrap();
            assert_eq!(lhs, rhs);
            // and both equal the transfer of 1 along the span into the product
            let (carrier, _, _) = hom_object(q.src(), f.src());
            let span = GMap::new(
                p.src().clone(),
                carrier,
                (0..p.src().size())
                    .map(|i| p.apply(i) * q.src().size() + gmap.apply(i))
                    .collect(),
            )
            .unwrap();
            assert_eq!(lhs.elem, e.pushforward(&span, &e.one(p.src())));
        }
    }

    #[test]
    fn diagonal_is_a_ring_map_and_r_d_exchange() {
        let g = FiniteGroup::cyclic(8).unwrap();
        let e = BurnsideFunctor::new(&g);
        let x = GSet::coset_space(&g, &[0, 4]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let mut s = Sampler::new(&g, 41);
        for _ in 0..20 {
            let a = e.random_elem(&x, &mut rng);
            let b = e.random_elem(&x, &mut rng);
            // D(ab) = D a . D b
            let dab = lift_d(&e, &x, &e.mul(&x, &a, &b));
            let comp = compose(&e, &lift_d(&e, &x, &a), &lift_d(&e, &x, &b)).unwrap();
            assert_eq!(dab, comp);

            // D a . R f = R f . D(f^* a) and I f . D a = D(f^* a) . I f
            let y = s.nonempty_gset(2);
            let Some(f) = s.map_between(&y, &x) else { continue };
            let lhs = compose(&e, &lift_d(&e, &x, &a), &lift_r(&e, &f)).unwrap();
            let rhs = compose(&e, &lift_r(&e, &f), &lift_d(&e, &y, &e.pullback(&f, &a))).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = compose(&e, &lift_i(&e, &f), &lift_d(&e, &x, &a)).unwrap();
            let rhs = compose(&e, &lift_d(&e, &y, &e.pullback(&f, &a)), &lift_i(&e, &f)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn triple_formula() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let mut s = Sampler::new(&g, 43);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for _ in 0..20 {
            let z = s.nonempty_gset(2);
            let f = s.map_onto_random_target(&z, 1);
            let gmap = s.map_onto_random_target(&z, 1);
            let a = e.random_elem(&z, &mut rng);
            let triple = compose(
                &e,
                &lift_r(&e, &f),
                &compose(&e, &lift_d(&e, &z, &a), &lift_i(&e, &gmap)).unwrap(),
            )
            .unwrap();
            let (carrier, _, _) = hom_object(gmap.dst(), f.dst());
            let span = GMap::new(
                z.clone(),
                carrier,
                (0..z.size())
                    .map(|i| f.apply(i) * gmap.dst().size() + gmap.apply(i))
                    .collect(),
            )
            .unwrap();
            assert_eq!(triple.elem, e.pushforward(&span, &a));

            // R f . D a . I f = D(f_!(a)); R f . I f = D(f_!(1))
            let sym = compose(
                &e,
                &lift_r(&e, &f),
                &compose(&e, &lift_d(&e, &z, &a), &lift_i(&e, &f)).unwrap(),
            )
            .unwrap();
            assert_eq!(sym, lift_d(&e, f.dst(), &e.pushforward(&f, &a)));
            let ri = compose(&e, &lift_r(&e, &f), &lift_i(&e, &f)).unwrap();
            assert_eq!(ri, lift_d(&e, f.dst(), &e.pushforward(&f, &e.one(&z))));
        }
    }

    #[test]
    fn tensor_structure() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let e = BurnsideFunctor::new(&g);
        let pt = GSet::point(g.clone());
        let x = GSet::regular(g.clone());
        let mut s = Sampler::new(&g, 53);
        let f = s.map_between(&x, &pt).unwrap();
        let rf = lift_r(&e, &f);

        // unit object: f (x) i_* = f up to the unitor identification
        let unit = identity(&e, &pt);
        let tensored = tensor_corr(&e, &rf, &unit);
        assert_eq!(tensored.elem, rf.elem);

        // R(f x g) = R f (x) R g
        let sigma = x.automorphisms().into_iter().nth(1).unwrap();
        let (xx, p1, p2) = crate::group::product(&x, &x).unwrap();
        let fxg = GMap::new(
            xx.clone(),
            crate::group::product(&pt, &x).unwrap().0,
            (0..xx.size())
                .map(|i| {
                    let (a, b) = (p1.apply(i), p2.apply(i));
                    f.apply(a) * x.size() + sigma.apply(b)
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(lift_r(&e, &fxg).elem, tensor_corr(&e, &rf, &lift_r(&e, &sigma)).elem);

        // I(f x g) = I f (x) I g
        assert_eq!(lift_i(&e, &fxg).elem, tensor_corr(&e, &lift_i(&e, &f), &lift_i(&e, &sigma)).elem);
    }

    #[test]
    fn eprime_extends_both_variances() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let mut s = Sampler::new(&g, 59);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let x = s.nonempty_gset(2);
            let f = s.map_onto_random_target(&x, 1);
            let b = e.random_elem(f.dst(), &mut rng);
            assert_eq!(apply_eprime(&e, &lift_r(&e, &f), &b), e.pullback(&f, &b));
            let a = e.random_elem(&x, &mut rng);
            assert_eq!(apply_eprime(&e, &lift_i(&e, &f), &a), e.pushforward(&f, &a));
            assert_eq!(apply_eprime(&e, &identity(&e, &x), &a), a);

            // functoriality: E'(g1 . g2) = E'(g2) . E'(g1)
            let g1 = lift_r(&e, &f);
            let g2 = lift_i(&e, &f);
            let composed = compose(&e, &g1, &g2).unwrap();
            let via_parts = apply_eprime(&e, &g2, &apply_eprime(&e, &g1, &b));
            assert_eq!(apply_eprime(&e, &composed, &b), via_parts);
        }
    }

    #[test]
    fn twisted_group_ring_on_regular_c2() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let e = BurnsideFunctor::new(&g);
        let x = GSet::regular(g.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
        let report = endo_ring_galois(&e, &x, 25, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.automorphisms, 2);
        assert!(report.twist_trivial);

        // precondition: non-Galois input errors
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let transposition = (1..6).find(|&i| s3.mul(i, i) == 0).unwrap();
        let bad = GSet::coset_space(&s3, &[0, transposition]);
        let e3 = BurnsideFunctor::new(&s3);
        assert!(endo_ring_galois(&e3, &bad, 2, &mut rng).is_err());
    }

    #[test]
    fn endo_ring_on_point_is_the_base_ring() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let e = BurnsideFunctor::new(&g);
        let pt = GSet::point(g.clone());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let report = endo_ring_galois(&e, &pt, 10, &mut rng).unwrap();
        assert!(report.passed());
        assert_eq!(report.automorphisms, 1);
    }

    #[test]
    fn duality_triangles_for_small_sets() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let e = BurnsideFunctor::new(&g);
        let pt = GSet::point(g.clone());
        assert!(duality_check(&e, &pt).passed());
        let x = GSet::regular(g.clone());
        assert!(duality_check(&e, &x).passed());
        let (mixed, _, _) = coproduct(&x, &pt).unwrap();
        assert!(duality_check(&e, &mixed).passed());
    }

    #[test]
    fn matrix_model_over_trivial_group() {
        let g = FiniteGroup::cyclic(1).unwrap();
        let e = BurnsideFunctor::new(&g);
        let mk = |n: usize| {
            let mut acc = GSet::empty(g.clone());
            for _ in 0..n {
                acc = coproduct(&acc, &GSet::point(g.clone())).unwrap().0;
            }
            acc
        };
        let x3 = mk(3);
        let id = identity(&e, &x3);
        assert_eq!(
            matrix_model(&id).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );

        // R f is the 0/1 matrix of the graph of f
        let x2 = mk(2);
        let f = GMap::new(x3.clone(), x2.clone(), vec![0, 0, 1]).unwrap();
        assert_eq!(matrix_model(&lift_r(&e, &f)).unwrap(), vec![vec![1, 1, 0], vec![0, 0, 1]]);

        // roundtrip through the inverse
        let m = vec![vec![2, -1, 0], vec![0, 3, 1]];
        let corr = matrix_model_inverse(&e, &m, &x3, &x2).unwrap();
        assert_eq!(matrix_model(&corr).unwrap(), m);

        // wrong group is rejected
        let g2 = FiniteGroup::cyclic(2).unwrap();
        let e2 = BurnsideFunctor::new(&g2);
        let bad = identity(&e2, &GSet::regular(g2.clone()));
        assert!(matrix_model(&bad).is_err());
    }

    #[test]
    fn associativity_on_random_triples() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = BurnsideFunctor::new(&g);
        let mut s = Sampler::new(&g, 67);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        for _ in 0..25 {
            let a = s.nonempty_gset(2);
            let b = s.nonempty_gset(2);
            let c = s.nonempty_gset(2);
            let d = s.nonempty_gset(2);
            let mk = |dom: &GSet, cod: &GSet, rng: &mut rand_chacha::ChaCha8Rng| {
                let (carrier, _, _) = hom_object(dom, cod);
                Correspondence::<BurnsideFunctor> {
                    dom: dom.clone(),
                    cod: cod.clone(),
                    elem: e.random_elem(&carrier, rng),
                }
            };
            let f = mk(&a, &b, &mut rng);
            let gg = mk(&b, &c, &mut rng);
            let h = mk(&c, &d, &mut rng);
            let left = compose(&e, &h, &compose(&e, &gg, &f).unwrap()).unwrap();
            let right = compose(&e, &compose(&e, &h, &gg).unwrap(), &f).unwrap();
            assert_eq!(left, right);
        }
    }
}
