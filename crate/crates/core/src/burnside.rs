//! The Burnside ring of a G-set X: the Grothendieck group of iso-classes
//! of G-maps S -> X, multiplied by fiber product.  The monoid of
//! iso-classes is free on the classes with transitive source, so elements
//! are finitely supported integer vectors over canonical basis keys and
//! equality is literal.
//!
//! A basis key stores the canonical stabilizer of the transitive source
//! (the least subgroup in its conjugacy class) and the map table to the
//! base, minimized over precomposition with automorphisms of the source,
//! so that isomorphic maps collide.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::group::{pullback, GMap, GSet, Group};
use crate::gysin::GysinFunctor;

/// Canonical name for the iso-class of a map from a transitive G-set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitKey {
    /// Sorted element list of the canonical stabilizer.
    pub stab: Vec<usize>,
    /// Image table of the canonical coset space in the base object.
    pub table: Vec<usize>,
}

/// An element of the Burnside ring over `base`; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideElem {
    base: GSet,
    terms: BTreeMap<OrbitKey, i64>,
}

impl BurnsideElem {
    pub fn zero(base: &GSet) -> BurnsideElem {
        BurnsideElem { base: base.clone(), terms: BTreeMap::new() }
    }

    /// Canonical form of the class `[f: S -> X]`, summing over the orbits
    /// of the source.
    pub fn from_map(f: &GMap) -> BurnsideElem {
        let mut out = BurnsideElem::zero(f.dst());
        for (orbit, incl) in f.src().orbits() {
            let to_base: Vec<usize> = (0..orbit.size()).map(|i| f.apply(incl.apply(i))).collect();
            let key = canonical_key(f.dst().group(), &orbit, &to_base);
            out.add_term(key, 1);
        }
        out
    }

    /// The multiplicative unit `[id: X -> X]`.
    pub fn unit(base: &GSet) -> BurnsideElem {
        BurnsideElem::from_map(&GMap::identity(base))
    }

    pub fn base(&self) -> &GSet {
        &self.base
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OrbitKey, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: OrbitKey, coeff: i64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if coeff != 0 {
                    v.insert(coeff);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Reconstruct the G-map named by a basis key of this element's base.
    pub fn key_to_map(&self, key: &OrbitKey) -> GMap {
        key_to_map(self.base.group(), &self.base, key)
    }

    pub fn try_add(&self, other: &BurnsideElem) -> Result<BurnsideElem, Error> {
        if self.base != other.base {
            return Err(Error::InvalidArgument("sum of Burnside classes over different bases".into()));
        }
        let mut out = self.clone();
        for (k, &c) in other.terms.iter() {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn scaled(&self, k: i64) -> BurnsideElem {
        if k == 0 {
            return BurnsideElem::zero(&self.base);
        }
        BurnsideElem {
            base: self.base.clone(),
            terms: self.terms.iter().map(|(key, &c)| (key.clone(), c * k)).collect(),
        }
    }

    /// Bilinear extension of the fiber product of basis classes.
    pub fn try_mul(&self, other: &BurnsideElem) -> Result<BurnsideElem, Error> {
        if self.base != other.base {
            return Err(Error::InvalidArgument("product of Burnside classes over different bases".into()));
        }
        let mut out = BurnsideElem::zero(&self.base);
        for (ka, &ca) in self.terms.iter() {
            let fa = self.key_to_map(ka);
            for (kb, &cb) in other.terms.iter() {
                let fb = other.key_to_map(kb);
                let (p, pa, _) = pullback(&fa, &fb).expect("shared base");
                let to_base = pa.then(&fa).expect("composable");
                for (orbit, incl) in p.orbits() {
                    let table: Vec<usize> =
                        (0..orbit.size()).map(|i| to_base.apply(incl.apply(i))).collect();
                    let key = canonical_key(self.base.group(), &orbit, &table);
                    out.add_term(key, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Basis-wise pullback along `f: X -> Y` of a class over Y.
    pub fn pulled_back(&self, f: &GMap) -> BurnsideElem {
        assert_eq!(f.dst(), &self.base, "pullback along a map into a different base");
        let mut out = BurnsideElem::zero(f.src());
        for (key, &c) in self.terms.iter() {
            let u = self.key_to_map(key);
            let (_, px, _) = pullback(f, &u).expect("shared base");
            for (orbit, incl) in px.src().orbits() {
                let table: Vec<usize> =
                    (0..orbit.size()).map(|i| px.apply(incl.apply(i))).collect();
                let key = canonical_key(f.src().group(), &orbit, &table);
                out.add_term(key, c);
            }
        }
        out
    }

    /// Basis-wise post-composition with `f: X -> Y` of a class over X.
    pub fn pushed_forward(&self, f: &GMap) -> BurnsideElem {
        assert_eq!(f.src(), &self.base, "pushforward along a map out of a different base");
        let mut out = BurnsideElem::zero(f.dst());
        for (key, &c) in self.terms.iter() {
            let u = self.key_to_map(key);
            let composite = u.then(f).expect("composable");
            let table: Vec<usize> = composite.table().to_vec();
            let t = u.src().clone();
            let key = canonical_key(f.dst().group(), &t, &table);
            out.add_term(key, c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                json!({
                    "orbit": gset_inline_json(&GSet::coset_space(self.base.group(), &k.stab)),
                    "map": k.table,
                    "coeff": c,
                })
            })
            .collect();
        json!({ "base": gset_inline_json(&self.base), "terms": terms })
    }
}

pub(crate) fn gset_inline_json(x: &GSet) -> Value {
    json!({ "size": x.size(), "act": x.act_table() })
}

/// Canonical key for a map out of a transitive G-set.
fn canonical_key(group: &Group, orbit: &GSet, to_base: &[usize]) -> OrbitKey {
    debug_assert!(orbit.is_transitive());
    let h = orbit.stabilizer(0);
    let (stab, witness) = group.least_conjugate(&h);
    // the point of the orbit whose stabilizer is exactly `stab`
    let x0 = orbit.act(witness, 0);
    let data = crate::group::coset_data(group, &stab);
    // canonical iso from the coset space: coset of r maps to r . x0
    let phi: Vec<usize> = data.reps.iter().map(|&r| orbit.act(r, x0)).collect();
    let base_table: Vec<usize> = phi.iter().map(|&s| to_base[s]).collect();
    let mut best = base_table.clone();
    for aut in &data.auts {
        let cand: Vec<usize> = (0..base_table.len()).map(|i| base_table[aut[i]]).collect();
        if cand < best {
            best = cand;
        }
    }
    OrbitKey { stab, table: best }
}

pub(crate) fn key_to_map(group: &Group, base: &GSet, key: &OrbitKey) -> GMap {
    let t = GSet::coset_space(group, &key.stab);
    GMap::new(t, base.clone(), key.table.clone()).expect("canonical keys name equivariant maps")
}

/// The Burnside functor: the universal Gysin functor for finite G-sets.
#[derive(Clone, Debug)]
pub struct BurnsideFunctor {
    group: Group,
}

impl BurnsideFunctor {
    pub fn new(group: &Group) -> BurnsideFunctor {
        BurnsideFunctor { group: group.clone() }
    }

    /// Random classes for the property suites: a few random orbit maps
    /// with small coefficients.
    fn sample(&self, x: &GSet, rng: &mut ChaCha8Rng) -> BurnsideElem {
        let mut out = BurnsideElem::zero(x);
        if x.is_empty() {
            return out;
        }
        let subgroups = self.group.subgroups().to_vec();
        let n_terms = rng.gen_range(0..=3);
        for _ in 0..n_terms {
            // a random orbit with a random valid image point
            for _attempt in 0..8 {
                let h = &subgroups[rng.gen_range(0..subgroups.len())];
                let candidates: Vec<usize> = (0..x.size())
                    .filter(|&p| h.iter().all(|&g| x.act(g, p) == p))
                    .collect();
                if candidates.is_empty() {
                    continue;
                }
                let img = candidates[rng.gen_range(0..candidates.len())];
                let t = GSet::coset_space(&self.group, h);
                let reps = GSet::coset_reps(&self.group, h);
                let table: Vec<usize> = reps.iter().map(|&r| x.act(r, img)).collect();
                let f = GMap::new(t, x.clone(), table).expect("equivariant by construction");
                let coeff = [-2i64, -1, 1, 1, 2][rng.gen_range(0..5)];
                out = out.try_add(&BurnsideElem::from_map(&f).scaled(coeff)).unwrap();
                break;
            }
        }
        out
    }
}

impl GysinFunctor for BurnsideFunctor {
    type Elem = BurnsideElem;

    fn name(&self) -> String {
        "burnside".into()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn zero(&self, x: &GSet) -> BurnsideElem {
        BurnsideElem::zero(x)
    }

    fn one(&self, x: &GSet) -> BurnsideElem {
        BurnsideElem::unit(x)
    }

    fn add(&self, _x: &GSet, a: &BurnsideElem, b: &BurnsideElem) -> BurnsideElem {
        a.try_add(b).expect("elements over the same object")
    }

    fn neg(&self, _x: &GSet, a: &BurnsideElem) -> BurnsideElem {
        a.scaled(-1)
    }

    fn mul(&self, _x: &GSet, a: &BurnsideElem, b: &BurnsideElem) -> BurnsideElem {
        a.try_mul(b).expect("elements over the same object")
    }

    fn scale(&self, _x: &GSet, a: &BurnsideElem, k: i64) -> BurnsideElem {
        a.scaled(k)
    }

    fn pullback(&self, f: &GMap, b: &BurnsideElem) -> BurnsideElem {
        b.pulled_back(f)
    }

    fn pushforward(&self, f: &GMap, a: &BurnsideElem) -> BurnsideElem {
        a.pushed_forward(f)
    }

    fn random_elem(&self, x: &GSet, rng: &mut ChaCha8Rng) -> BurnsideElem {
        self.sample(x, rng)
    }

    fn elem_to_json(&self, _x: &GSet, a: &BurnsideElem) -> Value {
        a.to_json()
    }

    fn elem_from_json(&self, x: &GSet, v: &Value) -> Result<BurnsideElem, Error> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidArgument("burnside element needs a `terms` array".into()))?;
        let mut out = BurnsideElem::zero(x);
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::InvalidArgument("term needs an integer `coeff`".into()))?;
            let map = t
                .get("map")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidArgument("term needs a `map` table".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| Error::InvalidArgument("map entries must be indices".into()))
                })
                .collect::<Result<Vec<usize>, Error>>()?;
            let orbit = t
                .get("orbit")
                .ok_or_else(|| Error::InvalidArgument("term needs an `orbit`".into()))?;
            let size = orbit
                .get("size")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidArgument("orbit needs a `size`".into()))?
                as usize;
            let act = orbit
                .get("act")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidArgument("orbit needs an `act` table".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::InvalidArgument("act rows must be arrays".into()))?
                        .iter()
                        .map(|x| {
                            x.as_u64()
                                .map(|x| x as usize)
                                .ok_or_else(|| Error::InvalidArgument("act entries must be indices".into()))
                        })
                        .collect::<Result<Vec<usize>, Error>>()
                })
                .collect::<Result<Vec<Vec<usize>>, Error>>()?;
            let s = GSet::new(self.group.clone(), size, act)?;
            let f = GMap::new(s, x.clone(), map)?;
            out = out.try_add(&BurnsideElem::from_map(&f).scaled(coeff))?;
        }
        Ok(out)
    }

    fn elem_display(&self, _x: &GSet, a: &BurnsideElem, _ascii: bool) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (key, &c) in a.terms() {
            let size = GSet::coset_space(self.group(), &key.stab).size();
            let coeff = match c {
                1 => String::new(),
                -1 => "-".into(),
                c => format!("{c}*"),
            };
            parts.push(format!("{coeff}[{size}:{:?}]", key.table));
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{coproduct, FiniteGroup};

    #[test]
    fn identity_on_transitive_base_is_one_term() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let x = GSet::regular(g);
        let e = BurnsideElem::unit(&x);
        assert_eq!(e.terms().count(), 1);
        assert_eq!(*e.terms().next().unwrap().1, 1);
    }

    #[test]
    fn empty_source_is_zero() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let x = GSet::point(g.clone());
        let f = GMap::new(GSet::empty(g), x, vec![]).unwrap();
        assert!(BurnsideElem::from_map(&f).is_zero());
    }


    #[test]
    fn two_free_orbits_over_the_point() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let reg = GSet::regular(g.clone());
        let (two, _, _) = coproduct(&reg, &reg).unwrap();
        let f = GMap::to_point(&two);
        let e = BurnsideElem::from_map(&f);
        assert_eq!(e.terms().count(), 1);
        assert_eq!(*e.terms().next().unwrap().1, 2);
    }

    #[test]
    fn unit_is_a_left_and_right_identity() {
        let g = FiniteGroup::cyclic(8).unwrap();
        let x = GSet::coset_space(&g, &[0, 4]);
        let one = BurnsideElem::unit(&x);
        let f = GMap::new(GSet::regular(g.clone()), x.clone(), vec![0, 1, 2, 3, 0, 1, 2, 3]).unwrap();
        let a = BurnsideElem::from_map(&f).scaled(3);
        assert_eq!(one.try_mul(&a).unwrap(), a);
        assert_eq!(a.try_mul(&one).unwrap(), a);
    }

    #[test]
    fn square_of_free_class_over_point() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let t = BurnsideElem::from_map(&GMap::to_point(&GSet::regular(g)));
        let sq = t.try_mul(&t).unwrap();
        assert_eq!(sq, t.scaled(2));
    }

    #[test]
    fn disjoint_supports_multiply_to_zero() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let pt = GSet::point(g.clone());
        let (base, i0, i1) = coproduct(&pt, &pt).unwrap();
        let a = BurnsideElem::from_map(&i0);
        let b = BurnsideElem::from_map(&i1);
        assert!(a.try_mul(&b).unwrap().is_zero());
        let _ = base;
    }

    #[test]
    fn pullback_of_point_class_along_projection() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let reg = GSet::regular(g.clone());
        let pi = GMap::to_point(&reg);
        let class_g = BurnsideElem::from_map(&pi); // [G -> *]
        let up = class_g.pulled_back(&pi); // [G x G -> G] = 2 [id]
        assert_eq!(up, BurnsideElem::unit(&reg).scaled(2));
    }

    #[test]
    fn pullback_along_identity_and_pushforward_along_identity() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let x = GSet::regular(g.clone());
        let id = GMap::identity(&x);
        let f = GMap::to_point(&x);
        let a = BurnsideElem::from_map(&GMap::identity(&x)).scaled(2);
        assert_eq!(a.pulled_back(&id), a);
        assert_eq!(a.pushed_forward(&id), a);
        let down = a.pushed_forward(&f);
        assert_eq!(down.terms().count(), 1);
        let _ = down;
    }

    #[test]
    fn pullback_of_other_summand_vanishes() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let a = GSet::regular(g.clone());
        let b = GSet::coset_space(&g, &[0, 2]);
        let (_, i0, i1) = coproduct(&a, &b).unwrap();
        let cls = BurnsideElem::from_map(&i0);
        assert!(cls.pulled_back(&i1).is_zero());
    }

    #[test]
    fn isomorphic_maps_share_keys() {
        // [G --id--> G] and [G --translate--> G] are isomorphic over G
        let g = FiniteGroup::cyclic(4).unwrap();
        let x = GSet::regular(g.clone());
        for aut in x.automorphisms() {
            assert_eq!(BurnsideElem::from_map(&aut), BurnsideElem::unit(&x));
        }
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let x = GSet::regular(g.clone());
        let (xx, p1, _) = crate::group::product(&x, &x).unwrap();
        let e = BurnsideElem::from_map(&p1);
        // rebuilding every key from its own map must reproduce the element
        let mut rebuilt = BurnsideElem::zero(&x);
        for (key, &c) in e.terms() {
            let f = e.key_to_map(key);
            rebuilt = rebuilt.try_add(&BurnsideElem::from_map(&f).scaled(c)).unwrap();
        }
        assert_eq!(e, rebuilt);
        let _ = xx;
    }

    #[test]
    fn iso_pushforward_inverts_pullback() {
        use rand::SeedableRng;
        let g = FiniteGroup::cyclic(8).unwrap();
        let x = GSet::regular(g.clone());
        let f = x.automorphisms().into_iter().nth(3).unwrap();
        let funct = BurnsideFunctor::new(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
        for _ in 0..10 {
            let a = funct.random_elem(&x, &mut rng);
            let roundtrip = funct.pullback(&f, &funct.pushforward(&f, &a));
            assert_eq!(roundtrip, a);
        }
    }

    #[test]
    fn base_mismatch_is_an_error() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let a = BurnsideElem::unit(&GSet::point(g.clone()));
        let b = BurnsideElem::unit(&GSet::regular(g));
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&b).is_err());
    }
}
