//! Deterministic random G-sets and equivariant maps for the property
//! suites.  Everything is driven by a seeded ChaCha stream so failures
//! reproduce exactly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{coproduct, GMap, GSet, Group};

pub struct Sampler {
    rng: ChaCha8Rng,
    group: Group,
    subgroups: Vec<Vec<usize>>,
}

impl Sampler {
    pub fn new(group: &Group, seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            group: group.clone(),
            subgroups: group.subgroups().to_vec(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// A random G-set with up to `max_orbits` orbits; occasionally empty.
    pub fn gset(&mut self, max_orbits: usize) -> GSet {
        let k = self.rng.gen_range(0..=max_orbits);
        let mut acc = GSet::empty(self.group.clone());
        for _ in 0..k {
            let h = &self.subgroups[self.rng.gen_range(0..self.subgroups.len())];
            let orbit = GSet::coset_space(&self.group, h);
            acc = coproduct(&acc, &orbit).unwrap().0;
        }
        acc
    }

    pub fn nonempty_gset(&mut self, max_orbits: usize) -> GSet {
        let k = self.rng.gen_range(1..=max_orbits.max(1));
        let mut acc = GSet::empty(self.group.clone());
        for _ in 0..k {
            let h = &self.subgroups[self.rng.gen_range(0..self.subgroups.len())];
            let orbit = GSet::coset_space(&self.group, h);
            acc = coproduct(&acc, &orbit).unwrap().0;
        }
        acc
    }

    /// A random equivariant map X -> Y, when one exists.
    pub fn map_between(&mut self, x: &GSet, y: &GSet) -> Option<GMap> {
        let n = self.group.order();
        let mut table = vec![usize::MAX; x.size()];
        for (orbit, incl) in x.orbits() {
            let base = incl.apply(0);
            let stab = orbit.stabilizer(0);
            let candidates: Vec<usize> = (0..y.size())
                .filter(|&p| stab.iter().all(|&h| y.act(h, p) == p))
                .collect();
            if candidates.is_empty() {
                return None;
            }
            let img = candidates[self.rng.gen_range(0..candidates.len())];
            for g in 0..n {
                table[x.act(g, base)] = y.act(g, img);
            }
        }
        Some(GMap::new(x.clone(), y.clone(), table).expect("constructed equivariantly"))
    }

    /// A random map out of `x` onto a random target that is guaranteed to
    /// receive it: the target is built from quotients of the orbits of `x`,
    /// possibly padded with extra orbits.
    pub fn map_onto_random_target(&mut self, x: &GSet, max_extra: usize) -> GMap {
        // build a target whose orbits have stabilizers enlarging those of x
        let mut target = GSet::empty(self.group.clone());
        for (orbit, _) in x.orbits() {
            let h = orbit.stabilizer(0);
            let supergroups: Vec<&Vec<usize>> = self
                .subgroups
                .iter()
                .filter(|k| h.iter().all(|g| k.binary_search(g).is_ok()))
                .collect();
            let k = supergroups[self.rng.gen_range(0..supergroups.len())];
            let orbit = GSet::coset_space(&self.group, k);
            target = coproduct(&target, &orbit).unwrap().0;
        }
        for _ in 0..self.rng.gen_range(0..=max_extra) {
            let h = &self.subgroups[self.rng.gen_range(0..self.subgroups.len())];
            let orbit = GSet::coset_space(&self.group, h);
            target = coproduct(&target, &orbit).unwrap().0;
        }
        self.map_between(x, &target)
            .expect("target was built to receive every orbit")
    }

    /// Two random maps into a shared random target.
    pub fn cospan(&mut self, max_orbits: usize) -> (GMap, GMap) {
        loop {
            let a = self.nonempty_gset(max_orbits);
            let f = self.map_onto_random_target(&a, max_orbits.saturating_sub(1));
            let b = self.nonempty_gset(max_orbits);
            if let Some(g) = self.map_between(&b, f.dst()) {
                return (f, g);
            }
        }
    }
}
