//! Finite groups, finite G-sets, equivariant maps, and the finite
//! limits/colimits (products, pullbacks, coproducts) everything else is
//! built from.
//!
//! Elements of groups and G-sets are dense integer indices with the group
//! identity fixed at index 0.  Products and pullbacks order their elements
//! lexicographically (first factor major) so that every derived object is
//! reproducible bit for bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Error;

/// Shared handle to a finite group.  G-sets keep one of these.
pub type Group = Arc<FiniteGroup>;

/// A finite group given by its multiplication table.
///
/// `mul[a][b]` is the index of the product `a*b`, the identity is index 0,
/// and `inv` is the table of inverses.  Derived data (subgroups, conjugacy
/// minima, coset spaces) is memoized; the caches are pure, so values are
/// still observably immutable.
pub struct FiniteGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    caches: GroupCaches,
}

#[derive(Default)]
struct GroupCaches {
    subgroups: OnceLock<Vec<Vec<usize>>>,
    conjugacy: Mutex<BTreeMap<Vec<usize>, (Vec<usize>, usize)>>,
    cosets: Mutex<BTreeMap<Vec<usize>, Arc<CosetData>>>,
}

/// Memoized description of one coset space G/H.
pub(crate) struct CosetData {
    pub(crate) reps: Vec<usize>,
    inner: Arc<GSetInner>,
    /// Tables of the equivariant automorphisms of G/H.
    pub(crate) auts: Vec<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || (self.order == other.order && self.mul == other.mul)
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Build a group from a raw multiplication table, validating the axioms.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Group, Error> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        for row in &mul {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::InvalidArgument("malformed multiplication table".into()));
            }
        }
        for x in 0..n {
            if mul[0][x] != x || mul[x][0] != x {
                return Err(Error::InvalidArgument("index 0 is not an identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidArgument("multiplication is not associative".into()));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == 0 && mul[b][a] == 0) {
                Some(b) => inv[a] = b,
                None => return Err(Error::InvalidArgument("element without inverse".into())),
            }
        }
        Ok(Arc::new(FiniteGroup { order: n, mul, inv, caches: GroupCaches::default() }))
    }

    /// The cyclic group Z/n with `mul[a][b] = (a+b) mod n`.
    pub fn cyclic(n: usize) -> Result<Group, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group needs order >= 1".into()));
        }
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(mul)
    }

    /// The symmetric group on `n` letters, elements enumerated as
    /// permutation words in lexicographic order (so the identity is first).
    pub fn symmetric(n: usize) -> Result<Group, Error> {
        if n == 0 || n > 6 {
            return Err(Error::InvalidArgument("symmetric group supported for 1..=6 letters".into()));
        }
        let perms = permutations(n);
        let index: BTreeMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| {
                        // (a*b)(x) = a(b(x))
                        let ab: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                        index[&ab]
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(mul)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn mul_table(&self) -> &Vec<Vec<usize>> {
        &self.mul
    }

    /// Closure of a set of elements under multiplication.
    pub fn close(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = gens.iter().copied().collect();
        set.insert(0);
        loop {
            let mut grew = false;
            let current: Vec<usize> = set.iter().copied().collect();
            for &a in &current {
                for &b in &current {
                    if set.insert(self.mul[a][b]) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set.into_iter().collect()
    }

    /// All subgroups, as sorted element lists, found by closing generator
    /// sets breadth-first.  Fine for the small groups used here.
    pub fn subgroups(&self) -> &[Vec<usize>] {
        self.caches.subgroups.get_or_init(|| {
            let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
            let trivial = vec![0];
            found.insert(trivial.clone());
            let mut queue = vec![trivial];
            while let Some(h) = queue.pop() {
                for g in 1..self.order {
                    if h.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.push(g);
                    let k = self.close(&gens);
                    if found.insert(k.clone()) {
                        queue.push(k);
                    }
                }
            }
            found.into_iter().collect()
        })
    }

    /// The conjugate `c H c^{-1}`, sorted.
    pub fn conjugate_subgroup(&self, h: &[usize], c: usize) -> Vec<usize> {
        let ci = self.inv[c];
        let mut out: Vec<usize> = h.iter().map(|&x| self.mul[self.mul[c][x]][ci]).collect();
        out.sort_unstable();
        out
    }

    /// Least conjugate of `h` (lexicographically as a sorted element list),
    /// together with the first conjugating element achieving it.
    pub fn least_conjugate(&self, h: &[usize]) -> (Vec<usize>, usize) {
        if let Some(hit) = self.caches.conjugacy.lock().unwrap().get(h) {
            return hit.clone();
        }
        let mut best = self.conjugate_subgroup(h, 0);
        let mut witness = 0;
        for c in 1..self.order {
            let k = self.conjugate_subgroup(h, c);
            if k < best {
                best = k;
                witness = c;
            }
        }
        self.caches.conjugacy.lock().unwrap().insert(h.to_vec(), (best.clone(), witness));
        (best, witness)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

#[derive(Debug)]
struct GSetInner {
    size: usize,
    /// act[g][x] = g . x
    act: Vec<Vec<usize>>,
}

/// A finite G-set: a finite set with an action table for a fixed group.
#[derive(Clone)]
pub struct GSet {
    group: Group,
    inner: Arc<GSetInner>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet(|G|={}, size={})", self.group.order(), self.inner.size)
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        if !Arc::ptr_eq(&self.group, &other.group) && self.group != other.group {
            return false;
        }
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.size == other.inner.size && self.inner.act == other.inner.act)
    }
}
impl Eq for GSet {}

impl GSet {
    /// Validates the action axioms: identity acts trivially, and the action
    /// is compatible with multiplication.
    pub fn new(group: Group, size: usize, act: Vec<Vec<usize>>) -> Result<GSet, Error> {
        let n = group.order();
        if act.len() != n {
            return Err(Error::InvalidArgument("action table must have one row per group element".into()));
        }
        for row in &act {
            if row.len() != size || row.iter().any(|&x| x >= size) {
                return Err(Error::InvalidArgument("malformed action table".into()));
            }
        }
        for x in 0..size {
            if act[0][x] != x {
                return Err(Error::InvalidArgument("identity must act trivially".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                for x in 0..size {
                    if act[g][act[h][x]] != act[gh][x] {
                        return Err(Error::InvalidArgument("action is not compatible with multiplication".into()));
                    }
                }
            }
        }
        Ok(GSet { group, inner: Arc::new(GSetInner { size, act }) })
    }

    pub fn empty(group: Group) -> GSet {
        let n = group.order();
        GSet { group, inner: Arc::new(GSetInner { size: 0, act: vec![vec![]; n] }) }
    }

    pub fn point(group: Group) -> GSet {
        let n = group.order();
        GSet { group, inner: Arc::new(GSetInner { size: 1, act: vec![vec![0]; n] }) }
    }

    /// G acting on itself by left translation.
    pub fn regular(group: Group) -> GSet {
        let n = group.order();
        let act = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        GSet { group, inner: Arc::new(GSetInner { size: n, act }) }
    }

    /// Minimal representatives of the cosets of H, in the element order
    /// used by [`GSet::coset_space`].
    pub fn coset_reps(group: &Group, subgroup: &[usize]) -> Vec<usize> {
        coset_data(group, subgroup).reps.clone()
    }

    /// The coset space G/H for a subgroup H (sorted element list).
    /// Cosets are ordered by their minimal element, so the coset of the
    /// identity is index 0.
    pub fn coset_space(group: &Group, subgroup: &[usize]) -> GSet {
        let data = coset_data(group, subgroup);
        GSet { group: group.clone(), inner: data.inner.clone() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.inner.size
    }

    pub fn is_empty(&self) -> bool {
        self.inner.size == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.inner.act[g][x]
    }

    pub fn act_table(&self) -> &Vec<Vec<usize>> {
        &self.inner.act
    }

    /// Stabilizer of a point, as a sorted element list.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect()
    }

    /// Orbit decomposition: one `(transitive G-set, inclusion)` per orbit,
    /// ordered by least original element; each orbit keeps the original
    /// relative element order.
    pub fn orbits(&self) -> Vec<(GSet, GMap)> {
        let n = self.group.order();
        let mut seen = vec![false; self.size()];
        let mut out = Vec::new();
        for x in 0..self.size() {
            if seen[x] {
                continue;
            }
            let mut members: BTreeSet<usize> = BTreeSet::new();
            for g in 0..n {
                members.insert(self.act(g, x));
            }
            let incl: Vec<usize> = members.iter().copied().collect();
            for &m in &incl {
                seen[m] = true;
            }
            let pos: BTreeMap<usize, usize> = incl.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let act = (0..n)
                .map(|g| incl.iter().map(|&m| pos[&self.act(g, m)]).collect())
                .collect();
            let orbit = GSet { group: self.group.clone(), inner: Arc::new(GSetInner { size: incl.len(), act }) };
            let map = GMap { src: orbit.clone(), dst: self.clone(), table: incl };
            out.push((orbit, map));
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        !self.is_empty() && self.orbits().len() == 1
    }

    /// All equivariant automorphisms, in lexicographic table order.
    pub fn automorphisms(&self) -> Vec<GMap> {
        hom_set(self, self)
            .expect("same group")
            .into_iter()
            .filter(|m| m.is_bijective())
            .collect()
    }

    /// A transitive nonempty X is Galois when the canonical map
    /// `sum over Aut(X) of X -> X x X`, sending x in the sigma summand to
    /// (x, sigma x), is an isomorphism.  Non-atomic inputs return false.
    pub fn is_galois(&self) -> bool {
        if !self.is_transitive() {
            return false;
        }
        let auts = self.automorphisms();
        if auts.len() * self.size() != self.size() * self.size() {
            return false;
        }
        let mut hit = vec![false; self.size() * self.size()];
        for a in &auts {
            for x in 0..self.size() {
                let idx = x * self.size() + a.table[x];
                if hit[idx] {
                    return false;
                }
                hit[idx] = true;
            }
        }
        true
    }
}

/// Memoized coset-space data: representatives, action, automorphisms.
pub(crate) fn coset_data(group: &Group, subgroup: &[usize]) -> Arc<CosetData> {
    if let Some(hit) = group.caches.cosets.lock().unwrap().get(subgroup) {
        return hit.clone();
    }
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(g);
        for &h in subgroup {
            coset_of[group.mul(g, h)] = idx;
        }
    }
    let size = reps.len();
    let act: Vec<Vec<usize>> = (0..n)
        .map(|g| (0..size).map(|c| coset_of[group.mul(g, reps[c])]).collect())
        .collect();
    let inner = Arc::new(GSetInner { size, act });
    let gset = GSet { group: group.clone(), inner: inner.clone() };
    let auts = gset.automorphisms().into_iter().map(|m| m.table).collect();
    let data = Arc::new(CosetData { reps, inner, auts });
    group.caches.cosets.lock().unwrap().insert(subgroup.to_vec(), data.clone());
    data
}

/// An equivariant map of G-sets, stored as an image table.
#[derive(Clone)]
pub struct GMap {
    src: GSet,
    dst: GSet,
    table: Vec<usize>,
}

impl fmt::Debug for GMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMap({} -> {}, {:?})", self.src.size(), self.dst.size(), self.table)
    }
}

impl PartialEq for GMap {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.src == other.src && self.dst == other.dst
    }
}
impl Eq for GMap {}

impl GMap {
    pub fn new(src: GSet, dst: GSet, table: Vec<usize>) -> Result<GMap, Error> {
        if src.group() != dst.group() {
            return Err(Error::InvalidArgument("source and target live over different groups".into()));
        }
        if table.len() != src.size() || table.iter().any(|&y| y >= dst.size()) {
            return Err(Error::InvalidArgument("malformed map table".into()));
        }
        let n = src.group().order();
        for g in 0..n {
            for x in 0..src.size() {
                if table[src.act(g, x)] != dst.act(g, table[x]) {
                    return Err(Error::InvalidArgument("map is not equivariant".into()));
                }
            }
        }
        Ok(GMap { src, dst, table })
    }

    /// Constructor for maps that are equivariant by construction
    /// (projections, graphs, diagonals); skips the table validation.
    pub(crate) fn new_unchecked(src: GSet, dst: GSet, table: Vec<usize>) -> GMap {
        debug_assert_eq!(table.len(), src.size());
        GMap { src, dst, table }
    }

    pub fn identity(x: &GSet) -> GMap {
        GMap { src: x.clone(), dst: x.clone(), table: (0..x.size()).collect() }
    }

    /// The unique map to the one-point G-set.
    pub fn to_point(x: &GSet) -> GMap {
        GMap { src: x.clone(), dst: GSet::point(x.group().clone()), table: vec![0; x.size()] }
    }

    pub fn src(&self) -> &GSet {
        &self.src
    }

    pub fn dst(&self) -> &GSet {
        &self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self` followed by `g` (that is, `g` after `self`).
    pub fn then(&self, g: &GMap) -> Result<GMap, Error> {
        if self.dst != g.src {
            return Err(Error::NotComposable(format!(
                "cannot chain a map into a {}-point set with a map from a {}-point set",
                self.dst.size(),
                g.src.size()
            )));
        }
        Ok(GMap {
            src: self.src.clone(),
            dst: g.dst.clone(),
            table: self.table.iter().map(|&x| g.table[x]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.src.size() != self.dst.size() {
            return false;
        }
        let mut seen = vec![false; self.dst.size()];
        for &y in &self.table {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        true
    }

    pub fn inverse(&self) -> Option<GMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.src.size()];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(GMap { src: self.dst.clone(), dst: self.src.clone(), table })
    }
}

/// Product with the diagonal action; elements ordered lexicographically,
/// first factor major: `(x, y)` has index `x*|Y| + y`.
pub fn product(x: &GSet, y: &GSet) -> Result<(GSet, GMap, GMap), Error> {
    if x.group() != y.group() {
        return Err(Error::InvalidArgument("product of G-sets over different groups".into()));
    }
    let n = x.group().order();
    let size = x.size() * y.size();
    let act = (0..n)
        .map(|g| {
            (0..size)
                .map(|i| {
                    let (a, b) = (i / y.size(), i % y.size());
                    x.act(g, a) * y.size() + y.act(g, b)
                })
                .collect()
        })
        .collect();
    let prod = GSet { group: x.group().clone(), inner: Arc::new(GSetInner { size, act }) };
    let p1 = GMap { src: prod.clone(), dst: x.clone(), table: (0..size).map(|i| i / y.size()).collect() };
    let p2 = GMap { src: prod.clone(), dst: y.clone(), table: (0..size).map(|i| i % y.size()).collect() };
    Ok((prod, p1, p2))
}

/// Disjoint union, X-block first; returns the two inclusions.
pub fn coproduct(x: &GSet, y: &GSet) -> Result<(GSet, GMap, GMap), Error> {
    if x.group() != y.group() {
        return Err(Error::InvalidArgument("coproduct of G-sets over different groups".into()));
    }
    let n = x.group().order();
    let size = x.size() + y.size();
    let act = (0..n)
        .map(|g| {
            (0..size)
                .map(|i| if i < x.size() { x.act(g, i) } else { x.size() + y.act(g, i - x.size()) })
                .collect()
        })
        .collect();
    let sum = GSet { group: x.group().clone(), inner: Arc::new(GSetInner { size, act }) };
    let i0 = GMap { src: x.clone(), dst: sum.clone(), table: (0..x.size()).collect() };
    let i1 = GMap { src: y.clone(), dst: sum.clone(), table: (0..y.size()).map(|i| x.size() + i).collect() };
    Ok((sum, i0, i1))
}

/// Pullback of `f: A -> C` against `g: B -> C`: the subset of A x B where
/// the two maps agree, in lexicographic order, with the restricted
/// projections.
pub fn pullback(f: &GMap, g: &GMap) -> Result<(GSet, GMap, GMap), Error> {
    if f.dst() != g.dst() {
        return Err(Error::InvalidArgument("pullback legs must share a codomain".into()));
    }
    let a = f.src();
    let b = g.src();
    let n = a.group().order();
    let mut elems: Vec<(usize, usize)> = Vec::new();
    for x in 0..a.size() {
        for y in 0..b.size() {
            if f.apply(x) == g.apply(y) {
                elems.push((x, y));
            }
        }
    }
    let pos: BTreeMap<(usize, usize), usize> =
        elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let act = (0..n)
        .map(|gg| {
            elems
                .iter()
                .map(|&(x, y)| pos[&(a.act(gg, x), b.act(gg, y))])
                .collect()
        })
        .collect();
    let pb = GSet { group: a.group().clone(), inner: Arc::new(GSetInner { size: elems.len(), act }) };
    let p = GMap { src: pb.clone(), dst: a.clone(), table: elems.iter().map(|&(x, _)| x).collect() };
    let q = GMap { src: pb.clone(), dst: b.clone(), table: elems.iter().map(|&(_, y)| y).collect() };
    Ok((pb, p, q))
}

/// All equivariant maps X -> Y, sorted lexicographically by table.
pub fn hom_set(x: &GSet, y: &GSet) -> Result<Vec<GMap>, Error> {
    if x.group() != y.group() {
        return Err(Error::InvalidArgument("hom-set of G-sets over different groups".into()));
    }
    let n = x.group().order();
    let orbits = x.orbits();
    // For each orbit, a map is determined by the image of its base point,
    // which must be fixed by the base point's stabilizer.
    let mut per_orbit: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new(); // (base, reach, candidates)
    for (orbit, incl) in &orbits {
        let base = incl.apply(0);
        let stab = orbit.stabilizer(0);
        let candidates: Vec<usize> =
            (0..y.size()).filter(|&p| stab.iter().all(|&h| y.act(h, p) == p)).collect();
        if candidates.is_empty() {
            return Ok(Vec::new());
        }
        // For every point of the orbit pick one group element reaching it.
        let mut reach = vec![usize::MAX; x.size()];
        for g in 0..n {
            let t = x.act(g, base);
            if reach[t] == usize::MAX {
                reach[t] = g;
            }
        }
        let members: Vec<usize> = (0..x.size()).filter(|&t| reach[t] != usize::MAX).map(|t| reach[t]).collect();
        let _ = members;
        per_orbit.push((base, reach, candidates));
    }
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut choice = vec![0usize; per_orbit.len()];
    loop {
        let mut table = vec![usize::MAX; x.size()];
        for (k, &(_, ref reach, ref cands)) in per_orbit.iter().enumerate() {
            let img = cands[choice[k]];
            for t in 0..x.size() {
                if reach[t] != usize::MAX {
                    table[t] = y.act(reach[t], img);
                }
            }
        }
        maps.push(table);
        // advance the mixed-radix counter
        let mut k = 0;
        loop {
            if k == per_orbit.len() {
                maps.sort();
                return Ok(maps
                    .into_iter()
                    .map(|table| GMap { src: x.clone(), dst: y.clone(), table })
                    .collect());
            }
            choice[k] += 1;
            if choice[k] < per_orbit[k].2.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Search for an equivariant bijection X -> Y; deterministic (first found
/// in lexicographic search order over orbit matchings and base images).
pub fn iso_between(x: &GSet, y: &GSet) -> Result<Option<GMap>, Error> {
    if x.group() != y.group() {
        return Err(Error::InvalidArgument("isomorphism test over different groups".into()));
    }
    if x.size() != y.size() {
        return Ok(None);
    }
    let xo = x.orbits();
    let yo = y.orbits();
    if xo.len() != yo.len() {
        return Ok(None);
    }
    let n = x.group().order();
    let mut used = vec![false; yo.len()];
    let mut table = vec![usize::MAX; x.size()];

    fn assign(
        n: usize,
        x: &GSet,
        y: &GSet,
        xo: &[(GSet, GMap)],
        yo: &[(GSet, GMap)],
        k: usize,
        used: &mut [bool],
        table: &mut [usize],
    ) -> bool {
        if k == xo.len() {
            return true;
        }
        let (orbit, incl) = &xo[k];
        let base = incl.apply(0);
        let stab_x = x.stabilizer(base);
        for j in 0..yo.len() {
            if used[j] || yo[j].0.size() != orbit.size() {
                continue;
            }
            for cand_local in 0..yo[j].0.size() {
                let cand = yo[j].1.apply(cand_local);
                if y.stabilizer(cand) != stab_x {
                    continue;
                }
                // map g.base -> g.cand
                let mut ok = true;
                let mut partial: Vec<(usize, usize)> = Vec::new();
                let mut filled = vec![usize::MAX; x.size()];
                for g in 0..n {
                    let s = x.act(g, base);
                    let t = y.act(g, cand);
                    if filled[s] == usize::MAX {
                        filled[s] = t;
                        partial.push((s, t));
                    } else if filled[s] != t {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for &(s, t) in &partial {
                    table[s] = t;
                }
                used[j] = true;
                if assign(n, x, y, xo, yo, k + 1, used, table) {
                    return true;
                }
                used[j] = false;
                for &(s, _) in &partial {
                    table[s] = usize::MAX;
                }
            }
        }
        false
    }

    if assign(n, x, y, &xo, &yo, 0, &mut used, &mut table) {
        Ok(Some(GMap { src: x.clone(), dst: y.clone(), table }))
    } else {
        Ok(None)
    }
}

/// The canonical swap X x Y -> Y x X between the two lexicographic products.
pub fn swap_map(x: &GSet, y: &GSet) -> Result<GMap, Error> {
    let (xy, _, _) = product(x, y)?;
    let (yx, _, _) = product(y, x)?;
    let table = (0..xy.size())
        .map(|i| {
            let (a, b) = (i / y.size(), i % y.size());
            b * x.size() + a
        })
        .collect();
    Ok(GMap { src: xy, dst: yx, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables() {
        assert!(FiniteGroup::cyclic(0).is_err());
        let c1 = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(c1.mul_table(), &vec![vec![0]]);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(c2.mul_table(), &vec![vec![0, 1], vec![1, 0]]);
        let c8 = FiniteGroup::cyclic(8).unwrap();
        assert_eq!(c8.order(), 8);
        assert_eq!(c8.mul(5, 6), 3);
        assert_eq!(c8.inv(3), 5);
    }

    #[test]
    fn symmetric_group() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(s3.order(), 6);
        // identity is lexicographically first
        assert_eq!(s3.mul(0, 4), 4);
    }

    #[test]
    fn product_of_regular_c2_orbits() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let x = GSet::regular(g.clone());
        let (p, p1, p2) = product(&x, &x).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbits().len(), 2);
        for (orbit, _) in p.orbits() {
            assert_eq!(orbit.size(), 2);
        }
        // projections are equivariant by construction; spot-check tables
        assert_eq!(p1.table(), &[0, 0, 1, 1]);
        assert_eq!(p2.table(), &[0, 1, 0, 1]);
    }

    #[test]
    fn empty_product() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = GSet::empty(g.clone());
        let x = GSet::regular(g);
        let (p, _, _) = product(&e, &x).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn coproduct_blocks_and_pullback_squares() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let a = GSet::coset_space(&g, &[0, 2]); // size 2
        let b = GSet::regular(g.clone()); // size 4
        let (s, i0, i1) = coproduct(&a, &b).unwrap();
        assert_eq!(s.size(), 6);
        assert_eq!(s.orbits().len(), 2);

        // the three lextensive pullback squares: i0 vs i0 gives A, i1 vs i1
        // gives B, i1 vs i0 gives the empty set
        let (p, _, _) = pullback(&i0, &i0).unwrap();
        assert_eq!(p.size(), a.size());
        let (p, _, _) = pullback(&i1, &i1).unwrap();
        assert_eq!(p.size(), b.size());
        let (p, _, _) = pullback(&i1, &i0).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn coproduct_with_empty_is_identity_shaped() {
        let g = FiniteGroup::cyclic(3).unwrap();
        let x = GSet::regular(g.clone());
        let e = GSet::empty(g);
        let (s, _, _) = coproduct(&x, &e).unwrap();
        assert_eq!(s, x);
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let c = GSet::regular(g);
        let id = GMap::identity(&c);
        let (p, pr1, _) = pullback(&id, &id).unwrap();
        assert_eq!(p.size(), c.size());
        assert!(pr1.is_bijective());
    }

    #[test]
    fn pullback_of_regular_over_point() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let x = GSet::regular(g);
        let pi = GMap::to_point(&x);
        let (p, _, _) = pullback(&pi, &pi).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(p.orbits().len(), 2);
    }

    #[test]
    fn orbit_decomposition_order() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let e = GSet::empty(g.clone());
        assert!(e.orbits().is_empty());
        let reg = GSet::regular(g.clone());
        assert_eq!(reg.orbits().len(), 1);
        assert!(reg.orbits()[0].0.is_transitive());

        let half = GSet::coset_space(&g, &[0, 2]);
        let (mix, _, _) = coproduct(&reg, &half).unwrap();
        let orbits = mix.orbits();
        assert_eq!(orbits.len(), 2);
        assert_eq!(orbits[0].0.size(), 4);
        assert_eq!(orbits[1].0.size(), 2);
        assert_eq!(orbits[0].1.apply(0), 0);
    }

    #[test]
    fn hom_sets() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let reg = GSet::regular(g.clone());
        let maps = hom_set(&reg, &reg).unwrap();
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[0].table(), &[0, 1]);
        assert_eq!(maps[1].table(), &[1, 0]);

        let e = GSet::empty(g.clone());
        assert!(hom_set(&reg, &e).unwrap().is_empty());
        // but there is exactly one map out of the empty set
        assert_eq!(hom_set(&e, &reg).unwrap().len(), 1);
    }

    #[test]
    fn hom_torsor_for_galois_target() {
        let g = FiniteGroup::cyclic(8).unwrap();
        let x = GSet::regular(g.clone());
        let y = GSet::coset_space(&g, &[0, 4]);
        let maps = hom_set(&x, &y).unwrap();
        assert_eq!(maps.len(), y.automorphisms().len());
    }

    #[test]
    fn automorphism_groups() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let pt = GSet::point(g.clone());
        assert_eq!(pt.automorphisms().len(), 1);

        let reg = GSet::regular(g.clone());
        let auts = reg.automorphisms();
        assert_eq!(auts.len(), 4);
        for a in &auts {
            for b in &auts {
                let c = a.then(b).unwrap();
                assert!(auts.contains(&c));
            }
            assert!(auts.contains(&a.inverse().unwrap()));
        }

        let half = GSet::coset_space(&g, &[0, 2]);
        assert_eq!(half.automorphisms().len(), 2);
    }

    #[test]
    fn galois_detection() {
        let c8 = FiniteGroup::cyclic(8).unwrap();
        for h in c8.subgroups() {
            let orbit = GSet::coset_space(&c8, &h);
            assert!(orbit.is_galois(), "every orbit of an abelian group is Galois");
        }
        let s3 = FiniteGroup::symmetric(3).unwrap();
        // stabilizer of a transposition: orbit of size 3 with trivial automorphisms
        let transposition = (1..6).find(|&i| s3.mul(i, i) == 0 && s3.inv(i) == i).unwrap();
        let orbit = GSet::coset_space(&s3, &[0, transposition]);
        assert_eq!(orbit.size(), 3);
        assert!(!orbit.is_galois());
        // non-atomic input: false, not an error
        let reg = GSet::regular(s3.clone());
        let (two, _, _) = coproduct(&reg, &reg).unwrap();
        assert!(!two.is_galois());
    }

    #[test]
    fn iso_search() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let x = GSet::regular(g.clone());
        assert_eq!(iso_between(&x, &x).unwrap().unwrap().table(), GMap::identity(&x).table());

        // same orbit types, different element order
        let half = GSet::coset_space(&g, &[0, 2]);
        let (a, _, _) = coproduct(&x, &half).unwrap();
        let (b, _, _) = coproduct(&half, &x).unwrap();
        let iso = iso_between(&a, &b).unwrap().expect("isomorphic");
        assert!(iso.is_bijective());

        let (c, _, _) = coproduct(&half, &half).unwrap();
        assert!(iso_between(&a, &c).unwrap().is_none());
    }

    #[test]
    fn galois_orbit_product_decomposes_into_aut_many_copies() {
        let g = FiniteGroup::cyclic(8).unwrap();
        let x = GSet::coset_space(&g, &[0, 4]); // size 4, Galois
        let (p, _, _) = product(&x, &x).unwrap();
        let orbits = p.orbits();
        assert_eq!(orbits.len(), x.automorphisms().len());
        for (orbit, _) in orbits {
            assert_eq!(orbit.size(), x.size());
        }
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let g2 = FiniteGroup::cyclic(2).unwrap();
        let g4 = FiniteGroup::cyclic(4).unwrap();
        let x = GSet::regular(g2);
        let y = GSet::regular(g4);
        assert!(product(&x, &y).is_err());
        assert!(coproduct(&x, &y).is_err());
        assert!(hom_set(&x, &y).is_err());
    }
}
