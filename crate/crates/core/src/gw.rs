//! Grothendieck-Witt classes of nondegenerate symmetric bilinear forms.
//!
//! Over a finite field of odd characteristic, GW is Z (+) Z/2: a class is
//! determined by its rank and by whether its discriminant is a square, so
//! we store `(rank, eps)` relative to the field's fixed non-square g,
//! writing alpha = <g> - <1>.  Over the reals a class is a pair of
//! multiplicities of <1> and <-1>; over the complexes just a rank.
//!
//! Pullback and transfer along extensions of finite fields have closed
//! forms (`jstar`/`jshriek`); `trace_transfer_oracle` recomputes transfers
//! from scratch by building the trace-form Gram matrix and classifying it,
//! and never calls `jshriek` - the suites insist both routes agree.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fq::{FieldEmbedding, FqElem, FqField};
use crate::group::{FiniteGroup, GMap, GSet, Group};
use crate::gysin::GysinFunctor;

/// A Grothendieck-Witt class over a finite field, the reals, or the
/// complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GwClass {
    /// rank . <1> + eps . alpha over F_{p^d}.
    Ff { p: u64, d: usize, rank: i64, eps: bool },
    /// plus . <1> + minus . <-1> over the reals.
    Real { plus: i64, minus: i64 },
    /// rank over the complexes.
    Cplx { rank: i64 },
}

impl GwClass {
    pub fn ff_zero(p: u64, d: usize) -> GwClass {
        GwClass::Ff { p, d, rank: 0, eps: false }
    }

    pub fn ff_one(p: u64, d: usize) -> GwClass {
        GwClass::Ff { p, d, rank: 1, eps: false }
    }

    /// The class <g> of the fixed non-square.
    pub fn ff_g(p: u64, d: usize) -> GwClass {
        GwClass::Ff { p, d, rank: 1, eps: true }
    }

    /// alpha = <g> - <1>, the element of order two.
    pub fn ff_alpha(p: u64, d: usize) -> GwClass {
        GwClass::Ff { p, d, rank: 0, eps: true }
    }

    pub fn rank(&self) -> i64 {
        match *self {
            GwClass::Ff { rank, .. } => rank,
            GwClass::Real { plus, minus } => plus + minus,
            GwClass::Cplx { rank } => rank,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            GwClass::Ff { rank, eps, .. } => rank == 0 && !eps,
            GwClass::Real { plus, minus } => plus == 0 && minus == 0,
            GwClass::Cplx { rank } => rank == 0,
        }
    }

    fn same_carrier(&self, other: &GwClass) -> bool {
        match (self, other) {
            (GwClass::Ff { p: p1, d: d1, .. }, GwClass::Ff { p: p2, d: d2, .. }) => p1 == p2 && d1 == d2,
            (GwClass::Real { .. }, GwClass::Real { .. }) => true,
            (GwClass::Cplx { .. }, GwClass::Cplx { .. }) => true,
            _ => false,
        }
    }

    pub fn try_add(&self, other: &GwClass) -> Result<GwClass, Error> {
        if !self.same_carrier(other) {
            return Err(Error::InvalidArgument("sum of GW classes over different rings".into()));
        }
        Ok(match (self, other) {
            (GwClass::Ff { p, d, rank: r1, eps: e1 }, GwClass::Ff { rank: r2, eps: e2, .. }) => {
                GwClass::Ff { p: *p, d: *d, rank: r1 + r2, eps: e1 ^ e2 }
            }
            (GwClass::Real { plus: a1, minus: b1 }, GwClass::Real { plus: a2, minus: b2 }) => {
                GwClass::Real { plus: a1 + a2, minus: b1 + b2 }
            }
            (GwClass::Cplx { rank: r1 }, GwClass::Cplx { rank: r2 }) => GwClass::Cplx { rank: r1 + r2 },
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> GwClass {
        self.scaled(-1)
    }

    pub fn scaled(&self, k: i64) -> GwClass {
        match *self {
            GwClass::Ff { p, d, rank, eps } => GwClass::Ff {
                p,
                d,
                rank: rank * k,
                eps: eps && k.rem_euclid(2) == 1,
            },
            GwClass::Real { plus, minus } => GwClass::Real { plus: plus * k, minus: minus * k },
            GwClass::Cplx { rank } => GwClass::Cplx { rank: rank * k },
        }
    }

    /// Ring multiplication.  Over a finite field
    /// (n, e)(m, f) = (nm, nf + me mod 2), forced by alpha^2 = -2 alpha = 0;
    /// over the reals <-1>^2 = <1>.
    pub fn try_mul(&self, other: &GwClass) -> Result<GwClass, Error> {
        if !self.same_carrier(other) {
            return Err(Error::InvalidArgument("product of GW classes over different rings".into()));
        }
        Ok(match (self, other) {
            (GwClass::Ff { p, d, rank: n, eps: e }, GwClass::Ff { rank: m, eps: f, .. }) => {
                let ei = i64::from(*e);
                let fi = i64::from(*f);
                GwClass::Ff {
                    p: *p,
                    d: *d,
                    rank: n * m,
                    eps: (n * fi + m * ei).rem_euclid(2) == 1,
                }
            }
            (GwClass::Real { plus: a, minus: b }, GwClass::Real { plus: c, minus: d }) => {
                GwClass::Real { plus: a * c + b * d, minus: a * d + b * c }
            }
            (GwClass::Cplx { rank: n }, GwClass::Cplx { rank: m }) => GwClass::Cplx { rank: n * m },
            _ => unreachable!(),
        })
    }

    /// Pullback along the degree-e extension: <1> is fixed and alpha
    /// survives exactly when e is odd.
    pub fn jstar(&self, e: usize) -> Result<GwClass, Error> {
        if e < 1 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        match *self {
            GwClass::Ff { p, d, rank, eps } => Ok(GwClass::Ff {
                p,
                d: d * e,
                rank,
                eps: eps && e % 2 == 1,
            }),
            _ => Err(Error::InvalidArgument("jstar is defined for finite-field classes".into())),
        }
    }

    /// Transfer along the degree-e extension: additive extension of
    /// <1> -> e<1> (+ alpha when e is even) and alpha -> alpha, i.e.
    /// (n, eps) -> (ne, n.[e even] + eps mod 2).
    pub fn jshriek(&self, e: usize) -> Result<GwClass, Error> {
        if e < 1 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        match *self {
            GwClass::Ff { p, d, rank, eps } => {
                if d % e != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "transfer degree {e} does not divide the field degree {d}"
                    )));
                }
                let flips = if e % 2 == 0 { rank.rem_euclid(2) == 1 } else { false };
                Ok(GwClass::Ff { p, d: d / e, rank: rank * e as i64, eps: flips ^ eps })
            }
            _ => Err(Error::InvalidArgument("jshriek is defined for finite-field classes".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match *self {
            GwClass::Ff { p, d, rank, eps } => {
                json!({"variant": "ff", "rank": rank, "eps": u8::from(eps), "p": p, "d": d})
            }
            GwClass::Real { plus, minus } => json!({"variant": "r", "plus": plus, "minus": minus}),
            GwClass::Cplx { rank } => json!({"variant": "c", "rank": rank}),
        }
    }

    pub fn from_json(v: &Value) -> Result<GwClass, Error> {
        let variant = v
            .get("variant")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidArgument("GW class needs a `variant`".into()))?;
        let int = |k: &str| {
            v.get(k)
                .and_then(Value::as_i64)
                .ok_or_else(|| Error::InvalidArgument(format!("GW class needs integer `{k}`")))
        };
        match variant {
            "ff" => Ok(GwClass::Ff {
                p: int("p")? as u64,
                d: int("d")? as usize,
                rank: int("rank")?,
                eps: int("eps")? % 2 == 1,
            }),
            "r" => Ok(GwClass::Real { plus: int("plus")?, minus: int("minus")? }),
            "c" => Ok(GwClass::Cplx { rank: int("rank")? }),
            other => Err(Error::InvalidArgument(format!("unknown GW variant `{other}`"))),
        }
    }

    pub fn display(&self, ascii: bool) -> String {
        let (one, alpha, minus_one) = if ascii {
            ("<1>", "alpha", "<-1>")
        } else {
            ("⟨1⟩", "α", "⟨−1⟩")
        };
        match *self {
            GwClass::Ff { rank, eps, .. } => match (rank, eps) {
                (0, false) => "0".into(),
                (0, true) => alpha.into(),
                (1, false) => one.into(),
                (r, false) => format!("{r}{one}"),
                (1, true) => format!("{one}+{alpha}"),
                (r, true) => format!("{r}{one}+{alpha}"),
            },
            GwClass::Real { plus, minus } => match (plus, minus) {
                (0, 0) => "0".into(),
                (p, 0) => format!("{}{one}", coeff_str(p)),
                (0, m) => format!("{}{minus_one}", coeff_str(m)),
                (p, m) => format!("{}{one}+{}{minus_one}", coeff_str(p), coeff_str(m)),
            },
            GwClass::Cplx { rank } => format!("{rank}"),
        }
    }
}

fn coeff_str(c: i64) -> String {
    if c == 1 {
        String::new()
    } else {
        format!("{c}")
    }
}

/// A symmetric Gram matrix over a finite field.
#[derive(Clone, Debug)]
pub struct QuadraticSpace {
    field: Arc<FqField>,
    gram: Vec<Vec<FqElem>>,
}

impl QuadraticSpace {
    pub fn new(field: Arc<FqField>, gram: Vec<Vec<FqElem>>) -> Result<QuadraticSpace, Error> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::InvalidArgument("Gram matrix must be square".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidArgument("Gram matrix must be symmetric".into()));
                }
            }
        }
        Ok(QuadraticSpace { field, gram })
    }

    pub fn diagonal(field: Arc<FqField>, entries: &[FqElem]) -> QuadraticSpace {
        let n = entries.len();
        let gram = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { field.zero() })
                    .collect()
            })
            .collect();
        QuadraticSpace { field, gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> FqElem {
        let f = &self.field;
        let n = self.dim();
        let mut m = self.gram.clone();
        let mut det = f.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !f.is_zero(&m[r][col])) else {
                return f.zero();
            };
            if pivot != col {
                m.swap(col, pivot);
                det = f.neg(&det);
            }
            det = f.mul(&det, &m[col][col]);
            let inv = f.inv(&m[col][col]).expect("nonzero pivot");
            for r in col + 1..n {
                if f.is_zero(&m[r][col]) {
                    continue;
                }
                let factor = f.mul(&m[r][col], &inv);
                for c in col..n {
                    let t = f.mul(&factor, &m[col][c]);
                    m[r][c] = f.sub(&m[r][c], &t);
                }
            }
        }
        det
    }

    /// Rank and discriminant class: `(n, eps)` with eps set when the
    /// determinant is a non-square.  Errors on degenerate input.
    pub fn classify(&self) -> Result<GwClass, Error> {
        let det = self.det();
        if self.dim() > 0 && self.field.is_zero(&det) {
            return Err(Error::Degenerate("zero determinant".into()));
        }
        Ok(GwClass::Ff {
            p: self.field.p(),
            d: self.field.degree(),
            rank: self.dim() as i64,
            eps: self.dim() > 0 && !self.field.is_square(&det),
        })
    }

    /// Diagonalize by congruence (symmetric row/column operations); a
    /// cross-check path for `classify`.
    pub fn diagonalize(&self) -> Result<Vec<FqElem>, Error> {
        let f = self.field.clone();
        let n = self.dim();
        let mut m = self.gram.clone();
        let mut out = Vec::with_capacity(n);
        let mut rows: Vec<usize> = (0..n).collect();
        while let Some(&_first) = rows.first() {
            let k = rows.len();
            let idx = rows.clone();
            // find a nonzero diagonal entry, or synthesize one
            let diag_pos = idx.iter().position(|&i| !f.is_zero(&m[i][i]));
            let pivot = match diag_pos {
                Some(p) => idx[p],
                None => {
                    // all diagonal entries vanish; if some off-diagonal
                    // entry b_{ij} is nonzero, add row/col j into i
                    let mut found = None;
                    'outer: for (ai, &i) in idx.iter().enumerate() {
                        for &j in idx.iter().skip(ai + 1) {
                            if !f.is_zero(&m[i][j]) {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = found else {
                        if k > 0 {
                            return Err(Error::Degenerate("zero block while diagonalizing".into()));
                        }
                        break;
                    };
                    for c in 0..n {
                        let t = f.add(&m[i][c], &m[j][c]);
                        m[i][c] = t;
                    }
                    for r in 0..n {
                        let t = f.add(&m[r][i], &m[r][j]);
                        m[r][i] = t;
                    }
                    i
                }
            };
            let d = m[pivot][pivot].clone();
            if f.is_zero(&d) {
                return Err(Error::Degenerate("zero pivot while diagonalizing".into()));
            }
            let dinv = f.inv(&d).unwrap();
            for &r in idx.iter().filter(|&&r| r != pivot) {
                if f.is_zero(&m[r][pivot]) {
                    continue;
                }
                let factor = f.mul(&m[r][pivot], &dinv);
                for c in 0..n {
                    let t = f.mul(&factor, &m[pivot][c]);
                    m[r][c] = f.sub(&m[r][c], &t);
                }
                for rr in 0..n {
                    let t = f.mul(&factor, &m[rr][pivot]);
                    m[rr][r] = f.sub(&m[rr][r], &t);
                }
            }
            out.push(d);
            rows = idx.into_iter().filter(|&r| r != pivot).collect();
        }
        Ok(out)
    }
}

/// Realize a finite-field class of non-negative rank as diagonal entries
/// `1, ..., 1[, g]`.
pub fn realize_diagonal(field: &Arc<FqField>, class: &GwClass) -> Result<Vec<FqElem>, Error> {
    match class {
        GwClass::Ff { p, d, rank, eps } => {
            if *p != field.p() || *d != field.degree() {
                return Err(Error::InvalidArgument("class does not live over this field".into()));
            }
            if *rank < 0 || (*rank == 0 && *eps) {
                return Err(Error::InvalidArgument(
                    "only non-negative-rank classes with matching discriminant are realizable".into(),
                ));
            }
            let mut entries = vec![field.one(); *rank as usize];
            if *eps {
                let last = entries.len() - 1;
                entries[last] = field.nonsquare();
            }
            Ok(entries)
        }
        _ => Err(Error::InvalidArgument("only finite-field classes are realizable here".into())),
    }
}

/// Brute-force Scharlau transfer: expand each rank-one form <u> over the
/// big field into a Gram matrix over the small field using the basis
/// 1, x, ..., x^{m-1} and the relative trace, then classify.  This path is
/// independent of `jshriek` by construction.
pub fn trace_transfer_oracle(
    sub: &Arc<FqField>,
    sup: &Arc<FqField>,
    diag: &[FqElem],
) -> Result<GwClass, Error> {
    let emb = FieldEmbedding::new(sub, sup)?;
    let m = sup.degree() / sub.degree();
    let x = sup.gen();
    let mut xpow = Vec::with_capacity(2 * m);
    let mut acc = sup.one();
    for _ in 0..(2 * m).max(1) {
        xpow.push(acc.clone());
        acc = sup.mul(&acc, &x);
    }
    let n = diag.len() * m;
    let mut gram = vec![vec![sub.zero(); n]; n];
    for (b, u) in diag.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                let prod = sup.mul(u, &xpow[i + j]);
                gram[b * m + i][b * m + j] = emb.trace(&prod);
            }
        }
    }
    QuadraticSpace::new(sub.clone(), gram)?.classify()
}

/// chi(F_{q^e}) = e<1> + eps_e alpha with eps_e set for even e; this is
/// the transfer of 1 along the degree-e extension.
pub fn euler_characteristic(p: u64, e: usize) -> Result<GwClass, Error> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidArgument("odd characteristic required".into()));
    }
    GwClass::Ff { p, d: e, rank: 1, eps: false }.jshriek(e)
}

/// One GW class per orbit of the carrier G-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwElem {
    pub components: Vec<GwClass>,
}

impl GwElem {
    pub fn to_json(&self) -> Value {
        Value::Array(self.components.iter().map(|c| c.to_json()).collect())
    }

    pub fn display(&self, ascii: bool) -> String {
        if self.components.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.components.iter().map(|c| c.display(ascii)).collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join(", "))
        }
    }
}

/// Orbit bookkeeping shared by the two GW instances: for each orbit its
/// size, and for each point the index of its orbit.
fn orbit_profile(x: &GSet) -> (Vec<usize>, Vec<usize>) {
    let orbits = x.orbits();
    let mut sizes = Vec::with_capacity(orbits.len());
    let mut orbit_of = vec![usize::MAX; x.size()];
    for (i, (orbit, incl)) in orbits.iter().enumerate() {
        sizes.push(orbit.size());
        for k in 0..orbit.size() {
            orbit_of[incl.apply(k)] = i;
        }
    }
    (sizes, orbit_of)
}

/// For each orbit of f's source: (source orbit size, target orbit index,
/// relative degree).
fn map_profile(f: &GMap) -> Vec<(usize, usize, usize)> {
    let (src_sizes, _) = orbit_profile(f.src());
    let (dst_sizes, dst_orbit_of) = orbit_profile(f.dst());
    let src_orbits = f.src().orbits();
    src_orbits
        .iter()
        .enumerate()
        .map(|(i, (_, incl))| {
            let j = dst_orbit_of[f.apply(incl.apply(0))];
            let e = src_sizes[i] / dst_sizes[j];
            debug_assert_eq!(src_sizes[i] % dst_sizes[j], 0);
            (src_sizes[i], j, e)
        })
        .collect()
}

/// The Grothendieck-Witt functor on Z/n-sets with the Galois dictionary:
/// an orbit of size d stands for F_{p^d}, a map of orbits for the field
/// extension of the matching relative degree.
#[derive(Clone, Debug)]
pub struct GwCyclicFunctor {
    group: Group,
    p: u64,
}

impl GwCyclicFunctor {
    pub fn new(p: u64, n: usize) -> Result<GwCyclicFunctor, Error> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::InvalidArgument("odd prime characteristic required".into()));
        }
        Ok(GwCyclicFunctor { group: FiniteGroup::cyclic(n)?, p })
    }

    pub fn over_group(p: u64, group: &Group) -> Result<GwCyclicFunctor, Error> {
        if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
            return Err(Error::InvalidArgument("odd prime characteristic required".into()));
        }
        // the dictionary needs a cyclic Galois group
        let n = group.order();
        let cyclic = FiniteGroup::cyclic(n)?;
        if **group != *cyclic {
            return Err(Error::InvalidArgument("the GW instance needs a cyclic group".into()));
        }
        Ok(GwCyclicFunctor { group: group.clone(), p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl GysinFunctor for GwCyclicFunctor {
    type Elem = GwElem;

    fn name(&self) -> String {
        format!("gw:{}", self.p)
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn zero(&self, x: &GSet) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem { components: sizes.into_iter().map(|d| GwClass::ff_zero(self.p, d)).collect() }
    }

    fn one(&self, x: &GSet) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem { components: sizes.into_iter().map(|d| GwClass::ff_one(self.p, d)).collect() }
    }

    fn add(&self, _x: &GSet, a: &GwElem, b: &GwElem) -> GwElem {
        GwElem {
            components: a
                .components
                .iter()
                .zip(&b.components)
                .map(|(u, v)| u.try_add(v).expect("components over matching fields"))
                .collect(),
        }
    }

    fn neg(&self, _x: &GSet, a: &GwElem) -> GwElem {
        GwElem { components: a.components.iter().map(GwClass::neg).collect() }
    }

    fn mul(&self, _x: &GSet, a: &GwElem, b: &GwElem) -> GwElem {
        GwElem {
            components: a
                .components
                .iter()
                .zip(&b.components)
                .map(|(u, v)| u.try_mul(v).expect("components over matching fields"))
                .collect(),
        }
    }

    fn scale(&self, _x: &GSet, a: &GwElem, k: i64) -> GwElem {
        GwElem { components: a.components.iter().map(|c| c.scaled(k)).collect() }
    }

    fn pullback(&self, f: &GMap, b: &GwElem) -> GwElem {
        let profile = map_profile(f);
        GwElem {
            components: profile
                .into_iter()
                .map(|(_, j, e)| b.components[j].jstar(e).expect("relative degree"))
                .collect(),
        }
    }

    fn pushforward(&self, f: &GMap, a: &GwElem) -> GwElem {
        let mut out = self.zero(f.dst());
        for (i, (_, j, e)) in map_profile(f).into_iter().enumerate() {
            let t = a.components[i].jshriek(e).expect("relative degree");
            out.components[j] = out.components[j].try_add(&t).expect("same field");
        }
        out
    }

    fn random_elem(&self, x: &GSet, rng: &mut ChaCha8Rng) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem {
            components: sizes
                .into_iter()
                .map(|d| GwClass::Ff { p: self.p, d, rank: rng.gen_range(-4..=4), eps: rng.gen_bool(0.5) })
                .collect(),
        }
    }

    fn elem_to_json(&self, _x: &GSet, a: &GwElem) -> Value {
        a.to_json()
    }

    fn elem_from_json(&self, x: &GSet, v: &Value) -> Result<GwElem, Error> {
        gw_elem_from_json(x, v, |d| GwClass::ff_zero(self.p, d))
    }

    fn elem_display(&self, _x: &GSet, a: &GwElem, ascii: bool) -> String {
        a.display(ascii)
    }
}

fn gw_elem_from_json(
    x: &GSet,
    v: &Value,
    zero_of: impl Fn(usize) -> GwClass,
) -> Result<GwElem, Error> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::InvalidArgument("GW element must be an array of classes".into()))?;
    let (sizes, _) = orbit_profile(x);
    if arr.len() != sizes.len() {
        return Err(Error::InvalidArgument(format!(
            "GW element needs one component per orbit ({} orbits, got {})",
            sizes.len(),
            arr.len()
        )));
    }
    let components = arr
        .iter()
        .zip(&sizes)
        .map(|(cv, &d)| {
            let c = GwClass::from_json(cv)?;
            let expected = zero_of(d);
            if !c.same_carrier(&expected) {
                return Err(Error::InvalidArgument(format!(
                    "component does not match its orbit of size {d}"
                )));
            }
            Ok(c)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(GwElem { components })
}

/// The GW instance over the reals, on Z/2-sets: a free orbit stands for
/// the complex points (GW = Z), a fixed point for the real points
/// (GW = Z<1> + Z<-1>).  The transfer along the free orbit's projection
/// sends 1 to <1> + <-1>.
#[derive(Clone, Debug)]
pub struct GwRealComplexFunctor {
    group: Group,
}

impl GwRealComplexFunctor {
    pub fn new() -> GwRealComplexFunctor {
        GwRealComplexFunctor { group: FiniteGroup::cyclic(2).expect("order 2") }
    }

    fn class_of_orbit(d: usize) -> GwClass {
        if d == 1 {
            GwClass::Real { plus: 0, minus: 0 }
        } else {
            GwClass::Cplx { rank: 0 }
        }
    }
}

impl Default for GwRealComplexFunctor {
    fn default() -> Self {
        Self::new()
    }
}

impl GysinFunctor for GwRealComplexFunctor {
    type Elem = GwElem;

    fn name(&self) -> String {
        "real".into()
    }

    fn group(&self) -> &Group {
        &self.group
    }

    fn zero(&self, x: &GSet) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem { components: sizes.into_iter().map(Self::class_of_orbit).collect() }
    }

    fn one(&self, x: &GSet) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem {
            components: sizes
                .into_iter()
                .map(|d| {
                    if d == 1 {
                        GwClass::Real { plus: 1, minus: 0 }
                    } else {
                        GwClass::Cplx { rank: 1 }
                    }
                })
                .collect(),
        }
    }

    fn add(&self, _x: &GSet, a: &GwElem, b: &GwElem) -> GwElem {
        GwElem {
            components: a
                .components
                .iter()
                .zip(&b.components)
                .map(|(u, v)| u.try_add(v).expect("components over matching rings"))
                .collect(),
        }
    }

    fn neg(&self, _x: &GSet, a: &GwElem) -> GwElem {
        GwElem { components: a.components.iter().map(GwClass::neg).collect() }
    }

    fn mul(&self, _x: &GSet, a: &GwElem, b: &GwElem) -> GwElem {
        GwElem {
            components: a
                .components
                .iter()
                .zip(&b.components)
                .map(|(u, v)| u.try_mul(v).expect("components over matching rings"))
                .collect(),
        }
    }

    fn pullback(&self, f: &GMap, b: &GwElem) -> GwElem {
        GwElem {
            components: map_profile(f)
                .into_iter()
                .map(|(src_size, j, _)| {
                    let target = &b.components[j];
                    match (src_size, target) {
                        // restriction of scalars is trivial on matching orbits
                        (1, GwClass::Real { .. }) | (2, GwClass::Cplx { .. }) => target.clone(),
                        // complexification only remembers the rank
                        (2, GwClass::Real { plus, minus }) => GwClass::Cplx { rank: plus + minus },
                        _ => unreachable!("no equivariant map from a fixed point to a free orbit"),
                    }
                })
                .collect(),
        }
    }

    fn pushforward(&self, f: &GMap, a: &GwElem) -> GwElem {
        let mut out = self.zero(f.dst());
        for (i, (src_size, j, e)) in map_profile(f).into_iter().enumerate() {
            let t = match (src_size, e, &a.components[i]) {
                (1, _, c @ GwClass::Real { .. }) => c.clone(),
                (2, 1, c @ GwClass::Cplx { .. }) => c.clone(),
                // the Scharlau transfer of the complex points over the reals
                (2, 2, GwClass::Cplx { rank }) => GwClass::Real { plus: *rank, minus: *rank },
                _ => unreachable!("no equivariant map from a fixed point to a free orbit"),
            };
            out.components[j] = out.components[j].try_add(&t).expect("same ring");
        }
        out
    }

    fn random_elem(&self, x: &GSet, rng: &mut ChaCha8Rng) -> GwElem {
        let (sizes, _) = orbit_profile(x);
        GwElem {
            components: sizes
                .into_iter()
                .map(|d| {
                    if d == 1 {
                        GwClass::Real { plus: rng.gen_range(-3..=3), minus: rng.gen_range(-3..=3) }
                    } else {
                        GwClass::Cplx { rank: rng.gen_range(-4..=4) }
                    }
                })
                .collect(),
        }
    }

    fn elem_to_json(&self, _x: &GSet, a: &GwElem) -> Value {
        a.to_json()
    }

    fn elem_from_json(&self, x: &GSet, v: &Value) -> Result<GwElem, Error> {
        gw_elem_from_json(x, v, Self::class_of_orbit)
    }

    fn elem_display(&self, _x: &GSet, a: &GwElem, ascii: bool) -> String {
        a.display(ascii)
    }
}
