//! Exact arithmetic in F_{p^d} for odd p, as polynomials modulo a monic
//! irreducible, plus subfield embeddings and the relative trace.
//!
//! The modulus is always the lexicographically least monic irreducible of
//! the requested degree (coefficients compared low degree first), and the
//! distinguished non-square is the least element in enumeration order, so
//! every construction here is deterministic.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// F_{p^d} with a fixed modulus and a fixed choice of non-square.
#[derive(Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    d: usize,
    /// Monic modulus, length d+1, low degree first.
    modulus: Vec<u64>,
    nonsquare: FqElem,
}

/// An element of F_{p^d}: `d` coefficients over Z/p, low degree first.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.p, self.d)
    }
}

fn is_prime(n: u64) -> bool {
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

impl FqField {
    /// Build F_{p^d}.  Rejects p = 2 (the whole engine assumes odd
    /// characteristic) and composite p.
    pub fn new(p: u64, d: usize) -> Result<Arc<FqField>, Error> {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidArgument(format!(
                "base characteristic must be an odd prime, got {p}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
        }
        let modulus = least_irreducible(p, d);
        let mut field = FqField {
            p,
            d,
            modulus,
            nonsquare: FqElem { coeffs: vec![0; d] },
        };
        let ns = field
            .elements()
            .find(|e| !field.is_zero(e) && !field.is_square(e))
            .expect("odd q: half the units are non-squares");
        field.nonsquare = ns;
        Ok(Arc::new(field))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// The field size p^d.
    pub fn q(&self) -> u64 {
        self.p.pow(self.d as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The fixed non-square g.
    pub fn nonsquare(&self) -> FqElem {
        self.nonsquare.clone()
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coeffs: vec![0; self.d] }
    }

    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }

    /// The residue of an integer in the prime field.
    pub fn from_int(&self, n: u64) -> FqElem {
        let mut coeffs = vec![0; self.d];
        coeffs[0] = n % self.p;
        FqElem { coeffs }
    }

    /// The element whose base-p digit vector is `v` (enumeration order).
    pub fn from_index(&self, mut v: u64) -> FqElem {
        let mut coeffs = vec![0; self.d];
        for c in coeffs.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        FqElem { coeffs }
    }

    /// Position of an element in enumeration order.
    pub fn to_index(&self, a: &FqElem) -> u64 {
        let mut v = 0;
        for &c in a.coeffs.iter().rev() {
            v = v * self.p + c;
        }
        v
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(|v| self.from_index(v))
    }

    /// The polynomial generator x (zero in degree 1, where x = 0).
    pub fn gen(&self) -> FqElem {
        if self.d == 1 {
            return self.zero();
        }
        let mut coeffs = vec![0; self.d];
        coeffs[1] = 1;
        FqElem { coeffs }
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + y) % self.p).collect(),
        }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| (x + self.p - y) % self.p).collect(),
        }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem { coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect() }
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut raw = vec![0u64; 2 * self.d];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                raw[i + j] = (raw[i + j] + x * y) % self.p;
            }
        }
        self.reduce(raw)
    }

    fn reduce(&self, mut raw: Vec<u64>) -> FqElem {
        // modulus is monic: x^d = -(lower part)
        for i in (self.d..raw.len()).rev() {
            let c = raw[i];
            if c == 0 {
                continue;
            }
            raw[i] = 0;
            for k in 0..self.d {
                let m = self.modulus[k];
                if m != 0 {
                    let idx = i - self.d + k;
                    raw[idx] = (raw[idx] + c * (self.p - m)) % self.p;
                }
            }
        }
        raw.truncate(self.d);
        FqElem { coeffs: raw }
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem, Error> {
        if self.is_zero(a) {
            return Err(Error::InvalidArgument("inverse of zero".into()));
        }
        Ok(self.pow(a, self.q() - 2))
    }

    /// Euler's criterion: x is a square iff x = 0 or x^((q-1)/2) = 1.
    pub fn is_square(&self, a: &FqElem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        self.pow(a, (self.q() - 1) / 2) == self.one()
    }

    /// Evaluate a polynomial with coefficients in this field's prime field.
    pub fn eval_prime_poly(&self, poly: &[u64], at: &FqElem) -> FqElem {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, at);
            acc = self.add(&acc, &self.from_int(c));
        }
        acc
    }
}

/// Lexicographically least monic irreducible of degree d over F_p, the
/// coefficient tuple (c_0, ..., c_{d-1}) compared as integers left to right.
/// Irreducibility by trial division against every monic polynomial of
/// degree at most d/2.
fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    if d == 1 {
        return vec![0, 1]; // x itself
    }
    let divisors = monic_up_to(p, d / 2);
    let mut coeffs = vec![0u64; d];
    loop {
        let mut candidate = coeffs.clone();
        candidate.push(1);
        if candidate[0] != 0 && divisors.iter().all(|q| !divides(p, q, &candidate)) {
            return candidate;
        }
        // next tuple in (c_0, c_1, ...) lexicographic order
        let mut k = d;
        loop {
            if k == 0 {
                unreachable!("an irreducible of every degree exists");
            }
            k -= 1;
            coeffs[k] += 1;
            if coeffs[k] < p {
                break;
            }
            coeffs[k] = 0;
        }
    }
}

/// All monic polynomials of degree 1..=max, low degree first.
fn monic_up_to(p: u64, max: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for deg in 1..=max {
        let count = p.pow(deg as u32);
        for v in 0..count {
            let mut poly = Vec::with_capacity(deg + 1);
            let mut t = v;
            for _ in 0..deg {
                poly.push(t % p);
                t /= p;
            }
            poly.push(1);
            out.push(poly);
        }
    }
    out
}

/// Does the monic polynomial q divide a (over F_p)?
fn divides(p: u64, q: &[u64], a: &[u64]) -> bool {
    let mut rem: Vec<u64> = a.to_vec();
    let dq = q.len() - 1;
    while rem.len() > dq {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dq;
        if lead != 0 {
            for (k, &qc) in q.iter().enumerate() {
                rem[shift + k] = (rem[shift + k] + qc * (p - lead)) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// Gaussian elimination over F_p: solve M x = rhs where M is given in
/// column-major form.  Returns None when inconsistent.
pub(crate) fn solve_fp(p: u64, cols: &[Vec<u64>], rhs: &[u64]) -> Option<Vec<u64>> {
    let rows = rhs.len();
    let ncols = cols.len();
    // augmented row-major matrix
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let inv_mod = |a: u64| -> u64 {
        // Fermat in the prime field
        let mut acc = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let s = inv_mod(m[rank][col]);
        for k in col..=ncols {
            m[rank][k] = m[rank][k] * s % p;
        }
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for k in col..=ncols {
                    m[r][k] = (m[r][k] + m[rank][k] * (p - f)) % p;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    for r in rank..rows {
        if m[r][ncols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            x[col] = m[pivot_of_col[col]][ncols];
        }
    }
    Some(x)
}

/// A field homomorphism F_{p^a} -> F_{p^b} (a | b), determined by where the
/// generator of the subfield goes: the least root of the subfield modulus.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    sub: Arc<FqField>,
    sup: Arc<FqField>,
    gen_image: FqElem,
    /// Powers 1, r, r^2, ..., r^{d_sub - 1} of the generator image.
    gen_powers: Vec<FqElem>,
}

impl FieldEmbedding {
    pub fn new(sub: &Arc<FqField>, sup: &Arc<FqField>) -> Result<FieldEmbedding, Error> {
        if sub.p() != sup.p() {
            return Err(Error::InvalidArgument("embedding requires equal characteristic".into()));
        }
        if sup.degree() % sub.degree() != 0 {
            return Err(Error::InvalidArgument(format!(
                "no embedding: degree {} does not divide {}",
                sub.degree(),
                sup.degree()
            )));
        }
        let gen_image = sup
            .elements()
            .find(|e| sup.is_zero(&sup.eval_prime_poly(sub.modulus(), e)))
            .expect("the subfield modulus splits in the big field");
        let mut gen_powers = Vec::with_capacity(sub.degree());
        let mut acc = sup.one();
        for _ in 0..sub.degree() {
            gen_powers.push(acc.clone());
            acc = sup.mul(&acc, &gen_image);
        }
        Ok(FieldEmbedding { sub: sub.clone(), sup: sup.clone(), gen_image, gen_powers })
    }

    pub fn sub(&self) -> &Arc<FqField> {
        &self.sub
    }

    pub fn sup(&self) -> &Arc<FqField> {
        &self.sup
    }

    pub fn gen_image(&self) -> &FqElem {
        &self.gen_image
    }

    pub fn apply(&self, a: &FqElem) -> FqElem {
        let mut acc = self.sup.zero();
        for (c, pw) in a.coeffs.iter().zip(&self.gen_powers) {
            if *c != 0 {
                acc = self.sup.add(&acc, &self.sup.mul(&self.sup.from_int(*c), pw));
            }
        }
        acc
    }

    /// Inverse image, when the element lies in the embedded subfield.
    pub fn preimage(&self, z: &FqElem) -> Option<FqElem> {
        let cols: Vec<Vec<u64>> = self.gen_powers.iter().map(|e| e.coeffs.clone()).collect();
        solve_fp(self.sub.p(), &cols, &z.coeffs).map(|coeffs| FqElem { coeffs })
    }

    /// The relative trace sup -> sub, computed two independent ways (sum of
    /// Frobenius iterates, and the trace of the multiplication matrix); the
    /// two must agree.
    pub fn trace(&self, z: &FqElem) -> FqElem {
        let m = self.sup.degree() / self.sub.degree();
        let q_sub = self.sub.q();
        // route 1: z + z^{q} + z^{q^2} + ...
        let mut acc = self.sup.zero();
        let mut term = z.clone();
        for _ in 0..m {
            acc = self.sup.add(&acc, &term);
            term = self.sup.pow(&term, q_sub);
        }
        let route1 = self
            .preimage(&acc)
            .expect("the trace lands in the subfield");
        let route2 = self.trace_by_matrix(z);
        assert_eq!(route1, route2, "the two trace computations must agree");
        route1
    }

    /// Trace of multiplication-by-z on the big field viewed as a free
    /// module over the subfield with basis 1, x, ..., x^{m-1}.
    fn trace_by_matrix(&self, z: &FqElem) -> FqElem {
        let m = self.sup.degree() / self.sub.degree();
        let ds = self.sub.degree();
        // F_p basis of the big field: r^t * x^j for t < d_sub, j < m.
        let x = self.sup.gen();
        let mut xpow = Vec::with_capacity(m);
        let mut acc = self.sup.one();
        for _ in 0..m {
            xpow.push(acc.clone());
            acc = self.sup.mul(&acc, &x);
        }
        let mut basis_cols = Vec::with_capacity(m * ds);
        for xp in &xpow {
            for rp in &self.gen_powers {
                basis_cols.push(self.sup.mul(xp, rp).coeffs.clone());
            }
        }
        let mut diag_sum = self.sub.zero();
        for (i, xp) in xpow.iter().enumerate() {
            let zi = self.sup.mul(z, xp);
            let lambda = solve_fp(self.sup.p(), &basis_cols, &zi.coeffs)
                .expect("r^t x^j is an F_p basis");
            // coefficient of x^i is the subfield element with digits
            // lambda[i*ds .. (i+1)*ds]
            let c = FqElem { coeffs: lambda[i * ds..(i + 1) * ds].to_vec() };
            diag_sum = self.sub.add(&diag_sum, &c);
        }
        diag_sum
    }
}
