//! The Gysin-functor interface: a contravariant ring-valued functor on
//! finite G-sets together with covariant transfer maps, subject to four
//! axioms (zero, sums, push-product, push-pull).  Also the universal map
//! out of the Burnside functor, and a randomized verifier that exercises
//! the axioms on concrete instances.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::burnside::BurnsideElem;
use crate::error::Error;
use crate::group::{coproduct, product, pullback, GMap, GSet, Group};
use crate::sample::Sampler;

/// A Gysin functor on finite G-sets for a fixed group.
///
/// `Elem` is an opaque element of the ring E(X); all operations take the
/// carrier object explicitly.  Implementations must be observably pure:
/// elements are values and equality is decidable.
///
/// Callers are responsible for only combining elements that live over the
/// same object; the provided instances panic on violations of that
/// contract (the checked entry points on the concrete element types return
/// errors instead).
pub trait GysinFunctor {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn name(&self) -> String;
    fn group(&self) -> &Group;

    fn zero(&self, x: &GSet) -> Self::Elem;
    fn one(&self, x: &GSet) -> Self::Elem;
    fn add(&self, x: &GSet, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &GSet, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &GSet, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// The contravariant (ring) map along f, from E(f.dst) to E(f.src).
    fn pullback(&self, f: &GMap, b: &Self::Elem) -> Self::Elem;

    /// The covariant (additive) transfer along f, from E(f.src) to E(f.dst).
    fn pushforward(&self, f: &GMap, a: &Self::Elem) -> Self::Elem;

    fn random_elem(&self, x: &GSet, rng: &mut ChaCha8Rng) -> Self::Elem;

    fn elem_to_json(&self, x: &GSet, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, x: &GSet, v: &Value) -> Result<Self::Elem, Error>;

    /// Human-readable element rendering; `ascii` selects plain fallbacks.
    fn elem_display(&self, x: &GSet, a: &Self::Elem, ascii: bool) -> String;

    fn scale(&self, x: &GSet, a: &Self::Elem, k: i64) -> Self::Elem {
        let (mut k, base) = if k < 0 { ((-k) as u64, self.neg(x, a)) } else { (k as u64, a.clone()) };
        let mut acc = self.zero(x);
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(x, &acc, &pow);
            }
            pow = self.add(x, &pow, &pow);
            k >>= 1;
        }
        acc
    }

    fn sub(&self, x: &GSet, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let nb = self.neg(x, b);
        self.add(x, a, &nb)
    }
}

/// The external product a (x) b = pi_X^*(a) . pi_Y^*(b) in E(X x Y).
pub fn external_product<E: GysinFunctor>(
    e: &E,
    x: &GSet,
    y: &GSet,
    a: &E::Elem,
    b: &E::Elem,
) -> (GSet, E::Elem) {
    let (p, p1, p2) = product(x, y).expect("same group");
    let elem = e.mul(&p, &e.pullback(&p1, a), &e.pullback(&p2, b));
    (p, elem)
}

/// The universal map out of the Burnside functor: linear extension of
/// `[f: A -> X] -> f_!(1)`.  It is a ring map commuting with pullback and
/// pushforward; the test suites check this on random instances.
pub fn chi<E: GysinFunctor>(e: &E, a: &BurnsideElem) -> E::Elem {
    let base = a.base();
    let mut acc = e.zero(base);
    for (key, coeff) in a.terms() {
        let f = a.key_to_map(key);
        let term = e.pushforward(&f, &e.one(f.src()));
        let scaled = e.scale(base, &term, *coeff);
        acc = e.add(base, &acc, &scaled);
    }
    acc
}

/// Instance counts and seed for the randomized axiom verifier.
#[derive(Clone, Debug)]
pub struct VerifyBudget {
    pub iters: usize,
    pub max_orbits: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget { iters: 100, max_orbits: 3, seed: crate::DEFAULT_SEED }
    }
}

/// Outcome of one axiom battery.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub passed: bool,
    pub instances: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl AxiomReport {
    pub fn to_json(&self) -> Value {
        json!({
            "axiom": self.axiom,
            "status": if self.passed { "pass" } else { "fail" },
            "counterexample": self.counterexample,
        })
    }
}

fn gmap_json(f: &GMap) -> Value {
    json!({
        "src_act": f.src().act_table(),
        "dst_act": f.dst().act_table(),
        "table": f.table(),
    })
}

/// Randomized checks of the four Gysin axioms plus the two derived
/// identities the engine leans on everywhere (projection formula and the
/// fiber-product formula for transfers of 1).
pub fn verify_gysin_axioms<E: GysinFunctor>(e: &E, budget: &VerifyBudget) -> Vec<AxiomReport> {
    let mut out = Vec::new();
    let group = e.group().clone();

    // Axiom (1): E(empty) = 0, i.e. the zero ring.
    {
        let empty = GSet::empty(group.clone());
        let passed = e.zero(&empty) == e.one(&empty);
        out.push(AxiomReport {
            axiom: "zero".into(),
            passed,
            instances: 1,
            seed: budget.seed,
            counterexample: (!passed).then(|| json!("0 != 1 in E(empty)")),
        });
    }

    // Axiom (2) via the sum round-trip: pushing (x, y) into E(X + Y) along
    // the inclusions and restricting back returns (x, y); restriction is a
    // ring map.
    {
        let mut s = Sampler::new(&group, budget.seed ^ 0x01);
        let mut failure = None;
        for _ in 0..budget.iters {
            let x = s.gset(budget.max_orbits);
            let y = s.gset(budget.max_orbits);
            let (sum, i0, i1) = coproduct(&x, &y).unwrap();
            let a = e.random_elem(&x, s.rng());
            let b = e.random_elem(&y, s.rng());
            let z = e.add(&sum, &e.pushforward(&i0, &a), &e.pushforward(&i1, &b));
            let back_a = e.pullback(&i0, &z);
            let back_b = e.pullback(&i1, &z);
            let ring_ok = {
                let a2 = e.random_elem(&x, s.rng());
                let b2 = e.random_elem(&y, s.rng());
                let z2 = e.add(&sum, &e.pushforward(&i0, &a2), &e.pushforward(&i1, &b2));
                let prod = e.mul(&sum, &z, &z2);
                e.pullback(&i0, &prod) == e.mul(&x, &back_a, &a2)
                    && e.pullback(&i1, &prod) == e.mul(&y, &back_b, &b2)
            };
            if back_a != a || back_b != b || !ring_ok {
                failure = Some(json!({
                    "x_act": x.act_table(),
                    "y_act": y.act_table(),
                    "a": e.elem_to_json(&x, &a),
                    "b": e.elem_to_json(&y, &b),
                    "restricted_a": e.elem_to_json(&x, &back_a),
                    "restricted_b": e.elem_to_json(&y, &back_b),
                }));
                break;
            }
        }
        out.push(AxiomReport {
            axiom: "sum".into(),
            passed: failure.is_none(),
            instances: budget.iters,
            seed: budget.seed,
            counterexample: failure,
        });
    }

    // Axiom (3): (f x g)_!(a (x) b) = f_!(a) (x) g_!(b).
    {
        let mut s = Sampler::new(&group, budget.seed ^ 0x02);
        let mut failure = None;
        for _ in 0..budget.iters {
            let x1 = s.nonempty_gset(budget.max_orbits);
            let y1 = s.nonempty_gset(budget.max_orbits);
            let f = s.map_onto_random_target(&x1, budget.max_orbits);
            let g = s.map_onto_random_target(&y1, budget.max_orbits);
            let a = e.random_elem(&x1, s.rng());
            let b = e.random_elem(&y1, s.rng());
            let (src_prod, sp1, sp2) = product(&x1, &y1).unwrap();
            let (dst_prod, _, _) = product(f.dst(), g.dst()).unwrap();
            let fxg = {
                let table = (0..src_prod.size())
                    .map(|i| {
                        let (xa, yb) = (sp1.apply(i), sp2.apply(i));
                        f.apply(xa) * g.dst().size() + g.apply(yb)
                    })
                    .collect();
                GMap::new(src_prod.clone(), dst_prod.clone(), table).unwrap()
            };
            let (_, ext) = external_product(e, &x1, &y1, &a, &b);
            let lhs = e.pushforward(&fxg, &ext);
            let (_, rhs) = external_product(e, f.dst(), g.dst(), &e.pushforward(&f, &a), &e.pushforward(&g, &b));
            if lhs != rhs {
                failure = Some(json!({
                    "f": gmap_json(&f),
                    "g": gmap_json(&g),
                    "a": e.elem_to_json(&x1, &a),
                    "b": e.elem_to_json(&y1, &b),
                    "lhs": e.elem_to_json(&dst_prod, &lhs),
                    "rhs": e.elem_to_json(&dst_prod, &rhs),
                }));
                break;
            }
        }
        out.push(AxiomReport {
            axiom: "push-product".into(),
            passed: failure.is_none(),
            instances: budget.iters,
            seed: budget.seed,
            counterexample: failure,
        });
    }

    // Axiom (4): across a pullback square, f_! p^* = q^* g_!.
    {
        let mut s = Sampler::new(&group, budget.seed ^ 0x03);
        let mut failure = None;
        for _ in 0..budget.iters {
            let (q, g) = s.cospan(budget.max_orbits);
            let (_, pb, pc) = pullback(&q, &g).unwrap();
            let c = e.random_elem(g.src(), s.rng());
            let lhs = e.pushforward(&pb, &e.pullback(&pc, &c));
            let rhs = e.pullback(&q, &e.pushforward(&g, &c));
            if lhs != rhs {
                failure = Some(json!({
                    "q": gmap_json(&q),
                    "g": gmap_json(&g),
                    "c": e.elem_to_json(g.src(), &c),
                    "lhs": e.elem_to_json(q.src(), &lhs),
                    "rhs": e.elem_to_json(q.src(), &rhs),
                }));
                break;
            }
        }
        out.push(AxiomReport {
            axiom: "push-pull".into(),
            passed: failure.is_none(),
            instances: budget.iters,
            seed: budget.seed,
            counterexample: failure,
        });
    }

    // Projection formula: f_!(a . f^*(b)) = f_!(a) . b.
    {
        let mut s = Sampler::new(&group, budget.seed ^ 0x04);
        let mut failure = None;
        for _ in 0..budget.iters {
            let x = s.nonempty_gset(budget.max_orbits);
            let f = s.map_onto_random_target(&x, budget.max_orbits);
            let a = e.random_elem(&x, s.rng());
            let b = e.random_elem(f.dst(), s.rng());
            let lhs = e.pushforward(&f, &e.mul(&x, &a, &e.pullback(&f, &b)));
            let rhs = e.mul(f.dst(), &e.pushforward(&f, &a), &b);
            if lhs != rhs {
                failure = Some(json!({
                    "f": gmap_json(&f),
                    "a": e.elem_to_json(&x, &a),
                    "b": e.elem_to_json(f.dst(), &b),
                    "lhs": e.elem_to_json(f.dst(), &lhs),
                    "rhs": e.elem_to_json(f.dst(), &rhs),
                }));
                break;
            }
        }
        out.push(AxiomReport {
            axiom: "projection-formula".into(),
            passed: failure.is_none(),
            instances: budget.iters,
            seed: budget.seed,
            counterexample: failure,
        });
    }

    // Transfers of 1 multiply along fiber products:
    // (f x_X g)_!(1) = f_!(1) . g_!(1).
    {
        let mut s = Sampler::new(&group, budget.seed ^ 0x05);
        let mut failure = None;
        for _ in 0..budget.iters {
            let (f, g) = s.cospan(budget.max_orbits);
            let (p, pa, _) = pullback(&f, &g).unwrap();
            let to_x = pa.then(&f).unwrap();
            let lhs = e.pushforward(&to_x, &e.one(&p));
            let rhs = e.mul(
                f.dst(),
                &e.pushforward(&f, &e.one(f.src())),
                &e.pushforward(&g, &e.one(g.src())),
            );
            if lhs != rhs {
                failure = Some(json!({
                    "f": gmap_json(&f),
                    "g": gmap_json(&g),
                    "lhs": e.elem_to_json(f.dst(), &lhs),
                    "rhs": e.elem_to_json(f.dst(), &rhs),
                }));
                break;
            }
        }
        out.push(AxiomReport {
            axiom: "gysin-product".into(),
            passed: failure.is_none(),
            instances: budget.iters,
            seed: budget.seed,
            counterexample: failure,
        });
    }

    out
}
