//! Morphism expressions over the generators R(f), I(f), D(a), id(X), with
//! sums and right-to-left composition, a small concrete syntax, direct
//! evaluation into the correspondence category, and rewriting to the
//! normal form "integer combination of R f . D a . I g".
//!
//! Grammar:
//!
//! ```text
//! expr   := term ("+" term)*
//! term   := [int "*"] factor ("*" factor)* | int
//! factor := "R(" id ")" | "I(" id ")" | "D(" id ")" | "id(" id ")" | "(" expr ")"
//! ```
//!
//! Composition is right to left (`f*g` is f after g); whitespace is
//! insignificant.  A bare integer literal is only allowed to be `0`, the
//! zero morphism (its endpoints adapt to context).

use std::collections::BTreeMap;

use crate::corr::{
    add_corr, compose, identity, lift_d, lift_i, lift_r, scale_corr, zero_corr, Correspondence,
};
use crate::error::Error;
use crate::group::{product, pullback, GMap, GSet};
use crate::gysin::GysinFunctor;

/// Abstract syntax of a morphism expression.  Composition lists read left
/// to right as latest-applied first, matching the concrete syntax.
#[derive(Clone, Debug, PartialEq)]
pub enum MorExpr {
    R(String),
    I(String),
    D(String),
    Id(String),
    Comp(Vec<MorExpr>),
    Sum(Vec<(i64, MorExpr)>),
    Zero,
}

/// Named maps and elements an expression can refer to.
pub struct Env<E: GysinFunctor> {
    pub maps: BTreeMap<String, GMap>,
    pub gsets: BTreeMap<String, GSet>,
    pub elements: BTreeMap<String, (GSet, E::Elem)>,
}

impl<E: GysinFunctor> Default for Env<E> {
    fn default() -> Self {
        Env { maps: BTreeMap::new(), gsets: BTreeMap::new(), elements: BTreeMap::new() }
    }
}

impl<E: GysinFunctor> Env<E> {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Domain and codomain of an elaborated expression; `None` endpoints mean
/// the expression is the polymorphic zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Sig {
    pub endpoints: Option<(GSet, GSet)>, // (dom, cod)
}

// ---------------------------------------------------------------------
// parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Parse { pos: self.pos, msg: format!("expected `{}`", c as char) }),
        }
    }

    fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse { pos: start, msg: "expected identifier".into() });
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse { pos: start, msg: "expected integer".into() })
    }

    fn expr(&mut self) -> Result<MorExpr, Error> {
        let mut terms = vec![(1i64, self.term()?)];
        while self.peek() == Some(b'+') {
            self.pos += 1;
            terms.push((1, self.term()?));
        }
        if terms.len() == 1 {
            let (c, t) = terms.pop().unwrap();
            Ok(if c == 1 { t } else { MorExpr::Sum(vec![(c, t)]) })
        } else {
            Ok(MorExpr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<MorExpr, Error> {
        let mut coeff = 1i64;
        let mut saw_int = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'-') {
            coeff = self.int()?;
            saw_int = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                // a bare integer: only the zero morphism is meaningful
                if coeff == 0 {
                    return Ok(MorExpr::Zero);
                }
                return Err(Error::Parse {
                    pos: self.pos,
                    msg: "a bare integer must be 0 (the zero morphism)".into(),
                });
            }
        }
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        let body = if factors.len() == 1 { factors.pop().unwrap() } else { MorExpr::Comp(factors) };
        if saw_int || coeff != 1 {
            Ok(MorExpr::Sum(vec![(coeff, body)]))
        } else {
            Ok(body)
        }
    }

    fn factor(&mut self) -> Result<MorExpr, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let head = self.ident()?;
                match head.as_str() {
                    "R" | "I" | "D" | "id" => {
                        self.expect(b'(')?;
                        let name = self.ident()?;
                        self.expect(b')')?;
                        Ok(match head.as_str() {
                            "R" => MorExpr::R(name),
                            "I" => MorExpr::I(name),
                            "D" => MorExpr::D(name),
                            _ => MorExpr::Id(name),
                        })
                    }
                    _ => Err(Error::Parse {
                        pos: start,
                        msg: format!("expected R(..), I(..), D(..) or id(..), found `{head}`"),
                    }),
                }
            }
            _ => Err(Error::Parse { pos: self.pos, msg: "expected a factor".into() }),
        }
    }
}

/// Parse and elaborate an expression against an environment.  Returns the
/// tree and its endpoints; name resolution and composability are checked
/// here.
pub fn parse_expr<E: GysinFunctor>(text: &str, env: &Env<E>) -> Result<(MorExpr, Sig), Error> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse { pos: p.pos, msg: "trailing input".into() });
    }
    let sig = elaborate(&expr, env)?;
    Ok((expr, sig))
}

/// Endpoints of one atom.
fn atom_sig<E: GysinFunctor>(expr: &MorExpr, env: &Env<E>) -> Result<Sig, Error> {
    let endpoints = match expr {
        MorExpr::R(name) => {
            let f = env.maps.get(name).ok_or_else(|| Error::UnknownIdent(name.clone()))?;
            Some((f.src().clone(), f.dst().clone()))
        }
        MorExpr::I(name) => {
            let f = env.maps.get(name).ok_or_else(|| Error::UnknownIdent(name.clone()))?;
            Some((f.dst().clone(), f.src().clone()))
        }
        MorExpr::D(name) => {
            let (x, _) = env.elements.get(name).ok_or_else(|| Error::UnknownIdent(name.clone()))?;
            Some((x.clone(), x.clone()))
        }
        MorExpr::Id(name) => {
            let x = env.gsets.get(name).ok_or_else(|| Error::UnknownIdent(name.clone()))?;
            Some((x.clone(), x.clone()))
        }
        _ => unreachable!("atom_sig is only called on atoms"),
    };
    Ok(Sig { endpoints })
}

/// Type-check an expression: every chain must have matching intermediate
/// objects and every sum matching endpoints.
pub fn elaborate<E: GysinFunctor>(expr: &MorExpr, env: &Env<E>) -> Result<Sig, Error> {
    match expr {
        MorExpr::Zero => Ok(Sig { endpoints: None }),
        MorExpr::R(_) | MorExpr::I(_) | MorExpr::D(_) | MorExpr::Id(_) => atom_sig(expr, env),
        MorExpr::Comp(parts) => {
            let sigs: Vec<Sig> = parts.iter().map(|p| elaborate(p, env)).collect::<Result<_, _>>()?;
            // right to left: the last factor applies first
            let mut acc: Option<(GSet, GSet)> = None; // (dom, cod) so far
            let mut any_zero = false;
            for sig in sigs.iter().rev() {
                match (&mut acc, &sig.endpoints) {
                    (_, None) => any_zero = true,
                    (None, Some((d, c))) => acc = Some((d.clone(), c.clone())),
                    (Some((_, cod)), Some((d, c))) => {
                        if cod != d {
                            return Err(Error::NotComposable(format!(
                                "chain mismatch: a factor expects a {}-point object but the previous factor produced {} points",
                                d.size(),
                                cod.size()
                            )));
                        }
                        *cod = c.clone();
                    }
                }
            }
            if any_zero {
                // zero absorbs; endpoints are whatever the rest pins down
                return Ok(Sig { endpoints: acc });
            }
            Ok(Sig { endpoints: acc })
        }
        MorExpr::Sum(terms) => {
            let mut acc: Option<(GSet, GSet)> = None;
            for (_, t) in terms {
                let sig = elaborate(t, env)?;
                match (&acc, &sig.endpoints) {
                    (_, None) => {}
                    (None, Some(e)) => acc = Some(e.clone()),
                    (Some(a), Some(b)) => {
                        if a != b {
                            return Err(Error::NotComposable(
                                "summands have different endpoints".into(),
                            ));
                        }
                    }
                }
            }
            Ok(Sig { endpoints: acc })
        }
    }
}

/// Structural evaluation into the correspondence category.  The zero
/// morphism needs endpoints from context, so the caller provides the
/// elaborated signature (or an explicit pair for polymorphic zero).
pub fn eval_expr<E: GysinFunctor>(
    e: &E,
    expr: &MorExpr,
    env: &Env<E>,
) -> Result<Correspondence<E>, Error> {
    let sig = elaborate(expr, env)?;
    let (dom, cod) = sig.endpoints.ok_or_else(|| {
        Error::InvalidArgument("cannot evaluate the bare zero morphism without endpoints".into())
    })?;
    eval_expr_at(e, expr, env, &dom, &cod)
}

pub fn eval_expr_at<E: GysinFunctor>(
    e: &E,
    expr: &MorExpr,
    env: &Env<E>,
    dom: &GSet,
    cod: &GSet,
) -> Result<Correspondence<E>, Error> {
    match expr {
        MorExpr::Zero => Ok(zero_corr(e, dom, cod)),
        MorExpr::R(name) => Ok(lift_r(e, &env.maps[name])),
        MorExpr::I(name) => Ok(lift_i(e, &env.maps[name])),
        MorExpr::D(name) => {
            let (x, a) = &env.elements[name];
            Ok(lift_d(e, x, a))
        }
        MorExpr::Id(name) => Ok(identity(e, &env.gsets[name])),
        MorExpr::Comp(parts) => {
            // a zero factor absorbs the whole chain
            if parts.iter().any(|p| matches!(elaborate(p, env), Ok(Sig { endpoints: None }))) {
                return Ok(zero_corr(e, dom, cod));
            }
            // evaluate right to left
            let mut acc: Option<Correspondence<E>> = None;
            for part in parts.iter().rev() {
                let sig = elaborate(part, env)?;
                let (d, c) = sig.endpoints.expect("zeros handled above");
                let next = eval_expr_at(e, part, env, &d, &c)?;
                acc = Some(match acc {
                    None => next,
                    Some(prev) => compose(e, &next, &prev)?,
                });
            }
            match acc {
                Some(c) => Ok(c),
                None => Ok(identity(e, dom)),
            }
        }
        MorExpr::Sum(terms) => {
            let mut acc = zero_corr(e, dom, cod);
            for (coeff, t) in terms {
                let sig = elaborate(t, env)?;
                let v = match &sig.endpoints {
                    Some((d, c)) => eval_expr_at(e, t, env, d, c)?,
                    None => zero_corr(e, dom, cod),
                };
                acc = add_corr(e, &acc, &scale_corr(e, &v, *coeff))?;
            }
            Ok(acc)
        }
    }
}

// ---------------------------------------------------------------------
// normal forms

/// One atom of a composition word, with resolved data.
#[derive(Debug)]
enum Atom<E: GysinFunctor> {
    R(GMap),
    I(GMap),
    D(GSet, E::Elem),
}

impl<E: GysinFunctor> Clone for Atom<E> {
    fn clone(&self) -> Self {
        match self {
            Atom::R(f) => Atom::R(f.clone()),
            Atom::I(f) => Atom::I(f.clone()),
            Atom::D(x, a) => Atom::D(x.clone(), a.clone()),
        }
    }
}

/// A sum of triples `coeff . R f . D a . I g` with a shared span source:
/// f: Z -> cod, a in E(Z), g: Z -> dom.
#[derive(Debug)]
pub struct NormalForm<E: GysinFunctor> {
    pub dom: GSet,
    pub cod: GSet,
    pub terms: Vec<(i64, GMap, E::Elem, GMap)>,
}

impl<E: GysinFunctor> Clone for NormalForm<E> {
    fn clone(&self) -> Self {
        NormalForm { dom: self.dom.clone(), cod: self.cod.clone(), terms: self.terms.clone() }
    }
}

/// Options for the rewriting pass.
#[derive(Clone, Copy, Debug)]
pub struct NormalizeOptions {
    /// Collapse `R f . D a . I f` to `D(f_!(a))`; purely a shortcut, the
    /// evaluated value is unchanged either way.
    pub collapse_symmetric_spans: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions { collapse_symmetric_spans: true }
    }
}

/// Expand an expression into coefficiented words of atoms.
fn to_words<E: GysinFunctor>(
    e: &E,
    expr: &MorExpr,
    env: &Env<E>,
) -> Result<Vec<(i64, Vec<Atom<E>>)>, Error> {
    match expr {
        MorExpr::Zero => Ok(vec![]),
        MorExpr::R(name) => Ok(vec![(1, vec![Atom::R(env.maps[name].clone())])]),
        MorExpr::I(name) => Ok(vec![(1, vec![Atom::I(env.maps[name].clone())])]),
        MorExpr::D(name) => {
            let (x, a) = &env.elements[name];
            Ok(vec![(1, vec![Atom::D(x.clone(), a.clone())])])
        }
        MorExpr::Id(name) => {
            let x = &env.gsets[name];
            Ok(vec![(1, vec![Atom::R(GMap::identity(x))])])
        }
        MorExpr::Comp(parts) => {
            // distribute: cartesian product of the summand choices
            let mut acc: Vec<(i64, Vec<Atom<E>>)> = vec![(1, vec![])];
            for part in parts {
                let ws = to_words(e, part, env)?;
                let mut next = Vec::new();
                for (c0, w0) in &acc {
                    for (c1, w1) in &ws {
                        let mut w = w0.clone();
                        w.extend(w1.iter().cloned());
                        next.push((c0 * c1, w));
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
        MorExpr::Sum(terms) => {
            let mut acc = Vec::new();
            for (coeff, t) in terms {
                for (c, w) in to_words(e, t, env)? {
                    acc.push((coeff * c, w));
                }
            }
            Ok(acc)
        }
    }
}

/// Rewrite words to R* D* I* using the three exchange rules, splitting
/// pullbacks into orbits as rule (I then R) fires.  Terminates: each
/// exchange of I past R strictly drops the count of I-before-R pairs, and
/// the D moves strictly drop the D displacement at fixed inversion count.
fn rewrite_words<E: GysinFunctor>(
    e: &E,
    queue: Vec<(i64, Vec<Atom<E>>)>,
) -> Vec<(i64, Vec<Atom<E>>)> {
    let mut done = Vec::new();
    let mut queue = queue;
    while let Some((coeff, word)) = queue.pop() {
        // leftmost I R adjacency
        let ir = word.windows(2).position(|w| matches!((&w[0], &w[1]), (Atom::I(_), Atom::R(_))));
        if let Some(k) = ir {
            let (Atom::I(f), Atom::R(q)) = (&word[k], &word[k + 1]) else { unreachable!() };
            let (_, p, gmap) = pullback(f, q).expect("shared codomain");
            // I f . R q = sum over orbits of R(p_i) . I(g_i)
            for (_, incl) in p.src().orbits() {
                let p_i = incl.then(&p).expect("composable");
                let g_i = incl.then(&gmap).expect("composable");
                let mut w = word.clone();
                w.splice(k..k + 2, [Atom::R(p_i), Atom::I(g_i)]);
                queue.push((coeff, w));
            }
            continue;
        }
        // D R -> R D(f^* a)
        let dr = word.windows(2).position(|w| matches!((&w[0], &w[1]), (Atom::D(_, _), Atom::R(_))));
        if let Some(k) = dr {
            let (Atom::D(_, a), Atom::R(f)) = (&word[k], &word[k + 1]) else { unreachable!() };
            let pulled = e.pullback(f, a);
            let mut w = word.clone();
            w.splice(k..k + 2, [Atom::R(f.clone()), Atom::D(f.src().clone(), pulled)]);
            queue.push((coeff, w));
            continue;
        }
        // I D -> D(f^* a) I
        let id_pat = word.windows(2).position(|w| matches!((&w[0], &w[1]), (Atom::I(_), Atom::D(_, _))));
        if let Some(k) = id_pat {
            let (Atom::I(f), Atom::D(_, a)) = (&word[k], &word[k + 1]) else { unreachable!() };
            let pulled = e.pullback(f, a);
            let mut w = word.clone();
            w.splice(k..k + 2, [Atom::D(f.src().clone(), pulled), Atom::I(f.clone())]);
            queue.push((coeff, w));
            continue;
        }
        done.push((coeff, word));
    }
    done.reverse();
    done
}

/// Merge a sorted R* D* I* word into a single triple.
fn word_to_triple<E: GysinFunctor>(
    e: &E,
    word: &[Atom<E>],
    dom: &GSet,
    cod: &GSet,
) -> (GMap, E::Elem, GMap) {
    let mut rs: Vec<&GMap> = Vec::new();
    let mut ds: Vec<(&GSet, &E::Elem)> = Vec::new();
    let mut is_: Vec<&GMap> = Vec::new();
    for a in word {
        match a {
            Atom::R(f) => rs.push(f),
            Atom::D(x, a) => ds.push((x, a)),
            Atom::I(f) => is_.push(f),
        }
    }
    // R g . R f = R (g o f): fold the run right to left
    let r_map = rs
        .iter()
        .rev()
        .fold(None::<GMap>, |acc, f| match acc {
            None => Some((*f).clone()),
            Some(g) => Some(g.then(f).expect("validated chain")),
        });
    // I f . I g = I (g o f): fold the run left to right
    let i_map = is_
        .iter()
        .fold(None::<GMap>, |acc, f| match acc {
            None => Some((*f).clone()),
            Some(g) => Some(g.then(f).expect("validated chain")),
        });
    let source: GSet = match (&r_map, ds.first(), &i_map) {
        (Some(f), _, _) => f.src().clone(),
        (None, Some((x, _)), _) => (*x).clone(),
        (None, None, Some(g)) => g.src().clone(),
        (None, None, None) => dom.clone(),
    };
    let f = r_map.unwrap_or_else(|| GMap::identity(&source));
    let g = i_map.unwrap_or_else(|| GMap::identity(&source));
    let mut a = e.one(&source);
    for (_, d) in ds {
        a = e.mul(&source, &a, d);
    }
    debug_assert_eq!(f.dst(), cod);
    debug_assert_eq!(g.dst(), dom);
    (f, a, g)
}

/// Rewrite an expression to RDI normal form.  Deterministic: the strategy
/// is leftmost-first with orbits split in their canonical order.
pub fn normalize<E: GysinFunctor>(
    e: &E,
    expr: &MorExpr,
    env: &Env<E>,
    opts: NormalizeOptions,
) -> Result<NormalForm<E>, Error> {
    let sig = elaborate(expr, env)?;
    let (dom, cod) = sig.endpoints.ok_or_else(|| {
        Error::InvalidArgument("cannot normalize the bare zero morphism without endpoints".into())
    })?;
    let words = to_words(e, expr, env)?;
    let rewritten = rewrite_words(e, words);
    let mut terms: Vec<(i64, GMap, E::Elem, GMap)> = Vec::new();
    for (coeff, word) in rewritten {
        let (mut f, mut a, mut g) = word_to_triple(e, &word, &dom, &cod);
        if opts.collapse_symmetric_spans && f == g && f.table() != identity_table(f.src()) {
            // R f . D a . I f = D(f_!(a))
            let pushed = e.pushforward(&f, &a);
            let y = f.dst().clone();
            f = GMap::identity(&y);
            g = GMap::identity(&y);
            a = pushed;
        }
        // merge syntactically identical triples
        if let Some(slot) = terms.iter_mut().find(|(_, f2, a2, g2)| *f2 == f && *a2 == a && *g2 == g) {
            slot.0 += coeff;
        } else {
            terms.push((coeff, f, a, g));
        }
    }
    terms.retain(|(c, f, a, _)| *c != 0 && *a != e.zero(f.src()));
    Ok(NormalForm { dom, cod, terms })
}

fn identity_table(x: &GSet) -> Vec<usize> {
    (0..x.size()).collect()
}

/// Evaluate a normal form directly: each triple is
/// ((f x g): Z -> cod x dom)_!(a).
pub fn eval_normal_form<E: GysinFunctor>(e: &E, nf: &NormalForm<E>) -> Correspondence<E> {
    let mut acc = zero_corr(e, &nf.dom, &nf.cod);
    let (carrier, _, _) = product(&nf.cod, &nf.dom).expect("same group");
    for (coeff, f, a, g) in &nf.terms {
        let span = GMap::new_unchecked(
            f.src().clone(),
            carrier.clone(),
            (0..f.src().size()).map(|z| f.apply(z) * nf.dom.size() + g.apply(z)).collect(),
        );
        let pushed = e.pushforward(&span, a);
        let term = Correspondence { dom: nf.dom.clone(), cod: nf.cod.clone(), elem: pushed };
        acc = add_corr(e, &acc, &scale_corr(e, &term, *coeff)).expect("same endpoints");
    }
    acc
}

/// Semantic equality of two expressions with the same declared endpoints:
/// both evaluate to the same correspondence.  Normal forms are not
/// compared syntactically (spans are canonical only up to isomorphism).
pub fn expr_equal<E: GysinFunctor>(
    e: &E,
    e1: &MorExpr,
    e2: &MorExpr,
    env: &Env<E>,
) -> Result<bool, Error> {
    let s1 = elaborate(e1, env)?;
    let s2 = elaborate(e2, env)?;
    let endpoints = match (&s1.endpoints, &s2.endpoints) {
        (Some(a), Some(b)) => {
            if a != b {
                return Err(Error::InvalidArgument(
                    "expressions have different endpoints".into(),
                ));
            }
            a.clone()
        }
        (Some(a), None) | (None, Some(a)) => a.clone(),
        (None, None) => return Ok(true),
    };
    let v1 = eval_expr_at(e, e1, env, &endpoints.0, &endpoints.1)?;
    let v2 = eval_expr_at(e, e2, env, &endpoints.0, &endpoints.1)?;
    Ok(v1 == v2)
}
