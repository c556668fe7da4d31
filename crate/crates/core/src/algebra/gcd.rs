//! Bivariate gcd over a field, viewing `K[x, y]` as `K[x][y]`.
//!
//! Contents are handled with the univariate Euclidean algorithm; the
//! primitive parts go through a primitive pseudo-remainder sequence in `y`.

use super::{Poly1, Poly2};
use crate::scalar::Scalar;

type YPoly<T> = Vec<Poly1<T>>;

fn trim<T: Scalar>(mut p: YPoly<T>) -> YPoly<T> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn content<T: Scalar>(p: &YPoly<T>) -> Poly1<T> {
    p.iter().fold(Poly1::zero(), |g, c| g.gcd(c))
}

fn div_content<T: Scalar>(p: &YPoly<T>, c: &Poly1<T>) -> YPoly<T> {
    p.iter()
        .map(|a| a.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn primitive<T: Scalar>(p: &YPoly<T>) -> YPoly<T> {
    let c = content(p);
    if c.is_zero() {
        return Vec::new();
    }
    div_content(p, &c)
}

// Pseudo-remainder of f by g in D[y], D = K[x].
fn prem<T: Scalar>(f: &YPoly<T>, g: &YPoly<T>) -> YPoly<T> {
    let dg = g.len() - 1;
    let lg = g[dg].clone();
    let mut r = f.clone();
    while r.len() > dg && !r.is_empty() {
        let k = r.len() - 1 - dg;
        let lr = r[r.len() - 1].clone();
        let mut next: YPoly<T> = r.iter().map(|c| c * &lg).collect();
        for (idx, gc) in g.iter().enumerate() {
            next[idx + k] = &next[idx + k] - &(gc * &lr);
        }
        r = trim(next);
        // Keep coefficient growth in check.
        r = primitive(&r);
    }
    r
}

/// Greatest common divisor, normalized to leading coefficient one.
///
/// `gcd(0, 0)` is zero; `gcd(p, 0)` is `p` made monic.
pub fn gcd<T: Scalar>(a: &Poly2<T>, b: &Poly2<T>) -> Poly2<T> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly2::one();
    }
    let fa = a.y_coeffs();
    let fb = b.y_coeffs();
    let (ca, cb) = (content(&fa), content(&fb));
    let cont = ca.gcd(&cb);
    let (mut f, mut g) = (div_content(&fa, &ca), div_content(&fb, &cb));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while g.len() > 1 {
        let r = prem(&f, &g);
        f = g;
        g = primitive(&r);
        if g.is_empty() {
            break;
        }
    }
    // A nonzero y-free remainder means the primitive parts are coprime.
    let pp = if g.len() == 1 { vec![Poly1::one()] } else { f };
    let out = &Poly2::from_y_coeffs(&pp) * &Poly2::from_x(&cont);
    out.monic()
}

/// `lcm(a, b)`, monic.
pub fn lcm<T: Scalar>(a: &Poly2<T>, b: &Poly2<T>) -> Poly2<T> {
    if a.is_zero() || b.is_zero() {
        return Poly2::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).expect("gcd divides")).monic()
}
