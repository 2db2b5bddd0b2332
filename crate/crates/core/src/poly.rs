//! Graded-commutative polynomials with exact coefficients.
//!
//! A monomial is a non-decreasing list of variable indices. Odd variables
//! appear at most once; reordering odd variables past each other costs a sign.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};
use crate::sign::parity;

pub type Monomial = Vec<u32>;

/// Variable names and degrees; parity is the degree mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
    odd: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Poly) {
        for (m, x) in &other.terms {
            self.add_term(m.clone(), c * x);
        }
    }

    pub fn add(&mut self, other: &Poly) {
        self.add_scaled(&Scalar::one(), other);
    }

    pub fn scaled(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn coefficient(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms of polynomial degree `n`.
    pub fn homogeneous(&self, n: usize) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| m.len() == n).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filtered(&self, keep: impl Fn(&[u32]) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }
}

impl PolyRing {
    pub fn new(names: Vec<String>, degrees: Vec<i32>) -> Self {
        let odd = degrees.iter().map(|&d| parity(d)).collect();
        Self { names, degrees, odd }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_odd(&self, v: u32) -> bool {
        self.odd[v as usize]
    }

    pub fn var(&self, v: u32) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![v], Scalar::one());
        p
    }

    pub fn monomial_degree(&self, m: &[u32]) -> i32 {
        m.iter().map(|&v| self.degrees[v as usize]).sum()
    }

    pub fn monomial_odd(&self, m: &[u32]) -> bool {
        m.iter().filter(|&&v| self.odd[v as usize]).count() % 2 == 1
    }

    /// Degree of a homogeneous polynomial, `None` if zero or inhomogeneous.
    pub fn degree(&self, p: &Poly) -> Option<i32> {
        let mut it = p.terms.keys().map(|m| self.monomial_degree(m));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Product of monomials with its reordering sign; `None` if an odd
    /// variable would repeat.
    pub fn mul_monomials(&self, a: &[u32], b: &[u32]) -> Option<(Monomial, bool)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut odd = false;
        let (mut i, mut j) = (0, 0);
        // number of odd variables of `a` still to be placed
        let mut odd_left: usize = a.iter().filter(|&&v| self.odd[v as usize]).count();
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i] <= b[j]);
            if take_a {
                if self.odd[a[i] as usize] {
                    odd_left -= 1;
                }
                out.push(a[i]);
                i += 1;
            } else {
                if self.odd[b[j] as usize] && odd_left % 2 == 1 {
                    odd = !odd;
                }
                out.push(b[j]);
                j += 1;
            }
        }
        for w in out.windows(2) {
            if w[0] == w[1] && self.odd[w[0] as usize] {
                return None;
            }
        }
        Some((out, odd))
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &p.terms {
            for (b, y) in &q.terms {
                if let Some((m, odd)) = self.mul_monomials(a, b) {
                    out.add_term(m, scalar::sign(odd) * x * y);
                }
            }
        }
        out
    }

    fn mul_mono_poly_mono(&self, pre: &[u32], p: &Poly, post: &[u32], c: &Scalar, out: &mut Poly) {
        for (m, x) in &p.terms {
            let Some((left, s1)) = self.mul_monomials(pre, m) else { continue };
            let Some((full, s2)) = self.mul_monomials(&left, post) else { continue };
            out.add_term(full, scalar::sign(s1 ^ s2) * x * c);
        }
    }

    /// Left derivative ∂/∂v.
    pub fn derivative(&self, p: &Poly, v: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let Some(pos) = m.iter().position(|&x| x == v) else { continue };
            let mult = m.iter().filter(|&&x| x == v).count();
            let odd = self.odd[v as usize] && self.monomial_odd(&m[..pos]);
            let mut rest = m.clone();
            rest.remove(pos);
            out.add_term(rest, scalar::sign(odd) * c * scalar::int(mult as i64));
        }
        out
    }

    /// Applies the derivation determined by its values on generators.
    /// An odd derivation picks up the parity of the variables it passes.
    pub fn apply_derivation(&self, p: &Poly, odd_derivation: bool, image: &dyn Fn(u32) -> Poly) -> Poly {
        let mut out = Poly::zero();
        let mut cache: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &p.terms {
            let mut passed_odd = false;
            let mut t = 0;
            while t < m.len() {
                let v = m[t];
                let mult = m[t..].iter().take_while(|&&x| x == v).count();
                let img = cache.entry(v).or_insert_with(|| image(v));
                if !img.is_zero() {
                    // v is even whenever mult > 1, so the leftover copies commute freely
                    let mut rest = vec![v; mult - 1];
                    rest.extend_from_slice(&m[t + mult..]);
                    let coeff = scalar::sign(odd_derivation && passed_odd) * c * scalar::int(mult as i64);
                    self.mul_mono_poly_mono(&m[..t], img, &rest, &coeff, &mut out);
                }
                passed_odd ^= self.odd[v as usize];
                t += mult;
            }
        }
        out
    }

    pub fn monomial_label(&self, m: &[u32]) -> String {
        if m.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < m.len() {
            let n = m[i..].iter().take_while(|&&x| x == m[i]).count();
            let name = &self.names[m[i] as usize];
            parts.push(if n > 1 { format!("{name}^{n}") } else { name.clone() });
            i += n;
        }
        parts.join("*")
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.poly.terms.iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let label = self.ring.monomial_label(m);
            if m.is_empty() {
                write!(f, "{}", scalar::format(&abs))?;
            } else if abs.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{}*{label}", scalar::format(&abs))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ring() -> PolyRing {
        // a, b odd; x, y even
        PolyRing::new(
            ["a", "b", "x", "y"].iter().map(|s| s.to_string()).collect(),
            vec![1, -1, 0, 2],
        )
    }

    #[test]
    fn graded_commutativity() {
        let r = ring();
        let (a, b, x) = (r.var(0), r.var(1), r.var(2));
        assert_eq!(r.mul(&a, &b), r.mul(&b, &a).scaled(&int(-1)));
        assert_eq!(r.mul(&a, &x), r.mul(&x, &a));
        assert!(r.mul(&a, &a).is_zero());
        assert_eq!(r.mul(&x, &x).coefficient(&[2, 2]), int(1));
        let ab = r.mul(&a, &b);
        assert_eq!(r.mul(&ab, &x), r.mul(&x, &ab));
    }

    #[test]
    fn left_derivatives() {
        let r = ring();
        let (a, b, x) = (r.var(0), r.var(1), r.var(2));
        let abx = r.mul(&r.mul(&a, &b), &x);
        assert_eq!(r.derivative(&abx, 0), r.mul(&b, &x));
        assert_eq!(r.derivative(&abx, 1), r.mul(&a, &x).scaled(&int(-1)));
        let xx = r.mul(&x, &x);
        assert_eq!(r.derivative(&xx, 2), x.scaled(&int(2)));
        // odd derivatives anticommute, even ones commute
        let p = r.mul(&abx, &x);
        assert_eq!(r.derivative(&r.derivative(&p, 0), 1), r.derivative(&r.derivative(&p, 1), 0).scaled(&int(-1)));
        assert_eq!(r.derivative(&r.derivative(&p, 2), 0), r.derivative(&r.derivative(&p, 0), 2));
    }

    #[test]
    fn derivations_obey_leibniz() {
        let r = ring();
        // odd derivation D with D a = x, D x = a b, D b = 0, D y = a
        let image = |v: u32| match v {
            0 => r.var(2),
            2 => r.mul(&r.var(0), &r.var(1)),
            3 => r.var(0),
            _ => Poly::zero(),
        };
        let monos: Vec<Poly> = vec![r.var(0), r.var(1), r.var(2), r.var(3), r.mul(&r.var(2), &r.var(2))];
        for f in &monos {
            for g in &monos {
                let fg = r.mul(f, g);
                let lhs = r.apply_derivation(&fg, true, &image);
                let odd_f = r.monomial_odd(f.terms.keys().next().unwrap());
                let mut rhs = r.mul(&r.apply_derivation(f, true, &image), g);
                rhs.add_scaled(&scalar::sign(odd_f), &r.mul(f, &r.apply_derivation(g, true, &image)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn display() {
        let r = ring();
        let mut p = r.mul(&r.var(2), &r.var(2));
        p.add_term(vec![0, 1], int(-3));
        assert_eq!(r.display(&p).to_string(), "-3*a*b + x^2");
    }
}
