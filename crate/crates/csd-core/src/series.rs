//! Sparse truncated series in the monoid ring k[N+ ∪ {0}].
//!
//! Internal support type for the group engine: monomials are (x, y) exponent
//! pairs including the constant (0, 0); every operation takes the truncation
//! degree explicitly and drops all monomials above it. Keys iterate in
//! graded-lexicographic order, so results are canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rat::{binomial, Rat};

/// Ring monomial `x^a * y^b`; (0, 0) is the constant.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Mono {
    pub x: u32,
    pub y: u32,
}

impl Mono {
    pub fn new(x: u32, y: u32) -> Self {
        Mono { x, y }
    }

    pub fn one() -> Self {
        Mono { x: 0, y: 0 }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            x: self.x + other.x,
            y: self.y + other.y,
        }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.x).cmp(&(other.degree(), other.x))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}y^{}", self.x, self.y)
    }
}

/// Sparse series; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub(crate) struct Series {
    terms: BTreeMap<Mono, Rat>,
}

impl Series {
    pub fn zero() -> Self {
        Series::default()
    }

    pub fn one() -> Self {
        let mut s = Series::default();
        s.terms.insert(Mono::one(), Rat::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Mono::one())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    /// Smallest total degree with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<u32> {
        // graded-lex: the first key has minimal degree
        self.terms.keys().next().map(Mono::degree)
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Series) {
        for (m, c) in other.iter() {
            self.add_term(*m, c.clone());
        }
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scale(&self, k: &Rat) -> Series {
        if k.is_zero() {
            return Series::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k.clone();
        }
        out
    }

    /// Drops all monomials of total degree > `trunc`.
    pub fn truncate(&self, trunc: u32) -> Series {
        let mut out = Series::zero();
        for (m, c) in self.iter_upto(trunc) {
            out.terms.insert(*m, c.clone());
        }
        out
    }

    /// Terms of degree <= `d` (a prefix in graded-lex order).
    pub fn iter_upto(&self, d: u32) -> impl Iterator<Item = (&Mono, &Rat)> {
        // first monomial of degree d+1 in graded-lex order is (0, d+1)
        self.terms.range(..Mono::new(0, d + 1))
    }

    /// Product truncated at total degree `trunc`.
    pub fn mul(&self, other: &Series, trunc: u32) -> Series {
        let mut out = Series::zero();
        for (ma, ca) in self.iter_upto(trunc) {
            let rest = trunc - ma.degree();
            for (mb, cb) in other.iter_upto(rest) {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// `(self)^alpha` for a series with constant term 1 and rational `alpha`,
    /// via the generalized binomial series in `w = self - 1`.
    pub fn pow_rat(&self, alpha: &Rat, trunc: u32) -> Series {
        assert!(
            self.constant_term().is_one(),
            "rational power requires constant term 1"
        );
        let mut w = self.clone();
        w.add_term(Mono::one(), -Rat::one());
        let mut out = Series::one();
        if w.is_zero() {
            return out;
        }
        let step = w.min_degree().expect("nonzero");
        debug_assert!(step >= 1);
        let mut wk = Series::one();
        let mut k: u32 = 0;
        while k * step < trunc {
            k += 1;
            wk = wk.mul(&w, trunc);
            if wk.is_zero() {
                break;
            }
            out.add_assign(&wk.scale(&binomial(alpha, k)));
        }
        out
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{c}*x^{}y^{}", m.x, m.y))
            .collect();
        write!(f, "{}", body.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m(x: u32, y: u32) -> Mono {
        Mono::new(x, y)
    }

    fn one_plus_x() -> Series {
        let mut s = Series::one();
        s.add_term(m(1, 0), rat_int(1));
        s
    }

    #[test]
    fn mul_truncates() {
        let s = one_plus_x();
        let sq = s.mul(&s, 1);
        // (1+x)^2 = 1 + 2x mod degree > 1
        assert_eq!(sq.coeff(&m(0, 0)), rat_int(1));
        assert_eq!(sq.coeff(&m(1, 0)), rat_int(2));
        assert_eq!(sq.coeff(&m(2, 0)), rat_int(0));
    }

    #[test]
    fn inverse_of_unit() {
        let s = one_plus_x();
        let inv = s.pow_rat(&rat_int(-1), 5);
        assert!(s.mul(&inv, 5).is_one());
        // alternating signs
        for k in 0..=5u32 {
            let want = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(inv.coeff(&m(k, 0)), want, "x^{k}");
        }
    }

    #[test]
    fn rational_power_binomial() {
        let s = one_plus_x();
        let h = s.pow_rat(&rat(1, 2), 4);
        assert!(h.mul(&h, 4) == s.truncate(4), "sqrt squared");
        assert_eq!(h.coeff(&m(1, 0)), rat(1, 2));
        assert_eq!(h.coeff(&m(2, 0)), rat(-1, 8));
    }

    #[test]
    fn integer_rational_power_matches_repeated_product() {
        let mut s = Series::one();
        s.add_term(m(1, 0), rat_int(2));
        s.add_term(m(0, 1), rat(-1, 3));
        let cube = s.mul(&s, 6).mul(&s, 6);
        assert_eq!(s.pow_rat(&rat_int(3), 6), cube);
        assert!(s.pow_rat(&rat_int(-3), 6).mul(&cube, 6).is_one());
    }

    #[test]
    fn min_degree_tracks_leading_block() {
        let mut s = Series::zero();
        assert_eq!(s.min_degree(), None);
        s.add_term(m(2, 1), rat_int(5));
        s.add_term(m(0, 1), rat_int(1));
        assert_eq!(s.min_degree(), Some(1));
    }

    #[test]
    fn add_term_cancels_to_empty() {
        let mut s = Series::zero();
        s.add_term(m(1, 1), rat(3, 7));
        s.add_term(m(1, 1), rat(-3, 7));
        assert!(s.is_zero());
    }
}
