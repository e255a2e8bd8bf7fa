//! Polynomials over GF(2) in a single indeterminate `c`.
//!
//! Coefficients are packed into 64-bit words, bit `k` of the sequence being
//! the coefficient of `c^k`. The zero polynomial is the empty word sequence
//! and every value is kept with its top word nonzero, so structural equality
//! is polynomial equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Element of Z2[c].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    /// The indeterminate `c`.
    pub fn c() -> Self {
        Self::monomial(1)
    }

    /// `c^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; k / 64 + 1];
        words[k / 64] = 1u64 << (k % 64);
        Poly { words }
    }

    /// Builds a polynomial from the exponents carrying coefficient 1.
    /// Repeated exponents cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Poly::zero();
        for k in exps {
            p.toggle(k);
        }
        p
    }

    fn toggle(&mut self, k: usize) {
        let w = k / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1u64 << (k % 64);
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Units of Z2[c] are exactly the nonzero constants, i.e. `1`.
    pub fn is_unit(&self) -> bool {
        self.is_one()
    }

    /// Degree, `None` standing for the degree of zero (minus infinity).
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| (w >> (k % 64)) & 1 == 1)
    }

    /// Exponents with coefficient 1, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// `Some(e)` when the polynomial is the single monomial `c^e`.
    pub fn as_monomial(&self) -> Option<usize> {
        let exps = self.exponents();
        match exps.as_slice() {
            [e] => Some(*e),
            _ => None,
        }
    }

    /// Value at `c = 0`.
    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    /// Whether `c` divides the polynomial.
    pub fn divisible_by_c(&self) -> bool {
        !self.constant_term()
    }

    fn shifted(&self, by: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ws, bs) = (by / 64, by % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = Poly { words };
        p.normalize();
        p
    }

    /// Euclidean division: `self = divisor * quot + rem` with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quot.toggle(shift);
            rem += &divisor.shifted(shift);
        }
        Ok((quot, rem))
    }

    /// Compact exponent-list form, e.g. `[0,2]` for `c^2 + 1`.
    pub fn to_exponent_list(&self) -> String {
        let parts: Vec<String> = self.exponents().iter().map(|e| e.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Poly {
    /// Renders as `c^k + ... + c + 1`, highest power first; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .iter()
            .rev()
            .map(|&k| match k {
                0 => "1".to_string(),
                1 => "c".to_string(),
                k => format!("c^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let mut out = Poly::zero();
        for k in self.exponents() {
            out += &rhs.shifted(k);
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(exps: &[usize]) -> Poly {
        Poly::from_exponents(exps.iter().copied())
    }

    #[test]
    fn addition_examples() {
        assert_eq!(&p(&[0, 1]) + &p(&[1]), Poly::one());
        assert_eq!(&Poly::zero() + &p(&[3, 5]), p(&[3, 5]));
        assert_eq!(&p(&[2, 0]) + &p(&[2, 1]), p(&[1, 0]));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&Poly::c() * &Poly::c(), Poly::monomial(2));
        assert_eq!(&p(&[0, 1]) * &p(&[0, 1]), p(&[0, 2]));
        assert_eq!(&p(&[0, 4, 9]) * &Poly::zero(), Poly::zero());
    }

    #[test]
    fn division_examples() {
        let c = Poly::c();
        assert_eq!(p(&[2, 1]).divmod(&c).unwrap(), (p(&[1, 0]), Poly::zero()));
        assert_eq!(p(&[2, 0]).divmod(&c).unwrap(), (c.clone(), Poly::one()));
        assert_eq!(Poly::one().divmod(&c).unwrap(), (Poly::zero(), Poly::one()));
        assert_eq!(Poly::one().divmod(&Poly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn degree_and_rendering() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::monomial(130).degree(), Some(130));
        assert_eq!(p(&[0, 1, 3]).to_string(), "c^3 + c + 1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p(&[2, 0]).to_exponent_list(), "[0,2]");
        assert_eq!(Poly::zero().to_exponent_list(), "[]");
    }

    #[test]
    fn shifting_across_word_boundary() {
        let x = p(&[0, 63]);
        assert_eq!(&x * &Poly::monomial(1), p(&[1, 64]));
        assert_eq!(&x * &Poly::monomial(65), p(&[65, 128]));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(0usize..90, 0..8).prop_map(Poly::from_exponents)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &b, a.clone());
        }

        #[test]
        fn degree_is_additive(a in arb_poly(), b in arb_poly()) {
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!((&a * &b).degree(), Some(da + db));
            }
        }

        #[test]
        fn euclidean_division(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&b * &q) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }
    }
}
