//! Rational functions over GF(2)[D, D^-1].
//!
//! These appear once an infinite-depth operation multiplies a `Z` column
//! by `1/gamma(D^-1)`. The canonical form keeps the denominator at
//! valuation 0 (so its constant term is 1) and coprime to the numerator's
//! valuation-0 part; the unit `D^k` lives in the numerator. With that
//! convention structural equality is semantic equality.

use std::fmt;

use crate::laurent::{LaurentPoly, PolyError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunc {
                num,
                den: LaurentPoly::one(),
            });
        }
        let (dv, den0) = den.normalized();
        let num = num.shift(-dv);
        let (nv, num0) = num.normalized();
        let g = num0.gcd(&den0);
        let num0 = num0.div_exact(&g).unwrap();
        let den0 = den0.div_exact(&g).unwrap();
        Ok(RationalFunc {
            num: num0.shift(nv),
            den: den0,
        })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Returns the value as a Laurent polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den).unwrap()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        Self::new(self.num.mul(p), self.den.clone()).unwrap()
    }

    pub fn inverse(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.num.conjugate(), self.den.conjugate()).unwrap()
    }

    /// Formal power series coefficients of the value on the exponent
    /// window `[lo, hi)`. The canonical denominator has constant term 1,
    /// so the expansion runs in increasing powers of `D` starting at the
    /// numerator's valuation.
    pub fn series_window(&self, lo: i64, hi: i64) -> Vec<(i64, bool)> {
        if self.is_zero() || lo >= hi {
            return vec![];
        }
        let start = self.num.valuation().unwrap();
        // den = 1 + tail; coefficients satisfy c_k = num_k + sum tail_j c_{k-j}
        let mut coeffs: Vec<bool> = Vec::new();
        let mut out = Vec::new();
        let tail: Vec<i64> = self
            .den
            .support()
            .iter()
            .copied()
            .filter(|&e| e != 0)
            .collect();
        let mut k = start;
        while k < hi {
            let mut c = self.num.coeff(k);
            for &j in &tail {
                let idx = k - j - start;
                if idx >= 0 && (idx as usize) < coeffs.len() && coeffs[idx as usize] {
                    c = !c;
                }
            }
            coeffs.push(c);
            if c && k >= lo {
                out.push((k, true));
            }
            k += 1;
        }
        out
    }
}

impl From<LaurentPoly> for RationalFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `poly` or `poly/poly` in the shared grammar.
pub fn parse_rational(text: &str) -> Result<RationalFunc, PolyError> {
    match text.find('/') {
        None => Ok(RationalFunc::from_poly(LaurentPoly::parse(text)?)),
        Some(i) => {
            let num = LaurentPoly::parse(&text[..i])?;
            let den = LaurentPoly::parse(&text[i + 1..]).map_err(|e| match e {
                PolyError::Parse { pos, msg } => PolyError::Parse {
                    pos: pos + i + 1,
                    msg,
                },
                other => other,
            })?;
            RationalFunc::new(num, den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    fn r(n: &str, d: &str) -> RationalFunc {
        RationalFunc::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn reduction_to_canonical_form() {
        // 1/(1+D^-1) = D/(1+D)
        let v = r("1", "1+D^-1");
        assert_eq!(v.numerator(), &p("D"));
        assert_eq!(v.denominator(), &p("1+D"));
        // common factor cancels and value becomes polynomial
        let w = r("1+D^2", "1+D");
        assert!(w.is_polynomial());
        assert_eq!(w.as_poly().unwrap(), &p("1+D"));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunc::new(p("1"), p("0")).is_err());
    }

    #[test]
    fn series_expansion() {
        // D/(1+D) = D + D^2 + D^3 + ...
        let v = r("1", "1+D^-1");
        let s = v.series_window(0, 5);
        let exps: Vec<i64> = s.iter().map(|&(e, _)| e).collect();
        assert_eq!(exps, vec![1, 2, 3, 4]);
    }

    #[test]
    fn display_and_parse() {
        let v = r("D", "1+D");
        assert_eq!(v.to_string(), "D/1+D");
        assert_eq!(parse_rational("D/1+D").unwrap(), v);
        assert_eq!(
            parse_rational("1+D").unwrap(),
            RationalFunc::from_poly(p("1+D"))
        );
    }

    fn arb_poly(max_terms: usize, span: i64) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-span..=span, 0..=max_terms)
            .prop_map(|v| LaurentPoly::from_exponents(&v))
    }

    proptest! {
        #[test]
        fn field_axioms(
            an in arb_poly(4, 4), ad in arb_poly(4, 4),
            bn in arb_poly(4, 4), bd in arb_poly(4, 4),
        ) {
            prop_assume!(!ad.is_zero() && !bd.is_zero());
            let a = RationalFunc::new(an, ad).unwrap();
            let b = RationalFunc::new(bn, bd).unwrap();
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert!(a.add(&a).is_zero());
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inverse().unwrap()).is_one());
            }
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!(
                a.mul(&b).conjugate(),
                a.conjugate().mul(&b.conjugate())
            );
        }
    }
}
