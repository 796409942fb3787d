//! Binary Laurent polynomials in the delay variable `D`.
//!
//! A value is a finite set of integer exponents with coefficient 1 over
//! GF(2); the absent exponent has coefficient 0. Addition is symmetric
//! difference of supports, so `p + p = 0`. Units of the ring are the
//! monomials `D^k`, which makes the Euclidean measure the *normalized*
//! degree `deg - val` rather than the plain degree.
//!
//! The text grammar is shared by every file format in the toolkit:
//!
//! ```text
//! poly := "0" | term ("+" term)*
//! term := "1" | "D" | "D^" int        (int may be negative)
//! ```
//!
//! Rendering lists terms in increasing exponent order.

use std::fmt;
use thiserror::Error;

/// Exponents outside this bound abort rather than risk wrapping in
/// downstream shift arithmetic; anything useful stays far inside.
const EXP_LIMIT: i64 = 1 << 40;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by zero polynomial")]
    DivisionByZero,
}

/// Binary Laurent polynomial, stored as its sorted exponent support.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    support: Vec<i64>,
}

fn check_exp(e: i64) -> i64 {
    assert!(
        e.abs() < EXP_LIMIT,
        "exponent overflow: |{e}| exceeds supported range"
    );
    e
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { support: vec![] }
    }

    pub fn one() -> Self {
        LaurentPoly { support: vec![0] }
    }

    /// The monomial `D^k`.
    pub fn monomial(k: i64) -> Self {
        check_exp(k);
        LaurentPoly { support: vec![k] }
    }

    /// Builds from an arbitrary exponent list; duplicates cancel in pairs.
    pub fn from_exponents(exps: &[i64]) -> Self {
        let mut v: Vec<i64> = exps.to_vec();
        v.sort_unstable();
        let mut support = Vec::with_capacity(v.len());
        let mut i = 0;
        while i < v.len() {
            let mut run = 1;
            while i + run < v.len() && v[i + run] == v[i] {
                run += 1;
            }
            if run % 2 == 1 {
                support.push(check_exp(v[i]));
            }
            i += run;
        }
        LaurentPoly { support }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.support == [0]
    }

    /// Units of the Laurent ring are exactly the monomials `D^k`.
    pub fn is_unit(&self) -> bool {
        self.support.len() == 1
    }

    /// True iff `p(D) = p(D^-1)`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.conjugate()
    }

    pub fn support(&self) -> &[i64] {
        &self.support
    }

    pub fn coeff(&self, k: i64) -> bool {
        self.support.binary_search(&k).is_ok()
    }

    /// Max exponent; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.support.last().copied()
    }

    /// Min exponent; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<i64> {
        self.support.first().copied()
    }

    /// Euclidean measure: `deg - val`. Zero for units.
    pub fn norm_degree(&self) -> Option<i64> {
        Some(self.degree()? - self.valuation()?)
    }

    pub fn add(&self, other: &Self) -> Self {
        // symmetric difference of two sorted lists
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { support: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut exps = Vec::with_capacity(self.support.len() * other.support.len());
        for &a in &self.support {
            for &b in &other.support {
                exps.push(check_exp(
                    a.checked_add(b).expect("exponent overflow in mul"),
                ));
            }
        }
        Self::from_exponents(&exps)
    }

    /// Multiplication by the unit `D^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            support: self
                .support
                .iter()
                .map(|&e| check_exp(e.checked_add(k).expect("exponent overflow in shift")))
                .collect(),
        }
    }

    /// The substitution `D -> D^-1`.
    pub fn conjugate(&self) -> Self {
        let mut support: Vec<i64> = self.support.iter().map(|&e| -e).collect();
        support.reverse();
        LaurentPoly { support }
    }

    /// Splits into the unit part and the valuation-0 normalization:
    /// `p = D^v * p0` with `p0(0) = 1`. Zero stays zero with `v = 0`.
    pub fn normalized(&self) -> (i64, LaurentPoly) {
        match self.valuation() {
            None => (0, Self::zero()),
            Some(v) => (v, self.shift(-v)),
        }
    }

    /// Laurent division: `self = q * d + r` with `r = 0` or
    /// `norm_degree(r) < norm_degree(d)`.
    pub fn divmod(&self, d: &Self) -> Result<(LaurentPoly, LaurentPoly), PolyError> {
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (vd, d0) = d.normalized();
        let dd = d0.degree().unwrap();
        let mut q = Self::zero();
        let mut r = self.clone();
        while !r.is_zero() {
            let (vr, r0) = r.normalized();
            let dr = r0.degree().unwrap();
            if dr < dd {
                break;
            }
            // cancel the top term of r0 against the top term of d0
            let step = Self::monomial(vr + dr - dd - vd);
            q = q.add(&step);
            r = r.add(&step.mul(d));
        }
        Ok((q, r))
    }

    /// True division; errors are impossible only when `d` exactly divides.
    pub fn div_exact(&self, d: &Self) -> Option<LaurentPoly> {
        let (q, r) = self.divmod(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other
            .divmod(self)
            .map(|(_, r)| r.is_zero())
            .unwrap_or(false)
    }

    /// Greatest common divisor, canonicalized to valuation 0.
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> LaurentPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.normalized().1
    }

    /// Renders in the fixed grammar.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Parses the fixed grammar. Whitespace is allowed around `+` only.
    pub fn parse(text: &str) -> Result<LaurentPoly, PolyError> {
        let t = text.trim();
        if t.is_empty() {
            return Err(PolyError::Parse {
                pos: 0,
                msg: "empty polynomial".into(),
            });
        }
        if t == "0" {
            return Ok(Self::zero());
        }
        let mut exps = Vec::new();
        let mut pos = 0usize;
        for piece in t.split('+') {
            let term = piece.trim();
            let at = pos + piece.len().saturating_sub(piece.trim_start().len());
            if term.is_empty() {
                return Err(PolyError::Parse {
                    pos: at,
                    msg: "empty term".into(),
                });
            }
            exps.push(parse_term(term, at)?);
            pos += piece.len() + 1;
        }
        Ok(Self::from_exponents(&exps))
    }
}

fn parse_term(term: &str, at: usize) -> Result<i64, PolyError> {
    match term {
        "1" => Ok(0),
        "D" => Ok(1),
        _ => {
            let body = term.strip_prefix("D^").ok_or_else(|| PolyError::Parse {
                pos: at,
                msg: format!("expected `1`, `D` or `D^<int>`, found `{term}`"),
            })?;
            let n: i64 = body.parse().map_err(|_| PolyError::Parse {
                pos: at + 2,
                msg: format!("bad exponent `{body}`"),
            })?;
            if n.abs() >= EXP_LIMIT {
                return Err(PolyError::Parse {
                    pos: at + 2,
                    msg: format!("exponent {n} out of range"),
                });
            }
            Ok(n)
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, &e) in self.support.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "D")?,
                _ => write!(f, "D^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Residue arithmetic modulo a valuation-0 polynomial with nonzero
/// constant term. `D` is invertible in the quotient, which lets Laurent
/// polynomials reduce to a canonical representative of degree below
/// `deg(modulus)`.
pub struct Residues {
    modulus: LaurentPoly,
    d_inv: LaurentPoly,
}

impl Residues {
    /// `modulus` must have valuation 0 and not be a unit.
    pub fn new(modulus: &LaurentPoly) -> Residues {
        debug_assert_eq!(modulus.valuation(), Some(0));
        debug_assert!(!modulus.is_unit());
        // modulus = 1 + D*q  =>  D^-1 = q (mod modulus)
        let q = modulus
            .add(&LaurentPoly::one())
            .div_exact(&LaurentPoly::monomial(1))
            .expect("valuation-0 modulus with constant term");
        Residues {
            modulus: modulus.clone(),
            d_inv: q,
        }
    }

    /// Canonical representative with support in `[0, deg(modulus))`.
    pub fn reduce(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for &e in p.support() {
            let m = if e >= 0 {
                poly_rem(&LaurentPoly::monomial(e), &self.modulus)
            } else {
                let mut m = LaurentPoly::one();
                for _ in 0..(-e) {
                    m = poly_rem(&m.mul(&self.d_inv), &self.modulus);
                }
                m
            };
            acc = acc.add(&m);
        }
        poly_rem(&acc, &self.modulus)
    }
}

/// Plain-degree polynomial remainder for valuation >= 0 operands; unlike
/// [`LaurentPoly::divmod`], monomials are not treated as units, so the
/// result has degree strictly below the divisor's.
fn poly_rem(p: &LaurentPoly, d: &LaurentPoly) -> LaurentPoly {
    debug_assert!(p.valuation().is_none_or(|v| v >= 0));
    debug_assert_eq!(d.valuation(), Some(0));
    let dd = d.degree().unwrap();
    let mut r = p.clone();
    while let Some(dr) = r.degree() {
        if dr < dd {
            break;
        }
        r = r.add(&d.shift(dr - dd));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("1+D^-2").support(), &[-2, 0]);
        assert!(p("0").is_zero());
        assert!(p("D+D").is_zero());
        assert_eq!(p("D^3 + 1 +D").support(), &[0, 1, 3]);
    }

    #[test]
    fn parse_errors_name_position() {
        let e = LaurentPoly::parse("1+Q").unwrap_err();
        match e {
            PolyError::Parse { pos, .. } => assert_eq!(pos, 2),
            _ => panic!("wrong error"),
        }
        assert!(LaurentPoly::parse("D^x").is_err());
        assert!(LaurentPoly::parse("").is_err());
        assert!(LaurentPoly::parse("1+").is_err());
    }

    #[test]
    fn render_round_trip() {
        for s in ["0", "1", "D", "D^-1+1+D", "1+D^2", "D^-3+D^5"] {
            assert_eq!(p(s).render(), s);
        }
    }

    #[test]
    fn mul_examples() {
        assert_eq!(p("1+D").mul(&p("1+D")), p("1+D^2"));
        assert_eq!(p("1+D").mul(&p("1")), p("1+D"));
        assert_eq!(p("1+D").mul(&p("1+D^-1")), p("D^-1+D"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p("1+D").conjugate(), p("1+D^-1"));
        assert!(p("0").conjugate().is_zero());
        assert_eq!(p("1+D^-1+D^2").conjugate(), p("D^-2+1+D"));
    }

    #[test]
    fn divmod_examples() {
        let (q, r) = p("D^2+1").divmod(&p("D+1")).unwrap();
        assert_eq!(q, p("1+D"));
        assert!(r.is_zero());
        assert_eq!(p("D+1").gcd(&p("D")), p("1"));
        // normalized inputs are (1+D^2, 1+D+D^3); the cubic has no root
        // at D = 1, so the pair is coprime
        assert_eq!(p("1+D^-2").gcd(&p("1+D^-1+D^2")), p("1"));
        assert_eq!(p("1+D^-2").gcd(&p("D^-1+1")), p("1+D"));
        assert_eq!(p("1").divmod(&p("0")), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn laurent_divmod_uses_units() {
        // D divides everything in the Laurent ring
        let (q, r) = p("1+D").divmod(&p("D")).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, p("D^-1+1"));
    }

    #[test]
    fn residue_reduction() {
        let m = p("1+D+D^3");
        let red = Residues::new(&m);
        assert!(red.reduce(&m).is_zero());
        let r = red.reduce(&p("D^-1"));
        // D * r = 1 (mod m)
        let back = red.reduce(&r.mul(&p("D")));
        assert!(back.is_one());
        assert!(red.reduce(&p("D^7+D^-4")).degree().unwrap_or(0) < 3);
    }

    fn arb_poly(max_terms: usize, span: i64) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec(-span..=span, 0..=max_terms)
            .prop_map(|v| LaurentPoly::from_exponents(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn divmod_round_trip(a in arb_poly(9, 8), b in arb_poly(9, 8)) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a.clone());
            if !r.is_zero() {
                prop_assert!(r.norm_degree().unwrap() < b.norm_degree().unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(6, 8), b in arb_poly(6, 8), c in arb_poly(6, 8)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.add(&a).is_zero());
        }

        #[test]
        fn conjugate_is_automorphism(a in arb_poly(6, 8), b in arb_poly(6, 8)) {
            prop_assert_eq!(a.conjugate().conjugate(), a.clone());
            prop_assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
            prop_assert_eq!(a.add(&b).conjugate(), a.conjugate().add(&b.conjugate()));
        }

        #[test]
        fn degree_of_product_adds(a in arb_poly(6, 8), b in arb_poly(6, 8)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(
                a.mul(&b).degree().unwrap(),
                a.degree().unwrap() + b.degree().unwrap()
            );
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(6, 6), b in arb_poly(6, 6)) {
            let g = a.gcd(&b);
            if g.is_zero() {
                prop_assert!(a.is_zero() && b.is_zero());
            } else {
                prop_assert!(g.divides(&a));
                prop_assert!(g.divides(&b));
                prop_assert_eq!(g.valuation(), Some(0));
            }
        }

        #[test]
        fn parse_render_round_trip(a in arb_poly(7, 9)) {
            prop_assert_eq!(LaurentPoly::parse(&a.render()).unwrap(), a.clone());
        }
    }
}
