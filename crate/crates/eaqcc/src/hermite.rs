//! Row-style Hermite normal form over GF(2)[D, D^-1] and the two-tier
//! row-equivalence test built on it.
//!
//! Pivot entries are valuation-0 normalized; entries above a pivot are
//! reduced to the canonical residue of degree below the pivot's degree
//! (the quotient ring inverts `D`, so Laurent entries reduce cleanly).
//! The resulting form is a canonical representative of the unimodular
//! row-equivalence class.

use crate::laurent::{LaurentPoly, Residues};
use crate::matrix::{MatrixError, PolyMatrix};

/// Outcome of a row-equivalence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Identical Hermite normal forms over the Laurent ring.
    Unimodular,
    /// Equal row spaces over the fraction field, both full row rank.
    Subcode,
    NotEquivalent,
}

impl Equivalence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Equivalence::Unimodular => "UNIMODULAR-EQUIVALENT",
            Equivalence::Subcode => "SUBCODE-EQUIVALENT",
            Equivalence::NotEquivalent => "NOT-EQUIVALENT",
        }
    }

    pub fn at_least(&self, other: Equivalence) -> bool {
        let rank = |e: &Equivalence| match e {
            Equivalence::Unimodular => 2,
            Equivalence::Subcode => 1,
            Equivalence::NotEquivalent => 0,
        };
        rank(self) >= rank(&other)
    }
}

/// Canonical row Hermite normal form. Zero rows sink to the bottom.
pub fn hermite_normal_form(input: &PolyMatrix) -> PolyMatrix {
    let mut a = input.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pr = 0;
    for pc in 0..cols {
        if pr == rows {
            break;
        }
        // gcd-accumulate column pc into one row
        loop {
            let nonzero: Vec<usize> = (pr..rows).filter(|&r| !a.get(r, pc).is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let &rd = nonzero
                .iter()
                .min_by_key(|&&r| {
                    let e = a.get(r, pc);
                    (e.norm_degree().unwrap(), e.valuation().unwrap().abs(), r)
                })
                .unwrap();
            if nonzero.len() == 1 {
                a.swap_rows(pr, rd);
                break;
            }
            for r in nonzero {
                if r == rd {
                    continue;
                }
                let (q, _) = a.get(r, pc).divmod(a.get(rd, pc)).unwrap();
                a.add_row_mul(rd, r, &q);
            }
        }
        if a.get(pr, pc).is_zero() {
            continue;
        }
        // normalize pivot to valuation 0
        let v = a.get(pr, pc).valuation().unwrap();
        if v != 0 {
            a.scale_row(pr, &LaurentPoly::monomial(-v));
        }
        // reduce entries above the pivot
        let pivot = a.get(pr, pc).clone();
        for r in 0..pr {
            let e = a.get(r, pc).clone();
            if e.is_zero() {
                continue;
            }
            let rep = if pivot.is_one() {
                LaurentPoly::zero()
            } else {
                Residues::new(&pivot).reduce(&e)
            };
            let q = e.add(&rep).div_exact(&pivot).expect("residue difference");
            a.add_row_mul(pr, r, &q);
            debug_assert_eq!(a.get(r, pc), &rep);
        }
        pr += 1;
    }
    a
}

/// Two-tier row-equivalence between equally shaped polynomial matrices.
pub fn row_equivalent(m1: &PolyMatrix, m2: &PolyMatrix) -> Result<Equivalence, MatrixError> {
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() {
        return Err(MatrixError::Shape(format!(
            "{}x{} vs {}x{}",
            m1.rows(),
            m1.cols(),
            m2.rows(),
            m2.cols()
        )));
    }
    if hermite_normal_form(m1) == hermite_normal_form(m2) {
        return Ok(Equivalence::Unimodular);
    }
    let r1 = m1.rank();
    let r2 = m2.rank();
    let stacked = m1.vstack(m2).rank();
    if r1 == m1.rows() && r2 == m2.rows() && stacked == r1 && stacked == r2 {
        return Ok(Equivalence::Subcode);
    }
    Ok(Equivalence::NotEquivalent)
}
