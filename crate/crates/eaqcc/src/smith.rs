//! Smith normal form over GF(2)[D, D^-1], with recorded elementary
//! operations, the column-only lower triangularization, and unimodular
//! inversion.
//!
//! Pivots are chosen by minimal normalized degree (`deg - val`), ties
//! broken by smaller `|val|` then lowest (row, col). Preferring small
//! `|val|` keeps gcd accumulation landing on already-normalized entries,
//! e.g. the 1 in `[D, 1+D, 1]`. Invariant factors are normalized to
//! valuation 0 by recorded unit row scalings, so a unit factor is
//! literally 1 and the divisibility chain sorts units first on its own.

use crate::laurent::LaurentPoly;
use crate::matrix::{ElemOp, MatrixError, PolyMatrix};
use crate::ratfunc::RationalFunc;

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    /// `left * rect_diag * right = input`
    pub left: PolyMatrix,
    pub right: PolyMatrix,
    pub left_inv: PolyMatrix,
    pub right_inv: PolyMatrix,
    /// Nonzero invariant factors, valuation-0 normalized, divisibility chain.
    pub diag: Vec<LaurentPoly>,
    /// Count of unit invariant factors (all equal to 1 after normalization).
    pub s: usize,
    pub gamma1: Vec<LaurentPoly>,
    pub gamma2: Vec<LaurentPoly>,
    /// Replaying these on the input yields the rectangular diagonal form.
    pub ops: Vec<ElemOp>,
    rows: usize,
    cols: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The rectangular diagonal carrier of the invariant factors.
    pub fn rect_diag(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zero(self.rows, self.cols);
        for (i, d) in self.diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }
}

fn pivot_key(p: &LaurentPoly) -> (i64, i64) {
    let nd = p.norm_degree().unwrap();
    let v = p.valuation().unwrap();
    (nd, v.abs())
}

fn find_pivot(a: &PolyMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((i64, i64), usize, usize)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let e = a.get(r, c);
            if e.is_zero() {
                continue;
            }
            let key = pivot_key(e);
            if best
                .as_ref()
                .is_none_or(|(bk, br, bc)| key < *bk || (key == *bk && (r, c) < (*br, *bc)))
            {
                best = Some((key, r, c));
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

fn record(ops: &mut Vec<ElemOp>, a: &mut PolyMatrix, op: ElemOp) {
    op.apply(a);
    ops.push(op);
}

/// Smith normal form with full operation recording.
pub fn smith_decompose(input: &PolyMatrix) -> SmithDecomposition {
    let mut a = input.clone();
    let mut ops: Vec<ElemOp> = Vec::new();
    let (rows, cols) = (a.rows(), a.cols());
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pr, pc)) = find_pivot(&a, t) else {
            break;
        };
        if pr != t {
            record(&mut ops, &mut a, ElemOp::SwapRows(t, pr));
        }
        if pc != t {
            record(&mut ops, &mut a, ElemOp::SwapCols(t, pc));
        }

        loop {
            let mut dirty = false;
            for c in t + 1..cols {
                if a.get(t, c).is_zero() {
                    continue;
                }
                let (q, r) = a.get(t, c).divmod(a.get(t, t)).unwrap();
                record(
                    &mut ops,
                    &mut a,
                    ElemOp::AddColMul {
                        src: t,
                        dst: c,
                        coef: q,
                    },
                );
                debug_assert_eq!(a.get(t, c), &r);
                if !r.is_zero() {
                    dirty = true;
                }
            }
            for r in t + 1..rows {
                if a.get(r, t).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(r, t).divmod(a.get(t, t)).unwrap();
                record(
                    &mut ops,
                    &mut a,
                    ElemOp::AddRowMul {
                        src: t,
                        dst: r,
                        coef: q,
                    },
                );
                if !rem.is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a strictly smaller remainder exists; re-center on it
                let (pr, pc) = find_pivot(&a, t).unwrap();
                if pr != t {
                    record(&mut ops, &mut a, ElemOp::SwapRows(t, pr));
                }
                if pc != t {
                    record(&mut ops, &mut a, ElemOp::SwapCols(t, pc));
                }
                continue;
            }
            // row t and column t are clear; make the pivot divide the rest
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !a.get(r, c).is_zero() && !a.get(t, t).divides(a.get(r, c)));
            match offender {
                Some((r, _)) => {
                    record(
                        &mut ops,
                        &mut a,
                        ElemOp::AddRowMul {
                            src: r,
                            dst: t,
                            coef: LaurentPoly::one(),
                        },
                    );
                }
                None => break,
            }
        }

        let v = a.get(t, t).valuation().unwrap();
        if v != 0 {
            record(&mut ops, &mut a, ElemOp::ScaleRowUnit { row: t, shift: -v });
        }
        t += 1;
    }

    let diag: Vec<LaurentPoly> = (0..t).map(|i| a.get(i, i).clone()).collect();
    debug_assert!(diag.windows(2).all(|w| w[0].divides(&w[1])));
    let s = diag.iter().take_while(|d| d.is_unit()).count();
    let gamma1 = diag[..s].to_vec();
    let gamma2 = diag[s..].to_vec();

    let (left, left_inv, right, right_inv) = build_factors(&ops, rows, cols);
    SmithDecomposition {
        left,
        right,
        left_inv,
        right_inv,
        diag,
        s,
        gamma1,
        gamma2,
        ops,
        rows,
        cols,
    }
}

fn invert_op(op: &ElemOp) -> ElemOp {
    match op {
        ElemOp::SwapRows(a, b) => ElemOp::SwapRows(*a, *b),
        ElemOp::SwapCols(a, b) => ElemOp::SwapCols(*a, *b),
        ElemOp::AddRowMul { src, dst, coef } => ElemOp::AddRowMul {
            src: *src,
            dst: *dst,
            coef: coef.clone(),
        },
        ElemOp::AddColMul { src, dst, coef } => ElemOp::AddColMul {
            src: *src,
            dst: *dst,
            coef: coef.clone(),
        },
        ElemOp::ScaleRowUnit { row, shift } => ElemOp::ScaleRowUnit {
            row: *row,
            shift: -shift,
        },
    }
}

fn build_factors(
    ops: &[ElemOp],
    rows: usize,
    cols: usize,
) -> (PolyMatrix, PolyMatrix, PolyMatrix, PolyMatrix) {
    let mut left_inv = PolyMatrix::identity(rows);
    let mut right_inv = PolyMatrix::identity(cols);
    for op in ops {
        if op.is_row_op() {
            op.apply(&mut left_inv);
        } else {
            op.apply(&mut right_inv);
        }
    }
    let mut left = PolyMatrix::identity(rows);
    let mut right = PolyMatrix::identity(cols);
    for op in ops.iter().rev() {
        let inv = invert_op(op);
        if inv.is_row_op() {
            inv.apply(&mut left);
        } else {
            inv.apply(&mut right);
        }
    }
    // L * input * R = diag with L = left_inv, R = right_inv, so
    // input = left * diag * right with left = L^-1 built by reverse replay.
    (left, left_inv, right, right_inv)
}

/// Column-only reduction of a full-row-rank `rows <= cols` matrix to
/// `[L 0]` with `L` lower triangular, nonzero diagonal. No row operations
/// are recorded.
pub fn lower_triangular_colonly(
    input: &PolyMatrix,
) -> Result<(PolyMatrix, Vec<ElemOp>), MatrixError> {
    let (rows, cols) = (input.rows(), input.cols());
    if rows > cols {
        return Err(MatrixError::Shape(format!(
            "{rows} rows exceed {cols} cols"
        )));
    }
    let mut a = input.clone();
    let mut ops: Vec<ElemOp> = Vec::new();
    for i in 0..rows {
        loop {
            let nonzero: Vec<usize> = (i..cols).filter(|&j| !a.get(i, j).is_zero()).collect();
            if nonzero.is_empty() {
                return Err(MatrixError::RankDeficient(i));
            }
            let &jd = nonzero
                .iter()
                .min_by_key(|&&j| (pivot_key(a.get(i, j)), j))
                .unwrap();
            if nonzero.len() == 1 {
                if jd != i {
                    record(&mut ops, &mut a, ElemOp::SwapCols(i, jd));
                }
                break;
            }
            for j in nonzero {
                if j == jd {
                    continue;
                }
                let (q, _) = a.get(i, j).divmod(a.get(i, jd)).unwrap();
                record(
                    &mut ops,
                    &mut a,
                    ElemOp::AddColMul {
                        src: jd,
                        dst: j,
                        coef: q,
                    },
                );
            }
        }
    }
    debug_assert!(ops.iter().all(|op| !op.is_row_op()));
    let l = a.submatrix(0, rows, 0, rows);
    debug_assert!(a.submatrix(0, rows, rows, cols).is_zero());
    Ok((l, ops))
}

/// Determinant over the fraction field.
pub fn determinant(m: &PolyMatrix) -> RationalFunc {
    assert_eq!(m.rows(), m.cols());
    let mut a = m.to_rational();
    let n = a.rows();
    let mut det = RationalFunc::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            return RationalFunc::zero();
        };
        a.swap_rows(col, p);
        let pivot = a.get(col, col).clone();
        det = det.mul(&pivot);
        let inv = pivot.inverse().unwrap();
        for r in col + 1..n {
            if !a.get(r, col).is_zero() {
                let coef = a.get(r, col).mul(&inv);
                a.add_row_mul(col, r, &coef);
            }
        }
    }
    det
}

/// Exact inverse of a unimodular matrix (determinant a unit `D^k`).
pub fn unimodular_inverse(m: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
    if m.rows() != m.cols() {
        return Err(MatrixError::Shape(format!(
            "{}x{} is not square",
            m.rows(),
            m.cols()
        )));
    }
    let dec = smith_decompose(m);
    if dec.rank() != m.rows() || !dec.diag.iter().all(|d| d.is_one()) {
        return Err(MatrixError::NotUnimodular(determinant(m).to_string()));
    }
    // left_inv * m * right_inv = I  =>  m^-1 = right_inv * left_inv
    let inv = dec.right_inv.mul(&dec.left_inv);
    debug_assert_eq!(inv.mul(m), PolyMatrix::identity(m.rows()));
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::replay;

    fn pm(rows: &[&str]) -> PolyMatrix {
        PolyMatrix::parse_rows(rows).unwrap()
    }

    fn check_roundtrip(m: &PolyMatrix) {
        let dec = smith_decompose(m);
        assert_eq!(dec.left.mul(&dec.rect_diag()).mul(&dec.right), *m);
        assert_eq!(replay(&dec.ops, m), dec.rect_diag());
        assert_eq!(dec.left.mul(&dec.left_inv), PolyMatrix::identity(m.rows()));
        assert_eq!(
            dec.right.mul(&dec.right_inv),
            PolyMatrix::identity(m.cols())
        );
        for w in dec.diag.windows(2) {
            assert!(w[0].divides(&w[1]));
        }
        for d in &dec.diag {
            assert_eq!(d.valuation(), Some(0));
        }
    }

    #[test]
    fn identity_is_its_own_form() {
        let dec = smith_decompose(&PolyMatrix::identity(2));
        assert_eq!(dec.diag.len(), 2);
        assert_eq!(dec.s, 2);
        assert!(dec.gamma2.is_empty());
        assert!(dec.ops.is_empty());
    }

    #[test]
    fn example_x_matrix_has_unit_factors() {
        // X(D) of the reference [[4,2;2]] example
        let x = pm(&["0, 1, 0, 0", "1+D, 1+D, 1, D"]);
        let dec = smith_decompose(&x);
        assert_eq!(dec.rank(), 2);
        assert_eq!(dec.s, 2);
        assert!(dec.gamma2.is_empty());
        assert!(dec.diag.iter().all(|d| d.is_one()));
        check_roundtrip(&x);
    }

    #[test]
    fn non_unit_factor_lands_in_gamma2() {
        let m = pm(&["1+D, 0", "0, 0"]);
        let dec = smith_decompose(&m);
        assert_eq!(dec.diag, vec![LaurentPoly::parse("1+D").unwrap()]);
        assert_eq!(dec.s, 0);
        assert_eq!(dec.gamma2.len(), 1);
        check_roundtrip(&m);
    }

    #[test]
    fn zero_matrix_yields_empty_diag() {
        let dec = smith_decompose(&PolyMatrix::zero(2, 3));
        assert!(dec.diag.is_empty());
        assert_eq!(dec.s, 0);
    }

    #[test]
    fn chain_holds_on_diagonal_input() {
        // already diagonal but in the wrong divisibility order
        let m = pm(&["1+D, 0", "0, 1"]);
        let dec = smith_decompose(&m);
        assert_eq!(dec.diag[0].render(), "1");
        assert_eq!(dec.diag[1].render(), "1+D");
        check_roundtrip(&m);
    }

    #[test]
    fn lower_triangular_examples() {
        let (l, ops) = lower_triangular_colonly(&pm(&["1, 0", "D, 1"])).unwrap();
        assert!(ops.is_empty());
        assert_eq!(l, pm(&["1, 0", "D, 1"]));

        let (l, ops) = lower_triangular_colonly(&pm(&["1+D, 1"])).unwrap();
        assert_eq!(l, pm(&["1"]));
        assert_eq!(ops.len(), 2);

        let (l, _) = lower_triangular_colonly(&pm(&["D, 1+D, 1"])).unwrap();
        assert_eq!(l, pm(&["1"]));
    }

    #[test]
    fn lower_triangular_rejects_rank_deficiency() {
        let err = lower_triangular_colonly(&pm(&["1, 1", "1, 1"])).unwrap_err();
        assert_eq!(err, MatrixError::RankDeficient(1));
    }

    #[test]
    fn unimodular_inverse_examples() {
        let i2 = PolyMatrix::identity(2);
        assert_eq!(unimodular_inverse(&i2).unwrap(), i2);

        let m = pm(&["1, D", "0, 1"]);
        assert_eq!(unimodular_inverse(&m).unwrap(), m);

        let m = pm(&["1, 1+D", "1, D"]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(inv, pm(&["D, 1+D", "1, 1"]));
        assert_eq!(m.mul(&inv), i2);

        let err = unimodular_inverse(&pm(&["1+D, 0", "0, 1"])).unwrap_err();
        assert!(matches!(err, MatrixError::NotUnimodular(_)));
    }

    #[test]
    fn randomized_roundtrips() {
        let mut state = 0x5eed_1234_u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let rows = 1 + (rnd() % 6) as usize;
            let cols = 1 + (rnd() % 6) as usize;
            let mut m = PolyMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    let mut exps = vec![];
                    for e in 0..=3i64 {
                        if rnd() % 2 == 0 {
                            exps.push(e);
                        }
                    }
                    m.set(r, c, LaurentPoly::from_exponents(&exps));
                }
            }
            check_roundtrip(&m);
        }
    }
}
