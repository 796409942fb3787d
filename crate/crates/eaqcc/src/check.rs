//! Quantum check matrices, the shifted symplectic product, and gate
//! action as paired column operations.
//!
//! A check matrix is a `(Z | X)` pair of equally shaped matrices whose
//! rows are Pauli sequences: the coefficient of `D^t` in entry `(r, q)`
//! says that row `r` touches qubit `q` of frame `t` (on the Z or X side).
//!
//! The shifted symplectic product of rows `u`, `v` is
//!
//! ```text
//! <u, v> = z_u(D) . x_v(D^-1)^T + x_u(D) . z_v(D^-1)^T
//! ```
//!
//! whose coefficient at `D^j` is the anticommutation parity between `u`
//! and `v` delayed by `j` frames. Column operations that come from gates
//! leave every such product unchanged; row operations transform the Gram
//! matrix congruently.

use std::fmt;

use thiserror::Error;

use crate::laurent::{LaurentPoly, PolyError};
use crate::matrix::{Coeff, Matrix, PolyMatrix};
use crate::ratfunc::{parse_rational, RationalFunc};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GateError {
    #[error("gate addresses Bob's qubit {0} (first {1} qubits are protected)")]
    BobQubit(usize, usize),
    #[error("CNOT control and target coincide at qubit {0}")]
    SelfTarget(usize),
    #[error("CNOT tap polynomial is zero")]
    ZeroTap,
    #[error("infinite-depth gamma {0} is a unit; use finite-depth gates")]
    UnitGamma(String),
    #[error("qubit {0} out of range ({1} qubits)")]
    QubitRange(usize, usize),
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CheckParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Poly {
        line: usize,
        #[source]
        source: PolyError,
    },
}

/// Paired Z|X polynomial matrices over `n` qubits per frame.
#[derive(Clone, PartialEq, Eq)]
pub struct CheckMatrix<T: Coeff = LaurentPoly> {
    pub z: Matrix<T>,
    pub x: Matrix<T>,
}

pub type RatCheckMatrix = CheckMatrix<RationalFunc>;

impl<T: Coeff> fmt::Debug for CheckMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_check_matrix(self))
    }
}

impl<T: Coeff> CheckMatrix<T> {
    pub fn new(z: Matrix<T>, x: Matrix<T>) -> Self {
        assert_eq!(z.rows(), x.rows(), "Z and X must have equal shape");
        assert_eq!(z.cols(), x.cols(), "Z and X must have equal shape");
        CheckMatrix { z, x }
    }

    pub fn zero(rows: usize, n: usize) -> Self {
        CheckMatrix {
            z: Matrix::zero(rows, n),
            x: Matrix::zero(rows, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.z.rows()
    }

    pub fn qubits(&self) -> usize {
        self.z.cols()
    }

    /// Shifted symplectic product between row `a` of `self` and row `b`
    /// of `other` (matrices must share the qubit count).
    pub fn row_product(&self, a: usize, other: &Self, b: usize) -> T {
        assert_eq!(self.qubits(), other.qubits(), "row length mismatch");
        let mut acc = T::zero();
        for q in 0..self.qubits() {
            let t1 = self.z.get(a, q).mul(&other.x.get(b, q).conjugate());
            let t2 = self.x.get(a, q).mul(&other.z.get(b, q).conjugate());
            acc = acc.add(&t1).add(&t2);
        }
        acc
    }

    /// Gram matrix of all pairwise shifted symplectic products.
    pub fn gram(&self) -> Matrix<T> {
        let mut g = Matrix::zero(self.rows(), self.rows());
        for i in 0..self.rows() {
            for j in 0..self.rows() {
                g.set(i, j, self.row_product(i, self, j));
            }
        }
        g
    }

    /// True iff every ordered row pair (including self-pairs) commutes at
    /// every shift. Violations are reported as `(row_i, row_j, product)`.
    pub fn commutation_violations(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for i in 0..self.rows() {
            for j in 0..self.rows() {
                let p = self.row_product(i, self, j);
                if !p.is_zero() {
                    out.push((i, j, p));
                }
            }
        }
        out
    }

    pub fn is_commuting(&self) -> bool {
        self.commutation_violations().is_empty()
    }

    /// Restriction to a qubit range.
    pub fn qubit_range(&self, q0: usize, q1: usize) -> Self {
        CheckMatrix {
            z: self.z.submatrix(0, self.rows(), q0, q1),
            x: self.x.submatrix(0, self.rows(), q0, q1),
        }
    }

    pub fn row_range(&self, r0: usize, r1: usize) -> Self {
        CheckMatrix {
            z: self.z.submatrix(r0, r1, 0, self.qubits()),
            x: self.x.submatrix(r0, r1, 0, self.qubits()),
        }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        CheckMatrix {
            z: self.z.vstack(&other.z),
            x: self.x.vstack(&other.x),
        }
    }

    /// Side-by-side `[Z | X]` matrix, the representation used for rank
    /// and row-equivalence questions.
    pub fn joined(&self) -> Matrix<T> {
        self.z.hstack(&self.x)
    }

    /// `row[dst] += coef * row[src]`, applied to both halves.
    pub fn add_row_mul(&mut self, src: usize, dst: usize, coef: &T) {
        self.z.add_row_mul(src, dst, coef);
        self.x.add_row_mul(src, dst, coef);
    }

    pub fn scale_row(&mut self, r: usize, coef: &T) {
        self.z.scale_row(r, coef);
        self.x.scale_row(r, coef);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.z.swap_rows(a, b);
        self.x.swap_rows(a, b);
    }
}

impl CheckMatrix<LaurentPoly> {
    pub fn to_rational(&self) -> RatCheckMatrix {
        CheckMatrix {
            z: self.z.to_rational(),
            x: self.x.to_rational(),
        }
    }

    pub fn rank(&self) -> usize {
        self.joined().rank()
    }
}

impl RatCheckMatrix {
    /// Scales each row by a power of `D` so its lowest frame index is 0.
    /// A generator times a unit is the same generator, so this changes
    /// nothing semantic while keeping finite windows small.
    pub fn normalize_row_valuations(&self) -> RatCheckMatrix {
        let mut out = self.clone();
        for r in 0..self.rows() {
            let mut v: Option<i64> = None;
            for q in 0..self.qubits() {
                for side in [&self.z, &self.x] {
                    let e = side.get(r, q);
                    if let Some(val) = e.numerator().valuation() {
                        v = Some(v.map_or(val, |x: i64| x.min(val)));
                    }
                }
            }
            if let Some(v) = v.filter(|&v| v != 0) {
                let unit = RationalFunc::from_poly(LaurentPoly::monomial(-v));
                out.scale_row(r, &unit);
            }
        }
        out
    }

    pub fn to_poly(&self) -> Option<CheckMatrix<LaurentPoly>> {
        Some(CheckMatrix {
            z: self.z.to_poly()?,
            x: self.x.to_poly()?,
        })
    }

    /// Clears denominators row by row (each row scaled by the least
    /// common denominator of its entries). Scaling rows by nonzero
    /// polynomials preserves the fraction-field row space; it yields the
    /// subcode relation when the scaling is not a unit.
    pub fn clear_denominators(&self) -> CheckMatrix<LaurentPoly> {
        let mut z = PolyMatrix::zero(self.rows(), self.qubits());
        let mut x = PolyMatrix::zero(self.rows(), self.qubits());
        for r in 0..self.rows() {
            let mut lcd = LaurentPoly::one();
            for q in 0..self.qubits() {
                for den in [
                    self.z.get(r, q).denominator(),
                    self.x.get(r, q).denominator(),
                ] {
                    let g = lcd.gcd(den);
                    lcd = lcd.mul(&den.div_exact(&g).unwrap());
                }
            }
            for q in 0..self.qubits() {
                for (side, target) in [(&self.z, &mut z), (&self.x, &mut x)] {
                    let v = side.get(r, q);
                    let p = v.numerator().mul(&lcd.div_exact(v.denominator()).unwrap());
                    target.set(r, q, p);
                }
            }
        }
        CheckMatrix { z, x }
    }
}

/// Gate alphabet of the shift-invariant Clifford operations the
/// constructions use. Qubits are 0-indexed with Bob's first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateOp {
    Hadamard(usize),
    Cnot {
        control: usize,
        target: usize,
        tap: LaurentPoly,
    },
    Swap(usize, usize),
    InfiniteDepth {
        qubit: usize,
        gamma: LaurentPoly,
    },
}

impl GateOp {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Hadamard(q) => vec![*q],
            GateOp::Cnot {
                control, target, ..
            } => vec![*control, *target],
            GateOp::Swap(a, b) => vec![*a, *b],
            GateOp::InfiniteDepth { qubit, .. } => vec![*qubit],
        }
    }

    pub fn is_infinite_depth(&self) -> bool {
        matches!(self, GateOp::InfiniteDepth { .. })
    }

    /// Shifts every qubit index by `offset`.
    pub fn offset(&self, offset: usize) -> GateOp {
        match self {
            GateOp::Hadamard(q) => GateOp::Hadamard(q + offset),
            GateOp::Cnot {
                control,
                target,
                tap,
            } => GateOp::Cnot {
                control: control + offset,
                target: target + offset,
                tap: tap.clone(),
            },
            GateOp::Swap(a, b) => GateOp::Swap(a + offset, b + offset),
            GateOp::InfiniteDepth { qubit, gamma } => GateOp::InfiniteDepth {
                qubit: qubit + offset,
                gamma: gamma.clone(),
            },
        }
    }

    pub fn validate(&self) -> Result<(), GateError> {
        match self {
            GateOp::Cnot {
                control,
                target,
                tap,
            } => {
                if control == target {
                    return Err(GateError::SelfTarget(*control));
                }
                if tap.is_zero() {
                    return Err(GateError::ZeroTap);
                }
                Ok(())
            }
            GateOp::InfiniteDepth { gamma, .. } => {
                if gamma.is_unit() || gamma.is_zero() {
                    return Err(GateError::UnitGamma(gamma.render()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Bit-exact line format used by reports and gate-list files.
    pub fn render(&self) -> String {
        match self {
            GateOp::Hadamard(q) => format!("H q{q}"),
            GateOp::Cnot {
                control,
                target,
                tap,
            } => {
                format!("CNOT q{control} -> q{target} tap {tap}")
            }
            GateOp::Swap(a, b) => format!("SWAP q{a} q{b}"),
            GateOp::InfiniteDepth { qubit, gamma } => {
                format!("INFD q{qubit} gamma {gamma}")
            }
        }
    }

    pub fn parse(line: &str) -> Result<GateOp, String> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let qubit = |t: &str| -> Result<usize, String> {
            t.strip_prefix('q')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("expected qubit token, found `{t}`"))
        };
        match toks.as_slice() {
            ["H", q] => Ok(GateOp::Hadamard(qubit(q)?)),
            ["CNOT", a, "->", b, "tap", rest @ ..] if !rest.is_empty() => {
                let tap = LaurentPoly::parse(&rest.join("")).map_err(|e| e.to_string())?;
                Ok(GateOp::Cnot {
                    control: qubit(a)?,
                    target: qubit(b)?,
                    tap,
                })
            }
            ["SWAP", a, b] => Ok(GateOp::Swap(qubit(a)?, qubit(b)?)),
            ["INFD", q, "gamma", rest @ ..] if !rest.is_empty() => {
                let gamma = LaurentPoly::parse(&rest.join("")).map_err(|e| e.to_string())?;
                Ok(GateOp::InfiniteDepth {
                    qubit: qubit(q)?,
                    gamma,
                })
            }
            _ => Err(format!("unrecognized gate line `{line}`")),
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Applies a gate to a rational check matrix.
///
/// - `Hadamard(i)`: swap Z column i and X column i.
/// - `Cnot(a -> b, t)`: `X_b += t(D) X_a` and `Z_a += t(D^-1) Z_b`.
/// - `Swap(a, b)`: swap columns a and b on both sides.
/// - `InfiniteDepth(i, g)`: `Z_i *= 1/g(D^-1)`, `X_i *= g(D)`.
pub fn apply_gate(m: &mut RatCheckMatrix, gate: &GateOp) -> Result<(), GateError> {
    gate.validate()?;
    let n = m.qubits();
    for q in gate.qubits() {
        if q >= n {
            return Err(GateError::QubitRange(q, n));
        }
    }
    match gate {
        GateOp::Hadamard(q) => {
            for r in 0..m.rows() {
                let z = m.z.get(r, *q).clone();
                let x = m.x.get(r, *q).clone();
                m.z.set(r, *q, x);
                m.x.set(r, *q, z);
            }
        }
        GateOp::Swap(a, b) => {
            m.z.swap_cols(*a, *b);
            m.x.swap_cols(*a, *b);
        }
        GateOp::Cnot {
            control,
            target,
            tap,
        } => {
            let t = RationalFunc::from_poly(tap.clone());
            let tc = RationalFunc::from_poly(tap.conjugate());
            m.x.add_col_mul(*control, *target, &t);
            m.z.add_col_mul(*target, *control, &tc);
        }
        GateOp::InfiniteDepth { qubit, gamma } => {
            let xg = RationalFunc::from_poly(gamma.clone());
            let zg = RationalFunc::from_poly(gamma.conjugate())
                .inverse()
                .expect("nonzero gamma");
            for r in 0..m.rows() {
                m.z.set(r, *qubit, m.z.get(r, *qubit).mul(&zg));
                m.x.set(r, *qubit, m.x.get(r, *qubit).mul(&xg));
            }
        }
    }
    Ok(())
}

/// Stabilizer plus information-qubit matrix tracked jointly through a
/// circuit. Gates may not address the first `bob_qubits` qubits.
#[derive(Clone, Debug)]
pub struct TrackedPair {
    pub stabilizer: RatCheckMatrix,
    pub info: RatCheckMatrix,
    pub bob_qubits: usize,
}

impl TrackedPair {
    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<(), GateError> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q < self.bob_qubits) {
            return Err(GateError::BobQubit(q, self.bob_qubits));
        }
        apply_gate(&mut self.stabilizer, gate)?;
        apply_gate(&mut self.info, gate)
    }

    pub fn apply_gates(&mut self, gates: &[GateOp]) -> Result<(), GateError> {
        for g in gates {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// Every stabilizer row must commute with every info row.
    pub fn stabilizer_info_products_vanish(&self) -> bool {
        for i in 0..self.stabilizer.rows() {
            for j in 0..self.info.rows() {
                if !self.stabilizer.row_product(i, &self.info, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Check-matrix file format:
///
/// ```text
/// checkmatrix n=<n> rows=<r>
/// Z: p1,...,pn ; X: p1,...,pn
/// ```
pub fn render_check_matrix<T: Coeff>(m: &CheckMatrix<T>) -> String {
    let mut out = format!("checkmatrix n={} rows={}\n", m.qubits(), m.rows());
    for r in 0..m.rows() {
        let zs: Vec<String> = (0..m.qubits()).map(|q| m.z.get(r, q).to_string()).collect();
        let xs: Vec<String> = (0..m.qubits()).map(|q| m.x.get(r, q).to_string()).collect();
        out.push_str(&format!("Z: {} ; X: {}\n", zs.join(","), xs.join(",")));
    }
    out
}

pub fn parse_check_matrix(text: &str) -> Result<RatCheckMatrix, CheckParseError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| CheckParseError::Line {
        line: 1,
        msg: "empty input".into(),
    })?;
    let header = header.trim();
    let bad_header = |msg: &str| CheckParseError::Line {
        line: 1,
        msg: msg.to_string(),
    };
    let rest = header
        .strip_prefix("checkmatrix ")
        .ok_or_else(|| bad_header("expected `checkmatrix n=<n> rows=<r>`"))?;
    let mut n = None;
    let mut rows = None;
    for tok in rest.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = tok.strip_prefix("rows=") {
            rows = v.parse::<usize>().ok();
        }
    }
    let n = n.ok_or_else(|| bad_header("missing or bad n="))?;
    let rows = rows.ok_or_else(|| bad_header("missing or bad rows="))?;

    let mut z_rows = Vec::with_capacity(rows);
    let mut x_rows = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (idx, line) = lines.next().ok_or_else(|| CheckParseError::Line {
            line: rows + 1,
            msg: format!("expected {rows} rows"),
        })?;
        let lineno = idx + 1;
        let line = line.trim();
        let body = line
            .strip_prefix("Z:")
            .ok_or_else(|| CheckParseError::Line {
                line: lineno,
                msg: "row must start with `Z:`".into(),
            })?;
        let (zpart, xpart) = body.split_once(';').ok_or_else(|| CheckParseError::Line {
            line: lineno,
            msg: "row must contain `; X:`".into(),
        })?;
        let xpart = xpart
            .trim()
            .strip_prefix("X:")
            .ok_or_else(|| CheckParseError::Line {
                line: lineno,
                msg: "second half must start with `X:`".into(),
            })?;
        let parse_half = |half: &str| -> Result<Vec<RationalFunc>, CheckParseError> {
            half.split(',')
                .map(|s| {
                    parse_rational(s.trim()).map_err(|e| CheckParseError::Poly {
                        line: lineno,
                        source: e,
                    })
                })
                .collect()
        };
        let zr = parse_half(zpart)?;
        let xr = parse_half(xpart)?;
        if zr.len() != n || xr.len() != n {
            return Err(CheckParseError::Line {
                line: lineno,
                msg: format!("expected {n} entries per half"),
            });
        }
        z_rows.push(zr);
        x_rows.push(xr);
    }
    if let Some((idx, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(CheckParseError::Line {
            line: idx + 1,
            msg: format!("unexpected trailing content `{}`", extra.trim()),
        });
    }
    Ok(CheckMatrix::new(
        Matrix::from_rows(z_rows),
        Matrix::from_rows(x_rows),
    ))
}
