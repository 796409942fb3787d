//! Finite-window brute-force verification.
//!
//! Polynomial rows unroll to concrete binary Pauli strings over a window
//! of frames; the anticommutation parity of two unrolled strings at a
//! relative frame shift must reproduce the corresponding coefficient of
//! the symbolic shifted symplectic product. Rational entries (from
//! infinite-depth operations) expand as power series truncated at the
//! window edge; their X sides stay polynomial throughout this toolkit,
//! which keeps every reported parity a finite exact sum.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::check::{CheckMatrix, RatCheckMatrix};
use crate::laurent::LaurentPoly;
use crate::matrix::Coeff;
use crate::ratfunc::RationalFunc;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OracleError {
    #[error(
        "window too small: row {row} qubit {qubit} has support at D^{exp}, \
         allowed range is [{lo}, {hi})"
    )]
    WindowTooSmall {
        row: usize,
        qubit: usize,
        exp: i64,
        lo: i64,
        hi: i64,
    },
}

/// One row of a check matrix unrolled over frame slots `[lo, hi)`.
/// Slot `(q, t)` is bit `q * span + (t - lo)`.
#[derive(Clone, Debug)]
pub struct UnrolledRow {
    pub zbits: Vec<bool>,
    pub xbits: Vec<bool>,
    lo: i64,
    hi: i64,
    qubits: usize,
    /// True where an entry was an infinite series cut at the window edge.
    pub truncated: bool,
}

impl UnrolledRow {
    fn span(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    fn bit(bits: &[bool], span: usize, lo: i64, q: usize, t: i64) -> bool {
        if t < lo || t >= lo + span as i64 {
            return false;
        }
        bits[q * span + (t - lo) as usize]
    }

    pub fn z(&self, q: usize, t: i64) -> bool {
        Self::bit(&self.zbits, self.span(), self.lo, q, t)
    }

    pub fn x(&self, q: usize, t: i64) -> bool {
        Self::bit(&self.xbits, self.span(), self.lo, q, t)
    }

    /// Pauli letters for frames `[0, w)`, e.g. `ZXZI|ZZIZ`.
    pub fn pauli_string(&self, w: i64) -> String {
        let mut frames = Vec::new();
        for t in 0..w {
            let mut s = String::new();
            for q in 0..self.qubits {
                s.push(match (self.z(q, t), self.x(q, t)) {
                    (false, false) => 'I',
                    (false, true) => 'X',
                    (true, false) => 'Z',
                    (true, true) => 'Y',
                });
            }
            frames.push(s);
        }
        frames.join("|")
    }
}

/// Unrolled view of a whole check matrix.
#[derive(Clone, Debug)]
pub struct UnrolledWindow {
    pub rows: Vec<UnrolledRow>,
    pub window: i64,
    pub guard: i64,
    pub qubits: usize,
}

/// Unrolls with window `w` and slot range `[-(g + margin), w + g + margin)`
/// where `g = w / 4`; polynomial supports must fit `[-g, w + g)`, shifted
/// copies up to `margin` then stay inside the slots.
pub fn unroll<T: Coeff + SeriesEntry>(
    m: &CheckMatrix<T>,
    window: i64,
    max_shift: i64,
) -> Result<UnrolledWindow, OracleError> {
    let guard = window / 4;
    let lo = -(guard + max_shift.abs());
    let hi = window + guard + max_shift.abs();
    let span = (hi - lo) as usize;
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut zbits = vec![false; m.qubits() * span];
        let mut xbits = vec![false; m.qubits() * span];
        let mut truncated = false;
        for q in 0..m.qubits() {
            for (bits, entry) in [(&mut zbits, m.z.get(r, q)), (&mut xbits, m.x.get(r, q))] {
                match entry.support_kind() {
                    SupportKind::Finite(exps) => {
                        for e in exps {
                            if e < -guard || e >= window + guard {
                                return Err(OracleError::WindowTooSmall {
                                    row: r,
                                    qubit: q,
                                    exp: e,
                                    lo: -guard,
                                    hi: window + guard,
                                });
                            }
                            bits[q * span + (e - lo) as usize] = true;
                        }
                    }
                    SupportKind::Series(f) => {
                        truncated = true;
                        for (e, v) in f(lo, hi) {
                            if v {
                                bits[q * span + (e - lo) as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        rows.push(UnrolledRow {
            zbits,
            xbits,
            lo,
            hi,
            qubits: m.qubits(),
            truncated,
        });
    }
    Ok(UnrolledWindow {
        rows,
        window,
        guard,
        qubits: m.qubits(),
    })
}

/// Lazily evaluated series coefficients on a slot range.
pub type SeriesFn = Box<dyn Fn(i64, i64) -> Vec<(i64, bool)>>;

pub enum SupportKind {
    Finite(Vec<i64>),
    Series(SeriesFn),
}

/// Exposes entry supports to the unroller without committing to a scalar.
pub trait SeriesEntry {
    fn support_kind(&self) -> SupportKind;
}

impl SeriesEntry for LaurentPoly {
    fn support_kind(&self) -> SupportKind {
        SupportKind::Finite(self.support().to_vec())
    }
}

impl SeriesEntry for RationalFunc {
    fn support_kind(&self) -> SupportKind {
        if let Some(p) = self.as_poly() {
            SupportKind::Finite(p.support().to_vec())
        } else {
            let me = self.clone();
            SupportKind::Series(Box::new(move |lo, hi| me.series_window(lo, hi)))
        }
    }
}

impl UnrolledWindow {
    /// Anticommutation parity of row `a` against row `b` delayed by `j`
    /// frames: sum over slots of `z_a(q,t) x_b(q,t-j) + x_a(q,t) z_b(q,t-j)`.
    pub fn parity(&self, a: usize, b: usize, j: i64) -> bool {
        let ra = &self.rows[a];
        let rb = &self.rows[b];
        let mut p = false;
        for q in 0..self.qubits {
            for t in ra.lo..ra.hi {
                if ra.z(q, t) && rb.x(q, t - j) {
                    p = !p;
                }
                if ra.x(q, t) && rb.z(q, t - j) {
                    p = !p;
                }
            }
        }
        p
    }
}

/// One disagreement between oracle and symbolic product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub row_a: usize,
    pub row_b: usize,
    pub shift: i64,
    pub symbolic: bool,
    pub oracle: bool,
}

/// Compares every row pair at every shift in `[-max_shift, max_shift]`
/// against the symbolic shifted symplectic product.
///
/// Series entries only ever appear on Z sides here, so each parity is a
/// finite sum as long as every X support fits the guarded window; that is
/// checked by `unroll`, making the reported parities exact.
pub fn commutation_oracle(
    m: &RatCheckMatrix,
    window: i64,
    max_shift: i64,
) -> Result<Vec<Mismatch>, OracleError> {
    let un = unroll(m, window, max_shift)?;
    let mut out = Vec::new();
    for a in 0..m.rows() {
        for b in 0..m.rows() {
            let product = m.row_product(a, &m.clone(), b);
            for j in -max_shift..=max_shift {
                let symbolic = symbolic_coeff(&product, j);
                let oracle = un.parity(a, b, j);
                if symbolic != oracle {
                    out.push(Mismatch {
                        row_a: a,
                        row_b: b,
                        shift: j,
                        symbolic,
                        oracle,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn symbolic_coeff(p: &RationalFunc, j: i64) -> bool {
    if let Some(poly) = p.as_poly() {
        poly.coeff(j)
    } else {
        p.series_window(j, j + 1).iter().any(|&(e, v)| e == j && v)
    }
}

/// Single-qubit Pauli error at (qubit, frame).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ErrorKind {
    X,
    Y,
    Z,
}

impl ErrorKind {
    pub fn all() -> [ErrorKind; 3] {
        [ErrorKind::X, ErrorKind::Y, ErrorKind::Z]
    }

    pub fn letter(&self) -> char {
        match self {
            ErrorKind::X => 'X',
            ErrorKind::Y => 'Y',
            ErrorKind::Z => 'Z',
        }
    }

    fn bits(&self) -> (bool, bool) {
        match self {
            ErrorKind::X => (false, true),
            ErrorKind::Y => (true, true),
            ErrorKind::Z => (true, false),
        }
    }
}

pub type SyndromeKey = (usize, i64, ErrorKind);

/// Map from single-qubit errors to syndrome bit vectors. The syndrome of
/// an error is its parity against every (row, shift) pair, rows major,
/// shifts ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeTable {
    pub window: i64,
    pub max_shift: i64,
    pub rows: usize,
    pub entries: BTreeMap<SyndromeKey, Vec<bool>>,
}

impl SyndromeTable {
    /// Groups error keys by identical syndrome. The partition is the
    /// error-distinguishing power of the generator set.
    pub fn partition(&self) -> BTreeMap<Vec<bool>, Vec<SyndromeKey>> {
        let mut out: BTreeMap<Vec<bool>, Vec<SyndromeKey>> = BTreeMap::new();
        for (k, v) in &self.entries {
            out.entry(v.clone()).or_default().push(*k);
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for ((q, t, kind), bits) in &self.entries {
            let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            out.push_str(&format!("err q{q} f{t} {} -> {s}\n", kind.letter()));
        }
        out
    }
}

/// Builds the syndrome table of `m` for all weight-1 errors with frames
/// in `[0, window)`.
pub fn syndrome_table(
    m: &RatCheckMatrix,
    window: i64,
    max_shift: i64,
) -> Result<SyndromeTable, OracleError> {
    let un = unroll(m, window, max_shift)?;
    let mut entries = BTreeMap::new();
    for q in 0..m.qubits() {
        for t in 0..window {
            for kind in ErrorKind::all() {
                let (ez, ex) = kind.bits();
                let mut bits = Vec::with_capacity(m.rows() * (2 * max_shift as usize + 1));
                for r in 0..m.rows() {
                    let row = &un.rows[r];
                    for j in -max_shift..=max_shift {
                        // parity of error vs row delayed by j
                        let mut p = false;
                        if ez && row.x(q, t - j) {
                            p = !p;
                        }
                        if ex && row.z(q, t - j) {
                            p = !p;
                        }
                        bits.push(p);
                    }
                }
                entries.insert((q, t, kind), bits);
            }
        }
    }
    Ok(SyndromeTable {
        window,
        max_shift,
        rows: m.rows(),
        entries,
    })
}

/// Applies a recorded invertible row transform to a syndrome table:
/// row `i` of the image is `sum_m R[i,m](D) . row m`, which convolves
/// syndrome bits over shifts. Shifts that would read outside the table
/// are dropped, so compare with [`trim_shifts`]-matched tables.
pub fn transform_table(
    table: &SyndromeTable,
    transform: &crate::matrix::PolyMatrix,
    keep_shift: i64,
) -> SyndromeTable {
    let w = table.max_shift;
    let rows_out = transform.rows();
    let mut entries = BTreeMap::new();
    for (key, bits) in &table.entries {
        let get = |r: usize, j: i64| -> bool {
            if j < -w || j > w {
                false
            } else {
                bits[r * (2 * w as usize + 1) + (j + w) as usize]
            }
        };
        let mut out = Vec::new();
        for i in 0..rows_out {
            for j in -keep_shift..=keep_shift {
                let mut p = false;
                for m in 0..transform.cols() {
                    // the pairing is sesquilinear in its second slot:
                    // <e, D^tau g> reads the syndrome of g at shift j + tau
                    for &tau in transform.get(i, m).support() {
                        if get(m, j + tau) {
                            p = !p;
                        }
                    }
                }
                out.push(p);
            }
        }
        entries.insert(*key, out);
    }
    SyndromeTable {
        window: table.window,
        max_shift: keep_shift,
        rows: rows_out,
        entries,
    }
}

/// Weight-2 syndrome table for tiny codes: the syndrome of a two-error
/// pattern is the XOR of the single-error syndromes, so the table is
/// derived from the weight-1 map over unordered distinct key pairs.
pub fn syndrome_table_weight2(
    table: &SyndromeTable,
) -> BTreeMap<(SyndromeKey, SyndromeKey), Vec<bool>> {
    let keys: Vec<&SyndromeKey> = table.entries.keys().collect();
    let mut out = BTreeMap::new();
    for (i, &a) in keys.iter().enumerate() {
        for &b in keys.iter().skip(i + 1) {
            let bits = table.entries[a]
                .iter()
                .zip(&table.entries[b])
                .map(|(&x, &y)| x ^ y)
                .collect();
            out.insert((*a, *b), bits);
        }
    }
    out
}

/// Restricts a table to shifts `[-keep, keep]`.
pub fn trim_shifts(table: &SyndromeTable, keep: i64) -> SyndromeTable {
    let w = table.max_shift;
    assert!(keep <= w);
    let mut entries = BTreeMap::new();
    for (key, bits) in &table.entries {
        let mut out = Vec::new();
        for r in 0..table.rows {
            for j in -keep..=keep {
                out.push(bits[r * (2 * w as usize + 1) + (j + w) as usize]);
            }
        }
        entries.insert(*key, out);
    }
    SyndromeTable {
        window: table.window,
        max_shift: keep,
        rows: table.rows,
        entries,
    }
}
