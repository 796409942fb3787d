//! Superdense-coding piggyback operators on the extra-entanglement
//! generators.
//!
//! The operators live on the `s` unit-factor ebit pairs: row `i` puts an
//! X on Alice's half of extra ebit `i` and the conjugate-transposed
//! `E_1a'` block (times `Gamma_1`) on the Z side. Against the stabilizer
//! at the finale stage they anticommute with exactly one Z-type
//! extra-entanglement row each (shifted symplectic product identity
//! pattern `[I | 0]`) and commute with every other generator, so setting
//! a bit disturbs nothing the code needs. Measuring the extra ebit pairs
//! reveals the bits. Piggybacking only works on rows untouched by
//! infinite-depth operations, so it never extends to the `Gamma_2` rows.

use thiserror::Error;

use crate::check::{apply_gate, CheckMatrix, GateError, RatCheckMatrix};
use crate::construction::EncoderArtifact;
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::ratfunc::RationalFunc;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum EnhanceError {
    #[error("no extra-entanglement rows to piggyback on (s = 0)")]
    NoExtraEntanglement,
    #[error(
        "internal consistency: piggyback commutation pattern failed at \
         operator {op}, stabilizer row {row}: product {product}"
    )]
    CommutationCheck {
        op: usize,
        row: usize,
        product: String,
    },
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// The piggyback operators with both parameter readings.
#[derive(Clone)]
pub struct PiggybackSet {
    /// Operators against the finale (pre-reversal) stabilizer state.
    pub operators: CheckMatrix<LaurentPoly>,
    /// The same operators pushed through the remaining encoder gates.
    pub encoded_operators: RatCheckMatrix,
    pub bit_count: usize,
    pub enhanced: EnhancedParams,
}

/// `[[n,k:s;c]]` classically-enhanced parameters plus the teleportation
/// reading `[[n,k+s/2;c+s/2]]` when `s` is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnhancedParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub c: usize,
}

impl EnhancedParams {
    pub fn enhanced_string(&self) -> String {
        format!("[[{},{}:{};{}]]", self.n, self.k, self.s, self.c)
    }

    /// Present only when `s` is even: one extra qubit per two bits.
    pub fn teleport_string(&self) -> Option<String> {
        (self.s > 0 && self.s.is_multiple_of(2)).then(|| {
            format!(
                "[[{},{};{}]]",
                self.n,
                self.k + self.s / 2,
                self.c + self.s / 2
            )
        })
    }
}

pub fn enhanced_params(artifact: &EncoderArtifact) -> EnhancedParams {
    EnhancedParams {
        n: artifact.dims.n,
        k: artifact.dims.k,
        s: artifact.dims.s,
        c: artifact.dims.c,
    }
}

/// Builds the piggyback operators and verifies both commutation
/// invariants before returning.
pub fn build_piggyback(artifact: &EncoderArtifact) -> Result<PiggybackSet, EnhanceError> {
    let dims = artifact.dims;
    let (n, c, s) = (dims.n, dims.c, dims.s);
    if s == 0 {
        return Err(EnhanceError::NoExtraEntanglement);
    }
    let total = n + c;

    // Z block: E_1a'^T(D^-1) Gamma_1(D) on Alice's s columns; X block:
    // identity on the same columns.
    let zblock = artifact.record.e1a_prime.conj_transpose();
    let mut ops = CheckMatrix::<LaurentPoly>::zero(s, total);
    for i in 0..s {
        for j in 0..s {
            let v = zblock.get(i, j).mul(&artifact.record.gamma1[j]);
            ops.z.set(i, c + j, v);
        }
        ops.x.set(i, c + i, LaurentPoly::one());
    }

    // The shifted symplectic products against the finale stabilizer must
    // form [I_s | 0]: identity on the Z-type extra-entanglement rows,
    // zero elsewhere.
    let finale = &artifact.finale.stabilizer;
    let ops_rat = ops.to_rational();
    for i in 0..s {
        for row in 0..finale.rows() {
            let product = ops_rat.row_product(i, finale, row);
            let expected_one = row == i;
            let ok = if expected_one {
                product.is_one()
            } else {
                product.is_zero()
            };
            if !ok {
                return Err(EnhanceError::CommutationCheck {
                    op: i,
                    row,
                    product: product.to_string(),
                });
            }
        }
    }

    // Encoded versions: apply the rest of the encoding circuit (the
    // reversed stage-1 gates) to the operators.
    let mut encoded = ops_rat.clone();
    for g in artifact
        .record
        .gates_stage1
        .iter()
        .rev()
        .map(|g| g.offset(c))
    {
        apply_gate(&mut encoded, &g)?;
    }

    Ok(PiggybackSet {
        operators: ops,
        encoded_operators: encoded,
        bit_count: s,
        enhanced: enhanced_params(artifact),
    })
}

/// The s x rows product pattern against the finale stabilizer, reported
/// for golden tests: entry (i, j) of `[I | 0]`.
pub fn product_pattern(set: &PiggybackSet, artifact: &EncoderArtifact) -> Matrix<RationalFunc> {
    let finale = &artifact.finale.stabilizer;
    let ops = set.operators.to_rational();
    let mut g = Matrix::zero(set.bit_count, finale.rows());
    for i in 0..set.bit_count {
        for j in 0..finale.rows() {
            g.set(i, j, ops.row_product(i, finale, j));
        }
    }
    g
}
