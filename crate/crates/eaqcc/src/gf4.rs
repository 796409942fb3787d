//! Import of classical quaternary convolutional generators as quantum
//! check matrices.
//!
//! A generator row over GF(4) = {0, 1, w, W} (w for omega, W for its
//! conjugate) is multiplied by W and by w, and each multiple becomes one
//! check-matrix row under the map 0 -> I, w -> X, 1 -> Y, W -> Z. Field
//! arithmetic: w^2 = W, W^2 = w, w*W = 1, 1 + w + W = 0.
//!
//! Hermitian self-orthogonality is deliberately not checked: with shared
//! entanglement an arbitrary quaternary code imports.

use std::fmt;

use thiserror::Error;

use crate::check::CheckMatrix;
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Gf4Error {
    #[error("frame {0} has length {1}, expected {2}")]
    RaggedFrame(usize, usize, usize),
    #[error("bad GF(4) symbol `{0}` (alphabet: 0 1 w W)")]
    BadSymbol(char),
    #[error("generator has no nonzero symbol")]
    AllZero,
    #[error("bad gf4 file header: {0}")]
    Header(String),
    #[error("declared n={0} but frames have length {1}")]
    WidthMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gf4 {
    Zero,
    One,
    Omega,
    OmegaBar,
}

impl Gf4 {
    /// GF(4) product with w^2 = W, W^2 = w, w * W = 1.
    pub fn times(self, other: Gf4) -> Gf4 {
        use Gf4::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (One, x) | (x, One) => x,
            (Omega, Omega) => OmegaBar,
            (OmegaBar, OmegaBar) => Omega,
            (Omega, OmegaBar) | (OmegaBar, Omega) => One,
        }
    }

    fn from_char(c: char) -> Result<Gf4, Gf4Error> {
        match c {
            '0' => Ok(Gf4::Zero),
            '1' => Ok(Gf4::One),
            'w' => Ok(Gf4::Omega),
            'W' => Ok(Gf4::OmegaBar),
            other => Err(Gf4Error::BadSymbol(other)),
        }
    }

    /// Character form used by the file grammar.
    pub fn symbol_char(self) -> char {
        match self {
            Gf4::Zero => '0',
            Gf4::One => '1',
            Gf4::Omega => 'w',
            Gf4::OmegaBar => 'W',
        }
    }

    /// Pauli image under 0 -> I, w -> X, 1 -> Y, W -> Z, reported as
    /// (z-bit, x-bit).
    pub fn pauli_bits(self) -> (bool, bool) {
        match self {
            Gf4::Zero => (false, false),
            Gf4::Omega => (false, true),
            Gf4::One => (true, true),
            Gf4::OmegaBar => (true, false),
        }
    }
}

/// A quaternary convolutional generator: equal-length frames of GF(4)
/// symbols, frame 0 leftmost, surrounding all-zero frames dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf4Generator {
    frames: Vec<Vec<Gf4>>,
    n: usize,
}

impl Gf4Generator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frames(&self) -> &[Vec<Gf4>] {
        &self.frames
    }

    /// Parses `frame ("|" frame)*` over the alphabet {0, 1, w, W}.
    pub fn parse(text: &str) -> Result<Gf4Generator, Gf4Error> {
        let mut frames = Vec::new();
        let mut n = None;
        for (i, frame) in text.trim().split('|').enumerate() {
            let frame = frame.trim();
            let syms: Result<Vec<Gf4>, _> = frame.chars().map(Gf4::from_char).collect();
            let syms = syms?;
            match n {
                None => n = Some(syms.len()),
                Some(w) if w != syms.len() => return Err(Gf4Error::RaggedFrame(i, syms.len(), w)),
                _ => {}
            }
            frames.push(syms);
        }
        let n = n.unwrap_or(0);
        while frames
            .first()
            .is_some_and(|f| f.iter().all(|&s| s == Gf4::Zero))
        {
            frames.remove(0);
        }
        while frames
            .last()
            .is_some_and(|f| f.iter().all(|&s| s == Gf4::Zero))
        {
            frames.pop();
        }
        if frames.is_empty() || n == 0 {
            return Err(Gf4Error::AllZero);
        }
        Ok(Gf4Generator { frames, n })
    }

    /// Scalar multiple of the whole generator.
    pub fn scaled(&self, by: Gf4) -> Gf4Generator {
        Gf4Generator {
            frames: self
                .frames
                .iter()
                .map(|f| f.iter().map(|&s| s.times(by)).collect())
                .collect(),
            n: self.n,
        }
    }

    /// Pauli string of one scalar multiple, one letter per (frame, qubit).
    pub fn pauli_string(&self, by: Gf4) -> String {
        self.scaled(by)
            .frames
            .iter()
            .map(|f| {
                f.iter()
                    .map(|s| match s.pauli_bits() {
                        (false, false) => 'I',
                        (false, true) => 'X',
                        (true, true) => 'Y',
                        (true, false) => 'Z',
                    })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Gf4Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .frames
            .iter()
            .map(|fr| fr.iter().map(|s| s.symbol_char()).collect())
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Two check-matrix rows per classical generator: first from the
/// OmegaBar multiple, then from the Omega multiple.
pub fn import_gf4(g: &Gf4Generator) -> CheckMatrix<LaurentPoly> {
    let n = g.n();
    let mut z = PolyMatrix::zero(2, n);
    let mut x = PolyMatrix::zero(2, n);
    for (row, scalar) in [(0, Gf4::OmegaBar), (1, Gf4::Omega)] {
        let scaled = g.scaled(scalar);
        for q in 0..n {
            let mut z_exps = Vec::new();
            let mut x_exps = Vec::new();
            for (t, frame) in scaled.frames.iter().enumerate() {
                let (zb, xb) = frame[q].pauli_bits();
                if zb {
                    z_exps.push(t as i64);
                }
                if xb {
                    x_exps.push(t as i64);
                }
            }
            z.set(row, q, LaurentPoly::from_exponents(&z_exps));
            x.set(row, q, LaurentPoly::from_exponents(&x_exps));
        }
    }
    CheckMatrix::new(z, x)
}

/// File format: single line `gf4 n=<n>: <frames>`.
pub fn parse_gf4_file(text: &str) -> Result<Gf4Generator, Gf4Error> {
    let line = text.trim();
    let rest = line
        .strip_prefix("gf4 ")
        .ok_or_else(|| Gf4Error::Header("expected `gf4 n=<n>: <frames>`".into()))?;
    let (head, frames) = rest
        .split_once(':')
        .ok_or_else(|| Gf4Error::Header("missing `:`".into()))?;
    let n: usize = head
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Gf4Error::Header("missing or bad n=".into()))?;
    let g = Gf4Generator::parse(frames)?;
    if g.n() != n {
        return Err(Gf4Error::WidthMismatch(n, g.n()));
    }
    Ok(g)
}

pub fn render_gf4_file(g: &Gf4Generator) -> String {
    format!("gf4 n={}: {}\n", g.n(), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::render_check_matrix;

    #[test]
    fn parse_shapes() {
        let g = Gf4Generator::parse("1W10|1101").unwrap();
        assert_eq!(g.frames().len(), 2);
        assert_eq!(g.n(), 4);
        let g = Gf4Generator::parse("w").unwrap();
        assert_eq!((g.frames().len(), g.n()), (1, 1));
        let g = Gf4Generator::parse("10|01|0w").unwrap();
        assert_eq!((g.frames().len(), g.n()), (3, 2));
    }

    #[test]
    fn zero_frames_canonicalized() {
        let g = Gf4Generator::parse("00|1w|00").unwrap();
        assert_eq!(g.to_string(), "1w");
        assert_eq!(Gf4Generator::parse("00|00"), Err(Gf4Error::AllZero));
        assert!(matches!(
            Gf4Generator::parse("10|1"),
            Err(Gf4Error::RaggedFrame(..))
        ));
        assert_eq!(Gf4Generator::parse("1q"), Err(Gf4Error::BadSymbol('q')));
    }

    #[test]
    fn example_generator_imports_to_reference_matrix() {
        let g = Gf4Generator::parse("1W10|1101").unwrap();
        assert_eq!(g.pauli_string(Gf4::OmegaBar), "ZXZI|ZZIZ");
        assert_eq!(g.pauli_string(Gf4::Omega), "XYXI|XXIX");
        let m = import_gf4(&g);
        let expected = "checkmatrix n=4 rows=2\n\
                        Z: 1+D,D,1,D ; X: 0,1,0,0\n\
                        Z: 0,1,0,0 ; X: 1+D,1+D,1,D\n";
        assert_eq!(render_check_matrix(&m), expected);
    }

    #[test]
    fn single_omega_symbol() {
        let m = import_gf4(&Gf4Generator::parse("w").unwrap());
        // W*w = 1 -> Y; w*w = W -> Z
        assert_eq!(m.z.get(0, 0).render(), "1");
        assert_eq!(m.x.get(0, 0).render(), "1");
        assert_eq!(m.z.get(1, 0).render(), "1");
        assert_eq!(m.x.get(1, 0).render(), "0");
    }

    #[test]
    fn all_ones_generator() {
        let m = import_gf4(&Gf4Generator::parse("11").unwrap());
        assert_eq!(m.z.get(0, 0).render(), "1");
        assert_eq!(m.x.get(0, 0).render(), "0");
        assert_eq!(m.z.get(1, 1).render(), "0");
        assert_eq!(m.x.get(1, 1).render(), "1");
    }

    #[test]
    fn pauli_round_trip_on_random_generators() {
        let mut state = 0x6f4_5eed_u64;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let alphabet = [Gf4::Zero, Gf4::One, Gf4::Omega, Gf4::OmegaBar];
        for _ in 0..200 {
            let n = 1 + (rnd() % 5) as usize;
            let frames = 1 + (rnd() % 4) as usize;
            let text: String = (0..frames)
                .map(|_| {
                    (0..n)
                        .map(|_| alphabet[(rnd() % 4) as usize])
                        .map(|s| s.symbol_char())
                        .collect::<String>()
                })
                .collect::<Vec<_>>()
                .join("|");
            let Ok(g) = Gf4Generator::parse(&text) else {
                continue; // all-zero draw
            };
            let m = import_gf4(&g);
            let un = crate::oracle::unroll(&m.to_rational(), g.frames().len() as i64, 0).unwrap();
            let width = g.frames().len() as i64;
            assert_eq!(
                un.rows[0].pauli_string(width),
                g.pauli_string(Gf4::OmegaBar)
            );
            assert_eq!(un.rows[1].pauli_string(width), g.pauli_string(Gf4::Omega));
        }
    }

    #[test]
    fn file_round_trip() {
        let g = Gf4Generator::parse("1W10|1101").unwrap();
        let f = render_gf4_file(&g);
        assert_eq!(parse_gf4_file(&f).unwrap(), g);
        assert!(parse_gf4_file("gf4 n=3: 1W10").is_err());
        assert!(parse_gf4_file("nope").is_err());
    }

    #[test]
    fn degree_bounded_by_frames() {
        let g = Gf4Generator::parse("1W10|1101|w0w1").unwrap();
        let m = import_gf4(&g);
        for r in 0..2 {
            for q in 0..4 {
                for p in [m.z.get(r, q), m.x.get(r, q)] {
                    if let Some(d) = p.degree() {
                        assert!(d < 3);
                    }
                }
            }
        }
    }
}
