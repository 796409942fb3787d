//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use eaqcc::check::{render_check_matrix, CheckMatrix};
use eaqcc::cli::verify_artifact;
use eaqcc::construction::{
    alice_equivalence, assemble_encoder, decode_recovers_info, ConstructConfig, EncoderArtifact,
};
use eaqcc::enhance::{build_piggyback, enhanced_params};
use eaqcc::gf4::{import_gf4, Gf4Generator};
use eaqcc::hermite::{row_equivalent, Equivalence};
use eaqcc::laurent::LaurentPoly;
use eaqcc::matrix::PolyMatrix;
use eaqcc::oracle::{commutation_oracle, syndrome_table, transform_table, trim_shifts};
use eaqcc::report::{ArtifactDoc, ParsedArtifact};

fn example_import() -> CheckMatrix {
    import_gf4(&Gf4Generator::parse("1W10|1101").unwrap())
}

fn example_artifact() -> EncoderArtifact {
    assemble_encoder(&example_import(), ConstructConfig::default()).unwrap()
}

fn pm(rows: &[&str]) -> PolyMatrix {
    PolyMatrix::parse_rows(rows).unwrap()
}

/// Criterion 1: the GF(4) import reproduces the reference check matrix
/// entry for entry.
#[test]
fn criterion_1_gf4_import_golden() {
    let m = example_import();
    let expected = "checkmatrix n=4 rows=2\n\
                    Z: 1+D,D,1,D ; X: 0,1,0,0\n\
                    Z: 0,1,0,0 ; X: 1+D,1+D,1,D\n";
    assert_eq!(render_check_matrix(&m), expected);
    println!("criterion 1 PASS: gf4 import golden matrix");
}

/// Criterion 2: construction reports [[4,2;2]], s = 2, empty Gamma_2,
/// and no infinite-depth gates.
#[test]
fn criterion_2_example_parameters() {
    let a = example_artifact();
    assert_eq!(a.params_string(), "[[4,2;2]]");
    assert_eq!(a.dims.s, 2);
    assert!(a.record.gamma2.is_empty());
    assert!(a.gates_infinite().is_empty());
    println!("criterion 2 PASS: params [[4,2;2]] s=2, finite-depth only");
}

/// Criterion 3: Alice's generators are unimodular-equivalent to the
/// import, and the full stabilizer is row-equivalent to the reference
/// final stabilizer containing h = D^-1+1+D, l = 1+D, f = 1+D^-2.
#[test]
fn criterion_3_equivalences() {
    let a = example_artifact();
    let alice = a.alice_generators();
    assert_eq!(
        row_equivalent(&alice.joined(), &a.input.joined()).unwrap(),
        Equivalence::Unimodular
    );

    // the reference final stabilizer (receiver's two qubits first)
    let reference = CheckMatrix::new(
        pm(&[
            "0, 1, 0, 1, 0, 0",
            "1, 0, 0, 0, 1, 0",
            "0, D, 1+D, D, 1, D",
            "D^-2+1, D^-1+1+D, 0, 1, 0, 0",
        ]),
        pm(&[
            "0, 0, 0, 0, 0, 0",
            "0, 0, 0, 0, 0, 0",
            "0, 1, 0, 1, 0, 0",
            "1, 1+D, 1+D, 1+D, 1, D",
        ]),
    );
    let full = a
        .full_stabilizer()
        .to_poly()
        .expect("example stabilizer is polynomial");
    assert_eq!(
        row_equivalent(&full.joined(), &reference.joined()).unwrap(),
        Equivalence::Unimodular
    );
    println!("criterion 3 PASS: alice ~ import (unimodular), full ~ reference stabilizer");
}

/// Criterion 4: the full stabilizer commutes symbolically and the
/// finite-window oracle (W = 12, |j| <= 5) agrees everywhere.
#[test]
fn criterion_4_commutation() {
    let a = example_artifact();
    assert!(a.full_stabilizer().is_commuting());
    let mismatches = commutation_oracle(a.full_stabilizer(), 12, 5).unwrap();
    assert!(mismatches.is_empty());
    println!("criterion 4 PASS: commuting stabilizer, oracle clean at W=12 |j|<=5");
}

/// Criterion 5: the piggyback operators match the two reference rows, the
/// product pattern against the stabilizer is [I | 0], and both parameter
/// strings match.
#[test]
fn criterion_5_piggyback_golden() {
    let a = example_artifact();
    let set = build_piggyback(&a).unwrap();
    let expected = "checkmatrix n=6 rows=2\n\
                    Z: 0,0,D^-1,D^-2+1+D,0,0 ; X: 0,0,1,0,0,0\n\
                    Z: 0,0,0,1+D^2,0,0 ; X: 0,0,0,1,0,0\n";
    assert_eq!(render_check_matrix(&set.operators), expected);

    let pattern = eaqcc::enhance::product_pattern(&set, &a);
    for i in 0..2 {
        for j in 0..a.finale.stabilizer.rows() {
            let want_one = i == j;
            assert_eq!(pattern.get(i, j).is_one(), want_one, "pattern ({i},{j})");
            assert_eq!(pattern.get(i, j).is_zero(), !want_one, "pattern ({i},{j})");
        }
    }

    let params = enhanced_params(&a);
    assert_eq!(params.enhanced_string(), "[[4,2:2;2]]");
    assert_eq!(params.teleport_string().as_deref(), Some("[[4,3;3]]"));
    println!("criterion 5 PASS: reference operators, [I|0] pattern, [[4,2:2;2]] / [[4,3;3]]");
}

/// Criterion 6: the imported rows anticommute with product exactly D^-1,
/// confirmed by frame-shift Pauli counting.
#[test]
fn criterion_6_anticommutation_witness() {
    let s = example_import().to_rational();
    let product = s.row_product(0, &s, 1);
    assert_eq!(product.to_string(), "D^-1");

    let un = eaqcc::oracle::unroll(&s, 10, 5).unwrap();
    for j in -5..=5i64 {
        assert_eq!(un.parity(0, 1, j), j == -1, "shift {j}");
    }
    println!("criterion 6 PASS: shifted symplectic product D^-1, oracle-confirmed");
}

struct Rng(u64);
impl Rng {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

fn random_check_matrix(rng: &mut Rng, rows: usize, n: usize, deg: i64) -> CheckMatrix {
    let mut z = PolyMatrix::zero(rows, n);
    let mut x = PolyMatrix::zero(rows, n);
    for r in 0..rows {
        for q in 0..n {
            for m in [&mut z, &mut x] {
                let mut exps = vec![];
                for e in 0..=deg {
                    if rng.next() % 3 == 0 {
                        exps.push(e);
                    }
                }
                m.set(r, q, LaurentPoly::from_exponents(&exps));
            }
        }
    }
    CheckMatrix::new(z, x)
}

/// Draws random full-rank inputs until one satisfies the construction's
/// preconditions (full-rank E_23 block, c - s independent rows in E_22b).
fn next_artifact(rng: &mut Rng) -> EncoderArtifact {
    loop {
        let n = 2 + (rng.next() % 5) as usize;
        let rows = 1 + (rng.next() % (n - 1).min(4) as u64) as usize;
        let m = random_check_matrix(rng, rows, n, 2);
        if m.rank() < rows {
            continue;
        }
        if let Ok(a) = assemble_encoder(&m, ConstructConfig::default()) {
            return a;
        }
    }
}

/// Criterion 7: 200 random full-rank check matrices (n <= 6, n-k <= 4,
/// degree <= 2) satisfy every pipeline property.
#[test]
fn criterion_7_property_suite() {
    let mut rng = Rng(0x9e37_79b9_7f4a_7c15);
    let start = std::time::Instant::now();
    for run in 0..200 {
        let a = next_artifact(&mut rng);
        // (a) c = rank(X)
        assert_eq!(a.dims.c, a.input.x.rank(), "run {run}: c = rank X");
        // (b) commuting full stabilizer
        assert!(
            a.full_stabilizer().is_commuting(),
            "run {run}: stabilizer commutes"
        );
        assert!(
            a.encoded.stabilizer_info_products_vanish(),
            "run {run}: info rows commute with stabilizer"
        );
        // (c) Alice generators equivalent at the recorded tier
        let tier = alice_equivalence(&a).unwrap();
        assert!(
            tier.at_least(a.equivalence_tier),
            "run {run}: tier {tier:?} vs recorded {:?}",
            a.equivalence_tier
        );
        // (d) decoder replay restores the information-qubit matrix
        assert!(decode_recovers_info(&a).unwrap(), "run {run}: decode");
        // (e) no gate touches Bob's qubits
        for g in &a.gates_encode {
            assert!(
                g.qubits().iter().all(|&q| q >= a.dims.c),
                "run {run}: encoder gate {g} touches Bob"
            );
        }
        // infinite-depth divisions only ever land on the Z side, which
        // keeps every oracle parity a finite exact sum
        let stab = &a.encoded.stabilizer;
        for r in 0..stab.rows() {
            for q in 0..stab.qubits() {
                assert!(stab.x.get(r, q).is_polynomial(), "run {run}: rational X");
            }
        }
        // (f) oracle/symbolic agreement at W = 10 (doubled only when a
        // support cannot fit the guarded window)
        let st = a.encoded.stabilizer.normalize_row_valuations();
        let mut w = 10;
        let mismatches = loop {
            match commutation_oracle(&st, w, 4) {
                Ok(v) => break v,
                Err(_) if w < 320 => w *= 2,
                Err(e) => panic!("run {run}: oracle window: {e}"),
            }
        };
        assert!(mismatches.is_empty(), "run {run}: oracle agreement");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "property suite exceeded 2 minutes: {elapsed:?}"
    );
    println!(
        "criterion 7 PASS: 200 random pipelines, all properties, {:.2?}",
        elapsed
    );
}

fn syndrome_power_preserved(a: &EncoderArtifact, window: i64, shifts: i64) -> bool {
    let keep = shifts / 2;
    let rt = &a.alice_row_transform;
    let reach = (0..rt.rows())
        .flat_map(|r| (0..rt.cols()).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let e = rt.get(r, c);
            Some(e.degree()?.abs().max(e.valuation()?.abs()))
        })
        .max()
        .unwrap_or(0);
    let mut w = window;
    loop {
        let attempt = (|| -> Result<bool, eaqcc::oracle::OracleError> {
            let t_input = syndrome_table(&a.input.to_rational(), w, keep + reach)?;
            let t_alice = syndrome_table(&a.alice_generators().to_rational(), w, keep)?;
            let mapped = transform_table(&t_input, rt, keep);
            let direct = trim_shifts(&t_alice, keep);
            Ok(mapped == direct && mapped.partition().len() == direct.partition().len())
        })();
        match attempt {
            Ok(v) => return v,
            Err(_) if w < 320 => w *= 2,
            Err(e) => panic!("syndrome window: {e}"),
        }
    }
}

/// Criterion 8: single-error syndrome tables of the input and of Alice's
/// generators are related by the recorded row transform, for the example
/// and 20 random codes.
#[test]
fn criterion_8_syndrome_power() {
    let start = std::time::Instant::now();
    let a = example_artifact();
    assert!(syndrome_power_preserved(&a, 12, 6), "example code");
    let mut rng = Rng(0x51d0_fea0_c0de + 7);
    for run in 0..20 {
        let a = next_artifact(&mut rng);
        assert!(
            syndrome_power_preserved(&a, 10, 6),
            "run {run} dims {:?}",
            a.dims
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 30,
        "syndrome suite too slow: {elapsed:?}"
    );
    println!(
        "criterion 8 PASS: syndrome power preserved (example + 20 random), {:.2?}",
        elapsed
    );
}

/// The full verifier agrees with everything above when driven through
/// the report round trip.
#[test]
fn verify_report_round_trip_passes() {
    let a = example_artifact();
    let doc = ArtifactDoc::from_artifact(&a);
    let parsed = ParsedArtifact::from_doc(&ArtifactDoc::parse(&doc.to_text()).unwrap()).unwrap();
    let report = verify_artifact(&parsed, 12, 5);
    assert!(report.pass, "{}", report.to_text());
}
