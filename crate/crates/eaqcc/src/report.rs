//! Artifact, verification and enhancement reports.
//!
//! The text format is line oriented and deterministic: a header line,
//! scalar fields, then fenced sections that hold matrices in the shared
//! check-matrix/polynomial grammar. `[section <name>]` ... `[end]`
//! fences are machine-parseable; the same content serializes to JSON for
//! `--format structured`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check::{
    parse_check_matrix, render_check_matrix, CheckParseError, GateOp, RatCheckMatrix,
};
use crate::construction::{ConstructConfig, Dims, EncoderArtifact};
use crate::enhance::PiggybackSet;
use crate::hermite::Equivalence;
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;

pub const ARTIFACT_HEADER: &str = "eaqcc artifact v1";
pub const ENHANCE_HEADER: &str = "eaqcc enhancement v1";
pub const VERIFY_HEADER: &str = "eaqcc verify v1";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("missing section `{0}`")]
    MissingSection(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("section `{0}`: {1}")]
    Section(String, String),
    #[error("bad JSON report: {0}")]
    Json(#[from] serde_json::Error),
}

impl From<CheckParseError> for ReportError {
    fn from(e: CheckParseError) -> Self {
        ReportError::Line(0, e.to_string())
    }
}

/// Plain serializable mirror of an encoder artifact.
#[derive(Clone, Serialize, Deserialize)]
pub struct ArtifactDoc {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub s: usize,
    pub params: String,
    pub tier: String,
    pub subcode_rowops: bool,
    pub input: String,
    pub gates_encode: Vec<String>,
    pub gates_decode: Vec<String>,
    pub stabilizer_full: String,
    pub stabilizer_finale: String,
    pub stabilizer_unencoded: String,
    pub info: String,
    pub info_unencoded: String,
    pub alice: String,
    pub block_e1a: Vec<String>,
    pub block_gamma1: Vec<String>,
    pub block_gamma2: Vec<String>,
    pub block_l: Vec<String>,
    pub row_transform: Vec<String>,
}

fn poly_matrix_lines(m: &PolyMatrix) -> Vec<String> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m.get(r, c).render())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect()
}

fn poly_matrix_from_lines(lines: &[String], name: &str) -> Result<PolyMatrix, ReportError> {
    let refs: Vec<&str> = lines.iter().map(|s| s.as_str()).collect();
    if refs.is_empty() {
        return Ok(PolyMatrix::zero(0, 0));
    }
    PolyMatrix::parse_rows(&refs).map_err(|e| ReportError::Section(name.to_string(), e.to_string()))
}

fn poly_list(v: &[LaurentPoly]) -> Vec<String> {
    v.iter().map(|p| p.render()).collect()
}

fn poly_list_from(lines: &[String], name: &str) -> Result<Vec<LaurentPoly>, ReportError> {
    lines
        .iter()
        .map(|s| {
            LaurentPoly::parse(s).map_err(|e| ReportError::Section(name.to_string(), e.to_string()))
        })
        .collect()
}

impl ArtifactDoc {
    pub fn from_artifact(a: &EncoderArtifact) -> ArtifactDoc {
        ArtifactDoc {
            n: a.dims.n,
            k: a.dims.k,
            c: a.dims.c,
            s: a.dims.s,
            params: a.params_string(),
            tier: a.equivalence_tier.as_str().to_string(),
            subcode_rowops: a.config.subcode_rowops,
            input: render_check_matrix(&a.input),
            gates_encode: a.gates_encode.iter().map(|g| g.render()).collect(),
            gates_decode: a.gates_decode.iter().map(|g| g.render()).collect(),
            stabilizer_full: render_check_matrix(&a.encoded.stabilizer),
            stabilizer_finale: render_check_matrix(&a.finale.stabilizer),
            stabilizer_unencoded: render_check_matrix(&a.unencoded.stabilizer),
            info: render_check_matrix(&a.encoded.info),
            info_unencoded: render_check_matrix(&a.unencoded.info),
            alice: render_check_matrix(&a.alice_generators()),
            block_e1a: poly_matrix_lines(&a.record.e1a_prime),
            block_gamma1: poly_list(&a.record.gamma1),
            block_gamma2: poly_list(&a.record.gamma2),
            block_l: poly_matrix_lines(&a.record.l_block),
            row_transform: poly_matrix_lines(&a.alice_row_transform),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(ARTIFACT_HEADER);
        out.push('\n');
        out.push_str(&format!("params {} s={}\n", self.params, self.s));
        out.push_str(&format!("tier {}\n", self.tier));
        out.push_str(&format!(
            "subcode-rowops {}\n",
            if self.subcode_rowops { "on" } else { "off" }
        ));
        out.push_str(&format!(
            "dims n={} k={} c={} s={}\n",
            self.n, self.k, self.c, self.s
        ));
        let mut section = |name: &str, body: &str| {
            out.push_str(&format!("[section {name}]\n"));
            out.push_str(body);
            if !body.is_empty() && !body.ends_with('\n') {
                out.push('\n');
            }
            out.push_str("[end]\n");
        };
        section("input", &self.input);
        section("gates encode", &join_lines(&self.gates_encode));
        section("gates decode", &join_lines(&self.gates_decode));
        section("stabilizer full", &self.stabilizer_full);
        section("stabilizer finale", &self.stabilizer_finale);
        section("stabilizer unencoded", &self.stabilizer_unencoded);
        section("info", &self.info);
        section("info unencoded", &self.info_unencoded);
        section("alice", &self.alice);
        section("block e1a", &join_lines(&self.block_e1a));
        section("block gamma1", &join_lines(&self.block_gamma1));
        section("block gamma2", &join_lines(&self.block_gamma2));
        section("block l", &join_lines(&self.block_l));
        section("rowtransform", &join_lines(&self.row_transform));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact doc serializes") + "\n"
    }

    /// Accepts either the text format or the JSON form.
    pub fn parse(text: &str) -> Result<ArtifactDoc, ReportError> {
        if text.trim_start().starts_with('{') {
            return Ok(serde_json::from_str(text)?);
        }
        let mut lines = text.lines().enumerate().peekable();
        match lines.next() {
            Some((_, l)) if l.trim() == ARTIFACT_HEADER => {}
            Some((i, l)) => {
                return Err(ReportError::Line(
                    i + 1,
                    format!("expected `{ARTIFACT_HEADER}`, found `{l}`"),
                ))
            }
            None => return Err(ReportError::Line(1, "empty report".into())),
        }
        let mut fields: BTreeMap<String, String> = BTreeMap::new();
        let mut sections: BTreeMap<String, Vec<String>> = BTreeMap::new();
        while let Some((idx, line)) = lines.next() {
            let line = line.trim_end();
            if line.trim().is_empty() {
                continue;
            }
            if let Some(name) = line
                .strip_prefix("[section ")
                .and_then(|s| s.strip_suffix(']'))
            {
                let mut body = Vec::new();
                let mut closed = false;
                for (_, inner) in lines.by_ref() {
                    if inner.trim() == "[end]" {
                        closed = true;
                        break;
                    }
                    body.push(inner.to_string());
                }
                if !closed {
                    return Err(ReportError::Section(name.into(), "missing [end]".into()));
                }
                sections.insert(name.to_string(), body);
            } else {
                let (key, value) = line
                    .split_once(' ')
                    .ok_or_else(|| ReportError::Line(idx + 1, format!("bad line `{line}`")))?;
                fields.insert(key.to_string(), value.to_string());
            }
        }
        let dims_line = fields
            .get("dims")
            .ok_or_else(|| ReportError::MissingField("dims".into()))?;
        let mut n = None;
        let mut k = None;
        let mut c = None;
        let mut s = None;
        for tok in dims_line.split_whitespace() {
            let assign = |v: &str| v.parse::<usize>().ok();
            if let Some(v) = tok.strip_prefix("n=") {
                n = assign(v);
            } else if let Some(v) = tok.strip_prefix("k=") {
                k = assign(v);
            } else if let Some(v) = tok.strip_prefix("c=") {
                c = assign(v);
            } else if let Some(v) = tok.strip_prefix("s=") {
                s = assign(v);
            }
        }
        let (n, k, c, s) = match (n, k, c, s) {
            (Some(n), Some(k), Some(c), Some(s)) => (n, k, c, s),
            _ => return Err(ReportError::MissingField("dims".into())),
        };
        let params = fields
            .get("params")
            .map(|p| p.split_whitespace().next().unwrap_or("").to_string())
            .ok_or_else(|| ReportError::MissingField("params".into()))?;
        let tier = fields
            .get("tier")
            .cloned()
            .ok_or_else(|| ReportError::MissingField("tier".into()))?;
        let subcode = match fields.get("subcode-rowops").map(|s| s.as_str()) {
            Some("on") => true,
            Some("off") => false,
            _ => return Err(ReportError::MissingField("subcode-rowops".into())),
        };
        let mut take = |name: &str| -> Result<Vec<String>, ReportError> {
            sections
                .remove(name)
                .ok_or_else(|| ReportError::MissingSection(name.into()))
        };
        let as_text = |v: Vec<String>| {
            let mut s = v.join("\n");
            if !s.is_empty() {
                s.push('\n');
            }
            s
        };
        Ok(ArtifactDoc {
            n,
            k,
            c,
            s,
            params,
            tier,
            subcode_rowops: subcode,
            input: as_text(take("input")?),
            gates_encode: take("gates encode")?,
            gates_decode: take("gates decode")?,
            stabilizer_full: as_text(take("stabilizer full")?),
            stabilizer_finale: as_text(take("stabilizer finale")?),
            stabilizer_unencoded: as_text(take("stabilizer unencoded")?),
            info: as_text(take("info")?),
            info_unencoded: as_text(take("info unencoded")?),
            alice: as_text(take("alice")?),
            block_e1a: take("block e1a")?,
            block_gamma1: take("block gamma1")?,
            block_gamma2: take("block gamma2")?,
            block_l: take("block l")?,
            row_transform: take("rowtransform")?,
        })
    }
}

/// The parsed, typed view the verifier works on.
pub struct ParsedArtifact {
    pub dims: Dims,
    pub tier: Equivalence,
    pub config: ConstructConfig,
    pub input: RatCheckMatrix,
    pub gates_encode: Vec<GateOp>,
    pub gates_decode: Vec<GateOp>,
    pub stabilizer_full: RatCheckMatrix,
    pub stabilizer_finale: RatCheckMatrix,
    pub stabilizer_unencoded: RatCheckMatrix,
    pub info: RatCheckMatrix,
    pub info_unencoded: RatCheckMatrix,
    pub alice: RatCheckMatrix,
    pub e1a_prime: PolyMatrix,
    pub gamma1: Vec<LaurentPoly>,
    pub gamma2: Vec<LaurentPoly>,
    pub l_block: PolyMatrix,
    pub row_transform: PolyMatrix,
}

impl ParsedArtifact {
    pub fn from_doc(doc: &ArtifactDoc) -> Result<ParsedArtifact, ReportError> {
        let tier = match doc.tier.as_str() {
            "UNIMODULAR-EQUIVALENT" => Equivalence::Unimodular,
            "SUBCODE-EQUIVALENT" => Equivalence::Subcode,
            "NOT-EQUIVALENT" => Equivalence::NotEquivalent,
            other => {
                return Err(ReportError::Section(
                    "tier".into(),
                    format!("unknown tier `{other}`"),
                ))
            }
        };
        let gates = |v: &[String], name: &str| -> Result<Vec<GateOp>, ReportError> {
            v.iter()
                .map(|l| GateOp::parse(l).map_err(|e| ReportError::Section(name.to_string(), e)))
                .collect()
        };
        Ok(ParsedArtifact {
            dims: Dims {
                n: doc.n,
                k: doc.k,
                c: doc.c,
                s: doc.s,
            },
            tier,
            config: ConstructConfig {
                subcode_rowops: doc.subcode_rowops,
            },
            input: parse_check_matrix(&doc.input)?,
            gates_encode: gates(&doc.gates_encode, "gates encode")?,
            gates_decode: gates(&doc.gates_decode, "gates decode")?,
            stabilizer_full: parse_check_matrix(&doc.stabilizer_full)?,
            stabilizer_finale: parse_check_matrix(&doc.stabilizer_finale)?,
            stabilizer_unencoded: parse_check_matrix(&doc.stabilizer_unencoded)?,
            info: parse_check_matrix(&doc.info)?,
            info_unencoded: parse_check_matrix(&doc.info_unencoded)?,
            alice: parse_check_matrix(&doc.alice)?,
            e1a_prime: poly_matrix_from_lines(&doc.block_e1a, "block e1a")?,
            gamma1: poly_list_from(&doc.block_gamma1, "block gamma1")?,
            gamma2: poly_list_from(&doc.block_gamma2, "block gamma2")?,
            l_block: poly_matrix_from_lines(&doc.block_l, "block l")?,
            row_transform: poly_matrix_from_lines(&doc.row_transform, "rowtransform")?,
        })
    }
}

fn join_lines(v: &[String]) -> String {
    if v.is_empty() {
        String::new()
    } else {
        v.join("\n") + "\n"
    }
}

/// Enhancement report.
#[derive(Clone, Serialize, Deserialize)]
pub struct EnhancementDoc {
    pub enhanced: String,
    pub teleport: Option<String>,
    pub note: String,
    pub operators: String,
    pub operators_encoded: String,
}

impl EnhancementDoc {
    pub fn from_set(set: &PiggybackSet) -> EnhancementDoc {
        EnhancementDoc {
            enhanced: set.enhanced.enhanced_string(),
            teleport: set.enhanced.teleport_string(),
            note: "classical enhancement trades syndrome capacity: the \
                   encoded operators span extra correctable errors the \
                   code gives up"
                .to_string(),
            operators: render_check_matrix(&set.operators),
            operators_encoded: render_check_matrix(&set.encoded_operators),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(ENHANCE_HEADER);
        out.push('\n');
        out.push_str(&format!("enhanced {}\n", self.enhanced));
        match &self.teleport {
            Some(t) => out.push_str(&format!("teleport {t}\n")),
            None => out.push_str("teleport none (odd bit count teleports no whole qubit)\n"),
        }
        out.push_str(&format!("note {}\n", self.note));
        out.push_str("[section operators unencoded]\n");
        out.push_str(&self.operators);
        out.push_str("[end]\n[section operators encoded]\n");
        out.push_str(&self.operators_encoded);
        out.push_str("[end]\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("enhancement doc serializes") + "\n"
    }
}

/// One verification check line.
#[derive(Clone, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub checks: Vec<CheckLine>,
    pub pass: bool,
    /// One `pair (a,b) shift j expected e observed o` line per oracle
    /// disagreement; empty when the oracle is clean.
    #[serde(default)]
    pub mismatches: Vec<String>,
    /// Weight-1 syndrome dump of the input matrix, `err q<i> f<t> <P> ->
    /// <bitstring>` lines.
    #[serde(default)]
    pub syndromes: String,
}

impl VerifyDoc {
    pub fn new(checks: Vec<CheckLine>) -> VerifyDoc {
        Self::with_sections(checks, Vec::new(), String::new())
    }

    pub fn with_sections(
        checks: Vec<CheckLine>,
        mismatches: Vec<String>,
        syndromes: String,
    ) -> VerifyDoc {
        let pass = checks.iter().all(|c| c.pass);
        VerifyDoc {
            checks,
            pass,
            mismatches,
            syndromes,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(VERIFY_HEADER);
        out.push('\n');
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                out.push_str(&format!("check {} {status}\n", c.name));
            } else {
                out.push_str(&format!("check {} {status} {}\n", c.name, c.detail));
            }
        }
        out.push_str(&format!(
            "result {}\n",
            if self.pass { "PASS" } else { "FAIL" }
        ));
        if !self.mismatches.is_empty() {
            out.push_str("[section oracle mismatches]\n");
            for line in &self.mismatches {
                out.push_str(line);
                out.push('\n');
            }
            out.push_str("[end]\n");
        }
        if !self.syndromes.is_empty() {
            out.push_str("[section syndromes input]\n");
            out.push_str(&self.syndromes);
            out.push_str("[end]\n");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verify doc serializes") + "\n"
    }
}
