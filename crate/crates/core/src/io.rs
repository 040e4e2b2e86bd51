//! Input specs, witness JSON and deterministic reports.
//!
//! Inputs are JSON, or TOML when the file name ends in `.toml`. Element
//! indices are the frame's own indices, so on a cyclic frame `k` means `σ^k`.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cm::{classify_cm_types, ClassSummary, CmType};
use crate::error::{Error, Result};
use crate::group::{FrameRef, FrameSpec, Side};
use crate::lattice::{FgAbelianGroup, GroupRingVector};
use crate::verdict::{decide_cm_pair, low_dim_verdict, AlbertType, LowDimDescriptor, LowDimVerdict, PairVerdict, TorsionKind};
use crate::witness::{find_witness, verify_witness, HodgeWitness, SearchBounds, Verification, WitnessSearch};

pub const MAX_ORDER_VAR: &str = "CMTK_MAX_ORDER";
pub const DEFAULT_MAX_ORDER: usize = 64;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Reads the frame-order cap from `CMTK_MAX_ORDER`.
pub fn max_order_from_env() -> Result<usize> {
    match std::env::var(MAX_ORDER_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("{MAX_ORDER_VAR}={text:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

pub fn build_frame(spec: &FrameSpec, max_order: usize) -> Result<FrameRef> {
    let order = spec.order();
    if order > max_order {
        return Err(Error::Input(format!(
            "frame {spec} has order {order}, above the cap of {max_order} ({MAX_ORDER_VAR})"
        )));
    }
    spec.build()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Json,
    Toml,
}

impl InputFormat {
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("toml") => InputFormat::Toml,
            _ => InputFormat::Json,
        }
    }
}

pub fn parse_input<T: DeserializeOwned>(text: &str, format: InputFormat) -> Result<T> {
    match format {
        InputFormat::Json => serde_json::from_str(text).map_err(|e| Error::Input(e.to_string())),
        InputFormat::Toml => toml::from_str(text).map_err(|e| Error::Input(e.to_string())),
    }
}

pub fn load_input<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text, InputFormat::for_path(path))
}

/// One CM type on its own frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmSpec {
    pub frame: FrameSpec,
    pub phi: Vec<usize>,
}

impl CmSpec {
    pub fn build(&self, max_order: usize) -> Result<CmType> {
        CmType::new(&build_frame(&self.frame, max_order)?, &self.phi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorSpec {
    pub dim: u8,
    #[serde(rename = "type")]
    pub albert_type: AlbertType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm: Option<CmSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo_flag: Option<bool>,
}

impl DescriptorSpec {
    pub fn build(&self, max_order: usize) -> Result<LowDimDescriptor> {
        let mut d = LowDimDescriptor::new(self.dim, self.albert_type)?;
        if let Some(cm) = &self.cm {
            d = d.with_cm_type(cm.build(max_order)?)?;
        }
        if let Some(flag) = self.endo_flag {
            d = d.with_endo_flag(flag);
        }
        Ok(d)
    }
}

/// Two descriptors for the low-dimensional table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LowDimSpec {
    pub a: DescriptorSpec,
    pub b: DescriptorSpec,
}

/// A pair of CM types on one frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub frame: FrameSpec,
    pub phi1: Vec<usize>,
    pub phi2: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<SearchBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowdim: Option<LowDimSpec>,
    /// A certificate to check in verify mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl PairSpec {
    pub fn new(frame: FrameSpec, phi1: &[usize], phi2: &[usize]) -> Self {
        PairSpec {
            frame,
            phi1: phi1.to_vec(),
            phi2: phi2.to_vec(),
            bounds: None,
            lowdim: None,
            witness: None,
        }
    }

    pub fn build(&self, max_order: usize) -> Result<(CmType, CmType)> {
        let frame = build_frame(&self.frame, max_order)?;
        Ok((CmType::new(&frame, &self.phi1)?, CmType::new(&frame, &self.phi2)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub weight: Vec<i64>,
    pub e: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub alpha0: Vec<i64>,
    pub r: u64,
    pub s: u64,
    pub m: u64,
    pub n: u64,
    pub twist: i64,
    pub coeffs: Vec<CoeffJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<String>,
}

impl From<&HodgeWitness> for WitnessJson {
    fn from(w: &HodgeWitness) -> Self {
        WitnessJson {
            alpha0: w.alpha0.small_coeffs(),
            r: w.r,
            s: w.s,
            m: w.m,
            n: w.n,
            twist: w.twist,
            coeffs: w
                .coeffs
                .iter()
                .map(|(b, e)| CoeffJson { weight: b.small_coeffs(), e: *e })
                .collect(),
            descriptor: Some(w.degree_descriptor()),
        }
    }
}

impl WitnessJson {
    pub fn to_witness(&self, frame: &FrameRef) -> Result<HodgeWitness> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Ok((GroupRingVector::from_i64(frame, &c.weight)?, c.e)))
            .collect::<Result<Vec<_>>>()?;
        Ok(HodgeWitness {
            alpha0: GroupRingVector::from_i64(frame, &self.alpha0)?,
            r: self.r,
            s: self.s,
            m: self.m,
            n: self.n,
            twist: self.twist,
            coeffs,
        })
    }
}

/// Hex SHA-256 of the canonical JSON encoding of `input`.
pub fn input_digest<T: Serialize>(input: &T) -> String {
    let bytes = serde_json::to_vec(input).expect("inputs serialize");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new<I: Serialize>(command: &str, input: &I, result: T) -> Self {
        Report {
            tool: "cmtk".into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            input_digest: input_digest(input),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyResult {
    pub frame: FrameSpec,
    pub order: usize,
    pub cm_types: usize,
    pub classes: Vec<ClassSummary>,
}

pub fn cmd_classify(spec: &FrameSpec, max_order: usize) -> Result<Report<ClassifyResult>> {
    let frame = build_frame(spec, max_order)?;
    let classes: Vec<ClassSummary> = classify_cm_types(&frame, Side::Left).iter().map(ClassSummary::from).collect();
    let result = ClassifyResult {
        frame: spec.clone(),
        order: frame.order(),
        cm_types: classes.iter().map(|c| c.orbit_size).sum(),
        classes,
    };
    Ok(Report::new("classify", spec, result))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub direction_12: TorsionKind,
    pub direction_21: TorsionKind,
    pub mutual: bool,
    pub h12: FgAbelianGroup,
    pub h21: FgAbelianGroup,
}

impl From<&PairVerdict> for VerdictRecord {
    fn from(v: &PairVerdict) -> Self {
        VerdictRecord {
            direction_12: v.direction_12.kind,
            direction_21: v.direction_21.kind,
            mutual: v.mutual(),
            h12: v.direction_12.h12.clone(),
            h21: v.direction_21.h12.clone(),
        }
    }
}

fn pair_input(spec: &PairSpec) -> PairSpec {
    PairSpec { lowdim: None, witness: None, bounds: None, ..spec.clone() }
}

pub fn cmd_verdict(spec: &PairSpec, max_order: usize) -> Result<Report<VerdictRecord>> {
    let (cm1, cm2) = spec.build(max_order)?;
    let v = decide_cm_pair(&cm1, &cm2)?;
    Ok(Report::new("verdict", &pair_input(spec), VerdictRecord::from(&v)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found { witness: WitnessJson },
    ProvenAbsent,
    BoundsExhausted { bounds: SearchBounds },
    Checked { witness: WitnessJson, verification: Verification },
}

impl WitnessOutcome {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, WitnessOutcome::BoundsExhausted { .. })
    }
}

#[derive(Serialize)]
struct WitnessInput<'a> {
    pair: PairSpec,
    bounds: SearchBounds,
    verify: Option<&'a WitnessJson>,
}

/// Searches for a certificate, or checks the one carried by the spec when
/// `verify` is set. Bounds come from `bounds`, then the spec, then the frame.
pub fn cmd_witness(
    spec: &PairSpec,
    bounds: Option<SearchBounds>,
    verify: bool,
    max_order: usize,
) -> Result<Report<WitnessOutcome>> {
    let (cm1, cm2) = spec.build(max_order)?;
    let bounds = bounds.or(spec.bounds).unwrap_or_else(|| SearchBounds::for_frame(cm1.frame()));
    let checked = if verify {
        Some(spec.witness.as_ref().ok_or_else(|| Error::Input("verify mode needs a \"witness\" entry".into()))?)
    } else {
        None
    };
    let input = WitnessInput { pair: pair_input(spec), bounds, verify: checked };
    let outcome = match checked {
        Some(wj) => {
            let w = wj.to_witness(cm1.frame())?;
            let mut witness = wj.clone();
            witness.descriptor = Some(w.degree_descriptor());
            WitnessOutcome::Checked { witness, verification: verify_witness(&w, &cm1, &cm2) }
        }
        None => match find_witness(&cm1, &cm2, bounds)? {
            WitnessSearch::Found(w) => WitnessOutcome::Found { witness: WitnessJson::from(&w) },
            WitnessSearch::ProvenAbsent => WitnessOutcome::ProvenAbsent,
            WitnessSearch::BoundsExhausted(b) => WitnessOutcome::BoundsExhausted { bounds: b },
        },
    };
    Ok(Report::new("witness", &input, outcome))
}

/// Accepts either a bare descriptor pair or a pair spec carrying one.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum LowDimInput {
    Bare(LowDimSpec),
    InPair(PairSpec),
}

impl LowDimInput {
    pub fn into_spec(self) -> Result<LowDimSpec> {
        match self {
            LowDimInput::Bare(s) => Ok(s),
            LowDimInput::InPair(p) => p.lowdim.ok_or_else(|| Error::Input("pair spec has no \"lowdim\" entry".into())),
        }
    }
}

pub fn cmd_lowdim(spec: &LowDimSpec, max_order: usize) -> Result<Report<LowDimVerdict>> {
    let a = spec.a.build(max_order)?;
    let b = spec.b.build(max_order)?;
    Ok(Report::new("lowdim", spec, low_dim_verdict(&a, &b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z12_pair(phi1: &[usize], phi2: &[usize]) -> PairSpec {
        PairSpec::new(FrameSpec::Cyclic { cyclic: 12 }, phi1, phi2)
    }

    #[test]
    fn pair_specs_parse_from_json_and_toml() {
        let json = r#"{"frame": {"cyclic": 6}, "phi1": [0, 2, 4], "phi2": [0, 1, 2]}"#;
        let toml_text = "phi1 = [0, 2, 4]\nphi2 = [0, 1, 2]\n[frame]\ncyclic = 6\n";
        let a: PairSpec = parse_input(json, InputFormat::Json).unwrap();
        let b: PairSpec = parse_input(toml_text, InputFormat::Toml).unwrap();
        assert_eq!(a, b);
        assert_eq!(input_digest(&a), input_digest(&b));
        let (c1, c2) = a.build(DEFAULT_MAX_ORDER).unwrap();
        assert_eq!((c1.dim(), c2.dim()), (3, 3));
    }

    #[test]
    fn unknown_fields_and_bad_types_are_input_errors() {
        let bad = r#"{"frame": {"cyclic": 6}, "phi1": [0, 2, 4], "phi2": [0, 1, 2], "extra": 1}"#;
        assert!(matches!(parse_input::<PairSpec>(bad, InputFormat::Json), Err(Error::Input(_))));
        let spec = PairSpec::new(FrameSpec::Cyclic { cyclic: 6 }, &[0, 3, 4], &[0, 1, 2]);
        assert!(matches!(spec.build(64), Err(Error::InvalidCmType(_))));
    }

    #[test]
    fn order_cap() {
        let spec = FrameSpec::Cyclic { cyclic: 12 };
        assert!(build_frame(&spec, 12).is_ok());
        assert!(matches!(build_frame(&spec, 10), Err(Error::Input(_))));
    }

    #[test]
    fn classify_report() {
        let report = cmd_classify(&FrameSpec::Cyclic { cyclic: 12 }, 64).unwrap();
        assert_eq!(report.result.classes.len(), 6);
        assert_eq!(report.result.cm_types, 64);
        assert!(cmd_classify(&FrameSpec::Cyclic { cyclic: 7 }, 64).is_err());
    }

    #[test]
    fn verdict_report_is_deterministic() {
        let spec = z12_pair(&[0, 1, 2, 3, 4, 5], &[0, 7, 2, 3, 4, 5]);
        let a = cmd_verdict(&spec, 64).unwrap().to_json();
        let b = cmd_verdict(&spec, 64).unwrap().to_json();
        assert_eq!(a, b);
        let back: Report<VerdictRecord> = serde_json::from_str(&a).unwrap();
        assert!(back.result.mutual);
        assert_eq!(back.result.h12.torsion_u64(), vec![2, 2]);
        let value: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(value["result"]["direction_12"], "potentially_torsion_infinite");
    }

    #[test]
    fn witness_json_round_trip() {
        let spec = PairSpec::new(FrameSpec::Cyclic { cyclic: 6 }, &[0, 2, 4], &[0, 1, 2]);
        let report = cmd_witness(&spec, None, false, 64).unwrap();
        let WitnessOutcome::Found { witness } = &report.result else { panic!("{:?}", report.result) };
        assert_eq!(witness.descriptor.as_deref(), Some("H^1(A1^1)^v ⊗ H^3(A2^1)(1)"));
        let text = serde_json::to_string(witness).unwrap();
        let back: WitnessJson = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, witness);

        let mut check = spec.clone();
        check.witness = Some(back);
        let report = cmd_witness(&check, None, true, 64).unwrap();
        assert!(matches!(report.result, WitnessOutcome::Checked { verification: Verification::Valid, .. }));
        assert!(cmd_witness(&spec, None, true, 64).is_err());
    }

    #[test]
    fn tight_bounds_exhaust() {
        let spec = PairSpec::new(FrameSpec::Cyclic { cyclic: 6 }, &[0, 2, 4], &[0, 1, 2]);
        let report = cmd_witness(&spec, Some(SearchBounds { max_r: 1, max_t: 0 }), false, 64).unwrap();
        assert!(report.result.is_exhausted());
    }

    #[test]
    fn lowdim_inputs() {
        let text = r#"{"a": {"dim": 2, "type": "I"}, "b": {"dim": 3, "type": "II"}}"#;
        let spec = parse_input::<LowDimInput>(text, InputFormat::Json).unwrap().into_spec().unwrap();
        let report = cmd_lowdim(&spec, 64).unwrap();
        assert_eq!(report.result.a_for_b, TorsionKind::EssentiallyTorsionFinite);

        let text = r#"{"a": {"dim": 1, "type": "IV(1,1)"}, "b": {"dim": 3, "type": "IV(3,1)"}}"#;
        let spec = parse_input::<LowDimInput>(text, InputFormat::Json).unwrap().into_spec().unwrap();
        assert!(cmd_lowdim(&spec, 64).is_err());
    }
}
