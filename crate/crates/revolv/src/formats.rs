//! JSON documents for profiles, bodies and reports, and the sections CSV.

use std::path::Path;

use revolv_core::counterexamples::{BonnesenPair, KleeReport, Triple, VerificationReport};
use revolv_core::profile::{klee_profile, Base, Shape, CONCAVITY_TOL};
use revolv_core::{BodyOfRevolution, BumpTerm, Profile, Sign, SignedTerm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpDoc {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
    /// `+1` or `-1`.
    pub sign: i8,
    pub reflected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    /// `term_sum` or `level_branch`.
    pub variant: String,
    pub base: String,
    #[serde(default)]
    pub terms: Vec<TermDoc>,
    #[serde(default)]
    pub shift: Option<BumpDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDoc {
    pub d: usize,
    pub lambda: f64,
    pub profile: ProfileDoc,
}

impl From<BumpTerm> for BumpDoc {
    fn from(b: BumpTerm) -> Self {
        BumpDoc {
            center: b.center,
            half_width: b.half_width,
            amplitude: b.amplitude,
        }
    }
}

impl BumpDoc {
    fn to_bump(self) -> Result<BumpTerm, CliError> {
        Ok(BumpTerm::new(self.center, self.half_width, self.amplitude)?)
    }
}

impl From<&Profile> for ProfileDoc {
    fn from(p: &Profile) -> Self {
        match p.shape() {
            Shape::TermSum { base, terms } => ProfileDoc {
                variant: "term_sum".into(),
                base: match base {
                    Base::Semicircle => "semicircle".into(),
                },
                terms: terms
                    .iter()
                    .map(|t| TermDoc {
                        center: t.bump.center,
                        half_width: t.bump.half_width,
                        amplitude: t.bump.amplitude,
                        sign: t.sign.factor() as i8,
                        reflected: t.reflected,
                    })
                    .collect(),
                shift: None,
            },
            Shape::LevelBranch { shift } => ProfileDoc {
                variant: "level_branch".into(),
                base: "semicircle".into(),
                terms: Vec::new(),
                shift: Some((*shift).into()),
            },
        }
    }
}

impl ProfileDoc {
    /// Rebuilds the profile; rejects documents describing a non-concave one.
    pub fn to_profile(&self) -> Result<Profile, CliError> {
        if self.base != "semicircle" {
            return Err(CliError::Config(format!("unknown profile base `{}`", self.base)));
        }
        match self.variant.as_str() {
            "term_sum" => {
                if self.shift.is_some() {
                    return Err(CliError::Config("a term_sum profile has no shift".into()));
                }
                let terms = self
                    .terms
                    .iter()
                    .map(|t| {
                        let sign = match t.sign {
                            1 => Sign::Plus,
                            -1 => Sign::Minus,
                            other => return Err(CliError::Config(format!("term sign must be 1 or -1, got {other}"))),
                        };
                        let bump = BumpTerm::new(t.center, t.half_width, t.amplitude)?;
                        Ok(SignedTerm::new(bump, sign, t.reflected))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let profile = Profile::term_sum(terms)?;
                let margin = profile.concavity_margin();
                if margin > CONCAVITY_TOL {
                    return Err(CliError::Config(format!(
                        "profile is not concave (second-difference margin {margin:e})"
                    )));
                }
                Ok(profile)
            }
            "level_branch" => {
                if !self.terms.is_empty() {
                    return Err(CliError::Config("a level_branch profile has no terms".into()));
                }
                let shift = self
                    .shift
                    .ok_or_else(|| CliError::Config("level_branch profile needs a shift".into()))?;
                Ok(klee_profile(shift.to_bump()?)?)
            }
            other => Err(CliError::Config(format!("unknown profile variant `{other}`"))),
        }
    }
}

impl From<&BodyOfRevolution> for BodyDoc {
    fn from(b: &BodyOfRevolution) -> Self {
        BodyDoc {
            d: b.dim(),
            lambda: b.scale(),
            profile: b.profile().into(),
        }
    }
}

impl BodyDoc {
    pub fn to_body(&self) -> Result<BodyOfRevolution, CliError> {
        Ok(BodyOfRevolution::new(self.d, self.profile.to_profile()?, self.lambda)?)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read body file {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("malformed body file {}: {e}", path.display())))
    }
}

/// Construction summary written next to the two bodies of a pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDoc {
    pub d: usize,
    pub eps: f64,
    pub rejected_eps: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub basis: Vec<BumpDoc>,
    pub psi: Option<BumpDoc>,
    pub reduced_residuals: Vec<f64>,
    pub full_residuals: Vec<f64>,
    pub plus: BodyDoc,
    pub minus: BodyDoc,
}

impl From<&BonnesenPair> for PairDoc {
    fn from(p: &BonnesenPair) -> Self {
        PairDoc {
            d: p.plus.dim(),
            eps: p.eps,
            rejected_eps: p.rejected.clone(),
            coefficients: p.solution.coefficients.clone(),
            basis: p.system.basis().iter().map(|&b| b.into()).collect(),
            psi: p.psi.map(Into::into),
            reduced_residuals: p.solution.reduced_residuals.clone(),
            full_residuals: p.solution.full_residuals.clone(),
            plus: (&p.plus).into(),
            minus: (&p.minus).into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleDoc {
    #[serde(rename = "A")]
    pub central: f64,
    #[serde(rename = "M")]
    pub maximal: f64,
    #[serde(rename = "P")]
    pub projection: f64,
}

impl From<Triple> for TripleDoc {
    fn from(t: Triple) -> Self {
        TripleDoc {
            central: t.central,
            maximal: t.maximal,
            projection: t.projection,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssentialDifferenceDoc {
    pub linf_direct: f64,
    pub linf_mirror: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimDoc {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Pair verification report. The short key names are the established
/// interchange format; the Rust names say what each entry holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub grid: Vec<f64>,
    #[serde(rename = "A1")]
    pub central_first: Vec<f64>,
    #[serde(rename = "A2")]
    pub central_second: Vec<f64>,
    #[serde(rename = "M1")]
    pub maximal_first: Vec<f64>,
    #[serde(rename = "M2")]
    pub maximal_second: Vec<f64>,
    #[serde(rename = "P1")]
    pub projection_first: Vec<f64>,
    #[serde(rename = "P2")]
    pub projection_second: Vec<f64>,
    pub axis: [TripleDoc; 2],
    pub max_rel_discrepancy: TripleDoc,
    #[serde(rename = "pojmal_pass")]
    pub chord_window_pass: bool,
    #[serde(rename = "propnew_residual")]
    pub profile_identity_residual: f64,
    pub essential_difference: EssentialDifferenceDoc,
    pub moment_residuals: Vec<f64>,
    pub concavity_margins: [f64; 2],
    pub support_pair_residual: f64,
    pub radial_pair_residual: f64,
    pub chord_identity_residual: f64,
    pub eps: Option<f64>,
    pub coefficients: Vec<f64>,
    pub seed: u64,
    pub failures: Vec<String>,
    pub claims: Vec<ClaimDoc>,
    pub pass: bool,
}

fn claims_doc(claims: &[revolv_core::counterexamples::Claim]) -> Vec<ClaimDoc> {
    claims
        .iter()
        .map(|c| ClaimDoc {
            name: c.name.to_string(),
            value: c.value,
            threshold: c.threshold,
            pass: c.pass,
        })
        .collect()
}

impl ReportDoc {
    pub fn new(r: &VerificationReport, pair: Option<&BonnesenPair>, seed: u64) -> Self {
        let col = |v: &[Triple], f: fn(&Triple) -> f64| v.iter().map(f).collect::<Vec<_>>();
        ReportDoc {
            grid: r.grid.clone(),
            central_first: col(&r.first, |t| t.central),
            central_second: col(&r.second, |t| t.central),
            maximal_first: col(&r.first, |t| t.maximal),
            maximal_second: col(&r.second, |t| t.maximal),
            projection_first: col(&r.first, |t| t.projection),
            projection_second: col(&r.second, |t| t.projection),
            axis: r.axis.map(Into::into),
            max_rel_discrepancy: r.max_rel_discrepancy.into(),
            chord_window_pass: r.chord_window,
            profile_identity_residual: r.profile_identity_residual,
            essential_difference: EssentialDifferenceDoc {
                linf_direct: r.linf_direct,
                linf_mirror: r.linf_mirror,
            },
            moment_residuals: r.moment_residuals.clone(),
            concavity_margins: r.concavity_margins,
            support_pair_residual: r.support_pair_residual,
            radial_pair_residual: r.radial_pair_residual,
            chord_identity_residual: r.chord_identity_residual,
            eps: pair.map(|p| p.eps),
            coefficients: pair.map(|p| p.solution.coefficients.clone()).unwrap_or_default(),
            seed,
            failures: r.failures.clone(),
            claims: claims_doc(&r.claims),
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KleeReportDoc {
    pub grid: Vec<f64>,
    #[serde(rename = "A")]
    pub central: Vec<f64>,
    #[serde(rename = "M")]
    pub maximal: Vec<f64>,
    pub reference: f64,
    pub max_rel_deviation: f64,
    pub axis_maximal: f64,
    pub asymmetry: f64,
    pub concavity_margin: f64,
    pub branch_margin: Option<f64>,
    pub level_residual: f64,
    pub distribution_discrepancy: f64,
    pub body: BodyDoc,
    pub seed: u64,
    pub failures: Vec<String>,
    pub claims: Vec<ClaimDoc>,
    pub pass: bool,
}

impl KleeReportDoc {
    pub fn new(r: &KleeReport, body: &BodyOfRevolution, seed: u64) -> Self {
        KleeReportDoc {
            grid: r.grid.clone(),
            central: r.central.clone(),
            maximal: r.maximal.clone(),
            reference: r.reference,
            max_rel_deviation: r.max_rel_deviation,
            axis_maximal: r.axis_maximal,
            asymmetry: r.asymmetry,
            concavity_margin: r.concavity_margin,
            branch_margin: r.branch_margin,
            level_residual: r.level_residual,
            distribution_discrepancy: r.distribution_discrepancy,
            body: body.into(),
            seed,
            failures: r.failures.clone(),
            claims: claims_doc(&r.claims),
            pass: r.pass,
        }
    }
}

/// Writes pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

pub const CSV_HEADER: &str = "s,A,M,P,h_star,x,y";

/// One row of the sections table. The axis row has `slope = None`; its
/// `h_star` is the axial position of the largest section and `x = y` its
/// radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionRow {
    pub slope: Option<f64>,
    pub central: f64,
    pub maximal: f64,
    pub projection: f64,
    pub h_star: f64,
    pub x: f64,
    pub y: f64,
}

/// 15 significant digits in scientific notation.
fn number(v: f64) -> String {
    format!("{v:.14e}")
}

impl SectionRow {
    /// The row with every value rounded to the printed precision.
    pub fn rounded(&self) -> SectionRow {
        let r = |v: f64| number(v).parse::<f64>().expect("formatted float parses");
        SectionRow {
            slope: self.slope.map(r),
            central: r(self.central),
            maximal: r(self.maximal),
            projection: r(self.projection),
            h_star: r(self.h_star),
            x: r(self.x),
            y: r(self.y),
        }
    }

    fn record(&self) -> [String; 7] {
        [
            self.slope.map_or_else(|| "axis".to_string(), number),
            number(self.central),
            number(self.maximal),
            number(self.projection),
            number(self.h_star),
            number(self.x),
            number(self.y),
        ]
    }
}

pub fn write_sections_csv(rows: &[SectionRow]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    w.write_record(&header).expect("writing to memory");
    for row in rows {
        w.write_record(row.record()).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("ASCII output")
}

pub fn parse_sections_csv(text: &str) -> Result<Vec<SectionRow>, CliError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Config(format!("sections CSV: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(CliError::Config("sections CSV has an unexpected header".into()));
    }
    reader
        .records()
        .enumerate()
        .map(|(i, record)| {
            let bad = |what: &str| CliError::Config(format!("sections CSV line {}: {what}", i + 2));
            let record = record.map_err(|e| bad(&e.to_string()))?;
            if record.len() != 7 {
                return Err(bad("expected 7 fields"));
            }
            let num = |k: usize| record[k].parse::<f64>().map_err(|_| bad("not a number"));
            let slope = if &record[0] == "axis" { None } else { Some(num(0)?) };
            Ok(SectionRow {
                slope,
                central: num(1)?,
                maximal: num(2)?,
                projection: num(3)?,
                h_star: num(4)?,
                x: num(5)?,
                y: num(6)?,
            })
        })
        .collect()
}
