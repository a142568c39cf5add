//! JSON documents: the input schema for marked fansy divisors and
//! constructor stanzas, and the output schema for computed results.

use crate::build::{
    bundle_rank2, downgrade, p1p1_example_bundle, p2_fan, p2_twists, projectivized_fan, BuildError,
    DowngradeInput, KlyachkoBundle, RayFiltration, FIXTURE_NAMES, GR24_JSON,
};
use crate::chow::ChowPresentation;
use crate::effcone::EffConeReport;
use crate::exactlin::{IntMatrix, IntVec, RatVec, SmithInvariants};
use crate::fansy::{CycleGenerator, MarkedFansyDivisor, ValidationReport};
use crate::polyhedra::{Cone, Fan, PolyhedralComplex, Polyhedron};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
}

/// An integer that serializes as a JSON number when it fits in `i64` and as a decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

pub fn json_ints(v: &[BigInt]) -> Vec<JsonInt> {
    v.iter().cloned().map(JsonInt).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDoc {
    pub rank: usize,
    pub cones: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DowngradeDoc {
    pub fan: FanDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_change: Option<Vec<Vec<i64>>>,
}

/// One ray's filtration as steps `[j, space]`: the space holds for all
/// indices up to `j` (and above the previous step); above the last step the
/// filtration is zero. Spaces are `"full"`, `"zero"`, or a point label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationDoc {
    pub ray: Vec<i64>,
    pub steps: Vec<(i64, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleDoc {
    pub fan: FanDoc,
    pub filtrations: Vec<FiltrationDoc>,
}

/// Either explicit data (`rank`, `points`, `complexes`, `marked`) or exactly one constructor stanza.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexes: Option<BTreeMap<String, Vec<CellDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub downgrade: Option<DowngradeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleDoc>,
}

/// A standalone fan file, optionally with a change of basis for downgrading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub rank: usize,
    pub cones: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_change: Option<Vec<Vec<i64>>>,
}

fn schema(msg: impl Into<String>) -> BuildError {
    BuildError::Malformed(msg.into())
}

fn ints(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &BigInt) -> Result<i64, BuildError> {
    v.to_i64()
        .ok_or_else(|| schema(format!("integer {v} does not fit the document format")))
}

fn small_vec(v: &[BigInt]) -> Result<Vec<i64>, BuildError> {
    v.iter().map(small).collect()
}

pub fn parse_rational(s: &str) -> Result<BigRational, BuildError> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a
            .trim()
            .parse()
            .map_err(|_| schema(format!("bad rational {s:?}")))?;
        let b: BigInt = b
            .trim()
            .parse()
            .map_err(|_| schema(format!("bad rational {s:?}")))?;
        if b == BigInt::from(0) {
            return Err(schema(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(a, b))
    } else {
        let a: BigInt = t
            .parse()
            .map_err(|_| schema(format!("bad rational {s:?}")))?;
        Ok(BigRational::from_integer(a))
    }
}

fn check_len(v: &[i64], n: usize, what: &str) -> Result<(), BuildError> {
    if v.len() != n {
        return Err(schema(format!("{what} {v:?} does not have length {n}")));
    }
    Ok(())
}

impl FanDoc {
    pub fn to_fan(&self) -> Result<Fan, BuildError> {
        let n = self.rank;
        let mut cones = Vec::new();
        for c in &self.cones {
            for r in c {
                check_len(r, n, "ray")?;
            }
            cones.push(Cone::new(n, c.iter().map(|r| ints(r)).collect()));
        }
        Ok(Fan::new(n, cones))
    }

    pub fn from_fan(f: &Fan) -> Result<FanDoc, BuildError> {
        Ok(FanDoc {
            rank: f.ambient(),
            cones: f
                .maximal_cones()
                .iter()
                .map(cone_doc)
                .collect::<Result<_, _>>()?,
        })
    }
}

fn cone_doc(c: &Cone) -> Result<Vec<Vec<i64>>, BuildError> {
    c.rays().iter().map(|r| small_vec(r)).collect()
}

fn matrix(rows: &[Vec<i64>]) -> Result<IntMatrix, BuildError> {
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(schema("ragged basis change"));
    }
    Ok(IntMatrix::from_rows(
        cols,
        rows.iter().map(|r| ints(r)).collect(),
    ))
}

impl DowngradeDoc {
    pub fn to_input(&self) -> Result<DowngradeInput, BuildError> {
        Ok(DowngradeInput {
            fan: self.fan.to_fan()?,
            basis_change: self.basis_change.as_deref().map(matrix).transpose()?,
        })
    }
}

impl FanFile {
    pub fn from_json(text: &str) -> Result<FanFile, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_input(&self) -> Result<DowngradeInput, BuildError> {
        DowngradeDoc {
            fan: FanDoc {
                rank: self.rank,
                cones: self.cones.clone(),
            },
            basis_change: self.basis_change.clone(),
        }
        .to_input()
    }
}

impl FiltrationDoc {
    pub fn to_filtration(&self, n: usize) -> Result<RayFiltration, BuildError> {
        check_len(&self.ray, n, "filtration ray")?;
        let ray = ints(&self.ray);
        let bad = |m: &str| schema(format!("filtration of ray {:?}: {m}", self.ray));
        let mut full_upto = None;
        let mut line: Option<(String, i64)> = None;
        let mut last: Option<i64> = None;
        let mut seen_zero = false;
        for (j, space) in &self.steps {
            if last.is_some_and(|l| *j <= l) {
                return Err(bad("step indices must increase"));
            }
            if seen_zero {
                return Err(bad("nothing may follow a zero step"));
            }
            last = Some(*j);
            match space.as_str() {
                "full" => {
                    if full_upto.is_some() || line.is_some() {
                        return Err(bad("the full space must come first, once"));
                    }
                    full_upto = Some(*j);
                }
                "zero" => seen_zero = true,
                label => {
                    if full_upto.is_none() {
                        return Err(bad("a line step must follow the full step"));
                    }
                    if line.is_some() {
                        return Err(bad("at most one line in a rank-two filtration"));
                    }
                    line = Some((label.to_string(), *j));
                }
            }
        }
        let full_upto = full_upto.ok_or_else(|| bad("missing full step"))?;
        Ok(RayFiltration {
            ray,
            full_upto,
            line,
        })
    }

    pub fn from_filtration(f: &RayFiltration) -> Result<FiltrationDoc, BuildError> {
        let mut steps = vec![(f.full_upto, "full".to_string())];
        if let Some((l, j)) = &f.line {
            steps.push((*j, l.clone()));
        }
        Ok(FiltrationDoc {
            ray: small_vec(&f.ray)?,
            steps,
        })
    }
}

impl BundleDoc {
    pub fn to_bundle(&self) -> Result<KlyachkoBundle, BuildError> {
        let fan = self.fan.to_fan()?;
        let filtrations = self
            .filtrations
            .iter()
            .map(|f| f.to_filtration(self.fan.rank))
            .collect::<Result<_, _>>()?;
        KlyachkoBundle::new(fan, filtrations)
    }

    pub fn from_bundle(b: &KlyachkoBundle) -> Result<BundleDoc, BuildError> {
        Ok(BundleDoc {
            fan: FanDoc::from_fan(&b.base)?,
            filtrations: b
                .filtrations
                .iter()
                .map(FiltrationDoc::from_filtration)
                .collect::<Result<_, _>>()?,
        })
    }
}

fn cell_to_polyhedron(n: usize, c: &CellDoc) -> Result<Polyhedron, BuildError> {
    let mut verts: Vec<RatVec> = Vec::new();
    for v in &c.vertices {
        if v.len() != n {
            return Err(schema(format!("vertex {v:?} does not have length {n}")));
        }
        verts.push(
            v.iter()
                .map(|s| parse_rational(s))
                .collect::<Result<_, _>>()?,
        );
    }
    if verts.is_empty() {
        return Err(schema("cell without vertices"));
    }
    for r in &c.rays {
        check_len(r, n, "ray")?;
    }
    let rays: Vec<IntVec> = c.rays.iter().map(|r| ints(r)).collect();
    Ok(Polyhedron::new(n, &verts, &rays)?)
}

fn polyhedron_to_cell(p: &Polyhedron) -> Result<CellDoc, BuildError> {
    Ok(CellDoc {
        vertices: p
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .collect(),
        rays: cone_doc(p.tail())?,
    })
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<InputDocument, DocumentError> {
        let doc: InputDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::Schema(format!(
                "unsupported schema_version {}",
                doc.schema_version
            )));
        }
        let explicit = doc.rank.is_some()
            || doc.points.is_some()
            || doc.complexes.is_some()
            || doc.marked.is_some();
        let stanzas = doc.downgrade.is_some() as usize + doc.bundle.is_some() as usize;
        if explicit as usize + stanzas != 1 {
            return Err(DocumentError::Schema(
                "exactly one of explicit data, a downgrade stanza or a bundle stanza is required"
                    .into(),
            ));
        }
        if explicit && (doc.rank.is_none() || doc.points.is_none() || doc.complexes.is_none()) {
            return Err(DocumentError::Schema(
                "explicit data needs rank, points and complexes".into(),
            ));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Explicit-data document of a marked fansy divisor.
    pub fn from_divisor(x: &MarkedFansyDivisor) -> Result<InputDocument, BuildError> {
        let mut complexes = BTreeMap::new();
        for (label, c) in x.points().iter().zip(x.complexes()) {
            let cells = c
                .cells()
                .iter()
                .map(polyhedron_to_cell)
                .collect::<Result<_, _>>()?;
            complexes.insert(label.clone(), cells);
        }
        Ok(InputDocument {
            schema_version: SCHEMA_VERSION,
            rank: Some(x.rank()),
            points: Some(x.points().to_vec()),
            complexes: Some(complexes),
            marked: Some(x.marked().iter().map(cone_doc).collect::<Result<_, _>>()?),
            downgrade: None,
            bundle: None,
        })
    }

    pub fn build(&self) -> Result<MarkedFansyDivisor, BuildError> {
        if let Some(d) = &self.downgrade {
            return downgrade(&d.to_input()?);
        }
        if let Some(b) = &self.bundle {
            return bundle_rank2(&b.to_bundle()?);
        }
        let n = self.rank.ok_or_else(|| schema("missing rank"))?;
        let points = self
            .points
            .as_ref()
            .ok_or_else(|| schema("missing points"))?;
        let complexes = self
            .complexes
            .as_ref()
            .ok_or_else(|| schema("missing complexes"))?;
        if let Some(extra) = complexes.keys().find(|k| !points.contains(k)) {
            return Err(schema(format!("complex for unlisted point {extra}")));
        }
        let mut fibers = Vec::new();
        for p in points {
            let cells = complexes
                .get(p)
                .ok_or_else(|| schema(format!("no complex for point {p}")))?;
            let polys = cells
                .iter()
                .map(|c| cell_to_polyhedron(n, c))
                .collect::<Result<_, _>>()?;
            fibers.push((p.clone(), PolyhedralComplex::new(n, polys)));
        }
        let mut marked = Vec::new();
        for c in self.marked.iter().flatten() {
            for r in c {
                check_len(r, n, "marked cone generator")?;
            }
            marked.push(Cone::new(n, c.iter().map(|r| ints(r)).collect()));
        }
        Ok(MarkedFansyDivisor::new(n, fibers, marked)?)
    }
}

/// Input document of a named fixture: explicit data for `gr24`, a bundle
/// stanza for `p1p1_bundle`, downgrade stanzas for the projective bundles.
pub fn fixture_document(name: &str) -> Result<InputDocument, BuildError> {
    let stanza = |downgrade, bundle| InputDocument {
        schema_version: SCHEMA_VERSION,
        rank: None,
        points: None,
        complexes: None,
        marked: None,
        downgrade,
        bundle,
    };
    if !FIXTURE_NAMES.contains(&name) {
        return Err(BuildError::UnknownFixture(name.to_string()));
    }
    match name {
        "gr24" => InputDocument::from_json(GR24_JSON).map_err(|e| schema(e.to_string())),
        "p1p1_bundle" => Ok(stanza(
            None,
            Some(BundleDoc::from_bundle(&p1p1_example_bundle())?),
        )),
        _ => {
            let f = fixture_fan(name)?;
            Ok(stanza(
                Some(DowngradeDoc {
                    fan: FanDoc {
                        rank: f.rank,
                        cones: f.cones,
                    },
                    basis_change: None,
                }),
                None,
            ))
        }
    }
}

/// The toric fan behind a downgrade fixture (`p2_E`, `p2_F`).
pub fn fixture_fan(name: &str) -> Result<FanFile, BuildError> {
    let twists = p2_twists(name).ok_or_else(|| BuildError::UnknownFixture(name.to_string()))?;
    let doc = FanDoc::from_fan(&projectivized_fan(&p2_fan(), &twists)?)?;
    Ok(FanFile {
        schema_version: Some(SCHEMA_VERSION),
        rank: doc.rank,
        cones: doc.cones,
        basis_change: None,
    })
}

/// A cycle generator identified by its kind, point label and geometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    pub rays: Vec<Vec<JsonInt>>,
}

impl GeneratorDoc {
    pub fn from_generator(g: &CycleGenerator) -> GeneratorDoc {
        let cone_rays = |c: &Cone| c.rays().iter().map(|r| json_ints(r)).collect();
        match g {
            CycleGenerator::V { label, face, .. } => GeneratorDoc {
                kind: "V".into(),
                point: Some(label.clone()),
                vertices: Some(
                    face.vertices()
                        .iter()
                        .map(|v| v.iter().map(|x| x.to_string()).collect())
                        .collect(),
                ),
                rays: cone_rays(face.tail()),
            },
            CycleGenerator::R { cone } | CycleGenerator::T { cone } => GeneratorDoc {
                kind: g.kind().to_string(),
                point: None,
                vertices: None,
                rays: cone_rays(cone),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmithDoc {
    pub free_rank: usize,
    pub torsion: Vec<JsonInt>,
}

impl From<&SmithInvariants> for SmithDoc {
    fn from(s: &SmithInvariants) -> Self {
        SmithDoc {
            free_rank: s.free_rank,
            torsion: json_ints(&s.torsion),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountsDoc {
    pub r: usize,
    pub v: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDoc {
    pub free: Vec<JsonInt>,
    pub torsion: Vec<JsonInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffClassDoc {
    pub class: Vec<JsonInt>,
    pub members: Vec<usize>,
}

/// The distinct effective generator classes of one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffDoc {
    pub generator_count: usize,
    pub distinct: Vec<EffClassDoc>,
}

impl From<&EffConeReport> for EffDoc {
    fn from(r: &EffConeReport) -> Self {
        EffDoc {
            generator_count: r.generators.len(),
            distinct: r
                .distinct
                .iter()
                .map(|d| EffClassDoc {
                    class: json_ints(&d.class),
                    members: d.members.clone(),
                })
                .collect(),
        }
    }
}

/// Results for one degree `k`. Optional parts are omitted when not requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeDoc {
    pub k: usize,
    pub counts: CountsDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<Vec<JsonInt>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smith: Option<SmithDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<ClassDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eff: Option<EffDoc>,
}

impl DegreeDoc {
    pub fn from_counts(k: usize, (r, v, t): (usize, usize, usize)) -> DegreeDoc {
        DegreeDoc {
            k,
            counts: CountsDoc { r, v, t },
            generators: None,
            relations: None,
            smith: None,
            classes: None,
            eff: None,
        }
    }

    pub fn from_presentation(p: &ChowPresentation) -> DegreeDoc {
        DegreeDoc {
            generators: Some(
                p.generators
                    .iter()
                    .map(GeneratorDoc::from_generator)
                    .collect(),
            ),
            relations: Some(
                p.relations
                    .row_vecs()
                    .iter()
                    .map(|r| json_ints(r))
                    .collect(),
            ),
            smith: Some((&p.smith).into()),
            classes: Some(
                p.class_map
                    .iter()
                    .map(|c| ClassDoc {
                        free: json_ints(&c.free),
                        torsion: json_ints(&c.torsion),
                    })
                    .collect(),
            ),
            ..DegreeDoc::from_counts(p.k, p.counts())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationDoc {
    pub valid: bool,
    pub violations: Vec<String>,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(r: &ValidationReport) -> Self {
        ValidationDoc {
            valid: r.is_valid(),
            violations: r.violations.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// Agreement of the pipeline and the toric oracle in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckDoc {
    pub k: usize,
    pub pipeline: SmithDoc,
    pub oracle: SmithDoc,
    pub agree: bool,
}

/// Output of one command. Field order is fixed, so equal results serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutputDocument {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub crosscheck: Vec<CrosscheckDoc>,
}

impl OutputDocument {
    pub fn new(command: &str) -> OutputDocument {
        OutputDocument {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            validation: None,
            degrees: Vec::new(),
            crosscheck: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}
