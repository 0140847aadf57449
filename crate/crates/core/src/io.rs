//! JSON documents for instances and construction reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::Algebra;
use crate::check::Check;
use crate::grading::{GradedHypotheses, Grading, GroupAction};
use crate::group::{FiniteGroup, PrimeSeries};
use crate::instance::Instance;
use crate::linalg::{Matrix, PrimeField, Subspace};
use crate::pipeline::{ConstructionReport, InvariantHypotheses};

pub const REPORT_KIND: &str = "nilgrade-report";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cannot encode: {0}")]
    Emit(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub p: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `[i, j, k, c]`: `e_i e_j` has coefficient `c` at `e_k`.
    pub products: Vec<[u64; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

/// Row-major matrix acting on coordinate columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementMatrix {
    pub element: usize,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ElementMatrix>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub field: FieldBlock,
    pub algebra: AlgebraBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupBlock>,
    /// Grade of each basis vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
    /// Spanning vectors of the hypothesis ideal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub kind: String,
    pub tool_version: String,
    pub command: String,
    /// SHA-256 of the input file bytes, hex.
    pub input_digest: String,
    pub instance: InstanceDocument,
    pub report: ConstructionReport,
}

impl ReportDocument {
    pub fn new(command: &str, input: &[u8], instance: InstanceDocument, report: ConstructionReport) -> Self {
        ReportDocument {
            kind: REPORT_KIND.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            input_digest: sha256_hex(input),
            instance,
            report,
        }
    }
}

/// Either document kind, told apart by the `kind` key.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Instance(InstanceDocument),
    Report(Box<ReportDocument>),
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn parse_document(text: &str) -> Result<InstanceDocument, IoError> {
    from_json(text)
}

pub fn parse_report(text: &str) -> Result<ReportDocument, IoError> {
    let doc: ReportDocument = from_json(text)?;
    if doc.kind != REPORT_KIND {
        return Err(IoError::Schema {
            path: "kind".into(),
            message: format!("expected \"{REPORT_KIND}\""),
        });
    }
    Ok(doc)
}

pub fn parse_input(text: &str) -> Result<Input, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Schema {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if value.get("kind").is_some() {
        Ok(Input::Report(Box::new(parse_report(text)?)))
    } else {
        Ok(Input::Instance(parse_document(text)?))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    parse_document(text)?.to_instance()
}

pub fn emit_instance(instance: &Instance) -> Result<String, IoError> {
    let doc = InstanceDocument::from_instance(instance)?;
    Ok(to_pretty(&doc))
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Write through a sibling temporary file and rename over the target.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

fn scalar(field: PrimeField, v: u64, at: &str) -> Result<u32, IoError> {
    if v >= field.p() as u64 {
        return Err(invalid(format!("{at}: {v} is not a residue modulo {}", field.p())));
    }
    Ok(v as u32)
}

fn vector(field: PrimeField, dim: usize, v: &[u64], at: &str) -> Result<Vec<u32>, IoError> {
    if v.len() != dim {
        return Err(invalid(format!("{at}: expected length {dim}, found {}", v.len())));
    }
    v.iter().map(|&x| scalar(field, x, at)).collect()
}

fn matrix(field: PrimeField, dim: usize, rows: &[Vec<u64>], at: &str) -> Result<Matrix, IoError> {
    if rows.len() != dim {
        return Err(invalid(format!("{at}: expected {dim} rows, found {}", rows.len())));
    }
    let rows: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(r, row)| vector(field, dim, row, &format!("{at}[{r}]")))
        .collect::<Result<_, _>>()?;
    Matrix::from_rows(field, dim, &rows).map_err(|e| invalid(format!("{at}: {e}")))
}

impl InstanceDocument {
    pub fn from_instance(inst: &Instance) -> Result<Self, IoError> {
        let a = &inst.algebra;
        let group = inst
            .group
            .as_ref()
            .or(inst.grading.as_ref().map(|g| g.group()))
            .or(inst.action.as_ref().map(|x| x.group()));
        let grading = match &inst.grading {
            Some(g) => Some(
                g.basis_labels()
                    .ok_or_else(|| IoError::Emit("grading is not aligned with the basis".into()))?,
            ),
            None => None,
        };
        let action = inst.action.as_ref().map(|act| ActionBlock {
            elements: Some(
                act.matrices()
                    .iter()
                    .enumerate()
                    .map(|(element, m)| ElementMatrix {
                        element,
                        matrix: m.to_rows().into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect(),
                    })
                    .collect(),
            ),
            generators: None,
        });
        Ok(InstanceDocument {
            field: FieldBlock { p: a.field().p() },
            algebra: AlgebraBlock {
                dim: a.dim(),
                basis_names: a.names().to_vec(),
                products: a
                    .structure_constants()
                    .map(|(i, j, k, c)| [i as u64, j as u64, k as u64, c as u64])
                    .collect(),
            },
            group: group.map(|g| GroupBlock {
                order: g.order(),
                table: g.table().to_vec(),
                names: Some(g.names().to_vec()),
            }),
            grading,
            action,
            ideal: inst
                .ideal
                .as_ref()
                .map(|s| s.basis_vectors().into_iter().map(|v| v.into_iter().map(u64::from).collect()).collect()),
            series: inst.series.as_ref().map(|s| s.chain.clone()),
        })
    }

    pub fn field(&self) -> Result<PrimeField, IoError> {
        PrimeField::new(self.field.p).map_err(|e| invalid(format!("field.p: {e}")))
    }

    pub fn build_algebra(&self) -> Result<Algebra, IoError> {
        let f = self.field()?;
        let b = &self.algebra;
        if b.basis_names.len() != b.dim {
            return Err(invalid(format!(
                "algebra.basis_names: expected {} names, found {}",
                b.dim,
                b.basis_names.len()
            )));
        }
        let mut products = Vec::with_capacity(b.products.len());
        for (n, q) in b.products.iter().enumerate() {
            let at = format!("algebra.products[{n}]");
            if q[..3].iter().any(|&x| x >= b.dim as u64) {
                return Err(invalid(format!("{at}: basis index out of range")));
            }
            products.push((q[0] as usize, q[1] as usize, q[2] as usize, scalar(f, q[3], &at)?));
        }
        Algebra::new(f, b.basis_names.clone(), products).map_err(|e| invalid(e.to_string()))
    }

    pub fn build_group(&self) -> Result<Option<FiniteGroup>, IoError> {
        let Some(g) = &self.group else {
            return Ok(None);
        };
        if g.table.len() != g.order {
            return Err(invalid(format!("group.order is {} but the table has {} rows", g.order, g.table.len())));
        }
        FiniteGroup::from_table(g.table.clone(), g.names.clone())
            .map(Some)
            .map_err(|e| invalid(format!("group.table: {e}")))
    }

    fn require_group(&self, group: &Option<FiniteGroup>, what: &str) -> Result<FiniteGroup, IoError> {
        group.clone().ok_or_else(|| invalid(format!("{what} requires a group block")))
    }

    pub fn build_grading(&self, algebra: &Algebra, group: &Option<FiniteGroup>) -> Result<Option<Grading>, IoError> {
        let Some(labels) = &self.grading else {
            return Ok(None);
        };
        let g = self.require_group(group, "grading")?;
        Grading::from_labels(algebra, g, labels)
            .map(Some)
            .map_err(|e| invalid(format!("grading: {e}")))
    }

    pub fn build_action(&self, algebra: &Algebra, group: &Option<FiniteGroup>) -> Result<Option<GroupAction>, IoError> {
        let Some(block) = &self.action else {
            return Ok(None);
        };
        let g = self.require_group(group, "action")?;
        let f = algebra.field();
        let dim = algebra.dim();
        let read = |list: &[ElementMatrix], key: &str| -> Result<Vec<(usize, Matrix)>, IoError> {
            list.iter()
                .enumerate()
                .map(|(n, em)| {
                    let at = format!("action.{key}[{n}]");
                    if em.element >= g.order() {
                        return Err(invalid(format!("{at}.element: {} is not a group element", em.element)));
                    }
                    Ok((em.element, matrix(f, dim, &em.matrix, &format!("{at}.matrix"))?))
                })
                .collect()
        };
        match (&block.elements, &block.generators) {
            (Some(list), None) => {
                let mut mats: Vec<Option<Matrix>> = vec![None; g.order()];
                for (e, m) in read(list, "elements")? {
                    if mats[e].replace(m).is_some() {
                        return Err(invalid(format!("action.elements: element {e} listed twice")));
                    }
                }
                let mats = mats
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| invalid("action.elements: every group element needs a matrix"))?;
                GroupAction::new(g, mats).map(Some).map_err(|e| invalid(format!("action: {e}")))
            }
            (None, Some(list)) => {
                let gens = read(list, "generators")?;
                GroupAction::from_generators(algebra, g, &gens)
                    .map(Some)
                    .map_err(|e| invalid(format!("action.generators: {e}")))
            }
            _ => Err(invalid("action: give exactly one of `elements` or `generators`")),
        }
    }

    pub fn build_ideal(&self, algebra: &Algebra) -> Result<Option<Subspace>, IoError> {
        let Some(vs) = &self.ideal else {
            return Ok(None);
        };
        let f = algebra.field();
        let rows = vs
            .iter()
            .enumerate()
            .map(|(n, v)| vector(f, algebra.dim(), v, &format!("ideal[{n}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(Subspace::span(f, algebra.dim(), rows).expect("lengths checked")))
    }

    pub fn build_series(&self, group: &Option<FiniteGroup>) -> Result<Option<PrimeSeries>, IoError> {
        let Some(chain) = &self.series else {
            return Ok(None);
        };
        let g = self.require_group(group, "series")?;
        if chain.iter().flatten().any(|&x| x >= g.order()) {
            return Err(invalid("series: element index out of range"));
        }
        Ok(Some(PrimeSeries { chain: chain.clone() }))
    }

    /// Every block converted; structural problems are errors, semantic
    /// validation is left to [`validate_document`].
    pub fn to_instance(&self) -> Result<Instance, IoError> {
        let algebra = self.build_algebra()?;
        let group = self.build_group()?;
        let grading = self.build_grading(&algebra, &group)?;
        let action = self.build_action(&algebra, &group)?;
        let ideal = self.build_ideal(&algebra)?;
        let series = self.build_series(&group)?;
        Ok(Instance {
            algebra,
            group,
            grading,
            action,
            ideal,
            series,
        })
    }
}

/// Run every applicable validator. Structural errors (schema-valid documents
/// whose indices or shapes do not fit) are returned as `Err`; a Cayley table
/// failing the group axioms is a failed check.
pub fn validate_document(doc: &InstanceDocument) -> Result<Vec<Check>, IoError> {
    let algebra = doc.build_algebra()?;
    let mut checks = Vec::new();
    let violations = algebra.validate_associativity();
    checks.push(match violations.first() {
        None => Check::pass("associativity"),
        Some(v) => Check::fail("associativity", json!(v)).with_detail(format!("{} violating triples", violations.len())),
    });
    let group = match doc.build_group() {
        Ok(g) => g,
        Err(IoError::Invalid(msg)) if doc.group.as_ref().is_some_and(|g| g.table.len() == g.order) => {
            let reason = FiniteGroup::from_table(doc.group.as_ref().expect("present").table.clone(), None)
                .err()
                .map(|e| json!(e))
                .unwrap_or(json!(msg));
            checks.push(Check::fail("group axioms", reason).with_detail(msg));
            return Ok(checks);
        }
        Err(e) => return Err(e),
    };
    if group.is_some() {
        checks.push(Check::pass("group axioms"));
    }
    let grading = doc.build_grading(&algebra, &group)?;
    if let Some(g) = &grading {
        let report = g.validate(&algebra);
        checks.push(match report.violations.first() {
            None => Check::pass("grading"),
            Some(v) => Check::fail("grading", json!(v)),
        });
    }
    let action = doc.build_action(&algebra, &group)?;
    if let Some(a) = &action {
        let report = a.validate(&algebra);
        checks.push(match report.violations.first() {
            None => Check::pass("action"),
            Some(v) => Check::fail("action", json!(v)).with_detail(format!("{} violations", report.violations.len())),
        });
    }
    if let (Some(series), Some(g)) = (doc.build_series(&group)?, &group) {
        checks.push(match series.validate(g) {
            Ok(()) => Check::pass("series"),
            Err(e) => Check::fail("series", json!(e.to_string())),
        });
    }
    if let Some(ideal) = doc.build_ideal(&algebra)? {
        checks.push(ideal_check(&algebra, grading, action, ideal));
    }
    Ok(checks)
}

/// The hypothesis ideal against whatever structure the document carries.
fn ideal_check(algebra: &Algebra, grading: Option<Grading>, action: Option<GroupAction>, ideal: Subspace) -> Check {
    let name = "ideal hypotheses";
    let outcome = if let Some(g) = grading {
        GradedHypotheses::new(algebra, g, ideal).map(|_| ()).map_err(|e| e.to_string())
    } else if let Some(a) = action {
        InvariantHypotheses::new(algebra, a, ideal).map(|_| ()).map_err(|e| e.to_string())
    } else {
        match algebra.classify_ideal(&ideal, &algebra.whole()) {
            Ok(h) if !h.is_two_sided() => Err("not a two-sided ideal".into()),
            Ok(_) => match algebra.nilpotency_index(&ideal) {
                Ok(n) if n.index().is_some() => Ok(()),
                _ => Err("not nilpotent".into()),
            },
            Err(e) => Err(e.to_string()),
        }
    };
    match outcome {
        Ok(()) => Check::pass(name),
        Err(msg) => Check::fail(name, json!(msg)),
    }
}

/// Checks that a report's ideal is a two-sided ideal of the embedded algebra
/// with the recorded index and codimension.
pub fn reverify_report(doc: &ReportDocument) -> Result<Vec<Check>, IoError> {
    let algebra = doc.instance.build_algebra()?;
    let f = algebra.field();
    let rows = doc
        .report
        .ideal
        .iter()
        .enumerate()
        .map(|(n, v)| vector(f, algebra.dim(), &v.iter().map(|&x| x as u64).collect::<Vec<_>>(), &format!("report.ideal[{n}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let z = Subspace::span(f, algebra.dim(), rows).expect("lengths checked");
    let mut checks = Vec::new();
    let h = algebra.classify_ideal(&z, &algebra.whole()).map_err(|e| invalid(e.to_string()))?;
    checks.push(Check::from_witness(
        "result is a two-sided ideal",
        (!h.is_two_sided()).then(|| json!({"left": h.left_closed, "right": h.right_closed})),
    ));
    let index = algebra.nilpotency_index(&z).map_err(|e| invalid(e.to_string()))?;
    checks.push(Check::from_witness(
        "recorded index reproduced",
        (index != doc.report.achieved_index).then(|| json!({"computed": index, "recorded": doc.report.achieved_index})),
    ));
    let codim = algebra.dim() - z.dim();
    checks.push(Check::from_witness(
        "recorded codimension reproduced",
        (codim != doc.report.achieved_codim).then(|| json!({"computed": codim, "recorded": doc.report.achieved_codim})),
    ));
    Ok(checks)
}
