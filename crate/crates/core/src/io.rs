//! Versioned JSON documents for spaces, maps and tensor elements, and JSON
//! renderings of every report.
//!
//! Rationals are strings (`"3"`, `"-1/2"`); integers in JSON numbers are
//! accepted on input. A space reference is an inline space document, a path
//! relative to the referring document, or a builtin name such as
//! `"linf(3)"`, `"lin_space(2)"` or `"sym(2)"`.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::cone::{Certificate, Cone, ConeRep, Halfspace, Term, Verdict};
use crate::error::{Error, Result};
use crate::factorize::{Factorization, FactorizationRun};
use crate::kernel::ldlt::{PsdCertificate, PsdDecision};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{format_rational, parse_rational, Rational, Vector};
use crate::maps::{AouMap, Lifting, MapReport, OrderIdealReport, OrderQuotientReport};
use crate::perturb::{AuerbachBasis, NormBound, PertResult, PerturbResult};
use crate::psd::{EpsCheck, EpsEvidence, PiCheck, PiEvidence, WitnessReport};
use crate::space::{lin_space, linf, sym_space, Archimedeanization, AouSpace, ValidationReport};
use crate::tensor::{NuclearPairReport, NuclearReport, TensorElement};

pub const FORMAT_VERSION: u64 = 1;

pub trait ToJson {
    fn to_json(&self) -> Value;
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn vectors_json(vs: &[Vector]) -> Value {
    Value::Array(vs.iter().map(|v| vector_json(v)).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_json(m.row(i))).collect())
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn parse_rational_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(fail(format!("number {n} is not an integer; write rationals as \"p/q\" strings"))),
        },
        other => Err(fail(format!("expected a rational, found {other}"))),
    }
}

pub fn parse_vector_json(v: &Value) -> Result<Vector> {
    v.as_array()
        .ok_or_else(|| fail("expected an array of rationals"))?
        .iter()
        .map(parse_rational_json)
        .collect()
}

pub fn parse_vectors_json(v: &Value) -> Result<Vec<Vector>> {
    v.as_array()
        .ok_or_else(|| fail("expected an array of rows"))?
        .iter()
        .map(parse_vector_json)
        .collect()
}

/// Parses a vector written as JSON, e.g. `[1, "-1/2"]`.
pub fn parse_vector_str(s: &str) -> Result<Vector> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    parse_vector_json(&v)
}

pub fn parse_matrix_json(v: &Value, rows: usize, cols: usize) -> Result<Matrix> {
    let data = parse_vectors_json(v)?;
    if data.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: data.len(),
        });
    }
    Matrix::from_rows(&data, cols)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| fail(format!("missing field `{key}`")))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| fail("expected a JSON object"))
}

fn check_version(obj: &Map<String, Value>, required: bool) -> Result<()> {
    match obj.get("version") {
        Some(v) if v.as_u64() == Some(FORMAT_VERSION) => Ok(()),
        Some(v) => Err(fail(format!("unsupported version {v}; expected {FORMAT_VERSION}"))),
        None if required => Err(fail("missing field `version`")),
        None => Ok(()),
    }
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| fail(format!("`{what}` must be a nonnegative integer")))
}

pub fn space_to_json(space: &AouSpace) -> Value {
    let cone = match space.cone.rep() {
        ConeRep::Generators(rows) => json!({"rep": "generators", "rows": vectors_json(rows)}),
        ConeRep::Inequalities(rows) => json!({
            "rep": "inequalities",
            "rows": Value::Array(rows.iter().map(|h| vector_json(&h.normal)).collect()),
            "strict": Value::Array(rows.iter().map(|h| Value::Bool(h.strict)).collect()),
        }),
        ConeRep::SymPsd { n } => json!({"rep": "sym_psd", "n": n}),
    };
    json!({
        "version": FORMAT_VERSION,
        "label": space.label,
        "dim": space.dim,
        "unit": vector_json(&space.unit),
        "cone": cone,
    })
}

fn builtin_space(name: &str) -> Option<Result<AouSpace>> {
    let (head, rest) = name.split_once('(')?;
    let n: usize = rest.strip_suffix(')')?.trim().parse().ok()?;
    match head.trim() {
        "linf" => Some(if n == 0 {
            Err(fail("linf(0) is not a space"))
        } else {
            Ok(linf(n))
        }),
        "lin_space" => Some(lin_space(n)),
        "sym" => Some(if n == 0 {
            Err(fail("sym(0) is not a space"))
        } else {
            Ok(sym_space(n))
        }),
        _ => None,
    }
}

/// Parses an inline space document; `version` is optional here.
pub fn space_from_json(v: &Value) -> Result<AouSpace> {
    let obj = object(v)?;
    check_version(obj, false)?;
    let dim = as_usize(field(obj, "dim")?, "dim")?;
    let label = match obj.get("label") {
        Some(Value::String(s)) => s.clone(),
        None => String::new(),
        Some(_) => return Err(fail("`label` must be a string")),
    };
    let unit = parse_vector_json(field(obj, "unit")?)?;
    let c = object(field(obj, "cone")?)?;
    let rep = field(c, "rep")?.as_str().ok_or_else(|| fail("`rep` must be a string"))?;
    let cone = match rep {
        "generators" => Cone::from_generators(dim, parse_vectors_json(field(c, "rows")?)?)?,
        "inequalities" => {
            let rows = parse_vectors_json(field(c, "rows")?)?;
            let strict: Vec<bool> = match c.get("strict") {
                None => vec![false; rows.len()],
                Some(s) => s
                    .as_array()
                    .ok_or_else(|| fail("`strict` must be an array of booleans"))?
                    .iter()
                    .map(|b| b.as_bool().ok_or_else(|| fail("`strict` must be an array of booleans")))
                    .collect::<Result<_>>()?,
            };
            if strict.len() != rows.len() {
                return Err(fail("`strict` and `rows` differ in length"));
            }
            let hs = rows
                .into_iter()
                .zip(strict)
                .map(|(normal, strict)| Halfspace { normal, strict })
                .collect();
            Cone::from_halfspaces(dim, hs)?
        }
        "sym_psd" => {
            let n = as_usize(field(c, "n")?, "n")?;
            if n * (n + 1) / 2 != dim {
                return Err(Error::DimensionMismatch {
                    expected: n * (n + 1) / 2,
                    found: dim,
                });
            }
            Cone::sym_psd(n)
        }
        other => return Err(fail(format!("unknown cone representation `{other}`"))),
    };
    AouSpace::new(label, cone, unit)
}

/// Inline document, builtin name, or path relative to `base`.
pub fn space_ref(v: &Value, base: Option<&Path>) -> Result<AouSpace> {
    match v {
        Value::String(s) => {
            if let Some(b) = builtin_space(s) {
                return b;
            }
            let path = match base {
                Some(dir) => dir.join(s),
                None => PathBuf::from(s),
            };
            load_space(&path)
        }
        other => space_from_json(other),
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parent(path: &Path) -> Option<&Path> {
    path.parent().filter(|p| !p.as_os_str().is_empty())
}

/// Loads a space file, or a builtin name when no such file exists.
pub fn load_space(path: &Path) -> Result<AouSpace> {
    if !path.exists() {
        if let Some(b) = path.to_str().and_then(builtin_space) {
            return b;
        }
    }
    let v = read_json(path)?;
    check_version(object(&v)?, true)?;
    space_from_json(&v)
}

pub fn map_to_json(m: &AouMap) -> Value {
    json!({
        "version": FORMAT_VERSION,
        "source": space_to_json(&m.source),
        "target": space_to_json(&m.target),
        "matrix": matrix_json(&m.matrix),
    })
}

pub fn map_from_json(v: &Value, base: Option<&Path>) -> Result<AouMap> {
    let obj = object(v)?;
    check_version(obj, true)?;
    let source = space_ref(field(obj, "source")?, base)?;
    let target = space_ref(field(obj, "target")?, base)?;
    let matrix = parse_matrix_json(field(obj, "matrix")?, target.dim, source.dim)?;
    AouMap::new(source, target, matrix)
}

pub fn load_map(path: &Path) -> Result<AouMap> {
    map_from_json(&read_json(path)?, parent(path))
}

pub fn tensor_to_json(z: &TensorElement) -> Value {
    json!({
        "version": FORMAT_VERSION,
        "left": space_to_json(&z.left),
        "right": space_to_json(&z.right),
        "coeffs": matrix_json(&z.coeffs),
    })
}

pub fn tensor_from_json(v: &Value, base: Option<&Path>) -> Result<TensorElement> {
    let obj = object(v)?;
    check_version(obj, true)?;
    let left = space_ref(field(obj, "left")?, base)?;
    let right = space_ref(field(obj, "right")?, base)?;
    let coeffs = parse_matrix_json(field(obj, "coeffs")?, left.dim, right.dim)?;
    TensorElement::new(left, right, coeffs)
}

pub fn load_tensor(path: &Path) -> Result<TensorElement> {
    tensor_from_json(&read_json(path)?, parent(path))
}

/// A parsed document of any kind.
#[derive(Clone, Debug)]
pub enum Document {
    Space(AouSpace),
    Map(AouMap),
    Tensor(TensorElement),
}

impl ToJson for Document {
    fn to_json(&self) -> Value {
        match self {
            Document::Space(s) => space_to_json(s),
            Document::Map(m) => map_to_json(m),
            Document::Tensor(z) => tensor_to_json(z),
        }
    }
}

pub fn document_from_json(v: &Value, base: Option<&Path>) -> Result<Document> {
    let obj = object(v)?;
    check_version(obj, true)?;
    if obj.contains_key("cone") {
        Ok(Document::Space(space_from_json(v)?))
    } else if obj.contains_key("matrix") {
        Ok(Document::Map(map_from_json(v, base)?))
    } else if obj.contains_key("coeffs") {
        Ok(Document::Tensor(tensor_from_json(v, base)?))
    } else {
        Err(fail("document is neither a space, a map nor a tensor element"))
    }
}

pub fn load_document(path: &Path) -> Result<Document> {
    document_from_json(&read_json(path)?, parent(path))
}

/// Canonical pretty form with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Parses `path` and returns its canonical serialization.
pub fn roundtrip(path: &Path) -> Result<String> {
    Ok(to_canonical_string(&load_document(path)?.to_json()))
}

impl ToJson for AouSpace {
    fn to_json(&self) -> Value {
        space_to_json(self)
    }
}

impl ToJson for AouMap {
    fn to_json(&self) -> Value {
        map_to_json(self)
    }
}

impl ToJson for TensorElement {
    fn to_json(&self) -> Value {
        tensor_to_json(self)
    }
}

fn opt<T>(v: &Option<T>, f: impl Fn(&T) -> Value) -> Value {
    v.as_ref().map(f).unwrap_or(Value::Null)
}

impl ToJson for Certificate {
    fn to_json(&self) -> Value {
        let verdict = match self.verdict {
            Verdict::Member => "member",
            Verdict::NonMember => "non_member",
        };
        json!({
            "verdict": verdict,
            "decomposition": opt(&self.decomposition, |ts: &Vec<Term>| Value::Array(ts.iter().map(|t| json!({
                "index": t.index,
                "coeff": rational_json(&t.coeff),
                "generator": vector_json(&t.generator),
            })).collect())),
            "witness": opt(&self.witness, |w| vector_json(w)),
        })
    }
}

impl ToJson for ValidationReport {
    fn to_json(&self) -> Value {
        json!({
            "aou": self.is_aou(),
            "order_unit": self.order_unit,
            "archimedean": self.archimedean,
            "pointed": self.pointed,
            "order_unit_witness": opt(&self.order_unit_witness, |w| vector_json(w)),
            "archimedean_witness": opt(&self.archimedean_witness, |w| vector_json(w)),
            "lineality": vectors_json(&self.lineality),
        })
    }
}

impl ToJson for Archimedeanization {
    fn to_json(&self) -> Value {
        json!({
            "space": space_to_json(&self.space),
            "quotient": matrix_json(&self.quotient),
        })
    }
}

impl ToJson for MapReport {
    fn to_json(&self) -> Value {
        json!({
            "unital": self.unital,
            "positive": self.positive,
            "order_embedding": self.order_embedding,
            "isometry": self.isometry,
        })
    }
}

impl ToJson for OrderIdealReport {
    fn to_json(&self) -> Value {
        json!({
            "ideal": self.ideal,
            "witness": opt(&self.witness, |(q, p)| json!({"q": vector_json(q), "p": vector_json(p)})),
        })
    }
}

impl ToJson for Lifting {
    fn to_json(&self) -> Value {
        json!({
            "target": vector_json(&self.target),
            "epsilon": rational_json(&self.epsilon),
            "lift": vector_json(&self.lift),
        })
    }
}

impl ToJson for OrderQuotientReport {
    fn to_json(&self) -> Value {
        json!({
            "order_quotient": self.order_quotient,
            "liftings": Value::Array(self.liftings.iter().map(ToJson::to_json).collect()),
            "failure": opt(&self.failure, |(g, c)| json!({"generator": vector_json(g), "certificate": c.to_json()})),
        })
    }
}

impl ToJson for NormBound {
    fn to_json(&self) -> Value {
        json!({
            "epsilon": rational_json(&self.epsilon),
            "interval_min": rational_json(&self.interval_min),
            "norm": rational_json(&self.norm),
            "value_at_unit": rational_json(&self.value_at_unit),
            "interval_side": self.interval_side,
            "norm_side": self.norm_side,
            "agrees": self.agrees(),
        })
    }
}

impl ToJson for PertResult {
    fn to_json(&self) -> Value {
        json!({
            "matrix": matrix_json(&self.map.matrix),
            "norm": rational_json(&self.norm),
            "distance": rational_json(&self.distance),
        })
    }
}

impl ToJson for PerturbResult {
    fn to_json(&self) -> Value {
        json!({
            "matrix": matrix_json(&self.map.matrix),
            "norm": rational_json(&self.norm),
            "delta": rational_json(&self.delta),
            "distance": rational_json(&self.distance),
            "bound": rational_json(&self.bound),
        })
    }
}

impl ToJson for AuerbachBasis {
    fn to_json(&self) -> Value {
        json!({"basis": vectors_json(&self.basis), "duals": vectors_json(&self.duals)})
    }
}

impl ToJson for NuclearPairReport {
    fn to_json(&self) -> Value {
        json!({
            "nuclear": self.nuclear,
            "witness": opt(&self.witness, |z| json!({
                "coeffs": matrix_json(&z.coeffs),
                "certificate": opt(&self.certificate, ToJson::to_json),
            })),
        })
    }
}

impl ToJson for NuclearReport {
    fn to_json(&self) -> Value {
        json!({
            "nuclear": self.nuclear,
            "simplicial": self.simplicial,
            "battery": Value::Array(self.battery.iter().map(|(l, b)| json!({"partner": l, "nuclear": b})).collect()),
            "witness": opt(&self.witness, ToJson::to_json),
        })
    }
}

impl ToJson for Factorization {
    fn to_json(&self) -> Value {
        json!({
            "k": self.k(),
            "states": self.states,
            "phi": matrix_json(&self.phi.matrix),
            "psi": matrix_json(&self.psi.matrix),
            "defect": rational_json(&self.defect),
        })
    }
}

impl ToJson for FactorizationRun {
    fn to_json(&self) -> Value {
        json!({
            "met": self.met(),
            "requested": rational_json(&self.requested),
            "cap": self.cap,
            "best": self.best.to_json(),
            "history": Value::Array(self.history.iter().map(|(k, d)| json!({"k": k, "defect": rational_json(d)})).collect()),
        })
    }
}

impl ToJson for PsdDecision {
    fn to_json(&self) -> Value {
        let cert = match &self.certificate {
            PsdCertificate::Factors { lower, diag } => {
                json!({"kind": "ldlt", "lower": matrix_json(lower), "diag": vector_json(diag)})
            }
            PsdCertificate::Negative { x, value } => {
                json!({"kind": "negative_direction", "x": vector_json(x), "value": rational_json(value)})
            }
        };
        json!({"psd": self.psd, "certificate": cert})
    }
}

impl ToJson for PiCheck {
    fn to_json(&self) -> Value {
        let evidence = match &self.evidence {
            PiEvidence::Diagonal(d) => json!({"kind": "diagonal", "weights": vector_json(d)}),
            PiEvidence::NotPsd { x, value } => {
                json!({"kind": "not_psd", "x": vector_json(x), "value": rational_json(value)})
            }
            PiEvidence::PartialTranspose {
                transposed,
                x,
                functional,
                value,
            } => json!({
                "kind": "partial_transpose",
                "transposed": matrix_json(transposed),
                "x": vector_json(x),
                "functional": matrix_json(functional),
                "value": rational_json(value),
            }),
            PiEvidence::None => Value::Null,
        };
        json!({"verdict": self.verdict.name(), "evidence": evidence})
    }
}

impl ToJson for EpsCheck {
    fn to_json(&self) -> Value {
        let evidence = match &self.evidence {
            EpsEvidence::SquareIdentity => json!({"kind": "square_identity"}),
            EpsEvidence::PsdRepresentative { which, decision } => {
                json!({"kind": "psd_representative", "which": which, "decision": decision.to_json()})
            }
            EpsEvidence::ProductPoint { x, y, value } => json!({
                "kind": "product_point",
                "x": vector_json(x),
                "y": vector_json(y),
                "value": rational_json(value),
            }),
            EpsEvidence::None => Value::Null,
        };
        json!({"verdict": self.verdict.name(), "evidence": evidence})
    }
}

impl ToJson for WitnessReport {
    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "element": matrix_json(&self.element),
            "psd": self.psd.to_json(),
            "pi": self.pi.to_json(),
            "epsilon": self.epsilon.to_json(),
        })
    }
}
