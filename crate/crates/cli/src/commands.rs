use std::fmt;
use std::path::Path;

use aoukit::io::{
    self, matrix_json, parse_vector_str, rational_json, vector_json, vectors_json, Document,
};
use aoukit::kernel::rational::{format_rational, parse_rational, sub};
use aoukit::psd::{EpsEvidence, PiEvidence};
use aoukit::*;
use serde_json::{json, Value};

use crate::render::render_text;
use crate::{Command, ExampleSet, Format, KindArg};

pub struct Output {
    pub json: Value,
    /// Replaces the generic text rendering when set.
    pub text: Option<String>,
    /// False when a reproduced result disagrees with its expected value.
    pub matches: bool,
}

impl Output {
    fn new(json: Value) -> Self {
        Output {
            json,
            text: None,
            matches: true,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("JSON values serialize"),
            Format::Text => self.text.clone().unwrap_or_else(|| render_text(&self.json)),
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.matches {
            0
        } else {
            3
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Rejected input, possibly with a certificate explaining why.
    Input { message: String, certificate: Option<Value> },
    Invariant(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input { .. } => 2,
            Failure::Invariant(_) => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Failure::Input { message, certificate } => json!({
                "error": "invalid_input",
                "message": message,
                "certificate": certificate.clone().unwrap_or(Value::Null),
            }),
            Failure::Invariant(m) => json!({"error": "invariant", "message": m}),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input { message, .. } => write!(f, "{message}"),
            Failure::Invariant(m) => write!(f, "internal invariant violated: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let certificate = match &e {
            Error::Invariant(m) => return Failure::Invariant(m.clone()),
            Error::NotOrderIdeal { q, p } => Some(json!({"q": vector_json(q), "p": vector_json(p)})),
            Error::Infeasible { farkas } => Some(json!({"farkas": vector_json(farkas)})),
            Error::NonPointed { lineality } => Some(json!({"lineality": vectors_json(lineality)})),
            Error::ToleranceNotMet { requested, best } => {
                Some(json!({"requested": rational_json(requested), "best": rational_json(best)}))
            }
            _ => None,
        };
        Failure::Input {
            message: e.to_string(),
            certificate,
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn check(cond: bool, what: &str) -> Res<()> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("{what} does not re-verify")))
    }
}

fn rows_arg(s: &str) -> Res<Vec<Vector>> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(io::parse_vectors_json(&v)?)
}

fn rational_arg(s: &str) -> Res<Rational> {
    Ok(parse_rational(s.trim())?)
}

fn space(path: &Path) -> Res<AouSpace> {
    Ok(io::load_space(path)?)
}

fn map(path: &Path) -> Res<AouMap> {
    Ok(io::load_map(path)?)
}

pub fn run(cmd: &Command) -> Res<Output> {
    match cmd {
        Command::Validate { space: p } => validate(&space(p)?),
        Command::Norm {
            space: p,
            vector,
            functional,
            epsilon,
        } => {
            let s = space(p)?;
            match (vector, functional) {
                (Some(v), _) => norm(&s, &parse_vector_str(v)?),
                (None, Some(f)) => bound(&s, &parse_vector_str(f)?, &rational_arg(epsilon)?),
                (None, None) => unreachable!("clap requires one of --vector and --functional"),
            }
        }
        Command::States { space: p } => states(&space(p)?),
        Command::Archimedeanize { space: p } => archimedeanize(&space(p)?),
        Command::Quotient { file, ideal } => quotient(file, ideal.as_deref()),
        Command::CheckMap { map: p } => check_map_cmd(&map(p)?),
        Command::Extend {
            space: w2,
            target,
            basis,
            values,
        } => extend(&space(w2)?, &space(target)?, &rows_arg(basis)?, &rows_arg(values)?),
        Command::Pert { map: p } => pert_cmd(&map(p)?),
        Command::Perturb { map: p } => perturb_cmd(&map(p)?),
        Command::Auerbach { space: p } => auerbach(&space(p)?),
        Command::TensorMember { tensor, kind } => tensor_member(&io::load_tensor(tensor)?, *kind),
        Command::TensorNorm { tensor } => tensor_norm(&io::load_tensor(tensor)?),
        Command::Nuclear { space: p } => nuclear(&space(p)?),
        Command::NuclearPair { left, right } => nuclear_pair(&space(left)?, &space(right)?),
        Command::Factorize {
            space: p,
            vectors,
            epsilon,
        } => {
            let s = space(p)?;
            let vs = match vectors {
                Some(v) => rows_arg(v)?,
                None => default_probes(&s),
            };
            factorize_cmd(&s, &vs, &rational_arg(epsilon)?)
        }
        Command::Examples { set: ExampleSet::Paper } => worked_examples(),
        Command::Roundtrip { file } => {
            let text = io::roundtrip(file)?;
            let json: Value = serde_json::from_str(&text).map_err(|e| Failure::Invariant(e.to_string()))?;
            Ok(Output {
                text: Some(text.trim_end().to_string()),
                ..Output::new(json)
            })
        }
    }
}

fn validate(s: &AouSpace) -> Res<Output> {
    let r = s.validate()?;
    check(r.verify(s), "validation witness")?;
    Ok(Output::new(json!({"space": s.label, "report": r.to_json()})))
}

fn norm(s: &AouSpace, v: &[Rational]) -> Res<Output> {
    let n = s.order_norm(v)?;
    if s.cone.is_polyhedral() {
        check(s.order_norm_via_states(v)? == n, "order norm via states")?;
    }
    Ok(Output {
        text: Some(format_rational(&n)),
        ..Output::new(json!({"norm": rational_json(&n)}))
    })
}

fn bound(s: &AouSpace, f: &[Rational], eps: &Rational) -> Res<Output> {
    let b = norm_bound_equiv(s, f, eps)?;
    check(b.agrees(), "functional bound biconditional")?;
    Ok(Output::new(b.to_json()))
}

fn states(s: &AouSpace) -> Res<Output> {
    let st = s.extreme_states()?;
    let gens = s.cone.close_and_lineality()?.0.spanning_generators()?;
    for f in &st {
        let unital = aoukit::kernel::rational::dot(f, &s.unit) == Rational::from_integer(1.into());
        let positive = gens.iter().all(|g| aoukit::kernel::rational::dot(f, g) >= Rational::from_integer(0.into()));
        check(unital && positive, "extreme state")?;
    }
    Ok(Output::new(json!({"count": st.len(), "states": vectors_json(&st)})))
}

fn archimedeanize(s: &AouSpace) -> Res<Output> {
    let a = s.archimedeanize()?;
    let r = a.space.validate()?;
    check(r.archimedean && r.pointed, "Archimedean quotient")?;
    Ok(Output::new(json!({"archimedeanization": a.to_json(), "validation": r.to_json()})))
}

fn quotient(file: &Path, ideal: Option<&str>) -> Res<Output> {
    let doc = match io::load_document(file) {
        Ok(d) => d,
        // Builtin names are spaces.
        Err(_) if !file.exists() => Document::Space(space(file)?),
        Err(e) => return Err(e.into()),
    };
    match (doc, ideal) {
        (Document::Map(m), None) => {
            let r = is_order_quotient(&m)?;
            check(r.verify(&m), "order quotient certificate")?;
            Ok(Output::new(r.to_json()))
        }
        (Document::Space(s), Some(basis)) => {
            let basis = rows_arg(basis)?;
            let r = is_order_ideal(&s, &basis)?;
            let mut out = json!({"order_ideal": r.to_json()});
            if r.ideal {
                let (q, qm) = archimedean_quotient(&s, &basis)?;
                out["quotient"] = q.to_json();
                out["map"] = matrix_json(&qm.matrix);
            }
            Ok(Output::new(out))
        }
        (Document::Space(_), None) => Err(Failure::Input {
            message: "quotient of a space needs --ideal".into(),
            certificate: None,
        }),
        _ => Err(Failure::Input {
            message: "quotient expects a map document, or a space document with --ideal".into(),
            certificate: None,
        }),
    }
}

fn check_map_cmd(m: &AouMap) -> Res<Output> {
    let r = check_map(m)?;
    let mut out = json!({"report": r.to_json()});
    if let Some(f) = m.positivity_failure()? {
        check(f.certificate.verify(&m.target.cone, &f.image), "positivity failure")?;
        out["positivity_failure"] = json!({
            "generator": vector_json(&f.generator),
            "image": vector_json(&f.image),
            "certificate": f.certificate.to_json(),
        });
    }
    Ok(Output::new(out))
}

fn extend(w2: &AouSpace, v: &AouSpace, basis: &[Vector], values: &[Vector]) -> Res<Output> {
    match extend_unital_positive(w2, basis, values, v) {
        Ok(m) => {
            check(m.is_unital() && m.is_positive()?, "extension")?;
            for (b, val) in basis.iter().zip(values) {
                check(m.apply(b)? == *val, "extension agreement")?;
            }
            Ok(Output::new(json!({"extends": true, "matrix": matrix_json(&m.matrix)})))
        }
        Err(Error::Infeasible { farkas }) => Ok(Output::new(json!({
            "extends": false,
            "farkas": vector_json(&farkas),
        }))),
        Err(e) => Err(e.into()),
    }
}

fn pert_cmd(t: &AouMap) -> Res<Output> {
    let p = pert(t)?;
    check(p.map.is_unital() && p.map.is_positive()?, "pert output")?;
    check(p.distance <= &p.norm - Rational::from_integer(1.into()), "pert distance bound")?;
    Ok(Output::new(p.to_json()))
}

fn perturb_cmd(t: &AouMap) -> Res<Output> {
    let p = perturb(t)?;
    check(p.map.is_positive()?, "perturb output")?;
    check(p.distance <= p.bound, "perturb distance bound")?;
    Ok(Output::new(p.to_json()))
}

fn auerbach(s: &AouSpace) -> Res<Output> {
    let a = auerbach_basis(s)?;
    check(a.verify(s)?, "Auerbach basis")?;
    Ok(Output::new(a.to_json()))
}

fn tensor_member(z: &TensorElement, kind: KindArg) -> Res<Output> {
    let kinds: &[TensorKind] = match kind {
        KindArg::Epsilon => &[TensorKind::Epsilon],
        KindArg::Pi => &[TensorKind::Pi],
        KindArg::Both => &[TensorKind::Epsilon, TensorKind::Pi],
    };
    let mut out = serde_json::Map::new();
    for &k in kinds {
        let ts = tensor_space(&z.left, &z.right, k)?;
        let c = member_tensor(&ts, z)?;
        check(c.verify(&ts.realized.cone, &z.flat()), "tensor membership certificate")?;
        out.insert(k.name().into(), c.to_json());
    }
    Ok(Output::new(Value::Object(out)))
}

fn tensor_norm(z: &TensorElement) -> Res<Output> {
    let n = injective_banach_norm(z)?;
    let eps = tensor_space(&z.left, &z.right, TensorKind::Epsilon)?;
    check(eps.realized.order_norm(&z.flat())? == n, "injective norm against the epsilon order norm")?;
    Ok(Output {
        text: Some(format_rational(&n)),
        ..Output::new(json!({"norm": rational_json(&n)}))
    })
}

fn nuclear(s: &AouSpace) -> Res<Output> {
    let r = is_nuclear_fd(s)?;
    if let Some(w) = &r.witness {
        check(w.verify()?, "non-nuclearity witness")?;
    }
    Ok(Output::new(r.to_json()))
}

fn nuclear_pair(a: &AouSpace, b: &AouSpace) -> Res<Output> {
    let r = is_nuclear_pairwise(a, b)?;
    check(r.verify()?, "non-nuclearity witness")?;
    Ok(Output::new(r.to_json()))
}

fn default_probes(s: &AouSpace) -> Vec<Vector> {
    let mut out: Vec<Vector> = (0..s.dim).map(|i| aoukit::kernel::rational::unit_vector(s.dim, i)).collect();
    out.push(s.unit.clone());
    out
}

fn factorize_cmd(s: &AouSpace, vs: &[Vector], eps: &Rational) -> Res<Output> {
    let run = factorize_run(s, vs, eps)?;
    let f = &run.best;
    check(f.phi.is_unital() && f.phi.is_positive()?, "Φ")?;
    check(f.psi.is_unital() && f.psi.is_positive()?, "Ψ")?;
    let composite = f.composite()?;
    let mut defect = Rational::from_integer(0.into());
    for v in vs {
        let d = s.order_norm(&sub(&composite.mul_vec(v)?, v))?;
        if d > defect {
            defect = d;
        }
    }
    check(defect == f.defect, "factorization defect")?;
    Ok(Output::new(run.to_json()))
}

fn worked_examples() -> Res<Output> {
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut all = true;
    let mut item = |name: &str, expected: &str, got: String, ok: bool, detail: Value| {
        all &= ok;
        lines.push(format!("{} {name}: {got} (expected {expected})", if ok { "ok  " } else { "FAIL" }));
        items.push(json!({"name": name, "expected": expected, "got": got, "matches": ok, "detail": detail}));
    };

    let suite = psd_example_suite()?;
    let (bell, swap) = (&suite[0], &suite[1]);
    item(
        "Bell in PSD",
        "psd",
        if bell.psd.psd { "psd" } else { "not psd" }.into(),
        bell.psd.psd,
        bell.psd.to_json(),
    );
    let bell_pi = bell.pi.verdict == Membership::CertifiedNonMember
        && matches!(bell.pi.evidence, PiEvidence::PartialTranspose { .. });
    item("Bell outside pi", "certified_non_member", bell.pi.verdict.name().into(), bell_pi, bell.pi.to_json());
    let swap_eps =
        swap.epsilon.verdict == Membership::CertifiedMember && swap.epsilon.evidence == EpsEvidence::SquareIdentity;
    item(
        "Swap in epsilon",
        "certified_member",
        swap.epsilon.verdict.name().into(),
        swap_eps,
        swap.epsilon.to_json(),
    );
    item(
        "Swap outside PSD",
        "not psd",
        if swap.psd.psd { "psd" } else { "not psd" }.into(),
        !swap.psd.psd,
        swap.psd.to_json(),
    );

    let lin2 = lin_space(2)?;
    let r = is_nuclear_pairwise(&lin2, &lin2)?;
    check(r.verify()?, "lin_space(2) witness")?;
    item(
        "lin_space(2) not nuclear",
        "false",
        r.nuclear.to_string(),
        !r.nuclear,
        r.to_json(),
    );
    for n in 1..=4 {
        let rep = is_nuclear_fd(&linf(n))?;
        item(&format!("linf({n}) nuclear"), "true", rep.nuclear.to_string(), rep.nuclear, Value::Null);
    }

    let mut text = lines.join("\n");
    text.push_str(if all { "\nall examples reproduced" } else { "\nsome examples differ" });
    Ok(Output {
        json: json!({"reproduced": all, "examples": items}),
        text: Some(text),
        matches: all,
    })
}
