use std::collections::BTreeMap;
use std::io::Read;

use cpstar_core::cp::{
    check_cpstar, is_classical_channel, is_normalised, star_homomorphism_report, CPStarMorphism, CpVerdict,
};
use cpstar_core::cstar::standard_form_seeded;
use cpstar_core::frobenius::{check_normaliser, solve_normaliser, verify_axioms};
use cpstar_core::quantale::{collapse, collapse_algebra, q_algebra_groupoid, really_cp_check, Quantale};
use cpstar_core::rel::{
    algebra_to_groupoid, enumerate_frobenius_rel, enumerate_groupoids, groupoid_canonical_form, groupoid_to_algebra,
    isomorphism_classes, verify_groupoid, Groupoid,
};
use cpstar_core::{Error, FrobeniusAlgebra, Tensor};
use num_complex::Complex64 as C;
use serde_json::{json, Value};

use crate::document::{
    decode_matrix, encode_matrix, AlgebraDocument, AnyAlgebra, Entry, GroupoidDocument, MatrixDocument,
    MorphismDocument, ObjectRef,
};
use crate::presets;
use crate::report::{CheckResult, InputHash, ReportDocument};
use crate::CliError;

/// File contents, or standard input for `-`.
fn read_source(path: &str, report: &mut ReportDocument) -> Result<Value, CliError> {
    let mut bytes = Vec::new();
    if path == "-" {
        std::io::stdin().read_to_end(&mut bytes)?;
    } else {
        bytes = std::fs::read(path).map_err(|e| CliError::invalid(format!("{path}: {e}")))?;
    }
    report.inputs.push(InputHash::new(path, &bytes));
    serde_json::from_slice(&bytes).map_err(|e| CliError::invalid(format!("{path}: {e}")))
}

fn note_preset(name: &str, report: &mut ReportDocument) {
    report.inputs.push(InputHash::new(format!("preset:{name}"), name.as_bytes()));
}

/// An algebra document, or the algebra inside a previous report's output.
fn algebra_document(v: Value) -> Result<AlgebraDocument, CliError> {
    let v = match v.pointer("/output/algebra") {
        Some(inner) => inner.clone(),
        None => v,
    };
    Ok(serde_json::from_value(v)?)
}

pub fn load_algebra(
    path: Option<&str>,
    preset: Option<&str>,
    report: &mut ReportDocument,
) -> Result<AnyAlgebra, CliError> {
    match (path, preset) {
        (Some(path), None) => AnyAlgebra::from_document(&algebra_document(read_source(path, report)?)?),
        (None, Some(name)) => {
            note_preset(name, report);
            presets::algebra(name)?.ok_or_else(|| CliError::invalid(format!("unknown algebra preset `{name}`")))
        }
        _ => Err(CliError::invalid("give exactly one of a path or --preset")),
    }
}

/// The normaliser to test when none is attached: solved for in the complex
/// model, the identity in exact models, where it is the only candidate.
trait Candidate: Entry {
    fn candidate(a: &FrobeniusAlgebra<Self>, _tol: f64) -> Result<Tensor<Self>, Error> {
        Ok(Tensor::identity(a.dim()))
    }
}

impl Candidate for C {
    fn candidate(a: &FrobeniusAlgebra<C>, tol: f64) -> Result<Tensor<C>, Error> {
        solve_normaliser(a, tol)
    }
}
impl Candidate for bool {}
impl Candidate for cpstar_core::quantale::UnitInterval {}
impl Candidate for cpstar_core::quantale::ExtendedReal {}
impl Candidate for cpstar_core::quantale::Lukasiewicz {}

fn check(name: &str, c: cpstar_core::frobenius::Check) -> CheckResult {
    CheckResult::new(name, c.pass, c.residual)
}

fn verify_in<S: Candidate>(a: &FrobeniusAlgebra<S>, tol: f64, report: &mut ReportDocument) -> Result<(), CliError> {
    let axioms = verify_axioms(a, tol)?;
    let checks = axioms.checks();
    let (defining, classifying) = checks.split_at(4);
    report.results.extend(defining.iter().map(|(name, c)| check(name, *c)));
    report.properties = classifying
        .iter()
        .map(|(name, c)| (name.to_string(), json!({"pass": c.pass, "residual": c.residual})))
        .collect::<serde_json::Map<_, _>>()
        .into();
    let z = match a.normaliser() {
        Some(z) => Ok(z.clone()),
        None => S::candidate(a, tol),
    };
    let mut output = serde_json::Map::new();
    match z {
        Ok(z) => {
            let c = check_normaliser(a, &z, tol)?;
            let mut r = CheckResult::new("normaliser", c.pass(), c.central.residual.max(c.equation.residual));
            if c.pass() {
                output.insert("normaliser".into(), encode_matrix(&z));
                output.insert("algebra".into(), serde_json::to_value(AlgebraDocument::from_algebra(&a.with_normaliser(z)?, None))?);
            } else {
                r = r.with_certificate(json!({
                    "central_residual": c.central.residual,
                    "equation_residual": c.equation.residual,
                    "min_eigenvalue": c.min_eigenvalue,
                }));
            }
            report.results.push(r);
        }
        Err(e) => report.results.push(CheckResult::failed("normaliser", e)),
    }
    if !output.is_empty() {
        report.output = Some(output.into());
    }
    Ok(())
}

pub fn verify(path: Option<&str>, preset: Option<&str>, report: &mut ReportDocument) -> Result<(), CliError> {
    let tol = report.tolerances.tol;
    match load_algebra(path, preset, report)? {
        AnyAlgebra::Complex(a) => verify_in(&a, tol, report),
        AnyAlgebra::Boolean(a) => verify_in(&a, tol, report),
        AnyAlgebra::UnitInterval(a) => verify_in(&a, tol, report),
        AnyAlgebra::ExtendedReal(a) => verify_in(&a, tol, report),
        AnyAlgebra::Lukasiewicz(a) => verify_in(&a, tol, report),
    }
}

fn with_normaliser(a: FrobeniusAlgebra<C>, tol: f64) -> Result<FrobeniusAlgebra<C>, CliError> {
    if a.normaliser().is_some() {
        return Ok(a);
    }
    let z = solve_normaliser(&a, tol).map_err(|e| CliError::invalid(format!("object is not a C*-algebra: {e}")))?;
    Ok(a.with_normaliser(z)?)
}

pub fn decompose(path: Option<&str>, preset: Option<&str>, report: &mut ReportDocument) -> Result<(), CliError> {
    let (tol, seed) = (report.tolerances.tol, report.seed);
    let a = load_algebra(path, preset, report)?.into_complex()?;
    let a = match a.normaliser() {
        Some(_) => a,
        None => match solve_normaliser(&a, tol) {
            Ok(z) => a.with_normaliser(z)?,
            Err(e) => {
                report.results.push(CheckResult::failed("standard_form", e));
                return Ok(());
            }
        },
    };
    let sf = match standard_form_seeded(&a, tol, seed) {
        Ok(sf) => sf,
        Err(e) => {
            report.results.push(CheckResult::failed("standard_form", e));
            return Ok(());
        }
    };
    let iso = CPStarMorphism::new(a.clone(), sf.block_model.clone(), sf.iso.clone())?;
    let hom = star_homomorphism_report(&iso, tol.sqrt())?;
    let residual = hom.multiplicative.residual.max(hom.star_preserving.residual);
    report.results.push(CheckResult::new("standard_form", hom.pass(), residual));
    report.output = Some(json!({"dim": a.dim(), "block_sizes": sf.block_sizes, "weights": sf.weights}));
    Ok(())
}

fn load_object(spec: &str, report: &mut ReportDocument) -> Result<FrobeniusAlgebra<C>, CliError> {
    let tol = report.tolerances.tol;
    let a = match presets::algebra(spec)? {
        Some(a) => {
            note_preset(spec, report);
            a
        }
        None => AnyAlgebra::from_document(&algebra_document(read_source(spec, report)?)?)?,
    };
    with_normaliser(a.into_complex()?, tol)
}

fn resolve(r: ObjectRef, report: &mut ReportDocument) -> Result<FrobeniusAlgebra<C>, CliError> {
    match r {
        ObjectRef::Preset(name) => load_object(&name, report),
        ObjectRef::Inline(doc) => with_normaliser(doc.to_algebra()?, report.tolerances.tol),
    }
}

pub struct CheckCpArgs<'a> {
    pub preset: Option<&'a str>,
    pub object: Option<&'a str>,
    pub dom: Option<&'a str>,
    pub cod: Option<&'a str>,
    pub map: Option<&'a str>,
}

fn load_morphism(args: &CheckCpArgs, report: &mut ReportDocument) -> Result<CPStarMorphism, CliError> {
    let tol = report.tolerances.tol;
    if let Some(name) = args.preset {
        if args.map.is_some() || args.dom.is_some() || args.cod.is_some() {
            return Err(CliError::invalid("--preset replaces --map, --dom and --cod"));
        }
        note_preset(name, report);
        if let Some(object) = args.object {
            note_preset(object, report);
        }
        return presets::map(name, args.object, tol);
    }
    let path = args.map.ok_or_else(|| CliError::invalid("give --map or --preset"))?;
    let doc: MorphismDocument = serde_json::from_value(read_source(path, report)?)?;
    let dom = match (args.dom, doc.dom) {
        (Some(s), _) => load_object(s, report)?,
        (None, Some(r)) => resolve(r, report)?,
        (None, None) => return Err(CliError::invalid("no domain object given")),
    };
    let cod = match (args.cod, doc.cod) {
        (Some(s), _) => load_object(s, report)?,
        (None, Some(r)) => resolve(r, report)?,
        (None, None) => return Err(CliError::invalid("no codomain object given")),
    };
    let data = decode_matrix(&doc.map, cod.dim(), dom.dim(), "map")
        .map_err(|e| CliError::invalid(format!("dimension mismatch: {e}")))?;
    let map = Tensor::new(&[cod.dim()], &[dom.dim()], data)?;
    Ok(CPStarMorphism::new(dom, cod, map)?)
}

fn encode_vector(v: &[C]) -> Value {
    Value::Array(v.iter().map(|x| x.encode()).collect())
}

pub fn check_cp(args: &CheckCpArgs, report: &mut ReportDocument) -> Result<(), CliError> {
    let tol = report.tolerances.tol;
    let f = load_morphism(args, report)?;
    let mut output = serde_json::Map::new();
    match check_cpstar(&f, tol)? {
        CpVerdict::Positive(w) => {
            report.results.push(CheckResult::new("cpstar", true, w.residual));
            output.insert(
                "kraus".into(),
                json!({"ancilla_dim": w.ancilla_dim, "shape": w.g.dims(), "residual": w.residual}),
            );
        }
        CpVerdict::Negative(c) => {
            report.results.push(CheckResult::new("cpstar", false, -c.eigenvalue).with_certificate(json!({
                "dom_block": c.dom_block,
                "cod_block": c.cod_block,
                "eigenvalue": c.eigenvalue,
                "eigenvector": encode_vector(&c.eigenvector),
                "hermitian_residual": c.hermitian_residual,
            })));
        }
    }
    let normalised = is_normalised(&f, tol)?;
    let hom = star_homomorphism_report(&f, tol)?;
    let classical = is_classical_channel(&f, tol)?;
    let rcp = really_cp_check(&f, tol)?;
    let mut classical_json = json!({
        "classical": classical.classical,
        "normalised": classical.normalised,
        "stochastic_valid": classical.stochastic_valid,
    });
    if let Some(s) = &classical.stochastic {
        let rows: Vec<Vec<f64>> = s.row_iter().map(|r| r.iter().copied().collect()).collect();
        let sums: Vec<f64> = s.column_iter().map(|c| c.sum()).collect();
        classical_json["stochastic"] = json!(rows);
        classical_json["column_sums"] = json!(sums);
        output.insert("stochastic".into(), json!(rows));
    }
    report.properties = json!({
        "normalised": {"pass": normalised.pass, "residual": normalised.residual},
        "star_homomorphism": {
            "multiplicative": {"pass": hom.multiplicative.pass, "residual": hom.multiplicative.residual},
            "star_preserving": {"pass": hom.star_preserving.pass, "residual": hom.star_preserving.residual},
        },
        "classical": classical_json,
        "really_cp": {
            "really_positive": rcp.really_positive,
            "completely_positive": rcp.completely_positive,
            "really_cp": rcp.really_cp,
        },
    });
    output.insert("dims".into(), json!({"dom": f.dom.dim(), "cod": f.cod.dim()}));
    report.output = Some(output.into());
    Ok(())
}

fn groupoid_output(g: &Groupoid) -> Result<Value, CliError> {
    let algebra = groupoid_to_algebra(g)?;
    Ok(json!({
        "groupoid": GroupoidDocument::from_groupoid(g),
        "algebra": AlgebraDocument::from_algebra(&algebra, None),
        "canonical": groupoid_canonical_form(g).ok(),
    }))
}

fn valid_groupoid(g: &Groupoid) -> Result<(), CliError> {
    match verify_groupoid(g).as_slice() {
        [] => Ok(()),
        v => Err(CliError::invalid(format!("invalid groupoid tables: {}", v.join("; ")))),
    }
}

pub fn groupoid_to(path: Option<&str>, preset: Option<&str>, report: &mut ReportDocument) -> Result<(), CliError> {
    let g = match (path, preset) {
        (Some(path), None) => serde_json::from_value::<GroupoidDocument>(read_source(path, report)?)?.to_groupoid()?,
        (None, Some(name)) => {
            note_preset(name, report);
            presets::groupoid(name)?.ok_or_else(|| CliError::invalid(format!("unknown groupoid preset `{name}`")))?
        }
        _ => return Err(CliError::invalid("give exactly one of a path or --preset")),
    };
    valid_groupoid(&g)?;
    report.results.push(CheckResult::new("groupoid_laws", true, 0.0));
    report.output = Some(groupoid_output(&g)?);
    Ok(())
}

fn read_off_groupoid(result: Result<Groupoid, Error>, report: &mut ReportDocument) -> Result<(), CliError> {
    match result {
        Ok(g) => {
            report.results.push(CheckResult::new("groupoid_algebra", true, 0.0));
            report.output = Some(groupoid_output(&g)?);
            Ok(())
        }
        Err(
            e @ (Error::NotAGroupoidAlgebra(_)
            | Error::NotAnAlgebra(_)
            | Error::NoNormaliser(_)
            | Error::MissingNormaliser),
        ) => {
            report.results.push(CheckResult::failed("groupoid_algebra", e));
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn groupoid_from(path: Option<&str>, preset: Option<&str>, report: &mut ReportDocument) -> Result<(), CliError> {
    let a = load_algebra(path, preset, report)?.into_boolean()?;
    read_off_groupoid(algebra_to_groupoid(&a), report)
}

pub fn groupoid_enumerate(n: usize, report: &mut ReportDocument) -> Result<(), CliError> {
    report.inputs.push(InputHash::new(format!("carrier:{n}"), n.to_string().as_bytes()));
    let structures = enumerate_frobenius_rel(n)?;
    let direct = enumerate_groupoids(n)?;
    let tables = |it: &mut dyn Iterator<Item = FrobeniusAlgebra<bool>>| {
        let mut v: Vec<(Vec<bool>, Vec<bool>)> = it.map(|a| (a.mult().data().to_vec(), a.unit().data().to_vec())).collect();
        v.sort();
        v
    };
    let found = tables(&mut structures.iter().map(|s| s.algebra.clone()));
    let expected = tables(&mut direct.iter().map(|g| groupoid_to_algebra(g).expect("enumerated groupoids are valid")));
    let diff = found.len().abs_diff(expected.len());
    report.results.push(CheckResult::new("matches_direct_enumeration", found == expected, diff as f64));
    let missing = structures.iter().filter(|s| s.groupoid.is_none()).count();
    report.results.push(CheckResult::new("every_structure_is_a_groupoid", missing == 0, missing as f64));
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    let mut listing = Vec::new();
    for s in &structures {
        let canonical = s.groupoid.as_ref().and_then(|g| groupoid_canonical_form(g).ok());
        if let Some(c) = &canonical {
            *classes.entry(c.clone()).or_default() += 1;
        }
        listing.push(json!({
            "canonical": canonical,
            "objects": s.groupoid.as_ref().map(Groupoid::n_objects),
            "mult": encode_matrix(s.algebra.mult()),
            "unit": Value::Array(s.algebra.unit().data().iter().map(|x| x.encode()).collect()),
        }));
    }
    report.output = Some(json!({
        "carrier": n,
        "count": structures.len(),
        "direct_count": direct.len(),
        "isomorphism_classes": isomorphism_classes(&structures),
        "classes": classes,
        "structures": listing,
    }));
    Ok(())
}

pub fn groupoid_indiscrete(n: usize, report: &mut ReportDocument) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::invalid("need at least one object"));
    }
    note_preset(&format!("indiscrete:{n}"), report);
    let g = Groupoid::indiscrete(n);
    report.results.push(CheckResult::new("groupoid_laws", verify_groupoid(&g).is_empty(), 0.0));
    report.output = Some(groupoid_output(&g)?);
    Ok(())
}

fn collapse_in<Q: Quantale + Entry>(v: &Value) -> Result<Value, CliError> {
    if v.get("mult").is_some() {
        let a: FrobeniusAlgebra<Q> = serde_json::from_value::<AlgebraDocument>(v.clone())?.to_algebra()?;
        return Ok(json!({"algebra": AlgebraDocument::from_algebra(&collapse_algebra(&a), None)}));
    }
    let doc: MatrixDocument = serde_json::from_value(v.clone())?;
    let rows = doc.entries.as_array().map_or(0, Vec::len);
    let cols = doc.entries.get(0).and_then(Value::as_array).map_or(0, Vec::len);
    let t = Tensor::<Q>::matrix(rows, cols, decode_matrix(&doc.entries, rows, cols, "entries")?)?;
    Ok(json!({"relation": encode_matrix(&collapse(&t))}))
}

pub fn quantale_collapse(path: &str, report: &mut ReportDocument) -> Result<(), CliError> {
    let v = read_source(path, report)?;
    let model = v.get("model").and_then(Value::as_str).unwrap_or_default();
    report.output = Some(match model {
        "boolean" => collapse_in::<bool>(&v)?,
        "quantale:unit-interval" => collapse_in::<cpstar_core::quantale::UnitInterval>(&v)?,
        "quantale:extended-real" => collapse_in::<cpstar_core::quantale::ExtendedReal>(&v)?,
        "quantale:lukasiewicz" => collapse_in::<cpstar_core::quantale::Lukasiewicz>(&v)?,
        other => return Err(CliError::invalid(format!("`{other}` is not a quantale model"))),
    });
    Ok(())
}

fn q_groupoid<Q: Quantale>(a: FrobeniusAlgebra<Q>, report: &mut ReportDocument) -> Result<(), CliError> {
    let a = match a.normaliser() {
        Some(_) => a,
        None => {
            let id = Tensor::identity(a.dim());
            a.with_normaliser(id)?
        }
    };
    read_off_groupoid(q_algebra_groupoid(&a), report)
}

pub fn quantale_groupoid(path: &str, report: &mut ReportDocument) -> Result<(), CliError> {
    match AnyAlgebra::from_document(&algebra_document(read_source(path, report)?)?)? {
        AnyAlgebra::Boolean(a) => q_groupoid(a, report),
        AnyAlgebra::UnitInterval(a) => q_groupoid(a, report),
        AnyAlgebra::ExtendedReal(a) => q_groupoid(a, report),
        AnyAlgebra::Lukasiewicz(a) => q_groupoid(a, report),
        AnyAlgebra::Complex(_) => Err(CliError::invalid("the complex numbers are not a quantale")),
    }
}
