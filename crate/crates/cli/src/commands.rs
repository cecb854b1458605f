use chainpoly::chain::{self, InterlacingCertificate};
use chainpoly::cubical::{self, CubicalComplex};
use chainpoly::exact;
use chainpoly::families::{self, FamilySpec};
use chainpoly::fq::Subspace;
use chainpoly::graph::{self, SimpleGraph};
use chainpoly::partition::{self, PartitionComplex};
use chainpoly::pfseq::{self, FamilyCertificate, PFGenFun};
use chainpoly::poly::{falling_transform, Direction};
use chainpoly::poset::{self, FinitePoset};
use chainpoly::qarr::{self, FqArrangement};
use chainpoly::qposet::{self, QMatroid, QPoset};
use chainpoly::tnmat::{self, LowerTriMatrix};
use chainpoly::{Polynomial, Rational};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::{self, Doc};
use crate::report::{poly_text, to_value, CliError, Report};
use crate::{Caps, Cli, Command, MatrixSource, Source};

type Out = Result<Report, CliError>;

/// `flag-h` without `--S` lists at most `2^20` sets.
const MAX_FLAG_SUBSETS_LOG: usize = 20;

pub fn dispatch(cli: &Cli) -> Out {
    let caps = &cli.caps;
    match &cli.command {
        Command::TnCheck { m, brute_force } => tn_check(&one_matrix(m)?, *brute_force, caps),
        Command::Resolve { m } => resolve(&one_matrix(m)?),
        Command::Chain { m } => chain_cmd(&one_matrix(m)?),
        Command::Subdivide { m, poly } => subdivide(&one_matrix(m)?, poly),
        Command::Zeta { m, i, j } => zeta(&one_matrix(m)?, *i, *j),
        Command::Mobius { m, s, k } => mobius(&one_matrix(m)?, s, *k),
        Command::FlagH { m, s, rank } => flag_h(&one_matrix(m)?, s.as_deref(), *rank),
        Command::Pf { values, order, poly } => pf(values.as_deref(), *order, poly.as_ref()),
        Command::Pft { source, n } => pft(&one_doc(source, "generating function")?, *n),
        Command::ForgacsTran { q_poly, r, n } => forgacs_tran(q_poly, *r, *n),
        Command::Family { family, n, explicit } => family_cmd(&FamilySpec::new(family.clone(), *n)?, *explicit),
        Command::HVector { source, family } => h_vector(&one_doc(source, "poset")?, family),
        Command::Theta { source } => theta(&one_doc(source, "arrangement")?, caps),
        Command::Critical { source, m } => critical(&one_doc(source, "arrangement")?, *m, caps),
        Command::QShelling { source, order } => q_shelling(&one_doc(source, "q-poset")?, order.as_deref()),
        Command::CubicalH { source, r, f, rank } => cubical_h(source, *r, f.as_ref(), *rank),
        Command::CubicalShelling { source, order } => {
            cubical_shelling(&one_doc(source, "cubical complex")?, order.as_deref())
        }
        Command::PartitionShelling { source, n, k, order } => partition_shelling(source, *n, *k, order.as_deref()),
        Command::ChromaticExpand { source, variant } => {
            chromatic_expand(&one_doc(source, "graph")?, (*variant).into(), caps)
        }
        Command::Certify { m } => certify(m),
    }
}

fn one_matrix(m: &MatrixSource) -> Result<LowerTriMatrix, CliError> {
    let docs = input::load(&m.source.inputs, &m.source.inline)?;
    input::single_matrix(docs, m.family.as_ref(), m.n)
}

fn one_doc(s: &Source, what: &str) -> Result<Doc, CliError> {
    input::single(input::load(&s.inputs, &s.inline)?, what)
}

fn rats(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(exact::format(x))).collect())
}

fn rat_rows(v: &[Vec<Rational>]) -> Value {
    Value::Array(v.iter().map(|r| rats(r)).collect())
}

fn texts(ps: &[Polynomial]) -> Value {
    Value::Array(ps.iter().map(poly_text).collect())
}

fn whitney(r: &LowerTriMatrix) -> Result<Result<tnmat::ResolutionCertificate, tnmat::WhitneyFailure>, CliError> {
    Ok(tnmat::whitney_reduce(r)?)
}

fn not_tn(w: &tnmat::WhitneyFailure) -> String {
    format!("not totally nonnegative: {w}")
}

fn tn_check(r: &LowerTriMatrix, brute_force: bool, caps: &Caps) -> Out {
    let verdict = whitney(r)?;
    let brute = if brute_force { Some(tnmat::is_tn_bruteforce(r, caps.cap_minors)?) } else { None };
    if brute.is_some_and(|b| b != verdict.is_ok()) {
        return Err(CliError::Math("Whitney reduction and minor enumeration disagree".into()));
    }
    let witness = verdict.as_ref().err();
    let result = json!({
        "N": r.order(),
        "tn": verdict.is_ok(),
        "witness": witness.map(to_value),
        "witness_text": witness.map(|w| w.to_string()),
        "brute_force": brute,
    });
    Ok(Report::fail_if(result, witness.is_some(), || not_tn(witness.unwrap())))
}

fn resolve(r: &LowerTriMatrix) -> Out {
    match whitney(r)? {
        Ok(cert) => Ok(Report::ok(json!({
            "certificate": to_value(&cert),
            "alpha": rat_rows(&cert.alpha()),
            "normalized": cert.is_normalized(),
            "reconstructs": tnmat::reconstruct(&cert)? == *r,
        }))),
        Err(w) => Ok(Report::fail_if(
            json!({ "witness": to_value(&w), "witness_text": w.to_string() }),
            true,
            || not_tn(&w),
        )),
    }
}

fn chain_cmd(r: &LowerTriMatrix) -> Out {
    let fam = chain::chain_polynomials(r, r.order())?;
    Ok(Report::ok(json!({
        "N": r.order(),
        "p": texts(&fam.polys),
        "polys": to_value(&fam.polys),
    })))
}

fn subdivide(r: &LowerTriMatrix, f: &Polynomial) -> Out {
    let image = chain::subdivision(r, f)?;
    Ok(Report::ok(json!({
        "f": to_value(f),
        "f_text": poly_text(f),
        "image": to_value(&image),
        "image_text": poly_text(&image),
    })))
}

fn zeta(r: &LowerTriMatrix, i: usize, j: usize) -> Out {
    let z = chain::zeta_polynomial(r, i, j)?;
    let (pf, h) = chain::zeta_is_pf(r, i)?;
    Ok(Report::ok(json!({
        "i": i,
        "j": j,
        "zeta": to_value(&z),
        "zeta_text": poly_text(&z),
        "h": to_value(&h),
        "h_text": poly_text(&h),
        "pf": pf,
    })))
}

fn mobius(r: &LowerTriMatrix, s: &[usize], k: Option<usize>) -> Out {
    let k = k.unwrap_or(s.len().saturating_sub(1));
    let mu = chain::mobius_rank_selected(r, s, k)?;
    Ok(Report::ok(json!({ "S": s, "k": k, "mu": exact::format(&mu) })))
}

fn flag_h(r: &LowerTriMatrix, s: Option<&[usize]>, rank: Option<usize>) -> Out {
    let n = rank.unwrap_or(r.order());
    let sets: Vec<Vec<usize>> = match s {
        Some(s) => vec![s.to_vec()],
        None => {
            let inner = n.saturating_sub(1);
            if inner > MAX_FLAG_SUBSETS_LOG {
                return Err(CliError::Input(format!("rank {n} has 2^{inner} flag sets; give --S")));
            }
            (0u64..1 << inner)
                .map(|mask| (1..n).filter(|&x| mask >> (x - 1) & 1 == 1).collect())
                .collect()
        }
    };
    let mut entries = Vec::with_capacity(sets.len());
    let mut nonnegative = true;
    for set in sets {
        let beta = chain::flag_h(r, &set, n)?;
        nonnegative &= exact::is_nonnegative(&beta);
        entries.push(json!({ "S": set, "beta": exact::format(&beta) }));
    }
    Ok(Report::ok(json!({ "rank": n, "entries": entries, "nonnegative": nonnegative })))
}

fn pf(values: Option<&[Rational]>, order: Option<usize>, poly: Option<&Polynomial>) -> Out {
    match (values, poly) {
        (Some(a), None) => {
            let order = order.unwrap_or(a.len().saturating_sub(1));
            let ok = pfseq::is_pf_up_to(a, order)?;
            let result = json!({ "values": rats(a), "order": order, "pf": ok });
            Ok(Report::fail_if(result, !ok, || format!("not PF up to order {order}")))
        }
        (None, Some(p)) => {
            let (ok, h) = pfseq::is_pf_polynomial_values(p)?;
            let result = json!({ "poly": to_value(p), "h": to_value(&h), "h_text": poly_text(&h), "pf": ok });
            Ok(Report::fail_if(result, !ok, || "the value sequence is not PF".to_string()))
        }
        _ => Err(CliError::Input("pf needs exactly one of --values or --poly".into())),
    }
}

fn family_report(c: FamilyCertificate) -> Out {
    let passed = c.roots_located && c.consecutive_interlacing;
    let result = json!({ "p": texts(&c.polys), "certificate": to_value(&c), "passed": passed });
    Ok(Report::fail_if(result, !passed, || "family certificate failed".to_string()))
}

fn pft(doc: &Doc, n: usize) -> Out {
    let f: PFGenFun = input::typed(doc, "generating function")?;
    f.validate()?;
    family_report(pfseq::pft_family(&f, n)?)
}

fn forgacs_tran(q: &Polynomial, r: usize, n: usize) -> Out {
    family_report(pfseq::forgacs_tran(q, r, n)?)
}

fn family_cmd(spec: &FamilySpec, explicit: bool) -> Out {
    let matrix = families::family_matrix(spec);
    let cert = families::family_certificate(spec)?;
    // the closed form is the Whitney resolution unless R_{n,k} fail to be a basis
    let whitney_agrees = if spec.kind.is_degenerate_basis() {
        None
    } else {
        Some(whitney(&matrix)?.is_ok_and(|w| w == cert))
    };
    let poset = if explicit { Some(to_value(&families::explicit_poset(&spec.kind, spec.order)?)) } else { None };
    let result = json!({
        "spec": to_value(spec),
        "matrix": to_value(&matrix),
        "certificate": to_value(&cert),
        "whitney_agrees": whitney_agrees,
        "explicit_poset": poset,
    });
    Ok(Report::fail_if(result, whitney_agrees == Some(false), || {
        "closed-form λ differs from the Whitney resolution".to_string()
    }))
}

fn h_vector(doc: &Doc, kind: &families::FamilyKind) -> Out {
    let p: FinitePoset = input::typed(doc, "poset")?;
    let f = poset::rank_generating(&p);
    let rank = f.degree().unwrap_or(0);
    let cert = families::family_certificate(&FamilySpec::new(kind.clone(), rank + 1)?)?;
    let h = poset::h_vector(&p, &cert)?;
    Ok(Report::ok(json!({
        "family": kind.to_string(),
        "rank": rank,
        "f": to_value(&f),
        "f_text": poly_text(&f),
        "nonnegative": h.is_nonnegative(),
        "h": to_value(&h),
    })))
}

fn theta(doc: &Doc, caps: &Caps) -> Out {
    let a: FqArrangement = input::typed(doc, "arrangement")?;
    let report = qarr::arrangement_theta_capped(&a, caps.cap_subsets)?;
    let passed = report.passed();
    let mut result = to_value(&report);
    result["chi_text"] = poly_text(&report.chi);
    result["passed"] = Value::Bool(passed);
    Ok(Report::fail_if(result, !passed, || "θ-expansion checks failed".to_string()))
}

fn critical(doc: &Doc, m: usize, caps: &Caps) -> Out {
    let a: FqArrangement = input::typed(doc, "arrangement")?;
    let chi = qarr::char_poly_capped(&a, caps.cap_subsets)?;
    let qm = exact::pow(&exact::int(a.field() as i64), m as i64);
    let expected = chi.eval(&qm);
    let count = qarr::critical_count_capped(&a, m, caps.cap_hom)?;
    let agrees = expected == exact::int(count as i64);
    let result = json!({
        "m": m,
        "chi": to_value(&chi),
        "chi_text": poly_text(&chi),
        "chi_at_q_m": exact::format(&expected),
        "count": count,
        "agrees": agrees,
    });
    Ok(Report::fail_if(result, !agrees, || format!("χ(q^{m}) = {} but {count} maps avoid the arrangement", exact::format(&expected))))
}

fn bases(xs: &[Subspace]) -> Value {
    Value::Array(xs.iter().map(|x| json!(x.basis())).collect())
}

/// `{"uniform": ..}` and `{"table": ..}` are q-matroids, replaced by their
/// independent spaces; anything else is read as a q-poset.
fn q_poset_of(doc: &Doc) -> Result<(QPoset, Option<Value>), CliError> {
    let is_matroid = doc.value.get("uniform").is_some() || doc.value.get("table").is_some();
    if !is_matroid {
        return Ok((input::typed(doc, "q-poset")?, None));
    }
    let m: QMatroid = input::typed(doc, "q-matroid")?;
    if let Some(v) = qposet::verify_q_matroid(&m)? {
        return Err(CliError::Math(format!("not a q-matroid: {v:?}")));
    }
    Ok((qposet::independent_spaces(&m)?, Some(to_value(&m))))
}

fn q_shelling(doc: &Doc, order: Option<&[usize]>) -> Out {
    let (p, matroid) = q_poset_of(doc)?;
    let facets = p.facets();
    let (order, exhaustive, verdict) = match order {
        Some(o) => (Some(o.to_vec()), None, Some(qposet::is_shelling(&p, o)?)),
        None => {
            let search = qposet::find_shelling(&p)?;
            (search.order, Some(search.exhaustive), None)
        }
    };
    let is_shelling = match &verdict {
        Some(v) => v.is_shelling,
        None => order.is_some(),
    };
    let increments = match (&order, is_shelling) {
        (Some(o), true) => Some(qposet::shelling_increments(&p, o)?),
        _ => None,
    };
    let h = qposet::q_h_vector(&p)?;
    let result = json!({
        "q": p.field(),
        "n": p.ambient(),
        "rank": p.rank(),
        "matroid": matroid,
        "facets": bases(&facets),
        "order": order,
        "exhaustive": exhaustive,
        "is_shelling": is_shelling,
        "failing_step": verdict.as_ref().and_then(|v| v.failing_step),
        "offending": verdict.as_ref().and_then(|v| v.offending.as_ref()).map(|x| json!(x.basis())),
        "increments_match": increments,
        "h": to_value(&h),
        "h_nonnegative": h.is_nonnegative(),
    });
    let failed = !is_shelling || increments.is_some_and(|v| v.contains(&false));
    Ok(Report::fail_if(result, failed, || match (&verdict, exhaustive) {
        (Some(v), _) if !v.is_shelling => format!("not a shelling: step {} fails", v.failing_step.unwrap_or(0)),
        (None, Some(true)) if !is_shelling => "no shelling exists".to_string(),
        (None, Some(false)) if !is_shelling => "greedy search found no shelling".to_string(),
        _ => "shelling increments do not match".to_string(),
    }))
}

fn cubical_h(source: &Source, r: u32, f: Option<&Polynomial>, rank: Option<usize>) -> Out {
    if let Some(f) = f {
        if !source.inputs.is_empty() || !source.inline.is_empty() {
            return Err(CliError::Input("give either --f with --rank or JSON input, not both".into()));
        }
        let n = rank.expect("clap enforces --rank with --f");
        let cmp = cubical::adin_equivalence_from_f(f, n)?;
        let result = json!({ "rank": n, "f": to_value(f), "f_text": poly_text(f), "adin": to_value(&cmp) });
        return Ok(Report::fail_if(result, !cmp.consistent, || "Adin and 2-cubical h disagree".to_string()));
    }
    let doc = one_doc(source, "poset or cubical complex")?;
    let p: FinitePoset = if doc.value.get("covers").is_some() {
        input::typed(&doc, "poset")?
    } else {
        input::typed::<CubicalComplex>(&doc, "cubical complex")?.to_poset()?
    };
    let f = poset::rank_generating(&p);
    let h = cubical::r_cubical_h(&p, r)?;
    let adin = if r == 2 { Some(cubical::adin_equivalence_check(&p)?) } else { None };
    let consistent = adin.as_ref().is_none_or(|c| c.consistent);
    let result = json!({
        "r": r,
        "rank": f.degree().unwrap_or(0),
        "f": to_value(&f),
        "f_text": poly_text(&f),
        "h": to_value(&h),
        "nonnegative": h.is_nonnegative(),
        "adin": adin.map(|c| to_value(&c)),
    });
    Ok(Report::fail_if(result, !consistent, || "Adin and 2-cubical h disagree".to_string()))
}

fn identity_order(m: usize, order: Option<&[usize]>) -> Vec<usize> {
    order.map_or_else(|| (0..m).collect(), <[usize]>::to_vec)
}

fn cubical_shelling(doc: &Doc, order: Option<&[usize]>) -> Out {
    let cx: CubicalComplex = input::typed(doc, "cubical complex")?;
    let order = identity_order(cx.facets().len(), order);
    let sh = cubical::cubical_shelling_check(&cx, &order)?;
    let failed = !sh.is_shelling;
    let step = sh.failing_step;
    let result = json!({ "order": order, "shelling": to_value(&sh) });
    Ok(Report::fail_if(result, failed, || format!("not a shelling: step {} fails", step.unwrap_or(0))))
}

fn partition_shelling(source: &Source, n: Option<usize>, k: Option<usize>, order: Option<&[usize]>) -> Out {
    let cx = match (n, k) {
        (Some(n), Some(k)) => {
            if !source.inputs.is_empty() || !source.inline.is_empty() {
                return Err(CliError::Input("give either --n/--k or JSON input, not both".into()));
            }
            PartitionComplex::lex(n, k)?
        }
        _ => input::typed(&one_doc(source, "partition complex")?, "partition complex")?,
    };
    let order = identity_order(cx.facets().len(), order);
    let sh = partition::partition_shelling_check(&cx, &order)?;
    let failed = !sh.is_shelling;
    let step = sh.failing_step;
    let result = json!({ "complex": to_value(&cx), "order": order, "shelling": to_value(&sh) });
    Ok(Report::fail_if(result, failed, || format!("not a shelling: step {} fails", step.unwrap_or(0))))
}

/// Negative coefficients are reported, not treated as failures: they are
/// expected for some non-chordal graphs.
fn chromatic_expand(doc: &Doc, variant: partition::FallingVariant, caps: &Caps) -> Out {
    let g: SimpleGraph = input::typed(doc, "graph")?;
    let v = g.vertex_count();
    let n = match variant {
        partition::FallingVariant::K => v,
        partition::FallingVariant::KPlusOne => {
            v.checked_sub(1).ok_or_else(|| CliError::Input("the k+1 variant needs at least one vertex".into()))?
        }
    };
    let chi = graph::chromatic_poly_capped(&g, caps.cap_vertices)?;
    let sigma = falling_transform(&chi, Direction::Forward);
    let expansion = partition::falling_basis_expansion(&chi, n, variant)?;
    Ok(Report::ok(json!({
        "variant": to_value(&variant),
        "n": n,
        "chi": to_value(&chi),
        "chi_text": poly_text(&chi),
        "sigma": to_value(&sigma),
        "sigma_text": poly_text(&sigma),
        "expansion": to_value(&expansion),
        "nonnegative": expansion.is_nonnegative(),
        "chordality": to_value(&graph::is_chordal(&g)),
    })))
}

fn certify_one(r: &LowerTriMatrix) -> Result<(Value, bool), CliError> {
    if let Err(w) = whitney(r)? {
        let v = json!({ "tn": false, "witness": to_value(&w), "witness_text": w.to_string() });
        return Ok((v, false));
    }
    let certs: Vec<InterlacingCertificate> = chain::interlacing_certificates(r)?;
    let passed = certs.iter().all(InterlacingCertificate::passed);
    Ok((json!({ "tn": true, "passed": passed, "certificates": to_value(&certs) }), passed))
}

/// Matrices are certified in parallel; results keep input order.
fn certify(m: &MatrixSource) -> Out {
    let docs = input::load(&m.source.inputs, &m.source.inline)?;
    let mats = input::matrices(docs, m.family.as_ref(), m.n)?;
    let outs: Vec<Result<(Value, bool), CliError>> = mats.par_iter().map(|(_, r)| certify_one(r)).collect();
    let mut items = Vec::with_capacity(mats.len());
    let mut all = true;
    for ((label, r), out) in mats.iter().zip(outs) {
        let (mut v, ok) = out?;
        v["label"] = Value::String(label.clone());
        v["N"] = json!(r.order());
        all &= ok;
        items.push(v);
    }
    let failed_count = items.len() - items.iter().filter(|v| v["passed"] == Value::Bool(true)).count();
    Ok(Report::fail_if(json!({ "inputs": items, "all_passed": all }), !all, || {
        format!("{failed_count} input(s) not TN or failed certification")
    }))
}
