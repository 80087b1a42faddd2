use dmod_core::equivariant::{
    assemble, fields_from_action, homogeneity_report, stability_check, LinearAction, OrbitCertificate,
};
use dmod_core::gkz::{build_gkz, lattice_binomial, orbit_strata, GkzSystem};
use dmod_core::groebner::{certify_basis, groebner_basis};
use dmod_core::parse::{infer_dim, parse_op, parse_poly};
use dmod_core::reduction::{fuchsian_l1, reduce, reduce_with_shift, series_recurrence};
use dmod_core::scalar::{format_scalar, parse_scalar, parse_scalar_list};
use dmod_core::{CIdeal, IntMatrix, MonomialOrder, Poly, Ring, Scalar, TwistedPower, WIdeal, WeylOp};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::input::{read_doc, scalars, ActionDoc, ChiDoc};
use crate::{ChiArgs, CliError, Command, OrderArg, Section};

fn q(s: &Scalar) -> Value {
    Value::String(format_scalar(s))
}

fn qs(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn strings<T: ToString>(v: impl IntoIterator<Item = T>) -> Value {
    Value::Array(v.into_iter().map(|s| Value::String(s.to_string())).collect())
}

fn scalar_list(s: &str) -> Result<Vec<Scalar>, CliError> {
    parse_scalar_list(s).map_err(|e| CliError::Parse(format!("`{s}`: {e}")))
}

fn split_ops(s: &str) -> Vec<&str> {
    s.split(';').map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn parse_ops(s: &str, dim: Option<usize>) -> Result<(usize, Vec<WeylOp>), CliError> {
    let parts = split_ops(s);
    if parts.is_empty() {
        return Err(CliError::Parse("no operators given".into()));
    }
    let n = dim.unwrap_or_else(|| parts.iter().map(|p| infer_dim(p)).max().unwrap_or(1));
    let ops = parts.iter().map(|p| parse_op(p, n)).collect::<Result<Vec<_>, _>>()?;
    Ok((n, ops))
}

fn load_chi(args: &ChiArgs) -> Result<(IntMatrix, Vec<Scalar>), CliError> {
    let doc: ChiDoc = read_doc(&args.chi)?;
    let chi = IntMatrix::from_rows(&doc.chi).map_err(|e| CliError::Parse(e.to_string()))?;
    let lambda = match (&args.lambda, &doc.lambda) {
        (Some(s), _) => scalar_list(s)?,
        (None, Some(l)) => scalars(l)?,
        (None, None) => return Err(CliError::Parse("no parameters: pass --lambda or a `lambda` field".into())),
    };
    Ok((chi, lambda))
}

fn int_rows(m: &IntMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| strings(r.iter())).collect())
}

pub fn dispatch(cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::Gkz { chi, compare_graded, section } => gkz(chi, *compare_graded, *section),
        Command::Charvar { ops, dim } => charvar(ops, *dim),
        Command::Gb { ops, vars, order, weights } => gb(ops, vars.as_deref(), *order, weights.as_deref()),
        Command::Wgb { ops, dim, order } => wgb(ops, *dim, *order),
        Command::Fourier { ops, dim } => transform("fourier", ops, *dim, WeylOp::fourier_transform),
        Command::Adjoint { ops, dim } => transform("adjoint", ops, *dim, WeylOp::formal_adjoint),
        Command::Reduce { chi, l1, shift, terms } => reduce_cmd(chi, *l1, shift.as_deref(), *terms),
        Command::CheckEquivariance { action } => equivariance(action),
        Command::Apply { ops, to, power, coeff, dim } => apply(ops, to.as_deref(), power.as_deref(), coeff, *dim),
    }
}

fn gkz(args: &ChiArgs, compare_graded: bool, section: Section) -> Result<Value, CliError> {
    let (chi, lambda) = load_chi(args)?;
    let sys = build_gkz(chi, lambda)?;
    let n = sys.n_vars();
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!("gkz"));
    let want = |s: Section| section == Section::Report || section == s;
    if want(Section::Generators) {
        out.insert("chi".into(), int_rows(&sys.data.chi));
        out.insert("lambda".into(), qs(&sys.data.lambda));
        out.insert("lattice".into(), Value::Array(sys.data.lattice_vectors().iter().map(|a| json!(a)).collect()));
        out.insert("homogeneity".into(), strings(sys.data.homogeneity.iter()));
        out.insert("generators".into(), strings(sys.generators()));
        out.insert("boxes".into(), boxes(&sys));
        let ring = Ring::momenta(n);
        let toric = sys.boxes.iter().map(|b| ring.display(&lattice_binomial(&b.lattice_vector)).to_string());
        out.insert("toric_ideal".into(), strings(toric));
        out.insert("bound_ideal".into(), strings(sys.bound_ideal().display_basis()));
    }
    let verdicts = (want(Section::Strata) || want(Section::Verdicts)).then(|| sys.verdicts(compare_graded));
    if let Some(v) = &verdicts {
        if want(Section::Strata) {
            let strata = v.strata.strata.iter().map(|s| {
                json!({
                    "columns": s.support.iter().map(|j| j + 1).collect::<Vec<_>>(),
                    "witness": qs(&s.witness),
                    "conormal": s.conormal.display_basis(),
                    "dimension": s.dimension,
                })
            });
            out.insert("strata".into(), Value::Array(strata.collect()));
        }
        if want(Section::Verdicts) {
            out.insert(
                "verdicts".into(),
                json!({
                    "dim_bound": v.dim_bound,
                    "n": n,
                    "holonomic": v.holonomic,
                    "homogeneous": v.homogeneous,
                    "strata_count": v.strata_count,
                    "strata_dimensions_ok": v.strata_dims_ok,
                    "regular_holonomic": v.regular_holonomic,
                    "graded_equals_bound": v.graded_equals_bound,
                }),
            );
        }
    }
    Ok(Value::Object(out))
}

fn boxes(sys: &GkzSystem) -> Value {
    let rows = sys.data.chi.rows();
    Value::Array(
        sys.boxes
            .iter()
            .map(|b| {
                let mu: Vec<Scalar> = (0..rows).map(|i| sys.euler_box_eigenvalue(i, &b.lattice_vector)).collect();
                json!({ "lattice_vector": b.lattice_vector, "operator": b.op.to_string(), "euler_eigenvalues": qs(&mu) })
            })
            .collect(),
    )
}

fn charvar(ops: &str, dim: Option<usize>) -> Result<Value, CliError> {
    let (n, gens) = parse_ops(ops, dim)?;
    let ideal = WIdeal::new(n, gens)?.weyl_groebner();
    let rep = ideal.characteristic_report();
    let sym = ideal.symbol_ideal();
    let witnesses: Vec<String> = rep
        .graded
        .basis()
        .map(|b| b.polys.iter().filter(|p| !sym.contains(p)).map(|p| rep.graded.ring().display(p).to_string()).collect())
        .unwrap_or_default();
    Ok(json!({
        "command": "charvar",
        "n": n,
        "generators": strings(ideal.generators()),
        "weyl_basis": strings(ideal.basis().unwrap_or_default()),
        "gr_ideal": rep.graded.display_basis(),
        "symbol_ideal": sym.display_basis(),
        "gr_strictly_larger": !witnesses.is_empty(),
        "gr_witnesses": witnesses,
        "dimension": rep.dimension,
        "zero_module": rep.is_zero_module(),
        "bernstein": rep.bernstein_ok,
        "holonomic": rep.holonomic,
        "involutive": rep.involutive(),
        "involutivity_checks": rep.involutivity.checks.len(),
        "involutivity_failures": rep.involutivity.failures(),
    }))
}

/// Identifiers in order of the letter prefix, then the numeric suffix.
fn infer_vars(parts: &[&str]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for p in parts {
        let mut cur = String::new();
        for ch in p.chars().chain(std::iter::once(' ')) {
            if ch.is_ascii_alphanumeric() || ch == '_' {
                cur.push(ch);
            } else {
                if cur.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && !names.contains(&cur) {
                    names.push(cur.clone());
                }
                cur.clear();
            }
        }
    }
    let key = |s: &String| {
        let split = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, tail) = s.split_at(split);
        (head.to_string(), tail.parse::<u64>().unwrap_or(0))
    };
    names.sort_by_key(key);
    // z's before xi's, as in the symbol ring
    names.sort_by_key(|s| !s.starts_with('z'));
    names
}

fn order_from(arg: OrderArg, weights: Option<&str>, nvars: usize) -> Result<MonomialOrder, CliError> {
    Ok(match arg {
        OrderArg::Lex => MonomialOrder::Lex,
        OrderArg::Degrevlex => MonomialOrder::DegRevLex,
        OrderArg::Weighted => {
            let w = weights.ok_or_else(|| CliError::Parse("--order weighted needs --weights".into()))?;
            let w: Vec<u32> = w
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::Parse(format!("bad weight `{s}`"))))
                .collect::<Result<_, _>>()?;
            if w.len() != nvars {
                return Err(CliError::Parse(format!("{} weights for {nvars} variables", w.len())));
            }
            MonomialOrder::Weighted(w)
        }
    })
}

fn gb(ops: &str, vars: Option<&str>, order: OrderArg, weights: Option<&str>) -> Result<Value, CliError> {
    let parts = split_ops(ops);
    let names: Vec<String> = match vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => infer_vars(&parts),
    };
    let half = names.len() / 2;
    let ring = if names.len().is_multiple_of(2) && Ring::symplectic(half).names() == names.as_slice() {
        Ring::symplectic(half)
    } else {
        Ring::new(names)
    };
    let polys: Vec<Poly> = parts.iter().map(|p| parse_poly(p, &ring)).collect::<Result<_, _>>()?;
    let order = order_from(order, weights, ring.nvars())?;
    let basis = groebner_basis(ring.nvars(), &polys, &order);
    let ideal = CIdeal::new(ring.clone(), polys);
    let involutive = match ideal.involutivity_certificate() {
        Ok(r) => Value::Bool(r.passed()),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "command": "gb",
        "vars": ring.names(),
        "order": order.name(),
        "basis": basis.polys.iter().map(|p| ring.display(p).to_string()).collect::<Vec<_>>(),
        "certified": certify_basis(&basis),
        "unit": basis.is_unit(),
        "krull_dimension": ideal.krull_dimension(),
        "involutive": involutive,
    }))
}

fn wgb(ops: &str, dim: Option<usize>, order: OrderArg) -> Result<Value, CliError> {
    let (n, gens) = parse_ops(ops, dim)?;
    let order = match order {
        OrderArg::Weighted => MonomialOrder::order_filtration(n),
        other => order_from(other, None, 2 * n)?,
    };
    let ideal = WIdeal::new(n, gens)?.weyl_groebner_with(&order);
    Ok(json!({
        "command": "wgb",
        "n": n,
        "order": order.name(),
        "basis": strings(ideal.basis().unwrap_or_default()),
        "certified": ideal.certify(),
    }))
}

fn transform(name: &str, ops: &str, dim: Option<usize>, f: fn(&WeylOp) -> WeylOp) -> Result<Value, CliError> {
    let (n, gens) = parse_ops(ops, dim)?;
    let pairs: Vec<Value> =
        gens.iter().map(|g| json!({ "input": g.to_string(), "output": f(g).to_string() })).collect();
    Ok(json!({ "command": name, "n": n, "operators": pairs }))
}

fn reduce_cmd(args: &ChiArgs, l1: bool, shift: Option<&str>, terms: usize) -> Result<Value, CliError> {
    let (chi, lambda) = load_chi(args)?;
    let sys = build_gkz(chi.clone(), lambda.clone())?;
    let lattice: Vec<Vec<i64>> = sys.boxes.iter().map(|b| b.lattice_vector.clone()).collect();
    let r = match shift {
        Some(s) => reduce_with_shift(&chi, &lambda, scalar_list(s)?, &lattice)?,
        None => reduce(&chi, &lambda, &lattice)?,
    };
    let mut out = json!({
        "command": "reduce",
        "shift": qs(&r.shift),
        "kernel": int_rows(&r.kernel.transpose()),
        "quotient_dim": r.quotient_dim(),
        "euler_pullbacks": strings(r.euler_pullbacks()),
        "operators": r.operators.iter().map(|o| json!({
            "lattice_vector": o.lattice_vector,
            "x_power": o.x_power,
            "factored": o.to_string(),
            "expanded": o.op.to_string(),
        })).collect::<Vec<_>>(),
    });
    if l1 {
        let f = fuchsian_l1(&r)?;
        let series = match series_recurrence(&f.operator.op)?.coefficients(terms) {
            Ok(c) => json!({ "coefficients": qs(&c) }),
            Err(o) => json!({ "obstruction_at": o.0 }),
        };
        out["pfq"] = json!({
            "p": f.p,
            "upper": qs(&f.upper),
            "lower": qs(&f.lower),
            "scale": q(&f.scale),
            "normalized": f.normalized,
            "note": f.note(),
            "series": series,
        });
    }
    Ok(out)
}

fn equivariance(path: &std::path::Path) -> Result<Value, CliError> {
    let doc: ActionDoc = read_doc(path)?;
    let matrices = doc
        .matrices
        .iter()
        .map(|m| m.iter().map(|r| scalars(r)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let structure = match &doc.structure {
        Some(c) => Some(
            c.iter()
                .map(|m| m.iter().map(|r| scalars(r)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let action = LinearAction::new(doc.basis.clone(), matrices, structure)?;
    let lambda = scalars(&doc.lambda)?;
    let n = action.space_dim();
    let constgens: Vec<WeylOp> = doc.constgens.iter().map(|s| parse_op(s, n)).collect::<Result<_, _>>()?;
    let fields = fields_from_action(&action);
    let character = dmod_core::equivariant::character_check(&action, &lambda)?;
    let stability = stability_check(&fields, &constgens)?;
    let sys = assemble(fields.clone(), lambda, constgens)?;
    let orbits = match &doc.finite_orbits {
        Some(s) => Some(OrbitCertificate::Asserted(s.clone())),
        None => torus_certificate(&action),
    };
    let orbit_text = orbits.as_ref().map(|o| match o {
        OrbitCertificate::TorusStrata(k) => format!("{k} torus-orbit strata"),
        OrbitCertificate::Asserted(s) => s.clone(),
    });
    let hom = homogeneity_report(&sys, orbits);
    let failures: Vec<Value> = stability
        .failures()
        .map(|e| json!({ "field": action.names[e.field], "generator": e.generator + 1, "bracket": e.bracket.to_string() }))
        .collect();
    Ok(json!({
        "command": "check-equivariance",
        "fields": action.names.iter().zip(&fields).map(|(s, f)| json!({ "name": s, "field": f.to_string() })).collect::<Vec<_>>(),
        "character": character,
        "stable": stability.passed(),
        "stability_failures": failures,
        "generators": strings(sys.generators()),
        "degrees": hom.degrees,
        "homogeneous": hom.homogeneous,
        "finite_orbits": orbit_text,
        "regular_holonomic": hom.regular_holonomic && character && stability.passed(),
    }))
}

/// Diagonal integer actions are torus actions; their strata are counted.
fn torus_certificate(a: &LinearAction) -> Option<OrbitCertificate> {
    let n = a.space_dim();
    let mut rows = Vec::new();
    for m in &a.matrices {
        let mut row = Vec::with_capacity(n);
        for (i, r) in m.iter().enumerate() {
            for (j, c) in r.iter().enumerate() {
                if i != j && !c.is_zero() {
                    return None;
                }
            }
            if !r[i].is_integer() {
                return None;
            }
            row.push(r[i].to_integer());
        }
        rows.push(row);
    }
    let chi = IntMatrix::from_rows(&rows).ok()?;
    orbit_strata(&chi).ok().map(|s| OrbitCertificate::TorusStrata(s.strata.len()))
}

fn apply(ops: &str, to: Option<&str>, power: Option<&str>, coeff: &str, dim: Option<usize>) -> Result<Value, CliError> {
    let text = [Some(ops), to].into_iter().flatten().collect::<Vec<_>>().join(" + ");
    let n = dim.unwrap_or_else(|| infer_dim(&text));
    let p = parse_op(ops, n)?;
    match (to, power) {
        (Some(f), None) => {
            let f = parse_op(f, n)?;
            if !f.terms().all(|(k, _)| k.0[n..].iter().all(|&e| e == 0)) {
                return Err(CliError::Parse("--to must be a polynomial in x".into()));
            }
            let mut out = WeylOp::zero(n);
            for (k, c) in f.terms() {
                let t = TwistedPower::new(c.clone(), k.0[..n].iter().map(|&e| Scalar::from_integer(e.into())).collect());
                for r in p.apply_twisted(&t) {
                    let exps: Vec<u32> = r.exponents.iter().map(|e| e.to_integer().try_into().expect("non-negative")).collect();
                    out = out.add(&WeylOp::term(n, &exps, &vec![0; n], r.coeff)).expect("same dimension");
                }
            }
            Ok(json!({ "command": "apply", "operator": p.to_string(), "input": f.to_string(), "result": out.to_string() }))
        }
        (None, Some(e)) => {
            let exps = scalar_list(e)?;
            if exps.len() != n {
                return Err(CliError::Parse(format!("{} exponents for {n} variables", exps.len())));
            }
            let c = parse_scalar(coeff).map_err(|e| CliError::Parse(format!("`{coeff}`: {e}")))?;
            let t = TwistedPower::new(c, exps);
            let res = p.apply_twisted(&t);
            Ok(json!({
                "command": "apply",
                "operator": p.to_string(),
                "input": t.to_string(),
                "result": strings(&res),
                "annihilated": res.is_empty(),
            }))
        }
        _ => Err(CliError::Parse("give exactly one of --to and --power".into())),
    }
}
