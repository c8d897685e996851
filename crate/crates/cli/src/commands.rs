use affaut::adjoint::{ad, ad_matrix, corollary_shape, generic_a_element, module_decomposition, AdjointMatrix, KernelElement};
use affaut::autgroup::{composition_series, iterate, member, order, AutMap, KernelCheck, SubgroupSpec, TruncPoly};
use affaut::expr::Expr;
use affaut::greenberg::{
    greenberg_transform, verify_group_axioms, AxiomReport, AxiomVerdict, CapMode, GroupLaw, LawKind, Simplification,
    VerifyMode,
};
use affaut::inversion::{invert_traced, oracle_invert};
use affaut::rings::{AnyRing, Integers, Ring, RingDescriptor, Symbolic, Zmod};
use affaut::witt::{ghost_map, residue_to_witt, universal_law, witt_to_residue, WittRing};
use affaut::Error;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{AdMatrixArgs, CapChoice, Cli, Command, LawArgs, SeriesArgs, SimplifyChoice, VerifyChoice, WittPair};
use crate::input::{components, poly, read_json, read_source, require_ring, resolve_ring};
use crate::{Failure, Output};

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Compose { f, g } => {
            let ring = resolve_ring(cli, &[f, g])?;
            Ok(poly_output(&poly(&ring, f)?.compose(&poly(&ring, g)?)?))
        }
        Command::Invert { f, check } => invert_cmd(cli, f, *check),
        Command::Order { f, cap } => {
            let ring = resolve_ring(cli, &[f])?;
            let k = order(&poly(&ring, f)?, *cap)?;
            Ok(Output { json: json!({ "order": k.to_string() }), text: k.to_string() })
        }
        Command::Member { f, spec } => {
            let ring = resolve_ring(cli, &[f])?;
            let spec: SubgroupSpec = spec.parse()?;
            let m = member(&poly(&ring, f)?, spec)?;
            Ok(Output { json: json!({ "spec": spec.to_string(), "member": m }), text: m.to_string() })
        }
        Command::Iterate { f, k } => {
            let ring = resolve_ring(cli, &[f])?;
            Ok(poly_output(&iterate(&AutMap::new(poly(&ring, f)?)?.into_poly(), *k)))
        }
        Command::Series(a) => series_cmd(cli, a),
        Command::WittDerive { p, n } => witt_derive_cmd(*p, *n),
        Command::WittAdd(a) => witt_op_cmd(cli, a, true),
        Command::WittMul(a) => witt_op_cmd(cli, a, false),
        Command::Ghost { p, u } => ghost_cmd(cli, *p, u),
        Command::WittIso { p, u, x, n } => witt_iso_cmd(*p, u.as_deref(), x.as_deref(), *n),
        Command::Greenberg { p, n, f, vars } => greenberg_cmd(*p, *n, f, vars.as_deref()),
        Command::GreenbergLaw(a) => greenberg_law_cmd(cli, a),
        Command::VerifyLaw { law, mode, samples } => {
            let v = read_json(law)?;
            let law = GroupLaw::from_json(v.get("law").unwrap_or(&v))?;
            let mode = verify_mode(cli, *mode, *samples)?
                .ok_or_else(|| Failure::Usage("verify-law needs --mode exhaustive or sampled".into()))?;
            let report = verify_group_axioms(&law, mode)?;
            Ok(Output { json: report_json(&report), text: report_text(&report) })
        }
        Command::Ad { f, g, r } => {
            let ring = resolve_ring(cli, &[f, g])?;
            let f = AutMap::new(poly(&ring, f)?)?;
            let g = KernelElement::from_poly(&poly(&ring, g)?, *r)?;
            Ok(poly_output(&ad(&f, &g)?.to_poly()))
        }
        Command::AdMatrix(a) => ad_matrix_cmd(cli, a),
        Command::ModuleDecomp { m, p, r } => module_decomp_cmd(cli, *m, *p, *r),
    }
}

fn poly_output<R: Ring>(f: &TruncPoly<R>) -> Output {
    Output { json: f.to_json(), text: f.display() }
}

fn seeded(cli: &Cli, verb: &str) -> Result<u64, Failure> {
    cli.seed.ok_or_else(|| Failure::Usage(format!("{verb} is randomized and needs --seed")))
}

fn invert_cmd(cli: &Cli, f: &str, check: bool) -> Result<Output, Failure> {
    let ring = resolve_ring(cli, &[f])?;
    let f = poly(&ring, f)?;
    let (g, depth) = invert_traced(&f)?;
    let mut json = g.to_json();
    json["depth"] = json!(depth);
    let mut text = g.display();
    if check {
        let oracle = oracle_invert(&f)?.coeffs() == g.coeffs();
        let left = f.compose(&g)?.is_identity();
        let right = g.compose(&f)?.is_identity();
        json["check"] = json!({ "oracle_agrees": oracle, "f_after_inverse": left, "inverse_after_f": right });
        text += &format!("\n# depth {depth}, oracle agrees: {oracle}, f∘g = T: {left}, g∘f = T: {right}");
    }
    Ok(Output { json, text })
}

fn series_cmd(cli: &Cli, a: &SeriesArgs) -> Result<Output, Failure> {
    let seed = seeded(cli, "series")?;
    let ring = require_ring(cli)?;
    let opts = KernelCheck { degree_cap: a.degree_cap, samples: a.samples, exhaustive_limit: a.exhaustive_limit };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let steps = composition_series(&ring, &opts, &mut rng)?;
    let mut text = format!("# composition series of {}\n", ring.descriptor());
    let json_steps: Vec<Value> = steps
        .iter()
        .map(|s| {
            let v = &s.verdict;
            text += &format!(
                "{} -> {}: kernel generated by {} is {} ({}, {} pairs)\n",
                s.from,
                s.to,
                ring.display(&s.generator),
                if v.abelian { "abelian" } else { "NOT abelian" },
                if v.exhaustive { "exhaustive" } else { "sampled" },
                v.pairs_checked
            );
            json!({
                "from": s.from,
                "to": s.to,
                "generator": ring.elem_to_json(&s.generator),
                "abelian": v.abelian,
                "exhaustive": v.exhaustive,
                "elements": v.elements,
                "pairs_checked": v.pairs_checked,
                "counterexample": v.counterexample.as_ref().map(|(f, g)| json!([f.to_json(), g.to_json()])),
            })
        })
        .collect();
    let json = json!({
        "ring": serde_json::to_value(ring.descriptor()).expect("descriptor serializes"),
        "seed": seed,
        "degree_cap": a.degree_cap,
        "steps": json_steps,
    });
    Ok(Output { json, text })
}

fn witt_derive_cmd(p: u64, n: u32) -> Result<Output, Failure> {
    let law = universal_law(p, n)?;
    let names = law.var_names();
    let mut text = String::new();
    for (i, s) in law.sum().iter().enumerate() {
        text += &format!("s_{i} = {}\n", s.display_with(&names));
    }
    for (i, m) in law.prod().iter().enumerate() {
        text += &format!("m_{i} = {}\n", m.display_with(&names));
    }
    Ok(Output { json: law.to_json(), text })
}

fn base_ring(cli: &Cli) -> Result<AnyRing, Failure> {
    match &cli.ring {
        Some(flag) => Ok(AnyRing::parse_flag(flag)?),
        None => Ok(AnyRing::Integers(Integers::new())),
    }
}

fn level_of(len: usize) -> Result<u32, Failure> {
    if len == 0 {
        return Err(Error::ShapeMismatch("a Witt vector needs at least one component".into()).into());
    }
    Ok(len as u32 - 1)
}

fn witt_op_cmd(cli: &Cli, a: &WittPair, add: bool) -> Result<Output, Failure> {
    let ring = base_ring(cli)?;
    let u = components(&ring, &a.u)?;
    let v = components(&ring, &a.v)?;
    if u.len() != v.len() {
        return Err(Error::ShapeMismatch(format!("vectors of lengths {} and {}", u.len(), v.len())).into());
    }
    let w = WittRing::new(ring.clone(), a.p, level_of(u.len())?)?;
    let (u, v) = (w.vector(u)?, w.vector(v)?);
    let res = if add { w.add(&u, &v)? } else { w.mul(&u, &v)? };
    let text = format!("[{}]", res.components.iter().map(|c| ring.display(c)).collect::<Vec<_>>().join(", "));
    Ok(Output { json: w.to_json(&res), text })
}

fn ghost_cmd(cli: &Cli, p: u64, u: &str) -> Result<Output, Failure> {
    let ring = base_ring(cli)?;
    let comps = components(&ring, u)?;
    let g = ghost_map(&ring, p, &comps);
    let text = format!("[{}]", g.iter().map(|c| ring.display(c)).collect::<Vec<_>>().join(", "));
    Ok(Output { json: json!({ "p": p, "ghost": g.iter().map(|c| ring.elem_to_json(c)).collect::<Vec<_>>() }), text })
}

fn witt_iso_cmd(p: u64, u: Option<&str>, x: Option<&str>, n: Option<u32>) -> Result<Output, Failure> {
    let field = Zmod::new(p)?;
    if field.prime() != Some(p) || field.precision() != Some(1) {
        return Err(Error::OutOfRange(format!("{p} is not prime")).into());
    }
    match (u, x, n) {
        (Some(u), None, None) => {
            let comps = components(&field, u)?;
            let level = level_of(comps.len())?;
            let x = witt_to_residue(p, &comps);
            let modulus = BigInt::from(p).pow(level + 1);
            Ok(Output {
                json: json!({ "p": p, "level": level, "residue": x.to_string(), "modulus": modulus.to_string() }),
                text: format!("{x} mod {modulus}"),
            })
        }
        (None, Some(x), Some(n)) => {
            let x: BigInt = x.trim().parse().map_err(|_| Error::Parse(format!("bad integer {x:?}")))?;
            let comps = residue_to_witt(p, n, &x);
            Ok(Output {
                json: json!({ "p": p, "components": comps.iter().map(|c| c.to_string()).collect::<Vec<_>>() }),
                text: format!("[{}]", comps.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")),
            })
        }
        _ => Err(Failure::Usage("witt-iso needs either --u or both --x and --n".into())),
    }
}

fn greenberg_cmd(p: u64, n: u32, f: &str, vars: Option<&str>) -> Result<Output, Failure> {
    let expr = Expr::parse(read_source(f)?.trim())?;
    let names: Vec<String> = match vars {
        Some(v) => v.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            let mut v = expr.variables();
            v.sort();
            v.dedup();
            v
        }
    };
    let ring = Symbolic::integer_polys(names.clone(), p)?;
    let value = expr.eval(&ring, &|name| ring.gen(name).ok())?;
    let f = ring.to_poly(&value).ok_or_else(|| Error::PreconditionFailed("the input must be an integer polynomial".into()))?;
    let sys = greenberg_transform(&f, &names, p, n)?;
    Ok(Output { json: sys.to_json(), text: sys.display().join("\n") })
}

fn verify_mode(cli: &Cli, choice: VerifyChoice, samples: u64) -> Result<Option<VerifyMode>, Failure> {
    Ok(match choice {
        VerifyChoice::None => None,
        VerifyChoice::Exhaustive => Some(VerifyMode::Exhaustive),
        VerifyChoice::Sampled => Some(VerifyMode::Sampled { samples, seed: seeded(cli, "sampled verification")? }),
    })
}

fn greenberg_law_cmd(cli: &Cli, a: &LawArgs) -> Result<Output, Failure> {
    let kind = match (a.d, a.precision, a.cap) {
        (Some(d), None, None) => LawKind::Ad { d },
        (None, Some(precision), Some(cap)) => LawKind::Full {
            precision,
            cap,
            mode: match a.cap_mode {
                CapChoice::Graded => CapMode::Graded,
                CapChoice::Uniform => CapMode::Uniform,
            },
        },
        _ => return Err(Failure::Usage("greenberg-law needs --d, or --precision with --cap".into())),
    };
    let simplification = match a.simplify {
        SimplifyChoice::Integral => Simplification::Integral,
        SimplifyChoice::ModP => Simplification::ModP,
        SimplifyChoice::Fermat => Simplification::Fermat,
    };
    let mode = verify_mode(cli, a.verify, a.samples)?;
    let law = GroupLaw::generate(a.p, kind, simplification)?;
    Ok(match mode {
        None => Output { json: law.to_json(), text: law.to_text() },
        Some(mode) => {
            let report = verify_group_axioms(&law, mode)?;
            Output {
                json: json!({ "law": law.to_json(), "verification": report_json(&report) }),
                text: format!("{}{}", law.to_text(), report_text(&report)),
            }
        }
    })
}

fn report_json(r: &AxiomReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["passed"] = json!(r.passed());
    v
}

fn report_text(r: &AxiomReport) -> String {
    let line = |name: &str, v: &AxiomVerdict| {
        let mut s = format!("{name}: {} ({} checked)", if v.passed { "pass" } else { "FAIL" }, v.checked);
        if let Some(w) = &v.counterexample {
            s += &format!(", counterexample {w:?}");
        }
        s + "\n"
    };
    format!(
        "{}{}{}{}{}",
        line("closure", &r.closure),
        line("identity", &r.identity),
        line("inverses", &r.inverses),
        line("associativity", &r.associativity),
        if r.passed() { "group axioms hold\n" } else { "group axioms FAIL\n" }
    )
}

fn matrix_output<R: Ring>(m: &AdjointMatrix<R>) -> Output {
    Output { json: m.to_json(), text: m.to_text() }
}

fn ad_matrix_cmd(cli: &Cli, a: &AdMatrixArgs) -> Result<Output, Failure> {
    if a.symbolic {
        let n = a.n.ok_or_else(|| Failure::Usage("--symbolic needs --n".into()))?;
        let f = generic_a_element(n, a.degree.unwrap_or((n as usize).min(4)))?;
        return Ok(matrix_output(&ad_matrix(&f, SubgroupSpec::N { n, r: a.r })?));
    }
    let arg = a.f.as_deref().ok_or_else(|| Failure::Usage("ad-matrix needs --f or --symbolic".into()))?;
    let ring = resolve_ring(cli, &[arg])?;
    let n = ring
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))?;
    let f = AutMap::new(poly(&ring, arg)?)?;
    Ok(matrix_output(&ad_matrix(&f, SubgroupSpec::N { n, r: a.r })?))
}

fn module_decomp_cmd(cli: &Cli, m: Option<u32>, p: u64, r: Option<u32>) -> Result<Output, Failure> {
    let (ring, r) = match (m, r) {
        (Some(m), None) => {
            let modulus = p
                .checked_pow(2 * m)
                .ok_or_else(|| Error::OutOfRange(format!("{p}^{} does not fit in 64 bits", 2 * m)))?;
            (AnyRing::from_descriptor(&RingDescriptor::zmod_auto(modulus))?, m)
        }
        (None, Some(r)) => (require_ring(cli)?, r),
        _ => return Err(Failure::Usage("module-decomp needs --m, or --ring with --r".into())),
    };
    let n = ring
        .precision()
        .ok_or_else(|| Error::UnsupportedRing(format!("{} is not truncated", ring.descriptor())))?;
    let slots = module_decomposition(&ring, r)?;
    let mut exponents: Vec<u32> = slots.iter().map(|s| s.exponent).collect();
    exponents.sort_unstable_by(|a, b| b.cmp(a));
    let shape = (n == 2 * r).then(|| corollary_shape(r));
    let matches = shape.as_ref().map(|s| *s == exponents);
    let mut text = format!("# N({n}, {r}) over {}\n", ring.descriptor());
    for s in &slots {
        text += &format!("T^{}: q^{}\n", s.slot, s.exponent);
    }
    if let Some(s) = &shape {
        text += &format!("corollary shape {s:?}: {}\n", if matches == Some(true) { "matches" } else { "MISMATCH" });
    }
    let json = json!({
        "ring": serde_json::to_value(ring.descriptor()).expect("descriptor serializes"),
        "n": n,
        "r": r,
        "slots": slots,
        "exponents": exponents,
        "corollary_shape": shape,
        "matches": matches,
    });
    Ok(Output { json, text })
}
