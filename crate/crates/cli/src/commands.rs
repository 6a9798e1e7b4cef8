use std::path::{Path, PathBuf};

use relstab_core::audit::{run_suite, SuiteOptions};
use relstab_core::catalog;
use relstab_core::constructions::{verify_wrap_lemma, wrap_ses};
use relstab_core::homs::{summand_witness_bruteforce, DEFAULT_SEARCH_BOUND};
use relstab_core::io::{self, Resolver};
use relstab_core::reps::{dual, direct_sum_all, induce, restrict, tensor};
use relstab_core::triangles::{finite_hocolim, mapping_cone, stably_isomorphic_witness, Chain};
use relstab_core::{Error, Module, Prime, RelativeContext, Result};
use serde_json::{json, Value};

use crate::report::{check, Report};
use crate::{OpArgs, Verb};

fn verb_name(v: Verb) -> String {
    use clap::ValueEnum;
    v.to_possible_value().expect("no skipped verbs").get_name().to_string()
}

fn arity(verb: Verb, args: &[String], n: usize, at_least: bool) -> Result<()> {
    let ok = if at_least { args.len() >= n } else { args.len() == n };
    if ok {
        return Ok(());
    }
    let want = if at_least { format!("at least {n}") } else { n.to_string() };
    Err(Error::Invalid(format!("{} takes {want} argument(s), got {}", verb_name(verb), args.len())))
}

fn summary(reference: &str, m: &Module) -> Value {
    json!({"ref": reference, "dim": m.dim(), "p": m.p(), "group_order": m.group().order()})
}

struct Op<'a> {
    args: &'a OpArgs,
    resolver: Resolver,
    resolved: Vec<Value>,
}

impl<'a> Op<'a> {
    fn check_p(&self, m: &Module) -> Result<()> {
        match self.args.p {
            Some(p) if Prime::new(p)?.get() != m.p() => Err(Error::Characteristic(p, m.p())),
            _ => Ok(()),
        }
    }

    fn module(&mut self, r: &str) -> Result<Module> {
        let m = self.resolver.module(r)?;
        self.check_p(&m)?;
        self.resolved.push(summary(r, &m));
        Ok(m)
    }

    fn context(&mut self) -> Result<RelativeContext> {
        let r = self.args.w.as_deref().ok_or_else(|| {
            Error::Invalid(format!("{} needs a relative context: pass --w <module>", verb_name(self.args.verb)))
        })?;
        let w = self.resolver.module(r)?;
        self.check_p(&w)?;
        Ok(RelativeContext::new(w))
    }

    fn bound(&self) -> u64 {
        self.args.bound.unwrap_or(DEFAULT_SEARCH_BOUND)
    }
}

/// Result payload for a module, written to `out` when given, with the
/// validation and round-trip checks.
fn module_result(m: &Module, out: Option<&Path>, extra: Value) -> Result<(Value, Vec<relstab_core::audit::Check>)> {
    let mut result = json!({"dim": m.dim(), "p": m.p(), "group_order": m.group().order()});
    let mut checks = vec![check("output_valid", m.validate().is_ok(), Value::Null)];
    match out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&io::module_to_json(m)).expect("json");
            std::fs::write(path, text + "\n")
                .map_err(|source| Error::Io { path: path.display().to_string(), source })?;
            let back = Resolver::default().module(&path.display().to_string())?;
            checks.push(check("round_trip", back == *m, json!({"out": path.display().to_string()})));
            result["out"] = json!(path.display().to_string());
        }
        None => result["module"] = io::module_to_json(m),
    }
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Ok((result, checks))
}

pub fn op(args: &OpArgs) -> Result<Report> {
    let mut op = Op { args, resolver: Resolver::default(), resolved: Vec::new() };
    let a = &args.args;
    let out = args.out.as_deref();
    let verb = args.verb;
    let (result, checks) = match verb {
        Verb::Tensor => {
            arity(verb, a, 2, false)?;
            let (x, y) = (op.module(&a[0])?, op.module(&a[1])?);
            module_result(&tensor(&x, &y)?, out, json!({}))?
        }
        Verb::Dual => {
            arity(verb, a, 1, false)?;
            module_result(&dual(&op.module(&a[0])?), out, json!({}))?
        }
        Verb::Sum => {
            arity(verb, a, 1, true)?;
            let parts = a.iter().map(|r| op.module(r)).collect::<Result<Vec<_>>>()?;
            module_result(&direct_sum_all(&parts)?, out, json!({}))?
        }
        Verb::Restrict => {
            arity(verb, a, 2, false)?;
            let m = op.module(&a[0])?;
            let h = op.resolver.subgroup(&a[1])?;
            module_result(&restrict(&m, &h)?, out, json!({"subgroup_order": h.order()}))?
        }
        Verb::Induce => {
            arity(verb, a, 2, false)?;
            let h = op.resolver.subgroup(&a[0])?;
            let m = op.module(&a[1])?;
            module_result(&induce(h.parent(), &h, &m)?, out, json!({"index": h.parent().order() / h.order()}))?
        }
        Verb::Omega | Verb::OmegaInv => {
            arity(verb, a, 1, false)?;
            let ctx = op.context()?;
            let x = op.module(&a[0])?;
            let ses = if matches!(verb, Verb::Omega) { ctx.cover_sequence(&x)? } else { ctx.hull_sequence(&x)? };
            let m = if matches!(verb, Verb::Omega) { ses.left() } else { ses.right() };
            let (result, mut checks) = module_result(m, out, json!({"cover_dim": ses.middle().dim()}))?;
            checks.push(check("sequence_w_split", ctx.is_w_split(&ses)?, Value::Null));
            (result, checks)
        }
        Verb::IsRelProj => {
            arity(verb, a, 1, false)?;
            let ctx = op.context()?;
            let x = op.module(&a[0])?;
            let witness = ctx.projectivity_witness(&x)?;
            let mut checks = Vec::new();
            if let Some(s) = &witness {
                let ok = ctx.counit(&x)?.after(s)?.matrix().is_identity();
                checks.push(check("section_verified", ok, Value::Null));
            }
            (json!(witness.is_some()), checks)
        }
        Verb::IsWSplit => {
            arity(verb, a, 1, false)?;
            let ctx = op.context()?;
            let ses = op.resolver.ses(&a[0])?;
            op.check_p(ses.middle())?;
            op.resolved.push(json!({
                "ref": a[0], "dims": [ses.left().dim(), ses.middle().dim(), ses.right().dim()], "p": ses.prime().get()
            }));
            (json!(ctx.is_w_split(&ses)?), Vec::new())
        }
        Verb::StableHom => {
            arity(verb, a, 2, false)?;
            let ctx = op.context()?;
            let (x, y) = (op.module(&a[0])?, op.module(&a[1])?);
            (json!(ctx.stable_hom_dim(&x, &y)?), Vec::new())
        }
        Verb::Cone => {
            arity(verb, a, 1, false)?;
            let ctx = op.context()?;
            let f = op.resolver.morphism(&a[0])?;
            op.check_p(f.source())?;
            op.resolved.push(json!({"ref": a[0], "source_dim": f.source().dim(), "target_dim": f.target().dim()}));
            let cone = mapping_cone(&ctx, &f)?;
            let (result, mut checks) = module_result(&cone.cone, out, json!({}))?;
            checks.push(check("composite_stably_zero", ctx.is_stably_zero(&cone.to_cone.after(&f)?)?, Value::Null));
            (result, checks)
        }
        Verb::Hocolim => {
            arity(verb, a, 1, false)?;
            let ctx = op.context()?;
            let chain = Chain::new(op.resolver.chain(&a[0])?)?;
            op.check_p(chain.last())?;
            let dims: Vec<usize> = chain.objects().iter().map(Module::dim).collect();
            op.resolved.push(json!({"ref": a[0], "dims": dims}));
            let h = finite_hocolim(&ctx, &chain)?;
            let extra = json!({"lambda_is_isomorphism": h.lambda.is_isomorphism()});
            let (result, mut checks) = module_result(&h.cone, out, extra)?;
            checks.push(check("triangle_w_split", ctx.is_w_split(h.triangle.ses())?, Value::Null));
            (result, checks)
        }
        Verb::IsSummand => {
            arity(verb, a, 2, false)?;
            let (x, y) = (op.module(&a[0])?, op.module(&a[1])?);
            let witness = summand_witness_bruteforce(&x, &y, op.bound())?;
            (json!(witness.is_some()), Vec::new())
        }
        Verb::StablyIso => {
            arity(verb, a, 2, false)?;
            let ctx = op.context()?;
            let (x, y) = (op.module(&a[0])?, op.module(&a[1])?);
            (json!(stably_isomorphic_witness(&ctx, &x, &y, op.bound())?.is_some()), Vec::new())
        }
    };
    let inputs = json!({
        "args": args.args,
        "resolved": op.resolved,
        "w": args.w,
        "p": args.p,
        "bound": args.bound,
    });
    Ok(Report { command: format!("op {}", verb_name(verb)), inputs, result, checks })
}

pub fn wrap(p: u32, ses_ref: &str, verify: bool, out: Option<&Path>) -> Result<Report> {
    let p = Prime::new(p)?;
    let ses = Resolver::default().ses(ses_ref)?;
    let wrapped = wrap_ses(p, &ses)?;
    let extra = json!({"base_order": wrapped.base.order()});
    let (mut result, mut checks) = module_result(&wrapped.module, out, extra)?;
    if verify {
        let r = verify_wrap_lemma(p, &ses)?;
        result["split"] = json!(r.split);
        result["rel_proj"] = json!(r.rel_proj);
        result["agree"] = json!(r.agree);
        checks.push(check("wrap_lemma_agree", r.agree, Value::Null));
    }
    let inputs = json!({
        "p": p.get(),
        "ses": {"ref": ses_ref, "dims": [ses.left().dim(), ses.middle().dim(), ses.right().dim()]},
        "verify": verify,
    });
    Ok(Report { command: "wrap".into(), inputs, result, checks })
}

pub fn verify_paper(pmax: u32, fixtures: Vec<PathBuf>, seed: u64, bound: Option<u64>) -> Report {
    let opts = SuiteOptions { pmax, bound: bound.unwrap_or(DEFAULT_SEARCH_BOUND), seed, fixtures };
    let checks = run_suite(&opts);
    let passed = checks.iter().filter(|c| c.passed).count();
    let inputs = json!({
        "pmax": pmax,
        "seed": seed,
        "bound": opts.bound,
        "fixtures": opts.fixtures.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    Report { command: "verify-paper".into(), inputs, result: json!({"passed": passed, "total": checks.len()}), checks }
}

pub fn catalog() -> Report {
    let entries: Vec<Value> = catalog::names()
        .iter()
        .map(|n| match catalog::get_example(n) {
            Ok(inst) => json!({"name": n, "kind": inst.kind()}),
            Err(e) => json!({"name": n, "error": e.to_string()}),
        })
        .collect();
    Report { command: "catalog".into(), inputs: json!({}), result: json!(entries), checks: Vec::new() }
}
