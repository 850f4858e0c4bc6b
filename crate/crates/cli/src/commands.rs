use std::fmt::Write as _;

use conelab_core::audit::{interior_start, run_criterion, suite, CriterionResult, SUITES};
use conelab_core::cones::{
    cone_from_facets, cone_from_rays, cone_theorem_audit, conic_certificate, dual_cone, k_symplectic_cone,
    nef_threshold, RationalCone,
};
use conelab_core::configurations::{
    blow_down, catalog_cp2_3, cp2_1_configuration, cp2_2_configurations, validate_configuration,
    NegativeConfiguration,
};
use conelab_core::cremona::{
    cremona_equivalent, cremona_reduce, Equivalence, ReductionResult, DEFAULT_EQUIV_BUDGET, DEFAULT_REDUCE_STEPS,
};
use conelab_core::enumeration::{
    all_instances, exceptional_classes, negative_sphere_classes, nine_squares_representations,
    zero_square_sphere_classes, ClassFamily,
};
use conelab_core::inflation::{achieve_all_rays, achieve_vertex, alternate_inflate, max_inflate, InflationTrace};
use conelab_core::rational::{fmt_q, q};
use conelab_core::swcert::{certified_nontrivial_set, default_pool, describe, sw_certificate, SwOutcome};
use conelab_core::{j_genus, DivisorClass};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::args::{ConeCmd, ConfigCmd, CremonaCmd, EnumerateArgs, InflateArgs, NefArgs, SquaresArgs, SwCmd, VerifyArgs};
use crate::{input, CliError, Report};

type Res = Result<Report, CliError>;

/// Version of the catalog JSON layout.
pub const CATALOG_VERSION: u32 = 1;

pub struct Fmt {
    pub paper_signs: bool,
}

impl Fmt {
    fn c(&self, c: &DivisorClass) -> String {
        if self.paper_signs {
            c.tuple_view()
        } else {
            c.to_string()
        }
    }

    fn list(&self, v: &[DivisorClass]) -> String {
        v.iter().map(|c| self.c(c)).collect::<Vec<_>>().join(", ")
    }

    fn lines(&self, out: &mut String, indent: &str, v: &[DivisorClass]) {
        for c in v {
            writeln!(out, "{indent}{}", self.c(c)).ok();
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn report(ok: bool, json: Value, text: String) -> Res {
    Ok(Report { ok, json, text })
}

pub fn enumerate(f: &Fmt, a: &EnumerateArgs) -> Res {
    let s = input::surface(&a.surface, &[])?;
    let mut families: Option<Vec<ClassFamily>> = None;
    let classes = if s.is_rational() {
        if a.genus != 0 {
            return Err(CliError::Usage("rational enumeration covers genus 0 only".into()));
        }
        let k = s.k();
        match a.square {
            -1 => exceptional_classes(k)?,
            sq if sq < 0 => {
                let fams: Vec<ClassFamily> = negative_sphere_classes(k, a.nbound)?
                    .into_iter()
                    .filter(|fam| fam.square() == sq)
                    .collect();
                let inst = all_instances(&fams);
                families = Some(fams);
                inst
            }
            0 => {
                let fams = zero_square_sphere_classes(k)?;
                let inst = all_instances(&fams);
                families = Some(fams);
                inst
            }
            _ => return Err(CliError::Usage("positive squares are not enumerated".into())),
        }
    } else {
        if a.square >= 0 {
            return Err(CliError::Usage("ruled enumeration covers negative squares only".into()));
        }
        conelab_core::configurations::ruled_negative_classes(s, i64::from(a.nbound))?
            .into_iter()
            .filter(|c| c.square() == q(a.square) && j_genus(c) == q(a.genus))
            .collect()
    };
    let mut text = format!("{} classes on {s} with square {} and genus {}\n", classes.len(), a.square, a.genus);
    if let Some(fams) = &families {
        writeln!(text, "families:").ok();
        for fam in fams {
            writeln!(text, "  {}  [{}]", f.c(&fam.representative), fam.orbit_note).ok();
        }
        writeln!(text, "classes:").ok();
    }
    f.lines(&mut text, "  ", &classes);
    let mut json = json!({
        "surface": s.to_string(),
        "square": a.square,
        "genus": a.genus,
        "count": classes.len(),
        "classes": to_json(&classes),
    });
    if let Some(fams) = families {
        json["families"] = to_json(&fams);
    }
    report(true, json, text)
}

pub fn squares(a: &SquaresArgs) -> Res {
    let reps = nine_squares_representations(a.total, !a.any_sum);
    let mut text = format!("{} representations of {}\n", reps.len(), a.total);
    for r in &reps {
        let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
        writeln!(text, "  ({})", parts.join(", ")).ok();
    }
    let json = json!({
        "total": a.total,
        "sum_zero": !a.any_sum,
        "count": reps.len(),
        "representations": reps,
    });
    report(true, json, text)
}

pub fn cremona(f: &Fmt, cmd: &CremonaCmd) -> Res {
    match cmd {
        CremonaCmd::Reduce { class, surface } => {
            let s = input::surface(surface, &[class])?;
            let x = input::class(class, s)?;
            let out = cremona_reduce(&x, input::budget(DEFAULT_REDUCE_STEPS)?)?;
            let text = match &out.result {
                ReductionResult::Reduced { class } => {
                    format!("reduced: {} after {} steps", f.c(class), out.steps)
                }
                ReductionResult::Cycle { trace } => {
                    let path: Vec<String> = trace.iter().map(|c| f.c(c)).collect();
                    format!("cycle after {} steps: {}", out.steps, path.join(" -> "))
                }
                ReductionResult::BudgetExceeded { last } => {
                    format!("budget exceeded after {} steps, last {}", out.steps, f.c(last))
                }
            };
            let ok = !matches!(out.result, ReductionResult::BudgetExceeded { .. });
            report(ok, json!({ "class": to_json(&x), "reduction": to_json(&out) }), text)
        }
        CremonaCmd::Equiv { a, b, surface } => {
            let s = input::surface(surface, &[a, b])?;
            let (x, y) = (input::class(a, s)?, input::class(b, s)?);
            let eq = cremona_equivalent(&x, &y, input::budget(DEFAULT_EQUIV_BUDGET)?)?;
            let text = match &eq {
                Equivalence::Equivalent { path } => {
                    let p: Vec<String> = path.iter().map(|c| f.c(c)).collect();
                    format!("equivalent: {}", p.join(" -> "))
                }
                Equivalence::DistinctByInvariant { which } => format!("not equivalent: {which:?} differs"),
                Equivalence::Unknown { visited } => format!("undecided after visiting {visited} classes"),
            };
            let ok = !matches!(eq, Equivalence::Unknown { .. });
            report(ok, json!({ "a": to_json(&x), "b": to_json(&y), "result": to_json(&eq) }), text)
        }
    }
}

fn build_cone(inp: &input::ConeInput) -> Result<RationalCone, CliError> {
    if !inp.rays.is_empty() {
        Ok(cone_from_rays(&inp.rays)?)
    } else if !inp.facets.is_empty() {
        Ok(cone_from_facets(&inp.facets)?)
    } else {
        Ok(RationalCone::origin(inp.surface))
    }
}

fn describe_cone(f: &Fmt, out: &mut String, label: &str, c: &RationalCone) {
    writeln!(out, "{label} rays:").ok();
    f.lines(out, "  ", &c.rays);
    if !c.lineality.is_empty() {
        writeln!(out, "{label} lineality:").ok();
        f.lines(out, "  ", &c.lineality);
    }
    writeln!(out, "{label} facets:").ok();
    f.lines(out, "  ", &c.facets);
}

pub fn cone(f: &Fmt, cmd: &ConeCmd) -> Res {
    match cmd {
        ConeCmd::Dual(inp) => {
            let inp = input::cone_input(inp, &[])?;
            let c = build_cone(&inp)?;
            let d = dual_cone(&c);
            let mut text = String::new();
            describe_cone(f, &mut text, "dual", &d);
            report(true, json!({ "cone": to_json(&c), "dual": to_json(&d) }), text)
        }
        ConeCmd::Ksymp { k } => {
            let ks = k_symplectic_cone(*k)?;
            let mut text = format!("{} corners, all genus 0 with square 0 or 1: {}\n", ks.corners.len(), ks.corners_ok);
            for c in &ks.corners {
                writeln!(text, "  {}  square {} genus {}", f.c(&c.ray), c.square, c.genus).ok();
            }
            writeln!(text, "{} facets", ks.cone.facets.len()).ok();
            report(ks.corners_ok, to_json(&ks), text)
        }
        ConeCmd::Member { input: inp, class } => {
            let inp = input::cone_input(inp, &[class])?;
            let x = input::class(class, inp.surface)?;
            let gens = if inp.rays.is_empty() {
                build_cone(&inp)?.rays
            } else {
                inp.rays.clone()
            };
            let cert = conic_certificate(&gens, &x)?;
            let verified = cert.verify(&gens, &x);
            let inside = cert.is_combination();
            let text = format!(
                "{} {} the cone (certificate verified: {verified})",
                f.c(&x),
                if inside { "lies in" } else { "lies outside" }
            );
            let json = json!({ "class": to_json(&x), "inside": inside, "certificate": to_json(&cert), "verified": verified });
            report(inside && verified, json, text)
        }
        ConeCmd::Audit(inp) => {
            let inp = input::cone_input(inp, &[])?;
            let gens = if inp.rays.is_empty() {
                build_cone(&inp)?.rays
            } else {
                inp.rays.clone()
            };
            let audit = cone_theorem_audit(&gens)?;
            let mut text = String::new();
            for r in &audit.rays {
                let kind = r.kind.map_or("-".to_string(), |k| format!("{k:?}"));
                writeln!(text, "{}  K·r {} genus {} kind {kind} ok {}", f.c(&r.ray), r.k_pairing, r.genus, r.ok).ok();
            }
            for v in &audit.violations {
                writeln!(text, "violation: {v}").ok();
            }
            writeln!(text, "passed: {}", audit.passed).ok();
            report(audit.passed, to_json(&audit), text)
        }
    }
}

pub fn nef(f: &Fmt, a: &NefArgs) -> Res {
    let (s, curves) = input::curves_input(&a.curves, &[&a.omega])?;
    let omega = input::class(&a.omega, s)?;
    let t = nef_threshold(&omega, &curves)?;
    let text = format!(
        "threshold {} attained by {} (denominator check: {})",
        fmt_q(&t.value),
        f.c(&t.attained_by),
        t.denominator_ok
    );
    report(true, json!({ "omega": to_json(&omega), "threshold": to_json(&t) }), text)
}

fn trace_text(f: &Fmt, out: &mut String, t: &InflationTrace) {
    writeln!(out, "  start {}", f.c(&t.start)).ok();
    for s in &t.steps {
        writeln!(out, "  + {} * ({})", fmt_q(&s.coefficient), f.c(&s.curve)).ok();
    }
    writeln!(out, "  = {}{}", f.c(&t.result), if t.limit_formula_used { "  (limit)" } else { "" }).ok();
}

pub fn inflate(f: &Fmt, a: &InflateArgs) -> Res {
    let mut extra: Vec<&str> = Vec::new();
    extra.extend(a.start.as_deref());
    extra.extend(a.ray.as_deref());
    let (s, curves) = match (&a.config, &a.curves) {
        (Some(path), _) => {
            let cfg: NegativeConfiguration = input::read_json(path)?;
            (cfg.surface, cfg.curves)
        }
        (None, Some(list)) => {
            let lits = input::split_list(list);
            let mut all = lits.clone();
            all.extend_from_slice(&extra);
            let s = input::surface(&a.surface, &all)?;
            (s, input::classes(&lits, s)?)
        }
        (None, None) => return Err(CliError::Usage("give --config or --curves".into())),
    };
    let start = match &a.start {
        Some(l) => input::class(l, s)?,
        None => interior_start(&curves)
            .ok_or_else(|| CliError::Failed("no interior start class for these curves".into()))?,
    };
    let Some(ray_lit) = &a.ray else {
        let map = achieve_all_rays(&curves, &start)?;
        let ok = map.values().all(InflationTrace::verify);
        let mut text = format!("start {}; {} rays achieved\n", f.c(&start), map.len());
        let mut rays = Vec::new();
        for (ray, trace) in &map {
            writeln!(text, "ray {}:", f.c(ray)).ok();
            trace_text(f, &mut text, trace);
            rays.push(json!({ "ray": to_json(ray), "trace": to_json(trace), "verified": trace.verify() }));
        }
        return report(ok, json!({ "start": to_json(&start), "rays": rays }), text);
    };
    let ray = input::class(ray_lit, s)?;
    let supporting: Vec<DivisorClass> = curves.iter().filter(|c| c.dot(&ray).is_zero()).cloned().collect();
    let ach = achieve_vertex(&start, &supporting)?;
    let hit = ach.ray.same_ray(&ray);
    let mut text = format!("start {}, target ray {}\n", f.c(&start), f.c(&ray));
    writeln!(text, "supporting curves: {}", f.list(&supporting)).ok();
    trace_text(f, &mut text, &ach.trace);
    writeln!(text, "reached target: {hit}").ok();
    let mut json = json!({
        "start": to_json(&start),
        "ray": to_json(&ray),
        "supporting": to_json(&supporting),
        "achievement": to_json(&ach),
        "reached": hit,
    });
    let mut ok = hit && ach.trace.verify();
    if let Some(n) = a.trace {
        let [c1, c2] = supporting.as_slice() else {
            return Err(CliError::Usage(format!(
                "--trace needs exactly two curves through the ray, found {}",
                supporting.len()
            )));
        };
        let (on_facet, _) = max_inflate(&start, c1)?;
        let run = alternate_inflate(&on_facet, c1, c2, n)?;
        let coeffs: Vec<String> = run.coefficients.iter().map(fmt_q).collect();
        writeln!(text, "alternating run, ratio x = {}:", fmt_q(&run.ratio)).ok();
        writeln!(text, "  coefficients {}", coeffs.join(", ")).ok();
        writeln!(text, "  limit {}{}", f.c(&run.limit), if run.divergent { " (divergent)" } else { "" }).ok();
        writeln!(text, "  progression holds: {}", run.progression_holds).ok();
        ok &= run.progression_holds && run.orthogonal_coefficient_matches != Some(false);
        json["alternating"] = to_json(&run);
    }
    report(ok, json, text)
}

fn catalog(family: &str, n: u32) -> Result<Value, CliError> {
    let entries = match family {
        "cp2+1" => to_json(&[cp2_1_configuration(n)]),
        "cp2+2" => to_json(&cp2_2_configurations(n)),
        "cp2+3" => to_json(&catalog_cp2_3(n)),
        _ => return Err(CliError::Usage(format!("unknown catalog {family:?}; use cp2+1, cp2+2 or cp2+3"))),
    };
    Ok(json!({
        "format": "conelab-catalog",
        "version": CATALOG_VERSION,
        "family": family,
        "n": n,
        "entries": entries,
    }))
}

pub fn config(f: &Fmt, cmd: &ConfigCmd) -> Res {
    match cmd {
        ConfigCmd::Validate { file } => {
            let cfg: NegativeConfiguration = input::read_json(file)?;
            let rep = validate_configuration(&cfg);
            let mut text = format!("curves: {}\n", f.list(&cfg.curves));
            writeln!(text, "classification: {}", rep.p1.passed).ok();
            for c in &rep.p1.classified {
                writeln!(text, "  {}  {}", f.c(&c.class), c.family).ok();
            }
            writeln!(text, "dual witness: {}", rep.p2.passed).ok();
            if let (Some(w), Some(sq)) = (&rep.p2.witness, &rep.p2.witness_square) {
                writeln!(text, "  {}  square {sq}", f.c(w)).ok();
            }
            writeln!(text, "-1 coverage: {} ({} classes)", rep.p3.passed, rep.p3.entries.len()).ok();
            for msg in rep.p1.failures.iter().chain(&rep.p2.failures).chain(&rep.p3.failures) {
                writeln!(text, "failure: {msg}").ok();
            }
            writeln!(text, "passed: {}", rep.passed).ok();
            report(rep.passed, json!({ "config": to_json(&cfg), "report": to_json(&rep) }), text)
        }
        ConfigCmd::Blowdown { file, at } => {
            let cfg: NegativeConfiguration = input::read_json(file)?;
            let e = input::class(at, cfg.surface)?;
            let bd = blow_down(&cfg, &e)?;
            let mut text = format!("contracting {} onto coordinate E{}\n", f.c(&bd.at), bd.contracted_index);
            for (i, j, l) in &bd.relabeling {
                writeln!(text, "  reflect in H-E{i}-E{j}-E{l}").ok();
            }
            for r in &bd.records {
                writeln!(
                    text,
                    "  {} -> {}  C·E {}  genus {} -> {}{}",
                    f.c(&r.original),
                    f.c(&r.image),
                    fmt_q(&r.c_dot_e),
                    fmt_q(&r.genus_before),
                    fmt_q(&r.genus_after),
                    if r.kept { "" } else { "  (dropped)" }
                )
                .ok();
            }
            writeln!(text, "result on {}: {}", bd.config.surface, f.list(&bd.config.curves)).ok();
            writeln!(text, "identities hold: {}", bd.identities_hold).ok();
            report(bd.identities_hold, to_json(&bd), text)
        }
        ConfigCmd::Catalog { family, n } => {
            let json = catalog(family, *n)?;
            let mut text = format!("{family} catalog, n = {n}\n");
            for e in json["entries"].as_array().into_iter().flatten() {
                let cfg = if e.get("config").is_some() { &e["config"] } else { e };
                let curves: NegativeConfiguration =
                    serde_json::from_value(cfg.clone()).map_err(|e| CliError::Failed(e.to_string()))?;
                let label = match (e.get("case"), e.get("variant")) {
                    (Some(c), Some(v)) => format!("case {c}.{v}: "),
                    _ => String::new(),
                };
                writeln!(text, "  {label}{}", f.list(&curves.curves)).ok();
            }
            report(true, json, text)
        }
    }
}

pub fn sw(f: &Fmt, cmd: &SwCmd) -> Res {
    match cmd {
        SwCmd::Cert { class, surface } => {
            let s = input::surface(surface, &[class])?;
            let e = input::class(class, s)?;
            let out = sw_certificate(&e, &default_pool(s))?;
            let text = match &out {
                SwOutcome::Certified(c) => format!("certified {}", describe(c)),
                SwOutcome::NoCertificate(why) => format!("no certificate for {}: {why:?}", f.c(&e)),
            };
            let ok = out.certificate().is_some_and(|c| c.verify());
            report(ok, to_json(&out), text)
        }
        SwCmd::Set { surface } => {
            let s = input::surface(surface, &[])?;
            let set = certified_nontrivial_set(s);
            let ok = set.iter().all(|c| c.verify());
            let mut text = format!("{} certified classes on {s}\n", set.len());
            for c in &set {
                writeln!(text, "  {}", describe(c)).ok();
            }
            report(ok, to_json(&set), text)
        }
    }
}

fn check_json(r: &CriterionResult, timings: bool) -> Value {
    let mut v = json!({
        "id": r.id,
        "name": r.name,
        "status": if r.passed { "pass" } else { "fail" },
        "details": r.detail,
    });
    if timings {
        v["millis"] = json!(r.millis);
    }
    v
}

pub fn verify(a: &VerifyArgs) -> Res {
    let ids = suite(&a.suite)
        .ok_or_else(|| CliError::Usage(format!("unknown suite {:?}; known: {}", a.suite, SUITES.join(", "))))?;
    let results: Vec<CriterionResult> = std::thread::scope(|sc| {
        let handles: Vec<_> = ids.iter().map(|&id| sc.spawn(move || run_criterion(id))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let passed = results.iter().filter(|r| r.passed).count();
    let mut text = String::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        if a.timings {
            writeln!(text, "{}", r.line()).ok();
        } else {
            writeln!(text, "criterion {:>2} {:<28} {status}  {}", r.id, r.name, r.detail).ok();
        }
    }
    writeln!(text, "{passed}/{} pass", results.len()).ok();
    let json = json!({
        "suite": a.suite,
        "checks": results.iter().map(|r| check_json(r, a.timings)).collect::<Vec<_>>(),
        "summary": { "passed": passed, "failed": results.len() - passed, "total": results.len() },
    });
    report(passed == results.len(), json, text)
}
