use crate::report::{Report, Table};
use crate::ParamArgs;
use holonomy_core::catalog::{dump, family, standard_structure, FamilyId, Params};
use holonomy_core::curvature::{ricci_with_eta, Metric};
use holonomy_core::flow::{
    build_hypo_ode, first_integral_drift, integrate, second_order_residual_max, HitchinKind, IntegrateOptions, Status,
};
use holonomy_core::holonomy::{certify_g2, certify_su3, Certificate, Solution};
use holonomy_core::scalars::{parse_rational, Poly};
use holonomy_core::structfile::{parse_structure_file, FileError, StructureFile};
use holonomy_core::structures::{check_half_flat, check_hypo, check_hypo_contact, check_su2, SU2Structure};
use holonomy_core::verify::{criterion_count, run_all, VerifyOptions};
use holonomy_core::{Coeff, Form};
use std::path::Path;
use std::time::Instant;

/// Input or usage problem; maps to exit code 2.
pub type CmdResult = Result<Report, String>;

fn diagnostic(path: &Path, text: &str, e: &FileError) -> String {
    let src = text.lines().nth(e.line.saturating_sub(1)).unwrap_or("");
    let caret = " ".repeat(e.column.saturating_sub(1)) + "^";
    format!("{}:{}:{}: {}\n  {src}\n  {caret}", path.display(), e.line, e.column, e.message)
}

fn read_file(path: &Path) -> Result<StructureFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_structure_file(&text).map_err(|e| diagnostic(path, &text, &e))
}

pub fn parse_params(args: &ParamArgs) -> Result<Params, String> {
    let mut p = Params::new();
    for item in &args.set {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("--set expects key=value, got '{item}'"))?;
        let (k, v) = (k.trim(), v.trim());
        let q = parse_rational(v).ok_or_else(|| format!("--set {k}: '{v}' is not a rational number"))?;
        if p.insert(k.to_string(), q).is_some() {
            return Err(format!("parameter '{k}' given twice"));
        }
    }
    Ok(p)
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    s.parse().map_err(|e: holonomy_core::catalog::CatalogError| e.to_string())
}

fn describe(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

fn failing<C: Coeff>(residuals: &[(String, Form<C>)]) -> String {
    residuals.iter().filter(|(_, f)| !f.is_zero()).map(|(n, f)| format!("{n} = {f}")).collect::<Vec<_>>().join("; ")
}

fn file_inputs(r: &mut Report, path: &Path, file: &StructureFile) {
    r.input("file", path.display());
    if let Some(n) = &file.name {
        r.input("name", n);
    }
    r.input("dim", file.dim);
    for (k, v) in &file.params {
        r.input(k, v.as_ref().map_or("symbolic".to_string(), |v| v.to_string()));
    }
}

pub fn jacobi(path: &Path) -> CmdResult {
    let file = read_file(path)?;
    let mut r = Report::new("jacobi");
    file_inputs(&mut r, path, &file);
    let rep = file.algebra().jacobi_check();
    let detail = rep.failures.iter().map(|(i, f)| format!("d(de{i}) = {f}")).collect::<Vec<_>>().join("; ");
    r.verdict("d^2 = 0", rep.pass, detail);
    Ok(r)
}

pub fn hypo_check(path: &Path) -> CmdResult {
    let file = read_file(path)?;
    let mut r = Report::new("hypo-check");
    file_inputs(&mut r, path, &file);
    let g = file.algebra();
    let jac = g.jacobi_check();
    r.verdict("d^2 = 0", jac.pass, "");
    let su2: SU2Structure<Poly> = match (file.su2_bound(), file.dim) {
        (Some(s), _) => s,
        (None, 5) => {
            r.input("structure", "standard (eta = e5, omega1 = e12+e34, ...)");
            standard_structure()
        }
        (None, _) if file.su3.is_some() => SU2Structure {
            eta: Form::zero(file.dim),
            omega1: Form::zero(file.dim),
            omega2: Form::zero(file.dim),
            omega3: Form::zero(file.dim),
        },
        (None, n) => return Err(format!("{}: dimension {n} needs explicit structure forms", path.display())),
    };
    if file.dim == 5 {
        let alg = check_su2(&su2);
        r.verdict("SU(2)-structure", alg.pass, failing(&alg.residuals));
        let hypo = check_hypo(&g, &su2);
        r.verdict("hypo", hypo.pass, failing(&hypo.residuals));
        let contact = check_hypo_contact(&g, &su2);
        r.note("hypo-contact", contact.pass, failing(&contact.residuals));
    }
    if let Some(s3) = file.su3_bound() {
        let compat = s3.compatibility_residuals();
        r.verdict("SU(3) compatibility", compat.iter().all(|(_, f)| f.is_zero()), failing(&compat));
        let hf = check_half_flat(&g, &s3);
        r.verdict("half-flat", hf.pass, failing(&hf.residuals));
    }
    Ok(r)
}

pub fn ricci(file: Option<&Path>, fam: Option<&str>, args: &ParamArgs) -> CmdResult {
    let mut r = Report::new("ricci");
    let (g, eta) = match (file, fam) {
        (Some(path), None) => {
            if !args.set.is_empty() {
                return Err("--set applies to --family; bind file parameters with 'param' lines".into());
            }
            let f = read_file(path)?;
            file_inputs(&mut r, path, &f);
            let eta = f.su2_bound().map(|s| s.eta).unwrap_or_else(|| Form::basis(f.dim, &[f.dim]));
            (f.algebra(), eta)
        }
        (None, Some(id)) => {
            let id = parse_family(id)?;
            let p = parse_params(args)?;
            r.input("family", id);
            for (k, v) in &p {
                r.input(k, v);
            }
            let entry = family(id, &p).map_err(|e| e.to_string())?;
            (entry.algebra, entry.structure.eta)
        }
        _ => return Err("give exactly one of --file or --family".into()),
    };
    let jac = g.jacobi_check();
    if !jac.pass {
        r.verdict("d^2 = 0", false, "not a Lie algebra; Ricci tensor undefined");
        return Ok(r);
    }
    let m = Metric::<Poly>::identity(g.dim());
    let rep = ricci_with_eta(&g, &m, &eta).map_err(|e| e.to_string())?;
    let n = g.dim();
    if rep.is_diagonal() {
        let mut t = Table::new("Ricci tensor (orthonormal basis, diagonal)", &["i", "Ric_ii"]);
        for (i, v) in rep.diagonal().iter().enumerate() {
            t.row(vec![(i + 1).to_string(), v.to_string()]);
        }
        r.tables.push(t);
    } else {
        let header: Vec<String> = std::iter::once("Ric".to_string()).chain((1..=n).map(|j| j.to_string())).collect();
        let mut t = Table { title: "Ricci tensor (orthonormal basis)".into(), header, rows: vec![] };
        for (i, row) in rep.ricci.iter().enumerate() {
            t.row(std::iter::once((i + 1).to_string()).chain(row.iter().map(|v| v.to_string())).collect());
        }
        r.tables.push(t);
    }
    let mut s = Table::new("invariants", &["quantity", "value"]);
    s.row(vec!["scalar curvature".into(), rep.scalar.to_string()]);
    match &rep.eta_einstein {
        Some((tau, nu)) => {
            s.row(vec!["tau".into(), tau.to_string()]);
            s.row(vec!["nu".into(), nu.to_string()]);
        }
        None => s.row(vec!["eta-Einstein".into(), "no".into()]),
    }
    r.tables.push(s);
    r.data = serde_json::json!({
        "ricci": rep.ricci.iter().map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "scalar": rep.scalar.to_string(),
        "eta_einstein": rep.eta_einstein.as_ref().map(|(t, v)| serde_json::json!({"tau": t.to_string(), "nu": v.to_string()})),
    });
    r.verdict("Ricci tensor", true, "");
    Ok(r)
}

pub fn catalog_list() -> CmdResult {
    let mut r = Report::new("catalog list");
    let mut t = Table::new("hypo-contact families", &["id", "parameters", "isomorphic to", "notes"]);
    for id in FamilyId::ALL {
        let e = family(id, &Params::new()).map_err(|e| e.to_string())?;
        let target = e.canonical_target.map_or("-".to_string(), |c| c.to_string());
        let mut params = id.params().join(", ");
        if id.requires_nonzero_r() {
            params.push_str(" (r != 0)");
        }
        t.row(vec![id.to_string(), params, target, e.notes.clone()]);
    }
    r.tables.push(t);
    Ok(r)
}

pub fn catalog_dump(id: &str, args: &ParamArgs) -> CmdResult {
    let id = parse_family(id)?;
    let p = parse_params(args)?;
    let entry = family(id, &p).map_err(|e| e.to_string())?;
    let text = dump(&entry);
    let mut r = Report::new("catalog dump");
    r.quiet = true;
    let back = parse_structure_file(&text).map_err(|e| format!("internal: dumped file does not parse: {e}"))?;
    let same = back.algebra() == entry.algebra && back.su2_bound().as_ref() == Some(&entry.structure);
    r.verdict("round trip", same, if same { "exact" } else { "re-read file differs" });
    r.text = Some(text);
    Ok(r)
}

pub fn evolve(fam: &str, args: &ParamArgs, t_end: f64, tol: f64) -> CmdResult {
    let id = parse_family(fam)?;
    let p = parse_params(args)?;
    if !(tol > 0.0) || !t_end.is_finite() {
        return Err("--tol must be positive and --t-end finite".into());
    }
    let ode = build_hypo_ode(id, &p).map_err(|e| e.to_string())?;
    let mut r = Report::new("evolve");
    r.input("family", id);
    r.input("params", describe(&p));
    r.input("t_end", t_end);
    r.input("tol", format!("{tol:e}"));
    let start = Instant::now();
    let traj = integrate(&ode, t_end, &IntegrateOptions::new(tol)).map_err(|e| e.to_string())?;
    r.timings.insert("integrate".into(), start.elapsed().as_secs_f64());
    let mut t = Table::new("trajectory", &["t", "f", "f'", "f''"]);
    for k in 0..traj.len() {
        t.row(vec![
            format!("{:.10}", traj.times[k]),
            format!("{:.12e}", traj.values[k][0]),
            format!("{:.12e}", traj.d1[k][0]),
            format!("{:.12e}", traj.d2[k][0]),
        ]);
    }
    r.tables.push(t);
    let drift = first_integral_drift(&ode, &traj);
    let second = second_order_residual_max(&ode, &traj);
    r.residual("first integral drift", drift);
    r.residual("second-order residual", second);
    let bound = (1e3 * tol).max(1e-9);
    r.verdict("first integral conserved", drift <= bound, format!("{drift:.2e} (bound {bound:.0e})"));
    r.verdict("second-order equation", second <= bound, format!("{second:.2e} (bound {bound:.0e})"));
    let last = traj.times.last().copied().unwrap_or(0.0);
    match traj.status {
        Status::Completed => r.note("reached t_end", true, format!("{} steps", traj.len() - 1)),
        Status::StoppedNearSingularity => r.note(
            "reached t_end",
            false,
            format!("stopped at t = {last:.6}: {}", traj.stop_reason.clone().unwrap_or_default()),
        ),
    }
    r.data = serde_json::json!({
        "times": traj.times,
        "f": traj.values.iter().map(|v| v[0]).collect::<Vec<_>>(),
        "df": traj.d1.iter().map(|v| v[0]).collect::<Vec<_>>(),
        "ddf": traj.d2.iter().map(|v| v[0]).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn check_times(times: &[f64]) -> Result<f64, String> {
    if times.is_empty() || times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err("--times needs one or more non-negative numbers".into());
    }
    Ok(times.iter().copied().fold(0.0, f64::max))
}

fn certificate_report(r: &mut Report, cert: &Certificate) {
    for (name, v) in &cert.residuals.0 {
        r.residual(name, *v);
    }
    let mut t = Table::new("curvature span", &["sample times", "rank", "target", "exact rank at t=0"]);
    t.row(vec![
        format!("{:?}", cert.sample_times),
        cert.rank.rank.to_string(),
        cert.target_rank.to_string(),
        cert.exact_rank_t0.map_or("-".to_string(), |k| k.to_string()),
    ]);
    r.tables.push(t);
    if let Some(ex) = &cert.exact_initial {
        r.verdict("exact residuals at t = 0", ex.max() == 0.0, format!("max {:.1e}", ex.max()));
    }
    r.verdict(&format!("holonomy {}", cert.group), cert.pass, cert.verdict.clone());
    r.data = serde_json::to_value(cert).expect("certificate serializes");
}

pub fn holonomy(fam: &str, args: &ParamArgs, times: &[f64], tol: f64) -> CmdResult {
    let id = parse_family(fam)?;
    let p = parse_params(args)?;
    let t_end = check_times(times)?.max(1e-3);
    let mut r = Report::new("holonomy");
    r.input("family", id);
    r.input("params", describe(&p));
    r.input("tol", format!("{tol:e}"));
    let start = Instant::now();
    let sol = Solution::hypo(id, &p, t_end, 1e-10, times).map_err(|e| e.to_string())?;
    let cert = certify_su3(&sol, times, tol);
    r.timings.insert("certify".into(), start.elapsed().as_secs_f64());
    certificate_report(&mut r, &cert);
    Ok(r)
}

pub fn g2(kind: &str, args: &ParamArgs, times: &[f64], tol: f64) -> CmdResult {
    let kind: HitchinKind = kind.parse()?;
    let p = parse_params(args)?;
    let t_end = check_times(times)?.max(1e-3);
    let mut r = Report::new("g2");
    r.input("kind", format!("{kind:?}"));
    r.input("params", describe(&p));
    r.input("tol", format!("{tol:e}"));
    let start = Instant::now();
    let sol = Solution::hitchin(kind, &p, t_end, 1e-10, times).map_err(|e| e.to_string())?;
    let cert = certify_g2(&sol, times, tol);
    r.timings.insert("certify".into(), start.elapsed().as_secs_f64());
    certificate_report(&mut r, &cert);
    Ok(r)
}

pub fn verify_paper(seed: u64) -> CmdResult {
    let opts = VerifyOptions { seed, ..VerifyOptions::default() };
    let mut r = Report::new("verify-paper");
    r.input("seed", format!("{seed:#x}"));
    let results = run_all(&opts);
    let passed = results.iter().filter(|c| c.pass).count();
    let mut text: Vec<String> = results.iter().map(|c| c.line()).collect();
    text.push(format!("{passed}/{} criteria pass", criterion_count()));
    r.text = Some(text.join("\n"));
    for c in &results {
        r.timings.insert(format!("{:02}", c.id), c.seconds);
        r.verdict(&format!("criterion {}: {}", c.id, c.title), c.pass, "");
    }
    r.quiet_verdicts = true;
    r.data = serde_json::to_value(&results).expect("results serialize");
    Ok(r)
}
