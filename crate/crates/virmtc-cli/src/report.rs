//! Markdown report: census, join tables, modularity lists, extensions and gluing rows,
//! all regenerated from computation.

use std::collections::BTreeSet;

use rayon::prelude::*;
use virmtc::extension::{ExtName, Extension};
use virmtc::fusion::fpdim_closed_form;
use virmtc::gluing::{scan_unitary_chain_with, GlueSide, GluingCandidate, ScanRow};
use virmtc::minimal_model::MinimalModel;
use virmtc::subcat::SubcatName;
use virmtc::Error;

use crate::render::{f12, join, md_table};
use crate::{join_name, subcat_records, Ctx, SubcatRecord, JOIN_COLS, JOIN_ROWS};

struct ModelRow {
    model: MinimalModel,
    rank: usize,
    recs: Vec<SubcatRecord>,
    joins: Vec<Vec<Option<SubcatName>>>,
}

fn models(pmin: i64, pmax: i64, qmax: i64) -> Vec<MinimalModel> {
    (pmin.max(2)..=pmax)
        .flat_map(|p| (p + 1..=qmax).filter_map(move |q| MinimalModel::new(p, q).ok()))
        .collect()
}

fn braces(xs: &[String]) -> String {
    format!("{{{}}}", join(xs.iter().map(|x| format!("({x})")), ", "))
}

pub fn report(ctx: &Ctx, pmin: i64, pmax: i64, qmax: i64) -> Result<String, Error> {
    if pmin > pmax {
        return Ok(String::new());
    }
    let rows: Vec<ModelRow> = models(pmin, pmax, qmax)
        .into_par_iter()
        .map(|m| {
            let amb = ctx.cache.ambient(&m)?;
            let recs = subcat_records(ctx, &amb, false)?;
            let joins = JOIN_ROWS.iter().map(|&r| JOIN_COLS.iter().map(|&c| join_name(&amb, r, c)).collect()).collect();
            Ok(ModelRow { model: m, rank: amb.len(), recs, joins })
        })
        .collect::<Result<_, Error>>()?;

    let mut s = String::from("# Subcategories of Virasoro minimal-model categories\n\n");
    s += &format!("Models C_{{p,q}} with {pmin} ≤ p ≤ {pmax}, p < q ≤ {qmax}, gcd(p,q) = 1.\n\n");

    s += "## Census\n\n";
    let census: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let names: Vec<String> = r.recs.iter().map(|x| x.name.to_string()).collect();
            let modular: Vec<String> = r.recs.iter().filter(|x| x.modular).map(|x| x.name.to_string()).collect();
            vec![
                r.model.to_string(),
                r.rank.to_string(),
                r.recs.len().to_string(),
                dash(join(&names, ", ")),
                dash(join(&modular, ", ")),
            ]
        })
        .collect();
    s += &md_table(&["(p,q)", "rank", "nontrivial", "names", "modular"], &census);

    let small: Vec<&ModelRow> = rows.iter().filter(|r| r.model.p() <= 4).collect();
    if !small.is_empty() {
        s += "\n## Small p\n\n";
        for r in small {
            let subs = join(r.recs.iter().map(|x| format!("{} = {}", x.name, braces(&x.members))), "; ");
            s += &format!("- {}: {} nontrivial{}\n", r.model, r.recs.len(), if subs.is_empty() { subs } else { format!(": {subs}") });
        }
    }

    let cases = [("p and q odd", 1, 1), ("p odd, q even", 1, 0), ("p even, q odd", 0, 1)];
    let mut first = true;
    for (title, pp, qp) in cases {
        let group: Vec<&ModelRow> =
            rows.iter().filter(|r| r.model.p() >= 5 && r.model.p() % 2 == pp && r.model.q() % 2 == qp).collect();
        if group.is_empty() {
            continue;
        }
        if first {
            s += "\n## Generated subcategories (D, D')\n";
            first = false;
        }
        s += &format!("\n### {title}: {}\n\n", join(group.iter().map(|r| r.model), ", "));
        let table: Vec<Vec<String>> = JOIN_ROWS
            .iter()
            .enumerate()
            .map(|(i, r)| {
                std::iter::once(r.to_string())
                    .chain((0..JOIN_COLS.len()).map(|j| {
                        let seen: BTreeSet<String> = group
                            .iter()
                            .map(|g| g.joins[i][j].map_or("—".into(), |n| n.to_string()))
                            .collect();
                        join(seen, " / ")
                    }))
                    .collect()
            })
            .collect();
        s += &md_table(&["", "C1", "C2", "C5"], &table);
    }

    let exts: Vec<i64> = (pmin.max(5)..=pmax).filter(|p| p % 4 == 1 || p % 4 == 2).collect();
    if !exts.is_empty() {
        s += "\n## Simple-current extensions C~p of C_{p,p+1}\n\n";
        let built: Vec<Extension> = exts.into_par_iter().map(Extension::build).collect::<Result<_, _>>()?;
        let erows: Vec<Vec<String>> = built
            .iter()
            .map(|e| {
                let subs = e.subcats().unwrap_or_default();
                let verdict = |n: ExtName| {
                    subs.iter().find(|x| x.name == n).map_or("—".into(), |x| e.modularity_via_twist(&x.members).verdict.to_string())
                };
                vec![
                    e.p().to_string(),
                    e.objects().len().to_string(),
                    e.solution_count().to_string(),
                    subs.iter().filter(|x| x.is_nontrivial()).count().to_string(),
                    f12(e.global_dimension() / fpdim_closed_form(e.model())),
                    verdict(ExtName::T1),
                    verdict(ExtName::T2),
                ]
            })
            .collect();
        s += &md_table(&["p", "simples", "admissible rings", "nontrivial", "FPdim ratio", "C~1", "C~2"], &erows);
    }

    let nmin = (pmin - 1).max(3);
    let nmax = pmax - 1;
    if nmin <= nmax {
        let scan = scan_unitary_chain_with(nmax, |m| ctx.cache.ambient(m))?;
        let scan: Vec<ScanRow> = scan.into_iter().filter(|r| r.n >= nmin).collect();
        s += "\n## Gluing candidates\n\n";
        s += &scan_md(&scan);
    }
    Ok(s)
}

fn dash(s: String) -> String {
    if s.is_empty() {
        "—".into()
    } else {
        s
    }
}

const CANDIDATE_NOTE: &str = "Integral rows are candidate gluings only: integrality of h_X + h_F(X) is necessary, \
not sufficient. For the (C2, C4) chain the glued objects are those of the GKO coset decomposition of the \
unitary series; existence rests on that construction and is not checked here.\n";

pub fn scan_md(rows: &[ScanRow]) -> String {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                format!("{}.C2 × {}.C4", r.left, r.right),
                r.rank.to_string(),
                r.isos.to_string(),
                yes(r.integral),
                modular(r.left_modular),
                yes(r.parity_ok),
                format!("{}: {}", r.companion_isos, join(r.companion_integral.iter().map(|&b| yes(b)), " ")),
            ]
        })
        .collect();
    let mut s = md_table(
        &["n", "pair", "rank", "isos", "integral", "factors", "parity as expected", "(C1, C3) isos: integral"],
        &table,
    );
    s += "\n";
    s += CANDIDATE_NOTE;
    s
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.into()
}

fn modular(b: bool) -> String {
    if b { "modular" } else { "degenerate" }.into()
}

pub fn glue_md(l: &GlueSide, r: &GlueSide, cands: &[GluingCandidate]) -> String {
    let mut s = format!(
        "# {}.{} × {}.{}\n\n{} fusion isomorphism(s)\n",
        l.ambient().model(),
        l.name(),
        r.ambient().model(),
        r.name(),
        cands.len()
    );
    for (i, c) in cands.iter().enumerate() {
        let rows: Vec<Vec<String>> = c
            .bijection
            .iter()
            .zip(&c.weight_sums)
            .map(|((x, y), h)| vec![format!("({x})"), format!("({y})"), h.to_string()])
            .collect();
        s += &format!(
            "\n## Isomorphism {}: {}\n\n{}",
            i + 1,
            if c.integral { "candidate gluing" } else { "rejected (non-integral)" },
            md_table(&["X", "F(X)", "h_X + h_F(X)"], &rows)
        );
    }
    s += "\n";
    s += CANDIDATE_NOTE;
    s
}
