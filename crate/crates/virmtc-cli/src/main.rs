mod cache;
mod render;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use virmtc::exactmath::RANK_BACKENDS;
use virmtc::extension::Extension;
use virmtc::gluing::{gluing_candidates, reverify, scan_unitary_chain_with, GlueSide};
use virmtc::minimal_model::MinimalModel;
use virmtc::modular_data::{round_sig, ModularExport};
use virmtc::subcat::{closure, Ambient, SubcatName, ENUMERATORS};
use virmtc::Error;

use cache::Cache;
use render::{f12, join, md_table, Format};

#[derive(Parser)]
#[command(name = "virmtc", version, about = "Modular data and subcategories of Virasoro minimal models")]
struct Cli {
    /// Output format (default: json, md for `report`)
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Display exact ranks / exact S kernel (default)
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Display float ranks; modularity verdicts stay exact
    #[arg(long, global = true)]
    float: bool,
    /// Exact rank backend used for verdicts
    #[arg(long, global = true, default_value = "multimodular")]
    rank_backend: String,
    /// Subcategory enumeration strategy
    #[arg(long, global = true, default_value = "join-closure")]
    enumerator: String,
    /// Ignore the on-disk cache (also: VIRMTC_CACHE=off)
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Central charge, Kac table and dimensions
    Info { p: i64, q: i64 },
    /// Normalized S matrix and twists
    Smatrix { p: i64, q: i64 },
    /// Fusion coefficients
    Fusion { p: i64, q: i64 },
    /// Fusion subcategories with modularity, Müger center and FS exponent
    Subcats {
        p: i64,
        q: i64,
        /// Include the trivial and the full subcategory
        #[arg(long)]
        all: bool,
    },
    /// ℤ/2 simple-current extension of C_{p,p+1}
    Extension {
        p: i64,
        /// Write the resolved fusion ring (with ambiguity log) to this file
        #[arg(long)]
        dump_ring: Option<PathBuf>,
        /// Replay the structural checks and print a pass/fail table
        #[arg(long)]
        verify: bool,
    },
    /// Gluing candidates between two named subcategories
    Glue {
        p1: i64,
        q1: i64,
        name1: String,
        p2: i64,
        q2: i64,
        name2: String,
        /// Also require θ_X·θ_F(X) = 1 exactly
        #[arg(long)]
        strict_theta: bool,
    },
    /// (C2 of C_{n+1,n+2}, C4 of C_{n+2,n+3}) for n = 3..=nmax
    GlueScan {
        #[arg(long)]
        nmax: i64,
    },
    /// Markdown report of tables and examples for a range of p
    Report {
        #[arg(long, default_value_t = 2)]
        pmin: i64,
        #[arg(long, default_value_t = 10)]
        pmax: i64,
        /// Largest q considered for each p
        #[arg(long, default_value_t = 13)]
        qmax: i64,
    },
    /// Self-contained modular-data JSON file
    Export {
        p: i64,
        q: i64,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// Command failure: either a library error or a completed run whose checks failed.
enum Failure {
    Lib(Error),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub struct Ctx {
    format: Format,
    float: bool,
    exact: bool,
    backend: String,
    enumerator: String,
    cache: Cache,
}

impl Ctx {
    fn ambient(&self, p: i64, q: i64) -> Result<Ambient, Error> {
        self.cache.ambient(&MinimalModel::new(p, q)?)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(out)) => {
            let _ = std::io::stdout().write_all(out.as_bytes());
            eprintln!("error: verification failed");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let backend = RANK_BACKENDS.resolve(&cli.rank_backend).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if !backend.is_exact() {
        return Err(Error::InvalidInput(format!(
            "rank backend {:?} is not exact; verdicts need an exact backend (use --float to display float ranks)",
            cli.rank_backend
        ))
        .into());
    }
    ENUMERATORS.resolve(&cli.enumerator).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let ctx = Ctx {
        format: cli.format.unwrap_or(if matches!(cli.cmd, Cmd::Report { .. }) { Format::Md } else { Format::Json }),
        float: cli.float,
        exact: cli.exact,
        backend: cli.rank_backend,
        enumerator: cli.enumerator,
        cache: Cache::from_env(cli.no_cache),
    };
    match cli.cmd {
        Cmd::Info { p, q } => Ok(info(&ctx, p, q)?),
        Cmd::Smatrix { p, q } => Ok(smatrix(&ctx, p, q)?),
        Cmd::Fusion { p, q } => Ok(fusion(&ctx, p, q)?),
        Cmd::Subcats { p, q, all } => Ok(subcats(&ctx, p, q, all)?),
        Cmd::Extension { p, dump_ring, verify } => extension(&ctx, p, dump_ring, verify),
        Cmd::Glue { p1, q1, name1, p2, q2, name2, strict_theta } => {
            Ok(glue(&ctx, (p1, q1, &name1), (p2, q2, &name2), strict_theta)?)
        }
        Cmd::GlueScan { nmax } => Ok(glue_scan(&ctx, nmax)?),
        Cmd::Report { pmin, pmax, qmax } => {
            if ctx.format != Format::Md {
                return Err(Error::InvalidInput("report is only available as markdown".into()).into());
            }
            Ok(report::report(&ctx, pmin, pmax, qmax)?)
        }
        Cmd::Export { p, q, out } => Ok(export(&ctx, p, q, out)?),
    }
}

fn info(ctx: &Ctx, p: i64, q: i64) -> Result<String, Error> {
    let amb = ctx.ambient(p, q)?;
    let m = *amb.model();
    let md = amb.modular_data();
    let labels = amb.ring().labels();
    let fpdim: f64 = (0..amb.len()).map(|a| amb.fpdim(a).powi(2)).sum();
    let closed = virmtc::fusion::fpdim_closed_form(&m);
    let rows: Vec<Vec<String>> = labels
        .iter()
        .enumerate()
        .map(|(a, x)| vec![x.to_string(), md.weight(a).to_string(), md.theta(a).to_string(), f12(amb.fpdim(a))])
        .collect();
    match ctx.format {
        Format::Json => render::json(&json!({
            "p": m.p(),
            "q": m.q(),
            "c": m.central_charge(),
            "rank": amb.len(),
            "simple_current": m.simple_current(),
            "simples": labels.iter().enumerate().map(|(a, x)| json!({
                "label": x,
                "h": md.weight(a),
                "theta": md.theta(a),
                "qdim": round_sig(amb.fpdim(a), 12),
            })).collect::<Vec<_>>(),
            "fpdim": round_sig(fpdim, 12),
            "fpdim_closed_form": round_sig(closed, 12),
        })),
        Format::Csv => render::csv(&["label", "h", "theta", "qdim"], &rows),
        Format::Md => Ok(format!(
            "# C_{{{},{}}}\n\nc = {}, rank {}, FPdim = {}\n\n{}",
            m.p(),
            m.q(),
            m.central_charge(),
            amb.len(),
            f12(fpdim),
            md_table(&["label", "h", "h mod 1", "qdim"], &rows)
        )),
    }
}

fn display_rank(ctx: &Ctx, amb: &Ambient, members: &[usize]) -> (usize, &'static str) {
    if ctx.float {
        (amb.restricted_rank(members, "float"), "float")
    } else {
        let name = RANK_BACKENDS.resolve(&ctx.backend).expect("validated").name();
        (amb.restricted_rank(members, name), name)
    }
}

fn smatrix(ctx: &Ctx, p: i64, q: i64) -> Result<String, Error> {
    let amb = ctx.ambient(p, q)?;
    let md = amb.modular_data();
    let labels: Vec<String> = amb.ring().labels().iter().map(ToString::to_string).collect();
    let all: Vec<usize> = (0..amb.len()).collect();
    let (rank, method) = display_rank(ctx, &amb, &all);
    let s: Vec<Vec<f64>> = md.s_float().iter().map(|r| r.iter().map(|&v| round_sig(v, 12)).collect()).collect();
    match ctx.format {
        Format::Json => {
            let mut v = json!({
                "p": amb.model().p(),
                "q": amb.model().q(),
                "labels": labels,
                "S": s,
                "theta": (0..amb.len()).map(|a| md.theta(a)).collect::<Vec<_>>(),
                "rank": rank,
                "rank_method": method,
            });
            if ctx.exact {
                let k = md.s_kernel();
                v["prefactor"] = json!("sqrt(8/(p*q))");
                v["S_kernel"] = json!((0..k.rows()).map(|i| k.row(i).to_vec()).collect::<Vec<_>>());
            }
            render::json(&v)
        }
        Format::Csv => {
            let mut header = vec![""];
            header.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = labels
                .iter()
                .zip(md.s_float())
                .map(|(l, r)| std::iter::once(l.clone()).chain(r.iter().map(|&v| f12(v))).collect())
                .collect();
            render::csv(&header, &rows)
        }
        Format::Md => {
            let mut header = vec!["S"];
            header.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = labels
                .iter()
                .zip(md.s_float())
                .map(|(l, r)| std::iter::once(l.clone()).chain(r.iter().map(|&v| f12(v))).collect())
                .collect();
            Ok(format!("{}\nrank {rank} ({method})\n", md_table(&header, &rows)))
        }
    }
}

fn fusion(ctx: &Ctx, p: i64, q: i64) -> Result<String, Error> {
    let amb = ctx.ambient(p, q)?;
    let ring = amb.ring().ring();
    let name = |i: usize| ring.simples()[i].clone();
    match ctx.format {
        Format::Json => render::json(ring),
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                ring.sparse_coeffs().map(|(a, b, c, v)| vec![name(a), name(b), name(c), v.to_string()]).collect();
            render::csv(&["a", "b", "c", "N"], &rows)
        }
        Format::Md => {
            let mut rows = Vec::new();
            for a in 0..ring.len() {
                for b in a..ring.len() {
                    let prod = join(ring.product(a, b).iter().map(|&(c, k)| multiple(k, &name(c))), " ⊕ ");
                    rows.push(vec![name(a), name(b), prod]);
                }
            }
            Ok(md_table(&["a", "b", "a ⊗ b"], &rows))
        }
    }
}

fn multiple(k: u32, s: &str) -> String {
    if k == 1 {
        format!("({s})")
    } else {
        format!("{k}({s})")
    }
}

#[derive(Serialize)]
pub struct SubcatRecord {
    pub name: SubcatName,
    pub members: Vec<String>,
    pub modular: bool,
    pub center: Vec<String>,
    pub fsexp: u64,
    pub rank: usize,
    pub rank_method: &'static str,
    pub fpdim: f64,
}

pub fn subcat_records(ctx: &Ctx, amb: &Ambient, all: bool) -> Result<Vec<SubcatRecord>, Error> {
    let mut subs: Vec<_> =
        amb.enumerate_with(&ctx.enumerator)?.into_iter().filter(|s| all || s.is_nontrivial()).collect();
    subs.sort_by(|a, b| (a.name(), a.len(), a.members()).cmp(&(b.name(), b.len(), b.members())));
    let labels = amb.ring().labels();
    let names = |xs: &[usize]| xs.iter().map(|&i| labels[i].to_string()).collect::<Vec<_>>();
    amb.analyze(subs, &ctx.backend)?
        .into_iter()
        .map(|a| {
            let (rank, rank_method) = if ctx.float {
                (amb.restricted_rank(a.sub.members(), "float"), "float")
            } else {
                (a.report.exact_rank, a.report.rank_backend)
            };
            Ok(SubcatRecord {
                name: a.sub.name(),
                members: names(a.sub.members()),
                modular: a.modular,
                center: names(&a.report.center),
                fsexp: a.fsexp,
                rank,
                rank_method,
                fpdim: round_sig(a.fpdim, 12),
            })
        })
        .collect()
}

/// Name of closure(D ∪ D') for the horizontal/vertical join tables; None if a factor is undefined.
pub fn join_name(amb: &Ambient, a: SubcatName, b: SubcatName) -> Option<SubcatName> {
    let (x, y) = (amb.named(a)?, amb.named(b)?);
    let seed: Vec<usize> = x.iter().chain(&y).copied().collect();
    Some(amb.classify(&closure(amb.ring().ring(), &seed)))
}

pub const JOIN_ROWS: [SubcatName; 3] = [SubcatName::C3, SubcatName::C4, SubcatName::C5];
pub const JOIN_COLS: [SubcatName; 3] = [SubcatName::C1, SubcatName::C2, SubcatName::C5];

fn subcats(ctx: &Ctx, p: i64, q: i64, all: bool) -> Result<String, Error> {
    let amb = ctx.ambient(p, q)?;
    let recs = subcat_records(ctx, &amb, all)?;
    match ctx.format {
        Format::Json => render::json(&recs),
        Format::Csv => {
            let rows: Vec<Vec<String>> = recs
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        join(&r.members, " "),
                        r.modular.to_string(),
                        join(&r.center, " "),
                        r.fsexp.to_string(),
                        r.rank.to_string(),
                        f12(r.fpdim),
                    ]
                })
                .collect();
            render::csv(&["name", "members", "modular", "center", "fsexp", "rank", "fpdim"], &rows)
        }
        Format::Md => {
            let rows: Vec<Vec<String>> = recs
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        join(r.members.iter().map(|x| format!("({x})")), " "),
                        if r.modular { "modular" } else { "premodular" }.into(),
                        join(r.center.iter().map(|x| format!("({x})")), " "),
                        r.fsexp.to_string(),
                        f12(r.fpdim),
                    ]
                })
                .collect();
            let mut s = format!(
                "# Subcategories of C_{{{},{}}}\n\n{}",
                p.min(q),
                p.max(q),
                md_table(&["name", "simples", "type", "Müger center", "FSexp", "FPdim"], &rows)
            );
            let table: Vec<Vec<String>> = JOIN_ROWS
                .iter()
                .map(|&r| {
                    std::iter::once(r.to_string())
                        .chain(JOIN_COLS.iter().map(|&c| join_name(&amb, r, c).map_or("—".into(), |n| n.to_string())))
                        .collect()
                })
                .collect();
            s += "\n## Generated subcategories\n\n";
            s += &md_table(&["", "C1", "C2", "C5"], &table);
            Ok(s)
        }
    }
}

fn extension(ctx: &Ctx, p: i64, dump: Option<PathBuf>, verify: bool) -> Result<String, Failure> {
    let e = Extension::build(p)?;
    if let Some(path) = dump {
        std::fs::write(&path, e.to_json()? + "\n")
            .map_err(|err| Error::InvalidInput(format!("cannot write {}: {err}", path.display())))?;
    }
    let names = |xs: &[usize]| xs.iter().map(|&i| e.objects()[i].name()).collect::<Vec<_>>();
    let mut subs = if e.is_resolved() { e.subcats()? } else { Vec::new() };
    subs.sort_by(|a, b| (a.name, &a.members).cmp(&(b.name, &b.members)));
    let ambient = virmtc::fusion::fpdim_closed_form(e.model());
    let checks = if verify { e.verify() } else { Vec::new() };
    let failed = checks.iter().any(|(_, ok)| !ok);
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let out = match ctx.format {
        Format::Json => {
            let mut v = json!({
                "p": p,
                "q": p + 1,
                "resolved": e.is_resolved(),
                "solutions": e.solution_count(),
                "search_nodes": e.search_nodes(),
                "global_dimension": round_sig(e.global_dimension(), 12),
                "fpdim_ratio": round_sig(e.global_dimension() / ambient, 12),
                "objects": e.objects().iter().map(|o| json!({
                    "name": o.name(),
                    "h_mod1": o.h_mod1,
                    "qdim": round_sig(o.qdim, 12),
                })).collect::<Vec<_>>(),
                "subcats": subs.iter().filter(|s| s.is_nontrivial()).map(|s| json!({
                    "name": s.name,
                    "members": names(&s.members),
                    "twist": e.modularity_via_twist(&s.members).verdict,
                })).collect::<Vec<_>>(),
                "notes": e.notes(),
            });
            if verify {
                v["verify"] = json!(checks.iter().map(|(c, ok)| json!({"check": c, "pass": ok})).collect::<Vec<_>>());
            }
            render::json(&v)?
        }
        Format::Csv if verify => {
            let rows: Vec<Vec<String>> = checks.iter().map(|(c, ok)| vec![c.clone(), verdict(*ok).into()]).collect();
            render::csv(&["check", "result"], &rows)?
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                e.objects().iter().map(|o| vec![o.name(), o.h_mod1.to_string(), f12(o.qdim)]).collect();
            render::csv(&["name", "h_mod1", "qdim"], &rows)?
        }
        Format::Md => {
            let rows: Vec<Vec<String>> =
                e.objects().iter().map(|o| vec![o.name(), o.h_mod1.to_string(), f12(o.qdim)]).collect();
            let mut s = format!(
                "# C~{p}\n\n{} simples, {} ({} admissible ring(s)), FPdim ratio {}\n\n{}",
                e.objects().len(),
                if e.is_resolved() { "resolved" } else { "unresolved" },
                e.solution_count(),
                f12(e.global_dimension() / ambient),
                md_table(&["simple", "h mod 1", "qdim"], &rows)
            );
            let srows: Vec<Vec<String>> = subs
                .iter()
                .filter(|s| s.is_nontrivial())
                .map(|s| {
                    vec![
                        s.name.to_string(),
                        join(names(&s.members), " "),
                        e.modularity_via_twist(&s.members).verdict.to_string(),
                    ]
                })
                .collect();
            s += "\n## Subcategories\n\n";
            s += &md_table(&["name", "simples", "twist route"], &srows);
            if verify {
                let vrows: Vec<Vec<String>> =
                    checks.iter().map(|(c, ok)| vec![c.clone(), verdict(*ok).into()]).collect();
                s += "\n## Verification\n\n";
                s += &md_table(&["check", "result"], &vrows);
            }
            s
        }
    };
    if failed {
        return Err(Failure::Checks(out));
    }
    Ok(out)
}

fn parse_name(s: &str) -> Result<SubcatName, Error> {
    s.parse()
}

fn glue(ctx: &Ctx, l: (i64, i64, &str), r: (i64, i64, &str), strict: bool) -> Result<String, Error> {
    let (ln, rn) = (parse_name(l.2)?, parse_name(r.2)?);
    let (la, ra) = (ctx.ambient(l.0, l.1)?, ctx.ambient(r.0, r.1)?);
    let (ls, rs) = (GlueSide::new(&la, ln)?, GlueSide::new(&ra, rn)?);
    let cands = gluing_candidates(&ls, &rs, strict);
    if let Some(bad) = cands.iter().find(|c| !reverify(c, &ls, &rs)) {
        return Err(Error::Invariant(format!("isomorphism failed re-verification: {:?}", bad.bijection)));
    }
    match ctx.format {
        Format::Json => render::json(&cands),
        Format::Csv => {
            let rows: Vec<Vec<String>> = cands
                .iter()
                .enumerate()
                .flat_map(|(i, c)| {
                    c.bijection.iter().zip(&c.weight_sums).map(move |((x, y), h)| {
                        vec![i.to_string(), x.to_string(), y.to_string(), h.to_string(), c.integral.to_string()]
                    })
                })
                .collect();
            render::csv(&["candidate", "left", "right", "weight_sum", "integral"], &rows)
        }
        Format::Md => Ok(report::glue_md(&ls, &rs, &cands)),
    }
}

fn glue_scan(ctx: &Ctx, nmax: i64) -> Result<String, Error> {
    let rows = scan_unitary_chain_with(nmax, |m| ctx.cache.ambient(m))?;
    match ctx.format {
        Format::Json => render::json(&rows),
        Format::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.left.clone(),
                        r.right.clone(),
                        r.rank.to_string(),
                        r.isos.to_string(),
                        r.integral.to_string(),
                        r.left_modular.to_string(),
                        r.right_modular.to_string(),
                        r.parity_ok.to_string(),
                        r.companion_isos.to_string(),
                        join(&r.companion_integral, " "),
                    ]
                })
                .collect();
            render::csv(
                &[
                    "n",
                    "left",
                    "right",
                    "rank",
                    "isos",
                    "integral",
                    "left_modular",
                    "right_modular",
                    "parity_ok",
                    "companion_isos",
                    "companion_integral",
                ],
                &rows,
            )
        }
        Format::Md => Ok(report::scan_md(&rows)),
    }
}

fn export(ctx: &Ctx, p: i64, q: i64, out: Option<PathBuf>) -> Result<String, Error> {
    if ctx.format != Format::Json {
        return Err(Error::InvalidInput("export writes JSON only".into()));
    }
    let amb = ctx.ambient(p, q)?;
    let text = ModularExport::from_parts(amb.modular_data(), amb.ring().ring()).to_json() + "\n";
    match out {
        Some(path) => {
            std::fs::write(&path, &text)
                .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}
