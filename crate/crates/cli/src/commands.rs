use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use symcomp_core::exactlin::io::ComplexJson;
use symcomp_core::exactlin::{coinvariants, Betti};
use symcomp_core::monodromy::{monodromy_report, Agreement, LoopJson};
use symcomp_core::partitions::{enumerate_partitions, Partition};
use symcomp_core::ranges::{integral_caveats, ManifoldClass, RangeCase};
use symcomp_core::spectral::{
    compare_pages, compute_pages_checked, flag_set_check, two_step_les, CompareJson, FilteredJson, FlagData,
    SemisimplicialJson, SpectralPages, Verdict, DEFAULT_SIMPLEX_CAP,
};
use symcomp_core::strata::{
    assemble_e1, euler_consistency, filtration_report, range_certificate, BettiOracle, OracleEntry, RangeCertificate,
};
use symcomp_core::transfer::{dold_conclusions, dold_verify, ConfigurationModel, DoldJson, DoldSystem, SiteKind};

use crate::output::{Artifact, Emitter, Format};
use crate::{suite, CaseArg, Caps, Command, FlagSource, SitesArg, StrataArgs, VerifyCommand};

/// Itemized verification failures; empty when every check passed.
pub type Failures = Vec<String>;

pub fn run(command: &Command, caps: &Caps, verbose: u8, out: &Emitter) -> Result<Failures> {
    match command {
        Command::Collapses { lambda } => collapses(lambda, caps, out),
        Command::Ranges { dim, orientable, open, a, punctures, k, jmax } => {
            let mc = ManifoldClass {
                dim: *dim,
                orientable: *orientable,
                open_interior: *open,
                connectivity: *a,
                punctures: *punctures,
            };
            ranges(&mc, *k, *jmax, out)
        }
        Command::Homology { file } => homology(file, caps, out),
        Command::Ss { file } => ss(file, out),
        Command::Compare { file } => compare(file, out),
        Command::Totalize { file, augmented } => totalize(file, *augmented, out),
        Command::Flag { relation, vertices, truncation } => flag(relation, *vertices, *truncation, out),
        Command::E1 { strata } => e1(strata, caps, out),
        Command::Certificate { dim, k, j, case, a, slack } => {
            let case = match case {
                CaseArg::High => RangeCase::HighDimension,
                CaseArg::Orientable => RangeCase::OrientableSurface,
                CaseArg::NonOrientable => RangeCase::NonOrientableSurface,
                CaseArg::Connectivity => RangeCase::Connectivity { a: *a },
            };
            let cert = range_certificate(*dim, *k, *j, case, *slack)?;
            let failures = certificate_failures(&cert);
            out.emit(vec![out.report("certificate", &cert)?])?;
            Ok(failures)
        }
        Command::Euler { strata, reference } => euler(strata, reference.as_deref(), caps, out),
        Command::Oracle { lambda, class, oracle } => oracle_cmd(lambda.as_deref(), class, oracle, caps, out),
        Command::Transfer { sites, kind, top } => transfer(*sites, *kind, *top, caps, out),
        Command::Verify { what: VerifyCommand::Dold { file } } => verify_dold(file, out),
        Command::Monodromy { file } => monodromy(file, out),
        Command::Suite { seed } => suite::run(*seed, verbose, out),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_partition(s: &str, caps: &Caps) -> Result<Partition> {
    let lambda: Partition = s.parse().with_context(|| format!("partition {s:?}"))?;
    ensure!(
        lambda.weight() <= caps.max_weight,
        "partition weight {} exceeds cap {} (SYMCOMP_MAX_WEIGHT)",
        lambda.weight(),
        caps.max_weight
    );
    Ok(lambda)
}

fn parse_class(s: &str) -> Result<ManifoldClass> {
    let mc = if s == "plane" {
        ManifoldClass::plane()
    } else if let Some(d) = s.strip_prefix("euclidean:") {
        ManifoldClass::euclidean(d.parse().with_context(|| format!("dimension in {s:?}"))?)
    } else {
        read_json(Path::new(s))?
    };
    mc.validate()?;
    Ok(mc)
}

fn parse_oracle(s: &str, caps: &Caps) -> Result<BettiOracle> {
    Ok(match s {
        "builtin" => BettiOracle::builtin(caps.plane_cap),
        "none" => BettiOracle::empty(),
        path => {
            let entries: Vec<OracleEntry> = read_json(Path::new(path))?;
            BettiOracle::builtin(caps.plane_cap).with_entries(entries)
        }
    })
}

fn betti_csv(header: &str, betti: &Betti) -> String {
    let mut s = format!("{header}\n");
    for (n, b) in betti {
        let _ = writeln!(s, "{n},{b}");
    }
    s
}

fn collapses(lambda: &str, caps: &Caps, out: &Emitter) -> Result<Failures> {
    let lambda = parse_partition(lambda, caps)?;
    let report = filtration_report(&lambda)?;
    let mut failures = Vec::new();
    if !report.finest_first {
        failures.push(format!("{lambda}: layer 0 is not the finest partition"));
    }
    if !report.bounded {
        failures.push(format!("{lambda}: a layer index reaches k"));
    }
    let csv = || {
        let mut s = String::from("p,members\n");
        for layer in &report.layers {
            let members: Vec<String> = layer.members.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "{},{}", layer.p, members.join(" "));
        }
        s
    };
    out.emit(vec![out.table("collapses", &report, Format::Csv, csv)?])?;
    Ok(failures)
}

#[derive(Serialize)]
struct RangeRow {
    j: u64,
    f: String,
}

#[derive(Serialize)]
struct RangeReport {
    class: ManifoldClass,
    k: u64,
    cases: Vec<RangeCase>,
    rows: Vec<RangeRow>,
    caveats: Vec<String>,
}

fn ranges(mc: &ManifoldClass, k: u64, jmax: u64, out: &Emitter) -> Result<Failures> {
    let mut rows = Vec::new();
    for j in 0..=jmax {
        rows.push(RangeRow { j, f: symcomp_core::ranges::stability_range(mc, k, j)?.to_string() });
    }
    let report = RangeReport { class: *mc, k, cases: RangeCase::applicable(mc), rows, caveats: integral_caveats(mc) };
    let csv = || {
        let mut s = String::from("j,f\n");
        for r in &report.rows {
            let _ = writeln!(s, "{},{}", r.j, r.f);
        }
        s
    };
    let table = out.table("ranges", &report, Format::Csv, csv)?;
    let mut artifacts = vec![];
    let is_csv = table.name.ends_with(".csv");
    artifacts.push(table);
    if is_csv {
        let mut notes = String::new();
        for c in &report.caveats {
            let _ = writeln!(notes, "{c}");
        }
        artifacts.push(Artifact { name: "caveats.txt".into(), body: notes });
    }
    out.emit(artifacts)?;
    Ok(Vec::new())
}

#[derive(Serialize)]
struct HomologyReport {
    betti: Betti,
    euler_characteristic: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    coinvariant_betti: Option<Betti>,
}

fn homology(file: &Path, caps: &Caps, out: &Emitter) -> Result<Failures> {
    let parsed: ComplexJson = read_json(file)?;
    let c = parsed.to_complex()?;
    let coinvariant_betti = match parsed.to_action(&c)? {
        Some(g) => Some(coinvariants(&c, &g, caps.order_cap)?.complex.homology()),
        None => None,
    };
    let report = HomologyReport { betti: c.homology(), euler_characteristic: c.euler_characteristic(), coinvariant_betti };
    let csv = || match &report.coinvariant_betti {
        None => betti_csv("degree,betti", &report.betti),
        Some(co) => {
            let mut s = String::from("degree,betti,coinvariant_betti\n");
            for (n, b) in &report.betti {
                let _ = writeln!(s, "{n},{b},{}", co.get(n).copied().unwrap_or(0));
            }
            s
        }
    };
    out.emit(vec![out.table("homology", &report, Format::Csv, csv)?])?;
    Ok(Vec::new())
}

fn page_failures(label: &str, pages: &SpectralPages) -> Failures {
    let c = &pages.checks;
    [
        (c.dd_zero, "d_r composed with d_r is nonzero"),
        (c.next_is_homology, "a page is not the homology of the previous one"),
        (c.converges, "limit page does not sum to the ambient Betti numbers"),
        (c.couple_agrees, "pages disagree with the derived exact couple"),
    ]
    .into_iter()
    .filter(|(ok, _)| !ok)
    .map(|(_, msg)| format!("{label}: {msg}"))
    .collect()
}

fn ss(file: &Path, out: &Emitter) -> Result<Failures> {
    let parsed: FilteredJson = read_json(file)?;
    let fc = parsed.to_filtered()?;
    let pages = compute_pages_checked(&fc)?;
    let mut failures = page_failures("spectral sequence", &pages);
    let mut artifacts = vec![out.table("pages", &pages, Format::Csv, || pages.to_csv())?];
    if fc.len() == 2 {
        let les = two_step_les(&fc)?;
        if !les.exact {
            failures.push("long exact sequence of the pair is not exact".into());
        }
        artifacts.push(Artifact::json("les", &les)?);
    }
    out.emit(artifacts)?;
    Ok(failures)
}

fn compare(file: &Path, out: &Emitter) -> Result<Failures> {
    let parsed: CompareJson = read_json(file)?;
    let (f, src, dst) = parsed.to_parts()?;
    let report = compare_pages(&f, &src, &dst, parsed.threshold)?;
    let mut failures = Vec::new();
    if report.verdict == Verdict::Contradicted {
        failures.push("first-page window holds but the limit page violates it".into());
    }
    if report.hypothesis && !report.abutment {
        failures.push("first-page window holds but the map on homology violates it".into());
    }
    let csv = || {
        let mut s = String::from("r,p,q,source_dim,target_dim,rank\n");
        for page in &report.pages {
            for c in &page.cells {
                let _ = writeln!(s, "{},{},{},{},{},{}", page.r, c.p, c.q, c.source_dim, c.target_dim, c.rank);
            }
        }
        s
    };
    out.emit(vec![out.table("compare", &report, Format::Json, csv)?])?;
    Ok(failures)
}

#[derive(Serialize)]
struct TotalizeReport {
    augmented: bool,
    dims: Vec<usize>,
    lo: i64,
    betti: Betti,
}

fn totalize(file: &Path, augmented: bool, out: &Emitter) -> Result<Failures> {
    let parsed: SemisimplicialJson = read_json(file)?;
    let ss = parsed.to_semisimplicial()?;
    if augmented && ss.augmentation().is_none() {
        bail!("--augmented given but the input has no augmentation");
    }
    let tot = ss.totalize(augmented)?;
    let pages = ss.realization_ss(augmented)?;
    let failures = page_failures("realization spectral sequence", &pages);
    let report =
        TotalizeReport { augmented, dims: tot.complex.dims().to_vec(), lo: tot.complex.lo(), betti: tot.complex.homology() };
    let artifacts = vec![
        out.table("totalization", &report, Format::Json, || betti_csv("degree,betti", &report.betti))?,
        out.table("pages", &pages, Format::Csv, || pages.to_csv())?,
    ];
    out.emit(artifacts)?;
    Ok(failures)
}

#[derive(serde::Deserialize)]
struct FlagFile {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (a, b) = t.trim().split_once('-').with_context(|| format!("edge {t:?} is not of the form a-b"))?;
            Ok((a.trim().parse()?, b.trim().parse()?))
        })
        .collect()
}

fn flag(src: &FlagSource, vertices: Option<usize>, truncation: usize, out: &Emitter) -> Result<Failures> {
    let data = if let Some(n) = src.complete {
        FlagData::complete(n)
    } else if let Some(n) = src.star {
        FlagData::star(n)
    } else if let Some(path) = &src.file {
        let f: FlagFile = read_json(path)?;
        FlagData::from_edges(f.vertices, &f.edges)?
    } else {
        let edges = parse_edges(src.edges.as_deref().unwrap_or_default())?;
        FlagData::from_edges(vertices.context("--edges needs --vertices")?, &edges)?
    };
    let report = flag_set_check(&data, truncation, DEFAULT_SIMPLEX_CAP)?;
    let mut failures = Vec::new();
    if report.hub_inclusion_null == Some(false) {
        failures.push(format!("vertex {} is related to all others but the inclusion is not null", report.hubs[0]));
    }
    out.emit(vec![out.report("flag", &report)?])?;
    Ok(failures)
}

/// The window for `W_λ`: `j` ones split off, `k` the remaining weight, and
/// the case giving the largest range.
fn certificate_for(lambda: &Partition, mc: &ManifoldClass) -> Result<RangeCertificate> {
    let j = lambda.count_ones() as u32;
    let k = lambda.weight() as u32 - j;
    let case = RangeCase::applicable(mc)
        .into_iter()
        .max_by_key(|c| c.value(mc.dim, k as u64, j as u64))
        .context("no applicable range case")?;
    Ok(range_certificate(mc.dim, k, j, case, 0)?)
}

fn certificate_failures(cert: &RangeCertificate) -> Failures {
    match &cert.first_failure {
        Some(c) if !cert.passed => vec![format!("certificate cell p={} q={}: {}", c.p, c.q, c.inequality)],
        _ if !cert.passed => vec!["certificate failed".into()],
        _ => Vec::new(),
    }
}

fn e1(args: &StrataArgs, caps: &Caps, out: &Emitter) -> Result<Failures> {
    let lambda = parse_partition(&args.lambda, caps)?;
    let mc = parse_class(&args.class)?;
    let oracle = parse_oracle(&args.oracle, caps)?;
    let table = assemble_e1(&lambda, &mc, &oracle)?;
    let cert = certificate_for(&lambda, &mc)?;
    let euler = euler_consistency(&lambda, &mc, &oracle, None)?;
    let mut failures = certificate_failures(&cert);
    if euler.consistent == Some(false) {
        failures.push(format!("{lambda}: strata Euler sum {:?} vs first page {:?}", euler.strata_sum, euler.e1_sum));
    }
    out.emit(vec![
        out.table("e1", &table, Format::Csv, || table.to_csv())?,
        Artifact::json("certificate", &cert)?,
        Artifact::json("euler", &euler)?,
    ])?;
    Ok(failures)
}

fn euler(args: &StrataArgs, reference: Option<&[usize]>, caps: &Caps, out: &Emitter) -> Result<Failures> {
    let lambda = parse_partition(&args.lambda, caps)?;
    let mc = parse_class(&args.class)?;
    let oracle = parse_oracle(&args.oracle, caps)?;
    let report = euler_consistency(&lambda, &mc, &oracle, reference)?;
    let mut failures = Vec::new();
    if report.consistent == Some(false) {
        failures.push(format!(
            "{lambda}: strata {:?}, first page {:?}, reference {:?}",
            report.strata_sum, report.e1_sum, report.reference
        ));
    }
    out.emit(vec![out.report("euler", &report)?])?;
    Ok(failures)
}

fn oracle_cmd(lambda: Option<&str>, class: &str, oracle: &str, caps: &Caps, out: &Emitter) -> Result<Failures> {
    let mc = parse_class(class)?;
    let oracle = parse_oracle(oracle, caps)?;
    let mut entries = Vec::new();
    match lambda {
        Some(s) => {
            let lambda = parse_partition(s, caps)?;
            let e = oracle.lookup(&lambda, &mc)?.with_context(|| format!("no oracle data for {lambda}"))?;
            entries.push(e);
        }
        None => {
            entries.extend(oracle.entries().filter(|e| e.class == mc).cloned());
            for k in 1..=caps.plane_cap.min(caps.max_weight) {
                for lambda in enumerate_partitions(k)? {
                    if let Some(e) = oracle.lookup(&lambda, &mc)? {
                        if !entries.contains(&e) {
                            entries.push(e);
                        }
                    }
                }
            }
        }
    }
    out.emit(vec![out.report("oracle", &entries)?])?;
    Ok(Vec::new())
}

#[derive(Serialize)]
struct TransferReport {
    sites: Vec<SiteKind>,
    dims: Vec<usize>,
    relations: symcomp_core::transfer::DoldReport,
    conclusions: Option<symcomp_core::transfer::DoldConclusions>,
}

fn transfer(sites: usize, kind: SitesArg, top: usize, caps: &Caps, out: &Emitter) -> Result<Failures> {
    ensure!(sites >= 1, "need at least one site");
    ensure!(sites <= caps.max_sites, "site count {sites} exceeds cap {} (SYMCOMP_MAX_SITES)", caps.max_sites);
    let mut model = match kind {
        SitesArg::Component => ConfigurationModel::components(sites, 0),
        SitesArg::Point => ConfigurationModel::distinct(sites, 0),
        SitesArg::Mixed => ConfigurationModel::mixed(sites - 1, 0),
    };
    model.cap = caps.coset_cap;
    let sys = DoldSystem::from_model(&model, top)?;
    let report = dold_verify(&sys);
    let mut failures = dold_failures(&report);
    let conclusions = if report.passed { Some(dold_conclusions(&sys, &report)?) } else { None };
    if let Some(c) = &conclusions {
        if !c.passed {
            failures.push("rank conclusions do not hold".into());
        }
    }
    let transfer =
        TransferReport { sites: model.sites.clone(), dims: sys.dims().to_vec(), relations: report, conclusions };
    out.emit(vec![out.report("transfer", &transfer)?, out.report("system", &DoldJson::from_system(&sys))?])?;
    Ok(failures)
}

fn dold_failures(report: &symcomp_core::transfer::DoldReport) -> Failures {
    report.failures().map(|c| format!("{} at {:?}", c.relation, c.indices)).collect()
}

fn verify_dold(file: &Path, out: &Emitter) -> Result<Failures> {
    let parsed: DoldJson = read_json(file)?;
    let sys = parsed.to_system()?;
    let report = dold_verify(&sys);
    let mut failures = dold_failures(&report);
    let conclusions = if report.passed { Some(dold_conclusions(&sys, &report)?) } else { None };
    if conclusions.as_ref().is_some_and(|c| !c.passed) {
        failures.push("rank conclusions do not hold".into());
    }
    let csv = || {
        let mut s = String::from("relation,indices,passed\n");
        for item in &report.items {
            let idx: Vec<String> = item.indices.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "{},{},{}", item.relation, idx.join(" "), item.passed);
        }
        s
    };
    #[derive(Serialize)]
    struct Verified<'a> {
        relations: &'a symcomp_core::transfer::DoldReport,
        conclusions: &'a Option<symcomp_core::transfer::DoldConclusions>,
    }
    let v = Verified { relations: &report, conclusions: &conclusions };
    out.emit(vec![out.table("dold", &v, Format::Csv, csv)?])?;
    Ok(failures)
}

fn monodromy(file: &Path, out: &Emitter) -> Result<Failures> {
    let parsed: LoopJson = read_json(file)?;
    let ld = parsed.to_datum()?;
    let report = monodromy_report(&ld);
    let mut failures = Vec::new();
    if report.agreement == Agreement::Disagree {
        failures.push("only odd-multiplicity particles move but the two systems disagree".into());
    }
    out.emit(vec![out.report("monodromy", &report)?])?;
    Ok(failures)
}
