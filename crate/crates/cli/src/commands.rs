use std::collections::BTreeMap;
use std::io::{self, BufWriter, Write};

use anyhow::{anyhow, bail, Context, Result};
use frobscope::classify::{
    self, CycleType, ExpectedClasses, PrimeVerdict, QuadLabel, S3Class, ScanReport,
};
use frobscope::cyclotomic::{cyclo_lucas, cyclotomic_poly, residue_rule_table};
use frobscope::factor::{factor_full_with, Backend, FactorizationResult, RngSeed};
use frobscope::tau::{self, DeltaRow};
use frobscope::{IntPoly, LinRec, Prime};
use num_bigint::BigInt;
use serde::Serialize;

use crate::output::{write_aligned, Format, Table};
use crate::{BackendArg, CheckFailed, Cli, Command, Config};

pub fn run(cli: &Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let cfg = &cli.config;
    match &cli.command {
        Command::Classify {
            poly,
            p,
            range,
            only,
        } => classify_cmd(cfg, poly, *p, range.as_deref(), only.as_deref(), &mut out),
        Command::Scan {
            poly,
            pmax,
            classes,
            group_order,
            tolerance,
            output,
        } => {
            let report = scan_cmd(cfg, poly, *pmax, classes, *group_order)?;
            write_scan(cfg.format, &report, &mut out)?;
            if let Some(path) = output {
                let mut file = BufWriter::new(
                    std::fs::File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?,
                );
                write_scan(cfg.format, &report, &mut file)?;
                file.flush()?;
            }
            out.flush()?;
            match report.max_deviation() {
                Some(dev) if dev > *tolerance => Err(CheckFailed(format!(
                    "largest density deviation {dev:.4} exceeds tolerance {tolerance}"
                ))
                .into()),
                _ => Ok(()),
            }
        }
        Command::Factor { poly, p, backend } => factor_cmd(cfg, poly, *p, *backend, &mut out),
        Command::Cyclo { m } => cyclo_cmd(cfg, *m, &mut out),
        Command::Tau { lmax, pmax } => tau_cmd(cfg, *lmax, *pmax, &mut out),
        Command::Perrin { limit } => perrin_cmd(cfg, *limit, &mut out),
        Command::Lucas {
            poly,
            count,
            initials,
        } => lucas_cmd(cfg, poly, *count, initials.as_deref(), &mut out),
    }?;
    out.flush()?;
    Ok(())
}

fn parse_poly(s: &str) -> Result<IntPoly> {
    s.parse::<IntPoly>()
        .map_err(anyhow::Error::from)
        .with_context(|| format!("reading polynomial {s:?}"))
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like lo..hi, got {s:?}"))?;
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref()
        .map_or_else(|| "-".to_string(), ToString::to_string)
}

fn keep(v: &PrimeVerdict, only: &str) -> Result<bool> {
    Ok(match only {
        "split" => v.split == Some(true),
        "ramified" => v.ramified,
        "inert" => v.quad == Some(QuadLabel::Inert),
        "P1" | "P2" | "P3" => v.s3 == Some(only.parse::<S3Class>()?),
        other => {
            let ct: CycleType = other.parse().with_context(|| {
                "--only expects split, ramified, inert, P1-P3 or a cycle type".to_string()
            })?;
            v.cycle_type.as_ref() == Some(&ct)
        }
    })
}

fn classify_cmd(
    cfg: &Config,
    poly: &str,
    p: Option<u64>,
    range: Option<&str>,
    only: Option<&str>,
    out: &mut impl Write,
) -> Result<()> {
    let c = parse_poly(poly)?;
    let mut verdicts = match (p, range) {
        (Some(p), _) => {
            let p = Prime::new(p)?;
            vec![classify::Classifier::new(c)?.verdict(p)?]
        }
        (None, Some(r)) => {
            let (lo, hi) = parse_range(r)?;
            classify::classify_range(&c, lo, hi, cfg.jobs)?
        }
        (None, None) => bail!("give --p or --range"),
    };
    if let Some(only) = only {
        let mut kept = Vec::with_capacity(verdicts.len());
        for v in verdicts {
            if keep(&v, only)? {
                kept.push(v);
            }
        }
        verdicts = kept;
    }
    Table {
        headers: &["p", "ramified", "cycle_type", "split", "quad", "s3"],
        records: &verdicts,
        cells: |v: &PrimeVerdict| {
            vec![
                v.p.to_string(),
                v.ramified.to_string(),
                opt(&v.cycle_type),
                opt(&v.split),
                opt(&v.quad),
                opt(&v.s3),
            ]
        },
    }
    .write(cfg.format, out)
}

fn scan_cmd(
    cfg: &Config,
    poly: &str,
    pmax: u64,
    classes: &[String],
    group_order: Option<u64>,
) -> Result<ScanReport> {
    let c = parse_poly(poly)?;
    let expected = match group_order {
        Some(order) => {
            let mut sizes = BTreeMap::new();
            for spec in classes {
                let (ct, size) = spec
                    .rsplit_once('=')
                    .ok_or_else(|| anyhow!("--class expects TYPE=SIZE, got {spec:?}"))?;
                sizes.insert(ct.trim().parse::<CycleType>()?, size.trim().parse::<u64>()?);
            }
            Some(ExpectedClasses::new(order, sizes)?)
        }
        None => None,
    };
    Ok(classify::chebotarev_scan(
        &c,
        pmax,
        expected.as_ref(),
        cfg.jobs,
    )?)
}

fn write_scan(format: Format, report: &ScanReport, out: &mut impl Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => report.write_csv(&mut *out)?,
        Format::Text => {
            writeln!(
                out,
                "{}: {} unramified primes up to {}, ramified {:?}",
                report.polynomial, report.primes_scanned, report.pmax, report.ramified
            )?;
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.cycle_type.to_string(),
                        r.count.to_string(),
                        format!("{:.5}", r.density),
                        r.expected.map_or("-".into(), |x| format!("{x:.5}")),
                        r.deviation.map_or("-".into(), |x| format!("{x:.5}")),
                    ]
                })
                .collect();
            write_aligned(
                &["cycle_type", "count", "density", "expected", "deviation"],
                &rows,
                out,
            )?;
        }
    }
    Ok(())
}

fn seed(cfg: &Config) -> Result<RngSeed> {
    match cfg.seed {
        Some(s) => Ok(RngSeed(s)),
        None if cfg.deterministic => bail!("--deterministic needs --seed or FROBSCOPE_SEED"),
        None => Ok(RngSeed::default()),
    }
}

fn factor_cmd(
    cfg: &Config,
    poly: &str,
    p: u64,
    backend: BackendArg,
    out: &mut impl Write,
) -> Result<()> {
    let prime = Prime::new(p)?;
    let f = parse_poly(poly)?.reduce(prime.get())?;
    let backend = match backend {
        BackendArg::Auto => Backend::Auto,
        BackendArg::Berlekamp => Backend::Berlekamp,
        BackendArg::Cz => Backend::CantorZassenhaus,
    };
    let r = factor_full_with(&f, seed(cfg)?, backend)?;
    match cfg.format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &r)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["factor", "degree", "multiplicity"])?;
            for (g, m) in &r.factors {
                w.write_record([g.to_string(), opt(&g.degree()), m.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => writeln!(out, "{}", factorization_text(&r))?,
    }
    Ok(())
}

fn factorization_text(r: &FactorizationResult) -> String {
    let mut s = String::new();
    if r.leading != 1 || r.factors.is_empty() {
        s.push_str(&r.leading.to_string());
    }
    for (g, m) in &r.factors {
        s.push_str(&format!("({g})"));
        if *m > 1 {
            s.push_str(&format!("^{m}"));
        }
    }
    let note = match r.factors.as_slice() {
        [(_, 1)] => "  irreducible",
        _ => "",
    };
    format!("{s}  mod {}{note}", r.prime)
}

#[derive(Serialize)]
struct CycloTables {
    m: u64,
    poly: IntPoly,
    lucas: Vec<i64>,
    residue_rules: BTreeMap<u64, IntPoly>,
}

fn cyclo_cmd(cfg: &Config, m: u64, out: &mut impl Write) -> Result<()> {
    let tables = CycloTables {
        m,
        poly: cyclotomic_poly(m)?,
        lucas: (0..m).map(|n| cyclo_lucas(m, n)).collect(),
        residue_rules: residue_rule_table(m)?,
    };
    match cfg.format {
        Format::Json => {
            serde_json::to_writer(&mut *out, &tables)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["table", "n", "value"])?;
            for (n, l) in tables.lucas.iter().enumerate() {
                w.write_record(["lucas".to_string(), n.to_string(), l.to_string()])?;
            }
            for (r, rule) in &tables.residue_rules {
                w.write_record(["residue_rule".to_string(), r.to_string(), rule.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "Phi_{m} = {}", tables.poly)?;
            let rows: Vec<Vec<String>> = tables
                .lucas
                .iter()
                .enumerate()
                .map(|(n, l)| vec![n.to_string(), l.to_string()])
                .collect();
            write_aligned(&["n", "L_n"], &rows, out)?;
            writeln!(out)?;
            let rows: Vec<Vec<String>> = tables
                .residue_rules
                .iter()
                .map(|(r, rule)| vec![r.to_string(), rule.to_string()])
                .collect();
            write_aligned(&["n mod M", "U_n = F{U}, F ="], &rows, out)?;
        }
    }
    Ok(())
}

fn tau_cmd(cfg: &Config, lmax: u64, pmax: Option<u64>, out: &mut impl Write) -> Result<()> {
    if lmax > cfg.series_cap {
        bail!(frobscope::Error::CapExceeded {
            what: "tau lmax",
            requested: lmax,
            cap: cfg.series_cap,
        });
    }
    let table = tau::tau_table(lmax)?;
    let rows = tau::delta_table(&table, lmax)?;
    Table {
        headers: &["l", "tau", "delta", "factorization", "largest_simple_prime"],
        records: &rows,
        cells: |r: &DeltaRow| {
            vec![
                r.l.to_string(),
                r.tau.to_string(),
                r.delta.to_string(),
                r.factorization.to_string(),
                opt(&r.factorization.largest_simple_prime()),
            ]
        },
    }
    .write(cfg.format, out)?;

    let Some(pmax) = pmax else {
        return Ok(());
    };
    let (mut checked, mut skipped, mut failures) = (0u64, 0u64, Vec::new());
    for row in &rows {
        let l = Prime::new(row.l)?;
        for p in frobscope::arith::primes_in_range(3, pmax + 1) {
            match tau::check_tau_prime_power(&table, l, p) {
                Ok(true) => checked += 1,
                Ok(false) => failures.push((row.l, p.get())),
                Err(frobscope::Error::RamifiedPrime(_)) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }
    eprintln!("tau(l^p) congruence: {checked} pairs hold, {skipped} ramified pairs skipped");
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CheckFailed(format!(
            "tau(l^p) congruence fails for (l, p) in {failures:?}"
        ))
        .into())
    }
}

#[derive(Serialize)]
struct PerrinRow {
    n: u64,
}

fn perrin_cmd(cfg: &Config, limit: u64, out: &mut impl Write) -> Result<()> {
    let rows: Vec<PerrinRow> = classify::perrin_pseudoprime_scan(limit, cfg.jobs)?
        .into_iter()
        .map(|n| PerrinRow { n })
        .collect();
    Table {
        headers: &["n"],
        records: &rows,
        cells: |r: &PerrinRow| vec![r.n.to_string()],
    }
    .write(cfg.format, out)
}

#[derive(Serialize)]
struct TermRow {
    n: u64,
    value: String,
}

fn lucas_cmd(
    cfg: &Config,
    poly: &str,
    count: u64,
    initials: Option<&str>,
    out: &mut impl Write,
) -> Result<()> {
    let c = parse_poly(poly)?;
    let rec = match initials {
        Some(s) => {
            let init = s
                .split(',')
                .map(|t| t.trim().parse::<BigInt>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .context("--initials expects comma-separated integers")?;
            LinRec::new(c, init)?
        }
        None => LinRec::lucas(c)?,
    };
    let rows: Vec<TermRow> = rec
        .terms_exact(count, cfg.step_cap)?
        .into_iter()
        .enumerate()
        .map(|(n, value)| TermRow {
            n: n as u64,
            value: value.to_string(),
        })
        .collect();
    Table {
        headers: &["n", "value"],
        records: &rows,
        cells: |r: &TermRow| vec![r.n.to_string(), r.value.clone()],
    }
    .write(cfg.format, out)
}
