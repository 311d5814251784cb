use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecke_dirac::cm::dirac_partition;
use hecke_dirac::group::{build_group, ReflectionGroup};
use hecke_dirac::modules::{
    baby_verma, dirac_cohomology, simple_head, standard_module, unitarity_report, zero_scalar_window,
};
use hecke_dirac::pbw::presets::{
    cherednik, constant_parameter, corrupted_a1, corrupted_nonconstant_parameter, graded_affine_hecke,
    named_parameter,
};
use hecke_dirac::pbw::PositiveSystem;
use hecke_dirac::report;
use hecke_dirac::{Cyclo, Error, Result};

#[derive(Parser)]
#[command(name = "hecke-dirac", version, about = "Exact Dirac operator computations for small reflection groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the PBW conditions, the Dirac square, the pin section and the derivation rule.
    Verify(Opts),
    /// Dirac cohomology of a standard, baby Verma or simple module.
    DiracCohomology(Opts),
    /// Blocks of Irr(W) merged by Dirac cohomology at t = 0.
    Partition(Opts),
    /// Gram blocks of the contravariant form and the D² scalar test.
    Unitarity(Opts),
    /// Dump group data as JSON.
    ExportGroup(Opts),
    /// PBW verdict only.
    PbwCheck(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PresetArg {
    Cherednik,
    Gah,
    Corrupted,
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// Catalogue id, e.g. A1, B2, Z3, I2(4), G(3,1,2).
    #[arg(long)]
    group: Option<String>,
    /// Default 1.
    #[arg(long)]
    t: Option<String>,
    /// A constant, or class=value; repeatable.
    #[arg(long)]
    c: Vec<String>,
    /// Irrep label.
    #[arg(long)]
    sigma: Option<String>,
    /// Degree cap.
    #[arg(long = "K")]
    k: Option<u32>,
    /// Default json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Default cherednik.
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
    /// Use the simple quotient at t = 0.
    #[arg(long)]
    simple: bool,
    /// key = value file; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

struct RunConfig {
    group: Arc<ReflectionGroup>,
    t: Cyclo,
    c: Vec<Cyclo>,
    sigma: Option<String>,
    k: Option<u32>,
    format: Format,
    out: Option<PathBuf>,
    preset: PresetArg,
    simple: bool,
}

fn merge_file(mut o: Opts) -> Result<Opts> {
    let Some(path) = o.config.clone() else { return Ok(o) };
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("{}: {}", path.display(), e)))?;
    let mut file_c = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim().to_string()))
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
        match key {
            "group" => o.group = o.group.or(Some(value)),
            "t" => o.t = o.t.or(Some(value)),
            "c" => file_c.push(value),
            "sigma" => o.sigma = o.sigma.or(Some(value)),
            "K" => {
                let k = value.parse().map_err(|_| Error::Config(format!("K must be a nonnegative integer, got `{}`", value)))?;
                o.k = o.k.or(Some(k));
            }
            "format" => {
                let f = Format::from_str(&value, true).map_err(Error::Config)?;
                o.format = o.format.or(Some(f));
            }
            "preset" => {
                let p = PresetArg::from_str(&value, true).map_err(Error::Config)?;
                o.preset = o.preset.or(Some(p));
            }
            "simple" => o.simple |= value == "true",
            "out" => o.out = o.out.or(Some(PathBuf::from(value))),
            other => return Err(Error::Config(format!("unknown key `{}`", other))),
        }
    }
    if o.c.is_empty() {
        o.c = file_c;
    }
    Ok(o)
}

fn resolve(o: Opts) -> Result<RunConfig> {
    let o = merge_file(o)?;
    let id = o.group.ok_or_else(|| Error::Config("--group is required".into()))?;
    let group = build_group(&id)?;
    let t: Cyclo = o.t.as_deref().unwrap_or("1").parse()?;
    let mut constant = Cyclo::one();
    let mut named = Vec::new();
    for entry in &o.c {
        match entry.split_once('=') {
            Some((name, v)) => named.push((name.trim().to_string(), v.parse::<Cyclo>()?)),
            None => constant = entry.parse()?,
        }
    }
    let c = if named.is_empty() {
        constant_parameter(&group, &constant)
    } else {
        named_parameter(&group, &named, &constant)?
    };
    Ok(RunConfig {
        group,
        t,
        c,
        sigma: o.sigma,
        k: o.k,
        format: o.format.unwrap_or(Format::Json),
        out: o.out,
        preset: o.preset.unwrap_or(PresetArg::Cherednik),
        simple: o.simple,
    })
}

struct Output {
    json: serde_json::Value,
    table: String,
    pass: bool,
}

fn sigma(cfg: &RunConfig) -> Result<String> {
    let s = cfg.sigma.clone().ok_or_else(|| Error::Config("--sigma is required".into()))?;
    cfg.group.irrep_index(&s)?;
    Ok(s)
}

fn verify(cfg: &RunConfig) -> Result<Output> {
    let r = match cfg.preset {
        PresetArg::Cherednik => report::verify_family(&cherednik(cfg.group.clone(), cfg.t.clone(), cfg.c.clone())?)?,
        PresetArg::Gah => report::verify_family(&graded_affine_hecke(cfg.group.clone(), cfg.c.clone(), PositiveSystem::Lex)?)?,
        PresetArg::Corrupted => {
            let data = match cfg.group.id.as_str() {
                "A1" => corrupted_a1(),
                "B2" => corrupted_nonconstant_parameter(),
                other => return Err(Error::Config(format!("no corrupted preset for {}", other))),
            };
            report::verify_form_data(&data, "corrupted")
        }
    };
    Ok(Output { table: r.table(), pass: r.pass(), json: r.json })
}

fn pbw_check(cfg: &RunConfig) -> Result<Output> {
    let data = match cfg.preset {
        PresetArg::Cherednik => hecke_dirac::pbw::presets::cherednik_data(cfg.group.clone(), &cfg.t, &cfg.c),
        PresetArg::Gah => hecke_dirac::pbw::presets::graded_affine_hecke_data(cfg.group.clone(), &cfg.c, PositiveSystem::Lex)?,
        PresetArg::Corrupted => match cfg.group.id.as_str() {
            "A1" => corrupted_a1(),
            "B2" => corrupted_nonconstant_parameter(),
            other => return Err(Error::Config(format!("no corrupted preset for {}", other))),
        },
    };
    let v = data.pbw_check();
    let table = if v.pass() {
        "pass\n".to_string()
    } else {
        report::table(
            &v.failures
                .iter()
                .map(|f| vec![format!("condition {}", f.condition), format!("w={}", f.w), f.detail.clone()])
                .collect::<Vec<_>>(),
        )
    };
    Ok(Output { json: report::pbw_json(&v), table, pass: v.pass() })
}

fn cohomology(cfg: &RunConfig) -> Result<Output> {
    let s = sigma(cfg)?;
    let g = cfg.group.clone();
    let h = if cfg.t.is_one() {
        let cap = match cfg.k {
            Some(k) => k,
            None => zero_scalar_window(&g, &cfg.c, g.irrep_index(&s)?).map_or(1, |k| k + 1),
        };
        dirac_cohomology(&standard_module(g.clone(), &s, cfg.c.clone(), cap)?)?
    } else if cfg.t.is_zero() {
        let m = baby_verma(g.clone(), &s, cfg.c.clone())?;
        if cfg.simple {
            dirac_cohomology(&simple_head(&m)?)?
        } else {
            dirac_cohomology(&m)?
        }
    } else {
        return Err(Error::Config("modules are built at t = 0 or t = 1".into()));
    };
    Ok(Output {
        json: report::cohomology_json(&g, &cfg.t, &cfg.c, &h),
        table: report::cohomology_table(&h),
        pass: true,
    })
}

fn partition(cfg: &RunConfig) -> Result<Output> {
    let p = dirac_partition(cfg.group.clone(), cfg.c.clone())?;
    Ok(Output {
        json: report::partition_json(&cfg.group, &p),
        table: report::partition_table(&p),
        pass: p.casimir_constant_on_blocks,
    })
}

fn unitarity(cfg: &RunConfig) -> Result<Output> {
    let s = sigma(cfg)?;
    let r = unitarity_report(cfg.group.clone(), &s, cfg.c.clone(), cfg.k.unwrap_or(4))?;
    Ok(Output {
        json: report::unitarity_json(&cfg.group, &cfg.c, &r),
        table: report::unitarity_table(&r),
        pass: r.consistent,
    })
}

fn export_group(cfg: &RunConfig) -> Result<Output> {
    let g = &cfg.group;
    let rows: Vec<Vec<String>> = g
        .irreps
        .iter()
        .zip(&g.characters)
        .map(|(i, ch)| {
            let mut row = vec![i.label.clone()];
            row.extend(ch.iter().map(|v| v.to_string()));
            row
        })
        .collect();
    Ok(Output { json: report::group_json(g), table: report::table(&rows), pass: true })
}

fn run(command: Command) -> Result<(Output, Format, Option<PathBuf>)> {
    let (opts, f): (Opts, fn(&RunConfig) -> Result<Output>) = match command {
        Command::Verify(o) => (o, verify),
        Command::DiracCohomology(o) => (o, cohomology),
        Command::Partition(o) => (o, partition),
        Command::Unitarity(o) => (o, unitarity),
        Command::ExportGroup(o) => (o, export_group),
        Command::PbwCheck(o) => (o, pbw_check),
    };
    let cfg = resolve(opts)?;
    let out = f(&cfg)?;
    Ok((out, cfg.format, cfg.out))
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::Config(_)
            | Error::UnknownGroup(_)
            | Error::UnknownIrrep(_)
            | Error::WindowExceedsCap { .. }
            | Error::UnsupportedField(_)
            | Error::Precondition(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, format, path)) => {
            let text = match format {
                Format::Json => report::render(&out.json),
                Format::Table => out.table,
            };
            match path {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        eprintln!("error: {}: {}", p.display(), e);
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", text),
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
