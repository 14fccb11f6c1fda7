//! `sheafcoh`: exact sheaf-cohomology computations on finite posets and
//! verification of universal-coefficient / projection-formula statements.
//!
//! Exit codes: 0 all checks pass (skips count as pass), 1 mathematical
//! failure, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sheafcoh::cohom::cohomology_table;
use sheafcoh::exactlin::{smith_normal_form, IntMatrix};
use sheafcoh::instance::{builtin, builtin_names, random_instance, Instance, InstanceFile};
use sheafcoh::report::VerificationReport;
use sheafcoh::site::DEFAULT_MAX_ELEMENTS;
use sheafcoh::uct;

#[derive(Parser)]
#[command(name = "sheafcoh", version, about = "exact sheaf cohomology on finite posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Theorem1,
    Les,
    Uct,
    Corollary2,
    Corollary2split,
    Corollary3,
    Projection,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the cohomology table H^r(X, F) of an instance's sheaf.
    Cohomology {
        /// instance file path, or a built-in fixture name
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
        max_elements: usize,
    },
    /// Verify a theorem or corollary on one instance.
    Verify {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        which: Which,
        /// highest degree for per-degree checks (default: poset height + 1)
        #[arg(long)]
        rmax: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
        max_elements: usize,
        /// test mode: check against a deliberately wrong oracle
        #[arg(long, hide = true)]
        wrong_oracle: bool,
    },
    /// Verify a theorem or corollary on seeded random instances.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: u64,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
        max_elements: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// test mode: check against a deliberately wrong oracle
        #[arg(long, hide = true)]
        wrong_oracle: bool,
    },
    /// Print the Smith normal form diagonal of an integer matrix literal.
    Snf {
        /// row-major matrix, e.g. [[2,4],[6,8]]
        matrix: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Cohomology { input, format, out, max_elements } => {
            let file = load_instance(&input)?;
            let inst = file.build_with_max(max_elements)?;
            let mut report = VerificationReport::new(file.description());
            report.add_table("cohomology", cohomology_table(&inst.poset, &inst.sheaf));
            emit(&report, format, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, which, rmax, format, out, max_elements, wrong_oracle } => {
            let file = load_instance(&input)?;
            let inst = file.build_with_max(max_elements)?;
            require_blocks(&inst, which)?;
            let mut report = run_checks(&inst, which, rmax, &file.description(), wrong_oracle);
            if !report.passed() {
                report.set_counterexample(
                    serde_json::from_str(&file.to_json()).expect("instance json"),
                );
            }
            emit(&report, format, out.as_deref())?;
            Ok(exit_for(&report))
        }
        Command::Random { seed, count, which, max_elements, format, out, wrong_oracle } => {
            if max_elements > DEFAULT_MAX_ELEMENTS {
                return Err(format!("max-elements must be at most {DEFAULT_MAX_ELEMENTS}"));
            }
            let mut report = VerificationReport::new(format!(
                "random seed={seed} count={count} which={}",
                which_name(which)
            ));
            for i in 0..count {
                let inst_seed = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i);
                let file = random_instance(inst_seed, max_elements);
                let inst = file.build_with_max(max_elements)?;
                let sub = run_checks(&inst, which, None, &file.description(), wrong_oracle);
                let ok = sub.passed();
                report.check(
                    &format!("instance_{i:04}"),
                    None,
                    ok,
                    file.description(),
                );
                if !ok && report.counterexample.is_none() {
                    let minimized = minimize(&file, which, max_elements, wrong_oracle);
                    for c in sub.checks.iter().filter(|c| c.status == sheafcoh::report::CheckStatus::Fail) {
                        report.check(&format!("instance_{i:04}.{}", c.name), c.degree, false, c.detail.clone());
                    }
                    report.set_counterexample(
                        serde_json::from_str(&minimized.to_json()).expect("instance json"),
                    );
                    write_counterexample(&minimized, out.as_deref())?;
                }
            }
            emit(&report, format, out.as_deref())?;
            Ok(exit_for(&report))
        }
        Command::Snf { matrix, format } => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(&matrix)
                .map_err(|e| format!("matrix literal: {e}"))?;
            let r = rows.len();
            let c = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != c) {
                return Err("ragged matrix literal".to_string());
            }
            let m = IntMatrix::from_fn(r, c, |i, j| rows[i][j].into());
            let s = smith_normal_form(&m).s;
            let diag: Vec<String> = (0..r.min(c)).map(|i| s.get(i, i).to_string()).collect();
            match format {
                Format::Text => println!("({})", diag.join(",")),
                Format::Json => println!("[{}]", diag.join(",")),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn which_name(which: Which) -> &'static str {
    match which {
        Which::Theorem1 => "theorem1",
        Which::Les => "les",
        Which::Uct => "uct",
        Which::Corollary2 => "corollary2",
        Which::Corollary2split => "corollary2split",
        Which::Corollary3 => "corollary3",
        Which::Projection => "projection",
        Which::All => "all",
    }
}

fn load_instance(input: &str) -> Result<InstanceFile, String> {
    if let Some(file) = builtin(input) {
        return Ok(file);
    }
    if Path::new(input).exists() {
        let text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
        InstanceFile::parse(&text)
    } else {
        Err(format!(
            "no such file or built-in fixture: {input} (built-ins: {})",
            builtin_names().join(", ")
        ))
    }
}

/// Blocks explicitly required by a single-check run; `all` skips instead.
fn require_blocks(inst: &Instance, which: Which) -> Result<(), String> {
    if which == Which::Projection {
        if inst.map.is_none() {
            return Err("which=projection requires a map block".to_string());
        }
        if inst.perfect.is_none() {
            return Err("which=projection requires a perfect_complex block".to_string());
        }
    }
    Ok(())
}

fn run_checks(
    inst: &Instance,
    which: Which,
    rmax: Option<i64>,
    label: &str,
    wrong_oracle: bool,
) -> VerificationReport {
    let rmax = rmax.unwrap_or(inst.poset.height() as i64 + 1);
    let mut report = VerificationReport::new(label);
    if wrong_oracle {
        let table = cohomology_table(&inst.poset, &inst.sheaf);
        let h0_is_z999 = table
            .iter()
            .any(|(r, fs)| *r == 0 && fs.len() == 1 && fs[0] == 999u32.into());
        report.check("wrong_oracle", Some(0), h0_is_z999, "expected H^0 = Z/999");
    }
    let (p, f, a) = (&inst.poset, &inst.sheaf, &inst.coefficients);
    if matches!(which, Which::Theorem1 | Which::All) {
        report.merge(uct::verify_theorem1_with_coefficients(p, f, a, label));
        if let Some(c) = &inst.perfect {
            report.merge(uct::verify_theorem1(p, f, c, label));
        }
    }
    if matches!(which, Which::Les | Which::All) {
        report.merge(uct::triangle_les(p, f, a, label).report);
    }
    if matches!(which, Which::Uct | Which::All) {
        report.merge(uct::classical_uct(p, f, a, label).report);
    }
    for r in 0..=rmax {
        if matches!(which, Which::Corollary2 | Which::All) {
            report.merge(uct::corollary2(p, f, a, r, label));
        }
        if matches!(which, Which::Corollary2split | Which::All) {
            report.merge(uct::corollary2_split(p, f, a, r, label));
        }
        if matches!(which, Which::Corollary3 | Which::All) {
            report.merge(uct::corollary3(p, f, a, r, label));
        }
    }
    if matches!(which, Which::Projection | Which::All) {
        match (&inst.map, &inst.perfect) {
            (Some(m), Some(c)) => report.merge(uct::projection_check(m, f, c, label)),
            _ => report.skip("projection", None, "no map/perfect_complex block"),
        }
    }
    report
}

/// Greedy minimization: repeatedly drop a poset element (restricting the
/// sheaf and the map) while the failure persists.
fn minimize(file: &InstanceFile, which: Which, max_elements: usize, wrong_oracle: bool) -> InstanceFile {
    let mut current = file.clone();
    loop {
        let Ok(inst) = current.build_with_max(max_elements) else { return current };
        let n = inst.poset.len();
        let mut shrunk = None;
        for drop in 0..n {
            let keep: Vec<usize> = (0..n).filter(|&x| x != drop).collect();
            let sheaf = inst.sheaf.restrict_to(&keep);
            let map = inst.map.as_ref().map(|m| {
                sheafcoh::site::MonotoneMap::new(
                    sheaf.poset.clone(),
                    m.target.clone(),
                    keep.iter().map(|&x| m.assignment[x]).collect(),
                )
                .expect("restricted map stays monotone")
            });
            let candidate = InstanceFile::from_values(
                &sheaf,
                &inst.coefficients,
                inst.perfect.as_ref(),
                map.as_ref(),
            );
            let Ok(cinst) = candidate.build_with_max(max_elements) else { continue };
            if !run_checks(&cinst, which, None, "minimize", wrong_oracle).passed() {
                shrunk = Some(candidate);
                break;
            }
        }
        match shrunk {
            Some(c) => current = c,
            None => return current,
        }
    }
}

fn write_counterexample(file: &InstanceFile, out: Option<&Path>) -> Result<(), String> {
    let path = match out {
        Some(p) => p.with_file_name(format!(
            "{}-counterexample.json",
            p.file_stem().and_then(|s| s.to_str()).unwrap_or("report")
        )),
        None => PathBuf::from("counterexample.json"),
    };
    std::fs::write(&path, file.to_json()).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(report: &VerificationReport, format: Format, out: Option<&Path>) -> Result<(), String> {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_for(report: &VerificationReport) -> ExitCode {
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
