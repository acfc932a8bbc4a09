//! Command-line dispatch: validation, trace tables, sheaf operations,
//! untwisting, compatibility checks, and the seeded property-suite runner.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::compat::{check_compatibility, trace_table, CompatSystem, CompatWitness};
use crate::cyclotomic::FieldAut;
use crate::descent::{build_descent, scholie_check_with, untwist};
use crate::harness;
use crate::manifest::{emit_sheaf_manifest, parse_manifest, Manifest};
use crate::sheaves::{dual, internal_hom, tate_twist, tensor, EquivariantSheaf, VirtualClass};

/// Environment variable naming the default manifest directory.
pub const MANIFEST_DIR_VAR: &str = "EQUICHAR_MANIFEST_DIR";

#[derive(Parser)]
#[command(name = "equichar", version, about = "Exact checker for equivariant trace compatibility")]
struct Cli {
    /// Path to the JSON manifest (default: manifest.json in the directory
    /// named by EQUICHAR_MANIFEST_DIR, else the working directory).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Override the manifest's seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trace-window override; widths below the certified bound only warn,
    /// the verdicts always use the certified bound.
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and cross-check the manifest.
    Validate,
    /// Print the trace table of a system (or of a single sheaf).
    Trace {
        #[arg(long, conflicts_with = "sheaf")]
        system: Option<String>,
        #[arg(long)]
        sheaf: Option<String>,
    },
    /// Apply an operation to manifest sheaves and emit the result.
    Op {
        /// One of: tensor, hom, dual, twist.
        #[arg(long)]
        name: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: Option<String>,
        /// Twist amount for `twist`.
        #[arg(long, default_value_t = 1)]
        n: i64,
    },
    /// Untwist a sheaf along (m, g) and print the certificate table.
    Descend {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        sheaf: String,
    },
    /// Run the compatibility predicate on a system.
    Check {
        #[arg(long)]
        system: String,
    },
    /// Run the property suites with the manifest seed.
    Verify {
        /// Suite name (coinduction, mackey, adjunction, scholie,
        /// criterion, truncation, closure, inertia, duality, points);
        /// omit to run all.
        #[arg(long)]
        suite: Option<String>,
    },
}

fn manifest_path(cli: &Cli) -> PathBuf {
    if let Some(p) = &cli.manifest {
        return p.clone();
    }
    match std::env::var_os(MANIFEST_DIR_VAR) {
        Some(dir) => PathBuf::from(dir).join("manifest.json"),
        None => PathBuf::from("manifest.json"),
    }
}

fn witness_json(w: &CompatWitness) -> serde_json::Value {
    json!({
        "point": w.point,
        "k": w.k,
        "j": w.j,
        "lambda": [w.lambda.0, w.lambda.1],
        "left": w.left.to_string(),
        "right": w.right.to_string(),
    })
}

fn certified_window(s: &CompatSystem) -> i64 {
    let points = s.objects.first().map_or(0, |v| v.points().len());
    let d = (0..points)
        .map(|p| s.objects.iter().map(|v| v.dim_at(p)).max().unwrap_or(0))
        .max()
        .unwrap_or(0);
    (2 * d).max(1) as i64
}

fn warn_window(requested: Option<i64>, certified: i64) {
    if let Some(w) = requested {
        if w < certified {
            eprintln!(
                "warning: requested window {w} is below the certified bound {certified}; \
                 verdicts use the certified bound"
            );
        }
    }
}

fn print_trace_table(s: &CompatSystem, json_mode: bool) -> Result<(), String> {
    let table = trace_table(s).map_err(|e| e.to_string())?;
    if json_mode {
        let rows: Vec<serde_json::Value> = table
            .entries
            .iter()
            .map(|(pt, k, j, vals)| {
                json!({
                    "point": pt,
                    "k": k,
                    "j": j,
                    "values": vals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&json!({ "trace_table": rows })).unwrap());
    } else {
        for (pt, k, j, vals) in &table.entries {
            let vals: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
            println!("point {pt}  k={k}  j={j}: {}", vals.join(" | "));
        }
    }
    Ok(())
}

fn singleton_system(sheaf: &EquivariantSheaf) -> Result<CompatSystem, String> {
    let sigma = FieldAut::identity(sheaf.conductor()).map_err(|e| e.to_string())?;
    CompatSystem::new(vec![sigma], vec![VirtualClass::from_sheaf(sheaf.clone())])
        .map_err(|e| e.to_string())
}

fn get_sheaf<'m>(m: &'m Manifest, name: &str) -> Result<&'m EquivariantSheaf, String> {
    m.sheaves.get(name).ok_or_else(|| format!("unknown sheaf '{name}'"))
}

fn cmd_trace(m: &Manifest, system: &Option<String>, sheaf: &Option<String>, json_mode: bool) -> Result<i32, String> {
    let s = match (system, sheaf) {
        (Some(name), _) => m
            .systems
            .get(name)
            .cloned()
            .ok_or_else(|| format!("unknown system '{name}'"))?,
        (None, Some(name)) => singleton_system(get_sheaf(m, name)?)?,
        (None, None) => return Err("trace needs --system or --sheaf".to_string()),
    };
    print_trace_table(&s, json_mode)?;
    Ok(0)
}

fn cmd_op(m: &Manifest, name: &str, lhs: &str, rhs: &Option<String>, n: i64, seed: u64) -> Result<i32, String> {
    let a = get_sheaf(m, lhs)?;
    let need_rhs = || -> Result<&EquivariantSheaf, String> {
        let r = rhs.as_ref().ok_or_else(|| format!("operation '{name}' needs --rhs"))?;
        get_sheaf(m, r)
    };
    let result = match name {
        "tensor" => tensor(a, need_rhs()?).map_err(|e| e.to_string())?,
        "hom" => internal_hom(a, need_rhs()?).map_err(|e| e.to_string())?,
        "dual" => dual(a).map_err(|e| e.to_string())?,
        "twist" => tate_twist(a, n).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown operation '{other}'")),
    };
    let out_name = format!("{name}_{lhs}");
    let doc = emit_sheaf_manifest(&result, &out_name, seed);
    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    Ok(0)
}

fn cmd_descend(
    m: &Manifest,
    dm: i64,
    dg: usize,
    sheaf: &str,
    seed: u64,
    json_mode: bool,
) -> Result<i32, String> {
    let l = get_sheaf(m, sheaf)?;
    let x = l.base();
    if dg >= x.group.order() {
        return Err(format!("group element {dg} out of range (order {})", x.group.order()));
    }
    let datum = build_descent(x, dm, dg).map_err(|e| e.to_string())?;
    let descended = untwist(&datum, l).map_err(|e| e.to_string())?;
    let window = (2 * l.total_dim().max(1)) as i64;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for p in 0..x.size() {
        for q in x.inertia_group().elements() {
            if !x.stabilizes(p, dg, q, dm) {
                continue;
            }
            for j in -window..=window {
                let (lhs, rhs) =
                    scholie_check_with(&datum, l, &descended, p, q, j).map_err(|e| e.to_string())?;
                let ok = lhs == rhs;
                all_ok &= ok;
                rows.push((p, q, j, lhs.to_string(), rhs.to_string(), ok));
            }
        }
    }
    let doc = emit_sheaf_manifest(&descended, &format!("untwist_{dm}_{dg}_{sheaf}"), seed);
    if json_mode {
        let cert: Vec<serde_json::Value> = rows
            .iter()
            .map(|(p, q, j, l, r, ok)| {
                json!({"point": p, "q": q, "j": j, "twisted": l, "descended": r, "ok": ok})
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "descended": doc,
                "certificate": cert,
            }))
            .unwrap()
        );
    } else {
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        println!("certificate (m={dm}, g={dg}):");
        for (p, q, j, lv, rv, ok) in &rows {
            let mark = if *ok { "ok " } else { "FAIL" };
            println!("  [{mark}] point {p} q={q} j={j}: twisted {lv} = descended {rv}");
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_check(m: &Manifest, system: &str, window: Option<i64>, json_mode: bool) -> Result<i32, String> {
    let s = m
        .systems
        .get(system)
        .ok_or_else(|| format!("unknown system '{system}'"))?;
    warn_window(window, certified_window(s));
    let verdict = check_compatibility(s).map_err(|e| e.to_string())?;
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "system": system,
                "compatible": verdict.compatible,
                "witness": verdict.witness.as_ref().map(witness_json),
            }))
            .unwrap()
        );
    } else if verdict.compatible {
        println!("system '{system}': compatible");
    } else {
        println!("system '{system}': incompatible");
        if let Some(w) = &verdict.witness {
            println!("{}", serde_json::to_string(&witness_json(w)).unwrap());
        }
    }
    Ok(if verdict.compatible { 0 } else { 1 })
}

fn cmd_verify(suite: &Option<String>, seed: u64, json_mode: bool) -> Result<i32, String> {
    let all: &[(&str, fn(u64) -> harness::SuiteOutcome)] = &[
        ("coinduction", harness::suite_coinduction_oracle),
        ("mackey", harness::suite_mackey),
        ("adjunction", |_| harness::suite_adjunction()),
        ("scholie", |_| harness::suite_scholie()),
        ("criterion", harness::suite_descent_criterion),
        ("truncation", harness::suite_truncation),
        ("closure", harness::suite_closure),
        ("inertia", harness::suite_inertia_invariants),
        ("duality", |_| harness::suite_duality()),
        ("points", |_| harness::suite_point_homs()),
    ];
    let selected: Vec<&(&str, fn(u64) -> harness::SuiteOutcome)> = match suite {
        None => all.iter().collect(),
        Some(name) => {
            let found: Vec<_> = all.iter().filter(|(n, _)| n == name).collect();
            if found.is_empty() {
                return Err(format!("unknown suite '{name}'"));
            }
            found
        }
    };
    let mut ok = true;
    let mut results = Vec::new();
    for (name, run) in selected {
        let start = Instant::now();
        let outcome = run(seed);
        eprintln!("suite {name}: {:.1}s", start.elapsed().as_secs_f64());
        ok &= outcome.passed();
        results.push((*name, outcome));
    }
    if json_mode {
        let rows: Vec<serde_json::Value> = results
            .iter()
            .map(|(name, o)| {
                json!({
                    "suite": name,
                    "cases": o.cases,
                    "passed": o.passed(),
                    "failures": o.failures,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({"seed": seed, "suites": rows})).unwrap()
        );
    } else {
        println!("seed {seed}");
        for (name, o) in &results {
            let status = if o.passed() { "pass" } else { "FAIL" };
            println!("[{status}] {name}: {} ({} cases)", o.name, o.cases);
            for f in o.failures.iter().take(10) {
                println!("        failed: {f}");
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

/// Entry point; returns the process exit code (0 ok / compatible,
/// 1 incompatible or failed suite, 2 malformed input).
pub fn run_cli() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are exit 0; usage errors are malformed input
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let path = manifest_path(&cli);
    let manifest = match parse_manifest(&path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let seed = cli.seed.unwrap_or(manifest.seed);
    let result = match &cli.command {
        Command::Validate => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "manifest": path.display().to_string(),
                        "conductor": manifest.conductor,
                        "seed": seed,
                        "groups": manifest.groups.len(),
                        "gsets": manifest.gsets.len(),
                        "sheaves": manifest.sheaves.len(),
                        "systems": manifest.systems.len(),
                        "valid": true,
                    }))
                    .unwrap()
                );
            } else {
                println!(
                    "manifest ok: conductor {}, {} groups, {} gsets, {} sheaves, {} systems",
                    manifest.conductor,
                    manifest.groups.len(),
                    manifest.gsets.len(),
                    manifest.sheaves.len(),
                    manifest.systems.len()
                );
            }
            Ok(0)
        }
        Command::Trace { system, sheaf } => cmd_trace(&manifest, system, sheaf, cli.json),
        Command::Op { name, lhs, rhs, n } => cmd_op(&manifest, name, lhs, rhs, *n, seed),
        Command::Descend { m, g, sheaf } => cmd_descend(&manifest, *m, *g, sheaf, seed, cli.json),
        Command::Check { system } => cmd_check(&manifest, system, cli.window, cli.json),
        Command::Verify { suite } => cmd_verify(suite, seed, cli.json),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
