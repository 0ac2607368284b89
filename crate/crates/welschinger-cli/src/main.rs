use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use welschinger::tables::{env_override, TABLE_DIR_ENV};
use welschinger::trees::{self, TreeFamily};
use welschinger::{
    verify, Calculator, ChiEntry, ContactVector, CuratedTable, Engine, Error, FInvariants, FKey, FTable,
    GeometryKind, LagrangianKind, RelativeInvariants, Strategy,
};

#[derive(Parser)]
#[command(name = "welschinger", version, about = "Exact Welschinger invariants of CP², and of the 2- and 3-dimensional ellipsoid quadrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Replacement table of relative invariants (JSON).
    #[arg(long, global = true)]
    invariant_table: Option<PathBuf>,
    /// Replacement table of cotangent-bundle invariants (JSON).
    #[arg(long, global = true)]
    f_table: Option<PathBuf>,
    /// Source for relative invariants missing from the table.
    #[arg(long, value_enum, default_value_t = EngineArg::Table, global = true)]
    engine: EngineArg,
    /// Evaluate on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Table,
    Recursion,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Cp2,
    Quadric2,
    Quadric3,
}

impl From<GeometryArg> for GeometryKind {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Cp2 => GeometryKind::ProjectivePlane,
            GeometryArg::Quadric2 => GeometryKind::EllipsoidQuadric2,
            GeometryArg::Quadric3 => GeometryKind::EllipsoidQuadric3,
        }
    }
}

#[derive(Args)]
struct Target {
    #[arg(long, value_enum)]
    geometry: GeometryArg,
    #[arg(long)]
    degree: u32,
    #[arg(long)]
    real_points: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Compute χ^d_r.
    Chi {
        #[command(flatten)]
        target: Target,
        /// Print the per-tree contributions.
        #[arg(long)]
        ledger: bool,
    },
    /// Compute χ^d_r for every admissible r up to a bound.
    Poly {
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        #[arg(long)]
        degree: u32,
        /// Largest r (defaults to the expected degree of the polynomial).
        #[arg(long)]
        max_real_points: Option<u32>,
    },
    /// Dump the decorated trees contributing to χ^d_r as JSON.
    Trees {
        #[command(flatten)]
        target: Target,
    },
    /// Run the self-check suite.
    Verify,
    /// Show how an F value is obtained from the tables.
    Derive {
        /// Lagrangian: S2, RP2 or S3.
        #[arg(long)]
        kind: LagrangianKind,
        /// Prescribed orbits, e.g. `2e1+e3` or `0`.
        #[arg(long, default_value = "0")]
        alpha: ContactVector,
        /// Free orbits.
        #[arg(long, default_value = "0")]
        beta: ContactVector,
        /// Conjugate point pairs.
        #[arg(long, default_value_t = 0)]
        pairs: u32,
        /// Real points; checked against the dimension equation when given.
        #[arg(long)]
        real_points: Option<u32>,
    },
    /// List which (d, r) can be computed from the available tables.
    Frontier {
        #[arg(long, value_enum)]
        geometry: Option<GeometryArg>,
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

enum Failure {
    Usage(String),
    Missing(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_missing_key() {
            Failure::Missing(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn calculator(c: &Common) -> Result<Calculator, Failure> {
    let inv_path = c.invariant_table.clone().or_else(|| env_override("relative.json"));
    let f_path = c.f_table.clone().or_else(|| env_override("cotangent.json"));
    let table = match inv_path {
        Some(p) => CuratedTable::from_path(&p)?,
        None => CuratedTable::builtin(),
    };
    let f = match f_path {
        Some(p) => FTable::from_path(&p)?,
        None => FTable::builtin(),
    };
    let engine = match c.engine {
        EngineArg::Table => Engine::Table,
        EngineArg::Recursion => Engine::Recursion,
    };
    let strategy = if c.sequential { Strategy::Sequential } else { Strategy::Parallel };
    Ok(Calculator::new(RelativeInvariants::new(table, engine), FInvariants::new(f), strategy))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fmt = cli.common.format;
    let calc = calculator(&cli.common)?;
    match cli.command {
        Command::Chi { target, ledger } => {
            let g: GeometryKind = target.geometry.into();
            let res = calc.chi(g, target.degree, target.real_points)?;
            match fmt {
                Format::Json => println!("{}", json(&res)),
                Format::Csv => {
                    println!("geometry,d,r,chi");
                    println!("{g},{},{},{}", res.d, res.r, res.value);
                }
                Format::Text => {
                    println!("{}", res.value);
                    if ledger {
                        for row in &res.ledger {
                            let rel: Vec<String> = row.relative.iter().map(|f| format!("{} = {}", f.key, f.value)).collect();
                            println!(
                                "{:+} x {} x {} x [{} = {}] x [{}] = {}  {}",
                                row.sign,
                                row.assignment_count,
                                row.multiplicity,
                                row.f_key,
                                row.f_value,
                                rel.join("; "),
                                row.contribution,
                                row.tree
                            );
                        }
                    }
                }
            }
        }
        Command::Poly { geometry, degree, max_real_points } => {
            let g: GeometryKind = geometry.into();
            let top = max_real_points.unwrap_or_else(|| match g {
                GeometryKind::EllipsoidQuadric3 => 3 * degree / 2,
                _ => welschinger::contact::degree_expected(g, degree).max(0) as u32,
            });
            let poly = calc.chi_polynomial(g, degree, top);
            match fmt {
                Format::Json => println!("{}", json(&poly)),
                Format::Csv => {
                    println!("geometry,d,r,chi");
                    for (r, e) in &poly.coefficients {
                        match e {
                            ChiEntry::Value { value } => println!("{g},{degree},{r},{value}"),
                            ChiEntry::Unavailable { .. } => println!("{g},{degree},{r},unavailable"),
                        }
                    }
                }
                Format::Text => {
                    for (r, e) in &poly.coefficients {
                        match e {
                            ChiEntry::Value { value } => println!("r={r}: {value}"),
                            ChiEntry::Unavailable { reason } => println!("r={r}: unavailable ({reason})"),
                        }
                    }
                }
            }
        }
        Command::Trees { target } => {
            let family = TreeFamily::for_geometry(target.geometry.into());
            let list = trees::enumerate_trees_with(calc.strategy, family, target.degree, target.real_points)?;
            let dumps: Vec<_> = list.iter().map(|t| t.dump()).collect();
            println!("{}", json(&dumps));
        }
        Command::Verify => {
            let reports = verify::run_all(&calc);
            let ok = reports.iter().all(|r| r.pass);
            match fmt {
                Format::Json => println!("{}", json(&reports)),
                _ => {
                    for r in &reports {
                        println!("criterion {}: {} {}", r.id, if r.pass { "PASS" } else { "FAIL" }, r.name);
                        for f in &r.failures {
                            println!("    {f}");
                        }
                    }
                }
            }
            if !ok {
                return Err(Failure::Verify);
            }
        }
        Command::Derive { kind, alpha, beta, pairs, real_points } => {
            let key = match real_points {
                Some(r) => FKey::with_points(kind, alpha, beta, r, pairs)?,
                None => FKey::new(kind, alpha, beta, pairs)?,
            };
            let d = calc.f.derive(&key)?;
            match fmt {
                Format::Json => println!(
                    "{}",
                    json(&serde_json::json!({ "key": key.to_string(), "value": trees::json_integer(&d.value), "derivation": d.render() }))
                ),
                Format::Csv => println!("key,value\n\"{key}\",{}", d.value),
                Format::Text => print!("{}", d.render()),
            }
        }
        Command::Frontier { geometry, max_degree } => {
            let gs: Vec<GeometryKind> = match geometry {
                Some(g) => vec![g.into()],
                None => GeometryKind::ALL.to_vec(),
            };
            let mut all = Vec::new();
            for g in gs {
                let dmax = max_degree.unwrap_or(match g {
                    GeometryKind::ProjectivePlane => 8,
                    GeometryKind::EllipsoidQuadric2 => 5,
                    GeometryKind::EllipsoidQuadric3 => 10,
                });
                all.extend(calc.frontier(g, dmax));
            }
            match fmt {
                Format::Json => println!("{}", json(&all)),
                Format::Csv => {
                    println!("geometry,d,r,computable");
                    for e in &all {
                        println!("{},{},{},{}", e.geometry, e.d, e.r, e.computable);
                    }
                }
                Format::Text => {
                    for e in &all {
                        match &e.missing {
                            None => println!("{} d={} r={}: computable", e.geometry, e.d, e.r),
                            Some(m) => println!("{} d={} r={}: missing {m}", e.geometry, e.d, e.r),
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            eprintln!("(table overrides are read from ${TABLE_DIR_ENV} when set)");
            ExitCode::from(2)
        }
        Err(Failure::Missing(m)) => {
            eprintln!("missing: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Verify) => ExitCode::from(1),
    }
}
