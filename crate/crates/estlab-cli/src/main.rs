//! Command-line front end for the estimator laboratory.
//!
//! Subcommands: `summarize`, `report`, `optimize`, `reproduce`,
//! `enumerate`, `simulate`. Exit codes: 0 success, 2 validation error,
//! 3 reproduction failure in a match-class cell, 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use estlab::datasets::{self, DatasetId};
use estlab::dual::{self, DualPrParams};
use estlab::error::EstError;
use estlab::io::{load_population, ColumnSchema};
use estlab::mean_family;
use estlab::oracle::{self, DesignKind, DesignSpec};
use estlab::population::FinitePopulation;
use estlab::render::{render_to, Cell, Format, Table};
use estlab::reports::{self, TableId, ToleranceProfile};
use estlab::summary::{summarize_attributes, summarize_numeric, Divisor};
use estlab::systematic;
use estlab::variance::{self, OptimaMode as VarMode, T3Sign};
use estlab::{attributes, Result};

#[derive(Parser)]
#[command(
    name = "estlab",
    about = "Finite-population estimator laboratory: summaries, estimator reports, optima, \
             reference-table reproduction, and sampling oracles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Input CSV file with a header row.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Column mapping, e.g. y=COL,x=COL,z=COL,phi1=COL,responder=COL.
    #[arg(long, global = true, default_value = "y=y,x=x")]
    schema: String,

    /// Variance divisor for summaries.
    #[arg(long, global = true, default_value = "n-1", value_parser = ["n", "n-1"])]
    divisor: String,

    /// RNG seed (falls back to the ESTLAB_SEED environment variable).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte-Carlo replicate count.
    #[arg(long, global = true, default_value_t = 100_000)]
    replicates: usize,

    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = ["text", "csv", "jsonl"])]
    format: String,

    /// Write output to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl GlobalOpts {
    fn divisor(&self) -> Divisor {
        if self.divisor == "n" {
            Divisor::N
        } else {
            Divisor::NMinus1
        }
    }

    fn format(&self) -> Result<Format> {
        Format::from_str(&self.format)
    }

    fn seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("ESTLAB_SEED")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(0)
    }

    fn population(&self) -> Result<FinitePopulation> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| EstError::Schema("--input is required for this command".into()))?;
        let schema: ColumnSchema = self.schema.parse()?;
        load_population(path, &schema)
    }

    fn emit(&self, table: &Table) -> Result<()> {
        render_to(table, self.format()?, self.out.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Numeric (and attribute) summary of a CSV population.
    Summarize,

    /// Estimator bias/MSE/PRE report for a bundled dataset or an input file.
    Report {
        /// Bundled dataset id (ch1-murthy, ch2-pakrice, ch3-aligarh,
        /// ch4-pop1, ch4-pop2, ch5-murthy67).
        #[arg(long)]
        dataset: Option<String>,

        /// Factor-family parameter (systematic designs).
        #[arg(long)]
        alpha: Option<f64>,

        /// Mixing weight of the dual ratio-cum-product family.
        #[arg(long)]
        theta: Option<f64>,

        /// Non-response rate.
        #[arg(long, default_value_t = 0.1)]
        w2: f64,

        /// Inverse non-response subsampling fraction.
        #[arg(long = "bigL", default_value_t = 2.0)]
        big_l: f64,

        /// Sample size for file-based reports.
        #[arg(long)]
        n: Option<usize>,

        /// First-phase sample size (two-phase designs).
        #[arg(long = "n-prime")]
        n_prime: Option<usize>,

        /// Optimum selection mode.
        #[arg(long, default_value = "grid", value_parser = ["as-printed", "grid"])]
        mode: String,
    },

    /// Optimal constants per estimator family for a bundled dataset.
    Optimize {
        #[arg(long)]
        dataset: String,

        #[arg(long, default_value = "grid", value_parser = ["as-printed", "grid"])]
        mode: String,

        #[arg(long, default_value_t = 0.1)]
        w2: f64,

        #[arg(long = "bigL", default_value_t = 2.0)]
        big_l: f64,
    },

    /// Recompute a published table and classify every cell.
    Reproduce {
        /// Table id (ch1-table1, ch2-table4.1, ch3-table6.1, ch4-table2,
        /// ch5-table5.1, ch5-table5.2).
        #[arg(long)]
        table: String,

        /// Tolerance profile: default, strict, or a JSON file path.
        #[arg(long, default_value = "default")]
        tolerance: String,
    },

    /// Exact enumeration of an estimator over all samples of a design.
    Enumerate {
        #[arg(long)]
        dataset: Option<String>,

        #[arg(long, default_value = "srswor", value_parser = ["srswor", "systematic", "two-phase"])]
        design: String,

        #[arg(long)]
        n: usize,

        #[arg(long = "n-prime")]
        n_prime: Option<usize>,

        #[arg(long, default_value = "mean",
              value_parser = ["mean", "ratio", "product", "dual", "pr"])]
        estimator: String,

        #[arg(long)]
        theta: Option<f64>,

        /// Enumeration cap (number of samples).
        #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_CAP)]
        cap: u64,
    },

    /// Seeded Monte-Carlo evaluation of an estimator under a design.
    Simulate {
        #[arg(long)]
        dataset: Option<String>,

        #[arg(long, default_value = "srswor",
              value_parser = ["srswor", "systematic", "two-phase"])]
        design: String,

        #[arg(long)]
        n: usize,

        #[arg(long = "n-prime")]
        n_prime: Option<usize>,

        #[arg(long = "bigL")]
        big_l: Option<f64>,

        #[arg(long, default_value = "mean",
              value_parser = ["mean", "ratio", "product", "dual", "pr"])]
        estimator: String,

        #[arg(long)]
        theta: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::Summarize => {
            let pop = g.population()?;
            let mut table = Table::new("population summary", &["quantity", "value"]);
            let push = |t: &mut Table, name: &str, v: Option<f64>| {
                if let Some(v) = v {
                    t.push(vec![name.into(), Cell::Num(v)]);
                }
            };
            if pop.x().is_some() || pop.z().is_some() {
                let s = summarize_numeric(&pop, g.divisor())?;
                table.push(vec!["N".into(), Cell::Int(s.n_units as i64)]);
                push(&mut table, "meanY", Some(s.mean_y));
                push(&mut table, "varY", Some(s.var_y));
                push(&mut table, "cvY", Some(s.cv_y));
                push(&mut table, "meanX", s.mean_x);
                push(&mut table, "varX", s.var_x);
                push(&mut table, "meanZ", s.mean_z);
                push(&mut table, "varZ", s.var_z);
                push(&mut table, "covYX", s.cov_yx);
                push(&mut table, "rhoYX", s.rho_yx);
                push(&mut table, "covYZ", s.cov_yz);
                push(&mut table, "rhoYZ", s.rho_yz);
                push(&mut table, "covZX", s.cov_zx);
                push(&mut table, "rhoZX", s.rho_zx);
                push(&mut table, "ratioR1", s.ratio_r1);
                push(&mut table, "ratioR2", s.ratio_r2);
            }
            if pop.phi1().is_some() && pop.phi2().is_some() {
                let a = summarize_attributes(&pop, g.divisor())?;
                push(&mut table, "P1", Some(a.p1));
                push(&mut table, "P2", Some(a.p2));
                push(&mut table, "rhoPb1", Some(a.rho_pb1));
                push(&mut table, "rhoPb2", Some(a.rho_pb2));
                push(&mut table, "rhoPhi", Some(a.rho_phi));
                push(&mut table, "kPb1", Some(a.k_pb1));
                push(&mut table, "kPb2", Some(a.k_pb2));
                push(&mut table, "kPhi", Some(a.k_phi));
            }
            g.emit(&table)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Report {
            dataset,
            alpha,
            theta,
            w2,
            big_l,
            n,
            n_prime,
            mode,
        } => {
            let table = match dataset.as_deref() {
                Some(id) => dataset_report(id.parse()?, alpha, theta, w2, big_l, &mode)?,
                None => {
                    // File-based report: classical two-auxiliary table.
                    let pop = g.population()?;
                    let n = n.ok_or_else(|| {
                        EstError::Schema("--n is required for file-based reports".into())
                    })?;
                    let stats = summarize_numeric(&pop, g.divisor())?;
                    let coeffs = estlab::DesignCoefficients::new(pop.n_units(), n, n_prime)?;
                    let rows = dual::classical_report(&stats, &coeffs, None)?;
                    let mut t = Table::new(
                        "two-auxiliary mean estimators",
                        &["estimator", "mse1", "pre"],
                    );
                    for r in rows {
                        t.push(vec![
                            r.estimator.label().into(),
                            Cell::Num(r.mse1),
                            r.pre.map(Cell::Num).unwrap_or(Cell::Empty),
                        ]);
                    }
                    if let Some(theta) = theta {
                        let pr = dual::pr_report(&stats, &coeffs, &DualPrParams::new(theta), None)?;
                        t.push(vec![
                            format!("dual-rcp-mix(theta={theta})").as_str().into(),
                            Cell::Num(pr.mse1),
                            Cell::Num(pr.pre),
                        ]);
                    }
                    t
                }
            };
            g.emit(&table)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Optimize {
            dataset,
            mode,
            w2,
            big_l,
        } => {
            let table = dataset_optima(dataset.parse()?, &mode, w2, big_l)?;
            g.emit(&table)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Reproduce { table, tolerance } => {
            let id: TableId = table.parse()?;
            let profile = match tolerance.as_str() {
                "default" => reports::default_profile(id),
                "strict" => reports::strict_profile(id),
                path => ToleranceProfile::from_file(std::path::Path::new(path))?,
            };
            let report = reports::reproduce_table(id, &profile)?;
            g.emit(&report.to_table())?;
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "reproduction failed: {} match-class cell(s) out of tolerance",
                    report.failures().len()
                );
                Ok(ExitCode::from(3))
            }
        }

        Command::Enumerate {
            dataset,
            design,
            n,
            n_prime,
            estimator,
            theta,
            cap,
        } => {
            let pop = command_population(g, dataset.as_deref())?;
            let spec = parse_design(&design, &pop, n, n_prime, None)?.with_cap(cap);
            let (target, f) = pick_estimator(&pop, &estimator, theta)?;
            let result = oracle::enumerate_design(&pop, &spec, target, &estimator, f)?;
            g.emit(&simulation_table(&result))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate {
            dataset,
            design,
            n,
            n_prime,
            big_l,
            estimator,
            theta,
        } => {
            let pop = command_population(g, dataset.as_deref())?;
            let spec = parse_design(&design, &pop, n, n_prime, big_l)?
                .with_seed(g.seed())
                .with_replicates(g.replicates);
            let (target, f) = pick_estimator(&pop, &estimator, theta)?;
            let result = oracle::monte_carlo(&pop, &spec, target, &estimator, f)?;
            g.emit(&simulation_table(&result))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn command_population(g: &GlobalOpts, dataset: Option<&str>) -> Result<FinitePopulation> {
    match dataset {
        Some(id) => {
            let id: DatasetId = id.parse()?;
            datasets::builtin_dataset(id).raw.ok_or_else(|| {
                EstError::Schema(format!(
                    "dataset {} has no raw rows; use --input",
                    id.as_str()
                ))
            })
        }
        None => g.population(),
    }
}

fn parse_design(
    design: &str,
    pop: &FinitePopulation,
    n: usize,
    n_prime: Option<usize>,
    big_l: Option<f64>,
) -> Result<DesignSpec> {
    let kind = match design {
        "srswor" => DesignKind::Srswor { n },
        "systematic" => {
            if !pop.n_units().is_multiple_of(n) {
                return Err(EstError::Design(format!(
                    "systematic design needs N divisible by n, got N = {}, n = {n}",
                    pop.n_units()
                )));
            }
            DesignKind::Systematic {
                n,
                k: pop.n_units() / n,
            }
        }
        "two-phase" => DesignKind::TwoPhase {
            n_prime: n_prime.ok_or_else(|| {
                EstError::Schema("--n-prime is required for two-phase designs".into())
            })?,
            n,
        },
        other => return Err(EstError::UnknownId(format!("design '{other}'"))),
    };
    let mut spec = DesignSpec::new(kind);
    if let Some(l) = big_l {
        spec = spec.with_nonresponse(l);
    }
    Ok(spec)
}

type EstimatorFn = Box<dyn Fn(&oracle::DrawnSample) -> f64 + Sync>;

fn pick_estimator(
    pop: &FinitePopulation,
    name: &str,
    theta: Option<f64>,
) -> Result<(f64, EstimatorFn)> {
    let n_pop = pop.n_units() as f64;
    let mean = |col: &[f64]| col.iter().sum::<f64>() / n_pop;
    let target = mean(pop.y());
    let pop_x = pop.x().map(mean);
    let pop_z = pop.z().map(mean);
    let need_x = || pop_x.ok_or_else(|| EstError::Schema("estimator needs an x column".into()));
    let f: EstimatorFn = match name {
        "mean" => Box::new(|s: &oracle::DrawnSample| s.y_bar_star()),
        "ratio" => {
            let px = need_x()?;
            Box::new(move |s: &oracle::DrawnSample| s.y_bar_star() * px / s.mean_x())
        }
        "product" => {
            let px = need_x()?;
            Box::new(move |s: &oracle::DrawnSample| s.y_bar_star() * s.mean_x() / px)
        }
        "dual" => {
            let px = need_x()?;
            // g from the realized design sizes.
            Box::new(move |s: &oracle::DrawnSample| {
                let g = s.units.len() as f64 / (n_pop - s.units.len() as f64);
                s.y_bar_star() * dual::dual_transform(s.mean_x(), px, g) / px
            })
        }
        "pr" => {
            let px = need_x()?;
            let pz =
                pop_z.ok_or_else(|| EstError::Schema("pr estimator needs a z column".into()))?;
            let theta =
                theta.ok_or_else(|| EstError::Schema("--theta is required for pr".into()))?;
            Box::new(move |s: &oracle::DrawnSample| {
                let g = s.units.len() as f64 / (n_pop - s.units.len() as f64);
                let fwd = (dual::dual_transform(s.mean_x(), px, g) / px)
                    * (pz / dual::dual_transform(s.mean_z(), pz, g));
                s.mean_y() * (theta * fwd + (1.0 - theta) / fwd)
            })
        }
        other => return Err(EstError::UnknownId(format!("estimator '{other}'"))),
    };
    Ok((target, f))
}

fn simulation_table(r: &oracle::SimulationResult) -> Table {
    let mut t = Table::new(
        "sampling result",
        &[
            "estimator",
            "mean",
            "bias",
            "mse",
            "mcStdError",
            "mseStdError",
            "count",
            "exact",
        ],
    );
    t.push(vec![
        Cell::Text(r.estimator_id.clone()),
        Cell::Num(r.mean),
        Cell::Num(r.bias),
        Cell::Num(r.mse),
        Cell::Num(r.mc_std_error),
        Cell::Num(r.mse_std_error),
        Cell::Int(r.count as i64),
        Cell::Bool(r.exact),
    ]);
    t
}

fn dataset_report(
    id: DatasetId,
    alpha: Option<f64>,
    theta: Option<f64>,
    w2: f64,
    big_l: f64,
    mode: &str,
) -> Result<Table> {
    let var_mode = if mode == "grid" {
        VarMode::Grid
    } else {
        VarMode::AsPrinted
    };
    Ok(match id {
        DatasetId::Ch1Murthy => {
            let (sum, mut nr) = datasets::ch1_inputs(w2)?;
            nr = systematic::NonResponseSpec::new(w2, big_l, nr.s_y2_nr)?;
            let mut t = Table::new(
                "systematic non-response estimators",
                &["estimator", "bias1", "mse1"],
            );
            for row in systematic::sys_classical_report(&sum, &nr) {
                t.push(vec![
                    row.estimator.label().into(),
                    row.bias1.map(Cell::Num).unwrap_or(Cell::Empty),
                    Cell::Num(row.mse1),
                ]);
            }
            if let Some(alpha) = alpha {
                let fam = systematic::factor_report(alpha, &sum, &nr)?;
                t.push(vec![
                    format!("factor(alpha={alpha})").as_str().into(),
                    fam.bias1.map(Cell::Num).unwrap_or(Cell::Empty),
                    Cell::Num(fam.mse1),
                ]);
            }
            t
        }
        DatasetId::Ch2PakRice => {
            let (summary, mean_y, _) = datasets::ch2_inputs()?;
            let f1 = 0.05;
            let printed =
                attributes::attr_optima(&summary, f1, mean_y, attributes::OptimaMode::AsPrinted)?;
            let rows = attributes::attr_report(
                &summary,
                f1,
                mean_y,
                &printed.params,
                attributes::MseVariant::AsPrinted,
            )?;
            let mut t = Table::new(
                "attribute estimators (nominal f1 = 0.05; PRE of t1..t5, t7 is f1-free)",
                &["estimator", "bias1", "mse1", "pre"],
            );
            for r in rows {
                t.push(vec![
                    r.estimator.label().into(),
                    Cell::Num(r.bias1),
                    Cell::Num(r.mse1),
                    Cell::Num(r.pre),
                ]);
            }
            t
        }
        DatasetId::Ch3Aligarh => {
            let (mut table, coeffs, mean_y) = datasets::ch3_inputs(true)?;
            let c20 = mean_family::back_solve_c20(
                mean_y,
                &coeffs,
                table.c(0, 2)?,
                table.c(1, 1)?,
                39.217225,
            )?;
            table.insert(2, 0, c20);
            let mut t = Table::new(
                &format!("ratio-type mean families (back-solved C20 = {c20:.4})"),
                &["family", "param*", "bias1", "mse1", "bias2", "mse2"],
            );
            for fam in mean_family::default_families() {
                let opt = mean_family::family_optimum(&table, &coeffs, mean_y, &fam)?;
                let first = mean_family::first_order_report(&table, &coeffs, mean_y, &opt.family)?;
                let second =
                    mean_family::second_order_report(&table, &coeffs, mean_y, &opt.family)?;
                t.push(vec![
                    fam.label().into(),
                    Cell::Num(opt.param),
                    Cell::Num(first.bias),
                    Cell::Num(first.mse),
                    Cell::Num(second.bias),
                    Cell::Num(second.mse),
                ]);
            }
            t
        }
        DatasetId::Ch4Pop1 | DatasetId::Ch4Pop2 => {
            let (stats, coeffs) = match id {
                DatasetId::Ch4Pop1 => datasets::ch4_pop1_inputs()?,
                _ => {
                    let (raw, _, coeffs) = datasets::ch4_pop2_inputs()?;
                    (raw, coeffs)
                }
            };
            let rows = dual::classical_report(&stats, &coeffs, None)?;
            let mut t = Table::new(
                "two-auxiliary mean estimators",
                &["estimator", "mse1", "pre"],
            );
            for r in rows {
                t.push(vec![
                    r.estimator.label().into(),
                    Cell::Num(r.mse1),
                    r.pre.map(Cell::Num).unwrap_or(Cell::Empty),
                ]);
            }
            let theta = match theta {
                Some(v) => v,
                None => dual::pr_optimum(&stats, &coeffs)?.theta0,
            };
            let pr = dual::pr_report(&stats, &coeffs, &DualPrParams::new(theta), None)?;
            t.push(vec![
                format!("dual-rcp-mix(theta={theta:.4})").as_str().into(),
                Cell::Num(pr.mse1),
                Cell::Num(pr.pre),
            ]);
            t
        }
        DatasetId::Ch5Murthy67 => {
            let (partials, n, n_prime) = datasets::ch5_inputs()?;
            let single =
                variance::var_single_report(&partials, n, var_mode, T3Sign::CorrectedPlus)?;
            let twophase = variance::var_twophase_report(&partials, n, n_prime, var_mode)?;
            let mut t = Table::new(
                &format!("variance estimators (n = {n}, n' = {n_prime}, mode = {mode})"),
                &["estimator", "mse/Sy^4", "pre"],
            );
            for r in single.into_iter().chain(twophase) {
                t.push(vec![
                    Cell::Text(r.estimator),
                    Cell::Num(r.mse_rel),
                    Cell::Num(r.pre),
                ]);
            }
            t
        }
    })
}

fn dataset_optima(id: DatasetId, mode: &str, w2: f64, big_l: f64) -> Result<Table> {
    Ok(match id {
        DatasetId::Ch1Murthy => {
            let (sum, nr0) = datasets::ch1_inputs(w2)?;
            let nr = systematic::NonResponseSpec::new(w2, big_l, nr0.s_y2_nr)?;
            let opt = systematic::alpha_optimum(&sum, &nr)?;
            let mut t = Table::new("factor-family optimum", &["quantity", "value"]);
            t.push(vec!["alpha*".into(), Cell::Num(opt.chosen)]);
            for (i, r) in opt.roots.iter().enumerate() {
                t.push(vec![
                    format!("root{}", i + 1).as_str().into(),
                    Cell::Num(*r),
                ]);
            }
            t.push(vec!["minMse".into(), Cell::Num(opt.min_mse)]);
            t
        }
        DatasetId::Ch2PakRice => {
            let (summary, mean_y, _) = datasets::ch2_inputs()?;
            let attr_mode = if mode == "grid" {
                attributes::OptimaMode::Minimizing
            } else {
                attributes::OptimaMode::AsPrinted
            };
            let opt = attributes::attr_optima(&summary, 0.05, mean_y, attr_mode)?;
            let mut t = Table::new("attribute-estimator optima", &["constant", "value"]);
            for (name, v) in [
                ("w1", opt.params.w1),
                ("w2", opt.params.w2),
                ("K61", opt.params.k61),
                ("K62", opt.params.k62),
                ("K71", opt.params.k71),
                ("K72", opt.params.k72),
                ("mse(t5)", opt.mse_t5),
                ("mse(t6)", opt.mse_t6),
                ("mse(t7)", opt.mse_t7),
            ] {
                t.push(vec![name.into(), Cell::Num(v)]);
            }
            t
        }
        DatasetId::Ch3Aligarh => {
            let (mut table, coeffs, mean_y) = datasets::ch3_inputs(true)?;
            let c20 = mean_family::back_solve_c20(
                mean_y,
                &coeffs,
                table.c(0, 2)?,
                table.c(1, 1)?,
                39.217225,
            )?;
            table.insert(2, 0, c20);
            let mut t = Table::new("mean-family optima", &["family", "param*", "mse1"]);
            for fam in mean_family::default_families() {
                let opt = mean_family::family_optimum(&table, &coeffs, mean_y, &fam)?;
                t.push(vec![
                    fam.label().into(),
                    Cell::Num(opt.param),
                    Cell::Num(opt.mse1),
                ]);
            }
            t
        }
        DatasetId::Ch4Pop1 | DatasetId::Ch4Pop2 => {
            let (stats, coeffs) = match id {
                DatasetId::Ch4Pop1 => datasets::ch4_pop1_inputs()?,
                _ => {
                    let (raw, _, coeffs) = datasets::ch4_pop2_inputs()?;
                    (raw, coeffs)
                }
            };
            let opt = dual::pr_optimum(&stats, &coeffs)?;
            let mut t = Table::new("dual ratio-cum-product optimum", &["quantity", "value"]);
            for (name, v) in [
                ("theta0", opt.theta0),
                ("C", opt.c),
                ("D", opt.d),
                ("E", opt.e),
                ("F", opt.f),
                ("minMse", opt.min_mse),
            ] {
                t.push(vec![name.into(), Cell::Num(v)]);
            }
            t
        }
        DatasetId::Ch5Murthy67 => {
            let (partials, n, n_prime) = datasets::ch5_inputs()?;
            let var_mode = if mode == "grid" {
                VarMode::Grid
            } else {
                VarMode::AsPrinted
            };
            let opt = variance::var_optima(&partials, n, Some(n_prime), 1.0, 1.0, var_mode)?;
            let mut t = Table::new("variance-estimator optima", &["constant", "value"]);
            t.push(vec!["x1".into(), Cell::Num(opt.x1)]);
            t.push(vec!["x2".into(), Cell::Num(opt.x2)]);
            t.push(vec!["k4".into(), Cell::Num(opt.k4)]);
            t.push(vec!["k7".into(), Cell::Num(opt.k7)]);
            if let Some(v) = opt.k4_prime {
                t.push(vec!["k4'".into(), Cell::Num(v)]);
            }
            if let Some(v) = opt.k7_prime {
                t.push(vec!["k7'".into(), Cell::Num(v)]);
            }
            t
        }
    })
}
