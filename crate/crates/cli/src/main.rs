use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use repstab::arnold::{poincare_polynomial, top_character};
use repstab::characters::{character_table, decompose, induced_character, ClassFunction, MultiplicityVector};
use repstab::configspaces::betti::{betti_unordered, colored_betti, stable_range_report};
use repstab::configspaces::explicit::e2_explicit;
use repstab::configspaces::{block_report, e2_characters, load_manifold, Manifold};
use repstab::linalg::to_i64;
use repstab::partitions::Partition;
use repstab::specht::{monotonicity_witness, verify_claims};
use repstab::stability::{check_monotone, check_uniform_stability, induced_sequence, propagate_ranges, property_suite, RangeParams};

#[derive(Parser)]
#[command(name = "repstab", version, about = "Representation stability and configuration-space cohomology")]
struct Cli {
    /// Output layout.
    #[arg(long, value_enum, global = true, default_value = "tsv")]
    format: Format,
    /// Where to write the witness of a failed verification.
    #[arg(long, global = true)]
    witness: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of S_n.
    Chartable {
        #[arg(long)]
        n: usize,
    },
    /// Decomposition of the induced module I_n(V_λ).
    Branch {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n: usize,
        /// Also check the three claims and the monotonicity witness.
        #[arg(long)]
        verify: bool,
    },
    /// Checks the three claims for every μ with λ ⇝ μ.
    Claims {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n: usize,
    },
    /// Monotonicity witness for I_n(V_λ) → I_{n+1}(V_λ).
    Witness {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n: usize,
    },
    /// Monotonicity of the induced sequence {I_n(V_λ)}.
    Monotone {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n_max: usize,
    },
    /// Uniform representation stability of the induced sequence {I_n(V_λ)}.
    Stable {
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        n_max: usize,
        /// First n of the claimed stable range; defaults to 2|λ|.
        #[arg(long)]
        start: Option<usize>,
    },
    /// Stable and monotone ranges through the pages of a spectral sequence.
    Ranges {
        /// Slope, an integer or p/q.
        #[arg(long)]
        m: String,
        #[arg(long, allow_negative_numbers = true)]
        ell: i64,
        #[arg(long, default_value_t = 5)]
        pages: usize,
    },
    /// Cohomology of the configuration space of m points in R^d.
    Arnold {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// The E_2 page for C_n(M).
    E2 {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        n: usize,
        /// Build the explicit complex and report E_3.
        #[arg(long)]
        explicit: bool,
    },
    /// Summands E(μ, r, α) of one E_2 cell across a window of n.
    Blocks {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        n_lo: usize,
        #[arg(long)]
        n_hi: usize,
    },
    /// dim H^i(B_n(M); Q).
    Betti {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// dim H^i(B_{n,μ}(M); Q).
    ColorBetti {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
    },
    /// Theoretical stable ranges for H^i.
    RangesFor {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        mu: Option<Partition>,
    },
    /// Seeded instances of the consistent-sequence propositions.
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 24)]
        count: usize,
    },
}

enum Failure {
    Input(String),
    Verification { command: &'static str, witness: serde_json::Value },
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn witness<T: Serialize>(command: &'static str, value: &T) -> Failure {
    Failure::Verification {
        command,
        witness: serde_json::to_value(value).expect("reports serialize"),
    }
}

type Lines = Vec<String>;

fn multiplicities(m: &MultiplicityVector) -> String {
    let mut items: Vec<(&Partition, u64)> = m.iter().collect();
    items.sort_by(|a, b| b.0.cmp(a.0));
    let parts: Vec<String> = items.iter().map(|(p, c)| format!("{p}:{c}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn decomposition_lines(m: &MultiplicityVector) -> Lines {
    let mut items: Vec<(&Partition, u64)> = m.iter().collect();
    items.sort_by(|a, b| b.0.cmp(a.0));
    items.iter().map(|(p, c)| format!("{p}\t{c}")).collect()
}

fn manifold(path: &PathBuf) -> Result<Manifold, Failure> {
    load_manifold(path).map_err(input)
}

fn run(cmd: Command) -> Result<Lines, Failure> {
    let mut out = Vec::new();
    match cmd {
        Command::Chartable { n } => {
            let table = character_table(n).map_err(input)?;
            let shapes = table.partitions();
            let header: Vec<String> = shapes.iter().map(|p| p.to_string()).collect();
            out.push(format!("lambda\\rho\t{}", header.join("\t")));
            for lambda in shapes {
                let row: Vec<String> = table.row(lambda).iter().map(|v| v.to_string()).collect();
                out.push(format!("{lambda}\t{}", row.join("\t")));
            }
        }
        Command::Branch { lambda, n, verify } => {
            let chi = ClassFunction::irreducible(&lambda).map_err(input)?;
            let induced = induced_character(&chi, n).map_err(input)?;
            out.extend(decomposition_lines(&decompose(&induced).map_err(input)?));
            if verify {
                let claims = verify_claims(&lambda, n).map_err(input)?;
                let mono = monotonicity_witness(&lambda, n).map_err(input)?;
                if !claims.passed() || !mono.passed() {
                    return Err(witness("branch", &(claims, mono)));
                }
                out.push(format!("claims\tpass\t{}", claims.checks.len()));
                out.push(format!("monotonicity\tpass\t{}", mono.entries.len()));
            }
        }
        Command::Claims { lambda, n } => {
            let report = verify_claims(&lambda, n).map_err(input)?;
            if !report.passed() {
                return Err(witness("claims", &report));
            }
            out.push("mu\ttableau\tprojection_constant\tcolumn_stabilizer\tbad_bijections".into());
            for c in &report.checks {
                out.push(format!(
                    "{}\t{}\t{}\t{}\t{}",
                    c.mu,
                    c.tableau,
                    c.projection_constant.as_deref().unwrap_or("-"),
                    c.column_constant,
                    c.bad_bijections_checked
                ));
            }
        }
        Command::Witness { lambda, n } => {
            let report = monotonicity_witness(&lambda, n).map_err(input)?;
            if !report.passed() {
                return Err(witness("witness", &report));
            }
            out.push("mu\ttarget\tspan_dim\tspan_decomposition".into());
            for e in &report.entries {
                let decomposition: Vec<String> = e.span_decomposition.iter().map(|(p, c)| format!("{p}:{c}")).collect();
                out.push(format!("{}\t{}\t{}\t{}", e.mu, e.target, e.span_dimension, decomposition.join(" ")));
            }
        }
        Command::Monotone { lambda, n_max } => {
            let lo = lambda.size().max(1);
            let seq = induced_sequence(&lambda, lo, n_max).map_err(input)?;
            let report = check_monotone(&seq, lo).map_err(input)?;
            if !report.passed() {
                return Err(witness("monotone", &report));
            }
            out.push(format!("sequence\t{}", report.sequence));
            out.push(format!("window\t{}..{}", report.window.0, report.window.1));
            out.push(format!("monotone\tfrom n={}", report.result.holds_from.unwrap_or(lo)));
        }
        Command::Stable { lambda, n_max, start } => {
            let lo = lambda.size().max(1);
            let start = start.unwrap_or(2 * lambda.size()).max(lo);
            let seq = induced_sequence(&lambda, lo, n_max).map_err(input)?;
            let report = check_uniform_stability(&seq, start).map_err(input)?;
            if !report.passed() {
                return Err(witness("stable", &report));
            }
            out.extend(report.to_string().lines().map(String::from));
        }
        Command::Ranges { m, ell, pages } => {
            let params = RangeParams::new(RangeParams::parse_m(&m).map_err(Failure::Input)?, ell).map_err(Failure::Input)?;
            out.push("page\tstable\tmonotone\tkernel\timage".into());
            for row in propagate_ranges(&params, pages) {
                out.push(format!("{}\t{}\t{}\t{}\t{}", row.page, row.stable, row.monotone, row.kernel, row.image));
            }
        }
        Command::Arnold { m, d } => {
            if m == 0 || d < 2 {
                return Err(Failure::Input(format!("need m >= 1 and d >= 2, got m={m} d={d}")));
            }
            out.push(format!("poincare\t{}", poincare_polynomial(m, d)));
            let chi = top_character(m, d);
            let values: Vec<String> = chi.values().iter().map(|v| v.to_string()).collect();
            out.push(format!("top_character\t{}", values.join("\t")));
            out.extend(decomposition_lines(&decompose(&chi).map_err(input)?));
        }
        Command::E2 { manifold: path, n, explicit } => {
            let m = manifold(&path)?;
            let chars = e2_characters(&m, n);
            if !explicit {
                out.push("p\tq\tdim\tdecomposition".into());
                for ((p, q), chi) in &chars {
                    let dim = to_i64(&chi.dimension()).expect("integral dimension");
                    out.push(format!("{p}\t{}\t{dim}\t{}", q * (m.dim - 1), multiplicities(&decompose(chi).map_err(input)?)));
                }
            } else {
                let cx = e2_explicit(&m, n).map_err(input)?;
                if let Some(b) = cx.check_d_squared().map_err(input)? {
                    return Err(witness("e2", &format!("d^2 != 0 on {b:?}")));
                }
                let e3 = cx.e3_dims().map_err(input)?;
                out.push("p\tq\te2_dim\te3_dim".into());
                for (&(p, q), basis) in &cx.cells {
                    let expected = to_i64(&chars[&(p, q)].dimension()).expect("integral dimension") as usize;
                    if expected != basis.len() {
                        return Err(witness("e2", &format!("cell ({p},{q}): explicit {} vs character {expected}", basis.len())));
                    }
                    out.push(format!("{p}\t{}\t{}\t{}", q * (m.dim - 1), basis.len(), e3.get(&(p, q)).copied().unwrap_or(0)));
                }
                let betti: Vec<String> = cx.e3_betti().map_err(input)?.iter().map(|b| b.to_string()).collect();
                out.push(format!("betti\t{}", betti.join(" ")));
            }
        }
        Command::Blocks { manifold: path, p, q, n_lo, n_hi } => {
            let m = manifold(&path)?;
            out.push("mu\tr\talpha\tk\tonset\tdims\ttop".into());
            for row in block_report(&m, p, q, n_lo, n_hi) {
                let dims: Vec<String> = row.dimensions.iter().map(|(n, d)| format!("{n}:{d}")).collect();
                out.push(format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    row.mu,
                    row.r,
                    row.alpha,
                    row.k,
                    row.observed_onset.map_or("-".into(), |n| n.to_string()),
                    dims.join(" "),
                    row.top.as_ref().map_or("-".into(), multiplicities)
                ));
            }
        }
        Command::Betti { manifold: path, n, i } => {
            let m = manifold(&path)?;
            out.push(betti_unordered(&m, n, i).map_err(input)?.to_string());
        }
        Command::ColorBetti { manifold: path, mu, n, i } => {
            let m = manifold(&path)?;
            out.push(colored_betti(&m, n, i, &mu).map_err(input)?.to_string());
        }
        Command::RangesFor { manifold: path, i, mu } => {
            let m = manifold(&path)?;
            out.extend(stable_range_report(&m, i, mu.as_ref()).to_string().lines().map(String::from));
        }
        Command::Props { seed, count } => {
            let report = property_suite(seed, count).map_err(input)?;
            out.push(format!("seed\t{seed}"));
            if !report.passed() {
                eprintln!("seed\t{seed}");
                return Err(witness("props", &report));
            }
            for c in &report.cases {
                out.push(format!("{}\t{}\t{}", c.proposition, if c.passed { "pass" } else { "FAIL" }, c.description));
            }
        }
    }
    Ok(out)
}

fn render(lines: &[String], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Tsv => {
            for l in lines {
                s.push_str(l);
                s.push('\n');
            }
        }
        Format::Pretty => {
            let rows: Vec<Vec<&str>> = lines.iter().map(|l| l.split('\t').collect()).collect();
            let mut widths: Vec<usize> = Vec::new();
            for row in &rows {
                for (j, cell) in row.iter().enumerate() {
                    let w = cell.chars().count();
                    if j >= widths.len() {
                        widths.push(w);
                    } else {
                        widths[j] = widths[j].max(w);
                    }
                }
            }
            for row in &rows {
                let mut line = String::new();
                for (j, cell) in row.iter().enumerate() {
                    if j + 1 == row.len() {
                        line.push_str(cell);
                    } else {
                        line.push_str(cell);
                        line.push_str(&" ".repeat(widths[j] - cell.chars().count() + 2));
                    }
                }
                s.push_str(line.trim_end());
                s.push('\n');
            }
        }
    }
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let witness_path = cli.witness.clone();
    match run(cli.command) {
        Ok(lines) => {
            print!("{}", render(&lines, format));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Verification { command, witness }) => {
            let path = witness_path.unwrap_or_else(|| std::env::temp_dir().join(format!("repstab-witness-{command}.json")));
            let text = serde_json::to_string_pretty(&witness).expect("json");
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: could not write witness to {}: {e}", path.display());
            }
            println!("verification failed; witness written to {}", path.display());
            ExitCode::from(1)
        }
    }
}
