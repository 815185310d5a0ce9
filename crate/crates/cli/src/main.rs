mod commands;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Normal forms, parameter bounds, stability estimates and numerical checks
/// for weakly dissipative nearly integrable systems.
#[derive(Parser, Debug)]
#[command(name = "dissform", version)]
struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Print the problem in canonical form and exit.
    #[arg(long, global = true)]
    dump_canonical: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the normal form and write it as JSON and text.
    Normalize(Common),
    /// Evaluate the smallness conditions and the parameter caps.
    Check(Common),
    /// Stability constants for one or more orders.
    Estimate(Common),
    /// Integrate the original system and compare with the normal form solutions.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file.
    pub problem: PathBuf,
    /// Normalization order.
    #[arg(long)]
    pub order: Option<u32>,
    /// Orders to process, e.g. `2,3,4,5` or `2..5`.
    #[arg(long, value_parser = parse_orders)]
    pub orders: Option<OrderList>,
    /// Fourier cut-off.
    #[arg(long, conflicts_with = "tau")]
    pub modes: Option<u32>,
    /// Fix tau0 and derive the cut-off for each order.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Perturbing parameter; defaults to the run block (check: the domain cap).
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Dissipative parameter; defaults like `--eps`.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Final time of the comparison run.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Also integrate to time T and report the largest action drift.
    #[arg(long, value_name = "T")]
    pub drift: Option<f64>,
    /// Add the energy column and its period estimate.
    #[arg(long)]
    pub energy: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderList(pub Vec<u32>);

fn parse_orders(s: &str) -> Result<OrderList, String> {
    parse_order_list(s).map(OrderList)
}

fn parse_order_list(s: &str) -> Result<Vec<u32>, String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("DISSFORM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = commands::run(&cli.command, &cli.out, cli.dump_canonical);
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_lists_and_ranges() {
        assert_eq!(parse_order_list("1,3,5").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_order_list("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_order_list("2..=3").unwrap(), vec![2, 3]);
        assert!(parse_order_list("5..2").is_err());
        assert!(parse_order_list("a").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
