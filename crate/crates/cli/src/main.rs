//! `gf2to1` — construct, verify, and sweep two-to-one mappings over
//! `GF(2^n)` and the fixed-point-free involutions they induce.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical verdict failed,
//! 2 = usage or parse error.

mod commands;

use gf2to1_cli::{report, schema};

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gf2to1_core::field::FieldCtx;

#[derive(Parser)]
#[command(name = "gf2to1", version, about = "Two-to-one mappings and involutions over GF(2^n)")]
pub struct Cli {
    /// Field degree n (needed by commands whose inputs do not fix it)
    #[arg(long, global = true)]
    pub n: Option<u32>,

    /// Override the built-in modulus table with this irreducible polynomial
    /// (hex mask, e.g. 0x13)
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    /// Worker threads for sweeps and enumerations
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Seed for sampling commands
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Attach per-phase wall times to reports (breaks byte-for-byte
    /// reproducibility of the output, the math stays deterministic)
    #[arg(long, global = true)]
    pub timings: bool,

    /// Emit JSON (the default; kept for explicit selection)
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV where supported (sweep)
    #[arg(long, global = true)]
    pub csv: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the field context: degree, modulus, order, generator
    FieldInfo,
    /// Preimage profile and two-to-one verdict for a map on a domain
    Check {
        /// Family parameters JSON, e.g. {"row":3,"m":2,"delta":"0x8","c":"0x1"}
        #[arg(long, conflicts_with = "map")]
        family: Option<String>,
        /// MappingSpec JSON (or @file)
        #[arg(long, requires = "domain")]
        map: Option<String>,
        /// Domain JSON or shorthand: full, trace:m=2,gamma=0x1, mu:d=5, mu*:d=5, list:0x1,0x2
        #[arg(long)]
        domain: Option<String>,
    },
    /// Enumerate all admissible (delta, c) of a row and verify each instance
    Sweep {
        #[arg(long)]
        row: u8,
        #[arg(long)]
        m: u32,
        /// Exponent index for rows 5 and 6
        #[arg(long)]
        i: Option<u32>,
        /// Restrict to one delta (hex)
        #[arg(long)]
        delta: Option<String>,
        /// Restrict to one c (hex)
        #[arg(long)]
        c: Option<String>,
        /// Admit the theorem's literal c = 0 for row 6 (no involution then)
        #[arg(long)]
        allow_c_zero: bool,
    },
    /// Derive and verify involutions (closed form, pairing table, or both)
    Involution {
        #[arg(long, conflicts_with_all = ["map", "odd_index"])]
        family: Option<String>,
        #[arg(long, requires = "domain")]
        map: Option<String>,
        #[arg(long)]
        domain: Option<String>,
        /// Odd-extension catalog index 1..=5 (with --m)
        #[arg(long)]
        odd_index: Option<u8>,
        /// Catalog parameter m (field degree 2m+1)
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_enum, default_value_t = InvolutionMode::Both)]
        mode: InvolutionMode,
        /// For the garbled catalog item 2: search structured exponent
        /// repairs consistent with the printed involution
        #[arg(long)]
        repair: bool,
    },
    /// Count the two-to-one maps deriving a given involution (n <= 3)
    Count {
        /// Pairing table as a JSON array of hex pairs; defaults to x -> x+1
        #[arg(long)]
        involution: Option<String>,
        /// Also run the 256-function brute-force oracle (n = 2 only)
        #[arg(long)]
        oracle: bool,
    },
    /// Check a resultant factorization identity at sampled points
    Resultant {
        #[arg(long, value_enum)]
        which: WhichIdentity,
        #[arg(long)]
        m: u32,
        /// Sample count; 0 = exhaustive (eq25 only)
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Certify a commutative diagram in base or fiber mode
    Agw {
        /// DiagramSpec JSON (or @file)
        #[arg(long)]
        diagram: String,
        #[arg(long, value_enum)]
        mode: AgwMode,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InvolutionMode {
    Closed,
    Table,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WhichIdentity {
    Eq19,
    Eq25,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AgwMode {
    Base,
    Fiber,
}

/// Build a context honoring `--modulus`, then the `GF2TO1_MODULUS_TABLE`
/// env file, then the built-in table.
pub fn make_ctx(n: u32, modulus_flag: Option<&str>) -> Result<FieldCtx, String> {
    if let Some(hex) = modulus_flag {
        let mask = parse_mask(hex)?;
        return FieldCtx::with_modulus(n, mask).map_err(|e| e.to_string());
    }
    if let Ok(path) = std::env::var("GF2TO1_MODULUS_TABLE") {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| format!("GF2TO1_MODULUS_TABLE {path}: {e}"))?;
        let table: std::collections::BTreeMap<String, String> =
            serde_json::from_str(&text).map_err(|e| format!("bad modulus table: {e}"))?;
        if let Some(hex) = table.get(&n.to_string()) {
            let mask = parse_mask(hex)?;
            return FieldCtx::with_modulus(n, mask).map_err(|e| e.to_string());
        }
    }
    FieldCtx::new(n).map_err(|e| e.to_string())
}

fn parse_mask(hex: &str) -> Result<u32, String> {
    let digits = hex
        .strip_prefix("0x")
        .or_else(|| hex.strip_prefix("0X"))
        .ok_or_else(|| format!("modulus {hex:?} must be 0x-prefixed hex"))?;
    u32::from_str_radix(digits, 16).map_err(|e| format!("bad modulus {hex:?}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
