//! Command-line grammar.

use std::path::PathBuf;
use std::str::FromStr;

use cfnet_core::protocol::PhotonInput;
use cfnet_core::repeater::LobmModel;
use cfnet_core::{BellOutcome, Polarization};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::range::{parse_f64_list, parse_f64_values, parse_usize_values};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "cfnet",
    version,
    about = "Counterfactual entanglement distribution simulator"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel sections (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Check the three-party transmission protocol against its closed forms.
    Verify(VerifyArgs),
    /// Evaluate success probability and distribution times of repeater chains.
    Repeater(RepeaterArgs),
    /// Estimate the one-shot chain success rate by simulation.
    Montecarlo(MonteCarloArgs),
    /// Evaluate the repeater figures over a grid of parameters.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Photon input polarizations for Alice and Bob.
    #[arg(long, default_value = "HH")]
    pub pol: PolPair,
    /// Sampled protocol runs (0 skips sampling).
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Master seed; required when sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Success probability of each counterfactual CNOT.
    #[arg(long = "gate-p", default_value_t = 1.0)]
    pub gate_p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RepeaterArgs {
    /// Chain size: a value or a range such as `0..3`.
    #[arg(long, default_value = "1")]
    pub n: NValues,
    /// Gate success probability, or one value per gate.
    #[arg(long = "gate-p", default_value = "1")]
    pub gate_p: ProbList,
    /// Node success probability, or one value per node.
    #[arg(long = "node-p", default_value = "1")]
    pub node_p: ProbList,
    #[command(flatten)]
    pub link: LinkArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LinkArgs {
    /// Default for all three efficiencies.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    /// Detection efficiency.
    #[arg(long = "etaD")]
    pub eta_d: Option<f64>,
    /// Memory efficiency.
    #[arg(long = "etaM")]
    pub eta_m: Option<f64>,
    /// Transmission efficiency.
    #[arg(long = "etaT")]
    pub eta_t: Option<f64>,
    /// Elementary link length in meters.
    #[arg(long = "L0", default_value_t = 1.0)]
    pub l0: f64,
    /// Signal speed in meters per second.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    /// Chain size (at most 3).
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Gate success probability, or one value per gate.
    #[arg(long = "gate-p", default_value = "1")]
    pub gate_p: ProbList,
    /// The two Bell outcomes a linear-optical measurement resolves.
    #[arg(long, default_value = "phi_plus,phi_minus")]
    pub lobm: LobmArg,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "1")]
    pub n: NValues,
    #[arg(long = "gate-p", default_value = "1")]
    pub gate_p: Values,
    #[arg(long = "node-p", default_value = "1")]
    pub node_p: Values,
    #[arg(long, default_value = "1")]
    pub eta: Values,
    #[arg(long = "etaD")]
    pub eta_d: Option<Values>,
    #[arg(long = "etaM")]
    pub eta_m: Option<Values>,
    #[arg(long = "etaT")]
    pub eta_t: Option<Values>,
    #[arg(long = "L0", default_value = "1")]
    pub l0: Values,
    #[arg(long, default_value = "1")]
    pub c: Values,
}

/// A scalar or a `start..end[:step]` range.
#[derive(Debug, Clone, PartialEq)]
pub struct Values {
    pub values: Vec<f64>,
    pub is_range: bool,
}

impl FromStr for Values {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(Self {
            values: parse_f64_values(s)?,
            is_range: s.contains(".."),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NValues {
    pub values: Vec<usize>,
    pub is_range: bool,
}

impl FromStr for NValues {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(Self {
            values: parse_usize_values(s)?,
            is_range: s.contains(".."),
        })
    }
}

/// `p` or `p1,p2,...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbList(pub Vec<f64>);

impl FromStr for ProbList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = parse_f64_list(s)?;
        if let Some(p) = v.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(format!("{p} is not a probability in [0, 1]"));
        }
        Ok(Self(v))
    }
}

impl ProbList {
    /// Broadcasts a single value to `len` entries; otherwise the list must
    /// already have `len` entries.
    pub fn expand(&self, len: usize, what: &str) -> Result<Vec<f64>, String> {
        match self.0.as_slice() {
            [p] => Ok(vec![*p; len]),
            v if v.len() == len => Ok(v.to_vec()),
            v => Err(format!("{what} expects 1 or {len} values, got {}", v.len())),
        }
    }
}

/// Two-letter input polarization code such as `HV`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolPair(pub [Polarization; 2]);

impl FromStr for PolPair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let pol = |c| match c {
            'H' => Ok(Polarization::H),
            'V' => Ok(Polarization::V),
            _ => Err(format!("invalid polarization `{s}`, expected one of HH, HV, VH, VV")),
        };
        let chars: Vec<char> = s.chars().collect();
        match chars.as_slice() {
            [a, b] => Ok(Self([pol(*a)?, pol(*b)?])),
            _ => Err(format!("invalid polarization `{s}`, expected one of HH, HV, VH, VV")),
        }
    }
}

impl PolPair {
    pub fn photons(&self) -> [PhotonInput; 2] {
        [self.0[0].into(), self.0[1].into()]
    }

    pub fn code(&self) -> String {
        self.0
            .iter()
            .map(|p| if *p == Polarization::H { 'H' } else { 'V' })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LobmArg(pub LobmModel);

impl FromStr for LobmArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [a, b] = parts.as_slice() else {
            return Err(format!("`{s}` must name two Bell outcomes separated by a comma"));
        };
        let a: BellOutcome = a.parse().map_err(|e| format!("{e}"))?;
        let b: BellOutcome = b.parse().map_err(|e| format!("{e}"))?;
        LobmModel::new([a, b]).map(Self).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn polarizations() {
        assert_eq!("VH".parse::<PolPair>().unwrap().code(), "VH");
        assert!("HX".parse::<PolPair>().is_err());
        assert!("H".parse::<PolPair>().is_err());
        assert!("HHH".parse::<PolPair>().is_err());
    }

    #[test]
    fn prob_lists() {
        let p: ProbList = "0.9".parse().unwrap();
        assert_eq!(p.expand(4, "gate-p").unwrap(), [0.9; 4]);
        let p: ProbList = "0.9,0.8".parse().unwrap();
        assert_eq!(p.expand(2, "gate-p").unwrap(), [0.9, 0.8]);
        assert!(p.expand(4, "gate-p").is_err());
        assert!("1.5".parse::<ProbList>().is_err());
    }

    #[test]
    fn lobm() {
        let l: LobmArg = "psi_plus, psi_minus".parse().unwrap();
        assert_eq!(l.0.distinguishable(), [BellOutcome::PsiPlus, BellOutcome::PsiMinus]);
        assert!("psi_plus,psi_plus".parse::<LobmArg>().is_err());
        assert!("psi_plus".parse::<LobmArg>().is_err());
    }

    #[test]
    fn parses_examples() {
        let cli = Cli::try_parse_from(["cfnet", "sweep", "--n", "0..3", "--etaD", "0.8..1.0:0.05"]).unwrap();
        let Command::Sweep(s) = cli.command else { panic!() };
        assert_eq!(s.n.values.len(), 4);
        assert_eq!(s.eta_d.unwrap().values.len(), 5);
        assert!(Cli::try_parse_from(["cfnet", "sweep", "--n", "1..0"]).is_err());
        assert!(Cli::try_parse_from(["cfnet", "verify", "--pol", "HX"]).is_err());
        assert!(Cli::try_parse_from(["cfnet", "montecarlo", "--n", "1"]).is_err());
        let cli = Cli::try_parse_from([
            "cfnet", "repeater", "--n", "1", "--L0", "1000", "--c", "2e8", "--format", "json",
        ])
        .unwrap();
        assert_eq!(cli.format, Format::Json);
    }
}
