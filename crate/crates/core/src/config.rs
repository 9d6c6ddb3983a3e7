//! Default hyperparameters for the three model families the method was tuned
//! on (selected on the STS-B dev set from the range 5..=30).

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Gpt2,
    Bert,
    Roberta,
}

impl Preset {
    /// Number of k-means clusters for the cluster-based transform.
    pub fn clusters(self) -> usize {
        match self {
            Preset::Gpt2 => 10,
            Preset::Bert | Preset::Roberta => 27,
        }
    }

    /// Components removed per cluster by the cluster-based transform.
    pub fn cluster_components(self) -> usize {
        match self {
            Preset::Gpt2 => 30,
            Preset::Bert | Preset::Roberta => 12,
        }
    }

    /// Components removed by the global transform.
    pub fn global_components(self) -> usize {
        match self {
            Preset::Gpt2 => 30,
            Preset::Bert => 15,
            Preset::Roberta => 25,
        }
    }
}

impl core::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "gpt2" | "gpt-2" => Ok(Preset::Gpt2),
            "bert" => Ok(Preset::Bert),
            "roberta" => Ok(Preset::Roberta),
            _ => Err(Error::InvalidArgument(alloc::format!("unknown preset {s:?}"))),
        }
    }
}

/// Seeds used for multi-run averages.
pub const DEFAULT_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
