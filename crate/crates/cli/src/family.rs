//! Benchmark graph families and their textual specs.
//!
//! Accepted forms: `single-edge`, `gnp:<p>`, `regular:<d>`, `regular:n/<k>`
//! and `regular:sqrt[+c|-c]` (max degree ⌈√n⌉ shifted by c). Regular
//! degrees are bumped by one when n·d would be odd, and clamped to n−1.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Result};
use qcolor::graph::{gen_gnp, gen_regular_like, gen_single_edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    Fixed(usize),
    /// Δ = ⌊n / k⌋
    Fraction(usize),
    /// Δ = ⌈√n⌉ + offset
    Sqrt(i64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    SingleEdge,
    Gnp(f64),
    Regular(DeltaSpec),
}

impl FamilySpec {
    /// The regular-family degree used at size `n`, after parity adjustment.
    pub fn delta_at(&self, n: usize) -> Option<usize> {
        let spec = match self {
            Self::Regular(spec) => *spec,
            _ => return None,
        };
        let mut d = match spec {
            DeltaSpec::Fixed(d) => d,
            DeltaSpec::Fraction(k) => n / k,
            DeltaSpec::Sqrt(offset) => {
                let root = (n as f64).sqrt().ceil() as i64;
                (root + offset).max(1) as usize
            }
        };
        if n * d % 2 == 1 {
            d += 1;
        }
        Some(d.min(n.saturating_sub(1)))
    }

    /// Builds the size-`n` member of the family for this seed.
    pub fn instantiate(&self, n: usize, seed: u64) -> Result<Graph> {
        match self {
            Self::SingleEdge => {
                if n < 2 {
                    bail!("single-edge family needs n >= 2");
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let i = rng.random_range(0..n);
                let j = loop {
                    let j = rng.random_range(0..n);
                    if j != i {
                        break j;
                    }
                };
                Ok(gen_single_edge(n, i.min(j), i.max(j))?)
            }
            Self::Gnp(p) => Ok(gen_gnp(n, *p, seed)?),
            Self::Regular(_) => {
                let d = self.delta_at(n).unwrap();
                Ok(gen_regular_like(n, d, seed)?)
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SingleEdge => write!(f, "single-edge"),
            Self::Gnp(p) => write!(f, "gnp:{p}"),
            Self::Regular(DeltaSpec::Fixed(d)) => write!(f, "regular:{d}"),
            Self::Regular(DeltaSpec::Fraction(k)) => write!(f, "regular:n/{k}"),
            Self::Regular(DeltaSpec::Sqrt(0)) => write!(f, "regular:sqrt"),
            Self::Regular(DeltaSpec::Sqrt(c)) => write!(f, "regular:sqrt{c:+}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "single-edge" {
            return Ok(Self::SingleEdge);
        }
        if let Some(p) = s.strip_prefix("gnp:") {
            let p: f64 = p
                .parse()
                .map_err(|_| anyhow!("bad gnp probability {p:?}"))?;
            if !(0.0..=1.0).contains(&p) {
                bail!("gnp probability {p} outside [0, 1]");
            }
            return Ok(Self::Gnp(p));
        }
        if let Some(d) = s.strip_prefix("regular:") {
            if let Some(k) = d.strip_prefix("n/") {
                let k: usize = k.parse().map_err(|_| anyhow!("bad fraction {d:?}"))?;
                if k == 0 {
                    bail!("regular:n/0 is not a degree");
                }
                return Ok(Self::Regular(DeltaSpec::Fraction(k)));
            }
            if let Some(rest) = d.strip_prefix("sqrt") {
                let offset: i64 = if rest.is_empty() {
                    0
                } else {
                    rest.parse()
                        .map_err(|_| anyhow!("bad sqrt offset {rest:?}"))?
                };
                return Ok(Self::Regular(DeltaSpec::Sqrt(offset)));
            }
            let d: usize = d.parse().map_err(|_| anyhow!("bad degree {d:?}"))?;
            return Ok(Self::Regular(DeltaSpec::Fixed(d)));
        }
        bail!("unknown family {s:?}; expected single-edge, gnp:<p> or regular:<d|n/k|sqrt[+c]>")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "single-edge",
            "gnp:0.5",
            "regular:16",
            "regular:n/2",
            "regular:sqrt",
            "regular:sqrt+1",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("gnp:1.5".parse::<FamilySpec>().is_err());
        assert!("regular:n/0".parse::<FamilySpec>().is_err());
        assert!("mystery".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn delta_specs_evaluate_with_parity_fix() {
        let half: FamilySpec = "regular:n/2".parse().unwrap();
        assert_eq!(half.delta_at(256), Some(128));
        let sqrt1: FamilySpec = "regular:sqrt+1".parse().unwrap();
        assert_eq!(sqrt1.delta_at(256), Some(17)); // 17*256 is even already
        assert_eq!(sqrt1.delta_at(2048), Some(47)); // ceil(sqrt(2048)) = 46, plus 1
                                                    // 27 * 5 odd -> bumped to 6.
        let fixed: FamilySpec = "regular:5".parse().unwrap();
        assert_eq!(fixed.delta_at(27), Some(6));
    }

    #[test]
    fn instantiation_is_deterministic() {
        let spec: FamilySpec = "gnp:0.3".parse().unwrap();
        assert_eq!(
            spec.instantiate(40, 9).unwrap(),
            spec.instantiate(40, 9).unwrap()
        );
        let single: FamilySpec = "single-edge".parse().unwrap();
        let g = single.instantiate(16, 3).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.max_degree(), 1);
    }
}
