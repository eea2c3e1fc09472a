use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{tables, WaveletError};

/// Biorthogonal filter pair `Nr.Nd` as published (e.g. `2.2`, `6.8`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiorPair {
    pub decomposition: u8,
    pub reconstruction: u8,
}

impl BiorPair {
    pub const fn new(decomposition: u8, reconstruction: u8) -> Self {
        Self {
            decomposition,
            reconstruction,
        }
    }

    pub fn supported() -> impl Iterator<Item = BiorPair> {
        tables::BIORTHOGONAL.iter().map(|&(a, b, _, _)| BiorPair::new(a, b))
    }

    fn is_supported(self) -> bool {
        Self::supported().any(|p| p == self)
    }
}

impl fmt::Display for BiorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.decomposition, self.reconstruction)
    }
}

/// Mother wavelet family. Names follow the usual short forms:
/// `haar`, `db4`, `sym5`, `coif2`, `bior2.2`, `rbio3.1`, `dmey`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletFamily {
    Haar,
    Daubechies(u8),
    Symlets(u8),
    Coiflets(u8),
    Biorthogonal(BiorPair),
    ReverseBiorthogonal(BiorPair),
    DiscreteMeyer,
}

impl WaveletFamily {
    /// Every supported member, in a fixed order.
    pub fn all() -> Vec<WaveletFamily> {
        let mut out = vec![WaveletFamily::Haar];
        out.extend((1..=20).map(WaveletFamily::Daubechies));
        out.extend((2..=20).map(WaveletFamily::Symlets));
        out.extend((1..=5).map(WaveletFamily::Coiflets));
        out.extend(BiorPair::supported().map(WaveletFamily::Biorthogonal));
        out.extend(BiorPair::supported().map(WaveletFamily::ReverseBiorthogonal));
        out.push(WaveletFamily::DiscreteMeyer);
        out
    }

    /// Haar, Daubechies, Symlets and Coiflets. The FIR Meyer approximation
    /// is only approximately orthogonal and is excluded.
    pub fn is_orthogonal(self) -> bool {
        matches!(
            self,
            WaveletFamily::Haar | WaveletFamily::Daubechies(_) | WaveletFamily::Symlets(_) | WaveletFamily::Coiflets(_)
        )
    }

    pub fn validate(self) -> Result<(), WaveletError> {
        let bad = |family, order, supported: &str| {
            Err(WaveletError::UnsupportedOrder {
                family,
                order,
                supported: supported.to_string(),
            })
        };
        match self {
            WaveletFamily::Daubechies(o) if !(1..=20).contains(&o) => bad("daubechies", o, "1..=20"),
            WaveletFamily::Symlets(o) if !(2..=20).contains(&o) => bad("symlets", o, "2..=20"),
            WaveletFamily::Coiflets(o) if !(1..=5).contains(&o) => bad("coiflets", o, "1..=5"),
            WaveletFamily::Biorthogonal(p) | WaveletFamily::ReverseBiorthogonal(p) if !p.is_supported() => {
                let list: Vec<String> = BiorPair::supported().map(|p| p.to_string()).collect();
                bad("biorthogonal", p.decomposition * 10 + p.reconstruction, &list.join(", "))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WaveletFamily::Haar => f.write_str("haar"),
            WaveletFamily::Daubechies(o) => write!(f, "db{o}"),
            WaveletFamily::Symlets(o) => write!(f, "sym{o}"),
            WaveletFamily::Coiflets(o) => write!(f, "coif{o}"),
            WaveletFamily::Biorthogonal(p) => write!(f, "bior{p}"),
            WaveletFamily::ReverseBiorthogonal(p) => write!(f, "rbio{p}"),
            WaveletFamily::DiscreteMeyer => f.write_str("dmey"),
        }
    }
}

impl FromStr for WaveletFamily {
    type Err = WaveletError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || WaveletError::UnknownName(s.to_string());
        let order = |rest: &str| rest.parse::<u8>().map_err(|_| unknown());
        let pair = |rest: &str| {
            let (a, b) = rest.split_once('.').ok_or_else(unknown)?;
            Ok::<_, WaveletError>(BiorPair::new(order(a)?, order(b)?))
        };
        let family = match s {
            "haar" => WaveletFamily::Haar,
            "dmey" => WaveletFamily::DiscreteMeyer,
            _ if s.starts_with("rbio") => WaveletFamily::ReverseBiorthogonal(pair(&s[4..])?),
            _ if s.starts_with("bior") => WaveletFamily::Biorthogonal(pair(&s[4..])?),
            _ if s.starts_with("coif") => WaveletFamily::Coiflets(order(&s[4..])?),
            _ if s.starts_with("sym") => WaveletFamily::Symlets(order(&s[3..])?),
            _ if s.starts_with("db") => WaveletFamily::Daubechies(order(&s[2..])?),
            _ => return Err(unknown()),
        };
        family.validate()?;
        Ok(family)
    }
}

impl Serialize for WaveletFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WaveletFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
