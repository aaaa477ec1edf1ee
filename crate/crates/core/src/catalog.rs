//! Built-in instances `H ⋊ K`.
//!
//! Instance names:
//!
//! | name            | group                                              |
//! |-----------------|----------------------------------------------------|
//! | `trivial`       | `1 ⋊ 1`                                            |
//! | `cyclic:n`      | `Z_n ⋊ 1`                                          |
//! | `klein`         | `Z2 × Z2`                                          |
//! | `dihedral:n`    | `Z_n ⋊ Z2`, generator acting by inversion          |
//! | `direct:m,n`    | `Z_m × Z_n`                                        |
//! | `sdp:n,m,r`     | `Z_n ⋊ Z_m`, generator acting by `x -> r x`        |
//! | `klein-swap`    | `(Z2 × Z2) ⋊ Z2`, generator swapping the factors   |
//! | `s3-direct:m`   | `S3 × Z_m` with `H = S3`                           |
//! | `direct-s3:m`   | `Z_m × S3` with `K = S3`                           |

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{ActionError, GroupAction, SdProduct};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown instance `{0}`")]
    Unknown(String),
    #[error("bad parameters for `{name}`: {reason}")]
    BadParams { name: String, reason: String },
    #[error(transparent)]
    Action(#[from] ActionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instance {
    Trivial,
    Cyclic(usize),
    Klein,
    Dihedral(usize),
    Direct(usize, usize),
    /// `Z_n ⋊ Z_m` with the generator of `Z_m` acting by multiplication by `r`.
    Cyclic2 {
        n: usize,
        m: usize,
        r: usize,
    },
    KleinSwap,
    S3Direct(usize),
    DirectS3(usize),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instance::Trivial => write!(f, "trivial"),
            Instance::Cyclic(n) => write!(f, "cyclic:{n}"),
            Instance::Klein => write!(f, "klein"),
            Instance::Dihedral(n) => write!(f, "dihedral:{n}"),
            Instance::Direct(m, n) => write!(f, "direct:{m},{n}"),
            Instance::Cyclic2 { n, m, r } => write!(f, "sdp:{n},{m},{r}"),
            Instance::KleinSwap => write!(f, "klein-swap"),
            Instance::S3Direct(m) => write!(f, "s3-direct:{m}"),
            Instance::DirectS3(m) => write!(f, "direct-s3:{m}"),
        }
    }
}

impl FromStr for Instance {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, params) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let bad = |reason: &str| CatalogError::BadParams {
            name: s.to_string(),
            reason: reason.to_string(),
        };
        let nums = |count: usize| -> Result<Vec<usize>, CatalogError> {
            let p = params.ok_or_else(|| bad("missing parameters"))?;
            let v: Vec<usize> = p
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(&e.to_string()))?;
            if v.len() != count {
                return Err(bad(&format!("expected {count} parameter(s)")));
            }
            if v.iter().take(2).any(|&x| x == 0) {
                return Err(bad("group orders must be positive"));
            }
            Ok(v)
        };
        let no_params = |inst: Instance| match params {
            None => Ok(inst),
            Some(_) => Err(bad("takes no parameters")),
        };
        match head {
            "trivial" => no_params(Instance::Trivial),
            "klein" => no_params(Instance::Klein),
            "klein-swap" => no_params(Instance::KleinSwap),
            "cyclic" => Ok(Instance::Cyclic(nums(1)?[0])),
            "dihedral" => {
                let n = nums(1)?[0];
                Ok(Instance::Dihedral(n))
            }
            "direct" => {
                let v = nums(2)?;
                Ok(Instance::Direct(v[0], v[1]))
            }
            "sdp" => {
                let v = nums(3)?;
                Ok(Instance::Cyclic2 {
                    n: v[0],
                    m: v[1],
                    r: v[2],
                })
            }
            "s3-direct" => Ok(Instance::S3Direct(nums(1)?[0])),
            "direct-s3" => Ok(Instance::DirectS3(nums(1)?[0])),
            _ => Err(CatalogError::Unknown(s.to_string())),
        }
    }
}

impl Instance {
    pub fn build(&self) -> Result<SdProduct, CatalogError> {
        let name = self.to_string();
        let z = |n: usize| Arc::new(FiniteGroup::cyclic(n));
        let product = match *self {
            Instance::Trivial => SdProduct::named(name, GroupAction::trivial(z(1), z(1)))?,
            Instance::Cyclic(n) => SdProduct::named(name, GroupAction::trivial(z(n), z(1)))?,
            Instance::Klein => SdProduct::named(name, GroupAction::trivial(z(2), z(2)))?,
            Instance::Direct(m, n) => SdProduct::named(name, GroupAction::trivial(z(m), z(n)))?,
            Instance::Dihedral(n) => {
                let inversion: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
                SdProduct::named(name, GroupAction::cyclic(z(n), z(2), &inversion)?)?
            }
            Instance::Cyclic2 { n, m, r } => {
                let mult: Vec<usize> = (0..n).map(|x| x * r % n).collect();
                let action = GroupAction::cyclic(z(n), z(m), &mult).map_err(|e| CatalogError::BadParams {
                    name: name.clone(),
                    reason: format!("x -> {r}x does not define an action of Z{m} on Z{n}: {e}"),
                })?;
                SdProduct::named(name, action)?
            }
            Instance::KleinSwap => {
                let v = Arc::new(
                    FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)).with_name("V4"),
                );
                // (a, b) encoded as 2a + b; the swap fixes 0 and 3
                SdProduct::named(name, GroupAction::cyclic(v, z(2), &[0, 2, 1, 3])?)?
            }
            Instance::S3Direct(m) => {
                let s3 = dihedral(3).group().as_ref().clone().with_name("S3");
                SdProduct::named(name, GroupAction::trivial(Arc::new(s3), z(m)))?
            }
            Instance::DirectS3(m) => {
                let s3 = dihedral(3).group().as_ref().clone().with_name("S3");
                SdProduct::named(name, GroupAction::trivial(z(m), Arc::new(s3)))?
            }
        };
        Ok(product)
    }

    pub fn description(&self) -> String {
        match *self {
            Instance::Trivial => "trivial group as 1 x| 1".into(),
            Instance::Cyclic(n) => format!("Z{n} x| 1"),
            Instance::Klein => "Klein four-group Z2 x Z2".into(),
            Instance::Dihedral(n) => format!("dihedral group of order {}: Z{n} x| Z2 by inversion", 2 * n),
            Instance::Direct(m, n) => format!("direct product Z{m} x Z{n}"),
            Instance::Cyclic2 { n, m, r } => format!("Z{n} x| Z{m}, generator acts by x -> {r}x"),
            Instance::KleinSwap => "(Z2 x Z2) x| Z2 swapping factors (dihedral of order 8)".into(),
            Instance::S3Direct(m) => format!("S3 x Z{m} with nonabelian H = S3"),
            Instance::DirectS3(m) => format!("Z{m} x S3 with nonabelian K = S3"),
        }
    }
}

/// Parses and builds an instance by name.
pub fn instance(name: &str) -> Result<SdProduct, CatalogError> {
    name.parse::<Instance>()?.build()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub instance: Instance,
    pub name: String,
    pub description: String,
}

impl CatalogEntry {
    fn of(instance: Instance) -> Self {
        CatalogEntry {
            name: instance.to_string(),
            description: instance.description(),
            instance,
        }
    }

    pub fn build(&self) -> SdProduct {
        self.instance.build().expect("catalog entries are valid")
    }
}

/// Instances covered by `verify` and `census` when no instance is named.
pub fn default_catalog() -> Vec<CatalogEntry> {
    [
        Instance::Trivial,
        Instance::Cyclic(2),
        Instance::Cyclic(3),
        Instance::Cyclic(4),
        Instance::Cyclic(5),
        Instance::Klein,
        Instance::Dihedral(3),
        Instance::Dihedral(4),
        Instance::Dihedral(5),
        Instance::Cyclic2 { n: 3, m: 4, r: 2 },
        Instance::Cyclic2 { n: 7, m: 3, r: 2 },
        Instance::Direct(3, 2),
        Instance::Direct(2, 4),
        Instance::Direct(4, 2),
    ]
    .into_iter()
    .map(CatalogEntry::of)
    .collect()
}

/// Additional instances with `K` of exponent above 2 receiving nonzero `γ`,
/// a non-normal-complement action, and nonabelian `H` or `K`.
pub fn extended_catalog() -> Vec<CatalogEntry> {
    [
        Instance::Direct(3, 3),
        Instance::Cyclic2 { n: 4, m: 4, r: 3 },
        Instance::KleinSwap,
        Instance::S3Direct(2),
        Instance::DirectS3(2),
    ]
    .into_iter()
    .map(CatalogEntry::of)
    .collect()
}

pub fn trivial() -> SdProduct {
    Instance::Trivial.build().unwrap()
}

pub fn klein() -> SdProduct {
    Instance::Klein.build().unwrap()
}

pub fn dihedral(n: usize) -> SdProduct {
    Instance::Dihedral(n).build().unwrap()
}

pub fn direct(m: usize, n: usize) -> SdProduct {
    Instance::Direct(m, n).build().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::center;

    #[test]
    fn names_round_trip() {
        for entry in default_catalog().into_iter().chain(extended_catalog()) {
            assert_eq!(entry.name.parse::<Instance>().unwrap(), entry.instance);
            let p = entry.build();
            assert_eq!(p.name(), entry.name);
        }
    }

    #[test]
    fn structure_of_named_groups() {
        let d3 = dihedral(3);
        assert_eq!(d3.group().order(), 6);
        assert_eq!(center(d3.group()).len(), 1);
        let d4 = dihedral(4);
        assert_eq!(center(d4.group()).len(), 2);
        let dic = instance("sdp:3,4,2").unwrap();
        assert_eq!(dic.group().order(), 12);
        assert_eq!(dic.action().kernel().members(), &[0, 2]);
        let f21 = instance("sdp:7,3,2").unwrap();
        assert_eq!(center(f21.group()).len(), 1);
        let swap = instance("klein-swap").unwrap();
        assert_eq!(center(swap.group()).len(), 2);
        assert!(!instance("s3-direct:2").unwrap().h().is_abelian());
    }

    #[test]
    fn bad_names() {
        assert!(matches!(instance("nope"), Err(CatalogError::Unknown(_))));
        assert!(matches!(instance("dihedral"), Err(CatalogError::BadParams { .. })));
        assert!(matches!(instance("dihedral:x"), Err(CatalogError::BadParams { .. })));
        assert!(matches!(instance("direct:2"), Err(CatalogError::BadParams { .. })));
        assert!(matches!(instance("cyclic:0"), Err(CatalogError::BadParams { .. })));
        assert!(matches!(instance("klein:2"), Err(CatalogError::BadParams { .. })));
        // 2^3 = 8 != 1 mod 5
        assert!(matches!(instance("sdp:5,3,2"), Err(CatalogError::BadParams { .. })));
    }
}
