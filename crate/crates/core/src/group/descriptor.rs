use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// JSON-facing description of a group, e.g. `{"type":"symmetric","n":3}` or
/// `{"type":"wreath","inner":{"type":"cyclic","n":2},"n":4}`.
///
/// Generator order (which the `actO`/`actB` lists of a BiSet follow):
/// cyclic `[rotation]`; symmetric `[(0 1), (0 1 … n-1)]` (none for n = 1);
/// dihedral `[rotation, reflection]`; product: the factors' generators
/// concatenated; perm: as given; wreath: the inner generators placed in
/// coordinate 0, then the generators of `S_n`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupDescriptor {
    Trivial,
    Cyclic {
        n: i64,
    },
    Symmetric {
        n: i64,
    },
    Dihedral {
        n: i64,
    },
    Product {
        factors: Vec<GroupDescriptor>,
    },
    #[serde(rename = "perm", alias = "from_permutations")]
    Perm {
        degree: i64,
        generators: Vec<Vec<i64>>,
    },
    Wreath {
        inner: Box<GroupDescriptor>,
        n: i64,
    },
}

fn positive(what: &str, n: i64) -> Result<usize> {
    if n <= 0 {
        Err(Error::usage(format!("{what}: n must be positive, got {n}")))
    } else {
        Ok(n as usize)
    }
}

/// Builds the group a descriptor names.
pub fn make_group(desc: &GroupDescriptor) -> Result<Arc<FiniteGroup>> {
    match desc {
        GroupDescriptor::Trivial => Ok(FiniteGroup::trivial()),
        GroupDescriptor::Cyclic { n } => FiniteGroup::cyclic(positive("cyclic", *n)?),
        GroupDescriptor::Symmetric { n } => FiniteGroup::symmetric(positive("symmetric", *n)?),
        GroupDescriptor::Dihedral { n } => FiniteGroup::dihedral(positive("dihedral", *n)?),
        GroupDescriptor::Product { factors } => {
            let fs = factors.iter().map(make_group).collect::<Result<Vec<_>>>()?;
            FiniteGroup::product(&fs)
        }
        GroupDescriptor::Perm { degree, generators } => {
            let degree = positive("perm degree", *degree)?;
            let gens = generators
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|&x| {
                            usize::try_from(x)
                                .map_err(|_| Error::usage(format!("negative point {x} in generator")))
                        })
                        .collect::<Result<Vec<usize>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::from_permutations(format!("Perm{degree}"), degree, &gens)
        }
        GroupDescriptor::Wreath { inner, n } => {
            let inner = make_group(inner)?;
            FiniteGroup::wreath(&inner, positive("wreath", *n)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_json_forms() {
        let d: GroupDescriptor = serde_json::from_str(r#"{"type":"symmetric","n":3}"#).unwrap();
        assert_eq!(make_group(&d).unwrap().order(), 6);
        let d: GroupDescriptor =
            serde_json::from_str(r#"{"type":"wreath","inner":{"type":"symmetric","n":3},"n":4}"#)
                .unwrap();
        assert_eq!(make_group(&d).unwrap().order(), 31104);
        let d: GroupDescriptor =
            serde_json::from_str(r#"{"type":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}"#)
                .unwrap();
        assert_eq!(make_group(&d).unwrap().order(), 6);
        let d: GroupDescriptor = serde_json::from_str(
            r#"{"type":"product","factors":[{"type":"cyclic","n":2},{"type":"cyclic","n":3}]}"#,
        )
        .unwrap();
        assert_eq!(make_group(&d).unwrap().order(), 6);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(make_group(&GroupDescriptor::Cyclic { n: 0 }).is_err());
        assert!(make_group(&GroupDescriptor::Symmetric { n: -2 }).is_err());
        let w = GroupDescriptor::Wreath {
            inner: Box::new(GroupDescriptor::Trivial),
            n: 0,
        };
        assert!(make_group(&w).is_err());
        let p = GroupDescriptor::Perm {
            degree: 3,
            generators: vec![vec![0, 1]],
        };
        assert!(make_group(&p).is_err());
    }
}
