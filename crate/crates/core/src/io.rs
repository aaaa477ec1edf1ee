//! JSON file formats for groups, actions and matrices.
//!
//! * group: `{"name": s, "order": n, "table": [[..]..], "element_names": [..]?}`,
//!   row-major with `table[a][b] = a*b`;
//! * action: `{"H": group, "K": group, "images": [[..]..]}` where each group is
//!   either inline or a path to a group file (relative paths resolve against
//!   the action file's directory);
//! * matrix: `{"alpha": [..], "beta": [..], "gamma": [..], "delta": [..], "context"?: {..}}`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{ActionError, GroupAction, SdProduct};
use crate::group::{FiniteGroup, GroupError};
use crate::maps::FMap;
use crate::matrix::{EndoMatrix, MatrixError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("group file declares order {declared} but the table has {rows} rows")]
    OrderMismatch { declared: usize, rows: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_names: Option<Vec<String>>,
}

impl GroupFile {
    pub fn from_group(g: &FiniteGroup) -> Self {
        GroupFile {
            name: g.name().to_string(),
            order: g.order(),
            table: g.table().to_vec(),
            element_names: g.element_names().map(<[String]>::to_vec),
        }
    }

    pub fn into_group(self) -> Result<FiniteGroup, IoError> {
        if self.order != self.table.len() {
            return Err(IoError::OrderMismatch {
                declared: self.order,
                rows: self.table.len(),
            });
        }
        Ok(FiniteGroup::from_table(self.name, self.table, self.element_names)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Path(String),
    Inline(GroupFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionFile {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<GroupRef>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<GroupRef>,
    pub images: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub instance: String,
    pub h_order: usize,
    pub k_order: usize,
}

impl ContextInfo {
    pub fn of(p: &SdProduct) -> Self {
        ContextInfo {
            instance: p.name().to_string(),
            h_order: p.h().order(),
            k_order: p.k().order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub gamma: Vec<usize>,
    pub delta: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextInfo>,
}

impl MatrixJson {
    pub fn of(m: &EndoMatrix) -> Self {
        MatrixJson {
            alpha: m.alpha().image().to_vec(),
            beta: m.beta().image().to_vec(),
            gamma: m.gamma().image().to_vec(),
            delta: m.delta().image().to_vec(),
            context: None,
        }
    }

    pub fn with_context(m: &EndoMatrix) -> Self {
        MatrixJson {
            context: Some(ContextInfo::of(m.ctx())),
            ..Self::of(m)
        }
    }

    pub fn into_matrix(self, ctx: &Arc<SdProduct>) -> Result<EndoMatrix, MatrixError> {
        EndoMatrix::from_images(ctx, self.alpha, self.beta, self.gamma, self.delta)
    }
}

pub fn map_json(map: &FMap) -> Vec<usize> {
    map.image().to_vec()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_group(path: &Path) -> Result<FiniteGroup, IoError> {
    read_json::<GroupFile>(path)?.into_group()
}

fn resolve(base: &Path, r: GroupRef) -> Result<FiniteGroup, IoError> {
    match r {
        GroupRef::Inline(g) => g.into_group(),
        GroupRef::Path(p) => {
            let p = PathBuf::from(p);
            let full = if p.is_relative() { base.join(p) } else { p };
            read_group(&full)
        }
    }
}

/// Reads an action file. `h` and `k` override the groups named inside it.
pub fn read_action(path: &Path, h: Option<FiniteGroup>, k: Option<FiniteGroup>) -> Result<SdProduct, IoError> {
    let file: ActionFile = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let missing = |which: &str| IoError::Read {
        path: path.to_path_buf(),
        source: std::io::Error::new(std::io::ErrorKind::InvalidData, format!("no {which} group given")),
    };
    let h = match (h, file.h) {
        (Some(g), _) => g,
        (None, Some(r)) => resolve(base, r)?,
        (None, None) => return Err(missing("H")),
    };
    let k = match (k, file.k) {
        (Some(g), _) => g,
        (None, Some(r)) => resolve(base, r)?,
        (None, None) => return Err(missing("K")),
    };
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "action".into());
    let action = GroupAction::new(Arc::new(h), Arc::new(k), file.images)?;
    Ok(SdProduct::named(name, action)?)
}

pub fn read_matrix(path: &Path, ctx: &Arc<SdProduct>) -> Result<EndoMatrix, IoError> {
    Ok(read_json::<MatrixJson>(path)?.into_matrix(ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn group_file_format() {
        let text = r#"{"name": "Z2", "order": 2, "table": [[0,1],[1,0]], "element_names": ["e","a"]}"#;
        let g = serde_json::from_str::<GroupFile>(text).unwrap().into_group().unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.display(1), "a");
        let back = serde_json::to_string(&GroupFile::from_group(&g)).unwrap();
        assert_eq!(
            back,
            r#"{"name":"Z2","order":2,"table":[[0,1],[1,0]],"element_names":["e","a"]}"#
        );
        let bad = r#"{"name": "x", "order": 3, "table": [[0,1],[1,0]]}"#;
        assert!(matches!(
            serde_json::from_str::<GroupFile>(bad).unwrap().into_group(),
            Err(IoError::OrderMismatch { declared: 3, rows: 2 })
        ));
    }

    #[test]
    fn action_file_with_paths_and_inline() {
        let dir = std::env::temp_dir().join(format!("endomat-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let z3 = GroupFile::from_group(&FiniteGroup::cyclic(3));
        std::fs::write(dir.join("z3.json"), serde_json::to_string(&z3).unwrap()).unwrap();
        let action = serde_json::json!({
            "H": "z3.json",
            "K": {"name": "Z2", "order": 2, "table": [[0,1],[1,0]]},
            "images": [[0,1,2],[0,2,1]],
        });
        let path = dir.join("s3.json");
        std::fs::write(&path, action.to_string()).unwrap();
        let p = read_action(&path, None, None).unwrap();
        assert_eq!(p.group().table(), catalog::dihedral(3).group().table());

        let ctx = Arc::new(p);
        let m = EndoMatrix::identity(&ctx);
        let mpath = dir.join("m.json");
        std::fs::write(&mpath, serde_json::to_string(&MatrixJson::with_context(&m)).unwrap()).unwrap();
        assert_eq!(read_matrix(&mpath, &ctx).unwrap(), m);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn matrix_json_shape() {
        let ctx = Arc::new(catalog::dihedral(3));
        let m = EndoMatrix::identity(&ctx);
        assert_eq!(
            serde_json::to_string(&MatrixJson::of(&m)).unwrap(),
            r#"{"alpha":[0,1,2],"beta":[0,0],"gamma":[0,0,0],"delta":[0,1]}"#
        );
    }
}
