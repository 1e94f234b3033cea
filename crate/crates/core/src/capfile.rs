//! JSON cap files: field metadata plus normalized homogeneous coordinates.
//!
//! ```json
//! {"q":2,"p":2,"k":1,"modulus":[1,1,1],"form":"diagonal","points":[[0,0,1,1],...]}
//! ```
//!
//! Points are listed in PointId order; serialization is compact JSON followed
//! by a newline, so writing a parsed file reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::FieldElem;
use crate::hermitian::{PointId, ProjPoint, SurfaceModel};

pub const FORM_DIAGONAL: &str = "diagonal";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapFile {
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub form: String,
    pub points: Vec<[u32; 4]>,
}

impl CapFile {
    pub fn from_points(model: &SurfaceModel, points: &[PointId]) -> Self {
        let mut ids = points.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let spec = model.field().spec();
        CapFile {
            q: model.q(),
            p: spec.p,
            k: spec.k,
            modulus: model.field().modulus().to_vec(),
            form: FORM_DIAGONAL.to_string(),
            points: ids
                .iter()
                .map(|&id| model.point(id).coords.map(|c| c.0 as u32))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("cap files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::CapFile(e.to_string()))
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Checks the metadata against `model` and maps the points to ids.
    /// Points must be normalized and lie on U; the cap property is not checked.
    pub fn surface_points(&self, model: &SurfaceModel) -> Result<Vec<PointId>> {
        let spec = model.field().spec();
        if self.q != model.q() || self.p != spec.p || self.k != spec.k {
            return Err(Error::CapFile(format!(
                "field mismatch: file has q={} (p={}, k={}), model has q={}",
                self.q,
                self.p,
                self.k,
                model.q()
            )));
        }
        if self.modulus != model.field().modulus() {
            return Err(Error::CapFile(format!(
                "unexpected modulus {:?}",
                self.modulus
            )));
        }
        if self.form != FORM_DIAGONAL {
            return Err(Error::CapFile(format!("unsupported form `{}`", self.form)));
        }
        let field = model.field();
        let mut ids = Vec::with_capacity(self.points.len());
        for raw in &self.points {
            let mut coords = [FieldElem::ZERO; 4];
            for (slot, &c) in coords.iter_mut().zip(raw) {
                *slot = field.elem(c).ok_or_else(|| {
                    Error::CapFile(format!("coordinate {c} outside GF({})", field.order()))
                })?;
            }
            let p = ProjPoint { coords };
            if ProjPoint::normalize(field, coords) != Some(p) {
                return Err(Error::CapFile(format!("point {raw:?} is not normalized")));
            }
            let id = model
                .id_of(&p)
                .ok_or_else(|| Error::CapFile(format!("point {raw:?} is not on the surface")))?;
            ids.push(id);
        }
        Ok(ids)
    }

    /// Like [`CapFile::surface_points`], additionally requiring a cap.
    pub fn cap_points(&self, model: &SurfaceModel) -> Result<Vec<PointId>> {
        let ids = self.surface_points(model)?;
        model.check_cap(&ids)?;
        Ok(ids)
    }
}
