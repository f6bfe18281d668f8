//! JSON fixture format for matrices.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows. A fixture
//! document carries the level, the diagram, the basis-order tag and a list of named
//! matrices. Writing then reading a document reproduces every `f64` bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::jonesrep::SectorRep;
use crate::linalg::{c, CMat};

pub const ORDER_TAG: &str = "frozen-lex-path";

pub type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub data: JsonMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFixture {
    pub r: u32,
    pub diagram: String,
    pub order: String,
    pub matrices: Vec<NamedMatrix>,
}

pub fn matrix_to_json(m: &CMat) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn matrix_from_json(data: &JsonMatrix) -> Result<CMat> {
    let n = data.len();
    let m = data.first().map_or(0, Vec::len);
    if data.iter().any(|row| row.len() != m) {
        return Err(domain!("ragged matrix rows"));
    }
    Ok(CMat::from_fn(n, m, |i, j| c(data[i][j][0], data[i][j][1])))
}

impl MatrixFixture {
    /// Projectors `e1..` and generators `sigma1..` of a sector.
    pub fn from_sector(rep: &SectorRep) -> Self {
        let mut matrices = Vec::new();
        for (k, e) in rep.projectors.iter().enumerate() {
            matrices.push(NamedMatrix {
                name: format!("e{}", k + 1),
                data: matrix_to_json(e),
            });
        }
        for (k, g) in rep.generators.iter().enumerate() {
            matrices.push(NamedMatrix {
                name: format!("sigma{}", k + 1),
                data: matrix_to_json(g),
            });
        }
        Self {
            r: rep.ctx.r(),
            diagram: rep.diagram.to_string(),
            order: ORDER_TAG.to_string(),
            matrices,
        }
    }

    pub fn get(&self, name: &str) -> Option<Result<CMat>> {
        self.matrices
            .iter()
            .find(|m| m.name == name)
            .map(|m| matrix_from_json(&m.data))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::FusionContext;
    use crate::jonesrep::build_sector;
    use crate::tableaux::YoungDiagram;
    use proptest::prelude::*;

    #[test]
    fn sector_fixture_round_trips_bit_exactly() {
        let rep = build_sector(YoungDiagram::new(4, 2).unwrap(), &FusionContext::r5()).unwrap();
        let fx = MatrixFixture::from_sector(&rep);
        let back = MatrixFixture::from_json(&fx.to_json()).unwrap();
        assert_eq!(fx, back);
        let g = back.get("sigma3").unwrap().unwrap();
        for (a, b) in g.iter().zip(rep.generators[2].iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        assert_eq!(back.order, ORDER_TAG);
    }

    #[test]
    fn ragged_rejected() {
        let data = vec![vec![[1.0, 0.0]], vec![]];
        assert!(matrix_from_json(&data).is_err());
    }

    proptest! {
        #[test]
        fn arbitrary_floats_round_trip(vals in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 8)) {
            let m = CMat::from_fn(2, 2, |i, j| c(vals[2 * (2 * i + j)], vals[2 * (2 * i + j) + 1]));
            let fx = MatrixFixture { r: 5, diagram: "[2,1]".into(), order: ORDER_TAG.into(),
                matrices: vec![NamedMatrix { name: "m".into(), data: matrix_to_json(&m) }] };
            let back = MatrixFixture::from_json(&fx.to_json()).unwrap();
            prop_assert_eq!(fx, back);
        }
    }
}
