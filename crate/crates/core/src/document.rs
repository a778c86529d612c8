//! JSON interchange format for triples.
//!
//! Matrices are `{"rows", "cols", "entries"}` with row-major `[re, im]`
//! pairs; exact scalars are strings `"p/q"`, float scalars are numbers.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{build_representation, AlgebraSpec, AssignmentPlan, Representation};
use crate::error::{Error, Result};
use crate::linalg::{AntilinearOp, ComplexMatrix};
use crate::scalar::RealScalar;
use crate::triple::{FiniteRealTriple, KOSigns};
use crate::twist::TwistData;

pub const VERSION: &str = "twisted-triple/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[Value; 2]>,
}

impl MatrixDoc {
    pub fn from_matrix<R: RealScalar>(m: &ComplexMatrix<R>) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re.to_json(), z.im.to_json()]).collect(),
        }
    }

    pub fn to_matrix<R: RealScalar>(&self, what: &str) -> Result<ComplexMatrix<R>> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Invalid(format!(
                "{what}: {} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        let parse =
            |v: &Value, k: usize| R::from_json(v).map_err(|e| Error::Invalid(format!("{what}, entry {k}: {e}")));
        let data = self
            .entries
            .iter()
            .enumerate()
            .map(|(k, [re, im])| Ok(Complex::new(parse(re, k)?, parse(im, k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ComplexMatrix::from_vec(self.rows, self.cols, data)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationDoc {
    Plan(AssignmentPlan),
    /// Images of the real coordinate basis of the algebra.
    Matrices(Vec<MatrixDoc>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealStructureDoc {
    pub u: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistDoc {
    pub perm: Vec<usize>,
    #[serde(default)]
    pub conjugate: Vec<bool>,
    #[serde(default)]
    pub r: Option<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleDocument {
    pub version: String,
    pub mode: String,
    pub algebra: AlgebraSpec,
    pub representation: RepresentationDoc,
    pub dirac: MatrixDoc,
    #[serde(default)]
    pub grading: Option<MatrixDoc>,
    #[serde(default)]
    pub real_structure: Option<RealStructureDoc>,
    #[serde(default)]
    pub signs: Option<KOSigns>,
    #[serde(default)]
    pub twist: Option<TwistDoc>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
}

impl TripleDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if doc.version != VERSION {
            return Err(Error::Invalid(format!("unsupported version {:?}, expected {VERSION:?}", doc.version)));
        }
        if doc.mode != "exact" && doc.mode != "float" {
            return Err(Error::Invalid(format!("mode must be \"exact\" or \"float\", got {:?}", doc.mode)));
        }
        Ok(doc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_triple<R: RealScalar>(t: &FiniteRealTriple<R>, twist: Option<&TwistData<R>>) -> Self {
        let representation = match t.rep().plan() {
            Some(plan) => RepresentationDoc::Plan(plan.clone()),
            None => RepresentationDoc::Matrices(t.rep().basis_matrices().iter().map(MatrixDoc::from_matrix).collect()),
        };
        Self {
            version: VERSION.into(),
            mode: R::MODE.into(),
            algebra: t.spec().clone(),
            representation,
            dirac: MatrixDoc::from_matrix(t.dirac()),
            grading: t.grading().map(MatrixDoc::from_matrix),
            real_structure: t.real_structure().map(|j| RealStructureDoc { u: MatrixDoc::from_matrix(j.matrix()) }),
            signs: t.signs().copied(),
            twist: twist.map(|rho| TwistDoc {
                perm: rho.perm.clone(),
                conjugate: rho.conjugate.clone(),
                r: rho.unitary.as_ref().map(MatrixDoc::from_matrix),
            }),
            metadata: Map::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    /// Builds the triple and twist in scalar type `R`, whatever the declared mode.
    pub fn to_triple<R: RealScalar>(&self) -> Result<(FiniteRealTriple<R>, Option<TwistData<R>>)> {
        self.algebra.validate()?;
        let rep = match &self.representation {
            RepresentationDoc::Plan(plan) => build_representation(&self.algebra, plan)?,
            RepresentationDoc::Matrices(ms) => {
                let ms = ms
                    .iter()
                    .enumerate()
                    .map(|(k, m)| m.to_matrix(&format!("representation matrix {k}")))
                    .collect::<Result<Vec<_>>>()?;
                Representation::from_matrices(&self.algebra, &ms)?
            }
        };
        let d = self.dirac.to_matrix("dirac")?;
        let gamma = self.grading.as_ref().map(|g| g.to_matrix("grading")).transpose()?;
        let j = self
            .real_structure
            .as_ref()
            .map(|j| Ok::<_, Error>(AntilinearOp::new(j.u.to_matrix("real_structure.u")?)?))
            .transpose()?;
        let t = FiniteRealTriple::new(rep, d, gamma, j, self.signs)?;
        let twist = match &self.twist {
            None => None,
            Some(tw) => {
                let conjugate = if tw.conjugate.is_empty() { vec![false; tw.perm.len()] } else { tw.conjugate.clone() };
                let r = tw.r.as_ref().map(|r| r.to_matrix("twist.r")).transpose()?;
                let rho = TwistData { perm: tw.perm.clone(), conjugate, unitary: None }.with_unitary(r);
                rho.check_spec(t.spec())?;
                rho.validate(t.rep())?;
                Some(rho)
            }
        };
        Ok((t, twist))
    }
}
