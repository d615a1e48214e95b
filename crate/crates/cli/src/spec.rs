//! JSON file formats: matrices and form specifications.

use jordan2::{Effect2, Herm2, JteForm, Mat2, Pd2, SeqForm, Tolerances, Unitary2};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A 2×2 complex matrix as two row-major real arrays.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub re: [[f64; 2]; 2],
    pub im: [[f64; 2]; 2],
}

impl MatrixJson {
    pub fn to_mat(&self) -> Result<Mat2, CliError> {
        let m = Mat2::from_parts(self.re, self.im);
        if m.is_finite() {
            Ok(m)
        } else {
            Err(CliError::domain("matrix has non-finite entries"))
        }
    }
}

impl From<&Mat2> for MatrixJson {
    fn from(m: &Mat2) -> Self {
        MatrixJson {
            re: m.re(),
            im: m.im(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JteTag {
    B1,
    B2,
    B3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqTag {
    Zero,
    D1,
    D2,
    D3,
    D4,
    Rank1,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
}

/// One form specification file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FormSpec {
    Jte {
        form: JteTag,
        unitary: MatrixJson,
        params: Params,
    },
    Seq {
        form: SeqTag,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unitary: Option<MatrixJson>,
        #[serde(default)]
        params: Params,
    },
    /// `of: [g, f]` is g ∘ f: the last entry is applied first.
    Compose { of: Vec<FormSpec> },
}

/// A validated specification, ready to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Jte(Vec<JteForm>),
    Seq(Vec<SeqForm>),
}

impl Model {
    pub fn is_jte(&self) -> bool {
        matches!(self, Model::Jte(_))
    }

    /// The single form, when the model is not a composition.
    pub fn single_jte(&self) -> Option<JteForm> {
        match self {
            Model::Jte(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    pub fn single_seq(&self) -> Option<SeqForm> {
        match self {
            Model::Seq(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }

    /// Pointwise evaluation on the cone; the last form is applied first.
    pub fn eval_jte(forms: &[JteForm], a: &Pd2) -> Pd2 {
        forms.iter().rev().fold(*a, |x, f| f.apply(&x))
    }

    pub fn eval_seq(forms: &[SeqForm], a: &Effect2) -> Effect2 {
        forms.iter().rev().fold(*a, |x, f| f.apply_seq(&x))
    }
}

fn param(p: Option<f64>, name: &str, form: &str) -> Result<f64, CliError> {
    match p {
        Some(x) if x.is_finite() => Ok(x),
        Some(_) => Err(CliError::schema(format!(
            "parameter {name} of {form} must be finite"
        ))),
        None => Err(CliError::schema(format!(
            "form {form} needs parameter {name}"
        ))),
    }
}

fn unitary(m: &MatrixJson, tol: &Tolerances) -> Result<Unitary2, CliError> {
    Unitary2::with_tol(m.to_mat()?, tol.eq).map_err(CliError::from_core)
}

impl FormSpec {
    pub fn parse(text: &str) -> Result<FormSpec, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::schema(format!("invalid form specification: {e}")))
    }

    pub fn to_model(&self, tol: &Tolerances) -> Result<Model, CliError> {
        match self {
            FormSpec::Jte {
                form,
                unitary: u,
                params,
            } => {
                let u = unitary(u, tol)?;
                let f = match form {
                    JteTag::B1 => JteForm::B1 {
                        u,
                        c: param(params.c, "c", "b1")?,
                    },
                    JteTag::B2 => JteForm::B2 {
                        v: u,
                        d: param(params.d, "d", "b2")?,
                    },
                    JteTag::B3 => JteForm::B3 {
                        w: u,
                        c1: param(params.c1, "c1", "b3")?,
                        c2: param(params.c2, "c2", "b3")?,
                    },
                };
                Ok(Model::Jte(vec![f]))
            }
            FormSpec::Seq {
                form,
                unitary: u,
                params,
            } => {
                let need_u = || match u {
                    Some(m) => unitary(m, tol),
                    None => Err(CliError::schema("sequential form needs a unitary")),
                };
                let f = match form {
                    SeqTag::Zero => SeqForm::Zero,
                    SeqTag::D1 => SeqForm::D1 {
                        u: need_u()?,
                        c: param(params.c, "c", "d1")?,
                    },
                    SeqTag::D2 => SeqForm::D2 { v: need_u()? },
                    SeqTag::D3 => SeqForm::D3 {
                        v: need_u()?,
                        d: param(params.d, "d", "d3")?,
                    },
                    SeqTag::D4 => SeqForm::D4 {
                        w: need_u()?,
                        c1: param(params.c1, "c1", "d4")?,
                        c2: param(params.c2, "c2", "d4")?,
                    },
                    SeqTag::Rank1 => SeqForm::RankOneImage {
                        w: need_u()?,
                        c: param(params.c, "c", "rank1")?,
                    },
                };
                f.validate().map_err(|e| CliError::schema(e.to_string()))?;
                Ok(Model::Seq(vec![f]))
            }
            FormSpec::Compose { of } => {
                if of.is_empty() {
                    return Err(CliError::schema("compose needs at least one form"));
                }
                let parts = of
                    .iter()
                    .map(|s| s.to_model(tol))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut jte = Vec::new();
                let mut seq = Vec::new();
                for p in parts {
                    match p {
                        Model::Jte(v) => jte.extend(v),
                        Model::Seq(v) => seq.extend(v),
                    }
                }
                match (jte.is_empty(), seq.is_empty()) {
                    (false, true) => Ok(Model::Jte(jte)),
                    (true, false) => Ok(Model::Seq(seq)),
                    _ => Err(CliError::schema(
                        "compose mixes cone forms and effect forms",
                    )),
                }
            }
        }
    }

    pub fn from_jte(form: &JteForm) -> FormSpec {
        let (tag, params) = match *form {
            JteForm::B1 { c, .. } => (
                JteTag::B1,
                Params {
                    c: Some(c),
                    ..Default::default()
                },
            ),
            JteForm::B2 { d, .. } => (
                JteTag::B2,
                Params {
                    d: Some(d),
                    ..Default::default()
                },
            ),
            JteForm::B3 { c1, c2, .. } => (
                JteTag::B3,
                Params {
                    c1: Some(c1),
                    c2: Some(c2),
                    ..Default::default()
                },
            ),
        };
        FormSpec::Jte {
            form: tag,
            unitary: form.unitary().mat().into(),
            params,
        }
    }

    pub fn from_seq(form: &SeqForm) -> FormSpec {
        let p = Params::default();
        let (tag, u, params) = match *form {
            SeqForm::Zero => (SeqTag::Zero, None, p),
            SeqForm::D1 { u, c } => (SeqTag::D1, Some(u), Params { c: Some(c), ..p }),
            SeqForm::D2 { v } => (SeqTag::D2, Some(v), p),
            SeqForm::D3 { v, d } => (SeqTag::D3, Some(v), Params { d: Some(d), ..p }),
            SeqForm::D4 { w, c1, c2 } => (
                SeqTag::D4,
                Some(w),
                Params {
                    c1: Some(c1),
                    c2: Some(c2),
                    ..p
                },
            ),
            SeqForm::RankOneImage { w, c } => (SeqTag::Rank1, Some(w), Params { c: Some(c), ..p }),
        };
        FormSpec::Seq {
            form: tag,
            unitary: u.map(|u| u.mat().into()),
            params,
        }
    }
}

/// Reads a matrix for `apply`: positive definite for cone models, an effect
/// for effect models.
pub enum Input {
    Cone(Pd2),
    Effect(Effect2),
}

pub fn parse_matrix(text: &str) -> Result<MatrixJson, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::schema(format!("invalid matrix: {e}")))
}

pub fn matrix_input(m: &MatrixJson, model: &Model, tol: &Tolerances) -> Result<Input, CliError> {
    let h = Herm2::with_tol(m.to_mat()?, tol.herm).map_err(CliError::from_core)?;
    if model.is_jte() {
        Pd2::with_tol(h, tol.pd)
            .map(Input::Cone)
            .map_err(CliError::from_core)
    } else {
        Effect2::with_tol(h, tol.pd)
            .map(Input::Effect)
            .map_err(CliError::from_core)
    }
}
