use serde::{Deserialize, Serialize};

use super::{FeasibleSet, Metadata, Objective, PNorm, ProblemInstance};
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    PiecewiseLinear,
    LeastSquares,
    Logistic,
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingKind {
    /// Entropy smoothing of a piecewise-linear maximum.
    Entropy,
    /// The piecewise-linear data read as the smooth entropy-regularised
    /// maximum (temperature 1), extra-smoothed by raising the temperature.
    AdjointEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothingSpec {
    pub kind: SmoothingKind,
}

/// JSON form of a problem instance.
///
/// For `least_squares`, `A` and `b` hold `X` and `y`. Certificates in
/// `metadata` override the ones computed at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDoc {
    pub kind: ProblemKind,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_norm: Option<PNorm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<FeasibleSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_slb: Option<f64>,
    #[serde(default)]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<SmoothingSpec>,
}

impl ProblemDoc {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn matrix(&self) -> Result<Matrix> {
        let rows = self
            .a
            .clone()
            .ok_or_else(|| Error::invalid(format!("{:?} problem needs \"A\"", self.kind)))?;
        Matrix::from_rows(rows)
    }

    fn vector_b(&self, m: usize) -> Vec<f64> {
        self.b.clone().unwrap_or_else(|| vec![0.0; m])
    }

    /// Builds the base instance: the objective the smoothing family (if any)
    /// is derived from.
    pub fn build(&self) -> Result<ProblemInstance> {
        let base = match self.kind {
            ProblemKind::PiecewiseLinear => {
                let a = self.matrix()?;
                let b = self.vector_b(a.rows());
                let set = self.set.clone().unwrap_or(FeasibleSet::full(a.cols()));
                let f_slb = self
                    .f_slb
                    .ok_or_else(|| Error::invalid("piecewise_linear problem needs \"f_slb\""))?;
                match self.smoothing.map(|s| s.kind) {
                    Some(SmoothingKind::AdjointEntropy) => {
                        if b.len() != a.rows() {
                            return Err(Error::DimensionMismatch {
                                expected: a.rows(),
                                got: b.len(),
                            });
                        }
                        let l = a.spectral_norm(1e-13).powi(2);
                        let meta = Metadata {
                            lipschitz_l: (l > 0.0).then_some(l),
                            ..Metadata::default()
                        };
                        ProblemInstance::new(
                            Objective::LogSumExp {
                                a,
                                b,
                                temperature: 1.0,
                            },
                            set,
                            f_slb,
                            meta,
                        )?
                    }
                    _ => ProblemInstance::piecewise_linear(a, b, set, f_slb)?,
                }
            }
            ProblemKind::LeastSquares => {
                let x = self.matrix()?;
                let y = self
                    .b
                    .clone()
                    .ok_or_else(|| Error::invalid("least_squares problem needs \"b\" (the response y)"))?;
                let p = ProblemInstance::least_squares(
                    x,
                    y,
                    self.lambda.unwrap_or(0.0),
                    self.p_norm.unwrap_or(PNorm::L2),
                    self.r.unwrap_or(2.0),
                )?
                .with_f_slb(self.f_slb.unwrap_or(0.0))?;
                self.check_set(&p)?;
                if self.metadata.f_star.is_none() {
                    match p.clone().certify_quadratic() {
                        Ok(c) => c,
                        Err(e @ Error::NotStrictLowerBound { .. }) => return Err(e),
                        Err(_) => p,
                    }
                } else {
                    p
                }
            }
            ProblemKind::Logistic => {
                let p = ProblemInstance::logistic(self.matrix()?)?.with_f_slb(self.f_slb.unwrap_or(0.0))?;
                self.check_set(&p)?;
                p
            }
            ProblemKind::Counterexample => {
                let p = ProblemInstance::counterexample()?;
                match self.f_slb {
                    Some(v) => p.with_f_slb(v)?,
                    None => p,
                }
            }
        };
        if self.smoothing.is_some() && self.kind != ProblemKind::PiecewiseLinear {
            return Err(Error::Incompatible(
                "smoothing blocks apply to piecewise_linear problems only".into(),
            ));
        }
        let m = &self.metadata;
        let base_meta = base.metadata().clone();
        let merged = Metadata {
            f_star: m.f_star.or(base_meta.f_star),
            f_star_derived: if m.f_star.is_some() { m.f_star_derived } else { base_meta.f_star_derived },
            lipschitz_m: m.lipschitz_m.or(base_meta.lipschitz_m),
            lipschitz_l: m.lipschitz_l.or(base_meta.lipschitz_l),
            growth_g: m.growth_g.or(base_meta.growth_g),
            opt_set: m.opt_set.clone().or(base_meta.opt_set),
        };
        base.with_metadata(merged)
    }

    /// Loss-function problems live on the full space.
    fn check_set(&self, p: &ProblemInstance) -> Result<()> {
        match &self.set {
            Some(s) if *s != FeasibleSet::full(p.dim()) => Err(Error::Incompatible(format!(
                "{:?} problems are defined on the full space",
                self.kind
            ))),
            _ => Ok(()),
        }
    }

    /// Inverse of [`ProblemDoc::build`]. Log-sum-exp objectives round-trip
    /// only at temperature 1, as piecewise-linear data with an
    /// `adjoint_entropy` block.
    pub fn from_instance(p: &ProblemInstance) -> Option<Self> {
        let mut doc = ProblemDoc {
            kind: ProblemKind::PiecewiseLinear,
            a: None,
            b: None,
            lambda: None,
            p_norm: None,
            r: None,
            set: Some(p.set().clone()),
            f_slb: Some(p.f_slb()),
            metadata: p.metadata().clone(),
            smoothing: None,
        };
        match p.objective() {
            Objective::PiecewiseLinear { a, b } => {
                doc.a = Some(a.to_rows());
                doc.b = Some(b.clone());
            }
            Objective::LogSumExp { a, b, temperature } if *temperature == 1.0 => {
                doc.a = Some(a.to_rows());
                doc.b = Some(b.clone());
                doc.smoothing = Some(SmoothingSpec {
                    kind: SmoothingKind::AdjointEntropy,
                });
            }
            Objective::LogSumExp { .. } => return None,
            Objective::LeastSquares {
                x,
                y,
                lambda,
                p_norm,
                r,
            } => {
                doc.kind = ProblemKind::LeastSquares;
                doc.a = Some(x.to_rows());
                doc.b = Some(y.clone());
                doc.lambda = Some(*lambda);
                doc.p_norm = Some(*p_norm);
                doc.r = Some(*r);
            }
            Objective::Logistic { a } => {
                doc.kind = ProblemKind::Logistic;
                doc.a = Some(a.to_rows());
            }
            Objective::Counterexample => {
                doc.kind = ProblemKind::Counterexample;
                doc.set = None;
            }
        }
        Some(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::catalog;

    #[test]
    fn abs_value_from_json() {
        let doc = ProblemDoc::from_json(
            r#"{"kind":"piecewise_linear","A":[[1.0],[-1.0]],"b":[0,0],"f_slb":-1,
                "metadata":{"f_star":0,"growth_G":1,"opt_set":{"type":"box","lower":[0],"upper":[0]}}}"#,
        )
        .unwrap();
        let p = doc.build().unwrap();
        assert_eq!(p.value(&[-2.5]), 2.5);
        assert_eq!(p.lipschitz_m(), Some(1.0));
        assert_eq!(p.dist_to_opt(&[3.0]), Some(3.0));
    }

    #[test]
    fn unknown_kind_and_missing_fields_rejected() {
        assert!(ProblemDoc::from_json(r#"{"kind":"quadratic"}"#).is_err());
        let doc = ProblemDoc::from_json(r#"{"kind":"piecewise_linear","A":[[1.0]]}"#).unwrap();
        assert!(doc.build().is_err());
        let doc = ProblemDoc::from_json(r#"{"kind":"logistic","A":[[1.0]],"smoothing":{"kind":"entropy"}}"#).unwrap();
        assert!(matches!(doc.build(), Err(Error::Incompatible(_))));
    }

    #[test]
    fn least_squares_gets_closed_form_certificates() {
        let doc = ProblemDoc::from_json(r#"{"kind":"least_squares","A":[[1.0],[1.0]],"b":[0,2]}"#).unwrap();
        let p = doc.build().unwrap();
        assert!((p.f_star().unwrap() - 1.0).abs() < 1e-14);
        assert!((p.growth_g().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn adjoint_block_builds_smooth_base() {
        let doc = ProblemDoc::from_json(
            r#"{"kind":"piecewise_linear","A":[[1.0],[-1.0]],"f_slb":-1,"smoothing":{"kind":"adjoint_entropy"}}"#,
        )
        .unwrap();
        let p = doc.build().unwrap();
        assert!((p.value(&[0.7]) - 0.7f64.cosh().ln()).abs() < 1e-15);
        assert!((p.lipschitz_l().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn catalog_round_trips() {
        let mut entries = catalog::nonsmooth_matrix().unwrap();
        entries.extend(catalog::smooth_matrix().unwrap());
        entries.extend(catalog::adjoint_matrix().unwrap());
        for e in entries {
            let doc = ProblemDoc::from_instance(&e.problem).unwrap();
            let back = ProblemDoc::from_json(&doc.to_json().unwrap()).unwrap().build().unwrap();
            assert_eq!(back.objective(), e.problem.objective(), "{}", e.name);
            assert_eq!(back.metadata(), e.problem.metadata(), "{}", e.name);
            assert_eq!(back.f_slb(), e.problem.f_slb());
        }
    }
}
