//! Bit-exact text formats for loops, factor specs, and factorization
//! results. Scalars use the "a/b+c/d*i" syntax; documents round-trip
//! byte-identically once canonicalized.

use serde::{Deserialize, Serialize};

use ratloop::error::{Error, Result};
use ratloop::exact::poly::Poly;
use ratloop::exact::ratfun::Rf;
use ratloop::exact::scalar::Gq;
use ratloop::factorize::{AuditStep, FactorEntry, FactorSpec, FactorizationResult};
use ratloop::linalg::matrix::VecC;
use ratloop::linalg::subspace::Subspace;
use ratloop::loops::{GroupContext, GroupKind, MLoop, TwistContext, TwistFlavor};
use ratloop::simple::{SimpleFactorSpec, TwistedQSpec};

fn scalar_to_string(x: &Gq) -> String {
    x.to_string()
}

fn parse_scalar(s: &str) -> Result<Gq> {
    s.parse()
}

fn vec_to_strings(v: &[Gq]) -> Vec<String> {
    v.iter().map(scalar_to_string).collect()
}

fn parse_vec(v: &[String]) -> Result<VecC> {
    v.iter().map(|s| parse_scalar(s)).collect()
}

fn subspace_to_columns(s: &Subspace) -> Vec<Vec<String>> {
    s.basis_vectors().iter().map(|v| vec_to_strings(v)).collect()
}

fn parse_subspace(ambient: usize, cols: &[Vec<String>]) -> Result<Subspace> {
    let vs: Vec<VecC> = cols
        .iter()
        .map(|c| {
            let v = parse_vec(c)?;
            if v.len() != ambient {
                return Err(Error::ParseError(format!(
                    "column length {} does not match ambient {}",
                    v.len(),
                    ambient
                )));
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(Subspace::from_vectors(ambient, &vs))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DenFactorDoc {
    pub root: String,
    pub mult: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct RfDoc {
    /// Numerator coefficients, ascending degree.
    pub num: Vec<String>,
    pub den: Vec<DenFactorDoc>,
    pub scale: String,
}

impl RfDoc {
    pub fn from_rf(f: &Rf) -> RfDoc {
        RfDoc {
            num: f.numer().coeffs().iter().map(scalar_to_string).collect(),
            den: f
                .denom_factors()
                .iter()
                .map(|(root, mult)| DenFactorDoc {
                    root: scalar_to_string(root),
                    mult: *mult,
                })
                .collect(),
            scale: scalar_to_string(f.scale()),
        }
    }

    pub fn to_rf(&self) -> Result<Rf> {
        let coeffs: VecC = self.num.iter().map(|s| parse_scalar(s)).collect::<Result<_>>()?;
        let denom: Vec<(Gq, u32)> = self
            .den
            .iter()
            .map(|d| {
                if d.mult == 0 {
                    return Err(Error::ParseError("zero multiplicity".into()));
                }
                Ok((parse_scalar(&d.root)?, d.mult))
            })
            .collect::<Result<_>>()?;
        Ok(Rf::from_parts(
            parse_scalar(&self.scale)?,
            Poly::new(coeffs),
            denom,
        ))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct TwistDoc {
    pub flavor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl TwistDoc {
    pub fn from_flavor(f: TwistFlavor) -> TwistDoc {
        match f {
            TwistFlavor::SoGrassmannian { k } => TwistDoc {
                flavor: "grassmannian".into(),
                k: Some(k),
            },
            TwistFlavor::SoUnitary => TwistDoc {
                flavor: "unitary".into(),
                k: None,
            },
            TwistFlavor::G2So4 => TwistDoc {
                flavor: "g2so4".into(),
                k: None,
            },
            TwistFlavor::CspUnitary => TwistDoc {
                flavor: "cspu".into(),
                k: None,
            },
        }
    }

    pub fn to_flavor(&self) -> Result<TwistFlavor> {
        match self.flavor.as_str() {
            "grassmannian" => Ok(TwistFlavor::SoGrassmannian {
                k: self
                    .k
                    .ok_or_else(|| Error::ParseError("grassmannian twist needs k".into()))?,
            }),
            "unitary" => Ok(TwistFlavor::SoUnitary),
            "g2so4" => Ok(TwistFlavor::G2So4),
            "cspu" => Ok(TwistFlavor::CspUnitary),
            other => Err(Error::ParseError(format!("unknown twist flavor: {other}"))),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct LoopDoc {
    pub group: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistDoc>,
    pub entries: Vec<Vec<RfDoc>>,
}

pub fn group_kind(group: &str, n: usize) -> Result<GroupKind> {
    match group {
        "gl" => Ok(GroupKind::UnitaryGl(n)),
        "so" => Ok(GroupKind::OrthogonalSo(n)),
        "csp" => Ok(GroupKind::ConformalSymplectic(n)),
        "g2" => {
            if n != 7 {
                return Err(Error::ParseError(
                    "the exceptional group acts on dimension 7".into(),
                ));
            }
            Ok(GroupKind::G2Fund)
        }
        other => Err(Error::ParseError(format!("unknown group tag: {other}"))),
    }
}

pub fn group_tag(kind: GroupKind) -> (&'static str, usize) {
    match kind {
        GroupKind::UnitaryGl(n) => ("gl", n),
        GroupKind::OrthogonalSo(n) => ("so", n),
        GroupKind::ConformalSymplectic(rank) => ("csp", rank),
        GroupKind::G2Fund => ("g2", 7),
    }
}

impl LoopDoc {
    pub fn from_loop(g: &MLoop, kind: GroupKind, twist: Option<TwistFlavor>) -> LoopDoc {
        let (tag, n) = group_tag(kind);
        LoopDoc {
            group: tag.into(),
            n,
            twist: twist.map(TwistDoc::from_flavor),
            entries: (0..g.n())
                .map(|r| (0..g.n()).map(|c| RfDoc::from_rf(g.entry(r, c))).collect())
                .collect(),
        }
    }

    pub fn kind(&self) -> Result<GroupKind> {
        group_kind(&self.group, self.n)
    }

    pub fn to_loop(&self) -> Result<(MLoop, GroupContext, Option<TwistContext>)> {
        let kind = self.kind()?;
        let ambient = kind.ambient();
        if self.entries.len() != ambient
            || self.entries.iter().any(|row| row.len() != ambient)
        {
            return Err(Error::ParseError(format!(
                "entry matrix must be {ambient} x {ambient}"
            )));
        }
        let mut parsed: Vec<Rf> = Vec::with_capacity(ambient * ambient);
        for row in &self.entries {
            for doc in row {
                parsed.push(doc.to_rf()?);
            }
        }
        let mut iter = parsed.into_iter();
        let g = MLoop::from_fn(ambient, |_, _| iter.next().unwrap());
        let twist = match &self.twist {
            Some(t) => Some(TwistContext::new(t.to_flavor()?)),
            None => None,
        };
        Ok((g, GroupContext::new(kind), twist))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct SpecDoc {
    pub variant: String,
    pub alpha: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<String>>,
}

impl SpecDoc {
    pub fn from_spec(spec: &SimpleFactorSpec) -> SpecDoc {
        let alpha = scalar_to_string(spec.alpha());
        match spec {
            SimpleFactorSpec::Gl { w, .. } => SpecDoc {
                variant: "gl".into(),
                alpha,
                subspace: Some(subspace_to_columns(w)),
                line: None,
                plane: None,
                l: None,
                k: None,
            },
            SimpleFactorSpec::Csp { w, .. } => SpecDoc {
                variant: "csp".into(),
                alpha,
                subspace: Some(subspace_to_columns(w)),
                line: None,
                plane: None,
                l: None,
                k: None,
            },
            SimpleFactorSpec::So { line, .. } => SpecDoc {
                variant: "so".into(),
                alpha,
                subspace: None,
                line: Some(vec_to_strings(&line.basis().column(0))),
                plane: None,
                l: None,
                k: None,
            },
            SimpleFactorSpec::G2Plane { plane, .. } => SpecDoc {
                variant: "g2".into(),
                alpha,
                subspace: None,
                line: None,
                plane: Some(subspace_to_columns(plane)),
                l: None,
                k: None,
            },
            SimpleFactorSpec::G2Pair { l, k, .. } => SpecDoc {
                variant: "g2pair".into(),
                alpha,
                subspace: None,
                line: None,
                plane: None,
                l: Some(vec_to_strings(&l.basis().column(0))),
                k: Some(vec_to_strings(&k.basis().column(0))),
            },
        }
    }

    /// `ambient` disambiguates the unitary/symplectic subspace columns.
    pub fn to_spec(&self, ambient: usize) -> Result<SimpleFactorSpec> {
        let alpha = parse_scalar(&self.alpha)?;
        let need = |o: &Option<Vec<Vec<String>>>, what: &str| -> Result<Vec<Vec<String>>> {
            o.clone()
                .ok_or_else(|| Error::ParseError(format!("{} variant needs {what}", self.variant)))
        };
        match self.variant.as_str() {
            "gl" => Ok(SimpleFactorSpec::Gl {
                alpha,
                w: parse_subspace(ambient, &need(&self.subspace, "subspace")?)?,
            }),
            "csp" => Ok(SimpleFactorSpec::Csp {
                alpha,
                w: parse_subspace(ambient, &need(&self.subspace, "subspace")?)?,
            }),
            "so" => {
                let line = self
                    .line
                    .as_ref()
                    .ok_or_else(|| Error::ParseError("so variant needs line".into()))?;
                Ok(SimpleFactorSpec::So {
                    alpha,
                    line: Subspace::line(&parse_vec(line)?),
                })
            }
            "g2" => Ok(SimpleFactorSpec::G2Plane {
                alpha,
                plane: parse_subspace(7, &need(&self.plane, "plane")?)?,
            }),
            "g2pair" => {
                let l = self
                    .l
                    .as_ref()
                    .ok_or_else(|| Error::ParseError("pair variant needs l".into()))?;
                let k = self
                    .k
                    .as_ref()
                    .ok_or_else(|| Error::ParseError("pair variant needs k".into()))?;
                Ok(SimpleFactorSpec::G2Pair {
                    alpha,
                    l: Subspace::line(&parse_vec(l)?),
                    k: Subspace::line(&parse_vec(k)?),
                })
            }
            other => Err(Error::ParseError(format!("unknown variant: {other}"))),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct EntryDoc {
    pub kind: String,
    pub spec: SpecDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverted: bool,
}

impl EntryDoc {
    pub fn from_entry(e: &FactorEntry) -> EntryDoc {
        match &e.spec {
            FactorSpec::Simple(s) => EntryDoc {
                kind: "simple".into(),
                spec: SpecDoc::from_spec(s),
                twist: None,
                inverted: e.inverted,
            },
            FactorSpec::TwistedQ(q) => EntryDoc {
                kind: "q".into(),
                spec: SpecDoc::from_spec(&q.base),
                twist: Some(TwistDoc::from_flavor(q.twist.flavor)),
                inverted: e.inverted,
            },
        }
    }

    pub fn to_entry(&self, ambient: usize) -> Result<FactorEntry> {
        let spec = self.spec.to_spec(ambient)?;
        match self.kind.as_str() {
            "simple" => Ok(FactorEntry {
                spec: FactorSpec::Simple(spec),
                inverted: self.inverted,
            }),
            "q" => {
                let twist = self
                    .twist
                    .as_ref()
                    .ok_or_else(|| Error::ParseError("q entry needs a twist".into()))?
                    .to_flavor()?;
                Ok(FactorEntry {
                    spec: FactorSpec::TwistedQ(TwistedQSpec {
                        base: spec,
                        twist: TwistContext::new(twist),
                    }),
                    inverted: self.inverted,
                })
            }
            other => Err(Error::ParseError(format!("unknown entry kind: {other}"))),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct FactorsDoc {
    pub group: String,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistDoc>,
    pub factors: Vec<EntryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<AuditStep>>,
}

impl FactorsDoc {
    pub fn from_result(
        res: &FactorizationResult,
        kind: GroupKind,
        twist: Option<TwistFlavor>,
        with_trace: bool,
    ) -> FactorsDoc {
        let (tag, n) = group_tag(kind);
        FactorsDoc {
            group: tag.into(),
            n,
            twist: twist.map(TwistDoc::from_flavor),
            factors: res.factors.iter().map(EntryDoc::from_entry).collect(),
            trace: if with_trace {
                Some(res.steps.clone())
            } else {
                None
            },
        }
    }

    pub fn to_entries(&self) -> Result<Vec<FactorEntry>> {
        let kind = group_kind(&self.group, self.n)?;
        self.factors
            .iter()
            .map(|e| e.to_entry(kind.ambient()))
            .collect()
    }
}

/// Canonical serialization: pretty JSON with a trailing newline, so equal
/// documents are byte-identical.
pub fn emit<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}
